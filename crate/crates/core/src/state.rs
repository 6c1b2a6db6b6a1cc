//! Sparse state vectors keyed by spin configurations.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::label::{Alphabet, Label};
use crate::scalar::Scalar;

/// Local Hilbert space of every site.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SiteKind {
    /// Spin 1, values {-1, 0, 1}, written `-`, `0`, `+`.
    SpinOne,
    /// Spin 1/2, values ±½ stored as ±1, written `d`, `u`.
    SpinHalf,
}

impl SiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SiteKind::SpinOne => "motzkin",
            SiteKind::SpinHalf => "dyck",
        }
    }

    pub fn values(self) -> &'static [i8] {
        match self {
            SiteKind::SpinOne => &[-1, 0, 1],
            SiteKind::SpinHalf => &[-1, 1],
        }
    }

    pub fn glyph(self, v: i8) -> char {
        match (self, v) {
            (SiteKind::SpinOne, -1) => '-',
            (SiteKind::SpinOne, 0) => '0',
            (SiteKind::SpinOne, 1) => '+',
            (SiteKind::SpinHalf, -1) => 'd',
            (SiteKind::SpinHalf, 1) => 'u',
            _ => '?',
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            SiteKind::SpinOne => Alphabet::Spin,
            SiteKind::SpinHalf => Alphabet::HalfSpin,
        }
    }
}

/// One basis configuration: a step value per site.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SpinConfig(pub Vec<i8>);

impl SpinConfig {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&s| s as i64).sum()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.0.iter().map(|&s| Label::new(s)).collect()
    }

    pub fn render(&self, kind: SiteKind) -> String {
        self.0.iter().map(|&v| kind.glyph(v)).collect()
    }

    /// Parse `+0-0` (spin 1) or `udd` (spin 1/2).
    pub fn parse(s: &str) -> Option<(SpinConfig, SiteKind)> {
        let kind = if s.chars().any(|c| c == 'u' || c == 'd') {
            SiteKind::SpinHalf
        } else {
            SiteKind::SpinOne
        };
        let steps = s
            .chars()
            .map(|c| match (kind, c) {
                (SiteKind::SpinOne, '-') => Some(-1),
                (SiteKind::SpinOne, '0') => Some(0),
                (SiteKind::SpinOne, '+') => Some(1),
                (SiteKind::SpinHalf, 'd') => Some(-1),
                (SiteKind::SpinHalf, 'u') => Some(1),
                _ => None,
            })
            .collect::<Option<Vec<i8>>>()?;
        Some((SpinConfig(steps), kind))
    }
}

impl From<Vec<i8>> for SpinConfig {
    fn from(v: Vec<i8>) -> Self {
        SpinConfig(v)
    }
}

/// Sparse map from configurations to amplitudes; zero amplitudes are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<S> {
    n_sites: usize,
    sites: SiteKind,
    amplitudes: BTreeMap<SpinConfig, S>,
}

impl<S: Scalar> StateVector<S> {
    pub fn new(n_sites: usize, sites: SiteKind) -> Self {
        StateVector {
            n_sites,
            sites,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sites(&self) -> SiteKind {
        self.sites
    }

    /// Adds `value` to the amplitude of `config`.
    ///
    /// # Panics
    /// If the configuration has the wrong length or an out-of-range value.
    pub fn accumulate(&mut self, config: SpinConfig, value: S) {
        assert_eq!(config.len(), self.n_sites, "configuration length");
        assert!(
            config.0.iter().all(|v| self.sites.values().contains(v)),
            "site value outside {:?}",
            self.sites
        );
        if value.is_zero() {
            return;
        }
        match self.amplitudes.entry(config) {
            btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + value;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, config: &SpinConfig) -> S {
        self.amplitudes.get(config).cloned().unwrap_or_else(S::zero)
    }

    pub fn nnz(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SpinConfig, &S)> {
        self.amplitudes.iter()
    }

    /// Σ a², which is the squared norm for the real scalars used here.
    pub fn norm_squared(&self) -> S {
        self.amplitudes
            .values()
            .fold(S::zero(), |acc, a| acc + a.clone() * a.clone())
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> StateVector<T> {
        let mut out = StateVector::new(self.n_sites, self.sites);
        for (c, a) in &self.amplitudes {
            out.accumulate(c.clone(), f(a));
        }
        out
    }

    pub fn scaled(&self, factor: &S) -> StateVector<S> {
        self.map(|a| a.clone() * factor.clone())
    }
}

impl<S: Scalar> fmt::Display for StateVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, a) in &self.amplitudes {
            writeln!(f, "{}  {}", c.render(self.sites), a)?;
        }
        Ok(())
    }
}
