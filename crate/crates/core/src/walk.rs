//! Lattice walks: enumeration, areas and the exact ground-state vectors built
//! from them.
//!
//! Everything here is brute force on purpose. It is the ground truth the
//! networks are compared against, so it shares no code with them.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

use crate::scalar::Scalar;
use crate::state::{SiteKind, SpinConfig, StateVector};

/// Largest walk length enumerated unless a caller raises the cap.
pub const DEFAULT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("walk length must be a positive even number, got {0}")]
    InvalidLength(usize),
    #[error("walk length {requested} exceeds the enumeration cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("sector {k} is out of range for {n_sites} sites")]
    SectorOutOfRange { k: i64, n_sites: usize },
    #[error("walk is not a valid open walk")]
    NotOpen,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum WalkKind {
    /// Steps in {-1, 0, 1}.
    Motzkin,
    /// Steps in {-1, 1}.
    Dyck,
}

impl WalkKind {
    pub fn steps(self) -> &'static [i8] {
        match self {
            WalkKind::Motzkin => &[-1, 0, 1],
            WalkKind::Dyck => &[-1, 1],
        }
    }

    pub fn site_kind(self) -> SiteKind {
        match self {
            WalkKind::Motzkin => SiteKind::SpinOne,
            WalkKind::Dyck => SiteKind::SpinHalf,
        }
    }
}

/// Which walks are admitted.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Start and end at 0, never below 0.
    Open,
    /// Start at `p`, end at `q`, never below 0.
    Fixed { p: u64, q: u64 },
    /// Start at 0, end at `k`, heights unconstrained.
    NetHeight(i64),
}

impl Boundary {
    fn start(self) -> i64 {
        match self {
            Boundary::Fixed { p, .. } => p as i64,
            _ => 0,
        }
    }

    fn end(self) -> i64 {
        match self {
            Boundary::Open => 0,
            Boundary::Fixed { q, .. } => q as i64,
            Boundary::NetHeight(k) => k,
        }
    }

    fn nonnegative(self) -> bool {
        !matches!(self, Boundary::NetHeight(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Walk {
    steps: Vec<i8>,
    start: i64,
}

impl Walk {
    pub fn new(steps: Vec<i8>, start: i64) -> Self {
        Walk { steps, start }
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `h_0 .. h_len`, one longer than the step list.
    pub fn heights(&self) -> Vec<i64> {
        let mut h = Vec::with_capacity(self.steps.len() + 1);
        let mut cur = self.start;
        h.push(cur);
        for &s in &self.steps {
            cur += s as i64;
            h.push(cur);
        }
        h
    }

    pub fn end(&self) -> i64 {
        self.start + self.steps.iter().map(|&s| s as i64).sum::<i64>()
    }

    pub fn is_open(&self) -> bool {
        self.start == 0 && self.end() == 0 && self.heights().iter().all(|&h| h >= 0)
    }

    pub fn config(&self) -> SpinConfig {
        SpinConfig(self.steps.clone())
    }
}

fn check_length(n_steps: usize, cap: usize) -> Result<(), WalkError> {
    if n_steps == 0 || n_steps % 2 == 1 {
        return Err(WalkError::InvalidLength(n_steps));
    }
    if n_steps > cap {
        return Err(WalkError::CapExceeded {
            requested: n_steps,
            cap,
        });
    }
    Ok(())
}

/// All walks of `n_steps` steps admitted by `boundary`, in lexicographic step
/// order with `-1 < 0 < 1`.
pub fn enumerate_walks(
    n_steps: usize,
    kind: WalkKind,
    boundary: Boundary,
) -> Result<Vec<Walk>, WalkError> {
    enumerate_walks_capped(n_steps, kind, boundary, DEFAULT_CAP)
}

pub fn enumerate_walks_capped(
    n_steps: usize,
    kind: WalkKind,
    boundary: Boundary,
    cap: usize,
) -> Result<Vec<Walk>, WalkError> {
    check_length(n_steps, cap)?;
    let start = boundary.start();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n_steps);
    extend(&mut prefix, start, n_steps, kind, boundary, &mut |steps| {
        out.push(Walk::new(steps.to_vec(), start))
    });
    Ok(out)
}

fn extend(
    prefix: &mut Vec<i8>,
    h: i64,
    n_steps: usize,
    kind: WalkKind,
    boundary: Boundary,
    emit: &mut impl FnMut(&[i8]),
) {
    let left = (n_steps - prefix.len()) as i64;
    if left == 0 {
        if h == boundary.end() {
            emit(prefix);
        }
        return;
    }
    for &s in kind.steps() {
        let next = h + s as i64;
        if boundary.nonnegative() && next < 0 {
            continue;
        }
        let rem = left - 1;
        let gap = (boundary.end() - next).abs();
        // Dyck walks also need the parity of the gap to match.
        if gap > rem || (kind == WalkKind::Dyck && (rem - gap) % 2 != 0) {
            continue;
        }
        prefix.push(s);
        extend(prefix, next, n_steps, kind, boundary, emit);
        prefix.pop();
    }
}

/// Trapezoid area `Σ (h_{x-1} + h_x) / 2` under the walk.
pub fn walk_area(w: &Walk) -> Ratio<i64> {
    let h = w.heights();
    let twice: i64 = h.windows(2).map(|p| p[0] + p[1]).sum();
    Ratio::new(twice, 2)
}

/// Unnormalised `Σ_w t^{A(w)} |w⟩` over open walks of `n_sites` steps.
///
/// Open walks have integer area, so any semiring works. The squared norm is
/// [`StateVector::norm_squared`].
pub fn ground_state_vector<S: Scalar>(
    n_sites: usize,
    t: &S,
    kind: WalkKind,
) -> Result<StateVector<S>, WalkError> {
    let walks = enumerate_walks(n_sites, kind, Boundary::Open)?;
    let mut state = StateVector::new(n_sites, kind.site_kind());
    for w in walks {
        let area = walk_area(&w);
        debug_assert!(area.is_integer());
        state.accumulate(w.config(), t.pow(area.to_integer() as u64));
    }
    Ok(state)
}

/// Equal-weight superposition of all spin-1 configurations with `Σ s = k`.
pub fn periodic_sector_state<S: Scalar>(
    n_sites: usize,
    k: i64,
) -> Result<StateVector<S>, WalkError> {
    if k.unsigned_abs() > n_sites as u64 {
        return Err(WalkError::SectorOutOfRange { k, n_sites });
    }
    let walks = enumerate_walks(n_sites, WalkKind::Motzkin, Boundary::NetHeight(k))?;
    let mut state = StateVector::new(n_sites, SiteKind::SpinOne);
    for w in walks {
        state.accumulate(w.config(), S::one());
    }
    Ok(state)
}

/// Number of open walks of `n_steps` steps, by the usual height DP.
pub fn open_walk_count(n_steps: usize, kind: WalkKind) -> BigInt {
    let mut row = alloc::vec![BigInt::from(0); n_steps + 2];
    row[0] = BigInt::from(1);
    for _ in 0..n_steps {
        let mut next = alloc::vec![BigInt::from(0); n_steps + 2];
        for (h, count) in row.iter().enumerate().take(n_steps + 1) {
            if count.is_zero() {
                continue;
            }
            for &s in kind.steps() {
                let g = h as i64 + s as i64;
                if g >= 0 {
                    next[g as usize] += count;
                }
            }
        }
        row = next;
    }
    row[0].clone()
}
