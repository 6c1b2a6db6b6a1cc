//! The frustration-free Motzkin Hamiltonian on short chains.
//!
//! `H` is a sum of local projectors. Every term conserves total `Sz`, so the
//! spectrum is computed one magnetization sector at a time with a dense
//! symmetric eigensolver.

use std::collections::BTreeMap;

use motzkin_core::{Scalar, SiteKind, SpinConfig, StateVector};
use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Largest chain `build_hamiltonian` accepts.
pub const MAX_SITES: usize = 10;
/// Largest chain the eigensolver accepts.
pub const MAX_DENSE_SITES: usize = 8;
/// Eigenvalues below this count toward the kernel.
pub const KERNEL_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainBoundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HamiltonianError {
    #[error("chain length must be even and at least 2, got {0}")]
    InvalidLength(usize),
    #[error("{n_sites} sites exceeds the cap of {cap}")]
    TooLarge { n_sites: usize, cap: usize },
    #[error("t must be positive, got {0}")]
    NonPositiveT(BigRational),
    #[error("state has {got} sites of kind {kind}, expected {expected} spin-1 sites")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        kind: &'static str,
    },
    #[error("state is zero")]
    ZeroState,
    #[error("amplitude {0} has no numeric value")]
    NonNumeric(String),
}

/// One projector acting on `sites` (consecutive, wrapping for the periodic
/// bond), as a dense matrix on their `3^k` local space.
#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub name: String,
    pub sites: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    n_sites: usize,
    t: BigRational,
    boundary: ChainBoundary,
    terms: Vec<LocalTerm>,
    entries: BTreeMap<(usize, usize), f64>,
}

fn local_index(a: i8, b: i8) -> usize {
    ((a + 1) * 3 + (b + 1)) as usize
}

/// `|v⟩⟨v| / ⟨v|v⟩` for `v = |x⟩ - t|y⟩` on a pair of sites.
fn pair_projector(x: (i8, i8), y: (i8, i8), t: f64) -> DMatrix<f64> {
    let mut v = DMatrix::zeros(9, 1);
    v[(local_index(x.0, x.1), 0)] = 1.0;
    v[(local_index(y.0, y.1), 0)] = -t;
    let norm2 = 1.0 + t * t;
    &v * v.transpose() / norm2
}

fn single_site(s: i8) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(3, 3);
    m[((s + 1) as usize, (s + 1) as usize)] = 1.0;
    m
}

/// Row-major index of a spin-1 configuration, site 0 most significant, so
/// indices follow the lexicographic order of configurations.
pub fn config_index(config: &SpinConfig) -> usize {
    config
        .0
        .iter()
        .fold(0, |acc, &s| acc * 3 + (s + 1) as usize)
}

pub fn index_config(mut index: usize, n_sites: usize) -> SpinConfig {
    let mut steps = vec![0i8; n_sites];
    for s in steps.iter_mut().rev() {
        *s = (index % 3) as i8 - 1;
        index /= 3;
    }
    SpinConfig(steps)
}

fn digit(index: usize, site: usize, n_sites: usize) -> usize {
    (index / 3usize.pow((n_sites - 1 - site) as u32)) % 3
}

pub fn build_hamiltonian(
    n_sites: usize,
    t: &BigRational,
    boundary: ChainBoundary,
) -> Result<SparseHamiltonian, HamiltonianError> {
    if n_sites < 2 || n_sites % 2 == 1 {
        return Err(HamiltonianError::InvalidLength(n_sites));
    }
    if n_sites > MAX_SITES {
        return Err(HamiltonianError::TooLarge {
            n_sites,
            cap: MAX_SITES,
        });
    }
    if !t.is_positive() {
        return Err(HamiltonianError::NonPositiveT(t.clone()));
    }
    let tf = ToPrimitive::to_f64(t).expect("finite rational");
    let pi = pair_projector((1, 0), (0, 1), tf)
        + pair_projector((0, -1), (-1, 0), tf)
        + pair_projector((1, -1), (0, 0), tf);

    let bonds = match boundary {
        ChainBoundary::Open => n_sites - 1,
        ChainBoundary::Periodic => n_sites,
    };
    let mut terms: Vec<LocalTerm> = (0..bonds)
        .map(|j| LocalTerm {
            name: format!("Pi_{}", j + 1),
            sites: vec![j, (j + 1) % n_sites],
            matrix: pi.clone(),
        })
        .collect();
    if boundary == ChainBoundary::Open {
        terms.push(LocalTerm {
            name: "boundary_left".into(),
            sites: vec![0],
            matrix: single_site(-1),
        });
        terms.push(LocalTerm {
            name: "boundary_right".into(),
            sites: vec![n_sites - 1],
            matrix: single_site(1),
        });
    }

    let mut h = SparseHamiltonian {
        n_sites,
        t: t.clone(),
        boundary,
        terms,
        entries: BTreeMap::new(),
    };
    let mut entries = BTreeMap::new();
    for k in 0..h.terms.len() {
        for (key, v) in h.term_entries(k) {
            *entries.entry(key).or_insert(0.0) += v;
        }
    }
    entries.retain(|_, v| *v != 0.0);
    h.entries = entries;
    Ok(h)
}

impl SparseHamiltonian {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dimension(&self) -> usize {
        3usize.pow(self.n_sites as u32)
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn boundary(&self) -> ChainBoundary {
        self.boundary
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    /// Nonzero `(row, col) → value` entries.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.entries
    }

    /// Nonzero entries of term `k` embedded in the full space.
    fn term_entries(&self, k: usize) -> Vec<((usize, usize), f64)> {
        let term = &self.terms[k];
        let n = self.n_sites;
        let weights: Vec<usize> = term
            .sites
            .iter()
            .map(|&s| 3usize.pow((n - 1 - s) as u32))
            .collect();
        let local = |index: usize| -> usize {
            term.sites
                .iter()
                .fold(0, |acc, &s| acc * 3 + digit(index, s, n))
        };
        let rest = |index: usize| -> usize {
            term.sites
                .iter()
                .zip(&weights)
                .fold(index, |acc, (&s, &w)| acc - digit(index, s, n) * w)
        };
        let embed = |base: usize, mut loc: usize| -> usize {
            let mut out = base;
            for w in weights.iter().rev() {
                out += (loc % 3) * w;
                loc /= 3;
            }
            out
        };
        let mut out = Vec::new();
        for col in 0..self.dimension() {
            let (lc, base) = (local(col), rest(col));
            for lr in 0..term.matrix.nrows() {
                let v = term.matrix[(lr, lc)];
                if v != 0.0 {
                    out.push(((embed(base, lr), col), v));
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension()];
        for (&(r, c), &h) in &self.entries {
            out[r] += h * v[c];
        }
        out
    }

    /// `Π_k v` for a single term.
    pub fn apply_term(&self, k: usize, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension()];
        for ((r, c), h) in self.term_entries(k) {
            out[r] += h * v[c];
        }
        out
    }

    /// Largest `|H_rc - H_cr|`.
    pub fn asymmetry(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(r, c), &v)| (v - self.entries.get(&(c, r)).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    }

    /// Indices of the configurations with total magnetization `k`.
    pub fn sector_indices(&self, k: i64) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| index_config(i, self.n_sites).sum() == k)
            .collect()
    }

    pub fn sector_matrix(&self, k: i64) -> DMatrix<f64> {
        let idx = self.sector_indices(k);
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut m = DMatrix::zeros(idx.len(), idx.len());
        for (&(r, c), &v) in &self.entries {
            if let (Some(&pr), Some(&pc)) = (pos.get(&r), pos.get(&c)) {
                m[(pr, pc)] = v;
            }
        }
        m
    }

    fn check_dense(&self) -> Result<(), HamiltonianError> {
        if self.n_sites > MAX_DENSE_SITES {
            return Err(HamiltonianError::TooLarge {
                n_sites: self.n_sites,
                cap: MAX_DENSE_SITES,
            });
        }
        Ok(())
    }

    /// Ascending eigenvalues of one sector.
    pub fn sector_eigenvalues(&self, k: i64) -> Result<Vec<f64>, HamiltonianError> {
        self.check_dense()?;
        let m = self.sector_matrix(k);
        if m.nrows() == 0 {
            return Ok(Vec::new());
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, HamiltonianError> {
        let n = self.n_sites as i64;
        let mut all = Vec::with_capacity(self.dimension());
        for k in -n..=n {
            all.extend(self.sector_eigenvalues(k)?);
        }
        all.sort_by(f64::total_cmp);
        Ok(all)
    }

    /// Zero modes per magnetization sector.
    pub fn kernel_by_sector(&self, tol: f64) -> Result<BTreeMap<i64, usize>, HamiltonianError> {
        let n = self.n_sites as i64;
        let mut out = BTreeMap::new();
        for k in -n..=n {
            let zeros = self
                .sector_eigenvalues(k)?
                .iter()
                .filter(|&&e| e < tol)
                .count();
            if zeros > 0 {
                out.insert(k, zeros);
            }
        }
        Ok(out)
    }
}

/// Number of eigenvalues below `tol`.
pub fn kernel_dimension(h: &SparseHamiltonian, tol: f64) -> Result<usize, HamiltonianError> {
    Ok(h.kernel_by_sector(tol)?.values().sum())
}

/// Dense amplitude vector of a spin-1 state in [`config_index`] order.
pub fn dense_vector<S: Scalar>(
    state: &StateVector<S>,
    n_sites: usize,
) -> Result<Vec<f64>, HamiltonianError> {
    if state.sites() != SiteKind::SpinOne || state.n_sites() != n_sites {
        return Err(HamiltonianError::DimensionMismatch {
            expected: n_sites,
            got: state.n_sites(),
            kind: state.sites().name(),
        });
    }
    let mut v = vec![0.0; 3usize.pow(n_sites as u32)];
    for (c, a) in state.iter() {
        v[config_index(c)] = a
            .to_f64()
            .ok_or_else(|| HamiltonianError::NonNumeric(a.to_string()))?;
    }
    Ok(v)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖H ψ‖ / ‖ψ‖`.
pub fn annihilation_residual<S: Scalar>(
    h: &SparseHamiltonian,
    state: &StateVector<S>,
) -> Result<f64, HamiltonianError> {
    let v = dense_vector(state, h.n_sites)?;
    let n = norm(&v);
    if n == 0.0 {
        return Err(HamiltonianError::ZeroState);
    }
    Ok(norm(&h.matvec(&v)) / n)
}

/// `‖Π_k ψ‖ / ‖ψ‖` for every term, in [`SparseHamiltonian::terms`] order.
pub fn term_residuals<S: Scalar>(
    h: &SparseHamiltonian,
    state: &StateVector<S>,
) -> Result<Vec<f64>, HamiltonianError> {
    let v = dense_vector(state, h.n_sites)?;
    let n = norm(&v);
    if n == 0.0 {
        return Err(HamiltonianError::ZeroState);
    }
    Ok((0..h.terms.len())
        .map(|k| norm(&h.apply_term(k, &v)) / n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn two_site_open() {
        let h = build_hamiltonian(2, &q(1, 1), ChainBoundary::Open).unwrap();
        assert_eq!(h.dimension(), 9);
        assert!(h.asymmetry() < 1e-15);
        let ev = h.eigenvalues().unwrap();
        assert!(ev[0] > -1e-12);
        let mut gs = StateVector::new(2, SiteKind::SpinOne);
        gs.accumulate(SpinConfig(vec![0, 0]), 1.0);
        gs.accumulate(SpinConfig(vec![1, -1]), 1.0);
        assert!(annihilation_residual(&h, &gs).unwrap() < 1e-15);
        assert_eq!(kernel_dimension(&h, KERNEL_TOL).unwrap(), 1);
    }

    #[test]
    fn periodic_two_sites_has_five_zero_modes() {
        let h = build_hamiltonian(2, &q(1, 1), ChainBoundary::Periodic).unwrap();
        assert_eq!(kernel_dimension(&h, KERNEL_TOL).unwrap(), 5);
    }

    #[test]
    fn index_round_trip() {
        for i in 0..81 {
            assert_eq!(config_index(&index_config(i, 4)), i);
        }
        assert_eq!(index_config(0, 2), SpinConfig(vec![-1, -1]));
    }

    #[test]
    fn projectors_are_idempotent() {
        let h = build_hamiltonian(2, &q(3, 2), ChainBoundary::Open).unwrap();
        for term in h.terms() {
            let m = &term.matrix;
            assert!((m * m - m).abs().max() < 1e-12, "{}", term.name);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build_hamiltonian(3, &q(1, 1), ChainBoundary::Open),
            Err(HamiltonianError::InvalidLength(3))
        ));
        assert!(matches!(
            build_hamiltonian(12, &q(1, 1), ChainBoundary::Open),
            Err(HamiltonianError::TooLarge { .. })
        ));
        assert!(matches!(
            build_hamiltonian(2, &q(0, 1), ChainBoundary::Open),
            Err(HamiltonianError::NonPositiveT(_))
        ));
        let h = build_hamiltonian(10, &q(1, 1), ChainBoundary::Open).unwrap();
        assert!(h.eigenvalues().is_err());
        let wrong = StateVector::<f64>::new(4, SiteKind::SpinOne);
        assert!(annihilation_residual(&h, &wrong).is_err());
    }
}
