//! Floating-point Schmidt spectra by SVD, and the half-chain entropy table.

use motzkin_core::contraction::{contract_full, ContractionError};
use motzkin_core::network::{pyramid, wrap_fredkin, NetworkError};
use motzkin_core::schmidt::{entanglement_entropy, schmidt_spectrum_exact, SchmidtError};
use motzkin_core::{Scalar, StateVector, TensorSet};
use nalgebra::DMatrix;
use num_rational::BigRational;
use serde::Serialize;

/// Largest chain the entropy table goes up to.
pub const MAX_ENTROPY_SITES: usize = 12;

/// Singular values below this fraction of the largest are dropped.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum SpectrumError {
    #[error("cut {cut} is outside 0..={n_sites}")]
    CutOutOfRange { cut: usize, n_sites: usize },
    #[error("state is zero")]
    ZeroState,
    #[error("amplitude {0} has no numeric value")]
    NonNumeric(String),
    #[error("{n_sites} sites exceeds the cap of {cap}")]
    TooLarge { n_sites: usize, cap: usize },
    #[error(transparent)]
    Schmidt(#[from] SchmidtError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
}

/// Normalised squared singular values across `cut`, largest first.
pub fn schmidt_weights_svd<S: Scalar>(
    state: &StateVector<S>,
    cut: usize,
) -> Result<Vec<f64>, SpectrumError> {
    let n = state.n_sites();
    if cut > n {
        return Err(SpectrumError::CutOutOfRange { cut, n_sites: n });
    }
    let values = state.sites().values();
    let d = values.len();
    let rank_of = |v: i8| values.iter().position(|&x| x == v).unwrap();
    let index = |steps: &[i8]| steps.iter().fold(0usize, |acc, &s| acc * d + rank_of(s));
    let mut m = DMatrix::<f64>::zeros(d.pow(cut as u32), d.pow((n - cut) as u32));
    for (c, a) in state.iter() {
        let v = a
            .to_f64()
            .ok_or_else(|| SpectrumError::NonNumeric(a.to_string()))?;
        m[(index(&c.0[..cut]), index(&c.0[cut..]))] = v;
    }
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Err(SpectrumError::ZeroState);
    }
    let mut w: Vec<f64> = sv
        .iter()
        .filter(|&&s| s > top * RANK_TOL)
        .map(|s| s * s)
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chain {
    Motzkin,
    Fredkin,
}

/// One line of the entropy table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRow {
    pub n_sites: usize,
    pub rank: usize,
    /// Exact Schmidt weights, largest first, as `p/q` strings.
    pub weights: Vec<String>,
    pub entropy_exact: f64,
    pub entropy_svd: f64,
}

/// Half-chain entropy of the network state for `2n = 2, 4, …, max_sites`.
pub fn entropy_table(
    chain: Chain,
    t: &BigRational,
    max_sites: usize,
) -> Result<Vec<EntropyRow>, SpectrumError> {
    if max_sites > MAX_ENTROPY_SITES {
        return Err(SpectrumError::TooLarge {
            n_sites: max_sites,
            cap: MAX_ENTROPY_SITES,
        });
    }
    let set = TensorSet::<BigRational>::standard();
    let mut rows = Vec::new();
    for n in 1..=max_sites / 2 {
        let mut net = pyramid(n, t, &set)?;
        if chain == Chain::Fredkin {
            net = wrap_fredkin(&net, &set)?;
        }
        let state = contract_full(&net)?;
        rows.push(entropy_row(&state)?);
    }
    Ok(rows)
}

pub fn entropy_row(state: &StateVector<BigRational>) -> Result<EntropyRow, SpectrumError> {
    let cut = state.n_sites() / 2;
    let exact = schmidt_spectrum_exact(state, cut)?;
    let svd = schmidt_weights_svd(state, cut)?;
    Ok(EntropyRow {
        n_sites: state.n_sites(),
        rank: exact.rank(),
        weights: exact.weights.iter().map(|w| w.to_string()).collect(),
        entropy_exact: exact.entropy(),
        entropy_svd: entanglement_entropy(&svd),
    })
}
