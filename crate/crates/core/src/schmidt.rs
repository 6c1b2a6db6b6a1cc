//! Exact Schmidt spectra for states whose amplitude matrix is a direct sum of
//! rank-one blocks, which covers every walk superposition at any `t`.
//!
//! Generic states need a numerical SVD; that lives in the std crate.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::Scalar;
use crate::state::{SpinConfig, StateVector};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchmidtError {
    #[error("state is zero")]
    ZeroState,
    #[error("cut {cut} is outside 0..={n_sites}")]
    CutOutOfRange { cut: usize, n_sites: usize },
    #[error("amplitude matrix has a block of rank above one")]
    NotBlockRankOne,
}

/// Normalised squared singular values across a cut, largest first.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum<W> {
    pub weights: Vec<W>,
    pub cut: usize,
}

impl<W: Scalar> SchmidtSpectrum<W> {
    pub fn total(&self) -> W {
        self.weights.iter().cloned().fold(W::zero(), |a, b| a + b)
    }

    pub fn rank(&self) -> usize {
        self.weights.iter().filter(|w| !w.is_zero()).count()
    }

    pub fn entropy(&self) -> f64 {
        let ps: Vec<f64> = self
            .weights
            .iter()
            .map(|w| w.to_f64().expect("numeric weight"))
            .collect();
        entanglement_entropy(&ps)
    }
}

/// `-Σ p ln p` in nats, with `0 ln 0 = 0`.
pub fn entanglement_entropy(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log(p))
        .sum()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Exact spectrum across `cut` (sites `0..cut` versus the rest).
///
/// The amplitude matrix is split into connected blocks of its bipartite
/// support graph; each block must be exactly rank one, and its weight is the
/// sum of its squared entries.
pub fn schmidt_spectrum_exact<S>(
    state: &StateVector<S>,
    cut: usize,
) -> Result<SchmidtSpectrum<BigRational>, SchmidtError>
where
    S: Scalar + Into<BigRational>,
{
    let n = state.n_sites();
    if cut > n {
        return Err(SchmidtError::CutOutOfRange { cut, n_sites: n });
    }
    if state.is_zero() {
        return Err(SchmidtError::ZeroState);
    }

    let mut rows: BTreeMap<SpinConfig, usize> = BTreeMap::new();
    let mut cols: BTreeMap<SpinConfig, usize> = BTreeMap::new();
    let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for (c, a) in state.iter() {
        let left = SpinConfig(c.0[..cut].to_vec());
        let right = SpinConfig(c.0[cut..].to_vec());
        let next = rows.len();
        let r = *rows.entry(left).or_insert(next);
        let next = cols.len();
        let col = *cols.entry(right).or_insert(next);
        entries.insert((r, col), a.clone().into());
    }

    let (nr, nc) = (rows.len(), cols.len());
    let mut uf = UnionFind((0..nr + nc).collect());
    for &(r, c) in entries.keys() {
        uf.union(r, nr + c);
    }

    struct Block {
        rows: Vec<usize>,
        cols: Vec<usize>,
    }
    let mut blocks: BTreeMap<usize, Block> = BTreeMap::new();
    for r in 0..nr {
        let root = uf.find(r);
        blocks
            .entry(root)
            .or_insert_with(|| Block {
                rows: Vec::new(),
                cols: Vec::new(),
            })
            .rows
            .push(r);
    }
    for c in 0..nc {
        let root = uf.find(nr + c);
        blocks
            .entry(root)
            .or_insert_with(|| Block {
                rows: Vec::new(),
                cols: Vec::new(),
            })
            .cols
            .push(c);
    }

    let zero = BigRational::zero();
    let at = |r: usize, c: usize| entries.get(&(r, c)).unwrap_or(&zero);
    let mut weights = Vec::with_capacity(blocks.len());
    let mut total = BigRational::zero();
    for block in blocks.values() {
        let (r0, c0) = block
            .rows
            .iter()
            .flat_map(|&r| block.cols.iter().map(move |&c| (r, c)))
            .find(|&(r, c)| entries.contains_key(&(r, c)))
            .expect("every block has an entry");
        let pivot = at(r0, c0).clone();
        let mut w = BigRational::zero();
        for &r in &block.rows {
            for &c in &block.cols {
                let v = at(r, c);
                // rank one iff every 2x2 minor through the pivot vanishes
                if v * &pivot != at(r, c0) * at(r0, c) {
                    return Err(SchmidtError::NotBlockRankOne);
                }
                w += v * v;
            }
        }
        total += &w;
        weights.push(w);
    }
    for w in &mut weights {
        *w = &*w / &total;
    }
    weights.sort_by(|a, b| b.cmp(a));
    Ok(SchmidtSpectrum { weights, cut })
}

/// Convenience for integer states.
pub fn schmidt_spectrum_integer(
    state: &StateVector<BigInt>,
    cut: usize,
) -> Result<SchmidtSpectrum<BigRational>, SchmidtError> {
    schmidt_spectrum_exact(state, cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::SiteKind;
    use crate::walk::{ground_state_vector, WalkKind};
    use alloc::vec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn motzkin_four_sites() {
        let gs = ground_state_vector(4, &BigInt::from(1), WalkKind::Motzkin).unwrap();
        let spectrum = schmidt_spectrum_integer(&gs, 2).unwrap();
        assert_eq!(spectrum.weights, vec![q(4, 9), q(4, 9), q(1, 9)]);
        let expected = -(8.0 / 9.0) * libm::log(4.0 / 9.0) - (1.0 / 9.0) * libm::log(1.0 / 9.0);
        assert!((spectrum.entropy() - expected).abs() < 1e-12);
    }

    #[test]
    fn two_sites_and_products() {
        let gs = ground_state_vector(2, &BigInt::from(1), WalkKind::Motzkin).unwrap();
        let spectrum = schmidt_spectrum_integer(&gs, 1).unwrap();
        assert_eq!(spectrum.weights, vec![q(1, 2), q(1, 2)]);
        assert!((spectrum.entropy() - core::f64::consts::LN_2).abs() < 1e-15);

        let mut prod = StateVector::new(2, SiteKind::SpinOne);
        for a in [-1i8, 0, 1] {
            for b in [0i8, 1] {
                prod.accumulate(SpinConfig(vec![a, b]), BigInt::from(1));
            }
        }
        let spectrum = schmidt_spectrum_integer(&prod, 1).unwrap();
        assert_eq!(spectrum.weights, vec![q(1, 1)]);
        assert_eq!(spectrum.entropy(), 0.0);
    }

    #[test]
    fn errors() {
        let empty = StateVector::<BigInt>::new(2, SiteKind::SpinOne);
        assert_eq!(
            schmidt_spectrum_integer(&empty, 1),
            Err(SchmidtError::ZeroState)
        );
        let mut bell = StateVector::new(2, SiteKind::SpinOne);
        bell.accumulate(SpinConfig(vec![0, 0]), BigInt::from(1));
        bell.accumulate(SpinConfig(vec![0, 1]), BigInt::from(1));
        bell.accumulate(SpinConfig(vec![1, 0]), BigInt::from(1));
        assert_eq!(
            schmidt_spectrum_integer(&bell, 1),
            Err(SchmidtError::NotBlockRankOne)
        );
        assert!(matches!(
            schmidt_spectrum_integer(&bell, 3),
            Err(SchmidtError::CutOutOfRange { .. })
        ));
    }

    #[test]
    fn entropy_edge_cases() {
        assert_eq!(entanglement_entropy(&[1.0]), 0.0);
        assert_eq!(entanglement_entropy(&[1.0, 0.0]), 0.0);
    }
}
