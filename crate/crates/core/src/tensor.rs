//! Sparse tensors with labelled, charge-carrying indices.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::label::{Alphabet, Label};
use crate::scalar::Scalar;
use crate::tiles::{Family, Tile, EAST, WEST};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("label {label} is not in the alphabet of slot {slot}")]
    LabelOutOfAlphabet { slot: usize, label: Label },
    #[error("expected {expected} labels, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("slot {left} ({left_alphabet}) cannot be paired with slot {right} ({right_alphabet})")]
    AlphabetMismatch {
        left: usize,
        right: usize,
        left_alphabet: &'static str,
        right_alphabet: &'static str,
    },
    #[error("slot {0} has no declared orientation")]
    UndeclaredOrientation(usize),
    #[error("slot {0} does not exist or is used twice")]
    BadSlot(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    In,
    Out,
}

/// One tensor index: its label set, direction and charge unit.
///
/// A label `v` carries charge `v * charge_scale`; ω carries none.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSpace {
    pub name: String,
    pub alphabet: Alphabet,
    pub orientation: Option<Orientation>,
    pub charge_scale: i64,
}

impl IndexSpace {
    pub fn new(
        name: &str,
        alphabet: Alphabet,
        orientation: Orientation,
        charge_scale: i64,
    ) -> Self {
        IndexSpace {
            name: String::from(name),
            alphabet,
            orientation: Some(orientation),
            charge_scale,
        }
    }

    /// An index outside the charge bookkeeping.
    pub fn plain(name: &str, alphabet: Alphabet) -> Self {
        IndexSpace {
            name: String::from(name),
            alphabet,
            orientation: None,
            charge_scale: 1,
        }
    }

    pub fn charge(&self, label: Label) -> Option<i64> {
        label.value().map(|v| v as i64 * self.charge_scale)
    }
}

/// Sparse map from label tuples to nonzero scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledTensor<S> {
    indices: Vec<IndexSpace>,
    entries: BTreeMap<Vec<Label>, S>,
}

impl<S: Scalar> LabeledTensor<S> {
    pub fn new(indices: Vec<IndexSpace>) -> Self {
        LabeledTensor {
            indices,
            entries: BTreeMap::new(),
        }
    }

    pub fn indices(&self) -> &[IndexSpace] {
        &self.indices
    }

    pub fn arity(&self) -> usize {
        self.indices.len()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Label>, &S)> {
        self.entries.iter()
    }

    fn validate(&self, key: &[Label]) -> Result<(), TensorError> {
        if key.len() != self.indices.len() {
            return Err(TensorError::ArityMismatch {
                expected: self.indices.len(),
                got: key.len(),
            });
        }
        for (slot, (lab, space)) in key.iter().zip(&self.indices).enumerate() {
            if !space.alphabet.contains(*lab) {
                return Err(TensorError::LabelOutOfAlphabet { slot, label: *lab });
            }
        }
        Ok(())
    }

    /// Sets an entry; a zero value removes it.
    pub fn insert(&mut self, key: Vec<Label>, value: S) -> Result<(), TensorError> {
        self.validate(&key)?;
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// Adds to an entry, dropping it if the sum vanishes.
    pub fn add(&mut self, key: Vec<Label>, value: S) -> Result<(), TensorError> {
        let cur = self.get(&key);
        self.insert(key, cur + value)
    }

    pub fn get(&self, key: &[Label]) -> S {
        self.entries.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn remove_entry(&mut self, key: &[Label]) -> Option<S> {
        self.entries.remove(key)
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&[Label], &S) -> T) -> LabeledTensor<T> {
        let mut out = LabeledTensor::new(self.indices.clone());
        for (k, v) in &self.entries {
            let w = f(k, v);
            if !w.is_zero() {
                out.entries.insert(k.clone(), w);
            }
        }
        out
    }

    /// Multiplies every charge unit by `factor`.
    pub fn rescaled(&self, factor: i64) -> Self {
        let mut out = self.clone();
        for ix in &mut out.indices {
            ix.charge_scale *= factor;
        }
        out
    }

    /// Contracts `slot` with the basis vector `label`, removing the slot.
    pub fn fix(&self, slot: usize, label: Label) -> Result<Self, TensorError> {
        if slot >= self.arity() {
            return Err(TensorError::BadSlot(slot));
        }
        if !self.indices[slot].alphabet.contains(label) {
            return Err(TensorError::LabelOutOfAlphabet { slot, label });
        }
        let mut indices = self.indices.clone();
        indices.remove(slot);
        let mut out: LabeledTensor<S> = LabeledTensor::new(indices);
        for (k, v) in &self.entries {
            if k[slot] == label {
                let mut key = k.clone();
                key.remove(slot);
                out.entries.insert(key, v.clone());
            }
        }
        Ok(out)
    }

    /// Reorders slots so that new slot `i` is old slot `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, TensorError> {
        let mut seen = alloc::vec![false; self.arity()];
        if order.len() != self.arity() {
            return Err(TensorError::ArityMismatch {
                expected: self.arity(),
                got: order.len(),
            });
        }
        for &o in order {
            if o >= self.arity() || seen[o] {
                return Err(TensorError::BadSlot(o));
            }
            seen[o] = true;
        }
        let indices = order.iter().map(|&o| self.indices[o].clone()).collect();
        let mut out: LabeledTensor<S> = LabeledTensor::new(indices);
        for (k, v) in &self.entries {
            out.entries
                .insert(order.iter().map(|&o| k[o]).collect(), v.clone());
        }
        Ok(out)
    }

    /// Sums over the paired slots. The result keeps `self`'s free slots, in
    /// order, followed by `other`'s.
    pub fn contract_pair(
        &self,
        other: &LabeledTensor<S>,
        pairs: &[(usize, usize)],
    ) -> Result<LabeledTensor<S>, TensorError> {
        let mut used_a = alloc::vec![false; self.arity()];
        let mut used_b = alloc::vec![false; other.arity()];
        for &(a, b) in pairs {
            if a >= self.arity() || used_a[a] {
                return Err(TensorError::BadSlot(a));
            }
            if b >= other.arity() || used_b[b] {
                return Err(TensorError::BadSlot(b));
            }
            used_a[a] = true;
            used_b[b] = true;
            let (la, lb) = (self.indices[a].alphabet, other.indices[b].alphabet);
            if la != lb {
                return Err(TensorError::AlphabetMismatch {
                    left: a,
                    right: b,
                    left_alphabet: la.name(),
                    right_alphabet: lb.name(),
                });
            }
        }
        let free_a: Vec<usize> = (0..self.arity()).filter(|&i| !used_a[i]).collect();
        let free_b: Vec<usize> = (0..other.arity()).filter(|&i| !used_b[i]).collect();

        let mut by_shared: BTreeMap<Vec<Label>, Vec<(&Vec<Label>, &S)>> = BTreeMap::new();
        for (k, v) in &other.entries {
            let shared = pairs.iter().map(|&(_, b)| k[b]).collect();
            by_shared.entry(shared).or_default().push((k, v));
        }

        let indices = free_a
            .iter()
            .map(|&i| self.indices[i].clone())
            .chain(free_b.iter().map(|&i| other.indices[i].clone()))
            .collect();
        let mut out: LabeledTensor<S> = LabeledTensor::new(indices);
        for (ka, va) in &self.entries {
            let shared: Vec<Label> = pairs.iter().map(|&(a, _)| ka[a]).collect();
            let Some(matches) = by_shared.get(&shared) else {
                continue;
            };
            for (kb, vb) in matches {
                let key: Vec<Label> = free_a
                    .iter()
                    .map(|&i| ka[i])
                    .chain(free_b.iter().map(|&i| kb[i]))
                    .collect();
                let prod = va.clone() * (*vb).clone();
                let sum = out.get(&key) + prod;
                if sum.is_zero() {
                    out.entries.remove(&key);
                } else {
                    out.entries.insert(key, sum);
                }
            }
        }
        Ok(out)
    }

    /// Whether every stored entry balances incoming against outgoing charge.
    /// Entries carrying ω are skipped.
    pub fn check_charge_conservation(&self) -> Result<bool, TensorError> {
        for (slot, ix) in self.indices.iter().enumerate() {
            if ix.orientation.is_none() {
                return Err(TensorError::UndeclaredOrientation(slot));
            }
        }
        Ok(self.charge_violations().is_empty())
    }

    /// Keys whose charges do not balance (assumes declared orientations).
    pub fn charge_violations(&self) -> Vec<Vec<Label>> {
        self.entries
            .keys()
            .filter(|k| {
                let mut net = 0i64;
                for (lab, ix) in k.iter().zip(&self.indices) {
                    let Some(c) = ix.charge(*lab) else {
                        return false;
                    };
                    match ix.orientation {
                        Some(Orientation::In) => net += c,
                        Some(Orientation::Out) => net -= c,
                        None => {}
                    }
                }
                net != 0
            })
            .cloned()
            .collect()
    }

    /// Whether every stored entry equals one.
    pub fn is_delta_symmetric(&self) -> bool {
        self.entries.values().all(|v| *v == S::one())
    }
}

impl<S: Scalar> fmt::Display for LabeledTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.indices.iter().map(|i| i.name.as_str()).collect();
        writeln!(f, "[{}]", names.join(", "))?;
        for (k, v) in &self.entries {
            let labels: Vec<String> = k.iter().map(|l| alloc::format!("{l}")).collect();
            writeln!(f, "  ({}) = {}", labels.join(", "), v)?;
        }
        Ok(())
    }
}

/// Index spaces of a family's tensor at unit charge scale.
///
/// Squares: `[south, west, east, north]`, with the carry on the north edge
/// worth two units for B and C. Triangles: `[left, right, top]`, with the
/// W output worth two units.
pub fn family_spaces(family: Family) -> Vec<IndexSpace> {
    use Orientation::{In, Out};
    let names: &[&str] = match family.arity() {
        4 => &["south", "west", "east", "north"],
        _ => &["left", "right", "top"],
    };
    family
        .alphabets()
        .iter()
        .zip(family.flow_weights())
        .zip(names)
        .map(|((&a, &w), name)| {
            let orient = if w > 0 { In } else { Out };
            IndexSpace::new(name, a, orient, w.abs())
        })
        .collect()
}

/// Rank-one indicator with a single unit entry at `k`.
pub fn delta<S: Scalar>(
    spaces: Vec<IndexSpace>,
    k: &[Label],
) -> Result<LabeledTensor<S>, TensorError> {
    let mut t = LabeledTensor::new(spaces);
    t.insert(k.to_vec(), S::one())?;
    Ok(t)
}

pub fn delta4<S: Scalar>(family: Family, k: [Label; 4]) -> Result<LabeledTensor<S>, TensorError> {
    delta(family_spaces(family), &k)
}

pub fn delta3<S: Scalar>(family: Family, k: [Label; 3]) -> Result<LabeledTensor<S>, TensorError> {
    delta(family_spaces(family), &k)
}

/// Sum of the rank-one terms of `tiles`.
pub fn from_tiles<S: Scalar>(family: Family, tiles: &[Tile]) -> LabeledTensor<S> {
    let mut t = LabeledTensor::new(family_spaces(family));
    for tile in tiles {
        t.add(tile.labels(), S::one())
            .expect("tiles lie in their family alphabets");
    }
    t
}

pub fn family_tensor<S: Scalar>(family: Family) -> LabeledTensor<S> {
    from_tiles(family, family.tiles())
}

pub fn make_b<S: Scalar>() -> LabeledTensor<S> {
    family_tensor(Family::B)
}

pub fn make_c<S: Scalar>() -> LabeledTensor<S> {
    family_tensor(Family::C)
}

pub fn make_t<S: Scalar>() -> LabeledTensor<S> {
    family_tensor(Family::T)
}

pub fn make_s<S: Scalar>() -> LabeledTensor<S> {
    family_tensor(Family::S)
}

/// G tensor at coarse-graining `level` (charges doubled per level).
pub fn make_g<S: Scalar>(level: u32) -> LabeledTensor<S> {
    family_tensor(Family::G).rescaled(1 << (level.max(1) - 1))
}

pub fn make_w<S: Scalar>(level: u32) -> LabeledTensor<S> {
    family_tensor(Family::W).rescaled(1 << (level.max(1) - 1))
}

/// Spin-1 to spin-1/2 map: keeps ±1, kills 0. Slots `[spin, phys]`.
///
/// Half-spin labels store ±½ as ±1, so both slots count charge in the same
/// integer unit.
pub fn make_p<S: Scalar>() -> LabeledTensor<S> {
    let mut t = LabeledTensor::new(alloc::vec![
        IndexSpace::new("spin", Alphabet::Spin, Orientation::Out, 1),
        IndexSpace::new("phys", Alphabet::HalfSpin, Orientation::In, 1),
    ]);
    for l in [Label::MINUS, Label::PLUS] {
        t.insert(alloc::vec![l, l], S::one()).unwrap();
    }
    t
}

/// `1 - |ω⟩⟨ω|` on the four-valued index. Slots `[phys, up]`.
pub fn make_pi<S: Scalar>() -> LabeledTensor<S> {
    let mut t = LabeledTensor::new(alloc::vec![
        IndexSpace::new("phys", Alphabet::SpinOmega, Orientation::In, 1),
        IndexSpace::new("up", Alphabet::SpinOmega, Orientation::Out, 1),
    ]);
    for l in [Label::MINUS, Label::ZERO, Label::PLUS] {
        t.insert(alloc::vec![l, l], S::one()).unwrap();
    }
    t
}

/// How t-powers are attached to a square tile in row `r` (1-based).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum AreaWeighting {
    /// `t^{2^{r-1} · east}`: each column contributes its right-hand height
    /// once, so a network weighs a walk by `t^{A}`.
    EastEdge,
    /// `t^{2^{r-1} · (west + east)}`: every horizontal half-segment counts,
    /// which weighs a walk by `t^{2A}`.
    BothEdges,
}

impl AreaWeighting {
    pub fn exponent(self, west: Label, east: Label, row: u32) -> u64 {
        let bit = |l: Label| (l == Label::PLUS) as u64;
        let unit = 1u64 << (row - 1);
        match self {
            AreaWeighting::EastEdge => unit * bit(east),
            AreaWeighting::BothEdges => unit * (bit(west) + bit(east)),
        }
    }
}

/// Multiplies each entry of a square tensor by its t-power for row `row`.
pub fn weight_square<S: Scalar>(
    base: &LabeledTensor<S>,
    t: &S,
    row: u32,
    weighting: AreaWeighting,
) -> LabeledTensor<S> {
    base.map(|k, v| v.clone() * t.pow(weighting.exponent(k[WEST], k[EAST], row)))
}

/// B with the row-`s` weights `(t^u, t^u, t^{2u}, 1, t^u, t^u)` on A1..A6,
/// `u = 2^{s-1}`.
pub fn make_b_s<S: Scalar>(t: &S, s: u32) -> LabeledTensor<S> {
    assert!(s >= 1, "rows are numbered from 1");
    weight_square(&make_b(), t, s, AreaWeighting::BothEdges)
}

/// The tensors a network is assembled from. Builders read them from here so
/// that tests can swap in corrupted copies.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorSet<S> {
    pub b: LabeledTensor<S>,
    pub c: LabeledTensor<S>,
    pub t: LabeledTensor<S>,
    pub s: LabeledTensor<S>,
    pub g: LabeledTensor<S>,
    pub w: LabeledTensor<S>,
    pub p: LabeledTensor<S>,
    pub pi: LabeledTensor<S>,
}

impl<S: Scalar> TensorSet<S> {
    pub fn standard() -> Self {
        TensorSet {
            b: make_b(),
            c: make_c(),
            t: make_t(),
            s: make_s(),
            g: make_g(1),
            w: make_w(1),
            p: make_p(),
            pi: make_pi(),
        }
    }

    pub fn family(&self, f: Family) -> &LabeledTensor<S> {
        match f {
            Family::B => &self.b,
            Family::C => &self.c,
            Family::T => &self.t,
            Family::S => &self.s,
            Family::G => &self.g,
            Family::W => &self.w,
        }
    }

    pub fn family_mut(&mut self, f: Family) -> &mut LabeledTensor<S> {
        match f {
            Family::B => &mut self.b,
            Family::C => &mut self.c,
            Family::T => &mut self.t,
            Family::S => &mut self.s,
            Family::G => &mut self.g,
            Family::W => &mut self.w,
        }
    }

    /// A copy with one entry of one family deleted.
    pub fn without_entry(&self, f: Family, key: &[Label]) -> Self {
        let mut out = self.clone();
        out.family_mut(f).remove_entry(key);
        out
    }
}

impl<S: Scalar> Default for TensorSet<S> {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Poly;
    use alloc::vec;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn l(v: i8) -> Label {
        Label::new(v)
    }

    type Z = BigInt;

    #[test]
    fn entry_counts() {
        assert_eq!(make_b::<Z>().nnz(), 6);
        assert_eq!(make_c::<Z>().nnz(), 8);
        assert_eq!(make_t::<Z>().nnz(), 7);
        assert_eq!(make_s::<Z>().nnz(), 12);
        assert_eq!(make_p::<Z>().nnz(), 2);
        assert_eq!(make_pi::<Z>().nnz(), 3);
        assert_eq!(make_g::<Z>(1).nnz(), 6);
        assert_eq!(make_w::<Z>(1).nnz(), 4);
    }

    #[test]
    fn named_entries() {
        let b = make_b::<Z>();
        assert_eq!(b.get(&[l(0), l(0), l(0), l(0)]), Z::from(1));
        let t = make_t::<Z>();
        assert_eq!(t.get(&[l(1), l(1), l(1)]), Z::from(0));
        assert!(!t.entries().any(|(k, _)| k[0] == l(1) && k[1] == l(1)));
        assert_eq!(t.get(&[l(0), l(0), l(0)]), Z::from(1));
        let s = make_s::<Z>();
        assert_eq!(s.get(&[l(0), l(0), l(0)]), Z::from(1));
        let shared = t.entries().filter(|(k, _)| s.get(k) == Z::from(1)).count();
        assert_eq!(shared, 6);
        let p = make_p::<Z>();
        assert_eq!(p.get(&[l(1), l(1)]), Z::from(1));
        assert!(!p.entries().any(|(k, _)| k[0] == l(0)));
        let pi = make_pi::<Z>();
        assert_eq!(pi.get(&[Label::OMEGA, Label::OMEGA]), Z::from(0));
        let g = make_g::<Z>(1);
        assert_eq!(g.get(&[l(-1), l(0), l(0), l(-1)]), Z::from(1));
    }

    #[test]
    fn deltas() {
        let d = delta3::<Z>(Family::T, [l(0), l(0), l(0)]).unwrap();
        assert_eq!(d.nnz(), 1);
        assert!(delta3::<Z>(Family::T, [Label::OMEGA, l(0), l(0)]).is_err());
        let mut sum = LabeledTensor::<Z>::new(family_spaces(Family::B));
        for tile in Family::B.tiles() {
            let k: [Label; 4] = tile.labels().try_into().unwrap();
            let d = delta4::<Z>(Family::B, k).unwrap();
            for (key, v) in d.entries() {
                sum.add(key.clone(), v.clone()).unwrap();
            }
        }
        assert_eq!(sum, make_b());
        let dp = delta4::<Poly>(Family::B, [l(0); 4]).unwrap();
        assert!(dp.is_delta_symmetric());
    }

    #[test]
    fn deformed_b() {
        let t = Poly::t();
        let b1 = make_b_s(&t, 1);
        let weight = |name: &str| {
            let tile = Family::B.tiles().iter().find(|x| x.name == name).unwrap();
            b1.get(&tile.labels())
        };
        let tp = |e: usize| Poly::monomial(e, BigInt::from(1));
        assert_eq!(
            ["A1", "A2", "A3", "A4", "A5", "A6"].map(weight),
            [tp(1), tp(1), tp(2), tp(0), tp(1), tp(1)]
        );
        let b2 = make_b_s(&t, 2);
        assert_eq!(b2.get(&[l(0), l(1), l(1), l(0)]), tp(4));
        for s in 1..=8 {
            assert_eq!(make_b_s(&Z::from(1), s), make_b());
        }
    }

    #[test]
    fn charges() {
        let set = TensorSet::<Z>::standard();
        for f in Family::ALL {
            assert_eq!(set.family(f).check_charge_conservation(), Ok(true), "{f:?}");
        }
        assert_eq!(set.p.check_charge_conservation(), Ok(true));
        assert_eq!(set.pi.check_charge_conservation(), Ok(true));
        assert_eq!(make_g::<Z>(3).check_charge_conservation(), Ok(true));
        assert_eq!(make_w::<Z>(3).check_charge_conservation(), Ok(true));

        let mut lone = LabeledTensor::<Z>::new(family_spaces(Family::B));
        lone.insert(vec![l(1), l(0), l(0), l(0)], Z::from(1))
            .unwrap();
        assert_eq!(lone.check_charge_conservation(), Ok(false));

        let plain = LabeledTensor::<Z>::new(vec![IndexSpace::plain("x", Alphabet::Bit)]);
        assert_eq!(
            plain.check_charge_conservation(),
            Err(TensorError::UndeclaredOrientation(0))
        );
    }

    #[test]
    fn tile_flow_rule_agrees_with_charge_check() {
        for f in Family::ALL {
            for tile in f.tiles() {
                let d = delta::<Z>(family_spaces(f), &tile.labels()).unwrap();
                let balanced: bool = d.check_charge_conservation().unwrap();
                assert_eq!(balanced, crate::tiles::satisfies_flow_rule(tile, f));
            }
        }
    }

    #[test]
    fn small_contractions() {
        let t = make_t::<Z>();
        let s_pi = make_pi::<Z>();
        // Π on the output of the four-valued triangle keeps its non-ω part.
        let s = make_s::<Z>();
        let projected = s.contract_pair(&s_pi, &[(2, 0)]).unwrap();
        assert_eq!(
            projected.nnz(),
            s.entries().filter(|(k, _)| !k[2].is_omega()).count()
        );

        let b = make_b::<Z>();
        let capped = b
            .fix(3, l(0))
            .unwrap()
            .fix(2, l(0))
            .unwrap()
            .fix(1, l(0))
            .unwrap();
        assert_eq!(capped.nnz(), 1);
        assert_eq!(capped.get(&[l(0)]), Z::from(1));

        assert!(matches!(
            t.contract_pair(&b, &[(0, 1)]),
            Err(TensorError::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn gw_matches_bt_as_tensors() {
        let b = make_b::<Z>();
        let t = make_t::<Z>().rescaled(2);
        let g = make_g::<Z>(1);
        let w = make_w::<Z>(1);
        // two squares joined east-to-west, then the triangle on their norths
        let pair = |sq: &LabeledTensor<Z>| sq.contract_pair(sq, &[(EAST, WEST)]).unwrap();
        // pair slots: [s1, w1, n1, s2, e2, n2]
        let bt = pair(&b).contract_pair(&t, &[(2, 0), (5, 1)]).unwrap();
        let gw = pair(&g).contract_pair(&w, &[(2, 0), (5, 1)]).unwrap();
        assert_eq!(
            bt.entries().collect::<Vec<_>>(),
            gw.entries().collect::<Vec<_>>()
        );
        assert_eq!(bt.nnz(), gw.nnz());
    }

    fn arb_tensor(arity: usize) -> impl Strategy<Value = LabeledTensor<Z>> {
        proptest::collection::btree_map(
            proptest::collection::vec(0usize..3, arity),
            -3i64..4,
            0..12,
        )
        .prop_map(move |m| {
            let spaces = (0..arity)
                .map(|_| IndexSpace::plain("x", Alphabet::Spin))
                .collect();
            let mut t = LabeledTensor::new(spaces);
            for (k, v) in m {
                let key = k.into_iter().map(|i| Label::new(i as i8 - 1)).collect();
                t.insert(key, Z::from(v)).unwrap();
            }
            t
        })
    }

    proptest! {
        #[test]
        fn contraction_is_associative(a in arb_tensor(2), b in arb_tensor(3), c in arb_tensor(2)) {
            // a[0]-b[0], b[2]-c[0]
            let left = a.contract_pair(&b, &[(0, 0)]).unwrap(); // [a1, b1, b2]
            let left = left.contract_pair(&c, &[(2, 0)]).unwrap(); // [a1, b1, c1]
            let right = b.contract_pair(&c, &[(2, 0)]).unwrap(); // [b0, b1, c1]
            let right = a.contract_pair(&right, &[(0, 0)]).unwrap(); // [a1, b1, c1]
            prop_assert_eq!(left, right);
        }

        #[test]
        fn pair_order_does_not_matter(a in arb_tensor(3), b in arb_tensor(3)) {
            let x = a.contract_pair(&b, &[(0, 1), (2, 0)]).unwrap();
            let y = a.contract_pair(&b, &[(2, 0), (0, 1)]).unwrap();
            prop_assert_eq!(x, y);
        }

        #[test]
        fn unit_t_gives_plain_b(s in 1u32..=8) {
            prop_assert_eq!(make_b_s(&Z::from(1), s), make_b::<Z>());
        }
    }
}
