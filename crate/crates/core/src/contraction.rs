//! Exact network evaluation.
//!
//! The engine absorbs one node at a time into a table keyed by the labels of
//! the live slots: edges whose far end has not been absorbed yet, plus open
//! slots that are not fixed. Builders insert nodes bottom-up, so the default
//! plan is insertion order and the table stays one column or layer wide.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::label::{Alphabet, Label};
use crate::network::{Link, Network, NetworkError, NodeKind, ShapeKind, SlotRef};
use crate::scalar::Scalar;
use crate::state::{SiteKind, SpinConfig, StateVector};

/// Largest physical slot count `contract_full` accepts by default.
pub const DEFAULT_FULL_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractionError {
    #[error("config has {got} sites, network has {expected}")]
    ConfigLength { expected: usize, got: usize },
    #[error("label {label} at site {site} is outside the physical alphabet")]
    LabelOutOfAlphabet { site: usize, label: Label },
    #[error("{sites} physical sites exceeds the cap of {cap}")]
    CapExceeded { sites: usize, cap: usize },
    #[error("order is not a permutation of the network's nodes")]
    BadOrder,
    #[error("physical slot carries a label with no spin value")]
    NonPhysicalLabel,
    #[error("network has open slots that are not physical")]
    ExtraOpenSlots,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// West-to-east over columns, bottom-up within a column.
    Columns,
    /// Bottom-up over layers, squares before the triangles above them.
    Layers,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    pub order: Vec<usize>,
    pub sweep: Sweep,
    /// Most slots live at once during the sweep.
    pub max_live_slots: usize,
    /// Upper bound on the table size: product of live alphabet sizes.
    pub max_live_bound: u128,
}

impl ContractionPlan {
    pub fn steps(&self) -> usize {
        self.order.len()
    }
}

pub fn contraction_plan<S: Scalar>(net: &Network<S>) -> ContractionPlan {
    let order: Vec<usize> = (0..net.nodes().len()).collect();
    let sweep = match net.meta.shape {
        ShapeKind::Pyramid | ShapeKind::Rectangle => Sweep::Columns,
        _ => Sweep::Layers,
    };
    let (max_live_slots, max_live_bound) = live_profile(net, &order);
    ContractionPlan {
        order,
        sweep,
        max_live_slots,
        max_live_bound,
    }
}

fn live_profile<S: Scalar>(net: &Network<S>, order: &[usize]) -> (usize, u128) {
    let mut done = vec![false; net.nodes().len()];
    let mut live: Vec<SlotRef> = Vec::new();
    let (mut most, mut bound) = (0, 1u128);
    for &v in order {
        for k in 0..net.node(v).tensor.arity() {
            match net.link(crate::network::slot(v, k)) {
                Some(Link::Edge(o)) if done[o.node] => live.retain(|&s| s != o),
                Some(Link::Edge(_)) | Some(Link::Open(_)) => live.push(crate::network::slot(v, k)),
                _ => {}
            }
        }
        done[v] = true;
        most = most.max(live.len());
        let b = live.iter().fold(1u128, |acc, &s| {
            acc.saturating_mul(net.alphabet(s).size() as u128)
        });
        bound = bound.max(b);
    }
    (most, bound)
}

/// Result of a sweep: amplitudes keyed by the labels of the unfixed open
/// slots, in open-slot order.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenContraction<S> {
    pub open: Vec<usize>,
    pub table: BTreeMap<Vec<Label>, S>,
    /// Largest table held during the sweep.
    pub max_rows: usize,
}

/// Contracts `net` along `order` with some open slots fixed.
pub fn contract_open<S: Scalar>(
    net: &Network<S>,
    order: &[usize],
    fixed: &[Option<Label>],
) -> Result<OpenContraction<S>, ContractionError> {
    let n = net.nodes().len();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(ContractionError::BadOrder);
    }
    for &v in order {
        if v >= n || seen[v] {
            return Err(ContractionError::BadOrder);
        }
        seen[v] = true;
    }
    net.validate()?;

    let mut done = vec![false; n];
    let mut live: Vec<SlotRef> = Vec::new();
    let mut table: BTreeMap<Vec<Label>, S> = BTreeMap::new();
    table.insert(Vec::new(), S::one());
    let mut max_rows = 1;

    for &v in order {
        let node = net.node(v);
        let mut pins: Vec<(usize, Label)> = Vec::new();
        let mut matched: Vec<(usize, usize)> = Vec::new();
        let mut fresh: Vec<usize> = Vec::new();
        for k in 0..node.tensor.arity() {
            let s = crate::network::slot(v, k);
            match net.link(s).expect("validated") {
                Link::Pin(l) => pins.push((k, l)),
                Link::Open(i) => match fixed.get(i).copied().flatten() {
                    Some(l) => pins.push((k, l)),
                    None => fresh.push(k),
                },
                Link::Edge(o) if done[o.node] => {
                    let at = live
                        .iter()
                        .position(|&x| x == o)
                        .expect("absorbed partner is live");
                    matched.push((k, at));
                }
                Link::Edge(_) => fresh.push(k),
            }
        }

        let mut index: BTreeMap<Vec<Label>, Vec<(Vec<Label>, &S)>> = BTreeMap::new();
        for (key, val) in node.tensor.entries() {
            if pins.iter().any(|&(k, l)| key[k] != l) {
                continue;
            }
            let m: Vec<Label> = matched.iter().map(|&(k, _)| key[k]).collect();
            let f: Vec<Label> = fresh.iter().map(|&k| key[k]).collect();
            index.entry(m).or_default().push((f, val));
        }

        let mut keep = vec![true; live.len()];
        for &(_, at) in &matched {
            keep[at] = false;
        }
        let mut next: BTreeMap<Vec<Label>, S> = BTreeMap::new();
        for (row, amp) in &table {
            let m: Vec<Label> = matched.iter().map(|&(_, at)| row[at]).collect();
            let Some(hits) = index.get(&m) else { continue };
            let base: Vec<Label> = row
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(l, _)| *l)
                .collect();
            for (f, val) in hits {
                let mut key = base.clone();
                key.extend_from_slice(f);
                let term = amp.clone() * (*val).clone();
                match next.get_mut(&key) {
                    Some(e) => *e = e.clone() + term,
                    None => {
                        next.insert(key, term);
                    }
                }
            }
        }
        next.retain(|_, a| !a.is_zero());
        let mut new_live: Vec<SlotRef> = live
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(s, _)| *s)
            .collect();
        new_live.extend(fresh.iter().map(|&k| crate::network::slot(v, k)));
        live = new_live;
        table = next;
        max_rows = max_rows.max(table.len());
        done[v] = true;
    }

    // everything left is an open slot; sort columns into open-slot order
    let mut open_ix: Vec<(usize, usize)> = live
        .iter()
        .enumerate()
        .map(|(col, &s)| match net.link(s) {
            Some(Link::Open(i)) => (i, col),
            _ => unreachable!("all edges are closed once every node is absorbed"),
        })
        .collect();
    open_ix.sort_unstable();
    let table = table
        .into_iter()
        .map(|(row, a)| (open_ix.iter().map(|&(_, c)| row[c]).collect(), a))
        .collect();
    Ok(OpenContraction {
        open: open_ix.into_iter().map(|(i, _)| i).collect(),
        table,
        max_rows,
    })
}

fn site_kind(alphabet: Option<Alphabet>) -> SiteKind {
    match alphabet {
        Some(Alphabet::HalfSpin) => SiteKind::SpinHalf,
        _ => SiteKind::SpinOne,
    }
}

fn check_config<S: Scalar>(
    net: &Network<S>,
    config: &SpinConfig,
) -> Result<Vec<Label>, ContractionError> {
    if config.len() != net.n_physical() {
        return Err(ContractionError::ConfigLength {
            expected: net.n_physical(),
            got: config.len(),
        });
    }
    let labels = config.labels();
    for (site, (&l, &s)) in labels.iter().zip(net.physical_slots()).enumerate() {
        if !net.alphabet(s).contains(l) {
            return Err(ContractionError::LabelOutOfAlphabet { site, label: l });
        }
    }
    Ok(labels)
}

/// `⟨config|net⟩`.
pub fn amplitude<S: Scalar>(net: &Network<S>, config: &SpinConfig) -> Result<S, ContractionError> {
    let labels = check_config(net, config)?;
    if net.open_slots().len() != net.n_physical() {
        return Err(ContractionError::ExtraOpenSlots);
    }
    let fixed: Vec<Option<Label>> = labels.into_iter().map(Some).collect();
    let plan = contraction_plan(net);
    let out = contract_open(net, &plan.order, &fixed)?;
    Ok(out.table.get(&Vec::new()).cloned().unwrap_or_else(S::zero))
}

pub fn contract_full<S: Scalar>(net: &Network<S>) -> Result<StateVector<S>, ContractionError> {
    contract_full_capped(net, DEFAULT_FULL_CAP)
}

pub fn contract_full_capped<S: Scalar>(
    net: &Network<S>,
    cap: usize,
) -> Result<StateVector<S>, ContractionError> {
    let plan = contraction_plan(net);
    contract_with_order_capped(net, &plan.order, cap)
}

/// Full state along a caller-chosen node order.
pub fn contract_with_order<S: Scalar>(
    net: &Network<S>,
    order: &[usize],
) -> Result<StateVector<S>, ContractionError> {
    contract_with_order_capped(net, order, DEFAULT_FULL_CAP)
}

fn contract_with_order_capped<S: Scalar>(
    net: &Network<S>,
    order: &[usize],
    cap: usize,
) -> Result<StateVector<S>, ContractionError> {
    let sites = net.n_physical();
    if sites > cap {
        return Err(ContractionError::CapExceeded { sites, cap });
    }
    if net.open_slots().len() != sites {
        return Err(ContractionError::ExtraOpenSlots);
    }
    let out = contract_open(net, order, &[])?;
    let mut state = StateVector::new(sites, site_kind(net.physical_alphabet()));
    for (key, amp) in out.table {
        let values: Option<Vec<i8>> = key.iter().map(|l| l.value()).collect();
        let values = values.ok_or(ContractionError::NonPhysicalLabel)?;
        state.accumulate(SpinConfig(values), amp);
    }
    Ok(state)
}

/// Per-kind node counts.
pub fn count_tensors<S: Scalar>(net: &Network<S>) -> BTreeMap<NodeKind, usize> {
    net.count_by_kind()
}

/// A node that had more than one consistent entry during propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LockViolation {
    pub node: usize,
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LockedOutcome<S> {
    pub value: S,
    pub violation: Option<LockViolation>,
}

/// Known label of each slot, filled in as nodes are fixed.
struct Labels {
    slots: BTreeMap<SlotRef, Label>,
}

impl Labels {
    fn seed<S: Scalar>(net: &Network<S>, physical: &[Label]) -> Self {
        let mut slots = BTreeMap::new();
        for (&s, &l) in net.links() {
            match l {
                Link::Pin(label) => {
                    slots.insert(s, label);
                }
                Link::Open(i) if i < physical.len() => {
                    slots.insert(s, physical[i]);
                }
                _ => {}
            }
        }
        Labels { slots }
    }

    fn consistent<S: Scalar>(&self, net: &Network<S>, v: usize, key: &[Label]) -> bool {
        key.iter().enumerate().all(|(k, &l)| {
            let s = crate::network::slot(v, k);
            let known = self.slots.get(&s).or_else(|| match net.link(s) {
                Some(Link::Edge(o)) => self.slots.get(&o),
                _ => None,
            });
            known.is_none_or(|&x| x == l)
        })
    }

    fn assign<S: Scalar>(&mut self, net: &Network<S>, v: usize, key: &[Label]) {
        for (k, &l) in key.iter().enumerate() {
            let s = crate::network::slot(v, k);
            self.slots.insert(s, l);
            if let Some(Link::Edge(o)) = net.link(s) {
                self.slots.insert(o, l);
            }
        }
    }

    fn unassign<S: Scalar>(
        &mut self,
        net: &Network<S>,
        v: usize,
        key: &[Label],
        before: &BTreeMap<SlotRef, Label>,
    ) {
        for k in 0..key.len() {
            let s = crate::network::slot(v, k);
            restore(&mut self.slots, before, s);
            if let Some(Link::Edge(o)) = net.link(s) {
                restore(&mut self.slots, before, o);
            }
        }
    }
}

fn restore(slots: &mut BTreeMap<SlotRef, Label>, before: &BTreeMap<SlotRef, Label>, s: SlotRef) {
    match before.get(&s) {
        Some(&l) => {
            slots.insert(s, l);
        }
        None => {
            slots.remove(&s);
        }
    }
}

/// Evaluates `⟨config|net⟩` by fixing each node's labels from its already
/// known neighbours. Falls back to [`amplitude`] if some node has more than
/// one consistent entry, and reports where.
pub fn locked_propagate<S: Scalar>(
    net: &Network<S>,
    config: &SpinConfig,
) -> Result<LockedOutcome<S>, ContractionError> {
    let physical = check_config(net, config)?;
    if net.open_slots().len() != net.n_physical() {
        return Err(ContractionError::ExtraOpenSlots);
    }
    net.validate()?;
    let plan = contraction_plan(net);
    let mut labels = Labels::seed(net, &physical);
    let mut value = S::one();
    for &v in &plan.order {
        let tensor = &net.node(v).tensor;
        let mut hits = tensor
            .entries()
            .filter(|(key, _)| labels.consistent(net, v, key));
        let Some((key, val)) = hits.next() else {
            return Ok(LockedOutcome {
                value: S::zero(),
                violation: None,
            });
        };
        let extra = hits.count();
        if extra > 0 {
            return Ok(LockedOutcome {
                value: amplitude(net, config)?,
                violation: Some(LockViolation {
                    node: v,
                    candidates: extra + 1,
                }),
            });
        }
        labels.assign(net, v, key);
        value = value * val.clone();
    }
    Ok(LockedOutcome {
        value,
        violation: None,
    })
}

/// Up to `limit` internal labelings with every entry nonzero, each given as
/// the chosen entry key per node.
pub fn internal_labelings<S: Scalar>(
    net: &Network<S>,
    config: &SpinConfig,
    limit: usize,
) -> Result<Vec<Vec<Vec<Label>>>, ContractionError> {
    let physical = check_config(net, config)?;
    if net.open_slots().len() != net.n_physical() {
        return Err(ContractionError::ExtraOpenSlots);
    }
    net.validate()?;
    let order = contraction_plan(net).order;
    let mut labels = Labels::seed(net, &physical);
    let mut chosen: Vec<Vec<Label>> = vec![Vec::new(); order.len()];
    let mut found = Vec::new();
    dfs(net, &order, 0, &mut labels, &mut chosen, &mut found, limit);
    Ok(found)
}

fn dfs<S: Scalar>(
    net: &Network<S>,
    order: &[usize],
    depth: usize,
    labels: &mut Labels,
    chosen: &mut Vec<Vec<Label>>,
    found: &mut Vec<Vec<Vec<Label>>>,
    limit: usize,
) {
    if found.len() >= limit {
        return;
    }
    let Some(&v) = order.get(depth) else {
        found.push(chosen.clone());
        return;
    };
    let keys: Vec<&Vec<Label>> = net
        .node(v)
        .tensor
        .entries()
        .filter(|(key, _)| labels.consistent(net, v, key))
        .map(|(key, _)| key)
        .collect();
    for key in keys {
        let before = labels.slots.clone();
        labels.assign(net, v, key);
        chosen[v] = key.clone();
        dfs(net, order, depth + 1, labels, chosen, found, limit);
        labels.unassign(net, v, key, &before);
        if found.len() >= limit {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{hrn_open, hrn_periodic, pyramid, u1_mera};
    use crate::tensor::TensorSet;
    use num_bigint::BigInt;

    type Z = BigInt;

    fn cfg(v: &[i8]) -> SpinConfig {
        SpinConfig(v.to_vec())
    }

    #[test]
    fn small_pyramids() {
        let set = TensorSet::<Z>::standard();
        let one = Z::from(1);
        let net = pyramid(1, &one, &set).unwrap();
        let st = contract_full(&net).unwrap();
        assert_eq!(st.nnz(), 2);
        assert_eq!(st.get(&cfg(&[0, 0])), one);
        assert_eq!(st.get(&cfg(&[1, -1])), one);
        let net = pyramid(2, &one, &set).unwrap();
        assert_eq!(contract_full(&net).unwrap().nnz(), 9);
        assert_eq!(amplitude(&net, &cfg(&[0, 0, 0, 0])).unwrap(), one);
        assert_eq!(amplitude(&net, &cfg(&[-1, 1, 0, 0])).unwrap(), Z::from(0));
        assert_eq!(contraction_plan(&net).steps(), 6);
    }

    #[test]
    fn plan_is_layered_and_stable() {
        let set = TensorSet::<Z>::standard();
        let net = hrn_periodic(2, 4, 4, &set).unwrap();
        let plan = contraction_plan(&net);
        assert_eq!(plan, contraction_plan(&net));
        let rows: Vec<i32> = plan
            .order
            .iter()
            .map(|&v| net.node(v).position.row)
            .collect();
        assert!(rows.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            contract_full(&hrn_periodic(1, 2, 2, &set).unwrap())
                .unwrap()
                .nnz(),
            3
        );
    }

    #[test]
    fn config_errors() {
        let set = TensorSet::<Z>::standard();
        let net = pyramid(1, &Z::from(1), &set).unwrap();
        assert_eq!(
            amplitude(&net, &cfg(&[0])),
            Err(ContractionError::ConfigLength {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            amplitude(&net, &cfg(&[0, 5])),
            Err(ContractionError::LabelOutOfAlphabet { site: 1, .. })
        ));
        let big = pyramid(7, &Z::from(1), &set).unwrap();
        assert_eq!(
            contract_full(&big),
            Err(ContractionError::CapExceeded { sites: 14, cap: 12 })
        );
        assert_eq!(
            contract_with_order(&net, &[0]),
            Err(ContractionError::BadOrder)
        );
    }

    #[test]
    fn locked_examples() {
        let set = TensorSet::<Z>::standard();
        let u = u1_mera(2, &set).unwrap();
        let out = locked_propagate(&u, &cfg(&[1, 0, -1, 0])).unwrap();
        assert_eq!(
            out,
            LockedOutcome {
                value: Z::from(1),
                violation: None
            }
        );
        let out = locked_propagate(&u, &cfg(&[1, 1, 0, 0])).unwrap();
        assert_eq!(out.value, Z::from(0));
        let ho = hrn_open(1, &set).unwrap();
        assert_eq!(
            locked_propagate(&ho, &cfg(&[-1, 1])).unwrap().value,
            Z::from(0)
        );
        assert_eq!(internal_labelings(&ho, &cfg(&[1, -1]), 4).unwrap().len(), 1);
    }
}
