//! Rectangle/renormalisation hybrids: replacing the zero top boundary by a
//! triangle tree, zipping the tree down through the grid, and removing the
//! cap that is left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{compare_states, ProofReport};
use crate::contraction::{contract_full, contract_open, contraction_plan, ContractionError};
use crate::label::Label;
use crate::network::{
    hrn_open, hrn_periodic, periodic_boundary, pos, rectangle_with, slot, Link, Network,
    NetworkError, NodeKind, Position, Top,
};
use crate::tensor::{LabeledTensor, TensorSet};
use crate::tiles::{EAST, LEFT, NORTH, RIGHT, SOUTH, TOP, WEST};
use crate::walk::{ground_state_vector, periodic_sector_state, WalkKind};

type Z = BigInt;

fn log2_sites(n: usize) -> Result<u32, NetworkError> {
    let sites = 2 * n;
    if n == 0 || !sites.is_power_of_two() {
        return Err(NetworkError::NotPowerOfTwo(sites));
    }
    Ok(sites.trailing_zeros())
}

/// Value of a binary tree of `tri` tensors on the given leaf labels, with the
/// apex output pinned to 0.
pub fn tree_value(tri: &LabeledTensor<Z>, leaves: &[Label]) -> Z {
    if leaves.len() == 1 {
        return if leaves[0] == Label::ZERO {
            Z::one()
        } else {
            Z::zero()
        };
    }
    // every way of choosing one entry per pair, as (next level, weight)
    let mut partial: Vec<(Vec<Label>, Z)> = vec![(Vec::new(), Z::one())];
    for pair in leaves.chunks(2) {
        let mut next = Vec::new();
        for (key, val) in tri.entries() {
            if key[LEFT] != pair[0] || key[RIGHT] != pair[1] {
                continue;
            }
            for (ls, w) in &partial {
                let mut ls = ls.clone();
                ls.push(key[TOP]);
                next.push((ls, w * val));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(ls, w)| w * tree_value(tri, &ls))
        .fold(Z::zero(), |a, b| a + b)
}

/// Periodic hybrid on `2n = 2^y` sites: `y + 2` rows of B with side heights
/// raised by `2^{y+1}`, topped by a T tree.
pub fn app_c_network(n: usize, k: i64, set: &TensorSet<Z>) -> Result<Network<Z>, NetworkError> {
    let y = log2_sites(n)?;
    let (p, q) = periodic_boundary(n, k)?;
    let lift = 1u64 << (y + 1);
    rectangle_with(
        n,
        y as usize + 2,
        p + lift,
        q + lift,
        NodeKind::B,
        Top::Tree,
        set,
    )
}

/// Open hybrid on `2n = 2^y` sites: `Π` under each site, `y + 1` rows of C
/// with zero side bits, topped by an S tree.
pub fn app_d_network(n: usize, set: &TensorSet<Z>) -> Result<Network<Z>, NetworkError> {
    let y = log2_sites(n)?;
    rectangle_with(n, y as usize + 1, 0, 0, NodeKind::C, Top::Tree, set)
}

fn edge(net: &Network<Z>, node: usize, side: usize) -> Option<crate::network::SlotRef> {
    match net.link(slot(node, side)) {
        Some(Link::Edge(o)) => Some(o),
        _ => None,
    }
}

/// Squares `(u1, u2, l1, l2)` under triangle `tri` if the zipper applies:
/// the triangle sits on two side-by-side squares, each stacked on a square,
/// and the lower two are side by side.
fn zip_site(net: &Network<Z>, tri: usize) -> Option<[usize; 4]> {
    let t = net.node(tri);
    if !t.kind.is_triangle() {
        return None;
    }
    let a = edge(net, tri, LEFT)?;
    let b = edge(net, tri, RIGHT)?;
    if a.slot != NORTH || b.slot != NORTH {
        return None;
    }
    let (u1, u2) = (a.node, b.node);
    let kind = net.node(u1).kind;
    let under = |u: usize| {
        edge(net, u, SOUTH)
            .filter(|s| s.slot == NORTH)
            .map(|s| s.node)
    };
    let (l1, l2) = (under(u1)?, under(u2)?);
    let squares = [u1, u2, l1, l2]
        .iter()
        .all(|&i| net.node(i).kind == kind && kind.is_square());
    let side_by_side = |x: usize, y: usize| edge(net, x, EAST) == Some(slot(y, WEST));
    (squares && side_by_side(u1, u2) && side_by_side(l1, l2)).then_some([u1, u2, l1, l2])
}

/// Applies the zipper at triangle `tri`: the triangle moves below the upper
/// pair, which merges into one square of double width. Returns `false` if the
/// zipper does not apply there.
pub fn zip_triangle(
    net: &mut Network<Z>,
    tri: usize,
    set: &TensorSet<Z>,
) -> Result<bool, NetworkError> {
    let Some([u1, u2, l1, l2]) = zip_site(net, tri) else {
        return Ok(false);
    };
    let kind = net.node(tri).kind;
    let base = match kind {
        NodeKind::T => &set.t,
        NodeKind::S => &set.s,
        _ => return Ok(false),
    };
    let upper: Position = net.node(u1).position;
    let lower_row = net.node(l1).position.row;
    let west = net
        .link(slot(u1, WEST))
        .ok_or(NetworkError::UnlinkedSlot(slot(u1, WEST)))?;
    let east = net
        .link(slot(u2, EAST))
        .ok_or(NetworkError::UnlinkedSlot(slot(u2, EAST)))?;
    let top = net
        .link(slot(tri, TOP))
        .ok_or(NetworkError::UnlinkedSlot(slot(tri, TOP)))?;

    let new_tri = net.add_node(
        kind,
        pos(lower_row, upper.col, 2 * upper.width),
        Arc::new(base.rescaled(1 << lower_row)),
    );
    let merged_tensor = net.node(u1).tensor.clone();
    let merged = net.add_node(
        net.node(u1).kind,
        pos(upper.row, upper.col, 2 * upper.width),
        merged_tensor,
    );
    net.connect(slot(new_tri, LEFT), slot(l1, NORTH))?;
    net.connect(slot(new_tri, RIGHT), slot(l2, NORTH))?;
    net.connect(slot(merged, SOUTH), slot(new_tri, TOP))?;
    net.attach(slot(merged, WEST), west)?;
    net.attach(slot(merged, EAST), east)?;
    net.attach(slot(merged, NORTH), top)?;
    let mut gone = [u1, u2, tri];
    gone.sort_unstable();
    net.remove_nodes(&gone)?;
    Ok(true)
}

/// Zips triangles of width 2, then 4, and so on until none applies.
/// Returns the number of widths at which anything moved.
pub fn zip_sweeps(net: &mut Network<Z>, set: &TensorSet<Z>) -> Result<usize, NetworkError> {
    let widest = net
        .nodes()
        .iter()
        .map(|n| n.position.width)
        .max()
        .unwrap_or(1);
    let mut sweeps = 0;
    let mut width = 2;
    while width <= widest {
        let mut moved = false;
        loop {
            let next = (0..net.nodes().len())
                .find(|&i| net.node(i).position.width == width && zip_site(net, i).is_some());
            let Some(i) = next else { break };
            zip_triangle(net, i, set)?;
            moved = true;
        }
        sweeps += usize::from(moved);
        width *= 2;
    }
    Ok(sweeps)
}

/// Removes the highest square whose pinned sides make it `δ_{s,0}`, pinning
/// the slot below it to 0.
pub fn remove_cap(net: &mut Network<Z>) -> Result<(), NetworkError> {
    let pinned = |net: &Network<Z>, id: usize, side: usize| match net.link(slot(id, side)) {
        Some(Link::Pin(l)) => Some(l),
        _ => None,
    };
    let mut best: Option<usize> = None;
    for id in 0..net.nodes().len() {
        let node = net.node(id);
        if !node.kind.is_square() {
            continue;
        }
        let (Some(w), Some(e), Some(nl)) = (
            pinned(net, id, WEST),
            pinned(net, id, EAST),
            pinned(net, id, NORTH),
        ) else {
            continue;
        };
        let Ok(fixed) = node
            .tensor
            .fix(NORTH, nl)
            .and_then(|t| t.fix(EAST, e))
            .and_then(|t| t.fix(WEST, w))
        else {
            continue;
        };
        let is_delta = fixed.nnz() == 1 && fixed.get(&[Label::ZERO]).is_one();
        if is_delta && best.is_none_or(|b| net.node(b).position.row < node.position.row) {
            best = Some(id);
        }
    }
    let cap = best.ok_or(NetworkError::Bounds("no removable cap"))?;
    let below = edge(net, cap, SOUTH).ok_or(NetworkError::Bounds("cap has nothing below"))?;
    net.pin(below, Label::ZERO)?;
    net.remove_nodes(&[cap])
}

/// Slot link with nodes named by kind and position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CanonicalLink {
    Edge(NodeKind, Position, usize),
    Pin(Label),
    Open(usize),
}

/// Graph description independent of node numbering: nodes keyed by kind and
/// position, with their tensors and every slot's link.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub nodes: Vec<(NodeKind, Position, Arc<LabeledTensor<Z>>)>,
    pub links: Vec<(NodeKind, Position, usize, CanonicalLink)>,
}

pub fn canonical_form(net: &Network<Z>) -> Result<CanonicalForm, NetworkError> {
    let key = |i: usize| (net.node(i).kind, net.node(i).position);
    let mut nodes: Vec<_> = net
        .nodes()
        .iter()
        .map(|n| (n.kind, n.position, n.tensor.clone()))
        .collect();
    nodes.sort_by_key(|a| (a.0, a.1));
    if nodes
        .windows(2)
        .any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
    {
        return Err(NetworkError::Bounds("two nodes share a kind and position"));
    }
    let mut links: Vec<_> = net
        .links()
        .iter()
        .map(|(s, l)| {
            let (kind, p) = key(s.node);
            let cl = match *l {
                Link::Edge(o) => {
                    let (ok, op) = key(o.node);
                    CanonicalLink::Edge(ok, op, o.slot)
                }
                Link::Pin(label) => CanonicalLink::Pin(label),
                Link::Open(i) => CanonicalLink::Open(i),
            };
            (kind, p, s.slot, cl)
        })
        .collect();
    links.sort();
    Ok(CanonicalForm { nodes, links })
}

pub fn isomorphic(a: &Network<Z>, b: &Network<Z>) -> Result<bool, NetworkError> {
    Ok(canonical_form(a)? == canonical_form(b)?)
}

fn first_difference(
    a: &CanonicalForm,
    b: &CanonicalForm,
) -> (alloc::string::String, alloc::string::String) {
    for (x, y) in a.nodes.iter().zip(&b.nodes) {
        if x != y {
            return (
                format!("{:?} {:?}", x.0, x.1),
                format!("{:?} {:?}", y.0, y.1),
            );
        }
    }
    for (x, y) in a.links.iter().zip(&b.links) {
        if x != y {
            return (format!("{x:?}"), format!("{y:?}"));
        }
    }
    (
        format!("{} nodes {} links", a.nodes.len(), a.links.len()),
        format!("{} nodes {} links", b.nodes.len(), b.links.len()),
    )
}

fn check_rewrite(
    report: &mut ProofReport,
    context: &str,
    mut net: Network<Z>,
    target: &Network<Z>,
    y: u32,
    set: &TensorSet<Z>,
) -> Result<(), NetworkError> {
    let sweeps = zip_sweeps(&mut net, set)?;
    remove_cap(&mut net)?;
    net.validate()?;
    report.checked += 1;
    let (a, b) = (canonical_form(&net)?, canonical_form(target)?);
    if sweeps as u32 != y {
        report.fail(format!("{context}: sweep count"), Vec::new(), sweeps, y);
    } else if a != b {
        let (x, z) = first_difference(&a, &b);
        report.fail(
            format!("{context}: rewritten network differs"),
            Vec::new(),
            x,
            z,
        );
    } else {
        report.matched += 1;
    }
    Ok(())
}

/// Zips the periodic hybrid down to the periodic renormalisation network at
/// `2n ∈ {2, 4, 8}` for every sector, and the open hybrid down to the open
/// network.
pub fn verify_zip_rewrite(set: &TensorSet<Z>) -> Result<ProofReport, NetworkError> {
    let mut report = ProofReport::new("zip-rewrite");
    for n in [1usize, 2, 4] {
        let y = log2_sites(n)?;
        for k in -(2 * n as i64)..=2 * n as i64 {
            let (p, q) = periodic_boundary(n, k)?;
            let target = hrn_periodic(n, p, q, set)?;
            check_rewrite(
                &mut report,
                &format!("periodic 2n={} k={k}", 2 * n),
                app_c_network(n, k, set)?,
                &target,
                y,
                set,
            )?;
        }
        let target = hrn_open(n, set)?;
        check_rewrite(
            &mut report,
            &format!("open 2n={}", 2 * n),
            app_d_network(n, set)?,
            &target,
            y,
            set,
        )?;
    }
    Ok(report)
}

/// Contracts a grid whose top carries are open; keys are physical labels
/// followed by top labels.
fn open_top_table(net: &Network<Z>) -> Result<BTreeMap<Vec<Label>, Z>, ContractionError> {
    let order = contraction_plan(net).order;
    Ok(contract_open(net, &order, &[])?.table)
}

/// Every grid labeling with a nonzero top carry is killed by the tree.
fn check_tops(
    report: &mut ProofReport,
    context: &str,
    table: &BTreeMap<Vec<Label>, Z>,
    sites: usize,
    tri: &LabeledTensor<Z>,
) {
    let mut nonzero_tops = 0;
    for (key, v) in table {
        let tops = &key[sites..];
        if tops.iter().all(|&l| l == Label::ZERO) {
            continue;
        }
        nonzero_tops += 1;
        let through = v * tree_value(tri, tops);
        report.checked += 1;
        if through.is_zero() {
            report.matched += 1;
        } else {
            report.fail(
                format!("{context}: nonzero top survives the tree"),
                key.clone(),
                through,
                0,
            );
        }
    }
    report.notes.push(format!(
        "{context}: {nonzero_tops} grid labelings with a nonzero top, all removed by the tree"
    ));
}

/// The zero top boundary of the hybrids can be replaced by a triangle tree
/// without changing the state, because any nonzero top carry is killed by
/// the tree; checked at `2n ∈ {2, 4}`.
pub fn verify_appendix_column_arguments(
    set: &TensorSet<Z>,
) -> Result<ProofReport, ContractionError> {
    let mut report = ProofReport::new("appendix");
    let one = Z::one();
    for n in [1usize, 2] {
        let y = log2_sites(n)?;
        let sites = 2 * n;
        let lift = 1u64 << (y + 1);
        for k in -(sites as i64)..=sites as i64 {
            let (p, q) = periodic_boundary(n, k)?;
            let (pl, ql) = (p + lift, q + lift);
            let m = y as usize + 2;
            let pinned = contract_full(&rectangle_with(
                n,
                m,
                pl,
                ql,
                NodeKind::B,
                Top::Pinned,
                set,
            )?)?;
            let tree = contract_full(&app_c_network(n, k, set)?)?;
            let hrn = contract_full(&hrn_periodic(n, p, q, set)?)?;
            let sector = periodic_sector_state(sites, k).expect("small sector");
            let ctx = format!("periodic 2n={sites} k={k}");
            compare_states(
                &mut report,
                &format!("{ctx}: zero top against tree"),
                &tree,
                &pinned,
            );
            compare_states(
                &mut report,
                &format!("{ctx}: tree against capless network"),
                &tree,
                &hrn,
            );
            compare_states(
                &mut report,
                &format!("{ctx}: against sector"),
                &pinned,
                &sector,
            );
            let open = open_top_table(&rectangle_with(n, m, pl, ql, NodeKind::B, Top::Open, set)?)?;
            check_tops(&mut report, &ctx, &open, sites, &set.t);
        }
        let m = y as usize + 1;
        let gs = ground_state_vector(sites, &one, WalkKind::Motzkin).expect("small walk");
        let ctx = format!("open 2n={sites}");
        let pinned = contract_full(&rectangle_with(n, m, 0, 0, NodeKind::B, Top::Pinned, set)?)?;
        let tree = contract_full(&app_d_network(n, set)?)?;
        let hrn = contract_full(&hrn_open(n, set)?)?;
        compare_states(
            &mut report,
            &format!("{ctx}: B grid against ground state"),
            &pinned,
            &gs,
        );
        compare_states(
            &mut report,
            &format!("{ctx}: C grid with tree against ground state"),
            &tree,
            &gs,
        );
        compare_states(
            &mut report,
            &format!("{ctx}: tree against capless network"),
            &tree,
            &hrn,
        );
        let open = open_top_table(&rectangle_with(n, m, 0, 0, NodeKind::C, Top::Open, set)?)?;
        check_tops(&mut report, &ctx, &open, sites, &set.s);
    }
    for sites in [2usize, 4, 8] {
        let zeros = vec![Label::ZERO; sites];
        report.compare(
            &format!("T tree on zeros, {sites} leaves"),
            zeros.clone(),
            &tree_value(&set.t, &zeros),
            &one,
        );
        let s_value = tree_value(&set.s, &zeros);
        report.compare(
            &format!("S tree on zeros, {sites} leaves"),
            zeros,
            &s_value,
            &one,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewrites_reach_renormalisation_networks() {
        let set = TensorSet::<Z>::standard();
        let r = verify_zip_rewrite(&set).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 3 + 5 + 9 + 17);
    }

    #[test]
    fn appendix_arguments_hold() {
        let set = TensorSet::<Z>::standard();
        let r = verify_appendix_column_arguments(&set).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn tree_values() {
        let set = TensorSet::<Z>::standard();
        let l = |v: &[i8]| v.iter().map(|&x| Label::new(x)).collect::<Vec<_>>();
        assert_eq!(tree_value(&set.t, &l(&[0, 0, 0, 0])), Z::one());
        assert_eq!(tree_value(&set.t, &l(&[1, -1])), Z::one());
        assert_eq!(tree_value(&set.t, &l(&[1, 0])), Z::zero());
        assert_eq!(tree_value(&set.t, &l(&[1, 1])), Z::zero());
    }
}
