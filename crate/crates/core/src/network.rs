//! Tensor networks as slot graphs, and builders for every network shape.
//!
//! Nodes are stored in the order they should be contracted: builders insert
//! them bottom-up, so every node's lower and left neighbours come first.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::label::{Alphabet, Label};
use crate::scalar::Scalar;
use crate::tensor::{weight_square, AreaWeighting, LabeledTensor, TensorSet};
use crate::tiles::{bits_lsb_first, Geometry, EAST, LEFT, NORTH, RIGHT, SOUTH, TOP, WEST};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("{0} sites is not a power of two of at least 2")]
    NotPowerOfTwo(usize),
    #[error("out of bounds: {0}")]
    Bounds(&'static str),
    #[error("value {value} does not fit in {m} bits")]
    Overflow { value: u64, m: usize },
    #[error("slots {a:?} and {b:?} have different alphabets")]
    AlphabetMismatch { a: SlotRef, b: SlotRef },
    #[error("label {label} is outside the alphabet of {slot:?}")]
    LabelOutOfAlphabet { slot: SlotRef, label: Label },
    #[error("slot {0:?} is not linked")]
    UnlinkedSlot(SlotRef),
    #[error("slot {0:?} is linked inconsistently")]
    BadLink(SlotRef),
    #[error("physical slots must be spin-1, found {0}")]
    PhysicalAlphabet(&'static str),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    B,
    C,
    T,
    S,
    G,
    W,
    P,
    Pi,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::B => "B",
            NodeKind::C => "C",
            NodeKind::T => "T",
            NodeKind::S => "S",
            NodeKind::G => "G",
            NodeKind::W => "W",
            NodeKind::P => "P",
            NodeKind::Pi => "Pi",
        }
    }

    pub fn is_square(self) -> bool {
        matches!(self, NodeKind::B | NodeKind::C | NodeKind::G)
    }

    pub fn is_triangle(self) -> bool {
        matches!(self, NodeKind::T | NodeKind::S | NodeKind::W)
    }
}

/// Grid placement: `row` counts from the physical layer (row 1 holds the
/// first squares), `col` is the leftmost physical column covered and `width`
/// the number of physical columns spanned.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub row: i32,
    pub col: u32,
    pub width: u32,
}

pub const fn pos(row: i32, col: u32, width: u32) -> Position {
    Position { row, col, width }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node<S> {
    pub kind: NodeKind,
    pub position: Position,
    pub tensor: Arc<LabeledTensor<S>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotRef {
    pub node: usize,
    pub slot: usize,
}

pub const fn slot(node: usize, slot: usize) -> SlotRef {
    SlotRef { node, slot }
}

/// What a slot is attached to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Link {
    Edge(SlotRef),
    Pin(Label),
    /// Index into the network's open-slot list.
    Open(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Pyramid,
    Rectangle,
    HrnPeriodic,
    HrnOpen,
    U1Mera,
    Fredkin,
    Fragment,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Pyramid => "pyramid",
            ShapeKind::Rectangle => "rectangle",
            ShapeKind::HrnPeriodic => "hrn-periodic",
            ShapeKind::HrnOpen => "hrn-open",
            ShapeKind::U1Mera => "u1",
            ShapeKind::Fredkin => "fredkin",
            ShapeKind::Fragment => "fragment",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkMeta {
    pub shape: ShapeKind,
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub q: u64,
    /// Display form of the deformation parameter.
    pub t: String,
}

impl NetworkMeta {
    pub fn new(shape: ShapeKind, n: usize) -> Self {
        NetworkMeta {
            shape,
            n,
            m: 0,
            p: 0,
            q: 0,
            t: String::from("1"),
        }
    }
}

/// A planar tensor network. Every slot has exactly one [`Link`]; the first
/// `n_physical` open slots are the physical sites, left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<S> {
    nodes: Vec<Node<S>>,
    links: BTreeMap<SlotRef, Link>,
    open: Vec<SlotRef>,
    n_physical: usize,
    pub meta: NetworkMeta,
}

impl<S: Scalar> Network<S> {
    pub fn new(meta: NetworkMeta) -> Self {
        Network {
            nodes: Vec::new(),
            links: BTreeMap::new(),
            open: Vec::new(),
            n_physical: 0,
            meta,
        }
    }

    pub fn nodes(&self) -> &[Node<S>] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node<S> {
        &self.nodes[id]
    }

    pub fn links(&self) -> &BTreeMap<SlotRef, Link> {
        &self.links
    }

    pub fn link(&self, s: SlotRef) -> Option<Link> {
        self.links.get(&s).copied()
    }

    pub fn open_slots(&self) -> &[SlotRef] {
        &self.open
    }

    pub fn physical_slots(&self) -> &[SlotRef] {
        &self.open[..self.n_physical]
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn alphabet(&self, s: SlotRef) -> Alphabet {
        self.nodes[s.node].tensor.indices()[s.slot].alphabet
    }

    /// Alphabet shared by the physical slots.
    pub fn physical_alphabet(&self) -> Option<Alphabet> {
        self.physical_slots().first().map(|&s| self.alphabet(s))
    }

    pub fn add_node(
        &mut self,
        kind: NodeKind,
        position: Position,
        tensor: Arc<LabeledTensor<S>>,
    ) -> usize {
        self.nodes.push(Node {
            kind,
            position,
            tensor,
        });
        self.nodes.len() - 1
    }

    /// Links two slots, replacing whatever they were attached to.
    pub fn connect(&mut self, a: SlotRef, b: SlotRef) -> Result<(), NetworkError> {
        if self.alphabet(a) != self.alphabet(b) {
            return Err(NetworkError::AlphabetMismatch { a, b });
        }
        self.links.insert(a, Link::Edge(b));
        self.links.insert(b, Link::Edge(a));
        Ok(())
    }

    pub fn pin(&mut self, s: SlotRef, label: Label) -> Result<(), NetworkError> {
        if !self.alphabet(s).contains(label) {
            return Err(NetworkError::LabelOutOfAlphabet { slot: s, label });
        }
        self.links.insert(s, Link::Pin(label));
        Ok(())
    }

    /// Attaches `s` to whatever `link` describes, keeping the partner's back
    /// link in step.
    pub fn attach(&mut self, s: SlotRef, link: Link) -> Result<(), NetworkError> {
        match link {
            Link::Edge(other) => self.connect(s, other),
            Link::Pin(l) => self.pin(s, l),
            Link::Open(i) => {
                self.links.insert(s, Link::Open(i));
                self.open[i] = s;
                Ok(())
            }
        }
    }

    /// Appends an open slot; physical slots must be added before any others.
    pub fn open_slot(&mut self, s: SlotRef, physical: bool) {
        assert!(
            !physical || self.open.len() == self.n_physical,
            "physical slots come first"
        );
        self.links.insert(s, Link::Open(self.open.len()));
        self.open.push(s);
        if physical {
            self.n_physical += 1;
        }
    }

    /// Deletes nodes, renumbering the rest. Links into deleted nodes must have
    /// been redirected already.
    pub fn remove_nodes(&mut self, ids: &[usize]) -> Result<(), NetworkError> {
        let mut remap = vec![None; self.nodes.len()];
        let mut next = 0;
        for (i, r) in remap.iter_mut().enumerate() {
            if !ids.contains(&i) {
                *r = Some(next);
                next += 1;
            }
        }
        let fix = |s: SlotRef| remap[s.node].map(|node| slot(node, s.slot));
        let mut links = BTreeMap::new();
        for (&s, &l) in &self.links {
            let Some(ns) = fix(s) else { continue };
            let nl = match l {
                Link::Edge(o) => Link::Edge(fix(o).ok_or(NetworkError::BadLink(s))?),
                other => other,
            };
            links.insert(ns, nl);
        }
        self.open = self
            .open
            .iter()
            .map(|&s| fix(s).ok_or(NetworkError::BadLink(s)))
            .collect::<Result<_, _>>()?;
        self.links = links;
        let mut i = 0;
        self.nodes.retain(|_| {
            let keep = !ids.contains(&i);
            i += 1;
            keep
        });
        Ok(())
    }

    /// Checks that every slot is linked exactly once, edges are symmetric and
    /// paired alphabets agree.
    pub fn validate(&self) -> Result<(), NetworkError> {
        for (id, node) in self.nodes.iter().enumerate() {
            for k in 0..node.tensor.arity() {
                let s = slot(id, k);
                match self.links.get(&s) {
                    None => return Err(NetworkError::UnlinkedSlot(s)),
                    Some(Link::Edge(o)) => {
                        if self.links.get(o) != Some(&Link::Edge(s)) {
                            return Err(NetworkError::BadLink(s));
                        }
                        if self.alphabet(*o) != self.alphabet(s) {
                            return Err(NetworkError::AlphabetMismatch { a: s, b: *o });
                        }
                    }
                    Some(Link::Pin(l)) => {
                        if !self.alphabet(s).contains(*l) {
                            return Err(NetworkError::LabelOutOfAlphabet { slot: s, label: *l });
                        }
                    }
                    Some(Link::Open(i)) => {
                        if self.open.get(*i) != Some(&s) {
                            return Err(NetworkError::BadLink(s));
                        }
                    }
                }
            }
        }
        if self.links.len() != self.nodes.iter().map(|n| n.tensor.arity()).sum::<usize>() {
            return Err(NetworkError::BadLink(slot(usize::MAX, 0)));
        }
        Ok(())
    }

    pub fn count_by_kind(&self) -> BTreeMap<NodeKind, usize> {
        let mut out = BTreeMap::new();
        for n in &self.nodes {
            *out.entry(n.kind).or_insert(0) += 1;
        }
        out
    }

    /// Node at a position, if exactly one node of that kind sits there.
    pub fn find(&self, kind: NodeKind, position: Position) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.kind == kind && n.position == position)
    }

    /// Whether every pinned charge-carrying slot sums to zero charge. Slots
    /// without an orientation are skipped.
    pub fn pinned_charge_balance(&self) -> i64 {
        use crate::tensor::Orientation;
        self.links
            .iter()
            .filter_map(|(s, l)| match l {
                Link::Pin(label) => {
                    let ix = &self.nodes[s.node].tensor.indices()[s.slot];
                    let c = ix.charge(*label)?;
                    match ix.orientation? {
                        Orientation::In => Some(c),
                        Orientation::Out => Some(-c),
                    }
                }
                _ => None,
            })
            .sum()
    }
}

/// Little-endian bits of `value` over `m` rows.
pub fn boundary_vector(value: u64, m: usize) -> Result<Vec<u8>, NetworkError> {
    bits_lsb_first(value, m)
        .map(|bits| bits.iter().map(|b| b.value().unwrap() as u8).collect())
        .ok_or(NetworkError::Overflow { value, m })
}

/// Left and right heights `(p, q)` of the periodic networks for sector `k`.
pub fn periodic_boundary(n: usize, k: i64) -> Result<(u64, u64), NetworkError> {
    let two_n = 2 * n as u64;
    if k.unsigned_abs() > two_n {
        return Err(NetworkError::Bounds("|k| must not exceed 2n"));
    }
    let low = two_n - k.unsigned_abs();
    Ok(if k >= 0 { (low, two_n) } else { (two_n, low) })
}

fn log2_sites(n: usize) -> Result<u32, NetworkError> {
    let sites = 2 * n;
    if n == 0 || !sites.is_power_of_two() {
        return Err(NetworkError::NotPowerOfTwo(sites));
    }
    Ok(sites.trailing_zeros())
}

/// Square tensor for row `row` of a grid, weighted by `t`.
fn grid_square<S: Scalar>(
    base: &LabeledTensor<S>,
    t: &S,
    row: u32,
    weighting: AreaWeighting,
) -> LabeledTensor<S> {
    let scaled = base.rescaled(1 << (row - 1));
    if t.is_one() {
        scaled
    } else {
        weight_square(&scaled, t, row, weighting)
    }
}

/// What sits on top of a grid's columns.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Top {
    /// Every column's last carry pinned to 0.
    Pinned,
    /// Carries left as open slots after the physical ones.
    Open,
    /// Carries fed into a binary triangle tree whose apex is pinned to 0.
    Tree,
}

/// `Π` under each of `sites` physical slots; returns the slots above them.
fn pi_layer<S: Scalar>(net: &mut Network<S>, sites: usize, pi: &LabeledTensor<S>) -> Vec<SlotRef> {
    let pi = Arc::new(pi.clone());
    (0..sites)
        .map(|x| {
            let id = net.add_node(NodeKind::Pi, pos(0, x as u32, 1), pi.clone());
            net.open_slot(slot(id, 0), true);
            slot(id, 1)
        })
        .collect()
}

struct GridParams<'a, S> {
    kind: NodeKind,
    base: &'a LabeledTensor<S>,
    t: &'a S,
    weighting: AreaWeighting,
    pi: Option<&'a LabeledTensor<S>>,
    top: Top,
    tree: Option<(NodeKind, &'a LabeledTensor<S>)>,
}

/// Lays squares over `geometry` column by column, bottom-up. Without `Π`
/// the row-1 south slots are the physical sites.
fn grid_network<S: Scalar>(
    meta: NetworkMeta,
    geometry: &Geometry,
    params: GridParams<'_, S>,
) -> Result<Network<S>, NetworkError> {
    let mut net = Network::new(meta);
    let max_rows = geometry.columns().iter().copied().max().unwrap_or(0);
    let rows: Vec<Arc<LabeledTensor<S>>> = (1..=max_rows as u32)
        .map(|r| Arc::new(grid_square(params.base, params.t, r, params.weighting)))
        .collect();
    let south = params.pi.map(|pi| pi_layer(&mut net, geometry.width(), pi));
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(geometry.width());
    for x in 0..geometry.width() {
        let mut col: Vec<usize> = Vec::new();
        for r in 0..geometry.column_height(x) {
            let id = net.add_node(params.kind, pos(r as i32 + 1, x as u32, 1), rows[r].clone());
            match (r, &south) {
                (0, Some(s)) => net.connect(slot(id, SOUTH), s[x])?,
                (0, None) => net.open_slot(slot(id, SOUTH), true),
                _ => net.connect(slot(id, SOUTH), slot(col[r - 1], NORTH))?,
            }
            match geometry.west_pin(x, r) {
                Some(l) => net.pin(slot(id, WEST), l)?,
                None => net.connect(slot(id, WEST), slot(cells[x - 1][r], EAST))?,
            }
            if let Some(l) = geometry.east_pin(x, r) {
                net.pin(slot(id, EAST), l)?;
            }
            col.push(id);
        }
        cells.push(col);
    }
    let tops: Vec<SlotRef> = cells
        .iter()
        .map(|c| slot(*c.last().unwrap(), NORTH))
        .collect();
    match params.top {
        Top::Pinned => {
            for &s in &tops {
                net.pin(s, Label::ZERO)?;
            }
        }
        Top::Open => {
            for &s in &tops {
                net.open_slot(s, false);
            }
        }
        Top::Tree => {
            let (kind, tri) = params
                .tree
                .ok_or(NetworkError::Bounds("tree top needs a triangle tensor"))?;
            let tri = Arc::new(tri.rescaled(1 << max_rows));
            let leaves: Vec<(SlotRef, u32)> = tops
                .iter()
                .enumerate()
                .map(|(x, &s)| (s, x as u32))
                .collect();
            triangle_tree(&mut net, kind, tri, &leaves, max_rows as i32, Label::ZERO)?;
        }
    }
    Ok(net)
}

/// Step pyramid of B tensors on `2n` sites, weighted so that each walk gets
/// `t^{A(w)}`.
pub fn pyramid<S: Scalar>(n: usize, t: &S, set: &TensorSet<S>) -> Result<Network<S>, NetworkError> {
    pyramid_weighted(n, t, AreaWeighting::EastEdge, set)
}

pub fn pyramid_weighted<S: Scalar>(
    n: usize,
    t: &S,
    weighting: AreaWeighting,
    set: &TensorSet<S>,
) -> Result<Network<S>, NetworkError> {
    let geometry =
        Geometry::pyramid(n).map_err(|_| NetworkError::Bounds("pyramid needs n >= 1"))?;
    let mut meta = NetworkMeta::new(ShapeKind::Pyramid, n);
    meta.m = geometry.columns().iter().copied().max().unwrap_or(0);
    meta.t = alloc::format!("{t}");
    let params = GridParams {
        kind: NodeKind::B,
        base: &set.b,
        t,
        weighting,
        pi: None,
        top: Top::Pinned,
        tree: None,
    };
    grid_network(meta, &geometry, params)
}

fn rectangle_geometry(n: usize, m: usize, p: u64, q: u64) -> Result<Geometry, NetworkError> {
    if n == 0 {
        return Err(NetworkError::Bounds("rectangle needs n >= 1"));
    }
    let needed = (2 * n).ilog2() as usize;
    if m < needed {
        return Err(NetworkError::Bounds("rectangle needs m >= floor(log2 2n)"));
    }
    boundary_vector(p, m)?;
    boundary_vector(q, m)?;
    Geometry::rectangle(n, m, p, q).map_err(|_| NetworkError::Bounds("rectangle geometry"))
}

/// `m × 2n` grid of B tensors summing over walks from height `p` to `q`.
pub fn rectangle<S: Scalar>(
    n: usize,
    m: usize,
    p: u64,
    q: u64,
    t: &S,
    set: &TensorSet<S>,
) -> Result<Network<S>, NetworkError> {
    let geometry = rectangle_geometry(n, m, p, q)?;
    let mut meta = NetworkMeta::new(ShapeKind::Rectangle, n);
    (meta.m, meta.p, meta.q, meta.t) = (m, p, q, alloc::format!("{t}"));
    let params = GridParams {
        kind: NodeKind::B,
        base: &set.b,
        t,
        weighting: AreaWeighting::EastEdge,
        pi: None,
        top: Top::Pinned,
        tree: None,
    };
    grid_network(meta, &geometry, params)
}

/// Rectangle at `t = 1` used by the boundary arguments: squares of `kind`
/// (B with a T tree, or C with `Π` under each site and an S tree) and the
/// given top.
pub fn rectangle_with<S: Scalar>(
    n: usize,
    m: usize,
    p: u64,
    q: u64,
    kind: NodeKind,
    top: Top,
    set: &TensorSet<S>,
) -> Result<Network<S>, NetworkError> {
    let geometry = rectangle_geometry(n, m, p, q)?;
    let mut meta = NetworkMeta::new(ShapeKind::Rectangle, n);
    (meta.m, meta.p, meta.q) = (m, p, q);
    let (base, pi, tree) = match kind {
        NodeKind::B => (&set.b, None, (NodeKind::T, &set.t)),
        NodeKind::C => (&set.c, Some(&set.pi), (NodeKind::S, &set.s)),
        _ => return Err(NetworkError::Bounds("rectangle squares must be B or C")),
    };
    let one = S::one();
    let params = GridParams {
        kind,
        base,
        t: &one,
        weighting: AreaWeighting::EastEdge,
        pi,
        top,
        tree: Some(tree),
    };
    grid_network(meta, &geometry, params)
}

/// Binary tree of triangles over `leaves` (slot and column); each level
/// halves the count and the apex output is pinned to `apex`. Every node sits
/// on `row`.
pub fn triangle_tree<S: Scalar>(
    net: &mut Network<S>,
    kind: NodeKind,
    tensor: Arc<LabeledTensor<S>>,
    leaves: &[(SlotRef, u32)],
    row: i32,
    apex: Label,
) -> Result<Vec<usize>, NetworkError> {
    if !leaves.len().is_power_of_two() {
        return Err(NetworkError::NotPowerOfTwo(leaves.len()));
    }
    let mut level: Vec<(SlotRef, u32, u32)> = leaves.iter().map(|&(s, c)| (s, c, 1)).collect();
    let mut ids = Vec::new();
    while level.len() > 1 {
        let mut next = Vec::new();
        for pair in level.chunks(2) {
            let [(a, col, w), (b, _, _)] = pair else {
                unreachable!()
            };
            let id = net.add_node(kind, pos(row, *col, 2 * w), tensor.clone());
            net.connect(slot(id, LEFT), *a)?;
            net.connect(slot(id, RIGHT), *b)?;
            ids.push(id);
            next.push((slot(id, TOP), *col, 2 * w));
        }
        level = next;
    }
    net.pin(level[0].0, apex)?;
    Ok(ids)
}

struct LayerParams<'a, S> {
    square_kind: NodeKind,
    square: &'a LabeledTensor<S>,
    tri_kind: NodeKind,
    tri: &'a LabeledTensor<S>,
    /// Extra doubling of the triangle's charge unit over the squares below.
    tri_shift: u32,
}

/// `y` renormalisation layers: per layer a row of squares (widths doubling)
/// with side bits `west[l]`, `east[l]`, then a triangle on each adjacent
/// pair of carries. Without `south` the first row owns the physical slots.
/// Returns the last triangle's output.
fn layers<S: Scalar>(
    net: &mut Network<S>,
    y: u32,
    params: &LayerParams<'_, S>,
    west: &[Label],
    east: &[Label],
    south: Option<Vec<SlotRef>>,
) -> Result<SlotRef, NetworkError> {
    let mut south = south;
    for layer in 0..y {
        let square = Arc::new(params.square.rescaled(1 << layer));
        let tri = Arc::new(params.tri.rescaled(1 << (layer + params.tri_shift)));
        let row = layer as i32 + 1;
        let width = 1u32 << layer;
        let count = 1usize << (y - layer);
        let mut ids: Vec<usize> = Vec::with_capacity(count);
        for j in 0..count {
            let id = net.add_node(
                params.square_kind,
                pos(row, j as u32 * width, width),
                square.clone(),
            );
            match &south {
                Some(s) => net.connect(slot(id, SOUTH), s[j])?,
                None => net.open_slot(slot(id, SOUTH), true),
            }
            match ids.last() {
                None => net.pin(slot(id, WEST), west[layer as usize])?,
                Some(&prev) => net.connect(slot(id, WEST), slot(prev, EAST))?,
            }
            ids.push(id);
        }
        net.pin(slot(*ids.last().unwrap(), EAST), east[layer as usize])?;
        let mut out = Vec::with_capacity(count / 2);
        for (j, pair) in ids.chunks(2).enumerate() {
            let id = net.add_node(
                params.tri_kind,
                pos(row, j as u32 * 2 * width, 2 * width),
                tri.clone(),
            );
            net.connect(slot(id, LEFT), slot(pair[0], NORTH))?;
            net.connect(slot(id, RIGHT), slot(pair[1], NORTH))?;
            out.push(slot(id, TOP));
        }
        south = Some(out);
    }
    Ok(south.expect("at least one layer")[0])
}

/// Height-renormalisation network for the periodic chain on `2n = 2^y`
/// sites with side heights `p`, `q < 2^{y+1}`: `y` layers of B rows and
/// T pairs, then one B on top whose carry is pinned to 0.
pub fn hrn_periodic<S: Scalar>(
    n: usize,
    p: u64,
    q: u64,
    set: &TensorSet<S>,
) -> Result<Network<S>, NetworkError> {
    let y = log2_sites(n)?;
    let m = y as usize + 1;
    let bits_p = bits_lsb_first(p, m).ok_or(NetworkError::Overflow { value: p, m })?;
    let bits_q = bits_lsb_first(q, m).ok_or(NetworkError::Overflow { value: q, m })?;
    let mut meta = NetworkMeta::new(ShapeKind::HrnPeriodic, n);
    (meta.m, meta.p, meta.q) = (m, p, q);
    let mut net = Network::new(meta);
    let params = LayerParams {
        square_kind: NodeKind::B,
        square: &set.b,
        tri_kind: NodeKind::T,
        tri: &set.t,
        tri_shift: 1,
    };
    let top = layers(&mut net, y, &params, &bits_p, &bits_q, None)?;
    let apex = Arc::new(set.b.rescaled(1 << y));
    let id = net.add_node(NodeKind::B, pos(y as i32 + 1, 0, 2 * n as u32), apex);
    net.connect(slot(id, SOUTH), top)?;
    net.pin(slot(id, WEST), bits_p[y as usize])?;
    net.pin(slot(id, EAST), bits_q[y as usize])?;
    net.pin(slot(id, NORTH), Label::ZERO)?;
    Ok(net)
}

/// Height-renormalisation network for the open chain on `2n = 2^y` sites:
/// `Π` under every site, `y` layers of C rows and S pairs with zero side
/// bits, apex output pinned to 0.
pub fn hrn_open<S: Scalar>(n: usize, set: &TensorSet<S>) -> Result<Network<S>, NetworkError> {
    let y = log2_sites(n)?;
    let mut meta = NetworkMeta::new(ShapeKind::HrnOpen, n);
    meta.m = y as usize;
    let mut net = Network::new(meta);
    let south = pi_layer(&mut net, 2 * n, &set.pi);
    let zeros = vec![Label::ZERO; y as usize];
    let params = LayerParams {
        square_kind: NodeKind::C,
        square: &set.c,
        tri_kind: NodeKind::S,
        tri: &set.s,
        tri_shift: 1,
    };
    let top = layers(&mut net, y, &params, &zeros, &zeros, Some(south))?;
    net.pin(top, Label::ZERO)?;
    Ok(net)
}

/// U(1) network on `2n = 2^y` sites: per level a row of G tensors with the
/// outer virtual bits pinned to 0, then W tensors blocking pairs. The last
/// output is pinned to charge 0.
pub fn u1_mera<S: Scalar>(n: usize, set: &TensorSet<S>) -> Result<Network<S>, NetworkError> {
    let y = log2_sites(n)?;
    let mut meta = NetworkMeta::new(ShapeKind::U1Mera, n);
    meta.m = y as usize;
    let mut net = Network::new(meta);
    let zeros = vec![Label::ZERO; y as usize];
    // W already counts its output in doubled units
    let params = LayerParams {
        square_kind: NodeKind::G,
        square: &set.g,
        tri_kind: NodeKind::W,
        tri: &set.w,
        tri_shift: 0,
    };
    let top = layers(&mut net, y, &params, &zeros, &zeros, None)?;
    net.pin(top, Label::ZERO)?;
    Ok(net)
}

/// Puts a `P` under every physical site, turning a spin-1 network into a
/// spin-1/2 one. The `P` nodes come first in the new network.
pub fn wrap_fredkin<S: Scalar>(
    net: &Network<S>,
    set: &TensorSet<S>,
) -> Result<Network<S>, NetworkError> {
    let alphabet = net
        .physical_alphabet()
        .ok_or(NetworkError::Bounds("no physical slots"))?;
    if !matches!(alphabet, Alphabet::Spin | Alphabet::SpinOmega) {
        return Err(NetworkError::PhysicalAlphabet(alphabet.name()));
    }
    let mut p = set.p.clone();
    if alphabet == Alphabet::SpinOmega {
        p = widen_slot(&p, 0, Alphabet::SpinOmega);
    }
    let p = Arc::new(p);
    let sites = net.n_physical();
    let mut meta = net.meta.clone();
    meta.shape = ShapeKind::Fredkin;
    let mut out = Network::new(meta);
    let bottom = net
        .nodes()
        .iter()
        .map(|n| n.position.row)
        .min()
        .unwrap_or(0)
        - 1;
    for x in 0..sites {
        let id = out.add_node(NodeKind::P, pos(bottom, x as u32, 1), p.clone());
        out.open_slot(slot(id, 1), true);
    }
    let shift = |s: SlotRef| slot(s.node + sites, s.slot);
    for node in net.nodes() {
        out.add_node(node.kind, node.position, node.tensor.clone());
    }
    for (&s, &l) in net.links() {
        match l {
            Link::Edge(o) => {
                out.links.insert(shift(s), Link::Edge(shift(o)));
            }
            Link::Pin(lab) => {
                out.links.insert(shift(s), Link::Pin(lab));
            }
            Link::Open(i) if i < sites => out.connect(shift(s), slot(i, 0))?,
            Link::Open(_) => out.open_slot(shift(s), false),
        }
    }
    out.validate()?;
    Ok(out)
}

fn widen_slot<S: Scalar>(t: &LabeledTensor<S>, k: usize, to: Alphabet) -> LabeledTensor<S> {
    let mut indices = t.indices().to_vec();
    indices[k].alphabet = to;
    let mut out = LabeledTensor::new(indices);
    for (key, v) in t.entries() {
        out.insert(key.clone(), v.clone())
            .expect("widened alphabet contains the old one");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type Z = BigInt;

    fn set() -> TensorSet<Z> {
        TensorSet::standard()
    }

    #[test]
    fn pyramid_counts() {
        for (n, b) in [(1, 2), (2, 6), (3, 10), (7, 34), (15, 98)] {
            let net = pyramid(n, &Z::from(1), &set()).unwrap();
            net.validate().unwrap();
            assert_eq!(net.count_by_kind()[&NodeKind::B], b, "n = {n}");
            assert_eq!(net.n_physical(), 2 * n);
        }
    }

    #[test]
    fn boundary_vectors() {
        assert_eq!(boundary_vector(0, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(boundary_vector(4, 3).unwrap(), vec![0, 0, 1]);
        assert_eq!(boundary_vector(12, 4).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(
            boundary_vector(8, 3),
            Err(NetworkError::Overflow { value: 8, m: 3 })
        );
        assert_eq!(periodic_boundary(2, 1).unwrap(), (3, 4));
        assert_eq!(periodic_boundary(2, -2).unwrap(), (4, 2));
    }

    #[test]
    fn layered_networks_validate() {
        for n in [1, 2, 4] {
            let s = set();
            let hp = hrn_periodic(n, 2 * n as u64, 2 * n as u64, &s).unwrap();
            hp.validate().unwrap();
            let counts = hp.count_by_kind();
            assert_eq!(counts[&NodeKind::B], 4 * n - 1);
            assert_eq!(counts[&NodeKind::T], 2 * n - 1);
            let ho = hrn_open(n, &s).unwrap();
            ho.validate().unwrap();
            assert_eq!(ho.count_by_kind()[&NodeKind::Pi], 2 * n);
            let u = u1_mera(n, &s).unwrap();
            u.validate().unwrap();
            assert_eq!(u.pinned_charge_balance(), 0);
            let f = wrap_fredkin(&ho, &s).unwrap();
            assert_eq!(f.physical_alphabet(), Some(Alphabet::HalfSpin));
        }
        assert_eq!(hrn_open(3, &set()), Err(NetworkError::NotPowerOfTwo(6)));
        assert!(matches!(
            u1_mera(0, &set()),
            Err(NetworkError::NotPowerOfTwo(0))
        ));
    }

    #[test]
    fn rectangle_bounds() {
        let s = set();
        assert!(rectangle(4, 2, 0, 0, &Z::from(1), &s).is_err());
        assert!(rectangle(2, 2, 4, 0, &Z::from(1), &s).is_err());
        let r = rectangle(2, 3, 4, 3, &Z::from(1), &s).unwrap();
        r.validate().unwrap();
        assert_eq!(r.count_by_kind()[&NodeKind::B], 12);
    }
}
