//! Tile inventories, grid tilings and the walk/tiling bijection.
//!
//! A square tile has edges `(south, west, east, north)`; the west/east edges
//! carry one binary digit of the height and the north edge is the carry
//! handed to the row above. A triangle tile has edges `(left, right, top)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::label::{Alphabet, Label};
use crate::state::SpinConfig;

/// Largest fragment enumerated exhaustively.
pub const FRAGMENT_CELL_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TileError {
    #[error("unknown tile family `{0}`")]
    UnknownFamily(String),
    #[error("tiling leaves cells unassigned")]
    PartialAssignment,
    #[error("tiling is not valid")]
    InvalidTiling,
    #[error("geometry has {have} rows but {needed} are required")]
    GeometryTooShort { needed: usize, have: usize },
    #[error("configuration has {got} sites, geometry has {expected} columns")]
    ConfigLength { expected: usize, got: usize },
    #[error("fragment has {cells} cells, cap is {cap}")]
    FragmentTooLarge { cells: usize, cap: usize },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(&'static str),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Square,
    Triangle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum TileEdges {
    Square {
        south: Label,
        west: Label,
        east: Label,
        north: Label,
    },
    Triangle {
        left: Label,
        right: Label,
        top: Label,
    },
}

/// One rank-one term of a tensor.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tile {
    pub name: &'static str,
    pub edges: TileEdges,
}

impl Tile {
    pub fn shape(&self) -> Shape {
        match self.edges {
            TileEdges::Square { .. } => Shape::Square,
            TileEdges::Triangle { .. } => Shape::Triangle,
        }
    }

    /// Edge labels in slot order: `[south, west, east, north]` or
    /// `[left, right, top]`.
    pub fn labels(&self) -> Vec<Label> {
        match self.edges {
            TileEdges::Square {
                south,
                west,
                east,
                north,
            } => vec![south, west, east, north],
            TileEdges::Triangle { left, right, top } => vec![left, right, top],
        }
    }

    pub fn edge(&self, side: usize) -> Label {
        self.labels()[side]
    }

    /// West plus east bit; zero for triangles.
    pub fn horizontal_bits(&self) -> u32 {
        match self.edges {
            TileEdges::Square { west, east, .. } => {
                (west == Label::PLUS) as u32 + (east == Label::PLUS) as u32
            }
            TileEdges::Triangle { .. } => 0,
        }
    }

    pub fn has_omega(&self) -> bool {
        self.labels().iter().any(|l| l.is_omega())
    }
}

pub const SOUTH: usize = 0;
pub const WEST: usize = 1;
pub const EAST: usize = 2;
pub const NORTH: usize = 3;
pub const LEFT: usize = 0;
pub const RIGHT: usize = 1;
pub const TOP: usize = 2;

const fn l(v: i8) -> Label {
    Label::new(v)
}

const W: Label = Label::OMEGA;

const fn sq(name: &'static str, south: Label, west: Label, east: Label, north: Label) -> Tile {
    Tile {
        name,
        edges: TileEdges::Square {
            south,
            west,
            east,
            north,
        },
    }
}

const fn tri(name: &'static str, left: Label, right: Label, top: Label) -> Tile {
    Tile {
        name,
        edges: TileEdges::Triangle { left, right, top },
    }
}

// Binary addition: south + west = east + 2 north.
const A_TILES: [Tile; 8] = [
    sq("A1", l(1), l(0), l(1), l(0)),
    sq("A2", l(1), l(1), l(0), l(1)),
    sq("A3", l(0), l(1), l(1), l(0)),
    sq("A4", l(0), l(0), l(0), l(0)),
    sq("A5", l(-1), l(1), l(0), l(0)),
    sq("A6", l(-1), l(0), l(1), l(-1)),
    // ω lines run vertically; a set bit absorbs one, a clear bit passes it up.
    sq("A7", W, l(1), l(1), l(0)),
    sq("A8", W, l(0), l(0), W),
];

// top = left + right
const D_TILES: [Tile; 7] = [
    tri("D1", l(1), l(0), l(1)),
    tri("D2", l(0), l(1), l(1)),
    tri("D3", l(1), l(-1), l(0)),
    tri("D4", l(-1), l(0), l(-1)),
    tri("D5", l(0), l(0), l(0)),
    tri("D6", l(0), l(-1), l(-1)),
    tri("D7", l(-1), l(1), l(0)),
];

const E_TILES: [Tile; 12] = [
    tri("E1", l(1), l(0), l(1)),
    tri("E2", l(0), l(1), l(1)),
    tri("E3", l(1), l(-1), l(0)),
    tri("E4", l(-1), l(0), l(-1)),
    tri("E5", l(0), l(0), l(0)),
    tri("E6", l(0), l(-1), l(-1)),
    // a valley emits an ω line instead of cancelling
    tri("E7", l(-1), l(1), W),
    tri("E8", W, l(0), W),
    tri("E9", l(0), W, W),
    tri("E10", W, W, W),
    tri("E11", W, l(-1), l(-1)),
    tri("E12", l(1), W, l(1)),
];

// south k + west i = east j + north l, with l = ±1
const G_TILES: [Tile; 6] = [
    sq("G1", l(-1), l(0), l(0), l(-1)),
    sq("G2", l(0), l(0), l(1), l(-1)),
    sq("G3", l(1), l(0), l(0), l(1)),
    sq("G4", l(-1), l(1), l(1), l(-1)),
    sq("G5", l(0), l(1), l(0), l(1)),
    sq("G6", l(1), l(1), l(1), l(1)),
];

// left + right = 2 top
const W_TILES: [Tile; 4] = [
    tri("W1", l(-1), l(-1), l(-1)),
    tri("W2", l(-1), l(1), l(0)),
    tri("W3", l(1), l(-1), l(0)),
    tri("W4", l(1), l(1), l(1)),
];

/// The named tile families; each tensor is the sum of its family's tiles.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    B,
    C,
    T,
    S,
    G,
    W,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::B,
        Family::C,
        Family::T,
        Family::S,
        Family::G,
        Family::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::B => "B",
            Family::C => "C",
            Family::T => "T",
            Family::S => "S",
            Family::G => "G",
            Family::W => "W",
        }
    }

    pub fn from_name(name: &str) -> Result<Family, TileError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| TileError::UnknownFamily(String::from(name)))
    }

    pub fn tiles(self) -> &'static [Tile] {
        match self {
            Family::B => &A_TILES[..6],
            Family::C => &A_TILES,
            Family::T => &D_TILES,
            Family::S => &E_TILES,
            Family::G => &G_TILES,
            Family::W => &W_TILES,
        }
    }

    pub fn shape(self) -> Shape {
        match self {
            Family::B | Family::C | Family::G => Shape::Square,
            Family::T | Family::S | Family::W => Shape::Triangle,
        }
    }

    /// Alphabet of each slot, in slot order.
    pub fn alphabets(self) -> &'static [Alphabet] {
        use Alphabet::*;
        match self {
            Family::B => &[Spin, Bit, Bit, Spin],
            Family::C => &[SpinOmega, Bit, Bit, SpinOmega],
            Family::G => &[Spin, Bit, Bit, PlusMinus],
            Family::T => &[Spin, Spin, Spin],
            Family::S => &[SpinOmega, SpinOmega, SpinOmega],
            Family::W => &[PlusMinus, PlusMinus, Spin],
        }
    }

    /// Integer multiplier of each slot's label in the local balance, signed
    /// by direction (incoming positive).
    pub fn flow_weights(self) -> &'static [i64] {
        match self {
            Family::B | Family::C => &[1, 1, -1, -2],
            Family::G => &[1, 1, -1, -1],
            Family::T | Family::S => &[1, 1, -1],
            Family::W => &[1, 1, -2],
        }
    }

    pub fn arity(self) -> usize {
        self.alphabets().len()
    }
}

/// Tiles of a family, looked up by name (`"B"`, `"c"`, ...).
pub fn tile_family(name: &str) -> Result<&'static [Tile], TileError> {
    Family::from_name(name).map(Family::tiles)
}

/// The local balance rule of `family`, ignoring tiles that carry ω.
pub fn satisfies_flow_rule(tile: &Tile, family: Family) -> bool {
    if tile.has_omega() {
        return true;
    }
    let sum: i64 = tile
        .labels()
        .iter()
        .zip(family.flow_weights())
        .map(|(lab, w)| lab.value().unwrap() as i64 * w)
        .sum();
    sum == 0
}

fn floor_log2(x: usize) -> usize {
    x.ilog2() as usize
}

/// Cell layout of a square-tile grid together with its boundary pins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    columns: Vec<usize>,
    west: Vec<Label>,
    east: Vec<Label>,
    kind: GeometryKind,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GeometryKind {
    Pyramid,
    Rectangle { m: usize, p: u64, q: u64 },
}

/// Little-endian binary digits of `value`, padded to `m`.
pub fn bits_lsb_first(value: u64, m: usize) -> Option<Vec<Label>> {
    if m < 64 && value >> m != 0 {
        return None;
    }
    Some((0..m).map(|k| Label::bit((value >> k) & 1 == 1)).collect())
}

impl Geometry {
    /// Step pyramid on `2n` columns; column `x` (1-based) holds
    /// `⌊log₂ 2·min(x, 2n+1−x)⌋` cells.
    pub fn pyramid(n: usize) -> Result<Geometry, TileError> {
        if n == 0 {
            return Err(TileError::InvalidGeometry("pyramid needs n >= 1"));
        }
        let width = 2 * n;
        let columns: Vec<usize> = (1..=width)
            .map(|x| floor_log2(2 * x.min(width + 1 - x)))
            .collect();
        let west = vec![Label::ZERO; columns[0]];
        let east = vec![Label::ZERO; columns[width - 1]];
        Ok(Geometry {
            columns,
            west,
            east,
            kind: GeometryKind::Pyramid,
        })
    }

    /// `m × 2n` rectangle with the heights `p`, `q` pinned in binary on the
    /// west and east sides, least significant bit on the bottom row.
    pub fn rectangle(n: usize, m: usize, p: u64, q: u64) -> Result<Geometry, TileError> {
        if n == 0 || m == 0 {
            return Err(TileError::InvalidGeometry("rectangle needs n, m >= 1"));
        }
        let west = bits_lsb_first(p, m).ok_or(TileError::InvalidGeometry("p needs more rows"))?;
        let east = bits_lsb_first(q, m).ok_or(TileError::InvalidGeometry("q needs more rows"))?;
        Ok(Geometry {
            columns: vec![m; 2 * n],
            west,
            east,
            kind: GeometryKind::Rectangle { m, p, q },
        })
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn column_height(&self, x: usize) -> usize {
        self.columns[x]
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn cell_count(&self) -> usize {
        self.columns.iter().sum()
    }

    /// Rows needed so that every column can hold the heights it may see.
    pub fn required_rows(&self) -> usize {
        floor_log2(self.width())
    }

    /// Label pinned on the west edge of cell `(x, r)`, if that edge is on the
    /// boundary.
    pub fn west_pin(&self, x: usize, r: usize) -> Option<Label> {
        if x == 0 {
            Some(self.west[r])
        } else if r >= self.columns[x - 1] {
            Some(Label::ZERO)
        } else {
            None
        }
    }

    pub fn east_pin(&self, x: usize, r: usize) -> Option<Label> {
        if x + 1 == self.width() {
            Some(self.east[r])
        } else if r >= self.columns[x + 1] {
            Some(Label::ZERO)
        } else {
            None
        }
    }

    pub fn west_bits(&self) -> &[Label] {
        &self.west
    }

    pub fn east_bits(&self) -> &[Label] {
        &self.east
    }
}

/// Square tiles assigned to a grid, column-major (`cells[x][r]`, row 0 at the
/// bottom).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub geometry: Geometry,
    pub cells: Vec<Vec<Option<Tile>>>,
}

impl Tiling {
    pub fn empty(geometry: Geometry) -> Tiling {
        let cells = geometry.columns.iter().map(|&h| vec![None; h]).collect();
        Tiling { geometry, cells }
    }

    /// The tile at `(x, r)`; `None` if unassigned or outside the grid.
    pub fn get(&self, x: usize, r: usize) -> Option<&Tile> {
        self.cells.get(x)?.get(r)?.as_ref()
    }

    fn total(&self) -> Result<Vec<Vec<Tile>>, TileError> {
        self.cells
            .iter()
            .map(|col| {
                col.iter()
                    .map(|c| c.ok_or(TileError::PartialAssignment))
                    .collect()
            })
            .collect()
    }

    /// Height encoded between column `x-1` and `x` (`x` in `0..=width`).
    pub fn height_between(&self, x: usize) -> Option<u64> {
        let g = &self.geometry;
        let bits: Vec<Label> = if x == 0 {
            g.west.clone()
        } else {
            self.cells[x - 1]
                .iter()
                .map(|c| c.map(|t| t.edge(EAST)))
                .collect::<Option<Vec<_>>>()?
        };
        Some(
            bits.iter()
                .enumerate()
                .map(|(k, b)| (b.value().unwrap_or(0) as u64) << k)
                .sum(),
        )
    }
}

/// Whether every shared edge matches and every pin is respected.
pub fn is_valid_tiling(til: &Tiling) -> Result<bool, TileError> {
    let cells = til.total()?;
    let g = &til.geometry;
    for (x, col) in cells.iter().enumerate() {
        for (r, tile) in col.iter().enumerate() {
            if !Family::B.tiles().contains(tile) {
                return Ok(false);
            }
            let north_ok = match col.get(r + 1) {
                Some(up) => up.edge(SOUTH) == tile.edge(NORTH),
                None => tile.edge(NORTH) == Label::ZERO,
            };
            let west_ok = match g.west_pin(x, r) {
                Some(pin) => tile.edge(WEST) == pin,
                None => cells[x - 1][r].edge(EAST) == tile.edge(WEST),
            };
            let east_ok = match g.east_pin(x, r) {
                Some(pin) => tile.edge(EAST) == pin,
                None => true, // checked from the other side
            };
            if !(north_ok && west_ok && east_ok) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_config(config: &SpinConfig, geometry: &Geometry) -> Result<(), TileError> {
    if config.len() != geometry.width() {
        return Err(TileError::ConfigLength {
            expected: geometry.width(),
            got: config.len(),
        });
    }
    if let GeometryKind::Rectangle { m, .. } = geometry.kind {
        let needed = geometry.required_rows();
        if m < needed {
            return Err(TileError::GeometryTooShort { needed, have: m });
        }
    }
    Ok(())
}

/// The tiling that performs binary addition of `config` onto the west
/// boundary height, or `None` when no valid tiling exists.
pub fn tiling_from_config(
    config: &SpinConfig,
    geometry: &Geometry,
) -> Result<Option<Tiling>, TileError> {
    check_config(config, geometry)?;
    let mut til = Tiling::empty(geometry.clone());
    let mut carry_in: Vec<Label> = geometry.west.clone();
    for x in 0..geometry.width() {
        let h = geometry.columns[x];
        let mut south = Label::new(config.0[x]);
        let mut east = Vec::with_capacity(h);
        for r in 0..h {
            // rows above the previous column are pinned
            let west = geometry
                .west_pin(x, r)
                .or_else(|| carry_in.get(r).copied())
                .expect("west edge is pinned or carried");
            let Some(tile) = Family::B
                .tiles()
                .iter()
                .find(|t| t.edge(SOUTH) == south && t.edge(WEST) == west)
            else {
                return Ok(None);
            };
            if geometry
                .east_pin(x, r)
                .is_some_and(|pin| pin != tile.edge(EAST))
            {
                return Ok(None);
            }
            til.cells[x][r] = Some(*tile);
            east.push(tile.edge(EAST));
            south = tile.edge(NORTH);
        }
        if south != Label::ZERO {
            return Ok(None);
        }
        carry_in = east;
    }
    debug_assert_eq!(is_valid_tiling(&til), Ok(true));
    Ok(Some(til))
}

/// South boundary of a valid tiling.
pub fn config_from_tiling(til: &Tiling) -> Result<SpinConfig, TileError> {
    if !is_valid_tiling(til)? {
        return Err(TileError::InvalidTiling);
    }
    Ok(SpinConfig(
        til.cells
            .iter()
            .map(|col| col[0].unwrap().edge(SOUTH).value().unwrap())
            .collect(),
    ))
}

/// Every valid tiling with south boundary `config`, found by trying every
/// B tile in every cell (no use of the addition rule).
pub fn all_tilings(config: &SpinConfig, geometry: &Geometry) -> Result<Vec<Tiling>, TileError> {
    check_config(config, geometry)?;
    let mut out = Vec::new();
    let mut til = Tiling::empty(geometry.clone());
    search(&mut til, config, 0, 0, &mut out);
    Ok(out)
}

fn search(til: &mut Tiling, config: &SpinConfig, x: usize, r: usize, out: &mut Vec<Tiling>) {
    if x == til.geometry.width() {
        out.push(til.clone());
        return;
    }
    let h = til.geometry.columns[x];
    let (nx, nr) = if r + 1 == h { (x + 1, 0) } else { (x, r + 1) };
    let west_pin = til.geometry.west_pin(x, r);
    let east_pin = til.geometry.east_pin(x, r);
    for tile in Family::B.tiles() {
        let south_ok = if r == 0 {
            tile.edge(SOUTH) == Label::new(config.0[x])
        } else {
            til.cells[x][r - 1].unwrap().edge(NORTH) == tile.edge(SOUTH)
        };
        let west_ok = match west_pin {
            Some(pin) => pin == tile.edge(WEST),
            None => til.cells[x - 1][r].unwrap().edge(EAST) == tile.edge(WEST),
        };
        let east_ok = east_pin.is_none_or(|pin| pin == tile.edge(EAST));
        let top_ok = r + 1 < h || tile.edge(NORTH) == Label::ZERO;
        if south_ok && west_ok && east_ok && top_ok {
            til.cells[x][r] = Some(*tile);
            search(til, config, nx, nr, out);
            til.cells[x][r] = None;
        }
    }
}

/// A slot of one cell in a fragment.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub cell: usize,
    pub side: usize,
}

pub const fn port(cell: usize, side: usize) -> Port {
    Port { cell, side }
}

/// A small planar patch of tiles: cells, internal bonds, the boundary slots
/// that are fixed by a labeling (`inputs`) and those that are read off the
/// tiling (`outputs`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub cells: Vec<Family>,
    pub bonds: Vec<(Port, Port)>,
    pub inputs: Vec<Port>,
    pub outputs: Vec<Port>,
}

/// One valid tiling of a fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentTiling {
    pub tiles: Vec<Tile>,
    pub outputs: Vec<Label>,
}

impl Fragment {
    pub fn input_alphabets(&self) -> Vec<Alphabet> {
        self.inputs
            .iter()
            .map(|p| self.cells[p.cell].alphabets()[p.side])
            .collect()
    }

    fn partner(&self, p: Port) -> Option<Port> {
        self.bonds.iter().find_map(|&(a, b)| {
            if a == p {
                Some(b)
            } else if b == p {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Zipper left-hand side: a 2×2 block of squares with a triangle on the
/// upper pair. Inputs `[west_r, west_{r+1}, south_1, south_2]`, outputs
/// `[east_r, east_{r+1}, top]`.
pub fn zipper_lhs(square: Family, triangle: Family) -> Fragment {
    Fragment {
        cells: vec![square, square, square, square, triangle],
        bonds: vec![
            (port(0, EAST), port(1, WEST)),
            (port(0, NORTH), port(2, SOUTH)),
            (port(1, NORTH), port(3, SOUTH)),
            (port(2, EAST), port(3, WEST)),
            (port(2, NORTH), port(4, LEFT)),
            (port(3, NORTH), port(4, RIGHT)),
        ],
        inputs: vec![port(0, WEST), port(2, WEST), port(0, SOUTH), port(1, SOUTH)],
        outputs: vec![port(1, EAST), port(3, EAST), port(4, TOP)],
    }
}

/// Zipper right-hand side: the lower pair, a triangle on their carries and a
/// single square above it. Same boundary order as [`zipper_lhs`].
pub fn zipper_rhs(square: Family, triangle: Family) -> Fragment {
    Fragment {
        cells: vec![square, square, triangle, square],
        bonds: vec![
            (port(0, EAST), port(1, WEST)),
            (port(0, NORTH), port(2, LEFT)),
            (port(1, NORTH), port(2, RIGHT)),
            (port(2, TOP), port(3, SOUTH)),
        ],
        inputs: vec![port(0, WEST), port(3, WEST), port(0, SOUTH), port(1, SOUTH)],
        outputs: vec![port(1, EAST), port(3, EAST), port(3, NORTH)],
    }
}

/// All valid tilings of `frag` for every labeling of its input slots.
///
/// Every labeling of the input alphabets appears as a key, even when it has
/// no tiling.
pub fn enumerate_fragment_tilings(
    frag: &Fragment,
) -> Result<BTreeMap<Vec<Label>, Vec<FragmentTiling>>, TileError> {
    if frag.cells.len() > FRAGMENT_CELL_CAP {
        return Err(TileError::FragmentTooLarge {
            cells: frag.cells.len(),
            cap: FRAGMENT_CELL_CAP,
        });
    }
    let alphabets = frag.input_alphabets();
    let mut out = BTreeMap::new();
    for labeling in product(&alphabets) {
        let mut found = Vec::new();
        let mut chosen: Vec<Option<Tile>> = vec![None; frag.cells.len()];
        fill(frag, &labeling, 0, &mut chosen, &mut found);
        out.insert(labeling, found);
    }
    Ok(out)
}

fn fill(
    frag: &Fragment,
    labeling: &[Label],
    cell: usize,
    chosen: &mut Vec<Option<Tile>>,
    found: &mut Vec<FragmentTiling>,
) {
    if cell == frag.cells.len() {
        let tiles: Vec<Tile> = chosen.iter().map(|t| t.unwrap()).collect();
        let outputs = frag
            .outputs
            .iter()
            .map(|p| tiles[p.cell].edge(p.side))
            .collect();
        found.push(FragmentTiling { tiles, outputs });
        return;
    }
    'tiles: for tile in frag.cells[cell].tiles() {
        for side in 0..frag.cells[cell].arity() {
            let here = port(cell, side);
            let lab = tile.edge(side);
            if let Some(i) = frag.inputs.iter().position(|&p| p == here) {
                if labeling[i] != lab {
                    continue 'tiles;
                }
            }
            if let Some(other) = frag.partner(here) {
                let placed = chosen[other.cell];
                if placed.is_some_and(|t| t.edge(other.side) != lab) {
                    continue 'tiles;
                }
            }
        }
        chosen[cell] = Some(*tile);
        fill(frag, labeling, cell + 1, chosen, found);
        chosen[cell] = None;
    }
}

/// Cartesian product of the alphabets, in lexicographic order.
pub fn product(alphabets: &[Alphabet]) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = vec![Vec::new()];
    for a in alphabets {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                a.labels().iter().map(move |&lab| {
                    let mut v = prefix.clone();
                    v.push(lab);
                    v
                })
            })
            .collect();
    }
    out
}
