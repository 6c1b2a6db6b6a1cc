//! Mechanised checks of the local identities the networks rest on, plus the
//! oracle suites used by the mutation battery.
//!
//! Every verifier takes the [`TensorSet`] to check, so a corrupted set can be
//! run through the same code as the shipped one.

mod appendix;
mod mutation;

pub use appendix::{
    app_c_network, app_d_network, canonical_form, isomorphic, remove_cap, tree_value,
    verify_appendix_column_arguments, verify_zip_rewrite, zip_sweeps, zip_triangle, CanonicalForm,
};
pub use mutation::{
    first_failure, mutation_battery, run_suite, run_suites, MutationReport, MutationRow, SUITES,
};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::contraction::{
    contract_full, contract_open, contraction_plan, internal_labelings, ContractionError,
};
use crate::label::{Alphabet, Label};
use crate::network::{
    hrn_open, hrn_periodic, periodic_boundary, pos, pyramid, slot, u1_mera, wrap_fredkin, Network,
    NetworkError, NetworkMeta, NodeKind, ShapeKind,
};
use crate::state::{SpinConfig, StateVector};
use crate::tensor::{LabeledTensor, TensorSet};
use crate::tiles::{
    enumerate_fragment_tilings, product, zipper_lhs, zipper_rhs, Family, Fragment, EAST, NORTH,
    WEST,
};
use crate::walk::{ground_state_vector, periodic_sector_state, WalkKind};

type Z = BigInt;

/// A labeling on which two sides disagree, or a check that failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub labels: Vec<Label>,
    pub lhs: String,
    pub rhs: String,
    pub context: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: labels [", self.context)?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "] lhs {} rhs {}", self.lhs, self.rhs)
    }
}

/// Nonzero outputs of one side for one input labeling.
pub type Outputs = Vec<(Vec<Label>, Z)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub inputs: Vec<Label>,
    pub lhs: Outputs,
    pub rhs: Outputs,
    /// Tile names of each side's tilings, for display.
    pub lhs_tiles: Vec<String>,
    pub rhs_tiles: Vec<String>,
}

impl ReportRow {
    pub fn matches(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub name: String,
    /// Boundary labelings (or cases) examined.
    pub checked: usize,
    /// Cases where both sides agree.
    pub matched: usize,
    /// Agreeing cases with a nonzero value.
    pub nonzero: usize,
    /// Zipper only: ω-free labelings whose C/S row equals the B/T row.
    pub shared: Option<usize>,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
    pub failures: Vec<Counterexample>,
}

impl ProofReport {
    pub fn new(name: &str) -> Self {
        ProofReport {
            name: name.to_string(),
            checked: 0,
            matched: 0,
            nonzero: 0,
            shared: None,
            rows: Vec::new(),
            notes: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(
        &mut self,
        context: impl Into<String>,
        labels: Vec<Label>,
        lhs: impl ToString,
        rhs: impl ToString,
    ) {
        self.failures.push(Counterexample {
            labels,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            context: context.into(),
        });
    }

    /// Counts one case, recording a failure when `lhs != rhs`.
    fn compare<T: PartialEq + fmt::Display>(
        &mut self,
        context: &str,
        labels: Vec<Label>,
        lhs: &T,
        rhs: &T,
    ) {
        self.checked += 1;
        if lhs == rhs {
            self.matched += 1;
        } else {
            self.fail(context, labels, lhs, rhs);
        }
    }

    fn absorb(&mut self, other: ProofReport) {
        self.checked += other.checked;
        self.matched += other.matched;
        self.nonzero += other.nonzero;
        self.notes.extend(
            other
                .notes
                .into_iter()
                .map(|n| format!("{}: {n}", other.name)),
        );
        self.failures.extend(other.failures);
    }
}

fn labels_str(ls: &[Label]) -> String {
    let mut s = String::new();
    for (i, l) in ls.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&l.to_string());
    }
    s
}

fn outputs_str(o: &Outputs) -> String {
    if o.is_empty() {
        return "0".to_string();
    }
    o.iter()
        .map(|(k, v)| format!("({}) {}", labels_str(k), v))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        writeln!(
            f,
            "  checked {}  matched {}  nonzero {}",
            self.checked, self.matched, self.nonzero
        )?;
        if let Some(s) = self.shared {
            writeln!(f, "  shared with B/T: {s}")?;
        }
        if !self.rows.is_empty() {
            writeln!(
                f,
                "  {:>3}  {:<12} {:<22} {:<22} tiles",
                "#", "inputs", "lhs", "rhs"
            )?;
        }
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(
                f,
                "  {:>3}  {:<12} {:<22} {:<22} {} | {}{}",
                i + 1,
                labels_str(&r.inputs),
                outputs_str(&r.lhs),
                outputs_str(&r.rhs),
                r.lhs_tiles.join(" "),
                r.rhs_tiles.join(" "),
                if r.matches() { "" } else { "  MISMATCH" }
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for c in &self.failures {
            writeln!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}

fn node_kind(f: Family) -> NodeKind {
    match f {
        Family::B => NodeKind::B,
        Family::C => NodeKind::C,
        Family::T => NodeKind::T,
        Family::S => NodeKind::S,
        Family::G => NodeKind::G,
        Family::W => NodeKind::W,
    }
}

/// Fragment as a network: inputs then outputs become open slots.
pub fn fragment_network(frag: &Fragment, set: &TensorSet<Z>) -> Result<Network<Z>, NetworkError> {
    let mut net = Network::new(NetworkMeta::new(ShapeKind::Fragment, 0));
    for (i, &fam) in frag.cells.iter().enumerate() {
        net.add_node(
            node_kind(fam),
            pos(0, i as u32, 1),
            Arc::new(set.family(fam).clone()),
        );
    }
    for &(a, b) in &frag.bonds {
        net.connect(slot(a.cell, a.side), slot(b.cell, b.side))?;
    }
    for p in frag.inputs.iter().chain(&frag.outputs) {
        net.open_slot(slot(p.cell, p.side), false);
    }
    net.validate()?;
    Ok(net)
}

/// Full tensor of a fragment keyed by `[inputs.., outputs..]`.
fn fragment_table(
    frag: &Fragment,
    set: &TensorSet<Z>,
) -> Result<BTreeMap<Vec<Label>, Z>, ContractionError> {
    let net = fragment_network(frag, set)?;
    let order = contraction_plan(&net).order;
    Ok(contract_open(&net, &order, &[])?.table)
}

fn split_rows(table: &BTreeMap<Vec<Label>, Z>, n_in: usize) -> BTreeMap<Vec<Label>, Outputs> {
    let mut out: BTreeMap<Vec<Label>, Outputs> = BTreeMap::new();
    for (k, v) in table {
        out.entry(k[..n_in].to_vec())
            .or_default()
            .push((k[n_in..].to_vec(), v.clone()));
    }
    out
}

fn tile_names(frag: &Fragment) -> BTreeMap<Vec<Label>, Vec<String>> {
    enumerate_fragment_tilings(frag)
        .map(|m| {
            m.into_iter()
                .map(|(k, ts)| {
                    let names = ts
                        .iter()
                        .map(|t| t.tiles.iter().map(|x| x.name).collect::<Vec<_>>().join(""))
                        .collect();
                    (k, names)
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Compares both zipper sides on every labeling of the input slots. A
/// labeling fails if the sides differ or if it has no tiling at all.
fn zipper(
    set: &TensorSet<Z>,
    sq: Family,
    tri: Family,
    name: &str,
) -> Result<(ProofReport, BTreeMap<Vec<Label>, Outputs>), ContractionError> {
    let (lf, rf) = (zipper_lhs(sq, tri), zipper_rhs(sq, tri));
    let n_in = lf.inputs.len();
    let lhs = split_rows(&fragment_table(&lf, set)?, n_in);
    let rhs = split_rows(&fragment_table(&rf, set)?, n_in);
    let (lt, rt) = (tile_names(&lf), tile_names(&rf));
    let mut report = ProofReport::new(name);
    for inputs in product(&lf.input_alphabets()) {
        let row = ReportRow {
            lhs: lhs.get(&inputs).cloned().unwrap_or_default(),
            rhs: rhs.get(&inputs).cloned().unwrap_or_default(),
            lhs_tiles: lt.get(&inputs).cloned().unwrap_or_default(),
            rhs_tiles: rt.get(&inputs).cloned().unwrap_or_default(),
            inputs,
        };
        report.checked += 1;
        if !row.matches() {
            report.fail(
                "sides differ",
                row.inputs.clone(),
                outputs_str(&row.lhs),
                outputs_str(&row.rhs),
            );
        } else {
            report.matched += 1;
            if row.lhs.is_empty() {
                report.fail("labeling has no tiling", row.inputs.clone(), "0", "0");
            } else {
                report.nonzero += 1;
            }
        }
        report.rows.push(row);
    }
    let rows = report
        .rows
        .iter()
        .map(|r| (r.inputs.clone(), r.lhs.clone()))
        .collect();
    Ok((report, rows))
}

pub fn verify_zipper_bt(set: &TensorSet<Z>) -> Result<ProofReport, ContractionError> {
    Ok(zipper(set, Family::B, Family::T, "zipper-bt")?.0)
}

/// C/S zipper. Also counts the ω-free labelings whose C/S tilings, on both
/// sides, are exactly the B/T tilings with each `Dᵢ` read as `Eᵢ`.
pub fn verify_zipper_cs(set: &TensorSet<Z>) -> Result<ProofReport, ContractionError> {
    let (mut report, _) = zipper(set, Family::C, Family::S, "zipper-cs")?;
    let bt: BTreeMap<Vec<Label>, (Vec<String>, Vec<String>)> = report_tilings(Family::B, Family::T);
    let cs = report_tilings(Family::C, Family::S);
    let rename =
        |names: &[String]| -> Vec<String> { names.iter().map(|n| n.replace('D', "E")).collect() };
    let mut shared = 0;
    let mut excluded = Vec::new();
    for (inputs, (l, r)) in &bt {
        match cs.get(inputs) {
            Some((cl, cr)) if *cl == rename(l) && *cr == rename(r) => shared += 1,
            _ => excluded.push(labels_str(inputs)),
        }
    }
    report.shared = Some(shared);
    report.notes.push(format!(
        "B/T labelings whose tiling does not carry over: {}",
        excluded.join("; ")
    ));
    Ok(report)
}

/// Tile names of both zipper sides per input labeling.
fn report_tilings(sq: Family, tri: Family) -> BTreeMap<Vec<Label>, (Vec<String>, Vec<String>)> {
    let (l, r) = (
        tile_names(&zipper_lhs(sq, tri)),
        tile_names(&zipper_rhs(sq, tri)),
    );
    l.into_iter()
        .map(|(k, ln)| {
            let rn = r.get(&k).cloned().unwrap_or_default();
            (k, (ln, rn))
        })
        .collect()
}

/// The cap square with its sides pinned equals `δ_{s,0}` on its south slot:
/// west = east = 1 for B, 0 for C, north 0 in both.
pub fn verify_cap_removal(
    set: &TensorSet<Z>,
    kind: NodeKind,
) -> Result<ProofReport, ContractionError> {
    let (tensor, side, name) = match kind {
        NodeKind::B => (&set.b, Label::PLUS, "cap-bt"),
        NodeKind::C => (&set.c, Label::ZERO, "cap-cs"),
        _ => return Err(NetworkError::Bounds("cap is a B or C square").into()),
    };
    let mut report = ProofReport::new(name);
    let fixed = tensor
        .fix(NORTH, Label::ZERO)
        .and_then(|t| t.fix(EAST, side))
        .and_then(|t| t.fix(WEST, side))
        .map_err(|_| NetworkError::Bounds("cap slots"))?;
    // remaining slot: south
    let alphabet = tensor.indices()[0].alphabet;
    for &l in alphabet.labels() {
        let want = if l == Label::ZERO {
            Z::one()
        } else {
            Z::zero()
        };
        let got = fixed.get(&[l]);
        report.compare("capped value against delta", vec![l], &got, &want);
        if !got.is_zero() {
            report.nonzero += 1;
        }
    }
    Ok(report)
}

/// Two G and a W against two B and a T, on every labeling of the five
/// dangling slots `[west, south_1, south_2, east, top]`.
pub fn verify_gw_equals_bt(set: &TensorSet<Z>) -> Result<ProofReport, ContractionError> {
    use crate::tiles::{port, LEFT, RIGHT, SOUTH, TOP};
    let unit = |sq: Family, tri: Family| Fragment {
        cells: vec![sq, sq, tri],
        bonds: vec![
            (port(0, EAST), port(1, WEST)),
            (port(0, NORTH), port(2, LEFT)),
            (port(1, NORTH), port(2, RIGHT)),
        ],
        inputs: vec![port(0, WEST), port(0, SOUTH), port(1, SOUTH)],
        outputs: vec![port(1, EAST), port(2, TOP)],
    };
    let mut bt_set = set.clone();
    bt_set.t = set.t.rescaled(2);
    let gw = fragment_table(&unit(Family::G, Family::W), set)?;
    let bt = fragment_table(&unit(Family::B, Family::T), &bt_set)?;
    let mut report = ProofReport::new("gw-bt");
    let alphabets = [
        Alphabet::Bit,
        Alphabet::Spin,
        Alphabet::Spin,
        Alphabet::Bit,
        Alphabet::Spin,
    ];
    for key in product(&alphabets) {
        let a = gw.get(&key).cloned().unwrap_or_default();
        let b = bt.get(&key).cloned().unwrap_or_default();
        if a == b && !a.is_zero() {
            report.nonzero += 1;
        }
        report.compare("G G W against B B T", key, &a, &b);
    }
    report
        .notes
        .push(format!("nnz: gw {} bt {}", gw.len(), bt.len()));
    Ok(report)
}

/// Charge conservation of every tensor in the set, at levels 1 to 4.
pub fn verify_charges(set: &TensorSet<Z>) -> ProofReport {
    let mut report = ProofReport::new("charges");
    let named: [(&str, &LabeledTensor<Z>); 8] = [
        ("B", &set.b),
        ("C", &set.c),
        ("T", &set.t),
        ("S", &set.s),
        ("G", &set.g),
        ("W", &set.w),
        ("P", &set.p),
        ("Pi", &set.pi),
    ];
    for (name, t) in named {
        for level in 0..4 {
            let scaled = t.rescaled(1 << level);
            report.checked += 1;
            match scaled.charge_violations().first() {
                None => report.matched += 1,
                Some(bad) => report.fail(
                    format!("{name} at scale {}", 1 << level),
                    bad.clone(),
                    "charge",
                    "0",
                ),
            }
        }
    }
    report
}

/// How [`verify_boundary_locked`] picks configurations.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sample {
    All,
    Random { count: usize, seed: u64 },
}

/// Every sampled configuration has at most one internal labeling with
/// nonzero entries, and exactly one when its amplitude is nonzero.
pub fn verify_boundary_locked(
    net: &Network<Z>,
    sample: Sample,
) -> Result<ProofReport, ContractionError> {
    let mut report = ProofReport::new("locked");
    let full = contract_full(net)?;
    let alphabet = net
        .physical_alphabet()
        .ok_or(NetworkError::Bounds("no physical slots"))?;
    let values: Vec<i8> = alphabet.labels().iter().filter_map(|l| l.value()).collect();
    let configs: Vec<SpinConfig> = match sample {
        Sample::All => {
            let mut all = vec![Vec::new()];
            for _ in 0..net.n_physical() {
                all = all
                    .into_iter()
                    .flat_map(|c: Vec<i8>| {
                        values.iter().map(move |&v| {
                            let mut c = c.clone();
                            c.push(v);
                            c
                        })
                    })
                    .collect();
            }
            all.into_iter().map(SpinConfig).collect()
        }
        Sample::Random { count, seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::SmallRng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    SpinConfig(
                        (0..net.n_physical())
                            .map(|_| values[rng.gen_range(0..values.len())])
                            .collect(),
                    )
                })
                .collect()
        }
    };
    for c in configs {
        let found = internal_labelings(net, &c, 2)?;
        let amp = full.get(&c);
        report.checked += 1;
        let want = usize::from(!amp.is_zero());
        if found.len() == want {
            report.matched += 1;
            report.nonzero += want;
        } else if found.len() > 1 {
            report.fail(
                "two internal labelings",
                c.labels(),
                labeling_str(&found[0]),
                labeling_str(&found[1]),
            );
        } else {
            report.fail(
                "labeling count against amplitude",
                c.labels(),
                found.len(),
                amp,
            );
        }
    }
    Ok(report)
}

fn labeling_str(l: &[Vec<Label>]) -> String {
    l.iter()
        .map(|k| format!("[{}]", labels_str(k)))
        .collect::<Vec<_>>()
        .join("")
}

fn compare_states(
    report: &mut ProofReport,
    context: &str,
    got: &StateVector<Z>,
    want: &StateVector<Z>,
) {
    report.checked += 1;
    if got == want {
        report.matched += 1;
        report.nonzero += usize::from(!want.is_zero());
        return;
    }
    // first config where they differ
    let diff = got
        .iter()
        .chain(want.iter())
        .map(|(c, _)| c)
        .find(|c| got.get(c) != want.get(c))
        .cloned()
        .unwrap_or_else(|| SpinConfig(Vec::new()));
    report.fail(context, diff.labels(), got.get(&diff), want.get(&diff));
}

/// Networks built from `set` against the walk oracles at small sizes.
pub fn verify_oracles(set: &TensorSet<Z>) -> Result<ProofReport, ContractionError> {
    let mut report = ProofReport::new("oracles");
    let one = Z::one();
    for n in 1..=3 {
        let gs = ground_state_vector(2 * n, &one, WalkKind::Motzkin).expect("small walk");
        compare_states(
            &mut report,
            &format!("pyramid 2n={}", 2 * n),
            &contract_full(&pyramid(n, &one, set)?)?,
            &gs,
        );
        let dyck = ground_state_vector(2 * n, &one, WalkKind::Dyck).expect("small walk");
        let fred = wrap_fredkin(&pyramid(n, &one, set)?, set)?;
        compare_states(
            &mut report,
            &format!("fredkin 2n={}", 2 * n),
            &contract_full(&fred)?,
            &dyck,
        );
    }
    for n in [1usize, 2] {
        let gs = ground_state_vector(2 * n, &one, WalkKind::Motzkin).expect("small walk");
        compare_states(
            &mut report,
            &format!("hrn-open 2n={}", 2 * n),
            &contract_full(&hrn_open(n, set)?)?,
            &gs,
        );
        let sector = periodic_sector_state(2 * n, 0).expect("small sector");
        compare_states(
            &mut report,
            &format!("u1 2n={}", 2 * n),
            &contract_full(&u1_mera(n, set)?)?,
            &sector,
        );
        for k in -(2 * n as i64)..=2 * n as i64 {
            let (p, q) = periodic_boundary(n, k)?;
            let sector = periodic_sector_state(2 * n, k).expect("small sector");
            let st = contract_full(&hrn_periodic(n, p, q, set)?)?;
            compare_states(
                &mut report,
                &format!("hrn-periodic 2n={} k={k}", 2 * n),
                &st,
                &sector,
            );
        }
    }
    Ok(report)
}

/// Boundary locking on every in-scope network up to `2n = 4`, exhaustively.
pub fn verify_locked_suite(set: &TensorSet<Z>) -> Result<ProofReport, ContractionError> {
    let mut report = ProofReport::new("locked");
    let one = Z::one();
    let mut nets = Vec::new();
    for n in 1..=2 {
        nets.push(pyramid(n, &one, set)?);
        nets.push(hrn_open(n, set)?);
        nets.push(u1_mera(n, set)?);
        for k in -(2 * n as i64)..=2 * n as i64 {
            let (p, q) = periodic_boundary(n, k)?;
            nets.push(hrn_periodic(n, p, q, set)?);
        }
    }
    for net in &nets {
        report.absorb(verify_boundary_locked(net, Sample::All)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zippers() {
        let set = TensorSet::<Z>::standard();
        let bt = verify_zipper_bt(&set).unwrap();
        assert!(bt.passed(), "{bt}");
        assert_eq!((bt.checked, bt.matched, bt.nonzero), (36, 36, 36));
        let zero = &bt
            .rows
            .iter()
            .find(|r| r.inputs.iter().all(|l| *l == Label::ZERO))
            .unwrap();
        assert_eq!(zero.lhs, vec![(vec![Label::ZERO; 3], Z::one())]);
        let cs = verify_zipper_cs(&set).unwrap();
        assert!(cs.passed(), "{cs}");
        assert_eq!((cs.checked, cs.matched, cs.nonzero), (64, 64, 64));
        assert_eq!(cs.shared, Some(34));
    }

    #[test]
    fn caps_gw_and_charges() {
        let set = TensorSet::<Z>::standard();
        assert!(verify_cap_removal(&set, NodeKind::B).unwrap().passed());
        assert!(verify_cap_removal(&set, NodeKind::C).unwrap().passed());
        let gw = verify_gw_equals_bt(&set).unwrap();
        assert!(gw.passed(), "{gw}");
        assert!(verify_charges(&set).passed());
    }

    #[test]
    fn corrupted_t_gives_counterexample() {
        let set = TensorSet::<Z>::standard();
        let key = set.t.entries().next().unwrap().0.clone();
        let bad = set.without_entry(Family::T, &key);
        let r = verify_zipper_bt(&bad).unwrap();
        assert!(!r.passed());
        assert!(!r.failures.is_empty());
    }
}
