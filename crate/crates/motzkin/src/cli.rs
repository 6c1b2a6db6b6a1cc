//! The `motzkin` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or a render finds
//! no tiling), 2 on a usage error.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motzkin_core::contraction::{amplitude, contract_full, contraction_plan};
use motzkin_core::equivalence::{mutation_battery, run_suite};
use motzkin_core::equivalence::{verify_boundary_locked, Counterexample, ProofReport, Sample};
use motzkin_core::network::{
    hrn_open, hrn_periodic, periodic_boundary, pyramid, rectangle, u1_mera, wrap_fredkin, Network,
};
use motzkin_core::tiles::{all_tilings, tiling_from_config, Geometry, Tiling};
use motzkin_core::{Label, Poly, Scalar, SpinConfig, TensorSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::hamiltonian::{
    annihilation_residual, build_hamiltonian, kernel_dimension, ChainBoundary, HamiltonianError,
    KERNEL_TOL,
};
use crate::json::{
    network_to_json, state_to_json, tensor_set_from_json, tensor_set_to_json, ReportJson,
    TensorJson,
};
use crate::render::{render_ascii, render_svg};
use crate::spectrum::{entropy_table, Chain, MAX_ENTROPY_SITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Residual bound for the Hamiltonian suite.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// Largest chain `render --all` walks through without a config.
const MAX_RENDER_ALL_SITES: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "motzkin",
    version,
    about = "Build, contract and verify Motzkin chain tensor networks"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contract a network and write its state.
    State(StateArgs),
    /// Contract a network, or evaluate one amplitude with --config.
    Contract(ContractArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Half-chain entanglement entropy for 2n = 2, 4, ...
    Entropy(EntropyArgs),
    /// Draw the tiling of a walk.
    Render(RenderArgs),
    /// Print the shipped tensors as JSON (the format --tensors reads).
    Tensors(TensorsArgs),
    /// Describe a network's nodes and links.
    Network(ShapeArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeName {
    Pyramid,
    Rect,
    HrnOpen,
    HrnPeriodic,
    U1,
    Fredkin,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[arg(value_enum)]
    pub shape: ShapeName,
    /// Half the number of sites.
    #[arg(long)]
    pub n: usize,
    /// Deformation: an integer, a fraction like 1/2, or `t` for the symbolic
    /// polynomial.
    #[arg(long, default_value = "1")]
    pub t: String,
    /// Left boundary height (rect, hrn-periodic).
    #[arg(long)]
    pub p: Option<u64>,
    /// Right boundary height (rect, hrn-periodic).
    #[arg(long)]
    pub q: Option<u64>,
    /// Magnetization sector (hrn-periodic, u1).
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Rows (rect).
    #[arg(long)]
    pub m: Option<usize>,
    /// Tensor set JSON replacing the shipped tensors it names.
    #[arg(long)]
    pub tensors: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Write the state JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContractArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Evaluate a single configuration such as `+0-0` or `udud`.
    #[arg(long, allow_hyphen_values = true)]
    pub config: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    ZipperBt,
    ZipperCs,
    Cap,
    GwBt,
    Locked,
    Appendix,
    Charges,
    Oracles,
    ZipRewrite,
    Hamiltonian,
    Mutation,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Tensor set JSON to verify instead of the shipped one.
    #[arg(long)]
    pub tensors: Option<PathBuf>,
    /// Seed for the sampled boundary-locking check.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Configurations per network in the sampled boundary-locking check.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChainName {
    Motzkin,
    Fredkin,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, value_enum, default_value_t = ChainName::Motzkin)]
    pub chain: ChainName,
    /// Rational deformation.
    #[arg(long, default_value = "1")]
    pub t: String,
    /// Largest chain length (even, at most 12).
    #[arg(long, default_value_t = MAX_ENTROPY_SITES)]
    pub max_sites: usize,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridName {
    Pyramid,
    Rect,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Style {
    Ascii,
    Svg,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(value_enum, default_value_t = GridName::Pyramid)]
    pub grid: GridName,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub p: u64,
    #[arg(long, default_value_t = 0)]
    pub q: u64,
    /// Configuration such as `++--`.
    #[arg(long, allow_hyphen_values = true)]
    pub config: Option<String>,
    /// Every tiling of --config by exhaustive search, or of every
    /// configuration when --config is absent.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = Style::Ascii)]
    pub style: Style,
    /// Output file, or directory with --all.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TensorsArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn failure(e: impl Display) -> CliError {
    CliError::Failure(e.to_string())
}

type CliResult = Result<(), CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let (CliError::Usage(m) | CliError::Failure(m)) = &e;
            let _ = writeln!(err, "error: {m}");
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match &cli.command {
        Command::State(a) => cmd_state(a, cli.format, out),
        Command::Contract(a) => cmd_contract(a, cli.format, out),
        Command::Verify(a) => cmd_verify(a, cli.format, out),
        Command::Entropy(a) => cmd_entropy(a, cli.format, out),
        Command::Render(a) => cmd_render(a, out),
        Command::Tensors(a) => cmd_tensors(a, out),
        Command::Network(a) => cmd_network(a, cli.format, out),
    }
}

fn emit(out: &mut dyn Write, text: impl Display) -> CliResult {
    match write!(out, "{text}") {
        // a closed pipe (`| head`) is not an error
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(failure(e)),
        _ => Ok(()),
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(failure)
}

fn write_file(path: &Path, contents: &str) -> CliResult {
    fs::write(path, contents).map_err(|e| failure(format!("{}: {e}", path.display())))
}

/// The deformation as given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum TValue {
    Integer(BigInt),
    Rational(BigRational),
    Symbolic,
}

impl FromStr for TValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "t" {
            return Ok(TValue::Symbolic);
        }
        let q: BigRational = s.parse().map_err(|_| format!("cannot parse t = {s:?}"))?;
        if !q.is_positive() {
            return Err(format!("t must be positive, got {s}"));
        }
        Ok(if q.is_integer() {
            TValue::Integer(q.to_integer())
        } else {
            TValue::Rational(q)
        })
    }
}

fn load_tensor_json(path: &Path) -> Result<BTreeMap<String, TensorJson>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn tensor_set<S: Scalar + FromStr>(path: Option<&PathBuf>) -> Result<TensorSet<S>, CliError> {
    match path {
        None => Ok(TensorSet::standard()),
        Some(p) => tensor_set_from_json(&load_tensor_json(p)?)
            .map_err(|e| usage(format!("{}: {e}", p.display()))),
    }
}

/// Builds the requested network over the scalar type of `t`.
pub fn build_network<S: Scalar>(
    a: &ShapeArgs,
    t: &S,
    set: &TensorSet<S>,
) -> Result<Network<S>, CliError> {
    let t_is_one = t == &S::one();
    let need_t_one = |name: &str| {
        if t_is_one {
            Ok(())
        } else {
            Err(usage(format!("{name} is only defined at t = 1")))
        }
    };
    let net = match a.shape {
        ShapeName::Pyramid => pyramid(a.n, t, set),
        ShapeName::Fredkin => pyramid(a.n, t, set).and_then(|p| wrap_fredkin(&p, set)),
        ShapeName::Rect => {
            let m = match a.m {
                Some(m) => m,
                None if a.n > 0 => (2 * a.n).ilog2() as usize,
                None => return Err(usage("rect needs --n >= 1")),
            };
            rectangle(a.n, m, a.p.unwrap_or(0), a.q.unwrap_or(0), t, set)
        }
        ShapeName::HrnOpen => {
            need_t_one("hrn-open")?;
            hrn_open(a.n, set)
        }
        ShapeName::HrnPeriodic => {
            need_t_one("hrn-periodic")?;
            let (p, q) = match (a.k, a.p, a.q) {
                (Some(k), None, None) => periodic_boundary(a.n, k).map_err(usage)?,
                (None, Some(p), Some(q)) => (p, q),
                (None, None, None) => periodic_boundary(a.n, 0).map_err(usage)?,
                _ => return Err(usage("hrn-periodic takes either --k or both --p and --q")),
            };
            hrn_periodic(a.n, p, q, set)
        }
        ShapeName::U1 => {
            need_t_one("u1")?;
            if a.k.unwrap_or(0) != 0 {
                return Err(usage("u1 builds the k = 0 sector only"));
            }
            u1_mera(a.n, set)
        }
    };
    net.map_err(usage)
}

/// Runs `f` with the network built over the scalar matching `--t`.
macro_rules! with_network {
    ($args:expr, |$net:ident| $body:expr) => {{
        let a: &ShapeArgs = $args;
        match a.t.parse::<TValue>().map_err(usage)? {
            TValue::Integer(t) => {
                let set = tensor_set::<BigInt>(a.tensors.as_ref())?;
                let $net = build_network(a, &t, &set)?;
                $body
            }
            TValue::Rational(t) => {
                let set = tensor_set::<BigRational>(a.tensors.as_ref())?;
                let $net = build_network(a, &t, &set)?;
                $body
            }
            TValue::Symbolic => {
                let set = tensor_set::<Poly>(a.tensors.as_ref())?;
                let $net = build_network(a, &Poly::t(), &set)?;
                $body
            }
        }
    }};
}

fn cmd_state(a: &StateArgs, format: Format, out: &mut dyn Write) -> CliResult {
    with_network!(&a.shape, |net| {
        let state = contract_full(&net).map_err(usage)?;
        let json = state_to_json(&state);
        if let Some(path) = &a.out {
            write_file(path, &to_json(&json)?)?;
        }
        match (format, &a.out) {
            (Format::Json, None) => emit(out, to_json(&json)?),
            (Format::Json, Some(path)) => emit(
                out,
                to_json(&serde_json::json!({
                    "nnz": json.nnz,
                    "norm_squared": json.norm_squared,
                    "out": path.display().to_string(),
                }))?,
            ),
            (Format::Table, _) => {
                emit(
                    out,
                    format!("nnz {}\nnorm_squared {}\n", json.nnz, json.norm_squared),
                )?;
                if a.out.is_none() {
                    emit(out, &state)?;
                }
                Ok(())
            }
        }
    })
}

fn cmd_contract(a: &ContractArgs, format: Format, out: &mut dyn Write) -> CliResult {
    with_network!(&a.shape, |net| {
        match &a.config {
            Some(text) => {
                let (config, _) =
                    SpinConfig::parse(text).ok_or_else(|| usage(format!("bad config {text:?}")))?;
                let value = amplitude(&net, &config).map_err(usage)?;
                match format {
                    Format::Json => emit(
                        out,
                        to_json(
                            &serde_json::json!({ "config": text, "amplitude": value.to_string() }),
                        )?,
                    ),
                    Format::Table => emit(out, format!("{text}  {value}\n")),
                }
            }
            None => {
                let state = contract_full(&net).map_err(usage)?;
                match format {
                    Format::Json => emit(out, to_json(&state_to_json(&state))?),
                    Format::Table => {
                        let plan = contraction_plan(&net);
                        emit(
                            out,
                            format!(
                                "nodes {}  max live slots {}  nnz {}\n",
                                plan.steps(),
                                plan.max_live_slots,
                                state.nnz()
                            ),
                        )?;
                        emit(out, &state)
                    }
                }
            }
        }
    })
}

fn cmd_network(a: &ShapeArgs, format: Format, out: &mut dyn Write) -> CliResult {
    with_network!(a, |net| {
        let json = network_to_json(&net);
        match format {
            Format::Json => emit(out, to_json(&json)?),
            Format::Table => {
                let mut text = format!("{} n={} sites={}\n", json.shape, json.n, json.n_physical);
                for (k, v) in &json.counts {
                    text.push_str(&format!("  {k:<3} {v}\n"));
                }
                for node in &json.nodes {
                    text.push_str(&format!(
                        "  #{:<3} {:<2} row {:>2} col {:>2} width {:>2}  {}\n",
                        node.id,
                        node.kind,
                        node.row,
                        node.col,
                        node.width,
                        node.links.join(" ")
                    ));
                }
                emit(out, text)
            }
        }
    })
}

fn cmd_tensors(a: &TensorsArgs, out: &mut dyn Write) -> CliResult {
    let text = to_json(&tensor_set_to_json(&TensorSet::<BigInt>::standard()))?;
    match &a.out {
        Some(path) => write_file(path, &text),
        None => emit(out, text),
    }
}

fn suite_names(suite: Suite) -> &'static [&'static str] {
    match suite {
        Suite::All => &[
            "zipper-bt",
            "zipper-cs",
            "cap-bt",
            "cap-cs",
            "gw-bt",
            "charges",
            "oracles",
            "appendix",
            "zip-rewrite",
            "locked",
            "locked-sampled",
            "hamiltonian",
        ],
        Suite::ZipperBt => &["zipper-bt"],
        Suite::ZipperCs => &["zipper-cs"],
        Suite::Cap => &["cap-bt", "cap-cs"],
        Suite::GwBt => &["gw-bt"],
        Suite::Locked => &["locked", "locked-sampled"],
        Suite::Appendix => &["appendix", "zip-rewrite"],
        Suite::Charges => &["charges"],
        Suite::Oracles => &["oracles"],
        Suite::ZipRewrite => &["zip-rewrite"],
        Suite::Hamiltonian => &["hamiltonian"],
        Suite::Mutation => &["mutation"],
    }
}

fn aborted(name: &str, e: impl Display) -> ProofReport {
    let mut r = ProofReport::new(name);
    r.failures.push(Counterexample {
        labels: Vec::new(),
        lhs: e.to_string(),
        rhs: "completion".into(),
        context: "suite aborted".into(),
    });
    r
}

/// Boundary locking on random configurations of the 8-site networks.
pub fn verify_locked_sampled(set: &TensorSet<BigInt>, count: usize, seed: u64) -> ProofReport {
    let mut report = ProofReport::new("locked-sampled");
    let one = BigInt::one();
    let nets = [
        pyramid(4, &one, set),
        hrn_open(4, set),
        u1_mera(4, set),
        hrn_periodic(4, 8, 8, set),
    ];
    for net in nets {
        let r = net.map_err(|e| e.to_string()).and_then(|n| {
            verify_boundary_locked(&n, Sample::Random { count, seed }).map_err(|e| e.to_string())
        });
        match r {
            Ok(r) => {
                report.checked += r.checked;
                report.matched += r.matched;
                report.nonzero += r.nonzero;
                report.failures.extend(r.failures);
            }
            Err(e) => report
                .failures
                .extend(aborted("locked-sampled", e).failures),
        }
    }
    report
        .notes
        .push(format!("{count} configurations per network, seed {seed}"));
    report
}

fn record(
    report: &mut ProofReport,
    context: String,
    ok: bool,
    lhs: impl Display,
    rhs: impl Display,
) {
    report.checked += 1;
    if ok {
        report.matched += 1;
    } else {
        report.failures.push(Counterexample {
            labels: Vec::new(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            context,
        });
    }
}

/// Network states are zero modes of the chain Hamiltonian, and the kernel
/// has the expected dimension.
pub fn verify_hamiltonian(set: &TensorSet<BigInt>) -> Result<ProofReport, String> {
    let mut report = ProofReport::new("hamiltonian");
    let err = |e: &dyn Display| e.to_string();
    let qset = TensorSet::<BigRational>::standard();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    for n in 1..=3usize {
        for t in [q(1, 2), q(1, 1), q(2, 1)] {
            let h = build_hamiltonian(2 * n, &t, ChainBoundary::Open).map_err(|e| err(&e))?;
            let state =
                contract_full(&pyramid(n, &t, &qset).map_err(|e| err(&e))?).map_err(|e| err(&e))?;
            let res = residual_or_inf(annihilation_residual(&h, &state));
            record(
                &mut report,
                format!("pyramid 2n={} t={t} residual", 2 * n),
                res <= RESIDUAL_TOL,
                res,
                RESIDUAL_TOL,
            );
        }
    }
    for n in [1usize, 2] {
        let open = build_hamiltonian(2 * n, &q(1, 1), ChainBoundary::Open).map_err(|e| err(&e))?;
        let periodic =
            build_hamiltonian(2 * n, &q(1, 1), ChainBoundary::Periodic).map_err(|e| err(&e))?;
        let st = contract_full(&hrn_open(n, set).map_err(|e| err(&e))?).map_err(|e| err(&e))?;
        let res = residual_or_inf(annihilation_residual(&open, &st));
        record(
            &mut report,
            format!("hrn-open 2n={} residual", 2 * n),
            res <= RESIDUAL_TOL,
            res,
            RESIDUAL_TOL,
        );
        let st = contract_full(&u1_mera(n, set).map_err(|e| err(&e))?).map_err(|e| err(&e))?;
        let res = residual_or_inf(annihilation_residual(&periodic, &st));
        record(
            &mut report,
            format!("u1 2n={} residual", 2 * n),
            res <= RESIDUAL_TOL,
            res,
            RESIDUAL_TOL,
        );
        for k in -(2 * n as i64)..=2 * n as i64 {
            let (p, qq) = periodic_boundary(n, k).map_err(|e| err(&e))?;
            let st = contract_full(&hrn_periodic(n, p, qq, set).map_err(|e| err(&e))?)
                .map_err(|e| err(&e))?;
            let res = residual_or_inf(annihilation_residual(&periodic, &st));
            record(
                &mut report,
                format!("hrn-periodic 2n={} k={k} residual", 2 * n),
                res <= RESIDUAL_TOL,
                res,
                RESIDUAL_TOL,
            );
        }
        let open_dim = kernel_dimension(&open, KERNEL_TOL).map_err(|e| err(&e))?;
        record(
            &mut report,
            format!("open kernel 2n={}", 2 * n),
            open_dim == 1,
            open_dim,
            1,
        );
        let per_dim = kernel_dimension(&periodic, KERNEL_TOL).map_err(|e| err(&e))?;
        record(
            &mut report,
            format!("periodic kernel 2n={}", 2 * n),
            per_dim == 4 * n + 1,
            per_dim,
            4 * n + 1,
        );
    }
    report.nonzero = report.matched;
    Ok(report)
}

fn residual_or_inf(r: Result<f64, HamiltonianError>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

fn mutation_report(set: &TensorSet<BigInt>) -> ProofReport {
    let battery = mutation_battery(set);
    let mut report = ProofReport::new("mutation");
    for row in &battery.rows {
        report.checked += 1;
        let key: Vec<String> = row.key.iter().map(Label::to_string).collect();
        match &row.caught_by {
            Some((suite, c)) => {
                report.matched += 1;
                report.notes.push(format!(
                    "{} [{}] caught by {suite}: {c}",
                    row.family.name(),
                    key.join(" ")
                ));
            }
            None => report.failures.push(Counterexample {
                labels: row.key.clone(),
                lhs: "deleted".into(),
                rhs: "no suite failed".into(),
                context: format!("{} entry survived", row.family.name()),
            }),
        }
    }
    report
}

/// Runs one named suite; errors become a failing report.
pub fn run_named(name: &str, set: &TensorSet<BigInt>, seed: u64, samples: usize) -> ProofReport {
    match name {
        "locked-sampled" => verify_locked_sampled(set, samples, seed),
        "hamiltonian" => verify_hamiltonian(set).unwrap_or_else(|e| aborted(name, e)),
        "mutation" => mutation_report(set),
        _ => run_suite(name, set).unwrap_or_else(|e| aborted(name, e)),
    }
}

fn cmd_verify(a: &VerifyArgs, format: Format, out: &mut dyn Write) -> CliResult {
    let set = tensor_set::<BigInt>(a.tensors.as_ref())?;
    let reports: Vec<ProofReport> = suite_names(a.suite)
        .iter()
        .map(|name| run_named(name, &set, a.seed, a.samples))
        .collect();
    match format {
        Format::Json => emit(
            out,
            to_json(&reports.iter().map(ReportJson::from).collect::<Vec<_>>())?,
        )?,
        Format::Table => {
            for r in &reports {
                emit(out, r)?;
            }
        }
    }
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(failure(format!("{} failed: {}", r.name, r.failures[0]))),
    }
}

fn cmd_entropy(a: &EntropyArgs, format: Format, out: &mut dyn Write) -> CliResult {
    let t = match a.t.parse::<TValue>().map_err(usage)? {
        TValue::Integer(i) => BigRational::from_integer(i),
        TValue::Rational(q) => q,
        TValue::Symbolic => return Err(usage("entropy needs a numeric t")),
    };
    if a.max_sites < 2 || a.max_sites % 2 == 1 || a.max_sites > MAX_ENTROPY_SITES {
        return Err(usage(format!(
            "--max-sites must be even and between 2 and {MAX_ENTROPY_SITES}"
        )));
    }
    let chain = match a.chain {
        ChainName::Motzkin => Chain::Motzkin,
        ChainName::Fredkin => Chain::Fredkin,
    };
    let rows = entropy_table(chain, &t, a.max_sites).map_err(failure)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).map_err(failure)?;
        w.write_record(["n_sites", "rank", "entropy_exact", "entropy_svd", "weights"])
            .map_err(failure)?;
        for r in &rows {
            w.write_record([
                r.n_sites.to_string(),
                r.rank.to_string(),
                format!("{:.15}", r.entropy_exact),
                format!("{:.15}", r.entropy_svd),
                r.weights.join(" "),
            ])
            .map_err(failure)?;
        }
        w.flush().map_err(failure)?;
    }
    match format {
        Format::Json => emit(out, to_json(&rows)?),
        Format::Table => {
            let mut text = format!(
                "{:>3} {:>5} {:>18} {:>18}  weights\n",
                "2n", "rank", "exact", "svd"
            );
            for r in &rows {
                let shown: Vec<&str> = r.weights.iter().take(6).map(String::as_str).collect();
                let more = if r.weights.len() > 6 { " ..." } else { "" };
                text.push_str(&format!(
                    "{:>3} {:>5} {:>18.15} {:>18.15}  {}{more}\n",
                    r.n_sites,
                    r.rank,
                    r.entropy_exact,
                    r.entropy_svd,
                    shown.join(" ")
                ));
            }
            emit(out, text)
        }
    }
}

fn render_one(til: &Tiling, style: Style) -> String {
    match style {
        Style::Ascii => render_ascii(til),
        Style::Svg => render_svg(til),
    }
}

fn file_stem(config: &SpinConfig) -> String {
    config
        .0
        .iter()
        .map(|&v| match v {
            -1 => 'd',
            0 => 'f',
            _ => 'u',
        })
        .collect()
}

fn cmd_render(a: &RenderArgs, out: &mut dyn Write) -> CliResult {
    let geometry = match a.grid {
        GridName::Pyramid => Geometry::pyramid(a.n),
        GridName::Rect => {
            let m = a.m.unwrap_or_else(|| {
                if a.n > 0 {
                    (2 * a.n).ilog2() as usize
                } else {
                    1
                }
            });
            Geometry::rectangle(a.n, m, a.p, a.q)
        }
    }
    .map_err(usage)?;
    let config = match &a.config {
        Some(text) => {
            let (c, _) =
                SpinConfig::parse(text).ok_or_else(|| usage(format!("bad config {text:?}")))?;
            Some(c)
        }
        None => None,
    };
    let mut found: Vec<(SpinConfig, Tiling)> = Vec::new();
    match (&config, a.all) {
        (Some(c), false) => {
            if let Some(t) = tiling_from_config(c, &geometry).map_err(usage)? {
                found.push((c.clone(), t));
            }
        }
        (Some(c), true) => {
            for t in all_tilings(c, &geometry).map_err(usage)? {
                found.push((c.clone(), t));
            }
        }
        (None, true) => {
            let sites = geometry.width();
            if sites > MAX_RENDER_ALL_SITES {
                return Err(usage(format!(
                    "render --all without --config is capped at {MAX_RENDER_ALL_SITES} sites"
                )));
            }
            let mut configs = vec![Vec::new()];
            for _ in 0..sites {
                configs = configs
                    .into_iter()
                    .flat_map(|c: Vec<i8>| {
                        [-1i8, 0, 1].map(|v| {
                            let mut c = c.clone();
                            c.push(v);
                            c
                        })
                    })
                    .collect();
            }
            for c in configs.into_iter().map(SpinConfig) {
                for t in all_tilings(&c, &geometry).map_err(usage)? {
                    found.push((c.clone(), t));
                }
            }
        }
        (None, false) => return Err(usage("render needs --config or --all")),
    }
    if found.is_empty() {
        let what = a
            .config
            .clone()
            .unwrap_or_else(|| "any configuration".to_string());
        return Err(failure(format!("0 tilings for {what}")));
    }
    let ext = match a.style {
        Style::Ascii => "txt",
        Style::Svg => "svg",
    };
    match (&a.out, a.all) {
        (Some(dir), true) => {
            fs::create_dir_all(dir).map_err(failure)?;
            for (i, (c, t)) in found.iter().enumerate() {
                let path = dir.join(format!("tiling-{i:04}-{}.{ext}", file_stem(c)));
                write_file(&path, &render_one(t, a.style))?;
            }
            emit(
                out,
                format!("{} tilings written to {}\n", found.len(), dir.display()),
            )
        }
        (Some(path), false) => write_file(path, &render_one(&found[0].1, a.style)),
        (None, _) => {
            let many = found.len() > 1;
            for (c, t) in &found {
                if many && a.style == Style::Ascii {
                    emit(
                        out,
                        format!("# {}\n", c.render(motzkin_core::SiteKind::SpinOne)),
                    )?;
                }
                emit(out, render_one(t, a.style))?;
            }
            if many && a.style == Style::Ascii {
                emit(out, format!("{} tilings\n", found.len()))?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["motzkin"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn t_values() {
        assert_eq!("t".parse::<TValue>(), Ok(TValue::Symbolic));
        assert_eq!("2".parse::<TValue>(), Ok(TValue::Integer(2.into())));
        assert!(matches!("1/2".parse::<TValue>(), Ok(TValue::Rational(_))));
        assert!("0".parse::<TValue>().is_err());
        assert!("-1".parse::<TValue>().is_err());
        assert!("x".parse::<TValue>().is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["state"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["state", "bogus", "--n", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["state", "hrn-open", "--n", "3"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["state", "hrn-open", "--n", "2", "--t", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["state", "u1", "--n", "2", "--k", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["contract", "pyramid", "--n", "1", "--config", "+x"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["render", "--n", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["entropy", "--max-sites", "14"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }
}
