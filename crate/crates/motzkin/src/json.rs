//! JSON forms of states, tensor sets, networks and proof reports.
//!
//! Every map is a `BTreeMap`, so the output is byte-for-byte deterministic.

use std::collections::BTreeMap;
use std::str::FromStr;

use motzkin_core::equivalence::{Counterexample, ProofReport, ReportRow};
use motzkin_core::network::{Link, Network};
use motzkin_core::tensor::{IndexSpace, Orientation};
use motzkin_core::{
    Alphabet, Label, LabeledTensor, Scalar, SiteKind, SpinConfig, StateVector, TensorSet,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error(transparent)]
    Syntax(#[from] serde_json::Error),
    #[error("unknown site kind {0:?}")]
    SiteKind(String),
    #[error("bad configuration {0:?}")]
    Config(String),
    #[error("configuration {config:?} has {got} sites, expected {expected}")]
    ConfigLength {
        config: String,
        got: usize,
        expected: usize,
    },
    #[error("bad amplitude {0:?}")]
    Amplitude(String),
    #[error("scalar is {found}, expected {expected}")]
    ScalarKind {
        found: String,
        expected: &'static str,
    },
    #[error("bad label {0:?}")]
    Label(String),
    #[error("unknown alphabet {0:?}")]
    Alphabet(String),
    #[error("unknown orientation {0:?}")]
    Orientation(String),
    #[error("unknown tensor {0:?}")]
    Tensor(String),
    #[error("tensor {tensor}: {message}")]
    Entry { tensor: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    pub n_sites: usize,
    pub sites: String,
    pub scalar: String,
    pub nnz: usize,
    pub norm_squared: String,
    /// Configuration string → amplitude string.
    pub amplitudes: BTreeMap<String, String>,
}

pub fn state_to_json<S: Scalar>(state: &StateVector<S>) -> StateJson {
    StateJson {
        n_sites: state.n_sites(),
        sites: state.sites().name().to_string(),
        scalar: S::KIND.name().to_string(),
        nnz: state.nnz(),
        norm_squared: state.norm_squared().to_string(),
        amplitudes: state
            .iter()
            .map(|(c, a)| (c.render(state.sites()), a.to_string()))
            .collect(),
    }
}

fn site_kind(name: &str) -> Result<SiteKind, JsonError> {
    [SiteKind::SpinOne, SiteKind::SpinHalf]
        .into_iter()
        .find(|k| k.name() == name)
        .ok_or_else(|| JsonError::SiteKind(name.to_string()))
}

pub fn state_from_json<S: Scalar + FromStr>(json: &StateJson) -> Result<StateVector<S>, JsonError> {
    if json.scalar != S::KIND.name() {
        return Err(JsonError::ScalarKind {
            found: json.scalar.clone(),
            expected: S::KIND.name(),
        });
    }
    let kind = site_kind(&json.sites)?;
    let mut state = StateVector::new(json.n_sites, kind);
    for (c, a) in &json.amplitudes {
        let config = parse_config(c, kind)?;
        if config.len() != json.n_sites {
            return Err(JsonError::ConfigLength {
                config: c.clone(),
                got: config.len(),
                expected: json.n_sites,
            });
        }
        let value = a
            .parse::<S>()
            .map_err(|_| JsonError::Amplitude(a.clone()))?;
        state.accumulate(config, value);
    }
    Ok(state)
}

/// Parses a configuration string, insisting on the given site kind.
pub fn parse_config(s: &str, kind: SiteKind) -> Result<SpinConfig, JsonError> {
    match SpinConfig::parse(s) {
        Some((c, k)) if k == kind || s.is_empty() => Ok(c),
        _ => Err(JsonError::Config(s.to_string())),
    }
}

pub fn label_str(l: Label) -> String {
    l.to_string()
}

/// `ω` (or `w`) or a small integer.
pub fn parse_label(s: &str) -> Result<Label, JsonError> {
    match s {
        "ω" | "w" | "omega" => Ok(Label::OMEGA),
        _ => s
            .parse::<i8>()
            .ok()
            .filter(|&v| v != i8::MAX)
            .map(Label::new)
            .ok_or_else(|| JsonError::Label(s.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexJson {
    pub name: String,
    pub alphabet: String,
    pub orientation: Option<String>,
    pub charge_scale: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub indices: Vec<IndexJson>,
    /// `(labels, value)` pairs; absent tuples are zero.
    pub entries: Vec<(Vec<String>, String)>,
}

pub fn tensor_to_json<S: Scalar>(t: &LabeledTensor<S>) -> TensorJson {
    TensorJson {
        indices: t
            .indices()
            .iter()
            .map(|ix| IndexJson {
                name: ix.name.clone(),
                alphabet: ix.alphabet.name().to_string(),
                orientation: ix.orientation.map(|o| {
                    match o {
                        Orientation::In => "in",
                        Orientation::Out => "out",
                    }
                    .to_string()
                }),
                charge_scale: ix.charge_scale,
            })
            .collect(),
        entries: t
            .entries()
            .map(|(k, v)| (k.iter().map(|&l| label_str(l)).collect(), v.to_string()))
            .collect(),
    }
}

pub fn tensor_from_json<S: Scalar + FromStr>(
    name: &str,
    json: &TensorJson,
) -> Result<LabeledTensor<S>, JsonError> {
    let mut indices = Vec::with_capacity(json.indices.len());
    for ix in &json.indices {
        let alphabet = Alphabet::from_name(&ix.alphabet)
            .ok_or_else(|| JsonError::Alphabet(ix.alphabet.clone()))?;
        let orientation = match ix.orientation.as_deref() {
            None => None,
            Some("in") => Some(Orientation::In),
            Some("out") => Some(Orientation::Out),
            Some(o) => return Err(JsonError::Orientation(o.to_string())),
        };
        indices.push(IndexSpace {
            name: ix.name.clone(),
            alphabet,
            orientation,
            charge_scale: ix.charge_scale,
        });
    }
    let mut t = LabeledTensor::new(indices);
    for (labels, value) in &json.entries {
        let key = labels
            .iter()
            .map(|s| parse_label(s))
            .collect::<Result<Vec<_>, _>>()?;
        let v = value
            .parse::<S>()
            .map_err(|_| JsonError::Amplitude(value.clone()))?;
        t.insert(key, v).map_err(|e| JsonError::Entry {
            tensor: name.to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(t)
}

pub const TENSOR_NAMES: [&str; 8] = ["B", "C", "T", "S", "G", "W", "P", "Pi"];

fn tensor_mut<'a, S>(set: &'a mut TensorSet<S>, name: &str) -> Option<&'a mut LabeledTensor<S>> {
    Some(match name {
        "B" => &mut set.b,
        "C" => &mut set.c,
        "T" => &mut set.t,
        "S" => &mut set.s,
        "G" => &mut set.g,
        "W" => &mut set.w,
        "P" => &mut set.p,
        "Pi" => &mut set.pi,
        _ => return None,
    })
}

fn tensor_ref<'a, S>(set: &'a TensorSet<S>, name: &str) -> &'a LabeledTensor<S> {
    match name {
        "B" => &set.b,
        "C" => &set.c,
        "T" => &set.t,
        "S" => &set.s,
        "G" => &set.g,
        "W" => &set.w,
        "P" => &set.p,
        _ => &set.pi,
    }
}

pub fn tensor_set_to_json<S: Scalar>(set: &TensorSet<S>) -> BTreeMap<String, TensorJson> {
    TENSOR_NAMES
        .iter()
        .map(|&n| (n.to_string(), tensor_to_json(tensor_ref(set, n))))
        .collect()
}

/// The shipped set with every tensor named in `json` replaced.
pub fn tensor_set_from_json<S: Scalar + FromStr>(
    json: &BTreeMap<String, TensorJson>,
) -> Result<TensorSet<S>, JsonError> {
    let mut set = TensorSet::standard();
    for (name, t) in json {
        let parsed = tensor_from_json(name, t)?;
        *tensor_mut(&mut set, name).ok_or_else(|| JsonError::Tensor(name.clone()))? = parsed;
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub context: String,
    pub labels: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl From<&Counterexample> for CounterexampleJson {
    fn from(c: &Counterexample) -> Self {
        CounterexampleJson {
            context: c.context.clone(),
            labels: c.labels.iter().map(|&l| label_str(l)).collect(),
            lhs: c.lhs.clone(),
            rhs: c.rhs.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub inputs: Vec<String>,
    pub lhs: Vec<(Vec<String>, String)>,
    pub rhs: Vec<(Vec<String>, String)>,
    pub lhs_tiles: Vec<String>,
    pub rhs_tiles: Vec<String>,
    pub matches: bool,
}

impl From<&ReportRow> for RowJson {
    fn from(r: &ReportRow) -> Self {
        let outs = |o: &[(Vec<Label>, num_bigint::BigInt)]| {
            o.iter()
                .map(|(k, v)| (k.iter().map(|&l| label_str(l)).collect(), v.to_string()))
                .collect()
        };
        RowJson {
            inputs: r.inputs.iter().map(|&l| label_str(l)).collect(),
            lhs: outs(&r.lhs),
            rhs: outs(&r.rhs),
            lhs_tiles: r.lhs_tiles.clone(),
            rhs_tiles: r.rhs_tiles.clone(),
            matches: r.matches(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub matched: usize,
    pub nonzero: usize,
    pub shared: Option<usize>,
    pub rows: Vec<RowJson>,
    pub notes: Vec<String>,
    pub failures: Vec<CounterexampleJson>,
}

impl From<&ProofReport> for ReportJson {
    fn from(r: &ProofReport) -> Self {
        ReportJson {
            name: r.name.clone(),
            passed: r.passed(),
            checked: r.checked,
            matched: r.matched,
            nonzero: r.nonzero,
            shared: r.shared,
            rows: r.rows.iter().map(RowJson::from).collect(),
            notes: r.notes.clone(),
            failures: r.failures.iter().map(CounterexampleJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub kind: String,
    pub row: i32,
    pub col: u32,
    pub width: u32,
    pub arity: usize,
    pub nnz: usize,
    /// One entry per slot: `"edge:<node>.<slot>"`, `"pin:<label>"` or
    /// `"open:<index>"`.
    pub links: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkJson {
    pub shape: String,
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub q: u64,
    pub t: String,
    pub n_physical: usize,
    pub counts: BTreeMap<String, usize>,
    pub nodes: Vec<NodeJson>,
}

pub fn network_to_json<S: Scalar>(net: &Network<S>) -> NetworkJson {
    let nodes = net
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| NodeJson {
            id,
            kind: node.kind.name().to_string(),
            row: node.position.row,
            col: node.position.col,
            width: node.position.width,
            arity: node.tensor.arity(),
            nnz: node.tensor.nnz(),
            links: (0..node.tensor.arity())
                .map(|s| match net.link(motzkin_core::network::slot(id, s)) {
                    Some(Link::Edge(o)) => format!("edge:{}.{}", o.node, o.slot),
                    Some(Link::Pin(l)) => format!("pin:{l}"),
                    Some(Link::Open(i)) => format!("open:{i}"),
                    None => "unlinked".to_string(),
                })
                .collect(),
        })
        .collect();
    NetworkJson {
        shape: net.meta.shape.name().to_string(),
        n: net.meta.n,
        m: net.meta.m,
        p: net.meta.p,
        q: net.meta.q,
        t: net.meta.t.clone(),
        n_physical: net.n_physical(),
        counts: net
            .count_by_kind()
            .into_iter()
            .map(|(k, v)| (k.name().to_string(), v))
            .collect(),
        nodes,
    }
}
