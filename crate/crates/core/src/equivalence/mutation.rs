//! Single-entry deletions from each tile tensor, run through every suite.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{
    verify_appendix_column_arguments, verify_cap_removal, verify_charges, verify_gw_equals_bt,
    verify_locked_suite, verify_oracles, verify_zip_rewrite, verify_zipper_bt, verify_zipper_cs,
    Counterexample, ProofReport,
};
use crate::contraction::ContractionError;
use crate::label::Label;
use crate::network::NodeKind;
use crate::tensor::TensorSet;
use crate::tiles::Family;

type Z = BigInt;

/// Suite names, cheapest first.
pub const SUITES: [&str; 10] = [
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
];

pub fn run_suite(name: &str, set: &TensorSet<Z>) -> Result<ProofReport, ContractionError> {
    match name {
        "zipper-bt" => verify_zipper_bt(set),
        "zipper-cs" => verify_zipper_cs(set),
        "cap-bt" => verify_cap_removal(set, NodeKind::B),
        "cap-cs" => verify_cap_removal(set, NodeKind::C),
        "gw-bt" => verify_gw_equals_bt(set),
        "charges" => Ok(verify_charges(set)),
        "oracles" => verify_oracles(set),
        "appendix" => verify_appendix_column_arguments(set),
        "zip-rewrite" => Ok(verify_zip_rewrite(set)?),
        "locked" => verify_locked_suite(set),
        _ => Err(crate::network::NetworkError::Bounds("unknown suite").into()),
    }
}

/// Runs every suite; a suite that errors out yields a failing report.
pub fn run_suites(set: &TensorSet<Z>) -> Vec<ProofReport> {
    SUITES
        .iter()
        .map(|name| suite_or_failure(name, set))
        .collect()
}

fn suite_or_failure(name: &str, set: &TensorSet<Z>) -> ProofReport {
    run_suite(name, set).unwrap_or_else(|e| {
        let mut r = ProofReport::new(name);
        r.fail("suite aborted", Vec::new(), e, "completion");
        r
    })
}

/// First suite that fails on `set`, with its first counterexample.
pub fn first_failure(set: &TensorSet<Z>) -> Option<(&'static str, Counterexample)> {
    SUITES.iter().find_map(|&name| {
        let r = suite_or_failure(name, set);
        r.failures.into_iter().next().map(|c| (name, c))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationRow {
    pub family: Family,
    pub key: Vec<Label>,
    pub caught_by: Option<(String, Counterexample)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationReport {
    pub rows: Vec<MutationRow>,
}

impl MutationReport {
    pub fn all_caught(&self) -> bool {
        self.rows.iter().all(|r| r.caught_by.is_some())
    }

    pub fn escaped(&self) -> impl Iterator<Item = &MutationRow> {
        self.rows.iter().filter(|r| r.caught_by.is_none())
    }
}

/// Deletes each entry of B, T, C, S, G and W in turn and records the first
/// suite that notices.
pub fn mutation_battery(set: &TensorSet<Z>) -> MutationReport {
    let mut rows = Vec::new();
    for family in [
        Family::B,
        Family::T,
        Family::C,
        Family::S,
        Family::G,
        Family::W,
    ] {
        let keys: Vec<Vec<Label>> = set
            .family(family)
            .entries()
            .map(|(k, _)| k.clone())
            .collect();
        for key in keys {
            let mutated = set.without_entry(family, &key);
            let caught_by = first_failure(&mutated).map(|(s, c)| (s.to_string(), c));
            rows.push(MutationRow {
                family,
                key,
                caught_by,
            });
        }
    }
    MutationReport { rows }
}
