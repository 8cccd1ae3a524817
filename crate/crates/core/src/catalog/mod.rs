//! Named scenarios binding group families to their cocycles, automorphisms
//! and expected outcomes, together with reports and their serialization.
//!
//! Every expected value carries an [`Origin`]: stated outright for the
//! example, produced by a closed formula, counted by brute force, or fixed by
//! a control construction.

mod b3;
mod export;
mod scenarios;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

pub use b3::{
    compare_b3_table, f_basis_table, reference_b3_table, render_expansion, table_counit_residual, Normalization, B3Alignment, B3Comparison, B3Mismatch,
    B3_LABELS, B3_TOL,
};
pub use export::{export_report, export_report_timed, round_sig, Format, SIGNIFICANT_DIGITS};
pub use scenarios::{build_scenario, run_scenario, Run, ScenarioInfo, SCENARIOS};

use crate::group::FiniteGroup;
use crate::kac::{group_kac, verify_bundle};
use crate::report::{CheckReport, Status};

/// Scenario parameters as given on the command line.
pub type Params = BTreeMap<String, String>;

/// Knobs shared by every scenario run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub tol: f64,
    /// Complete positivity is only evaluated when `dim A` is at most this.
    pub cp_limit: usize,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tol: crate::DEFAULT_TOL, cp_limit: crate::hypergroup::DEFAULT_CP_LIMIT, seed: crate::DEFAULT_SEED }
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Stated explicitly for this example.
    Stated,
    /// Evaluated from a closed formula in the parameters.
    Formula,
    /// Counted by exhaustive enumeration.
    BruteForce,
    /// Holds by construction of a control case.
    Control,
}

/// One expected value, what was computed, and whether they agree.
#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub quantity: String,
    pub expected: Value,
    pub computed: Value,
    pub origin: Origin,
    /// The formula or statement the expected value rests on.
    pub basis: String,
    pub status: Status,
}

/// A named `Δ̃` defect at a specific `P(λ(c))`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct WitnessInfo {
    pub label: String,
    pub defect: f64,
}

/// Values measured by a run, all optional because pipelines differ.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Computed {
    pub group: String,
    pub group_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle_class: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coinvolutivity_class: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twisted_cocommutative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(rename = "dim_B", skip_serializing_if = "Option::is_none")]
    pub dim_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    /// Largest defect over the spanning set `P(λg)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessInfo>,
    /// Defect at the element named for the scenario.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub named_witness: Option<WitnessInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_pushforward: Option<bool>,
}

/// Outcome of one scenario run.
///
/// `checks` decide the exit status; `diagnostics` hold residuals that
/// explain a classification (a failing strict-cocycle residual of a
/// pseudo-cocycle is information, not an error).
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub scenario: String,
    pub params: Params,
    pub tool_version: String,
    pub tolerance: f64,
    pub cp_limit: usize,
    pub seed: u64,
    pub computed: Computed,
    pub expected: Vec<Expectation>,
    pub checks: CheckReport,
    pub diagnostics: CheckReport,
}

impl Report {
    pub fn new(scenario: &str, params: &Params, opts: &RunOptions) -> Self {
        Report {
            scenario: scenario.to_string(),
            params: params.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerance: opts.tol,
            cp_limit: opts.cp_limit,
            seed: opts.seed,
            ..Report::default()
        }
    }

    /// No scenario, no checks: serializes to an empty document.
    pub fn is_empty(&self) -> bool {
        self.scenario.is_empty() && self.checks.is_empty() && self.expected.is_empty()
    }

    /// Every check and every expectation passed or was skipped.
    pub fn passed(&self) -> bool {
        self.checks.all_passed() && self.expected.iter().all(|e| e.status != Status::Fail)
    }

    pub fn expectation(&self, quantity: &str) -> Option<&Expectation> {
        self.expected.iter().find(|e| e.quantity == quantity)
    }

    /// Records an expectation; equality is exact on the JSON values.
    pub fn expect(&mut self, quantity: &str, expected: Value, computed: Value, origin: Origin, basis: &str) {
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        self.push_expectation(quantity, expected, computed, origin, basis, status);
    }

    /// Records an expectation whose comparison is done by the caller.
    pub fn expect_flag(&mut self, quantity: &str, expected: Value, computed: Value, origin: Origin, basis: &str, ok: bool) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push_expectation(quantity, expected, computed, origin, basis, status);
    }

    fn push_expectation(
        &mut self,
        quantity: &str,
        expected: Value,
        computed: Value,
        origin: Origin,
        basis: &str,
        status: Status,
    ) {
        self.expected.push(Expectation {
            quantity: quantity.to_string(),
            expected,
            computed,
            origin,
            basis: basis.to_string(),
            status,
        });
    }

    /// Failing check and expectation names, for messages.
    pub fn failure_names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.checks.failures().map(|c| c.name.clone()).collect();
        out.extend(self.expected.iter().filter(|e| e.status == Status::Fail).map(|e| format!("expected.{}", e.quantity)));
        out
    }
}

/// Validates a user supplied group table and the Kac axioms of `C(G)`.
pub fn verify_group(group: FiniteGroup, opts: &RunOptions) -> Report {
    let mut params = Params::new();
    params.insert("order".into(), group.order().to_string());
    let mut r = Report::new("verify_group", &params, opts);
    r.computed.group = group.name().to_string();
    r.computed.group_order = group.order();
    let g = Arc::new(group);
    let bundle = group_kac(g.clone());
    r.checks.extend_prefixed("bundle", verify_bundle(&bundle, opts.tol));
    r.computed.twisted_cocommutative = Some(bundle.cocommutativity_defect() <= opts.tol);
    r.expect(
        "cocommutative",
        json!(true),
        json!(r.computed.twisted_cocommutative),
        Origin::Control,
        "Δ(λg) = λg⊗λg",
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, Family};

    #[test]
    fn verify_group_on_a_family() {
        let g = build_family(Family::Dihedral(2)).unwrap();
        let r = verify_group(g, &RunOptions::default());
        assert!(r.passed(), "{:?}", r.failure_names());
        assert_eq!(r.computed.group_order, 8);
    }

    #[test]
    fn empty_report_is_empty() {
        assert!(Report::default().is_empty());
        assert!(Report::default().passed());
    }
}
