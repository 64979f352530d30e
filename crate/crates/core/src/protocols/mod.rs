//! Simulated merging protocols with exact final states and resource ledgers.

mod flower;
mod ledger;
mod probe;
mod pure;
mod separable;

use serde::{Deserialize, Serialize};

use crate::qstate::{DensityOperator, PureState};

pub use flower::merge_flower;
pub use ledger::ResourceLedger;
pub use probe::lqicc_monotonicity_probe;
pub use pure::{incoherent_schumacher, merge_pure, merge_pure_with_budget, MergeEnsemble};
pub use separable::merge_separable;

/// Tolerance of the end-of-run sum-bound audit.
pub const AUDIT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub step: String,
    pub party: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl TranscriptStep {
    pub(crate) fn new(step: &str, party: &str, message: Option<String>) -> Self {
        Self {
            step: step.to_owned(),
            party: party.to_owned(),
            message,
        }
    }
}

#[derive(Clone, Debug)]
pub enum FinalState {
    Pure(PureState),
    Mixed(DensityOperator),
    /// Outcome-averaged block state kept in structured form; materialize
    /// with [`MergeEnsemble::to_density`] when small enough.
    Ensemble(Box<MergeEnsemble>),
}

#[derive(Clone, Debug)]
pub struct MergeOutcome {
    pub protocol: String,
    pub n: usize,
    pub final_state: FinalState,
    /// `‖ρ_final − target‖₁` of the outcome-averaged state.
    pub target_distance: f64,
    /// `⟨target|ρ_final|target⟩`.
    pub fidelity: f64,
    pub sw_error: f64,
    pub ledger: ResourceLedger,
    pub transcript: Vec<TranscriptStep>,
    /// Per-outcome distances, where the protocol branches on a measurement.
    pub branch_distances: Vec<f64>,
    /// Asymptotic coherence rate quoted for the protocol, if any.
    pub analytic_coherence_rate: Option<f64>,
    /// `‖ |φ⟩ − |ψ̃⟩^{⊗n} ‖₂` before Alice's final measurement (block
    /// protocols only).
    pub vector_distance: Option<f64>,
}

/// JSON run report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub protocol: String,
    pub n: usize,
    pub sw_error: f64,
    pub target_distance: f64,
    pub fidelity: f64,
    pub ledger: LedgerReport,
    pub transcript: Vec<TranscriptStep>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub branch_distances: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_coherence_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector_distance: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LedgerReport {
    pub n: usize,
    pub ebits_consumed: f64,
    pub ebits_gained: f64,
    pub cobits_consumed: f64,
    pub cobits_gained: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl MergeOutcome {
    pub fn report(&self) -> RunReport {
        let l = &self.ledger;
        RunReport {
            protocol: self.protocol.clone(),
            n: self.n,
            sw_error: self.sw_error,
            target_distance: self.target_distance,
            fidelity: self.fidelity,
            ledger: LedgerReport {
                n: l.n,
                ebits_consumed: l.ebits_consumed,
                ebits_gained: l.ebits_gained,
                cobits_consumed: l.cobits_consumed,
                cobits_gained: l.cobits_gained,
                e: l.e_rate(),
                c: l.c_rate(),
            },
            transcript: self.transcript.clone(),
            branch_distances: self.branch_distances.clone(),
            analytic_coherence_rate: self.analytic_coherence_rate,
            vector_distance: self.vector_distance,
        }
    }

    /// `E + C ≥ sum_lower − AUDIT_TOL` for the ledger's per-copy rates.
    pub fn satisfies_sum_bound(&self, sum_lower: f64) -> bool {
        self.ledger.e_rate() + self.ledger.c_rate() >= sum_lower - AUDIT_TOL
    }

    /// `2√ε`, the end-to-end bound for block merging.
    pub fn distance_bound(&self) -> f64 {
        2.0 * self.sw_error.sqrt()
    }
}
