//! Exact one-shot merging of the flower state.
//!
//! Alice measures `A` in the computational basis. On outcome `i` the
//! remaining state is `(I ⊗ U_i)|Φ⟩^{RB}`; Bob prepares `|+⟩^{B~}` and applies
//! `W_i = Σ_b |b⟩⟨b| ⊗ U_b U_i†`, which restores the flower state with `B~`
//! in place of `A`. Undoing `U_i` is folded into `W_i`, so the controlled
//! unitary is Bob's only coherent operation.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::qstate::{overlap, trace_distance, DensityOperator, PureState, SystemLayout};
use crate::statezoo::{flower_with, max_coherent_on, qft};

use super::{FinalState, MergeOutcome, ResourceLedger, TranscriptStep};

/// Merges `flower(d)`.
pub fn merge_flower(d: usize) -> Result<MergeOutcome> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension d = {d}, need d >= 2")));
    }
    merge_flower_with(d, &qft(d))
}

/// `C_r` of `W|b, j⟩`, maximized over basis inputs.
fn max_generated_coherence(w: &DMatrix<C64>) -> f64 {
    w.column_iter()
        .map(|c| linalg::entropy_bits(c.iter().map(|z| z.norm_sqr())))
        .fold(0.0, f64::max)
}

fn controlled_unitary(us: &[&DMatrix<C64>], i: usize) -> DMatrix<C64> {
    let d = us[0].nrows();
    let mut w = DMatrix::from_element(2 * d, 2 * d, ZERO);
    for (b, u) in us.iter().enumerate() {
        let block = *u * us[i].adjoint();
        w.view_mut((b * d, b * d), (d, d)).copy_from(&block);
    }
    w
}

/// Merges the flower state built with `U₁ = u1`.
pub fn merge_flower_with(d: usize, u1: &DMatrix<C64>) -> Result<MergeOutcome> {
    let psi = flower_with(d, u1)?;
    let target = psi.relabel("A", "B~")?;
    let target_rho = target.to_density();
    let id = DMatrix::<C64>::identity(d, d);
    let us = [&id, u1];
    let rb = SystemLayout::new([("R", d), ("B", d)])?;
    let plus = max_coherent_on("B~", 2)?;

    let mut avg = DMatrix::from_element(2 * d * d, 2 * d * d, ZERO);
    let mut branch_distances = Vec::with_capacity(2);
    let mut charge = 0.0f64;
    for i in 0..2 {
        let mut bra = DMatrix::from_element(1, 2, ZERO);
        bra[(0, i)] = C64::from(1.0);
        let (_, v) = psi.apply_operator(&bra, &["A"])?;
        let prob = v.norm_squared();
        // A is now one-dimensional and drops out without reordering
        let post = PureState::normalized(rb.clone(), DVector::from_column_slice(v.as_slice()))?;
        let w = controlled_unitary(&us, i);
        charge = charge.max(max_generated_coherence(&w));
        let out = plus
            .tensor(&post)?
            .apply_unitary(&w, &["B~", "B"])?
            .permute(&["R", "B~", "B"])?;
        let rho = out.to_density();
        branch_distances.push(trace_distance(&rho, &target_rho)?);
        avg += rho.matrix() * C64::from(prob);
    }
    let final_state = DensityOperator::new(target_rho.layout().clone(), avg)?;

    let mut ledger = ResourceLedger::new(1);
    ledger.consume_cobits(1.0 + charge)?;
    let transcript = vec![
        TranscriptStep::new("measure_A_computational", "alice->bob", Some("i".into())),
        TranscriptStep::new("prepare_plus_B~", "bob", None),
        TranscriptStep::new(
            "controlled_unitary",
            "bob",
            Some(format!("sum_b |b><b| (x) U_b U_i^dagger, charged {charge:.6} cobits")),
        ),
    ];
    Ok(MergeOutcome {
        protocol: "merge_flower".into(),
        n: 1,
        target_distance: trace_distance(&final_state, &target_rho)?,
        fidelity: overlap(&target, &final_state)?,
        final_state: FinalState::Mixed(final_state),
        sw_error: 0.0,
        ledger,
        transcript,
        branch_distances,
        analytic_coherence_rate: Some(1.0 + 0.5 * (d as f64).log2()),
        vector_distance: None,
    })
}
