//! Merging of the separable family `Σ p_ij |ij⟩⟨ij|^R ⊗ ψ_ij^A ⊗ |i⟩⟨i|^B`.
//!
//! Bob reads `i` with a computational measurement, Alice measures in a basis
//! containing `{ψ_ij}_j`, and Bob prepares `ψ_ij` locally. No entanglement is
//! used; the coherence charge is the expected preparation cost.

use nalgebra::{DMatrix, DVector};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::info::rel_entropy_coherence;
use crate::linalg::{C64, ZERO};
use crate::qstate::{overlap, trace_distance, DensityOperator, SystemLayout};
use crate::statezoo::{separable_family_state, SeparableFamily};

use super::{FinalState, MergeOutcome, ResourceLedger, TranscriptStep};

const BRANCH_TOL: f64 = 1e-12;

/// Completes orthonormal `vecs` to a basis of `C^d` by Gram–Schmidt over the
/// computational basis.
fn complete_basis(vecs: &[DVector<C64>], d: usize) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = vecs.to_vec();
    for k in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = DVector::from_element(d, ZERO);
        v[k] = C64::from(1.0);
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / C64::from(norm));
        }
    }
    basis
}

fn projector(d: usize, k: usize) -> DMatrix<C64> {
    let mut m = DMatrix::from_element(d, d, ZERO);
    m[(k, k)] = C64::from(1.0);
    m
}

pub fn merge_separable(fam: &SeparableFamily) -> Result<MergeOutcome> {
    let (dr, da, db) = fam.dims();
    let rho = separable_family_state(fam)?;
    let target = rho.relabel("A", "B~")?.permute(&["R", "B~", "B"])?;
    let out_layout = target.layout().clone();
    let rb = SystemLayout::new([("R", dr), ("B", db)])?;

    let bob_meas: Vec<DMatrix<C64>> = (0..db).map(|i| projector(db, i)).collect();
    if !KrausChannel::from_kraus(bob_meas.clone())?.is_incoherent() {
        return Err(Error::Invariant("Bob's measurement is not incoherent".into()));
    }

    let n = out_layout.total_dim();
    let mut avg = DMatrix::from_element(n, n, ZERO);
    let mut branch_distances = Vec::new();
    let mut ledger = ResourceLedger::new(1);
    for (i, proj) in bob_meas.iter().enumerate() {
        let (_, after_bob) = rho.sandwich(proj, &["B"])?;
        let after_bob = DensityOperator::from_trusted(rho.layout().clone(), after_bob);
        let row: Vec<DVector<C64>> = (0..fam.num_j()).map(|j| fam.state(i, j).clone()).collect();
        for (j, v) in complete_basis(&row, da).iter().enumerate() {
            let bra = DMatrix::from_fn(1, da, |_, c| v[c].conj());
            let (_, m) = after_bob.sandwich(&bra, &["A"])?;
            let prob = m.trace().re;
            let expected = if j < fam.num_j() { fam.p(i, j) } else { 0.0 };
            if (prob - expected).abs() > BRANCH_TOL {
                return Err(Error::Invariant(format!(
                    "branch ({i}, {j}) has probability {prob}, expected {expected}"
                )));
            }
            if j >= fam.num_j() || expected == 0.0 {
                continue;
            }
            // A is one-dimensional now; Bob prepares ψ_ij on B~
            let post = DensityOperator::from_trusted(rb.clone(), m / C64::from(prob));
            let prepared = fam.pure_state(i, j, "B~").to_density();
            let branch = prepared.tensor(&post)?.permute(&["R", "B~", "B"])?;
            let (_, cond) = target.sandwich(&projector(dr, i * fam.num_j() + j), &["R"])?;
            let cond = DensityOperator::from_trusted(out_layout.clone(), cond / C64::from(expected));
            branch_distances.push(trace_distance(&branch, &cond)?);
            avg += branch.matrix() * C64::from(prob);
        }
    }
    // charged from the family weights, in the order used for C_max
    for i in 0..fam.num_i() {
        for j in 0..fam.num_j() {
            let p = fam.p(i, j);
            if p > 0.0 {
                ledger.consume_cobits(p * rel_entropy_coherence(&fam.pure_state(i, j, "A").to_density())?)?;
            }
        }
    }
    let final_state = DensityOperator::new(out_layout, avg)?;
    let transcript = vec![
        TranscriptStep::new("measure_B_computational", "bob->alice", Some("i".into())),
        TranscriptStep::new("measure_A_family_basis", "alice->bob", Some("j".into())),
        TranscriptStep::new("prepare_psi_ij_B~", "bob", None),
    ];
    Ok(MergeOutcome {
        protocol: "merge_separable".into(),
        n: 1,
        target_distance: trace_distance(&final_state, &target)?,
        fidelity: fidelity_with_mixed(&target, &final_state)?,
        final_state: FinalState::Mixed(final_state),
        sw_error: 0.0,
        ledger,
        transcript,
        branch_distances,
        analytic_coherence_rate: None,
        vector_distance: None,
    })
}

/// `Tr ρσ`, which is the fidelity when either state is pure and otherwise
/// an overlap score.
fn fidelity_with_mixed(target: &DensityOperator, rho: &DensityOperator) -> Result<f64> {
    if (target.purity() - 1.0).abs() < 1e-9 {
        let eig = target.matrix().clone().symmetric_eigen();
        let k = eig.eigenvalues.imax();
        let v = eig.eigenvectors.column(k).into_owned();
        let psi = crate::qstate::PureState::new(target.layout().clone(), v)?;
        return overlap(&psi, rho);
    }
    Ok((target.matrix() * rho.matrix()).trace().re)
}
