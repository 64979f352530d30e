//! Random LQICC trajectories for checking monotonicity of `C_r^{X|Y}`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::channels::{random_general, random_io};
use crate::error::{Error, Result};
use crate::info::qi_relative_entropy;
use crate::linalg::{C64, ZERO};
use crate::qstate::DensityOperator;
use crate::statezoo::rng_from_seed;

const MAX_OUTCOMES: usize = 3;

/// Sum of `Σ_k (K_k ⊗ I)ρ(K_k ⊗ I)†` over an operator list acting on `targets`.
fn sandwich_sum(rho: &DensityOperator, kraus: &[DMatrix<C64>], targets: &[&str]) -> Result<DensityOperator> {
    let n = rho.dim();
    let mut acc = DMatrix::from_element(n, n, ZERO);
    for k in kraus {
        acc += rho.sandwich(k, targets)?.1;
    }
    Ok(DensityOperator::from_trusted(rho.layout().clone(), acc))
}

/// Applies `steps` random LQICC rounds to `rho` and returns `C_r^{X|Y}` of
/// the initial state and after every round; `Y` is `incoherent_side`.
///
/// Each round is a local instrument on one side whose outcome selects a
/// random channel on the other: a general instrument on the quantum side
/// followed by incoherent channels on `Y`, or an incoherent instrument on `Y`
/// followed by general channels on the quantum side. Outcomes are averaged.
pub fn lqicc_monotonicity_probe(
    rho: &DensityOperator,
    incoherent_side: &[&str],
    steps: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if incoherent_side.is_empty() {
        return Err(Error::InvalidParameter("no incoherent side given".into()));
    }
    let layout = rho.layout();
    layout.resolve(incoherent_side)?;
    let quantum: Vec<&str> = layout.labels().filter(|l| !incoherent_side.contains(l)).collect();
    let dim_of = |labels: &[&str]| -> Result<usize> {
        labels.iter().try_fold(1usize, |acc, l| Ok(acc * layout.dim_of(l)?))
    };
    let dy = dim_of(incoherent_side)?;
    let dx = dim_of(&quantum)?;

    let mut rng = rng_from_seed(seed);
    let mut state = rho.clone();
    let mut trace = vec![qi_relative_entropy(&state, incoherent_side)?];
    for _ in 0..steps {
        let outcomes = rng.random_range(1..=MAX_OUTCOMES);
        let alice_first = quantum.is_empty() || rng.random_bool(0.5);
        let n = state.dim();
        let mut next = DMatrix::from_element(n, n, ZERO);
        if alice_first && !quantum.is_empty() {
            let inst = random_general(dx, outcomes, &mut rng);
            for k in inst.kraus() {
                let (_, m) = state.sandwich(k, &quantum)?;
                let branch = DensityOperator::from_trusted(state.layout().clone(), m);
                let bob = random_io(dy, rng.random_range(1..=MAX_OUTCOMES), &mut rng);
                next += sandwich_sum(&branch, bob.kraus(), incoherent_side)?.matrix();
            }
        } else {
            let inst = random_io(dy, outcomes, &mut rng);
            for k in inst.kraus() {
                let (_, m) = state.sandwich(k, incoherent_side)?;
                let branch = DensityOperator::from_trusted(state.layout().clone(), m);
                if quantum.is_empty() {
                    next += branch.matrix();
                } else {
                    let alice = random_general(dx, rng.random_range(1..=MAX_OUTCOMES), &mut rng);
                    next += sandwich_sum(&branch, alice.kraus(), &quantum)?.matrix();
                }
            }
        }
        // restore exact Hermiticity lost to rounding
        let next = (&next + next.adjoint()) * C64::from(0.5);
        state = DensityOperator::from_trusted(state.layout().clone(), next);
        trace.push(qi_relative_entropy(&state, incoherent_side)?);
    }
    Ok(trace)
}
