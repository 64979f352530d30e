//! Block merging against a literal step-by-step simulation on the full
//! Hilbert space, with Alice's outcomes enumerated one by one.

use mergelab::coding::{build_code_with_bins, SWCode};
use mergelab::linalg::{hermitian_eigenvalues, C64};
use mergelab::protocols::{incoherent_schumacher, merge_pure, FinalState};
use mergelab::qstate::{DensityOperator, PureState, SystemLayout};
use mergelab::rates::source_distribution;
use mergelab::statezoo::random_pure;
use mergelab::DEFAULT_BUDGET;
use nalgebra::{DMatrix, DVector};

struct Literal {
    distance: f64,
    rho: DMatrix<C64>,
    target: DVector<C64>,
}

fn digits(mut i: usize, base: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for k in (0..n).rev() {
        d[k] = i % base;
        i /= base;
    }
    d
}

/// Runs the protocol on explicit vectors: `U`, relabeled transfer, `V`, each
/// conjugate-basis outcome `α^n` with its `Z` correction, then averages.
fn literal(psi: &PureState, n: usize, code: &SWCode) -> Literal {
    let dims = psi.layout().dims();
    let (dr, dx, dy) = (dims[0], dims[1], dims[2]);
    let a = psi.amplitudes();
    let (rn, xn, yn) = (dr.pow(n as u32), dx.pow(n as u32), dy.pow(n as u32));
    let nb = code.num_bins();
    let wd = xn + nb;
    // ψ^{⊗n} with grouped R^n, A^n, B^n indices
    let block = |r: usize, x: usize, y: usize| -> C64 {
        let (rd, xd, ydg) = (digits(r, dr, n), digits(x, dx, n), digits(y, dy, n));
        (0..n).map(|i| a[(rd[i] * dx + xd[i]) * dy + ydg[i]]).product()
    };
    // after U, transfer and V: amplitude on (r, x, w, y)
    let mut after_v = vec![C64::from(0.0); rn * xn * wd * yn];
    for r in 0..rn {
        for x in 0..xn {
            for y in 0..yn {
                let nu = code.f(x);
                let w = match code.g(nu, y) {
                    Some(xh) => xh,
                    None => xn + nu,
                };
                after_v[((r * xn + x) * wd + w) * yn + y] += block(r, x, y);
            }
        }
    }
    let omega = |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % dx) as f64 / dx as f64);
    let dim = rn * wd * yn;
    let mut rho = DMatrix::from_element(dim, dim, C64::from(0.0));
    for alpha in 0..xn {
        let ad = digits(alpha, dx, n);
        let mut phi = DVector::from_element(dim, C64::from(0.0));
        for r in 0..rn {
            for x in 0..xn {
                let xd = digits(x, dx, n);
                // ⟨α|x⟩ on every A factor
                let dot: usize = ad.iter().zip(&xd).map(|(p, q)| p * q).sum();
                let bra = omega(dx * dx * n - dot % dx) / C64::from((xn as f64).sqrt());
                for w in 0..wd {
                    let z = if w < xn {
                        let wdg = digits(w, dx, n);
                        omega(ad.iter().zip(&wdg).map(|(p, q)| p * q).sum())
                    } else {
                        C64::from(1.0)
                    };
                    for y in 0..yn {
                        let amp = after_v[((r * xn + x) * wd + w) * yn + y];
                        phi[(r * wd + w) * yn + y] += amp * bra * z;
                    }
                }
            }
        }
        rho += &phi * phi.adjoint();
    }
    let mut target = DVector::from_element(dim, C64::from(0.0));
    for r in 0..rn {
        for x in 0..xn {
            for y in 0..yn {
                target[(r * wd + x) * yn + y] = block(r, x, y);
            }
        }
    }
    let diff = &rho - &target * target.adjoint();
    let distance = hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum();
    Literal { distance, rho, target }
}

fn layout(dr: usize, dx: usize, dy: usize) -> SystemLayout {
    SystemLayout::new([("R", dr), ("A", dx), ("B", dy)]).unwrap()
}

fn check_against_literal(psi: &PureState, n: usize, code: &SWCode) {
    let out = merge_pure(psi, n, code).unwrap();
    let lit = literal(psi, n, code);
    assert!(
        (out.target_distance - lit.distance).abs() < 1e-9,
        "structured {} vs literal {}",
        out.target_distance,
        lit.distance
    );
    let FinalState::Ensemble(ens) = &out.final_state else {
        panic!("block merge returns an ensemble");
    };
    let rho = ens.to_density(DEFAULT_BUDGET).unwrap();
    let dev = (rho.matrix() - &lit.rho).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    assert!(dev < 1e-10, "final state deviates by {dev}");
    let t = ens.target(DEFAULT_BUDGET).unwrap();
    assert!((t.amplitudes() - &lit.target).norm() < 1e-12);
    let fid = lit.target.dotc(&(&lit.rho * &lit.target)).re;
    assert!((out.fidelity - fid).abs() < 1e-9);
}

#[test]
fn random_states_match_literal_simulation() {
    for seed in 0..6u64 {
        let dims = if seed % 2 == 0 { (2, 2, 2) } else { (2, 3, 2) };
        let psi = random_pure(layout(dims.0, dims.1, dims.2), seed);
        let p = source_distribution(&psi).unwrap();
        for n in 1..=2 {
            let xn = dims.1.pow(n as u32);
            for bins in [1, 2, xn - 1] {
                let code = build_code_with_bins(&p, n, bins, 3, seed, DEFAULT_BUDGET).unwrap();
                check_against_literal(&psi, n, &code);
            }
        }
    }
}

#[test]
fn three_copies_match_literal_simulation() {
    let psi = random_pure(layout(2, 2, 2), 42);
    let p = source_distribution(&psi).unwrap();
    let code = build_code_with_bins(&p, 3, 3, 5, 1, DEFAULT_BUDGET).unwrap();
    check_against_literal(&psi, 3, &code);
}

#[test]
fn perfectly_correlated_source_needs_no_entanglement() {
    let l = layout(3, 3, 3);
    let w = [0.2f64, 0.3, 0.5];
    let mut v = DVector::from_element(27, C64::from(0.0));
    for x in 0..3 {
        v[(x * 3 + x) * 3 + x] = C64::from(w[x].sqrt());
    }
    let psi = PureState::new(l, v).unwrap();
    let p = source_distribution(&psi).unwrap();
    let code = build_code_with_bins(&p, 2, 1, 1, 0, DEFAULT_BUDGET).unwrap();
    assert_eq!(code.error_prob(), 0.0);
    let out = merge_pure(&psi, 2, &code).unwrap();
    assert!(out.target_distance <= 1e-9);
    assert_eq!(out.ledger.ebits_consumed, 0.0);
    assert_eq!(out.ledger.cobits_consumed, 0.0);
}

#[test]
fn teleport_everything_limit() {
    // |0⟩^R |+⟩^A |0⟩^B with the identity code
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::from_element(8, C64::from(0.0));
    v[0] = C64::from(s);
    v[2] = C64::from(s);
    let psi = PureState::new(layout(2, 2, 2), v).unwrap();
    let p = source_distribution(&psi).unwrap();
    let code = SWCode::identity(&p, 1, DEFAULT_BUDGET).unwrap();
    let out = merge_pure(&psi, 1, &code).unwrap();
    assert!(out.target_distance <= 1e-9);
    assert_eq!(out.ledger.ebits_consumed, 1.0);
}

#[test]
fn bad_code_is_rejected() {
    let psi = random_pure(layout(2, 2, 2), 1);
    let other = random_pure(layout(2, 2, 2), 2);
    let p = source_distribution(&other).unwrap();
    let code = SWCode::identity(&p, 1, DEFAULT_BUDGET).unwrap();
    assert!(merge_pure(&psi, 1, &code).is_err());
    let p = source_distribution(&psi).unwrap();
    let code = SWCode::identity(&p, 2, DEFAULT_BUDGET).unwrap();
    assert!(merge_pure(&psi, 1, &code).is_err());
    let wrong = random_pure(layout(2, 3, 2), 1);
    assert!(merge_pure(&wrong, 2, &code).is_err());
}

#[test]
fn schumacher_rates() {
    use mergelab::info::JointDistribution;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::new(
        SystemLayout::single("A", 2),
        DVector::from_vec(vec![C64::from(s), C64::from(s)]),
    )
    .unwrap()
    .to_density();
    let p = JointDistribution::new(2, 1, vec![0.5, 0.5]).unwrap();
    let code = SWCode::identity(&p, 3, DEFAULT_BUDGET).unwrap();
    let out = incoherent_schumacher(&plus, 3, &code, DEFAULT_BUDGET).unwrap();
    assert!(out.target_distance <= 1e-9);
    assert_eq!(out.ledger.e_rate(), 1.0);

    let diag = DensityOperator::diagonal(SystemLayout::single("A", 3), &[0.0, 1.0, 0.0]).unwrap();
    let p = JointDistribution::new(3, 1, vec![0.0, 1.0, 0.0]).unwrap();
    let code = build_code_with_bins(&p, 2, 1, 1, 0, DEFAULT_BUDGET).unwrap();
    let out = incoherent_schumacher(&diag, 2, &code, DEFAULT_BUDGET).unwrap();
    assert!(out.target_distance <= 1e-9);
    assert_eq!(out.ledger.e_rate(), 0.0);
}
