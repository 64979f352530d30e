//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Failing criteria are reported but do not fail the process unless
//! `MERGELAB_ACCEPTANCE_STRICT=1` is set.

use std::time::{Duration, Instant};

use mergelab::channels::{
    flower_decode_channel, min_output_entropy, random_channel, ChannelClass, KrausChannel,
};
use mergelab::coding::{build_code, error_probability};
use mergelab::info::{qi_relative_entropy, von_neumann_entropy, JointDistribution};
use mergelab::linalg::C64;
use mergelab::protocols::{
    incoherent_schumacher, lqicc_monotonicity_probe, merge_flower, merge_pure, merge_separable,
};
use mergelab::qstate::{DensityOperator, PureState, SystemLayout};
use mergelab::rates::{
    bounds_for_mixed, classify_pair, e0_pure, e_min, ec_sum_lower_bound, flower_rates,
    separable_family_bounds, separable_family_rates, source_distribution, Classification,
    GridAxis, ResourcePair,
};
use mergelab::statezoo::{
    flower, qft, random_density, random_pure, random_unitary, rng_from_seed, SeparableFamily,
};
use mergelab::coding::SWCode;
use mergelab::DEFAULT_BUDGET;
use nalgebra::DVector;
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rab(dr: usize, da: usize, db: usize) -> SystemLayout {
    SystemLayout::new([("R", dr), ("A", da), ("B", db)]).unwrap()
}

fn pure_tightness() -> Verdict {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (k, da) in [2usize, 3].into_iter().enumerate() {
        for seed in 0..200u64 {
            let psi = random_pure(rab(2, da, 2), 1000 * k as u64 + seed);
            let lower = ec_sum_lower_bound(&psi.to_density()).unwrap();
            worst = worst.max((lower - e0_pure(&psi).unwrap()).abs());
            count += 1;
        }
    }
    verdict(worst <= 1e-9, format!("{count} states, max |sum_lower - e0| = {worst:.2e}"))
}

fn flower_golden() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for d in [2usize, 4, 8] {
        let psi = flower(d).unwrap();
        let e0 = e0_pure(&psi).unwrap();
        let em = e_min(&psi.to_density()).unwrap();
        let floor = flower_rates(d).unwrap().theorem3_coherence_floor;
        let out = merge_flower(d).unwrap();
        let branch = out.branch_distances.iter().cloned().fold(0.0, f64::max);
        ok &= (e0 - 1.0).abs() <= 1e-9
            && em.abs() <= 1e-9
            && floor == 1.0 + 0.5 * (d as f64).log2()
            && out.branch_distances.len() == 2
            && branch <= 1e-9
            && out.ledger.ebits_consumed == 0.0;
        notes.push(format!("d={d}: e0={e0:.12} e_min={em:.1e} floor={floor} branch={branch:.1e}"));
    }
    verdict(ok, notes.join("; "))
}

fn maassen_uffink() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for d in [2usize, 4, 8] {
        let ch = flower_decode_channel(d).unwrap();
        let floor = 1.0 + 0.5 * (d as f64).log2();
        let h = min_output_entropy(&ch, 1000, d as u64).unwrap();
        ok &= h >= floor - 1e-6;
        notes.push(format!("d={d}: {h:.9} vs {floor}"));
    }
    let ch = flower_decode_channel(2).unwrap();
    let two = ch.tensor(&ch).unwrap();
    let h = min_output_entropy(&two, 1000, 22).unwrap();
    ok &= h >= 3.0 - 1e-6;
    notes.push(format!("d=2 two copies: {h:.9} vs 3"));
    verdict(ok, notes.join("; "))
}

fn dsbs_state(p: &JointDistribution) -> PureState {
    // Σ √p(x,y) |xy⟩^R |x⟩^A |y⟩^B
    let mut v = DVector::from_element(16, C64::from(0.0));
    for x in 0..2 {
        for y in 0..2 {
            v[((x * 2 + y) * 2 + x) * 2 + y] = C64::from(p.get(x, y).sqrt());
        }
    }
    PureState::new(rab(4, 2, 2), v).unwrap()
}

fn appendix_b() -> Verdict {
    let p = JointDistribution::dsbs(0.11).unwrap();
    let psi = dsbs_state(&p);
    let mut ok = true;
    let mut errs = Vec::new();
    let mut notes = Vec::new();
    for n in [6usize, 8] {
        let code = build_code(&p, n, 0.25, 50, 0).unwrap();
        let eps = error_probability(&code, &p).unwrap();
        let out = merge_pure(&psi, n, &code).unwrap();
        let bound = 2.0 * eps.sqrt();
        ok &= (eps - code.error_prob()).abs() < 1e-15 && out.target_distance <= bound + 1e-9;
        notes.push(format!(
            "n={n}: N={} eps={eps:.6} distance={:.6} bound={bound:.6} (pre-measurement vector distance {:.6})",
            code.num_bins(),
            out.target_distance,
            out.vector_distance.unwrap()
        ));
        errs.push(eps);
    }
    ok &= errs[1] <= errs[0];
    notes.push(format!("eps(8) <= eps(6): {}", errs[1] <= errs[0]));
    verdict(ok, notes.join("; "))
}

fn zero_error_limits() -> Verdict {
    let w = [0.3f64, 0.7];
    let mut v = DVector::from_element(8, C64::from(0.0));
    for x in 0..2 {
        v[(x * 2 + x) * 2 + x] = C64::from(w[x].sqrt());
    }
    let psi = PureState::new(rab(2, 2, 2), v).unwrap();
    let p = source_distribution(&psi).unwrap();
    let code = build_code(&p, 4, 0.0, 1, 0).unwrap();
    let out = merge_pure(&psi, 4, &code).unwrap();
    let mut ok = out.target_distance <= 1e-9 && out.ledger.ebits_consumed == 0.0;
    let mut worst = 0.0f64;
    for seed in 0..5u64 {
        let psi = random_pure(rab(2, 2, 2), seed);
        let p = source_distribution(&psi).unwrap();
        for n in 1..=4 {
            let code = SWCode::identity(&p, n, DEFAULT_BUDGET).unwrap();
            let out = merge_pure(&psi, n, &code).unwrap();
            worst = worst.max(out.target_distance);
            ok &= out.ledger.ebits_consumed == n as f64;
        }
    }
    ok &= worst <= 1e-9;
    verdict(
        ok,
        format!(
            "correlated: distance {:.1e} with {} ebits; full index: max distance {worst:.1e}",
            out.target_distance, out.ledger.ebits_consumed
        ),
    )
}

fn schumacher_gap() -> Verdict {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::new(
        SystemLayout::single("A", 2),
        DVector::from_vec(vec![C64::from(s), C64::from(s)]),
    )
    .unwrap()
    .to_density();
    let delta = 0.1;
    let n = 8;
    let p = JointDistribution::new(2, 1, plus.diagonal_probs()).unwrap();
    let code = build_code(&p, n, delta, 10, 0).unwrap();
    let out = incoherent_schumacher(&plus, n, &code, DEFAULT_BUDGET).unwrap();
    let rate = out.ledger.e_rate();
    let s_rho = von_neumann_entropy(&plus).unwrap();
    let ok = (rate - 1.0).abs() <= delta && s_rho.abs() <= 1e-9 && out.target_distance <= 1e-9;
    verdict(ok, format!("rate {rate} bits/copy, S(rho) = {s_rho:.1e}, distance {:.1e}", out.target_distance))
}

fn random_family(seed: u64) -> SeparableFamily {
    let mut rng = rng_from_seed(seed);
    let (ni, nj, d) = (rng.random_range(1..4), rng.random_range(1..4), rng.random_range(3..5));
    let w: Vec<f64> = (0..ni * nj).map(|_| rng.random::<f64>()).collect();
    let total: f64 = w.iter().sum();
    let p = (0..ni).map(|i| (0..nj).map(|j| w[i * nj + j] / total).collect()).collect();
    let states = (0..ni)
        .map(|_| {
            let u = random_unitary(d, &mut rng);
            (0..nj).map(|j| DVector::from_column_slice(u.column(j).as_slice())).collect()
        })
        .collect();
    SeparableFamily::new(p, states).unwrap()
}

fn separable_family() -> Verdict {
    let mut worst_cost = 0.0f64;
    let mut worst_sat = 0.0f64;
    for seed in 0..20u64 {
        let fam = random_family(seed);
        let out = merge_separable(&fam).unwrap();
        let (c_max, frontier) = separable_family_rates(&fam).unwrap();
        worst_cost = worst_cost.max((out.ledger.cobits_consumed - c_max).abs());
        let lower = separable_family_bounds(&fam).unwrap().sum_lower;
        for pt in frontier.sample(1.0, 20).unwrap() {
            worst_sat = worst_sat.max((pt.e + pt.c - lower).abs());
        }
    }
    verdict(
        worst_cost <= 1e-12 && worst_sat <= 1e-9,
        format!("20 families: max |cobits - c_max| = {worst_cost:.1e}, max frontier gap {worst_sat:.1e}"),
    )
}

fn qi_properties() -> Verdict {
    let mut worst_add = 0.0f64;
    for seed in 0..100u64 {
        let x = random_density(SystemLayout::new([("A", 2), ("B", 2)]).unwrap(), 1 + seed as usize % 4, seed).unwrap();
        let y = random_density(SystemLayout::new([("A2", 3), ("B2", 2)]).unwrap(), 1 + seed as usize % 6, seed + 500).unwrap();
        let joint = qi_relative_entropy(&x.tensor(&y).unwrap(), &["B", "B2"]).unwrap();
        let sum = qi_relative_entropy(&x, &["B"]).unwrap() + qi_relative_entropy(&y, &["B2"]).unwrap();
        worst_add = worst_add.max((joint - sum).abs());
    }
    let mut worst_rise = 0.0f64;
    for seed in 0..50u64 {
        let rho: DensityOperator = if seed % 2 == 0 {
            random_density(rab(2, 2, 2), 1 + seed as usize % 8, seed).unwrap()
        } else {
            random_density(SystemLayout::new([("A", 3), ("B", 2)]).unwrap(), 1 + seed as usize % 6, seed).unwrap()
        };
        let t = lqicc_monotonicity_probe(&rho, &["B"], 20, seed).unwrap();
        for w in t.windows(2) {
            worst_rise = worst_rise.max(w[1] - w[0]);
        }
    }
    verdict(
        worst_add <= 1e-9 && worst_rise <= 1e-9,
        format!("additivity max error {worst_add:.1e}; largest step increase {worst_rise:.1e}"),
    )
}

fn class_inclusions() -> Verdict {
    let mut rng = rng_from_seed(9);
    let mut violations = 0;
    for class in [ChannelClass::Sio, ChannelClass::Io, ChannelClass::Mio] {
        for _ in 0..1000 {
            let d = rng.random_range(2..5);
            let nk = rng.random_range(1..4);
            let ch = random_channel(class, d, nk, &mut rng);
            let sio = ch.is_strictly_incoherent();
            let io = ch.is_incoherent();
            let mio = ch.is_mio();
            let member = match class {
                ChannelClass::Sio => sio,
                ChannelClass::Io => io,
                _ => mio,
            };
            if !member || (sio && !io) || (io && !mio) {
                violations += 1;
            }
        }
    }
    let qft_ch = KrausChannel::unitary(qft(3), SystemLayout::single("A", 3)).unwrap();
    let qft_fails = !qft_ch.is_mio();
    verdict(
        violations == 0 && qft_fails,
        format!("3000 channels, {violations} violations; QFT fails MIO: {qft_fails}"),
    )
}

fn no_double_gain() -> Verdict {
    let e_axis: GridAxis = "E:-2:3:0.25".parse().unwrap();
    let c_axis: GridAxis = "C:-2:3:0.25".parse().unwrap();
    let mut min_lower = f64::INFINITY;
    let mut bad = 0;
    for seed in 0..500u64 {
        let rho = random_density(rab(2, 2, 2), 1 + seed as usize % 8, seed).unwrap();
        let b = bounds_for_mixed(&rho).unwrap();
        min_lower = min_lower.min(b.sum_lower);
        for e in e_axis.points() {
            for c in c_axis.points() {
                if e < 0.0 && c < 0.0 && classify_pair(ResourcePair { e, c }, &b) == Classification::Achievable {
                    bad += 1;
                }
            }
        }
    }
    verdict(
        min_lower >= -1e-9 && bad == 0,
        format!("500 states, min sum_lower {min_lower:.3e}; doubly negative achievable pairs: {bad}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Duration); 10] = [
        ("pure-state tightness", pure_tightness, Duration::from_secs(10)),
        ("flower golden values", flower_golden, Duration::from_secs(5)),
        ("Maassen-Uffink floor", maassen_uffink, Duration::from_secs(120)),
        ("block merging end to end", appendix_b, Duration::from_secs(180)),
        ("zero-error limits", zero_error_limits, Duration::from_secs(600)),
        ("incoherent Schumacher gap", schumacher_gap, Duration::from_secs(600)),
        ("separable family", separable_family, Duration::from_secs(600)),
        ("QI relative entropy", qi_properties, Duration::from_secs(600)),
        ("channel-class inclusions", class_inclusions, Duration::from_secs(600)),
        ("nonnegativity and no double gain", no_double_gain, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let pass = v.pass && took <= *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} ({name}): {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("MERGELAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
