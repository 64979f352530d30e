use std::fs;
use std::io::Write;
use std::path::Path;

use mergelab::channels::{flower_decode_channel, min_output_entropy, ChannelFile, KrausChannel};
use mergelab::coding::{build_code_with_bins, build_code_with_budget, SWCode, SWCodeFile};
use mergelab::info::JointDistribution;
use mergelab::protocols::{
    incoherent_schumacher, merge_flower, merge_pure_with_budget, merge_separable, RunReport,
};
use mergelab::qstate::{State, SystemLayout};
use mergelab::rates::{
    bounds_for_mixed, bounds_for_pure, ec_sum_lower_bound, flower_rates, separable_family_bounds,
    source_distribution, write_region_csv, GridAxis, RateBounds,
};
use mergelab::statezoo::{
    flower, max_coherent, max_entangled, qft, random_density, random_pure, SeparableFamily,
    SeparableFamilyFile,
};
use mergelab::{Error, Result};
use serde::Serialize;

use crate::{Builtin, Cli, CodeArgs, Command, Source, ZooKind};

const THEOREM3_CAVEAT: &str = "The floor 1 + log2(d)/2 is proven only for one-way LQICC protocols \
that start with exactly zero entanglement; it is not established when the entanglement rate \
vanishes only asymptotically.";

const FLOOR_TOL: f64 = 1e-6;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn read_state(path: &Path) -> Result<State> {
    State::from_json(&read_text(path)?)
}

fn read_family(path: &Path) -> Result<SeparableFamily> {
    let file: SeparableFamilyFile = serde_json::from_str(&read_text(path)?)?;
    SeparableFamily::from_file(file)
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, bytes).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(cli, text.as_bytes())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d}, need d >= 2")));
    }
    Ok(())
}

fn check_code_args(args: &CodeArgs) -> Result<()> {
    check_n(args.n)?;
    if !(args.delta >= 0.0) || !args.delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta = {}, need 0 <= delta", args.delta)));
    }
    if args.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundsReport {
    source: &'static str,
    sum_lower: f64,
    e_min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    e0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_max: Option<f64>,
    /// Compared against `c_max` where both are known.
    #[serde(skip_serializing_if = "Option::is_none")]
    e0_minus_e_min: Option<f64>,
}

impl BoundsReport {
    fn new(source: &'static str, b: RateBounds) -> Self {
        Self {
            source,
            sum_lower: b.sum_lower,
            e_min: b.e_min,
            e0: b.e0,
            c_max: b.c_max,
            e0_minus_e_min: b.e0.map(|e0| e0 - b.e_min),
        }
    }
}

fn source_bounds(source: &Source) -> Result<BoundsReport> {
    if let Some(path) = &source.state {
        return Ok(match read_state(path)? {
            State::Pure(psi) => BoundsReport::new("pure_state", bounds_for_pure(&psi)?),
            State::Mixed(rho) => BoundsReport::new("mixed_state", bounds_for_mixed(&rho)?),
        });
    }
    let path = source.family.as_ref().expect("clap requires a source");
    Ok(BoundsReport::new("separable_family", separable_family_bounds(&read_family(path)?)?))
}

fn region(cli: &Cli, source: &Source, grid: &[GridAxis]) -> Result<()> {
    let find = |name: &str| {
        grid.iter()
            .find(|a| a.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::InvalidParameter(format!("--grid needs an axis named {name}")))
    };
    let (e, c) = (find("E")?, find("C")?);
    let b = source_bounds(source)?;
    let bounds = RateBounds {
        sum_lower: b.sum_lower,
        e_min: b.e_min,
        e0: b.e0,
        c_max: b.c_max,
    };
    let mut buf = Vec::new();
    write_region_csv(&mut buf, &bounds, e, c)?;
    emit(cli, &buf)
}

fn build_code(p: &JointDistribution, args: &CodeArgs, budget: usize) -> Result<SWCode> {
    match args.bins {
        Some(bins) => build_code_with_bins(p, args.n, bins, args.trials, args.seed, budget),
        None => build_code_with_budget(p, args.n, args.delta, args.trials, args.seed, budget),
    }
}

#[derive(Serialize)]
struct MergeReport {
    #[serde(flatten)]
    run: RunReport,
    code_bins: usize,
    distance_bound: f64,
    within_distance_bound: bool,
    sum_lower: f64,
    satisfies_sum_bound: bool,
}

fn merge(cli: &Cli, state: &Path, args: &CodeArgs, code_file: Option<&Path>, tol: f64) -> Result<()> {
    check_code_args(args)?;
    let state = read_state(state)?;
    // single systems are compressed with trivial side information
    let (p, schumacher) = if state.layout().len() == 1 {
        let rho = state.to_density();
        (JointDistribution::new(rho.dim(), 1, rho.diagonal_probs())?, Some(rho))
    } else {
        match &state {
            State::Pure(psi) => (source_distribution(psi)?, None),
            State::Mixed(_) => {
                return Err(Error::InvalidState(
                    "block merging needs a pure state on R, A, B".into(),
                ))
            }
        }
    };
    let code = match code_file {
        Some(path) => {
            let file: SWCodeFile = serde_json::from_str(&read_text(path)?)?;
            SWCode::from_file(file, &p, cli.budget)?
        }
        None => build_code(&p, args, cli.budget)?,
    };
    let (out, sum_lower) = match (&schumacher, &state) {
        (Some(rho), _) => (
            incoherent_schumacher(rho, args.n, &code, cli.budget)?,
            mergelab::linalg::entropy_bits(rho.diagonal_probs()),
        ),
        (None, State::Pure(psi)) => (
            merge_pure_with_budget(psi, args.n, &code, cli.budget)?,
            ec_sum_lower_bound(&psi.to_density())?,
        ),
        (None, State::Mixed(_)) => unreachable!("rejected above"),
    };
    let bound = out.distance_bound();
    emit_json(
        cli,
        &MergeReport {
            run: out.report(),
            code_bins: code.num_bins(),
            distance_bound: bound,
            within_distance_bound: out.target_distance <= bound + tol,
            sum_lower,
            satisfies_sum_bound: out.satisfies_sum_bound(sum_lower),
        },
    )
}

#[derive(Serialize)]
struct FlowerReport {
    d: usize,
    bounds: BoundsReport,
    theorem3_coherence_floor: f64,
    theorem3_caveat: &'static str,
    run: RunReport,
    satisfies_sum_bound: bool,
}

fn flower_cmd(cli: &Cli, d: usize) -> Result<()> {
    check_d(d)?;
    let rates = flower_rates(d)?;
    let computed = bounds_for_pure(&flower(d)?)?;
    let out = merge_flower(d)?;
    emit_json(
        cli,
        &FlowerReport {
            d,
            bounds: BoundsReport::new("pure_state", computed),
            theorem3_coherence_floor: rates.theorem3_coherence_floor,
            theorem3_caveat: THEOREM3_CAVEAT,
            satisfies_sum_bound: out.satisfies_sum_bound(computed.sum_lower),
            run: out.report(),
        },
    )
}

#[derive(Serialize)]
struct SeparableReport {
    bounds: BoundsReport,
    run: RunReport,
    satisfies_sum_bound: bool,
}

fn separable(cli: &Cli, path: &Path) -> Result<()> {
    let fam = read_family(path)?;
    let bounds = separable_family_bounds(&fam)?;
    let out = merge_separable(&fam)?;
    emit_json(
        cli,
        &SeparableReport {
            bounds: BoundsReport::new("separable_family", bounds),
            satisfies_sum_bound: out.satisfies_sum_bound(bounds.sum_lower),
            run: out.report(),
        },
    )
}

fn swcode(cli: &Cli, dist: &Path, args: &CodeArgs) -> Result<()> {
    check_code_args(args)?;
    let p = JointDistribution::read_csv(read_text(dist)?.as_bytes(), None)?;
    emit_json(cli, &build_code(&p, args, cli.budget)?.to_file())
}

#[derive(Serialize)]
struct ClassReport {
    in_dim: usize,
    out_dim: usize,
    num_kraus: usize,
    sio: bool,
    io: bool,
    mio: bool,
}

fn miocheck(cli: &Cli, channel: Option<&Path>, builtin: Option<Builtin>, d: Option<usize>) -> Result<()> {
    let ch = match (channel, builtin) {
        (Some(path), _) => {
            let file: ChannelFile = serde_json::from_str(&read_text(path)?)?;
            KrausChannel::from_file(file)?
        }
        (None, Some(kind)) => {
            let d = d.expect("clap requires --d with --builtin");
            check_d(d)?;
            let l = SystemLayout::single("A", d);
            match kind {
                Builtin::Identity => KrausChannel::identity(l),
                Builtin::Dephasing => KrausChannel::dephasing(l),
                Builtin::Qft => KrausChannel::unitary(qft(d), l)?,
                Builtin::FlowerDecode => flower_decode_channel(d)?,
            }
        }
        (None, None) => unreachable!("clap requires a channel"),
    };
    emit_json(
        cli,
        &ClassReport {
            in_dim: ch.in_dim(),
            out_dim: ch.out_dim(),
            num_kraus: ch.kraus().len(),
            sio: ch.is_strictly_incoherent(),
            io: ch.is_incoherent(),
            mio: ch.is_mio(),
        },
    )
}

#[derive(Serialize)]
struct UncertaintyReport {
    d: usize,
    copies: usize,
    restarts: usize,
    seed: u64,
    min_output_entropy: f64,
    floor: f64,
    satisfies_floor: bool,
    theorem3_caveat: &'static str,
}

fn uncertainty(cli: &Cli, d: usize, restarts: usize, seed: u64, copies: usize) -> Result<()> {
    check_d(d)?;
    if copies == 0 {
        return Err(Error::InvalidParameter("copies must be at least 1".into()));
    }
    let one = flower_decode_channel(d)?;
    let mut ch = one.clone();
    for _ in 1..copies {
        ch = ch.tensor(&one)?;
    }
    let dim = (ch.in_dim() as u128) * (ch.out_dim() as u128);
    if dim > cli.budget as u128 {
        return Err(Error::BudgetExceeded { required: dim, budget: cli.budget });
    }
    let h = min_output_entropy(&ch, restarts, seed)?;
    let floor = copies as f64 * (1.0 + 0.5 * (d as f64).log2());
    emit_json(
        cli,
        &UncertaintyReport {
            d,
            copies,
            restarts,
            seed,
            min_output_entropy: h,
            floor,
            satisfies_floor: h >= floor - FLOOR_TOL,
            theorem3_caveat: THEOREM3_CAVEAT,
        },
    )
}

fn parse_layout(spec: &str) -> Result<SystemLayout> {
    let factors = spec
        .split(',')
        .map(|part| {
            let (label, dim) = part
                .split_once(':')
                .ok_or_else(|| Error::Format(format!("factor `{part}` is not LABEL:DIM")))?;
            let dim: usize = dim
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("dimension in `{part}` is not an integer")))?;
            Ok((label.trim().to_owned(), dim))
        })
        .collect::<Result<Vec<_>>>()?;
    SystemLayout::new(factors)
}

fn statezoo(
    cli: &Cli,
    kind: ZooKind,
    d: Option<usize>,
    layout: Option<&str>,
    rank: usize,
    seed: u64,
) -> Result<()> {
    let need_d = || -> Result<usize> {
        let d = d.ok_or_else(|| Error::InvalidParameter("--d is required for this state".into()))?;
        check_d(d)?;
        Ok(d)
    };
    let need_layout = || -> Result<SystemLayout> {
        parse_layout(layout.ok_or_else(|| {
            Error::InvalidParameter("--layout is required for random states".into())
        })?)
    };
    let state = match kind {
        ZooKind::Flower => State::Pure(flower(need_d()?)?),
        ZooKind::MaxEntangled => State::Pure(max_entangled(need_d()?)?),
        ZooKind::MaxCoherent => State::Pure(max_coherent(need_d()?)?),
        ZooKind::RandomPure => State::Pure(random_pure(need_layout()?, seed)),
        ZooKind::RandomMixed => {
            let layout = need_layout()?;
            let dim = layout.total_dim() as u128;
            if dim * dim > cli.budget as u128 {
                return Err(Error::BudgetExceeded { required: dim * dim, budget: cli.budget });
            }
            State::Mixed(random_density(layout, rank, seed)?)
        }
    };
    let mut text = state.to_json()?;
    text.push('\n');
    emit(cli, text.as_bytes())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Rates { source } => emit_json(cli, &source_bounds(source)?),
        Command::Region { source, grid } => region(cli, source, grid),
        Command::Merge { state, code, code_file, tol } => merge(cli, state, code, code_file.as_deref(), *tol),
        Command::Flower { d } => flower_cmd(cli, *d),
        Command::Separable { family } => separable(cli, family),
        Command::Swcode { dist, code } => swcode(cli, dist, code),
        Command::Miocheck { channel, builtin, d } => miocheck(cli, channel.as_deref(), *builtin, *d),
        Command::Uncertainty { d, restarts, seed, copies } => uncertainty(cli, *d, *restarts, *seed, *copies),
        Command::Statezoo { kind, d, layout, rank, seed } => {
            statezoo(cli, *kind, *d, layout.as_deref(), *rank, *seed)
        }
    }
}
