//! Block Slepian–Wolf codes with exhaustively computed error probability.
//!
//! Words `x^n` and `y^n` are indexed with the first symbol most significant.
//! Pair tables are indexed `x * |Y|^n + y`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{conditional_shannon, JointDistribution};
use crate::DEFAULT_BUDGET;

/// Slack subtracted before rounding `2^{n(H+δ)}` up, so that exact powers
/// of two are not bumped by round-off.
const CEIL_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SWCode {
    n: usize,
    num_bins: usize,
    x_size: usize,
    y_size: usize,
    f: Vec<usize>,
    g: Vec<Option<usize>>,
    good: Vec<bool>,
    error_prob: f64,
    source: JointDistribution,
}

/// Output of the injective extension `G̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GTilde {
    Decoded { x: usize, y: usize },
    /// Reserve element tagged by the undecodable input.
    Reserve { nu: usize, y: usize },
}

/// Audit dump of a code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SWCodeFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_bins: usize,
    pub f: Vec<usize>,
    pub error_prob: f64,
    pub x_alphabet: usize,
    pub y_alphabet: usize,
}

fn checked_pow(base: usize, n: usize) -> Option<u128> {
    (0..n).try_fold(1u128, |acc, _| acc.checked_mul(base as u128))
}

/// Checks that the pair enumeration fits `budget` and returns `(|X|^n, |Y|^n)`.
pub fn enumeration_sizes(p: &JointDistribution, n: usize, budget: usize) -> Result<(usize, usize)> {
    if n == 0 {
        return Err(Error::InvalidParameter("block length n must be >= 1".into()));
    }
    let (xs, ys) = (checked_pow(p.x_size(), n), checked_pow(p.y_size(), n));
    let required = match (xs, ys) {
        (Some(a), Some(b)) => a.checked_mul(b).unwrap_or(u128::MAX),
        _ => u128::MAX,
    };
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok((xs.unwrap() as usize, ys.unwrap() as usize))
}

/// `p(x^n, y^n)` for every pair, in pair-index order.
pub fn block_probabilities(p: &JointDistribution, n: usize) -> Vec<f64> {
    let (xs, ys) = (p.x_size(), p.y_size());
    let mut table = vec![1.0];
    let (mut xk, mut yk) = (1usize, 1usize);
    for _ in 0..n {
        let (nx, ny) = (xk * xs, yk * ys);
        let mut next = vec![0.0; nx * ny];
        for x in 0..xk {
            for y in 0..yk {
                let base = table[x * yk + y];
                for a in 0..xs {
                    for b in 0..ys {
                        next[(x * xs + a) * ny + y * ys + b] = base * p.get(a, b);
                    }
                }
            }
        }
        table = next;
        xk = nx;
        yk = ny;
    }
    table
}

/// `⌈2^{n(H(X|Y)+δ)}⌉`, before clamping to `|X|^n`.
pub fn bins_for_rate(p: &JointDistribution, n: usize, rate_delta: f64) -> f64 {
    let exponent = n as f64 * (conditional_shannon(p) + rate_delta);
    (exponent.exp2() - CEIL_SLACK).ceil().max(1.0)
}

/// Maximum-likelihood decoder table `g[ν * |Y|^n + y]`, ties to the
/// smallest `x^n`; `None` for empty bins.
fn ml_decoder(f: &[usize], num_bins: usize, ny: usize, probs: &[f64]) -> Vec<Option<usize>> {
    let mut g = vec![None; num_bins * ny];
    let mut best = vec![f64::NEG_INFINITY; num_bins];
    for y in 0..ny {
        best.iter_mut().for_each(|b| *b = f64::NEG_INFINITY);
        for (x, &nu) in f.iter().enumerate() {
            let pr = probs[x * ny + y];
            if pr > best[nu] {
                best[nu] = pr;
                g[nu * ny + y] = Some(x);
            }
        }
    }
    g
}

/// Sum of `probs` over pairs with `g(f(x), y) ≠ x`, in pair-index order.
fn failing_mass(f: &[usize], g: &[Option<usize>], ny: usize, probs: &[f64]) -> f64 {
    let mut err = 0.0;
    for (x, &nu) in f.iter().enumerate() {
        for y in 0..ny {
            if g[nu * ny + y] != Some(x) {
                err += probs[x * ny + y];
            }
        }
    }
    err
}

impl SWCode {
    /// Code from an explicit binning `f` with the maximum-likelihood decoder.
    pub fn from_binning(
        p: &JointDistribution,
        n: usize,
        num_bins: usize,
        f: Vec<usize>,
        budget: usize,
    ) -> Result<Self> {
        let (nx, ny) = enumeration_sizes(p, n, budget)?;
        if f.len() != nx {
            return Err(Error::DimensionMismatch(format!(
                "binning has {} entries, |X|^n = {nx}",
                f.len()
            )));
        }
        if num_bins == 0 || f.iter().any(|&b| b >= num_bins) {
            return Err(Error::InvalidParameter(format!(
                "bin indices must lie in 0..{num_bins}"
            )));
        }
        if (num_bins as u128) * (ny as u128) > budget as u128 {
            return Err(Error::BudgetExceeded {
                required: num_bins as u128 * ny as u128,
                budget,
            });
        }
        let probs = block_probabilities(p, n);
        Ok(Self::assemble(p, n, num_bins, f, &probs))
    }

    fn assemble(p: &JointDistribution, n: usize, num_bins: usize, f: Vec<usize>, probs: &[f64]) -> Self {
        let ny = probs.len() / f.len();
        let g = ml_decoder(&f, num_bins, ny, probs);
        let error_prob = failing_mass(&f, &g, ny, probs);
        let mut good = vec![false; probs.len()];
        for (x, &nu) in f.iter().enumerate() {
            for y in 0..ny {
                good[x * ny + y] = probs[x * ny + y] > 0.0 && g[nu * ny + y] == Some(x);
            }
        }
        Self {
            n,
            num_bins,
            x_size: p.x_size(),
            y_size: p.y_size(),
            f,
            g,
            good,
            error_prob,
            source: p.clone(),
        }
    }

    /// `f(x^n) = x^n` with `N = |X|^n`; zero error.
    pub fn identity(p: &JointDistribution, n: usize, budget: usize) -> Result<Self> {
        let (nx, _) = enumeration_sizes(p, n, budget)?;
        Self::from_binning(p, n, nx, (0..nx).collect(), budget)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    /// `|X|^n`.
    pub fn x_words(&self) -> usize {
        self.f.len()
    }

    /// `|Y|^n`.
    pub fn y_words(&self) -> usize {
        self.good.len() / self.f.len()
    }

    pub fn f(&self, x: usize) -> usize {
        self.f[x]
    }

    pub fn f_table(&self) -> &[usize] {
        &self.f
    }

    pub fn g(&self, nu: usize, y: usize) -> Option<usize> {
        self.g[nu * self.y_words() + y]
    }

    pub fn is_good(&self, x: usize, y: usize) -> bool {
        self.good[x * self.y_words() + y]
    }

    pub fn error_prob(&self) -> f64 {
        self.error_prob
    }

    pub fn source(&self) -> &JointDistribution {
        &self.source
    }

    /// Ebits needed to teleport a bin index: `⌈log₂ N⌉`.
    pub fn index_qubits(&self) -> u32 {
        usize::BITS - (self.num_bins - 1).leading_zeros()
    }

    /// `G̃(ν, y^n)`: the decoded pair when it lies in the good set, otherwise
    /// the reserve tag.
    pub fn gtilde(&self, nu: usize, y: usize) -> GTilde {
        match self.g(nu, y) {
            Some(x) if self.is_good(x, y) => GTilde::Decoded { x, y },
            _ => GTilde::Reserve { nu, y },
        }
    }

    /// Probability mass of the good set under the generating distribution.
    pub fn good_probability(&self) -> f64 {
        let probs = block_probabilities(&self.source, self.n);
        probs
            .iter()
            .zip(&self.good)
            .filter(|(_, &g)| g)
            .map(|(p, _)| p)
            .sum()
    }

    pub fn to_file(&self) -> SWCodeFile {
        SWCodeFile {
            n: self.n,
            num_bins: self.num_bins,
            f: self.f.clone(),
            error_prob: self.error_prob,
            x_alphabet: self.x_size,
            y_alphabet: self.y_size,
        }
    }

    /// Rebuilds a dumped code against its source distribution.
    pub fn from_file(file: SWCodeFile, p: &JointDistribution, budget: usize) -> Result<Self> {
        if file.x_alphabet != p.x_size() || file.y_alphabet != p.y_size() {
            return Err(Error::DimensionMismatch(format!(
                "code alphabets {}x{} do not match distribution {}x{}",
                file.x_alphabet,
                file.y_alphabet,
                p.x_size(),
                p.y_size()
            )));
        }
        Self::from_binning(p, file.n, file.num_bins, file.f, budget)
    }
}

/// Exact `Pr{X^n ≠ g(f(X^n), Y^n)}` of `code` under `p`.
pub fn error_probability(code: &SWCode, p: &JointDistribution) -> Result<f64> {
    if p.x_size() != code.x_size || p.y_size() != code.y_size {
        return Err(Error::DimensionMismatch(format!(
            "code alphabets {}x{} do not match distribution {}x{}",
            code.x_size,
            code.y_size,
            p.x_size(),
            p.y_size()
        )));
    }
    let probs = block_probabilities(p, code.n);
    Ok(failing_mass(&code.f, &code.g, code.y_words(), &probs))
}

/// Uniform draws behind trial `trial`'s binning; independent of `N`, so
/// binnings for `N` and `2N` nest.
fn trial_uniforms(nx: usize, seed: u64, trial: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    (0..nx).map(|_| rng.random::<f64>()).collect()
}

/// Best of `trials` seeded uniform binnings into exactly `num_bins` bins.
pub fn build_code_with_bins(
    p: &JointDistribution,
    n: usize,
    num_bins: usize,
    trials: usize,
    seed: u64,
    budget: usize,
) -> Result<SWCode> {
    let (nx, ny) = enumeration_sizes(p, n, budget)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if num_bins == 0 {
        return Err(Error::InvalidParameter("number of bins must be positive".into()));
    }
    if num_bins >= nx {
        return SWCode::identity(p, n, budget);
    }
    if (num_bins as u128) * (ny as u128) > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: num_bins as u128 * ny as u128,
            budget,
        });
    }
    let probs = block_probabilities(p, n);
    let mut best: Option<SWCode> = None;
    for trial in 0..trials {
        let f: Vec<usize> = trial_uniforms(nx, seed, trial)
            .into_iter()
            .map(|u| ((u * num_bins as f64) as usize).min(num_bins - 1))
            .collect();
        let code = SWCode::assemble(p, n, num_bins, f, &probs);
        if best.as_ref().is_none_or(|b| code.error_prob < b.error_prob) {
            best = Some(code);
        }
    }
    Ok(best.expect("trials >= 1"))
}

/// Code at rate `H(X|Y) + δ` with `N = ⌈2^{n(H+δ)}⌉`, or the identity code
/// once that reaches `|X|^n`.
pub fn build_code(
    p: &JointDistribution,
    n: usize,
    rate_delta: f64,
    trials: usize,
    seed: u64,
) -> Result<SWCode> {
    build_code_with_budget(p, n, rate_delta, trials, seed, DEFAULT_BUDGET)
}

pub fn build_code_with_budget(
    p: &JointDistribution,
    n: usize,
    rate_delta: f64,
    trials: usize,
    seed: u64,
    budget: usize,
) -> Result<SWCode> {
    if !(rate_delta >= 0.0) || !rate_delta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rate delta {rate_delta} must be a finite nonnegative number"
        )));
    }
    let (nx, _) = enumeration_sizes(p, n, budget)?;
    let bins = bins_for_rate(p, n, rate_delta);
    let num_bins = if bins >= nx as f64 { nx } else { bins as usize };
    build_code_with_bins(p, n, num_bins, trials, seed, budget)
}
