//! Block merging of pure states through a Slepian–Wolf code.
//!
//! With `ψ = Σ_{x,y} |μ_{xy}⟩^R |x⟩^A |y⟩^B`, the state after Bob's isometry
//! is `Σ |μ_{x^n y^n}⟩ |x^n⟩^{A^n} |w(x^n, y^n)⟩^{A'} |y^n⟩^{B^n}` where `A'`
//! holds `X^n` followed by `N` reserve levels. Alice's conjugate-basis
//! outcome `α^n` and Bob's correction leave the phase `ω^{α·s}` on each pair,
//! with `s = x̂ − x` for decoded pairs and `s = −x` for reserve pairs. The
//! outcome average is therefore `Σ_s |w_s⟩⟨w_s|`, `|w_s⟩` collecting the
//! pairs of class `s`, and its distance to the target is read off the Gram
//! matrix of `{target, w_s}` without building the block space.

use nalgebra::{DMatrix, DVector};

use crate::channels::{KrausChannel, SparseOperator};
use crate::coding::{enumeration_sizes, GTilde, SWCode};
use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::qstate::{DensityOperator, PureState, SystemLayout};
use crate::rates::source_distribution;
use crate::statezoo::qft;
use crate::DEFAULT_BUDGET;

use super::{FinalState, MergeOutcome, ResourceLedger, TranscriptStep};

const SOURCE_TOL: f64 = 1e-9;
const OPERATOR_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PairImage {
    x: usize,
    y: usize,
    /// Level of `A'` (decoded word, or `|X|^n + ν` for reserve).
    w: usize,
    /// Phase class `s` as a base-`d` index.
    class: usize,
}

/// Structured outcome-averaged final state of a block merge.
#[derive(Clone, Debug)]
pub struct MergeEnsemble {
    psi: PureState,
    n: usize,
    x_words: usize,
    y_words: usize,
    num_bins: usize,
    pairs: Vec<PairImage>,
}

fn digits_table(radix: usize, n: usize, count: usize) -> Vec<Vec<usize>> {
    let radices = vec![radix; n];
    (0..count).map(|i| linalg::mixed_radix_digits(i, &radices)).collect()
}

/// Single-copy branch vectors `μ_{xy}` and their overlaps at equal `y`.
struct Branches {
    dr: usize,
    dx: usize,
    dy: usize,
    mu: Vec<DVector<C64>>,
    /// `⟨μ_{xy}|μ_{x'y}⟩` at `(x * dx + x') * dy + y`.
    inner: Vec<C64>,
}

impl Branches {
    fn new(psi: &PureState) -> Self {
        let dims = psi.layout().dims();
        let (dr, dx, dy) = (dims[0], dims[1], dims[2]);
        let amps = psi.amplitudes();
        let mu: Vec<DVector<C64>> = (0..dx * dy)
            .map(|xy| DVector::from_iterator(dr, (0..dr).map(|r| amps[r * dx * dy + xy])))
            .collect();
        let mut inner = vec![ZERO; dx * dx * dy];
        for x in 0..dx {
            for x2 in 0..dx {
                for y in 0..dy {
                    inner[(x * dx + x2) * dy + y] = mu[x * dy + y].dotc(&mu[x2 * dy + y]);
                }
            }
        }
        Self { dr, dx, dy, mu, inner }
    }

    fn block_inner(&self, xd: &[usize], x2d: &[usize], yd: &[usize]) -> C64 {
        let mut acc = C64::from(1.0);
        for i in 0..xd.len() {
            acc *= self.inner[(xd[i] * self.dx + x2d[i]) * self.dy + yd[i]];
        }
        acc
    }

    fn block_prob(&self, xd: &[usize], yd: &[usize]) -> f64 {
        xd.iter()
            .zip(yd)
            .map(|(&x, &y)| self.inner[(x * self.dx + x) * self.dy + y].re)
            .product()
    }

    fn block_mu(&self, xd: &[usize], yd: &[usize]) -> DVector<C64> {
        let mut v = DVector::from_element(1, C64::from(1.0));
        for (&x, &y) in xd.iter().zip(yd) {
            v = v.kronecker(&self.mu[x * self.dy + y]);
        }
        v
    }
}

/// `‖Σ_k c_k |v_k⟩⟨v_k|‖₁` from the Gram matrix of the `v_k`.
fn trace_norm_from_gram(gram: &DMatrix<C64>, coeffs: &[f64]) -> f64 {
    let eig = gram.clone().symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > 1e-14 * scale.max(1.0))
        .collect();
    let k = keep.len();
    if k == 0 {
        return 0.0;
    }
    let c = DMatrix::from_diagonal(&DVector::from_iterator(
        coeffs.len(),
        coeffs.iter().map(|&x| C64::from(x)),
    ));
    let q = DMatrix::from_fn(gram.nrows(), k, |r, j| {
        eig.eigenvectors[(r, keep[j])] * eig.eigenvalues[keep[j]].sqrt()
    });
    let m = q.adjoint() * c * q;
    linalg::hermitian_eigenvalues(&m).iter().map(|x| x.abs()).sum()
}

impl MergeEnsemble {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of `A'`: `|X|^n + N`.
    pub fn w_dim(&self) -> usize {
        self.x_words + self.num_bins
    }

    fn branches(&self) -> Branches {
        Branches::new(&self.psi)
    }

    pub fn layout(&self) -> SystemLayout {
        let b = self.branches();
        SystemLayout::new([
            ("R", b.dr.pow(self.n as u32)),
            ("A'", self.w_dim()),
            ("B", self.y_words),
        ])
        .expect("distinct labels")
    }

    fn check_budget(&self, budget: usize) -> Result<usize> {
        let d = self.layout().total_dim();
        let required = (d as u128) * (d as u128);
        if required > budget as u128 {
            return Err(Error::BudgetExceeded { required, budget });
        }
        Ok(d)
    }

    fn index(&self, r: usize, w: usize, y: usize) -> usize {
        (r * self.w_dim() + w) * self.y_words
            + y
    }

    /// `|ψ⟩^{⊗n}` on `R^n A'^n B^n`, with `A'^n` the first `|X|^n` levels.
    pub fn target(&self, budget: usize) -> Result<PureState> {
        let d = self.check_budget(budget)?;
        let b = self.branches();
        let xdig = digits_table(b.dx, self.n, self.x_words);
        let ydig = digits_table(b.dy, self.n, self.y_words);
        let mut v = DVector::from_element(d, ZERO);
        for x in 0..self.x_words {
            for y in 0..self.y_words {
                let mu = b.block_mu(&xdig[x], &ydig[y]);
                for (r, &z) in mu.iter().enumerate() {
                    v[self.index(r, x, y)] += z;
                }
            }
        }
        PureState::new(self.layout(), v)
    }

    /// Vectors `|w_s⟩` of the nonempty phase classes.
    pub fn components(&self, budget: usize) -> Result<Vec<DVector<C64>>> {
        let d = self.check_budget(budget)?;
        let b = self.branches();
        let xdig = digits_table(b.dx, self.n, self.x_words);
        let ydig = digits_table(b.dy, self.n, self.y_words);
        let mut by_class: std::collections::BTreeMap<usize, DVector<C64>> = Default::default();
        for p in &self.pairs {
            let mu = b.block_mu(&xdig[p.x], &ydig[p.y]);
            let v = by_class
                .entry(p.class)
                .or_insert_with(|| DVector::from_element(d, ZERO));
            for (r, &z) in mu.iter().enumerate() {
                v[self.index(r, p.w, p.y)] += z;
            }
        }
        Ok(by_class.into_values().collect())
    }

    /// `Σ_s |w_s⟩⟨w_s|` as a dense operator.
    pub fn to_density(&self, budget: usize) -> Result<DensityOperator> {
        let d = self.check_budget(budget)?;
        let mut m = DMatrix::from_element(d, d, ZERO);
        for v in self.components(budget)? {
            m += linalg::outer(&v);
        }
        DensityOperator::new(self.layout(), m)
    }
}

/// Gram-matrix evaluation of distance and fidelity to the target.
fn evaluate(
    b: &Branches,
    pairs: &[PairImage],
    n: usize,
    x_words: usize,
    y_words: usize,
) -> (f64, f64) {
    let xdig = digits_table(b.dx, n, x_words);
    let ydig = digits_table(b.dy, n, y_words);
    let mut class_slot: std::collections::HashMap<usize, usize> = Default::default();
    for p in pairs {
        let next = class_slot.len() + 1;
        class_slot.entry(p.class).or_insert(next);
    }
    let m = class_slot.len() + 1;
    let mut gram = DMatrix::from_element(m, m, ZERO);
    // slot 0 is the target; its norm is the total source mass
    gram[(0, 0)] = C64::from(pairs.iter().map(|p| b.block_prob(&xdig[p.x], &ydig[p.y])).sum::<f64>());
    let mut sorted: Vec<&PairImage> = pairs.iter().collect();
    sorted.sort_by_key(|p| (p.w, p.y, p.x));
    for group in sorted.chunk_by(|a, b| (a.w, a.y) == (b.w, b.y)) {
        let (w, y) = (group[0].w, group[0].y);
        let yd = &ydig[y];
        for a in group {
            let sa = class_slot[&a.class];
            for c in group {
                let sc = class_slot[&c.class];
                gram[(sa, sc)] += b.block_inner(&xdig[a.x], &xdig[c.x], yd);
            }
            if w < x_words {
                let z = b.block_inner(&xdig[w], &xdig[a.x], yd);
                gram[(0, sa)] += z;
                gram[(sa, 0)] += z.conj();
            }
        }
    }
    let mut coeffs = vec![1.0; m];
    coeffs[0] = -1.0;
    let distance = trace_norm_from_gram(&gram, &coeffs);
    let fidelity = (1..m).map(|s| gram[(0, s)].norm_sqr()).sum();
    (distance, fidelity)
}

fn check_code(psi: &PureState, n: usize, code: &SWCode) -> Result<()> {
    let p = source_distribution(psi)?;
    if code.n() != n {
        return Err(Error::InvalidParameter(format!(
            "code block length {} differs from n = {n}",
            code.n()
        )));
    }
    if (p.x_size(), p.y_size()) != (code.x_size(), code.y_size()) {
        return Err(Error::DimensionMismatch(format!(
            "code alphabets {}x{} do not match state dims A={}, B={}",
            code.x_size(),
            code.y_size(),
            p.x_size(),
            p.y_size()
        )));
    }
    let diff = p
        .probs()
        .iter()
        .zip(code.source().probs())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if diff > SOURCE_TOL {
        return Err(Error::InvalidParameter(format!(
            "code was built for a different source (max deviation {diff:.3e})"
        )));
    }
    Ok(())
}

fn require_incoherent_isometry(name: &str, op: &SparseOperator) -> Result<()> {
    if !op.is_incoherent() {
        return Err(Error::Invariant(format!("{name} is not incoherent")));
    }
    if !op.is_isometry(OPERATOR_TOL) {
        return Err(Error::Invariant(format!("{name} is not an isometry")));
    }
    Ok(())
}

/// Builds Alice's `U`, Bob's `V` and the `Z^{α^n}` corrections as explicit
/// operators and checks their incoherence.
fn check_operators(code: &SWCode, d: usize, n: usize) -> Result<()> {
    let (xw, yw, nb) = (code.x_words(), code.y_words(), code.num_bins());
    let one = C64::from(1.0);
    let u = SparseOperator::monomial(xw * nb, (0..xw).map(|x| (x * nb + code.f(x), one)))?;
    require_incoherent_isometry("Alice's encoding isometry U", &u)?;
    let w_dim = xw + nb;
    let v = SparseOperator::monomial(
        w_dim * yw,
        (0..nb * yw).map(|col| {
            let (nu, y) = (col / yw, col % yw);
            let w = match code.gtilde(nu, y) {
                GTilde::Decoded { x, .. } => x,
                GTilde::Reserve { nu, .. } => xw + nu,
            };
            (w * yw + y, one)
        }),
    )?;
    require_incoherent_isometry("Bob's decoding isometry V", &v)?;
    let radices = vec![d; n];
    let xdig = digits_table(d, n, xw);
    for alpha in 0..d.pow(n as u32) {
        let ad = linalg::mixed_radix_digits(alpha, &radices);
        let z = SparseOperator::monomial(
            w_dim,
            (0..w_dim).map(|w| {
                let phase = if w < xw {
                    let dot: usize = ad.iter().zip(&xdig[w]).map(|(a, x)| a * x).sum();
                    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (dot % d) as f64 / d as f64)
                } else {
                    one
                };
                (w, phase)
            }),
        )?;
        require_incoherent_isometry("Bob's correction Z", &z)?;
    }
    // Alice's destructive measurement K_α = |0⟩⟨α| on one A system
    let f = qft(d);
    let kraus = (0..d)
        .map(|a| {
            let mut k = DMatrix::from_element(d, d, ZERO);
            for x in 0..d {
                k[(0, x)] = f[(x, a)].conj();
            }
            k
        })
        .collect();
    let meas = KrausChannel::from_kraus(kraus)?;
    if !meas.is_incoherent() {
        return Err(Error::Invariant("Alice's measurement is not incoherent".into()));
    }
    Ok(())
}

/// Merges `ψ^{⊗n}` with the code's encoder and injective decoder.
pub fn merge_pure(psi: &PureState, n: usize, code: &SWCode) -> Result<MergeOutcome> {
    merge_pure_with_budget(psi, n, code, DEFAULT_BUDGET)
}

pub fn merge_pure_with_budget(
    psi: &PureState,
    n: usize,
    code: &SWCode,
    budget: usize,
) -> Result<MergeOutcome> {
    run_block_merge("merge_pure", psi, n, code, budget)
}

fn run_block_merge(
    protocol: &str,
    psi: &PureState,
    n: usize,
    code: &SWCode,
    budget: usize,
) -> Result<MergeOutcome> {
    check_code(psi, n, code)?;
    let psi = psi.permute(&["R", "A", "B"])?;
    let b = Branches::new(&psi);
    let (x_words, y_words) = enumeration_sizes(code.source(), n, budget)?;
    check_operators(code, b.dx, n)?;

    let radices = vec![b.dx; n];
    let xdig = digits_table(b.dx, n, x_words);
    let ydig = digits_table(b.dy, n, y_words);
    let mut pairs = Vec::new();
    let mut decoded_mass = 0.0;
    for x in 0..x_words {
        for y in 0..y_words {
            let prob = b.block_prob(&xdig[x], &ydig[y]);
            if prob == 0.0 {
                continue;
            }
            let (w, s): (usize, Vec<usize>) = match code.gtilde(code.f(x), y) {
                GTilde::Decoded { x: xh, .. } => {
                    if xh == x {
                        decoded_mass += prob;
                    }
                    let s = xdig[xh].iter().zip(&xdig[x]).map(|(a, c)| (a + b.dx - c) % b.dx).collect();
                    (xh, s)
                }
                GTilde::Reserve { nu, .. } => {
                    let s = xdig[x].iter().map(|c| (b.dx - c) % b.dx).collect();
                    (x_words + nu, s)
                }
            };
            pairs.push(PairImage {
                x,
                y,
                w,
                class: linalg::mixed_radix_index(&s, &radices),
            });
        }
    }
    let (distance, fidelity) = evaluate(&b, &pairs, n, x_words, y_words);

    let qubits = code.index_qubits();
    let mut ledger = ResourceLedger::new(n);
    ledger.consume_ebits(qubits as f64)?;
    let transcript = vec![
        TranscriptStep::new("encode_U", "alice", None),
        TranscriptStep::new(
            "teleport_A0_to_B0",
            "alice->bob",
            Some(format!("bin index of {qubits} qubits sent with {qubits} ebits")),
        ),
        TranscriptStep::new("decode_V", "bob", None),
        TranscriptStep::new(
            "conjugate_measurement",
            "alice->bob",
            Some(format!("alpha^n: {n} digits base {}", b.dx)),
        ),
        TranscriptStep::new("phase_correction_Z", "bob", None),
    ];
    let ensemble = MergeEnsemble {
        psi,
        n,
        x_words,
        y_words,
        num_bins: code.num_bins(),
        pairs,
    };
    Ok(MergeOutcome {
        protocol: protocol.to_owned(),
        n,
        final_state: FinalState::Ensemble(Box::new(ensemble)),
        target_distance: distance,
        fidelity,
        sw_error: code.error_prob(),
        ledger,
        transcript,
        branch_distances: Vec::new(),
        analytic_coherence_rate: None,
        vector_distance: Some((2.0 - 2.0 * decoded_mass).max(0.0).sqrt()),
    })
}

/// Compresses `ρ^{⊗n}` to Bob without side information by merging a
/// purification `ψ^{RA} ⊗ |0⟩^B` (with `B` one-dimensional).
pub fn incoherent_schumacher(
    rho: &DensityOperator,
    n: usize,
    code: &SWCode,
    budget: usize,
) -> Result<MergeOutcome> {
    if rho.layout().len() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "expected a single system, found {}",
            rho.layout()
        )));
    }
    let d = rho.dim();
    let eig = rho.matrix().clone().symmetric_eigen();
    let layout = SystemLayout::new([("R", d), ("A", d), ("B", 1)])?;
    let mut v = DVector::from_element(d * d, ZERO);
    for k in 0..d {
        let lam = eig.eigenvalues[k].max(0.0).sqrt();
        for x in 0..d {
            v[k * d + x] = eig.eigenvectors[(x, k)] * lam;
        }
    }
    let psi = PureState::normalized(layout, v)?;
    run_block_merge("incoherent_schumacher", &psi, n, code, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_of_orthogonal_pair() {
        // |0⟩⟨0| − |1⟩⟨1| has trace norm 2
        let gram = DMatrix::from_diagonal_element(2, 2, C64::from(1.0));
        assert!((trace_norm_from_gram(&gram, &[-1.0, 1.0]) - 2.0).abs() < 1e-12);
        // identical vectors cancel
        let same = DMatrix::from_element(2, 2, C64::from(1.0));
        assert!(trace_norm_from_gram(&same, &[-1.0, 1.0]).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_of_overlapping_pair() {
        // |0⟩ and |+⟩: eigenvalues ±1/√2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let gram = DMatrix::from_row_slice(2, 2, &[1.0, s, s, 1.0].map(C64::from));
        assert!((trace_norm_from_gram(&gram, &[-1.0, 1.0]) - 2f64.sqrt()).abs() < 1e-12);
    }
}
