//! Kraus channels, coherence-class validators and minimum-output-entropy
//! search.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::qstate::{DensityOperator, SystemLayout, STATE_TOL};
use crate::statezoo::{self, random_unitary, rng_from_seed};

/// Entries at or below this modulus count as zero in class checks.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Off-diagonal tolerance of the MIO check.
pub const MIO_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<DMatrix<C64>>,
    input_layout: SystemLayout,
    output_layout: SystemLayout,
}

impl KrausChannel {
    pub fn new(
        kraus: Vec<DMatrix<C64>>,
        input_layout: SystemLayout,
        output_layout: SystemLayout,
    ) -> Result<Self> {
        let (din, dout) = (input_layout.total_dim(), output_layout.total_dim());
        if kraus.is_empty() {
            return Err(Error::InvalidParameter("empty Kraus set".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dout, din)) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator is {}x{}, expected {dout}x{din}",
                k.nrows(),
                k.ncols()
            )));
        }
        let sum = kraus
            .iter()
            .fold(DMatrix::from_element(din, din, ZERO), |acc, k| acc + k.adjoint() * k);
        let defect = linalg::max_abs_diff(&sum, &DMatrix::identity(din, din));
        if defect > STATE_TOL {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self {
            kraus,
            input_layout,
            output_layout,
        })
    }

    /// Channel between single factors labeled `in` and `out`.
    pub fn from_kraus(kraus: Vec<DMatrix<C64>>) -> Result<Self> {
        let (dout, din) = kraus.first().map(|k| k.shape()).unwrap_or((0, 0));
        if din == 0 || dout == 0 {
            return Err(Error::InvalidParameter("empty Kraus set".into()));
        }
        Self::new(
            kraus,
            SystemLayout::single("in", din),
            SystemLayout::single("out", dout),
        )
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        Self {
            kraus: vec![DMatrix::identity(d, d)],
            input_layout: layout.clone(),
            output_layout: layout,
        }
    }

    /// Full dephasing in the computational basis.
    pub fn dephasing(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        let kraus = (0..d)
            .map(|i| {
                let mut k = DMatrix::from_element(d, d, ZERO);
                k[(i, i)] = C64::from(1.0);
                k
            })
            .collect();
        Self {
            kraus,
            input_layout: layout.clone(),
            output_layout: layout,
        }
    }

    pub fn unitary(u: DMatrix<C64>, layout: SystemLayout) -> Result<Self> {
        if u.shape() != (layout.total_dim(), layout.total_dim()) {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, layout {} has dimension {}",
                u.nrows(),
                u.ncols(),
                layout,
                layout.total_dim()
            )));
        }
        let defect = linalg::unitarity_defect(&u);
        if defect > STATE_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self {
            kraus: vec![u],
            input_layout: layout.clone(),
            output_layout: layout,
        })
    }

    pub fn kraus(&self) -> &[DMatrix<C64>] {
        &self.kraus
    }

    pub fn input_layout(&self) -> &SystemLayout {
        &self.input_layout
    }

    pub fn output_layout(&self) -> &SystemLayout {
        &self.output_layout
    }

    pub fn in_dim(&self) -> usize {
        self.input_layout.total_dim()
    }

    pub fn out_dim(&self) -> usize {
        self.output_layout.total_dim()
    }

    fn apply_matrix(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        let (d, _) = (self.out_dim(), self.in_dim());
        self.kraus
            .iter()
            .fold(DMatrix::from_element(d, d, ZERO), |acc, k| acc + k * m * k.adjoint())
    }

    /// Applies the channel to a state on its whole input space. The result
    /// carries the channel's output layout.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.layout().dims() != self.input_layout.dims() {
            return Err(Error::DimensionMismatch(format!(
                "state layout {} does not match channel input {}",
                rho.layout(),
                self.input_layout
            )));
        }
        Ok(DensityOperator::from_trusted(
            self.output_layout.clone(),
            self.apply_matrix(rho.matrix()),
        ))
    }

    /// Applies the channel to the `targets` factors of a larger state.
    pub fn apply_on(&self, rho: &DensityOperator, targets: &[&str]) -> Result<DensityOperator> {
        let mut acc: Option<(SystemLayout, DMatrix<C64>)> = None;
        for k in &self.kraus {
            let (layout, m) = rho.sandwich(k, targets)?;
            acc = Some(match acc {
                None => (layout, m),
                Some((l, a)) => (l, a + m),
            });
        }
        let (layout, m) = acc.expect("Kraus set is nonempty");
        Ok(DensityOperator::from_trusted(layout, m))
    }

    pub fn tensor(&self, other: &KrausChannel) -> Result<Self> {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kronecker(b)))
            .collect();
        Ok(Self {
            kraus,
            input_layout: concat_distinct(&self.input_layout, &other.input_layout)?,
            output_layout: concat_distinct(&self.output_layout, &other.output_layout)?,
        })
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &KrausChannel) -> Result<Self> {
        if next.in_dim() != self.out_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.in_dim(),
                self.out_dim(),
                next.in_dim(),
                next.out_dim()
            )));
        }
        let kraus = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Ok(Self {
            kraus,
            input_layout: self.input_layout.clone(),
            output_layout: next.output_layout.clone(),
        })
    }

    /// Convex mixture `p·self + (1-p)·other`.
    pub fn mix(&self, other: &KrausChannel, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
        }
        if self.in_dim() != other.in_dim() || self.out_dim() != other.out_dim() {
            return Err(Error::DimensionMismatch("mixed channels differ in shape".into()));
        }
        let (a, b) = (C64::from(p.sqrt()), C64::from((1.0 - p).sqrt()));
        let kraus = self
            .kraus
            .iter()
            .map(|k| k * a)
            .chain(other.kraus.iter().map(|k| k * b))
            .collect();
        Ok(Self {
            kraus,
            input_layout: self.input_layout.clone(),
            output_layout: self.output_layout.clone(),
        })
    }

    /// Every column of every Kraus operator has at most one nonzero entry.
    pub fn is_incoherent(&self) -> bool {
        self.kraus.iter().all(columns_incoherent)
    }

    /// Every Kraus operator and its adjoint are incoherent.
    pub fn is_strictly_incoherent(&self) -> bool {
        self.kraus
            .iter()
            .all(|k| columns_incoherent(k) && columns_incoherent(&k.adjoint()))
    }

    /// Every computational basis state is mapped to a diagonal state.
    pub fn is_mio(&self) -> bool {
        let d = self.in_dim();
        (0..d).all(|i| {
            let out = self.apply_matrix(&basis_projector(d, i));
            let n = out.nrows();
            (0..n).all(|r| (0..n).all(|c| r == c || out[(r, c)].norm() < MIO_TOL))
        })
    }

    pub fn to_file(&self) -> ChannelFile {
        ChannelFile {
            kraus: self
                .kraus
                .iter()
                .map(|k| {
                    (0..k.nrows())
                        .flat_map(|r| (0..k.ncols()).map(move |c| (r, c)))
                        .map(|(r, c)| [k[(r, c)].re, k[(r, c)].im])
                        .collect()
                })
                .collect(),
            in_dim: self.in_dim(),
            out_dim: self.out_dim(),
        }
    }

    pub fn from_file(file: ChannelFile) -> Result<Self> {
        let kraus = file
            .kraus
            .iter()
            .map(|flat| {
                if flat.len() != file.in_dim * file.out_dim {
                    return Err(Error::Format(format!(
                        "Kraus operator has {} entries, expected {}",
                        flat.len(),
                        file.in_dim * file.out_dim
                    )));
                }
                let vals: Vec<C64> = flat.iter().map(|&[re, im]| C64::new(re, im)).collect();
                Ok(DMatrix::from_row_slice(file.out_dim, file.in_dim, &vals))
            })
            .collect::<Result<Vec<_>>>()?;
        if file.in_dim == 0 || file.out_dim == 0 {
            return Err(Error::Format("channel dimensions must be positive".into()));
        }
        Self::new(
            kraus,
            SystemLayout::single("in", file.in_dim),
            SystemLayout::single("out", file.out_dim),
        )
    }
}

/// On-disk channel format; each matrix is flattened row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub kraus: Vec<Vec<[f64; 2]>>,
    pub in_dim: usize,
    pub out_dim: usize,
}

fn columns_incoherent(k: &DMatrix<C64>) -> bool {
    k.column_iter()
        .all(|col| col.iter().filter(|z| z.norm() > SUPPORT_TOL).count() <= 1)
}

fn basis_projector(d: usize, i: usize) -> DMatrix<C64> {
    let mut m = DMatrix::from_element(d, d, ZERO);
    m[(i, i)] = C64::from(1.0);
    m
}

/// Operator stored column by column, for maps too large to hold densely.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    nrows: usize,
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseOperator {
    pub fn new(nrows: usize, cols: Vec<Vec<(usize, C64)>>) -> Result<Self> {
        if let Some(&(r, _)) = cols.iter().flatten().find(|(r, _)| *r >= nrows) {
            return Err(Error::DimensionMismatch(format!(
                "row index {r} outside {nrows} rows"
            )));
        }
        Ok(Self { nrows, cols })
    }

    /// Operator sending column `j` to `phase_j |target_j⟩`.
    pub fn monomial(nrows: usize, entries: impl IntoIterator<Item = (usize, C64)>) -> Result<Self> {
        Self::new(nrows, entries.into_iter().map(|e| vec![e]).collect())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, C64)] {
        &self.cols[j]
    }

    pub fn is_incoherent(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.iter().filter(|(_, z)| z.norm() > SUPPORT_TOL).count() <= 1)
    }

    /// Columns orthonormal within `tol`, checked through row collisions.
    pub fn is_isometry(&self, tol: f64) -> bool {
        let mut by_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            let norm: f64 = col.iter().map(|(_, z)| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > tol {
                return false;
            }
            for &(r, z) in col {
                by_row[r].push((j, z));
            }
        }
        let mut gram: std::collections::HashMap<(usize, usize), C64> = Default::default();
        for row in &by_row {
            for (a, &(j, zj)) in row.iter().enumerate() {
                for &(k, zk) in &row[a + 1..] {
                    if j != k {
                        let key = (j.min(k), j.max(k));
                        *gram.entry(key).or_insert(ZERO) += zj.conj() * zk;
                    }
                }
            }
        }
        gram.values().all(|z| z.norm() <= tol)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.nrows, self.ncols(), ZERO);
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, z) in col {
                m[(r, j)] += z;
            }
        }
        m
    }
}

/// `a ⊗ b`, renaming labels of `b` that collide with `a` to `label_2`
/// (then `_3`, ...).
fn concat_distinct(a: &SystemLayout, b: &SystemLayout) -> Result<SystemLayout> {
    let mut b = b.clone();
    let labels: Vec<String> = b.labels().map(str::to_owned).collect();
    for l in labels {
        if a.contains(&l) {
            let fresh = (2..)
                .map(|k| format!("{l}_{k}"))
                .find(|c| !a.contains(c) && !b.contains(c))
                .expect("unbounded suffixes");
            b = b.relabel(&l, &fresh)?;
        }
    }
    a.concat(&b)
}

/// The channel `M(σ) = Δ(UσU†)` with `U = (|0⟩⊗I + |1⟩⊗QFT)/√2`, from a
/// `d`-level input to `(B~, B)` with dims `(2, d)`.
pub fn flower_decode_channel(d: usize) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension d = {d}, need d >= 2")));
    }
    flower_decode_channel_with(d, &statezoo::qft(d))
}

pub fn flower_decode_channel_with(d: usize, u1: &DMatrix<C64>) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension d = {d}, need d >= 2")));
    }
    if u1.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!("U1 must be {d}x{d}")));
    }
    let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let id = DMatrix::<C64>::identity(d, d);
    let blocks = [&id, u1];
    // K_k = |k⟩⟨k|U: row k of U kept, every other row zero
    let kraus = (0..2 * d)
        .map(|k| {
            let (b, j) = (k / d, k % d);
            let mut m = DMatrix::from_element(2 * d, d, ZERO);
            for c in 0..d {
                m[(k, c)] = blocks[b][(j, c)] * s;
            }
            m
        })
        .collect();
    KrausChannel::new(
        kraus,
        SystemLayout::single("B", d),
        SystemLayout::new([("B~", 2), ("B", d)])?,
    )
}

/// Result of a minimum-output-entropy search.
#[derive(Clone, Debug)]
pub struct MinEntropySearch {
    pub value: f64,
    pub argmin: DVector<C64>,
    pub starts: usize,
}

const LOG_FLOOR: f64 = 1e-14;
const MAX_ITERS: usize = 300;

/// Output entropies and their gradients for one channel.
enum Objective {
    /// Every Kraus operator has a single nonzero row, so outputs are diagonal:
    /// `ρ_out = Σ_k |⟨w_k|v⟩|² |row_k⟩⟨row_k|`.
    Diagonal {
        bras: Vec<(usize, DVector<C64>)>,
        out_dim: usize,
    },
    General(Vec<DMatrix<C64>>),
}

impl Objective {
    fn new(ch: &KrausChannel) -> Self {
        let mut bras = Vec::new();
        for k in ch.kraus() {
            let rows: Vec<usize> = (0..k.nrows())
                .filter(|&r| k.row(r).iter().any(|z| z.norm() > 0.0))
                .collect();
            match rows.as_slice() {
                [] => {}
                [r] => bras.push((*r, k.row(*r).adjoint())),
                _ => return Objective::General(ch.kraus().to_vec()),
            }
        }
        Objective::Diagonal {
            bras,
            out_dim: ch.out_dim(),
        }
    }

    /// Returns `S(E(vv†))` and, when asked, the Euclidean gradient
    /// `-2 Σ K† log₂ρ K v` with respect to `v̄`.
    fn eval(&self, v: &DVector<C64>, want_grad: bool) -> (f64, Option<DVector<C64>>) {
        match self {
            Objective::Diagonal { bras, out_dim } => {
                let amps: Vec<C64> = bras.iter().map(|(_, w)| w.dotc(v)).collect();
                let mut p = vec![0.0; *out_dim];
                for ((r, _), a) in bras.iter().zip(&amps) {
                    p[*r] += a.norm_sqr();
                }
                let s = linalg::entropy_bits(p.iter().copied());
                let grad = want_grad.then(|| {
                    let mut g = DVector::from_element(v.len(), ZERO);
                    for ((r, w), a) in bras.iter().zip(&amps) {
                        let l = p[*r].max(LOG_FLOOR).log2();
                        g -= w * (*a * C64::from(2.0 * l));
                    }
                    g
                });
                (s, grad)
            }
            Objective::General(kraus) => {
                let kv: Vec<DVector<C64>> = kraus.iter().map(|k| k * v).collect();
                let d = kraus[0].nrows();
                let rho = kv
                    .iter()
                    .fold(DMatrix::from_element(d, d, ZERO), |acc, x| acc + x * x.adjoint());
                let eig = rho.symmetric_eigen();
                let s = linalg::entropy_bits(eig.eigenvalues.iter().copied());
                let grad = want_grad.then(|| {
                    let logs = eig.eigenvalues.map(|x| C64::from(x.max(LOG_FLOOR).log2()));
                    let q = &eig.eigenvectors;
                    let log_rho = q * DMatrix::from_diagonal(&logs) * q.adjoint();
                    let mut g = DVector::from_element(v.len(), ZERO);
                    for (k, x) in kraus.iter().zip(&kv) {
                        g -= k.adjoint() * (&log_rho * x) * C64::from(2.0);
                    }
                    g
                });
                (s, grad)
            }
        }
    }
}

/// Riemannian gradient descent on the unit sphere with Armijo backtracking.
fn descend(obj: &Objective, mut v: DVector<C64>) -> (f64, DVector<C64>) {
    let (mut f, _) = obj.eval(&v, false);
    for _ in 0..MAX_ITERS {
        let (_, g) = obj.eval(&v, true);
        let mut g = g.expect("gradient requested");
        // project onto the tangent space at v
        let radial = v.dotc(&g).re;
        g -= &v * C64::from(radial);
        let gn2 = g.norm_squared();
        if gn2 < 1e-20 {
            break;
        }
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-12 {
            let cand = &v - &g * C64::from(t);
            let cand = &cand / C64::from(cand.norm());
            let (fc, _) = obj.eval(&cand, false);
            if fc <= f - 1e-4 * t * gn2 {
                let gain = f - fc;
                v = cand;
                f = fc;
                improved = gain > 1e-14;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (f, v)
}

/// Smallest output entropy found over pure inputs, from the computational
/// basis plus `restarts` seeded Haar-random starting points. An upper bound
/// on the true minimum.
pub fn min_output_entropy(ch: &KrausChannel, restarts: usize, seed: u64) -> Result<f64> {
    Ok(min_output_entropy_search(ch, restarts, seed)?.value)
}

pub fn min_output_entropy_search(
    ch: &KrausChannel,
    restarts: usize,
    seed: u64,
) -> Result<MinEntropySearch> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let obj = Objective::new(ch);
    let d = ch.in_dim();
    let mut rng = rng_from_seed(seed);
    let layout = SystemLayout::single("in", d);
    let basis = (0..d).map(|i| {
        let mut v = DVector::from_element(d, ZERO);
        v[i] = C64::from(1.0);
        v
    });
    let random: Vec<DVector<C64>> = (0..restarts)
        .map(|_| statezoo::random_pure_with(layout.clone(), &mut rng).amplitudes().clone())
        .collect();
    let mut best: Option<(f64, DVector<C64>)> = None;
    let mut starts = 0;
    for v0 in basis.chain(random) {
        starts += 1;
        let (f, v) = descend(&obj, v0);
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, v));
        }
    }
    let (value, argmin) = best.expect("at least one start");
    Ok(MinEntropySearch {
        value,
        argmin,
        starts,
    })
}

/// Coherence classes of the random channel generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelClass {
    Sio,
    Io,
    Mio,
    General,
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(rand_distr::StandardNormal);
    let im: f64 = rng.sample(rand_distr::StandardNormal);
    C64::new(re, im)
}

/// Kraus operators `P_k D_k` with permutations `P_k` and diagonals `D_k`
/// normalized so that `Σ_k |D_k|² = I`.
pub fn random_sio<R: Rng + ?Sized>(d: usize, nkraus: usize, rng: &mut R) -> KrausChannel {
    let mut diags: Vec<Vec<C64>> = (0..nkraus)
        .map(|_| (0..d).map(|_| random_complex(rng)).collect())
        .collect();
    for i in 0..d {
        let norm: f64 = diags.iter().map(|dk| dk[i].norm_sqr()).sum::<f64>().sqrt();
        for dk in diags.iter_mut() {
            dk[i] /= norm;
        }
    }
    let kraus = diags
        .into_iter()
        .map(|dk| {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(rng);
            let mut m = DMatrix::from_element(d, d, ZERO);
            for (i, z) in dk.into_iter().enumerate() {
                m[(perm[i], i)] = z;
            }
            m
        })
        .collect();
    KrausChannel::from_kraus(kraus).expect("normalized by construction")
}

fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    let u = random_unitary(rows, rng);
    u.columns(0, cols).into_owned()
}

/// Measure-and-prepare `|r_j⟩⟨w_j|` with `w_j†` the rows of a random
/// isometry, optionally composed or mixed with a random SIO.
pub fn random_io<R: Rng + ?Sized>(d: usize, nkraus: usize, rng: &mut R) -> KrausChannel {
    let m = nkraus.max(d);
    let v = random_isometry(m, d, rng);
    let kraus = (0..m)
        .map(|j| {
            let r = rng.random_range(0..d);
            let mut k = DMatrix::from_element(d, d, ZERO);
            k.row_mut(r).copy_from(&v.row(j));
            k
        })
        .collect();
    let base = KrausChannel::from_kraus(kraus).expect("isometry rows are complete");
    match rng.random_range(0..3) {
        0 => base,
        1 => base
            .then(&random_sio(d, 2, rng))
            .expect("shapes agree"),
        _ => {
            let p = rng.random::<f64>();
            base.mix(&random_sio(d, 2, rng), p).expect("shapes agree")
        }
    }
}

/// An IO channel re-expressed through a random unitary mixing of its Kraus
/// operators: the same map, generally with coherent Kraus operators.
pub fn random_mio<R: Rng + ?Sized>(d: usize, nkraus: usize, rng: &mut R) -> KrausChannel {
    let io = random_io(d, nkraus, rng);
    let ks = io.kraus();
    let w = random_unitary(ks.len(), rng);
    let kraus = (0..ks.len())
        .map(|a| {
            ks.iter()
                .enumerate()
                .fold(DMatrix::from_element(d, d, ZERO), |acc, (b, k)| acc + k * w[(a, b)])
        })
        .collect();
    KrausChannel::from_kraus(kraus).expect("unitary mixing keeps completeness")
}

/// Random CPTP map from the blocks of a random Stinespring isometry.
pub fn random_general<R: Rng + ?Sized>(d: usize, nkraus: usize, rng: &mut R) -> KrausChannel {
    let v = random_isometry(d * nkraus, d, rng);
    let kraus = (0..nkraus).map(|k| v.rows(k * d, d).into_owned()).collect();
    KrausChannel::from_kraus(kraus).expect("isometry blocks are complete")
}

pub fn random_channel<R: Rng + ?Sized>(
    class: ChannelClass,
    d: usize,
    nkraus: usize,
    rng: &mut R,
) -> KrausChannel {
    match class {
        ChannelClass::Sio => random_sio(d, nkraus, rng),
        ChannelClass::Io => random_io(d, nkraus, rng),
        ChannelClass::Mio => random_mio(d, nkraus, rng),
        ChannelClass::General => random_general(d, nkraus, rng),
    }
}
