//! Dense pure and mixed states over labeled tensor factors.
//!
//! Every factor carries a label and a dimension; operations address factors
//! by label only. Basis indices are row-major over the factor list, so the
//! first factor is the most significant digit and `tensor` agrees with the
//! Kronecker product of the underlying arrays.
//!
//! The incoherent basis of each factor is its computational basis.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};

/// Tolerance for hermiticity, normalization and positivity at construction.
pub const STATE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of labeled tensor factors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SystemLayout {
    factors: Vec<Factor>,
}

impl SystemLayout {
    pub fn new<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out: Vec<Factor> = Vec::new();
        for (label, dim) in factors {
            let label = label.into();
            if dim == 0 {
                return Err(Error::InvalidParameter(format!(
                    "factor `{label}` has dimension 0"
                )));
            }
            if out.iter().any(|f| f.label == label) {
                return Err(Error::DuplicateLabel(label));
            }
            out.push(Factor { label, dim });
        }
        Ok(Self { factors: out })
    }

    /// Single-factor layout. Panics on a zero dimension.
    pub fn single(label: &str, dim: usize) -> Self {
        assert!(dim > 0, "factor `{label}` has dimension 0");
        Self {
            factors: vec![Factor {
                label: label.to_owned(),
                dim,
            }],
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].dim)
    }

    /// Positions of `labels`, rejecting unknown and repeated labels.
    pub fn resolve(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            let p = self.position(l)?;
            if out.contains(&p) {
                return Err(Error::DuplicateLabel(l.to_owned()));
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn concat(&self, other: &SystemLayout) -> Result<Self> {
        Self::new(
            self.factors
                .iter()
                .chain(&other.factors)
                .map(|f| (f.label.clone(), f.dim)),
        )
    }

    /// Renames one factor. Pure metadata, no data movement.
    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        let p = self.position(from)?;
        if from != to && self.contains(to) {
            return Err(Error::DuplicateLabel(to.to_owned()));
        }
        let mut out = self.clone();
        out.factors[p].label = to.to_owned();
        Ok(out)
    }

    fn without_positions(&self, drop: &[usize]) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, f)| f.clone())
                .collect(),
        }
    }

    fn with_dim(&self, pos: usize, dim: usize) -> Self {
        let mut out = self.clone();
        out.factors[pos].dim = dim;
        out
    }
}

impl fmt::Display for SystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("{}:{}", x.label, x.dim))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Index bookkeeping for splitting a layout into target and remaining factors.
pub(crate) struct Split {
    pub target_dim: usize,
    pub rest_dim: usize,
    /// Full index of `(rest, target)` stored at `rest * target_dim + target`.
    pub full: Vec<usize>,
    /// Target index of every full index.
    pub target_of: Vec<usize>,
}

impl Split {
    pub fn new(layout: &SystemLayout, targets: &[usize]) -> Self {
        let dims = layout.dims();
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
        let target_dim: usize = targets.iter().map(|&i| dims[i]).product();
        let rest_dim: usize = rest.iter().map(|&i| dims[i]).product();
        // Stride of each factor inside the target / rest sub-index.
        let mut t_stride = vec![0usize; dims.len()];
        let mut acc = 1;
        for &i in targets.iter().rev() {
            t_stride[i] = acc;
            acc *= dims[i];
        }
        let mut r_stride = vec![0usize; dims.len()];
        acc = 1;
        for &i in rest.iter().rev() {
            r_stride[i] = acc;
            acc *= dims[i];
        }
        let total = target_dim * rest_dim;
        let mut full = vec![0usize; total];
        let mut target_of = vec![0usize; total];
        let mut digits = vec![0usize; dims.len()];
        let (mut t, mut r) = (0usize, 0usize);
        for idx in 0..total {
            full[r * target_dim + t] = idx;
            target_of[idx] = t;
            // odometer increment, last factor fastest
            for k in (0..dims.len()).rev() {
                digits[k] += 1;
                t += t_stride[k];
                r += r_stride[k];
                if digits[k] < dims[k] {
                    break;
                }
                t -= t_stride[k] * dims[k];
                r -= r_stride[k] * dims[k];
                digits[k] = 0;
            }
        }
        Self {
            target_dim,
            rest_dim,
            full,
            target_of,
        }
    }
}

/// Applies `op` to the `targets` factors of every column of `data`, whose rows
/// are indexed by `layout`.
///
/// `op` must be square on the product of the target dimensions, or act on a
/// single target, in which case that factor's dimension becomes `op.nrows()`.
/// No unitarity or normalization is required.
pub fn apply_local(
    layout: &SystemLayout,
    data: &DMatrix<C64>,
    op: &DMatrix<C64>,
    targets: &[&str],
) -> Result<(SystemLayout, DMatrix<C64>)> {
    if data.nrows() != layout.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "data has {} rows, layout {} has dimension {}",
            data.nrows(),
            layout,
            layout.total_dim()
        )));
    }
    let pos = layout.resolve(targets)?;
    let split = Split::new(layout, &pos);
    if op.ncols() != split.target_dim {
        return Err(Error::DimensionMismatch(format!(
            "operator has {} columns, targets {:?} have dimension {}",
            op.ncols(),
            targets,
            split.target_dim
        )));
    }
    let new_layout = if op.nrows() == split.target_dim {
        layout.clone()
    } else if pos.len() == 1 {
        layout.with_dim(pos[0], op.nrows())
    } else {
        return Err(Error::DimensionMismatch(format!(
            "a dimension-changing operator ({}x{}) must act on a single factor",
            op.nrows(),
            op.ncols()
        )));
    };
    let new_split = Split::new(&new_layout, &pos);
    let nonzero: Vec<(usize, usize, C64)> = (0..op.ncols())
        .flat_map(|c| (0..op.nrows()).map(move |r| (r, c)))
        .filter_map(|(r, c)| {
            let v = op[(r, c)];
            (v != ZERO).then_some((r, c, v))
        })
        .collect();
    let (td, ntd) = (split.target_dim, new_split.target_dim);
    let mut out = DMatrix::from_element(new_layout.total_dim(), data.ncols(), ZERO);
    for col in 0..data.ncols() {
        let src = data.column(col);
        let mut dst = out.column_mut(col);
        for rest in 0..split.rest_dim {
            let base = rest * td;
            let nbase = rest * ntd;
            for &(r, c, v) in &nonzero {
                let x = src[split.full[base + c]];
                if x != ZERO {
                    dst[new_split.full[nbase + r]] += v * x;
                }
            }
        }
    }
    Ok((new_layout, out))
}

fn check_unitary(u: &DMatrix<C64>) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "unitary must be square, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let defect = linalg::unitarity_defect(u);
    if defect > STATE_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(())
}

/// Index map taking a factor reordering to the old flat index.
fn permutation_map(layout: &SystemLayout, order: &[&str]) -> Result<(SystemLayout, Vec<usize>)> {
    if order.len() != layout.len() {
        return Err(Error::DimensionMismatch(format!(
            "reordering names {} factors, layout has {}",
            order.len(),
            layout.len()
        )));
    }
    let pos = layout.resolve(order)?;
    let new_layout = SystemLayout {
        factors: pos.iter().map(|&p| layout.factors[p].clone()).collect(),
    };
    let old_dims = layout.dims();
    let new_dims = new_layout.dims();
    let mut old_of_new = Vec::with_capacity(layout.total_dim());
    let mut old_digits = vec![0usize; old_dims.len()];
    for idx in 0..layout.total_dim() {
        let nd = linalg::mixed_radix_digits(idx, &new_dims);
        for (k, &p) in pos.iter().enumerate() {
            old_digits[p] = nd[k];
        }
        old_of_new.push(linalg::mixed_radix_index(&old_digits, &old_dims));
    }
    Ok((new_layout, old_of_new))
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    layout: SystemLayout,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn new(layout: SystemLayout, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for layout {} of dimension {}",
                amplitudes.len(),
                layout,
                layout.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "state vector has norm {norm}"
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(layout: SystemLayout, amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(layout, amplitudes / C64::from(norm))
    }

    pub fn basis(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        let dims = layout.dims();
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(d, n)| d >= n) {
            return Err(Error::DimensionMismatch(format!(
                "basis digits {digits:?} do not fit layout {layout}"
            )));
        }
        let mut amps = DVector::from_element(layout.total_dim(), ZERO);
        amps[linalg::mixed_radix_index(digits, &dims)] = C64::from(1.0);
        Ok(Self {
            layout,
            amplitudes: amps,
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        })
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            layout: self.layout.clone(),
            matrix: linalg::outer(&self.amplitudes),
        }
    }

    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch(format!(
                "layouts differ: {} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn apply_unitary(&self, u: &DMatrix<C64>, targets: &[&str]) -> Result<Self> {
        check_unitary(u)?;
        let data = DMatrix::from_column_slice(self.dim(), 1, self.amplitudes.as_slice());
        let (layout, out) = apply_local(&self.layout, &data, u, targets)?;
        Ok(Self {
            layout,
            amplitudes: DVector::from_column_slice(out.as_slice()),
        })
    }

    /// Applies an arbitrary local operator, returning the unnormalized result
    /// and its layout.
    pub fn apply_operator(
        &self,
        op: &DMatrix<C64>,
        targets: &[&str],
    ) -> Result<(SystemLayout, DVector<C64>)> {
        let data = DMatrix::from_column_slice(self.dim(), 1, self.amplitudes.as_slice());
        let (layout, out) = apply_local(&self.layout, &data, op, targets)?;
        Ok((layout, DVector::from_column_slice(out.as_slice())))
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        Ok(Self {
            layout: self.layout.relabel(from, to)?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    /// Reorders the factors to `order` (a permutation of the labels).
    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        let (layout, old_of_new) = permutation_map(&self.layout, order)?;
        let amps = DVector::from_iterator(
            old_of_new.len(),
            old_of_new.iter().map(|&o| self.amplitudes[o]),
        );
        Ok(Self {
            layout,
            amplitudes: amps,
        })
    }

    pub fn reduced(&self, drop: &[&str]) -> Result<DensityOperator> {
        self.to_density().partial_trace(drop)
    }
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    layout: SystemLayout,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(layout: SystemLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout {} has dimension {d}",
                matrix.nrows(),
                matrix.ncols(),
                layout
            )));
        }
        let herm = linalg::hermiticity_defect(&matrix);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {herm:.3e})"
            )));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min_ev = linalg::hermitian_eigenvalues(&matrix)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_ev < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min_ev:.3e})"
            )));
        }
        Ok(Self { layout, matrix })
    }

    /// Skips validation; for results of maps known to preserve validity.
    pub(crate) fn from_trusted(layout: SystemLayout, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.total_dim());
        Self { layout, matrix }
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        let matrix = DMatrix::identity(d, d) / C64::from(d as f64);
        Self { layout, matrix }
    }

    /// Diagonal density operator with the given probabilities.
    pub fn diagonal(layout: SystemLayout, probs: &[f64]) -> Result<Self> {
        if probs.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for dimension {}",
                probs.len(),
                layout.total_dim()
            )));
        }
        let diag = DVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::from(p)));
        Self::new(layout, DMatrix::from_diagonal(&diag))
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues, ascending, with values in `[-STATE_TOL, 0)` clamped to 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(|x| if (-STATE_TOL..0.0).contains(&x) { 0.0 } else { x })
            .collect()
    }

    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Traces out the factors named in `drop`.
    pub fn partial_trace(&self, drop: &[&str]) -> Result<Self> {
        let pos = self.layout.resolve(drop)?;
        let split = Split::new(&self.layout, &pos);
        let (td, rd) = (split.target_dim, split.rest_dim);
        let mut out = DMatrix::from_element(rd, rd, ZERO);
        for r1 in 0..rd {
            for r2 in 0..rd {
                let mut acc = ZERO;
                for t in 0..td {
                    acc += self.matrix[(split.full[r1 * td + t], split.full[r2 * td + t])];
                }
                out[(r1, r2)] = acc;
            }
        }
        Ok(Self {
            layout: self.layout.without_positions(&pos),
            matrix: out,
        })
    }

    /// Full decoherence of the listed factors in their computational basis.
    pub fn dephase(&self, subsystems: &[&str]) -> Result<Self> {
        let pos = self.layout.resolve(subsystems)?;
        let split = Split::new(&self.layout, &pos);
        let mut m = self.matrix.clone();
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                if split.target_of[i] != split.target_of[j] {
                    m[(i, j)] = ZERO;
                }
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            matrix: m,
        })
    }

    pub fn apply_unitary(&self, u: &DMatrix<C64>, targets: &[&str]) -> Result<Self> {
        check_unitary(u)?;
        let (layout, matrix) = self.sandwich(u, targets)?;
        Ok(Self { layout, matrix })
    }

    /// `K ρ K†` with `K` acting on `targets`; the result is not renormalized.
    pub fn sandwich(
        &self,
        k: &DMatrix<C64>,
        targets: &[&str],
    ) -> Result<(SystemLayout, DMatrix<C64>)> {
        let (layout, left) = apply_local(&self.layout, &self.matrix, k, targets)?;
        // (Kρ)† = ρK†, whose rows follow the input layout again
        let (_, both) = apply_local(&self.layout, &left.adjoint(), k, targets)?;
        Ok((layout, both))
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        Ok(Self {
            layout: self.layout.relabel(from, to)?,
            matrix: self.matrix.clone(),
        })
    }

    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        let (layout, old_of_new) = permutation_map(&self.layout, order)?;
        let n = old_of_new.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| self.matrix[(old_of_new[i], old_of_new[j])]);
        Ok(Self { layout, matrix })
    }
}

fn same_layout(a: &SystemLayout, b: &SystemLayout) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("layouts differ: {a} vs {b}")));
    }
    Ok(())
}

/// Trace norm `‖ρ − σ‖₁`, in `[0, 2]`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_layout(&rho.layout, &sigma.layout)?;
    let diff = &rho.matrix - &sigma.matrix;
    Ok(linalg::hermitian_eigenvalues(&diff)
        .iter()
        .map(|x| x.abs())
        .sum())
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn overlap(psi: &PureState, rho: &DensityOperator) -> Result<f64> {
    same_layout(&psi.layout, &rho.layout)?;
    let v = &psi.amplitudes;
    Ok(v.dotc(&(&rho.matrix * v)).re)
}

/// Either kind of state, as read from or written to a state file.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl State {
    pub fn layout(&self) -> &SystemLayout {
        match self {
            State::Pure(p) => p.layout(),
            State::Mixed(m) => m.layout(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn to_file(&self) -> StateFile {
        let factors = self.layout().factors().to_vec();
        match self {
            State::Pure(p) => StateFile {
                factors,
                kind: StateKind::Pure,
                data: p.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
            },
            State::Mixed(m) => {
                let n = m.dim();
                let data = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| [m.matrix[(r, c)].re, m.matrix[(r, c)].im])
                    .collect();
                StateFile {
                    factors,
                    kind: StateKind::Mixed,
                    data,
                }
            }
        }
    }

    pub fn from_file(file: StateFile) -> Result<Self> {
        let layout = SystemLayout::new(file.factors.into_iter().map(|f| (f.label, f.dim)))?;
        let d = layout.total_dim();
        let values: Vec<C64> = file.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        match file.kind {
            StateKind::Pure => Ok(State::Pure(PureState::new(
                layout,
                DVector::from_vec(values),
            )?)),
            StateKind::Mixed => {
                if values.len() != d * d {
                    return Err(Error::Format(format!(
                        "mixed state of dimension {d} needs {} entries, found {}",
                        d * d,
                        values.len()
                    )));
                }
                Ok(State::Mixed(DensityOperator::new(
                    layout,
                    DMatrix::from_row_slice(d, d, &values),
                )?))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// On-disk state format. Mixed states are flattened row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub factors: Vec<Factor>,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}
