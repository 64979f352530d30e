//! Named states and seeded random sampling.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64, ZERO};
use crate::qstate::{DensityOperator, PureState, SystemLayout, STATE_TOL};

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension d = {d}, need d >= 2")));
    }
    Ok(())
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Φ_d = Σ_i |ii⟩/√d` on factors `A`, `B`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    check_d(d)?;
    let layout = SystemLayout::new([("A", d), ("B", d)])?;
    let mut v = DVector::from_element(d * d, ZERO);
    let a = C64::from(1.0 / (d as f64).sqrt());
    for i in 0..d {
        v[i * d + i] = a;
    }
    PureState::new(layout, v)
}

/// `Ψ_d = Σ_i |i⟩/√d` on factor `A`.
pub fn max_coherent(d: usize) -> Result<PureState> {
    max_coherent_on("A", d)
}

pub fn max_coherent_on(label: &str, d: usize) -> Result<PureState> {
    check_d(d)?;
    let a = C64::from(1.0 / (d as f64).sqrt());
    PureState::new(SystemLayout::single(label, d), DVector::from_element(d, a))
}

/// Fourier matrix with entries `ω^{jk}/√d`, `ω = e^{2πi/d}`.
pub fn qft(d: usize) -> DMatrix<C64> {
    let norm = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |j, k| {
        // reduce jk mod d first to keep the phase argument small
        let t = 2.0 * std::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
        C64::from_polar(norm, t)
    })
}

/// The flower state on `R`, `A`, `B` with dims `(d, 2, d)`, `U₁ = qft(d)`.
pub fn flower(d: usize) -> Result<PureState> {
    check_d(d)?;
    flower_with(d, &qft(d))
}

/// Flower state `Σ_{i,j} (U_iᵀ|j⟩)^R |i⟩^A |j⟩^B / √(2d)` with `U₀ = I` and
/// `U₁ = u1`.
pub fn flower_with(d: usize, u1: &DMatrix<C64>) -> Result<PureState> {
    check_d(d)?;
    if u1.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "override unitary is {}x{}, need {d}x{d}",
            u1.nrows(),
            u1.ncols()
        )));
    }
    let defect = linalg::unitarity_defect(u1);
    if defect > STATE_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let layout = SystemLayout::new([("R", d), ("A", 2), ("B", d)])?;
    let id = DMatrix::<C64>::identity(d, d);
    let us = [&id, u1];
    let norm = C64::from(1.0 / ((2 * d) as f64).sqrt());
    let mut v = DVector::from_element(2 * d * d, ZERO);
    for r in 0..d {
        for (i, u) in us.iter().enumerate() {
            for j in 0..d {
                v[(r * 2 + i) * d + j] = u[(j, r)] * norm;
            }
        }
    }
    PureState::new(layout, v)
}

/// The Appendix D family `p_ij`, `|ψ_ij⟩` with `{ψ_ij}_j` orthonormal per `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableFamily {
    p: Vec<Vec<f64>>,
    states: Vec<Vec<DVector<C64>>>,
    d_a: usize,
}

/// JSON form: `p[i][j]` and `states[i][j]` as lists of `[re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparableFamilyFile {
    pub p: Vec<Vec<f64>>,
    pub states: Vec<Vec<Vec<[f64; 2]>>>,
}

impl SeparableFamily {
    pub fn new(p: Vec<Vec<f64>>, states: Vec<Vec<DVector<C64>>>) -> Result<Self> {
        let ni = p.len();
        if ni == 0 || states.len() != ni {
            return Err(Error::DimensionMismatch(format!(
                "{} probability rows, {} state rows",
                ni,
                states.len()
            )));
        }
        let nj = p[0].len();
        if nj == 0 || p.iter().any(|r| r.len() != nj) || states.iter().any(|r| r.len() != nj) {
            return Err(Error::DimensionMismatch(
                "p and states must be rectangular with matching shape".into(),
            ));
        }
        let flat: Vec<f64> = p.iter().flatten().copied().collect();
        if flat.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidDistribution("negative or non-finite p_ij".into()));
        }
        let total: f64 = flat.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDistribution(format!("p_ij sum to {total}")));
        }
        let d_a = states[0][0].len();
        if d_a == 0 || states.iter().flatten().any(|s| s.len() != d_a) {
            return Err(Error::DimensionMismatch(
                "all family states must share one dimension".into(),
            ));
        }
        for (i, row) in states.iter().enumerate() {
            for j in 0..nj {
                for k in j..nj {
                    let ip = row[j].dotc(&row[k]);
                    let expect = if j == k { 1.0 } else { 0.0 };
                    if (ip - C64::from(expect)).norm() > STATE_TOL {
                        return Err(Error::NotOrthonormal {
                            i,
                            j,
                            k,
                            overlap: ip.norm(),
                        });
                    }
                }
            }
        }
        Ok(Self { p, states, d_a })
    }

    pub fn from_file(file: SeparableFamilyFile) -> Result<Self> {
        let states = file
            .states
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| DVector::from_iterator(v.len(), v.into_iter().map(|[re, im]| C64::new(re, im))))
                    .collect()
            })
            .collect();
        Self::new(file.p, states)
    }

    pub fn to_file(&self) -> SeparableFamilyFile {
        SeparableFamilyFile {
            p: self.p.clone(),
            states: self
                .states
                .iter()
                .map(|row| row.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        }
    }

    pub fn num_i(&self) -> usize {
        self.p.len()
    }

    pub fn num_j(&self) -> usize {
        self.p[0].len()
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    /// `(d_R, d_A, d_B)` with `d_R = I·J` and `d_B = I`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.num_i() * self.num_j(), self.d_a, self.num_i())
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i][j]
    }

    pub fn state(&self, i: usize, j: usize) -> &DVector<C64> {
        &self.states[i][j]
    }

    /// `ψ_ij` as a pure state on a single factor named `label`.
    pub fn pure_state(&self, i: usize, j: usize, label: &str) -> PureState {
        PureState::new(SystemLayout::single(label, self.d_a), self.states[i][j].clone())
            .expect("family states are normalized at construction")
    }
}

/// `Σ_ij p_ij |ij⟩⟨ij|^R ⊗ ψ_ij^A ⊗ |i⟩⟨i|^B`.
pub fn separable_family_state(fam: &SeparableFamily) -> Result<DensityOperator> {
    let (dr, da, db) = fam.dims();
    let layout = SystemLayout::new([("R", dr), ("A", da), ("B", db)])?;
    let n = layout.total_dim();
    let mut m = DMatrix::from_element(n, n, ZERO);
    for i in 0..fam.num_i() {
        for j in 0..fam.num_j() {
            let p = fam.p(i, j);
            if p == 0.0 {
                continue;
            }
            let r = i * fam.num_j() + j;
            let psi = fam.state(i, j);
            for a in 0..da {
                for a2 in 0..da {
                    let row = (r * da + a) * db + i;
                    let col = (r * da + a2) * db + i;
                    m[(row, col)] += psi[a] * psi[a2].conj() * p;
                }
            }
        }
    }
    DensityOperator::new(layout, m)
}

fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> DVector<C64> {
    DVector::from_iterator(
        len,
        (0..len).map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        }),
    )
}

/// Haar-random pure state from a normalized complex Gaussian vector.
pub fn random_pure_with<R: Rng + ?Sized>(layout: SystemLayout, rng: &mut R) -> PureState {
    let v = gaussian_vector(layout.total_dim(), rng);
    PureState::normalized(layout, v).expect("a Gaussian vector is nonzero almost surely")
}

pub fn random_pure(layout: SystemLayout, seed: u64) -> PureState {
    random_pure_with(layout, &mut rng_from_seed(seed))
}

/// Reduction of a Haar-random pure state on `layout ⊗ C^rank`.
pub fn random_density_with<R: Rng + ?Sized>(
    layout: SystemLayout,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let d = layout.total_dim();
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} outside 1..={d}"
        )));
    }
    // Columns of g are the environment branches of the purification.
    let g = DMatrix::from_iterator(d, rank, gaussian_vector(d * rank, rng).iter().copied());
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    Ok(DensityOperator::from_trusted(layout, m / C64::from(tr)))
}

pub fn random_density(layout: SystemLayout, rank: usize, seed: u64) -> Result<DensityOperator> {
    random_density_with(layout, rank, &mut rng_from_seed(seed))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal divided out.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_iterator(d, d, gaussian_vector(d * d, rng).iter().copied());
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let z = r[(k, k)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::from(1.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}
