//! Entropies and coherence functionals, all in bits.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{DensityOperator, STATE_TOL};

/// Entries this small count as zero in distributions.
pub const PROB_TOL: f64 = 1e-12;

/// `S(ρ) = -Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let ev = rho.eigenvalues();
    if let Some(&min) = ev.first() {
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    Ok(linalg::entropy_bits(ev))
}

fn check_probabilities(p: &[f64]) -> Result<()> {
    if let Some((i, &v)) = p.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "entry {i} is {v}"
        )));
    }
    Ok(())
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_probabilities(p)?;
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidDistribution(format!(
            "probabilities sum to {total}"
        )));
    }
    Ok(linalg::entropy_bits(p.iter().copied()))
}

/// `h(x) = -x log₂ x - (1-x) log₂ (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(linalg::entropy_bits([x, 1.0 - x]))
}

/// `C_r(ρ) = S(Δρ) - S(ρ)` with `Δ` dephasing every factor.
pub fn rel_entropy_coherence(rho: &DensityOperator) -> Result<f64> {
    let dephased = linalg::entropy_bits(rho.diagonal_probs());
    Ok((dephased - von_neumann_entropy(rho)?).max(0.0))
}

/// `C_r^{X|Y}(ρ) = S(Δ^Y ρ) - S(ρ)`, with `Y` the listed factors.
pub fn qi_relative_entropy(rho: &DensityOperator, incoherent_side: &[&str]) -> Result<f64> {
    let dephased = rho.dephase(incoherent_side)?;
    Ok((von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?).max(0.0))
}

/// Joint distribution `p(x, y)` stored row-major (`x` major).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    x_size: usize,
    y_size: usize,
    p: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    x: usize,
    y: usize,
    p: f64,
}

impl JointDistribution {
    pub fn new(x_size: usize, y_size: usize, p: Vec<f64>) -> Result<Self> {
        if x_size == 0 || y_size == 0 || p.len() != x_size * y_size {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for alphabets {x_size} x {y_size}",
                p.len()
            )));
        }
        check_probabilities(&p)?;
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { x_size, y_size, p })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(x_size: usize, y_size: usize, w: Vec<f64>) -> Result<Self> {
        check_probabilities(&w)?;
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let p = w.into_iter().map(|v| v / total).collect();
        Self::new(x_size, y_size, p)
    }

    /// Doubly symmetric binary source: uniform `X`, `Y = X` flipped with
    /// probability `crossover`.
    pub fn dsbs(crossover: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&crossover) {
            return Err(Error::InvalidParameter(format!(
                "crossover {crossover} outside [0, 1]"
            )));
        }
        let (s, f) = ((1.0 - crossover) / 2.0, crossover / 2.0);
        Self::new(2, 2, vec![s, f, f, s])
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.y_size + y]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.x_size)
            .map(|x| (0..self.y_size).map(|y| self.get(x, y)).sum())
            .collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.y_size)
            .map(|y| (0..self.x_size).map(|x| self.get(x, y)).sum())
            .collect()
    }

    pub fn joint_entropy(&self) -> f64 {
        linalg::entropy_bits(self.p.iter().copied())
    }

    /// Reads the `x,y,p` CSV form. Alphabet sizes default to one past the
    /// largest index seen.
    pub fn read_csv<R: Read>(reader: R, sizes: Option<(usize, usize)>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "y", "p"] {
            return Err(Error::Format(format!(
                "expected header x,y,p, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let rows: Vec<CsvRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
        let (xs, ys) = sizes.unwrap_or_else(|| {
            (
                rows.iter().map(|r| r.x + 1).max().unwrap_or(0),
                rows.iter().map(|r| r.y + 1).max().unwrap_or(0),
            )
        });
        let mut p = vec![0.0; xs * ys];
        for r in rows {
            if r.x >= xs || r.y >= ys {
                return Err(Error::InvalidDistribution(format!(
                    "entry ({}, {}) outside alphabets {xs} x {ys}",
                    r.x, r.y
                )));
            }
            p[r.x * ys + r.y] += r.p;
        }
        Self::new(xs, ys, p)
    }

    /// Writes one `x,y,p` row per nonzero entry.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                let p = self.get(x, y);
                if p > 0.0 {
                    w.serialize(CsvRow { x, y, p })?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// `H(X|Y) = H(XY) - H(Y)`.
pub fn conditional_shannon(p: &JointDistribution) -> f64 {
    (p.joint_entropy() - linalg::entropy_bits(p.marginal_y())).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::qstate::{PureState, SystemLayout};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn plus() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(
            SystemLayout::single("A", 2),
            DVector::from_vec(vec![C64::from(s), C64::from(s)]),
        )
        .unwrap()
        .to_density()
    }

    fn phi(d: usize) -> PureState {
        let layout = SystemLayout::new([("X", d), ("Y", d)]).unwrap();
        let mut v = DVector::from_element(d * d, C64::from(0.0));
        for i in 0..d {
            v[i * d + i] = C64::from(1.0 / (d as f64).sqrt());
        }
        PureState::new(layout, v).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(von_neumann_entropy(&plus()).unwrap(), 0.0, epsilon = 1e-12);
        let mixed = DensityOperator::maximally_mixed(SystemLayout::single("A", 2));
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 1.0, epsilon = 1e-12);
        for d in [2, 3, 5] {
            let red = phi(d).reduced(&["X"]).unwrap();
            assert_abs_diff_eq!(
                von_neumann_entropy(&red).unwrap(),
                (d as f64).log2(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn shannon_examples() {
        assert_abs_diff_eq!(shannon_entropy(&[0.25; 4]).unwrap(), 2.0, epsilon = 1e-15);
        assert!(shannon_entropy(&[1.2, -0.2]).is_err());
        let same = JointDistribution::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(conditional_shannon(&same), 0.0);
        let indep = JointDistribution::new(2, 2, vec![0.25; 4]).unwrap();
        assert_abs_diff_eq!(conditional_shannon(&indep), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0);
        // -0.11 log2 0.11 - 0.89 log2 0.89
        let oracle = 0.11 * (1.0f64 / 0.11).ln() / 2f64.ln() + 0.89 * (1.0f64 / 0.89).ln() / 2f64.ln();
        assert_abs_diff_eq!(binary_entropy(0.11).unwrap(), oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(binary_entropy(0.11).unwrap(), 0.49992, epsilon = 5e-6);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityOperator::diagonal(SystemLayout::single("A", 3), &[0.2, 0.3, 0.5]).unwrap();
        assert_abs_diff_eq!(rel_entropy_coherence(&diag).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rel_entropy_coherence(&plus()).unwrap(), 1.0, epsilon = 1e-12);
        let d = 5;
        let amp = C64::from(1.0 / (d as f64).sqrt());
        let psi = PureState::new(SystemLayout::single("A", d), DVector::from_element(d, amp)).unwrap();
        assert_abs_diff_eq!(
            rel_entropy_coherence(&psi.to_density()).unwrap(),
            (d as f64).log2(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn qi_relative_entropy_examples() {
        assert_abs_diff_eq!(qi_relative_entropy(&plus(), &["A"]).unwrap(), 1.0, epsilon = 1e-12);
        let rho = phi(2).to_density();
        assert_abs_diff_eq!(qi_relative_entropy(&rho, &["Y"]).unwrap(), 1.0, epsilon = 1e-12);
        // QI state: |+><+| ⊗ |1><1|
        let qi = plus()
            .tensor(&DensityOperator::diagonal(SystemLayout::single("B", 2), &[0.3, 0.7]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(qi_relative_entropy(&qi, &["B"]).unwrap(), 0.0, epsilon = 1e-12);
        assert!(qi_relative_entropy(&qi, &["Z"]).is_err());
    }

    #[test]
    fn joint_distribution_validation() {
        assert!(JointDistribution::new(2, 2, vec![0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(JointDistribution::new(2, 1, vec![0.5]).is_err());
        let p = JointDistribution::dsbs(0.11).unwrap();
        assert_abs_diff_eq!(conditional_shannon(&p), binary_entropy(0.11).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let p = JointDistribution::new(2, 3, vec![0.1, 0.0, 0.2, 0.3, 0.4, 0.0]).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,y,p\n"));
        assert_eq!(text.lines().count(), 5);
        let back = JointDistribution::read_csv(buf.as_slice(), Some((2, 3))).unwrap();
        assert_eq!(back, p);
        assert!(JointDistribution::read_csv("a,b,c\n0,0,1\n".as_bytes(), None).is_err());
    }
}
