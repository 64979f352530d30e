//! Closed-form rate quantities and classification of `(E, C)` pairs.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{conditional_shannon, rel_entropy_coherence, von_neumann_entropy, JointDistribution};
use crate::qstate::{DensityOperator, PureState, SystemLayout, STATE_TOL};
use crate::statezoo::SeparableFamily;

/// Absolute tolerance of all rate comparisons.
pub const RATE_TOL: f64 = 1e-9;

const PARTIES: [&str; 3] = ["R", "A", "B"];

/// Entanglement and coherence rates per copy; either may be negative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourcePair {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl ResourcePair {
    pub fn new(e: f64, c: f64) -> Result<Self> {
        if !e.is_finite() || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite pair ({e}, {c})")));
        }
        Ok(Self { e, c })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBounds {
    pub sum_lower: f64,
    pub e_min: f64,
    pub e0: Option<f64>,
    pub c_max: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Excluded,
    Achievable,
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Excluded => "excluded",
            Classification::Achievable => "achievable",
            Classification::Unknown => "unknown",
        })
    }
}

fn require_parties(layout: &SystemLayout) -> Result<()> {
    for p in PARTIES {
        if !layout.contains(p) {
            return Err(Error::UnknownLabel(p.to_owned()));
        }
    }
    if layout.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "expected exactly the factors R, A, B, found {layout}"
        )));
    }
    Ok(())
}

/// `S(Δ^{AB} ρ) - S(Δ^B ρ)`.
pub fn ec_sum_lower_bound(rho: &DensityOperator) -> Result<f64> {
    require_parties(rho.layout())?;
    let s_ab = von_neumann_entropy(&rho.dephase(&["A", "B"])?)?;
    let s_b = von_neumann_entropy(&rho.dephase(&["B"])?)?;
    Ok(s_ab - s_b)
}

/// `S(ρ^{AB}) - S(ρ^B)`.
pub fn e_min(rho: &DensityOperator) -> Result<f64> {
    require_parties(rho.layout())?;
    let ab = rho.partial_trace(&["R"])?;
    let b = ab.partial_trace(&["A"])?;
    Ok(von_neumann_entropy(&ab)? - von_neumann_entropy(&b)?)
}

/// `p(x, y) = Σ_r |ψ_{rxy}|²` of a pure state on `R`, `A`, `B`.
pub fn source_distribution(psi: &PureState) -> Result<JointDistribution> {
    require_parties(psi.layout())?;
    let psi = psi.permute(&PARTIES)?;
    let dims = psi.layout().dims();
    let (dr, dx, dy) = (dims[0], dims[1], dims[2]);
    let amps = psi.amplitudes();
    let mut p = vec![0.0; dx * dy];
    for r in 0..dr {
        for xy in 0..dx * dy {
            p[xy] += amps[r * dx * dy + xy].norm_sqr();
        }
    }
    JointDistribution::from_weights(dx, dy, p)
}

/// `E₀ = H(X|Y)` for `p(x, y) = |a_{xy}|²`.
pub fn e0_pure(psi: &PureState) -> Result<f64> {
    Ok(conditional_shannon(&source_distribution(psi)?))
}

/// `E₀` for a density operator that must be pure.
pub fn e0(rho: &DensityOperator) -> Result<f64> {
    require_parties(rho.layout())?;
    let purity = rho.purity();
    if (purity - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "E0 is defined for pure states only (purity {purity})"
        )));
    }
    let ab = rho.partial_trace(&["R"])?.dephase(&["A", "B"])?;
    let b = ab.partial_trace(&["A"])?;
    Ok(von_neumann_entropy(&ab)? - von_neumann_entropy(&b)?)
}

pub fn bounds_for_pure(psi: &PureState) -> Result<RateBounds> {
    let rho = psi.to_density();
    Ok(RateBounds {
        sum_lower: ec_sum_lower_bound(&rho)?,
        e_min: e_min(&rho)?,
        e0: Some(e0_pure(psi)?),
        c_max: None,
    })
}

/// Bounds of a general state; `e0` and `c_max` stay absent.
pub fn bounds_for_mixed(rho: &DensityOperator) -> Result<RateBounds> {
    Ok(RateBounds {
        sum_lower: ec_sum_lower_bound(rho)?,
        e_min: e_min(rho)?,
        e0: None,
        c_max: None,
    })
}

/// Achievable corner points: `(E₀, 0)` and `(E_min, C_max)` when known.
fn known_points(b: &RateBounds) -> Vec<ResourcePair> {
    let mut pts = Vec::new();
    if let Some(e0) = b.e0 {
        pts.push(ResourcePair { e: e0, c: 0.0 });
    }
    if let Some(c) = b.c_max {
        pts.push(ResourcePair { e: b.e_min, c });
    }
    pts
}

/// Excluded below either bound, achievable on or above the slope −1 ray
/// through a known achievable point, unknown otherwise.
pub fn classify_pair(pair: ResourcePair, bounds: &RateBounds) -> Classification {
    let sum = pair.e + pair.c;
    if sum < bounds.sum_lower.max(0.0) - RATE_TOL
        || pair.e < bounds.e_min - RATE_TOL
        || (pair.e < 0.0 && pair.c < 0.0)
    {
        return Classification::Excluded;
    }
    let pts = known_points(bounds);
    if pts.is_empty() {
        return Classification::Unknown;
    }
    // Upward closure of the convex hull of the known points, each extended
    // to the right along slope −1.
    let hull_ok = |e: f64, c: f64| {
        if pts.iter().any(|q| e >= q.e - RATE_TOL && e + c >= q.e + q.c - RATE_TOL) {
            return true;
        }
        if let [p, q] = pts.as_slice() {
            let (l, r) = if p.e <= q.e { (p, q) } else { (q, p) };
            if e >= l.e - RATE_TOL && e <= r.e + RATE_TOL && r.e > l.e {
                let t = (e - l.e) / (r.e - l.e);
                let c_line = l.c + t * (r.c - l.c);
                return c >= c_line - RATE_TOL;
            }
        }
        false
    };
    if hull_ok(pair.e, pair.c) {
        Classification::Achievable
    } else {
        Classification::Unknown
    }
}

/// `p·p1 + (1-p)·p2`.
pub fn timeshare(p1: ResourcePair, p2: ResourcePair, p: f64) -> Result<ResourcePair> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("timesharing weight {p} outside [0, 1]")));
    }
    ResourcePair::new(p * p1.e + (1.0 - p) * p2.e, p * p1.c + (1.0 - p) * p2.c)
}

/// Optimal pairs `(a·C_max, (1−a)·C_max)`, `a ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frontier {
    pub c_max: f64,
}

impl Frontier {
    pub fn point(&self, a: f64) -> Result<ResourcePair> {
        if !(a >= 0.0) {
            return Err(Error::InvalidParameter(format!("frontier parameter {a} must be >= 0")));
        }
        ResourcePair::new(a * self.c_max, (1.0 - a) * self.c_max)
    }

    /// `steps + 1` evenly spaced points with `a ∈ [0, a_max]`.
    pub fn sample(&self, a_max: f64, steps: usize) -> Result<Vec<ResourcePair>> {
        let steps = steps.max(1);
        (0..=steps)
            .map(|k| self.point(a_max * k as f64 / steps as f64))
            .collect()
    }
}

/// `C_max = Σ p_ij S(Δψ_ij)` and the optimal frontier of the family.
pub fn separable_family_rates(fam: &SeparableFamily) -> Result<(f64, Frontier)> {
    let mut c_max = 0.0;
    for i in 0..fam.num_i() {
        for j in 0..fam.num_j() {
            let p = fam.p(i, j);
            if p > 0.0 {
                c_max += p * rel_entropy_coherence(&fam.pure_state(i, j, "A").to_density())?;
            }
        }
    }
    Ok((c_max, Frontier { c_max }))
}

/// Bounds of the separable family: `E_min = 0` (merging needs no
/// entanglement) and both corner points on the frontier.
pub fn separable_family_bounds(fam: &SeparableFamily) -> Result<RateBounds> {
    let (c_max, _) = separable_family_rates(fam)?;
    let rho = crate::statezoo::separable_family_state(fam)?;
    Ok(RateBounds {
        sum_lower: ec_sum_lower_bound(&rho)?,
        e_min: 0.0,
        e0: Some(c_max),
        c_max: Some(c_max),
    })
}

/// Flower-state bounds and the one-way coherence floor `1 + ½log₂d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowerRates {
    pub bounds: RateBounds,
    pub theorem3_coherence_floor: f64,
}

pub fn flower_rates(d: usize) -> Result<FlowerRates> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension d = {d}, need d >= 2")));
    }
    Ok(FlowerRates {
        bounds: RateBounds {
            sum_lower: 1.0,
            e_min: 0.0,
            e0: Some(1.0),
            c_max: None,
        },
        theorem3_coherence_floor: 1.0 + 0.5 * (d as f64).log2(),
    })
}

/// One grid axis `NAME:min:max:step`, with points `min + k·step ≤ max`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl FromStr for GridAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, step] = parts.as_slice() else {
            return Err(Error::Format(format!("grid axis `{s}` is not NAME:min:max:step")));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Format(format!("`{t}` in grid axis `{s}` is not a number")))
        };
        let axis = GridAxis {
            name: name.to_string(),
            min: num(min)?,
            max: num(max)?,
            step: num(step)?,
        };
        if axis.min > axis.max {
            return Err(Error::InvalidParameter(format!("grid axis `{s}` has min > max")));
        }
        if axis.step <= 0.0 {
            return Err(Error::InvalidParameter(format!("grid axis `{s}` needs a positive step")));
        }
        Ok(axis)
    }
}

impl GridAxis {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=count).map(|k| self.min + k as f64 * self.step).collect()
    }
}

/// Writes `E,C,classification` for every grid point, `E` outer.
pub fn write_region_csv<W: Write>(
    writer: W,
    bounds: &RateBounds,
    e_axis: &GridAxis,
    c_axis: &GridAxis,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["E", "C", "classification"])?;
    let cs = c_axis.points();
    for e in e_axis.points() {
        for &c in &cs {
            let class = classify_pair(ResourcePair { e, c }, bounds);
            w.write_record([format_num(e), format_num(c), class.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Shortest decimal that survives the grid's floating accumulation.
fn format_num(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::statezoo::{flower, max_entangled};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn rab(amps: &[(usize, f64)], dims: (usize, usize, usize)) -> PureState {
        let layout = SystemLayout::new([("R", dims.0), ("A", dims.1), ("B", dims.2)]).unwrap();
        let mut v = DVector::from_element(layout.total_dim(), C64::from(0.0));
        for &(i, a) in amps {
            v[i] = C64::from(a);
        }
        PureState::normalized(layout, v).unwrap()
    }

    #[test]
    fn sum_bound_examples() {
        let ghz = rab(&[(0, 1.0), (7, 1.0)], (2, 2, 2));
        assert_abs_diff_eq!(ec_sum_lower_bound(&ghz.to_density()).unwrap(), 0.0, epsilon = 1e-12);
        // |0⟩^R |+⟩^A |0⟩^B
        let plus = rab(&[(0, 1.0), (2, 1.0)], (2, 2, 2));
        assert_abs_diff_eq!(ec_sum_lower_bound(&plus.to_density()).unwrap(), 1.0, epsilon = 1e-12);
        for d in [2, 3, 4] {
            let f = flower(d).unwrap().to_density();
            assert_abs_diff_eq!(ec_sum_lower_bound(&f).unwrap(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn e_min_examples() {
        let r = PureState::basis(SystemLayout::single("R", 2), &[0]).unwrap();
        let psi = r.tensor(&max_entangled(2).unwrap()).unwrap();
        assert_abs_diff_eq!(e_min(&psi.to_density()).unwrap(), -1.0, epsilon = 1e-12);
        for d in [2, 4] {
            assert_abs_diff_eq!(e_min(&flower(d).unwrap().to_density()).unwrap(), 0.0, epsilon = 1e-9);
        }
        let bad = max_entangled(2).unwrap().to_density();
        assert!(matches!(e_min(&bad), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn e0_examples() {
        for d in [2, 3, 4] {
            assert_abs_diff_eq!(e0_pure(&flower(d).unwrap()).unwrap(), 1.0, epsilon = 1e-9);
        }
        // Σ √p_x |x⟩^R |x⟩^A |0⟩^B
        let p = [0.2f64, 0.3, 0.5];
        let amps: Vec<(usize, f64)> = (0..3).map(|x| (x * 3 + x, p[x].sqrt())).collect();
        let psi = rab(&amps, (3, 3, 1));
        let h = crate::info::shannon_entropy(&p).unwrap();
        assert_abs_diff_eq!(e0_pure(&psi).unwrap(), h, epsilon = 1e-12);
        assert_abs_diff_eq!(e0(&psi.to_density()).unwrap(), h, epsilon = 1e-12);
        let mixed = psi.to_density().dephase(&["A"]).unwrap();
        assert!(matches!(e0(&mixed), Err(Error::InvalidState(_))));
    }

    #[test]
    fn classify_examples() {
        let b = bounds_for_pure(&flower(4).unwrap()).unwrap();
        assert_eq!(classify_pair(ResourcePair { e: 1.0, c: 0.0 }, &b), Classification::Achievable);
        assert_eq!(classify_pair(ResourcePair { e: -0.1, c: 10.0 }, &b), Classification::Excluded);
        assert_eq!(classify_pair(ResourcePair { e: 0.0, c: 1.0 }, &b), Classification::Unknown);
        assert_eq!(classify_pair(ResourcePair { e: 3.0, c: -2.0 }, &b), Classification::Achievable);
        assert_eq!(classify_pair(ResourcePair { e: 3.0, c: -2.1 }, &b), Classification::Excluded);
        let none = RateBounds { sum_lower: 0.0, e_min: -5.0, e0: None, c_max: None };
        assert_eq!(classify_pair(ResourcePair { e: -1.0, c: -1.0 }, &none), Classification::Excluded);
    }

    #[test]
    fn classify_uses_hull_of_two_points() {
        let b = RateBounds { sum_lower: 1.0, e_min: 0.0, e0: Some(1.0), c_max: Some(3.0) };
        // on the segment between (0, 3) and (1, 0)
        assert_eq!(classify_pair(ResourcePair { e: 0.5, c: 1.5 }, &b), Classification::Achievable);
        assert_eq!(classify_pair(ResourcePair { e: 0.5, c: 1.4 }, &b), Classification::Unknown);
        assert_eq!(classify_pair(ResourcePair { e: 0.0, c: 3.0 }, &b), Classification::Achievable);
    }

    #[test]
    fn timeshare_examples() {
        let a = ResourcePair { e: 1.0, c: 0.0 };
        let b = ResourcePair { e: 0.0, c: 1.0 };
        assert_eq!(timeshare(a, b, 0.0).unwrap(), b);
        assert_eq!(timeshare(a, b, 1.0).unwrap(), a);
        assert_eq!(timeshare(a, b, 0.5).unwrap(), ResourcePair { e: 0.5, c: 0.5 });
        assert!(timeshare(a, b, 1.5).is_err());
    }

    fn ket(v: &[f64]) -> DVector<C64> {
        DVector::from_iterator(v.len(), v.iter().map(|&x| C64::from(x)))
    }

    #[test]
    fn separable_rates_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let inc = SeparableFamily::new(vec![vec![0.5, 0.5]], vec![vec![ket(&[1.0, 0.0]), ket(&[0.0, 1.0])]]).unwrap();
        let (c, fr) = separable_family_rates(&inc).unwrap();
        assert_abs_diff_eq!(c, 0.0, epsilon = 1e-12);
        assert_eq!(fr.point(2.0).unwrap(), ResourcePair { e: 0.0, c: 0.0 });
        let one = SeparableFamily::new(vec![vec![1.0]], vec![vec![ket(&[s, s])]]).unwrap();
        let (c, fr) = separable_family_rates(&one).unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-12);
        let p = fr.point(0.3).unwrap();
        assert_abs_diff_eq!(p.e, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(p.c, 0.7, epsilon = 1e-12);
        let two = SeparableFamily::new(vec![vec![0.5], vec![0.5]], vec![vec![ket(&[s, s])], vec![ket(&[1.0, 0.0])]]).unwrap();
        assert_abs_diff_eq!(separable_family_rates(&two).unwrap().0, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn flower_rates_examples() {
        assert_eq!(flower_rates(2).unwrap().theorem3_coherence_floor, 1.5);
        assert_eq!(flower_rates(4).unwrap().theorem3_coherence_floor, 2.0);
        assert!(flower_rates(1).is_err());
    }

    #[test]
    fn grid_parsing() {
        let a: GridAxis = "E:-1:3:0.05".parse().unwrap();
        let pts = a.points();
        assert_eq!(pts.len(), 81);
        assert_abs_diff_eq!(*pts.last().unwrap(), 3.0, epsilon = 1e-12);
        assert!("E:3:1:0.1".parse::<GridAxis>().is_err());
        assert!("E:0:1:0".parse::<GridAxis>().is_err());
        assert!("E:0:1".parse::<GridAxis>().is_err());
    }

    #[test]
    fn region_csv_shape() {
        let b = bounds_for_pure(&flower(2).unwrap()).unwrap();
        let mut out = Vec::new();
        let e: GridAxis = "E:0:1:0.5".parse().unwrap();
        let c: GridAxis = "C:0:1:0.5".parse().unwrap();
        write_region_csv(&mut out, &b, &e, &c).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "E,C,classification");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "0,0,excluded");
        assert_eq!(lines[7], "1,0,achievable");
    }
}
