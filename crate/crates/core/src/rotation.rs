//! Spectral measure of an irrational circle rotation for the cylinder
//! function `f = 1_[0, 1-theta)`, and numerical local-dimension estimation.
//!
//! The spectral measure is the atomic measure sum of `|c_n|^2` Dirac masses
//! at the orbit points `{n theta}`; ball masses are finite truncated sums
//! over `|n| <= N`.

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Parameters of the rotation and the Fourier truncation order.
#[derive(Debug, Clone, Copy)]
pub struct RotationSpec {
    /// Rotation number in (0,1), irrational by assertion.
    pub theta: f64,
    /// Truncation order: weights are summed over |n| <= N.
    pub n_trunc: u64,
}

impl RotationSpec {
    pub fn new(theta: f64, n_trunc: u64) -> Result<Self> {
        if !(0.0 < theta && theta < 1.0) {
            return Err(Error::Precondition("theta must lie in (0,1)".into()));
        }
        if n_trunc == 0 {
            return Err(Error::Precondition("truncation order must be at least 1".into()));
        }
        Ok(RotationSpec { theta, n_trunc })
    }
}

/// Squared Fourier coefficient `|c_n|^2` of the cylinder function:
/// `sin^2(pi n theta) / (pi n)^2` for `n != 0`, and `(1-theta)^2` at `n = 0`.
pub fn fourier_weight(n: i64, theta: f64) -> f64 {
    if n == 0 {
        let c = 1.0 - theta;
        c * c
    } else {
        let s = (PI * n as f64 * theta).sin();
        let d = PI * n as f64;
        (s * s) / (d * d)
    }
}

/// How often the accumulated orbit is re-anchored to an exactly computed
/// `{n theta}`.
const REANCHOR_PERIOD: u64 = 1_000_000;

/// `{n theta}` via an exact two-product split, so the result carries only
/// rounding error of the final additions.
fn exact_frac(n: u64, theta: f64) -> f64 {
    let nf = n as f64;
    let hi = nf * theta;
    let lo = nf.mul_add(theta, -hi);
    let mut frac = hi - hi.floor() + lo;
    if frac >= 1.0 {
        frac -= 1.0;
    }
    if frac < 0.0 {
        frac += 1.0;
    }
    frac
}

/// Precomputed orbit `{n theta}` for `1 <= n <= N` with the Fourier weights,
/// sorted by position with prefix sums for fast ball queries. Built once,
/// then shared read-only across mass evaluations.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    pub spec: RotationSpec,
    positions: Vec<f64>,
    /// prefix[i] = sum of weights of positions[..i]
    prefix: Vec<f64>,
    zero_weight: f64,
    /// Largest observed deviation between the accumulated orbit and the
    /// exactly recomputed anchor points.
    pub max_drift: f64,
}

impl OrbitTable {
    pub fn build(spec: &RotationSpec) -> Result<OrbitTable> {
        let n = spec.n_trunc;
        let theta = spec.theta;
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n as usize);
        // compensated accumulation of {n theta}
        let mut pos = 0.0_f64;
        let mut comp = 0.0_f64;
        let mut max_drift = 0.0_f64;
        for i in 1..=n {
            let y = theta - comp;
            let t = pos + y;
            comp = (t - pos) - y;
            pos = t;
            if pos >= 1.0 {
                pos -= 1.0;
            }
            if i % REANCHOR_PERIOD == 0 {
                let exact = exact_frac(i, theta);
                let mut drift = (pos - exact).abs();
                if drift > 0.5 {
                    drift = 1.0 - drift;
                }
                max_drift = max_drift.max(drift);
                pos = exact;
                comp = 0.0;
            }
            pairs.push((pos, fourier_weight(i as i64, theta)));
        }
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut positions = Vec::with_capacity(pairs.len());
        let mut prefix = Vec::with_capacity(pairs.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0_f64;
        let mut acc_comp = 0.0_f64;
        for (p, w) in pairs {
            positions.push(p);
            let y = w - acc_comp;
            let t = acc + y;
            acc_comp = (t - acc) - y;
            acc = t;
            prefix.push(acc);
        }
        Ok(OrbitTable {
            spec: *spec,
            positions,
            prefix,
            zero_weight: fourier_weight(0, theta),
            max_drift,
        })
    }

    /// Sum of weights of orbit points in `[lo, hi]` with `0 <= lo <= hi <= 1`.
    fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        let a = self.positions.partition_point(|&p| p < lo);
        let b = self.positions.partition_point(|&p| p <= hi);
        self.prefix[b] - self.prefix[a]
    }

    /// Ball mass on the circle for one side of the orbit (positive n), with
    /// the ball centered at `c` of radius `r < 1/2`.
    fn half_mass(&self, c: f64, r: f64) -> f64 {
        let lo = c - r;
        let hi = c + r;
        if lo < 0.0 {
            self.interval_mass(0.0, hi) + self.interval_mass(lo + 1.0, 1.0)
        } else if hi > 1.0 {
            self.interval_mass(lo, 1.0) + self.interval_mass(0.0, hi - 1.0)
        } else {
            self.interval_mass(lo, hi)
        }
    }

    /// Truncated spectral mass of the ball `B(x, r)` in circle distance:
    /// the sum of `|c_n|^2` over `|n| <= N` with `{n theta}` in the ball.
    /// Negative `n` contribute at the reflected positions `1 - {n theta}`
    /// with the same weights.
    pub fn spectral_mass(&self, x: f64, r: f64) -> Result<f64> {
        if !(0.0 < r && r < 0.5) {
            return Err(Error::Precondition("radius must lie in (0, 1/2)".into()));
        }
        if !(0.0 < x && x < 1.0) {
            return Err(Error::Precondition("base point must lie in (0,1)".into()));
        }
        let mut m = self.half_mass(x, r) + self.half_mass(1.0 - x, r);
        if x.min(1.0 - x) <= r {
            m += self.zero_weight;
        }
        Ok(m)
    }

    /// Total truncated mass: sum of `|c_n|^2` over all `|n| <= N`.
    pub fn total_mass(&self) -> f64 {
        self.zero_weight + 2.0 * self.prefix[self.prefix.len() - 1]
    }

    /// Number of distinct gap lengths between consecutive orbit points
    /// (including the wraparound gap), clustering with relative tolerance
    /// `tol`. The three-distance theorem predicts at most 3.
    pub fn distinct_gap_count(&self, tol: f64) -> usize {
        if self.positions.is_empty() {
            return 0;
        }
        let mut gaps: Vec<f64> = self.positions.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.push(1.0 - self.positions[self.positions.len() - 1] + self.positions[0]);
        gaps.sort_unstable_by(f64::total_cmp);
        let mut count = 1;
        for w in gaps.windows(2) {
            if w[1] - w[0] > tol * w[1].max(1e-300) {
                count += 1;
            }
        }
        count
    }
}

/// A fitted local dimension at a base point.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionEstimate {
    pub x: f64,
    /// Least-squares slope of log mass against log radius.
    pub slope: f64,
    /// (r_min, r_max) of the retained radii.
    pub r_range: (f64, f64),
    /// Root-mean-square residual of the fit in log space.
    pub fit_residual: f64,
    /// Retained (radius, mass) pairs, radii decreasing.
    pub masses: Vec<(f64, f64)>,
}

/// Fit the local dimension of the spectral measure at `x` over a decreasing
/// radius sequence. Radii with empty mass are dropped; fewer than 4 usable
/// radii is an error, as is a radius window below the coverage heuristic
/// `r_min > N^{-0.9}`.
pub fn local_dimension(table: &OrbitTable, x: f64, radii: &[f64]) -> Result<DimensionEstimate> {
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("radii must be strictly decreasing".into()));
    }
    let mut masses: Vec<(f64, f64)> = Vec::with_capacity(radii.len());
    for &r in radii {
        let m = table.spectral_mass(x, r)?;
        if m > 0.0 {
            masses.push((r, m));
        }
    }
    if masses.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "only {} radii carry positive mass at x = {x}; need at least 4",
            masses.len()
        )));
    }
    let r_min = masses[masses.len() - 1].0;
    let r_max = masses[0].0;
    let coverage = (table.spec.n_trunc as f64).powf(-0.9);
    if r_min <= coverage {
        return Err(Error::Precondition(format!(
            "smallest radius {r_min:.3e} is below the coverage heuristic N^-0.9 = {coverage:.3e}"
        )));
    }
    if table.max_drift > r_min / 100.0 {
        return Err(Error::Precondition(format!(
            "orbit drift {:.3e} exceeds r_min/100",
            table.max_drift
        )));
    }
    // least squares of ln(mass) on ln(r)
    let pts: Vec<(f64, f64)> = masses.iter().map(|&(r, m)| (r.ln(), m.ln())).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::InsufficientData("degenerate radius spread".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = pts.iter().map(|&(lx, ly)| (ly - slope * lx - intercept).powi(2)).sum();
    Ok(DimensionEstimate {
        x,
        slope,
        r_range: (r_min, r_max),
        fit_residual: (ss / n).sqrt(),
        masses,
    })
}

/// Continued fraction expansion of a number in (0,1).
#[derive(Debug, Clone, Serialize)]
pub struct ContinuedFraction {
    pub quotients: Vec<u64>,
    /// The recursion terminated: the input is rational to double precision.
    pub rational: bool,
    /// Output was cut short of the requested length by precision loss.
    pub truncated: bool,
}

/// First `k` partial quotients of `theta` in (0,1) by the floor/reciprocal
/// recursion. `k` is capped at 40, the double-precision reliability bound.
pub fn continued_fraction(theta: f64, k: usize) -> Result<ContinuedFraction> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(Error::Precondition("theta must lie in (0,1)".into()));
    }
    if k == 0 || k > 40 {
        return Err(Error::Precondition("quotient count must lie in 1..=40".into()));
    }
    let mut quotients = Vec::with_capacity(k);
    let mut x = theta;
    let mut rational = false;
    let mut truncated = false;
    for _ in 0..k {
        // below double-precision resolution the remainder is numerically zero
        if x < 1e-12 {
            rational = true;
            truncated = quotients.len() < k;
            break;
        }
        let inv = 1.0 / x;
        let a = inv.floor();
        if !a.is_finite() || a >= 1e15 {
            rational = true;
            truncated = true;
            break;
        }
        quotients.push(a as u64);
        x = inv - a;
    }
    Ok(ContinuedFraction { quotients, rational, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2M1: f64 = std::f64::consts::SQRT_2 - 1.0;

    #[test]
    fn fourier_weight_oracles() {
        assert!((fourier_weight(0, 0.3) - 0.49).abs() < 1e-15);
        assert!((fourier_weight(1, 0.5) - 1.0 / (PI * PI)).abs() < 1e-15);
        assert_eq!(fourier_weight(7, 0.37), fourier_weight(-7, 0.37));
    }

    #[test]
    fn parseval_partial_sum() {
        // sum over |n| <= N of |c_n|^2 -> 1 - theta, tail bounded by 2/N
        let theta = 0.3;
        let spec = RotationSpec::new(theta, 200_000).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        let total = table.total_mass();
        assert!(
            ((1.0 - theta) - total).abs() < 2.0 / spec.n_trunc as f64,
            "total {total}"
        );
        assert!(total < 1.0 - theta);
    }

    #[test]
    fn mass_monotone_and_additive() {
        let spec = RotationSpec::new(SQRT2M1, 10_000).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        let x = 0.3141;
        let mut prev = 0.0;
        for i in 1..40 {
            let m = table.spectral_mass(x, i as f64 * 0.01).unwrap();
            assert!(m >= prev);
            prev = m;
        }
        // total mass at r just under 1/2 covers everything
        let all = table.spectral_mass(0.25, 0.499999999).unwrap();
        assert!((all - table.total_mass()).abs() < 1e-9);
    }

    #[test]
    fn empty_ball_has_zero_mass() {
        // place the ball in a gap: with N=3 and theta = sqrt(2)-1 the points
        // are ~0.414, 0.828, 0.243 and reflections; 0.6 +- 0.01 is empty
        let spec = RotationSpec::new(SQRT2M1, 3).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        assert_eq!(table.spectral_mass(0.6, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn three_distance_property() {
        for n in [10u64, 137, 1000, 4096] {
            let spec = RotationSpec::new(SQRT2M1, n).unwrap();
            let table = OrbitTable::build(&spec).unwrap();
            let g = table.distinct_gap_count(1e-9);
            assert!(g <= 3, "N={n} gave {g} distinct gaps");
        }
    }

    #[test]
    fn atom_plateaus_slope() {
        // x on the orbit: an atom dominates, so the log-mass plateaus
        let spec = RotationSpec::new(SQRT2M1, 1_000_000).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        let x = exact_frac(5, SQRT2M1);
        let radii: Vec<f64> = (0..10).map(|i| 1e-2 * 0.5f64.powi(i)).collect();
        let est = local_dimension(&table, x, &radii).unwrap();
        assert!(est.slope < 0.5, "slope {}", est.slope);
    }

    #[test]
    fn generic_point_slope_is_near_two() {
        let spec = RotationSpec::new(SQRT2M1, 2_000_000).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        let radii: Vec<f64> = (0..9).map(|i| 1e-2 * 0.5f64.powi(i)).collect();
        let mut slopes: Vec<f64> = Vec::new();
        for &x in &[0.171717, 0.345678, 0.512345, 0.698765, 0.876543] {
            slopes.push(local_dimension(&table, x, &radii).unwrap().slope);
        }
        slopes.sort_unstable_by(f64::total_cmp);
        let median = slopes[slopes.len() / 2];
        assert!((1.4..=2.6).contains(&median), "median slope {median}");
    }

    #[test]
    fn coverage_and_count_preconditions() {
        let spec = RotationSpec::new(SQRT2M1, 1000).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        // radii far below 1/N^0.9 violate coverage
        let tiny: Vec<f64> = (0..6).map(|i| 1e-5 * 0.5f64.powi(i)).collect();
        assert!(local_dimension(&table, 0.3, &tiny).is_err());
        // non-decreasing radii rejected
        assert!(local_dimension(&table, 0.3, &[0.01, 0.02, 0.03, 0.04]).is_err());
    }

    #[test]
    fn continued_fraction_oracles() {
        let cf = continued_fraction(SQRT2M1, 12).unwrap();
        assert_eq!(cf.quotients, vec![2; 12]);
        assert!(!cf.rational);
        let golden = (1.0 + 5.0_f64.sqrt()) / 2.0 - 1.0;
        let cf = continued_fraction(golden, 10).unwrap();
        assert_eq!(cf.quotients, vec![1; 10]);
        let cf = continued_fraction(0.25, 10).unwrap();
        assert!(cf.rational);
        assert_eq!(cf.quotients, vec![4]);
    }

    #[test]
    fn orbit_drift_stays_small() {
        let spec = RotationSpec::new(SQRT2M1, 3_000_000).unwrap();
        let table = OrbitTable::build(&spec).unwrap();
        assert!(table.max_drift < 1e-9, "drift {}", table.max_drift);
    }
}
