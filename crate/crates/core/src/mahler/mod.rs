//! Logarithmic Mahler measures: exact-root Jensen evaluation in one
//! variable, Boyd's iterated-Jensen method in two, and a midpoint-rule grid
//! as an independent cross-check.

pub mod certify;
pub mod family;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::roots::poly_roots;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;

/// Which algorithm produced a Mahler measure value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MahlerMethod {
    #[serde(rename = "jensen-1d")]
    Jensen1d,
    #[serde(rename = "boyd-2d")]
    Boyd2d,
    #[serde(rename = "grid")]
    Grid,
}

/// A numeric logarithmic Mahler measure with an error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct MahlerResult {
    pub value: f64,
    pub method: MahlerMethod,
    pub error_estimate: f64,
}

/// Jensen's formula on complex coefficients (ascending):
/// `log|lead| + sum log max(1, |root|)`. Returns `(value, error_estimate)`.
pub(crate) fn jensen_complex(coeffs: &[Complex64]) -> Result<(f64, f64)> {
    let rs = poly_roots(coeffs);
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    // leading coefficient of the true-degree polynomial (tiny leading
    // coefficients were truncated by the root finder)
    let lead = coeffs[rs.true_degree];
    let mut value = lead.norm().ln();
    let mut err = 1e-14;
    for (r, e) in rs.roots.iter().zip(&rs.error_estimates) {
        let m = r.norm();
        if m > 1.0 {
            value += m.ln();
        }
        err += e / m.max(1.0);
    }
    Ok((value, err))
}

/// Mahler measure of a one-variable integer polynomial via Jensen's formula.
pub fn mahler_1d(p: &MultiPoly) -> Result<MahlerResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, coeffs) = p
        .to_univariate()
        .ok_or_else(|| Error::Precondition("mahler_1d needs a one-variable polynomial".into()))?;
    let cz: Vec<Complex64> = coeffs
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::MAX), 0.0))
        .collect();
    let (value, error_estimate) = jensen_complex(&cz)?;
    Ok(MahlerResult { value, method: MahlerMethod::Jensen1d, error_estimate })
}

fn grid_average(p: &MultiPoly, grid: u32) -> (f64, u64, u64) {
    let d = p.ambient_vars();
    let g = grid as u64;
    let total = g.pow(d as u32);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut skipped = 0u64;
    let mut idx = vec![0u64; d];
    let mut xi = vec![0.0f64; d];
    for flat in 0..total {
        let mut rest = flat;
        for i in 0..d {
            idx[i] = rest % g;
            rest /= g;
            xi[i] = (idx[i] as f64 + 0.5) / g as f64;
        }
        let v = p.evaluate_torus(&xi).norm();
        if v < 1e-14 {
            skipped += 1;
            continue;
        }
        // compensated summation of log values
        let x = v.ln() - comp;
        let t = sum + x;
        comp = (t - sum) - x;
        sum = t;
    }
    let used = total - skipped;
    (if used > 0 { sum / used as f64 } else { 0.0 }, skipped, total)
}

/// Midpoint-rule average of `log|P|` over a shifted lattice on the torus,
/// for up to three variables. Points where `|P| < 1e-14` are skipped (the
/// zero set is null); more than 1% skipped points is an error.
pub fn mahler_grid(p: &MultiPoly, grid: u32) -> Result<MahlerResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = p.ambient_vars();
    if d > 3 {
        return Err(Error::UnsupportedDimension(d, "grid Mahler measure"));
    }
    if grid < 4 {
        return Err(Error::Precondition("grid must be at least 4".into()));
    }
    let (value, skipped, total) = grid_average(p, grid);
    if skipped * 100 > total {
        return Err(Error::InsufficientData(format!(
            "grid Mahler unreliable: {skipped} of {total} points within 1e-14 of the zero set"
        )));
    }
    let (coarse, _, _) = grid_average(p, grid / 2);
    Ok(MahlerResult {
        value,
        method: MahlerMethod::Grid,
        error_estimate: (value - coarse).abs().max(1e-12),
    })
}

/// Coefficients of `P` viewed as a polynomial in `z1` with the unit-circle
/// value of `z0` substituted in.
fn fiber_coeffs(p: &MultiPoly, z0: Complex64) -> Vec<Complex64> {
    let deg1 = p.degree_in(1) as usize;
    let mut coeffs = vec![Complex64::zero(); deg1 + 1];
    for (m, c) in p.terms() {
        let cf = c.to_f64().unwrap_or(f64::MAX);
        coeffs[m.0[1] as usize] += z0.powi(m.0[0] as i32) * cf;
    }
    coeffs
}

fn boyd_average(p: &MultiPoly, outer_grid: u32) -> Result<(f64, u64)> {
    let mut sum = 0.0f64;
    let mut skipped = 0u64;
    for k in 0..outer_grid {
        let theta = (k as f64 + 0.5) / outer_grid as f64;
        let z0 = Complex64::from_polar(1.0, 2.0 * PI * theta);
        let coeffs = fiber_coeffs(p, z0);
        let scale: f64 = coeffs.iter().map(|c| c.norm()).sum();
        if scale < 1e-14 {
            skipped += 1;
            continue;
        }
        let (v, _) = jensen_complex(&coeffs)?;
        sum += v;
    }
    let used = outer_grid as u64 - skipped;
    if used == 0 {
        return Err(Error::InsufficientData("all Boyd fibers vanished".into()));
    }
    Ok((sum / used as f64, skipped))
}

/// Boyd's iterated-Jensen Mahler measure for two-variable polynomials:
/// exact Jensen in `z1` on each of `outer_grid` unit-circle fibers of `z0`,
/// then a midpoint average. Polynomials free of `z1` delegate to the exact
/// one-variable method.
pub fn mahler_boyd_2d(p: &MultiPoly, outer_grid: u32) -> Result<MahlerResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.ambient_vars() != 2 {
        return Err(Error::UnsupportedDimension(p.ambient_vars(), "Boyd 2d Mahler measure"));
    }
    if p.degree_in(1) == 0 {
        return mahler_1d(p);
    }
    if outer_grid < 8 {
        return Err(Error::Precondition("outer grid must be at least 8".into()));
    }
    let (value, _) = boyd_average(p, outer_grid)?;
    let (coarse, _) = boyd_average(p, outer_grid / 2)?;
    Ok(MahlerResult {
        value,
        method: MahlerMethod::Boyd2d,
        error_estimate: (value - coarse).abs().max(1e-12),
    })
}

/// Kronecker test: divide out every cyclotomic `Phi_m` with `phi(m) <= deg`
/// as often as exact division succeeds, after normalizing away the lowest
/// monomial. Returns `(flag, factors)` where the flag is true iff the
/// remainder is `+-1`; factors list each `m` with multiplicity.
pub fn is_cyclotomic_product_1d(p: &MultiPoly) -> Result<(bool, Vec<u64>)> {
    use crate::poly::cyclo::{cyclotomic_coeffs, euler_phi};
    use num_bigint::BigInt;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, coeffs) = p.to_univariate().ok_or_else(|| {
        Error::Precondition("cyclotomic-product test needs a one-variable polynomial".into())
    })?;
    let lo = coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let mut cur: Vec<BigInt> = coeffs[lo..].to_vec();
    let mut factors = Vec::new();
    let mut m = 1u64;
    loop {
        let deg = (cur.len() - 1) as u64;
        if deg == 0 {
            break;
        }
        // phi(m) >= sqrt(m/2), so m beyond 2 deg^2 cannot divide
        if m > 2 * deg * deg + 1 {
            break;
        }
        if euler_phi(m) <= deg {
            let phim: Vec<BigInt> = cyclotomic_coeffs(m).into_iter().map(BigInt::from).collect();
            while let Some(q) = div_exact_big(&cur, &phim) {
                factors.push(m);
                cur = q;
                if cur.len() == 1 {
                    break;
                }
            }
        }
        m += 1;
    }
    let ok = cur.len() == 1 && (cur[0] == BigInt::from(1) || cur[0] == BigInt::from(-1));
    Ok((ok, factors))
}

/// Exact division of ascending-coefficient integer polynomials by a monic
/// divisor; `None` on nonzero remainder.
fn div_exact_big(num: &[num_bigint::BigInt], den: &[num_bigint::BigInt]) -> Option<Vec<num_bigint::BigInt>> {
    use num_bigint::BigInt;
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    if dn < dd {
        return None;
    }
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let q = rem[k + dd].clone();
        if !q.is_zero() {
            for (j, c) in den.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
        }
        quot[k] = q;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}
