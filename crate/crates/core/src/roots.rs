//! Polynomial root finding over the complex numbers.
//!
//! Aberth-Ehrlich simultaneous iteration with a final Newton polish. Handles
//! complex coefficients directly, which is what the fiberwise Jensen
//! integration needs; integer characteristic polynomials go through the same
//! path after conversion.

use num_complex::Complex64;

/// All roots of `sum_k coeffs[k] z^k` (ascending coefficients).
///
/// Leading coefficients with modulus below `1e-12 * max|c|` are truncated
/// (true-degree reduction). Roots at the origin are split off exactly from
/// vanishing low-order coefficients. Returns the roots and a residual-based
/// error estimate per root.
pub fn poly_roots(coeffs: &[Complex64]) -> RootSet {
    let max_c = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_c == 0.0 {
        return RootSet { roots: Vec::new(), error_estimates: Vec::new(), true_degree: 0 };
    }
    let lead_tol = 1e-12 * max_c;
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() <= lead_tol {
        hi -= 1;
    }
    let mut lo = 0;
    while lo < hi && coeffs[lo].norm() == 0.0 {
        lo += 1;
    }
    let trimmed = &coeffs[lo..hi];
    let deg = trimmed.len().saturating_sub(1);

    let mut roots = vec![Complex64::new(0.0, 0.0); lo]; // exact origin roots
    let mut errs = vec![0.0f64; lo];

    if deg >= 1 {
        let found = aberth(trimmed);
        for r in found {
            let (p, dp) = horner_with_derivative(trimmed, r);
            let err = p.norm() / dp.norm().max(1e-300);
            roots.push(r);
            errs.push(err);
        }
    }
    RootSet { roots, error_estimates: errs, true_degree: deg + lo }
}

pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub error_estimates: Vec<f64>,
    pub true_degree: usize,
}

/// Eigenvalue-style helper: moduli of all roots of a real polynomial.
pub fn real_and_complex_moduli(coeffs: &[f64]) -> Vec<f64> {
    let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    poly_roots(&c).roots.iter().map(|r| r.norm()).collect()
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];

    // Fujiwara-style radius bound
    let mut radius = 0.0f64;
    for (k, c) in coeffs.iter().enumerate().take(n) {
        let ratio = (c.norm() / lead.norm()).powf(1.0 / (n - k) as f64);
        radius = radius.max(2.0 * ratio);
    }
    if radius == 0.0 {
        radius = 1.0;
    }

    // initial guesses on a slightly non-symmetric circle
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.357) / n as f64;
            Complex64::from_polar(radius * (0.5 + 0.3 * ((k % 3) as f64) / 3.0), angle)
        })
        .collect();

    let max_iter = 200;
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-3, 1e-3) };
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        sum += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // one Newton refinement pass per root
    for zi in z.iter_mut() {
        let (p, dp) = horner_with_derivative(coeffs, *zi);
        if dp.norm() > 1e-300 {
            *zi -= p / dp;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_poly(coeffs: &[f64]) -> Vec<Complex64> {
        coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn quadratic_golden_ratio() {
        // t^2 - t - 1
        let rs = poly_roots(&real_poly(&[-1.0, -1.0, 1.0]));
        let mut mods: Vec<f64> = rs.roots.iter().map(|r| r.norm()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((mods[1] - phi).abs() < 1e-12);
        assert!((mods[0] - 1.0 / phi).abs() < 1e-12);
    }

    #[test]
    fn cyclotomic_roots_on_circle() {
        // Psi_7(t): all roots on the unit circle
        let rs = poly_roots(&real_poly(&[1.0; 7]));
        assert_eq!(rs.roots.len(), 6);
        for r in &rs.roots {
            assert!((r.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn repeated_and_origin_roots() {
        // z^2 (z - 2)^2 = z^4 - 4 z^3 + 4 z^2
        let rs = poly_roots(&real_poly(&[0.0, 0.0, 4.0, -4.0, 1.0]));
        let mut mods: Vec<f64> = rs.roots.iter().map(|r| r.norm()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(mods[0] == 0.0 && mods[1] == 0.0);
        assert!((mods[2] - 2.0).abs() < 1e-6);
        assert!((mods[3] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z - 3) = z^2 - (3 + i) z + 3i
        let c = vec![
            Complex64::new(0.0, 3.0),
            Complex64::new(-3.0, -1.0),
            Complex64::new(1.0, 0.0),
        ];
        let rs = poly_roots(&c);
        let mut mods: Vec<f64> = rs.roots.iter().map(|r| r.norm()).collect();
        mods.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mods[0] - 1.0).abs() < 1e-10);
        assert!((mods[1] - 3.0).abs() < 1e-10);
    }
}
