//! Cyclotomic polynomials and their extended (multivariate) forms.

use super::{Monomial, MultiPoly};
use num_bigint::BigInt;

/// Ascending coefficients of the m-th cyclotomic polynomial (monic).
///
/// Computed by exact division of `t^m - 1` by the cyclotomic polynomials of
/// the proper divisors of `m`.
pub fn cyclotomic_coeffs(m: u64) -> Vec<i128> {
    assert!(m >= 1);
    // t^m - 1
    let mut num = vec![0i128; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = div_exact_i128(&num, &cyclotomic_coeffs(d));
        }
    }
    num
}

/// Exact division of univariate integer polynomials (ascending coeffs);
/// panics on nonzero remainder. Divisor must be monic.
fn div_exact_i128(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd] == 1 && dn >= dd);
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let q = rem[k + dd];
        quot[k] = q;
        if q != 0 {
            for (j, &c) in den.iter().enumerate() {
                rem[k + j] -= q * c;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "nonzero remainder in cyclotomic division");
    quot
}

/// The m-th cyclotomic polynomial as a one-variable polynomial.
pub fn cyclotomic(m: u64) -> MultiPoly {
    let coeffs: Vec<BigInt> = cyclotomic_coeffs(m).into_iter().map(BigInt::from).collect();
    MultiPoly::from_univariate(&coeffs)
}

/// `psi_k(t) = 1 + t + ... + t^{k-1}` evaluated at the monomial `mono`,
/// expanded in `mono`'s ambient dimension.
pub fn psi_at_monomial(k: u32, mono: &Monomial) -> MultiPoly {
    let mut p = MultiPoly::zero(mono.0.len());
    for j in 0..k {
        p.add_term(mono.pow(j), BigInt::from(1));
    }
    p
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Extended cyclotomic polynomial `psi(z) = z^b Phi_m(z^v)` in `d` variables,
/// where `b_i = max(0, -v_i * deg Phi_m)` clears negative powers. The
/// exponent vector `v` must be nonzero.
pub fn extended_cyclotomic(m: u64, v: &[i64], d: usize) -> MultiPoly {
    assert_eq!(v.len(), d);
    assert!(v.iter().any(|&x| x != 0), "exponent vector must be nonzero");
    let coeffs = cyclotomic_coeffs(m);
    let deg = (coeffs.len() - 1) as i64;
    let b: Vec<i64> = v.iter().map(|&vi| 0.max(-vi * deg)).collect();
    let mut p = MultiPoly::zero(d);
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let e: Vec<u32> = (0..d)
            .map(|i| {
                let x = b[i] + j as i64 * v[i];
                debug_assert!(x >= 0);
                x as u32
            })
            .collect();
        p.add_term(Monomial(e), BigInt::from(c));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_coeffs(1), vec![-1, 1]);
        assert_eq!(cyclotomic_coeffs(2), vec![1, 1]);
        assert_eq!(cyclotomic_coeffs(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_coeffs(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_coeffs(12), vec![1, 0, -1, 0, 1]);
        // first index with a coefficient outside {-1, 0, 1}
        assert_eq!(cyclotomic_coeffs(105)[7], -2);
    }

    #[test]
    fn product_over_divisors_recovers_power() {
        // prod_{d | 12} Phi_d = t^12 - 1
        let mut acc = MultiPoly::one(1);
        for d in 1..=12u64 {
            if 12 % d == 0 {
                acc = acc * cyclotomic(d);
            }
        }
        let mut expect = vec![BigInt::from(0); 13];
        expect[0] = BigInt::from(-1);
        expect[12] = BigInt::from(1);
        assert_eq!(acc, MultiPoly::from_univariate(&expect));
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(13), 12);
        assert_eq!(euler_phi(36), 12);
    }

    #[test]
    fn extended_form_clears_negatives() {
        // Phi_2(z0 z1^{-1}) = 1 + z0 z1^{-1}, cleared: z1 + z0
        let p = extended_cyclotomic(2, &[1, -1], 2);
        let expect = MultiPoly::var(2, 0) + MultiPoly::var(2, 1);
        assert_eq!(p, expect);
        // Phi_1(z0^2) = z0^2 - 1
        let q = extended_cyclotomic(1, &[2, 0], 2);
        let expect_q = MultiPoly::var(2, 0) * MultiPoly::var(2, 0) - MultiPoly::one(2);
        assert_eq!(q, expect_q);
    }

    #[test]
    fn psi_expansion() {
        let m = Monomial(vec![1, 1]);
        let p = psi_at_monomial(3, &m);
        // 1 + z0 z1 + z0^2 z1^2
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coeff(&Monomial(vec![2, 2])), BigInt::from(1));
    }
}
