//! Exact sparse multivariate polynomial arithmetic over the integers.
//!
//! Polynomials live in `Z[z_0, ..., z_{d-1}]` with arbitrary-precision
//! coefficients and a graded-lexicographic canonical term order. Laurent
//! forms never appear: negative powers are cleared by monomial factors at
//! the call sites that need it.

pub mod cyclo;
pub mod returns;
pub mod text;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of a single monomial `z_0^{e_0} ... z_{d-1}^{e_{d-1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(d: usize) -> Monomial {
        Monomial(vec![0; d])
    }

    pub fn var(d: usize, i: usize) -> Monomial {
        let mut e = vec![0; d];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; `None` if not divisible.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial(e))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| e * k).collect())
    }
}

/// Graded-lexicographic order: total degree first, then lexicographic on the
/// exponent vector.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse integer polynomial in `d` variables. Zero coefficients are never
/// stored; the term map is ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    d: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(d: usize) -> MultiPoly {
        MultiPoly { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: i64) -> MultiPoly {
        let mut p = MultiPoly::zero(d);
        if c != 0 {
            p.terms.insert(Monomial::one(d), BigInt::from(c));
        }
        p
    }

    pub fn one(d: usize) -> MultiPoly {
        MultiPoly::constant(d, 1)
    }

    /// The single variable `z_i`.
    pub fn var(d: usize, i: usize) -> MultiPoly {
        MultiPoly::from_term(Monomial::var(d, i), BigInt::from(1))
    }

    pub fn from_term(m: Monomial, c: BigInt) -> MultiPoly {
        let d = m.0.len();
        let mut p = MultiPoly::zero(d);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: &Monomial) -> MultiPoly {
        MultiPoly::from_term(m.clone(), BigInt::from(1))
    }

    pub fn ambient_vars(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Leading (graded-lex maximal) term.
    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Trailing (graded-lex minimal) term.
    pub fn trailing(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next()
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn neg_in_place(&mut self) {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.d);
        }
        let mut p = MultiPoly::zero(self.d);
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        let mut p = MultiPoly::zero(self.d);
        for (k, a) in &self.terms {
            p.terms.insert(k.mul(m), a.clone());
        }
        p
    }

    /// Sum of squared coefficients (the L^2 norm of the coefficient vector),
    /// exact.
    pub fn l2_coeff_norm(&self) -> BigInt {
        self.terms.values().map(|c| c * c).sum()
    }

    /// Content: gcd of all coefficients (nonnegative), 0 for the zero poly.
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    /// Substitute each variable by a monomial (nonnegative exponents) and
    /// expand. Images must share the polynomial's ambient dimension.
    pub fn substitute_monomials(&self, images: &[Monomial]) -> MultiPoly {
        assert_eq!(images.len(), self.d);
        let out_d = images.first().map(|m| m.0.len()).unwrap_or(self.d);
        let mut p = MultiPoly::zero(out_d);
        for (m, c) in &self.terms {
            let mut acc = Monomial::one(out_d);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&images[i].pow(e));
                }
            }
            p.add_term(acc, c.clone());
        }
        p
    }

    /// Evaluate at `z_j = exp(-2 pi i xi_j)`, summed in canonical term order.
    pub fn evaluate_torus(&self, xi: &[f64]) -> Complex64 {
        assert_eq!(xi.len(), self.d);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut angle = 0.0f64;
            for (i, &e) in m.0.iter().enumerate() {
                angle += e as f64 * xi[i];
            }
            angle = angle.rem_euclid(1.0);
            let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * angle);
            acc += phase * c.to_f64().unwrap_or(f64::MAX);
        }
        acc
    }

    /// Evaluate at an arbitrary complex point.
    pub fn evaluate_complex(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.d);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = Complex64::new(c.to_f64().unwrap_or(f64::MAX), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= z[i].powi(e as i32);
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact division: `self / divisor` if the remainder is zero, else `None`.
    ///
    /// The divisor's leading (graded-lex) coefficient must be a unit so that
    /// quotients stay integral.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lead_m, lead_c) = divisor.leading()?;
        if lead_c.abs() != BigInt::from(1) {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.d);
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.checked_div(lead_m)?;
            let qc = rc * lead_c; // lead_c is +-1, so rc / lead_c == rc * lead_c
            let term = MultiPoly::from_term(qm, qc);
            rem = rem - term.clone() * divisor.clone();
            quot = quot + term;
        }
        Some(quot)
    }

    /// `true` iff `P(z) = +- z^{deg P} P(1/z)` after normalizing out the
    /// lowest monomial. One-variable polynomials only.
    pub fn is_self_reciprocal(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (var, coeffs) = self.to_univariate().ok_or_else(|| {
            Error::Precondition("self-reciprocity test needs a one-variable polynomial".into())
        })?;
        let _ = var;
        // strip trailing zeros (divide out the lowest monomial)
        let lo = coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let norm = &coeffs[lo..];
        let n = norm.len();
        let plus = (0..n).all(|i| norm[i] == norm[n - 1 - i]);
        let minus = (0..n).all(|i| norm[i] == -norm[n - 1 - i].clone());
        Ok(plus || minus)
    }

    /// If at most one variable occurs, return `(var_index, ascending coeffs)`.
    /// A constant reports variable 0.
    pub fn to_univariate(&self) -> Option<(usize, Vec<BigInt>)> {
        let mut var: Option<usize> = None;
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    match var {
                        None => var = Some(i),
                        Some(v) if v == i => {}
                        _ => return None,
                    }
                }
            }
        }
        let v = var.unwrap_or(0);
        let deg = self.degree_in(v) as usize;
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.0[v] as usize] = c.clone();
        }
        Some((v, coeffs))
    }

    /// Build a polynomial in one ambient variable from ascending coefficients.
    pub fn from_univariate(coeffs: &[BigInt]) -> MultiPoly {
        let mut p = MultiPoly::zero(1);
        for (e, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial(vec![e as u32]), c.clone());
        }
        p
    }

    /// Mirror under `z_i -> 1/z_i`, cleared by `z^{caps}`: term `c z^e`
    /// becomes `c z^{caps - e}`. Caps must dominate every exponent.
    pub fn mirror(&self, caps: &[u32]) -> MultiPoly {
        let mut p = MultiPoly::zero(self.d);
        for (m, c) in &self.terms {
            let e: Vec<u32> = m.0.iter().zip(caps).map(|(&a, &cap)| cap - a).collect();
            p.add_term(Monomial(e), c.clone());
        }
        p
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        self.neg_in_place();
        self
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.d);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn arithmetic_basics() {
        let p = MultiPoly::one(2) + z(0);
        let q = MultiPoly::one(2) - z(0);
        let prod = p.clone() * q.clone();
        let expect = MultiPoly::one(2) - z(0) * z(0);
        assert_eq!(prod, expect);
        assert_eq!(p.clone() - p, MultiPoly::zero(2));
    }

    #[test]
    fn grlex_order() {
        // z0^2 z1^3 < z0^3 z1^2 < z0^5 z1 in graded lex
        let a = Monomial(vec![2, 3]);
        let b = Monomial(vec![3, 2]);
        let c = Monomial(vec![5, 1]);
        assert!(a < b && b < c);
    }

    #[test]
    fn exact_division() {
        let p = (MultiPoly::one(2) + z(0)) * (MultiPoly::one(2) + z(1)) * (z(0) + z(1));
        let q = p.div_exact(&(MultiPoly::one(2) + z(1))).unwrap();
        assert_eq!(q, (MultiPoly::one(2) + z(0)) * (z(0) + z(1)));
        assert!(p.div_exact(&(MultiPoly::one(2) - z(1) * z(1))).is_none());
    }

    #[test]
    fn self_reciprocal() {
        // Psi_5 is palindromic
        let psi5 = MultiPoly::from_univariate(&(0..5).map(|_| BigInt::from(1)).collect::<Vec<_>>());
        assert!(psi5.is_self_reciprocal().unwrap());
        // z^2 - z - 1 is not
        let p = MultiPoly::from_univariate(&[BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
        assert!(!p.is_self_reciprocal().unwrap());
        // 1 - z^3 - z^4 - z^5 + z^6 + z^7 is not
        let coeffs: Vec<BigInt> = [1, 0, 0, -1, -1, -1, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert!(!MultiPoly::from_univariate(&coeffs).is_self_reciprocal().unwrap());
    }

    #[test]
    fn l2_norm_and_content() {
        let p = MultiPoly::constant(2, 3) + z(0).scale(&BigInt::from(-6));
        assert_eq!(p.l2_coeff_norm(), BigInt::from(45));
        assert_eq!(p.content(), BigInt::from(3));
    }

    #[test]
    fn substitution_of_monomials() {
        // P(z0, z1) = 1 + z1 with z1 -> z1^2
        let p = MultiPoly::one(2) + z(1);
        let images = vec![Monomial::var(2, 0), Monomial(vec![0, 2])];
        let q = p.substitute_monomials(&images);
        assert_eq!(q, MultiPoly::one(2) + z(1) * z(1));
        // identity images change nothing
        let ident = vec![Monomial::var(2, 0), Monomial::var(2, 1)];
        assert_eq!(q.substitute_monomials(&ident), q);
    }

    #[test]
    fn torus_evaluation() {
        // 1 + z0 at xi0 = 0.5 vanishes
        let p = MultiPoly::one(2) + z(0);
        let v = p.evaluate_torus(&[0.5, 0.123]);
        assert!(v.norm() < 1e-12);
        // values at 0 equal coefficient sums
        let q = MultiPoly::one(2) + z(0) * z(1) + z(0);
        assert!((q.evaluate_torus(&[0.0, 0.0]).re - 3.0).abs() < 1e-12);
    }
}
