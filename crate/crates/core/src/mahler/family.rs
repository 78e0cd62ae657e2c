//! An inductive family of words whose return polynomials factor exactly
//! into extended cyclotomics, plus the palindrome identity test.
//!
//! The family is built by `U_1 = 1^{k_1}` and
//! `U_j = (U_{j-1} 0^{l_{j-1}})^{k_j - 1} U_{j-1}`; its return polynomial
//! satisfies `P_{U,1} = prod_j Psi_{k_j}(z1^{k_1...k_{j-1}} z0^{N_{j-1}})`
//! with `N_1 = l_1`, `N_j = N_{j-1} k_j + l_j - l_{j-1}`.

use super::certify::CyclotomicCertificate;
use crate::error::{Error, Result};
use crate::poly::cyclo::psi_at_monomial;
use crate::poly::returns::return_polynomial;
use crate::poly::{Monomial, MultiPoly};
use crate::substitution::Word;

/// Build the family word and its certified return-polynomial factorization.
///
/// `k` has length `n >= 1` with `k_1 >= 1` and `k_j >= 2` for `j >= 2`;
/// `l` has length `n - 1` with `l_1 >= 1` and `l_j != l_{j-1}`.
pub fn special_family(k: &[u32], l: &[u32]) -> Result<(Word, MultiPoly, CyclotomicCertificate)> {
    let n = k.len();
    if n == 0 {
        return Err(Error::Precondition("k must be nonempty".into()));
    }
    if l.len() != n - 1 {
        return Err(Error::Precondition(format!(
            "l must have length {} (one less than k), got {}",
            n - 1,
            l.len()
        )));
    }
    if k[0] < 1 || k[1..].iter().any(|&kj| kj < 2) {
        return Err(Error::Precondition(
            "need k_1 >= 1 and k_j >= 2 for j >= 2".into(),
        ));
    }
    if n > 1 && l[0] < 1 {
        return Err(Error::Precondition("need l_1 >= 1".into()));
    }
    if l.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("need l_j != l_{j-1}".into()));
    }

    // the word
    let mut u: Vec<u8> = vec![1; k[0] as usize];
    for j in 1..n {
        let block = [u.clone(), vec![0; l[j - 1] as usize]].concat();
        let mut next = Vec::new();
        for _ in 0..k[j] - 1 {
            next.extend_from_slice(&block);
        }
        next.extend_from_slice(&u);
        u = next;
    }
    let word = Word(u);

    // the factor product: Psi_{k_j} at z1^{k_1...k_{j-1}} z0^{N_{j-1}}
    let mut product = MultiPoly::one(2);
    let mut factors: Vec<(u64, Vec<i64>)> = Vec::new();
    let mut kprod: u64 = 1; // k_1 ... k_{j-1}
    let mut prev_n: i64 = 0; // N_{j-1}, with N_0 = 0
    for j in 0..n {
        let mono = Monomial(vec![prev_n as u32, kprod as u32]);
        product = product * psi_at_monomial(k[j], &mono);
        // Psi_k(t) = prod_{m | k, m > 1} Phi_m(t)
        for m in 2..=k[j] as u64 {
            if k[j] as u64 % m == 0 {
                factors.push((m, vec![prev_n, kprod as i64]));
            }
        }
        // advance N: N_1 = l_1; N_j = N_{j-1} k_j + l_j - l_{j-1}
        if j + 1 < n {
            prev_n = if j == 0 {
                l[0] as i64
            } else {
                prev_n * k[j] as i64 + l[j] as i64 - l[j - 1] as i64
            };
            if prev_n < 0 {
                return Err(Error::Precondition("internal: negative N in family recursion".into()));
            }
            kprod *= k[j] as u64;
        }
    }

    // the claimed identity must hold symbolically
    let p = return_polynomial(&word, 1, 2);
    if p != product {
        return Err(Error::Precondition(
            "family identity failed symbolically; parameters outside the valid range".into(),
        ));
    }
    let cert = CyclotomicCertificate { factors, sign: 1, monomial: vec![0, 0] };
    if cert.product(2) != p {
        return Err(Error::Precondition("internal: certificate recheck failed".into()));
    }
    Ok((word, p, cert))
}

/// Palindrome flag plus the symbolic mirror identity
/// `P_{U,1}(z0, z1) = z0^{|U|_0} z1^{|U|_1 - 1} P_{U,1}(1/z0, 1/z1)`.
///
/// `U` must start and end with the letter 1. Returns
/// `(is_palindrome, identity_holds)`; the two always agree.
pub fn palindrome_check(u: &Word) -> Result<(bool, bool)> {
    if u.0.is_empty() || *u.0.first().unwrap() != 1 || *u.0.last().unwrap() != 1 {
        return Err(Error::Precondition(
            "palindrome check needs a word starting and ending with 1".into(),
        ));
    }
    if u.0.iter().any(|&a| a > 1) {
        return Err(Error::Precondition("palindrome check is for two-letter words".into()));
    }
    let is_pal = u.0.iter().eq(u.0.iter().rev());
    let p = return_polynomial(u, 1, 2);
    let zeros = u.0.iter().filter(|&&a| a == 0).count() as u32;
    let ones = u.0.iter().filter(|&&a| a == 1).count() as u32;
    let mirrored = p.mirror(&[zeros, ones - 1]);
    Ok((is_pal, mirrored == p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_poly;

    #[test]
    fn base_case_is_run_of_ones() {
        let (u, p, cert) = special_family(&[3], &[]).unwrap();
        assert_eq!(u.0, vec![1, 1, 1]);
        assert_eq!(p, parse_poly("1 + z1 + z1^2", 2).unwrap());
        assert_eq!(cert.factors, vec![(3, vec![0, 1])]);
    }

    #[test]
    fn worked_example_a() {
        // n=3, k=(2,2,3), l=(1,0): U = (11011)^3
        let (u, p, _) = special_family(&[2, 2, 3], &[1, 0]).unwrap();
        let block = [1u8, 1, 0, 1, 1];
        let expect: Vec<u8> = block.iter().cycle().take(15).copied().collect();
        assert_eq!(u.0, expect);
        let prod = parse_poly("1 + z1", 2).unwrap()
            * parse_poly("1 + z0*z1^2", 2).unwrap()
            * parse_poly("1 + z0*z1^4 + z0^2*z1^8", 2).unwrap();
        assert_eq!(p, prod);
    }

    #[test]
    fn worked_example_b() {
        // n=4, k=(1,2,2,2), l=(2,1,3): U = 1001 0 1001 000 1001 0 1001
        let (u, p, _) = special_family(&[1, 2, 2, 2], &[2, 1, 3]).unwrap();
        let expect: Vec<u8> =
            "100101001000100101001".chars().map(|c| c as u8 - b'0').collect();
        assert_eq!(u.0, expect);
        let prod = parse_poly("1 + z0^2*z1", 2).unwrap()
            * parse_poly("1 + z0^3*z1^2", 2).unwrap()
            * parse_poly("1 + z0^8*z1^4", 2).unwrap();
        assert_eq!(p, prod);
    }

    #[test]
    fn parameter_validation() {
        assert!(special_family(&[], &[]).is_err());
        assert!(special_family(&[2, 1], &[1]).is_err()); // k_2 < 2
        assert!(special_family(&[2, 2], &[0]).is_err()); // l_1 < 1
        assert!(special_family(&[2, 2, 2], &[1, 1]).is_err()); // l_2 == l_1
        assert!(special_family(&[2, 2], &[]).is_err()); // length mismatch
    }

    #[test]
    fn palindrome_identity_both_directions() {
        // Example (a) word is a palindrome
        let (u, _, _) = special_family(&[2, 2, 3], &[1, 0]).unwrap();
        assert_eq!(palindrome_check(&u).unwrap(), (true, true));
        // a non-palindrome: 1011101101 starts/ends with 1, reversed differs
        let w = Word("1011101101".chars().map(|c| c as u8 - b'0').collect());
        assert_eq!(palindrome_check(&w).unwrap(), (false, false));
        // precondition: must end with 1
        assert!(palindrome_check(&Word(vec![1, 1, 0])).is_err());
    }
}
