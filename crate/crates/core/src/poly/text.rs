//! Textual form of polynomials: `1 - z0^3 + 2*z0^5*z1`.
//!
//! Terms print in ascending graded-lex order; unit coefficients and unit
//! exponents are elided. The parser accepts the same grammar with arbitrary
//! whitespace around operators.

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::fmt;

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if !mag.is_one() || m.is_one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "z{i}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

/// Parse a polynomial in `d` variables from the display grammar.
pub fn parse_poly(s: &str, d: usize) -> Result<MultiPoly> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial text".into()));
    }
    let mut poly = MultiPoly::zero(d);
    // split into signed terms at top level
    let mut sign = 1i64;
    let mut rest = s;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r.trim_start();
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r.trim_start();
    }
    loop {
        let split = rest.find(|ch| ch == '+' || ch == '-');
        let (term, tail) = match split {
            Some(i) => (&rest[..i], &rest[i..]),
            None => (rest, ""),
        };
        let (coeff, mono) = parse_term(term.trim(), d)?;
        poly.add_term(mono, coeff * BigInt::from(sign));
        if tail.is_empty() {
            break;
        }
        sign = if tail.starts_with('-') { -1 } else { 1 };
        rest = tail[1..].trim_start();
        if rest.is_empty() {
            return Err(Error::Parse(format!("dangling sign in polynomial: {s}")));
        }
    }
    Ok(poly)
}

fn parse_term(term: &str, d: usize) -> Result<(BigInt, Monomial)> {
    if term.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut coeff = BigInt::one();
    let mut exps = vec![0u32; d];
    for factor in term.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in term: {term}")));
        }
        if let Some(varpart) = factor.strip_prefix('z') {
            let (idx_s, exp_s) = match varpart.split_once('^') {
                Some((a, b)) => (a, Some(b)),
                None => (varpart, None),
            };
            let idx: usize = idx_s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable index: {factor}")))?;
            if idx >= d {
                return Err(Error::Parse(format!("variable z{idx} outside {d} variables")));
            }
            let exp: u32 = match exp_s {
                Some(e) => e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent: {factor}")))?,
                None => 1,
            };
            exps[idx] += exp;
        } else {
            let c: BigInt = factor
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient: {factor}")))?;
            coeff *= c;
        }
    }
    Ok((coeff, Monomial(exps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_canonical_form() {
        let p = parse_poly("1 - z0^3 - z0^3*z1 - z0^3*z1^2 + z0^5*z1 + z0^5*z1^2", 2).unwrap();
        assert_eq!(p.to_string(), "1 - z0^3 - z0^3*z1 - z0^3*z1^2 + z0^5*z1 + z0^5*z1^2");
    }

    #[test]
    fn round_trip_assorted() {
        for s in ["0", "-z0", "3", "-2*z1^4", "z0*z1 - 1", "2 + z0 - 5*z0^2*z1^3"] {
            let p = parse_poly(s, 2).unwrap();
            let q = parse_poly(&p.to_string(), 2).unwrap();
            assert_eq!(p, q, "round trip of {s}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_poly("", 2).is_err());
        assert!(parse_poly("z5", 2).is_err());
        assert!(parse_poly("1 + ", 2).is_err());
        assert!(parse_poly("z0^x", 2).is_err());
    }

    #[test]
    fn zero_displays_and_parses() {
        let p = parse_poly("0", 2).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
        // cancelling terms also give zero
        let q = parse_poly("z0 - z0", 2).unwrap();
        assert!(q.is_zero());
    }
}
