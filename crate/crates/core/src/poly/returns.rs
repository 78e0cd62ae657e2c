//! Return-word polynomials and the symbolic cocycle matrix.
//!
//! For a word `u` and a letter `a`, the return polynomial records, for each
//! occurrence of `a` in `u`, the abelianization of the prefix strictly
//! before it: `P_{u,a}(z) = sum_{u_j = a} z^{u_1...u_{j-1}}`. The matrix
//! `M(b,c) = P_{image(b),c}` is the symbolic form of the twisted cocycle.

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::substitution::{Substitution, Word};
use num_bigint::BigInt;

/// `P_{u,a}(z)` in `d` variables.
pub fn return_polynomial(u: &Word, a: u8, d: usize) -> MultiPoly {
    let mut poly = MultiPoly::zero(d);
    let mut prefix = vec![0u32; d];
    for &letter in &u.0 {
        if letter == a {
            poly.add_term(Monomial(prefix.clone()), BigInt::from(1));
        }
        prefix[letter as usize] += 1;
    }
    poly
}

/// Abelianization `z^w` of a word as a monomial.
pub fn word_monomial(w: &Word, d: usize) -> Monomial {
    let mut e = vec![0u32; d];
    for &letter in &w.0 {
        e[letter as usize] += 1;
    }
    Monomial(e)
}

/// Square matrix of polynomials, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub d: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(d: usize, entries: Vec<MultiPoly>) -> PolyMatrix {
        assert_eq!(entries.len(), d * d);
        PolyMatrix { d, entries }
    }

    pub fn get(&self, b: usize, c: usize) -> &MultiPoly {
        &self.entries[b * self.d + c]
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.d, rhs.d);
        let d = self.d;
        let mut entries = Vec::with_capacity(d * d);
        for b in 0..d {
            for c in 0..d {
                let mut acc = MultiPoly::zero(d);
                for k in 0..d {
                    acc = acc + self.get(b, k).clone() * rhs.get(k, c).clone();
                }
                entries.push(acc);
            }
        }
        PolyMatrix { d, entries }
    }

    /// Substitute each variable by a monomial in every entry.
    pub fn substitute(&self, images: &[Monomial]) -> PolyMatrix {
        PolyMatrix {
            d: self.d,
            entries: self.entries.iter().map(|p| p.substitute_monomials(images)).collect(),
        }
    }

    /// Exact determinant by Laplace expansion; supported up to 4x4.
    pub fn det(&self) -> Result<MultiPoly> {
        if self.d > 4 {
            return Err(Error::UnsupportedDimension(self.d, "symbolic determinant"));
        }
        Ok(det_rec(&self.entries, self.d))
    }
}

fn det_rec(entries: &[MultiPoly], n: usize) -> MultiPoly {
    let vars = entries[0].ambient_vars();
    if n == 1 {
        return entries[0].clone();
    }
    let mut acc = MultiPoly::zero(vars);
    for col in 0..n {
        let lead = &entries[col];
        if lead.is_zero() {
            continue;
        }
        let mut minor = Vec::with_capacity((n - 1) * (n - 1));
        for r in 1..n {
            for c in 0..n {
                if c != col {
                    minor.push(entries[r * n + c].clone());
                }
            }
        }
        let cofactor = lead.clone() * det_rec(&minor, n - 1);
        if col % 2 == 0 {
            acc = acc + cofactor;
        } else {
            acc = acc - cofactor;
        }
    }
    acc
}

/// The symbolic cocycle matrix `M(b,c) = P_{image(b),c}`.
pub fn cocycle_matrix_symbolic(sub: &Substitution) -> PolyMatrix {
    let d = sub.alphabet_size();
    let entries = (0..d)
        .flat_map(|b| {
            let image = sub.image(b as u8);
            (0..d).map(move |c| return_polynomial(image, c as u8, d)).collect::<Vec<_>>()
        })
        .collect();
    PolyMatrix::new(d, entries)
}

/// Monomial images of the variables under the abelianized substitution:
/// variable `z_j` maps to `z^{image(j)}`. This realizes the endomorphism
/// `xi -> S^T xi` on the symbolic side.
pub fn substitution_monomials(sub: &Substitution) -> Vec<Monomial> {
    sub.images().iter().map(|w| word_monomial(w, sub.alphabet_size())).collect()
}

/// `p_zeta = det M_zeta` for a substitution, exact.
pub fn det_poly(sub: &Substitution) -> Result<MultiPoly> {
    cocycle_matrix_symbolic(sub).det()
}

/// The pair `(Q_0, Q_1)` for a two-letter substitution:
/// `Q_0 = P_{z(01),0} - P_{z(10),0}` and `Q_1 = P_{z(10),1} - P_{z(01),1}`.
/// Both share the Mahler measure of `det M_zeta`.
pub fn q_polynomials(sub: &Substitution) -> Result<(MultiPoly, MultiPoly)> {
    if sub.alphabet_size() != 2 {
        return Err(Error::UnsupportedDimension(sub.alphabet_size(), "Q-polynomials"));
    }
    let w01 = Word([sub.image(0).0.clone(), sub.image(1).0.clone()].concat());
    let w10 = Word([sub.image(1).0.clone(), sub.image(0).0.clone()].concat());
    let q0 = return_polynomial(&w01, 0, 2) - return_polynomial(&w10, 0, 2);
    let q1 = return_polynomial(&w10, 1, 2) - return_polynomial(&w01, 1, 2);
    Ok((q0, q1))
}

/// Strip common affixes from a two-letter substitution, tracking the exact
/// monomial factor that relates the determinants.
///
/// If one image is a proper prefix of the other, say `image(x) = W U` with
/// `W = image(y)`, then `det M = z^W det M'` where the reduced substitution
/// sends `x -> U`, `y -> W`. If instead `image(x) = U W`, the factor is 1.
/// Reduction repeats until neither case applies. Returns the reduced
/// substitution and the accumulated monomial factor.
pub fn reduce_common_affix(sub: &Substitution) -> Result<(Substitution, Monomial)> {
    if sub.alphabet_size() != 2 {
        return Err(Error::UnsupportedDimension(sub.alphabet_size(), "affix reduction"));
    }
    let mut images = [sub.image(0).0.clone(), sub.image(1).0.clone()];
    let mut factor = Monomial::one(2);
    loop {
        let mut reduced = false;
        for x in 0..2usize {
            let y = 1 - x;
            let (long, short) = (&images[x], &images[y]);
            if long.len() <= short.len() {
                continue;
            }
            if long.starts_with(short.as_slice()) {
                let u = long[short.len()..].to_vec();
                factor = factor.mul(&word_monomial(&Word(short.clone()), 2));
                images[x] = u;
                reduced = true;
                break;
            }
            if long.ends_with(short.as_slice()) {
                let u = long[..long.len() - short.len()].to_vec();
                images[x] = u;
                reduced = true;
                break;
            }
        }
        if !reduced {
            break;
        }
    }
    let reduced = Substitution::new(vec![Word(images[0].clone()), Word(images[1].clone())])?;
    Ok((reduced, factor))
}
