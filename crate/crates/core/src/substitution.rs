//! Substitutions on a finite alphabet, their matrices, and the spectral /
//! arithmetic preconditions (primitivity, ergodicity, irreducibility, Pisot)
//! used by the rest of the library.
//!
//! Letters are 0-based integers `0..d`. A substitution maps every letter to a
//! nonempty word and extends to words by concatenation.

use crate::error::{Error, Result};
use crate::poly::cyclo::cyclotomic_coeffs;
use crate::roots::real_and_complex_moduli;
use serde::Serialize;
use std::fmt;

/// A finite word over the alphabet `{0, ..., d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&c| c == letter).count()
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// Parse a word from ASCII digits, e.g. `"01001"`.
    pub fn parse(text: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let digit = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("invalid letter {ch:?} in word {text:?}")))?;
            if digit > 9 {
                return Err(Error::Parse(format!("letter {digit} out of range")));
            }
            letters.push(digit as u8);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A substitution: alphabet size `d >= 2` plus the image word of each letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    d: usize,
    images: Vec<Word>,
}

impl Substitution {
    /// Build a substitution, validating the invariants: `d >= 2`, every image
    /// nonempty, every letter of every image below `d`.
    pub fn new(images: Vec<Word>) -> Result<Substitution> {
        let d = images.len();
        if d < 2 {
            return Err(Error::InvalidSubstitution(format!(
                "alphabet size {d} violates d >= 2"
            )));
        }
        if d > 9 {
            return Err(Error::InvalidSubstitution(format!(
                "alphabet size {d} exceeds single-digit letters"
            )));
        }
        for (a, w) in images.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::InvalidSubstitution(format!("image of {a} is empty")));
            }
            if let Some(&bad) = w.0.iter().find(|&&c| (c as usize) >= d) {
                return Err(Error::InvalidSubstitution(format!(
                    "image of {a} contains letter {bad} >= d = {d}"
                )));
            }
        }
        Ok(Substitution { d, images })
    }

    /// Parse the grammar `a->w;b->w;...` with each letter `0..d-1` appearing
    /// exactly once on the left.
    pub fn parse(text: &str) -> Result<Substitution> {
        let rules: Vec<&str> = text.split(';').map(str::trim).collect();
        let d = rules.len();
        let mut images: Vec<Option<Word>> = vec![None; d];
        for rule in &rules {
            let (lhs, rhs) = rule
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("rule {rule:?} is missing '->'")))?;
            let lhs = lhs.trim();
            let letter: usize = lhs
                .parse()
                .map_err(|_| Error::Parse(format!("rule {rule:?} has a non-letter lhs")))?;
            if letter >= d {
                return Err(Error::Parse(format!(
                    "rule {rule:?}: letter {letter} >= alphabet size {d}"
                )));
            }
            if images[letter].is_some() {
                return Err(Error::Parse(format!("duplicate rule for letter {letter}")));
            }
            let w = Word::parse(rhs.trim())?;
            if w.is_empty() {
                return Err(Error::Parse(format!("rule {rule:?} has an empty image")));
            }
            images[letter] = Some(w);
        }
        let images: Vec<Word> = images
            .into_iter()
            .enumerate()
            .map(|(a, w)| w.ok_or_else(|| Error::Parse(format!("missing rule for letter {a}"))))
            .collect::<Result<_>>()?;
        Substitution::new(images)
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    /// Image of a single letter.
    pub fn image(&self, a: u8) -> &Word {
        &self.images[a as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Apply to a word: concatenation of the images of its letters.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &a in &w.0 {
            out.extend_from_slice(&self.images[a as usize].0);
        }
        Word(out)
    }

    /// Composition: `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Substitution) -> Result<Substitution> {
        if self.d != other.d {
            return Err(Error::AlphabetMismatch(self.d, other.d));
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        Substitution::new(images)
    }

    /// n-fold composition, `n >= 1`. Guards against runaway image growth.
    pub fn power(&self, n: u32) -> Result<Substitution> {
        if n == 0 {
            return Err(Error::Precondition("power requires n >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc)?;
            let total: usize = acc.images.iter().map(Word::len).sum();
            if total > 10_000_000 {
                return Err(Error::ResourceCap(format!(
                    "total image length {total} of the power exceeds 10^7"
                )));
            }
        }
        Ok(acc)
    }

    /// The substitution matrix: `S(i, j)` counts letter `i` in the image of `j`.
    pub fn matrix(&self) -> IntMatrix {
        let d = self.d;
        let mut entries = vec![0i64; d * d];
        for (j, w) in self.images.iter().enumerate() {
            for &i in &w.0 {
                entries[(i as usize) * d + j] += 1;
            }
        }
        IntMatrix { d, entries }
    }

    /// Canonical text form in the `a->w;b->w` grammar.
    pub fn to_text(&self) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(a, w)| format!("{a}->{w}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Relabel by exchanging letters 0 and 1 (2-letter substitutions only).
    pub fn swap_letters(&self) -> Result<Substitution> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension(self.d, "d = 2"));
        }
        let flip = |w: &Word| Word(w.0.iter().map(|&c| 1 - c).collect());
        Substitution::new(vec![flip(&self.images[1]), flip(&self.images[0])])
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Square integer matrix (row-major), `d <= 4` for all spectral routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    d: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(d: usize, entries: Vec<i64>) -> Result<IntMatrix> {
        if entries.len() != d * d {
            return Err(Error::Precondition(format!(
                "expected {} entries for a {d}x{d} matrix, got {}",
                d * d,
                entries.len()
            )));
        }
        Ok(IntMatrix { d, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.d + j]
    }

    pub fn transpose(&self) -> IntMatrix {
        let d = self.d;
        let mut entries = vec![0i64; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        IntMatrix { d, entries }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.d, other.d);
        let d = self.d;
        let mut entries = vec![0i64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        IntMatrix { d, entries }
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.d)
            .map(|i| self.entries[i * self.d..(i + 1) * self.d].to_vec())
            .collect()
    }

    /// Exact determinant by cofactor expansion (d <= 4).
    pub fn det(&self) -> i64 {
        fn det_rec(d: usize, m: &[i128]) -> i128 {
            match d {
                1 => m[0],
                2 => m[0] * m[3] - m[1] * m[2],
                _ => {
                    let mut acc = 0i128;
                    for j in 0..d {
                        let mut minor = Vec::with_capacity((d - 1) * (d - 1));
                        for r in 1..d {
                            for c in 0..d {
                                if c != j {
                                    minor.push(m[r * d + c]);
                                }
                            }
                        }
                        let term = m[j] * det_rec(d - 1, &minor);
                        if j % 2 == 0 {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    acc
                }
            }
        }
        let wide: Vec<i128> = self.entries.iter().map(|&x| x as i128).collect();
        det_rec(self.d, &wide) as i64
    }

    /// Coefficients of the characteristic polynomial `det(tI - A)`, ascending
    /// in `t` (monic). Computed exactly from principal minors; d <= 4.
    pub fn char_poly(&self) -> Vec<i128> {
        let d = self.d;
        assert!(d <= 4, "characteristic polynomial implemented for d <= 4");
        // e_k = sum of k x k principal minors; char poly coeff of t^{d-k} is (-1)^k e_k.
        let mut coeffs = vec![0i128; d + 1];
        coeffs[d] = 1;
        for k in 1..=d {
            let mut ek = 0i128;
            for subset in k_subsets(d, k) {
                let mut minor = Vec::with_capacity(k * k);
                for &r in &subset {
                    for &c in &subset {
                        minor.push(self.entries[r * d + c] as i128);
                    }
                }
                ek += det_small(k, &minor);
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            coeffs[d - k] = sign * ek;
        }
        coeffs
    }

    /// True iff some power up to the Wielandt bound `(d-1)^2 + 1` is positive.
    pub fn is_primitive(&self) -> bool {
        let d = self.d;
        if self.entries.iter().any(|&x| x < 0) {
            return false;
        }
        let bound = (d - 1) * (d - 1) + 1;
        // boolean matrix powers avoid overflow
        let mut b: Vec<bool> = self.entries.iter().map(|&x| x > 0).collect();
        for _ in 0..bound {
            if b.iter().all(|&x| x) {
                return true;
            }
            let mut next = vec![false; d * d];
            for i in 0..d {
                for k in 0..d {
                    if b[i * d + k] {
                        for j in 0..d {
                            if self.entries[k * d + j] > 0 {
                                next[i * d + j] = true;
                            }
                        }
                    }
                }
            }
            if next == b {
                return false; // reached a fixed point without full positivity
            }
            b = next;
        }
        b.iter().all(|&x| x)
    }
}

/// All k-element subsets of 0..n in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        out.push(subset.clone());
        // advance to the next combination
        let mut i = k;
        while i > 0 {
            i -= 1;
            if subset[i] + 1 <= n - (k - i) {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

fn det_small(d: usize, m: &[i128]) -> i128 {
    match d {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        4 => {
            let mut acc = 0i128;
            for j in 0..4 {
                let mut minor = Vec::with_capacity(9);
                for r in 1..4 {
                    for c in 0..4 {
                        if c != j {
                            minor.push(m[r * 4 + c]);
                        }
                    }
                }
                let term = m[j] * det_small(3, &minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        _ => unreachable!(),
    }
}

/// Spectral and arithmetic flags of a substitution matrix.
#[derive(Debug, Clone, Serialize)]
pub struct MatrixDiagnostics {
    pub det: i64,
    /// Spectral radius (Perron-Frobenius eigenvalue for primitive matrices),
    /// accurate to >= 10 significant digits.
    pub perron: f64,
    /// Second-largest eigenvalue modulus.
    pub second_modulus: f64,
    pub primitive: bool,
    /// No eigenvalue is a root of unity (exact cyclotomic gcd test); this is
    /// the ergodicity criterion for the induced toral endomorphism.
    pub ergodic: bool,
    pub irreducible_over_q: bool,
    /// Perron > 1 and all other eigenvalue moduli < 1.
    pub pisot: bool,
    /// +1 or -1 is an eigenvalue.
    pub has_unit_eigenvalue: bool,
    pub degenerate: bool,
}

/// Compute diagnostics of a square integer matrix (d <= 4).
///
/// The root-of-unity (ergodicity) test is exact: the characteristic
/// polynomial is tested for divisibility by every cyclotomic `Phi_m` with
/// `phi(m) <= d`. Eigenvalue moduli use closed form for d = 2 and a refined
/// polynomial root solve otherwise. Perron comparisons elsewhere carry an
/// explicit margin; here a fixed 1e-8 margin separates moduli from 1.
pub fn diagnostics(m: &IntMatrix) -> MatrixDiagnostics {
    const MARGIN: f64 = 1e-8;
    let d = m.dim();
    let cp = m.char_poly();
    let det = m.det();

    let moduli_sorted = eigen_moduli(&cp);
    let perron = moduli_sorted[0];
    let second_modulus = if d >= 2 { moduli_sorted[1] } else { 0.0 };

    let has_unit_eigenvalue = eval_int_poly(&cp, 1) == 0 || eval_int_poly(&cp, -1) == 0;
    let ergodic = !divisible_by_any_cyclotomic(&cp, d);
    let irreducible_over_q = irreducible_over_rationals(&cp);
    let pisot = perron > 1.0 + MARGIN
        && moduli_sorted[1..].iter().all(|&r| r < 1.0 - MARGIN)
        && det != 0;

    MatrixDiagnostics {
        det,
        perron,
        second_modulus,
        primitive: m.is_primitive(),
        ergodic,
        irreducible_over_q,
        pisot,
        has_unit_eigenvalue,
        degenerate: det == 0,
    }
}

fn eval_int_poly(coeffs: &[i128], x: i128) -> i128 {
    let mut acc = 0i128;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Eigenvalue moduli sorted nonincreasing.
fn eigen_moduli(cp: &[i128]) -> Vec<f64> {
    let deg = cp.len() - 1;
    if deg == 2 {
        // closed form for t^2 + b t + c
        let b = cp[1] as f64;
        let c = cp[0] as f64;
        let disc = b * b - 4.0 * c;
        let mut moduli = if disc >= 0.0 {
            let s = disc.sqrt();
            vec![((-b + s) / 2.0).abs(), ((-b - s) / 2.0).abs()]
        } else {
            let r = c.abs().sqrt();
            vec![r, r]
        };
        moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
        return moduli;
    }
    let coeffs: Vec<f64> = cp.iter().map(|&c| c as f64).collect();
    let mut moduli = real_and_complex_moduli(&coeffs);
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    while moduli.len() < deg {
        moduli.push(0.0);
    }
    moduli
}

/// Exact test: does any cyclotomic `Phi_m` with `phi(m) <= d` divide `cp`?
fn divisible_by_any_cyclotomic(cp: &[i128], d: usize) -> bool {
    // all m with phi(m) <= 4: 1,2,3,4,5,6,8,10,12
    let candidates: &[(usize, usize)] = &[
        (1, 1),
        (2, 1),
        (3, 2),
        (4, 2),
        (6, 2),
        (5, 4),
        (8, 4),
        (10, 4),
        (12, 4),
    ];
    for &(m, phi) in candidates {
        if phi <= d && divides_exactly(&cyclotomic_coeffs(m as u64), cp) {
            return true;
        }
    }
    false
}

/// Exact division test of integer polynomials (ascending coefficients,
/// divisor monic).
fn divides_exactly(divisor: &[i128], dividend: &[i128]) -> bool {
    let dd = divisor.len() - 1;
    let nd = dividend.len() - 1;
    if dd > nd {
        return false;
    }
    let mut rem: Vec<i128> = dividend.to_vec();
    for k in (dd..=nd).rev() {
        let q = rem[k]; // divisor is monic
        if q != 0 {
            for i in 0..=dd {
                rem[k - dd + i] -= q * divisor[i];
            }
        }
    }
    rem.iter().all(|&c| c == 0)
}

/// Irreducibility over Q of the (monic, integer) characteristic polynomial.
///
/// Degree 2: no integer root. Degree 3: no rational (hence integer) root.
/// Degree 4: no integer root and no factorization into two monic integer
/// quadratics.
fn irreducible_over_rationals(cp: &[i128]) -> bool {
    let deg = cp.len() - 1;
    if cp[0] == 0 {
        return false; // t divides
    }
    let has_int_root = integer_divisors(cp[0])
        .iter()
        .any(|&r| eval_int_poly(cp, r) == 0 || eval_int_poly(cp, -r) == 0);
    match deg {
        2 | 3 => !has_int_root,
        4 => {
            if has_int_root {
                return false;
            }
            // (t^2 + p t + q)(t^2 + r t + s) with integer p,q,r,s
            let a = cp[3];
            let b = cp[2];
            let c = cp[1];
            let e = cp[0];
            for q in integer_divisors(e).iter().flat_map(|&q| [q, -q]) {
                if e % q != 0 {
                    continue;
                }
                let s = e / q;
                // p + r = a, pr = b - q - s, p s + q r = c
                let pr = b - q - s;
                let disc = a * a - 4 * pr;
                if disc < 0 {
                    continue;
                }
                let sq = (disc as f64).sqrt().round() as i128;
                if sq * sq != disc {
                    continue;
                }
                for p in [(a + sq) / 2, (a - sq) / 2] {
                    if (a + sq) % 2 != 0 && (a - sq) % 2 != 0 {
                        continue;
                    }
                    let r = a - p;
                    if p * r == pr && p * s + q * r == c {
                        return false;
                    }
                }
            }
            true
        }
        _ => false,
    }
}

fn integer_divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    if n == 0 {
        return vec![1];
    }
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Substitution {
        Substitution::parse("0->01;1->0").unwrap()
    }

    #[test]
    fn parse_fibonacci() {
        let s = fib();
        assert_eq!(s.alphabet_size(), 2);
        assert_eq!(s.image(0).to_string(), "01");
        assert_eq!(s.image(1).to_string(), "0");
    }

    #[test]
    fn parse_three_letter_example() {
        let s = Substitution::parse("0->01200;1->120;2->110").unwrap();
        assert_eq!(s.alphabet_size(), 3);
        assert_eq!(s.image(0).to_string(), "01200");
    }

    #[test]
    fn parse_rejects_degenerate_alphabet() {
        assert!(Substitution::parse("0->0").is_err());
    }

    #[test]
    fn parse_errors_name_the_rule() {
        assert!(matches!(
            Substitution::parse("0->01;1->"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Substitution::parse("0->01;0->0"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Substitution::parse("0->02;1->0"),
            Err(Error::InvalidSubstitution(_))
        ));
        assert!(matches!(
            Substitution::parse("0->01"),
            Err(Error::InvalidSubstitution(_))
        ));
    }

    #[test]
    fn apply_concatenates_images() {
        let s = fib();
        assert_eq!(s.apply(&Word::parse("0").unwrap()).to_string(), "01");
        assert_eq!(s.apply(&Word::parse("01").unwrap()).to_string(), "010");
        let mut w = Word::parse("0").unwrap();
        for _ in 0..3 {
            w = s.apply(&w);
        }
        assert_eq!(w.to_string(), "01001");
        assert_eq!(w.len(), 5);
    }

    #[test]
    fn compose_and_power() {
        let s = fib();
        let s2 = s.compose(&s).unwrap();
        assert_eq!(s2.image(0).to_string(), "010");
        let s3 = s.power(3).unwrap();
        assert_eq!(s3.image(0).to_string(), "01001");
        assert_eq!(s3.image(1).to_string(), "010");
        assert_eq!(s.power(1).unwrap(), s);
        assert!(s.power(0).is_err());

        let id = Substitution::parse("0->0;1->1").unwrap();
        assert_eq!(s.compose(&id).unwrap(), s);

        // matrix of the composition = product of matrices
        let m = s.matrix();
        assert_eq!(s2.matrix(), m.mul(&m));
    }

    #[test]
    fn fibonacci_lengths_follow_fibonacci_numbers() {
        let s = fib();
        let fibs = [2u64, 3, 5, 8, 13, 21, 34, 55];
        for (n, &expect) in fibs.iter().enumerate() {
            let p = s.power(n as u32 + 1).unwrap();
            assert_eq!(p.image(0).len() as u64, expect);
        }
    }

    #[test]
    fn substitution_matrix_shapes() {
        let s = fib();
        assert_eq!(s.matrix().rows(), vec![vec![1, 1], vec![1, 0]]);

        let e22 = Substitution::parse("0->01200;1->120;2->110").unwrap();
        let st = e22.matrix().transpose();
        assert_eq!(
            st.rows(),
            vec![vec![3, 1, 1], vec![1, 1, 1], vec![1, 2, 0]]
        );

        let perm = Substitution::parse("0->1;1->0").unwrap();
        assert_eq!(perm.matrix().rows(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn diagnostics_fibonacci() {
        let diag = diagnostics(&fib().matrix());
        assert_eq!(diag.det, -1);
        assert!((diag.perron - 1.618033988749895).abs() < 1e-10);
        assert!(diag.pisot);
        assert!(diag.ergodic);
        assert!(diag.irreducible_over_q);
        assert!(diag.primitive);
        assert!(!diag.has_unit_eigenvalue);
    }

    #[test]
    fn diagnostics_sqrt7_matrix() {
        // S^T = [[2,3],[2,0]]; same spectrum as S
        let m = IntMatrix::new(2, vec![2, 3, 2, 0]).unwrap().transpose();
        let diag = diagnostics(&m);
        assert_eq!(diag.det, -6);
        assert!((diag.perron - (1.0 + 7f64.sqrt())).abs() < 1e-9);
        assert!(diag.ergodic);
        assert!(!diag.pisot);
    }

    #[test]
    fn diagnostics_identity() {
        let m = IntMatrix::new(2, vec![1, 0, 0, 1]).unwrap();
        let diag = diagnostics(&m);
        assert!(!diag.ergodic);
        assert!(diag.has_unit_eigenvalue);
    }

    #[test]
    fn char_poly_three_letter() {
        let s = Substitution::parse("0->01200;1->120;2->110").unwrap();
        let m = s.matrix();
        let cp = m.char_poly();
        // det(tI - A) at t=0 is (-1)^d det(A)
        assert_eq!(cp[0], (m.det() as i128) * if m.dim() % 2 == 1 { -1 } else { 1 });
        assert_eq!(cp[3], 1);
        let diag = diagnostics(&m);
        assert!(diag.primitive);
    }

    #[test]
    fn primitivity_matches_brute_force() {
        // random-ish small battery with entries in {0,1,2}
        let cases: Vec<Vec<i64>> = vec![
            vec![1, 1, 1, 0],
            vec![0, 1, 1, 0],
            vec![2, 0, 0, 2],
            vec![1, 2, 2, 1],
            vec![0, 2, 1, 1],
            vec![1, 0, 0, 0, 1, 0, 0, 0, 1],
            vec![0, 1, 0, 0, 0, 1, 1, 0, 0],
            vec![1, 1, 0, 0, 1, 1, 1, 0, 1],
        ];
        for entries in cases {
            let d = (entries.len() as f64).sqrt() as usize;
            let m = IntMatrix::new(d, entries).unwrap();
            // brute force: S^k all positive for some k <= 50
            let mut p = m.clone();
            let mut brute = false;
            for _ in 0..50 {
                if p.rows().iter().flatten().all(|&x| x > 0) {
                    brute = true;
                    break;
                }
                // saturate to {0,1} to avoid overflow
                let capped = IntMatrix::new(
                    d,
                    p.rows()
                        .iter()
                        .flatten()
                        .map(|&x| if x > 0 { 1 } else { 0 })
                        .collect(),
                )
                .unwrap();
                p = capped.mul(&m);
            }
            assert_eq!(m.is_primitive(), brute, "matrix {:?}", m.rows());
        }
    }

    #[test]
    fn perron_bounded_by_column_sums() {
        for text in ["0->01;1->0", "0->00011;1->100", "0->01011;1->00"] {
            let s = Substitution::parse(text).unwrap();
            let m = s.matrix();
            let d = m.dim();
            let col_sums: Vec<i64> = (0..d).map(|j| (0..d).map(|i| m.get(i, j)).sum()).collect();
            let diag = diagnostics(&m);
            let lo = *col_sums.iter().min().unwrap() as f64;
            let hi = *col_sums.iter().max().unwrap() as f64;
            assert!(diag.perron >= lo - 1e-9 && diag.perron <= hi + 1e-9);
        }
    }
}
