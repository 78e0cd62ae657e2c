//! Singularity classification of the spectrum for two-letter substitutions.
//!
//! Verdict hierarchy, strongest evidence first: exact integer certificates
//! (including the exact Pisot criterion on the `[[A,B],[C,0]]` shape, which
//! yields the stronger pure-discrete verdict and therefore takes precedence
//! over the singularity certificate on that shape), then the numeric Pisot
//! shortcut, then the numeric Mahler-vs-half-log-theta comparison.

use crate::error::{Error, Result};
use crate::mahler::{mahler_boyd_2d, MahlerResult};
use crate::poly::returns::{det_poly, reduce_common_affix};
use crate::substitution::{diagnostics, IntMatrix, MatrixDiagnostics, Substitution};
use serde::Serialize;
use std::collections::BTreeMap;

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    CertifiedSingular,
    PisotDiscrete,
    NumericallySingular,
    Inconclusive,
    PreconditionFailed,
}

/// A classification verdict with structured evidence.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// Which criterion fired (or which precondition failed).
    pub tier: String,
    pub evidence: BTreeMap<String, String>,
    pub assumptions: Vec<String>,
}

fn base_assumptions() -> Vec<String> {
    vec!["aperiodicity of the substitution is asserted by the caller, not decided".to_string()]
}

fn fail(tier: &str, evidence: BTreeMap<String, String>) -> Verdict {
    Verdict {
        status: VerdictStatus::PreconditionFailed,
        tier: tier.to_string(),
        evidence,
        assumptions: base_assumptions(),
    }
}

/// Which branch of the singularity theorem applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Characteristic polynomial irreducible over the rationals.
    Irreducible,
    /// Reducible with two integer eigenvalues `theta_1 > |theta_2| > 1`.
    ReducibleIntegerPair,
}

/// Result of the precondition stage.
#[derive(Debug, Clone)]
pub enum PreconditionCheck {
    Pass { branch: Branch, diag: MatrixDiagnostics },
    Fail(Verdict),
}

/// Exact comparison `theta > q` for the Perron root of a primitive 2x2
/// integer matrix, via the sign of the characteristic polynomial at `q`:
/// for the upward parabola `p(t) = t^2 - tr t + det`, `q < theta` iff
/// `p(q) < 0` or `q` lies left of the vertex.
fn perron_exceeds(st: &IntMatrix, q: i64) -> bool {
    let tr = st.get(0, 0) + st.get(1, 1);
    let det = st.get(0, 0) * st.get(1, 1) - st.get(0, 1) * st.get(1, 0);
    let p_q = q * q - tr * q + det;
    p_q < 0 || 2 * q < tr
}

/// Integer eigenvalues of a 2x2 integer matrix, if the spectrum is rational.
fn integer_eigenvalues(st: &IntMatrix) -> Option<(i64, i64)> {
    let tr = st.get(0, 0) + st.get(1, 1);
    let det = st.get(0, 0) * st.get(1, 1) - st.get(0, 1) * st.get(1, 0);
    let disc = tr * tr - 4 * det;
    if disc < 0 {
        return None;
    }
    let s = (disc as f64).sqrt().round() as i64;
    if s * s != disc || (tr + s) % 2 != 0 {
        return None;
    }
    Some(((tr + s) / 2, (tr - s) / 2))
}

/// Check the classifier's preconditions: two letters, primitivity,
/// nonsingular matrix, ergodic base map, and one of the two spectral
/// branches (irreducible, or reducible with two integer eigenvalues
/// `theta_1 > |theta_2| > 1`).
pub fn preconditions(sub: &Substitution) -> Result<PreconditionCheck> {
    if sub.alphabet_size() != 2 {
        return Err(Error::UnsupportedDimension(
            sub.alphabet_size(),
            "spectrum classification (two-letter pipeline only)",
        ));
    }
    let st = sub.matrix().transpose();
    let diag = diagnostics(&st);
    let mut ev = BTreeMap::new();
    ev.insert(
        "matrix_transposed".into(),
        format!(
            "[[{},{}],[{},{}]]",
            st.get(0, 0),
            st.get(0, 1),
            st.get(1, 0),
            st.get(1, 1)
        ),
    );
    ev.insert("det".into(), diag.det.to_string());
    if diag.det == 0 {
        return Ok(PreconditionCheck::Fail(fail("singular substitution matrix", ev)));
    }
    if !diag.primitive {
        return Ok(PreconditionCheck::Fail(fail("substitution matrix is not primitive", ev)));
    }
    if !diag.ergodic {
        ev.insert(
            "reason".into(),
            "characteristic polynomial shares a factor with a cyclotomic polynomial".into(),
        );
        return Ok(PreconditionCheck::Fail(fail("toral endomorphism is not ergodic", ev)));
    }
    if diag.irreducible_over_q {
        return Ok(PreconditionCheck::Pass { branch: Branch::Irreducible, diag });
    }
    // reducible branch: need integer eigenvalues theta1 > |theta2| > 1
    if let Some((a, b)) = integer_eigenvalues(&st) {
        let (theta1, theta2) = if a.abs() >= b.abs() { (a, b) } else { (b, a) };
        if theta1 > theta2.abs() && theta2.abs() > 1 {
            return Ok(PreconditionCheck::Pass { branch: Branch::ReducibleIntegerPair, diag });
        }
        ev.insert("eigenvalues".into(), format!("{theta1}, {theta2}"));
    }
    Ok(PreconditionCheck::Fail(fail(
        "reducible matrix without integer eigenvalues theta_1 > |theta_2| > 1",
        ev,
    )))
}

/// The word-shape test for the exact tier (iii): `image(0) = 0^A 1^B`,
/// `image(1) = 1^C 0^D` with all counts positive.
fn block_shape(sub: &Substitution) -> Option<(i64, i64, i64, i64)> {
    let w0 = &sub.image(0).0;
    let w1 = &sub.image(1).0;
    let a = w0.iter().take_while(|&&x| x == 0).count();
    let b = w0.len() - a;
    let c = w1.iter().take_while(|&&x| x == 1).count();
    let d = w1.len() - c;
    let shape0 = w0[a..].iter().all(|&x| x == 1);
    let shape1 = w1[c..].iter().all(|&x| x == 0);
    if shape0 && shape1 && a > 0 && b > 0 && c > 0 && d > 0 {
        Some((a as i64, b as i64, c as i64, d as i64))
    } else {
        None
    }
}

/// Exact integer certificates for pure singular spectrum. Assumes the
/// preconditions passed on the irreducible branch. Returns `None` if no
/// case fires.
pub fn prop36_certificates(sub: &Substitution) -> Option<Verdict> {
    let st = sub.matrix().transpose();
    let (a, b) = (st.get(0, 0), st.get(0, 1));
    let (c, d) = (st.get(1, 0), st.get(1, 1));
    let mut ev = BTreeMap::new();
    ev.insert("matrix_transposed".into(), format!("[[{a},{b}],[{c},{d}]]"));

    // (i): all entries positive and theta > 2 min(A+C, B+D), exactly
    if a > 0 && b > 0 && c > 0 && d > 0 {
        let bound = 2 * (a + c).min(b + d);
        if perron_exceeds(&st, bound) {
            ev.insert("inequality".into(), format!("theta > {bound} = 2*min(A+C, B+D)"));
            return Some(Verdict {
                status: VerdictStatus::CertifiedSingular,
                tier: "positive-entries theta bound (i)".into(),
                evidence: ev,
                assumptions: base_assumptions(),
            });
        }
    }

    // (ii): shape [[A,B],[C,0]] with B < A+C. When A >= BC the matrix is
    // Pisot by the exact shape criterion, and the stronger pure-discrete
    // verdict takes precedence, so this certificate defers.
    if d == 0 && a > 0 && b > 0 && c > 0 && b < a + c && a < b * c {
        ev.insert("inequality".into(), format!("B={b} < A+C={} and A={a} < BC={}", a + c, b * c));
        return Some(Verdict {
            status: VerdictStatus::CertifiedSingular,
            tier: "zero-corner shape (ii)".into(),
            evidence: ev,
            assumptions: base_assumptions(),
        });
    }

    // (iii): literal block words 0^A 1^B / 1^C 0^D with theta > 6, exactly;
    // letter-swapped variants are detected by symmetry.
    let swapped = sub.swap_letters().ok()?;
    for candidate in [sub.clone(), swapped] {
        if let Some((wa, wb, wc, wd)) = block_shape(&candidate) {
            let cst = candidate.matrix().transpose();
            if perron_exceeds(&cst, 6) {
                ev.insert(
                    "shape".into(),
                    format!("image(0)=0^{wa} 1^{wb}, image(1)=1^{wc} 0^{wd}"),
                );
                ev.insert("inequality".into(), "theta > 6".into());
                return Some(Verdict {
                    status: VerdictStatus::CertifiedSingular,
                    tier: "block words theta > 6 (iii)".into(),
                    evidence: ev,
                    assumptions: base_assumptions(),
                });
            }
        }
    }
    None
}

/// Pisot shortcut: second eigenvalue strictly inside the unit circle gives
/// pure discrete, hence singular, spectrum. On the `[[A,B],[C,0]]` shape the
/// exact equivalence `Pisot <=> A >= BC` cross-checks the numeric test.
pub fn pisot_shortcut(sub: &Substitution) -> Result<Option<Verdict>> {
    let st = sub.matrix().transpose();
    let diag = diagnostics(&st);
    let (a, b) = (st.get(0, 0), st.get(0, 1));
    let (c, d) = (st.get(1, 0), st.get(1, 1));
    if d == 0 && a > 0 && b > 0 && c > 0 {
        let exact_pisot = a >= b * c;
        if exact_pisot != diag.pisot {
            return Err(Error::Precondition(format!(
                "internal inconsistency: exact shape Pisot test says {exact_pisot}, \
                 numeric eigenvalues say {}",
                diag.pisot
            )));
        }
    }
    if !diag.pisot {
        return Ok(None);
    }
    let mut ev = BTreeMap::new();
    ev.insert("perron".into(), format!("{:.12}", diag.perron));
    ev.insert("second_modulus".into(), format!("{:.12}", diag.second_modulus));
    if d == 0 && a > 0 && b > 0 && c > 0 {
        ev.insert("exact_check".into(), format!("A={a} >= BC={}", b * c));
    }
    Ok(Some(Verdict {
        status: VerdictStatus::PisotDiscrete,
        tier: "Pisot second eigenvalue".into(),
        evidence: ev,
        assumptions: base_assumptions(),
    }))
}

/// Tunable knobs for the numeric tier.
#[derive(Debug, Clone)]
pub struct ClassifyParams {
    /// Outer grid for the Boyd Mahler integration.
    pub boyd_grid: u32,
    /// Error multiplier demanded before declaring numerically-singular.
    pub margin_factor: f64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams { boyd_grid: 2048, margin_factor: 3.0 }
    }
}

/// The Mahler measure of the affix-reduced determinant polynomial, plus the
/// descriptive evidence entries shared by all passing verdicts.
fn numeric_evidence(
    sub: &Substitution,
    perron: f64,
    boyd_grid: u32,
) -> Result<(MahlerResult, f64, BTreeMap<String, String>)> {
    let (reduced, factor) = reduce_common_affix(sub)?;
    let p = det_poly(&reduced)?;
    let m: MahlerResult = if p.num_terms() <= 1 {
        // a nonzero monomial has Mahler measure exactly zero
        MahlerResult { value: 0.0, method: crate::mahler::MahlerMethod::Boyd2d, error_estimate: 0.0 }
    } else {
        mahler_boyd_2d(&p, boyd_grid)?
    };
    let half_log_theta = 0.5 * perron.ln();
    let mut ev = BTreeMap::new();
    ev.insert("mahler".into(), format!("{:.8}", m.value));
    ev.insert("mahler_error".into(), format!("{:.3e}", m.error_estimate));
    ev.insert("half_log_theta".into(), format!("{half_log_theta:.8}"));
    ev.insert("affix_factor".into(), format!("z0^{} z1^{}", factor.0[0], factor.0[1]));
    ev.insert("reduced".into(), reduced.to_text());
    Ok((m, half_log_theta, ev))
}

/// The full pipeline: preconditions, exact certificates, Pisot shortcut,
/// then the numeric comparison of the Mahler measure of the determinant
/// polynomial against half the log of the Perron root. Every passing verdict
/// carries the numeric pair (Mahler measure, half log theta) as evidence.
pub fn classify_spectrum(sub: &Substitution, params: &ClassifyParams) -> Result<Verdict> {
    let check = preconditions(sub)?;
    let (branch, diag) = match check {
        PreconditionCheck::Fail(v) => return Ok(v),
        PreconditionCheck::Pass { branch, diag } => (branch, diag),
    };
    let early = if branch == Branch::Irreducible { prop36_certificates(sub) } else { None };
    let early = match early {
        Some(v) => Some(v),
        None => pisot_shortcut(sub)?,
    };
    let (m, half_log_theta, mut ev) = numeric_evidence(sub, diag.perron, params.boyd_grid)?;
    if let Some(mut v) = early {
        v.evidence.append(&mut ev);
        return Ok(v);
    }

    // numeric tier: m(p_zeta) vs (1/2) log theta, after affix reduction
    if m.value + params.margin_factor * m.error_estimate < half_log_theta {
        ev.insert(
            "margin".into(),
            format!("{:.8}", half_log_theta - m.value - params.margin_factor * m.error_estimate),
        );
        Ok(Verdict {
            status: VerdictStatus::NumericallySingular,
            tier: "Mahler measure below half log theta".into(),
            evidence: ev,
            assumptions: base_assumptions(),
        })
    } else {
        Ok(Verdict {
            status: VerdictStatus::Inconclusive,
            tier: "Mahler measure does not clear the margin".into(),
            evidence: ev,
            assumptions: base_assumptions(),
        })
    }
}
