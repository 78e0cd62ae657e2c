//! A named battery of two-letter test substitutions.
//!
//! Every entry is primitive, has a nonsingular substitution matrix, and has
//! no eigenvalue of modulus one, so the whole battery satisfies the
//! preconditions shared by the spectral cross-checks (zero bottom Lyapunov
//! exponent, invariant section, Mahler cross-oracle). Entries are chosen to
//! cover the classifier tiers: Pisot, exact singularity certificates of all
//! three shapes, and the numeric fallback.

use crate::substitution::{diagnostics, Substitution};

/// A named battery entry.
#[derive(Debug, Clone)]
pub struct BatteryEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub sub: Substitution,
}

const ENTRIES: &[(&str, &str)] = &[
    ("fibonacci", "0->01;1->0"),
    ("fibonacci-cubed", "0->01001;1->010"),
    ("flag-mirror", "0->00011;1->100"),
    ("silver", "0->001;1->0"),
    ("tribonacci-like-3", "0->0111;1->0"),
    ("tribonacci-like-4", "0->01111;1->0"),
    ("zero-corner", "0->01011;1->00"),
    ("block-words", "0->000001111;1->11110000"),
    ("non-pisot", "0->001111;1->01010"),
    ("pisot-unit-det", "0->0010;1->001"),
    ("five-three", "0->00101;1->001"),
];

/// The full battery. Panics if any entry violates the battery invariants
/// (caught by the unit test below, so this cannot fire in release use).
pub fn battery() -> Vec<BatteryEntry> {
    ENTRIES
        .iter()
        .map(|&(name, text)| BatteryEntry {
            name,
            text,
            sub: Substitution::parse(text).expect("battery entry must parse"),
        })
        .collect()
}

/// Battery restricted by a predicate on the name, for targeted suites.
pub fn battery_named(names: &[&str]) -> Vec<BatteryEntry> {
    battery().into_iter().filter(|e| names.contains(&e.name)).collect()
}

/// Asserts the battery invariants; exposed so integration suites can call it.
pub fn check_battery_invariants() -> Result<(), String> {
    let entries = battery();
    if entries.len() < 10 {
        return Err(format!("battery has only {} entries", entries.len()));
    }
    for e in &entries {
        let d = diagnostics(&e.sub.matrix().transpose());
        if d.det == 0 {
            return Err(format!("{}: singular matrix", e.name));
        }
        if !d.primitive {
            return Err(format!("{}: not primitive", e.name));
        }
        if !d.ergodic {
            return Err(format!("{}: eigenvalue on the unit circle", e.name));
        }
        if d.has_unit_eigenvalue {
            return Err(format!("{}: eigenvalue of modulus one", e.name));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_satisfies_invariants() {
        check_battery_invariants().unwrap();
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = battery().iter().map(|e| e.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), battery().len());
    }

    #[test]
    fn named_selection() {
        let picked = battery_named(&["fibonacci", "silver"]);
        assert_eq!(picked.len(), 2);
    }
}
