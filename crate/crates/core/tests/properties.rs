//! Randomized property tests (seeded, deterministic).

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twisted_cocycle::cocycle::{evaluate_cocycle, TorusPoint};
use twisted_cocycle::mahler::mahler_1d;
use twisted_cocycle::poly::returns::{
    cocycle_matrix_symbolic, return_polynomial, substitution_monomials,
};
use twisted_cocycle::poly::{Monomial, MultiPoly};
use twisted_cocycle::substitution::{Substitution, Word};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(2024)
}

fn random_poly(rng: &mut ChaCha8Rng, d: usize, max_terms: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(d);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mono = Monomial((0..d).map(|_| rng.gen_range(0..4)).collect());
        p.add_term(mono, BigInt::from(rng.gen_range(-4i64..=4)));
    }
    p
}

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
    Word((0..len).map(|_| rng.gen_range(0..2u8)).collect())
}

fn random_primitive_sub(rng: &mut ChaCha8Rng) -> Substitution {
    loop {
        let l0 = rng.gen_range(2..=4);
        let w0 = random_word(rng, l0);
        let l1 = rng.gen_range(1..=4);
        let w1 = random_word(rng, l1);
        if let Ok(s) = Substitution::new(vec![w0, w1]) {
            if s.matrix().is_primitive() {
                return s;
            }
        }
    }
}

#[test]
fn ring_laws_hold_on_random_polynomials() {
    let mut rng = rng();
    for _ in 0..200 {
        let a = random_poly(&mut rng, 2, 5);
        let b = random_poly(&mut rng, 2, 5);
        let c = random_poly(&mut rng, 2, 5);
        assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        assert_eq!(
            (a.clone() + b.clone()) * c.clone(),
            a.clone() * c.clone() + b.clone() * c.clone()
        );
        assert_eq!(a.clone() - a.clone(), MultiPoly::zero(2));
    }
}

#[test]
fn exact_division_inverts_multiplication() {
    let mut rng = rng();
    let mut done = 0;
    while done < 100 {
        let a = random_poly(&mut rng, 2, 4);
        let mut b = random_poly(&mut rng, 2, 4);
        // make the divisor's leading coefficient a unit so division applies
        if b.is_zero() || a.is_zero() {
            continue;
        }
        let (lead, _) = b.leading().unwrap();
        let lead = lead.clone();
        b.add_term(lead.clone(), BigInt::from(100));
        let mut bl = MultiPoly::zero(2);
        for (m, c) in b.terms() {
            if *m == lead {
                bl.add_term(m.clone(), BigInt::from(1));
            } else {
                bl.add_term(m.clone(), c.clone());
            }
        }
        let prod = a.clone() * bl.clone();
        let q = prod.div_exact(&bl).expect("division of a known product");
        assert_eq!(q, a);
        done += 1;
    }
}

#[test]
fn return_polynomials_partition_positions() {
    let mut rng = rng();
    for _ in 0..100 {
        let len = rng.gen_range(1..=12);
        let u = random_word(&mut rng, len);
        let p0 = return_polynomial(&u, 0, 2);
        let p1 = return_polynomial(&u, 1, 2);
        // each position contributes exactly one monomial with coefficient 1
        let total = p0 + p1;
        let sum: BigInt = total.terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(sum, BigInt::from(u.len()));
    }
}

#[test]
fn return_polynomial_telescopes_over_concatenation() {
    // P_{uv,a} = P_{u,a} + z^u P_{v,a}
    let mut rng = rng();
    for _ in 0..100 {
        let lu = rng.gen_range(1..=8);
        let u = random_word(&mut rng, lu);
        let lv = rng.gen_range(1..=8);
        let v = random_word(&mut rng, lv);
        let mut uv = u.0.clone();
        uv.extend_from_slice(&v.0);
        let uv = Word(uv);
        let zu = Monomial(vec![u.count(0) as u32, u.count(1) as u32]);
        for a in 0..2u8 {
            let lhs = return_polynomial(&uv, a, 2);
            let rhs = return_polynomial(&u, a, 2)
                + return_polynomial(&v, a, 2).mul_monomial(&zu);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn symbolic_cocycle_condition_on_random_pairs() {
    let mut rng = rng();
    for _ in 0..25 {
        let z1 = random_primitive_sub(&mut rng);
        let z2 = random_primitive_sub(&mut rng);
        let comp = z1.compose(&z2).unwrap();
        let lhs = cocycle_matrix_symbolic(&comp);
        let rhs = cocycle_matrix_symbolic(&z2)
            .substitute(&substitution_monomials(&z1))
            .mul(&cocycle_matrix_symbolic(&z1));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn cocycle_entries_dominated_by_letter_counts() {
    // |M_zeta(xi)_{bc}| <= M_zeta(0)_{bc} = S^T_{bc} entrywise
    let mut rng = rng();
    for _ in 0..50 {
        let z = random_primitive_sub(&mut rng);
        let xi = TorusPoint(vec![rng.gen(), rng.gen()]);
        let m = evaluate_cocycle(&z, &xi).unwrap();
        let st = z.matrix().transpose();
        for b in 0..2 {
            for c in 0..2 {
                assert!(m.get(b, c).norm() <= st.get(b, c) as f64 + 1e-12);
            }
        }
    }
}

#[test]
fn mahler_is_multiplicative_in_one_variable() {
    let mut rng = rng();
    let mut done = 0;
    while done < 60 {
        let a = random_poly(&mut rng, 1, 4);
        let b = random_poly(&mut rng, 1, 4);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let ma = mahler_1d(&a).unwrap().value;
        let mb = mahler_1d(&b).unwrap().value;
        let mab = mahler_1d(&(a * b)).unwrap().value;
        assert!((mab - ma - mb).abs() < 1e-7, "{mab} vs {ma} + {mb}");
        done += 1;
    }
}

#[test]
fn perron_bounded_by_column_sums() {
    let mut rng = rng();
    for _ in 0..50 {
        let z = random_primitive_sub(&mut rng);
        let s = z.matrix();
        let d = twisted_cocycle::substitution::diagnostics(&s.transpose());
        let col_sums: Vec<i64> =
            (0..2).map(|j| (0..2).map(|i| s.get(i, j)).sum()).collect();
        let lo = *col_sums.iter().min().unwrap() as f64;
        let hi = *col_sums.iter().max().unwrap() as f64;
        assert!(d.perron >= lo - 1e-9 && d.perron <= hi + 1e-9);
    }
}
