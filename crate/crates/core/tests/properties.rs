//! Property tests for the algebraic invariants.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use proptest::prelude::*;

use cyclic_covers::cyclotomic::CycInt;
use cyclic_covers::families::{sample_family, FamilySpec};
use cyclic_covers::finite_field::{field_of_order, FieldSpec, FiniteField};
use cyclic_covers::polynomials::{factor, gcd, is_irreducible, squarefree_decomposition, Poly};
use cyclic_covers::traces::{
    count_points, count_points_brute, l_polynomial, scaled_trace, trace_formula_general, trace_formula_thin, Curve,
    LPolynomial,
};

const ORDERS: [u64; 8] = [2, 4, 7, 8, 9, 13, 25, 27];

fn field(i: usize) -> Arc<FieldSpec> {
    static FIELDS: OnceLock<Vec<Arc<FieldSpec>>> = OnceLock::new();
    FIELDS.get_or_init(|| ORDERS.iter().map(|&q| field_of_order(q).unwrap()).collect())[i].clone()
}

/// Specs are shared so their extension tables are built once.
fn spec(q: u64, r: u32, g: u32) -> &'static FamilySpec {
    static SPECS: OnceLock<Vec<FamilySpec>> = OnceLock::new();
    const ALL: [(u64, u32, u32); 5] = [(7, 3, 2), (5, 2, 2), (13, 4, 3), (5, 4, 3), (5, 2, 3)];
    let specs = SPECS.get_or_init(|| ALL.iter().map(|&(q, r, g)| FamilySpec::from_order(q, r, g).unwrap()).collect());
    &specs[ALL.iter().position(|&x| x == (q, r, g)).unwrap()]
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn poly(field: &FieldSpec, raw: &[u32]) -> Poly {
    let q = field.q();
    let mut c: Vec<u32> = raw.iter().map(|x| x % q).collect();
    c.push(1);
    Poly::new(c)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn field_axioms(i in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(i);
        let q = f.q();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(a, q as u64), a);
    }

    #[test]
    fn factorization_reassembles(i in 0..ORDERS.len(), raw in prop::collection::vec(any::<u32>(), 0..8)) {
        let f = field(i);
        let p = poly(&f, &raw);
        let parts = factor(&f, &p).unwrap();
        let mut product = Poly::one();
        for (prime, mult) in &parts {
            let prime = prime.poly().unwrap();
            prop_assert!(is_irreducible(&f, prime));
            product = product.mul(&prime.pow(*mult, &f), &f);
        }
        prop_assert_eq!(product, p.clone());
        let mut sqf = Poly::one();
        for (part, mult) in squarefree_decomposition(&f, &p) {
            sqf = sqf.mul(&part.pow(mult, &f), &f);
        }
        prop_assert_eq!(sqf, p);
    }

    #[test]
    fn gcd_divides_both(i in 0..ORDERS.len(), a in prop::collection::vec(any::<u32>(), 0..6), b in prop::collection::vec(any::<u32>(), 0..6), c in prop::collection::vec(any::<u32>(), 0..3)) {
        let f = field(i);
        let common = poly(&f, &c);
        let a = poly(&f, &a).mul(&common, &f);
        let b = poly(&f, &b).mul(&common, &f);
        let d = gcd(&f, &a, &b).unwrap();
        prop_assert!(d.divides(&a, &f));
        prop_assert!(d.divides(&b, &f));
        prop_assert!(common.divides(&d, &f));
    }

    #[test]
    fn cyclotomic_products_evaluate_correctly(r in 2u32..13, x in prop::collection::vec(-5i64..5, 13), y in prop::collection::vec(-5i64..5, 13)) {
        let build = |c: &[i64]| (0..r).map(|t| CycInt::root(r, t as i64).scale(&c[t as usize])).fold(CycInt::zero(r), |acc, z| acc + z);
        let (a, b) = (build(&x), build(&y));
        let lhs = (&a * &b).to_complex();
        let rhs = a.to_complex() * b.to_complex();
        prop_assert!((lhs - rhs).norm() < 1e-9);
        prop_assert_eq!(&a * &b, &b * &a);
    }
}

proptest! {
    #![proptest_config(config(24))]

    /// Point counting, the thin and general symbol sums and brute force
    /// agree on random family members.
    #[test]
    fn trace_routes_agree(which in 0usize..4, seed in any::<u64>()) {
        let (q, r, g) = [(7, 3, 2), (5, 2, 2), (13, 4, 3), (5, 4, 3)][which];
        let s = spec(q, r, g);
        for model in sample_family(s, 3, seed).unwrap() {
            let curve = Curve::new(s, model).unwrap();
            for n in 1..=2 {
                let t = scaled_trace(&curve, n).unwrap();
                prop_assert_eq!(t, -trace_formula_thin(&curve, n).unwrap());
                prop_assert_eq!(t, -trace_formula_general(&curve, n).unwrap());
                prop_assert_eq!(count_points(&curve, n).unwrap(), count_points_brute(&curve, n).unwrap());
            }
        }
    }

    /// Functional equation, Weil bounds, conjugate pairing of eigenangles
    /// and the Newton round trip.
    #[test]
    fn l_polynomial_invariants(which in 0usize..3, seed in any::<u64>()) {
        let (q, r, g) = [(7, 3, 2), (5, 2, 3), (13, 4, 3)][which];
        let s = spec(q, r, g);
        let model = sample_family(s, 1, seed).unwrap().remove(0);
        let curve = Curve::new(s, model).unwrap();
        let l = l_polynomial(&curve).unwrap();
        prop_assert!(l.satisfies_functional_equation());
        let qf = q as f64;
        // direct counts beyond n = g where the extension tables stay small
        let direct_max = if q.pow(2 * g + 2) <= 1 << 20 { 2 * g + 2 } else { g };
        for n in 1..=(2 * g + 2) {
            let t = l.trace(n) as f64;
            prop_assert!(t.abs() <= 2.0 * g as f64 * qf.powf(n as f64 / 2.0) + 1e-9);
            if n <= direct_max {
                prop_assert_eq!(l.trace(n) as i64, scaled_trace(&curve, n).unwrap());
            }
        }
        for (k, c) in l.coeffs().iter().enumerate() {
            let binom = (0..k).fold(1.0, |acc, i| acc * (2 * g as usize - i) as f64 / (i + 1) as f64);
            prop_assert!((*c as f64).abs() <= binom * qf.powf(k as f64 / 2.0) + 1e-6);
        }
        let angles = l.eigenangles().unwrap();
        let mut mirrored: Vec<f64> = angles.iter().map(|t| (2.0 * PI - t) % (2.0 * PI)).collect();
        mirrored.sort_by(f64::total_cmp);
        for (a, b) in angles.iter().zip(&mirrored) {
            let gap = (a - b).abs();
            prop_assert!(gap.min(2.0 * PI - gap) < 1e-7, "{:?}", angles);
        }
        let sum: Complex64 = angles.iter().map(|t| Complex64::from_polar(1.0, *t)).sum();
        prop_assert!((sum.re - l.trace(1) as f64 / qf.sqrt()).abs() < 1e-8);
        let traces: Vec<i64> = l.traces(2 * g).iter().map(|&t| t as i64).collect();
        prop_assert_eq!(LPolynomial::from_all_traces(q, g, &traces).unwrap(), l.clone());
        prop_assert_eq!(LPolynomial::from_traces(q, g, &traces[..g as usize]).unwrap(), l);
    }
}
