//! Library results against independent oracles written here with plain
//! modular arithmetic, and against values frozen from those oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use cyclic_covers::arith::gcd;
use cyclic_covers::families::{count_family, enumerate_family, Conductor, FamilySpec};
use cyclic_covers::finite_field::{field_of_order, FiniteField};
use cyclic_covers::polynomials::{enumerate_irreducibles, prime_count, Poly, PrimePoly};
use cyclic_covers::residue_symbols::SymbolContext;
use cyclic_covers::statistics::{
    a0_identity, d_r, et_term, mt_term, sweep_family, trace_distribution, FamilyMode, TraceDistribution,
};
use cyclic_covers::traces::{count_points, l_polynomial, scaled_trace, Curve};

/// `F_(p^2) = F_p[w]/(w^2 - nu)` for a nonresidue `nu`, or `F_p` itself.
#[derive(Clone, Copy)]
struct Naive {
    p: u64,
    nu: u64,
    quadratic: bool,
}

type El = (u64, u64);

impl Naive {
    fn new(p: u64, n: u32) -> Self {
        let nu = (2..p).find(|&a| modpow(a, (p - 1) / 2, p) == p - 1).unwrap_or(0);
        Naive { p, nu, quadratic: n == 2 }
    }

    fn size(&self) -> u64 {
        if self.quadratic {
            self.p * self.p
        } else {
            self.p
        }
    }

    fn element(&self, i: u64) -> El {
        (i % self.p, i / self.p)
    }

    fn add(&self, a: El, b: El) -> El {
        ((a.0 + b.0) % self.p, (a.1 + b.1) % self.p)
    }

    fn mul(&self, a: El, b: El) -> El {
        let p = self.p;
        ((a.0 * b.0 + a.1 * b.1 % p * self.nu) % p, (a.0 * b.1 + a.1 * b.0) % p)
    }

    fn pow(&self, mut a: El, mut e: u64) -> El {
        let mut out = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        out
    }

    /// `#{y : y^k = z}`.
    fn root_count(&self, z: El, k: u64) -> u64 {
        if z == (0, 0) {
            return 1;
        }
        let g = gcd(k, self.size() - 1);
        if self.pow(z, (self.size() - 1) / g) == (1, 0) {
            g
        } else {
            0
        }
    }
}

fn modpow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut out = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            out = out * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    out
}

/// Points on the smooth model of `y^r = F(x)` over `F_(p^n)`, n <= 2: one
/// point above each root of F (every exponent is prime to r) and
/// `#{z : z^(deg F, r) = lead F}` above infinity.
fn oracle_count(p: u64, r: u64, coeffs: &[u32], n: u32) -> u64 {
    let k = Naive::new(p, n);
    let mut total = 0;
    for i in 0..k.size() {
        let x = k.element(i);
        let v = coeffs.iter().rev().fold((0, 0), |acc, &c| k.add(k.mul(acc, x), (c as u64, 0)));
        total += k.root_count(v, r);
    }
    let deg = coeffs.len() as u64 - 1;
    let lead = (*coeffs.last().unwrap() as u64, 0);
    total + k.root_count(lead, gcd(deg, r))
}

#[test]
fn point_counts_match_naive_oracle() {
    for (q, r, g) in [(5, 2, 1), (7, 3, 1), (7, 3, 2)] {
        let spec = FamilySpec::from_order(q, r, g).unwrap();
        for model in enumerate_family(&spec).unwrap() {
            let coeffs = model.f(&spec).coeffs().to_vec();
            let curve = Curve::new(&spec, model).unwrap();
            for n in 1..=2 {
                let expected = oracle_count(q, r as u64, &coeffs, n) as i64;
                assert_eq!(count_points(&curve, n).unwrap(), expected, "q={q} r={r} F={coeffs:?} n={n}");
            }
        }
    }
}

#[test]
fn elliptic_curve_over_f5() {
    // y^2 = x^3 + x: squares mod 5 are {0, 1, 4}
    assert_eq!(oracle_count(5, 2, &[0, 1, 0, 1], 1), 4);
    let spec = FamilySpec::from_order(5, 2, 1).unwrap();
    let model = enumerate_family(&spec).unwrap().find(|m| m.f(&spec).coeffs() == [0, 1, 0, 1]).unwrap();
    let curve = Curve::new(&spec, model).unwrap();
    assert_eq!(scaled_trace(&curve, 1).unwrap(), 2);
    let l = l_polynomial(&curve).unwrap();
    assert_eq!(l.coeffs(), &[1, -2, 5]);
    let theta = (1.0 / 5f64.sqrt()).acos();
    let angles = l.eigenangles().unwrap();
    let expected = [theta, 2.0 * std::f64::consts::PI - theta];
    for (a, b) in angles.iter().zip(expected) {
        assert!((a - b).abs() < 1e-10, "{angles:?}");
    }
}

#[test]
fn residue_symbols_match_discrete_log_oracle() {
    for (p, r) in [(7u64, 3u32), (13, 4), (13, 3)] {
        let field = field_of_order(p).unwrap();
        let beta = field.generator() as u64;
        let dlog = |z: u64| (0..p - 1).find(|&k| modpow(beta, k, p) == z).unwrap();
        let ctx = SymbolContext::new(field.clone(), r).unwrap();
        let f = Poly::new(vec![3, 1, 0, 2, 1]);
        for a in 0..p as u32 {
            let lin = Poly::new(vec![((p as u32) - a) % p as u32, 1]);
            let value = f.coeffs().iter().rev().fold(0u64, |acc, &c| (acc * a as u64 + c as u64) % p);
            let expected = (value != 0).then(|| (dlog(value) % r as u64) as u32);
            assert_eq!(ctx.symbol_exponent(&f, &lin).unwrap(), expected, "p={p} a={a}");
        }
    }
}

#[test]
fn small_field_facts() {
    assert_eq!(field_of_order(7).unwrap().generator(), 3);
    assert_eq!(prime_count(&field_of_order(3).unwrap(), 2), BigInt::from(3));
    assert_eq!(prime_count(&field_of_order(2).unwrap(), 4), BigInt::from(3));
    let f2 = field_of_order(2).unwrap();
    let quadratics = enumerate_irreducibles(&f2, 2).unwrap();
    assert_eq!(quadratics, vec![PrimePoly::Finite(Poly::new(vec![1, 1, 1]))]);
}

#[test]
fn frozen_family_sizes() {
    // r = 2: 2 (q^d - q^(d-2)); r = 3 from enumeration
    for (q, r, g, size) in [(3, 2, 1, 144u64), (3, 2, 2, 1296), (5, 2, 2, 30000), (7, 3, 1, 2016), (7, 3, 2, 6048)] {
        let spec = FamilySpec::from_order(q, r, g).unwrap();
        assert_eq!(count_family(&spec, &Conductor::One).unwrap(), BigInt::from(size));
        assert_eq!(enumerate_family(&spec).unwrap().count() as u64, size);
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Averages taken directly over every member, independent of the sweep.
fn direct_average(spec: &FamilySpec, n: u32) -> BigRational {
    let mut sum = 0i64;
    let mut count = 0i64;
    for model in enumerate_family(spec).unwrap() {
        sum += scaled_trace(&Curve::new(spec, model).unwrap(), n).unwrap();
        count += 1;
    }
    rat(sum, count)
}

#[test]
fn frozen_trace_averages() {
    let spec = FamilySpec::from_order(7, 3, 2).unwrap();
    let dist: TraceDistribution = trace_distribution(&spec, FamilyMode::Exhaustive).unwrap();
    let expected = [0, 0, 0, 0, 0, 4];
    for n in 1..=6u32 {
        assert_eq!(dist.average_scaled(n).unwrap(), rat(expected[n as usize - 1], 1), "n={n}");
    }
    for n in 1..=3 {
        assert_eq!(direct_average(&spec, n), dist.average_scaled(n).unwrap());
    }
    let sweep = sweep_family(&spec, Some(6)).unwrap();
    assert_eq!(mt_term(&spec, 3).unwrap(), rat(-12, 1));
    assert_eq!(et_term(&spec, &sweep, 3).unwrap().definition, rat(12, 1));
    assert_eq!(mt_term(&spec, 6).unwrap(), rat(-92, 1));
    assert_eq!(et_term(&spec, &sweep, 6).unwrap().definition, rat(96, 1));
}

#[test]
fn sampled_mean_is_within_four_standard_errors() {
    let spec = FamilySpec::from_order(7, 3, 2).unwrap();
    let exact = 4.0;
    let dist = trace_distribution(&spec, FamilyMode::Sample { count: 3000, seed: 11 }).unwrap();
    let mean = dist.average_scaled(6).unwrap().to_f64().unwrap();
    let se = dist.standard_error(6);
    assert!((mean - exact).abs() <= 4.0 * se, "mean {mean} se {se}");
}

#[test]
fn a0_identity_examples() {
    assert_eq!(a0_identity(3, 2, 2), (BigInt::from(3), BigInt::from(3)));
    for q in [7u64, 13] {
        let (lhs, rhs) = a0_identity(q, 6, 6);
        let closed = BigInt::from(q.pow(3) + 2 * q * q + 2 * q);
        assert_eq!(lhs, closed);
        assert_eq!(rhs, closed);
    }
}

#[test]
fn lower_order_correction_by_float_summation() {
    // q = 7, r = 3, g = 4: d = 6, only degree one primes enter at n = 3
    let spec = FamilySpec::from_order(7, 3, 4).unwrap();
    let inner: f64 = (1..=6).map(|a| (-2.0f64 / 7.0).powi(a) * (1.0 - a as f64 / 6.0)).sum();
    let expected = 7.0 * 2.0 * inner;
    let got = d_r(&spec, 3).to_f64().unwrap();
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    assert!((got + 2.7076).abs() < 1e-3);
}
