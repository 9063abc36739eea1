//! Univariate polynomials over `F_q`: arithmetic, gcd, squarefree
//! decomposition, irreducibility, deterministic factorization, and
//! enumeration of monic irreducibles.
//!
//! A [`Poly`] is a plain coefficient vector of element codes (constant term
//! first, no trailing zeros); operations take the [`FieldSpec`] explicitly.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::arith::{self, prime_factors};
use crate::error::{Error, Result};
use crate::finite_field::{extend_field, ExtFieldSpec, FieldSpec, FiniteField, MAX_EXT_SIZE};

pub const MAX_FACTOR_DEGREE: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    /// Builds a polynomial from codes, constant term first.
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: u32) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn monomial(c: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `x - c` over `field`.
    pub fn linear(field: &FieldSpec, c: u32) -> Self {
        Poly::new(vec![field.neg(c), 1])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn add(&self, other: &Poly, field: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| field.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, field: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| field.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: u32, field: &FieldSpec) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, field: &FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32, field: &FieldSpec) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self, field);
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Poly, field: &FieldSpec) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.deg() < dd || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = field.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let factor = field.mul(c, inv_lead);
            quot[k - dd] = factor;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = field.sub(rem[idx], field.mul(factor, dj));
            }
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly, field: &FieldSpec) -> Poly {
        self.divrem(divisor, field).1
    }

    pub fn divides(&self, other: &Poly, field: &FieldSpec) -> bool {
        other.rem(self, field).is_zero()
    }

    pub fn make_monic(&self, field: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(field.inv(self.leading()).unwrap(), field)
    }

    pub fn derivative(&self, field: &FieldSpec) -> Poly {
        let p = field.p() as usize;
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| {
                    // i * c as a repeated sum of c
                    let k = i % p;
                    (0..k).fold(0, |acc, _| field.add(acc, c))
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: u32, field: &FieldSpec) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Poly, field: &FieldSpec) -> Poly {
        let mut acc = Poly::one().rem(modulus, field);
        let base = self.rem(modulus, field);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc, field).rem(modulus, field);
            if e.bit(i) {
                acc = acc.mul(&base, field).rem(modulus, field);
            }
        }
        acc
    }

    /// `self^q mod modulus`.
    fn frobenius_mod(&self, modulus: &Poly, field: &FieldSpec) -> Poly {
        self.pow_mod(&BigUint::from(field.q()), modulus, field)
    }

    /// The polynomial whose p-th power is `self`; requires `self' = 0`.
    fn pth_root(&self, field: &FieldSpec) -> Poly {
        let p = field.p() as usize;
        let e = (field.q() / field.p()) as u64;
        Poly::new(self.coeffs.iter().step_by(p).map(|&c| field.pow(c, e)).collect())
    }
}

/// Lexicographic order: degree first, then coefficients from the constant
/// term up, elements ordered by discrete log with zero first.
pub fn cmp_lex(field: &FieldSpec, a: &Poly, b: &Poly) -> Ordering {
    a.coeffs.len().cmp(&b.coeffs.len()).then_with(|| {
        for (&x, &y) in a.coeffs.iter().zip(&b.coeffs) {
            match field.order_key(x).cmp(&field.order_key(y)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}

/// Monic gcd.
pub fn gcd(field: &FieldSpec, f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b, field);
        a = b;
        b = r;
    }
    Ok(a.make_monic(field))
}

pub fn is_squarefree(field: &FieldSpec, f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() == 0 {
        return Ok(true);
    }
    Ok(gcd(field, f, &f.derivative(field))?.is_one())
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` squarefree, monic and nonconstant.
pub fn squarefree_decomposition(field: &FieldSpec, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let p = field.p();
    let fp = f.derivative(field);
    if fp.is_zero() {
        for (g, m) in squarefree_decomposition(field, &f.pth_root(field)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = gcd(field, f, &fp).unwrap();
    let mut w = f.divrem(&c, field).0;
    let mut i = 1;
    while !w.is_one() {
        let y = gcd(field, &w, &c).unwrap();
        let fac = w.divrem(&y, field).0;
        if fac.deg() > 0 {
            out.push((fac.make_monic(field), i));
        }
        w = y;
        c = c.divrem(&w, field).0;
        i += 1;
    }
    if c.deg() > 0 {
        for (g, m) in squarefree_decomposition(field, &c.make_monic(field).pth_root(field)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Product of the distinct monic irreducible factors.
pub fn radical(field: &FieldSpec, f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let monic = f.make_monic(field);
    Ok(squarefree_decomposition(field, &monic).into_iter().fold(Poly::one(), |acc, (g, _)| acc.mul(&g, field)))
}

/// Rabin's irreducibility test.
pub fn is_irreducible(field: &FieldSpec, f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = Poly::x();
    let mut powers = vec![x.clone()];
    for _ in 0..n {
        let next = powers.last().unwrap().frobenius_mod(f, field);
        powers.push(next);
    }
    if powers[n] != x.rem(f, field) {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|l| {
        let h = powers[n / l as usize].sub(&x, field);
        gcd(field, f, &h).map(|g| g.is_one()).unwrap_or(false)
    })
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(field: &FieldSpec, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let x = Poly::x();
    let mut h = x.clone();
    let mut i = 1;
    while g.deg() >= 2 * i {
        h = h.frobenius_mod(&g, field);
        let d = gcd(field, &g, &h.sub(&x, field)).unwrap();
        if !d.is_one() {
            g = g.divrem(&d, field).0;
            h = h.rem(&g, field);
            out.push((d, i));
        }
        i += 1;
    }
    if g.deg() > 0 {
        let dg = g.deg();
        out.push((g.make_monic(field), dg));
    }
    out
}

/// Splits a squarefree monic product of irreducibles of degree `d` into its
/// factors by trying splitting polynomials in code order.
fn equal_degree(field: &FieldSpec, f: &Poly, d: usize, out: &mut Vec<Poly>) {
    let n = f.deg();
    if n == d {
        out.push(f.clone());
        return;
    }
    let q = field.q() as u64;
    let odd_exp = (num_traits::pow(BigUint::from(q), d) - 1u32) / 2u32;
    let two = BigUint::from(2u32);
    let trace_terms = field.degree() as usize * d;
    let mut code: u64 = q;
    loop {
        let mut digits = Vec::with_capacity(n);
        let mut k = code;
        while k > 0 {
            digits.push((k % q) as u32);
            k /= q;
        }
        code += 1;
        let h = Poly::new(digits);
        if h.deg() >= n {
            unreachable!("no splitting polynomial found below degree {n}");
        }
        let t = if q % 2 == 1 {
            h.pow_mod(&odd_exp, f, field).sub(&Poly::one(), field)
        } else {
            let mut acc = Poly::zero();
            let mut pw = h.rem(f, field);
            for _ in 0..trace_terms {
                acc = acc.add(&pw, field);
                pw = pw.pow_mod(&two, f, field);
            }
            acc
        };
        if t.is_zero() {
            continue;
        }
        let g = gcd(field, f, &t).unwrap();
        if g.deg() > 0 && g.deg() < n {
            let other = f.divrem(&g, field).0;
            equal_degree(field, &g, d, out);
            equal_degree(field, &other.make_monic(field), d, out);
            return;
        }
    }
}

/// A place of `F_q(x)`: a monic irreducible or the prime at infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PrimePoly {
    Finite(Poly),
    Infinity,
}

impl PrimePoly {
    /// Certifies irreducibility and monicity.
    pub fn finite(field: &FieldSpec, poly: Poly) -> Result<Self> {
        if !poly.is_monic() || !is_irreducible(field, &poly) {
            return Err(Error::Invalid(format!("{poly:?} is not a monic irreducible")));
        }
        Ok(PrimePoly::Finite(poly))
    }

    /// Degree, with `deg(P_inf) = 1`.
    pub fn degree(&self) -> usize {
        match self {
            PrimePoly::Finite(p) => p.deg(),
            PrimePoly::Infinity => 1,
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            PrimePoly::Finite(p) => Some(p),
            PrimePoly::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PrimePoly::Infinity)
    }
}

/// Complete factorization of a nonzero monic polynomial into monic
/// irreducibles with multiplicities, in lexicographic order.
pub fn factor(field: &FieldSpec, f: &Poly) -> Result<Vec<(PrimePoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.deg() > MAX_FACTOR_DEGREE {
        return Err(Error::DegreeTooLarge { degree: f.deg(), limit: MAX_FACTOR_DEGREE });
    }
    if !f.is_monic() {
        return Err(Error::Invalid("factor expects a monic polynomial".into()));
    }
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, mult) in squarefree_decomposition(field, f) {
        for (block, d) in distinct_degree(field, &g) {
            let mut parts = Vec::new();
            equal_degree(field, &block, d, &mut parts);
            out.extend(parts.into_iter().map(|p| (p, mult)));
        }
    }
    out.sort_by(|a, b| cmp_lex(field, &a.0, &b.0));
    Ok(out.into_iter().map(|(p, m)| (PrimePoly::Finite(p), m)).collect())
}

/// `pi_q(m)`, the number of monic irreducibles of degree m.
pub fn prime_count(field: &FieldSpec, m: u32) -> BigInt {
    arith::prime_count(field.q() as u64, m)
}

/// Monic irreducibles of degree exactly `ext.degree()`, each paired with one
/// of its roots in `ext` (the root with the smallest log), in the order of
/// smallest root log.
pub fn irreducibles_with_roots(ext: &ExtFieldSpec) -> Vec<(Poly, u32)> {
    let base = ext.base();
    let q = base.q() as u64;
    let m = ext.degree() as usize;
    if m == 1 {
        return (0..base.q()).map(|c| (Poly::linear(base, c), c)).collect();
    }
    let order = ext.size() - 1;
    let mut seen = vec![false; order as usize];
    let mut out = Vec::new();
    for k in 0..order {
        if seen[k as usize] {
            continue;
        }
        let mut orbit = Vec::with_capacity(m);
        let mut j = k;
        loop {
            seen[j as usize] = true;
            orbit.push(j);
            j = ((j as u128 * q as u128) % order as u128) as u64;
            if j == k {
                break;
            }
        }
        if orbit.len() != m {
            continue;
        }
        // prod (T - x_i), coefficients in the extension, constant term first
        let mut poly = vec![1u32];
        for &l in &orbit {
            let root = ext.from_log(l);
            let neg_root = ext.neg(root);
            let mut next = vec![0u32; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = ext.add(next[i + 1], c);
                next[i] = ext.add(next[i], ext.mul(c, neg_root));
            }
            poly = next;
        }
        let coeffs =
            poly.into_iter().map(|c| ext.restrict(c).expect("minimal polynomial has base coefficients")).collect();
        out.push((Poly::new(coeffs), ext.from_log(k)));
    }
    out
}

/// All monic irreducibles of degree m in lexicographic order.
pub fn enumerate_irreducibles(field: &std::sync::Arc<FieldSpec>, m: u32) -> Result<Vec<PrimePoly>> {
    if m == 0 {
        return Ok(Vec::new());
    }
    let size = (field.q() as u128).checked_pow(m).unwrap_or(u128::MAX);
    if size > MAX_EXT_SIZE as u128 {
        let count = prime_count(field, m).to_u128().unwrap_or(u128::MAX);
        return Err(Error::TooMany { what: "irreducible polynomials", count, limit: MAX_EXT_SIZE as u128 });
    }
    let ext = extend_field(field, m)?;
    let mut polys: Vec<Poly> = irreducibles_with_roots(&ext).into_iter().map(|(p, _)| p).collect();
    polys.sort_by(|a, b| cmp_lex(field, a, b));
    Ok(polys.into_iter().map(PrimePoly::Finite).collect())
}

/// The i-th monic polynomial of degree d in code order (lower coefficients
/// are the low base-q digits of i).
pub fn monic_from_index(field: &FieldSpec, d: usize, mut i: u64) -> Poly {
    let q = field.q() as u64;
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        coeffs.push((i % q) as u32);
        i /= q;
    }
    coeffs.push(1);
    Poly::new(coeffs)
}

/// Number of monic polynomials of degree d, `q^d`.
pub fn monic_count(field: &FieldSpec, d: usize) -> BigInt {
    num_traits::pow(BigInt::from(field.q()), d)
}
