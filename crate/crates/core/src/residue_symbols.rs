//! Power residue symbols `(F/P)_s` for finite primes and the prime at
//! infinity, and character values recovered from them.
//!
//! `(F/P)_s = chi_(s;deg P)(F(a))` for a root `a` of `P` in `F_(q^deg P)`.
//! Roots come from per-degree tables built once from Frobenius orbits, so a
//! symbol costs one Horner evaluation in the extension and one log lookup.
//! `xi_s` corresponds to `beta^((q-1)/s)` in `F_q`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::finite_field::{extend_field, ExtFieldSpec, FieldSpec, FiniteField, ZERO_LOG};
use crate::polynomials::{irreducibles_with_roots, Poly, PrimePoly};

/// A point of `P^1(F_(q^n))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(u32),
    Infinity,
}

pub struct SymbolContext {
    field: Arc<FieldSpec>,
    r: u32,
    exts: RwLock<HashMap<u32, Arc<ExtFieldSpec>>>,
    roots: RwLock<HashMap<u32, Arc<HashMap<Poly, u32>>>>,
}

impl SymbolContext {
    pub fn new(field: Arc<FieldSpec>, r: u32) -> Result<Self> {
        let q = field.q() as u64;
        if r < 2 || (q - 1) % r as u64 != 0 {
            return Err(Error::BadCongruence { q, modulus: r as u64 });
        }
        Ok(SymbolContext { field, r, exts: RwLock::default(), roots: RwLock::default() })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Cached extension of degree n.
    pub fn ext(&self, n: u32) -> Result<Arc<ExtFieldSpec>> {
        if let Some(e) = self.exts.read().unwrap().get(&n) {
            return Ok(e.clone());
        }
        let e = extend_field(&self.field, n)?;
        Ok(self.exts.write().unwrap().entry(n).or_insert(e).clone())
    }

    /// Table from each monic irreducible of degree m to one of its roots.
    pub fn root_table(&self, m: u32) -> Result<Arc<HashMap<Poly, u32>>> {
        if let Some(t) = self.roots.read().unwrap().get(&m) {
            return Ok(t.clone());
        }
        let ext = self.ext(m)?;
        let table: HashMap<Poly, u32> = irreducibles_with_roots(&ext).into_iter().collect();
        Ok(self.roots.write().unwrap().entry(m).or_insert(Arc::new(table)).clone())
    }

    fn check_divisor(&self, s: u32) -> Result<()> {
        if s == 0 || self.r % s != 0 {
            return Err(Error::BadCongruence { q: self.field.q() as u64, modulus: s as u64 });
        }
        Ok(())
    }

    /// Log of `F(a)` in `F_(q^deg P)` for a root `a` of `P`, reduced mod r;
    /// `None` when `P | F`.
    pub fn symbol_exponent(&self, f: &Poly, p: &Poly) -> Result<Option<u32>> {
        let m = p.deg() as u32;
        let ext = self.ext(m)?;
        let table = self.root_table(m)?;
        let root = *table.get(p).ok_or_else(|| Error::Invalid(format!("{p:?} is not a monic irreducible")))?;
        let l = ext.eval_log(f, root);
        Ok((l != ZERO_LOG).then_some(l % self.r))
    }

    /// `(F/P)_s`, realized in `Z[xi_r]`.
    pub fn legendre(&self, f: &Poly, p: &PrimePoly, s: u32) -> Result<CycInt> {
        self.check_divisor(s)?;
        match p {
            PrimePoly::Infinity => self.symbol_infinity(f, s),
            PrimePoly::Finite(p) => Ok(match self.symbol_exponent(f, p)? {
                None => CycInt::zero(self.r),
                Some(t) => CycInt::sub_root(self.r, s, (t % s) as i64),
            }),
        }
    }

    /// `(F/P_inf)_s`: `chi_(s;1)` of the leading coefficient if `s | deg F`,
    /// else 0.
    pub fn symbol_infinity(&self, f: &Poly, s: u32) -> Result<CycInt> {
        self.check_divisor(s)?;
        let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
        if deg % s as usize != 0 {
            return Ok(CycInt::zero(self.r));
        }
        let t = self.field.log(f.leading()).unwrap();
        Ok(CycInt::sub_root(self.r, s, (t % s) as i64))
    }

    /// `(F/P)_s` by Euler's criterion: `F^((q^m - 1)/s) mod P` is a constant
    /// in `mu_s(F_q)`, matched against powers of `beta^((q-1)/s)`.
    pub fn legendre_by_euler(&self, f: &Poly, p: &Poly, s: u32) -> Result<CycInt> {
        self.check_divisor(s)?;
        let field = &*self.field;
        let m = p.deg();
        let e = (num_traits::pow(BigUint::from(field.q()), m) - 1u32) / s;
        let reduced = f.rem(p, field);
        if reduced.is_zero() {
            return Ok(CycInt::zero(self.r));
        }
        let c = reduced.pow_mod(&e, p, field);
        if c.deg() != 0 {
            return Err(Error::Invalid("Euler power is not a constant".into()));
        }
        let zeta = field.pow(field.generator(), ((field.q() - 1) / s) as u64);
        let t = (0..s)
            .find(|&t| field.pow(zeta, t as u64) == c.coeff(0))
            .ok_or_else(|| Error::Invalid("Euler power is not an s-th root of unity".into()))?;
        Ok(CycInt::sub_root(self.r, s, t as i64))
    }

    /// `chi_(s;n)(F(alpha))` through the symbol at the minimal polynomial of
    /// `alpha`, raised to `n / deg P_alpha`. The direct character value is
    /// computed too and must agree.
    pub fn char_via_symbol(&self, f: &Poly, alpha: Point, s: u32, n: u32) -> Result<CycInt> {
        self.check_divisor(s)?;
        let ext = self.ext(n)?;
        let (via_symbol, direct) = match alpha {
            Point::Infinity => {
                let sym = self.symbol_infinity(f, s)?;
                let value = if f.deg() % s as usize == 0 { f.leading() } else { 0 };
                (sym.pow(n), ext.char_eval(s, ext.embed(value), self.r)?)
            }
            Point::Finite(a) => {
                let p = minimal_polynomial(&ext, a);
                let e = p.deg() as u32;
                let sym = self.legendre(f, &PrimePoly::Finite(p), s)?;
                (sym.pow(n / e), ext.char_eval(s, ext.eval(f, a), self.r)?)
            }
        };
        assert_eq!(via_symbol, direct, "symbol and direct character values disagree");
        Ok(direct)
    }
}

/// Minimal polynomial over `F_q` of an element of `ext`.
pub fn minimal_polynomial(ext: &ExtFieldSpec, a: u32) -> Poly {
    let q = ext.base().q() as u64;
    let mut conj = vec![a];
    loop {
        let next = ext.pow(*conj.last().unwrap(), q);
        if next == a {
            break;
        }
        conj.push(next);
    }
    let mut poly = vec![1u32];
    for &c in &conj {
        let neg = ext.neg(c);
        let mut next = vec![0u32; poly.len() + 1];
        for (i, &x) in poly.iter().enumerate() {
            next[i + 1] = ext.add(next[i + 1], x);
            next[i] = ext.add(next[i], ext.mul(x, neg));
        }
        poly = next;
    }
    Poly::new(poly.into_iter().map(|c| ext.restrict(c).expect("coefficients lie in the base field")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;

    fn ctx(q: u64, r: u32) -> SymbolContext {
        SymbolContext::new(make_field(q, 1).unwrap(), r).unwrap()
    }

    #[test]
    fn rejects_bad_congruence() {
        assert!(matches!(SymbolContext::new(make_field(5, 1).unwrap(), 3), Err(Error::BadCongruence { .. })));
    }

    #[test]
    fn trivial_symbols() {
        let c = ctx(7, 3);
        let p = PrimePoly::Finite(Poly::new(vec![1, 1]));
        // P | F
        assert!(c.legendre(&Poly::new(vec![1, 1]), &p, 3).unwrap().is_zero());
        // F = 1 + (x + 1)(x) is 1 mod P
        let f = Poly::new(vec![1, 1, 1]);
        assert_eq!(c.legendre(&f, &p, 3).unwrap(), CycInt::one(3));
    }

    #[test]
    fn infinity_symbols() {
        let c = ctx(7, 3);
        assert!(c.symbol_infinity(&Poly::new(vec![0, 1]), 3).unwrap().is_zero());
        assert_eq!(c.symbol_infinity(&Poly::monomial(1, 3), 3).unwrap(), CycInt::one(3));
        assert_eq!(c.symbol_infinity(&Poly::monomial(3, 3), 3).unwrap(), CycInt::root(3, 1));
        let c5 = ctx(5, 2);
        assert!(c5.symbol_infinity(&Poly::monomial(1, 3), 2).unwrap().is_zero());
    }

    #[test]
    fn symbol_agrees_with_euler_criterion() {
        let c = ctx(13, 4);
        let field = c.field().clone();
        for m in 1..=2 {
            for (p, _) in irreducibles_with_roots(&c.ext(m).unwrap()) {
                for k in 0..169u64 {
                    let f = crate::polynomials::monic_from_index(&field, 2, k);
                    for s in [2, 4] {
                        let pp = PrimePoly::Finite(p.clone());
                        assert_eq!(c.legendre(&f, &pp, s).unwrap(), c.legendre_by_euler(&f, &p, s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn characters_through_minimal_polynomials() {
        let c = ctx(5, 2);
        let ext = c.ext(2).unwrap();
        for a in 0..25 {
            c.char_via_symbol(&Poly::x(), Point::Finite(a), 2, 2).unwrap();
        }
        c.char_via_symbol(&Poly::monomial(2, 4), Point::Infinity, 2, 3).unwrap();
        assert_eq!(minimal_polynomial(&ext, 3).deg(), 1);
    }
}
