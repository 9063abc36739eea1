//! Finite fields `F_q` and their extensions `F_(q^n)`.
//!
//! Elements are addressed by a *code*: the integer whose base-p digits are the
//! coefficients of the element in the polynomial basis of the tower
//! `F_p -> F_q -> F_(q^n)`, low degree first. For `F_(q^n)` the code is
//! `sum c_i q^i` with `c_i` the `F_q` code of the i-th coefficient, so the
//! embedded copy of `F_q` consists exactly of the codes `0..q`.
//!
//! Multiplication goes through discrete logarithms with respect to a fixed
//! generator and addition through a Zech table, so every operation is a
//! couple of table lookups. Moduli and generators are chosen
//! deterministically (smallest in lexicographic/code order), and the
//! generator of every extension has norm equal to the base generator, which
//! makes `log_(q^n)(c) = log_q(c) (q^n - 1)/(q - 1)` for `c` in `F_q`.

use std::sync::Arc;

use crate::arith::{is_prime, prime_factors};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::polynomials::{self, Poly};

/// Log of zero.
pub const ZERO_LOG: u32 = u32::MAX;

pub const MAX_BASE_SIZE: u64 = 1 << 20;
pub const MAX_EXT_SIZE: u64 = 1 << 24;

/// Discrete log, antilog and Zech tables of one finite field.
#[derive(Debug)]
pub struct LogTables {
    p: u32,
    digits: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

impl LogTables {
    fn build(p: u32, digits: u32, generator: u32, slow_mul: impl Fn(u32, u32) -> u32) -> Self {
        let size = p.pow(digits);
        let order = size - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![ZERO_LOG; size as usize];
        let mut cur = 1u32;
        for k in 0..order {
            exp.push(cur);
            debug_assert_eq!(log[cur as usize], ZERO_LOG, "generator has order below {order}");
            log[cur as usize] = k;
            cur = slow_mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);
        let zech = (0..order)
            .map(|k| {
                let s = digit_add(p, digits, 1, exp[k as usize]);
                log[s as usize]
            })
            .collect();
        let neg_one_log = if p == 2 { 0 } else { order / 2 };
        LogTables { p, digits, size, exp, log, zech, neg_one_log }
    }

    pub fn order(&self) -> u32 {
        self.size - 1
    }

    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        self.log[a as usize]
    }

    #[inline]
    pub fn exp(&self, k: u32) -> u32 {
        self.exp[(k % self.order()) as usize]
    }

    /// `log(1 + g^k)`, or [`ZERO_LOG`].
    #[inline]
    pub fn zech(&self, k: u32) -> u32 {
        self.zech[k as usize]
    }

    /// Sum of two elements given by their logs, as a log.
    #[inline]
    pub fn add_logs(&self, la: u32, lb: u32) -> u32 {
        if la == ZERO_LOG {
            return lb;
        }
        if lb == ZERO_LOG {
            return la;
        }
        let order = self.order();
        let diff = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[diff as usize];
        if z == ZERO_LOG {
            ZERO_LOG
        } else {
            let s = la as u64 + z as u64;
            (s % order as u64) as u32
        }
    }

    #[inline]
    pub fn mul_logs(&self, la: u32, lb: u32) -> u32 {
        if la == ZERO_LOG || lb == ZERO_LOG {
            ZERO_LOG
        } else {
            ((la as u64 + lb as u64) % self.order() as u64) as u32
        }
    }
}

fn digit_add(p: u32, digits: u32, mut a: u32, mut b: u32) -> u32 {
    if digits == 1 {
        return (a + b) % p;
    }
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0;
    let mut place = 1;
    for _ in 0..digits {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Shared arithmetic of [`FieldSpec`] and [`ExtFieldSpec`], on element codes.
pub trait FiniteField {
    fn tables(&self) -> &LogTables;

    fn size(&self) -> u64 {
        self.tables().size as u64
    }

    fn characteristic(&self) -> u32 {
        self.tables().p
    }

    /// Code of the fixed multiplicative generator.
    fn generator(&self) -> u32 {
        self.tables().exp[1 % self.tables().exp.len()]
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let t = self.tables();
        if t.digits == 1 {
            return (a + b) % t.p;
        }
        if t.p == 2 {
            return a ^ b;
        }
        let l = t.add_logs(t.log(a), t.log(b));
        if l == ZERO_LOG {
            0
        } else {
            t.exp[l as usize]
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        let t = self.tables();
        if a == 0 || t.p == 2 {
            return a;
        }
        if t.digits == 1 {
            return t.p - a;
        }
        t.exp((t.log(a) + t.neg_one_log) % t.order())
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.tables();
        t.exp[((t.log(a) as u64 + t.log(b) as u64) % t.order() as u64) as usize]
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let t = self.tables();
        Some(t.exp((t.order() - t.log(a)) % t.order()))
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = self.tables();
        let k = (t.log(a) as u128 * e as u128 % t.order() as u128) as u32;
        t.exp[k as usize]
    }

    /// Discrete log base the generator, `None` for zero.
    fn log(&self, a: u32) -> Option<u32> {
        let l = self.tables().log(a);
        (l != ZERO_LOG).then_some(l)
    }

    fn from_log(&self, k: u64) -> u32 {
        let t = self.tables();
        t.exp[(k % t.order() as u64) as usize]
    }
}

/// The base field `F_q`, `q = p^a`.
#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    a: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Arc<LogTables>,
}

impl FiniteField for FieldSpec {
    fn tables(&self) -> &LogTables {
        &self.tables
    }
}

/// Multiply two codes of `F_p[x]/(modulus)`, schoolbook.
fn prime_poly_mulmod(p: u32, modulus: &[u32], a: u32, b: u32) -> u32 {
    let deg = modulus.len() - 1;
    let da = to_digits(p, deg, a);
    let db = to_digits(p, deg, b);
    let mut prod = vec![0u64; 2 * deg];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (deg..2 * deg).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (j, &mj) in modulus.iter().enumerate().take(deg) {
            let idx = k - deg + j;
            prod[idx] = (prod[idx] + (p as u64 - c) * mj as u64) % p as u64;
        }
        prod[k] = 0;
    }
    from_digits(p, &prod[..deg].iter().map(|&c| c as u32).collect::<Vec<_>>())
}

fn to_digits(base: u32, len: usize, mut code: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % base);
        code /= base;
    }
    out
}

fn from_digits(base: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Brute-force irreducibility over a prime field by trial division with every
/// monic polynomial of degree up to half.
fn irreducible_over_prime(p: u32, f: &[u32]) -> bool {
    let n = f.len() - 1;
    for dd in 1..=n / 2 {
        for code in 0..p.pow(dd as u32) {
            let mut g = to_digits(p, dd, code);
            g.push(1);
            if rem_over_prime(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn rem_over_prime(p: u32, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    for k in (dg..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (j, &gj) in g.iter().enumerate() {
            let idx = k - dg + j;
            r[idx] = (r[idx] + (p as u64 - c) * gj as u64) % p as u64;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

/// Smallest element (by code) of exact multiplicative order `size - 1`
/// satisfying `extra`.
fn find_generator(size: u64, mul: impl Fn(u32, u32) -> u32, extra: impl Fn(u32) -> bool) -> Option<u32> {
    let order = size - 1;
    let pow = |mut b: u32, mut e: u64| {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let factors = prime_factors(order);
    (1..size as u32).find(|&c| factors.iter().all(|&l| pow(c, order / l) != 1) && pow(c, order) == 1 && extra(c))
}

/// Builds `F_(p^a)` with the lexicographically smallest monic irreducible
/// modulus (coefficients compared from the constant term up) and the smallest
/// generator in code order.
pub fn make_field(p: u64, a: u32) -> Result<Arc<FieldSpec>> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if a == 0 {
        return Err(Error::Invalid("field degree must be positive".into()));
    }
    let size = (p as u128).checked_pow(a).unwrap_or(u128::MAX);
    if size > MAX_BASE_SIZE as u128 {
        return Err(Error::FieldTooLarge { size, cap: MAX_BASE_SIZE as u128 });
    }
    let p32 = p as u32;
    let q = size as u32;
    let modulus = if a == 1 {
        vec![0, 1]
    } else {
        // the constant term is the most significant digit of the search order
        (0..q)
            .map(|k| {
                let mut digits = to_digits(p32, a as usize, k);
                digits.reverse();
                digits.push(1);
                digits
            })
            .find(|m| irreducible_over_prime(p32, m))
            .expect("an irreducible polynomial of every degree exists")
    };
    let mul = |x: u32, y: u32| {
        if a == 1 {
            ((x as u64 * y as u64) % p) as u32
        } else {
            prime_poly_mulmod(p32, &modulus, x, y)
        }
    };
    let generator = if q == 2 { 1 } else { find_generator(q as u64, mul, |_| true).expect("F_q^* is cyclic") };
    let tables = LogTables::build(p32, a, generator, mul);
    Ok(Arc::new(FieldSpec { p: p32, a, q, modulus, tables: Arc::new(tables) }))
}

/// Builds `F_q` from its order, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<Arc<FieldSpec>> {
    if q < 2 {
        return Err(Error::NonPrime(q));
    }
    let p = prime_factors(q)[0];
    let mut a = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    if rest != 1 {
        return Err(Error::NonPrime(q));
    }
    make_field(p, a)
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus over `F_p`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Ordering key of an element: 0 for zero, `1 + log` otherwise.
    #[inline]
    pub fn order_key(&self, c: u32) -> u32 {
        if c == 0 {
            0
        } else {
            self.tables.log(c) + 1
        }
    }
}

/// The extension `F_(q^n) = F_q[y]/(M(y))`.
#[derive(Debug)]
pub struct ExtFieldSpec {
    base: Arc<FieldSpec>,
    n: u32,
    modulus: Poly,
    tables: Arc<LogTables>,
}

impl FiniteField for ExtFieldSpec {
    fn tables(&self) -> &LogTables {
        &self.tables
    }
}

fn ext_mulmod(base: &FieldSpec, modulus: &[u32], a: u32, b: u32) -> u32 {
    let n = modulus.len() - 1;
    let q = base.q();
    let da = to_digits(q, n, a);
    let db = to_digits(q, n, b);
    let mut prod = vec![0u32; 2 * n];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = base.add(prod[i + j], base.mul(x, y));
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (j, &mj) in modulus.iter().enumerate().take(n) {
            let idx = k - n + j;
            prod[idx] = base.sub(prod[idx], base.mul(c, mj));
        }
        prod[k] = 0;
    }
    from_digits(q, &prod[..n])
}

/// Builds `F_(q^n)` over `base`. The modulus is the smallest monic
/// irreducible of degree n in code order; the generator is the smallest
/// primitive element whose norm to `F_q` is the base generator.
pub fn extend_field(base: &Arc<FieldSpec>, n: u32) -> Result<Arc<ExtFieldSpec>> {
    if n == 0 {
        return Err(Error::Invalid("extension degree must be positive".into()));
    }
    let q = base.q() as u64;
    let size = (q as u128).checked_pow(n).unwrap_or(u128::MAX);
    if size > MAX_EXT_SIZE as u128 {
        return Err(Error::FieldTooLarge { size, cap: MAX_EXT_SIZE as u128 });
    }
    if n == 1 {
        return Ok(Arc::new(ExtFieldSpec {
            base: base.clone(),
            n,
            modulus: Poly::new(vec![0, 1]),
            tables: base.tables.clone(),
        }));
    }
    let q32 = base.q();
    let mut modulus = None;
    for k in 0..q32.pow(n) {
        let mut coeffs = to_digits(q32, n as usize, k);
        coeffs.push(1);
        let cand = Poly::new(coeffs);
        if polynomials::is_irreducible(base, &cand) {
            modulus = Some(cand);
            break;
        }
    }
    let modulus = modulus.expect("an irreducible polynomial of every degree exists");
    let m = modulus.coeffs().to_vec();
    let mul = |x: u32, y: u32| ext_mulmod(base, &m, x, y);
    let norm_exp = (size as u64 - 1) / (q - 1);
    let beta = base.generator();
    let pow = |mut b: u32, mut e: u64| {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let generator =
        find_generator(size as u64, mul, |c| pow(c, norm_exp) == beta).expect("a norm-compatible generator exists");
    let digits = base.degree() * n;
    let tables = LogTables::build(base.p(), digits, generator, mul);
    Ok(Arc::new(ExtFieldSpec { base: base.clone(), n, modulus, tables: Arc::new(tables) }))
}

impl ExtFieldSpec {
    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `(q^n - 1)/(q - 1)`: logs of embedded base elements are multiples of this.
    pub fn norm_exponent(&self) -> u64 {
        (self.size() - 1) / (self.base.q() as u64 - 1)
    }

    /// Embedding of `F_q`; on codes it is the identity.
    #[inline]
    pub fn embed(&self, c: u32) -> u32 {
        debug_assert!(c < self.base.q());
        c
    }

    /// Log in this field of an embedded base element given by its base log.
    #[inline]
    pub fn embed_log(&self, base_log: u32) -> u32 {
        if base_log == ZERO_LOG {
            ZERO_LOG
        } else {
            ((base_log as u64 * self.norm_exponent()) % self.tables.order() as u64) as u32
        }
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn restrict(&self, x: u32) -> Option<u32> {
        (x < self.base.q()).then_some(x)
    }

    /// Horner evaluation of a polynomial over `F_q` at `x`, in log form.
    pub fn eval_log(&self, f: &Poly, x: u32) -> u32 {
        let t = &*self.tables;
        let base = &*self.base;
        let lx = t.log(x);
        let mut acc = ZERO_LOG;
        for &c in f.coeffs().iter().rev() {
            acc = t.mul_logs(acc, lx);
            acc = t.add_logs(acc, self.embed_log(base.tables.log(c)));
        }
        acc
    }

    pub fn eval(&self, f: &Poly, x: u32) -> u32 {
        let l = self.eval_log(f, x);
        if l == ZERO_LOG {
            0
        } else {
            self.tables.exp(l)
        }
    }

    /// Exponent `t mod s` with `chi_(s;n)(x) = xi_s^t`, or `None` for `x = 0`.
    pub fn char_exponent(&self, s: u32, x: u32) -> Result<Option<u32>> {
        self.check_congruence(s)?;
        Ok(self.log(x).map(|l| l % s))
    }

    fn check_congruence(&self, s: u32) -> Result<()> {
        let q = self.base.q() as u64;
        if s == 0 || (q - 1) % s as u64 != 0 {
            return Err(Error::BadCongruence { q, modulus: s as u64 });
        }
        Ok(())
    }

    /// The character `chi_(s;n)` of this field with values in `Z[xi_ring]`
    /// (`s | ring`): zero at zero, `xi_s^t` at `generator^t`.
    pub fn char_eval(&self, s: u32, x: u32, ring: u32) -> Result<CycInt> {
        if ring % s != 0 {
            return Err(Error::Invalid(format!("{s} does not divide the ring order {ring}")));
        }
        Ok(match self.char_exponent(s, x)? {
            None => CycInt::zero(ring),
            Some(t) => CycInt::sub_root(ring, s, t as i64),
        })
    }
}

/// `chi_(s;n)(x)` for the extension `ext`, valued in `Z[xi_ring]`.
pub fn char_eval(ext: &ExtFieldSpec, s: u32, x: u32, ring: u32) -> Result<CycInt> {
    ext.char_eval(s, x, ring)
}
