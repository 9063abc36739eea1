//! Exact arithmetic in the cyclotomic integers `Z[xi_r]`.
//!
//! An element is stored as its canonical representative modulo the r-th
//! cyclotomic polynomial, i.e. a coefficient vector of length `phi(r)` in the
//! power basis `1, xi, ..., xi^(phi(r)-1)`. Two elements are equal iff their
//! coefficient vectors are equal, so zero tests are exact.
//!
//! Every s-th root of unity with `s | r` is realized as `xi_r^(r/s)`, which
//! keeps all character sums of one family inside a single ring.

use std::collections::HashMap;
use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{divisors, totient};

/// Integer coefficient types usable in [`CycInt`].
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + From<i64>
    + ToPrimitive
    + Send
    + Sync
{
}

impl Coeff for i64 {}
impl Coeff for BigInt {}

#[derive(Debug)]
struct CycRing {
    phi: usize,
    /// Canonical forms of xi^t for t in 0..order.
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_poly(order: u64, cache: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&order) {
        return p.clone();
    }
    // x^order - 1, low degree first
    let mut num = vec![0i64; order as usize + 1];
    num[0] = -1;
    num[order as usize] = 1;
    for d in divisors(order) {
        if d == order {
            continue;
        }
        let den = cyclotomic_poly(d, cache);
        num = exact_div_monic(&num, &den);
    }
    cache.insert(order, num.clone());
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn ring(order: u32) -> &'static CycRing {
    static RINGS: OnceLock<Mutex<HashMap<u32, &'static CycRing>>> = OnceLock::new();
    let map = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("cyclotomic ring cache poisoned");
    if let Some(r) = guard.get(&order) {
        return r;
    }
    let mut cache = HashMap::new();
    let phi_poly = cyclotomic_poly(order as u64, &mut cache);
    let phi = totient(order as u64) as usize;
    debug_assert_eq!(phi_poly.len(), phi + 1);
    let mut powers = Vec::with_capacity(order as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..order {
        powers.push(cur.clone());
        // multiply by x and reduce with the monic cyclotomic polynomial
        let top = cur[phi - 1];
        for k in (1..phi).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for k in 0..phi {
                cur[k] -= top * phi_poly[k];
            }
        }
    }
    let leaked: &'static CycRing = Box::leak(Box::new(CycRing { phi, powers }));
    guard.insert(order, leaked);
    leaked
}

/// Element of `Z[xi_order]` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt<T = i64> {
    order: u32,
    coeffs: Vec<T>,
}

impl<T: Coeff> CycInt<T> {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let phi = ring(order).phi;
        CycInt { order, coeffs: vec![T::zero(); phi] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, T::one())
    }

    pub fn from_int(order: u32, value: T) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    /// `xi_order^t` for any integer exponent.
    pub fn root(order: u32, t: i64) -> Self {
        let e = t.rem_euclid(order as i64) as usize;
        let coeffs = ring(order).powers[e].iter().map(|&c| T::from(c)).collect();
        CycInt { order, coeffs }
    }

    /// `xi_s^t` realized as `xi_order^((order/s) t)`.
    pub fn sub_root(order: u32, s: u32, t: i64) -> Self {
        assert!(order % s == 0, "{s} does not divide {order}");
        Self::root(order, (order / s) as i64 * t)
    }

    pub fn from_coeffs(order: u32, coeffs: Vec<T>) -> Self {
        assert_eq!(coeffs.len(), ring(order).phi, "wrong canonical length");
        CycInt { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        CycInt { order: self.order, coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Complex value at `xi = exp(2 pi i / order)`.
    pub fn to_complex(&self) -> Complex64 {
        let w = 2.0 * std::f64::consts::PI / self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), w * k as f64))
            .sum()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.order, other.order, "mixing cyclotomic rings of different order");
    }
}

impl<T: Coeff> Debug for CycInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt<{}>{:?}", self.order, self.coeffs)
    }
}

impl<T: Coeff> Add for &CycInt<T> {
    type Output = CycInt<T>;
    fn add(self, rhs: Self) -> CycInt<T> {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        CycInt { order: self.order, coeffs }
    }
}

impl<T: Coeff> Sub for &CycInt<T> {
    type Output = CycInt<T>;
    fn sub(self, rhs: Self) -> CycInt<T> {
        self.check(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        CycInt { order: self.order, coeffs }
    }
}

impl<T: Coeff> Neg for &CycInt<T> {
    type Output = CycInt<T>;
    fn neg(self) -> CycInt<T> {
        CycInt { order: self.order, coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }
}

impl<T: Coeff> Mul for &CycInt<T> {
    type Output = CycInt<T>;
    fn mul(self, rhs: Self) -> CycInt<T> {
        self.check(rhs);
        let ring = ring(self.order);
        let phi = ring.phi;
        let mut wide = vec![T::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                wide[i + j] = wide[i + j].clone() + a.clone() * b.clone();
            }
        }
        let mut coeffs: Vec<T> = wide[..phi].to_vec();
        for (k, c) in wide.into_iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            let red = &ring.powers[k % self.order as usize];
            for (slot, &rc) in coeffs.iter_mut().zip(red) {
                if rc != 0 {
                    *slot = slot.clone() + c.clone() * T::from(rc);
                }
            }
        }
        CycInt { order: self.order, coeffs }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr for CycInt<T> {
            type Output = CycInt<T>;
            fn $m(self, rhs: Self) -> CycInt<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Coeff> std::iter::Sum for CycInt<T> {
    fn sum<I: Iterator<Item = Self>>(mut iter: I) -> Self {
        let first = iter.next().expect("summing an empty iterator of CycInt needs an order");
        iter.fold(first, |acc, x| &acc + &x)
    }
}

/// Accumulates a multiset of roots of unity `xi_order^t` by exponent and
/// converts to canonical form once. This is the hot-path alternative to
/// repeated [`CycInt`] additions.
#[derive(Clone, Debug)]
pub struct RootSum {
    order: u32,
    counts: Vec<i64>,
}

impl RootSum {
    pub fn new(order: u32) -> Self {
        RootSum { order, counts: vec![0; order as usize] }
    }

    #[inline]
    pub fn add_power(&mut self, t: u64) {
        self.counts[(t % self.order as u64) as usize] += 1;
    }

    #[inline]
    pub fn add_power_times(&mut self, t: u64, times: i64) {
        self.counts[(t % self.order as u64) as usize] += times;
    }

    pub fn add_integer(&mut self, k: i64) {
        self.counts[0] += k;
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn to_cyc(&self) -> CycInt<i64> {
        let ring = ring(self.order);
        let mut coeffs = vec![0i64; ring.phi];
        for (t, &n) in self.counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for (slot, &c) in coeffs.iter_mut().zip(&ring.powers[t]) {
                *slot += n * c;
            }
        }
        CycInt { order: self.order, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_multiplicative() {
        for order in [1u32, 2, 3, 4, 5, 6, 8, 9, 12] {
            for a in 0..order as i64 {
                for b in 0..order as i64 {
                    let lhs = &CycInt::<i64>::root(order, a) * &CycInt::root(order, b);
                    assert_eq!(lhs, CycInt::root(order, a + b));
                }
            }
        }
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for order in [2u32, 3, 4, 6, 12] {
            let s: CycInt = (0..order as i64).map(|t| CycInt::root(order, t)).sum();
            assert!(s.is_zero(), "order {order}");
        }
    }

    #[test]
    fn complex_evaluation() {
        for order in [3u32, 4, 5, 12] {
            for t in 0..order as i64 {
                let z = CycInt::<i64>::root(order, t).to_complex();
                let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / order as f64);
                assert!((z - w).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ramanujan_sums_are_integers() {
        // sum over units i mod 6 of xi_6^(i m)
        for m in 0..12i64 {
            let s: CycInt = [1i64, 5].iter().map(|i| CycInt::root(6, i * m)).sum();
            assert!(s.as_integer().is_some());
        }
    }

    #[test]
    fn root_sum_matches_direct_sum() {
        let mut acc = RootSum::new(5);
        let mut direct = CycInt::<i64>::zero(5);
        for t in [0u64, 3, 3, 7, 11, 4] {
            acc.add_power(t);
            direct = &direct + &CycInt::root(5, t as i64);
        }
        assert_eq!(acc.to_cyc(), direct);
    }

    #[test]
    fn big_coefficients() {
        let x = CycInt::<BigInt>::root(3, 1).scale(&BigInt::from(10).pow(30));
        let y = &x * &x;
        assert_eq!(y, CycInt::root(3, 2).scale(&BigInt::from(10).pow(60)));
    }
}
