//! Main and error terms of the averaged trace formula, the lower order
//! correction `D_r(g,n)`, and random matrix moments.
//!
//! Everything is scaled by `q^(n/2)`, so the values are exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::sweep::FamilySweep;
use crate::arith::{divisors, gcd, prime_count, totient, units};
use crate::cyclotomic::{CycInt, RootSum};
use crate::error::{Error, Result};
use crate::families::{count_family, BlockSet, Branch, Conductor, FamilySpec};
use crate::polynomials::{is_irreducible, monic_from_index, Poly};

fn rational(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// The first monic irreducible of degree m in index order.
fn some_prime(spec: &FamilySpec, m: u32) -> Poly {
    let field = spec.field();
    (0u64..)
        .map(|i| monic_from_index(field, m as usize, i))
        .find(|p| is_irreducible(field, p))
        .expect("irreducibles exist in every degree")
}

/// `q^(n/2) MT_r(g,n) = -(1/|F|) [sum_{m|n} m pi_q(m) ((r,n/m)-1) |F(g;P_m)| + ((r,n)-1) |F(g;P_inf)|]`,
/// where `|F(g;P)|` counts members coprime to P and depends only on deg P.
pub fn mt_term(spec: &FamilySpec, n: u32) -> Result<BigRational> {
    let (q, r) = (spec.q(), spec.r() as u64);
    let size = count_family(spec, &Conductor::One)?;
    let mut total = BigInt::zero();
    for m in divisors(n as u64) {
        let w = gcd(r, n as u64 / m) - 1;
        if w == 0 {
            continue;
        }
        let coprime = count_family(spec, &Conductor::Finite(some_prime(spec, m as u32)))?;
        total += prime_count(q, m as u32) * m * w * coprime;
    }
    let w_inf = gcd(r, n as u64) - 1;
    if w_inf > 0 {
        total += count_family(spec, &Conductor::Infinity)? * w_inf;
    }
    Ok(-BigRational::new(total, size))
}

/// The error term computed from the symbol histograms of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct EtReport {
    /// Direct re-summation over all members (all alpha) and all i with
    /// `r` not dividing `i n / deg P`.
    pub definition: BigRational,
    /// `-(r/|F|) sum_P deg P sum_j (S_(j;0)(d;P) + sum_k S_(j;k)(d-1;P))` over
    /// the monic family with the `(r,n)`-th power symbol.
    pub reduced: BigRational,
    /// Contribution of the prime at infinity to the definition; always zero.
    pub infinity: BigRational,
}

impl EtReport {
    pub fn routes_agree(&self) -> bool {
        self.definition == self.reduced
    }
}

/// `q^(n/2) ET_r(g,n)` two ways. Needs a sweep with per-prime histograms up
/// to degree n.
pub fn et_term(spec: &FamilySpec, sweep: &FamilySweep, n: u32) -> Result<EtReport> {
    if !sweep.has_per_prime() || sweep.max_probe_degree() < n {
        return Err(Error::Invalid(format!("sweep lacks symbol histograms up to degree {n}")));
    }
    let r = spec.r();
    let r64 = r as u64;
    let gn = gcd(r64, n as u64);
    let size: u64 = sweep.distribution.total();
    let mut def = RootSum::new(r);
    let mut red = RootSum::new(r);
    for idx in 0..sweep.probes().len() {
        let m = sweep.probe_degree(idx);
        if n % m != 0 {
            continue;
        }
        let kk = (n / m) as u64;
        for b in Branch::ALL {
            for k in 0..r {
                let hist = sweep.symbol_histogram(idx, b, k).expect("histograms present");
                for e in 0..r as u64 {
                    let c = hist[e as usize] as i64;
                    if c == 0 {
                        continue;
                    }
                    for j in 0..r64 {
                        let x = e + j * m as u64;
                        for i in (1..r64).filter(|i| (i * kk) % r64 != 0) {
                            def.add_power_times(x * i * kk, c * m as i64);
                        }
                    }
                    for l in (1..gn).filter(|l| (l * kk) % gn != 0) {
                        red.add_power_times(e * (r64 / gn) * l * kk, c * m as i64);
                    }
                }
            }
        }
    }
    let mut inf = RootSum::new(r);
    let unram: u64 = sweep.monic_counts(Branch::Unramified)[0];
    for j in 0..r64 {
        for i in (1..r64).filter(|i| (i * n as u64) % r64 != 0) {
            inf.add_power_times(j * i * n as u64, unram as i64);
        }
    }
    let to_int = |s: &RootSum| {
        let c = s.to_cyc();
        c.as_integer().ok_or_else(|| Error::NonIntegerResult(format!("{c:?}")))
    };
    let inf_v = to_int(&inf)?;
    let def_v = to_int(&def)? + inf_v;
    let red_v = to_int(&red)? * r as i64;
    let den = BigInt::from(size);
    Ok(EtReport {
        definition: BigRational::new(BigInt::from(-def_v), den.clone()),
        reduced: BigRational::new(BigInt::from(-red_v), den.clone()),
        infinity: BigRational::new(BigInt::from(-inf_v), den),
    })
}

/// `S_(j;k)(D;P) = sum_F (F/P)_(r,n)^(j n / deg P)` over monic
/// `F = prod f_i^i` with radical degree D and `deg F = k mod r`, by direct
/// enumeration. Members divisible by P contribute 0.
pub fn s_jk_sum(spec: &FamilySpec, n: u32, j: u32, k: u32, radical_degree: u32, p: &Poly) -> Result<CycInt> {
    let r = spec.r();
    let m = p.deg() as u32;
    if m == 0 || n % m != 0 {
        return Err(Error::Invalid(format!("deg P = {m} must divide n = {n}")));
    }
    let gn = gcd(r as u64, n as u64) as u32;
    let ctx = spec.symbols();
    let blocks = BlockSet::new(spec, radical_degree.max(1))?;
    let syms: Vec<Option<u32>> = blocks.primes().iter().map(|b| ctx.symbol_exponent(b, p)).collect::<Result<_>>()?;
    let parts: Vec<u32> = units(r as u64).into_iter().map(|i| i as u32).collect();
    let mut sum = RootSum::new(r);
    let step = (r / gn) as u64 * j as u64 * (n / m) as u64;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        blocks: &BlockSet,
        syms: &[Option<u32>],
        parts: &[u32],
        r: u32,
        from: usize,
        left: u32,
        deg_f: u32,
        exp: Option<u32>,
        k: u32,
        step: u64,
        sum: &mut RootSum,
    ) {
        if left == 0 {
            if deg_f % r == k {
                if let Some(e) = exp {
                    sum.add_power(e as u64 * step);
                }
            }
            return;
        }
        for idx in from..blocks.len() {
            let dm = blocks.degree(idx);
            if dm > left {
                continue;
            }
            for &i in parts {
                let e = match (exp, syms[idx]) {
                    (Some(a), Some(s)) => Some((a + i * s) % r),
                    _ => None,
                };
                rec(blocks, syms, parts, r, idx + 1, left - dm, deg_f + i * dm, e, k, step, sum);
            }
        }
    }
    rec(&blocks, &syms, &parts, r, 0, radical_degree, 0, Some(0), k % r, step, &mut sum);
    Ok(sum.to_cyc())
}

/// `sum_{a=1}^{floor(d/m)} (-phi(r)/q^m)^a (1 - a m/d)^(phi(r)-1)`.
pub(crate) fn a_sum(q: u64, r: u32, d: u32, m: u32) -> BigRational {
    let phi = totient(r as u64);
    let x = BigRational::new(-BigInt::from(phi), BigInt::from(q).pow(m));
    let mut total = BigRational::zero();
    let mut xa = BigRational::one();
    for a in 1..=d / m {
        xa *= &x;
        let w = BigRational::new(BigInt::from(d - a * m), BigInt::from(d));
        total += &xa * num_traits::pow(w, phi as usize - 1);
    }
    total
}

/// `q^(n/2) D_r(g,n) = sum_{m|n} m pi_q(m) ((r,n/m)-1) sum_a (-phi(r)/q^m)^a (1 - a m/d)^(phi(r)-1)`.
pub fn d_r(spec: &FamilySpec, n: u32) -> BigRational {
    let (q, r, d) = (spec.q(), spec.r(), spec.d());
    let mut total = BigRational::zero();
    for m in divisors(n as u64) {
        let w = gcd(r as u64, n as u64 / m) - 1;
        if w == 0 || m as u32 > d {
            continue;
        }
        total += rational(prime_count(q, m as u32) * m * w) * a_sum(q, r, d, m as u32);
    }
    total
}

/// `sum_{s|(r,n), s>1} phi(s) q^(n/s)`, the leading secondary term of the
/// scaled average.
pub fn secondary_main_term(q: u64, r: u32, n: u32) -> BigInt {
    divisors(gcd(r as u64, n as u64))
        .into_iter()
        .filter(|&s| s > 1)
        .map(|s| BigInt::from(totient(s)) * BigInt::from(q).pow(n / s as u32))
        .sum()
}

/// Both sides of `sum_{m|n} m pi_q(m) ((r,n/m)-1) = sum_{s|(r,n), s>1} phi(s) q^(n/s)`.
pub fn a0_identity(q: u64, r: u32, n: u32) -> (BigInt, BigInt) {
    let lhs =
        divisors(n as u64).into_iter().map(|m| prime_count(q, m as u32) * m * (gcd(r as u64, n as u64 / m) - 1)).sum();
    (lhs, secondary_main_term(q, r, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixGroup {
    Symplectic,
    Unitary,
    /// The ensemble with `int Tr(U^n) = -phi(s)` for `s | n`, `n <= N/phi(s)`.
    Cyclic(u32),
}

/// `int Tr(U^n) dU` over the group of size N.
pub fn rmt_moment(group: MatrixGroup, size: u32, n: i64) -> Result<i64> {
    let big_n = size as i64;
    match group {
        MatrixGroup::Symplectic => Ok(match n {
            0 => big_n,
            _ if n % 2 == 0 && n.abs() <= big_n => -1,
            _ => 0,
        }),
        MatrixGroup::Unitary => Ok(if n == 0 { big_n } else { 0 }),
        MatrixGroup::Cyclic(s) => {
            let phi = totient(s as u64) as i64;
            if big_n % phi != 0 {
                return Err(Error::Invalid(format!("phi({s}) = {phi} does not divide N = {big_n}")));
            }
            let max = big_n / phi;
            if n < 1 || n > max {
                return Err(Error::OutOfRange { n, max });
            }
            Ok(if n % s as i64 == 0 { -phi } else { 0 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::sweep::sweep_family;

    #[test]
    fn a0_small_cases() {
        assert_eq!(a0_identity(3, 2, 2), (BigInt::from(3), BigInt::from(3)));
        assert_eq!(a0_identity(7, 3, 4), (BigInt::zero(), BigInt::zero()));
        for q in [7u64, 13] {
            let (l, r) = a0_identity(q, 6, 6);
            assert_eq!(l, r);
            assert_eq!(r, BigInt::from(q * q * q + 2 * q * q + 2 * q));
        }
    }

    #[test]
    fn moments() {
        assert_eq!(rmt_moment(MatrixGroup::Symplectic, 6, 2).unwrap(), -1);
        assert_eq!(rmt_moment(MatrixGroup::Unitary, 6, 5).unwrap(), 0);
        for n in 1..=4 {
            assert_eq!(
                rmt_moment(MatrixGroup::Cyclic(2), 4, n).unwrap(),
                rmt_moment(MatrixGroup::Symplectic, 4, n).unwrap()
            );
        }
        assert!(matches!(rmt_moment(MatrixGroup::Cyclic(3), 4, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn coprime_n_has_no_main_or_error_term() {
        let spec = FamilySpec::from_order(7, 3, 1).unwrap();
        let sweep = sweep_family(&spec, Some(2)).unwrap();
        for n in [1, 2] {
            assert!(mt_term(&spec, n).unwrap().is_zero());
            let et = et_term(&spec, &sweep, n).unwrap();
            assert!(et.definition.is_zero() && et.reduced.is_zero() && et.infinity.is_zero());
        }
        assert!(d_r(&spec, 2).is_zero());
    }

    #[test]
    fn s_jk_matches_histograms() {
        let spec = FamilySpec::from_order(7, 3, 1).unwrap();
        let sweep = sweep_family(&spec, Some(3)).unwrap();
        let n = 3;
        for idx in (0..sweep.probes().len()).filter(|&i| sweep.probe_degree(i) == 3).take(12) {
            let p = &sweep.probes()[idx];
            for (b, k, dd) in [(Branch::Unramified, 0, 3), (Branch::Ramified, 1, 2), (Branch::Ramified, 2, 2)] {
                let hist = sweep.symbol_histogram(idx, b, k).unwrap();
                let from_hist: CycInt = (0..3).map(|e| CycInt::root(3, e as i64).scale(&(hist[e] as i64))).sum();
                assert_eq!(s_jk_sum(&spec, n, 1, k, dd, p).unwrap(), from_hist);
            }
        }
    }
}
