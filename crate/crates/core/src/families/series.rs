//! Generating series `H_(r;s)(u;G) = prod_{P not dividing G} (1 + (phi(r)/phi(s)) c_s(deg P) u^deg P)`
//! and the exact family counts extracted from their coefficients.
//!
//! `c_s(m) = sum_{(i,s)=1} xi_s^(i m)` is a Ramanujan sum, so every local
//! factor has integer coefficients and the product is built by dynamic
//! programming over degree classes of primes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Branch, Conductor, FamilySpec};
use crate::arith::{big_binomial, big_pow, divisors, mobius, ramanujan_sum, totient, units};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::polynomials::{self, prime_count, PrimePoly};

pub const MAX_SERIES_DEGREE: u32 = 40;

/// Coefficients `[u^0..=u^d_max] H_(r;s)(u;G)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub r: u32,
    pub s: u32,
    pub conductor: Conductor,
    pub coeffs: Vec<BigInt>,
}

impl SeriesTable {
    pub fn coeff(&self, k: u32) -> BigInt {
        self.coeffs.get(k as usize).cloned().unwrap_or_default()
    }

    /// Coefficient as an element of `Z[xi_r]`.
    pub fn coeff_cyc(&self, k: u32) -> CycInt<BigInt> {
        CycInt::from_int(self.r, self.coeff(k))
    }
}

/// Number of distinct prime divisors of `G` of each degree.
fn conductor_degrees(field: &FieldSpec, conductor: &Conductor) -> Result<HashMap<u32, u64>> {
    let mut out = HashMap::new();
    if let Conductor::Finite(g) = conductor {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        for (p, _) in polynomials::factor(field, &g.make_monic(field))? {
            *out.entry(p.degree() as u32).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// `H_(r;s)(u;G)` up to `u^d_max`. The prime at infinity never enters the
/// product, so `Conductor::Infinity` gives the same table as `One`.
pub fn series_coeff(field: &FieldSpec, r: u32, s: u32, conductor: &Conductor, d_max: u32) -> Result<SeriesTable> {
    if s == 0 || r % s != 0 {
        return Err(Error::Invalid(format!("{s} does not divide {r}")));
    }
    if d_max > MAX_SERIES_DEGREE {
        return Err(Error::DegreeTooLarge { degree: d_max as usize, limit: MAX_SERIES_DEGREE as usize });
    }
    let excluded = conductor_degrees(field, conductor)?;
    let weight = (totient(r as u64) / totient(s as u64)) as i64;
    let len = d_max as usize + 1;
    let mut coeffs = vec![BigInt::zero(); len];
    coeffs[0] = BigInt::one();
    for m in 1..=d_max {
        let c = BigInt::from(weight * ramanujan_sum(s as u64, m as u64));
        if c.is_zero() {
            continue;
        }
        let primes = prime_count(field, m) - BigInt::from(*excluded.get(&m).unwrap_or(&0));
        // (1 + c u^m)^primes, truncated
        let max_a = d_max / m;
        let factor: Vec<BigInt> =
            (0..=max_a).map(|a| big_binomial(&primes, a) * num_traits::pow(c.clone(), a as usize)).collect();
        let mut next = vec![BigInt::zero(); len];
        for (k, ck) in coeffs.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            for (a, fa) in factor.iter().enumerate() {
                let idx = k + a * m as usize;
                if idx >= len {
                    break;
                }
                next[idx] += ck * fa;
            }
        }
        coeffs = next;
    }
    Ok(SeriesTable { r, s, conductor: conductor.clone(), coeffs })
}

/// `|F^_(r;k)(D;G)|`, monic members `prod f_i^i` of radical degree D with
/// `deg F = k mod r`, coprime to G, through the character expansion
/// `(1/r) sum_{s|r} sum_{(j,s)=1} xi_s^(-jk) [u^D] H_(r;s)(u;G)`.
pub fn refined_count(field: &FieldSpec, r: u32, radical_degree: u32, k: u32, conductor: &Conductor) -> Result<BigInt> {
    let mut acc = CycInt::<BigInt>::zero(r);
    for s in divisors(r as u64) {
        let s = s as u32;
        let table = series_coeff(field, r, s, conductor, radical_degree)?;
        let c = table.coeff(radical_degree);
        for j in units(s as u64) {
            acc = acc + CycInt::<BigInt>::sub_root(r, s, -(j as i64) * k as i64).scale(&c);
        }
    }
    let total = acc.as_integer().ok_or_else(|| Error::NonIntegerResult(format!("{acc:?}")))?;
    let r_big = BigInt::from(r);
    if !(&total % &r_big).is_zero() {
        return Err(Error::NonIntegerResult(format!("{total}/{r}")));
    }
    Ok(total / r_big)
}

/// `|F^thin_r(g;G)|` from the residue-refined counts:
/// `r (|F^_(r;0)(d;G)| + sum_{(k,r)=1} |F^_(r;k)(d-1;G)|)`, and
/// `r |F^_(r;0)(d)|` for the prime at infinity.
pub fn count_family(spec: &FamilySpec, conductor: &Conductor) -> Result<BigInt> {
    let field = spec.field();
    let (r, d) = (spec.r(), spec.d());
    let unram = refined_count(field, r, d, 0, conductor)?;
    if *conductor == Conductor::Infinity {
        return Ok(unram * r);
    }
    let mut total = unram;
    for k in units(r as u64) {
        total += refined_count(field, r, d - 1, k as u32, conductor)?;
    }
    Ok(total * r)
}

/// Monic members of one degree branch (one alpha class).
pub fn branch_count_monic(spec: &FamilySpec, branch: Branch) -> Result<BigInt> {
    let field = spec.field();
    let (r, d) = (spec.r(), spec.d());
    match branch {
        Branch::Unramified => refined_count(field, r, d, 0, &Conductor::One),
        Branch::Ramified => {
            let mut t = BigInt::zero();
            for k in units(r as u64) {
                t += refined_count(field, r, d - 1, k as u32, &Conductor::One)?;
            }
            Ok(t)
        }
    }
}

/// `|F^thin_r(g;G)|` from the closed combination
/// `sum_{s|r} phi(s) [u^d] H_s + phi(r) sum_{s|r} mu(s) [u^(d-1)] H_s`
/// (only the first sum for the prime at infinity).
pub fn count_from_series(spec: &FamilySpec, conductor: &Conductor) -> Result<BigInt> {
    let field = spec.field();
    let (r, d) = (spec.r(), spec.d());
    let phi_r = BigInt::from(totient(r as u64));
    let mut total = BigInt::zero();
    for s in divisors(r as u64) {
        let table = series_coeff(field, r, s as u32, conductor, d)?;
        total += BigInt::from(totient(s)) * table.coeff(d);
        if *conductor != Conductor::Infinity {
            total += &phi_r * BigInt::from(mobius(s)) * table.coeff(d - 1);
        }
    }
    Ok(total)
}

/// `[u^d] H_(r;s)(u;P)` by inclusion-exclusion over powers of the excluded
/// local factor:
/// `sum_a (-phi(r)/phi(s))^a (sum_{(i,s)=1} xi_s^(n i))^a [u^(d - a n)] H_(r;s)(u;1)`.
pub fn incexc_coeff(field: &FieldSpec, r: u32, s: u32, p: &PrimePoly, d: u32) -> Result<CycInt<BigInt>> {
    if p.is_infinite() {
        return Err(Error::Invalid("inclusion-exclusion needs a finite prime".into()));
    }
    let n = p.degree() as u32;
    let base = series_coeff(field, r, s, &Conductor::One, d)?;
    let ratio = BigInt::from(-((totient(r as u64) / totient(s as u64)) as i64));
    let inner = units(s as u64)
        .into_iter()
        .map(|i| CycInt::<BigInt>::sub_root(r, s, (n as u64 * i) as i64))
        .fold(CycInt::zero(r), |acc, x| acc + x);
    let mut acc = CycInt::<BigInt>::zero(r);
    for a in 0..=d / n {
        let term = inner.pow(a).scale(&num_traits::pow(ratio.clone(), a as usize)).scale(&base.coeff(d - a * n));
        acc = acc + term;
    }
    Ok(acc)
}

/// Exact coprimality ratio `|F(g;P)|/|F(g)|` against the closed formula
/// `sum_{a=0}^{d/n} (-phi(r)/q^n)^a (1 - a n/d)^(phi(r)-1)`, with `n = 1`
/// for the prime at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct UnramRatio {
    pub exact: BigRational,
    pub formula: BigRational,
    pub residual: BigRational,
}

pub fn unram_ratio(spec: &FamilySpec, p: &PrimePoly) -> Result<UnramRatio> {
    let conductor = match p {
        PrimePoly::Finite(poly) => Conductor::Finite(poly.clone()),
        PrimePoly::Infinity => Conductor::Infinity,
    };
    let total = count_family(spec, &Conductor::One)?;
    let coprime = count_family(spec, &conductor)?;
    let exact = BigRational::new(coprime, total);
    let formula = coprimality_formula(spec, p.degree() as u32);
    let residual = (&exact - &formula).abs();
    Ok(UnramRatio { exact, formula, residual })
}

/// `sum_{a=0}^{floor(d/n)} (-phi(r)/q^n)^a (1 - a n/d)^(phi(r)-1)`.
pub fn coprimality_formula(spec: &FamilySpec, n: u32) -> BigRational {
    let d = spec.d();
    let phi = totient(spec.r() as u64);
    let x = BigRational::new(BigInt::from(-(phi as i64)), big_pow(spec.q(), n));
    let mut total = BigRational::zero();
    for a in 0..=d / n {
        let shape = BigRational::new(BigInt::from(d - a * n), BigInt::from(d));
        total += num_traits::pow(x.clone(), a as usize) * num_traits::pow(shape, (phi - 1) as usize);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;
    use crate::polynomials::Poly;

    #[test]
    fn series_basics() {
        let f = make_field(7, 1).unwrap();
        let t = series_coeff(&f, 3, 1, &Conductor::One, 6).unwrap();
        assert_eq!(t.coeff(0), BigInt::one());
        assert_eq!(t.coeff(1), BigInt::from(2 * 7));
        // r = 2, s = 1: squarefree counts
        let f5 = make_field(5, 1).unwrap();
        let t = series_coeff(&f5, 2, 1, &Conductor::One, 6).unwrap();
        for d in 2..=6 {
            assert_eq!(t.coeff(d), big_pow(5, d) - big_pow(5, d - 1));
        }
    }

    #[test]
    fn small_family_counts() {
        let spec = FamilySpec::from_order(3, 2, 1).unwrap();
        assert_eq!(count_family(&spec, &Conductor::One).unwrap(), BigInt::from(144));
        assert_eq!(count_from_series(&spec, &Conductor::One).unwrap(), BigInt::from(144));
        assert_eq!(
            count_family(&spec, &Conductor::Infinity).unwrap(),
            BigInt::from(2) * (big_pow(3, 4) - big_pow(3, 3))
        );
    }

    #[test]
    fn inclusion_exclusion_below_degree() {
        let f = make_field(3, 1).unwrap();
        let p = PrimePoly::Finite(Poly::new(vec![1, 0, 1]));
        let base = series_coeff(&f, 2, 2, &Conductor::One, 1).unwrap();
        assert_eq!(incexc_coeff(&f, 2, 2, &p, 1).unwrap(), base.coeff_cyc(1));
    }

    #[test]
    fn far_prime_ratio_is_one() {
        let spec = FamilySpec::from_order(7, 3, 1).unwrap();
        let f = spec.field().clone();
        let p = polynomials::enumerate_irreducibles(&f, 4).unwrap().remove(0);
        let ratio = unram_ratio(&spec, &p).unwrap();
        assert_eq!(ratio.exact, BigRational::one());
        assert_eq!(ratio.formula, BigRational::one());
    }
}
