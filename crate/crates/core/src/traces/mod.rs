//! Per-curve point counts and Frobenius traces.
//!
//! Traces are kept as the integers `t_n = q^n + 1 - #C(F_(q^n))`, which equal
//! `q^(n/2) Tr(Theta^n)`. They are computed three ways: from the character
//! sum point count, from residue symbols summed over primes, and from the
//! L-polynomial.

mod lpoly;

use crate::arith::{divisors, gcd, units};
use crate::cyclotomic::RootSum;
use crate::error::{Error, Result};
use crate::families::{FamilySpec, ThinModel};
use crate::finite_field::{ExtFieldSpec, FiniteField, ZERO_LOG};
use crate::polynomials::Poly;

pub use lpoly::{eigenangles, l_polynomial, LPolynomial};

/// `F_(s) = alpha prod f_i^(i mod s)` for one divisor s of r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSub {
    pub s: u32,
    pub poly: Poly,
}

/// A family member with its defining polynomials precomputed.
#[derive(Clone, Debug)]
pub struct Curve {
    spec: FamilySpec,
    model: ThinModel,
    f: Poly,
    subs: Vec<FSub>,
}

impl Curve {
    pub fn new(spec: &FamilySpec, model: ThinModel) -> Result<Self> {
        model.validate(spec)?;
        let f = model.f(spec);
        let subs = divisors(spec.r() as u64)
            .into_iter()
            .filter(|&s| s > 1)
            .map(|s| FSub { s: s as u32, poly: model.f_sub(spec, s as u32) })
            .collect();
        Ok(Curve { spec: spec.clone(), model, f, subs })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn model(&self) -> &ThinModel {
        &self.model
    }

    pub fn genus(&self) -> u32 {
        self.spec.g()
    }

    /// `F = alpha prod f_i^i`.
    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn f_subs(&self) -> &[FSub] {
        &self.subs
    }

    fn ext(&self, n: u32) -> Result<std::sync::Arc<ExtFieldSpec>> {
        self.spec.symbols().ext(n).map_err(|e| match e {
            Error::FieldTooLarge { .. } => Error::ExtensionTooLarge { q: self.spec.q(), degree: n },
            other => other,
        })
    }

    fn alpha_log(&self) -> u32 {
        self.spec.field().log(self.f.leading()).expect("nonzero leading coefficient")
    }
}

/// `#C(F_(q^n))` as `q^n + 1 + sum_{x in P^1} sum_{s|r, s>1} sum_{(i,s)=1} chi_(s;n)^i(F_(s)(x))`.
pub fn count_points(curve: &Curve, n: u32) -> Result<i64> {
    let ext = curve.ext(n)?;
    let r = curve.spec.r();
    let mut sum = RootSum::new(r);
    let unit_lists: Vec<Vec<u64>> = curve.subs.iter().map(|fs| units(fs.s as u64)).collect();
    for x in 0..ext.size() as u32 {
        for (fs, us) in curve.subs.iter().zip(&unit_lists) {
            let l = ext.eval_log(&fs.poly, x);
            if l == ZERO_LOG {
                continue;
            }
            let t = (l % fs.s) as u64;
            for &i in us {
                sum.add_power((r / fs.s) as u64 * i * t);
            }
        }
    }
    let deg_f = curve.f.deg() as u32;
    let alpha_log = ext.embed_log(curve.alpha_log());
    for (fs, us) in curve.subs.iter().zip(&unit_lists) {
        if deg_f % fs.s != 0 {
            continue;
        }
        let t = (alpha_log % fs.s) as u64;
        for &i in us {
            sum.add_power((r / fs.s) as u64 * i * t);
        }
    }
    let extra = sum.to_cyc().as_integer().ok_or_else(|| Error::NonIntegerResult(format!("{:?}", sum.to_cyc())))?;
    Ok(ext.size() as i64 + 1 + extra)
}

/// Point count by brute force: `#{y : y^r = F(x)}` summed over x, plus the
/// `#{z : z^(r, deg F) = alpha}` points over infinity.
pub fn count_points_brute(curve: &Curve, n: u32) -> Result<i64> {
    let ext = curve.ext(n)?;
    let r = curve.spec.r() as u64;
    let size = ext.size() as usize;
    let mut is_power = vec![false; size];
    for y in 1..size as u32 {
        is_power[ext.pow(y, r) as usize] = true;
    }
    let mut total = 0i64;
    for x in 0..size as u32 {
        let v = ext.eval(&curve.f, x);
        if v == 0 {
            total += 1;
        } else if is_power[v as usize] {
            total += r as i64;
        }
    }
    let e = gcd(curve.f.deg() as u64, r);
    let alpha = ext.embed(curve.f.leading());
    total += (0..size as u32).filter(|&z| ext.pow(z, e) == alpha).count() as i64;
    Ok(total)
}

/// `t_n = q^n + 1 - #C(F_(q^n))`.
pub fn scaled_trace(curve: &Curve, n: u32) -> Result<i64> {
    let n_points = count_points(curve, n)?;
    Ok(curve.ext(n)?.size() as i64 + 1 - n_points)
}

/// `sum_{i=1}^{r-1} sum_{deg P | n} deg P (F/P)_r^(i n/deg P)` over finite
/// primes and the prime at infinity; equals `-t_n`.
pub fn trace_formula_thin(curve: &Curve, n: u32) -> Result<i64> {
    let ctx = curve.spec.symbols();
    let r = curve.spec.r();
    let mut sum = RootSum::new(r);
    for m in divisors(n as u64) {
        let m = m as u32;
        let ext = curve.ext(m)?;
        let k = (n / m) as u64;
        for (_, &root) in ctx.root_table(m)?.iter() {
            let l = ext.eval_log(&curve.f, root);
            if l == ZERO_LOG {
                continue;
            }
            let e = (l % r) as u64;
            for i in 1..r as u64 {
                sum.add_power_times(i * e * k, m as i64);
            }
        }
    }
    if curve.f.deg() as u32 % r == 0 {
        let e = (curve.alpha_log() % r) as u64;
        for i in 1..r as u64 {
            sum.add_power(i * e * n as u64);
        }
    }
    let c = sum.to_cyc();
    c.as_integer().ok_or_else(|| Error::NonIntegerResult(format!("{c:?}")))
}

/// The general formula with `F_(s)`:
/// `sum_{s|r} sum_{(i,s)=1} sum_{deg P | n} deg P (F_(s)/P)_s^(i n/deg P)`.
pub fn trace_formula_general(curve: &Curve, n: u32) -> Result<i64> {
    let ctx = curve.spec.symbols();
    let r = curve.spec.r();
    let mut sum = RootSum::new(r);
    let deg_f = curve.f.deg() as u32;
    for fs in &curve.subs {
        let s = fs.s;
        let us = units(s as u64);
        for m in divisors(n as u64) {
            let m = m as u32;
            let ext = curve.ext(m)?;
            let k = (n / m) as u64;
            for (_, &root) in ctx.root_table(m)?.iter() {
                let l = ext.eval_log(&fs.poly, root);
                if l == ZERO_LOG {
                    continue;
                }
                let t = (l % s) as u64;
                for &i in &us {
                    sum.add_power_times((r / s) as u64 * t * i * k, m as i64);
                }
            }
        }
        if deg_f % s == 0 {
            let t = (curve.alpha_log() % s) as u64;
            for &i in &us {
                sum.add_power((r / s) as u64 * t * i * n as u64);
            }
        }
    }
    let c = sum.to_cyc();
    c.as_integer().ok_or_else(|| Error::NonIntegerResult(format!("{c:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Branch, FamilySpec};

    fn elliptic() -> Curve {
        // y^2 = x^3 + x over F_5, genus 1
        let spec = FamilySpec::from_order(5, 2, 1).unwrap();
        let model =
            ThinModel { alpha_index: 0, parts: vec![(1, Poly::new(vec![0, 1, 0, 1]))], branch: Branch::Ramified };
        Curve::new(&spec, model).unwrap()
    }

    #[test]
    fn elliptic_curve_counts() {
        let c = elliptic();
        assert_eq!(count_points(&c, 1).unwrap(), 4);
        assert_eq!(count_points_brute(&c, 1).unwrap(), 4);
        assert_eq!(scaled_trace(&c, 1).unwrap(), 2);
        assert_eq!(trace_formula_thin(&c, 1).unwrap(), -2);
        assert_eq!(trace_formula_general(&c, 1).unwrap(), -2);
        for n in 1..=4 {
            assert_eq!(count_points(&c, n).unwrap(), count_points_brute(&c, n).unwrap());
        }
    }

    #[test]
    fn extension_cap() {
        let c = elliptic();
        assert!(matches!(count_points(&c, 11), Err(Error::ExtensionTooLarge { .. })));
    }
}
