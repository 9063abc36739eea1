//! L-polynomials `L(u) = sum_k c_k u^k` of degree 2g and their unitarized
//! zeros.

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{scaled_trace, Curve};
use crate::error::{Error, Result};

/// Roots closer than this (after unitarizing) go through the squarefree
/// decomposition before eigenvalue extraction.
const CLUSTER: f64 = 1e-3;
pub const RH_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LPolynomial {
    q: u64,
    g: u32,
    coeffs: Vec<i128>,
}

impl LPolynomial {
    /// Builds L from `t_1, ..., t_g` (further traces are ignored) with
    /// Newton's identities `k c_k = -sum_{i<=k} t_i c_{k-i}` and the
    /// functional equation `c_{2g-k} = q^(g-k) c_k`.
    pub fn from_traces(q: u64, g: u32, traces: &[i64]) -> Result<Self> {
        let g_us = g as usize;
        if traces.len() < g_us {
            return Err(Error::Invalid(format!("need {g} traces, got {}", traces.len())));
        }
        let mut c = vec![0i128; 2 * g_us + 1];
        c[0] = 1;
        for k in 1..=g_us {
            let s: i128 = (1..=k).map(|i| traces[i - 1] as i128 * c[k - i]).sum();
            if s % k as i128 != 0 {
                return Err(Error::NonIntegerResult(format!("Newton step {k} gives {}/{k}", -s)));
            }
            c[k] = -s / k as i128;
        }
        for k in 0..g_us {
            c[2 * g_us - k] = (q as i128).pow(g - k as u32) * c[k];
        }
        Ok(LPolynomial { q, g, coeffs: c })
    }

    /// Builds L from all of `t_1, ..., t_(2g)` by Newton's identities alone.
    pub fn from_all_traces(q: u64, g: u32, traces: &[i64]) -> Result<Self> {
        let n = 2 * g as usize;
        if traces.len() < n {
            return Err(Error::Invalid(format!("need {n} traces, got {}", traces.len())));
        }
        let mut c = vec![0i128; n + 1];
        c[0] = 1;
        for k in 1..=n {
            let s: i128 = (1..=k).map(|i| traces[i - 1] as i128 * c[k - i]).sum();
            if s % k as i128 != 0 {
                return Err(Error::NonIntegerResult(format!("Newton step {k} gives {}/{k}", -s)));
            }
            c[k] = -s / k as i128;
        }
        Ok(LPolynomial { q, g, coeffs: c })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    /// `c_0, ..., c_(2g)`.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.g as usize;
        (0..=g).all(|k| self.coeffs[2 * g - k] == (self.q as i128).pow((g - k) as u32) * self.coeffs[k])
    }

    /// `t_1, ..., t_(n_max)` from `t_n = -n c_n - sum_{i<n} c_i t_(n-i)`.
    pub fn traces(&self, n_max: u32) -> Vec<i128> {
        let c = |i: usize| self.coeffs.get(i).copied().unwrap_or(0);
        let mut t: Vec<i128> = Vec::with_capacity(n_max as usize);
        for n in 1..=n_max as usize {
            let s: i128 = (1..n).map(|i| c(i) * t[n - i - 1]).sum();
            t.push(-(n as i128) * c(n) - s);
        }
        t
    }

    pub fn trace(&self, n: u32) -> i128 {
        self.traces(n).last().copied().unwrap_or(0)
    }

    /// Zeros of `L(v / sqrt q)`, which lie on the unit circle under RH,
    /// together with the largest `| |v| - 1 |`.
    pub fn unitary_roots(&self) -> Result<(Vec<Complex64>, f64)> {
        let scaled = self.scaled(&self.coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect::<Vec<_>>());
        let mut roots = eigen_roots(&scaled);
        if min_separation(&roots) < CLUSTER {
            roots.clear();
            let poly: Vec<BigRational> = self.coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
            for (mult, factor) in squarefree_factors(&poly).into_iter().enumerate() {
                if degree(&factor) < 1 {
                    continue;
                }
                let rs = eigen_roots(&self.scaled(&factor));
                for _ in 0..=mult {
                    roots.extend_from_slice(&rs);
                }
            }
        }
        let dev = roots.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
        Ok((roots, dev))
    }

    /// Normalized eigenangles `theta_j` in `[0, 2 pi)`, sorted, with
    /// `L(u) = prod (1 - sqrt q e^(i theta_j) u)`.
    pub fn eigenangles(&self) -> Result<Vec<f64>> {
        let (roots, dev) = self.unitary_roots()?;
        if dev > RH_TOLERANCE {
            return Err(Error::RhViolation { deviation: dev });
        }
        let tau = std::f64::consts::TAU;
        let mut angles: Vec<f64> =
            roots.iter().map(|z| (-z.arg()).rem_euclid(tau)).map(|a| if a >= tau { 0.0 } else { a }).collect();
        angles.sort_by(f64::total_cmp);
        Ok(angles)
    }

    /// Coefficients of `h(v / sqrt q)` as floats.
    fn scaled(&self, h: &[BigRational]) -> Vec<f64> {
        let sq = (self.q as f64).sqrt();
        h.iter().enumerate().map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) / sq.powi(k as i32)).collect()
    }
}

/// The L-polynomial of a curve from its point counts over `F_(q^n)`, n <= g.
pub fn l_polynomial(curve: &Curve) -> Result<LPolynomial> {
    let g = curve.genus();
    let traces: Vec<i64> = (1..=g).map(|n| scaled_trace(curve, n)).collect::<Result<_>>()?;
    LPolynomial::from_traces(curve.spec().q(), g, &traces)
}

pub fn eigenangles(lpoly: &LPolynomial) -> Result<Vec<f64>> {
    lpoly.eigenangles()
}

fn eval(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

fn polish(p: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (v, dv) = eval(p, z);
        if dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        if eval(p, next).0.norm() >= v.norm() {
            break;
        }
        z = next;
    }
    z
}

/// Eigenvalues of the companion matrix, polished by Newton steps. Falls back
/// to Aberth iteration when the Schur decomposition does not converge.
fn eigen_roots(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -p[i] / lead;
    }
    let roots: Vec<Complex64> = match Schur::try_new(m, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(p),
    };
    roots.into_iter().map(|z| polish(p, z)).collect()
}

fn aberth(p: &[f64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(1.0, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, dv) = eval(p, z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

fn degree(p: &[BigRational]) -> isize {
    p.iter().rposition(|c| !c.is_zero()).map_or(-1, |d| d as isize)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect())
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = degree(b) as usize;
    let mut rem = trim(a.to_vec());
    if degree(&rem) < db as isize {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while degree(&rem) >= db as isize {
        let dr = rem.len() - 1;
        let c = &rem[dr] / &b[db];
        for (i, bc) in b.iter().enumerate() {
            rem[dr - db + i] -= &c * bc;
        }
        quot[dr - db] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn monic_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(BigRational::one);
    a.iter().map(|c| c / &lead).collect()
}

/// Yun's algorithm: `out[i]` is the product of the irreducible factors of
/// multiplicity `i + 1`.
fn squarefree_factors(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let dp = derivative(p);
    let a = monic_gcd(p, &dp);
    let mut b = divrem(p, &a).0;
    let mut c = divrem(&dp, &a).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    while degree(&b) > 0 {
        let f = monic_gcd(&b, &d);
        b = divrem(&b, &f).0;
        c = divrem(&d, &f).0;
        d = sub(&c, &derivative(&b));
        out.push(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_curve_over_f5() {
        let l = LPolynomial::from_traces(5, 1, &[2]).unwrap();
        assert_eq!(l.coeffs(), &[1, -2, 5]);
        assert!(l.satisfies_functional_equation());
        let th = l.eigenangles().unwrap();
        let a = (1.0 / 5f64.sqrt()).acos();
        assert!((th[0] - a).abs() < 1e-12);
        assert!((th[1] - (std::f64::consts::TAU - a)).abs() < 1e-12);
        assert_eq!(l.traces(3), vec![2, -6, -22]);
    }

    #[test]
    fn repeated_roots() {
        // (1 + 3u^2)^2 over F_3, genus 2
        let l = LPolynomial { q: 3, g: 2, coeffs: vec![1, 0, 6, 0, 9] };
        let (roots, dev) = l.unitary_roots().unwrap();
        assert_eq!(roots.len(), 4);
        assert!(dev < 1e-12);
        let th = l.eigenangles().unwrap();
        let quarter = std::f64::consts::FRAC_PI_2;
        for (x, want) in th.iter().zip([quarter, quarter, 3.0 * quarter, 3.0 * quarter]) {
            assert!((x - want).abs() < 1e-9);
        }
    }

    #[test]
    fn newton_round_trip() {
        let l = LPolynomial { q: 7, g: 2, coeffs: vec![1, 3, 11, 21, 49] };
        let t: Vec<i64> = l.traces(4).into_iter().map(|x| x as i64).collect();
        assert_eq!(LPolynomial::from_traces(7, 2, &t).unwrap(), l);
        assert_eq!(LPolynomial::from_all_traces(7, 2, &t).unwrap(), l);
    }

    #[test]
    fn rh_violation_is_reported() {
        let l = LPolynomial { q: 5, g: 1, coeffs: vec![1, -6, 5] };
        assert!(matches!(l.eigenangles(), Err(Error::RhViolation { .. })));
    }
}
