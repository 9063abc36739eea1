//! One-level densities of low-lying zeros and their predictions.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::terms::a_sum;
use crate::arith::{divisors, prime_count, totient};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::traces::LPolynomial;

#[derive(Clone, Debug, PartialEq)]
pub enum TestKind {
    /// `fhat(x) = max(0, 1 - |x|/alpha)`.
    Fejer { alpha: f64 },
    /// `(x, fhat(x))` on the grid `n/(2g)`; zero off the listed points.
    Table(Vec<(f64, f64)>),
}

/// A test function given by its Fourier transform.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub kind: TestKind,
    /// `supp fhat` inside `[0, alpha)` rather than symmetric.
    pub one_sided: bool,
}

impl TestFunction {
    pub fn fejer(alpha: f64, one_sided: bool) -> Self {
        TestFunction { kind: TestKind::Fejer { alpha }, one_sided }
    }

    /// Reads a CSV table with header `x,fhat`.
    pub fn from_csv(path: &Path, one_sided: bool) -> Result<Self> {
        let mut reader =
            csv::Reader::from_path(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        let headers = reader.headers().map_err(|e| Error::Invalid(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "fhat"] {
            return Err(Error::Invalid(format!(
                "expected header x,fhat, found {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut points = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Invalid(e.to_string()))?;
            let parse = |i: usize| {
                rec.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Invalid(format!("bad row {:?}", rec)))
            };
            points.push((parse(0)?, parse(1)?));
        }
        Ok(TestFunction { kind: TestKind::Table(points), one_sided })
    }

    pub fn fhat(&self, x: f64) -> f64 {
        if self.one_sided && x < 0.0 {
            return 0.0;
        }
        match &self.kind {
            TestKind::Fejer { alpha } => (1.0 - x.abs() / alpha).max(0.0),
            TestKind::Table(points) => {
                let y = if self.one_sided { x } else { x.abs() };
                points.iter().find(|(px, _)| (px - y).abs() < 1e-9).map_or(0.0, |p| p.1)
            }
        }
    }

    /// Supremum of the support of `fhat` on the positive axis.
    pub fn support(&self) -> f64 {
        match &self.kind {
            TestKind::Fejer { alpha } => *alpha,
            TestKind::Table(points) => points.iter().filter(|p| p.1 != 0.0).map(|p| p.0.abs()).fold(0.0, f64::max),
        }
    }

    /// Largest n with `fhat(n/2g)` possibly nonzero.
    fn n_max(&self, g: u32) -> u32 {
        (self.support() * 2.0 * g as f64).ceil() as u32
    }

    pub fn describe(&self) -> String {
        let side = if self.one_sided { "one-sided" } else { "even" };
        match &self.kind {
            TestKind::Fejer { alpha } => format!("fejer(alpha={alpha}, {side})"),
            TestKind::Table(p) => format!("table({} points, {side})", p.len()),
        }
    }
}

/// `(1/2g) sum_n fhat(n/2g) Tr(U^n)` given the traces `Tr(U^n)` for
/// `n >= 1`; the n = 0 term is `fhat(0)`.
pub fn spectral_density(f: &TestFunction, g: u32, trace: impl Fn(u32) -> f64) -> f64 {
    let two_g = 2.0 * g as f64;
    let weight = if f.one_sided { 1.0 } else { 2.0 };
    let tail: f64 = (1..=f.n_max(g)).map(|n| f.fhat(n as f64 / two_g) * trace(n)).sum();
    f.fhat(0.0) + weight * tail / two_g
}

/// Spectral route for one curve: traces from the L-polynomial.
pub fn one_level_density(lpoly: &LPolynomial, f: &TestFunction) -> f64 {
    let g = lpoly.genus();
    let sq = (lpoly.q() as f64).sqrt();
    let t = lpoly.traces(f.n_max(g).max(1));
    spectral_density(f, g, |n| t[n as usize - 1] as f64 / sq.powi(n as i32))
}

/// Direct route `sum_j sum_m f(2g(theta_j/2pi - m))` over the eigenangles,
/// for Fejér test functions. A one-sided `fhat` pairs with the conjugate
/// symmetric spectrum through the even Fejér kernel:
/// `D = (D_even + fhat(0))/2`.
pub fn one_level_density_eigen(lpoly: &LPolynomial, f: &TestFunction) -> Result<f64> {
    let TestKind::Fejer { alpha } = f.kind else {
        return Err(Error::UnsupportedDirectEval);
    };
    let c = 2.0 * lpoly.genus() as f64;
    let even: f64 = lpoly.eigenangles()?.iter().map(|th| fejer_periodized(th / (2.0 * PI), alpha, c)).sum();
    Ok(if f.one_sided { 0.5 * (even + f.fhat(0.0)) } else { even })
}

/// `sum_{m in Z} F(c (x - m))` for the Fejér kernel
/// `F(y) = (1 - cos 2 pi alpha y) / (2 pi^2 alpha y^2)`, in closed form from
/// `sum_m e^(2 pi i m b)/(m + x)^2` (0 <= b < 1) and, near integers, from
/// its Taylor expansion in Bernoulli polynomials.
pub fn fejer_periodized(x: f64, alpha: f64, c: f64) -> f64 {
    let beta = alpha * c;
    let b = beta - beta.floor();
    let x = x - x.round();
    let scale = 1.0 / (2.0 * PI * PI * alpha * c * c);
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    if x.abs() >= 1e-3 {
        let s = (PI * x).sin();
        let plain = PI * PI / (s * s);
        let e = (-i2pi * x).exp();
        let eb = (-i2pi * b * x).exp();
        let one = Complex64::new(1.0, 0.0);
        let g = -4.0 * PI * PI * eb * (b / (one - e) + e / ((one - e) * (one - e)));
        let osc = ((i2pi * beta * x).exp() * g).re;
        return scale * (plain - osc);
    }
    let near = if x == 0.0 {
        2.0 * PI * PI * beta * beta
    } else {
        let s = (PI * beta * x).sin();
        2.0 * s * s / (x * x)
    };
    let phase = (i2pi * beta * x).exp();
    let mut rest = Complex64::new(0.0, 0.0);
    let mut xk = 1.0;
    for k in 0..10 {
        let j = k + 2;
        rest += (k as f64 + 1.0) * xk * (periodic_zeta(j, 0.0) - phase * periodic_zeta(j, b));
        xk *= -x;
    }
    scale * (near + rest.re)
}

const BERNOULLI: [f64; 13] =
    [1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0, -691.0 / 2730.0];

fn bernoulli_poly(n: usize, x: f64) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=n {
        total += binom * BERNOULLI[k] * x.powi((n - k) as i32);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    total
}

/// `sum_{m != 0} e^(2 pi i m b) / m^j = -(2 pi i)^j B_j(b) / j!` for j >= 2.
fn periodic_zeta(j: usize, b: f64) -> Complex64 {
    let factorial: f64 = (1..=j).map(|k| k as f64).product();
    -Complex64::new(0.0, 2.0 * PI).powu(j as u32) * bernoulli_poly(j, b) / factorial
}

/// `dev_r(f) = fhat(0) sum_{s|r, s>1} phi(s) sum_{m<=d} m pi_q(m)/(q^(ms/2) - 1)
/// sum_a (-phi(r)/q^m)^a (1 - a m/d)^(phi(r)-1)`.
pub fn dev_r(spec: &FamilySpec, f: &TestFunction) -> f64 {
    let (q, r, d) = (spec.q(), spec.r(), spec.d());
    let f0 = f.fhat(0.0);
    if f0 == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    for s in divisors(r as u64).into_iter().filter(|&s| s > 1) {
        let mut inner = 0.0;
        for m in 1..=d {
            let pi = prime_count(q, m).to_f64().unwrap_or(f64::NAN);
            let a = a_sum(q, r, d, m).to_f64().unwrap_or(f64::NAN);
            inner += m as f64 * pi / ((q as f64).powf(m as f64 * s as f64 / 2.0) - 1.0) * a;
        }
        total += totient(s) as f64 * inner;
    }
    f0 * total
}

fn check_support(spec: &FamilySpec, f: &TestFunction) -> Result<()> {
    let bound = 1.0 / (spec.r() - 1) as f64;
    if !f.one_sided || f.support() >= bound {
        return Err(Error::SupportViolation { point: if f.one_sided { f.support() } else { -f.support() }, bound });
    }
    Ok(())
}

/// The average of the density over the matrix model,
/// `fhat(0) - (1/2g) sum_{s|r, s>1} phi(s) sum_{n <= 2g/(s(r-1))} q^(n(1-s/2)) fhat(ns/2g)`.
pub fn refined_prediction(spec: &FamilySpec, f: &TestFunction) -> Result<f64> {
    check_support(spec, f)?;
    let (q, r, g) = (spec.q() as f64, spec.r(), spec.g());
    let two_g = 2.0 * g as f64;
    let mut total = 0.0;
    for s in divisors(r as u64).into_iter().filter(|&s| s > 1) {
        let top = 2 * g / (s as u32 * (r - 1));
        let inner: f64 =
            (1..=top).map(|n| q.powf(n as f64 * (1.0 - s as f64 / 2.0)) * f.fhat((n as u64 * s) as f64 / two_g)).sum();
        total += totient(s) as f64 * inner;
    }
    Ok(f.fhat(0.0) - total / two_g)
}

/// The refined prediction with the lower order deviation:
/// `refined_prediction - dev_r(f)/(2g)`.
pub fn refined_rhs(spec: &FamilySpec, f: &TestFunction) -> Result<f64> {
    Ok(refined_prediction(spec, f)? - dev_r(spec, f) / (2.0 * spec.g() as f64))
}

/// The prediction from `USp(2g)` moments for even r and `U(2g)` for odd r.
pub fn katz_sarnak_prediction(spec: &FamilySpec, f: &TestFunction) -> f64 {
    let g = spec.g();
    let symplectic = spec.r() % 2 == 0;
    spectral_density(f, g, |n| if symplectic && n % 2 == 0 && n <= 2 * g { -1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fejer_direct(x: f64, alpha: f64, c: f64, terms: i64) -> f64 {
        let f = |y: f64| {
            if y == 0.0 {
                alpha
            } else {
                let s = (PI * alpha * y).sin();
                2.0 * s * s / (2.0 * PI * PI * alpha * y * y)
            }
        };
        // beyond |m| = terms the cosine averages out unless alpha c is an integer
        let beta = alpha * c;
        let flat = if beta.fract() == 0.0 { 1.0 - (2.0 * PI * beta * x).cos() } else { 1.0 };
        let tail = 2.0 * flat / (2.0 * PI * PI * alpha * c * c) / (terms as f64 + 0.5);
        (-terms..=terms).map(|m| f(c * (x - m as f64))).sum::<f64>() + tail
    }

    #[test]
    fn periodized_kernel_matches_direct_sum() {
        for &(alpha, c) in &[(0.45, 4.0), (0.45, 8.0), (0.3, 6.0), (0.5, 4.0)] {
            for &x in &[0.0, 1e-5, 7e-4, 2e-3, 0.1, 0.25, 0.5, 0.77, 0.9995] {
                let want = fejer_direct(x, alpha, c, 400_000);
                let got = fejer_periodized(x, alpha, c);
                assert!((want - got).abs() < 1e-8, "alpha={alpha} c={c} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn bernoulli_values() {
        assert!((bernoulli_poly(2, 0.3) - (0.09 - 0.3 + 1.0 / 6.0)).abs() < 1e-15);
        assert!((periodic_zeta(2, 0.0).re - PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn density_routes_agree_for_elliptic_curve() {
        let l = LPolynomial::from_traces(5, 1, &[2]).unwrap();
        for f in [TestFunction::fejer(0.9, false), TestFunction::fejer(0.7, true), TestFunction::fejer(2.5, false)] {
            let a = one_level_density(&l, &f);
            let b = one_level_density_eigen(&l, &f).unwrap();
            assert!((a - b).abs() < 1e-9, "{}: {a} vs {b}", f.describe());
        }
    }

    #[test]
    fn predictions_basic() {
        let spec = FamilySpec::from_order(7, 3, 2).unwrap();
        let zero = TestFunction { kind: TestKind::Table(vec![]), one_sided: true };
        assert_eq!(dev_r(&spec, &zero), 0.0);
        assert_eq!(refined_prediction(&spec, &zero).unwrap(), 0.0);
        assert!(refined_prediction(&spec, &TestFunction::fejer(0.6, true)).is_err());
        assert!(refined_prediction(&spec, &TestFunction::fejer(0.4, true)).is_ok());
        let f = TestFunction::fejer(0.45, true);
        assert_eq!(katz_sarnak_prediction(&spec, &f), 1.0);
    }
}
