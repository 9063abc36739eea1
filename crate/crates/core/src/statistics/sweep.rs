//! Exhaustive sweeps and trace distributions.
//!
//! A sweep walks the monic members of a family once. For every probe prime P
//! it keeps the running residue symbol exponent of the partial product, read
//! from a precomputed table `(Q/P)_r` over all blocks Q, so a leaf sees the
//! symbols of the whole member at every probe. The alpha classes are folded in
//! analytically: `(beta^j / P)_r = xi_r^(j deg P)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{count_family, BlockSet, Branch, Conductor, FamilySpec, FamilyVisitor, SweepTask, ThinModel};
use crate::finite_field::ZERO_LOG;
use crate::polynomials::{enumerate_irreducibles, Poly, PrimePoly};
use crate::traces::{scaled_trace, Curve, LPolynomial};

const DIV: u8 = u8::MAX;
pub const MAX_SYMBOL_TABLE: usize = 1 << 28;
pub const MAX_SWEEP: u128 = 100_000_000;

/// Multiset of trace vectors `(t_1, ..., t_g)` with their L-polynomials.
#[derive(Clone, Debug)]
pub struct TraceDistribution {
    q: u64,
    g: u32,
    total: u64,
    entries: Vec<(Vec<i64>, LPolynomial, u64)>,
}

impl TraceDistribution {
    pub fn from_counts(q: u64, g: u32, counts: BTreeMap<Vec<i64>, u64>) -> Result<Self> {
        let mut entries = Vec::with_capacity(counts.len());
        let mut total = 0;
        for (key, c) in counts {
            let l = LPolynomial::from_traces(q, g, &key)?;
            total += c;
            entries.push((key, l, c));
        }
        Ok(TraceDistribution { q, g, total, entries })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    /// Number of curves counted.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `(t_1..t_g, L, multiplicity)`, sorted by trace vector.
    pub fn entries(&self) -> &[(Vec<i64>, LPolynomial, u64)] {
        &self.entries
    }

    /// `(sum of t_n, sum of t_n^2)` over all curves.
    pub fn trace_sums(&self, n: u32) -> (BigInt, BigInt) {
        let mut s1 = BigInt::zero();
        let mut s2 = BigInt::zero();
        for (key, l, c) in &self.entries {
            let t = match key.get(n as usize - 1) {
                Some(&t) => t as i128,
                None => l.trace(n),
            };
            let t = BigInt::from(t);
            s1 += &t * c;
            s2 += &t * &t * c;
        }
        (s1, s2)
    }

    /// Exact mean of `t_n = q^(n/2) Tr(Theta^n)`.
    pub fn average_scaled(&self, n: u32) -> Result<BigRational> {
        if self.total == 0 {
            return Err(Error::EmptyFamily("no curves in distribution".into()));
        }
        Ok(BigRational::new(self.trace_sums(n).0, BigInt::from(self.total)))
    }

    /// Standard error of the mean of `t_n`.
    pub fn standard_error(&self, n: u32) -> f64 {
        let (s1, s2) = self.trace_sums(n);
        let k = self.total as f64;
        if self.total < 2 {
            return 0.0;
        }
        let mean = s1.to_f64().unwrap_or(f64::NAN) / k;
        let var = (s2.to_f64().unwrap_or(f64::NAN) - k * mean * mean) / (k - 1.0);
        (var.max(0.0) / k).sqrt()
    }
}

/// Traces of independently sampled members, counted by `scaled_trace`.
pub fn sample_distribution(spec: &FamilySpec, models: &[ThinModel]) -> Result<TraceDistribution> {
    let g = spec.g();
    let keys: Vec<Vec<i64>> = models
        .par_iter()
        .map(|m| {
            let curve = Curve::new(spec, m.clone())?;
            (1..=g).map(|n| scaled_trace(&curve, n)).collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for k in keys {
        *counts.entry(k).or_insert(0) += 1;
    }
    TraceDistribution::from_counts(spec.q(), g, counts)
}

/// Result of an exhaustive sweep.
#[derive(Clone, Debug)]
pub struct FamilySweep {
    pub distribution: TraceDistribution,
    probes: Vec<Poly>,
    probe_degrees: Vec<u32>,
    r: u32,
    /// Monic member counts by branch and `deg F mod r`.
    monic: [Vec<u64>; 2],
    /// `[probe][branch][deg F mod r][exponent, or r when P | F]`, monic members only.
    per_prime: Option<Vec<u64>>,
}

impl FamilySweep {
    pub fn probes(&self) -> &[Poly] {
        &self.probes
    }

    pub fn probe_degree(&self, idx: usize) -> u32 {
        self.probe_degrees[idx]
    }

    pub fn max_probe_degree(&self) -> u32 {
        self.probe_degrees.last().copied().unwrap_or(0)
    }

    pub fn monic_counts(&self, branch: Branch) -> &[u64] {
        &self.monic[branch as usize]
    }

    pub fn has_per_prime(&self) -> bool {
        self.per_prime.is_some()
    }

    /// Counts of monic members of `branch` with `deg F = k mod r` by symbol
    /// exponent at probe `idx`; the last slot counts members divisible by P.
    pub fn symbol_histogram(&self, idx: usize, branch: Branch, k: u32) -> Option<&[u64]> {
        let r = self.r as usize;
        let start = ((idx * 2 + branch as usize) * r + k as usize) * (r + 1);
        self.per_prime.as_ref().map(|v| &v[start..start + r + 1])
    }
}

struct Sweeper<'a> {
    r: u32,
    sym: &'a [u8],
    probe_deg: &'a [u32],
    /// probes of degree at most `traces` form a prefix
    trace_probes: usize,
    traces: usize,
    per_prime: bool,
    acc: Vec<u8>,
    div: Vec<u8>,
    hist: Vec<i64>,
    keys: BTreeMap<Vec<i64>, u64>,
    monic: [Vec<u64>; 2],
    pp: Vec<u64>,
}

impl<'a> Sweeper<'a> {
    fn new(r: u32, sym: &'a [u8], probe_deg: &'a [u32], traces: u32, per_prime: bool) -> Self {
        let np = probe_deg.len();
        let trace_probes = probe_deg.iter().take_while(|&&m| m <= traces).count();
        let ru = r as usize;
        Sweeper {
            r,
            sym,
            probe_deg,
            trace_probes,
            traces: traces as usize,
            per_prime,
            acc: vec![0; np],
            div: vec![0; np],
            hist: vec![0; traces as usize * ru],
            keys: BTreeMap::new(),
            monic: [vec![0; ru], vec![0; ru]],
            pp: if per_prime { vec![0; np * 2 * ru * (ru + 1)] } else { Vec::new() },
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.keys {
            *self.keys.entry(k).or_insert(0) += c;
        }
        for b in 0..2 {
            for (x, y) in self.monic[b].iter_mut().zip(&other.monic[b]) {
                *x += y;
            }
        }
        for (x, y) in self.pp.iter_mut().zip(&other.pp) {
            *x += y;
        }
        self
    }
}

impl FamilyVisitor for Sweeper<'_> {
    fn push(&mut self, block: usize, part: u32) {
        let np = self.acc.len();
        let row = &self.sym[block * np..(block + 1) * np];
        let r = self.r as u16;
        for ((a, d), &s) in self.acc.iter_mut().zip(self.div.iter_mut()).zip(row) {
            if s == DIV {
                *d += 1;
            } else {
                *a = ((*a as u16 + part as u16 * s as u16) % r) as u8;
            }
        }
    }

    fn pop(&mut self, block: usize, part: u32) {
        let np = self.acc.len();
        let row = &self.sym[block * np..(block + 1) * np];
        let r = self.r as u16;
        for ((a, d), &s) in self.acc.iter_mut().zip(self.div.iter_mut()).zip(row) {
            if s == DIV {
                *d -= 1;
            } else {
                *a = ((*a as u16 + r - (part as u16 * s as u16) % r) % r) as u8;
            }
        }
    }

    fn leaf(&mut self, branch: Branch, deg_f: u32) {
        let r = self.r as usize;
        let k = deg_f as usize % r;
        self.monic[branch as usize][k] += 1;
        if self.per_prime {
            for p in 0..self.acc.len() {
                let e = if self.div[p] > 0 { r } else { self.acc[p] as usize };
                self.pp[((p * 2 + branch as usize) * r + k) * (r + 1) + e] += 1;
            }
        }
        self.hist.iter_mut().for_each(|h| *h = 0);
        for p in 0..self.trace_probes {
            if self.div[p] == 0 {
                self.hist[(self.probe_deg[p] as usize - 1) * r + self.acc[p] as usize] += 1;
            }
        }
        let r64 = r as i64;
        let unit_sum = |x: usize| if x % r == 0 { r64 - 1 } else { -1 };
        for j in 0..r {
            let key: Vec<i64> = (1..=self.traces)
                .map(|n| {
                    let mut neg_t = 0i64;
                    for m in (1..=n).filter(|m| n % m == 0) {
                        let row = &self.hist[(m - 1) * r..m * r];
                        let s: i64 = (0..r).map(|e| row[e] * unit_sum((e + j * m) * (n / m))).sum();
                        neg_t += m as i64 * s;
                    }
                    if k == 0 {
                        neg_t += unit_sum(j * n);
                    }
                    -neg_t
                })
                .collect();
            *self.keys.entry(key).or_insert(0) += 1;
        }
    }
}

/// `(Q/P)_r` for every block Q and probe P, block-major, `DIV` when Q = P.
fn symbol_table(spec: &FamilySpec, blocks: &BlockSet, probes: &[Poly], degrees: &[u32]) -> Result<Vec<u8>> {
    let nb = blocks.len();
    let np = probes.len();
    if nb.saturating_mul(np) > MAX_SYMBOL_TABLE {
        return Err(Error::TooMany {
            what: "symbol table entries",
            count: (nb * np) as u128,
            limit: MAX_SYMBOL_TABLE as u128,
        });
    }
    let ctx = spec.symbols();
    let r = spec.r();
    for m in 1..=degrees.last().copied().unwrap_or(0) {
        ctx.root_table(m)?;
    }
    let columns: Vec<Vec<u8>> = probes
        .par_iter()
        .zip(degrees)
        .map(|(p, &m)| {
            let ext = ctx.ext(m)?;
            let root = ctx.root_table(m)?[p];
            Ok(blocks
                .primes()
                .iter()
                .map(|q| {
                    let l = ext.eval_log(q, root);
                    if l == ZERO_LOG {
                        DIV
                    } else {
                        (l % r) as u8
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut table = vec![0u8; nb * np];
    for (p, col) in columns.iter().enumerate() {
        for (b, &v) in col.iter().enumerate() {
            table[b * np + p] = v;
        }
    }
    Ok(table)
}

/// Walks the whole family once, recording the trace vector `(t_1..t_g)` of
/// every member. With `per_prime_degree = Some(D)` it also records symbol
/// histograms at every prime of degree at most D.
pub fn sweep_family(spec: &FamilySpec, per_prime_degree: Option<u32>) -> Result<FamilySweep> {
    let size = count_family(spec, &Conductor::One)?.to_u128().unwrap_or(u128::MAX);
    if size > MAX_SWEEP {
        return Err(Error::FamilyTooLarge { size, cap: MAX_SWEEP });
    }
    let g = spec.g();
    let probe_max = per_prime_degree.unwrap_or(0).max(g);
    let mut probes = Vec::new();
    let mut degrees = Vec::new();
    for m in 1..=probe_max {
        for p in enumerate_irreducibles(spec.field(), m)? {
            if let PrimePoly::Finite(poly) = p {
                probes.push(poly);
                degrees.push(m);
            }
        }
    }
    let blocks = BlockSet::new(spec, spec.d())?;
    let table = symbol_table(spec, &blocks, &probes, &degrees)?;
    let per_prime = per_prime_degree.is_some();
    let make = || Sweeper::new(spec.r(), &table, &degrees, g, per_prime);
    let done = SweepTask::all(spec, &blocks)
        .par_iter()
        .fold(make, |mut v, task| {
            task.run(spec, &blocks, &mut v);
            v
        })
        .reduce(make, Sweeper::merge);
    let distribution = TraceDistribution::from_counts(spec.q(), g, done.keys)?;
    let per_prime = per_prime.then_some(done.pp);
    Ok(FamilySweep { distribution, probes, probe_degrees: degrees.clone(), r: spec.r(), monic: done.monic, per_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::enumerate_family;

    #[test]
    fn sweep_matches_point_counts() {
        for (q, r, g) in [(5, 2, 1), (7, 3, 1), (5, 4, 3)] {
            let spec = FamilySpec::from_order(q, r, g).unwrap();
            let sweep = sweep_family(&spec, None).unwrap();
            let members: Vec<_> = enumerate_family(&spec).unwrap().collect();
            let direct = sample_distribution(&spec, &members).unwrap();
            let a: Vec<_> = sweep.distribution.entries().iter().map(|(k, _, c)| (k.clone(), *c)).collect();
            let b: Vec<_> = direct.entries().iter().map(|(k, _, c)| (k.clone(), *c)).collect();
            assert_eq!(a, b, "q={q} r={r} g={g}");
        }
    }

    #[test]
    fn per_prime_histograms_cover_family() {
        let spec = FamilySpec::from_order(7, 3, 1).unwrap();
        let sweep = sweep_family(&spec, Some(2)).unwrap();
        let total: u64 = Branch::ALL.iter().flat_map(|&b| sweep.monic_counts(b).to_vec()).sum();
        for idx in 0..sweep.probes().len() {
            let mut seen = 0;
            for b in Branch::ALL {
                for k in 0..3 {
                    seen += sweep.symbol_histogram(idx, b, k).unwrap().iter().sum::<u64>();
                }
            }
            assert_eq!(seen, total);
        }
        assert_eq!(sweep.distribution.total(), 3 * total);
    }
}
