//! Exhaustive enumeration of thin families.
//!
//! Monic members `prod f_i^i` of radical degree D are sets of distinct monic
//! primes whose degrees sum to D, each prime labelled with a part index i
//! coprime to r. The walker picks primes in a fixed order (descending degree)
//! and hands every pick to a [`FamilyVisitor`], so visitors can maintain
//! per-member data incrementally instead of rebuilding it at each leaf.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{count_family, Branch, Conductor, FamilySpec, ThinModel};
use crate::error::{Error, Result};
use crate::polynomials::{enumerate_irreducibles, Poly, PrimePoly};

pub const MAX_ENUMERATION: u128 = 100_000_000;

/// All monic primes of degree at most `max_degree`, in descending degree
/// (lexicographic within a degree).
#[derive(Clone, Debug)]
pub struct BlockSet {
    primes: Vec<Poly>,
    degrees: Vec<u32>,
    /// `start[D]`: first index whose degree is at most D.
    start: Vec<usize>,
}

impl BlockSet {
    pub fn new(spec: &FamilySpec, max_degree: u32) -> Result<Self> {
        let field = spec.field();
        let mut primes = Vec::new();
        let mut degrees = Vec::new();
        for m in (1..=max_degree).rev() {
            for p in enumerate_irreducibles(field, m)? {
                if let PrimePoly::Finite(poly) = p {
                    primes.push(poly);
                    degrees.push(m);
                }
            }
        }
        let start = (0..=max_degree as usize)
            .map(|dd| degrees.iter().position(|&m| m as usize <= dd).unwrap_or(degrees.len()))
            .collect();
        Ok(BlockSet { primes, degrees, start })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn prime(&self, idx: usize) -> &Poly {
        &self.primes[idx]
    }

    pub fn degree(&self, idx: usize) -> u32 {
        self.degrees[idx]
    }

    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    pub fn max_degree(&self) -> u32 {
        self.start.len() as u32 - 1
    }
}

/// Callbacks of the family walker. `push`/`pop` bracket each prime pick;
/// `leaf` fires once per monic member of the branch (alpha not included).
pub trait FamilyVisitor {
    fn push(&mut self, block: usize, part: u32);
    fn pop(&mut self, block: usize, part: u32);
    fn leaf(&mut self, branch: Branch, deg_f: u32);
}

/// A unit of parallel work: all members of `branch` whose first pick is
/// `(block, part)`, or the empty member when `block` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepTask {
    pub branch: Branch,
    pub first: Option<(usize, u32)>,
}

struct Walker<'a, V> {
    blocks: &'a BlockSet,
    parts: &'a [u32],
    r: u32,
    branch: Branch,
    visitor: &'a mut V,
}

impl<V: FamilyVisitor> Walker<'_, V> {
    fn walk(&mut self, from: usize, remaining: u32, deg_f: u32) {
        if remaining == 0 {
            if self.branch.accepts(deg_f, self.r) {
                self.visitor.leaf(self.branch, deg_f);
            }
            return;
        }
        let lo = from.max(self.blocks.start[remaining as usize]);
        for idx in lo..self.blocks.len() {
            let m = self.blocks.degrees[idx];
            for &i in self.parts {
                self.visitor.push(idx, i);
                self.walk(idx + 1, remaining - m, deg_f + i * m);
                self.visitor.pop(idx, i);
            }
        }
    }
}

impl SweepTask {
    /// The tasks covering both branches of `spec`.
    pub fn all(spec: &FamilySpec, blocks: &BlockSet) -> Vec<SweepTask> {
        let parts = spec.part_indices();
        let mut out = Vec::new();
        for branch in Branch::ALL {
            let dd = branch.radical_degree(spec.d());
            assert!(dd <= blocks.max_degree(), "block set too small for radical degree {dd}");
            if dd == 0 {
                out.push(SweepTask { branch, first: None });
                continue;
            }
            for idx in blocks.start[dd as usize]..blocks.len() {
                for &i in &parts {
                    out.push(SweepTask { branch, first: Some((idx, i)) });
                }
            }
        }
        out
    }

    pub fn run<V: FamilyVisitor>(&self, spec: &FamilySpec, blocks: &BlockSet, visitor: &mut V) {
        let parts = spec.part_indices();
        let dd = self.branch.radical_degree(spec.d());
        let mut walker = Walker { blocks, parts: &parts, r: spec.r(), branch: self.branch, visitor };
        match self.first {
            None => walker.walk(0, dd, 0),
            Some((idx, i)) => {
                let m = blocks.degrees[idx];
                walker.visitor.push(idx, i);
                walker.walk(idx + 1, dd - m, i * m);
                walker.visitor.pop(idx, i);
            }
        }
    }
}

/// Runs every task on a fresh visitor from `make` (in parallel when a rayon
/// pool is active) and returns the visitors in task order.
pub fn run_tasks<V, F>(spec: &FamilySpec, blocks: &BlockSet, make: F) -> Vec<V>
where
    V: FamilyVisitor + Send,
    F: Fn() -> V + Sync,
{
    SweepTask::all(spec, blocks)
        .par_iter()
        .map(|task| {
            let mut v = make();
            task.run(spec, blocks, &mut v);
            v
        })
        .collect()
}

/// Rebuilds the parts `(i, f_i)` from a stack of picks.
pub(crate) fn parts_from_picks(spec: &FamilySpec, blocks: &BlockSet, picks: &[(usize, u32)]) -> Vec<(u32, Poly)> {
    let field = spec.field();
    spec.part_indices()
        .into_iter()
        .map(|i| {
            let f = picks
                .iter()
                .filter(|(_, part)| *part == i)
                .fold(Poly::one(), |acc, (idx, _)| acc.mul(blocks.prime(*idx), field));
            (i, f)
        })
        .collect()
}

struct Collector<'a> {
    spec: &'a FamilySpec,
    blocks: &'a BlockSet,
    picks: Vec<(usize, u32)>,
    out: Vec<(Branch, Vec<(u32, Poly)>)>,
}

impl FamilyVisitor for Collector<'_> {
    fn push(&mut self, block: usize, part: u32) {
        self.picks.push((block, part));
    }

    fn pop(&mut self, _: usize, _: u32) {
        self.picks.pop();
    }

    fn leaf(&mut self, branch: Branch, _: u32) {
        self.out.push((branch, parts_from_picks(self.spec, self.blocks, &self.picks)));
    }
}

fn checked_size(spec: &FamilySpec) -> Result<u128> {
    let size = count_family(spec, &Conductor::One)?;
    let size = size.to_u128().unwrap_or(u128::MAX);
    if size > MAX_ENUMERATION {
        return Err(Error::FamilyTooLarge { size, cap: MAX_ENUMERATION });
    }
    Ok(size)
}

/// Calls `visit` on every member, alpha classes outermost, then the
/// unramified branch before the ramified one.
pub fn for_each_member(spec: &FamilySpec, mut visit: impl FnMut(ThinModel)) -> Result<()> {
    checked_size(spec)?;
    let blocks = BlockSet::new(spec, spec.d())?;
    let mut collector = Collector { spec, blocks: &blocks, picks: Vec::new(), out: Vec::new() };
    for task in SweepTask::all(spec, &blocks) {
        task.run(spec, &blocks, &mut collector);
    }
    let monic = collector.out;
    for j in 0..spec.r() {
        for (branch, parts) in &monic {
            visit(ThinModel { alpha_index: j, parts: parts.clone(), branch: *branch });
        }
    }
    Ok(())
}

/// Every member of the family, in the order of [`for_each_member`].
pub fn enumerate_family(spec: &FamilySpec) -> Result<std::vec::IntoIter<ThinModel>> {
    let mut out = Vec::with_capacity(checked_size(spec)? as usize);
    for_each_member(spec, |m| out.push(m))?;
    Ok(out.into_iter())
}

/// Number of monic members in each branch by direct enumeration.
pub fn enumerated_branch_sizes(spec: &FamilySpec) -> Result<[BigInt; 2]> {
    struct Counter([u64; 2]);
    impl FamilyVisitor for Counter {
        fn push(&mut self, _: usize, _: u32) {}
        fn pop(&mut self, _: usize, _: u32) {}
        fn leaf(&mut self, branch: Branch, _: u32) {
            self.0[(branch == Branch::Ramified) as usize] += 1;
        }
    }
    let blocks = Arc::new(BlockSet::new(spec, spec.d())?);
    let counters = run_tasks(spec, &blocks, || Counter([0, 0]));
    let mut totals = [0u64; 2];
    for c in counters {
        totals[0] += c.0[0];
        totals[1] += c.0[1];
    }
    Ok([BigInt::from(totals[0]), BigInt::from(totals[1])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_series_count() {
        for (q, r, g) in [(3, 2, 1), (7, 3, 1), (5, 4, 3)] {
            let spec = FamilySpec::from_order(q, r, g).unwrap();
            let members: Vec<_> = enumerate_family(&spec).unwrap().collect();
            assert_eq!(BigInt::from(members.len()), count_family(&spec, &Conductor::One).unwrap());
            for m in members.iter().take(200) {
                m.validate(&spec).unwrap();
            }
        }
    }

    #[test]
    fn branch_sizes() {
        let spec = FamilySpec::from_order(3, 2, 1).unwrap();
        let [u, r] = enumerated_branch_sizes(&spec).unwrap();
        assert_eq!(u, BigInt::from(54));
        assert_eq!(r, BigInt::from(18));
    }
}
