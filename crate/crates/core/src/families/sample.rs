//! Uniform sampling from a thin family.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{branch_count_monic, Branch, FamilySpec, ThinModel};
use crate::error::Result;
use crate::polynomials::{is_squarefree, Poly};

/// Degree vectors `(deg f_i)` with the given radical degree whose `deg F`
/// fits the branch.
fn compositions(parts: &[u32], total: u32, r: u32, branch: Branch) -> Vec<Vec<u32>> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, n: usize, out: &mut Vec<Vec<u32>>) {
        if k + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(k + 1, left - x, cur, n, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(0, total, &mut Vec::new(), parts.len(), &mut all);
    all.retain(|c| branch.accepts(c.iter().zip(parts).map(|(d, i)| d * i).sum(), r));
    all
}

fn random_monic(rng: &mut ChaCha8Rng, q: u32, degree: u32) -> Poly {
    let mut coeffs: Vec<u32> = (0..degree).map(|_| rng.random_range(0..q)).collect();
    coeffs.push(1);
    Poly::new(coeffs)
}

/// `count` i.i.d. uniform members. The branch is drawn with probability
/// proportional to its exact size, alpha uniformly, and the parts by
/// rejection: a uniform degree vector, uniform monic parts, accepted iff the
/// radical is squarefree.
pub fn sample_family(spec: &FamilySpec, count: usize, seed: u64) -> Result<Vec<ThinModel>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if count == 0 {
        return Ok(Vec::new());
    }
    let field = spec.field();
    let parts = spec.part_indices();
    let sizes: Vec<BigInt> = Branch::ALL.iter().map(|&b| branch_count_monic(spec, b)).collect::<Result<_>>()?;
    let total = &sizes[0] + &sizes[1];
    let comps: Vec<Vec<Vec<u32>>> =
        Branch::ALL.iter().map(|&b| compositions(&parts, b.radical_degree(spec.d()), spec.r(), b)).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let pick_ramified = match (total.to_u128(), sizes[1].to_u128()) {
            (Some(t), Some(ram)) => rng.random_range(0..t) < ram,
            _ => rng.random::<f64>() < sizes[1].to_f64().unwrap() / total.to_f64().unwrap(),
        };
        let b = pick_ramified as usize;
        let branch = Branch::ALL[b];
        let alpha_index = rng.random_range(0..spec.r());
        loop {
            let comp = &comps[b][rng.random_range(0..comps[b].len())];
            let model_parts: Vec<(u32, Poly)> =
                parts.iter().zip(comp).map(|(&i, &deg)| (i, random_monic(&mut rng, field.q(), deg))).collect();
            let radical = model_parts.iter().fold(Poly::one(), |acc, (_, f)| acc.mul(f, field));
            if is_squarefree(field, &radical)? {
                out.push(ThinModel { alpha_index, parts: model_parts, branch });
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_valid_and_reproducible() {
        let spec = FamilySpec::from_order(7, 3, 2).unwrap();
        let a = sample_family(&spec, 50, 11).unwrap();
        let b = sample_family(&spec, 50, 11).unwrap();
        assert_eq!(a, b);
        for m in &a {
            m.validate(&spec).unwrap();
        }
        assert!(sample_family(&spec, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn composition_filter() {
        // r = 3, parts 1 and 2, radical degree 3: deg F = a + 2b with a + b = 3
        let c = compositions(&[1, 2], 3, 3, Branch::Unramified);
        assert_eq!(c, vec![vec![0, 3], vec![3, 0]]);
    }
}
