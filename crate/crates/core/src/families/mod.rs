//! The thin family of r-cyclic covers `y^r = alpha prod_{(i,r)=1} f_i^i` of
//! fixed genus: parameters, curve models, exact counts from generating
//! series, exhaustive enumeration and uniform sampling.

mod enumerate;
mod sample;
mod series;

use std::sync::Arc;

use crate::arith::{gcd, units};
use crate::error::{Error, Result};
use crate::finite_field::{field_of_order, FieldSpec, FiniteField};
use crate::polynomials::{self, Poly};
use crate::residue_symbols::SymbolContext;

pub use enumerate::{
    enumerate_family, enumerated_branch_sizes, for_each_member, run_tasks, BlockSet, FamilyVisitor, SweepTask,
};
pub use sample::sample_family;
pub use series::{
    branch_count_monic, coprimality_formula, count_family, count_from_series, incexc_coeff, refined_count,
    series_coeff, unram_ratio, SeriesTable, UnramRatio,
};

/// Parameters `(q, r, g)` of a thin family, with `d = (2g + 2r - 2)/(r - 1)`.
#[derive(Clone)]
pub struct FamilySpec {
    field: Arc<FieldSpec>,
    r: u32,
    g: u32,
    d: u32,
    symbols: Arc<SymbolContext>,
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FamilySpec(q={}, r={}, g={}, d={})", self.q(), self.r, self.g, self.d)
    }
}

impl FamilySpec {
    pub fn new(field: Arc<FieldSpec>, r: u32, g: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::Invalid(format!("cover degree r = {r} must be at least 2")));
        }
        let q = field.q() as u64;
        if (q - 1) % r as u64 != 0 {
            return Err(Error::BadCongruence { q, modulus: r as u64 });
        }
        if g == 0 {
            return Err(Error::EmptyFamily("genus must be positive".into()));
        }
        if (2 * g) % (r - 1) != 0 {
            return Err(Error::EmptyFamily(format!("2g = {} is not divisible by r - 1 = {}", 2 * g, r - 1)));
        }
        let d = (2 * g + 2 * r - 2) / (r - 1);
        let symbols = Arc::new(SymbolContext::new(field.clone(), r)?);
        Ok(FamilySpec { field, r, g, d, symbols })
    }

    /// Same as [`new`](Self::new) with the field given by its order.
    pub fn from_order(q: u64, r: u32, g: u32) -> Result<Self> {
        Self::new(field_of_order(q)?, r, g)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn symbols(&self) -> &Arc<SymbolContext> {
        &self.symbols
    }

    /// Part indices `1 <= i < r` coprime to r.
    pub fn part_indices(&self) -> Vec<u32> {
        units(self.r as u64).into_iter().map(|i| i as u32).collect()
    }

    /// Code of `beta^j`, the representative of the j-th class of
    /// `F_q^* / (F_q^*)^r`.
    pub fn alpha_code(&self, j: u32) -> u32 {
        self.field.from_log(j as u64)
    }
}

/// The two ramification shapes at infinity allowed when `(r-1) | 2g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `r | deg F`: infinity unramified, radical degree d.
    Unramified,
    /// `(deg F, r) = 1`: infinity totally ramified, radical degree d - 1.
    Ramified,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::Unramified, Branch::Ramified];

    pub fn radical_degree(self, d: u32) -> u32 {
        match self {
            Branch::Unramified => d,
            Branch::Ramified => d - 1,
        }
    }

    /// Whether `deg F` has the gcd with r this branch requires.
    pub fn accepts(self, deg_f: u32, r: u32) -> bool {
        match self {
            Branch::Unramified => deg_f % r == 0,
            Branch::Ramified => gcd(deg_f as u64, r as u64) == 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Unramified => "unramified",
            Branch::Ramified => "ramified",
        }
    }
}

/// Coprimality condition on family members: none, a finite polynomial, or
/// the prime at infinity (`P_inf | F` iff `r` does not divide `deg F`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conductor {
    One,
    Finite(Poly),
    Infinity,
}

/// One member `y^r = beta^j prod f_i^i` of a thin family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThinModel {
    pub alpha_index: u32,
    /// `(i, f_i)` for every i coprime to r in increasing order; empty parts
    /// are the constant 1.
    pub parts: Vec<(u32, Poly)>,
    pub branch: Branch,
}

impl ThinModel {
    pub fn deg_f(&self) -> u32 {
        self.parts.iter().map(|(i, f)| i * f.deg() as u32).sum()
    }

    pub fn radical_degree(&self) -> u32 {
        self.parts.iter().map(|(_, f)| f.deg() as u32).sum()
    }

    /// `prod f_i`.
    pub fn radical(&self, field: &FieldSpec) -> Poly {
        self.parts.iter().fold(Poly::one(), |acc, (_, f)| acc.mul(f, field))
    }

    /// Leading coefficient `alpha = beta^j`.
    pub fn alpha(&self, spec: &FamilySpec) -> u32 {
        spec.alpha_code(self.alpha_index)
    }

    /// `F = alpha prod f_i^i`.
    pub fn f(&self, spec: &FamilySpec) -> Poly {
        self.f_with_exponents(spec, |i| i)
    }

    /// `F_(s) = alpha prod f_i^(i mod s)`.
    pub fn f_sub(&self, spec: &FamilySpec, s: u32) -> Poly {
        self.f_with_exponents(spec, |i| i % s)
    }

    fn f_with_exponents(&self, spec: &FamilySpec, exp: impl Fn(u32) -> u32) -> Poly {
        let field = spec.field();
        let monic = self.parts.iter().fold(Poly::one(), |acc, (i, f)| acc.mul(&f.pow(exp(*i), field), field));
        monic.scale(self.alpha(spec), field)
    }

    /// Checks squarefreeness, pairwise coprimality, the branch and the genus.
    pub fn validate(&self, spec: &FamilySpec) -> Result<()> {
        let field = spec.field();
        if self.parts.iter().any(|(_, f)| !f.is_monic()) {
            return Err(Error::Invalid("parts must be monic".into()));
        }
        if !polynomials::is_squarefree(field, &self.radical(field))? {
            return Err(Error::Invalid("parts are not squarefree and pairwise coprime".into()));
        }
        if !self.branch.accepts(self.deg_f(), spec.r()) {
            return Err(Error::Invalid(format!(
                "deg F = {} does not fit the {} branch",
                self.deg_f(),
                self.branch.name()
            )));
        }
        let g = genus_of(spec.r(), &self.parts)?;
        if g != spec.g() {
            return Err(Error::Invalid(format!("model has genus {g}, family has genus {}", spec.g())));
        }
        Ok(())
    }
}

/// Genus from `2g + 2r - 2 = (r - 1) sum deg f_i + r - (r, deg F)`.
pub fn genus_of(r: u32, parts: &[(u32, Poly)]) -> Result<u32> {
    let radical: i64 = parts.iter().map(|(_, f)| f.deg() as i64).sum();
    let deg_f: u64 = parts.iter().map(|(i, f)| *i as u64 * f.deg() as u64).sum();
    let r = r as i64;
    let twice = (r - 1) * radical + r - gcd(deg_f, r as u64) as i64 - 2 * r + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::NonIntegralGenus { twice_genus: twice });
    }
    Ok((twice / 2) as u32)
}
