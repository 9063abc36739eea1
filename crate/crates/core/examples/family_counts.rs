//! Thin family sizes from generating series, checked against enumeration,
//! and the coprimality ratio for a linear prime as the genus grows.
//!
//! ```text
//! cargo run --release --example family_counts
//! ```

use cyclic_covers::families::{
    count_family, count_from_series, enumerated_branch_sizes, unram_ratio, Branch, Conductor, FamilySpec,
};
use cyclic_covers::polynomials::{Poly, PrimePoly};
use num_traits::ToPrimitive;

fn main() -> cyclic_covers::Result<()> {
    for (q, r, g) in [(3, 2, 1), (3, 2, 2), (7, 3, 1), (7, 3, 2)] {
        let spec = FamilySpec::from_order(q, r, g)?;
        let size = count_family(&spec, &Conductor::One)?;
        let series = count_from_series(&spec, &Conductor::One)?;
        let seen = enumerated_branch_sizes(&spec)?;
        let enumerated = (&seen[0] + &seen[1]) * r;
        println!(
            "q={q} r={r} g={g}: |F| = {size}, closed series {series}, enumerated {enumerated} ({} {} + {} {} monic)",
            seen[0],
            Branch::Unramified.name(),
            seen[1],
            Branch::Ramified.name()
        );
    }

    println!("share of members coprime to x, q = 7, r = 3");
    for g in [2, 4, 6] {
        let spec = FamilySpec::from_order(7, 3, g)?;
        let field = spec.field();
        let u = unram_ratio(&spec, &PrimePoly::finite(field, Poly::x())?)?;
        println!(
            "  g={g}: exact {:.6}, formula {:.6}, residual {:.6}",
            u.exact.to_f64().unwrap(),
            u.formula.to_f64().unwrap(),
            u.residual.to_f64().unwrap()
        );
    }
    Ok(())
}
