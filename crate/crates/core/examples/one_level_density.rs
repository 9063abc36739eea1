//! Family one-level density for a Fejér test function against the refined
//! and random matrix predictions.
//!
//! ```text
//! cargo run --release --example one_level_density -- 0.45
//! ```

use cyclic_covers::families::FamilySpec;
use cyclic_covers::statistics::{density_report, trace_distribution, FamilyMode, TestFunction};

fn main() -> cyclic_covers::Result<()> {
    let alpha: f64 = std::env::args().nth(1).map_or(0.45, |a| a.parse().expect("alpha"));
    let f = TestFunction::fejer(alpha, true);
    println!("{}", f.describe());
    println!(
        "{:>3} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "g", "curves", "lhs", "refined", "ks", "dev_r", "residual"
    );
    for g in [2, 4] {
        let spec = FamilySpec::from_order(7, 3, g)?;
        let dist = trace_distribution(&spec, FamilyMode::Exhaustive)?;
        let rep = density_report(&spec, &f, &dist)?;
        println!(
            "{g:>3} {:>8} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            rep.curves,
            rep.lhs,
            rep.rhs_refined.unwrap(),
            rep.rhs_ks,
            rep.dev_r,
            rep.residual_refined().unwrap()
        );
    }
    Ok(())
}
