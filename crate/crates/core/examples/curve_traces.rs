//! One curve: point counts, the three trace routes, the L-polynomial and
//! its eigenangles.
//!
//! ```text
//! cargo run --example curve_traces
//! ```

use cyclic_covers::families::{Branch, FamilySpec, ThinModel};
use cyclic_covers::polynomials::Poly;
use cyclic_covers::traces::{
    count_points, count_points_brute, eigenangles, l_polynomial, scaled_trace, trace_formula_general,
    trace_formula_thin, Curve,
};

fn main() -> cyclic_covers::Result<()> {
    // y^3 = (x^2 + x + 3)(x + 1)^2 over F_7, genus 2
    let spec = FamilySpec::from_order(7, 3, 2)?;
    let model = ThinModel {
        alpha_index: 0,
        parts: vec![(1, Poly::new(vec![3, 1, 1])), (2, Poly::new(vec![1, 1]))],
        branch: Branch::Ramified,
    };
    let curve = Curve::new(&spec, model)?;
    println!("F = {:?}, genus {}", curve.f(), curve.genus());
    println!("{:>2} {:>8} {:>8} {:>10} {:>12} {:>14}", "n", "#C", "brute", "q^n/2 Tr", "-thin", "-general");
    for n in 1..=4 {
        println!(
            "{n:>2} {:>8} {:>8} {:>10} {:>12} {:>14}",
            count_points(&curve, n)?,
            count_points_brute(&curve, n)?,
            scaled_trace(&curve, n)?,
            -trace_formula_thin(&curve, n)?,
            -trace_formula_general(&curve, n)?
        );
    }
    let l = l_polynomial(&curve)?;
    println!("L(u) coefficients {:?}", l.coeffs());
    println!("functional equation holds: {}", l.satisfies_functional_equation());
    let angles: Vec<String> = eigenangles(&l)?.iter().map(|t| format!("{t:.6}")).collect();
    println!("eigenangles {}", angles.join(" "));
    Ok(())
}
