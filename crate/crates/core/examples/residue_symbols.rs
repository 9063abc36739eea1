//! Cubic residue symbols over `F_7` computed from root tables and by Euler's
//! criterion, and quadratic reciprocity in `F_5[x]`.
//!
//! ```text
//! cargo run --example residue_symbols
//! ```

use std::sync::Arc;

use cyclic_covers::finite_field::field_of_order;
use cyclic_covers::polynomials::{enumerate_irreducibles, Poly, PrimePoly};
use cyclic_covers::residue_symbols::SymbolContext;

fn main() -> cyclic_covers::Result<()> {
    let f7 = field_of_order(7)?;
    let ctx = SymbolContext::new(Arc::clone(&f7), 3)?;
    let f = Poly::new(vec![2, 1, 0, 1]); // x^3 + x + 2
    println!("(F/P)_3 for F = x^3 + x + 2 over F_7");
    for p in enumerate_irreducibles(&f7, 2)?.into_iter().take(6) {
        let poly = p.poly().unwrap().clone();
        let table = ctx.legendre(&f, &p, 3)?;
        let euler = ctx.legendre_by_euler(&f, &poly, 3)?;
        println!("  P = {poly:?}: {table:?} (Euler {euler:?})");
    }
    println!("  P = infinity: {:?}", ctx.legendre(&f, &PrimePoly::Infinity, 3)?);

    // (A/B)(B/A) = 1 for monic A, B over F_5 with q = 1 mod 4
    let f5 = field_of_order(5)?;
    let ctx = SymbolContext::new(Arc::clone(&f5), 2)?;
    let primes: Vec<PrimePoly> =
        enumerate_irreducibles(&f5, 1)?.into_iter().chain(enumerate_irreducibles(&f5, 2)?).collect();
    let mut checked = 0;
    for a in &primes {
        for b in &primes {
            if a == b {
                continue;
            }
            let ab = ctx.legendre(a.poly().unwrap(), b, 2)?;
            let ba = ctx.legendre(b.poly().unwrap(), a, 2)?;
            assert_eq!(ab.to_complex() * ba.to_complex(), num_complex::Complex64::new(1.0, 0.0));
            checked += 1;
        }
    }
    println!("quadratic reciprocity holds for {checked} ordered pairs of primes of degree <= 2 over F_5");
    Ok(())
}
