//! Polynomial gcd, squarefree decomposition and factorization over `F_q`.
//!
//! ```text
//! cargo run --example polynomials
//! ```

use cyclic_covers::finite_field::field_of_order;
use cyclic_covers::polynomials::{factor, gcd, prime_count, squarefree_decomposition, Poly};

fn main() -> cyclic_covers::Result<()> {
    let f5 = field_of_order(5)?;
    // coefficients low degree first
    let a = Poly::new(vec![4, 0, 1]); // x^2 - 1
    let b = Poly::new(vec![1, 3, 1]); // x^2 - 2x + 1
    println!("gcd(x^2 - 1, x^2 - 2x + 1) = {:?}", gcd(&f5, &a, &b)?);

    let f = a.mul(&b, &f5).mul(&Poly::new(vec![2, 0, 1]), &f5);
    println!("f = {f:?}");
    for (part, mult) in squarefree_decomposition(&f5, &f) {
        println!("  squarefree part {part:?} with multiplicity {mult}");
    }
    for (p, mult) in factor(&f5, &f)? {
        println!("  prime {:?}^{mult}", p.poly().unwrap());
    }

    for m in 1..=6 {
        println!("monic irreducibles of degree {m} over F_5: {}", prime_count(&f5, m));
    }
    Ok(())
}
