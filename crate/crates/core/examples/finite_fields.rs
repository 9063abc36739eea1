//! Log/Zech table arithmetic in `F_9` and an extension `F_(9^3)`.
//!
//! ```text
//! cargo run --example finite_fields
//! ```

use cyclic_covers::finite_field::{extend_field, field_of_order, FiniteField};

fn main() -> cyclic_covers::Result<()> {
    let f9 = field_of_order(9)?;
    let g = f9.generator();
    println!("F_9: characteristic {}, generator code {g}", f9.characteristic());
    for k in 0..8 {
        let x = f9.from_log(k);
        println!("  g^{k} = {x:>2}   inverse {:>2}   x + 1 = {:>2}", f9.inv(x).unwrap(), f9.add(x, 1));
    }

    let ext = extend_field(&f9, 3)?;
    println!("F_(9^3): {} elements, modulus {:?}", ext.size(), ext.modulus());
    // the norm-compatible generator puts base elements at multiples of (Q-1)/(q-1)
    for c in 1..9u32 {
        let code = ext.embed(c);
        println!("  log of {c} in F_9 = {}, in the extension = {}", f9.log(c).unwrap(), ext.log(code).unwrap());
    }
    Ok(())
}
