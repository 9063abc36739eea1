//! Exact family averages of Frobenius traces with the main/error term split.
//!
//! ```text
//! cargo run --release --example trace_averages -- 7 3 2 6
//! ```
//! Arguments are q, r, g and the largest n (defaults 7 3 2 6).

use std::time::Instant;

use cyclic_covers::families::FamilySpec;
use cyclic_covers::statistics::verify_trace_averages;

fn main() -> cyclic_covers::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let arg = |i: usize, default: u64| args.get(i).copied().unwrap_or(default);
    let (q, r, g, n_max) = (arg(0, 7), arg(1, 3) as u32, arg(2, 2) as u32, arg(3, 6) as u32);
    let spec = FamilySpec::from_order(q, r, g)?;
    let start = Instant::now();
    let v = verify_trace_averages(&spec, n_max)?;
    println!("{spec:?}, {} curves, {:.1}s", v.rows[0].report.curves, start.elapsed().as_secs_f64());
    println!("{:>3} {:>14} {:>12} {:>14} {:>14} {:>12}", "n", "<Tr>", "avg t_n", "MT", "ET", "residual");
    for row in &v.rows {
        let rep = &row.report;
        let et = row.et.as_ref().map_or("-".to_string(), |e| e.definition.to_string());
        println!(
            "{:>3} {:>14.6} {:>12} {:>14} {:>14} {:>12.4}",
            rep.n,
            rep.average_trace(),
            rep.avg_scaled.to_string(),
            row.mt.to_string(),
            et,
            num_traits::ToPrimitive::to_f64(&rep.residual).unwrap_or(f64::NAN)
        );
    }
    for c in &v.checks {
        println!("{:<28} {}", c.name, if c.pass { "PASS" } else { "FAIL" });
    }
    Ok(())
}
