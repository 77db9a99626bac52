//! Interior zeros of the fluctuation and the integrals on either side.

use orthodecomp::{from_expression, zero_crossings, QuadratureConfig};

fn main() -> orthodecomp::Result<()> {
    let cfg = QuadratureConfig::default();
    for src in ["exp(x)", "x", "x^2", "cos(7*x)", "abs(x-0.2)"] {
        let f = from_expression(src, &Default::default())?;
        let report = zero_crossings(&f, &cfg, 1024)?;
        println!("{src}");
        for z in &report.zeros {
            println!(
                "  x0 = {:.12}  left {:+.12}  right {:+.12}  sum {:+.1e}",
                z.x0, z.left_integral, z.right_integral, z.sum
            );
        }
    }
    println!("\nln(e - 1) = {:.12}", (std::f64::consts::E - 1.0).ln());
    Ok(())
}
