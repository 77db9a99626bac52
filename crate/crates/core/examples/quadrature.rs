//! Adaptive Gauss-Legendre integration, cumulative integrals and the L1 norm.

use orthodecomp::{cumulative, from_expression, integrate, l1_norm, QuadratureConfig};

fn main() -> orthodecomp::Result<()> {
    let cfg = QuadratureConfig::default();
    let none = Default::default();

    for src in ["x^2", "abs(x-0.3)", "(x-1/2)^(2/3)", "sin(10*x)", "sqrt(x)"] {
        let f = from_expression(src, &none)?;
        let r = integrate(&f, 0.0, 1.0, &cfg)?;
        println!(
            "int_0^1 {src:<14} = {:.15}  (err {:.1e}, {} panels)",
            r.value, r.error_estimate, r.panels_used
        );
    }

    let f = from_expression("cos(3*x)", &none)?;
    println!("\nF(x) = int_0^x cos(3t) dt");
    for x in [0.25f64, 0.5, 1.0] {
        let exact = (3.0 * x).sin() / 3.0;
        println!(
            "  F({x}) = {:.15}  exact {exact:.15}",
            cumulative(&f, x, &cfg)?
        );
    }

    let g = from_expression("x - 0.5", &none)?;
    println!("\n||x - 0.5||_1 = {:.15}", l1_norm(&g, &cfg)?);

    let loose = QuadratureConfig::with_tolerance(1e-4);
    let r = integrate(&f, 0.0, 1.0, &loose)?;
    println!("cos(3x) at tol 1e-4: {} panels", r.panels_used);
    Ok(())
}
