//! Inner products, norms and angles in L2(0, 1).

use orthodecomp::{angle, collinearity_angle, from_expression, inner_product, l2_norm};
use orthodecomp::{FunctionHandle, QuadratureConfig};

fn f(src: &str) -> FunctionHandle {
    from_expression(src, &Default::default()).unwrap()
}

fn main() -> orthodecomp::Result<()> {
    let cfg = QuadratureConfig::default();

    let pairs = [
        ("x", "x^2"),
        ("sin(x)", "cos(x)"),
        ("e - 1", "e^x + 1 - e"),
        ("exp(x)", "exp(-x)"),
        ("sin(2*pi*x)", "cos(2*pi*x)"),
    ];
    for (a, b) in pairs {
        let r = angle(&f(a), &f(b), &cfg)?;
        println!(
            "angle({a}, {b}) = {:.12} rad = {:.6} deg  (<f,g> = {:.6})",
            r.theta_radians,
            r.theta_degrees(),
            r.inner
        );
    }

    let g = f("abs(x-1/2)");
    println!(
        "\n<g, g> = {:.12}, ||g||^2 = {:.12}",
        inner_product(&g, &g, &cfg)?,
        l2_norm(&g, &cfg)?.powi(2)
    );
    for lambda in [2.5, -0.5] {
        let r = angle(&g, &g.scaled(lambda), &cfg)?;
        println!(
            "angle(g, {lambda} g) = {:.3e}, analytic {}",
            r.theta_radians,
            collinearity_angle(lambda)?
        );
    }
    Ok(())
}
