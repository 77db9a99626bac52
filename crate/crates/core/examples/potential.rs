//! The zero-trace potential h(x) = int_0^x f - x int_0^1 f and its derivative.

use orthodecomp::{finite_difference, from_expression, potential, project_fluctuation};
use orthodecomp::{QuadratureConfig, RealFunction};

fn main() -> orthodecomp::Result<()> {
    let cfg = QuadratureConfig::default();
    let f = from_expression("exp(x)", &Default::default())?;
    let h = potential(&f, &cfg)?;
    let q = project_fluctuation(&f, &cfg)?;

    println!("f = exp(x), P f = {:.12}", h.mean());
    println!("{:>6} {:>14} {:>14} {:>14}", "x", "h(x)", "h'(x)", "Q f(x)");
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        let slope = if x > 0.0 && x < 1.0 {
            format!("{:14.9}", finite_difference(&h, x, 1e-5)?)
        } else {
            format!("{:>14}", "-")
        };
        println!(
            "{x:6.2} {:14.9} {slope} {:14.9}",
            h.value_at(x)?,
            q.value_at(x)?
        );
    }
    Ok(())
}
