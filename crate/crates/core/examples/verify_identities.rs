//! Numerical checks of the projection identities and kernel classification.

use orthodecomp::{from_expression, kernel_membership, project_fluctuation, verify};
use orthodecomp::{FunctionHandle, QuadratureConfig};

fn main() -> orthodecomp::Result<()> {
    let cfg = QuadratureConfig::default();
    let none = Default::default();

    for src in ["x^3 - x", "abs(x-0.3)", "(x-0.7)^(2/3)", "sin(2*pi*x)"] {
        let f = from_expression(src, &none)?;
        let r = verify(&f, &cfg, 50)?;
        println!("{src}");
        println!("  orthogonality  {:.1e}", r.orthogonality);
        println!(
            "  idempotence    {:.1e} {:.1e}",
            r.idempotence_p, r.idempotence_q
        );
        println!("  cross terms    {:.1e}", r.cross());
        println!("  int Q f        {:.1e}", r.mean_of_q);
        println!("  pythagoras     {:.1e}", r.pythagoras);
        println!("  h(1)           {:.1e}", r.potential_boundary);
        println!("  mean-zero case {:?}", r.zero_mean_check);
    }

    println!();
    let members = [
        ("4", from_expression("4", &none)?),
        ("sin(2 pi x)", from_expression("sin(2*pi*x)", &none)?),
        (
            "Q[exp(x)]",
            project_fluctuation(&from_expression("exp(x)", &none)?, &cfg)?,
        ),
        ("x", from_expression("x", &none)?),
        ("0", FunctionHandle::constant(0.0)),
    ];
    for (name, f) in members {
        let k = kernel_membership(&f, &cfg)?;
        println!("{name:<12} ker P: {:<5}  ker Q: {}", k.in_ker_p, k.in_ker_q);
    }
    Ok(())
}
