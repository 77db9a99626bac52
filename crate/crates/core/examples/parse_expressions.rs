//! Parse closed-form expressions, print them back and evaluate them.
//!
//! `cargo run --example parse_expressions -- "(x-1/2)^(2/3)"`

use orthodecomp::Expr;

fn main() -> orthodecomp::Result<()> {
    let sources: Vec<String> = match std::env::args().nth(1) {
        Some(src) => vec![src],
        None => [
            "x^2",
            "-x^2",
            "abs(x-1/2)",
            "(x-1/2)^(2/3)",
            "exp(-2*x)",
            "2^3^2",
        ]
        .map(String::from)
        .to_vec(),
    };
    for src in &sources {
        let e = Expr::parse(src)?;
        print!(
            "{src:<16} => {e:<16} breakpoints {:?}\n   ",
            e.breakpoints()
        );
        for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
            print!(" f({x}) = {:<10.6}", e.eval(x)?);
        }
        println!();
    }

    for bad in ["x $ 2", "x^^2", "foo(x)"] {
        println!("{bad:<8} -> {}", Expr::parse(bad).unwrap_err());
    }
    Ok(())
}
