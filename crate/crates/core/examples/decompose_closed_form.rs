//! Split closed-form functions into mean and fluctuation.
//!
//! `cargo run --example decompose_closed_form -- "exp(g*x)" 3`

use std::collections::BTreeMap;

use orthodecomp::{decompose, from_expression, QuadratureConfig, RealFunction};

fn main() -> orthodecomp::Result<()> {
    let mut args = std::env::args().skip(1);
    let cfg = QuadratureConfig::default();

    let jobs: Vec<(String, BTreeMap<String, f64>)> = match args.next() {
        Some(src) => {
            let mut params = BTreeMap::new();
            if let Some(g) = args.next() {
                params.insert("g".to_string(), g.parse().expect("numeric g"));
            }
            vec![(src, params)]
        }
        None => {
            let mut jobs: Vec<_> = ["x", "x^2", "abs(x-1/2)", "(x-1/2)^(2/3)"]
                .iter()
                .map(|s| (s.to_string(), BTreeMap::new()))
                .collect();
            for g in [-2.0, 0.5, 3.0] {
                jobs.push(("exp(g*x)".into(), BTreeMap::from([("g".into(), g)])));
                jobs.push(("cos(g*x)".into(), BTreeMap::from([("g".into(), g)])));
            }
            jobs
        }
    };

    for (src, params) in jobs {
        let f = from_expression(&src, &params)?;
        let d = decompose(&f, &cfg)?;
        println!("f = {}", f.label());
        println!("  P f = {:.12}", d.mean);
        print!("  Q f:");
        for x in [0.0, 0.5, 1.0] {
            print!("  ({x}, {:+.6})", d.fluctuation.value_at(x)?);
        }
        println!(
            "\n  orthogonality residual {:.1e}",
            d.residuals.orthogonality
        );
    }
    Ok(())
}
