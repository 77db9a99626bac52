//! Decompose tabulated data read from CSV.
//!
//! `cargo run --example sampled_csv -- data.csv`; without an argument a noisy
//! sample of sin(3x) is generated in memory.

use std::io::Cursor;

use orthodecomp::function::read_csv_rows;
use orthodecomp::{decompose, from_csv, from_csv_path, QuadratureConfig, RealFunction};

fn main() -> orthodecomp::Result<()> {
    let f = match std::env::args().nth(1) {
        Some(path) => from_csv_path(path.as_ref())?,
        None => {
            let mut text = String::from("x,y\n");
            for i in 0..=40 {
                let x = 0.05 + 0.9 * i as f64 / 40.0;
                let wobble = 0.01 * ((i * 7919) % 13) as f64 / 13.0;
                text.push_str(&format!("{x},{}\n", (3.0 * x).sin() + wobble));
            }
            from_csv(&read_csv_rows(Cursor::new(text))?)?
        }
    };
    for w in f.warnings() {
        eprintln!("warning: {w}");
    }

    let d = decompose(&f, &QuadratureConfig::default())?;
    println!("P f = {:.12}", d.mean);
    println!("x,f,q,h");
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        println!(
            "{x},{:.9},{:.9},{:.9}",
            f.value_at(x)?,
            d.fluctuation.value_at(x)?,
            d.potential.value_at(x)?
        );
    }
    Ok(())
}
