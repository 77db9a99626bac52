//! Sign-change scanning and bisection.

use crate::error::Result;

/// Interval `[lo, hi]` over which a function changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Samples `f` on `n + 1` uniform points of `[a, b]` and returns the sign changes.
///
/// Points where evaluation fails are skipped. A sample that is exactly zero with
/// neighbours of strictly opposite sign yields a degenerate bracket `[x, x]`; zeros
/// without a sign change (including an identically zero function) are ignored.
pub fn scan_sign_changes(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, n: usize) -> Vec<Bracket> {
    let samples: Vec<(f64, f64)> = (0..=n)
        .filter_map(|i| {
            let x = if i == n {
                b
            } else {
                a + (b - a) * (i as f64 / n as f64)
            };
            f(x).ok().map(|y| (x, y))
        })
        .collect();

    let mut out = Vec::new();
    for (i, w) in samples.windows(2).enumerate() {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 * y1 < 0.0 {
            out.push(Bracket { lo: x0, hi: x1 });
        } else if y1 == 0.0 && y0 != 0.0 {
            if let Some(&(_, y2)) = samples.get(i + 2) {
                if y0 * y2 < 0.0 {
                    out.push(Bracket { lo: x1, hi: x1 });
                }
            }
        }
    }
    out
}

/// Halves `bracket` until its width is at most `width_tol` and returns the midpoint.
///
/// The endpoint signs are re-evaluated, so the bracket must enclose a sign change
/// (or be degenerate).
pub fn bisect(f: impl Fn(f64) -> Result<f64>, bracket: Bracket, width_tol: f64) -> Result<f64> {
    let Bracket { mut lo, mut hi } = bracket;
    if lo == hi {
        return Ok(lo);
    }
    let mut f_lo = f(lo)?;
    while hi - lo > width_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
