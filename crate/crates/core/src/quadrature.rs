//! Adaptive Gauss-Legendre quadrature on subintervals of `[0, 1]`.
//!
//! Each panel is integrated with a fixed 15-point Gauss-Legendre rule. A panel is
//! accepted when bisecting it changes the estimate by no more than its width-share
//! of the tolerance; otherwise both halves are queued. Seed panels are split at the
//! integrand's breakpoints so kinks and endpoint singularities sit on panel edges.
//! Functions built purely from sampled grids are piecewise linear and are
//! integrated exactly with the trapezoid rule instead.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{trapezoid, FunctionHandle, RealFunction};
use crate::roots::{bisect, scan_sign_changes};

const GL_POINTS: usize = 15;

/// Resolution of the sign-change scan used by [`l1_norm`].
pub const SIGN_SCAN_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        QuadratureConfig {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be non-negative, got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidConfig(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Error budget for an integral of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub converged: bool,
}

/// 15-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    nodes: [f64; GL_POINTS],
    weights: [f64; GL_POINTS],
}

impl GaussLegendre {
    pub fn get() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::compute(GL_POINTS))
    }

    // Newton iteration on P_n from the Chebyshev-like initial guess.
    fn compute(n: usize) -> GaussLegendre {
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = -x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to `f` on `[a, b]`. Endpoints are never evaluated.
    pub fn panel<const N: usize>(
        &self,
        f: &impl Fn(f64) -> Result<[f64; N]>,
        a: f64,
        b: f64,
    ) -> Result<[f64; N]> {
        let half = 0.5 * (b - a);
        let center = 0.5 * (a + b);
        let mut acc = [0.0; N];
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(center + half * t)?;
            for (s, vk) in acc.iter_mut().zip(v) {
                *s += w * vk;
            }
        }
        Ok(acc.map(|s| s * half))
    }
}

// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfDomain(a));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::OutOfDomain(b));
    }
    if a > b {
        return Err(Error::OutOfDomain(a));
    }
    Ok(())
}

struct Pass<const N: usize> {
    value: [f64; N],
    error: [f64; N],
    panels: usize,
    exhausted: bool,
}

fn adaptive_pass<const N: usize>(
    f: &impl Fn(f64) -> Result<[f64; N]>,
    seeds: &[f64],
    tol: &[f64; N],
    max_subdivisions: usize,
) -> Result<Pass<N>> {
    let rule = GaussLegendre::get();
    let width = seeds[seeds.len() - 1] - seeds[0];
    let mut stack = Vec::with_capacity(64);
    for w in seeds.windows(2) {
        stack.push((w[0], w[1], rule.panel(f, w[0], w[1])?));
    }
    stack.reverse();

    let mut pass = Pass {
        value: [0.0; N],
        error: [0.0; N],
        panels: 0,
        exhausted: false,
    };
    let mut subdivisions = 0;

    while let Some((lo, hi, coarse)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let splittable = lo < mid && mid < hi;
        let (left, right) = if splittable {
            (rule.panel(f, lo, mid)?, rule.panel(f, mid, hi)?)
        } else {
            (coarse, [0.0; N])
        };

        let share = (hi - lo) / width;
        let mut fine = [0.0; N];
        let mut err = [0.0; N];
        let mut ok = true;
        for k in 0..N {
            fine[k] = left[k] + right[k];
            err[k] = (fine[k] - coarse[k]).abs();
            ok &= err[k] <= tol[k] * share;
        }

        if ok || !splittable || subdivisions >= max_subdivisions {
            if !ok && splittable {
                pass.exhausted = true;
            }
            for k in 0..N {
                pass.value[k] += fine[k];
                pass.error[k] += err[k];
            }
            pass.panels += 1;
        } else {
            subdivisions += 1;
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
    }
    Ok(pass)
}

/// Integrates a vector-valued integrand over `[a, b]` with a shared panel partition.
///
/// Every component is driven to its own tolerance; a panel is split while any
/// component exceeds its share.
pub fn integrate_many<const N: usize>(
    f: impl Fn(f64) -> Result<[f64; N]>,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<[QuadratureResult; N]> {
    cfg.validate()?;
    check_interval(a, b)?;
    let done = |value: [f64; N], error: [f64; N], panels: usize| {
        std::array::from_fn(|k| QuadratureResult {
            value: value[k],
            error_estimate: error[k],
            panels_used: panels,
            converged: error[k] <= cfg.target(value[k]),
        })
    };
    if a == b {
        return Ok(done([0.0; N], [0.0; N], 0));
    }

    let mut seeds = vec![a];
    seeds.extend(breakpoints.iter().copied().filter(|&p| p > a && p < b));
    seeds.push(b);

    let rule = GaussLegendre::get();
    let mut estimate = [0.0; N];
    for w in seeds.windows(2) {
        let p = rule.panel(&f, w[0], w[1])?;
        for k in 0..N {
            estimate[k] += p[k];
        }
    }

    // The relative part of the target depends on the answer; tighten and retry if
    // the first estimate overstated the magnitude.
    let mut result = None;
    for _ in 0..4 {
        let tol = estimate.map(|v| cfg.target(v));
        let pass = adaptive_pass(&f, &seeds, &tol, cfg.max_subdivisions)?;
        let res: [QuadratureResult; N] = done(pass.value, pass.error, pass.panels);
        if pass.exhausted {
            let worst = res
                .iter()
                .max_by(|x, y| x.error_estimate.total_cmp(&y.error_estimate))
                .copied()
                .unwrap_or(res[0]);
            return Err(Error::NotConverged {
                best_value: worst.value,
                error_estimate: worst.error_estimate,
            });
        }
        let all_converged = res.iter().all(|r| r.converged);
        result = Some(res);
        if all_converged {
            break;
        }
        estimate = pass.value.map(|v| v * 0.5);
    }
    Ok(result.expect("at least one pass"))
}

/// Integrates a scalar integrand over `[a, b]`, seeding panels at `breakpoints`.
pub fn integrate_fn(
    f: impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let [r] = integrate_many(|x| f(x).map(|v| [v]), a, b, breakpoints, cfg)?;
    Ok(r)
}

/// `∫_a^b f(x) dx` for `0 <= a <= b <= 1`.
pub fn integrate(
    f: &FunctionHandle,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    if let Some(knots) = f.linear_knots() {
        cfg.validate()?;
        check_interval(a, b)?;
        if a == b {
            return Ok(QuadratureResult {
                value: 0.0,
                error_estimate: 0.0,
                panels_used: 0,
                converged: true,
            });
        }
        let mut pts = vec![a];
        pts.extend(
            crate::function::normalize_breakpoints(knots)
                .into_iter()
                .filter(|&k| k > a && k < b),
        );
        pts.push(b);
        let value = trapezoid(&pts, |x| f.value_at(x))?;
        return Ok(QuadratureResult {
            value,
            error_estimate: 0.0,
            panels_used: pts.len() - 1,
            converged: true,
        });
    }
    let bps = f.merged_breakpoints(&[])?;
    integrate_fn(|x| f.value_at(x), a, b, &bps, cfg)
}

/// `∫_0^x f(t) dt`.
pub fn cumulative(f: &FunctionHandle, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    Ok(integrate(f, 0.0, x, cfg)?.value)
}

/// Roots of `f` found by a uniform sign-change scan, refined by bisection.
pub(crate) fn sign_change_points(f: &FunctionHandle, scan: usize) -> Result<Vec<f64>> {
    let eval = |x| f.value_at(x);
    scan_sign_changes(eval, 0.0, 1.0, scan)
        .into_iter()
        .map(|b| bisect(eval, b, 1e-15))
        .collect()
}

/// `∫_0^1 |f| dx`, with detected sign changes added as breakpoints.
pub fn l1_norm(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<f64> {
    let extra = sign_change_points(f, SIGN_SCAN_POINTS)?;
    let bps = f.merged_breakpoints(&crate::function::normalize_breakpoints(extra))?;
    Ok(integrate_fn(|x| f.value_at(x).map(f64::abs), 0.0, 1.0, &bps, cfg)?.value)
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn finite_difference<F: RealFunction>(f: &F, x: f64, step: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfDomain(x));
    }
    if step.is_nan() || step <= 0.0 || x - step < 0.0 || x + step > 1.0 {
        return Err(Error::OutOfDomain(step));
    }
    Ok((f.value_at(x + step)? - f.value_at(x - step)?) / (2.0 * step))
}
