//! Inner product, norm and angle in L²(0, 1).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{normalize_breakpoints, FunctionHandle, RealFunction};
use crate::quadrature::{integrate_many, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleReport {
    pub inner: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    /// Normalized inner product, clamped into `[-1, 1]`.
    pub cosine: f64,
    pub theta_radians: f64,
    /// Set when clamping moved the cosine by more than `1e-12`.
    pub clamp_applied: bool,
}

impl AngleReport {
    pub fn theta_degrees(&self) -> f64 {
        self.theta_radians.to_degrees()
    }
}

fn joint_breakpoints(f: &FunctionHandle, g: &FunctionHandle) -> Result<Vec<f64>> {
    let mut bps = f.merged_breakpoints(&[])?;
    bps.extend(g.merged_breakpoints(&[])?);
    Ok(normalize_breakpoints(bps))
}

/// `⟨f, g⟩ = ∫_0^1 f g dx`.
pub fn inner_product(
    f: &FunctionHandle,
    g: &FunctionHandle,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let bps = joint_breakpoints(f, g)?;
    let [r] = integrate_many(
        |x| Ok([f.value_at(x)? * g.value_at(x)?]),
        0.0,
        1.0,
        &bps,
        cfg,
    )?;
    Ok(r.value)
}

fn sqrt_norm(squared: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if squared < -cfg.abs_tol {
        return Err(Error::NegativeNorm(squared));
    }
    Ok(squared.max(0.0).sqrt())
}

/// `‖f‖ = ⟨f, f⟩^{1/2}`; tiny negative quadrature noise is clamped to zero.
pub fn l2_norm(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<f64> {
    let squared = inner_product(f, f, cfg)?;
    sqrt_norm(squared, cfg)
}

/// Angle between two nonzero functions.
///
/// `⟨f,g⟩`, `‖f‖²` and `‖g‖²` are integrated together on one panel partition, so
/// collinear inputs produce a cosine of ±1 up to rounding.
pub fn angle(
    f: &FunctionHandle,
    g: &FunctionHandle,
    cfg: &QuadratureConfig,
) -> Result<AngleReport> {
    let bps = joint_breakpoints(f, g)?;
    let [fg, ff, gg] = integrate_many(
        |x| {
            let (a, b) = (f.value_at(x)?, g.value_at(x)?);
            Ok([a * b, a * a, b * b])
        },
        0.0,
        1.0,
        &bps,
        cfg,
    )?;
    let norm_f = sqrt_norm(ff.value, cfg)?;
    let norm_g = sqrt_norm(gg.value, cfg)?;
    let zero_tol = cfg.abs_tol.max(1e-12);
    for n in [norm_f, norm_g] {
        if n <= zero_tol {
            return Err(Error::ZeroFunction(n));
        }
    }

    let raw = fg.value / (norm_f * norm_g);
    let cosine = raw.clamp(-1.0, 1.0);
    Ok(AngleReport {
        inner: fg.value,
        norm_f,
        norm_g,
        cosine,
        theta_radians: cosine.acos(),
        clamp_applied: (raw - cosine).abs() > 1e-12,
    })
}

/// Analytic angle between `f` and `lambda * f`: `0` for positive, `π` for negative scalars.
pub fn collinearity_angle(lambda: f64) -> Result<f64> {
    if lambda == 0.0 || lambda.is_nan() {
        return Err(Error::ZeroScalar);
    }
    Ok(if lambda > 0.0 { 0.0 } else { PI })
}
