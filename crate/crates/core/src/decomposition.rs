//! Mean/fluctuation splitting `f = P f + Q f` with `P f = ∫_0^1 f` (a constant) and
//! `Q f = f - P f` (mean zero), the zero-trace potential `h` with `h' = Q f`, and
//! numerical checks of the identities the splitting satisfies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{FunctionHandle, RealFunction};
use crate::hilbert::inner_product;
use crate::quadrature::{cumulative, finite_difference, integrate, QuadratureConfig};
use crate::roots::{bisect, scan_sign_changes};

/// Interior probe count used by [`decompose`].
pub const DEFAULT_PROBES: usize = 50;
/// Step of the central difference applied to the potential.
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Bracket width at which zero refinement stops.
pub const ZERO_WIDTH: f64 = 1e-12;

/// Kernel membership and vanishing-mean decisions use `KERNEL_FACTOR * abs_tol`.
pub const KERNEL_FACTOR: f64 = 10.0;

/// `h(x) = ∫_0^x f(t) dt - x ∫_0^1 f`, vanishing at both endpoints.
#[derive(Debug, Clone)]
pub struct Potential {
    f: FunctionHandle,
    mean: f64,
    cfg: QuadratureConfig,
}

impl Potential {
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

impl RealFunction for Potential {
    fn value_at(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        Ok(cumulative(&self.f, x, &self.cfg)? - x * self.mean)
    }
}

/// Residuals of the identities satisfied by the splitting. All entries are `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationReport {
    /// `|⟨P f, Q f⟩|`
    pub orthogonality: f64,
    /// `|∫ Q f|`
    pub mean_of_q: f64,
    /// `|P(P f) - P f|`
    pub idempotence_p: f64,
    /// sampled sup of `|Q(Q f) - Q f|`
    pub idempotence_q: f64,
    /// `|P(Q f)|`
    pub cross_pq: f64,
    /// sampled sup of `|Q(P f)|`
    pub cross_qp: f64,
    /// `|‖f‖² - (‖P f‖² + ‖Q f‖²)|`
    pub pythagoras: f64,
    /// `|∫ P f - ∫ f|`
    pub corollary8: f64,
    /// `|h(1)|`
    pub potential_boundary: f64,
    /// max over probes of `|D_h h(x) - Q f(x)|` with a central difference `D_h`
    pub derivative: f64,
    /// When `|P f|` is within the kernel threshold: whether `|∫ Q f|` is as well.
    /// `None` when `P f` is not negligible.
    pub zero_mean_check: Option<bool>,
}

impl VerificationReport {
    /// Larger of the two cross terms.
    pub fn cross(&self) -> f64 {
        self.cross_pq.max(self.cross_qp)
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub mean: f64,
    pub fluctuation: FunctionHandle,
    pub potential: Potential,
    pub residuals: VerificationReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelMembership {
    pub in_ker_p: bool,
    pub in_ker_q: bool,
    /// `(|P f|, sup |f - P f|)`
    pub residuals: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroCrossing {
    pub x0: f64,
    /// `∫_0^{x0} Q f`
    pub left_integral: f64,
    /// `∫_{x0}^1 Q f`
    pub right_integral: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCrossingReport {
    pub zeros: Vec<ZeroCrossing>,
}

impl ZeroCrossingReport {
    pub fn points(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.x0).collect()
    }
}

/// `P f = ∫_0^1 f dx`.
pub fn project_mean(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(integrate(f, 0.0, 1.0, cfg)?.value)
}

fn fluctuation_of(f: &FunctionHandle, mean: f64) -> FunctionHandle {
    let label = format!("Q[{}]", f.label());
    f.shifted(-mean).with_label(label)
}

/// `Q f = f - P f`, built as a shifted handle so `Q f(x) + P f == f(x)` pointwise.
pub fn project_fluctuation(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<FunctionHandle> {
    Ok(fluctuation_of(f, project_mean(f, cfg)?))
}

pub fn potential(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<Potential> {
    Ok(Potential {
        f: f.clone(),
        mean: project_mean(f, cfg)?,
        cfg: *cfg,
    })
}

fn interior_probes(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| i as f64 / (n + 1) as f64)
}

fn sup_over<F: Fn(f64) -> Result<f64>>(points: impl Iterator<Item = f64>, f: F) -> Result<f64> {
    points
        .map(|x| f(x).map(f64::abs))
        .try_fold(0.0, |acc: f64, v| Ok(acc.max(v?)))
}

fn verify_with_mean(
    f: &FunctionHandle,
    mean: f64,
    cfg: &QuadratureConfig,
    probes: usize,
) -> Result<(FunctionHandle, Potential, VerificationReport)> {
    if probes < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 probes, got {probes}"
        )));
    }
    let threshold = KERNEL_FACTOR * cfg.abs_tol;
    let q = fluctuation_of(f, mean);
    let p = FunctionHandle::constant(mean);

    let mean_of_q = integrate(&q, 0.0, 1.0, cfg)?.value.abs();
    let p_of_p = integrate(&p, 0.0, 1.0, cfg)?.value;
    let p_of_q = integrate(&q, 0.0, 1.0, cfg)?.value;
    let q_of_q = fluctuation_of(&q, p_of_q);
    let q_of_p = fluctuation_of(&p, p_of_p);

    let idempotence_q = sup_over(interior_probes(probes), |x| {
        Ok(q_of_q.value_at(x)? - q.value_at(x)?)
    })?;
    let cross_qp = sup_over(interior_probes(probes), |x| q_of_p.value_at(x))?;

    let norm_f2 = inner_product(f, f, cfg)?;
    let norm_p2 = inner_product(&p, &p, cfg)?;
    let norm_q2 = inner_product(&q, &q, cfg)?;

    let h = Potential {
        f: f.clone(),
        mean,
        cfg: *cfg,
    };
    let derivative = sup_over(interior_probes(probes), |x| {
        Ok(finite_difference(&h, x, DERIVATIVE_STEP)? - q.value_at(x)?)
    })?;

    let report = VerificationReport {
        orthogonality: inner_product(&p, &q, cfg)?.abs(),
        mean_of_q,
        idempotence_p: (p_of_p - mean).abs(),
        idempotence_q,
        cross_pq: p_of_q.abs(),
        cross_qp,
        pythagoras: (norm_f2 - (norm_p2 + norm_q2)).abs(),
        corollary8: (p_of_p - project_mean(f, cfg)?).abs(),
        potential_boundary: h.value_at(1.0)?.abs(),
        derivative,
        zero_mean_check: (mean.abs() <= threshold).then_some(mean_of_q <= threshold),
    };
    Ok((q, h, report))
}

/// Computes every residual of [`VerificationReport`] using `probes` interior points
/// for the sampled (sup-norm and derivative) residuals.
pub fn verify(
    f: &FunctionHandle,
    cfg: &QuadratureConfig,
    probes: usize,
) -> Result<VerificationReport> {
    let mean = project_mean(f, cfg)?;
    Ok(verify_with_mean(f, mean, cfg, probes)?.2)
}

/// Splits `f` into its mean and fluctuation, with the potential and residuals.
pub fn decompose(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<Decomposition> {
    let mean = project_mean(f, cfg)?;
    let (fluctuation, potential, residuals) = verify_with_mean(f, mean, cfg, DEFAULT_PROBES)?;
    Ok(Decomposition {
        mean,
        fluctuation,
        potential,
        residuals,
    })
}

/// Classifies `f` against the kernels of `P` (mean zero) and `Q` (constants).
pub fn kernel_membership(f: &FunctionHandle, cfg: &QuadratureConfig) -> Result<KernelMembership> {
    const GRID: usize = 256;
    let mean = project_mean(f, cfg)?;
    let spread = sup_over((0..GRID).map(|i| (i as f64 + 0.5) / GRID as f64), |x| {
        Ok(f.value_at(x)? - mean)
    })?;
    let threshold = KERNEL_FACTOR * cfg.abs_tol;
    Ok(KernelMembership {
        in_ker_p: mean.abs() <= threshold,
        in_ker_q: spread <= threshold,
        residuals: (mean.abs(), spread),
    })
}

/// Locates interior zeros of `Q f` by a uniform scan of `scan_points + 1` values and
/// bisection, and reports the integrals of `Q f` on either side of each zero.
pub fn zero_crossings(
    f: &FunctionHandle,
    cfg: &QuadratureConfig,
    scan_points: usize,
) -> Result<ZeroCrossingReport> {
    if scan_points < 16 {
        return Err(Error::InvalidConfig(format!(
            "scan needs at least 16 points, got {scan_points}"
        )));
    }
    let q = project_fluctuation(f, cfg)?;
    let eval = |x| q.value_at(x);
    let brackets = scan_sign_changes(eval, 0.0, 1.0, scan_points);
    if brackets.is_empty() {
        return Err(Error::NoSignChange);
    }

    let mut zeros = Vec::with_capacity(brackets.len());
    for b in brackets {
        let x0 = bisect(eval, b, ZERO_WIDTH)?;
        if !(x0 > 0.0 && x0 < 1.0) {
            continue;
        }
        let left = integrate(&q, 0.0, x0, cfg)?.value;
        let right = integrate(&q, x0, 1.0, cfg)?.value;
        zeros.push(ZeroCrossing {
            x0,
            left_integral: left,
            right_integral: right,
            sum: left + right,
        });
    }
    if zeros.is_empty() {
        return Err(Error::NoSignChange);
    }
    Ok(ZeroCrossingReport { zeros })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::from_expression;
    use std::collections::BTreeMap;

    fn expr(src: &str) -> FunctionHandle {
        from_expression(src, &BTreeMap::new()).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn means_of_worked_examples() {
        assert!((project_mean(&expr("x"), &cfg()).unwrap() - 0.5).abs() < 1e-14);
        assert!((project_mean(&expr("x^2"), &cfg()).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let g2 = project_mean(&expr("exp(2*x)"), &cfg()).unwrap();
        assert!((g2 - (2f64.exp() - 1.0) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn fluctuations_of_worked_examples() {
        let q = project_fluctuation(&expr("x"), &cfg()).unwrap();
        for x in [0.0, 0.25, 0.8, 1.0] {
            assert!((q.value_at(x).unwrap() - (x - 0.5)).abs() < 1e-15);
        }
        let q = project_fluctuation(&expr("abs(x-1/2)"), &cfg()).unwrap();
        assert_eq!(q.breakpoints(), &[0.5]);
        assert!((q.value_at(0.1).unwrap() - 0.15).abs() < 1e-14);
        let q = project_fluctuation(&expr("7"), &cfg()).unwrap();
        assert!(q.value_at(0.3).unwrap().abs() < 1e-14);
    }

    #[test]
    fn potential_of_identity() {
        let h = potential(&expr("x"), &cfg()).unwrap();
        assert_eq!(h.value_at(0.0).unwrap(), 0.0);
        // x^2/2 - x/2
        assert!((h.value_at(0.5).unwrap() + 0.125).abs() < 1e-15);
        assert!(h.value_at(1.0).unwrap().abs() < 1e-10);
        let x = 0.3;
        assert!((h.value_at(x).unwrap() - (x * x / 2.0 - x / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn decompose_reconstructs_exactly() {
        let f = expr("cos(x)");
        let d = decompose(&f, &cfg()).unwrap();
        assert!((d.mean - 1f64.sin()).abs() < 1e-13);
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert_eq!(
                d.fluctuation.value_at(x).unwrap() + d.mean,
                f.value_at(x).unwrap()
            );
        }
        let d = decompose(&expr("(x-1/2)^(2/3)"), &cfg()).unwrap();
        assert!((d.mean - 3.0 / (5.0 * 4f64.cbrt())).abs() < 1e-10);
    }

    #[test]
    fn verification_of_exponential() {
        let r = verify(&expr("exp(x)"), &cfg(), 50).unwrap();
        for v in [
            r.orthogonality,
            r.mean_of_q,
            r.idempotence_p,
            r.idempotence_q,
            r.cross(),
            r.pythagoras,
            r.corollary8,
            r.potential_boundary,
        ] {
            assert!(v <= 1e-8, "{r:?}");
        }
        assert!(r.derivative <= 1e-5);
        assert_eq!(r.zero_mean_check, None);
    }

    #[test]
    fn verification_of_kernel_members() {
        let r = verify(&expr("5"), &cfg(), 10).unwrap();
        assert!(r.idempotence_q < 1e-12 && r.mean_of_q < 1e-12 && r.derivative < 1e-8);
        let r = verify(&expr("x - 1/2"), &cfg(), 10).unwrap();
        assert_eq!(r.zero_mean_check, Some(true));
        assert!(matches!(
            verify(&expr("x"), &cfg(), 1),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn kernels() {
        let k = kernel_membership(&expr("sin(2*pi*x)"), &cfg()).unwrap();
        assert!(k.in_ker_p && !k.in_ker_q);
        let k = kernel_membership(&expr("3"), &cfg()).unwrap();
        assert!(k.in_ker_q && !k.in_ker_p);
        let k = kernel_membership(&expr("x"), &cfg()).unwrap();
        assert!(!k.in_ker_p && !k.in_ker_q);
    }

    #[test]
    fn zero_of_exponential_fluctuation() {
        let report = zero_crossings(&expr("exp(x)"), &cfg(), 1024).unwrap();
        assert_eq!(report.zeros.len(), 1);
        let z = report.zeros[0];
        let expected = (std::f64::consts::E - 1.0).ln();
        assert!((z.x0 - expected).abs() < 1e-8);
        assert!((z.left_integral + z.right_integral).abs() < 1e-9);
        assert!((z.left_integral + 0.211_866_832_515_566_5).abs() < 1e-9);
    }

    #[test]
    fn zero_crossing_edge_cases() {
        let r = zero_crossings(&expr("x"), &cfg(), 1024).unwrap();
        assert_eq!(r.points().len(), 1);
        assert!((r.points()[0] - 0.5).abs() < 1e-12);
        assert!(matches!(
            zero_crossings(&expr("4"), &cfg(), 64),
            Err(Error::NoSignChange)
        ));
        assert!(matches!(
            zero_crossings(&expr("x"), &cfg(), 8),
            Err(Error::InvalidConfig(_))
        ));
    }
}
