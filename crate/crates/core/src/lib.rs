//! Orthogonal splitting of square-integrable functions on `[0, 1]` into a constant
//! part and a mean-zero part.
//!
//! For `f ∈ L²(0, 1)` the mean projection `P f = ∫_0^1 f dx` and the fluctuation
//! projection `Q f = f - P f` are complementary orthogonal projections. `Q f` is the
//! derivative of the zero-trace potential `h(x) = ∫_0^x f - x ∫_0^1 f`.
//!
//! ```
//! use orthodecomp::{decompose, from_expression, QuadratureConfig};
//!
//! let f = from_expression("x^2", &Default::default()).unwrap();
//! let d = decompose(&f, &QuadratureConfig::default()).unwrap();
//! assert!((d.mean - 1.0 / 3.0).abs() < 1e-12);
//! assert!(d.residuals.orthogonality < 1e-12);
//! ```

pub mod cli;
pub mod decomposition;
mod error;
pub mod expr;
pub mod function;
pub mod hilbert;
pub mod quadrature;
pub mod roots;

pub use decomposition::{
    decompose, kernel_membership, potential, project_fluctuation, project_mean, verify,
    zero_crossings, Decomposition, KernelMembership, Potential, VerificationReport, ZeroCrossing,
    ZeroCrossingReport,
};
pub use error::{Error, Result};
pub use expr::Expr;
pub use function::{
    from_csv, from_csv_path, from_expression, FunctionHandle, RealFunction, SampledGrid,
};
pub use hilbert::{angle, collinearity_angle, inner_product, l2_norm, AngleReport};
pub use quadrature::{
    cumulative, finite_difference, integrate, l1_norm, QuadratureConfig, QuadratureResult,
};
