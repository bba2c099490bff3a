//! Fractional nabla, delta and symmetric calculus on time scales.
//!
//! A [`TimeScale`] is a closed subset of the real line built from intervals,
//! point sets, uniform grids and geometric grids. Functions on it
//! ([`FnOnScale`]) can be differentiated to a rational order `α ∈ (0, 1]`
//! and integrated to an order `β ∈ [0, 1]`.
//!
//! ```
//! use tscale_frac::{nabla_frac, parse_expr, parse_scale, FnOnScale, LimitConfig};
//!
//! let f = FnOnScale::from_expr(parse_scale("grid(0, 10, 1)")?, parse_expr("t^2")?);
//! let d = nabla_frac(&f, 3.0, "1/2".parse()?, &LimitConfig::default())?;
//! assert_eq!(d.value, 5.0);
//! # Ok::<(), tscale_frac::Error>(())
//! ```

pub mod check;
pub mod cli;
pub mod deriv;
pub mod error;
pub mod expr;
pub mod function;
pub mod integral;
pub mod order;
pub mod timescale;

pub use deriv::{
    delta_frac, frac_derivative, nabla_frac, order_lowering_check, symmetric_frac,
    symmetric_via_sides, symmetric_weights, DerivKind, DerivResult, Path, SymmetricWeights,
};
pub use error::{Error, Result, SyntaxError};
pub use expr::{parse_expr, parse_scale, Expr, ScaleExpr};
pub use function::{FnOnScale, ScaleFunction};
pub use integral::{
    delta_antiderivative, delta_frac_integral, delta_integral, frac_integral_anchored,
    nabla_antiderivative, nabla_frac_integral, nabla_integral, symmetric_frac_integral,
    Antiderivative, FracIntegral, IntegralKind, QuadratureConfig,
};
pub use order::{
    classify_order, estimate_limit, estimate_limit_at_steps, signed_pow, Acceleration,
    IntegralOrder, LimitConfig, LimitResult, Order, OrderClass,
};
pub use timescale::{ApproachSide, Component, Density, PointClass, ScaleMembershipKind, TimeScale};
