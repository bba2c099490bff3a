//! Real functions living on a time scale.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::expr::Expr;
use crate::timescale::TimeScale;

/// Something that can be evaluated at points of a time scale.
///
/// `increment(from, to)` returns `f(to) - f(from)`. Implementors whose
/// values are themselves accumulated (antiderivatives) override it to avoid
/// cancellation between two large values.
pub trait ScaleFunction: Send + Sync {
    fn eval(&self, t: f64) -> Result<f64>;

    fn increment(&self, from: f64, to: f64) -> Result<f64> {
        Ok(self.eval(to)? - self.eval(from)?)
    }
}

struct Closure<F>(F);

impl<F> ScaleFunction for Closure<F>
where
    F: Fn(f64) -> Result<f64> + Send + Sync,
{
    fn eval(&self, t: f64) -> Result<f64> {
        (self.0)(t)
    }
}

impl ScaleFunction for Expr {
    fn eval(&self, t: f64) -> Result<f64> {
        Expr::eval(self, t)
    }
}

/// A function paired with the time scale it is defined on.
///
/// Cloning is cheap; the scale and the function are shared.
#[derive(Clone)]
pub struct FnOnScale {
    scale: Arc<TimeScale>,
    func: Arc<dyn ScaleFunction>,
    source: Option<Expr>,
}

impl FnOnScale {
    /// Wrap an infallible closure.
    pub fn new<F>(scale: TimeScale, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::fallible(scale, move |t| Ok(f(t)))
    }

    pub fn fallible<F>(scale: TimeScale, f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        FnOnScale {
            scale: Arc::new(scale),
            func: Arc::new(Closure(f)),
            source: None,
        }
    }

    pub fn from_expr(scale: TimeScale, expr: Expr) -> Self {
        FnOnScale {
            scale: Arc::new(scale),
            func: Arc::new(expr.clone()),
            source: Some(expr),
        }
    }

    pub fn from_function(scale: Arc<TimeScale>, func: Arc<dyn ScaleFunction>) -> Self {
        FnOnScale {
            scale,
            func,
            source: None,
        }
    }

    /// The same function on another scale.
    pub fn on(&self, scale: TimeScale) -> Self {
        FnOnScale {
            scale: Arc::new(scale),
            func: self.func.clone(),
            source: self.source.clone(),
        }
    }

    pub fn scale(&self) -> &TimeScale {
        &self.scale
    }

    pub(crate) fn scale_arc(&self) -> Arc<TimeScale> {
        self.scale.clone()
    }

    pub fn source(&self) -> Option<&Expr> {
        self.source.as_ref()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.func.eval(t)
    }

    pub fn increment(&self, from: f64, to: f64) -> Result<f64> {
        if from == to {
            return Ok(0.0);
        }
        self.func.increment(from, to)
    }
}

impl fmt::Debug for FnOnScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnOnScale")
            .field("scale", &self.scale)
            .field("source", &self.source.as_ref().map(|e| e.to_string()))
            .finish()
    }
}
