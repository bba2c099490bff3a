//! Classical nabla/delta integrals and the fractional integrals built on
//! them.
//!
//! Classical integrals add the jump contributions of scattered points
//! exactly and integrate interval pieces by adaptive quadrature. The
//! indefinite fractional integral of order `β` is the `(1-β)` fractional
//! derivative of a classical antiderivative.

mod quadrature;

pub use quadrature::{integrate, QuadratureConfig, Rule};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::deriv::{delta_frac_impl, nabla_frac_impl, weights_at};
use crate::error::{Error, Result};
use crate::function::{FnOnScale, ScaleFunction};
use crate::order::{IntegralOrder, LimitConfig};
use crate::timescale::{TimeScale, ACCUMULATION_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralKind {
    Nabla,
    Delta,
}

fn endpoint(ts: &TimeScale, t: f64) -> Result<f64> {
    ts.snap(t).ok_or(Error::EndpointNotInScale { t })
}

fn classical(
    f: &FnOnScale,
    a: f64,
    b: f64,
    kind: IntegralKind,
    qc: &QuadratureConfig,
) -> Result<f64> {
    let ts = f.scale();
    let (a, b) = (endpoint(ts, a)?, endpoint(ts, b)?);
    classical_snapped(f, a, b, kind, qc)
}

fn classical_snapped(
    f: &FnOnScale,
    a: f64,
    b: f64,
    kind: IntegralKind,
    qc: &QuadratureConfig,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return classical_snapped(f, b, a, kind, qc).map(|v| -v);
    }
    let ts = f.scale();
    let mut total = 0.0;
    for (x, y) in ts.dense_pieces(a, b) {
        total += integrate(|s| f.eval(s), x, y, qc)?;
    }
    for s in ts.marked_points(a, b, Some(ACCUMULATION_FLOOR)) {
        match kind {
            IntegralKind::Nabla if s > a => {
                let rho = ts.rho_of(s);
                if rho < s {
                    total += f.eval(s)? * (s - rho);
                }
            }
            IntegralKind::Delta if s < b => {
                let sigma = ts.sigma_of(s);
                if sigma > s {
                    total += f.eval(s)? * (sigma - s);
                }
            }
            _ => {}
        }
    }
    Ok(total)
}

/// `∫_a^b f(t) ∇t`.
pub fn nabla_integral(f: &FnOnScale, a: f64, b: f64, qc: &QuadratureConfig) -> Result<f64> {
    classical(f, a, b, IntegralKind::Nabla, qc)
}

/// `∫_a^b f(t) Δt`.
pub fn delta_integral(f: &FnOnScale, a: f64, b: f64, qc: &QuadratureConfig) -> Result<f64> {
    classical(f, a, b, IntegralKind::Delta, qc)
}

/// `F(t) = ∫_{t0}^t f`, memoized per queried point.
///
/// Differences `F(s) - F(t)` are computed as `∫_t^s f` directly, so
/// nearby points do not lose accuracy to cancellation.
pub struct Antiderivative {
    base: FnOnScale,
    anchor: f64,
    kind: IntegralKind,
    qc: QuadratureConfig,
    memo: Mutex<HashMap<u64, f64>>,
}

impl Antiderivative {
    pub fn new(f: &FnOnScale, t0: f64, kind: IntegralKind, qc: QuadratureConfig) -> Result<Self> {
        qc.validate()?;
        Ok(Antiderivative {
            anchor: endpoint(f.scale(), t0)?,
            base: f.clone(),
            kind,
            qc,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn kind(&self) -> IntegralKind {
        self.kind
    }

    pub fn base(&self) -> &FnOnScale {
        &self.base
    }

    /// `F` as a function on the same scale.
    pub fn into_fn(self) -> FnOnScale {
        let scale = self.base.scale_arc();
        FnOnScale::from_function(scale, Arc::new(self))
    }
}

impl ScaleFunction for Antiderivative {
    fn eval(&self, t: f64) -> Result<f64> {
        let t = endpoint(self.base.scale(), t)?;
        if let Some(v) = self.memo.lock().expect("memo lock").get(&t.to_bits()) {
            return Ok(*v);
        }
        let v = classical_snapped(&self.base, self.anchor, t, self.kind, &self.qc)?;
        self.memo.lock().expect("memo lock").insert(t.to_bits(), v);
        Ok(v)
    }

    fn increment(&self, from: f64, to: f64) -> Result<f64> {
        let ts = self.base.scale();
        classical_snapped(
            &self.base,
            endpoint(ts, from)?,
            endpoint(ts, to)?,
            self.kind,
            &self.qc,
        )
    }
}

pub fn nabla_antiderivative(
    f: &FnOnScale,
    t0: f64,
    qc: QuadratureConfig,
) -> Result<Antiderivative> {
    Antiderivative::new(f, t0, IntegralKind::Nabla, qc)
}

pub fn delta_antiderivative(
    f: &FnOnScale,
    t0: f64,
    qc: QuadratureConfig,
) -> Result<Antiderivative> {
    Antiderivative::new(f, t0, IntegralKind::Delta, qc)
}

/// Value of an indefinite fractional integral at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndefiniteValue {
    pub t: f64,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Indefinite fractional integral `G(t)` of order `beta` (`0 < beta < 1`).
///
/// At a scattered extremum outside the derivative's domain (the minimum for
/// nabla, the maximum for delta) the value continues the scattered formula
/// `f(t)·g^β`, using the graininess on the side that exists.
fn indefinite_frac(
    big_f: &FnOnScale,
    f: &FnOnScale,
    t: f64,
    kind: IntegralKind,
    beta: IntegralOrder,
    cfg: &LimitConfig,
) -> Result<IndefiniteValue> {
    let ts = f.scale();
    let order = beta.derivative_order().expect("beta < 1");
    let b = beta.value();
    let mk = ts.membership_kind(t)?;
    let outside = match kind {
        IntegralKind::Nabla => !mk.in_t_kappa_lower,
        IntegralKind::Delta => !mk.in_t_kappa_upper,
    };
    if outside {
        // Scattered minimum (nabla) or maximum (delta).
        let gap = match kind {
            IntegralKind::Nabla => ts.sigma_of(t) - t,
            IntegralKind::Delta => t - ts.rho_of(t),
        };
        return Ok(IndefiniteValue {
            t,
            value: f.eval(t)? * gap.powf(b),
            note: None,
        });
    }
    let d = match kind {
        IntegralKind::Nabla => nabla_frac_impl(big_f, t, order, cfg, true)?,
        IntegralKind::Delta => delta_frac_impl(big_f, t, order, cfg, true)?,
    };
    Ok(IndefiniteValue {
        t,
        value: d.value,
        note: d.note,
    })
}

/// Result of a Cauchy fractional integral with any diagnostics collected
/// while evaluating the endpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FracIntegral {
    pub value: f64,
    pub notes: Vec<String>,
}

#[allow(clippy::too_many_arguments)]
fn cauchy(
    f: &FnOnScale,
    a: f64,
    b: f64,
    beta: IntegralOrder,
    kind: IntegralKind,
    t0: f64,
    cfg: &LimitConfig,
    qc: &QuadratureConfig,
) -> Result<FracIntegral> {
    cfg.validate()?;
    qc.validate()?;
    let ts = f.scale();
    let (a, b) = (endpoint(ts, a)?, endpoint(ts, b)?);
    let t0 = endpoint(ts, t0)?;
    if a == b {
        return Ok(FracIntegral {
            value: 0.0,
            notes: vec![],
        });
    }
    match beta {
        IntegralOrder::Zero => Ok(FracIntegral {
            value: f.eval(b)? - f.eval(a)?,
            notes: vec![],
        }),
        IntegralOrder::Frac(o) if o.is_one() => {
            let big_f = Antiderivative::new(f, t0, kind, *qc)?;
            Ok(FracIntegral {
                value: big_f.eval(b)? - big_f.eval(a)?,
                notes: vec![],
            })
        }
        IntegralOrder::Frac(_) => {
            let big_f = Antiderivative::new(f, t0, kind, *qc)?.into_fn();
            let gb = indefinite_frac(&big_f, f, b, kind, beta, cfg)?;
            let ga = indefinite_frac(&big_f, f, a, kind, beta, cfg)?;
            let value = gb.value - ga.value;
            let notes = [ga, gb]
                .into_iter()
                .filter_map(|g| g.note.map(|n| format!("at t={}: {n}", g.t)))
                .collect();
            Ok(FracIntegral { value, notes })
        }
    }
}

/// Cauchy nabla fractional integral `∫_a^b f(t) ∇^β t`, anchored at `a`.
pub fn nabla_frac_integral(
    f: &FnOnScale,
    a: f64,
    b: f64,
    beta: IntegralOrder,
    cfg: &LimitConfig,
    qc: &QuadratureConfig,
) -> Result<f64> {
    Ok(cauchy(f, a, b, beta, IntegralKind::Nabla, a, cfg, qc)?.value)
}

/// Cauchy delta fractional integral `∫_a^b f(t) Δ^β t`, anchored at `a`.
pub fn delta_frac_integral(
    f: &FnOnScale,
    a: f64,
    b: f64,
    beta: IntegralOrder,
    cfg: &LimitConfig,
    qc: &QuadratureConfig,
) -> Result<f64> {
    Ok(cauchy(f, a, b, beta, IntegralKind::Delta, a, cfg, qc)?.value)
}

/// Nabla or delta Cauchy fractional integral with an explicit anchor `t0`
/// for the underlying antiderivative, and diagnostics.
#[allow(clippy::too_many_arguments)]
pub fn frac_integral_anchored(
    f: &FnOnScale,
    a: f64,
    b: f64,
    beta: IntegralOrder,
    kind: IntegralKind,
    t0: f64,
    cfg: &LimitConfig,
    qc: &QuadratureConfig,
) -> Result<FracIntegral> {
    cauchy(f, a, b, beta, kind, t0, cfg, qc)
}

/// Cauchy symmetric fractional integral
/// `γ1 G_Δ |_a^b + γ2 G_∇ |_a^b`, with weights at order `beta`.
///
/// Both endpoints must lie in `T_κ^κ`. The underlying antiderivatives are
/// anchored at `min T`, so that values for different `(a, b)` come from the
/// same indefinite integrals.
pub fn symmetric_frac_integral(
    f: &FnOnScale,
    a: f64,
    b: f64,
    beta: IntegralOrder,
    cfg: &LimitConfig,
    qc: &QuadratureConfig,
) -> Result<FracIntegral> {
    cfg.validate()?;
    qc.validate()?;
    let ts = f.scale();
    let (a, b) = (endpoint(ts, a)?, endpoint(ts, b)?);
    for t in [a, b] {
        if !ts.membership_kind(t)?.in_t_kappa_both {
            return Err(Error::EndpointOutsideKappaSet { t });
        }
    }
    let IntegralOrder::Frac(order) = beta else {
        return Err(Error::InvalidOrder(
            "the symmetric integral needs an order in (0, 1]".into(),
        ));
    };
    if a == b {
        return Ok(FracIntegral {
            value: 0.0,
            notes: vec![],
        });
    }
    let anchor = ts.min();
    let delta_f = Antiderivative::new(f, anchor, IntegralKind::Delta, *qc)?.into_fn();
    let nabla_f = Antiderivative::new(f, anchor, IntegralKind::Nabla, *qc)?.into_fn();
    let mut notes = Vec::new();
    let mut phi = |t: f64| -> Result<f64> {
        let w = weights_at(ts, t, order.value());
        let (gd, gn) = if order.is_one() {
            (delta_f.eval(t)?, nabla_f.eval(t)?)
        } else {
            let gd = indefinite_frac(&delta_f, f, t, IntegralKind::Delta, beta, cfg)?;
            let gn = indefinite_frac(&nabla_f, f, t, IntegralKind::Nabla, beta, cfg)?;
            for g in [&gd, &gn] {
                if let Some(n) = &g.note {
                    notes.push(format!("at t={t}: {n}"));
                }
            }
            (gd.value, gn.value)
        };
        Ok(w.gamma1 * gd + w.gamma2 * gn)
    };
    let value = phi(b)? - phi(a)?;
    Ok(FracIntegral { value, notes })
}
