//! Nabla, delta and symmetric fractional derivatives at a point.
//!
//! At scattered points the derivative is an exact difference quotient. At
//! dense points it is a limit estimated from quotients sampled at scale
//! points approaching `t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::FnOnScale;
use crate::order::{
    estimate_limit_at_steps, signed_pow, LimitConfig, LimitResult, Order, OrderClass,
};
use crate::timescale::{ApproachSide, TimeScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivKind {
    Nabla,
    Delta,
    Symmetric,
}

impl std::str::FromStr for DerivKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nabla" => Ok(DerivKind::Nabla),
            "delta" => Ok(DerivKind::Delta),
            "symmetric" => Ok(DerivKind::Symmetric),
            other => Err(Error::Validation(format!(
                "unknown kind {other:?}; expected nabla, delta or symmetric"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    ExactScattered,
    DenseLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivResult {
    pub value: f64,
    pub path: Path,
    pub side: ApproachSide,
    pub err_est: f64,
    pub order: Order,
    pub kind: DerivKind,
    /// Set when the evaluation had to deviate from the usual rule, e.g. a
    /// one-sided limit taken from the other side at the edge of the scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DerivResult {
    fn exact(value: f64, side: ApproachSide, order: Order, kind: DerivKind) -> Self {
        DerivResult {
            value,
            path: Path::ExactScattered,
            side,
            err_est: 0.0,
            order,
            kind,
            note: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricWeights {
    pub gamma1: f64,
    pub gamma2: f64,
}

fn member(ts: &TimeScale, t: f64) -> Result<f64> {
    ts.snap(t).ok_or(Error::PointNotInScale { t })
}

/// Collect a fallible quotient sequence into the limit estimator, stopping
/// at the first evaluation error.
/// Limit of `quotient(s)` over `points`, `step(s)` being the distance that
/// shrinks to zero.
fn limit_of<Q>(
    points: &[f64],
    step: impl Fn(f64) -> f64,
    order: Order,
    cfg: &LimitConfig,
    side: ApproachSide,
    mut quotient: Q,
) -> Result<LimitResult>
where
    Q: FnMut(f64) -> Result<f64>,
{
    let mut failure = None;
    let seq = points.iter().map_while(|&s| match quotient(s) {
        Ok(v) => Some((step(s), v)),
        Err(e) => {
            failure = Some(e);
            None
        }
    });
    let res = estimate_limit_at_steps(seq, cfg, side, order)?;
    if let Some(e) = failure {
        if !res.converged {
            return Err(e);
        }
    }
    Ok(res)
}

fn not_converged(t: f64, r: &LimitResult, reason: &str) -> Error {
    Error::LimitDidNotConverge {
        t,
        value: r.value,
        err_est: r.err_est,
        reason: reason.to_string(),
    }
}

/// Combine the one-sided limits of a dense-point derivative.
fn dense_limit<Q>(
    f: &FnOnScale,
    t: f64,
    sides: &[ApproachSide],
    order: Order,
    cfg: &LimitConfig,
    mut quotient: Q,
) -> Result<(f64, f64, ApproachSide)>
where
    Q: FnMut(f64) -> Result<f64>,
{
    let ts = f.scale();
    let mut found: Vec<LimitResult> = Vec::with_capacity(2);
    for &side in sides {
        let pts = ts.approach_points(t, side, cfg.max_samples, cfg.h0, cfg.ratio)?;
        let r = limit_of(&pts, |s| (s - t).abs(), order, cfg, side, &mut quotient)?;
        if !r.converged {
            return Err(not_converged(
                t,
                &r,
                &format!("{side:?} quotients did not settle within tol"),
            ));
        }
        found.push(r);
    }
    match found[..] {
        [r] => Ok((r.value, r.err_est, r.side)),
        [l, r] => {
            if (l.value - r.value).abs() > cfg.tol {
                let (left, right) = if l.side == ApproachSide::Left {
                    (l.value, r.value)
                } else {
                    (r.value, l.value)
                };
                return Err(Error::SidedLimitsDisagree { t, left, right });
            }
            let err = l
                .err_est
                .max(r.err_est)
                .max((l.value - r.value).abs() / 2.0);
            Ok(((l.value + r.value) / 2.0, err, ApproachSide::Both))
        }
        _ => unreachable!("one or two sides"),
    }
}

/// Sides from which a limit at a dense point is taken.
///
/// `preferred` is the one side allowed for general orders. When
/// `fallback` is set and the preferred side has no points, the other side
/// is used and a note is returned.
fn limit_sides(
    ts: &TimeScale,
    t: f64,
    order: Order,
    preferred: ApproachSide,
    fallback: bool,
) -> Result<(Vec<ApproachSide>, Option<String>)> {
    let right = ts.accumulates_at(t, ApproachSide::Right);
    let left = ts.accumulates_at(t, ApproachSide::Left);
    let other = if preferred == ApproachSide::Right {
        ApproachSide::Left
    } else {
        ApproachSide::Right
    };
    let has = |s: ApproachSide| {
        if s == ApproachSide::Right {
            right
        } else {
            left
        }
    };
    let no_points = |reason: String| Error::LimitDidNotConverge {
        t,
        value: f64::NAN,
        err_est: f64::INFINITY,
        reason,
    };
    match order.class() {
        OrderClass::OddReciprocal => {
            let sides: Vec<_> = [ApproachSide::Left, ApproachSide::Right]
                .into_iter()
                .filter(|s| has(*s))
                .collect();
            if sides.is_empty() {
                return Err(no_points("no scale points accumulate at t".into()));
            }
            Ok((sides, None))
        }
        OrderClass::General if has(preferred) => Ok((vec![preferred], None)),
        OrderClass::General if fallback && has(other) => Ok((
            vec![other],
            Some(format!(
                "no scale points on the {preferred:?} side; used the {other:?}-sided limit"
            )),
        )),
        OrderClass::General => Err(no_points(format!(
            "order {order} needs a {preferred:?}-sided limit but the scale has no points there"
        ))),
    }
}

/// Nabla fractional derivative `f^{∇^α}(t)`.
pub fn nabla_frac(f: &FnOnScale, t: f64, a: Order, cfg: &LimitConfig) -> Result<DerivResult> {
    nabla_frac_impl(f, t, a, cfg, false)
}

pub(crate) fn nabla_frac_impl(
    f: &FnOnScale,
    t: f64,
    a: Order,
    cfg: &LimitConfig,
    fallback: bool,
) -> Result<DerivResult> {
    cfg.validate()?;
    let ts = f.scale();
    let t = member(ts, t)?;
    if !ts.membership_kind(t)?.in_t_kappa_lower {
        return Err(Error::PointOutsideDomain {
            t,
            operator: "nabla derivative",
            domain: "T_kappa",
        });
    }
    let rho = ts.rho_of(t);
    if rho < t {
        let value = f.increment(rho, t)? / signed_pow(t - rho, a)?;
        return Ok(DerivResult::exact(
            value,
            ApproachSide::Left,
            a,
            DerivKind::Nabla,
        ));
    }
    let (sides, note) = limit_sides(ts, t, a, ApproachSide::Right, fallback)?;
    let (value, err_est, side) = dense_limit(f, t, &sides, a, cfg, |s| {
        // For s < t this is (f(t) - f(s)) / (t - s)^α with the sign carried
        // by the odd root.
        Ok(f.increment(t, s)?
            / signed_pow(s - t, a).or_else(|_| signed_pow(t - s, a).map(|p| -p))?)
    })?;
    Ok(DerivResult {
        value,
        path: Path::DenseLimit,
        side,
        err_est,
        order: a,
        kind: DerivKind::Nabla,
        note,
    })
}

/// Delta fractional derivative `f^{Δ^α}(t)`.
pub fn delta_frac(f: &FnOnScale, t: f64, a: Order, cfg: &LimitConfig) -> Result<DerivResult> {
    delta_frac_impl(f, t, a, cfg, false)
}

pub(crate) fn delta_frac_impl(
    f: &FnOnScale,
    t: f64,
    a: Order,
    cfg: &LimitConfig,
    fallback: bool,
) -> Result<DerivResult> {
    cfg.validate()?;
    let ts = f.scale();
    let t = member(ts, t)?;
    if !ts.membership_kind(t)?.in_t_kappa_upper {
        return Err(Error::PointOutsideDomain {
            t,
            operator: "delta derivative",
            domain: "T^kappa",
        });
    }
    let sigma = ts.sigma_of(t);
    if sigma > t {
        let value = f.increment(t, sigma)? / signed_pow(sigma - t, a)?;
        return Ok(DerivResult::exact(
            value,
            ApproachSide::Right,
            a,
            DerivKind::Delta,
        ));
    }
    let (sides, note) = limit_sides(ts, t, a, ApproachSide::Left, fallback)?;
    let (value, err_est, side) = dense_limit(f, t, &sides, a, cfg, |s| {
        Ok(f.increment(s, t)?
            / signed_pow(t - s, a).or_else(|_| signed_pow(s - t, a).map(|p| -p))?)
    })?;
    Ok(DerivResult {
        value,
        path: Path::DenseLimit,
        side,
        err_est,
        order: a,
        kind: DerivKind::Delta,
        note,
    })
}

fn require_both_kappa(ts: &TimeScale, t: f64, operator: &'static str) -> Result<f64> {
    let t = member(ts, t)?;
    if !ts.membership_kind(t)?.in_t_kappa_both {
        return Err(Error::PointOutsideDomain {
            t,
            operator,
            domain: "T_kappa^kappa",
        });
    }
    Ok(t)
}

/// Symmetric fractional derivative `f^{◇^α}(t)`.
pub fn symmetric_frac(f: &FnOnScale, t: f64, a: Order, cfg: &LimitConfig) -> Result<DerivResult> {
    cfg.validate()?;
    let ts = f.scale();
    let t = require_both_kappa(ts, t, "symmetric derivative")?;
    let (sigma, rho) = (ts.sigma_of(t), ts.rho_of(t));
    if sigma > t || rho < t {
        let value = f.increment(rho, sigma)? / signed_pow(sigma - rho, a)?;
        return Ok(DerivResult::exact(
            value,
            ApproachSide::Both,
            a,
            DerivKind::Symmetric,
        ));
    }
    let hs = ts.symmetric_offsets(t, cfg.max_samples, cfg.h0, cfg.ratio)?;
    let two_a = 2f64.powf(a.value());
    let r = limit_of(
        &hs,
        |h| h,
        a,
        cfg,
        ApproachSide::Both,
        |h| {
            let hi = ts.snap(t + h).unwrap_or(t + h);
            let lo = ts.snap(t - h).unwrap_or(t - h);
            Ok(f.increment(lo, hi)? / (two_a * signed_pow(h, a)?))
        },
    )?;
    if !r.converged {
        return Err(not_converged(
            t,
            &r,
            "symmetric quotients did not settle within tol",
        ));
    }
    Ok(DerivResult {
        value: r.value,
        path: Path::DenseLimit,
        side: ApproachSide::Both,
        err_est: r.err_est,
        order: a,
        kind: DerivKind::Symmetric,
        note: None,
    })
}

/// Weights with `f^{◇^α} = γ1·f^{Δ^α} + γ2·f^{∇^α}`.
pub fn symmetric_weights(ts: &TimeScale, t: f64, a: Order) -> Result<SymmetricWeights> {
    let t = require_both_kappa(ts, t, "symmetric weights")?;
    Ok(weights_at(ts, t, a.value()))
}

/// Weights at order `alpha`; `t` must already be a snapped member.
pub(crate) fn weights_at(ts: &TimeScale, t: f64, alpha: f64) -> SymmetricWeights {
    let (sigma, rho) = (ts.sigma_of(t), ts.rho_of(t));
    if sigma == t && rho == t {
        let g = 2f64.powf(-alpha);
        return SymmetricWeights {
            gamma1: g,
            gamma2: g,
        };
    }
    let span = sigma - rho;
    SymmetricWeights {
        gamma1: ((sigma - t) / span).powf(alpha),
        gamma2: ((t - rho) / span).powf(alpha),
    }
}

/// `γ1·f^{Δ^α}(t) + γ2·f^{∇^α}(t)`. A side whose weight is zero is not
/// evaluated.
pub fn symmetric_via_sides(
    f: &FnOnScale,
    t: f64,
    a: Order,
    cfg: &LimitConfig,
) -> Result<DerivResult> {
    let ts = f.scale();
    let t = require_both_kappa(ts, t, "symmetric derivative")?;
    let w = weights_at(ts, t, a.value());
    let mut value = 0.0;
    let mut err_est = 0.0;
    let mut exact = true;
    if w.gamma1 != 0.0 {
        let d = delta_frac(f, t, a, cfg)?;
        value += w.gamma1 * d.value;
        err_est += w.gamma1 * d.err_est;
        exact &= d.path == Path::ExactScattered;
    }
    if w.gamma2 != 0.0 {
        let n = nabla_frac(f, t, a, cfg)?;
        value += w.gamma2 * n.value;
        err_est += w.gamma2 * n.err_est;
        exact &= n.path == Path::ExactScattered;
    }
    Ok(DerivResult {
        value,
        path: if exact {
            Path::ExactScattered
        } else {
            Path::DenseLimit
        },
        side: ApproachSide::Both,
        err_est,
        order: a,
        kind: DerivKind::Symmetric,
        note: None,
    })
}

/// Dispatch on `kind`.
pub fn frac_derivative(
    f: &FnOnScale,
    t: f64,
    kind: DerivKind,
    a: Order,
    cfg: &LimitConfig,
) -> Result<DerivResult> {
    match kind {
        DerivKind::Nabla => nabla_frac(f, t, a, cfg),
        DerivKind::Delta => delta_frac(f, t, a, cfg),
        DerivKind::Symmetric => symmetric_frac(f, t, a, cfg),
    }
}

/// Factor on `tol` within which a lower-order derivative at a dense point
/// must vanish.
pub const ORDER_LOWERING_SLACK: f64 = 1e3;

/// Whether lowering the order from `b` to `a` preserves differentiability at
/// `t`, and at a left-dense point with `b > a` whether the lower-order value
/// vanishes (within `ORDER_LOWERING_SLACK * tol`). Vacuously true when the
/// `b`-derivative does not exist, and when `a` is a general order at a
/// left-dense, right-scattered point: its right neighbourhood is `{t}`, so
/// every number satisfies the definition and no value can be computed.
pub fn order_lowering_check(f: &FnOnScale, t: f64, a: Order, b: Order, cfg: &LimitConfig) -> bool {
    let Ok(high) = nabla_frac(f, t, b, cfg) else {
        return true;
    };
    let Ok(low) = nabla_frac(f, t, a, cfg) else {
        let ts = f.scale();
        return a.class() == OrderClass::General
            && high.path == Path::DenseLimit
            && !ts.accumulates_at(ts.snap(t).unwrap_or(t), ApproachSide::Right);
    };
    if high.path == Path::DenseLimit && b.value() > a.value() {
        return low.value.abs() <= ORDER_LOWERING_SLACK * cfg.tol;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timescale::Component;

    fn o(s: &str) -> Order {
        s.parse().unwrap()
    }

    fn z() -> TimeScale {
        TimeScale::grid(-100.0, 100.0, 1.0).unwrap()
    }

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    #[test]
    fn identity_on_z() {
        let f = FnOnScale::new(z(), |t| t);
        let n = nabla_frac(&f, 3.0, o("1/2"), &cfg()).unwrap();
        assert_eq!(
            (n.value, n.path, n.err_est),
            (1.0, Path::ExactScattered, 0.0)
        );
        assert_eq!(delta_frac(&f, 3.0, o("1/2"), &cfg()).unwrap().value, 1.0);
    }

    #[test]
    fn sqrt_on_interval() {
        let f = FnOnScale::new(TimeScale::interval(0.0, 4.0).unwrap(), f64::sqrt);
        let at1 = nabla_frac(&f, 1.0, o("1/2"), &cfg()).unwrap();
        assert!(at1.value.abs() < 1e-6, "{at1:?}");
        assert_eq!(at1.side, ApproachSide::Right);
        let at0 = nabla_frac(&f, 0.0, o("1/2"), &cfg()).unwrap();
        assert!((at0.value - 1.0).abs() < 1e-12, "{at0:?}");
    }

    #[test]
    fn constants_have_zero_derivative() {
        for (ts, t) in [(z(), 3.0), (TimeScale::interval(0.0, 1.0).unwrap(), 0.5)] {
            let f = FnOnScale::new(ts, |_| 4.2);
            for a in ["1/3", "1/2", "1"] {
                assert_eq!(nabla_frac(&f, t, o(a), &cfg()).unwrap().value, 0.0);
                assert_eq!(delta_frac(&f, t, o(a), &cfg()).unwrap().value, 0.0);
            }
        }
    }

    #[test]
    fn sin_is_zero_for_fractional_order() {
        let f = FnOnScale::new(
            TimeScale::interval(0.0, std::f64::consts::PI).unwrap(),
            f64::sin,
        );
        for a in ["1/2", "1/3", "3/4"] {
            let r = nabla_frac(&f, 1.0, o(a), &cfg()).unwrap();
            assert!(r.value.abs() < 1e-6, "{a}: {r:?}");
        }
        let r = nabla_frac(&f, 1.0, Order::ONE, &cfg()).unwrap();
        assert!((r.value - 1f64.cos()).abs() < 1e-6);
        assert_eq!(r.side, ApproachSide::Both);
    }

    #[test]
    fn delta_classical_on_interval() {
        let f = FnOnScale::new(TimeScale::interval(0.0, 1.0).unwrap(), |t| t * t);
        let r = delta_frac(&f, 0.5, Order::ONE, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn general_order_at_right_end_has_no_right_limit() {
        let f = FnOnScale::new(TimeScale::interval(0.0, 1.0).unwrap(), |t| t);
        assert!(matches!(
            nabla_frac(&f, 1.0, o("1/2"), &cfg()),
            Err(Error::LimitDidNotConverge { .. })
        ));
        let r = nabla_frac_impl(&f, 1.0, o("1/2"), &cfg(), true).unwrap();
        assert_eq!(r.side, ApproachSide::Left);
        assert!(r.note.is_some());
    }

    #[test]
    fn odd_reciprocal_disagreeing_sides() {
        let f = FnOnScale::new(TimeScale::interval(-1.0, 1.0).unwrap(), f64::abs);
        assert!(matches!(
            nabla_frac(&f, 0.0, Order::ONE, &cfg()),
            Err(Error::SidedLimitsDisagree { .. })
        ));
    }

    #[test]
    fn domain_checks() {
        let p = TimeScale::points(vec![0.0, 1.0, 2.0]).unwrap();
        let f = FnOnScale::new(p, |t| t);
        assert!(matches!(
            nabla_frac(&f, 0.0, o("1/2"), &cfg()),
            Err(Error::PointOutsideDomain { .. })
        ));
        assert!(matches!(
            delta_frac(&f, 2.0, o("1/2"), &cfg()),
            Err(Error::PointOutsideDomain { .. })
        ));
        assert_eq!(
            nabla_frac(&f, 0.5, o("1/2"), &cfg()),
            Err(Error::PointNotInScale { t: 0.5 })
        );
    }

    #[test]
    fn symmetric_examples() {
        let p = FnOnScale::new(TimeScale::points(vec![-1.0, 0.0, 2.0]).unwrap(), f64::abs);
        let r = symmetric_frac(&p, 0.0, o("1/2"), &cfg()).unwrap();
        assert!((r.value - 1.0 / 3f64.sqrt()).abs() < 1e-15);

        let i = FnOnScale::new(TimeScale::interval(-1.0, 1.0).unwrap(), f64::abs);
        assert!(
            symmetric_frac(&i, 0.0, o("1/2"), &cfg())
                .unwrap()
                .value
                .abs()
                < 1e-12
        );

        let sq = FnOnScale::new(z(), |t| t * t);
        let r = symmetric_frac(&sq, 3.0, o("1/2"), &cfg()).unwrap();
        assert!((r.value - 2f64.sqrt() * 6.0).abs() < 1e-12);

        let inv = FnOnScale::new(z(), |t| 1.0 / t);
        let r = symmetric_frac(&inv, 3.0, Order::ONE, &cfg()).unwrap();
        assert!((r.value + 0.125).abs() < 1e-15);

        let hz = FnOnScale::new(TimeScale::grid(-10.0, 10.0, 0.5).unwrap(), |t| t * t * t);
        let r = symmetric_frac(&hz, 1.0, o("1/2"), &cfg()).unwrap();
        let want = (1.5f64.powi(3) - 0.5f64.powi(3)) / (2f64.sqrt() * 0.5f64.sqrt());
        assert!((r.value - want).abs() < 1e-12);
    }

    #[test]
    fn weights_examples() {
        let w = symmetric_weights(&TimeScale::interval(0.0, 1.0).unwrap(), 0.5, o("1/2")).unwrap();
        assert_eq!((w.gamma1, w.gamma2), (2f64.powf(-0.5), 2f64.powf(-0.5)));
        let w = symmetric_weights(&z(), 3.0, Order::ONE).unwrap();
        assert_eq!((w.gamma1, w.gamma2), (0.5, 0.5));
        let hybrid = TimeScale::new(vec![
            Component::Interval { lo: 0.0, hi: 1.0 },
            Component::Points { points: vec![2.0] },
        ])
        .unwrap();
        let w = symmetric_weights(&hybrid, 1.0, o("1/2")).unwrap();
        assert_eq!((w.gamma1, w.gamma2), (1.0, 0.0));
    }

    #[test]
    fn via_sides_matches_direct() {
        let sq = FnOnScale::new(z(), |t| t * t);
        let r = symmetric_via_sides(&sq, 3.0, Order::ONE, &cfg()).unwrap();
        assert_eq!(r.value, 6.0);
        let r = symmetric_via_sides(&sq, 3.0, o("1/2"), &cfg()).unwrap();
        assert!((r.value - 2f64.sqrt() * 6.0).abs() < 1e-12);

        let id = FnOnScale::new(TimeScale::interval(0.0, 1.0).unwrap(), |t| t);
        let r = symmetric_via_sides(&id, 0.5, Order::ONE, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_lowering_examples() {
        let f = FnOnScale::new(TimeScale::interval(0.0, 4.0).unwrap(), f64::sqrt);
        assert!(order_lowering_check(&f, 1.0, o("1/4"), o("1/2"), &cfg()));
        let low = nabla_frac(&f, 1.0, o("1/4"), &cfg()).unwrap();
        assert!(low.value.abs() < 1e-5, "{low:?}");
        let g = FnOnScale::new(z(), |t| t * t);
        assert!(order_lowering_check(&g, 2.0, o("1/3"), o("1/2"), &cfg()));
    }

    #[test]
    fn evaluation_is_deterministic() {
        let f = FnOnScale::new(TimeScale::interval(0.0, 2.0).unwrap(), f64::exp);
        let a = nabla_frac(&f, 1.0, o("1/3"), &cfg()).unwrap();
        let b = nabla_frac(&f, 1.0, o("1/3"), &cfg()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
