use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One canonical closed piece of a time scale.
///
/// A `GeometricGrid` with `include_zero = false` is the finite set
/// `{sign * q^k : k_min <= k <= k_max}`. With `include_zero = true` it is the
/// closed set `{sign * q^k : k <= k_max} ∪ {0}`, which accumulates at 0; in
/// that case `k_min` only bounds how deep enumeration and approach sequences go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Component {
    Interval {
        lo: f64,
        hi: f64,
    },
    Points {
        points: Vec<f64>,
    },
    Grid {
        start: f64,
        stop: f64,
        step: f64,
    },
    #[serde(rename = "qgrid")]
    GeometricGrid {
        q: f64,
        k_min: i32,
        k_max: i32,
        include_zero: bool,
        sign: i8,
    },
}

/// Magnitudes below this are treated as the accumulation point itself.
const ZERO_EPS: f64 = 1e-300;

/// Slack when turning `(stop - start) / step` into a point count, so that
/// decimal grids like `grid(0, 0.3, 0.1)` keep their last point.
const GRID_COUNT_SLACK: f64 = 1e-9;

impl Component {
    pub(crate) fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!("{name} must be finite, got {v}")))
            }
        };
        match self {
            Component::Interval { lo, hi } => {
                finite("lo", *lo)?;
                finite("hi", *hi)?;
                if lo > hi {
                    return Err(Error::Validation(format!(
                        "interval({lo},{hi}) has lo > hi"
                    )));
                }
            }
            Component::Points { points } => {
                if points.is_empty() {
                    return Err(Error::Validation(
                        "points() needs at least one point".into(),
                    ));
                }
                for p in points {
                    finite("point", *p)?;
                }
            }
            Component::Grid { start, stop, step } => {
                finite("start", *start)?;
                finite("stop", *stop)?;
                finite("step", *step)?;
                if *step <= 0.0 {
                    return Err(Error::Validation(format!(
                        "grid step must be > 0, got {step}"
                    )));
                }
                if start > stop {
                    return Err(Error::Validation(format!(
                        "grid start {start} exceeds stop {stop}"
                    )));
                }
            }
            Component::GeometricGrid {
                q,
                k_min,
                k_max,
                sign,
                ..
            } => {
                finite("q", *q)?;
                if *q <= 1.0 {
                    return Err(Error::Validation(format!(
                        "qgrid ratio must be > 1, got {q}"
                    )));
                }
                if k_min > k_max {
                    return Err(Error::Validation(format!(
                        "qgrid kmin {k_min} exceeds kmax {k_max}"
                    )));
                }
                if *sign != 1 && *sign != -1 {
                    return Err(Error::Validation(format!(
                        "qgrid sign must be +1 or -1, got {sign}"
                    )));
                }
                if !q.powi(*k_max).is_finite() || q.powi(*k_min) == 0.0 {
                    return Err(Error::Validation("qgrid exponents overflow f64".into()));
                }
            }
        }
        Ok(())
    }

    pub fn infimum(&self) -> f64 {
        match self {
            Component::Interval { lo, .. } => *lo,
            Component::Points { points } => points.iter().copied().fold(f64::INFINITY, f64::min),
            Component::Grid { start, .. } => *start,
            Component::GeometricGrid { .. } => {
                let g = self.as_geo().unwrap();
                if g.sign > 0 {
                    g.pos_min()
                } else {
                    -g.pos_max()
                }
            }
        }
    }

    pub fn supremum(&self) -> f64 {
        match self {
            Component::Interval { hi, .. } => *hi,
            Component::Points { points } => {
                points.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            }
            Component::Grid { start, stop, step } => {
                grid_point(*start, *step, grid_last(*start, *stop, *step))
            }
            Component::GeometricGrid { .. } => {
                let g = self.as_geo().unwrap();
                if g.sign > 0 {
                    g.pos_max()
                } else {
                    0.0 - g.pos_min()
                }
            }
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, Component::Interval { .. })
    }

    /// Canonical representative of `t` in this component, if `t` is a member
    /// up to the snap tolerance.
    pub(crate) fn snap(&self, t: f64, tol: f64) -> Option<f64> {
        match self {
            Component::Interval { lo, hi } => {
                if t < lo - tol || t > hi + tol {
                    None
                } else if (t - lo).abs() <= tol {
                    Some(*lo)
                } else if (t - hi).abs() <= tol {
                    Some(*hi)
                } else {
                    Some(t)
                }
            }
            Component::Points { points } => points.iter().copied().find(|p| (p - t).abs() <= tol),
            Component::Grid { start, stop, step } => {
                let last = grid_last(*start, *stop, *step);
                let k = ((t - start) / step).round();
                if !k.is_finite() {
                    return None;
                }
                let k = (k as i64).clamp(0, last);
                let p = grid_point(*start, *step, k);
                ((p - t).abs() <= tol).then_some(p)
            }
            Component::GeometricGrid { .. } => {
                let g = self.as_geo().unwrap();
                g.pos_snap(g.sign as f64 * t, tol)
                    .map(|m| g.sign as f64 * m + 0.0)
            }
        }
    }

    /// `inf { s in C : s > t }`. Returns `Some(t)` when `C` accumulates at `t`
    /// from the right.
    pub(crate) fn next_above(&self, t: f64, tol: f64) -> Option<f64> {
        match self {
            Component::Interval { lo, hi } => {
                if t < lo - tol {
                    Some(*lo)
                } else if t < hi - tol {
                    Some(t)
                } else {
                    None
                }
            }
            Component::Points { points } => points
                .iter()
                .copied()
                .filter(|p| *p > t + tol)
                .fold(None, |acc: Option<f64>, p| {
                    Some(acc.map_or(p, |a| a.min(p)))
                }),
            Component::Grid { start, stop, step } => grid_next_above(*start, *stop, *step, t, tol),
            Component::GeometricGrid { .. } => {
                let g = self.as_geo().unwrap();
                if g.sign > 0 {
                    g.pos_next_above(t, tol)
                } else {
                    g.pos_prev_below(-t, tol).map(|m| 0.0 - m)
                }
            }
        }
    }

    /// `sup { s in C : s < t }`. Returns `Some(t)` when `C` accumulates at `t`
    /// from the left.
    pub(crate) fn prev_below(&self, t: f64, tol: f64) -> Option<f64> {
        match self {
            Component::Interval { lo, hi } => {
                if t > hi + tol {
                    Some(*hi)
                } else if t > lo + tol {
                    Some(t)
                } else {
                    None
                }
            }
            Component::Points { points } => points
                .iter()
                .copied()
                .filter(|p| *p < t - tol)
                .fold(None, |acc: Option<f64>, p| {
                    Some(acc.map_or(p, |a| a.max(p)))
                }),
            Component::Grid { start, stop, step } => grid_prev_below(*start, *stop, *step, t, tol),
            Component::GeometricGrid { .. } => {
                let g = self.as_geo().unwrap();
                if g.sign > 0 {
                    g.pos_prev_below(t, tol)
                } else {
                    g.pos_next_above(-t, tol).map(|m| 0.0 - m)
                }
            }
        }
    }

    /// Discrete members within `[a, b]`, ascending. Intervals yield their
    /// endpoints. Accumulating geometric grids are enumerated down to
    /// magnitude `floor` when given, else down to `q^k_min`.
    pub(crate) fn discrete_points_in(
        &self,
        a: f64,
        b: f64,
        tol: f64,
        floor: Option<f64>,
    ) -> Vec<f64> {
        let inside = |p: &f64| *p >= a - tol && *p <= b + tol;
        let mut out: Vec<f64> = match self {
            Component::Interval { lo, hi } => vec![*lo, *hi],
            Component::Points { points } => points.clone(),
            Component::Grid { start, stop, step } => {
                let last = grid_last(*start, *stop, *step);
                let k0 = (((a - start) / step).floor() as i64 - 1).clamp(0, last);
                let k1 = (((b - start) / step).ceil() as i64 + 1).clamp(0, last);
                (k0..=k1).map(|k| grid_point(*start, *step, k)).collect()
            }
            Component::GeometricGrid { .. } => {
                let g = self.as_geo().unwrap();
                let sign = g.sign as f64;
                let lowest = match (g.include_zero, floor) {
                    (true, Some(fl)) => {
                        let mut k = g.k_min.min(g.k_max);
                        while k > i32::MIN + 1 && g.q.powi(k) >= fl {
                            k -= 1;
                        }
                        k
                    }
                    _ => g.k_min,
                };
                let mut pts: Vec<f64> = (lowest..=g.k_max).map(|k| sign * g.q.powi(k)).collect();
                if g.include_zero {
                    pts.push(0.0);
                }
                pts
            }
        };
        out.retain(inside);
        out.sort_by(f64::total_cmp);
        out
    }

    pub(crate) fn as_geo(&self) -> Option<Geo> {
        match *self {
            Component::GeometricGrid {
                q,
                k_min,
                k_max,
                include_zero,
                sign,
            } => Some(Geo {
                q,
                k_min,
                k_max,
                include_zero,
                sign,
            }),
            _ => None,
        }
    }
}

pub(crate) fn grid_last(start: f64, stop: f64, step: f64) -> i64 {
    ((stop - start) / step + GRID_COUNT_SLACK).floor() as i64
}

pub(crate) fn grid_point(start: f64, step: f64, k: i64) -> f64 {
    start + k as f64 * step
}

fn grid_next_above(start: f64, stop: f64, step: f64, t: f64, tol: f64) -> Option<f64> {
    let last = grid_last(start, stop, step);
    if t < start - tol {
        return Some(start);
    }
    let mut k = (((t - start) / step).floor() as i64).clamp(0, last);
    while k > 0 && grid_point(start, step, k) > t + tol {
        k -= 1;
    }
    while k <= last && grid_point(start, step, k) <= t + tol {
        k += 1;
    }
    (k <= last).then(|| grid_point(start, step, k))
}

fn grid_prev_below(start: f64, stop: f64, step: f64, t: f64, tol: f64) -> Option<f64> {
    let last = grid_last(start, stop, step);
    if t > grid_point(start, step, last) + tol {
        return Some(grid_point(start, step, last));
    }
    let mut k = (((t - start) / step).ceil() as i64).clamp(0, last);
    while k < last && grid_point(start, step, k) < t - tol {
        k += 1;
    }
    while k >= 0 && grid_point(start, step, k) >= t - tol {
        k -= 1;
    }
    (k >= 0).then(|| grid_point(start, step, k))
}

/// Geometric grid viewed through its positive magnitudes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Geo {
    pub q: f64,
    pub k_min: i32,
    pub k_max: i32,
    pub include_zero: bool,
    pub sign: i8,
}

impl Geo {
    fn point(&self, k: i32) -> f64 {
        self.q.powi(k)
    }

    fn allowed(&self, k: i32) -> bool {
        k <= self.k_max && (self.include_zero || k >= self.k_min)
    }

    fn pos_min(&self) -> f64 {
        if self.include_zero {
            0.0
        } else {
            self.point(self.k_min)
        }
    }

    fn pos_max(&self) -> f64 {
        self.point(self.k_max)
    }

    fn log_index(&self, m: f64) -> f64 {
        m.ln() / self.q.ln()
    }

    /// Relative tolerance on magnitudes, so that tiny grid points near the
    /// accumulation point stay distinguishable.
    fn pos_snap(&self, m: f64, tol: f64) -> Option<f64> {
        if m.abs() <= ZERO_EPS {
            return self.include_zero.then_some(0.0);
        }
        if m < 0.0 {
            return None;
        }
        let k = self.log_index(m).round();
        if !k.is_finite() || k > self.k_max as f64 || k < i32::MIN as f64 / 2.0 {
            return None;
        }
        let k = k as i32;
        if !self.allowed(k) {
            return None;
        }
        let p = self.point(k);
        ((p - m).abs() <= tol * p).then_some(p)
    }

    pub(crate) fn pos_next_above(&self, m: f64, tol: f64) -> Option<f64> {
        if m < -ZERO_EPS {
            return Some(self.pos_min());
        }
        if m <= ZERO_EPS {
            return Some(if self.include_zero {
                0.0
            } else {
                self.point(self.k_min)
            });
        }
        let bound = m * (1.0 + tol);
        let mut k = self.log_index(m).floor() as i32;
        while self.point(k) > bound {
            k -= 1;
        }
        while self.point(k) <= bound {
            k += 1;
        }
        if !self.include_zero {
            k = k.max(self.k_min);
        }
        (k <= self.k_max).then(|| self.point(k))
    }

    pub(crate) fn pos_prev_below(&self, m: f64, tol: f64) -> Option<f64> {
        if m <= ZERO_EPS {
            return None;
        }
        let bound = m * (1.0 - tol);
        let mut k = self.log_index(m).ceil() as i32;
        while self.point(k) >= bound {
            k -= 1;
        }
        while self.point(k + 1) < bound {
            k += 1;
        }
        let k = k.min(self.k_max);
        self.allowed(k).then(|| self.point(k))
    }
}
