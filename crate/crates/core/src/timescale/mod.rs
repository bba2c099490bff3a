//! Time scales: nonempty closed subsets of the real line described as finite
//! unions of intervals, finite point sets, uniform grids and geometric grids.
//!
//! Every geometric question the calculus asks (membership, forward and
//! backward jumps, point classes, the truncated sets used as derivative
//! domains, sample sequences that approach a point inside the scale) is
//! answered here.

mod component;

pub use component::Component;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute snap tolerance for membership tests.
pub const SNAP_TOL: f64 = 1e-12;

/// Steps walked along scattered points when searching for mirrored pairs.
const PAIR_SEARCH_STEPS: usize = 256;

/// Smallest step, relative to `max(1, |t|)`, of approach sequences inside
/// intervals. Below it increments of smooth functions are mostly rounding.
pub const MIN_RELATIVE_STEP: f64 = 1e-13;

/// Magnitude below which accumulating geometric grids are not enumerated
/// when summing jumps.
pub(crate) const ACCUMULATION_FLOOR: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproachSide {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    Dense,
    Scattered,
}

/// Left/right density of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointClass {
    pub left: Density,
    pub right: Density,
}

impl PointClass {
    pub fn dense(&self) -> bool {
        self.left == Density::Dense && self.right == Density::Dense
    }

    pub fn isolated(&self) -> bool {
        self.left == Density::Scattered && self.right == Density::Scattered
    }

    pub fn left_dense(&self) -> bool {
        self.left == Density::Dense
    }

    pub fn right_dense(&self) -> bool {
        self.right == Density::Dense
    }
}

/// Which of the truncated sets a point belongs to.
///
/// `in_t_kappa_upper` is membership of the scale minus a finite left-scattered
/// maximum (domain of delta derivatives), `in_t_kappa_lower` of the scale
/// minus a finite right-scattered minimum (domain of nabla derivatives).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleMembershipKind {
    pub in_t: bool,
    pub in_t_kappa_upper: bool,
    pub in_t_kappa_lower: bool,
    pub in_t_kappa_both: bool,
}

/// A nonempty closed subset of the reals.
///
/// Values are immutable after construction. Components are normalized:
/// overlapping or touching intervals are merged, loose points covered by
/// other components are dropped, and components are sorted by infimum.
/// Discrete components may still interleave with one another; every query
/// takes the union into account, so this does not affect results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScale", into = "RawScale")]
pub struct TimeScale {
    components: Vec<Component>,
    tol: f64,
}

#[derive(Serialize, Deserialize)]
struct RawScale {
    components: Vec<Component>,
}

impl TryFrom<RawScale> for TimeScale {
    type Error = Error;

    fn try_from(raw: RawScale) -> Result<Self> {
        TimeScale::new(raw.components)
    }
}

impl From<TimeScale> for RawScale {
    fn from(ts: TimeScale) -> Self {
        RawScale {
            components: ts.components,
        }
    }
}

impl TimeScale {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        Self::with_tolerance(components, SNAP_TOL)
    }

    pub fn with_tolerance(components: Vec<Component>, tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::Validation(format!(
                "snap tolerance must be >= 0, got {tol}"
            )));
        }
        if components.is_empty() {
            return Err(Error::Validation(
                "a time scale needs at least one component".into(),
            ));
        }
        for c in &components {
            c.validate()?;
        }
        Ok(TimeScale {
            components: normalize(components, tol),
            tol,
        })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![Component::Interval { lo, hi }])
    }

    pub fn points(points: Vec<f64>) -> Result<Self> {
        Self::new(vec![Component::Points { points }])
    }

    pub fn grid(start: f64, stop: f64, step: f64) -> Result<Self> {
        Self::new(vec![Component::Grid { start, stop, step }])
    }

    pub fn qgrid(q: f64, k_min: i32, k_max: i32, include_zero: bool) -> Result<Self> {
        Self::new(vec![Component::GeometricGrid {
            q,
            k_min,
            k_max,
            include_zero,
            sign: 1,
        }])
    }

    pub fn union(scales: &[TimeScale]) -> Result<Self> {
        let tol = scales.iter().map(|s| s.tol).fold(SNAP_TOL, f64::max);
        Self::with_tolerance(
            scales
                .iter()
                .flat_map(|s| s.components.iter().cloned())
                .collect(),
            tol,
        )
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn min(&self) -> f64 {
        self.components
            .iter()
            .map(Component::infimum)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.components
            .iter()
            .map(Component::supremum)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("time scale serializes")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Validation(e.to_string()))
    }

    pub fn contains(&self, t: f64) -> bool {
        self.snap(t).is_some()
    }

    /// The canonical member equal to `t` up to the snap tolerance.
    pub fn snap(&self, t: f64) -> Option<f64> {
        if !t.is_finite() {
            return None;
        }
        self.components.iter().find_map(|c| c.snap(t, self.tol))
    }

    pub(crate) fn member(&self, t: f64) -> Result<f64> {
        self.snap(t).ok_or(Error::PointNotInScale { t })
    }

    /// Forward jump: `inf { s in T : s > t }`, or `t` at the maximum.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let t = self.member(t)?;
        Ok(self.sigma_of(t))
    }

    /// Backward jump: `sup { s in T : s < t }`, or `t` at the minimum.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let t = self.member(t)?;
        Ok(self.rho_of(t))
    }

    /// Forward graininess `sigma(t) - t`.
    pub fn mu(&self, t: f64) -> Result<f64> {
        let t = self.member(t)?;
        Ok(self.sigma_of(t) - t)
    }

    /// Backward graininess `t - rho(t)`.
    pub fn nu(&self, t: f64) -> Result<f64> {
        let t = self.member(t)?;
        Ok(t - self.rho_of(t))
    }

    pub(crate) fn sigma_of(&self, t: f64) -> f64 {
        self.components
            .iter()
            .filter_map(|c| c.next_above(t, self.tol))
            .fold(None, |acc: Option<f64>, s| {
                Some(acc.map_or(s, |a| a.min(s)))
            })
            .unwrap_or(t)
    }

    pub(crate) fn rho_of(&self, t: f64) -> f64 {
        self.components
            .iter()
            .filter_map(|c| c.prev_below(t, self.tol))
            .fold(None, |acc: Option<f64>, s| {
                Some(acc.map_or(s, |a| a.max(s)))
            })
            .unwrap_or(t)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let t = self.member(t)?;
        let density = |jump: f64| {
            if jump == t {
                Density::Dense
            } else {
                Density::Scattered
            }
        };
        Ok(PointClass {
            left: density(self.rho_of(t)),
            right: density(self.sigma_of(t)),
        })
    }

    pub fn membership_kind(&self, t: f64) -> Result<ScaleMembershipKind> {
        let t = self.member(t)?;
        let (lo, hi) = (self.min(), self.max());
        let upper = !(t == hi && self.rho_of(hi) < hi);
        let lower = !(t == lo && self.sigma_of(lo) > lo);
        Ok(ScaleMembershipKind {
            in_t: true,
            in_t_kappa_upper: upper,
            in_t_kappa_lower: lower,
            in_t_kappa_both: upper && lower,
        })
    }

    /// Whether members of the scale other than `t` accumulate at `t` from the
    /// given side. Unlike the formal class, this is false at an extremum.
    pub fn accumulates(&self, t: f64, side: ApproachSide) -> Result<bool> {
        let t = self.member(t)?;
        Ok(self.accumulates_at(t, side))
    }

    pub(crate) fn accumulates_at(&self, t: f64, side: ApproachSide) -> bool {
        let right = || t < self.max() && self.sigma_of(t) == t;
        let left = || t > self.min() && self.rho_of(t) == t;
        match side {
            ApproachSide::Right => right(),
            ApproachSide::Left => left(),
            ApproachSide::Both => right() && left(),
        }
    }

    /// `n` distinct scale points strictly on `side` of `t`, moving toward it.
    ///
    /// Inside an interval the points are `t ± h·r^k` with `h = min(h0, d/2)`,
    /// `d` the distance to the interval's far end. At the accumulation point of
    /// a geometric grid they are the grid points themselves, ending at the
    /// deepest enumerated one. `Both` interleaves right and left points.
    pub fn approach_sequence(
        &self,
        t: f64,
        side: ApproachSide,
        n: usize,
        h0: f64,
        r: f64,
    ) -> Result<Vec<f64>> {
        let t = self.member(t)?;
        let pts = self.approach_points(t, side, n, h0, r)?;
        if pts.len() < n {
            return Err(Error::InsufficientPoints {
                t,
                wanted: n,
                found: pts.len(),
            });
        }
        Ok(pts)
    }

    /// Like [`approach_sequence`](Self::approach_sequence) but returns as many
    /// points as exist up to `n`. `t` must already be snapped.
    pub(crate) fn approach_points(
        &self,
        t: f64,
        side: ApproachSide,
        n: usize,
        h0: f64,
        r: f64,
    ) -> Result<Vec<f64>> {
        if side == ApproachSide::Both {
            let right = self.approach_points(t, ApproachSide::Right, n, h0, r)?;
            let left = self.approach_points(t, ApproachSide::Left, n, h0, r)?;
            return Ok(right
                .into_iter()
                .zip(left)
                .flat_map(|(a, b)| [a, b])
                .take(n)
                .collect());
        }
        if !(h0 > 0.0) || !(r > 0.0 && r < 1.0) {
            return Err(Error::Validation(format!(
                "need h0 > 0 and 0 < r < 1, got h0={h0}, r={r}"
            )));
        }
        if !self.accumulates_at(t, side) {
            return Err(Error::SideNotDense { t, side });
        }
        let dir = if side == ApproachSide::Right {
            1.0
        } else {
            -1.0
        };
        if let Some(span) = self.interval_reach(t, side) {
            let mut h = h0.min(span / 2.0);
            let floor = MIN_RELATIVE_STEP * t.abs().max(1.0);
            let mut out = Vec::with_capacity(n);
            let mut last = t + dir * 2.0 * h;
            while out.len() < n && h >= floor {
                let s = t + dir * h;
                if s == t || (s - last) * dir >= 0.0 {
                    break;
                }
                out.push(s);
                last = s;
                h *= r;
            }
            return Ok(out);
        }
        // Accumulation point of a geometric grid.
        let deepest = self
            .components
            .iter()
            .filter_map(|c| c.as_geo())
            .filter(|g| g.include_zero && t == 0.0 && (g.sign > 0) == (side == ApproachSide::Right))
            .map(|g| g.k_min.min(g.k_max))
            .min();
        let Some(k_floor) = deepest else {
            return Err(Error::SideNotDense { t, side });
        };
        let floor = self
            .components
            .iter()
            .filter_map(|c| c.as_geo())
            .map(|g| g.q.powi(k_floor).min(g.q.powi(g.k_min)))
            .fold(f64::INFINITY, f64::min)
            * 0.999;
        let mut pts = Vec::with_capacity(n);
        let mut cur = t;
        // Walk outward from the deepest point, then reverse so the sequence
        // approaches t.
        let mut probe = dir * floor;
        while pts.len() < n {
            let next = if dir > 0.0 {
                self.sigma_of(self.snap(probe).unwrap_or(probe).max(cur))
            } else {
                self.rho_of(self.snap(probe).unwrap_or(probe).min(cur))
            };
            let next = if pts.is_empty() {
                self.snap_side(probe, dir).unwrap_or(next)
            } else {
                next
            };
            if next == cur || (next - t) * dir <= 0.0 {
                break;
            }
            pts.push(next);
            cur = next;
            probe = next;
        }
        pts.reverse();
        Ok(pts)
    }

    /// First scale point at or beyond `probe` in direction `dir`.
    fn snap_side(&self, probe: f64, dir: f64) -> Option<f64> {
        if let Some(p) = self.snap(probe) {
            return Some(p);
        }
        let s = if dir > 0.0 {
            self.components
                .iter()
                .filter_map(|c| c.next_above(probe, self.tol))
                .fold(f64::INFINITY, f64::min)
        } else {
            self.components
                .iter()
                .filter_map(|c| c.prev_below(probe, self.tol))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        s.is_finite().then_some(s)
    }

    /// Length of the interval stretch starting at `t` on `side`, if an
    /// interval component covers that side.
    fn interval_reach(&self, t: f64, side: ApproachSide) -> Option<f64> {
        self.components
            .iter()
            .filter_map(|c| match *c {
                Component::Interval { lo, hi } => match side {
                    ApproachSide::Right if t >= lo && t < hi => Some(hi - t),
                    ApproachSide::Left if t > lo && t <= hi => Some(t - lo),
                    _ => None,
                },
                _ => None,
            })
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.max(v)))
            })
    }

    /// `n` offsets `h > 0`, decreasing, with both `t + h` and `t - h` in the
    /// scale.
    pub fn symmetric_pairs(&self, t: f64, n: usize, h0: f64, r: f64) -> Result<Vec<f64>> {
        let t = self.member(t)?;
        let hs = self.symmetric_offsets(t, n, h0, r)?;
        if hs.len() < n {
            return Err(Error::InsufficientPoints {
                t,
                wanted: n,
                found: hs.len(),
            });
        }
        Ok(hs)
    }

    pub(crate) fn symmetric_offsets(&self, t: f64, n: usize, h0: f64, r: f64) -> Result<Vec<f64>> {
        let right_dense = self.accumulates_at(t, ApproachSide::Right);
        let left_dense = self.accumulates_at(t, ApproachSide::Left);
        let mirrored = |h: f64| self.contains(t - h) && self.contains(t + h);

        let hs: Vec<f64> = if right_dense && left_dense {
            match (
                self.interval_reach(t, ApproachSide::Right),
                self.interval_reach(t, ApproachSide::Left),
            ) {
                (Some(dr), Some(dl)) => {
                    let mut h = h0.min(dr / 2.0).min(dl / 2.0);
                    let mut out = Vec::with_capacity(n);
                    while out.len() < n && t + h != t && h > 0.0 {
                        out.push(h);
                        h *= r;
                    }
                    out
                }
                (None, _) => self
                    .approach_points(t, ApproachSide::Right, n.max(PAIR_SEARCH_STEPS), h0, r)?
                    .into_iter()
                    .map(|s| s - t)
                    .filter(|h| mirrored(*h))
                    .collect(),
                (_, None) => self
                    .approach_points(t, ApproachSide::Left, n.max(PAIR_SEARCH_STEPS), h0, r)?
                    .into_iter()
                    .map(|s| t - s)
                    .filter(|h| mirrored(*h))
                    .collect(),
            }
        } else {
            // Walk the scattered side outward and keep offsets whose mirror is
            // also in the scale.
            let walk_right = !right_dense;
            let mut found = Vec::new();
            let mut cur = t;
            for _ in 0..PAIR_SEARCH_STEPS.max(n * 8) {
                let next = if walk_right {
                    self.sigma_of(cur)
                } else {
                    self.rho_of(cur)
                };
                if next == cur {
                    break;
                }
                let h = (next - t).abs();
                if mirrored(h) {
                    found.push(h);
                    if found.len() == n {
                        break;
                    }
                }
                cur = next;
            }
            found.reverse();
            found
        };
        let mut hs = hs;
        hs.truncate(n);
        if hs.is_empty() {
            return Err(Error::NoSymmetricNeighborhood { t });
        }
        Ok(hs)
    }

    /// Interval pieces of `[a, b] ∩ T` with positive length.
    pub(crate) fn dense_pieces(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        self.components
            .iter()
            .filter_map(|c| match *c {
                Component::Interval { lo, hi } => {
                    let (x, y) = (lo.max(a), hi.min(b));
                    (y > x).then_some((x, y))
                }
                _ => None,
            })
            .collect()
    }

    /// Discrete points and interval endpoints in `[a, b]`, ascending and
    /// deduplicated. Accumulating geometric grids are enumerated down to
    /// `floor` when given, else to their `k_min`.
    pub(crate) fn marked_points(&self, a: f64, b: f64, floor: Option<f64>) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .components
            .iter()
            .flat_map(|c| c.discrete_points_in(a, b, self.tol, floor))
            .filter(|p| *p >= a && *p <= b)
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|x, y| (*x - *y).abs() <= self.tol * x.abs().max(y.abs()));
        pts
    }

    /// Every enumerable member of `[a, b]`: discrete points plus
    /// `per_unit` evenly spaced samples per unit length of interval pieces.
    pub fn sample_points(&self, a: f64, b: f64, per_unit: usize) -> Vec<f64> {
        let mut pts = self.marked_points(a, b, None);
        for (x, y) in self.dense_pieces(a, b) {
            let count = ((y - x) * per_unit as f64).ceil().max(1.0) as usize;
            pts.extend((0..=count).map(|i| x + (y - x) * i as f64 / count as f64));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|x, y| (*x - *y).abs() <= self.tol * x.abs().max(y.abs()));
        pts
    }
}

fn normalize(components: Vec<Component>, tol: f64) -> Vec<Component> {
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut loose: Vec<f64> = Vec::new();
    let mut grids: Vec<Component> = Vec::new();
    for c in components {
        match c {
            Component::Interval { lo, hi } if hi - lo <= tol => loose.push(lo),
            Component::Interval { lo, hi } => intervals.push((lo, hi)),
            Component::Points { points } => loose.extend(points),
            Component::Grid { start, stop, step }
                if component::grid_last(start, stop, step) == 0 =>
            {
                loose.push(start)
            }
            other => grids.push(other),
        }
    }

    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in intervals {
        match merged.last_mut() {
            Some(last) if lo <= last.1 + tol => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let covered = |x: f64, y: f64| {
        merged
            .iter()
            .any(|&(lo, hi)| x >= lo - tol && y <= hi + tol)
    };

    grids.retain(|g| !covered(g.infimum(), g.supremum()));
    let mut unique_grids: Vec<Component> = Vec::new();
    for g in grids {
        if !unique_grids.contains(&g) {
            unique_grids.push(g);
        }
    }

    loose.sort_by(f64::total_cmp);
    loose.dedup_by(|x, y| (*x - *y).abs() <= tol);
    loose.retain(|&p| !covered(p, p) && !unique_grids.iter().any(|g| g.snap(p, tol).is_some()));

    let mut out: Vec<Component> = merged
        .into_iter()
        .map(|(lo, hi)| Component::Interval { lo, hi })
        .chain(unique_grids)
        .collect();
    if !loose.is_empty() {
        out.push(Component::Points { points: loose });
    }
    out.sort_by(|x, y| {
        x.infimum()
            .total_cmp(&y.infimum())
            .then(x.supremum().total_cmp(&y.supremum()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> TimeScale {
        TimeScale::grid(-100.0, 100.0, 1.0).unwrap()
    }

    fn unit() -> TimeScale {
        TimeScale::interval(0.0, 1.0).unwrap()
    }

    fn interval_plus_two() -> TimeScale {
        TimeScale::new(vec![
            Component::Interval { lo: 0.0, hi: 1.0 },
            Component::Points { points: vec![2.0] },
        ])
        .unwrap()
    }

    #[test]
    fn contains_examples() {
        assert!(z().contains(3.0));
        assert!(!unit().contains(1.5));
        let q = TimeScale::qgrid(2.0, -4, 4, true).unwrap();
        assert!(q.contains(0.0));
        assert!(q.contains(0.0625));
        assert!(!q.contains(0.3));
    }

    #[test]
    fn contains_snaps_decimal_roundoff() {
        let g = TimeScale::grid(0.0, 1.0, 0.1).unwrap();
        assert!(g.contains(0.1 + 0.2));
        assert_eq!(g.snap(0.1 + 0.2), Some(3.0 * 0.1));
        assert!(!g.contains(0.35));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(z().sigma(3.0).unwrap(), 4.0);
        assert_eq!(unit().sigma(0.5).unwrap(), 0.5);
        assert_eq!(interval_plus_two().sigma(1.0).unwrap(), 2.0);
        assert_eq!(z().sigma(100.0).unwrap(), 100.0);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(z().rho(3.0).unwrap(), 2.0);
        assert_eq!(unit().rho(0.5).unwrap(), 0.5);
        let q = TimeScale::qgrid(2.0, 0, 3, false).unwrap();
        assert_eq!(q.rho(4.0).unwrap(), 2.0);
        assert_eq!(q.rho(1.0).unwrap(), 1.0);
    }

    #[test]
    fn jumps_reject_non_members() {
        assert_eq!(unit().sigma(2.0), Err(Error::PointNotInScale { t: 2.0 }));
        assert_eq!(z().rho(0.5), Err(Error::PointNotInScale { t: 0.5 }));
        assert!(z().classify(0.5).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = z().classify(0.0).unwrap();
        assert!(c.isolated());
        assert!(unit().classify(0.3).unwrap().dense());
        let c = interval_plus_two().classify(1.0).unwrap();
        assert_eq!(c.left, Density::Dense);
        assert_eq!(c.right, Density::Scattered);
    }

    #[test]
    fn membership_kind_examples() {
        let p = TimeScale::points(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(!p.membership_kind(2.0).unwrap().in_t_kappa_upper);
        assert!(p.membership_kind(2.0).unwrap().in_t_kappa_lower);
        assert!(unit().membership_kind(1.0).unwrap().in_t_kappa_upper);
        assert!(!p.membership_kind(0.0).unwrap().in_t_kappa_lower);
        assert!(!p.membership_kind(0.0).unwrap().in_t_kappa_both);
        assert!(p.membership_kind(1.0).unwrap().in_t_kappa_both);
    }

    #[test]
    fn approach_sequence_in_interval() {
        let s = unit()
            .approach_sequence(0.5, ApproachSide::Right, 3, 0.1, 0.5)
            .unwrap();
        assert_eq!(s.len(), 3);
        for (got, want) in s.iter().zip([0.6, 0.55, 0.525]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        let l = unit()
            .approach_sequence(0.5, ApproachSide::Left, 2, 0.1, 0.5)
            .unwrap();
        assert!((l[0] - 0.4).abs() < 1e-15 && (l[1] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn approach_sequence_at_q_accumulation() {
        let q = TimeScale::qgrid(2.0, -40, 0, true).unwrap();
        let s = q
            .approach_sequence(0.0, ApproachSide::Right, 3, 0.1, 0.5)
            .unwrap();
        assert_eq!(s, vec![2f64.powi(-38), 2f64.powi(-39), 2f64.powi(-40)]);
    }

    #[test]
    fn approach_sequence_errors() {
        assert_eq!(
            z().approach_sequence(3.0, ApproachSide::Right, 3, 0.1, 0.5),
            Err(Error::SideNotDense {
                t: 3.0,
                side: ApproachSide::Right
            })
        );
        // left end of an interval has nothing to its left
        assert!(matches!(
            unit().approach_sequence(0.0, ApproachSide::Left, 3, 0.1, 0.5),
            Err(Error::SideNotDense { .. })
        ));
        let q = TimeScale::qgrid(2.0, -2, 0, true).unwrap();
        assert!(matches!(
            q.approach_sequence(0.0, ApproachSide::Right, 10, 0.1, 0.5),
            Err(Error::InsufficientPoints { found: 3, .. })
        ));
    }

    #[test]
    fn symmetric_pairs_examples() {
        let h = unit().symmetric_pairs(0.5, 3, 0.1, 0.5).unwrap();
        for (got, want) in h.iter().zip([0.1, 0.05, 0.025]) {
            assert!((got - want).abs() < 1e-15);
        }
        let hz = TimeScale::grid(-10.0, 10.0, 0.5).unwrap();
        assert_eq!(hz.symmetric_pairs(2.0, 1, 0.1, 0.5).unwrap(), vec![0.5]);
        assert_eq!(
            hz.symmetric_pairs(2.0, 3, 0.1, 0.5).unwrap(),
            vec![1.5, 1.0, 0.5]
        );
        let gap = TimeScale::new(vec![
            Component::Interval { lo: 0.0, hi: 1.0 },
            Component::Points { points: vec![3.0] },
        ])
        .unwrap();
        assert_eq!(
            gap.symmetric_pairs(1.0, 1, 0.1, 0.5),
            Err(Error::NoSymmetricNeighborhood { t: 1.0 })
        );
    }

    #[test]
    fn symmetric_pairs_across_two_q_grids() {
        let both = TimeScale::new(vec![
            Component::GeometricGrid {
                q: 2.0,
                k_min: -30,
                k_max: 0,
                include_zero: true,
                sign: 1,
            },
            Component::GeometricGrid {
                q: 2.0,
                k_min: -30,
                k_max: 0,
                include_zero: true,
                sign: -1,
            },
        ])
        .unwrap();
        assert!(both.classify(0.0).unwrap().dense());
        let h = both.symmetric_pairs(0.0, 5, 0.1, 0.5).unwrap();
        assert_eq!(h.len(), 5);
        assert!(h.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn normalization_merges_and_drops() {
        let s = TimeScale::new(vec![
            Component::Interval { lo: 1.0, hi: 2.0 },
            Component::Interval { lo: 0.0, hi: 1.0 },
            Component::Points {
                points: vec![0.5, 3.0, 3.0],
            },
            Component::Grid {
                start: 0.0,
                stop: 2.0,
                step: 0.5,
            },
        ])
        .unwrap();
        assert_eq!(
            s.components(),
            &[
                Component::Interval { lo: 0.0, hi: 2.0 },
                Component::Points { points: vec![3.0] }
            ]
        );
        let again = TimeScale::new(s.components().to_vec()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn json_round_trip() {
        let s = interval_plus_two();
        let json = s.to_json();
        assert_eq!(
            json,
            r#"{"components":[{"kind":"interval","lo":0.0,"hi":1.0},{"kind":"points","points":[2.0]}]}"#
        );
        assert_eq!(TimeScale::from_json(&json).unwrap(), s);
        assert!(TimeScale::from_json(r#"{"components":[]}"#).is_err());
        assert!(TimeScale::from_json(
            r#"{"components":[{"kind":"grid","start":0,"stop":1,"step":-1}]}"#
        )
        .is_err());
    }

    #[test]
    fn sample_points_cover_intervals_and_points() {
        let s = interval_plus_two();
        let pts = s.sample_points(0.0, 2.0, 4);
        assert_eq!(pts, vec![0.0, 0.25, 0.5, 0.75, 1.0, 2.0]);
        assert!(s.sample_points(1.5, 1.9, 4).is_empty());
    }
}
