//! Exact fractional orders and the limit estimator shared by every
//! dense-point derivative.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timescale::ApproachSide;

/// A rational order `p/q` in lowest terms with `0 < p/q <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Order {
    p: u64,
    q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderClass {
    /// `1/q` with `q` odd, including `1/1`. Two-sided limits and negative
    /// bases are allowed.
    OddReciprocal,
    General,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Order {
    pub const ONE: Order = Order { p: 1, q: 1 };

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidOrder(format!(
                "{p}/{q}: order must be positive"
            )));
        }
        if p > q {
            return Err(Error::InvalidOrder(format!(
                "{p}/{q}: order must not exceed 1"
            )));
        }
        let g = gcd(p, q);
        Ok(Order { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn is_one(&self) -> bool {
        self.p == self.q
    }

    pub fn class(&self) -> OrderClass {
        if self.p == 1 && self.q % 2 == 1 {
            OrderClass::OddReciprocal
        } else {
            OrderClass::General
        }
    }

    /// `1 - self`, or `None` when that is zero.
    pub fn complement(&self) -> Option<Order> {
        (!self.is_one()).then(|| Order::new(self.q - self.p, self.q).expect("0 < q-p < q"))
    }
}

pub fn classify_order(a: Order) -> OrderClass {
    a.class()
}

/// `x^a` extended to negative `x` as an odd root when `a` is odd-reciprocal.
pub fn signed_pow(x: f64, a: Order) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if a.is_one() {
        return Ok(x);
    }
    match a.class() {
        OrderClass::OddReciprocal => {
            let m = if a.q == 3 {
                x.abs().cbrt()
            } else {
                x.abs().powf(1.0 / a.q as f64)
            };
            Ok(m.copysign(x))
        }
        OrderClass::General if x < 0.0 => Err(Error::NegativeBaseForGeneralOrder {
            x,
            order: a.to_string(),
        }),
        OrderClass::General if a.p == 1 && a.q == 2 => Ok(x.sqrt()),
        OrderClass::General => Ok(x.powf(a.value())),
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Parse `p/q` or an exact decimal such as `0.25` into lowest terms.
fn parse_fraction(s: &str) -> Result<(u64, u64)> {
    let s = s.trim();
    let bad = || Error::InvalidOrder(format!("cannot parse order {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        return Ok((p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_v: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let num = int
        .checked_mul(den)
        .and_then(|v| v.checked_add(frac_v))
        .ok_or_else(bad)?;
    Ok((num, den))
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = parse_fraction(s)?;
        Order::new(p, q)
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An integral order `beta` in `[0, 1]`; zero is kept apart because the
/// derivative machinery needs a strictly positive order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralOrder {
    Zero,
    Frac(Order),
}

impl IntegralOrder {
    pub fn value(&self) -> f64 {
        match self {
            IntegralOrder::Zero => 0.0,
            IntegralOrder::Frac(o) => o.value(),
        }
    }

    /// Order of the derivative applied to the antiderivative: `1 - beta`.
    pub fn derivative_order(&self) -> Option<Order> {
        match self {
            IntegralOrder::Zero => Some(Order::ONE),
            IntegralOrder::Frac(o) => o.complement(),
        }
    }
}

impl From<Order> for IntegralOrder {
    fn from(o: Order) -> Self {
        IntegralOrder::Frac(o)
    }
}

impl fmt::Display for IntegralOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralOrder::Zero => f.write_str("0"),
            IntegralOrder::Frac(o) => o.fmt(f),
        }
    }
}

impl FromStr for IntegralOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_fraction(s)? {
            (0, q) if q > 0 => Ok(IntegralOrder::Zero),
            (p, q) => Order::new(p, q).map(IntegralOrder::Frac),
        }
    }
}

impl Serialize for IntegralOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Acceleration {
    /// Stop when two successive raw quotients agree.
    None,
    /// Aitken's delta-squared transform of the quotient sequence.
    Aitken,
    /// Extrapolation to zero step assuming the quotient expands in powers
    /// `h^(j - α)`, `j = 1, 2, ...` (plain integer powers when no order is
    /// known).
    Richardson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConfig {
    pub h0: f64,
    pub ratio: f64,
    pub tol: f64,
    pub max_samples: usize,
    pub accel: Acceleration,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            h0: 1e-2,
            ratio: 0.5,
            tol: 1e-8,
            max_samples: 40,
            accel: Acceleration::Aitken,
        }
    }
}

impl LimitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return Err(Error::Validation(format!(
                "h0 must be > 0, got {}",
                self.h0
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Validation(format!(
                "ratio must be in (0,1), got {}",
                self.ratio
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Validation(format!(
                "tol must be > 0, got {}",
                self.tol
            )));
        }
        if self.max_samples < 3 {
            return Err(Error::Validation(format!(
                "max_samples must be >= 3, got {}",
                self.max_samples
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitResult {
    pub value: f64,
    pub err_est: f64,
    pub converged: bool,
    pub side: ApproachSide,
    pub samples_used: usize,
}

/// Estimate the limit of a sequence of quotients taken at shrinking steps.
///
/// Samples are consumed lazily up to `cfg.max_samples`. With
/// [`Acceleration::None`] the estimate converges once two successive
/// quotients differ by at most `tol`. With [`Acceleration::Aitken`] the same
/// rule is applied to the Aitken-transformed sequence, and a raw-sequence
/// match is still accepted. A transformed value is only trusted when the
/// differences shrink (`|d2 / d1| < 1`). [`Acceleration::Richardson`]
/// assumes steps `h0 * ratio^k` and integer error powers; use
/// [`estimate_limit_at_steps`] when the steps and the order are known.
pub fn estimate_limit<I>(quotients: I, cfg: &LimitConfig, side: ApproachSide) -> Result<LimitResult>
where
    I: IntoIterator<Item = f64>,
{
    let steps = (0..).map(|k| cfg.h0 * cfg.ratio.powi(k));
    Estimator::new(cfg, side, integer_powers()).run(steps.zip(quotients))
}

/// Like [`estimate_limit`], with each quotient paired with its step `h > 0`.
/// Richardson extrapolation eliminates the powers `h^(j - α)` for the given
/// order.
pub fn estimate_limit_at_steps<I>(
    samples: I,
    cfg: &LimitConfig,
    side: ApproachSide,
    order: Order,
) -> Result<LimitResult>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let a = order.value();
    let powers: Vec<f64> = (1..=RICHARDSON_TERMS + 1)
        .map(|j| j as f64 - a)
        .filter(|e| *e > 1e-12)
        .take(RICHARDSON_TERMS)
        .collect();
    Estimator::new(cfg, side, powers).run(samples)
}

/// Number of error terms removed by Richardson extrapolation.
const RICHARDSON_TERMS: usize = 4;

fn integer_powers() -> Vec<f64> {
    (1..=RICHARDSON_TERMS).map(|j| j as f64).collect()
}

struct Estimator<'a> {
    cfg: &'a LimitConfig,
    best: LimitResult,
    powers: Vec<f64>,
    hs: Vec<f64>,
    raw: Vec<f64>,
    accel: Vec<Option<f64>>,
}

impl<'a> Estimator<'a> {
    fn new(cfg: &'a LimitConfig, side: ApproachSide, powers: Vec<f64>) -> Self {
        Estimator {
            cfg,
            best: LimitResult {
                value: f64::NAN,
                err_est: f64::INFINITY,
                converged: false,
                side,
                samples_used: 0,
            },
            powers,
            hs: Vec::with_capacity(cfg.max_samples),
            raw: Vec::with_capacity(cfg.max_samples),
            accel: Vec::new(),
        }
    }

    fn run<I: IntoIterator<Item = (f64, f64)>>(mut self, samples: I) -> Result<LimitResult> {
        for (index, (h, q)) in samples.into_iter().take(self.cfg.max_samples).enumerate() {
            if !q.is_finite() {
                return Err(Error::NonFiniteSample { index });
            }
            if self.push(h, q) {
                self.best.converged = true;
                break;
            }
        }
        Ok(self.best)
    }

    /// Record a sample; true once converged.
    fn push(&mut self, h: f64, q: f64) -> bool {
        let tol = self.cfg.tol;
        self.hs.push(h);
        self.raw.push(q);
        let raw = &self.raw;
        let n = raw.len();
        self.best.value = q;
        self.best.samples_used = n;
        if n >= 2 {
            let d = (raw[n - 1] - raw[n - 2]).abs();
            if d <= self.best.err_est || self.best.err_est.is_infinite() {
                self.best.err_est = d;
            }
            if d <= tol && n >= 3 {
                self.best.err_est = d;
                return true;
            }
        }
        let next = match self.cfg.accel {
            Acceleration::None => return false,
            Acceleration::Aitken if n >= 3 => aitken(raw[n - 3], raw[n - 2], raw[n - 1]),
            Acceleration::Aitken => return false,
            Acceleration::Richardson if n >= 2 => richardson(&self.hs, raw, &self.powers),
            Acceleration::Richardson => return false,
        };
        self.accel.push(next);
        if let [.., Some(p), Some(c)] = self.accel[..] {
            let d = (c - p).abs();
            if d <= tol && n >= 3 {
                self.best.value = c;
                self.best.err_est = d;
                return true;
            }
        }
        false
    }
}

fn aitken(x0: f64, x1: f64, x2: f64) -> Option<f64> {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    if d2 == 0.0 {
        Some(x2)
    } else if (d2 / d1).abs() < 1.0 {
        let v = x2 - d2 * d2 / (d2 - d1);
        v.is_finite().then_some(v)
    } else {
        None
    }
}

/// Fit `q = L + sum c_i h^e_i` through the latest samples and return `L`.
fn richardson(hs: &[f64], qs: &[f64], powers: &[f64]) -> Option<f64> {
    let terms = powers.len().min(qs.len() - 1);
    let m = terms + 1;
    let (hs, qs) = (&hs[hs.len() - m..], &qs[qs.len() - m..]);
    let scale = hs.iter().fold(0.0f64, |a, h| a.max(h.abs()));
    if !(scale > 0.0) {
        return None;
    }
    let mut a: Vec<Vec<f64>> = hs
        .iter()
        .zip(qs)
        .map(|(h, q)| {
            let x = h.abs() / scale;
            let mut row = vec![1.0];
            row.extend(powers[..terms].iter().map(|e| x.powf(*e)));
            row.push(*q);
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..m {
            if r != col {
                let k = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= k * a[col][c];
                }
            }
        }
    }
    let v = a[0][m] / a[0][0];
    v.is_finite().then_some(v)
}
