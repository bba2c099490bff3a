//! Randomized property suites for the derivative and integral rules.
//!
//! Each suite draws random polynomial or rational functions, a random scale
//! from a fixed family of hybrid scales, and random points, then compares
//! both sides of an identity. Residuals are scaled:
//! `|lhs - rhs| / max(1, |lhs|, |rhs|)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::deriv::{
    delta_frac, nabla_frac, order_lowering_check, symmetric_frac, symmetric_via_sides, DerivResult,
    Path,
};
use crate::error::{Error, Result};
use crate::expr::{parse_scale, Expr};
use crate::function::FnOnScale;
use crate::integral::{
    frac_integral_anchored, symmetric_frac_integral, IntegralKind, QuadratureConfig,
};
use crate::order::{Acceleration, IntegralOrder, LimitConfig, Order};
use crate::timescale::TimeScale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Linearity,
    Product,
    Quotient,
    Reconstruction,
    IntegralLaws,
    SymmetricRelation,
    OrderLowering,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Linearity,
        Suite::Product,
        Suite::Quotient,
        Suite::Reconstruction,
        Suite::IntegralLaws,
        Suite::SymmetricRelation,
        Suite::OrderLowering,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Linearity => "linearity",
            Suite::Product => "product",
            Suite::Quotient => "quotient",
            Suite::Reconstruction => "reconstruction",
            Suite::IntegralLaws => "integral-laws",
            Suite::SymmetricRelation => "symmetric-relation",
            Suite::OrderLowering => "order-lowering",
        }
    }

    /// Largest scaled residual a trial may have.
    pub fn tolerance(&self) -> f64 {
        match self {
            Suite::Reconstruction => 1e-12,
            Suite::IntegralLaws => 1e-9,
            Suite::SymmetricRelation => 1e-6,
            _ => 1e-8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown suite {s:?}")))
    }
}

/// One identity that did not hold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub rule: String,
    pub scale: String,
    pub f: String,
    pub t: f64,
    pub order: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub seed: u64,
    pub trials: usize,
    pub limit: LimitConfig,
    pub quad: QuadratureConfig,
}

impl CheckConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        CheckConfig {
            seed,
            trials,
            limit: suite_limit_config(),
            quad: QuadratureConfig::default(),
        }
    }
}

/// Limit settings used by the suites: tighter than the library default so
/// that dense-point estimates sit well inside the suite tolerances.
pub fn suite_limit_config() -> LimitConfig {
    LimitConfig {
        tol: 1e-9,
        max_samples: 60,
        accel: Acceleration::Richardson,
        ..LimitConfig::default()
    }
}

pub fn scaled_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

/// Descriptions of the scales the suites draw from.
pub const SCALES: [&str; 8] = [
    "grid(-5, 5, 1)",
    "grid(-3, 3, 0.5)",
    "qgrid(2, -6, 4)",
    "union(interval(0, 1), points(1.5, 2, 3), grid(4, 6, 0.5))",
    "points(-2, -1.25, 0, 0.5, 1.75, 3)",
    "interval(-1, 2)",
    "union(qgrid(2, -20, 1, zero), interval(3, 4))",
    "union(grid(-2, 0, 0.25), interval(0.5, 1.5))",
];

pub const ORDERS: [&str; 6] = ["1/4", "1/3", "1/2", "3/5", "3/4", "1"];

struct Ctx<'a> {
    rng: ChaCha8Rng,
    scales: Vec<(String, TimeScale)>,
    cfg: &'a CheckConfig,
    report: SuiteReport,
}

/// A random polynomial of degree 0..=3 with coefficients in [-2, 2].
pub fn random_polynomial<R: Rng>(rng: &mut R) -> Expr {
    let degree = rng.gen_range(0..=3);
    let coeff = |rng: &mut R| (rng.gen_range(-2.0..2.0f64) * 8.0).round() / 8.0;
    let mut e = Expr::Const(coeff(rng));
    for _ in 0..degree {
        e = e * Expr::Var + Expr::Const(coeff(rng));
    }
    e
}

/// A random function without zeros: `c + (t - s)^2` with `c >= 0.5`.
pub fn random_positive<R: Rng>(rng: &mut R) -> Expr {
    let c = rng.gen_range(0.5..2.0f64);
    let s = rng.gen_range(-1.0..1.0f64);
    Expr::Const(c)
        + Expr::Pow(
            Box::new(Expr::Var - Expr::Const(s)),
            Box::new(Expr::Const(2.0)),
        )
}

fn random_rational<R: Rng>(rng: &mut R) -> Expr {
    if rng.gen_bool(0.5) {
        random_polynomial(rng)
    } else {
        random_polynomial(rng) / random_positive(rng)
    }
}

impl Ctx<'_> {
    fn scale(&mut self) -> (String, TimeScale) {
        self.scales.choose(&mut self.rng).expect("scales").clone()
    }

    fn order(&mut self) -> Order {
        ORDERS
            .choose(&mut self.rng)
            .expect("orders")
            .parse()
            .expect("valid order")
    }

    /// A random member of `ts` from its enumerable points, preferring the
    /// interior.
    fn point(&mut self, ts: &TimeScale, keep: impl Fn(f64) -> bool) -> Option<f64> {
        let (lo, hi) = (ts.min(), ts.max());
        let pts: Vec<f64> = ts
            .sample_points(lo, hi, 7)
            .into_iter()
            .filter(|t| keep(*t))
            .collect();
        pts.choose(&mut self.rng).copied()
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        trial: usize,
        rule: &str,
        scale: &str,
        f: &Expr,
        t: f64,
        order: &str,
        lhs: f64,
        rhs: f64,
    ) {
        let residual = scaled_residual(lhs, rhs);
        self.report.checks += 1;
        if residual > self.report.max_residual || residual.is_nan() {
            self.report.max_residual = residual;
        }
        if !(residual <= self.report.tolerance) {
            self.report.failures.push(Failure {
                trial,
                rule: rule.into(),
                scale: scale.into(),
                f: f.to_string(),
                t,
                order: order.into(),
                lhs,
                rhs,
                residual,
            });
        }
    }

    fn fail_eval(
        &mut self,
        trial: usize,
        rule: &str,
        scale: &str,
        f: &Expr,
        t: f64,
        order: &str,
        e: &Error,
    ) {
        self.report.checks += 1;
        self.report.max_residual = f64::INFINITY;
        self.report.failures.push(Failure {
            trial,
            rule: format!("{rule}: {}", e.code()),
            scale: scale.into(),
            f: f.to_string(),
            t,
            order: order.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            residual: f64::INFINITY,
        });
    }
}

type Deriv = fn(&FnOnScale, f64, Order, &LimitConfig) -> Result<DerivResult>;

const DERIVS: [(&str, Deriv); 3] = [
    ("nabla", nabla_frac),
    ("delta", delta_frac),
    ("symmetric", symmetric_frac),
];

/// Pick `(f, g, t, order)` and a derivative kind where `f` and `g` are both
/// differentiable; retries a bounded number of times.
fn draw_pair(
    ctx: &mut Ctx,
    need_positive_g: bool,
) -> Option<(String, TimeScale, Expr, Expr, f64, Order, usize)> {
    for _ in 0..50 {
        let (name, ts) = ctx.scale();
        let f = random_rational(&mut ctx.rng);
        let g = if need_positive_g {
            random_positive(&mut ctx.rng)
        } else {
            random_rational(&mut ctx.rng)
        };
        let a = ctx.order();
        let kind = ctx.rng.gen_range(0..DERIVS.len());
        let Some(t) = ctx.point(&ts, |_| true) else {
            continue;
        };
        let d = DERIVS[kind].1;
        let fs = FnOnScale::from_expr(ts.clone(), f.clone());
        let gs = FnOnScale::from_expr(ts.clone(), g.clone());
        if d(&fs, t, a, &ctx.cfg.limit).is_ok() && d(&gs, t, a, &ctx.cfg.limit).is_ok() {
            return Some((name, ts, f, g, t, a, kind));
        }
    }
    None
}

fn run_rules(ctx: &mut Ctx, suite: Suite) {
    for trial in 0..ctx.cfg.trials {
        let Some((name, ts, f, g, t, a, kind)) = draw_pair(ctx, suite == Suite::Quotient) else {
            continue;
        };
        let (kname, d) = DERIVS[kind];
        let cfg = ctx.cfg.limit;
        let on = |e: &Expr| FnOnScale::from_expr(ts.clone(), e.clone());
        let der = |e: &Expr| d(&on(e), t, a, &cfg).map(|r| r.value);
        let ord = a.to_string();
        let sigma = ts.sigma(t).expect("member");
        let rho = ts.rho(t).expect("member");
        let fd = der(&f).expect("drawn differentiable");
        let gd = der(&g).expect("drawn differentiable");
        let (fv, gv) = (f.eval(t).unwrap(), g.eval(t).unwrap());
        let (f_rho, g_rho) = (f.eval(rho).unwrap(), g.eval(rho).unwrap());
        let (f_sig, g_sig) = (f.eval(sigma).unwrap(), g.eval(sigma).unwrap());
        let check = |ctx: &mut Ctx, rule: &str, e: Expr, rhs: f64| match der(&e) {
            Ok(lhs) => ctx.record(
                trial,
                &format!("{kname} {rule}"),
                &name,
                &e,
                t,
                &ord,
                lhs,
                rhs,
            ),
            Err(err) => ctx.fail_eval(trial, &format!("{kname} {rule}"), &name, &e, t, &ord, &err),
        };
        match suite {
            Suite::Linearity => {
                let lambda = (ctx.rng.gen_range(-3.0..3.0f64) * 4.0).round() / 4.0;
                check(ctx, "sum", f.clone() + g.clone(), fd + gd);
                check(ctx, "scalar", Expr::Const(lambda) * f.clone(), lambda * fd);
            }
            Suite::Product => {
                let fg = f.clone() * g.clone();
                match kname {
                    "nabla" => {
                        check(
                            ctx,
                            "product f'g + f^rho g'",
                            fg.clone(),
                            fd * gv + f_rho * gd,
                        );
                        check(ctx, "product f'g^rho + f g'", fg, fd * g_rho + fv * gd);
                    }
                    "delta" => {
                        check(
                            ctx,
                            "product f'g + f^sigma g'",
                            fg.clone(),
                            fd * gv + f_sig * gd,
                        );
                        check(ctx, "product f'g^sigma + f g'", fg, fd * g_sig + fv * gd);
                    }
                    _ => {
                        check(
                            ctx,
                            "product f'g^sigma + f^rho g'",
                            fg.clone(),
                            fd * g_sig + f_rho * gd,
                        );
                        check(
                            ctx,
                            "product f'g^rho + f^sigma g'",
                            fg,
                            fd * g_rho + f_sig * gd,
                        );
                    }
                }
            }
            Suite::Quotient => {
                let recip = Expr::Const(1.0) / g.clone();
                let quot = f.clone() / g.clone();
                match kname {
                    "nabla" => {
                        check(ctx, "reciprocal", recip, -gd / (g_rho * gv));
                        check(ctx, "quotient", quot, (fd * gv - fv * gd) / (g_rho * gv));
                    }
                    "delta" => {
                        check(ctx, "reciprocal", recip, -gd / (gv * g_sig));
                        check(ctx, "quotient", quot, (fd * gv - fv * gd) / (gv * g_sig));
                    }
                    _ => {
                        check(ctx, "reciprocal", recip, -gd / (g_sig * g_rho));
                        check(
                            ctx,
                            "quotient",
                            quot,
                            (fd * g_rho - f_rho * gd) / (g_sig * g_rho),
                        );
                    }
                }
            }
            _ => unreachable!("rule suites only"),
        }
    }
}

fn run_reconstruction(ctx: &mut Ctx) {
    for trial in 0..ctx.cfg.trials {
        let (name, ts) = ctx.scale();
        let f = random_rational(&mut ctx.rng);
        let a = ctx.order();
        let Some(t) = ctx.point(&ts, |_| true) else {
            continue;
        };
        let fs = FnOnScale::from_expr(ts.clone(), f.clone());
        let ord = a.to_string();
        let (sigma, rho) = (ts.sigma(t).unwrap(), ts.rho(t).unwrap());
        if let Ok(d) = nabla_frac(&fs, t, a, &ctx.cfg.limit) {
            let rhs = f.eval(rho).unwrap() + (t - rho).powf(a.value()) * d.value;
            ctx.record(
                trial,
                "nabla reconstruction",
                &name,
                &f,
                t,
                &ord,
                f.eval(t).unwrap(),
                rhs,
            );
        }
        if let Ok(d) = delta_frac(&fs, t, a, &ctx.cfg.limit) {
            let rhs = f.eval(t).unwrap() + (sigma - t).powf(a.value()) * d.value;
            ctx.record(
                trial,
                "delta reconstruction",
                &name,
                &f,
                t,
                &ord,
                f.eval(sigma).unwrap(),
                rhs,
            );
        }
        if let Ok(d) = symmetric_frac(&fs, t, a, &ctx.cfg.limit) {
            let rhs = f.eval(rho).unwrap() + (sigma - rho).powf(a.value()) * d.value;
            ctx.record(
                trial,
                "symmetric reconstruction",
                &name,
                &f,
                t,
                &ord,
                f.eval(sigma).unwrap(),
                rhs,
            );
        }
    }
}

fn run_symmetric_relation(ctx: &mut Ctx) {
    for trial in 0..ctx.cfg.trials {
        let (name, ts) = ctx.scale();
        let f = random_rational(&mut ctx.rng);
        let a = ctx.order();
        let Some(t) = ctx.point(&ts, |_| true) else {
            continue;
        };
        let fs = FnOnScale::from_expr(ts.clone(), f.clone());
        let (Ok(direct), Ok(sides)) = (
            symmetric_frac(&fs, t, a, &ctx.cfg.limit),
            symmetric_via_sides(&fs, t, a, &ctx.cfg.limit),
        ) else {
            continue;
        };
        let rule = if direct.path == Path::ExactScattered {
            "symmetric relation (scattered)"
        } else {
            "symmetric relation (dense)"
        };
        ctx.record(
            trial,
            rule,
            &name,
            &f,
            t,
            &a.to_string(),
            direct.value,
            sides.value,
        );
    }
}

fn run_order_lowering(ctx: &mut Ctx) {
    for trial in 0..ctx.cfg.trials {
        let (name, ts) = ctx.scale();
        let f = random_rational(&mut ctx.rng);
        let (mut a, mut b) = (ctx.order(), ctx.order());
        if a.value() > b.value() {
            std::mem::swap(&mut a, &mut b);
        }
        let Some(t) = ctx.point(&ts, |_| true) else {
            continue;
        };
        let fs = FnOnScale::from_expr(ts.clone(), f.clone());
        let holds = order_lowering_check(&fs, t, a, b, &ctx.cfg.limit);
        ctx.record(
            trial,
            "order lowering",
            &name,
            &f,
            t,
            &format!("{a} <= {b}"),
            if holds { 1.0 } else { 0.0 },
            1.0,
        );
    }
}

const BETAS: [&str; 6] = ["0", "1/4", "1/3", "1/2", "2/3", "1"];

fn run_integral_laws(ctx: &mut Ctx) {
    let (cfg, qc) = (ctx.cfg.limit, ctx.cfg.quad);
    for trial in 0..ctx.cfg.trials {
        let (name, ts) = ctx.scale();
        let f = random_rational(&mut ctx.rng);
        let g = random_rational(&mut ctx.rng);
        let beta: IntegralOrder = BETAS.choose(&mut ctx.rng).unwrap().parse().unwrap();
        let kind = if ctx.rng.gen_bool(0.5) {
            IntegralKind::Nabla
        } else {
            IntegralKind::Delta
        };
        let both_kappa = |t: f64| {
            ts.membership_kind(t)
                .map(|m| m.in_t_kappa_both)
                .unwrap_or(false)
        };
        let (Some(a), Some(b), Some(c), Some(t0)) = (
            ctx.point(&ts, both_kappa),
            ctx.point(&ts, both_kappa),
            ctx.point(&ts, both_kappa),
            ctx.point(&ts, |_| true),
        ) else {
            continue;
        };
        let ord = beta.to_string();
        let on = |e: &Expr| FnOnScale::from_expr(ts.clone(), e.clone());
        let lambda = (ctx.rng.gen_range(-3.0..3.0f64) * 4.0).round() / 4.0;
        let integ = |e: &Expr, x: f64, y: f64, anchor: f64| {
            frac_integral_anchored(&on(e), x, y, beta, kind, anchor, &cfg, &qc).map(|r| r.value)
        };
        let sym = |e: &Expr, x: f64, y: f64| {
            symmetric_frac_integral(&on(e), x, y, beta, &cfg, &qc).map(|r| r.value)
        };
        let kname = match kind {
            IntegralKind::Nabla => "nabla",
            IntegralKind::Delta => "delta",
        };

        let mut pairs: Vec<(String, Result<(f64, f64)>)> = Vec::new();
        let combine = |l: Result<f64>, r: Result<f64>| -> Result<(f64, f64)> { Ok((l?, r?)) };
        let fg = f.clone() + g.clone();
        let lf = Expr::Const(lambda) * f.clone();
        pairs.push((
            format!("{kname} linearity"),
            combine(
                integ(&fg, a, b, a),
                integ(&f, a, b, a).and_then(|x| Ok(x + integ(&g, a, b, a)?)),
            ),
        ));
        pairs.push((
            format!("{kname} scalar"),
            combine(integ(&lf, a, b, a), integ(&f, a, b, a).map(|x| lambda * x)),
        ));
        pairs.push((
            format!("{kname} reversal"),
            combine(integ(&f, a, b, a), integ(&f, b, a, b).map(|x| -x)),
        ));
        pairs.push((
            format!("{kname} additivity"),
            combine(
                integ(&f, a, b, a),
                integ(&f, a, c, a).and_then(|x| Ok(x + integ(&f, c, b, c)?)),
            ),
        ));
        pairs.push((
            format!("{kname} empty range"),
            combine(integ(&f, a, a, a), Ok(0.0)),
        ));
        pairs.push((
            format!("{kname} anchor independence"),
            combine(integ(&f, a, b, a), integ(&f, a, b, t0)),
        ));
        if beta != IntegralOrder::Zero {
            pairs.push((
                "symmetric linearity".into(),
                combine(
                    sym(&fg, a, b),
                    sym(&f, a, b).and_then(|x| Ok(x + sym(&g, a, b)?)),
                ),
            ));
            pairs.push((
                "symmetric scalar".into(),
                combine(sym(&lf, a, b), sym(&f, a, b).map(|x| lambda * x)),
            ));
            pairs.push((
                "symmetric reversal".into(),
                combine(sym(&f, a, b), sym(&f, b, a).map(|x| -x)),
            ));
            pairs.push((
                "symmetric additivity".into(),
                combine(
                    sym(&f, a, b),
                    sym(&f, a, c).and_then(|x| Ok(x + sym(&f, c, b)?)),
                ),
            ));
            pairs.push((
                "symmetric empty range".into(),
                combine(sym(&f, a, a), Ok(0.0)),
            ));
        }
        for (rule, res) in pairs {
            match res {
                Ok((lhs, rhs)) => ctx.record(trial, &rule, &name, &f, b, &ord, lhs, rhs),
                Err(e) => ctx.fail_eval(trial, &rule, &name, &f, b, &ord, &e),
            }
        }
    }
}

/// Run one suite.
pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Result<SuiteReport> {
    cfg.limit.validate()?;
    cfg.quad.validate()?;
    let scales = SCALES
        .iter()
        .map(|s| Ok((s.to_string(), parse_scale(s)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        scales,
        cfg,
        report: SuiteReport {
            suite,
            seed: cfg.seed,
            trials: cfg.trials,
            checks: 0,
            max_residual: 0.0,
            tolerance: suite.tolerance(),
            failures: vec![],
        },
    };
    match suite {
        Suite::Linearity | Suite::Product | Suite::Quotient => run_rules(&mut ctx, suite),
        Suite::Reconstruction => run_reconstruction(&mut ctx),
        Suite::SymmetricRelation => run_symmetric_relation(&mut ctx),
        Suite::OrderLowering => run_order_lowering(&mut ctx),
        Suite::IntegralLaws => run_integral_laws(&mut ctx),
    }
    Ok(ctx.report)
}
