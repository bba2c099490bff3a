//! Acceptance checks. Prints one line per criterion and exits nonzero if any
//! fails.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tscale_frac::check::{self, run_suite, CheckConfig, Suite};
use tscale_frac::{
    delta_frac, nabla_frac, parse_expr, parse_scale, symmetric_frac, symmetric_weights, Error,
    Expr, FnOnScale, LimitConfig, Order, OrderClass, Path, ScaleExpr, TimeScale,
};

type Outcome = std::result::Result<String, String>;

/// Points where a reconstruction identity must hold exactly:
/// (label, lhs, rhs).
#[derive(Default)]
struct Recon(Vec<(String, f64, f64)>);

impl Recon {
    fn push(&mut self, label: impl Into<String>, lhs: f64, rhs: f64) {
        self.0.push((label.into(), lhs, rhs));
    }
}

fn o(s: &str) -> Order {
    s.parse().unwrap()
}

fn scale(s: &str) -> TimeScale {
    parse_scale(s).unwrap()
}

fn on(ts: &TimeScale, f: &str) -> FnOnScale {
    FnOnScale::from_expr(ts.clone(), parse_expr(f).unwrap())
}

fn cfg() -> LimitConfig {
    LimitConfig::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Record the nabla reconstruction `f(t) = f(rho) + nu^a f^{∇^a}(t)` at a
/// left-scattered point.
fn nabla_recon(recon: &mut Recon, label: &str, f: &FnOnScale, t: f64, a: Order, value: f64) {
    let ts = f.scale();
    let rho = ts.rho(t).unwrap();
    if rho < t {
        let rhs = f.eval(rho).unwrap() + (t - rho).powf(a.value()) * value;
        recon.push(format!("{label} nabla t={t}"), f.eval(t).unwrap(), rhs);
    }
}

fn c1() -> Outcome {
    let mut seen = Vec::new();
    for (beta, want) in [
        ("0", 9.0),
        ("1/4", 9.0),
        ("1/2", 9.0),
        ("3/4", 9.0),
        ("1", 54.0),
    ] {
        let args = [
            "tscale-frac",
            "integ",
            "--kind",
            "nabla",
            "--scale",
            "grid(1,10,1)",
            "--fn",
            "t",
            "--a",
            "1",
            "--b",
            "10",
            "--beta",
            beta,
        ];
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = tscale_frac::cli::run(args, &mut out, &mut err);
        let line = String::from_utf8(out).unwrap();
        ensure(code == 0, || format!("beta={beta}: exit {code}: {line}"))?;
        let v: serde_json::Value =
            serde_json::from_str(line.trim()).map_err(|e| format!("{e}: {line}"))?;
        let value = v["value"]
            .as_f64()
            .ok_or_else(|| format!("no value in {line}"))?;
        ensure((value - want).abs() <= 1e-12, || {
            format!("beta={beta}: {value} != {want}")
        })?;
        seen.push(format!("{beta}->{value}"));
    }
    Ok(seen.join(" "))
}

fn c2() -> Outcome {
    let f = on(&scale("interval(0,4)"), "sqrt(t)");
    let mut worst: f64 = 0.0;
    for t in [0.25, 1.0, 2.0] {
        let r = nabla_frac(&f, t, o("1/2"), &cfg()).map_err(|e| format!("t={t}: {e}"))?;
        ensure(r.value.abs() <= 1e-6, || format!("t={t}: {}", r.value))?;
        worst = worst.max(r.value.abs());
    }
    let r = nabla_frac(&f, 0.0, o("1/2"), &cfg()).map_err(|e| format!("t=0: {e}"))?;
    ensure(r.side == tscale_frac::ApproachSide::Right, || {
        format!("t=0 used side {:?}", r.side)
    })?;
    ensure((r.value - 1.0).abs() <= 1e-6, || {
        format!("t=0: {}", r.value)
    })?;
    Ok(format!(
        "max |value(t>0)| = {worst:.2e}, value(0) = {}",
        r.value
    ))
}

fn c3(recon: &mut Recon) -> Outcome {
    // Interior points with their backward gaps, written out independently.
    let z: Vec<(f64, f64)> = (-9..=9).map(|k| (k as f64, 1.0)).collect();
    let hz: Vec<(f64, f64)> = (-9..=9).map(|k| (0.5 * k as f64, 0.5)).collect();
    let qz: Vec<(f64, f64)> = (1..=5).map(|k| (2f64.powi(k), 2f64.powi(k - 1))).collect();
    let mut n = 0;
    for (src, pts) in [
        ("grid(-10,10,1)", z),
        ("grid(-5,5,0.5)", hz),
        ("qgrid(2,0,6)", qz),
    ] {
        let f = on(&scale(src), "t");
        for a in ["1/3", "1/2", "1"] {
            let a = o(a);
            for &(t, nu) in &pts {
                let want = nu.powf(1.0 - a.value());
                let r =
                    nabla_frac(&f, t, a, &cfg()).map_err(|e| format!("{src} t={t} a={a}: {e}"))?;
                ensure((r.value - want).abs() <= 1e-12, || {
                    format!("{src} t={t} a={a}: {} != {want}", r.value)
                })?;
                nabla_recon(recon, src, &f, t, a, r.value);
                n += 1;
            }
        }
    }
    Ok(format!("{n} points exact"))
}

fn c4(recon: &mut Recon) -> Outcome {
    let mut n = 0;
    let mut worst: f64 = 0.0;
    for (src, h, lo, hi) in [("grid(-4,4,1)", 1.0, -3, 4), ("grid(-2,3,0.5)", 0.5, -3, 6)] {
        let ts = scale(src);
        for m in 1..=5i32 {
            for c in [0.0, 1.5] {
                let poly = on(&ts, &format!("(t - {c})^{m}"));
                let recip = on(&ts, &format!("1/(t - {c})^{m}"));
                for a in [o("1/3"), o("1/2")] {
                    for k in lo..=hi {
                        let t = h * k as f64;
                        let rho = t - h;
                        let w = h.powf(1.0 - a.value());
                        let want: f64 = w
                            * (0..m)
                                .map(|v| (rho - c).powi(v) * (t - c).powi(m - 1 - v))
                                .sum::<f64>();
                        let got = nabla_frac(&poly, t, a, &cfg())
                            .map_err(|e| e.to_string())?
                            .value;
                        let rel = (got - want).abs() / want.abs().max(1.0);
                        worst = worst.max(rel);
                        ensure(rel <= 1e-9, || {
                            format!("{src} (t-{c})^{m} t={t} a={a}: {got} vs {want}")
                        })?;
                        nabla_recon(recon, src, &poly, t, a, got);
                        n += 1;
                        if (rho - c) * (t - c) != 0.0 {
                            let want: f64 = -w
                                * (0..m)
                                    .map(|v| 1.0 / ((rho - c).powi(m - v) * (t - c).powi(v + 1)))
                                    .sum::<f64>();
                            let got = nabla_frac(&recip, t, a, &cfg())
                                .map_err(|e| e.to_string())?
                                .value;
                            let rel = (got - want).abs() / want.abs().max(1.0);
                            worst = worst.max(rel);
                            ensure(rel <= 1e-9, || {
                                format!("{src} 1/(t-{c})^{m} t={t} a={a}: {got} vs {want}")
                            })?;
                            nabla_recon(recon, src, &recip, t, a, got);
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{n} values, max rel err {worst:.2e}"))
}

fn c5(recon: &mut Recon) -> Outcome {
    let f = on(&scale("points(-1,0,2)"), "abs(t)");
    let r = symmetric_frac(&f, 0.0, o("1/2"), &cfg()).map_err(|e| e.to_string())?;
    let want = 1.0 / 3f64.sqrt();
    ensure((r.value - want).abs() <= 1e-12, || {
        format!("points: {} != {want}", r.value)
    })?;
    recon.push(
        "points(-1,0,2) |t| symmetric",
        2.0,
        1.0 + r.value * 3f64.sqrt(),
    );
    let g = on(&scale("interval(-1,1)"), "abs(t)");
    let d = symmetric_frac(&g, 0.0, o("1/2"), &cfg()).map_err(|e| e.to_string())?;
    ensure(d.value.abs() <= 1e-6, || format!("interval: {}", d.value))?;
    Ok(format!("scattered {}, dense {:.1e}", r.value, d.value))
}

fn c6(recon: &mut Recon) -> Outcome {
    let ts = scale("grid(-10,10,1)");
    let sq = symmetric_frac(&on(&ts, "t^2"), 3.0, o("1/2"), &cfg()).map_err(|e| e.to_string())?;
    let want = 2f64.sqrt() * 6.0;
    ensure((sq.value - want).abs() <= 1e-12, || {
        format!("t^2: {} != {want}", sq.value)
    })?;
    recon.push("Z t^2 symmetric", 16.0, 4.0 + sq.value * 2f64.sqrt());
    let inv = symmetric_frac(&on(&scale("grid(1,10,1)"), "1/t"), 3.0, Order::ONE, &cfg())
        .map_err(|e| e.to_string())?;
    ensure((inv.value + 0.125).abs() <= 1e-12, || {
        format!("1/t: {} != -1/8", inv.value)
    })?;
    recon.push("Z 1/t symmetric", 0.25, 0.5 + inv.value * 2.0);
    Ok(format!("{} and {}", sq.value, inv.value))
}

const HYBRID: [&str; 6] = [
    "union(interval(0, 1), points(1.5, 2, 3), grid(4, 6, 0.5))",
    "union(grid(-2, 0, 0.25), interval(0.5, 1.5))",
    "union(qgrid(2, -8, 2, zero), interval(5, 6))",
    "points(-2, -1.25, 0, 0.5, 1.75, 3)",
    "union(grid(-3, 3, 0.75), points(3.2, 3.9))",
    "union(interval(-1, 0), qgrid(3, -3, 2))",
];

/// A smooth random function: a rational with a positive denominator.
fn random_fn(rng: &mut ChaCha8Rng) -> String {
    let mut c = || (rng.gen_range(-2.0..2.0f64) * 8.0).round() / 8.0;
    let (a0, a1, a2, b) = (c(), c(), c(), c());
    format!("({a0} + {a1}*t + {a2}*t^2)/(1.5 + (t - {b})^2)")
}

fn candidates(ts: &TimeScale) -> Vec<f64> {
    ts.sample_points(ts.min(), ts.max(), 7)
}

fn c7(recon: &mut Recon) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut scattered, mut dense) = (0, 0);
    let (mut worst_s, mut worst_d): (f64, f64) = (0.0, 0.0);
    let mut guard = 0;
    while scattered < 50 || dense < 20 {
        guard += 1;
        if guard > 100_000 {
            return Err(format!(
                "only found {scattered} scattered and {dense} dense points"
            ));
        }
        let ts = scale(HYBRID.choose(&mut rng).unwrap());
        let pts = candidates(&ts);
        let t = *pts.choose(&mut rng).unwrap();
        if !ts.membership_kind(t).unwrap().in_t_kappa_both {
            continue;
        }
        let is_dense = ts.classify(t).unwrap().dense();
        // A dense extremum has no mirrored pairs t - h, t + h in the scale.
        if is_dense && (t <= ts.min() || t >= ts.max()) {
            continue;
        }
        if is_dense && dense >= 20 || !is_dense && scattered >= 50 {
            continue;
        }
        let a = if is_dense {
            o(["1/3", "1"].choose(&mut rng).unwrap())
        } else {
            o(["1/3", "1/2", "3/4", "1"].choose(&mut rng).unwrap())
        };
        let src = random_fn(&mut rng);
        let f = on(&ts, &src);
        let w = symmetric_weights(&ts, t, a).map_err(|e| e.to_string())?;
        let side = |g: f64, d: &dyn Fn() -> tscale_frac::Result<f64>| -> tscale_frac::Result<f64> {
            if g == 0.0 {
                Ok(0.0)
            } else {
                Ok(g * d()?)
            }
        };
        let delta = || delta_frac(&f, t, a, &cfg()).map(|r| r.value);
        let nabla = || nabla_frac(&f, t, a, &cfg()).map(|r| r.value);
        let rhs = side(w.gamma1, &delta).and_then(|x| Ok(x + side(w.gamma2, &nabla)?));
        let rhs = match rhs {
            Ok(v) => v,
            // Not both delta and nabla differentiable here; the relation
            // does not apply.
            Err(Error::LimitDidNotConverge { .. }) if !is_dense => continue,
            Err(e) => return Err(format!("{src} at {t} a={a}: {e}")),
        };
        let lhs = symmetric_frac(&f, t, a, &cfg())
            .map_err(|e| format!("{src} at {t}: {e}"))?
            .value;
        let res = (lhs - rhs).abs();
        if is_dense {
            ensure(res <= 1e-6, || {
                format!("dense {src} at {t} a={a}: {lhs} vs {rhs}")
            })?;
            worst_d = worst_d.max(res);
            dense += 1;
        } else {
            ensure(res <= 1e-12, || {
                format!("scattered {src} at {t} a={a}: {lhs} vs {rhs}")
            })?;
            worst_s = worst_s.max(res);
            scattered += 1;
            let (sig, rho) = (ts.sigma(t).unwrap(), ts.rho(t).unwrap());
            let ev = |x: f64| f.eval(x).unwrap();
            recon.push(
                format!("{src} symmetric t={t}"),
                ev(sig),
                ev(rho) + lhs * (sig - rho).powf(a.value()),
            );
            if sig > t {
                if let Ok(d) = delta_frac(&f, t, a, &cfg()) {
                    recon.push(
                        format!("{src} delta t={t}"),
                        ev(sig),
                        ev(t) + (sig - t).powf(a.value()) * d.value,
                    );
                }
            }
            if let Ok(d) = nabla_frac(&f, t, a, &cfg()) {
                nabla_recon(recon, &src, &f, t, a, d.value);
            }
        }
    }
    Ok(format!(
        "max residual scattered {worst_s:.1e} ({scattered} pts), dense {worst_d:.1e} ({dense} pts)"
    ))
}

fn suites(names: &[Suite], trials: usize) -> Outcome {
    let mut parts = Vec::new();
    for &s in names {
        let rep = run_suite(s, &CheckConfig::new(20240611, trials)).map_err(|e| e.to_string())?;
        if !rep.passed() {
            let first = &rep.failures[0];
            return Err(format!(
                "{}: {} failures, first: {first:?}",
                s.name(),
                rep.failures.len()
            ));
        }
        parts.push(format!(
            "{} {} checks max {:.1e} (tol {:.0e})",
            s.name(),
            rep.checks,
            rep.max_residual,
            rep.tolerance
        ));
    }
    Ok(parts.join("; "))
}

fn c8() -> Outcome {
    suites(&[Suite::Linearity, Suite::Product, Suite::Quotient], 100)
}

fn c9(recon: &Recon) -> Outcome {
    ensure(!recon.0.is_empty(), || {
        "no scattered points recorded".into()
    })?;
    let mut worst: f64 = 0.0;
    for (label, lhs, rhs) in &recon.0 {
        let r = check::scaled_residual(*lhs, *rhs);
        ensure(r <= 1e-12, || format!("{label}: {lhs} vs {rhs} ({r:.1e})"))?;
        worst = worst.max(r);
    }
    let extra = suites(&[Suite::Reconstruction], 100)?;
    Ok(format!(
        "{} points, max residual {worst:.1e}; {extra}",
        recon.0.len()
    ))
}

fn c10() -> Outcome {
    suites(&[Suite::IntegralLaws], 50)
}

fn c11() -> Outcome {
    let ts = scale("interval(-2,2)");
    let mut worst: f64 = 0.0;
    for src in ["sin(t)", "exp(t)", "t^3"] {
        let f = on(&ts, src);
        for a in [o("1/3"), o("1/2")] {
            for k in 0..10 {
                let t = -1.8 + 0.4 * k as f64;
                let r =
                    nabla_frac(&f, t, a, &cfg()).map_err(|e| format!("{src} t={t} a={a}: {e}"))?;
                ensure(r.value.abs() <= 1e-5, || {
                    format!("{src} t={t} a={a}: {}", r.value)
                })?;
                worst = worst.max(r.value.abs());
            }
        }
    }
    Ok(format!("60 values, max |value| {worst:.1e}"))
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let orders = ["1/5", "1/3", "1/2", "3/5", "2/3", "3/4", "1"];
    let (mut pairs, mut dense, mut vacuous) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    let mut scales: Vec<&str> = HYBRID.to_vec();
    scales.push("interval(-1, 2)");
    for _ in 0..300 {
        let ts = scale(scales.choose(&mut rng).unwrap());
        let t = *candidates(&ts).choose(&mut rng).unwrap();
        let mut ab = [
            o(orders.choose(&mut rng).unwrap()),
            o(orders.choose(&mut rng).unwrap()),
        ];
        ab.sort_by(|x, y| x.value().total_cmp(&y.value()));
        let [a, b] = ab;
        let src = random_fn(&mut rng);
        let f = on(&ts, &src);
        let Ok(high) = nabla_frac(&f, t, b, &cfg()) else {
            continue;
        };
        pairs += 1;
        let low = match nabla_frac(&f, t, a, &cfg()) {
            Ok(low) => low,
            Err(Error::LimitDidNotConverge { value, .. })
                if value.is_nan()
                    && a.class() == OrderClass::General
                    && (ts.sigma(t).unwrap() > t || t >= ts.max()) =>
            {
                // Right neighbourhood is {t}: the definition holds for any
                // number and no value exists to compute.
                vacuous += 1;
                continue;
            }
            Err(e) => return Err(format!("{src} at {t}: order {b} exists but {a} fails: {e}")),
        };
        if high.path == Path::DenseLimit && b.value() > a.value() {
            ensure(low.value.abs() <= 1e-5, || {
                format!("{src} at {t}: {a}-value {}", low.value)
            })?;
            worst = worst.max(low.value.abs());
            dense += 1;
        }
    }
    ensure(dense >= 20, || format!("only {dense} dense pairs"))?;
    Ok(format!(
        "{pairs} pairs, {dense} dense with max |value| {worst:.1e}, {vacuous} with empty right neighbourhood"
    ))
}

fn c13() -> Outcome {
    // One case per production of both grammars: source, value at t = 2.
    let exprs: [(&str, f64); 14] = [
        ("1 + t - 0.5", 2.5),
        ("3 * t / 4", 1.5),
        ("-t", -2.0),
        ("- -t", 2.0),
        ("t^3", 8.0),
        ("2^-1", 0.5),
        ("1.5e1", 15.0),
        ("pi", std::f64::consts::PI),
        ("(t + 1) * 2", 6.0),
        ("sqrt(t) * sqrt(t)", 2.0),
        ("abs(-t) + ln(exp(t))", 4.0),
        ("sin(t)^2 + cos(t)^2", 1.0),
        ("pow(t, 3)", 8.0),
        ("-t^2", -4.0),
    ];
    for (src, want) in exprs {
        let e = parse_expr(src).map_err(|e| format!("{src}: {e}"))?;
        let v = e.eval(2.0).map_err(|e| format!("{src}: {e}"))?;
        ensure((v - want).abs() <= 1e-12, || {
            format!("{src} = {v}, want {want}")
        })?;
        let back: Expr =
            parse_expr(&e.to_string()).map_err(|err| format!("{src} -> {e}: {err}"))?;
        ensure(back == e, || {
            format!("round trip of {src} changed: {e} -> {back}")
        })?;
    }
    let scales = [
        "interval(0, 1)",
        "points(1, 2.5, 4)",
        "grid(0, 2, 0.5)",
        "qgrid(2, -3, 3)",
        "qgrid(2, -3, 3, zero)",
        "qgrid(2, -3, 3, zero, neg)",
        "union(interval(0, 1), points(2), grid(3, 5, 1))",
        "interval(-pi, 2^3)",
    ];
    for src in scales {
        let s: ScaleExpr =
            tscale_frac::expr::parse_scale_expr(src).map_err(|e| format!("{src}: {e}"))?;
        let back = tscale_frac::expr::parse_scale_expr(&s.to_string())
            .map_err(|e| format!("{src}: {e}"))?;
        ensure(back == s, || {
            format!("round trip of {src} changed: {s} -> {back}")
        })?;
        parse_scale(src).map_err(|e| format!("{src}: {e}"))?;
    }
    let bad: [(&str, usize, usize); 9] = [
        ("t +", 1, 4),
        ("(t", 1, 3),
        ("2 * * t", 1, 5),
        ("foo(t)", 1, 1),
        ("t\n+ $", 2, 3),
        ("sqrt(t, 1)", 1, 7),
        ("1..2", 1, 3),
        ("interval(0 1)", 1, 12),
        ("union(interval(0, t))", 1, 19),
    ];
    for (src, line, col) in bad {
        let err = if src.starts_with("interval") || src.starts_with("union") {
            parse_scale(src).err()
        } else {
            parse_expr(src).err()
        };
        match err {
            Some(Error::Syntax(s)) => ensure((s.line, s.column) == (line, col), || {
                format!(
                    "{src:?}: error at {}:{}, want {line}:{col} ({s})",
                    s.line, s.column
                )
            })?,
            other => return Err(format!("{src:?}: expected a syntax error, got {other:?}")),
        }
    }
    Ok(format!(
        "{} expression and {} scale productions, {} error positions",
        exprs.len(),
        scales.len(),
        bad.len()
    ))
}

fn main() {
    let mut recon = Recon::default();
    let results: Vec<(&str, &str, Outcome)> = vec![
        ("C1", "Z worked fractional integral", c1()),
        ("C2", "sqrt(t) nabla derivative of order 1/2", c2()),
        ("C3", "identity function on Z, hZ, qgrid", c3(&mut recon)),
        (
            "C4",
            "polynomial and reciprocal closed forms",
            c4(&mut recon),
        ),
        ("C5", "symmetric derivative of |t|", c5(&mut recon)),
        ("C6", "symmetric examples on Z", c6(&mut recon)),
        (
            "C7",
            "symmetric relation to delta and nabla",
            c7(&mut recon),
        ),
        ("C8", "algebraic rule suites", c8()),
        ("C9", "reconstruction identities", c9(&recon)),
        ("C10", "integral laws", c10()),
        ("C11", "differentiable implies zero", c11()),
        ("C12", "order lowering", c12()),
        ("C13", "parser round trip and error positions", c13()),
    ];
    let mut failed = 0;
    for (id, name, r) in &results {
        match r {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
