//! The `tscale-frac` command line.
//!
//! All logic lives here so it can be driven from tests; the binary only
//! forwards process arguments and streams.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::check::{run_suite, suite_limit_config, CheckConfig, Suite};
use crate::deriv::{frac_derivative, DerivKind};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, parse_scale};
use crate::function::FnOnScale;
use crate::integral::{
    frac_integral_anchored, symmetric_frac_integral, IntegralKind, QuadratureConfig, Rule,
};
use crate::order::{Acceleration, IntegralOrder, LimitConfig, Order};
use crate::timescale::TimeScale;

/// Interval sampling density of `table` and `classify`, in points per unit
/// length.
pub const DEFAULT_DENSITY: usize = 33;

#[derive(Parser, Debug)]
#[command(
    name = "tscale-frac",
    version,
    about = "Fractional calculus on time scales"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fractional derivative at given points
    Deriv(DerivArgs),
    /// Cauchy fractional integral between two points
    Integ(IntegArgs),
    /// Fractional derivative at every scale point of a range
    Table(TableArgs),
    /// Point classes, jumps and graininess
    Classify(ClassifyArgs),
    /// Run a randomized property suite
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Nabla,
    Delta,
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AccelArg {
    None,
    Aitken,
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Gk,
    Simpson,
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    /// Convergence tolerance of dense-point limits
    #[arg(long)]
    pub tol: Option<f64>,
    /// Initial step of approach sequences
    #[arg(long)]
    pub h0: Option<f64>,
    /// Step ratio of approach sequences, in (0, 1)
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Maximum samples per one-sided limit
    #[arg(long)]
    pub max_samples: Option<usize>,
    /// Sequence acceleration
    #[arg(long, value_enum)]
    pub accel: Option<AccelArg>,
}

impl LimitArgs {
    fn apply(&self, mut base: LimitConfig) -> Result<LimitConfig> {
        if let Some(v) = self.tol {
            base.tol = v;
        }
        if let Some(v) = self.h0 {
            base.h0 = v;
        }
        if let Some(v) = self.ratio {
            base.ratio = v;
        }
        if let Some(v) = self.max_samples {
            base.max_samples = v;
        }
        if let Some(a) = self.accel {
            base.accel = match a {
                AccelArg::None => Acceleration::None,
                AccelArg::Aitken => Acceleration::Aitken,
                AccelArg::Richardson => Acceleration::Richardson,
            };
        }
        base.validate()?;
        Ok(base)
    }
}

#[derive(Args, Debug, Clone)]
pub struct QuadArgs {
    /// Relative quadrature tolerance
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Maximum bisection depth
    #[arg(long)]
    pub max_depth: Option<u32>,
    /// Quadrature rule
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig> {
        let mut qc = QuadratureConfig::default();
        if let Some(v) = self.rel_tol {
            qc.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            qc.abs_tol = v;
        }
        if let Some(v) = self.max_depth {
            qc.max_depth = v;
        }
        if let Some(r) = self.rule {
            qc.rule = match r {
                RuleArg::Gk => Rule::GaussKronrod,
                RuleArg::Simpson => Rule::Simpson,
            };
        }
        qc.validate()?;
        Ok(qc)
    }
}

#[derive(Args, Debug, Clone)]
pub struct FnArgs {
    /// Time scale, e.g. "union(interval(0,1),points(2))"
    #[arg(long)]
    pub scale: String,
    /// Function of t, e.g. "sqrt(t)"
    #[arg(long = "fn")]
    pub function: String,
    #[arg(long, value_enum, default_value = "nabla")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DerivArgs {
    #[command(flatten)]
    pub common: FnArgs,
    /// Order p/q in (0, 1]
    #[arg(long, default_value = "1")]
    pub order: String,
    /// Comma-separated points
    #[arg(long, allow_hyphen_values = true)]
    pub points: String,
    #[command(flatten)]
    pub limit: LimitArgs,
}

#[derive(Args, Debug)]
pub struct IntegArgs {
    #[command(flatten)]
    pub common: FnArgs,
    /// Order p/q in [0, 1]
    #[arg(long, default_value = "1")]
    pub beta: String,
    /// Lower endpoint (a scale point)
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Upper endpoint (a scale point)
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// Anchor of the underlying antiderivative (nabla and delta only)
    #[arg(long, allow_hyphen_values = true)]
    pub anchor: Option<String>,
    #[command(flatten)]
    pub limit: LimitArgs,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: FnArgs,
    #[arg(long, default_value = "1")]
    pub order: String,
    /// Start of the range (default: scale minimum)
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// End of the range (default: scale maximum)
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Samples per unit length on interval pieces
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    pub density: usize,
    #[command(flatten)]
    pub limit: LimitArgs,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub scale: String,
    /// Comma-separated points (default: every enumerable scale point)
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    pub density: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// linearity, product, quotient, reconstruction, integral-laws,
    /// symmetric-relation, order-lowering or all
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub limit: LimitArgs,
}

/// Writes records in the chosen format. CSV and table output share one
/// header, taken from the first record.
struct Emitter<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    rows: Vec<Map<String, Value>>,
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Emitter<'_> {
    fn record(&mut self, rec: Value) -> std::io::Result<()> {
        let Value::Object(map) = rec else {
            unreachable!("records are objects")
        };
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(map)),
            _ => {
                self.rows.push(map);
                Ok(())
            }
        }
    }

    fn error(&mut self, e: &Error, t: Option<f64>) -> std::io::Result<()> {
        let mut rec = Map::new();
        rec.insert("error".into(), json!(e.code()));
        if let Some(t) = t {
            rec.insert("t".into(), num(t));
        }
        rec.insert("message".into(), json!(e.to_string()));
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(rec)),
            _ => writeln!(self.err, "error: {}: {}", e.code(), e),
        }
    }

    fn finish(self) -> std::io::Result<()> {
        let Some(first) = self.rows.first() else {
            return Ok(());
        };
        let header: Vec<String> = first.keys().cloned().collect();
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                header
                    .iter()
                    .map(|k| r.get(k).map(cell).unwrap_or_default())
                    .collect()
            })
            .collect();
        match self.format {
            Format::Csv => {
                writeln!(self.out, "{}", header.join(","))?;
                for row in body {
                    let quoted: Vec<String> = row
                        .into_iter()
                        .map(|c| {
                            if c.contains([',', '"', '\n']) {
                                format!("\"{}\"", c.replace('"', "\"\""))
                            } else {
                                c
                            }
                        })
                        .collect();
                    writeln!(self.out, "{}", quoted.join(","))?;
                }
            }
            Format::Table => {
                let widths: Vec<usize> = header
                    .iter()
                    .enumerate()
                    .map(|(i, h)| {
                        body.iter()
                            .map(|r| r[i].len())
                            .chain([h.len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: &[String]| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(self.out, "{}", line(&header))?;
                for row in &body {
                    writeln!(self.out, "{}", line(row))?;
                }
            }
            Format::Json => {}
        }
        Ok(())
    }
}

/// Split on commas that are not inside parentheses.
fn split_top(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

fn constant(src: &str) -> Result<f64> {
    let e = parse_expr(src)?;
    if e.has_var() {
        return Err(Error::Validation(format!("{src:?} must be a constant")));
    }
    e.eval(0.0)
}

fn point_list(src: &str) -> Result<Vec<f64>> {
    if src.trim().is_empty() {
        return Ok(vec![]);
    }
    split_top(src).into_iter().map(constant).collect()
}

fn deriv_kind(k: KindArg) -> DerivKind {
    match k {
        KindArg::Nabla => DerivKind::Nabla,
        KindArg::Delta => DerivKind::Delta,
        KindArg::Symmetric => DerivKind::Symmetric,
    }
}

fn kind_name(k: KindArg) -> &'static str {
    match k {
        KindArg::Nabla => "nabla",
        KindArg::Delta => "delta",
        KindArg::Symmetric => "symmetric",
    }
}

fn function(common: &FnArgs) -> Result<FnOnScale> {
    let ts = parse_scale(&common.scale)?;
    Ok(FnOnScale::from_expr(ts, parse_expr(&common.function)?))
}

fn deriv_record(
    f: &FnOnScale,
    t: f64,
    kind: KindArg,
    order: Order,
    cfg: &LimitConfig,
) -> Result<Value> {
    let r = frac_derivative(f, t, deriv_kind(kind), order, cfg)?;
    let t = f.scale().snap(t).unwrap_or(t);
    let mut rec = json!({
        "t": num(t),
        "kind": kind_name(kind),
        "order": order.to_string(),
        "value": num(r.value),
        "path": r.path,
        "side": r.side,
        "err_est": num(r.err_est),
    });
    if let Some(n) = r.note {
        rec["note"] = json!(n);
    }
    Ok(rec)
}

fn cmd_deriv(a: &DerivArgs, em: &mut Emitter) -> Result<bool> {
    let f = function(&a.common)?;
    let order: Order = a.order.parse()?;
    let cfg = a.limit.apply(LimitConfig::default())?;
    let mut ok = true;
    for t in point_list(&a.points)? {
        match deriv_record(&f, t, a.common.kind, order, &cfg) {
            Ok(rec) => em.record(rec).map_err(io)?,
            Err(e) => {
                ok = false;
                em.error(&e, Some(t)).map_err(io)?;
            }
        }
    }
    Ok(ok)
}

fn cmd_integ(a: &IntegArgs, em: &mut Emitter) -> Result<bool> {
    let f = function(&a.common)?;
    let beta: IntegralOrder = a.beta.parse()?;
    let cfg = a.limit.apply(LimitConfig::default())?;
    let qc = a.quad.config()?;
    let (lo, hi) = (constant(&a.a)?, constant(&a.b)?);
    let res = match a.common.kind {
        KindArg::Symmetric => symmetric_frac_integral(&f, lo, hi, beta, &cfg, &qc)?,
        k => {
            let kind = if k == KindArg::Nabla {
                IntegralKind::Nabla
            } else {
                IntegralKind::Delta
            };
            let anchor = a.anchor.as_deref().map(constant).transpose()?.unwrap_or(lo);
            frac_integral_anchored(&f, lo, hi, beta, kind, anchor, &cfg, &qc)?
        }
    };
    let ts = f.scale();
    let mut rec = json!({
        "a": num(ts.snap(lo).unwrap_or(lo)),
        "b": num(ts.snap(hi).unwrap_or(hi)),
        "beta": beta.to_string(),
        "kind": kind_name(a.common.kind),
        "value": num(res.value),
    });
    if !res.notes.is_empty() {
        rec["note"] = json!(res.notes.join("; "));
    }
    em.record(rec).map_err(io)?;
    Ok(true)
}

fn range(ts: &TimeScale, a: &Option<String>, b: &Option<String>) -> Result<(f64, f64)> {
    let lo = a.as_deref().map(constant).transpose()?.unwrap_or(ts.min());
    let hi = b.as_deref().map(constant).transpose()?.unwrap_or(ts.max());
    Ok((lo, hi))
}

fn cmd_table(a: &TableArgs, em: &mut Emitter) -> Result<bool> {
    let f = function(&a.common)?;
    let order: Order = a.order.parse()?;
    let cfg = a.limit.apply(LimitConfig::default())?;
    let (lo, hi) = range(f.scale(), &a.a, &a.b)?;
    let mut ok = true;
    if lo > hi {
        return Ok(true);
    }
    for t in f.scale().sample_points(lo, hi, a.density.max(1)) {
        match deriv_record(&f, t, a.common.kind, order, &cfg) {
            Ok(rec) => em.record(rec).map_err(io)?,
            Err(Error::PointOutsideDomain { .. }) => {}
            Err(e) => {
                ok = false;
                em.error(&e, Some(t)).map_err(io)?;
            }
        }
    }
    Ok(ok)
}

fn cmd_classify(a: &ClassifyArgs, em: &mut Emitter) -> Result<bool> {
    let ts = parse_scale(&a.scale)?;
    let points = match &a.points {
        Some(p) => point_list(p)?,
        None => ts.sample_points(ts.min(), ts.max(), a.density.max(1)),
    };
    let mut ok = true;
    for t in points {
        let rec = (|| -> Result<Value> {
            let c = ts.classify(t)?;
            let m = ts.membership_kind(t)?;
            Ok(json!({
                "t": num(ts.snap(t).unwrap_or(t)),
                "left": c.left,
                "right": c.right,
                "dense": c.dense(),
                "isolated": c.isolated(),
                "sigma": num(ts.sigma(t)?),
                "rho": num(ts.rho(t)?),
                "mu": num(ts.mu(t)?),
                "nu": num(ts.nu(t)?),
                "in_t_kappa_upper": m.in_t_kappa_upper,
                "in_t_kappa_lower": m.in_t_kappa_lower,
                "in_t_kappa_both": m.in_t_kappa_both,
            }))
        })();
        match rec {
            Ok(r) => em.record(r).map_err(io)?,
            Err(e) => {
                ok = false;
                em.error(&e, Some(t)).map_err(io)?;
            }
        }
    }
    Ok(ok)
}

fn cmd_check(a: &CheckArgs, em: &mut Emitter) -> Result<bool> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let mut cfg = CheckConfig::new(a.seed, a.trials);
    cfg.limit = a.limit.apply(suite_limit_config())?;
    let mut ok = true;
    for s in suites {
        let r = run_suite(s, &cfg)?;
        ok &= r.passed();
        em.record(json!({
            "suite": s.name(),
            "seed": r.seed,
            "trials": r.trials,
            "checks": r.checks,
            "max_residual": num(r.max_residual),
            "tolerance": r.tolerance,
            "failures": r.failures.len(),
            "passed": r.passed(),
        }))
        .map_err(io)?;
        for fl in &r.failures {
            let rec = json!({
                "suite": s.name(),
                "failure": fl.rule,
                "trial": fl.trial,
                "scale": fl.scale,
                "fn": fl.f,
                "t": num(fl.t),
                "order": fl.order,
                "lhs": num(fl.lhs),
                "rhs": num(fl.rhs),
                "residual": num(fl.residual),
            });
            match em.format {
                Format::Json => em.record(rec).map_err(io)?,
                _ => writeln!(em.err, "failure: {rec}").map_err(io)?,
            }
        }
    }
    Ok(ok)
}

fn io(e: std::io::Error) -> Error {
    Error::Validation(format!("output error: {e}"))
}

fn format_of(cmd: &Command) -> Format {
    match cmd {
        Command::Deriv(a) => a.common.format,
        Command::Integ(a) => a.common.format,
        Command::Table(a) => a.common.format,
        Command::Classify(a) => a.format,
        Command::Check(a) => a.format,
    }
}

/// Run the command line and return the process exit code: 0 on success,
/// 1 when any record failed, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let mut em = Emitter {
        format: format_of(&cli.command),
        out,
        err,
        rows: vec![],
    };
    let res = match &cli.command {
        Command::Deriv(a) => cmd_deriv(a, &mut em),
        Command::Integ(a) => cmd_integ(a, &mut em),
        Command::Table(a) => cmd_table(a, &mut em),
        Command::Classify(a) => cmd_classify(a, &mut em),
        Command::Check(a) => cmd_check(a, &mut em),
    };
    let code = match res {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = em.error(&e, None);
            1
        }
    };
    let _ = em.finish();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("tscale-frac").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn values(out: &str) -> Vec<f64> {
        out.lines()
            .map(|l| {
                serde_json::from_str::<Value>(l).unwrap()["value"]
                    .as_f64()
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn split_respects_parentheses() {
        assert_eq!(split_top("0, pow(2,3), -1"), vec!["0", " pow(2,3)", " -1"]);
        assert_eq!(
            point_list("pi/2, -1").unwrap(),
            vec![std::f64::consts::FRAC_PI_2, -1.0]
        );
    }

    #[test]
    fn deriv_sqrt() {
        let (code, out, _) = run_str(&[
            "deriv",
            "--kind",
            "nabla",
            "--order",
            "1/2",
            "--scale",
            "interval(0,4)",
            "--fn",
            "sqrt(t)",
            "--points",
            "0,1",
        ]);
        assert_eq!(code, 0);
        let v = values(&out);
        assert!((v[0] - 1.0).abs() < 1e-6 && v[1].abs() < 1e-6, "{out}");
    }

    #[test]
    fn deriv_outside_scale_is_structured_error() {
        let (code, out, _) = run_str(&[
            "deriv",
            "--scale",
            "interval(0,1)",
            "--fn",
            "t",
            "--points",
            "2",
        ]);
        assert_eq!(code, 1);
        let rec: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(rec["error"], "PointNotInScale");
    }

    #[test]
    fn integ_worked_example() {
        let base = [
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
        ];
        let (code, out, _) = run_str(&[&base[..], &["--beta", "1/2"]].concat());
        assert_eq!(code, 0);
        assert_eq!(values(&out), vec![9.0]);
        let (_, out, _) = run_str(&[&base[..], &["--beta", "1"]].concat());
        assert_eq!(values(&out), vec![54.0]);
    }

    #[test]
    fn table_formats() {
        let args = [
            "table",
            "--order",
            "1/2",
            "--scale",
            "grid(0,5,1)",
            "--fn",
            "t",
        ];
        let (code, out, _) = run_str(&args);
        assert_eq!(code, 0);
        assert_eq!(values(&out), vec![1.0; 5]);
        let (_, csv, _) = run_str(&[&args[..], &["--format", "csv"]].concat());
        assert_eq!(
            csv.lines().next().unwrap(),
            "t,kind,order,value,path,side,err_est"
        );
        assert_eq!(csv.lines().count(), 6);
        let (_, table, _) = run_str(&[&args[..], &["--format", "table"]].concat());
        assert!(table.lines().next().unwrap().starts_with("t  "));
        let (code, out, _) = run_str(&[&args[..], &["--a", "3.5", "--b", "3.7"]].concat());
        assert_eq!((code, out.as_str()), (0, ""));
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_str(&["deriv"]);
        assert_eq!(code, 2);
        assert!(err.contains("--scale"));
    }
}
