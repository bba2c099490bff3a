//! Nabla and delta fractional derivatives at scattered and dense points.

use tscale_frac::{
    delta_frac, nabla_frac, parse_expr, parse_scale, FnOnScale, LimitConfig, Result,
};

fn main() -> Result<()> {
    let cfg = LimitConfig::default();

    // On Z the derivative is an exact quotient: f(t) - f(t - 1).
    let f = FnOnScale::from_expr(parse_scale("grid(0, 10, 1)")?, parse_expr("t^2")?);
    for a in ["1/3", "1/2", "1"] {
        let d = nabla_frac(&f, 3.0, a.parse()?, &cfg)?;
        println!("t^2 on Z, t = 3, order {a}: {} ({:?})", d.value, d.path);
    }

    // sqrt(t) on [0, 4]: order 1/2 gives 1 at the origin and 0 elsewhere.
    let g = FnOnScale::from_expr(parse_scale("interval(0, 4)")?, parse_expr("sqrt(t)")?);
    for t in [0.0, 0.25, 1.0, 2.0] {
        let d = nabla_frac(&g, t, "1/2".parse()?, &cfg)?;
        println!(
            "sqrt(t), t = {t}: {:.3e} from the {:?} side, err {:.1e}",
            d.value, d.side, d.err_est
        );
    }

    // Odd-reciprocal orders take two-sided limits and allow negative bases.
    let h = FnOnScale::new(parse_scale("interval(-1, 1)")?, |t: f64| t.cbrt());
    let d = nabla_frac(&h, 0.0, "1/3".parse()?, &cfg)?;
    println!("cbrt(t) at 0, order 1/3: {} ({:?})", d.value, d.side);

    let q = FnOnScale::from_expr(parse_scale("qgrid(3, 0, 4)")?, parse_expr("t^2")?);
    let d = delta_frac(&q, 9.0, "1".parse()?, &cfg)?;
    println!("t^2 on 3^N, delta at 9: {} (= (3 + 1) * 9)", d.value);
    Ok(())
}
