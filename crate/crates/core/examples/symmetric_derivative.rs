//! Symmetric fractional derivatives and their delta/nabla weights.

use tscale_frac::{
    delta_frac, nabla_frac, parse_expr, parse_scale, symmetric_frac, symmetric_weights, FnOnScale,
    LimitConfig, Result,
};

fn main() -> Result<()> {
    let cfg = LimitConfig::default();
    let half = "1/2".parse()?;

    // |t| has no classical derivative at 0 but a symmetric one.
    for scale in ["points(-1, 0, 2)", "interval(-1, 1)", "grid(-3, 3, 1)"] {
        let f = FnOnScale::from_expr(parse_scale(scale)?, parse_expr("abs(t)")?);
        let d = symmetric_frac(&f, 0.0, half, &cfg)?;
        println!("|t| on {scale}: {}", d.value);
    }

    // The symmetric derivative is a weighted mean of the delta and nabla ones.
    let ts = parse_scale("union(points(-2, -0.5), interval(0, 1), grid(1.5, 3, 0.75))")?;
    let f = FnOnScale::from_expr(ts.clone(), parse_expr("t^3 - 2*t")?);
    for t in [-0.5, 1.5, 2.25] {
        let w = symmetric_weights(&ts, t, half)?;
        let sym = symmetric_frac(&f, t, half, &cfg)?.value;
        let mix = w.gamma1 * delta_frac(&f, t, half, &cfg)?.value
            + w.gamma2 * nabla_frac(&f, t, half, &cfg)?.value;
        println!(
            "t = {t}: gamma = ({:.4}, {:.4}), symmetric {sym:.12}, weighted {mix:.12}",
            w.gamma1, w.gamma2
        );
    }
    Ok(())
}
