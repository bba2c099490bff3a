//! Classical and fractional integrals on discrete, continuous and hybrid
//! scales.

use tscale_frac::{
    nabla_frac_integral, nabla_integral, parse_expr, parse_scale, symmetric_frac_integral,
    FnOnScale, IntegralKind, LimitConfig, QuadratureConfig, Result,
};

fn main() -> Result<()> {
    let (cfg, qc) = (LimitConfig::default(), QuadratureConfig::default());

    let f = FnOnScale::from_expr(parse_scale("grid(1, 10, 1)")?, parse_expr("t")?);
    println!(
        "sum of t over (1, 10] on Z: {}",
        nabla_integral(&f, 1.0, 10.0, &qc)?
    );
    for beta in ["0", "1/4", "1/2", "3/4", "1"] {
        let v = nabla_frac_integral(&f, 1.0, 10.0, beta.parse()?, &cfg, &qc)?;
        println!("  order {beta:>3}: {v}");
    }

    let hybrid = parse_scale("union(interval(0, 1), points(1.5, 2.5))")?;
    let g = FnOnScale::from_expr(hybrid, parse_expr("exp(t)")?);
    println!(
        "exp on [0,1] + {{1.5, 2.5}}: {:.12}",
        nabla_integral(&g, 0.0, 2.5, &qc)?
    );
    let r = tscale_frac::frac_integral_anchored(
        &g,
        0.0,
        2.5,
        "1/2".parse()?,
        IntegralKind::Nabla,
        0.0,
        &cfg,
        &qc,
    )?;
    println!("  order 1/2: {:.12}", r.value);
    for note in r.notes {
        println!("  note: {note}");
    }

    let s = FnOnScale::from_expr(parse_scale("grid(0, 10, 1)")?, parse_expr("t^2")?);
    let v = symmetric_frac_integral(&s, 2.0, 5.0, "1/2".parse()?, &cfg, &qc)?;
    println!("symmetric order 1/2 of t^2 over [2, 5] on Z: {}", v.value);
    Ok(())
}
