//! How the acceleration setting affects dense-point limits.

use tscale_frac::{
    nabla_frac, parse_expr, parse_scale, Acceleration, FnOnScale, LimitConfig, Result,
};

fn main() -> Result<()> {
    let f = FnOnScale::from_expr(
        parse_scale("interval(-1, 2)")?,
        parse_expr("exp(t) * cos(t)")?,
    );
    let exact = 0.5f64.exp() * (0.5f64.cos() - 0.5f64.sin());
    for accel in [
        Acceleration::None,
        Acceleration::Aitken,
        Acceleration::Richardson,
    ] {
        for (order, want) in [("1", exact), ("3/4", 0.0)] {
            let cfg = LimitConfig {
                accel,
                tol: 1e-10,
                max_samples: 60,
                ..LimitConfig::default()
            };
            match nabla_frac(&f, 0.5, order.parse()?, &cfg) {
                Ok(d) => println!(
                    "{accel:?} order {order}: error {:.1e}, reported err_est {:.1e}",
                    (d.value - want).abs(),
                    d.err_est
                ),
                Err(e) => println!("{accel:?} order {order}: {e}"),
            }
        }
    }
    Ok(())
}
