//! Point classes, jumps and graininess on a hybrid time scale.

use tscale_frac::{parse_scale, Result};

fn main() -> Result<()> {
    let ts = parse_scale(
        "union(interval(0, 1), points(1.5, 2), grid(3, 4, 0.5), qgrid(2, -3, 1, zero, neg))",
    )?;
    println!(
        "{:>7}  {:>9}  {:>9}  {:>7}  {:>7}  {:>7}",
        "t", "left", "right", "sigma", "rho", "mu"
    );
    for t in [-2.0, -0.25, 0.0, 0.5, 1.0, 1.5, 2.0, 3.5, 4.0] {
        let c = ts.classify(t)?;
        println!(
            "{t:>7}  {:>9}  {:>9}  {:>7}  {:>7}  {:>7}",
            format!("{:?}", c.left),
            format!("{:?}", c.right),
            ts.sigma(t)?,
            ts.rho(t)?,
            ts.mu(t)?
        );
    }
    let kinds = ts.membership_kind(4.0)?;
    println!(
        "4 is the maximum; in the delta domain: {}",
        kinds.in_t_kappa_upper
    );
    Ok(())
}
