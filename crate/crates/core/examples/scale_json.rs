//! Building scales in code, normalizing them and round-tripping through JSON.

use tscale_frac::{Component, Result, TimeScale};

fn main() -> Result<()> {
    let ts = TimeScale::new(vec![
        Component::Interval { lo: 0.0, hi: 1.0 },
        Component::Interval { lo: 0.5, hi: 2.0 },
        Component::Points {
            points: vec![0.25, 3.0, 3.0],
        },
        Component::Grid {
            start: 4.0,
            stop: 5.0,
            step: 0.25,
        },
    ])?;
    let json = ts.to_json();
    println!("{json}");
    let back = TimeScale::from_json(&json)?;
    assert_eq!(back, ts);
    println!(
        "min {}, max {}, contains 1.75: {}",
        ts.min(),
        ts.max(),
        ts.contains(1.75)
    );

    let union = TimeScale::union(&[
        TimeScale::grid(0.0, 2.0, 1.0)?,
        TimeScale::qgrid(2.0, -2, 2, false)?,
    ])?;
    println!(
        "sigma(1) = {}, rho(1) = {}",
        union.sigma(1.0)?,
        union.rho(1.0)?
    );
    Ok(())
}
