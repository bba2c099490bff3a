//! The function and time-scale languages, including error positions.

use tscale_frac::{expr::parse_scale_expr, parse_expr, Error};

fn main() {
    for src in [
        "-t^2 + 3*t",
        "2^-1 * sqrt(abs(t))",
        "(1 + t) / (1 - t)",
        "pow(t, 1/3) + pi",
    ] {
        let e = parse_expr(src).expect("valid");
        println!("{src:<24} => {e:<24} f(2) = {:?}", e.eval(2.0).ok());
    }
    for src in [
        "union(interval(0, 1), grid(2, 4, 0.5))",
        "qgrid(2, -3, 3, zero, neg)",
    ] {
        let s = parse_scale_expr(src).expect("valid");
        println!(
            "{src} => {:?}",
            s.to_scale().map(|ts| ts.components().len())
        );
    }
    for src in ["t +", "sin(t", "3 $ t", "interval(0 1)"] {
        let err = if src.starts_with("interval") {
            parse_scale_expr(src).err()
        } else {
            parse_expr(src).err()
        };
        if let Some(Error::Syntax(s)) = err {
            println!(
                "{src:<14} line {} col {}: expected {}, found {}",
                s.line, s.column, s.expected, s.found
            );
        }
    }
}
