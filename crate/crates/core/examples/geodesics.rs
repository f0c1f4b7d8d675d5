//! The unique path between two points, and the convex hull of several.

use berkovich_line::berkline::{path, BerkPoint, Chart};
use berkovich_line::fields::PAdic;
use berkovich_line::trees::convex_hull;
use berkovich_line::valgrp::Gamma0Value;
use num_rational::BigRational;

fn main() {
    let f = PAdic::new(3).unwrap();
    let int = |n: i64| BigRational::from_integer(n.into());
    let x = BerkPoint::disc(int(0), Gamma0Value::exp(2));
    let y = BerkPoint::disc(int(1), Gamma0Value::exp(3));
    let p = path(&f, &x, &y);
    for (piece, chart) in p.segment.pieces().iter().zip(&p.charts) {
        let how = match chart {
            Chart::Radius(c) => format!("radius around {c}"),
            Chart::InverseRadius(c) => format!("inverse radius around {c}"),
            Chart::Infinity => "at infinity".into(),
        };
        println!("{} → {} by {how}", piece.origin, piece.end);
    }
    let to_inf = path(&f, &x, &BerkPoint::Infinity);
    println!("to infinity: {} pieces", to_inf.segment.pieces().len());

    let pts = [
        BerkPoint::simple(int(0)),
        BerkPoint::simple(int(1)),
        BerkPoint::simple(int(9)),
        BerkPoint::Infinity,
    ];
    let hull = convex_hull(&f, &pts, true).unwrap();
    print!("{}", hull.to_dot(|c| c.to_string(), |_| None));
}
