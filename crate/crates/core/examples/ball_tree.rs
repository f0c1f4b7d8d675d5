//! Balls as points: equality, containment, joins and tree distances.

use berkovich_line::berkline::{dist, join, point_eq, point_leq, BerkPoint, TreeDistance};
use berkovich_line::fields::PAdic;
use berkovich_line::valgrp::Gamma0Value;
use num_rational::BigRational;

fn main() {
    let f = PAdic::new(3).unwrap();
    let d = |c: i64, e: i64| BerkPoint::disc(BigRational::from_integer(c.into()), Gamma0Value::exp(e));
    let (a, b) = (d(0, 1), d(3, 1));
    println!("B(0,|3|) = B(3,|3|): {}", point_eq(&f, &a, &b));
    println!("B(0,|9|) ⊆ B(3,|3|): {}", point_leq(&f, &d(0, 2), &b));
    let j = join(&f, &d(0, 2), &d(1, 3));
    println!("join of η(0,|9|) and η(1,|27|) = {}", show(&j));
    if let TreeDistance::Finite(l) = dist(&f, &d(0, 2), &d(1, 3)) {
        println!("distance = {l}");
    }
    println!(
        "distance to a simple point = {:?}",
        dist(&f, &d(0, 2), &BerkPoint::simple(BigRational::from_integer(5.into())))
    );
}

fn show(p: &BerkPoint<BigRational>) -> String {
    match p {
        BerkPoint::Infinity => "∞".into(),
        BerkPoint::Disc { center, radius } => format!("η({center}, {radius})"),
    }
}
