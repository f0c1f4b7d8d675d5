//! Contraction onto the Gauss point and the retraction onto a finite subtree.

use berkovich_line::berkline::BerkPoint;
use berkovich_line::fields::PAdic;
use berkovich_line::trees::{contract, convex_hull, entry_time, retract, Time};
use berkovich_line::valgrp::Gamma0Value;
use num_rational::BigRational;

fn main() {
    let f = PAdic::new(3).unwrap();
    let int = |n: i64| BigRational::from_integer(n.into());
    let x = BerkPoint::disc(BigRational::new(1.into(), 9.into()), Gamma0Value::exp(3));
    for e in [None, Some(2), Some(1), Some(0)] {
        let t = match e {
            None => Time::start(),
            Some(e) => Time::new(Gamma0Value::exp(e)).unwrap(),
        };
        println!("h({}, x) = {}", t.value(), show(&contract(&f, &t, &x).unwrap()));
    }

    let tree = convex_hull(&f, &[BerkPoint::simple(int(0)), BerkPoint::simple(int(1))], true).unwrap();
    let y = BerkPoint::disc(int(9), Gamma0Value::exp(4));
    let tau = entry_time(&f, &tree, &y).unwrap();
    println!("entry time of η(9,|3|⁴) = {}", tau.value());
    println!("retracted = {}", show(&retract(&f, &tree, &Time::end(), &y).unwrap()));
}

fn show(p: &BerkPoint<BigRational>) -> String {
    match p {
        BerkPoint::Infinity => "∞".into(),
        BerkPoint::Disc { center, radius } => format!("η({center}, {radius})"),
    }
}
