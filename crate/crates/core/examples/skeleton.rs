//! Where |f| fails to be locally constant, for f = T(T − 1)/(T − 3).

use berkovich_line::berkline::BerkPoint;
use berkovich_line::fields::PAdic;
use berkovich_line::tropical::{immersion_check, local_constancy, skeleton_preimage, Divisor};
use berkovich_line::valgrp::Gamma0Value;
use num_rational::BigRational;

fn main() {
    let f = PAdic::new(3).unwrap();
    let pt = |n: i64| BerkPoint::simple(BigRational::from_integer(n.into()));
    let div = Divisor::new(vec![(pt(0), 1), (pt(1), 1)], vec![(pt(3), 1), (BerkPoint::Infinity, 1)]).unwrap();
    let r = skeleton_preimage(&f, &div).unwrap();
    println!(
        "hull slopes {:?}, immersion {}",
        r.hull.edge_slopes,
        immersion_check(&r.hull)
    );
    println!(
        "kept slopes {:?}, immersion {}",
        r.preimage.edge_slopes,
        immersion_check(&r.preimage)
    );
    let flat = BerkPoint::disc(BigRational::from_integer(0.into()), Gamma0Value::ratio(1, 2));
    println!("slope at η(0, e=1/2): {}", local_constancy(&f, &div, &flat).unwrap());
    print!("{}", r.preimage.to_dot(|c| c.to_string()));
}
