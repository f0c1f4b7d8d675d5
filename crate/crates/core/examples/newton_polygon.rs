//! Root valuations from the Newton polygon, compared with the Gauss norm
//! along the radius direction.

use berkovich_line::berkline::{gauss_eval, BerkPoint};
use berkovich_line::fields::{PAdic, Polynomial};
use berkovich_line::tropical::newton_breakpoints;
use berkovich_line::valgrp::Gamma0Value;
use num_rational::BigRational;

fn main() {
    let f = PAdic::new(3).unwrap();
    let int = |n: i64| BigRational::from_integer(n.into());
    // (T − 3)(T − 1)(T − 9) = T³ − 13T² + 39T − 27
    let p = Polynomial::from_coeffs(&f, vec![int(-27), int(39), int(-13), int(1)]);
    for (slope, m) in newton_breakpoints(&f, &p).unwrap() {
        println!("{m} root(s) of absolute value e={slope}");
    }
    for e in 0..=3 {
        let x = BerkPoint::disc(int(0), Gamma0Value::exp(e));
        println!("|P| at η(0, e={e}) = {}", gauss_eval(&f, &x, &p).unwrap());
    }
}
