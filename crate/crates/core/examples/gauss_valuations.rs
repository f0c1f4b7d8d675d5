//! Gauss valuations η_{a,r} of polynomials over the 3-adic and t-adic fields.

use berkovich_line::berkline::{gauss_eval, rational_eval, BerkPoint};
use berkovich_line::fields::{PAdic, Polynomial, TAdic, ValuedField};
use berkovich_line::valgrp::Gamma0Value;
use num_rational::BigRational;

fn main() {
    let f = PAdic::new(3).unwrap();
    let int = |n: i64| BigRational::from_integer(n.into());
    // T² + 3T + 9
    let p = Polynomial::from_coeffs(&f, vec![int(9), int(3), int(1)]);
    for e in [-1, 0, 1, 2, 3] {
        let x = BerkPoint::disc(int(0), Gamma0Value::exp(e));
        println!("|T² + 3T + 9| at η(0, e={e}) = {}", gauss_eval(&f, &x, &p).unwrap());
    }
    // around a root's neighbourhood the norm depends on the center
    let x = BerkPoint::disc(int(1), Gamma0Value::exp(1));
    let q = Polynomial::from_coeffs(&f, vec![int(-1), int(0), int(1)]);
    let one = Polynomial::from_coeffs(&f, vec![int(1)]);
    println!("|T² − 1| at η(1, e=1) = {}", gauss_eval(&f, &x, &q).unwrap());
    println!(
        "|1/(T² − 1)| at infinity = {}",
        rational_eval(&f, &BerkPoint::Infinity, &one, &q).unwrap()
    );

    let t = TAdic::rational();
    let x = t.fraction(&[int(0), int(0), int(1)], &[int(1), int(1)]).unwrap();
    println!("|t²/(1 + t)| = {}", t.valuation(&x));
}
