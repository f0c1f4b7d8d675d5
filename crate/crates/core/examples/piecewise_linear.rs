//! Max/min of monomials on an interval, split into monomial cells, as TSV.

use berkovich_line::tropical::{decompose_monomial, MonoExpr};
use berkovich_line::valgrp::{Gamma0Value, Interval, MonomialMap};
use num_rational::BigRational;

fn main() {
    let mono = |c: i64, e: i64| {
        MonoExpr::Mono(MonomialMap::new(Gamma0Value::exp(c), BigRational::from_integer(e.into())).unwrap())
    };
    // max(x², |3|·x, |3|⁴)
    let expr = MonoExpr::Max(vec![mono(0, 2), mono(1, 1), mono(4, 0)]);
    let domain = Interval::closed(Gamma0Value::Zero, Gamma0Value::exp(-3)).unwrap();
    let pl = decompose_monomial(&expr, &domain).unwrap();
    println!("{} cells, continuous: {}", pl.cells.len(), pl.is_continuous());
    print!("{}", pl.to_tsv().unwrap());
}
