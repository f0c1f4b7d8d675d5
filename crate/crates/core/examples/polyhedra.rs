//! Membership, compactness and dimension of sets cut out by monomial
//! inequalities.

use berkovich_line::tropical::{
    is_def_compact, poly_dimension, poly_member, Atom, Cmp, Formula, MonoTerm, TropicalPolyhedron,
};
use berkovich_line::valgrp::Gamma0Value;

fn bound(i: usize, c: Cmp, e: i64) -> Formula {
    Formula::Atom(Atom::new(MonoTerm::var(i, 2), c, MonoTerm::constant(Gamma0Value::exp(e), 2)).unwrap())
}

fn main() {
    let below = Formula::Atom(Atom::new(MonoTerm::var(1, 2), Cmp::Le, MonoTerm::var(0, 2)).unwrap());
    let triangle = TropicalPolyhedron::new(2, Formula::And(vec![bound(0, Cmp::Le, 0), below])).unwrap();
    let pt = [Gamma0Value::exp(1), Gamma0Value::exp(2)];
    println!("(e=1, e=2) in triangle: {}", poly_member(&triangle, &pt).unwrap());
    println!("triangle compact: {}", is_def_compact(&triangle).unwrap());
    println!("triangle dimension: {:?}", poly_dimension(&triangle).unwrap());

    let strip = TropicalPolyhedron::new(2, bound(0, Cmp::Lt, 0)).unwrap();
    println!("open strip compact: {}", is_def_compact(&strip).unwrap());
}
