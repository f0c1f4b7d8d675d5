//! Ball geometry over a finite ultrametric space given by a distance table.

use berkovich_line::berkline::{join, point_eq, BerkPoint};
use berkovich_line::fields::{validate_table, UltrametricTable};
use berkovich_line::trees::convex_hull;
use berkovich_line::valgrp::Gamma0Value;

fn main() {
    let labels: Vec<String> = ["0", "a", "b"].iter().map(|s| s.to_string()).collect();
    let e = Gamma0Value::exp;
    let dist = vec![
        vec![Gamma0Value::Zero, e(0), e(0)],
        vec![e(0), Gamma0Value::Zero, e(2)],
        vec![e(0), e(2), Gamma0Value::Zero],
    ];
    let table = UltrametricTable::new(labels.clone(), dist).unwrap();
    let (a, b) = (table.index_of("a").unwrap(), table.index_of("b").unwrap());
    let j = join(&table, &BerkPoint::simple(a), &BerkPoint::simple(b));
    println!("join of a and b has radius {}", j.radius().unwrap());
    println!(
        "B(a, e=2) = B(b, e=2): {}",
        point_eq(&table, &BerkPoint::disc(a, e(2)), &BerkPoint::disc(b, e(2)))
    );
    let hull = convex_hull(&table, &[BerkPoint::simple(a), BerkPoint::simple(b)], true).unwrap();
    print!("{}", hull.to_dot(|&i| table.label(i).to_string(), |_| None));

    let broken = vec![
        vec![Gamma0Value::Zero, e(0), e(2)],
        vec![e(0), Gamma0Value::Zero, e(1)],
        vec![e(2), e(1), Gamma0Value::Zero],
    ];
    println!("non-ultrametric table: {:?}", validate_table(&labels, &broken));
}
