//! Concatenating segments of the value group and collapsing them onto one
//! interval.

use berkovich_line::valgrp::{collapse, concat_segments, Gamma0Value, Segment};

fn main() {
    let e = Gamma0Value::exp;
    let seg = concat_segments(vec![
        Segment::new(e(0), e(-1)),
        Segment::new(e(3), e(1)),
        Segment::new(e(2), e(2)),
    ])
    .unwrap();
    let c = collapse(&seg).unwrap();
    println!("collapsed onto [{}; {}]", c.interval.lo, c.interval.hi);
    for (map, image) in c.maps.iter().zip(c.piece_images()) {
        println!(
            "x ↦ {}·x^{}  image {} → {}",
            map.coeff(),
            map.exponent(),
            image.origin,
            image.end
        );
    }
    let p = seg.point(1, e(2)).unwrap();
    let y = c.apply(&p).unwrap();
    let back = c.preimage(&seg, &y).unwrap().unwrap();
    println!(
        "piece {} at {} ↦ {y} ↦ piece {} at {}",
        p.piece, p.value, back.piece, back.value
    );
    let bad = concat_segments(vec![Segment::new(Gamma0Value::Zero, e(0))]).unwrap();
    println!("with a zero endpoint: {:?}", collapse(&bad));
}
