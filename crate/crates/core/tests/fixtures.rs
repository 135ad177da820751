//! Hand-transcribed vertex lists against the generators.
//!
//! The transcriptions keep the printed values; see `common::repair` for how
//! inconsistent abscissae are fixed.

mod common;

use common::{load, repair};
use crookmaps::generators::{base_f, lambda_hat, sigma};
use crookmaps::q;

#[test]
fn sigma6_transcription() {
    let (pts, moved) = repair(load("sigma6.txt"), &q(70, 6));
    assert_eq!(moved, 1);
    assert!(pts.contains(&(q(51, 70), q(1, 2))));
    assert_eq!(pts, sigma(6).map.vertices());
}

#[test]
fn sigma7_transcription() {
    let raw = load("sigma7.txt");
    assert!(raw.contains(&(q(121, 169), q(3, 7))) && raw.contains(&(q(121, 169), q(5, 7))));
    let (pts, moved) = repair(raw, &q(169, 7));
    assert_eq!(moved, 3);
    for v in [(q(51, 169), q(3, 7)), (q(119, 169), q(3, 7)), (q(150, 169), q(4, 7))] {
        assert!(pts.contains(&v));
    }
    assert_eq!(pts, sigma(7).map.vertices());
}

#[test]
fn lambda_hat_block_transcription() {
    let (pts, moved) = repair(load("lambda_hat7_block.txt"), &q(239, 7));
    assert_eq!(moved, 5);
    for k in [2, 4, 6] {
        let block = lambda_hat(7, k).unwrap().restrict(&q(0, 1), &q(1, 1)).unwrap();
        assert_eq!(pts, block.vertices(), "k = {k}");
    }
}

#[test]
fn base_map_transcription() {
    let (pts, moved) = repair(load("base_f_lift_head.txt"), &q(13, 1));
    assert_eq!(moved, 0);
    let f = base_f();
    // The drawn path stops where it reaches height 1, inside a linear piece.
    let (last, turning) = pts.split_last().unwrap();
    let head: Vec<_> = f.vertices().iter().filter(|v| v.0 < last.0).cloned().collect();
    assert_eq!(turning, head.as_slice());
    for (x, y) in &pts {
        assert_eq!(f.eval(x), *y);
    }
}
