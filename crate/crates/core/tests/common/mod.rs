//! Shared helpers for the integration tests.
#![allow(dead_code)]

use crookmaps::Rational;

pub type Pts = Vec<(Rational, Rational)>;

/// Reads a `x y` per line vertex list from `tests/fixtures`.
pub fn load(name: &str) -> Pts {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<Rational>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

fn slope_ok(a: &(Rational, Rational), b: &(Rational, Rational), s: &Rational) -> bool {
    b.0 > a.0 && ((&b.1 - &a.1) / (&b.0 - &a.0)).abs() == *s
}

/// Left-to-right repair at constant slope modulus `s`: a vertex whose
/// incoming piece has the wrong slope is moved to the unique abscissa that
/// fixes it, keeping its height. Returns the repaired list and the number of
/// moved vertices; panics if a moved vertex is still inconsistent with its
/// right neighbour.
pub fn repair(mut pts: Pts, s: &Rational) -> (Pts, usize) {
    let mut moved = 0;
    for i in 1..pts.len() {
        if slope_ok(&pts[i - 1], &pts[i], s) {
            continue;
        }
        let x = &pts[i - 1].0 + &((&pts[i].1 - &pts[i - 1].1).abs() / s);
        pts[i].0 = x;
        moved += 1;
        assert!(i + 1 == pts.len() || slope_ok(&pts[i], &pts[i + 1], s), "vertex {i} cannot be repaired consistently");
    }
    (pts, moved)
}
