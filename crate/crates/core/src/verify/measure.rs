//! Lebesgue-measure preservation: `Σ_{x ∈ F⁻¹(y)} 1/|F'(x)| = 1` for almost every `y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plcore::PLLift;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub verdict: bool,
    /// Number of value pieces on which the preimage density was evaluated.
    pub pieces: usize,
    /// First value piece `[lo, hi]` with density different from one.
    pub offending: Option<(Rational, Rational, Rational)>,
}

/// Exact decision: each linear piece spreads density `1/|slope|` over its
/// image mod 1; the total density must equal one on every piece of `[0,1)`.
pub fn check_measure_preserving(m: &PLLift) -> Result<MeasureReport> {
    let mut events: Vec<(Rational, Rational)> = Vec::with_capacity(2 * m.vertex_count() + 2);
    for seg in m.segments() {
        let slope = seg.slope();
        if slope.is_zero() {
            return Err(Error::ZeroSlope(seg.x0.to_string(), seg.x1.to_string()));
        }
        let w = slope.abs().recip();
        let (lo, hi) = seg.value_range();
        let k0 = lo.floor_i64();
        let k1 = hi.ceil_i64();
        for k in k0..k1 {
            let kk = Rational::from_integer(k);
            let s = lo.clone().max(kk.clone()) - &kk;
            let e = hi.clone().min(&kk + 1) - &kk;
            if s < e {
                events.push((s, w.clone()));
                events.push((e, -&w));
            }
        }
    }
    events.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let one = Rational::one();
    let mut density = Rational::zero();
    let mut pieces = 0usize;
    let mut i = 0;
    let mut pos = Rational::zero();
    while i < events.len() {
        let x = events[i].0.clone();
        if x > pos {
            pieces += 1;
            if density != one {
                return Ok(MeasureReport { verdict: false, pieces, offending: Some((pos, x, density)) });
            }
        }
        while i < events.len() && events[i].0 == x {
            density += &events[i].1;
            i += 1;
        }
        pos = x;
    }
    if pos < one {
        return Ok(MeasureReport { verdict: false, pieces: pieces + 1, offending: Some((pos, one, density)) });
    }
    Ok(MeasureReport { verdict: true, pieces, offending: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn identity_and_rotation_preserve() {
        assert!(check_measure_preserving(&PLLift::identity()).unwrap().verdict);
        assert!(check_measure_preserving(&PLLift::rotation(&q(1, 3))).unwrap().verdict);
    }

    #[test]
    fn unequal_tent_fails() {
        // Slopes 3 and -2 over a degree-one lift: density 1/3 + 1/2 on the overlap.
        let f = PLLift::new(1, vec![(q(0, 1), q(0, 1)), (q(3, 5), q(9, 5)), (q(1, 1), q(1, 1))]).unwrap();
        let r = check_measure_preserving(&f).unwrap();
        assert!(!r.verdict);
        assert!(r.offending.is_some());
    }

    #[test]
    fn doubling_with_fold_preserves() {
        // Slopes 3, -3, 3 on thirds: three preimages with weight 1/3 each.
        let f = PLLift::new(1, vec![(q(0, 1), q(0, 1)), (q(1, 3), q(1, 1)), (q(2, 3), q(0, 1)), (q(1, 1), q(1, 1))]).unwrap();
        assert!(check_measure_preserving(&f).unwrap().verdict);
    }

    #[test]
    fn zero_slope_is_an_error() {
        let f = PLLift::new(1, vec![(q(0, 1), q(0, 1)), (q(1, 2), q(0, 1)), (q(1, 1), q(1, 1))]).unwrap();
        assert!(matches!(check_measure_preserving(&f), Err(Error::ZeroSlope(..))));
    }
}
