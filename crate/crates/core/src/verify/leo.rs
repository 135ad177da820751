//! Covering-time certificates for the locally-eventually-onto property.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plcore::{Arc, PLLift, RangeIndex};
use crate::rational::Rational;

/// Every arc of length at least `xi` covers the circle after `n` iterates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeoCertificate {
    pub xi: Rational,
    pub n: usize,
    /// `(cell start, covering time)` for the cells of width `xi/2` starting
    /// on the grid `(xi/2)ℤ`.
    pub cells: Vec<(Rational, usize)>,
}

/// Number of iterates after which `arc` covers the circle, if at most `cap`.
pub fn covering_time(m: &PLLift, arc: &Arc, cap: usize) -> Option<usize> {
    indexed_covering_time(&RangeIndex::new(m), arc, cap)
}

fn indexed_covering_time(index: &RangeIndex<'_>, arc: &Arc, cap: usize) -> Option<usize> {
    let mut cur = arc.clone();
    for k in 0..=cap {
        if cur.is_full() {
            return Some(k);
        }
        cur = index.arc_image(&cur);
    }
    None
}

/// Any arc of length `>= xi` contains one of the grid cells of width `xi/2`,
/// and images respect inclusion, so the worst cell bounds every such arc.
pub fn leo_certificate(m: &PLLift, xi: &Rational, cap: usize) -> Result<LeoCertificate> {
    if !xi.is_positive() {
        return Err(Error::InvalidArgument("ξ must be positive".into()));
    }
    if xi >= &Rational::one() {
        let n = covering_time(m, &Arc::full(), cap).expect("full arc");
        return Ok(LeoCertificate { xi: xi.clone(), n, cells: vec![(Rational::zero(), n)] });
    }
    let index = RangeIndex::new(m);
    let w = xi / 2;
    let count = (Rational::one() / &w).ceil_i64();
    let cells: Vec<(Rational, usize)> = (0..count)
        .into_par_iter()
        .map(|j| {
            let start = &w * j;
            let arc = Arc::new(start.clone(), w.clone()).expect("positive length");
            indexed_covering_time(&index, &arc, cap).map(|t| (start, t)).ok_or(Error::IterationCap { cap })
        })
        .collect::<Result<_>>()?;
    let n = cells.iter().map(|c| c.1).max().unwrap_or(0);
    Ok(LeoCertificate { xi: xi.clone(), n, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn full_arc_needs_no_iterates() {
        assert_eq!(covering_time(&PLLift::identity(), &Arc::full(), 0), Some(0));
    }

    #[test]
    fn rotation_never_covers() {
        let r = PLLift::rotation(&q(1, 3));
        assert!(matches!(leo_certificate(&r, &q(1, 10), 20), Err(Error::IterationCap { cap: 20 })));
    }

    #[test]
    fn expanding_map_covers() {
        let f = PLLift::new(4, vec![(q(0, 1), q(0, 1)), (q(1, 1), q(4, 1))]).unwrap();
        let c = leo_certificate(&f, &q(1, 8), 10).unwrap();
        // Cells of width 1/16 reach length 1/4, then the full circle.
        assert_eq!(c.n, 2);
    }

    #[test]
    fn indexed_ranges_match_direct_images() {
        let f = crate::generators::base_f();
        let lift = crate::plcore::RangeIndex::new(&f);
        for (s, l) in [(q(0, 1), q(1, 20)), (q(19, 20), q(1, 10)), (q(3, 7), q(5, 9)), (q(1, 3), q(0, 1))] {
            let arc = Arc::new(s, l).unwrap();
            assert_eq!(lift.arc_image(&arc), f.arc_image(&arc));
        }
    }
}
