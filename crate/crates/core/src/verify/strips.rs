//! Monotone-branch counts per box of the `strips × strips` grid.

use crate::error::{Error, Result};
use crate::plcore::PLLift;
use crate::rational::Rational;

/// `counts[j][l]`: number of maximal monotone pieces of the representative
/// crossing the box `[j/N, (j+1)/N] × [l/N, (l+1)/N]` from bottom to top
/// (or top to bottom), where `N = strips`.
///
/// Every vertex must sit on the horizontal lattice `(1/N)ℤ`, and no vertical
/// lattice line may cut a unit piece, otherwise the grid is misaligned.
pub fn strip_branch_counts(m: &PLLift, strips: usize) -> Result<Vec<Vec<u64>>> {
    if strips == 0 {
        return Err(Error::InvalidArgument("need at least one strip".into()));
    }
    let n = strips as i64;
    let mut counts = vec![vec![0u64; strips]; strips];
    for seg in m.segments() {
        let h0 = &seg.y0 * n;
        let h1 = &seg.y1 * n;
        if !h0.is_integer() || !h1.is_integer() {
            return Err(Error::InvalidArgument(format!(
                "vertex value off the 1/{strips} lattice near x = {}",
                seg.x0
            )));
        }
        let (h0, h1) = (h0.floor_i64(), h1.floor_i64());
        if h0 == h1 {
            return Err(Error::ZeroSlope(seg.x0.to_string(), seg.x1.to_string()));
        }
        let step = if h1 > h0 { 1 } else { -1 };
        let slope = seg.slope();
        let mut h = h0;
        while h != h1 {
            let next = h + step;
            let xa = &seg.x0 + &(&(Rational::new(h, n) - &seg.y0) / &slope);
            let xb = &seg.x0 + &(&(Rational::new(next, n) - &seg.y0) / &slope);
            let col_a = (&xa * n).floor_i64();
            let col_b = (&xb * n).ceil_i64() - 1;
            let (col_lo, col_hi) = if col_a <= col_b { (col_a, col_b) } else { (col_b, col_a) };
            if col_lo != col_hi {
                return Err(Error::InvalidArgument(format!(
                    "a vertical strip boundary cuts the piece between x = {xa} and x = {xb}"
                )));
            }
            let row = h.min(next).rem_euclid(n) as usize;
            counts[col_lo.rem_euclid(n) as usize][row] += 1;
            h = next;
        }
    }
    Ok(counts)
}
