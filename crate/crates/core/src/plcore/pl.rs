//! Piecewise-linear functions on a closed interval.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One linear piece `(x0, y0) -> (x1, y1)` of a piecewise-linear graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Segment {
    pub fn slope(&self) -> Rational {
        (&self.y1 - &self.y0) / (&self.x1 - &self.x0)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.y0 + &(&(x - &self.x0) * &self.slope())
    }

    /// Smallest and largest value on the segment.
    pub fn value_range(&self) -> (&Rational, &Rational) {
        if self.y0 <= self.y1 {
            (&self.y0, &self.y1)
        } else {
            (&self.y1, &self.y0)
        }
    }
}

/// Three points are collinear iff the two slopes agree (cross-multiplied).
pub(crate) fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

/// Drops interior vertices that lie on the line through their neighbours.
pub(crate) fn drop_collinear(pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    if pts.len() <= 2 {
        return pts;
    }
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
            out.pop();
        }
        out.push(p);
    }
    out
}

/// A continuous piecewise-linear function on `[x_first, x_last]`, stored as
/// its vertex list with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlFn {
    pts: Vec<(Rational, Rational)>,
}

impl PlFn {
    /// Validates the vertex list and returns it in canonical (non-collinear) form.
    pub fn new(pts: Vec<(Rational, Rational)>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::InvalidMap("a piecewise-linear map needs at least two vertices".into()));
        }
        if let Some(w) = pts.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidMap(format!(
                "abscissae must increase strictly (found {} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(PlFn { pts: drop_collinear(pts) })
    }

    /// Builds from vertices already known to be strictly increasing.
    pub(crate) fn from_sorted_unchecked(pts: Vec<(Rational, Rational)>) -> Self {
        debug_assert!(pts.windows(2).all(|w| w[0].0 < w[1].0));
        PlFn { pts: drop_collinear(pts) }
    }

    /// Uniform-step walk: vertex `i` sits at `(x0 + i*dx, heights[i]*dy)`.
    pub fn from_walk(x0: &Rational, dx: &Rational, dy: &Rational, heights: &[i64]) -> Self {
        let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(heights.len());
        for (i, h) in heights.iter().enumerate() {
            let turning = i == 0
                || i + 1 == heights.len()
                || (h - heights[i - 1]).signum() != (heights[i + 1] - h).signum();
            if turning {
                pts.push((x0 + &(dx * i as i64), dy * *h));
            }
        }
        PlFn::from_sorted_unchecked(pts)
    }

    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.pts
    }

    pub fn into_vertices(self) -> Vec<(Rational, Rational)> {
        self.pts
    }

    pub fn x_min(&self) -> &Rational {
        &self.pts[0].0
    }

    pub fn x_max(&self) -> &Rational {
        &self.pts[self.pts.len() - 1].0
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment {
            x0: self.pts[i].0.clone(),
            y0: self.pts[i].1.clone(),
            x1: self.pts[i + 1].0.clone(),
            y1: self.pts[i + 1].1.clone(),
        }
    }

    pub fn segment_count(&self) -> usize {
        self.pts.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.pts
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
    }

    /// Index of the segment whose half-open domain `[x_i, x_{i+1})` contains `x`
    /// (the last segment also owns the right endpoint).
    pub fn segment_index(&self, x: &Rational) -> Option<usize> {
        if x < self.x_min() || x > self.x_max() {
            return None;
        }
        let i = self.pts.partition_point(|p| &p.0 <= x);
        Some(i.saturating_sub(1).min(self.segment_count() - 1))
    }

    /// Value at `x`, or `None` outside the domain.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let i = self.segment_index(x)?;
        let (a, b) = (&self.pts[i], &self.pts[i + 1]);
        if x == &a.0 {
            return Some(a.1.clone());
        }
        if x == &b.0 {
            return Some(b.1.clone());
        }
        Some(&a.1 + &(&(&b.1 - &a.1) * &(&(x - &a.0) / &(&b.0 - &a.0))))
    }

    pub fn min_value(&self) -> Rational {
        self.pts.iter().map(|p| &p.1).min().cloned().expect("nonempty")
    }

    pub fn max_value(&self) -> Rational {
        self.pts.iter().map(|p| &p.1).max().cloned().expect("nonempty")
    }

    /// `y -> c - y`.
    pub fn reflect_values(&self, c: &Rational) -> PlFn {
        PlFn { pts: self.pts.iter().map(|(x, y)| (x.clone(), c - y)).collect() }
    }

    /// `y -> a*y + b`.
    pub fn affine_values(&self, a: &Rational, b: &Rational) -> PlFn {
        PlFn::from_sorted_unchecked(self.pts.iter().map(|(x, y)| (x.clone(), &(a * y) + b)).collect())
    }

    /// Restriction to `[a, b]` (endpoints clipped to the domain).
    pub fn restrict(&self, a: &Rational, b: &Rational) -> Result<PlFn> {
        if a >= b || a < self.x_min() || b > self.x_max() {
            return Err(Error::InvalidArgument(format!("cannot restrict to [{a}, {b}]")));
        }
        let mut pts = vec![(a.clone(), self.eval(a).expect("in domain"))];
        pts.extend(self.pts.iter().filter(|p| &p.0 > a && &p.0 < b).cloned());
        pts.push((b.clone(), self.eval(b).expect("in domain")));
        Ok(PlFn::from_sorted_unchecked(pts))
    }

    /// Precomposition with the increasing affine change of variable that maps
    /// `[new_a, new_b]` onto the current domain.
    pub fn reparametrize(&self, new_a: &Rational, new_b: &Rational) -> PlFn {
        let scale = (new_b - new_a) / (self.x_max() - self.x_min());
        let x0 = self.x_min().clone();
        PlFn {
            pts: self
                .pts
                .iter()
                .map(|(x, y)| (new_a + &(&(x - &x0) * &scale), y.clone()))
                .collect(),
        }
    }

    /// Concatenation of graphs whose domains abut and whose values agree at the seams.
    pub fn concat(parts: &[PlFn]) -> Result<PlFn> {
        let mut pts: Vec<(Rational, Rational)> = Vec::new();
        for part in parts {
            if let Some(last) = pts.last() {
                if last != &part.pts[0] {
                    return Err(Error::InvalidMap(format!(
                        "pieces do not join: ({}, {}) vs ({}, {})",
                        last.0, last.1, part.pts[0].0, part.pts[0].1
                    )));
                }
                pts.extend(part.pts.iter().skip(1).cloned());
            } else {
                pts.extend(part.pts.iter().cloned());
            }
        }
        PlFn::new(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn canonical_form_drops_collinear_points() {
        let f = PlFn::new(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 2)), (q(1, 1), q(1, 1))]).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn eval_interpolates() {
        let f = PlFn::new(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 1)), (q(1, 1), q(0, 1))]).unwrap();
        assert_eq!(f.eval(&q(1, 4)), Some(q(1, 2)));
        assert_eq!(f.eval(&q(3, 4)), Some(q(1, 2)));
        assert_eq!(f.eval(&q(1, 1)), Some(q(0, 1)));
        assert_eq!(f.eval(&q(2, 1)), None);
    }

    #[test]
    fn walk_merges_runs() {
        let f = PlFn::from_walk(&q(0, 1), &q(1, 4), &q(1, 2), &[0, 1, 2, 1, 2]);
        let xs: Vec<_> = f.vertices().iter().map(|p| p.0.clone()).collect();
        assert_eq!(xs, vec![q(0, 1), q(1, 2), q(3, 4), q(1, 1)]);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(PlFn::new(vec![(q(1, 1), q(0, 1)), (q(0, 1), q(0, 1))]).is_err());
    }
}
