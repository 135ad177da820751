//! δ-crookedness: for preimages `c` of `a` and `d` of `b`, the path from `c`
//! to `d` must first come within `δ` of `b` and afterwards within `δ` of `a`
//! (strict inequalities, distances taken mod 1 for circle maps).
//!
//! Two deciders are provided. The fast one walks consecutive preimage pairs
//! and evaluates a finite family of `(a, b)` that meets every cell of the
//! line arrangement on which the verdict is constant. The oracle samples
//! path endpoints on a value grid, checks every preimage pair directly and
//! decides each path with an independent interval-set computation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::plcore::{PLLift, PlFn};
use crate::rational::Rational;

/// A map viewed as a piecewise-linear path source.
#[derive(Debug, Clone)]
pub struct CrookView {
    pts: Vec<(Rational, Rational)>,
    circle: bool,
    /// Where `c` ranges: the fundamental domain for lifts, the whole domain otherwise.
    c_range: (Rational, Rational),
}

impl CrookView {
    /// Circle view of a lift; vertices are unrolled over `[-1, 2]`.
    pub fn circle(m: &PLLift) -> Self {
        let pts = m.extended_vertices(&Rational::from_integer(-1), &Rational::from_integer(2));
        CrookView { pts: dedup_x(pts), circle: true, c_range: (Rational::zero(), Rational::one()) }
    }

    /// Interval view with plain distances.
    pub fn interval(f: &PlFn) -> Self {
        let c_range = (f.x_min().clone(), f.x_max().clone());
        CrookView { pts: f.vertices().to_vec(), circle: false, c_range }
    }

    /// Circle distances on a lift restricted to a window; only preimage
    /// pairs inside the window are examined.
    pub fn window(f: &PlFn) -> Self {
        let c_range = (f.x_min().clone(), f.x_max().clone());
        CrookView { pts: f.vertices().to_vec(), circle: true, c_range }
    }

    pub fn is_circle(&self) -> bool {
        self.circle
    }

    fn dist(&self, u: &Rational, v: &Rational) -> Rational {
        if self.circle {
            crate::plcore::circle_point_distance(u, v)
        } else {
            (u - v).abs()
        }
    }

    fn normalise(&self, y: &Rational) -> Rational {
        if self.circle {
            y.fract()
        } else {
            y.clone()
        }
    }

    fn same_point(&self, a: &Rational, b: &Rational) -> bool {
        if self.circle {
            (a - b).is_integer()
        } else {
            a == b
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let i = self.pts.partition_point(|p| &p.0 <= x).clamp(1, self.pts.len() - 1);
        let (p, r) = (&self.pts[i - 1], &self.pts[i]);
        if x == &p.0 {
            return p.1.clone();
        }
        &p.1 + &(&(&r.1 - &p.1) * &(&(x - &p.0) / &(&r.0 - &p.0)))
    }

    /// Solutions of `f(x) = y` (mod 1 for circles) on the unrolled domain.
    pub fn preimages(&self, y: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        let last = self.pts.len() - 2;
        for (i, w) in self.pts.windows(2).enumerate() {
            let (x0, y0, x1, y1) = (&w[0].0, &w[0].1, &w[1].0, &w[1].1);
            let (lo, hi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
            let targets: Vec<Rational> = if self.circle {
                ((lo - y).ceil_i64()..=(hi - y).floor_i64()).map(|k| y + k).collect()
            } else if lo <= y && y <= hi {
                vec![y.clone()]
            } else {
                vec![]
            };
            for t in targets {
                if y0 == y1 {
                    out.push(x0.clone());
                    continue;
                }
                let x = x0 + &(&(x1 - x0) * &(&(&t - y0) / &(y1 - y0)));
                if &x < x1 || i == last {
                    out.push(x);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// `[(x, f(x))]` from `from` to `to` in path order, vertices in between included.
    pub fn path(&self, from: &Rational, to: &Rational) -> Vec<(Rational, Rational)> {
        let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
        let mut out = vec![(lo.clone(), self.eval(lo))];
        let start = self.pts.partition_point(|p| &p.0 <= lo);
        for p in &self.pts[start..] {
            if &p.0 >= hi {
                break;
            }
            out.push(p.clone());
        }
        if lo != hi {
            out.push((hi.clone(), self.eval(hi)));
        }
        if from > to {
            out.reverse();
        }
        out
    }

    fn vertex_values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.pts.iter().map(|p| self.normalise(&p.1)).collect();
        v.sort();
        v.dedup();
        v
    }

    fn value_range(&self) -> (Rational, Rational) {
        let lo = self.pts.iter().map(|p| &p.1).min().cloned().expect("nonempty");
        let hi = self.pts.iter().map(|p| &p.1).max().cloned().expect("nonempty");
        (lo, hi)
    }
}

fn dedup_x(mut pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    pts.dedup_by(|b, a| a.0 == b.0);
    pts
}

/// A pair `(c, d)` with `f(c) = a`, `f(d) = b` whose connecting path never
/// shows the required pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub delta: Rational,
}

/// How a pair `(c, d)` satisfied the pattern: the path enters the `δ`-ball
/// around `b` at `entry` (an infimum) and reaches the `δ`-ball around `a`
/// at `d_prime` afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPattern {
    pub c: Rational,
    pub d: Rational,
    pub entry: Rational,
    pub d_prime: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrookMethod {
    Fast,
    Oracle,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrookednessReport {
    pub delta: Rational,
    pub verdict: bool,
    pub method: CrookMethod,
    pub violation: Option<Violation>,
    /// Number of `(a, b)` value pairs evaluated.
    pub value_pairs: u64,
    /// False when only a sub-sample of value pairs was examined.
    pub complete: bool,
}

/// Greedy scan along a path given by its values in path order: returns the
/// entry point into the `b`-ball and the place where the `a`-ball is reached.
fn scan_values(view: &CrookView, path: &[(Rational, Rational)], a: &Rational, b: &Rational, delta: &Rational) -> Option<(Rational, Rational)> {
    let mut entry: Option<(usize, Rational, Rational)> = None;
    if view.dist(&path[0].1, b) < *delta {
        entry = Some((0, path[0].0.clone(), path[0].1.clone()));
    } else {
        for i in 0..path.len() - 1 {
            let (v0, v1) = (&path[i].1, &path[i + 1].1);
            let w = if v1 > v0 {
                let w = if view.circle { b - delta + (v0 - b + delta).ceil() } else { b - delta };
                (v0 <= &w && &w < v1).then_some(w)
            } else if v1 < v0 {
                let w = if view.circle { b + delta + (v0 - b - delta).floor() } else { b + delta };
                (v1 < &w && &w <= v0).then_some(w)
            } else {
                None
            };
            if let Some(w) = w {
                let x = interpolate_x(&path[i], &path[i + 1], &w);
                entry = Some((i, x, w));
                break;
            }
        }
    }
    let (i0, ex, ew) = entry?;
    let mut prev = (ex.clone(), ew);
    for p in &path[i0 + 1..] {
        if let Some(x) = reach(view, &prev, p, a, delta) {
            return Some((ex, x));
        }
        prev = p.clone();
    }
    if view.dist(&prev.1, a) < *delta {
        return Some((ex, prev.0));
    }
    None
}

fn interpolate_x(p: &(Rational, Rational), r: &(Rational, Rational), w: &Rational) -> Rational {
    if p.1 == r.1 {
        return p.0.clone();
    }
    &p.0 + &(&(&r.0 - &p.0) * &(&(w - &p.1) / &(&r.1 - &p.1)))
}

/// A point on the linear piece `p -> r` closest to `a`, if that distance is below `δ`.
fn reach(view: &CrookView, p: &(Rational, Rational), r: &(Rational, Rational), a: &Rational, delta: &Rational) -> Option<Rational> {
    let (lo, hi) = if p.1 <= r.1 { (&p.1, &r.1) } else { (&r.1, &p.1) };
    let hit = if view.circle {
        let k = (lo - a).ceil();
        let t = a + &k;
        (&t <= hi).then_some(t)
    } else {
        (lo <= a && a <= hi).then(|| a.clone())
    };
    if let Some(t) = hit {
        return Some(interpolate_x(p, r, &t));
    }
    let (dp, dr) = (view.dist(&p.1, a), view.dist(&r.1, a));
    let (best, x) = if dp <= dr { (dp, &p.0) } else { (dr, &r.0) };
    (best < *delta).then(|| x.clone())
}

/// Decides δ-crookedness between `a` and `b` on all consecutive preimage pairs.
/// Returns the satisfying patterns, or the first violating pair.
pub fn crooked_between_view(view: &CrookView, a: &Rational, b: &Rational, delta: &Rational) -> Result<Vec<PairPattern>, Violation> {
    let (a, b) = (view.normalise(a), view.normalise(b));
    if view.same_point(&a, &b) || (view.circle && *delta > Rational::half()) {
        return Ok(vec![]);
    }
    let pa = view.preimages(&a);
    let pb = view.preimages(&b);
    let mut merged: Vec<(&Rational, bool)> = pa.iter().map(|x| (x, true)).chain(pb.iter().map(|x| (x, false))).collect();
    merged.sort();
    let mut patterns = Vec::new();
    for w in merged.windows(2) {
        let ((x0, t0), (x1, t1)) = (w[0], w[1]);
        let outside = x0 < &view.c_range.0 || (view.circle && x0 >= &view.c_range.1);
        if t0 == t1 || outside {
            continue;
        }
        let (c, d) = if t0 { (x0, x1) } else { (x1, x0) };
        let path = view.path(c, d);
        match scan_values(view, &path, &a, &b, delta) {
            Some((entry, d_prime)) => patterns.push(PairPattern { c: c.clone(), d: d.clone(), entry, d_prime }),
            None => {
                return Err(Violation { a, b, c: c.clone(), d: d.clone(), delta: delta.clone() });
            }
        }
    }
    Ok(patterns)
}

/// δ-crookedness of a circle lift between `a` and `b`.
pub fn crooked_between(m: &PLLift, a: &Rational, b: &Rational, delta: &Rational) -> Result<Vec<PairPattern>, Violation> {
    crooked_between_view(&CrookView::circle(m), a, b, delta)
}

/// δ-crookedness of an interval map between `a` and `b`.
pub fn crooked_between_interval(f: &PlFn, a: &Rational, b: &Rational, delta: &Rational) -> Result<Vec<PairPattern>, Violation> {
    crooked_between_view(&CrookView::interval(f), a, b, delta)
}

/// Sorted critical set with one representative strictly inside each gap
/// (cyclic on the circle).
fn with_midpoints(view: &CrookView, mut crit: Vec<Rational>, lo: &Rational, hi: &Rational) -> Vec<Rational> {
    if view.circle {
        crit = crit.into_iter().map(|x| x.fract()).collect();
    } else {
        crit.retain(|x| lo <= x && x <= hi);
        crit.push(lo.clone());
        crit.push(hi.clone());
    }
    crit.sort();
    crit.dedup();
    let mut out = Vec::with_capacity(2 * crit.len() + 1);
    for w in crit.windows(2) {
        out.push(w[0].clone());
        out.push(w[0].midpoint(&w[1]));
    }
    let last = crit.last().expect("nonempty").clone();
    if view.circle {
        let wrap = last.midpoint(&(&crit[0] + 1)).fract();
        out.push(last);
        out.push(wrap);
    } else {
        out.push(last);
    }
    out
}

fn shifts(values: &[Rational], delta: &Rational, reach: i64) -> Vec<Rational> {
    let mut out = Vec::with_capacity(values.len() * (2 * reach as usize + 1));
    for v in values {
        for j in -reach..=reach {
            out.push(v + &(delta * j));
        }
    }
    out
}

/// Exact δ-crookedness decision by the arrangement argument.
pub fn delta_crooked_fast(view: &CrookView, delta: &Rational) -> CrookednessReport {
    let mut report = CrookednessReport {
        delta: delta.clone(),
        verdict: true,
        method: CrookMethod::Fast,
        violation: None,
        value_pairs: 0,
        complete: true,
    };
    if view.circle && *delta > Rational::half() {
        return report;
    }
    let values = view.vertex_values();
    let (lo, hi) = view.value_range();
    let a_cands = with_midpoints(view, shifts(&values, delta, 3), &lo, &hi);
    let base_b = shifts(&values, delta, 1);
    let grid: Vec<Rational> = if view.circle {
        let steps = (Rational::from_integer(4) / delta).ceil_i64();
        if steps <= 256 {
            (0..steps).map(|i| delta * &Rational::new(i, 4)).filter(|x| x < &Rational::one()).collect()
        } else {
            Vec::new()
        }
    } else {
        Vec::new()
    };
    let found = a_cands.par_iter().map(|a| {
        let mut crit = base_b.clone();
        crit.extend((-2..=2).map(|j| a + &(delta * j)));
        crit.extend(grid.iter().cloned());
        let b_cands = with_midpoints(view, crit, &lo, &hi);
        let n = b_cands.len() as u64;
        for b in &b_cands {
            if let Err(v) = crooked_between_view(view, a, b, delta) {
                return (n, Some(v));
            }
        }
        (n, None)
    });
    // First violation in candidate order keeps witnesses deterministic.
    let results: Vec<(u64, Option<Violation>)> = found.collect();
    for (n, v) in results {
        report.value_pairs += n;
        if report.violation.is_none() {
            if let Some(v) = v {
                report.verdict = false;
                report.violation = Some(v);
            }
        }
    }
    report
}

/// Sub-sampled check over the supplied value pairs, flagged incomplete.
pub fn delta_crooked_sampled(view: &CrookView, delta: &Rational, pairs: &[(Rational, Rational)]) -> CrookednessReport {
    let violation = pairs
        .par_iter()
        .find_map_first(|(a, b)| crooked_between_view(view, a, b, delta).err());
    CrookednessReport {
        delta: delta.clone(),
        verdict: violation.is_none(),
        method: CrookMethod::Sampled,
        violation,
        value_pairs: pairs.len() as u64,
        complete: false,
    }
}

/// Path test by interval sets: with `B = {τ : d(f(τ), b) < δ}` and
/// `A = {τ : d(f(τ), a) < δ}` along the path, the pattern exists iff
/// `inf B < sup A`.
pub fn path_is_crooked(view: &CrookView, path: &[(Rational, Rational)], delta: &Rational) -> bool {
    let a = path[0].1.clone();
    let b = path[path.len() - 1].1.clone();
    if path.len() == 1 {
        return true;
    }
    let mut inf_b: Option<Rational> = None;
    let mut sup_a: Option<Rational> = None;
    for (i, w) in path.windows(2).enumerate() {
        let base = Rational::from_integer(i as i64);
        if inf_b.is_none() {
            if let Some((lo, _)) = ball_params(view, &w[0].1, &w[1].1, &b, delta) {
                inf_b = Some(&base + &lo);
            }
        }
        if let Some((_, hi)) = ball_params(view, &w[0].1, &w[1].1, &a, delta) {
            sup_a = Some(&base + &hi);
        }
    }
    match (inf_b, sup_a) {
        (Some(ib), Some(sa)) => ib < sa,
        _ => false,
    }
}

/// For the linear piece `u(τ) = u0 + τ (u1 - u0)`, `τ ∈ [0,1]`, the infimum
/// and supremum of `{τ : d(u(τ), t) < δ}` if the set is nonempty.
fn ball_params(view: &CrookView, u0: &Rational, u1: &Rational, t: &Rational, delta: &Rational) -> Option<(Rational, Rational)> {
    let du = u1 - u0;
    let zero = Rational::zero();
    let one = Rational::one();
    if du.is_zero() {
        return (view.dist(u0, t) < *delta).then(|| (zero, one));
    }
    let centres: Vec<Rational> = if view.circle {
        let (lo, hi) = if u0 <= u1 { (u0, u1) } else { (u1, u0) };
        ((lo - t - delta).floor_i64()..=(hi - t + delta).ceil_i64()).map(|k| t + k).collect()
    } else {
        vec![t.clone()]
    };
    let mut best: Option<(Rational, Rational)> = None;
    for c in centres {
        let mut p = (&(&c - delta) - u0) / &du;
        let mut r = (&(&c + delta) - u0) / &du;
        if p > r {
            std::mem::swap(&mut p, &mut r);
        }
        // Open interval (p, r) intersected with [0, 1].
        let lo = p.clone().max(zero.clone());
        let hi = r.clone().min(one.clone());
        let nonempty = lo < hi || (lo == hi && lo > p && lo < r);
        if !nonempty {
            continue;
        }
        best = Some(match best {
            None => (lo, hi),
            Some((l, h)) => (l.min(lo), h.max(hi)),
        });
    }
    best
}

/// Def.-style oracle: every path between preimages of grid values `a`, `b`
/// (step `res`) must be crooked. Circle paths are limited to one period.
pub fn delta_crooked_oracle(view: &CrookView, delta: &Rational, res: &Rational) -> CrookednessReport {
    let (lo, hi) = if view.circle {
        (Rational::zero(), Rational::one())
    } else {
        view.value_range()
    };
    let mut grid = Vec::new();
    let mut v = (&lo / res).ceil() * res;
    while (view.circle && v < hi) || (!view.circle && v <= hi) {
        grid.push(v.clone());
        v = &v + res;
    }
    let pre: Vec<Vec<Rational>> = grid.iter().map(|y| view.preimages(y)).collect();
    let one = Rational::one();
    let violation = (0..grid.len()).into_par_iter().find_map_first(|ia| {
        for (ib, b) in grid.iter().enumerate() {
            let a = &grid[ia];
            for c in &pre[ia] {
                if view.circle && (c < &view.c_range.0 || c >= &view.c_range.1) {
                    continue;
                }
                for d in &pre[ib] {
                    if view.circle && (&(d - c).abs() > &one) {
                        continue;
                    }
                    let path = view.path(c, d);
                    if !path_is_crooked(view, &path, delta) {
                        return Some(Violation { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone(), delta: delta.clone() });
                    }
                }
            }
        }
        None
    });
    CrookednessReport {
        delta: delta.clone(),
        verdict: violation.is_none(),
        method: CrookMethod::Oracle,
        violation,
        value_pairs: (grid.len() * grid.len()) as u64,
        complete: true,
    }
}

/// Re-checks a violation from first principles: endpoint values and the
/// interval-set path test.
pub fn replay_violation(view: &CrookView, v: &Violation) -> bool {
    let fa = view.eval(&v.c);
    let fb = view.eval(&v.d);
    if !view.same_point(&fa, &v.a) || !view.same_point(&fb, &v.b) {
        return false;
    }
    !path_is_crooked(view, &view.path(&v.c, &v.d), &v.delta)
}

/// Fast certificate for a circle lift.
pub fn delta_crooked_certificate(m: &PLLift, delta: &Rational) -> CrookednessReport {
    delta_crooked_fast(&CrookView::circle(m), delta)
}

/// Fast certificate for an interval map.
pub fn delta_crooked_certificate_interval(f: &PlFn, delta: &Rational) -> CrookednessReport {
    delta_crooked_fast(&CrookView::interval(f), delta)
}
