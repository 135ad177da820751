//! Exact piecewise-linear lifts of circle maps and their algebra.

mod arc;
mod f64lift;
mod pl;
mod range;

pub use arc::Arc;
pub use f64lift::LiftF64;
pub use pl::{PlFn, Segment};
pub use range::RangeIndex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A degree-`d` lift `F̃` with `F̃(x+1) = F̃(x) + d`, stored as its graph over `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLLift {
    degree: i64,
    graph: PlFn,
}

/// One linear piece of a lift on the fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub domain: (Rational, Rational),
    pub slope: Rational,
    pub image: (Rational, Rational),
}

/// Linear pieces of a lift over `[0,1]`, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    pub branches: Vec<Branch>,
}

/// Slope extremes and the breakpoint separation `ι`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapMetrics {
    pub min_abs_slope: Rational,
    pub max_abs_slope: Rational,
    pub iota: Rational,
}

impl PLLift {
    /// Validates `x_0 = 0`, `x_last = 1` and `y_last = y_0 + degree`.
    pub fn new(degree: i64, vertices: Vec<(Rational, Rational)>) -> Result<Self> {
        let graph = PlFn::new(vertices)?;
        Self::from_graph(degree, graph)
    }

    pub fn from_graph(degree: i64, graph: PlFn) -> Result<Self> {
        if !graph.x_min().is_zero() || graph.x_max() != &Rational::one() {
            return Err(Error::InvalidMap("lift graph must span exactly [0, 1]".into()));
        }
        let v = graph.vertices();
        if v[v.len() - 1].1 != &v[0].1 + degree {
            return Err(Error::InvalidMap(format!(
                "lift is not continuous: F(1) = {} but F(0) + {degree} = {}",
                v[v.len() - 1].1,
                &v[0].1 + degree
            )));
        }
        Ok(PLLift { degree, graph })
    }

    pub(crate) fn from_sorted_unchecked(degree: i64, pts: Vec<(Rational, Rational)>) -> Self {
        let lift = PLLift { degree, graph: PlFn::from_sorted_unchecked(pts) };
        debug_assert!(lift.graph.x_min().is_zero() && lift.graph.x_max() == &Rational::one());
        lift
    }

    pub fn identity() -> Self {
        Self::rotation(&Rational::zero())
    }

    /// The rigid rotation `x -> x + a`.
    pub fn rotation(a: &Rational) -> Self {
        PLLift {
            degree: 1,
            graph: PlFn::from_sorted_unchecked(vec![(Rational::zero(), a.clone()), (Rational::one(), a + 1)]),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn graph(&self) -> &PlFn {
        &self.graph
    }

    pub fn vertices(&self) -> &[(Rational, Rational)] {
        self.graph.vertices()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.len()
    }

    /// Exact value of the lift at any real rational `x`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let k = x.floor();
        let u = x - &k;
        let y = self.graph.eval(&u).expect("fractional part lies in [0,1)");
        &y + &(&k * self.degree)
    }

    /// Value of the representative `F(x) = F̃(x) mod 1`.
    pub fn eval_mod1(&self, x: &Rational) -> Rational {
        self.eval(x).fract()
    }

    /// All lift vertices with abscissa in `[a, b]`, together with `(a, F̃(a))`
    /// and `(b, F̃(b))`.
    pub fn extended_vertices(&self, a: &Rational, b: &Rational) -> Vec<(Rational, Rational)> {
        assert!(a <= b, "extended_vertices needs a <= b");
        let mut out = vec![(a.clone(), self.eval(a))];
        if a == b {
            return out;
        }
        let pts = self.graph.vertices();
        let k0 = a.floor_i64();
        let k1 = b.floor_i64();
        for k in k0..=k1 {
            let kk = Rational::from_integer(k);
            let lo = a - &kk;
            let hi = b - &kk;
            let start = pts.partition_point(|p| p.0 <= lo);
            for p in &pts[start..] {
                if p.0 >= hi {
                    break;
                }
                // x = 1 of period k coincides with x = 0 of period k + 1.
                if p.0 == Rational::one() {
                    continue;
                }
                out.push((&p.0 + &kk, &p.1 + &(&kk * self.degree)));
            }
        }
        out.push((b.clone(), self.eval(b)));
        out
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.graph.segments()
    }

    pub fn has_zero_slope(&self) -> bool {
        self.graph.slopes().any(|s| s.is_zero())
    }

    /// `outer ∘ inner`, refusing to materialise more than `budget` vertices.
    pub fn compose_with_budget(outer: &PLLift, inner: &PLLift, budget: usize) -> Result<PLLift> {
        let graph = Self::compose_graph(outer, &inner.graph, budget)?;
        Ok(PLLift::from_sorted_unchecked(outer.degree * inner.degree, graph.into_vertices()))
    }

    /// `outer ∘ inner` for a piecewise-linear `inner` on any interval.
    pub fn compose_graph(outer: &PLLift, inner: &PlFn, budget: usize) -> Result<PlFn> {
        let opts = outer.graph.vertices();
        // Interior outer abscissae in [0,1); x = 1 is the next period's x = 0.
        let interior = &opts[..opts.len() - 1];
        let count_in = |lo: &Rational, hi: &Rational| -> u128 {
            let mut total = 0u128;
            for k in lo.floor_i64()..=hi.floor_i64() {
                let kk = Rational::from_integer(k);
                let a = lo - &kk;
                let b = hi - &kk;
                let i0 = interior.partition_point(|p| p.0 <= a);
                let i1 = interior.partition_point(|p| p.0 < b);
                total += i1.saturating_sub(i0) as u128;
            }
            total
        };
        let mut needed: u128 = inner.len() as u128;
        for seg in inner.segments() {
            let (lo, hi) = seg.value_range();
            if lo < hi {
                needed += count_in(lo, hi);
            }
        }
        if needed > budget as u128 {
            return Err(Error::VertexBudgetExceeded { needed, cap: budget });
        }

        let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(needed as usize);
        pts.push((inner.x_min().clone(), outer.eval(&inner.vertices()[0].1)));
        for seg in inner.segments() {
            let slope = seg.slope();
            if !slope.is_zero() {
                let (lo, hi) = seg.value_range();
                let mut pulled: Vec<(Rational, Rational)> = Vec::new();
                // Inverse of the segment as x = inv·y + shift.
                let inv = slope.recip();
                for k in lo.floor_i64()..=hi.floor_i64() {
                    let kk = Rational::from_integer(k);
                    let a = lo - &kk;
                    let b = hi - &kk;
                    let shift = &seg.x0 - &(&(&seg.y0 - &kk) * &inv);
                    let lifted = Rational::from_integer(k * outer.degree);
                    let i0 = interior.partition_point(|p| p.0 <= a);
                    for p in &interior[i0..] {
                        if p.0 >= b {
                            break;
                        }
                        let x = &(&p.0 * &inv) + &shift;
                        let y = if k == 0 { p.1.clone() } else { &p.1 + &lifted };
                        pulled.push((x, y));
                    }
                }
                if slope.is_negative() {
                    pulled.reverse();
                }
                pts.extend(pulled);
            }
            pts.push((seg.x1.clone(), outer.eval(&seg.y1)));
        }
        Ok(PlFn::from_sorted_unchecked(pts))
    }

    /// `outer ∘ inner` under the library's default vertex budget.
    pub fn compose(outer: &PLLift, inner: &PLLift) -> Result<PLLift> {
        Self::compose_with_budget(outer, inner, crate::DEFAULT_VERTEX_BUDGET)
    }

    /// `self^n`, by repeated composition.
    pub fn iterate(&self, n: usize, budget: usize) -> Result<PLLift> {
        let mut acc = PLLift::identity();
        for _ in 0..n {
            acc = PLLift::compose_with_budget(self, &acc, budget)?;
        }
        Ok(acc)
    }

    /// `F̃^n` restricted to `[a, b]`.
    pub fn iterate_on(&self, n: usize, a: &Rational, b: &Rational, budget: usize) -> Result<PlFn> {
        let mut acc = PlFn::new(vec![(a.clone(), a.clone()), (b.clone(), b.clone())])?;
        for _ in 0..n {
            acc = Self::compose_graph(self, &acc, budget)?;
        }
        Ok(acc)
    }

    /// `x -> F̃(x + a)`.
    pub fn pre_rotate(&self, a: &Rational) -> PLLift {
        let one = Rational::one();
        let ext = self.extended_vertices(a, &(a + &one));
        let pts = ext.into_iter().map(|(x, y)| (&x - a, y)).collect();
        PLLift::from_sorted_unchecked(self.degree, pts)
    }

    /// `x -> F̃(x) + b`.
    pub fn post_rotate(&self, b: &Rational) -> PLLift {
        PLLift { degree: self.degree, graph: self.graph.affine_values(&Rational::one(), b) }
    }

    /// `r_{-a} ∘ F ∘ r_a`.
    pub fn conjugate_rotation(&self, a: &Rational) -> PLLift {
        self.pre_rotate(a).post_rotate(&-a)
    }

    /// All `x ∈ [0,1)` with `F̃(x) ≡ y (mod 1)`, sorted, each tagged with the
    /// index of the linear piece containing it.
    pub fn preimages(&self, y: &Rational) -> Vec<(Rational, usize)> {
        let mut out = Vec::new();
        for (i, seg) in self.graph.segments().enumerate() {
            let slope = seg.slope();
            if slope.is_zero() {
                if (&seg.y0 - y).is_integer() {
                    out.push((seg.x0.clone(), i));
                }
                continue;
            }
            let (lo, hi) = seg.value_range();
            let k0 = (lo - y).ceil_i64();
            let k1 = (hi - y).floor_i64();
            for k in k0..=k1 {
                let target = y + k;
                let x = &seg.x0 + &(&(&target - &seg.y0) / &slope);
                if x < seg.x1 {
                    out.push((x, i));
                }
            }
        }
        out.sort();
        out
    }

    /// Image of a closed arc, saturating to the full circle.
    pub fn arc_image(&self, a: &Arc) -> Arc {
        if a.is_full() {
            return Arc::full();
        }
        let (lo, hi) = self.lift_range(a.start(), &a.end());
        Arc::new(lo.clone(), &hi - &lo).expect("ordered range")
    }

    /// `[min, max]` of the lift over `[a, b]`.
    pub fn lift_range(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        let ext = self.extended_vertices(a, b);
        let lo = ext.iter().map(|p| &p.1).min().cloned().expect("nonempty");
        let hi = ext.iter().map(|p| &p.1).max().cloned().expect("nonempty");
        (lo, hi)
    }

    pub fn branch_decomposition(&self) -> BranchDecomposition {
        let branches = self
            .graph
            .segments()
            .map(|s| {
                let (lo, hi) = s.value_range();
                Branch {
                    image: (lo.clone(), hi.clone()),
                    slope: s.slope(),
                    domain: (s.x0, s.x1),
                }
            })
            .collect();
        BranchDecomposition { branches }
    }

    /// Abscissae in `[0,1)` where the slope genuinely changes on the circle.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let slopes: Vec<Rational> = self.graph.slopes().collect();
        let pts = self.graph.vertices();
        let mut out = Vec::new();
        if slopes.first() != slopes.last() {
            out.push(Rational::zero());
        }
        out.extend(pts[1..pts.len() - 1].iter().map(|p| p.0.clone()));
        out
    }

    pub fn map_metrics(&self) -> MapMetrics {
        let abs: Vec<Rational> = self.graph.slopes().map(|s| s.abs()).collect();
        let bps = self.breakpoints();
        let iota = if bps.len() <= 1 {
            Rational::one()
        } else {
            let wrap = &(&bps[0] + 1) - &bps[bps.len() - 1];
            bps.windows(2).map(|w| &w[1] - &w[0]).fold(wrap, Rational::min)
        };
        MapMetrics {
            min_abs_slope: abs.iter().min().cloned().expect("nonempty"),
            max_abs_slope: abs.iter().max().cloned().expect("nonempty"),
            iota,
        }
    }

    /// Union of both maps' abscissae in `[0,1]`.
    fn merged_abscissae(a: &PLLift, b: &PLLift) -> Vec<Rational> {
        let mut xs: Vec<Rational> = a.vertices().iter().chain(b.vertices()).map(|p| p.0.clone()).collect();
        xs.sort();
        xs.dedup();
        xs
    }

    /// Half-turn conjugate `x -> F̃(x + 1/2) - 1/2`.
    pub fn half_turn_conjugate(&self) -> PLLift {
        self.conjugate_rotation(&Rational::half())
    }

    pub fn to_f64(&self) -> LiftF64 {
        LiftF64::from_lift(self)
    }
}

/// `sup_x |a(x) - b(x)|` over the line; both lifts must share a degree.
pub fn sup_lift_distance(a: &PLLift, b: &PLLift) -> Result<Rational> {
    if a.degree != b.degree {
        return Err(Error::InvalidArgument("lift distance needs equal degrees".into()));
    }
    Ok(PLLift::merged_abscissae(a, b)
        .iter()
        .map(|x| (a.eval(x) - b.eval(x)).abs())
        .max()
        .expect("nonempty"))
}

/// Circle distance between `a` and `b` as reals mod 1.
pub fn circle_point_distance(a: &Rational, b: &Rational) -> Rational {
    let d = (a - b).fract();
    let e = &Rational::one() - &d;
    d.min(e)
}

/// The uniform circle metric `ρ(F, G) = sup_x d(F(x), G(x))`.
pub fn circle_distance(a: &PLLift, b: &PLLift) -> Result<Rational> {
    if a.degree != b.degree {
        return Err(Error::InvalidArgument("circle distance needs equal degrees".into()));
    }
    let xs = PLLift::merged_abscissae(a, b);
    let diffs: Vec<Rational> = xs.iter().map(|x| a.eval(x) - b.eval(x)).collect();
    let half = Rational::half();
    let mut best = Rational::zero();
    for w in diffs.windows(2) {
        let (lo, hi) = if w[0] <= w[1] { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
        // The difference is linear on the piece; it passes through a half-integer
        // exactly when ceil(lo - 1/2) <= hi - 1/2.
        if (lo - &half).ceil() <= hi - &half {
            return Ok(half);
        }
        let d = circle_point_distance(lo, &Rational::zero()).max(circle_point_distance(hi, &Rational::zero()));
        best = best.max(d);
    }
    Ok(best)
}

/// `sup_x |F̃(x) - x|` for a degree-one lift.
pub fn sup_displacement(m: &PLLift) -> Result<Rational> {
    sup_lift_distance(m, &PLLift::identity())
}
