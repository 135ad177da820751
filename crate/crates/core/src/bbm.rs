//! Floating-point model of the annulus unwrapping `Ḡ_β`, the smash `R` and
//! `H_β = R ∘ Ḡ_β`, with attractor clouds and rotation proxies.
//!
//! Coordinates are `(x, t)` with `x ∈ [0,1)` and `t ∈ [-K-3, K+3]`. The map
//! preserves every line `x - t = c (mod 1)` inside `|t| <= K+1`. On such a
//! line the images of finitely many anchors are prescribed and the rest is
//! interpolated in the height coordinate:
//!
//! * `t = ±(K+1)` are fixed,
//! * `(c, 0) ↦ (G(c), G(c) - c)` on the middle circle,
//! * crossings with `x = p` and `x = p + 1/2` for `0 < t <= K+1` follow the
//!   vertical rule with `D = G̃(p) - p`: height `D + t` below `K - D`, then
//!   `K + s` with `s = (t - K + D)/(1 + D)`.
//!
//! Images at heights `K + s`, `s ∈ [0,1]`, are turned by `sD`, which makes
//! the images of the vertical segments vertical; above `K+1` the map is the
//! rotation by `D`, below `-K-1` the identity.

use std::sync::Arc as Shared;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plcore::{sup_displacement, PLLift};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPoint {
    pub x: f64,
    pub t: f64,
}

impl AnnulusPoint {
    pub fn new(x: f64, t: f64) -> Self {
        AnnulusPoint { x: x.rem_euclid(1.0), t }
    }

    /// Max of the circle distance in `x` and the absolute difference in `t`.
    pub fn distance(&self, other: &AnnulusPoint) -> f64 {
        let dx = (self.x - other.x).rem_euclid(1.0);
        dx.min(1.0 - dx).max((self.t - other.t).abs())
    }
}

/// Everything `unwrap_eval` needs: the stage lift at `β = β₀` (`lift`), the
/// evaluation parameter `β`, the tracked point `p` and the strip height `K`.
#[derive(Debug, Clone)]
pub struct UnwrapConfig {
    lift: Shared<PLLift>,
    lift_beta: Rational,
    beta: Rational,
    p: Rational,
    k: f64,
    d: Rational,
    d_f64: f64,
    p_f64: f64,
}

impl UnwrapConfig {
    /// `lift` is `G̃_{β₀}`; the map used is `G̃_β = G̃_{β₀} + (β - β₀)`.
    pub fn new(lift: Shared<PLLift>, lift_beta: Rational, beta: Rational, p: Rational, k: f64) -> Result<Self> {
        let d = &(&lift.eval(&p) + &(&beta - &lift_beta)) - &p;
        let d_f64 = d.to_f64();
        let sup = sup_displacement(&lift)?.to_f64() + (&beta - &lift_beta).abs().to_f64();
        if !(k.is_finite() && k > sup) {
            return Err(Error::Degenerate(format!("K = {k} must exceed sup |G̃_β - id| = {sup}")));
        }
        if !(d_f64 > -1.0 && d_f64 < k) {
            return Err(Error::Degenerate(format!("G̃_β(p) - p = {d} must lie in (-1, K)")));
        }
        let p_f64 = p.to_f64();
        Ok(UnwrapConfig { lift, lift_beta, beta, p, k, d, d_f64, p_f64 })
    }

    /// `⌈sup |G̃_{β₀} - id| + max |β - β₀|⌉ + 1` over the given parameters.
    pub fn default_k(lift: &PLLift, lift_beta: &Rational, betas: &[Rational]) -> Result<f64> {
        let spread = betas.iter().map(|b| (b - lift_beta).abs()).fold(Rational::zero(), Rational::max);
        Ok((&sup_displacement(lift)? + &spread).ceil().to_f64() + 1.0)
    }

    /// Same lift, point and `K` at another parameter.
    pub fn with_beta(&self, beta: Rational) -> Result<Self> {
        UnwrapConfig::new(self.lift.clone(), self.lift_beta.clone(), beta, self.p.clone(), self.k)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    /// `G̃_β(p) - p`, exactly.
    pub fn displacement(&self) -> &Rational {
        &self.d
    }

    /// `G̃_β` at a rational point, exactly.
    pub fn lift_eval(&self, x: &Rational) -> Rational {
        &self.lift.eval(x) + &(&self.beta - &self.lift_beta)
    }

    /// `G̃_β(x)` for a binary64 `x`, evaluated exactly and rounded once.
    pub fn circle_eval(&self, x: f64) -> f64 {
        let r = Rational::from_f64(x).expect("finite abscissa");
        self.lift_eval(&r).to_f64()
    }

    fn vertical(&self, t: f64) -> f64 {
        let (k, d) = (self.k, self.d_f64);
        if t <= k - d {
            d + t
        } else {
            k + (t - k + d) / (1.0 + d)
        }
    }

    /// `(t, image height)` anchors on the line through `(x, t)`, by increasing `t`.
    fn anchors(&self, c: f64) -> Vec<(f64, f64)> {
        let top = self.k + 1.0;
        let mut out = vec![(-top, -top)];
        let g = self.circle_eval(c);
        out.push((0.0, g - c));
        for base in [self.p_f64, self.p_f64 + 0.5] {
            let mut t = (base - c).rem_euclid(1.0);
            if t == 0.0 {
                // Meets the middle circle, where the two rules agree.
                t += 1.0;
            }
            while t < top {
                out.push((t, self.vertical(t)));
                t += 1.0;
            }
        }
        out.push((top, top));
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }
}

/// `Ḡ_β(pt)`.
pub fn unwrap_eval(cfg: &UnwrapConfig, pt: &AnnulusPoint) -> Result<AnnulusPoint> {
    let top = cfg.k + 1.0;
    if pt.t > top {
        return Ok(AnnulusPoint::new(pt.x + cfg.d_f64, pt.t));
    }
    if pt.t < -top {
        return Ok(*pt);
    }
    let c = (pt.x - pt.t).rem_euclid(1.0);
    let anchors = cfg.anchors(c);
    if let Some(w) = anchors.windows(2).find(|w| !(w[0].1 < w[1].1)) {
        return Err(Error::Degenerate(format!(
            "anchor images out of order on the line x - t = {c}: ({}, {}) then ({}, {})",
            w[0].0, w[0].1, w[1].0, w[1].1
        )));
    }
    let i = anchors.partition_point(|a| a.0 <= pt.t).clamp(1, anchors.len() - 1);
    let (a, b) = (anchors[i - 1], anchors[i]);
    let h = if pt.t == a.0 { a.1 } else { a.1 + (b.1 - a.1) * (pt.t - a.0) / (b.0 - a.0) };
    let mut x = c + h;
    if h >= cfg.k {
        x += (h - cfg.k) * cfg.d_f64;
    }
    Ok(AnnulusPoint::new(x, h))
}

/// The smash `R`: collapses `|t| <= K+2` to the middle circle and stretches
/// the outer strips.
pub fn smash(pt: &AnnulusPoint, k: f64) -> AnnulusPoint {
    let t = if pt.t.abs() <= k + 2.0 {
        0.0
    } else if pt.t > 0.0 {
        (k + 3.0) * (pt.t - k - 2.0)
    } else {
        (k + 3.0) * (pt.t + k + 2.0)
    };
    AnnulusPoint { x: pt.x, t }
}

/// `H_β = R ∘ Ḡ_β`.
pub fn h_eval(cfg: &UnwrapConfig, pt: &AnnulusPoint) -> Result<AnnulusPoint> {
    Ok(smash(&unwrap_eval(cfg, pt)?, cfg.k))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<AnnulusPoint>,
    pub generation: usize,
}

impl PointCloud {
    /// `nx × nt` grid over `[0,1) × [-K-3, K+3]`.
    pub fn grid(nx: usize, nt: usize, k: f64) -> Self {
        let h = k + 3.0;
        let mut points = Vec::with_capacity(nx * nt);
        for i in 0..nx {
            for j in 0..nt {
                let t = if nt == 1 { 0.0 } else { -h + 2.0 * h * j as f64 / (nt - 1) as f64 };
                points.push(AnnulusPoint::new(i as f64 / nx as f64, t));
            }
        }
        PointCloud { points, generation: 0 }
    }

    /// `n` evenly spaced points on the middle circle.
    pub fn circle(n: usize) -> Self {
        PointCloud { points: (0..n).map(|i| AnnulusPoint::new(i as f64 / n as f64, 0.0)).collect(), generation: 0 }
    }

    /// Keeps one point per `resolution`-cell.
    /// A nonpositive resolution keeps every point.
    pub fn dedup(&mut self, resolution: f64) {
        if resolution <= 0.0 {
            return;
        }
        let key = |p: &AnnulusPoint| ((p.x / resolution).floor() as i64, (p.t / resolution).floor() as i64);
        self.points.sort_by_key(key);
        self.points.dedup_by_key(|p| key(p));
    }

    pub fn max_abs_t(&self) -> f64 {
        self.points.iter().map(|p| p.t.abs()).fold(0.0, f64::max)
    }
}

/// Forward images of `seed` under `H_β`, deduplicated to `resolution` after
/// each generation.
pub fn attract(cfg: &UnwrapConfig, seed: &PointCloud, iterations: usize, resolution: f64) -> Result<PointCloud> {
    let mut cloud = seed.clone();
    for _ in 0..iterations {
        let points = cloud.points.par_iter().map(|p| h_eval(cfg, p)).collect::<Result<Vec<_>>>()?;
        cloud = PointCloud { points, generation: cloud.generation + 1 };
        cloud.dedup(resolution);
    }
    Ok(cloud)
}

/// Directed distance `sup_{a ∈ A} min_{b ∈ B} d(a, b)`, via buckets over `B`.
fn directed(a: &[AnnulusPoint], b: &[AnnulusPoint]) -> f64 {
    let t_lo = b.iter().map(|p| p.t).fold(f64::INFINITY, f64::min);
    let t_hi = b.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max);
    let nx = ((b.len() as f64).sqrt().ceil() as usize).clamp(1, 4096);
    let cell = 1.0 / nx as f64;
    let nt = (((t_hi - t_lo) / cell).floor() as usize + 1).min(1 << 20);
    let mut buckets: std::collections::HashMap<(usize, usize), Vec<AnnulusPoint>> = std::collections::HashMap::new();
    let col = |x: f64| ((x / cell) as usize).min(nx - 1);
    let row = |t: f64| (((t - t_lo) / cell).floor().max(0.0) as usize).min(nt - 1);
    for p in b {
        buckets.entry((col(p.x), row(p.t))).or_default().push(*p);
    }
    a.par_iter()
        .map(|q| {
            let (cx, cr) = (col(q.x), row(q.t));
            let mut best = f64::INFINITY;
            let max_ring = nx.max(nt);
            for r in 0..=max_ring {
                // Every point outside rings 0..r is at least r cells away.
                if best <= (r as f64 - 1.0) * cell {
                    break;
                }
                let rows = cr.saturating_sub(r)..=(cr + r).min(nt - 1);
                for rr in rows {
                    let ring_row = rr + r == cr || rr == cr + r;
                    let span: Vec<i64> = if ring_row {
                        (-(r as i64)..=r as i64).collect()
                    } else {
                        vec![-(r as i64), r as i64]
                    };
                    for dx in span {
                        let cc = (cx as i64 + dx).rem_euclid(nx as i64) as usize;
                        if let Some(v) = buckets.get(&(cc, rr)) {
                            for p in v {
                                best = best.min(q.distance(p));
                            }
                        }
                        if r == 0 {
                            break;
                        }
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance in the annulus metric of [`AnnulusPoint::distance`].
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> f64 {
    assert!(!a.points.is_empty() && !b.points.is_empty(), "clouds must be nonempty");
    directed(&a.points, &b.points).max(directed(&b.points, &a.points))
}

/// Reference `O(nm)` Hausdorff distance.
pub fn hausdorff_brute(a: &PointCloud, b: &PointCloud) -> f64 {
    let d = |u: &[AnnulusPoint], v: &[AnnulusPoint]| {
        u.iter().map(|p| v.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    d(&a.points, &b.points).max(d(&b.points, &a.points))
}

/// Rotation of the outer boundary, `(G̃_β(p) - p) mod 1`, exactly.
pub fn boundary_rotation(cfg: &UnwrapConfig) -> Rational {
    cfg.d.fract()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessibleOrbit {
    /// `p, G(p), G²(p), ...` reduced mod 1.
    pub orbit: Vec<Rational>,
    /// Least period, if the orbit closed within the cap.
    pub period: Option<usize>,
}

/// Exact middle-circle orbit of `p`.
pub fn accessible_orbit(cfg: &UnwrapConfig, cap: usize) -> AccessibleOrbit {
    let start = cfg.p.fract();
    let mut orbit = vec![start.clone()];
    let mut x = start.clone();
    for i in 1..=cap {
        x = cfg.lift_eval(&x).fract();
        if x == start {
            return AccessibleOrbit { orbit, period: Some(i) };
        }
        orbit.push(x.clone());
    }
    AccessibleOrbit { orbit, period: None }
}

/// Images under `Ḡ_β` of `{base} × [0, K+2]` at `samples` heights; each
/// should sit on the radial line through `G_β(base)`. Returns the largest
/// circle distance of an image abscissa from `G_β(base)`.
pub fn radial_deviation(cfg: &UnwrapConfig, base: &Rational, samples: usize) -> Result<f64> {
    let target = cfg.lift_eval(base).fract().to_f64();
    let x = base.fract().to_f64();
    let top = cfg.k + 2.0;
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let t = top * i as f64 / (samples.max(2) - 1) as f64;
        let img = unwrap_eval(cfg, &AnnulusPoint::new(x, t))?;
        let dx = (img.x - target).rem_euclid(1.0);
        worst = worst.max(dx.min(1.0 - dx));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
