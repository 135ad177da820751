//! Explicit maps: the `scr` sequence, simple crooked maps `σ_n`, the blocks
//! `λ̂_{n,k}`, the degree-one lifts `λ_{n,k,α}`, the slope-13 base map and its
//! rotations, and window perturbations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plcore::{PLLift, PlFn};
use crate::rational::{q, Rational};

/// `scr[0] = 0`, `scr[1] = 1`, `scr[2] = 2`, `scr[n] = 2 scr[n-1] + scr[n-2]`.
pub fn scr(n: u32) -> u64 {
    assert!(n <= 48, "scr[{n}] overflows u64");
    match n {
        0 | 1 | 2 => n as u64,
        _ => {
            let (mut a, mut b) = (1u64, 2u64);
            for _ in 3..=n {
                (a, b) = (b, 2 * b + a);
            }
            b
        }
    }
}

/// Height sequence of `σ_n` in units of `1/n` at the abscissae `j / scr[n]`.
///
/// `W_0 = [0]`, `W_1 = [0, 1]` and
/// `W_n = W_{n-1} ++ (n-1 - W_{n-2})[1..] ++ (1 + W_{n-1})[1..]`.
pub fn sigma_walk(n: u32) -> Vec<i64> {
    let mut prev2: Vec<i64> = vec![0];
    let mut prev1: Vec<i64> = vec![0, 1];
    if n == 0 {
        return prev2;
    }
    for m in 2..=n as i64 {
        let mut w = prev1.clone();
        w.extend(prev2.iter().skip(1).map(|h| m - 1 - h));
        w.extend(prev1.iter().skip(1).map(|h| 1 + h));
        prev2 = std::mem::replace(&mut prev1, w);
    }
    prev1
}

/// The simple `n`-crooked interval map `σ_n: [0,1] → [0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMap {
    pub n: u32,
    pub map: PlFn,
}

/// Builds `σ_n`; its slope is `±scr[n]/n` throughout.
pub fn sigma(n: u32) -> SigmaMap {
    assert!(n >= 1, "σ_n needs n >= 1");
    let s = scr(n) as i64;
    let map = PlFn::from_walk(&Rational::zero(), &q(1, s), &q(1, n as i64), &sigma_walk(n));
    SigmaMap { n, map }
}

impl SigmaMap {
    /// `σ_{-n} = 1 - σ_n`.
    pub fn reflected(&self) -> PlFn {
        self.map.reflect_values(&Rational::one())
    }

    /// `σ_n^L`, the restriction to `[0, 1/2]`.
    pub fn left_half(&self) -> PlFn {
        self.map.restrict(&Rational::zero(), &Rational::half()).expect("inside [0,1]")
    }

    /// `σ_n^R`, the restriction to `[1/2, 1]`.
    pub fn right_half(&self) -> PlFn {
        self.map.restrict(&Rational::half(), &Rational::one()).expect("inside [0,1]")
    }

    pub fn reflected_left_half(&self) -> PlFn {
        self.left_half().reflect_values(&Rational::one())
    }

    pub fn reflected_right_half(&self) -> PlFn {
        self.right_half().reflect_values(&Rational::one())
    }
}

/// Parameters of `λ_{n,k,α}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LambdaParams {
    pub n: u32,
    pub k: u32,
    pub alpha: Rational,
}

impl LambdaParams {
    pub fn new(n: u32, k: u32, alpha: Rational) -> Result<Self> {
        let p = LambdaParams { n, k, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_nk(self.n, self.k)?;
        if self.alpha.abs() * 2 >= self.gamma() {
            return Err(Error::Parity(format!(
                "|α| = {} must be below 1/(2(n+k-1)) = {}",
                self.alpha.abs(),
                self.gamma() / 2
            )));
        }
        Ok(())
    }

    /// `n + k - 1`, the number of blocks per unit interval.
    pub fn blocks(&self) -> i64 {
        (self.n + self.k - 1) as i64
    }

    /// `ε = (n-1)/(n+k-1)`.
    pub fn epsilon(&self) -> Rational {
        q(self.n as i64 - 1, self.blocks())
    }

    /// `γ = 1/(n+k-1)`.
    pub fn gamma(&self) -> Rational {
        q(1, self.blocks())
    }

    pub fn zeta(&self) -> Rational {
        zeta(self.n)
    }

    /// `scr[n] + scr[n-1]`, the absolute slope of `λ_{n,k,α}`.
    pub fn slope(&self) -> i64 {
        (scr(self.n) + scr(self.n - 1)) as i64
    }

    /// Vertex count of the canonical lift, `(n+k-1)` blocks with one vertex
    /// per turning point.
    pub fn vertex_estimate(&self) -> u128 {
        self.blocks() as u128 * self.slope() as u128
    }
}

fn check_nk(n: u32, k: u32) -> Result<()> {
    if n < 7 || n % 2 == 0 {
        return Err(Error::Parity(format!("n = {n} must be odd and at least 7")));
    }
    if k < 1 {
        return Err(Error::Parity("k must be at least 1".into()));
    }
    Ok(())
}

/// `ζ = scr[n-1] / (2 (scr[n] + scr[n-1]))`.
pub fn zeta(n: u32) -> Rational {
    let a = scr(n - 1) as i64;
    q(a, 2 * (scr(n) as i64 + a))
}

/// Heights (units `1/n`) of one block of `λ̂_{n,k}` on `[0,1]` at the abscissae
/// `j / (scr[n] + scr[n-1])`.
pub fn lambda_hat_block_walk(n: u32) -> Vec<i64> {
    let n_i = n as i64;
    let w1 = sigma_walk(n - 1);
    let w0 = sigma_walk(n);
    let half = w1.len() / 2;
    let mut hs: Vec<i64> = w1[half..].iter().map(|h| n_i - 1 - h).collect();
    hs.extend(w0.iter().skip(1));
    hs.extend(w1[1..=half].iter().map(|h| n_i - h));
    hs
}

/// Heights of `λ̂_{n,k}` over `[0, n+k-1]`, one block per unit with the block
/// `i` raised by `i/n`.
fn lambda_hat_walk(n: u32, k: u32) -> Vec<i64> {
    let block = lambda_hat_block_walk(n);
    let blocks = (n + k - 1) as i64;
    let mut out = Vec::with_capacity(block.len() * blocks as usize);
    out.push(block[0]);
    for i in 0..blocks {
        out.extend(block.iter().skip(1).map(|h| h + i));
    }
    out
}

/// `λ̂_{n,k}: [0, n+k-1] → [0, (2n+k-2)/n]`.
pub fn lambda_hat(n: u32, k: u32) -> Result<PlFn> {
    check_nk(n, k)?;
    let s = (scr(n) + scr(n - 1)) as i64;
    Ok(PlFn::from_walk(&Rational::zero(), &q(1, s), &q(1, n as i64), &lambda_hat_walk(n, k)))
}

/// The degree-one lift `λ_{n,k,α} = r_{-α} ∘ λ_{n,k} ∘ r_α`.
pub fn lambda(params: &LambdaParams) -> Result<PLLift> {
    params.validate()?;
    let (n, k) = (params.n, params.k);
    let blocks = params.blocks();
    let s = params.slope();
    let graph = PlFn::from_walk(&Rational::zero(), &q(1, blocks * s), &q(1, blocks), &lambda_hat_walk(n, k))
        .affine_values(&Rational::one(), &q(-(n as i64 - 1), 2 * blocks));
    let base = PLLift::from_graph(1, graph)?;
    Ok(if params.alpha.is_zero() { base } else { base.conjugate_rotation(&params.alpha) })
}

/// Vertices of the base map's lift on its first block `[0, 1/10]`.
pub fn base_f_block() -> Vec<(Rational, Rational)> {
    [(0, 65), (3, 26), (4, 39), (5, 26), (6, 39), (7, 26), (8, 39), (9, 26), (13, 78)]
        .iter()
        .map(|&(x, y)| (q(x, 130), q(y, 130)))
        .collect()
}

/// The slope-13 base map: ten copies of [`base_f_block`], each shifted by
/// `1/10` in both coordinates.
pub fn base_f() -> PLLift {
    let block = base_f_block();
    let mut pts = vec![block[0].clone()];
    for j in 0..10 {
        let shift = q(j, 10);
        pts.extend(block.iter().skip(1).map(|(x, y)| (x + &shift, y + &shift)));
    }
    PLLift::new(1, pts).expect("base map data is a valid lift")
}

/// `f_β = r_β ∘ f`.
pub fn f_beta(beta: &Rational) -> PLLift {
    base_f().post_rotate(beta)
}

/// How an arc is cut for a window perturbation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Partition {
    /// `m` equal pieces.
    Regular(usize),
    /// Explicit cut points strictly between the arc endpoints.
    Explicit(Vec<Rational>),
}

/// Replaces `f` on the lift interval `[a, b]` (with `b - a < 1`) by `m`
/// rescaled copies of `f|[a,b]`, alternating orientation, the first copy
/// orientation-preserving.
pub fn window_perturbation(f: &PLLift, a: &Rational, b: &Rational, partition: &Partition) -> Result<PLLift> {
    if a >= b || b - a >= Rational::one() {
        return Err(Error::InvalidArgument(format!("window [{a}, {b}] must be a proper arc")));
    }
    let cuts: Vec<Rational> = match partition {
        Partition::Regular(m) => {
            if *m == 0 {
                return Err(Error::InvalidArgument("window needs at least one piece".into()));
            }
            let len = b - a;
            (0..=*m as i64).map(|i| a + &(&len * &q(i, *m as i64))).collect()
        }
        Partition::Explicit(inner) => {
            let mut c = vec![a.clone()];
            c.extend(inner.iter().cloned());
            c.push(b.clone());
            if c.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument("partition must increase strictly inside the window".into()));
            }
            c
        }
    };
    let m = cuts.len() - 1;
    if m % 2 == 0 {
        return Err(Error::InvalidArgument(format!("window perturbation needs an odd piece count, got {m}")));
    }
    let piece = PlFn::new(f.extended_vertices(a, b))?;
    let reversed = PlFn::new(
        piece
            .vertices()
            .iter()
            .rev()
            .map(|(x, y)| (&(a + b) - x, y.clone()))
            .collect(),
    )?;
    let mut parts: Vec<PlFn> = Vec::with_capacity(m + 1);
    for (i, w) in cuts.windows(2).enumerate() {
        let src = if i % 2 == 0 { &piece } else { &reversed };
        parts.push(src.reparametrize(&w[0], &w[1]));
    }
    parts.push(PlFn::new(f.extended_vertices(b, &(a + 1)))?);
    let over = PlFn::concat(&parts)?;
    // Re-anchor the graph from [a, a+1] onto the fundamental domain.
    let shifted = over.reparametrize(&Rational::zero(), &Rational::one());
    let lift = PLLift::from_graph(f.degree(), shifted)?;
    Ok(lift.pre_rotate(&-a))
}

/// Result of [`admissible_approximation`].
#[derive(Debug, Clone)]
pub struct AdmissibleApproximation {
    pub map: PLLift,
    /// Fold count used on each Markov arc.
    pub folds: Vec<usize>,
    /// `max_i diam f(A_i)`, an upper bound for `ρ(F, f)`.
    pub bound: Rational,
}

/// Applies a regular odd-fold window on each arc of a Markov partition so
/// that every slope is at least 4 in absolute value.
///
/// `partition` lists the cut points in `[0,1)`, sorted; arc `i` runs from
/// `partition[i]` to the next cut (cyclically).
pub fn admissible_approximation(f: &PLLift, partition: &[Rational], eps: &Rational) -> Result<AdmissibleApproximation> {
    if partition.is_empty() || partition.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("partition must be sorted and nonempty".into()));
    }
    if partition.iter().any(|p| p.is_negative() || p >= &Rational::one()) {
        return Err(Error::InvalidArgument("partition points must lie in [0, 1)".into()));
    }
    for p in partition {
        let img = f.eval_mod1(p);
        if partition.binary_search(&img).is_err() {
            return Err(Error::NotMarkov(format!("F({p}) = {img} is not a partition point")));
        }
    }
    let arcs: Vec<(Rational, Rational)> = (0..partition.len())
        .map(|i| {
            let a = partition[i].clone();
            let b = if i + 1 < partition.len() { partition[i + 1].clone() } else { &partition[0] + 1 };
            (a, b)
        })
        .collect();
    let four = Rational::from_integer(4);
    let mut folds = Vec::with_capacity(arcs.len());
    let mut bound = Rational::zero();
    let mut out = f.clone();
    for (a, b) in &arcs {
        let (lo, hi) = f.lift_range(a, b);
        bound = bound.max(&hi - &lo);
        let slopes: Vec<Rational> = f
            .extended_vertices(a, b)
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        let min_slope = slopes.iter().map(Rational::abs).min().expect("arc has a piece");
        if min_slope.is_zero() {
            return Err(Error::ZeroSlope(a.to_string(), b.to_string()));
        }
        if slopes.iter().any(|s| s.signum() != slopes[0].signum()) {
            return Err(Error::NotMarkov(format!("F is not monotone on the arc [{a}, {b}]")));
        }
        let mut m = 1usize;
        while &min_slope * (m as i64) < four {
            m += 2;
        }
        folds.push(m);
        if m > 1 {
            out = window_perturbation(&out, a, b, &Partition::Regular(m))?;
        }
    }
    if &bound >= eps {
        return Err(Error::InvalidArgument(format!(
            "partition too coarse: arc images reach diameter {bound}, not below {eps}"
        )));
    }
    Ok(AdmissibleApproximation { map: out, folds, bound })
}
