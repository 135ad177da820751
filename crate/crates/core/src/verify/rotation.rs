//! Rotation sets of degree-one lifts via monotone envelopes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plcore::PLLift;
use crate::rational::Rational;

/// Envelopes and certified brackets for their rotation numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationData {
    /// `f̃_l(x) = inf { f̃(y) : y ≥ x }`, as vertex list on `[0,1]`.
    pub lower_envelope: Vec<(Rational, Rational)>,
    /// `f̃_u(x) = sup { f̃(y) : y ≤ x }`.
    pub upper_envelope: Vec<(Rational, Rational)>,
    pub rho_lower: RotationBracket,
    pub rho_upper: RotationBracket,
}

impl RotationData {
    /// `[rho_lower, rho_upper]` is certified to have positive length.
    pub fn certified_nondegenerate(&self) -> bool {
        self.rho_lower.hi < self.rho_upper.lo
    }
}

/// `lo <= ρ <= hi`, established after `iterations` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationBracket {
    pub lo: Rational,
    pub hi: Rational,
    pub iterations: usize,
    /// Set when an exact periodic orbit pinned the value.
    pub exact: bool,
}

impl RotationBracket {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Running extremum of a piecewise-linear path; `better(u, v)` says `u`
/// replaces `v` as the current extremum.
fn running_extremum(pts: &[(Rational, Rational)], better: impl Fn(&Rational, &Rational) -> bool) -> Vec<(Rational, Rational)> {
    let mut out = vec![pts[0].clone()];
    let mut cur = pts[0].1.clone();
    for w in pts.windows(2) {
        let (p, r) = (&w[0], &w[1]);
        let p_ext = better(&p.1, &cur) || p.1 == cur;
        let r_ext = better(&r.1, &cur);
        match (p_ext, r_ext) {
            (true, true) => {
                out.push(r.clone());
                cur = r.1.clone();
            }
            (true, false) => {
                // Leaves the envelope where the piece crosses the current level.
                out.push((p.0.clone(), cur.clone()));
                out.push((r.0.clone(), cur.clone()));
            }
            (false, true) => {
                let x = &p.0 + &(&(&r.0 - &p.0) * &(&(&cur - &p.1) / &(&r.1 - &p.1)));
                out.push((x, cur.clone()));
                out.push(r.clone());
                cur = r.1.clone();
            }
            (false, false) => out.push((r.0.clone(), cur.clone())),
        }
    }
    out.dedup_by(|b, a| a.0 == b.0);
    out
}

/// Restricts an envelope computed on a wider window to `[0, 1]`.
fn clip(pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let one = Rational::one();
    let zero = Rational::zero();
    let eval = |x: &Rational| -> Rational {
        let i = pts.partition_point(|p| &p.0 <= x).clamp(1, pts.len() - 1);
        let (p, r) = (&pts[i - 1], &pts[i]);
        if &p.0 == x {
            return p.1.clone();
        }
        &p.1 + &(&(&r.1 - &p.1) * &(&(x - &p.0) / &(&r.0 - &p.0)))
    };
    let mut out = vec![(zero.clone(), eval(&zero))];
    out.extend(pts.iter().filter(|p| p.0 > zero && p.0 < one).cloned());
    out.push((one.clone(), eval(&one)));
    out
}

/// `f̃_l`, the nondecreasing lower envelope.
pub fn lower_envelope(m: &PLLift) -> Result<PLLift> {
    if m.degree() != 1 {
        return Err(Error::InvalidArgument("rotation sets need degree one".into()));
    }
    let mut pts = m.extended_vertices(&Rational::zero(), &Rational::from_integer(2));
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut rev: Vec<(Rational, Rational)> = pts.into_iter().rev().map(|(x, y)| (-x, y)).collect();
    rev = running_extremum(&rev, |u, v| u < v);
    let env: Vec<(Rational, Rational)> = rev.into_iter().rev().map(|(x, y)| (-x, y)).collect();
    PLLift::new(1, clip(env))
}

/// `f̃_u`, the nondecreasing upper envelope.
pub fn upper_envelope(m: &PLLift) -> Result<PLLift> {
    if m.degree() != 1 {
        return Err(Error::InvalidArgument("rotation sets need degree one".into()));
    }
    let mut pts = m.extended_vertices(&Rational::from_integer(-1), &Rational::one());
    pts.dedup_by(|b, a| a.0 == b.0);
    let env = running_extremum(&pts, |u, v| u > v);
    PLLift::new(1, clip(env))
}

const ROUNDING_BITS: i64 = 40;

fn round_dyadic(x: &Rational, up: bool) -> Rational {
    let scale = Rational::from_integer(1i64 << ROUNDING_BITS);
    let s = x * &scale;
    let r = if up { s.ceil() } else { s.floor() };
    r / scale
}

/// Bracket for the rotation number of a nondecreasing degree-one lift.
///
/// The orbit of `0` is iterated exactly while its denominators stay small;
/// a repeated fractional part yields the exact rational value. Otherwise two
/// orbits rounded outward bound the true orbit by monotonicity and give
/// `(z_n - 1)/n <= ρ <= (w_n + 1)/n`.
pub fn monotone_rotation_bracket(g: &PLLift, iterations: usize) -> RotationBracket {
    let mut seen: HashMap<Rational, (usize, Rational)> = HashMap::new();
    let mut x = Rational::zero();
    let mut k = 0usize;
    while k < iterations && x.is_small() {
        let frac = x.fract();
        let int = &x - &frac;
        if let Some((k0, int0)) = seen.get(&frac) {
            let rho = (&int - int0) / (k - k0) as i64;
            return RotationBracket { lo: rho.clone(), hi: rho, iterations: k, exact: true };
        }
        seen.insert(frac, (k, int));
        x = g.eval(&x);
        k += 1;
    }
    let n = iterations.max(1);
    let mut z = Rational::zero();
    let mut w = Rational::zero();
    let mut removed = 0i64;
    for _ in 0..n {
        z = round_dyadic(&g.eval(&z), false);
        w = round_dyadic(&g.eval(&w), true);
        // Integer shifts commute with the lift, so both orbits can be recentred.
        let shift = z.floor_i64();
        z = &z - shift;
        w = &w - shift;
        removed += shift;
    }
    let nn = n as i64;
    RotationBracket {
        lo: (&z + (removed - 1)) / nn,
        hi: (&w + (removed + 1)) / nn,
        iterations: n,
        exact: false,
    }
}

/// Envelopes of `m` and brackets for `Rot(f̃) = [ρ(f̃_l), ρ(f̃_u)]`.
pub fn rotation_set(m: &PLLift, iterations: usize) -> Result<RotationData> {
    let lo = lower_envelope(m)?;
    let hi = upper_envelope(m)?;
    Ok(RotationData {
        rho_lower: monotone_rotation_bracket(&lo, iterations),
        rho_upper: monotone_rotation_bracket(&hi, iterations),
        lower_envelope: lo.vertices().to_vec(),
        upper_envelope: hi.vertices().to_vec(),
    })
}
