use super::{Arc, PLLift};
use crate::rational::Rational;

/// Logarithmic-time `[min, max]` queries of a lift over short intervals,
/// backed by sparse tables over the vertex values of one period.
#[derive(Debug, Clone)]
pub struct RangeIndex<'a> {
    lift: &'a PLLift,
    lo: Vec<Vec<u32>>,
    hi: Vec<Vec<u32>>,
}

impl<'a> RangeIndex<'a> {
    pub fn new(lift: &'a PLLift) -> Self {
        let ys: Vec<&Rational> = lift.vertices().iter().map(|p| &p.1).collect();
        let lo = sparse_table(&ys, |a, b| a <= b);
        let hi = sparse_table(&ys, |a, b| a >= b);
        RangeIndex { lift, lo, hi }
    }

    pub fn lift(&self) -> &PLLift {
        self.lift
    }

    /// `[min, max]` of the lift over `[a, b]`.
    pub fn lift_range(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        assert!(a <= b, "lift_range needs a <= b");
        let deg = self.lift.degree();
        let k0 = a.floor_i64();
        let k1 = b.floor_i64();
        let mut best: Option<(Rational, Rational)> = None;
        let mut absorb = |lo: Rational, hi: Rational| {
            best = Some(match best.take() {
                None => (lo, hi),
                Some((l, h)) => (l.min(lo), h.max(hi)),
            });
        };
        for k in k0..=k1 {
            let kk = Rational::from_integer(k);
            let u = (a - &kk).max(Rational::zero());
            let v = (b - &kk).min(Rational::one());
            if u > v {
                continue;
            }
            let (lo, hi) = self.period_range(&u, &v);
            let shift = &kk * deg;
            absorb(&lo + &shift, &hi + &shift);
        }
        best.expect("nonempty interval")
    }

    /// Image arc, saturating to the full circle.
    pub fn arc_image(&self, arc: &Arc) -> Arc {
        if arc.is_full() {
            return Arc::full();
        }
        let (lo, hi) = self.lift_range(arc.start(), &arc.end());
        Arc::new(lo.clone(), &hi - &lo).expect("ordered range")
    }

    /// Range over `[u, v] ⊂ [0, 1]`.
    fn period_range(&self, u: &Rational, v: &Rational) -> (Rational, Rational) {
        let g = self.lift.graph();
        let pts = g.vertices();
        let eu = g.eval(u).expect("inside the period");
        let ev = g.eval(v).expect("inside the period");
        let (mut lo, mut hi) = if eu <= ev { (eu, ev) } else { (ev, eu) };
        let i0 = pts.partition_point(|p| &p.0 <= u);
        let i1 = pts.partition_point(|p| &p.0 < v);
        if i0 < i1 {
            let m = &pts[query(&self.lo, i0, i1 - 1, |a, b| a <= b, pts) as usize].1;
            let x = &pts[query(&self.hi, i0, i1 - 1, |a, b| a >= b, pts) as usize].1;
            if m < &lo {
                lo = m.clone();
            }
            if x > &hi {
                hi = x.clone();
            }
        }
        (lo, hi)
    }
}

fn sparse_table(ys: &[&Rational], keep_left: impl Fn(&Rational, &Rational) -> bool) -> Vec<Vec<u32>> {
    let mut levels: Vec<Vec<u32>> = vec![(0..ys.len() as u32).collect()];
    let mut span = 1;
    while 2 * span <= ys.len() {
        let prev = levels.last().expect("level");
        let next = (0..=ys.len() - 2 * span)
            .map(|i| {
                let (l, r) = (prev[i], prev[i + span]);
                if keep_left(ys[l as usize], ys[r as usize]) {
                    l
                } else {
                    r
                }
            })
            .collect();
        levels.push(next);
        span *= 2;
    }
    levels
}

fn query(
    levels: &[Vec<u32>],
    lo: usize,
    hi: usize,
    keep_left: impl Fn(&Rational, &Rational) -> bool,
    pts: &[(Rational, Rational)],
) -> u32 {
    let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
    let (l, r) = (levels[k][lo], levels[k][hi + 1 - (1 << k)]);
    if keep_left(&pts[l as usize].1, &pts[r as usize].1) {
        l
    } else {
        r
    }
}
