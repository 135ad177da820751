use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// A closed arc of the circle `R/Z`: it starts at `start` (reduced to `[0,1)`)
/// and runs counter-clockwise for `length`. Length one is the whole circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    start: Rational,
    length: Rational,
}

impl Arc {
    /// Builds an arc; lengths at or above one saturate to the full circle and
    /// negative lengths are rejected.
    pub fn new(start: Rational, length: Rational) -> Option<Self> {
        if length.is_negative() {
            return None;
        }
        if length >= Rational::one() {
            return Some(Arc::full());
        }
        Some(Arc { start: start.fract(), length })
    }

    /// The closed arc between lift coordinates `a <= b`.
    pub fn from_lift_interval(a: &Rational, b: &Rational) -> Self {
        Arc::new(a.clone(), b - a).expect("ordered endpoints")
    }

    pub fn full() -> Self {
        Arc { start: Rational::zero(), length: Rational::one() }
    }

    pub fn point(x: &Rational) -> Self {
        Arc { start: x.fract(), length: Rational::zero() }
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn length(&self) -> &Rational {
        &self.length
    }

    /// Lift coordinate of the far endpoint, `start + length`.
    pub fn end(&self) -> Rational {
        &self.start + &self.length
    }

    pub fn is_full(&self) -> bool {
        self.length == Rational::one()
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.is_full() || (x - &self.start).fract() <= self.length
    }

    /// Inclusion of closed arcs.
    pub fn contains_arc(&self, other: &Arc) -> bool {
        if self.is_full() {
            return true;
        }
        if other.is_full() {
            return false;
        }
        let offset = (&other.start - &self.start).fract();
        &offset + &other.length <= self.length
    }

    /// Closed `r`-neighbourhood.
    pub fn neighbourhood(&self, r: &Rational) -> Arc {
        if self.is_full() {
            return Arc::full();
        }
        Arc::new(&self.start - r, &self.length + &(r * 2)).expect("nonnegative")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn containment_wraps() {
        let a = Arc::new(q(9, 10), q(3, 10)).unwrap();
        assert!(a.contains_point(&q(1, 10)));
        assert!(!a.contains_point(&q(1, 2)));
        assert!(a.contains_arc(&Arc::new(q(19, 20), q(1, 10)).unwrap()));
        assert!(!a.contains_arc(&Arc::new(q(1, 10), q(2, 10)).unwrap()));
    }

    #[test]
    fn saturates_to_full() {
        assert!(Arc::new(q(1, 3), q(4, 3)).unwrap().is_full());
        assert!(Arc::new(q(1, 3), q(1, 3)).unwrap().neighbourhood(&q(1, 2)).is_full());
    }
}
