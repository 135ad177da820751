//! Empirical Birkhoff-average diagnostic for weak mixing of `F × F`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::plcore::LiftF64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingDiagnostic {
    /// `sup` over observables and sample points of `|S_ℓ h_j − ∫ h_j|`.
    pub deviation: f64,
    /// The same supremum for each observable `j = 1..=observables`.
    pub per_observable: Vec<f64>,
    pub ell: usize,
    pub samples: usize,
    pub seed: u64,
}

/// `h_j(x, y) = (cos 2πjx + 1)(cos 2πjy + 1)`, whose integral over the torus is one.
fn observable(j: usize, x: f64, y: f64) -> f64 {
    let t = std::f64::consts::TAU * j as f64;
    ((t * x).cos() + 1.0) * ((t * y).cos() + 1.0)
}

/// Orbit averages of `h_j` under `F × F` from seeded random starting points.
pub fn weak_mixing_diagnostic(map: &LiftF64, observables: usize, ell: usize, samples: usize, seed: u64) -> MixingDiagnostic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per = vec![0.0f64; observables];
    for _ in 0..samples {
        let (mut x, mut y): (f64, f64) = (rng.gen(), rng.gen());
        let mut sums = vec![0.0f64; observables];
        for _ in 0..ell {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += observable(j + 1, x, y);
            }
            x = map.eval_mod1(x);
            y = map.eval_mod1(y);
        }
        for (p, s) in per.iter_mut().zip(&sums) {
            *p = p.max((s / ell as f64 - 1.0).abs());
        }
    }
    MixingDiagnostic {
        deviation: per.iter().cloned().fold(0.0, f64::max),
        per_observable: per,
        ell,
        samples,
        seed,
    }
}
