//! Decision procedures and certificates for piecewise-linear circle maps.

mod crooked;
mod leo;
mod measure;
mod mixing;
mod rotation;
mod strips;

pub use crooked::{
    crooked_between, crooked_between_interval, crooked_between_view, delta_crooked_certificate,
    delta_crooked_certificate_interval, delta_crooked_fast, delta_crooked_oracle, delta_crooked_sampled,
    path_is_crooked, replay_violation, CrookMethod, CrookView, CrookednessReport, PairPattern, Violation,
};
pub use leo::{covering_time, leo_certificate, LeoCertificate};
pub use measure::{check_measure_preserving, MeasureReport};
pub use mixing::{weak_mixing_diagnostic, MixingDiagnostic};
pub use rotation::{lower_envelope, monotone_rotation_bracket, rotation_set, upper_envelope, RotationBracket, RotationData};
pub use strips::strip_branch_counts;

use crate::plcore::PLLift;
use crate::rational::Rational;

/// `|F̃'| >= 4` everywhere and every arc of length `xi` covers the circle
/// within `cap` iterates.
pub fn is_admissible(m: &PLLift, xi: &Rational, cap: usize) -> bool {
    m.map_metrics().min_abs_slope >= Rational::from_integer(4) && leo_certificate(m, xi, cap).is_ok()
}

/// Admissibility without a caller-chosen scale: with `|F̃'| >= 4`, an arc
/// shorter than the breakpoint separation `ι` holds at most one turning
/// point, so its image is at least twice as long. Every arc therefore
/// reaches length `ι`, and [`leo_certificate`] at `ξ = ι` finishes the argument.
pub fn admissibility_certificate(m: &PLLift, cap: usize) -> Option<LeoCertificate> {
    let metrics = m.map_metrics();
    if metrics.min_abs_slope < Rational::from_integer(4) {
        return None;
    }
    leo_certificate(m, &metrics.iota, cap).ok()
}

/// `F̃(t + 1/2) = F̃(t) + 1/2` for all `t`.
pub fn half_turn_symmetric(m: &PLLift) -> bool {
    m.degree() == 1 && &m.half_turn_conjugate() == m
}
