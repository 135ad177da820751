//! Staged construction `G = F_β ∘ λ_{n,k,α}` with exact parameter planning,
//! accessible-point tracking and rotation calibration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{f_beta, lambda, lambda_hat_block_walk, scr, LambdaParams};
use crate::plcore::{sup_lift_distance, PLLift};
use crate::rational::Rational;
use crate::verify::{
    admissibility_certificate, check_measure_preserving, delta_crooked_fast, delta_crooked_sampled,
    half_turn_symmetric, leo_certificate, CrookMethod, CrookView, CrookednessReport,
};

/// Which of the stage inequalities the planner enforces.
///
/// `Strict` demands all of `γ < min(ι, s^{-N}, ε/4, δ s^{-N}/8)` and
/// `ε < η/s`. `Relaxed` drops the two `s^{-N}` terms, which no
/// representable `(n, k)` satisfies; the stage is then still built and
/// verified exactly, and its crookedness is certified separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanPolicy {
    Strict,
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagePlan {
    pub n: u32,
    pub k: u32,
    pub alpha: Rational,
    /// Covering time of arcs of length `ε/4` under the current map.
    #[serde(rename = "N")]
    pub big_n: usize,
    pub eta: Rational,
    pub delta: Rational,
    pub gamma: Rational,
    pub epsilon: Rational,
    /// Maximal absolute slope of the current map.
    pub s: Rational,
    pub iota: Rational,
    pub policy: PlanPolicy,
}

impl StagePlan {
    pub fn params(&self) -> LambdaParams {
        LambdaParams { n: self.n, k: self.k, alpha: self.alpha.clone() }
    }

    /// `n + k - 1`.
    pub fn blocks(&self) -> i64 {
        (self.n + self.k - 1) as i64
    }
}

/// Outcome of the four checks run on every built stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageChecks {
    pub measure_preserving: bool,
    /// Covering time at the breakpoint scale, when admissible.
    pub admissible_n: Option<usize>,
    pub half_turn_symmetric: bool,
    /// `sup |G̃ - F̃|`, an upper bound for the circle distance.
    pub sup_distance: Rational,
    pub vertex_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub plan: StagePlan,
    pub checks: StageChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionState {
    pub beta: Rational,
    pub map: PLLift,
    pub stages: Vec<StageRecord>,
    /// `p_0, p_1, ..., p_m`, with `λ̃_{j+1}(p_{j+1}) = p_j`.
    pub points: Vec<Rational>,
    pub monotone_max: bool,
}

impl ConstructionState {
    /// `f_β` with base point `p_0 = 0`: every block of the base map starts at
    /// its maximum, so `f̃_β(q) < f̃_β(0)` for all `q < 0`.
    pub fn initial(beta: &Rational) -> Self {
        let map = f_beta(beta);
        let p0 = Rational::zero();
        let monotone_max = monotone_max_at(&map, &p0);
        ConstructionState { beta: beta.clone(), map, stages: Vec::new(), points: vec![p0], monotone_max }
    }

    pub fn p(&self) -> &Rational {
        self.points.last().expect("p_0 is always present")
    }

    pub fn stage_index(&self) -> usize {
        self.stages.len()
    }

    /// `∑ η_m` over the built stages: the sup-norm budget spent so far.
    pub fn eta_sum(&self) -> Rational {
        self.stages.iter().fold(Rational::zero(), |acc, s| &acc + &s.plan.eta)
    }

    /// The stage map at another parameter, `G_{β'} = r_{β'-β} ∘ G_β`.
    pub fn map_at(&self, beta: &Rational) -> PLLift {
        self.map.post_rotate(&(beta - &self.beta))
    }
}

/// `F̃(q) < F̃(p)` for every `q < p`. Since `F̃(q - 1) = F̃(q) - 1`, testing
/// the vertices of `[p - 1, p)` suffices.
pub fn monotone_max_at(m: &PLLift, p: &Rational) -> bool {
    if m.degree() < 1 {
        return false;
    }
    let ext = m.extended_vertices(&(p - 1), p);
    let (top, rest) = ext.split_last().expect("two endpoints");
    rest.iter().all(|v| v.1 < top.1)
}

/// Budgets for the exact stage computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub vertices: usize,
    pub iterations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { vertices: crate::DEFAULT_VERTEX_BUDGET, iterations: crate::DEFAULT_ITERATION_CAP }
    }
}

fn slope_saturating(n: u32) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 1..n {
        let c = b.saturating_mul(2).saturating_add(a);
        a = b;
        b = c;
    }
    if n == 0 {
        0
    } else {
        b.saturating_add(a)
    }
}

/// `(n + k - 1)(scr[n] + scr[n-1])` in full precision.
fn exact_vertex_floor(n: u32, k: u32) -> num_bigint::BigUint {
    let (mut a, mut b) = (num_bigint::BigUint::from(0u32), num_bigint::BigUint::from(1u32));
    for _ in 1..n {
        let c = &b * 2u32 + &a;
        a = b;
        b = c;
    }
    (a + b) * (n + k - 1)
}

/// Smallest odd `n >= 7` and then smallest even `k` meeting the inequalities
/// selected by `policy`.
pub fn plan_stage(state: &ConstructionState, eta: &Rational, delta: &Rational, policy: PlanPolicy, budget: Budget) -> Result<StagePlan> {
    plan_stage_from(state, eta, delta, policy, budget, 2)
}

fn plan_stage_from(
    state: &ConstructionState,
    eta: &Rational,
    delta: &Rational,
    policy: PlanPolicy,
    budget: Budget,
    k_min: u32,
) -> Result<StagePlan> {
    if !eta.is_positive() || !delta.is_positive() {
        return Err(Error::InvalidArgument("η and δ must be positive".into()));
    }
    let metrics = state.map.map_metrics();
    let s = metrics.max_abs_slope.clone();
    let iota = metrics.iota.clone();
    let cap = budget.vertices as u128;
    let make = |n: u32, k: u32, big_n: usize| {
        let blocks = (n + k - 1) as i64;
        StagePlan {
            n,
            k,
            alpha: Rational::zero(),
            big_n,
            eta: eta.clone(),
            delta: delta.clone(),
            gamma: Rational::new(1, blocks),
            epsilon: Rational::new(n as i64 - 1, blocks),
            s: s.clone(),
            iota: iota.clone(),
            policy,
        }
    };
    match policy {
        PlanPolicy::Relaxed => {
            let n = 7u32;
            // n + k - 1 > max((n-1) s / η, 1/ι); γ < ε/4 holds for every n >= 7.
            let bound = (&(&s * (n as i64 - 1)) / eta).max(iota.recip());
            let blocks = bound.floor_i64() + 1;
            let mut k = (blocks - n as i64 + 1).max(k_min as i64).max(2);
            if k % 2 == 1 {
                k += 1;
            }
            let k = u32::try_from(k).map_err(|_| Error::Infeasible(format!("k = {k} is out of range")))?;
            let needed = ((n + k - 1) as u128).saturating_mul(slope_saturating(n));
            if needed > cap {
                return Err(Error::VertexBudgetExceeded { needed, cap: budget.vertices });
            }
            let mut plan = make(n, k, 0);
            plan.big_n = leo_certificate(&state.map, &(&plan.epsilon / 4), budget.iterations)?.n;
            Ok(plan)
        }
        PlanPolicy::Strict => {
            // An arc of length ε/4 covers the circle after N iterates and grows by at
            // most s per iterate, so s^{-N} <= ε/4 and γ < δ s^{-N}/8 forces
            // n - 1 > 32/δ. Smaller n are skipped without computing N.
            let n_floor = (Rational::from_integer(32) / delta).floor_i64() + 2;
            let mut n = n_floor.max(7) as u32;
            if n % 2 == 0 {
                n += 1;
            }
            loop {
                let mut k = k_min.max(2);
                if k % 2 == 1 {
                    k += 1;
                }
                loop {
                    let needed = ((n + k - 1) as u128).saturating_mul(slope_saturating(n));
                    if needed > cap {
                        if k <= k_min.max(2) {
                            // Larger n only increases the slope, so nothing fits.
                            return Err(Error::Infeasible(format!(
                                "the strict inequalities need odd n >= {n}; λ_{{n,k}} then has at least {} \
                                 vertices against a cap of {}",
                                exact_vertex_floor(n, k),
                                budget.vertices
                            )));
                        }
                        break;
                    }
                    let mut plan = make(n, k, 0);
                    if &plan.epsilon * &s < *eta {
                        plan.big_n = leo_certificate(&state.map, &(&plan.epsilon / 4), budget.iterations)?.n;
                        let s_pow = s.pow(-(plan.big_n as i32));
                        let limit = iota.clone().min(s_pow.clone()).min(&plan.epsilon / 4).min(&(delta * &s_pow) / 8);
                        if plan.gamma < limit {
                            return Ok(plan);
                        }
                    }
                    k += 2;
                }
                n += 2;
            }
        }
    }
}

/// The strip maxima of `λ̃_{n,k,0}`: positions `x_j = (j + x*)/(n+k-1)` and
/// values `M_j = (j + h*)/(n+k-1)` for block `j`.
fn strip_maximum(n: u32) -> (Rational, Rational) {
    let walk = lambda_hat_block_walk(n);
    let top = *walk.iter().max().expect("nonempty walk");
    let idx = walk.iter().position(|&h| h == top).expect("maximum present");
    let slope = (scr(n) + scr(n - 1)) as i64;
    let pos = Rational::new(idx as i64, slope);
    let value = Rational::new(2 * top - (n as i64 - 1), 2);
    (pos, value)
}

/// `α` and `p_{m+1}` with `λ̃_{n,k,α}(p_{m+1}) = p_m` at a strip maximum.
///
/// `λ̃_α(x_j - α) = M_j - α`, so `α = M_j - p_m` for the `j` nearest to
/// alignment; the `M_j` are `γ` apart, hence `|α| <= γ/2`. When `p_m` sits
/// midway the bound is attained and the smaller `j` is taken.
pub fn choose_alpha(state: &ConstructionState, plan: &StagePlan) -> Result<(Rational, Rational)> {
    let p = state.p();
    if !state.monotone_max || !monotone_max_at(&state.map, p) {
        return Err(Error::MonotoneMaxAbsent(p.to_string()));
    }
    let blocks = plan.blocks();
    let (pos, value) = strip_maximum(plan.n);
    let t = &(p * blocks) - &value;
    let j = t.floor();
    let j = if &t - &j > Rational::half() { &j + 1 } else { j };
    let width = Rational::from_integer(blocks);
    let alpha = &(&(&j + &value) / &width) - p;
    let p_next = &(&(&j + &pos) / &width) - &alpha;

    // |α| = γ/2 is outside the range accepted by `lambda`, so conjugate directly.
    let lam = lambda(&LambdaParams::new(plan.n, plan.k, Rational::zero())?)?.conjugate_rotation(&alpha);
    if &lam.eval(&p_next) != p {
        return Err(Error::Verification(format!("λ̃(p_next) = {} differs from p = {p}", lam.eval(&p_next))));
    }
    if !monotone_max_at(&lam, &p_next) {
        return Err(Error::Verification(format!("λ̃ has no strict running maximum at {p_next}")));
    }
    Ok((alpha, p_next))
}

/// `G = F ∘ λ_{n,k,α}` with all four checks; a failed check aborts.
pub fn build_stage(state: &ConstructionState, plan: &StagePlan, alpha: &Rational, p_next: &Rational, budget: Budget) -> Result<ConstructionState> {
    let mut plan = plan.clone();
    plan.alpha = alpha.clone();
    let lam = lambda(&plan.params())?;
    if &lam.eval(p_next) != state.p() {
        return Err(Error::Verification("tracked point does not map back to p_m".into()));
    }
    let g = PLLift::compose_with_budget(&state.map, &lam, budget.vertices)?;

    let measure = check_measure_preserving(&g)?;
    if !measure.verdict {
        return Err(Error::Verification("stage map is not measure-preserving".into()));
    }
    let leo = admissibility_certificate(&g, budget.iterations)
        .ok_or_else(|| Error::Verification("stage map is not admissible".into()))?;
    if !half_turn_symmetric(&g) {
        return Err(Error::Verification("stage map is not half-turn symmetric".into()));
    }
    let dist = sup_lift_distance(&g, &state.map)?;
    if dist >= plan.eta {
        return Err(Error::Verification(format!("sup |G - F| = {dist} is not below η = {}", plan.eta)));
    }
    if !monotone_max_at(&g, p_next) {
        return Err(Error::Verification(format!("G has no strict running maximum at {p_next}")));
    }

    let checks = StageChecks {
        measure_preserving: true,
        admissible_n: Some(leo.n),
        half_turn_symmetric: true,
        sup_distance: dist,
        vertex_count: g.vertex_count(),
    };
    let mut next = state.clone();
    next.map = g;
    next.points.push(p_next.clone());
    next.monotone_max = true;
    next.stages.push(StageRecord { plan, checks });
    Ok(next)
}

/// Plans, aligns and builds one stage. When [`choose_alpha`] lands on
/// `|α| = γ/2`, which `λ_{n,k,α}` excludes, the next even `k` is tried.
pub fn advance(state: &ConstructionState, eta: &Rational, delta: &Rational, policy: PlanPolicy, budget: Budget) -> Result<ConstructionState> {
    let mut k_min = 2;
    loop {
        let plan = plan_stage_from(state, eta, delta, policy, budget, k_min)?;
        let (alpha, p_next) = choose_alpha(state, &plan)?;
        if &alpha.abs() * 2 == plan.gamma {
            k_min = plan.k + 2;
            continue;
        }
        return build_stage(state, &plan, &alpha, &p_next, budget);
    }
}

/// `stages` stages from `f_β` with `η_{m+1} = η_m/4` and `δ_{m+1} = δ_m/2`.
pub fn run_construction(
    beta: &Rational,
    stages: usize,
    eta: &Rational,
    delta: &Rational,
    policy: PlanPolicy,
    budget: Budget,
) -> Result<ConstructionState> {
    let mut state = ConstructionState::initial(beta);
    let (mut eta, mut delta) = (eta.clone(), delta.clone());
    for _ in 0..stages {
        state = advance(&state, &eta, &delta, policy, budget)?;
        eta = &eta / 4;
        delta = &delta / 2;
    }
    Ok(state)
}

/// How a crookedness certificate is sub-sampled when `G^N` is too large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Windows centred at `(i + 1/2)/windows`.
    pub windows: usize,
    /// Random value pairs `(a, b)` on the grid `ℤ/1024` per window.
    pub pairs_per_window: usize,
    /// Vertex cap for the restricted iterate on one window.
    pub window_vertices: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { windows: 4, pairs_per_window: 16, window_vertices: 50_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCrookedness {
    pub iterate: usize,
    pub report: CrookednessReport,
    /// Lift windows `[lo, hi]` of the sub-sample, empty for a full certificate.
    pub windows: Vec<(Rational, Rational)>,
}

/// δ-crookedness of `G^N` for the last built stage: a full certificate when
/// the iterate fits the vertex budget, otherwise a flagged sub-sample of
/// preimage pairs inside narrow windows, evaluated on the exact restricted
/// iterate.
pub fn certify_stage_crookedness(state: &ConstructionState, plan: &StagePlan, budget: Budget, sample: SampleConfig) -> Result<StageCrookedness> {
    let g = &state.map;
    let iterate = plan.big_n;
    match g.iterate(iterate, budget.vertices) {
        Ok(gn) => Ok(StageCrookedness {
            iterate,
            report: delta_crooked_fast(&CrookView::circle(&gn), &plan.delta),
            windows: Vec::new(),
        }),
        Err(Error::VertexBudgetExceeded { .. }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
            let mut windows = Vec::new();
            let mut report: Option<CrookednessReport> = None;
            let mut pairs_total = 0u64;
            for i in 0..sample.windows {
                let centre = Rational::new(2 * i as i64 + 1, 2 * sample.windows as i64);
                let mut half = Rational::new(1, 8 * sample.windows as i64);
                let restricted = loop {
                    match g.iterate_on(iterate, &(&centre - &half), &(&centre + &half), sample.window_vertices) {
                        Ok(f) => break f,
                        Err(Error::VertexBudgetExceeded { needed, cap }) => {
                            let ratio = (needed / cap.max(1) as u128).max(1);
                            let shift = 128 - ratio.leading_zeros() + 1;
                            half = &half / (1i64 << shift.min(62));
                        }
                        Err(e) => return Err(e),
                    }
                };
                windows.push((restricted.x_min().clone(), restricted.x_max().clone()));
                let pairs: Vec<(Rational, Rational)> = (0..sample.pairs_per_window)
                    .map(|_| (Rational::new(rng.gen_range(0..1024), 1024), Rational::new(rng.gen_range(0..1024), 1024)))
                    .collect();
                pairs_total += pairs.len() as u64;
                let r = delta_crooked_sampled(&CrookView::window(&restricted), &plan.delta, &pairs);
                if !r.verdict {
                    report = Some(r);
                    break;
                }
            }
            let report = report.unwrap_or(CrookednessReport {
                delta: plan.delta.clone(),
                verdict: true,
                method: CrookMethod::Sampled,
                violation: None,
                value_pairs: pairs_total,
                complete: false,
            });
            Ok(StageCrookedness { iterate, report, windows })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationTarget {
    /// `G_β(p) = p`.
    Fixed,
    /// `G_β(p) = p + 1/2`.
    Half,
}

/// The parameter giving the tracked point the requested rotation, using
/// `G̃_β = G̃_{β₀} + (β - β₀)`.
pub fn beta_for_rotation(state: &ConstructionState, target: RotationTarget) -> Rational {
    let p = state.p();
    let shift = match target {
        RotationTarget::Fixed => Rational::zero(),
        RotationTarget::Half => Rational::half(),
    };
    &(&(p + &shift) - &state.map.eval(p)) + &state.beta
}

#[cfg(test)]
mod tests;
