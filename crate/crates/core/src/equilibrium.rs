//! Perfect Bayesian equilibria of the signaling game with evidence.
//!
//! The receiver's optimal pooling responses change at four prior thresholds,
//! which cut `p(1)` into five regimes. Pooling equilibria are found by
//! checking whether the on-path response ignores the evidence; in the Middle
//! regime, where it never does (for non-EER detectors), the
//! partially-separating equilibrium is built from two 2×2 indifference
//! systems: the receiver's mixing makes both sender types indifferent, and
//! the sender's mixing makes the receiver indifferent at the two mixing
//! information sets.
//!
//! Every equilibrium returned by [`solve`] has passed
//! [`verify_pbne`](crate::verifier::verify_pbne).

use crate::beliefs::{pooling_posterior, BeliefError, BeliefSystem};
use crate::game_model::{Bit, DetectorClass, GameConfig};
use crate::strategy::{ReceiverStrategy, SenderStrategy, StrategyProfile};
use crate::verifier::verify_pbne;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("partially-separating equilibria exist only in the Middle regime (prior is in {0})")]
    WrongRegime(RegimeKind),
    #[error("partially-separating equilibria are not characterized for equal-error-rate detectors")]
    EqualErrorRateUnsupported,
    #[error("equal-error-rate detector: receiver is exactly indifferent at (m={m}, e={e}) on a regime boundary")]
    EqualErrorRateAmbiguity { m: Bit, e: Bit },
    #[error("indifference system is singular")]
    SingularSystem,
    #[error("indifference solution {name}={value} falls outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("{kind} candidate failed verification (max gap {max_gap:e})")]
    VerificationFailed { kind: EquilibriumKind, max_gap: f64 },
    #[error(transparent)]
    Belief(#[from] BeliefError),
}

/// Named prior threshold; each is where one pooling response cell switches to action 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Threshold {
    /// `(m, e) = (0, 1)`.
    A,
    /// `(m, e) = (1, 0)`.
    B,
    /// `(m, e) = (0, 0)`.
    C,
    /// `(m, e) = (1, 1)`.
    D,
}

impl Threshold {
    pub fn for_cell(m: Bit, e: Bit) -> Threshold {
        match (m, e) {
            (Bit::Zero, Bit::One) => Threshold::A,
            (Bit::One, Bit::Zero) => Threshold::B,
            (Bit::Zero, Bit::Zero) => Threshold::C,
            (Bit::One, Bit::One) => Threshold::D,
        }
    }
}

/// Prior thresholds in `p(1)`-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    pub t_a: f64,
    pub t_b: f64,
    pub t_c: f64,
    pub t_d: f64,
}

impl RegimeThresholds {
    pub fn get(&self, t: Threshold) -> f64 {
        match t {
            Threshold::A => self.t_a,
            Threshold::B => self.t_b,
            Threshold::C => self.t_c,
            Threshold::D => self.t_d,
        }
    }

    /// Boundaries in increasing `p(1)`. EER detectors use the aggressive
    /// order; their pairs coincide so the Heavy regimes are empty.
    pub fn ordered(&self, class: DetectorClass) -> [(Threshold, f64); 4] {
        let order = match class {
            DetectorClass::Conservative => [Threshold::A, Threshold::B, Threshold::C, Threshold::D],
            DetectorClass::Aggressive | DetectorClass::EqualErrorRate => {
                [Threshold::B, Threshold::A, Threshold::D, Threshold::C]
            }
        };
        order.map(|t| (t, self.get(t)))
    }
}

pub fn regime_thresholds(config: &GameConfig) -> RegimeThresholds {
    let (a, b) = (config.detector().alpha(), config.detector().beta());
    let (d0, d1) = (config.delta0(), config.delta1());
    let cut = |w0: f64, w1: f64| d0 * w0 / (d0 * w0 + d1 * w1);
    RegimeThresholds {
        t_a: cut(a, b),
        t_b: cut(1.0 - b, 1.0 - a),
        t_c: cut(1.0 - a, 1.0 - b),
        t_d: cut(b, a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegimeKind {
    ZeroDominant,
    ZeroHeavy,
    Middle,
    OneHeavy,
    OneDominant,
}

impl RegimeKind {
    pub const ALL: [RegimeKind; 5] = [
        RegimeKind::ZeroDominant,
        RegimeKind::ZeroHeavy,
        RegimeKind::Middle,
        RegimeKind::OneHeavy,
        RegimeKind::OneDominant,
    ];

    fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn is_dominant(self) -> bool {
        matches!(self, RegimeKind::ZeroDominant | RegimeKind::OneDominant)
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// Thresholds the prior sits on, within the configured tolerance.
    pub boundary_flags: Vec<Threshold>,
}

impl Regime {
    pub fn on_boundary(&self) -> bool {
        !self.boundary_flags.is_empty()
    }
}

/// Bins `p(1)` against the ordered thresholds. A prior within `ε` of a
/// threshold belongs to the lower regime and is flagged.
pub fn classify_regime(config: &GameConfig) -> Regime {
    let p = config.prior_one();
    let eps = config.epsilon();
    let ordered = regime_thresholds(config).ordered(config.detector().class());
    let index = ordered.iter().filter(|(_, t)| p - t > eps).count();
    let mut boundary_flags: Vec<Threshold> = ordered
        .iter()
        .filter(|(_, t)| (p - t).abs() <= eps)
        .map(|(name, _)| *name)
        .collect();
    boundary_flags.sort();
    Regime {
        kind: RegimeKind::from_index(index),
        boundary_flags,
    }
}

/// On-path receiver response when both types send `pooled_m`:
/// `act_one[e] = σ^R(1 | pooled_m, e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolingResponse {
    pub pooled_m: Bit,
    pub act_one: [f64; 2],
    /// Cells where the receiver is exactly indifferent; resolved to action 0.
    pub ties: [bool; 2],
}

impl PoolingResponse {
    pub fn ignores_evidence(&self) -> bool {
        self.act_one[0] == self.act_one[1]
    }
}

pub fn receiver_pooling_response(
    config: &GameConfig,
    pooled_m: Bit,
) -> Result<PoolingResponse, SolveError> {
    let p = config.prior_one();
    let eps = config.epsilon();
    let thresholds = regime_thresholds(config);
    let eer = config.detector().class() == DetectorClass::EqualErrorRate;
    let mut act_one = [0.0; 2];
    let mut ties = [false; 2];
    for e in Bit::ALL {
        let cut = thresholds.get(Threshold::for_cell(pooled_m, e));
        let choice = if (p - cut).abs() <= eps {
            if eer {
                return Err(SolveError::EqualErrorRateAmbiguity { m: pooled_m, e });
            }
            ties[e.index()] = true;
            Bit::Zero
        } else {
            match pooling_posterior(config.detector(), p, Bit::One, pooled_m, e) {
                Ok(mu1) => Bit::from(mu1 * config.delta1() > (1.0 - mu1) * config.delta0()),
                // evidence cell unreachable under the prior; only the prior speaks
                Err(_) => Bit::from(p > cut),
            }
        };
        act_one[e.index()] = choice.as_f64();
    }
    Ok(PoolingResponse {
        pooled_m,
        act_one,
        ties,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EquilibriumKind {
    PoolingOnZero,
    PoolingOnOne,
    PartiallySeparating,
}

impl EquilibriumKind {
    pub fn pooling_on(m: Bit) -> Self {
        match m {
            Bit::Zero => EquilibriumKind::PoolingOnZero,
            Bit::One => EquilibriumKind::PoolingOnOne,
        }
    }

    pub fn pooled_message(self) -> Option<Bit> {
        match self {
            EquilibriumKind::PoolingOnZero => Some(Bit::Zero),
            EquilibriumKind::PoolingOnOne => Some(Bit::One),
            EquilibriumKind::PartiallySeparating => None,
        }
    }
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub kind: EquilibriumKind,
    pub profile: StrategyProfile,
    pub beliefs: BeliefSystem,
    pub regime: Regime,
    /// Some player is exactly indifferent between a supported and an
    /// unsupported action (boundary priors, EER pooling).
    pub weak: bool,
}

/// Pooling equilibria for both candidate messages.
///
/// When the on-path response ignores the evidence (action `a*`), off-path
/// beliefs put all mass on `θ = a*`, so a deviation meets the same action.
/// When it depends on the evidence, one sender type always gains by
/// deviating unless the detector has equal error rates; in that case the
/// off-path response mirrors the on-path one and both types are exactly
/// indifferent.
pub fn pooling_equilibria(config: &GameConfig) -> Result<Vec<Equilibrium>, SolveError> {
    let regime = classify_regime(config);
    let eer = config.detector().class() == DetectorClass::EqualErrorRate;
    let mut out = Vec::new();
    for m in Bit::ALL {
        let response = receiver_pooling_response(config, m)?;
        let off = m.flip();
        // off-path receiver action per evidence value
        let off_actions = if response.ignores_evidence() {
            let a_star = Bit::from(response.act_one[0] == 1.0);
            [a_star, a_star]
        } else if eer {
            [off, m]
        } else {
            continue;
        };

        let mut act = [[0.0; 2]; 2];
        let mut off_beliefs = [[None; 2]; 2];
        for e in Bit::ALL {
            act[m.index()][e.index()] = response.act_one[e.index()];
            act[off.index()][e.index()] = off_actions[e.index()].as_f64();
            // point beliefs on the type the action targets
            off_beliefs[m.index()][e.index()] = Some(response.act_one[e.index()]);
            off_beliefs[off.index()][e.index()] = Some(off_actions[e.index()].as_f64());
        }
        let receiver = ReceiverStrategy::new(act[0][0], act[0][1], act[1][0], act[1][1])
            .expect("pure actions are probabilities");
        let sender = SenderStrategy::pooling(m);
        let beliefs = BeliefSystem::from_profile(config, &sender, off_beliefs)?;
        let weak = regime.on_boundary()
            || response.ties.iter().any(|&t| t)
            || !response.ignores_evidence();
        out.push(Equilibrium {
            kind: EquilibriumKind::pooling_on(m),
            profile: StrategyProfile::new(sender, receiver),
            beliefs,
            regime: regime.clone(),
            weak,
        });
    }
    Ok(out)
}

/// Solves `A v = b` for a 2×2 system by Cramer's rule.
pub(crate) fn solve_2x2(a: [[f64; 2]; 2], b: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    Some([
        (b[0] * a[1][1] - a[0][1] * b[1]) / det,
        (a[0][0] * b[1] - b[0] * a[1][0]) / det,
    ])
}

/// Clamps into `[0, 1]`; with `snap`, values within `eps` of an end are set
/// to it so that a message the solution abandons is treated as off-path.
fn unit_interval(name: &'static str, v: f64, eps: f64, snap: bool) -> Result<f64, SolveError> {
    // round-off in the solve can exceed a very small configured tolerance
    let slack = eps.max(1e-9);
    if !(v.is_finite() && v >= -slack && v <= 1.0 + slack) {
        return Err(SolveError::OutOfRange { name, value: v });
    }
    Ok(if snap && v <= eps {
        0.0
    } else if snap && v >= 1.0 - eps {
        1.0
    } else {
        v.clamp(0.0, 1.0)
    })
}

/// The Middle-regime equilibrium in which both players mix.
///
/// Aggressive detectors: the receiver trusts the message without an alarm
/// (`w = 0`, `y = 1`) and mixes after an alarm. Conservative detectors: the
/// receiver distrusts the message after an alarm (`x = 1`, `z = 0`) and mixes
/// without one.
pub fn partial_separating_equilibrium(config: &GameConfig) -> Result<Equilibrium, SolveError> {
    let regime = classify_regime(config);
    if regime.kind != RegimeKind::Middle {
        return Err(SolveError::WrongRegime(regime.kind));
    }
    let class = config.detector().class();
    if class == DetectorClass::EqualErrorRate {
        return Err(SolveError::EqualErrorRateUnsupported);
    }

    let eps = config.epsilon();
    let (alpha, beta) = (config.detector().alpha(), config.detector().beta());
    let p = config.prior_one();
    let p_bar = 1.0 - p;
    let k = config.k();
    let k_bar = 1.0 - k;

    // `lo`/`hi` are the detection likelihoods at the mixing information sets
    // for an honest / deceptive message respectively.
    let (lo, hi, receiver_rhs) = match class {
        DetectorClass::Aggressive => (alpha, beta, [1.0 - beta, 1.0 - alpha]),
        _ => (1.0 - alpha, 1.0 - beta, [-alpha, -beta]),
    };

    // receiver mixing that makes both sender types indifferent
    let mix = solve_2x2([[lo, -hi], [hi, -lo]], receiver_rhs).ok_or(SolveError::SingularSystem)?;
    // sender mixing that makes the receiver indifferent at the mixing cells
    let sender = solve_2x2(
        [[-lo * p_bar * k_bar, hi * p * k], [-hi * p_bar * k_bar, lo * p * k]],
        [-lo * p_bar * k_bar + hi * p * k, 0.0],
    )
    .ok_or(SolveError::SingularSystem)?;

    let snap = regime.on_boundary();
    let q = unit_interval("q", sender[0], eps, snap)?;
    let r = unit_interval("r", sender[1], eps, snap)?;
    let (w, x, y, z) = match class {
        DetectorClass::Aggressive => (
            0.0,
            unit_interval("x", mix[0], eps, false)?,
            1.0,
            unit_interval("z", mix[1], eps, false)?,
        ),
        _ => (
            unit_interval("w", mix[0], eps, false)?,
            1.0,
            unit_interval("y", mix[1], eps, false)?,
            0.0,
        ),
    };

    let sender = SenderStrategy::new(q, r).expect("clamped");
    let receiver = ReceiverStrategy::new(w, x, y, z).expect("clamped");

    // Only reachable on a regime boundary, where q or r hits 0 or 1: mixing
    // cells keep the indifference belief, pure cells a point belief.
    let mixing_cells = match class {
        DetectorClass::Aggressive => [(Bit::Zero, Bit::One), (Bit::One, Bit::One)],
        _ => [(Bit::Zero, Bit::Zero), (Bit::One, Bit::Zero)],
    };
    let mut off = [[None; 2]; 2];
    for m in Bit::ALL {
        for e in Bit::ALL {
            off[m.index()][e.index()] = Some(if mixing_cells.contains(&(m, e)) {
                k_bar
            } else {
                receiver.act_one(m, e)
            });
        }
    }
    let beliefs = BeliefSystem::from_profile(config, &sender, off)?;

    Ok(Equilibrium {
        kind: EquilibriumKind::PartiallySeparating,
        profile: StrategyProfile::new(sender, receiver),
        beliefs,
        weak: regime.on_boundary(),
        regime,
    })
}

/// All equilibria of the game: pooling ones plus, in the Middle regime, the
/// partially-separating one. Each is verified before it is returned.
pub fn solve(config: &GameConfig) -> Result<Vec<Equilibrium>, SolveError> {
    let mut out = pooling_equilibria(config)?;
    let regime = classify_regime(config);
    if regime.kind == RegimeKind::Middle && config.detector().class() != DetectorClass::EqualErrorRate {
        out.push(partial_separating_equilibrium(config)?);
    }
    for eq in &out {
        let report = verify_pbne(config, &eq.profile, &eq.beliefs, config.epsilon());
        if !report.passed {
            return Err(SolveError::VerificationFailed {
                kind: eq.kind,
                max_gap: report.max_violation(),
            });
        }
    }
    Ok(out)
}
