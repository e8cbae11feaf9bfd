//! Independent equilibrium checks.
//!
//! [`verify_pbne`] tests a candidate directly against the equilibrium
//! conditions. [`brute_force_search`] scans a grid of sender strategies and
//! finds receiver replies that support them without using any of the
//! closed-form results, so it can be used to confirm them.

use crate::beliefs::{joint_posterior, reach, BeliefSystem};
use crate::equilibrium::{classify_regime, solve_2x2, RegimeKind};
use crate::expected_utility::{receiver_conditional_utility, sender_expected_utility};
use crate::game_model::{Bit, DetectorClass, GameConfig};
use crate::strategy::{ReceiverStrategy, SenderStrategy, StrategyProfile};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("grid needs at least two steps, got {0}")]
    GridTooSmall(usize),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefResidual {
    pub m: Bit,
    pub e: Bit,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// Best pure deviation gain, per sender type.
    pub sender_gaps: [f64; 2],
    /// Best pure deviation gain, per receiver information set `[m][e]`.
    pub receiver_gaps: [[f64; 2]; 2],
    /// Bayes residuals at the on-path information sets.
    pub belief_residuals: Vec<BeliefResidual>,
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn max_violation(&self) -> f64 {
        self.sender_gaps
            .iter()
            .chain(self.receiver_gaps.iter().flatten())
            .copied()
            .chain(self.belief_residuals.iter().map(|b| b.residual))
            .fold(0.0, f64::max)
    }
}

fn sender_gap(profile: &StrategyProfile, config: &GameConfig, theta: Bit) -> f64 {
    let current = sender_expected_utility(profile, config, theta);
    let best = Bit::ALL
        .iter()
        .map(|&m| {
            let dev = StrategyProfile::new(profile.sender.with_pure(theta, m), profile.receiver);
            sender_expected_utility(&dev, config, theta)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    (best - current).max(0.0)
}

/// Expected utility of action `a` at `(m, e)` under point-free beliefs `μ(1|m,e)`.
fn receiver_action_value(config: &GameConfig, mu1: f64, m: Bit, e: Bit, a: Bit) -> f64 {
    let pure = ReceiverStrategy::constant(a);
    (1.0 - mu1) * receiver_conditional_utility(&pure, config, Bit::Zero, m, e)
        + mu1 * receiver_conditional_utility(&pure, config, Bit::One, m, e)
}

/// Checks sequential rationality for both players and Bayes consistency on
/// the path. Bayes consistency is recomputed from the profile in one step
/// and does not trust the origin tags stored in `beliefs`.
pub fn verify_pbne(
    config: &GameConfig,
    profile: &StrategyProfile,
    beliefs: &BeliefSystem,
    tolerance: f64,
) -> VerificationReport {
    let sender_gaps = Bit::ALL.map(|t| sender_gap(profile, config, t));

    let mut receiver_gaps = [[0.0; 2]; 2];
    let mut belief_residuals = Vec::new();
    for m in Bit::ALL {
        for e in Bit::ALL {
            let mu1 = beliefs.post(Bit::One, m, e);
            let current: f64 = Bit::ALL
                .iter()
                .map(|&a| profile.receiver.prob(a, m, e) * receiver_action_value(config, mu1, m, e, a))
                .sum();
            let best = Bit::ALL
                .iter()
                .map(|&a| receiver_action_value(config, mu1, m, e, a))
                .fold(f64::NEG_INFINITY, f64::max);
            receiver_gaps[m.index()][e.index()] = (best - current).max(0.0);

            if let Some(bayes) = joint_posterior(config, &profile.sender, Bit::One, m, e) {
                belief_residuals.push(BeliefResidual {
                    m,
                    e,
                    residual: (bayes - mu1).abs(),
                });
            }
        }
    }

    let mut report = VerificationReport {
        passed: false,
        sender_gaps,
        receiver_gaps,
        belief_residuals,
        tolerance,
    };
    report.passed = report.max_violation() <= tolerance;
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateKind {
    /// Supported by a pure receiver reply.
    Pure,
    /// Supported only by a receiver that mixes at some information sets.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub profile: StrategyProfile,
}

impl Candidate {
    pub fn q(&self) -> f64 {
        self.profile.sender.q()
    }

    pub fn r(&self) -> f64 {
        self.profile.sender.r()
    }

    /// The message both types send, if this is a pooling profile.
    pub fn pooled_message(&self) -> Option<Bit> {
        match (self.q(), self.r()) {
            (q, r) if q == 0.0 && r == 0.0 => Some(Bit::Zero),
            (q, r) if q == 1.0 && r == 1.0 => Some(Bit::One),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchWarning {
    /// The prior lies in the Middle regime but no mixed candidate was found.
    GridTooCoarse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub grid_steps: usize,
    /// Sorted by `(q, r)`.
    pub candidates: Vec<Candidate>,
    pub warning: Option<SearchWarning>,
}

impl SearchOutcome {
    pub fn mixed(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.kind == CandidateKind::Mixed)
    }

    pub fn pooling_messages(&self) -> Vec<Bit> {
        let mut out: Vec<Bit> = self.candidates.iter().filter_map(|c| c.pooled_message()).collect();
        out.dedup();
        out
    }

    /// Mixed candidate closest to `(q, r)` in sup norm.
    pub fn nearest_mixed(&self, q: f64, r: f64) -> Option<(f64, &Candidate)> {
        self.mixed()
            .map(|c| ((c.q() - q).abs().max((c.r() - r).abs()), c))
            .min_by(|a, b| a.0.total_cmp(&b.0))
    }
}

/// Receiver best-reply options at one information set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reply {
    Only(Bit),
    /// Tied, or unreachable so any action is admissible.
    Either,
}

impl Reply {
    fn options(self) -> &'static [f64] {
        match self {
            Reply::Only(Bit::Zero) => &[0.0],
            Reply::Only(Bit::One) => &[1.0],
            Reply::Either => &[0.0, 1.0],
        }
    }
}

const CELLS: [(Bit, Bit); 4] = [
    (Bit::Zero, Bit::Zero),
    (Bit::Zero, Bit::One),
    (Bit::One, Bit::Zero),
    (Bit::One, Bit::One),
];

/// `Σ_θ reach_θ (u^R(θ,m,1) − u^R(θ,m,0))`: positive where action 1 is strictly better.
fn action_score(config: &GameConfig, sender: &SenderStrategy, m: Bit, e: Bit) -> f64 {
    let w = reach(config, sender, m, e);
    let u = config.receiver_utils();
    Bit::ALL
        .iter()
        .map(|&t| w[t.index()] * (u.get(t, m, Bit::One) - u.get(t, m, Bit::Zero)))
        .sum()
}

fn on_path(config: &GameConfig, sender: &SenderStrategy, m: Bit, e: Bit) -> bool {
    let w = reach(config, sender, m, e);
    w[0] + w[1] > 0.0
}

fn best_replies(config: &GameConfig, sender: &SenderStrategy, eps: f64) -> [Reply; 4] {
    CELLS.map(|(m, e)| {
        if !on_path(config, sender, m, e) {
            return Reply::Either;
        }
        let w = reach(config, sender, m, e);
        // score normalized by reach gives the belief-weighted utility difference
        let diff = action_score(config, sender, m, e) / (w[0] + w[1]);
        if diff.abs() <= eps {
            Reply::Either
        } else {
            Reply::Only(Bit::from(diff > 0.0))
        }
    })
}

fn receiver_from(cells: [f64; 4]) -> ReceiverStrategy {
    ReceiverStrategy::new(cells[0], cells[1], cells[2], cells[3]).expect("probabilities")
}

fn sender_stable(config: &GameConfig, profile: &StrategyProfile, eps: f64) -> bool {
    Bit::ALL.iter().all(|&t| sender_gap(profile, config, t) <= eps)
}

/// All pure receiver replies drawn from the per-cell option sets.
fn pure_replies(options: [&[f64]; 4]) -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    for &a in options[0] {
        for &b in options[1] {
            for &c in options[2] {
                for &d in options[3] {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Whether the best reply at `(m, e)` may switch within the grid cell
/// `[q ± h/2] × [r ± h/2]` around the current point.
fn tied_within_box(config: &GameConfig, q: f64, r: f64, h: f64, m: Bit, e: Bit) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for dq in [-h / 2.0, h / 2.0] {
        for dr in [-h / 2.0, h / 2.0] {
            let s = SenderStrategy::new((q + dq).clamp(0.0, 1.0), (r + dr).clamp(0.0, 1.0))
                .expect("clamped");
            let v = action_score(config, &s, m, e);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    lo <= 0.0 && hi >= 0.0
}

/// Receiver mixing at two cells that makes both sender types indifferent
/// between messages, with all other cells fixed.
fn indifference_mix(config: &GameConfig, base: [f64; 4], pair: (usize, usize), eps: f64) -> Option<[f64; 4]> {
    let d = config.detector();
    let sign = |m: Bit| if m == Bit::Zero { 1.0 } else { -1.0 };
    // type θ: Σ_e λ(e|θ,0)σ(1|0,e) − Σ_e λ(e|θ,1)σ(1|1,e) = 0
    // is indifference because the sender payoff ignores the message
    let mut a = [[0.0; 2]; 2];
    let mut b = [0.0; 2];
    for theta in Bit::ALL {
        let row = theta.index();
        for (i, &(m, e)) in CELLS.iter().enumerate() {
            let coef = sign(m) * d.likelihood(e, theta, m);
            if i == pair.0 {
                a[row][0] = coef;
            } else if i == pair.1 {
                a[row][1] = coef;
            } else {
                b[row] -= coef * base[i];
            }
        }
    }
    let v = solve_2x2(a, b)?;
    if v.iter().any(|x| !x.is_finite() || *x < -eps || *x > 1.0 + eps) {
        return None;
    }
    let v = v.map(|x| x.clamp(0.0, 1.0));
    if v.iter().all(|x| *x == 0.0 || *x == 1.0) {
        return None;
    }
    let mut out = base;
    out[pair.0] = v[0];
    out[pair.1] = v[1];
    Some(out)
}

/// Scans `q, r ∈ {0, 1/n, …, 1}` for sender strategies that are part of an
/// equilibrium.
///
/// A point is a `Pure` candidate if some pure receiver best reply (ties and
/// unreachable cells allow either action) leaves both sender types without a
/// profitable deviation. Otherwise it is a `Mixed` candidate if the receiver
/// can mix at two information sets whose best reply switches within the
/// surrounding grid cell and thereby make both types indifferent.
pub fn brute_force_search(
    config: &GameConfig,
    grid_steps: usize,
    tolerance: f64,
) -> Result<SearchOutcome, VerifyError> {
    if grid_steps < 2 {
        return Err(VerifyError::GridTooSmall(grid_steps));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(VerifyError::InvalidTolerance(tolerance));
    }
    let n = grid_steps as f64;
    let h = 1.0 / n;
    let mut candidates = Vec::new();

    for i in 0..=grid_steps {
        for j in 0..=grid_steps {
            let (q, r) = (i as f64 / n, j as f64 / n);
            let sender = SenderStrategy::new(q, r).expect("grid point");
            let replies = best_replies(config, &sender, tolerance);

            let pure = pure_replies(replies.map(Reply::options))
                .into_iter()
                .map(|cells| StrategyProfile::new(sender, receiver_from(cells)))
                .find(|p| sender_stable(config, p, tolerance));
            if let Some(profile) = pure {
                candidates.push(Candidate {
                    kind: CandidateKind::Pure,
                    profile,
                });
                continue;
            }

            let free: Vec<bool> = CELLS
                .iter()
                .map(|&(m, e)| !on_path(config, &sender, m, e) || tied_within_box(config, q, r, h, m, e))
                .collect();
            // cells outside the pair keep their best reply at the grid point
            let base_options = replies.map(Reply::options);
            let mixed = (0..4)
                .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
                .filter(|&(a, b)| free[a] && free[b])
                .flat_map(|pair| {
                    pure_replies(base_options)
                        .into_iter()
                        .filter_map(move |base| indifference_mix(config, base, pair, tolerance))
                })
                .map(|cells| StrategyProfile::new(sender, receiver_from(cells)))
                .find(|p| sender_stable(config, p, tolerance));
            if let Some(profile) = mixed {
                candidates.push(Candidate {
                    kind: CandidateKind::Mixed,
                    profile,
                });
            }
        }
    }

    candidates.sort_by(|a, b| a.q().total_cmp(&b.q()).then(a.r().total_cmp(&b.r())));
    let regime = classify_regime(config);
    let warning = (regime.kind == RegimeKind::Middle
        && config.detector().class() != DetectorClass::EqualErrorRate
        && !candidates.iter().any(|c| c.kind == CandidateKind::Mixed))
    .then_some(SearchWarning::GridTooCoarse);

    Ok(SearchOutcome {
        grid_steps,
        candidates,
        warning,
    })
}

/// `true` when neither fully separating sender strategy can be part of an
/// equilibrium, whatever the receiver does off the path.
pub fn check_no_separating(config: &GameConfig, tolerance: f64) -> bool {
    [(0.0, 1.0), (1.0, 0.0)].iter().all(|&(q, r)| {
        let sender = SenderStrategy::new(q, r).expect("pure");
        let replies = best_replies(config, &sender, tolerance);
        !pure_replies(replies.map(Reply::options))
            .into_iter()
            .map(|cells| StrategyProfile::new(sender, receiver_from(cells)))
            .any(|p| sender_stable(config, &p, tolerance))
    })
}
