//! Receiver beliefs.
//!
//! On the equilibrium path beliefs follow Bayes' law in two steps: first on
//! the message (`μ(θ|m)`), then on the evidence (`μ(θ|m,e)`). Where the
//! joint reach probability of `(m, e)` is zero, any distribution over types
//! is admissible, and the caller must say which one it wants.

use crate::game_model::{Bit, Detector, GameConfig};
use crate::strategy::SenderStrategy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeliefError {
    #[error("message {m} is off the equilibrium path; an off-path belief must be supplied")]
    OffPathMessage { m: Bit },
    #[error("evidence update has zero denominator at (m={m}, e={e})")]
    ZeroDenominator { m: Bit, e: Bit },
    #[error("no belief assigned to off-path information set (m={m}, e={e})")]
    MissingOffPathBelief { m: Bit, e: Bit },
    #[error("belief {value} at (m={m}, e={e}) is not a probability")]
    InvalidBelief { m: Bit, e: Bit, value: f64 },
}

/// `μ^R(θ | m)`: posterior on the type after seeing the message alone.
pub fn posterior_given_message(
    sender: &SenderStrategy,
    prior_one: f64,
    theta: Bit,
    m: Bit,
) -> Result<f64, BeliefError> {
    let weight = |t: Bit| sender.prob(m, t) * prior(prior_one, t);
    let denom = weight(Bit::Zero) + weight(Bit::One);
    if denom <= 0.0 {
        return Err(BeliefError::OffPathMessage { m });
    }
    Ok(weight(theta) / denom)
}

/// `μ^R(θ | m, e)` from a message posterior `mu_given_m[θ]`.
pub fn posterior_given_evidence(
    detector: &Detector,
    mu_given_m: [f64; 2],
    theta: Bit,
    m: Bit,
    e: Bit,
) -> Result<f64, BeliefError> {
    let weight = |t: Bit| detector.likelihood(e, t, m) * mu_given_m[t.index()];
    let denom = weight(Bit::Zero) + weight(Bit::One);
    if denom <= 0.0 {
        return Err(BeliefError::ZeroDenominator { m, e });
    }
    Ok(weight(theta) / denom)
}

/// Posterior when both types send the same message: only the evidence is informative.
pub fn pooling_posterior(
    detector: &Detector,
    prior_one: f64,
    theta: Bit,
    m: Bit,
    e: Bit,
) -> Result<f64, BeliefError> {
    posterior_given_evidence(detector, [1.0 - prior_one, prior_one], theta, m, e)
}

/// Single-step Bayes: `λ(e|θ,m) σ(m|θ) p(θ) / Σ_θ' λ(e|θ',m) σ(m|θ') p(θ')`.
pub fn joint_posterior(
    config: &GameConfig,
    sender: &SenderStrategy,
    theta: Bit,
    m: Bit,
    e: Bit,
) -> Option<f64> {
    let reach = reach(config, sender, m, e);
    let total = reach[0] + reach[1];
    (total > 0.0).then(|| reach[theta.index()] / total)
}

/// Joint probability `p(θ) σ(m|θ) λ(e|θ,m)` of each type arriving at `(m, e)`.
pub fn reach(config: &GameConfig, sender: &SenderStrategy, m: Bit, e: Bit) -> [f64; 2] {
    Bit::ALL.map(|t| config.prior(t) * sender.prob(m, t) * config.detector().likelihood(e, t, m))
}

fn prior(prior_one: f64, theta: Bit) -> f64 {
    match theta {
        Bit::One => prior_one,
        Bit::Zero => 1.0 - prior_one,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BeliefOrigin {
    OnPath,
    OffPathAssigned,
}

/// Receiver beliefs at every information set `(m, e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefSystem {
    /// `μ(θ = 1 | m, e)`, indexed `[m][e]`.
    post_one: [[f64; 2]; 2],
    origin: [[BeliefOrigin; 2]; 2],
}

impl BeliefSystem {
    pub fn new(
        post_one: [[f64; 2]; 2],
        origin: [[BeliefOrigin; 2]; 2],
    ) -> Result<Self, BeliefError> {
        for m in Bit::ALL {
            for e in Bit::ALL {
                let v = post_one[m.index()][e.index()];
                if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                    return Err(BeliefError::InvalidBelief { m, e, value: v });
                }
            }
        }
        Ok(Self { post_one, origin })
    }

    /// Bayes beliefs on the path; `off_path[m][e]` (as `μ(1|m,e)`) everywhere else.
    pub fn from_profile(
        config: &GameConfig,
        sender: &SenderStrategy,
        off_path: [[Option<f64>; 2]; 2],
    ) -> Result<Self, BeliefError> {
        let mut post_one = [[0.0; 2]; 2];
        let mut origin = [[BeliefOrigin::OnPath; 2]; 2];
        for m in Bit::ALL {
            for e in Bit::ALL {
                let (mi, ei) = (m.index(), e.index());
                let r = reach(config, sender, m, e);
                if r[0] + r[1] > 0.0 {
                    let mu_m = [
                        posterior_given_message(sender, config.prior_one(), Bit::Zero, m)?,
                        posterior_given_message(sender, config.prior_one(), Bit::One, m)?,
                    ];
                    post_one[mi][ei] =
                        posterior_given_evidence(config.detector(), mu_m, Bit::One, m, e)?;
                } else {
                    let v = off_path[mi][ei].ok_or(BeliefError::MissingOffPathBelief { m, e })?;
                    post_one[mi][ei] = v;
                    origin[mi][ei] = BeliefOrigin::OffPathAssigned;
                }
            }
        }
        Self::new(post_one, origin)
    }

    /// `μ(θ | m, e)`.
    pub fn post(&self, theta: Bit, m: Bit, e: Bit) -> f64 {
        let one = self.post_one[m.index()][e.index()];
        match theta {
            Bit::One => one,
            Bit::Zero => 1.0 - one,
        }
    }

    pub fn origin(&self, m: Bit, e: Bit) -> BeliefOrigin {
        self.origin[m.index()][e.index()]
    }
}
