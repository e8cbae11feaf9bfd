//! Expected utilities.
//!
//! Every sum is written out over the full index set, exactly as the payoff
//! definitions read, with no factorization.

use crate::game_model::{Bit, GameConfig};
use serde::{Deserialize, Serialize};

pub use crate::strategy::{ReceiverStrategy, SenderStrategy, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    Sender,
    Receiver,
}

/// `ū^S(σ^S, σ^R | θ) = Σ_a Σ_e Σ_m σ^R(a|m,e) λ(e|θ,m) σ^S(m|θ) u^S(θ,m,a)`.
pub fn sender_expected_utility(profile: &StrategyProfile, config: &GameConfig, theta: Bit) -> f64 {
    let d = config.detector();
    let u = config.sender_utils();
    let mut total = 0.0;
    for a in Bit::ALL {
        for e in Bit::ALL {
            for m in Bit::ALL {
                total += profile.receiver.prob(a, m, e)
                    * d.likelihood(e, theta, m)
                    * profile.sender.prob(m, theta)
                    * u.get(theta, m, a);
            }
        }
    }
    total
}

/// `ū^R(σ^R | θ, m, e) = Σ_a σ^R(a|m,e) u^R(θ,m,a)`.
pub fn receiver_conditional_utility(
    receiver: &ReceiverStrategy,
    config: &GameConfig,
    theta: Bit,
    m: Bit,
    e: Bit,
) -> f64 {
    Bit::ALL
        .iter()
        .map(|&a| receiver.prob(a, m, e) * config.receiver_utils().get(theta, m, a))
        .sum()
}

/// A priori expected utility `Ũ^X` before the type is drawn.
pub fn a_priori_utility(profile: &StrategyProfile, config: &GameConfig, player: Player) -> f64 {
    let d = config.detector();
    let u = match player {
        Player::Sender => config.sender_utils(),
        Player::Receiver => config.receiver_utils(),
    };
    let mut total = 0.0;
    for theta in Bit::ALL {
        for m in Bit::ALL {
            for e in Bit::ALL {
                for a in Bit::ALL {
                    total += config.prior(theta)
                        * profile.sender.prob(m, theta)
                        * d.likelihood(e, theta, m)
                        * profile.receiver.prob(a, m, e)
                        * u.get(theta, m, a);
                }
            }
        }
    }
    total
}

/// Probability that a sender of type `θ` who sends `m` is met with action `a`:
/// `Σ_e λ(e|θ,m) σ^R(a|m,e)`.
pub fn action_reach(receiver: &ReceiverStrategy, config: &GameConfig, theta: Bit, m: Bit, a: Bit) -> f64 {
    Bit::ALL
        .iter()
        .map(|&e| config.detector().likelihood(e, theta, m) * receiver.prob(a, m, e))
        .sum()
}
