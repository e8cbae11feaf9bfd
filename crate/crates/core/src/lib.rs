//! Signaling games with evidence.
//!
//! A sender of private type `θ ∈ {0, 1}` sends a message `m`; a detector
//! emits evidence `e` whose likelihood depends on whether the message is
//! truthful; the receiver then acts. This crate computes the perfect Bayesian
//! equilibria of the game, checks them independently, and runs comparative
//! statics over the prior and the detector.

pub mod analysis;
pub mod beliefs;
pub mod equilibrium;
pub mod expected_utility;
pub mod game_model;
pub mod strategy;
pub mod verifier;

pub use beliefs::{BeliefError, BeliefOrigin, BeliefSystem};
pub use equilibrium::{
    classify_regime, partial_separating_equilibrium, pooling_equilibria, regime_thresholds, solve,
    Equilibrium, EquilibriumKind, Regime, RegimeKind, RegimeThresholds, SolveError, Threshold,
};
pub use expected_utility::{a_priori_utility, sender_expected_utility, Player};
pub use game_model::{
    validate_game, Bit, Detector, DetectorClass, DetectorShape, GameConfig, GameSpec, ModelError,
    UtilityTable, DEFAULT_EPSILON,
};
pub use strategy::{ReceiverStrategy, SenderStrategy, StrategyError, StrategyProfile};
pub use verifier::{brute_force_search, check_no_separating, verify_pbne, SearchOutcome, VerificationReport};
