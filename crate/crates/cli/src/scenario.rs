//! Scenario and profile files.
//!
//! Both are flat TOML documents with dotted keys:
//!
//! ```toml
//! name = "honeypot"
//! prior_one = 0.28
//! detector.alpha = 0.3
//! detector.beta = 0.9
//! sender_utils.theta0_action0 = -20.0
//! # ... the other seven payoff entries
//! ```

use serde::{Deserialize, Serialize};
use sigev_core::beliefs::BeliefSystem;
use sigev_core::{
    validate_game, Bit, GameConfig, GameSpec, ModelError, ReceiverStrategy, SenderStrategy,
    StrategyError, StrategyProfile, UtilityTable,
};
use std::fmt::Write as _;
use thiserror::Error;

pub const HONEYPOT: &str = include_str!("../scenarios/honeypot.toml");

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn from_toml(text: &str, err: toml::de::Error) -> Self {
        let offset = err.span().map_or(0, |s| s.start).min(text.len());
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Self {
            line,
            column,
            message: err.message().to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid game: {0}")]
    Validation(#[from] ModelError),
    #[error("invalid profile: {0}")]
    Strategy(#[from] StrategyError),
    #[error("invalid profile beliefs: {0}")]
    Belief(#[from] sigev_core::BeliefError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorEntry {
    pub alpha: f64,
    pub beta: f64,
}

/// Payoffs by type and action; the message does not enter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffEntries {
    pub theta0_action0: f64,
    pub theta0_action1: f64,
    pub theta1_action0: f64,
    pub theta1_action1: f64,
}

impl PayoffEntries {
    fn table(&self) -> UtilityTable {
        UtilityTable::message_free([
            [self.theta0_action0, self.theta0_action1],
            [self.theta1_action0, self.theta1_action1],
        ])
    }

    fn entries(&self) -> [(&'static str, f64); 4] {
        [
            ("theta0_action0", self.theta0_action0),
            ("theta0_action1", self.theta0_action1),
            ("theta1_action0", self.theta1_action0),
            ("theta1_action1", self.theta1_action1),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub prior_one: f64,
    pub detector: DetectorEntry,
    pub sender_utils: PayoffEntries,
    pub receiver_utils: PayoffEntries,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    toml::from_str(text).map_err(|e| ParseError::from_toml(text, e))
}

impl Scenario {
    pub fn to_spec(&self) -> GameSpec {
        GameSpec {
            prior_one: self.prior_one,
            alpha: self.detector.alpha,
            beta: self.detector.beta,
            sender_utils: self.sender_utils.table(),
            receiver_utils: self.receiver_utils.table(),
            epsilon: self.epsilon,
        }
    }

    pub fn to_config(&self) -> Result<GameConfig, ModelError> {
        validate_game(self.to_spec())
    }

    /// Flat dotted-key text that parses back to the same scenario.
    pub fn to_text(&self) -> String {
        // `{:?}` prints the shortest representation that round-trips
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", toml::Value::String(self.name.clone()));
        let _ = writeln!(out, "prior_one = {:?}", self.prior_one);
        if let Some(eps) = self.epsilon {
            let _ = writeln!(out, "epsilon = {eps:?}");
        }
        let _ = writeln!(out, "detector.alpha = {:?}", self.detector.alpha);
        let _ = writeln!(out, "detector.beta = {:?}", self.detector.beta);
        for (table, payoffs) in [("sender_utils", &self.sender_utils), ("receiver_utils", &self.receiver_utils)] {
            for (key, value) in payoffs.entries() {
                let _ = writeln!(out, "{table}.{key} = {value:?}");
            }
        }
        out
    }
}

pub fn load_scenario(text: &str) -> Result<(Scenario, GameConfig), ScenarioError> {
    let scenario = parse_scenario(text)?;
    let config = scenario.to_config()?;
    Ok((scenario, config))
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct SenderEntry {
    q: f64,
    r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReceiverEntry {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

/// `μ(θ = 1 | m, e)` per information set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeliefEntries {
    m0_e0: Option<f64>,
    m0_e1: Option<f64>,
    m1_e0: Option<f64>,
    m1_e1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    sender: SenderEntry,
    receiver: ReceiverEntry,
    #[serde(default)]
    beliefs: BeliefEntries,
}

/// A strategy profile to check, with the receiver's beliefs.
///
/// ```toml
/// sender.q = 0.0889
/// sender.r = 0.4675
/// receiver.w = 0.0
/// receiver.x = 0.8333
/// receiver.y = 1.0
/// receiver.z = 0.1667
/// beliefs.m0_e1 = 0.4   # optional; required only off the path
/// ```
///
/// Information sets without an explicit belief get the Bayes posterior;
/// explicit beliefs on the path are checked against it like any other.
pub fn parse_profile(text: &str, config: &GameConfig) -> Result<(StrategyProfile, BeliefSystem), ScenarioError> {
    let file: ProfileFile = toml::from_str(text).map_err(|e| ParseError::from_toml(text, e))?;
    let sender = SenderStrategy::new(file.sender.q, file.sender.r)?;
    let r = file.receiver;
    let receiver = ReceiverStrategy::new(r.w, r.x, r.y, r.z)?;
    let b = file.beliefs;
    let given = [[b.m0_e0, b.m0_e1], [b.m1_e0, b.m1_e1]];
    let bayes = BeliefSystem::from_profile(config, &sender, given)?;
    let mut post_one = [[0.0; 2]; 2];
    let mut origin = [[sigev_core::BeliefOrigin::OnPath; 2]; 2];
    for m in Bit::ALL {
        for e in Bit::ALL {
            let (mi, ei) = (m.index(), e.index());
            post_one[mi][ei] = given[mi][ei].unwrap_or_else(|| bayes.post(Bit::One, m, e));
            origin[mi][ei] = bayes.origin(m, e);
        }
    }
    let beliefs = BeliefSystem::new(post_one, origin)?;
    Ok((StrategyProfile::new(sender, receiver), beliefs))
}
