//! Mixed strategies of the two players.
//!
//! Both players choose between two alternatives at every information set, so
//! a distribution is stored as the probability of the `One` alternative. The
//! accessors `q, r` (sender) and `w, x, y, z` (receiver) follow the usual
//! shorthand for the six free probabilities of a profile.

use crate::game_model::Bit;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("strategy entry {name}={value} is not a probability")]
pub struct StrategyError {
    pub name: &'static str,
    pub value: f64,
}

fn check(name: &'static str, value: f64) -> Result<f64, StrategyError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(StrategyError { name, value })
    }
}

/// `σ^S(m | θ)`, stored as `σ^S(1 | θ)` for each type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SenderStrategy {
    send_one: [f64; 2],
}

impl SenderStrategy {
    /// `q = σ^S(1|0)`, `r = σ^S(1|1)`.
    pub fn new(q: f64, r: f64) -> Result<Self, StrategyError> {
        Ok(Self {
            send_one: [check("q", q)?, check("r", r)?],
        })
    }

    /// Both types send `m` with certainty.
    pub fn pooling(m: Bit) -> Self {
        let v = m.as_f64();
        Self { send_one: [v, v] }
    }

    pub fn q(&self) -> f64 {
        self.send_one[0]
    }

    pub fn r(&self) -> f64 {
        self.send_one[1]
    }

    /// `σ^S(m | θ)`.
    pub fn prob(&self, m: Bit, theta: Bit) -> f64 {
        let one = self.send_one[theta.index()];
        match m {
            Bit::One => one,
            Bit::Zero => 1.0 - one,
        }
    }

    /// Same strategy with type `theta` switched to the pure message `m`.
    pub fn with_pure(&self, theta: Bit, m: Bit) -> Self {
        let mut s = *self;
        s.send_one[theta.index()] = m.as_f64();
        s
    }
}

/// `σ^R(a | m, e)`, stored as `σ^R(1 | m, e)` indexed `[m][e]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverStrategy {
    act_one: [[f64; 2]; 2],
}

impl ReceiverStrategy {
    /// `w = σ^R(1|0,0)`, `x = σ^R(1|0,1)`, `y = σ^R(1|1,0)`, `z = σ^R(1|1,1)`.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self, StrategyError> {
        Ok(Self {
            act_one: [
                [check("w", w)?, check("x", x)?],
                [check("y", y)?, check("z", z)?],
            ],
        })
    }

    /// The receiver plays `a` at every information set.
    pub fn constant(a: Bit) -> Self {
        let v = a.as_f64();
        Self {
            act_one: [[v, v], [v, v]],
        }
    }

    pub fn w(&self) -> f64 {
        self.act_one[0][0]
    }
    pub fn x(&self) -> f64 {
        self.act_one[0][1]
    }
    pub fn y(&self) -> f64 {
        self.act_one[1][0]
    }
    pub fn z(&self) -> f64 {
        self.act_one[1][1]
    }

    /// `σ^R(1 | m, e)`.
    pub fn act_one(&self, m: Bit, e: Bit) -> f64 {
        self.act_one[m.index()][e.index()]
    }

    /// `σ^R(a | m, e)`.
    pub fn prob(&self, a: Bit, m: Bit, e: Bit) -> f64 {
        let one = self.act_one(m, e);
        match a {
            Bit::One => one,
            Bit::Zero => 1.0 - one,
        }
    }

    pub fn with_cell(&self, m: Bit, e: Bit, act_one: f64) -> Result<Self, StrategyError> {
        let mut s = *self;
        s.act_one[m.index()][e.index()] = check("cell", act_one)?;
        Ok(s)
    }

    /// `[w, x, y, z]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.w(), self.x(), self.y(), self.z()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub sender: SenderStrategy,
    pub receiver: ReceiverStrategy,
}

impl StrategyProfile {
    pub fn new(sender: SenderStrategy, receiver: ReceiverStrategy) -> Self {
        Self { sender, receiver }
    }
}
