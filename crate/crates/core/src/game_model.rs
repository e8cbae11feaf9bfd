//! Data model for the binary signaling game with a deception detector.
//!
//! Types, messages, evidence and actions all live in `{0, 1}`. A sender of
//! type `θ` sends a message `m`; a detector raises an alarm (`e = 1`) with
//! probability `β` when `m ≠ θ` and `α` when `m = θ`; the receiver observes
//! `(m, e)` and picks an action `a`.
//!
//! Everything in here is immutable once validated. [`validate_game`] is the
//! only way to obtain a [`GameConfig`].

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Tolerance used for derived-quantity comparisons (indifference, verification).
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("assumption {assumption} violated: {detail}")]
    AssumptionViolation { assumption: u8, detail: String },
    #[error("invalid detector (alpha={alpha}, beta={beta}): {reason}")]
    InvalidDetector { alpha: f64, beta: f64, reason: String },
    #[error("invalid prior p(1)={0}: must lie in [0, 1]")]
    InvalidPrior(f64),
    #[error("infeasible detector shape (J={j}, G={g}): need 0 < J <= 1 - |G|")]
    InfeasibleShape { j: f64, g: f64 },
    #[error("invalid tolerance {0}: must be finite and positive")]
    InvalidEpsilon(f64),
}

/// One of the two values `0` and `1`; used for types, messages, evidence and actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn index(self) -> usize {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn from_index(i: usize) -> Bit {
        if i == 0 {
            Bit::Zero
        } else {
            Bit::One
        }
    }

    pub fn as_f64(self) -> f64 {
        self.index() as f64
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Alarm rates of the deception detector.
///
/// `alpha` is the false-positive rate (alarm on an honest message) and `beta`
/// the true-positive rate (alarm on a deceptive message).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detector {
    alpha: f64,
    beta: f64,
}

impl Detector {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ModelError> {
        let bad = |reason: &str| ModelError::InvalidDetector {
            alpha,
            beta,
            reason: reason.to_string(),
        };
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(bad("rates must be finite"));
        }
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(bad("rates must lie in [0, 1]"));
        }
        if beta < alpha {
            return Err(bad(
                "beta < alpha; swap the two rates (relabel the evidence) so that beta > alpha",
            ));
        }
        if beta == alpha {
            return Err(bad("beta == alpha gives an uninformative detector (J = 0)"));
        }
        Ok(Self { alpha, beta })
    }

    /// Builds a detector without validation. Only for exercising the Bayes
    /// machinery on degenerate rates.
    #[cfg(test)]
    pub(crate) fn raw(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `λ(e | θ, m)`.
    pub fn likelihood(&self, e: Bit, theta: Bit, m: Bit) -> f64 {
        let alarm = if m == theta { self.alpha } else { self.beta };
        match e {
            Bit::One => alarm,
            Bit::Zero => 1.0 - alarm,
        }
    }

    pub fn class(&self) -> DetectorClass {
        let true_negative = 1.0 - self.alpha;
        if self.beta < true_negative {
            DetectorClass::Conservative
        } else if self.beta > true_negative {
            DetectorClass::Aggressive
        } else {
            DetectorClass::EqualErrorRate
        }
    }

    /// Quality / aggressiveness coordinates `(J, G)`.
    pub fn shape(&self) -> DetectorShape {
        DetectorShape {
            j: self.beta - self.alpha,
            g: self.beta - (1.0 - self.alpha),
        }
    }
}

pub fn likelihood(detector: &Detector, e: Bit, theta: Bit, m: Bit) -> f64 {
    detector.likelihood(e, theta, m)
}

pub fn detector_class(detector: &Detector) -> DetectorClass {
    detector.class()
}

pub fn roc_to_shape(detector: &Detector) -> DetectorShape {
    detector.shape()
}

pub fn shape_to_roc(shape: &DetectorShape) -> Result<Detector, ModelError> {
    shape.to_detector()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetectorClass {
    /// `β < 1 − α`: low false-positive rate, low true-positive rate.
    Conservative,
    /// `β > 1 − α`: high true-positive rate, high false-positive rate.
    Aggressive,
    /// `β = 1 − α`.
    EqualErrorRate,
}

/// Detector in `(J, G)` coordinates: quality `J = β − α` (Youden's J) and
/// aggressiveness `G = β − (1 − α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorShape {
    pub j: f64,
    pub g: f64,
}

impl DetectorShape {
    pub fn new(j: f64, g: f64) -> Result<Self, ModelError> {
        let shape = Self { j, g };
        shape.check()?;
        Ok(shape)
    }

    fn check(&self) -> Result<(), ModelError> {
        let feasible = self.j.is_finite()
            && self.g.is_finite()
            && self.j > 0.0
            && self.j <= 1.0 - self.g.abs();
        if feasible {
            Ok(())
        } else {
            Err(ModelError::InfeasibleShape {
                j: self.j,
                g: self.g,
            })
        }
    }

    pub fn to_detector(&self) -> Result<Detector, ModelError> {
        self.check()?;
        let alpha = (1.0 - self.j + self.g) / 2.0;
        let beta = (1.0 + self.j + self.g) / 2.0;
        Detector::new(alpha.clamp(0.0, 1.0), beta.clamp(0.0, 1.0))
    }
}

/// Payoffs `u(θ, m, a)`, stored with the message axis so that message
/// dependence can be detected rather than averaged away.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    /// Indexed `[θ][m][a]`.
    pub values: [[[f64; 2]; 2]; 2],
}

impl UtilityTable {
    /// Table whose payoffs ignore the message; `by_type_action[θ][a]`.
    pub fn message_free(by_type_action: [[f64; 2]; 2]) -> Self {
        Self {
            values: by_type_action.map(|row| [row; 2]),
        }
    }

    pub fn get(&self, theta: Bit, m: Bit, a: Bit) -> f64 {
        self.values[theta.index()][m.index()][a.index()]
    }

    fn check_message_free(&self) -> Result<(), ModelError> {
        for theta in Bit::ALL {
            for a in Bit::ALL {
                let u0 = self.get(theta, Bit::Zero, a);
                let u1 = self.get(theta, Bit::One, a);
                if u0 != u1 {
                    return Err(ModelError::AssumptionViolation {
                        assumption: 1,
                        detail: format!(
                            "payoff depends on the message at (theta={theta}, a={a}): {u0} vs {u1}"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<(), ModelError> {
        if self.values.iter().flatten().flatten().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::AssumptionViolation {
                assumption: 1,
                detail: "payoffs must be finite".into(),
            })
        }
    }
}

/// Unvalidated game description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub prior_one: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sender_utils: UtilityTable,
    pub receiver_utils: UtilityTable,
    pub epsilon: Option<f64>,
}

/// A validated game. Construct with [`validate_game`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameConfig {
    prior_one: f64,
    detector: Detector,
    sender_utils: UtilityTable,
    receiver_utils: UtilityTable,
    delta0: f64,
    delta1: f64,
    epsilon: f64,
}

pub fn validate_game(spec: GameSpec) -> Result<GameConfig, ModelError> {
    let detector = Detector::new(spec.alpha, spec.beta)?;
    GameConfig::new(
        spec.prior_one,
        detector,
        spec.sender_utils,
        spec.receiver_utils,
    )
    .and_then(|c| match spec.epsilon {
        Some(eps) => c.with_epsilon(eps),
        None => Ok(c),
    })
}

impl GameConfig {
    pub fn new(
        prior_one: f64,
        detector: Detector,
        sender_utils: UtilityTable,
        receiver_utils: UtilityTable,
    ) -> Result<Self, ModelError> {
        check_prior(prior_one)?;
        receiver_utils.check_finite()?;
        sender_utils.check_finite()?;
        receiver_utils.check_message_free()?;
        sender_utils.check_message_free()?;

        let u = |t: &UtilityTable, theta: Bit, a: Bit| t.get(theta, Bit::Zero, a);
        use Bit::{One, Zero};
        if u(&receiver_utils, Zero, Zero) <= u(&receiver_utils, Zero, One) {
            return Err(ModelError::AssumptionViolation {
                assumption: 2,
                detail: "receiver must strictly prefer a=0 when theta=0: need u_R(0,m,0) > u_R(0,m,1)"
                    .into(),
            });
        }
        if u(&receiver_utils, One, Zero) >= u(&receiver_utils, One, One) {
            return Err(ModelError::AssumptionViolation {
                assumption: 3,
                detail: "receiver must strictly prefer a=1 when theta=1: need u_R(1,m,0) < u_R(1,m,1)"
                    .into(),
            });
        }
        if u(&sender_utils, Zero, Zero) >= u(&sender_utils, Zero, One) {
            return Err(ModelError::AssumptionViolation {
                assumption: 4,
                detail: "sender of type 0 must strictly prefer a=1: need u_S(0,m,0) < u_S(0,m,1)"
                    .into(),
            });
        }
        if u(&sender_utils, One, Zero) <= u(&sender_utils, One, One) {
            return Err(ModelError::AssumptionViolation {
                assumption: 5,
                detail: "sender of type 1 must strictly prefer a=0: need u_S(1,m,0) > u_S(1,m,1)"
                    .into(),
            });
        }

        let delta0 = u(&receiver_utils, Zero, Zero) - u(&receiver_utils, Zero, One);
        let delta1 = u(&receiver_utils, One, One) - u(&receiver_utils, One, Zero);
        Ok(Self {
            prior_one,
            detector,
            sender_utils,
            receiver_utils,
            delta0,
            delta1,
            epsilon: DEFAULT_EPSILON,
        })
    }

    pub fn with_prior(&self, prior_one: f64) -> Result<Self, ModelError> {
        check_prior(prior_one)?;
        Ok(Self { prior_one, ..*self })
    }

    pub fn with_detector(&self, detector: Detector) -> Result<Self, ModelError> {
        Ok(Self { detector, ..*self })
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, ModelError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(ModelError::InvalidEpsilon(epsilon));
        }
        Ok(Self { epsilon, ..*self })
    }

    pub fn prior_one(&self) -> f64 {
        self.prior_one
    }

    /// `p(θ)`.
    pub fn prior(&self, theta: Bit) -> f64 {
        match theta {
            Bit::One => self.prior_one,
            Bit::Zero => 1.0 - self.prior_one,
        }
    }

    pub fn detector(&self) -> &Detector {
        &self.detector
    }

    pub fn sender_utils(&self) -> &UtilityTable {
        &self.sender_utils
    }

    pub fn receiver_utils(&self) -> &UtilityTable {
        &self.receiver_utils
    }

    /// Receiver's gain from correctly guessing `θ = 0`.
    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// Receiver's gain from correctly guessing `θ = 1`.
    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    /// Receiver's gain from correctly guessing `θ`.
    pub fn delta(&self, theta: Bit) -> f64 {
        match theta {
            Bit::Zero => self.delta0,
            Bit::One => self.delta1,
        }
    }

    /// `K = Δ¹ / (Δ⁰ + Δ¹)`.
    pub fn k(&self) -> f64 {
        self.delta1 / (self.delta0 + self.delta1)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn spec(&self) -> GameSpec {
        GameSpec {
            prior_one: self.prior_one,
            alpha: self.detector.alpha,
            beta: self.detector.beta,
            sender_utils: self.sender_utils,
            receiver_utils: self.receiver_utils,
            epsilon: Some(self.epsilon),
        }
    }
}

fn check_prior(p: f64) -> Result<(), ModelError> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ModelError::InvalidPrior(p))
    }
}

/// Default honeypot tables. The individual entries are illustrative; they
/// realize the receiver gains `Δ⁰ = 15` and `Δ¹ = 22`.
pub mod honeypot {
    use super::*;

    /// `[θ][a]` with `θ = 0` production system, `θ = 1` honeypot,
    /// `a = 0` attack, `a = 1` withdraw.
    pub const RECEIVER: [[f64; 2]; 2] = [[5.0, -10.0], [-12.0, 10.0]];
    pub const SENDER: [[f64; 2]; 2] = [[-20.0, 10.0], [5.0, -5.0]];
    pub const ALPHA: f64 = 0.3;
    pub const BETA: f64 = 0.9;
    pub const PRIOR_ONE: f64 = 0.28;

    pub fn spec() -> GameSpec {
        GameSpec {
            prior_one: PRIOR_ONE,
            alpha: ALPHA,
            beta: BETA,
            sender_utils: UtilityTable::message_free(SENDER),
            receiver_utils: UtilityTable::message_free(RECEIVER),
            epsilon: None,
        }
    }

    pub fn config() -> GameConfig {
        validate_game(spec()).expect("bundled honeypot game is valid")
    }

    pub fn config_at(prior_one: f64) -> GameConfig {
        config().with_prior(prior_one).expect("prior in [0, 1]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn honeypot_defaults_validate() {
        let c = honeypot::config();
        assert_eq!(c.delta0(), 15.0);
        assert_eq!(c.delta1(), 22.0);
        assert_eq!(c.prior_one(), 0.28);
        assert_eq!(c.epsilon(), DEFAULT_EPSILON);
    }

    #[test]
    fn equal_rates_rejected() {
        let err = Detector::new(0.5, 0.5).unwrap_err();
        assert!(matches!(err, ModelError::InvalidDetector { .. }));
    }

    #[test]
    fn reversed_rates_rejected_with_hint() {
        let err = Detector::new(0.3, 0.2).unwrap_err();
        assert!(err.to_string().contains("swap"));
        assert!(Detector::new(-0.1, 0.5).is_err());
        assert!(Detector::new(0.1, 1.5).is_err());
        assert!(Detector::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn receiver_indifference_violates_assumption_two() {
        let mut spec = honeypot::spec();
        spec.receiver_utils = UtilityTable::message_free([[1.0, 1.0], [-12.0, 10.0]]);
        match validate_game(spec).unwrap_err() {
            ModelError::AssumptionViolation { assumption, .. } => assert_eq!(assumption, 2),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn each_assumption_is_checked() {
        type Table = [[f64; 2]; 2];
        let cases: [(u8, Table, Table); 4] = [
            (3, honeypot::SENDER, [[5.0, -10.0], [10.0, 10.0]]),
            (4, [[10.0, 10.0], [5.0, -5.0]], honeypot::RECEIVER),
            (5, [[-20.0, 10.0], [-5.0, 5.0]], honeypot::RECEIVER),
            (2, honeypot::SENDER, [[-10.0, 5.0], [-12.0, 10.0]]),
        ];
        for (expected, sender, receiver) in cases {
            let mut spec = honeypot::spec();
            spec.sender_utils = UtilityTable::message_free(sender);
            spec.receiver_utils = UtilityTable::message_free(receiver);
            match validate_game(spec) {
                Err(ModelError::AssumptionViolation { assumption, .. }) => {
                    assert_eq!(assumption, expected)
                }
                other => panic!("expected assumption {expected}, got {other:?}"),
            }
        }
    }

    #[test]
    fn message_dependent_payoff_violates_assumption_one() {
        let mut spec = honeypot::spec();
        spec.sender_utils.values[1][0][1] += 0.5;
        match validate_game(spec).unwrap_err() {
            ModelError::AssumptionViolation { assumption, detail } => {
                assert_eq!(assumption, 1);
                assert!(detail.contains("theta=1"));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn invalid_prior_rejected() {
        let mut spec = honeypot::spec();
        spec.prior_one = 1.2;
        assert_eq!(validate_game(spec), Err(ModelError::InvalidPrior(1.2)));
        assert!(honeypot::config().with_prior(-0.01).is_err());
        assert!(honeypot::config().with_prior(0.0).is_ok());
        assert!(honeypot::config().with_prior(1.0).is_ok());
    }

    #[test]
    fn likelihood_values() {
        let d = Detector::new(0.3, 0.9).unwrap();
        assert_eq!(d.likelihood(Bit::One, Bit::One, Bit::Zero), 0.9);
        assert_eq!(d.likelihood(Bit::One, Bit::Zero, Bit::One), 0.9);
        assert_eq!(d.likelihood(Bit::One, Bit::One, Bit::One), 0.3);
        assert_eq!(d.likelihood(Bit::One, Bit::Zero, Bit::Zero), 0.3);
        assert_eq!(d.likelihood(Bit::Zero, Bit::Zero, Bit::Zero), 0.7);
    }

    #[test]
    fn classes() {
        let c = |a, b| Detector::new(a, b).unwrap().class();
        assert_eq!(c(0.3, 0.9), DetectorClass::Aggressive);
        assert_eq!(c(0.3, 0.4), DetectorClass::Conservative);
        assert_eq!(c(0.2, 0.8), DetectorClass::EqualErrorRate);
    }

    #[test]
    fn shape_examples() {
        let s = Detector::new(0.3, 0.9).unwrap().shape();
        assert!((s.j - 0.6).abs() < 1e-15 && (s.g - 0.2).abs() < 1e-15);
        let s = Detector::new(0.0, 1.0).unwrap().shape();
        assert_eq!((s.j, s.g), (1.0, 0.0));
        assert!(matches!(
            DetectorShape::new(1.0, 0.5),
            Err(ModelError::InfeasibleShape { .. })
        ));
        assert!(DetectorShape::new(0.0, 0.0).is_err());
        assert!(DetectorShape::new(-0.2, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn likelihood_normalized(a in 0.0f64..1.0, b in 0.0f64..1.0, t in 0usize..2, m in 0usize..2) {
            prop_assume!(b > a);
            let d = Detector::new(a, b).unwrap();
            let (t, m) = (Bit::from_index(t), Bit::from_index(m));
            prop_assert_eq!(d.likelihood(Bit::Zero, t, m) + d.likelihood(Bit::One, t, m), 1.0);
        }

        #[test]
        fn detector_shape_round_trip(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assume!(b > a);
            let d = Detector::new(a, b).unwrap();
            let back = d.shape().to_detector().unwrap();
            prop_assert!((back.alpha() - a).abs() <= 1e-15);
            prop_assert!((back.beta() - b).abs() <= 1e-15);
        }

        #[test]
        fn shape_detector_round_trip(j in 1e-6f64..1.0, g in -1.0f64..1.0) {
            prop_assume!(j <= 1.0 - g.abs());
            let s = DetectorShape::new(j, g).unwrap();
            let back = s.to_detector().unwrap().shape();
            prop_assert!((back.j - j).abs() <= 1e-15);
            prop_assert!((back.g - g).abs() <= 1e-15);
        }

        #[test]
        fn class_follows_sign_of_g(j in 1e-6f64..1.0, g in -1.0f64..1.0) {
            prop_assume!(j <= 1.0 - g.abs());
            let d = DetectorShape::new(j, g).unwrap().to_detector().unwrap();
            let class = d.class();
            // the round trip can land on the EER line only when g is (numerically) zero
            let g_back = d.shape().g;
            let expected = if g_back > 0.0 {
                DetectorClass::Aggressive
            } else if g_back < 0.0 {
                DetectorClass::Conservative
            } else {
                DetectorClass::EqualErrorRate
            };
            prop_assert_eq!(class, expected);
            if g.abs() > 1e-12 {
                prop_assert_eq!(class == DetectorClass::Aggressive, g > 0.0);
            }
        }

        #[test]
        fn deltas_ignore_message_column(u00 in -50.0f64..50.0, d0 in 0.1f64..50.0, u11 in -50.0f64..50.0, d1 in 0.1f64..50.0) {
            let mut spec = honeypot::spec();
            spec.receiver_utils = UtilityTable::message_free([[u00, u00 - d0], [u11 - d1, u11]]);
            let c = validate_game(spec).unwrap();
            for m in Bit::ALL {
                let r = c.receiver_utils();
                prop_assert_eq!(r.get(Bit::Zero, m, Bit::Zero) - r.get(Bit::Zero, m, Bit::One), c.delta0());
                prop_assert_eq!(r.get(Bit::One, m, Bit::One) - r.get(Bit::One, m, Bit::Zero), c.delta1());
            }
        }
    }
}
