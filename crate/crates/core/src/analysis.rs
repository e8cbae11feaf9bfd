//! Comparative statics and robustness experiments on solved games.

use crate::equilibrium::{classify_regime, solve, Equilibrium, EquilibriumKind, RegimeKind, SolveError};
use crate::expected_utility::{a_priori_utility, action_reach, Player};
use crate::game_model::{Bit, DetectorClass, DetectorShape, GameConfig, ModelError};
use crate::strategy::{ReceiverStrategy, SenderStrategy, StrategyProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("sweep needs at least two steps, got {0}")]
    TooFewSteps(usize),
    #[error("sweep bound {value} is outside the range of the {axis:?} axis")]
    BoundOutOfRange { axis: SweepAxis, value: f64 },
    #[error("noise must be a probability, got {0}")]
    InvalidNoise(f64),
    #[error("no equilibrium to analyse")]
    NoEquilibrium,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// `τ = Σ_θ p(θ) σ^S(m = θ | θ)`: probability that the message is truthful.
pub fn truth_induction(config: &GameConfig, eq: &Equilibrium) -> f64 {
    Bit::ALL
        .iter()
        .map(|&t| config.prior(t) * eq.profile.sender.prob(t, t))
        .sum()
}

/// Picks the equilibrium to report when several exist, plus the alternate.
///
/// Dominant regimes keep the pooling branch that continues the adjacent
/// Heavy regime: aggressive detectors pool on `m = 0` at low priors and on
/// `m = 1` at high ones, conservative detectors the other way round. For
/// equal-error-rate detectors in the Middle regime the message matching the
/// likelier type is preferred.
pub fn select_equilibrium(
    config: &GameConfig,
    eqs: &[Equilibrium],
) -> (Option<Equilibrium>, Option<Equilibrium>) {
    let regime = classify_regime(config).kind;
    let conservative = config.detector().class() == DetectorClass::Conservative;
    let low = matches!(regime, RegimeKind::ZeroDominant | RegimeKind::ZeroHeavy)
        || (regime == RegimeKind::Middle && config.prior_one() <= 0.5);
    let pooled = Bit::from(low == conservative);
    let preferred = [EquilibriumKind::PartiallySeparating, EquilibriumKind::pooling_on(pooled)];
    let primary = preferred
        .iter()
        .find_map(|k| eqs.iter().find(|e| e.kind == *k))
        .or_else(|| eqs.first())
        .cloned();
    let alternate = eqs
        .iter()
        .find(|e| Some(e.kind) != primary.as_ref().map(|p| p.kind))
        .cloned();
    (primary, alternate)
}

/// Solves and returns the selected equilibrium.
pub fn selected_equilibrium(config: &GameConfig) -> Result<Equilibrium, AnalysisError> {
    let eqs = solve(config)?;
    select_equilibrium(config, &eqs).0.ok_or(AnalysisError::NoEquilibrium)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    Prior,
    J,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: GameConfig,
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Detector shape whose other coordinate is held fixed.
    pub fixed_shape: DetectorShape,
}

impl SweepSpec {
    pub fn new(base: GameConfig, axis: SweepAxis, from: f64, to: f64, steps: usize) -> Result<Self, AnalysisError> {
        if steps < 2 {
            return Err(AnalysisError::TooFewSteps(steps));
        }
        let in_range = |v: f64| match axis {
            SweepAxis::Prior => (0.0..=1.0).contains(&v),
            SweepAxis::J => v > 0.0 && v <= 1.0,
            SweepAxis::G => v > -1.0 && v < 1.0,
        };
        for value in [from, to] {
            if !(value.is_finite() && in_range(value)) {
                return Err(AnalysisError::BoundOutOfRange { axis, value });
            }
        }
        Ok(Self {
            base,
            axis,
            from,
            to,
            steps,
            fixed_shape: base.detector().shape(),
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / n
                }
            })
            .collect()
    }

    fn config_at(&self, v: f64) -> Result<GameConfig, ModelError> {
        match self.axis {
            SweepAxis::Prior => self.base.with_prior(v),
            SweepAxis::J => self
                .base
                .with_detector(DetectorShape::new(v, self.fixed_shape.g)?.to_detector()?),
            SweepAxis::G => self
                .base
                .with_detector(DetectorShape::new(self.fixed_shape.j, v)?.to_detector()?),
        }
    }
}

/// One sweep point. Strategy and utility columns describe the selected
/// equilibrium and are empty when the point could not be solved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub regime: Option<RegimeKind>,
    pub kind: Option<EquilibriumKind>,
    pub alternate_kind: Option<EquilibriumKind>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub w: Option<f64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub tau: Option<f64>,
    pub sender_apriori: Option<f64>,
    pub receiver_apriori: Option<f64>,
    pub weak: Option<bool>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(axis_value: f64, regime: Option<RegimeKind>, err: impl ToString) -> Self {
        Self {
            axis_value,
            regime,
            kind: None,
            alternate_kind: None,
            q: None,
            r: None,
            w: None,
            x: None,
            y: None,
            z: None,
            tau: None,
            sender_apriori: None,
            receiver_apriori: None,
            weak: None,
            error: Some(err.to_string()),
        }
    }
}

fn sweep_point(spec: &SweepSpec, v: f64) -> SweepRow {
    let config = match spec.config_at(v) {
        Ok(c) => c,
        Err(e) => return SweepRow::failed(v, None, e),
    };
    let regime = classify_regime(&config).kind;
    let eqs = match solve(&config) {
        Ok(eqs) => eqs,
        Err(e) => return SweepRow::failed(v, Some(regime), e),
    };
    let (primary, alternate) = select_equilibrium(&config, &eqs);
    let Some(eq) = primary else {
        return SweepRow::failed(v, Some(regime), AnalysisError::NoEquilibrium);
    };
    let [w, x, y, z] = eq.profile.receiver.as_array();
    SweepRow {
        axis_value: v,
        regime: Some(regime),
        kind: Some(eq.kind),
        alternate_kind: alternate.map(|a| a.kind),
        q: Some(eq.profile.sender.q()),
        r: Some(eq.profile.sender.r()),
        w: Some(w),
        x: Some(x),
        y: Some(y),
        z: Some(z),
        tau: Some(truth_induction(&config, &eq)),
        sender_apriori: Some(a_priori_utility(&eq.profile, &config, Player::Sender)),
        receiver_apriori: Some(a_priori_utility(&eq.profile, &config, Player::Receiver)),
        weak: Some(eq.weak),
        error: None,
    }
}

/// Solves every point of the sweep; failures are recorded in their row.
pub fn sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    let mut rows: Vec<SweepRow> = spec.values().into_iter().map(|v| sweep_point(spec, v)).collect();
    rows.sort_by(|a, b| a.axis_value.total_cmp(&b.axis_value));
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub kind: EquilibriumKind,
    /// Probability of action 1 for type `θ` sending `m`, indexed `[θ][m]`.
    pub action_one_reach: [[f64; 2]; 2],
    /// Largest `|Σ_e λ(e|θ,m)σ(a|m,e) − Σ_e λ(e|θ,1−m)σ(a|1−m,e)|`.
    pub identity_residual: f64,
    pub receiver_utility: f64,
    /// Largest change in the receiver's a priori utility over all perturbations.
    pub max_utility_change: f64,
    pub perturbations: usize,
}

/// Fixes the receiver's equilibrium strategy and replaces the sender's with
/// random ones; the receiver's a priori utility should not move, because
/// each type meets each action with the same probability whichever message
/// it sends.
pub fn receiver_utility_invariance(
    config: &GameConfig,
    perturbation_count: usize,
    seed: u64,
) -> Result<InvarianceReport, AnalysisError> {
    let eq = selected_equilibrium(config)?;
    let receiver = eq.profile.receiver;

    let mut action_one_reach = [[0.0; 2]; 2];
    let mut identity_residual: f64 = 0.0;
    for theta in Bit::ALL {
        for m in Bit::ALL {
            action_one_reach[theta.index()][m.index()] = action_reach(&receiver, config, theta, m, Bit::One);
            for a in Bit::ALL {
                let here = action_reach(&receiver, config, theta, m, a);
                let there = action_reach(&receiver, config, theta, m.flip(), a);
                identity_residual = identity_residual.max((here - there).abs());
            }
        }
    }

    let base = a_priori_utility(&eq.profile, config, Player::Receiver);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_utility_change: f64 = 0.0;
    for _ in 0..perturbation_count {
        let sender = SenderStrategy::new(rng.gen(), rng.gen()).expect("unit interval");
        let u = a_priori_utility(&StrategyProfile::new(sender, receiver), config, Player::Receiver);
        max_utility_change = max_utility_change.max((u - base).abs());
    }

    Ok(InvarianceReport {
        kind: eq.kind,
        action_one_reach,
        identity_residual,
        receiver_utility: base,
        max_utility_change,
        perturbations: perturbation_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub j: f64,
    pub g: f64,
    pub p: f64,
    pub kind: Option<EquilibriumKind>,
    pub sender_apriori: Option<f64>,
    pub receiver_apriori: Option<f64>,
}

/// A better detector that leaves the sender better off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SenderGainCertificate {
    pub p: f64,
    pub g: f64,
    pub j_low: f64,
    pub j_high: f64,
    pub sender_low: f64,
    pub sender_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilitySurface {
    pub points: Vec<SurfacePoint>,
    pub certificates: Vec<SenderGainCertificate>,
}

/// Both players' a priori utilities at the selected equilibrium for every
/// shape and prior. Points that cannot be built or solved have empty
/// utilities.
pub fn utility_vs_detector(
    template: &GameConfig,
    shapes: &[DetectorShape],
    prior_grid: &[f64],
) -> UtilitySurface {
    let mut points = Vec::with_capacity(shapes.len() * prior_grid.len());
    for shape in shapes {
        for &p in prior_grid {
            let solved = shape
                .to_detector()
                .and_then(|d| template.with_detector(d))
                .and_then(|c| c.with_prior(p))
                .map_err(AnalysisError::from)
                .and_then(|c| selected_equilibrium(&c).map(|eq| (c, eq)));
            let (kind, s, r) = match solved {
                Ok((c, eq)) => (
                    Some(eq.kind),
                    Some(a_priori_utility(&eq.profile, &c, Player::Sender)),
                    Some(a_priori_utility(&eq.profile, &c, Player::Receiver)),
                ),
                Err(_) => (None, None, None),
            };
            points.push(SurfacePoint {
                j: shape.j,
                g: shape.g,
                p,
                kind,
                sender_apriori: s,
                receiver_apriori: r,
            });
        }
    }

    let eps = template.epsilon();
    let mut certificates = Vec::new();
    for lo in &points {
        for hi in &points {
            if lo.g != hi.g || lo.p != hi.p || lo.j >= hi.j {
                continue;
            }
            if let (Some(s_lo), Some(s_hi)) = (lo.sender_apriori, hi.sender_apriori) {
                if s_hi > s_lo + eps {
                    certificates.push(SenderGainCertificate {
                        p: lo.p,
                        g: lo.g,
                        j_low: lo.j,
                        j_high: hi.j,
                        sender_low: s_lo,
                        sender_high: s_hi,
                    });
                }
            }
        }
    }
    UtilitySurface { points, certificates }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessRow {
    pub p: f64,
    pub sender_optimal: f64,
    pub sender_suboptimal_mean: f64,
    /// Fraction of trials in which the perturbation did not hurt the sender.
    pub fraction_not_worse: f64,
    pub noise: f64,
    pub trials: usize,
}

/// Perturbs each cell of the receiver's equilibrium strategy by uniform
/// noise in `[−noise, noise]` (clipped to `[0, 1]`) and records the sender's
/// exact a priori utility against it.
pub fn sender_vs_suboptimal_receiver(
    config: &GameConfig,
    noise: f64,
    trials: usize,
    seed: u64,
) -> Result<RobustnessRow, AnalysisError> {
    if !(noise.is_finite() && (0.0..=1.0).contains(&noise)) {
        return Err(AnalysisError::InvalidNoise(noise));
    }
    let eq = selected_equilibrium(config)?;
    let optimal = a_priori_utility(&eq.profile, config, Player::Sender);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    let mut not_worse = 0usize;
    for _ in 0..trials {
        let cells = eq.profile.receiver.as_array().map(|v| {
            let shift = if noise > 0.0 { rng.gen_range(-noise..=noise) } else { 0.0 };
            (v + shift).clamp(0.0, 1.0)
        });
        let receiver = ReceiverStrategy::new(cells[0], cells[1], cells[2], cells[3]).expect("clamped");
        let u = a_priori_utility(&StrategyProfile::new(eq.profile.sender, receiver), config, Player::Sender);
        // accumulate shifts so that zero noise reproduces the optimum exactly
        total += u - optimal;
        if u >= optimal - config.epsilon() {
            not_worse += 1;
        }
    }
    let n = trials.max(1) as f64;
    Ok(RobustnessRow {
        p: config.prior_one(),
        sender_optimal: optimal,
        sender_suboptimal_mean: optimal + total / n,
        fraction_not_worse: if trials == 0 { 1.0 } else { not_worse as f64 / n },
        noise,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::regime_thresholds;
    use crate::game_model::{honeypot, validate_game, UtilityTable};
    use proptest::prelude::*;

    /// Honeypot game with receiver gains set equal.
    fn equal_gains(shape: DetectorShape, p: f64) -> GameConfig {
        let mut spec = honeypot::spec();
        spec.receiver_utils = UtilityTable::message_free([[0.0, -10.0], [0.0, 10.0]]);
        validate_game(spec)
            .unwrap()
            .with_detector(shape.to_detector().unwrap())
            .unwrap()
            .with_prior(p)
            .unwrap()
    }

    fn shape(j: f64, g: f64) -> DetectorShape {
        DetectorShape::new(j, g).unwrap()
    }

    fn middle_prior(c: &GameConfig) -> f64 {
        let b = regime_thresholds(c).ordered(c.detector().class());
        (b[1].1 + b[2].1) / 2.0
    }

    #[test]
    fn truth_induction_middle_closed_forms() {
        let c = equal_gains(shape(0.6, 0.2), 0.5);
        assert_eq!(classify_regime(&c).kind, RegimeKind::Middle);
        let eq = selected_equilibrium(&c).unwrap();
        assert!((truth_induction(&c, &eq) - 0.75).abs() < 1e-12);

        let c = equal_gains(shape(0.3, -0.5), 0.5);
        let c = c.with_prior(middle_prior(&c)).unwrap();
        let eq = selected_equilibrium(&c).unwrap();
        assert_eq!(eq.kind, EquilibriumKind::PartiallySeparating);
        assert!((truth_induction(&c, &eq) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn truth_induction_zero_heavy_pooling() {
        let c = equal_gains(shape(0.6, 0.2), 0.15);
        assert_eq!(classify_regime(&c).kind, RegimeKind::ZeroHeavy);
        let eq = selected_equilibrium(&c).unwrap();
        assert_eq!(eq.kind, EquilibriumKind::PoolingOnZero);
        assert!((truth_induction(&c, &eq) - 0.85).abs() < 1e-12);
    }

    #[test]
    fn selection_follows_adjacent_heavy_regime() {
        let kind = |c: &GameConfig| selected_equilibrium(c).unwrap().kind;
        assert_eq!(kind(&honeypot::config_at(0.02)), EquilibriumKind::PoolingOnZero);
        assert_eq!(kind(&honeypot::config_at(0.95)), EquilibriumKind::PoolingOnOne);
        let cons = honeypot::config().with_detector(crate::Detector::new(0.3, 0.4).unwrap()).unwrap();
        assert_eq!(kind(&cons.with_prior(0.01).unwrap()), EquilibriumKind::PoolingOnOne);
        assert_eq!(kind(&cons.with_prior(0.99).unwrap()), EquilibriumKind::PoolingOnZero);
        let eqs = solve(&honeypot::config_at(0.02)).unwrap();
        let (_, alt) = select_equilibrium(&honeypot::config_at(0.02), &eqs);
        assert_eq!(alt.unwrap().kind, EquilibriumKind::PoolingOnOne);
    }

    #[test]
    fn prior_sweep_transitions_at_thresholds() {
        let spec = SweepSpec::new(honeypot::config(), SweepAxis::Prior, 0.0, 1.0, 101).unwrap();
        let rows = sweep(&spec);
        assert_eq!(rows.len(), 101);
        let t = regime_thresholds(&honeypot::config()).ordered(DetectorClass::Aggressive);
        for row in &rows {
            let p = row.axis_value;
            let expected = t.iter().filter(|(_, b)| p > *b).count();
            assert_eq!(row.regime, Some(RegimeKind::ALL[expected]), "p={p}");
            assert!(row.error.is_none());
        }
    }

    #[test]
    fn g_sweep_flips_to_complements() {
        let base = equal_gains(shape(0.4, 0.2), 0.5);
        let spec = SweepSpec::new(base, SweepAxis::G, -0.2, 0.2, 5).unwrap();
        let rows = sweep(&spec);
        let (neg, pos) = (&rows[0], &rows[4]);
        assert_eq!(neg.kind, Some(EquilibriumKind::PartiallySeparating));
        assert_eq!(pos.kind, Some(EquilibriumKind::PartiallySeparating));
        assert!((neg.q.unwrap() - (1.0 - pos.q.unwrap())).abs() < 1e-12);
        assert!((neg.r.unwrap() - (1.0 - pos.r.unwrap())).abs() < 1e-12);
        // the equal-error-rate point in the middle still yields a row
        assert!(rows[2].error.is_none());
    }

    #[test]
    fn middle_width_grows_with_j() {
        let width = |j: f64| {
            let c = honeypot::config().with_detector(shape(j, 0.2).to_detector().unwrap()).unwrap();
            let b = regime_thresholds(&c).ordered(c.detector().class());
            b[2].1 - b[1].1
        };
        let widths: Vec<f64> = [0.2, 0.4, 0.6, 0.8].iter().map(|&j| width(j)).collect();
        assert!(widths.windows(2).all(|w| w[1] > w[0]), "{widths:?}");
        let base = honeypot::config().with_detector(shape(0.2, 0.2).to_detector().unwrap()).unwrap();
        let rows = sweep(&SweepSpec::new(base, SweepAxis::J, 0.1, 0.8, 8).unwrap());
        assert!(rows.iter().all(|r| r.error.is_none()));
    }

    #[test]
    fn sweep_rejects_bad_specs_and_records_bad_points() {
        let c = honeypot::config();
        assert_eq!(SweepSpec::new(c, SweepAxis::Prior, 0.0, 1.0, 1), Err(AnalysisError::TooFewSteps(1)));
        assert!(SweepSpec::new(c, SweepAxis::J, 0.0, 1.0, 5).is_err());
        // J beyond 1 − |G| is infeasible at the fixed G = 0.2
        let rows = sweep(&SweepSpec::new(c, SweepAxis::J, 0.5, 1.0, 3).unwrap());
        assert!(rows[0].error.is_none());
        assert!(rows[2].error.as_deref().unwrap().contains("infeasible"));
    }

    #[test]
    fn invariance_case_study() {
        let rep = receiver_utility_invariance(&honeypot::config(), 1000, 7).unwrap();
        assert_eq!(rep.kind, EquilibriumKind::PartiallySeparating);
        assert!(rep.identity_residual < 1e-12);
        assert!((rep.action_one_reach[0][0] - 0.25).abs() < 1e-12);
        assert!((rep.action_one_reach[0][1] - 0.25).abs() < 1e-12);
        assert!((rep.action_one_reach[1][0] - 0.75).abs() < 1e-12);
        assert!((rep.action_one_reach[1][1] - 0.75).abs() < 1e-12);
        assert!(rep.max_utility_change < 1e-9);
    }

    #[test]
    fn invariance_in_pooling_regime_is_exact() {
        let rep = receiver_utility_invariance(&honeypot::config_at(0.15), 200, 1).unwrap();
        // constant receiver action: zero up to summation order
        assert!(rep.max_utility_change < 1e-12);
        assert_eq!(rep.identity_residual, 0.0);
    }

    #[test]
    fn sender_gain_certificate_with_bundled_tables() {
        let shapes = [shape(0.5, 0.2), shape(0.8, 0.2)];
        let surface = utility_vs_detector(&honeypot::config(), &shapes, &[0.15]);
        let s: Vec<f64> = surface.points.iter().map(|p| p.sender_apriori.unwrap()).collect();
        assert!((s[0] - -16.25).abs() < 1e-9, "{s:?}");
        assert!((s[1] - -13.25).abs() < 1e-6, "{s:?}");
        assert_eq!(surface.certificates.len(), 1);
        assert_eq!((surface.certificates[0].j_low, surface.certificates[0].j_high), (0.5, 0.8));
    }

    #[test]
    fn zero_noise_is_neutral() {
        let row = sender_vs_suboptimal_receiver(&honeypot::config(), 0.0, 50, 3).unwrap();
        assert_eq!(row.sender_optimal, row.sender_suboptimal_mean);
        assert_eq!(row.fraction_not_worse, 1.0);
        assert!(sender_vs_suboptimal_receiver(&honeypot::config(), 1.5, 1, 0).is_err());
    }

    #[test]
    fn robustness_is_seeded() {
        let a = sender_vs_suboptimal_receiver(&honeypot::config(), 0.1, 500, 42).unwrap();
        let b = sender_vs_suboptimal_receiver(&honeypot::config(), 0.1, 500, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.sender_suboptimal_mean >= a.sender_optimal);
    }

    proptest! {
        #[test]
        fn middle_truth_induction_is_prior_free(j in 0.05f64..0.95, g in -0.9f64..0.9, u in 0.01f64..0.99) {
            prop_assume!(j <= 1.0 - g.abs() && g.abs() > 1e-3);
            let c = equal_gains(shape(j, g), 0.5);
            let b = regime_thresholds(&c).ordered(c.detector().class());
            let c = c.with_prior(b[1].1 + (b[2].1 - b[1].1) * u).unwrap();
            prop_assume!(classify_regime(&c).kind == RegimeKind::Middle);
            let eq = selected_equilibrium(&c).unwrap();
            let expected = if g > 0.0 { 0.5 * (1.0 + j / (1.0 + g)) } else { 0.5 * (1.0 - j / (1.0 - g)) };
            prop_assert!((truth_induction(&c, &eq) - expected).abs() < 1e-9);
        }

        #[test]
        fn truth_induction_sign_follows_aggressiveness(j in 0.05f64..0.95, g in -0.9f64..0.9, u in 0.0f64..1.0) {
            prop_assume!(j <= 1.0 - g.abs() && g.abs() > 1e-3);
            let c = equal_gains(shape(j, g), 0.5);
            let b = regime_thresholds(&c).ordered(c.detector().class());
            let c = c.with_prior(b[0].1 + (b[3].1 - b[0].1) * (0.001 + 0.998 * u)).unwrap();
            let tau = truth_induction(&c, &selected_equilibrium(&c).unwrap());
            if g < 0.0 {
                prop_assert!(tau <= 0.5 + 1e-9);
            } else {
                prop_assert!(tau >= 0.5 - 1e-9);
            }
        }

        #[test]
        fn receiver_utility_symmetric_in_g(j in 0.05f64..0.9, g in 0.01f64..0.9, p in 0.01f64..0.99) {
            prop_assume!(j <= 1.0 - g);
            let template = honeypot::config();
            let surface = utility_vs_detector(&template, &[shape(j, g), shape(j, -g)], &[p]);
            let u: Vec<f64> = surface.points.iter().filter_map(|s| s.receiver_apriori).collect();
            prop_assume!(u.len() == 2);
            prop_assert!((u[0] - u[1]).abs() < 1e-9);
        }
    }
}
