//! Command implementations. Each returns the bytes to print on success.

use crate::emit::{self, EmitError, Format};
use crate::scenario::{load_scenario, parse_profile, Scenario, ScenarioError, HONEYPOT};
use serde::Serialize;
use sigev_core::analysis::{
    receiver_utility_invariance, sender_vs_suboptimal_receiver, sweep, truth_induction,
    utility_vs_detector, AnalysisError, InvarianceReport, RobustnessRow, SweepAxis, SweepRow, SweepSpec,
};
use sigev_core::verifier::{CandidateKind, SearchWarning, VerifyError};
use sigev_core::{
    a_priori_utility, brute_force_search, classify_regime, regime_thresholds, solve, verify_pbne, Bit, DetectorClass,
    DetectorShape, Equilibrium, EquilibriumKind, GameConfig, Player, Regime, RegimeKind, RegimeThresholds,
    SolveError, StrategyProfile, VerificationReport,
};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Scenario { path: String, source: ScenarioError },
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl CommandError {
    /// 2 for bad input, 1 for anything that went wrong afterwards.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Io { .. } | CommandError::Scenario { .. } | CommandError::Argument(_) => 2,
            CommandError::Emit(EmitError::Format(_)) => 2,
            CommandError::Analysis(AnalysisError::Model(_) | AnalysisError::TooFewSteps(_))
            | CommandError::Analysis(AnalysisError::BoundOutOfRange { .. } | AnalysisError::InvalidNoise(_)) => 2,
            CommandError::Verify(_) => 2,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CommandError> {
    std::fs::read_to_string(path).map_err(|source| CommandError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(path: &Path) -> Result<(Scenario, GameConfig), CommandError> {
    load_scenario(&read(path)?).map_err(|source| CommandError::Scenario {
        path: path.display().to_string(),
        source,
    })
}

/// One equilibrium, flattened. `mu_m{m}_e{e}` is the belief `μ(θ = 1 | m, e)`.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumRecord {
    pub kind: EquilibriumKind,
    pub regime: RegimeKind,
    pub weak: bool,
    pub q: f64,
    pub r: f64,
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub mu_m0_e0: f64,
    pub mu_m0_e1: f64,
    pub mu_m1_e0: f64,
    pub mu_m1_e1: f64,
    pub tau: f64,
    pub sender_apriori: f64,
    pub receiver_apriori: f64,
}

impl EquilibriumRecord {
    pub fn new(config: &GameConfig, eq: &Equilibrium) -> Self {
        let [w, x, y, z] = eq.profile.receiver.as_array();
        let mu = |m, e| eq.beliefs.post(Bit::One, m, e);
        Self {
            kind: eq.kind,
            regime: eq.regime.kind,
            weak: eq.weak,
            q: eq.profile.sender.q(),
            r: eq.profile.sender.r(),
            w,
            x,
            y,
            z,
            mu_m0_e0: mu(Bit::Zero, Bit::Zero),
            mu_m0_e1: mu(Bit::Zero, Bit::One),
            mu_m1_e0: mu(Bit::One, Bit::Zero),
            mu_m1_e1: mu(Bit::One, Bit::One),
            tau: truth_induction(config, eq),
            sender_apriori: a_priori_utility(&eq.profile, config, Player::Sender),
            receiver_apriori: a_priori_utility(&eq.profile, config, Player::Receiver),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutput {
    pub scenario: String,
    pub prior_one: f64,
    pub detector_class: DetectorClass,
    pub thresholds: RegimeThresholds,
    pub regime: Regime,
    pub equilibria: Vec<EquilibriumRecord>,
}

pub fn solve_cmd(path: &Path, format: Format) -> Result<Vec<u8>, CommandError> {
    let (scenario, config) = load(path)?;
    let eqs = solve(&config)?;
    let out = SolveOutput {
        scenario: scenario.name,
        prior_one: config.prior_one(),
        detector_class: config.detector().class(),
        thresholds: regime_thresholds(&config),
        regime: classify_regime(&config),
        equilibria: eqs.iter().map(|e| EquilibriumRecord::new(&config, e)).collect(),
    };
    Ok(emit::emit(&out, &out.equilibria, format)?)
}

pub fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    match s.to_ascii_lowercase().as_str() {
        "prior" | "p" => Ok(SweepAxis::Prior),
        "j" => Ok(SweepAxis::J),
        "g" => Ok(SweepAxis::G),
        _ => Err(format!("unknown axis {s:?} (expected prior, J or G)")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub scenario: String,
    pub axis: SweepAxis,
    pub fixed_shape: DetectorShape,
    pub rows: Vec<SweepRow>,
}

pub fn sweep_cmd(
    path: &Path,
    axis: SweepAxis,
    from: f64,
    to: f64,
    steps: usize,
    format: Format,
) -> Result<Vec<u8>, CommandError> {
    let (scenario, config) = load(path)?;
    let spec = SweepSpec::new(config, axis, from, to, steps)?;
    let out = SweepOutput {
        scenario: scenario.name,
        axis,
        fixed_shape: spec.fixed_shape,
        rows: sweep(&spec),
    };
    Ok(emit::emit(&out, &out.rows, format)?)
}

/// Returns the report and whether it passed.
pub fn verify_cmd(
    scenario_path: &Path,
    profile_path: &Path,
    epsilon: Option<f64>,
) -> Result<(Vec<u8>, bool), CommandError> {
    let (_, config) = load(scenario_path)?;
    let (profile, beliefs) = parse_profile(&read(profile_path)?, &config).map_err(|source| CommandError::Scenario {
        path: profile_path.display().to_string(),
        source,
    })?;
    let tolerance = epsilon.unwrap_or(config.epsilon());
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CommandError::Argument(format!("epsilon must be positive, got {tolerance}")));
    }
    let report: VerificationReport = verify_pbne(&config, &profile, &beliefs, tolerance);
    Ok((emit::json(&report)?, report.passed))
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateRecord {
    pub kind: CandidateKind,
    pub q: f64,
    pub r: f64,
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CandidateRecord {
    fn new(kind: CandidateKind, p: &StrategyProfile) -> Self {
        let [w, x, y, z] = p.receiver.as_array();
        Self {
            kind,
            q: p.sender.q(),
            r: p.sender.r(),
            w,
            x,
            y,
            z,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutput {
    pub scenario: String,
    pub grid_steps: usize,
    pub tolerance: f64,
    pub warning: Option<SearchWarning>,
    pub candidates: Vec<CandidateRecord>,
}

pub fn search_cmd(path: &Path, grid: usize, epsilon: Option<f64>, format: Format) -> Result<Vec<u8>, CommandError> {
    let (scenario, config) = load(path)?;
    let tolerance = epsilon.unwrap_or(config.epsilon());
    let outcome = brute_force_search(&config, grid, tolerance)?;
    let out = SearchOutput {
        scenario: scenario.name,
        grid_steps: outcome.grid_steps,
        tolerance,
        warning: outcome.warning,
        candidates: outcome
            .candidates
            .iter()
            .map(|c| CandidateRecord::new(c.kind, &c.profile))
            .collect(),
    };
    Ok(emit::emit(&out, &out.candidates, format)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct RobustnessOutput {
    pub scenario: String,
    pub seed: u64,
    pub sender_vs_suboptimal_receiver: RobustnessRow,
    pub receiver_invariance: InvarianceReport,
}

pub fn robustness_cmd(
    path: &Path,
    noise: f64,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<Vec<u8>, CommandError> {
    let (scenario, config) = load(path)?;
    let row = sender_vs_suboptimal_receiver(&config, noise, trials, seed)?;
    let out = RobustnessOutput {
        scenario: scenario.name,
        seed,
        sender_vs_suboptimal_receiver: row,
        receiver_invariance: receiver_utility_invariance(&config, trials, seed)?,
    };
    Ok(emit::emit(&out, &[row], format)?)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

/// Runs the bundled honeypot scenario end to end and renders a text report.
pub fn case_study_cmd() -> Result<Vec<u8>, CommandError> {
    let (scenario, config) = load_scenario(HONEYPOT).map_err(|source| CommandError::Scenario {
        path: "<bundled honeypot>".into(),
        source,
    })?;
    let mut out = String::new();
    let d = config.detector();
    let _ = writeln!(out, "scenario: {}", scenario.name);
    let _ = writeln!(
        out,
        "detector: alpha={} beta={} ({:?}, J={:.2}, G={:.2})",
        d.alpha(),
        d.beta(),
        d.class(),
        d.shape().j,
        d.shape().g
    );
    let _ = writeln!(out, "receiver gains: delta0={} delta1={}", config.delta0(), config.delta1());

    let _ = writeln!(out, "\nregime boundaries in p(1):");
    for (name, t) in regime_thresholds(&config).ordered(d.class()) {
        let _ = writeln!(out, "  t_{:<2} {t:.4}", format!("{name:?}").to_lowercase());
    }

    let _ = writeln!(out, "\nequilibria at p(1) = {}:", config.prior_one());
    for eq in solve(&config)? {
        let rec = EquilibriumRecord::new(&config, &eq);
        let _ = writeln!(
            out,
            "  {:?} in {:?}: q={:.6} r={:.6} w={:.6} x={:.6} y={:.6} z={:.6} tau={:.4}",
            rec.kind, rec.regime, rec.q, rec.r, rec.w, rec.x, rec.y, rec.z, rec.tau
        );
    }

    let _ = writeln!(out, "\nprior sweep (selected equilibrium):");
    let _ = writeln!(
        out,
        "  {:>5} {:<12} {:<19} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>9} {:>9}",
        "p(1)", "regime", "equilibrium", "q", "r", "w", "x", "y", "z", "tau", "U_S", "U_R"
    );
    let spec = SweepSpec::new(config, SweepAxis::Prior, 0.0, 1.0, 21)?;
    for row in sweep(&spec) {
        let name = |k: Option<String>| k.unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "  {:>5.2} {:<12} {:<19} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>9} {:>9}",
            row.axis_value,
            name(row.regime.map(|r| format!("{r:?}"))),
            name(row.kind.map(|k| format!("{k:?}"))),
            fmt_opt(row.q),
            fmt_opt(row.r),
            fmt_opt(row.w),
            fmt_opt(row.x),
            fmt_opt(row.y),
            fmt_opt(row.z),
            fmt_opt(row.tau),
            fmt_opt(row.sender_apriori),
            fmt_opt(row.receiver_apriori),
        );
    }

    let inv = receiver_utility_invariance(&config, 1000, 0)?;
    let _ = writeln!(out, "\nreceiver strategy makes messages interchangeable:");
    let _ = writeln!(
        out,
        "  P(a=1 | theta=0) via m=0/1: {:.4} / {:.4}",
        inv.action_one_reach[0][0], inv.action_one_reach[0][1]
    );
    let _ = writeln!(
        out,
        "  P(a=1 | theta=1) via m=0/1: {:.4} / {:.4}",
        inv.action_one_reach[1][0], inv.action_one_reach[1][1]
    );
    let _ = writeln!(out, "  max change in U_R over 1000 sender perturbations: {:.1e}", inv.max_utility_change);

    let shapes: Vec<DetectorShape> = [0.2, 0.4, 0.6, 0.8]
        .iter()
        .map(|&j| DetectorShape::new(j, 0.2).expect("feasible"))
        .collect();
    let priors: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let surface = utility_vs_detector(&config, &shapes, &priors);
    let _ = writeln!(out, "\nsender gains from a better detector (G = 0.2):");
    if surface.certificates.is_empty() {
        let _ = writeln!(out, "  none found");
    }
    for c in surface.certificates.iter().take(5) {
        let _ = writeln!(
            out,
            "  p(1)={:.2}: J {:.1} -> {:.1} raises U_S {:.4} -> {:.4}",
            c.p, c.j_low, c.j_high, c.sender_low, c.sender_high
        );
    }
    if surface.certificates.len() > 5 {
        let _ = writeln!(out, "  ... {} more", surface.certificates.len() - 5);
    }

    let robust = sender_vs_suboptimal_receiver(&config, 0.1, 500, 0)?;
    let _ = writeln!(
        out,
        "\nreceiver noise 0.1 over 500 trials: U_S {:.4} at equilibrium, {:.4} on average; not worse in {:.1}% of trials",
        robust.sender_optimal,
        robust.sender_suboptimal_mean,
        100.0 * robust.fraction_not_worse
    );
    Ok(out.into_bytes())
}
