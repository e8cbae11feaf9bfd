//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigev_cli::run;
use sigev_core::analysis::{
    receiver_utility_invariance, selected_equilibrium, truth_induction, utility_vs_detector,
};
use sigev_core::game_model::honeypot;
use sigev_core::{
    a_priori_utility, brute_force_search, check_no_separating, classify_regime, partial_separating_equilibrium,
    regime_thresholds, solve, verify_pbne, Bit, Detector, DetectorClass, DetectorShape, EquilibriumKind, GameConfig,
    Player, RegimeKind, UtilityTable,
};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn honeypot_path() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios/honeypot.toml")
        .display()
        .to_string()
}

/// Random games with the prior and detector kept 1e-3 away from every
/// regime boundary and from equal error rates.
fn random_configs(n: usize, seed: u64) -> Vec<GameConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (u1, u2): (f64, f64) = (rng.gen(), rng.gen());
        let (alpha, beta) = (u1.min(u2), u1.max(u2));
        if beta - alpha < 1e-6 || (beta - (1.0 - alpha)).abs() < 1e-3 {
            continue;
        }
        let (d0, d1) = (rng.gen_range(0.1..50.0), rng.gen_range(0.1..50.0));
        let (r0, r1) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let (g0, g1) = (rng.gen_range(0.1..50.0), rng.gen_range(0.1..50.0));
        let (s0, s1) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let receiver = UtilityTable::message_free([[r0, r0 - d0], [r1 - d1, r1]]);
        let sender = UtilityTable::message_free([[s0 - g0, s0], [s1, s1 - g1]]);
        let p: f64 = rng.gen();
        let Ok(config) = GameConfig::new(p, Detector::new(alpha, beta).unwrap(), sender, receiver) else {
            continue;
        };
        let t = regime_thresholds(&config);
        if [t.t_a, t.t_b, t.t_c, t.t_d].iter().any(|b| (p - b).abs() < 1e-3) {
            continue;
        }
        out.push(config);
    }
    out
}

fn equal_gain_tables() -> (UtilityTable, UtilityTable) {
    (
        UtilityTable::message_free(honeypot::SENDER),
        UtilityTable::message_free([[5.0, -10.0], [-5.0, 10.0]]),
    )
}

/// Detector at lattice coordinates, including the edge `J = 1 − |G|`.
fn lattice_detector(j: f64, g: f64) -> Option<Detector> {
    if j > 1.0 - g.abs() + 1e-9 {
        return None;
    }
    Detector::new(((1.0 - j + g) / 2.0).clamp(0.0, 1.0), ((1.0 + j + g) / 2.0).clamp(0.0, 1.0)).ok()
}

fn lattice_j() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

fn lattice_g() -> Vec<f64> {
    (-8..=8).filter(|&k| k != 0).map(|k| k as f64 / 10.0).collect()
}

fn criterion_1() -> Check {
    let t = regime_thresholds(&honeypot::config());
    let got = t.ordered(DetectorClass::Aggressive).map(|(_, v)| v);
    let want = [0.0888, 0.1852, 0.6716, 0.8268];
    for (g, w) in got.iter().zip(want) {
        ensure((g - w).abs() <= 0.0005, || format!("boundary {g} vs {w}"))?;
    }
    Ok(format!("boundaries {:.4} {:.4} {:.4} {:.4}", got[0], got[1], got[2], got[3]))
}

fn criterion_2() -> Check {
    let c = honeypot::config();
    let eqs = solve(&c).map_err(|e| e.to_string())?;
    let eq = eqs
        .iter()
        .find(|e| e.kind == EquilibriumKind::PartiallySeparating)
        .ok_or("no partially-separating equilibrium")?;
    let (a, b) = (honeypot::ALPHA, honeypot::BETA);
    let (x, z) = (eq.profile.receiver.x(), eq.profile.receiver.z());
    ensure((x - 1.0 / (a + b)).abs() < 1e-6 && (x - 0.833333).abs() < 1e-6, || format!("x={x}"))?;
    ensure((z - (a + b - 1.0) / (a + b)).abs() < 1e-6 && (z - 0.166667).abs() < 1e-6, || format!("z={z}"))?;

    // sender mixing from the receiver-indifference system, solved by elimination
    let p = c.prior_one();
    let rho = p * c.delta1() / ((1.0 - p) * c.delta0());
    let q_ref = a * (b * rho - a) / (b * b - a * a);
    let r_ref = b * (b * rho - a) / (rho * (b * b - a * a));
    let (q, r) = (eq.profile.sender.q(), eq.profile.sender.r());
    ensure((q - q_ref).abs() < 1e-6 && (q - 0.088889).abs() < 1e-6, || format!("q={q}"))?;
    ensure((r - r_ref).abs() < 1e-6 && (r - 0.467533).abs() < 1e-6, || format!("r={r}"))?;
    Ok(format!("q={q:.6} r={r:.6} x={x:.6} z={z:.6}"))
}

fn criteria_3_and_6(configs: &[GameConfig]) -> (Check, Check) {
    let start = Instant::now();
    let mut middle = 0;
    let mut worst_distance: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut oracle = Ok(());
    let mut separating_failures = 0;
    for (i, c) in configs.iter().enumerate() {
        if !check_no_separating(c, 1e-9) {
            separating_failures += 1;
        }
        if oracle.is_err() {
            continue;
        }
        oracle = (|| {
            let eqs = solve(c).map_err(|e| format!("draw {i}: {e}"))?;
            for eq in &eqs {
                let rep = verify_pbne(c, &eq.profile, &eq.beliefs, 1e-9);
                worst_gap = worst_gap.max(rep.max_violation());
                ensure(rep.passed, || format!("draw {i}: {:?} fails verification", eq.kind))?;
            }
            let solver_pools: Vec<Bit> = eqs.iter().filter_map(|e| e.kind.pooled_message()).collect();
            let search = brute_force_search(c, 100, 1e-9).map_err(|e| e.to_string())?;
            for m in search.pooling_messages() {
                ensure(solver_pools.contains(&m), || format!("draw {i}: search pools on {m}, solver does not"))?;
            }
            if classify_regime(c).kind == RegimeKind::Middle {
                middle += 1;
                let eq = partial_separating_equilibrium(c).map_err(|e| e.to_string())?;
                let (d, _) = search
                    .nearest_mixed(eq.profile.sender.q(), eq.profile.sender.r())
                    .ok_or_else(|| format!("draw {i}: no mixed candidate"))?;
                worst_distance = worst_distance.max(d);
                ensure(d <= 0.01, || format!("draw {i}: nearest mixed candidate {d} away"))?;
            }
            Ok(())
        })();
    }
    let elapsed = start.elapsed().as_secs_f64();
    let c3 = oracle.and_then(|_| {
        ensure(elapsed < 60.0, || format!("took {elapsed:.1}s"))?;
        Ok(format!(
            "{} draws ({middle} Middle), max gap {worst_gap:.1e}, max mixed distance {worst_distance:.4}, {elapsed:.1}s",
            configs.len()
        ))
    });
    let c6 = if separating_failures == 0 {
        Ok(format!("no separating equilibrium in {} draws", configs.len()))
    } else {
        Err(format!("{separating_failures} draws admit separation"))
    };
    (c3, c6)
}

fn regime_representatives(c: &GameConfig, per_regime: usize) -> Vec<(RegimeKind, f64)> {
    let b = regime_thresholds(c).ordered(c.detector().class()).map(|(_, v)| v);
    let edges = [0.0, b[0], b[1], b[2], b[3], 1.0];
    let mut out = Vec::new();
    for (k, kind) in RegimeKind::ALL.iter().enumerate() {
        for i in 0..per_regime {
            let f = (i as f64 + 0.5) / per_regime as f64;
            out.push((*kind, edges[k] + (edges[k + 1] - edges[k]) * f));
        }
    }
    out
}

fn criterion_4() -> Check {
    let aggressive = honeypot::config();
    let conservative = aggressive.with_detector(Detector::new(0.3, 0.4).unwrap()).unwrap();
    use EquilibriumKind::*;
    for (config, zero_heavy, one_heavy) in [
        (aggressive, PoolingOnZero, PoolingOnOne),
        (conservative, PoolingOnOne, PoolingOnZero),
    ] {
        for (kind, p) in regime_representatives(&config, 20) {
            let c = config.with_prior(p).unwrap();
            ensure(classify_regime(&c).kind == kind, || format!("p={p} not in {kind}"))?;
            let mut kinds: Vec<EquilibriumKind> =
                solve(&c).map_err(|e| e.to_string())?.iter().map(|e| e.kind).collect();
            kinds.sort();
            let expected = match kind {
                RegimeKind::ZeroDominant | RegimeKind::OneDominant => vec![PoolingOnZero, PoolingOnOne],
                RegimeKind::ZeroHeavy => vec![zero_heavy],
                RegimeKind::Middle => vec![PartiallySeparating],
                RegimeKind::OneHeavy => vec![one_heavy],
            };
            ensure(kinds == expected, || {
                format!("{:?} detector, p={p:.4} ({kind}): {kinds:?}, expected {expected:?}", config.detector().class())
            })?;
        }
    }
    Ok("counts 2/1/1/1/2; Heavy pooling m=0/m=1 (aggressive), m=1/m=0 (conservative)".into())
}

fn criterion_5() -> Check {
    let (sender, receiver) = equal_gain_tables();
    let mut points = 0;
    let mut middle = 0;
    for j in lattice_j() {
        for g in lattice_g() {
            let Some(d) = lattice_detector(j, g) else { continue };
            let base = GameConfig::new(0.5, d, sender, receiver).unwrap();
            let b = regime_thresholds(&base).ordered(d.class()).map(|(_, v)| v);
            for i in 0..50 {
                let p = b[0] + (b[3] - b[0]) * (i as f64 + 1.0) / 51.0;
                let c = base.with_prior(p).unwrap();
                let eq = selected_equilibrium(&c).map_err(|e| format!("J={j} G={g} p={p}: {e}"))?;
                let tau = truth_induction(&c, &eq);
                points += 1;
                if g < 0.0 {
                    ensure(tau <= 0.5 + 1e-9, || format!("J={j} G={g} p={p}: tau={tau}"))?;
                } else {
                    ensure(tau >= 0.5 - 1e-9, || format!("J={j} G={g} p={p}: tau={tau}"))?;
                }
                if eq.kind == EquilibriumKind::PartiallySeparating {
                    middle += 1;
                    let expected = if g > 0.0 { 0.5 * (1.0 + j / (1.0 + g)) } else { 0.5 * (1.0 - j / (1.0 - g)) };
                    ensure((tau - expected).abs() <= 1e-9, || format!("J={j} G={g} p={p}: tau={tau} vs {expected}"))?;
                }
            }
        }
    }
    Ok(format!("{points} lattice points ({middle} Middle)"))
}

fn criterion_7() -> Check {
    let rep = receiver_utility_invariance(&honeypot::config(), 1000, 2024).map_err(|e| e.to_string())?;
    let reach = rep.action_one_reach;
    ensure(rep.identity_residual < 1e-12, || format!("identity residual {}", rep.identity_residual))?;
    ensure((reach[0][0] - 0.25).abs() < 1e-12 && (reach[0][1] - 0.25).abs() < 1e-12, || format!("{reach:?}"))?;
    ensure((reach[1][0] - 0.75).abs() < 1e-12 && (reach[1][1] - 0.75).abs() < 1e-12, || format!("{reach:?}"))?;
    ensure(rep.max_utility_change < 1e-9, || format!("utility moved by {}", rep.max_utility_change))?;
    Ok(format!("reach 0.25/0.75 via both messages; max change {:.1e}", rep.max_utility_change))
}

fn receiver_utility(j: f64, g: f64, p: f64) -> Result<Option<f64>, String> {
    let Some(d) = lattice_detector(j, g) else { return Ok(None) };
    let c = honeypot::config_at(p).with_detector(d).map_err(|e| e.to_string())?;
    let eq = selected_equilibrium(&c).map_err(|e| format!("J={j} G={g} p={p}: {e}"))?;
    Ok(Some(a_priori_utility(&eq.profile, &c, Player::Receiver)))
}

fn criterion_8() -> Check {
    let priors: Vec<f64> = (0..50).map(|i| (i as f64 + 0.5) / 50.0).collect();
    let mut comparisons = 0;
    for &p in &priors {
        for g in lattice_g() {
            let mut prev: Option<(f64, f64)> = None;
            for j in lattice_j() {
                let Some(u) = receiver_utility(j, g, p)? else { continue };
                if let Some((pj, pu)) = prev {
                    comparisons += 1;
                    ensure(u >= pu - 1e-9, || format!("p={p} G={g}: U_R falls from {pu} (J={pj}) to {u} (J={j})"))?;
                }
                prev = Some((j, u));
            }
        }
        for j in lattice_j() {
            let mut prev: Option<(f64, f64)> = None;
            for k in 1..=8 {
                let g = k as f64 / 10.0;
                let (Some(pos), Some(neg)) = (receiver_utility(j, g, p)?, receiver_utility(j, -g, p)?) else {
                    continue;
                };
                comparisons += 1;
                ensure((pos - neg).abs() <= 1e-9, || format!("p={p} J={j} |G|={g}: {pos} vs {neg}"))?;
                if let Some((pg, pu)) = prev {
                    ensure(pos <= pu + 1e-9, || format!("p={p} J={j}: U_R rises from {pu} (|G|={pg}) to {pos} (|G|={g})"))?;
                }
                prev = Some((g, pos));
            }
        }
    }
    Ok(format!("{comparisons} comparisons"))
}

fn criterion_9() -> Check {
    let mut shapes = Vec::new();
    for g in lattice_g() {
        for j in lattice_j() {
            if let Ok(s) = DetectorShape::new(j, g) {
                shapes.push(s);
            }
        }
    }
    let priors: Vec<f64> = (0..50).map(|i| (i as f64 + 0.5) / 50.0).collect();
    let surface = utility_vs_detector(&honeypot::config(), &shapes, &priors);
    let best = surface
        .certificates
        .iter()
        .max_by(|a, b| (a.sender_high - a.sender_low).total_cmp(&(b.sender_high - b.sender_low)))
        .ok_or("no certificate")?;
    Ok(format!(
        "{} certificates, e.g. p={:.2} G={:.1}: J {:.1}->{:.1} raises U_S {:.3}->{:.3}",
        surface.certificates.len(),
        best.p,
        best.g,
        best.j_low,
        best.j_high,
        best.sender_low,
        best.sender_high
    ))
}

fn criterion_10() -> Check {
    let scenario = honeypot_path();
    let profile = std::env::temp_dir().join(format!("sigev-acceptance-profile-{}.toml", std::process::id()));
    std::fs::write(
        &profile,
        "sender.q = 0.0888888888889\nsender.r = 0.467532467532\nreceiver.w = 0\nreceiver.x = 0.833333333333\n\
         receiver.y = 1\nreceiver.z = 0.166666666667\n",
    )
    .map_err(|e| e.to_string())?;
    let profile = profile.display().to_string();
    let s = scenario.as_str();
    let commands: Vec<Vec<&str>> = vec![
        vec!["solve", "--scenario", s],
        vec!["solve", "--scenario", s, "--format", "csv"],
        vec!["sweep", "--scenario", s, "--axis", "prior", "--from", "0", "--to", "1", "--steps", "101", "--format", "csv"],
        vec!["sweep", "--scenario", s, "--axis", "J", "--from", "0.1", "--to", "0.8", "--steps", "15"],
        vec!["sweep", "--scenario", s, "--axis", "G", "--from", "-0.4", "--to", "0.4", "--steps", "9"],
        vec!["verify", "--scenario", s, "--profile", &profile, "--epsilon", "1e-6"],
        vec!["search", "--scenario", s, "--grid", "40"],
        vec!["case-study"],
        vec!["robustness", "--scenario", s, "--noise", "0.1", "--trials", "500", "--seed", "7"],
    ];
    for args in &commands {
        let full = || std::iter::once("sigev").chain(args.iter().copied());
        let first = run(full());
        ensure(first.code == 0, || format!("{args:?} exited {}: {}", first.code, String::from_utf8_lossy(&first.stderr)))?;
        ensure(run(full()) == first, || format!("{args:?} differs between runs"))?;
    }
    // separate processes as well
    let bin = env!("CARGO_BIN_EXE_sigev");
    for args in [&commands[7], &commands[8]] {
        let a = std::process::Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let b = std::process::Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(a.stdout == b.stdout && a.status.success(), || format!("{args:?} differs across processes"))?;
    }
    let _ = std::fs::remove_file(&profile);
    Ok(format!("{} commands byte-identical on repeat", commands.len()))
}

fn main() {
    let mut results: Vec<(u8, &str, Check)> = Vec::new();
    results.push((1, "case-study regime boundaries", criterion_1()));
    results.push((2, "case-study mixed equilibrium", criterion_2()));
    let configs = random_configs(1000, 20_240_601);
    let (c3, c6) = criteria_3_and_6(&configs);
    results.push((3, "oracle equivalence", c3));
    results.push((4, "pooling structure", criterion_4()));
    results.push((5, "truth-induction lattice", criterion_5()));
    results.push((6, "no separating equilibria", c6));
    results.push((7, "receiver message invariance", criterion_7()));
    results.push((8, "receiver utility monotonicity", criterion_8()));
    results.push((9, "sender gains from better detector", criterion_9()));
    results.push((10, "determinism", criterion_10()));
    results.sort_by_key(|r| r.0);

    let mut stdout = std::io::stdout();
    let mut failed = 0;
    for (n, name, result) in &results {
        let line = match result {
            Ok(detail) => format!("PASS  {n:>2} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                format!("FAIL  {n:>2} {name}: {why}")
            }
        };
        let _ = writeln!(stdout, "{line}");
    }
    let _ = writeln!(stdout, "acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
