//! One function per subcommand; each fills an artifact set and a summary.

use std::fmt::Write as _;

use ouselect::io::{read_observations_file, write_jumps, write_path};
use ouselect::noise::observe;
use ouselect::risklab::{
    condition_checks, covariance_table, efficiency_experiment, jump_moment, mean_table, nonincreasing_within_se,
    oracle_audit, pinsker_constant, second_order_table, sigma_consistency, simulate_moments, ConditionReport,
    EfficiencyEstimator, EfficiencyRow, MomentCheck, SecondOrderCheck, SigmaChoice, SigmaRow,
};
use ouselect::seed::derive;
use ouselect::selector::{default_grid, estimate};
use ouselect::signals::catalogue;
use ouselect::{
    simulate_noise, EstimationResult, MonteCarlo, NoiseParams, Observations, RiskReport, SelectionConfig, SigmaMode,
    SignalSpec, TransformConfig,
};
use serde::Serialize;

use crate::artifacts::Artifacts;
use crate::config::{Command, ExperimentConfig};
use crate::CliError;

const TAG_SIM: u64 = 0x5349_4d55;
const TAG_MEMBER: u64 = 0x4d45_4d42;

/// Points of the reconstruction table over one period.
pub const RECONSTRUCTION_POINTS: usize = 1024;

pub struct Outcome {
    pub passed: bool,
    pub artifacts: Artifacts,
    pub summary: String,
}

pub fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let signal = catalogue(&cfg.signal).map_err(CliError::from)?;
    match cfg.command()? {
        Command::Simulate => simulate(cfg, &signal),
        Command::Estimate => run_estimate(cfg, &signal),
        Command::AuditOracle => audit_oracle(cfg, &signal),
        Command::AuditSigma => audit_sigma(cfg, &signal),
        Command::AuditConditions => audit_conditions(cfg),
        Command::Efficiency => efficiency(cfg, &signal),
        Command::Moments => moments(cfg),
    }
}

fn mc(cfg: &ExperimentConfig, seed: u64) -> MonteCarlo {
    MonteCarlo::new(cfg.replicates, seed, cfg.dt).with_execution(cfg.execution)
}

fn header(cfg: &ExperimentConfig) -> String {
    format!(
        "command {}  signal {}  seed {}  replicates {}  dt {}\n\n",
        cfg.command.map(|c| c.to_string()).unwrap_or_default(),
        cfg.signal,
        cfg.seed,
        cfg.replicates,
        cfg.dt
    )
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

/// Simulated observation record for horizon `n`; shared by simulate and estimate.
pub fn simulated_record(cfg: &ExperimentConfig, signal: &SignalSpec, n: usize) -> Result<ouselect::ObservationPath, CliError> {
    let noise = simulate_noise(&cfg.noise, n, cfg.dt, derive(cfg.seed, &[TAG_SIM, n as u64]))?;
    Ok(observe(signal, noise))
}

fn simulate(cfg: &ExperimentConfig, signal: &SignalSpec) -> Result<Outcome, CliError> {
    let mut artifacts = Artifacts::default();
    let mut summary = header(cfg);
    summary.push_str("n       cells      jumps  xi(n)\n");
    for &n in &cfg.n {
        let rec = simulated_record(cfg, signal, n)?;
        let mut path = Vec::new();
        write_path(&rec, &mut path)?;
        artifacts.push(format!("path_n{n}.csv"), path);
        let mut jumps = Vec::new();
        write_jumps(&rec.noise, &mut jumps)?;
        artifacts.push(format!("jumps_n{n}.csv"), jumps);
        let _ = writeln!(
            summary,
            "{n:<7} {:<10} {:<6} {:.6}",
            rec.noise.cells(),
            rec.noise.jumps().len(),
            rec.noise.terminal()
        );
    }
    Ok(Outcome {
        passed: true,
        artifacts,
        summary,
    })
}

#[derive(Serialize)]
struct ReconstructionRow {
    x: f64,
    s_hat: f64,
}

/// Runs the selector on one record and stores its JSON and reconstruction.
pub fn estimate_record(cfg: &ExperimentConfig, obs: &Observations) -> Result<EstimationResult, CliError> {
    let n = obs.horizon();
    let grid = default_grid(n)?;
    let mode = match cfg.sigma {
        Some(SigmaChoice::Known) => SigmaMode::Known(cfg.noise.rho_star()),
        _ => SigmaMode::Estimated,
    };
    let config = SelectionConfig::new(cfg.rho.at(n), mode)?;
    Ok(estimate(obs, &grid, &config)?)
}

fn run_estimate(cfg: &ExperimentConfig, signal: &SignalSpec) -> Result<Outcome, CliError> {
    let records: Vec<Observations> = match &cfg.input {
        Some(path) => vec![read_observations_file(path)?],
        None => cfg
            .n
            .iter()
            .map(|&n| simulated_record(cfg, signal, n).map(|r| Observations::from_path(&r)))
            .collect::<Result<_, _>>()?,
    };
    let mut artifacts = Artifacts::default();
    let mut summary = header(cfg);
    summary.push_str("n       rho       sigma_used  selected  alpha\n");
    for obs in &records {
        let n = obs.horizon();
        let res = estimate_record(cfg, obs)?;
        artifacts.json(&format!("estimate_n{n}.json"), &res)?;
        let rows: Vec<ReconstructionRow> = (0..RECONSTRUCTION_POINTS)
            .map(|i| {
                let x = i as f64 / RECONSTRUCTION_POINTS as f64;
                ReconstructionRow {
                    x,
                    s_hat: res.estimate_at(x),
                }
            })
            .collect();
        artifacts.csv(&format!("reconstruction_n{n}.csv"), &rows)?;
        let _ = writeln!(
            summary,
            "{n:<7} {:<9.6} {:<11.6} {:<9} {:?}",
            res.rho, res.sigma_used, res.selected, res.selected_alpha
        );
    }
    Ok(Outcome {
        passed: true,
        artifacts,
        summary,
    })
}

#[derive(Serialize)]
struct AuditCell {
    member: usize,
    params: NoiseParams,
    report: RiskReport,
}

#[derive(Serialize)]
struct AuditRow {
    n: usize,
    member: usize,
    sigma_mode: SigmaChoice,
    rho: f64,
    nu: usize,
    selected_risk: f64,
    selected_se: f64,
    oracle_min: f64,
    oracle_se: f64,
    oracle_index: usize,
    coefficient: f64,
    b_q: f64,
    rhs: f64,
    pass: bool,
    sigma_abs_error: f64,
    sigma_abs_error_se: f64,
    sigma_bound: f64,
    sigma_pass: bool,
}

fn audit_oracle(cfg: &ExperimentConfig, signal: &SignalSpec) -> Result<Outcome, CliError> {
    let family = cfg.family_grid()?;
    let modes = cfg.sigma_modes();
    let mut cells = Vec::new();
    for &n in &cfg.n {
        let grid = default_grid(n)?;
        let rho = cfg.rho.at(n);
        for (i, p) in family.members.iter().enumerate() {
            let run = mc(cfg, derive(cfg.seed, &[TAG_MEMBER, i as u64]));
            for report in oracle_audit(signal, p, &family.bounds, n, &grid, rho, &modes, &run)? {
                cells.push(AuditCell {
                    member: i,
                    params: *p,
                    report,
                });
            }
        }
    }
    let rows: Vec<AuditRow> = cells
        .iter()
        .map(|c| {
            let r = &c.report;
            AuditRow {
                n: r.n,
                member: c.member,
                sigma_mode: r.sigma_mode,
                rho: r.rho,
                nu: r.nu,
                selected_risk: r.selected_risk.mean,
                selected_se: r.selected_risk.se,
                oracle_min: r.oracle_min.mean,
                oracle_se: r.oracle_min.se,
                oracle_index: r.oracle_index,
                coefficient: r.coefficient,
                b_q: r.b_q,
                rhs: r.rhs,
                pass: r.pass,
                sigma_abs_error: r.sigma_abs_error.mean,
                sigma_abs_error_se: r.sigma_abs_error.se,
                sigma_bound: r.sigma_bound,
                sigma_pass: r.sigma_pass,
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.pass && r.sigma_pass);
    let mut summary = header(cfg);
    summary.push_str("n      member  sigma      selected risk (se)       oracle min   rhs          sigma err   verdict\n");
    for r in &rows {
        let _ = writeln!(
            summary,
            "{:<6} {:<7} {:<10} {:<11.6e} ({:.2e})  {:<12.6e} {:<12.6e} {:<11.5} {}",
            r.n,
            r.member,
            format!("{:?}", r.sigma_mode).to_lowercase(),
            r.selected_risk,
            r.selected_se,
            r.oracle_min,
            r.rhs,
            r.sigma_abs_error,
            verdict(r.pass && r.sigma_pass)
        );
    }
    let mut artifacts = Artifacts::default();
    artifacts.json("audit_oracle.json", &cells)?;
    artifacts.csv("audit_oracle.csv", &rows)?;
    Ok(Outcome {
        passed,
        artifacts,
        summary,
    })
}

#[derive(Serialize)]
struct SigmaCsvRow {
    n: usize,
    member: usize,
    rho_star: f64,
    abs_error: f64,
    abs_error_se: f64,
    kappa: f64,
    bound: f64,
    pass: bool,
}

fn audit_sigma(cfg: &ExperimentConfig, signal: &SignalSpec) -> Result<Outcome, CliError> {
    let family = cfg.family_grid()?;
    let rows: Vec<SigmaRow> = sigma_consistency(signal, &family, &cfg.n, &mc(cfg, cfg.seed))?;
    let flat: Vec<SigmaCsvRow> = rows
        .iter()
        .map(|r| SigmaCsvRow {
            n: r.n,
            member: r.member,
            rho_star: r.params.rho_star(),
            abs_error: r.abs_error.mean,
            abs_error_se: r.abs_error.se,
            kappa: r.kappa,
            bound: r.bound,
            pass: r.pass,
        })
        .collect();
    let passed = rows.iter().all(|r| r.pass);
    let mut summary = header(cfg);
    summary.push_str("n      member  E|sigma_hat - rho*| (se)   bound        verdict\n");
    for r in &flat {
        let _ = writeln!(
            summary,
            "{:<6} {:<7} {:<10.6} ({:.2e})         {:<12.6} {}",
            r.n,
            r.member,
            r.abs_error,
            r.abs_error_se,
            r.bound,
            verdict(r.pass)
        );
    }
    let mut artifacts = Artifacts::default();
    artifacts.json("audit_sigma.json", &rows)?;
    artifacts.csv("audit_sigma.csv", &flat)?;
    Ok(Outcome {
        passed,
        artifacts,
        summary,
    })
}

#[derive(Serialize)]
struct ConditionCell {
    n: usize,
    member: usize,
    params: NoiseParams,
    report: ConditionReport,
}

#[derive(Serialize)]
struct ConditionCsvRow {
    n: usize,
    member: usize,
    j: usize,
    second_moment: f64,
    se: f64,
    deviation: f64,
    envelope: f64,
    pass: bool,
}

fn audit_conditions(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = cfg.family_grid()?;
    let mut cells = Vec::new();
    for &n in &cfg.n {
        for (i, p) in family.members.iter().enumerate() {
            let run = mc(cfg, derive(cfg.seed, &[TAG_MEMBER, i as u64]));
            let report = condition_checks(p, &family.bounds, n, cfg.j_max.min(n), &run)?;
            cells.push(ConditionCell {
                n,
                member: i,
                params: *p,
                report,
            });
        }
    }
    let flat: Vec<ConditionCsvRow> = cells
        .iter()
        .flat_map(|c| {
            c.report.coordinates.iter().map(move |k| ConditionCsvRow {
                n: c.n,
                member: c.member,
                j: k.j,
                second_moment: k.second_moment.mean,
                se: k.second_moment.se,
                deviation: k.deviation,
                envelope: k.envelope,
                pass: k.pass,
            })
        })
        .collect();
    let passed = cells.iter().all(|c| c.report.pass);
    let mut summary = header(cfg);
    summary.push_str("n      member  L1 hat      L1 bound    L2 hat      L2 bound    verdict\n");
    for c in &cells {
        let r = &c.report;
        let _ = writeln!(
            summary,
            "{:<6} {:<7} {:<11.5} {:<11.5} {:<11.5} {:<11.5} {}",
            c.n,
            c.member,
            r.l1_hat,
            r.l1_bound,
            r.l2_hat,
            r.l2_bound,
            verdict(r.pass)
        );
    }
    let mut artifacts = Artifacts::default();
    artifacts.json("audit_conditions.json", &cells)?;
    artifacts.csv("audit_conditions.csv", &flat)?;
    Ok(Outcome {
        passed,
        artifacts,
        summary,
    })
}

#[derive(Serialize)]
struct EfficiencyCsvRow {
    n: usize,
    estimator: EfficiencyEstimator,
    argmax_member: usize,
    robust_risk: f64,
    robust_risk_se: f64,
    normalized: f64,
    ratio: f64,
    ratio_se: f64,
    alpha0_in_grid: bool,
}

/// Positive ratios and a nonincreasing trend for each estimator.
pub fn efficiency_verdict(rows: &[EfficiencyRow]) -> bool {
    [EfficiencyEstimator::Alpha0, EfficiencyEstimator::Selected].iter().all(|which| {
        let sub: Vec<EfficiencyRow> = rows.iter().filter(|r| r.estimator == *which).copied().collect();
        sub.iter().all(|r| r.ratio > 0.0) && nonincreasing_within_se(&sub)
    })
}

fn efficiency(cfg: &ExperimentConfig, signal: &SignalSpec) -> Result<Outcome, CliError> {
    let family = cfg.family_grid()?;
    let rows = efficiency_experiment(signal, &family, &cfg.n, &mc(cfg, cfg.seed))?;
    let r_star = pinsker_constant(signal.k, signal.r, family.sigma_star());
    let flat: Vec<EfficiencyCsvRow> = rows
        .iter()
        .map(|r| EfficiencyCsvRow {
            n: r.n,
            estimator: r.estimator,
            argmax_member: r.argmax_member,
            robust_risk: r.robust_risk.mean,
            robust_risk_se: r.robust_risk.se,
            normalized: r.normalized,
            ratio: r.ratio,
            ratio_se: r.ratio_se,
            alpha0_in_grid: r.alpha0_in_grid,
        })
        .collect();
    let passed = efficiency_verdict(&rows);
    let mut summary = header(cfg);
    let _ = writeln!(summary, "Pinsker constant R* = {r_star:.7}; ratio 1 is the asymptotic limit, not a desk-scale target\n");
    summary.push_str("n       estimator  argmax  ratio (se)\n");
    for r in &flat {
        let _ = writeln!(
            summary,
            "{:<7} {:<10} {:<7} {:.4} ({:.4})",
            r.n,
            format!("{:?}", r.estimator).to_lowercase(),
            r.argmax_member,
            r.ratio,
            r.ratio_se
        );
    }
    let _ = writeln!(summary, "\ntrend nonincreasing within 3 SE: {}", verdict(passed));
    let mut artifacts = Artifacts::default();
    artifacts.json("efficiency.json", &rows)?;
    artifacts.csv("efficiency.csv", &flat)?;
    Ok(Outcome {
        passed,
        artifacts,
        summary,
    })
}

#[derive(Serialize)]
struct MomentCell {
    n: usize,
    covariance: Vec<MomentCheck>,
    mean: Vec<MomentCheck>,
    jump: Vec<MomentCheck>,
    second_order: Vec<SecondOrderCheck>,
}

#[derive(Serialize)]
struct MomentCsvRow {
    n: usize,
    kind: &'static str,
    i: usize,
    j: usize,
    estimate: f64,
    se: f64,
    reference: f64,
    z: f64,
    pass: bool,
}

fn moment_rows<'a>(n: usize, kind: &'static str, checks: &'a [MomentCheck]) -> impl Iterator<Item = MomentCsvRow> + 'a {
    checks.iter().map(move |c| MomentCsvRow {
        n,
        kind,
        i: c.i,
        j: c.j,
        estimate: c.estimate.mean,
        se: c.estimate.se,
        reference: c.oracle,
        z: c.z,
        pass: c.pass,
    })
}

fn moments(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let tcfg = TransformConfig::default();
    let bounds = cfg.bounds();
    let with_jumps = cfg.noise.lambda > 0.0;
    let mut cells = Vec::new();
    for &n in &cfg.n {
        let samples = simulate_moments(&cfg.noise, n, &cfg.indices, with_jumps, &mc(cfg, cfg.seed))?;
        let jump = if with_jumps {
            cfg.indices
                .iter()
                .map(|&j| jump_moment(&samples, j, j, &cfg.noise, &tcfg))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            Vec::new()
        };
        cells.push(MomentCell {
            n,
            covariance: covariance_table(&samples, &cfg.noise, &tcfg),
            mean: mean_table(&samples),
            jump,
            second_order: second_order_table(&samples, &cfg.noise, &bounds, &tcfg)?,
        });
    }
    let mut flat = Vec::new();
    for c in &cells {
        flat.extend(moment_rows(c.n, "covariance", &c.covariance));
        flat.extend(moment_rows(c.n, "mean", &c.mean));
        flat.extend(moment_rows(c.n, "jump", &c.jump));
        flat.extend(c.second_order.iter().map(|s| MomentCsvRow {
            n: c.n,
            kind: "second_order",
            i: s.i,
            j: s.j,
            estimate: s.covariance.mean,
            se: s.covariance.se,
            reference: s.bound,
            z: f64::NAN,
            pass: s.pass,
        }));
    }
    let passed = flat.iter().all(|r| r.pass);
    let mut summary = header(cfg);
    summary.push_str("n      kind          i  j  estimate      se          reference     z        verdict\n");
    for r in &flat {
        let _ = writeln!(
            summary,
            "{:<6} {:<13} {:<2} {:<2} {:<13.6e} {:<11.3e} {:<13.6e} {:<8.3} {}",
            r.n,
            r.kind,
            r.i,
            r.j,
            r.estimate,
            r.se,
            r.reference,
            r.z,
            verdict(r.pass)
        );
    }
    let mut artifacts = Artifacts::default();
    artifacts.json("moments.json", &cells)?;
    artifacts.csv("moments.csv", &flat)?;
    Ok(Outcome {
        passed,
        artifacts,
        summary,
    })
}
