//! Command execution: each configured command resolved against the core
//! library, with sweeps sharded across worker threads by sample index and
//! report rows emitted in sample order regardless of completion order.

use std::thread;

use gamma_ratio_core::cm_harness::{check_bernstein, check_cm, geometric_grid, CMReport, Verdict};
use gamma_ratio_core::combinatorics::{
    ln_f2_as_multinomials, multinomial_beta_identity_slack, multinomial_inequality_slack,
    WeightVector,
};
use gamma_ratio_core::inequality::{inequality_sides, sharpness_search};
use gamma_ratio_core::ratio::{
    self, d2log_f, density_profile, dklog_f, dlog_f, log_f, RatioConfig,
};
use gamma_ratio_core::sampling;
use gamma_ratio_core::PositiveMatrix;
use rand_core::RngCore;
use serde_json::{json, Value};

use crate::config::{CommandKind, OutputFormat, RunConfig};
use crate::report::{emit, float17, Table};

/// Normalized inequality margins may round this far below zero.
const INEQ_MARGIN_FLOOR: f64 = -1e-12;
/// Relative tolerance for the CM/Bernstein grid checks.
const GRID_TOL: f64 = 1e-9;
/// Density values this far below zero (relative) violate nonnegativity.
const DENSITY_FLOOR: f64 = -1e-12;
/// Agreement required between the multinomial form and the gamma ratio.
const F2_REL_TOL: f64 = 1e-9;
/// The multinomial/beta identity must be exact to this.
const IDENTITY_TOL: f64 = 1e-10;
/// Convex-combination slacks may round this far below zero.
const SLACK_FLOOR: f64 = -1e-10;
/// Tail mass fraction discarded when tabulating the density.
const MEASURE_TAIL_REL_TOL: f64 = 1e-6;
/// Stream index reserved for drawing a run's base matrix, far away from
/// the per-sample streams `first_sample + i`.
const MATRIX_STREAM: u64 = u64::MAX;
/// Random matrix entries are log-uniform over this range.
const RANDOM_ENTRY_LO: f64 = 1e-3;
const RANDOM_ENTRY_HI: f64 = 1e3;
/// The combinatorial sweep keeps entries and times moderate so the
/// product forms stay inside f64 exponent range.
const COMBI_ENTRY_LO: f64 = 0.05;
const COMBI_ENTRY_HI: f64 = 2.0;

/// How a run can fail, mapped to exit codes by `main`.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or environment (exit 1).
    Usage(String),
    /// Evaluation or I/O failure while producing the report (exit 1).
    Runtime(String),
    /// An asserted contract failed; `replay` reproduces it (exit 2).
    Contract { message: String, replay: Box<RunConfig> },
}

fn runtime(e: impl core::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Worker count: GAMMA_RATIO_THREADS when set, available cores otherwise.
fn worker_threads() -> Result<usize, CliError> {
    match std::env::var("GAMMA_RATIO_THREADS") {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "GAMMA_RATIO_THREADS must be a positive integer, got {raw:?}"
                ))
            }),
        Err(std::env::VarError::NotPresent) => Ok(thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
        Err(e) => Err(CliError::Usage(format!("GAMMA_RATIO_THREADS: {e}"))),
    }
}

/// Runs `job` for indices 0..count across up to `threads` workers and
/// returns results in index order. Each index is computed independently,
/// so the output does not depend on scheduling.
fn run_indexed<T, F>(count: usize, threads: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if count == 0 {
        return Vec::new();
    }
    let threads = threads.clamp(1, count);
    let mut slots: Vec<Option<T>> = Vec::with_capacity(count);
    slots.resize_with(count, || None);
    let chunk = count.div_ceil(threads);
    thread::scope(|scope| {
        for (w, slice) in slots.chunks_mut(chunk).enumerate() {
            let job = &job;
            scope.spawn(move || {
                for (k, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(job(w * chunk + k));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.expect("every index is filled by its worker"))
        .collect()
}

/// The matrix a run works with: explicit entries, or a seeded draw with
/// entries log-uniform over [1e-3, 1e3].
fn resolve_matrix(cfg: &RunConfig) -> Result<PositiveMatrix, CliError> {
    if let Some(rows) = &cfg.matrix {
        PositiveMatrix::from_rows(rows).map_err(|e| CliError::Usage(format!("matrix: {e}")))
    } else {
        let (m, n) = cfg.shape();
        let mut rng = sampling::sample_rng(cfg.seed, MATRIX_STREAM);
        Ok(sampling::random_matrix(
            &mut rng,
            m,
            n,
            RANDOM_ENTRY_LO,
            RANDOM_ENTRY_HI,
        ))
    }
}

fn matrix_rows(matrix: &PositiveMatrix) -> Vec<Vec<f64>> {
    matrix.iter_rows().map(|r| r.to_vec()).collect()
}

/// A violation replay: the same run narrowed to the failing instance,
/// with the matrix pinned explicitly so the file stands on its own.
fn replay_config(cfg: &RunConfig, matrix: Option<&PositiveMatrix>, note: String) -> Box<RunConfig> {
    let mut replay = cfg.clone();
    if let Some(matrix) = matrix {
        replay.matrix = Some(matrix_rows(matrix));
        replay.dims = None;
    }
    replay.note = Some(note);
    Box::new(replay)
}

/// Writes the report (table or the given JSON document) per the config.
fn emit_report(cfg: &RunConfig, table: &Table, json_doc: Value) -> Result<(), CliError> {
    let text = match cfg.effective_format() {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(&json_doc).expect("report JSON serializes");
            text.push('\n');
            text
        }
    };
    emit(&text, cfg.output_path.as_deref()).map_err(|e| CliError::Runtime(format!("write report: {e}")))
}

/// Validates, runs, and reports one configured command.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate().map_err(CliError::Usage)?;
    match cfg.command {
        CommandKind::Eval => run_eval(cfg),
        CommandKind::IneqCheck => run_ineq_check(cfg),
        CommandKind::CmCheck => run_cm_check(cfg),
        CommandKind::Sharpness => run_sharpness(cfg),
        CommandKind::Measure => run_measure(cfg),
        CommandKind::CombiCheck => run_combi_check(cfg),
    }
}

fn run_eval(cfg: &RunConfig) -> Result<(), CliError> {
    let matrix = resolve_matrix(cfg)?;
    let ratio_cfg = RatioConfig::new(matrix, cfg.rho).map_err(runtime)?;
    let grid = geometric_grid(cfg.grid.t_min, cfg.grid.t_max, cfg.grid.points).map_err(runtime)?;
    let hash = cfg.hash_hex();
    let mut table = Table::new(vec!["config", "t", "log_f", "dlog_f", "d2log_f"]);
    for t in grid {
        table.push(vec![
            hash.clone(),
            float17(t),
            float17(log_f(&ratio_cfg, t).map_err(runtime)?),
            float17(dlog_f(&ratio_cfg, t).map_err(runtime)?),
            float17(d2log_f(&ratio_cfg, t).map_err(runtime)?),
        ]);
    }
    let doc = json!({
        "command": "eval",
        "config": hash,
        "rho": cfg.rho,
        "matrix": matrix_rows(ratio_cfg.matrix()),
        "rows": table.to_json_rows(),
    });
    emit_report(cfg, &table, doc)
}

struct IneqSample {
    x: f64,
    lhs: f64,
    rhs: f64,
}

fn run_ineq_check(cfg: &RunConfig) -> Result<(), CliError> {
    let explicit = cfg
        .matrix
        .as_ref()
        .map(|_| resolve_matrix(cfg))
        .transpose()?;
    let (m, n) = cfg.shape();
    let threads = worker_threads()?;
    let samples = usize::try_from(cfg.samples).map_err(runtime)?;
    let results: Vec<Result<IneqSample, String>> =
        run_indexed(samples, threads, |i| {
            let stream = cfg.first_sample + i as u64;
            let mut rng = sampling::sample_rng(cfg.seed, stream);
            let mu = match &explicit {
                Some(matrix) => matrix.clone(),
                None => sampling::random_matrix(&mut rng, m, n, RANDOM_ENTRY_LO, RANDOM_ENTRY_HI),
            };
            let x = sampling::log_uniform(&mut rng, RANDOM_ENTRY_LO, RANDOM_ENTRY_HI);
            match inequality_sides(&mu, x) {
                Ok((lhs, rhs)) => Ok(IneqSample { x, lhs, rhs }),
                Err(e) => Err(e.to_string()),
            }
        });
    let hash = cfg.hash_hex();
    let mut table = Table::new(vec!["config", "sample", "x", "lhs", "rhs", "margin"]);
    let mut min_margin = f64::INFINITY;
    let mut violation: Option<(u64, f64)> = None;
    for (i, result) in results.into_iter().enumerate() {
        let sample = cfg.first_sample + i as u64;
        let row = result.map_err(CliError::Runtime)?;
        let margin = (row.lhs - row.rhs) / row.rhs.max(1.0);
        min_margin = min_margin.min(margin);
        if margin < INEQ_MARGIN_FLOOR && violation.is_none() {
            violation = Some((sample, margin));
        }
        table.push(vec![
            hash.clone(),
            sample.to_string(),
            float17(row.x),
            float17(row.lhs),
            float17(row.rhs),
            float17(margin),
        ]);
    }
    let doc = json!({
        "command": "ineq-check",
        "config": hash,
        "samples": cfg.samples,
        "min_normalized_margin": min_margin,
        "rows": table.to_json_rows(),
    });
    emit_report(cfg, &table, doc)?;
    eprintln!(
        "ineq-check: {} samples, min normalized margin {}",
        cfg.samples,
        float17(min_margin)
    );
    if let Some((sample, margin)) = violation {
        let mut replay = cfg.clone();
        replay.first_sample = sample;
        replay.samples = 1;
        replay.note = Some(format!(
            "sample {sample}: normalized margin {margin} below {INEQ_MARGIN_FLOOR}"
        ));
        return Err(CliError::Contract {
            message: format!("inequality margin {margin} at sample {sample}"),
            replay: Box::new(replay),
        });
    }
    Ok(())
}

fn verdict_str(report: &CMReport) -> &'static str {
    match report.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

fn cm_report_json(report: &CMReport) -> Value {
    json!({
        "max_order": report.max_order,
        "tolerance": report.tolerance,
        "verdict": verdict_str(report),
        "min_slack_per_order": report.min_slack_per_order,
        "scale_per_order": report.scale_per_order,
        "first_failure": report.first_failure.map(|f| {
            json!({ "order": f.order, "t": f.t, "value": f.value })
        }),
    })
}

fn push_cm_rows(table: &mut Table, hash: &str, check: &str, report: &CMReport) {
    for order in 0..=report.max_order {
        table.push(vec![
            hash.to_string(),
            check.to_string(),
            order.to_string(),
            float17(report.min_slack_per_order[order]),
            float17(report.scale_per_order[order]),
        ]);
    }
}

fn run_cm_check(cfg: &RunConfig) -> Result<(), CliError> {
    let matrix = resolve_matrix(cfg)?;
    let ratio_cfg = RatioConfig::new(matrix.clone(), cfg.rho).map_err(runtime)?;
    let grid = geometric_grid(cfg.grid.t_min, cfg.grid.t_max, cfg.grid.points).map_err(runtime)?;
    // [ln f]″ should be completely monotone (theorem hypothesis: ρ ≤ 2);
    // the handle maps harness order k to the derivative d^{k+2} ln f.
    let cm = check_cm(
        |t, k| dklog_f(&ratio_cfg, t, k + 2),
        cfg.order,
        &grid,
        GRID_TOL,
    )
    .map_err(runtime)?;
    // At ρ = 2 exactly, [ln f]′ should additionally be Bernstein.
    let bernstein = if cfg.rho == 2.0 {
        Some(
            check_bernstein(
                |t, k| dklog_f(&ratio_cfg, t, k + 1),
                cfg.order,
                &grid,
                GRID_TOL,
            )
            .map_err(runtime)?,
        )
    } else {
        None
    };
    let hypothesis_satisfied = cfg.rho <= 2.0;
    let hash = cfg.hash_hex();
    let mut table = Table::new(vec!["config", "check", "order", "min_slack", "scale"]);
    push_cm_rows(&mut table, &hash, "cm_d2log_f", &cm);
    if let Some(b) = &bernstein {
        push_cm_rows(&mut table, &hash, "bernstein_dlog_f", b);
    }
    let doc = json!({
        "command": "cm-check",
        "config": hash,
        "rho": cfg.rho,
        "hypothesis_satisfied": hypothesis_satisfied,
        "matrix": matrix_rows(&matrix),
        "grid": grid,
        "cm_d2log_f": cm_report_json(&cm),
        "bernstein_dlog_f": bernstein.as_ref().map(cm_report_json),
    });
    emit_report(cfg, &table, doc)?;
    let failed = cm.verdict == Verdict::Fail
        || bernstein.as_ref().is_some_and(|b| b.verdict == Verdict::Fail);
    if failed {
        let context = if hypothesis_satisfied {
            "within theorem hypotheses (rho <= 2): this is a genuine violation"
        } else {
            "outside theorem hypotheses (rho > 2): failure is expected there"
        };
        let failure = cm
            .first_failure
            .or(bernstein.as_ref().and_then(|b| b.first_failure))
            .expect("failed verdict records a failure");
        return Err(CliError::Contract {
            message: format!(
                "grid check failed at order {}, t = {}, value {}; {context}",
                failure.order, failure.t, failure.value
            ),
            replay: replay_config(cfg, Some(&matrix), format!("cm-check failure; {context}")),
        });
    }
    Ok(())
}

fn run_sharpness(cfg: &RunConfig) -> Result<(), CliError> {
    let (m, n) = cfg.shape();
    let starts = usize::try_from(cfg.samples).map_err(runtime)?;
    let result = sharpness_search(m, n, starts, cfg.seed).map_err(runtime)?;
    let hash = cfg.hash_hex();
    let mut table = Table::new(vec![
        "config",
        "best_ratio",
        "x_star",
        "evaluations",
    ]);
    table.push(vec![
        hash.clone(),
        float17(result.best_ratio),
        float17(result.x_star),
        result.evaluations.to_string(),
    ]);
    let doc = json!({
        "command": "sharpness",
        "config": hash,
        "rows_cols": [m, n],
        "starts": starts,
        "seed": result.seed,
        "best_ratio": result.best_ratio,
        "x_star": result.x_star,
        "evaluations": result.evaluations,
        "matrix": matrix_rows(&result.matrix),
        "undercuts_conjectured_floor": result.undercuts_conjectured_floor(),
    });
    emit_report(cfg, &table, doc)?;
    eprintln!(
        "sharpness: {m}x{n}, {starts} starts, best ratio {}",
        float17(result.best_ratio)
    );
    if result.undercuts_conjectured_floor() {
        return Err(CliError::Contract {
            message: format!(
                "search found ratio {} below the conjectured floor 2",
                result.best_ratio
            ),
            replay: replay_config(
                cfg,
                None,
                format!("sharpness undercut: ratio {} at x = {}", result.best_ratio, result.x_star),
            ),
        });
    }
    Ok(())
}

fn run_measure(cfg: &RunConfig) -> Result<(), CliError> {
    let matrix = resolve_matrix(cfg)?;
    let ratio_cfg = RatioConfig::new(matrix.clone(), cfg.rho).map_err(runtime)?;
    let profile =
        density_profile(&ratio_cfg, cfg.grid.points, MEASURE_TAIL_REL_TOL).map_err(runtime)?;
    let hash = cfg.hash_hex();
    let mut table = Table::new(vec!["config", "u", "levy_density", "density"]);
    let mut violation: Option<(f64, f64)> = None;
    for (u, value) in profile.u_grid.iter().zip(&profile.values) {
        let levy = ratio::levy_density(&ratio_cfg, *u).map_err(runtime)?;
        if *value < DENSITY_FLOOR * value.abs().max(1.0) && violation.is_none() {
            violation = Some((*u, *value));
        }
        table.push(vec![
            hash.clone(),
            float17(*u),
            float17(levy),
            float17(*value),
        ]);
    }
    let doc = json!({
        "command": "measure",
        "config": hash,
        "rho": cfg.rho,
        "matrix": matrix_rows(&matrix),
        "truncation_u": profile.truncation_u,
        "tail_bound": profile.tail_bound,
        "rows": table.to_json_rows(),
    });
    emit_report(cfg, &table, doc)?;
    eprintln!(
        "measure: {} points up to u = {}, tail bound {}",
        profile.u_grid.len(),
        float17(profile.truncation_u),
        float17(profile.tail_bound)
    );
    if cfg.rho <= 2.0 {
        if let Some((u, value)) = violation {
            return Err(CliError::Contract {
                message: format!("density {value} < 0 at u = {u} despite rho <= 2"),
                replay: replay_config(
                    cfg,
                    Some(&matrix),
                    format!("negative density {value} at u = {u}"),
                ),
            });
        }
    } else if violation.is_some() {
        eprintln!("measure: negative density found, expected for rho > 2 (outside theorem hypotheses)");
    }
    Ok(())
}

struct CombiSample {
    t: f64,
    f2_rel_err: f64,
    identity_slack: f64,
    inequality_slack: f64,
}

fn run_combi_check(cfg: &RunConfig) -> Result<(), CliError> {
    let explicit = cfg
        .matrix
        .as_ref()
        .map(|_| resolve_matrix(cfg))
        .transpose()?;
    let (m, n) = cfg.shape();
    let threads = worker_threads()?;
    let samples = usize::try_from(cfg.samples).map_err(runtime)?;
    let results: Vec<Result<CombiSample, String>> = run_indexed(samples, threads, |i| {
        let stream = cfg.first_sample + i as u64;
        let mut rng = sampling::sample_rng(cfg.seed, stream);
        let lambda = match &explicit {
            Some(matrix) => matrix.clone(),
            None => sampling::random_matrix(&mut rng, m, n, COMBI_ENTRY_LO, COMBI_ENTRY_HI),
        };
        let t = sampling::log_uniform(&mut rng, 0.01, 5.0);
        (|| -> Result<CombiSample, gamma_ratio_core::Error> {
            // Compare the product form to the gamma ratio in log space, so
            // large configurations do not overflow on the way to a ratio.
            let ratio_cfg = RatioConfig::new(lambda.clone(), 2.0)?;
            let ln_direct = log_f(&ratio_cfg, t)?;
            let ln_product = ln_f2_as_multinomials(&lambda, t)?;
            let f2_rel_err = (ln_product - ln_direct).exp_m1().abs();
            let len = 2 + (rng.next_u64() % 5) as usize;
            let a: Vec<f64> = (0..len)
                .map(|_| sampling::log_uniform(&mut rng, 0.05, 50.0))
                .collect();
            let identity_slack = multinomial_beta_identity_slack(&a)?;
            let parts = 2 + (rng.next_u64() % 2) as usize;
            let raw: Vec<f64> = (0..parts)
                .map(|_| sampling::uniform(&mut rng, 0.05, 1.0))
                .collect();
            let total: f64 = raw.iter().sum();
            let theta: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let y: Vec<f64> = (0..parts)
                .map(|_| sampling::log_uniform(&mut rng, 0.1, 10.0))
                .collect();
            let weights = WeightVector::new(theta, y)?;
            let inequality_slack = multinomial_inequality_slack(&lambda, &weights)?;
            Ok(CombiSample {
                t,
                f2_rel_err,
                identity_slack,
                inequality_slack,
            })
        })()
        .map_err(|e| e.to_string())
    });
    let hash = cfg.hash_hex();
    let mut table = Table::new(vec![
        "config",
        "sample",
        "t",
        "f2_rel_err",
        "identity_slack",
        "inequality_slack",
    ]);
    let mut violation: Option<(u64, String)> = None;
    for (i, result) in results.into_iter().enumerate() {
        let sample = cfg.first_sample + i as u64;
        let row = result.map_err(CliError::Runtime)?;
        if violation.is_none() {
            if row.f2_rel_err > F2_REL_TOL {
                violation = Some((sample, format!("f2 relative error {}", row.f2_rel_err)));
            } else if row.identity_slack.abs() > IDENTITY_TOL {
                violation = Some((sample, format!("identity slack {}", row.identity_slack)));
            } else if row.inequality_slack < SLACK_FLOOR {
                violation = Some((sample, format!("inequality slack {}", row.inequality_slack)));
            }
        }
        table.push(vec![
            hash.clone(),
            sample.to_string(),
            float17(row.t),
            float17(row.f2_rel_err),
            float17(row.identity_slack),
            float17(row.inequality_slack),
        ]);
    }
    let doc = json!({
        "command": "combi-check",
        "config": hash,
        "samples": cfg.samples,
        "rows": table.to_json_rows(),
    });
    emit_report(cfg, &table, doc)?;
    if let Some((sample, what)) = violation {
        let mut replay = cfg.clone();
        replay.first_sample = sample;
        replay.samples = 1;
        replay.note = Some(format!("sample {sample}: {what}"));
        return Err(CliError::Contract {
            message: format!("{what} at sample {sample}"),
            replay: Box::new(replay),
        });
    }
    Ok(())
}
