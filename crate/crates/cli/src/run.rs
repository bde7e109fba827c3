//! `alphaflow run`: executes a configured run and writes its artifacts.
//!
//! Layout of the output directory:
//!
//! ```text
//! trajectory.csv              physical trajectory (mode physical|both)
//! diagnostics_physical.csv    normalised diagnostics of the physical run
//! trajectory_rescaled.csv     rescaled trajectory (mode rescaled|both)
//! diagnostics_rescaled.csv    diagnostics of the rescaled run
//! snapshots/{physical,rescaled}_<step>.json
//! summary.json
//! ```

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use alphaflow::body::make_body;
use alphaflow::flow::{run_rescaled, run_to_extinction, StopReason, TrajectoryRow};
use alphaflow::{DiagnosticsRecord, FlowState, Monitor, RescaledState, Snapshot, SphereGrid, SupportField};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub t_star_estimate: Option<f64>,
    /// Physical run ended because step halving was exhausted.
    pub step_failure: bool,
    pub summary: Value,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.step_failure {
            2
        } else {
            0
        }
    }
}

struct Csv(BufWriter<File>);

impl Csv {
    fn create(path: &Path, header: &str) -> Result<Self, CliError> {
        let file = File::create(path).map_err(CliError::io(format!("cannot create {}", path.display())))?;
        let mut csv = Csv(BufWriter::new(file));
        csv.line(header).map_err(CliError::io(format!("cannot write {}", path.display())))?;
        Ok(csv)
    }

    fn line(&mut self, text: &str) -> std::io::Result<()> {
        writeln!(self.0, "{text}")
    }

    fn finish(mut self) -> std::io::Result<()> {
        self.0.flush()
    }
}

struct Snapshots {
    dir: PathBuf,
    prefix: &'static str,
    interval: usize,
    next: usize,
    last_written: Option<usize>,
}

impl Snapshots {
    fn new(dir: PathBuf, prefix: &'static str, interval: usize) -> Self {
        Snapshots {
            dir,
            prefix,
            interval,
            next: 0,
            last_written: None,
        }
    }

    fn write(&mut self, body: &SupportField, alpha: f64, time: f64, step: usize) -> alphaflow::Result<()> {
        if self.last_written == Some(step) {
            return Ok(());
        }
        let path = self.dir.join(format!("{}_{step:08}.json", self.prefix));
        Snapshot::from_field(body, Some(alpha), Some(time)).write(path)?;
        self.last_written = Some(step);
        Ok(())
    }

    fn maybe(&mut self, body: &SupportField, alpha: f64, time: f64, step: usize) -> alphaflow::Result<()> {
        if self.interval > 0 && step >= self.next {
            self.write(body, alpha, time, step)?;
            self.next = (step / self.interval + 1) * self.interval;
        } else if step == 0 {
            self.write(body, alpha, time, step)?;
        }
        Ok(())
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, Value::from)
}

fn diagnostics_summary(monitor: &Monitor) -> alphaflow::Result<Value> {
    let records = monitor.records();
    let Some(last) = records.last() else {
        return Ok(Value::Null);
    };
    let report = monitor.monotonicity()?;
    let flags_pass = records.iter().all(|r| r.flags.all_pass());
    Ok(json!({
        "records": records.len(),
        "itilde_initial": records[0].itilde,
        "itilde_final": last.itilde,
        "itilde_monotone": report.pass,
        "itilde_max_excursion": report.max_excursion,
        "pinching_final": last.pinching,
        "residual_final": last.residual,
        "C_best_final": last.c_best,
        "bounds_pass": flags_pass,
    }))
}

fn physical_run(cfg: &RunConfig, body: SupportField, out: &Path) -> Result<(Value, Option<f64>, bool), CliError> {
    let state = FlowState::new(body, cfg.alpha)
        .and_then(|s| s.with_safety(cfg.dt_safety))
        .map_err(CliError::Setup)?;
    let mut trajectory = Csv::create(&out.join("trajectory.csv"), TrajectoryRow::CSV_HEADER)?;
    let mut diagnostics = Csv::create(&out.join("diagnostics_physical.csv"), &DiagnosticsRecord::csv_header())?;
    let mut snapshots = Snapshots::new(out.join("snapshots"), "physical", cfg.snapshot_interval);
    let mut monitor = Monitor::new(cfg.alpha);
    let mut last: Option<FlowState> = None;

    let result = run_to_extinction(state, &cfg.stop, cfg.sample_interval, |s| {
        trajectory.line(&TrajectoryRow::physical(s)?.to_csv())?;
        diagnostics.line(&monitor.observe_physical(s)?.to_csv())?;
        snapshots.maybe(s.body(), s.alpha, s.t, s.step_count)?;
        last = Some(s.clone());
        Ok(())
    });
    if let Some(s) = &last {
        snapshots.write(s.body(), s.alpha, s.t, s.step_count)?;
    }
    trajectory.finish().map_err(CliError::io("writing trajectory.csv"))?;
    diagnostics.finish().map_err(CliError::io("writing diagnostics_physical.csv"))?;
    let run = result?;

    let (reason, failed) = match run.reason {
        StopReason::VolumeThreshold => (json!("volume_threshold"), false),
        StopReason::StepFailure { halvings, time } => (json!({"step_failure": {"halvings": halvings, "t": time}}), true),
    };
    let fs = &run.final_state;
    let summary = json!({
        "steps": fs.step_count,
        "t_final": fs.t,
        "V_initial": fs.initial_volume,
        "V_final": fs.volume,
        "stop_reason": reason,
        "T_star_estimate": opt(run.t_star_estimate),
        "diagnostics": diagnostics_summary(&monitor)?,
    });
    Ok((summary, run.t_star_estimate, failed))
}

fn rescaled_run(cfg: &RunConfig, body: SupportField, out: &Path) -> Result<Value, CliError> {
    let state = RescaledState::new(body, cfg.alpha)
        .and_then(|s| s.with_safety(cfg.dt_safety))
        .map_err(CliError::Setup)?;
    let mut trajectory = Csv::create(&out.join("trajectory_rescaled.csv"), TrajectoryRow::CSV_HEADER)?;
    let mut diagnostics = Csv::create(&out.join("diagnostics_rescaled.csv"), &DiagnosticsRecord::csv_header())?;
    let mut snapshots = Snapshots::new(out.join("snapshots"), "rescaled", cfg.snapshot_interval);
    let mut monitor = Monitor::new(cfg.alpha);

    let result = run_rescaled(state, &cfg.stop, cfg.sample_interval, |s| {
        trajectory.line(&TrajectoryRow::rescaled(s)?.to_csv())?;
        diagnostics.line(&monitor.observe(s)?.to_csv())?;
        snapshots.maybe(s.body(), s.alpha, s.tau, s.step_count)?;
        Ok(())
    });
    trajectory.finish().map_err(CliError::io("writing trajectory_rescaled.csv"))?;
    diagnostics.finish().map_err(CliError::io("writing diagnostics_rescaled.csv"))?;
    let last = result?;
    snapshots.write(last.body(), last.alpha, last.tau, last.step_count)?;

    Ok(json!({
        "steps": last.step_count,
        "tau_final": last.tau,
        "t_physical": last.t_physical,
        "V_physical": last.physical_volume(),
        "diagnostics": diagnostics_summary(&monitor)?,
    }))
}

/// Runs the configuration stored at `path`. Step failure in the physical run
/// still writes every artifact and is reported through
/// [`RunOutcome::exit_code`]; any other failure is an `Err`.
pub fn cmd_run(path: &Path) -> Result<RunOutcome, CliError> {
    let cfg = RunConfig::load(path)?;
    run_config(&cfg)
}

pub fn run_config(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let out = cfg.output_dir.clone();
    std::fs::create_dir_all(out.join("snapshots"))
        .map_err(CliError::io(format!("cannot create {}", out.display())))?;
    let grid = Arc::new(SphereGrid::new(cfg.resolution).map_err(CliError::Setup)?);
    let body = make_body(&cfg.body, grid).map_err(CliError::Setup)?;

    let mut summary = json!({
        "dim": cfg.dim,
        "alpha": cfg.alpha,
        "resolution": cfg.resolution.counts(),
        "body": serde_json::to_value(&cfg.body).expect("body specs serialise"),
        "seed": cfg.seed,
        "dt_safety": cfg.dt_safety,
        "T_star_estimate": Value::Null,
    });
    let mut t_star = None;
    let mut step_failure = false;
    if cfg.mode.physical() {
        let (physical, estimate, failed) = physical_run(cfg, body.clone(), &out)?;
        summary["physical"] = physical;
        summary["T_star_estimate"] = opt(estimate);
        t_star = estimate;
        step_failure = failed;
    }
    if cfg.mode.rescaled() {
        summary["rescaled"] = rescaled_run(cfg, body, &out)?;
    }

    let text = serde_json::to_string_pretty(&summary).expect("summary serialises");
    let summary_path = out.join("summary.json");
    std::fs::write(&summary_path, text + "\n")
        .map_err(CliError::io(format!("cannot write {}", summary_path.display())))?;
    Ok(RunOutcome {
        output_dir: out,
        t_star_estimate: t_star,
        step_failure,
        summary,
    })
}
