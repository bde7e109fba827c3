//! `alphaflow verify`: the acceptance suites. Each suite returns one
//! [`Verdict`] per criterion it covers; runs shared between suites are
//! computed once per process.

use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use alphaflow::body::make_body;
use alphaflow::diagnostics::{integral_quantity, monotonicity_report, self_similar_residual, shape_distance};
use alphaflow::flow::{eta, rescale_snapshot, run_rescaled, run_to_extinction, StopReason};
use alphaflow::oracles::{dense_functional, Functional, SphereSolution};
use alphaflow::{
    BodySpec, DiagnosticsRecord, FlowState, Mode, Monitor, RescaledState, Resolution, SphereGrid, StopCriteria,
    SupportField,
};

use crate::config::random_modes;
use crate::CliError;

/// Registered suite names in criterion order, then `all`.
pub const SUITES: [&str; 12] = [
    "sphere-extinction",
    "sphere-extinction-1d",
    "volume-dissipation",
    "itilde-monotone",
    "round-convergence",
    "affine-ellipse",
    "convexity-preservation",
    "bound-suite",
    "two-route",
    "quadrature-convergence",
    "determinism",
    "all",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub criterion: usize,
    pub suite: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status}  {:>2}  {:<24} {}", self.criterion, self.suite, self.detail)
    }
}

fn verdict(criterion: usize, pass: bool, detail: String) -> Verdict {
    Verdict {
        criterion,
        suite: SUITES[criterion - 1],
        pass,
        detail,
    }
}

fn failed(criterion: usize, err: &str) -> Verdict {
    verdict(criterion, false, format!("error: {err}"))
}

type Shared<T> = OnceLock<Result<T, String>>;

fn shared<T>(cell: &'static Shared<T>, f: impl FnOnce() -> alphaflow::Result<T>) -> Result<&'static T, String> {
    cell.get_or_init(|| f().map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
}

fn grid(dim: usize, counts: &[usize]) -> alphaflow::Result<Arc<SphereGrid>> {
    Ok(Arc::new(SphereGrid::new(Resolution::from_counts(dim, counts)?)?))
}

fn perturbed(modes: &[(u32, i32, f64)]) -> BodySpec {
    BodySpec::PerturbedSphere {
        radius: 1.0,
        modes: modes
            .iter()
            .map(|&(degree, order, amplitude)| Mode {
                degree,
                order,
                amplitude,
            })
            .collect(),
    }
}

fn min_gauss(body: &SupportField) -> alphaflow::Result<f64> {
    Ok(body.curvature_summary()?.gauss_range.0)
}

/// Smallest ratio `min K(t) / min K(0)` seen along a trajectory.
#[derive(Clone, Copy, Debug)]
struct KTrack {
    initial: f64,
    worst_ratio: f64,
}

impl KTrack {
    fn new(body: &SupportField) -> alphaflow::Result<Self> {
        Ok(KTrack {
            initial: min_gauss(body)?,
            worst_ratio: 1.0,
        })
    }

    fn observe(&mut self, body: &SupportField) -> alphaflow::Result<()> {
        self.worst_ratio = self.worst_ratio.min(min_gauss(body)? / self.initial);
        Ok(())
    }
}

// Criterion 1.

struct SphereRun {
    t_star: Option<f64>,
    radius_error: f64,
    t_final: f64,
    clean: bool,
    elapsed: Duration,
    k: KTrack,
}

const SPHERE_ERR_HORIZON: f64 = 0.32;

fn sphere_run_2d() -> alphaflow::Result<SphereRun> {
    let start = Instant::now();
    let body = make_body(&BodySpec::Sphere { radius: 1.0 }, grid(2, &[64, 128])?)?;
    let exact = SphereSolution::new(1.0, 1.0, 2)?;
    let mut k = KTrack::new(&body)?;
    let mut radius_error: f64 = 0.0;
    let run = run_to_extinction(FlowState::new(body, 1.0)?, &StopCriteria::default(), 1, |s| {
        k.observe(s.body())?;
        if s.t <= SPHERE_ERR_HORIZON {
            let r = exact.radius(s.t)?;
            let err = s.body().values().iter().map(|v| (v - r).abs()).fold(0.0, f64::max);
            radius_error = radius_error.max(err);
        }
        Ok(())
    })?;
    Ok(SphereRun {
        t_star: run.t_star_estimate,
        radius_error,
        t_final: run.final_state.t,
        clean: run.reason == StopReason::VolumeThreshold,
        elapsed: start.elapsed(),
        k,
    })
}

static SPHERE_2D: Shared<SphereRun> = OnceLock::new();

fn sphere_extinction() -> Verdict {
    match shared(&SPHERE_2D, sphere_run_2d) {
        Ok(run) => {
            let exact = 1.0 / 3.0;
            let rel = run.t_star.map_or(f64::INFINITY, |t| (t - exact).abs() / exact);
            let pass = run.clean
                && rel <= 0.01
                && run.radius_error <= 1e-3
                && run.t_final > SPHERE_ERR_HORIZON
                && run.elapsed < Duration::from_secs(120);
            verdict(
                1,
                pass,
                format!(
                    "64x128: T* = {:.6} (rel err {rel:.2e} <= 1e-2), radius err {:.2e} <= 1e-3 up to t = 0.32, {:.1} s",
                    run.t_star.unwrap_or(f64::NAN),
                    run.radius_error,
                    run.elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => failed(1, &e),
    }
}

// Criterion 2.

struct CircleRun {
    alpha: f64,
    exact: f64,
    t_star: Option<f64>,
    clean: bool,
    k: KTrack,
}

fn circle_runs() -> alphaflow::Result<Vec<CircleRun>> {
    let g = grid(1, &[512])?;
    [1.0, 0.5]
        .into_iter()
        .map(|alpha| {
            let body = make_body(&BodySpec::Sphere { radius: 1.0 }, g.clone())?;
            let mut k = KTrack::new(&body)?;
            let run = run_to_extinction(FlowState::new(body, alpha)?, &StopCriteria::default(), 1, |s| {
                k.observe(s.body())
            })?;
            Ok(CircleRun {
                alpha,
                exact: SphereSolution::new(1.0, alpha, 1)?.extinction_time(),
                t_star: run.t_star_estimate,
                clean: run.reason == StopReason::VolumeThreshold,
                k,
            })
        })
        .collect()
}

static CIRCLES: Shared<Vec<CircleRun>> = OnceLock::new();

fn sphere_extinction_1d() -> Verdict {
    match shared(&CIRCLES, circle_runs) {
        Ok(runs) => {
            let mut pass = true;
            let parts: Vec<String> = runs
                .iter()
                .map(|r| {
                    let rel = r.t_star.map_or(f64::INFINITY, |t| (t - r.exact).abs() / r.exact);
                    pass &= r.clean && rel <= 5e-3;
                    format!(
                        "alpha {}: T* = {:.6} vs {:.6} (rel err {rel:.2e})",
                        r.alpha,
                        r.t_star.unwrap_or(f64::NAN),
                        r.exact
                    )
                })
                .collect();
            verdict(2, pass, format!("N=512: {}; tol 5e-3", parts.join(", ")))
        }
        Err(e) => failed(2, &e),
    }
}

// Criterion 3.

const DISSIPATION_ALPHA: f64 = 1.0;
const DISSIPATION_T_END: f64 = 0.005;
const DISSIPATION_BODIES: u64 = 5;
const DISSIPATION_AMPLITUDE: f64 = 0.02;
/// Forward Euler loses volume at `η + O(dt)`; a smaller step fraction keeps
/// the time error well under the spatial one.
const DISSIPATION_SAFETY: f64 = 0.1;

struct Dissipation {
    dim: usize,
    base: Vec<usize>,
    /// Worst `|ΔV/Δt + η| / η` per body at base and doubled resolution.
    errors: Vec<(f64, f64)>,
    k: Vec<KTrack>,
}

fn dissipation_error(spec: &BodySpec, g: Arc<SphereGrid>, k: &mut Vec<KTrack>) -> alphaflow::Result<f64> {
    let body = make_body(spec, g)?;
    let mut track = KTrack::new(&body)?;
    let mut state = FlowState::new(body, DISSIPATION_ALPHA)?.with_safety(DISSIPATION_SAFETY)?;
    let mut worst: f64 = 0.0;
    while state.t < DISSIPATION_T_END {
        let e = eta(state.body(), DISSIPATION_ALPHA)?;
        let next = state.advance(DISSIPATION_T_END - state.t)?;
        let rate = (next.volume - state.volume) / next.dt_last;
        worst = worst.max((rate + e).abs() / e);
        track.observe(next.body())?;
        state = next;
    }
    k.push(track);
    Ok(worst)
}

fn dissipation_runs() -> alphaflow::Result<Vec<Dissipation>> {
    [(1usize, vec![128usize]), (2, vec![40, 80])]
        .into_iter()
        .map(|(dim, base)| {
            let fine: Vec<usize> = base.iter().map(|c| 2 * c).collect();
            let mut k = Vec::new();
            let errors = (1..=DISSIPATION_BODIES)
                .map(|seed| {
                    let spec = BodySpec::PerturbedSphere {
                        radius: 1.0,
                        modes: random_modes(dim, 3, DISSIPATION_AMPLITUDE, seed),
                    };
                    Ok((
                        dissipation_error(&spec, grid(dim, &base)?, &mut k)?,
                        dissipation_error(&spec, grid(dim, &fine)?, &mut k)?,
                    ))
                })
                .collect::<alphaflow::Result<_>>()?;
            Ok(Dissipation { dim, base, errors, k })
        })
        .collect()
}

static DISSIPATION: Shared<Vec<Dissipation>> = OnceLock::new();

fn volume_dissipation() -> Verdict {
    match shared(&DISSIPATION, dissipation_runs) {
        Ok(runs) => {
            let mut pass = true;
            let parts: Vec<String> = runs
                .iter()
                .map(|d| {
                    let base = d.errors.iter().map(|e| e.0).fold(0.0, f64::max);
                    let ratio = d.errors.iter().map(|e| e.1 / e.0).fold(0.0, f64::max);
                    pass &= base <= 1e-3 && ratio <= 0.5;
                    format!(
                        "dim {} at {:?}: max rel err {base:.2e} <= 1e-3, worst refinement ratio {ratio:.3} <= 0.5",
                        d.dim, d.base
                    )
                })
                .collect();
            verdict(
                3,
                pass,
                format!(
                    "{DISSIPATION_BODIES} bodies per dim, alpha 1, amplitudes <= {DISSIPATION_AMPLITUDE}, dt safety {DISSIPATION_SAFETY}: {}",
                    parts.join("; ")
                ),
            )
        }
        Err(e) => failed(3, &e),
    }
}

// Criteria 4, 5, 8.

struct RescaledRun {
    label: String,
    dim: usize,
    alpha: f64,
    records: Vec<DiagnosticsRecord>,
}

fn rescaled_run(
    dim: usize,
    counts: &[usize],
    alpha: f64,
    spec: &BodySpec,
    tau_end: f64,
    interval: usize,
) -> alphaflow::Result<RescaledRun> {
    let body = make_body(spec, grid(dim, counts)?)?;
    let stop = StopCriteria {
        tau_end,
        ..StopCriteria::default()
    };
    let mut monitor = Monitor::new(alpha);
    run_rescaled(RescaledState::new(body, alpha)?, &stop, interval, |s| {
        monitor.observe(s).map(|_| ())
    })?;
    Ok(RescaledRun {
        label: format!("n={dim} alpha={alpha:.4} {counts:?}"),
        dim,
        alpha,
        records: monitor.into_records(),
    })
}

fn monotone_runs() -> alphaflow::Result<Vec<RescaledRun>> {
    let sphere = perturbed(&[(2, 0, 0.1), (2, 2, 0.05), (4, 0, 0.02), (4, -4, 0.01)]);
    let circle = perturbed(&[(2, 0, 0.1), (4, 0, 0.03), (4, -1, 0.01)]);
    let mut runs = Vec::new();
    for alpha in [0.6, 1.0] {
        runs.push(rescaled_run(2, &[32, 64], alpha, &sphere, 3.0, 1)?);
    }
    for alpha in [1.0 / 3.0, 1.0] {
        runs.push(rescaled_run(1, &[256], alpha, &circle, 3.0, 1)?);
    }
    Ok(runs)
}

static MONOTONE: Shared<Vec<RescaledRun>> = OnceLock::new();

fn itilde_monotone() -> Verdict {
    let runs = match shared(&MONOTONE, monotone_runs) {
        Ok(runs) => runs,
        Err(e) => return failed(4, &e),
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for run in runs {
        match monotonicity_report(&run.records) {
            Ok(report) => {
                pass &= report.pass;
                parts.push(format!(
                    "{}: max slope {:.2e} (tol {:.2e})",
                    run.label, report.max_excursion, report.tolerance
                ));
            }
            Err(e) => return failed(4, &e.to_string()),
        }
    }
    verdict(4, pass, format!("tau 0..3: {}", parts.join("; ")))
}

const ROUND_TAU: f64 = 5.0;

fn round_run() -> alphaflow::Result<RescaledRun> {
    let spec = perturbed(&[(2, 0, 0.03), (2, 2, 0.015), (4, 0, 0.006)]);
    rescaled_run(2, &[32, 64], 1.0, &spec, ROUND_TAU, 10)
}

static ROUND: Shared<RescaledRun> = OnceLock::new();

fn round_convergence() -> Verdict {
    let run = match shared(&ROUND, round_run) {
        Ok(run) => run,
        Err(e) => return failed(5, &e),
    };
    let Some(last) = run.records.last() else {
        return failed(5, "no records");
    };
    let drift = run
        .records
        .iter()
        .filter(|r| r.tau >= ROUND_TAU - 1.0)
        .map(|r| (r.c_best - last.c_best).abs() / last.c_best.abs())
        .fold(0.0, f64::max);
    let pass = last.pinching <= 1.01 && last.residual <= 1e-3 && drift < 5e-4;
    verdict(
        5,
        pass,
        format!(
            "{} at tau {:.2}: pinching {:.5} <= 1.01, residual {:.2e} <= 1e-3, C_best {:.6} drifts {drift:.1e} over the last unit (< 5e-4)",
            run.label, last.tau, last.pinching, last.residual, last.c_best
        ),
    )
}

fn bound_suite() -> Verdict {
    let mut runs: Vec<&RescaledRun> = match shared(&MONOTONE, monotone_runs) {
        Ok(r) => r.iter().collect(),
        Err(e) => return failed(8, &e),
    };
    match shared(&ROUND, round_run) {
        Ok(r) => runs.push(r),
        Err(e) => return failed(8, &e),
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for run in runs {
        let radii_gated = run.alpha > 1.0 / run.dim as f64;
        let mut fails = [0usize; 4];
        for rec in &run.records {
            for (i, flag) in rec.flags.as_array().into_iter().enumerate() {
                if i == 1 && !radii_gated {
                    continue;
                }
                if flag == Some(false) {
                    fails[i] += 1;
                }
            }
        }
        pass &= fails.iter().all(|&f| f == 0);
        parts.push(format!(
            "{}: {} records, failures {:?}{}",
            run.label,
            run.records.len(),
            fails,
            if radii_gated { "" } else { " (radii_sum not evaluated)" }
        ));
    }
    verdict(8, pass, parts.join("; "))
}

// Criterion 6.

fn affine_ellipse() -> Verdict {
    let result = (|| -> alphaflow::Result<(f64, f64)> {
        let b = (2.0 * std::f64::consts::PI).sqrt().recip();
        let spec = BodySpec::Ellipsoid { radii: vec![2.0 * b, b] };
        let alpha = 1.0 / 3.0;
        let initial = RescaledState::new(make_body(&spec, grid(1, &[512])?)?, alpha)?;
        let reference = initial.body().clone();
        let stop = StopCriteria {
            tau_end: 1.0,
            ..StopCriteria::default()
        };
        let (mut distance, mut residual) = (0.0f64, 0.0f64);
        run_rescaled(initial, &stop, 10, |s| {
            distance = distance.max(shape_distance(s.body(), &reference)?);
            residual = residual.max(self_similar_residual(s.body(), alpha)?.1);
            Ok(())
        })?;
        Ok((distance, residual))
    })();
    match result {
        Ok((distance, residual)) => verdict(
            6,
            distance <= 1e-2 && residual <= 2e-3,
            format!(
                "n=1 alpha=1/3 a/b=2, N=512, tau 0..1: shape distance {distance:.2e} <= 1e-2, residual {residual:.2e} <= 2e-3"
            ),
        ),
        Err(e) => failed(6, &e.to_string()),
    }
}

// Criterion 7.

fn convexity_preservation() -> Verdict {
    let mut tracks: Vec<(String, KTrack)> = Vec::new();
    match shared(&SPHERE_2D, sphere_run_2d) {
        Ok(r) => tracks.push(("sphere 64x128".into(), r.k)),
        Err(e) => return failed(7, &e),
    }
    match shared(&CIRCLES, circle_runs) {
        Ok(rs) => tracks.extend(rs.iter().map(|r| (format!("circle alpha {}", r.alpha), r.k))),
        Err(e) => return failed(7, &e),
    }
    match shared(&DISSIPATION, dissipation_runs) {
        Ok(ds) => {
            for d in ds {
                tracks.extend(d.k.iter().map(|k| (format!("dissipation dim {}", d.dim), *k)));
            }
        }
        Err(e) => return failed(7, &e),
    }
    let (name, worst) = tracks
        .iter()
        .min_by(|a, b| a.1.worst_ratio.total_cmp(&b.1.worst_ratio))
        .map(|(n, k)| (n.clone(), k.worst_ratio))
        .expect("at least one trajectory");
    verdict(
        7,
        worst >= 0.95,
        format!(
            "{} trajectories, every step: worst min K / initial min K = {worst:.4} ({name}) >= 0.95",
            tracks.len()
        ),
    )
}

// Criterion 9.

fn two_route() -> Verdict {
    let result = (|| -> alphaflow::Result<(f64, f64)> {
        let body = make_body(&BodySpec::Sphere { radius: 1.0 }, grid(2, &[32, 64])?)?;
        let mut physical = FlowState::new(body.clone(), 1.0)?;
        while physical.volume > 0.5 * physical.initial_volume {
            physical = physical.step()?;
        }
        let via_physical = rescale_snapshot(&physical)?;
        let stop = StopCriteria {
            tau_end: via_physical.tau,
            ..StopCriteria::default()
        };
        let direct = run_rescaled(RescaledState::new(body, 1.0)?, &stop, usize::MAX, |_| Ok(()))?;
        let (a, _) = via_physical.body().recentered();
        let (b, _) = direct.body().recentered();
        Ok((via_physical.tau, shape_distance(&a, &b)?))
    })();
    match result {
        Ok((tau, d)) => verdict(
            9,
            d <= 1e-6,
            format!("sphere 32x64 at tau {tau:.4}: shape distance {d:.2e} <= 1e-6"),
        ),
        Err(e) => failed(9, &e.to_string()),
    }
}

// Criterion 10.

const QUAD_ALPHA: f64 = 0.6;

fn discrete(body: &SupportField, f: Functional) -> alphaflow::Result<f64> {
    match f {
        Functional::Volume => body.volume(),
        Functional::Area => body.area(),
        Functional::Eta(a) => eta(body, a),
        Functional::IntegralQuantity(a) => integral_quantity(body, a),
    }
}

fn functional_name(f: Functional) -> &'static str {
    match f {
        Functional::Volume => "V",
        Functional::Area => "A",
        Functional::Eta(_) => "eta",
        Functional::IntegralQuantity(_) => "Itilde",
    }
}

/// Errors below this are treated as converged to rounding.
const ROUNDOFF_FLOOR: f64 = 1e-12;

fn quadrature_convergence() -> Verdict {
    let cases = [
        (BodySpec::Ellipsoid { radii: vec![1.3, 1.0, 0.8] }, Resolution::Sphere { n_theta: 16, n_phi: 32 }),
        (BodySpec::Ellipsoid { radii: vec![1.3, 0.8] }, Resolution::Circle(32)),
    ];
    let functionals = [
        Functional::Volume,
        Functional::Area,
        Functional::Eta(QUAD_ALPHA),
        Functional::IntegralQuantity(QUAD_ALPHA),
    ];
    let result = (|| -> alphaflow::Result<(bool, Vec<String>)> {
        let mut pass = true;
        let mut parts = Vec::new();
        for (spec, base) in &cases {
            let levels = [*base, base.refined(2), base.refined(4)];
            let bodies = levels
                .iter()
                .map(|r| make_body(spec, Arc::new(SphereGrid::new(*r)?)))
                .collect::<alphaflow::Result<Vec<_>>>()?;
            for f in functionals {
                let exact = dense_functional(spec, levels[2], f, 8)?;
                let errs = bodies
                    .iter()
                    .map(|b| Ok((discrete(b, f)? - exact).abs() / exact.abs()))
                    .collect::<alphaflow::Result<Vec<f64>>>()?;
                let orders = [(errs[0] / errs[1]).log2(), (errs[1] / errs[2]).log2()];
                let ok = errs[2] < ROUNDOFF_FLOOR || orders.iter().all(|&p| p >= 1.8);
                pass &= ok;
                parts.push(format!(
                    "{} {}: orders {:.2}/{:.2}{}",
                    base,
                    functional_name(f),
                    orders[0],
                    orders[1],
                    if errs[2] < ROUNDOFF_FLOOR { " (at rounding)" } else { "" }
                ));
            }
        }
        Ok((pass, parts))
    })();
    match result {
        Ok((pass, parts)) => verdict(10, pass, format!("three doublings, need >= 1.8: {}", parts.join(", "))),
        Err(e) => failed(10, &e.to_string()),
    }
}

// Criterion 11.

const DETERMINISM_CONFIG: &str = "\
dim = 2
alpha = 0.8
resolution = 16x32
body = perturbed
random_modes = 3
random_amplitude = 0.05
seed = 11
mode = both
tau_end = 0.5
sample_interval = 5
snapshot_interval = 50
";

const DETERMINISM_FILES: [&str; 5] = [
    "trajectory.csv",
    "trajectory_rescaled.csv",
    "diagnostics_physical.csv",
    "diagnostics_rescaled.csv",
    "summary.json",
];

fn run_outputs(config: &Path) -> Result<Vec<Vec<u8>>, CliError> {
    let outcome = crate::run::cmd_run(config)?;
    DETERMINISM_FILES
        .iter()
        .map(|name| {
            let path = outcome.output_dir.join(name);
            std::fs::read(&path).map_err(CliError::io(format!("cannot read {}", path.display())))
        })
        .collect()
}

fn determinism() -> Verdict {
    let result = (|| -> Result<(bool, usize), CliError> {
        let dir = tempfile::tempdir().map_err(CliError::io("cannot create a temporary directory"))?;
        let config = dir.path().join("run.cfg");
        let text = format!("{DETERMINISM_CONFIG}output_dir = {}\n", dir.path().join("out").display());
        std::fs::write(&config, text).map_err(CliError::io("cannot write config"))?;
        let first = run_outputs(&config)?;
        let second = run_outputs(&config)?;
        Ok((first == second, first.iter().map(Vec::len).sum()))
    })();
    match result {
        Ok((same, bytes)) => verdict(
            11,
            same,
            format!("two runs of one config (mode both): {bytes} bytes, identical = {same}"),
        ),
        Err(e) => failed(11, &e.to_string()),
    }
}

fn run_criterion(criterion: usize) -> Verdict {
    match criterion {
        1 => sphere_extinction(),
        2 => sphere_extinction_1d(),
        3 => volume_dissipation(),
        4 => itilde_monotone(),
        5 => round_convergence(),
        6 => affine_ellipse(),
        7 => convexity_preservation(),
        8 => bound_suite(),
        9 => two_route(),
        10 => quadrature_convergence(),
        11 => determinism(),
        _ => unreachable!("criteria are numbered 1 to 11"),
    }
}

/// Runs a suite, printing one line per criterion as it finishes. Returns the
/// verdicts; the caller decides the exit code.
pub fn cmd_verify(name: &str, mut out: impl std::io::Write) -> Result<Vec<Verdict>, CliError> {
    let index = SUITES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| CliError::UnknownSuite(name.to_string()))?;
    let criteria: Vec<usize> = if name == "all" { (1..=11).collect() } else { vec![index + 1] };
    let mut verdicts = Vec::new();
    for c in criteria {
        let v = run_criterion(c);
        writeln!(out, "{v}").map_err(CliError::io("cannot write verdict"))?;
        verdicts.push(v);
    }
    Ok(verdicts)
}
