//! Explicit time stepping of the physical flow `S_t = −K^α` and of the
//! volume-normalised flow `S̃_τ = −K̃^α/η̃ + S̃/(n+1)`.
//!
//! Each step is forward Euler with a step size from [`stable_dt`]; if the
//! result is not strictly convex (or not positive) the step is retried with
//! half the step size, up to [`MAX_HALVINGS`] times. On the 2-sphere every
//! candidate is passed through [`SphereGrid::regularize_poles`], so the step
//! size is governed by the colatitude spacing rather than the shrinking
//! longitude arcs near the poles.
//!
//! [`SphereGrid::regularize_poles`]: crate::sphere::SphereGrid::regularize_poles

use crate::body::{range, SupportField};
use crate::error::{Error, Result};
use crate::par::{map_nodes, weighted_sum};
use crate::rescale;
use crate::Vec3;

pub const DEFAULT_SAFETY: f64 = 0.4;
pub const MAX_HALVINGS: usize = 20;
/// Physical bodies are re-centred once `min S < RECENTER_RATIO · max S`.
pub const RECENTER_RATIO: f64 = 0.1;
pub const DEFAULT_V_MIN_FRACTION: f64 = 1e-4;

/// When a run stops. `t_max`/`tau_end` and `max_steps` produce
/// [`Error::Timeout`] if reached first in a physical run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopCriteria {
    /// Physical runs stop once `V < v_min_fraction · V(0)`.
    pub v_min_fraction: f64,
    pub t_max: f64,
    pub tau_end: f64,
    pub max_steps: usize,
}

impl Default for StopCriteria {
    fn default() -> Self {
        StopCriteria {
            v_min_fraction: DEFAULT_V_MIN_FRACTION,
            t_max: f64::INFINITY,
            tau_end: f64::INFINITY,
            max_steps: 10_000_000,
        }
    }
}

/// `η = Σ w K^{α−1}`.
pub fn eta(body: &SupportField, alpha: f64) -> Result<f64> {
    body.check_convex()?;
    let geo = body.geometry();
    Ok(weighted_sum(body.grid().weights(), |i| geo[i].det.powf(1.0 - alpha)))
}

/// `−K^α` at every node.
pub fn physical_rhs(body: &SupportField, alpha: f64) -> Result<Vec<f64>> {
    body.check_convex()?;
    let geo = body.geometry();
    Ok(map_nodes(geo.len(), |i| -geo[i].det.powf(-alpha)))
}

/// Explicit step bound `safety · Δ² / (2n · max αK^α/λ_min)`, further
/// limited to half the time in which the fastest node would reach `S = 0`.
pub fn stable_dt(body: &SupportField, alpha: f64, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::InvalidParameter(format!("safety must lie in (0, 1], got {safety}")));
    }
    body.check_convex()?;
    let geo = body.geometry();
    let s = body.values();
    let mut stiffness: f64 = 0.0;
    let mut erosion = f64::INFINITY;
    for (g, &si) in geo.iter().zip(s) {
        let k_alpha = g.det.powf(-alpha);
        stiffness = stiffness.max(alpha * k_alpha / g.radius_min);
        erosion = erosion.min(si / k_alpha);
    }
    let h = body.grid().spacing();
    let n = body.dim() as f64;
    let diffusive = if stiffness > 0.0 {
        safety * h * h / (2.0 * n * stiffness)
    } else {
        f64::INFINITY
    };
    Ok(diffusive.min(0.5 * erosion))
}

/// `τ = −log(V/V₀)` for a strictly decreasing volume series.
pub fn tau_of_t(volumes: &[f64]) -> Result<Vec<f64>> {
    let Some(&v0) = volumes.first() else {
        return Ok(Vec::new());
    };
    if !(v0 > 0.0) {
        return Err(Error::InvalidParameter(format!("volume must be positive, got {v0}")));
    }
    for (i, w) in volumes.windows(2).enumerate() {
        if !(w[1] < w[0]) || !(w[1] > 0.0) {
            return Err(Error::NonMonotone { index: i + 1 });
        }
    }
    Ok(volumes.iter().map(|v| -(v / v0).ln()).collect())
}

/// Tries the pole-regularised candidate `update(dt)` with successively
/// halved `dt` until it is positive and strictly convex.
fn euler_with_retries(
    body: &SupportField,
    update: impl Fn(f64) -> Vec<f64>,
    mut dt: f64,
    time: f64,
) -> Result<(SupportField, f64)> {
    for _ in 0..=MAX_HALVINGS {
        let mut values = update(dt);
        body.grid().regularize_poles(&mut values);
        let candidate = body.with_values(values);
        if candidate.min_support().1 > 0.0 && candidate.is_strictly_convex() {
            return Ok((candidate, dt));
        }
        dt *= 0.5;
    }
    Err(Error::StepFailure {
        halvings: MAX_HALVINGS,
        time,
    })
}

/// The body with its unresolved polar modes projected out, so that the
/// projection inside each step acts on the increment only.
fn pole_regular(body: SupportField) -> SupportField {
    let mut values = body.values().to_vec();
    body.grid().regularize_poles(&mut values);
    if values.as_slice() == body.values() {
        body
    } else {
        body.with_values(values)
    }
}

/// State of the physical flow.
#[derive(Clone, Debug)]
pub struct FlowState {
    body: SupportField,
    pub t: f64,
    pub dt_last: f64,
    pub volume: f64,
    pub initial_volume: f64,
    pub step_count: usize,
    pub alpha: f64,
    pub safety: f64,
    /// Accumulated origin translation from re-centring; physical position is
    /// `X + shift`.
    pub shift: Vec3,
}

impl FlowState {
    /// Starts at `t = 0` from `body` with its unresolved polar modes removed.
    pub fn new(body: SupportField, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let body = pole_regular(body);
        body.check_convex()?;
        let volume = body.volume()?;
        Ok(FlowState {
            body,
            t: 0.0,
            dt_last: 0.0,
            volume,
            initial_volume: volume,
            step_count: 0,
            alpha,
            safety: DEFAULT_SAFETY,
            shift: [0.0; 3],
        })
    }

    pub fn with_safety(mut self, safety: f64) -> Result<Self> {
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(Error::InvalidParameter(format!("safety must lie in (0, 1], got {safety}")));
        }
        self.safety = safety;
        Ok(self)
    }

    pub fn body(&self) -> &SupportField {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn tau(&self) -> f64 {
        -(self.volume / self.initial_volume).ln()
    }

    /// One step of at most the stable size.
    pub fn step(&self) -> Result<FlowState> {
        self.advance(f64::INFINITY)
    }

    /// One step of size `min(stable_dt, dt_cap)`, halved as needed.
    pub fn advance(&self, dt_cap: f64) -> Result<FlowState> {
        let body = &self.body;
        let rhs = physical_rhs(body, self.alpha)?;
        let dt = stable_dt(body, self.alpha, self.safety)?.min(dt_cap);
        let s = body.values();
        let (next, dt) = euler_with_retries(
            body,
            |dt| s.iter().zip(&rhs).map(|(s, r)| s + dt * r).collect(),
            dt,
            self.t,
        )?;
        let (lo, hi) = next.support_range();
        let mut shift = self.shift;
        let next = if lo < RECENTER_RATIO * hi {
            let (centred, c) = next.recentered();
            for (a, b) in shift.iter_mut().zip(c) {
                *a += b;
            }
            centred
        } else {
            next
        };
        let volume = next.volume()?;
        Ok(FlowState {
            body: next,
            t: self.t + dt,
            dt_last: dt,
            volume,
            initial_volume: self.initial_volume,
            step_count: self.step_count + 1,
            alpha: self.alpha,
            safety: self.safety,
            shift,
        })
    }
}

/// Functional form of [`FlowState::step`].
pub fn step_physical(state: &FlowState) -> Result<FlowState> {
    state.step()
}

/// Why a physical run ended without error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopReason {
    VolumeThreshold,
    /// Step halving was exhausted, usually just before extinction.
    StepFailure { halvings: usize, time: f64 },
}

#[derive(Clone, Debug)]
pub struct ExtinctionRun {
    pub final_state: FlowState,
    pub reason: StopReason,
    pub t_star_estimate: Option<f64>,
    /// `(t, V)` after every accepted step, starting with the initial state.
    pub history: Vec<(f64, f64)>,
}

/// Least-squares fit of `V^{(1+nα)/(n+1)}` against `t` over the final 10%
/// of the history; the zero of the fitted line.
pub fn estimate_extinction(history: &[(f64, f64)], dim: usize, alpha: f64) -> Option<f64> {
    let n = dim as f64;
    let power = (1.0 + n * alpha) / (n + 1.0);
    let tail = (history.len() / 10).max(3);
    if history.len() < tail {
        return None;
    }
    let pts = &history[history.len() - tail..];
    let m = pts.len() as f64;
    let (mut st, mut sy) = (0.0, 0.0);
    for &(t, v) in pts {
        st += t;
        sy += v.powf(power);
    }
    let (tm, ym) = (st / m, sy / m);
    let (mut stt, mut sty) = (0.0, 0.0);
    for &(t, v) in pts {
        stt += (t - tm) * (t - tm);
        sty += (t - tm) * (v.powf(power) - ym);
    }
    if stt <= 0.0 {
        return None;
    }
    let slope = sty / stt;
    if slope >= 0.0 {
        return None;
    }
    Some(tm - ym / slope)
}

/// Steps until `V < v_min_fraction·V(0)` or step halving fails. `on_sample`
/// sees the initial state, every `sample_interval`-th state and the final
/// state.
pub fn run_to_extinction(
    initial: FlowState,
    stop: &StopCriteria,
    sample_interval: usize,
    mut on_sample: impl FnMut(&FlowState) -> Result<()>,
) -> Result<ExtinctionRun> {
    let interval = sample_interval.max(1);
    let v_min = stop.v_min_fraction * initial.initial_volume;
    let dim = initial.dim();
    let alpha = initial.alpha;
    let mut history = vec![(initial.t, initial.volume)];
    let mut state = initial;
    on_sample(&state)?;
    let reason = loop {
        if state.volume < v_min {
            break StopReason::VolumeThreshold;
        }
        if state.t >= stop.t_max || state.step_count >= stop.max_steps {
            return Err(Error::Timeout {
                time: state.t,
                steps: state.step_count,
            });
        }
        match state.advance(stop.t_max - state.t) {
            Ok(next) => state = next,
            Err(Error::StepFailure { halvings, time }) => break StopReason::StepFailure { halvings, time },
            Err(e) => return Err(e),
        }
        history.push((state.t, state.volume));
        if state.step_count.is_multiple_of(interval) && state.volume >= v_min {
            on_sample(&state)?;
        }
    };
    if !state.step_count.is_multiple_of(interval) || state.volume < v_min {
        on_sample(&state)?;
    }
    let t_star_estimate = estimate_extinction(&history, dim, alpha);
    Ok(ExtinctionRun {
        final_state: state,
        reason,
        t_star_estimate,
        history,
    })
}

/// State of the volume-normalised flow.
#[derive(Clone, Debug)]
pub struct RescaledState {
    body: SupportField,
    pub tau: f64,
    /// `η̃ = Σ w K̃^{α−1}`.
    pub eta: f64,
    pub alpha: f64,
    pub step_count: usize,
    pub dtau_last: f64,
    pub safety: f64,
    /// Physical time reconstructed from `dt = V dτ / η`, assuming the
    /// physical body started with volume `initial_volume`.
    pub t_physical: f64,
    pub initial_volume: f64,
}

impl RescaledState {
    /// Removes unresolved polar modes, re-centres `body`, scales it to unit volume, and records its original
    /// volume as the physical `V(0)`.
    pub fn new(body: SupportField, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let (centred, _) = pole_regular(body).recentered();
        centred.check_convex()?;
        let volume = centred.volume()?;
        let table = rescale::ScalingTable::new(volume, centred.dim(), alpha)?;
        let normalised = table.scale_body(&centred);
        let eta = eta(&normalised, alpha)?;
        let mut state = Self::from_parts(normalised, 0.0, eta, alpha, DEFAULT_SAFETY);
        state.initial_volume = volume;
        Ok(state)
    }

    pub(crate) fn from_parts(body: SupportField, tau: f64, eta: f64, alpha: f64, safety: f64) -> Self {
        RescaledState {
            body,
            tau,
            eta,
            alpha,
            step_count: 0,
            dtau_last: 0.0,
            safety,
            t_physical: 0.0,
            initial_volume: 1.0,
        }
    }

    pub fn with_safety(mut self, safety: f64) -> Result<Self> {
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(Error::InvalidParameter(format!("safety must lie in (0, 1], got {safety}")));
        }
        self.safety = safety;
        Ok(self)
    }

    pub fn body(&self) -> &SupportField {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    /// Physical volume `V(0)e^{−τ}` corresponding to this state.
    pub fn physical_volume(&self) -> f64 {
        self.initial_volume * (-self.tau).exp()
    }

    pub fn step(&self) -> Result<RescaledState> {
        self.advance(f64::INFINITY)
    }

    /// One step of size `min(η̃·stable_dt, dtau_cap)` followed by volume
    /// re-projection.
    pub fn advance(&self, dtau_cap: f64) -> Result<RescaledState> {
        let body = &self.body;
        let n = body.dim() as f64;
        let curvature = physical_rhs(body, self.alpha)?;
        let dtau = (stable_dt(body, self.alpha, self.safety)? * self.eta).min(dtau_cap);
        let s = body.values();
        let inv_eta = 1.0 / self.eta;
        let (next, dtau) = euler_with_retries(
            body,
            |dtau| {
                s.iter()
                    .zip(&curvature)
                    .map(|(s, k)| s + dtau * (k * inv_eta + s / (n + 1.0)))
                    .collect()
            },
            dtau,
            self.tau,
        )?;
        let volume = next.volume()?;
        let next = next.scaled(volume.powf(-1.0 / (n + 1.0)));
        let eta = eta(&next, self.alpha)?;
        let v_phys = self.physical_volume();
        let dt = v_phys.powf((1.0 + n * self.alpha) / (n + 1.0)) * dtau / self.eta;
        Ok(RescaledState {
            body: next,
            tau: self.tau + dtau,
            eta,
            alpha: self.alpha,
            step_count: self.step_count + 1,
            dtau_last: dtau,
            safety: self.safety,
            t_physical: self.t_physical + dt,
            initial_volume: self.initial_volume,
        })
    }
}

/// Functional form of [`RescaledState::step`].
pub fn step_rescaled(state: &RescaledState) -> Result<RescaledState> {
    state.step()
}

/// Steps to `stop.tau_end` exactly. `on_sample` sees the initial state, every
/// `sample_interval`-th state and the final state.
pub fn run_rescaled(
    initial: RescaledState,
    stop: &StopCriteria,
    sample_interval: usize,
    mut on_sample: impl FnMut(&RescaledState) -> Result<()>,
) -> Result<RescaledState> {
    if !stop.tau_end.is_finite() {
        return Err(Error::InvalidParameter("rescaled runs need a finite tau_end".into()));
    }
    let interval = sample_interval.max(1);
    let mut state = initial;
    on_sample(&state)?;
    while state.tau < stop.tau_end {
        if state.step_count >= stop.max_steps {
            return Err(Error::Timeout {
                time: state.tau,
                steps: state.step_count,
            });
        }
        state = state.advance(stop.tau_end - state.tau)?;
        if state.step_count.is_multiple_of(interval) || state.tau >= stop.tau_end {
            on_sample(&state)?;
        }
    }
    Ok(state)
}

/// Normalised view of a physical state; see [`rescale::apply_scaling`].
pub fn rescale_snapshot(state: &FlowState) -> Result<RescaledState> {
    let mut rescaled = rescale::apply_scaling(state)?;
    rescaled.t_physical = state.t;
    rescaled.initial_volume = state.initial_volume;
    Ok(rescaled)
}

/// One row of the trajectory CSV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub step: usize,
    pub t: f64,
    pub tau: f64,
    pub volume: f64,
    pub area: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub h_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub dt: f64,
}

impl TrajectoryRow {
    pub const CSV_HEADER: &'static str = "step,t,tau,V,A,Kmin,Kmax,Hmax,Smin,Smax,wmin,wmax,dt";

    fn measure(body: &SupportField, step: usize, t: f64, tau: f64, volume: f64, dt: f64) -> Result<Self> {
        let curv = body.curvature_summary()?;
        let (s_min, s_max) = body.support_range();
        let (w_min, w_max) = body.width_extremes();
        Ok(TrajectoryRow {
            step,
            t,
            tau,
            volume,
            area: body.area()?,
            k_min: curv.gauss_range.0,
            k_max: curv.gauss_range.1,
            h_max: range(&curv.mean).1,
            s_min,
            s_max,
            w_min,
            w_max,
            dt,
        })
    }

    pub fn physical(state: &FlowState) -> Result<Self> {
        Self::measure(&state.body, state.step_count, state.t, state.tau(), state.volume, state.dt_last)
    }

    /// Row for a rescaled state; `t` is the reconstructed physical time and
    /// `dt` the last τ-step.
    pub fn rescaled(state: &RescaledState) -> Result<Self> {
        Self::measure(
            &state.body,
            state.step_count,
            state.t_physical,
            state.tau,
            state.body.volume()?,
            state.dtau_last,
        )
    }

    /// Comma-separated values in header order, full round-trip precision.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.step,
            self.t,
            self.tau,
            self.volume,
            self.area,
            self.k_min,
            self.k_max,
            self.h_max,
            self.s_min,
            self.s_max,
            self.w_min,
            self.w_max,
            self.dt
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{make_body, BodySpec, Mode};
    use crate::sphere::SphereGrid;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn circle(n: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::circle(n).unwrap())
    }

    fn sphere(nt: usize, np: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::sphere(nt, np).unwrap())
    }

    fn ball(r: f64, grid: Arc<SphereGrid>) -> SupportField {
        make_body(&BodySpec::Sphere { radius: r }, grid).unwrap()
    }

    #[test]
    fn eta_on_spheres() {
        assert!((eta(&ball(1.0, circle(64)), 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((eta(&ball(1.0, sphere(16, 32)), 0.5).unwrap() - 4.0 * PI).abs() < 1e-12);
        let b = ball(2.0, sphere(16, 32));
        assert!((eta(&b, 1.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!((eta(&b, 0.5).unwrap() - 8.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn rhs_values() {
        let rhs = physical_rhs(&ball(2.0, sphere(8, 16)), 0.75).unwrap();
        assert!(rhs.iter().all(|r| (r + 2f64.powf(-1.5)).abs() < 1e-14));
        let rhs = physical_rhs(&ball(2.0, circle(16)), 0.0).unwrap();
        assert!(rhs.iter().all(|&r| r == -1.0));
        let ellipse = make_body(&BodySpec::Ellipsoid { radii: vec![2.0, 1.0] }, circle(512)).unwrap();
        let rhs = physical_rhs(&ellipse, 1.0).unwrap();
        assert!((rhs[0] + 2.0).abs() < 1e-3);
    }

    #[test]
    fn stable_dt_formula() {
        let b = ball(1.0, circle(256));
        let dt = stable_dt(&b, 1.0, 0.5).unwrap();
        let h = 2.0 * PI / 256.0;
        assert!((dt - 0.5 * h * h / 2.0).abs() < 1e-15);
        assert!((dt - 1.506e-4).abs() < 1e-7);
        let fine = stable_dt(&ball(1.0, circle(512)), 1.0, 0.5).unwrap();
        assert!((dt / fine - 4.0).abs() < 1e-12);
        assert!(stable_dt(&b, 1.0, 0.0).is_err());
        assert!(stable_dt(&b, 1.0, 1.5).is_err());
    }

    #[test]
    fn constant_fields_stay_constant() {
        let state = FlowState::new(ball(1.3, sphere(16, 32)), 1.0).unwrap();
        let next = state.step().unwrap();
        let expected = 1.3 - next.dt_last * 1.3f64.powi(-2);
        for s in next.body().values() {
            assert!((s - expected).abs() < 1e-14);
        }
        assert!(next.volume < state.volume);
        assert_eq!(next.step_count, 1);
    }

    #[test]
    fn halving_exhaustion_is_step_failure() {
        let state = FlowState::new(ball(1.0, circle(64)), 1.0).unwrap();
        let err = euler_with_retries(state.body(), |_| vec![-1.0; 64], 1.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::StepFailure { halvings: MAX_HALVINGS, .. }));
    }

    #[test]
    fn circle_extinction_time() {
        let state = FlowState::new(ball(1.0, circle(64)), 1.0).unwrap();
        let run = run_to_extinction(state, &StopCriteria::default(), 100, |_| Ok(())).unwrap();
        assert_eq!(run.reason, StopReason::VolumeThreshold);
        let t_star = run.t_star_estimate.unwrap();
        assert!((t_star - 0.5).abs() < 1e-3, "{t_star}");
        for w in run.history.windows(2) {
            assert!(w[1].1 < w[0].1);
        }
    }

    #[test]
    fn timeout() {
        let state = FlowState::new(ball(1.0, circle(32)), 1.0).unwrap();
        let stop = StopCriteria {
            max_steps: 5,
            ..StopCriteria::default()
        };
        assert!(matches!(
            run_to_extinction(state, &stop, 1, |_| Ok(())),
            Err(Error::Timeout { steps: 5, .. })
        ));
    }

    #[test]
    fn tau_reparameterisation() {
        let tau = tau_of_t(&[2.0, 2.0 / std::f64::consts::E]).unwrap();
        assert_eq!(tau[0], 0.0);
        assert!((tau[1] - 1.0).abs() < 1e-15);
        assert!(matches!(tau_of_t(&[1.0, 0.5, 0.5]), Err(Error::NonMonotone { index: 2 })));
        let t: Vec<f64> = (0..10).map(|i| 0.03 * i as f64).collect();
        let v: Vec<f64> = t.iter().map(|t| 1.0 - 3.0 * t).collect();
        for (tau, t) in tau_of_t(&v).unwrap().iter().zip(&t) {
            assert!((tau + (1.0 - 3.0 * t).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn rescaled_sphere_is_fixed() {
        let state = RescaledState::new(ball(1.7, sphere(16, 32)), 0.8).unwrap();
        let first = state.body().values().to_vec();
        let mut s = state;
        for _ in 0..10 {
            s = s.step().unwrap();
        }
        for (a, b) in s.body().values().iter().zip(&first) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((s.body().volume().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rescaled_run_lands_on_tau_end() {
        let spec = BodySpec::PerturbedSphere {
            radius: 1.0,
            modes: vec![Mode { degree: 2, order: 0, amplitude: 0.05 }],
        };
        let body = make_body(&spec, circle(64)).unwrap();
        let stop = StopCriteria {
            tau_end: 0.25,
            ..StopCriteria::default()
        };
        let mut taus = Vec::new();
        let end = run_rescaled(RescaledState::new(body, 1.0).unwrap(), &stop, 10, |s| {
            taus.push(s.tau);
            Ok(())
        })
        .unwrap();
        assert_eq!(end.tau, 0.25);
        assert_eq!(*taus.last().unwrap(), 0.25);
        assert!((end.body().volume().unwrap() - 1.0).abs() < 1e-9);
        assert!(end.eta > 0.0);
    }

    #[test]
    fn reconstructed_time_matches_sphere_law() {
        // Unit circle, α = 1: V = πr², r² = 1 − 2t, so t = (1 − e^{−τ})/2.
        let state = RescaledState::new(ball(1.0, circle(64)), 1.0).unwrap();
        let stop = StopCriteria {
            tau_end: 1.0,
            ..StopCriteria::default()
        };
        let end = run_rescaled(state, &stop, 1000, |_| Ok(())).unwrap();
        let expected = 0.5 * (1.0 - (-1.0f64).exp());
        assert!((end.t_physical - expected).abs() < 1e-3, "{}", end.t_physical);
    }

    #[test]
    fn csv_row_shape() {
        let state = FlowState::new(ball(1.0, circle(16)), 1.0).unwrap();
        let row = TrajectoryRow::physical(&state).unwrap();
        assert_eq!(row.to_csv().split(',').count(), TrajectoryRow::CSV_HEADER.split(',').count());
    }
}
