//! Quantities monitored along normalised runs: the monotone integral
//! `Ĩ`, pinching, distance from self-similarity, and a priori curvature
//! bounds.

use crate::body::SupportField;
use crate::error::{Error, Result};
use crate::flow::{rescale_snapshot, FlowState, RescaledState};
use crate::par::weighted_sum;

/// Tolerance on `|Ṽ − 1|` accepted by [`Monitor`].
pub const NORMALIZATION_TOL: f64 = 1e-6;
/// Multiplicative slack of the envelope check.
pub const ENVELOPE_SLACK: f64 = 1.1;
/// Relative rounding allowance in the sup-bound comparisons.
const BOUND_RTOL: f64 = 1e-9;

/// `(Σ w S^{1−1/α})^{sgn(α−1)}` for `α ≠ 1`, `Σ w log S` for `α = 1`.
///
/// The functional is meant for unit-volume bodies, but nothing here
/// enforces that; [`Monitor`] normalises before calling it.
pub fn integral_quantity(body: &SupportField, alpha: f64) -> Result<f64> {
    let (node, value) = body.min_support();
    if !(value > 0.0) {
        return Err(Error::NonPositiveSupport { node, value });
    }
    let s = body.values();
    let w = body.grid().weights();
    if alpha == 1.0 {
        return Ok(weighted_sum(w, |i| s[i].ln()));
    }
    let p = 1.0 - 1.0 / alpha;
    let integral = weighted_sum(w, |i| s[i].powf(p));
    Ok(if alpha > 1.0 { integral } else { 1.0 / integral })
}

/// Best `C` in `K^α ≈ C S` (weighted least squares) and the relative
/// weighted-L² residual `‖K^α − C S‖ / ‖K^α‖`.
pub fn self_similar_residual(body: &SupportField, alpha: f64) -> Result<(f64, f64)> {
    body.check_convex()?;
    let geo = body.geometry();
    let s = body.values();
    let w = body.grid().weights();
    let ka: Vec<f64> = geo.iter().map(|g| g.det.powf(-alpha)).collect();
    let ks = weighted_sum(w, |i| ka[i] * s[i]);
    let ss = weighted_sum(w, |i| s[i] * s[i]);
    let kk = weighted_sum(w, |i| ka[i] * ka[i]);
    let c = ks / ss;
    let r2 = weighted_sum(w, |i| (ka[i] - c * s[i]).powi(2));
    Ok((c, (r2 / kk).sqrt()))
}

/// Global `λ_max / λ_min` of the principal curvatures.
pub fn pinching(summary: &crate::body::CurvatureSummary) -> f64 {
    summary.lambda_range.1 / summary.lambda_range.0
}

/// `max |S_a − S_b| / max S_b`.
pub fn shape_distance(a: &SupportField, b: &SupportField) -> Result<f64> {
    if a.grid().resolution() != b.grid().resolution() {
        return Err(Error::GridMismatch);
    }
    let diff = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(diff / b.support_range().1)
}

/// Outcome of each monitored a priori bound. `radii_sum` is `None` when `α`
/// lies outside `[1/n, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundFlags {
    /// Physical `sup K^α ≤ max(sup K^α(0), ((nα+1)/(nαρ₀))^{nα})`,
    /// `ρ₀ = ½ r_in`.
    pub curvature: bool,
    /// Physical `sup ℋ ≤ max(sup (nα−1)/α · K^{−1/n}, sup ℋ(0))`.
    pub radii_sum: Option<bool>,
    /// Normalised `sup K̃^α ≤ max(sup K̃^α(0), ((nα+1)/(nαρ̃₀))^{nα})`,
    /// `ρ̃₀ = ¼ w̃_min`.
    pub rescaled_curvature: bool,
    /// `S̃`, `η̃`, `K̃` within the first record's range widened by
    /// [`ENVELOPE_SLACK`].
    pub envelope: bool,
}

impl BoundFlags {
    pub const NAMES: [&'static str; 4] = ["curvature_bound", "radii_sum_bound", "rescaled_curvature_bound", "envelope_bound"];

    pub fn all_pass(&self) -> bool {
        self.curvature && self.radii_sum.unwrap_or(true) && self.rescaled_curvature && self.envelope
    }

    pub fn as_array(&self) -> [Option<bool>; 4] {
        [Some(self.curvature), self.radii_sum, Some(self.rescaled_curvature), Some(self.envelope)]
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + BOUND_RTOL)
}

/// Quantities of a normalised body that the bounds need.
#[derive(Clone, Copy, Debug)]
struct Measured {
    k_range: (f64, f64),
    reverse_trace_max: f64,
    s_range: (f64, f64),
    w_min: f64,
    r_in: f64,
    eta: f64,
}

impl Measured {
    fn of(body: &SupportField, eta: f64) -> Result<Self> {
        let summary = body.curvature_summary()?;
        let (r_in, _) = body.radii()?;
        Ok(Measured {
            k_range: summary.gauss_range,
            reverse_trace_max: summary.reverse_trace_range.1,
            s_range: body.support_range(),
            w_min: body.width_extremes().0,
            r_in,
            eta,
        })
    }
}

/// Initial data for [`bound_suite`], taken from the first record of a run.
#[derive(Clone, Copy, Debug)]
pub struct BoundContext {
    pub alpha: f64,
    pub dim: usize,
    initial: Measured,
    /// Physical length of the initial normalised body: `V(0)^{1/(n+1)}`.
    initial_scale: f64,
}

impl BoundContext {
    /// `body` is the normalised body, `length_scale = V^{1/(n+1)}` converts
    /// its lengths to physical ones.
    pub fn new(body: &SupportField, eta: f64, alpha: f64, length_scale: f64) -> Result<Self> {
        Ok(BoundContext {
            alpha,
            dim: body.dim(),
            initial: Measured::of(body, eta)?,
            initial_scale: length_scale,
        })
    }

    fn radii_sum_evaluated(&self) -> bool {
        let n = self.dim as f64;
        self.alpha >= 1.0 / n - 1e-12 && self.alpha <= 1.0
    }
}

fn curvature_cap(n: f64, alpha: f64, rho: f64) -> f64 {
    ((n * alpha + 1.0) / (n * alpha * rho)).powf(n * alpha)
}

fn evaluate_bounds(ctx: &BoundContext, m: &Measured, length_scale: f64) -> BoundFlags {
    let n = ctx.dim as f64;
    let a = ctx.alpha;
    let init = &ctx.initial;
    // Physical K = ℓ^{-n} K̃, ℋ = ℓ ℋ̃, r_in = ℓ r̃_in.
    let phys_k0 = init.k_range.1 * ctx.initial_scale.powf(-n);
    let phys_k = m.k_range.1 * length_scale.powf(-n);
    let rho = 0.5 * m.r_in * length_scale;
    let curvature = le(phys_k.powf(a), phys_k0.powf(a).max(curvature_cap(n, a, rho)));

    let radii_sum = ctx.radii_sum_evaluated().then(|| {
        let phys_h0 = init.reverse_trace_max * ctx.initial_scale;
        let phys_h = m.reverse_trace_max * length_scale;
        let k_inv_root = m.k_range.0.powf(-1.0 / n) * length_scale;
        le(phys_h, ((n * a - 1.0) / a * k_inv_root).max(phys_h0))
    });

    let rho_tilde = 0.25 * m.w_min;
    let rescaled_curvature = le(
        m.k_range.1.powf(a),
        init.k_range.1.powf(a).max(curvature_cap(n, a, rho_tilde)),
    );

    let inside = |lo: f64, hi: f64, (rlo, rhi): (f64, f64)| lo >= rlo / ENVELOPE_SLACK && hi <= rhi * ENVELOPE_SLACK;
    let envelope = inside(m.s_range.0, m.s_range.1, init.s_range)
        && inside(m.eta, m.eta, (init.eta, init.eta))
        && inside(m.k_range.0, m.k_range.1, init.k_range);

    BoundFlags {
        curvature,
        radii_sum,
        rescaled_curvature,
        envelope,
    }
}

/// Evaluates every bound for a normalised body with physical length scale
/// `length_scale`.
pub fn bound_suite(ctx: &BoundContext, body: &SupportField, eta: f64, length_scale: f64) -> Result<BoundFlags> {
    Ok(evaluate_bounds(ctx, &Measured::of(body, eta)?, length_scale))
}

/// Diagnostics of one sample of a normalised run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub tau: f64,
    pub itilde: f64,
    /// Difference quotient against the previous record; `None` for the first.
    pub ditilde_dtau: Option<f64>,
    pub pinching: f64,
    pub residual: f64,
    pub c_best: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub eta: f64,
    pub k_min: f64,
    pub k_max: f64,
    /// Largest node Frobenius norm of `∇̄²S̃`.
    pub hess_sup: f64,
    pub flags: BoundFlags,
}

impl DiagnosticsRecord {
    pub fn csv_header() -> String {
        let mut h = String::from("tau,Itilde,dItilde_dtau,pinching,residual,C_best,wmin,wmax,eta,Kmin,Kmax,hessSup");
        for name in BoundFlags::NAMES {
            h.push(',');
            h.push_str(name);
        }
        h
    }

    pub fn to_csv(&self) -> String {
        let slope = self.ditilde_dtau.map_or_else(|| "NA".to_string(), |d| format!("{d:e}"));
        let mut line = format!(
            "{:e},{:e},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.tau,
            self.itilde,
            slope,
            self.pinching,
            self.residual,
            self.c_best,
            self.w_min,
            self.w_max,
            self.eta,
            self.k_min,
            self.k_max,
            self.hess_sup
        );
        for flag in self.flags.as_array() {
            line.push_str(match flag {
                Some(true) => ",1",
                Some(false) => ",0",
                None => ",NA",
            });
        }
        line
    }
}

/// Result of [`monotonicity_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    /// `ΔĨ/Δτ` per consecutive pair.
    pub slopes: Vec<f64>,
    /// Largest positive slope, or 0.
    pub max_excursion: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `ΔĨ/Δτ ≤ 1e-6·|Ĩ(0)| + 1e-10` over records sorted by `τ`.
pub fn monotonicity_report(records: &[DiagnosticsRecord]) -> Result<MonotonicityReport> {
    for (i, w) in records.windows(2).enumerate() {
        if !(w[1].tau > w[0].tau) {
            return Err(Error::Precondition(format!(
                "records must be sorted by increasing tau (index {})",
                i + 1
            )));
        }
    }
    let slopes: Vec<f64> = records
        .windows(2)
        .map(|w| (w[1].itilde - w[0].itilde) / (w[1].tau - w[0].tau))
        .collect();
    let tolerance = records.first().map_or(0.0, |r| 1e-6 * r.itilde.abs()) + 1e-10;
    let max_excursion = slopes.iter().copied().fold(0.0, f64::max);
    Ok(MonotonicityReport {
        pass: max_excursion <= tolerance,
        slopes,
        max_excursion,
        tolerance,
    })
}

/// Relative growth of the running maximum of `hessSup` over the second half
/// of the `τ` range: `max_all / max_{τ ≤ τ_mid} − 1`.
pub fn hess_sup_growth(records: &[DiagnosticsRecord]) -> f64 {
    let (Some(first), Some(last)) = (records.first(), records.last()) else {
        return 0.0;
    };
    let mid = 0.5 * (first.tau + last.tau);
    let early = records
        .iter()
        .filter(|r| r.tau <= mid)
        .map(|r| r.hess_sup)
        .fold(0.0, f64::max);
    let all = records.iter().map(|r| r.hess_sup).fold(0.0, f64::max);
    all / early - 1.0
}

/// Accumulates [`DiagnosticsRecord`]s along one run.
#[derive(Clone, Debug)]
pub struct Monitor {
    alpha: f64,
    context: Option<BoundContext>,
    records: Vec<DiagnosticsRecord>,
}

impl Monitor {
    pub fn new(alpha: f64) -> Self {
        Monitor {
            alpha,
            context: None,
            records: Vec::new(),
        }
    }

    pub fn records(&self) -> &[DiagnosticsRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<DiagnosticsRecord> {
        self.records
    }

    pub fn context(&self) -> Option<&BoundContext> {
        self.context.as_ref()
    }

    pub fn monotonicity(&self) -> Result<MonotonicityReport> {
        monotonicity_report(&self.records)
    }

    /// Records a physical state through its normalised view.
    pub fn observe_physical(&mut self, state: &FlowState) -> Result<DiagnosticsRecord> {
        self.observe(&rescale_snapshot(state)?)
    }

    /// Records a normalised state. The body is re-centred and rescaled to
    /// unit volume before anything is measured.
    pub fn observe(&mut self, state: &RescaledState) -> Result<DiagnosticsRecord> {
        let n = state.dim() as f64;
        let volume = state.body().volume()?;
        if (volume - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { volume });
        }
        let (centred, _) = state.body().recentered();
        let body = centred.scaled(centred.volume()?.powf(-1.0 / (n + 1.0)));
        let length_scale = state.physical_volume().powf(1.0 / (n + 1.0));

        let summary = body.curvature_summary()?;
        let measured = Measured {
            k_range: summary.gauss_range,
            reverse_trace_max: summary.reverse_trace_range.1,
            s_range: body.support_range(),
            w_min: body.width_extremes().0,
            r_in: body.support_range().0,
            eta: state.eta,
        };
        if self.context.is_none() {
            self.context = Some(BoundContext {
                alpha: self.alpha,
                dim: body.dim(),
                initial: measured,
                initial_scale: length_scale,
            });
        }
        let ctx = self.context.as_ref().expect("context set above");

        let itilde = integral_quantity(&body, self.alpha)?;
        let (c_best, residual) = self_similar_residual(&body, self.alpha)?;
        let hess_sup = body
            .geometry()
            .iter()
            .map(|g| g.hessian.frobenius())
            .fold(0.0, f64::max);
        let ditilde_dtau = self
            .records
            .last()
            .filter(|prev| state.tau > prev.tau)
            .map(|prev| (itilde - prev.itilde) / (state.tau - prev.tau));
        let (w_min, w_max) = body.width_extremes();
        let record = DiagnosticsRecord {
            tau: state.tau,
            itilde,
            ditilde_dtau,
            pinching: pinching(&summary),
            residual,
            c_best,
            w_min,
            w_max,
            s_min: measured.s_range.0,
            s_max: measured.s_range.1,
            eta: state.eta,
            k_min: summary.gauss_range.0,
            k_max: summary.gauss_range.1,
            hess_sup,
            flags: evaluate_bounds(ctx, &measured, length_scale),
        };
        self.records.push(record);
        Ok(record)
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

    fn unit_volume(body: SupportField) -> SupportField {
        let v = body.volume().unwrap();
        body.scaled(v.powf(-1.0 / (body.dim() as f64 + 1.0)))
    }

    #[test]
    fn integral_quantity_constants() {
        let one = make_body(&BodySpec::Sphere { radius: 1.0 }, circle(64)).unwrap();
        assert!(integral_quantity(&one, 1.0).unwrap().abs() < 1e-15);
        assert!((integral_quantity(&one, 0.5).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!(integral_quantity(&one, 2.0).unwrap() > 0.0);
    }

    #[test]
    fn residual_and_pinching_of_spheres() {
        let grid = Arc::new(SphereGrid::sphere(16, 32).unwrap());
        let ball = unit_volume(make_body(&BodySpec::Sphere { radius: 1.0 }, grid).unwrap());
        let r = ball.values()[0];
        for alpha in [0.3, 1.0, 1.7] {
            let (c, res) = self_similar_residual(&ball, alpha).unwrap();
            assert!(res < 1e-14);
            assert!((c - r.powf(-2.0 * alpha - 1.0)).abs() / c < 1e-12);
        }
        assert!((pinching(&ball.curvature_summary().unwrap()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ellipse_residual_and_pinching() {
        let e = make_body(&BodySpec::Ellipsoid { radii: vec![2.0, 1.0] }, circle(512)).unwrap();
        let e = unit_volume(e);
        assert!(self_similar_residual(&e, 1.0).unwrap().1 > 0.05);
        assert!(self_similar_residual(&e, 1.0 / 3.0).unwrap().1 < 1e-3);
        let p = pinching(&e.curvature_summary().unwrap());
        assert!((p - 8.0).abs() / 8.0 < 5e-4, "{p}");
    }

    #[test]
    fn shape_distance_basics() {
        let grid = Arc::new(SphereGrid::sphere(16, 32).unwrap());
        let a = make_body(&BodySpec::Sphere { radius: 1.0 }, grid.clone()).unwrap();
        assert_eq!(shape_distance(&a, &a).unwrap(), 0.0);
        let moved = a.translated([0.1, 0.2, -0.1]).recentered().0;
        assert!(shape_distance(&moved, &a).unwrap() < 1e-8);
        let other = make_body(&BodySpec::Sphere { radius: 1.0 }, circle(32)).unwrap();
        assert!(matches!(shape_distance(&a, &other), Err(Error::GridMismatch)));
    }

    #[test]
    fn sphere_curvature_bound_value() {
        let grid = Arc::new(SphereGrid::sphere(16, 32).unwrap());
        let ball = make_body(&BodySpec::Sphere { radius: 1.0 }, grid).unwrap();
        assert!((curvature_cap(2.0, 1.0, 0.5) - 9.0).abs() < 1e-12);
        let state = RescaledState::new(ball, 1.0).unwrap();
        let mut monitor = Monitor::new(1.0);
        let rec = monitor.observe(&state).unwrap();
        assert!(rec.flags.all_pass());
        assert_eq!(rec.flags.radii_sum, Some(true));
        assert!(rec.ditilde_dtau.is_none());
    }

    #[test]
    fn radii_sum_flag_range() {
        let body = make_body(&BodySpec::Sphere { radius: 1.0 }, circle(32)).unwrap();
        let mut low = Monitor::new(0.5);
        assert_eq!(low.observe(&RescaledState::new(body.clone(), 0.5).unwrap()).unwrap().flags.radii_sum, None);
        // α = 1/n: the coefficient vanishes and the bound is sup ℋ(0).
        let mut edge = Monitor::new(1.0);
        assert_eq!(edge.observe(&RescaledState::new(body, 1.0).unwrap()).unwrap().flags.radii_sum, Some(true));
    }

    #[test]
    fn monotonicity_on_fixed_point_and_reversal() {
        let grid = Arc::new(SphereGrid::sphere(16, 32).unwrap());
        let ball = make_body(&BodySpec::Sphere { radius: 1.0 }, grid).unwrap();
        let mut state = RescaledState::new(ball, 0.7).unwrap();
        let mut monitor = Monitor::new(0.7);
        for _ in 0..5 {
            monitor.observe(&state).unwrap();
            state = state.step().unwrap();
        }
        let report = monitor.monotonicity().unwrap();
        assert!(report.pass);
        assert!(report.slopes.iter().all(|s| s.abs() < 1e-10));
        let mut reversed = monitor.records().to_vec();
        reversed.reverse();
        assert!(matches!(monotonicity_report(&reversed), Err(Error::Precondition(_))));
    }

    #[test]
    fn monitor_rejects_unnormalised_bodies() {
        let body = make_body(&BodySpec::Sphere { radius: 2.0 }, circle(32)).unwrap();
        let state = RescaledState::from_parts(body, 0.0, 2.0 * PI, 1.0, 0.4);
        let mut monitor = Monitor::new(1.0);
        assert!(matches!(monitor.observe(&state), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn perturbed_circle_itilde_decreases() {
        let spec = BodySpec::PerturbedSphere {
            radius: 1.0,
            modes: vec![Mode { degree: 2, order: 0, amplitude: 0.08 }, Mode { degree: 4, order: -4, amplitude: 0.01 }],
        };
        let body = make_body(&spec, circle(128)).unwrap();
        let mut state = RescaledState::new(body, 1.0).unwrap();
        let mut monitor = Monitor::new(1.0);
        for _ in 0..40 {
            monitor.observe(&state).unwrap();
            for _ in 0..20 {
                state = state.step().unwrap();
            }
        }
        let report = monitor.monotonicity().unwrap();
        assert!(report.pass, "{}", report.max_excursion);
        assert!(monitor.records().iter().all(|r| r.flags.all_pass()));
    }
}
