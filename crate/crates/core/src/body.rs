//! Convex bodies represented by their support function on a [`SphereGrid`],
//! and the static geometry derived from it.
//!
//! With `S` the support function, the principal radii matrix is
//! `h = ∇̄²S + S ḡ`; its eigenvalues are the radii of curvature, so the Gauss
//! curvature is `K = 1/det h` and the embedding is `X(z) = S(z) z + ∇̄S(z)`.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics;
use crate::par::{map_nodes, weighted_sum};
use crate::sphere::{Resolution, SphereGrid, TangentTensor};
use crate::{dot, Vec3};

/// Relative convexity tolerance: radii eigenvalues must exceed
/// `CONVEXITY_EPS · (max S)²`.
pub const CONVEXITY_EPS: f64 = 1e-10;

/// Snapshot schema version written by [`Snapshot`].
pub const SNAPSHOT_VERSION: u32 = 1;

/// One perturbation mode of [`BodySpec::PerturbedSphere`]; see
/// [`harmonics::eval`] for the meaning of `degree` and `order`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub degree: u32,
    pub order: i32,
    pub amplitude: f64,
}

/// Analytic description of an initial body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Sphere { radius: f64 },
    /// Axis-aligned ellipsoid with semi-axes `radii`, `S² = Σ rᵢ² zᵢ²`.
    Ellipsoid { radii: Vec<f64> },
    /// `S = radius + Σ amplitude · Y_mode`.
    PerturbedSphere { radius: f64, modes: Vec<Mode> },
}

impl BodySpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            BodySpec::Sphere { radius } => positive(*radius, "radius"),
            BodySpec::Ellipsoid { radii } => {
                if radii.len() != dim + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "ellipsoid in dimension {dim} needs {} radii, got {}",
                        dim + 1,
                        radii.len()
                    )));
                }
                radii.iter().try_for_each(|r| positive(*r, "ellipsoid radius"))
            }
            BodySpec::PerturbedSphere { radius, modes } => {
                positive(*radius, "radius")?;
                for m in modes {
                    harmonics::validate(dim, m.degree, m.order)?;
                    if !m.amplitude.is_finite() {
                        return Err(Error::InvalidParameter("non-finite amplitude".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Support function value at a unit normal.
    pub fn support_at(&self, dim: usize, z: &Vec3) -> f64 {
        match self {
            BodySpec::Sphere { radius } => *radius,
            BodySpec::Ellipsoid { radii } => radii
                .iter()
                .zip(z.iter())
                .map(|(r, c)| r * r * c * c)
                .sum::<f64>()
                .sqrt(),
            BodySpec::PerturbedSphere { radius, modes } => {
                radius
                    + modes
                        .iter()
                        .map(|m| m.amplitude * harmonics::eval(dim, m.degree, m.order, z))
                        .sum::<f64>()
            }
        }
    }
}

/// Per-node derived geometry of a support field.
#[derive(Clone, Copy, Debug, Default)]
pub struct NodeGeometry {
    /// Covariant Hessian `∇̄²S`.
    pub hessian: TangentTensor,
    /// Principal radii matrix `∇̄²S + S ḡ`.
    pub radii: TangentTensor,
    pub radius_min: f64,
    pub radius_max: f64,
    /// `det(∇̄²S + S ḡ)`, the reciprocal Gauss curvature.
    pub det: f64,
}

/// Support function sampled on a grid; the only geometric state of a body.
#[derive(Clone, Debug)]
pub struct SupportField {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
    label: String,
    geometry: OnceLock<Arc<Vec<NodeGeometry>>>,
}

/// Curvature quantities at every node plus their global extremes.
#[derive(Clone, Debug)]
pub struct CurvatureSummary {
    pub radii_matrix: Vec<TangentTensor>,
    pub gauss: Vec<f64>,
    pub mean: Vec<f64>,
    /// `ℋ = Σ 1/λᵢ`, the sum of principal radii.
    pub reverse_trace: Vec<f64>,
    /// `|A|² = Σ λᵢ²`.
    pub norm_squared: Vec<f64>,
    pub lambda_min: Vec<f64>,
    pub lambda_max: Vec<f64>,
    pub gauss_range: (f64, f64),
    pub mean_range: (f64, f64),
    pub reverse_trace_range: (f64, f64),
    pub lambda_range: (f64, f64),
}

pub(crate) fn range(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

impl SupportField {
    /// Wraps nodal values. If some value is not positive the body is
    /// re-centred at its embedding centroid; if that does not help the
    /// field is rejected.
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let field = Self::from_parts(grid, values, label.into());
        if field.min_support().1 > 0.0 {
            return Ok(field);
        }
        let (centred, _) = field.recentered();
        let (node, value) = centred.min_support();
        if value > 0.0 {
            Ok(centred)
        } else {
            Err(Error::NonPositiveSupport { node, value })
        }
    }

    pub(crate) fn from_parts(grid: Arc<SphereGrid>, values: Vec<f64>, label: String) -> Self {
        SupportField {
            grid,
            values,
            label,
            geometry: OnceLock::new(),
        }
    }

    /// Same grid and label, new values. No positivity check.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        Self::from_parts(self.grid.clone(), values, self.label.clone())
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Dimension `n` of the hypersurface (1 for curves, 2 for surfaces).
    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Node index and value of the smallest support value.
    pub fn min_support(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc })
    }

    pub fn support_range(&self) -> (f64, f64) {
        range(&self.values)
    }

    /// Per-node derivatives and radii matrix; computed once and cached.
    pub fn geometry(&self) -> &[NodeGeometry] {
        self.geometry.get_or_init(|| {
            let grid = &self.grid;
            let s = &self.values;
            let dim = grid.dim();
            Arc::new(map_nodes(grid.len(), |i| {
                let hessian = grid.hessian_at(s, i);
                if dim == 1 {
                    let h = hessian.tt + s[i];
                    NodeGeometry {
                        hessian,
                        radii: TangentTensor { tt: h, tp: 0.0, pp: 0.0 },
                        radius_min: h,
                        radius_max: h,
                        det: h,
                    }
                } else {
                    let radii = TangentTensor {
                        tt: hessian.tt + s[i],
                        tp: hessian.tp,
                        pp: hessian.pp + s[i],
                    };
                    let mean = 0.5 * (radii.tt + radii.pp);
                    let half_gap = (0.25 * (radii.tt - radii.pp).powi(2) + radii.tp * radii.tp).sqrt();
                    NodeGeometry {
                        hessian,
                        radii,
                        radius_min: mean - half_gap,
                        radius_max: mean + half_gap,
                        det: radii.tt * radii.pp - radii.tp * radii.tp,
                    }
                }
            }))
        })
    }

    pub fn convexity_threshold(&self) -> f64 {
        let smax = self.support_range().1;
        CONVEXITY_EPS * smax * smax
    }

    /// Fails with the worst node if any radii eigenvalue is at or below the
    /// convexity threshold.
    pub fn check_convex(&self) -> Result<()> {
        let eps = self.convexity_threshold();
        let (node, eigenvalue) = self
            .geometry()
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, g)| {
                if g.radius_min < acc.1 || g.radius_min.is_nan() {
                    (i, g.radius_min)
                } else {
                    acc
                }
            });
        if eigenvalue > eps {
            Ok(())
        } else {
            Err(Error::NonConvex { node, eigenvalue })
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.check_convex().is_ok()
    }

    /// Gauss, mean and principal curvatures at every node.
    pub fn curvature_summary(&self) -> Result<CurvatureSummary> {
        self.check_convex()?;
        let geo = self.geometry();
        let n = geo.len();
        let mut summary = CurvatureSummary {
            radii_matrix: Vec::with_capacity(n),
            gauss: Vec::with_capacity(n),
            mean: Vec::with_capacity(n),
            reverse_trace: Vec::with_capacity(n),
            norm_squared: Vec::with_capacity(n),
            lambda_min: Vec::with_capacity(n),
            lambda_max: Vec::with_capacity(n),
            gauss_range: (0.0, 0.0),
            mean_range: (0.0, 0.0),
            reverse_trace_range: (0.0, 0.0),
            lambda_range: (0.0, 0.0),
        };
        let dim = self.dim();
        for g in geo {
            let (kmin, kmax) = (1.0 / g.radius_max, 1.0 / g.radius_min);
            summary.radii_matrix.push(g.radii);
            summary.gauss.push(1.0 / g.det);
            if dim == 1 {
                summary.mean.push(kmin);
                summary.reverse_trace.push(g.radius_min);
                summary.norm_squared.push(kmin * kmin);
            } else {
                summary.mean.push(kmin + kmax);
                summary.reverse_trace.push(g.radius_min + g.radius_max);
                summary.norm_squared.push(kmin * kmin + kmax * kmax);
            }
            summary.lambda_min.push(kmin);
            summary.lambda_max.push(kmax);
        }
        summary.gauss_range = range(&summary.gauss);
        summary.mean_range = range(&summary.mean);
        summary.reverse_trace_range = range(&summary.reverse_trace);
        summary.lambda_range = (range(&summary.lambda_min).0, range(&summary.lambda_max).1);
        Ok(summary)
    }

    /// Enclosed volume `1/(n+1) Σ w S/K`.
    pub fn volume(&self) -> Result<f64> {
        self.check_convex()?;
        let geo = self.geometry();
        let n = self.dim() as f64;
        Ok(weighted_sum(self.grid.weights(), |i| self.values[i] * geo[i].det) / (n + 1.0))
    }

    /// Surface measure `Σ w/K`.
    pub fn area(&self) -> Result<f64> {
        self.check_convex()?;
        let geo = self.geometry();
        Ok(weighted_sum(self.grid.weights(), |i| geo[i].det))
    }

    /// Width `S(z) + S(−z)` in the direction of node `i`.
    pub fn width(&self, i: usize) -> f64 {
        self.values[i] + self.values[self.grid.antipode(i)]
    }

    pub fn width_extremes(&self) -> (f64, f64) {
        let widths: Vec<f64> = (0..self.len()).map(|i| self.width(i)).collect();
        range(&widths)
    }

    /// Embedded boundary points `X(z) = S z + ∇̄S`.
    pub fn embed(&self) -> Vec<Vec3> {
        let grid = &self.grid;
        map_nodes(grid.len(), |i| {
            let z = grid.node(i);
            let g = grid.gradient_at(&self.values, i);
            let (et, ep) = grid.frame(i);
            let s = self.values[i];
            [
                s * z[0] + g.t * et[0] + g.p * ep[0],
                s * z[1] + g.t * et[1] + g.p * ep[1],
                s * z[2] + g.t * et[2] + g.p * ep[2],
            ]
        })
    }

    /// Quadrature-weighted mean of the embedding.
    pub fn centroid(&self) -> Vec3 {
        let points = self.embed();
        let w = self.grid.weights();
        let total: f64 = weighted_sum(w, |_| 1.0);
        let mut c = [0.0; 3];
        for axis in 0..3 {
            c[axis] = weighted_sum(w, |i| points[i][axis]) / total;
        }
        c
    }

    /// The body moved by `shift`: `S(z) + ⟨shift, z⟩`.
    pub fn translated(&self, shift: Vec3) -> SupportField {
        let values = self
            .values
            .iter()
            .zip(self.grid.nodes())
            .map(|(s, z)| s + dot(&shift, z))
            .collect();
        self.with_values(values)
    }

    /// The body scaled about the origin by `factor`.
    pub fn scaled(&self, factor: f64) -> SupportField {
        self.with_values(self.values.iter().map(|s| s * factor).collect())
    }

    /// Moves the origin to the embedding centroid. Returns the re-centred
    /// field and the centroid (in the old coordinates).
    pub fn recentered(&self) -> (SupportField, Vec3) {
        let c = self.centroid();
        (self.translated([-c[0], -c[1], -c[2]]), c)
    }

    /// Lower bound on the inradius and upper bound on the circumradius:
    /// min and max support after re-centring.
    pub fn radii(&self) -> Result<(f64, f64)> {
        self.check_convex()?;
        let (centred, _) = self.recentered();
        Ok(centred.support_range())
    }
}

/// Builds a support field from an analytic description.
pub fn make_body(spec: &BodySpec, grid: Arc<SphereGrid>) -> Result<SupportField> {
    let dim = grid.dim();
    spec.validate(dim)?;
    let values: Vec<f64> = grid.nodes().iter().map(|z| spec.support_at(dim, z)).collect();
    let label = match spec {
        BodySpec::Sphere { .. } => "sphere",
        BodySpec::Ellipsoid { .. } => "ellipsoid",
        BodySpec::PerturbedSphere { .. } => "perturbed_sphere",
    };
    let field = SupportField::new(grid, values, label)?;
    field.check_convex()?;
    Ok(field)
}

/// Support function of the convex hull of a point cloud,
/// `S(z) = maxᵢ ⟨z, pᵢ⟩`.
pub fn brute_force_support(points: &[Vec3], grid: Arc<SphereGrid>) -> Result<SupportField> {
    if points.len() < grid.dim() + 2 {
        return Err(Error::DegenerateHull);
    }
    let values: Vec<f64> = map_nodes(grid.len(), |i| {
        let z = grid.node(i);
        points.iter().map(|p| dot(&z, p)).fold(f64::NEG_INFINITY, f64::max)
    });
    let widest = (0..grid.len())
        .map(|i| values[i] + values[grid.antipode(i)])
        .fold(f64::NEG_INFINITY, f64::max);
    if widest <= 0.0 {
        return Err(Error::DegenerateHull);
    }
    SupportField::new(grid, values, "point_cloud")
}

/// On-disk body snapshot. `values` are in node-index order: `k` on the
/// circle, `j·N_φ + k` (colatitude-major) on the sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub version: u32,
    pub dim: usize,
    pub resolution: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn from_field(field: &SupportField, alpha: Option<f64>, time: Option<f64>) -> Self {
        let resolution = field.grid().resolution();
        Snapshot {
            version: SNAPSHOT_VERSION,
            dim: resolution.dim(),
            resolution: resolution.counts(),
            alpha,
            time,
            values: field.values().to_vec(),
        }
    }

    pub fn grid_resolution(&self) -> Result<Resolution> {
        Resolution::from_counts(self.dim, &self.resolution)
    }

    /// Rebuilds the support field, constructing a matching grid.
    pub fn to_field(&self) -> Result<SupportField> {
        if self.version != SNAPSHOT_VERSION {
            return Err(Error::SnapshotMismatch(format!("unsupported version {}", self.version)));
        }
        let grid = Arc::new(SphereGrid::new(self.grid_resolution()?)?);
        if self.values.len() != grid.len() {
            return Err(Error::SnapshotMismatch(format!(
                "{} values for resolution {:?}",
                self.values.len(),
                self.resolution
            )));
        }
        SupportField::new(grid, self.values.clone(), "snapshot")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::circle(n).unwrap())
    }

    fn sphere(nt: usize, np: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::sphere(nt, np).unwrap())
    }

    #[test]
    fn round_sphere_curvatures() {
        let body = make_body(&BodySpec::Sphere { radius: 3.0 }, sphere(16, 32)).unwrap();
        let c = body.curvature_summary().unwrap();
        for i in 0..body.len() {
            assert!((c.gauss[i] - 1.0 / 9.0).abs() < 1e-12);
            assert!((c.mean[i] - 2.0 / 3.0).abs() < 1e-12);
            assert!((c.reverse_trace[i] - 6.0).abs() < 1e-12);
        }
        let body = make_body(&BodySpec::Sphere { radius: 2.0 }, circle(64)).unwrap();
        let c = body.curvature_summary().unwrap();
        assert!((c.gauss_range.0 - 0.5).abs() < 1e-12 && (c.gauss_range.1 - 0.5).abs() < 1e-12);
        assert!((c.reverse_trace[3] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_identity_and_am_gm() {
        let spec = BodySpec::PerturbedSphere {
            radius: 1.0,
            modes: vec![
                Mode { degree: 2, order: 1, amplitude: 0.04 },
                Mode { degree: 3, order: -2, amplitude: 0.02 },
            ],
        };
        let body = make_body(&spec, sphere(24, 48)).unwrap();
        let c = body.curvature_summary().unwrap();
        for (i, g) in body.geometry().iter().enumerate() {
            assert!((c.gauss[i] * g.det - 1.0).abs() < 1e-10);
            assert!(c.mean[i] - 2.0 * c.gauss[i].sqrt() >= -1e-10);
        }
    }

    #[test]
    fn translated_unit_sphere_is_curvature_invariant() {
        let grid = sphere(32, 64);
        let values = grid.nodes().iter().map(|z| 1.0 + 0.01 * z[2]).collect();
        let body = SupportField::new(grid, values, "t").unwrap();
        let c = body.curvature_summary().unwrap();
        for k in &c.gauss {
            assert!((k - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn volumes_and_areas_of_round_bodies() {
        let disk = make_body(&BodySpec::Sphere { radius: 1.0 }, circle(256)).unwrap();
        assert!((disk.volume().unwrap() - PI).abs() / PI < 1e-6);
        assert!((disk.area().unwrap() - 2.0 * PI).abs() < 1e-12);
        let ball = make_body(&BodySpec::Sphere { radius: 1.0 }, sphere(64, 128)).unwrap();
        assert!((ball.volume().unwrap() - 4.0 * PI / 3.0).abs() / (4.0 * PI / 3.0) < 1e-5);
        assert!((ball.area().unwrap() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn widths() {
        let ball = make_body(&BodySpec::Sphere { radius: 1.0 }, sphere(16, 32)).unwrap();
        let (lo, hi) = ball.width_extremes();
        assert!((lo - 2.0).abs() < 1e-15 && (hi - 2.0).abs() < 1e-15);

        let ellipse = make_body(&BodySpec::Ellipsoid { radii: vec![2.0, 1.0] }, circle(256)).unwrap();
        let (lo, hi) = ellipse.width_extremes();
        assert!((lo - 2.0).abs() < 1e-8 && (hi - 4.0).abs() < 1e-8);

        let moved = ellipse.translated([0.3, -0.2, 0.0]);
        for i in 0..moved.len() {
            assert!((moved.width(i) - ellipse.width(i)).abs() < 1e-10);
        }
    }

    #[test]
    fn radii_bounds() {
        let ball = make_body(&BodySpec::Sphere { radius: 1.0 }, sphere(16, 32)).unwrap();
        let (r_in, r_out) = ball.radii().unwrap();
        assert!((r_in - 1.0).abs() < 1e-12 && (r_out - 1.0).abs() < 1e-12);

        let ellipse = make_body(&BodySpec::Ellipsoid { radii: vec![2.0, 1.0] }, circle(128)).unwrap();
        let (r_in, r_out) = ellipse.radii().unwrap();
        assert!((r_in - 1.0).abs() < 1e-12 && (r_out - 2.0).abs() < 1e-12);

        let moved = ball.translated([0.3, 0.0, 0.0]);
        let (r_in, r_out) = moved.radii().unwrap();
        assert!((r_in - 1.0).abs() < 1e-6 && (r_out - 1.0).abs() < 1e-6);
    }

    #[test]
    fn embedding_of_spheres_and_translates() {
        let grid = sphere(16, 32);
        let body = make_body(&BodySpec::Sphere { radius: 2.5 }, grid.clone()).unwrap();
        for p in body.embed() {
            assert!((dot(&p, &p).sqrt() - 2.5).abs() < 1e-12);
        }
        let a = [0.2, -0.1, 0.3];
        let moved = SupportField::new(
            grid.clone(),
            grid.nodes().iter().map(|z| 1.0 + dot(&a, z)).collect(),
            "moved",
        )
        .unwrap();
        for p in moved.embed() {
            let d = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
            assert!((dot(&d, &d).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipsoid_embedding_lies_on_the_ellipsoid() {
        let body = make_body(&BodySpec::Ellipsoid { radii: vec![2.0, 1.0] }, circle(512)).unwrap();
        for p in body.embed() {
            let g = p[0] * p[0] / 4.0 + p[1] * p[1];
            assert!((g - 1.0).abs() < 1e-6, "{g}");
        }
    }

    #[test]
    fn nonpositive_support_is_recentred_or_rejected() {
        let grid = circle(64);
        // Unit circle centred at (1.5, 0): origin outside, recentring fixes it.
        let values = grid.nodes().iter().map(|z| 1.0 + 1.5 * z[0]).collect();
        let body = SupportField::new(grid.clone(), values, "outside").unwrap();
        assert!(body.min_support().1 > 0.99);
        let zero = vec![0.0; grid.len()];
        assert!(matches!(
            SupportField::new(grid, zero, "point"),
            Err(Error::NonPositiveSupport { .. })
        ));
    }

    #[test]
    fn perturbation_limits() {
        let grid = circle(256);
        let ok = BodySpec::PerturbedSphere {
            radius: 1.0,
            modes: vec![Mode { degree: 2, order: 0, amplitude: 0.05 }],
        };
        let body = make_body(&ok, grid.clone()).unwrap();
        for (i, z) in grid.nodes().iter().enumerate() {
            let theta = z[1].atan2(z[0]);
            assert!((body.values()[i] - (1.0 + 0.05 * (2.0 * theta).cos())).abs() < 1e-14);
            let h = 1.0 - 0.15 * (2.0 * theta).cos();
            assert!((body.geometry()[i].det - h).abs() < 1e-3);
        }
        let bad = BodySpec::PerturbedSphere {
            radius: 1.0,
            modes: vec![Mode { degree: 2, order: 0, amplitude: 0.5 }],
        };
        assert!(matches!(make_body(&bad, grid), Err(Error::NonConvex { .. })));
    }

    #[test]
    fn ellipsoid_support_value() {
        let grid = circle(16);
        let body = make_body(&BodySpec::Ellipsoid { radii: vec![2.0, 1.0] }, grid).unwrap();
        assert_eq!(body.values()[0], 2.0);
        let ball = make_body(&BodySpec::Sphere { radius: 3.0 }, sphere(8, 8)).unwrap();
        assert!(ball.values().iter().all(|&s| s == 3.0));
    }

    #[test]
    fn brute_force_support_of_a_square() {
        let grid = circle(64);
        let square = vec![[0.5, 0.5, 0.0], [-0.5, 0.5, 0.0], [-0.5, -0.5, 0.0], [0.5, -0.5, 0.0]];
        let body = brute_force_support(&square, grid.clone()).unwrap();
        assert!((body.values()[0] - 0.5).abs() < 1e-15);
        for (i, z) in grid.nodes().iter().enumerate() {
            let expected = 0.5 * (z[0].abs() + z[1].abs());
            assert!((body.values()[i] - expected).abs() < 1e-15);
        }
        assert!(matches!(
            brute_force_support(&square[..2], grid.clone()),
            Err(Error::DegenerateHull)
        ));
        let point = vec![[0.0; 3]; 4];
        assert!(matches!(brute_force_support(&point, grid), Err(Error::DegenerateHull)));
    }

    #[test]
    fn snapshot_round_trip() {
        let body = make_body(&BodySpec::Ellipsoid { radii: vec![1.3, 1.0, 0.8] }, sphere(8, 16)).unwrap();
        let snap = Snapshot::from_field(&body, Some(0.5), None);
        let json = snap.to_json().unwrap();
        assert!(!json.contains("time"));
        let back: Snapshot = serde_json::from_str(&json).unwrap();
        assert_eq!(back, snap);
        let field = back.to_field().unwrap();
        assert_eq!(field.values(), body.values());
    }
}
