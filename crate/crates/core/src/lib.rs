//! Simulation of the α-power Gauss curvature flow for strictly convex
//! hypersurfaces, formulated on the Gauss sphere through the support function.
//!
//! The geometric state of a convex body is its support function `S` sampled
//! on a structured grid of unit normals ([`SphereGrid`]). Curvature, volume,
//! area and widths are all computed from `S` and its covariant derivatives.
//! The physical flow `S_t = -K^α` and the volume-normalised flow
//! `S̃_τ = -K̃^α/η̃ + S̃/(n+1)` are advanced by explicit Euler steps
//! ([`flow`]), and [`diagnostics`] evaluates the monotone integral quantity,
//! pinching, self-similarity and a priori curvature bounds along a run.
//!
//! Node loops run on rayon when the `parallel` feature is enabled (default);
//! every reduction is performed sequentially in node order, so results are
//! bit-identical with and without the feature.

pub mod body;
pub mod diagnostics;
mod error;
pub mod flow;
pub mod harmonics;
pub mod oracles;
mod par;
pub mod rescale;
pub mod sphere;

pub use body::{BodySpec, CurvatureSummary, Mode, Snapshot, SupportField};
pub use diagnostics::{BoundFlags, DiagnosticsRecord, Monitor};
pub use error::{Error, Result};
pub use flow::{FlowState, RescaledState, StopCriteria};
pub use rescale::ScalingTable;
pub use sphere::{Resolution, SphereGrid};

/// Three-component vector used for nodes and embedded points. For the
/// circle the third component is always zero.
pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
