//! Volume normalisation `X̃ = V^{-1/(n+1)} X` and the logarithmic time
//! `τ = −log(V/V₀)`. [`ScalingTable`] is the one place the exponents live;
//! [`crate::flow`] delegates to it.

use crate::body::SupportField;
use crate::error::{Error, Result};
use crate::flow::{eta, FlowState, RescaledState};

/// Geometric quantities with a definite scaling weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Support,
    Metric,
    SecondFundamentalForm,
    MeanCurvature,
    GaussCurvature,
    Eta,
}

/// Powers of the volume by which each quantity is multiplied when passing to
/// the normalised body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingTable {
    pub volume: f64,
    pub dim: usize,
    pub alpha: f64,
}

impl ScalingTable {
    pub fn new(volume: f64, dim: usize, alpha: f64) -> Result<Self> {
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::InvalidParameter(format!("volume must be positive, got {volume}")));
        }
        Ok(ScalingTable { volume, dim, alpha })
    }

    pub fn exponent(&self, q: Quantity) -> f64 {
        let n = self.dim as f64;
        let p = 1.0 / (n + 1.0);
        match q {
            Quantity::Support => -p,
            Quantity::Metric => -2.0 * p,
            Quantity::SecondFundamentalForm => -p,
            Quantity::MeanCurvature => p,
            Quantity::GaussCurvature => n * p,
            Quantity::Eta => n * (self.alpha - 1.0) * p,
        }
    }

    pub fn factor(&self, q: Quantity) -> f64 {
        self.volume.powf(self.exponent(q))
    }

    pub fn apply(&self, q: Quantity, value: f64) -> f64 {
        value * self.factor(q)
    }

    /// Table for the reverse direction (volume `1/V`).
    pub fn inverse(&self) -> Self {
        ScalingTable {
            volume: 1.0 / self.volume,
            ..*self
        }
    }

    pub fn scale_body(&self, body: &SupportField) -> SupportField {
        body.scaled(self.factor(Quantity::Support))
    }
}

/// Physical state to normalised state: `S̃ = V^{-1/(n+1)}S`,
/// `τ = −log(V/V₀)`, `η̃ = V^{n(α−1)/(n+1)}η`.
pub fn apply_scaling(state: &FlowState) -> Result<RescaledState> {
    let body = state.body();
    let table = ScalingTable::new(state.volume, body.dim(), state.alpha)?;
    let scaled = table.scale_body(body);
    let eta_tilde = table.apply(Quantity::Eta, eta(body, state.alpha)?);
    let tau = -(state.volume / state.initial_volume).ln();
    Ok(RescaledState::from_parts(scaled, tau, eta_tilde, state.alpha, state.safety))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{make_body, BodySpec};
    use crate::sphere::SphereGrid;
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn exponents() {
        let t = ScalingTable::new(2.0, 2, 0.5).unwrap();
        assert_eq!(t.exponent(Quantity::Support), -1.0 / 3.0);
        assert_eq!(t.exponent(Quantity::Metric), -2.0 / 3.0);
        assert_eq!(t.exponent(Quantity::GaussCurvature), 2.0 / 3.0);
        assert_eq!(t.exponent(Quantity::MeanCurvature), 1.0 / 3.0);
        assert_eq!(t.exponent(Quantity::Eta), -1.0 / 3.0);
        assert!(ScalingTable::new(0.0, 2, 1.0).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let t = ScalingTable::new(3.7, 1, 0.3).unwrap();
        for q in [
            Quantity::Support,
            Quantity::Metric,
            Quantity::SecondFundamentalForm,
            Quantity::MeanCurvature,
            Quantity::GaussCurvature,
            Quantity::Eta,
        ] {
            let v = 1.234;
            assert!((t.inverse().apply(q, t.apply(q, v)) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_curvature_two_ways() {
        let grid = Arc::new(SphereGrid::sphere(24, 48).unwrap());
        let body = make_body(&BodySpec::Ellipsoid { radii: vec![1.4, 1.0, 0.7] }, grid).unwrap();
        let v = body.volume().unwrap();
        let table = ScalingTable::new(v, 2, 1.0).unwrap();
        let k = body.curvature_summary().unwrap().gauss;
        let k_scaled = table.scale_body(&body).curvature_summary().unwrap().gauss;
        for (a, b) in k.iter().zip(&k_scaled) {
            let direct = table.apply(Quantity::GaussCurvature, *a);
            assert!((direct - b).abs() / b < 1e-10);
        }
    }

    #[test]
    fn sphere_snapshot_is_scale_free() {
        let grid = Arc::new(SphereGrid::sphere(16, 32).unwrap());
        for r in [0.5, 2.0] {
            let body = make_body(&BodySpec::Sphere { radius: r }, grid.clone()).unwrap();
            let state = FlowState::new(body, 1.0).unwrap();
            let rescaled = apply_scaling(&state).unwrap();
            assert!((rescaled.body().volume().unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(rescaled.tau, 0.0);
            // Discrete sphere volume is (r³/3)·4π exactly, so the normalised
            // radius is (3/(4π))^{1/3} to rounding.
            let expected = (3.0 / (4.0 * PI)).powf(1.0 / 3.0);
            for s in rescaled.body().values() {
                assert!((s - expected).abs() < 1e-12);
            }
            let k = rescaled.body().curvature_summary().unwrap().gauss[0];
            assert!((k - (4.0 * PI / 3.0).powf(2.0 / 3.0)).abs() < 1e-12);
        }
    }
}
