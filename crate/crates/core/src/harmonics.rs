//! Perturbation bases: `cos kθ`/`sin kθ` on the circle and real spherical
//! harmonics of degree ≤ 4 on the 2-sphere, written as explicit polynomials
//! in `(x, y, z)` with Schmidt semi-normalisation (sup norm ≤ 1).

use crate::error::{Error, Result};
use crate::Vec3;

/// Largest spherical-harmonic degree with an explicit formula.
pub const MAX_SPHERE_DEGREE: u32 = 4;

/// Checks that `(degree, order)` names a basis function in dimension `dim`.
///
/// On the circle `order ≥ 0` selects `cos(degree·θ)` and `order < 0` selects
/// `sin(degree·θ)`. On the sphere `order` is the usual `m ∈ [−l, l]`, with
/// negative orders selecting the `sin mφ` family.
pub fn validate(dim: usize, degree: u32, order: i32) -> Result<()> {
    match dim {
        1 => Ok(()),
        2 if degree <= MAX_SPHERE_DEGREE && order.unsigned_abs() <= degree => Ok(()),
        2 => Err(Error::InvalidParameter(format!(
            "spherical harmonic (l={degree}, m={order}) is not available"
        ))),
        _ => Err(Error::InvalidParameter(format!("dimension {dim}"))),
    }
}

/// Evaluates a basis function at a unit vector.
pub fn eval(dim: usize, degree: u32, order: i32, z: &Vec3) -> f64 {
    if dim == 1 {
        let theta = z[1].atan2(z[0]);
        let arg = degree as f64 * theta;
        return if order >= 0 { arg.cos() } else { arg.sin() };
    }
    let (x, y, c) = (z[0], z[1], z[2]);
    let m = order.unsigned_abs();
    // Re/Im of (x + iy)^m = sin^m θ (cos mφ, sin mφ).
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..m {
        (re, im) = (re * x - im * y, re * y + im * x);
    }
    let zonal = if order >= 0 { re } else { im };
    let c2 = c * c;
    let legendre = match (degree, m) {
        (0, 0) => 1.0,
        (1, 0) => c,
        (1, 1) => 1.0,
        (2, 0) => 0.5 * (3.0 * c2 - 1.0),
        (2, 1) => 3f64.sqrt() * c,
        (2, 2) => 0.5 * 3f64.sqrt(),
        (3, 0) => 0.5 * (5.0 * c2 - 3.0) * c,
        (3, 1) => (3.0f64 / 8.0).sqrt() * (5.0 * c2 - 1.0),
        (3, 2) => 0.5 * 15f64.sqrt() * c,
        (3, 3) => 0.25 * 10f64.sqrt(),
        (4, 0) => (35.0 * c2 * c2 - 30.0 * c2 + 3.0) / 8.0,
        (4, 1) => 0.25 * 10f64.sqrt() * c * (7.0 * c2 - 3.0),
        (4, 2) => 0.25 * 5f64.sqrt() * (7.0 * c2 - 1.0),
        (4, 3) => 0.25 * 70f64.sqrt() * c,
        (4, 4) => 35f64.sqrt() / 8.0,
        _ => panic!("spherical harmonic (l={degree}, m={order}) is not tabulated"),
    };
    legendre * zonal
}

/// Eigenvalue of the Laplace–Beltrami operator for a basis function, used to
/// bound perturbation amplitudes (`Δ Y = −eigen·Y`).
pub fn laplace_eigenvalue(dim: usize, degree: u32) -> f64 {
    let l = degree as f64;
    if dim == 1 {
        l * l
    } else {
        l * (l + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sphere_point(theta: f64, phi: f64) -> Vec3 {
        [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
    }

    #[test]
    fn matches_trigonometric_form() {
        let (theta, phi) = (0.7f64, 2.1f64);
        let z = sphere_point(theta, phi);
        let (s, c) = theta.sin_cos();
        let y = eval(2, 3, 2, &z);
        let expected = 0.5 * 15f64.sqrt() * c * s * s * (2.0 * phi).cos();
        assert!((y - expected).abs() < 1e-14);
        let y = eval(2, 4, -3, &z);
        let expected = 0.25 * 70f64.sqrt() * c * s.powi(3) * (3.0 * phi).sin();
        assert!((y - expected).abs() < 1e-14);
    }

    #[test]
    fn sup_norm_is_at_most_one() {
        for l in 0..=4u32 {
            for m in -(l as i32)..=(l as i32) {
                let mut sup: f64 = 0.0;
                for a in 0..60 {
                    for b in 0..120 {
                        let z = sphere_point(PI * a as f64 / 59.0, PI * b as f64 / 60.0);
                        sup = sup.max(eval(2, l, m, &z).abs());
                    }
                }
                assert!(sup <= 1.0 + 1e-12 && sup > 0.5, "l={l} m={m} sup={sup}");
            }
        }
    }

    #[test]
    fn circle_basis() {
        let z = [0.3f64.cos(), 0.3f64.sin(), 0.0];
        assert!((eval(1, 2, 0, &z) - 0.6f64.cos()).abs() < 1e-15);
        assert!((eval(1, 3, -1, &z) - 0.9f64.sin()).abs() < 1e-15);
    }
}
