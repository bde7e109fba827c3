//! Reference solutions that share no differentiation or quadrature code with
//! the rest of the crate: closed forms for spheres and ellipses, a
//! high-order finite-difference curvature of the homogeneous extension of a
//! support function, Gauss–Legendre quadrature, and brute-force geometry.

use std::f64::consts::PI;

use crate::body::BodySpec;
use crate::error::{Error, Result};
use crate::sphere::Resolution;
use crate::Vec3;

/// Round sphere evolving by `r' = −r^{−nα}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereSolution {
    pub r0: f64,
    pub alpha: f64,
    pub n: usize,
}

impl SphereSolution {
    pub fn new(r0: f64, alpha: f64, n: usize) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::InvalidParameter(format!("r0 must be positive, got {r0}")));
        }
        Ok(SphereSolution { r0, alpha, n })
    }

    fn power(&self) -> f64 {
        1.0 + self.n as f64 * self.alpha
    }

    /// `T* = r0^{1+nα}/(1+nα)`.
    pub fn extinction_time(&self) -> f64 {
        self.r0.powf(self.power()) / self.power()
    }

    /// `r(t) = (r0^{1+nα} − (1+nα)t)^{1/(1+nα)}`.
    pub fn radius(&self, t: f64) -> Result<f64> {
        let extinction = self.extinction_time();
        if t >= extinction {
            return Err(Error::PastExtinction { time: t, extinction });
        }
        let p = self.power();
        Ok((self.r0.powf(p) - p * t).powf(1.0 / p))
    }
}

/// `r(t)` of [`SphereSolution`].
pub fn sphere_radius(sol: &SphereSolution, t: f64) -> Result<f64> {
    sol.radius(t)
}

/// Support function of the ellipse with semi-axes `a`, `b` and its first two
/// derivatives in the normal angle `ψ`.
pub fn ellipse_support(a: f64, b: f64, psi: f64) -> (f64, f64, f64) {
    let (s, c) = psi.sin_cos();
    let q = a * a * c * c + b * b * s * s;
    let dq = (b * b - a * a) * (2.0 * psi).sin();
    let ddq = 2.0 * (b * b - a * a) * (2.0 * psi).cos();
    let sv = q.sqrt();
    (sv, dq / (2.0 * sv), ddq / (2.0 * sv) - dq * dq / (4.0 * sv * sv * sv))
}

/// Curvature of the ellipse at the point with outward normal
/// `(cos ψ, sin ψ)`: `1/(S'' + S)`.
pub fn ellipse_curvature(a: f64, b: f64, psi: f64) -> f64 {
    let (s, _, dds) = ellipse_support(a, b, psi);
    1.0 / (dds + s)
}

/// Gauss curvature of the ellipsoid with semi-axes `radii` at unit normal
/// `z`: `S^{n+2} / Π rᵢ²`.
pub fn ellipsoid_gauss_curvature(radii: &[f64], z: &Vec3) -> f64 {
    let s: f64 = radii.iter().zip(z).map(|(r, c)| r * r * c * c).sum::<f64>().sqrt();
    let prod: f64 = radii.iter().map(|r| r * r).product();
    s.powi(radii.len() as i32 + 1) / prod
}

/// Product of principal radii (`1/K`) of a body on `S²` from a fourth-order
/// finite-difference Hessian of the 1-homogeneous extension
/// `Ŝ(x) = |x| S(x/|x|)`. Its eigenvalues at a unit vector are `0` and the
/// principal radii, so the second symmetric function is their product.
pub fn extension_radii_product(spec: &BodySpec, z: &Vec3) -> f64 {
    const H: f64 = 2e-3;
    let ext = |x: Vec3| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        r * spec.support_at(2, &[x[0] / r, x[1] / r, x[2] / r])
    };
    let shifted = |steps: &[(usize, f64)]| {
        let mut x = *z;
        for &(axis, k) in steps {
            x[axis] += k * H;
        }
        ext(x)
    };
    let mut hess = [[0.0; 3]; 3];
    let f0 = ext(*z);
    for i in 0..3 {
        let f = |k: f64| shifted(&[(i, k)]);
        hess[i][i] = (-f(2.0) + 16.0 * f(1.0) - 30.0 * f0 + 16.0 * f(-1.0) - f(-2.0)) / (12.0 * H * H);
        for j in 0..i {
            let d = |k: f64| {
                shifted(&[(i, k), (j, k)]) - shifted(&[(i, k), (j, -k)]) - shifted(&[(i, -k), (j, k)])
                    + shifted(&[(i, -k), (j, -k)])
            };
            let v = (16.0 * d(1.0) - d(2.0)) / (48.0 * H * H);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0] + hess[0][0] * hess[2][2] - hess[0][2] * hess[2][0]
        + hess[1][1] * hess[2][2]
        - hess[1][2] * hess[2][1]
}

/// Support value and product of principal radii at a unit normal, from
/// closed forms where available.
pub fn support_and_radii_product(spec: &BodySpec, dim: usize, z: &Vec3) -> (f64, f64) {
    let s = spec.support_at(dim, z);
    match spec {
        BodySpec::Sphere { radius } => (s, radius.powi(dim as i32)),
        BodySpec::Ellipsoid { radii } => (s, 1.0 / ellipsoid_gauss_curvature(radii, z)),
        BodySpec::PerturbedSphere { radius, modes } => {
            if dim == 1 {
                let theta = z[1].atan2(z[0]);
                // (d²/dθ² + 1) of a cos/sin(lθ) mode is (1 − l²) times the mode.
                let h = radius
                    + modes
                        .iter()
                        .map(|m| {
                            let l = m.degree as f64;
                            let basis = if m.order >= 0 { (l * theta).cos() } else { (l * theta).sin() };
                            m.amplitude * (1.0 - l * l) * basis
                        })
                        .sum::<f64>();
                (s, h)
            } else {
                (s, extension_radii_product(spec, z))
            }
        }
    }
}

/// Functionals available from [`dense_functional`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Functional {
    Volume,
    Area,
    IntegralQuantity(f64),
    Eta(f64),
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let k = k as f64;
                (p0, p1) = (p1, ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k);
            }
            if m == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// A functional of an analytic body evaluated by independent quadrature:
/// the periodic trapezoid rule on the circle, Gauss–Legendre in `cos θ`
/// times the trapezoid rule in `φ` on the sphere. The node counts are those
/// of `base` multiplied by `refinement`.
pub fn dense_functional(spec: &BodySpec, base: Resolution, functional: Functional, refinement: usize) -> Result<f64> {
    let dim = base.dim();
    spec.validate(dim)?;
    if refinement == 0 {
        return Err(Error::InvalidParameter("refinement must be positive".into()));
    }
    let n = dim as f64;
    let integrand = |s: f64, det: f64| match functional {
        Functional::Volume => s * det / (n + 1.0),
        Functional::Area => det,
        Functional::Eta(alpha) => det.powf(1.0 - alpha),
        Functional::IntegralQuantity(alpha) if alpha == 1.0 => s.ln(),
        Functional::IntegralQuantity(alpha) => s.powf(1.0 - 1.0 / alpha),
    };
    let mut total = 0.0;
    match base {
        Resolution::Circle(count) => {
            let m = count * refinement;
            let step = 2.0 * PI / m as f64;
            for k in 0..m {
                let t = step * k as f64;
                let (s, det) = support_and_radii_product(spec, 1, &[t.cos(), t.sin(), 0.0]);
                total += step * integrand(s, det);
            }
        }
        Resolution::Sphere { n_theta, n_phi } => {
            let mp = n_phi * refinement;
            let step = 2.0 * PI / mp as f64;
            for (c, w) in gauss_legendre(n_theta * refinement) {
                let sin = (1.0 - c * c).sqrt();
                for k in 0..mp {
                    let phi = step * k as f64;
                    let z = [sin * phi.cos(), sin * phi.sin(), c];
                    let (s, det) = support_and_radii_product(spec, 2, &z);
                    total += w * step * integrand(s, det);
                }
            }
        }
    }
    Ok(match functional {
        Functional::IntegralQuantity(alpha) if alpha > 1.0 => total,
        Functional::IntegralQuantity(alpha) if alpha < 1.0 => 1.0 / total,
        _ => total,
    })
}

/// Area enclosed by a closed polygon in the `(x, y)` plane.
pub fn shoelace_area(points: &[Vec3]) -> f64 {
    let n = points.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (points[i], points[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    0.5 * twice.abs()
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Perimeter of the ellipse with semi-axes `a`, `b` by adaptive Simpson
/// quadrature of `√(a² sin² u + b² cos² u)` over a quarter period.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let f = |u: f64| {
        let (s, c) = u.sin_cos();
        (a * a * s * s + b * b * c * c).sqrt()
    };
    let (lo, hi) = (0.0, 0.5 * PI);
    let (fa, fm, fb) = (f(lo), f(0.5 * hi), f(hi));
    let whole = hi / 6.0 * (fa + 4.0 * fm + fb);
    4.0 * adaptive_simpson(&f, lo, hi, fa, fm, fb, whole, 1e-13, 40)
}

/// Symmetric Hausdorff distance between two point sets.
pub fn hausdorff(a: &[Vec3], b: &[Vec3]) -> f64 {
    let directed = |from: &[Vec3], to: &[Vec3]| {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Dense boundary samples of the ellipsoid `Σ xᵢ²/rᵢ² = 1` (dimension from
/// `radii.len() − 1`), by the parametrisation of the coordinate sphere.
pub fn ellipsoid_samples(radii: &[f64], per_axis: usize) -> Vec<Vec3> {
    if radii.len() == 2 {
        return (0..per_axis)
            .map(|k| {
                let u = 2.0 * PI * k as f64 / per_axis as f64;
                [radii[0] * u.cos(), radii[1] * u.sin(), 0.0]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(per_axis * 2 * per_axis);
    for j in 0..=per_axis {
        let theta = PI * j as f64 / per_axis as f64;
        for k in 0..2 * per_axis {
            let phi = PI * k as f64 / per_axis as f64;
            out.push([
                radii[0] * theta.sin() * phi.cos(),
                radii[1] * theta.sin() * phi.sin(),
                radii[2] * theta.cos(),
            ]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::Mode;

    #[test]
    fn sphere_solution() {
        let sol = SphereSolution::new(1.0, 1.0, 2).unwrap();
        assert!((sol.extinction_time() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(sol.radius(0.0).unwrap(), 1.0);
        assert!((sol.radius(0.1).unwrap() - 0.7f64.cbrt()).abs() < 1e-15);
        assert!(matches!(sol.radius(0.4), Err(Error::PastExtinction { .. })));
        assert!((SphereSolution::new(1.0, 1.0, 1).unwrap().extinction_time() - 0.5).abs() < 1e-15);
        assert!((SphereSolution::new(1.0, 0.5, 1).unwrap().extinction_time() - 2.0 / 3.0).abs() < 1e-15);
        assert!(SphereSolution::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn sphere_solution_ode_residual() {
        for (alpha, n) in [(1.0, 2), (0.5, 1), (0.3, 2)] {
            let sol = SphereSolution::new(1.3, alpha, n).unwrap();
            let h = 1e-5;
            for k in 1..9 {
                let t = sol.extinction_time() * k as f64 / 10.0;
                let r = sol.radius(t).unwrap();
                let dr = (sol.radius(t + h).unwrap() - sol.radius(t - h).unwrap()) / (2.0 * h);
                assert!((dr + r.powf(-(n as f64) * alpha)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn ellipse_curvature_closed_forms() {
        assert!((ellipse_curvature(1.5, 1.5, 0.3) - 1.0 / 1.5).abs() < 1e-15);
        assert!((ellipse_curvature(2.0, 1.0, 0.0) - 2.0).abs() < 1e-15);
        assert!((ellipse_curvature(2.0, 1.0, 0.5 * PI) - 0.25).abs() < 1e-14);
        // Parametric curvature ab/(a² sin² u + b² cos² u)^{3/2} at the point
        // (a cos u, b sin u), whose normal angle is atan2(a sin u, b cos u).
        let (a, b) = (2.0, 1.0);
        for k in 0..16 {
            let u = 0.37 * k as f64;
            let psi = (a * u.sin()).atan2(b * u.cos());
            let param = a * b / (a * a * u.sin().powi(2) + b * b * u.cos().powi(2)).powf(1.5);
            assert!((ellipse_curvature(a, b, psi) - param).abs() < 1e-12);
            let z = [psi.cos(), psi.sin(), 0.0];
            assert!((ellipsoid_gauss_curvature(&[a, b], &z) - param).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_hessian_matches_ellipsoid() {
        let spec = BodySpec::Ellipsoid { radii: vec![1.5, 1.0, 0.7] };
        for z in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8], [0.48, 0.6, 0.64]] {
            let det = extension_radii_product(&spec, &z);
            let exact = 1.0 / ellipsoid_gauss_curvature(&[1.5, 1.0, 0.7], &z);
            assert!((det - exact).abs() / exact < 1e-8, "{det} {exact}");
        }
        let ball = BodySpec::PerturbedSphere { radius: 2.0, modes: vec![] };
        assert!((extension_radii_product(&ball, &[0.0, 0.6, 0.8]) - 4.0).abs() < 1e-8);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(12);
        let w: f64 = rule.iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
        let x10: f64 = rule.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((x10 - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn dense_references() {
        let v = dense_functional(
            &BodySpec::Sphere { radius: 1.0 },
            Resolution::Sphere { n_theta: 8, n_phi: 16 },
            Functional::Volume,
            8,
        )
        .unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-9);
        let ellipse = BodySpec::Ellipsoid { radii: vec![2.0, 1.0] };
        let a = dense_functional(&ellipse, Resolution::Circle(64), Functional::Volume, 8).unwrap();
        assert!((a - 2.0 * PI).abs() < 1e-8);
        let p = dense_functional(&ellipse, Resolution::Circle(64), Functional::Area, 8).unwrap();
        assert!((p - ellipse_perimeter(2.0, 1.0)).abs() < 1e-10);
        let harmonic = BodySpec::PerturbedSphere {
            radius: 1.0,
            modes: vec![Mode { degree: 3, order: 1, amplitude: 0.05 }],
        };
        let v = dense_functional(&harmonic, Resolution::Circle(64), Functional::Volume, 8).unwrap();
        // ½∫(S² − S'²) with S = 1 + ε cos 3θ: π(1 + ε²/2 − 9ε²/2).
        assert!((v - PI * (1.0 - 4.0 * 0.05 * 0.05)).abs() < 1e-12);
    }

    #[test]
    fn shoelace_and_perimeter() {
        let square = [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [2.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
        assert_eq!(shoelace_area(&square), 2.0);
        assert!((ellipse_perimeter(1.0, 1.0) - 2.0 * PI).abs() < 1e-12);
        // Ramanujan's second approximation is accurate to ~1e-5 relative here.
        let (a, b) = (2.0f64, 1.0f64);
        let h = ((a - b) / (a + b)).powi(2);
        let approx = PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()));
        assert!((ellipse_perimeter(a, b) - approx).abs() < 1e-4);
    }

    #[test]
    fn hausdorff_of_shifted_sets() {
        let a = ellipsoid_samples(&[1.0, 1.0], 64);
        let b: Vec<Vec3> = a.iter().map(|p| [p[0] + 0.1, p[1], 0.0]).collect();
        let d = hausdorff(&a, &b);
        assert!(d > 0.09 && d <= 0.1 + 1e-12);
    }
}
