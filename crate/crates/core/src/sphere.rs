//! Structured grids on the unit circle and the unit 2-sphere, midpoint-type
//! quadrature, and covariant derivative stencils.
//!
//! The 2-sphere grid is an equiangular latitude-longitude grid with
//! colatitudes `θ_j = (j + ½)π/N_θ`, so no node sits on a pole. Stencils that
//! step across a pole use the identification `(−θ, φ) ≡ (θ, φ + π)`, which
//! keeps every stencil centred.
//!
//! All difference quotients are three-point and centred, with denominators
//! fitted so that `sin`/`cos` of the coordinate are differentiated exactly
//! (`2 sin Δ` instead of `2Δ`, `4 sin²(Δ/2)` instead of `Δ²`). The restriction
//! of a linear function `⟨a, z⟩` is then annihilated by `∇̄² + ḡ` up to
//! rounding, which makes translations exact at the discrete level.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::Vec3;

/// Minimum node count per coordinate.
pub const MIN_RESOLUTION: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Circle(usize),
    Sphere { n_theta: usize, n_phi: usize },
}

impl Resolution {
    pub fn dim(&self) -> usize {
        match self {
            Resolution::Circle(_) => 1,
            Resolution::Sphere { .. } => 2,
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            Resolution::Circle(n) => n,
            Resolution::Sphere { n_theta, n_phi } => n_theta * n_phi,
        }
    }

    /// Node counts per coordinate, as stored in snapshot files.
    pub fn counts(&self) -> Vec<usize> {
        match *self {
            Resolution::Circle(n) => vec![n],
            Resolution::Sphere { n_theta, n_phi } => vec![n_theta, n_phi],
        }
    }

    pub fn from_counts(dim: usize, counts: &[usize]) -> Result<Self> {
        match (dim, counts) {
            (1, [n]) => Ok(Resolution::Circle(*n)),
            (2, [n_theta, n_phi]) => Ok(Resolution::Sphere {
                n_theta: *n_theta,
                n_phi: *n_phi,
            }),
            _ => Err(Error::InvalidGrid(format!(
                "dimension {dim} with resolution {counts:?}"
            ))),
        }
    }

    /// The same grid family refined by an integer factor in every coordinate.
    pub fn refined(&self, factor: usize) -> Self {
        match *self {
            Resolution::Circle(n) => Resolution::Circle(n * factor),
            Resolution::Sphere { n_theta, n_phi } => Resolution::Sphere {
                n_theta: n_theta * factor,
                n_phi: n_phi * factor,
            },
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Circle(n) => write!(f, "{n}"),
            Resolution::Sphere { n_theta, n_phi } => write!(f, "{n_theta}x{n_phi}"),
        }
    }
}

/// Tangent vector in the orthonormal frame `(e_θ, e_φ)`; `p` is zero on the
/// circle.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TangentVector {
    pub t: f64,
    pub p: f64,
}

/// Symmetric tangent 2-tensor in the orthonormal frame. On the circle only
/// `tt` is used.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TangentTensor {
    pub tt: f64,
    pub tp: f64,
    pub pp: f64,
}

impl TangentTensor {
    pub fn frobenius(&self) -> f64 {
        (self.tt * self.tt + 2.0 * self.tp * self.tp + self.pp * self.pp).sqrt()
    }
}

#[derive(Clone, Debug)]
struct CircleStencil {
    n: usize,
    d1: f64,
    d2: f64,
}

#[derive(Clone, Debug)]
struct Ring {
    sin: f64,
    cos: f64,
    /// `sin` at the half-levels `θ_j ∓ Δθ/2`; zero at the poles.
    sin_minus: f64,
    sin_plus: f64,
    /// Highest zonal wavenumber evolved freely on this ring.
    cutoff: usize,
}

#[derive(Clone)]
struct RingFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for RingFft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RingFft")
    }
}

#[derive(Clone, Debug)]
struct LatLonStencil {
    n_theta: usize,
    n_phi: usize,
    d1_theta: f64,
    d2_theta: f64,
    flux_theta: f64,
    d1_phi: f64,
    d2_phi: f64,
    rings: Vec<Ring>,
    filter: RingFft,
}

#[derive(Clone, Debug)]
enum Stencil {
    Circle(CircleStencil),
    LatLon(LatLonStencil),
}

/// Discretisation of `S¹` or `S²`. Immutable once built.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    resolution: Resolution,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    spacing: f64,
    stencil: Stencil,
}

/// Builds a grid of the given dimension from per-coordinate node counts.
pub fn make_grid(dim: usize, counts: &[usize]) -> Result<SphereGrid> {
    SphereGrid::new(Resolution::from_counts(dim, counts)?)
}

impl SphereGrid {
    pub fn new(resolution: Resolution) -> Result<Self> {
        match resolution {
            Resolution::Circle(n) => Self::circle(n),
            Resolution::Sphere { n_theta, n_phi } => Self::sphere(n_theta, n_phi),
        }
    }

    /// Uniform grid `θ_k = 2πk/N` on the unit circle.
    pub fn circle(n: usize) -> Result<Self> {
        if n < MIN_RESOLUTION {
            return Err(Error::InvalidGrid(format!(
                "circle resolution {n} is below the minimum {MIN_RESOLUTION}"
            )));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "circle resolution {n} must be even for antipodal pairing"
            )));
        }
        let step = 2.0 * PI / n as f64;
        let nodes = (0..n)
            .map(|k| {
                let theta = step * k as f64;
                [theta.cos(), theta.sin(), 0.0]
            })
            .collect();
        Ok(SphereGrid {
            resolution: Resolution::Circle(n),
            nodes,
            weights: vec![step; n],
            spacing: step,
            stencil: Stencil::Circle(CircleStencil {
                n,
                d1: 2.0 * step.sin(),
                d2: 4.0 * (0.5 * step).sin().powi(2),
            }),
        })
    }

    /// Latitude-longitude grid with `n_theta` colatitude rings offset half a
    /// cell from each pole and `n_phi` longitudes.
    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < MIN_RESOLUTION || n_phi < MIN_RESOLUTION {
            return Err(Error::InvalidGrid(format!(
                "sphere resolution {n_theta}x{n_phi} is below the minimum {MIN_RESOLUTION}"
            )));
        }
        if !n_theta.is_multiple_of(2) || !n_phi.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "sphere resolution {n_theta}x{n_phi} must be even in both coordinates"
            )));
        }
        let d_theta = PI / n_theta as f64;
        let d_phi = 2.0 * PI / n_phi as f64;
        let spacing = d_theta.min(d_phi);
        // Zonal modes above the cutoff would be stiffer than the finest
        // meridional mode; `regularize_poles` slaves them to outer rings.
        let ratio = (0.5 * d_phi).sin() / (0.5 * spacing).sin();

        let mut rings = Vec::with_capacity(n_theta);
        for j in 0..n_theta {
            let theta = (j as f64 + 0.5) * d_theta;
            let sin = theta.sin();
            let bound = sin * ratio;
            let cutoff = if bound >= 1.0 {
                n_phi / 2
            } else {
                let m = (2.0 * bound.asin() / d_phi + 1e-9).floor() as usize;
                m.min(n_phi / 2)
            };
            rings.push(Ring {
                sin,
                cos: theta.cos(),
                sin_minus: if j == 0 { 0.0 } else { (j as f64 * d_theta).sin() },
                sin_plus: if j + 1 == n_theta {
                    0.0
                } else {
                    ((j + 1) as f64 * d_theta).sin()
                },
                cutoff,
            });
        }

        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        // Exact cell areas: 2 sin θ_j sin(Δθ/2) Δφ, which telescope to 4π.
        let band = 2.0 * (0.5 * d_theta).sin() * d_phi;
        for ring in &rings {
            for k in 0..n_phi {
                let phi = k as f64 * d_phi;
                nodes.push([ring.sin * phi.cos(), ring.sin * phi.sin(), ring.cos]);
                weights.push(band * ring.sin);
            }
        }

        let mut planner = FftPlanner::new();
        let filter = RingFft {
            forward: planner.plan_fft_forward(n_phi),
            inverse: planner.plan_fft_inverse(n_phi),
        };

        Ok(SphereGrid {
            resolution: Resolution::Sphere { n_theta, n_phi },
            nodes,
            weights,
            spacing,
            stencil: Stencil::LatLon(LatLonStencil {
                n_theta,
                n_phi,
                d1_theta: 2.0 * d_theta.sin(),
                d2_theta: 4.0 * (0.5 * d_theta).sin().powi(2),
                flux_theta: 2.0 * (0.5 * d_theta).sin() * d_theta.sin(),
                d1_phi: 2.0 * d_phi.sin(),
                d2_phi: 4.0 * (0.5 * d_phi).sin().powi(2),
                rings,
                filter,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.resolution.dim()
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Vec3 {
        self.nodes[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Smallest coordinate spacing in radians. On the 2-sphere this is the
    /// spacing the polar filter enforces, not the physical arc length of the
    /// innermost ring.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// `|S¹| = 2π` or `|S²| = 4π`.
    pub fn measure(&self) -> f64 {
        match self.dim() {
            1 => 2.0 * PI,
            _ => 4.0 * PI,
        }
    }

    /// Quadrature `Σ wᵢ fᵢ`, summed in node order.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        crate::par::weighted_sum(&self.weights, |i| f[i])
    }

    /// Index of the node at `−z`.
    pub fn antipode(&self, i: usize) -> usize {
        match &self.stencil {
            Stencil::Circle(c) => (i + c.n / 2) % c.n,
            Stencil::LatLon(s) => {
                let (j, k) = (i / s.n_phi, i % s.n_phi);
                (s.n_theta - 1 - j) * s.n_phi + (k + s.n_phi / 2) % s.n_phi
            }
        }
    }

    /// Orthonormal tangent frame `(e_θ, e_φ)` at a node. On the circle `e_φ`
    /// is zero.
    pub fn frame(&self, i: usize) -> (Vec3, Vec3) {
        match &self.stencil {
            Stencil::Circle(_) => {
                let z = self.nodes[i];
                ([-z[1], z[0], 0.0], [0.0; 3])
            }
            Stencil::LatLon(s) => {
                let ring = &s.rings[i / s.n_phi];
                let z = self.nodes[i];
                let (cp, sp) = if ring.sin > 0.0 {
                    (z[0] / ring.sin, z[1] / ring.sin)
                } else {
                    (1.0, 0.0)
                };
                ([ring.cos * cp, ring.cos * sp, -ring.sin], [-sp, cp, 0.0])
            }
        }
    }

    /// Covariant gradient at one node, in the orthonormal frame.
    pub fn gradient_at(&self, f: &[f64], i: usize) -> TangentVector {
        match &self.stencil {
            Stencil::Circle(c) => {
                let next = f[(i + 1) % c.n];
                let prev = f[(i + c.n - 1) % c.n];
                TangentVector {
                    t: (next - prev) / c.d1,
                    p: 0.0,
                }
            }
            Stencil::LatLon(s) => {
                let (j, k) = ((i / s.n_phi) as isize, (i % s.n_phi) as isize);
                let ring = &s.rings[j as usize];
                let f_theta = (s.at(f, j + 1, k) - s.at(f, j - 1, k)) / s.d1_theta;
                let f_phi = (s.at(f, j, k + 1) - s.at(f, j, k - 1)) / s.d1_phi;
                TangentVector {
                    t: f_theta,
                    p: f_phi / ring.sin,
                }
            }
        }
    }

    /// Covariant Hessian `∇̄_i∇̄_j f` at one node, in the orthonormal frame.
    pub fn hessian_at(&self, f: &[f64], i: usize) -> TangentTensor {
        match &self.stencil {
            Stencil::Circle(c) => {
                let next = f[(i + 1) % c.n];
                let prev = f[(i + c.n - 1) % c.n];
                TangentTensor {
                    tt: (next - 2.0 * f[i] + prev) / c.d2,
                    tp: 0.0,
                    pp: 0.0,
                }
            }
            Stencil::LatLon(s) => s.hessian_at(f, i),
        }
    }

    /// Covariant gradient of a nodal field.
    pub fn covariant_gradient(&self, f: &[f64]) -> Vec<TangentVector> {
        crate::par::map_nodes(self.len(), |i| self.gradient_at(f, i))
    }

    /// Covariant Hessian of a nodal field.
    pub fn covariant_hessian(&self, f: &[f64]) -> Vec<TangentTensor> {
        crate::par::map_nodes(self.len(), |i| self.hessian_at(f, i))
    }

    /// Pole regularity projection. A smooth field's zonal Fourier mode `m`
    /// behaves like `sin^m θ` near a pole; on each ring, modes above the
    /// ring's cutoff are replaced by the same mode on the nearest ring
    /// towards the equator that resolves it, scaled by
    /// `(sin θ_j / sin θ_src)^m`. Resolved modes and ring means are left
    /// untouched. A no-op on the circle.
    pub fn regularize_poles(&self, field: &mut [f64]) {
        let Stencil::LatLon(s) = &self.stencil else {
            return;
        };
        let np = s.n_phi;
        let nt = s.n_theta;
        let half = np / 2;
        if s.rings.iter().all(|r| r.cutoff >= half) {
            return;
        }
        let zero = Complex::new(0.0, 0.0);
        let spectra: Vec<Vec<Complex<f64>>> = (0..nt)
            .map(|j| {
                let mut row: Vec<Complex<f64>> = field[j * np..(j + 1) * np]
                    .iter()
                    .map(|&v| Complex::new(v, 0.0))
                    .collect();
                s.filter.forward.process(&mut row);
                row
            })
            .collect();
        let scale = 1.0 / np as f64;
        for (j, ring) in s.rings.iter().enumerate() {
            if ring.cutoff >= half {
                continue;
            }
            let mut buffer = spectra[j].clone();
            for m in ring.cutoff + 1..=half {
                let source = if j < nt / 2 {
                    (j + 1..nt).find(|&i| s.rings[i].cutoff >= m)
                } else {
                    (0..j).rev().find(|&i| s.rings[i].cutoff >= m)
                };
                let (hi, lo) = (m, (np - m) % np);
                match source {
                    Some(i) => {
                        let ratio = (ring.sin / s.rings[i].sin).powi(m as i32);
                        let src = &spectra[i];
                        buffer[hi] = src[hi] * ratio;
                        buffer[lo] = src[lo] * ratio;
                    }
                    None => {
                        buffer[hi] = zero;
                        buffer[lo] = zero;
                    }
                }
            }
            s.filter.inverse.process(&mut buffer);
            for (v, b) in field[j * np..(j + 1) * np].iter_mut().zip(&buffer) {
                *v = b.re * scale;
            }
        }
    }

    /// Highest zonal wavenumber kept on each ring (empty on the circle).
    pub fn ring_cutoffs(&self) -> Vec<usize> {
        match &self.stencil {
            Stencil::Circle(_) => Vec::new(),
            Stencil::LatLon(s) => s.rings.iter().map(|r| r.cutoff).collect(),
        }
    }
}

impl LatLonStencil {
    /// Field value at ring `j`, column `k`, with pole and periodic closure.
    #[inline]
    fn at(&self, f: &[f64], j: isize, k: isize) -> f64 {
        let nt = self.n_theta as isize;
        let np = self.n_phi as isize;
        let (j, k) = if j < 0 {
            (0, k + np / 2)
        } else if j >= nt {
            (nt - 1, k + np / 2)
        } else {
            (j, k)
        };
        f[(j * np + k.rem_euclid(np)) as usize]
    }

    fn hessian_at(&self, f: &[f64], i: usize) -> TangentTensor {
        let (j, k) = ((i / self.n_phi) as isize, (i % self.n_phi) as isize);
        let ring = &self.rings[j as usize];
        let c = f[i];
        let north = self.at(f, j - 1, k);
        let south = self.at(f, j + 1, k);
        let east = self.at(f, j, k + 1);
        let west = self.at(f, j, k - 1);

        let tt = (south - 2.0 * c + north) / self.d2_theta;
        // Conservative meridional Laplacian; its difference from `tt` plays
        // the role of cot θ f_θ.
        let flux = (ring.sin_plus * (south - c) - ring.sin_minus * (c - north))
            / (ring.sin * self.flux_theta);
        let metric = flux - tt;
        let pp = (east - 2.0 * c + west) / (self.d2_phi * ring.sin * ring.sin) + metric;

        let f_phi = (east - west) / self.d1_phi;
        let f_theta_phi = (self.at(f, j + 1, k + 1) - self.at(f, j + 1, k - 1)
            - self.at(f, j - 1, k + 1)
            + self.at(f, j - 1, k - 1))
            / (self.d1_theta * self.d1_phi);
        let tp = (f_theta_phi - ring.cos / ring.sin * f_phi) / ring.sin;
        TangentTensor { tt, tp, pp }
    }
}
