use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use super::IntegrateError;
use crate::qubit::BlochVector;

pub const DEFAULT_N_POLAR: usize = 128;
pub const DEFAULT_N_AZIMUTH: usize = 256;

/// Densities passed to [`tv_distance`] must integrate to 1 within this.
pub const DENSITY_NORMALIZATION_TOL: f64 = 1e-3;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi's initial guess for the i-th largest root.
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if libm::fabs(dx) < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on S₂: Gauss-Legendre in `u = cos θ` on each hemisphere
/// (`n_polar` nodes on `[-1, 0]` and on `[0, 1]`) times a uniform azimuth
/// grid of `n_azimuth` midpoints.
///
/// Splitting at the equator of the rule makes integrands with a kink or a
/// jump on that circle integrate exactly; orient the rule with
/// [`QuadratureGrid::rule_about`] to put the equator where the integrand
/// needs it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    n_polar: usize,
    n_azimuth: usize,
}

impl QuadratureGrid {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Result<Self, IntegrateError> {
        if n_polar == 0 || n_azimuth == 0 {
            return Err(IntegrateError::Config("quadrature orders must be positive"));
        }
        Ok(Self { n_polar, n_azimuth })
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    /// Nodes with the rule's pole at +z.
    pub fn rule(&self) -> SphereRule {
        self.rule_about(&BlochVector::PLUS_Z)
    }

    /// Nodes with the rule's pole at `pole`.
    pub fn rule_about(&self, pole: &BlochVector) -> SphereRule {
        let (t, w) = gauss_legendre(self.n_polar);
        let frame = pole.orthonormal_frame();
        let dphi = TAU / self.n_azimuth as f64;
        let azimuths: Vec<(f64, f64)> = (0..self.n_azimuth)
            .map(|j| {
                let phi = (j as f64 + 0.5) * dphi;
                (libm::cos(phi), libm::sin(phi))
            })
            .collect();
        let mut nodes = Vec::with_capacity(2 * self.n_polar * self.n_azimuth);
        for shift in [-0.5, 0.5] {
            for (ti, wi) in t.iter().zip(&w) {
                let u = 0.5 * ti + shift;
                let r = libm::sqrt((1.0 - u * u).max(0.0));
                let weight = 0.5 * wi * dphi;
                for &(c, s) in &azimuths {
                    nodes.push((pole.in_frame(&frame, r * c, r * s, u), weight));
                }
            }
        }
        SphereRule { nodes }
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            n_polar: DEFAULT_N_POLAR,
            n_azimuth: DEFAULT_N_AZIMUTH,
        }
    }
}

/// Materialized quadrature nodes and weights.
#[derive(Debug, Clone)]
pub struct SphereRule {
    nodes: Vec<(BlochVector, f64)>,
}

impl SphereRule {
    pub fn nodes(&self) -> &[(BlochVector, f64)] {
        &self.nodes
    }

    /// `∫_{S₂} f dΩ`.
    pub fn integrate<F: Fn(&BlochVector) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|(v, w)| w * f(v)).sum()
    }

    /// `½∫|f − g| dΩ`, after checking that both densities integrate to 1.
    pub fn tv_distance<F, G>(&self, f: F, g: G) -> Result<f64, IntegrateError>
    where
        F: Fn(&BlochVector) -> f64,
        G: Fn(&BlochVector) -> f64,
    {
        let (mut nf, mut ng, mut diff) = (0.0, 0.0, 0.0);
        for (v, w) in &self.nodes {
            let (a, b) = (f(v), g(v));
            if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < 0.0 {
                return Err(IntegrateError::InvalidDensity("negative or non-finite value"));
            }
            nf += w * a;
            ng += w * b;
            diff += w * libm::fabs(a - b);
        }
        for total in [nf, ng] {
            if libm::fabs(total - 1.0) > DENSITY_NORMALIZATION_TOL {
                return Err(IntegrateError::Normalization(total));
            }
        }
        Ok((0.5 * diff).clamp(0.0, 1.0))
    }
}

/// `∫_{S₂} f dΩ` on `grid` with its pole at +z.
pub fn sphere_quadrature<F: Fn(&BlochVector) -> f64>(f: F, grid: &QuadratureGrid) -> f64 {
    grid.rule().integrate(f)
}

/// Total-variation distance `½∫|f − g| dΩ` between two densities on S₂.
pub fn tv_distance<F, G>(f: F, g: G, grid: &QuadratureGrid) -> Result<f64, IntegrateError>
where
    F: Fn(&BlochVector) -> f64,
    G: Fn(&BlochVector) -> f64,
{
    grid.rule().tv_distance(f, g)
}
