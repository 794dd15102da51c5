//! Oscillator eigenbasis and quadrature infrastructure.
//!
//! Everything downstream builds on three things provided here: eigenvalues
//! `E_n = ħω(n + 1/2)`, numerically stable eigenfunctions `φ_n(q)`, and
//! integration over a uniform position grid.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex;

/// Physical parameters of the oscillator: mass, angular frequency and ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<R> {
    mass: R,
    angular_frequency: R,
    hbar: R,
}

impl<R: Scalar> OscillatorParams<R> {
    pub fn new(mass: R, angular_frequency: R, hbar: R) -> Result<Self> {
        for (what, v) in [
            ("mass", mass),
            ("angular_frequency", angular_frequency),
            ("hbar", hbar),
        ] {
            if !(v.is_finite() && v > R::zero()) {
                return Err(Error::OutOfRange {
                    what,
                    value: v.as_f64(),
                    bounds: "(0, inf)",
                });
            }
        }
        Ok(Self {
            mass,
            angular_frequency,
            hbar,
        })
    }

    /// Natural units m = ω = ħ = 1.
    pub fn natural() -> Self {
        Self {
            mass: R::one(),
            angular_frequency: R::one(),
            hbar: R::one(),
        }
    }

    pub fn mass(&self) -> R {
        self.mass
    }

    pub fn angular_frequency(&self) -> R {
        self.angular_frequency
    }

    pub fn hbar(&self) -> R {
        self.hbar
    }

    /// Ground-state length scale `x_c = sqrt(ħ/(mω))`.
    pub fn characteristic_length(&self) -> R {
        (self.hbar / (self.mass * self.angular_frequency)).sqrt()
    }

    /// Dimensionless coordinate `x = q·sqrt(mω/ħ)`.
    pub fn scaled_coordinate(&self, q: R) -> R {
        q * (self.mass * self.angular_frequency / self.hbar).sqrt()
    }
}

/// `E_n = ħω(n + 1/2)`.
pub fn energy_eigenvalue<R: Scalar>(n: usize, params: &OscillatorParams<R>) -> R {
    params.hbar * params.angular_frequency * (R::of_usize(n) + R::of(0.5))
}

/// Eigenfunction `φ_n(q)`.
///
/// Evaluated through the recurrence on normalized Hermite functions in the
/// scaled coordinate, so the value stays bounded for every `n` (no factorial
/// overflow) up to well past n = 200.
pub fn hermite_function<R: Scalar>(n: usize, q: R, params: &OscillatorParams<R>) -> R {
    let x = params.scaled_coordinate(q);
    let scale = (params.mass * params.angular_frequency / params.hbar)
        .sqrt()
        .sqrt();
    let mut prev = R::zero();
    // h_0(x) = π^{-1/4} e^{-x²/2}
    let mut cur = R::PI().powf(R::of(-0.25)) * (-x * x / R::of(2.0)).exp();
    for k in 0..n {
        let kp1 = R::of_usize(k + 1);
        let next = (R::of(2.0) / kp1).sqrt() * x * cur - (R::of_usize(k) / kp1).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    scale * cur
}

/// All of `φ_0(q) .. φ_{n_max}(q)` in one recurrence pass.
pub fn hermite_ladder<R: Scalar>(n_max: usize, q: R, params: &OscillatorParams<R>) -> Vec<R> {
    let x = params.scaled_coordinate(q);
    let scale = (params.mass * params.angular_frequency / params.hbar)
        .sqrt()
        .sqrt();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = R::zero();
    let mut cur = R::PI().powf(R::of(-0.25)) * (-x * x / R::of(2.0)).exp();
    out.push(scale * cur);
    for k in 0..n_max {
        let kp1 = R::of_usize(k + 1);
        let next = (R::of(2.0) / kp1).sqrt() * x * cur - (R::of_usize(k) / kp1).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(scale * cur);
    }
    out
}

/// Uniform position grid `q_min .. q_max` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<R> {
    q_min: R,
    q_max: R,
    point_count: usize,
}

impl<R: Scalar> Grid<R> {
    pub fn new(q_min: R, q_max: R, point_count: usize) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite() && q_min < q_max) {
            return Err(Error::InvalidRange {
                q_min: q_min.as_f64(),
                q_max: q_max.as_f64(),
            });
        }
        if point_count < 3 {
            return Err(Error::OutOfRange {
                what: "point_count",
                value: point_count as f64,
                bounds: "[3, inf)",
            });
        }
        Ok(Self {
            q_min,
            q_max,
            point_count,
        })
    }

    /// Default grid for states truncated at `n_max`: symmetric about 0,
    /// extending 1.2 classical turning points of the highest level plus six
    /// characteristic lengths of Gaussian tail, 4001 points.
    pub fn default_for(n_max: usize, params: &OscillatorParams<R>) -> Self {
        let turning = (R::of(2.0) * R::of_usize(n_max) + R::one()).sqrt();
        let half = (R::of(1.2) * turning + R::of(6.0)) * params.characteristic_length();
        Self {
            q_min: -half,
            q_max: half,
            point_count: 4001,
        }
    }

    pub fn q_min(&self) -> R {
        self.q_min
    }

    pub fn q_max(&self) -> R {
        self.q_max
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn spacing(&self) -> R {
        (self.q_max - self.q_min) / R::of_usize(self.point_count - 1)
    }

    pub fn node(&self, i: usize) -> R {
        debug_assert!(i < self.point_count);
        self.q_min + self.spacing() * R::of_usize(i)
    }

    pub fn nodes(&self) -> impl Iterator<Item = R> + '_ {
        (0..self.point_count).map(move |i| self.node(i))
    }
}

/// Build a uniform grid, checking the range invariants.
pub fn build_grid<R: Scalar>(q_min: R, q_max: R, point_count: usize) -> Result<Grid<R>> {
    Grid::new(q_min, q_max, point_count)
}

/// Quadrature scheme for full-grid integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    Trapezoid,
    Simpson,
}

/// Nodes and weights realizing a [`QuadratureMethod`] on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<R> {
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Scalar> QuadratureRule<R> {
    pub fn for_grid(grid: &Grid<R>, method: QuadratureMethod) -> Self {
        let h = grid.spacing();
        let n = grid.point_count();
        let mut weights = vec![R::zero(); n];
        match method {
            QuadratureMethod::Trapezoid => {
                let half = h / R::of(2.0);
                weights[0] = half;
                weights[n - 1] = half;
                for w in weights.iter_mut().take(n - 1).skip(1) {
                    *w = h;
                }
            }
            QuadratureMethod::Simpson => {
                // Composite Simpson; when the interval count is odd the last
                // three intervals use the 3/8 rule so every weight stays
                // positive and the order is preserved.
                let intervals = n - 1;
                let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
                let third = h / R::of(3.0);
                if simpson_end > 0 {
                    weights[0] = weights[0] + third;
                    weights[simpson_end] = weights[simpson_end] + third;
                    for (i, w) in weights.iter_mut().enumerate().take(simpson_end).skip(1) {
                        *w = *w
                            + if i % 2 == 1 {
                                R::of(4.0) * third
                            } else {
                                R::of(2.0) * third
                            };
                    }
                }
                if intervals % 2 != 0 {
                    // 3/8 rule over the final three cells
                    let c = h * R::of(3.0) / R::of(8.0);
                    weights[n - 4] = weights[n - 4] + c;
                    weights[n - 3] = weights[n - 3] + R::of(3.0) * c;
                    weights[n - 2] = weights[n - 2] + R::of(3.0) * c;
                    weights[n - 1] = weights[n - 1] + c;
                }
            }
        }
        Self {
            nodes: grid.nodes().collect(),
            weights,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[R] {
        &self.nodes
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn integrate(&self, samples: &[R]) -> Result<R> {
        if samples.len() != self.weights.len() {
            return Err(Error::LengthMismatch {
                expected: self.weights.len(),
                found: samples.len(),
            });
        }
        Ok(samples
            .iter()
            .zip(&self.weights)
            .map(|(&f, &w)| f * w)
            .sum())
    }

    pub fn integrate_complex(&self, samples: &[Complex<R>]) -> Result<Complex<R>> {
        if samples.len() != self.weights.len() {
            return Err(Error::LengthMismatch {
                expected: self.weights.len(),
                found: samples.len(),
            });
        }
        let mut acc = Complex::new(R::zero(), R::zero());
        for (&f, &w) in samples.iter().zip(&self.weights) {
            acc += f * w;
        }
        Ok(acc)
    }
}

/// Trapezoidal integral of real samples over the whole grid.
pub fn integrate_grid<R: Scalar>(samples: &[R], grid: &Grid<R>) -> Result<R> {
    integrate_grid_with(QuadratureMethod::Trapezoid, samples, grid)
}

/// Same with an explicit method.
pub fn integrate_grid_with<R: Scalar>(
    method: QuadratureMethod,
    samples: &[R],
    grid: &Grid<R>,
) -> Result<R> {
    QuadratureRule::for_grid(grid, method).integrate(samples)
}

/// Trapezoidal integral of complex samples over the whole grid.
pub fn integrate_grid_complex<R: Scalar>(
    samples: &[Complex<R>],
    grid: &Grid<R>,
) -> Result<Complex<R>> {
    QuadratureRule::for_grid(grid, QuadratureMethod::Trapezoid).integrate_complex(samples)
}

/// Integral of the parabola through `(q_{j-1},f_{j-1}), (q_j,f_j), (q_{j+1},f_{j+1})`
/// over `[a, b]`, in local units `t = (q - q_j)/h` with `ta, tb ∈ [-1, 1]`.
fn parabola_segment<R: Scalar>(f: &[R], j: usize, h: R, ta: R, tb: R) -> R {
    let d1 = (f[j + 1] - f[j - 1]) / R::of(2.0);
    let d2 = (f[j + 1] - R::of(2.0) * f[j] + f[j - 1]) / R::of(2.0);
    let prim = |t: R| f[j] * t + d1 * t * t / R::of(2.0) + d2 * t * t * t / R::of(3.0);
    h * (prim(tb) - prim(ta))
}

/// Composite Simpson over the node span `i0..=i1` (3/8 tail for an odd
/// number of cells, quadratic fit when only one cell remains).
fn simpson_span<R: Scalar>(f: &[R], i0: usize, i1: usize, h: R) -> R {
    let m = i1 - i0;
    if m == 0 {
        return R::zero();
    }
    if m == 1 {
        // One cell: integrate the parabola through the nearest three nodes.
        let j = i0.clamp(1, f.len() - 2);
        let ta = R::of_usize(i0) - R::of_usize(j);
        return parabola_segment(f, j, h, ta, ta + R::one());
    }
    let mut acc = R::zero();
    let mut end = i1;
    if m % 2 != 0 {
        // 3/8 rule over the last three cells
        end = i1 - 3;
        acc = h * R::of(3.0) / R::of(8.0)
            * (f[i1 - 3] + R::of(3.0) * f[i1 - 2] + R::of(3.0) * f[i1 - 1] + f[i1]);
        if end == i0 {
            return acc;
        }
    }
    let third = h / R::of(3.0);
    let mut sum = f[i0] + f[end];
    let mut i = i0 + 1;
    while i < end {
        sum = sum + R::of(4.0) * f[i];
        if i + 1 < end {
            sum = sum + R::of(2.0) * f[i + 1];
        }
        i += 2;
    }
    acc + third * sum
}

/// Integral of grid samples over a union of real ranges.
///
/// Cells wholly inside a range go through composite Simpson; a range
/// endpoint falling between nodes is handled by integrating the local
/// quadratic interpolant over the partial cell, so the endpoint error is
/// O(Δq⁴) rather than O(Δq). Ranges are clipped to the grid extent.
pub fn integrate_samples_over_ranges<R: Scalar>(
    samples: &[R],
    grid: &Grid<R>,
    ranges: &[(R, R)],
) -> Result<R> {
    if samples.len() != grid.point_count() {
        return Err(Error::LengthMismatch {
            expected: grid.point_count(),
            found: samples.len(),
        });
    }
    let h = grid.spacing();
    let n = grid.point_count();
    let mut total = R::zero();
    for &(lo, hi) in ranges {
        let a = if lo < grid.q_min() { grid.q_min() } else { lo };
        let b = if hi > grid.q_max() { grid.q_max() } else { hi };
        if !(a < b) {
            continue;
        }
        // First node index at or above a, last at or below b.
        let ta = (a - grid.q_min()) / h;
        let tb = (b - grid.q_min()) / h;
        let snap = R::of(1e-9);
        let i0 = (ta - snap).ceil().max(R::zero()).as_f64() as usize;
        let i1 = ((tb + snap).floor().as_f64() as usize).min(n - 1);
        if i0 > i1 {
            // Entire range inside one cell.
            let j = i0.clamp(1, n - 2);
            let tj = R::of_usize(j);
            total = total + parabola_segment(samples, j, h, ta - tj, tb - tj);
            continue;
        }
        total = total + simpson_span(samples, i0, i1, h);
        let t0 = R::of_usize(i0);
        if ta < t0 - snap {
            let j = i0.clamp(1, n - 2);
            let tj = R::of_usize(j);
            total = total + parabola_segment(samples, j, h, ta - tj, t0 - tj);
        }
        let t1 = R::of_usize(i1);
        if tb > t1 + snap {
            let j = i1.clamp(1, n - 2);
            let tj = R::of_usize(j);
            total = total + parabola_segment(samples, j, h, t1 - tj, tb - tj);
        }
    }
    Ok(total)
}
