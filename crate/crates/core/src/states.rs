//! Pure-state representations: truncated eigenbasis amplitudes and sampled
//! position wavefunctions, with conversions between the two.

use crate::error::{Error, Result};
use crate::fock::{hermite_ladder, integrate_grid, integrate_grid_complex, Grid, OscillatorParams};
use crate::scalar::Scalar;
use num_complex::Complex;

const ZERO_NORM: f64 = 1e-14;

/// State in the truncated energy eigenbasis: amplitudes `c_0 .. c_{N_max}`.
///
/// The truncation tail records the squared norm discarded when the state was
/// projected into the retained basis, so downstream completeness checks can
/// attribute their error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<R: Scalar> {
    amplitudes: Vec<Complex<R>>,
    params: OscillatorParams<R>,
    truncation_tail: R,
}

impl<R: Scalar> FockVector<R> {
    pub fn new(amplitudes: Vec<Complex<R>>, params: OscillatorParams<R>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::OutOfRange {
                what: "amplitude count",
                value: 0.0,
                bounds: "[1, inf)",
            });
        }
        if amplitudes.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::ParseError("non-finite amplitude".into()));
        }
        Ok(Self {
            amplitudes,
            params,
            truncation_tail: R::zero(),
        })
    }

    /// Basis state `φ_n` in a basis truncated at `n_max`.
    pub fn basis_state(n: usize, n_max: usize, params: OscillatorParams<R>) -> Result<Self> {
        if n > n_max {
            return Err(Error::IndexBeyondTruncation { index: n, n_max });
        }
        let mut amplitudes = vec![Complex::new(R::zero(), R::zero()); n_max + 1];
        amplitudes[n] = Complex::new(R::one(), R::zero());
        Self::new(amplitudes, params)
    }

    /// Equal-weight real superposition of the given levels.
    pub fn equal_superposition(
        levels: &[usize],
        n_max: usize,
        params: OscillatorParams<R>,
    ) -> Result<Self> {
        let mut amplitudes = vec![Complex::new(R::zero(), R::zero()); n_max + 1];
        for &n in levels {
            if n > n_max {
                return Err(Error::IndexBeyondTruncation { index: n, n_max });
            }
            amplitudes[n] = Complex::new(R::one(), R::zero());
        }
        Self::new(amplitudes, params)?.normalized()
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex<R>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Result<Complex<R>> {
        self.amplitudes
            .get(n)
            .copied()
            .ok_or(Error::IndexBeyondTruncation {
                index: n,
                n_max: self.n_max(),
            })
    }

    pub fn params(&self) -> &OscillatorParams<R> {
        &self.params
    }

    /// Squared norm discarded by truncation when this vector was built.
    pub fn truncation_tail(&self) -> R {
        self.truncation_tail
    }

    pub(crate) fn with_truncation_tail(mut self, tail: R) -> Self {
        self.truncation_tail = if tail > R::zero() { tail } else { R::zero() };
        self
    }

    pub fn norm_sqr(&self) -> R {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> R {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < R::of(ZERO_NORM) {
            return Err(Error::ZeroNorm);
        }
        let inv = Complex::new(R::one() / norm, R::zero());
        for c in &mut self.amplitudes {
            *c = *c * inv;
        }
        Ok(self)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<R>> {
        if self.amplitudes.len() != other.amplitudes.len() || self.params != other.params {
            return Err(Error::RepresentationMismatch);
        }
        let mut acc = Complex::new(R::zero(), R::zero());
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            acc += a.conj() * *b;
        }
        Ok(acc)
    }

    /// `|⟨self|other⟩|` — the phase-insensitive overlap used for comparisons.
    pub fn fidelity(&self, other: &Self) -> Result<R> {
        Ok(self.inner(other)?.norm())
    }

    /// CSV export with columns `n,re,im`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("n,re,im\n");
        for (n, c) in self.amplitudes.iter().enumerate() {
            out.push_str(&format!("{},{:.17e},{:.17e}\n", n, c.re.as_f64(), c.im.as_f64()));
        }
        out
    }

    /// Parse the `n,re,im` CSV produced by [`FockVector::to_csv_string`].
    pub fn from_csv_str(text: &str, params: OscillatorParams<R>) -> Result<Self> {
        let mut amplitudes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('n')) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::ParseError(format!(
                    "line {}: expected 3 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let n: usize = fields[0]
                .trim()
                .parse()
                .map_err(|_| Error::ParseError(format!("line {}: bad index", lineno + 1)))?;
            if n != amplitudes.len() {
                return Err(Error::ParseError(format!(
                    "line {}: non-contiguous index {}",
                    lineno + 1,
                    n
                )));
            }
            let re: f64 = fields[1]
                .trim()
                .parse()
                .map_err(|_| Error::ParseError(format!("line {}: bad re", lineno + 1)))?;
            let im: f64 = fields[2]
                .trim()
                .parse()
                .map_err(|_| Error::ParseError(format!("line {}: bad im", lineno + 1)))?;
            amplitudes.push(Complex::new(R::of(re), R::of(im)));
        }
        Self::new(amplitudes, params)
    }
}

/// State sampled on a uniform position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction<R: Scalar> {
    samples: Vec<Complex<R>>,
    grid: Grid<R>,
    params: OscillatorParams<R>,
}

impl<R: Scalar> GridWavefunction<R> {
    pub fn new(
        samples: Vec<Complex<R>>,
        grid: Grid<R>,
        params: OscillatorParams<R>,
    ) -> Result<Self> {
        if samples.len() != grid.point_count() {
            return Err(Error::LengthMismatch {
                expected: grid.point_count(),
                found: samples.len(),
            });
        }
        Ok(Self {
            samples,
            grid,
            params,
        })
    }

    pub fn samples(&self) -> &[Complex<R>] {
        &self.samples
    }

    pub fn grid(&self) -> &Grid<R> {
        &self.grid
    }

    pub fn params(&self) -> &OscillatorParams<R> {
        &self.params
    }

    /// `|ψ(q_i)|²` at every node.
    pub fn density(&self) -> Vec<R> {
        self.samples.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> R {
        integrate_grid(&self.density(), &self.grid).expect("density matches grid")
    }

    pub fn norm(&self) -> R {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < R::of(ZERO_NORM) {
            return Err(Error::ZeroNorm);
        }
        let inv = Complex::new(R::one() / norm, R::zero());
        for c in &mut self.samples {
            *c = *c * inv;
        }
        Ok(self)
    }

    /// `⟨self|other⟩` as a grid integral, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<R>> {
        if self.grid != other.grid {
            return Err(Error::RepresentationMismatch);
        }
        let prod: Vec<Complex<R>> = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * *b)
            .collect();
        integrate_grid_complex(&prod, &self.grid)
    }

    pub fn fidelity(&self, other: &Self) -> Result<R> {
        Ok(self.inner(other)?.norm())
    }

    /// Pointwise multiplication by real weights; used by effects and
    /// collapse transformations.
    pub(crate) fn scaled_by(&self, weights: &[R]) -> Result<Self> {
        if weights.len() != self.samples.len() {
            return Err(Error::LengthMismatch {
                expected: self.samples.len(),
                found: weights.len(),
            });
        }
        let samples = self
            .samples
            .iter()
            .zip(weights)
            .map(|(c, &w)| *c * w)
            .collect();
        Self::new(samples, self.grid.clone(), self.params)
    }

    /// CSV export with columns `q,re,im`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("q,re,im\n");
        for (q, c) in self.grid.nodes().zip(&self.samples) {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                q.as_f64(),
                c.re.as_f64(),
                c.im.as_f64()
            ));
        }
        out
    }

    /// Parse the `q,re,im` CSV produced by [`GridWavefunction::to_csv_string`],
    /// reconstructing the uniform grid from the coordinate column.
    pub fn from_csv_str(text: &str, params: OscillatorParams<R>) -> Result<Self> {
        let mut qs: Vec<f64> = Vec::new();
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('q')) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::ParseError(format!(
                    "line {}: expected 3 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str, what: &str| -> Result<f64> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::ParseError(format!("line {}: bad {}", lineno + 1, what)))
            };
            qs.push(parse(fields[0], "q")?);
            samples.push(Complex::new(
                R::of(parse(fields[1], "re")?),
                R::of(parse(fields[2], "im")?),
            ));
        }
        if qs.len() < 3 {
            return Err(Error::ParseError("fewer than 3 grid rows".into()));
        }
        let grid = Grid::new(R::of(qs[0]), R::of(*qs.last().unwrap()), qs.len())?;
        let tol = (qs[qs.len() - 1] - qs[0]) * 1e-9;
        for (i, &q) in qs.iter().enumerate() {
            if (q - grid.node(i).as_f64()).abs() > tol {
                return Err(Error::ParseError(format!("row {}: grid not uniform", i + 1)));
            }
        }
        Self::new(samples, grid, params)
    }
}

/// Expand Fock amplitudes onto a position grid: `ψ(q_i) = Σ_n c_n φ_n(q_i)`.
///
/// Fails with [`Error::GridTooSmall`] when the grid visibly clips the state
/// (norm off from 1 by more than 1e-3).
pub fn fock_to_position<R: Scalar>(
    state: &FockVector<R>,
    grid: &Grid<R>,
) -> Result<GridWavefunction<R>> {
    let n_max = state.n_max();
    let samples: Vec<Complex<R>> = grid
        .nodes()
        .map(|q| {
            let ladder = hermite_ladder(n_max, q, state.params());
            let mut acc = Complex::new(R::zero(), R::zero());
            for (c, &phi) in state.amplitudes().iter().zip(&ladder) {
                acc += *c * phi;
            }
            acc
        })
        .collect();
    let wf = GridWavefunction::new(samples, grid.clone(), *state.params())?;
    let norm_error = (wf.norm_sqr() - state.norm_sqr()).abs();
    if norm_error > R::of(1e-3) {
        return Err(Error::GridTooSmall {
            norm_error: norm_error.as_f64(),
        });
    }
    Ok(wf)
}

/// Project a grid wavefunction back onto the eigenbasis:
/// `c_n = ∫ φ_n(q) ψ(q) dq`, recording the discarded tail mass.
pub fn position_to_fock<R: Scalar>(
    wf: &GridWavefunction<R>,
    n_max: usize,
) -> Result<FockVector<R>> {
    let grid = wf.grid();
    let count = grid.point_count();
    let mut amplitudes = vec![Complex::new(R::zero(), R::zero()); n_max + 1];
    // One ladder pass per node instead of one grid pass per level.
    let mut ladders: Vec<Vec<R>> = Vec::with_capacity(count);
    for q in grid.nodes() {
        ladders.push(hermite_ladder(n_max, q, wf.params()));
    }
    for (n, amp) in amplitudes.iter_mut().enumerate() {
        let prod: Vec<Complex<R>> = wf
            .samples()
            .iter()
            .enumerate()
            .map(|(i, c)| *c * ladders[i][n])
            .collect();
        *amp = integrate_grid_complex(&prod, grid)?;
    }
    let retained: R = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    let total = wf.norm_sqr();
    if retained < total - R::of(1e-3) {
        return Err(Error::TruncationLoss {
            retained: retained.as_f64(),
        });
    }
    Ok(FockVector::new(amplitudes, *wf.params())?.with_truncation_tail(total - retained))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_grid, hermite_function};
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    fn natural() -> OscillatorParams<f64> {
        OscillatorParams::natural()
    }

    fn default_grid(n_max: usize) -> Grid<f64> {
        Grid::default_for(n_max, &natural())
    }

    #[test]
    fn basis_state_expands_to_its_eigenfunction() {
        let p = natural();
        let grid = default_grid(8);
        for n in [0usize, 1] {
            let state = FockVector::basis_state(n, 8, p).unwrap();
            let wf = fock_to_position(&state, &grid).unwrap();
            for (q, c) in grid.nodes().zip(wf.samples()) {
                assert_relative_eq!(c.re, hermite_function(n, q, &p), epsilon = 1e-12);
                assert_eq!(c.im, 0.0);
            }
        }
    }

    #[test]
    fn superposition_stays_normalized_on_grid() {
        let p = natural();
        let state = FockVector::equal_superposition(&[0, 1], 16, p).unwrap();
        let wf = fock_to_position(&state, &default_grid(16)).unwrap();
        assert_relative_eq!(wf.norm_sqr(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn projection_recovers_basis_coefficients() {
        let p = natural();
        let grid = default_grid(12);
        let state = FockVector::basis_state(2, 12, p).unwrap();
        let wf = fock_to_position(&state, &grid).unwrap();
        let back = position_to_fock(&wf, 12).unwrap();
        for (n, c) in back.amplitudes().iter().enumerate() {
            let expected = if n == 2 { 1.0 } else { 0.0 };
            assert!((c.norm() - expected).abs() < 1e-8, "c_{n} = {c}");
        }
    }

    #[test]
    fn projection_recovers_mixed_coefficients() {
        let p = natural();
        let grid = default_grid(12);
        let state = FockVector::equal_superposition(&[0, 1], 12, p).unwrap();
        let wf = fock_to_position(&state, &grid).unwrap();
        let back = position_to_fock(&wf, 12).unwrap();
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        assert_relative_eq!(back.amplitude(0).unwrap().re, inv_sqrt2, epsilon = 1e-8);
        assert_relative_eq!(back.amplitude(1).unwrap().re, inv_sqrt2, epsilon = 1e-8);
    }

    #[test]
    fn projection_detects_truncation_loss() {
        let p = natural();
        let n_max = 6;
        let grid = default_grid(n_max + 5);
        let state = FockVector::basis_state(n_max + 5, n_max + 5, p).unwrap();
        let wf = fock_to_position(&state, &grid).unwrap();
        assert!(matches!(
            position_to_fock(&wf, n_max),
            Err(Error::TruncationLoss { .. })
        ));
    }

    #[test]
    fn grid_too_small_is_detected() {
        let p = natural();
        let tiny = build_grid(-0.5, 0.5, 51).unwrap();
        let state = FockVector::basis_state(0, 4, p).unwrap();
        assert!(matches!(
            fock_to_position(&state, &tiny),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let p = natural();
        let phi0 = FockVector::basis_state(0, 4, p).unwrap();
        let phi1 = FockVector::basis_state(1, 4, p).unwrap();
        assert_eq!(phi0.inner(&phi0).unwrap(), C::new(1.0, 0.0));
        assert_eq!(phi0.inner(&phi1).unwrap(), C::new(0.0, 0.0));

        let grid = default_grid(4);
        let g0 = fock_to_position(&phi0, &grid).unwrap();
        let g1 = fock_to_position(&phi1, &grid).unwrap();
        assert!(g0.inner(&g1).unwrap().norm() < 1e-8);
        assert_relative_eq!(g0.inner(&g0).unwrap().re, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn inner_product_is_conjugate_symmetric() {
        let p = natural();
        let a = FockVector::new(vec![C::new(0.3, 0.4), C::new(-0.2, 0.7)], p)
            .unwrap()
            .normalized()
            .unwrap();
        let b = FockVector::new(vec![C::new(-0.1, 0.9), C::new(0.5, 0.2)], p)
            .unwrap()
            .normalized()
            .unwrap();
        let ab = a.inner(&b).unwrap();
        let ba = b.inner(&a).unwrap();
        assert_relative_eq!(ab.re, ba.re, epsilon = 1e-15);
        assert_relative_eq!(ab.im, -ba.im, epsilon = 1e-15);
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let p = natural();
        let a = FockVector::basis_state(0, 4, p).unwrap();
        let b = FockVector::basis_state(0, 5, p).unwrap();
        assert_eq!(a.inner(&b), Err(Error::RepresentationMismatch));

        let g1 = build_grid(-5.0, 5.0, 101).unwrap();
        let g2 = build_grid(-5.0, 5.0, 102).unwrap();
        let w1 = GridWavefunction::new(vec![C::new(1.0, 0.0); 101], g1, p).unwrap();
        let w2 = GridWavefunction::new(vec![C::new(1.0, 0.0); 102], g2, p).unwrap();
        assert_eq!(w1.inner(&w2), Err(Error::RepresentationMismatch));
    }

    #[test]
    fn zero_norm_cannot_be_normalized() {
        let p = natural();
        let z = FockVector::new(vec![C::new(0.0, 0.0); 3], p).unwrap();
        assert_eq!(z.normalized().err(), Some(Error::ZeroNorm));
    }

    #[test]
    fn fock_csv_round_trip() {
        let p = natural();
        let state = FockVector::new(
            vec![C::new(0.6, -0.1), C::new(0.0, 0.7), C::new(-0.2, 0.3)],
            p,
        )
        .unwrap()
        .normalized()
        .unwrap();
        let text = state.to_csv_string();
        let back = FockVector::from_csv_str(&text, p).unwrap();
        assert_relative_eq!(state.fidelity(&back).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn grid_csv_round_trip() {
        let p = natural();
        let state = FockVector::equal_superposition(&[0, 2], 8, p).unwrap();
        let wf = fock_to_position(&state, &default_grid(8)).unwrap();
        let text = wf.to_csv_string();
        let back = GridWavefunction::from_csv_str(&text, p).unwrap();
        assert_relative_eq!(wf.fidelity(&back).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn malformed_csv_is_a_parse_error() {
        let p = natural();
        assert!(matches!(
            FockVector::<f64>::from_csv_str("n,re,im\n0,1.0\n", p),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            FockVector::<f64>::from_csv_str("n,re,im\n1,1.0,0.0\n", p),
            Err(Error::ParseError(_))
        ));
    }
}
