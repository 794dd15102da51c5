//! Expectation values of the standard and generalized observables, and the
//! gaps between them.

use crate::energy::no_detection_prob_energy;
use crate::error::{Error, Result};
use crate::fock::{energy_eigenvalue, integrate_grid};
use crate::profiles::{EnergyDetectionProfile, PositionDetectionProfile};
use crate::scalar::Scalar;
use crate::states::{FockVector, GridWavefunction};

/// `⟨H⟩ = Σ E_n |c_n|²`.
pub fn energy_expectation<R: Scalar>(state: &FockVector<R>) -> R {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| energy_eigenvalue(n, state.params()) * c.norm_sqr())
        .sum()
}

/// `⟨Q⟩ = ∫ q |ψ(q)|² dq`.
pub fn position_expectation<R: Scalar>(state: &GridWavefunction<R>) -> R {
    let samples: Vec<R> = state
        .grid()
        .nodes()
        .zip(state.samples())
        .map(|(q, c)| q * c.norm_sqr())
        .collect();
    integrate_grid(&samples, state.grid()).expect("sample count matches grid")
}

/// Reject a no-registration value that collides with a retained eigenvalue.
fn check_h0<R: Scalar>(state: &FockVector<R>, h0: R) -> Result<()> {
    for n in 0..=state.n_max() {
        let e = energy_eigenvalue(n, state.params());
        if (h0 - e).abs() <= e.abs() * R::of(1e-12) {
            return Err(Error::NoRegistrationOnSpectrum {
                value: h0.as_f64(),
                n,
            });
        }
    }
    Ok(())
}

/// Expectation of the generalized energy:
/// `h₀·p^t(h₀) + Σ E_n·p^t(E_n)`.
pub fn generalized_energy_expectation<R: Scalar>(
    state: &FockVector<R>,
    profile: &EnergyDetectionProfile<R>,
    h0: R,
) -> Result<R> {
    check_h0(state, h0)?;
    let detected: R = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| energy_eigenvalue(n, state.params()) * profile.evaluate(n) * c.norm_sqr())
        .sum();
    Ok(h0 * no_detection_prob_energy(state, profile) + detected)
}

/// Expectation of the generalized position:
/// `q₀·p^t(q₀) + ∫ q·p(q)·|ψ(q)|² dq`.
pub fn generalized_position_expectation<R: Scalar>(
    state: &GridWavefunction<R>,
    profile: &PositionDetectionProfile<R>,
    q0: R,
) -> R {
    let mut detected_mass = Vec::with_capacity(state.grid().point_count());
    let mut first_moment = Vec::with_capacity(state.grid().point_count());
    for (q, c) in state.grid().nodes().zip(state.samples()) {
        let w = profile.evaluate(q) * c.norm_sqr();
        detected_mass.push(w);
        first_moment.push(q * w);
    }
    let detected = integrate_grid(&detected_mass, state.grid()).expect("lengths match");
    let moment = integrate_grid(&first_moment, state.grid()).expect("lengths match");
    q0 * (R::one() - detected) + moment
}

/// `⟨H⟩ − ⟨H₀⟩` at `h₀ = 0`: `Σ E_n (1 − p(n)) |c_n|²`.
pub fn energy_expectation_gap<R: Scalar>(
    state: &FockVector<R>,
    profile: &EnergyDetectionProfile<R>,
) -> R {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            energy_eigenvalue(n, state.params()) * (R::one() - profile.evaluate(n)) * c.norm_sqr()
        })
        .sum()
}

/// Which integrand to use for the position gap.
///
/// The subtraction `⟨Q⟩ − ⟨Q₀⟩` at `q₀ = 0` gives the position-weighted form
/// `∫ q (1−p) |ψ|² dq`; the probability-mass form `∫ (1−p) |ψ|² dq` (the
/// undetected fraction) is also exposed so both conventions can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionGapForm {
    PositionWeighted,
    ProbabilityMass,
}

/// Gap between the standard and generalized position expectations at
/// `q₀ = 0`, in the requested form.
pub fn position_expectation_gap<R: Scalar>(
    state: &GridWavefunction<R>,
    profile: &PositionDetectionProfile<R>,
    form: PositionGapForm,
) -> R {
    let samples: Vec<R> = state
        .grid()
        .nodes()
        .zip(state.samples())
        .map(|(q, c)| {
            let miss = (R::one() - profile.evaluate(q)) * c.norm_sqr();
            match form {
                PositionGapForm::PositionWeighted => q * miss,
                PositionGapForm::ProbabilityMass => miss,
            }
        })
        .collect();
    integrate_grid(&samples, state.grid()).expect("lengths match")
}
