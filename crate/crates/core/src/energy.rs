//! Generalized energy observable: diagonal effects over the eigenbasis,
//! conditional/overall probabilities, and the state-update rules including
//! the no-detection branch.

use std::collections::BTreeSet;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::profiles::EnergyDetectionProfile;
use crate::scalar::Scalar;
use crate::states::FockVector;

const ZERO_OUTCOME: f64 = 1e-14;

/// Yes/no answer of a property measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Answer {
    Yes,
    No,
}

/// Borel selection over the discrete spectrum: a finite level set (or the
/// complement of one) plus a flag for the no-registration outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergySelection {
    levels: BTreeSet<usize>,
    complemented: bool,
    includes_no_registration: bool,
}

impl EnergySelection {
    /// Selection containing exactly the given levels, without the
    /// no-registration outcome.
    pub fn of_levels<I: IntoIterator<Item = usize>>(levels: I) -> Self {
        Self {
            levels: levels.into_iter().collect(),
            complemented: false,
            includes_no_registration: false,
        }
    }

    /// All levels except the given ones.
    pub fn excluding_levels<I: IntoIterator<Item = usize>>(levels: I) -> Self {
        Self {
            levels: levels.into_iter().collect(),
            complemented: true,
            includes_no_registration: false,
        }
    }

    /// The whole spectrum (every level), no-registration excluded.
    pub fn all_levels() -> Self {
        Self::excluding_levels([])
    }

    /// The empty selection.
    pub fn empty() -> Self {
        Self::of_levels([])
    }

    pub fn with_no_registration(mut self, included: bool) -> Self {
        self.includes_no_registration = included;
        self
    }

    /// Complement within the full outcome set (levels and no-registration).
    pub fn complement(&self) -> Self {
        Self {
            levels: self.levels.clone(),
            complemented: !self.complemented,
            includes_no_registration: !self.includes_no_registration,
        }
    }

    pub fn contains_level(&self, n: usize) -> bool {
        self.levels.contains(&n) != self.complemented
    }

    pub fn includes_no_registration(&self) -> bool {
        self.includes_no_registration
    }
}

/// Diagonal effect in the eigenbasis.
///
/// When `identity_complement` is unset the effect is `diag(w)`; when set it
/// is `I − diag(w)` (the branch whose selection contains the no-registration
/// outcome), so probabilities can use the complement rule exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEffect<R> {
    weights: Vec<R>,
    identity_complement: bool,
}

impl<R: Scalar> EnergyEffect<R> {
    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn is_identity_complement(&self) -> bool {
        self.identity_complement
    }

    /// Multiplier applied to the amplitude `c_n` when the effect acts on a
    /// state; always in `[0, 1]`.
    pub fn multiplier(&self, n: usize) -> R {
        let w = self.weights.get(n).copied().unwrap_or(R::zero());
        if self.identity_complement {
            R::one() - w
        } else {
            w
        }
    }

    /// `⟨ψ|T|ψ⟩`. The identity-complement branch is evaluated as
    /// `1 − Σ w_n |c_n|²`, which keeps the complement rule exact.
    pub fn probability(&self, state: &FockVector<R>) -> Result<R> {
        if state.n_max() != self.n_max() {
            return Err(Error::RepresentationMismatch);
        }
        let weighted: R = state
            .amplitudes()
            .iter()
            .zip(&self.weights)
            .map(|(c, &w)| w * c.norm_sqr())
            .sum();
        Ok(if self.identity_complement {
            R::one() - weighted
        } else {
            weighted
        })
    }

    /// `T|ψ⟩`, unnormalized.
    pub fn apply(&self, state: &FockVector<R>) -> Result<FockVector<R>> {
        if state.n_max() != self.n_max() {
            return Err(Error::RepresentationMismatch);
        }
        let amplitudes = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(n, c)| *c * self.multiplier(n))
            .collect();
        FockVector::new(amplitudes, *state.params())
    }
}

/// Build the diagonal effect for a selection under a detection profile.
///
/// Without the no-registration outcome the weights are `p(n)` on selected
/// levels and 0 elsewhere; with it, the effect is the identity minus the
/// complementary weights.
pub fn energy_effect<R: Scalar>(
    sel: &EnergySelection,
    profile: &EnergyDetectionProfile<R>,
    n_max: usize,
) -> EnergyEffect<R> {
    let mut weights = vec![R::zero(); n_max + 1];
    if !sel.includes_no_registration() {
        for (n, w) in weights.iter_mut().enumerate() {
            if sel.contains_level(n) {
                *w = profile.evaluate(n);
            }
        }
        EnergyEffect {
            weights,
            identity_complement: false,
        }
    } else {
        for (n, w) in weights.iter_mut().enumerate() {
            if !sel.contains_level(n) {
                *w = profile.evaluate(n);
            }
        }
        EnergyEffect {
            weights,
            identity_complement: true,
        }
    }
}

/// Born probability of the outcome `E_n`: `|c_n|²`.
pub fn conditional_prob_energy<R: Scalar>(state: &FockVector<R>, n: usize) -> Result<R> {
    Ok(state.amplitude(n)?.norm_sqr())
}

/// Overall probability of the outcome `E_n`: `p(n)·|c_n|²`.
pub fn overall_prob_energy<R: Scalar>(
    state: &FockVector<R>,
    n: usize,
    profile: &EnergyDetectionProfile<R>,
) -> Result<R> {
    Ok(profile.evaluate(n) * conditional_prob_energy(state, n)?)
}

/// Probability that the object is not detected: `Σ (1−p(n))·|c_n|²`.
pub fn no_detection_prob_energy<R: Scalar>(
    state: &FockVector<R>,
    profile: &EnergyDetectionProfile<R>,
) -> R {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| (R::one() - profile.evaluate(n)) * c.norm_sqr())
        .sum()
}

/// Overall probability of a property `(H₀, X)`: `⟨ψ|T(X)|ψ⟩`.
pub fn property_probability_energy<R: Scalar>(
    state: &FockVector<R>,
    sel: &EnergySelection,
    profile: &EnergyDetectionProfile<R>,
) -> Result<R> {
    energy_effect(sel, profile, state.n_max()).probability(state)
}

/// State after the outcome `E_n`: the eigenvector `φ_n` (phase fixed to 1).
pub fn collapse_energy_outcome<R: Scalar>(state: &FockVector<R>, n: usize) -> Result<FockVector<R>> {
    if conditional_prob_energy(state, n)? < R::of(ZERO_OUTCOME) {
        return Err(Error::ZeroProbabilityOutcome);
    }
    FockVector::basis_state(n, state.n_max(), *state.params())
}

/// State after no detection: `c'_n ∝ (1−p(n))·c_n`, renormalized.
pub fn collapse_energy_no_detection<R: Scalar>(
    state: &FockVector<R>,
    profile: &EnergyDetectionProfile<R>,
) -> Result<FockVector<R>> {
    let damped: Vec<Complex<R>> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| *c * (R::one() - profile.evaluate(n)))
        .collect();
    let norm: R = damped.iter().map(|c| c.norm_sqr()).sum::<R>().sqrt();
    if norm < R::of(ZERO_OUTCOME) {
        return Err(Error::DetectionCertain);
    }
    let tail = state.truncation_tail() / (norm * norm);
    Ok(FockVector::new(damped, *state.params())?
        .normalized()?
        .with_truncation_tail(tail.min(R::one())))
}

/// State update for a property measurement answered yes or no: apply the
/// diagonal effect of the selection (or of its complement) and renormalize.
pub fn gpp_energy_property<R: Scalar>(
    state: &FockVector<R>,
    sel: &EnergySelection,
    profile: &EnergyDetectionProfile<R>,
    answer: Answer,
) -> Result<FockVector<R>> {
    let branch = match answer {
        Answer::Yes => sel.clone(),
        Answer::No => sel.complement(),
    };
    let effect = energy_effect(&branch, profile, state.n_max());
    let weighted = effect.apply(state)?;
    let norm = weighted.norm();
    if norm < R::of(ZERO_OUTCOME) {
        return Err(Error::ZeroProbabilityOutcome);
    }
    let tail = state.truncation_tail() / (norm * norm);
    Ok(weighted.normalized()?.with_truncation_tail(tail.min(R::one())))
}
