//! Generalized position observable: interval-union selections on the grid,
//! probabilities, and the state-update rules including the no-detection
//! branch.

use crate::error::{Error, Result};
use crate::fock::{integrate_samples_over_ranges, Grid};
use crate::profiles::PositionDetectionProfile;
use crate::scalar::Scalar;
use crate::states::GridWavefunction;
pub use crate::energy::Answer;

const ZERO_OUTCOME: f64 = 1e-14;

/// Closed real interval; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<R> {
    lo: R,
    hi: R,
}

impl<R: Scalar> Interval<R> {
    pub fn new(lo: R, hi: R) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidRange {
                q_min: lo.as_f64(),
                q_max: hi.as_f64(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> R {
        self.lo
    }

    pub fn hi(&self) -> R {
        self.hi
    }

    pub fn contains(&self, q: R) -> bool {
        self.lo <= q && q <= self.hi
    }
}

/// Borel selection on the real line: ordered disjoint closed intervals,
/// optionally complemented, plus a flag for the no-registration outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion<R> {
    intervals: Vec<Interval<R>>,
    complemented: bool,
    includes_no_registration: bool,
}

impl<R: Scalar> IntervalUnion<R> {
    /// Union of the given closed intervals (sorted internally); rejects
    /// overlapping or touching intervals.
    pub fn new(pairs: Vec<(R, R)>) -> Result<Self> {
        let mut intervals: Vec<Interval<R>> = pairs
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<_>>()?;
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("no NaN endpoints"));
        for w in intervals.windows(2) {
            if w[1].lo <= w[0].hi {
                return Err(Error::InvalidRange {
                    q_min: w[1].lo.as_f64(),
                    q_max: w[0].hi.as_f64(),
                });
            }
        }
        Ok(Self {
            intervals,
            complemented: false,
            includes_no_registration: false,
        })
    }

    /// The whole real line.
    pub fn full_line() -> Self {
        Self {
            intervals: vec![Interval {
                lo: R::neg_infinity(),
                hi: R::infinity(),
            }],
            complemented: false,
            includes_no_registration: false,
        }
    }

    /// The empty set of real points.
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            complemented: false,
            includes_no_registration: false,
        }
    }

    pub fn with_no_registration(mut self, included: bool) -> Self {
        self.includes_no_registration = included;
        self
    }

    /// Complement within the full outcome set (real points and the
    /// no-registration outcome).
    pub fn complement(&self) -> Self {
        Self {
            intervals: self.intervals.clone(),
            complemented: !self.complemented,
            includes_no_registration: !self.includes_no_registration,
        }
    }

    pub fn intervals(&self) -> &[Interval<R>] {
        &self.intervals
    }

    pub fn is_complemented(&self) -> bool {
        self.complemented
    }

    pub fn includes_no_registration(&self) -> bool {
        self.includes_no_registration
    }

    /// Point membership of the real part of the selection.
    pub fn contains(&self, q: R) -> bool {
        let inside = self.intervals.iter().any(|iv| iv.contains(q));
        inside != self.complemented
    }

    fn base_ranges(&self, invert: bool) -> Vec<(R, R)> {
        if !invert {
            self.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect()
        } else {
            let mut out = Vec::with_capacity(self.intervals.len() + 1);
            let mut cursor = R::neg_infinity();
            for iv in &self.intervals {
                if cursor < iv.lo {
                    out.push((cursor, iv.lo));
                }
                cursor = iv.hi;
            }
            if cursor < R::infinity() {
                out.push((cursor, R::infinity()));
            }
            out
        }
    }

    /// Concrete integration ranges of the real part, complement resolved.
    pub fn ranges(&self) -> Vec<(R, R)> {
        self.base_ranges(self.complemented)
    }

    /// Integration ranges of the complement of the real part.
    pub fn complement_ranges(&self) -> Vec<(R, R)> {
        self.base_ranges(!self.complemented)
    }
}

/// Node-sampled multipliers of the position effect: `w(q_i) ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionEffect<R> {
    weights: Vec<R>,
    identity_complement: bool,
}

impl<R: Scalar> PositionEffect<R> {
    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> R {
        self.weights[i]
    }

    pub fn is_identity_complement(&self) -> bool {
        self.identity_complement
    }

    /// `T|ψ⟩`, unnormalized: pointwise multiplication of the samples.
    pub fn apply(&self, state: &GridWavefunction<R>) -> Result<GridWavefunction<R>> {
        state.scaled_by(&self.weights)
    }
}

/// Build the effect multipliers for a selection under a detection profile:
/// `p(q)·1_X(q)` without the no-registration outcome, `1 − p(q)·1_{ℝ∖X}(q)`
/// with it.
pub fn position_effect<R: Scalar>(
    sel: &IntervalUnion<R>,
    profile: &PositionDetectionProfile<R>,
    grid: &Grid<R>,
) -> PositionEffect<R> {
    let weights = grid
        .nodes()
        .map(|q| {
            if !sel.includes_no_registration() {
                if sel.contains(q) {
                    profile.evaluate(q)
                } else {
                    R::zero()
                }
            } else if sel.contains(q) {
                R::one()
            } else {
                R::one() - profile.evaluate(q)
            }
        })
        .collect();
    PositionEffect {
        weights,
        identity_complement: sel.includes_no_registration(),
    }
}

/// Born probability `∫_X |ψ(q)|² dq`; the selection must not contain the
/// no-registration outcome.
pub fn conditional_prob_position<R: Scalar>(
    state: &GridWavefunction<R>,
    sel: &IntervalUnion<R>,
) -> Result<R> {
    if sel.includes_no_registration() {
        return Err(Error::SelectionContainsQ0);
    }
    integrate_samples_over_ranges(&state.density(), state.grid(), &sel.ranges())
}

/// Overall probability `∫_X p(q)|ψ(q)|² dq`; for a selection containing the
/// no-registration outcome this is one minus the complement's value, exactly.
pub fn overall_prob_position<R: Scalar>(
    state: &GridWavefunction<R>,
    sel: &IntervalUnion<R>,
    profile: &PositionDetectionProfile<R>,
) -> Result<R> {
    let weighted: Vec<R> = state
        .grid()
        .nodes()
        .zip(state.samples())
        .map(|(q, c)| profile.evaluate(q) * c.norm_sqr())
        .collect();
    if !sel.includes_no_registration() {
        integrate_samples_over_ranges(&weighted, state.grid(), &sel.ranges())
    } else {
        let complement =
            integrate_samples_over_ranges(&weighted, state.grid(), &sel.complement_ranges())?;
        Ok(R::one() - complement)
    }
}

/// State after a yes answer: samples multiplied by the effect weights and
/// renormalized on the grid.
pub fn collapse_position_yes<R: Scalar>(
    state: &GridWavefunction<R>,
    sel: &IntervalUnion<R>,
    profile: &PositionDetectionProfile<R>,
) -> Result<GridWavefunction<R>> {
    if overall_prob_position(state, sel, profile)? <= R::of(ZERO_OUTCOME) {
        return Err(Error::ZeroProbabilityOutcome);
    }
    let effect = position_effect(sel, profile, state.grid());
    effect
        .apply(state)?
        .normalized()
        .map_err(|_| Error::ZeroProbabilityOutcome)
}

/// State after no detection: `ψ'(q) ∝ (1 − p(q))·ψ(q)`, normalized with
/// `√(∫ (1−p)² |ψ|² dq)`.
pub fn collapse_position_no_detection<R: Scalar>(
    state: &GridWavefunction<R>,
    profile: &PositionDetectionProfile<R>,
) -> Result<GridWavefunction<R>> {
    let no_detect = R::one() - overall_prob_position(state, &IntervalUnion::full_line(), profile)?;
    if no_detect <= R::of(ZERO_OUTCOME) {
        return Err(Error::DetectionCertain);
    }
    let damping: Vec<R> = state
        .grid()
        .nodes()
        .map(|q| R::one() - profile.evaluate(q))
        .collect();
    state
        .scaled_by(&damping)?
        .normalized()
        .map_err(|_| Error::DetectionCertain)
}

/// State update for a property measurement answered yes or no.
pub fn gpp_position_property<R: Scalar>(
    state: &GridWavefunction<R>,
    sel: &IntervalUnion<R>,
    profile: &PositionDetectionProfile<R>,
    answer: Answer,
) -> Result<GridWavefunction<R>> {
    let branch = match answer {
        Answer::Yes => sel.clone(),
        Answer::No => sel.complement(),
    };
    let effect = position_effect(&branch, profile, state.grid());
    effect
        .apply(state)?
        .normalized()
        .map_err(|_| Error::ZeroProbabilityOutcome)
}
