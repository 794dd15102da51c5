//! Monte Carlo sampling of idealized measurement sequences.
//!
//! Outcomes are drawn from the overall probabilities (detection included),
//! post-measurement states follow the generalized state-update rules, and
//! everything is reproducible from a 64-bit seed. Trials are independent —
//! each gets its own counter-based RNG stream — so they can run in parallel
//! and still merge deterministically by trial index.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{
    collapse_energy_no_detection, collapse_energy_outcome, gpp_energy_property,
    no_detection_prob_energy, overall_prob_energy, property_probability_energy, Answer,
    EnergySelection,
};
use crate::error::{Error, Result};
use crate::fock::{energy_eigenvalue, Grid, QuadratureMethod, QuadratureRule};
use crate::position::{
    collapse_position_no_detection, collapse_position_yes, gpp_position_property,
    overall_prob_position, IntervalUnion,
};
use crate::profiles::{EnergyDetectionProfile, PositionDetectionProfile};
use crate::scalar::Scalar;
use crate::states::{fock_to_position, position_to_fock, FockVector, GridWavefunction};

/// Identifier of the generator backing all sampling, recorded in output
/// metadata so runs are auditable.
pub const RNG_ALGORITHM: &str = "chacha8";

/// 64-bit seed; the same seed reproduces the same trajectory byte for byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

/// One measurement in a sequence.
#[derive(Debug, Clone)]
pub enum MeasurementSpec<R: Scalar> {
    /// Full-outcome energy measurement: outcome `E_n` or no registration.
    EnergySpectrum { profile: EnergyDetectionProfile<R> },
    /// Yes/no measurement of the energy property `(H₀, X)`.
    EnergyProperty {
        selection: EnergySelection,
        profile: EnergyDetectionProfile<R>,
    },
    /// Binned position measurement: one bin per interval union, or no
    /// registration.
    PositionBins {
        bins: Vec<IntervalUnion<R>>,
        profile: PositionDetectionProfile<R>,
    },
    /// Yes/no measurement of the position property `(Q₀, X)`.
    PositionProperty {
        selection: IntervalUnion<R>,
        profile: PositionDetectionProfile<R>,
    },
}

/// Sampled outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    EnergyLevel(usize),
    PositionBin(usize),
    Answer(Answer),
    NoRegistration,
}

impl Outcome {
    pub fn label(&self) -> String {
        match self {
            Outcome::EnergyLevel(n) => format!("E_{n}"),
            Outcome::PositionBin(k) => format!("bin_{k}"),
            Outcome::Answer(Answer::Yes) => "yes".into(),
            Outcome::Answer(Answer::No) => "no".into(),
            Outcome::NoRegistration => "no_registration".into(),
        }
    }
}

/// A state in whichever representation the last measurement left it.
#[derive(Debug, Clone)]
pub enum AnyState<R: Scalar> {
    Fock(FockVector<R>),
    Grid(GridWavefunction<R>),
}

impl<R: Scalar> AnyState<R> {
    pub fn to_fock(&self, ctx: &SamplerContext<R>) -> Result<FockVector<R>> {
        match self {
            AnyState::Fock(f) => Ok(f.clone()),
            AnyState::Grid(g) => position_to_fock(g, ctx.n_max)?.normalized(),
        }
    }

    pub fn to_grid(&self, ctx: &SamplerContext<R>) -> Result<GridWavefunction<R>> {
        match self {
            AnyState::Fock(f) => fock_to_position(f, &ctx.grid)?.normalized(),
            AnyState::Grid(g) => Ok(g.clone()),
        }
    }

    /// `|⟨self|other⟩|`, converting across representations when needed.
    pub fn fidelity(&self, other: &Self, ctx: &SamplerContext<R>) -> Result<R> {
        match (self, other) {
            (AnyState::Fock(a), AnyState::Fock(b)) => a.fidelity(b),
            (AnyState::Grid(a), AnyState::Grid(b)) => a.fidelity(b),
            (AnyState::Fock(_), AnyState::Grid(b)) => self.to_grid(ctx)?.fidelity(b),
            (AnyState::Grid(a), AnyState::Fock(_)) => a.fidelity(&other.to_grid(ctx)?),
        }
    }
}

/// Shared context for a measurement sequence: the grid and truncation used
/// when converting between representations, and the conventional values of
/// the no-registration outcomes.
#[derive(Debug, Clone)]
pub struct SamplerContext<R: Scalar> {
    grid: Grid<R>,
    n_max: usize,
    no_registration_energy: R,
    no_registration_position: R,
}

impl<R: Scalar> SamplerContext<R> {
    pub fn new(grid: Grid<R>, n_max: usize) -> Self {
        Self {
            grid,
            n_max,
            no_registration_energy: R::zero(),
            no_registration_position: R::zero(),
        }
    }

    pub fn with_no_registration_values(mut self, h0: R, q0: R) -> Self {
        self.no_registration_energy = h0;
        self.no_registration_position = q0;
        self
    }

    pub fn grid(&self) -> &Grid<R> {
        &self.grid
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

/// One sampled measurement with its post-state.
#[derive(Debug, Clone)]
pub struct MeasurementRecord<R: Scalar> {
    pub outcome: Outcome,
    /// Numeric value of the outcome: `E_n`, a bin midpoint, 1/0 for yes/no,
    /// or the no-registration value.
    pub outcome_value: R,
    /// Analytic probability of the sampled outcome under the pre-state.
    pub probability_analytic: R,
    /// `|⟨ψ_initial|ψ_pre⟩|` for the trajectory this record belongs to.
    pub pre_fidelity: R,
    /// `|⟨ψ_initial|ψ_post⟩|`.
    pub post_fidelity: R,
    pub post_state: AnyState<R>,
}

/// Outcome table of a single measurement: `(outcome, probability, value)`.
type Distribution<R> = Vec<(Outcome, R, R)>;

/// Per-bin masses with nodes shared by several bins split evenly, so the
/// bin masses partition the detected probability exactly.
fn bin_masses<R: Scalar>(
    wf: &GridWavefunction<R>,
    bins: &[IntervalUnion<R>],
    profile: &PositionDetectionProfile<R>,
) -> Result<Vec<R>> {
    if bins.is_empty() {
        return Err(Error::OutOfRange {
            what: "bin count",
            value: 0.0,
            bounds: "[1, inf)",
        });
    }
    if bins.iter().any(|b| b.includes_no_registration()) {
        return Err(Error::SelectionContainsQ0);
    }
    let rule = QuadratureRule::for_grid(wf.grid(), QuadratureMethod::Trapezoid);
    let mut masses = vec![R::zero(); bins.len()];
    for (i, q) in wf.grid().nodes().enumerate() {
        let mass = rule.weights()[i] * profile.evaluate(q) * wf.samples()[i].norm_sqr();
        let holders: Vec<usize> = bins
            .iter()
            .enumerate()
            .filter(|(_, b)| b.contains(q))
            .map(|(k, _)| k)
            .collect();
        if holders.is_empty() {
            if mass > R::of(1e-12) {
                return Err(Error::BinGapDetected { q: q.as_f64() });
            }
            continue;
        }
        let share = mass / R::of_usize(holders.len());
        for k in holders {
            masses[k] = masses[k] + share;
        }
    }
    Ok(masses)
}

fn bin_value<R: Scalar>(bin: &IntervalUnion<R>, grid: &Grid<R>) -> R {
    // Midpoint of the covered range, clipped to the grid.
    let lo = bin
        .ranges()
        .first()
        .map(|r| r.0)
        .unwrap_or(grid.q_min())
        .max(grid.q_min());
    let hi = bin
        .ranges()
        .last()
        .map(|r| r.1)
        .unwrap_or(grid.q_max())
        .min(grid.q_max());
    (lo + hi) / R::of(2.0)
}

/// Convert the working state into the representation the spec needs and
/// tabulate the outcome distribution.
fn prepare<R: Scalar>(
    state: &AnyState<R>,
    spec: &MeasurementSpec<R>,
    ctx: &SamplerContext<R>,
) -> Result<(AnyState<R>, Distribution<R>)> {
    match spec {
        MeasurementSpec::EnergySpectrum { profile } => {
            let fock = state.to_fock(ctx)?;
            let mut dist = Vec::with_capacity(fock.n_max() + 2);
            for n in 0..=fock.n_max() {
                dist.push((
                    Outcome::EnergyLevel(n),
                    overall_prob_energy(&fock, n, profile)?,
                    energy_eigenvalue(n, fock.params()),
                ));
            }
            dist.push((
                Outcome::NoRegistration,
                no_detection_prob_energy(&fock, profile),
                ctx.no_registration_energy,
            ));
            Ok((AnyState::Fock(fock), dist))
        }
        MeasurementSpec::EnergyProperty { selection, profile } => {
            let fock = state.to_fock(ctx)?;
            let p_yes = property_probability_energy(&fock, selection, profile)?;
            let dist = vec![
                (Outcome::Answer(Answer::Yes), p_yes, R::one()),
                (Outcome::Answer(Answer::No), R::one() - p_yes, R::zero()),
            ];
            Ok((AnyState::Fock(fock), dist))
        }
        MeasurementSpec::PositionBins { bins, profile } => {
            let grid_state = state.to_grid(ctx)?;
            let masses = bin_masses(&grid_state, bins, profile)?;
            let mut dist = Vec::with_capacity(bins.len() + 1);
            let mut detected = R::zero();
            for (k, (bin, &mass)) in bins.iter().zip(&masses).enumerate() {
                detected = detected + mass;
                dist.push((Outcome::PositionBin(k), mass, bin_value(bin, grid_state.grid())));
            }
            let residual = (R::one() - detected).max(R::zero());
            dist.push((
                Outcome::NoRegistration,
                residual,
                ctx.no_registration_position,
            ));
            Ok((AnyState::Grid(grid_state), dist))
        }
        MeasurementSpec::PositionProperty { selection, profile } => {
            let grid_state = state.to_grid(ctx)?;
            let p_yes = overall_prob_position(&grid_state, selection, profile)?;
            let dist = vec![
                (Outcome::Answer(Answer::Yes), p_yes, R::one()),
                (Outcome::Answer(Answer::No), R::one() - p_yes, R::zero()),
            ];
            Ok((AnyState::Grid(grid_state), dist))
        }
    }
}

/// Draw an outcome index from the tabulated distribution. Any residual mass
/// beyond the listed outcomes falls to the last entry.
fn draw<R: Scalar>(dist: &Distribution<R>, u: R) -> usize {
    let mut acc = R::zero();
    for (i, &(_, p, _)) in dist.iter().enumerate() {
        acc = acc + p;
        if u < acc {
            return i;
        }
    }
    dist.len() - 1
}

fn post_state<R: Scalar>(
    prepared: &AnyState<R>,
    spec: &MeasurementSpec<R>,
    outcome: Outcome,
) -> Result<AnyState<R>> {
    match (spec, prepared) {
        (MeasurementSpec::EnergySpectrum { profile }, AnyState::Fock(fock)) => match outcome {
            Outcome::EnergyLevel(n) => Ok(AnyState::Fock(collapse_energy_outcome(fock, n)?)),
            Outcome::NoRegistration => {
                Ok(AnyState::Fock(collapse_energy_no_detection(fock, profile)?))
            }
            _ => unreachable!("energy spectrum outcome"),
        },
        (MeasurementSpec::EnergyProperty { selection, profile }, AnyState::Fock(fock)) => {
            let answer = match outcome {
                Outcome::Answer(a) => a,
                _ => unreachable!("property outcome"),
            };
            Ok(AnyState::Fock(gpp_energy_property(
                fock, selection, profile, answer,
            )?))
        }
        (MeasurementSpec::PositionBins { bins, profile }, AnyState::Grid(wf)) => match outcome {
            Outcome::PositionBin(k) => Ok(AnyState::Grid(collapse_position_yes(
                wf, &bins[k], profile,
            )?)),
            Outcome::NoRegistration => Ok(AnyState::Grid(collapse_position_no_detection(
                wf, profile,
            )?)),
            _ => unreachable!("binned position outcome"),
        },
        (MeasurementSpec::PositionProperty { selection, profile }, AnyState::Grid(wf)) => {
            let answer = match outcome {
                Outcome::Answer(a) => a,
                _ => unreachable!("property outcome"),
            };
            Ok(AnyState::Grid(gpp_position_property(
                wf, selection, profile, answer,
            )?))
        }
        _ => unreachable!("prepare() fixed the representation"),
    }
}

fn measure_once<R: Scalar>(
    state: &AnyState<R>,
    spec: &MeasurementSpec<R>,
    ctx: &SamplerContext<R>,
    rng: &mut ChaCha8Rng,
) -> Result<(Outcome, R, R, AnyState<R>)> {
    let (prepared, dist) = prepare(state, spec, ctx)?;
    let u = R::of(rng.gen::<f64>());
    let idx = draw(&dist, u);
    let (outcome, prob, value) = dist[idx];
    let post = post_state(&prepared, spec, outcome)?;
    Ok((outcome, value, prob, post))
}

/// Single full-outcome energy measurement.
pub fn sample_energy<R: Scalar>(
    state: &FockVector<R>,
    profile: &EnergyDetectionProfile<R>,
    seed: RngSeed,
) -> Result<MeasurementRecord<R>> {
    let ctx = SamplerContext::new(Grid::default_for(state.n_max(), state.params()), state.n_max());
    let spec = MeasurementSpec::EnergySpectrum {
        profile: profile.clone(),
    };
    let initial = AnyState::Fock(state.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let (outcome, value, prob, post) = measure_once(&initial, &spec, &ctx, &mut rng)?;
    Ok(MeasurementRecord {
        outcome,
        outcome_value: value,
        probability_analytic: prob,
        pre_fidelity: R::one(),
        post_fidelity: initial.fidelity(&post, &ctx)?,
        post_state: post,
    })
}

/// Single binned position measurement.
pub fn sample_position<R: Scalar>(
    state: &GridWavefunction<R>,
    bins: &[IntervalUnion<R>],
    profile: &PositionDetectionProfile<R>,
    seed: RngSeed,
) -> Result<MeasurementRecord<R>> {
    let ctx = SamplerContext::new(state.grid().clone(), 64);
    let spec = MeasurementSpec::PositionBins {
        bins: bins.to_vec(),
        profile: profile.clone(),
    };
    let initial = AnyState::Grid(state.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let (outcome, value, prob, post) = measure_once(&initial, &spec, &ctx, &mut rng)?;
    Ok(MeasurementRecord {
        outcome,
        outcome_value: value,
        probability_analytic: prob,
        pre_fidelity: R::one(),
        post_fidelity: initial.fidelity(&post, &ctx)?,
        post_state: post,
    })
}

/// Run an ordered sequence of measurements on one physical object, threading
/// the state through the generalized updates.
pub fn run_sequence<R: Scalar>(
    initial: &AnyState<R>,
    specs: &[MeasurementSpec<R>],
    seed: RngSeed,
    ctx: &SamplerContext<R>,
) -> Result<Vec<MeasurementRecord<R>>> {
    if specs.is_empty() {
        return Err(Error::OutOfRange {
            what: "measurement count",
            value: 0.0,
            bounds: "[1, inf)",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut state = initial.clone();
    let mut records = Vec::with_capacity(specs.len());
    for spec in specs {
        let pre_fidelity = initial.fidelity(&state, ctx)?;
        let (outcome, value, prob, post) = measure_once(&state, spec, ctx, &mut rng)?;
        let post_fidelity = initial.fidelity(&post, ctx)?;
        records.push(MeasurementRecord {
            outcome,
            outcome_value: value,
            probability_analytic: prob,
            pre_fidelity,
            post_fidelity,
            post_state: post.clone(),
        });
        state = post;
    }
    Ok(records)
}

/// Run `f` once per trial index, fanning the trials out over up to
/// `threads` workers; results come back ordered by trial index.
pub fn parallel_trials<T, F>(trials: u64, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let threads = threads.max(1).min(trials.max(1) as usize);
    if threads == 1 {
        return (0..trials).map(f).collect();
    }
    let chunk = trials.div_ceil(threads as u64);
    let mut chunks: Vec<Vec<T>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads as u64)
            .map(|w| {
                let f = &f;
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(trials);
                scope.spawn(move || (lo..hi).map(f).collect::<Vec<T>>())
            })
            .collect();
        for h in handles {
            chunks.push(h.join().expect("trial worker panicked"));
        }
    });
    chunks.into_iter().flatten().collect()
}

/// Outcome counts of repeated one-shot measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<Outcome, u64>,
    trials: u64,
}

impl EmpiricalDistribution {
    pub fn counts(&self) -> &BTreeMap<Outcome, u64> {
        &self.counts
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn count(&self, outcome: Outcome) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: Outcome) -> f64 {
        self.count(outcome) as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> BTreeMap<Outcome, f64> {
        self.counts
            .iter()
            .map(|(&o, &c)| (o, c as f64 / self.trials as f64))
            .collect()
    }
}

/// Repeat one measurement `trials` times on fresh copies of `initial` and
/// count outcomes. Trial `t` draws from stream `t + 1` of the seeded
/// generator, so results are independent of the worker count.
pub fn empirical_distribution<R: Scalar>(
    initial: &AnyState<R>,
    spec: &MeasurementSpec<R>,
    trials: u64,
    seed: RngSeed,
    threads: usize,
    ctx: &SamplerContext<R>,
) -> Result<EmpiricalDistribution> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            what: "trials",
            value: 0.0,
            bounds: "[1, inf)",
        });
    }
    let (_, dist) = prepare(initial, spec, ctx)?;
    let picks = parallel_trials(trials, threads, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
        rng.set_stream(t + 1);
        draw(&dist, R::of(rng.gen::<f64>()))
    });
    let mut counts = BTreeMap::new();
    for idx in picks {
        *counts.entry(dist[idx].0).or_insert(0u64) += 1;
    }
    Ok(EmpiricalDistribution { counts, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OscillatorParams;
    use approx::assert_relative_eq;

    fn natural() -> OscillatorParams<f64> {
        OscillatorParams::natural()
    }

    fn ctx(n_max: usize) -> SamplerContext<f64> {
        SamplerContext::new(Grid::default_for(n_max, &natural()), n_max)
    }

    #[test]
    fn certain_detection_pins_the_outcome() {
        let phi3 = FockVector::basis_state(3, 8, natural()).unwrap();
        let p1 = EnergyDetectionProfile::constant(1.0).unwrap();
        for seed in 0..20 {
            let rec = sample_energy(&phi3, &p1, RngSeed(seed)).unwrap();
            assert_eq!(rec.outcome, Outcome::EnergyLevel(3));
            assert_eq!(rec.outcome_value, 3.5);
            match &rec.post_state {
                AnyState::Fock(f) => {
                    assert_relative_eq!(f.fidelity(&phi3).unwrap(), 1.0, epsilon = 1e-12)
                }
                _ => panic!("expected Fock post-state"),
            }
        }
    }

    #[test]
    fn zero_detection_always_misses() {
        let state = FockVector::equal_superposition(&[0, 1], 8, natural()).unwrap();
        let p0 = EnergyDetectionProfile::constant(0.0).unwrap();
        for seed in 0..20 {
            let rec = sample_energy(&state, &p0, RngSeed(seed)).unwrap();
            assert_eq!(rec.outcome, Outcome::NoRegistration);
            assert_eq!(rec.probability_analytic, 1.0);
        }
    }

    #[test]
    fn sequences_are_seed_deterministic() {
        let state = AnyState::Fock(
            FockVector::equal_superposition(&[0, 1, 2], 12, natural()).unwrap(),
        );
        let specs = vec![
            MeasurementSpec::EnergySpectrum {
                profile: EnergyDetectionProfile::geometric(0.9, 0.8).unwrap(),
            },
            MeasurementSpec::PositionBins {
                bins: vec![
                    IntervalUnion::new(vec![(f64::NEG_INFINITY, 0.0)]).unwrap(),
                    IntervalUnion::new(vec![(0.0, f64::INFINITY)]).unwrap(),
                ],
                profile: PositionDetectionProfile::constant(0.9).unwrap(),
            },
            MeasurementSpec::EnergyProperty {
                selection: EnergySelection::of_levels([0, 1]),
                profile: EnergyDetectionProfile::constant(0.8).unwrap(),
            },
        ];
        let c = ctx(12);
        let a = run_sequence(&state, &specs, RngSeed(42), &c).unwrap();
        let b = run_sequence(&state, &specs, RngSeed(42), &c).unwrap();
        assert_eq!(a.len(), 3);
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.outcome, rb.outcome);
            assert_eq!(ra.outcome_value, rb.outcome_value);
            assert_eq!(ra.probability_analytic, rb.probability_analytic);
            assert_eq!(ra.pre_fidelity, rb.pre_fidelity);
            assert_eq!(ra.post_fidelity, rb.post_fidelity);
        }
        // Intermediate states stay normalized.
        for rec in &a {
            let norm = match &rec.post_state {
                AnyState::Fock(f) => f.norm(),
                AnyState::Grid(g) => g.norm(),
            };
            assert_relative_eq!(norm, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn repeated_measurement_is_repeatable_in_qm_limit() {
        let state = AnyState::Fock(
            FockVector::equal_superposition(&[0, 1, 2, 3], 8, natural()).unwrap(),
        );
        let spec = MeasurementSpec::EnergySpectrum {
            profile: EnergyDetectionProfile::constant(1.0).unwrap(),
        };
        let specs = vec![spec; 6];
        let records = run_sequence(&state, &specs, RngSeed(7), &ctx(8)).unwrap();
        let first = records[0].outcome;
        for rec in &records {
            assert_eq!(rec.outcome, first);
        }
        assert_eq!(records.last().unwrap().probability_analytic, 1.0);
    }

    #[test]
    fn empty_sequences_are_rejected() {
        let state = AnyState::Fock(FockVector::basis_state(0, 4, natural()).unwrap());
        assert!(run_sequence(&state, &[], RngSeed(1), &ctx(4)).is_err());
    }

    #[test]
    fn empirical_distribution_counts_sum_to_trials() {
        let state = AnyState::Fock(
            FockVector::equal_superposition(&[0, 1], 8, natural()).unwrap(),
        );
        let spec = MeasurementSpec::EnergySpectrum {
            profile: EnergyDetectionProfile::constant(0.8).unwrap(),
        };
        let dist = empirical_distribution(&state, &spec, 4000, RngSeed(11), 1, &ctx(8)).unwrap();
        let total: u64 = dist.counts().values().sum();
        assert_eq!(total, 4000);
        let freq_sum: f64 = dist.frequencies().values().sum();
        assert_relative_eq!(freq_sum, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn empirical_distribution_is_thread_count_invariant() {
        let state = AnyState::Fock(
            FockVector::equal_superposition(&[0, 1, 2], 8, natural()).unwrap(),
        );
        let spec = MeasurementSpec::EnergySpectrum {
            profile: EnergyDetectionProfile::geometric(0.9, 0.6).unwrap(),
        };
        let c = ctx(8);
        let a = empirical_distribution(&state, &spec, 5000, RngSeed(3), 1, &c).unwrap();
        let b = empirical_distribution(&state, &spec, 5000, RngSeed(3), 4, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn position_bins_partition_probability() {
        let state = FockVector::basis_state(0, 16, natural()).unwrap();
        let grid = Grid::default_for(16, &natural());
        let wf = fock_to_position(&state, &grid).unwrap();
        let bins = vec![
            IntervalUnion::new(vec![(f64::NEG_INFINITY, 0.0)]).unwrap(),
            IntervalUnion::new(vec![(0.0, f64::INFINITY)]).unwrap(),
        ];
        let p = PositionDetectionProfile::constant(1.0).unwrap();
        let masses = bin_masses(&wf, &bins, &p).unwrap();
        // Node q = 0 is shared and split evenly, so symmetry is exact.
        assert_relative_eq!(masses[0], masses[1], epsilon = 1e-12);
        assert_relative_eq!(masses[0] + masses[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn gaps_in_bins_are_detected() {
        let state = FockVector::basis_state(0, 16, natural()).unwrap();
        let grid = Grid::default_for(16, &natural());
        let wf = fock_to_position(&state, &grid).unwrap();
        let bins = vec![
            IntervalUnion::new(vec![(f64::NEG_INFINITY, -1.0)]).unwrap(),
            IntervalUnion::new(vec![(1.0, f64::INFINITY)]).unwrap(),
        ];
        let p = PositionDetectionProfile::constant(1.0).unwrap();
        assert!(matches!(
            bin_masses(&wf, &bins, &p),
            Err(Error::BinGapDetected { .. })
        ));
    }

    #[test]
    fn no_registration_residual_matches_profile() {
        let state = FockVector::basis_state(0, 16, natural()).unwrap();
        let grid = Grid::default_for(16, &natural());
        let wf = fock_to_position(&state, &grid).unwrap();
        let bins = vec![IntervalUnion::full_line()];
        let p = PositionDetectionProfile::constant(0.7).unwrap();
        let rec = sample_position(&wf, &bins, &p, RngSeed(5)).unwrap();
        match rec.outcome {
            Outcome::PositionBin(0) => {
                assert_relative_eq!(rec.probability_analytic, 0.7, epsilon = 1e-8)
            }
            Outcome::NoRegistration => {
                assert_relative_eq!(rec.probability_analytic, 0.3, epsilon = 1e-8)
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
