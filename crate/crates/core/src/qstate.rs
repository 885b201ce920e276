//! Exact linear-algebra substrate: composite-register statevectors, pure-state
//! ensembles for mixed auxiliary registers, Born-rule measurement of the
//! control subregister, and the trace-distance metric used by the recovery
//! checks.
//!
//! Basis convention: a composite basis index is `control * 2^m + aux`, i.e.
//! the control register occupies the high-order bits. This makes the control
//! marginal a reduction over contiguous chunks.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{hermitian_eigenvalues, pairwise_sum, pairwise_sum_complex};
use crate::qops::BitString;
use crate::scalar::{Amp, Scalar};

/// Normalized amplitudes over `n_control + n_aux` qubits.
#[derive(Clone, Debug)]
pub struct StateVector<T: Scalar> {
    n_control: u32,
    n_aux: u32,
    amps: Vec<Amp<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Wraps raw amplitudes, checking length and normalization.
    pub fn new(n_control: u32, n_aux: u32, amps: Vec<Amp<T>>) -> Result<Self> {
        let expected = 1usize << (n_control + n_aux);
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amps.len(),
            });
        }
        let state = StateVector {
            n_control,
            n_aux,
            amps,
        };
        let dev = (state.norm_sqr() - T::one()).abs();
        if dev > T::NORM_TOL {
            return Err(Error::NotNormalized {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(state)
    }

    pub(crate) fn from_parts_unchecked(n_control: u32, n_aux: u32, amps: Vec<Amp<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << (n_control + n_aux));
        StateVector {
            n_control,
            n_aux,
            amps,
        }
    }

    pub fn n_control(&self) -> u32 {
        self.n_control
    }

    pub fn n_aux(&self) -> u32 {
        self.n_aux
    }

    /// Number of basis states of the control subregister.
    pub fn control_dim(&self) -> usize {
        1 << self.n_control
    }

    /// Number of basis states of the auxiliary subregister.
    pub fn aux_dim(&self) -> usize {
        1 << self.n_aux
    }

    pub fn amps(&self) -> &[Amp<T>] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Amp<T>] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> T {
        let sq: Vec<T> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        pairwise_sum(&sq)
    }

    /// Born-rule distribution of a measurement on the control subregister.
    pub fn control_marginal(&self) -> OutcomeDistribution<T> {
        let m = self.aux_dim();
        let probs: Vec<T> = self
            .amps
            .chunks(m)
            .map(|chunk| {
                let sq: Vec<T> = chunk.iter().map(|a| a.norm_sqr()).collect();
                pairwise_sum(&sq)
            })
            .collect();
        OutcomeDistribution::from_probs(self.n_control, probs)
            .expect("Born-rule marginal of a normalized state is a distribution")
    }

    /// Normalized auxiliary state conditioned on control outcome `y`.
    pub fn collapse_on_outcome(&self, y: BitString) -> Result<Vec<Amp<T>>> {
        if y.width() != self.n_control {
            return Err(Error::WidthMismatch {
                expected: self.n_control,
                actual: y.width(),
            });
        }
        let m = self.aux_dim();
        let chunk = &self.amps[y.value() as usize * m..(y.value() as usize + 1) * m];
        let sq: Vec<T> = chunk.iter().map(|a| a.norm_sqr()).collect();
        let prob = pairwise_sum(&sq);
        if prob <= T::PROB_CLAMP {
            return Err(Error::ZeroProbabilityOutcome {
                outcome: y.value(),
                probability: prob.to_f64().unwrap_or(0.0),
            });
        }
        let scale = T::one() / prob.sqrt();
        Ok(chunk.iter().map(|a| a * scale).collect())
    }
}

/// Product state `|control_basis> (x) |aux>`.
pub fn make_product_state<T: Scalar>(
    control_basis: BitString,
    aux: &[Amp<T>],
) -> Result<StateVector<T>> {
    if !aux.len().is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: aux.len().next_power_of_two(),
            actual: aux.len(),
        });
    }
    let n_aux = aux.len().trailing_zeros();
    let sq: Vec<T> = aux.iter().map(|a| a.norm_sqr()).collect();
    let dev = (pairwise_sum(&sq) - T::one()).abs();
    if dev > T::NORM_TOL {
        return Err(Error::NotNormalized {
            deviation: dev.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n_control = control_basis.width();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << (n_control + n_aux)];
    let base = control_basis.value() as usize * aux.len();
    amps[base..base + aux.len()].copy_from_slice(aux);
    Ok(StateVector::from_parts_unchecked(n_control, n_aux, amps))
}

/// Magnitude of the overlap `|<a|b>|`; 1 means equal up to global phase.
pub fn overlap_magnitude<T: Scalar>(a: &[Amp<T>], b: &[Amp<T>]) -> T {
    assert_eq!(a.len(), b.len(), "overlap requires equal dimensions");
    let prods: Vec<Amp<T>> = a.iter().zip(b).map(|(x, y)| x.conj() * y).collect();
    pairwise_sum_complex(&prods).norm()
}

/// Mixed auxiliary state as a weighted list of pure states.
#[derive(Clone, Debug)]
pub struct AuxEnsemble<T: Scalar> {
    m: u32,
    members: Vec<(T, Vec<Amp<T>>)>,
}

impl<T: Scalar> AuxEnsemble<T> {
    pub fn new(m: u32, members: Vec<(T, Vec<Amp<T>>)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidEnsemble {
                reason: "ensemble must have at least one member".into(),
            });
        }
        let dim = 1usize << m;
        let mut weights = Vec::with_capacity(members.len());
        for (w, state) in &members {
            if state.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: state.len(),
                });
            }
            if *w < T::zero() {
                return Err(Error::InvalidEnsemble {
                    reason: "member weight is negative".into(),
                });
            }
            let sq: Vec<T> = state.iter().map(|a| a.norm_sqr()).collect();
            if (pairwise_sum(&sq) - T::one()).abs() > T::NORM_TOL {
                return Err(Error::InvalidEnsemble {
                    reason: "member state is not normalized".into(),
                });
            }
            weights.push(*w);
        }
        if (pairwise_sum(&weights) - T::one()).abs() > T::NORM_TOL {
            return Err(Error::InvalidEnsemble {
                reason: "member weights do not sum to 1".into(),
            });
        }
        Ok(AuxEnsemble { m, members })
    }

    /// Single pure member with weight 1.
    pub fn pure(state: Vec<Amp<T>>) -> Result<Self> {
        if !state.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: state.len().next_power_of_two(),
                actual: state.len(),
            });
        }
        let m = state.len().trailing_zeros();
        AuxEnsemble::new(m, vec![(T::one(), state)])
    }

    /// The basis state `|k>` as a pure ensemble.
    pub fn basis(m: u32, k: u64) -> Self {
        let dim = 1usize << m;
        assert!((k as usize) < dim, "basis index out of range");
        let mut state = vec![Complex::new(T::zero(), T::zero()); dim];
        state[k as usize] = Complex::new(T::one(), T::zero());
        AuxEnsemble {
            m,
            members: vec![(T::one(), state)],
        }
    }

    /// Uniform mixture of all basis states (the identity/2^m state).
    pub fn maximally_mixed(m: u32) -> Self {
        let dim = 1usize << m;
        let w = T::one() / T::from_count(dim);
        let members = (0..dim)
            .map(|k| {
                let mut state = vec![Complex::new(T::zero(), T::zero()); dim];
                state[k] = Complex::new(T::one(), T::zero());
                (w, state)
            })
            .collect();
        AuxEnsemble { m, members }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn members(&self) -> &[(T, Vec<Amp<T>>)] {
        &self.members
    }

    pub(crate) fn replace_states(&mut self, states: Vec<Vec<Amp<T>>>) {
        debug_assert_eq!(states.len(), self.members.len());
        for ((_, slot), state) in self.members.iter_mut().zip(states) {
            debug_assert_eq!(state.len(), 1usize << self.m);
            *slot = state;
        }
    }
}

/// Dense density matrix, used as a small-size cross-check backend.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Scalar> {
    dim: usize,
    entries: Vec<Amp<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Amp<T>] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> Amp<T> {
        self.entries[r * self.dim + c]
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.entries, self.dim)
    }

    /// Checks the Hermiticity, unit-trace, and positivity invariants.
    pub fn validate(&self) -> Result<()> {
        for r in 0..self.dim {
            for c in 0..self.dim {
                let dev = (self.entry(r, c) - self.entry(c, r).conj()).norm();
                if dev > T::PROB_TOL {
                    return Err(Error::InvalidDistribution {
                        reason: format!("density matrix not Hermitian at ({r},{c})"),
                    });
                }
            }
        }
        let diag: Vec<Amp<T>> = (0..self.dim).map(|r| self.entry(r, r)).collect();
        let trace = pairwise_sum_complex(&diag);
        if (trace.re - T::one()).abs() > T::PROB_TOL || trace.im.abs() > T::PROB_TOL {
            return Err(Error::InvalidDistribution {
                reason: "density matrix trace is not 1".into(),
            });
        }
        let min = self
            .eigenvalues()
            .into_iter()
            .fold(T::infinity(), |a, b| a.min(b));
        if min < -T::PROB_TOL {
            return Err(Error::InvalidDistribution {
                reason: "density matrix has a negative eigenvalue".into(),
            });
        }
        Ok(())
    }
}

/// Weighted sum of outer products of the ensemble members.
pub fn ensemble_to_density<T: Scalar>(ens: &AuxEnsemble<T>) -> DensityMatrix<T> {
    let dim = ens.dim();
    let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for (w, state) in ens.members() {
        for r in 0..dim {
            let wr = state[r] * *w;
            for c in 0..dim {
                entries[r * dim + c] = entries[r * dim + c] + wr * state[c].conj();
            }
        }
    }
    DensityMatrix { dim, entries }
}

/// Half the absolute eigenvalue sum of `a - b`; 0 for identical states,
/// 1 for orthogonal pure states.
pub fn trace_distance<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            actual: b.dim,
        });
    }
    let diff: Vec<Amp<T>> = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x - y)
        .collect();
    let eigs = hermitian_eigenvalues(&diff, a.dim);
    let abs: Vec<T> = eigs.into_iter().map(|e| e.abs()).collect();
    Ok(pairwise_sum(&abs) / T::from_count(2))
}

/// Probability vector over control-register outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution<T: Scalar> {
    n: u32,
    probs: Vec<T>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    /// Validates and clamps a raw probability vector. Entries more negative
    /// than the clamp threshold are rejected; smaller magnitudes are set to
    /// exactly zero so downstream samplers never see float dust.
    pub fn from_probs(n: u32, mut probs: Vec<T>) -> Result<Self> {
        let expected = 1usize << n;
        if probs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: probs.len(),
            });
        }
        let sum = pairwise_sum(&probs);
        if (sum - T::one()).abs() > T::PROB_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!(
                    "probabilities sum to {}",
                    sum.to_f64().unwrap_or(f64::NAN)
                ),
            });
        }
        for p in &mut probs {
            if *p < -T::PROB_CLAMP {
                return Err(Error::InvalidDistribution {
                    reason: format!("negative probability {}", p.to_f64().unwrap_or(f64::NAN)),
                });
            }
            if p.abs() < T::PROB_CLAMP {
                *p = T::zero();
            }
        }
        Ok(OutcomeDistribution { n, probs })
    }

    /// All mass on a single outcome.
    pub fn point_mass(n: u32, y: u64) -> Self {
        let mut probs = vec![T::zero(); 1 << n];
        probs[y as usize] = T::one();
        OutcomeDistribution { n, probs }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, y: u64) -> T {
        self.probs[y as usize]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "distributions over different registers");
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), |acc, d| acc.max(d))
    }

    pub fn total_variation(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "distributions over different registers");
        let diffs: Vec<T> = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (*a - *b).abs())
            .collect();
        pairwise_sum(&diffs) / T::from_count(2)
    }

    /// Draws one outcome by inverse-CDF sampling; clamped-zero entries can
    /// never be produced.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        let total = pairwise_sum(&self.probs);
        let u = T::from_f64(rng.gen::<f64>()).unwrap() * total;
        let mut acc = T::zero();
        let mut last_positive = 0u64;
        for (y, &p) in self.probs.iter().enumerate() {
            if p <= T::zero() {
                continue;
            }
            last_positive = y as u64;
            acc = acc + p;
            if u < acc {
                return y as u64;
            }
        }
        last_positive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Amp<f64> {
        Complex::new(re, im)
    }

    fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Amp<f64>> {
        let mut v: Vec<Amp<f64>> = (0..dim)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut v {
            *a /= norm;
        }
        v
    }

    #[test]
    fn product_state_basis_examples() {
        // (|0>, |0>) with n = m = 1.
        let s = make_product_state(BitString::new(1, 0).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert_eq!(s.amps(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        // (|1>, (|0>+|1>)/sqrt(2)).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s =
            make_product_state(BitString::new(1, 1).unwrap(), &[c(h, 0.0), c(h, 0.0)]).unwrap();
        assert!(s.amps()[0].norm() < 1e-15);
        assert!(s.amps()[1].norm() < 1e-15);
        assert!((s.amps()[2].re - h).abs() < 1e-15);
        assert!((s.amps()[3].re - h).abs() < 1e-15);
    }

    #[test]
    fn product_state_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let aux = random_unit(8, &mut rng);
        let s = make_product_state(BitString::new(2, 0).unwrap(), &aux).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_rejects_unnormalized_aux() {
        let err = make_product_state(BitString::new(1, 0).unwrap(), &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(err.is_err());
    }

    #[test]
    fn control_marginal_uniform_state() {
        let s = StateVector::new(1, 1, vec![c(0.5, 0.0); 4]).unwrap();
        let d = s.control_marginal();
        assert!((d.prob(0) - 0.5).abs() < 1e-12);
        assert!((d.prob(1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn control_marginal_product_state_is_point_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let aux = random_unit(4, &mut rng);
        let s = make_product_state(BitString::new(2, 2).unwrap(), &aux).unwrap();
        let d = s.control_marginal();
        assert!((d.prob(2) - 1.0).abs() < 1e-12);
        assert_eq!(d.prob(0), 0.0);
    }

    #[test]
    fn collapse_recovers_product_aux() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let aux = random_unit(4, &mut rng);
        let y = BitString::new(2, 1).unwrap();
        let s = make_product_state(y, &aux).unwrap();
        let out = s.collapse_on_outcome(y).unwrap();
        assert!(overlap_magnitude(&aux, &out) > 1.0 - 1e-12);
    }

    #[test]
    fn collapse_entangled_schmidt_form() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (|0>|0> + |1>|1>)/sqrt(2)
        let s = StateVector::new(1, 1, vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)])
            .unwrap();
        let out = s.collapse_on_outcome(BitString::new(1, 0).unwrap()).unwrap();
        assert!((out[0].norm() - 1.0).abs() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }

    #[test]
    fn collapse_zero_probability_rejected() {
        let s = make_product_state(BitString::new(1, 0).unwrap(), &[c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let err = s.collapse_on_outcome(BitString::new(1, 1).unwrap());
        assert!(matches!(err, Err(Error::ZeroProbabilityOutcome { .. })));
    }

    #[test]
    fn ensemble_density_examples() {
        // {(1, |0>)} -> diag(1, 0)
        let rho = ensemble_to_density(&AuxEnsemble::<f64>::basis(1, 0));
        assert!((rho.entry(0, 0).re - 1.0).abs() < 1e-15);
        assert!(rho.entry(1, 1).norm() < 1e-15);

        // {(1/2, |0>), (1/2, |1>)} -> diag(1/2, 1/2)
        let rho = ensemble_to_density(&AuxEnsemble::<f64>::maximally_mixed(1));
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-15);
        assert!(rho.entry(0, 1).norm() < 1e-15);

        // {(1/2, |+>), (1/2, |->)} -> diag(1/2, 1/2)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ens = AuxEnsemble::new(
            1,
            vec![
                (0.5, vec![c(h, 0.0), c(h, 0.0)]),
                (0.5, vec![c(h, 0.0), c(-h, 0.0)]),
            ],
        )
        .unwrap();
        let rho = ensemble_to_density(&ens);
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-14);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-14);
        assert!(rho.entry(0, 1).norm() < 1e-14);
        rho.validate().unwrap();
    }

    #[test]
    fn ensemble_splitting_leaves_density_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = random_unit(4, &mut rng);
        let whole = AuxEnsemble::new(2, vec![(1.0, psi.clone())]).unwrap();
        let split = AuxEnsemble::new(2, vec![(0.5, psi.clone()), (0.5, psi)]).unwrap();
        let d = trace_distance(&ensemble_to_density(&whole), &ensemble_to_density(&split))
            .unwrap();
        assert!(d < 1e-14);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = ensemble_to_density(&AuxEnsemble::<f64>::basis(1, 0));
        let one = ensemble_to_density(&AuxEnsemble::<f64>::basis(1, 1));
        let mixed = ensemble_to_density(&AuxEnsemble::<f64>::maximally_mixed(1));

        assert!(trace_distance(&zero, &zero).unwrap() < 1e-14);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        // diag(1,0) vs diag(1/2,1/2): difference has eigenvalues +/- 1/2.
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_dimension_mismatch() {
        let a = ensemble_to_density(&AuxEnsemble::<f64>::basis(1, 0));
        let b = ensemble_to_density(&AuxEnsemble::<f64>::basis(2, 0));
        assert!(trace_distance(&a, &b).is_err());
    }

    #[test]
    fn distribution_clamps_dust() {
        let d = OutcomeDistribution::from_probs(1, vec![1.0 - 1e-14, 1e-14]).unwrap();
        assert_eq!(d.prob(1), 0.0);
    }

    #[test]
    fn distribution_rejects_bad_sum() {
        assert!(OutcomeDistribution::from_probs(1, vec![0.7, 0.2]).is_err());
    }

    #[test]
    fn sampler_excludes_zeroed_outcomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = OutcomeDistribution::from_probs(2, vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        for _ in 0..200 {
            let y = d.sample(&mut rng);
            assert!(y == 0 || y == 2);
        }
    }

    proptest! {
        #[test]
        fn collapse_then_reembed_is_point_mass(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let state = {
                let amps = random_unit(16, &mut rng);
                StateVector::new(2, 2, amps).unwrap()
            };
            let marginal = state.control_marginal();
            for y in 0..4u64 {
                if marginal.prob(y) > 1e-6 {
                    let yb = BitString::new(2, y).unwrap();
                    let aux = state.collapse_on_outcome(yb).unwrap();
                    let re = make_product_state(yb, &aux).unwrap();
                    let d = re.control_marginal();
                    prop_assert!((d.prob(y) - 1.0).abs() < 1e-10);
                }
            }
        }
    }
}
