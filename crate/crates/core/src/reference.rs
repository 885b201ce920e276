//! Independent closed-form evaluation of the outcome probabilities. Nothing
//! here touches the statevector engine: distributions are computed straight
//! from the coset sums and geometric phase sums, so they can serve as an
//! oracle for the pipelines in `simon` and `period`.
//!
//! Every evaluator is gated on its own normalization: if a distribution does
//! not sum to 1 within the formula gate, the transcription of the sum limits
//! is wrong and the evaluator refuses to return it.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{PeriodicInstance, SimonInstance};
use crate::math::{pairwise_sum, pairwise_sum_complex};
use crate::qops::{parity, BitString};
use crate::qstate::OutcomeDistribution;
use crate::scalar::{unit_root_table, Scalar};

/// Which closed form produced a [`FormulaResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// Hidden-shift outcome probabilities for one fixed phase string.
    SimonFixedPhase,
    /// Hidden-shift probabilities averaged over all phase strings.
    SimonAveraged,
    /// Period-finding probabilities of the plain pipeline.
    PeriodOriginal,
    /// Period-finding probabilities for one fixed phase parameter.
    PeriodFixedPhase,
}

/// A distribution together with the closed form that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormulaResult<T: Scalar> {
    pub distribution: OutcomeDistribution<T>,
    pub provenance: Formula,
}

fn gate<T: Scalar>(n: u32, probs: Vec<T>, provenance: Formula) -> Result<FormulaResult<T>> {
    let sum = pairwise_sum(&probs);
    if (sum - T::one()).abs() > T::FORMULA_GATE {
        return Err(Error::FormulaNotNormalized {
            sum: sum.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(FormulaResult {
        distribution: OutcomeDistribution::from_probs(n, probs)?,
        provenance,
    })
}

/// Coset representatives (minimum element of `{x, x xor h}`) of the hidden
/// subgroup's quotient.
fn coset_reps(inst: &SimonInstance) -> Vec<u64> {
    let h = inst.hidden_shift().value();
    (0..inst.f().domain_size()).filter(|&x| x <= x ^ h).collect()
}

/// Outcome probabilities of the shift-hiding pipeline at a fixed phase string
/// `w`: `(4/|G|^2) |sum over coset reps of (-1)^{w.f(x)} (-1)^{x.y}|^2` on
/// the orthogonal subgroup, zero elsewhere.
pub fn simon_pw_formula<T: Scalar>(
    inst: &SimonInstance,
    w: BitString,
) -> Result<FormulaResult<T>> {
    if w.width() != inst.n() {
        return Err(Error::WidthMismatch {
            expected: inst.n(),
            actual: w.width(),
        });
    }
    let size = inst.f().domain_size();
    let h = inst.hidden_shift().value();
    let reps = coset_reps(inst);
    let scale = T::from_count(4) / (T::from_u64(size).unwrap() * T::from_u64(size).unwrap());
    let probs: Vec<T> = (0..size)
        .map(|y| {
            if parity(h & y) != 0 {
                return T::zero();
            }
            let terms: Vec<T> = reps
                .iter()
                .map(|&x| {
                    let sign = parity(w.value() & inst.f().value(x)) ^ parity(x & y);
                    if sign == 1 {
                        -T::one()
                    } else {
                        T::one()
                    }
                })
                .collect();
            let s = pairwise_sum(&terms);
            scale * s * s
        })
        .collect();
    gate(inst.n(), probs, Formula::SimonFixedPhase)
}

/// Average of [`simon_pw_formula`] over every phase string, evaluated by the
/// outer loop; lands on `2/|G|` across the orthogonal subgroup.
pub fn simon_expected_formula<T: Scalar>(inst: &SimonInstance) -> Result<FormulaResult<T>> {
    let size = inst.f().domain_size() as usize;
    let mut per_y: Vec<Vec<T>> = vec![Vec::with_capacity(size); size];
    for wv in 0..size as u64 {
        let w = BitString::new(inst.n(), wv)?;
        let fixed = simon_pw_formula::<T>(inst, w)?;
        for (y, &p) in fixed.distribution.probs().iter().enumerate() {
            per_y[y].push(p);
        }
    }
    let scale = T::one() / T::from_count(size);
    let probs: Vec<T> = per_y.iter().map(|terms| pairwise_sum(terms) * scale).collect();
    gate(inst.n(), probs, Formula::SimonAveraged)
}

/// Outcome probabilities of the plain period-finding pipeline:
/// `P(y) = (1/N^2) sum_x |sum_j exp(2 pi i y j T / N)|^2`, where the inner
/// sum runs over the `A_x` domain points congruent to `x`.
pub fn period_p_formula<T: Scalar>(inst: &PeriodicInstance) -> Result<FormulaResult<T>> {
    let n_dom = inst.domain_size();
    let t = inst.period();
    let roots = unit_root_table::<T>(n_dom);
    let scale = T::one() / (T::from_u64(n_dom).unwrap() * T::from_u64(n_dom).unwrap());
    let probs: Vec<T> = (0..n_dom)
        .map(|y| {
            let terms: Vec<T> = (0..t)
                .map(|x| {
                    let reps = inst.residue_count(x);
                    let phases: Vec<Complex<T>> = (0..reps)
                        .map(|j| roots[((y * j * t) % n_dom) as usize])
                        .collect();
                    pairwise_sum_complex(&phases).norm_sqr()
                })
                .collect();
            scale * pairwise_sum(&terms)
        })
        .collect();
    gate(inst.n(), probs, Formula::PeriodOriginal)
}

/// Outcome probabilities of the period pipeline at a fixed phase parameter
/// `w`: `(1/N^2) |sum_x sum_j exp(2 pi i y (x + jT)/N) exp(2 pi i w f(x)/M)|^2`.
pub fn period_pw_formula<T: Scalar>(
    inst: &PeriodicInstance,
    w: u64,
) -> Result<FormulaResult<T>> {
    let modulus = inst.modulus();
    if w >= modulus {
        return Err(Error::InvalidInstance {
            reason: format!("phase parameter {w} must be below the modulus {modulus}"),
        });
    }
    let n_dom = inst.domain_size();
    let t = inst.period();
    let dom_roots = unit_root_table::<T>(n_dom);
    let mod_roots = unit_root_table::<T>(modulus);
    let scale = T::one() / (T::from_u64(n_dom).unwrap() * T::from_u64(n_dom).unwrap());
    let probs: Vec<T> = (0..n_dom)
        .map(|y| {
            let mut terms: Vec<Complex<T>> = Vec::with_capacity(n_dom as usize);
            for x in 0..t {
                let fw = mod_roots[((w * inst.f().value(x)) % modulus) as usize];
                for j in 0..inst.residue_count(x) {
                    let e = dom_roots[((y * (x + j * t)) % n_dom) as usize];
                    terms.push(e * fw);
                }
            }
            scale * pairwise_sum_complex(&terms).norm_sqr()
        })
        .collect();
    gate(inst.n(), probs, Formula::PeriodFixedPhase)
}
