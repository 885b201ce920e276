//! The algorithm unitaries as explicit statevector transformations: the
//! bilinear parity form, Walsh-Hadamard and discrete Fourier transforms on a
//! chosen subregister, the phase-string and phase-negation operations on the
//! auxiliary register, and the XOR / modular-addition oracle styles.
//!
//! All transforms are pure: they take a state by reference and return the
//! transformed state. Each one preserves the norm to machine precision.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instances::FunctionTable;
use crate::qstate::StateVector;
use crate::scalar::{unit_root_table, Amp, Scalar};

/// Fixed-width binary word; an element of the XOR group on `width` bits or an
/// index into `Z_{2^width}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: u32,
    value: u64,
}

impl BitString {
    pub fn new(width: u32, value: u64) -> Result<Self> {
        if width == 0 || width > 63 {
            return Err(Error::InvalidInstance {
                reason: format!("bit width {width} out of supported range 1..=63"),
            });
        }
        if value >> width != 0 {
            return Err(Error::InvalidInstance {
                reason: format!("value {value} does not fit in {width} bits"),
            });
        }
        Ok(BitString { width, value })
    }

    pub fn zero(width: u32) -> Self {
        BitString { width, value: 0 }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Bitwise XOR; both operands must have the same width.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: other.width,
            });
        }
        Ok(BitString {
            width: self.width,
            value: self.value ^ other.value,
        })
    }

    /// Uniformly random word of the given width.
    pub fn random<R: Rng>(width: u32, rng: &mut R) -> Self {
        BitString {
            width,
            value: rng.gen_range(0..(1u64 << width)),
        }
    }

    /// Uniformly random nonzero word.
    pub fn random_nonzero<R: Rng>(width: u32, rng: &mut R) -> Self {
        BitString {
            width,
            value: rng.gen_range(1..(1u64 << width)),
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s.is_empty() || s.len() > 63 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(D::Error::custom("expected a nonempty string of 0s and 1s"));
        }
        let value = u64::from_str_radix(&s, 2).map_err(D::Error::custom)?;
        Ok(BitString {
            width: s.len() as u32,
            value,
        })
    }
}

/// Designates which subregister of a composite state an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegisterSelector {
    Control,
    Aux,
}

/// Parity of the bitwise AND: `x0 y0 xor x1 y1 xor ... `. Bilinear in both
/// arguments over the XOR group.
pub fn dot(x: BitString, y: BitString) -> Result<u8> {
    if x.width != y.width {
        return Err(Error::WidthMismatch {
            expected: x.width,
            actual: y.width,
        });
    }
    Ok(parity(x.value & y.value))
}

#[inline]
pub(crate) fn parity(v: u64) -> u8 {
    (v.count_ones() & 1) as u8
}

fn selected_bits<T: Scalar>(state: &StateVector<T>, sel: RegisterSelector) -> (u32, u32) {
    // (lowest bit position, qubit count) of the selected subregister within
    // the composite index `control * 2^m + aux`.
    match sel {
        RegisterSelector::Control => (state.n_aux(), state.n_control()),
        RegisterSelector::Aux => (0, state.n_aux()),
    }
}

/// Tensor-product Hadamard on every qubit of the selected subregister;
/// identity on the other one. Involutive.
pub fn walsh_hadamard<T: Scalar>(state: &StateVector<T>, sel: RegisterSelector) -> StateVector<T> {
    let (lo, count) = selected_bits(state, sel);
    let mut amps = state.amps().to_vec();
    let half = T::from_f64(0.5).unwrap().sqrt();
    for bit in lo..lo + count {
        let step = 1usize << bit;
        let mut base = 0;
        while base < amps.len() {
            for offset in base..base + step {
                let a = amps[offset];
                let b = amps[offset + step];
                amps[offset] = (a + b) * half;
                amps[offset + step] = (a - b) * half;
            }
            base += 2 * step;
        }
    }
    StateVector::from_parts_unchecked(state.n_control(), state.n_aux(), amps)
}

/// Dense discrete Fourier transform on the selected subregister:
/// `|x> -> (1/sqrt(K)) sum_y exp(2 pi i x y / K) |y>`.
///
/// Evaluated directly from the defining double loop; at the register sizes
/// this crate targets the quadratic cost is irrelevant and the phases come
/// straight off an exact root table.
pub fn qft<T: Scalar>(state: &StateVector<T>, sel: RegisterSelector) -> StateVector<T> {
    let (lo, count) = selected_bits(state, sel);
    let k = 1u64 << count;
    let stride = 1usize << lo;
    let roots = unit_root_table::<T>(k);
    let scale = T::one() / T::from_u64(k).unwrap().sqrt();
    let zero = Complex::new(T::zero(), T::zero());

    let mut amps = state.amps().to_vec();
    let mut column = vec![zero; k as usize];
    // Iterate over every assignment of the untransformed bits: `outer` walks
    // the blocks above the subregister, `inner` the positions below it.
    let outer = amps.len() / (k as usize * stride);
    for block in 0..outer {
        for inner in 0..stride {
            let base = block * (k as usize) * stride + inner;
            for x in 0..k as usize {
                column[x] = amps[base + x * stride];
            }
            for y in 0..k {
                let mut acc = zero;
                for (x, &cx) in column.iter().enumerate() {
                    acc = acc + cx * roots[((x as u64 * y) % k) as usize];
                }
                amps[base + y as usize * stride] = acc * scale;
            }
        }
    }
    StateVector::from_parts_unchecked(state.n_control(), state.n_aux(), amps)
}

/// Phase string on the auxiliary register: basis state `|k>` gains the sign
/// `(-1)^{w . k}`. Involutive; the control register is untouched.
pub fn phase_string<T: Scalar>(state: &StateVector<T>, w: BitString) -> Result<StateVector<T>> {
    if w.width() != state.n_aux() {
        return Err(Error::WidthMismatch {
            expected: state.n_aux(),
            actual: w.width(),
        });
    }
    let m = state.aux_dim();
    let mut amps = state.amps().to_vec();
    for (idx, amp) in amps.iter_mut().enumerate() {
        let aux = (idx % m) as u64;
        if parity(w.value() & aux) == 1 {
            *amp = -*amp;
        }
    }
    Ok(StateVector::from_parts_unchecked(
        state.n_control(),
        state.n_aux(),
        amps,
    ))
}

/// Phase-negation on the auxiliary register:
/// `|k> -> exp(2 pi i w k / M) |(-k) mod M>` with `M` the auxiliary dimension.
pub fn phase_negate<T: Scalar>(state: &StateVector<T>, w: u64) -> Result<StateVector<T>> {
    let m = state.aux_dim() as u64;
    if w >= m {
        return Err(Error::InvalidInstance {
            reason: format!("phase parameter {w} must be below the modulus {m}"),
        });
    }
    let roots = unit_root_table::<T>(m);
    let zero = Complex::new(T::zero(), T::zero());
    let mut amps = vec![zero; state.amps().len()];
    for (idx, &amp) in state.amps().iter().enumerate() {
        let aux = idx as u64 % m;
        let block = idx - aux as usize;
        let target = (m - aux) % m;
        amps[block + target as usize] = amp * roots[((w * aux) % m) as usize];
    }
    Ok(StateVector::from_parts_unchecked(
        state.n_control(),
        state.n_aux(),
        amps,
    ))
}

/// XOR oracle: `|x>|y> -> |x>|y xor f(x)>`. Self-inverse.
pub fn oracle_xor<T: Scalar>(state: &StateVector<T>, f: &FunctionTable) -> Result<StateVector<T>> {
    if f.domain_bits() != state.n_control() {
        return Err(Error::TableMismatch {
            reason: format!(
                "table domain has {} bits, control register has {}",
                f.domain_bits(),
                state.n_control()
            ),
        });
    }
    if f.codomain_bits() != state.n_aux() {
        return Err(Error::TableMismatch {
            reason: format!(
                "table codomain has {} bits, auxiliary register has {}",
                f.codomain_bits(),
                state.n_aux()
            ),
        });
    }
    let m = state.aux_dim();
    let mut amps = state.amps().to_vec();
    for (x, block) in amps.chunks_mut(m).enumerate() {
        let t = f.value(x as u64) as usize;
        if t == 0 {
            continue;
        }
        for a in 0..m {
            let b = a ^ t;
            if a < b {
                block.swap(a, b);
            }
        }
    }
    Ok(StateVector::from_parts_unchecked(
        state.n_control(),
        state.n_aux(),
        amps,
    ))
}

/// Additive oracle: `|x>|y> -> |x>|y + f(x) mod M>` with `M` the auxiliary
/// dimension. A unitary permutation; the inverse adds `M - f(x)`.
pub fn oracle_add<T: Scalar>(state: &StateVector<T>, f: &FunctionTable) -> Result<StateVector<T>> {
    if f.domain_bits() != state.n_control() {
        return Err(Error::TableMismatch {
            reason: format!(
                "table domain has {} bits, control register has {}",
                f.domain_bits(),
                state.n_control()
            ),
        });
    }
    if f.codomain_bits() > state.n_aux() {
        return Err(Error::TableMismatch {
            reason: format!(
                "table values need {} bits, auxiliary register has {}",
                f.codomain_bits(),
                state.n_aux()
            ),
        });
    }
    let m = state.aux_dim();
    let mut amps = state.amps().to_vec();
    for (x, block) in amps.chunks_mut(m).enumerate() {
        let shift = (f.value(x as u64) as usize) % m;
        block.rotate_right(shift);
    }
    Ok(StateVector::from_parts_unchecked(
        state.n_control(),
        state.n_aux(),
        amps,
    ))
}
