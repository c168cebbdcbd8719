//! Ideal statevector simulation and the compact phase backend.
//!
//! [`StateVector`] is the full engine: 2^q complex amplitudes over the
//! concatenated registers, with X and Hadamard gates, oracle application,
//! and first-register measurement. [`PhaseVector`] is the cheap route for
//! kick-back circuits: it stores only the 2^n signs the oracle imprints on
//! the first register, because the second register stays in a known
//! product state throughout.
//!
//! # Register layout
//!
//! The first (n-qubit) register occupies the high bits and the second
//! (m-qubit) register the low bits: basis state |x⟩_n ⊗ |y⟩_m lives at
//! amplitude index x·2^m + y. Qubit index i addresses bit i of the
//! amplitude index, so qubits 0..m form the second register and m..m+n the
//! first. This makes oracle application an xor permutation within each
//! contiguous 2^m block.
//!
//! # Tolerances
//!
//! Single operations are exact to rounding; comparisons use
//! [`OPERATION_TOLERANCE`]. Multi-gate pipelines accumulate error and are
//! compared with [`PIPELINE_TOLERANCE`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::f2::BitString;
use crate::oracle::BooleanFunction;
use crate::rng::SplitMix64;

/// Absolute tolerance for quantities produced by a whole pipeline of
/// operations.
pub const PIPELINE_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance for a single gate application or state construction.
pub const OPERATION_TOLERANCE: f64 = 1e-12;

/// Cap on total qubits for the full backend (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Cap on the first-register width for the compact backend.
pub const MAX_COMPACT_INPUT: usize = 26;

/// A register of qubits as a dense vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state |index⟩ on `qubits` qubits.
    pub fn computational_basis(qubits: usize, index: usize) -> Result<Self> {
        if qubits > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "qubit count",
                limit: MAX_QUBITS,
                got: qubits,
            });
        }
        let size = 1usize << qubits;
        if index >= size {
            return Err(Error::BadIndex { index, size });
        }
        let mut amps = vec![Complex64::ZERO; size];
        amps[index] = Complex64::ONE;
        Ok(Self { qubits, amps })
    }

    /// The two-register basis state |first⟩_n ⊗ |second⟩_m.
    pub fn basis_state(n: usize, m: usize, first: &BitString, second: &BitString) -> Result<Self> {
        if first.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: first.len(),
            });
        }
        if second.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: second.len(),
            });
        }
        Self::computational_basis(n + m, first.index() << m | second.index())
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.qubits {
            return Err(Error::BadIndex {
                index: qubit,
                size: self.qubits,
            });
        }
        Ok(())
    }

    /// Pauli X on one qubit: swaps amplitude pairs differing in that bit.
    pub fn apply_x(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let step = 1usize << qubit;
        for block in (0..self.amps.len()).step_by(step << 1) {
            for k in block..block + step {
                self.amps.swap(k, k + step);
            }
        }
        Ok(())
    }

    /// Hadamard on one qubit: one butterfly stage scaled by 1/sqrt(2).
    pub fn apply_h(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let step = 1usize << qubit;
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        for block in (0..self.amps.len()).step_by(step << 1) {
            for k in block..block + step {
                let a = self.amps[k];
                let b = self.amps[k + step];
                self.amps[k] = (a + b) * scale;
                self.amps[k + step] = (a - b) * scale;
            }
        }
        Ok(())
    }

    /// Hadamard on every qubit in the range (a partial Walsh–Hadamard
    /// transform), O(2^q) work per qubit.
    pub fn apply_h_all(&mut self, qubits: std::ops::Range<usize>) -> Result<()> {
        for q in qubits {
            self.apply_h(q)?;
        }
        Ok(())
    }

    /// Applies the oracle gate: |x⟩|y⟩ becomes |x⟩|y xor f(x)⟩.
    ///
    /// One quantum call is recorded regardless of superposition size; the
    /// 2^n classical evaluations needed to expand the permutation are
    /// charged to the oracle's internal counter.
    pub fn apply_oracle(&mut self, f: &BooleanFunction) -> Result<()> {
        let (n, m) = (f.n(), f.m());
        if n + m != self.qubits {
            return Err(Error::LengthMismatch {
                expected: self.qubits,
                got: n + m,
            });
        }
        f.count_quantum_call();
        let block = 1usize << m;
        for xv in 0..1usize << n {
            let x = BitString::from_int(n, xv as u64)?;
            let image = f.evaluate_internal(&x)?.index();
            if image == 0 {
                continue;
            }
            let base = xv << m;
            for y in 0..block {
                let partner = y ^ image;
                if y < partner {
                    self.amps.swap(base + y, base + partner);
                }
            }
        }
        Ok(())
    }

    /// Marginal probabilities of the first register: p(x) = sum over the
    /// second register of |amp(x, y)|^2.
    pub fn first_register_probabilities(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 || n > self.qubits {
            return Err(Error::BadIndex {
                index: n,
                size: self.qubits,
            });
        }
        let block = 1usize << (self.qubits - n);
        Ok(self
            .amps
            .chunks_exact(block)
            .map(|chunk| chunk.iter().map(Complex64::norm_sqr).sum())
            .collect())
    }

    /// Samples a first-register measurement, deterministically in the seed.
    pub fn measure_first_register(&self, n: usize, seed: u64) -> Result<MeasurementOutcome> {
        let probs = self.first_register_probabilities(n)?;
        let value = sample_index(&probs, seed);
        Ok(MeasurementOutcome {
            value: BitString::from_int(n, value as u64)?,
            probability: probs[value],
        })
    }

    /// Measurement in deterministic mode: succeeds only when one outcome
    /// holds all the probability (within [`PIPELINE_TOLERANCE`]).
    pub fn measure_first_register_deterministic(&self, n: usize) -> Result<MeasurementOutcome> {
        let probs = self.first_register_probabilities(n)?;
        let (value, p) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("probability vector is nonempty");
        if *p < 1.0 - PIPELINE_TOLERANCE {
            return Err(Error::NotDeterministic);
        }
        Ok(MeasurementOutcome {
            value: BitString::from_int(n, value as u64)?,
            probability: *p,
        })
    }

    /// Debug dump, one `index re im` line per amplitude. Not a stable
    /// interface.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (k, a) in self.amps.iter().enumerate() {
            writeln!(out, "{k} {} {}", a.re, a.im).expect("string write");
        }
        out
    }
}

/// Walsh transform of a basis state: amplitude (-1)^(y·z) / sqrt(2^m) at
/// every index z. Equivalently a tensor product of (|0⟩+|1⟩)/sqrt(2) where
/// y has a 0 bit and (|0⟩-|1⟩)/sqrt(2) where it has a 1.
pub fn gamma_state(y: &BitString) -> Result<StateVector> {
    let m = y.len();
    if m > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count",
            limit: MAX_QUBITS,
            got: m,
        });
    }
    let size = 1usize << m;
    let scale = 1.0 / (size as f64).sqrt();
    let marker = y.value();
    let amps = (0..size as u32)
        .map(|z| {
            let sign = if (marker & z).count_ones() & 1 == 0 {
                scale
            } else {
                -scale
            };
            Complex64::new(sign, 0.0)
        })
        .collect();
    Ok(StateVector { qubits: m, amps })
}

/// The result of measuring a register: the observed value and the
/// probability it carried.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub value: BitString,
    pub probability: f64,
}

pub(crate) fn sample_index(probs: &[f64], seed: u64) -> usize {
    let mut rng = SplitMix64::new(seed);
    let target = rng.next_f64();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, p) in probs.iter().enumerate() {
        if *p > 0.0 {
            last_positive = k;
        }
        acc += p;
        if target < acc {
            return k;
        }
    }
    // Rounding can leave acc slightly below 1; fall back to the last
    // outcome that had any weight.
    last_positive
}

/// Compact representation of a kick-back state: the normalized state
/// (1/sqrt(2^n)) Σ_x signs[x] |x⟩_n ⊗ |γ_marker⟩_m, stored as bare signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVector {
    marker: BitString,
    signs: Vec<i8>,
}

impl PhaseVector {
    pub fn n(&self) -> usize {
        self.signs.len().trailing_zeros() as usize
    }

    pub fn marker(&self) -> BitString {
        self.marker
    }

    /// The sign at first-register index x, +1 or -1.
    pub fn sign(&self, x: usize) -> i8 {
        self.signs[x]
    }
}

/// Runs the kick-back core on the compact backend: prepares the uniform
/// superposition against |γ_y⟩ and applies the oracle once, leaving
/// signs[x] = (-1)^(y·f(x)).
///
/// Counts one quantum call; the 2^n sign evaluations are simulator work on
/// the internal counter.
pub fn compact_gpk_run(f: &BooleanFunction, y: &BitString) -> Result<PhaseVector> {
    if y.len() != f.m() {
        return Err(Error::LengthMismatch {
            expected: f.m(),
            got: y.len(),
        });
    }
    let n = f.n();
    if n > MAX_COMPACT_INPUT {
        return Err(Error::TooLarge {
            what: "compact first-register width",
            limit: MAX_COMPACT_INPUT,
            got: n,
        });
    }
    f.count_quantum_call();
    let mut signs = vec![1i8; 1usize << n];
    for (xv, sign) in signs.iter_mut().enumerate() {
        let x = BitString::from_int(n, xv as u64)?;
        if f.evaluate_internal(&x)?.dot(y)? == 1 {
            *sign = -1;
        }
    }
    Ok(PhaseVector { marker: *y, signs })
}

/// Final Hadamard on the first register of a compact state, returning the
/// 2^n real first-register amplitudes.
///
/// The butterflies run unnormalized over integers (exact in 64-bit floats
/// up to well past the size cap) and divide by 2^n at the end, so the
/// output is exact, not merely within tolerance.
pub fn compact_final_transform(pv: &PhaseVector) -> Vec<f64> {
    let mut amps: Vec<f64> = pv.signs.iter().map(|&s| f64::from(s)).collect();
    fwht_inplace(&mut amps);
    // Dividing once by 2^n combines the 1/sqrt(2^n) of preparing the
    // uniform superposition with the 1/sqrt(2^n) of the final transform.
    let scale = 1.0 / amps.len() as f64;
    for a in &mut amps {
        *a *= scale;
    }
    amps
}

/// In-place fast Walsh–Hadamard transform, unnormalized: length must be a
/// power of two; O(n·2^n) butterfly stages.
pub fn fwht_inplace(values: &mut [f64]) {
    debug_assert!(values.len().is_power_of_two());
    let mut step = 1;
    while step < values.len() {
        for block in (0..values.len()).step_by(step << 1) {
            for k in block..block + step {
                let a = values[k];
                let b = values[k + step];
                values[k] = a + b;
                values[k + step] = a - b;
            }
        }
        step <<= 1;
    }
}
