//! The kick-back algorithms: single runs, the constant-vs-balanced
//! decider, the affine-reconstruction family, and dropped-bit detection.
//!
//! One run with marker y proceeds in six steps: prepare |0⟩_n|0⟩_m, set the
//! marker with X gates, Hadamard everything, apply the oracle once,
//! Hadamard the first register, measure the first register. The oracle
//! leaves sign (-1)^(y·f(x)) on branch |x⟩, so the measured string δ
//! answers questions about the linear functional x -> y·f(x):
//!
//! * constant-or-balanced f: δ = 0 exactly when y·f1 = y·f2, and running
//!   one marker per basis vector of {0,1}^m pins down λ = f1 xor f2;
//! * affine f(x) = r0 xor R·x: δ is exactly the row combination y·R, so
//!   basis markers read off R row by row;
//! * bit-dropping f: the outcomes name the surviving input bits, exposing
//!   the dropped one as the missing unit vector.
//!
//! Each solver spends one quantum call per marker plus at most one
//! classical evaluation, against classical baselines of 2^(n-1)+1
//! (decision) or n+1 (reconstruction) calls.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{is_basis, BitString, F2LinearSystem, F2Matrix, F2Solution};
use crate::oracle::BooleanFunction;
use crate::rng::SplitMix64;
use crate::sim::{
    compact_final_transform, compact_gpk_run, sample_index, StateVector, MAX_QUBITS,
    PIPELINE_TOLERANCE,
};

/// Which simulation engine executes a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Dense 2^(n+m) statevector.
    Full,
    /// Phase-only 2^n sign vector.
    Compact,
}

impl Backend {
    /// Default choice: the full backend while the whole register fits
    /// comfortably, the compact one beyond that.
    pub fn auto(n: usize, m: usize) -> Backend {
        if n + m > 20 {
            Backend::Compact
        } else {
            Backend::Full
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Backend::Full),
            "compact" => Ok(Backend::Compact),
            other => Err(Error::WrongShape(format!(
                "unknown backend {other:?}, expected full or compact"
            ))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Full => "full",
            Backend::Compact => "compact",
        })
    }
}

/// Decision produced by the constant-vs-balanced solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Constant,
    Balanced,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
        })
    }
}

/// Everything observed in a single run: the marker, the measured outcome,
/// and enough metadata to replay it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GpkRunRecord {
    pub marker: BitString,
    pub outcome: BitString,
    /// Whether the outcome carried probability 1 within tolerance.
    pub deterministic: bool,
    pub seed: u64,
    pub backend: Backend,
    /// Probability the measured outcome carried.
    #[serde(skip)]
    pub probability: f64,
    /// Oracle-gate applications spent by this run (always 1).
    #[serde(skip)]
    pub quantum_oracle_calls: u64,
}

/// Report of the constant-vs-balanced solver.
#[derive(Clone, Debug, Serialize)]
pub struct DjReport {
    pub verdict: Verdict,
    /// xor of the two values of a balanced function; all zeros when
    /// constant.
    pub lambda: BitString,
    /// The function's value set: [f(0)] when constant, [f(0), f(0) xor λ]
    /// when balanced.
    pub values: Vec<BitString>,
    pub runs: Vec<GpkRunRecord>,
    pub total_quantum_calls: u64,
    pub classical_calls: u64,
}

/// Report of the affine-reconstruction solver.
#[derive(Clone, Debug, Serialize)]
pub struct BvReport {
    /// The recovered matrix R of f(x) = r0 xor R·x.
    pub matrix: F2Matrix,
    /// The recovered offset r0 = f(0).
    pub r0: BitString,
    /// The marker basis, present when it was not the canonical one.
    pub basis: Option<F2Matrix>,
    /// The raw row combinations measured against that basis (basis ·
    /// matrix), present when the basis was not canonical.
    pub combination: Option<F2Matrix>,
    pub runs: Vec<GpkRunRecord>,
    pub total_quantum_calls: u64,
    pub classical_calls: u64,
}

/// Report of the dropped-bit detector.
#[derive(Clone, Debug, Serialize)]
pub struct DropBitReport {
    /// Index of the input bit the oracle discards.
    pub dropped: usize,
    pub runs: Vec<GpkRunRecord>,
    pub total_quantum_calls: u64,
    pub classical_calls: u64,
}

/// First-register probabilities alongside the run record; the probability
/// at index 0 drives promise-violation detection.
fn gpk_run_detailed(
    f: &BooleanFunction,
    y: &BitString,
    backend: Backend,
    seed: u64,
) -> Result<(GpkRunRecord, Vec<f64>)> {
    if y.len() != f.m() {
        return Err(Error::LengthMismatch {
            expected: f.m(),
            got: y.len(),
        });
    }
    let n = f.n();
    let before = f.quantum_calls();
    let probs = match backend {
        Backend::Full => {
            let mut state = full_pre_measurement_state(f, y)?;
            state.apply_h_all(f.m()..f.m() + n)?;
            state.first_register_probabilities(n)?
        }
        Backend::Compact => {
            let amps = compact_final_transform(&compact_gpk_run(f, y)?);
            amps.iter().map(|a| a * a).collect()
        }
    };
    let value = sample_index(&probs, seed);
    let probability = probs[value];
    let record = GpkRunRecord {
        marker: *y,
        outcome: BitString::from_int(n, value as u64)?,
        deterministic: probability >= 1.0 - PIPELINE_TOLERANCE,
        seed,
        backend,
        probability,
        quantum_oracle_calls: f.quantum_calls() - before,
    };
    Ok((record, probs))
}

/// The full-backend state after the oracle but before the final Hadamard:
/// |0⟩|0⟩, X gates writing the marker, Hadamards everywhere, one oracle.
fn full_pre_measurement_state(f: &BooleanFunction, y: &BitString) -> Result<StateVector> {
    let (n, m) = (f.n(), f.m());
    let mut state = StateVector::basis_state(
        n,
        m,
        &BitString::zero(n)?,
        &BitString::zero(m)?,
    )?;
    for i in 0..m {
        if y.bit(i) == 1 {
            state.apply_x(i)?;
        }
    }
    state.apply_h_all(0..n + m)?;
    state.apply_oracle(f)?;
    Ok(state)
}

/// Executes one run with marker y and returns its record. Exactly one
/// quantum oracle call; the measurement is sampled from the seed and never
/// fails, with the `deterministic` flag recording whether the outcome was
/// forced.
pub fn gpk_run(
    f: &BooleanFunction,
    y: &BitString,
    backend: Backend,
    seed: u64,
) -> Result<GpkRunRecord> {
    gpk_run_detailed(f, y, backend, seed).map(|(record, _)| record)
}

/// Exact first-register amplitudes before measurement, computed on the
/// compact backend: amplitude (1/2^n)·Σ_x (-1)^(f(x)·y xor x·z) at index z.
pub fn gpk_final_amplitudes(f: &BooleanFunction, y: &BitString) -> Result<Vec<f64>> {
    if y.len() != f.m() {
        return Err(Error::LengthMismatch {
            expected: f.m(),
            got: y.len(),
        });
    }
    Ok(compact_final_transform(&compact_gpk_run(f, y)?))
}

/// First-register amplitudes before measurement on the full backend,
/// for cross-checking the compact route.
///
/// After the final Hadamard the state factors as (Σ_z a_z |z⟩) ⊗ |γ_y⟩,
/// and the |γ_y⟩ amplitude at second-register index 0 is +1/sqrt(2^m)
/// regardless of y, so a_z is read off the amplitude at (z, 0).
pub fn gpk_final_amplitudes_full(f: &BooleanFunction, y: &BitString) -> Result<Vec<f64>> {
    let (n, m) = (f.n(), f.m());
    if n + m > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count",
            limit: MAX_QUBITS,
            got: n + m,
        });
    }
    let mut state = full_pre_measurement_state(f, y)?;
    state.apply_h_all(m..m + n)?;
    let scale = ((1usize << m) as f64).sqrt();
    Ok((0..1usize << n)
        .map(|z| state.amps()[z << m].re * scale)
        .collect())
}

/// Decides constant-vs-balanced with one run per marker and recovers both
/// values of a balanced function with a single classical call.
///
/// Markers default to the canonical basis of {0,1}^m, under which the
/// linear system is the identity and bit i of λ is simply whether run i
/// measured a nonzero outcome. Any other basis is accepted and solved
/// exactly.
///
/// Promise enforcement is best-effort: under the promise the probability
/// of outcome 0 is exactly 0 or 1 in every run, so any run observed
/// strictly between the two (beyond tolerance) reports
/// [`Error::PromiseViolated`].
pub fn solve_generalized_dj(
    f: &BooleanFunction,
    markers: Option<&[BitString]>,
    backend: Backend,
    seed: u64,
) -> Result<DjReport> {
    let (n, m) = (f.n(), f.m());
    let markers = resolve_markers(markers, m)?;
    let quantum_before = f.quantum_calls();
    let classical_before = f.classical_calls();

    let mut rng = SplitMix64::new(seed);
    let mut runs = Vec::with_capacity(markers.len());
    let mut system = F2LinearSystem::new(m)?;
    for marker in &markers {
        let (record, probs) = gpk_run_detailed(f, marker, backend, rng.next_u64())?;
        let p0 = probs[0];
        if p0 > PIPELINE_TOLERANCE && p0 < 1.0 - PIPELINE_TOLERANCE {
            return Err(Error::PromiseViolated);
        }
        system.push(*marker, u8::from(!record.outcome.is_zero()))?;
        runs.push(record);
    }
    let F2Solution::Unique(lambda) = system.solve() else {
        // A basis always has full rank, so the system cannot be
        // underdetermined or inconsistent.
        return Err(Error::PromiseViolated);
    };

    let f0 = f.evaluate(&BitString::zero(n)?)?;
    let (verdict, values) = if lambda.is_zero() {
        (Verdict::Constant, vec![f0])
    } else {
        (Verdict::Balanced, vec![f0, f0.xor(&lambda)?])
    };
    Ok(DjReport {
        verdict,
        lambda,
        values,
        runs,
        total_quantum_calls: f.quantum_calls() - quantum_before,
        classical_calls: f.classical_calls() - classical_before,
    })
}

/// The m = 1 special case of the decision problem: a single run with
/// marker 1; outcome zero means constant.
pub fn solve_classic_dj(f: &BooleanFunction, seed: u64) -> Result<Verdict> {
    require_single_output(f)?;
    let marker = BitString::unit(1, 0)?;
    let record = gpk_run(f, &marker, Backend::auto(f.n(), 1), seed)?;
    Ok(if record.outcome.is_zero() {
        Verdict::Constant
    } else {
        Verdict::Balanced
    })
}

/// Recovers r from f(x) = r·x with a single run and no classical calls.
pub fn solve_bv(f: &BooleanFunction, seed: u64) -> Result<BitString> {
    require_single_output(f)?;
    let marker = BitString::unit(1, 0)?;
    let record = gpk_run(f, &marker, Backend::auto(f.n(), 1), seed)?;
    Ok(record.outcome)
}

/// Recovers (r, r0) from f(x) = r0 xor r·x: the offset becomes a global
/// phase that the measurement cannot see, so one run still yields r, and
/// one classical call at 0 yields r0.
pub fn solve_modified_bv(f: &BooleanFunction, seed: u64) -> Result<(BitString, u8)> {
    require_single_output(f)?;
    let r = solve_bv(f, seed)?;
    let r0 = f.evaluate(&BitString::zero(f.n())?)?.bit(0);
    Ok((r, r0))
}

fn require_single_output(f: &BooleanFunction) -> Result<()> {
    if f.m() != 1 {
        return Err(Error::WrongShape(format!(
            "solver requires a single output bit, oracle has {}",
            f.m()
        )));
    }
    Ok(())
}

/// Reconstructs an affine f(x) = r0 xor R·x exactly, spending one quantum
/// call per marker and one classical call.
///
/// Each run with marker y measures the row combination y·R with
/// probability 1. Canonical markers read R directly; any other basis B
/// measures B·R, and the report keeps both that raw matrix and the
/// recovered R = B⁻¹·(B·R).
///
/// For n ≤ 10 the reconstruction is verified against the oracle on every
/// input (internal counter); a mismatch reports [`Error::NotAffine`].
pub fn solve_generalized_bv(
    f: &BooleanFunction,
    markers: Option<&[BitString]>,
    backend: Backend,
    seed: u64,
) -> Result<BvReport> {
    let (n, m) = (f.n(), f.m());
    let canonical = markers.is_none();
    let markers = resolve_markers(markers, m)?;
    let quantum_before = f.quantum_calls();
    let classical_before = f.classical_calls();

    let mut rng = SplitMix64::new(seed);
    let mut runs = Vec::with_capacity(markers.len());
    let mut rows = Vec::with_capacity(markers.len());
    for marker in &markers {
        let record = gpk_run(f, marker, backend, rng.next_u64())?;
        if !record.deterministic {
            return Err(Error::NotAffine);
        }
        rows.push(record.outcome);
        runs.push(record);
    }
    let measured = F2Matrix::from_rows(rows)?;
    let (matrix, basis, combination) = if canonical {
        (measured, None, None)
    } else {
        let basis = F2Matrix::from_rows(markers.clone())?;
        let inverse = basis.invert().expect("a basis is invertible");
        (inverse.mul(&measured)?, Some(basis), Some(measured))
    };
    let r0 = f.evaluate(&BitString::zero(n)?)?;

    if n <= 10 {
        for x in BitString::all(n) {
            let expected = matrix.mat_vec(&x)?.xor(&r0)?;
            if f.evaluate_internal(&x)? != expected {
                return Err(Error::NotAffine);
            }
        }
    }
    Ok(BvReport {
        matrix,
        r0,
        basis,
        combination,
        runs,
        total_quantum_calls: f.quantum_calls() - quantum_before,
        classical_calls: f.classical_calls() - classical_before,
    })
}

/// Identifies which input bit a bit-dropping oracle discards, with n-1
/// runs and no classical calls.
///
/// Run i uses marker e_i; on a true bit-drop each outcome is the unit
/// vector naming the input bit that survives as output bit i, all n-1
/// outcomes are distinct, and the one unit vector never measured names the
/// dropped bit. Any non-unit, repeated, or non-deterministic outcome
/// reports [`Error::NotABitDrop`].
pub fn detect_dropped_bit_report(f: &BooleanFunction, seed: u64) -> Result<DropBitReport> {
    let (n, m) = (f.n(), f.m());
    if m != n - 1 {
        return Err(Error::WrongShape(format!(
            "bit-drop detection needs m = n-1, oracle has n = {n}, m = {m}"
        )));
    }
    let quantum_before = f.quantum_calls();
    let mut rng = SplitMix64::new(seed);
    let mut runs = Vec::with_capacity(m);
    let mut seen = vec![false; n];
    for i in 0..m {
        let marker = BitString::unit(m, i)?;
        let record = gpk_run(f, &marker, Backend::auto(n, m), rng.next_u64())?;
        if !record.deterministic || record.outcome.weight() != 1 {
            return Err(Error::NotABitDrop);
        }
        let survivor = record.outcome.value().trailing_zeros() as usize;
        if seen[survivor] {
            return Err(Error::NotABitDrop);
        }
        seen[survivor] = true;
        runs.push(record);
    }
    let dropped = seen
        .iter()
        .position(|&hit| !hit)
        .expect("n-1 distinct unit vectors leave exactly one unseen");
    Ok(DropBitReport {
        dropped,
        runs,
        total_quantum_calls: f.quantum_calls() - quantum_before,
        classical_calls: 0,
    })
}

/// [`detect_dropped_bit_report`] reduced to the detected index.
pub fn detect_dropped_bit(f: &BooleanFunction, seed: u64) -> Result<usize> {
    detect_dropped_bit_report(f, seed).map(|report| report.dropped)
}

/// Checks that translating a function's outputs by s is invisible to a run
/// with marker y: the two pre-measurement outcome distributions must agree
/// within [`PIPELINE_TOLERANCE`] at every index.
///
/// (At the amplitude level the two runs differ by the exact global factor
/// (-1)^(s·y); squaring erases it.)
pub fn translation_invariance_check(
    f: &BooleanFunction,
    s: &BitString,
    y: &BitString,
) -> Result<bool> {
    let translated = f.translate(s)?;
    let base = gpk_final_amplitudes(f, y)?;
    let shifted = gpk_final_amplitudes(&translated, y)?;
    Ok(base
        .iter()
        .zip(&shifted)
        .all(|(a, b)| (a * a - b * b).abs() <= PIPELINE_TOLERANCE))
}

fn resolve_markers(markers: Option<&[BitString]>, m: usize) -> Result<Vec<BitString>> {
    match markers {
        Some(given) => {
            if !is_basis(given, m)? {
                return Err(Error::NotABasis);
            }
            Ok(given.to_vec())
        }
        None => (0..m).map(|i| BitString::unit(m, i)).collect(),
    }
}

#[derive(Serialize)]
struct Envelope<'a, P: Serialize> {
    problem: &'a str,
    n: usize,
    m: usize,
    #[serde(flatten)]
    payload: P,
    runs: &'a [GpkRunRecord],
    quantum_calls: u64,
    classical_calls: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

fn render<P: Serialize>(envelope: &Envelope<'_, P>) -> String {
    serde_json::to_string_pretty(envelope).expect("report serialization cannot fail")
}

#[derive(Serialize)]
struct DjPayload<'a> {
    verdict: Verdict,
    lambda: BitString,
    values: &'a [BitString],
}

#[derive(Serialize)]
struct BvPayload<'a> {
    matrix: &'a F2Matrix,
    r0: BitString,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<&'a F2Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    combination: Option<&'a F2Matrix>,
}

#[derive(Serialize)]
struct GpkPayload {
    result: BitString,
    probability: f64,
    deterministic: bool,
}

#[derive(Serialize)]
struct DropPayload {
    result: usize,
}

impl DjReport {
    /// Stable JSON rendering; the timestamp is caller-supplied and
    /// omitted when absent.
    pub fn to_json(&self, timestamp: Option<u64>) -> String {
        render(&Envelope {
            problem: "dj",
            n: self.runs[0].outcome.len(),
            m: self.lambda.len(),
            payload: DjPayload {
                verdict: self.verdict,
                lambda: self.lambda,
                values: &self.values,
            },
            runs: &self.runs,
            quantum_calls: self.total_quantum_calls,
            classical_calls: self.classical_calls,
            timestamp,
        })
    }
}

impl BvReport {
    /// Stable JSON rendering under the given problem label ("gbv", or
    /// "bv" for the single-output command).
    pub fn to_json(&self, problem: &str, timestamp: Option<u64>) -> String {
        render(&Envelope {
            problem,
            n: self.matrix.cols(),
            m: self.matrix.rows(),
            payload: BvPayload {
                matrix: &self.matrix,
                r0: self.r0,
                basis: self.basis.as_ref(),
                combination: self.combination.as_ref(),
            },
            runs: &self.runs,
            quantum_calls: self.total_quantum_calls,
            classical_calls: self.classical_calls,
            timestamp,
        })
    }
}

impl GpkRunRecord {
    /// Stable JSON rendering of a stand-alone run.
    pub fn to_json(&self, timestamp: Option<u64>) -> String {
        render(&Envelope {
            problem: "gpk",
            n: self.outcome.len(),
            m: self.marker.len(),
            payload: GpkPayload {
                result: self.outcome,
                probability: self.probability,
                deterministic: self.deterministic,
            },
            runs: std::slice::from_ref(self),
            quantum_calls: self.quantum_oracle_calls,
            classical_calls: 0,
            timestamp,
        })
    }
}

impl DropBitReport {
    /// Stable JSON rendering.
    pub fn to_json(&self, timestamp: Option<u64>) -> String {
        let n = self.runs[0].outcome.len();
        render(&Envelope {
            problem: "dropbit",
            n,
            m: n - 1,
            payload: DropPayload {
                result: self.dropped,
            },
            runs: &self.runs,
            quantum_calls: self.total_quantum_calls,
            classical_calls: self.classical_calls,
            timestamp,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{
        random_affine_instance, random_promise_instance, BooleanFunction, OracleRepr,
        PromiseClass, PromiseKind,
    };

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_both_backends() {
        // Dropping the lowest input bit of a 3-bit input and running with
        // marker 01 kicks the phase (-1)^(input bit 1), which the final
        // transform turns into the sharp outcome 010.
        for backend in [Backend::Full, Backend::Compact] {
            let f = BooleanFunction::bit_drop(3, 0).unwrap();
            let record = gpk_run(&f, &bs("01"), backend, 5).unwrap();
            assert_eq!(record.outcome, bs("010"), "{backend:?}");
            assert!(record.deterministic);
            assert!((record.probability - 1.0).abs() <= PIPELINE_TOLERANCE);
            assert_eq!(record.quantum_oracle_calls, 1);
            assert_eq!(f.quantum_calls(), 1);
            assert_eq!(f.classical_calls(), 0);
        }
    }

    #[test]
    fn marker_10_reads_the_other_row() {
        let f = BooleanFunction::bit_drop(3, 0).unwrap();
        let record = gpk_run(&f, &bs("10"), Backend::Full, 5).unwrap();
        assert_eq!(record.outcome, bs("100"));
    }

    #[test]
    fn constant_oracle_always_lands_on_zero() {
        let f = BooleanFunction::constant(4, bs("101")).unwrap();
        for (i, y) in BitString::all(3).enumerate() {
            let record = gpk_run(&f, &y, Backend::Full, i as u64).unwrap();
            assert!(record.outcome.is_zero(), "marker {y}");
            assert!(record.deterministic);
        }
    }

    #[test]
    fn zero_marker_kicks_nothing() {
        let f = random_promise_instance(4, 2, PromiseKind::Balanced, 8).unwrap();
        let record = gpk_run(&f, &bs("00"), Backend::Compact, 3).unwrap();
        assert_eq!(record.outcome, bs("0000"));
        assert!(record.deterministic);
    }

    #[test]
    fn final_amplitudes_match_brute_force() {
        for seed in 0..6 {
            let f = random_promise_instance(4, 3, PromiseKind::Balanced, seed).unwrap();
            for y in BitString::all(3) {
                let amps = gpk_final_amplitudes(&f, &y).unwrap();
                for (z, amp) in amps.iter().enumerate() {
                    let z = BitString::from_int(4, z as u64).unwrap();
                    let mut sum = 0.0;
                    for x in BitString::all(4) {
                        let phase = f.evaluate(&x).unwrap().dot(&y).unwrap()
                            ^ x.dot(&z).unwrap();
                        sum += if phase == 1 { -1.0 } else { 1.0 };
                    }
                    assert!(
                        (amp - sum / 16.0).abs() <= PIPELINE_TOLERANCE,
                        "seed {seed} y {y} z {z}"
                    );
                }
            }
        }
    }

    #[test]
    fn backends_agree_on_amplitudes() {
        for seed in 0..10 {
            let f = random_promise_instance(3, 2, PromiseKind::Balanced, 100 + seed).unwrap();
            let compact = gpk_final_amplitudes(&f, &bs("11")).unwrap();
            let full = gpk_final_amplitudes_full(&f, &bs("11")).unwrap();
            for (a, b) in compact.iter().zip(&full) {
                assert!((a - b).abs() <= PIPELINE_TOLERANCE, "seed {seed}");
            }
        }
    }

    #[test]
    fn dj_constant_and_balanced() {
        let c = BooleanFunction::constant(3, bs("110")).unwrap();
        let report = solve_generalized_dj(&c, None, Backend::Full, 1).unwrap();
        assert_eq!(report.verdict, Verdict::Constant);
        assert!(report.lambda.is_zero());
        assert_eq!(report.values, vec![bs("110")]);
        assert_eq!(report.total_quantum_calls, 3);
        assert_eq!(report.classical_calls, 1);
        assert_eq!(report.runs.len(), 3);

        let b = random_promise_instance(4, 3, PromiseKind::Balanced, 2).unwrap();
        let report = solve_generalized_dj(&b, None, Backend::Full, 1).unwrap();
        assert_eq!(report.verdict, Verdict::Balanced);
        let PromiseClass::Balanced(f1, f2) = b.classify_promise().unwrap() else {
            panic!("generator produced a non-balanced instance");
        };
        assert_eq!(report.lambda, f1.xor(&f2).unwrap());
        let mut values = report.values.clone();
        values.sort();
        assert_eq!(values, vec![f1, f2]);
    }

    #[test]
    fn dj_lambda_marks_disagreeing_markers() {
        // Balanced with values 000 and 101: markers e_0 and e_2 see the
        // two values differ, e_1 does not.
        let f1 = bs("000");
        let f2 = bs("101");
        let mut outputs = vec![f1; 8];
        outputs[..4].fill(f2);
        let f = BooleanFunction::from_truth_table(outputs).unwrap();
        let report = solve_generalized_dj(&f, None, Backend::Full, 9).unwrap();
        assert_eq!(report.lambda, bs("101"));
        assert!(!report.runs[0].outcome.is_zero());
        assert!(report.runs[1].outcome.is_zero());
        assert!(!report.runs[2].outcome.is_zero());
    }

    #[test]
    fn dj_accepts_any_basis() {
        let f = random_promise_instance(4, 3, PromiseKind::Balanced, 77).unwrap();
        let canonical = solve_generalized_dj(&f, None, Backend::Full, 5).unwrap();
        let basis = vec![bs("111"), bs("011"), bs("001")];
        let skewed = solve_generalized_dj(&f, Some(&basis), Backend::Full, 5).unwrap();
        assert_eq!(skewed.lambda, canonical.lambda);
        assert_eq!(skewed.verdict, canonical.verdict);

        let dependent = vec![bs("110"), bs("011"), bs("101")];
        assert_eq!(
            solve_generalized_dj(&f, Some(&dependent), Backend::Full, 5).unwrap_err(),
            Error::NotABasis
        );
    }

    #[test]
    fn dj_rejects_promise_violations() {
        // Two-input AND outputs 1 on a quarter of the inputs, so the
        // probability of outcome 0 is 1/4: neither 0 nor 1.
        let and = BooleanFunction::from_truth_table(vec![
            bs("0"),
            bs("0"),
            bs("0"),
            bs("1"),
        ])
        .unwrap();
        assert_eq!(
            solve_generalized_dj(&and, None, Backend::Full, 4).unwrap_err(),
            Error::PromiseViolated
        );
    }

    #[test]
    fn classic_dj_one_call() {
        let c = BooleanFunction::constant(5, bs("1")).unwrap();
        assert_eq!(solve_classic_dj(&c, 3).unwrap(), Verdict::Constant);
        assert_eq!(c.quantum_calls(), 1);

        let b = random_promise_instance(5, 1, PromiseKind::Balanced, 4).unwrap();
        assert_eq!(solve_classic_dj(&b, 3).unwrap(), Verdict::Balanced);
        assert_eq!(b.quantum_calls(), 1);

        let wide = BooleanFunction::constant(3, bs("11")).unwrap();
        assert!(matches!(
            solve_classic_dj(&wide, 0),
            Err(Error::WrongShape(_))
        ));
    }

    #[test]
    fn bv_reads_the_hidden_string() {
        let r = bs("10110");
        let f = BooleanFunction::affine(
            F2Matrix::from_rows(vec![r]).unwrap(),
            BitString::zero(1).unwrap(),
        )
        .unwrap();
        assert_eq!(solve_bv(&f, 11).unwrap(), r);
        assert_eq!(f.quantum_calls(), 1);
        assert_eq!(f.classical_calls(), 0);

        let shifted = BooleanFunction::affine(
            F2Matrix::from_rows(vec![r]).unwrap(),
            bs("1"),
        )
        .unwrap();
        let (row, r0) = solve_modified_bv(&shifted, 11).unwrap();
        assert_eq!(row, r);
        assert_eq!(r0, 1);
        assert_eq!(shifted.quantum_calls(), 1);
        assert_eq!(shifted.classical_calls(), 1);
    }

    #[test]
    fn generalized_bv_recovers_instances() {
        for seed in 0..10 {
            let f = random_affine_instance(6, 4, seed).unwrap();
            let report = solve_generalized_bv(&f, None, Backend::Full, seed).unwrap();
            let OracleRepr::Affine { matrix, offset } = f.repr() else {
                unreachable!()
            };
            assert_eq!(&report.matrix, matrix, "seed {seed}");
            assert_eq!(&report.r0, offset);
            assert_eq!(report.total_quantum_calls, 4);
            assert_eq!(report.classical_calls, 1);
            assert!(report.basis.is_none());
            f.reset_counters();
        }
    }

    #[test]
    fn generalized_bv_change_of_basis() {
        let f = random_affine_instance(5, 3, 21).unwrap();
        let basis = vec![bs("111"), bs("010"), bs("001")];
        let report = solve_generalized_bv(&f, Some(&basis), Backend::Full, 2).unwrap();
        let OracleRepr::Affine { matrix, .. } = f.repr() else {
            unreachable!()
        };
        assert_eq!(&report.matrix, matrix);
        let b = report.basis.as_ref().unwrap();
        let combination = report.combination.as_ref().unwrap();
        assert_eq!(&b.mul(&report.matrix).unwrap(), combination);
        // Row i of the measured matrix is the marker-selected combination.
        for (i, marker) in basis.iter().enumerate() {
            let mut acc = BitString::zero(5).unwrap();
            for j in 0..3 {
                if marker.bit(j) == 1 {
                    acc = acc.xor(&matrix.row(j)).unwrap();
                }
            }
            assert_eq!(combination.row(i), acc);
        }
    }

    #[test]
    fn generalized_bv_rejects_non_affine() {
        let and = BooleanFunction::from_truth_table(vec![
            bs("0"),
            bs("0"),
            bs("0"),
            bs("1"),
        ])
        .unwrap();
        assert_eq!(
            solve_generalized_bv(&and, None, Backend::Full, 0).unwrap_err(),
            Error::NotAffine
        );
    }

    #[test]
    fn dropped_bit_round_trip() {
        for n in 2..=6 {
            for j in 0..n {
                let f = BooleanFunction::bit_drop(n, j).unwrap();
                assert_eq!(detect_dropped_bit(&f, 7).unwrap(), j, "n={n}");
                assert_eq!(f.quantum_calls(), n as u64 - 1);
            }
        }
    }

    #[test]
    fn dropped_bit_worked_example() {
        let f = BooleanFunction::bit_drop(3, 0).unwrap();
        let report = detect_dropped_bit_report(&f, 1).unwrap();
        assert_eq!(report.dropped, 0);
        let outcomes: Vec<BitString> = report.runs.iter().map(|r| r.outcome).collect();
        assert_eq!(outcomes, vec![bs("010"), bs("100")]);
    }

    #[test]
    fn dropped_bit_rejects_other_oracles() {
        let f = random_promise_instance(3, 2, PromiseKind::Balanced, 13).unwrap();
        assert_eq!(
            detect_dropped_bit(&f, 0).unwrap_err(),
            Error::NotABitDrop
        );
        let wide = BooleanFunction::constant(3, bs("1")).unwrap();
        assert!(matches!(
            detect_dropped_bit(&wide, 0),
            Err(Error::WrongShape(_))
        ));
    }

    #[test]
    fn translation_is_invisible_and_exactly_signed() {
        let f = random_promise_instance(4, 3, PromiseKind::Balanced, 31).unwrap();
        for s in BitString::all(3) {
            for y in BitString::all(3) {
                assert!(translation_invariance_check(&f, &s, &y).unwrap());
                let base = gpk_final_amplitudes(&f, &y).unwrap();
                let shifted = gpk_final_amplitudes(&f.translate(&s).unwrap(), &y).unwrap();
                let sign = if s.dot(&y).unwrap() == 1 { -1.0 } else { 1.0 };
                for (a, b) in base.iter().zip(&shifted) {
                    assert_eq!(*b, sign * a, "s={s} y={y}");
                }
            }
        }
    }

    #[test]
    fn auto_backend_switches_on_register_size() {
        assert_eq!(Backend::auto(10, 10), Backend::Full);
        assert_eq!(Backend::auto(18, 3), Backend::Compact);
        assert_eq!("full".parse::<Backend>().unwrap(), Backend::Full);
        assert_eq!("compact".parse::<Backend>().unwrap(), Backend::Compact);
        assert!("fast".parse::<Backend>().is_err());
    }

    #[test]
    fn run_records_replay_from_their_seed() {
        let f = random_promise_instance(4, 2, PromiseKind::Balanced, 55).unwrap();
        let report = solve_generalized_dj(&f, None, Backend::Compact, 99).unwrap();
        for record in &report.runs {
            let replay = gpk_run(&f, &record.marker, record.backend, record.seed).unwrap();
            assert_eq!(replay.outcome, record.outcome);
            assert_eq!(replay.deterministic, record.deterministic);
        }
    }

    #[test]
    fn json_reports_are_stable_and_shaped() {
        let f = BooleanFunction::constant(3, bs("10")).unwrap();
        let report = solve_generalized_dj(&f, None, Backend::Full, 4).unwrap();
        let a = report.to_json(None);
        let b = report.to_json(None);
        assert_eq!(a, b);
        assert!(a.contains("\"problem\": \"dj\""));
        assert!(a.contains("\"verdict\": \"constant\""));
        assert!(a.contains("\"lambda\": \"00\""));
        assert!(a.contains("\"backend\": \"full\""));
        assert!(!a.contains("timestamp"));
        let with_ts = report.to_json(Some(1_700_000_000));
        assert!(with_ts.contains("\"timestamp\": 1700000000"));

        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["n"], 3);
        assert_eq!(parsed["m"], 2);
        assert_eq!(parsed["quantum_calls"], 2);
        assert_eq!(parsed["classical_calls"], 1);
        assert_eq!(parsed["runs"].as_array().unwrap().len(), 2);
        assert!(parsed["runs"][0].get("probability").is_none());
    }
}
