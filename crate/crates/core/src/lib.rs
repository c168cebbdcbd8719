//! Simulation library for generalised phase kick-back algorithms.
//!
//! Applying a Boolean-function oracle to a basis state |x⟩ paired with the
//! Walsh transform of a marker string y multiplies the branch by
//! (-1)^(y·f(x)): the function value never leaves the second register, but
//! its pairing with y lands in the phase. This crate implements that
//! technique end to end for f: {0,1}^n -> {0,1}^m:
//!
//! * [`f2`]: bit strings, Boolean matrices, and linear solving over the
//!   two-element field;
//! * [`oracle`]: function representations, promise classification, seeded
//!   instance generators, classical reference solvers, and audited call
//!   counters;
//! * [`sim`]: a dense statevector engine and a compact phase-vector
//!   backend that stores only the 2^n kicked signs;
//! * [`gpk`]: the algorithms built on those runs: the constant-vs-balanced
//!   decider (m runs), affine reconstruction (m runs + 1 classical call),
//!   the single-output special cases, and dropped-bit detection (n-1
//!   runs), each emitting replayable reports.
//!
//! Everything stochastic takes an explicit 64-bit seed and uses the same
//! portable generator ([`rng::SplitMix64`]), so identical inputs produce
//! identical reports on every platform.
//!
//! # Example
//!
//! ```
//! use gpk_core::{BitString, Backend, BooleanFunction, gpk_run};
//!
//! // Drop the lowest input bit of three, then ask marker 01 which input
//! // bit feeds output bit 0.
//! let f = BooleanFunction::bit_drop(3, 0)?;
//! let marker: BitString = "01".parse()?;
//! let record = gpk_run(&f, &marker, Backend::Full, 7)?;
//! assert_eq!(record.outcome.to_string(), "010");
//! assert!(record.deterministic);
//! # Ok::<(), gpk_core::Error>(())
//! ```

pub mod error;
pub mod f2;
pub mod gpk;
pub mod oracle;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use f2::{is_basis, BitString, F2LinearSystem, F2Matrix, F2Solution};
pub use gpk::{
    detect_dropped_bit, detect_dropped_bit_report, gpk_final_amplitudes,
    gpk_final_amplitudes_full, gpk_run, solve_bv, solve_classic_dj, solve_generalized_bv,
    solve_generalized_dj, solve_modified_bv, translation_invariance_check, Backend, BvReport,
    DjReport, DropBitReport, GpkRunRecord, Verdict,
};
pub use oracle::{
    classical_bv_solver, classical_dj_solver, drop_matrix, format_truth_table,
    parse_truth_table, random_affine_instance, random_promise_instance, BooleanFunction,
    OracleRepr, PromiseClass, PromiseKind,
};
pub use sim::{
    compact_final_transform, compact_gpk_run, fwht_inplace, gamma_state, MeasurementOutcome,
    PhaseVector, StateVector,
};
