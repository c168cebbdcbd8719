//! Boolean functions f: {0,1}^n -> {0,1}^m as queryable oracles.
//!
//! A [`BooleanFunction`] carries one of three representations (explicit
//! truth table, affine map, bit-dropping projection) together with call
//! counters, so query-complexity claims can be audited rather than assumed.
//! The module also provides promise classification, seeded instance
//! generators, the deterministic classical solvers the quantum algorithms
//! are compared against, and a plain-text truth-table file format.
//!
//! # Call accounting
//!
//! Three counters are kept per function, all atomic:
//!
//! * `classical`: algorithm-visible classical evaluations ([`BooleanFunction::evaluate`]);
//! * `quantum`: oracle-gate applications, one per application regardless of
//!   superposition size (incremented by the simulator);
//! * `internal`: evaluations performed by the simulator while expanding the
//!   gate and by introspection such as [`BooleanFunction::classify_promise`].
//!   These never count toward complexity comparisons.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::f2::{BitString, F2Matrix, MAX_BITS};
use crate::rng::SplitMix64;

/// Largest input width for which exhaustive 2^n work (truth tables,
/// classification, classical solvers) is allowed.
pub const MAX_SCAN_INPUT: usize = 20;

/// Largest input width accepted at all (compact simulation only).
pub const MAX_INPUT: usize = 26;

/// How a [`BooleanFunction`] computes its outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleRepr {
    /// Output for every input, indexed by the input's integer value.
    TruthTable(Vec<BitString>),
    /// f(x) = offset xor (matrix . x).
    Affine { matrix: F2Matrix, offset: BitString },
    /// Deletes input bit `dropped`, preserving the relative order of the
    /// remaining bits: output bit i is input bit i for i < dropped and
    /// input bit i+1 otherwise.
    BitDrop { dropped: usize },
}

#[derive(Debug, Default)]
struct CallCounters {
    classical: AtomicU64,
    quantum: AtomicU64,
    internal: AtomicU64,
}

/// A Boolean function from n-bit strings to m-bit strings, with call
/// counters. Logically immutable; the counters are atomic, so shared
/// references can evaluate concurrently.
#[derive(Debug)]
pub struct BooleanFunction {
    n: usize,
    m: usize,
    repr: OracleRepr,
    counters: CallCounters,
}

impl BooleanFunction {
    /// Builds a function from its full truth table. The table length fixes
    /// n (it must be a power of two) and the entries fix m.
    pub fn from_truth_table(outputs: Vec<BitString>) -> Result<Self> {
        let len = outputs.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::WrongShape(format!(
                "truth table must have 2^n entries for n >= 1, got {len}"
            )));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_SCAN_INPUT {
            return Err(Error::TooLarge {
                what: "truth table input width",
                limit: MAX_SCAN_INPUT,
                got: n,
            });
        }
        let m = outputs[0].len();
        for out in &outputs {
            if out.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: out.len(),
                });
            }
        }
        Ok(Self {
            n,
            m,
            repr: OracleRepr::TruthTable(outputs),
            counters: CallCounters::default(),
        })
    }

    /// f(x) = offset xor (matrix . x). Width n is the column count, m the
    /// row count; `offset` must have length m.
    pub fn affine(matrix: F2Matrix, offset: BitString) -> Result<Self> {
        if offset.len() != matrix.rows() {
            return Err(Error::LengthMismatch {
                expected: matrix.rows(),
                got: offset.len(),
            });
        }
        check_input_width(matrix.cols())?;
        Ok(Self {
            n: matrix.cols(),
            m: matrix.rows(),
            repr: OracleRepr::Affine {
                offset,
                matrix,
            },
            counters: CallCounters::default(),
        })
    }

    /// The constant function with the given value on n-bit inputs.
    pub fn constant(n: usize, value: BitString) -> Result<Self> {
        Self::affine(F2Matrix::zeros(value.len(), n)?, value)
    }

    /// The projection {0,1}^n -> {0,1}^(n-1) that deletes input bit
    /// `dropped`.
    pub fn bit_drop(n: usize, dropped: usize) -> Result<Self> {
        check_input_width(n)?;
        if n < 2 {
            return Err(Error::WrongShape(
                "bit-drop needs at least 2 input bits".into(),
            ));
        }
        if dropped >= n {
            return Err(Error::BadIndex {
                index: dropped,
                size: n,
            });
        }
        Ok(Self {
            n,
            m: n - 1,
            repr: OracleRepr::BitDrop { dropped },
            counters: CallCounters::default(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn repr(&self) -> &OracleRepr {
        &self.repr
    }

    fn eval_raw(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        match &self.repr {
            OracleRepr::TruthTable(outputs) => Ok(outputs[x.index()]),
            OracleRepr::Affine { matrix, offset } => matrix.mat_vec(x)?.xor(offset),
            OracleRepr::BitDrop { dropped } => {
                let v = x.value();
                let low = v & ((1 << dropped) - 1);
                let high = (v >> (dropped + 1)) << dropped;
                BitString::from_int(self.m, u64::from(low | high))
            }
        }
    }

    /// Evaluates f(x) as an algorithm-visible classical query (counted).
    pub fn evaluate(&self, x: &BitString) -> Result<BitString> {
        self.counters.classical.fetch_add(1, Ordering::Relaxed);
        self.eval_raw(x)
    }

    /// Evaluates f(x) as simulator/introspection work, counted separately
    /// from algorithm queries.
    pub(crate) fn evaluate_internal(&self, x: &BitString) -> Result<BitString> {
        self.counters.internal.fetch_add(1, Ordering::Relaxed);
        self.eval_raw(x)
    }

    /// Records one oracle-gate application.
    pub(crate) fn count_quantum_call(&self) {
        self.counters.quantum.fetch_add(1, Ordering::Relaxed);
    }

    /// Algorithm-visible classical evaluations so far.
    pub fn classical_calls(&self) -> u64 {
        self.counters.classical.load(Ordering::Relaxed)
    }

    /// Oracle-gate applications so far.
    pub fn quantum_calls(&self) -> u64 {
        self.counters.quantum.load(Ordering::Relaxed)
    }

    /// Simulator-work and introspection evaluations so far.
    pub fn internal_calls(&self) -> u64 {
        self.counters.internal.load(Ordering::Relaxed)
    }

    pub fn reset_counters(&self) {
        self.counters.classical.store(0, Ordering::Relaxed);
        self.counters.quantum.store(0, Ordering::Relaxed);
        self.counters.internal.store(0, Ordering::Relaxed);
    }

    /// Scans all 2^n inputs and reports whether the function is constant,
    /// balanced (exactly two values, each on half the inputs), or neither.
    ///
    /// Introspection: the scan is charged to the internal counter, not the
    /// classical one, so complexity experiments stay unpolluted.
    pub fn classify_promise(&self) -> Result<PromiseClass> {
        check_scan_width(self.n)?;
        let mut counts: HashMap<BitString, u64> = HashMap::new();
        for x in BitString::all(self.n) {
            let v = self.evaluate_internal(&x)?;
            *counts.entry(v).or_insert(0) += 1;
            if counts.len() > 2 {
                return Ok(PromiseClass::Neither);
            }
        }
        let mut entries: Vec<(BitString, u64)> = counts.into_iter().collect();
        entries.sort();
        match entries.as_slice() {
            [(value, _)] => Ok(PromiseClass::Constant(*value)),
            [(f1, c1), (f2, c2)] if c1 == c2 => Ok(PromiseClass::Balanced(*f1, *f2)),
            _ => Ok(PromiseClass::Neither),
        }
    }

    /// Returns the function x -> f(x) xor s, with fresh counters.
    pub fn translate(&self, s: &BitString) -> Result<BooleanFunction> {
        if s.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got: s.len(),
            });
        }
        match &self.repr {
            OracleRepr::TruthTable(outputs) => {
                let shifted = outputs
                    .iter()
                    .map(|out| out.xor(s))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_truth_table(shifted)
            }
            OracleRepr::Affine { matrix, offset } => {
                Self::affine(matrix.clone(), offset.xor(s)?)
            }
            // Bit dropping is linear, so the translate is affine.
            OracleRepr::BitDrop { dropped } => {
                Self::affine(drop_matrix(self.n, *dropped)?, *s)
            }
        }
    }

    /// Materializes the function as an explicit truth table (n <= 20).
    /// Charged to the internal counter.
    pub fn to_truth_table(&self) -> Result<BooleanFunction> {
        check_scan_width(self.n)?;
        let outputs = BitString::all(self.n)
            .map(|x| self.evaluate_internal(&x))
            .collect::<Result<Vec<_>>>()?;
        Self::from_truth_table(outputs)
    }
}

/// The matrix of the bit-dropping projection: (n-1) x n, row i the unit
/// vector at input index i (below `dropped`) or i+1 (at or above it).
pub fn drop_matrix(n: usize, dropped: usize) -> Result<F2Matrix> {
    if dropped >= n {
        return Err(Error::BadIndex {
            index: dropped,
            size: n,
        });
    }
    let rows = (0..n - 1)
        .map(|i| BitString::unit(n, if i < dropped { i } else { i + 1 }))
        .collect::<Result<Vec<_>>>()?;
    F2Matrix::from_rows(rows)
}

fn check_input_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_INPUT {
        return Err(Error::TooLarge {
            what: "oracle input width",
            limit: MAX_INPUT,
            got: n,
        });
    }
    Ok(())
}

fn check_scan_width(n: usize) -> Result<()> {
    if n > MAX_SCAN_INPUT {
        return Err(Error::TooLarge {
            what: "exhaustive-scan input width",
            limit: MAX_SCAN_INPUT,
            got: n,
        });
    }
    Ok(())
}

fn check_output_width(m: usize) -> Result<()> {
    if m == 0 || m > MAX_BITS {
        return Err(Error::TooLarge {
            what: "oracle output width",
            limit: MAX_BITS,
            got: m,
        });
    }
    Ok(())
}

/// Result of classifying a function against the constant-or-balanced
/// promise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PromiseClass {
    /// Every input maps to this value.
    Constant(BitString),
    /// Exactly two values, each taken on half the inputs; ordered so the
    /// first is the smaller integer.
    Balanced(BitString, BitString),
    /// The promise does not hold.
    Neither,
}

impl PromiseClass {
    /// Canonical balanced class with the values in integer order.
    pub fn balanced(a: BitString, b: BitString) -> Self {
        if a <= b {
            PromiseClass::Balanced(a, b)
        } else {
            PromiseClass::Balanced(b, a)
        }
    }
}

/// Which kind of promise instance to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PromiseKind {
    Constant,
    Balanced,
}

/// Generates a random constant or balanced function as a truth table,
/// deterministically from the seed.
///
/// Balanced instances pick two distinct values and assign the first to a
/// uniformly random half of the inputs.
pub fn random_promise_instance(
    n: usize,
    m: usize,
    kind: PromiseKind,
    seed: u64,
) -> Result<BooleanFunction> {
    check_scan_width(n)?;
    if n == 0 {
        return Err(Error::TooLarge {
            what: "oracle input width",
            limit: MAX_SCAN_INPUT,
            got: 0,
        });
    }
    check_output_width(m)?;
    let mut rng = SplitMix64::new(seed);
    match kind {
        PromiseKind::Constant => {
            let value = BitString::from_int(m, u64::from(rng.next_bits(m)))?;
            Ok(BooleanFunction::from_truth_table(vec![value; 1 << n])?)
        }
        PromiseKind::Balanced => {
            let f1 = BitString::from_int(m, u64::from(rng.next_bits(m)))?;
            let f2 = loop {
                let candidate = BitString::from_int(m, u64::from(rng.next_bits(m)))?;
                if candidate != f1 {
                    break candidate;
                }
            };
            let size = 1usize << n;
            let mut inputs: Vec<usize> = (0..size).collect();
            rng.shuffle(&mut inputs);
            let mut outputs = vec![f1; size];
            for &idx in &inputs[size / 2..] {
                outputs[idx] = f2;
            }
            Ok(BooleanFunction::from_truth_table(outputs)?)
        }
    }
}

/// Generates a uniformly random affine function f(x) = r0 xor (R . x),
/// deterministically from the seed.
pub fn random_affine_instance(n: usize, m: usize, seed: u64) -> Result<BooleanFunction> {
    check_input_width(n)?;
    check_output_width(m)?;
    let mut rng = SplitMix64::new(seed);
    let rows = (0..m)
        .map(|_| BitString::from_int(n, u64::from(rng.next_bits(n))))
        .collect::<Result<Vec<_>>>()?;
    let r0 = BitString::from_int(m, u64::from(rng.next_bits(m)))?;
    BooleanFunction::affine(F2Matrix::from_rows(rows)?, r0)
}

/// Deterministic classical solver for the constant-or-balanced decision.
///
/// Evaluates f on inputs 0, 1, 2, ... in order. The first disagreement
/// proves the function balanced and already exhibits both values; if
/// 2^(n-1) + 1 evaluations all agree, a balanced function is ruled out by
/// counting, so the function is constant. The worst case is therefore
/// exactly 2^(n-1) + 1 counted calls.
///
/// The promise is assumed: on a function that is neither constant nor
/// balanced the verdict is meaningless (a first disagreement still returns
/// Balanced, since under the promise that is the only possibility).
pub fn classical_dj_solver(f: &BooleanFunction) -> Result<PromiseClass> {
    check_scan_width(f.n())?;
    let first = f.evaluate(&BitString::zero(f.n())?)?;
    let budget = (1u64 << (f.n() - 1)) + 1;
    for k in 1..budget {
        let v = f.evaluate(&BitString::from_int(f.n(), k)?)?;
        if v != first {
            return Ok(PromiseClass::balanced(first, v));
        }
    }
    Ok(PromiseClass::Constant(first))
}

/// Deterministic classical solver for affine reconstruction.
///
/// Computes r0 = f(0) and column j of R as f(e_j) xor r0, spending exactly
/// n + 1 counted calls. For n <= 12 a post-hoc sweep (internal counter)
/// verifies the reconstruction on every input and reports
/// [`Error::NotAffine`] on any mismatch; for larger n the affine
/// precondition is trusted.
pub fn classical_bv_solver(f: &BooleanFunction) -> Result<(F2Matrix, BitString)> {
    let n = f.n();
    let m = f.m();
    let r0 = f.evaluate(&BitString::zero(n)?)?;
    let mut rows = vec![BitString::zero(n)?; m];
    for j in 0..n {
        let column = f.evaluate(&BitString::unit(n, j)?)?.xor(&r0)?;
        for (i, row) in rows.iter_mut().enumerate() {
            row.set_bit(j, column.bit(i));
        }
    }
    let matrix = F2Matrix::from_rows(rows)?;
    if n <= 12 {
        for x in BitString::all(n) {
            let expected = matrix.mat_vec(&x)?.xor(&r0)?;
            if f.evaluate_internal(&x)? != expected {
                return Err(Error::NotAffine);
            }
        }
    }
    Ok((matrix, r0))
}

/// Parses the truth-table text format.
///
/// Line 1 is `n m`; then exactly 2^n lines follow, line k (0-based) giving
/// the m-character output for input integer k, highest index leftmost.
/// Errors carry 1-based line and column positions. CRLF line endings are
/// accepted.
pub fn parse_truth_table(text: &str) -> Result<BooleanFunction> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().ok_or_else(|| Error::TableParse {
        line: 1,
        column: 1,
        message: "expected header \"n m\"".into(),
    })?;
    let (n, m) = parse_header(header)?;
    if n > MAX_SCAN_INPUT {
        return Err(Error::TableParse {
            line: 1,
            column: 1,
            message: format!("input width {n} exceeds limit {MAX_SCAN_INPUT}"),
        });
    }
    if m == 0 || m > MAX_BITS {
        return Err(Error::TableParse {
            line: 1,
            column: 1,
            message: format!("output width {m} out of range 1..={MAX_BITS}"),
        });
    }
    let expected = 1usize << n;
    let mut outputs = Vec::with_capacity(expected);
    for (k, line) in lines.by_ref().take(expected).enumerate() {
        outputs.push(parse_table_line(line, k + 2, m)?);
    }
    if outputs.len() < expected {
        return Err(Error::TableParse {
            line: outputs.len() + 2,
            column: 1,
            message: format!("expected {expected} output lines, got {}", outputs.len()),
        });
    }
    for (extra, line) in lines.enumerate() {
        if !line.trim().is_empty() {
            return Err(Error::TableParse {
                line: expected + 2 + extra,
                column: 1,
                message: "unexpected content after the table".into(),
            });
        }
    }
    let f = BooleanFunction::from_truth_table(outputs)?;
    debug_assert_eq!(f.n(), n);
    Ok(f)
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let mut fields = Vec::new();
    let mut start = None;
    for (pos, c) in header.char_indices().chain([(header.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                fields.push((s, &header[s..pos]));
                start = None;
            }
            _ => {}
        }
    }
    match fields.as_slice() {
        [(p1, tok1), (p2, tok2)] => {
            let n = tok1.parse::<usize>().map_err(|_| Error::TableParse {
                line: 1,
                column: p1 + 1,
                message: format!("invalid input width {tok1:?}"),
            })?;
            let m = tok2.parse::<usize>().map_err(|_| Error::TableParse {
                line: 1,
                column: p2 + 1,
                message: format!("invalid output width {tok2:?}"),
            })?;
            Ok((n, m))
        }
        other => Err(Error::TableParse {
            line: 1,
            column: other.get(2).map_or(1, |(p, _)| p + 1),
            message: format!("expected header \"n m\", found {} fields", other.len()),
        }),
    }
}

fn parse_table_line(line: &str, lineno: usize, m: usize) -> Result<BitString> {
    let mut bits = 0u64;
    let mut seen = 0usize;
    for (pos, c) in line.char_indices() {
        if seen == m {
            return Err(Error::TableParse {
                line: lineno,
                column: pos + 1,
                message: format!("line longer than {m} characters"),
            });
        }
        bits <<= 1;
        match c {
            '0' => {}
            '1' => bits |= 1,
            other => {
                return Err(Error::TableParse {
                    line: lineno,
                    column: pos + 1,
                    message: format!("character {other:?} is not 0 or 1"),
                });
            }
        }
        seen += 1;
    }
    if seen < m {
        return Err(Error::TableParse {
            line: lineno,
            column: seen + 1,
            message: format!("expected {m} characters, got {seen}"),
        });
    }
    BitString::from_int(m, bits)
}

/// Renders a function in the truth-table text format (n <= 20). The scan
/// is charged to the internal counter.
pub fn format_truth_table(f: &BooleanFunction) -> Result<String> {
    check_scan_width(f.n())?;
    let mut out = format!("{} {}\n", f.n(), f.m());
    for x in BitString::all(f.n()) {
        out.push_str(&f.evaluate_internal(&x)?.to_string());
        out.push('\n');
    }
    Ok(out)
}
