//! Bit strings and linear algebra over the two-element field.
//!
//! Everything downstream (oracles, the simulator, the solvers) is built on
//! the types here: fixed-length bit strings with xor and the bitwise-product
//! pairing, Boolean matrices acting on them, and Gaussian elimination for
//! solving small linear systems.
//!
//! # Conventions
//!
//! Bit index `i` is the coefficient of `2^i`, so the *rightmost* character
//! of the textual form is index 0 and [`BitString::unit`]`(len, i)` has its
//! single 1 at index `i`. Textual rendering puts index `len-1` leftmost:
//! `"010"` is the 3-bit string with only index 1 set, integer value 2. This
//! convention is used verbatim in CLI I/O and the truth-table file format.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum supported length for a [`BitString`] and for either dimension of
/// an [`F2Matrix`]. Everything fits in one machine word below this cap.
pub const MAX_BITS: usize = 30;

/// A fixed-length vector over the two-element field, at most [`MAX_BITS`]
/// bits, packed into a single word.
///
/// Ordering compares lengths first and the packed integer value second, so
/// equal-length strings sort by integer value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u8,
    bits: u32,
}

impl BitString {
    /// The all-zero string of the given length.
    pub fn zero(len: usize) -> Result<Self> {
        Self::from_int(len, 0)
    }

    /// The string whose only 1 is at index `i` (the canonical basis vector).
    pub fn unit(len: usize, i: usize) -> Result<Self> {
        if i >= len {
            return Err(Error::BadIndex { index: i, size: len });
        }
        Self::from_int(len, 1u64 << i)
    }

    /// Builds a string of length `len` from its integer value (bit `i` of
    /// `value` becomes index `i`). Errors if `value` needs more bits.
    pub fn from_int(len: usize, value: u64) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return Err(Error::TooLarge {
                what: "bit string length",
                limit: MAX_BITS,
                got: len,
            });
        }
        if value >> len != 0 {
            return Err(Error::InvalidBitString(format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self {
            len: len as u8,
            bits: value as u32,
        })
    }

    /// All 2^len strings of a given length, in integer order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        debug_assert!((1..=MAX_BITS).contains(&len));
        (0u64..(1u64 << len)).map(move |v| BitString {
            len: len as u8,
            bits: v as u32,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    /// The packed integer value (index `i` contributes `2^i`).
    pub fn value(&self) -> u32 {
        self.bits
    }

    /// The integer value as a `usize`, for indexing amplitude arrays.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Bit at index `i`, as 0 or 1. Panics if `i >= len`.
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i < self.len(), "bit index {i} out of range");
        ((self.bits >> i) & 1) as u8
    }

    /// Sets bit `i`. Panics if `i >= len`.
    pub fn set_bit(&mut self, i: usize, value: u8) {
        assert!(i < self.len(), "bit index {i} out of range");
        self.bits = (self.bits & !(1 << i)) | ((u32::from(value) & 1) << i);
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Number of 1 bits.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Bitwise exclusive or. Errors on a length mismatch.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.check_len(other)?;
        Ok(BitString {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    /// The pairing `(a0 b0) xor ... xor (a_{n-1} b_{n-1})` (not a scalar
    /// product). Errors on a length mismatch.
    pub fn dot(&self, other: &BitString) -> Result<u8> {
        self.check_len(other)?;
        Ok(((self.bits & other.bits).count_ones() & 1) as u8)
    }

    fn check_len(&self, other: &BitString) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BitString {
    /// Index `len-1` leftmost, index 0 rightmost.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len()).rev() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses the textual form: leftmost character is the highest index.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidBitString("empty string".into()));
        }
        if s.len() > MAX_BITS {
            return Err(Error::TooLarge {
                what: "bit string length",
                limit: MAX_BITS,
                got: s.len(),
            });
        }
        let mut bits = 0u32;
        for (pos, c) in s.chars().enumerate() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                other => {
                    return Err(Error::InvalidBitString(format!(
                        "character '{other}' at position {pos} is not 0 or 1"
                    )))
                }
            }
        }
        Ok(BitString {
            len: s.len() as u8,
            bits,
        })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A Boolean matrix with `rows x cols` entries, stored as one [`BitString`]
/// per row. Row `i` acting on `x` contributes bit `i` of the product.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<BitString>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dim("matrix rows", rows)?;
        check_dim("matrix cols", cols)?;
        Ok(Self {
            cols,
            rows: vec![BitString::zero(cols)?; rows],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.rows[i] = BitString::unit(n, i)?;
        }
        Ok(m)
    }

    /// Builds a matrix from its rows. All rows must share one length.
    pub fn from_rows(rows: Vec<BitString>) -> Result<Self> {
        check_dim("matrix rows", rows.len())?;
        let cols = rows[0].len();
        for r in &rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Self { cols, rows })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> BitString {
        self.rows[i]
    }

    pub fn row_slice(&self) -> &[BitString] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.rows[i].bit(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        self.rows[i].set_bit(j, value);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitString::is_zero)
    }

    /// Matrix-vector action over the field: bit `i` of the result is
    /// `row_i . x`. Errors if `x.len() != cols`.
    pub fn mat_vec(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = BitString::zero(self.rows())?;
        for (i, row) in self.rows.iter().enumerate() {
            out.set_bit(i, row.dot(x)?);
        }
        Ok(out)
    }

    /// Matrix product over the field: row i of the result is the xor of
    /// the rows of `other` selected by the 1 bits of row i of `self`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows() {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|lhs| {
                let mut acc = BitString::zero(other.cols)?;
                for j in 0..self.cols {
                    if lhs.bit(j) == 1 {
                        acc = acc.xor(&other.rows[j])?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        F2Matrix::from_rows(rows)
    }

    /// Rank over the field, by elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut scratch: Vec<u32> = self.rows.iter().map(BitString::value).collect();
        rank_of_words(&mut scratch)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn invert(&self) -> Option<F2Matrix> {
        if self.rows() != self.cols {
            return None;
        }
        let n = self.cols;
        // Gauss-Jordan on rows packed as [A | I] in a single word each.
        let mut work: Vec<u64> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| u64::from(r.value()) | (1u64 << (n + i)))
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| work[r] >> col & 1 == 1)?;
            work.swap(col, pivot);
            for r in 0..n {
                if r != col && work[r] >> col & 1 == 1 {
                    work[r] ^= work[col];
                }
            }
        }
        let rows = work
            .iter()
            .map(|w| BitString::from_int(n, (w >> n) & ((1u64 << n) - 1)))
            .collect::<Result<Vec<_>>>()
            .ok()?;
        Some(F2Matrix { cols: n, rows })
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for F2Matrix {
    /// Serialized as an array of row strings, top row first.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows.iter().map(BitString::to_string))
    }
}

fn check_dim(what: &'static str, dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_BITS {
        return Err(Error::TooLarge {
            what,
            limit: MAX_BITS,
            got: dim,
        });
    }
    Ok(())
}

fn rank_of_words(rows: &mut [u32]) -> usize {
    let mut rank = 0;
    for col in 0..32 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r] >> col & 1 == 1 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// True iff `vectors` are exactly `m` linearly independent strings of
/// length `m` (i.e. a basis of {0,1}^m).
pub fn is_basis(vectors: &[BitString], m: usize) -> Result<bool> {
    for v in vectors {
        if v.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: v.len(),
            });
        }
    }
    if vectors.len() != m {
        return Ok(false);
    }
    let mut scratch: Vec<u32> = vectors.iter().map(BitString::value).collect();
    Ok(rank_of_words(&mut scratch) == m)
}

/// Outcome of solving a linear system over the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum F2Solution {
    /// The coefficient rows had full rank: the one and only solution.
    Unique(BitString),
    /// Consistent but rank-deficient.
    Underdetermined,
    /// Inconsistent.
    NoSolution,
}

/// A system of equations `coeffs . lambda = rhs` over the field, with an
/// `m`-bit unknown.
#[derive(Clone, Debug)]
pub struct F2LinearSystem {
    unknowns: usize,
    equations: Vec<(BitString, u8)>,
}

impl F2LinearSystem {
    pub fn new(unknowns: usize) -> Result<Self> {
        check_dim("system unknowns", unknowns)?;
        Ok(Self {
            unknowns,
            equations: Vec::new(),
        })
    }

    pub fn push(&mut self, coeffs: BitString, rhs: u8) -> Result<()> {
        if coeffs.len() != self.unknowns {
            return Err(Error::LengthMismatch {
                expected: self.unknowns,
                got: coeffs.len(),
            });
        }
        self.equations.push((coeffs, rhs & 1));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Gaussian elimination. Pivots are chosen in row order (first row with
    /// a 1 in the pivot column), so the computation is reproducible.
    pub fn solve(&self) -> F2Solution {
        let m = self.unknowns;
        // Row = coefficient bits, with the rhs parked at bit position m.
        let mut work: Vec<u64> = self
            .equations
            .iter()
            .map(|(c, rhs)| u64::from(c.value()) | (u64::from(*rhs) << m))
            .collect();
        let mut pivot_col = vec![usize::MAX; m];
        let mut rank = 0;
        for (col, pivot) in pivot_col.iter_mut().enumerate() {
            let Some(p) = (rank..work.len()).find(|&r| work[r] >> col & 1 == 1) else {
                continue;
            };
            work.swap(rank, p);
            for r in 0..work.len() {
                if r != rank && work[r] >> col & 1 == 1 {
                    work[r] ^= work[rank];
                }
            }
            *pivot = rank;
            rank += 1;
        }
        // Any leftover row reduced to 0 = 1 marks an inconsistency.
        if work
            .iter()
            .any(|&w| w & ((1u64 << m) - 1) == 0 && w >> m & 1 == 1)
        {
            return F2Solution::NoSolution;
        }
        if rank < m {
            return F2Solution::Underdetermined;
        }
        let mut solution = BitString::zero(m).expect("checked dims");
        for col in 0..m {
            solution.set_bit(col, (work[pivot_col[col]] >> m & 1) as u8);
        }
        F2Solution::Unique(solution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn display_round_trip() {
        let x = bs("010");
        assert_eq!(x.len(), 3);
        assert_eq!(x.bit(0), 0);
        assert_eq!(x.bit(1), 1);
        assert_eq!(x.bit(2), 0);
        assert_eq!(x.value(), 2);
        assert_eq!(x.to_string(), "010");
    }

    #[test]
    fn unit_has_single_one_at_index() {
        let e1 = BitString::unit(3, 1).unwrap();
        assert_eq!(e1.to_string(), "010");
        assert_eq!(BitString::unit(4, 0).unwrap().to_string(), "0001");
        assert_eq!(BitString::unit(4, 3).unwrap().to_string(), "1000");
    }

    #[test]
    fn xor_examples() {
        assert_eq!(bs("010").xor(&bs("011")).unwrap(), bs("001"));
        for x in BitString::all(5) {
            assert!(x.xor(&x).unwrap().is_zero());
            assert_eq!(x.xor(&BitString::zero(5).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn xor_length_mismatch() {
        assert_eq!(
            bs("01").xor(&bs("011")),
            Err(Error::LengthMismatch { expected: 2, got: 3 })
        );
    }

    #[test]
    fn dot_examples() {
        assert_eq!(bs("010").dot(&bs("011")).unwrap(), 1);
        for x in BitString::all(6) {
            assert_eq!(x.dot(&BitString::zero(6).unwrap()).unwrap(), 0);
        }
    }

    #[test]
    fn dot_distributes_over_xor_exhaustively() {
        for len in 1..=8 {
            for x in BitString::all(len) {
                for y in BitString::all(len) {
                    for z in BitString::all(len.min(4)) {
                        let z = BitString::from_int(len, z.value() as u64).unwrap();
                        let lhs = x.dot(&y.xor(&z).unwrap()).unwrap();
                        let rhs = x.dot(&y).unwrap() ^ x.dot(&z).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn mat_vec_identity_and_zero() {
        let id = F2Matrix::identity(3).unwrap();
        assert_eq!(id.mat_vec(&bs("101")).unwrap(), bs("101"));
        let z = F2Matrix::zeros(2, 3).unwrap();
        for x in BitString::all(3) {
            assert!(z.mat_vec(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn mat_vec_matches_per_row_dot() {
        // Rows 011 and 110 acting on 111, checked bit by bit against an
        // independently evaluated per-row pairing.
        let r = F2Matrix::from_rows(vec![bs("011"), bs("110")]).unwrap();
        let x = bs("111");
        let product = r.mat_vec(&x).unwrap();
        for i in 0..2 {
            let mut acc = 0u8;
            for j in 0..3 {
                acc ^= r.get(i, j) & x.bit(j);
            }
            assert_eq!(product.bit(i), acc);
        }
        assert_eq!(product, bs("00"));
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let r = F2Matrix::zeros(2, 3).unwrap();
        assert!(matches!(
            r.mat_vec(&bs("01")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    /// Brute-force reference: try all 2^m candidates.
    fn solve_by_enumeration(system: &F2LinearSystem) -> F2Solution {
        let m = system.unknowns;
        let mut found = Vec::new();
        for candidate in BitString::all(m) {
            if system
                .equations
                .iter()
                .all(|(c, rhs)| c.dot(&candidate).unwrap() == *rhs)
            {
                found.push(candidate);
            }
        }
        match found.len() {
            0 => F2Solution::NoSolution,
            1 => F2Solution::Unique(found[0]),
            _ => F2Solution::Underdetermined,
        }
    }

    #[test]
    fn solve_identity_system() {
        let lambda = bs("1011");
        let mut sys = F2LinearSystem::new(4).unwrap();
        for i in 0..4 {
            sys.push(BitString::unit(4, i).unwrap(), lambda.bit(i)).unwrap();
        }
        assert_eq!(sys.solve(), F2Solution::Unique(lambda));
    }

    #[test]
    fn solve_two_equation_example() {
        // Basis {11, 01} with right-hand sides {1, 0}; enumeration of all
        // four candidates singles out 10.
        let mut sys = F2LinearSystem::new(2).unwrap();
        sys.push(bs("11"), 1).unwrap();
        sys.push(bs("01"), 0).unwrap();
        let expected = solve_by_enumeration(&sys);
        assert_eq!(expected, F2Solution::Unique(bs("10")));
        assert_eq!(sys.solve(), expected);
    }

    #[test]
    fn solve_contradictory_duplicates() {
        let mut sys = F2LinearSystem::new(2).unwrap();
        sys.push(bs("11"), 0).unwrap();
        sys.push(bs("11"), 1).unwrap();
        assert_eq!(sys.solve(), F2Solution::NoSolution);
    }

    #[test]
    fn solve_underdetermined() {
        let mut sys = F2LinearSystem::new(3).unwrap();
        sys.push(bs("110"), 1).unwrap();
        assert_eq!(sys.solve(), F2Solution::Underdetermined);
    }

    #[test]
    fn solve_agrees_with_enumeration_randomized() {
        let mut rng = crate::rng::SplitMix64::new(0x5eed);
        for m in 1..=8 {
            for _ in 0..40 {
                let n_eqs = rng.next_below(2 * m as u64 + 1) as usize;
                let mut sys = F2LinearSystem::new(m).unwrap();
                for _ in 0..n_eqs {
                    let coeffs = BitString::from_int(m, rng.next_bits(m) as u64).unwrap();
                    sys.push(coeffs, (rng.next_u64() & 1) as u8).unwrap();
                }
                assert_eq!(sys.solve(), solve_by_enumeration(&sys), "m={m}");
            }
        }
    }

    #[test]
    fn basis_checks() {
        let canonical: Vec<BitString> = (0..4).map(|i| BitString::unit(4, i).unwrap()).collect();
        assert!(is_basis(&canonical, 4).unwrap());

        let with_zero = vec![bs("10"), bs("00")];
        assert!(!is_basis(&with_zero, 2).unwrap());

        // These three sum to zero, so they are dependent.
        let dependent = vec![bs("110"), bs("011"), bs("101")];
        assert_eq!(
            dependent[0].xor(&dependent[1]).unwrap().xor(&dependent[2]).unwrap(),
            BitString::zero(3).unwrap()
        );
        assert!(!is_basis(&dependent, 3).unwrap());

        // Wrong count is not a basis.
        assert!(!is_basis(&[bs("10")], 2).unwrap());
        // Wrong length is an error.
        assert!(matches!(
            is_basis(&[bs("10"), bs("011")], 2),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn invert_round_trip() {
        let m = F2Matrix::from_rows(vec![bs("110"), bs("011"), bs("001")]).unwrap();
        let inv = m.invert().unwrap();
        // M * M^-1 = I, checked entrywise through mat_vec on unit vectors.
        for j in 0..3 {
            let col = inv.mat_vec(&BitString::unit(3, j).unwrap()).unwrap();
            assert_eq!(m.mat_vec(&col).unwrap(), BitString::unit(3, j).unwrap());
        }
        assert_eq!(m.mul(&inv).unwrap(), F2Matrix::identity(3).unwrap());
        assert_eq!(inv.mul(&m).unwrap(), F2Matrix::identity(3).unwrap());
        let singular = F2Matrix::from_rows(vec![bs("110"), bs("011"), bs("101")]).unwrap();
        assert!(singular.invert().is_none());
    }

    #[test]
    fn mul_agrees_with_composed_action() {
        let a = F2Matrix::from_rows(vec![bs("101"), bs("011")]).unwrap();
        let b = F2Matrix::from_rows(vec![bs("11"), bs("01"), bs("10")]).unwrap();
        let ab = a.mul(&b).unwrap();
        for x in BitString::all(2) {
            assert_eq!(
                ab.mat_vec(&x).unwrap(),
                a.mat_vec(&b.mat_vec(&x).unwrap()).unwrap()
            );
        }
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn size_caps_enforced() {
        assert!(BitString::from_int(31, 0).is_err());
        assert!(BitString::from_int(0, 0).is_err());
        assert!(F2Matrix::zeros(31, 2).is_err());
        assert!("0101010101010101010101010101010".parse::<BitString>().is_err());
    }

    #[test]
    fn ordering_is_integer_order_for_equal_lengths() {
        assert!(bs("01") < bs("11"));
        assert!(bs("10") > bs("01"));
    }
}
