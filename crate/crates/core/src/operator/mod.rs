//! Dense complex operators on qubit spaces.
//!
//! Basis ordering: within every qubit factor the "up" state `|1>` comes first,
//! so a basis state `|q1 q2 ... qm>` sits at index `sum_j (1 - q_j) 2^(m - j)`.
//! `|11...1>` is therefore index 0 and `|00...0>` is the last index. Qubit 1 is
//! the most significant position.

mod eig;
mod json;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eig::{hermitian_eig, normal_eigenvalues, propagator, HermitianEigen, HERMITIAN_TOL};
pub use json::{format_real, ket_to_json, operator_from_json, operator_to_json};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square matrix of complex amplitudes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be positive");
        Operator {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = ONE;
        }
        op
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Operator { dim, entries })
    }

    /// Builds an operator from nested rows. Panics on ragged input.
    pub fn from_rows<const D: usize>(rows: [[Complex64; D]; D]) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Operator { dim: D, entries }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut op = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                op.entries[r * dim + c] = f(r, c);
            }
        }
        op
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut op = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            op.entries[i * values.len() + i] = *v;
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits, if the dimension is a power of two.
    pub fn qubit_count(&self) -> Option<usize> {
        self.dim.is_power_of_two().then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        Operator::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the more significant factor.
    pub fn tensor(&self, other: &Operator) -> Operator {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut out = Operator::zeros(dim);
        for i1 in 0..da {
            for j1 in 0..da {
                let a = self.get(i1, j1);
                if a == ZERO {
                    continue;
                }
                for i2 in 0..db {
                    let row = (i1 * db + i2) * dim + j1 * db;
                    for j2 in 0..db {
                        out.entries[row + j2] = a * other.get(i2, j2);
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            let out_row = &mut out.entries[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||h - h^dagger||_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut sum = 0.0;
        for r in 0..n {
            for c in 0..n {
                sum += (self.get(r, c) - self.get(c, r).conj()).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// `||u^dagger u - I||_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("adjoint has matching dimension");
        frobenius_distance(&gram, &Operator::identity(self.dim)).expect("same dimension")
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        check_dims(self.dim, ket.dim())?;
        let n = self.dim;
        let amplitudes = (0..n)
            .map(|r| {
                self.entries[r * n..(r + 1) * n]
                    .iter()
                    .zip(ket.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(Ket { amplitudes })
    }

    /// Maximum entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        check_dims(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `||a - b||_F`.
pub fn frobenius_distance(a: &Operator, b: &Operator) -> Result<f64> {
    check_dims(a.dim, b.dim)?;
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Tensor product of a sequence of operators, first factor most significant.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a Operator>) -> Option<Operator> {
    factors.into_iter().fold(None, |acc: Option<Operator>, f| match acc {
        None => Some(f.clone()),
        Some(a) => Some(a.tensor(f)),
    })
}

/// Embeds a two-qubit operator acting on qubits `first` and `second` (1-based,
/// `first` is the more significant index of `gate`) into a `qubits`-qubit space.
pub fn embed_two_qubit(gate: &Operator, first: usize, second: usize, qubits: usize) -> Operator {
    assert_eq!(gate.dim(), 4, "two-qubit gate must be 4x4");
    assert!(first != second && (1..=qubits).contains(&first) && (1..=qubits).contains(&second));
    let dim = 1usize << qubits;
    let bit_a = qubits - first;
    let bit_b = qubits - second;
    let mask = (1usize << bit_a) | (1usize << bit_b);
    let local = |idx: usize| (((idx >> bit_a) & 1) << 1) | ((idx >> bit_b) & 1);
    let place = |idx: usize, sub: usize| (idx & !mask) | (((sub >> 1) & 1) << bit_a) | ((sub & 1) << bit_b);
    let mut out = Operator::zeros(dim);
    for col in 0..dim {
        let s = local(col);
        for r in 0..4 {
            let amp = gate.get(r, s);
            if amp != ZERO {
                out.set(place(col, r), col, amp);
            }
        }
    }
    out
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimMismatch { left, right })
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in operator sum");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in operator difference");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs).expect("dimension mismatch in operator product")
    }
}

/// A computational basis state `|q1 q2 ... qm>`, qubit 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    bits: Vec<bool>,
}

impl BasisState {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidBitString(String::new()));
        }
        Ok(BasisState { bits })
    }

    /// `|1 0 ... 0>` on `qubits` qubits: control up, copies down.
    pub fn control_up(qubits: usize) -> Self {
        let mut bits = vec![false; qubits];
        bits[0] = true;
        BasisState { bits }
    }

    pub fn all_up(qubits: usize) -> Self {
        BasisState {
            bits: vec![true; qubits],
        }
    }

    pub fn all_down(qubits: usize) -> Self {
        BasisState {
            bits: vec![false; qubits],
        }
    }

    pub fn from_index(index: usize, qubits: usize) -> Self {
        let bits = (0..qubits).map(|j| (index >> (qubits - 1 - j)) & 1 == 0).collect();
        BasisState { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn qubits(&self) -> usize {
        self.bits.len()
    }

    /// Position in the up-first ordering.
    pub fn index(&self) -> usize {
        let m = self.bits.len();
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &up)| !up)
            .map(|(j, _)| 1usize << (m - 1 - j))
            .sum()
    }
}

impl std::str::FromStr for BasisState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(Error::InvalidBitString(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        BasisState::new(bits).map_err(|_| Error::InvalidBitString(s.to_string()))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// State vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EntryCount { expected: 1, found: 0 });
        }
        Ok(Ket { amplitudes })
    }

    pub fn basis(state: &BasisState) -> Ket {
        let dim = 1usize << state.qubits();
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[state.index()] = ONE;
        Ket { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Ket) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Ket {
        Ket { amplitudes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = Operator::identity(2);
        assert_eq!(i2.tensor(&i2), Operator::identity(4));
    }

    #[test]
    fn projector_tensor_flip() {
        let a = Operator::diagonal(&[c(2.0, 0.0), ZERO]);
        let x = Operator::from_rows([[ZERO, ONE], [ONE, ZERO]]);
        let t = a.tensor(&x);
        for r in 0..4 {
            for col in 0..4 {
                let want = if (r, col) == (0, 1) || (r, col) == (1, 0) {
                    2.0
                } else {
                    0.0
                };
                assert_eq!(t.get(r, col), c(want, 0.0));
            }
        }
    }

    #[test]
    fn raising_tensor_raising() {
        let sp = Operator::from_rows([[ZERO, c(2.0, 0.0)], [ZERO, ZERO]]);
        let t = sp.tensor(&sp);
        let nonzero: Vec<_> = (0..16).filter(|&k| t.entries()[k] != ZERO).collect();
        assert_eq!(nonzero, vec![3]);
        assert_eq!(t.get(0, 3), c(4.0, 0.0));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(Operator::identity(3).adjoint(), Operator::identity(3));
        let a = Operator::from_rows([[ZERO, c(0.0, 1.0)], [ZERO, ZERO]]);
        let want = Operator::from_rows([[ZERO, ZERO], [c(0.0, -1.0), ZERO]]);
        assert_eq!(a.adjoint(), want);
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn frobenius_examples() {
        let i = Operator::identity(2);
        assert_eq!(frobenius_distance(&i, &i).unwrap(), 0.0);
        let d = frobenius_distance(&i, &Operator::zeros(2)).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            frobenius_distance(&i, &Operator::identity(4)),
            Err(Error::DimMismatch { left: 2, right: 4 })
        );
    }

    #[test]
    fn basis_indexing_is_up_first() {
        assert_eq!("11".parse::<BasisState>().unwrap().index(), 0);
        assert_eq!("10".parse::<BasisState>().unwrap().index(), 1);
        assert_eq!("01".parse::<BasisState>().unwrap().index(), 2);
        assert_eq!("00".parse::<BasisState>().unwrap().index(), 3);
        assert_eq!(BasisState::control_up(3).index(), 3);
        assert_eq!(BasisState::all_down(3).index(), 7);
        for idx in 0..16 {
            assert_eq!(BasisState::from_index(idx, 4).index(), idx);
        }
        assert!("1x0".parse::<BasisState>().is_err());
        assert!("".parse::<BasisState>().is_err());
        assert_eq!(BasisState::from_index(1, 3).to_string(), "110");
    }

    #[test]
    fn embedding_matches_tensor_on_adjacent_pair() {
        let gate = Operator::from_fn(4, |r, col| c(r as f64, col as f64 * 0.5));
        let embedded = embed_two_qubit(&gate, 1, 2, 3);
        let want = gate.tensor(&Operator::identity(2));
        assert_eq!(embedded, want);
        let embedded = embed_two_qubit(&gate, 2, 3, 3);
        assert_eq!(embedded, Operator::identity(2).tensor(&gate));
    }

    #[test]
    fn entry_count_is_checked() {
        assert!(Operator::from_entries(2, vec![ONE; 3]).is_err());
        assert!(Operator::from_entries(0, vec![]).is_err());
    }
}
