//! Pauli letters and strings, ladder operators, and Hilbert-Schmidt decomposition.
//!
//! Single-qubit matrices are written in the basis `(|1>, |0>)`, so `Z|1> = +|1>`.
//! Ladder operators keep the unnormalized convention `sigma_± = X ± iY`, whose
//! only nonzero entry is 2.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{Operator, ONE, ZERO};

/// Default magnitude below which decomposition coefficients are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-13;

const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn matrix(self) -> Operator {
        match self {
            PauliLetter::I => Operator::identity(2),
            PauliLetter::X => Operator::from_rows([[ZERO, ONE], [ONE, ZERO]]),
            PauliLetter::Y => Operator::from_rows([[ZERO, -I_UNIT], [I_UNIT, ZERO]]),
            PauliLetter::Z => Operator::from_rows([[ONE, ZERO], [ZERO, -ONE]]),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    /// Action on the local basis index `bit` (0 = up): returns `(output bit, amplitude)`.
    fn act(self, bit: usize) -> (usize, Complex64) {
        match self {
            PauliLetter::I => (bit, ONE),
            PauliLetter::X => (bit ^ 1, ONE),
            PauliLetter::Y => (bit ^ 1, if bit == 0 { I_UNIT } else { -I_UNIT }),
            PauliLetter::Z => (bit, if bit == 0 { ONE } else { -ONE }),
        }
    }
}

/// `sigma_+ = X + iY = [[0, 2], [0, 0]]`.
pub fn sigma_plus() -> Operator {
    &PauliLetter::X.matrix() + &PauliLetter::Y.matrix().scale(I_UNIT)
}

/// `sigma_- = X - iY = [[0, 0], [2, 0]]`.
pub fn sigma_minus() -> Operator {
    &PauliLetter::X.matrix() - &PauliLetter::Y.matrix().scale(I_UNIT)
}

/// A coefficient times a tensor product of Pauli letters, qubit 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub letters: Vec<PauliLetter>,
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, letters: Vec<PauliLetter>) -> Self {
        PauliTerm { coefficient, letters }
    }

    pub fn real(coefficient: f64, letters: &str) -> Self {
        let letters = letters
            .chars()
            .map(|c| PauliLetter::from_char(c).expect("letter must be one of IXYZ"))
            .collect();
        PauliTerm::new(Complex64::new(coefficient, 0.0), letters)
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }
}

impl fmt::Display for PauliTerm {
    /// `+0.7853981634 IX`; an imaginary part, when present, follows as `+0.1234567890i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficient;
        write!(f, "{:+.10}", c.re)?;
        if c.im.abs() > PRUNE_THRESHOLD {
            write!(f, "{:+.10}i", c.im)?;
        }
        write!(f, " {}", self.label())
    }
}

/// `coefficient * (letter_1 ⊗ letter_2 ⊗ ...)`.
pub fn materialize(term: &PauliTerm) -> Operator {
    assert!(!term.letters.is_empty(), "a Pauli term needs at least one letter");
    let mats: Vec<Operator> = term.letters.iter().map(|l| l.matrix()).collect();
    crate::operator::tensor_all(&mats)
        .expect("nonempty")
        .scale(term.coefficient)
}

/// Sum of materialized terms on `qubits` qubits.
pub fn recompose(terms: &[PauliTerm], qubits: usize) -> Operator {
    terms
        .iter()
        .fold(Operator::zeros(1 << qubits), |acc, t| &acc + &materialize(t))
}

/// Hilbert-Schmidt projection `c_P = tr(P^dagger h) / 2^k` over all `4^k` strings,
/// keeping terms with `|c_P| > PRUNE_THRESHOLD`. Strings are ordered lexicographically
/// with `I < X < Y < Z`, qubit 1 leftmost.
pub fn decompose(h: &Operator) -> Result<Vec<PauliTerm>> {
    decompose_with_threshold(h, PRUNE_THRESHOLD)
}

pub fn decompose_with_threshold(h: &Operator, prune: f64) -> Result<Vec<PauliTerm>> {
    let qubits = h.qubit_count().ok_or(Error::NotPowerOfTwoDim(h.dim()))?;
    let dim = h.dim();
    let norm = dim as f64;
    let mut terms = Vec::new();
    let mut letters = vec![PauliLetter::I; qubits];
    for code in 0..(1usize << (2 * qubits)) {
        for (j, l) in letters.iter_mut().enumerate() {
            *l = PauliLetter::ALL[(code >> (2 * (qubits - 1 - j))) & 3];
        }
        // P is monomial: P|col> = amp |row>, so tr(P^dagger h) = sum conj(amp) h[row][col].
        let mut overlap = ZERO;
        for col in 0..dim {
            let (row, amp) = monomial_action(&letters, col);
            overlap += amp.conj() * h.get(row, col);
        }
        let coefficient = overlap / norm;
        if coefficient.norm() > prune {
            terms.push(PauliTerm::new(coefficient, letters.clone()));
        }
    }
    Ok(terms)
}

fn monomial_action(letters: &[PauliLetter], col: usize) -> (usize, Complex64) {
    let m = letters.len();
    let mut row = 0usize;
    let mut amp = ONE;
    for (j, l) in letters.iter().enumerate() {
        let shift = m - 1 - j;
        let (bit, a) = l.act((col >> shift) & 1);
        row |= bit << shift;
        amp *= a;
    }
    (row, amp)
}

/// One term per line in the text interchange format.
pub fn format_terms(terms: &[PauliTerm]) -> String {
    terms.iter().map(|t| format!("{t}\n")).collect()
}
