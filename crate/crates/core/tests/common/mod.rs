//! Oracles shared by the integration tests. None of these call into the
//! eigensolver, the Pauli decomposition, or the synthesis builders.

#![allow(dead_code)]

use num_complex::Complex64;
use qcopy::Operator;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn zero() -> Complex64 {
    c(0.0, 0.0)
}

pub fn one() -> Complex64 {
    c(1.0, 0.0)
}

/// `exp(-i h dt)` by Taylor series with scaling and squaring.
pub fn expm_series(h: &Operator, dt: f64) -> Operator {
    let n = h.dim();
    let a = h.scale(c(0.0, -dt));
    let norm = a.frobenius_norm();
    let mut squarings = 0;
    while norm / f64::powi(2.0, squarings) > 0.25 {
        squarings += 1;
    }
    let a = a.scale(c(1.0 / f64::powi(2.0, squarings), 0.0));
    let mut sum = Operator::identity(n);
    let mut term = Operator::identity(n);
    for k in 1..=30 {
        term = (&term * &a).scale(c(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Letters as explicit 2x2 matrices in the basis (|1>, |0>).
pub fn letter_matrix(letter: char) -> Operator {
    let (o, z, i) = (one(), zero(), c(0.0, 1.0));
    match letter {
        'I' => Operator::from_rows([[o, z], [z, o]]),
        'X' => Operator::from_rows([[z, o], [o, z]]),
        'Y' => Operator::from_rows([[z, -i], [i, z]]),
        'Z' => Operator::from_rows([[o, z], [z, -o]]),
        _ => panic!("bad letter {letter}"),
    }
}

pub fn string_matrix(label: &str) -> Operator {
    label
        .chars()
        .map(letter_matrix)
        .reduce(|a, b| a.tensor(&b))
        .expect("nonempty label")
}

pub fn all_labels(qubits: usize) -> Vec<String> {
    (0..4usize.pow(qubits as u32))
        .map(|code| {
            (0..qubits)
                .map(|j| ['I', 'X', 'Y', 'Z'][(code >> (2 * (qubits - 1 - j))) & 3])
                .collect()
        })
        .collect()
}

/// `tr(a^dagger b)` by full matrix product.
pub fn hs_inner(a: &Operator, b: &Operator) -> Complex64 {
    (&a.adjoint() * b).trace()
}

/// Exhaustive Hilbert-Schmidt projection onto every Pauli string, pruned at `prune`.
pub fn brute_force_pauli(h: &Operator, prune: f64) -> Vec<(String, Complex64)> {
    let qubits = h.dim().trailing_zeros() as usize;
    let scale = h.dim() as f64;
    all_labels(qubits)
        .into_iter()
        .filter_map(|label| {
            let coeff = hs_inner(&string_matrix(&label), h) / scale;
            (coeff.norm() > prune).then_some((label, coeff))
        })
        .collect()
}

/// Index of `|bits>` with the up state first in every factor.
pub fn index_of(bits: &str) -> usize {
    bits.chars().fold(0, |acc, b| (acc << 1) | usize::from(b == '0'))
}

/// The single-copy gate, entries copied from its closed form.
pub fn golden_single_copy(gamma: f64) -> Operator {
    let (o, z) = (one(), zero());
    let mi = c(0.0, -1.0);
    Operator::from_rows([
        [z, mi * Complex64::from_polar(1.0, -gamma), z, z],
        [mi * Complex64::from_polar(1.0, gamma), z, z, z],
        [z, z, o, z],
        [z, z, z, o],
    ])
}

/// Classical controlled-NOT permutation in the order |11>, |10>, |01>, |00>.
pub fn cnot_permutation() -> Operator {
    let (o, z) = (one(), zero());
    Operator::from_rows([[z, o, z, z], [o, z, z, z], [z, z, o, z], [z, z, z, o]])
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Operator {
    let mut h = Operator::zeros(dim);
    for r in 0..dim {
        h.set(r, r, c(rng.gen_range(-2.0..2.0), 0.0));
        for col in r + 1..dim {
            let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            h.set(r, col, v);
            h.set(col, r, v.conj());
        }
    }
    h
}
