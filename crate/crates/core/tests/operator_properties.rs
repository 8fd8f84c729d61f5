mod common;

use common::{all_labels, c, expm_series, hs_inner, random_hermitian, string_matrix};
use proptest::prelude::*;
use qcopy::operator::{hermitian_eig, propagator};
use qcopy::pauli::{decompose, recompose};
use qcopy::{frobenius_distance, Operator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hermitian_strategy(max_qubits: u32) -> impl Strategy<Value = Operator> {
    (0..=max_qubits, any::<u64>()).prop_map(|(q, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_hermitian(&mut rng, 1usize << q)
    })
}

/// Entries with small integer real and imaginary parts, so every product is exact.
fn gaussian_integer_strategy(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-3i32..=3, -3i32..=3), dim * dim).prop_map(move |v| {
        let entries = v.into_iter().map(|(re, im)| c(re as f64, im as f64)).collect();
        Operator::from_entries(dim, entries).unwrap()
    })
}

fn identity_residual(v: &Operator) -> f64 {
    frobenius_distance(&(&v.adjoint() * v), &Operator::identity(v.dim())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eig_reconstructs(h in hermitian_strategy(4)) {
        let eig = hermitian_eig(&h, 1e-12).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(frobenius_distance(&eig.reconstruct(), &h).unwrap() <= 1e-10 * scale);
        prop_assert!(identity_residual(&eig.vectors) <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn propagator_is_unitary_and_matches_series(h in hermitian_strategy(3), dt in 0.05f64..2.0) {
        let u = propagator(&h, dt).unwrap();
        prop_assert!(u.unitarity_residual() <= 1e-11);
        prop_assert!(frobenius_distance(&u, &expm_series(&h, dt)).unwrap() <= 1e-10);
    }

    #[test]
    fn propagator_semigroup(h in hermitian_strategy(4), t1 in 0.0f64..1.5, t2 in 0.0f64..1.5) {
        let whole = propagator(&h, t1 + t2).unwrap();
        let split = &propagator(&h, t1).unwrap() * &propagator(&h, t2).unwrap();
        prop_assert!(frobenius_distance(&whole, &split).unwrap() <= 1e-10);
    }

    #[test]
    fn tensor_associative_exactly_on_integer_entries(
        a in gaussian_integer_strategy(2),
        b in gaussian_integer_strategy(2),
        d in gaussian_integer_strategy(4),
    ) {
        prop_assert_eq!(a.tensor(&b).tensor(&d), a.tensor(&b.tensor(&d)));
    }

    #[test]
    fn tensor_associative_to_rounding(a in hermitian_strategy(1), b in hermitian_strategy(1), d in hermitian_strategy(2)) {
        let left = a.tensor(&b).tensor(&d);
        let right = a.tensor(&b.tensor(&d));
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 4.0 * f64::EPSILON * left.frobenius_norm());
    }

    #[test]
    fn adjoint_is_involution(h in hermitian_strategy(3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let skew = &h + &random_hermitian(&mut rng, h.dim()).scale(c(0.0, 1.0));
        prop_assert_eq!(skew.adjoint().adjoint(), skew);
    }

    #[test]
    fn pauli_round_trip(h in hermitian_strategy(4).prop_filter("at least one qubit", |h| h.dim() >= 2)) {
        let qubits = h.dim().trailing_zeros() as usize;
        let terms = decompose(&h).unwrap();
        prop_assert!(frobenius_distance(&recompose(&terms, qubits), &h).unwrap() <= 1e-11);
        prop_assert!(terms.iter().all(|t| t.coefficient.im.abs() <= 1e-13));
    }
}

#[test]
fn eig_reconstructs_at_largest_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(512);
    let h = random_hermitian(&mut rng, 512);
    let eig = hermitian_eig(&h, 1e-12).unwrap();
    let scale = h.frobenius_norm().max(1.0);
    assert!(frobenius_distance(&eig.reconstruct(), &h).unwrap() <= 1e-10 * scale);
    assert!(identity_residual(&eig.vectors) <= 1e-10);
}

#[test]
fn eig_handles_degenerate_spectrum() {
    // Projector with a 3-fold degenerate eigenvalue, rotated by a random unitary.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v = propagator(&random_hermitian(&mut rng, 6), 1.0).unwrap();
    let d = Operator::diagonal(&[
        c(1.0, 0.0),
        c(1.0, 0.0),
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(-2.0, 0.0),
    ]);
    let h = &(&v * &d) * &v.adjoint();
    let eig = hermitian_eig(&h, 1e-12).unwrap();
    let want = [-2.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    for (got, w) in eig.values.iter().zip(want) {
        assert!((got - w).abs() < 1e-12, "{got} vs {w}");
    }
    assert!(frobenius_distance(&eig.reconstruct(), &h).unwrap() < 1e-12);
}

#[test]
fn pauli_strings_are_orthogonal() {
    for qubits in 1..=3 {
        let labels = all_labels(qubits);
        let mats: Vec<Operator> = labels.iter().map(|l| string_matrix(l)).collect();
        for (i, p) in mats.iter().enumerate() {
            for (j, q) in mats.iter().enumerate() {
                let ip = hs_inner(p, q);
                let want = if i == j { (1 << qubits) as f64 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() == 0.0, "{} {}", labels[i], labels[j]);
            }
        }
    }
}

#[test]
fn materialized_letters_match_oracle_matrices() {
    use qcopy::pauli::{materialize, PauliTerm};
    for label in all_labels(2) {
        assert_eq!(materialize(&PauliTerm::real(1.0, &label)), string_matrix(&label));
    }
}
