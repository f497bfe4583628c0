//! Observables and maps checked against an independent eigensolver.

use approx::assert_relative_eq;
use igq_core::classify::realify_unitary;
use igq_core::composite::{subsystem_observable, Position};
use igq_core::linalg::ComplexMatrix;
use igq_core::sampling::haar_unitary;
use igq_core::{MeasurementBasis, Observable};
use nalgebra::{DMatrix, Complex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

fn sorted_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = to_nalgebra(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn observable_spectrum_matches_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..6 {
        let basis = MeasurementBasis::from_unitary(&haar_unitary(n, &mut rng)).unwrap();
        let mut values: Vec<f64> = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
        let obs = Observable::new(basis, values.clone()).unwrap();
        values.sort_by(f64::total_cmp);
        for (a, b) in sorted_eigenvalues(&obs.matrix()).iter().zip(&values) {
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }
}

#[test]
fn subsystem_observable_multiplicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let basis = MeasurementBasis::from_unitary(&haar_unitary(2, &mut rng)).unwrap();
    let obs = Observable::new(basis, vec![1.0, -1.0]).unwrap();
    let embedded = subsystem_observable(&obs, 3, Position::First).unwrap();
    let eig = sorted_eigenvalues(&embedded.matrix());
    assert_eq!(eig.len(), 6);
    for (a, b) in eig.iter().zip([-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]) {
        assert_relative_eq!(*a, b, epsilon = 1e-10);
    }
}

#[test]
fn realified_unitary_singular_values_are_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for n in 1..5 {
        let m = realify_unitary(&haar_unitary(n, &mut rng)).unwrap();
        let d = DMatrix::from_row_slice(2 * n, 2 * n, m.matrix().as_slice());
        for s in d.singular_values().iter() {
            assert_relative_eq!(*s, 1.0, epsilon = 1e-12);
        }
    }
}
