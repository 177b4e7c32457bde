mod common;

use common::{det, dim_formula, gaussian_matrix, matrix_from_parts};
use grasscs_core::grassmann::{
    basis_enumerate, basis_polynomial, coherent_coeffs, grass_husimi, grass_kernel, grass_overlap, BasisTable,
    GrassPoint, IrrepLabel, StateVector,
};
use grasscs_core::integration::{derive_seed, mc_integrate, stream_rng};
use grasscs_core::{Execution, Mat2, C64};
use proptest::prelude::*;

fn label(l: u32) -> IrrepLabel {
    IrrepLabel::new(l).unwrap()
}

#[test]
fn basis_count_matches_dimension_formula() {
    for l in 1..=8 {
        assert_eq!(basis_enumerate(label(l)).len() as u64, dim_formula(l as u64));
    }
    assert_eq!(basis_enumerate(label(1)).len(), 6);
}

#[test]
fn kernel_closure_random_pairs() {
    let mut rng = stream_rng(101, 0);
    for l in 1..=4 {
        let t = BasisTable::get(label(l)).unwrap();
        for _ in 0..100 {
            let z = gaussian_matrix(&mut rng);
            let w = gaussian_matrix(&mut rng);
            let fz = t.eval_raw(&z);
            let fw = t.eval_raw(&w);
            let sum: C64 = fz.iter().zip(&fw).map(|(a, b)| a * b.conj()).sum();
            let oracle = det(&(Mat2::identity() + z * w.adjoint())).powu(l);
            assert!((sum - oracle).norm() <= 1e-9 * oracle.norm(), "λ={l}: {sum} vs {oracle}");
            let k = grass_kernel(label(l), &z, &w.adjoint());
            assert!((k - oracle).norm() <= 1e-12 * oracle.norm());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_polynomials_are_homogeneous(
        l in 1u32..=4,
        pick in 0usize..1000,
        x in prop::collection::vec(-2.0f64..2.0, 8),
        tr in -2.0f64..2.0,
        ti in -2.0f64..2.0,
    ) {
        let idx = basis_enumerate(label(l));
        let idx = idx[pick % idx.len()];
        let p = basis_polynomial(label(l), idx).unwrap();
        let z = matrix_from_parts(&x);
        let t = C64::new(tr, ti);
        let lhs = p.eval(&(z * t));
        let rhs = p.eval(&z) * t.powu(idx.degree());
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn overlap_via_kernel_matches_coefficients(
        l in 1u32..=4,
        x in prop::collection::vec(-1.5f64..1.5, 8),
        y in prop::collection::vec(-1.5f64..1.5, 8),
    ) {
        let z = GrassPoint::new(matrix_from_parts(&x));
        let zp = GrassPoint::new(matrix_from_parts(&y));
        let a = coherent_coeffs(label(l), &z).unwrap();
        let b = coherent_coeffs(label(l), &zp).unwrap();
        let via_coeffs = b.inner(&a).unwrap();
        let via_kernel = grass_overlap(label(l), &z, &zp);
        prop_assert!((via_coeffs - via_kernel).norm() <= 1e-10);
    }
}

#[test]
fn husimi_is_normalized_under_monte_carlo() {
    let mut rng = stream_rng(102, 0);
    for l in 1..=2 {
        for k in 0..10 {
            let psi = StateVector::random(label(l), &mut rng);
            let est = mc_integrate(
                label(l),
                |p| grass_husimi(&psi, p).unwrap(),
                1_000_000,
                derive_seed(102, l as u64, k),
                Execution::Parallel,
            )
            .unwrap();
            assert!(
                (est.value - 1.0).abs() <= 3.0 * est.std_error,
                "λ={l} state {k}: {} ± {}",
                est.value,
                est.std_error
            );
        }
    }
}

#[test]
fn coherent_state_is_unit_vector_with_kernel_norm() {
    let mut rng = stream_rng(103, 0);
    for l in 1..=4 {
        for _ in 0..10 {
            let z = gaussian_matrix(&mut rng).scale(0.7);
            let cs = coherent_coeffs(label(l), &GrassPoint::new(z)).unwrap();
            assert!((cs.norm_sqr() - 1.0).abs() < 1e-12);
            let t = BasisTable::get(label(l)).unwrap();
            let raw = t.eval_raw(&z);
            let k = grass_kernel(label(l), &z, &z.adjoint()).re;
            for (c, r) in cs.coeffs().iter().zip(&raw) {
                assert!((c - r.conj() / k.sqrt()).norm() < 1e-12);
            }
        }
    }
}
