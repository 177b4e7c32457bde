#![allow(dead_code)]

use grasscs_core::{Mat2, C64};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rng: &mut impl Rng) -> Mat2 {
    Mat2::new(gaussian_c64(rng), gaussian_c64(rng), gaussian_c64(rng), gaussian_c64(rng))
}

/// Haar-random element of U(2).
pub fn random_unitary(rng: &mut impl Rng) -> Mat2 {
    let a = gaussian_matrix(rng);
    let qr = a.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = Mat2::from_diagonal(&nalgebra::Vector2::new(
        r[(0, 0)] / r[(0, 0)].norm(),
        r[(1, 1)] / r[(1, 1)].norm(),
    ));
    q * phases
}

pub fn det(m: &Mat2) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `(λ+1)(λ+2)²(λ+3)/12`.
pub fn dim_formula(l: u64) -> u64 {
    (l + 1) * (l + 2) * (l + 2) * (l + 3) / 12
}

pub fn matrix_from_parts(x: &[f64]) -> Mat2 {
    Mat2::new(
        C64::new(x[0], x[1]),
        C64::new(x[2], x[3]),
        C64::new(x[4], x[5]),
        C64::new(x[6], x[7]),
    )
}
