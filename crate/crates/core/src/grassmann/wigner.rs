//! Wigner `D`-matrices of `GL(2, ℂ)` as polynomials in the entries of `Z`.

use crate::combinatorics::{binomial, factorial};
use crate::poly::{Exponents, PolyC4};
use crate::{Error, Mat2, Result, C64};

/// Monomials of `D^j_{qa,qb}` as (exponents of `z11, z12, z21, z22`, coefficient).
///
/// `D^j_{qa,qb}(Z) = sqrt[(j+qa)!(j−qa)!/((j+qb)!(j−qb)!)]
///   Σ_k C(j+qb, k) C(j−qb, k−qa−qb) z11^k z12^{j+qa−k} z21^{j+qb−k} z22^{k−qa−qb}`.
pub(crate) fn d_terms(two_j: u32, two_qa: i32, two_qb: i32) -> Result<Vec<(Exponents, f64)>> {
    let tj = two_j as i32;
    for two_q in [two_qa, two_qb] {
        if (two_q - tj).rem_euclid(2) != 0 {
            return Err(Error::ParityMismatch { two_j, two_q });
        }
        if two_q.abs() > tj {
            return Err(Error::IndexOutOfRange(format!(
                "|q| = {}/2 exceeds j = {}/2",
                two_q.abs(),
                two_j
            )));
        }
    }
    let jpa = ((tj + two_qa) / 2) as i64;
    let jma = ((tj - two_qa) / 2) as i64;
    let jpb = ((tj + two_qb) / 2) as i64;
    let jmb = ((tj - two_qb) / 2) as i64;
    let qsum = ((two_qa + two_qb) / 2) as i64;
    let norm = (factorial(jpa as u32) as f64 * factorial(jma as u32) as f64
        / (factorial(jpb as u32) as f64 * factorial(jmb as u32) as f64))
        .sqrt();
    let mut out = Vec::new();
    for k in qsum.max(0)..=jpa.min(jpb) {
        let c = binomial(jpb, k) * binomial(jmb, k - qsum);
        if c == 0 {
            continue;
        }
        let e = [k as u16, (jpa - k) as u16, (jpb - k) as u16, (k - qsum) as u16];
        out.push((e, norm * c as f64));
    }
    Ok(out)
}

/// `D^j_{qa,qb}` as a polynomial of degree `2j`.
pub fn wigner_d_poly(two_j: u32, two_qa: i32, two_qb: i32) -> Result<PolyC4> {
    let terms = d_terms(two_j, two_qa, two_qb)?;
    Ok(PolyC4::from_terms(
        terms.into_iter().map(|(e, c)| (e, C64::new(c, 0.0))),
    ))
}

/// `D^j_{qa,qb}(Z)` evaluated at an arbitrary complex matrix.
pub fn wigner_d(two_j: u32, two_qa: i32, two_qb: i32, z: &Mat2) -> Result<C64> {
    let terms = d_terms(two_j, two_qa, two_qb)?;
    let x = [z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]];
    Ok(terms
        .iter()
        .map(|(e, c)| {
            let mut v = C64::new(*c, 0.0);
            for (xi, &ei) in x.iter().zip(e) {
                v *= xi.powu(ei as u32);
            }
            v
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::layer_rotation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_mat(rng: &mut impl Rng) -> Mat2 {
        Mat2::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn qs(two_j: u32) -> impl Iterator<Item = i32> {
        (0..=two_j).map(move |k| two_j as i32 - 2 * k as i32)
    }

    #[test]
    fn spin_half_is_the_matrix_itself() {
        let z = Mat2::new(c(0.1, 0.2), c(0.3, -0.4), c(-0.5, 0.6), c(0.7, 0.8));
        assert_eq!(wigner_d(1, 1, 1, &z).unwrap(), z[(0, 0)]);
        assert_eq!(wigner_d(1, 1, -1, &z).unwrap(), z[(0, 1)]);
        assert_eq!(wigner_d(1, -1, 1, &z).unwrap(), z[(1, 0)]);
        assert_eq!(wigner_d(1, -1, -1, &z).unwrap(), z[(1, 1)]);
    }

    #[test]
    fn identity_and_diagonal() {
        let xi = (c(0.4, -0.3), c(1.2, 0.5));
        let diag = Mat2::new(xi.0, C64::default(), C64::default(), xi.1);
        for two_j in 0..=6u32 {
            for qa in qs(two_j) {
                for qb in qs(two_j) {
                    let d = wigner_d(two_j, qa, qb, &Mat2::identity()).unwrap();
                    let expect = if qa == qb { 1.0 } else { 0.0 };
                    assert!((d - expect).norm() < 1e-14);
                    let d = wigner_d(two_j, qa, qb, &diag).unwrap();
                    let expect = if qa == qb {
                        xi.0.powi((two_j as i32 + qa) / 2) * xi.1.powi((two_j as i32 - qa) / 2)
                    } else {
                        C64::default()
                    };
                    assert!((d - expect).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn top_entry_is_power_of_z11() {
        // z^0 = 0.3, z^3 = 0.2: z11 = 0.5, D^1_{1,1} = z11^2
        let z = Mat2::new(c(0.5, 0.0), c(0.7, 0.1), c(-0.2, 0.0), c(0.1, 0.0));
        assert!((wigner_d(2, 2, 2, &z).unwrap() - 0.25).norm() < 1e-15);
    }

    #[test]
    fn representation_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (a, b) = (random_mat(&mut rng), random_mat(&mut rng));
            let ab = a * b;
            for two_j in 0..=5u32 {
                for qa in qs(two_j) {
                    for qb in qs(two_j) {
                        let lhs = wigner_d(two_j, qa, qb, &ab).unwrap();
                        let rhs: C64 = qs(two_j)
                            .map(|q| wigner_d(two_j, qa, q, &a).unwrap() * wigner_d(two_j, q, qb, &b).unwrap())
                            .sum();
                        assert!((lhs - rhs).norm() < 1e-11 * (1.0 + lhs.norm()));
                    }
                }
            }
        }
    }

    #[test]
    fn unitary_on_rotations() {
        let u = layer_rotation(1.1, 0.4);
        for two_j in 1..=6u32 {
            let n = two_j as usize + 1;
            let d: Vec<Vec<C64>> = qs(two_j)
                .map(|qa| qs(two_j).map(|qb| wigner_d(two_j, qa, qb, &u).unwrap()).collect())
                .collect();
            for r in 0..n {
                for s in 0..n {
                    let dot: C64 = (0..n).map(|k| d[r][k] * d[s][k].conj()).sum();
                    let expect = if r == s { 1.0 } else { 0.0 };
                    assert!((dot - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn polynomial_matches_evaluation() {
        let z = Mat2::new(c(0.3, 0.9), c(-0.4, 0.2), c(0.6, -0.1), c(-0.8, 0.5));
        for two_j in 0..=4u32 {
            for qa in qs(two_j) {
                for qb in qs(two_j) {
                    let p = wigner_d_poly(two_j, qa, qb).unwrap();
                    assert_eq!(p.homogeneous_degree(), if p.is_zero() { None } else { Some(two_j) });
                    assert!((p.eval(&z) - wigner_d(two_j, qa, qb, &z).unwrap()).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn bad_labels() {
        assert!(matches!(d_terms(2, 1, 0), Err(Error::ParityMismatch { .. })));
        assert!(matches!(d_terms(1, 3, 1), Err(Error::IndexOutOfRange(_))));
    }
}
