use std::f64::consts::TAU;

use grasscs_core::integration::stream_rng;
use grasscs_core::su2::{
    su2_husimi_norm, su2_kernel, su2_m_max, su2_monomial, su2_second_moment, su2_w_min, su2_wehrl, BlochPoint,
    SpinLabel, SpinState, DEFAULT_SPHERE_NODES,
};
use grasscs_core::C64;
use rand::Rng;

fn spin(two_s: u32) -> SpinLabel {
    SpinLabel::new(two_s).unwrap()
}

fn random_point(rng: &mut impl Rng) -> BlochPoint {
    BlochPoint::new(rng.random_range(-1.0f64..1.0).acos(), rng.random_range(0.0..TAU))
}

#[test]
fn kernel_is_sum_of_monomials() {
    let mut rng = stream_rng(401, 0);
    for _ in 0..200 {
        let sp = spin(rng.random_range(1..=8));
        let z = C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let w = C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let sum: C64 = (0..sp.dim())
            .map(|n| {
                let k = sp.two_k(n);
                su2_monomial(sp, k, z).unwrap() * su2_monomial(sp, k, w).unwrap().conj()
            })
            .sum();
        let k = su2_kernel(sp, z, w.conj());
        assert!((k - sum).norm() <= 1e-10 * k.norm(), "{k} vs {sum}");
    }
}

#[test]
fn husimi_integrates_to_one() {
    let mut rng = stream_rng(402, 0);
    for _ in 0..20 {
        let psi = SpinState::random(spin(rng.random_range(1..=8)), &mut rng);
        let n = su2_husimi_norm(&psi, DEFAULT_SPHERE_NODES).unwrap();
        assert!((n - 1.0).abs() <= 1e-8, "{n}");
    }
}

#[test]
fn coherent_states_saturate_both_bounds() {
    let mut rng = stream_rng(403, 0);
    for _ in 0..20 {
        let sp = spin(rng.random_range(1..=8));
        let psi = SpinState::coherent(sp, &random_point(&mut rng));
        let w = su2_wehrl(&psi, DEFAULT_SPHERE_NODES).unwrap();
        let m = su2_second_moment(&psi, DEFAULT_SPHERE_NODES).unwrap();
        assert!((w - su2_w_min(sp)).abs() <= 1e-8, "2s={}: W={w}", sp.two_s());
        assert!((m - su2_m_max(sp)).abs() <= 1e-8, "2s={}: M={m}", sp.two_s());
    }
}

#[test]
fn non_coherent_states_exceed_minimum() {
    let mut rng = stream_rng(404, 0);
    for two_s in 2..=8 {
        let sp = spin(two_s);
        for _ in 0..10 {
            let psi = SpinState::random(sp, &mut rng);
            let w = su2_wehrl(&psi, DEFAULT_SPHERE_NODES).unwrap();
            let m = su2_second_moment(&psi, DEFAULT_SPHERE_NODES).unwrap();
            assert!(w > su2_w_min(sp) + 1e-8, "2s={two_s}: {w}");
            assert!(m < su2_m_max(sp) - 1e-8, "2s={two_s}: {m}");
        }
        for n in 1..two_s as usize {
            let psi = SpinState::basis(sp, sp.two_k(n)).unwrap();
            assert!(su2_wehrl(&psi, DEFAULT_SPHERE_NODES).unwrap() > su2_w_min(sp) + 1e-8);
        }
    }
}
