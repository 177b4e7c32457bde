use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{Error, Mat2, Result, C64};

/// A point `Z` of `G₂`, i.e. a finite 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrassPoint {
    z: Mat2,
}

impl GrassPoint {
    pub fn new(z: Mat2) -> Self {
        GrassPoint { z }
    }

    pub fn zero() -> Self {
        GrassPoint { z: Mat2::zeros() }
    }

    pub fn identity() -> Self {
        GrassPoint {
            z: Mat2::identity(),
        }
    }

    /// From `[z11, z12, z21, z22]`.
    pub fn from_entries(e: [C64; 4]) -> Self {
        GrassPoint {
            z: Mat2::new(e[0], e[1], e[2], e[3]),
        }
    }

    /// From the four-vector `z^μ` with `Z = z^μ σ_μ`.
    pub fn from_four_vector(v: [C64; 4]) -> Self {
        let i = C64::i();
        GrassPoint::from_entries([v[0] + v[3], v[1] - i * v[2], v[1] + i * v[2], v[0] - v[3]])
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.z
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.z[(0, 0)], self.z[(0, 1)], self.z[(1, 0)], self.z[(1, 1)]]
    }

    /// `z^μ = tr(Z σ_μ)/2`.
    pub fn four_vector(&self) -> [C64; 4] {
        four_vector_of(&self.z)
    }

    pub fn det(&self) -> C64 {
        det2(&self.z)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

pub(crate) fn det2(m: &Mat2) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `z^μ = tr(M σ_μ)/2` for any 2×2 matrix.
pub fn four_vector_of(m: &Mat2) -> [C64; 4] {
    let i = C64::i();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    [(a + d) * 0.5, (b + c) * 0.5, (c - b) * (-i * 0.5), (a - d) * 0.5]
}

/// The eight angles of `Z = V_a diag(ξ₊, ξ₋) V_b†`, `ξ± = tan(ϑ±/2) e^{iβ±}`.
///
/// Polar angles are accepted on the closed interval `[0, π]` so that points
/// at infinity (`ϑ± = π`) can be described; such points have no matrix form
/// but are handled by every evaluator that works through [`ScaledPoint`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleParam {
    pub theta_a: f64,
    pub theta_b: f64,
    pub phi_a: f64,
    pub phi_b: f64,
    pub vartheta_plus: f64,
    pub vartheta_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

impl AngleParam {
    /// All angles zero, i.e. `Z = 0`.
    pub fn origin() -> Self {
        AngleParam::from_array([0.0; 8])
    }

    /// Order: `θ_a, θ_b, φ_a, φ_b, ϑ₊, ϑ₋, β₊, β₋`.
    pub fn from_array(a: [f64; 8]) -> Self {
        AngleParam {
            theta_a: a[0],
            theta_b: a[1],
            phi_a: a[2],
            phi_b: a[3],
            vartheta_plus: a[4],
            vartheta_minus: a[5],
            beta_plus: a[6],
            beta_minus: a[7],
        }
    }

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.theta_a,
            self.theta_b,
            self.phi_a,
            self.phi_b,
            self.vartheta_plus,
            self.vartheta_minus,
            self.beta_plus,
            self.beta_minus,
        ]
    }

    /// Range-checked constructor: polar angles in `[0, π]`, azimuths wrapped
    /// into `[0, 2π)`.
    pub fn new(a: [f64; 8]) -> Result<Self> {
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite angle".into()));
        }
        for (name, v) in [("theta_a", a[0]), ("theta_b", a[1]), ("vartheta_plus", a[4]), ("vartheta_minus", a[5])] {
            if !(0.0..=PI).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} = {v} outside [0, π]")));
            }
        }
        let mut p = AngleParam::from_array(a);
        p.phi_a = p.phi_a.rem_euclid(TAU);
        p.phi_b = p.phi_b.rem_euclid(TAU);
        p.beta_plus = p.beta_plus.rem_euclid(TAU);
        p.beta_minus = p.beta_minus.rem_euclid(TAU);
        Ok(p)
    }

    pub fn is_at_infinity(&self) -> bool {
        self.vartheta_plus >= PI || self.vartheta_minus >= PI
    }
}

/// Layer rotation `V = [[cos(θ/2), -sin(θ/2)e^{iφ}], [sin(θ/2)e^{-iφ}, cos(θ/2)]]`.
pub fn layer_rotation(theta: f64, phi: f64) -> Mat2 {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = C64::from_polar(1.0, phi);
    Mat2::new(C64::new(c, 0.0), -e * s, e.conj() * s, C64::new(c, 0.0))
}

pub fn angles_to_matrix(p: &AngleParam) -> Result<GrassPoint> {
    if p.is_at_infinity() {
        return Err(Error::PointAtInfinity(format!(
            "ϑ₊ = {}, ϑ₋ = {}",
            p.vartheta_plus, p.vartheta_minus
        )));
    }
    let xi_p = C64::from_polar((0.5 * p.vartheta_plus).tan(), p.beta_plus);
    let xi_m = C64::from_polar((0.5 * p.vartheta_minus).tan(), p.beta_minus);
    let va = layer_rotation(p.theta_a, p.phi_a);
    let vb = layer_rotation(p.theta_b, p.phi_b);
    let xi = Mat2::new(xi_p, C64::default(), C64::default(), xi_m);
    Ok(GrassPoint::new(va * xi * vb.adjoint()))
}

/// Inverse of [`angles_to_matrix`] by singular value decomposition.
///
/// Conventions: `ϑ₊ ≥ ϑ₋`; the diagonal phases of the singular vectors are
/// absorbed into `β±`; each `V_ℓ` has a real non-negative `(1,1)` entry.
/// For a zero singular value the corresponding `β` is set to zero.
pub fn matrix_to_angles(z: &GrassPoint) -> Result<AngleParam> {
    if !z.is_finite() {
        return Err(Error::PointAtInfinity("matrix has non-finite entries".into()));
    }
    let svd = z.matrix().svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let sv = svd.singular_values;
    let order = if sv[0] >= sv[1] { [0, 1] } else { [1, 0] };
    let sigma = [sv[order[0]], sv[order[1]]];
    let v = vt.adjoint();
    let u = Mat2::from_columns(&[u.column(order[0]).into_owned(), u.column(order[1]).into_owned()]);
    let v = Mat2::from_columns(&[v.column(order[0]).into_owned(), v.column(order[1]).into_owned()]);

    let (theta_a, phi_a, a1, g1) = split_unitary(&u);
    let (theta_b, phi_b, a2, g2) = split_unitary(&v);
    let beta = |s: f64, d: f64| if s == 0.0 { 0.0 } else { d.rem_euclid(TAU) };
    Ok(AngleParam {
        theta_a,
        theta_b,
        phi_a,
        phi_b,
        vartheta_plus: 2.0 * sigma[0].atan(),
        vartheta_minus: 2.0 * sigma[1].atan(),
        beta_plus: beta(sigma[0], a1 - a2),
        beta_minus: beta(sigma[1], g1 - g2),
    })
}

/// Writes a unitary `U = V(θ, φ) diag(e^{iα}, e^{iγ})`; returns `(θ, φ, α, γ)`.
fn split_unitary(u: &Mat2) -> (f64, f64, f64, f64) {
    let c = u[(0, 0)].norm().min(1.0);
    let s = u[(1, 0)].norm().min(1.0);
    let theta = 2.0 * s.atan2(c);
    let gamma = u[(1, 1)].arg();
    if c > 0.0 {
        let alpha = u[(0, 0)].arg();
        let phi = if s > 0.0 { alpha - u[(1, 0)].arg() } else { 0.0 };
        (theta, phi.rem_euclid(TAU), alpha, gamma)
    } else {
        // θ = π: only U21 and U12 are nonzero; pick α from U21 with φ = 0.
        let alpha = u[(1, 0)].arg();
        let gamma = (u[(0, 1)] * -1.0).arg();
        (theta, 0.0, alpha, gamma)
    }
}

/// A point of `G₂` in a chart that stays bounded up to and including
/// infinity.
///
/// With `D = det(σ₀ + Z†Z)` it stores `cc = D^{-1/2}`, `ẑ = cc·Z` and
/// `δ = cc·det Z`. Every Husimi value, overlap and operator symbol is a
/// polynomial in these quantities, so nothing overflows as `ϑ± → π`.
/// From angles: `cc = cos(ϑ₊/2) cos(ϑ₋/2)`, `δ = sin(ϑ₊/2) sin(ϑ₋/2) e^{i(β₊+β₋)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledPoint {
    pub zhat: Mat2,
    pub delta: C64,
    pub cc: f64,
}

impl ScaledPoint {
    /// The bounded chart from the eight angles. Angles outside their nominal
    /// ranges are accepted; the result describes the same point.
    pub fn from_angles(p: &AngleParam) -> Self {
        let (sp, cp) = (0.5 * p.vartheta_plus).sin_cos();
        let (sm, cm) = (0.5 * p.vartheta_minus).sin_cos();
        let va = layer_rotation(p.theta_a, p.phi_a);
        let vb = layer_rotation(p.theta_b, p.phi_b);
        let diag = Mat2::new(
            C64::from_polar(sp * cm, p.beta_plus),
            C64::default(),
            C64::default(),
            C64::from_polar(cp * sm, p.beta_minus),
        );
        ScaledPoint {
            zhat: va * diag * vb.adjoint(),
            delta: C64::from_polar(sp * sm, p.beta_plus + p.beta_minus),
            cc: cp * cm,
        }
    }

    pub fn from_matrix(z: &GrassPoint) -> Self {
        let m = z.matrix();
        let det = z.det();
        let tr: f64 = m.iter().map(|c| c.norm_sqr()).sum();
        let d = 1.0 + tr + det.norm_sqr();
        let cc = d.sqrt().recip();
        ScaledPoint {
            zhat: m.map(|c| c * cc),
            delta: det * cc,
            cc,
        }
    }

    /// `1/det(σ₀ + Z†Z)`.
    pub fn rho(&self) -> f64 {
        self.cc * self.cc
    }

    /// `|det Z|² / det(σ₀ + Z†Z)`.
    pub fn det_ratio(&self) -> f64 {
        self.delta.norm_sqr()
    }

    /// Recovers `Z`; fails at infinity.
    pub fn to_matrix(&self) -> Result<GrassPoint> {
        if self.cc <= 0.0 {
            return Err(Error::PointAtInfinity("cc = 0".into()));
        }
        Ok(GrassPoint::new(self.zhat.map(|c| c / self.cc)))
    }
}

impl From<&AngleParam> for ScaledPoint {
    fn from(p: &AngleParam) -> Self {
        ScaledPoint::from_angles(p)
    }
}

impl From<&GrassPoint> for ScaledPoint {
    fn from(z: &GrassPoint) -> Self {
        ScaledPoint::from_matrix(z)
    }
}

impl From<&ScaledPoint> for ScaledPoint {
    fn from(p: &ScaledPoint) -> Self {
        *p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &Mat2, b: &Mat2) -> f64 {
        (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn random_angles(rng: &mut impl Rng, cap: f64) -> AngleParam {
        AngleParam::from_array([
            rng.random_range(0.0..PI),
            rng.random_range(0.0..PI),
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..cap),
            rng.random_range(0.0..cap),
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..TAU),
        ])
    }

    #[test]
    fn all_zero_angles_give_zero() {
        let z = angles_to_matrix(&AngleParam::origin()).unwrap();
        assert_eq!(*z.matrix(), Mat2::zeros());
    }

    #[test]
    fn quarter_turn_gives_projector() {
        let mut a = [0.0; 8];
        a[4] = PI / 2.0;
        let z = angles_to_matrix(&AngleParam::from_array(a)).unwrap();
        let expect = Mat2::new(C64::new(1.0, 0.0), C64::default(), C64::default(), C64::default());
        assert!(max_diff(z.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn four_vector_round_trip() {
        let v = [C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.7, -0.4), C64::new(0.2, 0.0)];
        let z = GrassPoint::from_four_vector(v);
        let w = z.four_vector();
        for k in 0..4 {
            assert!((v[k] - w[k]).norm() < 1e-15);
        }
        // det Z is the Minkowski square of z^μ
        let mink = v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3];
        assert!((z.det() - mink).norm() < 1e-15);
    }

    #[test]
    fn svd_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = random_angles(&mut rng, PI - 1e-3);
            let z = angles_to_matrix(&p).unwrap();
            let q = matrix_to_angles(&z).unwrap();
            assert!(q.vartheta_plus >= q.vartheta_minus);
            let z2 = angles_to_matrix(&q).unwrap();
            let scale = 1.0 + z.matrix().norm();
            assert!(max_diff(z.matrix(), z2.matrix()) <= 1e-10 * scale, "{p:?} -> {q:?}");
        }
    }

    #[test]
    fn degenerate_matrices_round_trip() {
        let c = |a: f64, b: f64| C64::new(a, b);
        let cases = [
            Mat2::zeros(),
            Mat2::identity(),
            Mat2::new(c(0.0, 0.0), c(2.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)),
            Mat2::new(c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.3), c(0.0, 0.0)),
            Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
            Mat2::new(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 2.0)),
        ];
        for m in cases {
            let z = GrassPoint::new(m);
            let q = matrix_to_angles(&z).unwrap();
            let back = angles_to_matrix(&q).unwrap();
            assert!(max_diff(&m, back.matrix()) < 1e-12, "{m} -> {q:?} -> {}", back.matrix());
        }
    }

    #[test]
    fn infinite_inputs_are_reported() {
        let mut a = [0.0; 8];
        a[5] = PI;
        assert!(matches!(
            angles_to_matrix(&AngleParam::from_array(a)),
            Err(Error::PointAtInfinity(_))
        ));
        let z = GrassPoint::from_entries([C64::new(f64::INFINITY, 0.0), C64::default(), C64::default(), C64::default()]);
        assert!(matrix_to_angles(&z).is_err());
    }

    #[test]
    fn scaled_chart_agrees_between_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = random_angles(&mut rng, PI - 1e-2);
            let a = ScaledPoint::from_angles(&p);
            let b = ScaledPoint::from_matrix(&angles_to_matrix(&p).unwrap());
            assert!((a.cc - b.cc).abs() < 1e-12);
            assert!((a.delta - b.delta).norm() < 1e-10);
            assert!(max_diff(&a.zhat, &b.zhat) < 1e-12);
            let back = a.to_matrix().unwrap();
            let z = angles_to_matrix(&p).unwrap();
            assert!(max_diff(back.matrix(), z.matrix()) < 1e-9 * (1.0 + z.matrix().norm()));
        }
    }

    #[test]
    fn range_checks() {
        assert!(AngleParam::new([0.0, 0.0, 7.0, -1.0, PI, 0.0, 0.0, 0.0]).is_ok());
        let p = AngleParam::new([0.0, 0.0, 7.0, -1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((0.0..TAU).contains(&p.phi_a) && (0.0..TAU).contains(&p.phi_b));
        assert!(AngleParam::new([4.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert!(AngleParam::new([f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }
}
