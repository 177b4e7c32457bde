//! Spin-`s` Bloch coherent states on `S² = U(2)/U(1)²`.
//!
//! Basis monomials `φ_k(z) = C(2s, s+k)^{1/2} z^{s+k}`, `k = −s..s`, span
//! the carrier space; `z = tan(θ/2) e^{iφ}` is the stereographic coordinate
//! with `z = 0` the lowest-weight state `k = −s`. Everything is evaluated
//! through the half angles `(cos(θ/2), sin(θ/2) e^{iφ})`, so `θ = π`
//! (`z = ∞`) needs no special chart.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::entropy::entropy_density;
use crate::grassmann::NORM_TOL;
use crate::integration::sphere_quadrature;
use crate::quadrature::GaussLegendre;
use crate::{Error, Execution, Result, C64};

/// Largest `2s` handled (binomials stay exact in 128 bits).
pub const MAX_TWO_S: u32 = 120;

pub const DEFAULT_SPHERE_NODES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinLabel {
    two_s: u32,
}

impl SpinLabel {
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s > MAX_TWO_S {
            return Err(Error::CapExceeded {
                lambda: two_s,
                cap: MAX_TWO_S,
                what: "twice the spin",
            });
        }
        Ok(SpinLabel { two_s })
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn s(self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    /// `2k` for position `n` in `0..=2s`.
    pub fn two_k(self, n: usize) -> i32 {
        2 * n as i32 - self.two_s as i32
    }

    fn position(self, two_k: i32) -> Result<usize> {
        let ts = self.two_s as i32;
        if two_k.abs() > ts || (two_k + ts) % 2 != 0 {
            return Err(Error::IndexOutOfRange(format!(
                "k = {two_k}/2 is not a weight of spin {ts}/2"
            )));
        }
        Ok(((two_k + ts) / 2) as usize)
    }

    fn binom_sqrt(self, n: usize) -> f64 {
        (binomial(self.two_s as i64, n as i64) as f64).sqrt()
    }
}

/// A point of the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

impl BlochPoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        BlochPoint { theta, phi }
    }

    /// From the stereographic coordinate `z = tan(θ/2) e^{iφ}`.
    pub fn from_z(z: C64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::PointAtInfinity("non-finite stereographic coordinate".into()));
        }
        Ok(BlochPoint {
            theta: 2.0 * z.norm().atan(),
            phi: if z.norm() > 0.0 { z.arg().rem_euclid(TAU) } else { 0.0 },
        })
    }

    pub fn z(&self) -> Result<C64> {
        if self.theta >= PI {
            return Err(Error::PointAtInfinity("θ = π".into()));
        }
        Ok(C64::from_polar((0.5 * self.theta).tan(), self.phi))
    }

    /// `(cos(θ/2), sin(θ/2) e^{iφ})`.
    fn half(&self) -> (f64, C64) {
        let (s, c) = (0.5 * self.theta).sin_cos();
        (c, C64::from_polar(s, self.phi))
    }

    /// Unit vector with `θ = 0` at `+ê₃`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        [st * self.phi.cos(), st * self.phi.sin(), ct]
    }

    pub fn from_unit_vector(n: [f64; 3]) -> Self {
        BlochPoint {
            theta: n[2].clamp(-1.0, 1.0).acos(),
            phi: n[1].atan2(n[0]).rem_euclid(TAU),
        }
    }
}

/// Coefficients `c_k`, `k = −s..s`, of a spin-`s` state.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    spin: SpinLabel,
    coeffs: Vec<C64>,
}

impl SpinState {
    pub fn new(spin: SpinLabel, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: coeffs.len(),
            });
        }
        Ok(SpinState { spin, coeffs })
    }

    pub fn basis(spin: SpinLabel, two_k: i32) -> Result<Self> {
        let n = spin.position(two_k)?;
        let mut coeffs = vec![C64::default(); spin.dim()];
        coeffs[n] = C64::new(1.0, 0.0);
        Ok(SpinState { spin, coeffs })
    }

    /// `|z⟩ = (1+|z|²)^{-s} Σ φ_k(z̄) |k⟩`.
    pub fn coherent(spin: SpinLabel, p: &BlochPoint) -> Self {
        let (c, w) = p.half();
        let coeffs = (0..spin.dim())
            .map(|n| (w.conj().powu(n as u32) * c.powi((spin.two_s as usize - n) as i32)) * spin.binom_sqrt(n))
            .collect();
        SpinState { spin, coeffs }
    }

    pub fn random(spin: SpinLabel, rng: &mut impl Rng) -> Self {
        let coeffs = (0..spin.dim())
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = SpinState { spin, coeffs };
        s.normalize().expect("gaussian vector is nonzero");
        s
    }

    pub fn spin(&self) -> SpinLabel {
        self.spin
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        let s = n.sqrt().recip();
        self.coeffs.iter_mut().for_each(|c| *c *= s);
        Ok(())
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(())
    }

    /// `(⟨J₁⟩, ⟨J₂⟩, ⟨J₃⟩)` from the matrix elements
    /// `J₃|k⟩ = k|k⟩`, `J₊|k⟩ = √((s−k)(s+k+1)) |k+1⟩`.
    pub fn spin_expectation(&self) -> [f64; 3] {
        let s = self.spin.s();
        let mut j3 = 0.0;
        let mut jp = C64::default();
        for (n, c) in self.coeffs.iter().enumerate() {
            let k = self.spin.two_k(n) as f64 / 2.0;
            j3 += k * c.norm_sqr();
            if n + 1 < self.coeffs.len() {
                jp += self.coeffs[n + 1].conj() * c * ((s - k) * (s + k + 1.0)).sqrt();
            }
        }
        [jp.re, jp.im, j3]
    }
}

/// `φ_k(z) = C(2s, s+k)^{1/2} z^{s+k}`.
pub fn su2_monomial(spin: SpinLabel, two_k: i32, z: C64) -> Result<C64> {
    let n = spin.position(two_k)?;
    Ok(z.powu(n as u32) * spin.binom_sqrt(n))
}

/// `K_{2s}(z, w̄) = (1 + z w̄)^{2s}`.
pub fn su2_kernel(spin: SpinLabel, z: C64, wbar: C64) -> C64 {
    (C64::new(1.0, 0.0) + z * wbar).powu(spin.two_s)
}

/// `⟨z′|z⟩ = (cos(θ′/2)cos(θ/2) + sin(θ′/2)sin(θ/2) e^{i(φ′−φ)})^{2s}`.
pub fn su2_overlap(spin: SpinLabel, z: &BlochPoint, zp: &BlochPoint) -> C64 {
    let (c, w) = z.half();
    let (cp, wp) = zp.half();
    (C64::new(c * cp, 0.0) + wp * w.conj()).powu(spin.two_s)
}

fn amplitude(psi: &SpinState, p: &BlochPoint) -> C64 {
    let (c, w) = p.half();
    let two_s = psi.spin.two_s as usize;
    psi.coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| a * w.powu(n as u32) * c.powi((two_s - n) as i32) * psi.spin.binom_sqrt(n))
        .sum()
}

/// `Q_ψ(z) = |Ψ(z)|² / K_{2s}(z, z̄) = |⟨z|ψ⟩|²`.
pub fn su2_husimi(psi: &SpinState, p: &BlochPoint) -> Result<f64> {
    psi.ensure_normalized()?;
    Ok(amplitude(psi, p).norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Symbols {
    pub j3: f64,
    pub j3_sq: f64,
}

/// `⟨J₃⟩ = −s cos θ`, `⟨J₃²⟩ = s² cos²θ + (s/2) sin²θ`.
pub fn su2_symbols(spin: SpinLabel, p: &BlochPoint) -> Su2Symbols {
    let s = spin.s();
    let (st, ct) = p.theta.sin_cos();
    Su2Symbols {
        j3: -s * ct,
        j3_sq: s * s * ct * ct + 0.5 * s * st * st,
    }
}

/// Symbols as `K⁻¹ 𝒥 K` with `𝒥₃ = z∂_z − s`, which multiplies `φ_k` by `k`.
pub fn su2_symbols_differential(spin: SpinLabel, p: &BlochPoint) -> Su2Symbols {
    let (c, w) = p.half();
    let two_s = spin.two_s as usize;
    let mut j3 = 0.0;
    let mut j3_sq = 0.0;
    for n in 0..=two_s {
        let k = spin.two_k(n) as f64 / 2.0;
        // |φ_k(z)|² / K(z, z̄) in half angles
        let w2 = binomial(two_s as i64, n as i64) as f64 * w.norm_sqr().powi(n as i32) * (c * c).powi((two_s - n) as i32);
        j3 += k * w2;
        j3_sq += k * k * w2;
    }
    Su2Symbols { j3, j3_sq }
}

/// Orthonormal frame whose third axis points along `⟨J⃗⟩` mapped to the
/// sphere (`θ = 0` at `z = 0`), or the standard frame when `⟨J⃗⟩` vanishes.
fn aligned_frame(psi: &SpinState) -> [[f64; 3]; 3] {
    let [j1, j2, j3] = psi.spin_expectation();
    let u = [j1, j2, -j3];
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    if n < 1e-12 {
        return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    }
    let u = [u[0] / n, u[1] / n, u[2] / n];
    let a = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = a[0] * u[0] + a[1] * u[1] + a[2] * u[2];
    let e1 = [a[0] - dot * u[0], a[1] - dot * u[1], a[2] - dot * u[2]];
    let m = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    let e1 = [e1[0] / m, e1[1] / m, e1[2] / m];
    let e2 = [
        u[1] * e1[2] - u[2] * e1[1],
        u[2] * e1[0] - u[0] * e1[2],
        u[0] * e1[1] - u[1] * e1[0],
    ];
    [e1, e2, u]
}

/// `(2s+1)/(4π) ∫ g(Q_ψ) dΩ` with `n_nodes` Gauss–Legendre nodes in `θ` and
/// `n_nodes` equispaced nodes in `φ`, in a frame whose pole is aligned with
/// the state's spin direction.
fn sphere_functional(psi: &SpinState, n_nodes: usize, g: impl Fn(f64) -> f64 + Sync + Send) -> Result<f64> {
    psi.ensure_normalized()?;
    if n_nodes < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 nodes, got {n_nodes}")));
    }
    let [e1, e2, u] = aligned_frame(psi);
    let integral = sphere_quadrature(
        |t, f| {
            let (st, ct) = t.sin_cos();
            let (sf, cf) = f.sin_cos();
            let n: [f64; 3] = std::array::from_fn(|i| st * cf * e1[i] + st * sf * e2[i] + ct * u[i]);
            g(amplitude(psi, &BlochPoint::from_unit_vector(n)).norm_sqr())
        },
        n_nodes,
        n_nodes,
        Execution::Sequential,
    );
    Ok(psi.spin.dim() as f64 / (4.0 * PI) * integral)
}

/// `W = −∫ Q ln Q dμ` with `dμ = (2s+1)/(4π) sin θ dθ dφ`.
pub fn su2_wehrl(psi: &SpinState, n_nodes: usize) -> Result<f64> {
    sphere_functional(psi, n_nodes, entropy_density)
}

/// `M = ∫ Q² dμ`.
pub fn su2_second_moment(psi: &SpinState, n_nodes: usize) -> Result<f64> {
    sphere_functional(psi, n_nodes, |q| q * q)
}

/// `∫ Q dμ`.
pub fn su2_husimi_norm(psi: &SpinState, n_nodes: usize) -> Result<f64> {
    sphere_functional(psi, n_nodes, |q| q)
}

/// Volume of `S²` under `dμ`, equal to `2s+1`.
pub fn su2_volume(spin: SpinLabel, n_nodes: usize) -> f64 {
    let rule = GaussLegendre::new(n_nodes);
    let polar: f64 = rule.on_interval(0.0, PI).map(|(t, w)| w * t.sin()).sum();
    spin.dim() as f64 / (4.0 * PI) * TAU * polar
}

/// `1 − 1/(2s+1)`.
pub fn su2_w_min(spin: SpinLabel) -> f64 {
    1.0 - 1.0 / (spin.two_s as f64 + 1.0)
}

/// `1/2 + 1/(2+8s)`.
pub fn su2_m_max(spin: SpinLabel) -> f64 {
    0.5 + 1.0 / (2.0 + 4.0 * spin.two_s as f64)
}
