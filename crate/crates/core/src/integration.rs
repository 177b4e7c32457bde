//! Integration against the invariant measures of `G₂` and `S²`.
//!
//! On `G₂` the measure is normalized so that its total volume is `d_λ`:
//!
//! `dμ = 3 d_λ / (2⁹ π⁴) (cos ϑ₊ − cos ϑ₋)² dΩ₊ dΩ₋ dΩ_a dΩ_b`,
//!
//! where `dΩ± = sin ϑ± dϑ± dβ±` and `dΩ_ℓ = sin θ_ℓ dθ_ℓ dφ_ℓ`. Monte Carlo
//! draws exact samples from it; integrands that depend on `ϑ±` alone are
//! reduced to a two-dimensional Gauss–Legendre rule.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grassmann::{AngleParam, IrrepLabel};
use crate::quadrature::GaussLegendre;
use crate::{Error, Execution, Result};

/// Samples per Monte Carlo chunk. Each chunk owns one random stream, so the
/// estimate depends on `(seed, n)` only, not on how chunks are scheduled.
pub const CHUNK_SIZE: usize = 4096;

pub const MIN_MC_SAMPLES: u64 = 1000;

pub const DEFAULT_QUAD_NODES: usize = 96;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSample {
    pub point: AngleParam,
    /// Importance weight; sampling is exact, so always 1.
    pub weight: f64,
}

/// Draws one point from the normalized invariant measure of `G₂`.
///
/// `(cos ϑ₊, cos ϑ₋)` come from the density `∝ (u₊ − u₋)²` on `[−1, 1]²` by
/// rejection against the bound 4 (acceptance rate 1/6). Polar layer angles
/// have density `sin θ` and all four phases are uniform.
pub fn sample_g2<R: Rng + ?Sized>(rng: &mut R) -> MeasureSample {
    let (up, um) = loop {
        let up: f64 = rng.random_range(-1.0..=1.0);
        let um: f64 = rng.random_range(-1.0..=1.0);
        let w = (up - um) * (up - um);
        if rng.random::<f64>() * 4.0 < w {
            break (up, um);
        }
    };
    let mut polar = || rng.random_range(-1.0f64..=1.0).acos();
    let theta_a = polar();
    let theta_b = polar();
    let point = AngleParam {
        theta_a,
        theta_b,
        phi_a: rng.random_range(0.0..TAU),
        phi_b: rng.random_range(0.0..TAU),
        vartheta_plus: up.acos(),
        vartheta_minus: um.acos(),
        beta_plus: rng.random_range(0.0..TAU),
        beta_minus: rng.random_range(0.0..TAU),
    };
    MeasureSample { point, weight: 1.0 }
}

/// Random stream `stream` of the generator keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives an independent seed for sub-task `index` of kind `tag`.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    // splitmix64 finalizer over a combined key
    let mut z = seed
        .wrapping_add(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, o: &Welford) {
        if o.n == 0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n as f64 / n as f64;
        self.m2 += o.m2 + d * d * (self.n as f64) * (o.n as f64) / n as f64;
        self.n = n;
    }
}

/// `∫ f dμ` over `G₂` with `n` exact samples.
pub fn mc_integrate<F>(lambda: IrrepLabel, f: F, n: u64, seed: u64, exec: Execution) -> Result<McEstimate>
where
    F: Fn(&AngleParam) -> f64 + Sync + Send,
{
    let v = mc_integrate_many(lambda, 1, |p, out| out[0] = f(p), n, seed, exec)?;
    Ok(v[0])
}

/// Estimates `k` integrals from one shared sample; `f` writes the `k`
/// integrand values for a point into its output slice.
pub fn mc_integrate_many<F>(
    lambda: IrrepLabel,
    k: usize,
    f: F,
    n: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<McEstimate>>
where
    F: Fn(&AngleParam, &mut [f64]) + Sync + Send,
{
    if n < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_MC_SAMPLES} samples required, got {n}"
        )));
    }
    let n_chunks = n.div_ceil(CHUNK_SIZE as u64) as usize;
    let chunks = exec.map_indexed(n_chunks, |c| -> Result<Vec<Welford>> {
        let start = c as u64 * CHUNK_SIZE as u64;
        let len = (n - start).min(CHUNK_SIZE as u64);
        let mut rng = stream_rng(seed, c as u64);
        let mut acc = vec![Welford::default(); k];
        let mut buf = vec![0.0; k];
        for s in 0..len {
            let sample = sample_g2(&mut rng);
            f(&sample.point, &mut buf);
            for (a, &v) in acc.iter_mut().zip(&buf) {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        index: start + s,
                        value: v,
                        angles: sample.point.to_array(),
                    });
                }
                a.push(v);
            }
        }
        Ok(acc)
    });
    let mut total = vec![Welford::default(); k];
    for chunk in chunks {
        for (t, w) in total.iter_mut().zip(chunk?) {
            t.merge(&w);
        }
    }
    let d = lambda.dim() as f64;
    Ok(total
        .into_iter()
        .map(|w| {
            let var = if w.n > 1 { w.m2 / (w.n - 1) as f64 } else { 0.0 };
            McEstimate {
                value: d * w.mean,
                std_error: d * (var / w.n as f64).sqrt(),
                n_samples: w.n,
                seed,
            }
        })
        .collect())
}

/// `∫ h(ϑ₊, ϑ₋) dμ` for integrands that depend on `ϑ±` only:
/// `(3 d_λ / 8) ∫∫ h (cos ϑ₊ − cos ϑ₋)² sin ϑ₊ sin ϑ₋ dϑ₊ dϑ₋`.
///
/// The rule is Gauss–Legendre in the angles themselves (not their cosines),
/// which resolves `Q ln Q` integrands whose logarithm is singular at `ϑ = π`.
pub fn reduced_quadrature_g2<H>(lambda: IrrepLabel, h: H, n_nodes: usize, exec: Execution) -> f64
where
    H: Fn(f64, f64) -> f64 + Sync + Send,
{
    let rule = GaussLegendre::new(n_nodes);
    let pts: Vec<(f64, f64)> = rule.on_interval(0.0, PI).collect();
    let rows = exec.map_indexed(pts.len(), |i| {
        let (a, wa) = pts[i];
        let (sa, ca) = a.sin_cos();
        pts.iter()
            .map(|&(b, wb)| {
                let (sb, cb) = b.sin_cos();
                wb * sb * (ca - cb) * (ca - cb) * h(a, b)
            })
            .sum::<f64>()
            * wa
            * sa
    });
    3.0 * lambda.dim() as f64 / 8.0 * rows.iter().sum::<f64>()
}

/// `∫ h(θ, φ) sin θ dθ dφ` over the sphere with Gauss–Legendre in `θ` and
/// the trapezoid rule in `φ`.
pub fn sphere_quadrature<H>(h: H, n_theta: usize, n_phi: usize, exec: Execution) -> f64
where
    H: Fn(f64, f64) -> f64 + Sync + Send,
{
    let rule = GaussLegendre::new(n_theta);
    let pts: Vec<(f64, f64)> = rule.on_interval(0.0, PI).collect();
    let dphi = TAU / n_phi as f64;
    let rows = exec.map_indexed(pts.len(), |i| {
        let (t, w) = pts[i];
        let s: f64 = (0..n_phi).map(|k| h(t, k as f64 * dphi)).sum();
        s * dphi * w * t.sin()
    });
    rows.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(l: u32) -> IrrepLabel {
        IrrepLabel::new(l).unwrap()
    }

    #[test]
    fn reduced_volume() {
        for l in 1..=6 {
            let v = reduced_quadrature_g2(label(l), |_, _| 1.0, DEFAULT_QUAD_NODES, Execution::Sequential);
            let d = label(l).dim() as f64;
            assert!((v - d).abs() < 1e-12 * d, "λ={l}: {v}");
        }
    }

    #[test]
    fn sphere_volume() {
        let v = sphere_quadrature(|_, _| 1.0, 32, 8, Execution::Sequential);
        assert!((v - 4.0 * PI).abs() < 1e-12);
        // ∫ cos²θ dΩ = 4π/3
        let v = sphere_quadrature(|t, _| t.cos().powi(2), 32, 8, Execution::Sequential);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_moment_of_the_radial_density() {
        // E[(u₊−u₋)²] = ∫(u−v)⁴ / ∫(u−v)² over [−1,1]² = (64/15)/(8/3) = 8/5
        let mut rng = stream_rng(1, 0);
        let n = 200_000;
        let mut acc = Welford::default();
        for _ in 0..n {
            let p = sample_g2(&mut rng).point;
            acc.push((p.vartheta_plus.cos() - p.vartheta_minus.cos()).powi(2));
        }
        let se = (acc.m2 / (n - 1) as f64 / n as f64).sqrt();
        assert!((acc.mean - 1.6).abs() < 4.0 * se, "{} ± {se}", acc.mean);
    }

    #[test]
    fn phases_are_uniform() {
        // Kolmogorov–Smirnov on β₊/2π, critical value at the 1% level ≈ 1.63/√n
        let mut rng = stream_rng(2, 0);
        let n = 20_000;
        let mut xs: Vec<f64> = (0..n).map(|_| sample_g2(&mut rng).point.beta_plus / TAU).collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - x).abs()))
            .fold(0.0, f64::max);
        assert!(d < 1.63 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn volume_by_monte_carlo_and_determinism() {
        let lam = label(2);
        let one = mc_integrate(lam, |_| 1.0, 10_000, 3, Execution::Parallel).unwrap();
        assert_eq!(one.value, 20.0);
        assert_eq!(one.std_error, 0.0);
        let f = |p: &AngleParam| p.vartheta_plus.cos().powi(2) + p.theta_a.sin();
        let a = mc_integrate(lam, f, 50_000, 9, Execution::Parallel).unwrap();
        let b = mc_integrate(lam, f, 50_000, 9, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        let c = mc_integrate(lam, f, 50_000, 10, Execution::Sequential).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn errors() {
        let lam = label(1);
        assert!(matches!(
            mc_integrate(lam, |_| 1.0, 10, 0, Execution::Sequential),
            Err(Error::InvalidArgument(_))
        ));
        let r = mc_integrate(
            lam,
            |p| if p.vartheta_plus > 1.0 { f64::NAN } else { 0.0 },
            5000,
            0,
            Execution::Sequential,
        );
        match r {
            Err(Error::NonFinite { angles, .. }) => assert!(angles[4] > 1.0),
            other => panic!("expected a non-finite report, got {other:?}"),
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(7, 1, i)).collect();
        let mut s = a.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 100);
        assert_ne!(derive_seed(7, 1, 0), derive_seed(7, 2, 0));
    }
}
