//! Wehrl entropy and Husimi second moment on `G₂`, the conjectured extremal
//! values, and a variational search for low-entropy states.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::grassmann::{
    coherent_coeffs, AngleParam, BasisTable, IrrepLabel, ScaledPoint, StateVector,
};
use crate::integration::{
    derive_seed, mc_integrate_many, reduced_quadrature_g2, sample_g2, stream_rng, McEstimate,
    DEFAULT_QUAD_NODES,
};
use crate::operators::Expander;
use crate::optim::NelderMead;
use crate::poly::PolyC4;
use crate::{Error, Execution, Result, C64};

/// Largest `λ` for the exact second moment (it expands onto `ℋ_{2λ}`).
pub const SECOND_MOMENT_CAP: u32 = 4;

const EXPANSION_TOL: f64 = 1e-10;
const Q_FLOOR: f64 = 1e-300;

/// `4 − 1/(1+λ) − 4/(2+λ) − 3/(3+λ)`.
pub fn conjecture_w_min(lambda: IrrepLabel) -> f64 {
    let l = lambda.value() as f64;
    4.0 - 1.0 / (1.0 + l) - 4.0 / (2.0 + l) - 3.0 / (3.0 + l)
}

/// Product form of [`conjecture_w_min`]:
/// `4λ(λ + 2 + √2/2)(λ + 2 − √2/2) / ((1+λ)(2+λ)(3+λ))`.
pub fn conjecture_w_min_product(lambda: IrrepLabel) -> f64 {
    let l = lambda.value() as f64;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    4.0 * l * (2.0 + h + l) * (2.0 - h + l) / ((1.0 + l) * (2.0 + l) * (3.0 + l))
}

/// `(2+λ)²(3+λ) / (4(1+λ)(1+2λ)(3+2λ))`.
pub fn conjecture_m_max(lambda: IrrepLabel) -> f64 {
    let l = lambda.value() as f64;
    (2.0 + l).powi(2) * (3.0 + l) / (4.0 * (1.0 + l) * (1.0 + 2.0 * l) * (3.0 + 2.0 * l))
}

/// Partial-fraction form of [`conjecture_m_max`].
pub fn conjecture_m_max_partial(lambda: IrrepLabel) -> f64 {
    let l = lambda.value() as f64;
    1.0 / 16.0 - 0.5 / (1.0 + l) + (45.0 / 32.0) / (1.0 + 2.0 * l) + (3.0 / 32.0) / (3.0 + 2.0 * l)
}

/// `−Q ln Q` with `0 ln 0 = 0`.
pub fn entropy_density(q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        -q * q.max(Q_FLOOR).ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    ReducedQuadrature,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub lambda: u32,
    pub w_value: f64,
    /// Standard error for Monte Carlo; 0 for quadrature.
    pub w_error: f64,
    pub method: EntropyMethod,
    pub state_descriptor: String,
    pub n_samples: Option<u64>,
    pub n_nodes: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ExactExpansion,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub lambda: u32,
    pub m_value: f64,
    pub m_error: f64,
    pub method: MomentMethod,
    /// Relative residual of the `ℋ_{2λ}` expansion (exact method only).
    pub residual: Option<f64>,
    pub n_samples: Option<u64>,
    pub seed: Option<u64>,
}

/// The `m` of a state equal (up to phase) to a basis vector `(0, m, 0, 0)`.
/// Such states have Husimi functions depending on `ϑ±` only.
pub fn invariant_tower_level(psi: &StateVector) -> Option<u32> {
    let t = BasisTable::get(psi.lambda()).ok()?;
    let mut found = None;
    for (i, c) in psi.coeffs().iter().enumerate() {
        if c.norm() > 1e-12 {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    let idx = t.indices()[found?];
    (idx.two_j == 0 && (psi.coeffs()[found?].norm() - 1.0).abs() < 1e-10).then_some(idx.m)
}

fn describe(psi: &StateVector) -> String {
    match invariant_tower_level(psi) {
        Some(0) => "lowest_weight".into(),
        Some(m) if m == psi.lambda().value() => "highest_weight".into(),
        Some(m) => format!("basis(j=0, m={m}, qa=0, qb=0)"),
        None => "general".into(),
    }
}

/// Husimi function of `psi` on the diagonal slice `Z = diag(ξ₊, ξ₋)`.
fn radial_husimi(table: &BasisTable, psi: &StateVector, vp: f64, vm: f64) -> f64 {
    let p = AngleParam::from_array([0.0, 0.0, 0.0, 0.0, vp, vm, 0.0, 0.0]);
    table.eval_scaled_dot(&ScaledPoint::from_angles(&p), psi.coeffs()).norm_sqr()
}

/// Reduced-quadrature Wehrl entropy; only valid for states whose Husimi
/// function depends on `ϑ±` alone.
pub fn wehrl_entropy_quadrature(psi: &StateVector, n_nodes: usize, exec: Execution) -> Result<EntropyReport> {
    psi.ensure_normalized()?;
    if invariant_tower_level(psi).is_none() {
        return Err(Error::InvalidArgument(
            "reduced quadrature needs a state with a U(2)×U(2)-invariant Husimi function".into(),
        ));
    }
    let t = BasisTable::get(psi.lambda())?;
    let w = reduced_quadrature_g2(
        psi.lambda(),
        |a, b| entropy_density(radial_husimi(&t, psi, a, b)),
        n_nodes,
        exec,
    );
    Ok(EntropyReport {
        lambda: psi.lambda().value(),
        w_value: w,
        w_error: 0.0,
        method: EntropyMethod::ReducedQuadrature,
        state_descriptor: describe(psi),
        n_samples: None,
        n_nodes: Some(n_nodes),
        seed: None,
    })
}

pub fn wehrl_entropy_mc(psi: &StateVector, n: u64, seed: u64, exec: Execution) -> Result<EntropyReport> {
    psi.ensure_normalized()?;
    let t = BasisTable::get(psi.lambda())?;
    let est = mc_integrate_many(
        psi.lambda(),
        1,
        |p, out| {
            let q = t.eval_scaled_dot(&ScaledPoint::from_angles(p), psi.coeffs()).norm_sqr();
            out[0] = entropy_density(q);
        },
        n,
        seed,
        exec,
    )?[0];
    Ok(EntropyReport {
        lambda: psi.lambda().value(),
        w_value: est.value,
        w_error: est.std_error,
        method: EntropyMethod::MonteCarlo,
        state_descriptor: describe(psi),
        n_samples: Some(n),
        n_nodes: None,
        seed: Some(seed),
    })
}

/// `W_ψ = −∫ Q_ψ ln Q_ψ dμ`, by reduced quadrature when the Husimi function
/// is `U(2)×U(2)`-invariant and by Monte Carlo otherwise.
pub fn wehrl_entropy(psi: &StateVector, n: u64, seed: u64, exec: Execution) -> Result<EntropyReport> {
    if invariant_tower_level(psi).is_some() {
        wehrl_entropy_quadrature(psi, DEFAULT_QUAD_NODES, exec)
    } else {
        wehrl_entropy_mc(psi, n, seed, exec)
    }
}

/// `Ψ(Z) = Σ c_i φ_i(Z)` as a polynomial.
pub fn state_polynomial(psi: &StateVector) -> Result<PolyC4> {
    let t = BasisTable::get(psi.lambda())?;
    let mut acc = PolyC4::zero();
    for (i, c) in psi.coeffs().iter().enumerate() {
        if c.norm() > 0.0 {
            acc = acc + t.polynomial(i).scale(*c);
        }
    }
    Ok(acc)
}

/// `M_ψ = ∫ Q_ψ² dμ = (d_λ / d_{2λ}) ‖Ψ²‖²`, with `Ψ²` expanded on the basis
/// polynomials of `ℋ_{2λ}`.
pub fn second_moment_exact(psi: &StateVector) -> Result<MomentReport> {
    psi.ensure_normalized()?;
    let lambda = psi.lambda();
    if lambda.value() > SECOND_MOMENT_CAP {
        return Err(Error::CapExceeded {
            lambda: lambda.value(),
            cap: SECOND_MOMENT_CAP,
            what: "exact second moment",
        });
    }
    let p = state_polynomial(psi)?;
    let sq = &p * &p;
    let ex = Expander::get(lambda.doubled())?;
    let (coeffs, residual) = ex.expand_with_residual(&sq);
    if residual.is_nan() || residual > EXPANSION_TOL {
        return Err(Error::Residual {
            residual,
            tol: EXPANSION_TOL,
            context: format!("square of a λ = {lambda} state on the λ = {} basis", lambda.doubled()),
        });
    }
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    Ok(MomentReport {
        lambda: lambda.value(),
        m_value: lambda.dim() as f64 / lambda.doubled().dim() as f64 * norm,
        m_error: 0.0,
        method: MomentMethod::ExactExpansion,
        residual: Some(residual),
        n_samples: None,
        seed: None,
    })
}

pub fn second_moment_mc(psi: &StateVector, n: u64, seed: u64, exec: Execution) -> Result<MomentReport> {
    psi.ensure_normalized()?;
    let t = BasisTable::get(psi.lambda())?;
    let est = mc_integrate_many(
        psi.lambda(),
        1,
        |p, out| {
            let q = t.eval_scaled_dot(&ScaledPoint::from_angles(p), psi.coeffs()).norm_sqr();
            out[0] = q * q;
        },
        n,
        seed,
        exec,
    )?[0];
    Ok(MomentReport {
        lambda: psi.lambda().value(),
        m_value: est.value,
        m_error: est.std_error,
        method: MomentMethod::MonteCarlo,
        residual: None,
        n_samples: Some(n),
        seed: Some(seed),
    })
}

/// Entropy and second moment of several states from one shared sample.
pub fn entropy_and_moment_mc(
    states: &[StateVector],
    n: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<(McEstimate, McEstimate)>> {
    let Some(first) = states.first() else {
        return Ok(Vec::new());
    };
    let lambda = first.lambda();
    for s in states {
        s.ensure_normalized()?;
        if s.lambda() != lambda {
            return Err(Error::DimensionMismatch {
                expected: lambda.dim(),
                got: s.dim(),
            });
        }
    }
    let t = BasisTable::get(lambda)?;
    let est = mc_integrate_many(
        lambda,
        2 * states.len(),
        |p, out| {
            let sp = ScaledPoint::from_angles(p);
            let vals = t.eval_scaled(&sp);
            for (k, s) in states.iter().enumerate() {
                let amp: C64 = vals.iter().zip(s.coeffs()).map(|(a, b)| a * b).sum();
                let q = amp.norm_sqr();
                out[2 * k] = entropy_density(q);
                out[2 * k + 1] = q * q;
            }
        },
        n,
        seed,
        exec,
    )?;
    Ok(est.chunks(2).map(|c| (c[0], c[1])).collect())
}

/// Unit vector of `ℝⁿ` from `n − 1` hyperspherical angles.
fn sphere_point(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut s = 1.0;
    for a in angles {
        out.push(s * a.cos());
        s *= a.sin();
    }
    out.push(s);
    out
}

/// Inverse of [`sphere_point`].
fn sphere_angles(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let tail: f64 = x[k + 1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if k == n - 2 {
            out.push(x[n - 1].atan2(x[n - 2]));
        } else {
            out.push(tail.atan2(x[k]));
        }
    }
    out
}

/// State with a real non-negative first coefficient from `2d − 2` angles.
fn state_from_params(lambda: IrrepLabel, params: &[f64]) -> StateVector {
    let x = sphere_point(params);
    let d = lambda.dim();
    let mut c = Vec::with_capacity(d);
    c.push(C64::new(x[0], 0.0));
    for k in 1..d {
        c.push(C64::new(x[2 * k - 1], x[2 * k]));
    }
    StateVector::new(lambda, c).expect("dimension matches")
}

fn params_from_state(psi: &StateVector) -> Vec<f64> {
    let c = psi.coeffs();
    let phase = if c[0].norm() > 0.0 { c[0].conj() / c[0].norm() } else { C64::new(1.0, 0.0) };
    let mut x = vec![(c[0] * phase).re];
    for v in &c[1..] {
        let r = v * phase;
        x.push(r.re);
        x.push(r.im);
    }
    sphere_angles(&x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Common-random-number sample size inside the optimizer.
    pub n_inner: usize,
    /// Nelder–Mead restarts from the current best point within one start.
    pub restarts: usize,
    pub optimizer: NelderMead,
    /// Restarts of the coherent-state fidelity search.
    pub fidelity_restarts: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            n_inner: 40_000,
            restarts: 3,
            optimizer: NelderMead {
                max_evals: 6000,
                f_tol: 1e-9,
                x_tol: 1e-7,
                initial_step: 0.3,
            },
            fidelity_restarts: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartTrace {
    pub start: usize,
    pub seed: u64,
    /// Objective on the start's own fixed sample, before and after.
    pub initial_w: f64,
    pub optimized_w: f64,
    /// Independent re-estimate of the optimized state.
    pub final_w: f64,
    pub final_w_error: f64,
    pub evals: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub lambda: u32,
    pub n_starts: usize,
    pub n_mc: u64,
    pub seed: u64,
    pub w_min: f64,
    pub best_start: usize,
    pub best_w: f64,
    pub best_w_error: f64,
    pub best_state: Vec<C64>,
    pub best_fidelity: f64,
    pub best_fidelity_point: AngleParam,
    pub traces: Vec<StartTrace>,
    /// Starts whose re-estimated entropy lies more than three standard
    /// errors below the conjectured minimum.
    pub counterexamples: Vec<usize>,
}

impl SearchReport {
    pub fn has_counterexample(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

/// Precomputed `φ_i(Z_k) det(σ₀+Z_k†Z_k)^{-λ/2}` on a fixed sample.
struct FixedSample {
    rows: Vec<C64>,
    d: usize,
    scale: f64,
}

impl FixedSample {
    fn new(lambda: IrrepLabel, n: usize, seed: u64) -> Result<Self> {
        let t = BasisTable::get(lambda)?;
        let d = lambda.dim();
        let mut rng = stream_rng(seed, 0);
        let mut rows = vec![C64::default(); n * d];
        for k in 0..n {
            let p = sample_g2(&mut rng).point;
            t.eval_scaled_into(&ScaledPoint::from_angles(&p), &mut rows[k * d..(k + 1) * d]);
        }
        Ok(FixedSample {
            rows,
            d,
            scale: d as f64 / n as f64,
        })
    }

    fn wehrl(&self, psi: &[C64]) -> f64 {
        self.rows
            .chunks_exact(self.d)
            .map(|r| {
                let amp: C64 = r.iter().zip(psi).map(|(a, b)| a * b).sum();
                entropy_density(amp.norm_sqr())
            })
            .sum::<f64>()
            * self.scale
    }
}

struct StartResult {
    trace: StartTrace,
    state: StateVector,
}

fn run_start(
    lambda: IrrepLabel,
    start: usize,
    x0: Vec<f64>,
    seed: u64,
    opts: &SearchOptions,
) -> Result<StartResult> {
    let sample = FixedSample::new(lambda, opts.n_inner, seed)?;
    let objective = |x: &[f64]| sample.wehrl(state_from_params(lambda, x).coeffs());
    let initial_w = objective(&x0);
    let mut x = x0;
    let mut evals = 0;
    let mut best = initial_w;
    let mut converged = false;
    for _ in 0..=opts.restarts {
        let m = opts.optimizer.minimize(objective, &x);
        evals += m.evals;
        converged = m.converged;
        let improved = m.f < best - 1e-12;
        if m.f <= best {
            best = m.f;
            x = m.x;
        }
        if !improved && converged {
            break;
        }
    }
    Ok(StartResult {
        trace: StartTrace {
            start,
            seed,
            initial_w,
            optimized_w: best,
            final_w: f64::NAN,
            final_w_error: f64::NAN,
            evals,
            converged,
        },
        state: state_from_params(lambda, &x),
    })
}

/// Searches for states of small Wehrl entropy with Nelder–Mead over unit
/// vectors of `ℂ^{d_λ}` modulo phase, from `n_starts` random starts.
///
/// Each start minimizes a fixed-sample estimate of `W` (common random
/// numbers keep the objective deterministic); all optimized states are then
/// re-estimated on one independent sample of `n_mc` points. The best state's
/// overlap with the closest coherent state is reported as its fidelity.
pub fn minimize_wehrl(
    lambda: IrrepLabel,
    n_starts: usize,
    n_mc: u64,
    seed: u64,
    opts: &SearchOptions,
    exec: Execution,
) -> Result<SearchReport> {
    let starts: Vec<Vec<f64>> = (0..n_starts)
        .map(|i| {
            let mut rng = stream_rng(derive_seed(seed, 1, i as u64), 0);
            params_from_state(&StateVector::random(lambda, &mut rng))
        })
        .collect();
    search_from(lambda, starts, n_mc, seed, opts, exec)
}

/// As [`minimize_wehrl`] but from caller-supplied starting states.
pub fn minimize_wehrl_from(
    starts: &[StateVector],
    n_mc: u64,
    seed: u64,
    opts: &SearchOptions,
    exec: Execution,
) -> Result<SearchReport> {
    let Some(first) = starts.first() else {
        return Err(Error::InvalidArgument("no starting states".into()));
    };
    for s in starts {
        s.ensure_normalized()?;
    }
    let x0 = starts.iter().map(params_from_state).collect();
    search_from(first.lambda(), x0, n_mc, seed, opts, exec)
}

fn search_from(
    lambda: IrrepLabel,
    starts: Vec<Vec<f64>>,
    n_mc: u64,
    seed: u64,
    opts: &SearchOptions,
    exec: Execution,
) -> Result<SearchReport> {
    let n_starts = starts.len();
    if n_starts == 0 {
        return Err(Error::InvalidArgument("n_starts must be positive".into()));
    }
    let results = exec.map_indexed(n_starts, |i| {
        run_start(lambda, i, starts[i].clone(), derive_seed(seed, 2, i as u64), opts)
    });
    let mut results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let states: Vec<StateVector> = results.iter().map(|r| r.state.clone()).collect();
    let finals = entropy_and_moment_mc(&states, n_mc, derive_seed(seed, 3, 0), exec)?;
    let w_min = conjecture_w_min(lambda);
    let mut counterexamples = Vec::new();
    for (r, (w, _)) in results.iter_mut().zip(&finals) {
        r.trace.final_w = w.value;
        r.trace.final_w_error = w.std_error;
        if w.value < w_min - 3.0 * w.std_error {
            counterexamples.push(r.trace.start);
        }
    }
    let best = results
        .iter()
        .min_by(|a, b| a.trace.final_w.total_cmp(&b.trace.final_w))
        .expect("at least one start");
    let (fid, point) = cs_fidelity(&best.state, opts.fidelity_restarts, derive_seed(seed, 4, 0))?;
    Ok(SearchReport {
        lambda: lambda.value(),
        n_starts,
        n_mc,
        seed,
        w_min,
        best_start: best.trace.start,
        best_w: best.trace.final_w,
        best_w_error: best.trace.final_w_error,
        best_state: best.state.coeffs().to_vec(),
        best_fidelity: fid,
        best_fidelity_point: point,
        traces: results.into_iter().map(|r| r.trace).collect(),
        counterexamples,
    })
}

fn unconstrained_to_angles(x: &[f64]) -> AngleParam {
    // polar angles folded into [0, π] by |·|; the Husimi function is smooth in them
    let fold = |t: f64| {
        let r = t.rem_euclid(TAU);
        if r > PI {
            TAU - r
        } else {
            r
        }
    };
    AngleParam::from_array([fold(x[0]), fold(x[1]), x[2], x[3], fold(x[4]), fold(x[5]), x[6], x[7]])
}

/// `max_Z |⟨Z|ψ⟩|²` by Nelder–Mead over the eight angles with `restarts`
/// random starts, each seeded from the best of a small random scan.
pub fn cs_fidelity(psi: &StateVector, restarts: usize, seed: u64) -> Result<(f64, AngleParam)> {
    psi.ensure_normalized()?;
    let t = BasisTable::get(psi.lambda())?;
    let q = |x: &[f64]| {
        let p = unconstrained_to_angles(x);
        t.eval_scaled_dot(&ScaledPoint::from_angles(&p), psi.coeffs()).norm_sqr()
    };
    let nm = NelderMead {
        max_evals: 4000,
        f_tol: 1e-13,
        x_tol: 1e-9,
        initial_step: 0.4,
    };
    let mut best = (f64::NEG_INFINITY, AngleParam::origin());
    for r in 0..restarts.max(1) {
        let mut rng = stream_rng(seed, r as u64);
        let x0 = (0..64)
            .map(|_| sample_g2(&mut rng).point.to_array())
            .max_by(|a, b| q(a).total_cmp(&q(b)))
            .expect("nonempty scan");
        let m = nm.minimize(|x| -q(x), &x0);
        if -m.f > best.0 {
            best = (-m.f, unconstrained_to_angles(&m.x));
        }
    }
    Ok(best)
}

/// Coherent state at `p` as a [`StateVector`].
pub fn coherent_state(lambda: IrrepLabel, p: &AngleParam) -> Result<StateVector> {
    coherent_coeffs(lambda, p)
}
