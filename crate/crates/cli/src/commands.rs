use std::f64::consts::PI;

use grasscs_core::entropy::{
    conjecture_m_max, conjecture_m_max_partial, conjecture_w_min, conjecture_w_min_product, minimize_wehrl,
    second_moment_exact, second_moment_mc, wehrl_entropy, wehrl_entropy_mc, wehrl_entropy_quadrature, SearchOptions,
};
use grasscs_core::grassmann::{grass_husimi, grass_kernel, grass_overlap, AngleParam, BasisTable, ScaledPoint};
use grasscs_core::integration::{derive_seed, stream_rng};
use grasscs_core::operators::{
    classify_phase, generator_matrix, order_parameters, symbol_closed_form, symbols_numeric, Operator,
};
use grasscs_core::su2::{
    su2_husimi, su2_m_max, su2_second_moment, su2_symbols, su2_w_min, su2_wehrl, BlochPoint, SpinLabel, SpinState,
};
use grasscs_core::{Execution, C64};
use serde_json::{json, Value};

use crate::cli::*;
use crate::input::{self, Point};
use crate::CliError;

pub enum Output {
    Json(Value),
    Csv(String),
}

pub struct Context {
    pub seed: u64,
    pub exec: Execution,
    pub format: Format,
}

type Res = Result<Output, CliError>;

fn json_only(ctx: &Context, v: Value) -> Res {
    if ctx.format == Format::Csv {
        return Err(CliError::Precondition("CSV output is only available for husimi --grid".into()));
    }
    Ok(Output::Json(v))
}

pub fn run(cmd: &Command, ctx: &Context) -> Res {
    match cmd {
        Command::Basis(a) => basis(a, ctx),
        Command::Kernel(a) => kernel(a, ctx),
        Command::Overlap(a) => overlap(a, ctx),
        Command::Generators(a) => generators(a, ctx),
        Command::Symbols(a) => symbols(a, ctx),
        Command::Phase(a) => phase(a, ctx),
        Command::Husimi(a) => husimi(a, ctx),
        Command::Entropy(a) => entropy(a, ctx),
        Command::Moment(a) => moment(a, ctx),
        Command::Conjecture(a) => conjecture(a, ctx),
        Command::Su2(a) => su2(a, ctx),
    }
}

fn basis(a: &LambdaArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let t = BasisTable::get(l)?;
    let indices: Vec<Value> = t
        .indices()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut v = input::describe_index(b);
            v["prefactor_sq"] = json!(t.prefactor_sq(i).to_string());
            v["prefactor"] = json!(t.prefactor(i));
            v
        })
        .collect();
    json_only(ctx, json!({ "lambda": a.lambda, "dim": t.dim(), "indices": indices }))
}

fn two_points(a: &TwoPointArgs) -> Result<(Point, Point), CliError> {
    let z = input::require_point(&a.z, "first point")?;
    let w = input::require_point(&a.w.clone().into(), "second point")?;
    Ok((z, w))
}

fn kernel(a: &TwoPointArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let (z, w) = two_points(a)?;
    let (z, w) = (z.matrix()?, w.matrix()?);
    let k = grass_kernel(l, &z, &w.adjoint());
    let t = BasisTable::get(l)?;
    let sum: C64 = t.eval_raw(&z).iter().zip(t.eval_raw(&w)).map(|(x, y)| x * y.conj()).sum();
    let rel = (sum - k).norm() / k.norm();
    json_only(ctx, json!({ "kernel": k, "basis_sum": sum, "relative_error": rel }))
}

fn overlap(a: &TwoPointArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let (z, w) = two_points(a)?;
    let o = grass_overlap(l, z.scaled(), w.scaled());
    json_only(ctx, json!({ "overlap": o, "abs_sq": o.norm_sqr() }))
}

const DEFAULT_OPS: [&str; 6] = ["P3", "Sa3", "Sb3", "C1", "C2", "M2"];

fn generators(a: &GeneratorArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let names: Vec<String> = if a.ops.is_empty() {
        DEFAULT_OPS.iter().map(|s| s.to_string()).collect()
    } else {
        a.ops.clone()
    };
    let mut out = Vec::new();
    for name in &names {
        let op: Operator = name.parse()?;
        let g = generator_matrix(l, op)?;
        let mut v = json!({
            "op": op.to_string(),
            "dim": g.dim(),
            "diagonal": g.diagonal(),
            "off_diagonal_max": g.off_diagonal_max(),
        });
        if a.full {
            let rows: Vec<Vec<C64>> = g.matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
            v["matrix"] = json!(rows);
        }
        out.push(v);
    }
    json_only(ctx, json!({ "lambda": a.lambda, "operators": out }))
}

fn symbols(a: &SymbolArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let p = input::require_point(&a.point, "point")?.scaled();
    let mut v = json!({});
    let closed = matches!(a.method, SymbolMethod::Closed | SymbolMethod::Both).then(|| symbol_closed_form(l, p));
    let matrix = match a.method {
        SymbolMethod::Matrix | SymbolMethod::Both => Some(symbols_numeric(l, p)?),
        SymbolMethod::Closed => None,
    };
    if let (Some(c), Some(m)) = (&closed, &matrix) {
        v["max_abs_diff"] = json!(c.max_abs_diff(m));
    }
    if let Some(c) = closed {
        v["closed"] = json!(c);
    }
    if let Some(m) = matrix {
        v["matrix"] = json!(m);
    }
    json_only(ctx, v)
}

fn phase(a: &PhaseArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let p = input::require_point(&a.point, "point")?;
    let r = classify_phase(l, p.scaled(), a.tol)?;
    let mut v = json!({ "phase": r });
    if let Point::Angles(ang) = p {
        v["order_parameters"] = json!(order_parameters(l, &ang));
    }
    json_only(ctx, v)
}

fn husimi(a: &HusimiArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let psi = input::state(&a.state, l, ctx.seed)?;
    let Some(n) = a.grid else {
        if ctx.format == Format::Csv {
            return Err(CliError::Precondition("CSV output needs --grid".into()));
        }
        let p = input::require_point(&a.point, "point")?;
        return Ok(Output::Json(json!({ "q": grass_husimi(&psi, p.scaled())? })));
    };
    if n < 2 {
        return Err(CliError::Precondition(format!("--grid needs at least 2 points per axis, got {n}")));
    }
    if a.point.matrix.is_some() {
        return Err(CliError::Precondition("--grid takes its fixed angles from --angles".into()));
    }
    psi.ensure_normalized()?;
    let base = match input::point(&a.point, "point")? {
        Some(Point::Angles(p)) => p.to_array(),
        _ => [0.0; 8],
    };
    let t = BasisTable::get(l)?;
    let step = PI / (n - 1) as f64;
    let rows = ctx.exec.map_indexed(n * n, |k| {
        let (vp, vm) = ((k / n) as f64 * step, (k % n) as f64 * step);
        let mut x = base;
        x[4] = vp;
        x[5] = vm;
        let q = t
            .eval_scaled_dot(&ScaledPoint::from_angles(&AngleParam::from_array(x)), psi.coeffs())
            .norm_sqr();
        (vp, vm, q)
    });
    Ok(match ctx.format {
        Format::Csv => {
            let mut s = String::from("vartheta_plus,vartheta_minus,q\n");
            for (vp, vm, q) in rows {
                s.push_str(&format!("{vp:?},{vm:?},{q:?}\n"));
            }
            Output::Csv(s)
        }
        Format::Json => {
            let grid: Vec<[f64; 3]> = rows.into_iter().map(|(a, b, c)| [a, b, c]).collect();
            Output::Json(json!({ "n": n, "columns": ["vartheta_plus", "vartheta_minus", "q"], "grid": grid }))
        }
    })
}

fn entropy(a: &EntropyArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let psi = input::state(&a.state, l, ctx.seed)?;
    let r = match a.method {
        EntropyMethodArg::Auto => wehrl_entropy(&psi, a.n_samples, ctx.seed, ctx.exec)?,
        EntropyMethodArg::Quadrature => wehrl_entropy_quadrature(&psi, a.n_nodes, ctx.exec)?,
        EntropyMethodArg::Mc => wehrl_entropy_mc(&psi, a.n_samples, ctx.seed, ctx.exec)?,
    };
    let w_min = conjecture_w_min(l);
    json_only(
        ctx,
        json!({
            "w": r.w_value,
            "w_error": r.w_error,
            "w_min": w_min,
            "excess": r.w_value - w_min,
            "report": r,
        }),
    )
}

fn moment(a: &MomentArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let psi = input::state(&a.state, l, ctx.seed)?;
    let r = match a.method {
        MomentMethodArg::Exact => second_moment_exact(&psi)?,
        MomentMethodArg::Mc => second_moment_mc(&psi, a.n_samples, ctx.seed, ctx.exec)?,
    };
    let m_max = conjecture_m_max(l);
    json_only(
        ctx,
        json!({ "m": r.m_value, "m_error": r.m_error, "m_max": m_max, "report": r }),
    )
}

fn conjecture(a: &ConjectureArgs, ctx: &Context) -> Res {
    let l = input::lambda(a.lambda)?;
    let mut v = json!({
        "w_min": conjecture_w_min(l),
        "w_min_product": conjecture_w_min_product(l),
        "m_max": conjecture_m_max(l),
        "m_max_partial": conjecture_m_max_partial(l),
    });
    if a.starts > 0 {
        let mut opts = SearchOptions::default();
        if let Some(n) = a.n_inner {
            opts.n_inner = n;
        }
        if let Some(r) = a.restarts {
            opts.restarts = r;
        }
        if let Some(m) = a.max_evals {
            opts.optimizer.max_evals = m;
        }
        let r = minimize_wehrl(l, a.starts, a.n_mc, ctx.seed, &opts, ctx.exec)?;
        if r.has_counterexample() {
            eprintln!(
                "warning: {} start(s) fell more than 3σ below W_min; see results.search.counterexamples",
                r.counterexamples.len()
            );
        }
        v["best_w"] = json!(r.best_w);
        v["best_w_error"] = json!(r.best_w_error);
        v["counterexample"] = json!(r.has_counterexample());
        v["search"] = json!(r);
    }
    json_only(ctx, v)
}

fn su2(a: &Su2Args, ctx: &Context) -> Res {
    let sp = SpinLabel::new(a.two_s)?;
    let at = BlochPoint::new(a.theta, a.phi);
    if !(a.theta.is_finite() && a.phi.is_finite() && (0.0..=PI).contains(&a.theta)) {
        return Err(CliError::Precondition(format!("θ = {} outside [0, π]", a.theta)));
    }
    let ts = sp.two_s() as i32;
    let psi = match a.state {
        SpinStateKind::Lowest => SpinState::basis(sp, -ts)?,
        SpinStateKind::Highest => SpinState::basis(sp, ts)?,
        SpinStateKind::Basis => {
            let k = a
                .two_k
                .ok_or_else(|| CliError::Precondition("--state basis needs --two-k".into()))?;
            SpinState::basis(sp, k)?
        }
        SpinStateKind::Coherent => SpinState::coherent(sp, &at),
        SpinStateKind::Random => SpinState::random(sp, &mut stream_rng(derive_seed(ctx.seed, 0x5532, 0), 0)),
        SpinStateKind::File => {
            let path = a
                .state_file
                .as_ref()
                .ok_or_else(|| CliError::Precondition("--state file needs --state-file".into()))?;
            SpinState::new(sp, input::read_coefficients(path)?)?
        }
    };
    json_only(
        ctx,
        json!({
            "two_s": a.two_s,
            "w": su2_wehrl(&psi, a.n_nodes)?,
            "m": su2_second_moment(&psi, a.n_nodes)?,
            "w_min": su2_w_min(sp),
            "m_max": su2_m_max(sp),
            "husimi_at_point": su2_husimi(&psi, &at)?,
            "symbols_at_point": su2_symbols(sp, &at),
            "spin_expectation": psi.spin_expectation(),
        }),
    )
}
