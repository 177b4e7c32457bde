use std::path::Path;

use grasscs_core::grassmann::{
    angles_to_matrix, coherent_coeffs, AngleParam, BasisIndex, GrassPoint, IrrepLabel, ScaledPoint,
    StateVector,
};
use grasscs_core::integration::{derive_seed, stream_rng};
use grasscs_core::{Mat2, C64};

use crate::cli::{PointArgs, StateArgs, StateKind};
use crate::CliError;

/// Off-normalization above which a loaded state triggers a warning.
pub const RENORM_WARN: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub enum Point {
    Angles(AngleParam),
    Matrix(GrassPoint),
}

impl Point {
    pub fn scaled(&self) -> ScaledPoint {
        match self {
            Point::Angles(a) => ScaledPoint::from_angles(a),
            Point::Matrix(g) => ScaledPoint::from(g),
        }
    }

    pub fn matrix(&self) -> Result<Mat2, CliError> {
        match self {
            Point::Angles(a) => Ok(*angles_to_matrix(a)?.matrix()),
            Point::Matrix(g) => Ok(*g.matrix()),
        }
    }
}

pub fn matrix_from_reals(x: &[f64]) -> Result<GrassPoint, CliError> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Precondition("matrix entries must be finite".into()));
    }
    Ok(GrassPoint::from_entries([
        C64::new(x[0], x[1]),
        C64::new(x[2], x[3]),
        C64::new(x[4], x[5]),
        C64::new(x[6], x[7]),
    ]))
}

fn angles(x: &[f64]) -> Result<AngleParam, CliError> {
    let a: [f64; 8] = x
        .try_into()
        .map_err(|_| CliError::Precondition("expected eight angles".into()))?;
    Ok(AngleParam::new(a)?)
}

pub fn point(p: &PointArgs, what: &str) -> Result<Option<Point>, CliError> {
    Ok(match (&p.angles, &p.matrix) {
        (Some(a), None) => Some(Point::Angles(angles(a)?)),
        (None, Some(m)) => Some(Point::Matrix(matrix_from_reals(m)?)),
        (None, None) => None,
        (Some(_), Some(_)) => {
            return Err(CliError::Precondition(format!("{what}: angles and matrix are mutually exclusive")));
        }
    })
}

pub fn require_point(p: &PointArgs, what: &str) -> Result<Point, CliError> {
    point(p, what)?.ok_or_else(|| CliError::Precondition(format!("{what} is required (--angles or --matrix)")))
}

pub fn lambda(l: u32) -> Result<IrrepLabel, CliError> {
    Ok(IrrepLabel::new(l)?)
}

/// Reads `[[re, im], ...]`, normalizing with a warning when the squared
/// norm is off by more than [`RENORM_WARN`].
pub fn read_coefficients(path: &Path) -> Result<Vec<C64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Precondition(format!("cannot read {}: {e}", path.display())))?;
    let pairs: Vec<[f64; 2]> = serde_json::from_str(&text)
        .map_err(|e| CliError::Precondition(format!("{}: expected a JSON array of [re, im] pairs: {e}", path.display())))?;
    let mut c: Vec<C64> = pairs.iter().map(|p| C64::new(p[0], p[1])).collect();
    let n: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    if !(n > 0.0 && n.is_finite()) {
        return Err(CliError::Precondition(format!("state in {} has squared norm {n}", path.display())));
    }
    if (n - 1.0).abs() > RENORM_WARN {
        eprintln!("warning: state in {} has squared norm {n}; normalizing", path.display());
    }
    let s = n.sqrt().recip();
    c.iter_mut().for_each(|x| *x *= s);
    Ok(c)
}

fn basis_label(idx: &[i64], lambda: IrrepLabel) -> Result<BasisIndex, CliError> {
    let bad = || CliError::Precondition(format!("invalid basis label {idx:?}"));
    let two_j = u32::try_from(idx[0]).map_err(|_| bad())?;
    let m = u32::try_from(idx[1]).map_err(|_| bad())?;
    let two_qa = i32::try_from(idx[2]).map_err(|_| bad())?;
    let two_qb = i32::try_from(idx[3]).map_err(|_| bad())?;
    let b = BasisIndex::new(two_j, m, two_qa, two_qb);
    b.validate(lambda)?;
    Ok(b)
}

pub fn state(s: &StateArgs, lambda: IrrepLabel, seed: u64) -> Result<StateVector, CliError> {
    Ok(match s.state {
        StateKind::Lowest => StateVector::lowest(lambda),
        StateKind::Highest => StateVector::highest(lambda),
        StateKind::Uniform => StateVector::uniform(lambda),
        StateKind::Random => StateVector::random(lambda, &mut stream_rng(derive_seed(seed, 0x5747, 0), 0)),
        StateKind::Basis => {
            let idx = s
                .index
                .as_ref()
                .ok_or_else(|| CliError::Precondition("--state basis needs --index".into()))?;
            StateVector::basis(lambda, basis_label(idx, lambda)?)?
        }
        StateKind::Coherent => {
            let p = require_point(
                &PointArgs {
                    angles: s.cs_angles.clone(),
                    matrix: s.cs_matrix.clone(),
                },
                "coherent-state label",
            )?;
            coherent_coeffs(lambda, p.scaled())?
        }
        StateKind::File => {
            let path = s
                .state_file
                .as_ref()
                .ok_or_else(|| CliError::Precondition("--state file needs --state-file".into()))?;
            StateVector::new(lambda, read_coefficients(path)?)?
        }
    })
}

pub fn describe_index(b: &BasisIndex) -> serde_json::Value {
    serde_json::json!({
        "two_j": b.two_j,
        "m": b.m,
        "two_qa": b.two_qa,
        "two_qb": b.two_qb,
        "degree": b.degree(),
    })
}
