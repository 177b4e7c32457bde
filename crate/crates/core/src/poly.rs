//! Sparse polynomials in the four entries `z11, z12, z21, z22` of a 2×2
//! complex matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Mat2, C64};

/// Exponents of `(z11, z12, z21, z22)`.
pub type Exponents = [u16; 4];

/// Coefficients smaller than this fraction of the operands' largest
/// coefficient are treated as rounding noise and dropped.
pub const PRUNE_REL: f64 = 1e-14;

/// One of the four matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Z11 = 0,
    Z12 = 1,
    Z21 = 2,
    Z22 = 3,
}

impl Entry {
    pub const ALL: [Entry; 4] = [Entry::Z11, Entry::Z12, Entry::Z21, Entry::Z22];
}

/// A polynomial with complex coefficients in the matrix entries.
///
/// Immutable in practice: every operation returns a new value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyC4 {
    terms: BTreeMap<Exponents, C64>,
}

impl PolyC4 {
    pub fn zero() -> Self {
        PolyC4::default()
    }

    pub fn one() -> Self {
        PolyC4::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        PolyC4::monomial([0; 4], c)
    }

    pub fn monomial(exps: Exponents, c: C64) -> Self {
        let mut terms = BTreeMap::new();
        if c != C64::new(0.0, 0.0) {
            terms.insert(exps, c);
        }
        PolyC4 { terms }
    }

    pub fn var(e: Entry) -> Self {
        let mut exps = [0; 4];
        exps[e as usize] = 1;
        PolyC4::monomial(exps, C64::new(1.0, 0.0))
    }

    /// `det Z = z11 z22 - z12 z21`.
    pub fn det() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert([1, 0, 0, 1], C64::new(1.0, 0.0));
        terms.insert([0, 1, 1, 0], C64::new(-1.0, 0.0));
        PolyC4 { terms }
    }

    /// Builds from raw terms, summing duplicates and pruning.
    pub fn from_terms(iter: impl IntoIterator<Item = (Exponents, C64)>) -> Self {
        let mut terms: BTreeMap<Exponents, C64> = BTreeMap::new();
        let mut scale = 0.0f64;
        for (e, c) in iter {
            scale = scale.max(c.norm());
            *terms.entry(e).or_default() += c;
        }
        let mut p = PolyC4 { terms };
        p.prune(scale);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &Exponents) -> C64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    /// Degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(total_degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return PolyC4::zero();
        }
        PolyC4 {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = PolyC4::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to one matrix entry.
    pub fn derivative(&self, e: Entry) -> Self {
        let k = e as usize;
        PolyC4 {
            terms: self
                .terms
                .iter()
                .filter(|(exps, _)| exps[k] > 0)
                .map(|(exps, c)| {
                    let mut d = *exps;
                    d[k] -= 1;
                    (d, c * exps[k] as f64)
                })
                .collect(),
        }
    }

    /// Multiplies every term by its own total degree (the Euler operator).
    pub fn euler(&self) -> Self {
        PolyC4 {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) > 0)
                .map(|(e, c)| (*e, c * total_degree(e) as f64))
                .collect(),
        }
    }

    /// Terms of one total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        PolyC4 {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == degree)
                .map(|(e, c)| (*e, *c))
                .collect(),
        }
    }

    /// Evaluates at the matrix `z`.
    pub fn eval(&self, z: &Mat2) -> C64 {
        self.eval_entries([z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]])
    }

    pub fn eval_entries(&self, x: [C64; 4]) -> C64 {
        let Some(deg) = self.degree() else {
            return C64::new(0.0, 0.0);
        };
        let powers: Vec<Vec<C64>> = x
            .iter()
            .map(|v| {
                let mut p = Vec::with_capacity(deg as usize + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=deg {
                    p.push(acc);
                    acc *= v;
                }
                p
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                c * powers[0][e[0] as usize]
                    * powers[1][e[1] as usize]
                    * powers[2][e[2] as usize]
                    * powers[3][e[3] as usize]
            })
            .sum()
    }

    fn prune(&mut self, scale: f64) {
        let cut = PRUNE_REL * scale;
        self.terms.retain(|_, c| c.norm() > cut);
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(*e).or_default() += c * sign;
        }
        let mut p = PolyC4 { terms };
        p.prune(self.max_abs_coeff().max(other.max_abs_coeff()));
        p
    }
}

pub(crate) fn total_degree(e: &Exponents) -> u32 {
    e.iter().map(|&v| v as u32).sum()
}

impl Add for &PolyC4 {
    type Output = PolyC4;
    fn add(self, rhs: &PolyC4) -> PolyC4 {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &PolyC4 {
    type Output = PolyC4;
    fn sub(self, rhs: &PolyC4) -> PolyC4 {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &PolyC4 {
    type Output = PolyC4;
    fn neg(self) -> PolyC4 {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &PolyC4 {
    type Output = PolyC4;
    fn mul(self, rhs: &PolyC4) -> PolyC4 {
        let mut terms: BTreeMap<Exponents, C64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                *terms.entry(e).or_default() += ca * cb;
            }
        }
        let mut p = PolyC4 { terms };
        p.prune(self.max_abs_coeff() * rhs.max_abs_coeff());
        p
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyC4 {
            type Output = PolyC4;
            fn $m(self, rhs: PolyC4) -> PolyC4 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PolyC4> for PolyC4 {
            type Output = PolyC4;
            fn $m(self, rhs: &PolyC4) -> PolyC4 {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for PolyC4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; 4] = ["z11", "z12", "z21", "z22"];
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*{}", NAMES[k])?,
                    _ => write!(f, "*{}^{}", NAMES[k], p)?,
                }
            }
        }
        Ok(())
    }
}
