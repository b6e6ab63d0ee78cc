//! Arithmetic backends: 64-bit floats with tolerance-based comparisons and
//! exact big rationals. Family thresholds involve irrationals and live in
//! float mode; feasibility certificates can be carried out exactly over the
//! rationals, with float inputs rounded by continued fractions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Default comparison tolerance in float mode.
pub const TOL: f64 = 1e-9;
/// Continued-fraction rounding precision when importing floats into exact mode.
pub const EXACT_INPUT_TOL: f64 = 1e-12;

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithMode {
    Exact,
    Float,
}

impl ArithMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ArithMode::Exact => "exact",
            ArithMode::Float => "float",
        }
    }
}

impl std::str::FromStr for ArithMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(ArithMode::Exact),
            "float" => Ok(ArithMode::Float),
            other => Err(format!("unknown arithmetic mode `{other}`")),
        }
    }
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Best rational approximation of `x` within `tol`, by walking the
/// continued-fraction expansion until the convergent is close enough.
pub fn rational_from_f64(x: f64, tol: f64) -> Rational {
    assert!(x.is_finite(), "cannot approximate a non-finite value");
    let negative = x < 0.0;
    let mut x_abs = x.abs();

    // Convergents p/q of the continued fraction of |x|.
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::from(x_abs.floor() as i64), BigInt::one());
    x_abs -= x_abs.floor();

    for _ in 0..64 {
        let approx = bigint_ratio_to_f64(&p, &q);
        if (approx - x.abs()).abs() <= tol {
            break;
        }
        if x_abs.abs() < f64::EPSILON {
            break;
        }
        x_abs = 1.0 / x_abs;
        let a = BigInt::from(x_abs.floor() as i64);
        x_abs -= x_abs.floor();
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }

    let mut r = Rational::new(p, q);
    if negative {
        r = -r;
    }
    r
}

fn bigint_ratio_to_f64(p: &BigInt, q: &BigInt) -> f64 {
    let pf = p.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    let qf = q.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    pf / qf
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    bigint_ratio_to_f64(r.numer(), r.denom())
}

/// Scalar ring used by the simplex solver. `f64` compares against a fixed
/// tolerance; `Rational` compares exactly.
pub trait LpScalar:
    Clone
    + PartialOrd
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + std::fmt::Debug
{
    const EXACT: bool;
    fn lp_zero() -> Self;
    fn lp_one() -> Self;
    fn is_zero_val(&self) -> bool;
    /// Strictly positive beyond the comparison tolerance.
    fn is_positive_val(&self) -> bool;
    fn is_negative_val(&self) -> bool {
        (-self.clone()).is_positive_val()
    }
    fn abs_val(&self) -> Self;
    fn to_f64_lossy(&self) -> f64;
}

impl LpScalar for f64 {
    const EXACT: bool = false;
    fn lp_zero() -> Self {
        0.0
    }
    fn lp_one() -> Self {
        1.0
    }
    fn is_zero_val(&self) -> bool {
        self.abs() <= TOL
    }
    fn is_positive_val(&self) -> bool {
        *self > TOL
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl LpScalar for Rational {
    const EXACT: bool = true;
    fn lp_zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn lp_one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero_val(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive_val(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
}
