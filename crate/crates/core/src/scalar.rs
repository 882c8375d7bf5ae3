//! Scalar abstraction: exact arbitrary-precision rationals and `f64`, plus
//! the combinatorial primitives (Pochhammer, binomial, harmonic) every
//! closed form is built from.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arithmetic mode a matrix or decomposition was built under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    /// Arbitrary-precision rationals; identities hold with zero tolerance.
    Exact,
    /// 64-bit binary floating point; residuals are reported, not assumed zero.
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => write!(f, "exact"),
            ScalarMode::Float => write!(f, "float"),
        }
    }
}

/// Entry type for [`crate::DenseMatrix`]. Implemented by [`ExactScalar`]
/// and `f64`; everything else in the crate is generic over this.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// `num/den`. Panics if `den == 0`; callers pass structural denominators
    /// that are nonzero by construction.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Convert an exact rational into this scalar type (identity for
    /// [`ExactScalar`], nearest double for `f64`).
    fn from_exact(x: &ExactScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Multiplicative inverse; inverting zero is an error.
    fn try_recip(&self) -> Result<Self>;
    /// Entrywise power used by Schur powers: exact for integer exponents in
    /// exact mode, `powf` in float mode, domain error otherwise.
    fn schur_pow(&self, r: f64) -> Result<Self>;
    /// Compare absolute values (pivot selection). NaN orders below everything.
    fn abs_cmp(&self, other: &Self) -> Ordering;
}

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by the underlying representation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    /// Build `num/den`, normalizing sign and reducing. Zero denominator is
    /// an error.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactScalar(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactScalar(BigRational::from_integer(v.into()))
    }

    /// Exact rational value of a finite `f64`.
    pub fn from_f64_exact(v: f64) -> Result<Self> {
        BigRational::from_float(v)
            .map(ExactScalar)
            .ok_or_else(|| Error::Domain(format!("{v} has no exact rational value")))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `self^e` for `e >= 0` (so `0^0 = 1`).
    pub fn pow_u32(&self, e: u32) -> Self {
        ExactScalar(BigRational::new_raw(
            self.0.numer().pow(e),
            self.0.denom().pow(e),
        ))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_integer(v)
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(rhs.0))
            }
        }
    };
}

exact_binop!(Add, add);
exact_binop!(Sub, sub);
exact_binop!(Mul, mul);
exact_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl Scalar for ExactScalar {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    fn one() -> Self {
        ExactScalar::from_integer(1)
    }

    fn from_int(v: i64) -> Self {
        ExactScalar::from_integer(v)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio: zero denominator");
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn abs(&self) -> Self {
        ExactScalar(self.0.abs())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            let n = self.0.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.0.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn try_recip(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactScalar(self.0.recip()))
    }

    fn schur_pow(&self, r: f64) -> Result<Self> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain(format!("Schur exponent {r} must be >= 0")));
        }
        if r.fract() != 0.0 || r > u32::MAX as f64 {
            return Err(Error::Domain(format!(
                "fractional Schur exponent {r} requires float mode"
            )));
        }
        Ok(self.pow_u32(r as u32))
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.0.abs().cmp(&other.0.abs())
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio: zero denominator");
        num as f64 / den as f64
    }

    fn from_exact(x: &ExactScalar) -> Self {
        Scalar::to_f64(x)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn try_recip(&self) -> Result<Self> {
        if *self == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(1.0 / *self)
    }

    fn schur_pow(&self, r: f64) -> Result<Self> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain(format!("Schur exponent {r} must be >= 0")));
        }
        if r.fract() == 0.0 && r <= i32::MAX as f64 {
            return Ok(self.powi(r as i32));
        }
        if *self <= 0.0 {
            return Err(Error::Domain(format!(
                "entry {self} is not strictly positive; fractional exponent {r} undefined"
            )));
        }
        Ok(self.powf(r))
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (f64::abs(*self), f64::abs(*other));
        match (a.is_nan(), b.is_nan()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => a.partial_cmp(&b).expect("non-NaN compare"),
        }
    }
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: i64, k: u32) -> ExactScalar {
    let mut acc = BigInt::from(1);
    for t in 0..k as i64 {
        acc *= BigInt::from(x + t);
    }
    ExactScalar::from_integer(acc)
}

/// Binomial coefficient `C(i, j)`; zero when `j > i`.
pub fn binomial(i: u64, j: u64) -> ExactScalar {
    if j > i {
        return <ExactScalar as Scalar>::zero();
    }
    ExactScalar::from_integer(num::integer::binomial(BigInt::from(i), BigInt::from(j)))
}

/// `n`-th harmonic number `H_n = sum_{i=1..n} 1/i` as an exact rational.
pub fn harmonic(n: u64) -> Result<ExactScalar> {
    if n < 1 {
        return Err(Error::Domain(format!("harmonic({n}): n must be >= 1")));
    }
    let mut acc = <ExactScalar as Scalar>::zero();
    for i in 1..=n as i64 {
        acc = acc + ExactScalar::from_ratio(1, i);
    }
    Ok(acc)
}
