//! Two-level numeric tower: exact rationals and plain doubles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Q = BigRational;

/// Rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Commutative ring operations; enough for every band recurrence.
pub trait Ring:
    Clone + Debug + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;

    fn pow(&self, e: usize) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r * self.clone();
        }
        r
    }
}

/// Field operations shared by the exact and float code paths.
///
/// Float mode makes no rounding guarantees beyond those of the
/// individual recurrences; callers state tolerances where they compare.
pub trait Scalar: Ring + PartialEq + Div<Output = Self> + Send + Sync + 'static {
    fn from_i64(n: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_negative(&self) -> bool;
    fn from_q(v: &Q) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_i64(n as i64)
    }
}

impl Ring for Q {
    fn from_int(n: i64) -> Self {
        qi(n)
    }
}

impl Ring for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn pow(&self, e: usize) -> Self {
        self.powi(e as i32)
    }
}

impl Ring for BigInt {
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Scalar for Q {
    fn from_i64(n: i64) -> Self {
        qi(n)
    }
    fn to_f64(&self) -> f64 {
        // numer/denom may individually overflow f64
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
            _ => {
                let shift = self.numer().bits().max(self.denom().bits()) as i64 - 60;
                let n = if shift > 0 { self.numer() >> shift as usize } else { self.numer().clone() };
                let d = if shift > 0 { self.denom() >> shift as usize } else { self.denom().clone() };
                n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(f64::NAN)
            }
        }
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn from_q(v: &Q) -> Self {
        v.clone()
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn from_q(v: &Q) -> Self {
        Scalar::to_f64(v)
    }
}

/// Parse "p/q", an integer, or a decimal literal into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(Q::new(a, b));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp).parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(whole, den);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// "p/q" rendering (integers without denominator).
pub fn fmt_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
