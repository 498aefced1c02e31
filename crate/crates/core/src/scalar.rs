//! Scalar fields used throughout the crate.
//!
//! Exact work happens over [`Rational`] and [`GaussianRational`]; the flow
//! module uses `f64`. Everything linear-algebraic is written against [`Field`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number.
pub type Rational = BigRational;
/// Element of Q(i).
pub type GaussianRational = Complex<BigRational>;
/// Complex double.
pub type C64 = Complex<f64>;

/// A field that the exact and numeric kernels run over.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact and zero tests are decisive.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    /// Absolute value as a double, used for pivoting and tolerances.
    fn magnitude(&self) -> f64;

    /// Zero test: exact for exact fields, tolerance based otherwise.
    fn is_negligible(&self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() < float_tolerance()
        }
    }

    fn to_c64(&self) -> C64;

    /// Rounds a complex double to the nearest element with bounded
    /// denominators, when the field can hold it.
    fn snap(c: C64, max_den: i64) -> Option<Self>;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn real_f64(&self) -> f64 {
        self.to_c64().re
    }
}

/// Zero threshold used by floating point elimination.
pub fn float_tolerance() -> f64 {
    1e-10
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn rational_approx(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if (r.to_f64().unwrap_or(f64::NAN) - x).abs() < 1e-7 * (1.0 + x.abs()) {
        Some(r)
    } else {
        None
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64_lossy(), 0.0)
    }

    fn snap(c: C64, max_den: i64) -> Option<Self> {
        if c.im.abs() > 1e-7 * (1.0 + c.re.abs()) {
            return None;
        }
        rational_approx(c.re, max_den)
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Rational {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for GaussianRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Complex::new(Rational::from_i64(n), Rational::zero())
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Complex::new(Rational::from_frac(n, d), Rational::zero())
    }

    fn from_rational(r: &Rational) -> Self {
        Complex::new(r.clone(), Rational::zero())
    }

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64_lossy(), self.im.to_f64_lossy())
    }

    fn snap(c: C64, max_den: i64) -> Option<Self> {
        Some(Complex::new(rational_approx(c.re, max_den)?, rational_approx(c.im, max_den)?))
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

macro_rules! float_field {
    ($t:ty) => {
        impl Field for $t {
            const EXACT: bool = false;

            fn from_i64(n: i64) -> Self {
                n as $t
            }

            fn from_rational(r: &Rational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn magnitude(&self) -> f64 {
                self.abs() as f64
            }

            fn to_c64(&self) -> C64 {
                C64::new(*self as f64, 0.0)
            }

            fn snap(c: C64, _max_den: i64) -> Option<Self> {
                Some(c.re as $t)
            }
        }
    };
}

float_field!(f64);
float_field!(f32);

impl Field for C64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }

    fn from_rational(r: &Rational) -> Self {
        C64::new(r.to_f64_lossy(), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn snap(c: C64, _max_den: i64) -> Option<Self> {
        Some(c)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

/// Rational from numerator and denominator.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

/// Integer as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// Gaussian rational `re + i im`.
pub fn gq(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

/// `p/q` rendering used in reports.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a decimal literal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Real part of a Gaussian rational if the imaginary part vanishes.
pub fn real_part_exact(z: &GaussianRational) -> Option<Rational> {
    if z.im.is_zero() {
        Some(z.re.clone())
    } else {
        None
    }
}

/// Converts an exact rational to the target field.
pub fn lift<S: Field>(r: &Rational) -> S {
    S::from_rational(r)
}
