//! Scalar arithmetic shared by every other module.
//!
//! Three backends: exact rationals, exact Gaussian rationals (`re + im*i`
//! with rational parts), and IEEE doubles. The float backend exists for
//! sampling-style sanity checks only; everything verification-grade runs on
//! the exact backends. Mixing backends inside one computation is a caller
//! bug, so the arithmetic operators panic on a mismatch while the checked
//! entry points ([`scalar_arith`], [`Scalar::checked_div`]) report it as an
//! error.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which arithmetic world a [`Scalar`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Rational,
    Gaussian,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Gaussian => "gaussian",
            Backend::Float => "float",
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Float)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A field element. Rationals are kept reduced with a positive denominator
/// (num-rational maintains that canonical form), so `PartialEq` is exact
/// equality on the exact backends.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(BigRational, BigRational),
    Float(f64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rational(_) => Backend::Rational,
            Scalar::Gaussian(..) => Backend::Gaussian,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn zero(backend: Backend) -> Self {
        Scalar::from_int(0, backend)
    }

    pub fn one(backend: Backend) -> Self {
        Scalar::from_int(1, backend)
    }

    pub fn from_int(v: i64, backend: Backend) -> Self {
        match backend {
            Backend::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Backend::Gaussian => Scalar::Gaussian(
                BigRational::from_integer(BigInt::from(v)),
                BigRational::zero(),
            ),
            Backend::Float => Scalar::Float(v as f64),
        }
    }

    pub fn from_ratio(num: i64, den: i64, backend: Backend) -> Self {
        assert!(den != 0, "zero denominator");
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        match backend {
            Backend::Rational => Scalar::Rational(r),
            Backend::Gaussian => Scalar::Gaussian(r, BigRational::zero()),
            Backend::Float => Scalar::Float(num as f64 / den as f64),
        }
    }

    /// Gaussian rational `re + im*i`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar::Gaussian(re, im)
    }

    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Scalar::Gaussian(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gaussian(re, im) => re.is_zero() && im.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Gaussian(re, im) => re.is_one() && im.is_zero(),
            Scalar::Float(f) => *f == 1.0,
        }
    }

    /// Complex conjugation. The identity on rationals and floats.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Gaussian(re, im) => Scalar::Gaussian(re.clone(), -im.clone()),
            other => other.clone(),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.match_backend(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.match_backend(rhs)?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.match_backend(rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.match_backend(rhs)?;
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&Scalar::one(self.backend()) / self)
    }

    pub fn pow(&self, mut e: usize) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.backend());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Embed a rational scalar into a wider backend. Only widening
    /// conversions succeed; a Gaussian value with nonzero imaginary part
    /// cannot become rational.
    pub fn promote(&self, target: Backend) -> Result<Scalar> {
        match (self, target) {
            (s, t) if s.backend() == t => Ok(s.clone()),
            (Scalar::Rational(r), Backend::Gaussian) => {
                Ok(Scalar::Gaussian(r.clone(), BigRational::zero()))
            }
            (Scalar::Rational(r), Backend::Float) => Ok(Scalar::Float(ratio_to_f64(r))),
            (Scalar::Gaussian(re, im), Backend::Rational) if im.is_zero() => {
                Ok(Scalar::Rational(re.clone()))
            }
            (s, t) => Err(Error::BackendMismatch(s.backend().name(), t.name())),
        }
    }

    fn match_backend(&self, rhs: &Scalar) -> Result<()> {
        if self.backend() == rhs.backend() {
            Ok(())
        } else {
            Err(Error::BackendMismatch(
                self.backend().name(),
                rhs.backend().name(),
            ))
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'a> Add for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gaussian(ar, ai), Scalar::Gaussian(br, bi)) => {
                Scalar::Gaussian(ar + br, ai + bi)
            }
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            (a, b) => panic!("backend mismatch: {} + {}", a.backend(), b.backend()),
        }
    }
}

impl<'a> Sub for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gaussian(ar, ai), Scalar::Gaussian(br, bi)) => {
                Scalar::Gaussian(ar * br - ai * bi, ar * bi + ai * br)
            }
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            (a, b) => panic!("backend mismatch: {} * {}", a.backend(), b.backend()),
        }
    }
}

impl<'a> Div for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                assert!(!b.is_zero(), "division by zero");
                Scalar::Rational(a / b)
            }
            (Scalar::Gaussian(ar, ai), Scalar::Gaussian(br, bi)) => {
                let norm = br * br + bi * bi;
                assert!(!norm.is_zero(), "division by zero");
                Scalar::Gaussian(
                    (ar * br + ai * bi) / norm.clone(),
                    (ai * br - ar * bi) / norm,
                )
            }
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a / b),
            (a, b) => panic!("backend mismatch: {} / {}", a.backend(), b.backend()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Gaussian(re, im) => Scalar::Gaussian(-re, -im),
            Scalar::Float(f) => Scalar::Float(-f),
        }
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

/// The four basic operations with checked backend agreement and
/// division.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => f.write_str(&fmt_ratio(r)),
            Scalar::Gaussian(re, im) => {
                if im.is_zero() {
                    f.write_str(&fmt_ratio(re))
                } else if re.is_zero() {
                    write!(f, "{} i", fmt_ratio(im))
                } else if im.is_negative() {
                    write!(f, "{}-{} i", fmt_ratio(re), fmt_ratio(&-im.clone()))
                } else {
                    write!(f, "{}+{} i", fmt_ratio(re), fmt_ratio(im))
                }
            }
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(num))
    }
}

/// Parse the text form into a given backend. Rationals look like `p/q`,
/// Gaussian rationals like `p/q+r/s i` (the `i` suffix marks the imaginary
/// part; a lone `r/s i` is also accepted), floats like `1.25`.
pub fn parse_scalar(s: &str, backend: Backend) -> Result<Scalar> {
    let s = s.trim();
    match backend {
        Backend::Rational => Ok(Scalar::Rational(parse_ratio(s)?)),
        Backend::Float => s
            .parse::<f64>()
            .map(Scalar::Float)
            .map_err(|_| Error::Parse(format!("bad float `{s}`"))),
        Backend::Gaussian => {
            let body = s.trim();
            if let Some(stripped) = body.strip_suffix('i') {
                let stripped = stripped.trim_end();
                // Split re and im at the last top-level + or - (not at index 0).
                let mut split = None;
                for (idx, ch) in stripped.char_indices().skip(1) {
                    if (ch == '+' || ch == '-') && !stripped[..idx].ends_with('/') {
                        split = Some((idx, ch));
                    }
                }
                match split {
                    Some((idx, ch)) => {
                        let re = parse_ratio(&stripped[..idx])?;
                        let im_mag = parse_ratio(stripped[idx + 1..].trim())?;
                        let im = if ch == '-' { -im_mag } else { im_mag };
                        Ok(Scalar::Gaussian(re, im))
                    }
                    None => Ok(Scalar::Gaussian(BigRational::zero(), parse_ratio(stripped)?)),
                }
            } else {
                Ok(Scalar::Gaussian(parse_ratio(body)?, BigRational::zero()))
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Backend is inferred: an `i` suffix means Gaussian, a `.`/`e` means
    /// float, anything else is rational.
    fn from_str(s: &str) -> Result<Scalar> {
        let t = s.trim();
        if t.ends_with('i') {
            parse_scalar(t, Backend::Gaussian)
        } else if t.contains('.') || t.contains('e') || t.contains('E') {
            parse_scalar(t, Backend::Float)
        } else {
            parse_scalar(t, Backend::Rational)
        }
    }
}
