//! Exact scalars in `Q` and in real quadratic fields `Q(sqrt d)`.
//!
//! A [`QField`] is `p/q + (r/s)*sqrt(d)` kept in normal form after every
//! operation: both rational parts reduced, `d` square-free and `> 1` whenever
//! the surd coefficient is nonzero, and `d = 1` for pure rationals. Equality
//! is therefore structural.
//!
//! Text format: `p/q` for rationals and `p/q+r/s*sqrt(d)` (or
//! `p/q-r/s*sqrt(d)` for a negative surd coefficient), no spaces. The
//! denominator is always written, so `1` is emitted as `1/1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact element of `Q(sqrt d)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QField {
    rat: BigRational,
    irr: BigRational,
    d: u64,
}

/// Splits `n` into `(k, m)` with `n = k^2 * m` and `m` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut m = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= p;
        }
        if e % 2 == 1 {
            m *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (k, m * n)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QField {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n / d`. Panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(ratio(n, d))
    }

    pub fn from_rational(rat: BigRational) -> Self {
        QField { rat, irr: BigRational::zero(), d: 1 }
    }

    /// `rat + irr * sqrt(radicand)`, normalizing square factors out of the
    /// radicand. A perfect-square radicand folds into the rational part.
    pub fn new(rat: BigRational, irr: BigRational, radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Ok(Self::from_rational(rat));
        }
        let (k, m) = square_free_split(radicand);
        let irr = irr * BigRational::from_integer(BigInt::from(k));
        if m == 1 {
            return Ok(Self::from_rational(rat + irr));
        }
        Ok(Self::normalized(rat, irr, m))
    }

    /// `sqrt(n)` as an exact element.
    pub fn sqrt_of(n: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), n).expect("radicand is nonnegative")
    }

    fn normalized(rat: BigRational, irr: BigRational, d: u64) -> Self {
        if irr.is_zero() {
            QField { rat, irr, d: 1 }
        } else {
            QField { rat, irr, d }
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.irr
    }

    /// The square-free `d` of the field this value lives in; `None` for rationals.
    pub fn radicand(&self) -> Option<u64> {
        (!self.irr.is_zero()).then_some(self.d)
    }

    /// Exact irrationality certificate: a nonzero surd coefficient over a
    /// square-free `d > 1` can never be rational.
    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rat.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    /// Exact sign, `-1`, `0` or `+1`, decided by comparing squares.
    pub fn sign(&self) -> i32 {
        let sa = sgn(&self.rat);
        let sb = sgn(&self.irr);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: |rat| vs |irr| sqrt(d); never equal for d square-free
        let lhs = &self.rat * &self.rat;
        let rhs = &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.d));
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    fn join_field(&self, other: &QField) -> Result<u64> {
        match (self.irr.is_zero(), other.irr.is_zero()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(Error::MixedField(self.d, other.d)),
        }
    }

    /// Checks that every value lives in one common quadratic field and returns
    /// its radicand (`1` when all are rational).
    pub fn common_field<'a, I: IntoIterator<Item = &'a QField>>(values: I) -> Result<u64> {
        let mut d = 1;
        for v in values {
            if let Some(r) = v.radicand() {
                if d != 1 && d != r {
                    return Err(Error::MixedField(d, r));
                }
                d = r;
            }
        }
        Ok(d)
    }

    fn rational(rat: BigRational) -> Self {
        QField { rat, irr: BigRational::zero(), d: 1 }
    }

    pub fn checked_add(&self, other: &QField) -> Result<QField> {
        if self.irr.is_zero() && other.irr.is_zero() {
            return Ok(Self::rational(&self.rat + &other.rat));
        }
        let d = self.join_field(other)?;
        Ok(Self::normalized(&self.rat + &other.rat, &self.irr + &other.irr, d))
    }

    pub fn checked_sub(&self, other: &QField) -> Result<QField> {
        if self.irr.is_zero() && other.irr.is_zero() {
            return Ok(Self::rational(&self.rat - &other.rat));
        }
        let d = self.join_field(other)?;
        Ok(Self::normalized(&self.rat - &other.rat, &self.irr - &other.irr, d))
    }

    pub fn checked_mul(&self, other: &QField) -> Result<QField> {
        if self.irr.is_zero() && other.irr.is_zero() {
            return Ok(Self::rational(&self.rat * &other.rat));
        }
        let d = self.join_field(other)?;
        let dd = BigRational::from_integer(BigInt::from(d));
        let rat = &self.rat * &other.rat + &self.irr * &other.irr * dd;
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Ok(Self::normalized(rat, irr, d))
    }

    pub fn checked_div(&self, other: &QField) -> Result<QField> {
        if self.irr.is_zero() && other.irr.is_zero() {
            if other.rat.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Self::rational(&self.rat / &other.rat));
        }
        self.join_field(other)?;
        let inv = other.checked_recip()?;
        self.checked_mul(&inv)
    }

    /// Galois conjugate `p/q - (r/s) sqrt(d)`.
    pub fn conjugate(&self) -> QField {
        Self::normalized(self.rat.clone(), -self.irr.clone(), self.d)
    }

    /// Field norm `x * conj(x)`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn checked_recip(&self) -> Result<QField> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::normalized(&self.rat / &n, -(&self.irr / &n), self.d))
    }

    pub fn abs(&self) -> QField {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_cmp(&self, other: &QField) -> Result<Ordering> {
        if self.irr.is_zero() && other.irr.is_zero() {
            return Ok(self.rat.cmp(&other.rat));
        }
        Ok(self.checked_sub(other)?.sign().cmp(&0))
    }

    /// Exact `floor`, using an integer square root of the scaled surd part.
    pub fn floor(&self) -> BigInt {
        let (p, q) = (self.rat.numer(), self.rat.denom());
        let (r, s) = (self.irr.numer(), self.irr.denom());
        let n = p * s;
        let m = r * q;
        let den = q * s;
        if m.is_zero() {
            return n.div_floor(&den);
        }
        // |m| sqrt(d) lies strictly between k and k + 1
        let k = (&m * &m * BigInt::from(self.d)).sqrt();
        if m.is_positive() {
            (n + k).div_floor(&den)
        } else {
            (n - k - BigInt::one()).div_floor(&den)
        }
    }

    /// Decimal expansion with at most `digits` fractional digits, rounded
    /// half-to-even, trailing zeros trimmed.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = QField::from_rational(BigRational::from_integer(BigInt::from(10u32).pow(digits)));
        let y = self * &scale;
        let mut n = y.floor();
        let frac = &y - &QField::from_rational(BigRational::from_integer(n.clone()));
        let twice = &frac + &frac;
        match twice.checked_cmp(&QField::one()).expect("same field") {
            Ordering::Greater => n += 1,
            Ordering::Equal if n.is_odd() => n += 1,
            _ => {}
        }
        let negative = n.is_negative();
        let mut body = n.abs().to_string();
        let width = digits as usize + 1;
        if body.len() < width {
            body = format!("{}{}", "0".repeat(width - body.len()), body);
        }
        let (int_part, frac_part) = body.split_at(body.len() - digits as usize);
        let frac_part = frac_part.trim_end_matches('0');
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(int_part);
        if !frac_part.is_empty() {
            out.push('.');
            out.push_str(frac_part);
        }
        if out == "-0" {
            out = "0".into();
        }
        out
    }

    /// Floating-point approximation, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        let i = self.irr.to_f64().unwrap_or(f64::NAN);
        r + i * (self.d as f64).sqrt()
    }
}

fn sgn(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn fmt_ratio(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl fmt::Display for QField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_ratio(&self.rat))?;
        if !self.irr.is_zero() {
            if self.irr.is_negative() {
                write!(f, "-{}*sqrt({})", fmt_ratio(&-self.irr.clone()), self.d)
            } else {
                write!(f, "+{}*sqrt({})", fmt_ratio(&self.irr), self.d)
            }
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for QField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if n.is_empty() || d.is_empty() || d.starts_with(['-', '+']) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl FromStr for QField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let Some(pos) = s.find("*sqrt(") else {
            return parse_ratio(s).map(QField::from_rational).ok_or_else(bad);
        };
        let radicand = s[pos + 6..].strip_suffix(')').ok_or_else(bad)?;
        let radicand: u64 = radicand.parse().map_err(|_| bad())?;
        let head = &s[..pos];
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-'));
        let (rat, coeff) = match split {
            Some(i) => {
                let coeff = if bytes[i] == b'+' { &head[i + 1..] } else { &head[i..] };
                (parse_ratio(&head[..i]).ok_or_else(bad)?, coeff)
            }
            None => (BigRational::zero(), head),
        };
        let coeff = parse_ratio(coeff).ok_or_else(bad)?;
        QField::new(rat, coeff, radicand)
    }
}

impl Serialize for QField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QField {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = QField;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a scalar string like \"p/q\" or \"p/q+r/s*sqrt(d)\", or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<QField, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<QField, E> {
                Ok(QField::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<QField, E> {
                Ok(QField::from_rational(BigRational::from_integer(BigInt::from(v))))
            }
        }
        deserializer.deserialize_any(V)
    }
}

impl PartialOrd for QField {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on a single field. Panics when comparing across fields.
impl Ord for QField {
    fn cmp(&self, other: &Self) -> Ordering {
        self.checked_cmp(other).expect("comparison across quadratic fields")
    }
}

impl From<i64> for QField {
    fn from(n: i64) -> Self {
        QField::from_int(n)
    }
}

impl From<BigRational> for QField {
    fn from(r: BigRational) -> Self {
        QField::from_rational(r)
    }
}

impl From<BigInt> for QField {
    fn from(n: BigInt) -> Self {
        QField::from_rational(BigRational::from_integer(n))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QField> for &QField {
            type Output = QField;
            fn $method(self, rhs: &QField) -> QField {
                self.$checked(rhs).expect(concat!("QField::", stringify!($method)))
            }
        }
        impl $tr<QField> for QField {
            type Output = QField;
            fn $method(self, rhs: QField) -> QField {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QField> for QField {
            type Output = QField;
            fn $method(self, rhs: &QField) -> QField {
                (&self).$method(rhs)
            }
        }
        impl $tr<QField> for &QField {
            type Output = QField;
            fn $method(self, rhs: QField) -> QField {
                self.$method(&rhs)
            }
        }
    };
}

// Operators panic on division by zero or mixed radicands; the `checked_*`
// methods report those as errors.
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &QField {
    type Output = QField;
    fn neg(self) -> QField {
        QField::normalized(-self.rat.clone(), -self.irr.clone(), self.d)
    }
}

impl Neg for QField {
    type Output = QField;
    fn neg(self) -> QField {
        -&self
    }
}

impl std::iter::Sum for QField {
    fn sum<I: Iterator<Item = QField>>(iter: I) -> QField {
        iter.fold(QField::zero(), |a, b| a + b)
    }
}
