//! Exact coefficient rings.
//!
//! Everything exact in this crate lives over the Gaussian rationals `Q(i)`,
//! or over polynomial rings built on top of them. Rational inputs are the
//! special case with a zero imaginary part.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number (always normalized, positive denominator).
pub type Rat = BigRational;

/// Commutative ring with exact division where it is defined.
///
/// Methods take references so nested polynomial rings do not clone more than
/// they must.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Exact quotient `self / other`. Callers guarantee divisibility; a
    /// non-zero remainder is a logic error and panics.
    fn div_exact(&self, other: &Self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// A ring in which every non-zero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self;
}

/// Gaussian rational `re + i·im` with both parts in `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QI {
    pub re: Rat,
    pub im: Rat,
}

impl QI {
    pub fn new(re: Rat, im: Rat) -> Self {
        QI { re, im }
    }

    pub fn real(re: Rat) -> Self {
        QI { re, im: Rat::zero() }
    }

    pub fn int(n: i64) -> Self {
        QI::real(Rat::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a real Gaussian rational. Panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        QI::real(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        QI::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Largest bit length among the four integers, a cheap size measure.
    pub fn bits(&self) -> u64 {
        self.re
            .numer()
            .bits()
            .max(self.re.denom().bits())
            .max(self.im.numer().bits())
            .max(self.im.denom().bits())
    }
}

/// Rational to double, robust to numerators and denominators beyond `f64` range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Shift both parts down to 1000 bits before converting.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 1000).max(0);
    let shift_d = (db - 1000).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let e = (shift_n - shift_d) as i32;
    libm::scalbn(n / d, e)
}

impl fmt::Debug for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl QI {
    /// Parses `"a"`, `"a/b"`, or a decimal like `"0.25"` into a real value.
    pub fn parse_real(s: &str) -> Option<QI> {
        parse_rat(s).map(QI::real)
    }

    pub fn to_string_pair(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
}

/// Parses an integer, a fraction `p/q`, or a finite decimal.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_abs = ip.trim().trim_start_matches(['-', '+']);
        let ipart: BigInt = if ip_abs.is_empty() { BigInt::zero() } else { ip_abs.parse().ok()? };
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let fpart: BigInt = if fp.is_empty() { BigInt::zero() } else { fp.parse().ok()? };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rat::new(ipart * &scale + fpart, scale);
        return Some(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

impl Ring for QI {
    fn zero() -> Self {
        QI { re: Rat::zero(), im: Rat::zero() }
    }
    fn one() -> Self {
        QI { re: Rat::one(), im: Rat::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QI::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        QI::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return QI::real(&self.re * &o.re);
        }
        QI::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn neg(&self) -> Self {
        QI::new(-self.re.clone(), -self.im.clone())
    }
    fn from_i64(n: i64) -> Self {
        QI::int(n)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

impl Field for QI {
    fn inv(&self) -> Self {
        assert!(!Ring::is_zero(self), "division by zero in Q(i)");
        if self.im.is_zero() {
            return QI::real(self.re.recip());
        }
        let n = self.norm_sqr();
        QI::new(&self.re / &n, -(&self.im / &n))
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (continued fractions). Returns `None` for non-finite input.
pub fn rationalize(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut v = if neg { -x } else { x };
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = libm::floor(v);
        if a > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-13 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    Some(if neg { -r } else { r })
}

/// Floating complex numbers as an (inexact) ring, so that `Poly<Complex64>`
/// reuses the generic polynomial code. `div_exact` is ordinary division.
impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}
