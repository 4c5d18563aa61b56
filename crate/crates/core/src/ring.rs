//! Coefficient rings.
//!
//! Every diagram label and matrix entry lives in a type implementing [`Scalar`].
//! The exact rings are the integers, the residues modulo `N` and the Gaussian
//! rationals; `Complex64` is the approximate ring used by the qudit module.

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, ZwError};
use crate::semantics::SparseMap;
use crate::term::Term;

/// Entries of approximate maps below this modulus are dropped.
pub const PRUNE: f64 = 1e-12;

/// Default comparison tolerance of the approximate complex ring.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RingKind {
    Integers,
    IntegersMod(u64),
    GaussianRationals,
    ComplexApprox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingDescriptor {
    pub kind: RingKind,
    /// Only meaningful for `ComplexApprox`.
    pub tolerance: f64,
}

impl RingDescriptor {
    pub fn is_exact(&self) -> bool {
        self.kind != RingKind::ComplexApprox
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Integers => write!(f, "Z"),
            RingKind::IntegersMod(n) => write!(f, "Z/{n}"),
            RingKind::GaussianRationals => write!(f, "Q(i)"),
            RingKind::ComplexApprox => write!(f, "C(tol={})", self.tolerance),
        }
    }
}

/// A commutative ring usable as label and coefficient type.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn descriptor() -> RingDescriptor;

    fn from_i64(n: i64) -> Self;

    fn parse_literal(text: &str) -> Result<Self>;

    fn to_literal(&self) -> String;

    /// Complex conjugation; the identity on the integers.
    fn conj(&self) -> Result<Self>;

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    /// Whether a sparse structure should drop this value.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Interpretation of a term in dimension `d > 2`. Only the approximate
    /// complex ring supports it.
    fn qudit_interpret(_t: &Term<Self>, _d: usize) -> Result<SparseMap<Self>> {
        Err(ZwError::Unsupported { op: "qudit interpretation", ring: Self::descriptor().to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Sub,
}

/// `Neg` ignores `b`.
pub fn ring_arith<S: Scalar>(op: ArithOp, a: &S, b: &S) -> S {
    match op {
        ArithOp::Add => a.clone() + b.clone(),
        ArithOp::Mul => a.clone() * b.clone(),
        ArithOp::Neg => -a.clone(),
        ArithOp::Sub => a.clone() - b.clone(),
    }
}

pub fn ring_equal<S: Scalar>(a: &S, b: &S, desc: &RingDescriptor) -> bool {
    a.near(b, desc.tolerance)
}

fn literal_err(literal: &str, reason: &str) -> ZwError {
    ZwError::Literal { literal: literal.to_string(), reason: reason.to_string() }
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix('-').or_else(|| num.strip_prefix('+')).unwrap_or(num);
    if !digits(unsigned) || !digits(den) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Splits `a+bi` style text into real and imaginary parts. The imaginary part
/// keeps its sign and is `None` when absent; an empty coefficient means 1.
fn split_gaussian(text: &str) -> (String, Option<String>) {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return (s, None);
    };
    let bytes = body.as_bytes();
    let mut cut = None;
    for (k, &b) in bytes.iter().enumerate().skip(1).rev() {
        if (b == b'+' || b == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            cut = Some(k);
            break;
        }
    }
    match cut {
        Some(k) => (body[..k].to_string(), Some(body[k..].to_string())),
        None => ("0".to_string(), Some(body.to_string())),
    }
}

fn unit_coefficient(text: &str) -> Option<&'static str> {
    match text {
        "" | "+" => Some("1"),
        "-" => Some("-1"),
        _ => None,
    }
}

impl Scalar for BigInt {
    fn descriptor() -> RingDescriptor {
        RingDescriptor { kind: RingKind::Integers, tolerance: 0.0 }
    }

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        let (re, im) = split_gaussian(text);
        if im.is_some() {
            return Err(literal_err(text, "imaginary part in the integers"));
        }
        let r = parse_rational(&re).ok_or_else(|| literal_err(text, "not a number"))?;
        if !r.is_integer() {
            return Err(literal_err(text, "not an integer"));
        }
        Ok(r.to_integer())
    }

    fn to_literal(&self) -> String {
        self.to_string()
    }

    fn conj(&self) -> Result<Self> {
        Ok(self.clone())
    }
}

/// Residues modulo `N`, always stored in `[0, N)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zn<const N: u64>(u64);

impl<const N: u64> Zn<N> {
    pub fn new(v: i128) -> Self {
        assert!(N >= 2, "modulus must be at least 2");
        Zn(v.rem_euclid(N as i128) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn inverse(self) -> Option<Self> {
        // extended Euclid on (value, N)
        let (mut r0, mut r1) = (N as i128, self.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| Zn::new(t0))
    }
}

impl<const N: u64> Debug for Zn<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.0, N)
    }
}

impl<const N: u64> Add for Zn<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Zn::new(self.0 as i128 + o.0 as i128)
    }
}

impl<const N: u64> Sub for Zn<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Zn::new(self.0 as i128 - o.0 as i128)
    }
}

impl<const N: u64> Mul for Zn<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Zn::new(self.0 as i128 * o.0 as i128)
    }
}

impl<const N: u64> Neg for Zn<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Zn::new(-(self.0 as i128))
    }
}

impl<const N: u64> Zero for Zn<N> {
    fn zero() -> Self {
        Zn::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const N: u64> One for Zn<N> {
    fn one() -> Self {
        Zn::new(1)
    }
}

impl<const N: u64> Scalar for Zn<N> {
    fn descriptor() -> RingDescriptor {
        RingDescriptor { kind: RingKind::IntegersMod(N), tolerance: 0.0 }
    }

    fn from_i64(n: i64) -> Self {
        Zn::new(n as i128)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        let (re, im) = split_gaussian(text);
        if im.is_some() {
            return Err(literal_err(text, "imaginary part in a residue ring"));
        }
        let r = parse_rational(&re).ok_or_else(|| literal_err(text, "not a number"))?;
        let modulus = BigInt::from(N);
        let reduce = |b: &BigInt| {
            let m = ((b % &modulus) + &modulus) % &modulus;
            Zn::new(m.to_i128().unwrap_or(0))
        };
        let den = reduce(r.denom()).inverse().ok_or_else(|| literal_err(text, "denominator not invertible"))?;
        Ok(reduce(r.numer()) * den)
    }

    fn to_literal(&self) -> String {
        self.0.to_string()
    }

    fn conj(&self) -> Result<Self> {
        Err(ZwError::Unsupported { op: "conjugate", ring: Self::descriptor().to_string() })
    }
}

/// Exact Gaussian rationals `a + b i`.
pub type GaussianRational = Complex<BigRational>;

fn rational_literal(r: &BigRational) -> String {
    r.to_string()
}

impl Scalar for GaussianRational {
    fn descriptor() -> RingDescriptor {
        RingDescriptor { kind: RingKind::GaussianRationals, tolerance: 0.0 }
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    fn parse_literal(text: &str) -> Result<Self> {
        let (re, im) = split_gaussian(text);
        let bad = || literal_err(text, "not a Gaussian rational");
        let re = if re.is_empty() { BigRational::zero() } else { parse_rational(&re).ok_or_else(bad)? };
        let im = match im {
            None => BigRational::zero(),
            Some(c) => parse_rational(unit_coefficient(&c).unwrap_or(&c)).ok_or_else(bad)?,
        };
        Ok(Complex::new(re, im))
    }

    fn to_literal(&self) -> String {
        let imag = |c: &BigRational| {
            if c.is_one() {
                "i".to_string()
            } else if (-c).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", rational_literal(c))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => rational_literal(&self.re),
            (true, false) => imag(&self.im),
            (false, false) => {
                let im = imag(&self.im);
                let sign = if self.im.is_negative() { "" } else { "+" };
                format!("{}{}{}", rational_literal(&self.re), sign, im)
            }
        }
    }

    fn conj(&self) -> Result<Self> {
        Ok(Complex::conj(self))
    }
}

fn parse_real(text: &str) -> Option<f64> {
    if let Some(r) = parse_rational(text) {
        return r.to_f64();
    }
    text.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn float_literal(x: f64) -> String {
    // normalise negative zero so output is deterministic
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

impl Scalar for Complex64 {
    fn descriptor() -> RingDescriptor {
        RingDescriptor { kind: RingKind::ComplexApprox, tolerance: DEFAULT_TOL }
    }

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        let (re, im) = split_gaussian(text);
        let bad = || literal_err(text, "not a complex number");
        let re = if re.is_empty() { 0.0 } else { parse_real(&re).ok_or_else(bad)? };
        let im = match im {
            None => 0.0,
            Some(c) => parse_real(unit_coefficient(&c).unwrap_or(&c)).ok_or_else(bad)?,
        };
        Ok(Complex64::new(re, im))
    }

    fn to_literal(&self) -> String {
        if self.im == 0.0 {
            float_literal(self.re)
        } else if self.im < 0.0 {
            format!("{}-{}i", float_literal(self.re), float_literal(-self.im))
        } else {
            format!("{}+{}i", float_literal(self.re), float_literal(self.im))
        }
    }

    fn conj(&self) -> Result<Self> {
        Ok(Complex64::conj(self))
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }

    fn is_negligible(&self) -> bool {
        self.norm() <= PRUNE
    }

    fn qudit_interpret(t: &Term<Self>, d: usize) -> Result<SparseMap<Self>> {
        let p = crate::qudit::QParams::new(d, DEFAULT_TOL)?;
        crate::qudit::interpret(t, &p)
    }
}
