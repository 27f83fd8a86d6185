//! Exact coefficient arithmetic.
//!
//! Two coefficient domains are supported: prime fields `Z/pZ` with `p < 2^32`
//! (so that products of residues fit in a `u64`) and arbitrary-precision
//! rationals. Both live behind [`FieldValue`], which every other module uses
//! for moments, polynomial coefficients, weights and point coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// The coefficient domain of a problem instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

/// Modulus used by the benchmarks and the decoding fixtures.
pub const DEFAULT_PRIME: u64 = 32003;

impl FieldSpec {
    /// Validated prime field. `p` must be prime and below `2^32`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 {
            return Err(FieldError::InvalidModulus(p));
        }
        if !is_prime(p) {
            return Err(FieldError::InvalidModulus(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldSpec::Rational)
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime { p } => Some(*p),
        }
    }

    /// Re-checks the modulus of a spec that came from deserialization.
    pub fn validate(&self) -> Result<(), FieldError> {
        match self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime { p } => FieldSpec::prime(*p).map(|_| ()),
        }
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldValue {
        match self {
            FieldSpec::Rational => FieldValue::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime { p } => FieldValue::Prime(Fp::new(v.rem_euclid(*p as i64) as u64, *p)),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldValue {
        match self {
            FieldSpec::Rational => FieldValue::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Prime { p } => {
                let m = BigInt::from(*p);
                let r = ((v % &m) + &m) % &m;
                FieldValue::Prime(Fp::new(r.to_u64().expect("residue fits"), *p))
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldValue, FieldError> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parses `[+-]digits[/digits]` into a canonical value of this field.
    pub fn parse(&self, text: &str) -> Result<FieldValue, FieldError> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (parse_int(n, text)?, Some(parse_int(d, text)?)),
            None => (parse_int(t, text)?, None),
        };
        let Some(den) = den else {
            return Ok(self.from_bigint(&num));
        };
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match self {
            FieldSpec::Rational => Ok(FieldValue::Rational(BigRational::new(num, den))),
            FieldSpec::Prime { .. } => {
                let d = self.from_bigint(&den);
                if d.is_zero() {
                    return Err(FieldError::FieldMismatch(format!(
                        "denominator of {text:?} vanishes modulo {}",
                        self.modulus().unwrap_or_default()
                    )));
                }
                self.from_bigint(&num).checked_div(&d)
            }
        }
    }

    /// True if `v` belongs to this domain.
    pub fn owns(&self, v: &FieldValue) -> bool {
        match (self, v) {
            (FieldSpec::Rational, FieldValue::Rational(_)) => true,
            (FieldSpec::Prime { p }, FieldValue::Prime(x)) => x.modulus == *p,
            _ => false,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime { p } => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `rational`, `prime` (modulus 32003) and `prime:<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "rational" | "Q" | "q" => Ok(FieldSpec::Rational),
            "prime" => FieldSpec::prime(DEFAULT_PRIME),
            other => {
                let p = other.strip_prefix("prime:").ok_or_else(|| FieldError::Parse(s.to_string()))?;
                let p: u64 = p.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
                FieldSpec::prime(p)
            }
        }
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, FieldError> {
    let s = s.trim();
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FieldError::Parse(whole.to_string()));
    }
    let s = s.strip_prefix('+').unwrap_or(s);
    s.parse::<BigInt>().map_err(|_| FieldError::Parse(whole.to_string()))
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Fp { value, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn pow(self, mut e: u64) -> Fp {
        let mut base = self.value;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            e >>= 1;
        }
        Fp::new(acc, self.modulus)
    }
}

/// An exact scalar. Rationals are kept in lowest terms with a positive
/// denominator, so structural equality is value equality.
///
/// Binary operators panic when the operands come from different domains;
/// values built through one [`FieldSpec`] never mix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    Prime(Fp),
}

impl FieldValue {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldValue::Rational(_) => FieldSpec::Rational,
            FieldValue::Prime(x) => FieldSpec::Prime { p: x.modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_zero(),
            FieldValue::Prime(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(r) => r.is_one(),
            FieldValue::Prime(x) => x.value == 1,
        }
    }

    pub fn zero_like(&self) -> FieldValue {
        self.spec().zero()
    }

    pub fn one_like(&self) -> FieldValue {
        self.spec().one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(r) => Some(r),
            FieldValue::Prime(_) => None,
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<FieldValue, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Rational(r) => FieldValue::Rational(r.recip()),
            // Fermat: a^(p-2) = a^-1 for prime p.
            FieldValue::Prime(x) => FieldValue::Prime(x.pow(x.modulus - 2)),
        })
    }

    pub fn checked_div(&self, rhs: &FieldValue) -> Result<FieldValue, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> FieldValue {
        match self {
            FieldValue::Rational(r) => FieldValue::Rational(num_traits::pow(r.clone(), e as usize)),
            FieldValue::Prime(x) => FieldValue::Prime(x.pow(e as u64)),
        }
    }

    /// `self += a * b`, the inner-loop primitive of every dot product.
    pub fn add_mul(&mut self, a: &FieldValue, b: &FieldValue) {
        match (self, a, b) {
            (FieldValue::Prime(acc), FieldValue::Prime(x), FieldValue::Prime(y)) => {
                debug_assert!(acc.modulus == x.modulus && x.modulus == y.modulus);
                acc.value = (acc.value + x.value * y.value % acc.modulus) % acc.modulus;
            }
            (acc, a, b) => {
                let prod = a * b;
                *acc += &prod;
            }
        }
    }

    /// `self -= a * b`.
    pub fn sub_mul(&mut self, a: &FieldValue, b: &FieldValue) {
        match (self, a, b) {
            (FieldValue::Prime(acc), FieldValue::Prime(x), FieldValue::Prime(y)) => {
                debug_assert!(acc.modulus == x.modulus && x.modulus == y.modulus);
                let m = acc.modulus;
                acc.value = (acc.value + m - x.value * y.value % m) % m;
            }
            (acc, a, b) => {
                let prod = a * b;
                *acc -= &prod;
            }
        }
    }

    /// Integer value, if this is a rational with denominator one.
    pub fn to_integer(&self) -> Option<BigInt> {
        match self {
            FieldValue::Rational(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// Negative rational (always false in prime fields, which carry no order).
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, FieldValue::Rational(r) if r.is_negative())
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldValue::Prime(x) => write!(f, "{}", x.value),
        }
    }
}

fn mismatch(a: &FieldValue, b: &FieldValue) -> ! {
    panic!("field mismatch: {} vs {}", a.spec(), b.spec())
}

impl<'a> Add<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &'a FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            (FieldValue::Prime(a), FieldValue::Prime(b)) if a.modulus == b.modulus => {
                FieldValue::Prime(Fp::new((a.value + b.value) % a.modulus, a.modulus))
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &'a FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a - b),
            (FieldValue::Prime(a), FieldValue::Prime(b)) if a.modulus == b.modulus => {
                FieldValue::Prime(Fp::new((a.value + a.modulus - b.value) % a.modulus, a.modulus))
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &'a FieldValue) -> FieldValue {
        match (self, rhs) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            (FieldValue::Prime(a), FieldValue::Prime(b)) if a.modulus == b.modulus => {
                FieldValue::Prime(Fp::new(a.value * b.value % a.modulus, a.modulus))
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Rational(a) => FieldValue::Rational(-a),
            FieldValue::Prime(a) => FieldValue::Prime(Fp::new((a.modulus - a.value) % a.modulus, a.modulus)),
        }
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: FieldValue) -> FieldValue {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &'a FieldValue) -> FieldValue {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&FieldValue> for FieldValue {
    fn add_assign(&mut self, rhs: &FieldValue) {
        match (&mut *self, rhs) {
            (FieldValue::Prime(a), FieldValue::Prime(b)) if a.modulus == b.modulus => {
                a.value = (a.value + b.value) % a.modulus;
            }
            (FieldValue::Rational(a), FieldValue::Rational(b)) => *a += b,
            _ => mismatch(self, rhs),
        }
    }
}

impl SubAssign<&FieldValue> for FieldValue {
    fn sub_assign(&mut self, rhs: &FieldValue) {
        match (&mut *self, rhs) {
            (FieldValue::Prime(a), FieldValue::Prime(b)) if a.modulus == b.modulus => {
                a.value = (a.value + a.modulus - b.value) % a.modulus;
            }
            (FieldValue::Rational(a), FieldValue::Rational(b)) => *a -= b,
            _ => mismatch(self, rhs),
        }
    }
}

impl MulAssign<&FieldValue> for FieldValue {
    fn mul_assign(&mut self, rhs: &FieldValue) {
        match (&mut *self, rhs) {
            (FieldValue::Prime(a), FieldValue::Prime(b)) if a.modulus == b.modulus => {
                a.value = a.value * b.value % a.modulus;
            }
            (FieldValue::Rational(a), FieldValue::Rational(b)) => *a *= b,
            _ => mismatch(self, rhs),
        }
    }
}

/// Serializes through the textual syntax (`"91/20"`, `"32002"`).
impl Serialize for FieldValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
