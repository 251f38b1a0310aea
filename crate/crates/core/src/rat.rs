//! Exact rational scalars, points and affine functionals.
//!
//! Everything in this crate is computed over the rationals. [`Rat`] is a thin
//! newtype over [`BigRational`] that adds the text format used by every file
//! format (`"p/q"` or `"p"`, lowest terms, sign on the numerator).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// `p/q`, reduced. Panics when `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_big(p: BigInt, q: BigInt) -> Self {
        assert!(!q.is_zero(), "zero denominator");
        Rat(BigRational::new(p, q))
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
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

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn floor(&self) -> Self {
        Rat(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Rat(self.0.ceil())
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    /// The value as an `i64`, if it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Lossy conversion for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn half(&self) -> Self {
        Rat(&self.0 / BigInt::from(2))
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n as i64)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed rational {s:?}"));
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let digits = |t: &str, signed: bool| {
            let body = if signed {
                t.strip_prefix(['-', '+']).unwrap_or(t)
            } else {
                t
            };
            !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
        };
        if !digits(p, true) || !digits(q, false) {
            return Err(bad());
        }
        let p: BigInt = p.trim_start_matches('+').parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat(BigRational::new(p, q)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Shorthand used heavily in tests and examples.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

/// A point (or vector) of ℚⁿ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<Rat>);

impl Point {
    pub fn new(coords: Vec<Rat>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Point(vec![Rat::zero(); n])
    }

    /// The standard basis vector `e_i` in ℚⁿ.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut p = Point::zeros(n);
        p.0[i] = Rat::one();
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rat) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + t * dir`.
    pub fn along(&self, dir: &Point, t: &Rat) -> Point {
        Point(
            self.0
                .iter()
                .zip(&dir.0)
                .map(|(a, d)| a + &(d * t))
                .collect(),
        )
    }

    pub fn dot(&self, other: &Point) -> Rat {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `t * x + (1 - t) * y`.
    pub fn lerp(t: &Rat, x: &Point, y: &Point) -> Point {
        let s = Rat::one() - t;
        Point(x.0.iter().zip(&y.0).map(|(a, b)| a * t + b * &s).collect())
    }

    pub fn ensure_dim(&self, n: usize) -> Result<()> {
        if self.dim() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: n,
                found: self.dim(),
            })
        }
    }
}

impl Index<usize> for Point {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Comma-separated rationals, e.g. `"1/2,-3,0"`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }
}

/// `x ↦ slope · x + constant`.
///
/// Ordering is lexicographic on `(slope, constant)`; every tie-break in the
/// crate relies on it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineFunctional {
    pub slope: Point,
    #[serde(rename = "const")]
    pub constant: Rat,
}

impl AffineFunctional {
    pub fn new(slope: Point, constant: Rat) -> Self {
        AffineFunctional { slope, constant }
    }

    /// Integer slope and constant, for literals.
    pub fn from_ints(slope: &[i64], constant: i64) -> Self {
        AffineFunctional::new(Point::from_ints(slope), Rat::from_int(constant))
    }

    pub fn constant_fn(n: usize, c: Rat) -> Self {
        AffineFunctional::new(Point::zeros(n), c)
    }

    pub fn dim(&self) -> usize {
        self.slope.dim()
    }

    pub fn eval(&self, x: &Point) -> Result<Rat> {
        x.ensure_dim(self.dim())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> Rat {
        self.slope.dot(x) + &self.constant
    }

    /// The linear part applied to a direction.
    pub fn slope_at(&self, z: &Point) -> Rat {
        self.slope.dot(z)
    }

    pub fn sub(&self, other: &AffineFunctional) -> AffineFunctional {
        AffineFunctional::new(
            self.slope.sub(&other.slope),
            &self.constant - &other.constant,
        )
    }

    pub fn add(&self, other: &AffineFunctional) -> AffineFunctional {
        AffineFunctional::new(
            self.slope.add(&other.slope),
            &self.constant + &other.constant,
        )
    }

    pub fn negate(&self) -> AffineFunctional {
        AffineFunctional::new(self.slope.scale(&Rat::from_int(-1)), -&self.constant)
    }

    pub fn classify(&self) -> IntegralityClass {
        classify_functional(self)
    }
}

impl fmt::Display for AffineFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "w"];
        let mut first = true;
        for (i, a) in self.slope.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let var = names
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("x{}", i + 1));
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = a.abs();
            if mag == Rat::one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() {
                "-"
            } else {
                "+"
            };
            write!(f, " {sign} {}", self.constant.abs())
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for AffineFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// How integral a functional (or function) is.
///
/// Ordered from most to least restrictive: `Integral < TransIntegral < General`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegralityClass {
    /// Integer slope and integer constant.
    Integral,
    /// Integer slope, any rational constant.
    TransIntegral,
    General,
}

pub fn eval_functional(lambda: &AffineFunctional, x: &Point) -> Result<Rat> {
    lambda.eval(x)
}

pub fn classify_functional(lambda: &AffineFunctional) -> IntegralityClass {
    if !lambda.slope.0.iter().all(Rat::is_integer) {
        IntegralityClass::General
    } else if lambda.constant.is_integer() {
        IntegralityClass::Integral
    } else {
        IntegralityClass::TransIntegral
    }
}

/// The arithmetic behind a membership decision, kept for witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipComputation {
    pub value: Rat,
    pub point: Point,
    /// lcm of the coordinate denominators.
    pub lcm: Rat,
    /// gcd(L, L·x₁, …, L·xₙ).
    pub gcd: Rat,
    /// `value · L / g`; membership holds iff this is an integer.
    pub scaled: Rat,
    pub member: bool,
}

/// Decides `v ∈ ℤ + ℤx₁ + ⋯ + ℤxₙ`, showing the work.
///
/// With `L` the lcm of the coordinate denominators, the group equals
/// `(g/L)ℤ` where `g = gcd(L, L·x₁, …, L·xₙ)`.
pub fn membership_computation(v: &Rat, x: &Point) -> MembershipComputation {
    let lcm = x.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let gcd = x.0.iter().fold(lcm.clone(), |acc, c| {
        let scaled = c.numer() * (&lcm / c.denom());
        acc.gcd(&scaled)
    });
    let scaled = v * &Rat::from_big(lcm.clone(), gcd.clone());
    MembershipComputation {
        value: v.clone(),
        point: x.clone(),
        member: scaled.is_integer(),
        lcm: Rat::from_bigint(lcm),
        gcd: Rat::from_bigint(gcd),
        scaled,
    }
}

pub fn group_membership(v: &Rat, x: &Point) -> bool {
    membership_computation(v, x).member
}
