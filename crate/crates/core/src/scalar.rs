//! Exact scalars: arbitrary-precision rationals or residues modulo an odd prime.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Builds `F_p`, rejecting `p = 2` and composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Modular { value: reduce_i128(n as i128, p), p },
        }
    }

    /// Maps the rational `num/den` into the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Imports an exact rational, reducing modulo `p` when needed.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            Field::Rationals => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let num = q.numer().mod_floor(&m).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&m).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let value = mul_mod(num, pow_mod(den, p - 2, p), p);
                Ok(Scalar::Modular { value, p })
            }
        }
    }

    /// Parses a scalar written as `n`, `n/d` or `k mod p` and places it in this field.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let s: Scalar = text.parse()?;
        match (&s, self) {
            (Scalar::Rational(q), _) => self.from_rational(q),
            (Scalar::Modular { p, .. }, Field::Prime(fp)) if p == fp => Ok(s),
            _ => Err(Error::FieldMismatch(format!("{text} does not belong to {self}"))),
        }
    }

    /// A square root of `-1` if the field has one; for `F_p` the smaller representative.
    pub fn sqrt_minus_one(&self) -> Option<Scalar> {
        match *self {
            Field::Rationals => None,
            Field::Prime(p) => {
                if p % 4 != 1 {
                    return None;
                }
                let half = (p - 1) / 2;
                let c = (2..p).find(|&c| pow_mod(c, half, p) == p - 1)?;
                let i = pow_mod(c, (p - 1) / 4, p);
                Some(Scalar::Modular { value: i.min(p - i), p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| Error::Parse(format!("unknown field '{s}'")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field '{s}'")))?;
        Field::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Field, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field element. Both operands of a binary operation must live in the same field;
/// the `checked_*` methods report a mismatch, the operator impls panic on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Modular { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{} vs {}", self.field(), other.field())))
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        self.same_field(o)?;
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, p }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular { value: add_mod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        self.same_field(o)?;
        Ok(match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, p }, Scalar::Modular { value: b, .. }) => {
                Scalar::Modular { value: mul_mod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        self.checked_mul(&o.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, p } => Scalar::Modular { value: pow_mod(*value, p - 2, *p), p: *p },
        })
    }

    /// Raises to an integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.field().one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Field arithmetic as named operations, used by the command-line front end.
    pub fn arith(op: &str, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        match op {
            "add" => a.checked_add(b),
            "sub" => a.checked_sub(b),
            "mul" => a.checked_mul(b),
            "div" => a.checked_div(b),
            other => Err(Error::Parse(format!("unknown operation '{other}'"))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { value, p } => write!(f, "{value} mod {p}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;
    /// Accepts `n`, `n/d` (rationals) and `k mod p` (residues).
    fn from_str(s: &str) -> Result<Scalar> {
        let t = s.trim();
        let bad = || Error::Parse(format!("malformed scalar '{s}'"));
        if let Some((k, p)) = t.split_once("mod") {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let field = Field::prime(p)?;
            let k: BigInt = k.trim().parse().map_err(|_| bad())?;
            return field.from_rational(&BigRational::from_integer(k));
        }
        let q = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(t.parse::<BigInt>().map_err(|_| bad())?),
        };
        Ok(Scalar::Rational(q))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Modular { value, p } => Scalar::Modular { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$checked(o).expect("scalars from different fields")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            (Scalar::Modular { value, p }, Scalar::Modular { value: b, p: q }) if p == q => {
                *value = add_mod(*value, *b, *p)
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self += &-o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

/// Sign `(-1)^k` as a scalar of `field`.
pub fn sign(field: Field, negative: bool) -> Scalar {
    if negative {
        field.from_i64(-1)
    } else {
        field.one()
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn reduce_i128(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// True for negative rationals; residues are never negative.
pub(crate) fn is_negative(s: &Scalar) -> bool {
    match s {
        Scalar::Rational(q) => q.is_negative(),
        Scalar::Modular { .. } => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_characteristic_two_and_composites() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(7).is_ok());
    }

    #[test]
    fn rational_arithmetic() {
        let q = Field::Rationals;
        let a = q.from_ratio(1, 2).unwrap();
        let b = q.from_ratio(1, 3).unwrap();
        assert_eq!((&a + &b).to_string(), "5/6");
        assert_eq!(a.checked_div(&b).unwrap().to_string(), "3/2");
        assert!(a.checked_div(&q.zero()).is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!(three.inv().unwrap(), f.from_i64(5));
        assert_eq!((&three * &f.from_i64(5)).to_string(), "1 mod 7");
        assert_eq!(f.from_i64(-1).to_string(), "6 mod 7");
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Field::Rationals.one();
        let b = Field::prime(5).unwrap().one();
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn square_roots_of_minus_one() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.sqrt_minus_one(), Some(f5.from_i64(2)));
        assert_eq!(Field::prime(7).unwrap().sqrt_minus_one(), None);
        assert_eq!(Field::Rationals.sqrt_minus_one(), None);
        // exhaustive comparison on small primes
        for p in [3u64, 5, 11, 13, 17, 29, 31, 37] {
            let f = Field::prime(p).unwrap();
            let brute = (0..p).find(|x| (x * x) % p == p - 1);
            match f.sqrt_minus_one() {
                Some(Scalar::Modular { value, .. }) => {
                    assert_eq!((value * value) % p, p - 1);
                    assert!(brute.is_some());
                }
                _ => assert!(brute.is_none()),
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for t in ["3/2", "-7", "0", "4 mod 5"] {
            let s: Scalar = t.parse().unwrap();
            assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
        }
        assert_eq!(Field::prime(5).unwrap().parse("1/2").unwrap().to_string(), "3 mod 5");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("1 mod 4".parse::<Scalar>().is_err());
    }
}
