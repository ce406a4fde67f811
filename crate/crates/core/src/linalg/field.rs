use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field: the rationals or a prime field `F_p` with `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..1 << 32).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^32")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Modular { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(x))),
            FieldSpec::Prime(p) => Scalar::Modular {
                value: x.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::InvalidField("zero denominator".into()));
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::Prime(p) => {
                let reduce = |x: &BigInt| -> u64 {
                    let m = BigInt::from(*p);
                    let r = ((x % &m) + &m) % &m;
                    r.to_u64().unwrap_or(0)
                };
                let d = reduce(den);
                if d == 0 {
                    return Err(Error::InvalidField(format!("denominator divisible by {p}")));
                }
                let n = Scalar::Modular { value: reduce(num), modulus: *p };
                let d = Scalar::Modular { value: d, modulus: *p };
                Ok(&n * &d.inv())
            }
        }
    }

    /// Parses `"3"`, `"-2/5"` into a field element.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::InvalidField(format!("cannot parse scalar '{s}'")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::InvalidField(format!("cannot parse scalar '{s}'")))?;
        self.from_ratio(&num, &den)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::Prime(p), Scalar::Modular { modulus, .. }) => p == modulus,
            _ => false,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`FieldSpec`]. Prime-field elements carry their modulus;
/// mixing elements of different fields is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
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

    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Rational(_) => Scalar::Rational(BigRational::zero()),
            Scalar::Modular { modulus, .. } => Scalar::Modular { value: 0, modulus: *modulus },
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => {
                assert!(!q.is_zero(), "inverse of zero");
                Scalar::Rational(q.recip())
            }
            Scalar::Modular { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Modular { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus }
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Modular { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
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
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! mixed {
    () => {
        panic!("arithmetic between scalars of different fields")
    };
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                Scalar::Modular { value: (a + b) % modulus, modulus: *modulus }
            }
            _ => mixed!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                Scalar::Modular { value: (a + modulus - b) % modulus, modulus: *modulus }
            }
            _ => mixed!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus }, Scalar::Modular { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                Scalar::Modular { value: a * b % modulus, modulus: *modulus }
            }
            _ => mixed!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => {
                Scalar::Modular { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }
}

impl Scalar {
    /// `self += a * b`, the inner loop of every elimination.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        match (self, a, b) {
            (Scalar::Rational(s), Scalar::Rational(a), Scalar::Rational(b)) => *s += a * b,
            (
                Scalar::Modular { value, modulus },
                Scalar::Modular { value: x, .. },
                Scalar::Modular { value: y, .. },
            ) => *value = (*value + x * y % *modulus) % *modulus,
            _ => mixed!(),
        }
    }

    /// Exact integer value if this is an integral rational or a prime-field residue.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Modular { value, .. } => Some(*value as i64),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = FieldSpec::prime(7).unwrap();
        for x in 1..7 {
            let a = f.from_i64(x);
            assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1).is_err());
    }

    #[test]
    fn parses_fractions() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.parse("-2/4").unwrap(), q.from_ratio(&(-1).into(), &2.into()).unwrap());
        let f = FieldSpec::Prime(5);
        // 1/2 = 3 mod 5
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert!(f.parse("1/5").is_err());
    }
}
