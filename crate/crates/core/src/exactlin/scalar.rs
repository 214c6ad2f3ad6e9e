use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ground field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// GF(p) for a prime `p < 2^31`.
    Prime(u64),
    /// The rationals, with arbitrary-precision numerators and denominators.
    Rational,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(Field::DEFAULT_PRIME)
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

impl Field {
    pub const DEFAULT_PRIME: u64 = 32003;

    pub fn gfp(p: u64) -> Result<Field> {
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("modulus {p} too large (must be < 2^31)")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod {
                    value: r.to_u64().expect("residue fits"),
                    p,
                }
            }
            Field::Rational => Scalar::Rat(BigRational::from_integer(v.clone())),
        }
    }

    /// Maps `num/den` into the field; fails when `den` vanishes in it.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        self.from_bigint(num).checked_div(&d)
    }

    /// Parses `"a"` or `"a/b"` with optional sign.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                self.from_fraction(&n, &d)
            }
            None => Ok(self.from_bigint(&BigInt::from_str(s).map_err(|_| bad())?)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "gfp:{p}"),
            Field::Rational => write!(f, "rational"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rational" {
            return Ok(Field::Rational);
        }
        if s == "gfp" {
            return Ok(Field::default());
        }
        match s.strip_prefix("gfp:") {
            Some(p) => Field::gfp(
                p.parse()
                    .map_err(|_| Error::InvalidField(format!("bad modulus in {s:?}")))?,
            ),
            None => Err(Error::InvalidField(format!("expected gfp:P or rational, got {s:?}"))),
        }
    }
}

/// An exact field element in canonical form.
///
/// Residues are kept in `[0, p)`; rationals are reduced with a positive
/// denominator, so derived equality is field equality. Arithmetic between
/// scalars of different fields is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, p: u64 },
    Rat(BigRational),
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // a^(p-2) mod p
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime(*p),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: inv_mod(*value, *p),
                p: *p,
            },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    /// Image of a rational under `Z_(p) -> GF(p)`.
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Mod { p: q, .. } if *q == p => Ok(self.clone()),
            Scalar::Mod { p: q, .. } => Err(Error::FieldMismatch(
                format!("gfp:{q}"),
                format!("gfp:{p}"),
            )),
            Scalar::Rat(r) => Field::Prime(p).from_fraction(r.numer(), r.denom()),
        }
    }

    /// Exact string: the residue for GF(p), `"num/den"` for rationals.
    pub fn to_exact_string(&self) -> String {
        match self {
            Scalar::Mod { value, .. } => value.to_string(),
            Scalar::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
        }
    }

    /// True when the printed form starts with a minus sign.
    pub(crate) fn is_negative_literal(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }

    fn check_same(&self, rhs: &Scalar) {
        let (a, b) = (self.field(), rhs.field());
        assert!(a == b, "scalar field mismatch: {a} vs {b}");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + p - b) % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: a * b % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (p - value) % p,
                p: *p,
            },
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let f = Field::Prime(7);
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!(f.from_i64(15), f.from_i64(1));
        let q = Field::Rational;
        assert_eq!(q.parse_scalar("2/-4").unwrap(), q.parse_scalar("-1/2").unwrap());
        assert_eq!(q.parse_scalar("-3/6").unwrap().to_exact_string(), "-1/2");
    }

    #[test]
    fn inverses_and_division_by_zero() {
        let f = Field::default();
        for v in [1i64, 2, 3, 1000, 32002] {
            let x = f.from_i64(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Field::Rational.zero().inv(), Err(Error::DivisionByZero));
        assert!(Field::Prime(5).parse_scalar("1/5").is_err());
        assert_eq!(Field::Prime(5).parse_scalar("3/2").unwrap(), Field::Prime(5).from_i64(4));
    }

    #[test]
    fn field_descriptor_parsing() {
        assert_eq!("gfp:32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert_eq!("rational".parse::<Field>().unwrap(), Field::Rational);
        assert!("gfp:32004".parse::<Field>().is_err());
        assert!("real".parse::<Field>().is_err());
        assert!(Field::gfp(1).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let q = Field::Rational;
        let x = q.parse_scalar("3/4").unwrap();
        let f = Field::Prime(7);
        assert_eq!(x.reduce_mod(7).unwrap(), &f.from_i64(3) * &f.from_i64(4).inv().unwrap());
        assert!(q.parse_scalar("1/7").unwrap().reduce_mod(7).is_err());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixed_fields_panic() {
        let _ = Field::Prime(5).one() + Field::Rational.one();
    }
}
