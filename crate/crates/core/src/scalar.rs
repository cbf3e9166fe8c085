//! Exact coefficient arithmetic: rationals, Gaussian rationals and residues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The coefficient domain of a ring descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Rational,
    Gaussian,
    /// Residues modulo `m`. A field exactly when `m` is prime.
    Modular(u64),
}

/// A coefficient in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Gauss(BigRational, BigRational),
    /// `(value, modulus)` with `value < modulus`.
    Mod(u64, u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

impl BaseRing {
    pub fn is_field(&self) -> bool {
        match self {
            BaseRing::Modular(m) => is_prime(*m),
            _ => true,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseRing::Modular(m) => *m,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            BaseRing::Rational => Scalar::Rat(BigRational::from_integer(v.into())),
            BaseRing::Gaussian => Scalar::Gauss(BigRational::from_integer(v.into()), BigRational::zero()),
            BaseRing::Modular(m) => Scalar::Mod((v as i128).rem_euclid(*m as i128) as u64, *m),
        }
    }

    /// Maps a rational number into the base ring; fails when the denominator
    /// is not invertible modulo the characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            BaseRing::Rational => Ok(Scalar::Rat(q.clone())),
            BaseRing::Gaussian => Ok(Scalar::Gauss(q.clone(), BigRational::zero())),
            BaseRing::Modular(m) => {
                let mb = BigInt::from(*m);
                let num = q.numer().mod_floor(&mb).to_u64().unwrap();
                let den = q.denom().mod_floor(&mb).to_u64().unwrap();
                let inv = mod_inverse(den, *m).ok_or_else(|| Error::CharacteristicObstruction {
                    characteristic: *m,
                    detail: format!("denominator {} is not invertible", q.denom()),
                })?;
                Ok(Scalar::Mod(((num as u128 * inv as u128) % *m as u128) as u64, *m))
            }
        }
    }

    /// The imaginary unit, when the base has one.
    pub fn imaginary_unit(&self) -> Option<Scalar> {
        match self {
            BaseRing::Gaussian => Some(Scalar::Gauss(BigRational::zero(), BigRational::one())),
            _ => None,
        }
    }

    pub fn cardinality(&self) -> Option<u64> {
        match self {
            BaseRing::Modular(m) => Some(*m),
            _ => None,
        }
    }

    /// All residues, in increasing order. Only for modular bases.
    pub fn residues(&self) -> Vec<Scalar> {
        match self {
            BaseRing::Modular(m) => (0..*m).map(|v| Scalar::Mod(v, *m)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (BaseRing::Rational, Scalar::Rat(_)) | (BaseRing::Gaussian, Scalar::Gauss(..))
        ) || matches!((self, s), (BaseRing::Modular(m), Scalar::Mod(_, n)) if m == n)
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Rational => write!(f, "Q"),
            BaseRing::Gaussian => write!(f, "Q(i)"),
            BaseRing::Modular(m) => write!(f, "Z{m}"),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Gauss(a, b) => a.is_zero() && b.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Gauss(a, b) => a.is_one() && b.is_zero(),
            Scalar::Mod(v, m) => *v == 1 % *m,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Gauss(a, b), Scalar::Gauss(c, d)) => Scalar::Gauss(a + c, b + d),
            (Scalar::Mod(a, m), Scalar::Mod(b, _)) => {
                Scalar::Mod(((*a as u128 + *b as u128) % *m as u128) as u64, *m)
            }
            _ => panic!("scalar base mismatch: {self:?} + {other:?}"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Gauss(a, b) => Scalar::Gauss(-a, -b),
            Scalar::Mod(a, m) => Scalar::Mod((*m - *a) % *m, *m),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Gauss(a, b), Scalar::Gauss(c, d)) => Scalar::Gauss(a * c - b * d, a * d + b * c),
            (Scalar::Mod(a, m), Scalar::Mod(b, _)) => {
                Scalar::Mod(((*a as u128 * *b as u128) % *m as u128) as u64, *m)
            }
            _ => panic!("scalar base mismatch: {self:?} * {other:?}"),
        }
    }

    /// Multiplicative inverse, `None` for non-units.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(a) => (!a.is_zero()).then(|| Scalar::Rat(a.recip())),
            Scalar::Gauss(a, b) => {
                let n = a * a + b * b;
                (!n.is_zero()).then(|| Scalar::Gauss(a / &n, -b / &n))
            }
            Scalar::Mod(a, m) => mod_inverse(*a, *m).map(|v| Scalar::Mod(v, *m)),
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = match self {
            Scalar::Rat(_) => Scalar::Rat(BigRational::one()),
            Scalar::Gauss(..) => Scalar::Gauss(BigRational::one(), BigRational::zero()),
            Scalar::Mod(_, m) => Scalar::Mod(1 % *m, *m),
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// True when the coefficient prints with a leading minus sign.
    pub(crate) fn is_negative_form(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_negative(),
            Scalar::Gauss(a, b) => {
                (a.is_negative() && b.is_zero()) || (a.is_zero() && b.is_negative())
            }
            Scalar::Mod(..) => false,
        }
    }
}

fn fmt_rat(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

fn fmt_imag(b: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if b.is_one() {
        write!(f, "i")
    } else if (-b).is_one() {
        write!(f, "-i")
    } else {
        fmt_rat(b, f)?;
        write!(f, "*i")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => fmt_rat(q, f),
            Scalar::Gauss(a, b) => {
                if b.is_zero() {
                    fmt_rat(a, f)
                } else if a.is_zero() {
                    fmt_imag(b, f)
                } else {
                    write!(f, "(")?;
                    fmt_rat(a, f)?;
                    if b.is_negative() {
                        write!(f, " - ")?;
                        fmt_imag(&-b, f)?;
                    } else {
                        write!(f, " + ")?;
                        fmt_imag(b, f)?;
                    }
                    write!(f, ")")
                }
            }
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_inverse() {
        assert_eq!(q(2, 3).inv().unwrap(), q(3, 2));
        assert!(q(0, 1).inv().is_none());
    }

    #[test]
    fn gaussian_inverse_is_exact() {
        let z = Scalar::Gauss(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        assert!(z.mul(&z.inv().unwrap()).is_one());
    }

    #[test]
    fn modular_units() {
        let b = BaseRing::Modular(4);
        assert!(b.from_i64(3).inv().is_some());
        assert!(b.from_i64(2).inv().is_none());
        assert_eq!(b.from_i64(-1), Scalar::Mod(3, 4));
    }

    #[test]
    fn rational_into_prime_field() {
        let b = BaseRing::Modular(5);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(b.from_rational(&half).unwrap(), Scalar::Mod(3, 5));
        let fifth = BigRational::new(1.into(), 5.into());
        assert!(matches!(b.from_rational(&fifth), Err(Error::CharacteristicObstruction { .. })));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(72), vec![(2, 3), (3, 2)]);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }
}
