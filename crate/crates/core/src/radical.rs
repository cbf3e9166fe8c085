//! Units and radical-specific operations: reduction modulo the nilpotent
//! ideal, geometric-series inverses and truncated power series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, RingElement};
use crate::ring::RingKind;
use crate::scalar::{factorize, BaseRing, Scalar};

/// Kills every term containing a nilpotent variable: `F[x, e]/<e>^N -> F[x]`.
pub fn reduce_to_base(a: &RingElement) -> Result<RingElement> {
    let ring = a.ring();
    let base = ring.reduced()?;
    let d = ring.geometric_vars();
    Ok(a.map_into(&base, |m| (m.degree_from(d) == 0).then(|| Monomial(m.0[..d].to_vec()))))
}

/// Embeds a polynomial of the reduced ring as an ε-free element of `ring`.
pub fn embed_from_base(ring: &crate::ring::Ring, a: &RingElement) -> Result<RingElement> {
    if ring.kind() != RingKind::TruncNil || a.ring().num_vars() != ring.geometric_vars() || a.ring().base() != ring.base() {
        return Err(Error::DescriptorMismatch(format!("cannot embed {} into {}", a.ring(), ring)));
    }
    let k = ring.nilpotent_vars();
    Ok(a.map_into(ring, |m| {
        let mut e = m.0.clone();
        e.extend(std::iter::repeat_n(0, k));
        Some(Monomial(e))
    }))
}

fn radical_of_modulus(m: u64) -> u64 {
    factorize(m).iter().map(|&(p, _)| p).product()
}

/// Membership in the Jacobson radical (= nilradical for every supported model
/// that has one).
pub fn is_in_radical(a: &RingElement) -> Result<bool> {
    let ring = a.ring();
    match ring.kind() {
        RingKind::TruncNil => {
            let d = ring.geometric_vars();
            Ok(a.terms().iter().all(|(m, _)| m.degree_from(d) >= 1))
        }
        RingKind::FiniteRing if ring.nilpotent_vars() > 0 => Ok(a.constant_term().is_zero()),
        RingKind::FiniteRing => {
            let BaseRing::Modular(m) = ring.base() else { unreachable!() };
            let r = radical_of_modulus(m);
            let c = match a.constant_term() {
                Scalar::Mod(v, _) => v,
                _ => unreachable!(),
            };
            let nil = c % r.max(1) == 0;
            debug_assert_eq!(nil, a.pow(ring.nilpotency_bound() as u32).is_zero());
            Ok(nil)
        }
        _ => Err(Error::DescriptorMismatch(format!("{ring} has no radical model"))),
    }
}

fn require_radical(a: &RingElement) -> Result<()> {
    if is_in_radical(a)? {
        Ok(())
    } else {
        Err(Error::NotInRadical(a.to_string()))
    }
}

/// Units are exactly the elements whose image modulo the radical is a unit;
/// in polynomial rings over a field those are the nonzero constants.
pub fn is_unit(a: &RingElement) -> bool {
    let ring = a.ring();
    if ring.is_zero_ring() {
        return true;
    }
    match ring.kind() {
        RingKind::Field | RingKind::Poly => a.is_constant() && !a.is_zero(),
        RingKind::TruncNil => {
            let d = ring.geometric_vars();
            let c = a.constant_term();
            !c.is_zero() && a.terms().iter().all(|(m, _)| m.is_one() || m.degree_from(d) >= 1)
        }
        RingKind::FiniteRing => a.constant_term().inv().is_some(),
    }
}

/// Inverse of a unit. In the nilpotent models the base inverse `f'` is
/// corrected by `sum u^i` with `u = 1 - f f'` radical.
pub fn invert(a: &RingElement) -> Result<RingElement> {
    let ring = a.ring();
    if !is_unit(a) {
        return Err(Error::NotAUnit(a.to_string()));
    }
    if ring.is_zero_ring() {
        return Ok(RingElement::zero(ring));
    }
    let c_inv = a.constant_term().inv().expect("unit has invertible constant term");
    let approx = RingElement::constant(ring, c_inv);
    if a.is_constant() {
        return Ok(approx);
    }
    let u = &RingElement::one(ring) - &(a * &approx);
    let v = geom_series_inverse(&u)?;
    let inv = &approx * &v;
    debug_assert!((a * &inv).is_one());
    Ok(inv)
}

/// `sum_{i<N} u^i`, the inverse of `1 - u` for radical `u`.
pub fn geom_series_inverse(u: &RingElement) -> Result<RingElement> {
    require_radical(u)?;
    let ring = u.ring();
    let mut acc = RingElement::one(ring);
    let mut p = RingElement::one(ring);
    for _ in 1..ring.nilpotency_bound().max(1) {
        p = &p * u;
        if p.is_zero() {
            break;
        }
        acc = &acc + &p;
    }
    Ok(acc)
}

/// A formal power series `sum c_i t^i` given by a coefficient rule.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerSeries {
    /// Explicit coefficients; all later ones are zero.
    Explicit(Vec<BigRational>),
    /// `1 + t + t^2 + ...`
    Geometric,
    /// `sum t^i / i!`
    Exp,
    /// `log(1 - t) = -sum_{i>=1} t^i / i`
    LogOneMinus,
}

fn factorial(i: usize) -> BigInt {
    (1..=i).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl PowerSeries {
    pub fn coefficient(&self, i: usize) -> BigRational {
        match self {
            PowerSeries::Explicit(c) => c.get(i).cloned().unwrap_or_else(BigRational::zero),
            PowerSeries::Geometric => BigRational::one(),
            PowerSeries::Exp => BigRational::new(BigInt::one(), factorial(i)),
            PowerSeries::LogOneMinus if i == 0 => BigRational::zero(),
            PowerSeries::LogOneMinus => BigRational::new(-BigInt::one(), BigInt::from(i)),
        }
    }
}

/// `sum_{i<N} c_i g^i` for radical `g`.
pub fn eval_power_series(s: &PowerSeries, g: &RingElement) -> Result<RingElement> {
    require_radical(g)?;
    let ring = g.ring();
    let base = ring.base();
    let mut acc = RingElement::zero(ring);
    let mut p = RingElement::one(ring);
    for i in 0..ring.nilpotency_bound().max(1) {
        if i > 0 {
            p = &p * g;
        }
        if p.is_zero() {
            break;
        }
        let c = s.coefficient(i);
        if c.is_zero() {
            continue;
        }
        let c = base.from_rational(&c)?;
        acc = &acc + &p.scale(&c);
    }
    Ok(acc)
}

fn require_char_support(g: &RingElement) -> Result<()> {
    if let BaseRing::Modular(m) = g.ring().base() {
        // every denominator up to (N-1)! must be invertible
        let n = g.ring().nilpotency_bound() as u64;
        if let Some(&(p, _)) = factorize(m).iter().find(|&&(p, _)| p < n) {
            return Err(Error::CharacteristicObstruction {
                characteristic: m,
                detail: format!("series denominators up to {} are divisible by {p}", n.saturating_sub(1)),
            });
        }
    }
    Ok(())
}

/// `log(1 - g) = -sum_{i>=1} g^i / i`.
pub fn log_one_minus(g: &RingElement) -> Result<RingElement> {
    require_radical(g)?;
    require_char_support(g)?;
    eval_power_series(&PowerSeries::LogOneMinus, g)
}

/// `exp(h) = sum h^i / i!` for radical `h`.
pub fn exp_radical(h: &RingElement) -> Result<RingElement> {
    require_radical(h)?;
    require_char_support(h)?;
    eval_power_series(&PowerSeries::Exp, h)
}

/// Exact division by a positive integer in the base ring.
pub fn div_integer(a: &RingElement, n: i64) -> Result<RingElement> {
    let c = a.ring().base().from_rational(&BigRational::new(BigInt::one(), BigInt::from(n)))?;
    Ok(a.scale(&c))
}
