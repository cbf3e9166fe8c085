//! Normalized ring elements: sparse polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// An exponent vector. Ordered by graded reverse lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn var(vars: usize, index: usize) -> Self {
        let mut e = vec![0; vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total degree in the variables from `start` on.
    pub fn degree_from(&self, start: usize) -> u32 {
        self.0[start..].iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of a described ring, normalized: nonzero coefficients, distinct
/// monomials sorted in decreasing grevlex order, nilpotent degree below the
/// truncation order. Structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    terms: Vec<(Monomial, Scalar)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// Checked ring operation; `b` is ignored for negation.
pub fn ring_op(a: &RingElement, b: &RingElement, op: RingOp) -> Result<RingElement> {
    if op != RingOp::Neg {
        a.same_ring(b)?;
    }
    Ok(match op {
        RingOp::Add => a + b,
        RingOp::Sub => a - b,
        RingOp::Mul => a * b,
        RingOp::Neg => -a,
    })
}

impl RingElement {
    pub fn zero(ring: &Ring) -> Self {
        RingElement { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.base().one())
    }

    pub fn from_i64(ring: &Ring, v: i64) -> Self {
        Self::constant(ring, ring.base().from_i64(v))
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.num_vars()), c)])
    }

    /// The variable with 0-based index `index` over all variables.
    pub fn var(ring: &Ring, index: usize) -> Self {
        Self::from_terms(ring, [(Monomial::var(ring.num_vars(), index), ring.base().one())])
    }

    /// Geometric variable `x_{i+1}`.
    pub fn x(ring: &Ring, i: usize) -> Self {
        assert!(i < ring.geometric_vars(), "no variable x{}", i + 1);
        Self::var(ring, i)
    }

    /// Nilpotent variable `e_{i+1}`.
    pub fn eps(ring: &Ring, i: usize) -> Self {
        assert!(i < ring.nilpotent_vars(), "no variable e{}", i + 1);
        Self::var(ring, ring.geometric_vars() + i)
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        let nil_start = ring.geometric_vars();
        let order = ring.truncation() as u32;
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), ring.num_vars());
            debug_assert!(ring.base().contains(&c));
            if ring.nilpotent_vars() > 0 && m.degree_from(nil_start) >= order {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e = e.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        RingElement { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn same_ring(&self, other: &RingElement) -> Result<()> {
        if std::sync::Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
            || (self.ring.is_zero_ring() && self.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.base().zero())
    }

    /// Total degree; -1 for zero.
    pub fn degree(&self) -> i64 {
        self.terms.first().map(|(m, _)| m.degree() as i64).unwrap_or(-1)
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Scalar) -> RingElement {
        Self::from_terms(&self.ring, self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))))
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> RingElement {
        Self::from_terms(&self.ring, self.terms.iter().map(|(m, a)| (m.mul(mono), a.mul(c))))
    }

    pub fn pow(&self, mut e: u32) -> RingElement {
        let mut acc = RingElement::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Re-expresses the element in `target` by mapping each exponent vector.
    /// Terms mapped to `None` are dropped.
    pub fn map_into(&self, target: &Ring, f: impl Fn(&Monomial) -> Option<Monomial>) -> RingElement {
        Self::from_terms(target, self.terms.iter().filter_map(|(m, c)| f(m).map(|m2| (m2, c.clone()))))
    }

    fn combine(&self, other: &RingElement, negate: bool) -> RingElement {
        self.same_ring(other).unwrap_or_else(|e| panic!("{e}"));
        let rhs = other.terms.iter().map(|(m, c)| (m.clone(), if negate { c.neg() } else { c.clone() }));
        Self::from_terms(&self.ring, self.terms.iter().cloned().chain(rhs))
    }

    fn product(&self, other: &RingElement) -> RingElement {
        self.same_ring(other).unwrap_or_else(|e| panic!("{e}"));
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.push((m1.mul(m2), c1.mul(c2)));
            }
        }
        Self::from_terms(&self.ring, out)
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.combine(rhs, false)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.combine(rhs, true)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.product(rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), c.neg())))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative_form();
            let mag = if negative { c.neg() } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = self.ring.var_name(i);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({} in {})", self, self.ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;
    use crate::scalar::BaseRing;

    fn dual_q(n: usize) -> Ring {
        RingDescriptor::trunc_nil(BaseRing::Rational, 0, 1, n).unwrap()
    }

    #[test]
    fn eps_squared_vanishes() {
        let r = dual_q(2);
        let e = RingElement::eps(&r, 0);
        assert!((&e * &e).is_zero());
    }

    #[test]
    fn truncated_product() {
        let r = dual_q(3);
        let e = RingElement::eps(&r, 0);
        let one = RingElement::one(&r);
        let p = &(&one + &e) * &(&one - &e);
        assert_eq!(p, &one - &(&e * &e));
    }

    #[test]
    fn mixed_monomial_truncates() {
        let r = RingDescriptor::trunc_nil(BaseRing::Rational, 1, 1, 2).unwrap();
        let x = RingElement::x(&r, 0);
        let e = RingElement::eps(&r, 0);
        assert!((&(&x * &e) * &e).is_zero());
        assert!(!(&x * &e).is_zero());
    }

    #[test]
    fn grevlex_order() {
        // x1^2 > x1*x2 > x2^2 > x1 > x2 > 1
        let m = |a: u16, b: u16| Monomial(vec![a, b]);
        let mut v = vec![m(0, 0), m(0, 1), m(1, 0), m(0, 2), m(1, 1), m(2, 0)];
        v.sort();
        v.reverse();
        assert_eq!(v, vec![m(2, 0), m(1, 1), m(0, 2), m(1, 0), m(0, 1), m(0, 0)]);
        // degree-3 tie: x1^2*x3 < x1*x2^2 in grevlex
        assert!(Monomial(vec![2, 0, 1]) < Monomial(vec![1, 2, 0]));
    }

    #[test]
    fn mismatch_is_reported() {
        let a = RingElement::one(&dual_q(2));
        let b = RingElement::one(&dual_q(3));
        assert!(matches!(ring_op(&a, &b, RingOp::Add), Err(Error::DescriptorMismatch(_))));
    }

    #[test]
    fn zero_ring_collapses() {
        let r = RingDescriptor::zmod(1).unwrap();
        assert!(RingElement::one(&r).is_zero());
        assert!(RingElement::zero(&r).is_one());
    }
}
