//! Enumeration of small finite rings and their principal quotients.

use crate::error::{Error, Result};
use crate::poly::{Monomial, RingElement};
use crate::ring::{Ring, RingDescriptor, RingKind};
use crate::scalar::{BaseRing, Scalar};

pub const DEFAULT_ENUMERATION_CAP: u128 = 512;

fn finite_parts(ring: &Ring) -> Result<(u64, usize)> {
    match (ring.kind(), ring.base()) {
        (RingKind::FiniteRing, BaseRing::Modular(m)) if ring.nilpotent_vars() == 0 => Ok((m, 1)),
        (RingKind::FiniteRing, BaseRing::Modular(p)) => Ok((p, ring.truncation())),
        (RingKind::Field, BaseRing::Modular(p)) => Ok((p, 1)),
        _ => Err(Error::DescriptorMismatch(format!("{ring} is not a finite ring"))),
    }
}

/// Element with coefficient vector `digits` (constant term first).
fn from_digits(ring: &Ring, m: u64, digits: &[u64]) -> RingElement {
    let vars = ring.num_vars();
    let terms = digits.iter().enumerate().map(|(i, &d)| {
        let mono = if vars == 0 { Monomial(vec![]) } else { Monomial(vec![i as u16]) };
        (mono, Scalar::Mod(d, m))
    });
    RingElement::from_terms(ring, terms)
}

fn digits_of(a: &RingElement, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for (mono, c) in a.terms() {
        let i = mono.0.first().copied().unwrap_or(0) as usize;
        if let Scalar::Mod(v, _) = c {
            out[i] = *v;
        }
    }
    out
}

/// Every element of a finite ring exactly once, constant digit varying fastest.
pub fn enumerate_ring(ring: &Ring, cap: u128) -> Result<impl Iterator<Item = RingElement>> {
    let (m, len) = finite_parts(ring)?;
    let size = ring.cardinality().unwrap();
    if size > cap {
        return Err(Error::CardinalityTooLarge { size, cap });
    }
    let ring = ring.clone();
    Ok((0..size as u64).map(move |mut idx| {
        let digits: Vec<u64> = (0..len)
            .map(|_| {
                let d = idx % m;
                idx /= m;
                d
            })
            .collect();
        from_digits(&ring, m, &digits)
    }))
}

/// `A -> A / aA` for a finite ring `A`.
#[derive(Debug, Clone)]
pub struct PrincipalQuotient {
    source: Ring,
    target: Ring,
    generator: RingElement,
}

impl PrincipalQuotient {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn generator(&self) -> &RingElement {
        &self.generator
    }

    /// The projection, a surjective ring homomorphism with kernel `aA`.
    pub fn project(&self, x: &RingElement) -> Result<RingElement> {
        x.same_ring(&self.generator)?;
        let (m, len) = finite_parts(&self.source)?;
        let digits = digits_of(x, len);
        if self.target.is_zero_ring() {
            return Ok(RingElement::zero(&self.target));
        }
        Ok(match self.target.base() {
            BaseRing::Modular(g) if self.source.nilpotent_vars() == 0 => {
                from_digits(&self.target, g, &[digits[0] % g])
            }
            _ => {
                let keep = self.target.truncation().max(1);
                from_digits(&self.target, m, &digits[..keep.min(len)])
            }
        })
    }

    /// A set-theoretic section: the canonical representative of a class.
    pub fn lift(&self, y: &RingElement) -> Result<RingElement> {
        if y.ring() != &self.target {
            return Err(Error::DescriptorMismatch(format!("{} is not {}", y.ring(), self.target)));
        }
        let (m, len) = finite_parts(&self.source)?;
        if self.target.is_zero_ring() {
            return Ok(RingElement::zero(&self.source));
        }
        let tlen = if self.target.nilpotent_vars() > 0 { self.target.truncation() } else { 1 };
        let mut digits = digits_of(y, tlen);
        digits.resize(len, 0);
        Ok(from_digits(&self.source, m, &digits))
    }
}

/// Builds `A / aA`. The quotient is again a supported finite ring:
/// `Z/m / (v) = Z/gcd(v, m)` and `F_p[e]/(e^k) / (u e^j) = F_p[e]/(e^j)`.
pub fn quotient_by_principal(ring: &Ring, a: &RingElement, cap: u128) -> Result<PrincipalQuotient> {
    let (m, len) = finite_parts(ring)?;
    if ring.kind() != RingKind::FiniteRing {
        return Err(Error::DescriptorMismatch(format!("{ring} is not a FiniteRing descriptor")));
    }
    if a.ring() != ring {
        return Err(Error::DescriptorMismatch(format!("{} vs {}", a.ring(), ring)));
    }
    let size = ring.cardinality().unwrap();
    if size > cap {
        return Err(Error::CardinalityTooLarge { size, cap });
    }
    let digits = digits_of(a, len);
    let target = if ring.nilpotent_vars() == 0 {
        RingDescriptor::zmod(num_integer::gcd(digits[0], m))?
    } else {
        let valuation = digits.iter().position(|&d| d != 0).unwrap_or(len);
        if valuation == 0 {
            RingDescriptor::zmod(1)?
        } else {
            RingDescriptor::dual(m, valuation)?
        }
    };
    Ok(PrincipalQuotient { source: ring.clone(), target, generator: a.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_ring};

    #[test]
    fn enumerates_small_rings() {
        let z4 = parse_ring("zmod(4)").unwrap();
        let e: Vec<String> = enumerate_ring(&z4, 512).unwrap().map(|x| x.to_string()).collect();
        assert_eq!(e, ["0", "1", "2", "3"]);
        let d = parse_ring("dual(2;2)").unwrap();
        let e: Vec<String> = enumerate_ring(&d, 512).unwrap().map(|x| x.to_string()).collect();
        assert_eq!(e, ["0", "1", "e1", "e1 + 1"]);
        assert_eq!(enumerate_ring(&parse_ring("zmod(9)").unwrap(), 512).unwrap().count(), 9);
        assert!(matches!(
            enumerate_ring(&parse_ring("zmod(1000)").unwrap(), 512).map(|_| ()),
            Err(Error::CardinalityTooLarge { .. })
        ));
        assert!(enumerate_ring(&parse_ring("poly(Q;1)").unwrap(), 512).is_err());
    }

    fn check_projection(ring: &str, gen: &str, expect: &str) {
        let r = parse_ring(ring).unwrap();
        let a = parse_element(&r, gen).unwrap();
        let q = quotient_by_principal(&r, &a, 512).unwrap();
        assert_eq!(q.target().to_string(), expect);
        let elems: Vec<RingElement> = enumerate_ring(&r, 512).unwrap().collect();
        assert!(q.project(&a).unwrap().is_zero());
        let mut kernel = 0usize;
        let mut image = std::collections::HashSet::new();
        for x in &elems {
            let px = q.project(x).unwrap();
            if px.is_zero() {
                kernel += 1;
            }
            assert_eq!(q.project(&q.lift(&px).unwrap()).unwrap(), px);
            image.insert(px);
            for y in &elems {
                assert_eq!(q.project(&(x + y)).unwrap(), &q.project(x).unwrap() + &q.project(y).unwrap());
                assert_eq!(q.project(&(x * y)).unwrap(), &q.project(x).unwrap() * &q.project(y).unwrap());
            }
        }
        // kernel is exactly aA
        let ideal: std::collections::HashSet<RingElement> = elems.iter().map(|x| x * &a).collect();
        assert_eq!(kernel, ideal.len());
        assert_eq!(elems.len(), kernel * image.len());
    }

    #[test]
    fn principal_quotients() {
        check_projection("zmod(4)", "2", "zmod(2)");
        check_projection("zmod(4)", "1", "zmod(1)");
        check_projection("dual(2;2)", "e1", "dual(2;1)");
        check_projection("zmod(9)", "6", "zmod(3)");
        check_projection("zmod(8)", "0", "zmod(8)");
        check_projection("dual(3;2)", "1 + e1", "zmod(1)");
        check_projection("dual(3;3)", "2*e1^2 + e1", "dual(3;1)");
    }
}
