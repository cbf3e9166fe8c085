//! Ring descriptors: which computable ring an element lives in.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{factorize, is_prime, BaseRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    Field,
    Poly,
    TruncNil,
    FiniteRing,
}

/// A computable commutative ring.
///
/// * `Field`: the base field itself.
/// * `Poly`: `F[x1..xd]`.
/// * `TruncNil`: `F[x1..xd, e1..ek] / <e>^N`; the ideal generated by the
///   `e` variables is both the nilradical and the Jacobson radical.
/// * `FiniteRing`: `Z/m` (no nilpotent variables) or `F_p[e]/(e^N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    kind: RingKind,
    base: BaseRing,
    geometric: usize,
    nilpotent: usize,
    order: usize,
}

pub type Ring = Arc<RingDescriptor>;

impl RingDescriptor {
    pub fn field(base: BaseRing) -> Result<Ring> {
        require_field(base)?;
        Ok(Arc::new(RingDescriptor { kind: RingKind::Field, base, geometric: 0, nilpotent: 0, order: 0 }))
    }

    pub fn poly(base: BaseRing, vars: usize) -> Result<Ring> {
        require_field(base)?;
        Ok(Arc::new(RingDescriptor { kind: RingKind::Poly, base, geometric: vars, nilpotent: 0, order: 0 }))
    }

    pub fn trunc_nil(base: BaseRing, geometric: usize, nilpotent: usize, order: usize) -> Result<Ring> {
        require_field(base)?;
        if order == 0 {
            return Err(Error::InvalidDescriptor("truncation order must be at least 1".into()));
        }
        Ok(Arc::new(RingDescriptor { kind: RingKind::TruncNil, base, geometric, nilpotent, order }))
    }

    /// `Z/m`; `m = 1` is the zero ring.
    pub fn zmod(m: u64) -> Result<Ring> {
        if m == 0 {
            return Err(Error::InvalidDescriptor("modulus must be positive".into()));
        }
        Ok(Arc::new(RingDescriptor {
            kind: RingKind::FiniteRing,
            base: BaseRing::Modular(m),
            geometric: 0,
            nilpotent: 0,
            order: 0,
        }))
    }

    /// `F_p[e]/(e^k)`.
    pub fn dual(p: u64, k: usize) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::InvalidDescriptor(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidDescriptor("nilpotency order must be at least 1".into()));
        }
        Ok(Arc::new(RingDescriptor {
            kind: RingKind::FiniteRing,
            base: BaseRing::Modular(p),
            geometric: 0,
            nilpotent: 1,
            order: k,
        }))
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn geometric_vars(&self) -> usize {
        self.geometric
    }

    pub fn nilpotent_vars(&self) -> usize {
        self.nilpotent
    }

    pub fn num_vars(&self) -> usize {
        self.geometric + self.nilpotent
    }

    /// Truncation order `N` (total nilpotent degree at which monomials vanish), or 0.
    pub fn truncation(&self) -> usize {
        self.order
    }

    pub fn is_zero_ring(&self) -> bool {
        self.base == BaseRing::Modular(1)
    }

    pub fn has_radical(&self) -> bool {
        matches!(self.kind, RingKind::TruncNil | RingKind::FiniteRing)
    }

    /// An exponent `e` with `j^e = 0` for every element `j` of the radical.
    pub fn nilpotency_bound(&self) -> usize {
        if self.nilpotent > 0 {
            return self.order;
        }
        match self.base {
            BaseRing::Modular(m) => factorize(m).iter().map(|&(_, e)| e as usize).max().unwrap_or(1),
            _ => 1,
        }
    }

    /// Number of elements, for finite rings.
    pub fn cardinality(&self) -> Option<u128> {
        match (self.kind, self.base) {
            (RingKind::FiniteRing, BaseRing::Modular(m)) => {
                Some((m as u128).pow(if self.nilpotent > 0 { self.order as u32 } else { 1 }))
            }
            (RingKind::Field, BaseRing::Modular(p)) => Some(p as u128),
            _ => None,
        }
    }

    /// The polynomial ring obtained by killing the nilpotent variables.
    pub fn reduced(&self) -> Result<Ring> {
        match self.kind {
            RingKind::TruncNil => RingDescriptor::poly(self.base, self.geometric),
            _ => Err(Error::DescriptorMismatch(format!("{self} has no nilpotent reduction"))),
        }
    }

    /// The same ring truncated at a smaller order (quotient by `<e>^m`).
    pub fn with_truncation(&self, order: usize) -> Result<Ring> {
        match self.kind {
            RingKind::TruncNil => RingDescriptor::trunc_nil(self.base, self.geometric, self.nilpotent, order),
            RingKind::FiniteRing if self.nilpotent > 0 => match self.base {
                BaseRing::Modular(p) => RingDescriptor::dual(p, order),
                _ => unreachable!(),
            },
            _ => Err(Error::DescriptorMismatch(format!("{self} has no truncation order"))),
        }
    }

    /// Name of variable `index` (0-based over all variables).
    pub fn var_name(&self, index: usize) -> String {
        if index < self.geometric {
            format!("x{}", index + 1)
        } else {
            format!("e{}", index - self.geometric + 1)
        }
    }
}

fn require_field(base: BaseRing) -> Result<()> {
    if base.is_field() {
        Ok(())
    } else {
        Err(Error::InvalidDescriptor(format!("{base} is not a field")))
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.base {
            BaseRing::Modular(p) if self.kind != RingKind::FiniteRing => format!("F{p}"),
            b => b.to_string(),
        };
        match self.kind {
            RingKind::Field => write!(f, "field({base})"),
            RingKind::Poly => write!(f, "poly({base};{})", self.geometric),
            RingKind::TruncNil => write!(
                f,
                "trunc({base};{};{};{})",
                self.geometric, self.nilpotent, self.order
            ),
            RingKind::FiniteRing => match self.base {
                BaseRing::Modular(m) if self.nilpotent == 0 => write!(f, "zmod({m})"),
                BaseRing::Modular(p) => write!(f, "dual({p};{})", self.order),
                _ => unreachable!(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_descriptors() {
        assert!(RingDescriptor::poly(BaseRing::Modular(4), 1).is_err());
        assert!(RingDescriptor::trunc_nil(BaseRing::Rational, 1, 1, 0).is_err());
        assert!(RingDescriptor::dual(4, 2).is_err());
        assert!(RingDescriptor::zmod(0).is_err());
    }

    #[test]
    fn cardinalities() {
        assert_eq!(RingDescriptor::zmod(9).unwrap().cardinality(), Some(9));
        assert_eq!(RingDescriptor::dual(3, 2).unwrap().cardinality(), Some(9));
        assert_eq!(RingDescriptor::poly(BaseRing::Rational, 1).unwrap().cardinality(), None);
    }

    #[test]
    fn nilpotency_bounds() {
        assert_eq!(RingDescriptor::zmod(8).unwrap().nilpotency_bound(), 3);
        assert_eq!(RingDescriptor::zmod(12).unwrap().nilpotency_bound(), 2);
        let r = RingDescriptor::trunc_nil(BaseRing::Rational, 1, 2, 4).unwrap();
        assert_eq!(r.nilpotency_bound(), 4);
    }
}
