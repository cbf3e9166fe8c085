//! Unimodular rows: witnesses, reductions, bounded reduction search, the
//! finite-ring quotient criterion, the lower-bound witness family, transport
//! through the nilpotent radical and completion to invertible matrices.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{enumerate_ring, quotient_by_principal, PrincipalQuotient, DEFAULT_ENUMERATION_CAP};
use crate::ideal::{combine, unit_ideal_witness, CofactorWitness, WorkCaps};
use crate::linalg::solve;
use crate::matrix::RingMatrix;
use crate::poly::{Monomial, RingElement};
use crate::radical::{embed_from_base, geom_series_inverse, invert, is_unit, reduce_to_base};
use crate::ring::{Ring, RingDescriptor, RingKind};
use crate::scalar::{BaseRing, Scalar};

pub const DEFAULT_DEGREE_BOUND: u32 = 3;
pub const MAX_DEGREE_BOUND: u32 = 8;
/// Largest `|A|^(n+1)` accepted by [`brute_force_lemma26`].
pub const LEMMA26_CAP: u128 = 1 << 20;

/// A row `(a_1, ..., a_n)` with cofactors `b` such that `sum b_i a_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularVector {
    ring: Ring,
    witness: CofactorWitness,
}

impl UnimodularVector {
    /// Re-verifies the identity.
    pub fn new(components: Vec<RingElement>, cofactors: Vec<RingElement>) -> Result<Self> {
        let ring = row_ring(&components)?;
        for c in components.iter().chain(&cofactors) {
            if c.ring() != &ring {
                return Err(Error::DescriptorMismatch(format!("{} in a row over {ring}", c.ring())));
            }
        }
        Ok(UnimodularVector { ring, witness: CofactorWitness::new(components, cofactors)? })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[RingElement] {
        self.witness.generators()
    }

    pub fn cofactors(&self) -> &[RingElement] {
        self.witness.cofactors()
    }

    pub fn len(&self) -> usize {
        self.components().len()
    }

    pub fn is_empty(&self) -> bool {
        self.components().is_empty()
    }

    pub fn verify(&self) -> bool {
        self.witness.holds().unwrap_or(false)
    }
}

fn row_ring(a: &[RingElement]) -> Result<Ring> {
    let first = a.first().ok_or_else(|| Error::InvalidDimension("empty row".into()))?;
    let ring = first.ring().clone();
    for x in a {
        x.same_ring(first)?;
    }
    Ok(ring)
}

fn modular_value(x: &RingElement) -> u64 {
    match x.constant_term() {
        Scalar::Mod(v, _) => v,
        _ => 0,
    }
}

/// Integer Bezout coefficients for `Z/m`.
fn zmod_witness(a: &[RingElement], m: u64) -> Option<Vec<RingElement>> {
    let ring = a[0].ring();
    let mut g: i128 = 0;
    let mut coeffs: Vec<i128> = Vec::with_capacity(a.len());
    for x in a {
        let v = modular_value(x) as i128;
        let e = g.extended_gcd(&v);
        for c in coeffs.iter_mut() {
            *c *= e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
        for c in coeffs.iter_mut() {
            *c = c.rem_euclid(m as i128);
        }
    }
    let e = g.extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(coeffs.iter().map(|c| RingElement::constant(ring, Scalar::Mod(((c * e.x).rem_euclid(m as i128)) as u64, m))).collect())
}

fn unit_component_witness(a: &[RingElement]) -> Result<Option<Vec<RingElement>>> {
    let ring = a[0].ring();
    match a.iter().position(is_unit) {
        Some(i) => {
            let mut b = vec![RingElement::zero(ring); a.len()];
            b[i] = invert(&a[i])?;
            Ok(Some(b))
        }
        None => Ok(None),
    }
}

/// Rescales a witness of `1 - j` (with `j` radical) into a witness of 1.
fn rescale_defect(a: &[RingElement], b: Vec<RingElement>) -> Result<Vec<RingElement>> {
    let s = combine(a, &b)?;
    let j = &RingElement::one(s.ring()) - &s;
    let r = geom_series_inverse(&j)?;
    Ok(b.iter().map(|x| x * &r).collect())
}

fn witness_for(a: &[RingElement], caps: &WorkCaps) -> Result<Option<Vec<RingElement>>> {
    let ring = row_ring(a)?;
    if ring.is_zero_ring() {
        let mut b = vec![RingElement::zero(&ring); a.len()];
        b[0] = RingElement::one(&ring);
        return Ok(Some(b));
    }
    match ring.kind() {
        RingKind::Field => unit_component_witness(a),
        RingKind::Poly => Ok(unit_ideal_witness(a, caps)?.map(|w| w.cofactors().to_vec())),
        RingKind::TruncNil => {
            let base: Vec<RingElement> = a.iter().map(reduce_to_base).collect::<Result<_>>()?;
            match witness_for(&base, caps)? {
                Some(bb) => {
                    let lifted = bb.iter().map(|x| embed_from_base(&ring, x)).collect::<Result<Vec<_>>>()?;
                    Ok(Some(rescale_defect(a, lifted)?))
                }
                None => Ok(None),
            }
        }
        RingKind::FiniteRing => match ring.base() {
            BaseRing::Modular(m) if ring.nilpotent_vars() == 0 => Ok(zmod_witness(a, m)),
            _ => unit_component_witness(a),
        },
    }
}

/// Decides unimodularity and returns the row with an explicit witness.
pub fn is_unimodular(a: &[RingElement]) -> Result<UnimodularVector> {
    is_unimodular_with(a, &WorkCaps::default())
}

pub fn is_unimodular_with(a: &[RingElement], caps: &WorkCaps) -> Result<UnimodularVector> {
    match witness_for(a, caps)? {
        Some(b) => UnimodularVector::new(a.to_vec(), b),
        None => Err(Error::NotUnimodular),
    }
}

/// Independent route for truncated-nilpotent rows: one Groebner computation
/// in the polynomial ring on all variables, with every nilpotent monomial of
/// the truncation degree added as a generator.
pub fn is_unimodular_direct(a: &[RingElement], caps: &WorkCaps) -> Result<UnimodularVector> {
    let ring = row_ring(a)?;
    if ring.kind() != RingKind::TruncNil {
        return is_unimodular_with(a, caps);
    }
    let n = ring.num_vars();
    let d = ring.geometric_vars();
    let big = RingDescriptor::poly(ring.base(), n)?;
    let lift = |x: &RingElement| x.map_into(&big, |m| Some(m.clone()));
    let mut gens: Vec<RingElement> = a.iter().map(lift).collect();
    for mono in monomials_of_degree(ring.nilpotent_vars(), ring.truncation() as u32) {
        let mut e = vec![0u16; d];
        e.extend(mono);
        gens.push(RingElement::from_terms(&big, [(Monomial(e), ring.base().one())]));
    }
    let Some(w) = unit_ideal_witness(&gens, caps)? else {
        return Err(Error::NotUnimodular);
    };
    let b = w.cofactors()[..a.len()].iter().map(|x| x.map_into(&ring, |m| Some(m.clone()))).collect();
    UnimodularVector::new(a.to_vec(), b)
}

fn monomials_of_degree(vars: usize, degree: u32) -> Vec<Vec<u16>> {
    if vars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials_of_degree(vars - 1, degree - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

fn monomials_up_to(vars: usize, degree: u32) -> Vec<Monomial> {
    (0..=degree).flat_map(|k| monomials_of_degree(vars, k)).map(Monomial).collect()
}

/// The shortened row `(a_i + c_i a_n)_{i < n}`.
pub fn shorten(row: &[RingElement], c: &[RingElement]) -> Result<Vec<RingElement>> {
    if row.len() < 2 || c.len() != row.len() - 1 {
        return Err(Error::DimensionMismatch(format!("{} coefficients for a row of length {}", c.len(), row.len())));
    }
    let last = &row[row.len() - 1];
    row[..row.len() - 1]
        .iter()
        .zip(c)
        .map(|(a, ci)| {
            ci.same_ring(a)?;
            Ok(a + &(ci * last))
        })
        .collect()
}

/// Coefficients `c` with the shortened row unimodular, and its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducibilityCertificate {
    pub coefficients: Vec<RingElement>,
    pub shortened: UnimodularVector,
}

impl ReducibilityCertificate {
    /// Checks the certificate against the row it claims to reduce.
    pub fn verify(&self, row: &[RingElement]) -> bool {
        shorten(row, &self.coefficients).is_ok_and(|s| s == self.shortened.components()) && self.shortened.verify()
    }
}

pub fn apply_reduction(u: &UnimodularVector, c: &[RingElement]) -> Result<UnimodularVector> {
    is_unimodular(&shorten(u.components(), c)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Reducible(ReducibilityCertificate),
    InfeasibleWithinBound { degree_bound: u32 },
}

/// Looks for `c` of degree at most `bound` with `a_1 + c a_2` a nonzero
/// constant. This is a linear system in the coefficients of `c`, so an
/// infeasible answer is exact at that degree.
pub fn search_reduction_pair(u: &UnimodularVector, bound: u32) -> Result<SearchOutcome> {
    if bound > MAX_DEGREE_BOUND {
        return Err(Error::DegreeBoundExceeded(format!("degree bound {bound} above {MAX_DEGREE_BOUND}")));
    }
    if u.len() != 2 {
        return Err(Error::InvalidDimension(format!("rows of length {}, expected 2", u.len())));
    }
    let ring = u.ring();
    if !matches!(ring.kind(), RingKind::Poly | RingKind::Field) {
        return Err(Error::DescriptorMismatch(format!("{ring} is not a polynomial ring over a field")));
    }
    let base = ring.base();
    let (a1, a2) = (&u.components()[0], &u.components()[1]);
    let unknowns = monomials_up_to(ring.num_vars(), bound);
    let basis: Vec<RingElement> = unknowns.iter().map(|m| a2.mul_term(m, &base.one())).collect();
    let mut support: Vec<Monomial> = a1.terms().iter().map(|(m, _)| m.clone()).collect();
    for p in &basis {
        support.extend(p.terms().iter().map(|(m, _)| m.clone()));
    }
    support.sort();
    support.dedup();
    let coeff = |p: &RingElement, m: &Monomial| {
        p.terms().iter().find(|(t, _)| t == m).map_or_else(|| base.zero(), |(_, c)| c.clone())
    };
    let nonconstant: Vec<&Monomial> = support.iter().filter(|m| !m.is_one()).collect();
    let rows: Vec<Vec<Scalar>> = nonconstant.iter().map(|m| basis.iter().map(|p| coeff(p, m)).collect()).collect();
    let rhs: Vec<Scalar> = nonconstant.iter().map(|m| coeff(a1, m).neg()).collect();
    let Some(sol) = solve(base, &rows, &rhs, unknowns.len()) else {
        return Ok(SearchOutcome::InfeasibleWithinBound { degree_bound: bound });
    };
    let one = Monomial::one(ring.num_vars());
    let const_part: Vec<Scalar> = basis.iter().map(|p| coeff(p, &one)).collect();
    let constant_of = |x: &[Scalar]| {
        x.iter().zip(&const_part).fold(coeff(a1, &one), |acc, (xi, ci)| acc.add(&xi.mul(ci)))
    };
    let mut x = sol.particular.clone();
    if constant_of(&x).is_zero() {
        let lin = |v: &[Scalar]| v.iter().zip(&const_part).fold(base.zero(), |acc, (vi, ci)| acc.add(&vi.mul(ci)));
        match sol.kernel.iter().find(|v| !lin(v).is_zero()) {
            Some(v) => x = x.iter().zip(v).map(|(a, b)| a.add(b)).collect(),
            None => return Ok(SearchOutcome::InfeasibleWithinBound { degree_bound: bound }),
        }
    }
    let c = RingElement::from_terms(ring, unknowns.iter().cloned().zip(x));
    let shortened = apply_reduction(u, std::slice::from_ref(&c))?;
    debug_assert!(shortened.components()[0].is_constant());
    Ok(SearchOutcome::Reducible(ReducibilityCertificate { coefficients: vec![c], shortened }))
}

/// `(z_1, z_3, ..., z_{2s-3}, p)` over `Q[z_1..z_d]` with `s = floor(d/2) + 1`
/// and `p = z_1 z_2 + z_3 z_4 + ... + z_{2s-3} z_{2s-2} - 1`; witness
/// `(z_2, z_4, ..., z_{2s-2}, -1)`.
pub fn bass_witness(d: usize) -> Result<UnimodularVector> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("d = {d}, need d >= 2")));
    }
    let ring = RingDescriptor::poly(BaseRing::Rational, d)?;
    let s = d / 2 + 1;
    let z = |i: usize| RingElement::x(&ring, i - 1);
    let mut comps: Vec<RingElement> = (1..s).map(|k| z(2 * k - 1)).collect();
    let mut wit: Vec<RingElement> = (1..s).map(|k| z(2 * k)).collect();
    let p = (1..s).fold(RingElement::from_i64(&ring, -1), |acc, k| &acc + &(&z(2 * k - 1) * &z(2 * k)));
    comps.push(p);
    wit.push(RingElement::from_i64(&ring, -1));
    UnimodularVector::new(comps, wit)
}

/// Outcome of an exhaustive check of the quotient criterion for one `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma26Report {
    pub ring: String,
    pub a: String,
    pub n: usize,
    pub quotient: String,
    /// Rows `(a_1..a_n, a)` that are unimodular.
    pub instances: usize,
    pub reducible: usize,
    /// Instances whose class modulo `a` is hit by `U_n(A)`.
    pub class_lifts: usize,
    pub agreements: usize,
    pub counterexamples: Vec<String>,
    pub all_reducible: bool,
    /// `U_n(A) -> U_n(A/aA)` is onto.
    pub surjective: bool,
    pub equivalence_holds: bool,
}

fn finite_unimodular(row: &[RingElement]) -> bool {
    let ring = row[0].ring();
    if ring.is_zero_ring() {
        return true;
    }
    match ring.base() {
        BaseRing::Modular(m) if ring.nilpotent_vars() == 0 => {
            row.iter().fold(m, |g, x| num_integer::gcd(g, modular_value(x))) == 1
        }
        _ => row.iter().any(is_unit),
    }
}

fn tuples(elems: &[RingElement], n: usize) -> Vec<Vec<RingElement>> {
    let mut out: Vec<Vec<RingElement>> = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| elems.iter().map(move |e| [t.clone(), vec![e.clone()]].concat())).collect();
    }
    out
}

fn project_row(q: &PrincipalQuotient, row: &[RingElement]) -> Result<Vec<RingElement>> {
    row.iter().map(|x| q.project(x)).collect()
}

/// For every `(a_1..a_n, a)` in `U_{n+1}(A)`: reducibility by exhaustive
/// search over `c`, against whether the class of `(a_1..a_n)` in
/// `(A/aA)^n` is the image of a row of `U_n(A)`. Globally: every such row
/// is reducible iff `U_n(A) -> U_n(A/aA)` is onto.
pub fn brute_force_lemma26(ring: &Ring, a: &RingElement, n: usize) -> Result<Lemma26Report> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidDimension(format!("n = {n}, expected 1, 2 or 3")));
    }
    if ring.kind() != RingKind::FiniteRing {
        return Err(Error::DescriptorMismatch(format!("{ring} is not a finite ring")));
    }
    let size = ring.cardinality().unwrap();
    let work = size.checked_pow(n as u32 + 1).unwrap_or(u128::MAX);
    if work > LEMMA26_CAP {
        return Err(Error::CardinalityTooLarge { size: work, cap: LEMMA26_CAP });
    }
    let q = quotient_by_principal(ring, a, DEFAULT_ENUMERATION_CAP)?;
    let elems: Vec<RingElement> = enumerate_ring(ring, DEFAULT_ENUMERATION_CAP)?.collect();
    let rows = tuples(&elems, n);
    let unimodular_rows: Vec<&Vec<RingElement>> = rows.iter().filter(|r| finite_unimodular(r)).collect();
    let image: HashSet<Vec<RingElement>> =
        unimodular_rows.iter().map(|r| project_row(&q, r)).collect::<Result<_>>()?;
    let qelems: Vec<RingElement> = enumerate_ring(q.target(), DEFAULT_ENUMERATION_CAP)?.collect();
    let surjective = tuples(&qelems, n).iter().filter(|r| finite_unimodular(r)).all(|r| image.contains(r));

    let mut report = Lemma26Report {
        ring: ring.to_string(),
        a: a.to_string(),
        n,
        quotient: q.target().to_string(),
        instances: 0,
        reducible: 0,
        class_lifts: 0,
        agreements: 0,
        counterexamples: Vec::new(),
        all_reducible: true,
        surjective,
        equivalence_holds: false,
    };
    let cs = tuples(&elems, n);
    for row in &rows {
        let mut full = row.clone();
        full.push(a.clone());
        if !finite_unimodular(&full) {
            continue;
        }
        report.instances += 1;
        let reducible = cs.iter().any(|c| {
            let short: Vec<RingElement> = row.iter().zip(c).map(|(x, ci)| x + &(ci * a)).collect();
            finite_unimodular(&short)
        });
        let lifts = image.contains(&project_row(&q, row)?);
        report.reducible += usize::from(reducible);
        report.class_lifts += usize::from(lifts);
        report.all_reducible &= reducible;
        if reducible == lifts {
            report.agreements += 1;
        } else {
            let cells: Vec<String> = full.iter().map(ToString::to_string).collect();
            report.counterexamples.push(format!("({})", cells.join(", ")));
        }
    }
    report.equivalence_holds = report.counterexamples.is_empty() && report.all_reducible == report.surjective;
    Ok(report)
}

/// Witnesses for a truncated-nilpotent row and its reduction, moved in both
/// directions.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub base_row: Vec<RingElement>,
    /// Witness found over the reduced ring.
    pub base: Option<UnimodularVector>,
    /// The base witness embedded and rescaled by the geometric series.
    pub lifted: Option<UnimodularVector>,
    /// A witness found directly over the full ring.
    pub direct: Option<UnimodularVector>,
    /// The direct witness reduced componentwise.
    pub reduced: Option<UnimodularVector>,
}

impl TransferReport {
    pub fn verdicts_agree(&self) -> bool {
        self.base.is_some() == self.direct.is_some()
    }

    /// Both transports re-verify, and reducing the lifted witness gives the
    /// base witness back.
    pub fn transports_verify(&self) -> Result<bool> {
        let (Some(base), Some(lifted), Some(reduced)) = (&self.base, &self.lifted, &self.reduced) else {
            return Ok(self.base.is_none() && self.direct.is_none());
        };
        let back: Vec<RingElement> = lifted.cofactors().iter().map(reduce_to_base).collect::<Result<_>>()?;
        Ok(base.verify() && lifted.verify() && reduced.verify() && back == base.cofactors())
    }
}

pub fn lift_witness(row: &[RingElement], base: &UnimodularVector) -> Result<UnimodularVector> {
    let ring = row_ring(row)?;
    let b = base.cofactors().iter().map(|x| embed_from_base(&ring, x)).collect::<Result<Vec<_>>>()?;
    UnimodularVector::new(row.to_vec(), rescale_defect(row, b)?)
}

pub fn reduce_witness(u: &UnimodularVector) -> Result<UnimodularVector> {
    let comps = u.components().iter().map(reduce_to_base).collect::<Result<Vec<_>>>()?;
    let b = u.cofactors().iter().map(reduce_to_base).collect::<Result<Vec<_>>>()?;
    UnimodularVector::new(comps, b)
}

pub fn transfer_through_radical(row: &[RingElement]) -> Result<TransferReport> {
    transfer_through_radical_with(row, &WorkCaps::default())
}

pub fn transfer_through_radical_with(row: &[RingElement], caps: &WorkCaps) -> Result<TransferReport> {
    let ring = row_ring(row)?;
    if ring.kind() != RingKind::TruncNil {
        return Err(Error::DescriptorMismatch(format!("{ring} is not a truncated-nilpotent ring")));
    }
    let base_row: Vec<RingElement> = row.iter().map(reduce_to_base).collect::<Result<_>>()?;
    let optional = |r: Result<UnimodularVector>| match r {
        Ok(u) => Ok(Some(u)),
        Err(Error::NotUnimodular) => Ok(None),
        Err(e) => Err(e),
    };
    let base = optional(is_unimodular_with(&base_row, caps))?;
    let lifted = base.as_ref().map(|b| lift_witness(row, b)).transpose()?;
    let direct = optional(is_unimodular_direct(row, caps))?;
    let reduced = direct.as_ref().map(reduce_witness).transpose()?;
    Ok(TransferReport { base_row, base, lifted, direct, reduced })
}

/// Lifts a reduction of the reduced row: the same coefficients, embedded,
/// reduce the full row because its shortened row reduces to a unimodular one.
pub fn lift_reduction(row: &[RingElement], base: &ReducibilityCertificate) -> Result<ReducibilityCertificate> {
    let ring = row_ring(row)?;
    let coefficients = base.coefficients.iter().map(|c| embed_from_base(&ring, c)).collect::<Result<Vec<_>>>()?;
    let short = shorten(row, &coefficients)?;
    let shortened = lift_witness(&short, &base.shortened)?;
    Ok(ReducibilityCertificate { coefficients, shortened })
}

/// An invertible matrix whose first column is `u`.
pub fn complete_to_invertible(u: &UnimodularVector) -> Result<RingMatrix> {
    let ring = u.ring();
    let a = u.components();
    let n = a.len();
    let m = match n {
        1 => RingMatrix::new(ring, vec![vec![a[0].clone()]])?,
        2 => {
            let b = u.cofactors();
            RingMatrix::new(ring, vec![vec![a[0].clone(), -&b[1]], vec![a[1].clone(), b[0].clone()]])?
        }
        _ => {
            let Some(i) = a.iter().position(is_unit) else {
                return Err(Error::CompletionUnsupported(format!("no unit component in a row of length {n}")));
            };
            let others: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            RingMatrix::from_fn(ring, n, n, |r, c| {
                if c == 0 {
                    a[r].clone()
                } else if r == others[c - 1] {
                    RingElement::one(ring)
                } else {
                    RingElement::zero(ring)
                }
            })
        }
    };
    debug_assert!(is_unit(&m.det()?));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_ring};

    fn row(r: &Ring, s: &[&str]) -> Vec<RingElement> {
        s.iter().map(|x| parse_element(r, x).unwrap()).collect()
    }

    #[test]
    fn unimodularity_examples() {
        let r = parse_ring("poly(Q;2)").unwrap();
        let u = is_unimodular(&row(&r, &["x1", "x1*x2 - 1"])).unwrap();
        assert_eq!(u.cofactors(), row(&r, &["x2", "-1"]));
        let one = is_unimodular(&row(&r, &["1"])).unwrap();
        assert_eq!(one.cofactors(), row(&r, &["1"]));
        assert!(matches!(is_unimodular(&row(&r, &["x1", "x2"])), Err(Error::NotUnimodular)));
        let z6 = parse_ring("zmod(6)").unwrap();
        assert!(is_unimodular(&row(&z6, &["2", "3"])).unwrap().verify());
        assert!(is_unimodular(&row(&z6, &["2", "4"])).is_err());
        let q = parse_ring("field(Q)").unwrap();
        assert!(is_unimodular(&row(&q, &["0", "0"])).is_err());
        assert!(is_unimodular(&row(&q, &["0", "3"])).is_ok());
    }

    #[test]
    fn reduction_examples() {
        let r = parse_ring("poly(Q;1)").unwrap();
        let u = is_unimodular(&row(&r, &["x1", "1"])).unwrap();
        let s = apply_reduction(&u, &row(&r, &["1 - x1"])).unwrap();
        assert_eq!(s.components(), row(&r, &["1"]));
        let r2 = parse_ring("poly(Q;2)").unwrap();
        let u = is_unimodular(&row(&r2, &["x1", "x1*x2 - 1"])).unwrap();
        assert!(matches!(apply_reduction(&u, &row(&r2, &["0"])), Err(Error::NotUnimodular)));
        let z4 = parse_ring("zmod(4)").unwrap();
        let u = is_unimodular(&row(&z4, &["3", "2"])).unwrap();
        assert_eq!(apply_reduction(&u, &row(&z4, &["1"])).unwrap().components(), row(&z4, &["1"]));
    }

    #[test]
    fn search_examples() {
        let r = parse_ring("poly(Q;1)").unwrap();
        let u = is_unimodular(&row(&r, &["x1", "1"])).unwrap();
        assert_eq!(search_reduction_pair(&u, 0).unwrap(), SearchOutcome::InfeasibleWithinBound { degree_bound: 0 });
        let SearchOutcome::Reducible(cert) = search_reduction_pair(&u, 1).unwrap() else { panic!() };
        assert_eq!(cert.coefficients, row(&r, &["1 - x1"]));
        assert!(cert.verify(u.components()));
        let zero = is_unimodular(&row(&r, &["0", "1"])).unwrap();
        let SearchOutcome::Reducible(cert) = search_reduction_pair(&zero, 2).unwrap() else { panic!() };
        assert_eq!(cert.coefficients, row(&r, &["1"]));
        let b = bass_witness(2).unwrap();
        assert!(matches!(search_reduction_pair(&b, 3).unwrap(), SearchOutcome::InfeasibleWithinBound { .. }));
        assert!(matches!(search_reduction_pair(&b, 9), Err(Error::DegreeBoundExceeded(_))));
    }

    #[test]
    fn bass_examples() {
        let b = bass_witness(2).unwrap();
        let r = b.ring().clone();
        assert_eq!(b.components(), row(&r, &["x1", "x1*x2 - 1"]));
        let b3 = bass_witness(3).unwrap();
        assert_eq!(b3.ring().num_vars(), 3);
        assert_eq!(b3.len(), 2);
        let b4 = bass_witness(4).unwrap();
        let r4 = b4.ring().clone();
        assert_eq!(b4.components(), row(&r4, &["x1", "x3", "x1*x2 + x3*x4 - 1"]));
        assert_eq!(b4.cofactors(), row(&r4, &["x2", "x4", "-1"]));
        assert!(matches!(bass_witness(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn lemma26_examples() {
        let z4 = parse_ring("zmod(4)").unwrap();
        let rep = brute_force_lemma26(&z4, &parse_element(&z4, "2").unwrap(), 1).unwrap();
        assert!(rep.equivalence_holds && rep.instances > 0);
        let d = parse_ring("dual(2;2)").unwrap();
        let rep = brute_force_lemma26(&d, &parse_element(&d, "e1").unwrap(), 2).unwrap();
        assert!(rep.equivalence_holds);
        let rep = brute_force_lemma26(&z4, &RingElement::one(&z4), 2).unwrap();
        assert!(rep.equivalence_holds && rep.all_reducible && rep.surjective);
        assert_eq!(rep.quotient, "zmod(1)");
    }

    #[test]
    fn transfer_examples() {
        let r = parse_ring("trunc(Q;1;1;2)").unwrap();
        let u = row(&r, &["x1 + e1", "1 - x1 + e1"]);
        let t = transfer_through_radical(&u).unwrap();
        assert!(t.verdicts_agree() && t.transports_verify().unwrap());
        let base = t.base.as_ref().unwrap();
        assert_eq!(base.cofactors(), row(base.ring(), &["1", "1"]));
        // j = 1 - (b . u) = -2 e1, so the rescale factor is 1 - 2 e1
        assert_eq!(t.lifted.as_ref().unwrap().cofactors(), row(&r, &["1 - 2*e1", "1 - 2*e1"]));

        let plain = row(&r, &["x1", "1 - x1"]);
        let t = transfer_through_radical(&plain).unwrap();
        assert_eq!(t.lifted.as_ref().unwrap().cofactors(), row(&r, &["1", "1"]));

        let v = row(&r, &["x1 + e1", "1"]);
        let base_u = is_unimodular(&row(&r.reduced().unwrap(), &["x1", "1"])).unwrap();
        let SearchOutcome::Reducible(cert) = search_reduction_pair(&base_u, 1).unwrap() else { panic!() };
        let lifted = lift_reduction(&v, &cert).unwrap();
        assert!(lifted.verify(&v));

        let not = row(&r, &["x1 + e1", "x1*e1"]);
        let t = transfer_through_radical(&not).unwrap();
        assert!(t.verdicts_agree() && t.base.is_none());
    }

    #[test]
    fn completion_examples() {
        let b = bass_witness(2).unwrap();
        let m = complete_to_invertible(&b).unwrap();
        let r = b.ring().clone();
        assert_eq!(m.to_rows(), vec![row(&r, &["x1", "1"]), row(&r, &["x1*x2 - 1", "x2"])]);
        assert!(m.det().unwrap().is_one());
        let q = parse_ring("field(Q)").unwrap();
        let e = is_unimodular(&row(&q, &["1", "0", "0"])).unwrap();
        assert!(complete_to_invertible(&e).unwrap().is_identity());
        let t = parse_ring("trunc(Q;1;1;2)").unwrap();
        let v = is_unimodular(&row(&t, &["1 + e1", "x1*e1", "x1"])).unwrap();
        let m = complete_to_invertible(&v).unwrap();
        assert!(is_unit(&m.det().unwrap()));
        let b4 = bass_witness(4).unwrap();
        assert!(matches!(complete_to_invertible(&b4), Err(Error::CompletionUnsupported(_))));
    }
}
