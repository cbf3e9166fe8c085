//! Unit-ideal membership with explicit cofactors.
//!
//! Buchberger's algorithm over a field, with the product and chain criteria
//! for pair pruning, carrying a transformation row for every basis element so
//! that any element of the basis (in particular `1`) is expressed against the
//! original generators.

use crate::error::{Error, Result};
use crate::poly::{Monomial, RingElement};
use crate::ring::{Ring, RingKind};

/// Resource limits for Buchberger runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkCaps {
    pub max_pair_reductions: usize,
    pub max_degree: u32,
}

impl Default for WorkCaps {
    fn default() -> Self {
        WorkCaps { max_pair_reductions: 10_000, max_degree: 40 }
    }
}

/// Generators of an ideal of a polynomial ring.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealBasis {
    ring: Ring,
    generators: Vec<RingElement>,
    groebner: bool,
}

/// Cofactors `b` with `sum b_i a_i = 1` against a stated generator list.
#[derive(Debug, Clone, PartialEq)]
pub struct CofactorWitness {
    generators: Vec<RingElement>,
    cofactors: Vec<RingElement>,
}

impl CofactorWitness {
    /// Checks the identity by expansion; fails on mismatch.
    pub fn new(generators: Vec<RingElement>, cofactors: Vec<RingElement>) -> Result<Self> {
        if generators.len() != cofactors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} generators, {} cofactors",
                generators.len(),
                cofactors.len()
            )));
        }
        let w = CofactorWitness { generators, cofactors };
        if !w.holds()? {
            return Err(Error::WitnessMismatch(format!("sum b_i a_i = {}", w.combination()?)));
        }
        Ok(w)
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn cofactors(&self) -> &[RingElement] {
        &self.cofactors
    }

    fn combination(&self) -> Result<RingElement> {
        combine(&self.generators, &self.cofactors)
    }

    pub fn holds(&self) -> Result<bool> {
        Ok(self.combination()?.is_one())
    }
}

/// `sum b_i a_i`.
pub fn combine(a: &[RingElement], b: &[RingElement]) -> Result<RingElement> {
    let ring = a.first().or(b.first()).map(|e| e.ring().clone());
    let Some(ring) = ring else {
        return Err(Error::DimensionMismatch("empty row".into()));
    };
    let mut acc = RingElement::zero(&ring);
    for (x, y) in a.iter().zip(b) {
        x.same_ring(y)?;
        acc = &acc + &(x * y);
    }
    Ok(acc)
}

fn require_poly(ring: &Ring) -> Result<()> {
    match ring.kind() {
        RingKind::Poly | RingKind::Field => Ok(()),
        _ => Err(Error::DescriptorMismatch(format!("{ring} is not a polynomial ring over a field"))),
    }
}

impl IdealBasis {
    pub fn new(ring: &Ring, generators: Vec<RingElement>) -> Result<Self> {
        require_poly(ring)?;
        for g in &generators {
            if g.ring() != ring {
                return Err(Error::DescriptorMismatch(format!("generator in {}", g.ring())));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealBasis { ring: ring.clone(), generators, groebner: false })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn is_groebner(&self) -> bool {
        self.groebner
    }

    /// Re-checks the Buchberger criterion: every S-polynomial reduces to zero.
    pub fn satisfies_s_criterion(&self) -> bool {
        let g = &self.generators;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let s = s_polynomial(&g[i], &g[j]);
                if !divide(&s, g).1.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Membership test; requires a Gröbner basis.
    pub fn contains(&self, f: &RingElement) -> Result<bool> {
        if !self.groebner {
            return Err(Error::DescriptorMismatch("membership needs a Groebner basis".into()));
        }
        Ok(divide(f, &self.generators).1.is_zero())
    }
}

fn monic(f: &RingElement) -> (RingElement, crate::scalar::Scalar) {
    let lc_inv = f.leading().expect("nonzero").1.inv().expect("field coefficient");
    (f.scale(&lc_inv), lc_inv)
}

fn s_polynomial(f: &RingElement, g: &RingElement) -> RingElement {
    let (mf, cf) = f.leading().unwrap();
    let (mg, cg) = g.leading().unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&l), &cf.inv().unwrap());
    let b = g.mul_term(&mg.quotient_of(&l), &cg.inv().unwrap());
    &a - &b
}

/// Multivariate division with full reduction: `f = sum q_i g_i + r`, no term
/// of `r` divisible by a leading monomial of the divisors.
pub fn divide(f: &RingElement, divisors: &[RingElement]) -> (Vec<RingElement>, RingElement) {
    let ring = f.ring();
    let mut q = vec![RingElement::zero(ring); divisors.len()];
    let mut rest = f.clone();
    let mut rem_terms = Vec::new();
    while let Some((m, c)) = rest.leading().cloned() {
        let hit = divisors.iter().position(|g| g.leading().is_some_and(|(lm, _)| lm.divides(&m)));
        match hit {
            Some(k) => {
                let (lm, lc) = divisors[k].leading().unwrap();
                let factor = lm.quotient_of(&m);
                let coef = c.mul(&lc.inv().unwrap());
                rest = &rest - &divisors[k].mul_term(&factor, &coef);
                q[k] = &q[k] + &RingElement::from_terms(ring, [(factor, coef)]);
            }
            None => {
                rem_terms.push((m.clone(), c.clone()));
                rest = &rest - &RingElement::from_terms(ring, [(m, c)]);
            }
        }
    }
    (q, RingElement::from_terms(ring, rem_terms))
}

#[derive(Clone)]
struct Tracked {
    poly: RingElement,
    row: Vec<RingElement>,
}

impl Tracked {
    fn scale(&self, c: &crate::scalar::Scalar) -> Tracked {
        Tracked { poly: self.poly.scale(c), row: self.row.iter().map(|r| r.scale(c)).collect() }
    }

    fn sub_term_multiple(&mut self, other: &Tracked, m: &Monomial, c: &crate::scalar::Scalar) {
        self.poly = &self.poly - &other.poly.mul_term(m, c);
        for (a, b) in self.row.iter_mut().zip(&other.row) {
            *a = &*a - &b.mul_term(m, c);
        }
    }
}

/// Reduces `t` fully against `basis`, keeping the transformation row.
fn tracked_reduce(mut t: Tracked, basis: &[Tracked], caps: &WorkCaps) -> Result<Tracked> {
    let ring = t.poly.ring().clone();
    let mut remainder = RingElement::zero(&ring);
    while let Some((m, c)) = t.poly.leading().cloned() {
        if m.degree() > caps.max_degree {
            return Err(Error::DegreeBoundExceeded(format!("intermediate degree {} > {}", m.degree(), caps.max_degree)));
        }
        match basis.iter().find(|g| g.poly.leading().is_some_and(|(lm, _)| lm.divides(&m))) {
            Some(g) => {
                let (lm, lc) = g.poly.leading().unwrap();
                let coef = c.mul(&lc.inv().unwrap());
                t.sub_term_multiple(g, &lm.quotient_of(&m), &coef);
            }
            None => {
                let lt = RingElement::from_terms(&ring, [(m, c)]);
                t.poly = &t.poly - &lt;
                remainder = &remainder + &lt;
            }
        }
    }
    t.poly = remainder;
    Ok(t)
}

/// A Gröbner basis with, for every element, its expression in the original
/// generators: `basis[k] = sum transform[k][i] * generators[i]`.
#[derive(Debug, Clone)]
pub struct TrackedBasis {
    pub generators: Vec<RingElement>,
    pub basis: Vec<RingElement>,
    pub transform: Vec<Vec<RingElement>>,
}

struct Buchberger<'a> {
    caps: &'a WorkCaps,
    basis: Vec<Tracked>,
    pairs: Vec<(usize, usize)>,
    reductions: usize,
}

impl Buchberger<'_> {
    fn lm(&self, i: usize) -> &Monomial {
        &self.basis[i].poly.leading().unwrap().0
    }

    fn pending(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.pairs.contains(&(a, b))
    }

    /// Chain criterion: some other leading monomial divides the lcm and both
    /// connecting pairs are already handled.
    fn chain_redundant(&self, i: usize, j: usize, l: &Monomial) -> bool {
        (0..self.basis.len()).any(|k| {
            k != i && k != j && self.lm(k).divides(l) && !self.pending(i, k) && !self.pending(j, k)
        })
    }

    fn push(&mut self, t: Tracked) {
        let (_, c) = monic(&t.poly);
        let idx = self.basis.len();
        self.basis.push(t.scale(&c));
        for i in 0..idx {
            self.pairs.push((i, idx));
        }
    }

    fn run(&mut self) -> Result<()> {
        loop {
            if self.basis.iter().any(|t| t.poly.is_constant()) {
                return Ok(());
            }
            // normal selection strategy: smallest lcm first
            let Some(pos) = (0..self.pairs.len()).min_by(|&a, &b| {
                let (i, j) = self.pairs[a];
                let (k, l) = self.pairs[b];
                self.lm(i).lcm(self.lm(j)).cmp(&self.lm(k).lcm(self.lm(l)))
            }) else {
                return Ok(());
            };
            let (i, j) = self.pairs.remove(pos);
            let (mi, mj) = (self.lm(i).clone(), self.lm(j).clone());
            if mi.coprime(&mj) {
                continue;
            }
            let l = mi.lcm(&mj);
            if self.chain_redundant(i, j, &l) {
                continue;
            }
            self.reductions += 1;
            if self.reductions > self.caps.max_pair_reductions {
                return Err(Error::DegreeBoundExceeded(format!(
                    "more than {} pair reductions",
                    self.caps.max_pair_reductions
                )));
            }
            let ring = self.basis[i].poly.ring().clone();
            let one = ring.base().one();
            let mut s = self.basis[i].clone();
            let zero = Tracked {
                poly: RingElement::zero(&ring),
                row: vec![RingElement::zero(&ring); s.row.len()],
            };
            s = {
                let mut acc = zero;
                acc.sub_term_multiple(&s, &mi.quotient_of(&l), &one.neg());
                acc.sub_term_multiple(&self.basis[j], &mj.quotient_of(&l), &one);
                acc
            };
            let r = tracked_reduce(s, &self.basis, self.caps)?;
            if !r.poly.is_zero() {
                self.push(r);
            }
        }
    }
}

fn tracked_groebner(ring: &Ring, generators: &[RingElement], caps: &WorkCaps) -> Result<Vec<Tracked>> {
    require_poly(ring)?;
    let n = generators.len();
    let mut b = Buchberger { caps, basis: Vec::new(), pairs: Vec::new(), reductions: 0 };
    for (i, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut row = vec![RingElement::zero(ring); n];
        row[i] = RingElement::one(ring);
        let t = tracked_reduce(Tracked { poly: g.clone(), row }, &b.basis, caps)?;
        if !t.poly.is_zero() {
            b.push(t);
        }
    }
    b.run()?;
    Ok(b.basis)
}

/// Computes the reduced Gröbner basis with transformation rows.
pub fn groebner_tracked(ideal: &IdealBasis, caps: &WorkCaps) -> Result<TrackedBasis> {
    let gens = ideal.generators.clone();
    let raw = tracked_groebner(&ideal.ring, &gens, caps)?;
    if let Some(unit) = raw.iter().find(|t| t.poly.is_constant()) {
        let (_, c) = monic(&unit.poly);
        let t = unit.scale(&c);
        return Ok(TrackedBasis { generators: gens, basis: vec![t.poly], transform: vec![t.row] });
    }
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Tracked> = Vec::new();
    for (k, t) in raw.iter().enumerate() {
        let lm = &t.poly.leading().unwrap().0;
        let redundant = raw.iter().enumerate().any(|(l, u)| {
            let lu = &u.poly.leading().unwrap().0;
            l != k && lu.divides(lm) && (lu != lm || l < k)
        });
        if !redundant {
            keep.push(t.clone());
        }
    }
    // interreduce
    for k in 0..keep.len() {
        let others: Vec<Tracked> = keep.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, t)| t.clone()).collect();
        let lead = keep[k].poly.leading().cloned().unwrap();
        let head = Tracked {
            poly: RingElement::from_terms(&ideal.ring, [lead.clone()]),
            row: vec![RingElement::zero(&ideal.ring); gens.len()],
        };
        let mut tail = keep[k].clone();
        tail.poly = &tail.poly - &head.poly;
        let mut reduced = tracked_reduce(tail, &others, caps)?;
        reduced.poly = &reduced.poly + &head.poly;
        let (_, c) = monic(&reduced.poly);
        keep[k] = reduced.scale(&c);
    }
    keep.sort_by(|a, b| b.poly.leading().unwrap().0.cmp(&a.poly.leading().unwrap().0));
    Ok(TrackedBasis {
        generators: gens,
        basis: keep.iter().map(|t| t.poly.clone()).collect(),
        transform: keep.into_iter().map(|t| t.row).collect(),
    })
}

/// Reduced Gröbner basis of the same ideal.
pub fn groebner_basis(ideal: &IdealBasis, caps: &WorkCaps) -> Result<IdealBasis> {
    let t = groebner_tracked(ideal, caps)?;
    Ok(IdealBasis { ring: ideal.ring.clone(), generators: t.basis, groebner: true })
}

/// Cofactors expressing 1 in the ORIGINAL generators, or `None` when the
/// ideal is proper.
pub fn unit_ideal_witness(generators: &[RingElement], caps: &WorkCaps) -> Result<Option<CofactorWitness>> {
    let Some(first) = generators.first() else {
        return Ok(None);
    };
    let ring = first.ring().clone();
    IdealBasis::new(&ring, generators.to_vec())?;
    let raw = tracked_groebner(&ring, generators, caps)?;
    match raw.iter().find(|t| t.poly.is_constant() && !t.poly.is_zero()) {
        Some(t) => {
            let c = t.poly.constant_term().inv().expect("nonzero constant in a field");
            let cof = t.row.iter().map(|r| r.scale(&c)).collect();
            CofactorWitness::new(generators.to_vec(), cof).map(Some)
        }
        None => Ok(None),
    }
}

/// Monic gcd with Bézout cofactors for univariate polynomials over a field.
pub fn extended_gcd(a: &RingElement, b: &RingElement) -> Result<(RingElement, RingElement, RingElement)> {
    a.same_ring(b)?;
    let ring = a.ring();
    if !matches!(ring.kind(), RingKind::Poly | RingKind::Field) || ring.num_vars() > 1 {
        return Err(Error::DescriptorMismatch(format!("{ring} is not univariate over a field")));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (RingElement::one(ring), RingElement::zero(ring));
    let (mut t0, mut t1) = (RingElement::zero(ring), RingElement::one(ring));
    while !r1.is_zero() {
        let (q, r) = divide(&r0, std::slice::from_ref(&r1));
        let q = &q[0];
        let s2 = &s0 - &(q * &s1);
        let t2 = &t0 - &(q * &t1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    if r0.is_zero() {
        return Ok((r0, s0, t0));
    }
    let c = r0.leading().unwrap().1.inv().unwrap();
    Ok((r0.scale(&c), s0.scale(&c), t0.scale(&c)))
}
