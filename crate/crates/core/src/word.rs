//! Elementary and triangular-unipotent generators and words built from them.

use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::poly::RingElement;
use crate::radical::exp_radical;
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    UpperUnipotent,
    LowerUnipotent,
    Neither,
}

/// The identity counts as upper unipotent.
pub fn classify_triangular(m: &RingMatrix) -> Result<Classification> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    if (0..n).any(|i| !m.get(i, i).is_one()) {
        return Ok(Classification::Neither);
    }
    let below_zero = (0..n).all(|i| (0..i).all(|j| m.get(i, j).is_zero()));
    let above_zero = (0..n).all(|i| (i + 1..n).all(|j| m.get(i, j).is_zero()));
    Ok(if below_zero {
        Classification::UpperUnipotent
    } else if above_zero {
        Classification::LowerUnipotent
    } else {
        Classification::Neither
    })
}

/// `I_n + value * E_ij` with 0-based `i != j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementaryMatrix {
    size: usize,
    i: usize,
    j: usize,
    value: RingElement,
}

impl ElementaryMatrix {
    pub fn new(size: usize, i: usize, j: usize, value: RingElement) -> Result<Self> {
        if i == j || i >= size || j >= size {
            return Err(Error::DimensionMismatch(format!("position ({i}, {j}) in size {size}")));
        }
        Ok(ElementaryMatrix { size, i, j, value })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn position(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn value(&self) -> &RingElement {
        &self.value
    }

    pub fn ring(&self) -> &Ring {
        self.value.ring()
    }

    pub fn shape(&self) -> Shape {
        if self.i < self.j {
            Shape::Upper
        } else {
            Shape::Lower
        }
    }

    pub fn inverse(&self) -> ElementaryMatrix {
        ElementaryMatrix { value: -&self.value, ..self.clone() }
    }

    pub fn to_matrix(&self) -> RingMatrix {
        let mut m = RingMatrix::identity(self.ring(), self.size);
        m.set(self.i, self.j, self.value.clone());
        m
    }

    /// `E * A`: adds `value * row j` to row `i`.
    pub fn apply_left(&self, a: &RingMatrix) -> Result<RingMatrix> {
        if a.rows() != self.size {
            return Err(Error::DimensionMismatch(format!("E of size {} applied to {} rows", self.size, a.rows())));
        }
        if a.ring() != self.ring() {
            return Err(Error::DescriptorMismatch(format!("{} vs {}", a.ring(), self.ring())));
        }
        let mut out = a.clone();
        out.add_row_multiple(self.i, self.j, &self.value);
        Ok(out)
    }
}

pub fn build_elementary(n: usize, i: usize, j: usize, v: RingElement) -> Result<ElementaryMatrix> {
    ElementaryMatrix::new(n, i, j, v)
}

pub fn apply_elementary_left(e: &ElementaryMatrix, a: &RingMatrix) -> Result<RingMatrix> {
    e.apply_left(a)
}

/// A unipotent triangular matrix, stored in full.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriangularUnipotent {
    shape: Shape,
    matrix: RingMatrix,
}

impl TriangularUnipotent {
    pub fn new(shape: Shape, matrix: RingMatrix) -> Result<Self> {
        let ok = match classify_triangular(&matrix)? {
            Classification::UpperUnipotent => shape == Shape::Upper || matrix.is_identity(),
            Classification::LowerUnipotent => shape == Shape::Lower,
            Classification::Neither => false,
        };
        if !ok {
            return Err(Error::NotTriangularWord(format!("{matrix} is not {shape:?} unipotent")));
        }
        Ok(TriangularUnipotent { shape, matrix })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Factor {
    Elementary(ElementaryMatrix),
    Triangular(TriangularUnipotent),
    /// `exp(h) * I` for a radical `h`.
    ScalarExp { size: usize, h: RingElement },
}

impl Factor {
    pub fn elementary(size: usize, i: usize, j: usize, v: RingElement) -> Result<Factor> {
        Ok(Factor::Elementary(ElementaryMatrix::new(size, i, j, v)?))
    }

    pub fn size(&self) -> usize {
        match self {
            Factor::Elementary(e) => e.size(),
            Factor::Triangular(t) => t.matrix.rows(),
            Factor::ScalarExp { size, .. } => *size,
        }
    }

    pub fn ring(&self) -> &Ring {
        match self {
            Factor::Elementary(e) => e.ring(),
            Factor::Triangular(t) => t.matrix.ring(),
            Factor::ScalarExp { h, .. } => h.ring(),
        }
    }

    pub fn to_matrix(&self) -> Result<RingMatrix> {
        match self {
            Factor::Elementary(e) => Ok(e.to_matrix()),
            Factor::Triangular(t) => Ok(t.matrix.clone()),
            Factor::ScalarExp { size, h } if h.is_zero() => Ok(RingMatrix::identity(h.ring(), *size)),
            Factor::ScalarExp { size, h } => {
                let s = exp_radical(h)?;
                Ok(RingMatrix::identity(h.ring(), *size).scale(&s))
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Factor::Elementary(e) => e.value.is_zero(),
            Factor::Triangular(t) => t.matrix.is_identity(),
            Factor::ScalarExp { h, .. } => h.is_zero(),
        }
    }

    /// `None` for scalar factors.
    pub fn shape(&self) -> Option<Shape> {
        match self {
            Factor::Elementary(e) => Some(e.shape()),
            Factor::Triangular(t) => Some(t.shape),
            Factor::ScalarExp { .. } => None,
        }
    }

    fn from_triangular_matrix(shape: Shape, m: RingMatrix) -> Factor {
        let n = m.rows();
        let off: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && !m.get(i, j).is_zero()).collect();
        if let [(i, j)] = off[..] {
            Factor::Elementary(ElementaryMatrix { size: n, i, j, value: m.get(i, j).clone() })
        } else {
            Factor::Triangular(TriangularUnipotent { shape, matrix: m })
        }
    }
}

/// An ordered product of factors together with the matrix it claims to equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWord {
    ring: Ring,
    size: usize,
    factors: Vec<Factor>,
    target: RingMatrix,
}

impl FactorWord {
    pub fn new(ring: &Ring, size: usize, factors: Vec<Factor>, target: RingMatrix) -> Result<Self> {
        if target.rows() != size || target.cols() != size {
            return Err(Error::DimensionMismatch(format!("target {}x{} for size {size}", target.rows(), target.cols())));
        }
        if target.ring() != ring {
            return Err(Error::DescriptorMismatch(format!("target over {} in word over {ring}", target.ring())));
        }
        for f in &factors {
            if f.size() != size {
                return Err(Error::DimensionMismatch(format!("factor of size {} in word of size {size}", f.size())));
            }
            if f.ring() != ring {
                return Err(Error::DescriptorMismatch(format!("factor over {} in word over {ring}", f.ring())));
            }
        }
        Ok(FactorWord { ring: ring.clone(), size, factors, target })
    }

    /// A word whose target is its own product.
    pub fn from_factors(ring: &Ring, size: usize, factors: Vec<Factor>) -> Result<Self> {
        let mut w = FactorWord::new(ring, size, factors, RingMatrix::identity(ring, size))?;
        w.target = w.product()?;
        Ok(w)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn target(&self) -> &RingMatrix {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn elementary_count(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Elementary(_))).count()
    }

    pub fn product(&self) -> Result<RingMatrix> {
        let mut acc = RingMatrix::identity(&self.ring, self.size);
        for f in &self.factors {
            acc = match f {
                Factor::Elementary(e) => {
                    let mut next = acc;
                    // acc * E adds value * column i to column j
                    for r in 0..self.size {
                        let t = next.get(r, e.i) * &e.value;
                        let v = next.get(r, e.j) + &t;
                        next.set(r, e.j, v);
                    }
                    next
                }
                _ => acc.mul(&f.to_matrix()?)?,
            };
        }
        Ok(acc)
    }

    /// Exact re-check of `product == target`.
    pub fn verify(&self) -> bool {
        self.product().is_ok_and(|p| p == self.target)
    }

    /// `true` when every factor is triangular and consecutive shapes differ.
    pub fn is_alternating(&self) -> bool {
        let shapes: Option<Vec<Shape>> = self.factors.iter().map(Factor::shape).collect();
        shapes.is_some_and(|s| s.windows(2).all(|w| w[0] != w[1]))
    }

    pub fn with_target(mut self, target: RingMatrix) -> Result<Self> {
        FactorWord::new(&self.ring, self.size, std::mem::take(&mut self.factors), target)
    }

    /// `self * other`. Scalar factors are central and are gathered into one
    /// leading `ScalarExp` with the exponents summed.
    pub fn concat(&self, other: &FactorWord) -> Result<FactorWord> {
        if self.size != other.size || self.ring != other.ring {
            return Err(Error::DimensionMismatch("words of different size or ring".into()));
        }
        let mut h: Option<RingElement> = None;
        let mut rest = Vec::new();
        for f in self.factors.iter().chain(&other.factors) {
            match f {
                Factor::ScalarExp { h: e, .. } => h = Some(h.map_or_else(|| e.clone(), |acc| &acc + e)),
                _ => rest.push(f.clone()),
            }
        }
        let mut factors = Vec::with_capacity(rest.len() + 1);
        if let Some(h) = h {
            factors.push(Factor::ScalarExp { size: self.size, h });
        }
        factors.extend(rest);
        FactorWord::new(&self.ring, self.size, factors, self.target.mul(&other.target)?)
    }
}

pub fn verify_word(w: &FactorWord) -> bool {
    w.verify()
}

/// Drops identity factors and multiplies neighbours of equal shape until the
/// word alternates. The product and target are unchanged.
pub fn normalize_word(w: &FactorWord) -> Result<FactorWord> {
    let mut stack: Vec<(Shape, RingMatrix)> = Vec::new();
    for f in &w.factors {
        if f.is_identity() {
            continue;
        }
        let Some(shape) = f.shape() else {
            return Err(Error::NotTriangularWord("nontrivial scalar factor blocks merging".into()));
        };
        let m = f.to_matrix()?;
        match stack.last() {
            Some((s, _)) if *s == shape => {
                let (_, top) = stack.pop().unwrap();
                let merged = top.mul(&m)?;
                if !merged.is_identity() {
                    stack.push((shape, merged));
                }
            }
            _ => stack.push((shape, m)),
        }
    }
    let factors = stack.into_iter().map(|(s, m)| Factor::from_triangular_matrix(s, m)).collect();
    FactorWord::new(&w.ring, w.size, factors, w.target.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_ring};

    fn el(r: &Ring, n: usize, i: usize, j: usize, v: &str) -> Factor {
        Factor::elementary(n, i, j, parse_element(r, v).unwrap()).unwrap()
    }

    #[test]
    fn elementary_basics() {
        let r = parse_ring("poly(Q;1)").unwrap();
        let e = build_elementary(2, 0, 1, RingElement::zero(&r)).unwrap();
        assert!(e.to_matrix().is_identity());
        assert!(build_elementary(2, 1, 1, RingElement::one(&r)).is_err());
        let x = parse_element(&r, "x1").unwrap();
        let e21 = build_elementary(2, 1, 0, x.clone()).unwrap();
        assert_eq!(classify_triangular(&e21.to_matrix()).unwrap(), Classification::LowerUnipotent);
        assert!(e21.to_matrix().det().unwrap().is_one());
        let q = parse_ring("field(Q)").unwrap();
        let e12 = build_elementary(2, 0, 1, RingElement::from_i64(&q, 5)).unwrap();
        assert_eq!(classify_triangular(&e12.to_matrix()).unwrap(), Classification::UpperUnipotent);
        let d = RingMatrix::diagonal(&q, &[RingElement::from_i64(&q, 2), parse_element(&q, "1/2").unwrap()]);
        assert_eq!(classify_triangular(&d).unwrap(), Classification::Neither);
        assert_eq!(classify_triangular(&RingMatrix::identity(&q, 3)).unwrap(), Classification::UpperUnipotent);
    }

    #[test]
    fn apply_left_clears_corner() {
        let q = parse_ring("field(Q)").unwrap();
        let p = |s: &str| parse_element(&q, s).unwrap();
        let a = RingMatrix::new(&q, vec![vec![p("3"), p("5")], vec![p("7"), p("11")]]).unwrap();
        let e = build_elementary(2, 1, 0, p("-7/3")).unwrap();
        let out = apply_elementary_left(&e, &a).unwrap();
        assert!(out.get(1, 0).is_zero());
        assert_eq!(out, e.to_matrix().mul(&a).unwrap());
    }

    #[test]
    fn verify_examples() {
        let q = parse_ring("field(Q)").unwrap();
        let id = RingMatrix::identity(&q, 2);
        assert!(FactorWord::new(&q, 2, vec![], id.clone()).unwrap().verify());
        let w = FactorWord::new(&q, 2, vec![el(&q, 2, 0, 1, "1"), el(&q, 2, 0, 1, "-1")], id.clone()).unwrap();
        assert!(w.verify());
        let bad = FactorWord::new(&q, 2, vec![el(&q, 2, 0, 1, "1"), el(&q, 2, 0, 1, "-2")], id).unwrap();
        assert!(!bad.verify());
    }

    #[test]
    fn normalization_merges_and_drops() {
        let q = parse_ring("field(Q)").unwrap();
        let w = FactorWord::from_factors(&q, 2, vec![el(&q, 2, 0, 1, "2"), el(&q, 2, 0, 1, "3")]).unwrap();
        let n = normalize_word(&w).unwrap();
        assert_eq!(n.factors(), &[el(&q, 2, 0, 1, "5")]);
        let alt = FactorWord::from_factors(
            &q,
            2,
            vec![el(&q, 2, 0, 1, "2"), el(&q, 2, 1, 0, "3"), el(&q, 2, 0, 1, "4"), el(&q, 2, 1, 0, "5")],
        )
        .unwrap();
        assert_eq!(normalize_word(&alt).unwrap(), alt);
        // cancellation re-exposes equal neighbours
        let c = FactorWord::from_factors(
            &q,
            2,
            vec![el(&q, 2, 0, 1, "2"), el(&q, 2, 1, 0, "3"), el(&q, 2, 1, 0, "-3"), el(&q, 2, 0, 1, "1")],
        )
        .unwrap();
        let n = normalize_word(&c).unwrap();
        assert_eq!(n.factors(), &[el(&q, 2, 0, 1, "3")]);
        assert!(n.verify());
        let s = FactorWord::from_factors(&q, 2, vec![Factor::ScalarExp { size: 2, h: RingElement::zero(&q) }]).unwrap();
        assert!(normalize_word(&s).unwrap().is_empty());
    }

    #[test]
    fn merged_upper_block_in_size_three() {
        let q = parse_ring("field(Q)").unwrap();
        let w = FactorWord::from_factors(&q, 3, vec![el(&q, 3, 0, 1, "1"), el(&q, 3, 1, 2, "1"), el(&q, 3, 2, 0, "1")])
            .unwrap();
        let n = normalize_word(&w).unwrap();
        assert_eq!(n.len(), 2);
        assert!(matches!(n.factors()[0], Factor::Triangular(_)));
        assert!(n.verify() && n.is_alternating());
    }

    #[test]
    fn scalar_factor_blocks_normalization() {
        let r = parse_ring("trunc(Q;0;1;2)").unwrap();
        let h = parse_element(&r, "e1").unwrap();
        let w = FactorWord::from_factors(&r, 2, vec![Factor::ScalarExp { size: 2, h }]).unwrap();
        assert!(matches!(normalize_word(&w), Err(Error::NotTriangularWord(_))));
    }
}
