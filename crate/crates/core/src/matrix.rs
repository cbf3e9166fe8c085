//! Dense matrices over the supported rings.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ideal::divide;
use crate::poly::RingElement;
use crate::radical::{invert, is_in_radical, is_unit};
use crate::ring::{Ring, RingKind};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl RingMatrix {
    pub fn new(ring: &Ring, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        let data: Vec<RingElement> = rows.into_iter().flatten().collect();
        for e in &data {
            if e.ring() != ring {
                return Err(Error::DescriptorMismatch(format!("entry in {} inside {}", e.ring(), ring)));
            }
        }
        Ok(RingMatrix { ring: ring.clone(), rows: n, cols, data })
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> RingElement) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        RingMatrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { RingElement::one(ring) } else { RingElement::zero(ring) })
    }

    pub fn diagonal(ring: &Ring, entries: &[RingElement]) -> Self {
        let n = entries.len();
        Self::from_fn(ring, n, n, |i, j| if i == j { entries[i].clone() } else { RingElement::zero(ring) })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &RingElement> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<RingElement>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[RingElement]>::to_vec).collect()
    }

    pub fn map(&self, target: &Ring, f: impl Fn(&RingElement) -> RingElement) -> RingMatrix {
        RingMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, target: &Ring, f: impl Fn(&RingElement) -> Result<RingElement>) -> Result<RingMatrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(RingMatrix { ring: target.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &RingElement) -> RingMatrix {
        self.map(&self.ring, |e| e * c)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let e = self.get(i, j);
                if i == j { e.is_one() } else { e.is_zero() }
            }))
    }

    pub fn transpose(&self) -> RingMatrix {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn same_shape(&self, other: &RingMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.same_shape(other)?;
        Ok(Self::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.same_shape(other)?;
        Ok(Self::from_fn(&self.ring, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(Self::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = RingElement::zero(&self.ring);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    /// Adds `v * row(src)` to row `dst`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, v: &RingElement) {
        for j in 0..self.cols {
            let t = self.get(src, j) * v;
            let n = self.get(dst, j) + &t;
            self.set(dst, j, n);
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)))
        }
    }

    /// Determinant: cofactor expansion up to 4x4, fraction-free Bareiss over
    /// integral domains beyond that, memoized Laplace expansion otherwise.
    pub fn det(&self) -> Result<RingElement> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(RingElement::one(&self.ring));
        }
        if n > 4 && matches!(self.ring.kind(), RingKind::Field | RingKind::Poly) {
            return Ok(self.bareiss());
        }
        let mut memo = HashMap::new();
        Ok(self.laplace(0, (1u64 << n) - 1, &mut memo))
    }

    /// Determinant of the submatrix on rows `row..n` and the columns in `mask`.
    fn laplace(&self, row: usize, mask: u64, memo: &mut HashMap<u64, RingElement>) -> RingElement {
        if row == self.rows {
            return RingElement::one(&self.ring);
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = RingElement::zero(&self.ring);
        let mut sign_positive = true;
        for c in 0..self.cols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let a = self.get(row, c);
            if !a.is_zero() {
                let minor = self.laplace(row + 1, mask & !(1 << c), memo);
                let t = a * &minor;
                acc = if sign_positive { &acc + &t } else { &acc - &t };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    fn bareiss(&self) -> RingElement {
        let n = self.rows;
        let mut m = self.to_rows();
        let mut prev = RingElement::one(&self.ring);
        let mut negate = false;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        negate = !negate;
                    }
                    None => return RingElement::zero(&self.ring),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    let (q, r) = divide(&num, std::slice::from_ref(&prev));
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q.into_iter().next().unwrap();
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -&d
        } else {
            d
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> RingMatrix {
        let n = self.rows;
        Self::from_fn(&self.ring, n - 1, n - 1, |i, j| {
            self.get(if i < skip_row { i } else { i + 1 }, if j < skip_col { j } else { j + 1 }).clone()
        })
    }

    /// `true` when every entry of `I - A` lies in the radical.
    pub fn is_radical_perturbation(&self) -> Result<bool> {
        self.require_square()?;
        let id = RingMatrix::identity(&self.ring, self.rows);
        for e in id.sub(self)?.entries() {
            if !is_in_radical(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact inverse. A radical perturbation `I - N` is inverted by the
    /// finite series `sum N^i`; anything else through the adjugate.
    pub fn invert(&self) -> Result<RingMatrix> {
        self.require_square()?;
        let n = self.rows;
        let det = self.det()?;
        if !is_unit(&det) {
            return Err(Error::NotAUnit(format!("determinant {det}")));
        }
        let id = RingMatrix::identity(&self.ring, n);
        if self.ring.has_radical() && self.is_radical_perturbation()? {
            let nil = id.sub(self)?;
            let mut acc = id.clone();
            let mut p = id.clone();
            for _ in 1..self.ring.nilpotency_bound().max(1) {
                p = p.mul(&nil)?;
                if p.entries().all(RingElement::is_zero) {
                    break;
                }
                acc = acc.add(&p)?;
            }
            debug_assert!(self.mul(&acc)?.is_identity());
            return Ok(acc);
        }
        let det_inv = invert(&det)?;
        if n == 1 {
            return Ok(RingMatrix::from_fn(&self.ring, 1, 1, |_, _| det_inv.clone()));
        }
        let mut cof = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // adj[i][j] = (-1)^(i+j) det(minor(j, i))
                let d = self.minor(j, i).det()?;
                let d = if (i + j) % 2 == 0 { d } else { -&d };
                cof.push(&d * &det_inv);
            }
        }
        Ok(RingMatrix { ring: self.ring.clone(), rows: n, cols: n, data: cof })
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMatrix({self} over {})", self.ring)
    }
}
