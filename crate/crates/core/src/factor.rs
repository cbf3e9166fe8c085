//! Factorization engines: radical perturbations, the Whitehead diagonal,
//! SL2 triangular words, elementary words for SL_n, quotient lifting and the
//! bound calculator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{enumerate_ring, DEFAULT_ENUMERATION_CAP};
use crate::matrix::RingMatrix;
use crate::poly::{Monomial, RingElement};
use crate::radical::{div_integer, exp_radical, invert, is_in_radical, is_unit, log_one_minus};
use crate::ring::{Ring, RingKind};
use crate::word::{normalize_word, ElementaryMatrix, Factor, FactorWord};

fn require_square(m: &RingMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())))
    }
}

fn require_det_one(m: &RingMatrix) -> Result<()> {
    let d = m.det()?;
    if d.is_one() {
        Ok(())
    } else {
        Err(Error::DeterminantNotOne(d.to_string()))
    }
}

fn elementary(n: usize, i: usize, j: usize, v: RingElement) -> Factor {
    Factor::Elementary(ElementaryMatrix::new(n, i, j, v).expect("valid position"))
}

/// `A = exp(h) * I * (elementary word)` for `A` congruent to `I` modulo the
/// radical. The word has at most `(m + 4)(m - 1)` elementary factors.
pub fn factor_radical_perturbation(a: &RingMatrix) -> Result<FactorWord> {
    let m = require_square(a)?;
    if !a.ring().has_radical() || !a.is_radical_perturbation()? {
        return Err(Error::NotInRadical("I - A has an entry outside the radical".into()));
    }
    let ring = a.ring();
    let det = a.det()?;
    let g = &RingElement::one(ring) - &det;
    let h = div_integer(&log_one_minus(&g)?, m as i64)?;
    let scaled = a.scale(&exp_radical(&-&h)?);
    let gj = gauss_jordan_additive(&scaled)?;
    let wh = whitehead_diagonal(&gj.diagonal)?;
    let mut factors = vec![Factor::ScalarExp { size: m, h }];
    factors.extend(gj.word.factors().iter().cloned());
    factors.extend(wh.factors().iter().cloned());
    let word = FactorWord::new(ring, m, factors, a.clone())?;
    debug_assert!(word.verify());
    Ok(word)
}

/// Output of [`gauss_jordan_additive`]: `input = word * diagonal`.
#[derive(Debug, Clone)]
pub struct GaussJordan {
    pub word: FactorWord,
    pub diagonal: RingMatrix,
}

/// Clears the off-diagonal entries of a radical perturbation of `I` using only
/// row additions with radical multipliers: below the diagonal column by
/// column, then above it from the last column backwards.
pub fn gauss_jordan_additive(a: &RingMatrix) -> Result<GaussJordan> {
    let m = require_square(a)?;
    if !a.ring().has_radical() || !a.is_radical_perturbation()? {
        return Err(Error::NotInRadical("input is not congruent to I modulo the radical".into()));
    }
    let ring = a.ring();
    let mut w = a.clone();
    let mut ops = Vec::new();
    let mut eliminate = |w: &mut RingMatrix, i: usize, j: usize| -> Result<()> {
        if w.get(i, j).is_zero() {
            return Ok(());
        }
        let c = -&(w.get(i, j) * &invert(w.get(j, j))?);
        debug_assert!(is_in_radical(&c)?);
        w.add_row_multiple(i, j, &c);
        // record the inverse operation so that the word multiplies back to `a`
        ops.push(elementary(m, i, j, -&c));
        Ok(())
    };
    for j in 0..m {
        for i in j + 1..m {
            eliminate(&mut w, i, j)?;
        }
    }
    for j in (1..m).rev() {
        for i in 0..j {
            eliminate(&mut w, i, j)?;
        }
    }
    let word = FactorWord::from_factors(ring, m, ops)?;
    debug_assert_eq!(word.product()?.mul(&w)?, *a);
    Ok(GaussJordan { word, diagonal: w })
}

/// Writes a determinant-one diagonal matrix of units as at most `4(m - 1)`
/// elementary matrices, four per nontrivial block `diag(b, b^-1)` where `b`
/// runs over the partial products of the diagonal.
pub fn whitehead_diagonal(d: &RingMatrix) -> Result<FactorWord> {
    let m = require_square(d)?;
    let ring = d.ring();
    for i in 0..m {
        for j in 0..m {
            if i != j && !d.get(i, j).is_zero() {
                return Err(Error::DimensionMismatch("matrix is not diagonal".into()));
            }
        }
        if !is_unit(d.get(i, i)) {
            return Err(Error::NotAUnit(d.get(i, i).to_string()));
        }
    }
    require_det_one(d)?;
    let mut factors = Vec::new();
    let mut b = RingElement::one(ring);
    let one = RingElement::one(ring);
    for k in 0..m.saturating_sub(1) {
        b = &b * d.get(k, k);
        if b.is_one() {
            continue;
        }
        let b_inv = invert(&b)?;
        factors.push(elementary(m, k, k + 1, &b - &one));
        factors.push(elementary(m, k + 1, k, one.clone()));
        factors.push(elementary(m, k, k + 1, &b_inv - &one));
        factors.push(elementary(m, k + 1, k, -&b));
    }
    let word = FactorWord::new(ring, m, factors, d.clone())?;
    debug_assert!(word.verify());
    Ok(word)
}

fn find_unit_shift(m: &RingMatrix) -> Result<RingElement> {
    let ring = m.ring();
    let works = |u: &RingElement| is_unit(&(&(u * m.get(0, 0)) + m.get(1, 0)));
    let candidates: Vec<RingElement> = match ring.kind() {
        RingKind::FiniteRing => enumerate_ring(ring, DEFAULT_ENUMERATION_CAP)?.collect(),
        _ => vec![RingElement::zero(ring), RingElement::one(ring)],
    };
    candidates.into_iter().find(works).ok_or(Error::NoUnitShiftFound)
}

/// At most four alternating triangular unipotent factors for `M` in SL2:
/// `M = E21(-u) E12((M'11 - 1)/c) E21(c) E12((M'22 - 1)/c)` with
/// `M' = E21(u) M` and `c = u M11 + M21` a unit.
pub fn factor_sl2_triangular(m: &RingMatrix, unit_shift: Option<&RingElement>) -> Result<FactorWord> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("{}x{} is not 2x2", m.rows(), m.cols())));
    }
    require_det_one(m)?;
    let ring = m.ring();
    let u = match unit_shift {
        Some(u) => {
            u.same_ring(m.get(0, 0))?;
            if !is_unit(&(&(u * m.get(0, 0)) + m.get(1, 0))) {
                return Err(Error::NoUnitShiftFound);
            }
            u.clone()
        }
        None => find_unit_shift(m)?,
    };
    let shifted = ElementaryMatrix::new(2, 1, 0, u.clone())?.apply_left(m)?;
    let c = shifted.get(1, 0).clone();
    let c_inv = invert(&c)?;
    let one = RingElement::one(ring);
    let factors = vec![
        elementary(2, 1, 0, -&u),
        elementary(2, 0, 1, &(shifted.get(0, 0) - &one) * &c_inv),
        elementary(2, 1, 0, c),
        elementary(2, 0, 1, &(shifted.get(1, 1) - &one) * &c_inv),
    ];
    let word = FactorWord::new(ring, 2, factors, m.clone())?;
    let word = normalize_word(&word)?;
    debug_assert!(word.verify() && word.len() <= 4);
    Ok(word)
}

/// Exact minimum number of triangular unipotent factors of `M` in SL2 over a
/// field. `LU = [[1, x], [y, xy + 1]]` and `UL = [[1 + xy, x], [y, 1]]`, so
/// two factors suffice iff a diagonal entry is 1; `ULU` reaches every matrix
/// with `M21 != 0` and `LUL` every matrix with `M12 != 0`; a nontrivial
/// diagonal matrix needs four.
pub fn min_triangular_length_2x2(m: &RingMatrix) -> Result<usize> {
    if m.ring().kind() != RingKind::Field {
        return Err(Error::DescriptorMismatch(format!("{} is not a field", m.ring())));
    }
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("{}x{} is not 2x2", m.rows(), m.cols())));
    }
    require_det_one(m)?;
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    Ok(if m.is_identity() {
        0
    } else if a.is_one() && d.is_one() && (b.is_zero() || c.is_zero()) {
        1
    } else if a.is_one() || d.is_one() {
        2
    } else if !b.is_zero() || !c.is_zero() {
        3
    } else {
        4
    })
}

/// An elementary word for `M` in SL_n together with the length of its
/// alternating triangular normal form.
#[derive(Debug, Clone)]
pub struct ElementaryFactorization {
    pub word: FactorWord,
    pub triangular_length: usize,
}

/// Gauss-Jordan with unit pivots followed by the Whitehead diagonal. A zero
/// or non-unit pivot is repaired by adding `c` times a lower row with
/// `c = 1` or `-1` (every element for finite rings). Failure to find a pivot
/// says nothing about membership in E_n.
pub fn factor_sln_elementary(m: &RingMatrix) -> Result<ElementaryFactorization> {
    let n = require_square(m)?;
    require_det_one(m)?;
    let ring = m.ring();
    let shifts: Vec<RingElement> = match ring.kind() {
        RingKind::FiniteRing => enumerate_ring(ring, DEFAULT_ENUMERATION_CAP)?.filter(|c| !c.is_zero()).collect(),
        _ => vec![RingElement::one(ring), RingElement::from_i64(ring, -1)],
    };
    let mut w = m.clone();
    let mut ops = Vec::new();
    for j in 0..n {
        if !is_unit(w.get(j, j)) {
            let fix = (j + 1..n).find_map(|i| {
                shifts.iter().find(|c| is_unit(&(w.get(j, j) + &(w.get(i, j) * *c)))).map(|c| (i, c.clone()))
            });
            let Some((i, c)) = fix else {
                return Err(Error::PivotNotFound(j + 1));
            };
            w.add_row_multiple(j, i, &c);
            ops.push(elementary(n, j, i, -&c));
        }
        let pivot_inv = invert(w.get(j, j))?;
        for i in 0..n {
            if i != j && !w.get(i, j).is_zero() {
                let c = -&(w.get(i, j) * &pivot_inv);
                w.add_row_multiple(i, j, &c);
                ops.push(elementary(n, i, j, -&c));
            }
        }
    }
    let elim = FactorWord::from_factors(ring, n, ops)?;
    let word = elim.concat(&whitehead_diagonal(&w)?)?;
    debug_assert!(word.verify());
    let triangular_length = normalize_word(&word)?.len();
    Ok(ElementaryFactorization { word, triangular_length })
}

fn nilpotent_degree(ring: &Ring, mono: &Monomial) -> u32 {
    mono.degree_from(ring.geometric_vars())
}

/// The quotient of a truncated-nilpotent ring by `<e>^order`; order 1 gives
/// the reduced polynomial ring.
pub fn radical_quotient(source: &Ring, order: usize) -> Result<Ring> {
    if source.kind() != RingKind::TruncNil {
        return Err(Error::DescriptorMismatch(format!("{source} is not a truncated-nilpotent ring")));
    }
    if order == 0 {
        return Err(Error::NotInRadical("<e>^0 is the whole ring".into()));
    }
    if order == 1 {
        source.reduced()
    } else {
        source.with_truncation(order.min(source.truncation()))
    }
}

/// Image of `a` in `source / <e>^order`.
pub fn project_element(a: &RingElement, order: usize) -> Result<RingElement> {
    let source = a.ring();
    let target = radical_quotient(source, order)?;
    let keep = target.num_vars();
    Ok(a.map_into(&target, |m| (nilpotent_degree(source, m) < order as u32).then(|| Monomial(m.0[..keep].to_vec()))))
}

/// The canonical section `source / <e>^order -> source`.
pub fn lift_element(source: &Ring, a: &RingElement) -> Result<RingElement> {
    let n = source.num_vars();
    if a.ring().base() != source.base() || a.ring().geometric_vars() != source.geometric_vars() {
        return Err(Error::DescriptorMismatch(format!("{} is not a quotient of {source}", a.ring())));
    }
    Ok(a.map_into(source, |m| {
        let mut e = m.0.clone();
        e.resize(n, 0);
        Some(Monomial(e))
    }))
}

pub fn project_matrix(m: &RingMatrix, order: usize) -> Result<RingMatrix> {
    let target = radical_quotient(m.ring(), order)?;
    m.try_map(&target, |e| project_element(e, order))
}

/// Lifts a word over `source / <e>^order` factor by factor through the
/// canonical section. The lifted product is invertible and reduces to the
/// product of `w`.
pub fn lift_word_through_quotient(w: &FactorWord, source: &Ring, order: usize) -> Result<FactorWord> {
    let quotient = radical_quotient(source, order)?;
    let same = w.ring() == &quotient || (order == 1 && w.ring() == &source.with_truncation(1)?);
    if !same {
        return Err(Error::DescriptorMismatch(format!("word over {} is not over {quotient}", w.ring())));
    }
    let n = w.size();
    let mut factors = Vec::with_capacity(w.len());
    for f in w.factors() {
        factors.push(match f {
            Factor::Elementary(e) => {
                let (i, j) = e.position();
                elementary(n, i, j, lift_element(source, e.value())?)
            }
            Factor::ScalarExp { h, .. } => Factor::ScalarExp { size: n, h: lift_element(source, h)? },
            Factor::Triangular(_) => {
                return Err(Error::UnsupportedFactor("triangular factors are not lifted".into()));
            }
        });
    }
    let lifted = FactorWord::from_factors(source, n, factors)?;
    debug_assert!(is_unit(&lifted.target().det()?));
    Ok(lifted)
}

/// Bounds derived from the printed formulas for a model of dimension `d`,
/// with `v2d` standing for the dimensional constant `v(2d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub d: u64,
    pub v2d: u64,
    /// `t_2` of the reduced algebra.
    pub t2_reduced: u64,
    /// Length of the merged SL2 word.
    pub merged_sl2_word: u64,
    /// `sup_n t_n`.
    pub sup_tn: u64,
    /// `n(d) = (floor(d/2) + 2)(floor(v2d/2) + 3)`.
    pub n_threshold: u64,
    /// `t_n` for `n >= n(d)`.
    pub tn_beyond_threshold: u64,
    /// Exact `t_n` for `n >= 2` when `d = 1`.
    pub exact_tn_d1: Option<u64>,
    /// `sup_n t_n` when `d = 2`.
    pub sup_tn_d2: Option<u64>,
}

pub fn bound_table(d: u64, v2d: u64) -> Result<BoundReport> {
    if d < 1 || v2d < 1 {
        return Err(Error::InvalidDimension(format!("d = {d}, v2d = {v2d}; both must be at least 1")));
    }
    Ok(BoundReport {
        d,
        v2d,
        t2_reduced: v2d + 2,
        merged_sl2_word: v2d + 4,
        sup_tn: v2d + 5,
        n_threshold: (d / 2 + 2) * (v2d / 2 + 3),
        tn_beyond_threshold: 6,
        exact_tn_d1: (d == 1).then_some(4),
        sup_tn_d2: (d == 2).then_some(7),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_ring};

    fn mat(r: &Ring, rows: &[&[&str]]) -> RingMatrix {
        RingMatrix::new(r, rows.iter().map(|row| row.iter().map(|s| parse_element(r, s).unwrap()).collect()).collect())
            .unwrap()
    }

    fn el(r: &Ring, n: usize, i: usize, j: usize, v: &str) -> Factor {
        elementary(n, i, j, parse_element(r, v).unwrap())
    }

    #[test]
    fn lemma23_examples() {
        let r = parse_ring("trunc(Q;0;1;2)").unwrap();
        let w = factor_radical_perturbation(&RingMatrix::identity(&r, 2)).unwrap();
        assert_eq!(w.elementary_count(), 0);
        assert!(matches!(&w.factors()[0], Factor::ScalarExp { h, .. } if h.is_zero()));

        let a = mat(&r, &[&["1 + e1", "0"], &["0", "1"]]);
        let w = factor_radical_perturbation(&a).unwrap();
        assert!(w.verify());
        let Factor::ScalarExp { h, .. } = &w.factors()[0] else { panic!() };
        assert_eq!(h, &parse_element(&r, "1/2*e1").unwrap());
        assert_eq!(w.elementary_count(), 4);
        assert!(w.elementary_count() <= 6);

        let a = mat(&r, &[&["1", "e1", "e1"], &["0", "1", "e1"], &["0", "0", "1"]]);
        let w = factor_radical_perturbation(&a).unwrap();
        assert!(w.verify() && w.elementary_count() <= 14);
        assert!(matches!(&w.factors()[0], Factor::ScalarExp { h, .. } if h.is_zero()));

        let q = parse_ring("field(Q)").unwrap();
        assert!(matches!(factor_radical_perturbation(&RingMatrix::identity(&q, 2)), Err(Error::NotInRadical(_))));
        let bad = mat(&r, &[&["2", "0"], &["0", "1/2"]]);
        assert!(matches!(factor_radical_perturbation(&bad), Err(Error::NotInRadical(_))));
    }

    #[test]
    fn gauss_jordan_examples() {
        let r = parse_ring("trunc(Q;0;1;3)").unwrap();
        let diag = mat(&r, &[&["1 + e1", "0"], &["0", "1 - e1 + e1^2"]]);
        let gj = gauss_jordan_additive(&diag).unwrap();
        assert!(gj.word.is_empty() && gj.diagonal == diag);

        let lower = mat(&r, &[&["1", "0"], &["e1", "1"]]);
        let gj = gauss_jordan_additive(&lower).unwrap();
        assert_eq!(gj.word.factors(), &[el(&r, 2, 1, 0, "e1")]);
        assert!(gj.diagonal.is_identity());

        let sym = mat(&r, &[&["1", "e1"], &["e1", "1"]]);
        let gj = gauss_jordan_additive(&sym).unwrap();
        assert!(gj.word.len() <= 2);
        assert_eq!(gj.word.product().unwrap().mul(&gj.diagonal).unwrap(), sym);
        assert_eq!(gj.diagonal.det().unwrap(), sym.det().unwrap());
    }

    #[test]
    fn whitehead_examples() {
        let q = parse_ring("field(Q)").unwrap();
        let w = whitehead_diagonal(&mat(&q, &[&["2", "0"], &["0", "1/2"]])).unwrap();
        assert_eq!(
            w.factors(),
            &[el(&q, 2, 0, 1, "1"), el(&q, 2, 1, 0, "1"), el(&q, 2, 0, 1, "-1/2"), el(&q, 2, 1, 0, "-2")]
        );
        assert!(w.verify());
        assert!(whitehead_diagonal(&RingMatrix::identity(&q, 4)).unwrap().is_empty());
        let r = parse_ring("trunc(Q;0;1;2)").unwrap();
        let w = whitehead_diagonal(&mat(&r, &[&["1 + e1", "0"], &["0", "1 - e1"]])).unwrap();
        assert_eq!(
            w.factors(),
            &[el(&r, 2, 0, 1, "e1"), el(&r, 2, 1, 0, "1"), el(&r, 2, 0, 1, "-e1"), el(&r, 2, 1, 0, "-1 - e1")]
        );
        assert!(matches!(
            whitehead_diagonal(&mat(&q, &[&["2", "0"], &["0", "1"]])),
            Err(Error::DeterminantNotOne(_))
        ));
    }

    #[test]
    fn sl2_examples() {
        let q = parse_ring("field(Q)").unwrap();
        let rot = mat(&q, &[&["0", "-1"], &["1", "0"]]);
        let w = factor_sl2_triangular(&rot, None).unwrap();
        assert_eq!(w.factors(), &[el(&q, 2, 0, 1, "-1"), el(&q, 2, 1, 0, "1"), el(&q, 2, 0, 1, "-1")]);
        assert!(factor_sl2_triangular(&RingMatrix::identity(&q, 2), None).unwrap().is_empty());
        let d = mat(&q, &[&["2", "0"], &["0", "1/2"]]);
        let w = factor_sl2_triangular(&d, None).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.verify() && w.is_alternating());
        assert!(matches!(
            factor_sl2_triangular(&d, Some(&RingElement::zero(&q))),
            Err(Error::NoUnitShiftFound)
        ));
    }

    #[test]
    fn min_length_examples() {
        let q = parse_ring("field(Q)").unwrap();
        assert_eq!(min_triangular_length_2x2(&mat(&q, &[&["2", "0"], &["0", "1/2"]])).unwrap(), 4);
        assert_eq!(min_triangular_length_2x2(&RingMatrix::identity(&q, 2)).unwrap(), 0);
        assert_eq!(min_triangular_length_2x2(&mat(&q, &[&["0", "-1"], &["1", "0"]])).unwrap(), 3);
        assert_eq!(min_triangular_length_2x2(&mat(&q, &[&["1", "7"], &["0", "1"]])).unwrap(), 1);
        assert_eq!(min_triangular_length_2x2(&mat(&q, &[&["1", "1"], &["1", "2"]])).unwrap(), 2);
        let p = parse_ring("poly(Q;1)").unwrap();
        assert!(matches!(
            min_triangular_length_2x2(&RingMatrix::identity(&p, 2)),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn sln_examples() {
        let q = parse_ring("field(Q)").unwrap();
        let e = el(&q, 3, 0, 2, "5");
        let f = factor_sln_elementary(&e.to_matrix().unwrap()).unwrap();
        assert_eq!(f.word.factors(), &[e]);
        let m = mat(&q, &[&["1", "1"], &["1", "2"]]);
        let f = factor_sln_elementary(&m).unwrap();
        assert_eq!(f.word.factors(), &[el(&q, 2, 1, 0, "1"), el(&q, 2, 0, 1, "1")]);
        assert!(f.triangular_length <= 2);
        let p = mat(&q, &[&["0", "1", "0"], &["0", "0", "1"], &["1", "0", "0"]]);
        let f = factor_sln_elementary(&p).unwrap();
        assert!(f.word.verify());
        let z = parse_ring("poly(Q;1)").unwrap();
        let hard = mat(&z, &[&["x1", "1"], &["-1", "0"]]);
        assert!(matches!(factor_sln_elementary(&hard), Err(Error::PivotNotFound(1))));
    }

    #[test]
    fn lifting_examples() {
        let a = parse_ring("trunc(Q;1;1;2)").unwrap();
        let base = a.reduced().unwrap();
        let empty = FactorWord::from_factors(&base, 2, vec![]).unwrap();
        assert!(lift_word_through_quotient(&empty, &a, 1).unwrap().is_empty());
        let w = FactorWord::from_factors(&base, 2, vec![el(&base, 2, 0, 1, "x1")]).unwrap();
        let lifted = lift_word_through_quotient(&w, &a, 1).unwrap();
        assert_eq!(lifted.factors(), &[el(&a, 2, 0, 1, "x1")]);
        assert_eq!(project_matrix(lifted.target(), 1).unwrap(), *w.target());
        assert!(matches!(lift_word_through_quotient(&w, &a, 0), Err(Error::NotInRadical(_))));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_table(1, 3).unwrap().exact_tn_d1, Some(4));
        assert_eq!(bound_table(2, 10).unwrap().sup_tn_d2, Some(7));
        let b = bound_table(3, 10).unwrap();
        assert_eq!((b.sup_tn, b.n_threshold), (15, 24));
        assert!(bound_table(0, 3).is_err());
    }
}
