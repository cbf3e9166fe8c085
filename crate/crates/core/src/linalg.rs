//! Exact Gaussian elimination over a field of scalars.

use crate::scalar::{BaseRing, Scalar};

/// Solution set `{ particular + span(kernel) }` of `A x = b`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Solves `rows * x = rhs`; `None` when inconsistent. `base` must be a field.
pub fn solve(base: BaseRing, rows: &[Vec<Scalar>], rhs: &[Scalar], unknowns: usize) -> Option<AffineSolution> {
    let mut m: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("field");
        for v in m[r].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                #[allow(clippy::needless_range_loop)]
                for k in c..=unknowns {
                    let t = m[r][k].mul(&f);
                    m[i][k] = m[i][k].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut particular = vec![base.zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][unknowns].clone();
    }
    let kernel = (0..unknowns)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![base.zero(); unknowns];
            v[free] = base.one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = m[i][free].neg();
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_reports_kernel() {
        let b = BaseRing::Rational;
        let s = |v: i64| b.from_i64(v);
        // x + y = 2, 2x + 2y = 4  ->  one free direction
        let rows = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        let sol = solve(b, &rows, &[s(2), s(4)], 2).unwrap();
        assert_eq!(sol.kernel.len(), 1);
        let x = &sol.particular;
        assert_eq!(x[0].add(&x[1]), s(2));
        assert!(solve(b, &rows, &[s(2), s(5)], 2).is_none());
    }
}
