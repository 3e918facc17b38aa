//! Classical linear algebra on a single atom's fiber, used by the main
//! algorithms. Pivots are taken in input order (first nonzero entry) for
//! exact fields and by largest magnitude within the column for floats.
//! The independent reference implementations live in [`crate::oracle`].

use crate::scalar::Scalar;

/// Zero threshold for a collection of vectors: exact fields use true zero,
/// float fields scale `tol` by the largest entry.
pub(crate) fn threshold<K: Scalar>(vectors: &[Vec<K>], tol: f64) -> f64 {
    if K::EXACT {
        return 0.0;
    }
    let scale = vectors
        .iter()
        .flatten()
        .map(Scalar::magnitude)
        .fold(0.0f64, f64::max);
    tol * scale.max(1.0)
}

/// Σ aᵢ·conj(bᵢ).
pub(crate) fn inner<K: Scalar>(a: &[K], b: &[K]) -> K {
    a.iter()
        .zip(b)
        .fold(K::zero(), |acc, (x, y)| acc + x.clone() * y.conj())
}

fn pick_pivot<K: Scalar>(v: &[K], thr: f64) -> Option<usize> {
    if K::EXACT {
        v.iter().position(|x| !x.is_zero_within(0.0))
    } else {
        let (pos, mag) = v
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.magnitude()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        (mag > thr).then_some(pos)
    }
}

/// Greedy basis selection: index `i` is kept iff `vectors[i]` is
/// independent of the vectors kept before it.
pub(crate) fn independent_subset<K: Scalar>(vectors: &[Vec<K>], tol: f64) -> Vec<usize> {
    let thr = threshold(vectors, tol);
    let mut reduced: Vec<(usize, Vec<K>)> = Vec::new();
    let mut kept = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut r = v.clone();
        for (p, row) in &reduced {
            let c = r[*p].clone();
            if c.is_zero_within(0.0) {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                *x = x.clone() - c.clone() * y.clone();
            }
        }
        if let Some(p) = pick_pivot(&r, thr) {
            let inv = r[p].recip();
            let mut row: Vec<K> = r.into_iter().map(|x| x * inv.clone()).collect();
            row[p] = K::one();
            reduced.push((p, row));
            kept.push(idx);
        }
    }
    kept
}

pub(crate) fn rank<K: Scalar>(vectors: &[Vec<K>], tol: f64) -> usize {
    independent_subset(vectors, tol).len()
}

/// Whether `y` lies in the span of `vectors`.
pub(crate) fn in_span<K: Scalar>(vectors: &[Vec<K>], y: &[K], tol: f64) -> bool {
    let mut all = vectors.to_vec();
    let base = rank(&all, tol);
    all.push(y.to_vec());
    rank(&all, tol) == base
}

/// A solution of `rows · x = rhs` (free variables set to zero), or `None`
/// when the system is inconsistent.
pub(crate) fn solve_consistent<K: Scalar>(rows: &[Vec<K>], rhs: &[K], cols: usize, tol: f64) -> Option<Vec<K>> {
    let thr = threshold(rows, tol).max(if K::EXACT { 0.0 } else { threshold(&[rhs.to_vec()], tol) });
    let mut aug: Vec<Vec<K>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let m = aug.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let column: Vec<K> = aug[r..].iter().map(|row| row[c].clone()).collect();
        let Some(off) = pick_pivot(&column, thr) else {
            continue;
        };
        aug.swap(r, r + off);
        let inv = aug[r][c].recip();
        for x in aug[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero_within(0.0) {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    if aug[r..].iter().any(|row| !row[cols].is_zero_within(thr)) {
        return None;
    }
    let mut x = vec![K::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Coefficients `c` with `y = Σ cⱼ basis[j]`, if they exist.
pub(crate) fn coordinates<K: Scalar>(basis: &[Vec<K>], y: &[K], tol: f64) -> Option<Vec<K>> {
    let dim = y.len();
    let rows: Vec<Vec<K>> = (0..dim)
        .map(|d| basis.iter().map(|b| b[d].clone()).collect())
        .collect();
    let c = solve_consistent(&rows, y, basis.len(), tol)?;
    if K::EXACT {
        return Some(c);
    }
    // Float: confirm the fit, since the pivot threshold may drop a row.
    let fit: Vec<K> = (0..dim)
        .map(|d| {
            basis
                .iter()
                .zip(&c)
                .fold(K::zero(), |acc, (b, cj)| acc + b[d].clone() * cj.clone())
        })
        .collect();
    let thr = threshold(&[y.to_vec()], tol.sqrt());
    fit.iter()
        .zip(y)
        .all(|(a, b)| (a.clone() - b.clone()).is_zero_within(thr))
        .then_some(c)
}

/// Minimal-norm solution of `G x = γ` for `G` of full row rank:
/// `x = Gᴴ w` with `(G Gᴴ) w = γ`. Returns `(x, w)`.
pub(crate) fn minnorm_full_row_rank<K: Scalar>(g: &[Vec<K>], gamma: &[K], dim: usize, tol: f64) -> (Vec<K>, Vec<K>) {
    let i = g.len();
    if i == 0 {
        return (vec![K::zero(); dim], Vec::new());
    }
    let gram: Vec<Vec<K>> = (0..i)
        .map(|j| (0..i).map(|l| inner(&g[j], &g[l])).collect())
        .collect();
    let w = solve_consistent(&gram, gamma, i, tol).unwrap_or_else(|| vec![K::zero(); i]);
    let x = (0..dim)
        .map(|d| {
            g.iter()
                .zip(&w)
                .fold(K::zero(), |acc, (row, wj)| acc + row[d].conj() * wj.clone())
        })
        .collect();
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, RealScalar};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_ratio(x, 1)).collect()
    }

    #[test]
    fn greedy_subset_keeps_input_order() {
        let vs = vec![v(&[0, 0]), v(&[1, 1]), v(&[2, 2]), v(&[0, 1]), v(&[5, 7])];
        assert_eq!(independent_subset(&vs, 0.0), vec![1, 3]);
        assert_eq!(rank(&vs, 0.0), 2);
    }

    #[test]
    fn span_membership() {
        let basis = vec![v(&[1, 0, 1])];
        assert!(in_span(&basis, &v(&[2, 0, 2]), 0.0));
        assert!(!in_span(&basis, &v(&[2, 1, 2]), 0.0));
        assert!(in_span(&basis, &v(&[0, 0, 0]), 0.0));
    }

    #[test]
    fn consistent_solve_and_coordinates() {
        let rows = vec![v(&[1, 1]), v(&[2, 2])];
        assert!(solve_consistent(&rows, &v(&[1, 3]), 2, 0.0).is_none());
        let x = solve_consistent(&rows, &v(&[1, 2]), 2, 0.0).unwrap();
        assert_eq!(x, v(&[1, 0]));
        let c = coordinates(&[v(&[1, 0]), v(&[1, 1])], &v(&[3, 2]), 0.0).unwrap();
        assert_eq!(c, v(&[1, 2]));
        assert!(coordinates(&[v(&[1, 1])], &v(&[1, 2]), 0.0).is_none());
    }

    #[test]
    fn minimal_norm_single_row() {
        let (x, w) = minnorm_full_row_rank(&[v(&[1, 1])], &v(&[2]), 2, 0.0);
        assert_eq!(x, v(&[1, 1]));
        assert_eq!(w, v(&[1]));
    }

    #[test]
    fn float_rank_with_tolerance() {
        let vs = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]];
        assert_eq!(rank(&vs, 1e-9), 1);
        let vs = vec![vec![1.0, 2.0], vec![2.0, 4.1]];
        assert_eq!(rank(&vs, 1e-9), 2);
    }
}
