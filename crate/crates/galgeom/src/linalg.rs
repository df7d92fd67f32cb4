//! Exact Gaussian elimination over a [`Field`].
//!
//! Matrices are `Vec<Vec<Elt>>` in row-major order.  Everything is reduced
//! row-echelon form (RREF) based: rank, kernels, inverses, membership tests.
//! Sizes here are desk scale, so the implementations favor being obviously
//! correct over being clever.

use crate::galois::{Elt, Field};

/// Reduce `rows` in place to RREF, dropping zero rows.
/// Returns the pivot column of each remaining row (strictly increasing).
pub fn rref(f: &Field, rows: &mut Vec<Vec<Elt>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        // find a row at or below `rank` with a nonzero entry in this column
        let Some(sel) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, sel);
        // normalize pivot to 1
        let inv = f.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        // clear the column everywhere else
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in 0..ncols {
                    let s = f.mul(c, rows[rank][j]);
                    rows[i][j] = f.sub(rows[i][j], s);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(f: &Field, rows: &[Vec<Elt>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of the right kernel {x : M x = 0}, returned in RREF.
pub fn kernel_basis(f: &Field, m: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rows = m.to_vec();
    let pivots = rref(f, &mut rows);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        // x_free = 1, other free vars 0; pivot vars forced
        let mut x = vec![0; ncols];
        x[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = f.neg(rows[r][free]);
        }
        basis.push(x);
    }
    let mut basis = basis;
    rref(f, &mut basis);
    basis
}

/// Inverse of a square matrix, or None if singular.
pub fn invert(f: &Field, m: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Elt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "invert wants a square matrix");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1 } else { 0 }));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(f: &Field, m: &[Vec<Elt>], v: &[Elt]) -> Vec<Elt> {
    m.iter().map(|row| f.dot(row, v)).collect()
}

/// Reduce `v` against RREF `rows`; returns the remainder.  The remainder is
/// zero exactly when v lies in the row space.
pub fn reduce_against(f: &Field, rows: &[Vec<Elt>], pivots: &[usize], v: &[Elt]) -> Vec<Elt> {
    let mut v = v.to_vec();
    for (r, &pc) in pivots.iter().enumerate() {
        if v[pc] != 0 {
            let c = v[pc];
            for j in 0..v.len() {
                let s = f.mul(c, rows[r][j]);
                v[j] = f.sub(v[j], s);
            }
        }
    }
    v
}

pub fn in_row_space(f: &Field, rows: &[Vec<Elt>], pivots: &[usize], v: &[Elt]) -> bool {
    reduce_against(f, rows, pivots, v).iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;

    #[test]
    fn rref_gf2() {
        let f = Field::new(2, 1).unwrap();
        let mut m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let pivots = rref(&f, &mut m);
        assert_eq!(pivots, vec![0, 1]); // third row is the sum of the others
        assert_eq!(m, vec![vec![1, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn kernel_orthogonal_to_rows() {
        let f = Field::new(2, 2).unwrap();
        let m = vec![vec![1, 2, 3, 0], vec![0, 1, 1, 2]];
        let k = kernel_basis(&f, &m);
        assert_eq!(k.len(), 2); // rank 2 in dimension 4
        for x in &k {
            for row in &m {
                assert_eq!(f.dot(row, x), 0);
            }
        }
    }

    #[test]
    fn invert_roundtrip() {
        let f = Field::new(3, 2).unwrap();
        let m = vec![vec![1, 2, 0], vec![4, 1, 3], vec![0, 5, 1]];
        let inv = invert(&f, &m).expect("matrix should be invertible");
        for i in 0..3 {
            let v: Vec<u32> = (0..3).map(|j| if i == j { 1 } else { 0 }).collect();
            let col: Vec<u32> = m.iter().map(|row| row[i]).collect();
            // inv * (m e_i) = e_i
            assert_eq!(mat_vec(&f, &inv, &col), v);
        }
        // second row = 2 * first row in GF(9), where 2*2 = 1
        let singular = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]];
        assert!(invert(&f, &singular).is_none());
    }

    #[test]
    fn rank_and_membership() {
        let f = Field::new(2, 1).unwrap();
        let mut rows = vec![vec![1, 0, 1, 1], vec![0, 1, 1, 0]];
        let pivots = rref(&f, &mut rows);
        assert!(in_row_space(&f, &rows, &pivots, &[1, 1, 0, 1]));
        assert!(!in_row_space(&f, &rows, &pivots, &[1, 1, 1, 1]));
        assert_eq!(rank(&f, &rows), 2);
    }
}
