//! Exact rational Gaussian elimination: solving, kernels, ranks.

use super::{clear_denominators, primitive, Int, Rat};
use num_traits::Zero;

/// Reduced row echelon form in place; returns the pivot column of each pivot row.
pub fn rref(a: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let piv = match (r..rows).find(|&i| !a[i][c].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(r, piv);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &a[r][j];
                    a[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut a = rows.to_vec();
    rref(&mut a).len()
}

/// One solution of `A x = b` over the rationals, if any.
pub fn solve(a_rows: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a_rows.len(), b.len());
    let cols = a_rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = a_rows
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent iff a pivot lands in the rhs column.
    if pivots.last().is_some_and(|&c| c == cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the kernel of a rational matrix (as rational vectors).
pub fn kernel(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::from_integer(Int::from(1));
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Basis of the kernel as primitive integer vectors.
pub fn kernel_int(rows: &[Vec<Rat>]) -> Vec<Vec<Int>> {
    kernel(rows)
        .into_iter()
        .map(|v| {
            let (mut ints, _) = clear_denominators(&v);
            primitive(&mut ints);
            ints
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rati, rvec};

    #[test]
    fn solve_simple() {
        let a = vec![rvec(&[1, 1]), rvec(&[1, -1])];
        let b = vec![rati(3), rati(1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rati(2), rati(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![rvec(&[1, 1]), rvec(&[2, 2])];
        let b = vec![rati(1), rati(3)];
        assert!(solve(&a, &b).is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let a = vec![rvec(&[0, 1, 1])];
        let b = vec![rat(1, 2)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(&x[1] + &x[2], rat(1, 2));
    }

    #[test]
    fn kernel_of_dependence() {
        // Points 0,1,2 on a line in homogeneous coordinates: kernel is the
        // affine dependence (1,-2,1).
        let rows = vec![rvec(&[0, 1, 2]), rvec(&[1, 1, 1])];
        let k = kernel_int(&rows);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // v is proportional to (1,-2,1), primitive, so v = ±(1,-2,1).
        let s = v[0].clone();
        assert_eq!(v[1], -&s * 2);
        assert_eq!(v[2], s);
    }

    #[test]
    fn rank_counts() {
        assert_eq!(rank(&[rvec(&[1, 2]), rvec(&[2, 4])]), 1);
        assert_eq!(rank(&[rvec(&[1, 0]), rvec(&[0, 1])]), 2);
    }
}
