//! Integer matrices: fraction-free determinants and certified Hermite/Smith
//! normal forms.

use super::{Int, Rat};
use num_traits::{One, Signed, Zero};

/// A dense rectangular matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: Vec<Vec<Int>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Self::zero(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.data.swap(a * c + j, b * c + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.data.swap(i * c + a, i * c + b);
        }
    }

    /// row(a) += k * row(b)
    fn add_row_multiple(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = k * &self[(b, j)];
            self[(a, j)] += add;
        }
    }

    /// col(a) += k * col(b)
    fn add_col_multiple(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = k * &self[(i, b)];
            self[(i, a)] += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact determinant of a square matrix by fraction-free (Bareiss) elimination:
/// every intermediate value stays integral.
pub fn det(m: &IntMatrix) -> Int {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                // Bareiss: divisions by the previous pivot are exact.
                a[(i, j)] = num / &prev;
            }
            a[(i, k)] = Int::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of a rational square matrix (Gaussian elimination).
pub fn det_rat(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    let mut d = Rat::one();
    for k in 0..n {
        let piv = match (k..n).find(|&i| !a[i][k].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != k {
            a.swap(piv, k);
            d = -d;
        }
        d *= a[k][k].clone();
        let inv = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &inv;
            for j in k..n {
                let sub = &f * &a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    d
}

/// Hermite and Smith normal form data with certified unimodular transforms.
#[derive(Debug, Clone)]
pub struct HermiteSmith {
    /// Row-style Hermite normal form: `hnf = hnf_transform * input`.
    pub hnf: IntMatrix,
    /// Unimodular row transform for the HNF.
    pub hnf_transform: IntMatrix,
    /// Diagonal of the Smith normal form (divisibility chain, nonnegative).
    pub snf_diagonal: Vec<Int>,
    /// Unimodular transforms with `snf_left * input * snf_right` diagonal.
    pub snf_left: IntMatrix,
    pub snf_right: IntMatrix,
}

/// Hermite and Smith normal forms of an integer matrix. The returned transforms
/// are certified on every call: they are re-multiplied against the input and
/// checked for unimodularity, so downstream quotient computations can rely on
/// them unconditionally.
pub fn hermite_smith(m: &IntMatrix) -> HermiteSmith {
    let (hnf, u) = hnf_with_transform(m);
    let (diag, l, r) = snf_with_transforms(m);

    // Certification (mandatory, not gated on debug builds).
    assert_eq!(u.mul(m), hnf, "HNF transform failed re-multiplication");
    assert!(det(&u).abs().is_one(), "HNF transform not unimodular");
    assert!(det(&l).abs().is_one(), "SNF left transform not unimodular");
    assert!(det(&r).abs().is_one(), "SNF right transform not unimodular");
    let s = l.mul(m).mul(&r);
    for i in 0..s.rows {
        for j in 0..s.cols {
            let expect = if i == j && i < diag.len() { diag[i].clone() } else { Int::zero() };
            assert_eq!(s[(i, j)], expect, "SNF re-multiplication mismatch at ({i},{j})");
        }
    }
    for w in diag.windows(2) {
        if !w[1].is_zero() {
            assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero(), "SNF divisibility chain broken");
        }
    }

    HermiteSmith { hnf, hnf_transform: u, snf_diagonal: diag, snf_left: l, snf_right: r }
}

fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        if pivot_row >= h.rows {
            break;
        }
        // Euclid rows below pivot_row in this column down to a single nonzero.
        loop {
            let mut min_row = None;
            for i in pivot_row..h.rows {
                if !h[(i, col)].is_zero() {
                    let a = h[(i, col)].abs();
                    match &min_row {
                        None => min_row = Some((i, a)),
                        Some((_, b)) if a < *b => min_row = Some((i, a)),
                        _ => {}
                    }
                }
            }
            let (mr, _) = match min_row {
                Some(x) => x,
                None => break,
            };
            h.swap_rows(pivot_row, mr);
            u.swap_rows(pivot_row, mr);
            let mut done = true;
            for i in pivot_row + 1..h.rows {
                if !h[(i, col)].is_zero() {
                    let q = floor_div(&h[(i, col)], &h[(pivot_row, col)]);
                    h.add_row_multiple(i, pivot_row, &-q.clone());
                    u.add_row_multiple(i, pivot_row, &-q);
                    if !h[(i, col)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..pivot_row {
            let q = floor_div(&h[(i, col)], &h[(pivot_row, col)]);
            h.add_row_multiple(i, pivot_row, &-q.clone());
            u.add_row_multiple(i, pivot_row, &-q);
        }
        pivot_row += 1;
    }
    (h, u)
}

fn snf_with_transforms(m: &IntMatrix) -> (Vec<Int>, IntMatrix, IntMatrix) {
    let mut a = m.clone();
    let mut l = IntMatrix::identity(m.rows);
    let mut r = IntMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // Find a nonzero pivot in the remaining block.
        let mut piv = None;
        'outer: for i in t..a.rows {
            for j in t..a.cols {
                if !a[(i, j)].is_zero() {
                    piv = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (pi, pj) = match piv {
            Some(p) => p,
            None => break,
        };
        a.swap_rows(t, pi);
        l.swap_rows(t, pi);
        a.swap_cols(t, pj);
        r.swap_cols(t, pj);
        loop {
            // Clear the column.
            let mut clean = true;
            for i in t + 1..a.rows {
                if !a[(i, t)].is_zero() {
                    if (&a[(i, t)] % &a[(t, t)]).is_zero() {
                        let q = &a[(i, t)] / &a[(t, t)];
                        a.add_row_multiple(i, t, &-q.clone());
                        l.add_row_multiple(i, t, &-q);
                    } else {
                        let q = floor_div(&a[(i, t)], &a[(t, t)]);
                        a.add_row_multiple(i, t, &-q.clone());
                        l.add_row_multiple(i, t, &-q);
                        a.swap_rows(t, i);
                        l.swap_rows(t, i);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Clear the row.
            for j in t + 1..a.cols {
                if !a[(t, j)].is_zero() {
                    if (&a[(t, j)] % &a[(t, t)]).is_zero() {
                        let q = &a[(t, j)] / &a[(t, t)];
                        a.add_col_multiple(j, t, &-q.clone());
                        r.add_col_multiple(j, t, &-q);
                    } else {
                        let q = floor_div(&a[(t, j)], &a[(t, t)]);
                        a.add_col_multiple(j, t, &-q.clone());
                        r.add_col_multiple(j, t, &-q);
                        a.swap_cols(t, j);
                        r.swap_cols(t, j);
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility: pivot must divide every later entry.
            let mut fixed = true;
            'div: for i in t + 1..a.rows {
                for j in t + 1..a.cols {
                    if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                        a.add_row_multiple(t, i, &Int::one());
                        l.add_row_multiple(t, i, &Int::one());
                        fixed = false;
                        break 'div;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            l.negate_row(t);
        }
        t += 1;
    }
    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    (diag, l, r)
}

fn floor_div(a: &Int, b: &Int) -> Int {
    num_integer::Integer::div_floor(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ivec};

    #[test]
    fn det_identity() {
        assert_eq!(det(&IntMatrix::identity(3)), int(1));
    }

    #[test]
    fn det_reeve_edge_matrix() {
        // Columns (0,0,1), (0,1,0), (q,1,1): |det| = q.
        for q in 1..=5 {
            let m = IntMatrix::from_cols(vec![ivec(&[0, 0, 1]), ivec(&[0, 1, 0]), ivec(&[q, 1, 1])]);
            assert_eq!(det(&m).abs(), int(q));
        }
    }

    fn det_cofactor(m: &IntMatrix) -> Int {
        let n = m.rows;
        if n == 0 {
            return int(1);
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = Int::from(0);
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor_rows: Vec<Vec<Int>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| m[(i, c)].clone()).collect())
                .collect();
            let minor = IntMatrix::from_rows(minor_rows);
            let term = &m[(0, j)] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        // Deterministic pseudo-random 4x4 matrices with entries in [-3, 3].
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 7) as i64 - 3
        };
        for _ in 0..60 {
            let rows: Vec<Vec<Int>> =
                (0..4).map(|_| (0..4).map(|_| Int::from(next())).collect()).collect();
            let m = IntMatrix::from_rows(rows);
            assert_eq!(det(&m), det_cofactor(&m));
        }
    }

    #[test]
    fn det_multiplicative() {
        let mut state = 0xdeadbeefu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 9) as i64 - 4
        };
        for _ in 0..100 {
            let a = IntMatrix::from_rows((0..3).map(|_| (0..3).map(|_| Int::from(next())).collect()).collect());
            let b = IntMatrix::from_rows((0..3).map(|_| (0..3).map(|_| Int::from(next())).collect()).collect());
            assert_eq!(det(&a.mul(&b)), det(&a) * det(&b));
        }
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let hs = hermite_smith(&m);
        assert_eq!(hs.snf_diagonal, ivec(&[1, 6]));
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(3, 2);
        let hs = hermite_smith(&m);
        assert_eq!(hs.snf_diagonal, ivec(&[0, 0]));
    }

    #[test]
    fn snf_reeve_two_quotient() {
        // Edge vectors of the Reeve simplex with q=2 span an index-2 sublattice:
        // the quotient is Z/2, so the SNF diagonal is (1, 1, 2).
        let m = IntMatrix::from_cols(vec![ivec(&[0, 0, 1]), ivec(&[0, 1, 0]), ivec(&[2, 1, 1])]);
        let hs = hermite_smith(&m);
        assert_eq!(hs.snf_diagonal, ivec(&[1, 1, 2]));
    }

    #[test]
    fn snf_random_transform_certification() {
        // hermite_smith certifies internally; just exercise it on odd shapes.
        let m = IntMatrix::from_i64_rows(&[&[4, 6, 10], &[2, 8, 14]]);
        let hs = hermite_smith(&m);
        assert_eq!(hs.snf_diagonal.len(), 2);
        let m2 = IntMatrix::from_i64_rows(&[&[0, 0], &[5, 0], &[0, 7]]);
        let hs2 = hermite_smith(&m2);
        assert_eq!(hs2.snf_diagonal, ivec(&[1, 35]));
    }

    #[test]
    fn hnf_shape() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[1, 3]]);
        let hs = hermite_smith(&m);
        // Row HNF of this matrix is [[1,1],[0,2]] (pivots positive, reduced above).
        assert_eq!(hs.hnf, IntMatrix::from_i64_rows(&[&[1, 1], &[0, 2]]));
    }
}
