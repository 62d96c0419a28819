//! Convex hulls of integer point configurations by exact gift-wrapping, and
//! lower envelopes of lifted configurations for weight-induced subdivisions.

use super::solve::{kernel_int, rank, solve};
use super::{clear_denominators, primitive, to_rat_vec, Int, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, VecDeque};

/// An affine functional `x -> a . x + b` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aff {
    pub a: Vec<Int>,
    pub b: Int,
}

impl Aff {
    pub fn eval(&self, p: &[Int]) -> Int {
        assert_eq!(p.len(), self.a.len());
        let mut v = self.b.clone();
        for (c, x) in self.a.iter().zip(p) {
            v += c * x;
        }
        v
    }

    /// Divide all coefficients by their gcd.
    pub fn reduce(&mut self) {
        let mut all = self.a.clone();
        all.push(self.b.clone());
        primitive(&mut all);
        self.b = all.pop().unwrap();
        self.a = all;
    }

    pub fn negated(&self) -> Aff {
        Aff { a: self.a.iter().map(|x| -x).collect(), b: -self.b.clone() }
    }

    /// `c1 * f1 + c2 * f2`, reduced.
    pub fn combine(c1: &Int, f1: &Aff, c2: &Int, f2: &Aff) -> Aff {
        let a = f1
            .a
            .iter()
            .zip(&f2.a)
            .map(|(x, y)| c1 * x + c2 * y)
            .collect();
        let b = c1 * &f1.b + c2 * &f2.b;
        let mut f = Aff { a, b };
        f.reduce();
        f
    }
}

/// A facet of a hull: supporting functional (nonnegative on the configuration)
/// and the sorted indices of all configuration points it vanishes on.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Aff,
    pub support: Vec<usize>,
}

/// Facet description of the convex hull of a subconfiguration.
#[derive(Clone, Debug)]
pub struct Hull {
    /// Affine dimension of the subconfiguration.
    pub dim: usize,
    pub facets: Vec<Facet>,
    /// Primitive affine functionals vanishing on the whole subconfiguration.
    pub equations: Vec<Aff>,
}

/// Affine dimension of the points indexed by `subset` (0 for a single point).
pub fn affine_dim(points: &[Vec<Int>], subset: &[usize]) -> usize {
    assert!(!subset.is_empty());
    let p0 = &points[subset[0]];
    let rows: Vec<Vec<Rat>> = subset[1..]
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(p0)
                .map(|(x, y)| Rat::from_integer(x - y))
                .collect()
        })
        .collect();
    rank(&rows)
}

/// Primitive affine functionals vanishing on the points indexed by `subset`.
pub fn affine_equations(points: &[Vec<Int>], subset: &[usize]) -> Vec<Aff> {
    let rows: Vec<Vec<Rat>> = subset
        .iter()
        .map(|&i| {
            let mut r = to_rat_vec(&points[i]);
            r.push(Rat::one());
            r
        })
        .collect();
    kernel_int(&rows)
        .into_iter()
        .map(|mut v| {
            let b = v.pop().unwrap();
            Aff { a: v, b }
        })
        .collect()
}

fn support_of(points: &[Vec<Int>], subset: &[usize], f: &Aff) -> Vec<usize> {
    let mut s: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&i| f.eval(&points[i]).is_zero())
        .collect();
    s.sort_unstable();
    s
}

/// Supporting functional whose equality set is a facet, found by repeated
/// rotation around the current equality set.
fn initial_facet(points: &[Vec<Int>], subset: &[usize], k: usize) -> Aff {
    let d = points[subset[0]].len();
    // Seed: a non-constant coordinate functional, shifted to its minimum.
    let p0 = &points[subset[0]];
    let j = (0..d)
        .find(|&j| subset.iter().any(|&i| points[i][j] != p0[j]))
        .expect("positive-dimensional configuration");
    let min = subset.iter().map(|&i| points[i][j].clone()).min().unwrap();
    let mut a = vec![Int::zero(); d];
    a[j] = Int::one();
    let mut l = Aff { a, b: -min };
    loop {
        let e = support_of(points, subset, &l);
        if affine_dim(points, &e) == k - 1 {
            return l;
        }
        let mut advanced = false;
        for mu in affine_equations(points, &e) {
            if subset.iter().all(|&q| mu.eval(&points[q]).is_zero()) {
                continue;
            }
            let mu = if subset.iter().any(|&q| mu.eval(&points[q]).is_negative()) {
                mu
            } else {
                mu.negated()
            };
            let t = subset
                .iter()
                .filter_map(|&q| {
                    let m = mu.eval(&points[q]);
                    m.is_negative().then(|| Rat::new(l.eval(&points[q]), -m))
                })
                .min()
                .unwrap();
            let cand = Aff::combine(t.denom(), &l, t.numer(), &mu);
            // Reject a rotation that collapses onto the whole configuration
            // (possible when mu restricts to a multiple of l).
            if subset.iter().any(|&q| !cand.eval(&points[q]).is_zero()) {
                l = cand;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "facet rotation stalled");
    }
}

/// Rotate the supporting functional `f` around the ridge functional `r`
/// (nonnegative on `f`'s support, zero on the ridge) to the adjacent facet.
fn pivot_neighbor(points: &[Vec<Int>], subset: &[usize], f: &Aff, r: &Aff) -> Aff {
    let t = subset
        .iter()
        .filter_map(|&q| {
            let fq = f.eval(&points[q]);
            fq.is_positive().then(|| Rat::new(-r.eval(&points[q]), fq))
        })
        .max()
        .expect("proper facet must see points strictly above");
    let g = Aff::combine(t.numer(), f, t.denom(), r);
    debug_assert!(subset.iter().all(|&q| !g.eval(&points[q]).is_negative()));
    g
}

/// Ridges of a facet, as oriented functionals: facets of the sub-hull of the
/// facet's support, with a 0-dimensional support getting the empty ridge.
fn ridge_functionals(points: &[Vec<Int>], support: &[usize]) -> Vec<Aff> {
    if affine_dim(points, support) == 0 {
        let d = points[support[0]].len();
        return vec![Aff { a: vec![Int::zero(); d], b: Int::one() }];
    }
    hull_facets(points, support)
        .facets
        .into_iter()
        .map(|f| f.normal)
        .collect()
}

/// All facets of the convex hull of the points indexed by `subset`, by
/// breadth-first gift-wrapping over the ridge graph.
pub fn hull_facets(points: &[Vec<Int>], subset: &[usize]) -> Hull {
    let k = affine_dim(points, subset);
    let equations = affine_equations(points, subset);
    if k == 0 {
        return Hull { dim: 0, facets: Vec::new(), equations };
    }
    let first = initial_facet(points, subset, k);
    let first_support = support_of(points, subset, &first);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(first_support.clone());
    let mut queue = VecDeque::from([Facet { normal: first, support: first_support }]);
    let mut facets = Vec::new();
    while let Some(f) = queue.pop_front() {
        for r in ridge_functionals(points, &f.support) {
            let g = pivot_neighbor(points, subset, &f.normal, &r);
            let support = support_of(points, subset, &g);
            if seen.insert(support.clone()) {
                queue.push_back(Facet { normal: g, support });
            }
        }
        facets.push(f);
    }
    Hull { dim: k, facets, equations }
}

/// A maximal cell of the subdivision induced by lifting each point to its
/// weight: sorted indices of all points on the cell, and the affine
/// certificate `x -> eta . x + zeta` touching the weights exactly there.
#[derive(Clone, Debug)]
pub struct LowerCell {
    pub support: Vec<usize>,
    pub eta: Vec<Rat>,
    pub zeta: Rat,
}

impl LowerCell {
    /// `eta . p + zeta`.
    pub fn eval(&self, p: &[Int]) -> Rat {
        let mut v = self.zeta.clone();
        for (c, x) in self.eta.iter().zip(p) {
            v += c * Rat::from_integer(x.clone());
        }
        v
    }
}

/// Initial lower facet of the lifted configuration: start at the weight
/// minimum and rotate with functionals constant in the lifting coordinate.
fn initial_lower(points: &[Vec<Int>], lifted: &[Vec<Int>], all: &[usize], k: usize) -> Aff {
    let d = points[0].len();
    let wmin = lifted.iter().map(|q| q[d].clone()).min().unwrap();
    let mut a = vec![Int::zero(); d + 1];
    a[d] = Int::one();
    let mut l = Aff { a, b: -wmin };
    loop {
        let e = support_of(lifted, all, &l);
        if affine_dim(points, &e) == k {
            return l;
        }
        let mu = affine_equations(points, &e)
            .into_iter()
            .find(|m| all.iter().any(|&q| !m.eval(&points[q]).is_zero()))
            .expect("equality set not yet full-dimensional");
        let mut mu = Aff { a: { let mut a = mu.a; a.push(Int::zero()); a }, b: mu.b };
        if !all.iter().any(|&q| mu.eval(&lifted[q]).is_negative()) {
            mu = mu.negated();
        }
        let t = all
            .iter()
            .filter_map(|&q| {
                let m = mu.eval(&lifted[q]);
                m.is_negative().then(|| Rat::new(l.eval(&lifted[q]), -m))
            })
            .min()
            .unwrap();
        l = Aff::combine(t.denom(), &l, t.numer(), &mu);
        assert!(l.a[d].is_positive());
    }
}

/// Maximal cells of the regular subdivision of the whole configuration
/// induced by `weights`, with per-cell affine certificates.
pub fn lower_facets(points: &[Vec<Int>], weights: &[Rat]) -> Vec<LowerCell> {
    let n = points.len();
    assert_eq!(n, weights.len());
    assert!(n > 0);
    let d = points[0].len();
    let all: Vec<usize> = (0..n).collect();
    let (wints, den) = clear_denominators(weights);
    let lifted: Vec<Vec<Int>> = points
        .iter()
        .zip(&wints)
        .map(|(p, w)| {
            let mut q = p.clone();
            q.push(w.clone());
            q
        })
        .collect();
    let k = affine_dim(points, &all);
    let kl = affine_dim(&lifted, &all);
    if kl == k {
        // Affine weights: the trivial subdivision, certified by interpolation.
        let rows: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| {
                let mut r = to_rat_vec(p);
                r.push(Rat::one());
                r
            })
            .collect();
        let mut sol = solve(&rows, weights).expect("affine weights must interpolate");
        let zeta = sol.pop().unwrap();
        return vec![LowerCell { support: all, eta: sol, zeta }];
    }
    assert_eq!(kl, k + 1);

    let first = initial_lower(points, &lifted, &all, k);
    let first_support = support_of(&lifted, &all, &first);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(first_support.clone());
    let mut queue = VecDeque::from([Facet { normal: first, support: first_support }]);
    let mut cells = Vec::new();
    while let Some(f) = queue.pop_front() {
        for r in ridge_functionals(&lifted, &f.support) {
            let g = pivot_neighbor(&lifted, &all, &f.normal, &r);
            if !g.a[d].is_positive() {
                continue; // vertical or upper facet: subdivision boundary
            }
            let support = support_of(&lifted, &all, &g);
            if seen.insert(support.clone()) {
                queue.push_back(Facet { normal: g, support });
            }
        }
        cells.push(f);
    }

    cells
        .into_iter()
        .map(|f| {
            let scale = -Rat::new(Int::one(), &f.normal.a[d] * &den);
            let eta: Vec<Rat> = f.normal.a[..d]
                .iter()
                .map(|x| &scale * Rat::from_integer(x.clone()))
                .collect();
            let zeta = &scale * Rat::from_integer(f.normal.b.clone());
            LowerCell { support: f.support, eta, zeta }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ivec, rvec};

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| ivec(r)).collect()
    }

    fn check_hull(points: &[Vec<Int>], subset: &[usize], hull: &Hull) {
        for f in &hull.facets {
            for &i in subset {
                let v = f.normal.eval(&points[i]);
                assert!(!v.is_negative());
                assert_eq!(v.is_zero(), f.support.contains(&i));
            }
            assert_eq!(affine_dim(points, &f.support), hull.dim - 1);
        }
    }

    #[test]
    fn square_with_center() {
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        let all = [0, 1, 2, 3, 4];
        let hull = hull_facets(&p, &all);
        assert_eq!(hull.dim, 2);
        assert_eq!(hull.facets.len(), 4);
        assert!(hull.equations.is_empty());
        check_hull(&p, &all, &hull);
        assert!(hull.facets.iter().all(|f| !f.support.contains(&4)));
    }

    #[test]
    fn segment_two_facets() {
        let p = pts(&[&[0, 0], &[1, 1], &[3, 3]]);
        let all = [0, 1, 2];
        let hull = hull_facets(&p, &all);
        assert_eq!(hull.dim, 1);
        assert_eq!(hull.facets.len(), 2);
        assert_eq!(hull.equations.len(), 1);
        check_hull(&p, &all, &hull);
        let mut supports: Vec<Vec<usize>> =
            hull.facets.iter().map(|f| f.support.clone()).collect();
        supports.sort();
        assert_eq!(supports, vec![vec![0], vec![2]]);
    }

    #[test]
    fn tetrahedron_reeve() {
        for q in 1..4i64 {
            let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, q]]);
            let all = [0, 1, 2, 3];
            let hull = hull_facets(&p, &all);
            assert_eq!(hull.dim, 3);
            assert_eq!(hull.facets.len(), 4);
            check_hull(&p, &all, &hull);
        }
    }

    #[test]
    fn midpoints_on_facets() {
        // Triangle with edge midpoints: facet supports include the midpoints.
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 0], &[0, 1], &[1, 1]]);
        let all = [0, 1, 2, 3, 4, 5];
        let hull = hull_facets(&p, &all);
        assert_eq!(hull.facets.len(), 3);
        check_hull(&p, &all, &hull);
        for f in &hull.facets {
            assert_eq!(f.support.len(), 3);
        }
    }

    #[test]
    fn cube_facets() {
        let mut p = Vec::new();
        for i in 0..8i64 {
            p.push(ivec(&[i & 1, (i >> 1) & 1, (i >> 2) & 1]));
        }
        let all: Vec<usize> = (0..8).collect();
        let hull = hull_facets(&p, &all);
        assert_eq!(hull.facets.len(), 6);
        check_hull(&p, &all, &hull);
        for f in &hull.facets {
            assert_eq!(f.support.len(), 4);
        }
    }

    fn check_cells(points: &[Vec<Int>], weights: &[Rat], cells: &[LowerCell]) {
        for c in cells {
            for (i, p) in points.iter().enumerate() {
                let v = &weights[i] - c.eval(p);
                assert!(!v.is_negative());
                assert_eq!(v.is_zero(), c.support.contains(&i));
            }
        }
    }

    #[test]
    fn collinear_break() {
        // Four collinear points, unit weight on the last: two cells.
        let p = pts(&[&[0], &[1], &[2], &[3]]);
        let w = rvec(&[0, 0, 0, 1]);
        let cells = lower_facets(&p, &w);
        check_cells(&p, &w, &cells);
        let mut supports: Vec<Vec<usize>> = cells.iter().map(|c| c.support.clone()).collect();
        supports.sort();
        assert_eq!(supports, vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn affine_weights_trivial() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let w = rvec(&[5, 7, 6, 8]); // w = 2x + y + 5
        let cells = lower_facets(&p, &w);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].support, vec![0, 1, 2, 3]);
        check_cells(&p, &w, &cells);
    }

    #[test]
    fn square_diagonal_split() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let w = rvec(&[0, 0, 0, 1]);
        let cells = lower_facets(&p, &w);
        check_cells(&p, &w, &cells);
        let mut supports: Vec<Vec<usize>> = cells.iter().map(|c| c.support.clone()).collect();
        supports.sort();
        assert_eq!(supports, vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn fractional_weights() {
        let p = pts(&[&[0], &[1], &[2]]);
        let w = vec![crate::exact::rat(0, 1), crate::exact::rat(-1, 3), crate::exact::rat(0, 1)];
        let cells = lower_facets(&p, &w);
        check_cells(&p, &w, &cells);
        assert_eq!(cells.len(), 2);
    }
}
