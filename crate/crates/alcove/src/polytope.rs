//! Lattice polytopes over an explicit ambient lattice: vertex/facet duality,
//! lattice-point enumeration, widths, volume, integral-closedness checks.

use crate::exact::feasible::project;
use crate::exact::hull::{affine_dim, hull_facets, Aff};
use crate::exact::matrix::{hermite_smith, IntMatrix};
use crate::exact::solve::{rank, solve};
use crate::exact::{to_rat_vec, Int, LinCon, Rat, Rel};
use num_traits::{One, Signed, Zero};
use std::collections::HashSet;

/// An ambient lattice, as a rational basis (rows generate the lattice inside
/// rational space). Points are always stored in basis coordinates.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub dim: usize,
    pub basis: Vec<Vec<Rat>>,
}

impl Lattice {
    /// The standard lattice of the given dimension.
    pub fn standard(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Lattice { dim, basis }
    }

    /// A lattice with the given (full-rank) basis rows.
    pub fn new(basis: Vec<Vec<Rat>>) -> Self {
        let dim = basis.len();
        assert!(basis.iter().all(|r| r.len() == dim));
        assert_eq!(rank(&basis), dim, "lattice basis must have full rank");
        Lattice { dim, basis }
    }

    /// Ambient rational coordinates of a lattice point.
    pub fn to_ambient(&self, p: &[Int]) -> Vec<Rat> {
        assert_eq!(p.len(), self.dim);
        let mut out = vec![Rat::zero(); self.dim];
        for (c, row) in p.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += Rat::from_integer(c.clone()) * x;
            }
        }
        out
    }

    /// Lattice coordinates of an ambient rational point, if it is in the lattice.
    pub fn from_ambient(&self, q: &[Rat]) -> Option<Vec<Int>> {
        // Solve x * basis = q, i.e. basis^T as columns.
        let cols: Vec<Vec<Rat>> = (0..self.dim)
            .map(|j| self.basis.iter().map(|row| row[j].clone()).collect())
            .collect();
        let x = solve(&cols, q)?;
        x.iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect()
    }
}

/// Outcome of an integral-closedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closedness {
    Pass,
    Fail { witness: Vec<Int>, level: u32 },
}

/// A lattice polytope: vertices in lattice coordinates, derived facet data.
///
/// Facets are affine functionals nonnegative on the polytope (primitive
/// inward normals); equations cut out the affine hull of lower-dimensional
/// polytopes.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub lattice: Lattice,
    pub vertices: Vec<Vec<Int>>,
    pub facets: Vec<Aff>,
    pub equations: Vec<Aff>,
    pub dim: usize,
}

impl Polytope {
    /// Build from any generating point set: computes the hull and keeps only
    /// the extreme points.
    pub fn from_vertices(lattice: Lattice, points: Vec<Vec<Int>>) -> Self {
        assert!(!points.is_empty());
        let d = lattice.dim;
        assert!(points.iter().all(|p| p.len() == d));
        let mut pts = points;
        pts.sort();
        pts.dedup();
        let all: Vec<usize> = (0..pts.len()).collect();
        let hull = hull_facets(&pts, &all);
        let mut equations = hull.equations;
        for e in equations.iter_mut() {
            canonical_sign(e);
        }
        equations.sort_by(aff_cmp);
        let mut facets = hull.facets;
        facets.sort_by(|x, y| aff_cmp(&x.normal, &y.normal));
        // A point is extreme iff the facets and equations through it pin an
        // affine subspace of dimension zero.
        let vertices: Vec<Vec<Int>> = pts
            .iter()
            .filter(|p| {
                let mut rows: Vec<Vec<Rat>> =
                    equations.iter().map(|e| to_rat_vec(&e.a)).collect();
                for f in &facets {
                    if f.normal.eval(p).is_zero() {
                        rows.push(to_rat_vec(&f.normal.a));
                    }
                }
                rank(&rows) == d
            })
            .cloned()
            .collect();
        assert!(!vertices.is_empty());
        Polytope {
            lattice,
            vertices,
            facets: facets.into_iter().map(|f| f.normal).collect(),
            equations,
            dim: hull.dim,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice.dim
    }

    /// Whether a lattice point lies in the polytope.
    pub fn contains(&self, p: &[Int]) -> bool {
        self.facets.iter().all(|f| !f.eval(p).is_negative())
            && self.equations.iter().all(|e| e.eval(p).is_zero())
    }

    /// The polytope scaled by a positive integer factor.
    pub fn dilate(&self, k: u32) -> Polytope {
        assert!(k >= 1);
        let k = Int::from(k);
        let scale = |f: &Aff| Aff { a: f.a.clone(), b: &f.b * &k };
        Polytope {
            lattice: self.lattice.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * &k).collect())
                .collect(),
            facets: self.facets.iter().map(scale).collect(),
            equations: self.equations.iter().map(scale).collect(),
            dim: self.dim,
        }
    }

    /// Facet and equation constraints as a linear system.
    pub fn constraints(&self) -> Vec<LinCon> {
        let mut cons: Vec<LinCon> = self
            .facets
            .iter()
            .map(|f| {
                LinCon::new(to_rat_vec(&f.a), Rat::from_integer(f.b.clone()), Rel::Ge)
            })
            .collect();
        cons.extend(self.equations.iter().map(|e| {
            LinCon::new(to_rat_vec(&e.a), Rat::from_integer(e.b.clone()), Rel::Eq)
        }));
        cons
    }

    /// `max <y_i, P> - min <y_i, P>` for the i-th facet normal.
    pub fn facet_width(&self, facet_index: usize) -> Int {
        let f = &self.facets[facet_index];
        let vals: Vec<Int> = self.vertices.iter().map(|v| f.eval(v)).collect();
        vals.iter().max().unwrap() - vals.iter().min().unwrap()
    }

    /// All lattice points, in ascending lexicographic order, by coordinate
    /// interval propagation through exact projections.
    pub fn lattice_points(&self) -> Vec<Vec<Int>> {
        let d = self.ambient_dim();
        if d == 0 {
            return vec![vec![]];
        }
        let cons = self.constraints();
        // systems[j]: the projection onto coordinates 0..=j.
        let systems: Vec<Vec<LinCon>> = (0..d)
            .map(|j| {
                let keep: Vec<bool> = (0..d).map(|i| i <= j).collect();
                project(&cons, &keep)
            })
            .collect();
        let mut out = Vec::new();
        let mut prefix: Vec<Int> = Vec::new();
        enumerate_rec(&systems, d, &mut prefix, &mut out);
        out
    }

    /// Normalized volume (d! times Euclidean volume in lattice coordinates);
    /// the polytope must be full-dimensional.
    pub fn volume(&self) -> Int {
        assert!(self.equations.is_empty(), "volume requires a full-dimensional polytope");
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        cone_triangulation(&self.vertices, &all)
            .iter()
            .map(|cell| simplex_volume(&self.vertices, cell))
            .sum()
    }

    /// Check that every lattice point of `kP` is a sum of `k` lattice points
    /// of `P`, for each `2 <= k <= level`. The failure witness is the
    /// lexicographically smallest unreachable point at the smallest level.
    pub fn is_integrally_closed_up_to(&self, level: u32) -> Closedness {
        assert!(level >= 2);
        let base = self.lattice_points();
        let mut reach: HashSet<Vec<Int>> = base.iter().cloned().collect();
        for k in 2..=level {
            let target = self.dilate(k).lattice_points();
            let mut next: HashSet<Vec<Int>> = HashSet::new();
            for r in &reach {
                for a in &base {
                    next.insert(r.iter().zip(a).map(|(x, y)| x + y).collect());
                }
            }
            for p in &target {
                if !next.contains(p) {
                    return Closedness::Fail { witness: p.clone(), level: k };
                }
            }
            reach = target.into_iter().collect();
        }
        Closedness::Pass
    }

    /// Sorted indices of vertices joined to vertex `i` by an edge.
    pub fn vertex_neighbors(&self, i: usize) -> Vec<usize> {
        let d = self.ambient_dim();
        let v = &self.vertices[i];
        (0..self.vertices.len())
            .filter(|&j| {
                if j == i {
                    return false;
                }
                let u = &self.vertices[j];
                let mut rows: Vec<Vec<Rat>> =
                    self.equations.iter().map(|e| to_rat_vec(&e.a)).collect();
                for f in &self.facets {
                    if f.eval(v).is_zero() && f.eval(u).is_zero() {
                        rows.push(to_rat_vec(&f.a));
                    }
                }
                rank(&rows) == d - 1
            })
            .collect()
    }

    /// Recognize a lattice-equivalent product of unimodular simplices by the
    /// equivalence-class structure of one vertex's edge directions. Returns
    /// the sorted factor dimensions, or None.
    ///
    /// Precondition (asserted): the polytope's lattice points are exactly its
    /// vertices.
    pub fn is_product_of_unimodular_simplices(&self) -> Option<Vec<usize>> {
        let mut verts = self.vertices.clone();
        verts.sort();
        assert_eq!(
            verts,
            self.lattice_points(),
            "precondition: lattice points must equal vertices"
        );
        let v0 = self.vertices[0].clone();
        let nbrs = self.vertex_neighbors(0);
        if nbrs.len() != self.dim {
            return None;
        }
        let dirs: Vec<Vec<Int>> = nbrs
            .iter()
            .map(|&j| {
                self.vertices[j]
                    .iter()
                    .zip(&v0)
                    .map(|(x, y)| x - y)
                    .collect()
            })
            .collect();
        // The edge directions must span the lattice restricted to the affine
        // hull with index one.
        let hs = hermite_smith(&IntMatrix::from_rows(dirs.clone()));
        let index: Int = hs
            .snf_diagonal
            .iter()
            .filter(|x| !x.is_zero())
            .product();
        if hs.snf_diagonal.iter().filter(|x| !x.is_zero()).count() != self.dim
            || !index.is_one()
        {
            return None;
        }
        // Two directions share a factor iff stepping along both at once
        // leaves the vertex set.
        let vset: HashSet<&Vec<Int>> = self.vertices.iter().collect();
        let n = dirs.len();
        let mut class = (0..n).collect::<Vec<usize>>();
        fn find(class: &mut Vec<usize>, i: usize) -> usize {
            if class[i] != i {
                let r = find(class, class[i]);
                class[i] = r;
            }
            class[i]
        }
        for i in 0..n {
            for j in i + 1..n {
                let both: Vec<Int> = v0
                    .iter()
                    .zip(&dirs[i])
                    .zip(&dirs[j])
                    .map(|((x, a), b)| x + a + b)
                    .collect();
                if !vset.contains(&both) {
                    let (ri, rj) = (find(&mut class, i), find(&mut class, j));
                    class[ri] = rj;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            let r = find(&mut class, i);
            match reps.iter().position(|&x| x == r) {
                Some(g) => groups[g].push(i),
                None => {
                    reps.push(r);
                    groups.push(vec![i]);
                }
            }
        }
        // Verify: the candidate product's vertex set must match exactly.
        let mut candidate: Vec<Vec<Int>> = vec![v0.clone()];
        for g in &groups {
            let mut grown = Vec::new();
            for base in &candidate {
                grown.push(base.clone());
                for &i in g {
                    grown.push(base.iter().zip(&dirs[i]).map(|(x, a)| x + a).collect());
                }
            }
            candidate = grown;
        }
        candidate.sort();
        candidate.dedup();
        if candidate != verts {
            return None;
        }
        let mut factors: Vec<usize> = groups.iter().map(Vec::len).collect();
        factors.sort_unstable();
        Some(factors)
    }

    /// Re-coordinatize a lower-dimensional polytope inside the lattice of its
    /// affine hull. Returns the new polytope together with the basis rows and
    /// origin mapping new coordinates back: `p = origin + coords * basis`.
    pub fn full_dimensionalize(&self) -> (Polytope, Vec<Vec<Int>>, Vec<Int>) {
        if self.equations.is_empty() {
            let basis = (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| if i == j { Int::one() } else { Int::zero() })
                        .collect()
                })
                .collect();
            return (self.clone(), basis, vec![Int::zero(); self.dim]);
        }
        let d = self.ambient_dim();
        let eq_rows: Vec<Vec<Int>> = self.equations.iter().map(|e| e.a.clone()).collect();
        let m = eq_rows.len();
        let hs = hermite_smith(&IntMatrix::from_rows(eq_rows));
        // Columns of the right transform over zero diagonal entries form a
        // saturated basis of the integral kernel.
        let basis: Vec<Vec<Int>> = (0..d)
            .filter(|&j| j >= m || hs.snf_diagonal[j].is_zero())
            .map(|j| (0..d).map(|i| hs.snf_right[(i, j)].clone()).collect())
            .collect();
        assert_eq!(basis.len(), self.dim);
        let origin = self.vertices[0].clone();
        let cols: Vec<Vec<Rat>> = (0..d)
            .map(|i| basis.iter().map(|row| Rat::from_integer(row[i].clone())).collect())
            .collect();
        // cols is d rows (ambient coords) x dim unknowns: solve basis^T c = p - origin.
        let new_pts: Vec<Vec<Int>> = self
            .vertices
            .iter()
            .map(|p| {
                let rhs: Vec<Rat> = p
                    .iter()
                    .zip(&origin)
                    .map(|(x, o)| Rat::from_integer(x - o))
                    .collect();
                let c = solve(&cols, &rhs).expect("vertex outside affine hull");
                c.iter()
                    .map(|v| {
                        assert!(v.is_integer(), "saturated basis must give integer coordinates");
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let q = Polytope::from_vertices(Lattice::standard(self.dim), new_pts);
        (q, basis, origin)
    }
}

fn enumerate_rec(
    systems: &[Vec<LinCon>],
    d: usize,
    prefix: &mut Vec<Int>,
    out: &mut Vec<Vec<Int>>,
) {
    let j = prefix.len();
    if j == d {
        out.push(prefix.clone());
        return;
    }
    let mut lo: Option<Int> = None;
    let mut hi: Option<Int> = None;
    for c in &systems[j] {
        let a = &c.coeffs[j];
        if a.is_zero() {
            continue;
        }
        let mut rest = c.constant.clone();
        for (i, x) in prefix.iter().enumerate() {
            rest += &c.coeffs[i] * Rat::from_integer(x.clone());
        }
        let bound = -rest / a;
        let strict = c.rel == Rel::Gt;
        if a.is_positive() {
            let mut b = bound.ceil().to_integer();
            if strict && bound == Rat::from_integer(b.clone()) {
                b += 1;
            }
            if lo.as_ref().is_none_or(|l| b > *l) {
                lo = Some(b);
            }
        } else {
            let mut b = bound.floor().to_integer();
            if strict && bound == Rat::from_integer(b.clone()) {
                b -= 1;
            }
            if hi.as_ref().is_none_or(|h| b < *h) {
                hi = Some(b);
            }
        }
    }
    let (lo, hi) = match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        _ => panic!("unbounded direction while enumerating lattice points"),
    };
    let mut v = lo;
    while v <= hi {
        prefix.push(v.clone());
        enumerate_rec(systems, d, prefix, out);
        prefix.pop();
        v += 1;
    }
}

/// Normalized volume of the simplex on the given indices with respect to the
/// lattice of its own affine span (the product of the invariant factors of
/// the edge matrix); 0 if degenerate.
pub fn simplex_volume(points: &[Vec<Int>], cell: &[usize]) -> Int {
    assert!(!cell.is_empty());
    let v0 = &points[cell[0]];
    let edges: Vec<Vec<Int>> = cell[1..]
        .iter()
        .map(|&i| points[i].iter().zip(v0).map(|(x, y)| x - y).collect())
        .collect();
    if edges.is_empty() {
        return Int::one();
    }
    let hs = hermite_smith(&IntMatrix::from_rows(edges));
    let nonzero: Vec<&Int> = hs.snf_diagonal.iter().filter(|x| !x.is_zero()).collect();
    if nonzero.len() != cell.len() - 1 {
        return Int::zero();
    }
    nonzero.into_iter().product()
}

/// A triangulation of `conv(subset)` by coning the first index over a
/// recursive triangulation of the facets not containing it. Not regular in
/// general; used for exact volume computation.
pub fn cone_triangulation(points: &[Vec<Int>], subset: &[usize]) -> Vec<Vec<usize>> {
    let hull = hull_facets(points, subset);
    if hull.dim == 0 {
        return vec![vec![subset[0]]];
    }
    let apex = subset[0];
    let mut out = Vec::new();
    for f in &hull.facets {
        if f.support.contains(&apex) {
            continue;
        }
        for mut cell in cone_triangulation(points, &f.support) {
            cell.push(apex);
            cell.sort_unstable();
            out.push(cell);
        }
    }
    out
}

fn canonical_sign(f: &mut Aff) {
    let lead = f.a.iter().chain(std::iter::once(&f.b)).find(|x| !x.is_zero());
    if lead.map_or(false, |x| x.is_negative()) {
        *f = f.negated();
    }
}

fn aff_cmp(x: &Aff, y: &Aff) -> std::cmp::Ordering {
    (&x.a, &x.b).cmp(&(&y.a, &y.b))
}

/// An ordered point configuration: the substrate for subdivisions.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    pub lattice: Lattice,
    pub points: Vec<Vec<Int>>,
    /// Total order on indices used by pulling and canonical constructions.
    pub order: Vec<usize>,
}

impl PointConfiguration {
    pub fn new(lattice: Lattice, points: Vec<Vec<Int>>) -> Self {
        let mut sorted = points.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), points.len(), "configuration points must be distinct");
        let order = (0..points.len()).collect();
        PointConfiguration { lattice, points, order }
    }

    /// The configuration of all lattice points of a polytope, in
    /// lexicographic order.
    pub fn from_polytope(p: &Polytope) -> Self {
        PointConfiguration::new(p.lattice.clone(), p.lattice_points())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Affine dimension of the whole configuration.
    pub fn dim(&self) -> usize {
        let all: Vec<usize> = (0..self.len()).collect();
        affine_dim(&self.points, &all)
    }
}
