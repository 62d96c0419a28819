//! Subdivisions and triangulations of point configurations, with structural
//! checkers: validity, unimodularity, fullness, flagness, minimal non-faces,
//! dual graphs, and circuit triangulations.

use crate::exact::hull::{affine_dim, affine_equations, hull_facets};
use crate::exact::solve::rank;
use crate::exact::{lin_feasible, to_rat_vec, Int, LinCon, Rat, Rel};
use crate::polytope::{cone_triangulation, simplex_volume, Lattice, PointConfiguration, Polytope};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// A polyhedral subdivision of a point configuration, in the weak sense: a
/// configuration point may be unused, or lie in a cell without being one of
/// its vertices.
///
/// `cells[i]` holds the sorted indices of the i-th maximal cell's vertices;
/// `members[i]` additionally includes every configuration point lying in that
/// cell.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub config: PointConfiguration,
    pub cells: Vec<Vec<usize>>,
    pub members: Vec<Vec<usize>>,
}

/// How a subdivision fails to be one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Cell volumes do not add up to the hull volume.
    Volume { total: Int, expected: Int },
    /// Two cells do not intersect in a common face.
    Improper { a: usize, b: usize },
}

/// Unimodularity verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unimodularity {
    Yes,
    No { cell: usize, volume: Int },
}

/// Fullness verdict: does the triangulation use every lattice point of its
/// hull?
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fullness {
    Yes,
    No { missing: Vec<Vec<Int>> },
}

/// Minimal non-faces up to a size cap.
#[derive(Clone, Debug)]
pub struct NonFaceReport {
    pub minimal_nonfaces: Vec<Vec<usize>>,
    pub max_size: usize,
}

impl NonFaceReport {
    /// Flag means no minimal non-face of size other than 2 (unused points
    /// show up as size-1 non-faces and also break flagness).
    pub fn is_flag(&self) -> bool {
        self.minimal_nonfaces.iter().all(|n| n.len() == 2)
    }
}

impl Subdivision {
    /// Build from maximal cells given as vertex index sets; members are
    /// recovered geometrically.
    pub fn new(config: PointConfiguration, cells: Vec<Vec<usize>>) -> Self {
        let members = cells
            .iter()
            .map(|c| {
                let hull = hull_facets(&config.points, c);
                (0..config.len())
                    .filter(|&i| {
                        let p = &config.points[i];
                        hull.equations.iter().all(|e| e.eval(p).is_zero())
                            && hull.facets.iter().all(|f| !f.normal.eval(p).is_negative())
                    })
                    .collect()
            })
            .collect();
        Self::with_members_and_cells(config, cells, members)
    }

    /// Build from member sets (every configuration point on each cell); the
    /// vertex sets are the extreme points among the members.
    pub fn from_members(config: PointConfiguration, members: Vec<Vec<usize>>) -> Self {
        let cells = members
            .iter()
            .map(|m| {
                let hull = hull_facets(&config.points, m);
                let mut verts: Vec<usize> = m
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let p = &config.points[i];
                        let mut rows: Vec<Vec<Rat>> =
                            hull.equations.iter().map(|e| to_rat_vec(&e.a)).collect();
                        for f in &hull.facets {
                            if f.normal.eval(p).is_zero() {
                                rows.push(to_rat_vec(&f.normal.a));
                            }
                        }
                        rank(&rows) == p.len()
                    })
                    .collect();
                verts.sort_unstable();
                verts
            })
            .collect();
        Self::with_members_and_cells(config, cells, members)
    }

    fn with_members_and_cells(
        config: PointConfiguration,
        mut cells: Vec<Vec<usize>>,
        mut members: Vec<Vec<usize>>,
    ) -> Self {
        assert_eq!(cells.len(), members.len());
        let n = config.len();
        for (c, m) in cells.iter_mut().zip(members.iter_mut()) {
            c.sort_unstable();
            m.sort_unstable();
            assert!(c.iter().all(|&i| i < n), "cell index out of range");
            assert!(c.iter().all(|i| m.contains(i)));
        }
        // Deterministic cell order.
        let mut paired: Vec<(Vec<usize>, Vec<usize>)> =
            cells.into_iter().zip(members).collect();
        paired.sort();
        paired.dedup();
        let (cells, members) = paired.into_iter().unzip();
        Subdivision { config, cells, members }
    }

    /// The one-cell subdivision.
    pub fn trivial(config: PointConfiguration) -> Self {
        let all: Vec<usize> = (0..config.len()).collect();
        Self::from_members(config, vec![all])
    }

    pub fn dim(&self) -> usize {
        self.config.dim()
    }

    /// Indices used as vertices by at least one cell.
    pub fn used_vertices(&self) -> BTreeSet<usize> {
        self.cells.iter().flatten().copied().collect()
    }

    /// Normalized volume of the cell (triangulating it if necessary).
    pub fn cell_volume(&self, i: usize) -> Int {
        let cell = &self.cells[i];
        if cell.len() == affine_dim(&self.config.points, cell) + 1 {
            return simplex_volume(&self.config.points, cell);
        }
        cone_triangulation(&self.config.points, cell)
            .iter()
            .map(|s| simplex_volume(&self.config.points, s))
            .sum()
    }

    /// Total normalized volume of the configuration's hull.
    pub fn hull_volume(&self) -> Int {
        let all: Vec<usize> = (0..self.config.len()).collect();
        cone_triangulation(&self.config.points, &all)
            .iter()
            .map(|s| simplex_volume(&self.config.points, s))
            .sum()
    }

    /// Exact validity: cell volumes sum to the hull volume, and every pair of
    /// cells meets in a common face of both.
    pub fn validate(&self) -> Result<(), Violation> {
        let expected = self.hull_volume();
        let total: Int = (0..self.cells.len()).map(|i| self.cell_volume(i)).sum();
        if total != expected {
            return Err(Violation::Volume { total, expected });
        }
        let boxes: Vec<(Vec<Int>, Vec<Int>)> = self
            .cells
            .iter()
            .map(|c| bounding_box(&self.config.points, c))
            .collect();
        for a in 0..self.cells.len() {
            for b in a + 1..self.cells.len() {
                if boxes_disjoint(&boxes[a], &boxes[b]) {
                    continue;
                }
                if !self.pair_proper(a, b) {
                    return Err(Violation::Improper { a, b });
                }
            }
        }
        Ok(())
    }

    /// Whether cells `a` and `b` intersect in a common face of both.
    fn pair_proper(&self, a: usize, b: usize) -> bool {
        let pts = &self.config.points;
        let ca = &self.cells[a];
        let cb = &self.cells[b];
        let common: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
        // Fast path: a strict separating functional vanishing exactly on the
        // common vertices proves properness outright. Try the hyperplane of
        // the common set first, then a one-shot feasibility query.
        if !common.is_empty() && common.len() < ca.len() && common.len() < cb.len() {
            for f in affine_equations(pts, &common) {
                for flip in [1i64, -1] {
                    let val = |i: usize| f.eval(&pts[i]) * flip;
                    let good = ca.iter().all(|&i| {
                        let v = val(i);
                        if common.contains(&i) { v.is_zero() } else { v.is_positive() }
                    }) && cb.iter().all(|&i| {
                        let v = val(i);
                        if common.contains(&i) { v.is_zero() } else { v.is_negative() }
                    });
                    if good {
                        return true;
                    }
                }
            }
        }
        if self.separation_feasible(ca, cb, &common) {
            return true;
        }
        // Exact fallback: conv(common) must be a face of each cell and equal
        // the geometric intersection.
        if !common.is_empty()
            && (!face_of(pts, ca, &common) || !face_of(pts, cb, &common))
        {
            return false;
        }
        let mut cons = cell_constraints(pts, ca);
        cons.extend(cell_constraints(pts, cb));
        if common.is_empty() {
            return !lin_feasible(&cons).is_feasible();
        }
        let hull = hull_facets(pts, &common);
        for f in &hull.facets {
            let mut sys = cons.clone();
            sys.push(LinCon::new(
                to_rat_vec(&f.normal.a).iter().map(|x| -x).collect(),
                -Rat::from_integer(f.normal.b.clone()),
                Rel::Gt,
            ));
            if lin_feasible(&sys).is_feasible() {
                return false;
            }
        }
        for e in &hull.equations {
            for sign in [1i64, -1] {
                let mut sys = cons.clone();
                sys.push(LinCon::new(
                    e.a.iter().map(|x| Rat::from_integer(x * sign)).collect(),
                    Rat::from_integer(&e.b * sign),
                    Rel::Gt,
                ));
                if lin_feasible(&sys).is_feasible() {
                    return false;
                }
            }
        }
        true
    }

    /// Feasibility of a functional >= 0 on cell `a`, <= 0 on cell `b`,
    /// vanishing exactly on the common vertices.
    fn separation_feasible(&self, ca: &[usize], cb: &[usize], common: &[usize]) -> bool {
        let pts = &self.config.points;
        let d = pts[0].len();
        // Unknowns: d coefficients plus a constant.
        let mut cons = Vec::new();
        let row = |i: usize| {
            let mut r = to_rat_vec(&pts[i]);
            r.push(Rat::one());
            r
        };
        for &i in ca {
            let rel = if common.contains(&i) { Rel::Eq } else { Rel::Gt };
            cons.push(LinCon::new(row(i), Rat::zero(), rel));
        }
        for &i in cb {
            if common.contains(&i) {
                continue;
            }
            cons.push(LinCon::new(
                row(i).iter().map(|x| -x).collect(),
                Rat::zero(),
                Rel::Gt,
            ));
        }
        let _ = d;
        lin_feasible(&cons).is_feasible()
    }
}

fn bounding_box(points: &[Vec<Int>], cell: &[usize]) -> (Vec<Int>, Vec<Int>) {
    let d = points[cell[0]].len();
    let mut lo = points[cell[0]].clone();
    let mut hi = lo.clone();
    for &i in &cell[1..] {
        for j in 0..d {
            if points[i][j] < lo[j] {
                lo[j] = points[i][j].clone();
            }
            if points[i][j] > hi[j] {
                hi[j] = points[i][j].clone();
            }
        }
    }
    (lo, hi)
}

fn boxes_disjoint(a: &(Vec<Int>, Vec<Int>), b: &(Vec<Int>, Vec<Int>)) -> bool {
    a.0.iter().zip(&b.1).any(|(lo, hi)| lo > hi) || b.0.iter().zip(&a.1).any(|(lo, hi)| lo > hi)
}

/// H-description of one cell as a constraint system.
pub(crate) fn cell_constraints(points: &[Vec<Int>], cell: &[usize]) -> Vec<LinCon> {
    let hull = hull_facets(points, cell);
    let mut cons: Vec<LinCon> = hull
        .facets
        .iter()
        .map(|f| {
            LinCon::new(
                to_rat_vec(&f.normal.a),
                Rat::from_integer(f.normal.b.clone()),
                Rel::Ge,
            )
        })
        .collect();
    cons.extend(hull.equations.iter().map(|e| {
        LinCon::new(to_rat_vec(&e.a), Rat::from_integer(e.b.clone()), Rel::Eq)
    }));
    cons
}

/// Whether conv(sub) is a face of conv(cell): a functional vanishing on `sub`
/// and strictly positive on the rest of `cell` must exist.
fn face_of(points: &[Vec<Int>], cell: &[usize], sub: &[usize]) -> bool {
    let d = points[0].len();
    let cons: Vec<LinCon> = cell
        .iter()
        .map(|&i| {
            let mut r = to_rat_vec(&points[i]);
            r.push(Rat::one());
            let rel = if sub.contains(&i) { Rel::Eq } else { Rel::Gt };
            LinCon::new(r, Rat::zero(), rel)
        })
        .collect();
    let _ = d;
    lin_feasible(&cons).is_feasible()
}

/// A subdivision all of whose cells are simplices.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub sub: Subdivision,
}

impl std::ops::Deref for Triangulation {
    type Target = Subdivision;
    fn deref(&self) -> &Subdivision {
        &self.sub
    }
}

impl Triangulation {
    pub fn new(sub: Subdivision) -> Self {
        let dim = sub.dim();
        for c in &sub.cells {
            assert_eq!(c.len(), dim + 1, "triangulation cell must be a spanning simplex");
            assert!(
                !simplex_volume(&sub.config.points, c).is_zero(),
                "degenerate cell"
            );
        }
        Triangulation { sub }
    }

    /// Every cell has normalized volume one.
    pub fn is_unimodular(&self) -> Unimodularity {
        for (i, c) in self.cells.iter().enumerate() {
            let v = simplex_volume(&self.config.points, c);
            if !v.is_one() {
                return Unimodularity::No { cell: i, volume: v };
            }
        }
        Unimodularity::Yes
    }

    /// The vertex set equals the lattice points of the hull.
    pub fn is_full(&self) -> Fullness {
        let hull = Polytope::from_vertices(
            Lattice::standard(self.config.points[0].len()),
            self.config.points.clone(),
        );
        let used = self.used_vertices();
        let used_points: HashSet<&Vec<Int>> =
            used.iter().map(|&i| &self.config.points[i]).collect();
        let missing: Vec<Vec<Int>> = hull
            .lattice_points()
            .into_iter()
            .filter(|p| !used_points.contains(p))
            .collect();
        if missing.is_empty() {
            Fullness::Yes
        } else {
            Fullness::No { missing }
        }
    }

    /// All minimal non-faces of cardinality at most `size_cap`, by clique
    /// extension over the 1-skeleton (a non-face that is not a clique
    /// contains a size-2 non-face).
    pub fn minimal_nonfaces(&self, size_cap: usize) -> NonFaceReport {
        assert!(size_cap >= 2);
        let n = self.config.len();
        let used = self.used_vertices();
        let mut report: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if !used.contains(&v) {
                report.push(vec![v]);
            }
        }
        // Cells containing each vertex, for face tests.
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, c) in self.cells.iter().enumerate() {
            for &v in c {
                by_vertex[v].push(ci);
            }
        }
        let is_face = |set: &[usize]| -> bool {
            let mut live: Vec<usize> = by_vertex[set[0]].clone();
            for &v in &set[1..] {
                live.retain(|ci| self.cells[*ci].contains(&v));
                if live.is_empty() {
                    return false;
                }
            }
            true
        };
        let verts: Vec<usize> = used.iter().copied().collect();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (ai, &a) in verts.iter().enumerate() {
            for &b in &verts[ai + 1..] {
                let pair = vec![a, b];
                if is_face(&pair) {
                    faces.insert(pair);
                } else {
                    report.push(pair);
                }
            }
        }
        for _size in 3..=size_cap {
            let mut next: BTreeSet<Vec<usize>> = BTreeSet::new();
            for f in &faces {
                for &v in &verts {
                    if v <= *f.last().unwrap() {
                        continue;
                    }
                    if !f.iter().all(|&u| is_face(&[u, v])) {
                        continue;
                    }
                    let mut cand = f.clone();
                    cand.push(v);
                    if is_face(&cand) {
                        next.insert(cand);
                    } else {
                        let minimal = (0..cand.len()).all(|skip| {
                            let sub: Vec<usize> = cand
                                .iter()
                                .enumerate()
                                .filter(|&(k, _)| k != skip)
                                .map(|(_, &x)| x)
                                .collect();
                            is_face(&sub)
                        });
                        if minimal && !report.contains(&cand) {
                            report.push(cand);
                        }
                    }
                }
            }
            faces = next;
        }
        let max_size = report.iter().map(Vec::len).max().unwrap_or(0);
        NonFaceReport { minimal_nonfaces: report, max_size }
    }

    /// Flagness: all minimal non-faces have size 2.
    pub fn is_flag(&self) -> bool {
        self.minimal_nonfaces(self.dim() + 2).is_flag()
    }

    /// Dual graph: one node per cell, edges where two cells share a facet
    /// (all but one vertex).
    pub fn dual_graph(&self) -> DualGraph {
        let mut by_facet: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.cells.iter().enumerate() {
            for skip in 0..c.len() {
                let facet: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                by_facet.entry(facet).or_default().push(ci);
            }
        }
        let mut edges = Vec::new();
        for cells in by_facet.values() {
            for i in 0..cells.len() {
                for j in i + 1..cells.len() {
                    edges.push((cells[i], cells[j]));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        DualGraph { nodes: self.cells.len(), edges }
    }
}

/// Dual graph of a triangulation.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn is_connected(&self) -> bool {
        if self.nodes == 0 {
            return true;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.nodes
    }

    pub fn is_path(&self) -> bool {
        if !self.is_tree() {
            return false;
        }
        let mut deg = vec![0usize; self.nodes];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.iter().all(|&d| d <= 2)
    }
}

/// The two triangulations of a circuit (a configuration with a unique affine
/// dependence), plus the primitive dependence itself.
#[derive(Clone, Debug)]
pub struct CircuitPair {
    pub lambda: Vec<Int>,
    pub t_plus: Triangulation,
    pub t_minus: Triangulation,
}

/// For a configuration of n points of affine dimension n-2, return its two
/// triangulations: cells omitting one positive-coefficient point each, and
/// cells omitting one negative-coefficient point each.
pub fn circuit_triangulations(config: &PointConfiguration) -> CircuitPair {
    let n = config.len();
    assert!(n >= 2);
    let all: Vec<usize> = (0..n).collect();
    assert_eq!(
        affine_dim(&config.points, &all),
        n - 2,
        "configuration must have a unique affine dependence"
    );
    let rows: Vec<Vec<Rat>> = config
        .points
        .iter()
        .map(|p| {
            let mut r = to_rat_vec(p);
            r.push(Rat::one());
            r
        })
        .collect();
    // Dependence: lambda with sum lambda_i (p_i, 1) = 0, i.e. the kernel of
    // the transposed homogeneous matrix.
    let cols: Vec<Vec<Rat>> = (0..=config.points[0].len())
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let kernel = crate::exact::solve::kernel_int(&cols);
    assert_eq!(kernel.len(), 1);
    let mut lambda = kernel.into_iter().next().unwrap();
    let flip = lambda
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if flip {
        for x in lambda.iter_mut() {
            *x = -x.clone();
        }
    }
    assert!(
        lambda.iter().all(|x| !x.is_zero()),
        "a circuit has full support"
    );
    let side = |positive: bool| -> Triangulation {
        let cells: Vec<Vec<usize>> = (0..n)
            .filter(|&i| lambda[i].is_positive() == positive)
            .map(|i| all.iter().copied().filter(|&j| j != i).collect())
            .collect();
        Triangulation::new(Subdivision::new(config.clone(), cells))
    };
    let t_plus = side(true);
    let t_minus = side(false);
    CircuitPair { lambda, t_plus, t_minus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ivec};

    fn config(rows: &[&[i64]]) -> PointConfiguration {
        let pts: Vec<Vec<Int>> = rows.iter().map(|r| ivec(r)).collect();
        PointConfiguration::new(Lattice::standard(pts[0].len()), pts)
    }

    fn square2() -> PointConfiguration {
        // 2x2 square with all 9 lattice points.
        config(&[
            &[0, 0],
            &[0, 1],
            &[0, 2],
            &[1, 0],
            &[1, 1],
            &[1, 2],
            &[2, 0],
            &[2, 1],
            &[2, 2],
        ])
    }

    #[test]
    fn four_cell_triangulation_valid() {
        // Corner-to-center fan of the 2x2 square: 4 cells of volume 2.
        let c = square2();
        let sub = Subdivision::new(
            c,
            vec![vec![0, 2, 4], vec![0, 6, 4], vec![2, 8, 4], vec![6, 8, 4]],
        );
        assert_eq!(sub.validate(), Ok(()));
        let t = Triangulation::new(sub);
        match t.is_unimodular() {
            Unimodularity::No { volume, .. } => assert_eq!(volume, int(2)),
            _ => panic!("expected non-unimodular"),
        }
        match t.is_full() {
            Fullness::No { missing } => assert_eq!(missing.len(), 4),
            _ => panic!("edge midpoints are unused"),
        }
    }

    #[test]
    fn overlap_detected() {
        let c = config(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        let sub = Subdivision::new(c, vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 1, 4]]);
        match sub.validate() {
            Err(Violation::Volume { .. }) => {}
            other => panic!("expected volume violation, got {other:?}"),
        }
    }

    #[test]
    fn improper_pair_detected() {
        // Left half split in two, right half one triangle pair with a
        // T-junction along x=1.
        let c = config(&[&[0, 0], &[1, 0], &[2, 0], &[0, 2], &[1, 2], &[2, 2], &[1, 1]]);
        let sub = Subdivision::new(
            c,
            vec![
                vec![0, 1, 6],
                vec![0, 3, 6],
                vec![3, 4, 6],
                vec![1, 2, 5],
                vec![1, 4, 5],
            ],
        );
        match sub.validate() {
            Err(Violation::Improper { .. }) => {}
            other => panic!("expected improper pair, got {other:?}"),
        }
    }

    #[test]
    fn missing_cell_detected() {
        let c = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let sub = Subdivision::new(c, vec![vec![0, 1, 2]]);
        match sub.validate() {
            Err(Violation::Volume { total, expected }) => {
                assert_eq!(total, int(1));
                assert_eq!(expected, int(2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unimodular_and_full() {
        let c = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let t = Triangulation::new(Subdivision::new(
            c,
            vec![vec![0, 1, 2], vec![1, 2, 3]],
        ));
        assert_eq!(t.sub.validate(), Ok(()));
        assert_eq!(t.is_unimodular(), Unimodularity::Yes);
        assert_eq!(t.is_full(), Fullness::Yes);
        assert!(t.is_flag());
    }

    #[test]
    fn members_weak_semantics() {
        // Segment 0..2 with midpoint in the configuration but unused.
        let c = config(&[&[0], &[1], &[2]]);
        let sub = Subdivision::new(c, vec![vec![0, 2]]);
        assert_eq!(sub.members, vec![vec![0, 1, 2]]);
        assert_eq!(sub.validate(), Ok(()));
    }

    #[test]
    fn staircase_square_flag() {
        let c = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let t = Triangulation::new(Subdivision::new(
            c,
            vec![vec![0, 1, 3], vec![0, 2, 3]],
        ));
        let report = t.minimal_nonfaces(4);
        assert_eq!(report.minimal_nonfaces, vec![vec![1, 2]]);
        assert!(report.is_flag());
    }

    #[test]
    fn nonface_of_size_three() {
        // Fan of a triangle around an interior point: the three corners are
        // pairwise joined by edges but never share a cell.
        let c = config(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]]);
        let t = Triangulation::new(Subdivision::new(
            c,
            vec![vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]],
        ));
        let report = t.minimal_nonfaces(4);
        assert_eq!(report.minimal_nonfaces, vec![vec![0, 1, 2]]);
        assert!(!report.is_flag());
        assert_eq!(report.max_size, 3);
    }

    #[test]
    fn dual_graph_shapes() {
        let c = config(&[&[0], &[1], &[2], &[3]]);
        let t = Triangulation::new(Subdivision::new(
            c,
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
        ));
        let g = t.dual_graph();
        assert_eq!(g.nodes, 3);
        assert!(g.is_path());
        let single = Triangulation::new(Subdivision::new(
            config(&[&[0], &[1]]),
            vec![vec![0, 1]],
        ));
        let g1 = single.dual_graph();
        assert_eq!((g1.nodes, g1.edges.len()), (1, 0));
        assert!(g1.is_tree());
    }

    #[test]
    fn circuit_on_line() {
        let c = config(&[&[0], &[1], &[2]]);
        let pair = circuit_triangulations(&c);
        // lambda proportional to (1, -2, 1).
        assert_eq!(pair.lambda, ivec(&[1, -2, 1]));
        let mut plus: Vec<Vec<usize>> = pair.t_plus.cells.clone();
        plus.sort();
        assert_eq!(plus, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(pair.t_minus.cells, vec![vec![0, 2]]);
        assert_eq!(pair.t_plus.is_unimodular(), Unimodularity::Yes);
        match pair.t_minus.is_unimodular() {
            Unimodularity::No { volume, .. } => assert_eq!(volume, int(2)),
            _ => panic!(),
        }
        // T+ has A+ = {0,2} as its only minimal non-face; T- has {1}.
        let r = pair.t_plus.minimal_nonfaces(3);
        assert_eq!(r.minimal_nonfaces, vec![vec![0, 2]]);
        let r = pair.t_minus.minimal_nonfaces(3);
        assert_eq!(r.minimal_nonfaces, vec![vec![1]]);
    }

    #[test]
    fn circuit_square() {
        // The square: lambda = (1, -1, -1, 1) in lex vertex order.
        let c = config(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let pair = circuit_triangulations(&c);
        assert_eq!(pair.t_plus.cells.len(), 2);
        assert_eq!(pair.t_minus.cells.len(), 2);
        assert_eq!(pair.t_plus.sub.validate(), Ok(()));
        assert_eq!(pair.t_minus.sub.validate(), Ok(()));
        assert_eq!(pair.t_plus.is_unimodular(), Unimodularity::Yes);
        assert_eq!(pair.t_minus.is_unimodular(), Unimodularity::Yes);
    }
}
