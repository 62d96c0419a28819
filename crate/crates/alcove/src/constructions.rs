//! Triangulations of composite polytopes: staircase products, joins, fiber
//! products, chimneys with pull-back and push-forward subdivisions, and
//! semidirect products with their canonical slicing.

use crate::builders::{pull, vertex_enumerate, Compressedness, PullMode};
use crate::exact::hull::hull_facets;
use crate::exact::solve::{rank, solve};
use crate::exact::{
    idot, lin_feasible, to_rat_vec, Feasibility, Int, LinCon, Rat, Rel,
};
use crate::polytope::{simplex_volume, Lattice, PointConfiguration, Polytope};
use crate::subdivision::{cell_constraints, Subdivision, Triangulation, Unimodularity};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Undirected 1-skeleton of a triangulation, as sorted vertex pairs.
fn skeleton_edges(t: &Triangulation) -> BTreeSet<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for c in &t.cells {
        for pair in c.iter().combinations(2) {
            edges.insert((*pair[0], *pair[1]));
        }
    }
    edges
}

/// A direction for every skeleton edge, with no directed triangle inside any
/// cell (locally acyclic).
#[derive(Clone, Debug)]
pub struct EdgeOrientation {
    edges: BTreeSet<(usize, usize)>,
}

impl EdgeOrientation {
    /// Build from explicit directed edges; fails with a witness triangle if
    /// some cell contains a directed 3-cycle.
    pub fn new(t: &Triangulation, directed: Vec<(usize, usize)>) -> Result<Self, [usize; 3]> {
        let undirected = skeleton_edges(t);
        let edges: BTreeSet<(usize, usize)> = directed.into_iter().collect();
        for &(u, v) in &undirected {
            assert!(
                edges.contains(&(u, v)) != edges.contains(&(v, u)),
                "every skeleton edge needs exactly one direction"
            );
        }
        let o = EdgeOrientation { edges };
        for c in t.cells.iter() {
            for tri in c.iter().combinations(3) {
                let (a, b, c) = (*tri[0], *tri[1], *tri[2]);
                for cyc in [[a, b, c], [a, c, b]] {
                    if o.has(cyc[0], cyc[1]) && o.has(cyc[1], cyc[2]) && o.has(cyc[2], cyc[0]) {
                        return Err(cyc);
                    }
                }
            }
        }
        Ok(o)
    }

    /// Orient every edge from the earlier to the later point of a total
    /// order; always globally acyclic.
    pub fn from_order(t: &Triangulation, order: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let directed = skeleton_edges(t)
            .into_iter()
            .map(|(u, v)| if pos[&u] < pos[&v] { (u, v) } else { (v, u) })
            .collect();
        Self::new(t, directed).expect("a total order cannot create cycles")
    }

    pub fn has(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Whether the whole directed skeleton is acyclic.
    pub fn is_globally_acyclic(&self) -> bool {
        let verts: BTreeSet<usize> =
            self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        let mut indeg: BTreeMap<usize, usize> = verts.iter().map(|&v| (v, 0)).collect();
        for &(_, v) in &self.edges {
            *indeg.get_mut(&v).unwrap() += 1;
        }
        let mut queue: Vec<usize> =
            indeg.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop() {
            seen += 1;
            for &(a, b) in &self.edges {
                if a == u {
                    let d = indeg.get_mut(&b).unwrap();
                    *d -= 1;
                    if *d == 0 {
                        queue.push(b);
                    }
                }
            }
        }
        seen == verts.len()
    }

    /// The vertices of one cell in orientation order (the restriction to a
    /// cell is a transitive tournament).
    pub fn cell_order(&self, cell: &[usize]) -> Vec<usize> {
        let mut v = cell.to_vec();
        v.sort_by_key(|&a| cell.iter().filter(|&&b| b != a && self.has(b, a)).count());
        v
    }
}

/// Monotone staircase paths from (0,0) to (r,s) on the grid.
fn staircase_paths(r: usize, s: usize) -> Vec<Vec<(usize, usize)>> {
    if r == 0 && s == 0 {
        return vec![vec![(0, 0)]];
    }
    let mut out = Vec::new();
    if r > 0 {
        for mut p in staircase_paths(r - 1, s) {
            p.push((r, s));
            out.push(p);
        }
    }
    if s > 0 {
        for mut p in staircase_paths(r, s - 1) {
            p.push((r, s));
            out.push(p);
        }
    }
    out
}

/// The staircase refinement of a product of two triangulations with respect
/// to locally acyclic orientations of their skeleta.
pub fn staircase_product(
    t1: &Triangulation,
    t2: &Triangulation,
    o1: &EdgeOrientation,
    o2: &EdgeOrientation,
) -> Triangulation {
    let (n1, n2) = (t1.config.len(), t2.config.len());
    let d = t1.config.points[0].len() + t2.config.points[0].len();
    let points: Vec<Vec<Int>> = t1
        .config
        .points
        .iter()
        .cartesian_product(&t2.config.points)
        .map(|(p, q)| p.iter().chain(q).cloned().collect())
        .collect();
    assert_eq!(points.len(), n1 * n2);
    let config = PointConfiguration::new(Lattice::standard(d), points);
    let mut cells = Vec::new();
    for c1 in &t1.cells {
        let u = o1.cell_order(c1);
        for c2 in &t2.cells {
            let v = o2.cell_order(c2);
            for path in staircase_paths(u.len() - 1, v.len() - 1) {
                let mut cell: Vec<usize> =
                    path.iter().map(|&(i, j)| u[i] * n2 + v[j]).collect();
                cell.sort_unstable();
                cells.push(cell);
            }
        }
    }
    cells.sort();
    cells.dedup();
    Triangulation::new(Subdivision::new(config, cells))
}

/// The join: both factors embedded on parallel hyperplanes one level apart,
/// cells = unions of cell pairs.
pub fn join(t1: &Triangulation, t2: &Triangulation) -> Triangulation {
    let (d1, d2) = (t1.config.points[0].len(), t2.config.points[0].len());
    let n1 = t1.config.len();
    let mut points: Vec<Vec<Int>> = t1
        .config
        .points
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.extend(vec![Int::zero(); d2 + 1]);
            v
        })
        .collect();
    points.extend(t2.config.points.iter().map(|q| {
        let mut v = vec![Int::zero(); d1];
        v.extend(q.iter().cloned());
        v.push(Int::one());
        v
    }));
    let config = PointConfiguration::new(Lattice::standard(d1 + d2 + 1), points);
    let mut cells = Vec::new();
    for c1 in &t1.cells {
        for c2 in &t2.cells {
            let mut cell = c1.clone();
            cell.extend(c2.iter().map(|&j| n1 + j));
            cells.push(cell);
        }
    }
    cells.sort();
    Triangulation::new(Subdivision::new(config, cells))
}

/// An integer affine map `x -> mat . x + off`.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub mat: Vec<Vec<Int>>,
    pub off: Vec<Int>,
}

impl AffineMap {
    pub fn apply(&self, p: &[Int]) -> Vec<Int> {
        self.mat
            .iter()
            .zip(&self.off)
            .map(|(row, o)| idot(row, p) + o)
            .collect()
    }
}

/// Lift a constraint on the first block to the product space by appending
/// zero coefficients.
fn pad_right(c: &LinCon, extra: usize) -> LinCon {
    let mut coeffs = c.coeffs.clone();
    coeffs.extend(vec![Rat::zero(); extra]);
    LinCon::new(coeffs, c.constant.clone(), c.rel)
}

fn pad_left(c: &LinCon, extra: usize) -> LinCon {
    let mut coeffs = vec![Rat::zero(); extra];
    coeffs.extend(c.coeffs.iter().cloned());
    LinCon::new(coeffs, c.constant.clone(), c.rel)
}

/// Affine dimension of a set of rational points.
fn rat_affine_dim(pts: &[Vec<Rat>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let rows: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    rank(&rows)
}

/// Check that the distinct images of a configuration under a projection are
/// the vertices of a unimodular simplex.
fn image_is_unimodular_simplex(config: &PointConfiguration, pi: &AffineMap) -> bool {
    let mut images: Vec<Vec<Int>> =
        config.points.iter().map(|p| pi.apply(p)).collect();
    images.sort();
    images.dedup();
    let all: Vec<usize> = (0..images.len()).collect();
    let hull = hull_facets(&images, &all);
    if hull.dim + 1 != images.len() {
        return false;
    }
    hull.dim == 0 || simplex_volume(&images, &all).is_one()
}

/// The fiber product of two unimodular triangulations over a common
/// unimodular simplex image; cells are the pairwise intersections, pulled to
/// a triangulation.
pub fn fiber_product(
    t1: &Triangulation,
    t2: &Triangulation,
    pi1: &AffineMap,
    pi2: &AffineMap,
) -> Triangulation {
    assert!(matches!(t1.is_unimodular(), Unimodularity::Yes));
    assert!(matches!(t2.is_unimodular(), Unimodularity::Yes));
    assert!(
        image_is_unimodular_simplex(&t1.config, pi1),
        "first projection must land on a unimodular simplex"
    );
    assert!(
        image_is_unimodular_simplex(&t2.config, pi2),
        "second projection must land on a unimodular simplex"
    );
    let (d1, d2) = (t1.config.points[0].len(), t2.config.points[0].len());
    let r = pi1.off.len();
    assert_eq!(r, pi2.off.len());
    // The lattice points of the fiber product are the matching pairs.
    let mut pairs: Vec<Vec<Int>> = Vec::new();
    for a in &t1.config.points {
        for b in &t2.config.points {
            if pi1.apply(a) == pi2.apply(b) {
                pairs.push(a.iter().chain(b).cloned().collect());
            }
        }
    }
    assert!(!pairs.is_empty(), "projections never agree");
    let config = PointConfiguration::new(Lattice::standard(d1 + d2), pairs);
    let fp_dim = config.dim();
    let index: BTreeMap<Vec<Int>, usize> = config
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    // Equations pi1(x) = pi2(y) on the product space.
    let mut eqs: Vec<LinCon> = Vec::new();
    for nu in 0..r {
        let mut coeffs = to_rat_vec(&pi1.mat[nu]);
        coeffs.extend(pi2.mat[nu].iter().map(|c| -Rat::from_integer(c.clone())));
        let cst = Rat::from_integer(&pi1.off[nu] - &pi2.off[nu]);
        eqs.push(LinCon::new(coeffs, cst, Rel::Eq));
    }
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for c1 in &t1.cells {
        for c2 in &t2.cells {
            let mut cons: Vec<LinCon> = cell_constraints(&t1.config.points, c1)
                .iter()
                .map(|c| pad_right(c, d2))
                .collect();
            cons.extend(
                cell_constraints(&t2.config.points, c2)
                    .iter()
                    .map(|c| pad_left(c, d1)),
            );
            cons.extend(eqs.iter().cloned());
            let verts = vertex_enumerate(&cons, d1 + d2);
            if rat_affine_dim(&verts) != fp_dim {
                continue;
            }
            let mut cell: Vec<usize> = verts
                .iter()
                .map(|v| {
                    assert!(
                        v.iter().all(|x| x.is_integer()),
                        "fiber product cell has a non-lattice vertex"
                    );
                    let iv: Vec<Int> = v.iter().map(|x| x.to_integer()).collect();
                    index[&iv]
                })
                .collect();
            cell.sort_unstable();
            cells.push(cell);
        }
    }
    cells.sort();
    cells.dedup();
    let mut s = Subdivision::new(config, cells);
    for m in 0..s.config.len() {
        s = pull(&s, m, PullMode::Strong);
    }
    let t = Triangulation::new(s);
    assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    t
}

/// A chimney over a base polytope: the region between two integral affine
/// functionals, in one extra coordinate.
#[derive(Clone, Debug)]
pub struct ChimneySpec {
    pub base: Polytope,
    pub lower: (Vec<Int>, Int),
    pub upper: (Vec<Int>, Int),
}

fn aff_eval(f: &(Vec<Int>, Int), p: &[Int]) -> Int {
    idot(&f.0, p) + &f.1
}

impl ChimneySpec {
    pub fn new(base: Polytope, lower: (Vec<Int>, Int), upper: (Vec<Int>, Int)) -> Self {
        for v in &base.vertices {
            assert!(
                aff_eval(&lower, v) <= aff_eval(&upper, v),
                "lower functional exceeds upper on the base"
            );
        }
        ChimneySpec { base, lower, upper }
    }

    /// The chimney polytope, with the new coordinate appended last.
    pub fn polytope(&self) -> Polytope {
        let mut pts = Vec::new();
        for v in &self.base.vertices {
            for f in [&self.lower, &self.upper] {
                let mut p = v.clone();
                p.push(aff_eval(f, v));
                pts.push(p);
            }
        }
        Polytope::from_vertices(Lattice::standard(self.base.ambient_dim() + 1), pts)
    }
}

/// Outcome of refining a pull-back subdivision.
#[derive(Clone, Debug)]
pub enum Pullback {
    Refined(Triangulation),
    /// A pull-back cell vertex off the lattice.
    NotApplicable(Vec<Rat>),
}

/// Pull back a triangulation of the shadow (forgetting coordinate `axis`)
/// and refine fully by pulling all lattice points.
pub fn pullback_refine(p: &Polytope, axis: usize, t_base: &Triangulation) -> Pullback {
    assert!(p.equations.is_empty(), "pull-back expects a full-dimensional polytope");
    let d = p.ambient_dim();
    assert!(axis < d);
    assert_eq!(t_base.config.points[0].len(), d - 1);
    let config = PointConfiguration::from_polytope(p);
    let index: BTreeMap<Vec<Int>, usize> = config
        .points
        .iter()
        .enumerate()
        .map(|(i, q)| (q.clone(), i))
        .collect();
    let mut cells = Vec::new();
    for g in &t_base.cells {
        let mut cons = p.constraints();
        for c in cell_constraints(&t_base.config.points, g) {
            let mut coeffs = c.coeffs.clone();
            coeffs.insert(axis, Rat::zero());
            cons.push(LinCon::new(coeffs, c.constant.clone(), c.rel));
        }
        let verts = vertex_enumerate(&cons, d);
        for v in &verts {
            if !v.iter().all(|x| x.is_integer()) {
                return Pullback::NotApplicable(v.clone());
            }
        }
        let mut cell: Vec<usize> = verts
            .iter()
            .map(|v| {
                let iv: Vec<Int> = v.iter().map(|x| x.to_integer()).collect();
                index[&iv]
            })
            .collect();
        cell.sort_unstable();
        cells.push(cell);
    }
    cells.sort();
    let mut s = Subdivision::new(config, cells);
    for m in 0..s.config.len() {
        s = pull(&s, m, PullMode::Strong);
    }
    Pullback::Refined(Triangulation::new(s))
}

/// All faces of one cell, as supports (the cell itself included).
fn all_faces(points: &[Vec<Int>], cell: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut queue = vec![cell.to_vec()];
    while let Some(f) = queue.pop() {
        if !seen.insert(f.clone()) {
            continue;
        }
        for facet in hull_facets(points, &f).facets {
            queue.push(facet.support);
        }
    }
    seen
}

/// Drop one coordinate.
fn project_point(p: &[Int], axis: usize) -> Vec<Int> {
    p.iter()
        .enumerate()
        .filter(|&(i, _)| i != axis)
        .map(|(_, x)| x.clone())
        .collect()
}

/// The push-forward of a subdivision along the projection forgetting
/// coordinate `axis`: the common refinement of the shadows of all faces.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub shadow: Polytope,
    /// Rational vertex lists of the refinement cells.
    pub cells: Vec<Vec<Vec<Rat>>>,
    /// The induced lattice subdivision, when every cell vertex is integral.
    pub sub: Option<Subdivision>,
}

pub fn pushforward(s: &Subdivision, axis: usize) -> Pushforward {
    let d = s.config.points[0].len();
    let shadow_pts: Vec<Vec<Int>> = s
        .config
        .points
        .iter()
        .map(|p| project_point(p, axis))
        .collect();
    let shadow = Polytope::from_vertices(Lattice::standard(d - 1), shadow_pts.clone());
    assert!(
        shadow.equations.is_empty(),
        "push-forward expects a full-dimensional shadow"
    );
    // Shadows of all faces of all cells, with their H-descriptions.
    let mut face_supports: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cell in &s.cells {
        face_supports.extend(all_faces(&s.config.points, cell));
    }
    let face_shadows: Vec<Vec<LinCon>> = face_supports
        .iter()
        .map(|f| {
            let pts: Vec<Vec<Int>> = f.iter().map(|&i| shadow_pts[i].clone()).collect();
            let all: Vec<usize> = (0..pts.len()).collect();
            cell_constraints(&pts, &all)
        })
        .collect();
    // Silhouette hyperplanes: affine hulls of face shadows of codimension 1.
    let mut hyperplanes: Vec<Vec<Rat>> = Vec::new();
    for f in &face_supports {
        let pts: Vec<Vec<Int>> = f.iter().map(|&i| shadow_pts[i].clone()).collect();
        let all: Vec<usize> = (0..pts.len()).collect();
        let hull = hull_facets(&pts, &all);
        if hull.dim != d - 2 {
            continue;
        }
        for e in hull.equations {
            let mut h = to_rat_vec(&e.a);
            h.push(Rat::from_integer(e.b.clone()));
            let flip = h.iter().find(|x| !x.is_zero()).unwrap().is_negative();
            if flip {
                for x in h.iter_mut() {
                    *x = -x.clone();
                }
            }
            hyperplanes.push(h);
        }
    }
    hyperplanes.sort();
    hyperplanes.dedup();
    // Over-cut: every arrangement region inside the shadow, with an interior
    // witness point from the feasibility run.
    let base = shadow.constraints();
    let mut regions: Vec<(Vec<LinCon>, Vec<Rat>)> = Vec::new();
    let mut stack: Vec<(usize, Vec<LinCon>)> = vec![(0, base)];
    while let Some((k, cons)) = stack.pop() {
        let open: Vec<LinCon> = cons
            .iter()
            .map(|c| match c.rel {
                Rel::Ge => LinCon::new(c.coeffs.clone(), c.constant.clone(), Rel::Gt),
                _ => c.clone(),
            })
            .collect();
        let witness = match lin_feasible(&open) {
            Feasibility::Feasible(w) => w.0,
            Feasibility::Infeasible(_) => continue,
        };
        if k == hyperplanes.len() {
            regions.push((cons, witness));
            continue;
        }
        let h = &hyperplanes[k];
        let (coeffs, cst) = (h[..d - 1].to_vec(), h[d - 1].clone());
        for side in [Rat::one(), -Rat::one()] {
            let mut next = cons.clone();
            next.push(LinCon::new(
                coeffs.iter().map(|c| c * &side).collect(),
                &cst * &side,
                Rel::Ge,
            ));
            stack.push((k + 1, next));
        }
    }
    // Merge regions across walls that no face shadow actually supports.
    let contains = |cons: &[LinCon], x: &[Rat]| cons.iter().all(|c| c.holds(x));
    let mut parent: Vec<usize> = (0..regions.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            // A shared full-dimensional wall exists iff both closed regions
            // intersect in dimension d-2.
            let mut cons = regions[i].0.clone();
            cons.extend(regions[j].0.iter().cloned());
            let wall = vertex_enumerate(&cons, d - 1);
            if rat_affine_dim(&wall) != d - 2 {
                continue;
            }
            // Regions never straddle a face shadow, so an interior witness
            // lies in a shadow exactly when the whole region does.
            let genuine = face_shadows
                .iter()
                .any(|f| contains(f, &regions[i].1) != contains(f, &regions[j].1));
            if !genuine {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..regions.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut cells: Vec<Vec<Vec<Rat>>> = Vec::new();
    for group in groups.values() {
        let mut verts: Vec<Vec<Rat>> = group
            .iter()
            .flat_map(|&i| vertex_enumerate(&regions[i].0, d - 1))
            .collect();
        verts.sort();
        verts.dedup();
        // Keep only the extreme points of the merged (convex) union.
        let scaled: Vec<Vec<Int>> = {
            let mut den = Int::one();
            for v in &verts {
                for x in v {
                    den = num_integer::lcm(den, x.denom().clone());
                }
            }
            verts
                .iter()
                .map(|v| v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect())
                .collect()
        };
        let all: Vec<usize> = (0..scaled.len()).collect();
        let hull = hull_facets(&scaled, &all);
        let extreme: Vec<Vec<Rat>> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let p = &scaled[*i];
                let mut rows: Vec<Vec<Rat>> =
                    hull.equations.iter().map(|e| to_rat_vec(&e.a)).collect();
                for f in &hull.facets {
                    if f.normal.eval(p).is_zero() {
                        rows.push(to_rat_vec(&f.normal.a));
                    }
                }
                rank(&rows) == d - 1
            })
            .map(|(_, v)| v.clone())
            .collect();
        cells.push(extreme);
    }
    cells.sort();
    let integral = cells
        .iter()
        .all(|c| c.iter().all(|v| v.iter().all(|x| x.is_integer())));
    let sub = if integral {
        let config = PointConfiguration::from_polytope(&shadow);
        let index: BTreeMap<Vec<Int>, usize> = config
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let cell_sets: Vec<Vec<usize>> = cells
            .iter()
            .map(|c| {
                let mut s: Vec<usize> = c
                    .iter()
                    .map(|v| {
                        let iv: Vec<Int> = v.iter().map(|x| x.to_integer()).collect();
                        index[&iv]
                    })
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        Some(Subdivision::new(config, cell_sets))
    } else {
        None
    };
    Pushforward { shadow, cells, sub }
}

/// A semidirect product: base, ordered factors, and a nonnegative integral
/// affine coordinate for each factor.
#[derive(Clone, Debug)]
pub struct SemidirectSpec {
    pub base: Polytope,
    pub factors: Vec<Polytope>,
    pub phi: Vec<(Vec<Int>, Int)>,
}

impl SemidirectSpec {
    pub fn new(base: Polytope, factors: Vec<Polytope>, phi: Vec<(Vec<Int>, Int)>) -> Self {
        assert_eq!(factors.len(), phi.len());
        for f in &phi {
            assert_eq!(f.0.len(), base.ambient_dim());
            for v in &base.vertices {
                assert!(!aff_eval(f, v).is_negative(), "phi must be nonnegative on the base");
            }
        }
        SemidirectSpec { base, factors, phi }
    }
}

/// One semidirect factor over a triangulated base: slice each product cell
/// canonically, verify the pieces are lattice and compressed, then pull.
fn semidirect_step(
    q: &Polytope,
    t_q: &Triangulation,
    phi: &(Vec<Int>, Int),
    p: &Polytope,
    t_p: &Triangulation,
) -> (Polytope, Triangulation) {
    assert!(matches!(t_q.is_unimodular(), Unimodularity::Yes));
    assert!(matches!(t_p.is_unimodular(), Unimodularity::Yes));
    assert!(p.equations.is_empty(), "factors must be full-dimensional");
    let d = q.ambient_dim();
    let e = p.ambient_dim();
    // Vertices (y, phi(y) x) over vertex pairs.
    let mut verts = Vec::new();
    for vq in &q.vertices {
        let s = aff_eval(phi, vq);
        for vp in &p.vertices {
            let mut v = vq.clone();
            v.extend(vp.iter().map(|x| x * &s));
            verts.push(v);
        }
    }
    let sp = Polytope::from_vertices(Lattice::standard(d + e), verts);
    let config = PointConfiguration::from_polytope(&sp);
    let index: BTreeMap<Vec<Int>, usize> = config
        .points
        .iter()
        .enumerate()
        .map(|(i, pt)| (pt.clone(), i))
        .collect();
    let qpts = &t_q.config.points;
    let ppts = &t_p.config.points;
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for b in &t_q.cells {
        let phimax = b.iter().map(|&i| aff_eval(phi, &qpts[i])).max().unwrap();
        for c in &t_p.cells {
            // The chain functionals of the ordered simplex C: f_j is 0 on
            // the first e+1-j vertices and 1 on the last j.
            let mut chain: Vec<(Vec<Rat>, Rat)> = Vec::new();
            for j in 1..=e {
                let rows: Vec<Vec<Rat>> = c
                    .iter()
                    .map(|&i| {
                        let mut r = to_rat_vec(&ppts[i]);
                        r.push(Rat::one());
                        r
                    })
                    .collect();
                let rhs: Vec<Rat> = (0..=e)
                    .map(|i| if i > e - j { Rat::one() } else { Rat::zero() })
                    .collect();
                let sol = solve(&rows, &rhs).expect("ordered simplex functional");
                chain.push((sol[..e].to_vec(), sol[e].clone()));
            }
            // g_j(y, x) = c_j . x + gamma_j phi(y), homogenized over the base.
            let g: Vec<(Vec<Rat>, Rat)> = chain
                .iter()
                .map(|(cj, gj)| {
                    let mut coeffs: Vec<Rat> =
                        phi.0.iter().map(|a| Rat::from_integer(a.clone()) * gj).collect();
                    coeffs.extend(cj.iter().cloned());
                    (coeffs, gj * Rat::from_integer(phi.1.clone()))
                })
                .collect();
            let mut cons: Vec<LinCon> = cell_constraints(qpts, b)
                .iter()
                .map(|cc| pad_right(cc, e))
                .collect();
            // 0 <= g_1 <= ... <= g_e <= phi(y).
            cons.push(LinCon::new(g[0].0.clone(), g[0].1.clone(), Rel::Ge));
            for j in 0..e - 1 {
                let coeffs: Vec<Rat> =
                    g[j + 1].0.iter().zip(&g[j].0).map(|(a, b)| a - b).collect();
                cons.push(LinCon::new(coeffs, &g[j + 1].1 - &g[j].1, Rel::Ge));
            }
            let mut top: Vec<Rat> =
                phi.0.iter().map(|a| Rat::from_integer(a.clone())).collect();
            top.extend(vec![Rat::zero(); e]);
            let top_coeffs: Vec<Rat> =
                top.iter().zip(&g[e - 1].0).map(|(a, b)| a - b).collect();
            cons.push(LinCon::new(
                top_coeffs,
                Rat::from_integer(phi.1.clone()) - &g[e - 1].1,
                Rel::Ge,
            ));
            // Slicing hyperplanes H(j, b): g_j(y,x) = psi_b(y), with psi_b
            // interpolating min(phi, b) on the base cell vertices.
            let mut hyps: Vec<(Vec<Rat>, Rat)> = Vec::new();
            let mut bv = Int::zero();
            while bv <= phimax {
                let rows: Vec<Vec<Rat>> = b
                    .iter()
                    .map(|&i| {
                        let mut r = to_rat_vec(&qpts[i]);
                        r.push(Rat::one());
                        r
                    })
                    .collect();
                let rhs: Vec<Rat> = b
                    .iter()
                    .map(|&i| {
                        Rat::from_integer(aff_eval(phi, &qpts[i]).min(bv.clone()))
                    })
                    .collect();
                let psi = solve(&rows, &rhs).expect("interpolation on a simplex");
                for gj in &g {
                    let mut coeffs: Vec<Rat> = gj
                        .0
                        .iter()
                        .enumerate()
                        .map(|(k, x)| {
                            if k < d {
                                x - &psi[k]
                            } else {
                                x.clone()
                            }
                        })
                        .collect();
                    let cst = &gj.1 - &psi[d];
                    if coeffs.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let flip = coeffs
                        .iter()
                        .find(|x| !x.is_zero())
                        .unwrap()
                        .is_negative();
                    if flip {
                        for x in coeffs.iter_mut() {
                            *x = -x.clone();
                        }
                        hyps.push((coeffs, -cst));
                    } else {
                        hyps.push((coeffs, cst));
                    }
                }
                bv += Int::one();
            }
            hyps.sort();
            hyps.dedup();
            // Depth-first over the side of each hyperplane.
            let mut stack: Vec<(usize, Vec<LinCon>)> = vec![(0, cons)];
            while let Some((k, cur)) = stack.pop() {
                let open: Vec<LinCon> = cur
                    .iter()
                    .map(|cc| match cc.rel {
                        Rel::Ge => {
                            LinCon::new(cc.coeffs.clone(), cc.constant.clone(), Rel::Gt)
                        }
                        _ => cc.clone(),
                    })
                    .collect();
                if !matches!(lin_feasible(&open), Feasibility::Feasible(_)) {
                    continue;
                }
                if k == hyps.len() {
                    let vl = vertex_enumerate(&cur, d + e);
                    let mut cell: Vec<usize> = vl
                        .iter()
                        .map(|v| {
                            assert!(
                                v.iter().all(|x| x.is_integer()),
                                "canonical slicing vertex off the lattice"
                            );
                            let iv: Vec<Int> =
                                v.iter().map(|x| x.to_integer()).collect();
                            index[&iv]
                        })
                        .collect();
                    cell.sort_unstable();
                    let piece_verts: Vec<Vec<Int>> =
                        cell.iter().map(|&i| config.points[i].clone()).collect();
                    let piece =
                        Polytope::from_vertices(Lattice::standard(d + e), piece_verts);
                    assert_eq!(
                        crate::builders::is_compressed(&piece),
                        Compressedness::Yes,
                        "canonical slicing cell must be compressed"
                    );
                    cells.push(cell);
                    continue;
                }
                let (hc, hb) = &hyps[k];
                for side in [Rat::one(), -Rat::one()] {
                    let mut next = cur.clone();
                    next.push(LinCon::new(
                        hc.iter().map(|x| x * &side).collect(),
                        hb * &side,
                        Rel::Ge,
                    ));
                    stack.push((k + 1, next));
                }
            }
        }
    }
    cells.sort();
    cells.dedup();
    let mut s = Subdivision::new(config, cells);
    for m in 0..s.config.len() {
        s = pull(&s, m, PullMode::Strong);
    }
    let t = Triangulation::new(s);
    assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    (sp, t)
}

/// Triangulate a semidirect product with any number of factors, one factor
/// at a time.
pub fn semidirect_triangulate(
    spec: &SemidirectSpec,
    t_q: &Triangulation,
    t_ps: &[Triangulation],
) -> Triangulation {
    assert_eq!(t_ps.len(), spec.factors.len());
    let mut cur_poly = spec.base.clone();
    let mut cur_t = t_q.clone();
    for ((p, phi), t_p) in spec.factors.iter().zip(&spec.phi).zip(t_ps) {
        let extra = cur_poly.ambient_dim() - spec.base.ambient_dim();
        let mut coeffs = phi.0.clone();
        coeffs.extend(vec![Int::zero(); extra]);
        let lifted = (coeffs, phi.1.clone());
        let (poly, t) = semidirect_step(&cur_poly, &cur_t, &lifted, p, t_p);
        cur_poly = poly;
        cur_t = t;
    }
    cur_t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::pull_all;
    use crate::exact::{ivec, rat};
    use crate::regular::{decide_regular, Regularity};
    use crate::subdivision::Fullness;

    fn poly(rows: &[&[i64]]) -> Polytope {
        let pts: Vec<Vec<Int>> = rows.iter().map(|r| ivec(r)).collect();
        Polytope::from_vertices(Lattice::standard(pts[0].len()), pts)
    }

    fn segment(a: i64, b: i64) -> Triangulation {
        pull_all(&poly(&[&[a], &[b]]), None, PullMode::Strong)
    }

    fn square_two_triangles() -> Triangulation {
        pull_all(
            &poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            None,
            PullMode::Strong,
        )
    }

    fn identity_orientation(t: &Triangulation) -> EdgeOrientation {
        let order: Vec<usize> = (0..t.config.len()).collect();
        EdgeOrientation::from_order(t, &order)
    }

    #[test]
    fn staircase_square() {
        let t = segment(0, 1);
        let o = identity_orientation(&t);
        let prod = staircase_product(&t, &t, &o, &o);
        assert_eq!(prod.cells.len(), 2);
        assert_eq!(prod.sub.validate(), Ok(()));
        assert!(matches!(prod.is_unimodular(), Unimodularity::Yes));
    }

    #[test]
    fn staircase_matches_lex_pulling() {
        let t1 = segment(0, 2);
        let t2 = segment(0, 1);
        let prod = staircase_product(
            &t1,
            &t2,
            &identity_orientation(&t1),
            &identity_orientation(&t2),
        );
        assert_eq!(prod.cells.len(), 4);
        assert_eq!(prod.sub.validate(), Ok(()));
        assert!(matches!(prod.is_unimodular(), Unimodularity::Yes));
        assert!(matches!(decide_regular(&prod), Regularity::Regular(_)));
    }

    #[test]
    fn staircase_cycle_not_regular() {
        // Four triangles around the center of a 2x2 square; orient the
        // boundary as a 4-cycle (locally acyclic, globally cyclic).
        let big = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let config = PointConfiguration::from_polytope(&big);
        let at = |x: i64, y: i64| {
            config.points.iter().position(|p| p == &ivec(&[x, y])).unwrap()
        };
        let (v0, v1, v2, v3, c) = (at(0, 0), at(2, 0), at(2, 2), at(0, 2), at(1, 1));
        let cells = vec![
            vec![v0, v1, c],
            vec![v1, v2, c],
            vec![v2, v3, c],
            vec![v0, v3, c],
        ];
        let mut cells = cells;
        for cl in cells.iter_mut() {
            cl.sort_unstable();
        }
        cells.sort();
        let t1 = Triangulation::new(Subdivision::new(config, cells));
        let directed = vec![
            (v0, v1),
            (v1, v2),
            (v2, v3),
            (v3, v0),
            (c, v0),
            (c, v1),
            (c, v2),
            (c, v3),
        ];
        let o1 = EdgeOrientation::new(&t1, directed).unwrap();
        assert!(!o1.is_globally_acyclic());
        let t2 = segment(0, 1);
        let prod = staircase_product(&t1, &t2, &o1, &identity_orientation(&t2));
        assert_eq!(prod.sub.validate(), Ok(()));
        assert!(matches!(decide_regular(&prod), Regularity::NotRegular(_)));
    }

    #[test]
    fn orientation_cycle_detected() {
        let t = Triangulation::new(Subdivision::trivial(PointConfiguration::new(
            Lattice::standard(2),
            vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])],
        )));
        let bad = EdgeOrientation::new(&t, vec![(0, 1), (1, 2), (2, 0)]);
        assert!(bad.is_err());
    }

    #[test]
    fn join_examples() {
        let point = Triangulation::new(Subdivision::trivial(PointConfiguration::new(
            Lattice::standard(1),
            vec![ivec(&[0])],
        )));
        let sq = square_two_triangles();
        let cone = join(&point, &sq);
        assert_eq!(cone.cells.len(), 2);
        assert_eq!(cone.sub.validate(), Ok(()));
        let seg = segment(0, 1);
        let d3 = join(&seg, &seg);
        assert_eq!(d3.cells.len(), 1);
        assert!(matches!(d3.is_unimodular(), Unimodularity::Yes));
        // Volume multiplies; flagness is inherited.
        let j = join(&sq, &sq);
        let vol: Int = j.cells.iter().map(|c| simplex_volume(&j.config.points, c)).sum();
        assert_eq!(vol, Int::from(4));
        assert_eq!(j.cells.len(), 4);
        assert!(j.minimal_nonfaces(j.dim() + 2).is_flag());
        assert!(matches!(j.is_unimodular(), Unimodularity::Yes));
    }

    #[test]
    fn fiber_product_square() {
        let seg = segment(0, 1);
        let to_point = AffineMap { mat: vec![], off: vec![] };
        let t = fiber_product(&seg, &seg, &to_point, &to_point);
        assert_eq!(t.cells.len(), 2);
        assert!(matches!(t.is_full(), Fullness::Yes));
    }

    #[test]
    fn fiber_product_triangles_over_segment() {
        // Both triangles project to [0,1] by the second coordinate.
        let tri = pull_all(
            &poly(&[&[0, 0], &[1, 0], &[0, 1]]),
            None,
            PullMode::Strong,
        );
        let pi = AffineMap { mat: vec![ivec(&[0, 1])], off: ivec(&[0]) };
        let t = fiber_product(&tri, &tri, &pi, &pi);
        assert_eq!(t.sub.validate(), Ok(()));
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
        assert_eq!(t.dim(), 3);
        assert!(matches!(decide_regular(&t), Regularity::Regular(_)));
    }

    #[test]
    fn pullback_chimney() {
        let spec = ChimneySpec::new(poly(&[&[0], &[2]]), (ivec(&[0]), Int::zero()), (ivec(&[-1]), Int::from(3)));
        let chim = spec.polytope();
        assert_eq!(chim.vertices.len(), 4);
        let base = segment(0, 2);
        match pullback_refine(&chim, 1, &base) {
            Pullback::Refined(t) => {
                assert_eq!(t.cells.len(), 8);
                assert_eq!(t.config.len(), 9);
                assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
                assert!(t.minimal_nonfaces(t.dim() + 2).is_flag());
                assert!(matches!(decide_regular(&t), Regularity::Regular(_)));
            }
            Pullback::NotApplicable(v) => panic!("unexpected non-lattice vertex {v:?}"),
        }
    }

    #[test]
    fn pullback_non_integral_rejected() {
        let tri = poly(&[&[0, 0], &[2, 0], &[2, 1]]);
        let base = segment(0, 2);
        match pullback_refine(&tri, 1, &base) {
            Pullback::NotApplicable(v) => {
                assert_eq!(v, vec![rat(1, 1), rat(1, 2)]);
            }
            Pullback::Refined(_) => panic!("expected a non-lattice pull-back vertex"),
        }
    }

    #[test]
    fn nakajima_tower_quadratic() {
        let spec2 = ChimneySpec::new(poly(&[&[0], &[2]]), (ivec(&[0]), Int::zero()), (ivec(&[-1]), Int::from(3)));
        let q2 = spec2.polytope();
        let t2 = match pullback_refine(&q2, 1, &segment(0, 2)) {
            Pullback::Refined(t) => t,
            Pullback::NotApplicable(_) => unreachable!(),
        };
        let spec3 = ChimneySpec::new(
            q2.clone(),
            (ivec(&[0, 0]), Int::zero()),
            (ivec(&[-1, -1]), Int::from(4)),
        );
        let q3 = spec3.polytope();
        let t3 = match pullback_refine(&q3, 2, &t2) {
            Pullback::Refined(t) => t,
            Pullback::NotApplicable(v) => panic!("chimney pull-back must be lattice: {v:?}"),
        };
        assert_eq!(t3.sub.validate(), Ok(()));
        assert!(matches!(t3.is_unimodular(), Unimodularity::Yes));
        assert!(t3.minimal_nonfaces(t3.dim() + 2).is_flag());
        assert!(matches!(decide_regular(&t3), Regularity::Regular(_)));
    }

    #[test]
    fn pushforward_prism_trivial() {
        let prism = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 0, 1],
            &[0, 1, 1],
        ]);
        let s = Subdivision::trivial(PointConfiguration::from_polytope(&prism));
        let pf = pushforward(&s, 2);
        assert_eq!(pf.cells.len(), 1);
        assert_eq!(pf.sub.unwrap().cells.len(), 1);
    }

    fn four_var_polytope() -> Polytope {
        // 0<=x; 0<=y<=3-x; 0<=z; x-1<=z; 0<=w<=2+x-z; w<=4-y-z.
        let c = |coeffs: &[i64], cst: i64| {
            LinCon::new(
                coeffs.iter().map(|&v| Rat::from_integer(Int::from(v))).collect(),
                Rat::from_integer(Int::from(cst)),
                Rel::Ge,
            )
        };
        let cons = vec![
            c(&[1, 0, 0, 0], 0),
            c(&[0, 1, 0, 0], 0),
            c(&[-1, -1, 0, 0], 3),
            c(&[0, 0, 1, 0], 0),
            c(&[-1, 0, 1, 0], 1),
            c(&[0, 0, 0, 1], 0),
            c(&[1, 0, -1, -1], 2),
            c(&[0, -1, -1, -1], 4),
        ];
        let verts = vertex_enumerate(&cons, 4);
        let ivs: Vec<Vec<Int>> = verts
            .iter()
            .map(|v| {
                assert!(v.iter().all(|x| x.is_integer()));
                v.iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        Polytope::from_vertices(Lattice::standard(4), ivs)
    }

    #[test]
    fn pushforward_four_var_example() {
        let p = four_var_polytope();
        let s = Subdivision::trivial(PointConfiguration::from_polytope(&p));
        let pf = pushforward(&s, 3);
        let sub = pf.sub.expect("shadow subdivision must be lattice");
        assert_eq!(sub.cells.len(), 2);
        assert_eq!(sub.validate(), Ok(()));
        // The wall between the two cells: x + y = 2 sliced through the
        // shadow.
        let common: Vec<usize> = sub.cells[0]
            .iter()
            .copied()
            .filter(|i| sub.cells[1].contains(i))
            .collect();
        let mut wall: Vec<Vec<Int>> = common
            .iter()
            .map(|&i| sub.config.points[i].clone())
            .collect();
        wall.sort();
        let mut expected: Vec<Vec<Int>> = [
            [1, 1, 0],
            [0, 2, 0],
            [0, 2, 2],
            [2, 0, 4],
            [2, 0, 1],
        ]
        .iter()
        .map(|r| ivec(&r.map(|x| x as i64)))
        .collect();
        expected.sort();
        assert_eq!(wall, expected);
        // Project once more: the triangle 0 <= y <= 3-x cut along x = 1 and
        // x + y = 2 into four lattice cells meeting at (1,1).
        let pf2 = pushforward(&sub, 2);
        let sub2 = pf2.sub.expect("second shadow must be lattice");
        assert_eq!(sub2.cells.len(), 4);
        assert_eq!(sub2.validate(), Ok(()));
        assert_eq!(pf2.shadow.vertices.len(), 3);
        let corner = sub2
            .config
            .points
            .iter()
            .position(|p| p == &ivec(&[1, 1]))
            .unwrap();
        assert!(sub2.cells.iter().all(|c| c.contains(&corner)));
    }

    #[test]
    fn semidirect_dilation() {
        // A point base with phi = 3 produces the third dilation of the
        // factor.
        let q = poly(&[&[0]]);
        let t_q = Triangulation::new(Subdivision::trivial(
            PointConfiguration::from_polytope(&q),
        ));
        let p = poly(&[&[0], &[1]]);
        let t_p = segment(0, 1);
        let spec = SemidirectSpec::new(q, vec![p], vec![(ivec(&[0]), Int::from(3))]);
        let t = semidirect_triangulate(&spec, &t_q, &[t_p]);
        assert_eq!(t.cells.len(), 3);
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    }

    #[test]
    fn semidirect_constant_one_is_product() {
        let q = poly(&[&[0], &[1]]);
        let t_q = segment(0, 1);
        let p = poly(&[&[0], &[1]]);
        let t_p = segment(0, 1);
        let spec = SemidirectSpec::new(q, vec![p], vec![(ivec(&[0]), Int::one())]);
        let t = semidirect_triangulate(&spec, &t_q, &[t_p]);
        assert_eq!(t.cells.len(), 2);
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    }

    #[test]
    fn semidirect_ordered_triangle() {
        // Base segment with phi-values 2 and 5, factor the ordered unit
        // triangle 0 <= x1 <= x2 <= 1.
        let q = poly(&[&[0], &[1]]);
        let t_q = segment(0, 1);
        let p = poly(&[&[0, 0], &[0, 1], &[1, 1]]);
        let t_p = pull_all(&p, None, PullMode::Strong);
        let spec = SemidirectSpec::new(q, vec![p], vec![(ivec(&[3]), Int::from(2))]);
        let t = semidirect_triangulate(&spec, &t_q, &[t_p]);
        assert_eq!(t.sub.validate(), Ok(()));
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
        assert_eq!(t.cells.len(), 39);
        // The induced triangulation of the facet over y = 1 is the fifth
        // dilation of the triangle: 25 triangles.
        let mut top: Vec<Vec<usize>> = t
            .cells
            .iter()
            .map(|c| {
                c.iter()
                    .copied()
                    .filter(|&i| t.config.points[i][0].is_one())
                    .collect::<Vec<usize>>()
            })
            .filter(|f| f.len() == 3)
            .collect();
        top.sort();
        top.dedup();
        assert_eq!(top.len(), 25);
    }
}
