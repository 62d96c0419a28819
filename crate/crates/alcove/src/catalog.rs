//! Named polytope families and graph-derived constructions: Reeve and White
//! simplices, hypersimplices, order polytopes, flow/transportation polytopes,
//! the F4/E8 counterexample simplices, a dilation normality gap family, arc
//! and edge polytopes of graphs, cut polytopes, and Stanley-Reisner
//! generators of triangulations.

use crate::builders::{is_compressed, Compressedness};
use crate::exact::feasible::{lin_feasible, Feasibility};
use crate::exact::matrix::hermite_smith;
use crate::exact::solve::kernel_int;
use crate::exact::{int, to_rat_vec, Int, IntMatrix, LinCon, Rat, Rel};
use crate::kmw::canonical_dilation;
use crate::polytope::{Lattice, PointConfiguration, Polytope};
use crate::subdivision::{Subdivision, Triangulation};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

// ---------------------------------------------------------------------------
// Graphs

/// A finite simple graph, directed or undirected. Undirected graphs may carry
/// loops; on construction every pair of loop vertices gets the connecting
/// edge, so the edge set is closed under the loop-completion that leaves the
/// edge polytope unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub n: usize,
    /// Directed: `(tail, head)`. Undirected: `(min, max)`, loops as `(v, v)`.
    pub edges: Vec<(usize, usize)>,
    pub directed: bool,
}

impl GraphSpec {
    /// A directed graph without loops or antiparallel arc pairs.
    pub fn directed(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut seen = BTreeSet::new();
        for &(t, h) in arcs {
            assert!(t < n && h < n, "arc endpoint out of range");
            assert_ne!(t, h, "loops are not allowed in directed graphs");
            assert!(seen.insert((t, h)), "duplicate arc");
            assert!(
                !seen.contains(&(h, t)),
                "antiparallel arc pairs are not supported"
            );
        }
        GraphSpec { n, edges: arcs.to_vec(), directed: true }
    }

    /// An undirected graph, possibly with loops, with the loop-completion
    /// applied: any two loop vertices become adjacent.
    pub fn undirected(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge endpoint out of range");
            let e = (u.min(v), u.max(v));
            assert!(set.insert(e), "duplicate edge");
        }
        let loops: Vec<usize> =
            set.iter().filter(|&&(u, v)| u == v).map(|&(u, _)| u).collect();
        for (i, &u) in loops.iter().enumerate() {
            for &v in &loops[i + 1..] {
                set.insert((u.min(v), u.max(v)));
            }
        }
        GraphSpec { n, edges: set.into_iter().collect(), directed: false }
    }

    fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Two-coloring of the underlying undirected graph, if one exists. A
    /// graph with a loop is never bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        if self.edges.iter().any(|&(u, v)| u == v) {
            return None;
        }
        let adj = self.neighbors();
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    /// Whether a directed cycle exists.
    pub fn has_directed_cycle(&self) -> bool {
        assert!(self.directed);
        let mut out = vec![Vec::new(); self.n];
        for &(t, h) in &self.edges {
            out[t].push(h);
        }
        // 0 = unseen, 1 = on stack, 2 = done.
        let mut state = vec![0u8; self.n];
        fn dfs(u: usize, out: &[Vec<usize>], state: &mut [u8]) -> bool {
            state[u] = 1;
            for &v in &out[u] {
                if state[v] == 1 || (state[v] == 0 && dfs(v, out, state)) {
                    return true;
                }
            }
            state[u] = 2;
            false
        }
        (0..self.n).any(|u| state[u] == 0 && dfs(u, &out, &mut state))
    }

    /// All simple cycles of the underlying undirected graph, as vertex lists.
    /// Each cycle is listed once: it starts at its smallest vertex and its
    /// second entry is smaller than its last.
    pub fn simple_cycles(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbors();
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut used = vec![false; self.n];
        fn dfs(
            u: usize,
            start: usize,
            adj: &[Vec<usize>],
            path: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Vec<usize>>,
        ) {
            for &v in &adj[u] {
                if v == start && path.len() >= 3 && path[1] < *path.last().unwrap() {
                    out.push(path.clone());
                } else if v > start && !used[v] {
                    used[v] = true;
                    path.push(v);
                    dfs(v, start, adj, path, used, out);
                    path.pop();
                    used[v] = false;
                }
            }
        }
        for s in 0..self.n {
            used[s] = true;
            path.push(s);
            dfs(s, s, &adj, &mut path, &mut used, &mut out);
            path.pop();
            used[s] = false;
        }
        out
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = if self.directed { (u, v) } else { (u.min(v), u.max(v)) };
        self.edges.contains(&e)
    }

    /// Signed direction count of an undirected cycle (vertex list) in a
    /// directed graph: forward arcs minus backward arcs along the traversal.
    fn cycle_imbalance(&self, cycle: &[usize]) -> i64 {
        assert!(self.directed);
        let mut bal = 0i64;
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            if self.has_edge(u, v) {
                bal += 1;
            } else {
                assert!(self.has_edge(v, u), "cycle uses a missing edge");
                bal -= 1;
            }
        }
        bal
    }
}

// ---------------------------------------------------------------------------
// Arc polytopes of directed graphs

/// Arc polytope of a connected directed graph, with the classification flags
/// that can be read off the cycle structure.
#[derive(Clone, Debug)]
pub struct ArcPolytope {
    pub polytope: Polytope,
    /// Column of the incidence matrix for each arc, in arc order.
    pub points: Vec<Vec<Int>>,
    /// True iff the graph has a directed cycle.
    pub contains_origin: bool,
    /// True iff some cycle is unbalanced, i.e. the polytope affinely spans
    /// the sum-zero hyperplane.
    pub spans_hyperplane: bool,
    /// True iff every cycle has direction counts differing by at most one;
    /// then every full simplex on the arcs is unimodular.
    pub totally_unimodular: bool,
}

/// `e_head - e_tail` for each arc of a connected digraph, plus cycle-based
/// classification.
pub fn arc_polytope(g: &GraphSpec) -> ArcPolytope {
    assert!(g.directed, "arc polytope needs a directed graph");
    assert!(g.is_connected(), "arc polytope needs a connected graph");
    let points: Vec<Vec<Int>> = g
        .edges
        .iter()
        .map(|&(t, h)| {
            let mut p = vec![Int::zero(); g.n];
            p[h] = Int::one();
            p[t] = -Int::one();
            p
        })
        .collect();
    let polytope = Polytope::from_vertices(Lattice::standard(g.n), points.clone());
    let cycles = g.simple_cycles();
    let imbalances: Vec<i64> = cycles.iter().map(|c| g.cycle_imbalance(c)).collect();
    let contains_origin = g.has_directed_cycle();
    let spans_hyperplane = imbalances.iter().any(|&b| b != 0);
    let totally_unimodular = imbalances.iter().all(|&b| b.abs() <= 1);
    debug_assert_eq!(contains_origin, polytope.contains(&vec![Int::zero(); g.n]));
    debug_assert_eq!(spans_hyperplane, polytope.dim == g.n - 1);
    ArcPolytope { polytope, points, contains_origin, spans_hyperplane, totally_unimodular }
}

// ---------------------------------------------------------------------------
// Edge polytopes of undirected graphs

/// Two vertex-disjoint chordless odd cycles with no connecting edge.
#[derive(Clone, Debug)]
pub struct OddCyclePair {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

/// Edge polytope of a connected undirected graph, with the odd-cycle
/// diagnosis and the compressedness criterion on cycle decompositions.
#[derive(Clone, Debug)]
pub struct EdgePolytope {
    pub polytope: Polytope,
    /// Column of the incidence matrix for each edge (loops count twice).
    pub points: Vec<Vec<Int>>,
    pub bipartite: bool,
    /// True iff no induced subgraph is a pair of disjoint odd cycles; this is
    /// equivalent to the polytope having a unimodular cover.
    pub odd_cycle_condition: bool,
    pub violation: Option<OddCyclePair>,
    /// True iff every ordered pair of disjoint odd cycles decomposes the
    /// first cycle into more than one odd path between marked vertices;
    /// equivalent to the edge polytope being compressed.
    pub compressed_criterion: bool,
}

/// The cycle diagnostics of `edge_polytope`, available without computing the
/// facet description (which gets expensive in high dimension).
#[derive(Clone, Debug)]
pub struct EdgeDiagnostics {
    pub bipartite: bool,
    pub odd_cycle_condition: bool,
    pub violation: Option<OddCyclePair>,
    pub compressed_criterion: bool,
}

/// `e_u + e_v` for each edge (with `2 e_v` for loops): the vertex set of the
/// edge polytope.
pub fn edge_points(g: &GraphSpec) -> Vec<Vec<Int>> {
    assert!(!g.directed, "edge polytope needs an undirected graph");
    g.edges
        .iter()
        .map(|&(u, v)| {
            let mut p = vec![Int::zero(); g.n];
            p[u] += Int::one();
            p[v] += Int::one();
            p
        })
        .collect()
}

/// `e_u + e_v` for each edge of a connected graph (with `2 e_v` for loops),
/// plus the odd-cycle diagnostics.
pub fn edge_polytope(g: &GraphSpec) -> EdgePolytope {
    assert!(g.is_connected(), "edge polytope needs a connected graph");
    let points = edge_points(g);
    let polytope = Polytope::from_vertices(Lattice::standard(g.n), points.clone());
    let d = edge_diagnostics(g);
    EdgePolytope {
        polytope,
        points,
        bipartite: d.bipartite,
        odd_cycle_condition: d.odd_cycle_condition,
        violation: d.violation,
        compressed_criterion: d.compressed_criterion,
    }
}

/// The odd-cycle conditions of a connected undirected graph.
pub fn edge_diagnostics(g: &GraphSpec) -> EdgeDiagnostics {
    assert!(!g.directed, "edge polytope needs an undirected graph");
    assert!(g.is_connected(), "edge polytope needs a connected graph");
    let cycles = g.simple_cycles();
    let odd: Vec<&Vec<usize>> = cycles.iter().filter(|c| c.len() % 2 == 1).collect();
    let chordless = |c: &[usize]| {
        for i in 0..c.len() {
            for j in i + 2..c.len() {
                if i == 0 && j == c.len() - 1 {
                    continue;
                }
                if g.has_edge(c[i], c[j]) {
                    return false;
                }
            }
        }
        true
    };
    let disjoint = |a: &[usize], b: &[usize]| a.iter().all(|u| !b.contains(u));
    let bridged = |a: &[usize], b: &[usize]| {
        a.iter().any(|&u| b.iter().any(|&v| g.has_edge(u, v)))
    };
    let mut violation = None;
    'outer: for (i, a) in odd.iter().enumerate() {
        if !chordless(a) {
            continue;
        }
        for b in &odd[i + 1..] {
            if chordless(b) && disjoint(a, b) && !bridged(a, b) {
                violation = Some(OddCyclePair { first: (*a).clone(), second: (*b).clone() });
                break 'outer;
            }
        }
    }
    let mut compressed_criterion = true;
    'pairs: for a in &odd {
        for b in &odd {
            if std::ptr::eq(*a, *b) || !disjoint(a, b) {
                continue;
            }
            if odd_path_count(g, a, b) <= 1 {
                compressed_criterion = false;
                break 'pairs;
            }
        }
    }
    EdgeDiagnostics {
        bipartite: g.bipartition().is_some(),
        odd_cycle_condition: violation.is_none(),
        violation,
        compressed_criterion,
    }
}

/// Mark the vertices of cycle `c` incident to a chord of `c` or to a bridge
/// towards the disjoint cycle `other`; count the odd-length paths into which
/// the marks decompose the cycle.
fn odd_path_count(g: &GraphSpec, c: &[usize], other: &[usize]) -> usize {
    let k = c.len();
    let marked: Vec<usize> = (0..k)
        .filter(|&i| {
            let chord = (0..k).any(|j| {
                let gap = (j + k - i) % k;
                gap > 1 && gap < k - 1 && g.has_edge(c[i], c[j])
            });
            chord || other.iter().any(|&v| g.has_edge(c[i], v))
        })
        .collect();
    if marked.is_empty() {
        return 0;
    }
    let mut odd = 0;
    for (t, &i) in marked.iter().enumerate() {
        let j = marked[(t + 1) % marked.len()];
        let len = if marked.len() == 1 { k } else { (j + k - i) % k };
        if len % 2 == 1 {
            odd += 1;
        }
    }
    odd
}

// ---------------------------------------------------------------------------
// Cut polytopes

/// Cut polytope of a simple undirected graph: convex hull of the indicator
/// vectors, over the edge set, of all vertex-set cuts. The polytope is read
/// over the lattice generated by the cut vectors themselves, which is the
/// normalization under which the compressedness classification holds.
pub fn cut_polytope(g: &GraphSpec) -> Polytope {
    assert!(!g.directed);
    assert!(g.edges.iter().all(|&(u, v)| u != v), "cut polytope needs a loopless graph");
    assert!(g.n >= 1);
    let mut cuts = Vec::new();
    // U and its complement give the same cut, so fix vertex 0 outside U.
    for mask in 0..(1u64 << (g.n - 1)) {
        let in_u = |v: usize| v > 0 && (mask >> (v - 1)) & 1 == 1;
        let cut: Vec<Int> = g
            .edges
            .iter()
            .map(|&(u, v)| if in_u(u) != in_u(v) { Int::one() } else { Int::zero() })
            .collect();
        cuts.push(cut);
    }
    let gens: Vec<Vec<Rat>> = cuts.iter().map(|c| to_rat_vec(c)).collect();
    let lat = lattice_from_generators(g.edges.len(), &gens);
    let verts: Vec<Vec<Int>> = cuts
        .iter()
        .map(|c| lat.from_ambient(&to_rat_vec(c)).expect("cut vector generates the lattice"))
        .collect();
    Polytope::from_vertices(lat, verts)
}

// ---------------------------------------------------------------------------
// Flow and transportation polytopes

/// Flow polytope of a directed graph: flows `x` with `lower <= x <= upper`
/// edgewise and net inflow equal to `demand` at every vertex. The vertex set
/// is computed by exhaustive integer-flow enumeration (the constraint matrix
/// is totally unimodular, so all polytope vertices are integer flows).
pub fn flow_polytope(g: &GraphSpec, demand: &[Int], lower: &[Int], upper: &[Int]) -> Polytope {
    assert!(g.directed);
    assert_eq!(demand.len(), g.n);
    assert_eq!(lower.len(), g.edges.len());
    assert_eq!(upper.len(), g.edges.len());
    assert!(lower.iter().zip(upper).all(|(l, u)| l <= u));
    assert!(demand.iter().sum::<Int>().is_zero(), "demands must balance");
    // Remaining slack at each vertex if the unassigned edges move freely.
    let mut lo_room = demand.to_vec();
    let mut hi_room = demand.to_vec();
    for (e, &(t, h)) in g.edges.iter().enumerate() {
        lo_room[h] -= &upper[e];
        hi_room[h] -= &lower[e];
        lo_room[t] += &lower[e];
        hi_room[t] += &upper[e];
    }
    let mut flows: Vec<Vec<Int>> = Vec::new();
    let mut cur: Vec<Int> = Vec::new();
    fn rec(
        g: &GraphSpec,
        lower: &[Int],
        upper: &[Int],
        lo_room: &mut Vec<Int>,
        hi_room: &mut Vec<Int>,
        cur: &mut Vec<Int>,
        flows: &mut Vec<Vec<Int>>,
    ) {
        let e = cur.len();
        if e == g.edges.len() {
            flows.push(cur.clone());
            return;
        }
        let (t, h) = g.edges[e];
        let mut x = lower[e].clone();
        while x <= upper[e] {
            // Commit x on edge e: inflow x at h, outflow x at t.
            lo_room[h] += &upper[e] - &x;
            hi_room[h] += &lower[e] - &x;
            lo_room[t] -= &lower[e] - &x;
            hi_room[t] -= &upper[e] - &x;
            let ok = !lo_room[h].is_positive()
                && !hi_room[h].is_negative()
                && !lo_room[t].is_positive()
                && !hi_room[t].is_negative();
            if ok {
                cur.push(x.clone());
                rec(g, lower, upper, lo_room, hi_room, cur, flows);
                cur.pop();
            }
            lo_room[h] -= &upper[e] - &x;
            hi_room[h] -= &lower[e] - &x;
            lo_room[t] += &lower[e] - &x;
            hi_room[t] += &upper[e] - &x;
            x += Int::one();
        }
    }
    rec(g, lower, upper, &mut lo_room, &mut hi_room, &mut cur, &mut flows);
    assert!(!flows.is_empty(), "empty flow polytope");
    Polytope::from_vertices(Lattice::standard(g.edges.len()), flows)
}

/// Transportation polytope: nonnegative matrices with the given row and
/// column sums, in row-major edge coordinates of the complete bipartite
/// digraph.
pub fn transportation(rows: &[i64], cols: &[i64]) -> Polytope {
    let (m, n) = (rows.len(), cols.len());
    assert!(m >= 1 && n >= 1 && m <= 4 && n <= 4, "desk-scale sizes only");
    assert!(rows.iter().chain(cols).all(|&x| x > 0));
    assert_eq!(rows.iter().sum::<i64>(), cols.iter().sum::<i64>());
    let arcs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, m + j)))
        .collect();
    let g = GraphSpec::directed(m + n, &arcs);
    let mut demand: Vec<Int> = rows.iter().map(|&r| int(-r)).collect();
    demand.extend(cols.iter().map(|&c| int(c)));
    let lower = vec![Int::zero(); m * n];
    let upper: Vec<Int> = (0..m)
        .flat_map(|i| (0..n).map(move |j| int(rows[i].min(cols[j]))))
        .collect();
    flow_polytope(&g, &demand, &lower, &upper)
}

/// Birkhoff polytope: doubly stochastic matrices, i.e. the transportation
/// polytope with all row and column sums one.
pub fn birkhoff(n: usize) -> Polytope {
    let ones = vec![1i64; n];
    transportation(&ones, &ones)
}

// ---------------------------------------------------------------------------
// Order polytopes

/// Order polytope of a poset on `{0, .., n-1}` given by generating relations
/// `(i, j)` meaning `i` is below `j`: points of the unit cube whose
/// coordinates respect the order. Vertices are the indicator vectors of
/// up-sets.
pub fn order_polytope(n: usize, relations: &[(usize, usize)]) -> Polytope {
    assert!(n >= 1 && n < 63);
    let mut le = vec![vec![false; n]; n];
    for &(i, j) in relations {
        assert!(i < n && j < n && i != j);
        le[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        assert!(!le[i][i], "relations must be acyclic");
    }
    let mut verts = Vec::new();
    for mask in 0u64..(1 << n) {
        let inside = |v: usize| (mask >> v) & 1 == 1;
        let upset = (0..n).all(|i| {
            !inside(i) || (0..n).all(|j| !le[i][j] || inside(j))
        });
        if upset {
            verts.push((0..n).map(|v| if inside(v) { Int::one() } else { Int::zero() }).collect());
        }
    }
    Polytope::from_vertices(Lattice::standard(n), verts)
}

/// Number of linear extensions of the poset given by generating relations,
/// by direct extension counting over down-set states.
pub fn linear_extensions(n: usize, relations: &[(usize, usize)]) -> Int {
    assert!(n < 63);
    let mut below_mask = vec![0u64; n];
    let mut le = vec![vec![false; n]; n];
    for &(i, j) in relations {
        le[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    for j in 0..n {
        for (i, row) in le.iter().enumerate() {
            if row[j] {
                below_mask[j] |= 1 << i;
            }
        }
    }
    let mut counts: BTreeMap<u64, Int> = BTreeMap::new();
    counts.insert(0, Int::one());
    for _ in 0..n {
        let mut next: BTreeMap<u64, Int> = BTreeMap::new();
        for (mask, ways) in counts {
            for v in 0..n {
                if (mask >> v) & 1 == 0 && below_mask[v] & !mask == 0 {
                    *next.entry(mask | (1 << v)).or_insert_with(Int::zero) += &ways;
                }
            }
        }
        counts = next;
    }
    counts.into_values().next().unwrap_or_else(Int::zero)
}

// ---------------------------------------------------------------------------
// Named families

/// A named construction from the catalog.
#[derive(Clone, Debug)]
pub enum Family {
    /// Reeve tetrahedron of volume `q`.
    Reeve { q: u32 },
    /// White's width-one empty tetrahedron `S(p, q)`.
    White { p: i64, q: i64 },
    /// `{x in [0,1]^d : k-1 <= sum x <= k}`.
    Hypersimplex { d: usize, k: usize },
    /// Order polytope of the poset generated by the relations.
    Order { n: usize, relations: Vec<(usize, usize)> },
    /// Doubly stochastic matrices.
    Birkhoff { n: usize },
    /// Nonnegative matrices with prescribed margins.
    Transportation { rows: Vec<i64>, cols: Vec<i64> },
    /// The empty 4-simplex with F4 facet normals over the even-sum lattice;
    /// not integrally closed.
    F4Simplex,
    /// The product of two F4 simplices over the E8 lattice; not integrally
    /// closed.
    E8Product,
    /// Unit `d`-simplex, `d = hk - 1`, over `Z^{d+1} + Z (1/k, .., 1/k)`:
    /// its `h`-th dilate has a quadratic triangulation while the `(h+1)`-st
    /// is not integrally closed.
    NormalityGap { h: u32, k: u32 },
    /// Edge polytope of the 10-cycle with five alternating chords: integrally
    /// closed but with no regular unimodular triangulation.
    Nrut,
    /// Cut polytope of a simple graph.
    Cut { graph: GraphSpec },
}

/// A constructed example: the polytope and, where one is canonical, a
/// triangulation of it.
#[derive(Clone, Debug)]
pub struct NamedExample {
    pub polytope: Polytope,
    pub triangulation: Option<Triangulation>,
}

/// Build a named example; parameter violations are reported as errors so the
/// command line can distinguish bad input from failed property checks.
pub fn make(family: &Family) -> Result<NamedExample, String> {
    match family {
        Family::Reeve { q } => {
            if *q < 1 {
                return Err("reeve: q must be positive".into());
            }
            let verts = vec![
                vec![int(0), int(0), int(0)],
                vec![int(1), int(0), int(0)],
                vec![int(0), int(1), int(0)],
                vec![int(1), int(1), int(*q as i64)],
            ];
            let p = Polytope::from_vertices(Lattice::standard(3), verts.clone());
            let config = PointConfiguration::new(Lattice::standard(3), verts);
            let t = Triangulation::new(Subdivision::trivial(config));
            Ok(NamedExample { polytope: p, triangulation: Some(t) })
        }
        Family::White { p, q } => {
            if !(0 <= *p && *p <= *q && *q >= 1 && int(*p).gcd(&int(*q)).is_one()) {
                return Err("white: need 0 <= p <= q, q >= 1, gcd(p, q) = 1".into());
            }
            let verts = vec![
                vec![int(0), int(0), int(0)],
                vec![int(0), int(0), int(1)],
                vec![int(1), int(0), int(0)],
                vec![int(*p), int(*q), int(1)],
            ];
            let poly = Polytope::from_vertices(Lattice::standard(3), verts.clone());
            let config = PointConfiguration::new(Lattice::standard(3), verts);
            let t = Triangulation::new(Subdivision::trivial(config));
            Ok(NamedExample { polytope: poly, triangulation: Some(t) })
        }
        Family::Hypersimplex { d, k } => {
            if !(1 <= *k && *k <= *d) {
                return Err("hypersimplex: need 1 <= k <= d".into());
            }
            let mut verts = Vec::new();
            for mask in 0u64..(1 << *d) {
                let s = mask.count_ones() as usize;
                if s == *k || s == *k - 1 {
                    verts.push(
                        (0..*d)
                            .map(|i| if (mask >> i) & 1 == 1 { Int::one() } else { Int::zero() })
                            .collect(),
                    );
                }
            }
            Ok(NamedExample {
                polytope: Polytope::from_vertices(Lattice::standard(*d), verts),
                triangulation: None,
            })
        }
        Family::Order { n, relations } => {
            if *n == 0 || *n >= 63 {
                return Err("order: need 1 <= n < 63".into());
            }
            if relations.iter().any(|&(i, j)| i >= *n || j >= *n || i == j) {
                return Err("order: relation out of range".into());
            }
            Ok(NamedExample {
                polytope: order_polytope(*n, relations),
                triangulation: None,
            })
        }
        Family::Birkhoff { n } => {
            if !(2..=4).contains(n) {
                return Err("birkhoff: need 2 <= n <= 4".into());
            }
            Ok(NamedExample { polytope: birkhoff(*n), triangulation: None })
        }
        Family::Transportation { rows, cols } => {
            if rows.is_empty()
                || cols.is_empty()
                || rows.len() > 4
                || cols.len() > 4
                || rows.iter().chain(cols).any(|&x| x <= 0)
                || rows.iter().sum::<i64>() != cols.iter().sum::<i64>()
            {
                return Err("transportation: need balanced positive margins, sizes <= 4".into());
            }
            Ok(NamedExample { polytope: transportation(rows, cols), triangulation: None })
        }
        Family::F4Simplex => Ok(NamedExample { polytope: f4_simplex(), triangulation: None }),
        Family::E8Product => Ok(NamedExample { polytope: e8_product(), triangulation: None }),
        Family::NormalityGap { h, k } => {
            if *h < 1 || *k < 2 {
                return Err("normality-gap: need h >= 1, k >= 2".into());
            }
            Ok(NamedExample { polytope: gap_simplex(*h, *k), triangulation: None })
        }
        Family::Nrut => {
            let e = edge_polytope(&nrut_graph());
            Ok(NamedExample { polytope: e.polytope, triangulation: None })
        }
        Family::Cut { graph } => {
            if graph.directed || graph.edges.iter().any(|&(u, v)| u == v) {
                return Err("cut: need a simple undirected graph".into());
            }
            Ok(NamedExample { polytope: cut_polytope(graph), triangulation: None })
        }
    }
}

/// A lattice from a rational generating set: scale to integers, reduce the
/// rows to Hermite normal form, and keep the nonzero rows.
fn lattice_from_generators(dim: usize, gens: &[Vec<Rat>]) -> Lattice {
    let mut denom = Int::one();
    for g in gens {
        for x in g {
            denom = denom.lcm(x.denom());
        }
    }
    let rows: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| g.iter().map(|x| (x * Rat::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let hs = hermite_smith(&IntMatrix::from_rows(rows));
    let basis: Vec<Vec<Rat>> = (0..hs.hnf.rows)
        .map(|i| hs.hnf.row(i).to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| {
            r.iter()
                .map(|x| Rat::new(x.clone(), denom.clone()))
                .collect()
        })
        .collect();
    assert_eq!(basis.len(), dim, "generators must span");
    Lattice::new(basis)
}

/// The even-coordinate-sum sublattice of `Z^4`, dual to the F4 root system.
fn f4_dual_lattice() -> Lattice {
    lattice_from_generators(
        4,
        &[
            to_rat_vec(&[int(2), int(0), int(0), int(0)]),
            to_rat_vec(&[int(1), int(1), int(0), int(0)]),
            to_rat_vec(&[int(1), int(0), int(1), int(0)]),
            to_rat_vec(&[int(1), int(0), int(0), int(1)]),
        ],
    )
}

/// The E8 lattice: integer vectors with even coordinate sum together with
/// their shifts by the all-halves vector.
fn e8_lattice() -> Lattice {
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for i in 0..7 {
        let mut g = vec![Rat::zero(); 8];
        g[i] = Rat::one();
        g[i + 1] = -Rat::one();
        gens.push(g);
    }
    let mut plus = vec![Rat::zero(); 8];
    plus[6] = Rat::one();
    plus[7] = Rat::one();
    gens.push(plus);
    gens.push(vec![Rat::new(Int::one(), int(2)); 8]);
    lattice_from_generators(8, &gens)
}

/// Ambient coordinates of the five F4 simplex vertices.
fn f4_ambient_vertices() -> Vec<Vec<i64>> {
    vec![
        vec![-1, 0, 1, 0],
        vec![-1, -1, 1, -1],
        vec![0, 0, 0, 0],
        vec![-1, 1, 1, -1],
        vec![0, 0, 2, 0],
    ]
}

/// The F4 counterexample: an empty volume-two 4-simplex over the even-sum
/// lattice whose second dilate has an unreachable lattice point.
pub fn f4_simplex() -> Polytope {
    let lat = f4_dual_lattice();
    let verts: Vec<Vec<Int>> = f4_ambient_vertices()
        .iter()
        .map(|v| {
            let amb = to_rat_vec(&v.iter().map(|&x| int(x)).collect::<Vec<_>>());
            lat.from_ambient(&amb).expect("vertex must lie in the lattice")
        })
        .collect();
    Polytope::from_vertices(lat, verts)
}

/// The E8 counterexample: the product of the F4 simplex with itself, read
/// over the E8 lattice (which adds twelve half-integer lattice points).
pub fn e8_product() -> Polytope {
    let lat = e8_lattice();
    let f4 = f4_ambient_vertices();
    let mut verts = Vec::new();
    for a in &f4 {
        for b in &f4 {
            let mut amb: Vec<i64> = a.clone();
            amb.extend_from_slice(b);
            let amb = to_rat_vec(&amb.iter().map(|&x| int(x)).collect::<Vec<_>>());
            verts.push(lat.from_ambient(&amb).expect("product vertex must lie in E8"));
        }
    }
    Polytope::from_vertices(lat, verts)
}

/// The unit simplex over `Z^{d+1} + Z v`, `v = (1/k, .., 1/k)`, `d = hk - 1`,
/// in the lattice basis `v, e_1, .., e_d`: vertices `(k, -1, .., -1)` and the
/// unit vectors `e_1, .., e_d`.
pub fn gap_simplex(h: u32, k: u32) -> Polytope {
    let d = (h * k - 1) as usize;
    let mut verts = vec![{
        let mut a = vec![-Int::one(); d + 1];
        a[0] = int(k as i64);
        a
    }];
    for i in 1..=d {
        let mut e = vec![Int::zero(); d + 1];
        e[i] = Int::one();
        verts.push(e);
    }
    let mut basis = vec![vec![Rat::new(Int::one(), int(k as i64)); d + 1]];
    for i in 1..=d {
        let mut e = vec![Rat::zero(); d + 1];
        e[i] = Rat::one();
        basis.push(e);
    }
    Polytope::from_vertices(Lattice::new(basis), verts)
}

/// The residue that obstructs normality of dilates of the gap simplex:
/// `k` times the ambient first coordinate, modulo `k`. In the lattice basis
/// this is the first coordinate modulo `k`.
pub fn gap_residue(point: &[Int], k: u32) -> Int {
    point[0].mod_floor(&int(k as i64))
}

/// Triangulation of the `h`-th dilate of the gap simplex: the star of the
/// interior point `v` over the canonical dilation of every boundary facet.
pub fn gap_star_triangulation(h: u32, k: u32) -> Triangulation {
    let p = gap_simplex(h, k);
    let d = p.dim;
    let verts = {
        // Keep the construction order: apex row first, then unit vectors.
        let mut a = vec![-Int::one(); d + 1];
        a[0] = int(k as i64);
        let mut vs = vec![a];
        for i in 1..=d {
            let mut e = vec![Int::zero(); d + 1];
            e[i] = Int::one();
            vs.push(e);
        }
        vs
    };
    let apex: Vec<Int> = {
        let mut v = vec![Int::zero(); d + 1];
        v[0] = Int::one();
        v
    };
    let mut points: BTreeSet<Vec<Int>> = BTreeSet::new();
    points.insert(apex.clone());
    let mut raw_cells: Vec<Vec<Vec<Int>>> = Vec::new();
    for skip in 0..=d {
        let facet: Vec<Vec<Int>> =
            (0..=d).filter(|&i| i != skip).map(|i| verts[i].clone()).collect();
        let config = PointConfiguration::new(p.lattice.clone(), facet);
        let trivial = Triangulation::new(Subdivision::trivial(config));
        let (dilated, _, _) = canonical_dilation(&trivial, h);
        for cell in &dilated.cells {
            let mut coords: Vec<Vec<Int>> = cell
                .iter()
                .map(|&i| dilated.config.points[i].clone())
                .collect();
            for c in &coords {
                points.insert(c.clone());
            }
            coords.push(apex.clone());
            raw_cells.push(coords);
        }
    }
    let points: Vec<Vec<Int>> = points.into_iter().collect();
    let index: BTreeMap<&Vec<Int>, usize> =
        points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let cells: Vec<Vec<usize>> = raw_cells
        .iter()
        .map(|coords| {
            let mut c: Vec<usize> = coords.iter().map(|p| index[p]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let config = PointConfiguration::new(p.lattice.clone(), points);
    let sub = Subdivision::from_members(config, cells);
    let t = Triangulation::new(sub);
    let total: Int = (0..t.cells.len()).map(|i| t.sub.cell_volume(i)).sum();
    assert_eq!(total, t.sub.hull_volume(), "star cells must tile the dilate");
    t
}

// ---------------------------------------------------------------------------
// The no-regular-unimodular-triangulation edge polytope

/// The 10-cycle `v0 .. v9` with the chords `02, 24, 46, 68, 08`.
pub fn nrut_graph() -> GraphSpec {
    let mut edges: Vec<(usize, usize)> = (0..10).map(|i| (i, (i + 1) % 10)).collect();
    edges.extend([(0, 2), (2, 4), (4, 6), (6, 8), (0, 8)]);
    GraphSpec::undirected(10, &edges)
}

/// One seven-edge face of the NRUT edge polytope together with its unique
/// affine dependence, split into the unimodular (all-ones) side and the
/// other side.
#[derive(Clone, Debug)]
pub struct NrutFace {
    /// Indices into the edge list of `nrut_graph()`.
    pub members: Vec<usize>,
    /// Dependence coefficients per member: positive entries on the
    /// unimodular side, negative on the other.
    pub lambda: Vec<Int>,
}

/// The five faces of the NRUT edge polytope carried into each other by the
/// pentagonal symmetry, each with its derived circuit dependence.
pub fn nrut_faces() -> Vec<NrutFace> {
    let g = nrut_graph();
    let points = edge_points(&g);
    let edge_index = |u: usize, v: usize| {
        g.edges
            .iter()
            .position(|&(a, b)| (a, b) == (u.min(v), u.max(v)))
            .expect("edge present")
    };
    let mut faces = Vec::new();
    for s in [0usize, 2, 4, 6, 8] {
        let r = |v: usize| (v + s) % 10;
        let members: Vec<usize> = [
            (0, 1),
            (1, 2),
            (0, 2),
            (2, 4),
            (4, 5),
            (5, 6),
            (4, 6),
        ]
        .iter()
        .map(|&(u, v)| edge_index(r(u), r(v)))
        .collect();
        // Check this is a face: some functional vanishes on the members and
        // is strictly positive on every other point.
        let valid = {
            let mut cons = Vec::new();
            for (i, pt) in points.iter().enumerate() {
                let coeffs = to_rat_vec(pt);
                let rel = if members.contains(&i) { Rel::Eq } else { Rel::Gt };
                cons.push(LinCon::new(coeffs, Rat::zero(), rel));
            }
            lin_feasible(&cons).is_feasible()
        };
        assert!(valid, "the seven edges must span a face");
        // Unique affine dependence of the seven face points.
        let cols: Vec<Vec<Rat>> = (0..=10)
            .map(|j| {
                members
                    .iter()
                    .map(|&i| {
                        if j < 10 {
                            Rat::from_integer(points[i][j].clone())
                        } else {
                            Rat::one()
                        }
                    })
                    .collect()
            })
            .collect();
        let kernel = kernel_int(&cols);
        assert_eq!(kernel.len(), 1, "face must be a circuit");
        let mut lambda = kernel.into_iter().next().unwrap();
        // Orient so the all-ones side is positive.
        let pos_all_ones = lambda
            .iter()
            .filter(|x| x.is_positive())
            .all(|x| x.is_one());
        if !pos_all_ones {
            for x in lambda.iter_mut() {
                *x = -x.clone();
            }
        }
        assert!(
            lambda.iter().filter(|x| x.is_positive()).all(|x| x.is_one()),
            "one side of the dependence must be all ones"
        );
        assert!(
            lambda.iter().any(|x| -x.clone() > Int::one()),
            "the other side must carry a coefficient two"
        );
        faces.push(NrutFace { members, lambda });
    }
    faces
}

/// The weight system forcing the unimodular side of each of the five NRUT
/// circuits, as strict constraints on a weight vector over the fifteen
/// edges. The system is infeasible, which certifies that no regular
/// triangulation restricts to the unimodular choice on all five faces.
pub fn nrut_obstruction() -> Feasibility {
    let faces = nrut_faces();
    let cons: Vec<LinCon> = faces
        .iter()
        .map(|f| {
            let mut coeffs = vec![Rat::zero(); 15];
            // A weight selecting the unimodular side must evaluate the
            // circuit dependence positively.
            for (&m, l) in f.members.iter().zip(&f.lambda) {
                coeffs[m] += Rat::from_integer(l.clone());
            }
            LinCon::new(coeffs, Rat::zero(), Rel::Gt)
        })
        .collect();
    lin_feasible(&cons)
}

// ---------------------------------------------------------------------------
// Stanley-Reisner generators

/// Squarefree monomial generators of the combinatorial shadow of a
/// triangulation: one generator per minimal non-face, as sorted index sets.
#[derive(Clone, Debug)]
pub struct StanleyReisner {
    pub generators: Vec<Vec<usize>>,
    /// When the triangulation is not unimodular the generators only present
    /// the radical of the initial data.
    pub radical_only: bool,
}

impl StanleyReisner {
    /// All generators quadratic, i.e. the triangulation is flag.
    pub fn is_quadratic(&self) -> bool {
        self.generators.iter().all(|g| g.len() == 2)
    }
}

/// Minimal non-faces of the triangulation, capped at the maximal possible
/// size of a minimal non-face.
pub fn stanley_reisner(t: &Triangulation) -> StanleyReisner {
    let report = t.minimal_nonfaces(t.dim() + 2);
    StanleyReisner {
        generators: report.minimal_nonfaces,
        radical_only: !matches!(
            t.is_unimodular(),
            crate::subdivision::Unimodularity::Yes
        ),
    }
}

/// Convenience check used by several examples.
pub fn compressed(p: &Polytope) -> bool {
    matches!(is_compressed(p), Compressedness::Yes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{pull_all, type_a_triangulate, PullMode};
    use crate::exact::ivec;
    use crate::polytope::{simplex_volume, Closedness};
    use crate::regular::decide_regular;
    use crate::subdivision::Unimodularity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unimodular(t: &Triangulation) -> bool {
        matches!(t.is_unimodular(), Unimodularity::Yes)
    }

    #[test]
    fn reeve_family() {
        for q in 1..=4u32 {
            let ex = make(&Family::Reeve { q }).unwrap();
            assert_eq!(ex.polytope.volume(), int(q as i64));
            assert_eq!(ex.polytope.lattice_points().len(), 4);
        }
    }

    #[test]
    fn white_simplices_are_empty() {
        for (p, q) in [(0, 1), (1, 2), (1, 3), (2, 5), (3, 7)] {
            let ex = make(&Family::White { p, q }).unwrap();
            assert_eq!(ex.polytope.volume(), int(q));
            assert_eq!(ex.polytope.lattice_points().len(), 4);
        }
        assert!(make(&Family::White { p: 2, q: 4 }).is_err());
    }

    #[test]
    fn hypersimplex_octahedron() {
        let ex = make(&Family::Hypersimplex { d: 3, k: 2 }).unwrap();
        assert_eq!(ex.polytope.vertices.len(), 6);
        assert_eq!(ex.polytope.volume(), int(4));
        assert!(compressed(&ex.polytope));
        // k = 1 and k = d give simplices.
        for k in [1usize, 4] {
            let s = make(&Family::Hypersimplex { d: 4, k }).unwrap();
            assert_eq!(s.polytope.vertices.len(), 5);
            assert!(compressed(&s.polytope));
        }
    }

    #[test]
    fn order_polytopes_and_extensions() {
        // Antichain: the cube; chain: a unimodular simplex.
        let cube = order_polytope(3, &[]);
        assert_eq!(cube.vertices.len(), 8);
        assert_eq!(linear_extensions(3, &[]), int(6));
        let chain = order_polytope(3, &[(0, 1), (1, 2)]);
        assert_eq!(chain.vertices.len(), 4);
        assert_eq!(chain.volume(), Int::one());
        assert_eq!(linear_extensions(3, &[(0, 1), (1, 2)]), Int::one());
        // V-shaped poset: 0 below 1 and 2.
        let v = order_polytope(3, &[(0, 1), (0, 2)]);
        assert!(compressed(&v));
        let (t, _, _) = type_a_triangulate(&v);
        assert_eq!(int(t.cells.len() as i64), linear_extensions(3, &[(0, 1), (0, 2)]));
        assert!(t.is_flag());
    }

    #[test]
    fn type_a_cells_count_linear_extensions() {
        let posets: Vec<(usize, Vec<(usize, usize)>)> = vec![
            (2, vec![]),
            (3, vec![(0, 1)]),
            (4, vec![(0, 1), (1, 2), (0, 3)]),
            (4, vec![(0, 2), (1, 2), (2, 3)]),
            (5, vec![(0, 1), (0, 2), (3, 4)]),
        ];
        for (n, rel) in posets {
            let p = order_polytope(n, &rel);
            let (t, _, _) = type_a_triangulate(&p);
            assert_eq!(int(t.cells.len() as i64), linear_extensions(n, &rel));
            assert!(unimodular(&t));
        }
    }

    #[test]
    fn birkhoff_three_is_a_circuit() {
        let b3 = birkhoff(3);
        assert_eq!(b3.vertices.len(), 6);
        assert_eq!(b3.dim, 4);
        assert!(compressed(&b3));
        // Pull in full-dimensional coordinates; the doubly stochastic
        // constraints make point enumeration in the ambient space needlessly
        // expensive.
        let t = pull_all(&b3.full_dimensionalize().0, None, PullMode::Strong);
        assert!(unimodular(&t));
        let sr = stanley_reisner(&t);
        assert_eq!(sr.generators.len(), 1);
        assert_eq!(sr.generators[0].len(), 3);
        assert!(!sr.radical_only);
    }

    #[test]
    fn transportation_vertices_are_integral_extremes() {
        let t = transportation(&[2, 1], &[1, 2]);
        // 2x2 transportation polytopes are segments or points.
        assert_eq!(t.dim, 1);
        assert_eq!(t.vertices.len(), 2);
        let t = transportation(&[1, 2, 3], &[2, 2, 2]);
        assert_eq!(t.dim, 4);
        assert!(t.vertices.iter().all(|v| t.contains(v)));
    }

    #[test]
    fn f4_simplex_is_empty_and_not_closed() {
        let p = f4_simplex();
        assert_eq!(p.vertices.len(), 5);
        assert_eq!(p.volume(), int(2));
        assert_eq!(p.lattice_points().len(), 5);
        let witness_amb = to_rat_vec(&ivec(&[-1, 0, 2, -1]));
        let w = p.lattice.from_ambient(&witness_amb).expect("witness in lattice");
        assert!(p.dilate(2).contains(&w));
        let pts = p.lattice_points();
        let mut is_sum = false;
        for a in &pts {
            for b in &pts {
                if a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>() == w {
                    is_sum = true;
                }
            }
        }
        assert!(!is_sum, "witness must not decompose");
        assert!(matches!(p.is_integrally_closed_up_to(2), Closedness::Fail { level: 2, .. }));
    }

    #[test]
    fn e8_product_has_37_points_and_fails_idp() {
        let p = e8_product();
        assert_eq!(p.vertices.len(), 25);
        let pts = p.lattice_points();
        assert_eq!(pts.len(), 37);
        // The twelve extra lattice points, four integral and eight
        // half-integral, are present.
        let halves: Vec<Vec<i64>> = vec![
            vec![-1, 0, 1, -1, -1, 0, 1, -1],
            vec![-1, 0, 1, -1, 0, 0, 1, 0],
            vec![0, 0, 1, 0, -1, 0, 1, -1],
            vec![0, 0, 1, 0, 0, 0, 1, 0],
        ];
        for v in halves {
            let amb = to_rat_vec(&ivec(&v));
            let w = p.lattice.from_ambient(&amb).expect("extra point in E8");
            assert!(pts.contains(&w));
            assert!(!p.vertices.contains(&w));
        }
        let doubled: Vec<[i64; 8]> = vec![
            [-1, -1, 1, -1, -1, -1, 1, -1],
            [-1, -1, 1, -1, -1, 1, 3, -1],
            [-1, 1, 1, -1, -1, -1, 3, -1],
            [-1, 1, 1, -1, -1, 1, 1, -1],
            [-1, -1, 3, -1, -1, -1, 3, -1],
            [-1, -1, 3, -1, -1, 1, 1, -1],
            [-1, 1, 3, -1, -1, -1, 1, -1],
            [-1, 1, 3, -1, -1, 1, 3, -1],
        ];
        for v in doubled {
            let amb: Vec<Rat> = v.iter().map(|&x| Rat::new(int(x), int(2))).collect();
            let w = p.lattice.from_ambient(&amb).expect("half point in E8");
            assert!(pts.contains(&w));
        }
        let witness_amb = to_rat_vec(&ivec(&[-2, -1, 2, -1, -1, 0, 2, -1]));
        let w = p.lattice.from_ambient(&witness_amb).expect("witness in E8");
        assert!(p.dilate(2).contains(&w));
        let mut is_sum = false;
        for a in &pts {
            for b in &pts {
                if a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>() == w {
                    is_sum = true;
                }
            }
        }
        assert!(!is_sum);
    }

    #[test]
    fn gap_simplex_small_case() {
        // h = 1, k = 2: the segment over Z^2 + Z(1/2, 1/2).
        let p = gap_simplex(1, 2);
        assert_eq!(p.vertices.len(), 2);
        let t = gap_star_triangulation(1, 2);
        assert!(unimodular(&t));
        assert!(decide_regular(&t).is_regular());
    }

    #[test]
    fn gap_star_two_three() {
        // h = 2, k = 3: a 5-simplex whose second dilate gets the apex star.
        let t = gap_star_triangulation(2, 3);
        assert!(unimodular(&t));
        // The star is unimodular and regular but not flag: around the doubled
        // apex vertex 2a, the midpoints a + e_j are pairwise cofacial (any two
        // share a diced facet) yet no cell contains all of them, for any
        // vertex ordering. The same obstruction appears around every vertex.
        let d = t.dim();
        let mut a = vec![-Int::one(); d + 1];
        a[0] = int(3);
        let midpoint_star: Vec<usize> = (1..=d)
            .map(|j| {
                let mut m = a.clone();
                m[j] += Int::one();
                t.config.points.iter().position(|p| *p == m).unwrap()
            })
            .collect();
        let mut midpoint_star = midpoint_star;
        midpoint_star.sort_unstable();
        let report = t.minimal_nonfaces(d + 2);
        assert!(report.minimal_nonfaces.contains(&midpoint_star));
        assert!(!t.is_flag());
        assert!(crate::regular::decide_regular(&t).is_regular());
        assert_eq!(
            int(t.cells.len() as i64),
            int(6) * int(2).pow(4) // (d+1) facets, 2^{d-1} cells each, volume 3
        );
    }

    #[test]
    fn gap_residues_obstruct_normality() {
        // h = 2, k = 4: points of the third dilate have residues 0 or 1, so
        // pair sums only reach residue 2, while the sixth dilate contains a
        // residue-3 point.
        let p = gap_simplex(2, 4);
        let three = p.dilate(3);
        for q in three.lattice_points() {
            let r = gap_residue(&q, 4);
            assert!(r == Int::zero() || r == Int::one());
        }
        match three.is_integrally_closed_up_to(2) {
            Closedness::Fail { witness, level } => {
                assert_eq!(level, 2);
                assert_eq!(gap_residue(&witness, 4), int(3));
            }
            Closedness::Pass => panic!("the third dilate must not be integrally closed"),
        }
    }

    #[test]
    fn nrut_faces_and_obstruction() {
        let faces = nrut_faces();
        assert_eq!(faces.len(), 5);
        for f in &faces {
            assert_eq!(f.members.len(), 7);
            let pos: Vec<&Int> = f.lambda.iter().filter(|x| x.is_positive()).collect();
            let neg: Vec<Int> = f.lambda.iter().filter(|x| x.is_negative()).map(|x| -x.clone()).collect();
            assert_eq!(pos.len(), 4);
            assert!(pos.iter().all(|x| x.is_one()));
            let mut neg_sorted = neg.clone();
            neg_sorted.sort();
            assert_eq!(neg_sorted, vec![Int::one(), Int::one(), int(2)]);
        }
        assert!(matches!(nrut_obstruction(), Feasibility::Infeasible(_)));
        let g = nrut_graph();
        let d = edge_diagnostics(&g);
        assert!(d.odd_cycle_condition);
        assert_eq!(edge_points(&g).len(), 15);
    }

    #[test]
    fn arc_polytope_directed_triangle() {
        let g = GraphSpec::directed(3, &[(0, 1), (1, 2), (2, 0)]);
        let a = arc_polytope(&g);
        assert!(a.contains_origin);
        assert!(a.spans_hyperplane);
        // The full cycle is unbalanced by three, so the configuration is not
        // totally unimodular; unimodularity comes from pulling the origin.
        assert!(!a.totally_unimodular);
        // Pull the origin first: all cells unimodular.
        let mut pts = a.polytope.lattice_points();
        let origin = vec![Int::zero(); 3];
        assert!(pts.contains(&origin));
        pts.sort_by_key(|p| p != &origin);
        let config = PointConfiguration::new(Lattice::standard(3), pts);
        let n = config.len();
        let mut sub = Subdivision::trivial(config);
        for m in 0..n {
            sub = crate::builders::pull(&sub, m, PullMode::Strong);
        }
        let t = Triangulation::new(sub);
        assert!(unimodular(&t));
        assert!(t.cells.iter().all(|c| c.contains(&0)));
    }

    #[test]
    fn arc_polytope_bipartite_one_direction() {
        // K_{2,2} directed from one side to the other.
        let g = GraphSpec::directed(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let a = arc_polytope(&g);
        assert!(!a.contains_origin);
        assert!(!a.spans_hyperplane);
        assert!(a.totally_unimodular);
        let t = pull_all(&a.polytope, None, PullMode::Strong);
        assert!(unimodular(&t));
    }

    #[test]
    fn arc_polytope_circuit_with_coefficient_two() {
        // Arcs realizing e1-e2, e2-e3, e3-e4, e4-e5, e1-e4, e3-e5 (1-based):
        // head carries +1, so the arc for e_i - e_j runs j -> i.
        let g = GraphSpec::directed(
            5,
            &[(1, 0), (2, 1), (3, 2), (4, 3), (3, 0), (4, 2)],
        );
        let a = arc_polytope(&g);
        assert!(!a.contains_origin);
        assert!(a.spans_hyperplane);
        assert!(!a.totally_unimodular);
        // Unique dependence has a coefficient of two.
        let cols: Vec<Vec<Rat>> = (0..=5)
            .map(|j| {
                a.points
                    .iter()
                    .map(|p| {
                        if j < 5 {
                            Rat::from_integer(p[j].clone())
                        } else {
                            Rat::one()
                        }
                    })
                    .collect()
            })
            .collect();
        let kernel = kernel_int(&cols);
        assert_eq!(kernel.len(), 1);
        assert!(kernel[0].iter().any(|x| x.abs() == int(2)));
    }

    #[test]
    fn edge_polytope_bipartite_and_disjoint_triangles() {
        // C4 is bipartite: every triangulation unimodular.
        let c4 = GraphSpec::undirected(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let e = edge_polytope(&c4);
        assert!(e.bipartite);
        assert!(e.odd_cycle_condition);
        let t = pull_all(&e.polytope, None, PullMode::Strong);
        assert!(unimodular(&t));
        // Two triangles joined only through a middle vertex: disjoint odd
        // cycles without a bridge, and a volume-two simplex witness.
        let g = GraphSpec::undirected(
            7,
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 6)],
        );
        let e = edge_polytope(&g);
        assert!(!e.odd_cycle_condition);
        let pair = e.violation.expect("two unbridged odd cycles");
        assert_eq!(pair.first.len() % 2, 1);
        assert_eq!(pair.second.len() % 2, 1);
        assert!(!e.compressed_criterion);
        // Spanning subgraph with one odd cycle per component: both triangles
        // plus the edge 2-3 hanging off the first.
        let idx = |u: usize, v: usize| {
            g.edges.iter().position(|&(a, b)| (a, b) == (u.min(v), u.max(v))).unwrap()
        };
        let cell = vec![
            idx(0, 1),
            idx(1, 2),
            idx(0, 2),
            idx(2, 3),
            idx(4, 5),
            idx(5, 6),
            idx(4, 6),
        ];
        assert_eq!(simplex_volume(&e.points, &cell), int(2));
    }

    #[test]
    fn unicyclic_subgraph_volumes() {
        // Random graphs: a spanning subgraph with one odd cycle per
        // component is a simplex of volume 2^{c-1}.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let comps = rng.gen_range(1..=2usize);
            let mut edges: Vec<(usize, usize)> = Vec::new();
            let mut offset = 0;
            let mut n = 0;
            for _ in 0..comps {
                let cyc = 2 * rng.gen_range(1..=2usize) + 1; // 3 or 5
                let extra = rng.gen_range(0..=2usize); // pendant tree vertices
                for i in 0..cyc {
                    edges.push((offset + i, offset + (i + 1) % cyc));
                }
                for j in 0..extra {
                    let attach = rng.gen_range(0..cyc + j);
                    edges.push((offset + attach, offset + cyc + j));
                }
                offset += cyc + extra;
                n = offset;
            }
            // Join the components by an edge so the graph is connected, but
            // measure the simplex on the unicyclic subgraph only.
            let mut g_edges = edges.clone();
            if comps == 2 {
                g_edges.push((0, n - 1));
            }
            let g = GraphSpec::undirected(n, &g_edges);
            let pts = edge_points(&g);
            let cell: Vec<usize> = edges
                .iter()
                .map(|&(u, v)| {
                    g.edges
                        .iter()
                        .position(|&(a, b)| (a, b) == (u.min(v), u.max(v)))
                        .unwrap()
                })
                .collect();
            let vol = simplex_volume(&pts, &cell);
            assert_eq!(vol, int(2).pow(comps as u32 - 1));
        }
    }

    #[test]
    fn cut_polytopes_compressed_iff_small_cycles_no_k5() {
        let k3 = GraphSpec::undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(compressed(&cut_polytope(&k3)));
        let c4 = GraphSpec::undirected(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert!(compressed(&cut_polytope(&c4)));
        let k4 = GraphSpec::undirected(
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        );
        assert!(compressed(&cut_polytope(&k4)));
        let c5 = GraphSpec::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert!(!compressed(&cut_polytope(&c5)));
    }

    #[test]
    fn stanley_reisner_square_and_twisted_segment() {
        // The 2x2 square diced by type A is flag: all generators quadratic.
        let square = Polytope::from_vertices(
            Lattice::standard(2),
            vec![ivec(&[0, 0]), ivec(&[2, 0]), ivec(&[0, 2]), ivec(&[2, 2])],
        );
        let (t, _, _) = type_a_triangulate(&square);
        let sr = stanley_reisner(&t);
        assert!(sr.is_quadratic());
        assert!(!sr.radical_only);
        // Segment configuration {1,2,3,4} in the region where both circuit
        // values are positive: non-faces {13, 24, 14}.
        let rows = crate::regular::twisted_cubic_scan();
        let row = rows
            .iter()
            .find(|r| r.lambda.0.is_positive() && r.lambda.1.is_positive())
            .unwrap();
        let config = PointConfiguration::new(
            Lattice::standard(1),
            vec![ivec(&[1]), ivec(&[2]), ivec(&[3]), ivec(&[4])],
        );
        let cells: Vec<Vec<usize>> = row
            .cells
            .iter()
            .map(|c| c.iter().map(|&i| i - 1).collect())
            .collect();
        let t = Triangulation::new(Subdivision::from_members(config, cells));
        let sr = stanley_reisner(&t);
        assert_eq!(
            sr.generators,
            vec![vec![0, 2], vec![0, 3], vec![1, 3]]
        );
    }
}
