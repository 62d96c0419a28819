//! Triangulation producers: strong/weak pulling, hyperplane dicing by
//! root-system families, the type-A and type-B procedures, and the
//! compressedness test.

use crate::exact::hull::hull_facets;
use crate::exact::solve::{rank, solve};
use crate::exact::{idot, to_rat_vec, Int, LinCon, Rat, Rel};
use crate::polytope::{PointConfiguration, Polytope};
use crate::regular::{regular_subdivision, LayeredWeights, RegularityCertificate};
use crate::subdivision::{Subdivision, Triangulation, Unimodularity};
use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Strong pulling refines by geometric containment and keeps every point
/// available; weak pulling only touches cells listing the point as a member
/// and drops points swallowed inside the new pyramids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullMode {
    Strong,
    Weak,
}

/// Whether `q` lies in the convex hull of the points indexed by `subset`.
fn point_in(points: &[Vec<Int>], subset: &[usize], q: &[Int]) -> bool {
    let hull = hull_facets(points, subset);
    hull.equations.iter().all(|e| e.eval(q).is_zero())
        && hull.facets.iter().all(|f| !f.normal.eval(q).is_negative())
}

/// Pulling refinement at configuration point `m`: every cell holding `m` is
/// replaced by the pyramids from `m` over its facets missing `m`.
pub fn pull(s: &Subdivision, m: usize, mode: PullMode) -> Subdivision {
    let pts = &s.config.points;
    assert!(m < s.config.len());
    let mp = pts[m].clone();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (ci, cell) in s.cells.iter().enumerate() {
        let touched = match mode {
            PullMode::Weak => s.members[ci].contains(&m),
            PullMode::Strong => point_in(pts, cell, &mp),
        };
        if !touched {
            members.push(s.members[ci].clone());
            continue;
        }
        let hull = hull_facets(pts, cell);
        if hull.facets.is_empty() {
            members.push(s.members[ci].clone());
            continue;
        }
        for f in &hull.facets {
            if f.normal.eval(&mp).is_zero() {
                continue;
            }
            let mut mem: Vec<usize> = match mode {
                PullMode::Weak => s.members[ci]
                    .iter()
                    .copied()
                    .filter(|&i| f.normal.eval(&pts[i]).is_zero())
                    .collect(),
                PullMode::Strong => {
                    let mut pyramid = f.support.clone();
                    pyramid.push(m);
                    pyramid.sort_unstable();
                    pyramid.dedup();
                    s.members[ci]
                        .iter()
                        .copied()
                        .filter(|&i| point_in(pts, &pyramid, &pts[i]))
                        .collect()
                }
            };
            if !mem.contains(&m) {
                mem.push(m);
                mem.sort_unstable();
            }
            members.push(mem);
        }
    }
    members.sort();
    members.dedup();
    Subdivision::from_members(s.config.clone(), members)
}

/// Pull every lattice point of `p` in the given order (default: the
/// configuration order); strong mode yields a full triangulation.
pub fn pull_all(p: &Polytope, order: Option<&[usize]>, mode: PullMode) -> Triangulation {
    let config = PointConfiguration::from_polytope(p);
    let default: Vec<usize> = (0..config.len()).collect();
    let order = order.map(|o| o.to_vec()).unwrap_or(default);
    let mut s = Subdivision::trivial(config);
    for &m in &order {
        s = pull(&s, m, mode);
    }
    Triangulation::new(s)
}

/// The layered weights realizing the same pulling sequence: a flat base
/// layer, then one pull layer per point in order.
pub fn pull_weights(n: usize, order: &[usize]) -> LayeredWeights {
    let mut w = LayeredWeights::flat(n);
    for &m in order {
        w.push(LayeredWeights::pull_layer(n, m));
    }
    w
}

/// Compressedness: lattice width one in every facet direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Compressedness {
    Yes,
    No { facet: usize, width: Int },
}

pub fn is_compressed(p: &Polytope) -> Compressedness {
    for i in 0..p.facets.len() {
        let w = p.facet_width(i);
        if w != Int::one() {
            return Compressedness::No { facet: i, width: w };
        }
    }
    Compressedness::Yes
}

/// A family of primitive hyperplane directions used for dicing. The family
/// is unimodular when every maximal minor of the normal matrix is 0 or ±1.
#[derive(Clone, Debug)]
pub struct DicingFamily {
    pub normals: Vec<Vec<Int>>,
    pub unimodular: bool,
}

impl DicingFamily {
    pub fn new(normals: Vec<Vec<Int>>) -> Self {
        assert!(!normals.is_empty());
        let d = normals[0].len();
        assert!(normals.iter().all(|n| n.len() == d));
        for n in &normals {
            let g = n.iter().fold(Int::zero(), |g, x| g.gcd(x));
            assert!(g.is_one(), "dicing normals must be primitive");
        }
        let unimodular = if normals.len() < d {
            false
        } else {
            normals.iter().combinations(d).all(|rows| {
                let m = crate::exact::IntMatrix::from_rows(
                    rows.iter().map(|r| (*r).clone()).collect(),
                );
                let det = crate::exact::matrix::det(&m);
                det.is_zero() || det.abs().is_one()
            })
        };
        DicingFamily { normals, unimodular }
    }

    /// The type-A directions in dimension `d`: coordinates and their
    /// pairwise differences.
    pub fn type_a(d: usize) -> Self {
        let mut normals = Vec::new();
        for i in 0..d {
            let mut n = vec![Int::zero(); d];
            n[i] = Int::one();
            normals.push(n);
        }
        for i in 0..d {
            for j in i + 1..d {
                let mut n = vec![Int::zero(); d];
                n[i] = Int::one();
                n[j] = -Int::one();
                normals.push(n);
            }
        }
        DicingFamily::new(normals)
    }

    /// The short-root directions in dimension `d`: the coordinates.
    pub fn short_roots(d: usize) -> Self {
        let normals = (0..d)
            .map(|i| {
                let mut n = vec![Int::zero(); d];
                n[i] = Int::one();
                n
            })
            .collect();
        DicingFamily::new(normals)
    }

    /// The quadratic weight stack: one layer per direction, each squaring
    /// the direction's value at every configuration point.
    pub fn quadratic_weights(&self, config: &PointConfiguration) -> LayeredWeights {
        let layers = self
            .normals
            .iter()
            .map(|n| {
                crate::exact::RatVector(
                    config
                        .points
                        .iter()
                        .map(|p| {
                            let v = idot(n, p);
                            Rat::from_integer(&v * &v)
                        })
                        .collect(),
                )
            })
            .collect();
        LayeredWeights::new(layers)
    }
}

/// Outcome of dicing: the cells of the hyperplane arrangement restricted to
/// the polytope, as rational vertex lists; the induced lattice subdivision
/// when every vertex is integral; and the quadratic weights realizing it.
#[derive(Clone, Debug)]
pub struct Dicing {
    pub cells: Vec<Vec<Vec<Rat>>>,
    pub non_lattice: Vec<(usize, Vec<Rat>)>,
    pub sub: Option<Subdivision>,
    pub weights: LayeredWeights,
}

/// All vertices of the polyhedron cut out by `cons` in dimension `d`.
pub(crate) fn vertex_enumerate(cons: &[LinCon], d: usize) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for sub in (0..cons.len()).combinations(d) {
        let rows: Vec<Vec<Rat>> = sub.iter().map(|&i| cons[i].coeffs.clone()).collect();
        if rank(&rows) < d {
            continue;
        }
        let rhs: Vec<Rat> = sub.iter().map(|&i| -cons[i].constant.clone()).collect();
        let Some(x) = solve(&rows, &rhs) else { continue };
        if cons.iter().all(|c| c.holds(&x)) {
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Slice `p` by every lattice-offset hyperplane of the family meeting it.
pub fn dice(p: &Polytope, fam: &DicingFamily) -> Dicing {
    assert!(
        p.equations.is_empty(),
        "dicing expects a full-dimensional polytope"
    );
    let d = p.ambient_dim();
    // Depth-first over the slab index of each direction, pruning empty
    // prefixes via strict feasibility.
    let mut cells: Vec<Vec<LinCon>> = vec![p.constraints()];
    for n in &fam.normals {
        let vals: Vec<Int> = p.vertices.iter().map(|v| idot(n, v)).collect();
        let lo = vals.iter().min().unwrap().clone();
        let hi = vals.iter().max().unwrap().clone();
        let nr = to_rat_vec(n);
        let mut next = Vec::new();
        for cons in &cells {
            let mut k = lo.clone();
            while k < hi {
                let mut sliced = cons.clone();
                sliced.push(LinCon::new(
                    nr.clone(),
                    -Rat::from_integer(k.clone()),
                    Rel::Ge,
                ));
                sliced.push(LinCon::new(
                    nr.iter().map(|c| -c).collect(),
                    Rat::from_integer(&k + Int::one()),
                    Rel::Ge,
                ));
                let open: Vec<LinCon> = sliced
                    .iter()
                    .map(|c| LinCon::new(c.coeffs.clone(), c.constant.clone(), Rel::Gt))
                    .collect();
                if let crate::exact::Feasibility::Feasible(_) =
                    crate::exact::lin_feasible(&open)
                {
                    next.push(sliced);
                }
                k += Int::one();
            }
        }
        cells = next;
    }
    let config = PointConfiguration::from_polytope(p);
    let weights = fam.quadratic_weights(&config);
    // Lattice points per closed chamber. When every chamber vertex is
    // integral these hulls are the chambers themselves and tile the
    // polytope exactly; otherwise some hull is strictly smaller, which a
    // volume comparison detects without enumerating rational vertices.
    let members: Vec<Vec<usize>> = cells
        .iter()
        .map(|cons| {
            (0..config.len())
                .filter(|&i| {
                    let x = to_rat_vec(&config.points[i]);
                    cons.iter().all(|c| c.holds(&x))
                })
                .collect()
        })
        .collect();
    let candidate = Subdivision::from_members(config, members);
    let tiled: Int = (0..candidate.cells.len())
        .map(|i| candidate.cell_volume(i))
        .sum();
    if tiled == candidate.hull_volume() {
        let vertex_lists: Vec<Vec<Vec<Rat>>> = candidate
            .cells
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&i| to_rat_vec(&candidate.config.points[i]))
                    .collect()
            })
            .collect();
        return Dicing {
            cells: vertex_lists,
            non_lattice: Vec::new(),
            sub: Some(candidate),
            weights,
        };
    }
    // Some chamber has a non-integral vertex: fall back to exact vertex
    // enumeration to report the offenders.
    let vertex_lists: Vec<Vec<Vec<Rat>>> =
        cells.iter().map(|c| vertex_enumerate(c, d)).collect();
    let mut non_lattice = Vec::new();
    for (ci, vl) in vertex_lists.iter().enumerate() {
        for v in vl {
            if !v.iter().all(|x| x.is_integer()) {
                non_lattice.push((ci, v.clone()));
            }
        }
    }
    assert!(!non_lattice.is_empty(), "volume deficit implies a rational vertex");
    Dicing { cells: vertex_lists, non_lattice, sub: None, weights }
}

fn is_type_a_normal(a: &[Int]) -> bool {
    let nz: Vec<&Int> = a.iter().filter(|x| !x.is_zero()).collect();
    match nz.len() {
        1 => nz[0].abs().is_one(),
        2 => nz[0].abs().is_one() && *nz[1] == -nz[0],
        _ => false,
    }
}

fn is_type_b_normal(a: &[Int]) -> bool {
    let nz: Vec<&Int> = a.iter().filter(|x| !x.is_zero()).collect();
    nz.len() <= 2 && nz.iter().all(|x| x.abs().is_one())
}

/// The alcove triangulation of a polytope whose facet normals are type-A
/// directions, with its quadratic weight stack and certificate.
pub fn type_a_triangulate(
    p: &Polytope,
) -> (Triangulation, LayeredWeights, RegularityCertificate) {
    assert!(
        p.facets.iter().all(|f| is_type_a_normal(&f.a)),
        "facet normal outside the type-A directions"
    );
    let fam = DicingFamily::type_a(p.ambient_dim());
    let dicing = dice(p, &fam);
    assert!(dicing.non_lattice.is_empty(), "alcove vertices must be integral");
    let sub = dicing.sub.unwrap();
    let (ws, cert, _) = regular_subdivision(&sub.config, &dicing.weights);
    assert_eq!(ws.cells, sub.cells, "weights must reproduce the dicing");
    let t = Triangulation::new(ws);
    assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    (t, dicing.weights, cert)
}

/// The type-B procedure: slice by the short roots, check the pieces are
/// lattice and compressed, then pull every lattice point.
pub fn type_b_triangulate(
    p: &Polytope,
) -> (Triangulation, LayeredWeights, RegularityCertificate) {
    assert!(
        p.facets.iter().all(|f| is_type_b_normal(&f.a)),
        "facet normal outside the type-B directions"
    );
    let fam = DicingFamily::short_roots(p.ambient_dim());
    let dicing = dice(p, &fam);
    assert!(
        dicing.non_lattice.is_empty(),
        "short-root slices of a type-B polytope must be lattice polytopes"
    );
    let sub = dicing.sub.unwrap();
    for cell in &sub.cells {
        let verts: Vec<Vec<Int>> =
            cell.iter().map(|&i| sub.config.points[i].clone()).collect();
        let piece = Polytope::from_vertices(sub.config.lattice.clone(), verts);
        assert_eq!(
            is_compressed(&piece),
            Compressedness::Yes,
            "short-root slice must be compressed"
        );
    }
    let n = sub.config.len();
    let mut w = dicing.weights.clone();
    for m in 0..n {
        w.push(LayeredWeights::pull_layer(n, m));
    }
    let (ws, cert, _) = regular_subdivision(&sub.config, &w);
    let t = Triangulation::new(ws);
    assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    (t, w, cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ivec;
    use crate::polytope::Lattice;
    use crate::regular::{decide_regular, verify_certificate, Regularity};
    use crate::subdivision::Fullness;

    fn poly(rows: &[&[i64]]) -> Polytope {
        let pts: Vec<Vec<Int>> = rows.iter().map(|r| ivec(r)).collect();
        Polytope::from_vertices(Lattice::standard(pts[0].len()), pts)
    }

    fn rect() -> Polytope {
        poly(&[&[0, 0], &[2, 0], &[0, 1], &[2, 1]])
    }

    // Lattice points of the 2x1 rectangle in configuration (lex) order:
    // 0=(0,0) 1=(0,1) 2=(1,0) 3=(1,1) 4=(2,0) 5=(2,1).
    #[test]
    fn strong_vs_weak_pull_sequence() {
        let p = rect();
        let config = PointConfiguration::from_polytope(&p);
        assert_eq!(config.points[0], ivec(&[0, 0]));
        assert_eq!(config.points[2], ivec(&[1, 0]));
        assert_eq!(config.points[3], ivec(&[1, 1]));
        let mut strong = Subdivision::trivial(config.clone());
        let mut weak = Subdivision::trivial(config);
        for m in [0, 2, 3] {
            strong = pull(&strong, m, PullMode::Strong);
            weak = pull(&weak, m, PullMode::Weak);
        }
        assert_eq!(
            strong.cells,
            vec![vec![0, 1, 3], vec![0, 2, 5], vec![0, 3, 5], vec![2, 4, 5]]
        );
        assert_eq!(weak.cells, vec![vec![0, 1, 3], vec![0, 3, 5], vec![0, 4, 5]]);
        // The swallowed point 2 is no longer a member anywhere.
        assert!(weak.members.iter().all(|m| !m.contains(&2)));
        assert_eq!(strong.validate(), Ok(()));
        assert_eq!(weak.validate(), Ok(()));
    }

    #[test]
    fn pulling_pyramid_apex_is_identity() {
        let p = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let config = PointConfiguration::from_polytope(&p);
        let apex = config.points.iter().position(|q| q == &ivec(&[0, 0, 1])).unwrap();
        let s = Subdivision::trivial(config);
        let pulled = pull(&s, apex, PullMode::Strong);
        assert_eq!(pulled.cells, s.cells);
        assert_eq!(pulled.members, s.members);
    }

    #[test]
    fn pull_all_full_and_regular() {
        let t = pull_all(&rect(), None, PullMode::Strong);
        assert_eq!(t.sub.validate(), Ok(()));
        assert!(matches!(t.is_full(), Fullness::Yes));
        assert!(matches!(decide_regular(&t), Regularity::Regular(_)));
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    }

    #[test]
    fn weak_pull_all_matches_weight_stack() {
        let p = rect();
        let config = PointConfiguration::from_polytope(&p);
        let order: Vec<usize> = (0..config.len()).collect();
        let t = pull_all(&p, Some(&order), PullMode::Weak);
        let w = pull_weights(config.len(), &order);
        let (sub, cert, _) = regular_subdivision(&config, &w);
        assert_eq!(sub.cells, t.cells);
        assert_eq!(sub.members, t.members);
        assert_eq!(verify_certificate(&sub, &w, &cert), Ok(()));
    }

    #[test]
    fn strong_equals_weak_on_vertex_configs() {
        // Every lattice point is a vertex, so the two modes agree.
        let p = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        for order in (0..4).permutations(4) {
            let s = pull_all(&p, Some(&order), PullMode::Strong);
            let w = pull_all(&p, Some(&order), PullMode::Weak);
            assert_eq!(s.cells, w.cells);
            assert_eq!(s.members, w.members);
        }
    }

    #[test]
    fn compressed_examples() {
        let cube = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        assert_eq!(is_compressed(&cube), Compressedness::Yes);
        let two_simplex = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert!(matches!(
            is_compressed(&two_simplex),
            Compressedness::No { width, .. } if width == Int::from(2)
        ));
    }

    #[test]
    fn dice_square_by_coordinates() {
        let p = poly(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        let d = dice(&p, &DicingFamily::short_roots(2));
        assert!(d.non_lattice.is_empty());
        let sub = d.sub.unwrap();
        assert_eq!(sub.cells.len(), 4);
        assert_eq!(sub.validate(), Ok(()));
        let (ws, _, _) = regular_subdivision(&sub.config, &d.weights);
        assert_eq!(ws.cells, sub.cells);
    }

    #[test]
    fn dice_cube_one_direction_trivial() {
        let p = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        let fam = DicingFamily::new(vec![ivec(&[1, 0, 0])]);
        let d = dice(&p, &fam);
        assert_eq!(d.sub.unwrap().cells.len(), 1);
    }

    #[test]
    fn type_a_cube_alcoves() {
        let p = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        let (t, w, cert) = type_a_triangulate(&p);
        assert_eq!(t.cells.len(), 6);
        assert_eq!(t.sub.validate(), Ok(()));
        assert!(t.minimal_nonfaces(3).is_flag());
        assert!(matches!(t.is_full(), Fullness::Yes));
        assert_eq!(verify_certificate(&t.sub, &w, &cert), Ok(()));
    }

    #[test]
    fn type_a_simplex_single_cell() {
        let p = poly(&[&[0, 0], &[1, 0], &[1, 1]]);
        let (t, _, _) = type_a_triangulate(&p);
        assert_eq!(t.cells.len(), 1);
    }

    #[test]
    fn type_b_two_pyramids_example() {
        // Vertices with facet normals among the type-B directions; the z = 0
        // slice splits it into two square pyramids.
        let p = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[1, 1, 0],
            &[1, 1, 1],
            &[1, 0, -1],
        ]);
        let fam = DicingFamily::short_roots(3);
        let d = dice(&p, &fam);
        assert!(d.non_lattice.is_empty());
        assert_eq!(d.sub.as_ref().unwrap().cells.len(), 2);
        let (t, w, cert) = type_b_triangulate(&p);
        assert_eq!(t.sub.validate(), Ok(()));
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
        assert_eq!(verify_certificate(&t.sub, &w, &cert), Ok(()));
        assert!(matches!(decide_regular(&t), Regularity::Regular(_)));
    }

    #[test]
    fn type_b_cube() {
        let p = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        let (t, _, _) = type_b_triangulate(&p);
        assert_eq!(t.cells.len(), 6);
        assert!(matches!(t.is_unimodular(), Unimodularity::Yes));
    }
}
