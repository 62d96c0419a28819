//! Dilation machinery: ordered simplices, canonical triangulations of
//! dilations, box points, star refinement by layered weights, the dilation
//! driver, and effective bounds.

use crate::exact::solve::solve;
use crate::exact::{Int, Rat};
use crate::polytope::{simplex_volume, PointConfiguration};
use crate::regular::{
    decide_regular, pull_refine, LayeredWeights, PullWeights, Regularity,
    RegularityCertificate,
};
use crate::subdivision::Triangulation;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A lattice simplex with a fixed ordering of its vertices.
#[derive(Clone, Debug)]
pub struct OrderedSimplex {
    pub vertices: Vec<Vec<Int>>,
    /// Normalized volume (the lattice index of the edge-step matrix).
    pub volume: Int,
}

impl OrderedSimplex {
    pub fn new(vertices: Vec<Vec<Int>>) -> Self {
        let idx: Vec<usize> = (0..vertices.len()).collect();
        let volume = simplex_volume(&vertices, &idx);
        assert!(!volume.is_zero(), "degenerate simplex");
        OrderedSimplex { vertices, volume }
    }

    pub fn from_cell(points: &[Vec<Int>], cell: &[usize]) -> Self {
        Self::new(cell.iter().map(|&i| points[i].clone()).collect())
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Consecutive vertex differences a_i - a_{i-1}.
    pub fn steps(&self) -> Vec<Vec<Int>> {
        (1..self.vertices.len())
            .map(|i| {
                self.vertices[i]
                    .iter()
                    .zip(&self.vertices[i - 1])
                    .map(|(x, y)| x - y)
                    .collect()
            })
            .collect()
    }
}

/// A nonzero class of the quotient of the ambient lattice by the simplex's
/// vertex lattice, described through one lattice representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxPoint {
    /// An integral representative of the class.
    pub rep: Vec<Int>,
    /// Fractional parts of the affine barycentric coordinates of `rep`,
    /// invariant under the choice of representative.
    pub fracs: Vec<Rat>,
    /// Sum of the fractional parts; a positive integer.
    pub height: Int,
    /// Vertex positions with nonzero fractional part: the minimal face the
    /// class lives on.
    pub carrier: Vec<usize>,
}

fn frac_part(x: &Rat) -> Rat {
    x - x.floor()
}

/// Affine coefficients of `p` as a combination of `vertices` summing to
/// `total` (rational), if `p` lies in their affine span scaled accordingly.
fn affine_coeffs(vertices: &[&Vec<Int>], p: &[Rat], total: &Rat) -> Option<Vec<Rat>> {
    let d = vertices[0].len();
    let mut rows: Vec<Vec<Rat>> = (0..d)
        .map(|j| {
            vertices
                .iter()
                .map(|v| Rat::from_integer(v[j].clone()))
                .collect()
        })
        .collect();
    rows.push(vec![Rat::one(); vertices.len()]);
    let mut rhs: Vec<Rat> = p.to_vec();
    rhs.push(total.clone());
    let g = solve(&rows, &rhs)?;
    // `solve` returns some solution of a consistent system; for affinely
    // independent vertices it is the unique one, but the system may also be
    // inconsistent-free with p off the span, so check.
    for j in 0..d {
        let mut acc = Rat::zero();
        for (v, gi) in vertices.iter().zip(&g) {
            acc += gi * Rat::from_integer(v[j].clone());
        }
        if acc != p[j] {
            return None;
        }
    }
    Some(g)
}

fn to_rat_point(p: &[Int]) -> Vec<Rat> {
    p.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// All nonzero classes of the quotient lattice, enumerated as the lattice
/// points of the half-open edge parallelepiped based at the first vertex.
pub fn box_points(s: &OrderedSimplex) -> Vec<BoxPoint> {
    let d = s.dim();
    assert_eq!(s.vertices[0].len(), d, "box points need a full-dimensional simplex");
    let a0 = &s.vertices[0];
    // Edge vectors a_i - a_0: coordinates in this basis are the barycentric
    // coordinates of the non-base vertices.
    let steps: Vec<Vec<Int>> = s.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(a0).map(|(x, y)| x - y).collect())
        .collect();
    // Integer bounding box of the parallelepiped.
    let amb = a0.len();
    let mut lo = a0.clone();
    let mut hi = a0.clone();
    for st in &steps {
        for j in 0..amb {
            if st[j].is_negative() {
                lo[j] += &st[j];
            } else {
                hi[j] += &st[j];
            }
        }
    }
    let mut reps: Vec<(Vec<Rat>, Vec<Int>)> = Vec::new();
    let mut cursor = lo.clone();
    'outer: loop {
        // Solve for the parallelepiped coordinates of the cursor.
        let rows: Vec<Vec<Rat>> = (0..amb)
            .map(|j| steps.iter().map(|st| Rat::from_integer(st[j].clone())).collect())
            .collect();
        let rhs: Vec<Rat> = (0..amb)
            .map(|j| Rat::from_integer(&cursor[j] - &a0[j]))
            .collect();
        if let Some(lam) = solve(&rows, &rhs) {
            let consistent = (0..amb).all(|j| {
                let mut acc = Rat::zero();
                for (st, l) in steps.iter().zip(&lam) {
                    acc += l * Rat::from_integer(st[j].clone());
                }
                acc == rhs[j]
            });
            if consistent
                && lam.iter().all(|l| !l.is_negative() && *l < Rat::one())
            {
                reps.push((lam, cursor.clone()));
            }
        }
        // Advance the odometer over the bounding box.
        for j in 0..amb {
            cursor[j] += 1;
            if cursor[j] <= hi[j] {
                continue 'outer;
            }
            cursor[j] = lo[j].clone();
        }
        break;
    }
    let v: usize = s.volume.to_string().parse().expect("volume fits usize");
    assert_eq!(reps.len(), v, "parallelepiped must contain exactly V lattice points");
    let mut out: Vec<BoxPoint> = reps
        .into_iter()
        .filter(|(lam, _)| lam.iter().any(|l| !l.is_zero()))
        .map(|(lam, rep)| {
            let mut mu = vec![Rat::one() - lam.iter().sum::<Rat>()];
            mu.extend(lam);
            let fracs: Vec<Rat> = mu.iter().map(frac_part).collect();
            let height_rat: Rat = fracs.iter().sum();
            assert!(height_rat.is_integer(), "fractional parts must sum to an integer");
            let height = height_rat.to_integer();
            assert!(height >= Int::one(), "height must be positive");
            assert!(
                height <= Int::from(d as u32),
                "height bounded by the dimension at desk scale"
            );
            let carrier: Vec<usize> =
                (0..=d).filter(|&j| !fracs[j].is_zero()).collect();
            // Representative invariance: shifting by one edge step keeps the
            // fractional parts.
            let shifted: Vec<Rat> = rep
                .iter()
                .zip(&s.vertices[1])
                .zip(&s.vertices[0])
                .map(|((r, b), a)| Rat::from_integer(r + b - a))
                .collect();
            let verts: Vec<&Vec<Int>> = s.vertices.iter().collect();
            let mu2 = affine_coeffs(&verts, &shifted, &Rat::one())
                .expect("shifted representative stays in the span");
            let fracs2: Vec<Rat> = mu2.iter().map(frac_part).collect();
            assert_eq!(fracs, fracs2, "fractional parts depend only on the class");
            BoxPoint { rep, fracs, height, carrier }
        })
        .collect();
    out.sort_by(|x, y| (&x.height, &x.fracs).cmp(&(&y.height, &y.fracs)));
    out
}

/// Canonical form identifying equality of edge-step multisets together with
/// equality of the affine vertex lattices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AClassKey {
    /// Edge steps, sorted.
    pub steps: Vec<Vec<Int>>,
    /// First vertex reduced modulo the lattice spanned by the steps.
    pub anchor: Vec<Int>,
}

pub fn a_class_key(points: &[Vec<Int>], cell: &[usize]) -> AClassKey {
    let s = OrderedSimplex::from_cell(points, cell);
    let mut steps = s.steps();
    steps.sort();
    let amb = s.vertices[0].len();
    assert_eq!(steps.len(), amb, "class keys need full-dimensional cells");
    let rows: Vec<Vec<Rat>> = (0..amb)
        .map(|j| steps.iter().map(|st| Rat::from_integer(st[j].clone())).collect())
        .collect();
    let rhs: Vec<Rat> = s.vertices[0]
        .iter()
        .map(|x| Rat::from_integer(x.clone()))
        .collect();
    let x = solve(&rows, &rhs).expect("steps span the ambient space");
    let mut anchor = s.vertices[0].clone();
    for (st, xi) in steps.iter().zip(&x) {
        let f = xi.floor().to_integer();
        for j in 0..amb {
            anchor[j] -= &f * &st[j];
        }
    }
    AClassKey { steps, anchor }
}

/// One star to refine: the cells of an A-equivalence class together with the
/// box point (as computed on the first listed cell) whose carrier faces get
/// starred.
#[derive(Clone, Debug)]
pub struct StarTarget {
    pub cells: Vec<usize>,
    pub box_point: BoxPoint,
}

/// Two requested stars share a cell: refinement would not be well-defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarOverlap {
    pub faces: (Vec<usize>, Vec<usize>),
}

/// A carrier face scheduled for star refinement.
struct Carrier {
    /// Global vertex indices of the face, sorted.
    face: Vec<usize>,
    /// Fractional barycentric parts on the face, aligned with `face`.
    fracs: Vec<Rat>,
    /// Height of the class.
    height: Int,
    /// Parent cells whose vertex set contains the face.
    star: Vec<usize>,
}

/// Weight layers certifying a triangulation, for threading through a
/// dilation round.
fn parent_weights(t: &Triangulation) -> PullWeights {
    if t.cells.len() == 1 {
        return PullWeights {
            base: LayeredWeights::flat(t.config.len()),
            pulls: Vec::new(),
        };
    }
    match decide_regular(t) {
        Regularity::Regular(w) => PullWeights {
            base: LayeredWeights::single(w.0),
            pulls: Vec::new(),
        },
        Regularity::NotRegular(_) => {
            panic!("dilation requires a regular input triangulation")
        }
    }
}

/// All weak compositions of `total` into `parts` nonnegative integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Core of every dilation round: refine the `c`-th dilation of `t` by the
/// canonical layers, with star shells around the given carrier faces, all in
/// one certified regular-subdivision computation.
fn dilation_refine(
    t: &Triangulation,
    parent: &PullWeights,
    c: u32,
    targets: &[StarTarget],
) -> Result<(Triangulation, PullWeights, RegularityCertificate), StarOverlap> {
    assert!(c >= 1);
    let pts = &t.config.points;
    let cells = &t.cells;
    let k_dim = t.sub.dim();
    let c_int = Int::from(c);
    let c_rat = Rat::from_integer(c_int.clone());

    // Resolve targets into carrier faces with their stars.
    let mut carriers: Vec<Carrier> = Vec::new();
    for target in targets {
        for &ci in &target.cells {
            let verts: Vec<&Vec<Int>> = cells[ci].iter().map(|&i| &pts[i]).collect();
            let mu = affine_coeffs(&verts, &to_rat_point(&target.box_point.rep), &Rat::one())
                .expect("box representative lies in the cell's affine span");
            let fr: Vec<Rat> = mu.iter().map(frac_part).collect();
            let face: Vec<usize> = cells[ci]
                .iter()
                .zip(&fr)
                .filter(|(_, f)| !f.is_zero())
                .map(|(&v, _)| v)
                .collect();
            assert!(face.len() >= 2, "carrier of a nonzero class spans at least an edge");
            let fracs: Vec<Rat> = fr.into_iter().filter(|f| !f.is_zero()).collect();
            let height: Rat = fracs.iter().sum();
            assert!(height.is_integer());
            if let Some(existing) = carriers.iter().find(|cr| cr.face == face) {
                assert_eq!(existing.fracs, fracs, "carrier must determine the class data");
                continue;
            }
            assert_eq!(
                c % (face.len() as u32 - 1),
                0,
                "c must be a multiple of every carrier dimension"
            );
            let star: Vec<usize> = (0..cells.len())
                .filter(|&cj| face.iter().all(|v| cells[cj].contains(v)))
                .collect();
            carriers.push(Carrier { face, fracs, height: height.to_integer(), star });
        }
    }
    // Stars must be pairwise disjoint.
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (id, cr) in carriers.iter().enumerate() {
        for &cj in &cr.star {
            if let Some(&other) = owner.get(&cj) {
                return Err(StarOverlap {
                    faces: (carriers[other].face.clone(), cr.face.clone()),
                });
            }
            owner.insert(cj, id);
        }
    }

    // Collect the point set of the dilation: the integer-barycentric grid of
    // every cell, plus the class-shifted grid inside each star. Each point
    // remembers one home cell and its barycentric coordinates there (scaled
    // to sum to c).
    let mut seen: BTreeMap<Vec<Int>, (usize, Vec<Rat>)> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        for m in compositions(c, cell.len()) {
            let mut p = vec![Int::zero(); pts[cell[0]].len()];
            for (&v, &mi) in cell.iter().zip(&m) {
                for (pj, xj) in p.iter_mut().zip(&pts[v]) {
                    *pj += Int::from(mi) * xj;
                }
            }
            seen.entry(p).or_insert_with(|| {
                (ci, m.iter().map(|&mi| Rat::from_integer(Int::from(mi))).collect())
            });
        }
    }
    for cr in &carriers {
        let c0: u32 = cr.height.to_string().parse().expect("height fits u32");
        assert!(c0 < c, "dilation factor must exceed the class height");
        for &ci in &cr.star {
            let cell = &cells[ci];
            // Fractional offsets aligned with this cell's vertex list.
            let offs: Vec<Rat> = cell
                .iter()
                .map(|v| {
                    cr.face
                        .iter()
                        .position(|w| w == v)
                        .map_or_else(Rat::zero, |pos| cr.fracs[pos].clone())
                })
                .collect();
            for m in compositions(c - c0, cell.len()) {
                let bary: Vec<Rat> = offs
                    .iter()
                    .zip(&m)
                    .map(|(f, &mi)| f + Rat::from_integer(Int::from(mi)))
                    .collect();
                let mut p_rat = vec![Rat::zero(); pts[cell[0]].len()];
                for (&v, b) in cell.iter().zip(&bary) {
                    for (pj, xj) in p_rat.iter_mut().zip(&pts[v]) {
                        *pj += b * Rat::from_integer(xj.clone());
                    }
                }
                let p: Vec<Int> = p_rat
                    .iter()
                    .map(|x| {
                        assert!(x.is_integer(), "shifted shell points must be integral");
                        x.to_integer()
                    })
                    .collect();
                seen.entry(p).or_insert_with(|| (ci, bary.clone()));
            }
        }
    }

    // Global order: images of the parent configuration first (in parent
    // order), then the new points sorted by coordinates.
    let mut points: Vec<Vec<Int>> = Vec::with_capacity(seen.len());
    let mut taken: BTreeSet<Vec<Int>> = BTreeSet::new();
    for p in &t.config.points {
        let img: Vec<Int> = p.iter().map(|x| &c_int * x).collect();
        if seen.contains_key(&img) && taken.insert(img.clone()) {
            points.push(img);
        }
    }
    for p in seen.keys() {
        if !taken.contains(p) {
            points.push(p.clone());
        }
    }
    let home: Vec<(usize, Vec<Rat>)> = points.iter().map(|p| seen[p].clone()).collect();
    let n = points.len();

    // Threaded parent layers: interpolate every parent weight layer over the
    // dilated cells, reproducing the parent triangulation on the new points.
    let mut layers: Vec<Vec<Rat>> = Vec::new();
    for k in 0..parent.num_layers() {
        let vals: Vec<Rat> = (0..n)
            .map(|pi| {
                let (ci, bary) = &home[pi];
                let mut acc = Rat::zero();
                for (&v, b) in cells[*ci].iter().zip(bary) {
                    acc += b / &c_rat * parent.value(k, v);
                }
                acc
            })
            .collect();
        layers.push(vals);
    }

    // Shell layer: with r the minimum dilated barycentric coordinate over
    // the carrier positions (zero outside the stars), take the decreasing
    // convex profile r^2 - 2Rr, R beyond the maximal attainable r, so that
    // concentric shells of the star boundary become envelope breaks.
    if !carriers.is_empty() {
        let big_r = Rat::from_integer(&c_int + Int::one());
        let positions: BTreeMap<usize, Vec<usize>> = carriers
            .iter()
            .flat_map(|cr| {
                cr.star.iter().map(move |&cj| {
                    let pos: Vec<usize> = cr
                        .face
                        .iter()
                        .map(|v| cells[cj].iter().position(|w| w == v).unwrap())
                        .collect();
                    (cj, pos)
                })
            })
            .collect();
        let vals: Vec<Rat> = (0..n)
            .map(|pi| {
                let (ci, bary) = &home[pi];
                match positions.get(ci) {
                    None => Rat::zero(),
                    Some(pos) => {
                        let r = pos.iter().map(|&j| bary[j].clone()).min().unwrap();
                        &r * &r - Rat::from_integer(Int::from(2)) * &big_r * &r
                    }
                }
            })
            .collect();
        layers.push(vals);
    }

    // Canonical layers: for every cell and every proper consecutive run of
    // its vertices in the global order, dice by the complementary coordinate
    // sum at integer levels, via a strictly convex profile vanishing off the
    // run.
    let mut intervals: BTreeSet<(usize, usize)> = BTreeSet::new();
    for cell in cells {
        let k = cell.len() - 1;
        for a in 0..=k {
            for b in a..=k {
                if a == 0 && b == k {
                    continue;
                }
                intervals.insert((cell[a], cell[b]));
            }
        }
    }
    for (lo, hi) in intervals {
        let vals: Vec<Rat> = (0..n)
            .map(|pi| {
                let (ci, bary) = &home[pi];
                let mut phi = Rat::zero();
                for (&v, b) in cells[*ci].iter().zip(bary) {
                    if v < lo || v > hi {
                        phi += b / &c_rat;
                    }
                }
                let w = Rat::one() - phi;
                &w * &w
            })
            .collect();
        layers.push(vals);
    }

    let config = PointConfiguration::new(t.config.lattice.clone(), points);
    let base = LayeredWeights::new(layers.into_iter().map(crate::exact::RatVector).collect());
    let order: Vec<usize> = (0..n).collect();
    let (sub, w, cert, _) = pull_refine(&config, &base, &order);
    let tri = Triangulation::new(sub);

    // Volume bookkeeping: total volume scales by c^dim, star cells strictly
    // drop volume, and everything outside the stars is the plain canonical
    // dilation (c^dim children per cell, volumes preserved).
    let parent_vols: Vec<Int> =
        cells.iter().map(|cell| simplex_volume(pts, cell)).collect();
    let scale = c_int.pow(k_dim as u32);
    let total: Int = tri
        .cells
        .iter()
        .map(|cell| simplex_volume(&tri.config.points, cell))
        .sum();
    let parent_total: Int = parent_vols.iter().cloned().sum();
    assert_eq!(total, &scale * &parent_total, "volume must scale by c^dim");
    let mut child_count = vec![0usize; cells.len()];
    for cell in &tri.cells {
        let pi = cell
            .iter()
            .map(|&v| home[v].0)
            .find(|&ci| {
                cell.iter().all(|&v| {
                    let verts: Vec<&Vec<Int>> =
                        cells[ci].iter().map(|&i| &pts[i]).collect();
                    affine_coeffs(&verts, &to_rat_point(&tri.config.points[v]), &c_rat)
                        .is_some_and(|g| g.iter().all(|x| !x.is_negative()))
                })
            })
            .expect("every child lies in some parent cell");
        child_count[pi] += 1;
        let vol = simplex_volume(&tri.config.points, cell);
        if owner.contains_key(&pi) {
            assert!(vol < parent_vols[pi], "star cells must strictly drop volume");
        } else {
            assert_eq!(vol, parent_vols[pi], "canonical cells keep their volume");
        }
    }
    let bound = (k_dim + 1) * usize::try_from(&scale).unwrap_or(usize::MAX);
    for (ci, &cnt) in child_count.iter().enumerate() {
        assert!(cnt <= bound, "per-parent cell count bound exceeded");
        if !owner.contains_key(&ci) {
            assert_eq!(Int::from(cnt as u64), scale, "canonical dilation yields c^dim cells");
        }
    }
    Ok((tri, w, cert))
}

/// The canonical triangulation of the `c`-th dilation, with the layered
/// weights realizing it and their certificate.
pub fn canonical_dilation(
    t: &Triangulation,
    c: u32,
) -> (Triangulation, PullWeights, RegularityCertificate) {
    dilation_refine(t, &parent_weights(t), c, &[]).expect("no stars, no overlap")
}

/// Star refinement: canonical dilation away from the carriers, concentric
/// shells with the class-shifted copies inside each star.
pub fn star_refine(
    t: &Triangulation,
    targets: &[StarTarget],
    c: u32,
) -> Result<(Triangulation, PullWeights, RegularityCertificate), StarOverlap> {
    dilation_refine(t, &parent_weights(t), c, targets)
}

/// One dilation round's bookkeeping.
#[derive(Clone, Debug)]
pub struct RoundLog {
    pub class: AClassKey,
    pub box_point: BoxPoint,
    pub carriers: Vec<Vec<usize>>,
    /// Number of distinct classes at the maximal volume before the round.
    pub classes_at_max: usize,
    pub cells_before: usize,
    pub cells_after: usize,
    pub max_volume_before: Int,
    pub max_volume_after: Int,
}

/// The full run record of the driver: dilation factor and per-round stats.
#[derive(Clone, Debug, Default)]
pub struct DilationLog {
    pub c: u32,
    pub rounds: Vec<RoundLog>,
}

impl DilationLog {
    /// The exponent M: the final coordinates live in c^M times the input.
    pub fn exponent(&self) -> usize {
        self.rounds.len()
    }

    /// Line-oriented rendering: one line per round.
    pub fn render(&self) -> String {
        let mut out = format!("c {} rounds {}\n", self.c, self.rounds.len());
        for (i, r) in self.rounds.iter().enumerate() {
            out.push_str(&format!(
                "round {} class {:?} anchor {:?} cells {} -> {} max-volume {} -> {}\n",
                i + 1,
                r.class.steps,
                r.class.anchor,
                r.cells_before,
                r.cells_after,
                r.max_volume_before,
                r.max_volume_after,
            ));
        }
        out
    }
}

fn max_volume(t: &Triangulation) -> Int {
    t.cells
        .iter()
        .map(|cell| simplex_volume(&t.config.points, cell))
        .max()
        .expect("nonempty triangulation")
}

/// The inductive driver: repeatedly pick a maximal-volume A-class, one box
/// point, and star-refine the class's carriers inside the `c`-th dilation,
/// until every cell is unimodular. Coordinates are rescaled by `c` each
/// round; the log records the cumulative exponent.
pub fn kmw_driver(
    t: &Triangulation,
    c: u32,
    max_rounds: usize,
) -> Result<(Triangulation, PullWeights, RegularityCertificate, DilationLog), Box<DilationLog>> {
    let d = t.sub.dim();
    let fact: u32 = (1..=(d as u32 + 1)).product();
    assert!(c > 0 && c % fact == 0, "c must be a positive multiple of (d+1)!");
    let mut log = DilationLog { c, rounds: Vec::new() };
    let mut cur = t.clone();
    let mut weights = parent_weights(t);
    loop {
        let vols: Vec<Int> = cur
            .cells
            .iter()
            .map(|cell| simplex_volume(&cur.config.points, cell))
            .collect();
        let maxv = vols.iter().max().unwrap().clone();
        if maxv.is_one() {
            // Reproduce the certificate for the final (or already
            // unimodular) triangulation.
            let order: Vec<usize> = (0..cur.config.len()).collect();
            let (sub, w, cert, _) = pull_refine(&cur.config, &weights.base, &order);
            assert_eq!(sub.cells, cur.cells, "final pulling must leave cells unchanged");
            let tri = Triangulation::new(sub);
            return Ok((tri, w, cert, log));
        }
        if log.rounds.len() == max_rounds {
            return Err(Box::new(log));
        }
        // Group the maximal-volume cells by A-class; retire the smallest key.
        let mut classes: BTreeMap<AClassKey, Vec<usize>> = BTreeMap::new();
        for (ci, v) in vols.iter().enumerate() {
            if *v == maxv {
                classes
                    .entry(a_class_key(&cur.config.points, &cur.cells[ci]))
                    .or_default()
                    .push(ci);
            }
        }
        let classes_at_max = classes.len();
        let (key, class_cells) = classes.into_iter().next().unwrap();
        let simplex = OrderedSimplex::from_cell(&cur.config.points, &cur.cells[class_cells[0]]);
        let bp = box_points(&simplex).into_iter().next().expect("non-unimodular cell has a box point");
        let target = StarTarget { cells: class_cells, box_point: bp.clone() };
        let cells_before = cur.cells.len();
        let (next, w, _cert) = dilation_refine(&cur, &weights, c, &[target])
            .expect("carriers within one class have disjoint stars");
        let max_after = max_volume(&next);
        assert!(max_after <= maxv, "max volume must not increase");
        if classes_at_max == 1 {
            assert!(max_after < maxv, "retiring the last maximal class drops the max volume");
        }
        log.rounds.push(RoundLog {
            class: key,
            box_point: bp,
            carriers: Vec::new(),
            classes_at_max,
            cells_before,
            cells_after: next.cells.len(),
            max_volume_before: maxv,
            max_volume_after: max_after,
        });
        cur = next;
        weights = w;
    }
}

/// Precondition failure of the prime shortcut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeVolume {
    pub volume: Int,
}

fn is_prime(n: &Int) -> bool {
    let v: u64 = match n.to_string().parse() {
        Ok(v) => v,
        Err(_) => return false,
    };
    if v < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= v {
        if v % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// For prime maximal volume V, one simultaneous round (all volume-V classes
/// starred at once) retires every volume-V cell.
pub fn prime_shortcut(
    t: &Triangulation,
    c: u32,
) -> Result<(Triangulation, PullWeights, RegularityCertificate, DilationLog), CompositeVolume> {
    let d = t.sub.dim();
    let fact: u32 = (1..=(d as u32)).product();
    assert!(c > 0 && c % fact == 0, "c must be a positive multiple of d!");
    let maxv = max_volume(t);
    if !is_prime(&maxv) {
        return Err(CompositeVolume { volume: maxv });
    }
    let vols: Vec<Int> = t
        .cells
        .iter()
        .map(|cell| simplex_volume(&t.config.points, cell))
        .collect();
    let mut classes: BTreeMap<AClassKey, Vec<usize>> = BTreeMap::new();
    for (ci, v) in vols.iter().enumerate() {
        if *v == maxv {
            classes
                .entry(a_class_key(&t.config.points, &t.cells[ci]))
                .or_default()
                .push(ci);
        }
    }
    let classes_at_max = classes.len();
    let targets: Vec<StarTarget> = classes
        .iter()
        .map(|(_, cs)| {
            let simplex = OrderedSimplex::from_cell(&t.config.points, &t.cells[cs[0]]);
            let bp = box_points(&simplex).into_iter().next().expect("volume > 1");
            StarTarget { cells: cs.clone(), box_point: bp }
        })
        .collect();
    let cells_before = t.cells.len();
    let (tri, w, cert) = dilation_refine(t, &parent_weights(t), c, &targets)
        .expect("distinct prime-volume classes have disjoint stars");
    let max_after = max_volume(&tri);
    assert!(max_after < maxv, "the simultaneous round retires every maximal cell");
    let (key, _) = classes.iter().next().unwrap();
    let log = DilationLog {
        c,
        rounds: vec![RoundLog {
            class: key.clone(),
            box_point: targets[0].box_point.clone(),
            carriers: Vec::new(),
            classes_at_max,
            cells_before,
            cells_after: tri.cells.len(),
            max_volume_before: maxv,
            max_volume_after: max_after,
        }],
    };
    Ok((tri, w, cert, log))
}

fn factorial(n: u32) -> Int {
    (1..=n).map(Int::from).product()
}

/// The per-class round bound: sum over the input volumes V of
/// V! ((d+1)! c^d)^(V-1), evaluated exactly.
pub fn effective_bound(d: u32, volumes: &[u32], c: u32) -> Int {
    let base = factorial(d + 1) * Int::from(c).pow(d);
    volumes
        .iter()
        .map(|&v| {
            assert!(v >= 1);
            factorial(v) * base.pow(v - 1)
        })
        .sum()
}

/// The exponent of the headline bound d!^(vol! * d^(d^2 * vol)).
pub fn headline_exponent(d: u32, vol: u32) -> Int {
    factorial(vol) * Int::from(d).pow(d * d * vol)
}
