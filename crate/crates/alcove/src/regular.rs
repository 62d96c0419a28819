//! Regular subdivisions from weights: layered (lexicographic) lower
//! envelopes, machine-checkable certificates, and exact regularity decision.

use crate::exact::hull::lower_facets;
use crate::exact::solve::{kernel_int, solve};
use crate::exact::{
    lin_feasible, to_rat_vec, Feasibility, InfeasCertificate, Int, LinCon, Rat, RatVector, Rel,
};
use crate::polytope::PointConfiguration;
use crate::subdivision::{Subdivision, Triangulation};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Weights as an ordered stack of layers compared lexicographically: layer
/// k+1 only matters where layer k is tied. This realizes infinitesimal
/// perturbations exactly, without a symbolic epsilon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredWeights {
    pub layers: Vec<RatVector>,
}

impl LayeredWeights {
    pub fn new(layers: Vec<RatVector>) -> Self {
        assert!(!layers.is_empty());
        let n = layers[0].len();
        assert!(layers.iter().all(|l| l.len() == n));
        LayeredWeights { layers }
    }

    /// A single ordinary weight vector.
    pub fn single(w: Vec<Rat>) -> Self {
        LayeredWeights { layers: vec![RatVector(w)] }
    }

    /// All-zero weights on `n` points (the trivial subdivision).
    pub fn flat(n: usize) -> Self {
        LayeredWeights { layers: vec![RatVector::zeros(n)] }
    }

    pub fn len(&self) -> usize {
        self.layers[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Append a refining layer.
    pub fn push(&mut self, layer: Vec<Rat>) {
        assert_eq!(layer.len(), self.len());
        self.layers.push(RatVector(layer));
    }

    /// The layer realizing a strong pull of point `m`: -1 at `m`, 0 elsewhere.
    pub fn pull_layer(n: usize, m: usize) -> Vec<Rat> {
        let mut l = vec![Rat::zero(); n];
        l[m] = -Rat::one();
        l
    }
}

/// Affine certificate data for one cell: per weight layer, an `(eta, zeta)`
/// functional witnessing the cell as a face of the lexicographic lower
/// envelope. Stored sparsely: layers without an entry certify with the zero
/// functional (slack = raw weight), which is what refinement produces for
/// layers vanishing on the cell. An entry with an empty `eta` means the zero
/// linear part with a nonzero constant.
#[derive(Clone, Debug)]
pub struct CellCert {
    pub num_layers: usize,
    /// `(layer index, eta, zeta)`, sorted by layer index.
    pub entries: Vec<(usize, Vec<Rat>, Rat)>,
}

impl CellCert {
    /// Slack of point `p` at layer `k`: `w_k(p) - (eta_k . p + zeta_k)`.
    pub fn slack(&self, k: usize, p: &[Int], w: &Rat) -> Rat {
        match self.entries.binary_search_by_key(&k, |e| e.0) {
            Ok(pos) => {
                let (_, eta, zeta) = &self.entries[pos];
                let mut v = w - zeta;
                for (c, x) in eta.iter().zip(p) {
                    v -= c * Rat::from_integer(x.clone());
                }
                v
            }
            Err(_) => w.clone(),
        }
    }
}

/// Per-cell certificates, parallel to a subdivision's cell list.
#[derive(Clone, Debug)]
pub struct RegularityCertificate {
    pub cells: Vec<CellCert>,
}

/// Whether the weights touch exactly the cell vertices (tight), with the
/// offending member points otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessFlag {
    pub tight: bool,
    pub witnesses: Vec<usize>,
}

/// A working cell of the refinement loop: member indices (sorted) plus the
/// sparse certificate entries accumulated so far.
struct WorkCell {
    members: Vec<usize>,
    entries: Vec<(usize, Vec<Rat>, Rat)>,
}

/// Refine every working cell by one weight layer, in place. Cells on which
/// the layer is constant pass through untouched (with a constant certificate
/// entry when that constant is nonzero); the rest go through the exact lower
/// envelope.
fn refine_by_layer(
    config: &PointConfiguration,
    work: &mut Vec<WorkCell>,
    k: usize,
    value: &dyn Fn(usize) -> Rat,
) {
    let mut out = Vec::with_capacity(work.len());
    for mut wc in work.drain(..) {
        let first = value(wc.members[0]);
        if wc.members[1..].iter().all(|&i| value(i) == first) {
            if !first.is_zero() {
                wc.entries.push((k, Vec::new(), first));
            }
            out.push(wc);
            continue;
        }
        let pts: Vec<Vec<Int>> =
            wc.members.iter().map(|&i| config.points[i].clone()).collect();
        let wts: Vec<Rat> = wc.members.iter().map(|&i| value(i)).collect();
        for cell in lower_facets(&pts, &wts) {
            let mut sub_members: Vec<usize> =
                cell.support.iter().map(|&r| wc.members[r]).collect();
            sub_members.sort_unstable();
            let mut entries = wc.entries.clone();
            entries.push((k, cell.eta, cell.zeta));
            out.push(WorkCell { members: sub_members, entries });
        }
    }
    *work = out;
}

/// Assemble the subdivision and aligned certificate from finished work cells.
fn collect_cells(
    config: &PointConfiguration,
    work: Vec<WorkCell>,
    num_layers: usize,
) -> (Subdivision, RegularityCertificate, TightnessFlag) {
    let certs_by_members: BTreeMap<Vec<usize>, Vec<(usize, Vec<Rat>, Rat)>> =
        work.into_iter().map(|wc| (wc.members, wc.entries)).collect();
    let members: Vec<Vec<usize>> = certs_by_members.keys().cloned().collect();
    let sub = Subdivision::from_members(config.clone(), members);
    let cert = RegularityCertificate {
        cells: sub
            .members
            .iter()
            .map(|m| CellCert { num_layers, entries: certs_by_members[m].clone() })
            .collect(),
    };
    let mut witnesses: Vec<usize> = sub
        .members
        .iter()
        .zip(&sub.cells)
        .flat_map(|(m, c)| m.iter().copied().filter(|i| !c.contains(i)))
        .collect();
    witnesses.sort_unstable();
    witnesses.dedup();
    let flag = TightnessFlag { tight: witnesses.is_empty(), witnesses };
    (sub, cert, flag)
}

/// The regular subdivision induced by layered weights, with its certificate.
pub fn regular_subdivision(
    config: &PointConfiguration,
    w: &LayeredWeights,
) -> (Subdivision, RegularityCertificate, TightnessFlag) {
    assert_eq!(w.len(), config.len());
    let n = config.len();
    let mut work = vec![WorkCell { members: (0..n).collect(), entries: Vec::new() }];
    for (k, layer) in w.layers.iter().enumerate() {
        refine_by_layer(config, &mut work, k, &|i| layer.0[i].clone());
    }
    let (sub, cert, flag) = collect_cells(config, work, w.layers.len());
    debug_assert!(verify_certificate(&sub, w, &cert).is_ok());
    (sub, cert, flag)
}

/// Layered weights followed by a pulling pass: one `-1`-at-`m` layer per
/// point of `order`, kept implicit so that weights and certificates stay
/// small even when every configuration point is pulled.
#[derive(Clone, Debug)]
pub struct PullWeights {
    pub base: LayeredWeights,
    /// Points pulled after the base layers, in refinement order.
    pub pulls: Vec<usize>,
}

impl PullWeights {
    pub fn num_layers(&self) -> usize {
        self.base.layers.len() + self.pulls.len()
    }

    /// The value of layer `k` at point `pi`.
    pub fn value(&self, k: usize, pi: usize) -> Rat {
        let nb = self.base.layers.len();
        if k < nb {
            self.base.layers[k].0[pi].clone()
        } else if self.pulls[k - nb] == pi {
            -Rat::one()
        } else {
            Rat::zero()
        }
    }
}

/// Refine by the base layers, then pull every point of `order` in turn.
/// Equivalent to `regular_subdivision` on the base plus one pull layer per
/// point, but pull layers only touch the (few) cells containing the pulled
/// point, so the pass stays near-linear in the number of cells.
pub fn pull_refine(
    config: &PointConfiguration,
    base: &LayeredWeights,
    order: &[usize],
) -> (Subdivision, PullWeights, RegularityCertificate, TightnessFlag) {
    assert_eq!(base.len(), config.len());
    let n = config.len();
    let mut work = vec![WorkCell { members: (0..n).collect(), entries: Vec::new() }];
    for (k, layer) in base.layers.iter().enumerate() {
        refine_by_layer(config, &mut work, k, &|i| layer.0[i].clone());
    }
    let nb = base.layers.len();
    for (j, &m) in order.iter().enumerate() {
        let k = nb + j;
        let mut out = Vec::with_capacity(work.len());
        for mut wc in work.drain(..) {
            if wc.members.binary_search(&m).is_err() {
                // The pull layer vanishes on this cell.
                out.push(wc);
                continue;
            }
            if wc.members.len() == 1 {
                wc.entries.push((k, Vec::new(), -Rat::one()));
                out.push(wc);
                continue;
            }
            let pts: Vec<Vec<Int>> =
                wc.members.iter().map(|&i| config.points[i].clone()).collect();
            let wts: Vec<Rat> = wc
                .members
                .iter()
                .map(|&i| if i == m { -Rat::one() } else { Rat::zero() })
                .collect();
            for cell in lower_facets(&pts, &wts) {
                let mut sub_members: Vec<usize> =
                    cell.support.iter().map(|&r| wc.members[r]).collect();
                sub_members.sort_unstable();
                let mut entries = wc.entries.clone();
                entries.push((k, cell.eta, cell.zeta));
                out.push(WorkCell { members: sub_members, entries });
            }
        }
        work = out;
    }
    let w = PullWeights { base: base.clone(), pulls: order.to_vec() };
    let (sub, cert, flag) = collect_cells(config, work, w.num_layers());
    debug_assert!(verify_pull_certificate(&sub, &w, &cert).is_ok());
    (sub, w, cert, flag)
}

/// A certificate check failure: the offending point and cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertViolation {
    pub point: usize,
    pub cell: usize,
}

/// Exact verification of a layered certificate against a subdivision: for
/// every cell and every configuration point, the first nonzero layer slack
/// must be positive, and all-zero slacks must happen exactly for the cell's
/// members.
pub fn verify_certificate(
    s: &Subdivision,
    w: &LayeredWeights,
    cert: &RegularityCertificate,
) -> Result<(), CertViolation> {
    let pw = PullWeights { base: w.clone(), pulls: Vec::new() };
    verify_pull_certificate(s, &pw, cert)
}

/// Exact verification against base-plus-pulls weights. Layers without a
/// certificate entry use the zero functional, so their slack at a point is
/// the raw layer value there; only the layers where either side is nonzero
/// need to be visited, which keeps verification fast for sparse data.
pub fn verify_pull_certificate(
    s: &Subdivision,
    w: &PullWeights,
    cert: &RegularityCertificate,
) -> Result<(), CertViolation> {
    assert_eq!(cert.cells.len(), s.cells.len(), "certificate/cell list mismatch");
    assert_eq!(w.base.len(), s.config.len());
    let layers = w.num_layers();
    let nb = w.base.layers.len();
    // Per point: sorted layer indices where the weight value is nonzero.
    let nonzero: Vec<Vec<usize>> = (0..s.config.len())
        .map(|pi| {
            let mut ks: Vec<usize> = (0..nb)
                .filter(|&k| !w.base.layers[k].0[pi].is_zero())
                .collect();
            ks.extend(
                w.pulls
                    .iter()
                    .enumerate()
                    .filter(|&(_, &m)| m == pi)
                    .map(|(j, _)| nb + j),
            );
            ks
        })
        .collect();
    for (ci, cc) in cert.cells.iter().enumerate() {
        assert_eq!(cc.num_layers, layers);
        for (pi, p) in s.config.points.iter().enumerate() {
            // Merge the cell's entry indices with the point's nonzero layers;
            // every other layer has slack exactly zero.
            let mut verdict = 0i8;
            let (mut a, mut b) = (0usize, 0usize);
            loop {
                let ka = cc.entries.get(a).map(|e| e.0);
                let kb = nonzero[pi].get(b).copied();
                let k = match (ka, kb) {
                    (None, None) => break,
                    (Some(x), None) => x,
                    (None, Some(y)) => y,
                    (Some(x), Some(y)) => x.min(y),
                };
                if ka == Some(k) {
                    a += 1;
                }
                if kb == Some(k) {
                    b += 1;
                }
                let slack = cc.slack(k, p, &w.value(k, pi));
                if slack.is_positive() {
                    verdict = 1;
                    break;
                }
                if slack.is_negative() {
                    verdict = -1;
                    break;
                }
            }
            let member = s.members[ci].contains(&pi);
            let ok = match verdict {
                0 => member,
                1 => !member,
                _ => false,
            };
            if !ok {
                return Err(CertViolation { point: pi, cell: ci });
            }
        }
    }
    Ok(())
}

/// Outcome of the exact regularity decision.
#[derive(Clone, Debug)]
pub enum Regularity {
    Regular(RatVector),
    NotRegular(InfeasCertificate),
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular(_))
    }
}

/// Decide whether a triangulation is regular: local convexity across every
/// interior wall (strict, via the wall circuit's affine dependence) plus
/// lower bounds keeping non-vertex points on or above each cell's affine
/// span. Delegates to exact linear feasibility.
pub fn decide_regular(t: &Triangulation) -> Regularity {
    let n = t.config.len();
    let pts = &t.config.points;
    let mut cons: Vec<LinCon> = Vec::new();
    // Interior walls: facets shared by exactly two cells.
    let mut by_facet: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in t.cells.iter().enumerate() {
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
    for (facet, owners) in &by_facet {
        if owners.len() != 2 {
            continue;
        }
        let p = *t.cells[owners[0]].iter().find(|v| !facet.contains(v)).unwrap();
        let q = *t.cells[owners[1]].iter().find(|v| !facet.contains(v)).unwrap();
        let mut idx = facet.clone();
        idx.push(p);
        idx.push(q);
        // Unique affine dependence on the wall circuit.
        let cols: Vec<Vec<Rat>> = (0..=pts[0].len())
            .map(|j| {
                idx.iter()
                    .map(|&i| {
                        if j < pts[0].len() {
                            Rat::from_integer(pts[i][j].clone())
                        } else {
                            Rat::one()
                        }
                    })
                    .collect()
            })
            .collect();
        let kernel = kernel_int(&cols);
        assert_eq!(kernel.len(), 1, "wall circuit must have a unique dependence");
        let mut lambda = kernel.into_iter().next().unwrap();
        let p_pos = idx.len() - 2;
        if lambda[p_pos].is_negative() {
            for x in lambda.iter_mut() {
                *x = -x.clone();
            }
        }
        assert!(
            lambda[idx.len() - 1].is_positive(),
            "opposite wall vertices must agree in dependence sign"
        );
        let mut coeffs = vec![Rat::zero(); n];
        for (&i, l) in idx.iter().zip(&lambda) {
            coeffs[i] += Rat::from_integer(l.clone());
        }
        cons.push(LinCon::new(coeffs, Rat::zero(), Rel::Gt));
    }
    // Non-vertex members must not dip below their cell's affine
    // interpolation.
    for (ci, cell) in t.cells.iter().enumerate() {
        for &m in &t.members[ci] {
            if cell.contains(&m) {
                continue;
            }
            // Barycentric coordinates of m in the cell.
            let cols: Vec<Vec<Rat>> = (0..=pts[0].len())
                .map(|j| {
                    cell.iter()
                        .map(|&i| {
                            if j < pts[0].len() {
                                Rat::from_integer(pts[i][j].clone())
                            } else {
                                Rat::one()
                            }
                        })
                        .collect()
                })
                .collect();
            let mut rhs = to_rat_vec(&pts[m]);
            rhs.push(Rat::one());
            let bary = solve(&cols, &rhs).expect("member must lie in cell span");
            let mut coeffs = vec![Rat::zero(); n];
            coeffs[m] = Rat::one();
            for (&i, b) in cell.iter().zip(&bary) {
                coeffs[i] -= b;
            }
            cons.push(LinCon::new(coeffs, Rat::zero(), Rel::Ge));
        }
    }
    match lin_feasible(&cons) {
        Feasibility::Feasible(w) => Regularity::Regular(w),
        Feasibility::Infeasible(c) => Regularity::NotRegular(c),
    }
}

/// One row of the twisted-cubic weight scan.
#[derive(Clone, Debug)]
pub struct TwistedRow {
    /// Sample values of `(w1 - 2 w2 + w3, w4 - 2 w3 + w2)`.
    pub lambda: (Rat, Rat),
    /// Cells of the resulting subdivision, as 1-based segment endpoints.
    pub cells: Vec<Vec<usize>>,
}

/// Scan the eight sign regions of the weight space for the segment
/// configuration {1, 2, 3, 4}: the subdivision depends only on the signs of
/// the two circuit values.
pub fn twisted_cubic_scan() -> Vec<TwistedRow> {
    let config = PointConfiguration::new(
        crate::polytope::Lattice::standard(1),
        vec![
            vec![Int::from(1)],
            vec![Int::from(2)],
            vec![Int::from(3)],
            vec![Int::from(4)],
        ],
    );
    // One generic sample (lambda1, lambda4) per region.
    let samples: [(i64, i64); 8] = [
        (1, 1),   // l1 > 0, l4 > 0
        (-1, 3),  // l1 < 0, 2 l1 + l4 > 0
        (-3, 2),  // l1 + 2 l4 > 0, 2 l1 + l4 < 0
        (-5, 2),  // l1 + 2 l4 < 0, l4 > 0
        (-1, -1), // l1 < 0, l4 < 0
        (1, -3),  // l1 > 0, 2 l1 + l4 < 0
        (3, -2),  // l1 + 2 l4 < 0, 2 l1 + l4 > 0
        (5, -2),  // l1 + 2 l4 > 0, l4 < 0
    ];
    samples
        .iter()
        .map(|&(l1, l4)| {
            // With w2 = w3 = 0 the circuit values are just w1 and w4.
            let w = LayeredWeights::single(vec![
                Rat::from_integer(Int::from(l1)),
                Rat::zero(),
                Rat::zero(),
                Rat::from_integer(Int::from(l4)),
            ]);
            let (sub, _, _) = regular_subdivision(&config, &w);
            let cells: Vec<Vec<usize>> = sub
                .cells
                .iter()
                .map(|c| c.iter().map(|&i| i + 1).collect())
                .collect();
            TwistedRow {
                lambda: (
                    Rat::from_integer(Int::from(l1)),
                    Rat::from_integer(Int::from(l4)),
                ),
                cells,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ivec, rat, rvec};
    use crate::polytope::Lattice;

    fn config(rows: &[&[i64]]) -> PointConfiguration {
        let pts: Vec<Vec<Int>> = rows.iter().map(|r| ivec(r)).collect();
        PointConfiguration::new(Lattice::standard(pts[0].len()), pts)
    }

    fn segment4() -> PointConfiguration {
        config(&[&[1], &[2], &[3], &[4]])
    }

    #[test]
    fn segment_weights_basic() {
        // Weights (0,0,0,1): cells [1,3] and [3,4], point 2 a non-vertex
        // member of the first cell.
        let c = segment4();
        let (sub, cert, tight) =
            regular_subdivision(&c, &LayeredWeights::single(rvec(&[0, 0, 0, 1])));
        assert_eq!(sub.cells, vec![vec![0, 2], vec![2, 3]]);
        assert_eq!(sub.members, vec![vec![0, 1, 2], vec![2, 3]]);
        assert!(!tight.tight);
        assert_eq!(tight.witnesses, vec![1]);
        assert_eq!(verify_certificate(&sub, &LayeredWeights::single(rvec(&[0, 0, 0, 1])), &cert), Ok(()));
    }

    #[test]
    fn segment_weights_lifted_interior() {
        // Weights (0,1,0,1): same cells, but point 2 lifted strictly above.
        let c = segment4();
        let (sub, _, tight) =
            regular_subdivision(&c, &LayeredWeights::single(rvec(&[0, 1, 0, 1])));
        assert_eq!(sub.cells, vec![vec![0, 2], vec![2, 3]]);
        assert_eq!(sub.members, vec![vec![0, 2], vec![2, 3]]);
        assert!(tight.tight);
    }

    #[test]
    fn constant_weights_trivial() {
        let c = segment4();
        let (sub, _, _) = regular_subdivision(&c, &LayeredWeights::flat(4));
        assert_eq!(sub.cells.len(), 1);
        assert_eq!(sub.members, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn layered_refinement() {
        // First layer splits the square diagonally; second layer pulls a
        // midpoint of the configuration... here: splits each half further on
        // a 2x1 strip.
        let c = config(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[2, 1]]);
        let mut w = LayeredWeights::single(rvec(&[0, 0, 2, 0, 0, 2]));
        let (sub, _, _) = regular_subdivision(&c, &w);
        assert_eq!(sub.cells.len(), 2);
        w.push(rvec(&[0, -1, 0, 0, 0, 0]));
        let (sub2, cert2, _) = regular_subdivision(&c, &w);
        assert!(sub2.cells.len() > 2);
        assert_eq!(verify_certificate(&sub2, &w, &cert2), Ok(()));
        // Refinement: every new cell sits inside an old one (by members).
        for m2 in &sub2.members {
            assert!(sub.members.iter().any(|m1| m2.iter().all(|i| m1.contains(i))));
        }
    }

    #[test]
    fn perturbed_certificate_fails() {
        let c = segment4();
        let w = LayeredWeights::single(rvec(&[0, 0, 0, 1]));
        let (sub, mut cert, _) = regular_subdivision(&c, &w);
        cert.cells[0].entries[0].2 += rat(1, 1);
        assert!(verify_certificate(&sub, &w, &cert).is_err());
    }

    #[test]
    fn decide_regular_roundtrip() {
        let c = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let w = LayeredWeights::single(rvec(&[0, 0, 0, 1]));
        let (sub, _, _) = regular_subdivision(&c, &w);
        let t = Triangulation::new(sub);
        match decide_regular(&t) {
            Regularity::Regular(wits) => {
                let (sub2, _, _) = regular_subdivision(&c, &LayeredWeights::single(wits.0));
                assert_eq!(sub2.cells, t.cells);
            }
            Regularity::NotRegular(_) => panic!("expected regular"),
        }
    }

    #[test]
    fn mother_of_all_examples_not_regular() {
        // The classical non-regular triangulation: nested triangles with a
        // twist.
        let c = config(&[
            &[0, 0],
            &[4, 0],
            &[0, 4],
            &[1, 1],
            &[2, 1],
            &[1, 2],
        ]);
        let cells = vec![
            vec![0, 1, 4],
            vec![0, 3, 4],
            vec![1, 2, 5],
            vec![1, 4, 5],
            vec![0, 2, 3],
            vec![2, 3, 5],
            vec![3, 4, 5],
        ];
        let t = Triangulation::new(Subdivision::new(c, cells));
        assert_eq!(t.sub.validate(), Ok(()));
        match decide_regular(&t) {
            Regularity::NotRegular(_) => {}
            Regularity::Regular(_) => panic!("expected non-regular"),
        }
    }

    #[test]
    fn pulling_as_weight_layer() {
        // Appending a -1-at-m layer triangulates the square through m.
        let c = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let mut w = LayeredWeights::flat(4);
        w.push(LayeredWeights::pull_layer(4, 0));
        let (sub, cert, _) = regular_subdivision(&c, &w);
        assert_eq!(sub.cells, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert_eq!(verify_certificate(&sub, &w, &cert), Ok(()));
    }

    #[test]
    fn pull_refine_matches_dense_pull_layers() {
        // Pulling every point of a 2x2 grid square via the implicit pass
        // agrees with spelling the pull layers out densely.
        let c = config(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[2, 1]]);
        let base = LayeredWeights::flat(6);
        let (sub, w, cert, _) = pull_refine(&c, &base, &[0, 1, 2, 3, 4, 5]);
        let mut dense = LayeredWeights::flat(6);
        for m in 0..6 {
            dense.push(LayeredWeights::pull_layer(6, m));
        }
        let (sub2, _, _) = regular_subdivision(&c, &dense);
        assert_eq!(sub.cells, sub2.cells);
        assert_eq!(sub.members, sub2.members);
        assert_eq!(verify_pull_certificate(&sub, &w, &cert), Ok(()));
        assert_eq!(w.num_layers(), 7);
    }

    #[test]
    fn twisted_cubic_table() {
        let rows = twisted_cubic_scan();
        let expect: [&[&[usize]]; 8] = [
            &[&[1, 2], &[2, 3], &[3, 4]],
            &[&[1, 3], &[3, 4]],
            &[&[1, 3], &[3, 4]],
            &[&[1, 4]],
            &[&[1, 4]],
            &[&[1, 4]],
            &[&[1, 2], &[2, 4]],
            &[&[1, 2], &[2, 4]],
        ];
        assert_eq!(rows.len(), 8);
        for (row, exp) in rows.iter().zip(expect) {
            let want: Vec<Vec<usize>> = exp.iter().map(|c| c.to_vec()).collect();
            assert_eq!(row.cells, want, "region {:?}", row.lambda);
        }
    }
}
