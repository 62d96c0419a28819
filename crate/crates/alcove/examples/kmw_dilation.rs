//! Dilate Reeve simplices until unimodular: the driver picks a
//! maximal-volume class, stars its box point's carrier, and refines one
//! certified regular subdivision per round.

use alcove::exact::Int;
use alcove::kmw::{box_points, effective_bound, kmw_driver, OrderedSimplex};
use alcove::polytope::{simplex_volume, Lattice, PointConfiguration};
use alcove::regular::verify_pull_certificate;
use alcove::subdivision::{Subdivision, Triangulation, Unimodularity};

fn reeve(q: i64) -> Triangulation {
    let pts = vec![
        vec![Int::from(0), Int::from(0), Int::from(0)],
        vec![Int::from(1), Int::from(0), Int::from(0)],
        vec![Int::from(0), Int::from(1), Int::from(0)],
        vec![Int::from(1), Int::from(1), Int::from(q)],
    ];
    let config = PointConfiguration::new(Lattice::standard(3), pts);
    Triangulation::new(Subdivision::new(config, vec![vec![0, 1, 2, 3]]))
}

fn main() {
    for q in [2i64, 3] {
        let t = reeve(q);
        let s = OrderedSimplex::from_cell(&t.config.points, &t.cells[0]);
        println!("reeve({q}): volume {}, box points:", s.volume);
        for bp in box_points(&s) {
            println!("  height {} fracs {:?} carrier {:?}", bp.height, bp.fracs, bp.carrier);
        }
        let start = std::time::Instant::now();
        match kmw_driver(&t, 24, 3) {
            Ok((tri, w, cert, log)) => {
                let maxv = tri
                    .cells
                    .iter()
                    .map(|c| simplex_volume(&tri.config.points, c))
                    .max()
                    .unwrap();
                println!(
                    "driver: M = {}, {} cells, max volume {}, unimodular: {}",
                    log.exponent(),
                    tri.cells.len(),
                    maxv,
                    tri.is_unimodular() == Unimodularity::Yes,
                );
                print!("{}", log.render());
                let verified = verify_pull_certificate(&tri.sub, &w, &cert).is_ok();
                println!("certificate verified: {verified}");
            }
            Err(log) => {
                println!("driver hit the round limit:");
                print!("{}", log.render());
            }
        }
        println!("elapsed: {:?}", start.elapsed());
        println!(
            "a-priori exponent bound for one volume-{q} simplex: {}",
            effective_bound(3, &[q as u32], 24)
        );
        println!();
    }
}
