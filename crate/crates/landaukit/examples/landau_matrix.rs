//! Landau matrix: build the denominator set for one term of the one-photon
//! dressed triangle, print the stationarity matrix over the direction,
//! radial, and external-momentum blocks, and restrict it to a boundary
//! stratum where the leading radial coordinate vanishes.

use landaukit::fixtures;
use landaukit::graphs::{enumerate_star_graphs, identity_sector};
use landaukit::radial::SectorPoint;
use landaukit::rat::{rat, rat_i};
use landaukit::symbolic::denominators::build_denominator_set;
use landaukit::symbolic::landau::{landau_matrix, to_k_form};

fn main() {
    let g = fixtures::fig2();
    let stars = enumerate_star_graphs(&g);
    let sg = &stars[0];
    let sector = identity_sector(g.n);
    let mass = rat_i(1);

    let ds = build_denominator_set(sg, &sector, &mass).expect("valid term");
    println!("term {:?}: {} denominator rows", sg.stars, ds.entries.len());
    for den in &ds.entries {
        println!("  {:<16} {}", den.label(), den.f);
    }

    let lm = landau_matrix(&ds);
    println!();
    println!("{}", lm.render());

    // Rewriting (r, Omega) back as momentum variables gives each row as a
    // polynomial form in the photon momenta; rows that lose every momentum
    // dependence are listed as omitted.
    let sp = SectorPoint {
        pi: sector.clone(),
        r: vec![rat(1, 200)],
        omega: vec![landaukit::kinematics::rat_vec(
            rat_i(0),
            rat_i(1),
            rat_i(0),
            rat_i(0),
        )],
        delta: rat(1, 100),
    };
    let kf = to_k_form(&lm, &sp).expect("interior point");
    println!("momentum forms at an interior point:");
    println!("{}", kf.render());

    // On the face where the leading radius vanishes every photon momentum is
    // zero and no momentum form survives; the restriction reports that
    // instead of fabricating forms.
    let boundary = SectorPoint {
        r: vec![rat_i(0)],
        ..sp
    };
    assert!(to_k_form(&lm, &boundary).is_err());
    println!("leading face r1 = 0: no momentum forms remain (skipped)");
}
