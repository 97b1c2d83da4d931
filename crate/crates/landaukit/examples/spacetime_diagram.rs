//! Spacetime diagram: realize one term of a dressed triangle as a drawn
//! diagram with exact rational vertex positions, check that it closes (the
//! defining property of a stationarity solution), classify the extreme
//! vertices against the energy-flow constraint, and render GraphViz DOT.

use landaukit::diagrams::{
    build_diagram, check_closure, classify_vr_vl, emit_dot, matrix_loop_residuals, DiagramParams,
};
use landaukit::fixtures;
use landaukit::graphs::identity_sector;
use landaukit::kinematics::rat_vec;
use landaukit::rat::{rat, rat_i};
use landaukit::symbolic::denominators::build_denominator_set;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let tp = fixtures::symmetric_point();
    let sg = fixtures::fig6_star();
    let sector = identity_sector(2);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = DiagramParams::random(&sg, &sector, &mut rng);
    let ks = vec![
        rat_vec(rat(1, 300), rat(1, 400), rat_i(0), rat_i(0)),
        rat_vec(rat(1, 900), rat(-1, 800), rat_i(0), rat_i(0)),
    ];

    let d = build_diagram(&sg, &params, &tp, &ks).expect("signs consistent");
    println!(
        "{} vertices, {} segments; external positions:",
        d.vertices.len(),
        d.segments.len()
    );
    for v in d.vertices.iter().filter(|v| v.external.is_some()) {
        let p = &v.position;
        println!("  {}: ({}, {}, {}, {})", v.label, p.t, p.x, p.y, p.z);
    }

    // Generic multipliers do not close the triangle: the same defect shows
    // up identically as the diagram's momentum residual and as the
    // stationarity matrix contracted against the multipliers.
    let closure = check_closure(&d);
    println!("closed = {}", closure.closed);
    let ds = build_denominator_set(&sg, &sector, &tp.mass).expect("valid term");
    let (p_res, k_res) = matrix_loop_residuals(&ds, &params, &d.ps, &ks);
    assert_eq!(closure.p_residual, p_res);
    assert_eq!(closure.photon_residuals, k_res);
    println!(
        "diagram residual equals matrix contraction: p-loop ({}, {}, {}, {})",
        p_res.t, p_res.x, p_res.y, p_res.z
    );

    // The all-zero multipliers give the trivially closed point diagram.
    let trivial = build_diagram(&sg, &DiagramParams::zero(&sg, &sector), &tp, &ks).unwrap();
    assert!(check_closure(&trivial).closed);
    println!("zero multipliers close trivially");

    // Extreme-vertex classification: which vertex groups sit strictly
    // earliest/latest in time, whether they are external, and whether every
    // photon line respects energy flow.
    let cls = classify_vr_vl(&d);
    println!(
        "right-extreme vertices {:?}, left-extreme vertices {:?}, \
         extreme groups all external = {}, energy flow ok = {}",
        cls.v_r, cls.v_l, cls.condition7, cls.energy_flow_ok
    );

    let dot = emit_dot(&d);
    println!();
    println!("{dot}");
}
