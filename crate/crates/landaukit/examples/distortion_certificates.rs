//! Distortion certificates: evaluate the stationarity matrix at an exact
//! chart point, collect the active rows into a strict/equality system, and
//! decide it with an exact certificate either way. Both answers carry a
//! witness that is re-verified by dot products alone.

use landaukit::feasibility::{
    evaluate_active_system, farkas_decide, verify_certificate, ActiveSystem, Certificate,
};
use landaukit::fixtures;
use landaukit::graphs::{enumerate_star_graphs, identity_sector};
use landaukit::radial::{lightlike_near_unit, SectorPoint};
use landaukit::rat::{rat, rat_i, Rat};
use landaukit::symbolic::denominators::build_denominator_set;
use landaukit::symbolic::landau::landau_matrix;
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let tp = fixtures::symmetric_point();
    let g = fixtures::fig2();
    let sg = &enumerate_star_graphs(&g)[0];
    let sector = identity_sector(g.n);
    let ds = build_denominator_set(sg, &sector, &tp.mass).expect("valid term");
    let lm = landau_matrix(&ds);

    // A light-cone direction activates the photon row with f = 0 exactly.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sp = SectorPoint {
        pi: sector.clone(),
        r: vec![rat(1, 200)],
        omega: vec![lightlike_near_unit(&mut rng)],
        delta: rat(1, 100),
    };
    let eps = Rat::new(1.into(), 1_000_000_000u64.into());
    let sys = evaluate_active_system(&ds, &lm, &tp, &sp, &eps).expect("rational point");
    println!(
        "active rows {:?}: {} strict demand(s), {} equality row(s)",
        sys.active_set,
        sys.eta.len(),
        sys.lambda.len()
    );

    let cert = farkas_decide(&sys);
    verify_certificate(&sys, &cert).expect("witness re-checks");
    match &cert {
        Certificate::Distortion { delta, margin } => {
            println!("distortion found, margin {margin}");
            // The shift moves every active i0-carrying row strictly inward
            // while staying on the equality variety to first order.
            for (row, eta) in sys.eta_rows.iter().zip(&sys.eta) {
                let push: Rat = eta.iter().zip(delta).map(|(a, b)| a * b).sum();
                println!("  row {row}: eta . delta = {push} > 0");
                assert!(push > Rat::zero());
            }
        }
        Certificate::LandauSolution { .. } => println!("landau solution found"),
    }

    // The opposite outcome, on a synthetic system whose two demands point in
    // opposite directions: no shift satisfies both, and the certificate is a
    // nonnegative combination annihilating every coordinate.
    let stuck = ActiveSystem {
        n: 1,
        eta: vec![
            vec![rat_i(1), rat_i(0), rat_i(0), rat_i(0)],
            vec![rat_i(-1), rat_i(0), rat_i(0), rat_i(0)],
        ],
        lambda: vec![],
        active_set: vec![0, 1],
        eta_rows: vec![0, 1],
        lambda_rows: vec![],
        values: vec![Rat::zero(), Rat::zero()],
    };
    let cert = farkas_decide(&stuck);
    verify_certificate(&stuck, &cert).expect("witness re-checks");
    match &cert {
        Certificate::LandauSolution { alpha, .. } => {
            let shown: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
            println!("opposed demands: landau solution with alpha = {shown:?}");
            assert!(alpha.iter().any(|a| a > &Rat::zero()));
        }
        Certificate::Distortion { .. } => unreachable!("opposed demands admit no shift"),
    }
}
