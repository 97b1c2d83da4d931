//! Nested radial coordinates: order soft momenta by decreasing Euclidean
//! size, peel each off as (scale, unit direction) relative to the previous
//! shell, reconstruct exactly, and step onto boundary strata.

use landaukit::kinematics::rat_vec;
use landaukit::radial::{
    boundary_point, exact_unit_vector, from_nested, pythagorean_vector, to_nested,
};
use landaukit::rat::{rat, rat_to_f64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let delta = rat(1, 100);

    // Pythagorean four-vectors have exactly rational Euclidean norms, so the
    // whole chart is exact: no radicals, no rounding.
    let (k_big, norm_big) = pythagorean_vector(&mut rng, &rat(1, 200));
    let (k_small, norm_small) = pythagorean_vector(&mut rng, &(&norm_big / rat(7, 2)));
    println!("|k_a| = {norm_big}, |k_b| = {norm_small}");

    let ks = vec![k_small.clone(), k_big.clone()];
    let sp = to_nested(&ks, &delta).expect("inside the soft region");
    println!("permutation (depth -> input index): {:?}", sp.pi);
    for (d, (r, om)) in sp.r.iter().zip(&sp.omega).enumerate() {
        println!(
            "  depth {}: r = {} (~{:.4}), omega = ({}, {}, {}, {})",
            d + 1,
            r,
            rat_to_f64(r),
            om.t,
            om.x,
            om.y,
            om.z
        );
    }

    // Reconstruction is exact equality, not approximate.
    let back = from_nested(&sp);
    assert_eq!(back, ks);
    println!("round trip: exact");

    // Unit directions sampled through the rational parametrization of the
    // sphere stay on it exactly.
    let om = exact_unit_vector(&mut rng);
    let norm: landaukit::rat::Rat = om.comps().iter().map(|c| *c * *c).sum();
    assert_eq!(norm, rat(1, 1));
    println!(
        "sampled unit direction: ({}, {}, {}, {})",
        om.t, om.x, om.y, om.z
    );

    // A boundary stratum zeroes one radial coordinate; every deeper momentum
    // collapses with it while the shallower ones survive.
    let bp = boundary_point(&sp, 2).expect("stratum 2 exists");
    let collapsed = from_nested(&bp);
    assert!(collapsed.iter().any(|k| k.is_zero()));
    println!(
        "stratum r2 = 0: momenta collapse to {:?}",
        collapsed
            .iter()
            .map(|k| if k.is_zero() { "0" } else { "nonzero" })
            .collect::<Vec<_>>()
    );

    // Scales are relative: r1 bounds the largest momentum by delta, each
    // later r is the ratio of consecutive shell sizes in (0, 1].
    let sp2 = to_nested(
        &[
            rat_vec(rat(3, 1000), rat(4, 1000), rat(0, 1), rat(0, 1)),
            rat_vec(rat(3, 2000), rat(4, 2000), rat(0, 1), rat(0, 1)),
        ],
        &delta,
    )
    .expect("inside the soft region");
    assert_eq!(sp2.r[1], rat(1, 2));
    println!("half-size second shell gives r2 = {}", sp2.r[1]);
}
