//! Exact triangle kinematics: construct an on-shell momentum configuration
//! for the three charged sides from rational hyperbola points, verify the
//! interior conditions (timelike sides, pairwise nonproportional), and show
//! the exact shift-exclusion bound used by the contraction derivation.

use landaukit::diagrams::cascade::{default_delta_prime, small_shift_excluded};
use landaukit::fixtures;
use landaukit::kinematics::{
    construct_triangle_point, minkowski_dot, verify_interior, HyperbolaPoint,
};
use landaukit::rat::{rat, rat_i};

fn main() {
    // Rational points on t^2 - x^2 = 1 parametrize exact mass shells: p1 and
    // p3 come straight from them, and p2 closes the weighted loop
    // a1 p1 + a2 p2 + a3 p3 = 0 with all weights positive.
    let h1 = HyperbolaPoint::new(rat(5, 4), rat(3, 4)).expect("on the unit hyperbola");
    let h3 = HyperbolaPoint::new(rat(5, 4), rat(-3, 4)).expect("on the unit hyperbola");
    let tp = construct_triangle_point(&rat_i(1), &rat_i(1), &h1, &h3, &rat_i(1))
        .expect("valid triangle");
    verify_interior(&tp).expect("interior configuration");
    let ps = tp.rational_momenta().expect("rational components");
    for (i, p) in ps.iter().enumerate() {
        println!(
            "p{} = ({}, {}, {}, {}), p.p = {}",
            i + 1,
            p.t,
            p.x,
            p.y,
            p.z,
            minkowski_dot(p, p)
        );
    }

    // Momentum conservation around the triangle: the three side momenta
    // differ by the external insertions, and each is exactly on shell.
    for p in &ps {
        assert_eq!(minkowski_dot(p, p), &tp.mass * &tp.mass);
    }

    // The standard fixture is this same configuration.
    let fixture = fixtures::symmetric_point();
    assert_eq!(fixture.rational_momenta().unwrap(), ps);

    // Exact exclusion radius: any causal shift K with 0 < |K| <= delta'
    // leaves 2 p.K + K^2 nonzero, so no charged segment can absorb it.
    let dp = default_delta_prime(&tp.mass);
    println!("default shift radius delta' = {dp}");
    for p in &ps {
        assert!(small_shift_excluded(p, &tp.mass, &dp));
    }
    // The bound is sharp in the energy: radius m^2 / (2 |p0|) passes, and
    // anything larger is rejected.
    let p0 = rat(5, 4);
    let sharp = &tp.mass * &tp.mass / (rat_i(2) * &p0);
    assert!(small_shift_excluded(&ps[0], &tp.mass, &sharp));
    assert!(!small_shift_excluded(&ps[0], &tp.mass, &(&sharp + rat(1, 1000))));
    println!("sharp radius for p1: {sharp}");
}
