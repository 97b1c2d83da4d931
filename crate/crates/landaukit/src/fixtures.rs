//! Built-in graph catalog used by tests, examples, and the report pipeline.
//!
//! Naming: `fig2` is the one-photon dressed triangle (photon from side 1 to
//! side 2 across v2); `fig3('a'..='d')` are its four star graphs; `fig6` is
//! the separable two-photon dressing; `fig11` the nonseparable one (one
//! photon confined to side 1). The zig-zag and vertex-coupling fixtures are
//! adversarial inputs for the contraction checks.

use crate::graphs::{
    Anchor, DressedGraph, ExtVertex, GraphSpec, PhotonSpec, PosRef, RouteHint, Side, StarGraph,
};
use crate::kinematics::{construct_triangle_point, HyperbolaPoint, TrianglePoint};
use crate::rat::{rat, rat_i};
use std::collections::BTreeMap;

fn side(side: Side, pos: usize) -> Anchor {
    Anchor::Side(PosRef { side, pos })
}

fn photon(a: Anchor, b: Anchor) -> PhotonSpec {
    PhotonSpec { ends: [a, b] }
}

fn build(photons: Vec<PhotonSpec>) -> DressedGraph {
    DressedGraph::build(&GraphSpec {
        photons,
        routes: BTreeMap::new(),
    })
    .expect("fixture graph is valid")
}

/// One photon from side 1 (position 0) to side 2 (position 0); its loop
/// returns across v2. Side 1 segments carry [k, 0], side 2 [0, k].
pub fn fig2_spec() -> GraphSpec {
    GraphSpec {
        photons: vec![photon(side(Side::S1, 0), side(Side::S2, 0))],
        routes: BTreeMap::new(),
    }
}

pub fn fig2() -> DressedGraph {
    DressedGraph::build(&fig2_spec()).expect("fixture graph is valid")
}

/// The four star graphs of `fig2`, labeled by which side-1/side-2 segments
/// are starred: (a) both dressed segments, (b) side-1 bare / side-2 dressed,
/// (c) side-1 dressed / side-2 bare, (d) both bare segments.
pub fn fig3(which: char) -> StarGraph {
    let stars = match which {
        'a' => [0, 1, 0],
        'b' => [1, 1, 0],
        'c' => [0, 0, 0],
        'd' => [1, 0, 0],
        _ => panic!("fig3 variant must be a..d"),
    };
    StarGraph {
        graph: fig2(),
        stars,
    }
}

/// Two photons from side 1 to side 2, nested across v2 (separable dressing).
/// Side 1 segments carry [k1+k2, k1, 0]; side 2 carries [0, k2, k1+k2].
pub fn fig6_spec() -> GraphSpec {
    GraphSpec {
        photons: vec![
            photon(side(Side::S1, 1), side(Side::S2, 1)),
            photon(side(Side::S1, 0), side(Side::S2, 0)),
        ],
        routes: BTreeMap::new(),
    }
}

pub fn fig6() -> DressedGraph {
    DressedGraph::build(&fig6_spec()).expect("fixture graph is valid")
}

/// Star choice with both bare segments starred (the term whose matrix the
/// golden tests pin down).
pub fn fig6_star() -> StarGraph {
    StarGraph {
        graph: fig6(),
        stars: [2, 0, 0],
    }
}

/// Photon 1 confined to side 1 (positions 0-2), photon 2 from side 1
/// (position 1) to side 2 across v2 (nonseparable dressing). Side 1 carries
/// [k2, k1+k2, k1, 0]; side 2 carries [0, k2].
pub fn fig11_spec() -> GraphSpec {
    GraphSpec {
        photons: vec![
            photon(side(Side::S1, 0), side(Side::S1, 2)),
            photon(side(Side::S1, 1), side(Side::S2, 0)),
        ],
        routes: BTreeMap::new(),
    }
}

pub fn fig11() -> DressedGraph {
    DressedGraph::build(&fig11_spec()).expect("fixture graph is valid")
}

/// Star choice starring side-1 segment 2 (carrying k1), the bare side-2
/// segment, and side 3.
pub fn fig11_star() -> StarGraph {
    StarGraph {
        graph: fig11(),
        stars: [2, 0, 0],
    }
}

/// Single photon joining external vertices v1 and v3 directly: the shortest
/// zig-zag path.
pub fn zigzag_direct() -> DressedGraph {
    build(vec![photon(
        Anchor::Vertex(ExtVertex::V1),
        Anchor::Vertex(ExtVertex::V3),
    )])
}

/// Two photons sharing a side-2 coupling, joining v1 to v3 through it: a
/// length-two zig-zag path.
pub fn zigzag_chain() -> DressedGraph {
    build(vec![
        photon(Anchor::Vertex(ExtVertex::V1), side(Side::S2, 0)),
        photon(side(Side::S2, 0), Anchor::Vertex(ExtVertex::V3)),
    ])
}

/// Photon from the external vertex v2 to side 2: the v2 end is normalized to
/// side-1 position 0 with a contracted boundary segment.
pub fn c_coupling() -> DressedGraph {
    build(vec![photon(
        Anchor::Vertex(ExtVertex::V2),
        side(Side::S2, 0),
    )])
}

/// `fig2` with an explicit route override forcing the loop the long way
/// around (past v1 and v3): rejected with NoValidRouting.
pub fn bad_route_spec() -> GraphSpec {
    let mut routes = BTreeMap::new();
    routes.insert(
        0usize,
        RouteHint(
            [ExtVertex::V1, ExtVertex::V3].into_iter().collect(),
        ),
    );
    GraphSpec {
        photons: vec![photon(side(Side::S1, 0), side(Side::S2, 0))],
        routes,
    }
}

/// Photon with both couplings adjacent on side 1: a self-energy insertion,
/// rejected at validation.
pub fn self_energy_spec() -> GraphSpec {
    GraphSpec {
        photons: vec![photon(side(Side::S1, 0), side(Side::S1, 1))],
        routes: BTreeMap::new(),
    }
}

/// Interior triangle point with rational momenta: p1 = m(5/4, 3/4, 0, 0),
/// p3 = m(5/4, -3/4, 0, 0), p2 = -(m, 0, 0, 0) scaled by mass m = 1, with
/// multipliers (1, 5/2, 1).
pub fn symmetric_point() -> TrianglePoint {
    construct_triangle_point(
        &rat_i(1),
        &rat_i(1),
        &HyperbolaPoint::new(rat(5, 4), rat(3, 4)).expect("on hyperbola"),
        &HyperbolaPoint::new(rat(5, 4), rat(-3, 4)).expect("on hyperbola"),
        &rat_i(1),
    )
    .expect("interior point")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{DressedGraph, GraphError};

    #[test]
    fn catalog_builds() {
        for g in [fig2(), fig6(), fig11(), zigzag_direct(), zigzag_chain(), c_coupling()] {
            assert!(g.n >= 1);
            for lp in &g.loops {
                assert!(lp.vertices.len() <= 1);
                assert!(lp.sides.len() <= 2);
            }
        }
    }

    #[test]
    fn fig6_k_sets() {
        let g = fig6();
        let names = |s: usize, i: usize| -> Vec<usize> {
            g.k_sets[s][i].iter().map(|p| p + 1).collect()
        };
        assert_eq!(names(0, 0), vec![1, 2]);
        assert_eq!(names(0, 1), vec![1]);
        assert_eq!(names(0, 2), Vec::<usize>::new());
        assert_eq!(names(1, 0), Vec::<usize>::new());
        assert_eq!(names(1, 1), vec![2]);
        assert_eq!(names(1, 2), vec![1, 2]);
    }

    #[test]
    fn fig11_k_sets() {
        let g = fig11();
        let names = |s: usize, i: usize| -> Vec<usize> {
            g.k_sets[s][i].iter().map(|p| p + 1).collect()
        };
        assert_eq!(names(0, 0), vec![2]);
        assert_eq!(names(0, 1), vec![1, 2]);
        assert_eq!(names(0, 2), vec![1]);
        assert_eq!(names(0, 3), Vec::<usize>::new());
        assert_eq!(names(1, 0), Vec::<usize>::new());
        assert_eq!(names(1, 1), vec![2]);
    }

    #[test]
    fn rejection_fixtures() {
        assert!(matches!(
            DressedGraph::build(&bad_route_spec()),
            Err(GraphError::NoValidRouting { .. })
        ));
        assert!(matches!(
            DressedGraph::build(&self_energy_spec()),
            Err(GraphError::Validation(_))
        ));
    }

    #[test]
    fn symmetric_point_is_rational() {
        let tp = symmetric_point();
        let ps = tp.rational_momenta().expect("rational");
        assert_eq!(ps[1].t, rat_i(-1));
        assert!(ps[1].x.eq(&rat_i(0)));
    }
}
