//! Dressed triangle graphs: a charged-particle triangle with sides 1, 2, 3
//! (arrows v2->v1, v3->v2, v1->v3, so the three arrows form one directed
//! cycle) carrying n soft-photon lines anchored at coupling vertices on the
//! sides or at the external vertices v1, v2, v3.
//!
//! Validation routes every photon loop through the charged cycle so that it
//! passes at most one external vertex and touches at most two sides, and
//! orients photon arrows so every photon momentum flows *with* the side
//! arrows (all momentum-sum coefficients +1). Vertex couplings are normalized
//! to extreme side positions whose boundary segments are contracted: they
//! carry momentum but contribute no denominator and cannot be stars.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExtVertex {
    V1,
    V2,
    V3,
}

impl ExtVertex {
    pub fn label(&self) -> &'static str {
        match self {
            ExtVertex::V1 => "v1",
            ExtVertex::V2 => "v2",
            ExtVertex::V3 => "v3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    S1,
    S2,
    S3,
}

pub const SIDES: [Side; 3] = [Side::S1, Side::S2, Side::S3];

impl Side {
    pub fn idx(&self) -> usize {
        match self {
            Side::S1 => 0,
            Side::S2 => 1,
            Side::S3 => 2,
        }
    }

    pub fn from_idx(i: usize) -> Side {
        SIDES[i]
    }

    pub fn number(&self) -> usize {
        self.idx() + 1
    }

    /// Start vertex in arrow direction.
    pub fn start(&self) -> ExtVertex {
        match self {
            Side::S1 => ExtVertex::V2,
            Side::S2 => ExtVertex::V3,
            Side::S3 => ExtVertex::V1,
        }
    }

    /// End vertex in arrow direction.
    pub fn end(&self) -> ExtVertex {
        match self {
            Side::S1 => ExtVertex::V1,
            Side::S2 => ExtVertex::V2,
            Side::S3 => ExtVertex::V3,
        }
    }

    /// The side whose arrow leaves this vertex.
    pub fn outgoing(v: ExtVertex) -> Side {
        match v {
            ExtVertex::V2 => Side::S1,
            ExtVertex::V3 => Side::S2,
            ExtVertex::V1 => Side::S3,
        }
    }
}

/// Coupling position on a side, counted along the arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PosRef {
    pub side: Side,
    pub pos: usize,
}

/// Charged segment on a side; side with c couplings has segments 0..=c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SegRef {
    pub side: Side,
    pub idx: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Anchor {
    Side(PosRef),
    Vertex(ExtVertex),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhotonSpec {
    pub ends: [Anchor; 2],
}

/// External-vertex set a loop is required to pass (from an explicit route
/// override in a graph file).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteHint(pub BTreeSet<ExtVertex>);

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GraphSpec {
    pub photons: Vec<PhotonSpec>,
    pub routes: BTreeMap<usize, RouteHint>,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("validation: {0}")]
    Validation(String),
    #[error("no valid routing for photon {photon}: {reason}")]
    NoValidRouting { photon: usize, reason: String },
}

/// Routed photon loop. `segments` lists the charged segments the momentum
/// traverses, in cycle order from `entry` (where it joins the charged line)
/// to `exit` (where it returns to the photon line); the photon arrow runs
/// exit -> entry so that the charged flow is everywhere with the side arrows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhotonLoop {
    pub entry: PosRef,
    pub exit: PosRef,
    pub segments: Vec<SegRef>,
    pub vertices: Vec<ExtVertex>,
    pub sides: Vec<Side>,
}

#[derive(Clone, Debug)]
pub struct DressedGraph {
    pub n: usize,
    pub coupling_count: [usize; 3],
    /// As declared, before vertex couplings are normalized.
    pub raw_anchors: Vec<[Anchor; 2]>,
    /// Normalized: both ends of every photon as side positions.
    pub anchors: Vec<[PosRef; 2]>,
    /// contracted[s][i]: segment i of side s has zero length (vertex coupling).
    pub contracted: [Vec<bool>; 3],
    pub loops: Vec<PhotonLoop>,
    /// k_sets[s][i]: photons whose momentum flows through segment i of side s
    /// (all with coefficient +1 after arrow orientation).
    pub k_sets: [Vec<BTreeSet<usize>>; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Vertex(ExtVertex),
    Coupling(Side, usize),
}

impl DressedGraph {
    pub fn build(spec: &GraphSpec) -> Result<DressedGraph, GraphError> {
        let n = spec.photons.len();
        if n == 0 {
            return Err(GraphError::Validation("graph carries no photons".into()));
        }
        // Count declared side positions and check contiguity.
        let mut declared: [BTreeSet<usize>; 3] = Default::default();
        for ph in &spec.photons {
            for end in &ph.ends {
                if let Anchor::Side(p) = end {
                    declared[p.side.idx()].insert(p.pos);
                }
            }
        }
        for s in 0..3 {
            for (want, &got) in declared[s].iter().enumerate() {
                if want != got {
                    return Err(GraphError::Validation(format!(
                        "side {} positions are not contiguous from 0",
                        s + 1
                    )));
                }
            }
        }
        // Normalize vertex couplings: prepend positions on the outgoing side,
        // in photon/end order, and shift declared positions up.
        let mut inserted: [usize; 3] = [0, 0, 0];
        let mut vertex_slots: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, ph) in spec.photons.iter().enumerate() {
            for (e, end) in ph.ends.iter().enumerate() {
                if let Anchor::Vertex(v) = end {
                    let side = Side::outgoing(*v);
                    vertex_slots.insert((i, e), inserted[side.idx()]);
                    inserted[side.idx()] += 1;
                }
            }
        }
        let mut anchors: Vec<[PosRef; 2]> = Vec::with_capacity(n);
        for (i, ph) in spec.photons.iter().enumerate() {
            let mut ends = [PosRef { side: Side::S1, pos: 0 }; 2];
            for (e, end) in ph.ends.iter().enumerate() {
                ends[e] = match end {
                    Anchor::Side(p) => PosRef {
                        side: p.side,
                        pos: p.pos + inserted[p.side.idx()],
                    },
                    Anchor::Vertex(v) => PosRef {
                        side: Side::outgoing(*v),
                        pos: vertex_slots[&(i, e)],
                    },
                };
            }
            if ends[0] == ends[1] {
                return Err(GraphError::Validation(format!(
                    "photon {} has coincident endpoints",
                    i + 1
                )));
            }
            anchors.push(ends);
        }
        let mut coupling_count = [0usize; 3];
        for s in 0..3 {
            coupling_count[s] = declared[s].len() + inserted[s];
        }
        let contracted: [Vec<bool>; 3] = std::array::from_fn(|s| {
            (0..=coupling_count[s]).map(|i| i < inserted[s]).collect()
        });

        let g0 = DressedGraph {
            n,
            coupling_count,
            raw_anchors: spec.photons.iter().map(|p| p.ends.clone()).collect(),
            anchors,
            contracted,
            loops: Vec::new(),
            k_sets: Default::default(),
        };
        let loops = route_photon_loops(&g0, &spec.routes)?;
        let mut k_sets: [Vec<BTreeSet<usize>>; 3] =
            std::array::from_fn(|s| vec![BTreeSet::new(); coupling_count[s] + 1]);
        for (i, lp) in loops.iter().enumerate() {
            for seg in &lp.segments {
                k_sets[seg.side.idx()][seg.idx].insert(i);
            }
        }
        let g = DressedGraph {
            loops,
            k_sets,
            ..g0
        };
        g.reject_self_energy(spec)?;
        Ok(g)
    }

    fn reject_self_energy(&self, spec: &GraphSpec) -> Result<(), GraphError> {
        for (i, lp) in self.loops.iter().enumerate() {
            let raw_q = spec.photons[i]
                .ends
                .iter()
                .all(|e| matches!(e, Anchor::Side(_)));
            if !raw_q || lp.segments.len() != 1 {
                continue;
            }
            let shared = self
                .anchors
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .any(|(_, ends)| {
                    ends.contains(&self.anchors[i][0]) || ends.contains(&self.anchors[i][1])
                });
            if !shared {
                return Err(GraphError::Validation(format!(
                    "photon {} is a self-energy insertion",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> Vec<SegRef> {
        let mut out = Vec::new();
        for side in SIDES {
            for idx in 0..=self.coupling_count[side.idx()] {
                out.push(SegRef { side, idx });
            }
        }
        out
    }

    pub fn is_contracted(&self, seg: SegRef) -> bool {
        self.contracted[seg.side.idx()][seg.idx]
    }

    pub fn k_set(&self, seg: SegRef) -> &BTreeSet<usize> {
        &self.k_sets[seg.side.idx()][seg.idx]
    }

    /// Segments of one side eligible as stars (non-contracted).
    pub fn star_candidates(&self, side: Side) -> Vec<usize> {
        (0..=self.coupling_count[side.idx()])
            .filter(|&i| !self.contracted[side.idx()][i])
            .collect()
    }

    /// Oriented photon arrows: (tail anchor, head anchor) per photon, chosen
    /// so every momentum-sum coefficient on the charged segments is +1.
    pub fn photon_arrows(&self) -> Vec<(PosRef, PosRef)> {
        self.loops.iter().map(|l| (l.exit, l.entry)).collect()
    }

    fn cycle_nodes(&self) -> Vec<Node> {
        // Cycle order v2 -> side1 -> v1 -> side3 -> v3 -> side2 -> v2.
        let mut nodes = Vec::new();
        for side in [Side::S1, Side::S3, Side::S2] {
            nodes.push(Node::Vertex(side.start()));
            for pos in 0..self.coupling_count[side.idx()] {
                nodes.push(Node::Coupling(side, pos));
            }
        }
        nodes
    }

    /// Segment on the cycle edge leaving `nodes[i]`.
    fn edge_segment(&self, nodes: &[Node], i: usize) -> SegRef {
        match nodes[i] {
            Node::Vertex(v) => SegRef {
                side: Side::outgoing(v),
                idx: 0,
            },
            Node::Coupling(side, pos) => SegRef { side, idx: pos + 1 },
        }
    }
}

/// Route every photon loop through the charged cycle. The unconstrained
/// choice takes the arc containing the fewest external vertices (ties broken
/// toward the arc starting on the smaller side number); an explicit hint must
/// match one arc's vertex set exactly.
pub fn route_photon_loops(
    g: &DressedGraph,
    routes: &BTreeMap<usize, RouteHint>,
) -> Result<Vec<PhotonLoop>, GraphError> {
    let nodes = g.cycle_nodes();
    let find = |p: PosRef| -> usize {
        nodes
            .iter()
            .position(|n| *n == Node::Coupling(p.side, p.pos))
            .expect("anchor on cycle")
    };
    let mut loops = Vec::with_capacity(g.n);
    for (i, ends) in g.anchors.iter().enumerate() {
        let a = find(ends[0]);
        let b = find(ends[1]);
        // Arc from x to y walking the cycle direction.
        let arc = |x: usize, y: usize| -> PhotonLoop {
            let mut segments = Vec::new();
            let mut vertices = Vec::new();
            let mut sides = BTreeSet::new();
            let mut j = x;
            while j != y {
                segments.push(g.edge_segment(&nodes, j));
                sides.insert(g.edge_segment(&nodes, j).side);
                j = (j + 1) % nodes.len();
                if j != y {
                    if let Node::Vertex(v) = nodes[j] {
                        vertices.push(v);
                    }
                }
            }
            let (entry, exit) = match (nodes[x], nodes[y]) {
                (Node::Coupling(s1, p1), Node::Coupling(s2, p2)) => (
                    PosRef { side: s1, pos: p1 },
                    PosRef { side: s2, pos: p2 },
                ),
                _ => unreachable!("photon anchors are coupling nodes"),
            };
            PhotonLoop {
                entry,
                exit,
                segments,
                vertices,
                sides: sides.into_iter().collect(),
            }
        };
        let cand = [arc(a, b), arc(b, a)];
        let chosen = if let Some(hint) = routes.get(&i) {
            let want: BTreeSet<ExtVertex> = hint.0.clone();
            let got = cand
                .into_iter()
                .find(|c| c.vertices.iter().cloned().collect::<BTreeSet<_>>() == want);
            match got {
                Some(c) => c,
                None => {
                    return Err(GraphError::NoValidRouting {
                        photon: i + 1,
                        reason: format!(
                            "no arc passes exactly {{{}}}",
                            want.iter().map(|v| v.label()).collect::<Vec<_>>().join(",")
                        ),
                    })
                }
            }
        } else {
            let [c0, c1] = cand;
            let pick_first = (c0.vertices.len(), c0.entry.side.number())
                <= (c1.vertices.len(), c1.entry.side.number());
            if pick_first {
                c0
            } else {
                c1
            }
        };
        if chosen.vertices.len() > 1 {
            return Err(GraphError::NoValidRouting {
                photon: i + 1,
                reason: format!(
                    "loop would pass {} external vertices",
                    chosen.vertices.len()
                ),
            });
        }
        if chosen.sides.len() > 2 {
            return Err(GraphError::NoValidRouting {
                photon: i + 1,
                reason: "loop would traverse segments on all three sides".into(),
            });
        }
        loops.push(chosen);
    }
    Ok(loops)
}

/// One term of the pole decomposition: a choice of star segment per side.
#[derive(Clone, Debug)]
pub struct StarGraph {
    pub graph: DressedGraph,
    /// Star segment index per side (indices into segments of sides 1, 2, 3).
    pub stars: [usize; 3],
}

impl StarGraph {
    pub fn star_seg(&self, side: Side) -> SegRef {
        SegRef {
            side,
            idx: self.stars[side.idx()],
        }
    }

    pub fn is_star(&self, seg: SegRef) -> bool {
        self.stars[seg.side.idx()] == seg.idx
    }
}

/// All star choices, lexicographic in (side-1 index, side-2 index, side-3
/// index) over non-contracted segments.
pub fn enumerate_star_graphs(g: &DressedGraph) -> Vec<StarGraph> {
    let c1 = g.star_candidates(Side::S1);
    let c2 = g.star_candidates(Side::S2);
    let c3 = g.star_candidates(Side::S3);
    let mut out = Vec::with_capacity(c1.len() * c2.len() * c3.len());
    for &i1 in &c1 {
        for &i2 in &c2 {
            for &i3 in &c3 {
                out.push(StarGraph {
                    graph: g.clone(),
                    stars: [i1, i2, i3],
                });
            }
        }
    }
    out
}

/// Sign data for one pole-residue factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignEntry {
    pub seg: SegRef,
    /// +1 or -1: orientation making the leading 2 p_s . k term positive.
    pub sigma: i8,
    /// 1-based depth of the shallowest photon distinguishing segment and star.
    pub ell: usize,
    pub k_seg: BTreeSet<usize>,
    pub k_star: BTreeSet<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct SignTable {
    pub entries: Vec<SignEntry>,
}

impl SignTable {
    pub fn entry(&self, seg: SegRef) -> Option<&SignEntry> {
        self.entries.iter().find(|e| e.seg == seg)
    }
}

/// Sigma and scale index for every non-star, non-contracted segment.
/// `sector` maps depth (0-based) to photon index; identity when photons are
/// already labeled by decreasing magnitude.
pub fn sign_table(sg: &StarGraph, sector: &[usize]) -> SignTable {
    assert_eq!(sector.len(), sg.graph.n, "sector permutation length");
    let mut entries = Vec::new();
    for seg in sg.graph.segments() {
        if sg.is_star(seg) || sg.graph.is_contracted(seg) {
            continue;
        }
        let k_seg = sg.graph.k_set(seg).clone();
        let k_star = sg.graph.k_set(sg.star_seg(seg.side)).clone();
        let sym: BTreeSet<usize> = k_seg.symmetric_difference(&k_star).cloned().collect();
        assert!(
            !sym.is_empty(),
            "segment and star on side {} carry identical photon sums",
            seg.side.number()
        );
        let depth = (0..sector.len())
            .find(|&d| sym.contains(&sector[d]))
            .expect("symmetric difference photon in sector");
        let sigma = if k_seg.contains(&sector[depth]) { 1 } else { -1 };
        entries.push(SignEntry {
            seg,
            sigma,
            ell: depth + 1,
            k_seg,
            k_star,
        });
    }
    SignTable { entries }
}

pub fn identity_sector(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Cutting the three star segments must split the graph into parts holding
/// one external vertex each.
pub fn is_separable(sg: &StarGraph) -> bool {
    let g = &sg.graph;
    // Node ids: 0..3 external vertices, then couplings in side-major order.
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut next = 3usize;
    for side in SIDES {
        for pos in 0..g.coupling_count[side.idx()] {
            ids.insert((side.idx(), pos), next);
            next += 1;
        }
    }
    let vid = |v: ExtVertex| -> usize {
        match v {
            ExtVertex::V1 => 0,
            ExtVertex::V2 => 1,
            ExtVertex::V3 => 2,
        }
    };
    let mut dsu: Vec<usize> = (0..next).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let r = find(dsu, dsu[x]);
            dsu[x] = r;
        }
        dsu[x]
    }
    let union = |dsu: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(dsu, a), find(dsu, b));
        if ra != rb {
            dsu[ra] = rb;
        }
    };
    for side in SIDES {
        let c = g.coupling_count[side.idx()];
        for idx in 0..=c {
            let seg = SegRef { side, idx };
            if sg.is_star(seg) {
                continue;
            }
            let a = if idx == 0 {
                vid(side.start())
            } else {
                ids[&(side.idx(), idx - 1)]
            };
            let b = if idx == c {
                vid(side.end())
            } else {
                ids[&(side.idx(), idx)]
            };
            union(&mut dsu, a, b);
        }
    }
    for ends in &g.anchors {
        let a = ids[&(ends[0].side.idx(), ends[0].pos)];
        let b = ids[&(ends[1].side.idx(), ends[1].pos)];
        union(&mut dsu, a, b);
    }
    let roots: Vec<usize> = (0..3).map(|v| find(&mut dsu, v)).collect();
    roots[0] != roots[1] && roots[1] != roots[2] && roots[0] != roots[2]
}

/// Simple paths of photon lines joining two distinct external vertices,
/// stepping between photons that share an anchor. Each path is the ordered
/// list of photon indices; enumeration order is deterministic.
pub fn enumerate_zigzag_paths(g: &DressedGraph) -> Vec<Vec<usize>> {
    // Adjacency over raw anchors.
    let mut paths = Vec::new();
    let anchor_eq = |a: &Anchor, b: &Anchor| a == b;
    let vertex_of = |a: &Anchor| -> Option<ExtVertex> {
        match a {
            Anchor::Vertex(v) => Some(*v),
            Anchor::Side(_) => None,
        }
    };
    // DFS from each photon end anchored at a vertex.
    for start in 0..g.n {
        for e in 0..2 {
            let v0 = match vertex_of(&g.raw_anchors[start][e]) {
                Some(v) => v,
                None => continue,
            };
            // Walk away from the vertex through the other end.
            let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(start, 1 - e, vec![start])];
            while let Some((ph, out_end, path)) = stack.pop() {
                let out = &g.raw_anchors[ph][out_end];
                if let Some(v) = vertex_of(out) {
                    if v != v0 {
                        paths.push(path);
                    }
                    continue;
                }
                let mut nexts: Vec<(usize, usize)> = Vec::new();
                for q in 0..g.n {
                    if path.contains(&q) {
                        continue;
                    }
                    for qe in 0..2 {
                        if anchor_eq(&g.raw_anchors[q][qe], out) {
                            nexts.push((q, 1 - qe));
                        }
                    }
                }
                nexts.sort();
                for (q, qout) in nexts.into_iter().rev() {
                    let mut p2 = path.clone();
                    p2.push(q);
                    stack.push((q, qout, p2));
                }
            }
        }
    }
    // Each path appears once per direction; keep the lexicographically
    // smaller orientation and dedupe.
    let mut canon: BTreeSet<Vec<usize>> = BTreeSet::new();
    for p in paths {
        let mut r = p.clone();
        r.reverse();
        canon.insert(p.min(r));
    }
    canon.into_iter().collect()
}
