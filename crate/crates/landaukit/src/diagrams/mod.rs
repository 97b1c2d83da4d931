//! Geometric diagrams in spacetime realizing the stationarity equations of
//! one pole-decomposition term. Each charged or photon line of the graph
//! maps to a directed segment carrying a defining four-vector; the three
//! star lines are replaced by direct segments joining the external vertices.
//! Loop closure of the drawn diagram is equivalent to the momentum-form
//! matrix equations, which `check_closure` verifies contribution by
//! contribution.

pub mod cascade;

use crate::graphs::{PhotonLoop, SegRef, Side, SignTable, StarGraph, SIDES};
use crate::kinematics::{RatVector, TrianglePoint};
use crate::rat::{rat, rat_i, Rat};
use crate::symbolic::denominators::DenominatorSet;
use crate::symbolic::poly::{half_gradient_slot, pv_eval, Var};
use num::{Signed, Zero};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum DiagramError {
    #[error("sign violation: {0}")]
    SignViolation(String),
    #[error("invalid diagram input: {0}")]
    BadParams(String),
    #[error("triangle point has irrational coordinates; diagrams need rational momenta")]
    IrrationalPoint,
}

/// Multipliers for one diagram: photon stretches, pole multipliers, and the
/// oriented residue weights. The orientation table fixes the sign each
/// residue weight must carry: sigma * beta is the nonnegative stationarity
/// multiplier of that row.
#[derive(Clone, Debug)]
pub struct DiagramParams {
    pub alpha_photon: Vec<Rat>,
    pub alpha_star: [Rat; 3],
    pub beta: BTreeMap<SegRef, Rat>,
    pub signs: SignTable,
}

/// Non-star, non-contracted segments of a side, ascending.
pub fn residue_segments(sg: &StarGraph, side: Side) -> Vec<SegRef> {
    (0..=sg.graph.coupling_count[side.idx()])
        .map(|idx| SegRef { side, idx })
        .filter(|&seg| !sg.is_star(seg) && !sg.graph.is_contracted(seg))
        .collect()
}

impl DiagramParams {
    pub fn zero(sg: &StarGraph, sector: &[usize]) -> DiagramParams {
        let signs = crate::graphs::sign_table(sg, sector);
        let beta = signs
            .entries
            .iter()
            .map(|e| (e.seg, Rat::zero()))
            .collect();
        DiagramParams {
            alpha_photon: vec![Rat::zero(); sg.graph.n],
            alpha_star: [Rat::zero(), Rat::zero(), Rat::zero()],
            beta,
            signs,
        }
    }

    /// Random multipliers respecting every sign constraint: residue weights
    /// are drawn as sigma times a nonnegative value.
    pub fn random<R: Rng>(sg: &StarGraph, sector: &[usize], rng: &mut R) -> DiagramParams {
        let mut params = DiagramParams::zero(sg, sector);
        let nonneg = |rng: &mut R| rat(rng.gen_range(0i64..=6), rng.gen_range(1i64..=4));
        for a in params.alpha_photon.iter_mut() {
            *a = nonneg(rng);
        }
        for a in params.alpha_star.iter_mut() {
            *a = nonneg(rng);
        }
        let sigmas: Vec<(SegRef, i8)> = params
            .signs
            .entries
            .iter()
            .map(|e| (e.seg, e.sigma))
            .collect();
        for (seg, sigma) in sigmas {
            let aj = nonneg(rng);
            params.beta.insert(seg, aj * rat_i(sigma as i64));
        }
        params
    }

    pub fn sigma(&self, seg: SegRef) -> i8 {
        self.signs.entry(seg).expect("sign entry").sigma
    }

    /// The stationarity multiplier sigma * beta of a residue row.
    pub fn alpha_residue(&self, seg: SegRef) -> Rat {
        &self.beta[&seg] * rat_i(self.sigma(seg) as i64)
    }

    /// Multiplier left on the star segment itself after the residue weights
    /// are peeled off the side.
    pub fn alpha_star_prime(&self, sg: &StarGraph, side: Side) -> Rat {
        let mut a = self.alpha_star[side.idx()].clone();
        for seg in residue_segments(sg, side) {
            a -= &self.beta[&seg];
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    Photon(usize),
    Residue(SegRef),
    DirectStar(Side),
}

#[derive(Clone, Debug)]
pub struct DiagramSegment {
    pub kind: SegmentKind,
    pub from: usize,
    pub to: usize,
    pub vector: RatVector,
}

#[derive(Clone, Debug)]
pub struct DiagramVertex {
    pub label: String,
    pub position: RatVector,
    /// 0, 1, 2 for the external vertices.
    pub external: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LandauDiagram {
    pub vertices: Vec<DiagramVertex>,
    pub segments: Vec<DiagramSegment>,
    pub params: DiagramParams,
    pub sg: StarGraph,
    pub ps: [RatVector; 3],
    pub ks: Vec<RatVector>,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub p_residual: RatVector,
    /// Indexed by photon id.
    pub photon_residuals: Vec<RatVector>,
    pub closed: bool,
}

impl LandauDiagram {
    /// Momentum flowing along a charged segment: the side momentum plus the
    /// photon momenta threading it.
    pub fn segment_momentum(&self, seg: SegRef) -> RatVector {
        let mut total = self.ps[seg.side.idx()].clone();
        for &i in self.sg.graph.k_set(seg) {
            total = total.add(&self.ks[i]);
        }
        total
    }

    pub fn star_momentum(&self, side: Side) -> RatVector {
        self.segment_momentum(self.sg.star_seg(side))
    }

    /// Defining vector of the direct segment of a side: the sum of the
    /// charged-segment vectors along that side.
    pub fn direct_vector(&self, side: Side) -> RatVector {
        let star = self.star_momentum(side);
        let mut v = star.scale(&self.params.alpha_star[side.idx()]);
        for seg in residue_segments(&self.sg, side) {
            let shift = self.segment_momentum(seg).sub(&star);
            v = v.add(&shift.scale(&self.params.beta[&seg]));
        }
        v
    }

    pub fn external_position(&self, idx: usize) -> &RatVector {
        &self.vertices[idx].position
    }
}

fn coupling_vertex_index(sg: &StarGraph, side: Side, pos: usize) -> usize {
    let mut i = 3;
    for s in SIDES {
        if s == side {
            return i + pos;
        }
        i += sg.graph.coupling_count[s.idx()];
    }
    unreachable!()
}

/// Realize the diagram: validate the sign constraints, then walk each side
/// from its start vertex accumulating segment vectors to place every
/// coupling vertex, anchoring the second external vertex at the origin.
pub fn build_diagram(
    sg: &StarGraph,
    params: &DiagramParams,
    tp: &TrianglePoint,
    ks: &[RatVector],
) -> Result<LandauDiagram, DiagramError> {
    let g = &sg.graph;
    let n = g.n;
    if ks.len() != n || params.alpha_photon.len() != n {
        return Err(DiagramError::BadParams(format!(
            "expected {n} photon momenta and multipliers"
        )));
    }
    for side in SIDES {
        for seg in residue_segments(sg, side) {
            if !params.beta.contains_key(&seg) {
                return Err(DiagramError::BadParams(format!(
                    "missing residue weight for side {} segment {}",
                    side.number(),
                    seg.idx
                )));
            }
        }
    }
    for (i, a) in params.alpha_photon.iter().enumerate() {
        if a.is_negative() {
            return Err(DiagramError::SignViolation(format!(
                "photon {} multiplier {} is negative",
                i + 1,
                a
            )));
        }
    }
    for side in SIDES {
        if params.alpha_star[side.idx()].is_negative() {
            return Err(DiagramError::SignViolation(format!(
                "side {} pole multiplier {} is negative",
                side.number(),
                params.alpha_star[side.idx()]
            )));
        }
        for seg in residue_segments(sg, side) {
            let aj = params.alpha_residue(seg);
            if aj.is_negative() {
                return Err(DiagramError::SignViolation(format!(
                    "side {} segment {}: sigma * beta = {} is negative",
                    side.number(),
                    seg.idx,
                    aj
                )));
            }
        }
    }
    let ps = tp
        .rational_momenta()
        .ok_or(DiagramError::IrrationalPoint)?;

    let mut d = LandauDiagram {
        vertices: Vec::new(),
        segments: Vec::new(),
        params: params.clone(),
        sg: sg.clone(),
        ps,
        ks: ks.to_vec(),
    };
    for (i, label) in ["v1", "v2", "v3"].iter().enumerate() {
        d.vertices.push(DiagramVertex {
            label: label.to_string(),
            position: RatVector::zero(),
            external: Some(i),
        });
    }
    for side in SIDES {
        for pos in 0..g.coupling_count[side.idx()] {
            d.vertices.push(DiagramVertex {
                label: format!("s{}p{}", side.number(), pos),
                position: RatVector::zero(),
                external: None,
            });
        }
    }

    // Per-segment vectors: residue weights on the chain, the star remainder
    // on the star segment, zero on contracted segments.
    let seg_vector = |d: &LandauDiagram, seg: SegRef| -> RatVector {
        if g.is_contracted(seg) {
            RatVector::zero()
        } else if sg.is_star(seg) {
            d.star_momentum(seg.side)
                .scale(&params.alpha_star_prime(sg, seg.side))
        } else {
            d.segment_momentum(seg).scale(&params.beta[&seg])
        }
    };

    // Walk order keeps each side's start position already fixed: v2 anchors
    // the first side, and each walk lands exactly on the next external
    // vertex because the direct vector is the sum of its side's segments.
    let ext = |v: crate::graphs::ExtVertex| -> usize {
        match v {
            crate::graphs::ExtVertex::V1 => 0,
            crate::graphs::ExtVertex::V2 => 1,
            crate::graphs::ExtVertex::V3 => 2,
        }
    };
    for side in [Side::S1, Side::S3, Side::S2] {
        let mut at = d.vertices[ext(side.start())].position.clone();
        let c = g.coupling_count[side.idx()];
        for idx in 0..=c {
            let seg = SegRef { side, idx };
            at = at.add(&seg_vector(&d, seg));
            if idx < c {
                let vi = coupling_vertex_index(sg, side, idx);
                d.vertices[vi].position = at.clone();
            }
        }
        if side != Side::S2 {
            let vi = ext(side.end());
            d.vertices[vi].position = at;
        }
    }

    for side in SIDES {
        let c = g.coupling_count[side.idx()];
        let endpoint = |idx_bound: usize, is_start: bool| -> usize {
            if is_start {
                if idx_bound == 0 {
                    ext(side.start())
                } else {
                    coupling_vertex_index(sg, side, idx_bound - 1)
                }
            } else if idx_bound == c {
                ext(side.end())
            } else {
                coupling_vertex_index(sg, side, idx_bound)
            }
        };
        for seg in residue_segments(sg, side) {
            d.segments.push(DiagramSegment {
                kind: SegmentKind::Residue(seg),
                from: endpoint(seg.idx, true),
                to: endpoint(seg.idx, false),
                vector: d.segment_momentum(seg).scale(&params.beta[&seg]),
            });
        }
        d.segments.push(DiagramSegment {
            kind: SegmentKind::DirectStar(side),
            from: ext(side.start()),
            to: ext(side.end()),
            vector: d.direct_vector(side),
        });
    }
    for (i, (tail, head)) in g.photon_arrows().iter().enumerate() {
        d.segments.push(DiagramSegment {
            kind: SegmentKind::Photon(i),
            from: coupling_vertex_index(sg, tail.side, tail.pos),
            to: coupling_vertex_index(sg, head.side, head.pos),
            vector: ks[i].scale(&params.alpha_photon[i]),
        });
    }
    Ok(d)
}

fn loop_contribution(d: &LandauDiagram, lp: &PhotonLoop) -> RatVector {
    let mut res = RatVector::zero();
    for side in SIDES {
        let star = d.sg.star_seg(side);
        let passes_star = lp.segments.contains(&star);
        let sigma_s = d.star_momentum(side);
        if passes_star {
            res = res.add(&sigma_s.scale(&d.params.alpha_star[side.idx()]));
        }
        for seg in residue_segments(&d.sg, side) {
            let passes_seg = lp.segments.contains(&seg);
            let beta = &d.params.beta[&seg];
            let contrib = match (passes_seg, passes_star) {
                (true, false) => d.segment_momentum(seg).scale(beta),
                (false, true) => sigma_s.scale(beta).neg(),
                (true, true) => d.segment_momentum(seg).sub(&sigma_s).scale(beta),
                (false, false) => continue,
            };
            res = res.add(&contrib);
        }
    }
    res
}

/// Loop residuals of the drawn diagram. The p loop runs around the three
/// direct segments; each photon loop adds its own stretched momentum to the
/// charged-segment contributions of the sides it traverses, where passing a
/// star line means passing the direct segment instead of the chain.
pub fn check_closure(d: &LandauDiagram) -> ClosureReport {
    let mut p_residual = RatVector::zero();
    for side in SIDES {
        p_residual = p_residual.add(&d.direct_vector(side));
    }
    let mut photon_residuals = Vec::with_capacity(d.sg.graph.n);
    for (i, lp) in d.sg.graph.loops.iter().enumerate() {
        let own = d.ks[i].scale(&d.params.alpha_photon[i]);
        photon_residuals.push(own.add(&loop_contribution(d, lp)));
    }
    let closed = p_residual.is_zero() && photon_residuals.iter().all(|r| r.is_zero());
    ClosureReport {
        p_residual,
        photon_residuals,
        closed,
    }
}

/// The same residuals computed from the momentum-form matrix: contract each
/// column of half-gradients with the row multipliers.
pub fn matrix_loop_residuals(
    ds: &DenominatorSet,
    params: &DiagramParams,
    ps: &[RatVector; 3],
    ks: &[RatVector],
) -> (RatVector, Vec<RatVector>) {
    let assign = |v: Var| -> Rat {
        match v {
            Var::P(s, c) => ps[s as usize].comp(c as usize).clone(),
            Var::K(i, c) => ks[i as usize].comp(c as usize).clone(),
            _ => unreachable!("momentum forms involve only p and k"),
        }
    };
    let mut p_res = RatVector::zero();
    let mut k_res = vec![RatVector::zero(); ds.n];
    for den in &ds.entries {
        let Some(f_k) = &den.f_k else { continue };
        let mult = match den.kind {
            crate::symbolic::denominators::Kind::PhotonPropagator => {
                params.alpha_photon[den.photon.unwrap()].clone()
            }
            crate::symbolic::denominators::Kind::Pole => {
                params.alpha_star[den.side.unwrap().idx()].clone()
            }
            crate::symbolic::denominators::Kind::Residue => {
                params.alpha_residue(den.seg.unwrap())
            }
            _ => continue,
        };
        if mult.is_zero() {
            continue;
        }
        for ell in 0..ds.n {
            let grad = half_gradient_slot(f_k, |c| Var::K(ell as u8, c));
            k_res[ell] = k_res[ell].add(&pv_eval(&grad, &assign).scale(&mult));
        }
        let mut dp = RatVector::zero();
        for s in 0..3u8 {
            let grad = half_gradient_slot(f_k, |c| Var::P(s, c));
            dp = dp.add(&pv_eval(&grad, &assign));
        }
        p_res = p_res.add(&dp.scale(&mult));
    }
    (p_res, k_res)
}

#[derive(Clone, Debug)]
pub struct Classification {
    /// Vertices whose every nonzero photon line leaves to the left.
    pub v_r: Vec<usize>,
    /// Vertices whose every nonzero photon line arrives from the right.
    pub v_l: Vec<usize>,
    /// Both extreme sets confined to the external vertices.
    pub condition7: bool,
    /// Every nonzero photon segment carries positive energy out of its
    /// right-hand end, as drawn.
    pub energy_flow_ok: bool,
}

/// Extreme-vertex classification by time coordinate. Vertices are grouped
/// by exact position (coincident vertices are one geometric point); larger
/// time component means further left.
pub fn classify_vr_vl(d: &LandauDiagram) -> Classification {
    type Key = (Rat, Rat, Rat, Rat);
    let key = |p: &RatVector| -> Key { (p.t.clone(), p.x.clone(), p.y.clone(), p.z.clone()) };
    let mut groups: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for (i, v) in d.vertices.iter().enumerate() {
        groups.entry(key(&v.position)).or_default().push(i);
    }
    // Incident nonzero photon lines per group: (other end time, own time).
    let mut incident: BTreeMap<Key, Vec<Rat>> = BTreeMap::new();
    let mut energy_flow_ok = true;
    for seg in &d.segments {
        let SegmentKind::Photon(_) = seg.kind else { continue };
        if seg.vector.is_zero() {
            continue;
        }
        let a = &d.vertices[seg.from].position;
        let b = &d.vertices[seg.to].position;
        incident.entry(key(a)).or_default().push(b.t.clone());
        incident.entry(key(b)).or_default().push(a.t.clone());
        let dt = &b.t - &a.t;
        let flows_left = seg.vector.t.is_positive() && dt.is_positive();
        let flows_right = seg.vector.t.is_negative() && dt.is_negative();
        if !(flows_left || flows_right) {
            energy_flow_ok = false;
        }
    }
    let mut v_r = Vec::new();
    let mut v_l = Vec::new();
    let mut condition7 = true;
    let external_keys: Vec<Key> = (0..3).map(|i| key(&d.vertices[i].position)).collect();
    for (k, members) in &groups {
        let Some(others) = incident.get(k) else { continue };
        let own_t = &k.0;
        let is_r = others.iter().all(|t| t > own_t);
        let is_l = others.iter().all(|t| t < own_t);
        if is_r {
            v_r.extend(members.iter().copied());
        }
        if is_l {
            v_l.extend(members.iter().copied());
        }
        if (is_r || is_l) && !external_keys.contains(k) {
            condition7 = false;
        }
    }
    Classification {
        v_r,
        v_l,
        condition7,
        energy_flow_ok,
    }
}

/// Deterministic DOT rendering. Time increases to the left: vertices are
/// ranked by their time coordinate and chained so larger times sit further
/// left in a left-to-right flip layout.
pub fn emit_dot(d: &LandauDiagram) -> String {
    let mut out = String::new();
    out.push_str("digraph landau {\n  rankdir=RL;\n  node [shape=circle, fontsize=10];\n");
    for v in &d.vertices {
        let _ = writeln!(
            out,
            "  // {} @ ({}, {}, {}, {})",
            v.label, v.position.t, v.position.x, v.position.y, v.position.z
        );
    }
    for v in &d.vertices {
        let shape = if v.external.is_some() {
            ", shape=doublecircle"
        } else {
            ""
        };
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"{}];", v.label, v.label, shape);
    }
    // Rank groups by time coordinate, ascending; the invisible chain fixes
    // their order so +t ends up leftmost.
    let mut ranks: BTreeMap<Rat, Vec<String>> = BTreeMap::new();
    for v in &d.vertices {
        ranks
            .entry(v.position.t.clone())
            .or_default()
            .push(v.label.clone());
    }
    let reps: Vec<String> = ranks.values().map(|vs| vs[0].clone()).collect();
    for vs in ranks.values() {
        let list = vs
            .iter()
            .map(|l| format!("\"{l}\""))
            .collect::<Vec<_>>()
            .join("; ");
        let _ = writeln!(out, "  {{ rank=same; {list}; }}");
    }
    for pair in reps.windows(2) {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [style=invis];", pair[0], pair[1]);
    }
    for seg in &d.segments {
        let (style, label) = match &seg.kind {
            SegmentKind::Photon(i) => ("style=dashed".to_string(), format!("k{}", i + 1)),
            SegmentKind::Residue(s) => (
                "style=solid".to_string(),
                format!("s{}.{}", s.side.number(), s.idx),
            ),
            SegmentKind::DirectStar(s) => {
                ("style=bold, penwidth=2".to_string(), format!("*{}", s.number()))
            }
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [{}, label=\"{}\"];",
            d.vertices[seg.from].label, d.vertices[seg.to].label, style, label
        );
    }
    out.push_str("}\n");
    out
}
