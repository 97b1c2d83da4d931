//! Denominator sets for star graphs: the ordered list of functions whose
//! zeros locate the singularities of one pole-decomposition term.
//!
//! Row kinds: one photon propagator Omega_d^2 per photon (radial scale
//! (r_1...r_d)^2 extracted), one pole per side (the star segment), one
//! residue per remaining non-contracted segment (sign-oriented difference of
//! squared segment momenta with the common radial factor r_1...r_ell divided
//! out), one unit-norm constraint and one radial theta row per photon.
//! Each momentum-carrying row also stores its momentum-variable form, so the
//! k-form matrix is recoverable without re-derivation.

use super::poly::{
    k_vector, omega_vector, p_vector, pv_add, pv_mink_sq, Monomial, Poly, PolyVec,
    Var,
};
use super::SymbolicError;
use crate::graphs::{sign_table, SegRef, Side, StarGraph, SIDES};
use crate::rat::{Rat, rat_i};
use num::traits::One;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    PhotonPropagator,
    Pole,
    Residue,
    DeltaConstraint,
    Theta,
}

impl Kind {
    /// Denominator rows carry a +i0 prescription; constraint rows do not.
    pub fn has_i0(&self) -> bool {
        matches!(self, Kind::PhotonPropagator | Kind::Pole | Kind::Residue)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Kind::PhotonPropagator => "photon",
            Kind::Pole => "pole",
            Kind::Residue => "residue",
            Kind::DeltaConstraint => "delta",
            Kind::Theta => "theta",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Denominator {
    /// Function of the direction/radial universe (p, Omega, r).
    pub f: Poly,
    /// Momentum-variable form (p, k), for rows that have one.
    pub f_k: Option<Poly>,
    pub kind: Kind,
    pub side: Option<Side>,
    pub seg: Option<SegRef>,
    /// Photon id for photon rows.
    pub photon: Option<usize>,
    /// 0-based sector depth for photon, delta, and theta rows.
    pub depth: Option<usize>,
    /// Residue orientation sign.
    pub sigma: Option<i8>,
    /// 1-based depth of the divided radial factor r_1...r_ell.
    pub ell: Option<usize>,
    /// Radial factor relating the two forms: subst(f_k) = scale * f.
    pub scale: Monomial,
}

impl Denominator {
    pub fn label(&self) -> String {
        match self.kind {
            Kind::PhotonPropagator => format!("photon {}", self.photon.unwrap() + 1),
            Kind::Pole => format!("side {} star", self.side.unwrap().number()),
            Kind::Residue => {
                let seg = self.seg.unwrap();
                format!("side {} segment {}", seg.side.number(), seg.idx)
            }
            Kind::DeltaConstraint => format!("norm {}", self.depth.unwrap() + 1),
            Kind::Theta => format!("radial {}", self.depth.unwrap() + 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DenominatorSet {
    pub entries: Vec<Denominator>,
    pub n: usize,
    /// Sector permutation: depth (0-based) -> photon id.
    pub sector: Vec<usize>,
    pub star: StarGraph,
    pub mass: Rat,
}

impl DenominatorSet {
    pub fn rows_of(&self, kind: Kind) -> impl Iterator<Item = (usize, &Denominator)> {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(_, d)| d.kind == kind)
    }

    pub fn depth_of_photon(&self, photon: usize) -> usize {
        self.sector
            .iter()
            .position(|&p| p == photon)
            .expect("photon in sector")
    }
}

/// Radial product r_1...r_d (1-based d) as a monomial.
pub fn radial_product(d: usize) -> Monomial {
    Monomial::from_powers((0..d).map(|e| (Var::R(e as u8), 1)).collect())
}

/// Substitution sending each photon momentum k_i to its nested form
/// (r_1...r_depth) Omega_depth.
pub fn momentum_to_nested(sector: &[usize]) -> BTreeMap<Var, Poly> {
    let mut map = BTreeMap::new();
    for (d, &photon) in sector.iter().enumerate() {
        let prefix = radial_product(d + 1);
        for c in 0..4u8 {
            map.insert(
                Var::K(photon as u8, c),
                Poly::monomial(prefix.mul(&Monomial::var(Var::Om(d as u8, c))), Rat::one()),
            );
        }
    }
    map
}

/// Momentum flowing along a segment, in the momentum-variable universe:
/// p_s plus the photon momenta threading the segment.
pub fn segment_momentum(sg: &StarGraph, seg: SegRef) -> PolyVec {
    let mut total = p_vector(seg.side.idx());
    for &i in sg.graph.k_set(seg) {
        total = pv_add(&total, &k_vector(i));
    }
    total
}

pub fn build_denominator_set(
    sg: &StarGraph,
    sector: &[usize],
    mass: &Rat,
) -> Result<DenominatorSet, SymbolicError> {
    let g = &sg.graph;
    let n = g.n;
    if sector.len() != n {
        return Err(SymbolicError::InvalidStarGraph(format!(
            "sector permutation length {} for {} photons",
            sector.len(),
            n
        )));
    }
    // Residues must distinguish their segment from the star.
    for seg in g.segments() {
        if sg.is_star(seg) || g.is_contracted(seg) {
            continue;
        }
        if g.k_set(seg) == g.k_set(sg.star_seg(seg.side)) {
            return Err(SymbolicError::InvalidStarGraph(format!(
                "side {} segment {} carries the same momentum as its star",
                seg.side.number(),
                seg.idx
            )));
        }
    }
    let signs = sign_table(sg, sector);
    let nested = momentum_to_nested(sector);
    let m2 = Poly::constant(mass * mass);
    let mut entries = Vec::new();
    // Photon propagators, by depth.
    for (d, &photon) in sector.iter().enumerate() {
        entries.push(Denominator {
            f: pv_mink_sq(&omega_vector(d)),
            f_k: Some(pv_mink_sq(&k_vector(photon))),
            kind: Kind::PhotonPropagator,
            side: None,
            seg: None,
            photon: Some(photon),
            depth: Some(d),
            sigma: None,
            ell: None,
            scale: radial_product(d + 1).mul(&radial_product(d + 1)),
        });
    }
    // Sides in order; per side, segments ascending: pole at the star,
    // residues elsewhere, contracted segments skipped.
    for side in SIDES {
        for idx in 0..=g.coupling_count[side.idx()] {
            let seg = SegRef { side, idx };
            if g.is_contracted(seg) {
                continue;
            }
            let sum_k = segment_momentum(sg, seg);
            if sg.is_star(seg) {
                let f_k = pv_mink_sq(&sum_k).sub(&m2);
                let f = f_k.substitute(&nested);
                entries.push(Denominator {
                    f,
                    f_k: Some(f_k),
                    kind: Kind::Pole,
                    side: Some(side),
                    seg: Some(seg),
                    photon: None,
                    depth: None,
                    sigma: None,
                    ell: None,
                    scale: Monomial::one(),
                });
            } else {
                let entry = signs.entry(seg).expect("sign entry for residue");
                let star_k = segment_momentum(sg, sg.star_seg(side));
                let diff = pv_mink_sq(&sum_k).sub(&pv_mink_sq(&star_k));
                let f_k = diff.scale(&rat_i(entry.sigma as i64));
                let rho = radial_product(entry.ell);
                let f = f_k
                    .substitute(&nested)
                    .div_exact_monomial(&rho)
                    .ok_or_else(|| {
                        SymbolicError::InvalidStarGraph(format!(
                            "residue on side {} segment {} lacks the radial factor r_1..r_{}",
                            side.number(),
                            idx,
                            entry.ell
                        ))
                    })?;
                entries.push(Denominator {
                    f,
                    f_k: Some(f_k),
                    kind: Kind::Residue,
                    side: Some(side),
                    seg: Some(seg),
                    photon: None,
                    depth: None,
                    sigma: Some(entry.sigma),
                    ell: Some(entry.ell),
                    scale: rho,
                });
            }
        }
    }
    // Unit-norm constraints, then radial theta rows, by depth.
    for d in 0..n {
        let om = omega_vector(d);
        let f = om
            .t
            .mul(&om.t)
            .add(&om.x.mul(&om.x))
            .add(&om.y.mul(&om.y))
            .add(&om.z.mul(&om.z))
            .sub(&Poly::one());
        entries.push(Denominator {
            f,
            f_k: None,
            kind: Kind::DeltaConstraint,
            side: None,
            seg: None,
            photon: Some(sector[d]),
            depth: Some(d),
            sigma: None,
            ell: None,
            scale: Monomial::one(),
        });
    }
    for d in 0..n {
        entries.push(Denominator {
            f: Poly::var(Var::R(d as u8)),
            f_k: None,
            kind: Kind::Theta,
            side: None,
            seg: None,
            photon: Some(sector[d]),
            depth: Some(d),
            sigma: None,
            ell: None,
            scale: Monomial::one(),
        });
    }
    let ds = DenominatorSet {
        entries,
        n,
        sector: sector.to_vec(),
        star: sg.clone(),
        mass: mass.clone(),
    };
    debug_assert!(ds.count_invariants_hold());
    // Every stored momentum form must reproduce the direction/radial form
    // under the nested substitution, up to the recorded radial scale.
    for den in &ds.entries {
        if let Some(f_k) = &den.f_k {
            let back = f_k.substitute(&nested);
            if back != den.f.mul_monomial(&den.scale) {
                return Err(SymbolicError::InvalidStarGraph(format!(
                    "momentum form of {} does not match its radial scale",
                    den.label()
                )));
            }
        }
    }
    Ok(ds)
}

impl DenominatorSet {
    pub fn count_invariants_hold(&self) -> bool {
        let poles = self.rows_of(Kind::Pole).count();
        let photons = self.rows_of(Kind::PhotonPropagator).count();
        let deltas = self.rows_of(Kind::DeltaConstraint).count();
        let thetas = self.rows_of(Kind::Theta).count();
        let residues = self.rows_of(Kind::Residue).count();
        let segments = self
            .star
            .graph
            .segments()
            .iter()
            .filter(|s| !self.star.graph.is_contracted(**s))
            .count();
        poles == 3
            && photons == self.n
            && deltas == self.n
            && thetas == self.n
            && residues == segments - 3
    }
}

/// Exact partial-fraction split of a product of simple inverses:
/// prod_j 1/A_j = sum_i 1/(A_i prod_{j != i} (A_j - A_i)).
/// Returns the individual right-hand terms; None if any A_i vanishes or two
/// A's coincide.
pub fn pole_decomposition_terms(a: &[Rat]) -> Option<Vec<Rat>> {
    use num::Zero;
    let mut terms = Vec::with_capacity(a.len());
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            return None;
        }
        let mut denom = ai.clone();
        for (j, aj) in a.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = aj - ai;
            if d.is_zero() {
                return None;
            }
            denom *= d;
        }
        terms.push(denom.recip());
    }
    Some(terms)
}

/// Product side of the identity.
pub fn inverse_product(a: &[Rat]) -> Option<Rat> {
    use num::Zero;
    let mut prod = Rat::one();
    for ai in a {
        if ai.is_zero() {
            return None;
        }
        prod *= ai;
    }
    Some(prod.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::rat;
    use super::super::poly::{pv_mink_dot, pv_scale};
    use num::Zero;
    use rand::{Rng, SeedableRng};

    fn m1() -> Rat {
        rat_i(1)
    }

    #[test]
    fn fig2_star_a_functions() {
        let sg = fixtures::fig3('a');
        let ds = build_denominator_set(&sg, &[0], &m1()).unwrap();
        assert!(ds.count_invariants_hold());
        assert_eq!(ds.entries.len(), 8);
        // Photon row is Omega^2 with scale r^2.
        let om = omega_vector(0);
        assert_eq!(ds.entries[0].f, pv_mink_sq(&om));
        assert_eq!(ds.entries[0].scale.to_string(), "r1^2");
        // Side-1 star carries the photon: pole (p1 + r Om)^2 - 1.
        let r = Poly::var(Var::R(0));
        let dressed1 = pv_add(&p_vector(0), &pv_scale(&om, &r));
        let pole1 = pv_mink_sq(&dressed1).sub(&Poly::one());
        assert_eq!(ds.entries[1].f, pole1);
        assert_eq!(ds.entries[1].kind, Kind::Pole);
        // Side-1 bare segment: residue 2 p1.Om + r Om^2 with sigma = -1.
        let res1 = pv_mink_dot(&p_vector(0), &om)
            .scale(&rat_i(2))
            .add(&pv_mink_sq(&om).mul(&r));
        assert_eq!(ds.entries[2].f, res1);
        assert_eq!(ds.entries[2].sigma, Some(-1));
        // Side-2 residue mirrors with p2; side-2 pole dressed; side-3 bare.
        let res2 = pv_mink_dot(&p_vector(1), &om)
            .scale(&rat_i(2))
            .add(&pv_mink_sq(&om).mul(&r));
        assert_eq!(ds.entries[3].f, res2);
        let dressed2 = pv_add(&p_vector(1), &pv_scale(&om, &r));
        assert_eq!(ds.entries[4].f, pv_mink_sq(&dressed2).sub(&Poly::one()));
        assert_eq!(
            ds.entries[5].f,
            pv_mink_sq(&p_vector(2)).sub(&Poly::one())
        );
        assert_eq!(ds.entries[6].kind, Kind::DeltaConstraint);
        assert_eq!(ds.entries[7].f, Poly::var(Var::R(0)));
    }

    #[test]
    fn fig2_star_d_functions() {
        let ds = build_denominator_set(&fixtures::fig3('d'), &[0], &m1()).unwrap();
        // Both poles bare; both residues sigma +1.
        assert_eq!(
            ds.entries[2].f,
            pv_mink_sq(&p_vector(0)).sub(&Poly::one())
        );
        assert_eq!(ds.entries[1].sigma, Some(1));
        assert_eq!(ds.entries[4].sigma, Some(1));
        let om = omega_vector(0);
        let r = Poly::var(Var::R(0));
        let res = pv_mink_dot(&p_vector(0), &om)
            .scale(&rat_i(2))
            .add(&pv_mink_sq(&om).mul(&r));
        assert_eq!(ds.entries[1].f, res);
    }

    #[test]
    fn fig6_residue_scales() {
        let ds = build_denominator_set(&fixtures::fig6_star(), &[0, 1], &m1()).unwrap();
        // Side-1 segment 0 carries k1+k2: ell = 1; side-2 segment 1 carries
        // k2 alone: ell = 2, denominator 2 p2.Om2 + r1 r2 Om2^2.
        let by_seg = |side: usize, idx: usize| {
            ds.entries
                .iter()
                .find(|d| {
                    d.seg
                        == Some(SegRef {
                            side: SIDES[side],
                            idx,
                        })
                })
                .unwrap()
        };
        assert_eq!(by_seg(0, 0).ell, Some(1));
        assert_eq!(by_seg(0, 1).ell, Some(1));
        assert_eq!(by_seg(1, 1).ell, Some(2));
        assert_eq!(by_seg(1, 2).ell, Some(1));
        let om2 = omega_vector(1);
        let r1r2 = Poly::var(Var::R(0)).mul(&Poly::var(Var::R(1)));
        let expect = pv_mink_dot(&p_vector(1), &om2)
            .scale(&rat_i(2))
            .add(&pv_mink_sq(&om2).mul(&r1r2));
        assert_eq!(by_seg(1, 1).f, expect);
    }

    #[test]
    fn vertex_coupling_set_counts() {
        let g = fixtures::c_coupling();
        let sgs = crate::graphs::enumerate_star_graphs(&g);
        for sg in &sgs {
            let ds = build_denominator_set(sg, &[0], &m1()).unwrap();
            assert!(ds.count_invariants_hold());
            // 4 non-contracted segments -> 1 residue.
            assert_eq!(ds.rows_of(Kind::Residue).count(), 1);
        }
    }

    #[test]
    fn partial_fraction_identity() {
        // Worked value: 1/(2*3) = 1/2 - 1/3 = 1/6.
        let a = vec![rat_i(2), rat_i(3)];
        let terms = pole_decomposition_terms(&a).unwrap();
        assert_eq!(terms, vec![rat(1, 2), rat(-1, 3)]);
        let sum: Rat = terms.iter().sum();
        assert_eq!(sum, rat(1, 6));
        assert_eq!(inverse_product(&a).unwrap(), rat(1, 6));
        // Random draws, n = 1..6.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            for _ in 0..25 {
                let mut vals: Vec<Rat> = Vec::new();
                while vals.len() < n {
                    let v = rat(rng.gen_range(-40i64..40), rng.gen_range(1i64..12));
                    if !v.is_zero() && !vals.contains(&v) {
                        vals.push(v);
                    }
                }
                let terms = pole_decomposition_terms(&vals).unwrap();
                let sum: Rat = terms.iter().sum();
                assert_eq!(sum, inverse_product(&vals).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_pole_values_rejected() {
        assert!(pole_decomposition_terms(&[rat_i(2), rat_i(2)]).is_none());
        assert!(pole_decomposition_terms(&[Rat::zero()]).is_none());
    }
}
