//! Singularity matrices: half-gradients of every denominator with respect to
//! the direction blocks dOmega_d, the radial scalars dr_d, and the combined
//! external-momentum column dp, plus the rescaling to momentum variables
//! (columns dk, dp) valid wherever the leading radial variables are nonzero.

use super::denominators::{momentum_to_nested, radial_product, Denominator, DenominatorSet, Kind};
use super::poly::{
    half_gradient_slot, pv_add, pv_eq, pv_is_zero, pv_substitute, pv_zero, Poly, PolyVec, Var,
};
use super::SymbolicError;
use crate::radial::SectorPoint;
use crate::rat::rat;
use num::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct MatrixRow {
    pub den: Denominator,
    /// Slot-representative vector entry per depth column dOmega_d.
    pub d_omega: Vec<PolyVec>,
    /// Scalar entry per radial column dr_d.
    pub d_r: Vec<Poly>,
    /// Combined external-momentum column (sum over the three p blocks).
    pub dp: PolyVec,
}

#[derive(Clone, Debug)]
pub struct LandauMatrix {
    pub n: usize,
    pub rows: Vec<MatrixRow>,
    /// Sector permutation carried from the denominator set.
    pub sector: Vec<usize>,
}

pub fn landau_matrix(ds: &DenominatorSet) -> LandauMatrix {
    let n = ds.n;
    let rows = ds
        .entries
        .iter()
        .map(|den| {
            let f = &den.f;
            let d_omega = (0..n)
                .map(|d| half_gradient_slot(f, |c| Var::Om(d as u8, c)))
                .collect();
            let d_r = (0..n)
                .map(|d| f.derivative(Var::R(d as u8)).scale(&rat(1, 2)))
                .collect();
            let mut dp = pv_zero();
            for s in 0..3 {
                dp = pv_add(&dp, &half_gradient_slot(f, |c| Var::P(s as u8, c)));
            }
            MatrixRow {
                den: den.clone(),
                d_omega,
                d_r,
                dp,
            }
        })
        .collect();
    LandauMatrix {
        n,
        rows,
        sector: ds.sector.clone(),
    }
}

impl LandauMatrix {
    pub fn row(&self, i: usize) -> &MatrixRow {
        &self.rows[i]
    }

    pub fn without_kind(&self, kind: Kind) -> LandauMatrix {
        LandauMatrix {
            n: self.n,
            rows: self
                .rows
                .iter()
                .filter(|r| r.den.kind != kind)
                .cloned()
                .collect(),
            sector: self.sector.clone(),
        }
    }

    /// Paper-layout rendering: one line per row, columns separated by " | ".
    pub fn render(&self) -> String {
        let mut header = vec!["f_j".to_string()];
        for d in 0..self.n {
            header.push(format!("dOm{}", d + 1));
        }
        for d in 0..self.n {
            header.push(format!("dr{}", d + 1));
        }
        header.push("dp".to_string());
        let mut lines = vec![header.join(" | ")];
        for row in &self.rows {
            let mut cells = vec![format!("{} = {}", row.den.label(), row.den.f)];
            for e in &row.d_omega {
                cells.push(display_vector_entry(e));
            }
            for e in &row.d_r {
                cells.push(e.to_string());
            }
            cells.push(display_vector_entry(&row.dp));
            lines.push(cells.join(" | "));
        }
        lines.join("\n")
    }
}

#[derive(Clone, Debug)]
pub struct KFormRow {
    pub den: Denominator,
    /// Momentum-form function with photons at depth >= g set to zero.
    pub f_k: Poly,
    /// Entry per retained momentum column dk (depth order, depths < g).
    pub d_k: Vec<PolyVec>,
    pub dp: PolyVec,
}

#[derive(Clone, Debug)]
pub struct KFormMatrix {
    pub n: usize,
    /// 1-based index of the first vanishing radial variable; n+1 if none.
    pub g: usize,
    pub sector: Vec<usize>,
    pub rows: Vec<KFormRow>,
    /// Labels of rows whose retained entries all vanish on the stratum.
    pub omitted: Vec<String>,
}

/// Rewrite the matrix over the original momentum variables. Valid for the
/// depth block i < g where g indexes the first vanishing radial coordinate
/// at the given point; deeper photon momenta are set to zero. The momentum
/// form of every row is verified against the direction/radial form through
/// the nested substitution before any truncation.
pub fn to_k_form(lm: &LandauMatrix, sp: &SectorPoint) -> Result<KFormMatrix, SymbolicError> {
    let n = lm.n;
    assert_eq!(sp.n(), n, "sector point arity");
    let g = (0..n)
        .position(|d| sp.r[d].is_zero())
        .map(|d| d + 1)
        .unwrap_or(n + 1);
    if g == 1 {
        return Err(SymbolicError::ZeroScale);
    }
    let nested = momentum_to_nested(&lm.sector);
    let mut rows = Vec::new();
    let mut omitted = Vec::new();
    // Zero out photons at depth >= g.
    let mut truncate: BTreeMap<Var, Poly> = BTreeMap::new();
    for d in (g - 1)..n {
        for c in 0..4u8 {
            truncate.insert(Var::K(lm.sector[d] as u8, c), Poly::zero());
        }
    }
    for row in &lm.rows {
        let f_k_full = match &row.den.f_k {
            Some(f) => f.clone(),
            None => {
                omitted.push(row.den.label());
                continue;
            }
        };
        // Full-universe identity per retained column: the radial-form entry
        // times the row scale equals the momentum-form entry under the
        // nested substitution times the column scale r_1...r_d.
        let mut d_k_full = Vec::with_capacity(n);
        for d in 0..n {
            let photon = lm.sector[d] as u8;
            let ek = half_gradient_slot(&f_k_full, |c| Var::K(photon, c));
            let lhs = pv_substitute(&ek, &nested);
            let col_scale = radial_product(d + 1);
            let scaled = PolyVec::new(
                lhs.t.mul_monomial(&col_scale),
                lhs.x.mul_monomial(&col_scale),
                lhs.y.mul_monomial(&col_scale),
                lhs.z.mul_monomial(&col_scale),
            );
            let rhs = PolyVec::new(
                row.d_omega[d].t.mul_monomial(&row.den.scale),
                row.d_omega[d].x.mul_monomial(&row.den.scale),
                row.d_omega[d].y.mul_monomial(&row.den.scale),
                row.d_omega[d].z.mul_monomial(&row.den.scale),
            );
            if !pv_eq(&scaled, &rhs) {
                return Err(SymbolicError::InvalidStarGraph(format!(
                    "momentum-form column {} of {} fails the rescaling identity",
                    d + 1,
                    row.den.label()
                )));
            }
            d_k_full.push(ek);
        }
        let mut dp_k = pv_zero();
        for s in 0..3 {
            dp_k = pv_add(&dp_k, &half_gradient_slot(&f_k_full, |c| Var::P(s as u8, c)));
        }
        {
            let lhs = pv_substitute(&dp_k, &nested);
            let rhs = PolyVec::new(
                row.dp.t.mul_monomial(&row.den.scale),
                row.dp.x.mul_monomial(&row.den.scale),
                row.dp.y.mul_monomial(&row.den.scale),
                row.dp.z.mul_monomial(&row.den.scale),
            );
            if !pv_eq(&lhs, &rhs) {
                return Err(SymbolicError::InvalidStarGraph(format!(
                    "momentum-form dp column of {} fails the rescaling identity",
                    row.den.label()
                )));
            }
        }
        // Truncate to the stratum and drop rows with no retained content.
        let f_k = f_k_full.substitute(&truncate);
        let d_k: Vec<PolyVec> = d_k_full
            .iter()
            .take(g - 1)
            .map(|e| pv_substitute(e, &truncate))
            .collect();
        let dp = pv_substitute(&dp_k, &truncate);
        if d_k.iter().all(pv_is_zero) && pv_is_zero(&dp) {
            omitted.push(row.den.label());
            continue;
        }
        rows.push(KFormRow {
            den: row.den.clone(),
            f_k,
            d_k,
            dp,
        });
    }
    Ok(KFormMatrix {
        n,
        g,
        sector: lm.sector.clone(),
        rows,
        omitted,
    })
}

impl KFormMatrix {
    pub fn render(&self) -> String {
        let mut header = vec!["f_j".to_string()];
        for d in 0..(self.g - 1) {
            header.push(format!("dk{}", self.sector[d] + 1));
        }
        header.push("dp".to_string());
        let mut lines = vec![header.join(" | ")];
        for row in &self.rows {
            let mut cells = vec![format!("{} = {}", row.den.label(), row.f_k)];
            for e in &row.d_k {
                cells.push(display_vector_entry(e));
            }
            cells.push(display_vector_entry(&row.dp));
            lines.push(cells.join(" | "));
        }
        if !self.omitted.is_empty() {
            lines.push(format!("omitted: {}", self.omitted.join(", ")));
        }
        lines.join("\n")
    }
}

/// Render a vector entry as a combination of the named four-vectors
/// (p_s, Omega_d, k_i) with polynomial coefficients; falls back to printing
/// the four components when the entry is not such a combination.
pub fn display_vector_entry(v: &PolyVec) -> String {
    if pv_is_zero(v) {
        return "0".to_string();
    }
    if let Some(parts) = decompose_vector_entry(v) {
        let mut out = String::new();
        for (base, coeff) in parts {
            let piece = if coeff == Poly::one() {
                base
            } else if coeff.num_terms() == 1 {
                format!("{coeff} {base}")
            } else {
                format!("({coeff}) {base}")
            };
            if out.is_empty() {
                out = piece;
            } else {
                out = format!("{out} + {piece}");
            }
        }
        out
    } else {
        format!("[{}; {}; {}; {}]", v.t, v.x, v.y, v.z)
    }
}

/// Basis four-vector for a component variable, if it is one.
fn base_of(v: Var) -> Option<(String, u8, Var)> {
    match v {
        Var::P(s, c) => Some((format!("p{}", s + 1), c, Var::P(s, 0))),
        Var::Om(d, c) => Some((format!("Om{}", d + 1), c, Var::Om(d, 0))),
        Var::K(i, c) => Some((format!("k{}", i + 1), c, Var::K(i, 0))),
        Var::R(_) => None,
    }
}

fn decompose_vector_entry(v: &PolyVec) -> Option<Vec<(String, Poly)>> {
    // Gather coefficient polynomials from each component; they must agree.
    // Keyed by the component-0 variable so bases print in p, Omega, k order.
    let mut coeffs: BTreeMap<(Var, String), [Poly; 4]> = BTreeMap::new();
    for (comp_idx, comp) in [&v.t, &v.x, &v.y, &v.z].into_iter().enumerate() {
        for (mono, c) in comp.terms() {
            // Exactly one vector-component variable of this component index,
            // with exponent 1.
            let mut found: Option<(Var, String)> = None;
            let mut rest: Vec<(Var, u32)> = Vec::new();
            for (var, e) in mono.powers() {
                match base_of(*var) {
                    Some((name, c_idx, key)) if c_idx as usize == comp_idx => {
                        if *e != 1 || found.is_some() {
                            return None;
                        }
                        found = Some((key, name));
                        // Radial factors may multiply the base.
                    }
                    Some(_) => {
                        // A vector variable of the wrong component in this
                        // term: not a clean combination.
                        return None;
                    }
                    None => rest.push((*var, *e)),
                }
            }
            let found = found?;
            let entry = coeffs
                .entry(found)
                .or_insert_with(|| [Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero()]);
            entry[comp_idx].add_term(
                super::poly::Monomial::from_powers(rest),
                c.clone(),
            );
        }
    }
    let mut out = Vec::new();
    for ((_, name), comps) in coeffs {
        if comps[0] != comps[1] || comps[0] != comps[2] || comps[0] != comps[3] {
            // Components may legitimately differ when some components of the
            // entry vanish identically; only accept exact agreement or zero.
            let nonzero: Vec<&Poly> = comps.iter().filter(|p| !p.is_zero()).collect();
            if nonzero.is_empty() {
                continue;
            }
            let first = nonzero[0];
            if !nonzero.iter().all(|p| *p == first) {
                return None;
            }
            // Some component is zero while others are not: not a multiple of
            // the full basis vector.
            return None;
        }
        out.push((name, comps[0].clone()));
    }
    // Verify reconstruction.
    let mut rebuilt = pv_zero();
    for (name, coeff) in &out {
        let base = base_vector_by_name(name)?;
        rebuilt = pv_add(
            &rebuilt,
            &PolyVec::new(
                base.t.mul(coeff),
                base.x.mul(coeff),
                base.y.mul(coeff),
                base.z.mul(coeff),
            ),
        );
    }
    if pv_eq(&rebuilt, v) {
        Some(out)
    } else {
        None
    }
}

fn base_vector_by_name(name: &str) -> Option<PolyVec> {
    let (kind, idx) = name.split_at(if name.starts_with("Om") { 2 } else { 1 });
    let i: usize = idx.parse().ok()?;
    match kind {
        "p" => Some(super::poly::p_vector(i - 1)),
        "Om" => Some(super::poly::omega_vector(i - 1)),
        "k" => Some(super::poly::k_vector(i - 1)),
        _ => None,
    }
}
