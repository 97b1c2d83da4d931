//! Scaling operators on the nested coordinates. The operator
//! H_j = Omega_j d/dOmega_j - r_j d/dr_j + r_{j+1} d/dr_{j+1}
//! generates the rescaling that leaves every nested momentum fixed, so it
//! annihilates functions of momenta alone and acts diagonally on the
//! radially rescaled residue functions. Contracting the stationarity rows
//! with this operator eliminates every direction-norm constraint row and
//! certifies that its multiplier vanishes.

use super::landau::LandauMatrix;
use super::poly::{omega_vector, p_vector, pv_mink_dot, Monomial, Poly, PolyVec, Var};
use super::{denominators::Kind, SymbolicError};
use crate::rat::{rat, rat_i, Rat};
use num::Zero;
use rand::Rng;

/// Apply H_j (1-based depth j) to a polynomial in the nested variables.
pub fn apply_h(j: usize, n: usize, f: &Poly) -> Poly {
    assert!(j >= 1 && j <= n, "depth out of range");
    let d = (j - 1) as u8;
    let mut out = Poly::zero();
    for c in 0..4u8 {
        out = out.add(&f.derivative(Var::Om(d, c)).mul(&Poly::var(Var::Om(d, c))));
    }
    out = out.sub(&f.derivative(Var::R(d)).mul(&Poly::var(Var::R(d))));
    if j < n {
        let e = d + 1;
        out = out.add(&f.derivative(Var::R(e)).mul(&Poly::var(Var::R(e))));
    }
    out
}

/// Nested momentum of 1-based depth i: r_1...r_i Omega_i.
fn nested_momentum(i: usize) -> PolyVec {
    let prefix: Vec<(Var, u32)> = (0..i).map(|e| (Var::R(e as u8), 1)).collect();
    scale_by_monomial(&omega_vector(i - 1), Monomial::from_powers(prefix))
}

/// Depth-i momentum divided by r_1...r_ell (requires i >= ell, both 1-based).
fn rescaled_momentum(i: usize, ell: usize) -> PolyVec {
    let suffix: Vec<(Var, u32)> = (ell..i).map(|e| (Var::R(e as u8), 1)).collect();
    scale_by_monomial(&omega_vector(i - 1), Monomial::from_powers(suffix))
}

fn scale_by_monomial(v: &PolyVec, m: Monomial) -> PolyVec {
    PolyVec::new(
        v.t.mul_monomial(&m),
        v.x.mul_monomial(&m),
        v.y.mul_monomial(&m),
        v.z.mul_monomial(&m),
    )
}

fn small_rat(rng: &mut impl Rng) -> Rat {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    rat(num, den)
}

fn nonzero_small_rat(rng: &mut impl Rng) -> Rat {
    loop {
        let c = small_rat(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

fn pick_momentum(n: usize, rng: &mut impl Rng) -> PolyVec {
    let idx = rng.gen_range(0..(3 + n));
    if idx < 3 {
        p_vector(idx)
    } else {
        nested_momentum(idx - 2)
    }
}

/// Random polynomial in Minkowski products of external and nested momenta.
/// Every H_j annihilates such a form.
pub fn random_a1_form(n: usize, rng: &mut impl Rng) -> Poly {
    let mut f = Poly::zero();
    for _ in 0..rng.gen_range(2..=5) {
        let a = pick_momentum(n, rng);
        let b = pick_momentum(n, rng);
        f = f.add(&pv_mink_dot(&a, &b).scale(&small_rat(rng)));
    }
    f
}

/// Random residue-type form at 1-based depth ell: a combination of
/// 2 p_s . k_i / (r_1...r_ell) and k_i . k_i' / (r_1...r_ell) with all
/// momentum depths >= ell. Satisfies H_j f = f for j = ell and H_j f = 0
/// otherwise; always contains a leading 2 p_s . Omega_ell term so it is
/// nonzero.
pub fn random_a2_form(n: usize, ell: usize, rng: &mut impl Rng) -> Poly {
    assert!(ell >= 1 && ell <= n);
    let s = rng.gen_range(0..3);
    let mut f = pv_mink_dot(&p_vector(s), &rescaled_momentum(ell, ell))
        .scale(&(nonzero_small_rat(rng) * rat_i(2)));
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(ell..=n);
        let term = if rng.gen_bool(0.5) {
            let s = rng.gen_range(0..3);
            pv_mink_dot(&p_vector(s), &rescaled_momentum(i, ell)).scale(&rat_i(2))
        } else {
            let i2 = rng.gen_range(ell..=n);
            pv_mink_dot(&rescaled_momentum(i, ell), &nested_momentum(i2))
        };
        f = f.add(&term.scale(&small_rat(rng)));
    }
    f
}

/// Rational c with g = c f, if one exists. Zero g gives c = 0.
pub fn proportionality(f: &Poly, g: &Poly) -> Option<Rat> {
    if g.is_zero() {
        return Some(rat_i(0));
    }
    if f.is_zero() {
        return None;
    }
    let (m, cf) = f.leading_term()?;
    let cg = g.coeff(m)?;
    let c = cg / cf.clone();
    if *g == f.scale(&c) {
        Some(c)
    } else {
        None
    }
}

/// How a row responds to the half-scaling combination at depth j.
#[derive(Clone, Debug, PartialEq)]
pub enum HClass {
    /// (1/2) H_j f = c f: vanishes on solutions since the multiplier times
    /// f is zero there.
    Multiple(Rat),
    /// (1/2) H_j f = f + 1: the norm-constraint row at depth j itself.
    /// On the constraint surface f = 0 this contributes its bare multiplier.
    DeltaSelf,
    /// (1/2) H_j f = -r_j / 2: vanishes where the boundary multiplier is
    /// active.
    ThetaSelf,
    /// (1/2) H_j f = +r_{j+1} / 2: likewise.
    ThetaNext,
}

#[derive(Clone, Debug)]
pub struct RowClass {
    pub label: String,
    pub kind: Kind,
    pub class: HClass,
}

#[derive(Clone, Debug)]
pub struct DeltaElimination {
    /// 1-based depth whose norm-constraint multiplier is certified zero.
    pub depth: usize,
    pub rows: Vec<RowClass>,
}

#[derive(Clone, Debug)]
pub struct DeltaCertificate {
    pub eliminations: Vec<DeltaElimination>,
}

impl DeltaCertificate {
    pub fn summary(&self) -> String {
        self.eliminations
            .iter()
            .map(|e| {
                format!(
                    "depth {}: {} rows classified, norm multiplier = 0",
                    e.depth,
                    e.rows.len()
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Certify that every norm-constraint multiplier vanishes and return the
/// matrix with those rows removed. For each depth j the combination
/// Omega_j . (dOmega_j column) - r_j (dr_j column) + r_{j+1} (dr_{j+1}
/// column) is checked row by row: it must reproduce (1/2) H_j f, and every
/// row must fall into a class that vanishes on solutions except the depth-j
/// norm row, which contributes exactly its multiplier.
pub fn eliminate_delta_rows(
    lm: &LandauMatrix,
) -> Result<(LandauMatrix, DeltaCertificate), SymbolicError> {
    let n = lm.n;
    let mut eliminations = Vec::new();
    for j in 1..=n {
        let d = j - 1;
        let mut rows = Vec::new();
        for row in &lm.rows {
            let f = &row.den.f;
            let half_h = apply_h(j, n, f).scale(&rat(1, 2));
            // The matrix combination must equal (1/2) H_j f.
            let mut combo = pv_mink_dot(&omega_vector(d), &row.d_omega[d]);
            combo = combo.sub(&row.d_r[d].mul(&Poly::var(Var::R(d as u8))));
            if j < n {
                combo = combo.add(&row.d_r[d + 1].mul(&Poly::var(Var::R(d as u8 + 1))));
            }
            if combo != half_h {
                return Err(SymbolicError::CertificationFailure(format!(
                    "column combination at depth {} disagrees with the scaling operator on {}",
                    j,
                    row.den.label()
                )));
            }
            let class = classify(row, j, &half_h)?;
            rows.push(RowClass {
                label: row.den.label(),
                kind: row.den.kind,
                class,
            });
        }
        eliminations.push(DeltaElimination { depth: j, rows });
    }
    let reduced = lm.without_kind(Kind::DeltaConstraint);
    Ok((reduced, DeltaCertificate { eliminations }))
}

fn classify(
    row: &super::landau::MatrixRow,
    j: usize,
    half_h: &Poly,
) -> Result<HClass, SymbolicError> {
    let f = &row.den.f;
    let fail = |what: &str| {
        Err(SymbolicError::CertificationFailure(format!(
            "{} at depth {}: {}",
            row.den.label(),
            j,
            what
        )))
    };
    match row.den.kind {
        Kind::PhotonPropagator | Kind::Pole | Kind::Residue => {
            match proportionality(f, half_h) {
                Some(c) => Ok(HClass::Multiple(c)),
                None => fail("not a multiple of the row function"),
            }
        }
        Kind::DeltaConstraint => {
            if row.den.depth == Some(j - 1) {
                if *half_h == f.add(&Poly::one()) {
                    Ok(HClass::DeltaSelf)
                } else {
                    fail("norm row does not scale to f + 1")
                }
            } else if half_h.is_zero() {
                Ok(HClass::Multiple(rat_i(0)))
            } else {
                fail("norm row at another depth fails to vanish")
            }
        }
        Kind::Theta => {
            let rj = Poly::var(Var::R((j - 1) as u8));
            if row.den.depth == Some(j - 1) {
                if *half_h == rj.scale(&rat(-1, 2)) {
                    Ok(HClass::ThetaSelf)
                } else {
                    fail("boundary row at depth j is not -r/2")
                }
            } else if row.den.depth == Some(j) {
                let rn = Poly::var(Var::R(j as u8));
                if *half_h == rn.scale(&rat(1, 2)) {
                    Ok(HClass::ThetaNext)
                } else {
                    fail("boundary row at depth j+1 is not +r/2")
                }
            } else if half_h.is_zero() {
                Ok(HClass::Multiple(rat_i(0)))
            } else {
                fail("distant boundary row fails to vanish")
            }
        }
    }
}
