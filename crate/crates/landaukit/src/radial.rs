//! Nested radial coordinates for n soft-photon momenta: a sector fixes the
//! ordering of Euclidean magnitudes, and within a sector
//! k_{pi(i)} = r_1 r_2 .. r_i * Omega_i with |Omega_i| = 1 (Euclidean),
//! r_1 in [0, delta], r_i in [0, 1] for i >= 2. The point r_g = 0 compresses
//! all deeper photons simultaneously, which is what makes the boundary strata
//! of the integration region finite in number.

use crate::kinematics::{euclid_norm_sq, rat_vec, FourVector, RatVector};
use crate::rat::{rat_i, snap_f64, sqrt_exact, Rat};
use num::traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RadialError {
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("euclidean norm of k_{index} is not a rational square: |k|^2 = {norm_sq}")]
    NormNotRational { index: usize, norm_sq: Rat },
    #[error("invalid sector data: {0}")]
    Invalid(String),
}

/// Point of one sector of the nested-radial chart.
/// `pi[i]` is the photon index (0-based) occupying depth i.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorPoint {
    pub pi: Vec<usize>,
    pub r: Vec<Rat>,
    pub omega: Vec<RatVector>,
    pub delta: Rat,
}

impl SectorPoint {
    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// Depth occupied by photon `p` (inverse of `pi`).
    pub fn depth_of(&self, p: usize) -> usize {
        self.pi.iter().position(|&q| q == p).expect("photon in sector")
    }

    /// r_1 r_2 .. r_i (1-based depth, inclusive).
    pub fn r_prefix(&self, depth: usize) -> Rat {
        let mut acc = Rat::one();
        for j in 0..depth {
            acc *= self.r[j].clone();
        }
        acc
    }

    pub fn validate(&self) -> Result<(), RadialError> {
        self.validate_with_norm_slack(&Rat::zero())
    }

    /// Structural validation; `slack` loosens only the unit-norm identity,
    /// for points whose angular data was snapped from floats.
    pub fn validate_with_norm_slack(&self, slack: &Rat) -> Result<(), RadialError> {
        let n = self.n();
        if self.r.len() != n || self.omega.len() != n {
            return Err(RadialError::Invalid("length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in &self.pi {
            if p >= n || seen[p] {
                return Err(RadialError::Invalid("pi is not a permutation".into()));
            }
            seen[p] = true;
        }
        if self.r[0].is_negative() || self.r[0] > self.delta {
            return Err(RadialError::BoundViolation(format!(
                "r_1 = {} outside [0, {}]",
                self.r[0], self.delta
            )));
        }
        for (i, ri) in self.r.iter().enumerate().skip(1) {
            if ri.is_negative() || ri > &Rat::one() {
                return Err(RadialError::BoundViolation(format!(
                    "r_{} = {} outside [0, 1]",
                    i + 1,
                    ri
                )));
            }
        }
        for (i, om) in self.omega.iter().enumerate() {
            let err = euclid_norm_sq(om) - Rat::one();
            if err.abs() > *slack {
                return Err(RadialError::Invalid(format!(
                    "|Omega_{}|^2 - 1 = {} exceeds slack",
                    i + 1,
                    err
                )));
            }
        }
        Ok(())
    }
}

/// Exact factorization of photon momenta into nested radial coordinates.
/// Requires every nonzero |k| to be rational (Pythagorean data); magnitudes
/// are ordered descending, ties broken by photon index.
pub fn to_nested(ks: &[RatVector], delta: &Rat) -> Result<SectorPoint, RadialError> {
    let n = ks.len();
    let mut norms: Vec<Rat> = Vec::with_capacity(n);
    for (i, k) in ks.iter().enumerate() {
        let nsq = euclid_norm_sq(k);
        match sqrt_exact(&nsq) {
            Some(r) => norms.push(r),
            None => return Err(RadialError::NormNotRational { index: i, norm_sq: nsq }),
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].cmp(&norms[a]).then(a.cmp(&b)));
    let mut r = Vec::with_capacity(n);
    let mut omega = Vec::with_capacity(n);
    let mut prev = Rat::one();
    for (depth, &p) in order.iter().enumerate() {
        let mag = &norms[p];
        if mag.is_zero() {
            r.push(Rat::zero());
            omega.push(rat_vec(Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()));
            prev = Rat::zero();
            continue;
        }
        let ri = if depth == 0 {
            mag.clone()
        } else {
            // prev > 0 here: zero magnitudes sort last.
            mag / &prev
        };
        r.push(ri);
        let prefix = mag.clone();
        omega.push(ks[p].scale(&(Rat::one() / prefix)));
        prev = mag.clone();
    }
    let sp = SectorPoint {
        pi: order,
        r,
        omega,
        delta: delta.clone(),
    };
    if sp.r[0] > *delta {
        return Err(RadialError::BoundViolation(format!(
            "largest magnitude {} exceeds delta = {}",
            sp.r[0], delta
        )));
    }
    sp.validate()?;
    Ok(sp)
}

/// Inverse chart: k_{pi(i)} = r_1..r_i * Omega_i.
pub fn from_nested(sp: &SectorPoint) -> Vec<RatVector> {
    let n = sp.n();
    let mut ks = vec![FourVector::zero(); n];
    let mut prefix = Rat::one();
    for depth in 0..n {
        prefix *= sp.r[depth].clone();
        ks[sp.pi[depth]] = sp.omega[depth].scale(&prefix);
    }
    ks
}

/// The stratum representative with r_g = 0 (1-based g), rest unchanged.
pub fn boundary_point(sp: &SectorPoint, g: usize) -> Result<SectorPoint, RadialError> {
    if g == 0 || g > sp.n() {
        return Err(RadialError::Invalid(format!(
            "stratum index {} out of range 1..={}",
            g,
            sp.n()
        )));
    }
    let mut out = sp.clone();
    out.r[g - 1] = Rat::zero();
    Ok(out)
}

/// Float-path factorization: same chart over f64, for data without rational
/// norms. Certified by the round-trip tests to 1e-12 relative error.
pub fn to_nested_f64(ks: &[[f64; 4]], delta: f64) -> Result<(Vec<usize>, Vec<f64>, Vec<[f64; 4]>), RadialError> {
    let n = ks.len();
    let norms: Vec<f64> = ks
        .iter()
        .map(|k| (k.iter().map(|c| c * c).sum::<f64>()).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap().then(a.cmp(&b)));
    if n > 0 && norms[order[0]] > delta {
        return Err(RadialError::BoundViolation(format!(
            "largest magnitude {} exceeds delta = {}",
            norms[order[0]], delta
        )));
    }
    let mut r = Vec::with_capacity(n);
    let mut omega = Vec::with_capacity(n);
    let mut prev = 1.0f64;
    for (depth, &p) in order.iter().enumerate() {
        let mag = norms[p];
        if mag == 0.0 {
            r.push(0.0);
            omega.push([1.0, 0.0, 0.0, 0.0]);
            prev = 0.0;
            continue;
        }
        r.push(if depth == 0 { mag } else { mag / prev });
        omega.push([ks[p][0] / mag, ks[p][1] / mag, ks[p][2] / mag, ks[p][3] / mag]);
        prev = mag;
    }
    Ok((order, r, omega))
}

pub fn from_nested_f64(order: &[usize], r: &[f64], omega: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let n = order.len();
    let mut ks = vec![[0.0; 4]; n];
    let mut prefix = 1.0;
    for depth in 0..n {
        prefix *= r[depth];
        ks[order[depth]] = [
            omega[depth][0] * prefix,
            omega[depth][1] * prefix,
            omega[depth][2] * prefix,
            omega[depth][3] * prefix,
        ];
    }
    ks
}

const SNAP_DEN: u64 = 10_000_000;

/// Rational four-vector of unit Euclidean norm up to ~1e-13, snapped from a
/// random direction.
pub fn rational_unit_vector<R: Rng>(rng: &mut R) -> RatVector {
    loop {
        let raw: [f64; 4] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 0.3 {
            continue;
        }
        return rat_vec(
            snap_f64(raw[0] / norm, SNAP_DEN),
            snap_f64(raw[1] / norm, SNAP_DEN),
            snap_f64(raw[2] / norm, SNAP_DEN),
            snap_f64(raw[3] / norm, SNAP_DEN),
        );
    }
}

/// Rational four-vector with Euclidean norm exactly 1, via the inverse
/// stereographic map u -> ((1 - |u|^2), 2u) / (1 + |u|^2) on a random
/// small-denominator rational triple, with a random global sign.
pub fn exact_unit_vector<R: Rng>(rng: &mut R) -> RatVector {
    let u: Vec<Rat> = (0..3)
        .map(|_| Rat::new(rng.gen_range(-24i64..=24).into(), 16.into()))
        .collect();
    let usq: Rat = u.iter().map(|c| c * c).sum();
    let den = &usq + Rat::one();
    let sign = if rng.gen::<bool>() { Rat::one() } else { -Rat::one() };
    rat_vec(
        &sign * (Rat::one() - &usq) / &den,
        &sign * rat_i(2) * &u[0] / &den,
        &sign * rat_i(2) * &u[1] / &den,
        &sign * rat_i(2) * &u[2] / &den,
    )
}

/// Exact point on the Euclidean unit sphere near `omega`: the reflection of
/// `omega` across the hyperplane normal to d = v - (1 - h)(omega . v) omega,
/// which moves it by O(h) while preserving the norm identically. Requires
/// |omega| = 1 exactly. Returns `omega` unchanged if the direction
/// degenerates.
pub fn perturb_on_sphere<R: Rng>(omega: &RatVector, h: &Rat, rng: &mut R) -> RatVector {
    let v = rat_vec(
        Rat::new(rng.gen_range(-8i64..=8).into(), 8.into()),
        Rat::new(rng.gen_range(-8i64..=8).into(), 8.into()),
        Rat::new(rng.gen_range(-8i64..=8).into(), 8.into()),
        Rat::new(rng.gen_range(-8i64..=8).into(), 8.into()),
    );
    let ov: Rat = (0..4).map(|c| omega.comp(c) * v.comp(c)).sum();
    let d = v.sub(&omega.scale(&((Rat::one() - h) * &ov)));
    let dd = euclid_norm_sq(&d);
    let od: Rat = (0..4).map(|c| omega.comp(c) * d.comp(c)).sum();
    if dd.is_zero() || od.is_zero() {
        return omega.clone();
    }
    omega.sub(&d.scale(&(rat_i(2) * &od / &dd)))
}

/// Exactly lightlike rational vector with Euclidean norm 1 up to ~1e-12:
/// time component u ~ 1/sqrt(2) snapped, spatial part u * (a, b, 0)/c from a
/// random Pythagorean triple, randomly signed and permuted.
pub fn lightlike_near_unit<R: Rng>(rng: &mut R) -> RatVector {
    let (a, b, c) = random_pythagorean_triple(rng);
    // 1/sqrt(2) to ~1.5e-12: convergent 470832/665857.
    let u = Rat::new(470832.into(), 665857.into());
    let sa = if rng.gen::<bool>() { 1 } else { -1 };
    let sb = if rng.gen::<bool>() { 1 } else { -1 };
    let st = if rng.gen::<bool>() { 1 } else { -1 };
    let mut sp = [
        &u * rat_i(sa * a) / rat_i(c),
        &u * rat_i(sb * b) / rat_i(c),
        Rat::zero(),
    ];
    let rot = rng.gen_range(0..3);
    sp.rotate_right(rot);
    rat_vec(&u * rat_i(st), sp[0].clone(), sp[1].clone(), sp[2].clone())
}

fn random_pythagorean_triple<R: Rng>(rng: &mut R) -> (i64, i64, i64) {
    let m = rng.gen_range(2i64..=20);
    let n = rng.gen_range(1i64..m);
    (m * m - n * n, 2 * m * n, m * m + n * n)
}

/// Rational vector with exactly rational Euclidean norm (scaled Pythagorean
/// quadruple), magnitude at most `max_mag`.
pub fn pythagorean_vector<R: Rng>(rng: &mut R, max_mag: &Rat) -> (RatVector, Rat) {
    const QUADS: [[i64; 4]; 6] = [
        [1, 2, 2, 3],
        [2, 3, 6, 7],
        [1, 4, 8, 9],
        [4, 4, 7, 9],
        [2, 6, 9, 11],
        [6, 6, 7, 11],
    ];
    let q = QUADS[rng.gen_range(0..QUADS.len())];
    let mut comps = [rat_i(q[0]), rat_i(q[1]), rat_i(q[2]), Rat::zero()];
    for c in comps.iter_mut() {
        if rng.gen::<bool>() {
            *c = -c.clone();
        }
    }
    let rot = rng.gen_range(0..4);
    comps.rotate_right(rot);
    let norm = rat_i(q[3]);
    let scale = max_mag * Rat::new(rng.gen_range(1i64..=100).into(), 100.into()) / &norm;
    (
        rat_vec(
            &comps[0] * &scale,
            &comps[1] * &scale,
            &comps[2] * &scale,
            &comps[3] * &scale,
        ),
        &norm * &scale,
    )
}
