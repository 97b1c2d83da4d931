//! Exact distortion decision. At an evaluated point the vanishing
//! denominators demand a direction in Omega-space that shifts every one of
//! them into its upper half-plane while respecting the binding equality
//! constraints. Exactly one of two certificates exists: such a direction
//! with a positive margin, or a nonnegative dependence among the gradients
//! (a solution of the stationarity system). Both are found by exact
//! rational pivoting and re-verified by substitution before being returned.

pub mod simplex;

use crate::kinematics::{RatVector, TrianglePoint};
use crate::radial::{exact_unit_vector, lightlike_near_unit, perturb_on_sphere, SectorPoint};
use crate::rat::{rat, rat_i, Rat};
use crate::symbolic::denominators::{DenominatorSet, Kind};
use crate::symbolic::landau::{LandauMatrix, MatrixRow};
use crate::symbolic::poly::{Poly, PolyVec, Var};
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplex::{solve, LpOutcome, StandardLp};

#[derive(Debug, thiserror::Error)]
pub enum FeasibilityError {
    #[error("triangle point has irrational coordinates; distortion decisions need a rational interior point")]
    IrrationalPoint,
    #[error("invalid sector point: {0}")]
    Radial(#[from] crate::radial::RadialError),
}

/// The gradient system binding a distortion direction at one point.
#[derive(Clone, Debug)]
pub struct ActiveSystem {
    pub n: usize,
    /// Rows demanding a strictly positive shift: flattened 4n-component
    /// dOmega gradients of the vanishing photon and residue functions.
    /// The three retained poles are exempt from the demand and never enter.
    pub eta: Vec<Vec<Rat>>,
    /// Equality rows: direction-norm constraints when still present in the
    /// matrix, plus boundary rows whose radial coordinate sits at zero.
    pub lambda: Vec<Vec<Rat>>,
    /// Matrix-row indices of all functions vanishing within tolerance.
    pub active_set: Vec<usize>,
    /// Matrix-row index behind each eta row.
    pub eta_rows: Vec<usize>,
    /// Matrix-row index behind each lambda row.
    pub lambda_rows: Vec<usize>,
    /// Evaluated function values, one per matrix row.
    pub values: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Distortion { delta: Vec<Rat>, margin: Rat },
    LandauSolution { alpha: Vec<Rat>, beta: Vec<Rat> },
}

impl Certificate {
    pub fn is_distortion(&self) -> bool {
        matches!(self, Certificate::Distortion { .. })
    }
}

fn assignment<'a>(
    ps: &'a [RatVector; 3],
    omega: &'a [RatVector],
    r: &'a [Rat],
) -> impl Fn(Var) -> Rat + 'a {
    move |v: Var| match v {
        Var::P(s, c) => ps[s as usize].comp(c as usize).clone(),
        Var::Om(d, c) => omega[d as usize].comp(c as usize).clone(),
        Var::R(d) => r[d as usize].clone(),
        Var::K(..) => unreachable!("momentum variables never appear in direction/radial forms"),
    }
}

/// True gradient components from a stored matrix entry (the entry's lowered
/// form is the half-gradient, so the spatial components flip back).
fn eval_gradient<F: Fn(Var) -> Rat>(pv: &PolyVec, assign: &F) -> [Rat; 4] {
    [
        pv.t.eval(assign),
        -pv.x.eval(assign),
        -pv.y.eval(assign),
        -pv.z.eval(assign),
    ]
}

fn flatten_omega_gradients<F: Fn(Var) -> Rat>(row: &MatrixRow, n: usize, assign: &F) -> Vec<Rat> {
    let mut out = Vec::with_capacity(4 * n);
    for d in 0..n {
        out.extend(eval_gradient(&row.d_omega[d], assign));
    }
    out
}

/// Evaluate every matrix row at (p(tp), sp) and collect the active system.
/// Functions count as vanishing when |f| <= eps * max(1, m^2). Rows demand
/// distortion only if they carry an i0 prescription and are not one of the
/// three retained poles; norm rows (if not already eliminated) and boundary
/// rows at r = 0 contribute equality constraints.
pub fn evaluate_active_system(
    ds: &DenominatorSet,
    lm: &LandauMatrix,
    tp: &TrianglePoint,
    sp: &SectorPoint,
    eps: &Rat,
) -> Result<ActiveSystem, FeasibilityError> {
    let ps = tp
        .rational_momenta()
        .ok_or(FeasibilityError::IrrationalPoint)?;
    evaluate_at(ds, lm, &ps, sp, eps)
}

fn evaluate_at(
    ds: &DenominatorSet,
    lm: &LandauMatrix,
    ps: &[RatVector; 3],
    sp: &SectorPoint,
    eps: &Rat,
) -> Result<ActiveSystem, FeasibilityError> {
    let n = lm.n;
    assert_eq!(sp.n(), n, "sector point arity");
    let msq = &ds.mass * &ds.mass;
    let scale = if msq > Rat::one() { msq } else { Rat::one() };
    let tol = eps * &scale;
    let assign = assignment(ps, &sp.omega, &sp.r);
    let mut sys = ActiveSystem {
        n,
        eta: Vec::new(),
        lambda: Vec::new(),
        active_set: Vec::new(),
        eta_rows: Vec::new(),
        lambda_rows: Vec::new(),
        values: Vec::new(),
    };
    for (i, row) in lm.rows.iter().enumerate() {
        let value = row.den.f.eval(&assign);
        let active = value.abs() <= tol;
        if active {
            sys.active_set.push(i);
        }
        match row.den.kind {
            Kind::PhotonPropagator | Kind::Residue => {
                if active {
                    sys.eta.push(flatten_omega_gradients(row, n, &assign));
                    sys.eta_rows.push(i);
                }
            }
            Kind::Pole => {}
            Kind::DeltaConstraint => {
                sys.lambda.push(flatten_omega_gradients(row, n, &assign));
                sys.lambda_rows.push(i);
            }
            Kind::Theta => {
                let depth = row.den.depth.expect("boundary row depth");
                if sp.r[depth].is_zero() {
                    sys.lambda.push(flatten_omega_gradients(row, n, &assign));
                    sys.lambda_rows.push(i);
                }
            }
        }
        sys.values.push(value);
    }
    Ok(sys)
}

/// Check a certificate against the system it claims to decide.
pub fn verify_certificate(sys: &ActiveSystem, cert: &Certificate) -> Result<(), String> {
    let dims = 4 * sys.n;
    match cert {
        Certificate::Distortion { delta, margin } => {
            if delta.len() != dims {
                return Err("distortion direction has the wrong dimension".into());
            }
            if !margin.is_positive() {
                return Err("margin is not positive".into());
            }
            if delta.iter().any(|d| d.abs() > Rat::one()) {
                return Err("direction leaves the unit box".into());
            }
            for (b, row) in sys.eta.iter().enumerate() {
                let shift: Rat = row.iter().zip(delta).map(|(a, d)| a * d).sum();
                if shift < *margin {
                    return Err(format!("eta row {b} shifts by {shift} < margin {margin}"));
                }
            }
            for (c, row) in sys.lambda.iter().enumerate() {
                let drift: Rat = row.iter().zip(delta).map(|(a, d)| a * d).sum();
                if !drift.is_zero() {
                    return Err(format!("lambda row {c} drifts by {drift}"));
                }
            }
            Ok(())
        }
        Certificate::LandauSolution { alpha, beta } => {
            if alpha.len() != sys.eta.len() || beta.len() != sys.lambda.len() {
                return Err("multiplier count mismatch".into());
            }
            if alpha.iter().any(|a| a.is_negative()) {
                return Err("negative alpha multiplier".into());
            }
            let total: Rat = alpha.iter().sum();
            if !total.is_positive() {
                return Err("alpha multipliers all zero".into());
            }
            for a in 0..dims {
                let mut acc = Rat::zero();
                for (b, row) in sys.eta.iter().enumerate() {
                    acc += &alpha[b] * &row[a];
                }
                for (c, row) in sys.lambda.iter().enumerate() {
                    acc += &beta[c] * &row[a];
                }
                if !acc.is_zero() {
                    return Err(format!("gradient combination nonzero in component {a}"));
                }
            }
            Ok(())
        }
    }
}

/// Decide the system: maximize t subject to eta.d >= t per row, lambda.d = 0,
/// |d_a| <= 1. A positive optimum certifies distortion; optimum zero yields
/// the dependence multipliers from the alternative system. Total on exact
/// input; both outcomes re-verify before returning, and a verification
/// failure aborts (it would mean the pivoting itself is broken).
pub fn farkas_decide(sys: &ActiveSystem) -> Certificate {
    let dims = 4 * sys.n;
    if sys.eta.is_empty() {
        let cert = Certificate::Distortion {
            delta: vec![Rat::zero(); dims],
            margin: Rat::one(),
        };
        verify_certificate(sys, &cert).expect("trivial certificate");
        return cert;
    }
    let nb = sys.eta.len();
    let nc = sys.lambda.len();
    // Shifted variables s = d + 1 in [0, 2]; columns: s (dims), t, surplus
    // per eta row (nb), slack per box bound (dims).
    let ncols = dims + 1 + nb + dims;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (bi, row) in sys.eta.iter().enumerate() {
        let mut r = vec![Rat::zero(); ncols];
        r[..dims].clone_from_slice(row);
        r[dims] = rat_i(-1);
        r[dims + 1 + bi] = rat_i(-1);
        a.push(r);
        b.push(row.iter().sum());
    }
    for row in &sys.lambda {
        let mut r = vec![Rat::zero(); ncols];
        r[..dims].clone_from_slice(row);
        a.push(r);
        b.push(row.iter().sum());
    }
    for ai in 0..dims {
        let mut r = vec![Rat::zero(); ncols];
        r[ai] = Rat::one();
        r[dims + 1 + nb + ai] = Rat::one();
        a.push(r);
        b.push(rat_i(2));
    }
    let mut c = vec![Rat::zero(); ncols];
    c[dims] = Rat::one();
    let outcome = solve(&StandardLp { a, b, c });
    let LpOutcome::Optimal { x, value } = outcome else {
        panic!("distortion program is feasible and bounded by construction: {outcome:?}");
    };
    assert!(
        !value.is_negative(),
        "the zero direction is always feasible"
    );
    if value.is_positive() {
        let delta: Vec<Rat> = x[..dims].iter().map(|s| s - Rat::one()).collect();
        let cert = Certificate::Distortion {
            delta,
            margin: value,
        };
        if let Err(e) = verify_certificate(sys, &cert) {
            panic!("internal error: distortion certificate failed substitution: {e}");
        }
        return cert;
    }
    // Optimum zero: the alternative system is feasible. Find nonnegative
    // alpha (normalized to sum 1) and free beta = bp - bm with
    // alpha.eta + beta.lambda = 0.
    let ncols = nb + 2 * nc;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for ai in 0..dims {
        let mut r = Vec::with_capacity(ncols);
        for row in &sys.eta {
            r.push(row[ai].clone());
        }
        for row in &sys.lambda {
            r.push(row[ai].clone());
        }
        for row in &sys.lambda {
            r.push(-row[ai].clone());
        }
        a.push(r);
        b.push(Rat::zero());
    }
    let mut r = vec![Rat::zero(); ncols];
    r[..nb].fill(Rat::one());
    a.push(r);
    b.push(Rat::one());
    let c = vec![Rat::zero(); ncols];
    let outcome = solve(&StandardLp { a, b, c });
    let LpOutcome::Optimal { x, .. } = outcome else {
        panic!("internal error: no distortion and no dependence; the alternative must hold");
    };
    let alpha = x[..nb].to_vec();
    let beta: Vec<Rat> = (0..nc).map(|ci| &x[nb + ci] - &x[nb + nc + ci]).collect();
    let cert = Certificate::LandauSolution { alpha, beta };
    if let Err(e) = verify_certificate(sys, &cert) {
        panic!("internal error: dependence certificate failed substitution: {e}");
    }
    cert
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    /// Relative vanishing tolerance.
    pub eps: Rat,
    /// Chart bound for the leading radius.
    pub delta: Rat,
    /// Continuity probes per distortion point.
    pub probes: usize,
    /// Attempt closed-form residue activation alongside the light-cone
    /// directions.
    pub target_residues: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 100,
            seed: 0,
            eps: Rat::new(1.into(), 1_000_000_000.into()),
            delta: rat(1, 100),
            probes: 2,
            target_residues: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StratumReport {
    /// 0 = interior; g >= 1 is the face r_g = 0.
    pub stratum: usize,
    pub samples: usize,
    pub distortions: usize,
    pub landau_solutions: usize,
    pub min_margin: Option<Rat>,
    /// Samples where a residue function was driven to zero exactly.
    pub residue_activated: usize,
    pub active_rows_total: usize,
    pub probes_held: usize,
    pub probes_run: usize,
    /// Every sampled point with its verified certificate, in draw order.
    pub outcomes: Vec<SampleOutcome>,
}

/// One decided sample, kept in full so reports can embed re-checkable
/// certificates.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub point: SectorPoint,
    pub active_rows: Vec<usize>,
    /// Matrix rows behind the strict-demand block, in certificate order.
    pub eta_rows: Vec<usize>,
    /// Matrix rows behind the equality block, in certificate order.
    pub lambda_rows: Vec<usize>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub strata: Vec<StratumReport>,
}

impl SweepReport {
    pub fn all_distorted(&self) -> bool {
        self.strata.iter().all(|s| s.landau_solutions == 0)
    }

    pub fn total_samples(&self) -> usize {
        self.strata.iter().map(|s| s.samples).sum()
    }

    pub fn min_margin(&self) -> Option<Rat> {
        self.strata
            .iter()
            .filter_map(|s| s.min_margin.clone())
            .min()
    }
}

/// Sample active points on every stratum, decide each, and aggregate.
/// Points are constructed exactly: light-cone directions activate photon
/// rows with f = 0 identically, and residue rows are activated where
/// possible by solving the leading radius in closed form (every residue
/// function is linear in it). Found directions are re-tested at nearby
/// perturbed points to probe continuity.
pub fn distortion_sweep(
    ds: &DenominatorSet,
    lm: &LandauMatrix,
    tp: &TrianglePoint,
    cfg: &SweepConfig,
) -> Result<SweepReport, FeasibilityError> {
    let ps = tp
        .rational_momenta()
        .ok_or(FeasibilityError::IrrationalPoint)?;
    let n = lm.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let residue_rows: Vec<usize> = lm
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.den.kind == Kind::Residue)
        .map(|(i, _)| i)
        .collect();
    let mut strata = Vec::new();
    for stratum in 0..=n {
        let mut rep = StratumReport {
            stratum,
            samples: 0,
            distortions: 0,
            landau_solutions: 0,
            min_margin: None,
            residue_activated: 0,
            active_rows_total: 0,
            probes_held: 0,
            probes_run: 0,
            outcomes: Vec::new(),
        };
        for _ in 0..cfg.samples {
            let (sp, residue_hit) =
                sample_point(lm, &ps, stratum, &residue_rows, cfg, &mut rng)?;
            let sys = evaluate_at(ds, lm, &ps, &sp, &cfg.eps)?;
            rep.samples += 1;
            rep.active_rows_total += sys.active_set.len();
            if residue_hit {
                rep.residue_activated += 1;
            }
            let certificate = farkas_decide(&sys);
            match &certificate {
                Certificate::Distortion { delta, margin } => {
                    rep.distortions += 1;
                    rep.min_margin = Some(match rep.min_margin.take() {
                        Some(m) if m < *margin => m,
                        _ => margin.clone(),
                    });
                    for _ in 0..cfg.probes {
                        rep.probes_run += 1;
                        let sp2 = perturb_point(&sp, cfg, &mut rng);
                        let sys2 = evaluate_at(ds, lm, &ps, &sp2, &cfg.eps)?;
                        if direction_still_valid(&sys2, delta) {
                            rep.probes_held += 1;
                        }
                    }
                }
                Certificate::LandauSolution { .. } => {
                    rep.landau_solutions += 1;
                }
            }
            rep.outcomes.push(SampleOutcome {
                point: sp,
                active_rows: sys.active_set.clone(),
                eta_rows: sys.eta_rows.clone(),
                lambda_rows: sys.lambda_rows.clone(),
                certificate,
            });
        }
        strata.push(rep);
    }
    Ok(SweepReport { strata })
}

/// Transport the found shift to the perturbed system by projecting out the
/// new equality rows (exact Gram-Schmidt), then ask whether every strict
/// demand still moves positively along it. Positivity is scale-invariant, so
/// no renormalization is needed.
fn direction_still_valid(sys: &ActiveSystem, delta: &[Rat]) -> bool {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for row in &sys.lambda {
        let mut u = row.clone();
        orthogonalize(&mut u, &basis);
        if u.iter().any(|x| !x.is_zero()) {
            basis.push(u);
        }
    }
    let mut d = delta.to_vec();
    orthogonalize(&mut d, &basis);
    sys.eta.iter().all(|row| {
        let shift: Rat = row.iter().zip(&d).map(|(a, d)| a * d).sum();
        shift.is_positive()
    })
}

fn orthogonalize(v: &mut [Rat], basis: &[Vec<Rat>]) {
    for b in basis {
        let num: Rat = b.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
        let den: Rat = b.iter().map(|x| x * x).sum();
        let f = num / den;
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= &f * bi;
        }
    }
}

fn random_radius<R: Rng>(rng: &mut R, upper: &Rat) -> Rat {
    upper * rat(rng.gen_range(8i64..=63), 64)
}

/// Directions with at least one exactly lightlike entry (activating that
/// photon row identically) and radial coordinates respecting the stratum.
fn draw_frame<R: Rng>(
    n: usize,
    stratum: usize,
    cfg: &SweepConfig,
    rng: &mut R,
) -> (Vec<RatVector>, Vec<Rat>) {
    let forced = rng.gen_range(0..n);
    let omega: Vec<RatVector> = (0..n)
        .map(|d| {
            if d == forced || rng.gen::<bool>() {
                lightlike_near_unit(rng)
            } else {
                exact_unit_vector(rng)
            }
        })
        .collect();
    let mut r: Vec<Rat> = Vec::with_capacity(n);
    for depth in 1..=n {
        if depth == stratum {
            r.push(Rat::zero());
        } else if depth == 1 {
            r.push(random_radius(rng, &cfg.delta));
        } else {
            r.push(random_radius(rng, &Rat::one()));
        }
    }
    (omega, r)
}

/// Solve f = 0 for the leading radius. Every residue function is linear in
/// r_1 (the divided radial factor cancels exactly one power from each term),
/// so two evaluations extract the coefficients; a third guards the claim.
fn solve_leading_radius(
    f: &Poly,
    ps: &[RatVector; 3],
    omega: &[RatVector],
    r: &[Rat],
) -> Option<Rat> {
    let mut probe = r.to_vec();
    probe[0] = Rat::zero();
    let a0 = f.eval(&assignment(ps, omega, &probe));
    probe[0] = Rat::one();
    let a1 = f.eval(&assignment(ps, omega, &probe)) - &a0;
    probe[0] = rat(1, 2);
    let mid = f.eval(&assignment(ps, omega, &probe));
    assert_eq!(mid, &a0 + &a1 * rat(1, 2), "residue not linear in r_1");
    if a1.is_zero() {
        return None;
    }
    Some(-a0 / a1)
}

fn sample_point<R: Rng>(
    lm: &LandauMatrix,
    ps: &[RatVector; 3],
    stratum: usize,
    residue_rows: &[usize],
    cfg: &SweepConfig,
    rng: &mut R,
) -> Result<(SectorPoint, bool), FeasibilityError> {
    let n = lm.n;
    let r1_cap = &cfg.delta * rat(63, 64);
    let want_residue = cfg.target_residues
        && stratum != 1
        && !residue_rows.is_empty()
        && rng.gen::<bool>();
    if want_residue {
        let target = &lm.rows[residue_rows[rng.gen_range(0..residue_rows.len())]].den.f;
        for _ in 0..12 {
            let (omega, mut r) = draw_frame(n, stratum, cfg, rng);
            if let Some(r1) = solve_leading_radius(target, ps, &omega, &r) {
                if r1.is_positive() && r1 <= r1_cap {
                    r[0] = r1;
                    return finish_point(lm, omega, r, cfg, true);
                }
                // Steer a deeper free radius to the root of the constant
                // part, which pulls the solved r_1 toward zero.
                for s in 2..=n {
                    if s == stratum {
                        continue;
                    }
                    let mut lo = r.clone();
                    lo[0] = Rat::zero();
                    lo[s - 1] = Rat::zero();
                    let f_lo = target.eval(&assignment(ps, &omega, &lo));
                    lo[s - 1] = Rat::one();
                    let slope = target.eval(&assignment(ps, &omega, &lo)) - &f_lo;
                    if slope.is_zero() {
                        continue;
                    }
                    let root = -f_lo / slope;
                    if root < rat(1, 16) || root > rat(15, 16) {
                        continue;
                    }
                    for off in [rat(1, 400), rat(-1, 400), rat(1, 1600), rat(-1, 1600)] {
                        let cand = &root + &off;
                        if !cand.is_positive() || cand > Rat::one() {
                            continue;
                        }
                        let mut steered = r.clone();
                        steered[s - 1] = cand;
                        if let Some(r1) = solve_leading_radius(target, ps, &omega, &steered) {
                            if r1.is_positive() && r1 <= r1_cap {
                                steered[0] = r1;
                                return finish_point(lm, omega, steered, cfg, true);
                            }
                        }
                    }
                }
            }
        }
    }
    let (omega, r) = draw_frame(n, stratum, cfg, rng);
    finish_point(lm, omega, r, cfg, false)
}

fn finish_point(
    lm: &LandauMatrix,
    omega: Vec<RatVector>,
    r: Vec<Rat>,
    cfg: &SweepConfig,
    residue_hit: bool,
) -> Result<(SectorPoint, bool), FeasibilityError> {
    let sp = SectorPoint {
        pi: lm.sector.clone(),
        r,
        omega,
        delta: cfg.delta.clone(),
    };
    sp.validate_with_norm_slack(&Rat::new(1.into(), 10_000_000_000i64.into()))?;
    Ok((sp, residue_hit))
}

/// Nearby point on the same stratum: radial coordinates nudged by about
/// 2^-32 of their scale, directions moved exactly on the unit sphere by
/// about 2^-34. Small enough that exactly activated rows stay within the
/// vanishing tolerance.
fn perturb_point<R: Rng>(sp: &SectorPoint, cfg: &SweepConfig, rng: &mut R) -> SectorPoint {
    let tiny = Rat::new(1.into(), (1u64 << 32).into());
    let h = Rat::new(1.into(), (1u64 << 34).into());
    let mut r = sp.r.clone();
    for (i, ri) in r.iter_mut().enumerate() {
        if ri.is_zero() {
            continue;
        }
        let scale = if i == 0 { cfg.delta.clone() } else { Rat::one() };
        let step = &scale * &tiny;
        let moved = if rng.gen::<bool>() {
            ri.clone() + &step
        } else {
            ri.clone() - &step
        };
        let cap = if i == 0 { cfg.delta.clone() } else { Rat::one() };
        if moved.is_positive() && moved <= cap {
            *ri = moved;
        }
    }
    let omega = sp
        .omega
        .iter()
        .map(|om| perturb_on_sphere(om, &h, rng))
        .collect();
    SectorPoint {
        pi: sp.pi.clone(),
        r,
        omega,
        delta: sp.delta.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symbolic::denominators::build_denominator_set;
    use crate::symbolic::hop::eliminate_delta_rows;
    use crate::symbolic::landau::landau_matrix;

    fn system(eta: Vec<Vec<i64>>, lambda: Vec<Vec<i64>>, n: usize) -> ActiveSystem {
        let conv = |rows: Vec<Vec<i64>>| -> Vec<Vec<Rat>> {
            rows.into_iter()
                .map(|r| {
                    let mut row: Vec<Rat> = r.into_iter().map(rat_i).collect();
                    row.resize(4 * n, Rat::zero());
                    row
                })
                .collect()
        };
        let eta = conv(eta);
        let lambda = conv(lambda);
        ActiveSystem {
            n,
            eta_rows: (0..eta.len()).collect(),
            lambda_rows: (0..lambda.len()).collect(),
            eta,
            lambda,
            active_set: vec![],
            values: vec![],
        }
    }

    #[test]
    fn axis_gradients_distort_with_unit_margin() {
        let sys = system(vec![vec![1, 0], vec![0, 1]], vec![], 1);
        match farkas_decide(&sys) {
            Certificate::Distortion { delta, margin } => {
                assert_eq!(margin, Rat::one());
                assert_eq!(delta[0], Rat::one());
                assert_eq!(delta[1], Rat::one());
            }
            other => panic!("expected distortion, got {other:?}"),
        }
    }

    #[test]
    fn opposed_gradients_yield_dependence() {
        let sys = system(vec![vec![1], vec![-1]], vec![], 1);
        match farkas_decide(&sys) {
            Certificate::LandauSolution { alpha, .. } => {
                assert_eq!(alpha.len(), 2);
                assert!(alpha.iter().all(|a| a.is_positive()));
            }
            other => panic!("expected dependence, got {other:?}"),
        }
    }

    #[test]
    fn equality_constraint_can_block_distortion() {
        // eta wants movement along +x but lambda pins that axis.
        let sys = system(vec![vec![1, 0]], vec![vec![1, 0]], 1);
        match farkas_decide(&sys) {
            Certificate::LandauSolution { alpha, beta } => {
                assert_eq!(alpha.len(), 1);
                assert!(alpha[0].is_positive());
                assert_eq!(beta.len(), 1);
            }
            other => panic!("expected dependence, got {other:?}"),
        }
    }

    #[test]
    fn empty_demand_is_trivially_distortable() {
        let sys = system(vec![], vec![vec![1, 2, 3]], 1);
        match farkas_decide(&sys) {
            Certificate::Distortion { delta, margin } => {
                assert_eq!(margin, Rat::one());
                assert!(delta.iter().all(|d| d.is_zero()));
            }
            other => panic!("expected distortion, got {other:?}"),
        }
    }

    #[test]
    fn random_systems_decide_exclusively() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = 1usize;
            let rows = rng.gen_range(1..=4);
            let eta: Vec<Vec<Rat>> = (0..rows)
                .map(|_| {
                    (0..4 * n)
                        .map(|_| rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3)))
                        .collect()
                })
                .collect();
            let lrows = rng.gen_range(0..=2);
            let lambda: Vec<Vec<Rat>> = (0..lrows)
                .map(|_| {
                    (0..4 * n)
                        .map(|_| rat(rng.gen_range(-3i64..=3), 1))
                        .collect()
                })
                .collect();
            let sys = ActiveSystem {
                n,
                eta_rows: (0..eta.len()).collect(),
                lambda_rows: (0..lambda.len()).collect(),
                eta,
                lambda,
                active_set: vec![],
                values: vec![],
            };
            let cert = farkas_decide(&sys);
            verify_certificate(&sys, &cert).unwrap();
        }
    }

    #[test]
    fn poles_stay_out_of_the_demand() {
        // The side-3 pole carries no photon momentum, so it vanishes
        // identically at on-shell momenta and always sits in the active
        // set, yet the demand rows come only from photon and residue
        // functions.
        let tp = fixtures::symmetric_point();
        let ds = build_denominator_set(&fixtures::fig3('a'), &[0], &tp.mass).unwrap();
        let lm = landau_matrix(&ds);
        let (lm, _) = eliminate_delta_rows(&lm).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sp = SectorPoint {
            pi: vec![0],
            r: vec![rat(1, 200)],
            omega: vec![lightlike_near_unit(&mut rng)],
            delta: rat(1, 100),
        };
        let eps = Rat::new(1.into(), 1_000_000_000.into());
        let sys = evaluate_active_system(&ds, &lm, &tp, &sp, &eps).unwrap();
        let pole_rows: Vec<usize> = lm
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.den.kind == Kind::Pole)
            .map(|(i, _)| i)
            .collect();
        let bare_active: Vec<usize> = pole_rows
            .iter()
            .copied()
            .filter(|i| sys.active_set.contains(i))
            .collect();
        assert_eq!(bare_active.len(), 1);
        assert!(sys.eta_rows.iter().all(|i| !pole_rows.contains(i)));
        // The lightlike direction activates the photon row.
        let photon_row = lm
            .rows
            .iter()
            .position(|r| r.den.kind == Kind::PhotonPropagator)
            .unwrap();
        assert!(sys.eta_rows.contains(&photon_row));
        let cert = farkas_decide(&sys);
        verify_certificate(&sys, &cert).unwrap();
        assert!(cert.is_distortion());
    }

    #[test]
    fn small_sweep_distorts_everywhere() {
        let tp = fixtures::symmetric_point();
        let ds = build_denominator_set(&fixtures::fig3('a'), &[0], &tp.mass).unwrap();
        let lm = landau_matrix(&ds);
        let (lm, _) = eliminate_delta_rows(&lm).unwrap();
        let cfg = SweepConfig {
            samples: 8,
            seed: 9,
            probes: 1,
            ..SweepConfig::default()
        };
        let report = distortion_sweep(&ds, &lm, &tp, &cfg).unwrap();
        assert_eq!(report.strata.len(), 2);
        assert!(report.all_distorted());
        for s in &report.strata {
            assert_eq!(s.distortions, s.samples);
            assert!(s.min_margin.as_ref().unwrap().is_positive());
            assert!(s.active_rows_total >= s.samples);
        }
    }
}
