//! Exact triangle kinematics: four-vectors under the (+,-,-,-) form, the
//! Euclidean dual used by the angular delta constraints, and interior points
//! of the triangle-graph Landau surface built from rational data.
//!
//! An interior point carries on-shell side momenta p1, p2, p3 with
//! a1*p1 + a2*p2 + a3*p3 = 0, all a_s > 0, and the sign pattern
//! p1^0 > 0, p2^0 < 0, p3^0 > 0. The normalization of p2 brings in a single
//! square root, handled in the quadratic extension so every identity check
//! stays exact.

use crate::rat::{sqrt_exact, QuadExt, Rat};
use num::traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourVector<T> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

pub type RatVector = FourVector<Rat>;
pub type QuadVector = FourVector<QuadExt>;

impl<T> FourVector<T>
where
    T: Clone
        + Zero
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Neg<Output = T>,
{
    pub fn new(t: T, x: T, y: T, z: T) -> Self {
        FourVector { t, x, y, z }
    }

    pub fn zero() -> Self {
        FourVector {
            t: T::zero(),
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        FourVector {
            t: self.t.clone() + o.t.clone(),
            x: self.x.clone() + o.x.clone(),
            y: self.y.clone() + o.y.clone(),
            z: self.z.clone() + o.z.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FourVector {
            t: self.t.clone() - o.t.clone(),
            x: self.x.clone() - o.x.clone(),
            y: self.y.clone() - o.y.clone(),
            z: self.z.clone() - o.z.clone(),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        FourVector {
            t: self.t.clone() * k.clone(),
            x: self.x.clone() * k.clone(),
            y: self.y.clone() * k.clone(),
            z: self.z.clone() * k.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        FourVector {
            t: -self.t.clone(),
            x: -self.x.clone(),
            y: -self.y.clone(),
            z: -self.z.clone(),
        }
    }

    /// Euclidean dual: flips the spatial components, so that
    /// minkowski_dot(v, v.dual()) == euclid_norm_sq(v).
    pub fn dual(&self) -> Self {
        FourVector {
            t: self.t.clone(),
            x: -self.x.clone(),
            y: -self.y.clone(),
            z: -self.z.clone(),
        }
    }

    pub fn comp(&self, c: usize) -> &T {
        match c {
            0 => &self.t,
            1 => &self.x,
            2 => &self.y,
            3 => &self.z,
            _ => panic!("four-vector component out of range"),
        }
    }

    pub fn comps(&self) -> [&T; 4] {
        [&self.t, &self.x, &self.y, &self.z]
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

pub fn minkowski_dot<T>(a: &FourVector<T>, b: &FourVector<T>) -> T
where
    T: Clone
        + Zero
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Neg<Output = T>,
{
    a.t.clone() * b.t.clone()
        - a.x.clone() * b.x.clone()
        - a.y.clone() * b.y.clone()
        - a.z.clone() * b.z.clone()
}

pub fn euclid_norm_sq<T>(a: &FourVector<T>) -> T
where
    T: Clone
        + Zero
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Neg<Output = T>,
{
    a.t.clone() * a.t.clone()
        + a.x.clone() * a.x.clone()
        + a.y.clone() * a.y.clone()
        + a.z.clone() * a.z.clone()
}

pub fn rat_vec(t: Rat, x: Rat, y: Rat, z: Rat) -> RatVector {
    FourVector::new(t, x, y, z)
}

fn quad_vec_from_rat(v: &RatVector) -> QuadVector {
    FourVector::new(
        QuadExt::rational(v.t.clone()),
        QuadExt::rational(v.x.clone()),
        QuadExt::rational(v.y.clone()),
        QuadExt::rational(v.z.clone()),
    )
}

#[derive(Debug, Error)]
pub enum KinematicsError {
    #[error("degenerate kinematics: {0}")]
    Degenerate(String),
}

/// Rational point on the unit hyperbola c^2 - s^2 = 1 with c > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolaPoint {
    pub c: Rat,
    pub s: Rat,
}

impl HyperbolaPoint {
    pub fn new(c: Rat, s: Rat) -> Result<Self, KinematicsError> {
        if &c * &c - &s * &s != Rat::one() {
            return Err(KinematicsError::Degenerate(format!(
                "({c}, {s}) is not on the unit hyperbola"
            )));
        }
        if !c.is_positive() {
            return Err(KinematicsError::Degenerate(
                "hyperbola point must have positive time component".into(),
            ));
        }
        Ok(HyperbolaPoint { c, s })
    }
}

/// Interior point of the triangle Landau surface. Components live in a
/// quadratic extension; they fold to plain rationals whenever the loop-sum
/// invariant w^2 is a perfect rational square.
#[derive(Clone, Debug)]
pub struct TrianglePoint {
    pub p: [QuadVector; 3],
    pub alpha: [QuadExt; 3],
    pub mass: Rat,
}

/// Build an interior point from weights a1, a3 > 0 and two distinct rational
/// hyperbola points. p1 and p3 sit on the mass shell in the (t,x) plane,
/// w = a1 p1 + a3 p3 is forward timelike, and p2 = -m w / sqrt(w^2) closes
/// the loop with a2 = sqrt(w^2) / m.
pub fn construct_triangle_point(
    a1: &Rat,
    a3: &Rat,
    rap1: &HyperbolaPoint,
    rap3: &HyperbolaPoint,
    mass: &Rat,
) -> Result<TrianglePoint, KinematicsError> {
    if !a1.is_positive() || !a3.is_positive() {
        return Err(KinematicsError::Degenerate(
            "weights a1, a3 must be positive".into(),
        ));
    }
    if !mass.is_positive() {
        return Err(KinematicsError::Degenerate("mass must be positive".into()));
    }
    if rap1 == rap3 {
        return Err(KinematicsError::Degenerate(
            "p1 and p3 are parallel (identical hyperbola points)".into(),
        ));
    }
    let p1 = rat_vec(
        mass * &rap1.c,
        mass * &rap1.s,
        Rat::zero(),
        Rat::zero(),
    );
    let p3 = rat_vec(
        mass * &rap3.c,
        mass * &rap3.s,
        Rat::zero(),
        Rat::zero(),
    );
    let w = p1.scale(a1).add(&p3.scale(a3));
    let wsq = minkowski_dot(&w, &w);
    if !wsq.is_positive() {
        return Err(KinematicsError::Degenerate(
            "loop sum w is not timelike".into(),
        ));
    }
    // sqrt(w^2), exact in Q(sqrt(w^2)).
    let root = match sqrt_exact(&wsq) {
        Some(r) => QuadExt::rational(r),
        None => QuadExt::sqrt(wsq.clone()),
    };
    let inv_root = root.inv();
    let scale = inv_root.scale(&-mass.clone());
    let p2 = quad_vec_from_rat(&w).scale(&scale);
    let a2 = root.scale(&(Rat::one() / mass));
    let tp = TrianglePoint {
        p: [
            quad_vec_from_rat(&p1),
            p2,
            quad_vec_from_rat(&p3),
        ],
        alpha: [
            QuadExt::rational(a1.clone()),
            a2,
            QuadExt::rational(a3.clone()),
        ],
        mass: mass.clone(),
    };
    verify_interior(&tp)?;
    Ok(tp)
}

/// Exactly re-checks every defining property of an interior point.
pub fn verify_interior(tp: &TrianglePoint) -> Result<(), KinematicsError> {
    let msq = QuadExt::rational(&tp.mass * &tp.mass);
    for (s, p) in tp.p.iter().enumerate() {
        let sq = minkowski_dot(p, p);
        if sq != msq {
            return Err(KinematicsError::Degenerate(format!(
                "p{} is off the mass shell",
                s + 1
            )));
        }
    }
    let mut sum: QuadVector = FourVector::zero();
    for s in 0..3 {
        if tp.alpha[s].signum() <= 0 {
            return Err(KinematicsError::Degenerate(format!(
                "alpha{} is not positive",
                s + 1
            )));
        }
        sum = sum.add(&tp.p[s].scale(&tp.alpha[s]));
    }
    if !sum.is_zero() {
        return Err(KinematicsError::Degenerate(
            "loop equation a1 p1 + a2 p2 + a3 p3 = 0 fails".into(),
        ));
    }
    let signs = [1, -1, 1];
    for s in 0..3 {
        if tp.p[s].t.signum() != signs[s] {
            return Err(KinematicsError::Degenerate(format!(
                "p{}^0 has the wrong sign",
                s + 1
            )));
        }
    }
    Ok(())
}

impl TrianglePoint {
    /// The momenta as plain rational vectors, when no irrational part remains.
    pub fn rational_momenta(&self) -> Option<[RatVector; 3]> {
        let mut out: Vec<RatVector> = Vec::with_capacity(3);
        for p in &self.p {
            let mut comps: Vec<Rat> = Vec::with_capacity(4);
            for c in p.comps() {
                comps.push(c.as_rational()?.clone());
            }
            out.push(rat_vec(
                comps[0].clone(),
                comps[1].clone(),
                comps[2].clone(),
                comps[3].clone(),
            ));
        }
        Some([out[0].clone(), out[1].clone(), out[2].clone()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};
    use num::traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hp(c: Rat, s: Rat) -> HyperbolaPoint {
        HyperbolaPoint::new(c, s).unwrap()
    }

    #[test]
    fn hyperbola_point_validation() {
        assert!(HyperbolaPoint::new(rat_i(1), rat_i(0)).is_ok());
        assert!(HyperbolaPoint::new(rat(5, 4), rat(3, 4)).is_ok());
        assert!(HyperbolaPoint::new(rat(13, 12), rat(5, 12)).is_ok());
        assert!(HyperbolaPoint::new(rat(5, 4), rat(1, 2)).is_err());
        assert!(HyperbolaPoint::new(rat(-5, 4), rat(3, 4)).is_err());
    }

    #[test]
    fn dual_pairing_equals_euclidean_square() {
        let v = rat_vec(rat(1, 2), rat(-2, 3), rat(5, 7), rat_i(1));
        assert_eq!(minkowski_dot(&v, &v.dual()), euclid_norm_sq(&v));
    }

    #[test]
    fn bilinearity_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rv = |rng: &mut ChaCha8Rng| {
            rat_vec(
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
            )
        };
        for _ in 0..1000 {
            let a = rv(&mut rng);
            let b = rv(&mut rng);
            let c = rv(&mut rng);
            let k = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
            assert_eq!(minkowski_dot(&a, &b), minkowski_dot(&b, &a));
            assert_eq!(
                minkowski_dot(&a.add(&b.scale(&k)), &c),
                minkowski_dot(&a, &c) + k.clone() * minkowski_dot(&b, &c)
            );
            assert_eq!(
                euclid_norm_sq(&a),
                minkowski_dot(&a, &a.dual())
            );
        }
    }

    #[test]
    fn construct_symmetric_rational_point() {
        // Symmetric hyperbola pair: w is purely temporal, w^2 = (5/2)^2.
        let tp = construct_triangle_point(
            &rat_i(1),
            &rat_i(1),
            &hp(rat(5, 4), rat(3, 4)),
            &hp(rat(5, 4), rat(-3, 4)),
            &rat_i(1),
        )
        .unwrap();
        let ps = tp.rational_momenta().expect("fully rational point");
        assert_eq!(ps[1], rat_vec(rat_i(-1), rat_i(0), rat_i(0), rat_i(0)));
        assert_eq!(tp.alpha[1], QuadExt::rational(rat(5, 2)));
        verify_interior(&tp).unwrap();
    }

    #[test]
    fn construct_irrational_normalization() {
        // w = (9/4, 3/4), w^2 = 9/2: alpha2 = sqrt(9/2), p2 irrational.
        let tp = construct_triangle_point(
            &rat_i(1),
            &rat_i(1),
            &hp(rat_i(1), rat_i(0)),
            &hp(rat(5, 4), rat(3, 4)),
            &rat_i(1),
        )
        .unwrap();
        assert!(tp.rational_momenta().is_none());
        assert_eq!(tp.alpha[1].d, rat(9, 2));
        let a2 = tp.alpha[1].to_f64();
        assert!((a2 - (4.5f64).sqrt()).abs() < 1e-12);
        verify_interior(&tp).unwrap();
    }

    #[test]
    fn construct_with_weights() {
        let tp = construct_triangle_point(
            &rat_i(2),
            &rat_i(1),
            &hp(rat_i(1), rat_i(0)),
            &hp(rat(13, 12), rat(5, 12)),
            &rat_i(1),
        )
        .unwrap();
        // w = (37/12, 5/12), w^2 = 28/3.
        assert_eq!(tp.alpha[1].d, rat(28, 3));
        verify_interior(&tp).unwrap();
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let h = hp(rat(5, 4), rat(3, 4));
        assert!(construct_triangle_point(&rat_i(0), &rat_i(1), &h, &hp(rat_i(1), rat_i(0)), &rat_i(1)).is_err());
        assert!(construct_triangle_point(&rat_i(1), &rat_i(1), &h, &h, &rat_i(1)).is_err());
        assert!(construct_triangle_point(&rat_i(1), &rat_i(1), &h, &hp(rat_i(1), rat_i(0)), &rat_i(0)).is_err());
    }

    #[test]
    fn random_constructions_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut count = 0;
        while count < 50 {
            // Random rational hyperbola points via (u, v) -> ((u^2+v^2)/(u^2-v^2), 2uv/(u^2-v^2)).
            let u = rng.gen_range(2..=12) as i64;
            let v = rng.gen_range(1..=(u - 1)) as i64;
            let den = u * u - v * v;
            let h1 = hp(rat(u * u + v * v, den), rat(2 * u * v, den));
            let u2 = rng.gen_range(2..=12) as i64;
            let v2 = rng.gen_range(0..u2) as i64;
            let den2 = u2 * u2 - v2 * v2;
            let h2 = hp(rat(u2 * u2 + v2 * v2, den2), rat(-2 * u2 * v2, den2));
            if h1 == h2 {
                continue;
            }
            let a1 = rat(rng.gen_range(1..=6), rng.gen_range(1..=3));
            let a3 = rat(rng.gen_range(1..=6), rng.gen_range(1..=3));
            let m = rat(rng.gen_range(1..=4), 1);
            let tp = construct_triangle_point(&a1, &a3, &h1, &h2, &m).unwrap();
            verify_interior(&tp).unwrap();
            let e1 = tp.p[0].t.to_f64();
            assert!(e1 > 0.0);
            assert!(tp.mass.to_f64().unwrap() > 0.0);
            count += 1;
        }
    }
}
