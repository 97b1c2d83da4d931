//! Sparse multivariate polynomials over exact rationals.
//!
//! The variable universe covers the three external momentum blocks p_s, the
//! per-depth direction blocks Omega_d and radial scalars r_d, and the
//! per-photon momentum blocks k_i used by the momentum-variable matrix form.
//! Canonical term order is graded lexicographic over the fixed variable
//! enumeration (p blocks, Omega blocks, r block, k blocks).

use crate::kinematics::FourVector;
use crate::rat::{rat, rat_to_f64, Rat};
use num::traits::{One, Zero};
use num::Signed;
use std::collections::BTreeMap;
use std::fmt;

const COMP: [&str; 4] = ["t", "x", "y", "z"];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Var {
    /// Component c of external momentum p_{s+1}.
    P(u8, u8),
    /// Component c of the unit direction at depth d+1.
    Om(u8, u8),
    /// Radial scalar at depth d+1.
    R(u8),
    /// Component c of photon momentum k_{i+1} (momentum-variable form).
    K(u8, u8),
}

impl Var {
    pub fn name(&self) -> String {
        match self {
            Var::P(s, c) => format!("p{}{}", s + 1, COMP[*c as usize]),
            Var::Om(d, c) => format!("Om{}{}", d + 1, COMP[*c as usize]),
            Var::R(d) => format!("r{}", d + 1),
            Var::K(i, c) => format!("k{}{}", i + 1, COMP[*c as usize]),
        }
    }
}

/// Product of variable powers; factors sorted by variable, exponents > 0.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(Var, u32)>) -> Self {
        powers.retain(|(_, e)| *e > 0);
        powers.sort_by_key(|(v, _)| *v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = self.0.clone();
        powers.extend_from_slice(&other.0);
        Monomial::from_powers(powers)
    }

    /// Divide by `other`; None unless every exponent is large enough.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut rest = self.0.iter().copied().collect::<BTreeMap<Var, u32>>();
        for (v, e) in &other.0 {
            let have = rest.remove(v)?;
            if have < *e {
                return None;
            }
            if have > *e {
                out.push((*v, have - *e));
            }
        }
        out.extend(rest);
        Some(Monomial::from_powers(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", v.name())?;
            } else {
                write!(f, "{}^{}", v.name(), e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::default();
        p.add_term(Monomial::var(v), Rat::one());
        p
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = Poly::default();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<Rat> {
        self.terms.get(m).cloned()
    }

    /// Highest term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::default();
        for (m, k) in &self.terms {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            out.terms.insert(ma.mul(m), ca.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut powers: Vec<(Var, u32)> = m
                .powers()
                .iter()
                .map(|(w, k)| if *w == v { (*w, k - 1) } else { (*w, *k) })
                .collect();
            powers.retain(|(_, k)| *k > 0);
            out.add_term(Monomial::from_powers(powers), c * rat(e as i64, 1));
        }
        out
    }

    /// Simultaneous substitution; variables absent from the map stay.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, e) in m.powers() {
                let factor = match map.get(v) {
                    Some(p) => p.pow(*e),
                    None => Poly::monomial(Monomial::from_powers(vec![(*v, *e)]), Rat::one()),
                };
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval<F: Fn(Var) -> Rat>(&self, assign: &F) -> Rat {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (v, e) in m.powers() {
                let x = assign(*v);
                for _ in 0..*e {
                    val *= &x;
                }
            }
            total += val;
        }
        total
    }

    pub fn eval_f64<F: Fn(Var) -> f64>(&self, assign: &F) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut val = rat_to_f64(c);
            for (v, e) in m.powers() {
                val *= assign(*v).powi(*e as i32);
            }
            total += val;
        }
        total
    }

    /// Exact division by a monomial; None if any term lacks a factor.
    pub fn div_exact_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            out.terms.insert(ma.try_div(m)?, ca.clone());
        }
        Some(out)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Largest monomial in r-variables dividing every term.
    pub fn radial_content(&self) -> Monomial {
        let mut common: Option<BTreeMap<Var, u32>> = None;
        for (m, _) in &self.terms {
            let rs: BTreeMap<Var, u32> = m
                .powers()
                .iter()
                .filter(|(v, _)| matches!(v, Var::R(_)))
                .map(|(v, e)| (*v, *e))
                .collect();
            common = Some(match common {
                None => rs,
                Some(prev) => prev
                    .into_iter()
                    .filter_map(|(v, e)| {
                        let o = rs.get(&v)?;
                        Some((v, e.min(*o)))
                    })
                    .collect(),
            });
            if common.as_ref().map(|c| c.is_empty()).unwrap_or(false) {
                break;
            }
        }
        Monomial::from_powers(common.unwrap_or_default().into_iter().collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest-order terms first, matching hand-written layout.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag} {m}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        Poly::add(&self, &rhs)
    }
}

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        Poly::sub(&self, &rhs)
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        Poly::mul(&self, &rhs)
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(&self)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

pub type PolyVec = FourVector<Poly>;

/// The four-vector whose components are the block's variables.
pub fn block_vector(block: impl Fn(u8) -> Var) -> PolyVec {
    PolyVec::new(
        Poly::var(block(0)),
        Poly::var(block(1)),
        Poly::var(block(2)),
        Poly::var(block(3)),
    )
}

pub fn p_vector(s: usize) -> PolyVec {
    block_vector(|c| Var::P(s as u8, c))
}

pub fn omega_vector(d: usize) -> PolyVec {
    block_vector(|c| Var::Om(d as u8, c))
}

pub fn k_vector(i: usize) -> PolyVec {
    block_vector(|c| Var::K(i as u8, c))
}

pub fn pv_add(a: &PolyVec, b: &PolyVec) -> PolyVec {
    PolyVec::new(
        a.t.add(&b.t),
        a.x.add(&b.x),
        a.y.add(&b.y),
        a.z.add(&b.z),
    )
}

pub fn pv_sub(a: &PolyVec, b: &PolyVec) -> PolyVec {
    PolyVec::new(
        a.t.sub(&b.t),
        a.x.sub(&b.x),
        a.y.sub(&b.y),
        a.z.sub(&b.z),
    )
}

pub fn pv_neg(a: &PolyVec) -> PolyVec {
    PolyVec::new(a.t.neg(), a.x.neg(), a.y.neg(), a.z.neg())
}

pub fn pv_scale(a: &PolyVec, s: &Poly) -> PolyVec {
    PolyVec::new(a.t.mul(s), a.x.mul(s), a.y.mul(s), a.z.mul(s))
}

pub fn pv_zero() -> PolyVec {
    PolyVec::new(Poly::zero(), Poly::zero(), Poly::zero(), Poly::zero())
}

pub fn pv_is_zero(a: &PolyVec) -> bool {
    a.t.is_zero() && a.x.is_zero() && a.y.is_zero() && a.z.is_zero()
}

pub fn pv_eq(a: &PolyVec, b: &PolyVec) -> bool {
    a.t == b.t && a.x == b.x && a.y == b.y && a.z == b.z
}

/// Minkowski square with signature (+,-,-,-).
pub fn pv_mink_sq(a: &PolyVec) -> Poly {
    pv_mink_dot(a, a)
}

pub fn pv_mink_dot(a: &PolyVec, b: &PolyVec) -> Poly {
    a.t.mul(&b.t)
        .sub(&a.x.mul(&b.x))
        .sub(&a.y.mul(&b.y))
        .sub(&a.z.mul(&b.z))
}

pub fn pv_substitute(a: &PolyVec, map: &BTreeMap<Var, Poly>) -> PolyVec {
    PolyVec::new(
        a.t.substitute(map),
        a.x.substitute(map),
        a.y.substitute(map),
        a.z.substitute(map),
    )
}

pub fn pv_eval<F: Fn(Var) -> Rat>(a: &PolyVec, assign: &F) -> FourVector<Rat> {
    FourVector::new(
        a.t.eval(assign),
        a.x.eval(assign),
        a.y.eval(assign),
        a.z.eval(assign),
    )
}

pub fn pv_eval_f64<F: Fn(Var) -> f64>(a: &PolyVec, assign: &F) -> FourVector<f64> {
    FourVector::new(
        a.t.eval_f64(assign),
        a.x.eval_f64(assign),
        a.y.eval_f64(assign),
        a.z.eval_f64(assign),
    )
}

/// Half-gradient of f with respect to a four-vector block, returned as the
/// raised-index representative X: lower(X) = (X_t, -X_x, -X_y, -X_z) equals
/// half the true coordinate gradient, so printed entries match hand layout
/// for both Minkowski rows and the Euclidean constraint rows.
pub fn half_gradient_slot(f: &Poly, block: impl Fn(u8) -> Var) -> PolyVec {
    let half = rat(1, 2);
    let d = |c: u8| f.derivative(block(c)).scale(&half);
    PolyVec::new(d(0), d(1).neg(), d(2).neg(), d(3).neg())
}
