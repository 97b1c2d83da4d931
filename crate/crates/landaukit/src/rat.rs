//! Exact rational scalar helpers: integer square roots, continued-fraction
//! snapping of floats, decimal rendering, and the quadratic extension field
//! used when a mass-shell normalization introduces a single square root.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_i(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Floor of the integer square root (input must be non-negative).
fn isqrt(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus, "isqrt of negative integer");
    n.sqrt()
}

/// Exact square root of a non-negative rational, if one exists in Q.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let sn = isqrt(r.numer());
    let sd = isqrt(r.denom());
    if &sn * &sn == *r.numer() && &sd * &sd == *r.denom() {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// Best rational approximation with denominator at most `max_den`,
/// by the continued-fraction convergent/semiconvergent construction.
pub fn snap_f64(x: f64, max_den: u64) -> Rat {
    assert!(x.is_finite(), "cannot snap a non-finite float");
    let neg = x < 0.0;
    let x0 = x.abs();
    let mut x = x0;
    // (p0/q0, p1/q1) are consecutive convergents.
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    );
    let bound = BigInt::from(max_den);
    for _ in 0..64 {
        let a = x.floor();
        let ab = BigInt::from(a as i64);
        let p2 = &ab * &p1 + &p0;
        let q2 = &ab * &q1 + &q0;
        if q2 > bound {
            // Best semiconvergent still within the bound, compared in f64.
            let k = (&bound - &q0) / &q1;
            let ps = &k * &p1 + &p0;
            let qs = &k * &q1 + &q0;
            let semi = Rat::new(ps, qs);
            let conv = Rat::new(p1.clone(), q1.clone());
            let pick = if (rat_to_f64(&semi) - x0).abs() < (rat_to_f64(&conv) - x0).abs() {
                semi
            } else {
                conv
            };
            return if neg { -pick } else { pick };
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = x - a;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    let out = Rat::new(p1, q1);
    if neg {
        -out
    } else {
        out
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through a scaled division for extreme magnitudes.
        let scale = BigInt::from(1i64 << 53);
        let scaled = (r * Rat::from(scale.clone())).to_integer();
        scaled.to_f64().unwrap_or(f64::MAX) / (1i64 << 53) as f64
    })
}

/// Decimal rendering: exact when the reduced denominator is 2^a 5^b,
/// otherwise 17 significant digits.
pub fn rat_to_decimal(r: &Rat) -> String {
    let den = r.denom();
    let mut d = den.clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut a = 0u32;
    let mut b = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if d.is_one() {
        let shift = a.max(b);
        let pow10 = BigInt::from(10).pow(shift);
        let scaled = (r * Rat::from(pow10)).to_integer();
        let neg = scaled.sign() == Sign::Minus;
        let digits = scaled.magnitude().to_string();
        let digits = if digits.len() as u32 <= shift {
            format!("{}{}", "0".repeat((shift + 1) as usize - digits.len()), digits)
        } else {
            digits
        };
        let point = digits.len() - shift as usize;
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&digits[..point]);
        if shift > 0 {
            s.push('.');
            s.push_str(&digits[point..]);
        }
        s
    } else {
        format!("{:.17e}", rat_to_f64(r))
    }
}

/// Element of Q(sqrt(d)): `a + b*sqrt(d)` with a fixed non-negative radicand.
/// When `d` is a perfect rational square the irrational part folds away on
/// construction, so purely rational data stays purely rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
    pub d: Rat,
}

impl QuadExt {
    pub fn rational(a: Rat) -> Self {
        QuadExt {
            a,
            b: Rat::zero(),
            d: Rat::zero(),
        }
    }

    pub fn new(a: Rat, b: Rat, d: Rat) -> Self {
        assert!(!d.is_negative(), "radicand must be non-negative");
        if b.is_zero() {
            return QuadExt::rational(a);
        }
        if let Some(s) = sqrt_exact(&d) {
            return QuadExt::rational(a + b * s);
        }
        QuadExt { a, b, d }
    }

    /// sqrt(d) itself as a field element.
    pub fn sqrt(d: Rat) -> Self {
        QuadExt::new(Rat::zero(), Rat::one(), d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn same_field(&self, other: &QuadExt) -> Rat {
        if self.b.is_zero() {
            other.d.clone()
        } else if other.b.is_zero() {
            self.d.clone()
        } else {
            assert_eq!(self.d, other.d, "mixed radicands in quadratic extension");
            self.d.clone()
        }
    }

    pub fn add(&self, other: &QuadExt) -> QuadExt {
        let d = self.same_field(other);
        QuadExt::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn sub(&self, other: &QuadExt) -> QuadExt {
        let d = self.same_field(other);
        QuadExt::new(&self.a - &other.a, &self.b - &other.b, d)
    }

    pub fn mul(&self, other: &QuadExt) -> QuadExt {
        let d = self.same_field(other);
        QuadExt::new(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            d,
        )
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, k: &Rat) -> QuadExt {
        QuadExt::new(&self.a * k, &self.b * k, self.d.clone())
    }

    /// Multiplicative inverse via the conjugate; panics on zero.
    pub fn inv(&self) -> QuadExt {
        let n = &self.a * &self.a - &self.b * &self.b * &self.d;
        assert!(!n.is_zero(), "inverting zero in quadratic extension");
        QuadExt::new(&self.a / &n, -&self.b / &n, self.d.clone())
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * rat_to_f64(&self.d).sqrt()
    }

    /// Sign of the real number a + b*sqrt(d), decided exactly.
    pub fn signum(&self) -> i32 {
        if self.b.is_zero() {
            return sign_of(&self.a);
        }
        if self.a.is_zero() {
            return sign_of(&self.b);
        }
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == sb {
            return sa;
        }
        // Compare a^2 against b^2 d; the larger magnitude decides.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

impl std::ops::Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        QuadExt::add(&self, &rhs)
    }
}

impl std::ops::Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        QuadExt::sub(&self, &rhs)
    }
}

impl std::ops::Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        QuadExt::mul(&self, &rhs)
    }
}

impl std::ops::Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::neg(&self)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::rational(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::rational(Rat::one())
    }
}

fn sign_of(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_exact_squares() {
        assert_eq!(sqrt_exact(&rat(25, 4)), Some(rat(5, 2)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(0, 1)), Some(Rat::zero()));
        assert_eq!(sqrt_exact(&rat(-4, 1)), None);
    }

    #[test]
    fn snap_recovers_simple_fractions() {
        assert_eq!(snap_f64(0.5, 1_000_000), rat(1, 2));
        assert_eq!(snap_f64(-2.0 / 3.0, 1_000_000), rat(-2, 3));
        // Best approximation with denominator <= N has error < 1/(d N).
        let s = snap_f64(std::f64::consts::SQRT_2, 1_000_000);
        let err = (rat_to_f64(&s) - std::f64::consts::SQRT_2).abs();
        assert!(err < 1e-11, "snap error {err}");
        assert!(*s.denom() <= BigInt::from(1_000_000));
        let s7 = snap_f64(std::f64::consts::SQRT_2, 100_000_000);
        let err7 = (rat_to_f64(&s7) - std::f64::consts::SQRT_2).abs();
        assert!(err7 < 1e-13, "snap error {err7}");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rat_to_decimal(&rat(5, 4)), "1.25");
        assert_eq!(rat_to_decimal(&rat(-3, 8)), "-0.375");
        assert_eq!(rat_to_decimal(&rat(7, 1)), "7");
        assert!(rat_to_decimal(&rat(1, 3)).contains('e'));
    }

    #[test]
    fn quad_ext_field_ops() {
        let d = rat(9, 2);
        let x = QuadExt::new(rat(1, 2), rat(2, 3), d.clone());
        let y = QuadExt::new(rat(-1, 3), rat(1, 6), d.clone());
        let prod = x.mul(&y);
        // (1/2 + 2/3 s)(-1/3 + 1/6 s) with s^2 = 9/2:
        // a = -1/6 + (2/18)(9/2) = -1/6 + 1/2 = 1/3; b = 1/12 - 2/9 = -5/36.
        assert_eq!(prod.a, rat(1, 3));
        assert_eq!(prod.b, rat(-5, 36));
        let inv = x.inv();
        let one = x.mul(&inv);
        assert_eq!(one, QuadExt::rational(Rat::one()));
        // Perfect-square radicand folds to a rational.
        let folded = QuadExt::new(rat(1, 1), rat(1, 3), rat(25, 4));
        assert!(folded.is_rational());
        assert_eq!(folded.a, rat(11, 6));
    }

    #[test]
    fn quad_ext_sign() {
        let d = rat(2, 1);
        // 3 - 2*sqrt(2) > 0, 1 - sqrt(2) < 0.
        assert_eq!(QuadExt::new(rat_i(3), rat_i(-2), d.clone()).signum(), 1);
        assert_eq!(QuadExt::new(rat_i(1), rat_i(-1), d.clone()).signum(), -1);
        assert_eq!(QuadExt::new(Rat::zero(), Rat::zero(), d).signum(), 0);
    }
}
