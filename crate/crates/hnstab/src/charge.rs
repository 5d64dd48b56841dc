//! Central charges of type-A stability conditions, with exact rational real
//! and imaginary parts.
//!
//! A type-A charge is stored as the pair `(Z(P1), Z(P2))` (A2) or
//! `(Z(P0), Z(P1))` (A1hat) with `omega = Z(second)/Z(first)` in the closed
//! upper half plane.  For A2 the only excluded ray is `omega = -1` (the
//! class of X must not vanish); for A1hat the excluded set is
//! `L = {-1} union {(1-n)/n : n nonzero integer}`, where some `Z(P_n)`
//! would vanish.  Masses are moduli of exact rational complex numbers, so
//! equalities of squared masses are decidable; phase comparisons reduce to
//! exact sign computations of cross products.

use crate::automaton::Semistable;
use crate::Quiver;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// A complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl QComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        QComplex { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        QComplex { re: int(re), im: int(im) }
    }

    pub fn zero() -> Self {
        QComplex { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &QComplex) -> QComplex {
        QComplex::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &QComplex) -> QComplex {
        QComplex::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> QComplex {
        QComplex::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &QComplex) -> QComplex {
        QComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, c: &BigRational) -> QComplex {
        QComplex::new(&self.re * c, &self.im * c)
    }

    pub fn scale_int(&self, c: i64) -> QComplex {
        self.scale(&int(c))
    }

    pub fn div(&self, o: &QComplex) -> QComplex {
        let n2 = o.norm2();
        assert!(!n2.is_zero(), "division by zero");
        let conj = QComplex::new(o.re.clone(), -o.im.clone());
        self.mul(&conj).scale(&(BigRational::one() / n2))
    }

    /// Exact squared modulus.
    pub fn norm2(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> f64 {
        self.norm2().to_f64().expect("norm2 out of f64 range").sqrt()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
    }

    /// `Im(conj(self) * other)`: positive iff `other` has the larger
    /// argument, for arguments within a half-turn.
    pub fn cross(&self, other: &QComplex) -> BigRational {
        &self.re * &other.im - &self.im * &other.re
    }
}

impl std::fmt::Display for QComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ChargeError {
    #[error("central charge of a generator vanishes")]
    ZeroCharge,
    #[error("Z(second)/Z(first) lies in the open lower half plane; not type A")]
    NotUpperHalfPlane,
    #[error("central charge kills a semistable class (omega on the excluded ray {0})")]
    ExcludedRay(String),
}

/// A type-A central charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeACharge {
    pub quiver: Quiver,
    /// `(Z(P1), Z(P2))` for A2; `(Z(P0), Z(P1))` for A1hat.
    pub z: [QComplex; 2],
}

impl TypeACharge {
    pub fn new(quiver: Quiver, z0: QComplex, z1: QComplex) -> Result<Self, ChargeError> {
        if z0.is_zero() || z1.is_zero() {
            return Err(ChargeError::ZeroCharge);
        }
        // omega = z1/z0 in the closed upper half plane
        let cross = z0.cross(&z1);
        if cross.is_negative() {
            return Err(ChargeError::NotUpperHalfPlane);
        }
        let c = TypeACharge { quiver, z: [z0, z1] };
        match quiver {
            Quiver::A2 => {
                if c.z[0].add(&c.z[1]).is_zero() {
                    return Err(ChargeError::ExcludedRay("omega = -1".into()));
                }
            }
            Quiver::A1hat => {
                if cross.is_zero() {
                    // omega real: must avoid L = {-1} u {(1-n)/n}
                    let t = c.omega_real();
                    let r = BigRational::one() + t;
                    if r.is_zero() {
                        return Err(ChargeError::ExcludedRay("omega = -1".into()));
                    }
                    let inv = BigRational::one() / r;
                    if inv.is_integer() && !inv.is_zero() {
                        return Err(ChargeError::ExcludedRay(format!(
                            "omega = (1-n)/n at n = {}",
                            inv.to_integer()
                        )));
                    }
                } else if c.z[0].add(&c.z[1]).is_zero() {
                    return Err(ChargeError::ExcludedRay("omega = -1".into()));
                }
            }
        }
        Ok(c)
    }

    pub fn from_ints(quiver: Quiver, z0: (i64, i64), z1: (i64, i64)) -> Result<Self, ChargeError> {
        TypeACharge::new(quiver, QComplex::from_ints(z0.0, z0.1), QComplex::from_ints(z1.0, z1.1))
    }

    /// `omega` as a real rational; only meaningful for degenerate charges.
    fn omega_real(&self) -> BigRational {
        let n2 = self.z[0].norm2();
        let dot = &self.z[0].re * &self.z[1].re + &self.z[0].im * &self.z[1].im;
        dot / n2
    }

    /// Strictly non-degenerate: `omega` in the open upper half plane.
    pub fn is_nondegenerate(&self) -> bool {
        self.z[0].cross(&self.z[1]).is_positive()
    }

    /// The central charge of a semistable class.
    pub fn z_of(&self, s: Semistable) -> QComplex {
        match (self.quiver, s) {
            (Quiver::A2, Semistable::P1) => self.z[0].clone(),
            (Quiver::A2, Semistable::P2) => self.z[1].clone(),
            (Quiver::A2, Semistable::X) => self.z[0].add(&self.z[1]),
            (Quiver::A1hat, Semistable::Pk(k)) => {
                // [P_k] = |k| [P1] + |k-1| [P0]
                self.z[1].scale_int(k.abs()).add(&self.z[0].scale_int((k - 1).abs()))
            }
            _ => panic!("semistable {s} does not belong to the {} quiver", self.quiver),
        }
    }

    pub fn mass(&self, s: Semistable) -> f64 {
        self.z_of(s).abs()
    }

    /// Exact squared mass.
    pub fn mass2(&self, s: Semistable) -> BigRational {
        self.z_of(s).norm2()
    }

    /// Exact comparison of shifted phases.  Phases of semistables lie in
    /// `[0,1)` (heart convention), so `phi(a[m]) = phi(a) + m` compares by
    /// the integer shift first and by exact argument on ties.
    pub fn phase_cmp(&self, a: (Semistable, i64), b: (Semistable, i64)) -> Ordering {
        match a.1.cmp(&b.1) {
            Ordering::Equal => {
                let za = self.z_of(a.0);
                let zb = self.z_of(b.0);
                // arg(za) vs arg(zb) within [0, pi)
                let cross = zb.cross(&za);
                if cross.is_positive() {
                    Ordering::Greater
                } else if cross.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
            ord => ord,
        }
    }

    /// `delta = Z(P0) / (Z(P0) + Z(P1))` (A1hat boundary coordinate).
    pub fn delta(&self) -> QComplex {
        assert_eq!(self.quiver, Quiver::A1hat);
        let denom = self.z[0].add(&self.z[1]);
        assert!(!denom.is_zero(), "excluded by the type-A invariant");
        self.z[0].div(&denom)
    }
}

/// The charge with `Z(P0) = delta`, `Z(P1) = 1 - delta` (so that
/// `delta = Z(P0)/(Z(P0)+Z(P1))` exactly).
pub fn charge_from_delta(delta: QComplex) -> Result<TypeACharge, ChargeError> {
    let one = QComplex::new(BigRational::one(), BigRational::zero());
    TypeACharge::new(Quiver::A1hat, delta.clone(), one.sub(&delta))
}

/// Gromov coordinates of an A2 type-A charge: the non-negative solution of
/// `m(P1) = y+z, m(P2) = z+x, m(X) = x+y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GromovA2 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GromovError {
    #[error("negative Gromov coordinate {0}; the charge is not of type A")]
    Negative(f64),
}

pub fn gromov_a2(c: &TypeACharge) -> Result<GromovA2, GromovError> {
    assert_eq!(c.quiver, Quiver::A2);
    let m1 = c.mass(Semistable::P1);
    let m2 = c.mass(Semistable::P2);
    let m3 = c.mass(Semistable::X);
    let g = GromovA2 {
        x: (m2 + m3 - m1) / 2.0,
        y: (m1 + m3 - m2) / 2.0,
        z: (m1 + m2 - m3) / 2.0,
    };
    for v in [g.x, g.y, g.z] {
        if v < -1e-12 {
            return Err(GromovError::Negative(v));
        }
    }
    Ok(g)
}

/// A1hat Gromov coordinates over a window: `x_i` for `|i| <= window`.
#[derive(Debug, Clone)]
pub struct GromovA1hat {
    pub window: i64,
    xs: Vec<f64>,
}

impl GromovA1hat {
    pub fn x(&self, i: i64) -> f64 {
        assert!(i.abs() <= self.window);
        self.xs[(i + self.window) as usize]
    }
}

pub fn gromov_a1hat(c: &TypeACharge, window: i64) -> Result<GromovA1hat, GromovError> {
    assert_eq!(c.quiver, Quiver::A1hat);
    let m = |k: i64| c.mass(Semistable::Pk(k));
    let xs: Vec<f64> = (-window..=window)
        .map(|i| (m(i - 1) + m(i + 1) - 2.0 * m(i)) / 2.0)
        .collect();
    for &v in &xs {
        if v < -1e-9 {
            return Err(GromovError::Negative(v));
        }
    }
    Ok(GromovA1hat { window, xs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TypeACharge::from_ints(Quiver::A2, (1, 0), (0, 1)).is_ok());
        assert!(TypeACharge::from_ints(Quiver::A2, (1, 0), (1, -1)).is_err());
        assert!(TypeACharge::from_ints(Quiver::A2, (1, 0), (-1, 0)).is_err()); // omega = -1
        assert!(TypeACharge::from_ints(Quiver::A2, (1, 0), (-2, 0)).is_ok()); // phi2 = phi1 + 1
        assert!(TypeACharge::from_ints(Quiver::A1hat, (2, 0), (-1, 0)).is_err()); // -1/2 in L
        assert!(TypeACharge::from_ints(Quiver::A1hat, (3, 0), (-1, 0)).is_ok()); // -1/3 not in L
        assert!(TypeACharge::from_ints(Quiver::A1hat, (1, 0), (-2, 0)).is_err()); // -2 in L
    }

    #[test]
    fn masses() {
        let c = TypeACharge::from_ints(Quiver::A2, (1, 0), (0, 1)).unwrap();
        assert!((c.mass(Semistable::X) - 2f64.sqrt()).abs() < 1e-15);
        // degenerate: phases equal, m(X) = m(P1) + m(P2) exactly
        let c = TypeACharge::from_ints(Quiver::A2, (1, 0), (2, 0)).unwrap();
        assert_eq!(c.mass2(Semistable::X), int(9));
        assert!(!c.is_nondegenerate());
        // a1hat: Z(P0) = 1, Z(P1) = i: m(P2) = |2i + 1| = sqrt 5
        let c = TypeACharge::from_ints(Quiver::A1hat, (1, 0), (0, 1)).unwrap();
        assert_eq!(c.mass2(Semistable::Pk(2)), int(5));
        assert_eq!(c.mass2(Semistable::Pk(-1)), int(5)); // |i + 2|^2 = 5
    }

    #[test]
    fn phases() {
        let c = TypeACharge::from_ints(Quiver::A2, (1, 0), (0, 1)).unwrap();
        use Semistable::*;
        assert_eq!(c.phase_cmp((P2, 0), (P1, 0)), Ordering::Greater);
        assert_eq!(c.phase_cmp((X, 0), (P1, 0)), Ordering::Greater);
        assert_eq!(c.phase_cmp((P2, 0), (X, 0)), Ordering::Greater);
        assert_eq!(c.phase_cmp((P1, 1), (P2, 0)), Ordering::Greater);
        assert_eq!(c.phase_cmp((P1, 0), (P1, 0)), Ordering::Equal);
    }

    #[test]
    fn delta_examples() {
        let c = TypeACharge::from_ints(Quiver::A1hat, (1, 0), (1, 0)).unwrap();
        assert_eq!(c.delta(), QComplex::new(ratio(1, 2), int(0)));
        let c = TypeACharge::from_ints(Quiver::A1hat, (1, 0), (0, 1)).unwrap();
        // 1/(1+i) = (1-i)/2
        assert_eq!(c.delta(), QComplex::new(ratio(1, 2), ratio(-1, 2)));
        let c2 = charge_from_delta(QComplex::new(ratio(1, 2), ratio(-1, 2))).unwrap();
        assert_eq!(c2.delta(), QComplex::new(ratio(1, 2), ratio(-1, 2)));
    }

    #[test]
    fn gromov_examples() {
        // degenerate identity: z = 0 when the phases agree
        let c = TypeACharge::from_ints(Quiver::A2, (1, 0), (2, 0)).unwrap();
        let g = gromov_a2(&c).unwrap();
        assert!(g.z.abs() < 1e-12);
        assert!((g.x - 2.0).abs() < 1e-12 && (g.y - 1.0).abs() < 1e-12);
        // a1hat example: x1 = (m(P0) + m(P2) - 2 m(P1))/2 = (1 + sqrt5 - 2)/2
        let c = TypeACharge::from_ints(Quiver::A1hat, (1, 0), (0, 1)).unwrap();
        let g = gromov_a1hat(&c, 5).unwrap();
        assert!((g.x(1) - (1.0 + 5f64.sqrt() - 2.0) / 2.0).abs() < 1e-14);
    }
}
