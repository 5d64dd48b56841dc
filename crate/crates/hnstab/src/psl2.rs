//! Integer 2x2 projective matrices, the spherical-object / P1(Z) dictionary,
//! odd continued fractions, and Farey adjacency.
//!
//! The braid groups act through PSL(2,Z): for A2, `s1 -> [[1,1],[0,1]]`,
//! `s2 -> [[1,0],[-1,1]]`; for A1hat, `s[k] -> [[2k+1,-2k^2],[2,-2k+1]]` and
//! `g -> [[1,2],[0,1]]`.  Spherical objects correspond to primitive points
//! `[a:c]` of P1(Z), with `P1 = [1:0]`, `P2 = [0:1]`, `X = [1:-1]` in the A2
//! case and `P_n = [n:1]`, `P_inf = [1:0]` in the A1hat case.

use crate::braid::{A2Letter, BraidWord, GenTag, Generator, NormalForm};
use crate::Quiver;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// An element of PSL(2,Z): an integer matrix of determinant one, stored with
/// the canonical sign (first non-zero entry of (a,b,c,d) positive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjMatrix {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl ProjMatrix {
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        let m = ProjMatrix { a, b, c, d };
        assert_eq!(m.det(), 1, "projective matrices here must have determinant 1");
        m.canonical()
    }

    pub fn identity() -> Self {
        ProjMatrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    fn canonical(self) -> Self {
        let lead = [self.a, self.b, self.c, self.d].into_iter().find(|&x| x != 0).unwrap_or(1);
        if lead < 0 {
            ProjMatrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn mul(&self, rhs: &ProjMatrix) -> ProjMatrix {
        ProjMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .canonical()
    }

    pub fn inverse(&self) -> ProjMatrix {
        ProjMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    pub fn pow(&self, e: i64) -> ProjMatrix {
        let base = if e >= 0 { *self } else { self.inverse() };
        let mut acc = ProjMatrix::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Columns as projective points: `(M [1:0], M [0:1])`.
    pub fn columns(&self) -> (ProjPoint, ProjPoint) {
        (ProjPoint::new(self.a, self.c), ProjPoint::new(self.b, self.d))
    }
}

impl std::fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A primitive point `[a:c]` of P1(Z), canonicalised so that `c > 0`, or
/// `c = 0` and `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    pub a: i128,
    pub c: i128,
}

impl ProjPoint {
    pub fn new(a: i128, c: i128) -> Self {
        assert!(a != 0 || c != 0, "[0:0] is not a projective point");
        let g = gcd(a.unsigned_abs(), c.unsigned_abs()) as i128;
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 || (c == 0 && a < 0) {
            a = -a;
            c = -c;
        }
        ProjPoint { a, c }
    }

    pub fn infinity() -> Self {
        ProjPoint { a: 1, c: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}]", self.a, self.c)
    }
}

fn gcd(mut x: u128, mut y: u128) -> u128 {
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    if x == 0 {
        1
    } else {
        x
    }
}

/// Matrix of a single generator (with its exponent).
pub fn gen_matrix(quiver: Quiver, g: Generator) -> ProjMatrix {
    let base = match (quiver, g.tag) {
        (Quiver::A2, GenTag::A2(A2Letter::S1)) => ProjMatrix::new(1, 1, 0, 1),
        (Quiver::A2, GenTag::A2(A2Letter::S2)) => ProjMatrix::new(1, 0, -1, 1),
        // sX = g s1 g^-1
        (Quiver::A2, GenTag::A2(A2Letter::SX)) => ProjMatrix::new(2, 1, -1, 0),
        // g = s2 s1
        (Quiver::A2, GenTag::Gamma) => ProjMatrix::new(1, 1, -1, 0),
        (Quiver::A1hat, GenTag::Sk(k)) => {
            let k = k as i128;
            ProjMatrix::new(2 * k + 1, -2 * k * k, 2, -2 * k + 1)
        }
        (Quiver::A1hat, GenTag::Gamma) => ProjMatrix::new(1, 2, 0, 1),
        _ => panic!("generator does not belong to the {quiver} alphabet"),
    };
    base.pow(g.exp)
}

/// Product of generator matrices in word order (a group homomorphism).
pub fn word_matrix(w: &BraidWord) -> ProjMatrix {
    let mut m = ProjMatrix::identity();
    for &g in w.letters() {
        m = m.mul(&gen_matrix(w.quiver, g));
    }
    m
}

/// Matrix of a normal form `g^n * body`.
pub fn normal_form_matrix(nf: &NormalForm) -> ProjMatrix {
    word_matrix(&nf.as_word())
}

/// `[a:c] -> [M11 a + M12 c : M21 a + M22 c]`.
pub fn act(m: &ProjMatrix, p: &ProjPoint) -> ProjPoint {
    ProjPoint::new(m.a * p.a + m.b * p.c, m.c * p.a + m.d * p.c)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PointError {
    #[error("the point at infinity [1:0] has no continued fraction expansion")]
    Infinity,
}

/// Odd-length continued fraction `(n0, n1, ..., n2k)` of `a/c`, with
/// `n_i > 0` for `i >= 1`.  When the plain Euclidean expansion has even
/// length, its last quotient `n >= 2` is split as `(n-1, 1)`.
pub fn cf_odd(p: &ProjPoint) -> Result<Vec<i128>, PointError> {
    if p.is_infinity() {
        return Err(PointError::Infinity);
    }
    let mut terms: Vec<i128> = Vec::new();
    let (mut num, mut den) = (p.a, p.c); // den > 0 by canonical form
    loop {
        let q = num.div_euclid(den);
        let r = num - q * den;
        terms.push(q);
        if r == 0 {
            break;
        }
        num = den;
        den = r;
    }
    if terms.len() % 2 == 0 {
        let last = terms.pop().unwrap();
        if last >= 2 {
            terms.push(last - 1);
            terms.push(1);
        } else {
            // last quotient 1: fold it into the previous term
            let prev = terms.pop().unwrap();
            terms.push(prev + 1);
        }
    }
    debug_assert_eq!(terms.len() % 2, 1);
    debug_assert!(terms.iter().skip(1).all(|&t| t > 0));
    Ok(terms)
}

/// Evaluate a continued fraction as an exact rational `(num, den)`.
pub fn cf_eval(terms: &[i128]) -> (i128, i128) {
    let mut num = 1i128;
    let mut den = 0i128;
    for &t in terms.iter().rev() {
        // x -> t + 1/x
        let (n2, d2) = (t * num + den, num);
        num = n2;
        den = d2;
    }
    (num, den)
}

/// The A2 word `s1^{n0} s2^{-n1} s1^{n2} ...` with `beta P2 = [a:c]`.
pub fn word_of_point(p: &ProjPoint) -> Result<BraidWord, PointError> {
    let terms = cf_odd(p)?;
    let mut w = BraidWord::new(Quiver::A2);
    for (i, &t) in terms.iter().enumerate() {
        let tag = if i % 2 == 0 { A2Letter::S1 } else { A2Letter::S2 };
        let sign = if i % 2 == 0 { 1 } else { -1 };
        w.push(GenTag::A2(tag), sign * t as i64);
    }
    debug_assert_eq!(act(&word_matrix(&w), &ProjPoint::new(0, 1)), *p);
    Ok(w)
}

/// True iff `|a_p c_q - a_q c_p| = 1`.
pub fn farey_adjacent(p: &ProjPoint, q: &ProjPoint) -> bool {
    (p.a * q.c - q.a * p.c).unsigned_abs() == 1
}

/// Exact `sin^2` of the angle between the integer vectors representing two
/// points: `det(p|q)^2 / (|p|^2 |q|^2)`.
pub fn sin2_angle(p: &ProjPoint, q: &ProjPoint) -> BigRational {
    let det = BigInt::from(p.a * q.c - q.a * p.c);
    let np = BigInt::from(p.a * p.a + p.c * p.c);
    let nq = BigInt::from(q.a * q.a + q.c * q.c);
    BigRational::new(det.clone() * det, np * nq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_word;

    fn a2(text: &str) -> BraidWord {
        parse_word(text, Quiver::A2).unwrap()
    }

    #[test]
    fn generator_matrices() {
        let s1 = gen_matrix(Quiver::A2, Generator { tag: GenTag::A2(A2Letter::S1), exp: 1 });
        assert_eq!(s1, ProjMatrix::new(1, 1, 0, 1));
        let s0 = gen_matrix(Quiver::A1hat, Generator { tag: GenTag::Sk(0), exp: 1 });
        assert_eq!(s0, ProjMatrix::new(1, 0, 2, 1));
        // [[3,-2],[2,-1]] equals the paper's [[-3,2],[-2,1]] in PSL2
        let s1h = gen_matrix(Quiver::A1hat, Generator { tag: GenTag::Sk(1), exp: 1 });
        assert_eq!(s1h, ProjMatrix::new(3, -2, 2, -1));
        // g = s2 s1 as matrices
        assert_eq!(word_matrix(&a2("s2 s1")), word_matrix(&a2("g")));
        // and also g = sX s2 = s1 sX
        assert_eq!(word_matrix(&a2("sX s2")), word_matrix(&a2("g")));
        assert_eq!(word_matrix(&a2("s1 sX")), word_matrix(&a2("g")));
        // a1hat gamma = s[1] s[0]
        let g = word_matrix(&parse_word("s[1] s[0]", Quiver::A1hat).unwrap());
        assert_eq!(g, ProjMatrix::new(1, 2, 0, 1));
    }

    #[test]
    fn center_is_trivial_in_psl2() {
        assert_eq!(word_matrix(&a2("")), ProjMatrix::identity());
        assert_eq!(word_matrix(&a2("s2 s1 s2 s1 s2 s1")), ProjMatrix::identity());
        assert_eq!(a2("s2 s1 s2 s1 s2 s1").exponent_sum(), 6);
    }

    #[test]
    fn action_examples() {
        let p2 = ProjPoint::new(0, 1);
        let s1 = word_matrix(&a2("s1"));
        assert_eq!(act(&s1, &p2), ProjPoint::new(1, 1));
        assert_eq!(act(&ProjMatrix::identity(), &ProjPoint::infinity()), ProjPoint::infinity());
        let g = gen_matrix(Quiver::A1hat, Generator { tag: GenTag::Gamma, exp: 1 });
        for n in -3..4 {
            assert_eq!(act(&g, &ProjPoint::new(n, 1)), ProjPoint::new(n + 2, 1));
        }
        // braid relation in PSL2
        assert_eq!(word_matrix(&a2("s1 s2 s1")), word_matrix(&a2("s2 s1 s2")));
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(cf_odd(&ProjPoint::new(0, 1)).unwrap(), vec![0]);
        assert_eq!(cf_odd(&ProjPoint::new(5, 3)).unwrap(), vec![1, 1, 2]);
        assert_eq!(cf_odd(&ProjPoint::new(1, 1)).unwrap(), vec![1]);
        assert_eq!(cf_odd(&ProjPoint::infinity()), Err(PointError::Infinity));
        for (a, c) in [(5, 3), (-7, 11), (1, 2), (9, 1), (-13, 5)] {
            let p = ProjPoint::new(a, c);
            let terms = cf_odd(&p).unwrap();
            assert_eq!(terms.len() % 2, 1);
            let (n, d) = cf_eval(&terms);
            assert_eq!(ProjPoint::new(n, d), p);
        }
    }

    #[test]
    fn words_of_points() {
        let p = ProjPoint::new(5, 3);
        let w = word_of_point(&p).unwrap();
        assert_eq!(w.to_string(), "s1 s2^-1 s1^2");
        assert_eq!(act(&word_matrix(&w), &ProjPoint::new(0, 1)), p);
        // [0:1] is P2 itself
        assert!(word_of_point(&ProjPoint::new(0, 1)).unwrap().is_empty());
        // [1:-1] is X
        let x = ProjPoint::new(1, -1);
        let w = word_of_point(&x).unwrap();
        assert_eq!(act(&word_matrix(&w), &ProjPoint::new(0, 1)), x);
    }

    #[test]
    fn farey_pairs() {
        assert!(farey_adjacent(&ProjPoint::infinity(), &ProjPoint::new(0, 1)));
        assert!(farey_adjacent(&ProjPoint::infinity(), &ProjPoint::new(1, -1)));
        assert!(!farey_adjacent(&ProjPoint::new(2, 1), &ProjPoint::new(0, 1)));
    }

    #[test]
    fn sin2_identity_matches_euclidean_formula() {
        // sin^2 = 1 - cos^2 for a couple of integer vectors
        let p = ProjPoint::new(3, 1);
        let q = ProjPoint::new(-1, 2);
        let s2 = sin2_angle(&p, &q);
        let dot = BigInt::from(3 * (-1) + 1 * 2);
        let cos2 = BigRational::new(dot.clone() * dot, BigInt::from((9 + 1) * (1 + 4)));
        assert_eq!(s2 + cos2, BigRational::from_integer(1.into()));
    }
}
