//! The zigzag algebras of A2 and affine A1 as explicit graded multiplication
//! tables over Q.
//!
//! Basis elements sit in `e_i A e_j` (paths from j to i under the convention
//! that products compose left factors last); idempotents have degree 0,
//! arrows degree 1, loops degree 2.  All length-three products vanish,
//! mixed length-two paths vanish, and return paths are identified with the
//! loop at their vertex.
//!
//! The doubled edge of affine A1 gives two independent arrows each way,
//! `u, v: e1 A e0` and `u*, v*: e0 A e1`, with `u* u = v* v = l0`,
//! `u u* = v v* = l1` and all cross products zero.  This is the unique
//! choice reproducing the graded hom dimensions dim Hom*(P_i, P_i) = 2 and
//! dim Hom*(P_0, P_1) = 2 together with the Calabi-Yau pairing.

use crate::Quiver;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A basis path of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisElem {
    pub name: &'static str,
    /// vertex i in `e_i A e_j`
    pub left: u8,
    /// vertex j in `e_i A e_j`
    pub right: u8,
    pub degree: i64,
}

/// Multiplication table of a zigzag algebra; every non-zero product of basis
/// paths is again a basis path with coefficient one.
#[derive(Debug, Clone)]
pub struct ZigzagAlgebra {
    pub quiver: Quiver,
    basis: Vec<BasisElem>,
    mult: Vec<Vec<Option<u8>>>,
    idem: [u8; 2],
}

impl ZigzagAlgebra {
    pub fn new(quiver: Quiver) -> Self {
        match quiver {
            Quiver::A2 => {
                // 0:e1 1:e2 2:(1|2) 3:(2|1) 4:l1 5:l2
                let basis = vec![
                    BasisElem { name: "e1", left: 0, right: 0, degree: 0 },
                    BasisElem { name: "e2", left: 1, right: 1, degree: 0 },
                    BasisElem { name: "(1|2)", left: 0, right: 1, degree: 1 },
                    BasisElem { name: "(2|1)", left: 1, right: 0, degree: 1 },
                    BasisElem { name: "l1", left: 0, right: 0, degree: 2 },
                    BasisElem { name: "l2", left: 1, right: 1, degree: 2 },
                ];
                let mut alg = ZigzagAlgebra {
                    quiver,
                    mult: base_table(&basis),
                    basis,
                    idem: [0, 1],
                };
                // (1|2)(2|1) = l1, (2|1)(1|2) = l2
                alg.set(2, 3, 4);
                alg.set(3, 2, 5);
                alg
            }
            Quiver::A1hat => {
                // 0:e0 1:e1 2:u 3:v 4:u* 5:v* 6:l0 7:l1
                let basis = vec![
                    BasisElem { name: "e0", left: 0, right: 0, degree: 0 },
                    BasisElem { name: "e1", left: 1, right: 1, degree: 0 },
                    BasisElem { name: "u", left: 1, right: 0, degree: 1 },
                    BasisElem { name: "v", left: 1, right: 0, degree: 1 },
                    BasisElem { name: "u*", left: 0, right: 1, degree: 1 },
                    BasisElem { name: "v*", left: 0, right: 1, degree: 1 },
                    BasisElem { name: "l0", left: 0, right: 0, degree: 2 },
                    BasisElem { name: "l1", left: 1, right: 1, degree: 2 },
                ];
                let mut alg = ZigzagAlgebra {
                    quiver,
                    mult: base_table(&basis),
                    basis,
                    idem: [0, 1],
                };
                // u* u = v* v = l0; u u* = v v* = l1; cross products vanish
                alg.set(4, 2, 6);
                alg.set(5, 3, 6);
                alg.set(2, 4, 7);
                alg.set(3, 5, 7);
                alg
            }
        }
    }

    fn set(&mut self, x: usize, y: usize, z: u8) {
        self.mult[x][y] = Some(z);
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn idempotent(&self, vertex: u8) -> u8 {
        self.idem[vertex as usize]
    }

    /// Basis indices of paths in `e_left A e_right`.
    pub fn paths(&self, left: u8, right: u8) -> Vec<u8> {
        (0..self.basis.len() as u8)
            .filter(|&i| self.basis[i as usize].left == left && self.basis[i as usize].right == right)
            .collect()
    }

    /// Product of two basis paths, `None` when zero or non-composable.
    pub fn mul_basis(&self, x: u8, y: u8) -> Option<u8> {
        self.mult[x as usize][y as usize]
    }
}

fn base_table(basis: &[BasisElem]) -> Vec<Vec<Option<u8>>> {
    // idempotent products; everything else defaults to zero
    let n = basis.len();
    let mut t = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            if basis[x].right != basis[y].left {
                continue;
            }
            if basis[x].degree == 0 {
                t[x][y] = Some(y as u8);
            } else if basis[y].degree == 0 {
                t[x][y] = Some(x as u8);
            }
        }
    }
    t
}

/// A homogeneous element of the algebra: a sparse rational combination of
/// basis paths of one common (left, right, degree) type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgElem {
    pub terms: Vec<(u8, BigRational)>,
}

impl AlgElem {
    pub fn zero() -> Self {
        AlgElem { terms: Vec::new() }
    }

    pub fn basis(i: u8) -> Self {
        AlgElem { terms: vec![(i, BigRational::one())] }
    }

    pub fn basis_scaled(i: u8, c: BigRational) -> Self {
        if c.is_zero() {
            AlgElem::zero()
        } else {
            AlgElem { terms: vec![(i, c)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u8) -> BigRational {
        self.terms
            .iter()
            .find(|&&(j, _)| j == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_assign(&mut self, other: &AlgElem) {
        for (i, c) in &other.terms {
            self.add_term(*i, c.clone());
        }
    }

    pub fn add_term(&mut self, i: u8, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(pos) => {
                self.terms[pos].1 += c;
                if self.terms[pos].1.is_zero() {
                    self.terms.remove(pos);
                }
            }
            Err(pos) => self.terms.insert(pos, (i, c)),
        }
    }

    pub fn scaled(&self, c: &BigRational) -> AlgElem {
        if c.is_zero() {
            return AlgElem::zero();
        }
        AlgElem { terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> AlgElem {
        self.scaled(&-BigRational::one())
    }

    pub fn mul(&self, other: &AlgElem, alg: &ZigzagAlgebra) -> AlgElem {
        let mut out = AlgElem::zero();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                if let Some(z) = alg.mul_basis(*x, *y) {
                    out.add_term(z, cx * cy);
                }
            }
        }
        out
    }

    /// Coefficient of the idempotent at `vertex`, the invertible part of a
    /// degree-0 entry.
    pub fn idem_coeff(&self, alg: &ZigzagAlgebra, vertex: u8) -> BigRational {
        self.coeff(alg.idempotent(vertex))
    }

    /// The common degree of the terms (None when zero).
    pub fn degree(&self, alg: &ZigzagAlgebra) -> Option<i64> {
        self.terms.first().map(|&(i, _)| alg.basis()[i as usize].degree)
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(num_bigint::BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_relations() {
        let alg = ZigzagAlgebra::new(Quiver::A2);
        // (1|2)(2|1) = l1 and (2|1)(1|2) = l2
        assert_eq!(alg.mul_basis(2, 3), Some(4));
        assert_eq!(alg.mul_basis(3, 2), Some(5));
        // non-composable arrows vanish
        assert_eq!(alg.mul_basis(2, 2), None);
        // length three paths vanish: l * arrow = 0
        assert_eq!(alg.mul_basis(4, 2), None);
        assert_eq!(alg.mul_basis(2, 5), None);
        // idempotents act as identities on their side
        assert_eq!(alg.mul_basis(0, 2), Some(2));
        assert_eq!(alg.mul_basis(2, 1), Some(2));
        assert_eq!(alg.mul_basis(1, 2), None);
    }

    #[test]
    fn a1hat_relations() {
        let alg = ZigzagAlgebra::new(Quiver::A1hat);
        // u* u = v* v = l0, u u* = v v* = l1
        assert_eq!(alg.mul_basis(4, 2), Some(6));
        assert_eq!(alg.mul_basis(5, 3), Some(6));
        assert_eq!(alg.mul_basis(2, 4), Some(7));
        assert_eq!(alg.mul_basis(3, 5), Some(7));
        // cross products vanish
        assert_eq!(alg.mul_basis(4, 3), None);
        assert_eq!(alg.mul_basis(5, 2), None);
        assert_eq!(alg.mul_basis(2, 5), None);
        assert_eq!(alg.mul_basis(3, 4), None);
        // hom space dimensions: e0 A e1 is two-dimensional in degree 1
        let p = alg.paths(0, 1);
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|&i| alg.basis()[i as usize].degree == 1));
    }

    #[test]
    fn associativity_of_tables() {
        for quiver in [Quiver::A2, Quiver::A1hat] {
            let alg = ZigzagAlgebra::new(quiver);
            let n = alg.basis().len() as u8;
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let xy_z = alg.mul_basis(x, y).and_then(|xy| alg.mul_basis(xy, z));
                        let x_yz = alg.mul_basis(y, z).and_then(|yz| alg.mul_basis(x, yz));
                        assert_eq!(xy_z, x_yz, "{quiver}: ({x}*{y})*{z} != {x}*({y}*{z})");
                    }
                }
            }
        }
    }

    #[test]
    fn elem_arithmetic() {
        let alg = ZigzagAlgebra::new(Quiver::A2);
        let mut e = AlgElem::basis(2);
        e.add_term(2, rat(2));
        let sq = e.mul(&AlgElem::basis(3), &alg);
        assert_eq!(sq, AlgElem::basis_scaled(4, rat(3)));
        let z = e.scaled(&rat(0));
        assert!(z.is_zero());
    }
}
