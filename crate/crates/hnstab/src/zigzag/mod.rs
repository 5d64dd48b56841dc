//! Exact brute-force oracle: the zigzag algebra, dg complexes of shifted
//! indecomposable projectives, spherical twists as cones, minimal models by
//! Gaussian elimination, and graded hom dimensions, all over Q.

mod algebra;
mod complex;

pub use algebra::{AlgElem, BasisElem, ZigzagAlgebra};
pub use complex::{
    apply_word, cone, hom_bar, hom_complex, hom_dims, is_shift_iso, k_class, minimize,
    occurrences, twist, DgComplex, Gen, GradedDims, OracleError,
};
