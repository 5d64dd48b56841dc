//! Exact computations around spherical objects, braid twists, and stability
//! masses for the 2-Calabi-Yau categories of the A2 and affine-A1 quivers.
//!
//! The crate has three layers that check each other:
//!
//! * a symbolic layer: braid words, their automaton-recognised cyclic normal
//!   forms ([`braid`]), and the PSL(2,Z) / P1(Z) dictionary for spherical
//!   objects ([`psl2`]);
//! * the Harder-Narasimhan automata ([`automaton`]) which transport HN
//!   multiplicity vectors along recognised words by integer matrices;
//! * a brute-force oracle ([`zigzag`]): honest dg complexes of projectives
//!   over the zigzag algebra, spherical twists as cones, minimal models by
//!   Gaussian elimination, and exact graded hom computations over Q.
//!
//! On top of these sit central charges and mass functionals ([`charge`]),
//! the Gromov-coordinate and boundary geometry ([`embedding`]), the geodesic
//! filtration checker ([`geodesic`]), batch verification suites ([`checks`]),
//! and SVG figure emitters ([`svg`]).
//!
//! Every runnable capability has an example under `examples/`; the `hnstab`
//! binary exposes the same operations as subcommands.

pub mod automaton;
pub mod braid;
pub mod charge;
pub mod checks;
pub mod cli;
pub mod embedding;
pub mod geodesic;
pub mod psl2;
pub mod svg;
pub mod zigzag;

/// The two quivers handled by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Quiver {
    /// Two vertices joined by an edge; braid group B3.
    A2,
    /// Two vertices joined by a doubled edge; free group F2.
    A1hat,
}

impl Quiver {
    pub fn name(self) -> &'static str {
        match self {
            Quiver::A2 => "a2",
            Quiver::A1hat => "a1hat",
        }
    }
}

impl std::str::FromStr for Quiver {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a2" => Ok(Quiver::A2),
            "a1hat" | "a1^" | "affine-a1" => Ok(Quiver::A1hat),
            other => Err(format!("unknown quiver `{other}` (expected a2 or a1hat)")),
        }
    }
}

impl std::fmt::Display for Quiver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
