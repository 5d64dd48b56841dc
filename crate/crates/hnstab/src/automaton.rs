//! Matrix-weighted automata over the braid groups computing Harder-Narasimhan
//! multiplicity vectors (up to shift) for the fixed non-degenerate type-A
//! stability condition.
//!
//! The A2 automaton has three states `[P1,P2]`, `[X,P1]`, `[P2,X]`; every
//! twist loop carries `[[1,1],[0,1]]` and every crossing edge carries
//! `[[1,0],[1,1]]` in the basis order of the state labels, while `g`-edges
//! rotate the states with the identity matrix.  The affine-A1 automaton has
//! states `k` in Z labelled `[P_k, P_{k+1}]`, an edge `s[j]: k -> j` whenever
//! `j != k+1` with matrix `[[|j-k-1|,|j-k-2|],[|j-k|,|j-k-1|]]`, and identity
//! `g`-edges `k -> k+-2`.  States are materialised lazily; a run only ever
//! touches finitely many.

use crate::braid::{A2Letter, GenTag, NormalForm};
use crate::psl2::ProjPoint;
use crate::Quiver;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// States of the A2 automaton, named by their supported semistables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum A2State {
    /// `[P1, P2]`
    P1P2,
    /// `[X, P1]`
    XP1,
    /// `[P2, X]`
    P2X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateId {
    A2(A2State),
    A1hat(i64),
}

impl std::fmt::Display for StateId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateId::A2(A2State::P1P2) => write!(f, "[P1,P2]"),
            StateId::A2(A2State::XP1) => write!(f, "[X,P1]"),
            StateId::A2(A2State::P2X) => write!(f, "[P2,X]"),
            StateId::A1hat(k) => write!(f, "[P{},P{}]", k, k + 1),
        }
    }
}

/// A semistable object of the fixed type-A stability condition (up to shift).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Semistable {
    P1,
    P2,
    X,
    Pk(i64),
}

impl std::fmt::Display for Semistable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Semistable::P1 => write!(f, "P1"),
            Semistable::P2 => write!(f, "P2"),
            Semistable::X => write!(f, "X"),
            Semistable::Pk(k) => write!(f, "P{k}"),
        }
    }
}

impl Semistable {
    pub fn parse(quiver: Quiver, s: &str) -> Option<Semistable> {
        match (quiver, s) {
            (Quiver::A2, "P1" | "p1") => Some(Semistable::P1),
            (Quiver::A2, "P2" | "p2") => Some(Semistable::P2),
            (Quiver::A2, "X" | "x") => Some(Semistable::X),
            (Quiver::A1hat, _) => {
                let k: i64 = s.strip_prefix(['P', 'p'])?.parse().ok()?;
                Some(Semistable::Pk(k))
            }
            _ => None,
        }
    }
}

/// An HN multiplicity vector: a state plus multiplicities over the state's
/// two supported semistables, in label order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnVector {
    pub quiver: Quiver,
    pub state: StateId,
    pub mult: [u128; 2],
}

impl HnVector {
    /// The vector as a finitely-supported map over all semistables.
    pub fn sigma(&self) -> BTreeMap<Semistable, u128> {
        let (s0, s1) = supports(self.state);
        let mut m = BTreeMap::new();
        if self.mult[0] > 0 {
            *m.entry(s0).or_insert(0) += self.mult[0];
        }
        if self.mult[1] > 0 {
            *m.entry(s1).or_insert(0) += self.mult[1];
        }
        m
    }

    /// Occurrence counts `[vertex 0, vertex 1]` of the minimal complex:
    /// `(P1, P2)` for A2 and `(P0, P1)` for A1hat.
    pub fn occurrences(&self) -> [u128; 2] {
        let [alpha, beta] = self.mult;
        match self.state {
            StateId::A2(st) => {
                let (s0, s1) = supports(StateId::A2(st));
                let per = |s: Semistable| -> [u128; 2] {
                    match s {
                        Semistable::P1 => [1, 0],
                        Semistable::P2 => [0, 1],
                        Semistable::X => [1, 1],
                        Semistable::Pk(_) => unreachable!(),
                    }
                };
                let a = per(s0);
                let b = per(s1);
                [alpha * a[0] + beta * b[0], alpha * a[1] + beta * b[1]]
            }
            StateId::A1hat(k) => {
                let p0 = alpha * k.abs_diff(1) as u128 + beta * k.unsigned_abs() as u128;
                let p1 = alpha * k.unsigned_abs() as u128 + beta * (k + 1).unsigned_abs() as u128;
                [p0, p1]
            }
        }
    }

    /// Dot product of multiplicities with masses of the supported objects.
    pub fn mass(&self, mass_of: &dyn Fn(Semistable) -> f64) -> f64 {
        let (s0, s1) = supports(self.state);
        self.mult[0] as f64 * mass_of(s0) + self.mult[1] as f64 * mass_of(s1)
    }

    /// The point of P1(Z) under the state's cone map `phi`.
    pub fn point(&self) -> ProjPoint {
        let [alpha, beta] = [self.mult[0] as i128, self.mult[1] as i128];
        assert!(alpha != 0 || beta != 0);
        match self.state {
            StateId::A2(A2State::P1P2) => ProjPoint::new(alpha, beta),
            StateId::A2(A2State::P2X) => ProjPoint::new(beta, -alpha - beta),
            StateId::A2(A2State::XP1) => ProjPoint::new(-alpha - beta, alpha),
            StateId::A1hat(k) => {
                let k = k as i128;
                ProjPoint::new(alpha * k + beta * (k + 1), alpha + beta)
            }
        }
    }
}

/// The two semistables supported at a state, in label order.
pub fn supports(state: StateId) -> (Semistable, Semistable) {
    match state {
        StateId::A2(A2State::P1P2) => (Semistable::P1, Semistable::P2),
        StateId::A2(A2State::XP1) => (Semistable::X, Semistable::P1),
        StateId::A2(A2State::P2X) => (Semistable::P2, Semistable::X),
        StateId::A1hat(k) => (Semistable::Pk(k), Semistable::Pk(k + 1)),
    }
}

/// All states supporting a given semistable, with its basis vector there.
pub fn start_states(quiver: Quiver, obj: Semistable) -> Vec<(StateId, [u128; 2])> {
    match (quiver, obj) {
        (Quiver::A2, Semistable::P1) => vec![
            (StateId::A2(A2State::P1P2), [1, 0]),
            (StateId::A2(A2State::XP1), [0, 1]),
        ],
        (Quiver::A2, Semistable::P2) => vec![
            (StateId::A2(A2State::P1P2), [0, 1]),
            (StateId::A2(A2State::P2X), [1, 0]),
        ],
        (Quiver::A2, Semistable::X) => vec![
            (StateId::A2(A2State::XP1), [1, 0]),
            (StateId::A2(A2State::P2X), [0, 1]),
        ],
        (Quiver::A1hat, Semistable::Pk(k)) => vec![
            (StateId::A1hat(k), [1, 0]),
            (StateId::A1hat(k - 1), [0, 1]),
        ],
        _ => panic!("object {obj} does not belong to the {quiver} automaton"),
    }
}

/// A transition: target state and the 2x2 matrix in label-order bases.
pub type Edge = (StateId, [[u128; 2]; 2]);

const LOOP_M: [[u128; 2]; 2] = [[1, 1], [0, 1]];
const CROSS_M: [[u128; 2]; 2] = [[1, 0], [1, 1]];
const ID_M: [[u128; 2]; 2] = [[1, 0], [0, 1]];

/// The HN automaton of a quiver.  A2 is finite; A1hat states are produced on
/// demand.
#[derive(Debug, Clone, Copy)]
pub struct Automaton {
    pub quiver: Quiver,
}

impl Automaton {
    pub fn new(quiver: Quiver) -> Self {
        Automaton { quiver }
    }

    /// The out-edge at `state` for a single letter (`sign` is the exponent
    /// sign; twist letters only have positive edges).
    pub fn edge(&self, state: StateId, tag: GenTag, sign: i64) -> Option<Edge> {
        use A2State::*;
        match (self.quiver, state, tag, sign) {
            (Quiver::A2, StateId::A2(s), GenTag::Gamma, 1) => {
                let t = match s {
                    P1P2 => XP1,
                    XP1 => P2X,
                    P2X => P1P2,
                };
                Some((StateId::A2(t), ID_M))
            }
            (Quiver::A2, StateId::A2(s), GenTag::Gamma, -1) => {
                let t = match s {
                    P1P2 => P2X,
                    P2X => XP1,
                    XP1 => P1P2,
                };
                Some((StateId::A2(t), ID_M))
            }
            (Quiver::A2, StateId::A2(s), GenTag::A2(l), 1) => match (l, s) {
                (A2Letter::S1, P1P2) => Some((StateId::A2(P1P2), LOOP_M)),
                (A2Letter::S1, P2X) => Some((StateId::A2(P1P2), CROSS_M)),
                (A2Letter::SX, XP1) => Some((StateId::A2(XP1), LOOP_M)),
                (A2Letter::SX, P1P2) => Some((StateId::A2(XP1), CROSS_M)),
                (A2Letter::S2, P2X) => Some((StateId::A2(P2X), LOOP_M)),
                (A2Letter::S2, XP1) => Some((StateId::A2(P2X), CROSS_M)),
                _ => None,
            },
            (Quiver::A1hat, StateId::A1hat(k), GenTag::Gamma, s) => {
                Some((StateId::A1hat(k + 2 * s.signum()), ID_M))
            }
            (Quiver::A1hat, StateId::A1hat(k), GenTag::Sk(j), 1) => {
                if j == k + 1 {
                    return None;
                }
                let m = |x: i64| x.unsigned_abs() as u128;
                Some((
                    StateId::A1hat(j),
                    [[m(j - k - 1), m(j - k - 2)], [m(j - k), m(j - k - 1)]],
                ))
            }
            _ => None,
        }
    }

    /// Run a normal form from a start object, reading letters innermost
    /// first.  When the object is supported at two applicable states both
    /// runs are performed and their semistable multiplicity vectors must
    /// agree exactly.
    pub fn run(&self, nf: &NormalForm, start: Semistable) -> Result<HnVector, RunError> {
        self.run_letters(&reversed_letters(nf), start)
    }

    /// Same as [`Automaton::run`] but on a raw letter sequence (application
    /// order).  Used for diagnostics on unnormalised words.
    pub fn run_letters(
        &self,
        letters: &[(GenTag, i64)],
        start: Semistable,
    ) -> Result<HnVector, RunError> {
        let mut outcomes: Vec<HnVector> = Vec::new();
        let mut first_failure: Option<RunError> = None;
        for (state0, vec0) in start_states(self.quiver, start) {
            let mut state = state0;
            let mut vec = vec0;
            let mut ok = true;
            for (i, &(tag, sign)) in letters.iter().enumerate() {
                match self.edge(state, tag, sign) {
                    Some((next, m)) => {
                        vec = apply(&m, &vec);
                        state = next;
                    }
                    None => {
                        first_failure.get_or_insert(RunError::Stuck {
                            at: i,
                            letter: format!("{tag:?}^{sign}"),
                            state: state.to_string(),
                        });
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                outcomes.push(HnVector { quiver: self.quiver, state, mult: vec });
            }
        }
        match outcomes.len() {
            0 => Err(first_failure.unwrap_or(RunError::NoStart)),
            1 => Ok(outcomes.pop().unwrap()),
            _ => {
                let s0 = outcomes[0].sigma();
                if outcomes.iter().skip(1).all(|o| o.sigma() == s0) {
                    Ok(outcomes.swap_remove(0))
                } else {
                    Err(RunError::InconsistentStarts {
                        a: format!("{:?}", outcomes[0]),
                        b: format!("{:?}", outcomes[1]),
                    })
                }
            }
        }
    }

    /// JSON description of states, supports, and single-letter edges.  The
    /// infinite A1hat automaton is materialised over `|k| <= window`.
    pub fn dump_json(&self, window: i64) -> serde_json::Value {
        let states: Vec<StateId> = match self.quiver {
            Quiver::A2 => vec![
                StateId::A2(A2State::P1P2),
                StateId::A2(A2State::XP1),
                StateId::A2(A2State::P2X),
            ],
            Quiver::A1hat => (-window..=window).map(StateId::A1hat).collect(),
        };
        let letters: Vec<(GenTag, i64)> = match self.quiver {
            Quiver::A2 => vec![
                (GenTag::A2(A2Letter::S1), 1),
                (GenTag::A2(A2Letter::S2), 1),
                (GenTag::A2(A2Letter::SX), 1),
                (GenTag::Gamma, 1),
                (GenTag::Gamma, -1),
            ],
            Quiver::A1hat => {
                let mut v: Vec<(GenTag, i64)> =
                    (-window..=window).map(|j| (GenTag::Sk(j), 1)).collect();
                v.push((GenTag::Gamma, 1));
                v.push((GenTag::Gamma, -1));
                v
            }
        };
        let mut edges = Vec::new();
        for &s in &states {
            for &(tag, sign) in &letters {
                if let Some((t, m)) = self.edge(s, tag, sign) {
                    let label = match (tag, sign) {
                        (GenTag::Gamma, s) if s >= 0 => "g".to_string(),
                        (GenTag::Gamma, _) => "g^-1".to_string(),
                        (GenTag::A2(l), _) => l.token().to_string(),
                        (GenTag::Sk(j), _) => format!("s[{j}]"),
                    };
                    edges.push(serde_json::json!({
                        "from": s.to_string(),
                        "to": t.to_string(),
                        "label": label,
                        "matrix": [[m[0][0].to_string(), m[0][1].to_string()],
                                   [m[1][0].to_string(), m[1][1].to_string()]],
                    }));
                }
            }
        }
        serde_json::json!({
            "quiver": self.quiver.name(),
            "states": states.iter().map(|s| {
                let (a, b) = supports(*s);
                serde_json::json!({
                    "label": s.to_string(),
                    "supports": [a.to_string(), b.to_string()],
                })
            }).collect::<Vec<_>>(),
            "edges": edges,
        })
    }
}

fn apply(m: &[[u128; 2]; 2], v: &[u128; 2]) -> [u128; 2] {
    [
        m[0][0].checked_mul(v[0]).and_then(|x| x.checked_add(m[0][1] * v[1])).expect("overflow"),
        m[1][0].checked_mul(v[0]).and_then(|x| x.checked_add(m[1][1] * v[1])).expect("overflow"),
    ]
}

/// Letters of a normal form in application order (rightmost first).
pub fn reversed_letters(nf: &NormalForm) -> Vec<(GenTag, i64)> {
    let mut letters = nf.as_word().expanded();
    letters.reverse();
    letters
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RunError {
    #[error("no start state applies to the first letter")]
    NoStart,
    #[error("stuck at letter #{at} ({letter}) in state {state}; the word is not an admissible writing")]
    Stuck { at: usize, letter: String, state: String },
    #[error("runs from the two supporting states disagree: {a} vs {b}")]
    InconsistentStarts { a: String, b: String },
}

/// States of the A2 automaton whose cone contains the given point; interior
/// points of an arc give one state, the arc endpoints give two.
pub fn theta_set_membership(p: &ProjPoint) -> Vec<A2State> {
    // Inverses of the cone maps phi; the image of (a,c) must be a
    // non-negative or non-positive integer vector.
    let inv = |st: A2State, a: i128, c: i128| -> (i128, i128) {
        match st {
            A2State::P1P2 => (a, c),
            A2State::XP1 => (c, -a - c),
            A2State::P2X => (-a - c, a),
        }
    };
    let mut out = Vec::new();
    for st in [A2State::P1P2, A2State::XP1, A2State::P2X] {
        let (x, y) = inv(st, p.a, p.c);
        if (x >= 0 && y >= 0) || (x <= 0 && y <= 0) {
            out.push(st);
        }
    }
    out
}

/// The arc `[P_k, P_{k+1}]` containing a finite point of the A1hat circle.
pub fn a1hat_arc_of_point(p: &ProjPoint) -> Option<i64> {
    if p.is_infinity() {
        return None;
    }
    Some(p.a.div_euclid(p.c) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{normalize, parse_word};
    use crate::psl2::{act, word_matrix};

    fn run_a2(word: &str, start: Semistable) -> HnVector {
        let w = parse_word(word, Quiver::A2).unwrap();
        Automaton::new(Quiver::A2).run(&normalize(&w), start).unwrap()
    }
    fn run_a1(word: &str, start: Semistable) -> HnVector {
        let w = parse_word(word, Quiver::A1hat).unwrap();
        Automaton::new(Quiver::A1hat).run(&normalize(&w), start).unwrap()
    }

    #[test]
    fn gamma_rotates_semistables() {
        // g P1 = X, g X = P2, g P2 = P1 (up to shift)
        let o = run_a2("g", Semistable::P1);
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::X, 1)]));
        let o = run_a2("g", Semistable::X);
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::P2, 1)]));
        let o = run_a2("g", Semistable::P2);
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::P1, 1)]));
    }

    #[test]
    fn twist_examples() {
        // sX P1 has factors X and P1
        let o = run_a2("sX", Semistable::P1);
        assert_eq!(o.state, StateId::A2(A2State::XP1));
        assert_eq!(o.mult, [1, 1]);
        // s2 P1 = X
        let o = run_a2("s2", Semistable::P1);
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::X, 1)]));
        // s1 P2 = (P1 -> P2), factors P1 + P2
        let o = run_a2("s1", Semistable::P2);
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::P1, 1), (Semistable::P2, 1)]));
    }

    #[test]
    fn a1hat_twist_examples() {
        // s2 P0 = P2[-1] -> P3^2
        let o = run_a1("s[2]", Semistable::Pk(0));
        assert_eq!(o.state, StateId::A1hat(2));
        assert_eq!(o.mult, [1, 2]);
        // occurrences: P1 count 1*2+2*3 = 8, P0 count 1*1+2*2 = 5
        assert_eq!(o.occurrences(), [5, 8]);
        // s2 P1 = P3
        let o = run_a1("s[2]", Semistable::Pk(1));
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::Pk(3), 1)]));
        // gamma translates by two
        let o = run_a1("g", Semistable::Pk(-1));
        assert_eq!(o.sigma(), BTreeMap::from([(Semistable::Pk(1), 1)]));
    }

    #[test]
    fn occurrences_examples() {
        let o = HnVector { quiver: Quiver::A2, state: StateId::A2(A2State::XP1), mult: [1, 1] };
        assert_eq!(o.occurrences(), [2, 1]);
        let o = HnVector { quiver: Quiver::A2, state: StateId::A2(A2State::P1P2), mult: [1, 0] };
        assert_eq!(o.occurrences(), [1, 0]);
    }

    #[test]
    fn raw_word_gets_stuck() {
        let a = Automaton::new(Quiver::A2);
        let w = parse_word("s1^-1", Quiver::A2).unwrap();
        let mut letters = w.expanded();
        letters.reverse();
        let err = a.run_letters(&letters, Semistable::P1).unwrap_err();
        assert!(matches!(err, RunError::Stuck { .. }));
    }

    #[test]
    fn both_starts_agree_and_match_psl2() {
        // phi(run(beta, x)) must equal word_matrix(beta) . phi(x)
        for word in ["s1 s2 sX", "g^-1 s2^3 s1", "sX^2 s1", "g^2"] {
            let w = parse_word(word, Quiver::A2).unwrap();
            let nf = normalize(&w);
            for (start, base) in [
                (Semistable::P1, ProjPoint::new(1, 0)),
                (Semistable::P2, ProjPoint::new(0, 1)),
                (Semistable::X, ProjPoint::new(1, -1)),
            ] {
                let o = Automaton::new(Quiver::A2).run(&nf, start).unwrap();
                assert_eq!(o.point(), act(&word_matrix(&w), &base), "word {word} start {start}");
            }
        }
        for word in ["s[2] s[0]", "g^-2 s[1]", "s[-3]^2 s[1]"] {
            let w = parse_word(word, Quiver::A1hat).unwrap();
            let nf = normalize(&w);
            for k in -2..3 {
                let o = Automaton::new(Quiver::A1hat).run(&nf, Semistable::Pk(k)).unwrap();
                let base = ProjPoint::new(k as i128, 1);
                assert_eq!(o.point(), act(&word_matrix(&w), &base), "word {word} start P{k}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        assert_eq!(theta_set_membership(&ProjPoint::new(2, 1)), vec![A2State::P1P2]);
        assert_eq!(theta_set_membership(&ProjPoint::new(1, -2)), vec![A2State::P2X]);
        // P1 = [1:0] lies at the endpoint of two arcs
        assert_eq!(
            theta_set_membership(&ProjPoint::new(1, 0)),
            vec![A2State::P1P2, A2State::XP1]
        );
        assert_eq!(a1hat_arc_of_point(&ProjPoint::new(5, 2)), Some(2));
        assert_eq!(a1hat_arc_of_point(&ProjPoint::infinity()), None);
    }

    #[test]
    fn dump_has_all_edges() {
        let v = Automaton::new(Quiver::A2).dump_json(0);
        assert_eq!(v["states"].as_array().unwrap().len(), 3);
        // 3 loops + 3 crossings + 6 gamma edges
        assert_eq!(v["edges"].as_array().unwrap().len(), 12);
    }
}
