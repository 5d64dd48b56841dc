//! Batch verification suites.  Each suite runs one family of cross-checks
//! at pinned tolerances and returns a JSON-serialisable report; a failing
//! report carries the first counterexample.
//!
//! Suites: `automaton-vs-oracle`, `rz`, `homs`, `linearity`, `tessellation`,
//! `limits`, `a1hat-closure`, `geodesic`, `normalize-soundness`, and
//! `degeneration`.  The full affine-A1 enumeration is large; by default the
//! oracle side verifies every distinct object below a size cap plus a
//! seeded sample of larger ones, while `HNSTAB_FULL=1` (or `full = true`)
//! removes the caps.

use crate::automaton::{Automaton, HnVector, Semistable};
use crate::braid::{
    free_reduce_a1hat, normalize, A2Letter, BraidWord, GenTag, NormalBody, NormalForm,
};
use crate::charge::{charge_from_delta, gromov_a1hat, gromov_a2, int, QComplex, TypeACharge};
use crate::embedding::{
    self, eta_int, limit_slope, linearity_check_a1hat, mass_of_object, phi_membership,
    pi_interior, tessellation_triangles, PhiRegion,
};
use crate::geodesic::{
    body_letters, check_geodesic_condition, sequence_mass, sequence_sigma, shifted_hn, HomOracle,
};
use crate::psl2::{act, word_matrix, ProjPoint};
use crate::zigzag::{apply_word, hom_bar, k_class, occurrences, DgComplex, ZigzagAlgebra};
use crate::Quiver;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

// Pinned tolerances.
pub const TOL_A2_LINEARITY: f64 = 1e-9;
pub const TOL_A1HAT_LINEARITY_REL: f64 = 1e-3;
pub const TOL_SLOPE: f64 = 1e-9;
pub const TOL_GROMOV_LIMIT: f64 = 1e-6;
pub const TOL_BOUNDARY_FUNCTIONAL: f64 = 1e-4;
pub const TOL_PHI: f64 = 1e-9;
pub const TOL_MASS_ADDITIVITY: f64 = 1e-9;

/// Configuration shared by the suites.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub depth_a2: u64,
    pub depth_a1hat: u64,
    pub max_index_a1hat: i64,
    pub random_words: usize,
    pub word_len: usize,
    pub window: i64,
    pub tessellation_depth: u64,
    pub seed: u64,
    /// size cap (generator count) for default a1hat oracle verification
    pub oracle_size_cap: u64,
    /// number of seeded larger objects verified beyond the cap
    pub oracle_extra_samples: usize,
    pub full: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth_a2: 6,
            depth_a1hat: 5,
            max_index_a1hat: 4,
            random_words: 500,
            word_len: 12,
            window: 200,
            tessellation_depth: 8,
            seed: 0x5eed,
            oracle_size_cap: 60,
            oracle_extra_samples: 80,
            full: std::env::var("HNSTAB_FULL").map(|v| v == "1").unwrap_or(false),
        }
    }
}

/// Result of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub quiver: Option<String>,
    pub params: serde_json::Value,
    pub cases: usize,
    pub max_error: f64,
    pub pass: bool,
    pub counterexample: Option<String>,
}

impl CheckReport {
    fn new(check: &str, quiver: Option<Quiver>) -> Self {
        CheckReport {
            check: check.to_string(),
            quiver: quiver.map(|q| q.name().to_string()),
            params: serde_json::json!({}),
            cases: 0,
            max_error: 0.0,
            pass: true,
            counterexample: None,
        }
    }

    fn fail(&mut self, witness: String) {
        if self.pass {
            self.pass = false;
            self.counterexample = Some(witness);
        }
    }

    fn note_error(&mut self, err: f64, tol: f64, witness: impl FnOnce() -> String) {
        self.max_error = self.max_error.max(err);
        if !(err <= tol) {
            self.fail(witness());
        }
    }

    pub fn line(&self) -> String {
        let q = self.quiver.as_deref().map(|q| format!(" [{q}]")).unwrap_or_default();
        let status = if self.pass { "PASS" } else { "FAIL" };
        let extra = self
            .counterexample
            .as_deref()
            .map(|c| format!("  counterexample: {c}"))
            .unwrap_or_default();
        format!(
            "{status}  {name}{q}: {cases} cases, max error {err:.3e}{extra}",
            name = self.check,
            cases = self.cases,
            err = self.max_error
        )
    }
}

/// One enumerated run: normal form, base object, automaton outcome, and the
/// point of the resulting spherical.
pub struct CorpusEntry {
    pub nf: NormalForm,
    pub base: Semistable,
    pub hn: HnVector,
    pub point: ProjPoint,
}

/// Deduplicated object data: a representative word and the oracle counts.
pub struct PointData {
    pub word: BraidWord,
    pub base: Semistable,
    pub oracle_counts: [u64; 2],
    pub size: u64,
}

/// The enumeration corpus of one quiver, shared by several suites.
pub struct Corpus {
    pub quiver: Quiver,
    pub entries: Vec<CorpusEntry>,
    /// distinct points; oracle data present for those within budget
    pub points: BTreeMap<ProjPoint, Option<PointData>>,
    pub oracle_verified: usize,
}

fn base_point(quiver: Quiver, s: Semistable) -> ProjPoint {
    match (quiver, s) {
        (Quiver::A2, Semistable::P1) => ProjPoint::new(1, 0),
        (Quiver::A2, Semistable::P2) => ProjPoint::new(0, 1),
        (Quiver::A2, Semistable::X) => ProjPoint::new(1, -1),
        (Quiver::A1hat, Semistable::Pk(k)) => ProjPoint::new(k as i128, 1),
        _ => unreachable!(),
    }
}

fn base_complex(alg: &ZigzagAlgebra, quiver: Quiver, s: Semistable) -> DgComplex {
    embedding::semistable_complex(alg, quiver, s)
}

/// All admissible A2 normal forms with body length `<= depth` and gamma
/// power in `-2..=2`.
pub fn enumerate_a2_forms(depth: u64) -> Vec<NormalForm> {
    let mut bodies: Vec<Vec<A2Letter>> = vec![Vec::new()];
    let mut stack: Vec<Vec<A2Letter>> = vec![Vec::new()];
    while let Some(body) = stack.pop() {
        if (body.len() as u64) < depth {
            let nexts: Vec<A2Letter> = match body.last() {
                None => vec![A2Letter::S1, A2Letter::S2, A2Letter::SX],
                Some(&l) => vec![l, l.gamma_conj_inv()],
            };
            for n in nexts {
                let mut b = body.clone();
                b.push(n);
                bodies.push(b.clone());
                stack.push(b);
            }
        }
    }
    let mut out = Vec::new();
    for g in -2..=2i64 {
        for body in &bodies {
            let mut runs: Vec<(A2Letter, u64)> = Vec::new();
            for &l in body {
                match runs.last_mut() {
                    Some((t, m)) if *t == l => *m += 1,
                    _ => runs.push((l, 1)),
                }
            }
            out.push(NormalForm {
                quiver: Quiver::A2,
                gamma_power: g,
                body: NormalBody::A2(runs),
            });
        }
    }
    out
}

/// All admissible A1hat normal forms with body length `<= depth`, indices
/// `|a_i| <= max_index`, gamma power in `-1..=1`.
pub fn enumerate_a1hat_forms(depth: u64, max_index: i64) -> Vec<NormalForm> {
    let mut bodies: Vec<Vec<i64>> = vec![Vec::new()];
    let mut stack: Vec<Vec<i64>> = vec![Vec::new()];
    while let Some(body) = stack.pop() {
        if (body.len() as u64) < depth {
            for a in -max_index..=max_index {
                if let Some(&last) = body.last() {
                    if last - a == 1 {
                        continue;
                    }
                }
                let mut b = body.clone();
                b.push(a);
                bodies.push(b.clone());
                stack.push(b);
            }
        }
    }
    let mut out = Vec::new();
    for g in -1..=1i64 {
        for body in &bodies {
            out.push(NormalForm {
                quiver: Quiver::A1hat,
                gamma_power: g,
                body: NormalBody::A1hat(body.clone()),
            });
        }
    }
    out
}

/// Expected occurrence counts of the object at a point: `(|a|, |c|)` for A2
/// and `(|a - c|, |a|)` for A1hat, in vertex order.
pub fn expected_occurrences(quiver: Quiver, p: &ProjPoint) -> [u64; 2] {
    match quiver {
        Quiver::A2 => [p.a.unsigned_abs() as u64, p.c.unsigned_abs() as u64],
        Quiver::A1hat => [(p.a - p.c).unsigned_abs() as u64, p.a.unsigned_abs() as u64],
    }
}

/// Build the enumeration corpus: run the automaton on every form and base,
/// and verify the oracle on distinct objects within budget.
pub fn build_corpus(quiver: Quiver, cfg: &RunConfig) -> Corpus {
    let alg = ZigzagAlgebra::new(quiver);
    let auto = Automaton::new(quiver);
    let bases: Vec<Semistable> = match quiver {
        Quiver::A2 => vec![Semistable::P1, Semistable::P2, Semistable::X],
        Quiver::A1hat => vec![Semistable::Pk(0), Semistable::Pk(1)],
    };
    let forms = match quiver {
        Quiver::A2 => enumerate_a2_forms(cfg.depth_a2),
        Quiver::A1hat => enumerate_a1hat_forms(cfg.depth_a1hat, cfg.max_index_a1hat),
    };
    let mut entries = Vec::new();
    let mut points: BTreeMap<ProjPoint, Option<PointData>> = BTreeMap::new();
    let mut reps: BTreeMap<ProjPoint, (BraidWord, Semistable)> = BTreeMap::new();
    for nf in &forms {
        for &base in &bases {
            let hn = auto.run(nf, base).expect("admissible form");
            let point = act(&word_matrix(&nf.as_word()), &base_point(quiver, base));
            reps.entry(point).or_insert_with(|| (nf.as_word(), base));
            points.entry(point).or_insert(None);
            entries.push(CorpusEntry { nf: nf.clone(), base, hn, point });
        }
    }
    // oracle verification per distinct object, within budget
    let mut sized: Vec<(u64, ProjPoint)> = reps
        .keys()
        .map(|p| {
            let e = expected_occurrences(quiver, p);
            (e[0] + e[1], *p)
        })
        .collect();
    sized.sort();
    let mut selected: Vec<ProjPoint> = Vec::new();
    if cfg.full || quiver == Quiver::A2 {
        selected.extend(sized.iter().map(|&(_, p)| p));
    } else {
        let mut big: Vec<ProjPoint> = Vec::new();
        for &(s, p) in &sized {
            if s <= cfg.oracle_size_cap {
                selected.push(p);
            } else {
                big.push(p);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa1);
        for _ in 0..cfg.oracle_extra_samples.min(big.len()) {
            let i = rng.gen_range(0..big.len());
            selected.push(big.swap_remove(i));
        }
    }
    let mut verified = 0;
    for p in selected {
        let (word, base) = reps.get(&p).unwrap().clone();
        let x = apply_word(&alg, &word, &base_complex(&alg, quiver, base));
        let counts = [
            occurrences(&alg, &x, 0).expect("minimal"),
            occurrences(&alg, &x, 1).expect("minimal"),
        ];
        points.insert(
            p,
            Some(PointData { word, base, oracle_counts: counts, size: x.gens.len() as u64 }),
        );
        verified += 1;
    }
    Corpus { quiver, entries, points, oracle_verified: verified }
}

fn random_word(rng: &mut ChaCha8Rng, quiver: Quiver, max_len: usize) -> BraidWord {
    let len = rng.gen_range(1..=max_len);
    let mut w = BraidWord::new(quiver);
    for _ in 0..len {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let tag = match quiver {
            Quiver::A2 => {
                if rng.gen_bool(0.5) {
                    GenTag::A2(A2Letter::S1)
                } else {
                    GenTag::A2(A2Letter::S2)
                }
            }
            Quiver::A1hat => GenTag::Sk(if rng.gen_bool(0.5) { 0 } else { 1 }),
        };
        w.push(tag, sign);
    }
    w
}

/// Criteria 1 and 2: automaton-vs-oracle occurrence counts, exact equality.
pub fn check_automaton_vs_oracle(corpus: &Corpus, cfg: &RunConfig) -> CheckReport {
    let quiver = corpus.quiver;
    let mut rep = CheckReport::new("automaton-vs-oracle", Some(quiver));
    rep.params = serde_json::json!({
        "forms": corpus.entries.len(),
        "distinct_objects": corpus.points.len(),
        "oracle_verified_objects": corpus.oracle_verified,
        "random_words": cfg.random_words,
        "full": cfg.full,
    });
    let alg = ZigzagAlgebra::new(quiver);
    let auto = Automaton::new(quiver);
    // enumerated forms: automaton counts must match the point formula for
    // every form, and the oracle counts for every verified object
    for e in &corpus.entries {
        rep.cases += 1;
        let got = e.hn.occurrences();
        let expect = expected_occurrences(quiver, &e.point);
        if got != [expect[0] as u128, expect[1] as u128] {
            rep.fail(format!(
                "form `{}` on {}: automaton {:?} vs point formula {:?}",
                e.nf, e.base, got, expect
            ));
        }
        if let Some(Some(pd)) = corpus.points.get(&e.point) {
            if [got[0] as u64, got[1] as u64] != pd.oracle_counts {
                rep.fail(format!(
                    "form `{}` on {}: automaton {:?} vs oracle {:?}",
                    e.nf, e.base, got, pd.oracle_counts
                ));
            }
        }
    }
    // random raw words: normalize, run, compare against a fresh oracle run
    // on the unnormalised word (this also exercises inverse twists)
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bases: Vec<Semistable> = match quiver {
        Quiver::A2 => vec![Semistable::P1, Semistable::P2],
        Quiver::A1hat => vec![Semistable::Pk(0), Semistable::Pk(1)],
    };
    for i in 0..cfg.random_words {
        let w = random_word(&mut rng, quiver, cfg.word_len);
        let base = bases[i % bases.len()];
        rep.cases += 1;
        let nf = normalize(&w);
        let hn = auto.run(&nf, base).expect("normal forms are admissible");
        let x = apply_word(&alg, &w, &base_complex(&alg, quiver, base));
        let oracle = [
            occurrences(&alg, &x, 0).expect("minimal") as u128,
            occurrences(&alg, &x, 1).expect("minimal") as u128,
        ];
        if hn.occurrences() != oracle {
            rep.fail(format!(
                "random word `{w}` on {base}: automaton {:?} vs oracle {:?}",
                hn.occurrences(),
                oracle
            ));
        }
    }
    if quiver == Quiver::A1hat {
        // update rules: sigma_j P_k for |j|, |k| <= 4, j != k+1
        for j in -4..=4i64 {
            for k in -4..=4i64 {
                if j == k + 1 {
                    continue;
                }
                rep.cases += 1;
                let a = (j - k - 1).unsigned_abs();
                let b = (j - k).unsigned_abs();
                let mut w = BraidWord::new(quiver);
                w.push(GenTag::Sk(j), 1);
                let x = apply_word(&alg, &w, &base_complex(&alg, quiver, Semistable::Pk(k)));
                let n0 = a * (j - 1).unsigned_abs() + b * j.unsigned_abs();
                let n1 = a * j.unsigned_abs() + b * (j + 1).unsigned_abs();
                let got = [
                    occurrences(&alg, &x, 0).expect("minimal"),
                    occurrences(&alg, &x, 1).expect("minimal"),
                ];
                if got != [n0, n1] {
                    rep.fail(format!("update rule s[{j}] P{k}: oracle {got:?} vs ({n0},{n1})"));
                }
                // K-class: [sigma_j P_k] = b [P_{j+1}] - a [P_j] up to sign
                let kc = k_class(&x);
                let kp = |n: i64| -> [i64; 2] { [(n - 1).abs(), n.abs()] };
                let bj = kp(j + 1);
                let aj = kp(j);
                let expect = [
                    b as i64 * bj[0] - a as i64 * aj[0],
                    b as i64 * bj[1] - a as i64 * aj[1],
                ];
                if kc != expect && kc != [-expect[0], -expect[1]] {
                    rep.fail(format!("update rule s[{j}] P{k}: K-class {kc:?} vs {expect:?}"));
                }
                // automaton edge agrees
                let hn = auto.run_letters(&[(GenTag::Sk(j), 1)], Semistable::Pk(k)).unwrap();
                if hn.mult != [a as u128, b as u128] {
                    rep.fail(format!("update rule s[{j}] P{k}: edge vector {:?}", hn.mult));
                }
            }
        }
    }
    rep
}

/// Criterion 3: Rouquier-Zimmermann occurrence formulas per distinct object.
pub fn check_rz(corpus: &Corpus) -> CheckReport {
    let mut rep = CheckReport::new("rz", Some(corpus.quiver));
    for (p, data) in &corpus.points {
        let Some(pd) = data else { continue };
        rep.cases += 1;
        let expect = expected_occurrences(corpus.quiver, p);
        if pd.oracle_counts != expect {
            rep.fail(format!(
                "object at {p}: oracle {:?} vs formula {:?}",
                pd.oracle_counts, expect
            ));
        }
    }
    rep.params = serde_json::json!({ "objects": rep.cases });
    rep
}

/// Criterion 4: hom formulas against oracle hombar values.
pub fn check_homs(corpus: &Corpus, cfg: &RunConfig) -> CheckReport {
    let quiver = corpus.quiver;
    let mut rep = CheckReport::new("homs", Some(quiver));
    let alg = ZigzagAlgebra::new(quiver);
    type Expect = Box<dyn Fn(&ProjPoint) -> u64>;
    let probes: Vec<(DgComplex, &str, Expect)> = match quiver {
        Quiver::A2 => {
            let p1 = DgComplex::projective(quiver, 0);
            let p2 = DgComplex::projective(quiver, 1);
            let x = embedding::semistable_complex(&alg, quiver, Semistable::X);
            let xp = {
                let w = crate::braid::parse_word("s1", quiver).unwrap();
                apply_word(&alg, &w, &DgComplex::projective(quiver, 1))
            };
            vec![
                (p1, "P1", Box::new(|p: &ProjPoint| p.c.unsigned_abs() as u64) as Expect),
                (p2, "P2", Box::new(|p: &ProjPoint| p.a.unsigned_abs() as u64)),
                (x, "X", Box::new(|p: &ProjPoint| (p.a + p.c).unsigned_abs() as u64)),
                (xp, "P1->P2", Box::new(|p: &ProjPoint| (p.a - p.c).unsigned_abs() as u64)),
            ]
        }
        Quiver::A1hat => {
            let p0 = DgComplex::projective(quiver, 0);
            let p1 = DgComplex::projective(quiver, 1);
            vec![
                // hombar(x, P1) = 2 n0 = 2|a-c|, hombar(x, P0) = 2 n1 = 2|a|
                (p1, "P1", Box::new(|p: &ProjPoint| 2 * (p.a - p.c).unsigned_abs() as u64)
                    as Expect),
                (p0, "P0", Box::new(|p: &ProjPoint| 2 * p.a.unsigned_abs() as u64)),
            ]
        }
    };
    // restrict to objects of moderate size: graded hom ranks cost more than
    // occurrence counts
    let cap = if cfg.full { u64::MAX } else { 40 };
    let mut budget = if cfg.full { usize::MAX } else { 260 };
    for (p, data) in &corpus.points {
        let Some(pd) = data else { continue };
        if pd.size > cap || budget == 0 {
            continue;
        }
        budget -= 1;
        let x = apply_word(&alg, &pd.word, &base_complex(&alg, quiver, pd.base));
        for (probe, name, expect) in &probes {
            rep.cases += 1;
            let got = hom_bar(&alg, &x, probe).expect("spherical");
            let want = expect(p);
            if got != want {
                rep.fail(format!("hombar(object at {p}, {name}) = {got}, formula {want}"));
            }
        }
        // spot-check the 2-CY symmetry on the first probe
        rep.cases += 1;
        let got_sym = hom_bar(&alg, &probes[0].0, &x).expect("spherical");
        if got_sym != (probes[0].2)(p) {
            rep.fail(format!(
                "hombar({}, object at {p}) = {got_sym} breaks symmetry",
                probes[0].1
            ));
        }
    }
    rep.params = serde_json::json!({ "checks": rep.cases });
    rep
}

/// Seeded A2 type-A charges; `degenerate` of them have collinear phases.
pub fn seeded_charges_a2(seed: u64, total: usize, degenerate: usize) -> Vec<TypeACharge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < total - degenerate {
        let z0 = (rng.gen_range(1..=4), rng.gen_range(0..=3));
        let z1 = (rng.gen_range(-3..=3), rng.gen_range(1..=4));
        if let Ok(c) = TypeACharge::from_ints(Quiver::A2, z0, z1) {
            if c.is_nondegenerate() {
                out.push(c);
            }
        }
    }
    // degenerate: equal phases (omega > 0) and one antipodal (omega < 0)
    let mut kinds = 0;
    while out.len() < total {
        kinds += 1;
        let a = rng.gen_range(1..=3);
        let b = rng.gen_range(0..=2);
        let t = rng.gen_range(1..=3);
        let z0 = (a, b);
        let z1 = if kinds % 3 == 0 { (-t * a - a, -t * b - b) } else { (t * a, t * b) };
        if let Ok(c) = TypeACharge::from_ints(Quiver::A2, z0, z1) {
            out.push(c);
        }
    }
    out
}

/// Seeded non-degenerate A1hat charges, kept away from the degenerate locus
/// so that truncation constants stay moderate.
pub fn seeded_charges_a1hat(seed: u64, total: usize) -> Vec<TypeACharge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < total {
        let z0 = (rng.gen_range(1..=3), rng.gen_range(0..=1));
        let z1 = (rng.gen_range(-2..=2), rng.gen_range(1..=3));
        if let Ok(c) = TypeACharge::from_ints(Quiver::A1hat, z0, z1) {
            // well-conditioned: sin^2 of the angle between Z0, Z1 >= 1/4
            let cross = c.z[0].cross(&c.z[1]);
            let sin2 = &cross * &cross / (c.z[0].norm2() * c.z[1].norm2());
            if c.is_nondegenerate() && sin2 >= crate::charge::ratio(1, 4) {
                out.push(c);
            }
        }
    }
    out
}

/// Criterion 5: A2 linearity of the mass in the Gromov coordinates.
pub fn check_linearity_a2(corpus: &Corpus, cfg: &RunConfig) -> CheckReport {
    assert_eq!(corpus.quiver, Quiver::A2);
    let mut rep = CheckReport::new("linearity", Some(Quiver::A2));
    let charges = seeded_charges_a2(cfg.seed ^ 0x11a, 20, 3);
    let points: Vec<ProjPoint> = corpus.points.keys().copied().collect();
    for (ci, c) in charges.iter().enumerate() {
        let g = match gromov_a2(c) {
            Ok(g) => g,
            Err(e) => {
                rep.fail(format!("charge #{ci}: {e}"));
                continue;
            }
        };
        for p in &points {
            rep.cases += 1;
            let mass = embedding::mass_of_point(c, p);
            let e = eta_int(p);
            let lin = g.x * e[0] as f64 + g.y * e[1] as f64 + g.z * e[2] as f64;
            rep.note_error((mass - lin).abs(), TOL_A2_LINEARITY, || {
                format!("charge #{ci}, point {p}: mass {mass} vs linear {lin}")
            });
        }
    }
    rep.params = serde_json::json!({ "charges": charges.len(), "points": points.len() });
    rep
}

/// Criterion 6: A1hat linearity via truncated Gromov sums.
pub fn check_linearity_a1hat(corpus: &Corpus, cfg: &RunConfig) -> CheckReport {
    assert_eq!(corpus.quiver, Quiver::A1hat);
    let mut rep = CheckReport::new("linearity", Some(Quiver::A1hat));
    let charges = seeded_charges_a1hat(cfg.seed ^ 0x11b, 10);
    // 50 generated sphericals: first distinct HN outcomes of the corpus
    let mut seen = std::collections::BTreeSet::new();
    let mut sample: Vec<HnVector> = Vec::new();
    for e in &corpus.entries {
        if e.nf.body_len() == 0 {
            continue;
        }
        if seen.insert(e.point) {
            sample.push(e.hn.clone());
            if sample.len() == 50 {
                break;
            }
        }
    }
    for (ci, c) in charges.iter().enumerate() {
        for hn in &sample {
            rep.cases += 1;
            let r = linearity_check_a1hat(c, hn, cfg.window);
            rep.note_error(r.relative_error, TOL_A1HAT_LINEARITY_REL, || {
                format!(
                    "charge #{ci}, object at {}: relative error {}",
                    hn.point(),
                    r.relative_error
                )
            });
            if r.tail_bound <= r.error {
                rep.fail(format!(
                    "charge #{ci}, object at {}: tail bound {} <= observed {}",
                    hn.point(),
                    r.tail_bound,
                    r.error
                ));
            }
        }
    }
    rep.params = serde_json::json!({
        "charges": charges.len(),
        "objects": sample.len(),
        "window": cfg.window,
    });
    rep
}

/// Criterion 7: affine tails of twist-power masses.
pub fn check_limits(cfg: &RunConfig) -> CheckReport {
    let mut rep = CheckReport::new("limits", None);
    let alg2 = ZigzagAlgebra::new(Quiver::A2);
    let alg1 = ZigzagAlgebra::new(Quiver::A1hat);
    let mut charges_a2 = vec![TypeACharge::from_ints(Quiver::A2, (1, 0), (0, 1)).unwrap()];
    charges_a2.extend(seeded_charges_a2(cfg.seed ^ 0x71, 2, 0));
    let mut charges_a1 = vec![TypeACharge::from_ints(Quiver::A1hat, (1, 0), (0, 1)).unwrap()];
    charges_a1.extend(seeded_charges_a1hat(cfg.seed ^ 0x72, 2));
    let pairs_a2 = [
        (Semistable::P1, Semistable::P2),
        (Semistable::P2, Semistable::P1),
        (Semistable::P1, Semistable::X),
    ];
    for c in &charges_a2 {
        for &(a, x) in &pairs_a2 {
            rep.cases += 1;
            match limit_slope(c, &alg2, a, x, 50) {
                Ok(r) => {
                    if r.first_affine_n > 10 {
                        rep.fail(format!("({a},{x}): affine only from n = {}", r.first_affine_n));
                    }
                    rep.note_error((r.slope - r.expected).abs(), TOL_SLOPE, || {
                        format!("({a},{x}): slope {} vs m(a) hombar(a,x) {}", r.slope, r.expected)
                    });
                }
                Err(e) => rep.fail(format!("({a},{x}): {e}")),
            }
        }
    }
    for c in &charges_a1 {
        rep.cases += 1;
        match limit_slope(c, &alg1, Semistable::Pk(0), Semistable::Pk(1), 50) {
            Ok(r) => {
                if r.first_affine_n > 10 {
                    rep.fail(format!("(P0,P1): affine only from n = {}", r.first_affine_n));
                }
                rep.note_error((r.slope - r.expected).abs(), TOL_SLOPE, || {
                    format!("(P0,P1): slope {} vs {}", r.slope, r.expected)
                });
            }
            Err(e) => rep.fail(format!("(P0,P1): {e}")),
        }
    }
    rep.params = serde_json::json!({ "n_max": 50 });
    rep
}

/// Criterion 8: Farey tessellation, distinct interiors, Phi membership.
pub fn check_tessellation(cfg: &RunConfig) -> CheckReport {
    let mut rep = CheckReport::new("tessellation", Some(Quiver::A2));
    let tau = TypeACharge::from_ints(Quiver::A2, (1, 0), (1, 2)).unwrap();
    let tris = tessellation_triangles(cfg.tessellation_depth);
    let mut interiors: Vec<(String, [f64; 3])> = Vec::new();
    for t in &tris {
        rep.cases += 1;
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            if !crate::psl2::farey_adjacent(&t.vertices[i], &t.vertices[j]) {
                rep.fail(format!(
                    "triangle `{}`: vertices {} and {} not Farey adjacent",
                    t.word, t.vertices[i], t.vertices[j]
                ));
            }
        }
        let v = pi_interior(&tau, &t.word);
        let n = embedding::norm3(&v);
        if n >= 1.0 {
            rep.fail(format!("triangle `{}`: |pi| = {n} >= 1", t.word));
        }
        match phi_membership(&v, TOL_PHI) {
            PhiRegion::CentralTriangle | PhiRegion::Segment(_) => {}
            region => rep.fail(format!("triangle `{}`: pi lands {region:?}", t.word)),
        }
        interiors.push((t.word.to_string(), v));
    }
    // pairwise distinct interior samples
    let mut min_d = f64::INFINITY;
    for i in 0..interiors.len() {
        for j in (i + 1)..interiors.len() {
            let (a, b) = (&interiors[i].1, &interiors[j].1);
            let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
            if d < min_d {
                min_d = d;
            }
            if d <= 1e-9 {
                rep.fail(format!(
                    "interior samples of `{}` and `{}` coincide",
                    interiors[i].0, interiors[j].0
                ));
            }
        }
    }
    rep.params = serde_json::json!({
        "depth": cfg.tessellation_depth,
        "triangles": tris.len(),
        "min_interior_distance": min_d,
    });
    rep
}

/// Criterion 9: normalisation soundness on random words.
pub fn check_normalize_soundness(quiver: Quiver, cfg: &RunConfig) -> CheckReport {
    let mut rep = CheckReport::new("normalize-soundness", Some(quiver));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x90);
    let n = 1000;
    for _ in 0..n {
        let w = random_word(&mut rng, quiver, 16);
        rep.cases += 1;
        let nf = normalize(&w);
        if !nf.is_admissible() {
            rep.fail(format!("`{w}`: inadmissible normal form `{nf}`"));
            continue;
        }
        let again = normalize(&nf.as_word());
        if again != nf {
            rep.fail(format!("`{w}`: normalize not idempotent"));
        }
        match quiver {
            Quiver::A2 => {
                if word_matrix(&nf.as_word()) != word_matrix(&w) {
                    rep.fail(format!("`{w}`: PSL2 image changed"));
                }
                if nf.exponent_sum() != w.exponent_sum() {
                    rep.fail(format!("`{w}`: exponent sum changed"));
                }
            }
            Quiver::A1hat => {
                if free_reduce_a1hat(&nf.as_word()) != free_reduce_a1hat(&w) {
                    rep.fail(format!("`{w}`: freely reduced word changed"));
                }
            }
        }
    }
    rep.params = serde_json::json!({ "words": n, "max_len": 16 });
    rep
}

/// The A1hat boundary probe set: objects with known state and HN vector.
fn closure_probes() -> Vec<HnVector> {
    let auto = Automaton::new(Quiver::A1hat);
    let mut probes = Vec::new();
    for k in -2..=3i64 {
        probes
            .push(auto.run(&normalize(&BraidWord::new(Quiver::A1hat)), Semistable::Pk(k)).unwrap());
    }
    for (word, base) in [
        ("s[0]", Semistable::Pk(1)),
        ("s[2]", Semistable::Pk(0)),
        ("s[-1]", Semistable::Pk(1)),
        ("s[3]", Semistable::Pk(0)),
    ] {
        let w = crate::braid::parse_word(word, Quiver::A1hat).unwrap();
        probes.push(auto.run(&normalize(&w), base).unwrap());
    }
    probes
}

/// Criterion 10: A1hat closure limits in the delta coordinate.
pub fn check_a1hat_closure(_cfg: &RunConfig) -> CheckReport {
    let mut rep = CheckReport::new("a1hat-closure", Some(Quiver::A1hat));
    let probes = closure_probes();
    let window = 6i64;
    // approach within delta(Lambda): epsilon = (3 - 4i) / (5 m^2) has
    // negative imaginary part, so omega stays in the upper half plane
    let eps = |m: i64| -> QComplex {
        QComplex::new(crate::charge::ratio(3, 5 * m * m), crate::charge::ratio(-4, 5 * m * m))
    };
    let schedule = [10i64, 100, 1000, 10_000];
    for target in -2..=2i64 {
        rep.cases += 1;
        let mut gromov_err_final = f64::NAN;
        let mut func_err_final = f64::NAN;
        for &m in &schedule {
            let delta = QComplex::new(int(target), int(0)).add(&eps(m));
            let c = match charge_from_delta(delta) {
                Ok(c) => c,
                Err(e) => {
                    rep.fail(format!("target {target}, m {m}: invalid charge ({e})"));
                    continue;
                }
            };
            // Gromov coordinates approach the indicator at the target
            let g = match gromov_a1hat(&c, window) {
                Ok(g) => g,
                Err(e) => {
                    rep.fail(format!("target {target}, m {m}: {e}"));
                    continue;
                }
            };
            let mut gerr: f64 = 0.0;
            for j in -window..=window {
                let want = if j == target { 1.0 } else { 0.0 };
                gerr = gerr.max((g.x(j) - want).abs());
            }
            // projectivised masses approach hombar(P_target, -)
            let masses: Vec<f64> = probes.iter().map(|hn| hn.mass(&|s| c.mass(s))).collect();
            let funcs: Vec<f64> =
                probes.iter().map(|hn| embedding::hombar_pj(target, hn) as f64).collect();
            let ms: f64 = masses.iter().sum();
            let fs: f64 = funcs.iter().sum();
            let mut ferr: f64 = 0.0;
            for (a, b) in masses.iter().zip(&funcs) {
                ferr = ferr.max((a / ms - b / fs).abs());
            }
            gromov_err_final = gerr;
            func_err_final = ferr;
        }
        rep.note_error(gromov_err_final, TOL_GROMOV_LIMIT, || {
            format!("target {target}: Gromov error {gromov_err_final}")
        });
        rep.note_error(func_err_final, TOL_BOUNDARY_FUNCTIONAL, || {
            format!("target {target}: functional error {func_err_final}")
        });
    }
    // target infinity: masses converge (projectively) to the HN-width
    // functional, the limit of hombar(P_j)/(2|j|); all Gromov coordinates
    // vanish in the limit.  The signed second difference of the limiting
    // charges Z(P_j) -> -|j| + |j-1| is -1 at 0 and +1 at 1.
    {
        rep.cases += 1;
        let mut gerr_final = f64::NAN;
        let mut ferr_final = f64::NAN;
        for &m in &schedule {
            let delta = QComplex::new(
                crate::charge::ratio(3 * m * m, 5),
                crate::charge::ratio(-4 * m * m, 5),
            );
            let c = match charge_from_delta(delta) {
                Ok(c) => c,
                Err(e) => {
                    rep.fail(format!("target inf, m {m}: invalid charge ({e})"));
                    continue;
                }
            };
            let g = gromov_a1hat(&c, window).expect("type A");
            let mut gerr: f64 = 0.0;
            for j in -window..=window {
                gerr = gerr.max(g.x(j).abs());
            }
            let masses: Vec<f64> = probes.iter().map(|hn| hn.mass(&|s| c.mass(s))).collect();
            let widths: Vec<f64> =
                probes.iter().map(|hn| (hn.mult[0] + hn.mult[1]) as f64).collect();
            let ms: f64 = masses.iter().sum();
            let ws: f64 = widths.iter().sum();
            let mut ferr: f64 = 0.0;
            for (a, b) in masses.iter().zip(&widths) {
                ferr = ferr.max((a / ms - b / ws).abs());
            }
            gerr_final = gerr;
            ferr_final = ferr;
        }
        rep.note_error(gerr_final, TOL_GROMOV_LIMIT, || {
            format!("target inf: Gromov error {gerr_final}")
        });
        rep.note_error(ferr_final, TOL_BOUNDARY_FUNCTIONAL, || {
            format!("target inf: width functional error {ferr_final}")
        });
        // exact signed second differences of the limit Z values
        let climit = |j: i64| -(j.abs()) + (j - 1).abs();
        for j in -6..=6i64 {
            let dd = climit(j - 1) + climit(j + 1) - 2 * climit(j);
            let want = match j {
                0 => -2,
                1 => 2,
                _ => 0,
            };
            if dd != want {
                rep.fail(format!("signed limit second difference at {j}: {dd} vs {want}"));
            }
        }
    }
    rep.params = serde_json::json!({
        "targets": "-2..=2, inf",
        "schedule_m": schedule,
        "probes": probes.len(),
        "window": window,
    });
    rep
}

/// Criterion 11: degenerating triangles.
pub fn check_degeneration(cfg: &RunConfig) -> CheckReport {
    let mut rep = CheckReport::new("degeneration", None);
    let auto2 = Automaton::new(Quiver::A2);
    let auto1 = Automaton::new(Quiver::A1hat);
    let sigma_of = |auto: &Automaton, letter: GenTag, s: Semistable| -> BTreeMap<Semistable, u128> {
        auto.run_letters(&[(letter, 1)], s).expect("applicable").sigma()
    };
    let add = |a: &BTreeMap<Semistable, u128>, b: &BTreeMap<Semistable, u128>| {
        let mut m = a.clone();
        for (&k, &v) in b {
            *m.entry(k).or_insert(0) += v;
        }
        m
    };
    // A2 triangles (x -> y -> z) with their degenerating letters
    use A2Letter::*;
    use Semistable::*;
    let a2_cases = [
        ((P1, X, P2), GenTag::A2(S2)),
        ((X, P2, P1), GenTag::A2(S1)), // X -> P2 -> P1[1]
        ((P2, P1, X), GenTag::A2(SX)), // P2[-1] -> P1 -> X
    ];
    let charges2 = seeded_charges_a2(cfg.seed ^ 0xde6, 5, 0);
    for c in &charges2 {
        assert!(c.is_nondegenerate());
        for &((x, y, z), letter) in &a2_cases {
            rep.cases += 1;
            // pre-twist strict triangle inequality
            let margin = c.mass(x) + c.mass(z) - c.mass(y);
            if margin <= 1e-12 {
                rep.fail(format!("triangle ({x},{y},{z}): not strict (margin {margin})"));
            }
            // post-twist exact additivity of HN vectors
            let ey = sigma_of(&auto2, letter, y);
            let exz = add(&sigma_of(&auto2, letter, x), &sigma_of(&auto2, letter, z));
            if ey != exz {
                rep.fail(format!("triangle ({x},{y},{z}) under {letter:?}: {ey:?} vs {exz:?}"));
            }
        }
    }
    // A1hat: P1[-1] -> P0 + P0 -> P-1 degenerated by s[j] for j outside
    // {0,1}; the gamma-translate P3[-1] -> P2 + P2 -> P1 by s[0] and s[1]
    let charges1 = seeded_charges_a1hat(cfg.seed ^ 0xde7, 5);
    for c in &charges1 {
        for (j, (x, y, z)) in [-3i64, -2, -1, 2, 3, 4]
            .into_iter()
            .map(|j| (j, (Pk(1), Pk(0), Pk(-1))))
            .chain([0i64, 1].into_iter().map(|j| (j, (Pk(3), Pk(2), Pk(1)))))
        {
            rep.cases += 1;
            let margin = c.mass(x) + c.mass(z) - 2.0 * c.mass(y);
            if margin <= 1e-12 {
                rep.fail(format!("a1hat triangle ({x},{y}+{y},{z}) at s[{j}]: not strict"));
            }
            let letter = GenTag::Sk(j);
            let ey = {
                let one = sigma_of(&auto1, letter, y);
                add(&one, &one)
            };
            let exz = add(&sigma_of(&auto1, letter, x), &sigma_of(&auto1, letter, z));
            if ey != exz {
                rep.fail(format!("a1hat triangle under s[{j}]: {ey:?} vs {exz:?}"));
            }
        }
    }
    rep.params = serde_json::json!({ "charges": charges2.len() + charges1.len() });
    rep
}

/// Criterion 12: the geodesic checker on transported filtrations, plus mass
/// additivity of the shift-resolved HN sequences.
pub fn check_geodesic(cfg: &RunConfig) -> CheckReport {
    let mut rep = CheckReport::new("geodesic", None);
    let mut sequences = 0usize;
    for quiver in [Quiver::A2, Quiver::A1hat] {
        let alg = ZigzagAlgebra::new(quiver);
        let mut oracle = HomOracle::new(&alg, quiver);
        let charges = match quiver {
            Quiver::A2 => seeded_charges_a2(cfg.seed ^ 0x9e0, 2, 0),
            Quiver::A1hat => seeded_charges_a1hat(cfg.seed ^ 0x9e1, 2),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e2);
        let words: Vec<(NormalForm, Semistable)> = match quiver {
            Quiver::A2 => {
                let forms = enumerate_a2_forms(4);
                let bases = [Semistable::P1, Semistable::P2, Semistable::X];
                (0..20)
                    .map(|_| {
                        let nf = forms[rng.gen_range(0..forms.len())].clone();
                        (nf, bases[rng.gen_range(0..3)])
                    })
                    .collect()
            }
            Quiver::A1hat => {
                let forms = enumerate_a1hat_forms(3, 2);
                (0..14)
                    .map(|_| {
                        let nf = forms[rng.gen_range(0..forms.len())].clone();
                        let base = Semistable::Pk(rng.gen_range(0..2));
                        (nf, base)
                    })
                    .collect()
            }
        };
        let auto = Automaton::new(quiver);
        for c in &charges {
            for (nf, base) in &words {
                let body_nf = NormalForm { quiver, gamma_power: 0, body: nf.body.clone() };
                let letters = body_letters(&body_nf);
                if letters.is_empty() {
                    continue;
                }
                rep.cases += 1;
                match shifted_hn(&mut oracle, c, &letters, *base) {
                    Ok((hn_seq, checked)) => {
                        sequences += checked.len();
                        for seq in &checked {
                            if !check_geodesic_condition(&mut oracle, c, seq) {
                                rep.fail(format!(
                                    "word `{body_nf}` on {base}: transported sequence fails"
                                ));
                            }
                        }
                        // the HN sequence itself passes (phases decrease)
                        if !check_geodesic_condition(&mut oracle, c, &hn_seq) {
                            rep.fail(format!("word `{body_nf}` on {base}: HN sequence fails"));
                        }
                        sequences += 1;
                        // multiplicities match the automaton exactly
                        let sigma = auto.run(&body_nf, *base).expect("admissible").sigma();
                        if sequence_sigma(&hn_seq) != sigma {
                            rep.fail(format!(
                                "word `{body_nf}` on {base}: factors {:?} vs automaton {:?}",
                                sequence_sigma(&hn_seq),
                                sigma
                            ));
                        }
                        // mass additivity
                        let mass = mass_of_object(c, &body_nf, *base).expect("recognised");
                        let fmass = sequence_mass(c, &hn_seq);
                        rep.note_error((mass - fmass).abs(), TOL_MASS_ADDITIVITY, || {
                            format!("word `{body_nf}` on {base}: factor mass {fmass} vs {mass}")
                        });
                    }
                    Err(e) => rep.fail(format!("word `{body_nf}` on {base}: {e}")),
                }
            }
        }
    }
    rep.params = serde_json::json!({ "sequences_checked": sequences });
    if sequences < 100 {
        rep.fail(format!("only {sequences} factor sequences checked (need >= 100)"));
    }
    rep
}

/// Run a named suite (or all of them).
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<CheckReport>, String> {
    let both = |f: &dyn Fn(&Corpus, &RunConfig) -> CheckReport| -> Vec<CheckReport> {
        let c2 = build_corpus(Quiver::A2, cfg);
        let c1 = build_corpus(Quiver::A1hat, cfg);
        vec![f(&c2, cfg), f(&c1, cfg)]
    };
    Ok(match name {
        "automaton-vs-oracle" => both(&check_automaton_vs_oracle),
        "rz" => both(&|c, _| check_rz(c)),
        "homs" => both(&check_homs),
        "linearity" => {
            let c2 = build_corpus(Quiver::A2, cfg);
            let c1 = build_corpus(Quiver::A1hat, cfg);
            vec![check_linearity_a2(&c2, cfg), check_linearity_a1hat(&c1, cfg)]
        }
        "tessellation" => vec![check_tessellation(cfg)],
        "limits" => vec![check_limits(cfg)],
        "a1hat-closure" => vec![check_a1hat_closure(cfg)],
        "geodesic" => vec![check_geodesic(cfg)],
        "normalize-soundness" => vec![
            check_normalize_soundness(Quiver::A2, cfg),
            check_normalize_soundness(Quiver::A1hat, cfg),
        ],
        "degeneration" => vec![check_degeneration(cfg)],
        "all" => {
            let mut out = Vec::new();
            let c2 = build_corpus(Quiver::A2, cfg);
            let c1 = build_corpus(Quiver::A1hat, cfg);
            out.push(check_automaton_vs_oracle(&c2, cfg));
            out.push(check_automaton_vs_oracle(&c1, cfg));
            out.push(check_rz(&c2));
            out.push(check_rz(&c1));
            out.push(check_homs(&c2, cfg));
            out.push(check_homs(&c1, cfg));
            out.push(check_linearity_a2(&c2, cfg));
            out.push(check_linearity_a1hat(&c1, cfg));
            out.push(check_limits(cfg));
            out.push(check_tessellation(cfg));
            out.push(check_normalize_soundness(Quiver::A2, cfg));
            out.push(check_normalize_soundness(Quiver::A1hat, cfg));
            out.push(check_a1hat_closure(cfg));
            out.push(check_degeneration(cfg));
            out.push(check_geodesic(cfg));
            out
        }
        other => return Err(format!("unknown suite `{other}`")),
    })
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "automaton-vs-oracle",
        "rz",
        "homs",
        "linearity",
        "tessellation",
        "limits",
        "a1hat-closure",
        "geodesic",
        "normalize-soundness",
        "degeneration",
        "all",
    ]
}
