//! Dg complexes of shifted projectives with exact rational coefficients.
//!
//! A complex is a finite list of generators, each a copy of some `P_v`
//! placed in an integer degree, together with a square differential matrix
//! over the algebra.  In the single identified grading the entry from
//! generator `s` to generator `t` is homogeneous of degree
//! `deg(s) + 1 - deg(t)`, and `D * D = 0` holds as a plain matrix product.
//!
//! Spherical twists are cones over evaluation maps, inverse twists are
//! shifted cones over coevaluation into the dual hom complex, and minimal
//! models are obtained by Gaussian elimination of invertible (idempotent
//! coefficient) entries.  Hom spaces are computed as the cohomology of the
//! hom complex by exact rank computations over Q.

use super::algebra::{AlgElem, ZigzagAlgebra};
use crate::braid::{A2Letter, BraidWord, GenTag};
use crate::Quiver;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// A generator: a copy of `P_vertex` in a homological degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub vertex: u8,
    pub degree: i64,
}

/// Graded dimensions, finitely supported.
pub type GradedDims = BTreeMap<i64, usize>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("object is not spherical: total self-hom dimension {0} (expected 2)")]
    NotSpherical(usize),
    #[error("operation requires a minimal complex")]
    NotMinimal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DgComplex {
    pub quiver: Quiver,
    pub gens: Vec<Gen>,
    /// rows[s][t] = entry from generator s to generator t
    rows: Vec<BTreeMap<usize, AlgElem>>,
}

impl DgComplex {
    pub fn empty(quiver: Quiver) -> Self {
        DgComplex { quiver, gens: Vec::new(), rows: Vec::new() }
    }

    /// The projective `P_vertex` in degree 0.
    pub fn projective(quiver: Quiver, vertex: u8) -> Self {
        DgComplex {
            quiver,
            gens: vec![Gen { vertex, degree: 0 }],
            rows: vec![BTreeMap::new()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn add_gen(&mut self, vertex: u8, degree: i64) -> usize {
        self.gens.push(Gen { vertex, degree });
        self.rows.push(BTreeMap::new());
        self.gens.len() - 1
    }

    pub fn set_entry(&mut self, s: usize, t: usize, e: AlgElem) {
        if e.is_zero() {
            self.rows[s].remove(&t);
        } else {
            self.rows[s].insert(t, e);
        }
    }

    pub fn entry(&self, s: usize, t: usize) -> Option<&AlgElem> {
        self.rows[s].get(&t)
    }

    pub fn row(&self, s: usize) -> &BTreeMap<usize, AlgElem> {
        &self.rows[s]
    }

    /// Shift by `[n]`: degrees drop by n, the differential picks up `(-1)^n`.
    pub fn shifted(&self, n: i64) -> DgComplex {
        let mut out = self.clone();
        for g in out.gens.iter_mut() {
            g.degree -= n;
        }
        if n.rem_euclid(2) == 1 {
            for r in out.rows.iter_mut() {
                for e in r.values_mut() {
                    *e = e.neg();
                }
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &DgComplex) -> DgComplex {
        assert_eq!(self.quiver, other.quiver);
        let mut out = self.clone();
        let off = out.gens.len();
        out.gens.extend_from_slice(&other.gens);
        for r in &other.rows {
            out.rows.push(r.iter().map(|(&t, e)| (t + off, e.clone())).collect());
        }
        out
    }

    /// Check homogeneity, vertex compatibility, and `D^2 = 0`.
    pub fn validate(&self, alg: &ZigzagAlgebra) -> Result<(), String> {
        for (s, r) in self.rows.iter().enumerate() {
            for (&t, e) in r {
                let want = self.gens[s].degree + 1 - self.gens[t].degree;
                for &(i, _) in &e.terms {
                    let b = alg.basis()[i as usize];
                    if b.left != self.gens[s].vertex || b.right != self.gens[t].vertex {
                        return Err(format!("entry {s}->{t} has wrong endpoints"));
                    }
                    if b.degree != want {
                        return Err(format!(
                            "entry {s}->{t} has degree {} (expected {want})",
                            b.degree
                        ));
                    }
                }
            }
        }
        for s in 0..self.gens.len() {
            let mut acc: BTreeMap<usize, AlgElem> = BTreeMap::new();
            for (&m, e) in &self.rows[s] {
                for (&t, f) in &self.rows[m] {
                    let prod = e.mul(f, alg);
                    if !prod.is_zero() {
                        acc.entry(t).or_insert_with(AlgElem::zero).add_assign(&prod);
                    }
                }
            }
            if acc.values().any(|e| !e.is_zero()) {
                return Err(format!("D^2 != 0 at row {s}"));
            }
        }
        Ok(())
    }

    /// Multiset of generators as (vertex, degree) pairs, sorted.
    pub fn gen_multiset(&self) -> Vec<(u8, i64)> {
        let mut v: Vec<(u8, i64)> = self.gens.iter().map(|g| (g.vertex, g.degree)).collect();
        v.sort_unstable();
        v
    }

    /// No invertible entries left?
    pub fn is_minimal(&self, alg: &ZigzagAlgebra) -> bool {
        self.rows.iter().enumerate().all(|(s, r)| {
            r.iter().all(|(&t, e)| {
                self.gens[s].vertex != self.gens[t].vertex
                    || e.idem_coeff(alg, self.gens[s].vertex).is_zero()
            })
        })
    }

    /// JSON serialization: generator list plus sparse differential entries.
    pub fn to_json(&self, alg: &ZigzagAlgebra) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(s, r)| {
                r.iter().map(move |(&t, e)| (s, t, e))
            })
            .map(|(s, t, e)| {
                serde_json::json!({
                    "from": s,
                    "to": t,
                    "coeffs": e.terms.iter().map(|(i, c)| {
                        serde_json::json!({
                            "path": alg.basis()[*i as usize].name,
                            "coeff": c.to_string(),
                        })
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "quiver": self.quiver.name(),
            "generators": self.gens.iter().map(|g| {
                serde_json::json!({"vertex": g.vertex, "degree": g.degree})
            }).collect::<Vec<_>>(),
            "differential": entries,
        })
    }
}

/// Alternating sum of generator classes per vertex.
pub fn k_class(x: &DgComplex) -> [i64; 2] {
    let mut k = [0i64; 2];
    for g in &x.gens {
        let sign = if g.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        k[g.vertex as usize] += sign;
    }
    k
}

/// Generators at a vertex of a minimal complex.
pub fn occurrences(alg: &ZigzagAlgebra, x: &DgComplex, vertex: u8) -> Result<u64, OracleError> {
    if !x.is_minimal(alg) {
        return Err(OracleError::NotMinimal);
    }
    Ok(x.gens.iter().filter(|g| g.vertex == vertex).count() as u64)
}

/// Cone of a degree-0 chain map `F: A -> B` (entries `f[s][t]` from A-gens
/// to B-gens).  Generators: A shifted by one, then B.
pub fn cone(
    alg: &ZigzagAlgebra,
    a: &DgComplex,
    b: &DgComplex,
    f: &[BTreeMap<usize, AlgElem>],
) -> DgComplex {
    debug_assert_eq!(a.gens.len(), f.len());
    let _ = alg;
    let mut out = DgComplex::empty(a.quiver);
    let na = a.gens.len();
    for g in &a.gens {
        out.add_gen(g.vertex, g.degree - 1);
    }
    for g in &b.gens {
        out.add_gen(g.vertex, g.degree);
    }
    for (s, r) in a.rows.iter().enumerate() {
        for (&t, e) in r {
            out.set_entry(s, t, e.neg());
        }
        for (&t, e) in &f[s] {
            out.set_entry(s, na + t, e.clone());
        }
    }
    for (s, r) in b.rows.iter().enumerate() {
        for (&t, e) in r {
            out.set_entry(na + s, na + t, e.clone());
        }
    }
    out
}

/// Gaussian elimination of invertible entries; returns a homotopy-equivalent
/// minimal complex.
pub fn minimize(alg: &ZigzagAlgebra, x: &DgComplex) -> DgComplex {
    let n = x.gens.len();
    let mut rows: Vec<BTreeMap<usize, AlgElem>> = x.rows.clone();
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut alive = vec![true; n];
    for (s, r) in rows.iter().enumerate() {
        for (&t, _) in r {
            cols[t].insert(s);
        }
    }
    let invertible = |rows: &Vec<BTreeMap<usize, AlgElem>>, gens: &Vec<Gen>, s: usize, t: usize| {
        rows[s]
            .get(&t)
            .map(|e| {
                if gens[s].vertex == gens[t].vertex {
                    e.idem_coeff(alg, gens[s].vertex)
                } else {
                    BigRational::zero()
                }
            })
            .unwrap_or_else(BigRational::zero)
    };
    let mut work: VecDeque<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(s, r)| r.keys().map(move |&t| (s, t)))
        .collect();
    while let Some((s, t)) = work.pop_front() {
        if !alive[s] || !alive[t] || s == t {
            continue;
        }
        let c = invertible(&rows, &x.gens, s, t);
        if c.is_zero() {
            continue;
        }
        let cinv = BigRational::one() / c;
        alive[s] = false;
        alive[t] = false;
        // entries into t and out of s drive the correction
        let into_t: Vec<usize> = cols[t].iter().copied().filter(|&g| alive[g]).collect();
        let out_of_s: Vec<(usize, AlgElem)> = rows[s]
            .iter()
            .filter(|(&d, _)| alive[d])
            .map(|(&d, e)| (d, e.clone()))
            .collect();
        for &g in &into_t {
            let e_gt = rows[g].get(&t).cloned().unwrap_or_else(AlgElem::zero);
            if e_gt.is_zero() {
                continue;
            }
            let lead = e_gt.scaled(&cinv);
            for (d, e_sd) in &out_of_s {
                let corr = lead.mul(e_sd, alg);
                if corr.is_zero() {
                    continue;
                }
                let mut cur = rows[g].get(d).cloned().unwrap_or_else(AlgElem::zero);
                cur.add_assign(&corr.neg());
                if cur.is_zero() {
                    rows[g].remove(d);
                    cols[*d].remove(&g);
                } else {
                    rows[g].insert(*d, cur);
                    cols[*d].insert(g);
                    if !invertible(&rows, &x.gens, g, *d).is_zero() {
                        work.push_back((g, *d));
                    }
                }
            }
        }
        // drop all entries touching the eliminated pair
        for dead in [s, t] {
            let targets: Vec<usize> = rows[dead].keys().copied().collect();
            for t2 in targets {
                cols[t2].remove(&dead);
            }
            rows[dead].clear();
            let sources: Vec<usize> = cols[dead].iter().copied().collect();
            for s2 in sources {
                rows[s2].remove(&dead);
            }
            cols[dead].clear();
        }
    }
    // compact
    let mut map = vec![usize::MAX; n];
    let mut out = DgComplex::empty(x.quiver);
    for i in 0..n {
        if alive[i] {
            map[i] = out.add_gen(x.gens[i].vertex, x.gens[i].degree);
        }
    }
    for (s, r) in rows.iter().enumerate() {
        if !alive[s] {
            continue;
        }
        for (&t, e) in r {
            if alive[t] {
                out.set_entry(map[s], map[t], e.clone());
            }
        }
    }
    debug_assert!(out.gens.len() > 64 || out.validate(alg) == Ok(()));
    debug_assert!(out.is_minimal(alg));
    out
}

/// A complex of vector spaces (the hom complex in a fixed basis).
pub struct VsComplex {
    pub degrees: Vec<i64>,
    /// diff[i] = targets of basis vector i with coefficients
    pub diff: Vec<Vec<(usize, BigRational)>>,
}

/// The hom complex `Hom(X, Y)` with basis (x-gen, y-gen, path).
pub fn hom_complex(alg: &ZigzagAlgebra, x: &DgComplex, y: &DgComplex) -> VsComplex {
    let mut index: HashMap<(usize, usize, u8), usize> = HashMap::new();
    let mut degrees = Vec::new();
    let mut basis: Vec<(usize, usize, u8)> = Vec::new();
    for (ai, ag) in x.gens.iter().enumerate() {
        for (bi, bg) in y.gens.iter().enumerate() {
            for p in alg.paths(ag.vertex, bg.vertex) {
                let n = alg.basis()[p as usize].degree + bg.degree - ag.degree;
                index.insert((ai, bi, p), degrees.len());
                degrees.push(n);
                basis.push((ai, bi, p));
            }
        }
    }
    // transient column index for D_X
    let mut xcols: Vec<Vec<usize>> = vec![Vec::new(); x.gens.len()];
    for (s, r) in x.rows.iter().enumerate() {
        for &t in r.keys() {
            xcols[t].push(s);
        }
    }
    let mut diff: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); basis.len()];
    for (i, &(ai, bi, p)) in basis.iter().enumerate() {
        let n = degrees[i];
        let pe = AlgElem::basis(p);
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        // + u . D_Y
        for (&g, e) in y.row(bi) {
            let prod = pe.mul(e, alg);
            for (q, c) in prod.terms {
                if let Some(&j) = index.get(&(ai, g, q)) {
                    *acc.entry(j).or_insert_with(BigRational::zero) += c;
                }
            }
        }
        // - (-1)^n D_X . u
        let sign = if n.rem_euclid(2) == 0 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        for &g in &xcols[ai] {
            let e = x.entry(g, ai).unwrap();
            let prod = e.mul(&pe, alg);
            for (q, c) in prod.terms {
                if let Some(&j) = index.get(&(g, bi, q)) {
                    *acc.entry(j).or_insert_with(BigRational::zero) += &sign * c;
                }
            }
        }
        diff[i] = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    VsComplex { degrees, diff }
}

/// Rank of a sparse rational matrix given as rows.
fn rank(rows: Vec<BTreeMap<usize, BigRational>>) -> usize {
    let mut pivots: Vec<(usize, BTreeMap<usize, BigRational>)> = Vec::new();
    for mut r in rows {
        loop {
            let Some((&c, _)) = r.first_key_value() else {
                break;
            };
            if let Some((_, pr)) = pivots.iter().find(|(pc, _)| *pc == c) {
                let f = r.get(&c).unwrap() / pr.get(&c).unwrap();
                for (tc, tv) in pr.iter() {
                    let delta = &f * tv;
                    let cur = r.entry(*tc).or_insert_with(BigRational::zero);
                    *cur -= delta;
                    if cur.is_zero() {
                        r.remove(tc);
                    }
                }
            } else {
                pivots.push((c, r));
                break;
            }
        }
    }
    pivots.len()
}

/// Graded cohomology dimensions of a vector-space complex.
pub fn cohomology_dims(vs: &VsComplex) -> GradedDims {
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &d) in vs.degrees.iter().enumerate() {
        by_degree.entry(d).or_default().push(i);
    }
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for (&d, ixs) in &by_degree {
        let rows: Vec<BTreeMap<usize, BigRational>> = ixs
            .iter()
            .map(|&i| vs.diff[i].iter().map(|(j, c)| (*j, c.clone())).collect())
            .collect();
        ranks.insert(d, rank(rows));
    }
    let mut out = GradedDims::new();
    for (&d, ixs) in &by_degree {
        let h = ixs.len() - ranks.get(&d).copied().unwrap_or(0)
            - ranks.get(&(d - 1)).copied().unwrap_or(0);
        if h > 0 {
            out.insert(d, h);
        }
    }
    out
}

/// Graded dimensions of `Hom*(X, Y)`.
pub fn hom_dims(alg: &ZigzagAlgebra, x: &DgComplex, y: &DgComplex) -> GradedDims {
    cohomology_dims(&hom_complex(alg, x, y))
}

pub fn total_hom(alg: &ZigzagAlgebra, x: &DgComplex, y: &DgComplex) -> usize {
    hom_dims(alg, x, y).values().sum()
}

/// Basis of the left nullspace `{ v : sum_i v_i row_i = 0 }`.
fn left_nullspace(rows: Vec<BTreeMap<usize, BigRational>>) -> Vec<Vec<BigRational>> {
    let n = rows.len();
    let mut pivots: Vec<(usize, BTreeMap<usize, BigRational>, Vec<BigRational>)> = Vec::new();
    let mut null = Vec::new();
    for (i, mut r) in rows.into_iter().enumerate() {
        let mut comb = vec![BigRational::zero(); n];
        comb[i] = BigRational::one();
        loop {
            let Some((&c, _)) = r.first_key_value() else {
                null.push(comb);
                break;
            };
            if let Some((_, pr, pcomb)) = pivots.iter().find(|(pc, _, _)| *pc == c) {
                let f = r.get(&c).unwrap() / pr.get(&c).unwrap();
                for (tc, tv) in pr.iter() {
                    let delta = &f * tv;
                    let cur = r.entry(*tc).or_insert_with(BigRational::zero);
                    *cur -= delta;
                    if cur.is_zero() {
                        r.remove(tc);
                    }
                }
                for (k, pv) in pcomb.iter().enumerate() {
                    let delta = &f * pv;
                    comb[k] -= delta;
                }
            } else {
                pivots.push((c, r, comb));
                break;
            }
        }
    }
    null
}

/// Degree-0 cycles of `Hom(X, Y)` as matrices over the algebra.
fn chain_maps(alg: &ZigzagAlgebra, x: &DgComplex, y: &DgComplex) -> Vec<Vec<BTreeMap<usize, AlgElem>>> {
    let vs = hom_complex(alg, x, y);
    let mut basis_at0 = Vec::new();
    let mut basis_meta = Vec::new();
    {
        // rebuild the (ai, bi, p) metadata in enumeration order
        let mut metas = Vec::new();
        for (ai, ag) in x.gens.iter().enumerate() {
            for (bi, bg) in y.gens.iter().enumerate() {
                for p in alg.paths(ag.vertex, bg.vertex) {
                    metas.push((ai, bi, p));
                }
            }
        }
        for (i, &d) in vs.degrees.iter().enumerate() {
            if d == 0 {
                basis_at0.push(i);
                basis_meta.push(metas[i]);
            }
        }
    }
    let rows: Vec<BTreeMap<usize, BigRational>> = basis_at0
        .iter()
        .map(|&i| vs.diff[i].iter().map(|(j, c)| (*j, c.clone())).collect())
        .collect();
    let kernel = left_nullspace(rows);
    kernel
        .into_iter()
        .map(|coeffs| {
            let mut m: Vec<BTreeMap<usize, AlgElem>> = vec![BTreeMap::new(); x.gens.len()];
            for (k, c) in coeffs.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (ai, bi, p) = basis_meta[k];
                m[ai].entry(bi)
                    .or_insert_with(AlgElem::zero)
                    .add_assign(&AlgElem::basis_scaled(p, c));
            }
            m
        })
        .collect()
}

/// Shift-isomorphism test for minimal spherical complexes: generator
/// multisets must match up to a constant degree offset, and some composite
/// `X -> Y[s] -> X` must be non-zero in `H^0(End X)`; since both objects are
/// indecomposable this forces an isomorphism.
pub fn is_shift_iso(alg: &ZigzagAlgebra, x: &DgComplex, y: &DgComplex) -> bool {
    let x = minimize(alg, x);
    let y = minimize(alg, y);
    if x.is_zero() && y.is_zero() {
        return true;
    }
    if x.gens.len() != y.gens.len() || x.is_zero() {
        return false;
    }
    let mx = x.gen_multiset();
    let my = y.gen_multiset();
    let s = my[0].1 - mx[0].1;
    if !mx.iter().zip(&my).all(|(a, b)| a.0 == b.0 && b.1 - a.1 == s) {
        return false;
    }
    let ys = y.shifted(s);
    if x == ys {
        return true;
    }
    let fwd = chain_maps(alg, &x, &ys);
    let bwd = chain_maps(alg, &ys, &x);
    if fwd.is_empty() || bwd.is_empty() {
        return false;
    }
    // boundaries of End(X) in degree 0: images of degree -1 basis vectors
    let endo = hom_complex(alg, &x, &x);
    let mut metas = Vec::new();
    for (ai, ag) in x.gens.iter().enumerate() {
        for (bi, bg) in x.gens.iter().enumerate() {
            for p in alg.paths(ag.vertex, bg.vertex) {
                metas.push((ai, bi, p));
            }
        }
    }
    let at0: HashMap<(usize, usize, u8), usize> = metas
        .iter()
        .enumerate()
        .filter(|(i, _)| endo.degrees[*i] == 0)
        .enumerate()
        .map(|(k, (i, meta))| {
            let _ = i;
            (*meta, k)
        })
        .collect();
    let n0 = at0.len();
    let mut boundary_rows: Vec<BTreeMap<usize, BigRational>> = Vec::new();
    for (i, &d) in endo.degrees.iter().enumerate() {
        if d != -1 {
            continue;
        }
        let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (j, c) in &endo.diff[i] {
            let key = metas[*j];
            if let Some(&k) = at0.get(&key) {
                row.insert(k, c.clone());
            }
        }
        if !row.is_empty() {
            boundary_rows.push(row);
        }
    }
    let base_rank = rank(boundary_rows.clone());
    let to_vec = |m: &Vec<BTreeMap<usize, AlgElem>>| -> BTreeMap<usize, BigRational> {
        let mut row = BTreeMap::new();
        for (ai, r) in m.iter().enumerate() {
            for (&bi, e) in r {
                for (p, c) in &e.terms {
                    if let Some(&k) = at0.get(&(ai, bi, *p)) {
                        row.insert(k, c.clone());
                    }
                }
            }
        }
        row
    };
    let _ = n0;
    for f in &fwd {
        for g in &bwd {
            // composite X -> Y[s] -> X: apply f then g
            let mut comp: Vec<BTreeMap<usize, AlgElem>> = vec![BTreeMap::new(); x.gens.len()];
            for (ai, r) in f.iter().enumerate() {
                for (&bi, e) in r {
                    for (&ci, e2) in &g[bi] {
                        let prod = e.mul(e2, alg);
                        if !prod.is_zero() {
                            comp[ai].entry(ci)
                                .or_insert_with(AlgElem::zero)
                                .add_assign(&prod);
                        }
                    }
                }
            }
            let row = to_vec(&comp);
            if row.is_empty() {
                continue;
            }
            let mut with = boundary_rows.clone();
            with.push(row);
            if rank(with) > base_rank {
                return true;
            }
        }
    }
    false
}

/// Reduced total hom between spherical objects: total `dim Hom*(X, Y)`,
/// minus 2 when `X` and `Y` agree up to shift.
pub fn hom_bar(alg: &ZigzagAlgebra, x: &DgComplex, y: &DgComplex) -> Result<u64, OracleError> {
    let sx = total_hom(alg, x, x);
    if sx != 2 {
        return Err(OracleError::NotSpherical(sx));
    }
    let sy = total_hom(alg, y, y);
    if sy != 2 {
        return Err(OracleError::NotSpherical(sy));
    }
    let t = total_hom(alg, x, y) as u64;
    if is_shift_iso(alg, x, y) {
        Ok(t - 2)
    } else {
        Ok(t)
    }
}

/// Spherical twist (`direction = +1`) or inverse twist (`direction = -1`)
/// at the projective `P_vertex`; the result is minimized.
pub fn twist(alg: &ZigzagAlgebra, vertex: u8, x: &DgComplex, direction: i64) -> DgComplex {
    if direction >= 0 {
        twist_pos(alg, vertex, x)
    } else {
        twist_neg(alg, vertex, x)
    }
}

fn twist_pos(alg: &ZigzagAlgebra, vertex: u8, x: &DgComplex) -> DgComplex {
    // K = Hom(P_vertex, X): basis (beta, p), p a path from vertex to the
    // generator's vertex; differential u -> u . D_X.
    let mut basis: Vec<(usize, u8)> = Vec::new();
    let mut index: HashMap<(usize, u8), usize> = HashMap::new();
    for (bi, bg) in x.gens.iter().enumerate() {
        for p in alg.paths(vertex, bg.vertex) {
            index.insert((bi, p), basis.len());
            basis.push((bi, p));
        }
    }
    let mut t = DgComplex::empty(x.quiver);
    for &(bi, p) in &basis {
        let n = alg.basis()[p as usize].degree + x.gens[bi].degree;
        t.add_gen(vertex, n);
    }
    let e_v = alg.idempotent(vertex);
    for (i, &(bi, p)) in basis.iter().enumerate() {
        let pe = AlgElem::basis(p);
        for (&g, e) in x.row(bi) {
            let prod = pe.mul(e, alg);
            for (q, c) in prod.terms {
                if let Some(&j) = index.get(&(g, q)) {
                    let mut cur = t.entry(i, j).cloned().unwrap_or_else(AlgElem::zero);
                    cur.add_assign(&AlgElem::basis_scaled(e_v, c));
                    t.set_entry(i, j, cur);
                }
            }
        }
    }
    // evaluation T -> X
    let mut ev: Vec<BTreeMap<usize, AlgElem>> = vec![BTreeMap::new(); basis.len()];
    for (i, &(bi, p)) in basis.iter().enumerate() {
        ev[i].insert(bi, AlgElem::basis(p));
    }
    let c = cone(alg, &t, x, &ev);
    debug_assert!(c.gens.len() > 64 || c.validate(alg) == Ok(()));
    minimize(alg, &c)
}

fn twist_neg(alg: &ZigzagAlgebra, vertex: u8, x: &DgComplex) -> DgComplex {
    // L = Hom(X, P_vertex): basis (alpha, q), q a path from the generator's
    // vertex to `vertex`, of degree n = deg q - deg alpha.
    let mut basis: Vec<(usize, u8)> = Vec::new();
    let mut index: HashMap<(usize, u8), usize> = HashMap::new();
    for (ai, ag) in x.gens.iter().enumerate() {
        for q in alg.paths(ag.vertex, vertex) {
            index.insert((ai, q), basis.len());
            basis.push((ai, q));
        }
    }
    let deg = |k: usize| -> i64 {
        let (ai, q) = basis[k];
        alg.basis()[q as usize].degree - x.gens[ai].degree
    };
    // d_L as scalar matrix: d(alpha,q) = -(-1)^n sum_gamma expand(dX[gamma][alpha] . q)
    let mut xcols: Vec<Vec<usize>> = vec![Vec::new(); x.gens.len()];
    for (s, r) in x.rows.iter().enumerate() {
        for &t in r.keys() {
            xcols[t].push(s);
        }
    }
    let mut d_l: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); basis.len()];
    for (k, &(ai, q)) in basis.iter().enumerate() {
        let n = deg(k);
        let sign = if n.rem_euclid(2) == 0 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        let qe = AlgElem::basis(q);
        for &g in &xcols[ai] {
            let e = x.entry(g, ai).unwrap();
            let prod = e.mul(&qe, alg);
            for (q2, c) in prod.terms {
                if let Some(&j) = index.get(&(g, q2)) {
                    d_l[k].push((j, &sign * c));
                }
            }
        }
    }
    // W = L^dual tensor P_vertex: generator k* in degree -deg(k);
    // d_W(k* -> j*) = (-1)^{deg(k)} [coefficient of k in d_L(j)]
    let mut w = DgComplex::empty(x.quiver);
    for k in 0..basis.len() {
        w.add_gen(vertex, -deg(k));
    }
    let e_v = alg.idempotent(vertex);
    for j in 0..basis.len() {
        for &(k, ref c) in &d_l[j] {
            let sign = if deg(k).rem_euclid(2) == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            let mut cur = w.entry(k, j).cloned().unwrap_or_else(AlgElem::zero);
            cur.add_assign(&AlgElem::basis_scaled(e_v, sign * c.clone()));
            w.set_entry(k, j, cur);
        }
    }
    // coevaluation X -> W
    let mut coev: Vec<BTreeMap<usize, AlgElem>> = vec![BTreeMap::new(); x.gens.len()];
    for (k, &(ai, q)) in basis.iter().enumerate() {
        coev[ai].insert(k, AlgElem::basis(q));
    }
    let c = cone(alg, x, &w, &coev).shifted(-1);
    debug_assert!(c.gens.len() > 64 || c.validate(alg) == Ok(()));
    minimize(alg, &c)
}

/// Apply each letter of a braid word (rightmost letter first) as a chain of
/// elementary twists; `sX` and `s[k]` are expanded through their conjugation
/// identities.  The result is minimal.
pub fn apply_word(alg: &ZigzagAlgebra, w: &BraidWord, x: &DgComplex) -> DgComplex {
    let mut cur = minimize(alg, x);
    let mut letters = w.expanded();
    letters.reverse();
    for (tag, sign) in letters {
        for (v, dir) in elementary_twists(w.quiver, tag, sign) {
            cur = twist(alg, v, &cur, dir);
        }
    }
    cur
}

/// Elementary (vertex, direction) twists realising one letter, in
/// application order.
pub fn elementary_twists(quiver: Quiver, tag: GenTag, sign: i64) -> Vec<(u8, i64)> {
    match (quiver, tag, sign) {
        (Quiver::A2, GenTag::A2(A2Letter::S1), s) => vec![(0, s)],
        (Quiver::A2, GenTag::A2(A2Letter::S2), s) => vec![(1, s)],
        // sX = g s1 g^-1 = s2 s1 s2^-1  (applied right to left)
        (Quiver::A2, GenTag::A2(A2Letter::SX), s) => vec![(1, -1), (0, s), (1, 1)],
        // g = s2 s1: apply s1 then s2
        (Quiver::A2, GenTag::Gamma, 1) => vec![(0, 1), (1, 1)],
        (Quiver::A2, GenTag::Gamma, _) => vec![(1, -1), (0, -1)],
        // a1hat: g = s1 s0
        (Quiver::A1hat, GenTag::Gamma, 1) => vec![(0, 1), (1, 1)],
        (Quiver::A1hat, GenTag::Gamma, _) => vec![(1, -1), (0, -1)],
        (Quiver::A1hat, GenTag::Sk(k), s) => {
            let b = k.rem_euclid(2) as u8;
            let m = (k - b as i64) / 2;
            let mut seq = Vec::new();
            let gamma = |seq: &mut Vec<(u8, i64)>, e: i64| {
                if e >= 0 {
                    for _ in 0..e {
                        seq.push((0, 1));
                        seq.push((1, 1));
                    }
                } else {
                    for _ in 0..(-e) {
                        seq.push((1, -1));
                        seq.push((0, -1));
                    }
                }
            };
            // s_k = g^m s_b g^-m: apply g^-m, then s_b, then g^m
            gamma(&mut seq, -m);
            seq.push((b, s));
            gamma(&mut seq, m);
            seq
        }
        _ => panic!("letter does not belong to the {quiver} alphabet"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_word;

    fn alg2() -> ZigzagAlgebra {
        ZigzagAlgebra::new(Quiver::A2)
    }
    fn alg1h() -> ZigzagAlgebra {
        ZigzagAlgebra::new(Quiver::A1hat)
    }
    fn p(quiver: Quiver, v: u8) -> DgComplex {
        DgComplex::projective(quiver, v)
    }

    #[test]
    fn projective_hom_dims() {
        let alg = alg2();
        let p1 = p(Quiver::A2, 0);
        let p2 = p(Quiver::A2, 1);
        assert_eq!(hom_dims(&alg, &p1, &p1), GradedDims::from([(0, 1), (2, 1)]));
        assert_eq!(hom_dims(&alg, &p1, &p2), GradedDims::from([(1, 1)]));
        let alg = alg1h();
        let p0 = p(Quiver::A1hat, 0);
        let p1 = p(Quiver::A1hat, 1);
        assert_eq!(hom_dims(&alg, &p0, &p0), GradedDims::from([(0, 1), (2, 1)]));
        assert_eq!(hom_dims(&alg, &p0, &p1), GradedDims::from([(1, 2)]));
    }

    #[test]
    fn twist_of_p2_at_p1_is_x() {
        let alg = alg2();
        let x = twist(&alg, 0, &p(Quiver::A2, 1), 1);
        // (P1 -> P2): one generator at each vertex, same degree
        assert_eq!(x.gens.len(), 2);
        assert_eq!(k_class(&x), [1, 1]);
        // spherical with self-homs k[t]/t^2
        assert_eq!(total_hom(&alg, &x, &x), 2);
        let d = hom_dims(&alg, &x, &x);
        assert_eq!(d.get(&0), Some(&1));
        assert_eq!(d.get(&2), Some(&1));
    }

    #[test]
    fn twist_untwist_round_trip() {
        for (quiver, alg) in [(Quiver::A2, alg2()), (Quiver::A1hat, alg1h())] {
            for v in 0..2u8 {
                for base in 0..2u8 {
                    let x = p(quiver, base);
                    let tw = twist(&alg, v, &x, 1);
                    let back = twist(&alg, v, &tw, -1);
                    assert!(
                        back.gen_multiset() == x.gen_multiset(),
                        "{quiver} twist({v}) round trip on P{base}: got {:?}",
                        back.gen_multiset()
                    );
                    assert!(is_shift_iso(&alg, &back, &x));
                }
            }
        }
    }

    #[test]
    fn twist_on_own_projective_shifts() {
        let alg = alg2();
        let p1 = p(Quiver::A2, 0);
        let t = twist(&alg, 0, &p1, 1);
        assert_eq!(t.gen_multiset(), vec![(0, 1)]); // P1[-1]
        let t = twist(&alg, 0, &p1, -1);
        assert_eq!(t.gen_multiset(), vec![(0, -1)]); // P1[1]
    }

    #[test]
    fn minimize_kills_contractible() {
        let alg = alg2();
        // cone(id_{P1}) must vanish
        let p1 = p(Quiver::A2, 0);
        let mut f: Vec<BTreeMap<usize, AlgElem>> = vec![BTreeMap::new()];
        f[0].insert(0, AlgElem::basis(alg.idempotent(0)));
        let c = cone(&alg, &p1, &p1, &f);
        let m = minimize(&alg, &c);
        assert!(m.is_zero());
    }

    #[test]
    fn minimize_preserves_homs_and_kclass() {
        let alg = alg2();
        // sigma_2 sigma_1 P1 before minimization
        let w = parse_word("s2 s1", Quiver::A2).unwrap();
        let big = apply_word(&alg, &w, &p(Quiver::A2, 0));
        // apply_word minimizes; rebuild an unminimized model via direct sum
        // with a contractible cone and compare invariants
        let mut f: Vec<BTreeMap<usize, AlgElem>> = vec![BTreeMap::new()];
        f[0].insert(0, AlgElem::basis(alg.idempotent(1)));
        let contractible = cone(&alg, &p(Quiver::A2, 1), &p(Quiver::A2, 1), &f);
        let padded = big.direct_sum(&contractible);
        let m = minimize(&alg, &padded);
        assert_eq!(k_class(&m), k_class(&padded));
        for v in 0..2 {
            assert_eq!(
                hom_dims(&alg, &m, &p(Quiver::A2, v)),
                hom_dims(&alg, &padded, &p(Quiver::A2, v))
            );
        }
    }

    #[test]
    fn gamma_permutes_projectives_a2() {
        let alg = alg2();
        // g P1 = X[-1], g^3 = [-2]
        let w = parse_word("g", Quiver::A2).unwrap();
        let gp1 = apply_word(&alg, &w, &p(Quiver::A2, 0));
        let x = twist(&alg, 1, &p(Quiver::A2, 0), 1);
        assert!(is_shift_iso(&alg, &gp1, &x));
        let w3 = parse_word("g^3", Quiver::A2).unwrap();
        let c = apply_word(&alg, &w3, &p(Quiver::A2, 0));
        assert_eq!(c.gen_multiset(), vec![(0, 2)]); // P1[-2]
    }

    #[test]
    fn braid_relation_a2() {
        let alg = alg2();
        let lhs_w = parse_word("s1 s2 s1", Quiver::A2).unwrap();
        let rhs_w = parse_word("s2 s1 s2", Quiver::A2).unwrap();
        for base in 0..2u8 {
            let lhs = apply_word(&alg, &lhs_w, &p(Quiver::A2, base));
            let rhs = apply_word(&alg, &rhs_w, &p(Quiver::A2, base));
            assert!(is_shift_iso(&alg, &lhs, &rhs), "braid relation on P{base}");
        }
    }

    #[test]
    fn rz_counts_small_a2() {
        let alg = alg2();
        // [5:3] via s1 s2^-1 s1^2 applied to P2
        let w = crate::psl2::word_of_point(&crate::psl2::ProjPoint::new(5, 3)).unwrap();
        let x = apply_word(&alg, &w, &p(Quiver::A2, 1));
        assert_eq!(occurrences(&alg, &x, 0), Ok(5));
        assert_eq!(occurrences(&alg, &x, 1), Ok(3));
        assert_eq!(total_hom(&alg, &x, &x), 2);
    }

    #[test]
    fn sigma_j_update_rule_small() {
        let alg = alg1h();
        // s2 P0 = P2[-1] -> P3^2: occurrences P0: 1*1+2*2 = 5, P1: 1*2+2*3 = 8
        let w = parse_word("s[2]", Quiver::A1hat).unwrap();
        let x = apply_word(&alg, &w, &p(Quiver::A1hat, 0));
        assert_eq!(occurrences(&alg, &x, 0), Ok(5));
        assert_eq!(occurrences(&alg, &x, 1), Ok(8));
    }

    #[test]
    fn hombar_examples() {
        let alg = alg2();
        let p1 = p(Quiver::A2, 0);
        let p2 = p(Quiver::A2, 1);
        assert_eq!(hom_bar(&alg, &p1, &p1), Ok(0));
        let x = twist(&alg, 1, &p1, 1); // X = [1:-1]
        assert_eq!(hom_bar(&alg, &p1, &x), Ok(1));
        assert_eq!(hom_bar(&alg, &p2, &x), Ok(1));
        // X vs X' = (P1 -> P2): same generators, not isomorphic
        let xp = twist(&alg, 0, &p2, 1);
        assert_eq!(hom_bar(&alg, &x, &xp), Ok(2));
        assert!(!is_shift_iso(&alg, &x, &xp));
        let alg = alg1h();
        let p0 = p(Quiver::A1hat, 0);
        let p1h = p(Quiver::A1hat, 1);
        assert_eq!(hom_bar(&alg, &p0, &p1h), Ok(2));
        assert_eq!(hom_bar(&alg, &p0, &p0), Ok(0));
    }

    #[test]
    fn kclass_shift_and_sum() {
        let alg = alg2();
        let x = twist(&alg, 1, &p(Quiver::A2, 0), 1);
        assert_eq!(k_class(&x), [1, 1]);
        assert_eq!(k_class(&x.shifted(1)), [-1, -1]);
        assert_eq!(x.shifted(1).validate(&alg), Ok(()));
    }

    #[test]
    fn cy2_symmetry_samples() {
        let alg = alg2();
        let w1 = parse_word("s1 s2^-1", Quiver::A2).unwrap();
        let w2 = parse_word("s2 s1 s1", Quiver::A2).unwrap();
        let a = apply_word(&alg, &w1, &p(Quiver::A2, 0));
        let b = apply_word(&alg, &w2, &p(Quiver::A2, 1));
        assert_eq!(total_hom(&alg, &a, &b), total_hom(&alg, &b, &a));
        let alg = alg1h();
        let w1 = parse_word("s[2]", Quiver::A1hat).unwrap();
        let a = apply_word(&alg, &w1, &p(Quiver::A1hat, 0));
        let b = p(Quiver::A1hat, 1);
        assert_eq!(total_hom(&alg, &a, &b), total_hom(&alg, &b, &a));
    }
}
