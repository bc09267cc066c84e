//! The simplicial deleted product, its triangulation as a free Z2-complex,
//! and the swap quotient carrying the double-cover cocycle.
//!
//! A cell `σ × τ` (σ, τ disjoint) is triangulated by the staircase
//! subdivision: chains `(u_0, v_0) < … < (u_q, v_q)` in the componentwise
//! order on vertex pairs. Every chain lies in the interior of exactly one
//! cell, namely the one spanned by its two coordinate projections, so
//! enumerating monotone lattice paths per cell lists each simplex once.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::delta::{DeltaComplex, DeltaComplexLike};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A closed cell `σ × τ` of the deleted product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPair {
    pub sigma: Simplex,
    pub tau: Simplex,
}

/// All ordered pairs of disjoint simplices, both orders present. Pairs are
/// listed by `σ` in global simplex order, then `τ` in the same order.
pub fn deleted_cell_pairs(k: &SimplicialComplex) -> Vec<CellPair> {
    let all: Vec<&Simplex> = k.all_simplices().collect();
    let mut out = Vec::new();
    for s in &all {
        for t in &all {
            if s.is_disjoint(t) {
                out.push(CellPair {
                    sigma: (*s).clone(),
                    tau: (*t).clone(),
                });
            }
        }
    }
    out
}

/// What the simplices of an equivariant complex are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexLabels {
    /// Chains of vertex pairs, flattened as `u_0, v_0, u_1, v_1, …`.
    PairChains(Vec<Vec<u32>>),
    /// Ordered vertex lists of a simplicial complex.
    Vertices(Vec<Vec<u32>>),
}

/// A Δ-complex with a free simplicial involution.
#[derive(Clone, Debug)]
pub struct EquivariantDeltaComplex {
    delta: DeltaComplex,
    involution: Vec<Vec<u32>>,
    labels: SimplexLabels,
}

impl EquivariantDeltaComplex {
    pub fn delta(&self) -> &DeltaComplex {
        &self.delta
    }

    pub fn involution(&self, q: usize, s: usize) -> usize {
        self.involution[q][s] as usize
    }

    pub fn labels(&self) -> &SimplexLabels {
        &self.labels
    }

    /// The chain of vertex pairs of a simplex, when this is a deleted
    /// product.
    pub fn chain(&self, q: usize, s: usize) -> Option<Vec<(u32, u32)>> {
        match &self.labels {
            SimplexLabels::PairChains(c) => {
                let w = 2 * (q + 1);
                Some(
                    c[q][s * w..(s + 1) * w]
                        .chunks_exact(2)
                        .map(|p| (p[0], p[1]))
                        .collect(),
                )
            }
            SimplexLabels::Vertices(_) => None,
        }
    }

    /// The equivariant subcomplex of simplices of dimension at most `n`.
    /// Ids are preserved.
    pub fn skeleton(&self, n: usize) -> EquivariantDeltaComplex {
        let keep = (n + 1).min(self.involution.len());
        let cut = |v: &Vec<Vec<u32>>| v[..keep].to_vec();
        EquivariantDeltaComplex {
            delta: self.delta.skeleton(n),
            involution: cut(&self.involution),
            labels: match &self.labels {
                SimplexLabels::PairChains(c) => SimplexLabels::PairChains(cut(c)),
                SimplexLabels::Vertices(c) => SimplexLabels::Vertices(cut(c)),
            },
        }
    }

    /// Checks the simplicial identities, that the involution is free,
    /// involutive and commutes with faces, and for deleted products that
    /// each chain projects onto two disjoint simplices of `source`.
    pub fn verify(&self, source: Option<&SimplicialComplex>) -> Result<()> {
        self.delta.verify_simplicial_identities()?;
        for (q, inv) in self.involution.iter().enumerate() {
            if inv.len() % 2 != 0 {
                return Err(Error::integrity(format!("odd number of {q}-simplices")));
            }
            for (s, &t) in inv.iter().enumerate() {
                let t = t as usize;
                if t == s {
                    return Err(Error::integrity(format!(
                        "{q}-simplex {s} is fixed by the involution"
                    )));
                }
                if inv[t] as usize != s {
                    return Err(Error::integrity(format!(
                        "involution does not square to the identity on {q}-simplex {s}"
                    )));
                }
                if q > 0 {
                    for i in 0..=q {
                        let a = self.involution[q - 1][self.delta.face(q, s, i)] as usize;
                        let b = self.delta.face(q, t, i);
                        if a != b {
                            return Err(Error::integrity(format!(
                                "involution does not commute with d_{i} on {q}-simplex {s}"
                            )));
                        }
                    }
                }
            }
        }
        if let (Some(k), SimplexLabels::PairChains(_)) = (source, &self.labels) {
            for q in 0..self.involution.len() {
                for s in 0..self.involution[q].len() {
                    let chain = self.chain(q, s).unwrap();
                    if chain.iter().any(|&(u, v)| chain.contains(&(v, u))) {
                        return Err(Error::integrity(format!(
                            "chain {chain:?} contains a pair and its swap"
                        )));
                    }
                    let a = Simplex::new(chain.iter().map(|p| p.0).collect());
                    let b = Simplex::new(chain.iter().map(|p| p.1).collect());
                    if !a.is_disjoint(&b) || !k.contains(&a) || !k.contains(&b) {
                        return Err(Error::integrity(format!(
                            "chain {chain:?} does not project onto disjoint simplices"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl DeltaComplexLike for EquivariantDeltaComplex {
    fn top_dim(&self) -> Option<usize> {
        self.delta.top_dim()
    }

    fn simplex_count(&self, q: usize) -> usize {
        self.delta.simplex_count(q)
    }

    fn face(&self, q: usize, s: usize, i: usize) -> usize {
        self.delta.face(q, s, i)
    }
}

/// Monotone lattice paths from `(0,0)` to `(p,q)` with unit steps right,
/// up, or diagonal. Each path is emitted as its list of grid points.
fn staircase_paths(p: usize, q: usize, mut emit: impl FnMut(&[(usize, usize)])) {
    fn go(p: usize, q: usize, path: &mut Vec<(usize, usize)>, emit: &mut dyn FnMut(&[(usize, usize)])) {
        let (i, j) = *path.last().unwrap();
        if (i, j) == (p, q) {
            emit(path);
            return;
        }
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            if i + di <= p && j + dj <= q {
                path.push((i + di, j + dj));
                go(p, q, path, emit);
                path.pop();
            }
        }
    }
    let mut path = vec![(0, 0)];
    go(p, q, &mut path, &mut emit);
}

/// Triangulates the simplicial deleted product of `k` as a free
/// Z2-Δ-complex. Within each dimension simplices are numbered in
/// lexicographic order of their pair chains, so the smaller id of every
/// orbit is the chain whose first pair `(u, v)` has `u < v`.
pub fn triangulated_deleted_product(k: &SimplicialComplex) -> EquivariantDeltaComplex {
    let mut chains: Vec<Vec<Vec<u32>>> = Vec::new();
    for CellPair { sigma, tau } in deleted_cell_pairs(k) {
        let (a, b) = (sigma.vertices(), tau.vertices());
        staircase_paths(a.len() - 1, b.len() - 1, |path| {
            let dim = path.len() - 1;
            if chains.len() <= dim {
                chains.resize(dim + 1, Vec::new());
            }
            chains[dim].push(path.iter().flat_map(|&(i, j)| [a[i], b[j]]).collect());
        });
    }
    for level in &mut chains {
        level.sort_unstable();
    }
    let index: Vec<HashMap<&[u32], u32>> = chains
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_slice(), i as u32))
                .collect()
        })
        .collect();

    let mut counts = Vec::with_capacity(chains.len());
    let mut faces = Vec::with_capacity(chains.len());
    let mut involution = Vec::with_capacity(chains.len());
    let mut flat = Vec::with_capacity(chains.len());
    let mut scratch: Vec<u32> = Vec::new();
    for (q, level) in chains.iter().enumerate() {
        counts.push(level.len());
        let mut table = Vec::with_capacity(if q == 0 { 0 } else { level.len() * (q + 1) });
        let mut inv = Vec::with_capacity(level.len());
        let mut labels = Vec::with_capacity(level.len() * 2 * (q + 1));
        for chain in level {
            labels.extend_from_slice(chain);
            scratch.clear();
            scratch.extend(chain.chunks_exact(2).flat_map(|p| [p[1], p[0]]));
            inv.push(index[q][scratch.as_slice()]);
            if q > 0 {
                for i in 0..=q {
                    scratch.clear();
                    scratch.extend_from_slice(&chain[..2 * i]);
                    scratch.extend_from_slice(&chain[2 * i + 2..]);
                    table.push(index[q - 1][scratch.as_slice()]);
                }
            }
        }
        faces.push(table);
        involution.push(inv);
        flat.push(labels);
    }
    EquivariantDeltaComplex {
        delta: DeltaComplex::new(counts, faces).expect("staircase face tables are consistent"),
        involution,
        labels: SimplexLabels::PairChains(flat),
    }
}

/// Equivariant complex from a simplicial complex with a vertex involution
/// given on dense indices (e.g. the antipodal map of a cross-polytope).
///
/// The involution must fix no simplex and must preserve the vertex order
/// inside every simplex, so that it commutes with the face maps.
pub fn from_vertex_involution(k: &SimplicialComplex, pairing: &[u32]) -> Result<EquivariantDeltaComplex> {
    if pairing.len() != k.vertex_count() {
        return Err(Error::usage("the vertex involution must cover every vertex"));
    }
    if (0..pairing.len()).any(|v| pairing.get(pairing[v] as usize).copied() != Some(v as u32)) {
        return Err(Error::usage("the vertex map is not an involution"));
    }
    let top = k.dim();
    let mut counts = Vec::new();
    let mut faces = Vec::new();
    let mut involution = Vec::new();
    let mut verts = Vec::new();
    for q in 0..=top {
        let level = k.simplices(q);
        counts.push(level.len());
        let mut table = Vec::new();
        let mut inv = Vec::with_capacity(level.len());
        let mut labels = Vec::new();
        for (s, simplex) in level.iter().enumerate() {
            let image: Vec<u32> = simplex.vertices().iter().map(|&v| pairing[v as usize]).collect();
            if image.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::usage(format!(
                    "involution reverses the vertex order of {:?}",
                    k.simplex_labels(simplex)
                )));
            }
            let t = k
                .simplex_index(&Simplex::new(image))
                .ok_or_else(|| Error::usage("the vertex involution is not simplicial"))?;
            if t == s {
                return Err(Error::integrity(format!(
                    "simplex {:?} is fixed by the involution",
                    k.simplex_labels(simplex)
                )));
            }
            inv.push(t as u32);
            labels.extend_from_slice(simplex.vertices());
            if q > 0 {
                table.extend((0..=q).map(|i| k.face(q, s, i) as u32));
            }
        }
        faces.push(table);
        involution.push(inv);
        verts.push(labels);
    }
    Ok(EquivariantDeltaComplex {
        delta: DeltaComplex::new(counts, faces)?,
        involution,
        labels: SimplexLabels::Vertices(verts),
    })
}

/// The orbit Δ-complex `X / Z2` with the double-cover cocycle `z`.
///
/// Orbit `o` in dimension `q` is represented by the smaller equivariant id
/// of the pair; orbits are numbered in increasing order of representative.
/// The canonical lift of a vertex orbit is likewise its smaller id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientComplex {
    delta: DeltaComplex,
    z: BitVector,
    representatives: Vec<Vec<u32>>,
}

impl QuotientComplex {
    pub fn delta(&self) -> &DeltaComplex {
        &self.delta
    }

    /// The cocycle on 1-simplices.
    pub fn z(&self) -> &BitVector {
        &self.z
    }

    pub fn representative(&self, q: usize, o: usize) -> usize {
        self.representatives[q][o] as usize
    }

    /// Canonical lift (equivariant vertex id) of a vertex orbit.
    pub fn vertex_lift(&self, o: usize) -> usize {
        self.representative(0, o)
    }

    pub fn skeleton(&self, n: usize) -> QuotientComplex {
        let keep = (n + 1).min(self.representatives.len());
        QuotientComplex {
            delta: self.delta.skeleton(n),
            z: if n >= 1 {
                self.z.clone()
            } else {
                BitVector::zeros(0)
            },
            representatives: self.representatives[..keep].to_vec(),
        }
    }

    /// `z(d_0 t) + z(d_1 t) + z(d_2 t) = 0` for every 2-simplex `t`.
    pub fn verify_cocycle(&self) -> Result<()> {
        for t in 0..self.delta.simplex_count(2) {
            let f = self.delta.faces_of(2, t);
            if self.z.get(f[0] as usize) ^ self.z.get(f[1] as usize) ^ self.z.get(f[2] as usize) {
                return Err(Error::integrity(format!("z is not a cocycle on 2-simplex {t}")));
            }
        }
        Ok(())
    }

    /// The quotient in the JSON emission format.
    pub fn to_document(&self) -> QuotientDocument {
        QuotientDocument {
            format: QUOTIENT_FORMAT.to_owned(),
            counts: self.delta.simplex_counts(),
            faces: (0..self.representatives.len())
                .map(|q| {
                    if q == 0 {
                        Vec::new()
                    } else {
                        self.delta
                            .face_table(q)
                            .chunks_exact(q + 1)
                            .map(<[u32]>::to_vec)
                            .collect()
                    }
                })
                .collect(),
            z: (0..self.z.len()).map(|i| u8::from(self.z.get(i))).collect(),
            representatives: self.representatives.clone(),
        }
    }

    pub fn from_document(doc: &QuotientDocument) -> Result<Self> {
        if doc.format != QUOTIENT_FORMAT {
            return Err(Error::parse(format!(
                "unsupported quotient format {:?}",
                doc.format
            )));
        }
        let faces = doc.faces.iter().map(|rows| rows.concat()).collect();
        let delta = DeltaComplex::new(doc.counts.clone(), faces)?;
        if doc.z.len() != delta.simplex_count(1) || doc.z.iter().any(|&b| b > 1) {
            return Err(Error::parse("z must hold one 0/1 value per 1-simplex"));
        }
        if doc.representatives.len() != doc.counts.len()
            || doc
                .representatives
                .iter()
                .zip(&doc.counts)
                .any(|(r, &c)| r.len() != c)
        {
            return Err(Error::parse("one representative per orbit simplex is required"));
        }
        let q = QuotientComplex {
            delta,
            z: BitVector::from_bools(doc.z.iter().map(|&b| b == 1)),
            representatives: doc.representatives.clone(),
        };
        q.delta.verify_simplicial_identities()?;
        q.verify_cocycle()?;
        Ok(q)
    }
}

impl DeltaComplexLike for QuotientComplex {
    fn top_dim(&self) -> Option<usize> {
        self.delta.top_dim()
    }

    fn simplex_count(&self, q: usize) -> usize {
        self.delta.simplex_count(q)
    }

    fn face(&self, q: usize, s: usize, i: usize) -> usize {
        self.delta.face(q, s, i)
    }
}

pub const QUOTIENT_FORMAT: &str = "vkf-quotient/1";

/// Serialized quotient: counts, face tables, `z`, orbit representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDocument {
    pub format: String,
    pub counts: Vec<usize>,
    /// `faces[q][s]` lists `d_0..d_q` of orbit simplex `s`.
    pub faces: Vec<Vec<Vec<u32>>>,
    pub z: Vec<u8>,
    pub representatives: Vec<Vec<u32>>,
}

/// Divides out the involution.
pub fn swap_quotient(x: &EquivariantDeltaComplex) -> Result<QuotientComplex> {
    let Some(top) = x.top_dim() else {
        return Ok(QuotientComplex {
            delta: DeltaComplex::empty(),
            z: BitVector::zeros(0),
            representatives: Vec::new(),
        });
    };
    let mut orbit_of: Vec<Vec<u32>> = Vec::with_capacity(top + 1);
    let mut representatives: Vec<Vec<u32>> = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let n = x.simplex_count(q);
        let mut orbit = vec![u32::MAX; n];
        let mut reps = Vec::with_capacity(n / 2);
        for s in 0..n {
            let t = x.involution(q, s);
            if t == s {
                return Err(Error::integrity(format!(
                    "{q}-simplex {s} is fixed by the involution"
                )));
            }
            if s < t {
                orbit[s] = reps.len() as u32;
                orbit[t] = reps.len() as u32;
                reps.push(s as u32);
            }
        }
        if reps.len() * 2 != n {
            return Err(Error::integrity(format!(
                "involution is not a pairing in dimension {q}"
            )));
        }
        orbit_of.push(orbit);
        representatives.push(reps);
    }

    let mut counts = Vec::with_capacity(top + 1);
    let mut faces = Vec::with_capacity(top + 1);
    for q in 0..=top {
        counts.push(representatives[q].len());
        let mut table = Vec::new();
        if q > 0 {
            table.reserve(representatives[q].len() * (q + 1));
            for &r in &representatives[q] {
                for i in 0..=q {
                    table.push(orbit_of[q - 1][x.face(q, r as usize, i)]);
                }
            }
        }
        faces.push(table);
    }

    // A lifted endpoint that is not the canonical lift of its orbit is on
    // the other sheet.
    let off_sheet = |v: usize| x.involution(0, v) < v;
    let z = BitVector::from_bools(
        representatives
            .get(1)
            .map_or(&[][..], Vec::as_slice)
            .iter()
            .map(|&e| off_sheet(x.face(1, e as usize, 1)) ^ off_sheet(x.face(1, e as usize, 0))),
    );

    let q = QuotientComplex {
        delta: DeltaComplex::new(counts, faces)?,
        z,
        representatives,
    };
    q.verify_cocycle()?;
    Ok(q)
}
