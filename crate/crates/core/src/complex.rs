//! Abstract simplicial complexes given by their facets.
//!
//! Vertex labels are mapped once to dense indices in sorted label order;
//! that order is the global vertex order every other module relies on.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::delta::DeltaComplexLike;
use crate::error::{Error, Result};

/// A vertex label: an integer or a string. Integers sort before strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Name(String),
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Int(a), Label::Int(b)) => a.cmp(b),
            (Label::Int(_), Label::Name(_)) => Ordering::Less,
            (Label::Name(_), Label::Int(_)) => Ordering::Greater,
            (Label::Name(a), Label::Name(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Name(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Name(s.to_owned())
    }
}

/// A simplex as its strictly increasing list of dense vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts and deduplicates. Panics on an empty vertex list.
    pub fn new(mut vertices: Vec<u32>) -> Self {
        assert!(!vertices.is_empty(), "a simplex needs at least one vertex");
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }
}

/// A finite abstract simplicial complex.
///
/// Only the facets define the complex; the full face lattice is enumerated
/// once at construction so lookups by vertex set are cheap.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    labels: Vec<Label>,
    facets: Vec<Simplex>,
    faces: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds a complex from facets given by label. Nested facets are
    /// absorbed; the vertex order is the sorted order of the labels.
    pub fn from_facets<L, F, I>(facets: I) -> Result<Self>
    where
        L: Into<Label>,
        F: IntoIterator<Item = L>,
        I: IntoIterator<Item = F>,
    {
        let facets: Vec<Vec<Label>> = facets
            .into_iter()
            .map(|f| f.into_iter().map(Into::into).collect())
            .collect();
        if facets.is_empty() {
            return Err(Error::usage("a complex needs at least one facet"));
        }
        if facets.iter().any(Vec::is_empty) {
            return Err(Error::usage("empty facet"));
        }
        let labels: Vec<Label> = facets
            .iter()
            .flatten()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pos: HashMap<&Label, u32> = labels.iter().enumerate().map(|(i, l)| (l, i as u32)).collect();
        let simplices = facets
            .iter()
            .map(|f| Simplex::new(f.iter().map(|l| pos[l]).collect()))
            .collect();
        Ok(Self::from_dense(labels, simplices))
    }

    /// Builds from facets over dense indices `0..labels.len()`.
    fn from_dense(labels: Vec<Label>, facets: Vec<Simplex>) -> Self {
        let mut candidates: Vec<Simplex> = facets;
        candidates.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.cmp(b)));
        candidates.dedup();
        let mut kept: Vec<Simplex> = Vec::new();
        for s in candidates {
            if !kept.iter().any(|k| s.is_face_of(k)) {
                kept.push(s);
            }
        }
        kept.sort();

        let top = kept.iter().map(Simplex::dim).max().unwrap_or(0);
        let mut by_dim: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); top + 1];
        for f in &kept {
            let v = f.vertices();
            let n = v.len();
            for mask in 1u64..(1u64 << n) {
                let sub: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect();
                by_dim[sub.len() - 1].insert(Simplex(sub));
            }
        }
        let faces: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = faces
            .iter()
            .flat_map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        SimplicialComplex {
            labels,
            facets: kept,
            faces,
            index,
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.faces.len() - 1
    }

    /// All simplices of dimension `q`, in lexicographic order.
    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.faces.get(q).map_or(&[], Vec::as_slice)
    }

    /// Every simplex, ordered by dimension and then lexicographically. The
    /// position in this sequence is the simplex's global id.
    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Index of a simplex within its dimension, if present.
    pub fn simplex_index(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn vertex_index(&self, label: &Label) -> Option<u32> {
        self.labels.binary_search(label).ok().map(|i| i as u32)
    }

    pub fn simplex_labels(&self, s: &Simplex) -> Vec<Label> {
        s.vertices()
            .iter()
            .map(|&v| self.labels[v as usize].clone())
            .collect()
    }

    /// The subcomplex of simplices of dimension at most `n`.
    pub fn skeleton(&self, n: usize) -> SimplicialComplex {
        if n >= self.dim() {
            return self.clone();
        }
        let mut facets: Vec<Simplex> = self.facets.iter().filter(|f| f.dim() < n).cloned().collect();
        facets.extend(self.faces[n].iter().cloned());
        Self::from_dense(self.labels.clone(), facets)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(q, level)| {
                if q % 2 == 0 {
                    level.len() as i64
                } else {
                    -(level.len() as i64)
                }
            })
            .sum()
    }

    /// Weak check that the complex could triangulate a closed connected
    /// manifold: pure, every ridge in exactly two facets, and facets
    /// connected through ridges.
    pub fn check_closed_pseudomanifold(&self) -> PseudomanifoldReport {
        let dim = self.dim();
        let pure = self.facets.iter().all(|f| f.dim() == dim);
        let mut ridge_facets: HashMap<Simplex, Vec<usize>> = HashMap::new();
        if dim > 0 {
            for (fi, f) in self.facets.iter().enumerate() {
                for skip in 0..f.0.len() {
                    let mut r = f.0.clone();
                    r.remove(skip);
                    ridge_facets.entry(Simplex(r)).or_default().push(fi);
                }
            }
        }
        let bad_ridges = ridge_facets.values().filter(|v| v.len() != 2).count();
        let ridges_in_two_facets = dim > 0 && bad_ridges == 0;

        // Union-find over facets glued along ridges.
        let mut parent: Vec<usize> = (0..self.facets.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for owners in ridge_facets.values() {
            for w in owners.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let roots: BTreeSet<usize> = (0..self.facets.len()).map(|i| find(&mut parent, i)).collect();

        PseudomanifoldReport {
            dimension: dim,
            pure,
            ridges_in_two_facets,
            ridges_violating: bad_ridges,
            facet_connected: roots.len() == 1,
            facet_components: roots.len(),
        }
    }

    /// The complex in the JSON file format.
    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            vertices: Some(self.labels.clone()),
            facets: self.facets.iter().map(|f| self.simplex_labels(f)).collect(),
        }
    }

    pub fn from_document(doc: &ComplexDocument) -> Result<Self> {
        let k = Self::from_facets(doc.facets.iter().cloned())?;
        if let Some(vs) = &doc.vertices {
            let declared: BTreeSet<&Label> = vs.iter().collect();
            let used: BTreeSet<&Label> = k.labels.iter().collect();
            if declared.len() != vs.len() {
                return Err(Error::parse("duplicate labels in `vertices`"));
            }
            if declared != used {
                return Err(Error::parse(
                    "`vertices` must list exactly the labels that occur in `facets`",
                ));
            }
        }
        Ok(k)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ComplexDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("complex serializes")
    }
}

impl DeltaComplexLike for SimplicialComplex {
    fn top_dim(&self) -> Option<usize> {
        Some(self.dim())
    }

    fn simplex_count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    fn face(&self, q: usize, s: usize, i: usize) -> usize {
        let mut v = self.faces[q][s].0.clone();
        v.remove(i);
        self.index[&Simplex(v)]
    }
}

/// On-disk form of a complex: optional vertex list plus facets by label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Label>>,
    pub facets: Vec<Vec<Label>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudomanifoldReport {
    pub dimension: usize,
    pub pure: bool,
    pub ridges_in_two_facets: bool,
    pub ridges_violating: usize,
    pub facet_connected: bool,
    pub facet_components: usize,
}

impl PseudomanifoldReport {
    pub fn passed(&self) -> bool {
        self.pure && self.ridges_in_two_facets && self.facet_connected
    }
}

/// Built-in complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardComplex {
    /// The full simplex on `n + 1` vertices.
    Simplex(usize),
    /// The boundary of the `n`-simplex, an `(n-1)`-sphere.
    BoundarySimplex(usize),
    /// Boundary of the `d`-dimensional cross-polytope. Vertex `2i-1` is
    /// `+e_i` and vertex `2i` is `-e_i`.
    CrossPolytopeBoundary(usize),
    /// Six-vertex real projective plane.
    Rp2_6,
    /// Seven-vertex torus.
    Torus7,
    /// Nine-vertex complex projective plane.
    Cp2_9,
}

/// Metadata shipped with each corpus entry.
#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub manifold_dim: usize,
    pub euler_characteristic: i64,
    /// Name of the cohomology model of the underlying manifold.
    pub model: &'static str,
    data: &'static str,
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "rp2_6",
        description: "6-vertex real projective plane",
        manifold_dim: 2,
        euler_characteristic: 1,
        model: "rp2",
        data: include_str!("../data/rp2_6.json"),
    },
    CorpusEntry {
        name: "torus_7",
        description: "7-vertex (Moebius) torus",
        manifold_dim: 2,
        euler_characteristic: 0,
        model: "product(sphere1,sphere1)",
        data: include_str!("../data/torus_7.json"),
    },
    CorpusEntry {
        name: "cp2_9",
        description: "9-vertex complex projective plane",
        manifold_dim: 4,
        euler_characteristic: 3,
        model: "cp2",
        data: include_str!("../data/cp2_9.json"),
    },
];

impl CorpusEntry {
    /// Parses the shipped facet list and checks it against the recorded
    /// pseudomanifold property and Euler characteristic.
    pub fn load(&self) -> Result<SimplicialComplex> {
        let k = SimplicialComplex::from_json(self.data)?;
        let report = k.check_closed_pseudomanifold();
        if !report.passed() {
            return Err(Error::integrity(format!(
                "corpus entry {} is not a closed pseudomanifold: {report:?}",
                self.name
            )));
        }
        if k.dim() != self.manifold_dim || k.euler_characteristic() != self.euler_characteristic {
            return Err(Error::integrity(format!(
                "corpus entry {}: expected dimension {} and Euler characteristic {}, found {} and {}",
                self.name,
                self.manifold_dim,
                self.euler_characteristic,
                k.dim(),
                k.euler_characteristic()
            )));
        }
        Ok(k)
    }

    pub fn find(name: &str) -> Option<&'static CorpusEntry> {
        CORPUS.iter().find(|e| e.name == name)
    }
}

impl StandardComplex {
    pub fn build(self) -> Result<SimplicialComplex> {
        let ints = |f: Vec<i64>| f.into_iter().map(Label::Int).collect::<Vec<_>>();
        match self {
            StandardComplex::Simplex(n) => {
                SimplicialComplex::from_facets([ints((1..=n as i64 + 1).collect())])
            }
            StandardComplex::BoundarySimplex(n) => {
                if n == 0 {
                    return Err(Error::usage("the boundary of a 0-simplex is empty"));
                }
                let all: Vec<i64> = (1..=n as i64 + 1).collect();
                SimplicialComplex::from_facets(
                    (0..all.len())
                        .map(|skip| {
                            ints(
                                all.iter()
                                    .enumerate()
                                    .filter(|(i, _)| *i != skip)
                                    .map(|(_, v)| *v)
                                    .collect(),
                            )
                        })
                        .collect::<Vec<_>>(),
                )
            }
            StandardComplex::CrossPolytopeBoundary(d) => {
                if d == 0 || d > 20 {
                    return Err(Error::usage("cross-polytope dimension must be in 1..=20"));
                }
                let facets = (0u32..1 << d).map(|signs| {
                    ints(
                        (0..d as i64)
                            .map(|i| 2 * i + 1 + i64::from(signs >> i & 1))
                            .collect(),
                    )
                });
                SimplicialComplex::from_facets(facets.collect::<Vec<_>>())
            }
            StandardComplex::Rp2_6 => CorpusEntry::find("rp2_6").unwrap().load(),
            StandardComplex::Torus7 => CorpusEntry::find("torus_7").unwrap().load(),
            StandardComplex::Cp2_9 => CorpusEntry::find("cp2_9").unwrap().load(),
        }
    }

    /// The name of the cohomology model of the space this complex
    /// triangulates, when it is a closed manifold.
    pub fn model_name(self) -> Option<String> {
        match self {
            StandardComplex::Simplex(_) => None,
            StandardComplex::BoundarySimplex(n) => Some(format!("sphere{}", n - 1)),
            StandardComplex::CrossPolytopeBoundary(d) => Some(format!("sphere{}", d - 1)),
            StandardComplex::Rp2_6 => Some("rp2".into()),
            StandardComplex::Torus7 => Some("product(sphere1,sphere1)".into()),
            StandardComplex::Cp2_9 => Some("cp2".into()),
        }
    }

    /// The free vertex involution `2i-1 <-> 2i` of the cross-polytope, on
    /// dense indices.
    pub fn antipodal_pairing(self) -> Option<Vec<u32>> {
        match self {
            StandardComplex::CrossPolytopeBoundary(d) => Some((0..2 * d as u32).map(|v| v ^ 1).collect()),
            _ => None,
        }
    }
}

impl FromStr for StandardComplex {
    type Err = Error;

    /// Accepts `simplex:4`, `simplex(4)`, `boundary_simplex:3`,
    /// `cross_polytope_boundary:3`, `rp2_6`, `torus_7`, `cp2_9`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rp2_6" => return Ok(StandardComplex::Rp2_6),
            "torus_7" => return Ok(StandardComplex::Torus7),
            "cp2_9" => return Ok(StandardComplex::Cp2_9),
            _ => {}
        }
        let (kind, arg) = if let Some((k, a)) = s.split_once(':') {
            (k, a)
        } else if let (Some(open), true) = (s.find('('), s.ends_with(')')) {
            (&s[..open], &s[open + 1..s.len() - 1])
        } else {
            return Err(Error::usage(format!("unknown complex {s:?}")));
        };
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::usage(format!("bad parameter in {s:?}")))?;
        match kind.trim() {
            "simplex" => Ok(StandardComplex::Simplex(n)),
            "boundary_simplex" => Ok(StandardComplex::BoundarySimplex(n)),
            "cross_polytope_boundary" => Ok(StandardComplex::CrossPolytopeBoundary(n)),
            other => Err(Error::usage(format!("unknown complex kind {other:?}"))),
        }
    }
}
