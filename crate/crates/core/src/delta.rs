//! Δ-complexes: ordered simplices glued by face maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything with per-dimension simplex counts and face maps `d_0..d_q`.
///
/// `face(q, s, i)` is the index, among `(q-1)`-simplices, of the face of
/// the `q`-simplex `s` opposite its `i`-th vertex.
pub trait DeltaComplexLike {
    /// `None` for the empty complex.
    fn top_dim(&self) -> Option<usize>;
    fn simplex_count(&self, q: usize) -> usize;
    fn face(&self, q: usize, s: usize, i: usize) -> usize;

    fn simplex_counts(&self) -> Vec<usize> {
        match self.top_dim() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|q| self.simplex_count(q)).collect(),
        }
    }

    fn euler_characteristic(&self) -> i64 {
        self.simplex_counts()
            .iter()
            .enumerate()
            .map(|(q, &n)| if q % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// The face of the `q`-simplex `s` spanned by its vertices at the given
    /// strictly increasing positions.
    fn sub_face(&self, q: usize, s: usize, keep: &[usize]) -> usize {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut cur = s;
        let mut dim = q;
        // Delete unwanted positions from the top down so lower positions
        // keep their meaning.
        for pos in (0..=q).rev() {
            if keep.binary_search(&pos).is_err() {
                cur = self.face(dim, cur, pos);
                dim -= 1;
            }
        }
        cur
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for all `i < j` in every dimension.
    fn verify_simplicial_identities(&self) -> Result<()> {
        let Some(top) = self.top_dim() else {
            return Ok(());
        };
        for q in 2..=top {
            for s in 0..self.simplex_count(q) {
                for j in 1..=q {
                    for i in 0..j {
                        let lhs = self.face(q - 1, self.face(q, s, j), i);
                        let rhs = self.face(q - 1, self.face(q, s, i), j - 1);
                        if lhs != rhs {
                            return Err(Error::integrity(format!(
                                "simplicial identity d_{i} d_{j} fails on {q}-simplex {s}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A Δ-complex stored as flat face tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaComplex {
    counts: Vec<usize>,
    /// `faces[q]` holds `q + 1` entries per `q`-simplex; `faces[0]` is empty.
    faces: Vec<Vec<u32>>,
}

impl DeltaComplex {
    /// Validates shapes and face ranges.
    pub fn new(counts: Vec<usize>, faces: Vec<Vec<u32>>) -> Result<Self> {
        if counts.len() != faces.len() {
            return Err(Error::integrity("one face table per dimension is required"));
        }
        if faces.first().is_some_and(|f| !f.is_empty()) {
            return Err(Error::integrity("vertices have no faces"));
        }
        for q in 1..counts.len() {
            if faces[q].len() != counts[q] * (q + 1) {
                return Err(Error::integrity(format!(
                    "face table of dimension {q} has {} entries, expected {}",
                    faces[q].len(),
                    counts[q] * (q + 1)
                )));
            }
            if let Some(bad) = faces[q].iter().find(|&&f| f as usize >= counts[q - 1]) {
                return Err(Error::integrity(format!(
                    "face id {bad} out of range in dimension {q}"
                )));
            }
        }
        Ok(DeltaComplex { counts, faces })
    }

    pub fn empty() -> Self {
        DeltaComplex {
            counts: Vec::new(),
            faces: Vec::new(),
        }
    }

    /// The faces of the `q`-simplex `s`, in order `d_0..d_q`.
    pub fn faces_of(&self, q: usize, s: usize) -> &[u32] {
        &self.faces[q][s * (q + 1)..(s + 1) * (q + 1)]
    }

    pub fn face_table(&self, q: usize) -> &[u32] {
        &self.faces[q]
    }

    /// Drops everything above dimension `n`.
    pub fn skeleton(&self, n: usize) -> DeltaComplex {
        let keep = (n + 1).min(self.counts.len());
        DeltaComplex {
            counts: self.counts[..keep].to_vec(),
            faces: self.faces[..keep].to_vec(),
        }
    }
}

impl DeltaComplexLike for DeltaComplex {
    fn top_dim(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    fn simplex_count(&self, q: usize) -> usize {
        self.counts.get(q).copied().unwrap_or(0)
    }

    fn face(&self, q: usize, s: usize, i: usize) -> usize {
        self.faces[q][s * (q + 1) + i] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Triangle boundary as a Δ-complex: vertices 0,1,2; edges 01,02,12.
    fn triangle_boundary() -> DeltaComplex {
        DeltaComplex::new(vec![3, 3], vec![vec![], vec![1, 0, 2, 0, 2, 1]]).unwrap()
    }

    #[test]
    fn counts_and_euler() {
        let t = triangle_boundary();
        assert_eq!(t.simplex_counts(), vec![3, 3]);
        assert_eq!(t.euler_characteristic(), 0);
        assert!(t.verify_simplicial_identities().is_ok());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(DeltaComplex::new(vec![1, 1], vec![vec![], vec![0]]).is_err());
        assert!(DeltaComplex::new(vec![1, 1], vec![vec![], vec![0, 5]]).is_err());
    }

    #[test]
    fn broken_identity_detected() {
        // One 2-simplex on a single-vertex circle structure with inconsistent faces.
        let bad =
            DeltaComplex::new(vec![2, 3, 1], vec![vec![], vec![1, 0, 1, 0, 0, 1], vec![0, 1, 2]]).unwrap();
        assert!(bad.verify_simplicial_identities().is_err());
    }

    #[test]
    fn sub_face_picks_edges() {
        let s = crate::complex::StandardComplex::Simplex(3).build().unwrap();
        // Edge spanned by positions 1 and 3 of the tetrahedron {0,1,2,3}.
        let e = s.sub_face(3, 0, &[1, 3]);
        assert_eq!(s.simplices(1)[e].vertices(), &[1, 3]);
    }
}
