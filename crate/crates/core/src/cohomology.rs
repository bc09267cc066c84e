//! Mod-2 (co)homology of Δ-complexes and the Stiefel-Whitney height of a
//! free Z2-complex, computed on its orbit complex.
//!
//! The height is the largest `n` such that the `n`-th cup power of the
//! double-cover class is nonzero. Cup powers are evaluated with the
//! Alexander-Whitney formula: on an ordered `n`-simplex the value of
//! `z ∪ … ∪ z` is the product of `z` over the consecutive edges
//! `(0,1), (1,2), …, (n-1,n)`.

use std::time::Instant;

use serde::Serialize;

use crate::deleted_product::QuotientComplex;
use crate::delta::DeltaComplexLike;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, MemoryBudget};

/// Boundary matrices `∂_q : C_q → C_{q-1}` for `q = 1..=top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexGF2 {
    counts: Vec<usize>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplexGF2 {
    /// `∂_q`, with `∂_0` the zero map (returned as `None`).
    pub fn boundary(&self, q: usize) -> Option<&BitMatrix> {
        q.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn betti(&self, q: usize) -> usize {
        let n = self.counts.get(q).copied().unwrap_or(0);
        let rank_out = self.boundary(q).map_or(0, BitMatrix::rank);
        let rank_in = self.boundary(q + 1).map_or(0, BitMatrix::rank);
        n - rank_out - rank_in
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(BitMatrix::rank).collect();
        (0..self.counts.len())
            .map(|q| {
                let out = if q == 0 { 0 } else { ranks[q - 1] };
                let inc = ranks.get(q).copied().unwrap_or(0);
                self.counts[q] - out - inc
            })
            .collect()
    }
}

/// Checks `∂∂ = 0` directly on the face maps: every `(q-2)`-face of a
/// `q`-simplex must be reached an even number of times.
pub fn verify_boundary_squared<X: DeltaComplexLike + ?Sized>(x: &X) -> Result<()> {
    let Some(top) = x.top_dim() else {
        return Ok(());
    };
    let mut hits: Vec<usize> = Vec::new();
    for q in 2..=top {
        for s in 0..x.simplex_count(q) {
            hits.clear();
            for i in 0..=q {
                let f = x.face(q, s, i);
                hits.extend((0..q).map(|j| x.face(q - 1, f, j)));
            }
            hits.sort_unstable();
            let odd = hits.chunk_by(|a, b| a == b).any(|run| run.len() % 2 == 1);
            if odd {
                return Err(Error::integrity(format!(
                    "boundary of boundary is nonzero on {q}-simplex {s}"
                )));
            }
        }
    }
    Ok(())
}

/// Dense boundary matrices of a Δ-complex, after checking `∂∂ = 0`.
pub fn boundary_matrices<X: DeltaComplexLike + ?Sized>(
    x: &X,
    budget: &MemoryBudget,
) -> Result<ChainComplexGF2> {
    verify_boundary_squared(x)?;
    let counts = x.simplex_counts();
    let mut boundaries = Vec::with_capacity(counts.len().saturating_sub(1));
    for q in 1..counts.len() {
        let mut m = BitMatrix::zeros_within(counts[q - 1], counts[q], budget)?;
        for s in 0..counts[q] {
            for i in 0..=q {
                m.toggle(x.face(q, s, i), s);
            }
        }
        boundaries.push(m);
    }
    Ok(ChainComplexGF2 { counts, boundaries })
}

/// Mod-2 Betti number `dim ker ∂_q − rank ∂_{q+1}`.
pub fn betti_mod2<X: DeltaComplexLike + ?Sized>(x: &X, q: usize) -> Result<usize> {
    Ok(boundary_matrices(x, &MemoryBudget::default())?.betti(q))
}

/// All mod-2 Betti numbers up to the top dimension.
pub fn betti_numbers<X: DeltaComplexLike + ?Sized>(x: &X) -> Result<Vec<usize>> {
    Ok(boundary_matrices(x, &MemoryBudget::default())?.betti_numbers())
}

/// A mod-2 cochain on the `dim`-simplices of some complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub dim: usize,
    pub values: BitVector,
}

/// `δc`, evaluated through the face maps.
pub fn coboundary<X: DeltaComplexLike + ?Sized>(x: &X, c: &Cochain) -> Cochain {
    let q = c.dim + 1;
    let n = x.simplex_count(q);
    let values = BitVector::from_bools(
        (0..n).map(|s| (0..=q).fold(false, |acc, i| acc ^ c.values.get(x.face(q, s, i)))),
    );
    Cochain { dim: q, values }
}

/// The coboundary map `δ_{n-1} : C^{n-1} → C^n` as a matrix with one row
/// per `n`-simplex. Repeated faces cancel.
pub fn coboundary_matrix<X: DeltaComplexLike + ?Sized>(
    x: &X,
    n: usize,
    budget: &MemoryBudget,
) -> Result<BitMatrix> {
    let rows = x.simplex_count(n);
    let cols = x.simplex_count(n - 1);
    let mut m = BitMatrix::zeros_within(rows, cols, budget)?;
    for s in 0..rows {
        for i in 0..=n {
            m.toggle(s, x.face(n, s, i));
        }
    }
    Ok(m)
}

/// Whether the cochain is `δ` of something, by a linear solve.
pub fn is_coboundary<X: DeltaComplexLike + ?Sized>(
    x: &X,
    c: &Cochain,
    budget: &MemoryBudget,
) -> Result<bool> {
    if c.dim == 0 {
        return Ok(c.values.is_zero());
    }
    let context = || format!("coboundary solve in degree {}", c.dim);
    let bytes = 2 * BitMatrix::payload_bytes(x.simplex_count(c.dim), x.simplex_count(c.dim - 1) + 1);
    budget.check(bytes, context)?;
    let m = coboundary_matrix(x, c.dim, budget)?;
    Ok(m.solve_within(&c.values, budget)?.is_some())
}

/// The `n`-th cup power of the double-cover class `z`.
pub fn cup_power(q: &QuotientComplex, n: usize) -> Result<Cochain> {
    let top = q.top_dim().unwrap_or(0);
    if n == 0 || n > top {
        return Err(Error::usage(format!(
            "cup power exponent {n} must lie in 1..={top}"
        )));
    }
    let z = q.z();
    let mut keep = [0usize, 0];
    let values = BitVector::from_bools((0..q.simplex_count(n)).map(|s| {
        (1..=n).all(|i| {
            keep = [i - 1, i];
            z.get(q.sub_face(n, s, &keep))
        })
    }));
    Ok(Cochain { dim: n, values })
}

#[derive(Clone, Debug)]
pub struct HeightOptions {
    /// Highest degree examined; defaults to the quotient's dimension.
    pub max_degree: Option<usize>,
    /// Stop at the first vanishing power.
    pub early_stop: bool,
    pub budget: MemoryBudget,
}

impl Default for HeightOptions {
    fn default() -> Self {
        HeightOptions {
            max_degree: None,
            early_stop: true,
            budget: MemoryBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDiagnostics {
    pub degree: usize,
    pub cocycle_verified: bool,
    pub is_coboundary: bool,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    /// Wall time; left out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightReport {
    pub h: usize,
    pub dimension: Option<usize>,
    /// Highest degree that was examined.
    pub degree_cap: usize,
    /// True when every examined power was nonzero and the cap sits below the
    /// dimension, so the true height may be larger.
    pub hit_cap: bool,
    pub simplex_counts: Vec<usize>,
    pub degrees: Vec<DegreeDiagnostics>,
    #[serde(skip)]
    pub millis: u64,
}

/// Stiefel-Whitney height of the free Z2-complex whose orbit complex is `q`.
///
/// Powers are tested in ascending degree; once one vanishes all higher
/// ones do too, which is where the default early stop comes from.
pub fn sw_height(q: &QuotientComplex, opts: &HeightOptions) -> Result<HeightReport> {
    let start = Instant::now();
    let dim = q.top_dim();
    let top = dim.unwrap_or(0);
    let cap = opts.max_degree.map_or(top, |m| m.min(top));
    let mut h = 0;
    let mut vanished = false;
    let mut degrees = Vec::new();
    for n in 1..=cap {
        let t = Instant::now();
        let c = cup_power(q, n)?;
        let cocycle_verified = n == top || coboundary(q, &c).values.is_zero();
        if !cocycle_verified {
            return Err(Error::integrity(format!("cup power {n} is not a cocycle")));
        }
        let exact = is_coboundary(q, &c, &opts.budget)?;
        degrees.push(DegreeDiagnostics {
            degree: n,
            cocycle_verified,
            is_coboundary: exact,
            matrix_rows: q.simplex_count(n),
            matrix_cols: q.simplex_count(n - 1),
            millis: t.elapsed().as_millis() as u64,
        });
        if exact {
            vanished = true;
            if opts.early_stop {
                break;
            }
        } else if vanished {
            return Err(Error::integrity(format!(
                "cup power {n} is nonzero although a lower power vanished"
            )));
        } else {
            h = n;
        }
    }
    Ok(HeightReport {
        h,
        dimension: dim,
        degree_cap: cap,
        hit_cap: !vanished && h == cap && cap < top,
        simplex_counts: q.simplex_counts(),
        degrees,
        millis: start.elapsed().as_millis() as u64,
    })
}
