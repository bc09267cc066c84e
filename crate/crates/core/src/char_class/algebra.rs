//! Finite graded commutative algebras over GF(2), used as models of the
//! mod-2 cohomology ring of a closed manifold.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: usize,
}

/// A graded algebra with an explicit basis and multiplication table.
///
/// Basis element 0 is the unit and is the only element of degree 0.
/// Products of degree above the top degree are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    name: String,
    top_degree: usize,
    basis: Vec<BasisElement>,
    /// `table[i * n + j]` is `e_i · e_j`.
    table: Vec<BitVector>,
}

/// An element of a [`GradedAlgebra`], as coordinates in its basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    coords: BitVector,
}

impl AlgebraElement {
    pub fn coords(&self) -> &BitVector {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

impl GradedAlgebra {
    /// Builds and validates an algebra. `product(i, j)` returns the basis
    /// indices whose sum is `e_i · e_j`.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        mut product: impl FnMut(usize, usize) -> Vec<usize>,
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis[0].degree != 0 || basis.iter().skip(1).any(|b| b.degree == 0) {
            return Err(Error::usage(
                "the basis must start with the unit, the only degree-0 element",
            ));
        }
        if basis.windows(2).any(|w| w[0].degree > w[1].degree) {
            return Err(Error::usage("basis elements must be listed by ascending degree"));
        }
        let top_degree = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let terms = product(i, j);
                if let Some(&bad) = terms.iter().find(|&&t| t >= n) {
                    return Err(Error::usage(format!("product term {bad} out of range")));
                }
                table.push(BitVector::from_indices(n, &terms));
            }
        }
        let alg = GradedAlgebra {
            name: name.into(),
            top_degree,
            basis,
            table,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.basis.len();
        for i in 0..n {
            for j in 0..n {
                let p = &self.table[i * n + j];
                let deg = self.basis[i].degree + self.basis[j].degree;
                if p.iter_ones().any(|t| self.basis[t].degree != deg) {
                    return Err(Error::usage(format!(
                        "{} * {} does not have degree {deg}",
                        self.basis[i].name, self.basis[j].name
                    )));
                }
                if *p != self.table[j * n + i] {
                    return Err(Error::usage(format!(
                        "multiplication is not commutative on {} and {}",
                        self.basis[i].name, self.basis[j].name
                    )));
                }
            }
            let unit = BitVector::from_indices(n, &[i]);
            if self.table[i] != unit {
                return Err(Error::usage(format!(
                    "the unit does not fix {}",
                    self.basis[i].name
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_coords(&self.table[i * n + j], &BitVector::from_indices(n, &[k]));
                    let right = self.mul_coords(&BitVector::from_indices(n, &[i]), &self.table[j * n + k]);
                    if left != right {
                        return Err(Error::usage(format!(
                            "multiplication is not associative on {}, {}, {}",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            coords: BitVector::zeros(self.dim()),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        self.basis_element(0)
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement {
            coords: BitVector::from_indices(self.dim(), &[i]),
        }
    }

    /// Sum of the named basis elements.
    pub fn element(&self, names: &[&str]) -> Result<AlgebraElement> {
        let idx = names
            .iter()
            .map(|n| {
                self.basis_index(n)
                    .ok_or_else(|| Error::usage(format!("no basis element named {n:?} in {}", self.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraElement {
            coords: BitVector::from_indices(self.dim(), &idx),
        })
    }

    pub fn from_coords(&self, coords: BitVector) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(Error::usage("coordinate vector does not match the basis"));
        }
        Ok(AlgebraElement { coords })
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut c = a.coords.clone();
        c.xor_assign(&b.coords);
        AlgebraElement { coords: c }
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: self.mul_coords(&a.coords, &b.coords),
        }
    }

    fn mul_coords(&self, a: &BitVector, b: &BitVector) -> BitVector {
        let n = self.dim();
        let mut out = BitVector::zeros(n);
        for i in a.iter_ones() {
            for j in b.iter_ones() {
                out.xor_assign(&self.table[i * n + j]);
            }
        }
        out
    }

    pub fn pow(&self, a: &AlgebraElement, e: u32) -> AlgebraElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// The degree-`j` component.
    pub fn degree_part(&self, a: &AlgebraElement, j: usize) -> AlgebraElement {
        let ones: Vec<usize> = a
            .coords
            .iter_ones()
            .filter(|&i| self.basis[i].degree == j)
            .collect();
        AlgebraElement {
            coords: BitVector::from_indices(self.dim(), &ones),
        }
    }

    /// True when every nonzero coordinate sits in degree `j` (zero counts).
    pub fn is_homogeneous_of(&self, a: &AlgebraElement, j: usize) -> bool {
        a.coords.iter_ones().all(|i| self.basis[i].degree == j)
    }

    pub fn format(&self, a: &AlgebraElement) -> String {
        let terms: Vec<&str> = a
            .coords
            .iter_ones()
            .map(|i| self.basis[i].name.as_str())
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Tensor product `A ⊗ B`, basis `(i, j) ↦ i · |B| + j`, truncated
    /// at the sum of the top degrees.
    pub fn tensor(a: &GradedAlgebra, b: &GradedAlgebra) -> Result<GradedAlgebra> {
        let nb = b.dim();
        let mut pairs: Vec<(usize, usize)> =
            (0..a.dim()).flat_map(|i| (0..nb).map(move |j| (i, j))).collect();
        pairs.sort_by_key(|&(i, j)| (a.basis[i].degree + b.basis[j].degree, i, j));
        let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let basis = pairs
            .iter()
            .map(|&(i, j)| BasisElement {
                name: match (i, j) {
                    (0, 0) => "1".into(),
                    (i, 0) => a.basis[i].name.clone(),
                    (0, j) => b.basis[j].name.clone(),
                    (i, j) => format!("{}*{}", a.basis[i].name, b.basis[j].name),
                },
                degree: a.basis[i].degree + b.basis[j].degree,
            })
            .collect();
        let na = a.dim();
        let pos = &pos;
        GradedAlgebra::new(format!("{} x {}", a.name, b.name), basis, |x, y| {
            let (i1, j1) = pairs[x];
            let (i2, j2) = pairs[y];
            let pa = &a.table[i1 * na + i2];
            let pb = &b.table[j1 * nb + j2];
            pa.iter_ones()
                .flat_map(|i| pb.iter_ones().map(move |j| pos[&(i, j)]))
                .collect()
        })
    }

    /// Position of basis pair `(i, j)` of `A ⊗ B` in [`GradedAlgebra::tensor`]'s
    /// ordering.
    pub fn tensor_index(a: &GradedAlgebra, b: &GradedAlgebra, i: usize, j: usize) -> usize {
        let mut pairs: Vec<(usize, usize)> = (0..a.dim())
            .flat_map(|x| (0..b.dim()).map(move |y| (x, y)))
            .collect();
        pairs.sort_by_key(|&(x, y)| (a.basis[x].degree + b.basis[y].degree, x, y));
        pairs.iter().position(|&p| p == (i, j)).expect("pair in range")
    }
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedAlgebra")
            .field("name", &self.name)
            .field("top_degree", &self.top_degree)
            .field("basis", &self.basis.iter().map(|b| &b.name).collect::<Vec<_>>())
            .finish()
    }
}

/// A cohomology model of a closed `d`-manifold together with its
/// Stiefel-Whitney classes `w_1..w_d`.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    pub algebra: GradedAlgebra,
    /// `w[i-1]` is `w_i`, homogeneous of degree `i`.
    pub w: Vec<AlgebraElement>,
}

impl ManifoldModel {
    pub fn new(algebra: GradedAlgebra, w: Vec<AlgebraElement>) -> Result<Self> {
        for (i, wi) in w.iter().enumerate() {
            if wi.coords.len() != algebra.dim() {
                return Err(Error::usage(format!(
                    "w_{} is not an element of {}",
                    i + 1,
                    algebra.name
                )));
            }
            if !algebra.is_homogeneous_of(wi, i + 1) {
                return Err(Error::usage(format!(
                    "w_{} is not homogeneous of degree {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(ManifoldModel { algebra, w })
    }

    pub fn name(&self) -> &str {
        self.algebra.name()
    }

    /// The manifold dimension `d`, i.e. the number of classes `w_i`.
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// `1 + w_1 + … + w_d`.
    pub fn total_class(&self) -> AlgebraElement {
        self.w
            .iter()
            .fold(self.algebra.one(), |acc, wi| self.algebra.add(&acc, wi))
    }

    /// Splits a total class into homogeneous parts `w_1..w_d`.
    fn from_total(algebra: GradedAlgebra, total: &AlgebraElement, d: usize) -> Result<Self> {
        let w = (1..=d).map(|i| algebra.degree_part(total, i)).collect();
        ManifoldModel::new(algebra, w)
    }

    /// Real projective space: `H* = Z2[a]/(a^{n+1})`, `w = (1 + a)^{n+1}`.
    pub fn rp(n: usize) -> Result<Self> {
        let alg = truncated_polynomial(format!("RP{n}"), "a", 1, n)?;
        let a = alg.basis_element(1.min(n));
        let gen = if n == 0 { alg.zero() } else { a };
        let total = alg.pow(&alg.add(&alg.one(), &gen), n as u32 + 1);
        Self::from_total(alg, &total, n)
    }

    /// Complex projective space: `H* = Z2[c]/(c^{n+1})`, `|c| = 2`,
    /// `w = (1 + c)^{n+1}`.
    pub fn cp(n: usize) -> Result<Self> {
        let alg = truncated_polynomial(format!("CP{n}"), "c", 2, n)?;
        let gen = if n == 0 { alg.zero() } else { alg.basis_element(1) };
        let total = alg.pow(&alg.add(&alg.one(), &gen), n as u32 + 1);
        Self::from_total(alg, &total, 2 * n)
    }

    /// The sphere `S^n`, stably parallelizable, so `w = 1`.
    pub fn sphere(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("sphere dimension must be positive"));
        }
        let basis = vec![
            BasisElement {
                name: "1".into(),
                degree: 0,
            },
            BasisElement {
                name: "u".into(),
                degree: n,
            },
        ];
        let alg = GradedAlgebra::new(format!("S{n}"), basis, |i, j| match (i, j) {
            (0, k) | (k, 0) => vec![k],
            _ => vec![],
        })?;
        let w = vec![alg.zero(); n];
        ManifoldModel::new(alg, w)
    }

    /// `M × N` with the tensor-product ring and `w(M × N) = w(M) w(N)`.
    pub fn product(m: &ManifoldModel, n: &ManifoldModel) -> Result<Self> {
        let alg = GradedAlgebra::tensor(&m.algebra, &n.algebra)?;
        let embed = |coords: &BitVector, left: bool| {
            let idx: Vec<usize> = coords
                .iter_ones()
                .map(|i| {
                    if left {
                        GradedAlgebra::tensor_index(&m.algebra, &n.algebra, i, 0)
                    } else {
                        GradedAlgebra::tensor_index(&m.algebra, &n.algebra, 0, i)
                    }
                })
                .collect();
            AlgebraElement {
                coords: BitVector::from_indices(alg.dim(), &idx),
            }
        };
        let total = alg.mul(
            &embed(m.total_class().coords(), true),
            &embed(n.total_class().coords(), false),
        );
        Self::from_total(alg, &total, m.dim() + n.dim())
    }

    /// The universal model: all monomials in `x_1..x_d` (`|x_i| = i`) of
    /// weighted degree at most `top`, with `w_i = x_i`.
    pub fn generic(d: usize, top: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::usage("generic model needs at least one variable"));
        }
        let mut monos: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; d];
        fn rec(i: usize, budget: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            let w = i + 1;
            for e in 0..=budget / w {
                cur[i] = e as u32;
                rec(i + 1, budget - e * w, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, top, &mut cur, &mut monos);
        let weight = |m: &[u32]| {
            m.iter()
                .enumerate()
                .map(|(i, &e)| (i + 1) * e as usize)
                .sum::<usize>()
        };
        monos.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| b.cmp(a)));
        let pos: HashMap<Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let basis = monos
            .iter()
            .map(|m| BasisElement {
                name: monomial_name(m),
                degree: weight(m),
            })
            .collect();
        let alg = GradedAlgebra::new(format!("generic{d}"), basis, |i, j| {
            let prod: Vec<u32> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
            pos.get(&prod).map(|&k| vec![k]).unwrap_or_default()
        })?;
        let w = (1..=d)
            .map(|i| {
                let mut e = vec![0u32; d];
                e[i - 1] = 1;
                pos.get(&e).map_or_else(|| alg.zero(), |&k| alg.basis_element(k))
            })
            .collect();
        ManifoldModel::new(alg, w)
    }

    /// Parses a model name: `rp5`, `rp(5)`, `cp2`, `sphere3`, `generic4`,
    /// `generic(4,6)`, `product(rp2,sphere1)`.
    pub fn standard(name: &str) -> Result<Self> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let split = split_top_level_comma(inner)
                .ok_or_else(|| Error::usage(format!("product needs two arguments: {name:?}")))?;
            let a = Self::standard(&inner[..split])?;
            let b = Self::standard(&inner[split + 1..])?;
            return Self::product(&a, &b);
        }
        let (kind, args) = match s.find(|c: char| c.is_ascii_digit() || c == '(') {
            Some(p) => (&s[..p], s[p..].trim_start_matches('(').trim_end_matches(')')),
            None => return Err(Error::usage(format!("unknown model {name:?}"))),
        };
        let nums = args
            .split(',')
            .map(|a| {
                a.parse::<usize>()
                    .map_err(|_| Error::usage(format!("bad model parameter in {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match (kind, nums.as_slice()) {
            ("rp", [n]) => Self::rp(*n),
            ("cp", [n]) => Self::cp(*n),
            ("sphere" | "s", [n]) => Self::sphere(*n),
            ("generic", [d]) => Self::generic(*d, *d),
            ("generic", [d, top]) => Self::generic(*d, *top),
            _ => Err(Error::usage(format!("unknown model {name:?}"))),
        }
    }

    pub fn to_document(&self) -> ModelDocument {
        let n = self.algebra.dim();
        let mut products = Vec::new();
        for i in 1..n {
            for j in i..n {
                let p = &self.algebra.table[i * n + j];
                if !p.is_zero() {
                    products.push(ProductEntry {
                        left: self.algebra.basis[i].name.clone(),
                        right: self.algebra.basis[j].name.clone(),
                        result: p
                            .iter_ones()
                            .map(|k| self.algebra.basis[k].name.clone())
                            .collect(),
                    });
                }
            }
        }
        ModelDocument {
            name: self.algebra.name.clone(),
            basis: self.algebra.basis.clone(),
            products,
            w: self
                .w
                .iter()
                .map(|wi| {
                    wi.coords
                        .iter_ones()
                        .map(|k| self.algebra.basis[k].name.clone())
                        .collect()
                })
                .collect(),
        }
    }

    /// Builds a model from a document. Unlisted products are zero; each
    /// product is listed once and the table is symmetrized.
    pub fn from_document(doc: &ModelDocument) -> Result<Self> {
        let mut basis = doc.basis.clone();
        basis.sort_by_key(|b| b.degree);
        let pos: HashMap<&str, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.name.as_str(), i))
            .collect();
        if pos.len() != basis.len() {
            return Err(Error::parse("duplicate basis names"));
        }
        let lookup = |name: &str| {
            pos.get(name)
                .copied()
                .ok_or_else(|| Error::parse(format!("unknown basis element {name:?}")))
        };
        let mut table: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for p in &doc.products {
            let (i, j) = (lookup(&p.left)?, lookup(&p.right)?);
            let result = p.result.iter().map(|r| lookup(r)).collect::<Result<Vec<_>>>()?;
            for key in [(i, j), (j, i)] {
                if let Some(prev) = table.insert(key, result.clone()) {
                    if prev != result {
                        return Err(Error::parse(format!(
                            "conflicting products for {} * {}",
                            p.left, p.right
                        )));
                    }
                }
            }
        }
        let alg = GradedAlgebra::new(doc.name.clone(), basis, |i, j| {
            if i == 0 {
                vec![j]
            } else if j == 0 {
                vec![i]
            } else {
                table.get(&(i, j)).cloned().unwrap_or_default()
            }
        })?;
        let w = doc
            .w
            .iter()
            .map(|names| {
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                alg.element(&refs)
            })
            .collect::<Result<Vec<_>>>()?;
        ManifoldModel::new(alg, w)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

/// On-disk form of a [`ManifoldModel`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    /// Basis elements; the unit (degree 0) must be among them.
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
    /// `w[i-1]` lists the basis elements summing to `w_i`.
    pub w: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: Vec<String>,
}

fn truncated_polynomial(name: String, var: &str, degree: usize, n: usize) -> Result<GradedAlgebra> {
    let basis = (0..=n)
        .map(|k| BasisElement {
            name: match k {
                0 => "1".into(),
                1 => var.into(),
                k => format!("{var}^{k}"),
            },
            degree: k * degree,
        })
        .collect();
    GradedAlgebra::new(name, basis, |i, j| if i + j <= n { vec![i + j] } else { vec![] })
}

fn monomial_name(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{e}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn split_top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_has_trivial_class() {
        let s3 = ManifoldModel::sphere(3).unwrap();
        assert_eq!(s3.dim(), 3);
        assert_eq!(s3.total_class(), s3.algebra.one());
    }

    #[test]
    fn rp2_total_class() {
        let m = ManifoldModel::rp(2).unwrap();
        let expected = m.algebra.element(&["1", "a", "a^2"]).unwrap();
        assert_eq!(m.total_class(), expected);
    }

    #[test]
    fn rp3_and_rp5() {
        let m3 = ManifoldModel::rp(3).unwrap();
        assert_eq!(m3.total_class(), m3.algebra.one());
        let m5 = ManifoldModel::rp(5).unwrap();
        assert_eq!(m5.algebra.format(&m5.total_class()), "1 + a^2 + a^4");
    }

    #[test]
    fn cp2_total_class() {
        let m = ManifoldModel::cp(2).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.algebra.format(&m.total_class()), "1 + c + c^2");
    }

    #[test]
    fn product_rp2_s1() {
        let m = ManifoldModel::standard("product(rp2, sphere1)").unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.algebra.top_degree(), 3);
        assert_eq!(m.algebra.format(&m.total_class()), "1 + a + a^2");
        assert_ne!(m.total_class(), m.algebra.one());
    }

    #[test]
    fn generic_model_shape() {
        let g = ManifoldModel::generic(3, 3).unwrap();
        // 1; x1; x1^2, x2; x1^3, x1*x2, x3
        assert_eq!(g.algebra.dim(), 7);
        let x1 = &g.w[0];
        let x2 = &g.w[1];
        assert_eq!(g.algebra.format(&g.algebra.mul(x1, x2)), "x1*x2");
        assert!(g.algebra.mul(&g.algebra.mul(x1, x2), x1).is_zero());
    }

    #[test]
    fn bad_tables_rejected() {
        let basis = vec![
            BasisElement {
                name: "1".into(),
                degree: 0,
            },
            BasisElement {
                name: "a".into(),
                degree: 1,
            },
            BasisElement {
                name: "b".into(),
                degree: 1,
            },
        ];
        // a*a = b breaks the grading.
        let err = GradedAlgebra::new("bad", basis.clone(), |i, j| match (i, j) {
            (0, k) | (k, 0) => vec![k],
            (1, 1) => vec![2],
            _ => vec![],
        });
        assert!(err.is_err());
        // Unit missing from the front.
        let mut shuffled = basis;
        shuffled.swap(0, 1);
        assert!(GradedAlgebra::new("bad", shuffled, |_, _| vec![]).is_err());
    }

    #[test]
    fn model_names() {
        for name in ["rp5", "rp(5)", "cp2", "sphere3", "s3", "generic4", "generic(3,5)"] {
            ManifoldModel::standard(name).unwrap();
        }
        assert!(ManifoldModel::standard("klein").is_err());
        assert!(ManifoldModel::standard("rp(x)").is_err());
    }

    #[test]
    fn document_roundtrip() {
        for name in ["cp2", "rp4", "product(rp2,cp1)"] {
            let m = ManifoldModel::standard(name).unwrap();
            let json = serde_json::to_string(&m.to_document()).unwrap();
            let back = ManifoldModel::from_json(&json).unwrap();
            assert_eq!(back.algebra, m.algebra);
            assert_eq!(back.w, m.w);
        }
    }

    #[test]
    fn hand_written_model_file() {
        let text = r#"{
            "name": "CP2 by hand",
            "basis": [{"name": "1", "degree": 0}, {"name": "c", "degree": 2}, {"name": "cc", "degree": 4}],
            "products": [{"left": "c", "right": "c", "result": ["cc"]}],
            "w": [[], ["c"], [], ["cc"]]
        }"#;
        let m = ManifoldModel::from_json(text).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.algebra.format(&m.total_class()), "1 + c + cc");
        let wrong_degree = text.replace(r#"[[], ["c"], [], ["cc"]]"#, r#"[["c"], [], [], ["cc"]]"#);
        assert!(ManifoldModel::from_json(&wrong_degree).is_err());
    }
}
