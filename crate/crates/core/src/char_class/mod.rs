//! The polynomials `a_i^(k)`, the classes `w^(k)(M)` they define in a
//! cohomology model, and the symbolic sphere-bundle relation
//! `s^d = w_1 s^{d-1} + … + w_d`.

mod algebra;
mod poly;

use serde::Serialize;

pub use algebra::{AlgebraElement, BasisElement, GradedAlgebra, ManifoldModel, ModelDocument, ProductEntry};
pub use poly::PolyZ2;

use crate::error::{Error, Result};

/// `a_i^(k)` in `Z2[x_1..x_d]`, defined by `a_i^(0) = x_i` and
/// `a_i^(k) = x_i a_1^(k-1) + a_{i+1}^(k-1)` with `a_{d+1} = 0`.
pub fn a_polynomial(i: usize, k: usize, d: usize) -> Result<PolyZ2> {
    check_indices(i, k, d)?;
    Ok(a_polynomials(k, d).swap_remove(i - 1))
}

/// All of `a_1^(k)..a_d^(k)`.
pub fn a_polynomials(k: usize, d: usize) -> Vec<PolyZ2> {
    let mut level: Vec<PolyZ2> = (1..=d).map(|i| PolyZ2::var(d, i)).collect();
    for _ in 0..k {
        let a1 = level[0].clone();
        level = (0..d)
            .map(|i| {
                let mut next = PolyZ2::var(d, i + 1).mul(&a1);
                if let Some(up) = level.get(i + 1) {
                    next.add_assign(up);
                }
                next
            })
            .collect();
    }
    level
}

fn check_indices(i: usize, k: usize, d: usize) -> Result<()> {
    if d == 0 || !(1..=d).contains(&i) {
        return Err(Error::usage(format!("index i={i} must lie in 1..={d}")));
    }
    if k >= d {
        return Err(Error::usage(format!("level k={k} must be below d={d}")));
    }
    Ok(())
}

/// Reduces `s^{d+k}` by repeatedly rewriting the highest power `s^e`,
/// `e ≥ d`, as `x_1 s^{e-1} + … + x_d s^{e-d}`. Returns the coefficients of
/// `s^{d-1}, …, s^0`.
pub fn sphere_reduce_power(d: usize, k: usize) -> Result<Vec<PolyZ2>> {
    if d == 0 || k >= d {
        return Err(Error::usage(format!("need 0 <= k < d, got d={d}, k={k}")));
    }
    // coeff[e] is the coefficient of s^e.
    let mut coeff = vec![PolyZ2::zero(d); d + k + 1];
    coeff[d + k] = PolyZ2::one(d);
    for e in (d..=d + k).rev() {
        let c = std::mem::replace(&mut coeff[e], PolyZ2::zero(d));
        if c.is_zero() {
            continue;
        }
        for i in 1..=d {
            let term = c.mul(&PolyZ2::var(d, i));
            coeff[e - i].add_assign(&term);
        }
    }
    coeff.truncate(d);
    coeff.reverse();
    Ok(coeff)
}

/// Evaluates a polynomial at `x_i = values[i-1]`.
pub fn evaluate(model: &GradedAlgebra, p: &PolyZ2, values: &[AlgebraElement]) -> Result<AlgebraElement> {
    if values.len() != p.vars() {
        return Err(Error::usage("one value per variable is required"));
    }
    let mut total = model.zero();
    for m in p.monomials() {
        let term = m
            .iter()
            .zip(values)
            .fold(model.one(), |acc, (&e, v)| model.mul(&acc, &model.pow(v, e)));
        total = model.add(&total, &term);
    }
    Ok(total)
}

/// The classes `w^(k)(M)` of one level.
#[derive(Clone, Debug)]
pub struct WkClasses {
    pub k: usize,
    /// `by_index[i-1] = a_i^(k)(w)`, of degree `i + k`.
    pub by_index: Vec<AlgebraElement>,
    /// `(j, component)` for `j` in `k+1..=d+k`; the degree-`j` part of
    /// `w^(k)` is `a_{j-k}^(k)(w)`.
    pub by_degree: Vec<(usize, AlgebraElement)>,
    pub total: AlgebraElement,
    pub nontrivial: bool,
}

/// Explains the two indexings of `w^(k)` that [`WkClasses`] exposes.
pub const INDEX_CONVENTION_NOTE: &str = "w_i^(k) = a_i^(k)(w) sits in degree i+k; \
the degree-j component of w^(k) is therefore w_{j-k}^(k). For k=1 the degree-d \
component is w_1 w_{d-1} + w_d while a_d^(1)(w) = w_1 w_d.";

/// Evaluates `a_i^(k)` on the model's Stiefel-Whitney classes.
///
/// The recursion is run directly in the algebra; substituting
/// [`a_polynomial`] gives the same result.
pub fn wk_classes(model: &ManifoldModel, k: usize) -> Result<WkClasses> {
    let d = model.dim();
    if d == 0 || k >= d {
        return Err(Error::usage(format!(
            "level k={k} must be below the model dimension {d}"
        )));
    }
    let alg = &model.algebra;
    for (i, wi) in model.w.iter().enumerate() {
        if !alg.is_homogeneous_of(wi, i + 1) {
            return Err(Error::usage(format!("w_{} has the wrong degree", i + 1)));
        }
    }
    let mut level = model.w.clone();
    for _ in 0..k {
        let a1 = level[0].clone();
        level = (0..d)
            .map(|i| {
                let head = alg.mul(&model.w[i], &a1);
                match level.get(i + 1) {
                    Some(up) => alg.add(&head, up),
                    None => head,
                }
            })
            .collect();
    }
    let total = level.iter().fold(alg.one(), |acc, c| alg.add(&acc, c));
    let by_degree = (1..=d).map(|i| (i + k, alg.degree_part(&total, i + k))).collect();
    Ok(WkClasses {
        k,
        nontrivial: level.iter().any(|c| !c.is_zero()),
        by_index: level,
        by_degree,
        total,
    })
}

/// `c_0 s^{d-1} + … + c_{d-1}` in the free module `H*(M){1, s, …, s^{d-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereModuleElement {
    pub coeffs: Vec<AlgebraElement>,
}

impl SphereModuleElement {
    /// `s^{d-1}`.
    pub fn top_generator(model: &ManifoldModel) -> Self {
        let alg = &model.algebra;
        let mut coeffs = vec![alg.zero(); model.dim()];
        coeffs[0] = alg.one();
        SphereModuleElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(AlgebraElement::is_zero)
    }

    /// Multiplies by `s`, using `s^d = w_1 s^{d-1} + … + w_d`.
    pub fn times_s(&self, model: &ManifoldModel) -> Self {
        let alg = &model.algebra;
        let d = self.coeffs.len();
        let lead = &self.coeffs[0];
        let coeffs = (0..d)
            .map(|j| {
                let carried = alg.mul(lead, &model.w[j]);
                match self.coeffs.get(j + 1) {
                    Some(c) => alg.add(&carried, c),
                    None => carried,
                }
            })
            .collect();
        SphereModuleElement { coeffs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicHeight {
    pub height: usize,
    /// The iteration bound `d + D`; `s^n` always vanishes there.
    pub cap: usize,
}

/// The largest `n` with `s^n ≠ 0`, found by multiplying by `s` until the
/// element vanishes.
pub fn symbolic_sphere_height(model: &ManifoldModel) -> Result<SymbolicHeight> {
    let d = model.dim();
    if d == 0 {
        return Err(Error::usage("the model has no Stiefel-Whitney classes"));
    }
    let cap = d + model.algebra.top_degree();
    let mut power = SphereModuleElement::top_generator(model);
    let mut n = d - 1;
    while n < cap {
        let next = power.times_s(model);
        if next.is_zero() {
            break;
        }
        power = next;
        n += 1;
    }
    Ok(SymbolicHeight { height: n, cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(d: usize, monos: &[&[u32]]) -> PolyZ2 {
        PolyZ2::from_monomials(d, monos.iter().map(|m| m.to_vec()))
    }

    #[test]
    fn level_zero_is_the_variable() {
        for d in 1..=5 {
            for i in 1..=d {
                assert_eq!(a_polynomial(i, 0, d).unwrap(), PolyZ2::var(d, i));
            }
        }
    }

    #[test]
    fn a1_level1() {
        for d in 2..=5 {
            let mut two = vec![0; d];
            two[0] = 2;
            let mut x2 = vec![0; d];
            x2[1] = 1;
            assert_eq!(
                a_polynomial(1, 1, d).unwrap(),
                PolyZ2::from_monomials(d, [two, x2])
            );
        }
    }

    #[test]
    fn a1_level2_cancels() {
        assert_eq!(a_polynomial(1, 2, 3).unwrap(), poly(3, &[&[3, 0, 0], &[0, 0, 1]]));
    }

    /// Brute expansion of a_1^(2) = x_1 (x_1^2 + x_2) + (x_1 x_2 + x_3).
    #[test]
    fn a1_level2_brute() {
        let x = |i| PolyZ2::var(3, i);
        let inner = x(1).mul(&x(1)).add(&x(2));
        let expanded = x(1).mul(&inner).add(&x(1).mul(&x(2)).add(&x(3)));
        assert_eq!(expanded, a_polynomial(1, 2, 3).unwrap());
    }

    #[test]
    fn index_errors() {
        assert!(a_polynomial(0, 0, 3).is_err());
        assert!(a_polynomial(4, 0, 3).is_err());
        assert!(a_polynomial(1, 3, 3).is_err());
        assert!(sphere_reduce_power(3, 3).is_err());
    }

    #[test]
    fn reduce_d2_k1() {
        let c = sphere_reduce_power(2, 1).unwrap();
        assert_eq!(c[0], poly(2, &[&[2, 0], &[0, 1]]));
        assert_eq!(c[1], poly(2, &[&[1, 1]]));
    }

    #[test]
    fn reduce_level_zero() {
        for d in 1..=5 {
            let c = sphere_reduce_power(d, 0).unwrap();
            let vars: Vec<PolyZ2> = (1..=d).map(|i| PolyZ2::var(d, i)).collect();
            assert_eq!(c, vars);
        }
    }

    #[test]
    fn reduction_matches_recursion() {
        for d in 1..=6 {
            for k in 0..d {
                let reduced = sphere_reduce_power(d, k).unwrap();
                for (i, c) in reduced.iter().enumerate() {
                    assert_eq!(c, &a_polynomial(i + 1, k, d).unwrap(), "d={d} k={k} i={}", i + 1);
                }
            }
        }
    }

    #[test]
    fn weighted_degrees() {
        for d in 1..=6 {
            for k in 0..d {
                for (i, p) in a_polynomials(k, d).iter().enumerate() {
                    assert_eq!(p.homogeneous_degree(), Some(i + 1 + k));
                }
            }
        }
    }

    #[test]
    fn rp3_level0_trivial() {
        let m = ManifoldModel::rp(3).unwrap();
        let w0 = wk_classes(&m, 0).unwrap();
        assert!(!w0.nontrivial);
        assert_eq!(w0.total, m.algebra.one());
    }

    #[test]
    fn rp5_level0_nontrivial() {
        let m = ManifoldModel::rp(5).unwrap();
        let w0 = wk_classes(&m, 0).unwrap();
        assert!(w0.nontrivial);
        assert_eq!(m.algebra.format(&w0.total), "1 + a^2 + a^4");
    }

    #[test]
    fn cp2_level1() {
        let m = ManifoldModel::cp(2).unwrap();
        let w1 = wk_classes(&m, 1).unwrap();
        assert!(w1.nontrivial);
        assert_eq!(m.algebra.format(&w1.by_index[0]), "c");
        // The degree-2 component is a_1^(1)(w).
        assert_eq!(w1.by_degree[0].0, 2);
        assert_eq!(w1.by_degree[0].1, w1.by_index[0]);
    }

    #[test]
    fn level_zero_reproduces_w() {
        for name in ["rp2", "rp6", "cp3", "product(rp2,rp3)", "generic4"] {
            let m = ManifoldModel::standard(name).unwrap();
            let w0 = wk_classes(&m, 0).unwrap();
            assert_eq!(w0.total, m.total_class(), "{name}");
            assert_eq!(w0.by_index, m.w);
        }
    }

    #[test]
    fn degree_d_component_of_level_one() {
        // In the universal model the degree-d part of w^(1) is w_1 w_{d-1} + w_d.
        for d in 2..=5 {
            let m = ManifoldModel::generic(d, d + 1).unwrap();
            let alg = &m.algebra;
            let w1 = wk_classes(&m, 1).unwrap();
            let (deg, comp) = &w1.by_degree[d - 2];
            assert_eq!(*deg, d);
            let expected = alg.add(&alg.mul(&m.w[0], &m.w[d - 2]), &m.w[d - 1]);
            assert_eq!(comp, &expected);
            // The last index-view class is w_1 w_d, one degree higher.
            assert_eq!(w1.by_index[d - 1], alg.mul(&m.w[0], &m.w[d - 1]));
        }
    }

    #[test]
    fn direct_evaluation_matches_substitution() {
        for name in ["rp5", "cp2", "product(rp2,sphere1)", "generic(4,6)"] {
            let m = ManifoldModel::standard(name).unwrap();
            for k in 0..m.dim() {
                let direct = wk_classes(&m, k).unwrap();
                for (i, c) in direct.by_index.iter().enumerate() {
                    let p = a_polynomial(i + 1, k, m.dim()).unwrap();
                    assert_eq!(&evaluate(&m.algebra, &p, &m.w).unwrap(), c, "{name} k={k}");
                }
            }
        }
    }

    #[test]
    fn trivial_bundle_height() {
        for n in 1..=5 {
            let s = ManifoldModel::sphere(n).unwrap();
            assert_eq!(symbolic_sphere_height(&s).unwrap().height, n - 1);
        }
    }

    #[test]
    fn projective_heights() {
        let rp5 = ManifoldModel::rp(5).unwrap();
        assert!(symbolic_sphere_height(&rp5).unwrap().height >= 5);
        let cp2 = ManifoldModel::cp(2).unwrap();
        assert!(symbolic_sphere_height(&cp2).unwrap().height >= 5);
    }

    /// Nontrivial w^(k) forces s^{d+k} ≠ 0.
    #[test]
    fn height_dominates_levels() {
        for name in [
            "rp2",
            "rp4",
            "rp5",
            "rp6",
            "cp2",
            "cp3",
            "product(rp2,sphere1)",
            "product(rp2,rp2)",
        ] {
            let m = ManifoldModel::standard(name).unwrap();
            let h = symbolic_sphere_height(&m).unwrap().height;
            for k in 0..m.dim() {
                if wk_classes(&m, k).unwrap().nontrivial {
                    assert!(h >= m.dim() + k, "{name}: h={h}, k={k}");
                }
            }
        }
    }

    fn swap_coords(
        m1: &ManifoldModel,
        m2: &ManifoldModel,
        x: &AlgebraElement,
        into: &GradedAlgebra,
    ) -> AlgebraElement {
        let (n1, n2) = (m1.algebra.dim(), m2.algebra.dim());
        let mut idx = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                if x.coords()
                    .get(GradedAlgebra::tensor_index(&m1.algebra, &m2.algebra, i, j))
                {
                    idx.push(GradedAlgebra::tensor_index(&m2.algebra, &m1.algebra, j, i));
                }
            }
        }
        into.from_coords(crate::gf2::BitVector::from_indices(into.dim(), &idx))
            .unwrap()
    }

    const FACTORS: &[&str] = &[
        "rp1", "rp2", "rp3", "rp4", "cp1", "cp2", "sphere1", "sphere2", "sphere3",
    ];

    proptest! {
        #[test]
        fn product_order_irrelevant(a in 0..FACTORS.len(), b in 0..FACTORS.len(), kseed in 0usize..16) {
            let m1 = ManifoldModel::standard(FACTORS[a]).unwrap();
            let m2 = ManifoldModel::standard(FACTORS[b]).unwrap();
            let p12 = ManifoldModel::product(&m1, &m2).unwrap();
            let p21 = ManifoldModel::product(&m2, &m1).unwrap();
            let k = kseed % p12.dim();
            let c12 = wk_classes(&p12, k).unwrap();
            let c21 = wk_classes(&p21, k).unwrap();
            prop_assert_eq!(c12.nontrivial, c21.nontrivial);
            for (x, y) in c12.by_index.iter().zip(&c21.by_index) {
                prop_assert_eq!(&swap_coords(&m1, &m2, x, &p21.algebra), y);
            }
        }

        #[test]
        fn generic_substitution_agrees(d in 1usize..5, k in 0usize..4) {
            prop_assume!(k < d);
            let m = ManifoldModel::generic(d, d + k).unwrap();
            let direct = wk_classes(&m, k).unwrap();
            for (i, c) in direct.by_index.iter().enumerate() {
                prop_assert!(m.algebra.is_homogeneous_of(c, i + 1 + k));
            }
        }
    }
}
