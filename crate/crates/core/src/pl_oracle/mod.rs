//! Exact checks of piecewise-linear maps `K → R^m`: do the images of two
//! disjoint simplices meet?

mod lp;

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use lp::{
    feasible_by_enumeration, feasible_by_simplex, satisfies, Enumeration, Rational, MAX_ENUMERATION_FREEDOM,
};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A map that is affine on each simplex, given by vertex images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    complex: SimplicialComplex,
    target_dim: usize,
    /// `coords[v]` is the image of dense vertex `v`.
    coords: Vec<Vec<Rational>>,
}

impl PLMap {
    pub fn new(complex: SimplicialComplex, target_dim: usize, coords: Vec<Vec<Rational>>) -> Result<Self> {
        if target_dim == 0 {
            return Err(Error::usage("target dimension must be positive"));
        }
        if coords.len() != complex.vertex_count() {
            return Err(Error::usage(format!(
                "{} vertex images for {} vertices",
                coords.len(),
                complex.vertex_count()
            )));
        }
        if let Some(v) = coords.iter().position(|c| c.len() != target_dim) {
            return Err(Error::usage(format!(
                "image of vertex {} has the wrong length",
                complex.labels()[v]
            )));
        }
        Ok(PLMap {
            complex,
            target_dim,
            coords,
        })
    }

    /// Integer vertex images.
    pub fn from_integers(complex: SimplicialComplex, target_dim: usize, coords: &[Vec<i64>]) -> Result<Self> {
        let coords = coords
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| Rational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect();
        Self::new(complex, target_dim, coords)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn image(&self, v: u32) -> &[Rational] {
        &self.coords[v as usize]
    }

    pub fn to_document(&self) -> PLMapDocument {
        PLMapDocument {
            target_dim: self.target_dim,
            coordinates: self
                .complex
                .labels()
                .iter()
                .zip(&self.coords)
                .map(|(l, c)| (l.to_string(), c.iter().map(RationalText::from).collect()))
                .collect(),
        }
    }

    /// Vertices are matched by the text of their labels.
    pub fn from_document(complex: SimplicialComplex, doc: &PLMapDocument) -> Result<Self> {
        let mut coords = Vec::with_capacity(complex.vertex_count());
        for l in complex.labels() {
            let key = l.to_string();
            let c = doc
                .coordinates
                .get(&key)
                .ok_or_else(|| Error::parse(format!("no coordinates for vertex {key}")))?;
            coords.push(c.iter().map(|r| r.0.clone()).collect());
        }
        if doc.coordinates.len() != complex.vertex_count() {
            return Err(Error::parse("coordinates given for vertices outside the complex"));
        }
        Self::new(complex, doc.target_dim, coords)
    }

    pub fn from_json(complex: SimplicialComplex, text: &str) -> Result<Self> {
        Self::from_document(complex, &serde_json::from_str(text)?)
    }
}

/// On-disk form of a [`PLMap`]: `{"target_dim": 2, "coordinates":
/// {"1": [0, "1/2"], …}}`, keyed by vertex label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLMapDocument {
    pub target_dim: usize,
    pub coordinates: BTreeMap<String, Vec<RationalText>>,
}

/// A rational written as a JSON integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl From<&Rational> for RationalText {
    fn from(r: &Rational) -> Self {
        RationalText(r.clone())
    }
}

impl Serialize for RationalText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match (self.0.is_integer(), i64::try_from(self.0.to_integer())) {
            (true, Ok(i)) => s.serialize_i64(i),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(RationalText(Rational::from_integer(BigInt::from(i)))),
            Raw::Text(t) => parse_rational(&t)
                .map(RationalText)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Parses `"7"`, `"-3/4"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::parse(format!("not a rational: {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Barycentric weights on both simplices and the common image point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub lambda: Vec<Rational>,
    pub mu: Vec<Rational>,
    pub point: Vec<Rational>,
}

impl Witness {
    /// Re-checks the witness by substitution.
    pub fn verify(&self, f: &PLMap, sigma: &Simplex, tau: &Simplex) -> bool {
        let combo = |w: &[Rational], s: &Simplex| -> Option<Vec<Rational>> {
            if w.len() != s.vertices().len() || w.iter().any(Signed::is_negative) {
                return None;
            }
            if w.iter().fold(Rational::zero(), |a, x| a + x) != Rational::one() {
                return None;
            }
            Some(
                (0..f.target_dim)
                    .map(|c| {
                        s.vertices()
                            .iter()
                            .zip(w)
                            .fold(Rational::zero(), |a, (&v, x)| a + x * &f.image(v)[c])
                    })
                    .collect(),
            )
        };
        combo(&self.lambda, sigma).as_ref() == Some(&self.point)
            && combo(&self.mu, tau).as_ref() == Some(&self.point)
    }
}

/// Which feasibility method decides a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Enumeration when at most three variables stay free, simplex otherwise.
    #[default]
    Auto,
    /// Enumeration, still handing systems with more freedom to the simplex.
    Enumeration,
    Simplex,
}

fn hulls_separated_by_box(f: &PLMap, sigma: &Simplex, tau: &Simplex) -> bool {
    (0..f.target_dim).any(|c| {
        let range = |s: &Simplex| {
            let mut it = s.vertices().iter().map(|&v| &f.image(v)[c]);
            let first = it.next().expect("simplices are nonempty");
            it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let (lo1, hi1) = range(sigma);
        let (lo2, hi2) = range(tau);
        hi1 < lo2 || hi2 < lo1
    })
}

/// Decides exactly whether the images of `sigma` and `tau` meet.
pub fn simplex_images_intersect(f: &PLMap, sigma: &Simplex, tau: &Simplex) -> Option<Witness> {
    simplex_images_intersect_with(f, sigma, tau, Method::Auto)
}

pub fn simplex_images_intersect_with(
    f: &PLMap,
    sigma: &Simplex,
    tau: &Simplex,
    method: Method,
) -> Option<Witness> {
    if hulls_separated_by_box(f, sigma, tau) {
        return None;
    }
    let (a, b) = (sigma.vertices().len(), tau.vertices().len());
    let n = a + b;
    // Unknowns (λ, μ): Σλ = 1, Σμ = 1, Σ λ_i f(u_i) - Σ μ_j f(v_j) = 0.
    let mut rows = Vec::with_capacity(f.target_dim + 2);
    let mut rhs = Vec::with_capacity(f.target_dim + 2);
    rows.push(
        (0..n)
            .map(|j| if j < a { Rational::one() } else { Rational::zero() })
            .collect::<Vec<_>>(),
    );
    rhs.push(Rational::one());
    rows.push(
        (0..n)
            .map(|j| if j < a { Rational::zero() } else { Rational::one() })
            .collect(),
    );
    rhs.push(Rational::one());
    for c in 0..f.target_dim {
        let row = sigma
            .vertices()
            .iter()
            .map(|&v| f.image(v)[c].clone())
            .chain(tau.vertices().iter().map(|&v| -f.image(v)[c].clone()))
            .collect();
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let x = match method {
        Method::Simplex => feasible_by_simplex(&rows, &rhs, n)?,
        Method::Enumeration | Method::Auto => match feasible_by_enumeration(&rows, &rhs, n) {
            Enumeration::Feasible(x) => x,
            Enumeration::Infeasible => return None,
            Enumeration::TooManyFree(_) => feasible_by_simplex(&rows, &rhs, n)?,
        },
    };
    let (lambda, mu) = (x[..a].to_vec(), x[a..].to_vec());
    let point = (0..f.target_dim)
        .map(|c| {
            sigma
                .vertices()
                .iter()
                .zip(&lambda)
                .fold(Rational::zero(), |acc, (&v, l)| acc + l * &f.image(v)[c])
        })
        .collect();
    Some(Witness { lambda, mu, point })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidencePair {
    pub sigma: Simplex,
    pub tau: Simplex,
    pub witness: Witness,
}

/// Unordered pairs of disjoint simplices with `dim σ + dim τ ≤ max_dim_sum`,
/// ordered by dimension sum, then by the position of `σ` and of `τ` in the
/// global (dimension, lexicographic) order, with `σ` before `τ`.
pub fn disjoint_pairs(k: &SimplicialComplex, max_dim_sum: usize) -> Vec<(Simplex, Simplex)> {
    let all: Vec<&Simplex> = k.all_simplices().collect();
    let mut out = Vec::new();
    for sum in 0..=max_dim_sum {
        for (i, s) in all.iter().enumerate() {
            if s.dim() > sum {
                break;
            }
            for t in &all[i + 1..] {
                if s.dim() + t.dim() == sum && s.is_disjoint(t) {
                    out.push(((*s).clone(), (*t).clone()));
                }
            }
        }
    }
    out
}

/// The first pair, in [`disjoint_pairs`] order, whose images meet.
pub fn find_coincidence_pair(f: &PLMap, max_dim_sum: usize) -> Option<CoincidencePair> {
    disjoint_pairs(&f.complex, max_dim_sum)
        .into_iter()
        .find_map(|(sigma, tau)| {
            simplex_images_intersect(f, &sigma, &tau).map(|witness| CoincidencePair { sigma, tau, witness })
        })
}

/// Default coordinate range of [`random_rational_map`].
pub const DEFAULT_COORD_RANGE: (i64, i64) = (-100, 100);

/// Integer vertex images drawn uniformly from `range` (inclusive) with a
/// seeded ChaCha8 generator.
pub fn random_rational_map(k: &SimplicialComplex, m: usize, seed: u64, range: (i64, i64)) -> Result<PLMap> {
    if range.0 > range.1 {
        return Err(Error::usage("empty coordinate range"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<Vec<i64>> = (0..k.vertex_count())
        .map(|_| (0..m).map(|_| rng.gen_range(range.0..=range.1)).collect())
        .collect();
    PLMap::from_integers(k.clone(), m, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::StandardComplex;
    use proptest::prelude::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn separated_segments() {
        let k = SimplicialComplex::from_facets([[1i64, 2], [3, 4]]).unwrap();
        let f = PLMap::from_integers(k, 1, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert!(simplex_images_intersect(&f, &s(&[0, 1]), &s(&[2, 3])).is_none());
        assert!(find_coincidence_pair(&f, 2).is_none());
    }

    #[test]
    fn square_diagonals() {
        let k = StandardComplex::Simplex(3).build().unwrap();
        let f = PLMap::from_integers(k, 2, &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let w = simplex_images_intersect(&f, &s(&[0, 3]), &s(&[1, 2])).unwrap();
        assert_eq!(w.point, vec![q(1, 2), q(1, 2)]);
        assert!(w.verify(&f, &s(&[0, 3]), &s(&[1, 2])));
    }

    #[test]
    fn shared_image_point() {
        let k = SimplicialComplex::from_facets([[1i64, 2], [3, 4]]).unwrap();
        let f = PLMap::from_integers(k, 2, &[vec![0, 0], vec![5, 5], vec![5, 5], vec![9, 0]]).unwrap();
        let w = simplex_images_intersect(&f, &s(&[0, 1]), &s(&[2, 3])).unwrap();
        assert_eq!(w.point, vec![q(5, 1), q(5, 1)]);
    }

    #[test]
    fn triangle_on_a_line() {
        let k = StandardComplex::Simplex(2).build().unwrap();
        let f = PLMap::from_integers(k, 1, &[vec![0], vec![1], vec![2]]).unwrap();
        let pair = find_coincidence_pair(&f, 1).unwrap();
        assert_eq!((pair.sigma, pair.tau), (s(&[1]), s(&[0, 2])));
        assert_eq!(pair.witness.point, vec![q(1, 1)]);
    }

    #[test]
    fn straight_line_k5() {
        let k = StandardComplex::Simplex(4).build().unwrap().skeleton(1);
        let f = PLMap::from_integers(
            k,
            2,
            &[vec![0, 0], vec![4, 0], vec![4, 4], vec![0, 4], vec![1, 1]],
        )
        .unwrap();
        let pair = find_coincidence_pair(&f, 2).unwrap();
        assert!(pair.sigma.is_disjoint(&pair.tau));
        assert!(pair.witness.verify(&f, &pair.sigma, &pair.tau));
    }

    #[test]
    fn pair_order_and_count() {
        // K5: 10 disjoint vertex pairs, 30 vertex-edge pairs, 15 edge pairs.
        let k = StandardComplex::Simplex(4).build().unwrap().skeleton(1);
        let pairs = disjoint_pairs(&k, 2);
        assert_eq!(pairs.len(), 10 + 30 + 15);
        let sums: Vec<usize> = pairs.iter().map(|(a, b)| a.dim() + b.dim()).collect();
        assert!(sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn random_maps_are_reproducible() {
        let k = StandardComplex::Rp2_6.build().unwrap();
        let a = random_rational_map(&k, 3, 7, DEFAULT_COORD_RANGE).unwrap();
        let b = random_rational_map(&k, 3, 7, DEFAULT_COORD_RANGE).unwrap();
        let c = random_rational_map(&k, 3, 8, DEFAULT_COORD_RANGE).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for v in 0..6 {
            for x in a.image(v) {
                assert!(x.is_integer() && x.abs() <= q(100, 1));
            }
        }
    }

    #[test]
    fn document_roundtrip() {
        let k = StandardComplex::Simplex(2).build().unwrap();
        let f = PLMap::new(k.clone(), 1, vec![vec![q(1, 3)], vec![q(-2, 1)], vec![q(5, 7)]]).unwrap();
        let json = serde_json::to_string(&f.to_document()).unwrap();
        assert_eq!(
            json,
            r#"{"target_dim":1,"coordinates":{"1":["1/3"],"2":[-2],"3":["5/7"]}}"#
        );
        assert_eq!(PLMap::from_json(k.clone(), &json).unwrap(), f);
        assert!(PLMap::from_json(k.clone(), r#"{"target_dim":1,"coordinates":{"1":[0],"2":[1]}}"#).is_err());
        assert!(PLMap::from_json(
            k,
            r#"{"target_dim":1,"coordinates":{"1":[0],"2":[1],"3":["1/0"]}}"#
        )
        .is_err());
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), q(4, 1));
        assert!(parse_rational("x").is_err());
    }

    /// Topological Radon on `Δ^{d+1} → R^d`.
    #[test]
    fn radon_on_random_maps() {
        for d in 1..=3 {
            let k = StandardComplex::Simplex(d + 1).build().unwrap();
            for seed in 0..100 {
                let f = random_rational_map(&k, d, seed, DEFAULT_COORD_RANGE).unwrap();
                let pair = find_coincidence_pair(&f, d).unwrap_or_else(|| panic!("d={d} seed={seed}"));
                assert!(pair.witness.verify(&f, &pair.sigma, &pair.tau));
            }
        }
    }

    #[test]
    fn k5_on_random_maps() {
        let k = StandardComplex::Simplex(4).build().unwrap().skeleton(1);
        for seed in 0..100 {
            let f = random_rational_map(&k, 2, seed, DEFAULT_COORD_RANGE).unwrap();
            assert!(find_coincidence_pair(&f, 2).is_some(), "seed {seed}");
        }
    }

    fn small_map() -> impl Strategy<Value = (PLMap, usize)> {
        (1usize..4, 0u64..1000, 1i64..6).prop_map(|(m, seed, r)| {
            let k = StandardComplex::Simplex(4).build().unwrap();
            (random_rational_map(&k, m, seed, (-r, r)).unwrap(), m)
        })
    }

    proptest! {
        #[test]
        fn methods_agree_and_witnesses_hold((f, _m) in small_map()) {
            let k = f.complex().clone();
            for (sigma, tau) in disjoint_pairs(&k, 3) {
                let by_enum = simplex_images_intersect_with(&f, &sigma, &tau, Method::Enumeration);
                let by_simplex = simplex_images_intersect_with(&f, &sigma, &tau, Method::Simplex);
                prop_assert_eq!(by_enum.is_some(), by_simplex.is_some());
                for w in by_enum.iter().chain(by_simplex.iter()) {
                    prop_assert!(w.verify(&f, &sigma, &tau));
                }
                let swapped = simplex_images_intersect(&f, &tau, &sigma);
                prop_assert_eq!(swapped.is_some(), by_enum.is_some());
            }
        }

        #[test]
        fn no_pair_means_all_hulls_disjoint((f, m) in small_map()) {
            let k = f.complex().clone();
            let bound = m.saturating_sub(1);
            if find_coincidence_pair(&f, bound).is_none() {
                for (sigma, tau) in disjoint_pairs(&k, bound) {
                    prop_assert!(simplex_images_intersect_with(&f, &sigma, &tau, Method::Simplex).is_none());
                }
            }
        }
    }
}
