use std::collections::BTreeSet;

use proptest::prelude::*;
use vkf_core::cohomology::{coboundary, cup_power, is_coboundary, sw_height, HeightOptions};
use vkf_core::deleted_product::{from_vertex_involution, swap_quotient, triangulated_deleted_product};
use vkf_core::retraction::{alpha, BaryPoint, TOLERANCE};
use vkf_core::{
    BitMatrix, BitVector, DeltaComplexLike, MemoryBudget, Simplex, SimplicialComplex, StandardComplex,
};

fn matrix_strategy(max: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
            BitMatrix::from_rows(c, rows.into_iter().map(BitVector::from_bools).collect()).unwrap()
        })
    })
}

/// Random complexes on up to seven vertices.
fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    proptest::collection::vec(proptest::collection::btree_set(1i64..=7, 1..=4), 1..=5)
        .prop_map(|facets| SimplicialComplex::from_facets(facets).unwrap())
}

fn augmented(a: &BitMatrix, b: &BitVector) -> BitMatrix {
    let rows = (0..a.rows())
        .map(|i| BitVector::from_bools((0..a.cols()).map(|j| a.get(i, j)).chain([b.get(i)])))
        .collect();
    BitMatrix::from_rows(a.cols() + 1, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_transpose_invariant(a in matrix_strategy(64)) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn solve_is_sound_and_complete(a in matrix_strategy(40), seed in any::<u64>()) {
        let b = BitVector::from_bools((0..a.rows()).map(|i| (seed.rotate_left(i as u32) ^ (i as u64 * 0x9e37)) & 1 == 1));
        let x = a.solve(&b).unwrap();
        let grows = augmented(&a, &b).rank() > a.rank();
        prop_assert_eq!(x.is_none(), grows);
        if let Some(x) = x {
            prop_assert_eq!(a.mul_vec(&x), b);
        }
    }

    #[test]
    fn consistent_rhs_is_always_solved(a in matrix_strategy(40), x0 in proptest::collection::vec(any::<bool>(), 40)) {
        let x0 = BitVector::from_bools(x0.into_iter().take(a.cols()));
        let b = a.mul_vec(&x0);
        let x = a.solve(&b).unwrap().expect("b lies in the image");
        prop_assert_eq!(a.mul_vec(&x), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skeleta_compose(k in complex_strategy(), m in 0usize..4, n in 0usize..4) {
        prop_assert_eq!(k.skeleton(m).skeleton(n), k.skeleton(m.min(n)));
    }

    #[test]
    fn skeleton_faces_are_small_subsets_of_facets(k in complex_strategy(), n in 0usize..4) {
        let mut expected = BTreeSet::new();
        for f in k.facets() {
            let v = f.vertices();
            for mask in 1u32..(1 << v.len()) {
                if mask.count_ones() as usize <= n + 1 {
                    expected.insert((0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect::<Vec<_>>());
                }
            }
        }
        let got: BTreeSet<Vec<u32>> = k.skeleton(n).all_simplices().map(|s| s.vertices().to_vec()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn deleted_product_structure(k in complex_strategy()) {
        let x = triangulated_deleted_product(&k);
        x.verify(Some(&k)).unwrap();
        let counts = x.simplex_counts();
        prop_assert_eq!(counts.clone(), brute_force_chain_counts(&k));
        prop_assert!(counts.iter().all(|c| c % 2 == 0));
        prop_assert_eq!(x.euler_characteristic(), cell_euler_characteristic(&k));
        let q = swap_quotient(&x).unwrap();
        prop_assert_eq!(q.simplex_counts(), counts.iter().map(|c| c / 2).collect::<Vec<_>>());
        q.verify_cocycle().unwrap();
        q.delta().verify_simplicial_identities().unwrap();
    }

    #[test]
    fn cup_powers_are_cocycles_and_vanish_monotonically(k in complex_strategy()) {
        let q = swap_quotient(&triangulated_deleted_product(&k)).unwrap();
        let Some(top) = q.top_dim() else { return Ok(()); };
        let budget = MemoryBudget::default();
        let mut vanished = false;
        for n in 1..=top {
            let c = cup_power(&q, n).unwrap();
            prop_assert!(coboundary(&q, &c).values.is_zero());
            let exact = is_coboundary(&q, &c, &budget).unwrap();
            prop_assert!(!vanished || exact, "power {} nonzero after a vanishing one", n);
            vanished |= exact;
        }
        let h = sw_height(&q, &HeightOptions::default()).unwrap().h;
        prop_assert!(h <= top);
    }

    #[test]
    fn alpha_support_shrinks(k in complex_strategy(), wx in proptest::collection::vec(0.01f64..1.0, 4), wy in proptest::collection::vec(0.01f64..1.0, 4), fx in 0usize..5, fy in 0usize..5) {
        let pick = |i: usize, w: &[f64]| {
            let f = &k.facets()[i % k.facets().len()];
            let total: f64 = w[..f.vertices().len()].iter().sum();
            let mut c = vec![0.0; k.vertex_count()];
            for (&v, wi) in f.vertices().iter().zip(w) {
                c[v as usize] = wi / total;
            }
            BaryPoint::new(&k, c).unwrap()
        };
        let (x, y) = (pick(fx, &wx), pick(fy, &wy));
        prop_assume!(x != y);
        let a = alpha(&x, &y).unwrap();
        prop_assert!(a.support().is_face_of(&x.support()));
        let b = alpha(&y, &x).unwrap();
        prop_assert!(a.support().is_disjoint(&b.support()));
        if x.support().is_disjoint(&y.support()) {
            for (p, q) in a.coords().iter().zip(x.coords()) {
                prop_assert!((p - q).abs() <= TOLERANCE);
            }
        }
    }
}

/// Counts strictly increasing chains of pairs `(u, v)` in the product
/// order whose two projections are disjoint simplices of `k`, without
/// going through cells.
fn brute_force_chain_counts(k: &SimplicialComplex) -> Vec<usize> {
    let n = k.vertex_count() as u32;
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|(u, v)| u != v)
        .collect();
    let mut counts: Vec<usize> = Vec::new();
    let mut chain: Vec<(u32, u32)> = Vec::new();
    fn extend(
        k: &SimplicialComplex,
        pairs: &[(u32, u32)],
        chain: &mut Vec<(u32, u32)>,
        counts: &mut Vec<usize>,
    ) {
        for &p in pairs {
            if let Some(&(a, b)) = chain.last() {
                if !(a <= p.0 && b <= p.1 && (a, b) != p) {
                    continue;
                }
            }
            chain.push(p);
            let s = Simplex::new(
                chain
                    .iter()
                    .map(|c| c.0)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect(),
            );
            let t = Simplex::new(
                chain
                    .iter()
                    .map(|c| c.1)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect(),
            );
            if s.is_disjoint(&t) && k.contains(&s) && k.contains(&t) {
                let q = chain.len() - 1;
                if counts.len() <= q {
                    counts.resize(q + 1, 0);
                }
                counts[q] += 1;
                extend(k, pairs, chain, counts);
            }
            chain.pop();
        }
    }
    extend(k, &pairs, &mut chain, &mut counts);
    counts
}

/// `Σ (-1)^{dim σ + dim τ}` over ordered pairs of disjoint simplices.
fn cell_euler_characteristic(k: &SimplicialComplex) -> i64 {
    let all: Vec<&Simplex> = k.all_simplices().collect();
    let mut chi = 0;
    for s in &all {
        for t in &all {
            if s.is_disjoint(t) {
                chi += if (s.dim() + t.dim()) % 2 == 0 { 1 } else { -1 };
            }
        }
    }
    chi
}

#[test]
fn euler_characteristic_of_flores_skeleta() {
    fn binom(n: i64, r: i64) -> i64 {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for d in 0..=3usize {
        let k = StandardComplex::Simplex(2 * d + 2).build().unwrap().skeleton(d);
        let expected: i64 = (0..=d as i64)
            .map(|i| if i % 2 == 0 { 1 } else { -1 } * binom(2 * d as i64 + 3, i + 1))
            .sum();
        assert_eq!(k.euler_characteristic(), expected, "d={d}");
    }
}

#[test]
fn corpus_heights_bounded_by_dimension_and_monotone() {
    for k in [
        StandardComplex::Rp2_6,
        StandardComplex::Torus7,
        StandardComplex::BoundarySimplex(4),
    ] {
        let q = swap_quotient(&triangulated_deleted_product(&k.build().unwrap())).unwrap();
        let opts = HeightOptions {
            early_stop: false,
            ..HeightOptions::default()
        };
        let r = sw_height(&q, &opts).unwrap();
        assert!(r.h <= r.dimension.unwrap());
        let pattern: Vec<bool> = r.degrees.iter().map(|d| d.is_coboundary).collect();
        assert!(pattern.windows(2).all(|w| !w[0] || w[1]), "{k:?}: {pattern:?}");
    }
}

#[test]
fn antipodal_skeleta_have_height_n() {
    for d in 1..=4 {
        let c = StandardComplex::CrossPolytopeBoundary(d);
        let x = from_vertex_involution(&c.build().unwrap(), &c.antipodal_pairing().unwrap()).unwrap();
        for n in 0..d {
            let q = swap_quotient(&x.skeleton(n)).unwrap();
            let full = swap_quotient(&x).unwrap();
            assert_eq!(q.z(), &full.skeleton(n).z().clone(), "d={d} n={n}");
            assert_eq!(
                sw_height(&q, &HeightOptions::default()).unwrap().h,
                n,
                "d={d} n={n}"
            );
        }
    }
}

#[test]
fn corpus_manifolds_have_their_mod2_betti_numbers() {
    use vkf_core::cohomology::betti_numbers;
    let expected = [
        (StandardComplex::Rp2_6, vec![1, 1, 1]),
        (StandardComplex::Torus7, vec![1, 2, 1]),
        (StandardComplex::Cp2_9, vec![1, 0, 1, 0, 1]),
    ];
    for (c, betti) in expected {
        assert_eq!(betti_numbers(&c.build().unwrap()).unwrap(), betti, "{c:?}");
    }
}
