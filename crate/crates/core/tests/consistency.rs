//! Heights against the exact PL oracle: when the deleted product of a
//! corpus complex has height h, no map of it into R^h can be free of
//! coincidences, so every random map must produce a verified pair.

use std::time::Instant;

use vkf_core::cohomology::{sw_height, HeightOptions};
use vkf_core::complex::CORPUS;
use vkf_core::deleted_product::{swap_quotient, triangulated_deleted_product};
use vkf_core::pl_oracle::{find_coincidence_pair, random_rational_map, DEFAULT_COORD_RANGE};

#[test]
fn random_maps_below_the_height_have_coincidences() {
    for entry in CORPUS {
        let k = entry.load().unwrap();
        let q = swap_quotient(&triangulated_deleted_product(&k)).unwrap();
        let h = sw_height(&q, &HeightOptions::default()).unwrap().h;
        let start = Instant::now();
        for seed in 0..20 {
            let f = random_rational_map(&k, h, seed, DEFAULT_COORD_RANGE).unwrap();
            let p = find_coincidence_pair(&f, 2 * k.dim())
                .unwrap_or_else(|| panic!("{} into R^{h}, seed {seed}: no coincidence", entry.name));
            assert!(p.sigma.is_disjoint(&p.tau));
            assert!(p.witness.verify(&f, &p.sigma, &p.tau));
        }
        println!("{}: h = {h}, 20 maps in {:?}", entry.name, start.elapsed());
    }
}
