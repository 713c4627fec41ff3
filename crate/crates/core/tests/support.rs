mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tricat::bitset::Bits;
use tricat::spectral_space::{enumerate_posets, is_order_isomorphism, SpecSpace};
use tricat::support_model::{parse_model, SupportModel};

fn poset() -> impl Strategy<Value = SpecSpace> {
    (1usize..=5, any::<usize>()).prop_map(|(n, i)| {
        let all = enumerate_posets(n);
        all[i % all.len()].clone()
    })
}

fn subset(n: usize, mask: u32) -> Bits {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

proptest! {
    #[test]
    fn galois_composites_on_canonical_models(space in poset(), mask in any::<u32>()) {
        let model = SupportModel::canonical(&space);
        let w = (0..space.len())
            .filter(|&p| subset(space.len(), mask).iter().any(|q| space.specializes(p, q)))
            .collect::<Bits>();
        prop_assert!(space.is_specialization_closed(w));
        prop_assert_eq!(model.f_sigma(model.g_sigma(w).unwrap()), w);

        let x = subset(model.len(), mask.rotate_left(7));
        let thick = model.thick(x);
        prop_assert!(x.is_subset(thick));
        prop_assert_eq!(model.thick(thick), thick);
        prop_assert_eq!(model.g_sigma(model.f_sigma(x)).unwrap(), thick);
    }

    #[test]
    fn thick_closure_is_monotone(space in poset(), a in any::<u32>(), b in any::<u32>()) {
        let model = SupportModel::canonical(&space);
        let x = subset(model.len(), a);
        let y = x | subset(model.len(), b);
        prop_assert!(model.thick(x).is_subset(model.thick(y)));
    }

    #[test]
    fn supports_transport_along_permutations(space in poset(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..space.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let image = space.permuted("image", &perm);
        prop_assert!(is_order_isomorphism(&space, &image, &perm));
        prop_assert!(SupportModel::check_order_transport(&space, &image, &perm).passes());
    }

    #[test]
    fn family_closures_survive_a_text_round_trip(space in poset()) {
        let canonical = SupportModel::canonical(&space);
        let sigma = (0..canonical.len()).map(|m| canonical.sigma(m)).collect();
        let family = canonical.with_support("family", space.clone(), sigma);
        let text = family.to_text();
        let parsed = parse_model(&text, std::slice::from_ref(&space)).unwrap().model;
        prop_assert_eq!(parsed.structure_key(), family.structure_key());
        prop_assert_eq!(parsed.thick_subcategories().len(), canonical.thick_subcategories().len());
    }
}

#[test]
fn thick_counts_match_the_brute_force_count() {
    for n in 1..=4 {
        for space in enumerate_posets(n) {
            let model = SupportModel::canonical(&space);
            assert_eq!(model.thick_subcategories().len(), common::count_specialization_closed(&space));
        }
    }
}

#[test]
fn quotients_remove_the_killed_points() {
    let chain = SpecSpace::chain("chain", &["p0", "p1", "p2"]);
    let model = SupportModel::canonical(&chain);
    let w = (0..3).filter(|&p| chain.specializes(p, 2)).collect::<Bits>();
    let quotient = model.quotient_model(w).unwrap();
    assert_eq!(quotient.space().len(), 3 - w.len());
    assert!(quotient.is_classifying().holds());
}

#[test]
fn canonical_spectra_have_a_basis_topology() {
    for n in 1..=5 {
        for space in enumerate_posets(n) {
            let spectrum = SupportModel::canonical(&space).spec_of();
            assert!(spectrum.discrepancy.is_none(), "{space:?}");
            assert!(spectrum.subbasis_is_basis, "{space:?}");
        }
    }
}
