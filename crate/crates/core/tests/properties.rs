use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use posetdyn::fixtures::{random_poset, random_restriction};
use posetdyn::io::{parse_instance, poset_to_json};
use posetdyn::promotion::{bender_knuth, inc_promotion, promotion_range};
use posetdyn::toggles::{rowmotion, toggle};
use posetdyn::{GammaPoset, LabelingSpace, Poset, Strictness};

fn instance(seed: u64, n: usize, strictness: Strictness) -> LabelingSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_poset(&mut rng, n, 0.4);
    let r = random_restriction(&mut rng, &p, strictness, 2);
    LabelingSpace::new(p, r, strictness).unwrap()
}

fn small_poset(seed: u64, n: usize) -> Poset {
    random_poset(&mut ChaCha8Rng::seed_from_u64(seed), n, 0.4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involutions_square_to_identity(seed in any::<u64>(), n in 1usize..=6) {
        let space = instance(seed, n, Strictness::Strict);
        for f in space.enumerate_within(20_000).unwrap() {
            for i in promotion_range(&space) {
                let g = bender_knuth(&space, &f, i).unwrap();
                prop_assert!(space.contains(&g));
                prop_assert_eq!(bender_knuth(&space, &g, i).unwrap(), f.clone());
            }
        }
    }

    #[test]
    fn promotion_permutes_labelings(seed in any::<u64>(), n in 1usize..=6) {
        let space = instance(seed, n, Strictness::Strict);
        let all = space.enumerate_within(20_000).unwrap();
        let mut images: Vec<_> = all.iter().map(|f| inc_promotion(&space, f).unwrap()).collect();
        images.sort();
        prop_assert_eq!(images, all);
    }

    #[test]
    fn labelings_and_ideals_correspond(seed in any::<u64>(), n in 1usize..=6, weak in any::<bool>()) {
        let strictness = if weak { Strictness::Weak } else { Strictness::Strict };
        let space = instance(seed, n, strictness);
        let gamma = GammaPoset::new(space.clone()).unwrap();
        let all = space.enumerate_within(20_000).unwrap();
        prop_assert_eq!(gamma.poset().count_order_ideals(), all.len());
        for f in &all {
            let ideal = gamma.labeling_to_ideal(f).unwrap();
            prop_assert_eq!(&gamma.ideal_to_labeling(&ideal).unwrap(), f);
        }
    }

    #[test]
    fn toggles_are_involutions(seed in any::<u64>(), n in 0usize..=7) {
        let p = small_poset(seed, n);
        for ideal in p.order_ideals() {
            for x in 0..p.len() {
                let once = toggle(&p, &ideal, x).unwrap();
                prop_assert!(p.is_order_ideal(once.as_set()));
                prop_assert_eq!(toggle(&p, &once, x).unwrap(), ideal.clone());
            }
        }
    }

    #[test]
    fn rowmotion_permutes_ideals(seed in any::<u64>(), n in 0usize..=7) {
        let p = small_poset(seed, n);
        let all = p.order_ideals();
        let mut images: Vec<_> = all.iter().map(|i| rowmotion(&p, i)).collect();
        images.sort();
        prop_assert_eq!(images, all);
    }

    #[test]
    fn json_export_round_trips(seed in any::<u64>(), n in 0usize..=8) {
        let space = instance(seed, n.max(1), Strictness::Strict);
        let text = poset_to_json(space.poset(), Some(space.restriction()), None);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(back.poset.covers(), space.poset().covers());
        prop_assert_eq!(back.restriction.as_ref(), Some(space.restriction()));
        prop_assert_eq!(poset_to_json(&back.poset, back.restriction.as_ref(), None), text);
    }
}
