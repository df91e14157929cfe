mod common;

use common::*;
use khc::dsl::{parse_program, pretty_program};
use khc::render::{from_json, to_json};
use khc::{dual_monodromy, forget_hodge, tate_twist, tensor_line};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for s in random_systems(&mut rng, 6, 12) {
            prop_assert_eq!(from_json(&to_json(&s)).unwrap(), s);
        }
    }

    #[test]
    fn line_twist_is_undone_by_its_inverse(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for s in random_systems(&mut rng, 6, 12) {
            let l = random_line(&mut rng, s.points());
            let back = tensor_line(&l.inverse(), &tensor_line(&l, &s).unwrap()).unwrap();
            prop_assert_eq!(back.with_pairing(s.pairing()), s);
        }
    }

    #[test]
    fn tate_twists_compose(seed in any::<u64>(), j in -3i32..=3, k in -3i32..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        for s in random_systems(&mut rng, 4, 12) {
            prop_assert_eq!(tate_twist(&tate_twist(&s, j), k), tate_twist(&s, j + k));
            prop_assert_eq!(tate_twist(&s, j).rank(), s.rank());
        }
    }

    #[test]
    fn dual_is_an_involution(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for s in random_systems(&mut rng, 4, 12) {
            let m = forget_hodge(&s);
            let d = dual_monodromy(&m);
            prop_assert_eq!(d.rank(), m.rank());
            prop_assert_eq!(dual_monodromy(&d), m);
        }
    }

    #[test]
    fn canonical_form_is_a_fixed_point(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_program(&mut rng);
        let parsed = parse_program(&g.noisy(&mut rng)).unwrap();
        let once = pretty_program(&parsed);
        prop_assert_eq!(&once, &g.canonical);
        prop_assert_eq!(pretty_program(&parse_program(&once).unwrap()), once);
    }
}
