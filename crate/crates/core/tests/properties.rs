mod common;

use juktak::{derive_word_seed, generate, reachable_set, replay, segment, ErrorConfig, ErrorTables, RuleSet, UnitKind};
use proptest::prelude::*;

fn bengali_word() -> impl Strategy<Value = String> {
    any::<u64>().prop_map(|seed| common::WordGen::new(seed).word(8))
}

fn any_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            4 => (0x0980u32..=0x09FF).prop_map(|c| char::from_u32(c).unwrap_or('ক')),
            1 => Just('\u{200D}'),
            1 => Just('\u{200C}'),
            1 => any::<char>(),
        ],
        0..24,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

proptest! {
    #[test]
    fn segmentation_round_trips_any_text(s in any_text()) {
        let seg = segment(&s);
        prop_assert_eq!(seg.concat(), s.clone());
        prop_assert!(seg.effective_length() <= s.chars().count());
        prop_assert_eq!(segment(&s), seg);
    }

    #[test]
    fn conjuncts_contain_a_hasanta(s in bengali_word()) {
        for u in segment(&s).units() {
            prop_assert_eq!(u.kind() == UnitKind::Conjunct, u.is_conjunct());
            if u.is_conjunct() {
                prop_assert!(u.text().contains(juktak::grapheme::HASANTA));
                prop_assert!(u.letters().len() >= 2);
            }
        }
    }

    #[test]
    fn generation_is_deterministic_and_replays(s in bengali_word(), seed in any::<u64>()) {
        let (t, r) = (ErrorTables::default(), RuleSet::default());
        let cfg = ErrorConfig::with_probabilities(0.5, 0.5, 0.5, 0.5);
        let a = generate(&s, &cfg, &t, &r, seed);
        prop_assert_eq!(&a, &generate(&s, &cfg, &t, &r, seed));
        prop_assert_eq!(replay(&a.original, &a.edits), Ok(a.errored.clone()));
        let mut units: Vec<usize> = a.edits.iter().filter(|e| !e.before.is_empty()).map(|e| e.unit_index).collect();
        units.dedup();
        prop_assert_eq!(units.len(), a.edits.iter().filter(|e| !e.before.is_empty()).count());
    }

    #[test]
    fn generated_forms_are_reachable(s in any::<u64>().prop_map(|x| common::WordGen::new(x).word(5)), seed in any::<u64>()) {
        let (t, r) = (ErrorTables::default(), RuleSet::default());
        let cfg = ErrorConfig::default();
        let set = reachable_set(&s, &cfg, &t, &r).unwrap();
        prop_assert!(set.contains(&s));
        prop_assert!(set.contains(&generate(&s, &cfg, &t, &r, seed).errored));
    }

    #[test]
    fn zero_config_is_identity(s in any_text(), seed in any::<u64>()) {
        let g = generate(&s, &ErrorConfig::zero(), &ErrorTables::default(), &RuleSet::default(), seed);
        prop_assert_eq!(g.errored, s);
        prop_assert!(g.edits.is_empty());
    }
}

#[test]
fn word_seeds_do_not_collide() {
    for global in [0u64, 1, u64::MAX] {
        let mut seeds: Vec<u64> = (0..1_000_000).map(|i| derive_word_seed(global, i)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 1_000_000);
    }
}
