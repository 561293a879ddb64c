//! Randomized property tests for the braid, plat, and surgery layers.

use proptest::prelude::*;

use platbook::braid::{comb, BraidWord, PureFactor, PureGeneratorWord};
use platbook::kirby::{
    band_connect, check_conditions, compile_unknotting, positive_monodromy_compile, BlowUpEvent,
    FramedLinkDiagram, Role,
};
use platbook::openbook::from_surgery;
use platbook::plat::{closure_to_plat, purify, replay, shift};

fn braid_word(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands, prop::collection::vec((1..max_strands, prop::bool::ANY), 0..=max_len))
        .prop_map(|(n, letters)| {
            let toks: Vec<String> = letters
                .into_iter()
                .filter(|(i, _)| *i < n)
                .map(|(i, pos)| if pos { i.to_string() } else { format!("-{i}") })
                .collect();
            BraidWord::parse(&toks.join(" "), Some(n)).unwrap()
        })
}

fn pure_word(max_strands: usize, max_factors: usize) -> impl Strategy<Value = PureGeneratorWord> {
    (2..=max_strands, prop::collection::vec((1usize..6, 2usize..7, -2i64..=2), 0..=max_factors))
        .prop_map(|(n, raw)| {
            let factors: Vec<PureFactor> = raw
                .into_iter()
                .filter_map(|(a, b, exp)| {
                    let (i, j) = (a.min(b), a.max(b).max(a + 1));
                    if j <= n && exp != 0 {
                        Some(PureFactor { i, j, exp })
                    } else {
                        None
                    }
                })
                .collect();
            PureGeneratorWord::new(n, factors).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn purify_yields_replayable_pure_plats(w in braid_word(5, 12)) {
        let plat = shift(&closure_to_plat(&w).unwrap()).unwrap();
        let (pure, log) = purify(&plat).unwrap();
        prop_assert!(pure.is_pure_braided());
        prop_assert!(pure.braid().permutation().is_identity());
        prop_assert_eq!(pure.component_count(), plat.component_count());
        prop_assert_eq!(replay(&plat, &log).unwrap(), pure);
    }

    #[test]
    fn comb_preserves_the_artin_action(w in pure_word(6, 4)) {
        let input = w.expand();
        let combed = comb(&input).unwrap();
        prop_assert_eq!(combed.expand().artin_action(), input.artin_action());
        prop_assert_eq!(
            combed.expand().strand_linking().unwrap(),
            input.strand_linking().unwrap()
        );
    }

    #[test]
    fn compiled_diagrams_certify(w in braid_word(4, 6)) {
        let plat = shift(&closure_to_plat(&w).unwrap()).unwrap();
        let (pure, _) = purify(&plat).unwrap();
        let word = comb(pure.braid()).unwrap();
        if word.occurrence_count() > 4 {
            return Ok(());
        }
        let r = compile_unknotting(&word, &pure).unwrap();
        prop_assert!(check_conditions(&r).all_pass());
        prop_assert!(r.diagram.homology().is_empty());
        r.verify_replay().unwrap();
        let banded = band_connect(&r).unwrap();
        let book = from_surgery(&banded).unwrap();
        prop_assert_eq!(book.genus, 0);
    }

    #[test]
    fn positive_mode_emits_no_positive_twists(w in braid_word(4, 6)) {
        let plat = shift(&closure_to_plat(&w).unwrap()).unwrap();
        let (pure, _) = purify(&plat).unwrap();
        let word = comb(pure.braid()).unwrap();
        if word.occurrence_count() > 4 {
            return Ok(());
        }
        let r = positive_monodromy_compile(&word, &pure).unwrap();
        prop_assert!(check_conditions(&r).all_pass());
        for c in r.diagram.components() {
            if c.role == Role::Twist {
                prop_assert_eq!(c.framing, -1);
            }
        }
    }

    #[test]
    fn blow_up_round_trips(
        framings in prop::collection::vec(-2i64..=2, 3..=5),
        sign in prop::bool::ANY,
        windings in prop::collection::vec(-2i64..=2, 5),
    ) {
        let mut d = FramedLinkDiagram::new();
        for (id, &f) in framings.iter().enumerate() {
            d.add_component(id, Role::Unknotted, f).unwrap();
        }
        let threaded: Vec<(usize, i64)> = windings
            .iter()
            .enumerate()
            .take(framings.len())
            .filter(|&(_, &w)| w != 0)
            .map(|(i, &w)| (i, w))
            .collect();
        let ev = BlowUpEvent {
            new_id: framings.len(),
            sign: if sign { 1 } else { -1 },
            role: Role::Twist,
            threaded,
            down: false,
        };
        let up = d.blow_up(&ev).unwrap();
        prop_assert_eq!(up.framed_det().abs(), d.framed_det().abs());
        prop_assert_eq!(up.blow_down(ev.new_id).unwrap(), d);
    }
}
