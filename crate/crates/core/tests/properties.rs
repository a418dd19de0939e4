use ggt_core::cayley::{build_ball, quasiconvexity_constant, BallMetric, EqualityOracle, FreeReduction, Metric};
use ggt_core::dehn::{dehn_reduce, symmetrize, DehnOracle};
use ggt_core::free_oracle::SubgroupGraph;
use ggt_core::subgroup::{build_nielsen_set, decide_membership, ConstructionMode, Membership, SubgroupSpec};
use ggt_core::{Alphabet, Letter, Limits, Presentation, Word};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn genus2() -> Presentation {
    Presentation::parse("generators: a b c d\nrelators: abABcdCD\n").unwrap()
}

fn letter_word(letters: &[Letter], picks: &[usize]) -> Word {
    Word::from_letters(picks.iter().map(|&i| letters[i % letters.len()]).collect())
}

fn random_reduced(rng: &mut impl Rng, alphabet: &Alphabet, max_len: usize) -> Word {
    let letters = alphabet.letters();
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::new();
    while w.len() < len {
        let l = *letters.choose(rng).unwrap();
        if w.last() != Some(l.inverse()) {
            w.push(l);
        }
    }
    w
}

/// Normal form in `Z * Z/2` for `<a, b | abab>`, rewriting `b = a⁻¹c` with
/// `c = ab` of order two.
fn free_product_trivial(w: &Word) -> bool {
    let mut stack: Vec<char> = Vec::new();
    let mut push = |x: char| {
        let cancels = matches!((stack.last(), x), (Some('a'), 'A') | (Some('A'), 'a') | (Some('c'), 'c'));
        if cancels {
            stack.pop();
        } else {
            stack.push(x);
        }
    };
    for l in w.letters() {
        match l.to_char() {
            'a' => push('a'),
            'A' => push('A'),
            'b' => {
                push('A');
                push('c');
            }
            'B' => {
                push('c');
                push('a');
            }
            other => panic!("unexpected letter {other}"),
        }
    }
    stack.is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugated_relator_products_are_trivial(
        parts in proptest::collection::vec((proptest::collection::vec(0usize..8, 0..5), 0usize..16), 1..4)
    ) {
        let p = genus2();
        let s = symmetrize(&p);
        let letters = p.alphabet().letters();
        let mut w = Word::new();
        for (conj, r) in &parts {
            let u = letter_word(&letters, conj);
            w = w.mul(&u).mul(&s.words()[*r]).mul(&u.inverse());
        }
        let t = dehn_reduce(&w, &s);
        prop_assert!(t.is_trivial(), "{} did not reduce", w);
        prop_assert!(t.steps.len() <= w.free_reduced().len());
    }

    #[test]
    fn dehn_steps_strictly_shorten(picks in proptest::collection::vec(0usize..8, 0..40)) {
        let p = genus2();
        let s = symmetrize(&p);
        let w = letter_word(&p.alphabet().letters(), &picks).free_reduced();
        let t = dehn_reduce(&w, &s);
        let mut len = w.len();
        for step in &t.steps {
            prop_assert!(step.result.len() < len);
            len = step.result.len();
        }
        prop_assert!(t.steps.len() <= w.len());
    }

    #[test]
    fn dehn_agrees_with_free_product_normal_form(picks in proptest::collection::vec(0usize..4, 0..16)) {
        let p = Presentation::parse("generators: a b\nrelators: abab").unwrap();
        let oracle = DehnOracle::for_presentation(&p);
        let w = letter_word(&p.alphabet().letters(), &picks);
        prop_assert_eq!(oracle.is_trivial(&w), free_product_trivial(&w), "word {}", w);
    }
}

#[test]
fn free_product_oracle_sanity() {
    for (w, trivial) in [("abab", true), ("BABA", true), ("ab", false), ("abaB", false), ("aBAb", false)] {
        assert_eq!(free_product_trivial(&Word::parse(w).unwrap()), trivial, "{w}");
    }
}

#[test]
fn genus_two_spheres_are_free_until_half_a_relator() {
    let oracle = DehnOracle::for_presentation(&genus2());
    let ball = build_ball(&oracle, 4, &Limits::default()).unwrap();
    // Sphere sizes 8·7^(k-1) up to radius 3; at radius 4 the eight pairs of
    // relator halves are identified.
    assert_eq!(ball.layer_counts(), vec![1, 8, 56, 392, 2736]);
}

#[test]
fn folding_is_confluent() {
    let alphabet = Alphabet::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=3)).map(|_| random_reduced(&mut rng, &alphabet, 5)).collect();
        let reference = SubgroupGraph::fold(&gens);
        assert!(reference.is_folded_core());
        let mut order: Vec<usize> = (0..SubgroupGraph::wedge_edge_count(&gens)).collect();
        for _ in 0..4 {
            order.shuffle(&mut rng);
            assert_eq!(SubgroupGraph::fold_in_order(&gens, &order), reference);
        }
    }
}

#[test]
fn folding_oracle_is_closed_under_products() {
    let alphabet = Alphabet::standard(2);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=3)).map(|_| random_reduced(&mut rng, &alphabet, 4)).collect();
        let graph = SubgroupGraph::fold(&gens);
        let sample = |rng: &mut ChaCha8Rng| {
            (0..rng.gen_range(0..4)).fold(Word::new(), |acc, _| {
                let g = gens.choose(rng).unwrap();
                acc.mul(&if rng.gen_bool(0.5) { g.clone() } else { g.inverse() })
            })
        };
        let (u, v) = (sample(&mut rng), sample(&mut rng));
        assert!(graph.oracle_member(&u) && graph.oracle_member(&v));
        assert!(graph.oracle_member(&u.mul(&v)));
    }
}

#[test]
fn membership_agrees_with_folding() {
    let alphabet = Alphabet::standard(2);
    let f2 = FreeReduction::new(alphabet.clone());
    let ball = build_ball(&f2, 6, &Limits::default()).unwrap();
    let bm = BallMetric::new(&ball).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let gens: Vec<Word> = (0..rng.gen_range(1..=3))
            .map(|_| loop {
                let w = random_reduced(&mut rng, &alphabet, 4);
                if !w.is_empty() {
                    break w;
                }
            })
            .collect();
        let mut graph = SubgroupGraph::fold(&gens);
        let members: Vec<usize> = (0..ball.len()).filter(|&v| graph.oracle_member(&ball.vertex(v).word)).collect();
        let k = quasiconvexity_constant(&bm, &members);
        let h = SubgroupSpec::new(gens.clone(), Some(k)).unwrap();
        let mut metric = Metric::new(&f2, Limits::default());
        let s = build_nielsen_set(&h, &mut metric, ConstructionMode::OracleFilter, Some(&mut graph)).unwrap();
        for x in s.elements() {
            assert!(s.contains(&x.inverse()));
            assert!(x.len() <= 2 * k as usize + 1);
        }
        for _ in 0..5 {
            let g = random_reduced(&mut rng, &alphabet, 8);
            let verdict = decide_membership(&g, &s, &mut metric).unwrap();
            assert_eq!(verdict.is_member(), graph.oracle_member(&g), "H = {gens:?}, K = {k}, g = {g}");
            if let Membership::Member(wit) = verdict {
                assert!(wit.verify(&g, &f2));
                assert!(wit.len() <= g.len());
            }
        }
    }
}

#[test]
fn generator_product_mode_matches_oracle_filter_in_free_groups() {
    let f2 = FreeReduction::new(Alphabet::standard(2));
    for (gens, k) in [(vec!["ab"], 1), (vec!["a", "baB"], 1), (vec!["aab", "bb"], 2)] {
        let h = SubgroupSpec::new(gens.iter().map(|g| Word::parse(g).unwrap()).collect(), Some(k)).unwrap();
        let mut graph = SubgroupGraph::fold(h.generators());
        let mut m = Metric::new(&f2, Limits::default());
        let exact = build_nielsen_set(&h, &mut m, ConstructionMode::OracleFilter, Some(&mut graph)).unwrap();
        let by_products =
            build_nielsen_set(&h, &mut m, ConstructionMode::GeneratorProduct { depth: 2 * k as usize + 1 }, None).unwrap();
        assert_eq!(exact.elements(), by_products.elements(), "{gens:?}");
    }
}
