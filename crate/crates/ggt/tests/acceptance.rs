//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use ggt_core::cayley::{
    build_ball, check_quasiconvex, check_slim, check_triangle, quasiconvexity_constant, BallMetric, EqualityOracle,
    ExponentVector, FreeReduction, Metric, QcVerdict, SlimVerdict,
};
use ggt_core::conjugate::{conjugate_member, element_order, finiteness_verdict, ElementOrder, IntersectionVerdict};
use ggt_core::dehn::{dehn_reduce, symmetrize, DehnOracle};
use ggt_core::finite_enum::{brady_bound, enumerate_groups, MultTable, SmallGroups, DEFAULT_ORDER_CAP};
use ggt_core::free_oracle::SubgroupGraph;
use ggt_core::subgroup::{
    build_nielsen_set, decide_membership, verify_weak_nielsen, ConstructionMode, Membership, NielsenDecider,
    NielsenSet, SubgroupSpec,
};
use ggt_core::{Alphabet, Error, Limits, Presentation, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.2?}, limit {limit:?}", start.elapsed()))
}

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn genus2() -> Presentation {
    Presentation::parse("generators: a b c d\nrelators: abABcdCD\n").unwrap()
}

fn random_reduced(rng: &mut impl Rng, alphabet: &Alphabet, min_len: usize, max_len: usize) -> Word {
    let letters = alphabet.letters();
    let len = rng.gen_range(min_len..=max_len);
    let mut word = Word::new();
    while word.len() < len {
        let l = *letters.choose(rng).unwrap();
        if word.last() != Some(l.inverse()) {
            word.push(l);
        }
    }
    word
}

fn product_of_generators(rng: &mut impl Rng, gens: &[Word], max_factors: usize) -> Word {
    (0..rng.gen_range(1..=max_factors)).fold(Word::new(), |acc, _| {
        let g = gens.choose(rng).unwrap();
        acc.mul(&if rng.gen_bool(0.5) { g.clone() } else { g.inverse() })
    })
}

fn dehn_termination() -> Verdict {
    let start = Instant::now();
    let p = genus2();
    let s = symmetrize(&p);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut max_steps = 0;
    for i in 0..1000 {
        // Every other word has relator material spliced in so reductions occur.
        let mut word = random_reduced(&mut rng, p.alphabet(), 0, 40);
        if i % 2 == 1 {
            while word.len() < 40 {
                let r = s.words().choose(&mut rng).unwrap();
                let cut = rng.gen_range(0..=word.len());
                let next = word.slice(0..cut).concat(r).concat(&word.slice(cut..word.len())).free_reduced();
                if next.len() > 40 {
                    break;
                }
                word = next;
            }
        }
        let trace = dehn_reduce(&word, &s);
        ensure(trace.steps.len() <= word.len(), || format!("{word}: {} steps", trace.steps.len()))?;
        let mut len = word.len();
        for step in &trace.steps {
            ensure(step.result.len() < len, || format!("{word}: step does not shorten"))?;
            len = step.result.len();
        }
        max_steps = max_steps.max(trace.steps.len());
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("1000 words, at most {max_steps} steps"))
}

fn word_problem_soundness() -> Verdict {
    let p = genus2();
    let oracle = DehnOracle::for_presentation(&p);
    let s = oracle.relators().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let mut word = Word::new();
        for _ in 0..rng.gen_range(1..=4) {
            let u = random_reduced(&mut rng, p.alphabet(), 0, 5);
            let r = s.words().choose(&mut rng).unwrap();
            word = word.concat(&u).concat(r).concat(&u.inverse());
        }
        ensure(oracle.is_trivial(&word), || format!("relator product {word} reported nontrivial"))?;
    }
    let ball = build_ball(&oracle, 3, &Limits::default()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    while checked < 200 {
        let word = random_reduced(&mut rng, p.alphabet(), 1, 6);
        let cut = word.len().min(3);
        let (u, v) = (word.slice(0..cut), word.slice(cut..word.len()));
        let (x, y) = (ball.locate(&u), ball.locate(&v.inverse()));
        if x.is_none() || x == y {
            continue;
        }
        checked += 1;
        ensure(!oracle.is_trivial(&word), || format!("{word} is not ball-equal to 1 but reported trivial"))?;
    }
    Ok("200 relator products trivial, 200 ball-distinct words nontrivial".into())
}

fn brady_formula() -> Verdict {
    let cases = [((2, 1), 65), ((1, 0), 3), ((2, 0), 5)];
    for ((x, d), c) in cases {
        let got = brady_bound(x, d).map_err(|e| e.to_string())?.c;
        ensure(got == c, || format!("brady_bound({x},{d}) = {got}, expected {c}"))?;
    }
    Ok("65, 3, 5".into())
}

fn group_enumeration() -> Verdict {
    let start = Instant::now();
    let groups = enumerate_groups(8, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
    let counts: Vec<usize> = (1..=8).map(|n| groups.iter().filter(|g| g.order() == n).count()).collect();
    ensure(counts == [1, 1, 1, 2, 1, 2, 1, 5], || format!("counts {counts:?}"))?;
    for g in &groups {
        MultTable::new(g.order(), g.entries().to_vec()).map_err(|e| e.to_string())?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("counts {counts:?}"))
}

fn membership_equivalence() -> Verdict {
    let alphabet = Alphabet::standard(2);
    let f2 = FreeReduction::new(alphabet.clone());
    let ball = build_ball(&f2, 6, &Limits::default()).map_err(|e| e.to_string())?;
    let bm = BallMetric::new(&ball).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut members, mut max_k) = (0, 0);
    for case in 0..300 {
        let gens: Vec<Word> =
            (0..rng.gen_range(1..=3)).map(|_| random_reduced(&mut rng, &alphabet, 1, 4)).collect();
        let mut graph = SubgroupGraph::fold(&gens);
        let in_h: Vec<usize> = (0..ball.len()).filter(|&v| graph.oracle_member(&ball.vertex(v).word)).collect();
        let k = quasiconvexity_constant(&bm, &in_h);
        ensure(matches!(check_quasiconvex(&bm, &in_h, k), QcVerdict::NoViolation { .. }), || {
            format!("case {case}: K = {k} not confirmed by qc-check")
        })?;
        max_k = max_k.max(k);
        let h = SubgroupSpec::new(gens.clone(), Some(k)).map_err(|e| e.to_string())?;
        let mut metric = Metric::new(&f2, Limits::default());
        let s = build_nielsen_set(&h, &mut metric, ConstructionMode::OracleFilter, Some(&mut graph))
            .map_err(|e| e.to_string())?;
        // Half the test words are drawn from H so both verdicts occur.
        let g = if case % 2 == 0 {
            random_reduced(&mut rng, &alphabet, 0, 8)
        } else {
            loop {
                let x = product_of_generators(&mut rng, &gens, 4);
                if x.len() <= 8 {
                    break x;
                }
            }
        };
        let verdict = decide_membership(&g, &s, &mut metric).map_err(|e| e.to_string())?;
        let expected = graph.oracle_member(&g);
        ensure(verdict.is_member() == expected, || {
            format!("case {case}: H = {gens:?}, K = {k}, g = {g}: search says {}, folding says {expected}", verdict.is_member())
        })?;
        if let Membership::Member(wit) = verdict {
            members += 1;
            ensure(wit.len() <= wit.word.len() && wit.verify(&g, &f2), || format!("case {case}: witness fails"))?;
        }
    }
    Ok(format!("300/300 agree ({members} members, K up to {max_k})"))
}

fn weak_nielsen() -> Verdict {
    let f2 = FreeReduction::new(Alphabet::standard(2));
    let ball = build_ball(&f2, 6, &Limits::default()).map_err(|e| e.to_string())?;
    let bm = BallMetric::new(&ball).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut summary = Vec::new();
    for gens in [vec![w("ab")], vec![w("a"), w("baB")]] {
        let mut graph = SubgroupGraph::fold(&gens);
        let in_h: Vec<usize> = (0..ball.len()).filter(|&v| graph.oracle_member(&ball.vertex(v).word)).collect();
        let k = quasiconvexity_constant(&bm, &in_h);
        let h = SubgroupSpec::new(gens.clone(), Some(k)).map_err(|e| e.to_string())?;
        let mut metric = Metric::new(&f2, Limits::default());
        let s: NielsenSet = build_nielsen_set(&h, &mut metric, ConstructionMode::OracleFilter, Some(&mut graph))
            .map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let x = product_of_generators(&mut rng, &gens, 6);
            let geodesic = metric.geodesic_word(&x).map_err(|e| e.to_string())?;
            let wit = verify_weak_nielsen(&s, &x, &geodesic, &mut metric).map_err(|e| e.to_string())?;
            let wit = wit.ok_or_else(|| format!("no factorization of {geodesic} for {gens:?}"))?;
            ensure(wit.verify(&x, &f2), || format!("witness for {geodesic} fails"))?;
        }
        summary.push(format!("{} (K = {k}, |S| = {})", gens.iter().map(Word::to_string).collect::<Vec<_>>().join(","), s.len()));
    }
    Ok(format!("100 elements each of {}", summary.join(" and ")))
}

fn slim_and_quasiconvex() -> Verdict {
    let limits = Limits::default();
    let f2 = FreeReduction::new(Alphabet::standard(2));
    for r in 0..=4 {
        let ball = build_ball(&f2, r, &limits).map_err(|e| e.to_string())?;
        let m = BallMetric::new(&ball).map_err(|e| e.to_string())?;
        let verdict = check_slim(&m, 0, &limits).map_err(|e| e.to_string())?;
        ensure(matches!(verdict, SlimVerdict::NoViolation { .. }), || format!("F2 not 0-slim at R = {r}"))?;
    }
    let z2 = ExponentVector::new(Alphabet::standard(2));
    let ball = build_ball(&z2, 2, &limits).map_err(|e| e.to_string())?;
    let m = BallMetric::new(&ball).map_err(|e| e.to_string())?;
    let first = check_slim(&m, 0, &limits).map_err(|e| e.to_string())?;
    ensure(matches!(first, SlimVerdict::Violation(_)), || "Z^2 passed at δ = 0, R = 2".into())?;
    let corners = [w(""), w("b"), w("ab")].map(|c| ball.locate(&c).unwrap());
    let witness = check_triangle(&m, corners, 0, &limits).map_err(|e| e.to_string())?;
    ensure(witness.is_some(), || "triangle (1, b, ab) is 0-slim".into())?;

    let ball = build_ball(&f2, 4, &limits).map_err(|e| e.to_string())?;
    let m = BallMetric::new(&ball).map_err(|e| e.to_string())?;
    let graph = SubgroupGraph::fold(&[w("ab")]);
    let in_h: Vec<usize> = (0..ball.len()).filter(|&v| graph.oracle_member(&ball.vertex(v).word)).collect();
    ensure(matches!(check_quasiconvex(&m, &in_h, 0), QcVerdict::Violation(_)), || "<ab> passed at K = 0".into())?;
    ensure(matches!(check_quasiconvex(&m, &in_h, 1), QcVerdict::NoViolation { .. }), || "<ab> failed at K = 1".into())?;
    Ok("F2 0-slim for R <= 4; Z^2 violates at R = 2 incl. (1, b, ab); <ab> K=0 fails, K=1 passes".into())
}

fn conjugate_verdicts() -> Verdict {
    let f2 = FreeReduction::new(Alphabet::standard(2));
    let limits = Limits::default();
    let bound = brady_bound(2, 0).map_err(|e| e.to_string())?;
    let decider = |gens: &[&str], k: u32| -> Result<NielsenDecider<'_>, String> {
        let h = SubgroupSpec::new(gens.iter().map(|g| w(g)).collect(), Some(k)).map_err(|e| e.to_string())?;
        let mut graph = SubgroupGraph::fold(h.generators());
        let mut m = Metric::new(&f2, limits);
        let s = build_nielsen_set(&h, &mut m, ConstructionMode::OracleFilter, Some(&mut graph)).map_err(|e| e.to_string())?;
        Ok(NielsenDecider::new(s, Metric::new(&f2, limits)))
    };

    let start = Instant::now();
    let mut h = decider(&["a"], 0)?;
    let r = finiteness_verdict(&w("b"), 4, bound, &mut h, &mut Metric::new(&f2, limits), &mut SmallGroups::default())
        .map_err(|e| e.to_string())?;
    match &r.verdict {
        IntersectionVerdict::Finite { table, class: 0 } if table.order() == 1 => {}
        other => return Err(format!("<a>, g = b: {other:?}")),
    }
    within(start, Duration::from_secs(30))?;

    let start = Instant::now();
    let mut h = decider(&["a", "Bab"], 1)?;
    let r = finiteness_verdict(&w("b"), 4, bound, &mut h, &mut Metric::new(&f2, limits), &mut SmallGroups::default())
        .map_err(|e| e.to_string())?;
    let IntersectionVerdict::Infinite { witness } = &r.verdict else {
        return Err(format!("<a, Bab>, g = b: {:?}", r.verdict));
    };
    let mut graph = SubgroupGraph::fold(&[w("a"), w("Bab")]);
    ensure(graph.oracle_member(witness), || format!("witness {witness} not in H"))?;
    ensure(conjugate_member(witness, &w("b"), &mut graph).unwrap(), || format!("witness {witness} not in b⁻¹Hb"))?;
    ensure(element_order(witness, bound.c, &f2, &limits).unwrap() == ElementOrder::Infinite, || {
        format!("witness {witness} has finite order")
    })?;
    within(start, Duration::from_secs(30))?;

    let start = Instant::now();
    let mut h = decider(&["a"], 0)?;
    let err = finiteness_verdict(&w("a"), 4, bound, &mut h, &mut Metric::new(&f2, limits), &mut SmallGroups::default());
    ensure(matches!(err, Err(Error::Precondition(_))), || format!("g = a in H: {err:?}"))?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("finite trivial, infinite with witness {witness}, precondition error"))
}

fn presentations() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presentations")
}

fn determinism() -> Verdict {
    let dir = presentations();
    let p = |name: &str| dir.join(name).display().to_string();
    let invocations: Vec<(Vec<String>, Option<&str>)> = vec![
        (vec!["brady".into(), "--generators".into(), "2".into(), "--delta".into(), "1".into()], Some("C = 65")),
        (vec!["wp".into(), "--presentation".into(), p("genus2.grp"), "--word".into(), "abABcdCD".into()], Some("trivial")),
        (vec!["wp".into(), "--presentation".into(), p("genus2.grp"), "--word".into(), "abABcdCDa".into(), "--trace".into()], None),
        (
            vec!["member", "--presentation", &p("free2.grp"), "--subgroup", "ab", "--k", "1", "--word", "aab"]
                .into_iter()
                .map(String::from)
                .collect(),
            Some("non-member"),
        ),
        (
            vec!["member", "--presentation", &p("free2.grp"), "--subgroup", "ab", "--k", "1", "--word", "abab", "--witness"]
                .into_iter()
                .map(String::from)
                .collect(),
            Some("member"),
        ),
        (vec!["reduce".into(), "--word".into(), "abBA".into()], Some("1")),
        (vec!["ball".into(), "--presentation".into(), p("genus2.grp"), "--radius".into(), "2".into()], None),
        (
            vec!["slim-check", "--presentation", &p("z2.grp"), "--oracle", "abelian", "--radius", "2", "--delta", "0"]
                .into_iter()
                .map(String::from)
                .collect(),
            None,
        ),
        (
            vec!["qc-check", "--presentation", &p("free2.grp"), "--subgroup", "ab", "--k", "1", "--radius", "4"]
                .into_iter()
                .map(String::from)
                .collect(),
            None,
        ),
        (vec!["enum-groups".into(), "--max-order".into(), "6".into(), "--tables".into()], None),
        (
            vec!["nielsen-set", "--presentation", &p("free2.grp"), "--subgroup", "a,baB", "--k", "1"]
                .into_iter()
                .map(String::from)
                .collect(),
            None,
        ),
        (vec!["oracle-member".into(), "--subgroup".into(), "a,baB".into(), "--word".into(), "baaB".into()], Some("member")),
        (
            vec!["conj", "--presentation", &p("free2.grp"), "--subgroup", "a,Bab", "--k", "1", "--element", "b", "--radius", "4"]
                .into_iter()
                .map(String::from)
                .collect(),
            None,
        ),
        (vec!["wp".into(), "--presentation".into(), p("missing.grp"), "--word".into(), "a".into()], None),
    ];
    let bin = env!("CARGO_BIN_EXE_ggt");
    for (args, expected_first_line) in &invocations {
        let run = || Command::new(bin).args(args).env_remove(ggt::MAX_STATES_ENV).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure(a == b, || format!("ggt {} differs between runs", args.join(" ")))?;
        if let Some(line) = expected_first_line {
            let out = String::from_utf8_lossy(&a.stdout);
            ensure(out.lines().next() == Some(*line), || format!("ggt {}: first line {:?}", args.join(" "), out.lines().next()))?;
        }
    }
    Ok(format!("{} invocations byte-identical across two runs", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Dehn termination bound", dehn_termination),
        ("word-problem soundness", word_problem_soundness),
        ("Brady formula", brady_formula),
        ("finite-group enumeration", group_enumeration),
        ("membership oracle equivalence", membership_equivalence),
        ("weakly Nielsen property", weak_nielsen),
        ("slimness and quasiconvexity checks", slim_and_quasiconvex),
        ("conjugate-intersection verdicts", conjugate_verdicts),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
