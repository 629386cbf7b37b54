//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (SKIP where external data or the extended tier is unavailable).
//! Criterion 6's search half is the extended tier and is ignored by
//! default; run it with `cargo test --release --test acceptance -- --ignored`.

use std::time::{Duration, Instant};

use splitsync::automaton::{random_cnfa, Automaton, StateSet, Symbol};
use splitsync::classes::{
    best_bound, class_bound, dfa_is_aperiodic, is_cyclic, is_focusing, is_monotonic,
    is_one_cluster, is_orientable, is_strongly_eulerian, split_multigraph_degrees, Certificate,
    ClassKind,
};
use splitsync::critical::{
    basic_critical_from_dfa, catalog, census, cerny, cerny_cnfa, critical_dfa_search,
    inverse_split_bruteforce, is_restriction_up_to_iso, symbol_graph,
};
use splitsync::directing::{
    d3_implicit, d3_oracle, d3_via_split, dfa_shortest_sync, verify_d3, DirectingReport,
};
use splitsync::split::full_split;
use splitsync::testing::{
    intro_automaton, random_aperiodic_dfa, random_cyclic, random_focusing, random_monotonic,
    random_one_cluster, random_orientable, random_strongly_eulerian,
};

struct Criterion {
    name: &'static str,
    budget: Duration,
    started: Instant,
}

impl Criterion {
    fn start(name: &'static str, budget: Duration) -> Criterion {
        Criterion {
            name,
            budget,
            started: Instant::now(),
        }
    }

    fn pass(self) {
        let elapsed = self.started.elapsed();
        println!("{}: PASS ({elapsed:.2?})", self.name);
        assert!(
            elapsed <= self.budget,
            "{} exceeded its runtime budget: {elapsed:.2?} > {:?}",
            self.name,
            self.budget
        );
    }

    fn skip(self, why: &str) {
        println!("{}: SKIP ({why})", self.name);
    }
}

fn data_present() -> bool {
    catalog("a4", None).is_ok() && catalog("c4", None).is_ok() && catalog("t42", None).is_ok()
}

fn states(set: StateSet) -> Vec<usize> {
    set.iter().collect()
}

#[test]
fn criterion_1_worked_example() {
    let c = Criterion::start("criterion 1 (worked example)", Duration::from_secs(1));
    let intro = intro_automaton();
    for report in [
        d3_via_split(&intro).unwrap(),
        d3_implicit(&intro).unwrap(),
        d3_oracle(&intro).unwrap(),
    ] {
        assert!(report.directing);
        assert_eq!(report.length, Some(4), "engine {:?}", report.engine);
    }
    // baba: per-state end sets {1,3}, {1,2}, {1,2,3}; synchronizing state 1
    let baba = [1, 0, 1, 0];
    assert_eq!(
        states(intro.apply_word(&baba, StateSet::singleton(1)).unwrap()),
        vec![1, 3]
    );
    assert_eq!(
        states(intro.apply_word(&baba, StateSet::singleton(2)).unwrap()),
        vec![1, 2]
    );
    assert_eq!(
        states(intro.apply_word(&baba, StateSet::singleton(3)).unwrap()),
        vec![1, 2, 3]
    );
    let v = verify_d3(&intro, &baba).unwrap();
    assert!(v.accepted);
    assert!(v.sync_states.contains(1));
    // aabb: synchronizing state 2
    let v = verify_d3(&intro, &[0, 0, 1, 1]).unwrap();
    assert!(v.accepted);
    assert_eq!(states(v.sync_states), vec![2]);
    c.pass();
}

fn agreement(a: &Automaton) -> (bool, Option<usize>) {
    let s = d3_via_split(a).unwrap();
    let i = d3_implicit(a).unwrap();
    let o = d3_oracle(a).unwrap();
    assert_eq!(
        (s.directing, s.length),
        (i.directing, i.length),
        "split vs implicit on {a:?}"
    );
    assert_eq!(
        (i.directing, i.length),
        (o.directing, o.length),
        "implicit vs oracle on {a:?}"
    );
    for r in [&s, &i, &o] {
        check_witness(a, r);
    }
    (i.directing, i.length)
}

fn check_witness(a: &Automaton, report: &DirectingReport) {
    if let Some(w) = &report.witness {
        assert_eq!(w.len(), report.length.unwrap());
        assert!(verify_d3(a, w).unwrap().accepted, "witness rejected on {a:?}");
    }
}

#[test]
fn criterion_2_engine_agreement() {
    let c = Criterion::start("criterion 2 (engine agreement)", Duration::from_secs(120));
    // exhaustive on two states: all nonempty subsets of the 9 symbols
    let symbols = splitsync::testing::all_two_state_symbols();
    let mut exhaustive = 0;
    for mask in 1u32..(1 << 9) {
        let subset: Vec<Symbol> = symbols
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect();
        let a = Automaton::new(2, subset).unwrap();
        agreement(&a);
        exhaustive += 1;
    }
    assert_eq!(exhaustive, 511);
    // seeded random automata on 3 and 4 states
    for n in [3, 4] {
        for seed in 0..1000u64 {
            let symbols = 2 + (seed % 2) as usize;
            let density = [0.15, 0.3, 0.5][(seed % 3) as usize];
            let a = random_cnfa(n, symbols, density, 0xC0DE + seed * 7 + n as u64).unwrap();
            agreement(&a);
        }
    }
    c.pass();
}

#[test]
fn criterion_3_cerny_values() {
    let c = Criterion::start("criterion 3 (cyclic family values)", Duration::from_secs(30));
    for n in 2..=8 {
        let target = (n - 1) * (n - 1);
        assert_eq!(
            dfa_shortest_sync(&cerny(n).unwrap()).unwrap().length,
            Some(target),
            "n = {n}"
        );
        assert_eq!(
            d3_implicit(&cerny_cnfa(n).unwrap()).unwrap().length,
            Some(target),
            "n = {n}"
        );
    }
    c.pass();
}

#[test]
fn criterion_4_two_state_census() {
    let c = Criterion::start("criterion 4 (two-state census)", Duration::from_secs(10));
    let report = census(2).unwrap();
    assert_eq!(report.labeled_total, 33);
    assert_eq!(report.iso_total, 20);
    assert!(report.verified);
    // 6 labeled / 4 isomorphism classes of critical DFAs
    let search = critical_dfa_search(2, None).unwrap();
    assert_eq!(search.labeled_total, 6);
    assert_eq!(search.classes.len(), 4);
    // the three-symbol DFA plus identity admits 16 + 1 inverse splits,
    // including the fully nondeterministic single-symbol automaton
    let d = Automaton::new(
        2,
        vec![
            Symbol::from_map(&[1, 1]).unwrap(),
            Symbol::from_map(&[2, 2]).unwrap(),
            Symbol::from_map(&[2, 1]).unwrap(),
        ],
    )
    .unwrap()
    .add_identity();
    let inverse = inverse_split_bruteforce(&d).unwrap();
    assert_eq!(inverse.len(), 17);
    let chaos = Automaton::new(
        2,
        vec![Symbol::new(vec![StateSet::full(2), StateSet::full(2)]).unwrap()],
    )
    .unwrap();
    assert!(inverse.iter().any(|x| x == &chaos));
    c.pass();
}

#[test]
fn criterion_5_three_state_census() {
    let c = Criterion::start("criterion 5 (three-state census)", Duration::from_secs(300));
    let search = critical_dfa_search(3, None).unwrap();
    assert_eq!(search.classes.len(), 15);
    let maximal: Vec<&Automaton> = search
        .classes
        .iter()
        .map(|cl| &cl.automaton)
        .filter(|a| a.symbol_count() == 5)
        .collect();
    assert_eq!(maximal.len(), 1);
    for class in &search.classes {
        assert!(is_restriction_up_to_iso(&class.automaton, maximal[0]));
    }
    let plus = maximal[0].add_identity();
    assert_eq!(symbol_graph(&plus).unwrap().edges.len(), 3);

    let report = census(3).unwrap();
    let mut counts: Vec<usize> = report.classes.iter().map(|cl| cl.cnfas.len()).collect();
    counts.sort_unstable();
    let mut expected = vec![8, 4, 4, 4, 2, 8, 4, 2, 2, 1, 2, 4, 2, 2, 1];
    expected.sort_unstable();
    assert_eq!(counts, expected);
    assert_eq!(counts.iter().sum::<usize>(), 50);
    assert_eq!(report.iso_total, 50);
    assert!(report.collisions.is_empty(), "{:?}", report.collisions);
    assert!(report.verified);
    c.pass();
}

#[test]
fn criterion_6_four_state_census() {
    let c = Criterion::start("criterion 6 (four-state census)", Duration::from_secs(300));
    if !data_present() {
        c.skip("four-state catalog data files are not pinned yet");
        return;
    }
    let report = census(4).unwrap();
    assert_eq!(report.classes.len(), 12);
    assert_eq!(report.iso_total, 24);
    assert!(report.verified);
    assert!(report.collisions.is_empty(), "{:?}", report.collisions);

    let c4 = catalog("c4", None).unwrap().automaton;
    let g = symbol_graph(&c4.add_identity()).unwrap();
    assert_eq!(g.edges.len(), 1);
    assert_eq!(basic_critical_from_dfa(&c4).unwrap().len(), 2);

    let t42 = catalog("t42", None).unwrap().automaton;
    let g = symbol_graph(&t42.add_identity()).unwrap();
    assert_eq!(g.edges.len(), 0);
    assert_eq!(basic_critical_from_dfa(&t42).unwrap().len(), 1);

    let a4 = catalog("a4", None).unwrap().automaton;
    let family_total: usize = report
        .classes
        .iter()
        .filter(|cl| is_restriction_up_to_iso(&cl.dfa, &a4))
        .map(|cl| cl.cnfas.len())
        .sum();
    assert_eq!(family_total, 21);
    assert_eq!(family_total + 2 + 1, 24);
    c.pass();
}

#[test]
#[ignore = "extended tier: re-derives the 12 four-state classes by exhaustive search (hours)"]
fn criterion_6_extended_search() {
    let c = Criterion::start(
        "criterion 6 extended (four-state search)",
        Duration::from_secs(6 * 3600),
    );
    let out = critical_dfa_search(4, None).unwrap();
    assert_eq!(out.classes.len(), 12);
    for class in &out.classes {
        assert_eq!(
            dfa_shortest_sync(&class.automaton).unwrap().length,
            Some(9)
        );
    }
    if data_present() {
        let report = census(4).unwrap();
        let mut searched: Vec<_> = out.classes.iter().map(|cl| cl.canonical.clone()).collect();
        let mut pinned: Vec<_> = report.classes.iter().map(|cl| cl.canonical.clone()).collect();
        searched.sort();
        pinned.sort();
        assert_eq!(searched, pinned);
    }
    c.pass();
}

#[test]
fn criterion_7_five_and_six_states() {
    let c = Criterion::start("criterion 7 (five and six states)", Duration::from_secs(60));
    let roman = match catalog("roman", None) {
        Ok(entry) => entry,
        Err(_) => {
            c.skip("roman/kari data files absent");
            return;
        }
    };
    let kari = match catalog("kari", None) {
        Ok(entry) => entry,
        Err(_) => {
            c.skip("roman/kari data files absent");
            return;
        }
    };
    // load-time verification re-checks these, assert the values anyway
    assert_eq!(roman.expected_length, 16);
    assert_eq!(kari.expected_length, 25);
    assert_eq!(
        dfa_shortest_sync(&roman.automaton).unwrap().length,
        Some(16)
    );
    assert_eq!(dfa_shortest_sync(&kari.automaton).unwrap().length, Some(25));
    for a in [&roman.automaton, &kari.automaton] {
        let g = symbol_graph(&a.add_identity()).unwrap();
        assert_eq!(g.edges.len(), 0, "the adjoined graph must be empty");
    }
    let five = census(5).unwrap();
    assert_eq!(five.iso_total, 3);
    assert!(five.verified);
    let six = census(6).unwrap();
    assert_eq!(six.iso_total, 3);
    assert!(six.verified);
    c.pass();
}

/// Class members to exercise in criterion 8, with their class kind.
fn class_members() -> Vec<(ClassKind, Automaton)> {
    let mut out = Vec::new();
    for seed in 0..500u64 {
        let n = 3 + (seed % 3) as usize; // 3..=5
        out.push((ClassKind::Cyclic, random_cyclic(n, seed)));
        out.push((ClassKind::OneCluster, random_one_cluster(n, seed)));
        out.push((ClassKind::Monotonic, random_monotonic(n, 2, seed)));
        out.push((ClassKind::Orientable, random_orientable(n, 2, seed)));
        out.push((ClassKind::StronglyEulerian, random_strongly_eulerian(4, 2, seed)));
        if seed % 2 == 0 {
            out.push((ClassKind::Focusing, random_focusing(n, 2, seed)));
        } else {
            out.push((ClassKind::Focusing, random_aperiodic_dfa(n, seed)));
        }
    }
    // catalog members
    for n in 2..=8 {
        out.push((ClassKind::Cyclic, cerny(n).unwrap()));
        out.push((ClassKind::Cyclic, cerny_cnfa(n).unwrap()));
    }
    out
}

fn split_class_holds(kind: ClassKind, split: &splitsync::split::SplitResult) -> bool {
    let dfa = &split.automaton;
    match kind {
        ClassKind::Cyclic => is_cyclic(dfa).is_member(),
        ClassKind::OneCluster => is_one_cluster(dfa).is_member(),
        ClassKind::Monotonic => is_monotonic(dfa).unwrap().is_member(),
        ClassKind::Orientable => is_orientable(dfa).unwrap().is_member(),
        // counted with one edge per (split symbol, containing original)
        ClassKind::StronglyEulerian => split_multigraph_degrees(split).unwrap().eulerian,
        ClassKind::Focusing => dfa_is_aperiodic(dfa).unwrap(),
    }
}

fn detect(kind: ClassKind, a: &Automaton) -> splitsync::classes::ClassVerdict {
    match kind {
        ClassKind::Cyclic => is_cyclic(a),
        ClassKind::OneCluster => is_one_cluster(a),
        ClassKind::Monotonic => is_monotonic(a).unwrap(),
        ClassKind::Orientable => is_orientable(a).unwrap(),
        ClassKind::StronglyEulerian => is_strongly_eulerian(a),
        ClassKind::Focusing => is_focusing(a),
    }
}

#[test]
fn criterion_8_class_preservation() {
    let c = Criterion::start("criterion 8 (class preservation)", Duration::from_secs(120));
    let mut degree_formula_checked = 0;
    for (kind, a) in class_members() {
        let verdict = detect(kind, &a);
        assert!(
            verdict.is_member(),
            "generator for {kind:?} produced a non-member: {a:?}"
        );
        let split = full_split(&a).unwrap();
        assert!(
            split_class_holds(kind, &split),
            "{kind:?} not preserved by the split on {a:?}"
        );
        // bound soundness for directing members
        let report = d3_implicit(&a).unwrap();
        if report.directing {
            let bound = if kind == ClassKind::Focusing {
                if !splitsync::classes::is_strongly_connected_underlying(&a) {
                    continue;
                }
                class_bound(ClassKind::Focusing, a.n() as u64)
            } else {
                class_bound(kind, a.n() as u64)
            };
            assert!(
                report.length.unwrap() as u64 <= bound,
                "{kind:?} bound {bound} violated by {a:?} with d3 = {:?}",
                report.length
            );
        }
        // degree formula for regular strongly Eulerian members
        if kind == ClassKind::StronglyEulerian && degree_formula_checked < 25 {
            if let Some(Certificate::StronglyEulerian { degrees }) = &verdict.certificate {
                if degrees.iter().all(|d| d.is_some()) {
                    let n = a.n() as u64;
                    let expected: u64 = degrees
                        .iter()
                        .map(|d| (d.unwrap() as u64).pow(n as u32))
                        .sum();
                    let split_degrees = split_multigraph_degrees(&split).unwrap();
                    assert!(split_degrees.eulerian);
                    assert!(split_degrees
                        .in_degrees
                        .iter()
                        .chain(&split_degrees.out_degrees)
                        .all(|&d| d as u64 == expected));
                    degree_formula_checked += 1;
                }
            }
        }
    }
    assert!(
        degree_formula_checked >= 3,
        "need at least 3 degree-formula checks, got {degree_formula_checked}"
    );
    c.pass();
}

#[test]
fn criterion_9_aperiodicity_counterexamples() {
    let c = Criterion::start(
        "criterion 9 (aperiodicity counterexamples)",
        Duration::from_secs(1),
    );
    // the all-images automaton collapses trivially but its split contains
    // the swap, so the split is not aperiodic
    let chaos = Automaton::new(
        2,
        vec![Symbol::new(vec![StateSet::full(2), StateSet::full(2)]).unwrap()],
    )
    .unwrap();
    let split = full_split(&chaos).unwrap().automaton;
    assert!(!dfa_is_aperiodic(&split).unwrap());

    // 1a = {1,2}, 2a = {2}: the collapsing hypothesis fails, yet the split
    // is aperiodic
    let half = Automaton::new(
        2,
        vec![Symbol::new(vec![StateSet::from_states([1, 2]), StateSet::singleton(2)]).unwrap()],
    )
    .unwrap();
    assert!(!is_focusing(&half).is_member());
    let split = full_split(&half).unwrap().automaton;
    assert!(dfa_is_aperiodic(&split).unwrap());
    c.pass();
}

#[test]
fn criterion_10_split_algebra() {
    let c = Criterion::start("criterion 10 (split algebra)", Duration::from_secs(60));
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    for seed in 0..500u64 {
        let n = 2 + (seed % 3) as usize; // 2..=4
        let a = random_cnfa(n, 2, 0.35, 0xA11 + seed).unwrap();
        let split = full_split(&a).unwrap().automaton;
        // idempotence
        assert_eq!(full_split(&split).unwrap().automaton, split);
        // order invariance: resolving choices one at a time in 10 random
        // orders always lands on the same DFA
        for run in 0..10u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed * 31 + run);
            let mut cur = a.clone();
            loop {
                let choices: Vec<(usize, usize)> = cur
                    .symbols()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, sym)| {
                        (1..=cur.n())
                            .filter(move |&q| sym.image(q).len() > 1)
                            .map(move |q| (q, i))
                    })
                    .collect();
                if choices.is_empty() {
                    break;
                }
                let (q, i) = choices[rng.random_range(0..choices.len())];
                cur = splitsync::split::split_at(&cur, q, i).unwrap();
            }
            assert_eq!(cur, split, "order-dependent split on {a:?}");
        }
    }
    // membership characterization, exhaustive over deterministic symbols
    // on 3 states
    for seed in 0..40u64 {
        let a = random_cnfa(3, 2, 0.4, 0xBEEF + seed).unwrap();
        let gamma = full_split(&a).unwrap().automaton;
        for t1 in 1..=3 {
            for t2 in 1..=3 {
                for t3 in 1..=3 {
                    let b = Symbol::from_map(&[t1, t2, t3]).unwrap();
                    assert_eq!(
                        splitsync::split::gamma_contains(&a, &b).unwrap(),
                        gamma.position_of(&b).is_some()
                    );
                }
            }
        }
    }
    c.pass();
}

#[test]
fn bound_sanity_on_directing_members() {
    // every directing automaton in a broad random corpus satisfies the two
    // general bounds
    for seed in 0..300u64 {
        let n = 2 + (seed % 3) as usize;
        let a = random_cnfa(n, 2, 0.3, 0x9A9 + seed).unwrap();
        let report = d3_implicit(&a).unwrap();
        if report.directing {
            let len = report.length.unwrap() as u64;
            let n = n as u64;
            assert!(len <= (n * n * n - n) / 6);
            assert!(len <= n * (n - 1) * (n - 2) / 2 + 1);
            let bounds = best_bound(&a);
            for b in &bounds.bounds {
                assert!(len <= b.value, "bound {} violated on {a:?}", b.name);
            }
        }
    }
}
