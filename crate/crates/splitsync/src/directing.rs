//! Exact shortest directing word lengths and witnesses.
//!
//! A word `w` directs an automaton when some state `q_s` satisfies
//! `q_s ∈ qw` for every state `q`; for a DFA this is the classical
//! synchronizing word. Three interchangeable engines compute the exact
//! shortest length:
//!
//! - [`d3_via_split`] materializes the split DFA and runs the subset BFS on
//!   it (the length is preserved by the split);
//! - [`d3_implicit`] runs the same subset BFS without materializing the
//!   split alphabet, expanding choice functions on the fly;
//! - [`d3_oracle`] works straight off the definition, tracking the tuple of
//!   per-state reachable sets; it is exponential and only meant as an
//!   independent cross-check for very small automata.
//!
//! BFS distance over subsets is well defined because the distance of a
//! subset depends on the subset alone; witnesses are reconstructed from
//! parent links and are deterministic for a fixed automaton.

use std::collections::VecDeque;

use crate::automaton::{Automaton, State, StateSet, Word};
use crate::split::full_split_with;
use crate::{Budget, Error, Result};

/// Which engine produced a [`DirectingReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    DfaBfs,
    ViaSplit,
    Implicit,
    Oracle,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::DfaBfs => "dfa-bfs",
            EngineKind::ViaSplit => "split",
            EngineKind::Implicit => "implicit",
            EngineKind::Oracle => "oracle",
        }
    }
}

/// Outcome of a shortest-directing-word computation. "Not directing" is a
/// distinguished outcome: `directing == false` comes with no length and no
/// witness, never with length 0.
#[derive(Clone, Debug)]
pub struct DirectingReport {
    pub directing: bool,
    pub length: Option<usize>,
    /// A shortest directing word over the automaton's own symbols.
    pub witness: Option<Word>,
    /// A state contained in `qw` for every `q` when `witness` is applied.
    pub sync_state: Option<State>,
    pub engine: EngineKind,
}

impl DirectingReport {
    fn not_directing(engine: EngineKind) -> DirectingReport {
        DirectingReport {
            directing: false,
            length: None,
            witness: None,
            sync_state: None,
            engine,
        }
    }
}

/// Word verification straight from the definition.
#[derive(Clone, Copy, Debug)]
pub struct Verification {
    pub accepted: bool,
    /// `⋂_q qw`; the word directs the automaton iff this is nonempty.
    pub sync_states: StateSet,
}

/// Evaluate `qw` for every state and intersect.
pub fn verify_d3(a: &Automaton, word: &[usize]) -> Result<Verification> {
    let mut sync = StateSet::full(a.n());
    for q in 1..=a.n() {
        let end = a.apply_word(word, StateSet::singleton(q))?;
        sync = sync.intersection(end);
        if sync.is_empty() {
            break;
        }
    }
    Ok(Verification {
        accepted: !sync.is_empty() || a.n() == 0,
        sync_states: sync,
    })
}

/// Shortest synchronizing word of a DFA by BFS on the subset lattice,
/// starting from the full state set.
pub fn dfa_shortest_sync(d: &Automaton) -> Result<DirectingReport> {
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    let n = d.n();
    let full = StateSet::full(n).bits() as usize;
    // parent[s] = (previous subset, symbol index) on a shortest path
    let mut seen = vec![false; full + 1];
    let mut parent: Vec<(u16, u32)> = vec![(0, 0); full + 1];
    let mut dist = vec![0u32; full + 1];
    let mut queue = VecDeque::new();
    seen[full] = true;
    queue.push_back(StateSet::full(n));
    while let Some(s) = queue.pop_front() {
        if s.is_singleton() || n == 0 {
            return Ok(reconstruct(d, s, &parent, &dist, EngineKind::DfaBfs));
        }
        for (i, sym) in d.symbols().iter().enumerate() {
            let t = sym.apply(s);
            let tb = t.bits() as usize;
            if !seen[tb] {
                seen[tb] = true;
                parent[tb] = (s.bits(), i as u32);
                dist[tb] = dist[s.bits() as usize] + 1;
                queue.push_back(t);
            }
        }
    }
    Ok(DirectingReport::not_directing(EngineKind::DfaBfs))
}

fn reconstruct(
    a: &Automaton,
    target: StateSet,
    parent: &[(u16, u32)],
    dist: &[u32],
    engine: EngineKind,
) -> DirectingReport {
    let full = StateSet::full(a.n());
    let mut word = Vec::with_capacity(dist[target.bits() as usize] as usize);
    let mut cur = target;
    while cur != full {
        let (prev, sym) = parent[cur.bits() as usize];
        word.push(sym as usize);
        cur = StateSet::from_bits(prev);
        if word.len() > dist.len() {
            break; // cycle guard; unreachable for BFS parents
        }
    }
    word.reverse();
    DirectingReport {
        directing: true,
        length: Some(word.len()),
        sync_state: target.min_state(),
        witness: Some(word),
        engine,
    }
}

/// Shortest directing word by materializing the split DFA. The witness is
/// mapped back to the original alphabet by replacing every split symbol
/// with an original symbol containing it.
pub fn d3_via_split(a: &Automaton) -> Result<DirectingReport> {
    d3_via_split_with(a, &Budget::default())
}

pub fn d3_via_split_with(a: &Automaton, budget: &Budget) -> Result<DirectingReport> {
    let split = full_split_with(a, budget)?;
    let mut report = dfa_shortest_sync(&split.automaton)?;
    report.engine = EngineKind::ViaSplit;
    if let Some(word) = report.witness.take() {
        report.witness = Some(
            word.into_iter()
                .map(|idx| split.provenance[idx][0])
                .collect(),
        );
    }
    Ok(report)
}

/// Shortest directing word by subset BFS without materializing the split:
/// the successors of a subset `S` under an original symbol `a` are the
/// images of all choice functions `f` with `f(q) ∈ qa` for `q ∈ S`.
pub fn d3_implicit(a: &Automaton) -> Result<DirectingReport> {
    d3_implicit_with(a, &Budget::default())
}

pub fn d3_implicit_with(a: &Automaton, budget: &Budget) -> Result<DirectingReport> {
    let n = a.n();
    let full = StateSet::full(n).bits() as usize;
    let mut seen = vec![false; full + 1];
    let mut parent: Vec<(u16, u32)> = vec![(0, 0); full + 1];
    let mut dist = vec![0u32; full + 1];
    let mut queue = VecDeque::new();
    seen[full] = true;
    queue.push_back(StateSet::full(n));
    let mut successors: Vec<StateSet> = Vec::new();
    while let Some(s) = queue.pop_front() {
        if s.is_singleton() || n == 0 {
            return Ok(reconstruct(a, s, &parent, &dist, EngineKind::Implicit));
        }
        for (i, sym) in a.symbols().iter().enumerate() {
            let mut count: u64 = 1;
            for q in s.iter() {
                count = count.saturating_mul(sym.image(q).len() as u64);
            }
            if count > budget.choices_per_node {
                return Err(Error::BudgetExceeded {
                    what: "choice functions per subset",
                    needed: count,
                    cap: budget.choices_per_node,
                });
            }
            successors.clear();
            choice_images(sym, s, &mut successors);
            for &t in &successors {
                let tb = t.bits() as usize;
                if !seen[tb] {
                    seen[tb] = true;
                    parent[tb] = (s.bits(), i as u32);
                    dist[tb] = dist[s.bits() as usize] + 1;
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(DirectingReport::not_directing(EngineKind::Implicit))
}

/// All images `{f(q) : q ∈ s}` over choice functions `f(q) ∈ q·sym`,
/// deduplicated, in statewise-lexicographic order of first production.
fn choice_images(sym: &crate::automaton::Symbol, s: StateSet, out: &mut Vec<StateSet>) {
    let states: Vec<State> = s.iter().collect();
    let choices: Vec<Vec<State>> = states.iter().map(|&q| sym.image(q).iter().collect()).collect();
    let mut odometer = vec![0usize; states.len()];
    let mut seen_masks = std::collections::HashSet::new();
    loop {
        let mut img = StateSet::EMPTY;
        for (i, &c) in odometer.iter().enumerate() {
            img.insert(choices[i][c]);
        }
        if seen_masks.insert(img.bits()) {
            out.push(img);
        }
        let mut pos = odometer.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < choices[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// Brute-force engine straight from the definition: BFS over tuples
/// `(S_1..S_n)` with `S_q = q·(word so far)`, accepting when the
/// intersection is nonempty. Limited to `n <= 4`.
pub fn d3_oracle(a: &Automaton) -> Result<DirectingReport> {
    let n = a.n();
    if n > 4 {
        return Err(Error::Unsupported(format!(
            "the definition-level engine tracks (2^n - 1)^n configurations and is limited to 4 states, got {n}"
        )));
    }
    if n == 0 {
        return Ok(DirectingReport {
            directing: true,
            length: Some(0),
            witness: Some(Vec::new()),
            sync_state: None,
            engine: EngineKind::Oracle,
        });
    }
    let base = (1usize << n) - 1; // nonempty masks 1..=base, indexed as mask-1
    let space = base.pow(n as u32);
    let encode = |cfg: &[StateSet]| -> usize {
        cfg.iter()
            .fold(0usize, |acc, s| acc * base + (s.bits() as usize - 1))
    };
    let start: Vec<StateSet> = (1..=n).map(StateSet::singleton).collect();
    let mut seen = vec![false; space];
    let mut parent: Vec<(u32, u16)> = vec![(0, 0); space];
    let mut dist = vec![0u32; space];
    let mut queue = VecDeque::new();
    let s0 = encode(&start);
    seen[s0] = true;
    queue.push_back(start);
    while let Some(cfg) = queue.pop_front() {
        let code = encode(&cfg);
        let inter = cfg.iter().fold(StateSet::full(n), |acc, s| acc.intersection(*s));
        if !inter.is_empty() {
            // reconstruct over configuration parents
            let mut word = Vec::with_capacity(dist[code] as usize);
            let mut cur = code;
            while cur != s0 {
                let (prev, sym) = parent[cur];
                word.push(sym as usize);
                cur = prev as usize;
            }
            word.reverse();
            return Ok(DirectingReport {
                directing: true,
                length: Some(word.len()),
                sync_state: inter.min_state(),
                witness: Some(word),
                engine: EngineKind::Oracle,
            });
        }
        for (i, sym) in a.symbols().iter().enumerate() {
            let next: Vec<StateSet> = cfg.iter().map(|&s| sym.apply(s)).collect();
            let ncode = encode(&next);
            if !seen[ncode] {
                seen[ncode] = true;
                parent[ncode] = (code as u32, i as u16);
                dist[ncode] = dist[code] + 1;
                queue.push_back(next);
            }
        }
    }
    Ok(DirectingReport::not_directing(EngineKind::Oracle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Symbol;
    use crate::testing::intro_automaton;

    fn check_witness(a: &Automaton, report: &DirectingReport) {
        let word = report.witness.as_ref().expect("witness");
        assert_eq!(word.len(), report.length.unwrap());
        let v = verify_d3(a, word).unwrap();
        assert!(v.accepted, "witness rejected for {a:?}");
        assert!(v.sync_states.contains(report.sync_state.unwrap()));
    }

    #[test]
    fn intro_has_directing_length_four_on_all_engines() {
        let intro = intro_automaton();
        for report in [
            d3_via_split(&intro).unwrap(),
            d3_implicit(&intro).unwrap(),
            d3_oracle(&intro).unwrap(),
        ] {
            assert!(report.directing);
            assert_eq!(report.length, Some(4));
            check_witness(&intro, &report);
        }
    }

    #[test]
    fn verify_worked_example_words() {
        let intro = intro_automaton();
        // baba directs with synchronizing state 1
        let v = verify_d3(&intro, &[1, 0, 1, 0]).unwrap();
        assert!(v.accepted);
        assert!(v.sync_states.contains(1));
        // aabb directs with synchronizing state 2
        let v = verify_d3(&intro, &[0, 0, 1, 1]).unwrap();
        assert!(v.accepted);
        assert_eq!(v.sync_states, StateSet::singleton(2));
        // the empty word does not direct two or more states
        let v = verify_d3(&intro, &[]).unwrap();
        assert!(!v.accepted);
    }

    #[test]
    fn dfa_engine_on_cerny_4() {
        let c4 = crate::critical::cerny(4).unwrap();
        let report = dfa_shortest_sync(&c4).unwrap();
        assert_eq!(report.length, Some(9));
        check_witness(&c4, &report);
    }

    #[test]
    fn dfa_engine_rejects_nondeterministic_input() {
        assert!(matches!(
            dfa_shortest_sync(&intro_automaton()),
            Err(Error::NotDeterministic)
        ));
    }

    #[test]
    fn single_state_has_length_zero() {
        let a = Automaton::new(1, vec![Symbol::identity(1)]).unwrap();
        assert_eq!(dfa_shortest_sync(&a).unwrap().length, Some(0));
        assert_eq!(d3_implicit(&a).unwrap().length, Some(0));
        assert_eq!(d3_oracle(&a).unwrap().length, Some(0));
    }

    #[test]
    fn constant_symbol_synchronizes_in_one_step() {
        let d = Automaton::new(2, vec![Symbol::from_map(&[1, 1]).unwrap()]).unwrap();
        assert_eq!(dfa_shortest_sync(&d).unwrap().length, Some(1));
    }

    #[test]
    fn disjoint_sinks_are_not_directing() {
        // two self-loop sinks under every symbol
        let a = Automaton::new(
            2,
            vec![Symbol::identity(2)],
        )
        .unwrap();
        for report in [
            d3_via_split(&a).unwrap(),
            d3_implicit(&a).unwrap(),
            d3_oracle(&a).unwrap(),
        ] {
            assert!(!report.directing);
            assert!(report.length.is_none());
            assert!(report.witness.is_none());
            assert!(report.sync_state.is_none());
        }
    }

    #[test]
    fn split_engine_equals_dfa_engine_on_dfas() {
        let c3 = crate::critical::cerny(3).unwrap();
        let d = dfa_shortest_sync(&c3).unwrap();
        let s = d3_via_split(&c3).unwrap();
        assert_eq!(d.length, s.length);
        assert_eq!(d.length, Some(4));
        let o = d3_oracle(&c3).unwrap();
        assert_eq!(o.length, Some(4));
    }

    #[test]
    fn cerny_cnfa_4_has_length_nine() {
        let c = crate::critical::cerny_cnfa(4).unwrap();
        let report = d3_via_split(&c).unwrap();
        assert_eq!(report.length, Some(9));
        check_witness(&c, &report);
        let report = d3_implicit(&c).unwrap();
        assert_eq!(report.length, Some(9));
        check_witness(&c, &report);
    }

    #[test]
    fn implicit_engine_budget() {
        let chaos = Symbol::new(vec![StateSet::full(5); 5]).unwrap();
        let a = Automaton::new(5, vec![chaos]).unwrap();
        let tight = Budget {
            choices_per_node: 100,
            ..Budget::default()
        };
        assert!(matches!(
            d3_implicit_with(&a, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn oracle_guard() {
        let a = crate::automaton::random_cnfa(5, 2, 0.2, 1).unwrap();
        assert!(matches!(d3_oracle(&a), Err(Error::Unsupported(_))));
    }

    #[test]
    fn engines_agree_on_random_small_cnfas() {
        for seed in 0..60 {
            let a = crate::automaton::random_cnfa(3, 2, 0.35, seed).unwrap();
            let s = d3_via_split(&a).unwrap();
            let i = d3_implicit(&a).unwrap();
            let o = d3_oracle(&a).unwrap();
            assert_eq!((s.directing, s.length), (i.directing, i.length), "{a:?}");
            assert_eq!((s.directing, s.length), (o.directing, o.length), "{a:?}");
            if i.directing {
                check_witness(&a, &i);
                check_witness(&a, &s);
                check_witness(&a, &o);
            }
        }
    }

    #[test]
    fn extension_cannot_lengthen_directing_words() {
        for seed in 100..140 {
            let b = crate::automaton::random_cnfa(3, 2, 0.25, seed).unwrap();
            // enlarge one image to get a strict extension
            let mut symbols: Vec<Symbol> = b.symbols().to_vec();
            let mut images = symbols[0].images().to_vec();
            images[0] = images[0].union(StateSet::singleton(seed as usize % 3 + 1));
            symbols[0] = Symbol::new(images).unwrap();
            let a = Automaton::new(3, symbols).unwrap();
            assert!(b.is_contained_in(&a).unwrap());
            let rb = d3_implicit(&b).unwrap();
            let ra = d3_implicit(&a).unwrap();
            if rb.directing {
                assert!(ra.directing);
                assert!(ra.length.unwrap() <= rb.length.unwrap());
            }
        }
    }
}
