//! Critical automata: the symbol graph of a DFA, the inverse of the split
//! transformation, exhaustive search for critical DFAs on few states, and
//! the census of critical CNFAs built on top of them.
//!
//! An automaton on `n` states is critical when its shortest directing word
//! has length exactly `(n-1)^2`. Every critical CNFA splits to a critical
//! DFA, so critical CNFAs are found by inverting the split on the known
//! critical DFAs: two symbols of a DFA are joined by a graph edge when they
//! differ in exactly one state, and merging any subset of edges yields a
//! CNFA that splits back to the DFA. When the symbol graph has no cycles of
//! length 3 or 4 this enumeration is complete.

mod catalog;
mod census;
mod search;

pub use catalog::{catalog, data_dir, CatalogEntry, Provenance, CATALOG_NAMES};
pub use census::{census, census_extended, CensusClass, CensusMember, CensusReport};
pub use search::{critical_dfa_search, critical_dfa_search_with, SearchClass, SearchOutcome};
#[doc(hidden)]
pub use search::search_basic_critical;

use crate::automaton::{Automaton, StateSet, Symbol};
use crate::directing::dfa_shortest_sync;
use crate::split::full_split;
use crate::{Error, Result};

/// Undirected graph on a DFA's symbols; `{a,b}` is an edge iff the two
/// symbols differ in the image of exactly one state.
#[derive(Clone, Debug)]
pub struct SymbolGraph {
    pub symbol_count: usize,
    /// Edges as index pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl SymbolGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        self.edges.contains(&key)
    }
}

/// Build the symbol graph of a DFA.
pub fn symbol_graph(d: &Automaton) -> Result<SymbolGraph> {
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    let k = d.symbol_count();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let differing = (1..=d.n())
                .filter(|&q| d.symbols()[i].image(q) != d.symbols()[j].image(q))
                .count();
            if differing == 1 {
                edges.push((i, j));
            }
        }
    }
    Ok(SymbolGraph {
        symbol_count: k,
        edges,
    })
}

/// True iff the graph contains a cycle of length 3 or 4.
pub fn has_short_cycle(g: &SymbolGraph) -> bool {
    let k = g.symbol_count;
    let mut adj = vec![vec![false; k]; k];
    for &(i, j) in &g.edges {
        adj[i][j] = true;
        adj[j][i] = true;
    }
    // triangle
    for i in 0..k {
        for j in i + 1..k {
            if adj[i][j] && (j + 1..k).any(|l| adj[i][l] && adj[j][l]) {
                return true;
            }
        }
    }
    // 4-cycle: two vertices with two common neighbours
    for i in 0..k {
        for j in i + 1..k {
            let common = (0..k).filter(|&l| adj[i][l] && adj[j][l]).count();
            if common >= 2 {
                return true;
            }
        }
    }
    false
}

/// The merged CNFA `N(D, E')`: every edge's symbol pair becomes its union,
/// symbols not covered by `E'` stay. The result is pre-basic and every
/// produced symbol is nondeterministic in at most one state.
pub fn merge_cnfa(d: &Automaton, edge_set: &[(usize, usize)]) -> Result<Automaton> {
    let graph = symbol_graph(d)?;
    let mut covered = vec![false; d.symbol_count()];
    let mut symbols = Vec::new();
    for &(i, j) in edge_set {
        if !graph.has_edge(i, j) {
            return Err(Error::NotASubgraph);
        }
        symbols.push(d.symbols()[i].union(&d.symbols()[j])?);
        covered[i] = true;
        covered[j] = true;
    }
    for (i, sym) in d.symbols().iter().enumerate() {
        if !covered[i] {
            symbols.push(sym.clone());
        }
    }
    Automaton::new(d.n(), symbols)
}

/// All `2^|E|` merged CNFAs of a DFA. Every member splits back to `d`; the
/// list is complete (no other pre-basic CNFA splits to `d`) iff the symbol
/// graph has no 3- or 4-cycle, reported in `complete`.
#[derive(Clone, Debug)]
pub struct InverseSplit {
    pub automata: Vec<Automaton>,
    pub complete: bool,
}

pub fn inverse_split_enumerate(d: &Automaton) -> Result<InverseSplit> {
    let graph = symbol_graph(d)?;
    let m = graph.edges.len();
    if m > 20 {
        return Err(Error::Unsupported(format!(
            "symbol graph has {m} edges; enumerating 2^{m} merged automata is not supported"
        )));
    }
    let mut automata = Vec::with_capacity(1 << m);
    for mask in 0u32..(1 << m) {
        let chosen: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| mask & (1 << e) != 0)
            .map(|(_, &edge)| edge)
            .collect();
        automata.push(merge_cnfa(d, &chosen)?);
    }
    Ok(InverseSplit {
        automata,
        complete: !has_short_cycle(&graph),
    })
}

/// All 9 possible symbols on two states.
fn two_state_symbols() -> Vec<Symbol> {
    let opts = [
        StateSet::singleton(1),
        StateSet::singleton(2),
        StateSet::from_states([1, 2]),
    ];
    let mut out = Vec::with_capacity(9);
    for i1 in opts {
        for i2 in opts {
            out.push(Symbol::new(vec![i1, i2]).unwrap());
        }
    }
    out
}

/// Exhaustive inverse split for two-state DFAs: every pre-basic CNFA whose
/// full split equals `d`, found by filtering all symbol subsets. Two states
/// is the only size where this space (2^9 subsets) is enumerable, and the
/// only case in the census where the symbol graph has a short cycle.
pub fn inverse_split_bruteforce(d: &Automaton) -> Result<Vec<Automaton>> {
    if d.n() != 2 {
        return Err(Error::Unsupported(format!(
            "exhaustive inverse split is only feasible on 2 states, got {}",
            d.n()
        )));
    }
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    let universe = two_state_symbols();
    let mut out = Vec::new();
    for mask in 1u32..(1 << universe.len()) {
        let symbols: Vec<Symbol> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect();
        let candidate = Automaton::new(2, symbols)?;
        if !candidate.classify_basic().is_pre_basic {
            continue;
        }
        if full_split(&candidate)?.automaton == *d {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// All basic critical CNFAs that split (after adjoining the identity) to
/// the given basic critical DFA: adjoin the identity, enumerate inverse
/// splits, and strip the bare identity symbol from every result. When the
/// symbol graph of `d⁺` has no short cycle the count is exactly `2^|E|`.
pub fn basic_critical_from_dfa(d: &Automaton) -> Result<Vec<Automaton>> {
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    if !d.classify_basic().is_basic {
        return Err(Error::Unsupported(
            "the source DFA must be basic (no identity, no duplicate symbols)".into(),
        ));
    }
    let n = d.n();
    let target = (n - 1) * (n - 1);
    let sync = dfa_shortest_sync(d)?;
    if sync.length != Some(target) {
        return Err(Error::Unsupported(format!(
            "the source DFA is not critical: shortest synchronizing length is {:?}, expected {target}",
            sync.length
        )));
    }
    let plus = d.add_identity();
    let graph = symbol_graph(&plus)?;
    let pre_basic = if !has_short_cycle(&graph) {
        inverse_split_enumerate(&plus)?.automata
    } else if n == 2 {
        inverse_split_bruteforce(&plus)?
    } else {
        return Err(Error::Unsupported(
            "the symbol graph has a 3- or 4-cycle and no complete inverse enumeration is available beyond 2 states"
                .into(),
        ));
    };
    let mut out: Vec<Automaton> = Vec::with_capacity(pre_basic.len());
    for cand in pre_basic {
        let basic = cand.drop_identity();
        debug_assert!(basic.classify_basic().is_basic, "{basic:?}");
        debug_assert!(!out.contains(&basic));
        out.push(basic);
    }
    Ok(out)
}

/// Is `small` isomorphic to a sub-automaton of `big` (a restriction to a
/// subset of its symbols)?
pub fn is_restriction_up_to_iso(small: &Automaton, big: &Automaton) -> bool {
    if small.n() != big.n() {
        return false;
    }
    crate::automaton::permutations(small.n()).iter().any(|perm| {
        let moved = small.relabeled(perm);
        moved
            .symbols()
            .iter()
            .all(|s| big.position_of(s).is_some())
    })
}

/// The n-state two-symbol DFA attaining the `(n-1)^2` bound:
/// `a` cycles the states, `b` moves 1 to 2 and fixes everything else.
pub fn cerny(n: usize) -> Result<Automaton> {
    if n < 2 {
        return Err(Error::Unsupported(format!(
            "the cyclic witness family needs at least 2 states, got {n}"
        )));
    }
    let a: Vec<usize> = (1..=n).map(|q| if q < n { q + 1 } else { 1 }).collect();
    let b: Vec<usize> = (1..=n).map(|q| if q == 1 { 2 } else { q }).collect();
    Automaton::new(n, vec![Symbol::from_map(&a)?, Symbol::from_map(&b)?])
}

/// The unique critical proper extension of [`cerny`]: a self-loop is added
/// to state 1 under `b`, so `1b = {1,2}`.
pub fn cerny_cnfa(n: usize) -> Result<Automaton> {
    let base = cerny(n)?;
    let a = base.symbols()[0].clone();
    let mut images = base.symbols()[1].images().to_vec();
    images[0] = StateSet::from_states([1, 2]);
    Automaton::new(n, vec![a, Symbol::new(images)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directing::{d3_implicit, dfa_shortest_sync};

    #[test]
    fn cerny_lengths() {
        for n in 2..=8 {
            let d = cerny(n).unwrap();
            assert_eq!(
                dfa_shortest_sync(&d).unwrap().length,
                Some((n - 1) * (n - 1)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn cerny_cnfa_is_a_strict_extension() {
        let d = cerny(5).unwrap();
        let c = cerny_cnfa(5).unwrap();
        assert!(d.is_contained_in(&c).unwrap());
        assert_ne!(d, c);
        assert!(c.classify_basic().is_basic);
    }

    #[test]
    fn cerny_plus_graph_has_single_edge() {
        for n in 3..=6 {
            let plus = cerny(n).unwrap().add_identity();
            let g = symbol_graph(&plus).unwrap();
            // b and id differ exactly at state 1
            assert_eq!(g.edges, vec![(1, 2)], "n = {n}");
            assert!(!has_short_cycle(&g));
        }
    }

    #[test]
    fn merging_cerny_plus_yields_the_cnfa_extension() {
        let plus = cerny(5).unwrap().add_identity();
        let merged = merge_cnfa(&plus, &[(1, 2)]).unwrap();
        assert_eq!(merged, cerny_cnfa(5).unwrap());
        // empty edge set is the identity transformation
        assert_eq!(merge_cnfa(&plus, &[]).unwrap(), plus);
    }

    #[test]
    fn merge_rejects_non_edges() {
        let plus = cerny(4).unwrap().add_identity();
        assert!(matches!(
            merge_cnfa(&plus, &[(0, 1)]),
            Err(Error::NotASubgraph)
        ));
    }

    #[test]
    fn edge_rule_soundness_on_random_dfas() {
        for seed in 0..60u64 {
            let n = 2 + (seed % 3) as usize;
            let d = crate::automaton::random_cnfa(n, 4, 0.0, 0xED6E + seed).unwrap();
            let g = symbol_graph(&d).unwrap();
            for i in 0..d.symbol_count() {
                for j in i + 1..d.symbol_count() {
                    let differing = (1..=n)
                        .filter(|&q| d.symbols()[i].image(q) != d.symbols()[j].image(q))
                        .count();
                    if g.has_edge(i, j) {
                        assert_eq!(differing, 1);
                    } else {
                        assert_ne!(differing, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn two_state_symbol_graph_is_a_four_cycle() {
        // DFA {a, b, s} plus identity: edges a-s, b-s, a-id, b-id
        let a = Symbol::from_map(&[1, 1]).unwrap();
        let b = Symbol::from_map(&[2, 2]).unwrap();
        let s = Symbol::from_map(&[2, 1]).unwrap();
        let d = Automaton::new(2, vec![a, b, s]).unwrap().add_identity();
        let g = symbol_graph(&d).unwrap();
        assert_eq!(g.edges.len(), 4);
        assert!(has_short_cycle(&g));
    }

    #[test]
    fn empty_graph_has_no_short_cycle() {
        let g = SymbolGraph {
            symbol_count: 3,
            edges: vec![],
        };
        assert!(!has_short_cycle(&g));
        let path = SymbolGraph {
            symbol_count: 4,
            edges: vec![(0, 1), (1, 2), (2, 3)],
        };
        assert!(!has_short_cycle(&path));
        let triangle = SymbolGraph {
            symbol_count: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        };
        assert!(has_short_cycle(&triangle));
    }

    #[test]
    fn inverse_split_round_trip_on_cerny_plus() {
        for n in 3..=6 {
            let plus = cerny(n).unwrap().add_identity();
            let inv = inverse_split_enumerate(&plus).unwrap();
            assert!(inv.complete);
            assert_eq!(inv.automata.len(), 2);
            for cand in &inv.automata {
                assert!(cand.classify_basic().is_pre_basic);
                assert_eq!(full_split(cand).unwrap().automaton, plus, "n = {n}");
            }
        }
    }

    #[test]
    fn bruteforce_matches_enumeration_without_short_cycles() {
        // D = {a (both→1)} plus id has graph edge {a, id} only
        let a = Symbol::from_map(&[1, 1]).unwrap();
        let d = Automaton::new(2, vec![a]).unwrap().add_identity();
        let enumerated = inverse_split_enumerate(&d).unwrap();
        assert!(enumerated.complete);
        let mut brute = inverse_split_bruteforce(&d).unwrap();
        let mut listed = enumerated.automata.clone();
        let key = |x: &Automaton| x.canonical_form().unwrap();
        brute.sort_by_key(key);
        listed.sort_by_key(key);
        // same sets, up to labeled equality
        assert_eq!(brute.len(), listed.len());
        for (b, l) in brute.iter().zip(&listed) {
            assert_eq!(b, l);
        }
    }

    #[test]
    fn bruteforce_finds_the_extra_two_state_cnfa() {
        let a = Symbol::from_map(&[1, 1]).unwrap();
        let b = Symbol::from_map(&[2, 2]).unwrap();
        let s = Symbol::from_map(&[2, 1]).unwrap();
        let d = Automaton::new(2, vec![a, b, s]).unwrap().add_identity();
        let found = inverse_split_bruteforce(&d).unwrap();
        assert_eq!(found.len(), 17); // 16 edge subsets + the chaos symbol
        let chaos =
            Automaton::new(2, vec![Symbol::new(vec![StateSet::full(2), StateSet::full(2)]).unwrap()])
                .unwrap();
        assert!(found.iter().any(|x| x == &chaos));
    }

    #[test]
    fn bruteforce_guard() {
        let d = cerny(3).unwrap();
        assert!(inverse_split_bruteforce(&d).is_err());
    }

    #[test]
    fn basic_critical_from_cerny() {
        for n in [3, 4, 5] {
            let d = cerny(n).unwrap();
            let cnfas = basic_critical_from_dfa(&d).unwrap();
            assert_eq!(cnfas.len(), 2, "n = {n}");
            assert!(cnfas.iter().any(|x| x == &d));
            assert!(cnfas.iter().any(|x| x == &cerny_cnfa(n).unwrap()));
            for c in &cnfas {
                assert_eq!(
                    d3_implicit(c).unwrap().length,
                    Some((n - 1) * (n - 1)),
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn basic_critical_rejects_non_critical_input() {
        let d = Automaton::new(3, vec![Symbol::from_map(&[1, 1, 1]).unwrap()]).unwrap();
        assert!(basic_critical_from_dfa(&d).is_err());
        let nonbasic = cerny(3).unwrap().add_identity();
        assert!(basic_critical_from_dfa(&nonbasic).is_err());
    }
}
