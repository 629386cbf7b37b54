//! Shared fixtures and seeded generators for tests. Not part of the public
//! API surface; kept in the library so unit, integration and acceptance
//! tests can use the same constructions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Automaton, StateSet, Symbol};

/// The three-state worked example: `a: 1↦{1,3}, 2↦{2}, 3↦{1}` and
/// `b: 1↦{2}, 2↦{1}, 3↦{2,3}`. Its shortest directing word has length 4.
pub fn intro_automaton() -> Automaton {
    let a = Symbol::new(vec![
        StateSet::from_states([1, 3]),
        StateSet::singleton(2),
        StateSet::singleton(1),
    ])
    .unwrap();
    let b = Symbol::new(vec![
        StateSet::singleton(2),
        StateSet::singleton(1),
        StateSet::from_states([2, 3]),
    ])
    .unwrap();
    Automaton::new(3, vec![a, b]).unwrap()
}

/// All 9 possible symbols on 2 states (images range over {1}, {2}, {1,2}).
pub fn all_two_state_symbols() -> Vec<Symbol> {
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

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    perm
}

fn random_symbol(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Symbol {
    let images = (0..n)
        .map(|_| {
            let mut img = StateSet::singleton(rng.random_range(1..=n));
            for q in 1..=n {
                if density > 0.0 && rng.random_bool(density) {
                    img.insert(q);
                }
            }
            img
        })
        .collect();
    Symbol::new(images).unwrap()
}

/// Random cyclic CNFA: one symbol is forced to contain a Hamiltonian cycle
/// through a random state ordering.
pub fn random_cyclic(n: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc7c1);
    let order = shuffled(&mut rng, n);
    let base = random_symbol(&mut rng, n, 0.25);
    let mut images: Vec<StateSet> = base.images().to_vec();
    for i in 0..n {
        images[order[i] - 1].insert(order[(i + 1) % n]);
    }
    let cyclic = Symbol::new(images).unwrap();
    let extra = random_symbol(&mut rng, n, 0.2);
    Automaton::new(n, vec![cyclic, extra]).unwrap()
}

/// Random one-cluster CNFA: one symbol is a deterministic map whose graph
/// has a single terminal cycle, the rest is arbitrary.
pub fn random_one_cluster(n: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1c7);
    let cycle_len = rng.random_range(1..=n);
    let mut targets = vec![0usize; n];
    for (i, t) in targets.iter_mut().enumerate().take(cycle_len) {
        *t = (i + 1) % cycle_len + 1;
    }
    for t in targets.iter_mut().skip(cycle_len) {
        *t = rng.random_range(1..=cycle_len);
    }
    let perm = shuffled(&mut rng, n);
    let cluster = Symbol::from_map(&targets).unwrap().relabeled(&perm);
    let extra = random_symbol(&mut rng, n, 0.3);
    Automaton::new(n, vec![cluster, extra]).unwrap()
}

/// Random monotonic CNFA: per symbol the images form a non-decreasing
/// staircase of intervals w.r.t. a hidden order, then states are relabeled.
pub fn random_monotonic(n: usize, symbols: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0300);
    let mut syms = Vec::with_capacity(symbols);
    for _ in 0..symbols {
        let mut images = Vec::with_capacity(n);
        let mut lo = 1usize;
        for _ in 0..n {
            lo = rng.random_range(lo..=n);
            let hi = rng.random_range(lo..=n.min(lo + 2));
            images.push(StateSet::from_states(lo..=hi));
            lo = hi;
        }
        syms.push(Symbol::new(images).unwrap());
    }
    let perm = shuffled(&mut rng, n);
    Automaton::new(n, syms).unwrap().relabeled(&perm)
}

/// Random orientable CNFA: per symbol the images are arcs that advance
/// monotonically around the circle by at most one full revolution, so at
/// most one of the cyclic staircase constraints is violated. States are
/// relabeled afterwards to hide the order.
pub fn random_orientable(n: usize, symbols: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0481);
    let mut syms = Vec::with_capacity(symbols);
    for _ in 0..symbols {
        // walk 2n increments on the universal cover with total advance <= n;
        // each image arc stays inside one revolution block so it projects to
        // an honest interval
        let mut budget = n;
        let mut pos = rng.random_range(0..n);
        let mut images = Vec::with_capacity(n);
        for _ in 0..n {
            let step = rng.random_range(0..=budget.min(2));
            budget -= step;
            pos += step;
            let room = n - 1 - pos % n;
            let width = rng.random_range(0..=budget.min(1).min(room));
            budget -= width;
            let img = StateSet::from_states((pos..=pos + width).map(|p| p % n + 1));
            pos += width;
            images.push(img);
        }
        syms.push(Symbol::new(images).unwrap());
    }
    let perm = shuffled(&mut rng, n);
    Automaton::new(n, syms).unwrap().relabeled(&perm)
}

/// Random strongly Eulerian CNFA: each symbol is an edge-disjoint union of
/// full cycles, so every vertex has in-degree = out-degree = k and the
/// symbol's graph is strongly connected.
pub fn random_strongly_eulerian(n: usize, symbols: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0e1e);
    let mut syms = Vec::with_capacity(symbols);
    for _ in 0..symbols {
        let want = if n <= 2 { 1 } else { rng.random_range(1..=2) };
        let mut images = vec![StateSet::EMPTY; n];
        let mut placed = 0;
        let mut attempts = 0;
        while placed < want && attempts < 50 {
            attempts += 1;
            let order = shuffled(&mut rng, n);
            let clash = (0..n).any(|i| images[order[i] - 1].contains(order[(i + 1) % n]));
            if !clash {
                for i in 0..n {
                    images[order[i] - 1].insert(order[(i + 1) % n]);
                }
                placed += 1;
            }
        }
        syms.push(Symbol::new(images).unwrap());
    }
    Automaton::new(n, syms).unwrap()
}

/// Random CNFA in which every word eventually pins every state to a single
/// fixed state: images only ever move strictly down a hidden rank order
/// toward a sink, so iterating any word collapses to the sink.
pub fn random_focusing(n: usize, symbols: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0f0c);
    let rank = shuffled(&mut rng, n);
    // rank[0] is the sink
    let mut syms = Vec::with_capacity(symbols);
    for _ in 0..symbols {
        let mut images = vec![StateSet::EMPTY; n];
        images[rank[0] - 1] = StateSet::singleton(rank[0]);
        for (i, &q) in rank.iter().enumerate().skip(1) {
            let mut img = StateSet::singleton(rank[rng.random_range(0..i)]);
            for &lower in rank.iter().take(i) {
                if rng.random_bool(0.3) {
                    img.insert(lower);
                }
            }
            images[q - 1] = img;
        }
        syms.push(Symbol::new(images).unwrap());
    }
    Automaton::new(n, syms).unwrap()
}

/// Random aperiodic, strongly connected DFA (a degenerate member of the
/// focusing class), built from order-preserving drift maps.
pub fn random_aperiodic_dfa(n: usize, seed: u64) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0a9d);
    loop {
        let up: Vec<usize> = (1..=n)
            .map(|q| if q < n && rng.random_bool(0.8) { q + 1 } else { q })
            .collect();
        let down: Vec<usize> = (1..=n)
            .map(|q| if q > 1 && rng.random_bool(0.8) { q - 1 } else { q })
            .collect();
        let a = Automaton::new(
            n,
            vec![Symbol::from_map(&up).unwrap(), Symbol::from_map(&down).unwrap()],
        )
        .unwrap();
        if crate::classes::is_strongly_connected_underlying(&a) {
            return a;
        }
    }
}
