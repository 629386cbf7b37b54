//! Detectors for the structural automaton classes that come with improved
//! directing-length bounds, together with re-checkable certificates.
//!
//! For a directing automaton on `n` states the applicable bounds are:
//! monotonic `n-1`; strongly Eulerian `(n-2)(n-1)+1`; cyclic and orientable
//! `(n-1)^2`; one-cluster `2n^2-7n+7`; focusing with strongly connected
//! underlying digraph `⌊n(n+1)/6⌋`; and in general `⌊(n^3-n)/6⌋` as well as
//! the older `n(n-1)(n-2)/2 + 1`.

use std::collections::{HashSet, VecDeque};

use crate::automaton::{Automaton, State, StateSet, Symbol};
use crate::{Budget, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Cyclic,
    OneCluster,
    Monotonic,
    Orientable,
    StronglyEulerian,
    /// Every word eventually pins every state to a single fixed state
    /// (`qw^k = qw^{k+1}` with `|qw^k| = 1` for some `k`).
    Focusing,
}

impl ClassKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::Cyclic => "cyclic",
            ClassKind::OneCluster => "one-cluster",
            ClassKind::Monotonic => "monotonic",
            ClassKind::Orientable => "orientable",
            ClassKind::StronglyEulerian => "strongly-eulerian",
            ClassKind::Focusing => "focusing",
        }
    }

    pub const ALL: [ClassKind; 6] = [
        ClassKind::Cyclic,
        ClassKind::OneCluster,
        ClassKind::Monotonic,
        ClassKind::Orientable,
        ClassKind::StronglyEulerian,
        ClassKind::Focusing,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    /// The detector could not decide within its preconditions or budget.
    Undecided,
}

/// Evidence attached to a positive verdict; each variant re-validates
/// against the class definition.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// Symbol whose graph has a Hamiltonian cycle, and the state ordering.
    Cyclic { symbol: usize, order: Vec<State> },
    /// Symbol whose graph has a unique terminal strongly connected
    /// component, and a state inside it.
    OneCluster { symbol: usize, state: State },
    /// Linear order (states listed from smallest to largest).
    Monotonic { order: Vec<State> },
    /// Cyclic order (states listed once, first state pinned).
    Orientable { order: Vec<State> },
    /// Per symbol: the common degree when the symbol's graph is regular.
    StronglyEulerian { degrees: Vec<Option<usize>> },
    /// Size of the transition monoid that was exhausted, and whether the
    /// underlying digraph is strongly connected (needed for the bound).
    Focusing {
        monoid_size: usize,
        strongly_connected: bool,
    },
}

#[derive(Clone, Debug)]
pub struct ClassVerdict {
    pub class: ClassKind,
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    /// Reason when undecided.
    pub note: Option<String>,
}

impl ClassVerdict {
    fn member(class: ClassKind, certificate: Certificate) -> ClassVerdict {
        ClassVerdict {
            class,
            verdict: Verdict::Member,
            certificate: Some(certificate),
            note: None,
        }
    }

    fn non_member(class: ClassKind) -> ClassVerdict {
        ClassVerdict {
            class,
            verdict: Verdict::NonMember,
            certificate: None,
            note: None,
        }
    }

    fn undecided(class: ClassKind, note: String) -> ClassVerdict {
        ClassVerdict {
            class,
            verdict: Verdict::Undecided,
            certificate: None,
            note: Some(note),
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedBound {
    pub name: &'static str,
    pub value: u64,
}

/// All verdicts plus every applicable directing-length bound.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub verdicts: Vec<ClassVerdict>,
    pub bounds: Vec<NamedBound>,
    pub tightest: NamedBound,
}

// ---------------------------------------------------------------------------
// per-symbol digraph helpers

/// Adjacency of the digraph `G_a` as bitmasks.
fn symbol_adjacency(sym: &Symbol) -> Vec<StateSet> {
    sym.images().to_vec()
}

fn reverse_adjacency(adj: &[StateSet]) -> Vec<StateSet> {
    let n = adj.len();
    let mut rev = vec![StateSet::EMPTY; n];
    for q in 1..=n {
        for p in adj[q - 1].iter() {
            rev[p - 1].insert(q);
        }
    }
    rev
}

fn reachable_from(adj: &[StateSet], start: StateSet) -> StateSet {
    let mut seen = start;
    let mut frontier = start;
    while !frontier.is_empty() {
        let mut next = StateSet::EMPTY;
        for q in frontier.iter() {
            next = next.union(adj[q - 1]);
        }
        frontier = StateSet::from_bits(next.bits() & !seen.bits());
        seen = seen.union(next);
    }
    seen
}

fn strongly_connected(adj: &[StateSet]) -> bool {
    let n = adj.len();
    if n <= 1 {
        return true;
    }
    let start = StateSet::singleton(1);
    if reachable_from(adj, start).len() != n {
        return false;
    }
    reachable_from(&reverse_adjacency(adj), start).len() == n
}

/// Strongly connected components of a bitmask digraph (Tarjan, iterative
/// over at most 16 nodes kept simple with recursion).
fn sccs(adj: &[StateSet]) -> Vec<StateSet> {
    struct Ctx<'a> {
        adj: &'a [StateSet],
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        counter: usize,
        out: Vec<StateSet>,
    }
    fn visit(ctx: &mut Ctx, v: usize) {
        ctx.counter += 1;
        ctx.index[v] = ctx.counter;
        ctx.low[v] = ctx.counter;
        ctx.stack.push(v);
        ctx.on_stack[v] = true;
        for w in ctx.adj[v].iter().map(|q| q - 1) {
            if ctx.index[w] == 0 {
                visit(ctx, w);
                ctx.low[v] = ctx.low[v].min(ctx.low[w]);
            } else if ctx.on_stack[w] {
                ctx.low[v] = ctx.low[v].min(ctx.index[w]);
            }
        }
        if ctx.low[v] == ctx.index[v] {
            let mut comp = StateSet::EMPTY;
            while let Some(w) = ctx.stack.pop() {
                ctx.on_stack[w] = false;
                comp.insert(w + 1);
                if w == v {
                    break;
                }
            }
            ctx.out.push(comp);
        }
    }
    let n = adj.len();
    let mut ctx = Ctx {
        adj,
        index: vec![0; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        counter: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if ctx.index[v] == 0 {
            visit(&mut ctx, v);
        }
    }
    ctx.out
}

/// Components with no edge leaving them.
fn terminal_sccs(adj: &[StateSet]) -> Vec<StateSet> {
    sccs(adj)
        .into_iter()
        .filter(|comp| {
            comp.iter().all(|q| adj[q - 1].is_subset_of(*comp))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// cyclic

/// Hamiltonian cycle search in `G_a` by subset dynamic programming over
/// (visited set, endpoint), anchored at state 1.
fn hamiltonian_cycle(adj: &[StateSet]) -> Option<Vec<State>> {
    let n = adj.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return adj[0].contains(1).then(|| vec![1]);
    }
    let full = StateSet::full(n).bits() as usize;
    // dp[mask] = endpoints reachable from state 1 visiting exactly `mask`
    let mut dp = vec![0u16; full + 1];
    let start = StateSet::singleton(1).bits() as usize;
    dp[start] = 1;
    for mask in start..=full {
        if dp[mask] == 0 || mask & 1 == 0 {
            continue;
        }
        for v in StateSet::from_bits(dp[mask]).iter() {
            let ext = adj[v - 1].bits() & !(mask as u16);
            for w in StateSet::from_bits(ext).iter() {
                dp[mask | StateSet::singleton(w).bits() as usize] |=
                    StateSet::singleton(w).bits();
            }
        }
    }
    let closer = StateSet::from_bits(dp[full])
        .iter()
        .find(|&v| adj[v - 1].contains(1))?;
    // walk backwards recomputing predecessors
    let mut order = vec![closer];
    let mut mask = full;
    let mut cur = closer;
    while order.len() < n {
        mask &= !(StateSet::singleton(cur).bits() as usize);
        let prev = StateSet::from_bits(dp[mask])
            .iter()
            .find(|&u| adj[u - 1].contains(cur))
            .expect("dp table is consistent");
        order.push(prev);
        cur = prev;
    }
    order.reverse();
    Some(order)
}

/// True iff `q_{i+1} ∈ q_i·sym` cyclically along `order`.
pub fn check_cyclic_order(a: &Automaton, symbol: usize, order: &[State]) -> bool {
    let Ok(sym) = a.symbol(symbol) else {
        return false;
    };
    if order.len() != a.n() {
        return false;
    }
    (0..order.len()).all(|i| sym.image(order[i]).contains(order[(i + 1) % order.len()]))
}

/// A CNFA is cyclic iff some symbol's graph contains a Hamiltonian cycle,
/// equivalently iff it extends a cyclic DFA.
pub fn is_cyclic(a: &Automaton) -> ClassVerdict {
    for (i, sym) in a.symbols().iter().enumerate() {
        if let Some(order) = hamiltonian_cycle(&symbol_adjacency(sym)) {
            return ClassVerdict::member(
                ClassKind::Cyclic,
                Certificate::Cyclic { symbol: i, order },
            );
        }
    }
    ClassVerdict::non_member(ClassKind::Cyclic)
}

// ---------------------------------------------------------------------------
// one-cluster

/// Pairwise formulation: some symbol has, for all `q, q'`, intersecting
/// forward-reachable sets.
pub fn one_cluster_pairwise(a: &Automaton) -> bool {
    a.symbols().iter().any(|sym| {
        let adj = symbol_adjacency(sym);
        let reach: Vec<StateSet> = (1..=a.n())
            .map(|q| reachable_from(&adj, StateSet::singleton(q)))
            .collect();
        reach
            .iter()
            .all(|r| reach.iter().all(|s| !r.intersection(*s).is_empty()))
    })
}

/// A CNFA is one-cluster iff some symbol's graph has exactly one terminal
/// strongly connected component (every state can then reach a common state
/// by iterating that symbol, taking k = 0 as a valid exponent).
pub fn is_one_cluster(a: &Automaton) -> ClassVerdict {
    for (i, sym) in a.symbols().iter().enumerate() {
        let adj = symbol_adjacency(sym);
        let terminals = terminal_sccs(&adj);
        if terminals.len() == 1 {
            let verdict = ClassVerdict::member(
                ClassKind::OneCluster,
                Certificate::OneCluster {
                    symbol: i,
                    state: terminals[0].min_state().expect("terminal component is nonempty"),
                },
            );
            debug_assert!(one_cluster_pairwise(a));
            return verdict;
        }
    }
    debug_assert!(!one_cluster_pairwise(a));
    ClassVerdict::non_member(ClassKind::OneCluster)
}

// ---------------------------------------------------------------------------
// monotonic / orientable

const ORDER_SEARCH_LIMIT: usize = 10;

/// True iff for every symbol and all strictly ordered pairs `q < q'` in the
/// given order (states listed smallest first), `max{qa} ≤ min{q'a}`.
pub fn check_monotonic_order(a: &Automaton, order: &[State]) -> bool {
    if order.len() != a.n() {
        return false;
    }
    let mut pos = vec![usize::MAX; a.n() + 1];
    for (i, &q) in order.iter().enumerate() {
        if q < 1 || q > a.n() || pos[q] != usize::MAX {
            return false;
        }
        pos[q] = i;
    }
    for sym in a.symbols() {
        let mut run_max = 0usize;
        for (i, &q) in order.iter().enumerate() {
            let (lo, hi) = image_span(sym.image(q), &pos);
            if i > 0 && run_max > lo {
                return false;
            }
            run_max = run_max.max(hi);
        }
    }
    true
}

/// (min position, max position) of an image under a position table.
fn image_span(img: StateSet, pos: &[usize]) -> (usize, usize) {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for p in img.iter() {
        lo = lo.min(pos[p]);
        hi = hi.max(pos[p]);
    }
    (lo, hi)
}

fn monotonic_search(a: &Automaton, order: &mut Vec<State>, used: &mut [bool]) -> bool {
    let n = a.n();
    if order.len() == n {
        return check_monotonic_order(a, order);
    }
    'candidates: for q in 1..=n {
        if used[q] {
            continue;
        }
        // partial feasibility: all placed pairs must already satisfy the
        // staircase condition restricted to placed image members
        order.push(q);
        used[q] = true;
        let mut pos = vec![usize::MAX; n + 1];
        for (i, &s) in order.iter().enumerate() {
            pos[s] = i;
        }
        for sym in a.symbols() {
            let mut run_max = 0usize;
            let mut have_prev = false;
            for &s in order.iter() {
                let placed: Vec<usize> = sym
                    .image(s)
                    .iter()
                    .filter(|p| pos[*p] != usize::MAX)
                    .map(|p| pos[p])
                    .collect();
                if placed.is_empty() {
                    have_prev = false; // gap: later pairs unconstrained so far
                    continue;
                }
                let lo = *placed.iter().min().unwrap();
                let hi = *placed.iter().max().unwrap();
                if have_prev && run_max > lo {
                    order.pop();
                    used[q] = false;
                    continue 'candidates;
                }
                run_max = if have_prev { run_max.max(hi) } else { hi };
                have_prev = true;
            }
        }
        if monotonic_search(a, order, used) {
            return true;
        }
        order.pop();
        used[q] = false;
    }
    false
}

/// Search for a monotonic order by backtracking over linear orders.
pub fn is_monotonic(a: &Automaton) -> Result<ClassVerdict> {
    if a.n() > ORDER_SEARCH_LIMIT {
        return Err(Error::Unsupported(format!(
            "monotonic order search is limited to {ORDER_SEARCH_LIMIT} states, got {}; use check_monotonic_order with an explicit order",
            a.n()
        )));
    }
    let mut order = Vec::with_capacity(a.n());
    let mut used = vec![false; a.n() + 1];
    if monotonic_search(a, &mut order, &mut used) {
        Ok(ClassVerdict::member(
            ClassKind::Monotonic,
            Certificate::Monotonic { order },
        ))
    } else {
        Ok(ClassVerdict::non_member(ClassKind::Monotonic))
    }
}

/// True iff for every symbol at most one of the `n` cyclic constraints
/// `max{q_i a} ≤ min{q_{i+1 mod n} a}` is violated, comparing positions
/// along the given cyclic order.
pub fn check_orientable_order(a: &Automaton, order: &[State]) -> bool {
    let n = a.n();
    if order.len() != n || n == 0 {
        return false;
    }
    let mut pos = vec![usize::MAX; n + 1];
    for (i, &q) in order.iter().enumerate() {
        if q < 1 || q > n || pos[q] != usize::MAX {
            return false;
        }
        pos[q] = i;
    }
    for sym in a.symbols() {
        let spans: Vec<(usize, usize)> = order
            .iter()
            .map(|&q| image_span(sym.image(q), &pos))
            .collect();
        let violations = (0..n)
            .filter(|&i| spans[i].1 > spans[(i + 1) % n].0)
            .count();
        if violations > 1 {
            return false;
        }
    }
    true
}

/// Search for an orientable linearization over all `n!` sequences. The
/// starting state cannot be pinned: when an image spans the wrap point of
/// the candidate sequence, the violation count genuinely depends on where
/// the sequence starts, so rotations of the same cyclic order are not
/// interchangeable.
pub fn is_orientable(a: &Automaton) -> Result<ClassVerdict> {
    if a.n() > ORDER_SEARCH_LIMIT {
        return Err(Error::Unsupported(format!(
            "orientable order search is limited to {ORDER_SEARCH_LIMIT} states, got {}; use check_orientable_order with an explicit order",
            a.n()
        )));
    }
    let n = a.n();
    if n == 0 {
        return Ok(ClassVerdict::non_member(ClassKind::Orientable));
    }
    let mut rest: Vec<State> = (1..=n).collect();
    let mut order = Vec::with_capacity(n);
    if orientable_search(a, &mut order, &mut rest) {
        let order = order.clone();
        return Ok(ClassVerdict::member(
            ClassKind::Orientable,
            Certificate::Orientable { order },
        ));
    }
    Ok(ClassVerdict::non_member(ClassKind::Orientable))
}

fn orientable_search(a: &Automaton, order: &mut Vec<State>, rest: &mut Vec<State>) -> bool {
    if rest.is_empty() {
        return check_orientable_order(a, order);
    }
    for i in 0..rest.len() {
        let q = rest.remove(i);
        order.push(q);
        if orientable_search(a, order, rest) {
            rest.insert(i, q);
            return true;
        }
        order.pop();
        rest.insert(i, q);
    }
    false
}

// ---------------------------------------------------------------------------
// strongly Eulerian

/// A CNFA is strongly Eulerian iff every symbol's graph (as a simple edge
/// set) is strongly connected with in-degree = out-degree at every vertex.
pub fn is_strongly_eulerian(a: &Automaton) -> ClassVerdict {
    let n = a.n();
    let mut degrees = Vec::with_capacity(a.symbol_count());
    for sym in a.symbols() {
        let adj = symbol_adjacency(sym);
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for q in 1..=n {
            outdeg[q - 1] = adj[q - 1].len();
            for p in adj[q - 1].iter() {
                indeg[p - 1] += 1;
            }
        }
        if (0..n).any(|v| indeg[v] != outdeg[v]) || !strongly_connected(&adj) {
            return ClassVerdict::non_member(ClassKind::StronglyEulerian);
        }
        let regular = outdeg.windows(2).all(|w| w[0] == w[1]);
        degrees.push(regular.then(|| outdeg.first().copied().unwrap_or(0)));
    }
    ClassVerdict::member(
        ClassKind::StronglyEulerian,
        Certificate::StronglyEulerian { degrees },
    )
}

/// In/out degrees of a DFA's underlying digraph counted with edge
/// multiplicities (one edge per symbol per state), plus strong connectivity
/// of the union digraph.
#[derive(Clone, Debug)]
pub struct MultigraphDegrees {
    pub in_degrees: Vec<usize>,
    pub out_degrees: Vec<usize>,
    pub strongly_connected: bool,
    pub eulerian: bool,
}

pub fn dfa_multigraph_degrees(d: &Automaton) -> Result<MultigraphDegrees> {
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    let n = d.n();
    let k = d.symbol_count();
    let mut in_degrees = vec![0usize; n];
    for sym in d.symbols() {
        for q in 1..=n {
            in_degrees[sym.image(q).min_state().expect("deterministic image") - 1] += 1;
        }
    }
    let out_degrees = vec![k; n];
    let sc = is_strongly_connected_underlying(d);
    let eulerian = sc && in_degrees.iter().all(|&d| d == k);
    Ok(MultigraphDegrees {
        in_degrees,
        out_degrees,
        strongly_connected: sc,
        eulerian,
    })
}

/// Degrees of the split DFA's underlying multigraph with one edge per
/// (split symbol, containing original symbol) pair. Two original symbols
/// sharing a deterministic sub-symbol both contribute it here, which is
/// the counting under which a regular strongly Eulerian automaton splits
/// to a multigraph with all degrees `∑_a k_a^n`; counting each split
/// symbol once would lose that identity whenever the symbols overlap.
pub fn split_multigraph_degrees(split: &crate::split::SplitResult) -> Result<MultigraphDegrees> {
    let d = &split.automaton;
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    let n = d.n();
    let mut in_degrees = vec![0usize; n];
    let mut out_degrees = vec![0usize; n];
    for (i, sym) in d.symbols().iter().enumerate() {
        let mult = split.provenance[i].len();
        for q in 1..=n {
            out_degrees[q - 1] += mult;
            let target = sym.image(q).min_state().expect("deterministic image");
            in_degrees[target - 1] += mult;
        }
    }
    let sc = is_strongly_connected_underlying(d);
    let eulerian = sc
        && in_degrees
            .iter()
            .zip(&out_degrees)
            .all(|(i, o)| i == o);
    Ok(MultigraphDegrees {
        in_degrees,
        out_degrees,
        strongly_connected: sc,
        eulerian,
    })
}

// ---------------------------------------------------------------------------
// focusing (transition monoid) and aperiodicity

/// Close the symbol set under composition, representing each element as the
/// full map `q ↦ qw`.
fn monoid_closure(a: &Automaton, cap: u64) -> Result<Vec<Vec<StateSet>>> {
    let n = a.n();
    let generators: Vec<Vec<StateSet>> = a
        .symbols()
        .iter()
        .map(|sym| (1..=n).map(|q| sym.image(q)).collect())
        .collect();
    let key = |m: &Vec<StateSet>| -> Vec<u16> { m.iter().map(|s| s.bits()).collect() };
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut out: Vec<Vec<StateSet>> = Vec::new();
    let mut queue: VecDeque<Vec<StateSet>> = VecDeque::new();
    for g in &generators {
        if seen.insert(key(g)) {
            out.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(m) = queue.pop_front() {
        for g in a.symbols() {
            let next: Vec<StateSet> = m.iter().map(|s| g.apply(*s)).collect();
            if seen.insert(key(&next)) {
                if out.len() as u64 + 1 > cap {
                    return Err(Error::BudgetExceeded {
                        what: "transition monoid",
                        needed: out.len() as u64 + 1,
                        cap,
                    });
                }
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// Does iterating the map `m` from `{q}` reach a fixed singleton?
fn iterate_collapses(m: &[StateSet], q: State, n: usize) -> bool {
    let apply = |s: StateSet| -> StateSet {
        let mut out = StateSet::EMPTY;
        for p in s.iter() {
            out = out.union(m[p - 1]);
        }
        out
    };
    let mut cur = StateSet::singleton(q);
    // a trajectory of subsets enters its cycle within 2^n steps; if the
    // cycle has length 1 we see next == cur inside the bound
    for _ in 0..=(1usize << n) {
        let next = apply(cur);
        if next == cur {
            return cur.is_singleton();
        }
        cur = next;
    }
    false
}

/// Check the focusing property with the default budget: for every word `w`
/// and state `q` there is `k` with `qw^k = qw^{k+1}` and `|qw^k| = 1`. Also
/// reports strong connectivity of the underlying digraph, since the
/// `⌊n(n+1)/6⌋` bound needs both.
pub fn is_focusing(a: &Automaton) -> ClassVerdict {
    is_focusing_with(a, &Budget::default())
}

pub fn is_focusing_with(a: &Automaton, budget: &Budget) -> ClassVerdict {
    let n = a.n();
    let monoid = match monoid_closure(a, budget.monoid_elements) {
        Ok(m) => m,
        Err(e) => return ClassVerdict::undecided(ClassKind::Focusing, e.to_string()),
    };
    for m in &monoid {
        for q in 1..=n {
            if !iterate_collapses(m, q, n) {
                return ClassVerdict::non_member(ClassKind::Focusing);
            }
        }
    }
    ClassVerdict::member(
        ClassKind::Focusing,
        Certificate::Focusing {
            monoid_size: monoid.len(),
            strongly_connected: is_strongly_connected_underlying(a),
        },
    )
}

/// Aperiodicity of a DFA: every transition monoid element `m` satisfies
/// `m^k = m^{k+1}` for some `k`.
pub fn dfa_is_aperiodic(d: &Automaton) -> Result<bool> {
    dfa_is_aperiodic_with(d, &Budget::default())
}

pub fn dfa_is_aperiodic_with(d: &Automaton, budget: &Budget) -> Result<bool> {
    if !d.is_dfa() {
        return Err(Error::NotDeterministic);
    }
    let n = d.n();
    let monoid = monoid_closure(d, budget.monoid_elements)?;
    for m in &monoid {
        let compose = |x: &Vec<StateSet>| -> Vec<StateSet> {
            x.iter()
                .map(|s| {
                    let mut out = StateSet::EMPTY;
                    for p in s.iter() {
                        out = out.union(m[p - 1]);
                    }
                    out
                })
                .collect()
        };
        // the first k with m^k = m^{k+1} is at most the maximal tail
        // length, which is below n
        let mut cur = m.clone();
        let mut ok = false;
        for _ in 0..=n {
            let next = compose(&cur);
            if next == cur {
                ok = true;
                break;
            }
            cur = next;
        }
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strong connectivity of the union digraph `⋃_a G_a`.
pub fn is_strongly_connected_underlying(a: &Automaton) -> bool {
    let n = a.n();
    let mut adj = vec![StateSet::EMPTY; n];
    for sym in a.symbols() {
        for q in 1..=n {
            adj[q - 1] = adj[q - 1].union(sym.image(q));
        }
    }
    strongly_connected(&adj)
}

// ---------------------------------------------------------------------------
// bounds

fn floor_div(a: u64, b: u64) -> u64 {
    a / b
}

pub fn class_bound(class: ClassKind, n: u64) -> u64 {
    match class {
        ClassKind::Monotonic => n.saturating_sub(1),
        ClassKind::StronglyEulerian => n.saturating_sub(2) * n.saturating_sub(1) + 1,
        ClassKind::Cyclic | ClassKind::Orientable => n.saturating_sub(1).pow(2),
        ClassKind::OneCluster => (2 * n * n + 7).saturating_sub(7 * n),
        ClassKind::Focusing => floor_div(n * (n + 1), 6),
    }
}

/// `⌊(n³-n)/6⌋`, the general bound inherited from DFAs through the split.
pub fn general_bound(n: u64) -> u64 {
    floor_div(n * n * n - n, 6)
}

/// `n(n-1)(n-2)/2 + 1`, the older general bound.
pub fn classic_general_bound(n: u64) -> u64 {
    n * n.saturating_sub(1) * n.saturating_sub(2) / 2 + 1
}

/// Run every decidable detector and collect all applicable bounds; the
/// general bounds are always present, so the list is never empty.
pub fn best_bound(a: &Automaton) -> ClassReport {
    let n = a.n() as u64;
    let mut verdicts = Vec::new();
    let mut bounds = Vec::new();

    let cyclic = is_cyclic(a);
    let one_cluster = is_one_cluster(a);
    let monotonic = is_monotonic(a).unwrap_or_else(|e| {
        ClassVerdict::undecided(ClassKind::Monotonic, e.to_string())
    });
    let orientable = is_orientable(a).unwrap_or_else(|e| {
        ClassVerdict::undecided(ClassKind::Orientable, e.to_string())
    });
    let eulerian = is_strongly_eulerian(a);
    let focusing = is_focusing(a);

    for v in [&cyclic, &one_cluster, &monotonic, &orientable, &eulerian] {
        if v.is_member() {
            bounds.push(NamedBound {
                name: v.class.as_str(),
                value: class_bound(v.class, n),
            });
        }
    }
    if let ClassVerdict {
        verdict: Verdict::Member,
        certificate: Some(Certificate::Focusing {
            strongly_connected: true,
            ..
        }),
        ..
    } = &focusing
    {
        bounds.push(NamedBound {
            name: "focusing-strongly-connected",
            value: class_bound(ClassKind::Focusing, n),
        });
    }
    bounds.push(NamedBound {
        name: "general",
        value: general_bound(n),
    });
    bounds.push(NamedBound {
        name: "general-classic",
        value: classic_general_bound(n),
    });

    verdicts.extend([cyclic, one_cluster, monotonic, orientable, eulerian, focusing]);
    let tightest = bounds
        .iter()
        .min_by_key(|b| b.value)
        .expect("general bounds are always present")
        .clone();
    ClassReport {
        verdicts,
        bounds,
        tightest,
    }
}

/// Certificate re-validation, used by tests and by the CLI's verbose mode.
pub fn validate_certificate(a: &Automaton, cert: &Certificate) -> bool {
    match cert {
        Certificate::Cyclic { symbol, order } => check_cyclic_order(a, *symbol, order),
        Certificate::OneCluster { symbol, state } => {
            let Ok(sym) = a.symbol(*symbol) else {
                return false;
            };
            let adj = symbol_adjacency(sym);
            (1..=a.n()).all(|q| reachable_from(&adj, StateSet::singleton(q)).contains(*state))
        }
        Certificate::Monotonic { order } => check_monotonic_order(a, order),
        Certificate::Orientable { order } => check_orientable_order(a, order),
        Certificate::StronglyEulerian { degrees } => {
            degrees.len() == a.symbol_count()
                && is_strongly_eulerian(a).is_member()
        }
        Certificate::Focusing { .. } => is_focusing(a).is_member(),
    }
}
