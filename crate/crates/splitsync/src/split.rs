//! The split transformation: replacing every nondeterministic choice by
//! fresh deterministic symbols until a DFA remains.
//!
//! The fixpoint of the one-step transformation does not depend on the order
//! in which choices are resolved; its alphabet is exactly the set of
//! deterministic symbols contained in some original symbol. [`full_split`]
//! builds that DFA directly from this characterization instead of iterating
//! [`split_at`], which avoids intermediate blowup; `split_at` is still
//! provided so the one-step properties can be exercised on their own.

use std::collections::BTreeMap;

use crate::automaton::{Automaton, State, StateSet, Symbol};
use crate::{Budget, Error, Result};

/// The DFA produced by a full split, plus, for every produced symbol, the
/// indices of the original symbols containing it.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub automaton: Automaton,
    /// `provenance[i]` lists the original symbol indices `a` with
    /// `automaton.symbols()[i] ⊆ a`; never empty.
    pub provenance: Vec<Vec<usize>>,
}

/// One parametrized split step: resolve the choice of `symbol` at `q_split`.
///
/// Each state `q_i ∈ q_split·a` yields a symbol `a_i` with `q_split·a_i = q_i`
/// and `q·a_i = q·a` elsewhere; the result is the set
/// `{a_1..a_m} ∪ (Σ \ {a})`. Splitting a deterministic position returns the
/// automaton unchanged.
pub fn split_at(a: &Automaton, q_split: State, symbol: usize) -> Result<Automaton> {
    let n = a.n();
    if q_split < 1 || q_split > n {
        return Err(Error::StateOutOfRange { state: q_split, n });
    }
    let sym = a.symbol(symbol)?.clone();
    let mut symbols = Vec::with_capacity(a.symbol_count() + 1);
    for (i, s) in a.symbols().iter().enumerate() {
        if i == symbol {
            for q_i in sym.image(q_split).iter() {
                let mut images = sym.images().to_vec();
                images[q_split - 1] = StateSet::singleton(q_i);
                symbols.push(Symbol::new(images)?);
            }
        } else {
            symbols.push(s.clone());
        }
    }
    Automaton::new(n, symbols)
}

/// Stream of all deterministic symbols contained in `sym`, i.e. all choice
/// functions through its images, in statewise-lexicographic order (the
/// choice for state 1 varies slowest). Yields exactly `∏_q |q·sym|`
/// symbols, each one exactly once.
pub fn det_subsymbols(sym: &Symbol) -> DetSubsymbols {
    DetSubsymbols {
        choices: sym.images().iter().map(|img| img.iter().collect()).collect(),
        odometer: vec![0; sym.n()],
        done: sym.n() == 0,
    }
}

pub struct DetSubsymbols {
    choices: Vec<Vec<State>>,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for DetSubsymbols {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        if self.done {
            return None;
        }
        let images: Vec<StateSet> = self
            .odometer
            .iter()
            .zip(&self.choices)
            .map(|(&i, opts)| StateSet::singleton(opts[i]))
            .collect();
        // advance, least significant digit last
        let mut pos = self.odometer.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.odometer[pos] += 1;
            if self.odometer[pos] < self.choices[pos].len() {
                break;
            }
            self.odometer[pos] = 0;
        }
        Some(Symbol::new(images).expect("choice images are singletons"))
    }
}

/// Membership test for the split alphabet without materializing it:
/// a deterministic `b` belongs to the split of `a` iff some original symbol
/// contains it.
pub fn gamma_contains(a: &Automaton, b: &Symbol) -> Result<bool> {
    if !b.is_deterministic() {
        return Err(Error::SymbolNotDeterministic);
    }
    if b.n() != a.n() {
        return Err(Error::MismatchedStateCount(b.n(), a.n()));
    }
    for sym in a.symbols() {
        if b.leq(sym)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of distinct deterministic symbols the full split would produce,
/// computed by inclusion–exclusion over the original symbols (the size of a
/// union of boxes), without enumerating them.
pub fn split_alphabet_size(a: &Automaton) -> Result<u64> {
    let k = a.symbol_count();
    if k == 0 {
        return Ok(0);
    }
    if k > 24 {
        return Err(Error::Unsupported(format!(
            "split alphabet size uses inclusion-exclusion over symbol subsets and is limited to 24 symbols, got {k}"
        )));
    }
    let mut total: i128 = 0;
    for mask in 1u32..(1 << k) {
        let mut inter: u128 = 1;
        for q in 1..=a.n() {
            let mut common = StateSet::full(a.n());
            for (i, sym) in a.symbols().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    common = common.intersection(sym.image(q));
                }
            }
            inter *= common.len() as u128;
            if inter == 0 {
                break;
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        total += sign * inter as i128;
    }
    u64::try_from(total)
        .ok()
        .filter(|&v| v <= i64::MAX as u64)
        .ok_or(Error::Overflow("split alphabet size exceeds 2^63"))
}

/// Upper bound `Σ_a ∏_q |qa|` used for the budget precheck.
fn split_size_bound(a: &Automaton) -> u64 {
    let mut total: u64 = 0;
    for sym in a.symbols() {
        let mut prod: u64 = 1;
        for q in 1..=a.n() {
            prod = prod.saturating_mul(sym.image(q).len() as u64);
        }
        total = total.saturating_add(prod);
    }
    total
}

/// Full split with the default budget. See [`full_split_with`].
pub fn full_split(a: &Automaton) -> Result<SplitResult> {
    full_split_with(a, &Budget::default())
}

/// The unique DFA obtained by resolving all nondeterministic choices, built
/// as the deduplicated union of [`det_subsymbols`] streams. Symbols are
/// emitted in their natural order; duplicates arising from different
/// original symbols contribute one symbol whose provenance lists all of
/// them. Errors out (rather than truncating) when the produced alphabet
/// would exceed `budget.split_symbols`.
pub fn full_split_with(a: &Automaton, budget: &Budget) -> Result<SplitResult> {
    let bound = split_size_bound(a);
    if bound > budget.split_symbols {
        return Err(Error::BudgetExceeded {
            what: "split alphabet",
            needed: bound,
            cap: budget.split_symbols,
        });
    }
    let mut produced: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
    for (i, sym) in a.symbols().iter().enumerate() {
        for det in det_subsymbols(sym) {
            let prov = produced.entry(det).or_default();
            if prov.last() != Some(&i) {
                prov.push(i);
            }
        }
    }
    let (symbols, provenance): (Vec<Symbol>, Vec<Vec<usize>>) = produced.into_iter().unzip();
    Ok(SplitResult {
        automaton: Automaton::new(a.n(), symbols)?,
        provenance,
    })
}
