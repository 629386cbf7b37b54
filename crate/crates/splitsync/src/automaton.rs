//! Core data model: state sets, symbols acting as relations, automata.
//!
//! States are numbered `1..=n` with `n <= 16`, so a set of states fits in a
//! single `u16` bitmask. A symbol maps every state to a nonempty state set;
//! it is deterministic when all images are singletons. An automaton is a
//! duplicate-free set of symbols over a common state count, which covers
//! both the nondeterministic and the deterministic case.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Hard cap on the number of states, chosen so a state set fits in a `u16`.
pub const MAX_STATES: usize = 16;

/// 1-based state identifier.
pub type State = usize;

/// A word is a sequence of indices into an automaton's symbol list.
pub type Word = Vec<usize>;

/// A subset of the states `{1..n}`, stored as a bitmask (bit `q-1` = state `q`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateSet(u16);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn singleton(q: State) -> StateSet {
        debug_assert!((1..=MAX_STATES).contains(&q));
        StateSet(1 << (q - 1))
    }

    /// The full set `{1..n}`.
    pub fn full(n: usize) -> StateSet {
        debug_assert!(n <= MAX_STATES);
        if n == 0 {
            StateSet(0)
        } else {
            StateSet(u16::MAX >> (16 - n))
        }
    }

    pub fn from_states<I: IntoIterator<Item = State>>(states: I) -> StateSet {
        let mut s = StateSet::EMPTY;
        for q in states {
            s.insert(q);
        }
        s
    }

    pub fn from_bits(bits: u16) -> StateSet {
        StateSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, q: State) -> bool {
        (1..=MAX_STATES).contains(&q) && self.0 & (1 << (q - 1)) != 0
    }

    pub fn insert(&mut self, q: State) {
        debug_assert!((1..=MAX_STATES).contains(&q));
        self.0 |= 1 << (q - 1);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn intersection(self, other: StateSet) -> StateSet {
        StateSet(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest state in the set, if any.
    pub fn min_state(self) -> Option<State> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize + 1)
        }
    }

    /// Iterate the members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = State> {
        let bits = self.0;
        (1..=MAX_STATES).filter(move |q| bits & (1 << (q - 1)) != 0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// A symbol: a total map from each state to a nonempty state set.
///
/// Viewed as a relation, the symbol is the edge set
/// `{(q, p) : p ∈ images[q]}`; containment and union below are the set
/// relations on those edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    images: Vec<StateSet>,
}

impl Symbol {
    /// Build a symbol from per-state images (`images[q-1]` is the image of `q`).
    ///
    /// Every image must be a nonempty subset of `{1..n}` where `n = images.len()`.
    pub fn new(images: Vec<StateSet>) -> Result<Symbol> {
        let n = images.len();
        if n > MAX_STATES {
            return Err(Error::TooManyStates(n));
        }
        let valid = StateSet::full(n);
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::EmptyImage { state: i + 1 });
            }
            if !img.is_subset_of(valid) {
                let bad = img.iter().find(|q| !valid.contains(*q)).unwrap();
                return Err(Error::StateOutOfRange { state: bad, n });
            }
        }
        Ok(Symbol { images })
    }

    /// Deterministic symbol from a per-state target list.
    pub fn from_map(targets: &[State]) -> Result<Symbol> {
        Symbol::new(targets.iter().map(|&q| StateSet::singleton(q)).collect())
    }

    pub fn identity(n: usize) -> Symbol {
        Symbol {
            images: (1..=n).map(StateSet::singleton).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of state `q` (1-based).
    pub fn image(&self, q: State) -> StateSet {
        self.images[q - 1]
    }

    pub fn images(&self) -> &[StateSet] {
        &self.images
    }

    pub fn is_deterministic(&self) -> bool {
        self.images.iter().all(|img| img.is_singleton())
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, img)| *img == StateSet::singleton(i + 1))
    }

    /// `Sa = ⋃_{q∈S} qa`; the empty set maps to the empty set.
    pub fn apply(&self, s: StateSet) -> StateSet {
        let mut out = StateSet::EMPTY;
        for (i, img) in self.images.iter().enumerate() {
            if s.contains(i + 1) {
                out = out.union(*img);
            }
        }
        out
    }

    /// Edge-set containment: true iff `qself ⊆ qother` for every state.
    pub fn leq(&self, other: &Symbol) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::MismatchedStateCount(self.n(), other.n()));
        }
        Ok(self
            .images
            .iter()
            .zip(&other.images)
            .all(|(a, b)| a.is_subset_of(*b)))
    }

    /// Statewise union of images (the union of the two edge sets).
    pub fn union(&self, other: &Symbol) -> Result<Symbol> {
        if self.n() != other.n() {
            return Err(Error::MismatchedStateCount(self.n(), other.n()));
        }
        Ok(Symbol {
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a.union(*b))
                .collect(),
        })
    }

    /// Relabel states through `perm`, where `perm[q-1]` is the new name of `q`.
    pub fn relabeled(&self, perm: &[State]) -> Symbol {
        let n = self.n();
        let mut images = vec![StateSet::EMPTY; n];
        for q in 1..=n {
            let img = StateSet::from_states(self.images[q - 1].iter().map(|p| perm[p - 1]));
            images[perm[q - 1] - 1] = img;
        }
        Symbol { images }
    }

    /// Stable byte encoding used for ordering and canonical forms.
    pub(crate) fn encode_into(&self, out: &mut Vec<u8>) {
        for img in &self.images {
            out.extend_from_slice(&img.bits().to_le_bytes());
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{:?}", i + 1, img)?;
        }
        write!(f, "]")
    }
}

/// Result of [`Automaton::classify_basic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasicClassification {
    /// No symbol is contained in another (the symbols form an antichain).
    pub is_pre_basic: bool,
    /// Pre-basic and the identity symbol is absent.
    pub is_basic: bool,
    pub identity_present: bool,
}

/// Canonical encoding of an automaton; two automata are isomorphic iff
/// their canonical forms are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str) -> Option<CanonicalForm> {
        if !hex.len().is_multiple_of(2) {
            return None;
        }
        let bytes: Option<Vec<u8>> = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).ok())
            .collect();
        Some(CanonicalForm(bytes?))
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

/// A complete nondeterministic finite automaton: a state count plus a
/// duplicate-free set of symbols. A DFA is the special case where every
/// symbol is deterministic.
#[derive(Clone)]
pub struct Automaton {
    n: usize,
    symbols: Vec<Symbol>,
}

impl Automaton {
    /// Build an automaton, dropping duplicate symbols (set semantics).
    /// The first occurrence of each distinct symbol keeps its position.
    pub fn new(n: usize, symbols: Vec<Symbol>) -> Result<Automaton> {
        if n > MAX_STATES {
            return Err(Error::TooManyStates(n));
        }
        let mut kept: Vec<Symbol> = Vec::with_capacity(symbols.len());
        for sym in symbols {
            if sym.n() != n {
                return Err(Error::MismatchedStateCount(sym.n(), n));
            }
            if !kept.contains(&sym) {
                kept.push(sym);
            }
        }
        Ok(Automaton { n, symbols: kept })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> Result<&Symbol> {
        self.symbols.get(index).ok_or(Error::SymbolOutOfRange {
            index,
            len: self.symbols.len(),
        })
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    /// Position of a symbol equal to `sym`, if present.
    pub fn position_of(&self, sym: &Symbol) -> Option<usize> {
        self.symbols.iter().position(|s| s == sym)
    }

    pub fn is_dfa(&self) -> bool {
        self.symbols.iter().all(Symbol::is_deterministic)
    }

    /// `Sw` for a word given as symbol indices, folded left to right.
    /// The empty word is the identity.
    pub fn apply_word(&self, word: &[usize], s: StateSet) -> Result<StateSet> {
        let mut cur = s;
        for &idx in word {
            cur = self.symbol(idx)?.apply(cur);
        }
        Ok(cur)
    }

    /// Antichain / identity classification per the basic and pre-basic notions.
    pub fn classify_basic(&self) -> BasicClassification {
        let identity_present = self.symbols.iter().any(Symbol::is_identity);
        let mut is_pre_basic = true;
        'outer: for (i, a) in self.symbols.iter().enumerate() {
            for (j, b) in self.symbols.iter().enumerate() {
                if i != j && a.leq(b).unwrap_or(false) {
                    is_pre_basic = false;
                    break 'outer;
                }
            }
        }
        BasicClassification {
            is_pre_basic,
            is_basic: is_pre_basic && !identity_present,
            identity_present,
        }
    }

    /// Add the identity symbol (idempotent under set semantics).
    pub fn add_identity(&self) -> Automaton {
        let id = Symbol::identity(self.n);
        if self.symbols.contains(&id) {
            self.clone()
        } else {
            let mut symbols = self.symbols.clone();
            symbols.push(id);
            Automaton { n: self.n, symbols }
        }
    }

    /// Remove the bare identity symbol if present (idempotent).
    pub fn drop_identity(&self) -> Automaton {
        Automaton {
            n: self.n,
            symbols: self
                .symbols
                .iter()
                .filter(|s| !s.is_identity())
                .cloned()
                .collect(),
        }
    }

    /// Containment of automata: true iff every symbol of `self` is contained
    /// in some symbol of `other` (then `other` extends `self`).
    pub fn is_contained_in(&self, other: &Automaton) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::MismatchedStateCount(self.n, other.n));
        }
        for b in &self.symbols {
            let mut found = false;
            for a in &other.symbols {
                if b.leq(a)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relabel states through `perm` (`perm[q-1]` is the new name of `q`).
    /// The symbol set is transported as a set.
    pub fn relabeled(&self, perm: &[State]) -> Automaton {
        Automaton {
            n: self.n,
            symbols: self.symbols.iter().map(|s| s.relabeled(perm)).collect(),
        }
    }

    /// Order-insensitive encoding of the labeled automaton.
    fn encode_sorted(&self) -> Vec<u8> {
        let mut codes: Vec<Vec<u8>> = self
            .symbols
            .iter()
            .map(|s| {
                let mut buf = Vec::with_capacity(2 * self.n);
                s.encode_into(&mut buf);
                buf
            })
            .collect();
        codes.sort_unstable();
        let mut out = Vec::with_capacity(6 + codes.len() * 2 * self.n);
        out.push(self.n as u8);
        out.extend_from_slice(&(codes.len() as u32).to_le_bytes());
        for c in codes {
            out.extend_from_slice(&c);
        }
        out
    }

    /// Lexicographically minimal encoding over all state relabelings.
    ///
    /// Requires `n <= 8`; the minimum is taken over all `n!` permutations.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        if self.n > 8 {
            return Err(Error::Unsupported(format!(
                "canonical form enumerates all permutations and is limited to 8 states, got {}",
                self.n
            )));
        }
        let mut best: Option<Vec<u8>> = None;
        for perm in permutations(self.n) {
            let code = self.relabeled(&perm).encode_sorted();
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        Ok(CanonicalForm(best.unwrap_or_else(|| self.encode_sorted())))
    }

    /// Isomorphism by state relabeling (requires `n <= 8`).
    pub fn is_isomorphic_to(&self, other: &Automaton) -> Result<bool> {
        if self.n != other.n || self.symbol_count() != other.symbol_count() {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// Rebuild an automaton from an encoding produced by [`Automaton::canonical_form`].
    pub fn from_canonical(form: &CanonicalForm) -> Result<Automaton> {
        let bytes = form.as_bytes();
        if bytes.len() < 5 {
            return Err(Error::Corrupted("canonical encoding too short".into()));
        }
        let n = bytes[0] as usize;
        let k = u32::from_le_bytes(bytes[1..5].try_into().unwrap()) as usize;
        if bytes.len() != 5 + k * 2 * n {
            return Err(Error::Corrupted("canonical encoding length mismatch".into()));
        }
        let mut symbols = Vec::with_capacity(k);
        let mut at = 5;
        for _ in 0..k {
            let mut images = Vec::with_capacity(n);
            for _ in 0..n {
                let bits = u16::from_le_bytes(bytes[at..at + 2].try_into().unwrap());
                images.push(StateSet::from_bits(bits));
                at += 2;
            }
            symbols.push(Symbol::new(images)?);
        }
        Automaton::new(n, symbols)
    }

    /// Number of distinct relabelings of this automaton (`n!` / automorphisms).
    /// Requires `n <= 8`.
    pub fn orbit_size(&self) -> Result<u64> {
        if self.n > 8 {
            return Err(Error::Unsupported(format!(
                "orbit size is limited to 8 states, got {}",
                self.n
            )));
        }
        let own = self.encode_sorted();
        let mut stab = 0u64;
        let mut total = 0u64;
        for perm in permutations(self.n) {
            total += 1;
            if self.relabeled(&perm).encode_sorted() == own {
                stab += 1;
            }
        }
        Ok(total / stab)
    }
}

impl PartialEq for Automaton {
    /// Set equality: same state count and the same set of symbols,
    /// regardless of stored order.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.encode_sorted() == other.encode_sorted()
    }
}

impl Eq for Automaton {}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automaton(n={}, {:?})", self.n, self.symbols)
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<State>> {
    let mut out = Vec::new();
    let mut cur: Vec<State> = (1..=n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Seeded random CNFA generator. Every image keeps one mandatory state and
/// gains each further state with probability `density`, so `density == 0.0`
/// yields a DFA. Duplicate symbols are dropped, so the result may have fewer
/// than `symbol_count` symbols.
pub fn random_cnfa(n: usize, symbol_count: usize, density: f64, seed: u64) -> Result<Automaton> {
    if n > MAX_STATES {
        return Err(Error::TooManyStates(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols = Vec::with_capacity(symbol_count);
    for _ in 0..symbol_count {
        let mut images = Vec::with_capacity(n);
        for _ in 0..n {
            let mut img = StateSet::singleton(rng.random_range(1..=n));
            for q in 1..=n {
                if density > 0.0 && rng.random_bool(density) {
                    img.insert(q);
                }
            }
            images.push(img);
        }
        symbols.push(Symbol::new(images)?);
    }
    Automaton::new(n, symbols)
}
