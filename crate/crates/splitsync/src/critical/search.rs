//! Exhaustive search for basic critical DFAs on few states.
//!
//! The search walks sorted chains of deterministic non-identity symbols in
//! index order. Adding a symbol can only shorten the shortest synchronizing
//! word, so a chain is abandoned as soon as its length drops below the
//! target; sets whose length is exactly the target are recorded, and
//! non-synchronizing sets are walked through. Three further prunes keep the
//! walk tractable:
//!
//! - symbols that synchronize on their own faster than the target can never
//!   appear in a recorded set and are dropped from the universe up front;
//! - a set that is not the lexicographically smallest relabeling of itself
//!   is skipped: every prefix of the lex-least member of an isomorphism
//!   orbit is itself lex-least, so one representative per orbit survives;
//! - when the set together with its whole remaining tail cannot reach the
//!   target (no synchronization at all, or only above the target), the
//!   subtree is dead and is cut.
//!
//! Results are deduplicated by canonical form; labeled counts are recovered
//! from orbit sizes.

use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::automaton::{permutations, Automaton, CanonicalForm, Symbol};
use crate::{Error, Result};

/// One isomorphism class of basic critical DFAs found by the search.
#[derive(Clone, Debug)]
pub struct SearchClass {
    pub automaton: Automaton,
    pub canonical: CanonicalForm,
    pub orbit_size: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub n: usize,
    pub target: usize,
    /// One representative per class, sorted by canonical form.
    pub classes: Vec<SearchClass>,
    /// Number of labeled basic critical DFAs (sum of orbit sizes).
    pub labeled_total: u64,
    /// DFS nodes expanded, for diagnostics.
    pub nodes: u64,
}

/// Exhaustive search for basic DFAs whose shortest synchronizing word has
/// length exactly `target` (default `(n-1)^2`). Guaranteed fast for
/// `n <= 3`; `n = 4` is the extended tier with a multi-hour budget, see
/// [`critical_dfa_search_with`] for checkpointing.
pub fn critical_dfa_search(n: usize, target: Option<usize>) -> Result<SearchOutcome> {
    critical_dfa_search_with(n, target, None, false)
}

pub fn critical_dfa_search_with(
    n: usize,
    target: Option<usize>,
    checkpoint: Option<&Path>,
    progress: bool,
) -> Result<SearchOutcome> {
    if !(2..=4).contains(&n) {
        return Err(Error::Unsupported(format!(
            "critical DFA search supports 2 to 4 states, got {n}"
        )));
    }
    let target = target.unwrap_or((n - 1) * (n - 1));
    search_basic_critical(n, target, None, checkpoint, progress)
}

/// The underlying engine, also used with a symbol-count cap to re-derive
/// catalog data files. Supports up to 6 states; the caller is responsible
/// for keeping the instance tractable.
#[doc(hidden)]
pub fn search_basic_critical(
    n: usize,
    target: usize,
    max_symbols: Option<usize>,
    checkpoint: Option<&Path>,
    progress: bool,
) -> Result<SearchOutcome> {
    if !(2..=6).contains(&n) {
        return Err(Error::Unsupported(format!(
            "the search engine supports 2 to 6 states, got {n}"
        )));
    }
    let mut ctx = SearchCtx::new(n, target, max_symbols, checkpoint)?;
    ctx.run(progress)?;
    ctx.finish()
}

/// A symbol of the search universe: a deterministic map with its
/// per-subset application table.
struct UniverseSym {
    targets: Vec<usize>,
    /// `app[mask]` = image mask of the subset `mask`.
    app: Vec<u16>,
}

struct SearchCtx {
    n: usize,
    target: u32,
    max_symbols: usize,
    universe: Vec<UniverseSym>,
    /// `conj[p][i]` = universe index of permutation `p` applied to symbol `i`.
    conj: Vec<Vec<u32>>,
    found: BTreeMap<CanonicalForm, Automaton>,
    nodes: u64,
    // scratch buffers
    conj_buf: Vec<u32>,
    closure_buf: Vec<u32>,
    checkpoint: Option<CheckpointFile>,
}

impl SearchCtx {
    fn new(
        n: usize,
        target: usize,
        max_symbols: Option<usize>,
        checkpoint: Option<&Path>,
    ) -> Result<SearchCtx> {
        let size = 1usize << n;
        let code_count = n.pow(n as u32);
        // all non-identity maps, pre-filtered: a symbol whose solo
        // synchronization beats the target can never occur in a recorded set
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut code_targets = vec![0usize; n];
        for code in 0..code_count {
            let mut c = code;
            for t in code_targets.iter_mut() {
                *t = c % n + 1;
                c /= n;
            }
            if code_targets.iter().enumerate().all(|(i, &t)| t == i + 1) {
                continue; // identity
            }
            maps.push(code_targets.clone());
        }
        let mut universe = Vec::new();
        for targets in maps {
            let mut app = vec![0u16; size];
            for (mask, slot) in app.iter_mut().enumerate() {
                let mut out = 0u16;
                for (q, &t) in targets.iter().enumerate() {
                    if mask & (1 << q) != 0 {
                        out |= 1 << (t - 1);
                    }
                }
                *slot = out;
            }
            let candidate = UniverseSym { targets, app };
            let solo = sync_over(std::slice::from_ref(&candidate), &[0], n);
            let keep = match solo {
                None => true,
                Some(l) => l >= target as u32,
            };
            if keep {
                universe.push(candidate);
            }
        }
        // universe is in code order; conjugation tables per permutation
        let code_of = |targets: &[usize]| -> usize {
            targets
                .iter()
                .rev()
                .fold(0usize, |acc, &t| acc * n + (t - 1))
        };
        let mut index_of_code = vec![u32::MAX; code_count];
        for (i, s) in universe.iter().enumerate() {
            index_of_code[code_of(&s.targets)] = i as u32;
        }
        let perms = permutations(n);
        let mut conj = Vec::with_capacity(perms.len());
        for perm in &perms {
            let mut table = Vec::with_capacity(universe.len());
            for s in &universe {
                let mut relabeled = vec![0usize; n];
                for (q, &t) in s.targets.iter().enumerate() {
                    relabeled[perm[q] - 1] = perm[t - 1];
                }
                let idx = index_of_code[code_of(&relabeled)];
                debug_assert_ne!(idx, u32::MAX, "universe is closed under relabeling");
                table.push(idx);
            }
            conj.push(table);
        }
        let checkpoint = match checkpoint {
            Some(path) => Some(CheckpointFile::open(path, n, target, universe.len())?),
            None => None,
        };
        Ok(SearchCtx {
            n,
            target: target as u32,
            max_symbols: max_symbols.unwrap_or(usize::MAX),
            universe,
            conj,
            found: BTreeMap::new(),
            nodes: 0,
            conj_buf: Vec::new(),
            closure_buf: Vec::new(),
            checkpoint,
        })
    }

    fn sync_length(&mut self, set: &[u32]) -> Option<u32> {
        self.nodes += 1;
        sync_over(&self.universe, set, self.n)
    }

    /// Length of the set extended by its whole remaining tail; descendants
    /// of the node can only be slower than this.
    fn closure_length(&mut self, set: &[u32], tail_from: usize) -> Option<u32> {
        self.closure_buf.clear();
        self.closure_buf.extend_from_slice(set);
        self.closure_buf
            .extend((tail_from as u32)..(self.universe.len() as u32));
        let indices = std::mem::take(&mut self.closure_buf);
        let out = sync_over(&self.universe, &indices, self.n);
        self.closure_buf = indices;
        out
    }

    /// Is `set` (sorted) the lexicographically least member of its orbit?
    ///
    /// Fast path: for most permutations the smallest conjugated index
    /// already differs from `set[0]`, which decides the comparison without
    /// sorting; the full sort is only needed on a first-element tie.
    fn is_lex_min(&mut self, set: &[u32]) -> bool {
        let first = set[0];
        for p in 1..self.conj.len() {
            let table = &self.conj[p];
            let mut min = u32::MAX;
            for &s in set {
                let c = table[s as usize];
                if c < min {
                    min = c;
                }
            }
            if min < first {
                return false;
            }
            if min > first {
                continue;
            }
            self.conj_buf.clear();
            for &s in set {
                self.conj_buf.push(table[s as usize]);
            }
            self.conj_buf.sort_unstable();
            if self.conj_buf.as_slice() < set {
                return false;
            }
        }
        true
    }

    fn record(&mut self, set: &[u32]) -> Result<()> {
        let symbols: Vec<Symbol> = set
            .iter()
            .map(|&i| Symbol::from_map(&self.universe[i as usize].targets))
            .collect::<Result<_>>()?;
        let automaton = Automaton::new(self.n, symbols)?;
        let canon = automaton.canonical_form()?;
        if !self.found.contains_key(&canon) {
            if let Some(cp) = &mut self.checkpoint {
                cp.write_found(&canon)?;
            }
            self.found.insert(canon, automaton);
        }
        Ok(())
    }

    fn keep(&self, len: Option<u32>) -> bool {
        match len {
            None => true,
            Some(l) => l >= self.target,
        }
    }

    fn dfs(&mut self, set: &mut Vec<u32>) -> Result<()> {
        let start = set.last().map_or(0, |&s| s as usize + 1);
        if start >= self.universe.len() || set.len() >= self.max_symbols {
            return Ok(());
        }
        // the whole-tail cut only fires once the tail is structurally
        // confined, which needs the tail to be short; skip the check while
        // it is long and almost surely synchronizing
        if self.universe.len() - start <= 64 {
            match self.closure_length(set, start) {
                None => return Ok(()),
                Some(l) if l > self.target => return Ok(()),
                _ => {}
            }
        }
        // per-node: the smallest conjugated index of the current set under
        // every permutation; set extensions only add one element, so the
        // child lex-min test needs one lookup per permutation
        let mut min_of = [u32::MAX; 720];
        for (slot, table) in min_of.iter_mut().zip(&self.conj).skip(1) {
            *slot = set.iter().map(|&s| table[s as usize]).min().unwrap();
        }
        for c in start..self.universe.len() {
            if !self.child_is_lex_min(set, c as u32, &min_of) {
                continue;
            }
            set.push(c as u32);
            let len = self.sync_length(set);
            if self.keep(len) {
                if len == Some(self.target) {
                    self.record(set)?;
                }
                self.dfs(set)?;
            }
            set.pop();
        }
        Ok(())
    }

    /// Lex-min test for `set ∪ {c}` given the per-permutation minima of
    /// `set` (which is itself lex-min and sorted below `c`).
    fn child_is_lex_min(&mut self, set: &[u32], c: u32, min_of: &[u32; 720]) -> bool {
        let s0 = set[0];
        let buf = &mut self.conj_buf;
        for (p, table) in self.conj.iter().enumerate().skip(1) {
            let cp = table[c as usize];
            let first = min_of[p].min(cp);
            if first > s0 {
                continue;
            }
            if first < s0 {
                return false;
            }
            // first elements tie: full comparison for this permutation
            buf.clear();
            for &s in set {
                buf.push(table[s as usize]);
            }
            buf.push(cp);
            buf.sort_unstable();
            for (i, &v) in buf.iter().enumerate() {
                let w = if i < set.len() { set[i] } else { c };
                if v < w {
                    return false;
                }
                if v > w {
                    break;
                }
            }
        }
        true
    }

    fn run(&mut self, progress: bool) -> Result<()> {
        let started = Instant::now();
        let universe_len = self.universe.len();
        let (seed, done) = match &self.checkpoint {
            Some(cp) => (cp.found_seed.clone(), cp.done.clone()),
            None => (Vec::new(), HashSet::new()),
        };
        for hex in seed {
            let canon = CanonicalForm::from_hex(&hex)
                .ok_or_else(|| Error::Corrupted(format!("bad canonical form {hex}")))?;
            let automaton = Automaton::from_canonical(&canon)?;
            self.found.insert(canon, automaton);
        }
        for i in 0..universe_len as u32 {
            let mut set = vec![i];
            if !self.is_lex_min(&set) {
                continue;
            }
            let solo = self.sync_length(&set);
            if !self.keep(solo) {
                continue;
            }
            if solo == Some(self.target) {
                self.record(&set)?;
            }
            if self.max_symbols == 1 {
                continue;
            }
            for j in (i + 1)..universe_len as u32 {
                if done.contains(&(i, j)) {
                    continue;
                }
                set.truncate(1);
                set.push(j);
                if self.is_lex_min(&set) {
                    let len = self.sync_length(&set);
                    if self.keep(len) {
                        if len == Some(self.target) {
                            self.record(&set)?;
                        }
                        self.dfs(&mut set)?;
                    }
                }
                if let Some(cp) = &mut self.checkpoint {
                    cp.write_done(i, j)?;
                }
            }
            if progress {
                eprintln!(
                    "search n={} target={}: root {}/{} done, {} classes, {} nodes, {:.0?} elapsed",
                    self.n,
                    self.target,
                    i + 1,
                    universe_len,
                    self.found.len(),
                    self.nodes,
                    started.elapsed()
                );
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<SearchOutcome> {
        let mut classes = Vec::with_capacity(self.found.len());
        let mut labeled_total = 0u64;
        for (canonical, automaton) in self.found {
            let orbit_size = automaton.orbit_size()?;
            labeled_total += orbit_size;
            classes.push(SearchClass {
                automaton,
                canonical,
                orbit_size,
            });
        }
        Ok(SearchOutcome {
            n: self.n,
            target: self.target as usize,
            classes,
            labeled_total,
            nodes: self.nodes,
        })
    }
}

/// BFS shortest synchronizing length over the subset lattice, applying the
/// universe symbols selected by `indices`. `None` when no singleton is
/// reachable. Fixed-size scratch keeps this allocation free (n <= 6).
fn sync_over(universe: &[UniverseSym], indices: &[u32], n: usize) -> Option<u32> {
    debug_assert!(n <= 6);
    let size = 1usize << n;
    let full = size - 1;
    if full.count_ones() <= 1 {
        return Some(0);
    }
    let mut dist = [u8::MAX; 64];
    let mut queue = [0u16; 64];
    let mut head = 0usize;
    let mut len = 0usize;
    dist[full] = 0;
    queue[len] = full as u16;
    len += 1;
    while head < len {
        let mask = queue[head] as usize;
        head += 1;
        let dist_here = dist[mask];
        for &i in indices {
            let t = universe[i as usize].app[mask] as usize;
            if dist[t] == u8::MAX {
                if (t as u16).count_ones() == 1 {
                    return Some(dist_here as u32 + 1);
                }
                dist[t] = dist_here + 1;
                queue[len] = t as u16;
                len += 1;
            }
        }
    }
    None
}

/// Append-only checkpoint for resumable searches: `found <hex>` lines for
/// recorded canonical forms and `done <i> <j>` lines for completed pair
/// subtrees.
struct CheckpointFile {
    writer: BufWriter<File>,
    #[allow(dead_code)]
    path: PathBuf,
    done: HashSet<(u32, u32)>,
    found_seed: Vec<String>,
}

impl CheckpointFile {
    fn open(path: &Path, n: usize, target: usize, universe: usize) -> Result<CheckpointFile> {
        let header = format!("splitsync-search 1 n={n} target={target} universe={universe}");
        let mut done = HashSet::new();
        let mut found_seed = Vec::new();
        let exists = path.exists();
        if exists {
            let reader = BufReader::new(File::open(path)?);
            let mut lines = reader.lines();
            match lines.next() {
                Some(Ok(first)) if first == header => {}
                Some(Ok(other)) => {
                    return Err(Error::Corrupted(format!(
                        "checkpoint header mismatch: `{other}` vs `{header}`"
                    )))
                }
                _ => return Err(Error::Corrupted("empty checkpoint file".into())),
            }
            for line in lines {
                let line = line?;
                let mut parts = line.split_whitespace();
                match parts.next() {
                    Some("found") => {
                        if let Some(hex) = parts.next() {
                            found_seed.push(hex.to_string());
                        }
                    }
                    Some("done") => {
                        let i = parts.next().and_then(|x| x.parse().ok());
                        let j = parts.next().and_then(|x| x.parse().ok());
                        if let (Some(i), Some(j)) = (i, j) {
                            done.insert((i, j));
                        }
                    }
                    _ => {}
                }
            }
        }
        let mut writer = BufWriter::new(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?,
        );
        if !exists {
            writeln!(writer, "{header}")?;
            writer.flush()?;
        }
        Ok(CheckpointFile {
            writer,
            path: path.to_path_buf(),
            done,
            found_seed,
        })
    }

    fn write_found(&mut self, canon: &CanonicalForm) -> Result<()> {
        writeln!(self.writer, "found {}", canon.to_hex())?;
        Ok(())
    }

    fn write_done(&mut self, i: u32, j: u32) -> Result<()> {
        writeln!(self.writer, "done {i} {j}")?;
        self.writer.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_search_finds_six_labeled_four_classes() {
        let out = critical_dfa_search(2, None).unwrap();
        assert_eq!(out.classes.len(), 4);
        assert_eq!(out.labeled_total, 6);
        for class in &out.classes {
            assert_eq!(
                crate::directing::dfa_shortest_sync(&class.automaton)
                    .unwrap()
                    .length,
                Some(1)
            );
            assert!(class.automaton.classify_basic().is_basic);
        }
    }

    #[test]
    fn three_state_search_finds_fifteen_classes() {
        let out = critical_dfa_search(3, None).unwrap();
        assert_eq!(out.classes.len(), 15);
        // the maximal class has 5 symbols and every class is one of its
        // restrictions up to relabeling
        let maximal: Vec<_> = out
            .classes
            .iter()
            .filter(|c| c.automaton.symbol_count() == 5)
            .collect();
        assert_eq!(maximal.len(), 1);
        let big = &maximal[0].automaton;
        for class in &out.classes {
            assert!(
                crate::critical::is_restriction_up_to_iso(&class.automaton, big),
                "{:?}",
                class.automaton
            );
        }
        // the Černý DFA is one of the classes
        let c3 = crate::critical::cerny(3).unwrap();
        let canon = c3.canonical_form().unwrap();
        assert!(out.classes.iter().any(|c| c.canonical == canon));
    }

    #[test]
    fn search_guard() {
        assert!(critical_dfa_search(5, None).is_err());
        assert!(critical_dfa_search(1, None).is_err());
    }

    #[test]
    fn checkpoint_resume_reproduces_results() {
        let dir = std::env::temp_dir().join(format!("splitsync-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("search3.ckpt");
        let _ = std::fs::remove_file(&path);
        let fresh = critical_dfa_search_with(3, None, Some(&path), false).unwrap();
        // resume from the finished checkpoint: all pairs are done, so the
        // run only reloads recorded classes
        let resumed = critical_dfa_search_with(3, None, Some(&path), false).unwrap();
        assert_eq!(fresh.classes.len(), resumed.classes.len());
        for (a, b) in fresh.classes.iter().zip(&resumed.classes) {
            assert_eq!(a.canonical, b.canonical);
        }
        assert!(resumed.nodes < fresh.nodes);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
