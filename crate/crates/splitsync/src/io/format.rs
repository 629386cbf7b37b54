//! The automaton text format.
//!
//! ```text
//! # comment lines start with '#'
//! cnfa 3
//! sym a : 1,3 ; 2 ; 1
//! sym b : 2 ; 1 ; 2,3
//! ```
//!
//! The header is `cnfa <n>` or `dfa <n>`; a `dfa` header additionally
//! requires every image to be a singleton. Each `sym` line gives one image
//! per state, as a strictly ascending comma-separated list of 1-based
//! states. Symbol names are display metadata: they are preserved by
//! parsing and serializing but take no part in automaton equality.

use crate::automaton::{Automaton, StateSet, Symbol, MAX_STATES};
use crate::{Error, Result};

/// An automaton together with its display symbol names, in file order.
#[derive(Clone, Debug)]
pub struct AutomatonDoc {
    automaton: Automaton,
    names: Vec<String>,
}

impl AutomatonDoc {
    /// Wrap an automaton with generated names (`a`, `b`, ..., `z`, `s26`, ...).
    pub fn from_automaton(automaton: &Automaton) -> AutomatonDoc {
        let names = (0..automaton.symbol_count()).map(default_name).collect();
        AutomatonDoc {
            automaton: automaton.clone(),
            names,
        }
    }

    pub fn with_names(automaton: Automaton, names: Vec<String>) -> Result<AutomatonDoc> {
        if names.len() != automaton.symbol_count() {
            return Err(Error::Unsupported(format!(
                "{} names for {} symbols",
                names.len(),
                automaton.symbol_count()
            )));
        }
        Ok(AutomatonDoc { automaton, names })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Render a word of symbol indices as display names.
    pub fn word_names(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&i| self.names[i].clone()).collect()
    }
}

pub fn default_name(index: usize) -> String {
    if index < 26 {
        ((b'a' + index as u8) as char).to_string()
    } else {
        format!("s{index}")
    }
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parse the text format. Every byte sequence either parses or produces a
/// positioned diagnostic; the parser never panics.
pub fn parse(text: &str) -> Result<AutomatonDoc> {
    let mut header: Option<(bool, usize, usize)> = None; // (is_dfa, n, line)
    let mut names: Vec<String> = Vec::new();
    let mut symbols: Vec<Symbol> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let mut parts = line.split_whitespace();
                let kind = parts.next().unwrap_or_default();
                let is_dfa = match kind {
                    "cnfa" => false,
                    "dfa" => true,
                    other => {
                        return Err(err(
                            lineno,
                            1,
                            format!("expected header `cnfa <n>` or `dfa <n>`, found `{other}`"),
                        ))
                    }
                };
                let n: usize = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| err(lineno, kind.len() + 2, "missing or invalid state count"))?;
                if n == 0 || n > MAX_STATES {
                    return Err(err(
                        lineno,
                        kind.len() + 2,
                        format!("state count must be within 1..={MAX_STATES}, got {n}"),
                    ));
                }
                if parts.next().is_some() {
                    return Err(err(lineno, 1, "trailing tokens after header"));
                }
                header = Some((is_dfa, n, lineno));
            }
            Some((is_dfa, n, _)) => {
                let sym = parse_symbol_line(line, lineno, n, is_dfa)?;
                if let Some(prev) = symbols.iter().position(|s| *s == sym.1) {
                    return Err(err(
                        lineno,
                        1,
                        format!(
                            "symbol `{}` duplicates the body of `{}`",
                            sym.0, names[prev]
                        ),
                    ));
                }
                if names.contains(&sym.0) {
                    return Err(err(lineno, 5, format!("symbol name `{}` reused", sym.0)));
                }
                names.push(sym.0);
                symbols.push(sym.1);
            }
        }
    }
    let Some((_, n, _)) = header else {
        return Err(err(1, 1, "empty input: expected `cnfa <n>` or `dfa <n>` header"));
    };
    let automaton = Automaton::new(n, symbols)?;
    AutomatonDoc::with_names(automaton, names)
}

fn parse_symbol_line(line: &str, lineno: usize, n: usize, is_dfa: bool) -> Result<(String, Symbol)> {
    let rest = line
        .strip_prefix("sym")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| err(lineno, 1, "expected `sym <name> : <images>`"))?;
    let (name_part, images_part) = rest
        .split_once(':')
        .ok_or_else(|| err(lineno, line.len(), "missing `:` after symbol name"))?;
    let name = name_part.trim();
    if name.is_empty() {
        return Err(err(lineno, 4, "missing symbol name"));
    }
    if name.contains([':', ';', ',', '#']) || name.split_whitespace().count() != 1 {
        return Err(err(lineno, 5, format!("invalid symbol name `{name}`")));
    }
    let groups: Vec<&str> = images_part.split(';').collect();
    if groups.len() != n {
        return Err(err(
            lineno,
            line.len(),
            format!("expected {n} images separated by `;`, found {}", groups.len()),
        ));
    }
    let mut images = Vec::with_capacity(n);
    for (gi, group) in groups.iter().enumerate() {
        let group = group.trim();
        if group.is_empty() {
            return Err(err(
                lineno,
                1,
                format!("empty image for state {}: completeness requires a nonempty set", gi + 1),
            ));
        }
        let mut img = StateSet::EMPTY;
        let mut last = 0usize;
        for tok in group.split(',') {
            let state: usize = tok
                .trim()
                .parse()
                .map_err(|_| err(lineno, 1, format!("invalid state `{}`", tok.trim())))?;
            if state < 1 || state > n {
                return Err(err(
                    lineno,
                    1,
                    format!("state {state} out of range 1..={n}"),
                ));
            }
            if state <= last {
                return Err(err(
                    lineno,
                    1,
                    format!("image states must be strictly ascending, `{state}` after `{last}`"),
                ));
            }
            last = state;
            img.insert(state);
        }
        if is_dfa && img.len() != 1 {
            return Err(err(
                lineno,
                1,
                format!("`dfa` header requires singleton images, state {} has {:?}", gi + 1, img),
            ));
        }
        images.push(img);
    }
    Ok((name.to_string(), Symbol::new(images)?))
}

/// Serialize to the text format; `parse(serialize(doc))` reproduces the
/// document exactly (symbol order and names included).
pub fn serialize(doc: &AutomatonDoc) -> String {
    let a = doc.automaton();
    let mut out = String::new();
    let header = if a.is_dfa() { "dfa" } else { "cnfa" };
    out.push_str(&format!("{header} {}\n", a.n()));
    for (i, sym) in a.symbols().iter().enumerate() {
        let images: Vec<String> = (1..=a.n())
            .map(|q| {
                sym.image(q)
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        out.push_str(&format!("sym {} : {}\n", doc.name_of(i), images.join(" ; ")));
    }
    out
}
