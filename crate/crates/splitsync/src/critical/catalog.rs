//! Named catalog of critical automata. The parametric families are built
//! in code; the small fixed families live in the data directory as text
//! files pinned from search runs, and the five- and six-state entries are
//! external inputs. Every entry is re-verified at its expected length when
//! loaded, so a transcription error in a data file cannot go unnoticed.

use std::path::PathBuf;

use crate::automaton::Automaton;
use crate::critical::{cerny, cerny_cnfa};
use crate::directing::{d3_implicit, dfa_shortest_sync};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Generated in code (the cyclic family and its extension).
    Builtin,
    /// Derived once by the exhaustive search and pinned as a data file.
    DerivedBySearch,
    /// External input shipped as a data file; re-deriving it is out of
    /// reach of the bundled search tiers.
    ExternalData,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub automaton: Automaton,
    pub expected_length: usize,
    pub provenance: Provenance,
}

pub const CATALOG_NAMES: [&str; 8] = [
    "cerny",
    "cerny-cnfa",
    "a3",
    "a4",
    "c4",
    "t42",
    "roman",
    "kari",
];

/// Resolve the catalog data directory: `SPLITSYNC_DATA` wins, then `./data`,
/// then the repository-level `data/` next to the workspace manifest.
pub fn data_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("SPLITSYNC_DATA") {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("data");
    if local.is_dir() {
        return local;
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("data")
}

fn manifest_expected(name: &str) -> Result<usize> {
    let path = data_dir().join("manifest.txt");
    let text = std::fs::read_to_string(&path)
        .map_err(|_| Error::MissingData(format!("manifest not found at {}", path.display())))?;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        if parts.next() == Some(name) {
            return parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Corrupted(format!("bad manifest line `{line}`")));
        }
    }
    Err(Error::MissingData(format!(
        "no manifest entry for `{name}` in {}",
        path.display()
    )))
}

fn load_data_entry(name: &str, provenance: Provenance) -> Result<CatalogEntry> {
    let expected_length = manifest_expected(name)?;
    let path = data_dir().join(format!("{name}.dfa"));
    let text = std::fs::read_to_string(&path)
        .map_err(|_| Error::MissingData(format!("data file not found at {}", path.display())))?;
    let doc = crate::io::parse(&text)?;
    let automaton = doc.automaton().clone();
    let report = dfa_shortest_sync(&automaton)?;
    if report.length != Some(expected_length) {
        return Err(Error::CatalogVerification {
            name: name.to_string(),
            expected: expected_length.to_string(),
            actual: format!("{:?}", report.length),
        });
    }
    Ok(CatalogEntry {
        name: name.to_string(),
        automaton,
        expected_length,
        provenance,
    })
}

/// Look up a catalog entry; `n` selects the size for the parametric
/// families and is rejected for the fixed ones.
pub fn catalog(name: &str, n: Option<usize>) -> Result<CatalogEntry> {
    match name {
        "cerny" | "cerny-cnfa" => {
            let n = n.ok_or_else(|| {
                Error::Unsupported(format!("catalog entry `{name}` needs a state count"))
            })?;
            let expected = (n.max(1) - 1) * (n.max(1) - 1);
            let (automaton, actual) = if name == "cerny" {
                let d = cerny(n)?;
                let len = dfa_shortest_sync(&d)?.length;
                (d, len)
            } else {
                let c = cerny_cnfa(n)?;
                let len = d3_implicit(&c)?.length;
                (c, len)
            };
            if actual != Some(expected) {
                return Err(Error::CatalogVerification {
                    name: name.to_string(),
                    expected: expected.to_string(),
                    actual: format!("{actual:?}"),
                });
            }
            Ok(CatalogEntry {
                name: name.to_string(),
                automaton,
                expected_length: expected,
                provenance: Provenance::Builtin,
            })
        }
        "a3" | "a4" | "c4" | "t42" => {
            reject_n(name, n)?;
            load_data_entry(name, Provenance::DerivedBySearch)
        }
        "roman" | "kari" => {
            reject_n(name, n)?;
            load_data_entry(name, Provenance::ExternalData)
        }
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

fn reject_n(name: &str, n: Option<usize>) -> Result<()> {
    match n {
        None => Ok(()),
        Some(_) => Err(Error::Unsupported(format!(
            "catalog entry `{name}` is not parametric"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_entries_verify() {
        let c = catalog("cerny", Some(4)).unwrap();
        assert_eq!(c.expected_length, 9);
        assert_eq!(c.provenance, Provenance::Builtin);
        let e = catalog("cerny-cnfa", Some(6)).unwrap();
        assert_eq!(e.expected_length, 25);
    }

    #[test]
    fn unknown_and_misused_names() {
        assert!(matches!(
            catalog("frobnicate", None),
            Err(Error::UnknownCatalog(_))
        ));
        assert!(catalog("cerny", None).is_err());
        assert!(catalog("a3", Some(3)).is_err());
    }
}
