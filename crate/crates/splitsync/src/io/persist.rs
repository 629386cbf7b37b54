//! Census persistence: one automaton file per member plus an index file
//! carrying counts, verification status and content hashes. Reloading
//! rebuilds the report deterministically and detects tampered files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::automaton::Automaton;
use crate::critical::{basic_critical_from_dfa, has_short_cycle, symbol_graph, CensusClass, CensusMember, CensusReport};
use crate::io::format::{parse, serialize, AutomatonDoc};
use crate::{Error, Result};

/// FNV-1a 64-bit content hash used for integrity checks in index files.
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

const INDEX_HEADER: &str = "splitsync-census 1";

/// Write a census report into `dir`: `class<i>.dfa` for every source class,
/// `member<i>.cnfa` for every member (canonical order), and `index.txt`.
pub fn persist_census(report: &CensusReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut index = String::new();
    index.push_str(INDEX_HEADER);
    index.push('\n');
    index.push_str(&format!("n {}\n", report.n));
    index.push_str(&format!("target {}\n", report.target));
    index.push_str(&format!("labeled {}\n", report.labeled_total));
    index.push_str(&format!("iso {}\n", report.iso_total));
    index.push_str(&format!("verified {}\n", report.verified));
    for (i, class) in report.classes.iter().enumerate() {
        let file = format!("class{i:02}.dfa");
        let text = serialize(&AutomatonDoc::from_automaton(&class.dfa));
        fs::write(dir.join(&file), &text)?;
        index.push_str(&format!("class {file} {:016x}\n", fnv64(text.as_bytes())));
    }
    for (i, member) in report.members.iter().enumerate() {
        let file = format!("member{i:03}.cnfa");
        let text = serialize(&AutomatonDoc::from_automaton(&member.automaton));
        fs::write(dir.join(&file), &text)?;
        index.push_str(&format!(
            "member {file} {:016x} {}\n",
            fnv64(text.as_bytes()),
            member.d3
        ));
    }
    fs::write(dir.join("index.txt"), index)?;
    Ok(())
}

fn read_hashed(dir: &Path, file: &str, expect: u64) -> Result<Automaton> {
    let path = dir.join(file);
    let text = fs::read_to_string(&path)
        .map_err(|_| Error::Corrupted(format!("missing archive file {file}")))?;
    if fnv64(text.as_bytes()) != expect {
        return Err(Error::Corrupted(format!(
            "content hash mismatch for {file}"
        )));
    }
    Ok(parse(&text)?.automaton().clone())
}

/// Reload a persisted census. Class-level data (orbits, graphs, labeled
/// member lists) is recomputed from the persisted class DFAs, which is
/// deterministic, so the result matches the original report exactly.
pub fn load_census(dir: &Path) -> Result<CensusReport> {
    let text = fs::read_to_string(dir.join("index.txt"))
        .map_err(|_| Error::Corrupted("missing index.txt".into()))?;
    let mut lines = text.lines();
    if lines.next() != Some(INDEX_HEADER) {
        return Err(Error::Corrupted("unrecognized index header".into()));
    }
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    let mut class_files: Vec<(String, u64)> = Vec::new();
    let mut member_files: Vec<(String, u64, usize)> = Vec::new();
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["class", file, hash] => {
                let hash = u64::from_str_radix(hash, 16)
                    .map_err(|_| Error::Corrupted(format!("bad hash on line `{line}`")))?;
                class_files.push((file.to_string(), hash));
            }
            ["member", file, hash, d3] => {
                let hash = u64::from_str_radix(hash, 16)
                    .map_err(|_| Error::Corrupted(format!("bad hash on line `{line}`")))?;
                let d3 = d3
                    .parse()
                    .map_err(|_| Error::Corrupted(format!("bad length on line `{line}`")))?;
                member_files.push((file.to_string(), hash, d3));
            }
            [key, value] => {
                fields.insert(key, value);
            }
            [] => {}
            _ => return Err(Error::Corrupted(format!("unrecognized index line `{line}`"))),
        }
    }
    let get = |key: &str| -> Result<&str> {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| Error::Corrupted(format!("index missing `{key}`")))
    };
    let n: usize = get("n")?.parse().map_err(|_| Error::Corrupted("bad n".into()))?;
    let target: usize = get("target")?
        .parse()
        .map_err(|_| Error::Corrupted("bad target".into()))?;
    let labeled_total: u64 = get("labeled")?
        .parse()
        .map_err(|_| Error::Corrupted("bad labeled count".into()))?;
    let iso_total: u64 = get("iso")?
        .parse()
        .map_err(|_| Error::Corrupted("bad iso count".into()))?;
    let verified: bool = get("verified")?
        .parse()
        .map_err(|_| Error::Corrupted("bad verified flag".into()))?;
    if member_files.len() as u64 != iso_total {
        return Err(Error::Corrupted(format!(
            "index promises {iso_total} members but lists {}",
            member_files.len()
        )));
    }
    let mut classes = Vec::with_capacity(class_files.len());
    let mut collisions = Vec::new();
    for (file, hash) in class_files {
        let dfa = read_hashed(dir, &file, hash)?;
        let canonical = dfa.canonical_form()?;
        let orbit_size = dfa.orbit_size()?;
        let plus = dfa.add_identity();
        let graph = symbol_graph(&plus)?;
        let complete = !has_short_cycle(&graph) || n == 2;
        let cnfas = basic_critical_from_dfa(&dfa)?;
        let mut seen = std::collections::BTreeSet::new();
        for c in &cnfas {
            if !seen.insert(c.canonical_form()?) {
                collisions.push(format!("class {file} produced isomorphic members"));
            }
        }
        classes.push(CensusClass {
            dfa,
            canonical,
            orbit_size,
            edge_count: graph.edges.len(),
            complete,
            cnfas,
        });
    }
    let mut members = Vec::with_capacity(member_files.len());
    for (file, hash, d3) in member_files {
        let automaton = read_hashed(dir, &file, hash)?;
        let canonical = automaton.canonical_form()?;
        members.push(CensusMember {
            automaton,
            canonical,
            d3,
        });
    }
    Ok(CensusReport {
        n,
        target,
        classes,
        labeled_total,
        members,
        iso_total,
        verified,
        collisions,
    })
}
