//! Machine-readable result document (`--json` output). One versioned
//! structure covers all subcommands; absent sections are omitted from the
//! serialized form, and serialization is deterministic.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directing: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sync_state: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accepted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sync_states: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tightest: Option<BoundDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub automata: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts_labeled: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts_iso: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog_name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub automaton: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ResultDocument {
    pub fn new(command: &str) -> ResultDocument {
        ResultDocument {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            n: None,
            directing: None,
            length: None,
            witness: None,
            sync_state: None,
            engine: None,
            accepted: None,
            sync_states: None,
            classes: None,
            bounds: None,
            tightest: None,
            graph: None,
            automata: None,
            complete: None,
            census: None,
            counts_labeled: None,
            counts_iso: None,
            catalog_name: None,
            expected_length: None,
            provenance: None,
            automaton: None,
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serialization is infallible")
    }

    pub fn from_json(text: &str) -> serde_json::Result<ResultDocument> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub class: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDoc {
    Cyclic { symbol: String, order: Vec<usize> },
    OneCluster { symbol: String, state: usize },
    Monotonic { order: Vec<usize> },
    Orientable { order: Vec<usize> },
    StronglyEulerian { degrees: Vec<Option<usize>> },
    Focusing { monoid_size: usize, strongly_connected: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundDoc {
    pub name: String,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusDoc {
    pub n: usize,
    pub target: usize,
    pub counts_labeled: u64,
    pub counts_iso: u64,
    pub verified: bool,
    pub classes: Vec<CensusClassDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusClassDoc {
    pub symbols: usize,
    pub orbit: u64,
    pub edges: usize,
    pub complete: bool,
    pub cnfas: usize,
}
