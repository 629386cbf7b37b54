//! Text format for automata, the JSON result document, and persistence of
//! census runs.

mod document;
mod format;
mod persist;

pub use document::{
    BoundDoc, CensusClassDoc, CensusDoc, CertificateDoc, ClassDoc, GraphDoc, ResultDocument,
    SCHEMA_VERSION,
};
pub use format::{parse, serialize, AutomatonDoc};
pub use persist::{fnv64, load_census, persist_census};
