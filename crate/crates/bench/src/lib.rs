//! Shared inputs for the benchmarks in `benches/`.

use std::path::PathBuf;

use cnlbi_core::model::SpecificationModel;
use cnlbi_core::olap::{load_cube, Cube};
use cnlbi_core::syntax::parse_cnlbi;

pub fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(repo().join("corpus").join(name)).expect("corpus file")
}

pub fn medbuddy() -> SpecificationModel {
    parse_cnlbi(&corpus("medbuddy.cnlbi")).model
}

/// The committed synthetic fixture loaded against the MEDBuddy model.
pub fn synthetic_cube() -> Cube {
    load_cube(&medbuddy(), &repo().join("fixtures/medbuddy-synthetic")).expect("fixture loads")
}
