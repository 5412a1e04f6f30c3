//! Toroidal polyhedral maps.
//!
//! Maps are rotation systems ([`map::EmbeddedMap`]) read from and written to
//! the one-line plantri text format ([`plantri`]). On top of that the crate
//! decides the polyhedral-map predicates ([`polyhedral`]), applies edge
//! removal and edge shrinking ([`moves`]), computes canonical codes
//! ([`canon`]), enumerates all toroidal polyhedral maps of a given order
//! ([`generate`]) and draws maps on the flat torus ([`render`]). The known
//! diminimal maps ship in [`catalog`].

pub mod canon;
pub mod catalog;
pub mod embed;
pub mod error;
pub mod generate;
pub mod graph;
pub mod map;
pub mod moves;
pub mod plantri;
pub mod polyhedral;
pub mod render;

pub use canon::{are_isomorphic, canonical_code, graph_canonical_code, CanonicalCode};
pub use catalog::{catalog_entries, verify_catalog, CatalogEntry};
pub use error::{Error, Result};
pub use generate::{generate_graphs, generate_tpms, GenerationTask};
pub use graph::Graph;
pub use map::{build_map, Dart, EdgeRef, EmbeddedMap, FaceDecomposition};
pub use moves::{
    is_diminimal, reduce, removable_edges, remove_edge, shrink_edge, shrinkable_edges, MoveOutcome, Rejection,
};
pub use plantri::{parse_line, read_stream, serialize, write_stream, ParseError};
pub use polyhedral::{dual, is_tpm, TpmVerdict};
pub use render::{render, SvgOptions};
