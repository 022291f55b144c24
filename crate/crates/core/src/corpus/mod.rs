//! Generators for the standard examples and spectrum persistence.

pub mod gen;
pub mod io;

pub use gen::{gen_spectrum, parse_kind, Kind, DEFAULT_HEAD, MAX_BLOCKS};
pub use io::{load, read_document, save, write_document, write_json, Document, Format};
