//! EDGAR access: quarterly master-index parsing, filing retrieval with an
//! on-disk cache and SEC-fair-access rate limiting, and SGML header
//! parsing into structured filing records.

mod fetch;
mod header;
mod index;

pub use fetch::{FetchConfig, FilingFetcher, Transport};
#[cfg(feature = "net")]
pub use fetch::HttpTransport;
pub use header::{
    dedupe_by_body, filter_13f_filers, parse_sgml_header, parse_sgml_header_bytes,
    thirteenf_ciks_from_index, Accession, FilingRecord, CONTESTED_FORMS,
};
pub use index::{parse_master_index, serialize_master_index, IndexEntry, IndexParse};
