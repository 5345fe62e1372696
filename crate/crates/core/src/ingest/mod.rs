//! Import jobs: fetch silo payloads, normalize records and upsert them.

mod job;
mod normalize;
mod source;

pub use job::{import_into, parse_payload, run_import_job, ImportReport, SkippedRecord};
pub use normalize::{normalize_record, parse_target, snake_to_camel, Entity, RawRecord, Target};
pub use source::{fetch_payload, SourceConfig, SourceKind};
