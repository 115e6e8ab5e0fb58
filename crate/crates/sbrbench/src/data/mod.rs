//! Dataset ingestion, preprocessing, splitting and file formats.

pub mod files;
pub mod ingest;
pub mod preprocess;
pub mod types;

pub use files::{read_normalized, read_split, write_normalized, write_stats};
pub use ingest::{ingest, RawFormat, DEFAULT_RETAIL_GAP};
pub use preprocess::{
    compute_stats, preprocess, split_by_days, temporal_fraction, DEFAULT_MIN_ITEM_SUPPORT,
    DEFAULT_MIN_SESSION_LENGTH,
};
pub use types::{
    DatasetStats, InteractionEvent, ItemId, ItemInterner, PopularityTable, Session, SessionDataset,
    TrainTestSplit,
};
