//! Core data model: events, sessions and datasets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned item identifier. Indexes into the owning [`ItemInterner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bidirectional mapping between raw item identifiers and dense [`ItemId`]s.
///
/// Ids are assigned in first-seen order, which makes every downstream
/// tie-break on `ItemId` deterministic for a given input file.
#[derive(Debug, Default, Clone)]
pub struct ItemInterner {
    names: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl ItemInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> ItemId {
        if let Some(&id) = self.lookup.get(name) {
            return ItemId(id);
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.lookup.insert(name.to_owned(), id);
        ItemId(id)
    }

    pub fn get(&self, name: &str) -> Option<ItemId> {
        self.lookup.get(name).map(|&id| ItemId(id))
    }

    pub fn name(&self, id: ItemId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// One click/view in the raw stream, after format normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionEvent {
    pub session_id: String,
    pub item_id: String,
    /// Seconds since the Unix epoch; sub-second precision is discarded.
    pub timestamp: i64,
    pub category_id: Option<String>,
}

/// A session: a time-ordered run of events by one anonymous user.
///
/// Items and timestamps are kept as parallel vectors; `times` is
/// non-decreasing with ties preserved in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub id: String,
    pub items: Vec<ItemId>,
    pub times: Vec<i64>,
}

impl Session {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn start_time(&self) -> i64 {
        *self.times.first().expect("session has no events")
    }

    pub fn end_time(&self) -> i64 {
        *self.times.last().expect("session has no events")
    }
}

/// A normalized click-stream corpus.
///
/// Sessions are sorted by `(start_time, session_id)`; the popularity table
/// counts item occurrences within this dataset.
#[derive(Debug, Clone)]
pub struct SessionDataset {
    pub sessions: Vec<Session>,
    pub interner: Arc<ItemInterner>,
    /// Occurrence count per interned item id (zero for items absent here).
    pub popularity: Vec<u32>,
    /// Item to category, where the raw data provides one.
    pub categories: HashMap<ItemId, String>,
}

impl SessionDataset {
    /// Number of clicks (events) over all sessions.
    pub fn clicks(&self) -> usize {
        self.sessions.iter().map(Session::len).sum()
    }

    /// Number of distinct items occurring in the sessions.
    pub fn distinct_items(&self) -> usize {
        self.popularity.iter().filter(|&&c| c > 0).count()
    }

    /// Recompute the popularity table from the current session list.
    pub fn recount_popularity(&mut self) {
        let mut counts = vec![0u32; self.interner.len()];
        for session in &self.sessions {
            for &item in &session.items {
                counts[item.index()] += 1;
            }
        }
        self.popularity = counts;
    }

    /// Sort sessions by `(start_time, session_id)`.
    pub fn sort_sessions(&mut self) {
        self.sessions
            .sort_by(|a, b| (a.start_time(), &a.id).cmp(&(b.start_time(), &b.id)));
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }
}

/// Summary statistics in the shape of the usual dataset-description table.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub clicks: usize,
    pub items: usize,
    pub categories: usize,
    pub sessions: usize,
    pub avg_session_length: f64,
}

/// Temporal train/test partition. Test sessions start at or after
/// `split_boundary`; test items are pruned to the training item set.
#[derive(Debug, Clone)]
pub struct TrainTestSplit {
    pub train: SessionDataset,
    pub test: SessionDataset,
    pub split_boundary: i64,
}

/// Training popularity in the form the ranking and Pop@K code consume.
#[derive(Debug, Clone)]
pub struct PopularityTable {
    counts: Vec<u32>,
    max: u32,
    distinct: usize,
}

impl PopularityTable {
    pub fn from_dataset(dataset: &SessionDataset) -> Self {
        let counts = dataset.popularity.clone();
        let max = counts.iter().copied().max().unwrap_or(0);
        let distinct = counts.iter().filter(|&&c| c > 0).count();
        Self {
            counts,
            max,
            distinct,
        }
    }

    pub fn count(&self, item: ItemId) -> u32 {
        self.counts.get(item.index()).copied().unwrap_or(0)
    }

    /// Popularity normalized by the most popular item; 0 when unseen.
    pub fn normalized(&self, item: ItemId) -> f64 {
        if self.max == 0 {
            return 0.0;
        }
        f64::from(self.count(item)) / f64::from(self.max)
    }

    /// Size of the item catalog (distinct items with nonzero count).
    pub fn catalog_size(&self) -> usize {
        self.distinct
    }
}

pub(crate) fn ensure_non_empty(dataset: &SessionDataset, what: &str) -> Result<()> {
    if dataset.is_empty() {
        Err(Error::EmptyDataset(what.to_owned()))
    } else {
        Ok(())
    }
}
