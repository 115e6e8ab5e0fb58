//! Inverted item-to-session index for the session-kNN family.

use std::collections::HashMap;

use crate::data::{ItemId, SessionDataset};

/// One training session as stored in the index.
#[derive(Debug, Clone)]
pub struct StoredSession {
    pub items: Vec<ItemId>,
    /// Distinct items, for intersection scans.
    pub distinct: Vec<ItemId>,
    pub start_time: i64,
}

/// Item postings plus per-session metadata.
///
/// Sessions keep their dataset order (ascending by start time), so a
/// larger index means a more recent session; postings are stored most
/// recent first and truncated to the candidate budget they were built
/// for, which is exact for "m most recent sharing sessions" retrieval.
#[derive(Debug)]
pub struct SessionIndex {
    sessions: Vec<StoredSession>,
    postings: HashMap<ItemId, Vec<u32>>,
    popularity: Vec<u32>,
    doc_freq: Vec<u32>,
}

impl SessionIndex {
    /// Build from a training dataset, keeping at most `posting_cap` most
    /// recent sessions per item.
    pub fn build(train: &SessionDataset, posting_cap: usize) -> Self {
        let n_items = train.interner.len();
        let mut sessions = Vec::with_capacity(train.sessions.len());
        let mut doc_freq = vec![0u32; n_items];
        for session in &train.sessions {
            let mut distinct = session.items.clone();
            distinct.sort_unstable();
            distinct.dedup();
            for &item in &distinct {
                doc_freq[item.index()] += 1;
            }
            sessions.push(StoredSession {
                items: session.items.clone(),
                distinct,
                start_time: session.start_time(),
            });
        }

        let mut postings: HashMap<ItemId, Vec<u32>> = HashMap::new();
        // Reverse iteration yields recency-descending posting lists.
        for idx in (0..sessions.len()).rev() {
            for &item in &sessions[idx].distinct {
                let list = postings.entry(item).or_default();
                if list.len() < posting_cap {
                    list.push(idx as u32);
                }
            }
        }

        SessionIndex {
            sessions,
            postings,
            popularity: train.popularity.clone(),
            doc_freq,
        }
    }

    pub fn session(&self, idx: u32) -> &StoredSession {
        &self.sessions[idx as usize]
    }

    pub fn session_count(&self) -> usize {
        self.sessions.len()
    }

    pub fn postings(&self, item: ItemId) -> Option<&[u32]> {
        self.postings.get(&item).map(Vec::as_slice)
    }

    pub fn document_frequency(&self, item: ItemId) -> u32 {
        self.doc_freq.get(item.index()).copied().unwrap_or(0)
    }

    pub fn popularity(&self, item: ItemId) -> u32 {
        self.popularity.get(item.index()).copied().unwrap_or(0)
    }
}
