//! The session-kNN family: STAN, VSTAN and SFSKNN over one engine.
//!
//! Retrieval collects the `m` most recent training sessions sharing at
//! least one item with the prefix and scores them with a position-decayed
//! cosine similarity times a recency decay. Item scoring lets every
//! neighbor vote for its items with a neighbor-position decay around the
//! most recent common item, optionally reweighted by IDF (VSTAN) and
//! restricted to items seen after the current last item (SFSKNN).

use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::data::{ItemId, SessionDataset};
use crate::error::{Error, Result};

use super::index::SessionIndex;
use super::{ScoreMap, SessionModel};

const SECONDS_PER_DAY: f64 = 86_400.0;

/// Configuration shared by the kNN family.
///
/// `None` disables a decay (weight 1). `idf_power` is the VSTAN exponent
/// rho (0 disables IDF); `sequential_filter` is the SFSKNN restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnConfig {
    pub k: usize,
    pub m: usize,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub lambda3: Option<f64>,
    pub idf_power: f64,
    pub sequential_filter: bool,
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self {
            k: 500,
            m: 5000,
            lambda1: None,
            lambda2: None,
            lambda3: None,
            idf_power: 0.0,
            sequential_filter: false,
        }
    }
}

impl KnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidModelConfig("k must be >= 1".into()));
        }
        if self.m < self.k {
            return Err(Error::InvalidModelConfig(format!(
                "m ({}) must be >= k ({})",
                self.m, self.k
            )));
        }
        for (name, lambda) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda3", self.lambda3),
        ] {
            if let Some(value) = lambda {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::InvalidModelConfig(format!(
                        "{name} must be positive and finite, got {value}"
                    )));
                }
            }
        }
        if !(self.idf_power.is_finite() && self.idf_power >= 0.0) {
            return Err(Error::InvalidModelConfig(format!(
                "idf_power must be >= 0, got {}",
                self.idf_power
            )));
        }
        Ok(())
    }
}

/// A retrieved neighbor session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub session: u32,
    pub similarity: f64,
}

/// Within-session position weight for each distinct prefix item, keyed by
/// the item's last occurrence (1-based).
fn prefix_weights(prefix: &[ItemId], lambda1: Option<f64>) -> HashMap<ItemId, f64> {
    let len = prefix.len() as f64;
    let mut weights = HashMap::with_capacity(prefix.len());
    for (idx, &item) in prefix.iter().enumerate() {
        let pos = (idx + 1) as f64;
        let weight = match lambda1 {
            Some(lambda) => ((pos - len) / lambda).exp(),
            None => 1.0,
        };
        weights.insert(item, weight); // later occurrences overwrite
    }
    weights
}

/// Candidate heap entry ordered by recency (session index).
#[derive(PartialEq, Eq)]
struct ListHead {
    session: u32,
    list: usize,
    cursor: usize,
}

impl Ord for ListHead {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.session.cmp(&other.session)
    }
}

impl PartialOrd for ListHead {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The `m` most recent training sessions sharing at least one item with
/// the prefix, scored and reduced to the top `k` by similarity (ties go
/// to the more recent session).
pub fn retrieve_neighbors(
    index: &SessionIndex,
    prefix: &[ItemId],
    query_time: i64,
    cfg: &KnnConfig,
) -> Vec<Neighbor> {
    if prefix.is_empty() {
        return Vec::new();
    }
    let weights = prefix_weights(prefix, cfg.lambda1);

    // K-way merge of recency-descending postings.
    let lists: Vec<&[u32]> = weights
        .keys()
        .filter_map(|&item| index.postings(item))
        .collect();
    let mut heads: BinaryHeap<ListHead> = lists
        .iter()
        .enumerate()
        .filter(|(_, list)| !list.is_empty())
        .map(|(list_no, list)| ListHead {
            session: list[0],
            list: list_no,
            cursor: 0,
        })
        .collect();
    let mut candidates: Vec<u32> = Vec::new();
    let mut last_taken: Option<u32> = None;
    while candidates.len() < cfg.m {
        let Some(head) = heads.pop() else { break };
        if last_taken != Some(head.session) {
            candidates.push(head.session);
            last_taken = Some(head.session);
        }
        let list = lists[head.list];
        if head.cursor + 1 < list.len() {
            heads.push(ListHead {
                session: list[head.cursor + 1],
                list: head.list,
                cursor: head.cursor + 1,
            });
        }
    }

    let prefix_len = prefix.len() as f64;
    let mut scored: Vec<Neighbor> = Vec::with_capacity(candidates.len());
    for session_idx in candidates {
        let stored = index.session(session_idx);
        let mut overlap = 0.0;
        for item in &stored.distinct {
            if let Some(weight) = weights.get(item) {
                overlap += weight;
            }
        }
        let mut similarity = overlap / (prefix_len * stored.items.len() as f64).sqrt();
        if let Some(lambda2) = cfg.lambda2 {
            let delta_days = ((query_time - stored.start_time).max(0)) as f64 / SECONDS_PER_DAY;
            similarity *= (-delta_days / lambda2).exp();
        }
        scored.push(Neighbor {
            session: session_idx,
            similarity,
        });
    }

    scored.sort_by(|a, b| {
        b.similarity
            .total_cmp(&a.similarity)
            .then(b.session.cmp(&a.session))
    });
    scored.truncate(cfg.k);
    scored
}

/// Last occurrence (1-based) of the prefix item that occurs latest in the
/// prefix among the common items, located in the neighbor.
fn reference_position(stored_items: &[ItemId], prefix: &[ItemId]) -> Option<usize> {
    let neighbor_items: HashSet<ItemId> = stored_items.iter().copied().collect();
    let common_latest = prefix
        .iter()
        .rev()
        .find(|item| neighbor_items.contains(item))?;
    stored_items
        .iter()
        .rposition(|item| item == common_latest)
        .map(|idx| idx + 1)
}

/// Aggregate neighbor votes into item scores.
pub fn knn_score(
    index: &SessionIndex,
    neighbors: &[Neighbor],
    prefix: &[ItemId],
    cfg: &KnnConfig,
) -> ScoreMap {
    let mut scores = ScoreMap::new();
    for neighbor in neighbors {
        let stored = index.session(neighbor.session);
        let Some(p_star) = reference_position(&stored.items, prefix) else {
            continue;
        };
        for (idx, &item) in stored.items.iter().enumerate() {
            let position = idx + 1;
            let weight = match cfg.lambda3 {
                Some(lambda3) => {
                    let distance = position.abs_diff(p_star) as f64;
                    (-distance / lambda3).exp()
                }
                None => 1.0,
            };
            *scores.entry(item).or_insert(0.0) += neighbor.similarity * weight;
        }
    }

    if cfg.sequential_filter {
        if let Some(&last) = prefix.last() {
            let mut eligible: HashSet<ItemId> = HashSet::new();
            for neighbor in neighbors {
                let stored = index.session(neighbor.session);
                if let Some(first) = stored.items.iter().position(|&item| item == last) {
                    eligible.extend(stored.items[first + 1..].iter().copied());
                }
            }
            scores.retain(|item, _| eligible.contains(item));
        }
    }

    if cfg.idf_power > 0.0 {
        let total = index.session_count() as f64;
        for (item, score) in scores.iter_mut() {
            let df = f64::from(index.document_frequency(*item));
            let idf = (total / df).ln();
            *score *= idf.powf(cfg.idf_power);
        }
    }

    scores
}

/// A fitted kNN-family model.
#[derive(Debug)]
pub struct SessionKnn {
    index: SessionIndex,
    cfg: KnnConfig,
}

impl SessionKnn {
    pub fn fit(train: &SessionDataset, cfg: KnnConfig) -> Result<Self> {
        cfg.validate()?;
        let index = SessionIndex::build(train, cfg.m);
        Ok(Self { index, cfg })
    }

    pub fn config(&self) -> &KnnConfig {
        &self.cfg
    }

    pub fn index(&self) -> &SessionIndex {
        &self.index
    }
}

impl SessionModel for SessionKnn {
    fn score(&self, prefix: &[ItemId], query_time: i64) -> ScoreMap {
        let neighbors = retrieve_neighbors(&self.index, prefix, query_time, &self.cfg);
        knn_score(&self.index, &neighbors, prefix, &self.cfg)
    }
}
