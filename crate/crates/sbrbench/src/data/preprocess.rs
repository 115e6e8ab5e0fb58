//! Filtering, temporal slicing and train/test splitting.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::types::{
    ensure_non_empty, DatasetStats, InteractionEvent, ItemInterner, Session, SessionDataset,
    TrainTestSplit,
};

pub const DEFAULT_MIN_ITEM_SUPPORT: u32 = 5;
pub const DEFAULT_MIN_SESSION_LENGTH: usize = 2;

const SECONDS_PER_DAY: i64 = 86_400;

/// Build a [`SessionDataset`] from raw events.
///
/// Single filter pass: events of items with fewer than `min_item_support`
/// total occurrences are dropped first, then sessions shorter than
/// `min_session_length` are dropped. Item support is not re-iterated, so
/// final support may dip below the threshold.
pub fn preprocess(
    events: &[InteractionEvent],
    min_item_support: u32,
    min_session_length: usize,
) -> Result<SessionDataset> {
    if events.is_empty() {
        return Err(Error::EmptyDataset("no events to preprocess".into()));
    }

    let mut support: HashMap<&str, u32> = HashMap::new();
    for event in events {
        *support.entry(event.item_id.as_str()).or_insert(0) += 1;
    }

    let mut interner = ItemInterner::new();
    let mut categories = HashMap::new();
    // Session id -> (event order, timestamp, item). Event order within a
    // session is the position in the incoming stream.
    let mut grouped: HashMap<&str, Vec<(i64, super::types::ItemId)>> = HashMap::new();
    let mut session_order: Vec<&str> = Vec::new();
    for event in events {
        if support[event.item_id.as_str()] < min_item_support {
            continue;
        }
        let item = interner.intern(&event.item_id);
        if let Some(category) = &event.category_id {
            categories.insert(item, category.clone());
        }
        let entry = grouped.entry(event.session_id.as_str()).or_insert_with(|| {
            session_order.push(event.session_id.as_str());
            Vec::new()
        });
        entry.push((event.timestamp, item));
    }

    let mut sessions = Vec::new();
    for id in session_order {
        let mut rows = grouped.remove(id).expect("grouped session");
        if rows.len() < min_session_length {
            continue;
        }
        // Stable sort keeps input order among equal timestamps.
        rows.sort_by_key(|&(time, _)| time);
        let (times, items): (Vec<i64>, Vec<_>) = rows.into_iter().unzip();
        sessions.push(Session {
            id: id.to_owned(),
            items,
            times,
        });
    }

    if sessions.is_empty() {
        return Err(Error::EmptyDataset(
            "all sessions filtered away by preprocessing".into(),
        ));
    }

    let mut dataset = SessionDataset {
        sessions,
        interner: Arc::new(interner),
        popularity: Vec::new(),
        categories,
    };
    dataset.sort_sessions();
    dataset.recount_popularity();
    Ok(dataset)
}

/// Keep the most recent `ceil(sessions / denominator)` sessions.
///
/// A denominator larger than the session count degenerates to the single
/// most recent session.
pub fn temporal_fraction(dataset: &SessionDataset, denominator: u64) -> Result<SessionDataset> {
    if denominator == 0 {
        return Err(Error::InvalidArguments(
            "fraction denominator must be >= 1".into(),
        ));
    }
    ensure_non_empty(dataset, "temporal_fraction input")?;
    let total = dataset.sessions.len();
    let keep = total.div_ceil(denominator as usize).max(1);
    let mut sliced = SessionDataset {
        sessions: dataset.sessions[total - keep..].to_vec(),
        interner: Arc::clone(&dataset.interner),
        popularity: Vec::new(),
        categories: dataset.categories.clone(),
    };
    sliced.recount_popularity();
    Ok(sliced)
}

/// Midnight (UTC) of the day containing `timestamp`.
pub fn floor_to_utc_day(timestamp: i64) -> i64 {
    timestamp.div_euclid(SECONDS_PER_DAY) * SECONDS_PER_DAY
}

/// Split off the last `test_days` days as test data.
///
/// The boundary is midnight (UTC) `test_days` days before the day of the
/// latest event. Test sessions start at or after the boundary; test events
/// whose items never occur in training are removed, and test sessions
/// shrinking below two events are dropped.
pub fn split_by_days(dataset: &SessionDataset, test_days: u32) -> Result<TrainTestSplit> {
    ensure_non_empty(dataset, "split input")?;
    let latest = dataset
        .sessions
        .iter()
        .map(Session::end_time)
        .max()
        .expect("non-empty dataset");
    let boundary = floor_to_utc_day(latest) - i64::from(test_days) * SECONDS_PER_DAY;

    let mut train_sessions = Vec::new();
    let mut test_sessions = Vec::new();
    for session in &dataset.sessions {
        if session.start_time() >= boundary {
            test_sessions.push(session.clone());
        } else {
            train_sessions.push(session.clone());
        }
    }
    if train_sessions.is_empty() {
        return Err(Error::InvalidSplit(format!(
            "no training sessions before boundary {boundary}"
        )));
    }

    let mut train = SessionDataset {
        sessions: train_sessions,
        interner: Arc::clone(&dataset.interner),
        popularity: Vec::new(),
        categories: dataset.categories.clone(),
    };
    train.recount_popularity();

    // Prune test items unseen in training, then drop short sessions.
    let mut pruned = Vec::new();
    for session in test_sessions {
        let mut items = Vec::with_capacity(session.items.len());
        let mut times = Vec::with_capacity(session.times.len());
        for (&item, &time) in session.items.iter().zip(&session.times) {
            if train.popularity[item.index()] > 0 {
                items.push(item);
                times.push(time);
            }
        }
        if items.len() >= 2 {
            pruned.push(Session {
                id: session.id,
                items,
                times,
            });
        }
    }
    if pruned.is_empty() {
        return Err(Error::InvalidSplit(
            "no test sessions survive item pruning".into(),
        ));
    }

    let mut test = SessionDataset {
        sessions: pruned,
        interner: Arc::clone(&dataset.interner),
        popularity: Vec::new(),
        categories: dataset.categories.clone(),
    };
    // Pruning can move a session's first event, so re-establish ordering.
    test.sort_sessions();
    test.recount_popularity();

    Ok(TrainTestSplit {
        train,
        test,
        split_boundary: boundary,
    })
}

/// Summary statistics over a dataset.
pub fn compute_stats(dataset: &SessionDataset) -> Result<DatasetStats> {
    ensure_non_empty(dataset, "stats input")?;
    let clicks = dataset.clicks();
    let sessions = dataset.sessions.len();
    let categories = {
        let mut seen: Vec<&str> = dataset
            .categories
            .iter()
            .filter(|(item, _)| dataset.popularity[item.index()] > 0)
            .map(|(_, category)| category.as_str())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    Ok(DatasetStats {
        clicks,
        items: dataset.distinct_items(),
        categories,
        sessions,
        avg_session_length: clicks as f64 / sessions as f64,
    })
}
