//! Incremental-reveal prediction events.

use std::collections::HashSet;

use crate::data::{ItemId, Session, SessionDataset};
use crate::error::{Error, Result};

/// One scoring opportunity: predict `target` from `prefix` at the moment
/// the target was clicked.
#[derive(Debug, Clone, Copy)]
pub struct PredictionEvent<'a> {
    pub session: &'a Session,
    pub prefix: &'a [ItemId],
    pub target: ItemId,
    pub query_time: i64,
}

/// Reveal each test session item by item: a session `[i1..in]` yields the
/// `n-1` events `([i1..it] -> i(t+1))`, in session order then position
/// order.
pub fn iterate_events(test: &SessionDataset) -> impl Iterator<Item = PredictionEvent<'_>> {
    test.sessions.iter().flat_map(|session| {
        (1..session.items.len()).map(move |t| PredictionEvent {
            session,
            prefix: &session.items[..t],
            target: session.items[t],
            query_time: session.times[t],
        })
    })
}

/// 1-based rank of `target` in the recommendation list, `None` on miss.
/// Duplicate items mean the ranking is corrupt.
pub fn rank_of_target(recommendation: &[ItemId], target: ItemId) -> Result<Option<usize>> {
    let mut seen = HashSet::with_capacity(recommendation.len());
    for item in recommendation {
        if !seen.insert(item) {
            return Err(Error::DuplicateRecommendation);
        }
    }
    Ok(recommendation
        .iter()
        .position(|&item| item == target)
        .map(|idx| idx + 1))
}
