//! Sequential rules of order two.
//!
//! For every ordered index pair `a < b` within a session with
//! `b - a <= max_steps`, the rule `item[a] -> item[b]` gains weight
//! `1 / (b - a)`. Scoring reads off the consequent map of the last item
//! of the session prefix.

use std::collections::HashMap;

use crate::data::{ItemId, SessionDataset};

use super::{ScoreMap, SessionModel};

/// Item-to-item weighted co-occurrence rules.
#[derive(Debug, Clone, Default)]
pub struct RuleTable {
    rules: HashMap<ItemId, HashMap<ItemId, f64>>,
}

impl RuleTable {
    pub fn consequents(&self, item: ItemId) -> Option<&HashMap<ItemId, f64>> {
        self.rules.get(&item)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.values().map(HashMap::len).sum()
    }
}

/// Learn a rule table; `max_steps: None` means unlimited pair distance.
pub fn sr_fit(train: &SessionDataset, max_steps: Option<usize>) -> RuleTable {
    let mut rules: HashMap<ItemId, HashMap<ItemId, f64>> = HashMap::new();
    for session in &train.sessions {
        let items = &session.items;
        for a in 0..items.len() {
            let upper = match max_steps {
                Some(steps) => items.len().min(a + steps + 1),
                None => items.len(),
            };
            for b in a + 1..upper {
                let distance = (b - a) as f64;
                *rules
                    .entry(items[a])
                    .or_default()
                    .entry(items[b])
                    .or_insert(0.0) += 1.0 / distance;
            }
        }
    }
    RuleTable { rules }
}

/// Score all consequents of the last prefix item; empty when unseen.
pub fn sr_score(table: &RuleTable, prefix: &[ItemId]) -> ScoreMap {
    let last = match prefix.last() {
        Some(&item) => item,
        None => return ScoreMap::new(),
    };
    table.consequents(last).cloned().unwrap_or_default()
}

/// Fitted SR model.
#[derive(Debug)]
pub struct SequentialRules {
    table: RuleTable,
}

impl SequentialRules {
    pub fn fit(train: &SessionDataset, max_steps: Option<usize>) -> Self {
        Self {
            table: sr_fit(train, max_steps),
        }
    }

    pub fn table(&self) -> &RuleTable {
        &self.table
    }
}

impl SessionModel for SequentialRules {
    fn score(&self, prefix: &[ItemId], _query_time: i64) -> ScoreMap {
        sr_score(&self.table, prefix)
    }
}
