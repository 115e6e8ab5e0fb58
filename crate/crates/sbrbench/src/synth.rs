//! Synthetic click-stream generation.
//!
//! Everything here exists so the toolkit can be exercised end to end
//! without the (separately licensed) public datasets: the examples, the
//! property suite and the CLI integration tests all run on corpora from
//! this module. Sessions follow a simple Markov-style transition model
//! over a Zipf-distributed catalog, which gives the neighborhood and rule
//! models learnable structure.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::data::types::{InteractionEvent, ItemId, ItemInterner, Session, SessionDataset};
use crate::data::RawFormat;
use crate::error::{Error, Result};

const BASE_TIME: i64 = 1_400_000_000; // 2014-05-13, arbitrary but positive

/// Parameters for the synthetic corpus generator.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub sessions: usize,
    pub items: usize,
    pub days: u32,
    pub seed: u64,
    /// Session lengths are 2 + Poisson-ish noise around this mean.
    pub mean_extra_clicks: f64,
    /// Probability that a click follows the previous item's "successor"
    /// instead of a fresh popularity draw.
    pub follow_probability: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            sessions: 400,
            items: 60,
            days: 10,
            seed: 13,
            mean_extra_clicks: 2.5,
            follow_probability: 0.65,
        }
    }
}

/// Generate raw interaction events under the transition model.
pub fn generate_events(cfg: &SynthConfig) -> Vec<InteractionEvent> {
    assert!(cfg.sessions > 0 && cfg.items > 1 && cfg.days > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // Zipf-ish popularity weights.
    let weights: Vec<f64> = (0..cfg.items).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let draw_item = |rng: &mut ChaCha8Rng| -> usize {
        let mut target = rng.gen::<f64>() * total;
        for (idx, w) in weights.iter().enumerate() {
            target -= w;
            if target <= 0.0 {
                return idx;
            }
        }
        cfg.items - 1
    };

    let span = i64::from(cfg.days) * 86_400;
    let mut events = Vec::new();
    for s in 0..cfg.sessions {
        // Spread sessions over the span, newest last.
        let jitter = rng.gen_range(0..3_600);
        let start = BASE_TIME + (s as i64 * span) / cfg.sessions as i64 + jitter;
        let extra = (rng.gen::<f64>() * 2.0 * cfg.mean_extra_clicks).round() as usize;
        let length = 2 + extra;
        let mut current = draw_item(&mut rng);
        for click in 0..length {
            events.push(InteractionEvent {
                session_id: format!("s{s:05}"),
                item_id: format!("i{current:04}"),
                timestamp: start + click as i64 * 30,
                category_id: Some(format!("c{}", current % 7)),
            });
            current = if rng.gen::<f64>() < cfg.follow_probability {
                (current + 1 + s % 3) % cfg.items
            } else {
                draw_item(&mut rng)
            };
        }
    }
    events
}

/// Render events in one of the raw input layouts, so ingestion can be
/// exercised end to end.
pub fn write_raw_file(events: &[InteractionEvent], format: RawFormat, path: &Path) -> Result<()> {
    use std::io::Write;
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let mut write_line =
        |line: String| -> Result<()> { writeln!(out, "{line}").map_err(|e| Error::io(path, e)) };
    match format {
        RawFormat::Rsc15 => {
            for event in events {
                let stamp = chrono::DateTime::from_timestamp(event.timestamp, 0)
                    .expect("valid timestamp")
                    .format("%Y-%m-%dT%H:%M:%S%.3fZ");
                write_line(format!(
                    "{},{},{},{}",
                    event.session_id,
                    stamp,
                    event.item_id,
                    event.category_id.as_deref().unwrap_or("0")
                ))?;
            }
        }
        RawFormat::Digi => {
            write_line("sessionId;userId;itemId;timeframe;eventdate".into())?;
            let mut frame_in_session: HashMap<&str, u64> = HashMap::new();
            for event in events {
                let frame = frame_in_session
                    .entry(event.session_id.as_str())
                    .or_insert(0);
                *frame += 100;
                let date = chrono::DateTime::from_timestamp(event.timestamp, 0)
                    .expect("valid timestamp")
                    .format("%Y-%m-%d");
                write_line(format!(
                    "{};NA;{};{};{}",
                    event.session_id, event.item_id, frame, date
                ))?;
            }
        }
        RawFormat::Retail => {
            // One visitor per synthetic session; intra-session spacing stays
            // far below the idle gap, so sessionization reproduces them.
            write_line("timestamp,visitorid,event,itemid,transactionid".into())?;
            for event in events {
                write_line(format!(
                    "{},{},view,{},",
                    event.timestamp * 1000,
                    event.session_id,
                    event.item_id
                ))?;
            }
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Build a dataset directly from item-name sequences (uniform spacing).
pub fn dataset_from_sessions(sessions: &[&[&str]]) -> (SessionDataset, HashMap<String, ItemId>) {
    let owned: Vec<Vec<String>> = sessions
        .iter()
        .map(|s| s.iter().map(|&i| i.to_owned()).collect())
        .collect();
    dataset_from_owned_sessions(&owned)
}

/// As [`dataset_from_sessions`], for owned item names.
pub fn dataset_from_owned_sessions(
    sessions: &[Vec<String>],
) -> (SessionDataset, HashMap<String, ItemId>) {
    let timed: Vec<(String, Vec<String>, i64)> = sessions
        .iter()
        .enumerate()
        .map(|(idx, items)| {
            (
                format!("s{idx:05}"),
                items.clone(),
                BASE_TIME + idx as i64 * 1_000,
            )
        })
        .collect();
    dataset_from_timed_sessions(&timed)
}

/// Build a dataset with explicit session ids and start times; events are
/// spaced ten seconds apart.
pub fn dataset_from_timed_sessions(
    sessions: &[(String, Vec<String>, i64)],
) -> (SessionDataset, HashMap<String, ItemId>) {
    let mut interner = ItemInterner::new();
    let mut built = Vec::with_capacity(sessions.len());
    for (id, items, start) in sessions {
        assert!(!items.is_empty(), "sessions must be non-empty");
        let interned: Vec<ItemId> = items.iter().map(|name| interner.intern(name)).collect();
        let times: Vec<i64> = (0..interned.len() as i64).map(|i| start + i * 10).collect();
        built.push(Session {
            id: id.clone(),
            items: interned,
            times,
        });
    }
    let mapping: HashMap<String, ItemId> = (0..interner.len() as u32)
        .map(|id| (interner.name(ItemId(id)).to_owned(), ItemId(id)))
        .collect();
    let mut dataset = SessionDataset {
        sessions: built,
        interner: Arc::new(interner),
        popularity: Vec::new(),
        categories: HashMap::new(),
    };
    dataset.sort_sessions();
    dataset.recount_popularity();
    (dataset, mapping)
}

/// Harness self-test model that cheats by reading the targets: it keys
/// each prediction event by `(first prefix item, prefix length)`, which
/// identifies the event uniquely whenever test sessions have distinct
/// first items. On such test sets it must score HR = MRR = 1.
pub struct OracleModel {
    answers: HashMap<(ItemId, usize), ItemId>,
}

impl OracleModel {
    pub fn for_dataset(test: &SessionDataset) -> Self {
        let mut answers = HashMap::new();
        for event in crate::eval::iterate_events(test) {
            answers.insert((event.prefix[0], event.prefix.len()), event.target);
        }
        Self { answers }
    }
}

impl crate::models::SessionModel for OracleModel {
    fn score(&self, prefix: &[ItemId], _query_time: i64) -> crate::models::ScoreMap {
        let mut scores = crate::models::ScoreMap::new();
        if let Some(&target) = self.answers.get(&(prefix[0], prefix.len())) {
            scores.insert(target, 1.0);
        }
        scores
    }
}

/// Model that never scores anything; exercises the all-miss paths.
pub struct EmptyModel;

impl crate::models::SessionModel for EmptyModel {
    fn score(&self, _prefix: &[ItemId], _query_time: i64) -> crate::models::ScoreMap {
        crate::models::ScoreMap::new()
    }
}

/// Random item-name corpus for oracle comparisons: up to `max_sessions`
/// sessions of 2..=`max_len` draws over a `vocab`-item alphabet.
pub fn random_corpus<R: Rng>(
    rng: &mut R,
    max_sessions: usize,
    vocab: usize,
    max_len: usize,
) -> Vec<Vec<String>> {
    let n_sessions = rng.gen_range(2..=max_sessions.max(2));
    (0..n_sessions)
        .map(|_| {
            let len = rng.gen_range(2..=max_len.max(2));
            (0..len)
                .map(|_| format!("i{}", rng.gen_range(0..vocab)))
                .collect()
        })
        .collect()
}
