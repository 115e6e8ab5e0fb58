//! The evaluation loop: score every prediction event, rank, accumulate.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::data::{ItemId, PopularityTable, SessionDataset};
use crate::error::{Error, Result};
use crate::models::{rank_topk, SessionModel};

use super::metrics::{MetricReport, TimingReport};
use super::protocol::{iterate_events, rank_of_target};

/// Per-event result carried from the (possibly parallel) scoring phase to
/// the in-order reduction.
struct EventOutcome {
    rank: Option<usize>,
    recommended: Vec<ItemId>,
    nanos: u64,
}

pub struct EvalOutcome {
    pub metrics: MetricReport,
    pub timing: TimingReport,
}

/// Evaluate a fitted model over a test set.
///
/// Events are scored concurrently against the immutable model; metric
/// accumulation happens afterwards in event order, so the accuracy
/// numbers do not depend on the worker count. `train_time` is whatever
/// the caller measured around `fit`.
pub fn evaluate(
    model: &dyn SessionModel,
    test: &SessionDataset,
    popularity: &PopularityTable,
    cutoffs: &[usize],
    train_time: Duration,
) -> Result<EvalOutcome> {
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArguments(
            "cutoffs must be non-empty and strictly ascending".into(),
        ));
    }
    let max_k = *cutoffs.last().expect("non-empty cutoffs");
    let events: Vec<_> = iterate_events(test).collect();

    let outcomes: Vec<EventOutcome> = events
        .par_iter()
        .map(|event| -> Result<EventOutcome> {
            let started = Instant::now();
            let scores = model.score(event.prefix, event.query_time);
            let recommended = rank_topk(&scores, max_k, popularity);
            let nanos = started.elapsed().as_nanos() as u64;
            for (&item, &score) in &scores {
                if !score.is_finite() {
                    return Err(Error::NonFiniteScore {
                        item: test.interner.name(item).to_owned(),
                    });
                }
            }
            let rank = rank_of_target(&recommended, event.target)?;
            Ok(EventOutcome {
                rank,
                recommended,
                nanos,
            })
        })
        .collect::<Result<_>>()?;

    let mut hits = vec![0usize; cutoffs.len()];
    let mut reciprocal = vec![0f64; cutoffs.len()];
    let mut recommended_once = vec![false; test.interner.len()];
    let mut pop_sum = 0f64;
    let mut slots = 0usize;
    let mut nanos_total = 0u64;
    for outcome in &outcomes {
        if let Some(rank) = outcome.rank {
            for (idx, &cutoff) in cutoffs.iter().enumerate() {
                if rank <= cutoff {
                    hits[idx] += 1;
                    reciprocal[idx] += 1.0 / rank as f64;
                }
            }
        }
        for &item in &outcome.recommended {
            recommended_once[item.index()] = true;
            pop_sum += popularity.normalized(item);
        }
        slots += outcome.recommended.len();
        nanos_total += outcome.nanos;
    }

    let n = outcomes.len();
    let per_event = |value: f64| if n == 0 { 0.0 } else { value / n as f64 };
    let hr: Vec<f64> = hits.iter().map(|&h| per_event(h as f64)).collect();
    let mrr: Vec<f64> = reciprocal.iter().map(|&r| per_event(r)).collect();
    let catalog = popularity.catalog_size();
    let cov = if catalog == 0 {
        0.0
    } else {
        recommended_once.iter().filter(|&&seen| seen).count() as f64 / catalog as f64
    };
    let pop = if slots == 0 {
        0.0
    } else {
        pop_sum / slots as f64
    };

    // Protocol invariants; these hold by construction for any model.
    for idx in 0..cutoffs.len() {
        assert!(
            mrr[idx] <= hr[idx] + 1e-12,
            "MRR@{} exceeds HR@{}",
            cutoffs[idx],
            cutoffs[idx]
        );
        if idx > 0 {
            assert!(hr[idx - 1] <= hr[idx] + 1e-12, "HR not monotone in K");
            assert!(mrr[idx - 1] <= mrr[idx] + 1e-12, "MRR not monotone in K");
        }
    }

    let metrics = MetricReport {
        cutoffs: cutoffs.to_vec(),
        mrr,
        hr,
        cov,
        pop,
        event_count: n,
    };
    let timing = TimingReport {
        train_time_min: train_time.as_secs_f64() / 60.0,
        mean_predict_ms: per_event(nanos_total as f64) / 1.0e6,
    };
    Ok(EvalOutcome { metrics, timing })
}
