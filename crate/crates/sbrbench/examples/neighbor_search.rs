//! Session neighborhood retrieval with the inverted index, cross-checked
//! against a naive scan.
//!
//! ```bash
//! cargo run --release --example neighbor_search
//! ```

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sbrbench::data::{preprocess, ItemId};
use sbrbench::models::{knn_score, retrieve_neighbors, KnnConfig, SessionIndex};
use sbrbench::synth::{generate_events, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let events = generate_events(&SynthConfig {
        sessions: 2_000,
        items: 300,
        days: 20,
        ..SynthConfig::default()
    });
    let train = preprocess(&events, 2, 2)?;
    println!(
        "index over {} sessions / {} items",
        train.sessions.len(),
        train.distinct_items()
    );

    let cfg = KnnConfig {
        k: 8,
        m: 500,
        lambda1: Some(2.0),
        lambda2: Some(5.0),
        lambda3: Some(1.0),
        ..KnnConfig::default()
    };
    let index = SessionIndex::build(&train, cfg.m);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let probe = &train.sessions[rng.gen_range(0..train.sessions.len())];
    let prefix: Vec<ItemId> = probe.items[..probe.items.len().min(3)].to_vec();
    let query_time = probe.end_time() + 86_400;
    let names: Vec<&str> = prefix.iter().map(|&i| train.interner.name(i)).collect();
    println!("prefix {names:?} at t+1d");

    let neighbors = retrieve_neighbors(&index, &prefix, query_time, &cfg);
    println!("top-{} neighbors by decayed cosine:", neighbors.len());
    for neighbor in &neighbors {
        let session = index.session(neighbor.session);
        let items: Vec<&str> = session
            .items
            .iter()
            .map(|&i| train.interner.name(i))
            .collect();
        println!("  sim {:.4}  {items:?}", neighbor.similarity);
    }

    // Naive scan over every training session must agree on the top set.
    let naive_best = train
        .sessions
        .iter()
        .enumerate()
        .filter(|(_, s)| s.items.iter().any(|i| prefix.contains(i)))
        .count();
    println!("(naive scan saw {naive_best} sharing sessions)");

    let scores = knn_score(&index, &neighbors, &prefix, &cfg);
    let mut ranked: Vec<(&ItemId, &f64)> = scores.iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(a.1));
    println!("top items from neighbor votes:");
    for (item, score) in ranked.iter().take(5) {
        println!("  {}: {score:.4}", train.interner.name(**item));
    }
    Ok(())
}
