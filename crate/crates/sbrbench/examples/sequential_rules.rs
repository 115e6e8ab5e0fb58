//! Sequential rules of order two on a toy corpus.
//!
//! ```bash
//! cargo run --example sequential_rules
//! ```

use sbrbench::data::PopularityTable;
use sbrbench::models::{rank_topk, sr_fit, sr_score};
use sbrbench::synth::dataset_from_sessions;

fn main() {
    let (train, ids) = dataset_from_sessions(&[
        &["milk", "bread", "butter"],
        &["bread", "butter"],
        &["milk", "eggs"],
        &["bread", "eggs", "butter"],
    ]);

    let table = sr_fit(&train, None);
    println!("learned {} rules", table.rule_count());
    for (name, item) in [("milk", ids["milk"]), ("bread", ids["bread"])] {
        if let Some(consequents) = table.consequents(item) {
            let mut rules: Vec<_> = consequents.iter().collect();
            rules.sort_by(|a, b| b.1.total_cmp(a.1));
            for (consequent, weight) in rules {
                println!(
                    "  {name} -> {}: {weight:.2}",
                    train.interner.name(*consequent)
                );
            }
        }
    }

    // Only the last prefix item matters for scoring.
    let prefix = [ids["eggs"], ids["bread"]];
    let scores = sr_score(&table, &prefix);
    let popularity = PopularityTable::from_dataset(&train);
    let top = rank_topk(&scores, 3, &popularity);
    println!("after [eggs, bread], recommend:");
    for (rank, item) in top.iter().enumerate() {
        println!(
            "  {}. {} (score {:.2})",
            rank + 1,
            train.interner.name(*item),
            scores[item]
        );
    }
}
