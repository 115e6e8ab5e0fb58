//! The normalized CSV contract between dataio and every other module.
//!
//! Layout: headered CSV `session_id,item_id,time,category`, rows sorted by
//! (session start, time). Sessions are contiguous runs of equal
//! `session_id`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::types::{DatasetStats, ItemInterner, Session, SessionDataset};

pub const NORMALIZED_HEADER: &str = "session_id,item_id,time,category";

/// Write a dataset in the normalized layout.
pub fn write_normalized(dataset: &SessionDataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, line: &str| -> Result<()> {
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))
    };
    write(&mut out, NORMALIZED_HEADER)?;
    for session in &dataset.sessions {
        for (&item, &time) in session.items.iter().zip(&session.times) {
            let category = dataset
                .categories
                .get(&item)
                .map(String::as_str)
                .unwrap_or("");
            write(
                &mut out,
                &format!(
                    "{},{},{},{}",
                    session.id,
                    dataset.interner.name(item),
                    time,
                    category
                ),
            )?;
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Read a normalized file, building a fresh item catalog.
pub fn read_normalized(path: &Path) -> Result<SessionDataset> {
    let mut interner = ItemInterner::new();
    let dataset = read_rows(path, &mut |name| Ok(interner.intern(name)))?;
    finish(dataset, interner)
}

/// Read a train/test (or subtrain/validation) pair sharing one catalog.
///
/// The second file may only reference items present in the first; anything
/// else means the pair was not produced by this toolkit's split step.
pub fn read_split(train_path: &Path, test_path: &Path) -> Result<(SessionDataset, SessionDataset)> {
    let mut interner = ItemInterner::new();
    let raw_train = read_rows(train_path, &mut |name| Ok(interner.intern(name)))?;
    let frozen = Arc::new(interner);
    let lookup = Arc::clone(&frozen);
    let raw_test = read_rows(test_path, &mut |name| {
        lookup.get(name).ok_or_else(|| Error::MalformedRow {
            path: test_path.to_owned(),
            line: 0,
            message: format!("item `{name}` not present in {}", train_path.display()),
        })
    })?;
    let train = finish_with(raw_train, Arc::clone(&frozen));
    let test = finish_with(raw_test, frozen);
    Ok((train, test))
}

struct RawDataset {
    sessions: Vec<Session>,
    categories: std::collections::HashMap<super::types::ItemId, String>,
}

fn read_rows(
    path: &Path,
    intern: &mut dyn FnMut(&str) -> Result<super::types::ItemId>,
) -> Result<RawDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut sessions: Vec<Session> = Vec::new();
    let mut categories = std::collections::HashMap::new();
    let mut current: Option<Session> = None;
    let mut saw_header = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx as u64 + 1;
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != NORMALIZED_HEADER {
                return Err(Error::MalformedRow {
                    path: path.to_owned(),
                    line: lineno,
                    message: format!("expected header `{NORMALIZED_HEADER}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = line.splitn(4, ',');
        let (session_id, item_name, time, category) =
            match (fields.next(), fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
                _ => {
                    return Err(Error::MalformedRow {
                        path: path.to_owned(),
                        line: lineno,
                        message: "expected 4 fields".into(),
                    })
                }
            };
        let time: i64 = time.parse().map_err(|_| Error::MalformedRow {
            path: path.to_owned(),
            line: lineno,
            message: format!("bad time `{time}`"),
        })?;
        let item = intern(item_name)?;
        if !category.is_empty() {
            categories.insert(item, category.to_owned());
        }
        let start_new = current.as_ref().map(|s| s.id != session_id).unwrap_or(true);
        if start_new {
            if let Some(done) = current.take() {
                sessions.push(done);
            }
            current = Some(Session {
                id: session_id.to_owned(),
                items: Vec::new(),
                times: Vec::new(),
            });
        }
        let session = current.as_mut().expect("current session");
        session.items.push(item);
        session.times.push(time);
    }
    if let Some(done) = current.take() {
        sessions.push(done);
    }
    if sessions.is_empty() {
        return Err(Error::EmptyInput(path.to_owned()));
    }
    Ok(RawDataset {
        sessions,
        categories,
    })
}

fn finish(raw: RawDataset, interner: ItemInterner) -> Result<SessionDataset> {
    Ok(finish_with(raw, Arc::new(interner)))
}

fn finish_with(raw: RawDataset, interner: Arc<ItemInterner>) -> SessionDataset {
    let mut dataset = SessionDataset {
        sessions: raw.sessions,
        interner,
        popularity: Vec::new(),
        categories: raw.categories,
    };
    dataset.sort_sessions();
    dataset.recount_popularity();
    dataset
}

/// Write the single-row statistics CSV (dataset-description table columns).
pub fn write_stats(
    stats: &DatasetStats,
    dataset_name: &str,
    path: &Path,
    provenance: &str,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# {provenance}").map_err(|e| Error::io(path, e))?;
    writeln!(
        out,
        "dataset,clicks,items,categories,sessions,avg_session_length"
    )
    .map_err(|e| Error::io(path, e))?;
    writeln!(
        out,
        "{},{},{},{},{},{:.6}",
        dataset_name,
        stats.clicks,
        stats.items,
        stats.categories,
        stats.sessions,
        stats.avg_session_length
    )
    .map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::preprocess::preprocess;
    use crate::data::types::InteractionEvent;

    fn sample_dataset() -> SessionDataset {
        let events = vec![
            InteractionEvent {
                session_id: "a".into(),
                item_id: "X".into(),
                timestamp: 100,
                category_id: Some("c1".into()),
            },
            InteractionEvent {
                session_id: "a".into(),
                item_id: "Y".into(),
                timestamp: 200,
                category_id: None,
            },
            InteractionEvent {
                session_id: "b".into(),
                item_id: "Y".into(),
                timestamp: 150,
                category_id: None,
            },
            InteractionEvent {
                session_id: "b".into(),
                item_id: "X".into(),
                timestamp: 250,
                category_id: Some("c1".into()),
            },
        ];
        preprocess(&events, 1, 2).unwrap()
    }

    #[test]
    fn normalized_roundtrip_preserves_sessions() {
        let dataset = sample_dataset();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("normalized.csv");
        write_normalized(&dataset, &path).unwrap();
        let back = read_normalized(&path).unwrap();
        assert_eq!(back.sessions.len(), dataset.sessions.len());
        for (a, b) in dataset.sessions.iter().zip(&back.sessions) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.times, b.times);
            let names_a: Vec<&str> = a.items.iter().map(|&i| dataset.interner.name(i)).collect();
            let names_b: Vec<&str> = b.items.iter().map(|&i| back.interner.name(i)).collect();
            assert_eq!(names_a, names_b);
        }
        assert_eq!(back.categories.len(), 1);
    }

    #[test]
    fn rewrite_is_byte_identical() {
        let dataset = sample_dataset();
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("one.csv");
        let second = dir.path().join("two.csv");
        write_normalized(&dataset, &first).unwrap();
        let back = read_normalized(&first).unwrap();
        write_normalized(&back, &second).unwrap();
        assert_eq!(
            std::fs::read(&first).unwrap(),
            std::fs::read(&second).unwrap()
        );
    }

    #[test]
    fn split_reader_rejects_unknown_test_items() {
        let dataset = sample_dataset();
        let dir = tempfile::tempdir().unwrap();
        let train = dir.path().join("train.csv");
        write_normalized(&dataset, &train).unwrap();
        let test = dir.path().join("test.csv");
        std::fs::write(
            &test,
            format!("{NORMALIZED_HEADER}\nz,UNSEEN,10,\nz,UNSEEN,20,\n"),
        )
        .unwrap();
        assert!(read_split(&train, &test).is_err());
    }
}
