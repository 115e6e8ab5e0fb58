//! Raw click-stream ingestion for the three supported dataset formats.

use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use chrono::{DateTime, NaiveDate};

use crate::error::{Error, Result};

use super::types::InteractionEvent;

/// Raw input format tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawFormat {
    /// Headerless CSV `session_id,timestamp(ISO-8601 Zulu),item_id,category`.
    Rsc15,
    /// Semicolon CSV with header `sessionId;userId;itemId;timeframe;eventdate`.
    Digi,
    /// CSV with header `timestamp(ms),visitorid,event,itemid,transactionid`;
    /// per-visitor "view" events are sessionized by idle gap.
    Retail,
}

impl FromStr for RawFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rsc15" => Ok(RawFormat::Rsc15),
            "digi" => Ok(RawFormat::Digi),
            "retail" => Ok(RawFormat::Retail),
            other => Err(Error::UnknownFormat(other.to_owned())),
        }
    }
}

impl RawFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            RawFormat::Rsc15 => "rsc15",
            RawFormat::Digi => "digi",
            RawFormat::Retail => "retail",
        }
    }
}

/// Default idle gap for Retailrocket sessionization.
pub const DEFAULT_RETAIL_GAP: Duration = Duration::from_secs(30 * 60);

/// Read a raw dataset file into normalized interaction events.
///
/// Events come back ordered so that the within-session order downstream
/// modules rely on equals the format's intended order (file order for
/// rsc15/retail, `timeframe` order for digi). `retail_gap` is only used
/// for the retail format.
pub fn ingest(
    path: &Path,
    format: RawFormat,
    retail_gap: Duration,
) -> Result<Vec<InteractionEvent>> {
    let events = match format {
        RawFormat::Rsc15 => ingest_rsc15(path)?,
        RawFormat::Digi => ingest_digi(path)?,
        RawFormat::Retail => ingest_retail(path, retail_gap)?,
    };
    if events.is_empty() {
        return Err(Error::EmptyInput(path.to_owned()));
    }
    Ok(events)
}

fn malformed(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::MalformedRow {
        path: path.to_owned(),
        line,
        message: message.into(),
    }
}

fn open_reader(
    path: &Path,
    delimiter: u8,
    has_headers: bool,
) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_headers)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => malformed(path, 0, format!("{other:?}")),
        })
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn field<'a>(
    path: &Path,
    record: &'a csv::StringRecord,
    idx: usize,
    name: &str,
) -> Result<&'a str> {
    record
        .get(idx)
        .ok_or_else(|| malformed(path, record_line(record), format!("missing field `{name}`")))
}

fn next_record(
    path: &Path,
    reader: &mut csv::Reader<std::fs::File>,
    record: &mut csv::StringRecord,
) -> Result<bool> {
    reader.read_record(record).map_err(|e| {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        malformed(path, line, e.to_string())
    })
}

fn ingest_rsc15(path: &Path) -> Result<Vec<InteractionEvent>> {
    let mut reader = open_reader(path, b',', false)?;
    let mut record = csv::StringRecord::new();
    let mut events = Vec::new();
    while next_record(path, &mut reader, &mut record)? {
        let line = record_line(&record);
        let session_id = field(path, &record, 0, "session_id")?;
        let stamp = field(path, &record, 1, "timestamp")?;
        let item_id = field(path, &record, 2, "item_id")?;
        let category = record.get(3).unwrap_or("");
        let parsed = DateTime::parse_from_rfc3339(stamp)
            .map_err(|e| malformed(path, line, format!("bad timestamp `{stamp}`: {e}")))?;
        let timestamp = parsed.timestamp();
        if timestamp <= 0 {
            return Err(malformed(
                path,
                line,
                format!("non-positive timestamp `{stamp}`"),
            ));
        }
        if session_id.is_empty() || item_id.is_empty() {
            return Err(malformed(path, line, "empty session or item id"));
        }
        events.push(InteractionEvent {
            session_id: session_id.to_owned(),
            item_id: item_id.to_owned(),
            timestamp,
            category_id: if category.is_empty() {
                None
            } else {
                Some(category.to_owned())
            },
        });
    }
    Ok(events)
}

fn ingest_digi(path: &Path) -> Result<Vec<InteractionEvent>> {
    let mut reader = open_reader(path, b';', true)?;
    let mut record = csv::StringRecord::new();
    // (session, timeframe, input index) sort key restores the intended
    // within-session order even when the file interleaves sessions.
    let mut rows: Vec<(InteractionEvent, u64, usize)> = Vec::new();
    while next_record(path, &mut reader, &mut record)? {
        let line = record_line(&record);
        let session_id = field(path, &record, 0, "sessionId")?;
        let item_id = field(path, &record, 2, "itemId")?;
        let timeframe = field(path, &record, 3, "timeframe")?;
        let eventdate = field(path, &record, 4, "eventdate")?;
        let timeframe: u64 = timeframe
            .parse()
            .map_err(|_| malformed(path, line, format!("bad timeframe `{timeframe}`")))?;
        let date = NaiveDate::parse_from_str(eventdate, "%Y-%m-%d")
            .map_err(|e| malformed(path, line, format!("bad eventdate `{eventdate}`: {e}")))?;
        let timestamp = date
            .and_hms_opt(0, 0, 0)
            .expect("midnight is a valid time")
            .and_utc()
            .timestamp();
        if timestamp <= 0 {
            return Err(malformed(
                path,
                line,
                format!("non-positive date `{eventdate}`"),
            ));
        }
        if session_id.is_empty() || item_id.is_empty() {
            return Err(malformed(path, line, "empty session or item id"));
        }
        let index = rows.len();
        rows.push((
            InteractionEvent {
                session_id: session_id.to_owned(),
                item_id: item_id.to_owned(),
                timestamp,
                category_id: None,
            },
            timeframe,
            index,
        ));
    }
    rows.sort_by(|a, b| (&a.0.session_id, a.1, a.2).cmp(&(&b.0.session_id, b.1, b.2)));
    Ok(rows.into_iter().map(|(event, _, _)| event).collect())
}

fn ingest_retail(path: &Path, gap: Duration) -> Result<Vec<InteractionEvent>> {
    let mut reader = open_reader(path, b',', true)?;
    let mut record = csv::StringRecord::new();
    let mut rows: Vec<(String, i64, String, usize)> = Vec::new();
    while next_record(path, &mut reader, &mut record)? {
        let line = record_line(&record);
        let stamp = field(path, &record, 0, "timestamp")?;
        let visitor = field(path, &record, 1, "visitorid")?;
        let event = field(path, &record, 2, "event")?;
        let item = field(path, &record, 3, "itemid")?;
        if event != "view" {
            continue;
        }
        let millis: i64 = stamp
            .parse()
            .map_err(|_| malformed(path, line, format!("bad timestamp `{stamp}`")))?;
        let timestamp = millis.div_euclid(1000);
        if timestamp <= 0 {
            return Err(malformed(
                path,
                line,
                format!("non-positive timestamp `{stamp}`"),
            ));
        }
        if visitor.is_empty() || item.is_empty() {
            return Err(malformed(path, line, "empty visitor or item id"));
        }
        let index = rows.len();
        rows.push((visitor.to_owned(), timestamp, item.to_owned(), index));
    }
    // Per-visitor streams in time order, ties by file order.
    rows.sort_by(|a, b| (&a.0, a.1, a.3).cmp(&(&b.0, b.1, b.3)));

    let gap_secs = gap.as_secs() as i64;
    let mut events = Vec::with_capacity(rows.len());
    let mut current_visitor: Option<&str> = None;
    let mut session_no = 0u64;
    let mut last_time = 0i64;
    for (visitor, timestamp, item, _) in &rows {
        let new_visitor = current_visitor != Some(visitor.as_str());
        if new_visitor || *timestamp - last_time > gap_secs {
            if new_visitor {
                session_no = 0;
                current_visitor = Some(visitor.as_str());
            }
            session_no += 1;
        }
        last_time = *timestamp;
        events.push(InteractionEvent {
            session_id: format!("{visitor}_{session_no}"),
            item_id: item.clone(),
            timestamp: *timestamp,
            category_id: None,
        });
    }
    Ok(events)
}
