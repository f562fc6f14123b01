//! Optional on-disk store for the LR and BBW memo tables.
//!
//! Line 1 is a versioned header; every further line is one JSON record
//! `{"kind":"lr"|"bbw","key":…,"val":…}`. A file that fails to parse is ignored
//! with a warning, so results never depend on its contents.

use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bottweil::{bbw_memo_entries, bbw_memo_insert, BbwJson};
use crate::error::{Error, Result};
use crate::littlewood::{product_memo_entries, product_memo_insert, ProductKey};

pub const CACHE_FORMAT: &str = "grsod-memo";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    kind: String,
    key: Value,
    val: Value,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub lr: usize,
    pub bbw: usize,
}

enum Entry {
    Lr(ProductKey, Vec<(Vec<i64>, u64)>),
    Bbw(Vec<i64>, BbwJson),
}

fn parse_err(line: usize, what: impl std::fmt::Display) -> Error {
    Error::Parse(format!("cache line {line}: {what}"))
}

fn decode_entry(line: usize, r: Record) -> Result<Entry> {
    match r.kind.as_str() {
        "lr" => {
            let key: ProductKey = serde_json::from_value(r.key).map_err(|e| parse_err(line, e))?;
            let val = serde_json::from_value(r.val).map_err(|e| parse_err(line, e))?;
            Ok(Entry::Lr(key, val))
        }
        "bbw" => {
            let key = serde_json::from_value(r.key).map_err(|e| parse_err(line, e))?;
            let val: BbwJson = serde_json::from_value(r.val).map_err(|e| parse_err(line, e))?;
            val.clone().into_result().map_err(|e| parse_err(line, e))?;
            Ok(Entry::Bbw(key, val))
        }
        other => Err(parse_err(line, format!("unknown kind {other:?}"))),
    }
}

/// Record counts and (kind, key) pairs of a parsed cache file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedCache {
    pub lr: usize,
    pub bbw: usize,
    pub keys: Vec<(String, String)>,
}

/// Parses a whole cache file; any malformed line rejects the file.
pub fn parse_cache(text: &str) -> Result<ParsedCache> {
    let entries = decode_all(text)?;
    let mut lr = 0;
    let mut bbw = 0;
    let mut keys = Vec::new();
    for e in &entries {
        match e {
            Entry::Lr(k, _) => {
                lr += 1;
                keys.push(("lr".into(), serde_json::to_string(k).unwrap_or_default()));
            }
            Entry::Bbw(k, _) => {
                bbw += 1;
                keys.push(("bbw".into(), serde_json::to_string(k).unwrap_or_default()));
            }
        }
    }
    Ok(ParsedCache { lr, bbw, keys })
}

fn decode_all(text: &str) -> Result<Vec<Entry>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let header: Header = serde_json::from_str(first).map_err(|e| parse_err(1, e))?;
    if header.format != CACHE_FORMAT || header.version != CACHE_VERSION {
        return Err(parse_err(1, format!("unsupported header {}/{}", header.format, header.version)));
    }
    lines
        .map(|(i, l)| {
            let r: Record = serde_json::from_str(l).map_err(|e| parse_err(i + 1, e))?;
            decode_entry(i + 1, r)
        })
        .collect()
}

/// Seeds the memo tables from `path`. A missing file loads nothing; a corrupt one is
/// ignored with a warning.
pub fn load(path: &Path) -> CacheStats {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return CacheStats::default(),
        Err(e) => {
            warn!("ignoring cache {}: {e}", path.display());
            return CacheStats::default();
        }
    };
    match decode_all(&text) {
        Ok(entries) => {
            let mut stats = CacheStats::default();
            for e in entries {
                match e {
                    Entry::Lr(k, v) => {
                        stats.lr += 1;
                        product_memo_insert(k, v);
                    }
                    Entry::Bbw(k, v) => {
                        if let Ok(r) = v.into_result() {
                            stats.bbw += 1;
                            bbw_memo_insert(k, r);
                        }
                    }
                }
            }
            stats
        }
        Err(e) => {
            warn!("ignoring corrupt cache {}: {e}", path.display());
            CacheStats::default()
        }
    }
}

fn record_line(kind: &str, key: impl Serialize, val: impl Serialize) -> Result<String> {
    let r = Record {
        kind: kind.into(),
        key: serde_json::to_value(key).map_err(|e| Error::Internal(e.to_string()))?,
        val: serde_json::to_value(val).map_err(|e| Error::Internal(e.to_string()))?,
    };
    serde_json::to_string(&r).map_err(|e| Error::Internal(e.to_string()))
}

/// Appends memo entries not yet in the file. A corrupt or foreign file is replaced.
pub fn save(path: &Path) -> Result<CacheStats> {
    let io = |e: std::io::Error| Error::Precondition(format!("cache {}: {e}", path.display()));
    let existing = fs::read_to_string(path).ok();
    let known: Option<HashSet<(String, String)>> = existing
        .as_deref()
        .and_then(|t| parse_cache(t).ok())
        .map(|p| p.keys.into_iter().collect());
    let fresh = known.is_none();
    if fresh && existing.as_deref().is_some_and(|t| !t.trim().is_empty()) {
        warn!("replacing unreadable cache {}", path.display());
    }
    let known = known.unwrap_or_default();
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(!fresh)
        .truncate(fresh)
        .open(path)
        .map_err(io)?;
    let mut out = BufWriter::new(file);
    if fresh {
        let h = Header { format: CACHE_FORMAT.into(), version: CACHE_VERSION };
        writeln!(out, "{}", serde_json::to_string(&h).map_err(|e| Error::Internal(e.to_string()))?).map_err(io)?;
    }
    let mut stats = CacheStats::default();
    for (k, v) in product_memo_entries() {
        let ks = serde_json::to_string(&k).map_err(|e| Error::Internal(e.to_string()))?;
        if !known.contains(&("lr".to_string(), ks)) {
            writeln!(out, "{}", record_line("lr", &k, &v)?).map_err(io)?;
            stats.lr += 1;
        }
    }
    for (k, v) in bbw_memo_entries() {
        let ks = serde_json::to_string(&k).map_err(|e| Error::Internal(e.to_string()))?;
        if !known.contains(&("bbw".to_string(), ks)) {
            writeln!(out, "{}", record_line("bbw", &k, v.to_json())?).map_err(io)?;
            stats.bbw += 1;
        }
    }
    out.flush().map_err(io)?;
    Ok(stats)
}
