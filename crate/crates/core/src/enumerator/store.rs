use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::CampaignSpec;
use crate::error::{Error, Result};
use crate::realizer::SearchStatus;

/// Outcome of the search on one relabeling class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRecord {
    /// Digest of the canonical representative.
    pub digest: String,
    /// Number of labeled tables in the class.
    pub class_size: u64,
    pub status: SearchStatus,
    pub margin: f64,
    pub restarts: usize,
    pub millis: u64,
    pub seed: u64,
}

/// First line of a store.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoreHeader {
    pub campaign: CampaignSpec,
    pub version: String,
    /// Unix seconds at creation, absent when timing is off.
    pub started: Option<u64>,
}

/// A JSON-lines file: a header line followed by one record per line.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultStore {
    path: PathBuf,
    header: Option<StoreHeader>,
    records: Vec<CampaignRecord>,
    /// A trailing partial line was found and ignored.
    truncated_tail: bool,
}

struct Parsed {
    store: ResultStore,
    /// Bytes up to the end of the last complete line.
    valid_len: usize,
    /// The final line parsed but has no newline yet.
    missing_newline: bool,
}

impl ResultStore {
    /// Reads a store. A final line without a newline that does not parse is
    /// taken to be an interrupted write and ignored; any other malformed line
    /// is an error naming its line number. An empty file is an empty store.
    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::parse(path)?.store)
    }

    fn parse(path: &Path) -> Result<Parsed> {
        let text = fs::read_to_string(path)?;
        let mut store = ResultStore {
            path: path.to_path_buf(),
            header: None,
            records: Vec::new(),
            truncated_tail: false,
        };
        let mut valid_len = 0;
        let mut missing_newline = false;
        let mut offset = 0;
        for (k, line) in text.split_inclusive('\n').enumerate() {
            let lineno = k + 1;
            let complete = line.ends_with('\n');
            let body = line.trim_end_matches(['\n', '\r']);
            offset += line.len();
            let parsed = if k == 0 {
                serde_json::from_str::<StoreHeader>(body).map(|h| store.header = Some(h))
            } else {
                serde_json::from_str::<CampaignRecord>(body).map(|r| store.records.push(r))
            };
            match parsed {
                Ok(()) => {
                    valid_len = offset;
                    missing_newline = !complete;
                }
                Err(_) if !complete => store.truncated_tail = true,
                Err(e) => {
                    return Err(Error::CorruptRecord {
                        line: lineno,
                        message: e.to_string(),
                    })
                }
            }
        }
        Ok(Parsed {
            store,
            valid_len,
            missing_newline,
        })
    }

    /// Opens a store for appending, creating it with a fresh header when the
    /// file is missing or empty. An existing header must describe `spec`.
    pub fn open_or_create(path: &Path, spec: &CampaignSpec, record_timing: bool) -> Result<Self> {
        let existing = path.exists() && fs::metadata(path)?.len() > 0;
        if !existing {
            let header = StoreHeader {
                campaign: spec.clone(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                started: record_timing.then(unix_now),
            };
            let mut line = serde_json::to_string(&header)?;
            line.push('\n');
            fs::write(path, line)?;
            return Ok(ResultStore {
                path: path.to_path_buf(),
                header: Some(header),
                records: Vec::new(),
                truncated_tail: false,
            });
        }
        let Parsed {
            mut store,
            valid_len,
            missing_newline,
        } = Self::parse(path)?;
        let mismatch = |message: String| Error::StoreMismatch {
            path: path.to_path_buf(),
            message,
        };
        match &store.header {
            None => return Err(mismatch("header line is incomplete".into())),
            Some(h) if h.campaign != *spec => {
                return Err(mismatch(format!(
                    "stored campaign {} differs from requested {}",
                    serde_json::to_string(&h.campaign)?,
                    serde_json::to_string(spec)?
                )))
            }
            Some(_) => {}
        }
        if store.truncated_tail {
            OpenOptions::new().write(true).open(path)?.set_len(valid_len as u64)?;
        }
        if missing_newline {
            OpenOptions::new().append(true).open(path)?.write_all(b"\n")?;
        }
        store.truncated_tail = false;
        Ok(store)
    }

    /// Appends records and flushes them to disk.
    pub fn append(&mut self, records: &[CampaignRecord]) -> Result<()> {
        let mut buf = String::new();
        for r in records {
            buf.push_str(&serde_json::to_string(r)?);
            buf.push('\n');
        }
        let mut file = OpenOptions::new().append(true).open(&self.path)?;
        file.write_all(buf.as_bytes())?;
        file.flush()?;
        self.records.extend_from_slice(records);
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn header(&self) -> Option<&StoreHeader> {
        self.header.as_ref()
    }

    pub fn records(&self) -> &[CampaignRecord] {
        &self.records
    }

    pub fn truncated_tail(&self) -> bool {
        self.truncated_tail
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
