//! Append-only event log, one JSON object per line.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use belief_core::{Condition, Dataset};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StudyError};
use crate::protocol::Step;

pub const LOG_FILE: &str = "events.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Assigned {
        participant_id: String,
        condition: Condition,
        dataset: Dataset,
        at_ms: i64,
    },
    Step {
        participant_id: String,
        at_ms: i64,
        payload: Step,
    },
}

#[derive(Debug)]
pub struct EventLog {
    file: Option<(PathBuf, File)>,
}

impl EventLog {
    pub fn in_memory() -> Self {
        Self { file: None }
    }

    /// Open (creating if needed) the log in `dir` and return it with the
    /// events already stored.
    pub fn open(dir: &Path) -> Result<(Self, Vec<Event>)> {
        fs::create_dir_all(dir)?;
        let path = dir.join(LOG_FILE);
        let mut events = Vec::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let event = serde_json::from_str(&line)
                    .map_err(|e| StudyError::Storage(format!("{}:{}: {e}", path.display(), i + 1)))?;
                events.push(event);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok((Self { file: Some((path, file)) }, events))
    }

    pub fn path(&self) -> Option<&Path> {
        self.file.as_ref().map(|(p, _)| p.as_path())
    }

    pub fn append(&mut self, event: &Event) -> Result<()> {
        if let Some((_, file)) = &mut self.file {
            let mut line = serde_json::to_string(event).map_err(|e| StudyError::Storage(e.to_string()))?;
            line.push('\n');
            file.write_all(line.as_bytes())?;
            file.sync_data()?;
        }
        Ok(())
    }
}
