//! Append-only JSON-lines result cache. Unreadable lines are skipped with a
//! warning; later lines for the same key win.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::record::{ResultRecord, TOOL_VERSION};
use crate::CliError;

pub struct Cache {
    path: PathBuf,
    records: HashMap<String, ResultRecord>,
}

impl Cache {
    pub fn open(path: &Path) -> Result<Self, CliError> {
        let mut records = HashMap::new();
        match File::open(path) {
            Ok(f) => {
                for (n, line) in BufReader::new(f).lines().enumerate() {
                    let line = line.map_err(|e| CliError::io(path, e))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<ResultRecord>(&line) {
                        Ok(rec) if rec.tool_version == TOOL_VERSION => {
                            records.insert(rec.key.clone(), rec);
                        }
                        Ok(_) => {}
                        Err(e) => eprintln!("warning: {}:{}: skipping unreadable cache line ({e})", path.display(), n + 1),
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(CliError::io(path, e)),
        }
        Ok(Cache {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn get(&self, key: &str) -> Option<&ResultRecord> {
        self.records.get(key)
    }

    pub fn append(&mut self, new: &[ResultRecord]) -> Result<(), CliError> {
        if new.is_empty() {
            return Ok(());
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| CliError::io(&self.path, e))?;
        let mut buf = String::new();
        for rec in new {
            buf.push_str(&serde_json::to_string(rec).expect("record serializes"));
            buf.push('\n');
            self.records.insert(rec.key.clone(), rec.clone());
        }
        f.write_all(buf.as_bytes()).map_err(|e| CliError::io(&self.path, e))
    }
}
