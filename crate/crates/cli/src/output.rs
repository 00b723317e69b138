//! Outputs are staged in temporary files next to their destination and only
//! moved into place once the whole command has succeeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, NamedTempFile)>,
    stdout: Vec<u8>,
}

impl Outputs {
    /// Stage `bytes` for `path`, or for stdout when no path is given.
    pub fn stage(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
        let Some(path) = path else {
            self.stdout.extend_from_slice(bytes);
            return Ok(());
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("cannot write into {}", dir.display()))?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        self.files.push((path.to_path_buf(), tmp));
        Ok(())
    }

    pub fn commit(self) -> Result<()> {
        for (path, tmp) in self.files {
            tmp.persist(&path).with_context(|| format!("cannot write {}", path.display()))?;
        }
        if !self.stdout.is_empty() {
            let mut out = std::io::stdout().lock();
            out.write_all(&self.stdout)?;
            out.flush()?;
        }
        Ok(())
    }
}
