//! Output staging: partially written result files are removed when a run
//! fails, so a nonzero exit never leaves a truncated table behind.

use std::path::{Path, PathBuf};

pub struct OutputGuard {
    staged: Vec<PathBuf>,
    armed: bool,
}

impl OutputGuard {
    pub fn new() -> OutputGuard {
        OutputGuard {
            staged: Vec::new(),
            armed: true,
        }
    }

    pub fn stage(&mut self, path: &Path) {
        self.staged.push(path.to_path_buf());
    }

    pub fn disarm(&mut self) {
        self.armed = false;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if self.armed {
            for path in &self.staged {
                let _ = std::fs::remove_file(path);
            }
        }
    }
}
