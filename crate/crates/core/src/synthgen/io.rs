use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::generate::SynthCorpus;
use crate::corpus::{RawComment, RawPost};
use crate::error::{Error, Result};

/// One JSON object per line.
pub fn write_jsonl<R: Serialize>(records: impl IntoIterator<Item = R>, out: impl Write) -> Result<()> {
    let mut w = BufWriter::new(out);
    for r in records {
        serde_json::to_writer(&mut w, &r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPaths {
    pub comments: PathBuf,
    pub posts: PathBuf,
    pub truth: PathBuf,
}

impl SynthCorpus {
    /// Writes `comments.jsonl`, `posts.jsonl` and the `truth.json` sidecar into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<SynthPaths> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let paths = SynthPaths {
            comments: dir.join("comments.jsonl"),
            posts: dir.join("posts.jsonl"),
            truth: dir.join("truth.json"),
        };
        let create = |p: &Path| File::create(p).map_err(|e| Error::io(p, e));
        write_jsonl(self.comments.iter().map(RawComment::from), create(&paths.comments)?)?;
        write_jsonl(self.posts.iter().map(RawPost::from), create(&paths.posts)?)?;
        let mut w = BufWriter::new(create(&paths.truth)?);
        serde_json::to_writer_pretty(&mut w, &self.truth)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(paths)
    }
}
