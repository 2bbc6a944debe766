//! Data-file writers. CSV columns follow struct field order, so the schema is
//! whatever the row type declares.

use std::fs;
use std::path::{Path, PathBuf};

use nmtc_core::ChannelClass;
use serde::{Serialize, Serializer};

use crate::config::Format;
use crate::Result;

/// Writes `rows` to `dir/stem.{csv,json}` and returns the path.
pub fn write_rows<T: Serialize>(dir: &Path, stem: &str, format: Format, rows: &[T]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_path(&path)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => write_json(&path, &rows)?,
    }
    Ok(path)
}

/// Channel classes appear as "CC1".."CC4" in every file.
pub fn ser_class<S: Serializer>(class: &ChannelClass, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(class)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
