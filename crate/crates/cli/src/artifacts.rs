use std::io::Write;
use std::path::Path;

use curvecount::TypeHistogram;
use sha1::{Digest, Sha1};
use tempfile::NamedTempFile;

/// Git blob id of `bytes`, as printed by `git hash-object`.
pub fn git_blob_hash(bytes: &[u8]) -> String {
    let mut h = Sha1::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// One `(series, L, type, count)` row.
pub struct Row {
    pub series: String,
    pub l: f64,
    pub key: String,
    pub count: u64,
}

impl Row {
    pub fn from_histograms(series: &str, hists: &[TypeHistogram]) -> Vec<Row> {
        hists
            .iter()
            .flat_map(|h| {
                h.counts.iter().map(move |(k, v)| Row {
                    series: series.to_string(),
                    l: h.l,
                    key: k.to_string(),
                    count: *v,
                })
            })
            .collect()
    }
}

pub fn rows_to_csv(rows: &[Row]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "L", "type", "count"]).expect("in-memory write");
    for r in rows {
        w.write_record([r.series.as_str(), &r.l.to_string(), &r.key, &r.count.to_string()]).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
