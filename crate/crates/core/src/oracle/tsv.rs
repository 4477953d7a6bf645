//! Tab-separated corpus export. One file per line, label last:
//!
//! ```text
//! kind  extension  format_profile  codec_id  video_format_profile  resolution  encoder  markers  byte_size  label
//! ```
//!
//! Image rows leave the container columns empty. An empty encoder column
//! means no encoder tag; markers are comma-separated.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::attrs::{Extension, ImageAttributes, Marker, MediaAttributes, MediaKind, Resolution, VideoAttributes};

use super::CorpusEntry;

const HEADER: &str = "# kind\textension\tformat_profile\tcodec_id\tvideo_format_profile\tresolution\tencoder\tmarkers\tbyte_size\tlabel";
const COLUMNS: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("corpus line {line}: {message}")]
pub struct TsvError {
    pub line: usize,
    pub message: String,
}

pub fn corpus_to_tsv(entries: &[CorpusEntry]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for e in entries {
        let row = match &e.attributes {
            MediaAttributes::Video(v) => [
                "video".to_string(),
                v.extension.to_string(),
                v.format_profile.to_string(),
                v.codec_id.clone(),
                v.video_format_profile.clone(),
                v.resolution().to_string(),
                v.encoder.clone().unwrap_or_default(),
                v.markers.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","),
                v.byte_size.to_string(),
                e.label.clone(),
            ],
            MediaAttributes::Image(i) => [
                "image".to_string(),
                i.extension.to_string(),
                String::new(),
                String::new(),
                String::new(),
                i.resolution().to_string(),
                String::new(),
                String::new(),
                i.byte_size.to_string(),
                e.label.clone(),
            ],
        };
        let _ = writeln!(out, "{}", row.join("\t"));
    }
    out
}

pub fn parse_corpus_tsv(text: &str) -> Result<Vec<CorpusEntry>, TsvError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |message: String| TsvError { line, message };
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != COLUMNS {
            return Err(err(format!("expected {COLUMNS} columns, found {}", cols.len())));
        }
        let kind: MediaKind = cols[0].parse().map_err(err)?;
        let extension: Extension = cols[1].parse().map_err(err)?;
        let res: Resolution = cols[5].parse().map_err(err)?;
        let byte_size: u64 = cols[8].parse().map_err(|e| err(format!("byte size: {e}")))?;
        let label = cols[9].to_string();
        if label.is_empty() {
            return Err(err("missing label".into()));
        }
        let attributes = match kind {
            MediaKind::Image => MediaAttributes::Image(ImageAttributes {
                width: res.width,
                length: res.length,
                byte_size,
                extension,
            }),
            MediaKind::Video => {
                let markers = cols[7]
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<Marker>())
                    .collect::<Result<BTreeSet<_>, _>>()
                    .map_err(err)?;
                MediaAttributes::Video(VideoAttributes {
                    extension,
                    format_profile: cols[2].parse().map_err(err)?,
                    codec_id: cols[3].to_string(),
                    video_format_profile: cols[4].to_string(),
                    width: res.width,
                    length: res.length,
                    encoder: Some(cols[6]).filter(|s| !s.is_empty()).map(str::to_string),
                    markers,
                    byte_size,
                })
            }
        };
        out.push(CorpusEntry { attributes, label });
    }
    Ok(out)
}
