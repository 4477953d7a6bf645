//! Batch scanning and report rendering for the command-line front end.

mod commands;
mod render;

use std::fs::File;
use std::io::{BufReader, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};
use std::time::UNIX_EPOCH;

use rayon::prelude::*;
use thiserror::Error;
use walkdir::WalkDir;

use crate::attrs::{MediaAttributes, MediaKind};
use crate::bmff::{extract_video_attributes_from_reader, BmffError};
use crate::infer::{match_image, match_video, match_video_single, Verdict};
use crate::jpeg::{extract_image_attributes_named, is_jpeg, JpegError, SCAN_LIMIT};
use crate::kb::KnowledgeBase;

pub use commands::{kb_list_command, kb_validate_command, load_kb_or_builtin, scan_command, selftest_command, ExitCode};
pub use render::{render_json, render_text, ReportFormat, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanOptions {
    /// Also consider two-hop chains when matching videos.
    pub chains: bool,
    /// Record each file's modification time in the report.
    pub timestamps: bool,
}

/// What the leading bytes say a file is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sniffed {
    Jpeg,
    Bmff,
    Unknown,
}

/// Box types that can open an MP4 or QuickTime file.
const LEADING_BOXES: [&[u8; 4]; 8] = [b"ftyp", b"moov", b"mdat", b"free", b"skip", b"wide", b"pnot", b"uuid"];

pub fn sniff(head: &[u8]) -> Sniffed {
    if is_jpeg(head) {
        Sniffed::Jpeg
    } else if head.len() >= 8 && LEADING_BOXES.iter().any(|b| head[4..8] == **b) {
        Sniffed::Bmff
    } else {
        Sniffed::Unknown
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportError {
    /// Error variant name, e.g. `MalformedBox` or `NotJpeg`.
    pub code: String,
    pub message: String,
}

impl From<BmffError> for ReportError {
    fn from(e: BmffError) -> Self {
        let code = match &e {
            BmffError::TruncatedFile { .. } => "TruncatedFile",
            BmffError::MalformedBox { .. } => "MalformedBox",
            BmffError::MissingFtyp => "MissingFtyp",
            BmffError::UnknownBrand(_) => "UnknownBrand",
            BmffError::NoVideoTrack => "NoVideoTrack",
            BmffError::UnsupportedCodec(_) => "UnsupportedCodec",
            BmffError::MissingDecoderConfig => "MissingDecoderConfig",
            BmffError::InvalidDimensions => "InvalidDimensions",
            BmffError::Io(_) => "Io",
        };
        ReportError {
            code: code.into(),
            message: e.to_string(),
        }
    }
}

impl From<JpegError> for ReportError {
    fn from(e: JpegError) -> Self {
        let code = match &e {
            JpegError::NotJpeg => "NotJpeg",
            JpegError::NoFrameHeader => "NoFrameHeader",
            JpegError::Truncated(_) => "Truncated",
            JpegError::InvalidDimensions => "InvalidDimensions",
        };
        ReportError {
            code: code.into(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for ReportError {
    fn from(e: std::io::Error) -> Self {
        ReportError {
            code: "Io".into(),
            message: e.to_string(),
        }
    }
}

/// Outcome for one file: either attributes and a verdict, or an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileReport {
    pub path: String,
    pub media_kind: Option<MediaKind>,
    pub attributes: Option<MediaAttributes>,
    pub verdict: Option<Verdict>,
    pub error: Option<ReportError>,
    /// Modification time in seconds since the epoch, with `--timestamps`.
    pub modified: Option<u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{0}: no such file or directory")]
pub struct MissingPath(pub String);

/// Expand files and directories into a sorted, de-duplicated file list.
pub fn collect_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, MissingPath> {
    let mut files = Vec::new();
    for p in paths {
        if !p.exists() {
            return Err(MissingPath(p.display().to_string()));
        }
        for entry in WalkDir::new(p).sort_by_file_name() {
            match entry {
                Ok(e) if e.file_type().is_file() => files.push(e.into_path()),
                Ok(_) => {}
                // Unreadable entries are reported as errors by the scan.
                Err(e) => {
                    if let Some(path) = e.path() {
                        files.push(path.to_path_buf());
                    }
                }
            }
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn analyze(path: &Path, kb: &KnowledgeBase, opts: ScanOptions) -> Result<(MediaAttributes, Verdict), ReportError> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut file = File::open(path)?;
    let total = file.metadata()?.len();
    let mut head = [0u8; 16];
    let n = read_up_to(&mut file, &mut head)?;
    file.seek(SeekFrom::Start(0))?;

    if sniff(&head[..n]) == Sniffed::Jpeg {
        let mut bytes = Vec::new();
        file.take(SCAN_LIMIT as u64).read_to_end(&mut bytes)?;
        let mut attrs = extract_image_attributes_named(&bytes, &name)?;
        attrs.byte_size = total;
        let verdict = match_image(&attrs, kb);
        return Ok((MediaAttributes::Image(attrs), verdict));
    }
    // Anything that is not a JPEG goes to the container parser, which
    // reports what is wrong with it.
    let attrs = extract_video_attributes_from_reader(&mut BufReader::new(file), &name)?;
    let verdict = if opts.chains {
        match_video(&attrs, kb)
    } else {
        match_video_single(&attrs, kb)
    };
    Ok((MediaAttributes::Video(attrs), verdict))
}

fn read_up_to(r: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut n = 0;
    while n < buf.len() {
        match r.read(&mut buf[n..])? {
            0 => break,
            k => n += k,
        }
    }
    Ok(n)
}

pub fn scan_file(path: &Path, kb: &KnowledgeBase, opts: ScanOptions) -> FileReport {
    let modified = if opts.timestamps {
        std::fs::metadata(path)
            .and_then(|m| m.modified())
            .ok()
            .and_then(|t| t.duration_since(UNIX_EPOCH).ok())
            .map(|d| d.as_secs())
    } else {
        None
    };
    let path_str = path.display().to_string();
    match analyze(path, kb, opts) {
        Ok((attrs, verdict)) => FileReport {
            path: path_str,
            media_kind: Some(attrs.kind()),
            attributes: Some(attrs),
            verdict: Some(verdict),
            error: None,
            modified,
        },
        Err(e) => FileReport {
            path: path_str,
            media_kind: None,
            attributes: None,
            verdict: None,
            error: Some(e),
            modified,
        },
    }
}

/// Scan every file under `paths` in parallel. Reports come back in path
/// order whatever the completion order.
pub fn scan_paths(paths: &[PathBuf], kb: &KnowledgeBase, opts: ScanOptions) -> Result<Vec<FileReport>, MissingPath> {
    let files = collect_files(paths)?;
    Ok(files.par_iter().map(|f| scan_file(f, kb, opts)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffing() {
        assert_eq!(sniff(&[0xff, 0xd8, 0xff, 0xe0]), Sniffed::Jpeg);
        assert_eq!(sniff(b"\0\0\0\x18ftypmp42"), Sniffed::Bmff);
        assert_eq!(sniff(b"\0\0\0\x08wide\0\0\0\0"), Sniffed::Bmff);
        assert_eq!(sniff(b"GIF89a.."), Sniffed::Unknown);
        assert_eq!(sniff(b""), Sniffed::Unknown);
    }
}
