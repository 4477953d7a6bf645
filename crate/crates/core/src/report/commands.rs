//! Subcommand bodies, kept out of the binary so they can be tested directly.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::kb::{validate_kb, Hop, KbError, KnowledgeBase, RecordFilter};
use crate::oracle::run_selftest;

use super::{render_json, render_text, scan_paths, ReportFormat, ScanOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    /// Something was processed and found wrong.
    Failure = 1,
    /// Bad invocation: missing paths, unreadable knowledge base.
    Usage = 2,
}

impl From<ExitCode> for std::process::ExitCode {
    fn from(c: ExitCode) -> Self {
        std::process::ExitCode::from(c as u8)
    }
}

/// Load from `path` when given, otherwise the compiled-in knowledge base.
pub fn load_kb_or_builtin(path: Option<&Path>) -> Result<KnowledgeBase, KbError> {
    match path {
        Some(p) => KnowledgeBase::load_path(p),
        None => KnowledgeBase::builtin(),
    }
}

fn load_or_report(path: Option<&Path>, err: &mut dyn Write) -> Result<KnowledgeBase, ExitCode> {
    load_kb_or_builtin(path).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        match e {
            KbError::Io { .. } => ExitCode::Usage,
            _ => ExitCode::Failure,
        }
    })
}

pub fn scan_command(
    paths: &[PathBuf],
    format: ReportFormat,
    kb_path: Option<&Path>,
    opts: ScanOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> ExitCode {
    let kb = match load_or_report(kb_path, err) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let reports = match scan_paths(paths, &kb, opts) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return ExitCode::Usage;
        }
    };
    let text = match format {
        ReportFormat::Text => render_text(&reports),
        ReportFormat::Json => render_json(&reports),
    };
    let _ = out.write_all(text.as_bytes());
    if reports.iter().any(|r| r.error.is_some()) {
        ExitCode::Failure
    } else {
        ExitCode::Success
    }
}

pub fn kb_validate_command(kb_path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    let kb = match load_or_report(kb_path, err) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let report = validate_kb(&kb);
    let _ = writeln!(
        out,
        "{} records, {} originals, {} overwritten chain entries",
        kb.records.len(),
        kb.originals.len(),
        kb.overwritten.len()
    );
    let _ = writeln!(out, "{report}");
    if report.error_count() > 0 {
        ExitCode::Failure
    } else {
        ExitCode::Success
    }
}

pub fn kb_list_command(
    kb_path: Option<&Path>,
    filter: &RecordFilter,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> ExitCode {
    let kb = match load_or_report(kb_path, err) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    for r in kb.list_records(filter) {
        let via = match (&r.hop, &r.nth_app) {
            (Hop::Chain, Some(n)) => format!("via {n}"),
            _ => "-".into(),
        };
        let state = if r.distinguishable { "distinguishable" } else { "indistinguishable" };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{state}",
            r.record_id, r.media_kind, r.app, r.os, r.quality, via
        );
    }
    ExitCode::Success
}

pub fn selftest_command(kb_path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    let kb = match load_or_report(kb_path, err) {
        Ok(kb) => kb,
        Err(code) => return code,
    };
    let report = run_selftest(&kb);
    for f in &report.failures {
        let _ = writeln!(out, "FAIL {}: {}", f.record_id, f.reason);
    }
    let _ = writeln!(out, "{} cases, {} failures", report.cases, report.failures.len());
    if report.passed() {
        ExitCode::Success
    } else {
        ExitCode::Failure
    }
}
