use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::infer::Outcome;

use super::FileReport;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

fn report_value(r: &FileReport) -> Value {
    let mut obj = Map::new();
    obj.insert("path".into(), json!(r.path));
    obj.insert("kind".into(), json!(r.media_kind));
    obj.insert("attributes".into(), json!(r.attributes));
    let verdict = r.verdict.as_ref();
    obj.insert("outcome".into(), json!(verdict.map(|v| v.outcome)));
    let candidates: Vec<Value> = verdict
        .map(|v| {
            v.candidates
                .iter()
                .map(|c| {
                    json!({
                        "record_id": c.record_id,
                        "app": c.app,
                        "os": c.os,
                        "quality": c.quality,
                        "matched_fields": c.matched_fields,
                        "used_size_band": c.used_size_band,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    obj.insert("candidates".into(), Value::Array(candidates));
    let chains: Vec<Value> = verdict
        .map(|v| {
            v.chain_hypotheses
                .iter()
                .map(|h| {
                    json!({
                        "record_id": h.record_id,
                        "nth": h.nth_app,
                        "nplus1": h.nplus1_app,
                        "os": h.os,
                        "quality": h.quality,
                        "evidence_fields": h.evidence_fields,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    obj.insert("chains".into(), Value::Array(chains));
    obj.insert("original_profile".into(), json!(verdict.and_then(|v| v.original_profile.clone())));
    obj.insert("placeholders".into(), json!(verdict.map(|v| v.placeholders.clone()).unwrap_or_default()));
    obj.insert(
        "error".into(),
        match &r.error {
            Some(e) => json!({ "code": e.code, "message": e.message }),
            None => Value::Null,
        },
    );
    if let Some(t) = r.modified {
        obj.insert("modified_unix".into(), json!(t));
    }
    Value::Object(obj)
}

pub fn render_json(reports: &[FileReport]) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "reports": reports.iter().map(report_value).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report values always serialize");
    s.push('\n');
    s
}

fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Identified => "Identified",
        Outcome::Narrowed => "Narrowed",
        Outcome::OriginalLike => "OriginalLike",
        Outcome::Indistinguishable => "Indistinguishable",
        Outcome::Unknown => "Unknown",
    }
}

/// Summary table: path, outcome, top candidate, then every chain hypothesis
/// on its own indented line.
pub fn render_text(reports: &[FileReport]) -> String {
    let width = reports.iter().map(|r| r.path.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:<17}  TOP CANDIDATE", "PATH", "OUTCOME");
    let mut errors = 0;
    for r in reports {
        if let Some(e) = &r.error {
            errors += 1;
            let _ = writeln!(out, "{:<width$}  {:<17}  {}: {}", r.path, "error", e.code, e.message);
            continue;
        }
        let Some(v) = &r.verdict else { continue };
        let top = match (v.candidates.first(), &v.original_profile) {
            (Some(c), _) => {
                let more = v.candidates.len() - 1;
                let suffix = if more > 0 { format!(" (+{more} more)") } else { String::new() };
                format!("{} {} {}{suffix}", c.app, c.os, c.quality)
            }
            (None, Some(p)) => format!("original {p}"),
            (None, None) if !v.placeholders.is_empty() => format!("{} footprint-free messengers", v.placeholders.len()),
            (None, None) => "-".into(),
        };
        let _ = writeln!(out, "{:<width$}  {:<17}  {top}", r.path, outcome_label(v.outcome));
        for h in &v.chain_hypotheses {
            let _ = writeln!(out, "{:<width$}    chain: {} -> {} ({})", "", h.nth_app, h.nplus1_app, h.os);
        }
    }
    let _ = writeln!(out, "{} file(s), {errors} error(s)", reports.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_reports() {
        let v: Value = serde_json::from_str(&render_json(&[])).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["reports"], json!([]));
        assert!(render_text(&[]).ends_with("0 file(s), 0 error(s)\n"));
    }
}
