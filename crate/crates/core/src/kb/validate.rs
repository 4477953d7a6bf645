//! Consistency findings over a loaded knowledge base.

use std::fmt;

use serde::Serialize;

use super::{Constraints, Hop, KnowledgeBase, ResolutionSet};
use crate::attrs::MediaKind;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Records with identical constraints. Expected where the source tables
    /// show several messengers producing the same output.
    pub collision_groups: Vec<Vec<String>>,
    /// Distinguishable records that constrain nothing.
    pub empty_constraints: Vec<String>,
    /// Single-hop video records with none of codec id, video format profile,
    /// resolution or encoder constrained.
    pub weak_records: Vec<String>,
    /// Chain records whose earlier messenger has no single-hop record.
    pub orphan_chains: Vec<String>,
}

impl ValidationReport {
    /// Number of findings that indicate a broken knowledge base. Collisions
    /// are informational.
    pub fn error_count(&self) -> usize {
        self.empty_constraints.len() + self.weak_records.len() + self.orphan_chains.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "collision groups: {}", self.collision_groups.len())?;
        for g in &self.collision_groups {
            writeln!(f, "  {}", g.join(", "))?;
        }
        for (label, ids) in [
            ("empty constraint sets", &self.empty_constraints),
            ("weak records", &self.weak_records),
            ("orphan chain records", &self.orphan_chains),
        ] {
            writeln!(f, "{label}: {}", ids.len())?;
            for id in ids {
                writeln!(f, "  {id}")?;
            }
        }
        write!(f, "errors: {}", self.error_count())
    }
}

pub fn validate_kb(kb: &KnowledgeBase) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut groups: Vec<(&Constraints, MediaKind, Vec<String>)> = Vec::new();
    for r in kb.records.iter().filter(|r| r.distinguishable) {
        match groups
            .iter_mut()
            .find(|(c, kind, _)| *kind == r.media_kind && **c == r.constraints)
        {
            Some((_, _, ids)) => ids.push(r.record_id.clone()),
            None => groups.push((&r.constraints, r.media_kind, vec![r.record_id.clone()])),
        }
    }
    report.collision_groups = groups
        .into_iter()
        .filter(|(_, _, ids)| ids.len() > 1)
        .map(|(_, _, ids)| ids)
        .collect();

    for r in kb.records.iter().filter(|r| r.distinguishable) {
        let empty = match &r.constraints {
            Constraints::None => true,
            Constraints::Image(c) => c.resolutions.is_empty(),
            Constraints::Video(c) => c.is_vacuous(),
        };
        if empty {
            report.empty_constraints.push(r.record_id.clone());
            continue;
        }
        if let (Hop::Single, Constraints::Video(c)) = (r.hop, &r.constraints) {
            let weak = c.codec_ids.is_empty()
                && c.video_format_profiles.is_empty()
                && c.resolutions == ResolutionSet::Any
                && c.encoders == super::EncoderRule::Any;
            if weak {
                report.weak_records.push(r.record_id.clone());
            }
        }
    }

    for r in kb.records.iter().filter(|r| r.hop == Hop::Chain) {
        let nth = r.nth_app.as_deref().unwrap_or_default();
        let has_single = kb
            .records
            .iter()
            .any(|s| s.hop == Hop::Single && s.media_kind == r.media_kind && s.app == nth);
        if !has_single {
            report.orphan_chains.push(r.record_id.clone());
        }
    }
    report
}
