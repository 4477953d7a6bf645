//! Matching extracted attributes against the knowledge base.

mod image;
mod video;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::kb::{FingerprintRecord, Os};

pub use image::{disambiguate_by_size, match_image};
pub use video::{infer_chain, match_video, match_video_single, video_record_fields};

/// One knowledge-base record consistent with the evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub record_id: String,
    pub app: String,
    pub os: Os,
    pub quality: String,
    /// Attribute names that positively matched a constraint.
    pub matched_fields: Vec<&'static str>,
    /// The file size was needed to keep this candidate apart from others.
    pub used_size_band: bool,
}

impl Candidate {
    fn from_record(r: &FingerprintRecord, matched_fields: Vec<&'static str>) -> Self {
        Candidate {
            record_id: r.record_id.clone(),
            app: r.app.clone(),
            os: r.os,
            quality: r.quality.clone(),
            matched_fields,
            used_size_band: false,
        }
    }
}

/// A two-hop path consistent with the evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainHypothesis {
    pub record_id: String,
    pub nth_app: String,
    pub nplus1_app: String,
    pub os: Os,
    /// Quality option used on the first hop.
    pub quality: String,
    pub evidence_fields: Vec<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    /// Exactly one messenger fits.
    Identified,
    /// Several messengers fit equally well.
    Narrowed,
    /// The file looks like an untransmitted camera original.
    OriginalLike,
    /// Only messengers that leave no footprint are consistent.
    Indistinguishable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub candidates: Vec<Candidate>,
    pub outcome: Outcome,
    pub chain_hypotheses: Vec<ChainHypothesis>,
    /// Matching original profile, if any.
    pub original_profile: Option<String>,
    /// Footprint-free records consistent with the evidence.
    pub placeholders: Vec<String>,
}

impl Verdict {
    /// Distinct messengers among single-hop candidates and chain endpoints,
    /// in first-seen order.
    pub fn apps(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.candidates
            .iter()
            .map(|c| c.app.as_str())
            .chain(self.chain_hypotheses.iter().map(|h| h.nplus1_app.as_str()))
            .filter(|a| seen.insert(*a))
            .collect()
    }
}

/// Inputs to [`classify_outcome`].
#[derive(Debug, Clone, Copy)]
pub struct VerdictDraft<'a> {
    pub candidates: &'a [Candidate],
    pub chain_hypotheses: &'a [ChainHypothesis],
    pub original_like: bool,
    pub placeholder_count: usize,
}

pub fn classify_outcome(draft: &VerdictDraft<'_>) -> Outcome {
    let apps: BTreeSet<&str> = draft
        .candidates
        .iter()
        .map(|c| c.app.as_str())
        .chain(draft.chain_hypotheses.iter().map(|h| h.nplus1_app.as_str()))
        .collect();
    match apps.len() {
        1 => Outcome::Identified,
        n if n > 1 => Outcome::Narrowed,
        _ if draft.original_like => Outcome::OriginalLike,
        _ if draft.placeholder_count > 0 => Outcome::Indistinguishable,
        _ => Outcome::Unknown,
    }
}

fn finish(
    candidates: Vec<Candidate>,
    chain_hypotheses: Vec<ChainHypothesis>,
    original_profile: Option<String>,
    placeholders: Vec<String>,
) -> Verdict {
    let outcome = classify_outcome(&VerdictDraft {
        candidates: &candidates,
        chain_hypotheses: &chain_hypotheses,
        original_like: original_profile.is_some(),
        placeholder_count: placeholders.len(),
    });
    Verdict {
        candidates,
        outcome,
        chain_hypotheses,
        original_profile,
        placeholders,
    }
}
