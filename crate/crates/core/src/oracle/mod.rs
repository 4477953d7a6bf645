//! Forward model of messenger transformations.
//!
//! Given an original and a knowledge-base record, predict the attributes of
//! the transmitted file, write a minimal file carrying them, and check that
//! the extractor and matcher recover the record. This is the self-test loop
//! behind `mediafp selftest`.

mod synth;
mod tsv;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::attrs::{ImageAttributes, MediaAttributes, Resolution, VideoAttributes};
use crate::bmff::extract_video_attributes;
use crate::infer::{match_image, match_video, Verdict};
use crate::jpeg::extract_image_attributes_named;
use crate::kb::{Constraints, EncoderRule, FingerprintRecord, Hop, KnowledgeBase, OriginalAttributes, Os, RecordFilter, ResolutionSet};

pub use synth::{synthesize_container, synthesize_jpeg, synthetic_file_name};
pub use tsv::{corpus_to_tsv, parse_corpus_tsv, TsvError};

/// Stand-in output size for records whose resolution is not predictable.
pub const SYNTHETIC_RESOLUTION: Resolution = Resolution::new(1280, 720);
/// Byte size given to synthesized videos; only the header matters.
pub const SYNTHETIC_VIDEO_SIZE: u64 = 4096;
/// Byte size given to images of records without a size band.
pub const UNBANDED_IMAGE_SIZE: u64 = 350_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("no transformation known for {0}")]
    UnknownTransform(String),
    #[error("inconsistent attributes: {0}")]
    InconsistentAttrs(String),
}

/// One predicted output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub attributes: MediaAttributes,
    /// The resolution was invented because the record leaves it open.
    pub synthetic_resolution: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transformed {
    /// Every combination the record allows, in record order.
    Alternatives(Vec<Expected>),
    /// The messenger leaves no footprint; the output looks like the input.
    Indistinguishable(MediaAttributes),
}

impl Transformed {
    pub fn first(&self) -> Option<&MediaAttributes> {
        match self {
            Transformed::Alternatives(v) => v.first().map(|e| &e.attributes),
            Transformed::Indistinguishable(a) => Some(a),
        }
    }
}

/// Predict what sending `original` through `app` on `os` at `quality` yields.
pub fn apply_transform(
    original: &MediaAttributes,
    app: &str,
    os: Os,
    quality: &str,
    kb: &KnowledgeBase,
) -> Result<Transformed, OracleError> {
    let filter = RecordFilter {
        app: Some(app.to_string()),
        os: Some(os),
        media_kind: Some(original.kind()),
    };
    let records: Vec<_> = kb
        .list_records(&filter)
        .into_iter()
        .filter(|r| r.hop == Hop::Single && r.quality.eq_ignore_ascii_case(quality))
        .collect();
    combine(original, &records, || format!("{app} on {os} at {quality}"))
}

/// Predict the result of forwarding `original` from `nth_app` to `app`.
pub fn apply_chain(
    original: &MediaAttributes,
    nth_app: &str,
    app: &str,
    os: Os,
    kb: &KnowledgeBase,
) -> Result<Transformed, OracleError> {
    let filter = RecordFilter {
        app: Some(app.to_string()),
        os: Some(os),
        media_kind: Some(original.kind()),
    };
    let records: Vec<_> = kb
        .list_records(&filter)
        .into_iter()
        .filter(|r| r.hop == Hop::Chain && r.nth_app.as_deref().is_some_and(|n| n.eq_ignore_ascii_case(nth_app)))
        .collect();
    combine(original, &records, || format!("{nth_app} then {app} on {os}"))
}

fn combine(
    original: &MediaAttributes,
    records: &[&FingerprintRecord],
    describe: impl Fn() -> String,
) -> Result<Transformed, OracleError> {
    if records.is_empty() {
        return Err(OracleError::UnknownTransform(describe()));
    }
    let mut out = Vec::new();
    for r in records {
        if let Transformed::Alternatives(v) = apply_record(original, r)? {
            out.extend(v);
        }
    }
    if out.is_empty() {
        return Ok(Transformed::Indistinguishable(original.clone()));
    }
    Ok(Transformed::Alternatives(out))
}

/// Predict the output of a single record. Fields the record leaves open
/// are copied from the original.
pub fn apply_record(original: &MediaAttributes, record: &FingerprintRecord) -> Result<Transformed, OracleError> {
    let mismatch = || {
        OracleError::InconsistentAttrs(format!(
            "record {} is {} but the original is {}",
            record.record_id,
            record.media_kind,
            original.kind()
        ))
    };
    match (&record.constraints, original) {
        (Constraints::None, _) => {
            if record.media_kind != original.kind() {
                return Err(mismatch());
            }
            Ok(Transformed::Indistinguishable(original.clone()))
        }
        (Constraints::Image(c), MediaAttributes::Image(o)) => {
            let byte_size = c.size_band.map_or(UNBANDED_IMAGE_SIZE, |b| b.center);
            let alts = c
                .resolutions
                .iter()
                .map(|r| Expected {
                    attributes: MediaAttributes::Image(ImageAttributes {
                        width: r.width,
                        length: r.length,
                        byte_size,
                        extension: o.extension,
                    }),
                    synthetic_resolution: false,
                })
                .collect();
            Ok(Transformed::Alternatives(alts))
        }
        (Constraints::Video(c), MediaAttributes::Video(o)) => Ok(Transformed::Alternatives(video_alternatives(c, o))),
        _ => Err(mismatch()),
    }
}

fn or_original<T: Clone>(allowed: &[T], original: &T) -> Vec<T> {
    if allowed.is_empty() {
        vec![original.clone()]
    } else {
        allowed.to_vec()
    }
}

fn video_alternatives(c: &crate::kb::VideoConstraints, o: &VideoAttributes) -> Vec<Expected> {
    let resolutions: Vec<(Resolution, bool)> = match &c.resolutions {
        ResolutionSet::Any => vec![(SYNTHETIC_RESOLUTION, true)],
        ResolutionSet::Exact(v) => v.iter().map(|r| (*r, false)).collect(),
    };
    let encoders: Vec<Option<String>> = match &c.encoders {
        EncoderRule::Any => vec![o.encoder.clone()],
        EncoderRule::Absent => vec![None],
        EncoderRule::OneOf(v) => v.iter().cloned().map(Some).collect(),
    };
    let mut markers: BTreeSet<_> = o.markers.clone();
    markers.extend(c.required_markers.iter().copied());
    markers.extend(c.expected_markers.iter().copied());
    for m in &c.forbidden_markers {
        markers.remove(m);
    }

    let mut out = Vec::new();
    for ext in or_original(&c.extensions, &o.extension) {
        for fp in or_original(&c.format_profiles, &o.format_profile) {
            for codec in or_original(&c.codec_ids, &o.codec_id) {
                for vfp in or_original(&c.video_format_profiles, &o.video_format_profile) {
                    for (res, synthetic) in &resolutions {
                        for enc in &encoders {
                            out.push(Expected {
                                attributes: MediaAttributes::Video(VideoAttributes {
                                    extension: ext,
                                    format_profile: fp,
                                    codec_id: codec.clone(),
                                    video_format_profile: vfp.clone(),
                                    width: res.width,
                                    length: res.length,
                                    encoder: enc.clone(),
                                    markers: markers.clone(),
                                    byte_size: SYNTHETIC_VIDEO_SIZE,
                                }),
                                synthetic_resolution: *synthetic,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// The original a record's transformation starts from: same media kind and
/// OS scope, falling back to the built-in originals.
pub fn original_for(record: &FingerprintRecord, kb: &KnowledgeBase) -> Option<MediaAttributes> {
    let pick = |kb: &KnowledgeBase| {
        let same_kind = || kb.originals.iter().filter(|o| o.media_kind() == record.media_kind);
        same_kind()
            .find(|o| o.os == record.os)
            .or_else(|| same_kind().find(|o| o.os.overlaps(record.os)))
            .map(|o| match &o.attributes {
                OriginalAttributes::Image(a) => MediaAttributes::Image(a.clone()),
                OriginalAttributes::Video(a) => MediaAttributes::Video(a.clone()),
            })
    };
    pick(kb).or_else(|| KnowledgeBase::builtin().ok().as_ref().and_then(pick))
}

/// A synthetic file description labelled with the record that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub attributes: MediaAttributes,
    pub label: String,
}

/// One entry per distinguishable record, single-hop and chain alike, using
/// the first alternative that can actually be written to a file.
pub fn generate_corpus(kb: &KnowledgeBase) -> Vec<CorpusEntry> {
    kb.records
        .iter()
        .filter(|r| r.distinguishable)
        .filter_map(|r| {
            let original = original_for(r, kb)?;
            let Ok(Transformed::Alternatives(alts)) = apply_record(&original, r) else {
                return None;
            };
            let chosen = alts
                .iter()
                .find(|e| synthesize(&e.attributes).is_ok())
                .or(alts.first())?;
            Some(CorpusEntry {
                attributes: chosen.attributes.clone(),
                label: r.record_id.clone(),
            })
        })
        .collect()
}

/// Write a file carrying `attrs`.
pub fn synthesize(attrs: &MediaAttributes) -> Result<Vec<u8>, OracleError> {
    match attrs {
        MediaAttributes::Video(v) => synthesize_container(v),
        MediaAttributes::Image(i) => synthesize_jpeg(i),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestFailure {
    pub record_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelftestReport {
    pub cases: usize,
    pub failures: Vec<SelftestFailure>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Does the verdict contain the record that produced the file?
pub fn verdict_contains(verdict: &Verdict, record: &FingerprintRecord) -> bool {
    match record.hop {
        Hop::Single => verdict
            .candidates
            .iter()
            .any(|c| c.app == record.app && c.os == record.os && c.quality == record.quality),
        Hop::Chain => verdict.chain_hypotheses.iter().any(|h| {
            h.nplus1_app == record.app && Some(h.nth_app.as_str()) == record.nth_app.as_deref() && h.os == record.os
        }),
    }
}

/// Check one corpus entry end to end: write, extract, match.
pub fn check_entry(entry: &CorpusEntry, kb: &KnowledgeBase) -> Result<(), String> {
    let record = kb
        .record(&entry.label)
        .ok_or_else(|| format!("label {} is not in the knowledge base", entry.label))?;
    let bytes = synthesize(&entry.attributes).map_err(|e| e.to_string())?;
    let (extracted, verdict) = match &entry.attributes {
        MediaAttributes::Video(v) => {
            let back = extract_video_attributes(&bytes, synthetic_file_name(v.extension)).map_err(|e| e.to_string())?;
            let verdict = match_video(&back, kb);
            (MediaAttributes::Video(back), verdict)
        }
        MediaAttributes::Image(i) => {
            let back = extract_image_attributes_named(&bytes, synthetic_file_name(i.extension)).map_err(|e| e.to_string())?;
            let verdict = match_image(&back, kb);
            (MediaAttributes::Image(back), verdict)
        }
    };
    if extracted != entry.attributes {
        return Err(format!("extracted {extracted:?}, expected {:?}", entry.attributes));
    }
    if !verdict_contains(&verdict, record) {
        let got: Vec<_> = verdict
            .candidates
            .iter()
            .map(|c| c.record_id.as_str())
            .chain(verdict.chain_hypotheses.iter().map(|h| h.record_id.as_str()))
            .collect();
        return Err(format!("matcher returned {:?} with {got:?}", verdict.outcome));
    }
    Ok(())
}

/// Run the full loop over every distinguishable record.
pub fn run_selftest(kb: &KnowledgeBase) -> SelftestReport {
    let corpus = generate_corpus(kb);
    let mut report = SelftestReport {
        cases: kb.records.iter().filter(|r| r.distinguishable).count(),
        failures: Vec::new(),
    };
    let covered: BTreeSet<&str> = corpus.iter().map(|e| e.label.as_str()).collect();
    for r in kb.records.iter().filter(|r| r.distinguishable) {
        if !covered.contains(r.record_id.as_str()) {
            report.failures.push(SelftestFailure {
                record_id: r.record_id.clone(),
                reason: "no original to transform".into(),
            });
        }
    }
    for entry in &corpus {
        if let Err(reason) = check_entry(entry, kb) {
            report.failures.push(SelftestFailure {
                record_id: entry.label.clone(),
                reason,
            });
        }
    }
    report
}
