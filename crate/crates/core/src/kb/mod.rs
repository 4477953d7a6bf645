//! Declarative knowledge base of messenger fingerprints.
//!
//! Records are loaded from a line-oriented text format (see [`format`]).
//! The bundled data set lives under `data/`, one file per source table, and
//! is compiled into the library so the tool works without extra files.

mod format;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::attrs::{Extension, FormatProfile, ImageAttributes, Marker, MediaKind, Resolution, VideoAttributes};

pub use format::{load_kb, render_kb, KbBuilder};
pub use validate::{validate_kb, ValidationReport};

/// Resolution tolerance for image records that do not set one.
pub const DEFAULT_TOLERANCE: u32 = 10;

/// Bundled data files, in load order.
pub const BUILTIN_SOURCES: [(&str, &str); 8] = [
    ("originals.kb", include_str!("../../data/originals.kb")),
    ("table6.kb", include_str!("../../data/table6.kb")),
    ("table7.kb", include_str!("../../data/table7.kb")),
    ("table8.kb", include_str!("../../data/table8.kb")),
    ("table9.kb", include_str!("../../data/table9.kb")),
    ("table10.kb", include_str!("../../data/table10.kb")),
    ("table11.kb", include_str!("../../data/table11.kb")),
    ("table12.kb", include_str!("../../data/table12.kb")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("{source_name}:{line}: {message}")]
    Schema {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("manifest mismatch: {0}")]
    ManifestMismatch(String),
    #[error("cannot read knowledge base {path}: {message}")]
    Io { path: String, message: String },
}

/// Operating-system scope of a record or original profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Os {
    #[serde(rename = "iOS")]
    Ios,
    /// Android source images shot at 4032x3024.
    Android43,
    /// Android source images shot at 5312x2988.
    Android169,
    AndroidAny,
    Any,
}

impl Os {
    pub fn as_str(self) -> &'static str {
        match self {
            Os::Ios => "iOS",
            Os::Android43 => "Android43",
            Os::Android169 => "Android169",
            Os::AndroidAny => "AndroidAny",
            Os::Any => "Any",
        }
    }

    fn is_android(self) -> bool {
        matches!(self, Os::Android43 | Os::Android169 | Os::AndroidAny)
    }

    /// Whether two scopes can describe the same device. `AndroidAny` overlaps
    /// every Android variant and `Any` overlaps everything.
    pub fn overlaps(self, other: Os) -> bool {
        self == other
            || self == Os::Any
            || other == Os::Any
            || (self == Os::AndroidAny && other.is_android())
            || (other == Os::AndroidAny && self.is_android())
    }
}

impl fmt::Display for Os {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Os {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ios" => Ok(Os::Ios),
            "android43" => Ok(Os::Android43),
            "android169" => Ok(Os::Android169),
            "android" | "androidany" => Ok(Os::AndroidAny),
            "any" => Ok(Os::Any),
            _ => Err(format!("unknown os `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Hop {
    Single,
    Chain,
}

/// File-size evidence: `center ± tolerance` bytes, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SizeBand {
    pub center: u64,
    pub tolerance: u64,
}

impl SizeBand {
    pub fn contains(&self, size: u64) -> bool {
        size.abs_diff(self.center) <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageConstraints {
    pub resolutions: Vec<Resolution>,
    pub tolerance: u32,
    pub size_band: Option<SizeBand>,
}

impl ImageConstraints {
    pub fn matches_resolution(&self, r: Resolution) -> bool {
        self.resolutions.iter().any(|p| p.within(r, self.tolerance))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ResolutionSet {
    /// Output resolution is not predictable; always passes.
    Any,
    Exact(Vec<Resolution>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EncoderRule {
    Any,
    /// No encoder entry may be present.
    Absent,
    OneOf(Vec<String>),
}

/// Empty lists mean "not constrained".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VideoConstraints {
    pub extensions: Vec<Extension>,
    pub format_profiles: Vec<FormatProfile>,
    pub codec_ids: Vec<String>,
    pub video_format_profiles: Vec<String>,
    pub resolutions: ResolutionSet,
    pub encoders: EncoderRule,
    pub required_markers: Vec<Marker>,
    pub forbidden_markers: Vec<Marker>,
    /// Markers the messenger leaves behind but that may be stripped later.
    /// Presence counts as evidence; absence does not rule the record out.
    pub expected_markers: Vec<Marker>,
    /// Compare video format profiles without the trailing constraint suffix.
    pub ignore_profile_suffix: bool,
}

impl Default for VideoConstraints {
    fn default() -> Self {
        VideoConstraints {
            extensions: Vec::new(),
            format_profiles: Vec::new(),
            codec_ids: Vec::new(),
            video_format_profiles: Vec::new(),
            resolutions: ResolutionSet::Any,
            encoders: EncoderRule::Any,
            required_markers: Vec::new(),
            forbidden_markers: Vec::new(),
            expected_markers: Vec::new(),
            ignore_profile_suffix: false,
        }
    }
}

impl VideoConstraints {
    /// True when no field other than wildcards is set.
    pub fn is_vacuous(&self) -> bool {
        self.extensions.is_empty()
            && self.format_profiles.is_empty()
            && self.codec_ids.is_empty()
            && self.video_format_profiles.is_empty()
            && self.resolutions == ResolutionSet::Any
            && self.encoders == EncoderRule::Any
            && self.required_markers.is_empty()
            && self.forbidden_markers.is_empty()
            && self.expected_markers.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraints {
    /// Placeholder for combinations that leave no footprint.
    None,
    Image(ImageConstraints),
    Video(VideoConstraints),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerprintRecord {
    pub record_id: String,
    /// Source table number, used by the manifest.
    pub table: u32,
    pub media_kind: MediaKind,
    /// For chain records, the later (N+1st) messenger.
    pub app: String,
    pub os: Os,
    pub quality: String,
    pub hop: Hop,
    /// For chain records, the earlier (N-th) messenger.
    pub nth_app: Option<String>,
    pub distinguishable: bool,
    pub constraints: Constraints,
}

impl FingerprintRecord {
    pub fn image_constraints(&self) -> Option<&ImageConstraints> {
        match &self.constraints {
            Constraints::Image(c) => Some(c),
            _ => None,
        }
    }

    pub fn video_constraints(&self) -> Option<&VideoConstraints> {
        match &self.constraints {
            Constraints::Video(c) => Some(c),
            _ => None,
        }
    }
}

/// A chain combination whose result carries only the later messenger's
/// footprint. Kept for completeness of the source tables; never matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverwrittenChain {
    pub entry_id: String,
    pub table: u32,
    pub nth_app: String,
    pub app: String,
    pub os: Os,
}

/// Attributes of an untransmitted camera original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OriginalAttributes {
    Image(ImageAttributes),
    Video(VideoAttributes),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OriginalProfile {
    pub profile_id: String,
    pub table: u32,
    pub os: Os,
    pub attributes: OriginalAttributes,
}

impl OriginalProfile {
    pub fn media_kind(&self) -> MediaKind {
        match self.attributes {
            OriginalAttributes::Image(_) => MediaKind::Image,
            OriginalAttributes::Video(_) => MediaKind::Video,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KbSettings {
    /// Compare encoder strings on their `name.major.minor` prefix only.
    pub encoder_prefix_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBase {
    pub records: Vec<FingerprintRecord>,
    pub originals: Vec<OriginalProfile>,
    pub overwritten: Vec<OverwrittenChain>,
    /// Declared counts, e.g. `table7 = 20` or `table7.Telegram = 5`.
    pub manifest: BTreeMap<String, usize>,
    pub settings: KbSettings,
}

/// Conjunctive record filter; `None` fields match everything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecordFilter {
    pub app: Option<String>,
    pub os: Option<Os>,
    pub media_kind: Option<MediaKind>,
}

impl RecordFilter {
    pub fn matches(&self, r: &FingerprintRecord) -> bool {
        self.app.as_ref().is_none_or(|a| r.app.eq_ignore_ascii_case(a))
            && self.os.is_none_or(|os| filter_os_matches(os, r.os))
            && self.media_kind.is_none_or(|k| r.media_kind == k)
    }
}

/// A filter for a concrete OS picks records scoped to it or to a broader
/// scope that contains it; a broad filter picks everything underneath it.
fn filter_os_matches(filter: Os, record: Os) -> bool {
    match filter {
        Os::Any => true,
        Os::AndroidAny => record.is_android(),
        concrete => record == concrete || record == Os::Any || (record == Os::AndroidAny && concrete.is_android()),
    }
}

impl KnowledgeBase {
    /// The fingerprints compiled into the library.
    pub fn builtin() -> Result<KnowledgeBase, KbError> {
        let mut b = KbBuilder::new();
        for (name, text) in BUILTIN_SOURCES {
            b.add_source(name, text)?;
        }
        b.finish()
    }

    /// Load a single `.kb` file, or every `.kb` file in a directory in
    /// file-name order.
    pub fn load_path(path: &Path) -> Result<KnowledgeBase, KbError> {
        let io_err = |e: std::io::Error| KbError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let mut b = KbBuilder::new();
        if path.is_dir() {
            let mut files: Vec<_> = std::fs::read_dir(path)
                .map_err(io_err)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "kb"))
                .collect();
            files.sort();
            for f in files {
                let text = std::fs::read_to_string(&f).map_err(io_err)?;
                b.add_source(&f.display().to_string(), &text)?;
            }
        } else {
            let text = std::fs::read_to_string(path).map_err(io_err)?;
            b.add_source(&path.display().to_string(), &text)?;
        }
        b.finish()
    }

    pub fn record(&self, id: &str) -> Option<&FingerprintRecord> {
        self.records.iter().find(|r| r.record_id == id)
    }

    pub fn list_records(&self, filter: &RecordFilter) -> Vec<&FingerprintRecord> {
        self.records.iter().filter(|r| filter.matches(r)).collect()
    }

    /// Keep only records from the given tables (originals are kept).
    pub fn restrict_to_tables(&self, tables: &[u32]) -> KnowledgeBase {
        let keep = |t: &u32| tables.contains(t);
        KnowledgeBase {
            records: self.records.iter().filter(|r| keep(&r.table)).cloned().collect(),
            originals: self.originals.clone(),
            overwritten: self.overwritten.iter().filter(|o| keep(&o.table)).cloned().collect(),
            manifest: self
                .manifest
                .iter()
                .filter(|(k, _)| manifest_table(k).is_none_or(|t| keep(&t) || t <= 2))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            settings: self.settings,
        }
    }
}

/// Table number of a manifest key such as `table7` or `table7.Telegram`.
pub(crate) fn manifest_table(key: &str) -> Option<u32> {
    key.strip_prefix("table")?.split('.').next()?.parse().ok()
}
