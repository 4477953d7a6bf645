//! Attribute vectors extracted from media files.
//!
//! These are the values the fingerprint knowledge base keys on. String
//! renderings follow the conventions of common media analyzers so that
//! knowledge-base entries can be compared verbatim.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MediaKind {
    Image,
    Video,
}

impl fmt::Display for MediaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MediaKind::Image => "image",
            MediaKind::Video => "video",
        })
    }
}

impl FromStr for MediaKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "image" => Ok(MediaKind::Image),
            "video" => Ok(MediaKind::Video),
            _ => Err(format!("unknown media kind `{s}`")),
        }
    }
}

/// Pixel dimensions as stored in the file. `length` is the vertical extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Resolution {
    pub width: u32,
    pub length: u32,
}

impl Resolution {
    pub const fn new(width: u32, length: u32) -> Self {
        Resolution { width, length }
    }

    pub fn swapped(self) -> Self {
        Resolution::new(self.length, self.width)
    }

    /// True when both dimensions differ by at most `tolerance` pixels.
    pub fn within(self, other: Resolution, tolerance: u32) -> bool {
        self.width.abs_diff(other.width) <= tolerance
            && self.length.abs_diff(other.length) <= tolerance
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.length)
    }
}

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, l) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("resolution `{s}` is not WxH"))?;
        let width: u32 = w.trim().parse().map_err(|_| format!("bad width in `{s}`"))?;
        let length: u32 = l.trim().parse().map_err(|_| format!("bad length in `{s}`"))?;
        if width == 0 || length == 0 {
            return Err(format!("resolution `{s}` must be positive"));
        }
        Ok(Resolution { width, length })
    }
}

/// File extension class. Anything that is not one of the tracked
/// extensions collapses to `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Extension {
    #[serde(rename = "mp4")]
    Mp4,
    #[serde(rename = "MOV")]
    Mov,
    #[serde(rename = "JPG")]
    Jpg,
    #[serde(rename = "other")]
    Other,
}

impl Extension {
    /// Classify the extension of a file name, case-insensitively.
    /// Returns `None` when the name has no extension at all.
    pub fn from_file_name(name: &str) -> Option<Self> {
        let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
        let (_, ext) = base.rsplit_once('.')?;
        Some(match ext.to_ascii_lowercase().as_str() {
            "mp4" => Extension::Mp4,
            "mov" => Extension::Mov,
            "jpg" | "jpeg" => Extension::Jpg,
            _ => Extension::Other,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Extension::Mp4 => "mp4",
            Extension::Mov => "MOV",
            Extension::Jpg => "JPG",
            Extension::Other => "other",
        }
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Extension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mp4" => Ok(Extension::Mp4),
            "mov" => Ok(Extension::Mov),
            "jpg" | "jpeg" => Ok(Extension::Jpg),
            "other" => Ok(Extension::Other),
            _ => Err(format!("unknown extension `{s}`")),
        }
    }
}

/// Container classification derived from the major brand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormatProfile {
    BaseMedia,
    BaseMediaV2,
    QuickTime,
    /// Major brand outside the tracked lineages. Never matches a fingerprint.
    Other,
}

impl FormatProfile {
    /// Analyzer-style label, e.g. "Base Media Version 2".
    pub fn label(self) -> &'static str {
        match self {
            FormatProfile::BaseMedia => "Base Media",
            FormatProfile::BaseMediaV2 => "Base Media Version 2",
            FormatProfile::QuickTime => "QuickTime",
            FormatProfile::Other => "Other",
        }
    }

    pub fn ident(self) -> &'static str {
        match self {
            FormatProfile::BaseMedia => "BaseMedia",
            FormatProfile::BaseMediaV2 => "BaseMediaV2",
            FormatProfile::QuickTime => "QuickTime",
            FormatProfile::Other => "Other",
        }
    }
}

impl fmt::Display for FormatProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ident())
    }
}

impl FromStr for FormatProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "BaseMedia" => Ok(FormatProfile::BaseMedia),
            "BaseMediaV2" => Ok(FormatProfile::BaseMediaV2),
            "QuickTime" => Ok(FormatProfile::QuickTime),
            "Other" => Ok(FormatProfile::Other),
            _ => Err(format!("unknown format profile `{s}`")),
        }
    }
}

/// Vendor metadata that survives transcoding and identifies a messenger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Marker {
    MovieName,
    MovieMore,
    Copyright,
    RecordedDate,
}

impl Marker {
    pub const ALL: [Marker; 4] = [
        Marker::MovieName,
        Marker::MovieMore,
        Marker::Copyright,
        Marker::RecordedDate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Marker::MovieName => "MovieName",
            Marker::MovieMore => "MovieMore",
            Marker::Copyright => "Copyright",
            Marker::RecordedDate => "RecordedDate",
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Marker {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Marker::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown marker `{s}`"))
    }
}

/// Everything the video fingerprints look at, for one file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VideoAttributes {
    pub extension: Extension,
    pub format_profile: FormatProfile,
    pub codec_id: String,
    pub video_format_profile: String,
    pub width: u32,
    pub length: u32,
    pub encoder: Option<String>,
    pub markers: BTreeSet<Marker>,
    pub byte_size: u64,
}

impl VideoAttributes {
    pub fn resolution(&self) -> Resolution {
        Resolution::new(self.width, self.length)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImageAttributes {
    pub width: u32,
    pub length: u32,
    pub byte_size: u64,
    pub extension: Extension,
}

impl ImageAttributes {
    pub fn resolution(&self) -> Resolution {
        Resolution::new(self.width, self.length)
    }
}

/// Either kind of attribute vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MediaAttributes {
    Image(ImageAttributes),
    Video(VideoAttributes),
}

impl MediaAttributes {
    pub fn kind(&self) -> MediaKind {
        match self {
            MediaAttributes::Image(_) => MediaKind::Image,
            MediaAttributes::Video(_) => MediaKind::Video,
        }
    }
}
