//! Messenger provenance fingerprinting for photos and videos.
//!
//! Media sent through an instant messenger is usually re-encoded, and each
//! messenger leaves a characteristic combination of container brand, codec
//! profile, resolution, encoder tag and user-data atoms behind. This crate
//! extracts those attributes from MP4/QuickTime and JPEG files and matches
//! them against a declarative knowledge base of per-messenger fingerprints,
//! including two-hop chains where a file was forwarded from one messenger to
//! another.
//!
//! ```no_run
//! use mediafp::{kb::KnowledgeBase, infer::match_video, bmff::extract_video_attributes};
//!
//! let kb = KnowledgeBase::builtin()?;
//! let bytes = std::fs::read("clip.mp4")?;
//! let attrs = extract_video_attributes(&bytes, "clip.mp4")?;
//! let verdict = match_video(&attrs, &kb);
//! println!("{:?}: {:?}", verdict.outcome, verdict.candidates.first());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod attrs;
pub mod bmff;
pub mod jpeg;
pub mod infer;
pub mod kb;
pub mod oracle;
pub mod report;

pub use attrs::{Extension, FormatProfile, ImageAttributes, Marker, MediaAttributes, MediaKind, Resolution, VideoAttributes};
