//! Print the box tree of an MP4/MOV file.
//!
//!     cargo run --example inspect_boxes -- clip.mp4
//!
//! Without an argument a small synthetic clip is used.

use mediafp::bmff::parse_box_tree;
use mediafp::oracle::synthesize_container;
use mediafp::{Extension, FormatProfile, Marker, VideoAttributes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => synthesize_container(&VideoAttributes {
            extension: Extension::Mp4,
            format_profile: FormatProfile::BaseMediaV2,
            codec_id: "mp42 (isom/mp41/mp42)".into(),
            video_format_profile: "High@L3.1".into(),
            width: 960,
            length: 544,
            encoder: Some("Lavf57.56.101".into()),
            markers: [Marker::Copyright].into(),
            byte_size: 4096,
        })?,
    };
    let tree = parse_box_tree(&bytes)?;
    tree.walk(&mut |node, depth| {
        println!(
            "{:indent$}{} @{} ({} bytes payload)",
            "",
            node.box_type,
            node.offset,
            node.payload_length,
            indent = depth * 2
        );
    });
    Ok(())
}
