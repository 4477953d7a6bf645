//! Extract the fingerprint attributes of a video file.
//!
//!     cargo run --example video_attributes -- clip.MOV
//!
//! Large files are read through a bounded window, so media payloads are
//! never loaded.

use std::fs::File;
use std::io::{BufReader, Cursor};

use mediafp::bmff::extract_video_attributes_from_reader;
use mediafp::oracle::synthesize_container;
use mediafp::{Extension, FormatProfile, VideoAttributes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let attrs = match std::env::args().nth(1) {
        Some(path) => {
            let mut reader = BufReader::new(File::open(&path)?);
            extract_video_attributes_from_reader(&mut reader, &path)?
        }
        None => {
            // A Discord-on-iOS style clip.
            let bytes = synthesize_container(&VideoAttributes {
                extension: Extension::Mov,
                format_profile: FormatProfile::QuickTime,
                codec_id: "qt".into(),
                video_format_profile: "Main@L3.1".into(),
                width: 960,
                length: 540,
                encoder: None,
                markers: Default::default(),
                byte_size: 200_000,
            })?;
            extract_video_attributes_from_reader(&mut Cursor::new(bytes), "clip.MOV")?
        }
    };
    println!("extension            {}", attrs.extension);
    println!("format profile       {}", attrs.format_profile.label());
    println!("codec id             {}", attrs.codec_id);
    println!("video format profile {}", attrs.video_format_profile);
    println!("resolution           {}", attrs.resolution());
    println!("encoder              {}", attrs.encoder.as_deref().unwrap_or("-"));
    let markers: Vec<_> = attrs.markers.iter().map(|m| m.as_str()).collect();
    println!("markers              {}", if markers.is_empty() { "-".into() } else { markers.join(", ") });
    println!("byte size            {}", attrs.byte_size);
    Ok(())
}
