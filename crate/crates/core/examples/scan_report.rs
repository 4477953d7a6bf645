//! Scan a directory and print the JSON report, as `mediafp scan` does.
//!
//!     cargo run --example scan_report -- /path/to/evidence
//!
//! Without an argument a few synthetic files are written to a temporary
//! directory first.

use std::path::PathBuf;

use mediafp::kb::{KnowledgeBase, Os};
use mediafp::oracle::{apply_transform, synthesize, synthetic_file_name};
use mediafp::report::{render_json, render_text, scan_paths, ScanOptions};
use mediafp::{MediaAttributes, MediaKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::builtin()?;
    let tmp = tempfile::tempdir()?;
    let root = match std::env::args().nth(1) {
        Some(p) => PathBuf::from(p),
        None => {
            let sends = [("Discord", MediaKind::Video, Os::Ios, "Default"), ("WhatsApp", MediaKind::Image, Os::Ios, "Default")];
            for (app, kind, os, quality) in sends {
                let original = kb.originals.iter().find(|o| o.media_kind() == kind && o.os == os).unwrap();
                let attrs = match &original.attributes {
                    mediafp::kb::OriginalAttributes::Image(a) => MediaAttributes::Image(a.clone()),
                    mediafp::kb::OriginalAttributes::Video(a) => MediaAttributes::Video(a.clone()),
                };
                let out = apply_transform(&attrs, app, os, quality, &kb)?;
                let sent = out.first().unwrap();
                let ext = match sent {
                    MediaAttributes::Image(i) => i.extension,
                    MediaAttributes::Video(v) => v.extension,
                };
                let name = synthetic_file_name(ext).replace("synthetic", app);
                std::fs::write(tmp.path().join(name), synthesize(sent)?)?;
            }
            tmp.path().to_path_buf()
        }
    };

    let reports = scan_paths(&[root], &kb, ScanOptions { chains: true, timestamps: false })?;
    print!("{}", render_text(&reports));
    print!("{}", render_json(&reports));
    Ok(())
}
