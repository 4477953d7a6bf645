//! Identify the messenger behind a video, end to end.
//!
//!     cargo run --example identify_messenger -- received.MOV

use mediafp::bmff::extract_video_attributes;
use mediafp::infer::match_video;
use mediafp::kb::{KnowledgeBase, Os};
use mediafp::oracle::{apply_transform, synthesize_container, synthetic_file_name};
use mediafp::MediaAttributes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::builtin()?;
    let (bytes, name) = match std::env::args().nth(1) {
        Some(path) => (std::fs::read(&path)?, path),
        None => {
            // Send the bundled iPhone original through Telegram at 480p.
            let original = kb.originals.iter().find(|o| o.profile_id == "orig-video-ios").unwrap();
            let mediafp::kb::OriginalAttributes::Video(v) = &original.attributes else { unreachable!() };
            let sent = apply_transform(&MediaAttributes::Video(v.clone()), "Telegram", Os::Ios, "480p", &kb)?;
            let Some(MediaAttributes::Video(v)) = sent.first() else { unreachable!() };
            (synthesize_container(v)?, synthetic_file_name(v.extension).to_string())
        }
    };

    let attrs = extract_video_attributes(&bytes, &name)?;
    let verdict = match_video(&attrs, &kb);
    println!("{name}: {:?}", verdict.outcome);
    for c in &verdict.candidates {
        println!("  {} on {} at {} (matched {})", c.app, c.os, c.quality, c.matched_fields.join(", "));
    }
    for h in &verdict.chain_hypotheses {
        println!("  forwarded {} -> {} on {}", h.nth_app, h.nplus1_app, h.os);
    }
    if let Some(p) = &verdict.original_profile {
        println!("  looks like camera original {p}");
    }
    Ok(())
}
