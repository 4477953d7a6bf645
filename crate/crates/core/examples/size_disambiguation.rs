//! Two messengers emit 720x960 photos; file size tells them apart.

use mediafp::infer::match_image;
use mediafp::kb::KnowledgeBase;
use mediafp::{Extension, ImageAttributes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::builtin()?;
    for kb_size in [30, 45, 50, 55, 75, 95, 100, 110, 130] {
        let q = ImageAttributes {
            width: 720,
            length: 960,
            byte_size: kb_size * 1000,
            extension: Extension::Jpg,
        };
        let v = match_image(&q, &kb);
        let apps: Vec<_> = v.candidates.iter().map(|c| format!("{} {}", c.app, c.os)).collect();
        let by_size = v.candidates.iter().any(|c| c.used_size_band);
        println!(
            "{kb_size:>4} KB  {:<10?} {}{}",
            v.outcome,
            apps.join(", "),
            if by_size { "  [size band]" } else { "" }
        );
    }
    Ok(())
}
