//! Query the bundled knowledge base.
//!
//!     cargo run --example kb_query -- Telegram ios
//!     cargo run --example kb_query -- KakaoTalk

use mediafp::kb::{validate_kb, Constraints, KnowledgeBase, RecordFilter, ResolutionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::builtin()?;
    let mut args = std::env::args().skip(1);
    let filter = RecordFilter {
        app: args.next(),
        os: args.next().map(|s| s.parse()).transpose()?,
        media_kind: None,
    };

    for r in kb.list_records(&filter) {
        let summary = match &r.constraints {
            Constraints::None => "no footprint".to_string(),
            Constraints::Image(c) => {
                let res: Vec<_> = c.resolutions.iter().map(|r| r.to_string()).collect();
                match c.size_band {
                    Some(b) => format!("{} around {} B", res.join(" / "), b.center),
                    None => res.join(" / "),
                }
            }
            Constraints::Video(c) => {
                let res = match &c.resolutions {
                    ResolutionSet::Any => "any size".to_string(),
                    ResolutionSet::Exact(v) => v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" / "),
                };
                format!("{} {}", c.video_format_profiles.join("|"), res)
            }
        };
        println!("{:<40} {:<10} {:<8} {summary}", r.record_id, r.os.as_str(), r.quality);
    }

    let report = validate_kb(&kb);
    println!(
        "\n{} records, {} collision groups, {} errors",
        kb.records.len(),
        report.collision_groups.len(),
        report.error_count()
    );
    Ok(())
}
