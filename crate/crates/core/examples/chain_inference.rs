//! Forwarding chains: what survives when a clip passes through two
//! messengers.

use mediafp::infer::{infer_chain, match_video};
use mediafp::kb::KnowledgeBase;
use mediafp::{Extension, FormatProfile, Marker, VideoAttributes};

fn show(label: &str, attrs: &VideoAttributes, kb: &KnowledgeBase) {
    let verdict = match_video(attrs, kb);
    println!("{label}: {:?}, {} hypotheses", verdict.outcome, verdict.chain_hypotheses.len());
    for h in infer_chain(attrs, kb) {
        println!("  {} -> {} ({}, first hop {})", h.nth_app, h.nplus1_app, h.os, h.quality);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::builtin()?;

    // KakaoTalk then WeChat on iOS: the WeChat vendor atom survives.
    let kakao_wechat = VideoAttributes {
        extension: Extension::Mp4,
        format_profile: FormatProfile::BaseMediaV2,
        codec_id: "mp42 (isom/mp41/mp42)".into(),
        video_format_profile: "High@L3".into(),
        width: 720,
        length: 404,
        encoder: None,
        markers: [Marker::MovieMore].into(),
        byte_size: 4096,
    };
    show("KakaoTalk -> WeChat", &kakao_wechat, &kb);

    // Facebook Messenger on Android first: every second hop looks the same.
    let fbm = VideoAttributes {
        extension: Extension::Mp4,
        format_profile: FormatProfile::BaseMedia,
        codec_id: "isom (isom/iso2/avc1/mp41)".into(),
        video_format_profile: "Main@L4".into(),
        width: 1920,
        length: 1080,
        encoder: Some("Lavf58.20.100".into()),
        markers: Default::default(),
        byte_size: 4096,
    };
    show("Facebook Messenger -> ?", &fbm, &kb);
    Ok(())
}
