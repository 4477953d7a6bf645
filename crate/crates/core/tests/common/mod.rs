#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use mediafp::oracle::{generate_corpus, synthesize, synthesize_container, synthesize_jpeg, synthetic_file_name};
use mediafp::kb::KnowledgeBase;
use mediafp::{Extension, FormatProfile, ImageAttributes, Marker, MediaAttributes, VideoAttributes};

pub fn video(
    ext: Extension,
    fp: FormatProfile,
    codec: &str,
    vfp: &str,
    (width, length): (u32, u32),
    encoder: Option<&str>,
    markers: &[Marker],
) -> VideoAttributes {
    VideoAttributes {
        extension: ext,
        format_profile: fp,
        codec_id: codec.into(),
        video_format_profile: vfp.into(),
        width,
        length,
        encoder: encoder.map(str::to_string),
        markers: markers.iter().copied().collect::<BTreeSet<_>>(),
        byte_size: 4096,
    }
}

pub fn discord_ios() -> VideoAttributes {
    video(Extension::Mov, FormatProfile::QuickTime, "qt", "Main@L3.1", (960, 540), None, &[])
}

pub fn telegram_ios_480p() -> VideoAttributes {
    video(Extension::Mov, FormatProfile::BaseMediaV2, "mp42 (isom/mp41/mp42)", "High@L3.1", (848, 464), None, &[])
}

pub fn kakaotalk_wechat_ios() -> VideoAttributes {
    video(
        Extension::Mp4,
        FormatProfile::BaseMediaV2,
        "mp42 (isom/mp41/mp42)",
        "High@L3",
        (720, 404),
        None,
        &[Marker::MovieMore],
    )
}

pub fn facebook_messenger_android_chain() -> VideoAttributes {
    video(
        Extension::Mp4,
        FormatProfile::BaseMedia,
        "isom (isom/iso2/avc1/mp41)",
        "Main@L4",
        (1920, 1080),
        Some("Lavf58.20.100"),
        &[],
    )
}

pub fn image(width: u32, length: u32, byte_size: u64) -> ImageAttributes {
    ImageAttributes {
        width,
        length,
        byte_size,
        extension: Extension::Jpg,
    }
}

pub fn write_video(dir: &Path, stem: &str, v: &VideoAttributes) -> PathBuf {
    let name = synthetic_file_name(v.extension).replace("synthetic", stem);
    let path = dir.join(name);
    std::fs::write(&path, synthesize_container(v).unwrap()).unwrap();
    path
}

pub fn write_image(dir: &Path, stem: &str, i: &ImageAttributes) -> PathBuf {
    let path = dir.join(format!("{stem}.JPG"));
    std::fs::write(&path, synthesize_jpeg(i).unwrap()).unwrap();
    path
}

/// Named fixtures plus one synthesized file per corpus entry, nested one
/// directory deep to exercise the walk.
pub fn write_fixture_corpus(dir: &Path) {
    write_video(dir, "discord-ios", &discord_ios());
    write_video(dir, "telegram-480p", &telegram_ios_480p());
    write_video(dir, "kakaotalk-wechat", &kakaotalk_wechat_ios());
    write_video(dir, "fbm-chain", &facebook_messenger_android_chain());
    write_image(dir, "kakaotalk-general", &image(720, 960, 100_000));
    let nested = dir.join("corpus");
    std::fs::create_dir_all(&nested).unwrap();
    for entry in generate_corpus(&KnowledgeBase::builtin().unwrap()) {
        let ext = match &entry.attributes {
            MediaAttributes::Video(v) => v.extension,
            MediaAttributes::Image(i) => i.extension,
        };
        let name = synthetic_file_name(ext).replace("synthetic", &entry.label);
        std::fs::write(nested.join(name), synthesize(&entry.attributes).unwrap()).unwrap();
    }
}
