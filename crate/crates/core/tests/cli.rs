mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::*;
use mediafp::kb::BUILTIN_SOURCES;

fn mediafp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mediafp"))
        .args(args)
        .env_remove("MEDIAFP_KB")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Copy the bundled data files into `dir`, letting `edit` rewrite one.
fn write_kb(dir: &Path, edit: impl Fn(&str, &str) -> String) {
    for (name, text) in BUILTIN_SOURCES {
        std::fs::write(dir.join(name), edit(name, text)).unwrap();
    }
}

#[test]
fn scan_identifies_discord() {
    let dir = tempfile::tempdir().unwrap();
    write_video(dir.path(), "clip", &discord_ios());
    let out = mediafp(&["scan", "--format", "json", p(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["outcome"], "Identified");
    assert_eq!(reports[0]["kind"], "video");
    assert_eq!(reports[0]["candidates"][0]["app"], "Discord");
    assert_eq!(reports[0]["candidates"][0]["os"], "iOS");
    assert_eq!(reports[0]["error"], Value::Null);
}

#[test]
fn empty_directory_has_no_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = mediafp(&["scan", "--format", "json", p(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["reports"], serde_json::json!([]));
}

#[test]
fn random_bytes_report_an_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("noise.bin"), [0x13u8, 0x37, 0xde, 0xad, 0xbe, 0xef, 0, 1, 2, 3, 4, 5]).unwrap();
    std::fs::write(dir.path().join("fake.jpg"), [0xff, 0xd8, 0xff, 0xe0, 0x00]).unwrap();
    write_video(dir.path(), "ok", &discord_ios());
    let out = mediafp(&["scan", "--format", "json", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let reports = json(&out)["reports"].as_array().unwrap().clone();
    assert_eq!(reports.len(), 3, "the batch is not aborted");
    let codes: Vec<_> = reports.iter().map(|r| r["error"]["code"].clone()).collect();
    assert_eq!(codes[0], "Truncated");
    // Container parser errors for bytes that are not a JPEG.
    assert!(["MalformedBox", "TruncatedFile"].contains(&codes[1].as_str().unwrap()), "{codes:?}");
    assert_eq!(codes[2], Value::Null);
}

#[test]
fn sniffing_ignores_the_extension() {
    let dir = tempfile::tempdir().unwrap();
    let src = write_video(dir.path(), "clip", &discord_ios());
    std::fs::rename(&src, dir.path().join("clip.jpg")).unwrap();
    let out = mediafp(&["scan", "--format", "json", p(dir.path())]);
    let r = &json(&out)["reports"][0];
    assert_eq!(r["kind"], "video");
    // The extension attribute is the literal file name suffix.
    assert_eq!(r["attributes"]["extension"], "JPG");
    assert_eq!(r["candidates"], serde_json::json!([]));
}

#[test]
fn missing_path_is_a_usage_error() {
    let out = mediafp(&["scan", "/definitely/not/here"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(mediafp(&["scan"]).status.code(), Some(2));
    assert_eq!(mediafp(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic_and_timestamps_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture_corpus(dir.path());
    let a = mediafp(&["scan", "--format", "json", "--chains", p(dir.path())]);
    let b = mediafp(&["scan", "--format", "json", "--chains", p(dir.path())]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("modified_unix"));
    let paths: Vec<String> = json(&a)["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["path"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = paths.clone();
    sorted.sort();
    assert_eq!(paths, sorted);

    let t = mediafp(&["scan", "--format", "json", "--timestamps", p(dir.path())]);
    assert!(json(&t)["reports"][0]["modified_unix"].is_u64());
}

#[test]
fn chains_are_opt_in_and_listed_in_text() {
    let dir = tempfile::tempdir().unwrap();
    write_video(dir.path(), "fwd", &facebook_messenger_android_chain());
    let plain = mediafp(&["scan", "--format", "json", p(dir.path())]);
    assert_eq!(json(&plain)["reports"][0]["chains"], serde_json::json!([]));

    let out = mediafp(&["scan", "--chains", p(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Narrowed"));
    let chains: Vec<_> = text.lines().filter(|l| l.contains("chain: Facebook Messenger ->")).collect();
    assert_eq!(chains.len(), 8, "{text}");
}

#[test]
fn kb_validate_shipped_and_damaged() {
    let out = mediafp(&["kb", "validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let dir = tempfile::tempdir().unwrap();
    write_kb(dir.path(), |name, text| {
        if name != "table7.kb" {
            return text.to_string();
        }
        let start = text.find("[record t7-discord-default]").unwrap();
        let end = start + text[start..].find("\n\n").unwrap() + 2;
        format!("{}{}", &text[..start], &text[end..])
    });
    let out = mediafp(&["kb", "validate", "--kb", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table7"));

    let out = mediafp(&["kb", "validate", "--kb", "/no/such/kb"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kb_list_filters() {
    let out = mediafp(&["kb", "list", "--app", "Telegram", "--os", "ios", "--kind", "video"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<_> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.contains("\tvideo\tTelegram\tiOS\t")));
}

#[test]
fn selftest_passes_on_shipped_kb() {
    let out = mediafp(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("100 cases, 0 failures"));
}

#[test]
fn selftest_names_a_corrupted_record() {
    let dir = tempfile::tempdir().unwrap();
    write_kb(dir.path(), |name, text| {
        if name == "table7.kb" {
            text.replace("resolutions = 848x464, 464x848", "resolutions = 848x70000")
        } else {
            text.to_string()
        }
    });
    let out = mediafp(&["selftest", "--kb", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL t7-telegram-480p"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("FAIL")).count(), 1);
}

#[test]
fn selftest_on_empty_kb_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.kb");
    std::fs::write(&empty, "").unwrap();
    let out = mediafp(&["selftest", "--kb", p(&empty)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 cases"));

    let out = Command::new(env!("CARGO_BIN_EXE_mediafp"))
        .args(["kb", "list"])
        .env("MEDIAFP_KB", &empty)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}
