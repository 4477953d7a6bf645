//! Line-oriented knowledge-base file format.
//!
//! ```text
//! # full-line comment
//! [manifest]
//! table7 = 20
//! table7.distinguishable = 20
//! table7.Telegram = 5
//!
//! [record t7-telegram-480p]
//! table = 7
//! media = video
//! app = Telegram
//! os = iOS
//! quality = 480p
//! hop = single
//! extensions = MOV
//! format_profiles = BaseMediaV2
//! codec_ids = "mp42 (isom/mp41/mp42)"
//! video_format_profiles = "High@L3.1"
//! resolutions = 848x464, 464x848
//! encoders = none
//! ```
//!
//! Besides `[record]` there are `[original]` blocks for camera originals,
//! `[overwritten]` blocks for chain combinations that leave only the later
//! messenger's footprint, and a `[settings]` block.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use super::*;
use crate::attrs::{Extension, FormatProfile, ImageAttributes, Marker, MediaKind, Resolution, VideoAttributes};

/// Parse a single knowledge-base text and verify its manifest.
pub fn load_kb(text: &str) -> Result<KnowledgeBase, KbError> {
    let mut b = KbBuilder::new();
    b.add_source("<input>", text)?;
    b.finish()
}

/// Accumulates one or more sources, then checks ids and the manifest.
#[derive(Debug, Default)]
pub struct KbBuilder {
    kb: KnowledgeBase,
    settings_seen: BTreeSet<String>,
}

impl KbBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_source(&mut self, source_name: &str, text: &str) -> Result<(), KbError> {
        for block in split_blocks(source_name, text)? {
            self.add_block(source_name, block)?;
        }
        Ok(())
    }

    fn add_block(&mut self, src: &str, block: Block) -> Result<(), KbError> {
        let mut f = Fields::new(src, &block)?;
        match &block.kind {
            BlockKind::Record(id) => {
                let r = parse_record(&mut f, id.clone())?;
                f.finish(&format!("{} record", r.media_kind))?;
                self.kb.records.push(r);
            }
            BlockKind::Original(id) => {
                let o = parse_original(&mut f, id.clone())?;
                f.finish("original")?;
                self.kb.originals.push(o);
            }
            BlockKind::Overwritten(id) => {
                let o = OverwrittenChain {
                    entry_id: id.clone(),
                    table: f.parse_required("table")?,
                    nth_app: f.string_required("nth_app")?,
                    app: f.string_required("app")?,
                    os: f.parse_required("os")?,
                };
                f.finish("overwritten")?;
                self.kb.overwritten.push(o);
            }
            BlockKind::Manifest => {
                for e in &block.entries {
                    if manifest_table(&e.key).is_none() {
                        return Err(schema(src, e.line, format!("manifest key `{}` must start with tableN", e.key)));
                    }
                    let n = e.value.parse::<usize>().map_err(|_| {
                        schema(src, e.line, format!("manifest count `{}` is not a number", e.value))
                    })?;
                    if self.kb.manifest.insert(e.key.clone(), n).is_some() {
                        return Err(schema(src, e.line, format!("manifest key `{}` declared twice", e.key)));
                    }
                }
            }
            BlockKind::Settings => {
                for e in &block.entries {
                    if !self.settings_seen.insert(e.key.clone()) {
                        return Err(schema(src, e.line, format!("setting `{}` declared twice", e.key)));
                    }
                    match e.key.as_str() {
                        "encoder_prefix_match" => {
                            self.kb.settings.encoder_prefix_match = parse_bool(&e.value)
                                .map_err(|m| schema(src, e.line, m))?;
                        }
                        other => return Err(schema(src, e.line, format!("unknown setting `{other}`"))),
                    }
                }
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<KnowledgeBase, KbError> {
        let kb = self.kb;
        let mut ids = HashSet::new();
        let all_ids = kb
            .records
            .iter()
            .map(|r| &r.record_id)
            .chain(kb.originals.iter().map(|o| &o.profile_id))
            .chain(kb.overwritten.iter().map(|o| &o.entry_id));
        for id in all_ids {
            if !ids.insert(id) {
                return Err(KbError::Schema {
                    source_name: "<merged>".into(),
                    line: 0,
                    message: format!("duplicate id `{id}`"),
                });
            }
        }
        check_manifest(&kb)?;
        Ok(kb)
    }
}

#[derive(Debug, Default)]
struct TableCounts {
    total: usize,
    distinguishable: usize,
    per_app: BTreeMap<String, usize>,
}

fn check_manifest(kb: &KnowledgeBase) -> Result<(), KbError> {
    let mut found: BTreeMap<u32, TableCounts> = BTreeMap::new();
    for r in &kb.records {
        let c = found.entry(r.table).or_default();
        c.total += 1;
        c.distinguishable += r.distinguishable as usize;
        *c.per_app.entry(r.app.clone()).or_default() += 1;
    }
    for o in &kb.overwritten {
        let c = found.entry(o.table).or_default();
        c.total += 1;
        *c.per_app.entry(o.app.clone()).or_default() += 1;
    }
    for o in &kb.originals {
        found.entry(o.table).or_default().total += 1;
    }

    for table in found.keys() {
        if !kb.manifest.contains_key(&format!("table{table}")) {
            return Err(KbError::ManifestMismatch(format!(
                "table{table} has entries but no declared count"
            )));
        }
    }
    let empty = TableCounts::default();
    for (key, &declared) in &kb.manifest {
        let table = manifest_table(key).expect("validated at parse time");
        let counts = found.get(&table).unwrap_or(&empty);
        let actual = match key.split_once('.') {
            None => counts.total,
            Some((_, "distinguishable")) => counts.distinguishable,
            Some((_, app)) => counts.per_app.get(app).copied().unwrap_or(0),
        };
        if actual != declared {
            return Err(KbError::ManifestMismatch(format!(
                "{key}: declared {declared}, found {actual}"
            )));
        }
    }
    Ok(())
}

fn schema(src: &str, line: usize, message: impl Into<String>) -> KbError {
    KbError::Schema {
        source_name: src.to_string(),
        line,
        message: message.into(),
    }
}

#[derive(Debug)]
enum BlockKind {
    Record(String),
    Original(String),
    Overwritten(String),
    Manifest,
    Settings,
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug)]
struct Block {
    kind: BlockKind,
    line: usize,
    entries: Vec<Entry>,
}

fn split_blocks(src: &str, text: &str) -> Result<Vec<Block>, KbError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| schema(src, line_no, "unterminated block header"))?
                .trim();
            let (word, id) = match header.split_once(char::is_whitespace) {
                Some((w, id)) => (w, Some(id.trim())),
                None => (header, None),
            };
            let need_id = |id: Option<&str>| -> Result<String, KbError> {
                match id {
                    Some(id) if !id.is_empty() && !id.contains(char::is_whitespace) => Ok(id.to_string()),
                    _ => Err(schema(src, line_no, format!("`[{word}]` needs a single-word id"))),
                }
            };
            let kind = match word {
                "record" => BlockKind::Record(need_id(id)?),
                "original" => BlockKind::Original(need_id(id)?),
                "overwritten" => BlockKind::Overwritten(need_id(id)?),
                "manifest" | "settings" if id.is_some() => {
                    return Err(schema(src, line_no, format!("`[{word}]` takes no id")))
                }
                "manifest" => BlockKind::Manifest,
                "settings" => BlockKind::Settings,
                other => return Err(schema(src, line_no, format!("unknown block type `{other}`"))),
            };
            blocks.push(Block {
                kind,
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| schema(src, line_no, "expected `key = value`"))?;
        let block = blocks
            .last_mut()
            .ok_or_else(|| schema(src, line_no, "entry outside of any block"))?;
        block.entries.push(Entry {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            line: line_no,
        });
    }
    Ok(blocks)
}

/// One list item, remembering whether it was quoted.
#[derive(Debug, PartialEq, Eq)]
struct Token {
    text: String,
    quoted: bool,
}

fn split_list(value: &str) -> Result<Vec<Token>, String> {
    let mut items = Vec::new();
    let mut current = String::new();
    let mut in_quote = false;
    for c in value.chars() {
        match c {
            '"' => {
                in_quote = !in_quote;
                current.push(c);
            }
            ',' if !in_quote => items.push(std::mem::take(&mut current)),
            _ => current.push(c),
        }
    }
    if in_quote {
        return Err("unterminated quote".into());
    }
    items.push(current);
    items
        .into_iter()
        .map(|item| {
            let item = item.trim();
            if item.is_empty() {
                return Err("empty list item".to_string());
            }
            match item.strip_prefix('"') {
                Some(rest) => {
                    let inner = rest
                        .strip_suffix('"')
                        .filter(|s| !s.contains('"'))
                        .ok_or_else(|| format!("malformed quoted string {item}"))?;
                    Ok(Token {
                        text: inner.to_string(),
                        quoted: true,
                    })
                }
                None if item.contains('"') => Err(format!("stray quote in {item}")),
                None => Ok(Token {
                    text: item.to_string(),
                    quoted: false,
                }),
            }
        })
        .collect()
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

/// `100KB +- 10KB`. Units are decimal (1 KB = 1000 bytes).
fn parse_size_band(s: &str) -> Result<SizeBand, String> {
    let (center, tol) = s
        .split_once("+-")
        .ok_or_else(|| format!("size band `{s}` must look like `100KB +- 10KB`"))?;
    Ok(SizeBand {
        center: parse_bytes(center.trim())?,
        tolerance: parse_bytes(tol.trim())?,
    })
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let upper = s.to_ascii_uppercase();
    let (digits, scale) = if let Some(d) = upper.strip_suffix("MB") {
        (d, 1_000_000)
    } else if let Some(d) = upper.strip_suffix("KB") {
        (d, 1_000)
    } else if let Some(d) = upper.strip_suffix('B') {
        (d, 1)
    } else {
        (upper.as_str(), 1)
    };
    digits
        .trim()
        .parse::<u64>()
        .ok()
        .and_then(|n| n.checked_mul(scale))
        .ok_or_else(|| format!("bad byte count `{s}`"))
}

fn render_bytes(n: u64) -> String {
    if n != 0 && n.is_multiple_of(1_000) {
        format!("{}KB", n / 1_000)
    } else {
        format!("{n}B")
    }
}

/// Key/value view of one block that remembers which keys were consumed.
struct Fields<'a> {
    src: &'a str,
    block_line: usize,
    map: BTreeMap<&'a str, (&'a str, usize)>,
}

impl<'a> Fields<'a> {
    fn new(src: &'a str, block: &'a Block) -> Result<Self, KbError> {
        let mut map = BTreeMap::new();
        for e in &block.entries {
            if map.insert(e.key.as_str(), (e.value.as_str(), e.line)).is_some() {
                return Err(schema(src, e.line, format!("duplicate key `{}`", e.key)));
            }
        }
        Ok(Fields {
            src,
            block_line: block.line,
            map,
        })
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> KbError {
        schema(self.src, line, msg)
    }

    fn take(&mut self, key: &str) -> Option<(&'a str, usize)> {
        self.map.remove(key)
    }

    fn has_any(&self, keys: &[&str]) -> Option<usize> {
        keys.iter().find_map(|k| self.map.get(k).map(|(_, l)| *l))
    }

    fn required(&mut self, key: &str) -> Result<(&'a str, usize), KbError> {
        let line = self.block_line;
        self.take(key).ok_or_else(|| self.err(line, format!("missing key `{key}`")))
    }

    fn string_required(&mut self, key: &str) -> Result<String, KbError> {
        let (v, line) = self.required(key)?;
        self.scalar(v, line)
    }

    fn string_opt(&mut self, key: &str) -> Result<Option<String>, KbError> {
        self.take(key).map(|(v, line)| self.scalar(v, line)).transpose()
    }

    fn scalar(&self, v: &str, line: usize) -> Result<String, KbError> {
        let mut tokens = split_list(v).map_err(|m| self.err(line, m))?;
        if tokens.len() != 1 {
            // Unquoted scalars may legitimately contain commas.
            if !v.contains('"') {
                return Ok(v.to_string());
            }
            return Err(self.err(line, "expected a single value"));
        }
        Ok(tokens.remove(0).text)
    }

    fn parse_required<T: FromStr>(&mut self, key: &str) -> Result<T, KbError>
    where
        T::Err: std::fmt::Display,
    {
        let (v, line) = self.required(key)?;
        v.parse().map_err(|e: T::Err| self.err(line, format!("{key}: {e}")))
    }

    fn parse_opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, KbError>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|e: T::Err| self.err(line, format!("{key}: {e}"))),
        }
    }

    fn bool_opt(&mut self, key: &str) -> Result<Option<bool>, KbError> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => parse_bool(v).map(Some).map_err(|m| self.err(line, format!("{key}: {m}"))),
        }
    }

    /// A comma-separated list of values parsed with `FromStr`.
    fn list<T: FromStr>(&mut self, key: &str) -> Result<Vec<T>, KbError>
    where
        T::Err: std::fmt::Display,
    {
        let Some((v, line)) = self.take(key) else {
            return Ok(Vec::new());
        };
        let tokens = split_list(v).map_err(|m| self.err(line, format!("{key}: {m}")))?;
        tokens
            .into_iter()
            .map(|t| t.text.parse().map_err(|e: T::Err| self.err(line, format!("{key}: {e}"))))
            .collect()
    }

    fn string_list(&mut self, key: &str) -> Result<Option<(Vec<Token>, usize)>, KbError> {
        let Some((v, line)) = self.take(key) else {
            return Ok(None);
        };
        let tokens = split_list(v).map_err(|m| self.err(line, format!("{key}: {m}")))?;
        Ok(Some((tokens, line)))
    }

    fn finish(self, what: &str) -> Result<(), KbError> {
        match self.map.iter().next() {
            Some((key, (_, line))) => Err(self.err(*line, format!("unknown key `{key}` for {what}"))),
            None => Ok(()),
        }
    }
}

const IMAGE_KEYS: [&str; 3] = ["resolutions", "tolerance", "size_band"];
const VIDEO_KEYS: [&str; 10] = [
    "extensions",
    "format_profiles",
    "codec_ids",
    "video_format_profiles",
    "resolutions",
    "encoders",
    "required_markers",
    "forbidden_markers",
    "expected_markers",
    "ignore_profile_suffix",
];

fn parse_record(f: &mut Fields<'_>, record_id: String) -> Result<FingerprintRecord, KbError> {
    let block_line = f.block_line;
    let table = f.parse_required("table")?;
    let media_kind: MediaKind = f.parse_required("media")?;
    let app = f.string_required("app")?;
    let os = f.parse_required("os")?;
    let quality = f.string_required("quality")?;
    let hop = match f.take("hop") {
        None | Some(("single", _)) => Hop::Single,
        Some(("chain", _)) => Hop::Chain,
        Some((other, line)) => return Err(f.err(line, format!("hop: expected single or chain, got `{other}`"))),
    };
    let nth_app = f.string_opt("nth_app")?;
    match (hop, &nth_app) {
        (Hop::Chain, None) => return Err(f.err(block_line, "chain record needs nth_app")),
        (Hop::Single, Some(_)) => return Err(f.err(block_line, "single-hop record must not set nth_app")),
        _ => {}
    }
    let distinguishable = f.bool_opt("distinguishable")?.unwrap_or(true);

    let constraints = if !distinguishable {
        let keys: Vec<&str> = IMAGE_KEYS.iter().chain(VIDEO_KEYS.iter()).copied().collect();
        if let Some(line) = f.has_any(&keys) {
            return Err(f.err(line, "indistinguishable record must not carry constraints"));
        }
        Constraints::None
    } else {
        match media_kind {
            MediaKind::Image => Constraints::Image(parse_image_constraints(f)?),
            MediaKind::Video => Constraints::Video(parse_video_constraints(f)?),
        }
    };

    Ok(FingerprintRecord {
        record_id,
        table,
        media_kind,
        app,
        os,
        quality,
        hop,
        nth_app,
        distinguishable,
        constraints,
    })
}

fn parse_image_constraints(f: &mut Fields<'_>) -> Result<ImageConstraints, KbError> {
    let resolutions = f.list("resolutions")?;
    let tolerance = f.parse_opt("tolerance")?.unwrap_or(DEFAULT_TOLERANCE);
    let size_band = match f.take("size_band") {
        None => None,
        Some((v, line)) => Some(parse_size_band(v).map_err(|m| f.err(line, m))?),
    };
    Ok(ImageConstraints {
        resolutions,
        tolerance,
        size_band,
    })
}

fn parse_video_constraints(f: &mut Fields<'_>) -> Result<VideoConstraints, KbError> {
    let mut c = VideoConstraints {
        extensions: f.list("extensions")?,
        format_profiles: f.list("format_profiles")?,
        required_markers: f.list("required_markers")?,
        forbidden_markers: f.list("forbidden_markers")?,
        expected_markers: f.list("expected_markers")?,
        ignore_profile_suffix: f.bool_opt("ignore_profile_suffix")?.unwrap_or(false),
        ..VideoConstraints::default()
    };
    if let Some((tokens, _)) = f.string_list("codec_ids")? {
        c.codec_ids = tokens.into_iter().map(|t| t.text).collect();
    }
    if let Some((tokens, _)) = f.string_list("video_format_profiles")? {
        c.video_format_profiles = tokens.into_iter().map(|t| t.text).collect();
    }
    if let Some((tokens, line)) = f.string_list("resolutions")? {
        c.resolutions = if tokens.len() == 1 && !tokens[0].quoted && tokens[0].text == "*" {
            ResolutionSet::Any
        } else {
            let pairs = tokens
                .iter()
                .map(|t| t.text.parse::<Resolution>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| f.err(line, format!("resolutions: {e}")))?;
            ResolutionSet::Exact(pairs)
        };
    }
    if let Some((tokens, _)) = f.string_list("encoders")? {
        c.encoders = match tokens.as_slice() {
            [t] if !t.quoted && t.text == "none" => EncoderRule::Absent,
            [t] if !t.quoted && t.text == "*" => EncoderRule::Any,
            _ => EncoderRule::OneOf(tokens.into_iter().map(|t| t.text).collect()),
        };
    }
    Ok(c)
}

fn parse_original(f: &mut Fields<'_>, profile_id: String) -> Result<OriginalProfile, KbError> {
    let table = f.parse_required("table")?;
    let media_kind: MediaKind = f.parse_required("media")?;
    let os = f.parse_required("os")?;
    let resolution: Resolution = f.parse_required("resolution")?;
    let extension: Extension = f.parse_required("extension")?;
    let byte_size: u64 = f.parse_required("byte_size")?;
    let attributes = match media_kind {
        MediaKind::Image => OriginalAttributes::Image(ImageAttributes {
            width: resolution.width,
            length: resolution.length,
            byte_size,
            extension,
        }),
        MediaKind::Video => OriginalAttributes::Video(VideoAttributes {
            extension,
            format_profile: f.parse_required::<FormatProfile>("format_profile")?,
            codec_id: f.string_required("codec_id")?,
            video_format_profile: f.string_required("video_format_profile")?,
            width: resolution.width,
            length: resolution.length,
            encoder: f.string_opt("encoder")?,
            markers: f.list::<Marker>("markers")?.into_iter().collect(),
            byte_size,
        }),
    };
    Ok(OriginalProfile {
        profile_id,
        table,
        os,
        attributes,
    })
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn join_quoted(items: &[String]) -> String {
    items.iter().map(|i| format!("\"{i}\"")).collect::<Vec<_>>().join(", ")
}

/// Serialize a knowledge base in the file format. Loading the output
/// yields an equal knowledge base.
pub fn render_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let w = &mut out;
    if kb.settings != KbSettings::default() {
        let _ = writeln!(w, "[settings]");
        let _ = writeln!(w, "encoder_prefix_match = {}\n", kb.settings.encoder_prefix_match);
    }
    if !kb.manifest.is_empty() {
        let _ = writeln!(w, "[manifest]");
        for (k, v) in &kb.manifest {
            let _ = writeln!(w, "{k} = {v}");
        }
        w.push('\n');
    }
    for o in &kb.originals {
        let _ = writeln!(w, "[original {}]", o.profile_id);
        let _ = writeln!(w, "table = {}", o.table);
        let _ = writeln!(w, "media = {}", o.media_kind());
        let _ = writeln!(w, "os = {}", o.os);
        match &o.attributes {
            OriginalAttributes::Image(a) => {
                let _ = writeln!(w, "resolution = {}", a.resolution());
                let _ = writeln!(w, "extension = {}", a.extension);
                let _ = writeln!(w, "byte_size = {}", a.byte_size);
            }
            OriginalAttributes::Video(a) => {
                let _ = writeln!(w, "resolution = {}", a.resolution());
                let _ = writeln!(w, "extension = {}", a.extension);
                let _ = writeln!(w, "byte_size = {}", a.byte_size);
                let _ = writeln!(w, "format_profile = {}", a.format_profile);
                let _ = writeln!(w, "codec_id = \"{}\"", a.codec_id);
                let _ = writeln!(w, "video_format_profile = \"{}\"", a.video_format_profile);
                if let Some(e) = &a.encoder {
                    let _ = writeln!(w, "encoder = \"{e}\"");
                }
                if !a.markers.is_empty() {
                    let m: Vec<_> = a.markers.iter().collect();
                    let _ = writeln!(w, "markers = {}", join(&m));
                }
            }
        }
        w.push('\n');
    }
    for r in &kb.records {
        render_record(w, r);
    }
    for o in &kb.overwritten {
        let _ = writeln!(w, "[overwritten {}]", o.entry_id);
        let _ = writeln!(w, "table = {}", o.table);
        let _ = writeln!(w, "nth_app = {}", o.nth_app);
        let _ = writeln!(w, "app = {}", o.app);
        let _ = writeln!(w, "os = {}\n", o.os);
    }
    out
}

fn render_record(w: &mut String, r: &FingerprintRecord) {
    let _ = writeln!(w, "[record {}]", r.record_id);
    let _ = writeln!(w, "table = {}", r.table);
    let _ = writeln!(w, "media = {}", r.media_kind);
    let _ = writeln!(w, "app = {}", r.app);
    let _ = writeln!(w, "os = {}", r.os);
    let _ = writeln!(w, "quality = {}", r.quality);
    match (&r.hop, &r.nth_app) {
        (Hop::Chain, Some(nth)) => {
            let _ = writeln!(w, "hop = chain\nnth_app = {nth}");
        }
        _ => {
            let _ = writeln!(w, "hop = single");
        }
    }
    let _ = writeln!(w, "distinguishable = {}", r.distinguishable);
    match &r.constraints {
        Constraints::None => {}
        Constraints::Image(c) => {
            if !c.resolutions.is_empty() {
                let _ = writeln!(w, "resolutions = {}", join(&c.resolutions));
            }
            let _ = writeln!(w, "tolerance = {}", c.tolerance);
            if let Some(b) = c.size_band {
                let _ = writeln!(w, "size_band = {} +- {}", render_bytes(b.center), render_bytes(b.tolerance));
            }
        }
        Constraints::Video(c) => {
            if !c.extensions.is_empty() {
                let _ = writeln!(w, "extensions = {}", join(&c.extensions));
            }
            if !c.format_profiles.is_empty() {
                let _ = writeln!(w, "format_profiles = {}", join(&c.format_profiles));
            }
            if !c.codec_ids.is_empty() {
                let _ = writeln!(w, "codec_ids = {}", join_quoted(&c.codec_ids));
            }
            if !c.video_format_profiles.is_empty() {
                let _ = writeln!(w, "video_format_profiles = {}", join_quoted(&c.video_format_profiles));
            }
            match &c.resolutions {
                ResolutionSet::Any => {
                    let _ = writeln!(w, "resolutions = *");
                }
                ResolutionSet::Exact(rs) => {
                    let _ = writeln!(w, "resolutions = {}", join(rs));
                }
            }
            match &c.encoders {
                EncoderRule::Any => {}
                EncoderRule::Absent => {
                    let _ = writeln!(w, "encoders = none");
                }
                EncoderRule::OneOf(e) => {
                    let _ = writeln!(w, "encoders = {}", join_quoted(e));
                }
            }
            for (key, list) in [
                ("required_markers", &c.required_markers),
                ("forbidden_markers", &c.forbidden_markers),
                ("expected_markers", &c.expected_markers),
            ] {
                if !list.is_empty() {
                    let _ = writeln!(w, "{key} = {}", join(list));
                }
            }
            if c.ignore_profile_suffix {
                let _ = writeln!(w, "ignore_profile_suffix = true");
            }
        }
    }
    w.push('\n');
}
