use crate::attrs::{MediaKind, VideoAttributes};
use crate::kb::{
    Constraints, EncoderRule, FingerprintRecord, Hop, KbSettings, KnowledgeBase, OriginalAttributes, ResolutionSet,
    VideoConstraints,
};

use super::{finish, Candidate, ChainHypothesis, Verdict};

/// Drop a trailing constraint suffix such as the second `@Main` in
/// `Main@L4@Main`.
fn without_suffix(profile: &str) -> &str {
    match profile.match_indices('@').nth(1) {
        Some((i, _)) => &profile[..i],
        None => profile,
    }
}

/// `Lavf58.20.100` -> `Lavf58.20`.
fn encoder_prefix(encoder: &str) -> &str {
    match encoder.match_indices('.').nth(1) {
        Some((i, _)) => &encoder[..i],
        None => encoder,
    }
}

/// Evaluate one record's video constraints. Returns the names of the fields
/// that positively matched, or `None` when any populated constraint fails.
/// A record that constrains nothing never matches.
pub fn video_record_fields(
    c: &VideoConstraints,
    attrs: &VideoAttributes,
    settings: KbSettings,
) -> Option<Vec<&'static str>> {
    let mut fields = Vec::new();
    if !c.extensions.is_empty() {
        c.extensions.contains(&attrs.extension).then_some(())?;
        fields.push("extension");
    }
    if !c.format_profiles.is_empty() {
        c.format_profiles.contains(&attrs.format_profile).then_some(())?;
        fields.push("format_profile");
    }
    if !c.codec_ids.is_empty() {
        c.codec_ids.contains(&attrs.codec_id).then_some(())?;
        fields.push("codec_id");
    }
    if !c.video_format_profiles.is_empty() {
        let hit = c.video_format_profiles.iter().any(|p| {
            if c.ignore_profile_suffix {
                without_suffix(p) == without_suffix(&attrs.video_format_profile)
            } else {
                *p == attrs.video_format_profile
            }
        });
        hit.then_some(())?;
        fields.push("video_format_profile");
    }
    if let ResolutionSet::Exact(pairs) = &c.resolutions {
        pairs.contains(&attrs.resolution()).then_some(())?;
        fields.push("resolution");
    }
    match (&c.encoders, &attrs.encoder) {
        (EncoderRule::Any, _) => {}
        (EncoderRule::Absent, None) => fields.push("encoder"),
        (EncoderRule::Absent, Some(_)) => return None,
        (EncoderRule::OneOf(_), None) => return None,
        (EncoderRule::OneOf(list), Some(e)) => {
            let hit = list.iter().any(|want| {
                if settings.encoder_prefix_match {
                    encoder_prefix(want) == encoder_prefix(e)
                } else {
                    want == e
                }
            });
            hit.then_some(())?;
            fields.push("encoder");
        }
    }
    if !c.required_markers.iter().all(|m| attrs.markers.contains(m)) {
        return None;
    }
    if c.forbidden_markers.iter().any(|m| attrs.markers.contains(m)) {
        return None;
    }
    let marker_evidence = c
        .required_markers
        .iter()
        .chain(&c.expected_markers)
        .any(|m| attrs.markers.contains(m));
    if marker_evidence {
        fields.push("markers");
    }
    (!fields.is_empty()).then_some(fields)
}

/// Matching records of one hop kind, ranked by matched-field count with
/// file order breaking ties.
fn ranked<'a>(
    attrs: &VideoAttributes,
    kb: &'a KnowledgeBase,
    hop: Hop,
) -> Vec<(&'a FingerprintRecord, Vec<&'static str>)> {
    let mut hits: Vec<_> = kb
        .records
        .iter()
        .filter(|r| r.distinguishable && r.hop == hop)
        .filter_map(|r| match &r.constraints {
            Constraints::Video(c) => video_record_fields(c, attrs, kb.settings).map(|f| (r, f)),
            _ => None,
        })
        .collect();
    // Stable sort keeps file order among equals.
    hits.sort_by_key(|(_, f)| std::cmp::Reverse(f.len()));
    hits
}

/// Every chain record consistent with the attributes. Chain combinations
/// whose result was overwritten by the second messenger are not records and
/// so never appear here.
pub fn infer_chain(attrs: &VideoAttributes, kb: &KnowledgeBase) -> Vec<ChainHypothesis> {
    ranked(attrs, kb, Hop::Chain)
        .into_iter()
        .map(|(r, fields)| ChainHypothesis {
            record_id: r.record_id.clone(),
            nth_app: r.nth_app.clone().unwrap_or_default(),
            nplus1_app: r.app.clone(),
            os: r.os,
            quality: r.quality.clone(),
            evidence_fields: fields,
        })
        .collect()
}

/// Single-hop and chain matching combined.
pub fn match_video(attrs: &VideoAttributes, kb: &KnowledgeBase) -> Verdict {
    verdict(attrs, kb, true)
}

/// Single-hop matching only; chain hypotheses stay empty.
pub fn match_video_single(attrs: &VideoAttributes, kb: &KnowledgeBase) -> Verdict {
    verdict(attrs, kb, false)
}

fn verdict(attrs: &VideoAttributes, kb: &KnowledgeBase, chains: bool) -> Verdict {
    let candidates = ranked(attrs, kb, Hop::Single)
        .into_iter()
        .map(|(r, f)| Candidate::from_record(r, f))
        .collect();
    let chain_hypotheses = if chains { infer_chain(attrs, kb) } else { Vec::new() };

    let originals: Vec<_> = kb
        .originals
        .iter()
        .filter_map(|o| match &o.attributes {
            OriginalAttributes::Video(v) => Some((o, v)),
            _ => None,
        })
        .collect();
    let original_profile = originals
        .iter()
        .find(|(_, v)| same_tracked_fields(v, attrs) && v.extension == attrs.extension)
        .map(|(o, _)| o.profile_id.clone());
    let placeholders = kb
        .records
        .iter()
        .filter(|r| !r.distinguishable && r.media_kind == MediaKind::Video)
        .filter(|r| {
            originals
                .iter()
                .any(|(o, v)| o.os.overlaps(r.os) && same_tracked_fields(v, attrs))
        })
        .map(|r| r.record_id.clone())
        .collect();

    finish(candidates, chain_hypotheses, original_profile, placeholders)
}

/// Equal on everything except extension and byte size.
fn same_tracked_fields(a: &VideoAttributes, b: &VideoAttributes) -> bool {
    a.format_profile == b.format_profile
        && a.codec_id == b.codec_id
        && a.video_format_profile == b.video_format_profile
        && a.resolution() == b.resolution()
        && a.encoder == b.encoder
        && a.markers == b.markers
}
