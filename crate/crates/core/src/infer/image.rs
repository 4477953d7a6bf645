use crate::attrs::{Extension, ImageAttributes};
use crate::kb::{Constraints, FingerprintRecord, KnowledgeBase, OriginalAttributes};

use super::{finish, Candidate, Verdict};

/// Narrow resolution-colliding image records by file size.
///
/// Applies only when there are at least two candidates and one of them
/// carries a size band. Banded candidates whose band misses `byte_size` are
/// dropped; unbanded ones are kept. When no band contains the size at all
/// the input is returned unchanged, since the bands are approximate.
pub fn disambiguate_by_size(candidates: Vec<&FingerprintRecord>, byte_size: u64) -> Vec<&FingerprintRecord> {
    let band = |r: &FingerprintRecord| r.image_constraints().and_then(|c| c.size_band);
    if candidates.len() < 2 || !candidates.iter().any(|r| band(r).is_some()) {
        return candidates;
    }
    if !candidates.iter().any(|r| band(r).is_some_and(|b| b.contains(byte_size))) {
        return candidates;
    }
    candidates
        .into_iter()
        .filter(|r| band(r).is_none_or(|b| b.contains(byte_size)))
        .collect()
}

/// Image records whose resolution set contains the query within tolerance,
/// before any size disambiguation.
pub(crate) fn resolution_candidates<'a>(attrs: &ImageAttributes, kb: &'a KnowledgeBase) -> Vec<&'a FingerprintRecord> {
    kb.records
        .iter()
        .filter(|r| match &r.constraints {
            Constraints::Image(c) => r.distinguishable && c.matches_resolution(attrs.resolution()),
            _ => false,
        })
        .collect()
}

pub fn match_image(attrs: &ImageAttributes, kb: &KnowledgeBase) -> Verdict {
    let before = resolution_candidates(attrs, kb);
    let before_len = before.len();
    let kept = disambiguate_by_size(before, attrs.byte_size);
    let size_used = kept.len() < before_len;

    let candidates = kept
        .into_iter()
        .map(|r| {
            let banded = r
                .image_constraints()
                .and_then(|c| c.size_band)
                .is_some_and(|b| b.contains(attrs.byte_size));
            let mut fields = vec!["resolution"];
            if size_used && banded {
                fields.push("byte_size");
            }
            let mut c = Candidate::from_record(r, fields);
            c.used_size_band = size_used && banded;
            c
        })
        .collect();

    // Originals are compared as printed, within the same pixel tolerance.
    let tol = crate::kb::DEFAULT_TOLERANCE;
    let unchanged: Vec<_> = kb
        .originals
        .iter()
        .filter(|o| matches!(&o.attributes, OriginalAttributes::Image(a) if a.resolution().within(attrs.resolution(), tol)))
        .collect();
    let original_profile = unchanged
        .iter()
        .find(|_| attrs.extension == Extension::Jpg)
        .map(|o| o.profile_id.clone());
    let placeholders = kb
        .records
        .iter()
        .filter(|r| !r.distinguishable && r.media_kind == crate::attrs::MediaKind::Image)
        .filter(|r| unchanged.iter().any(|o| o.os.overlaps(r.os)))
        .map(|r| r.record_id.clone())
        .collect();

    finish(candidates, Vec::new(), original_profile, placeholders)
}
