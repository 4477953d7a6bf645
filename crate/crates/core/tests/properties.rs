use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use mediafp::bmff::{classify_format_profile, extract_video_attributes, render_codec_id, AvcProfile, AvcSignal, FourCC, FtypInfo};
use mediafp::infer::{disambiguate_by_size, match_image, match_video, match_video_single, video_record_fields};
use mediafp::jpeg::extract_image_attributes;
use mediafp::kb::{Constraints, KnowledgeBase, ResolutionSet};
use mediafp::oracle::{apply_record, generate_corpus, original_for, synthesize, synthesize_container, synthetic_file_name, Transformed};
use mediafp::{Extension, FormatProfile, ImageAttributes, Marker, MediaAttributes, Resolution, VideoAttributes};

fn kb() -> &'static KnowledgeBase {
    static KB: OnceLock<KnowledgeBase> = OnceLock::new();
    KB.get_or_init(|| KnowledgeBase::builtin().unwrap())
}

fn brand() -> impl Strategy<Value = FourCC> {
    prop_oneof![
        Just(FourCC(*b"isom")),
        Just(FourCC(*b"mp42")),
        Just(FourCC(*b"mp41")),
        Just(FourCC(*b"qt  ")),
        Just(FourCC(*b"avc1")),
        "[a-z0-9]{4}".prop_map(|s| FourCC(s.as_bytes().try_into().unwrap())),
    ]
}

fn avc_signal() -> impl Strategy<Value = AvcSignal> {
    let profile = prop_oneof![Just(AvcProfile::Baseline), Just(AvcProfile::Main), Just(AvcProfile::High)];
    (profile, 10u8..=52, any::<bool>()).prop_map(|(profile, level_idc, suffix)| {
        let suffix = suffix && profile == AvcProfile::Main && level_idc != 11;
        AvcSignal {
            profile,
            level_idc,
            constraint_suffix: suffix.then(|| "@Main".to_string()),
        }
    })
}

fn extension() -> impl Strategy<Value = Extension> {
    prop_oneof![Just(Extension::Mp4), Just(Extension::Mov), Just(Extension::Jpg), Just(Extension::Other)]
}

/// Attribute vectors the synthesizer accepts: codec id and format profile
/// agree, dimensions fit the sample entry, sizes leave room for padding.
fn consistent_video() -> impl Strategy<Value = VideoAttributes> {
    (
        extension(),
        brand(),
        prop::collection::vec(brand(), 0..4),
        avc_signal(),
        1u32..=65535,
        1u32..=65535,
        proptest::option::of("[A-Za-z][A-Za-z0-9. ]{0,30}[A-Za-z0-9]"),
        prop::collection::btree_set(prop_oneof![
            Just(Marker::MovieName),
            Just(Marker::RecordedDate),
            Just(Marker::Copyright),
            Just(Marker::MovieMore),
        ], 0..4),
        0u64..200_000,
    )
        .prop_map(|(ext, major, compat, signal, width, length, encoder, markers, extra)| {
            let info = FtypInfo {
                major_brand: major,
                minor_version: 0,
                compatible_brands: compat,
            };
            VideoAttributes {
                extension: ext,
                format_profile: classify_format_profile(&info).unwrap_or(FormatProfile::Other),
                codec_id: render_codec_id(&info),
                video_format_profile: signal.to_string(),
                width,
                length,
                encoder,
                markers,
                byte_size: 8192 + extra,
            }
        })
}

/// Mix-and-match of values that appear somewhere in the knowledge base,
/// so that queries land near real records.
fn kb_flavoured_video() -> impl Strategy<Value = VideoAttributes> {
    let mut codecs = BTreeSet::new();
    let mut vfps = BTreeSet::new();
    let mut res = BTreeSet::new();
    let mut encs = BTreeSet::new();
    for r in &kb().records {
        if let Constraints::Video(c) = &r.constraints {
            codecs.extend(c.codec_ids.iter().cloned());
            vfps.extend(c.video_format_profiles.iter().cloned());
            if let ResolutionSet::Exact(v) = &c.resolutions {
                res.extend(v.iter().copied());
            }
            if let mediafp::kb::EncoderRule::OneOf(v) = &c.encoders {
                encs.extend(v.iter().cloned());
            }
        }
    }
    let codecs: Vec<_> = codecs.into_iter().collect();
    let vfps: Vec<_> = vfps.into_iter().collect();
    let res: Vec<_> = res.into_iter().collect();
    let encs: Vec<_> = encs.into_iter().collect();
    (
        extension(),
        prop_oneof![Just(FormatProfile::BaseMedia), Just(FormatProfile::BaseMediaV2), Just(FormatProfile::QuickTime)],
        prop::sample::select(codecs),
        prop::sample::select(vfps),
        prop::sample::select(res),
        proptest::option::of(prop::sample::select(encs)),
        prop::collection::btree_set(
            prop_oneof![Just(Marker::MovieName), Just(Marker::RecordedDate), Just(Marker::Copyright), Just(Marker::MovieMore)],
            0..3,
        ),
    )
        .prop_map(|(extension, format_profile, codec_id, video_format_profile, r, encoder, markers)| VideoAttributes {
            extension,
            format_profile,
            codec_id,
            video_format_profile,
            width: r.width,
            length: r.length,
            encoder,
            markers,
            byte_size: 4096,
        })
}

fn image_resolutions() -> Vec<Resolution> {
    let mut out = BTreeSet::new();
    for r in &kb().records {
        if let Some(c) = r.image_constraints() {
            out.extend(c.resolutions.iter().copied());
        }
    }
    out.into_iter().collect()
}

fn near_image() -> impl Strategy<Value = ImageAttributes> {
    (prop::sample::select(image_resolutions()), -15i64..=15, -15i64..=15, 1u64..1_000_000).prop_map(|(r, dw, dl, size)| {
        ImageAttributes {
            width: (r.width as i64 + dw) as u32,
            length: (r.length as i64 + dl) as u32,
            byte_size: size,
            extension: Extension::Jpg,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn synthesized_containers_read_back_exactly(v in consistent_video()) {
        let bytes = synthesize_container(&v).unwrap();
        prop_assert_eq!(bytes.len() as u64, v.byte_size);
        let back = extract_video_attributes(&bytes, synthetic_file_name(v.extension)).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn extraction_is_deterministic(v in consistent_video()) {
        let bytes = synthesize_container(&v).unwrap();
        let a = extract_video_attributes(&bytes, "x.mp4");
        let b = extract_video_attributes(&bytes, "x.mp4");
        prop_assert_eq!(a, b);
    }

    #[test]
    fn video_candidates_satisfy_their_records(v in kb_flavoured_video()) {
        let kb = kb();
        let verdict = match_video(&v, kb);
        for c in &verdict.candidates {
            let r = kb.record(&c.record_id).unwrap();
            prop_assert!(video_record_fields(r.video_constraints().unwrap(), &v, kb.settings).is_some(), "{}", c.record_id);
        }
        for h in &verdict.chain_hypotheses {
            let r = kb.record(&h.record_id).unwrap();
            prop_assert!(video_record_fields(r.video_constraints().unwrap(), &v, kb.settings).is_some(), "{}", h.record_id);
        }
        // The single-hop matcher is the chain-free part of the full one.
        prop_assert_eq!(match_video_single(&v, kb).candidates, verdict.candidates);
    }

    #[test]
    fn image_candidates_satisfy_their_records(q in near_image()) {
        let kb = kb();
        for c in match_image(&q, kb).candidates {
            let ic = kb.record(&c.record_id).unwrap().image_constraints().unwrap().clone();
            prop_assert!(ic.matches_resolution(q.resolution()));
            if c.used_size_band {
                prop_assert!(ic.size_band.unwrap().contains(q.byte_size));
            }
        }
    }

    #[test]
    fn shrinking_tolerance_never_adds_candidates(q in near_image(), small in 0u32..10, extra in 0u32..10) {
        // A size outside every band keeps size narrowing out of the way;
        // otherwise a wider net can pull in a banded rival that evicts one.
        let mut q = q;
        q.byte_size = 5_000_000;
        let with_tolerance = |t: u32| {
            let mut kb = kb().clone();
            for r in &mut kb.records {
                if let Constraints::Image(c) = &mut r.constraints {
                    c.tolerance = t;
                }
            }
            match_image(&q, &kb).candidates.into_iter().map(|c| c.record_id).collect::<BTreeSet<_>>()
        };
        let narrow = with_tolerance(small);
        let wide = with_tolerance(small + extra);
        prop_assert!(narrow.is_subset(&wide));
    }

    #[test]
    fn swapping_orientation_keeps_symmetric_candidates(q in near_image()) {
        let kb = kb();
        // Only records that print both orientations are expected to agree,
        // and sizes outside every band keep size narrowing out of the way.
        let symmetric = |id: &str| {
            let c = kb.record(id).unwrap().image_constraints().unwrap();
            c.resolutions.iter().all(|r| c.resolutions.contains(&r.swapped()))
        };
        let triples = |q: &ImageAttributes| {
            match_image(q, kb)
                .candidates
                .into_iter()
                .filter(|c| symmetric(&c.record_id))
                .map(|c| (c.app, c.os, c.quality))
                .collect::<BTreeSet<_>>()
        };
        let mut a = q.clone();
        a.byte_size = 5_000_000;
        let mut b = a.clone();
        std::mem::swap(&mut b.width, &mut b.length);
        prop_assert_eq!(triples(&a), triples(&b));
    }

    #[test]
    fn size_narrowing_only_removes(ids in prop::collection::vec(0usize..1000, 0..6), size in 0u64..1_000_000) {
        let kb = kb();
        let images: Vec<_> = kb.records.iter().filter(|r| r.image_constraints().is_some()).collect();
        let input: Vec<_> = ids.iter().map(|i| images[i % images.len()]).collect();
        let out = disambiguate_by_size(input.clone(), size);
        prop_assert!(out.len() <= input.len());
        prop_assert_eq!(out.is_empty(), input.is_empty());
        prop_assert!(out.iter().all(|r| input.iter().any(|i| std::ptr::eq(*i, *r))));
    }

    #[test]
    fn mutated_containers_only_produce_errors(seed in 0usize..100, flips in prop::collection::vec((any::<usize>(), any::<u8>()), 1..8), cut in any::<usize>()) {
        let corpus = generate_corpus(kb());
        let mut bytes = synthesize(&corpus[seed % corpus.len()].attributes).unwrap();
        for (pos, val) in flips {
            let n = bytes.len();
            bytes[pos % n] = val;
        }
        bytes.truncate(cut % (bytes.len() + 1));
        let _ = extract_video_attributes(&bytes, "x.mp4");
        let _ = extract_image_attributes(&bytes);
    }

    #[test]
    fn random_bytes_only_produce_errors(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        let _ = extract_video_attributes(&bytes, "x.mp4");
        let _ = extract_image_attributes(&bytes);
    }
}

#[test]
fn every_transform_satisfies_its_record() {
    let kb = kb();
    for r in kb.records.iter().filter(|r| r.distinguishable) {
        let original = original_for(r, kb).unwrap();
        let Transformed::Alternatives(alts) = apply_record(&original, r).unwrap() else {
            panic!("{} produced no alternatives", r.record_id);
        };
        assert!(!alts.is_empty(), "{}", r.record_id);
        for alt in alts {
            match (&alt.attributes, &r.constraints) {
                (MediaAttributes::Video(v), Constraints::Video(c)) => {
                    assert!(video_record_fields(c, v, kb.settings).is_some(), "{}: {v:?}", r.record_id);
                }
                (MediaAttributes::Image(i), Constraints::Image(c)) => {
                    assert!(c.matches_resolution(i.resolution()), "{}", r.record_id);
                    assert!(c.size_band.is_none_or(|b| b.contains(i.byte_size)), "{}", r.record_id);
                }
                _ => panic!("{} changed media kind", r.record_id),
            }
        }
    }
}

#[test]
fn corpus_labels_are_recovered() {
    let kb = kb();
    for entry in generate_corpus(kb) {
        let bytes = synthesize(&entry.attributes).unwrap();
        let r = kb.record(&entry.label).unwrap();
        match &entry.attributes {
            MediaAttributes::Video(v) => {
                let back = extract_video_attributes(&bytes, synthetic_file_name(v.extension)).unwrap();
                let verdict = match_video(&back, kb);
                assert!(mediafp::oracle::verdict_contains(&verdict, r), "{}", entry.label);
            }
            MediaAttributes::Image(i) => {
                let back = extract_image_attributes(&bytes).unwrap();
                assert_eq!(&back, i);
                assert!(mediafp::oracle::verdict_contains(&match_image(&back, kb), r), "{}", entry.label);
            }
        }
    }
}
