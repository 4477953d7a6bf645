//! Video attribute extraction from a parsed box tree.

use std::collections::BTreeSet;
use std::io::{Read, Seek};

use super::avc::AvcSignal;
use super::ftyp::{classify_format_profile, read_ftyp, render_codec_id, FtypInfo};
use super::window::read_container_window;
use super::{parse_box_tree, BmffError, BoxNode, BoxTree, FourCC};
use crate::attrs::{Extension, FormatProfile, Marker, VideoAttributes};

/// User-data atom written for [`Marker::MovieMore`] by the synthesizer. Any
/// unrecognized moov-level user-data atom is read back as that marker.
pub const VENDOR_MARKER_ATOM: [u8; 4] = *b"vndr";

const NAME: [u8; 4] = [0xa9, b'n', b'a', b'm'];
const DAY: [u8; 4] = [0xa9, b'd', b'a', b'y'];
const CPY: [u8; 4] = [0xa9, b'c', b'p', b'y'];
const TOO: [u8; 4] = [0xa9, b't', b'o', b'o'];
const ENC: [u8; 4] = [0xa9, b'e', b'n', b'c'];
const SWR: [u8; 4] = [0xa9, b's', b'w', b'r'];

/// Atoms that never count as vendor markers.
const NON_MARKER_ATOMS: [[u8; 4]; 6] = [*b"meta", *b"free", *b"skip", TOO, ENC, SWR];

/// Extract the fingerprint attribute vector from a whole file in memory.
/// `name_hint` supplies the extension; the box contents decide the rest.
pub fn extract_video_attributes(bytes: &[u8], name_hint: &str) -> Result<VideoAttributes, BmffError> {
    let tree = parse_box_tree(bytes)?;
    extract_from_tree(&tree, bytes, name_hint, bytes.len() as u64)
}

/// Like [`extract_video_attributes`], but reads only the container
/// structure, skipping media payloads. `byte_size` is the stream length.
pub fn extract_video_attributes_from_reader<R: Read + Seek>(
    reader: &mut R,
    name_hint: &str,
) -> Result<VideoAttributes, BmffError> {
    let (window, total) = read_container_window(reader)?;
    let tree = parse_box_tree(&window)?;
    extract_from_tree(&tree, &window, name_hint, total)
}

fn extract_from_tree(
    tree: &BoxTree,
    bytes: &[u8],
    name_hint: &str,
    byte_size: u64,
) -> Result<VideoAttributes, BmffError> {
    let ftyp = match read_ftyp(tree, bytes) {
        Ok(info) => info,
        // Legacy QuickTime files carry no ftyp at all.
        Err(BmffError::MissingFtyp) => FtypInfo {
            major_brand: FourCC(*b"qt  "),
            minor_version: 0,
            compatible_brands: Vec::new(),
        },
        Err(e) => return Err(e),
    };
    let format_profile = match classify_format_profile(&ftyp) {
        Ok(p) => p,
        Err(BmffError::UnknownBrand(_)) => FormatProfile::Other,
        Err(e) => return Err(e),
    };
    let codec_id = render_codec_id(&ftyp);

    let moov = tree.find(b"moov").ok_or(BmffError::NoVideoTrack)?;
    let trak = moov
        .children_of(b"trak")
        .find(|t| handler_type(t, bytes) == Some(*b"vide"))
        .ok_or(BmffError::NoVideoTrack)?;
    let track = read_video_track(trak, bytes)?;

    let extension = Extension::from_file_name(name_hint).unwrap_or(match format_profile {
        FormatProfile::QuickTime => Extension::Mov,
        _ => Extension::Mp4,
    });

    Ok(VideoAttributes {
        extension,
        format_profile,
        codec_id,
        video_format_profile: track.signal.to_string(),
        width: track.width,
        length: track.length,
        encoder: find_encoder(moov, bytes),
        markers: find_markers(moov, bytes),
        byte_size,
    })
}

struct VideoTrack {
    signal: AvcSignal,
    width: u32,
    length: u32,
}

fn handler_type(trak: &BoxNode, bytes: &[u8]) -> Option<[u8; 4]> {
    let hdlr = trak.find_path(&[b"mdia", b"hdlr"])?;
    let p = hdlr.payload(bytes);
    p.get(8..12).map(|s| s.try_into().unwrap())
}

fn read_video_track(trak: &BoxNode, bytes: &[u8]) -> Result<VideoTrack, BmffError> {
    let stsd = trak
        .find_path(&[b"mdia", b"minf", b"stbl", b"stsd"])
        .ok_or(BmffError::NoVideoTrack)?;
    let p = stsd.payload(bytes);
    // version/flags, entry_count, then the first sample entry box.
    let entry = p.get(8..).filter(|e| e.len() >= 8).ok_or(BmffError::MalformedBox {
        offset: stsd.offset,
        reason: "stsd has no sample entry",
    })?;
    let entry_size = u32::from_be_bytes(entry[0..4].try_into().unwrap()) as usize;
    let entry_type = FourCC(entry[4..8].try_into().unwrap());
    if entry_size < 8 || entry_size > entry.len() {
        return Err(BmffError::MalformedBox {
            offset: stsd.payload_offset + 8,
            reason: "sample entry size out of range",
        });
    }
    let entry = &entry[8..entry_size];
    if !(entry_type == b"avc1" || entry_type == b"avc3") {
        return Err(BmffError::UnsupportedCodec(entry_type));
    }
    // SampleEntry (8) + VisualSampleEntry fields (70) precede child boxes.
    const VISUAL_HEADER: usize = 78;
    if entry.len() < VISUAL_HEADER {
        return Err(BmffError::MalformedBox {
            offset: stsd.payload_offset + 16,
            reason: "visual sample entry too short",
        });
    }
    let mut width = u16::from_be_bytes([entry[24], entry[25]]) as u32;
    let mut length = u16::from_be_bytes([entry[26], entry[27]]) as u32;

    let child_base = stsd.payload_offset as usize + 16 + VISUAL_HEADER;
    let children = super::parse_sequence(
        bytes,
        child_base,
        stsd.payload_offset as usize + 8 + entry_size,
        super::ParentKind::Plain,
        1,
    )?;
    let avcc = children
        .iter()
        .find(|c| c.box_type == b"avcC")
        .ok_or(BmffError::MissingDecoderConfig)?;
    let signal = AvcSignal::from_avcc(avcc.payload(bytes)).ok_or(BmffError::MalformedBox {
        offset: avcc.offset,
        reason: "invalid AVC decoder configuration",
    })?;

    if width == 0 || length == 0 {
        let (w, l) = track_header_dimensions(trak, bytes).ok_or(BmffError::InvalidDimensions)?;
        width = w;
        length = l;
    }
    if width == 0 || length == 0 {
        return Err(BmffError::InvalidDimensions);
    }
    Ok(VideoTrack {
        signal,
        width,
        length,
    })
}

/// Presentation size from `tkhd`, 16.16 fixed point rounded to pixels.
fn track_header_dimensions(trak: &BoxNode, bytes: &[u8]) -> Option<(u32, u32)> {
    let p = trak.child(b"tkhd")?.payload(bytes);
    let at = match p.first()? {
        0 => 76,
        1 => 88,
        _ => return None,
    };
    let fixed = |o: usize| -> Option<u32> {
        let v = u32::from_be_bytes(p.get(o..o + 4)?.try_into().ok()?);
        Some(((v as u64 + 0x8000) >> 16) as u32)
    };
    Some((fixed(at)?, fixed(at + 4)?))
}

fn user_data(moov: &BoxNode) -> impl Iterator<Item = &BoxNode> {
    moov.children_of(b"udta")
}

fn item_lists(moov: &BoxNode) -> Vec<&BoxNode> {
    let mut out = Vec::new();
    let metas = moov
        .children_of(b"meta")
        .chain(user_data(moov).flat_map(|u| u.children_of(b"meta")));
    for meta in metas {
        out.extend(meta.children_of(b"ilst"));
    }
    out
}

/// Value of an `ilst` item's `data` child.
fn item_text(item: &BoxNode, bytes: &[u8]) -> Option<String> {
    let data = item.child(b"data")?.payload(bytes);
    text(data.get(8..)?)
}

/// QuickTime user-data text atom: 16-bit length, 16-bit language, text.
fn qt_text(atom: &BoxNode, bytes: &[u8]) -> Option<String> {
    let p = atom.payload(bytes);
    if p.len() >= 4 {
        let len = u16::from_be_bytes([p[0], p[1]]) as usize;
        if let Some(t) = p.get(4..4 + len) {
            return text(t);
        }
    }
    text(p)
}

fn text(raw: &[u8]) -> Option<String> {
    let s = String::from_utf8_lossy(raw);
    let s = s.trim_matches(|c: char| c == '\0' || c.is_whitespace());
    (!s.is_empty()).then(|| s.to_string())
}

fn find_encoder(moov: &BoxNode, bytes: &[u8]) -> Option<String> {
    for ilst in item_lists(moov) {
        for item in &ilst.children {
            if item.box_type.0 == TOO || item.box_type.0 == ENC {
                if let Some(t) = item_text(item, bytes) {
                    return Some(t);
                }
            }
        }
    }
    for udta in user_data(moov) {
        for atom in &udta.children {
            if [TOO, ENC, SWR].contains(&atom.box_type.0) {
                if let Some(t) = qt_text(atom, bytes) {
                    return Some(t);
                }
            }
        }
    }
    None
}

fn named_marker(atom: [u8; 4]) -> Option<Marker> {
    match atom {
        NAME => Some(Marker::MovieName),
        DAY => Some(Marker::RecordedDate),
        CPY => Some(Marker::Copyright),
        a if &a == b"cprt" => Some(Marker::Copyright),
        _ => None,
    }
}

fn find_markers(moov: &BoxNode, _bytes: &[u8]) -> BTreeSet<Marker> {
    let mut markers = BTreeSet::new();
    for udta in user_data(moov) {
        for atom in &udta.children {
            let t = atom.box_type.0;
            if let Some(m) = named_marker(t) {
                markers.insert(m);
            } else if !NON_MARKER_ATOMS.contains(&t) {
                markers.insert(Marker::MovieMore);
            }
        }
    }
    for ilst in item_lists(moov) {
        markers.extend(ilst.children.iter().filter_map(|i| named_marker(i.box_type.0)));
    }
    markers
}
