//! ISO Base Media / QuickTime container parsing.
//!
//! [`parse_box_tree`] turns raw bytes into a tree of [`BoxNode`]s that only
//! records offsets; payloads are sliced out of the original buffer on demand.
//! The remaining submodules read the few boxes the fingerprints need.

mod avc;
mod extract;
mod ftyp;
mod window;

use std::fmt;

use thiserror::Error;

pub use avc::{AvcProfile, AvcSignal, MAIN_SUFFIX};
pub use extract::{
    extract_video_attributes, extract_video_attributes_from_reader, VENDOR_MARKER_ATOM,
};
pub use ftyp::{classify_format_profile, read_ftyp, render_codec_id, FtypInfo};
pub use window::read_container_window;

/// Maximum nesting depth followed before a file is rejected.
const MAX_DEPTH: usize = 32;

/// Boxes whose payload is a plain sequence of child boxes.
const CONTAINERS: [&[u8; 4]; 12] = [
    b"moov", b"trak", b"mdia", b"minf", b"stbl", b"udta", b"meta", b"ilst", b"edts", b"dinf",
    b"mvex", b"tref",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BmffError {
    #[error("box `{box_type}` at offset {offset} declares {declared} bytes but only {available} remain")]
    TruncatedFile {
        box_type: FourCC,
        offset: u64,
        declared: u64,
        available: u64,
    },
    #[error("malformed box at offset {offset}: {reason}")]
    MalformedBox { offset: u64, reason: &'static str },
    #[error("no `ftyp` box")]
    MissingFtyp,
    #[error("unrecognized major brand `{0}`")]
    UnknownBrand(FourCC),
    #[error("no video track")]
    NoVideoTrack,
    #[error("video sample entry `{0}` is not AVC")]
    UnsupportedCodec(FourCC),
    #[error("AVC sample entry has no decoder configuration")]
    MissingDecoderConfig,
    #[error("video track has no usable dimensions")]
    InvalidDimensions,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for BmffError {
    fn from(e: std::io::Error) -> Self {
        BmffError::Io(e.to_string())
    }
}

/// Four-character box code, compared byte-exact ("qt  " keeps its spaces).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourCC(pub [u8; 4]);

impl FourCC {
    pub fn from_str_padded(s: &str) -> Option<FourCC> {
        let bytes = s.as_bytes();
        if bytes.is_empty() || bytes.len() > 4 {
            return None;
        }
        let mut out = [b' '; 4];
        out[..bytes.len()].copy_from_slice(bytes);
        Some(FourCC(out))
    }

    /// Printable form with trailing spaces removed.
    pub fn trimmed(&self) -> String {
        self.to_string().trim_end().to_string()
    }
}

impl From<&[u8; 4]> for FourCC {
    fn from(b: &[u8; 4]) -> Self {
        FourCC(*b)
    }
}

impl PartialEq<&[u8; 4]> for FourCC {
    fn eq(&self, other: &&[u8; 4]) -> bool {
        self.0 == **other
    }
}

impl fmt::Display for FourCC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Latin-1 so that the copyright sign in `©nam` renders.
        for &b in &self.0 {
            let c = if b.is_ascii_graphic() || b == b' ' || b >= 0xa0 {
                b as char
            } else {
                '.'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FourCC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FourCC({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxNode {
    pub box_type: FourCC,
    /// Offset of the box header.
    pub offset: u64,
    pub payload_offset: u64,
    pub payload_length: u64,
    pub children: Vec<BoxNode>,
}

impl BoxNode {
    pub fn payload<'a>(&self, bytes: &'a [u8]) -> &'a [u8] {
        let start = self.payload_offset as usize;
        &bytes[start..start + self.payload_length as usize]
    }

    pub fn child(&self, box_type: &[u8; 4]) -> Option<&BoxNode> {
        self.children.iter().find(|c| c.box_type == box_type)
    }

    pub fn children_of<'s>(&'s self, box_type: &'s [u8; 4]) -> impl Iterator<Item = &'s BoxNode> {
        self.children.iter().filter(move |c| c.box_type == box_type)
    }

    /// Follow a path of child types, taking the first match at each level.
    pub fn find_path(&self, path: &[&[u8; 4]]) -> Option<&BoxNode> {
        path.iter().try_fold(self, |node, t| node.child(t))
    }

    /// Depth-first pre-order walk.
    pub fn walk(&self, visit: &mut impl FnMut(&BoxNode, usize)) {
        fn go(n: &BoxNode, depth: usize, visit: &mut impl FnMut(&BoxNode, usize)) {
            visit(n, depth);
            for c in &n.children {
                go(c, depth + 1, visit);
            }
        }
        go(self, 0, visit);
    }
}

/// Root-level boxes in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoxTree {
    pub roots: Vec<BoxNode>,
}

impl BoxTree {
    pub fn find(&self, box_type: &[u8; 4]) -> Option<&BoxNode> {
        self.roots.iter().find(|b| b.box_type == box_type)
    }

    pub fn walk(&self, visit: &mut impl FnMut(&BoxNode, usize)) {
        for r in &self.roots {
            r.walk(visit);
        }
    }
}

/// Parse the whole buffer as a sequence of boxes, recursing into known
/// container types. Unknown boxes become leaves.
pub fn parse_box_tree(bytes: &[u8]) -> Result<BoxTree, BmffError> {
    if bytes.len() < 8 {
        return Err(BmffError::TruncatedFile {
            box_type: FourCC([0; 4]),
            offset: 0,
            declared: 8,
            available: bytes.len() as u64,
        });
    }
    let roots = parse_sequence(bytes, 0, bytes.len(), ParentKind::Root, 0)?;
    Ok(BoxTree { roots })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ParentKind {
    Root,
    Plain,
    /// Children of `ilst` are metadata items, each a container of `data` boxes.
    ItemList,
}

fn parse_sequence(
    bytes: &[u8],
    start: usize,
    end: usize,
    parent: ParentKind,
    depth: usize,
) -> Result<Vec<BoxNode>, BmffError> {
    if depth > MAX_DEPTH {
        return Err(BmffError::MalformedBox {
            offset: start as u64,
            reason: "nesting too deep",
        });
    }
    let mut out = Vec::new();
    let mut pos = start;
    while pos < end {
        let remaining = end - pos;
        if remaining < 8 {
            // Trailing padding inside a container is common (e.g. a 4-byte
            // terminator in QuickTime udta); at root it is an error.
            if parent != ParentKind::Root && bytes[pos..end].iter().all(|&b| b == 0) {
                break;
            }
            return Err(BmffError::MalformedBox {
                offset: pos as u64,
                reason: "fewer than 8 bytes left for a box header",
            });
        }
        let size32 = u32::from_be_bytes(bytes[pos..pos + 4].try_into().unwrap()) as u64;
        let box_type = FourCC(bytes[pos + 4..pos + 8].try_into().unwrap());
        let (header_len, total) = match size32 {
            0 => (8u64, remaining as u64),
            1 => {
                if remaining < 16 {
                    return Err(BmffError::TruncatedFile {
                        box_type,
                        offset: pos as u64,
                        declared: 16,
                        available: remaining as u64,
                    });
                }
                let large = u64::from_be_bytes(bytes[pos + 8..pos + 16].try_into().unwrap());
                if large < 16 {
                    return Err(BmffError::MalformedBox {
                        offset: pos as u64,
                        reason: "extended size smaller than its header",
                    });
                }
                (16, large)
            }
            s if s < 8 => {
                return Err(BmffError::MalformedBox {
                    offset: pos as u64,
                    reason: "declared size smaller than box header",
                })
            }
            s => (8, s),
        };
        if total > remaining as u64 {
            return Err(BmffError::TruncatedFile {
                box_type,
                offset: pos as u64,
                declared: total,
                available: remaining as u64,
            });
        }
        let total = total as usize;
        let payload_start = pos + header_len as usize;
        let payload_end = pos + total;

        let child_kind = if parent == ParentKind::ItemList {
            Some((payload_start, ParentKind::Plain))
        } else if box_type == b"ilst" {
            Some((payload_start, ParentKind::ItemList))
        } else if box_type == b"meta" {
            Some((meta_children_start(bytes, payload_start, payload_end), ParentKind::Plain))
        } else if CONTAINERS.iter().any(|c| box_type == *c) {
            Some((payload_start, ParentKind::Plain))
        } else {
            None
        };
        let children = match child_kind {
            Some((child_start, kind)) => {
                parse_sequence(bytes, child_start, payload_end, kind, depth + 1)?
            }
            None => Vec::new(),
        };

        out.push(BoxNode {
            box_type,
            offset: pos as u64,
            payload_offset: payload_start as u64,
            payload_length: (payload_end - payload_start) as u64,
            children,
        });
        pos = payload_end;
    }
    Ok(out)
}

/// ISO `meta` is a full box (4 bytes version/flags before the children);
/// QuickTime writes it as a plain container. Tell them apart by where the
/// handler box sits.
fn meta_children_start(bytes: &[u8], start: usize, end: usize) -> usize {
    if end >= start + 8 && &bytes[start + 4..start + 8] == b"hdlr" {
        return start;
    }
    if end >= start + 12 && &bytes[start + 8..start + 12] == b"hdlr" {
        return start + 4;
    }
    if end >= start + 4 && bytes[start..start + 4] == [0, 0, 0, 0] {
        return start + 4;
    }
    start
}

/// Build one box: header plus payload.
pub(crate) fn write_box(out: &mut Vec<u8>, box_type: &[u8; 4], payload: &[u8]) {
    out.extend_from_slice(&((payload.len() + 8) as u32).to_be_bytes());
    out.extend_from_slice(box_type);
    out.extend_from_slice(payload);
}

pub(crate) fn make_box(box_type: &[u8; 4], payload: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(payload.len() + 8);
    write_box(&mut out, box_type, payload);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ftyp_box() -> Vec<u8> {
        let mut p = Vec::new();
        p.extend_from_slice(b"qt  ");
        p.extend_from_slice(&0u32.to_be_bytes());
        p.extend_from_slice(b"qt  ");
        p.extend_from_slice(b"isom");
        make_box(b"ftyp", &p)
    }

    #[test]
    fn single_ftyp_leaf() {
        let bytes = ftyp_box();
        assert_eq!(bytes.len(), 24);
        let tree = parse_box_tree(&bytes).unwrap();
        assert_eq!(tree.roots.len(), 1);
        assert_eq!(tree.roots[0].box_type, b"ftyp");
        assert!(tree.roots[0].children.is_empty());
        assert_eq!(tree.roots[0].payload_offset, 8);
        assert_eq!(tree.roots[0].payload_length, 16);
    }

    #[test]
    fn moov_with_one_trak() {
        let bytes = make_box(b"moov", &make_box(b"trak", &[]));
        let tree = parse_box_tree(&bytes).unwrap();
        let moov = &tree.roots[0];
        assert_eq!(moov.box_type, b"moov");
        assert_eq!(moov.children.len(), 1);
        assert_eq!(moov.children[0].box_type, b"trak");
    }

    #[test]
    fn declared_size_past_end_is_truncated() {
        let mut bytes = vec![0u8; 100];
        bytes[..4].copy_from_slice(&1000u32.to_be_bytes());
        bytes[4..8].copy_from_slice(b"ftyp");
        assert!(matches!(
            parse_box_tree(&bytes),
            Err(BmffError::TruncatedFile { declared: 1000, available: 100, .. })
        ));
    }

    #[test]
    fn tiny_size_is_malformed() {
        let mut bytes = make_box(b"free", &[0; 8]);
        bytes[..4].copy_from_slice(&4u32.to_be_bytes());
        assert!(matches!(parse_box_tree(&bytes), Err(BmffError::MalformedBox { .. })));
    }

    #[test]
    fn short_input_rejected() {
        assert!(matches!(parse_box_tree(&[0, 0, 0]), Err(BmffError::TruncatedFile { .. })));
    }

    #[test]
    fn extended_and_to_end_sizes() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&1u32.to_be_bytes());
        bytes.extend_from_slice(b"free");
        bytes.extend_from_slice(&20u64.to_be_bytes());
        bytes.extend_from_slice(&[7, 7, 7, 7]);
        bytes.extend_from_slice(&0u32.to_be_bytes());
        bytes.extend_from_slice(b"mdat");
        bytes.extend_from_slice(&[1, 2, 3]);
        let tree = parse_box_tree(&bytes).unwrap();
        assert_eq!(tree.roots.len(), 2);
        assert_eq!(tree.roots[0].payload_offset, 16);
        assert_eq!(tree.roots[0].payload_length, 4);
        assert_eq!(tree.roots[1].box_type, b"mdat");
        assert_eq!(tree.roots[1].payload_length, 3);
    }

    #[test]
    fn child_overrunning_parent_is_truncated() {
        let mut inner = make_box(b"trak", &[0; 4]);
        inner[..4].copy_from_slice(&40u32.to_be_bytes());
        let bytes = make_box(b"moov", &inner);
        assert!(matches!(parse_box_tree(&bytes), Err(BmffError::TruncatedFile { .. })));
    }

    #[test]
    fn unknown_boxes_are_skipped_as_leaves() {
        let mut bytes = make_box(b"abcd", &[1, 2, 3, 4, 5]);
        bytes.extend(make_box(b"moov", &make_box(b"zzzz", &make_box(b"trak", &[]))));
        let tree = parse_box_tree(&bytes).unwrap();
        assert_eq!(tree.roots.len(), 2);
        // zzzz is not a container, so its payload is not descended into.
        assert!(tree.roots[1].children[0].children.is_empty());
    }

    #[test]
    fn iso_and_quicktime_meta() {
        let hdlr = make_box(b"hdlr", &[0; 24]);
        let mut full = vec![0, 0, 0, 0];
        full.extend(&hdlr);
        full.extend(make_box(b"ilst", &[]));
        let tree = parse_box_tree(&make_box(b"meta", &full)).unwrap();
        let types: Vec<_> = tree.roots[0].children.iter().map(|c| c.box_type).collect();
        assert_eq!(types, vec![FourCC(*b"hdlr"), FourCC(*b"ilst")]);

        let mut plain = hdlr.clone();
        plain.extend(make_box(b"keys", &[0; 8]));
        let tree = parse_box_tree(&make_box(b"meta", &plain)).unwrap();
        assert_eq!(tree.roots[0].children.len(), 2);
    }

    #[test]
    fn fourcc_display_keeps_spaces_and_copyright() {
        assert_eq!(FourCC(*b"qt  ").to_string(), "qt  ");
        assert_eq!(FourCC(*b"qt  ").trimmed(), "qt");
        assert_eq!(FourCC([0xa9, b'n', b'a', b'm']).to_string(), "©nam");
        assert_eq!(FourCC::from_str_padded("qt"), Some(FourCC(*b"qt  ")));
        assert_eq!(FourCC::from_str_padded("toolong"), None);
    }
}
