//! Minimal container and JPEG writers that reproduce a given attribute
//! vector when read back. No media samples are written.

use crate::attrs::{Extension, FormatProfile, ImageAttributes, Marker, VideoAttributes};
use crate::bmff::{classify_format_profile, make_box, render_codec_id, AvcSignal, FtypInfo, VENDOR_MARKER_ATOM};

use super::OracleError;

fn inconsistent(msg: impl Into<String>) -> OracleError {
    OracleError::InconsistentAttrs(msg.into())
}

/// A file name whose extension reads back as `ext`.
pub fn synthetic_file_name(ext: Extension) -> &'static str {
    match ext {
        Extension::Mp4 => "synthetic.mp4",
        Extension::Mov => "synthetic.MOV",
        Extension::Jpg => "synthetic.JPG",
        Extension::Other => "synthetic.bin",
    }
}

fn full_box(box_type: &[u8; 4], version: u8, flags: u32, body: &[u8]) -> Vec<u8> {
    let mut p = Vec::with_capacity(body.len() + 4);
    p.push(version);
    p.extend_from_slice(&flags.to_be_bytes()[1..]);
    p.extend_from_slice(body);
    make_box(box_type, &p)
}

fn concat(parts: &[Vec<u8>]) -> Vec<u8> {
    parts.concat()
}

const IDENTITY_MATRIX: [u32; 9] = [0x0001_0000, 0, 0, 0, 0x0001_0000, 0, 0, 0, 0x4000_0000];

fn matrix() -> Vec<u8> {
    IDENTITY_MATRIX.iter().flat_map(|v| v.to_be_bytes()).collect()
}

fn mvhd() -> Vec<u8> {
    let mut b = Vec::new();
    b.extend_from_slice(&[0; 8]); // creation, modification
    b.extend_from_slice(&1000u32.to_be_bytes()); // timescale
    b.extend_from_slice(&0u32.to_be_bytes()); // duration
    b.extend_from_slice(&0x0001_0000u32.to_be_bytes()); // rate
    b.extend_from_slice(&0x0100u16.to_be_bytes()); // volume
    b.extend_from_slice(&[0; 10]);
    b.extend(matrix());
    b.extend_from_slice(&[0; 24]);
    b.extend_from_slice(&2u32.to_be_bytes()); // next track id
    full_box(b"mvhd", 0, 0, &b)
}

fn tkhd(width: u32, length: u32) -> Vec<u8> {
    let mut b = Vec::new();
    b.extend_from_slice(&[0; 8]);
    b.extend_from_slice(&1u32.to_be_bytes()); // track id
    b.extend_from_slice(&[0; 4]);
    b.extend_from_slice(&0u32.to_be_bytes()); // duration
    b.extend_from_slice(&[0; 8]);
    b.extend_from_slice(&[0; 8]); // layer, group, volume, reserved
    b.extend(matrix());
    b.extend_from_slice(&(width << 16).to_be_bytes());
    b.extend_from_slice(&(length << 16).to_be_bytes());
    full_box(b"tkhd", 0, 3, &b)
}

fn mdhd() -> Vec<u8> {
    let mut b = vec![0; 8];
    b.extend_from_slice(&1000u32.to_be_bytes());
    b.extend_from_slice(&0u32.to_be_bytes());
    b.extend_from_slice(&0x55c4u16.to_be_bytes()); // "und"
    b.extend_from_slice(&[0; 2]);
    full_box(b"mdhd", 0, 0, &b)
}

fn hdlr(handler: &[u8; 4], name: &str) -> Vec<u8> {
    let mut b = vec![0; 4];
    b.extend_from_slice(handler);
    b.extend_from_slice(&[0; 12]);
    b.extend_from_slice(name.as_bytes());
    b.push(0);
    full_box(b"hdlr", 0, 0, &b)
}

fn avcc(signal: &AvcSignal, compat: u8) -> Vec<u8> {
    let profile = signal.profile.indication();
    let sps = [0x67, profile, compat, signal.level_idc, 0xac, 0xd9];
    let pps = [0x68, 0xce, 0x3c, 0x80];
    let mut b = vec![1, profile, compat, signal.level_idc, 0xff, 0xe1];
    b.extend_from_slice(&(sps.len() as u16).to_be_bytes());
    b.extend_from_slice(&sps);
    b.push(1);
    b.extend_from_slice(&(pps.len() as u16).to_be_bytes());
    b.extend_from_slice(&pps);
    make_box(b"avcC", &b)
}

fn avc1(width: u16, length: u16, avcc: Vec<u8>) -> Vec<u8> {
    let mut e = vec![0; 6];
    e.extend_from_slice(&1u16.to_be_bytes()); // data reference index
    e.extend_from_slice(&[0; 16]);
    e.extend_from_slice(&width.to_be_bytes());
    e.extend_from_slice(&length.to_be_bytes());
    e.extend_from_slice(&0x0048_0000u32.to_be_bytes());
    e.extend_from_slice(&0x0048_0000u32.to_be_bytes());
    e.extend_from_slice(&[0; 4]);
    e.extend_from_slice(&1u16.to_be_bytes()); // frame count
    e.extend_from_slice(&[0; 32]); // compressor name
    e.extend_from_slice(&0x0018u16.to_be_bytes());
    e.extend_from_slice(&0xffffu16.to_be_bytes());
    e.extend(avcc);
    make_box(b"avc1", &e)
}

fn stbl(entry: Vec<u8>) -> Vec<u8> {
    let mut stsd = 1u32.to_be_bytes().to_vec();
    stsd.extend(entry);
    make_box(
        b"stbl",
        &concat(&[
            full_box(b"stsd", 0, 0, &stsd),
            full_box(b"stts", 0, 0, &[0; 4]),
            full_box(b"stsc", 0, 0, &[0; 4]),
            full_box(b"stsz", 0, 0, &[0; 8]),
            full_box(b"stco", 0, 0, &[0; 4]),
        ]),
    )
}

fn qt_text_atom(atom: &[u8; 4], text: &str) -> Vec<u8> {
    let mut b = (text.len() as u16).to_be_bytes().to_vec();
    b.extend_from_slice(&0x55c4u16.to_be_bytes());
    b.extend_from_slice(text.as_bytes());
    make_box(atom, &b)
}

fn marker_atom(m: Marker) -> Vec<u8> {
    match m {
        Marker::MovieName => qt_text_atom(&[0xa9, b'n', b'a', b'm'], "clip"),
        Marker::RecordedDate => qt_text_atom(&[0xa9, b'd', b'a', b'y'], "2021-01-01T00:00:00Z"),
        Marker::Copyright => qt_text_atom(&[0xa9, b'c', b'p', b'y'], "vendor"),
        Marker::MovieMore => make_box(&VENDOR_MARKER_ATOM, b"\0\0\0\x01"),
    }
}

fn encoder_meta(encoder: &str) -> Vec<u8> {
    let mut data = 1u32.to_be_bytes().to_vec(); // UTF-8 type
    data.extend_from_slice(&[0; 4]); // locale
    data.extend_from_slice(encoder.as_bytes());
    let item = make_box(&[0xa9, b't', b'o', b'o'], &make_box(b"data", &data));
    let ilst = make_box(b"ilst", &item);
    full_box(b"meta", 0, 0, &concat(&[hdlr(b"mdir", ""), ilst]))
}

/// Build a container whose extracted attributes equal `attrs`, except that
/// the extension comes from the file name (see [`synthetic_file_name`]).
pub fn synthesize_container(attrs: &VideoAttributes) -> Result<Vec<u8>, OracleError> {
    let ftyp = FtypInfo::from_codec_id(&attrs.codec_id)
        .ok_or_else(|| inconsistent(format!("codec id `{}` is not a brand rendering", attrs.codec_id)))?;
    if render_codec_id(&ftyp) != attrs.codec_id {
        return Err(inconsistent(format!("codec id `{}` does not render canonically", attrs.codec_id)));
    }
    let profile = classify_format_profile(&ftyp).unwrap_or(FormatProfile::Other);
    if profile != attrs.format_profile {
        return Err(inconsistent(format!(
            "format profile {} disagrees with codec id `{}`",
            attrs.format_profile, attrs.codec_id
        )));
    }
    let signal = AvcSignal::parse(&attrs.video_format_profile)
        .filter(|s| s.to_string() == attrs.video_format_profile)
        .ok_or_else(|| inconsistent(format!("video format profile `{}`", attrs.video_format_profile)))?;
    let compat = signal
        .compatibility_byte()
        .ok_or_else(|| inconsistent(format!("suffix in `{}` cannot be encoded", attrs.video_format_profile)))?;
    let dim = |v: u32, what: &str| {
        u16::try_from(v)
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| inconsistent(format!("{what} {v} out of range")))
    };
    let width = dim(attrs.width, "width")?;
    let length = dim(attrs.length, "length")?;
    if let Some(e) = &attrs.encoder {
        if e.trim() != e || e.is_empty() || e.contains('\0') || e.len() > 255 {
            return Err(inconsistent(format!("encoder `{e}` cannot be stored verbatim")));
        }
    }

    let mut ftyp_payload = ftyp.major_brand.0.to_vec();
    ftyp_payload.extend_from_slice(&ftyp.minor_version.to_be_bytes());
    for b in &ftyp.compatible_brands {
        ftyp_payload.extend_from_slice(&b.0);
    }

    let minf = make_box(
        b"minf",
        &concat(&[
            full_box(b"vmhd", 0, 1, &[0; 8]),
            make_box(
                b"dinf",
                &full_box(b"dref", 0, 0, &concat(&[1u32.to_be_bytes().to_vec(), full_box(b"url ", 0, 1, &[])])),
            ),
            stbl(avc1(width, length, avcc(&signal, compat))),
        ]),
    );
    let mdia = make_box(b"mdia", &concat(&[mdhd(), hdlr(b"vide", "VideoHandler"), minf]));
    let trak = make_box(b"trak", &concat(&[tkhd(attrs.width, attrs.length), mdia]));

    let mut udta = Vec::new();
    for m in &attrs.markers {
        udta.extend(marker_atom(*m));
    }
    if let Some(e) = &attrs.encoder {
        udta.extend(encoder_meta(e));
    }
    let mut moov = concat(&[mvhd(), trak]);
    if !udta.is_empty() {
        moov.extend(make_box(b"udta", &udta));
    }

    let mut out = concat(&[make_box(b"ftyp", &ftyp_payload), make_box(b"moov", &moov)]);
    pad_with_free(&mut out, attrs.byte_size)?;
    Ok(out)
}

fn pad_with_free(out: &mut Vec<u8>, target: u64) -> Result<(), OracleError> {
    let len = out.len() as u64;
    if target == len {
        return Ok(());
    }
    if target < len + 8 {
        return Err(inconsistent(format!("byte size {target} too small for a {len}-byte container")));
    }
    let pad = target - len;
    if pad > u32::MAX as u64 {
        return Err(inconsistent(format!("byte size {target} too large to synthesize")));
    }
    out.extend_from_slice(&(pad as u32).to_be_bytes());
    out.extend_from_slice(b"free");
    out.resize(target as usize, 0);
    Ok(())
}

/// Build a baseline JPEG header whose frame declares the given dimensions,
/// padded with comment segments to exactly `attrs.byte_size` bytes.
pub fn synthesize_jpeg(attrs: &ImageAttributes) -> Result<Vec<u8>, OracleError> {
    let dim = |v: u32, what: &str| {
        u16::try_from(v)
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| inconsistent(format!("{what} {v} out of range")))
    };
    let width = dim(attrs.width, "width")?;
    let length = dim(attrs.length, "length")?;
    let segment = |marker: u8, body: &[u8]| {
        let mut s = vec![0xff, marker];
        s.extend_from_slice(&((body.len() + 2) as u16).to_be_bytes());
        s.extend_from_slice(body);
        s
    };
    let mut out = vec![0xff, 0xd8];
    out.extend(segment(0xe0, b"JFIF\0\x01\x01\0\0\x01\0\x01\0\0"));
    let mut sof = vec![8];
    sof.extend_from_slice(&length.to_be_bytes());
    sof.extend_from_slice(&width.to_be_bytes());
    sof.extend_from_slice(&[1, 1, 0x11, 0]);
    out.extend(segment(0xc0, &sof));

    let target = attrs.byte_size;
    let base = out.len() as u64 + 2;
    if target < base {
        return Err(inconsistent(format!("byte size {target} too small for a JPEG header")));
    }
    if target > 1 << 32 {
        return Err(inconsistent(format!("byte size {target} too large to synthesize")));
    }
    // Each comment segment costs 4 bytes of overhead plus up to 65533 bytes.
    const MAX_SEGMENT: u64 = 65_537;
    let mut gap = target - base;
    while gap > 0 {
        if gap < 4 {
            return Err(inconsistent(format!("byte size {target} cannot be padded exactly")));
        }
        let mut chunk = gap.min(MAX_SEGMENT);
        if (1..4).contains(&(gap - chunk)) {
            chunk -= 4;
        }
        out.extend(segment(0xfe, &vec![0x20; (chunk - 4) as usize]));
        gap -= chunk;
    }
    out.extend_from_slice(&[0xff, 0xd9]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmff::extract_video_attributes;
    use crate::jpeg::extract_image_attributes_named;
    use std::collections::BTreeSet;

    fn discord() -> VideoAttributes {
        VideoAttributes {
            extension: Extension::Mov,
            format_profile: FormatProfile::QuickTime,
            codec_id: "qt".into(),
            video_format_profile: "Main@L3.1".into(),
            width: 960,
            length: 540,
            encoder: None,
            markers: BTreeSet::new(),
            byte_size: 4096,
        }
    }

    fn round_trip(a: &VideoAttributes) -> VideoAttributes {
        let bytes = synthesize_container(a).unwrap();
        assert_eq!(bytes.len() as u64, a.byte_size);
        extract_video_attributes(&bytes, synthetic_file_name(a.extension)).unwrap()
    }

    #[test]
    fn discord_row_round_trips() {
        let a = discord();
        assert_eq!(round_trip(&a), a);
    }

    #[test]
    fn wechat_android_copyright() {
        let a = VideoAttributes {
            extension: Extension::Mp4,
            format_profile: FormatProfile::BaseMediaV2,
            codec_id: "mp42 (isom/mp41/mp42)".into(),
            video_format_profile: "High@L3.1".into(),
            width: 960,
            length: 544,
            encoder: None,
            markers: [Marker::Copyright].into(),
            byte_size: 4096,
        };
        let back = round_trip(&a);
        assert!(back.markers.contains(&Marker::Copyright));
        assert_eq!(back, a);
    }

    #[test]
    fn encoder_and_all_markers() {
        let mut a = discord();
        a.encoder = Some("Lavf58.20.100".into());
        a.markers = Marker::ALL.into_iter().collect();
        a.video_format_profile = "Main@L4@Main".into();
        assert_eq!(round_trip(&a), a);
    }

    #[test]
    fn exact_size_without_padding() {
        let mut a = discord();
        a.byte_size = 0;
        let natural = match synthesize_container(&a) {
            Err(OracleError::InconsistentAttrs(m)) => m,
            other => panic!("{other:?}"),
        };
        assert!(natural.contains("too small"));
    }

    #[test]
    fn inconsistent_inputs() {
        let mut a = discord();
        a.codec_id = "mp42 (isom/mp42)".into();
        assert!(matches!(synthesize_container(&a), Err(OracleError::InconsistentAttrs(_))));
        let mut a = discord();
        a.width = 70_000;
        assert!(matches!(synthesize_container(&a), Err(OracleError::InconsistentAttrs(_))));
        let mut a = discord();
        a.video_format_profile = "High@L4@Main".into();
        assert!(matches!(synthesize_container(&a), Err(OracleError::InconsistentAttrs(_))));
        let mut a = discord();
        a.byte_size = 100;
        assert!(matches!(synthesize_container(&a), Err(OracleError::InconsistentAttrs(_))));
    }

    #[test]
    fn jpeg_sizes_are_exact() {
        for size in [base_jpeg_len(), base_jpeg_len() + 4, 100_000, 65_537 * 2 + base_jpeg_len() + 2, 500_000] {
            let a = ImageAttributes {
                width: 960,
                length: 720,
                byte_size: size,
                extension: Extension::Jpg,
            };
            let bytes = synthesize_jpeg(&a).unwrap();
            assert_eq!(extract_image_attributes_named(&bytes, "x.JPG").unwrap(), a, "size {size}");
        }
        let a = ImageAttributes {
            width: 1,
            length: 1,
            byte_size: base_jpeg_len() + 2,
            extension: Extension::Jpg,
        };
        assert!(synthesize_jpeg(&a).is_err());
    }

    fn base_jpeg_len() -> u64 {
        2 + 18 + 13 + 2
    }
}
