use super::{BmffError, BoxTree, FourCC};
use crate::attrs::FormatProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FtypInfo {
    pub major_brand: FourCC,
    pub minor_version: u32,
    pub compatible_brands: Vec<FourCC>,
}

impl FtypInfo {
    /// Inverse of [`render_codec_id`]. A bare brand ("qt") yields a brand
    /// list holding only the major brand.
    pub fn from_codec_id(codec_id: &str) -> Option<FtypInfo> {
        let codec_id = codec_id.trim();
        let (major, rest) = match codec_id.split_once('(') {
            Some((m, r)) => (m.trim(), Some(r.strip_suffix(')')?)),
            None => (codec_id, None),
        };
        let major_brand = FourCC::from_str_padded(major)?;
        let compatible_brands = match rest {
            Some(list) => list
                .split('/')
                .map(|b| FourCC::from_str_padded(b.trim()))
                .collect::<Option<Vec<_>>>()?,
            None => vec![major_brand],
        };
        Some(FtypInfo {
            major_brand,
            minor_version: 0,
            compatible_brands,
        })
    }
}

pub fn read_ftyp(tree: &BoxTree, bytes: &[u8]) -> Result<FtypInfo, BmffError> {
    let node = tree.find(b"ftyp").ok_or(BmffError::MissingFtyp)?;
    let payload = node.payload(bytes);
    if payload.len() < 8 {
        return Err(BmffError::MalformedBox {
            offset: node.offset,
            reason: "ftyp payload shorter than 8 bytes",
        });
    }
    let major_brand = FourCC(payload[0..4].try_into().unwrap());
    let minor_version = u32::from_be_bytes(payload[4..8].try_into().unwrap());
    let compatible_brands = payload[8..]
        .chunks_exact(4)
        .map(|c| FourCC(c.try_into().unwrap()))
        .collect();
    Ok(FtypInfo {
        major_brand,
        minor_version,
        compatible_brands,
    })
}

/// Analyzer-style codec ID: `"qt"` or `"mp42 (isom/mp42)"`.
pub fn render_codec_id(info: &FtypInfo) -> String {
    let major = info.major_brand.trimmed();
    let only_major = info.compatible_brands.is_empty()
        || (info.compatible_brands.len() == 1 && info.compatible_brands[0] == info.major_brand);
    if only_major {
        return major;
    }
    let brands: Vec<String> = info.compatible_brands.iter().map(FourCC::trimmed).collect();
    format!("{major} ({})", brands.join("/"))
}

/// Container class from the major brand alone.
pub fn classify_format_profile(info: &FtypInfo) -> Result<FormatProfile, BmffError> {
    match &info.major_brand.0 {
        b"qt  " => Ok(FormatProfile::QuickTime),
        b"mp42" => Ok(FormatProfile::BaseMediaV2),
        b"isom" | b"avc1" | b"mp41" => Ok(FormatProfile::BaseMedia),
        [b'i', b's', b'o', d] if (b'2'..=b'9').contains(d) => Ok(FormatProfile::BaseMedia),
        _ => Err(BmffError::UnknownBrand(info.major_brand)),
    }
}
