//! JPEG frame header lookup.
//!
//! Walks marker segments up to the first start-of-frame and reads the stored
//! dimensions. EXIF orientation is deliberately not applied.

use thiserror::Error;

use crate::attrs::{Extension, ImageAttributes};

/// The marker scan gives up after this many bytes.
pub const SCAN_LIMIT: usize = 16 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JpegError {
    #[error("not a JPEG file")]
    NotJpeg,
    #[error("no start-of-frame segment before end of stream")]
    NoFrameHeader,
    #[error("segment at offset {0} runs past end of data")]
    Truncated(usize),
    #[error("frame header declares a zero dimension")]
    InvalidDimensions,
}

pub fn is_jpeg(bytes: &[u8]) -> bool {
    bytes.len() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff
}

/// Stored width and length from the first SOF segment; `byte_size` is the
/// input length.
pub fn extract_image_attributes(bytes: &[u8]) -> Result<ImageAttributes, JpegError> {
    let (width, length) = frame_dimensions(bytes)?;
    Ok(ImageAttributes {
        width,
        length,
        byte_size: bytes.len() as u64,
        extension: Extension::Jpg,
    })
}

/// As [`extract_image_attributes`], classifying the extension from a file
/// name instead of assuming JPG.
pub fn extract_image_attributes_named(bytes: &[u8], name_hint: &str) -> Result<ImageAttributes, JpegError> {
    let mut attrs = extract_image_attributes(bytes)?;
    if let Some(ext) = Extension::from_file_name(name_hint) {
        if ext != Extension::Jpg {
            attrs.extension = Extension::Other;
        }
    }
    Ok(attrs)
}

fn is_sof(marker: u8) -> bool {
    // C4 (DHT), C8 (JPG) and CC (DAC) share the range but are not frames.
    (0xc0..=0xcf).contains(&marker) && !matches!(marker, 0xc4 | 0xc8 | 0xcc)
}

fn frame_dimensions(bytes: &[u8]) -> Result<(u32, u32), JpegError> {
    if bytes.len() < 2 || bytes[0] != 0xff || bytes[1] != 0xd8 {
        return Err(JpegError::NotJpeg);
    }
    let data = &bytes[..bytes.len().min(SCAN_LIMIT)];
    let mut pos = 2;
    loop {
        // Find the next marker, skipping fill bytes.
        while pos < data.len() && data[pos] != 0xff {
            pos += 1;
        }
        while pos < data.len() && data[pos] == 0xff {
            pos += 1;
        }
        let Some(&marker) = data.get(pos) else {
            return Err(JpegError::NoFrameHeader);
        };
        pos += 1;
        match marker {
            0xd9 => return Err(JpegError::NoFrameHeader),
            // Standalone markers.
            0x00 | 0x01 | 0xd0..=0xd8 => continue,
            _ => {}
        }
        let seg_start = pos - 2;
        let len_bytes = data.get(pos..pos + 2).ok_or(JpegError::Truncated(seg_start))?;
        let seg_len = u16::from_be_bytes([len_bytes[0], len_bytes[1]]) as usize;
        if seg_len < 2 {
            return Err(JpegError::Truncated(seg_start));
        }
        let segment = data.get(pos + 2..pos + seg_len).ok_or(JpegError::Truncated(seg_start))?;
        if is_sof(marker) {
            if segment.len() < 5 {
                return Err(JpegError::Truncated(seg_start));
            }
            let length = u16::from_be_bytes([segment[1], segment[2]]) as u32;
            let width = u16::from_be_bytes([segment[3], segment[4]]) as u32;
            if width == 0 || length == 0 {
                return Err(JpegError::InvalidDimensions);
            }
            return Ok((width, length));
        }
        pos += seg_len;
        if marker == 0xda {
            pos = skip_entropy_data(data, pos);
        }
    }
}

/// Advance past entropy-coded data to the next real marker.
fn skip_entropy_data(data: &[u8], mut pos: usize) -> usize {
    while pos + 1 < data.len() {
        if data[pos] == 0xff {
            let next = data[pos + 1];
            if next != 0x00 && !(0xd0..=0xd7).contains(&next) && next != 0xff {
                return pos;
            }
        }
        pos += 1;
    }
    data.len()
}
