//! Bounded reading of large container files.
//!
//! Only box structure matters for fingerprinting, so media payloads are
//! replaced by empty `free` stubs and never loaded.

use std::io::{Read, Seek, SeekFrom};

use super::{BmffError, FourCC};

/// Top-level boxes at or above this size are stubbed unless they are `moov`.
const STUB_THRESHOLD: u64 = 16 << 20;

/// Read the structural boxes of a container. Returns a compacted buffer that
/// parses like the original apart from stubbed payloads, and the full
/// stream length.
pub fn read_container_window<R: Read + Seek>(reader: &mut R) -> Result<(Vec<u8>, u64), BmffError> {
    let total = reader.seek(SeekFrom::End(0))?;
    reader.seek(SeekFrom::Start(0))?;
    let mut out = Vec::new();
    let mut pos = 0u64;
    while pos < total {
        let remaining = total - pos;
        if remaining < 8 {
            // Let the parser report the dangling bytes.
            let mut tail = vec![0u8; remaining as usize];
            reader.read_exact(&mut tail)?;
            out.extend_from_slice(&tail);
            break;
        }
        let mut header = [0u8; 16];
        reader.read_exact(&mut header[..8])?;
        let size32 = u32::from_be_bytes(header[0..4].try_into().unwrap()) as u64;
        let box_type = FourCC(header[4..8].try_into().unwrap());
        let (header_len, size) = match size32 {
            0 => (8, remaining),
            1 => {
                if remaining < 16 {
                    return Err(BmffError::TruncatedFile {
                        box_type,
                        offset: pos,
                        declared: 16,
                        available: remaining,
                    });
                }
                reader.read_exact(&mut header[8..16])?;
                (16, u64::from_be_bytes(header[8..16].try_into().unwrap()))
            }
            s => (8, s),
        };
        if size < header_len {
            return Err(BmffError::MalformedBox {
                offset: pos,
                reason: "declared size smaller than box header",
            });
        }
        if size > remaining {
            return Err(BmffError::TruncatedFile {
                box_type,
                offset: pos,
                declared: size,
                available: remaining,
            });
        }
        let stub = box_type == b"mdat" || (size >= STUB_THRESHOLD && box_type != b"moov");
        if stub {
            out.extend_from_slice(&8u32.to_be_bytes());
            out.extend_from_slice(b"free");
            reader.seek(SeekFrom::Start(pos + size))?;
        } else {
            out.extend_from_slice(&header[..header_len as usize]);
            let start = out.len();
            out.resize(start + (size - header_len) as usize, 0);
            reader.read_exact(&mut out[start..])?;
        }
        pos += size;
    }
    Ok((out, total))
}
