//! Read stored JPEG dimensions (EXIF orientation is not applied).
//!
//!     cargo run --example image_attributes -- photo.jpg

use mediafp::jpeg::{extract_image_attributes, extract_image_attributes_named};
use mediafp::oracle::synthesize_jpeg;
use mediafp::{Extension, ImageAttributes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let attrs = match std::env::args().nth(1) {
        Some(path) => extract_image_attributes_named(&std::fs::read(&path)?, &path)?,
        None => {
            let bytes = synthesize_jpeg(&ImageAttributes {
                width: 1600,
                length: 1200,
                byte_size: 380_000,
                extension: Extension::Jpg,
            })?;
            extract_image_attributes(&bytes)?
        }
    };
    println!("{} {} bytes, extension {}", attrs.resolution(), attrs.byte_size, attrs.extension);
    Ok(())
}
