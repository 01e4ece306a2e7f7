//! Reader and writer for the IDX format used by the MNIST distribution:
//! big-endian magic, big-endian dimension sizes, then raw bytes.

use super::MlError;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

/// A stack of equally sized 8-bit grayscale images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImages {
    pub rows: usize,
    pub cols: usize,
    /// `count * rows * cols` bytes, image-major then row-major.
    pub pixels: Vec<u8>,
}

impl IdxImages {
    pub fn count(&self) -> usize {
        let per = self.rows * self.cols;
        if per == 0 {
            0
        } else {
            self.pixels.len() / per
        }
    }

    pub fn image(&self, k: usize) -> &[u8] {
        let per = self.rows * self.cols;
        &self.pixels[k * per..(k + 1) * per]
    }
}

fn read_u32(bytes: &[u8], at: usize) -> Result<u32, MlError> {
    let end = at + 4;
    if bytes.len() < end {
        return Err(MlError::Truncated {
            need: end,
            have: bytes.len(),
        });
    }
    Ok(u32::from_be_bytes(bytes[at..end].try_into().unwrap()))
}

pub fn parse_idx_images(bytes: &[u8]) -> Result<IdxImages, MlError> {
    let magic = read_u32(bytes, 0)?;
    if magic != IMAGES_MAGIC {
        return Err(MlError::BadMagic {
            expected: IMAGES_MAGIC,
            got: magic,
        });
    }
    let count = read_u32(bytes, 4)? as usize;
    let rows = read_u32(bytes, 8)? as usize;
    let cols = read_u32(bytes, 12)? as usize;
    let need = 16 + count * rows * cols;
    if bytes.len() < need {
        return Err(MlError::Truncated {
            need,
            have: bytes.len(),
        });
    }
    Ok(IdxImages {
        rows,
        cols,
        pixels: bytes[16..need].to_vec(),
    })
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>, MlError> {
    let magic = read_u32(bytes, 0)?;
    if magic != LABELS_MAGIC {
        return Err(MlError::BadMagic {
            expected: LABELS_MAGIC,
            got: magic,
        });
    }
    let count = read_u32(bytes, 4)? as usize;
    let need = 8 + count;
    if bytes.len() < need {
        return Err(MlError::Truncated {
            need,
            have: bytes.len(),
        });
    }
    Ok(bytes[8..need].to_vec())
}

pub fn write_idx_images(images: &IdxImages) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + images.pixels.len());
    out.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    out.extend_from_slice(&(images.count() as u32).to_be_bytes());
    out.extend_from_slice(&(images.rows as u32).to_be_bytes());
    out.extend_from_slice(&(images.cols as u32).to_be_bytes());
    out.extend_from_slice(&images.pixels);
    out
}

pub fn write_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}
