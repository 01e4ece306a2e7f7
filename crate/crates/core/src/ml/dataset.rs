//! Binary image datasets: IDX ingestion, area-weighted downsampling, and
//! thresholding to the grid resolution of the neuron array.

use super::idx::{parse_idx_images, parse_idx_labels};
use super::MlError;

/// Labelled binary images at the neuron-grid resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryDataset {
    pub rows: usize,
    pub cols: usize,
    /// One entry per image; pixel values 0 or 1, row-major.
    pub images: Vec<Vec<u8>>,
    pub labels: Vec<u8>,
}

impl BinaryDataset {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// The subset with this label.
    pub fn filter_digit(&self, digit: u8) -> BinaryDataset {
        let mut images = Vec::new();
        let mut labels = Vec::new();
        for (img, &l) in self.images.iter().zip(&self.labels) {
            if l == digit {
                images.push(img.clone());
                labels.push(l);
            }
        }
        BinaryDataset {
            rows: self.rows,
            cols: self.cols,
            images,
            labels,
        }
    }

    /// Per-pixel mean over all images.
    pub fn mean_image(&self) -> Vec<f64> {
        let mut acc = vec![0.0f64; self.rows * self.cols];
        for img in &self.images {
            for (a, &p) in acc.iter_mut().zip(img) {
                *a += p as f64;
            }
        }
        let count = self.images.len().max(1) as f64;
        for a in &mut acc {
            *a /= count;
        }
        acc
    }
}

/// Area-weighted resample of a grayscale image to a new shape, returning
/// values normalized to [0, 1]. Each destination cell averages the source
/// region it covers, with fractional overlap weights at the boundaries.
pub fn downsample_area(
    src: &[u8],
    src_rows: usize,
    src_cols: usize,
    dst_rows: usize,
    dst_cols: usize,
) -> Vec<f64> {
    assert_eq!(src.len(), src_rows * src_cols);
    assert!(dst_rows > 0 && dst_cols > 0);
    let row_scale = src_rows as f64 / dst_rows as f64;
    let col_scale = src_cols as f64 / dst_cols as f64;
    let mut out = Vec::with_capacity(dst_rows * dst_cols);
    for dr in 0..dst_rows {
        let r0 = dr as f64 * row_scale;
        let r1 = (dr + 1) as f64 * row_scale;
        for dc in 0..dst_cols {
            let c0 = dc as f64 * col_scale;
            let c1 = (dc + 1) as f64 * col_scale;
            let mut sum = 0.0;
            let mut area = 0.0;
            let mut r = r0.floor() as usize;
            while (r as f64) < r1 && r < src_rows {
                let rw = (r1.min((r + 1) as f64) - r0.max(r as f64)).max(0.0);
                let mut c = c0.floor() as usize;
                while (c as f64) < c1 && c < src_cols {
                    let cw = (c1.min((c + 1) as f64) - c0.max(c as f64)).max(0.0);
                    sum += rw * cw * (src[r * src_cols + c] as f64);
                    area += rw * cw;
                    c += 1;
                }
                r += 1;
            }
            out.push(if area > 0.0 { sum / (area * 255.0) } else { 0.0 });
        }
    }
    out
}

/// Thresholds normalized grays to bits; ties round up.
pub fn binarize(gray: &[f64], threshold: f64) -> Vec<u8> {
    gray.iter().map(|&g| u8::from(g >= threshold)).collect()
}

/// Parses IDX image and label payloads, downsamples every image to
/// `side`×`side`, and binarizes at `threshold` (fraction of full scale).
pub fn dataset_from_idx_bytes(
    image_bytes: &[u8],
    label_bytes: &[u8],
    side: usize,
    threshold: f64,
) -> Result<BinaryDataset, MlError> {
    let imgs = parse_idx_images(image_bytes)?;
    let labels = parse_idx_labels(label_bytes)?;
    if imgs.count() != labels.len() {
        return Err(MlError::CountMismatch {
            images: imgs.count(),
            labels: labels.len(),
        });
    }
    let mut images = Vec::with_capacity(imgs.count());
    for k in 0..imgs.count() {
        let gray = downsample_area(imgs.image(k), imgs.rows, imgs.cols, side, side);
        images.push(binarize(&gray, threshold));
    }
    Ok(BinaryDataset {
        rows: side,
        cols: side,
        images,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ml::idx::{write_idx_images, write_idx_labels, IdxImages};
    use approx::assert_relative_eq;

    #[test]
    fn all_zero_image_stays_zero() {
        let imgs = IdxImages {
            rows: 28,
            cols: 28,
            pixels: vec![0u8; 28 * 28],
        };
        let ds = dataset_from_idx_bytes(
            &write_idx_images(&imgs),
            &write_idx_labels(&[7]),
            16,
            0.5,
        )
        .unwrap();
        assert_eq!(ds.len(), 1);
        assert!(ds.images[0].iter().all(|&p| p == 0));
        assert_eq!(ds.labels, vec![7]);
    }

    #[test]
    fn all_max_image_becomes_all_ones() {
        let imgs = IdxImages {
            rows: 28,
            cols: 28,
            pixels: vec![255u8; 28 * 28],
        };
        let ds = dataset_from_idx_bytes(
            &write_idx_images(&imgs),
            &write_idx_labels(&[0]),
            16,
            0.5,
        )
        .unwrap();
        assert!(ds.images[0].iter().all(|&p| p == 1));
    }

    #[test]
    fn half_scale_constant_ties_round_up() {
        // 127.5/255 is exactly the 0.5 threshold; byte 128 sits just above,
        // 127 just below. Use a uniform 28x28 so every cell averages the
        // same value.
        let up = IdxImages {
            rows: 28,
            cols: 28,
            pixels: vec![128u8; 28 * 28],
        };
        let ds = dataset_from_idx_bytes(
            &write_idx_images(&up),
            &write_idx_labels(&[1]),
            16,
            128.0 / 255.0,
        )
        .unwrap();
        assert!(ds.images[0].iter().all(|&p| p == 1), "exact ties go to 1");
    }

    #[test]
    fn area_downsample_preserves_total_intensity() {
        // Mean of the resampled image equals the mean of the source.
        let pixels: Vec<u8> = (0..28 * 28).map(|i| (i % 251) as u8).collect();
        let gray = downsample_area(&pixels, 28, 28, 16, 16);
        let src_mean = pixels.iter().map(|&p| p as f64 / 255.0).sum::<f64>() / (28.0 * 28.0);
        let dst_mean = gray.iter().sum::<f64>() / 256.0;
        assert_relative_eq!(src_mean, dst_mean, epsilon = 1e-12);
    }

    #[test]
    fn identity_resample_is_exact() {
        let pixels = vec![10u8, 20, 30, 40];
        let gray = downsample_area(&pixels, 2, 2, 2, 2);
        for (g, &p) in gray.iter().zip(&pixels) {
            assert_relative_eq!(*g, p as f64 / 255.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let imgs = IdxImages {
            rows: 2,
            cols: 2,
            pixels: vec![0u8; 8],
        };
        let err = dataset_from_idx_bytes(
            &write_idx_images(&imgs),
            &write_idx_labels(&[1, 2, 3]),
            2,
            0.5,
        );
        assert!(matches!(err, Err(MlError::CountMismatch { .. })));
    }

    #[test]
    fn filter_and_mean() {
        let ds = BinaryDataset {
            rows: 1,
            cols: 2,
            images: vec![vec![1, 0], vec![1, 1], vec![0, 0]],
            labels: vec![3, 3, 5],
        };
        let threes = ds.filter_digit(3);
        assert_eq!(threes.len(), 2);
        assert_eq!(threes.mean_image(), vec![1.0, 0.5]);
    }
}
