//! Self-contained stand-in for handwritten-digit data: 5×7 font glyphs
//! rendered into 28×28 grayscale with per-image jitter and noise, so the
//! training pipeline can run without external datasets.

use rand::Rng;

use super::idx::IdxImages;
use crate::seed::derive_rng;

const GLYPHS: [[&str; 7]; 10] = [
    [
        "01110", "10001", "10011", "10101", "11001", "10001", "01110",
    ],
    [
        "00100", "01100", "00100", "00100", "00100", "00100", "01110",
    ],
    [
        "01110", "10001", "00001", "00010", "00100", "01000", "11111",
    ],
    [
        "11111", "00010", "00100", "00010", "00001", "10001", "01110",
    ],
    [
        "00010", "00110", "01010", "10010", "11111", "00010", "00010",
    ],
    [
        "11111", "10000", "11110", "00001", "00001", "10001", "01110",
    ],
    [
        "00110", "01000", "10000", "11110", "10001", "10001", "01110",
    ],
    [
        "11111", "00001", "00010", "00100", "01000", "01000", "01000",
    ],
    [
        "01110", "10001", "10001", "01110", "10001", "10001", "01110",
    ],
    [
        "01110", "10001", "10001", "01111", "00001", "00010", "01100",
    ],
];

const SIDE: usize = 28;
/// Each glyph cell renders as a CELL×CELL block.
const CELL: usize = 3;

/// Deterministically generates `per_digit` noisy 28×28 renderings of each
/// digit 0-9, in digit order, with matching labels.
pub fn synthetic_digits(per_digit: usize, seed: u64) -> (IdxImages, Vec<u8>) {
    let mut pixels = Vec::with_capacity(per_digit * 10 * SIDE * SIDE);
    let mut labels = Vec::with_capacity(per_digit * 10);
    for digit in 0..10u8 {
        for k in 0..per_digit {
            let mut rng = derive_rng(
                seed,
                "synthetic-digit",
                (digit as u64) << 32 | k as u64,
            );
            // Glyph occupies 15x21 of the 28x28 frame; jitter the margin.
            let base_col = (SIDE - 5 * CELL) / 2;
            let base_row = (SIDE - 7 * CELL) / 2;
            let dr = rng.random_range(-2i32..=2);
            let dc = rng.random_range(-2i32..=2);
            let mut img = vec![0u8; SIDE * SIDE];
            for (gr, row) in GLYPHS[digit as usize].iter().enumerate() {
                for (gc, ch) in row.bytes().enumerate() {
                    if ch != b'1' {
                        continue;
                    }
                    for sr in 0..CELL {
                        for sc in 0..CELL {
                            let r = base_row as i32 + (gr * CELL + sr) as i32 + dr;
                            let c = base_col as i32 + (gc * CELL + sc) as i32 + dc;
                            if (0..SIDE as i32).contains(&r) && (0..SIDE as i32).contains(&c) {
                                img[r as usize * SIDE + c as usize] = 1;
                            }
                        }
                    }
                }
            }
            for p in &mut img {
                let v: f64 = rng.random();
                *p = if *p == 1 {
                    // Ink: bright with variation, occasionally dropped out.
                    if v < 0.03 {
                        40
                    } else {
                        (200.0 + 55.0 * rng.random::<f64>()) as u8
                    }
                } else {
                    // Paper: dark with occasional speckle.
                    if v < 0.02 {
                        180
                    } else {
                        (40.0 * rng.random::<f64>()) as u8
                    }
                };
            }
            pixels.extend_from_slice(&img);
            labels.push(digit);
        }
    }
    (
        IdxImages {
            rows: SIDE,
            cols: SIDE,
            pixels,
        },
        labels,
    )
}
