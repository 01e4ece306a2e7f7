//! Grid topologies, pattern masks, and models built on them.
//!
//! The hardware layout this mirrors is a rectangular array with king's-move
//! connectivity: every cell couples to its horizontal, vertical, and diagonal
//! neighbors, giving interior cells degree 8.

use crate::model::{EnergySign, IsingModel, ModelError, SpinDomain, SpinState};
use crate::seed::derive_rng;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("grid dimensions must be positive, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("mask rows must be equal-length and non-empty")]
    RaggedMask,
    #[error("unrecognized mask character {0:?}")]
    BadMaskChar(char),
    #[error("coupling magnitude must be positive and finite, got {0}")]
    BadMagnitude(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A rectangular grid with row-major cell indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridTopology {
    rows: usize,
    cols: usize,
}

impl GridTopology {
    pub fn new(rows: usize, cols: usize) -> Result<Self, TopologyError> {
        if rows == 0 || cols == 0 {
            return Err(TopologyError::EmptyGrid { rows, cols });
        }
        Ok(GridTopology { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> usize {
        self.rows * self.cols
    }

    pub fn index(&self, r: usize, c: usize) -> usize {
        debug_assert!(r < self.rows && c < self.cols);
        r * self.cols + c
    }

    /// King's-move neighbor pairs, each unordered pair listed once in
    /// canonical sorted order.
    pub fn kings_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.index(r, c);
                if c + 1 < self.cols {
                    pairs.push((a, self.index(r, c + 1)));
                }
                if r + 1 < self.rows {
                    pairs.push((a, self.index(r + 1, c)));
                    if c + 1 < self.cols {
                        pairs.push((a, self.index(r + 1, c + 1)));
                    }
                    if c > 0 {
                        pairs.push((a, self.index(r + 1, c - 1)));
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

/// How to populate couplings and biases on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridFill {
    /// Every coupling set to the given weight, all biases zero.
    Constant(f64),
    /// Couplings and biases drawn i.i.d. uniform from `[-max_abs, max_abs)`.
    Random { max_abs: f64, seed: u64 },
}

/// Builds an Ising model with king's-move connectivity on a `rows x cols`
/// grid.
pub fn build_kings_grid(
    rows: usize,
    cols: usize,
    fill: GridFill,
    domain: SpinDomain,
    sign: EnergySign,
) -> Result<IsingModel, TopologyError> {
    let grid = GridTopology::new(rows, cols)?;
    let pairs = grid.kings_pairs();
    let (couplings, biases) = match fill {
        GridFill::Constant(w) => {
            let couplings = pairs.iter().map(|&(i, j)| (i, j, w)).collect();
            (couplings, vec![0.0; grid.n()])
        }
        GridFill::Random { max_abs, seed } => {
            let mut rng = derive_rng(seed, "kings-grid", 0);
            let couplings = pairs
                .iter()
                .map(|&(i, j)| (i, j, rng.random_range(-max_abs..max_abs)))
                .collect();
            let biases = (0..grid.n())
                .map(|_| rng.random_range(-max_abs..max_abs))
                .collect();
            (couplings, biases)
        }
    };
    Ok(IsingModel::new(domain, sign, biases, couplings)?)
}

/// A binary pattern over a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self, TopologyError> {
        if rows == 0 || cols == 0 || bits.len() != rows * cols {
            return Err(TopologyError::RaggedMask);
        }
        Ok(Mask { rows, cols, bits })
    }

    /// Parses a text drawing: one line per row, `#`/`1` for on, `.`/`0` for
    /// off. Blank lines and lines starting with `//` are skipped.
    pub fn parse(text: &str) -> Result<Self, TopologyError> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let mut row = Vec::with_capacity(line.len());
            for ch in line.chars() {
                match ch {
                    '#' | '1' => row.push(true),
                    '.' | '0' => row.push(false),
                    other => return Err(TopologyError::BadMaskChar(other)),
                }
            }
            rows.push(row);
        }
        let height = rows.len();
        if height == 0 {
            return Err(TopologyError::RaggedMask);
        }
        let width = rows[0].len();
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(TopologyError::RaggedMask);
        }
        Mask::new(height, width, rows.concat())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.cols + 1) * self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.bit(r, c) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The mask as a `{-1,+1}` spin state (on = up).
    pub fn to_state(&self) -> SpinState {
        let values = self
            .bits
            .iter()
            .map(|&b| if b { 1 } else { -1 })
            .collect();
        SpinState::new(SpinDomain::PlusMinus, values).expect("mask values are in domain")
    }

    /// The complement pattern.
    pub fn complement(&self) -> Mask {
        Mask {
            rows: self.rows,
            cols: self.cols,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// A 16x16 pattern spelling "CAL", the demo image programmed on the
    /// physical array.
    pub fn builtin_cal() -> Mask {
        const ART: &str = "\
................
................
................
................
..###..##..#....
.#....#..#.#....
.#....#..#.#....
.#....#..#.#....
.#....####.#....
.#....#..#.#....
.#....#..#.#....
.#....#..#.#....
..###.#..#.####.
................
................
................
";
        Mask::parse(ART).expect("built-in mask art is well-formed")
    }
}

/// Builds a `{-1,+1}` ferromagnetic-convention model on the mask's grid whose
/// two ground states are exactly the mask pattern and its complement.
///
/// Each king's-move pair gets weight `magnitude * m_i * m_j` where `m` is the
/// mask as `{-1,+1}` values; aligned-with-pattern assignments then satisfy
/// every coupling simultaneously and biases are zero, so energy is minimized
/// precisely by the pattern and its global flip.
pub fn encode_mask_ground_state(mask: &Mask, magnitude: f64) -> Result<IsingModel, TopologyError> {
    if !(magnitude > 0.0) || !magnitude.is_finite() {
        return Err(TopologyError::BadMagnitude(magnitude));
    }
    let grid = GridTopology::new(mask.rows(), mask.cols())?;
    let m = mask.to_state();
    let couplings = grid
        .kings_pairs()
        .into_iter()
        .map(|(i, j)| {
            (
                i,
                j,
                magnitude * (m.value(i) as f64) * (m.value(j) as f64),
            )
        })
        .collect();
    Ok(IsingModel::new(
        SpinDomain::PlusMinus,
        EnergySign::Ferromagnetic,
        vec![0.0; grid.n()],
        couplings,
    )?)
}
