//! Fixed-point parameter quantization mirroring the on-chip format.
//!
//! Weights and biases share one symmetric linear code: `code = round(v /
//! scale)` with `scale = max|v| / (2^(bits-1) - 1)`, rounding half away from
//! zero. The most negative two's-complement code is never produced, matching
//! hardware that treats -2^(bits-1) as reserved. Local-field accumulation
//! saturates at a narrower signed range (7 bits on the device) before the
//! value reaches the neuron.

use crate::model::{IsingModel, ModelError, SpinState};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuantizeError {
    #[error("weight bits must be in 2..=15, got {0}")]
    BadWeightBits(u8),
    #[error("accumulator bits must be in 2..=31, got {0}")]
    BadAccumulatorBits(u8),
    #[error("model has no nonzero parameter to set the code scale")]
    AllZero,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A model whose parameters have been snapped to signed integer codes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedModel {
    weight_bits: u8,
    accumulator_bits: u8,
    scale: f64,
    /// Codes aligned with the source model's coupling order.
    weight_codes: Vec<i32>,
    bias_codes: Vec<i32>,
    /// Structure carrier: same support as the source, weights dequantized.
    model: IsingModel,
}

fn encode(v: f64, scale: f64, max_code: i32) -> i32 {
    // f64::round rounds half away from zero, the convention used here.
    let code = (v / scale).round();
    (code as i32).clamp(-max_code, max_code)
}

/// Quantizes all couplings and biases of `model` to `weight_bits`-bit codes.
/// The accumulator width is fixed at the device's 7 bits.
pub fn quantize(model: &IsingModel, weight_bits: u8) -> Result<QuantizedModel, QuantizeError> {
    quantize_with_accumulator(model, weight_bits, 7)
}

/// As [`quantize`] but with an explicit accumulator width.
pub fn quantize_with_accumulator(
    model: &IsingModel,
    weight_bits: u8,
    accumulator_bits: u8,
) -> Result<QuantizedModel, QuantizeError> {
    if !(2..=15).contains(&weight_bits) {
        return Err(QuantizeError::BadWeightBits(weight_bits));
    }
    if !(2..=31).contains(&accumulator_bits) {
        return Err(QuantizeError::BadAccumulatorBits(accumulator_bits));
    }
    let max_abs = model
        .couplings()
        .iter()
        .map(|c| c.weight.abs())
        .chain(model.biases().iter().map(|b| b.abs()))
        .fold(0.0f64, f64::max);
    if max_abs == 0.0 {
        return Err(QuantizeError::AllZero);
    }
    let max_code = (1i32 << (weight_bits - 1)) - 1;
    let scale = max_abs / max_code as f64;
    let weight_codes: Vec<i32> = model
        .couplings()
        .iter()
        .map(|c| encode(c.weight, scale, max_code))
        .collect();
    let bias_codes: Vec<i32> = model
        .biases()
        .iter()
        .map(|&b| encode(b, scale, max_code))
        .collect();
    let weights: Vec<f64> = weight_codes.iter().map(|&c| c as f64 * scale).collect();
    let biases: Vec<f64> = bias_codes.iter().map(|&c| c as f64 * scale).collect();
    let dequantized = model.with_parameters(&weights, &biases)?;
    Ok(QuantizedModel {
        weight_bits,
        accumulator_bits,
        scale,
        weight_codes,
        bias_codes,
        model: dequantized,
    })
}

impl QuantizedModel {
    pub fn weight_bits(&self) -> u8 {
        self.weight_bits
    }

    pub fn accumulator_bits(&self) -> u8 {
        self.accumulator_bits
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn weight_codes(&self) -> &[i32] {
        &self.weight_codes
    }

    pub fn bias_codes(&self) -> &[i32] {
        &self.bias_codes
    }

    /// The continuous model with codes mapped back through the scale. This is
    /// what the samplers consume; they never see integer codes directly.
    pub fn dequantize(&self) -> IsingModel {
        self.model.clone()
    }

    /// Integer local-field accumulation for spin `i` in `state`, saturated to
    /// the accumulator's signed range (e.g. `[-64, 63]` for 7 bits).
    pub fn field_code(&self, state: &SpinState, i: usize) -> Result<i32, QuantizeError> {
        if state.len() != self.model.n() {
            return Err(ModelError::DimensionMismatch {
                expected: self.model.n(),
                got: state.len(),
            }
            .into());
        }
        if state.domain() != self.model.domain() {
            return Err(ModelError::DomainMismatch.into());
        }
        if i >= self.model.n() {
            return Err(ModelError::IndexOutOfRange {
                index: i,
                n: self.model.n(),
            }
            .into());
        }
        let mut acc: i64 = self.bias_codes[i] as i64;
        for (k, c) in self.model.couplings().iter().enumerate() {
            let other = if c.i == i {
                c.j
            } else if c.j == i {
                c.i
            } else {
                continue;
            };
            acc += self.weight_codes[k] as i64 * state.value(other) as i64;
        }
        let lo = -(1i64 << (self.accumulator_bits - 1));
        let hi = (1i64 << (self.accumulator_bits - 1)) - 1;
        Ok(acc.clamp(lo, hi) as i32)
    }
}
