//! Lossless bit-packing of binary slices into a single frame and back.
//!
//! A group of up to N consecutive slices collapses into one frame by reading
//! each pixel's presence history as an N-bit number whose most significant
//! bit is the most recent window. A short final group keeps that convention:
//! the newest slice still lands on bit N-1 and the never-observed windows pad
//! the low bits with zeros.

use crate::error::{Error, Result};
use crate::event::{EncodingConfig, Strategy};
use crate::frame::{EncodedFrame, NormalizedFrame};

use super::slice::{BinarySlice, BitGrid};

/// Packs 1..=N consecutive slices (oldest first) into one TBR frame.
pub fn encode_tbr(slices: &[BinarySlice], config: &EncodingConfig) -> Result<EncodedFrame> {
    config.validate()?;
    let n_bits = config.effective_bits();
    if config.strategy != Strategy::Tbr {
        return Err(Error::validation(format!(
            "encode_tbr requires the tbr strategy, got {}",
            config.strategy
        )));
    }
    if slices.is_empty() {
        return Err(Error::validation("cannot encode an empty slice group"));
    }
    if slices.len() > n_bits as usize {
        return Err(Error::validation(format!(
            "group of {} slices exceeds {} bits per frame",
            slices.len(),
            n_bits
        )));
    }
    let geometry = slices[0].geometry;
    let base_window = slices[0].window;
    for (j, slice) in slices.iter().enumerate() {
        if slice.geometry != geometry {
            return Err(Error::validation(format!(
                "mismatched slice geometry: {} vs {geometry}",
                slice.geometry
            )));
        }
        if slice.window != base_window + j as u64 {
            return Err(Error::validation(format!(
                "slices are not consecutive: expected window {}, got {}",
                base_window + j as u64,
                slice.window
            )));
        }
    }

    let k = slices.len();
    let mut values = vec![0u32; geometry.pixels()];
    for (j, slice) in slices.iter().enumerate() {
        // Oldest-first index j maps to bit N-k+j so the newest slice always
        // occupies bit N-1, including in short groups.
        let bit = 1u32 << (n_bits as usize - k + j);
        slice.bits.for_each_set(|idx| values[idx] |= bit);
    }

    Ok(EncodedFrame {
        geometry,
        values,
        strategy: Strategy::Tbr,
        t_start_us: base_window * config.delta_t_us,
        delta_t_us: config.delta_t_us,
        n_bits,
        slices_present: k as u8,
    })
}

/// Recovers the observed binary slices of a TBR frame, oldest first.
///
/// Full groups return all N slices; a short group returns its
/// `slices_present` observed slices (the padded low bits carry no windows).
pub fn decode_tbr(frame: &EncodedFrame) -> Result<Vec<BinarySlice>> {
    if frame.strategy != Strategy::Tbr {
        return Err(Error::validation(format!(
            "cannot decode a {} frame as tbr",
            frame.strategy
        )));
    }
    let n_bits = frame.n_bits as usize;
    let k = frame.slices_present as usize;
    let base_window = frame.t_start_us / frame.delta_t_us;

    let mut slices: Vec<BinarySlice> = (0..k)
        .map(|j| BinarySlice {
            geometry: frame.geometry,
            window: base_window + j as u64,
            bits: BitGrid::new(frame.geometry),
        })
        .collect();

    let width = frame.geometry.width();
    for y in 0..frame.geometry.height() {
        for x in 0..width {
            let value = frame.values[frame.geometry.index(x, y)];
            for (j, slice) in slices.iter_mut().enumerate() {
                if value >> (n_bits - k + j) & 1 == 1 {
                    slice.bits.set(x, y);
                }
            }
        }
    }
    Ok(slices)
}

/// Maps TBR pixel values into [0, 1] by dividing by the largest encodable
/// value, 2^N - 1.
pub fn normalize_tbr(frame: &EncodedFrame) -> Result<NormalizedFrame> {
    if frame.strategy != Strategy::Tbr {
        return Err(Error::validation(format!(
            "cannot normalize a {} frame as tbr",
            frame.strategy
        )));
    }
    let max = frame.max_value() as f64;
    let values = frame
        .values
        .iter()
        .map(|&v| (v as f64 / max) as f32)
        .collect();
    Ok(NormalizedFrame {
        geometry: frame.geometry,
        values,
    })
}
