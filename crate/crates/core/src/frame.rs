//! Synchronous frame types produced by the encoders.

use crate::error::{Error, Result};
use crate::event::{SensorGeometry, Strategy};

/// Integer code for a pixel whose most recent event had negative polarity.
pub const POLARITY_NEGATIVE: u32 = 0;
/// Integer code for a pixel with no event in the window (level 0.5).
pub const POLARITY_NONE: u32 = 1;
/// Integer code for a pixel whose most recent event had positive polarity.
pub const POLARITY_POSITIVE: u32 = 2;

/// One encoded frame: an H x W grid of pixel codes plus the metadata needed
/// to interpret and serialize it.
///
/// `t_start_us` is the start of the covered window group, measured from the
/// stream's window origin. Keeping it origin-relative makes encodings of the
/// same motion identical regardless of absolute recording time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedFrame {
    pub geometry: SensorGeometry,
    /// Row-major pixel values.
    pub values: Vec<u32>,
    pub strategy: Strategy,
    /// Start of the covered window group, relative to the window origin.
    pub t_start_us: u64,
    /// Accumulation time of one window, in microseconds.
    pub delta_t_us: u64,
    /// Binary slices per frame: the configured N for TBR, 1 for baselines.
    pub n_bits: u8,
    /// Number of observed (non-padded) windows in this frame. Always in
    /// [1, n_bits]; equals 1 for the baseline strategies.
    pub slices_present: u8,
}

/// Largest pixel value a strategy can produce.
pub fn max_value(strategy: Strategy, n_bits: u8) -> u32 {
    match strategy {
        Strategy::Tbr => (((1u64) << n_bits) - 1) as u32,
        Strategy::Polarity => POLARITY_POSITIVE,
        Strategy::Sae => 255,
    }
}

impl EncodedFrame {
    /// Builds a frame, checking shape and value-range invariants.
    pub fn new(
        geometry: SensorGeometry,
        values: Vec<u32>,
        strategy: Strategy,
        t_start_us: u64,
        delta_t_us: u64,
        n_bits: u8,
        slices_present: u8,
    ) -> Result<Self> {
        if values.len() != geometry.pixels() {
            return Err(Error::validation(format!(
                "frame has {} values for geometry {geometry}",
                values.len()
            )));
        }
        if n_bits == 0 || n_bits > 32 {
            return Err(Error::validation(format!(
                "n_bits must be in 1..=32, got {n_bits}"
            )));
        }
        let expected_slices = match strategy {
            Strategy::Tbr => 1..=n_bits,
            Strategy::Polarity | Strategy::Sae => 1..=1,
        };
        if !expected_slices.contains(&slices_present) {
            return Err(Error::validation(format!(
                "slices_present {slices_present} out of range for {strategy} with {n_bits} bits"
            )));
        }
        let max = max_value(strategy, n_bits);
        if let Some(v) = values.iter().find(|&&v| v > max) {
            return Err(Error::validation(format!(
                "pixel value {v} exceeds {strategy} maximum {max}"
            )));
        }
        Ok(EncodedFrame {
            geometry,
            values,
            strategy,
            t_start_us,
            delta_t_us,
            n_bits,
            slices_present,
        })
    }

    #[inline]
    pub fn get(&self, x: u16, y: u16) -> u32 {
        self.values[self.geometry.index(x, y)]
    }

    /// Largest value this frame's strategy can produce.
    pub fn max_value(&self) -> u32 {
        max_value(self.strategy, self.n_bits)
    }

    /// Temporal extent covered by this frame, in microseconds.
    pub fn span_us(&self) -> u64 {
        self.delta_t_us * self.n_bits as u64
    }
}

/// Presentation level of a polarity code: 0, 0.5 or 1.
pub fn polarity_level(code: u32) -> Result<f32> {
    match code {
        POLARITY_NEGATIVE => Ok(0.0),
        POLARITY_NONE => Ok(0.5),
        POLARITY_POSITIVE => Ok(1.0),
        _ => Err(Error::validation(format!("invalid polarity code {code}"))),
    }
}

/// 8-bit export level of a polarity code: 0, 128 or 255.
pub fn polarity_export_byte(code: u32) -> Result<u8> {
    match code {
        POLARITY_NEGATIVE => Ok(0),
        POLARITY_NONE => Ok(128),
        POLARITY_POSITIVE => Ok(255),
        _ => Err(Error::validation(format!("invalid polarity code {code}"))),
    }
}

/// A frame mapped into real-valued space by one of the normalization ops.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFrame {
    pub geometry: SensorGeometry,
    /// Row-major normalized values.
    pub values: Vec<f32>,
}
