//! Core domain types: events, sensor geometry, event streams and the
//! encoding configuration shared by every encoder.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sign of the illumination change that triggered an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Illumination decrease, serialized as -1.
    Negative,
    /// Illumination increase, serialized as +1.
    Positive,
}

impl Polarity {
    /// Maps the wire values -1/+1; anything else is rejected.
    pub fn from_i8(value: i8) -> Option<Self> {
        match value {
            -1 => Some(Polarity::Negative),
            1 => Some(Polarity::Positive),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Polarity::Negative => -1,
            Polarity::Positive => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarity::Negative => Polarity::Positive,
            Polarity::Positive => Polarity::Negative,
        }
    }
}

/// A single camera event: timestamp in microseconds, pixel coordinates and
/// polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    /// Timestamp in microseconds.
    pub t: u64,
    /// Column index, 0-based.
    pub x: u16,
    /// Row index, 0-based.
    pub y: u16,
    pub polarity: Polarity,
}

impl Event {
    pub fn new(t: u64, x: u16, y: u16, polarity: Polarity) -> Self {
        Event { t, x, y, polarity }
    }
}

/// Sensor dimensions in pixels. Both axes are at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SensorGeometry {
    width: u16,
    height: u16,
}

impl SensorGeometry {
    pub fn new(width: u16, height: u16) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::validation(format!(
                "sensor geometry must be at least 1x1, got {width}x{height}"
            )));
        }
        Ok(SensorGeometry { width, height })
    }

    pub fn width(&self) -> u16 {
        self.width
    }

    pub fn height(&self) -> u16 {
        self.height
    }

    /// Total pixel count.
    pub fn pixels(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Row-major index of (x, y).
    #[inline]
    pub fn index(&self, x: u16, y: u16) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn contains(&self, x: u16, y: u16) -> bool {
        x < self.width && y < self.height
    }
}

impl fmt::Display for SensorGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// A time-ordered sequence of events with the geometry of the sensor that
/// produced them.
///
/// Invariants: timestamps are non-decreasing (equal timestamps allowed) and
/// every event lies within the geometry. Instances are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventStream {
    geometry: SensorGeometry,
    events: Vec<Event>,
}

/// A single invariant violation found by [`validate_stream`], with the index
/// of the offending event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonMonotonicTimestamp,
    XOutOfBounds,
    YOutOfBounds,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::NonMonotonicTimestamp => {
                write!(f, "non-monotonic at index {}", self.index)
            }
            ViolationKind::XOutOfBounds => write!(f, "x out of bounds at index {}", self.index),
            ViolationKind::YOutOfBounds => write!(f, "y out of bounds at index {}", self.index),
        }
    }
}

/// Checks every stream invariant and reports each violation with the index of
/// the offending event. An empty result means the stream is valid.
pub fn validate_stream(stream: &EventStream) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut prev_t = None;
    for (index, ev) in stream.events.iter().enumerate() {
        if let Some(prev) = prev_t {
            if ev.t < prev {
                violations.push(Violation {
                    index,
                    kind: ViolationKind::NonMonotonicTimestamp,
                });
            }
        }
        prev_t = Some(ev.t);
        if ev.x >= stream.geometry.width() {
            violations.push(Violation {
                index,
                kind: ViolationKind::XOutOfBounds,
            });
        }
        if ev.y >= stream.geometry.height() {
            violations.push(Violation {
                index,
                kind: ViolationKind::YOutOfBounds,
            });
        }
    }
    violations
}

impl EventStream {
    /// Builds a stream after checking every invariant. The first violation is
    /// reported as a validation error.
    pub fn new(geometry: SensorGeometry, events: Vec<Event>) -> Result<Self> {
        let stream = EventStream { geometry, events };
        match validate_stream(&stream).first() {
            None => Ok(stream),
            Some(v) => Err(Error::validation(v.to_string())),
        }
    }

    /// Builds a stream without validating. Intended for tests and for callers
    /// that have already established the invariants.
    pub fn from_parts_unchecked(geometry: SensorGeometry, events: Vec<Event>) -> Self {
        EventStream { geometry, events }
    }

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }
}

/// Frame encoding strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Temporal binary representation: N presence bitmaps packed into one
    /// frame, newest window in the most significant bit.
    Tbr,
    /// Three-level frame from the most recent event polarity per pixel.
    Polarity,
    /// Surface of active events: elapsed time of the latest event per pixel,
    /// scaled to [0, 255].
    Sae,
}

impl Strategy {
    /// Wire code used by the EFR container.
    pub fn code(self) -> u8 {
        match self {
            Strategy::Tbr => 0,
            Strategy::Polarity => 1,
            Strategy::Sae => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Strategy::Tbr),
            1 => Some(Strategy::Polarity),
            2 => Some(Strategy::Sae),
            _ => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Strategy::Tbr => "tbr",
            Strategy::Polarity => "polarity",
            Strategy::Sae => "sae",
        };
        f.write_str(name)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tbr" => Ok(Strategy::Tbr),
            "polarity" => Ok(Strategy::Polarity),
            "sae" => Ok(Strategy::Sae),
            _ => Err(Error::validation(format!("unknown strategy '{s}'"))),
        }
    }
}

/// Parameters shared by all encoders.
///
/// `t_origin_us` anchors window 0; when absent, the first event's timestamp
/// is used so recordings with large absolute-time offsets encode identically
/// to zero-based ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingConfig {
    /// Accumulation time of one window, in microseconds. At least 1.
    pub delta_t_us: u64,
    /// Number of binary slices packed into one TBR frame, 1..=32. Ignored by
    /// the baseline strategies, which always use 1.
    pub n_bits: u8,
    pub strategy: Strategy,
    pub t_origin_us: Option<u64>,
}

impl EncodingConfig {
    pub fn new(strategy: Strategy, delta_t_us: u64, n_bits: u8) -> Result<Self> {
        let config = EncodingConfig {
            delta_t_us,
            n_bits,
            strategy,
            t_origin_us: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_origin(mut self, t_origin_us: u64) -> Self {
        self.t_origin_us = Some(t_origin_us);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta_t_us == 0 {
            return Err(Error::validation("delta_t_us must be at least 1"));
        }
        if self.n_bits == 0 || self.n_bits > 32 {
            return Err(Error::validation(format!(
                "n_bits must be in 1..=32, got {}",
                self.n_bits
            )));
        }
        Ok(())
    }

    /// Slices per frame after strategy adjustment: `n_bits` for TBR, 1 for
    /// the baselines.
    pub fn effective_bits(&self) -> u8 {
        match self.strategy {
            Strategy::Tbr => self.n_bits,
            Strategy::Polarity | Strategy::Sae => 1,
        }
    }

    /// Resolves the window origin for a stream, defaulting to the first
    /// event's timestamp.
    pub fn resolve_origin(&self, stream: &EventStream) -> u64 {
        self.t_origin_us
            .unwrap_or_else(|| stream.events().first().map(|e| e.t).unwrap_or(0))
    }
}

/// Ordinal of the half-open accumulation window [origin + w*dt, origin + (w+1)*dt)
/// containing `t`.
pub fn window_index(t: u64, t_origin_us: u64, delta_t_us: u64) -> Result<u64> {
    if delta_t_us == 0 {
        return Err(Error::validation("delta_t_us must be at least 1"));
    }
    if t < t_origin_us {
        return Err(Error::validation(format!(
            "event precedes origin: t={t} < origin={t_origin_us}"
        )));
    }
    Ok((t - t_origin_us) / delta_t_us)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(w: u16, h: u16) -> SensorGeometry {
        SensorGeometry::new(w, h).unwrap()
    }

    fn ev(t: u64, x: u16, y: u16, p: i8) -> Event {
        Event::new(t, x, y, Polarity::from_i8(p).unwrap())
    }

    #[test]
    fn empty_stream_is_valid() {
        let stream = EventStream::from_parts_unchecked(geo(128, 128), vec![]);
        assert!(validate_stream(&stream).is_empty());
    }

    #[test]
    fn decreasing_timestamps_are_reported() {
        let stream = EventStream::from_parts_unchecked(
            geo(128, 128),
            vec![ev(5, 0, 0, 1), ev(3, 0, 0, 1)],
        );
        let violations = validate_stream(&stream);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].to_string(), "non-monotonic at index 1");
    }

    #[test]
    fn coordinate_bounds_are_exclusive() {
        let stream =
            EventStream::from_parts_unchecked(geo(128, 128), vec![ev(0, 128, 0, 1)]);
        let violations = validate_stream(&stream);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].to_string(), "x out of bounds at index 0");
    }

    #[test]
    fn equal_timestamps_are_permitted() {
        let stream = EventStream::from_parts_unchecked(
            geo(4, 4),
            vec![ev(7, 0, 0, 1), ev(7, 1, 1, -1)],
        );
        assert!(validate_stream(&stream).is_empty());
    }

    #[test]
    fn window_index_examples() {
        assert_eq!(window_index(0, 0, 2500).unwrap(), 0);
        // Half-open boundary: the window-end timestamp belongs to the next window.
        assert_eq!(window_index(2500, 0, 2500).unwrap(), 1);
        assert_eq!(window_index(19999, 0, 2500).unwrap(), 7);
    }

    #[test]
    fn window_index_matches_interval_membership_over_microsecond_grid() {
        // Independent oracle: find the window whose half-open interval contains t
        // by direct comparison instead of division.
        let delta = 2500u64;
        let mut w = 0u64;
        for t in 0..30_000u64 {
            while (w + 1) * delta <= t {
                w += 1;
            }
            assert!(w * delta <= t && t < (w + 1) * delta);
            assert_eq!(window_index(t, 0, delta).unwrap(), w, "t={t}");
        }
    }

    #[test]
    fn event_before_origin_is_rejected() {
        let err = window_index(10, 100, 2500).unwrap_err();
        assert!(err.to_string().contains("event precedes origin"));
    }

    #[test]
    fn polarity_accepts_only_unit_values() {
        assert_eq!(Polarity::from_i8(-1), Some(Polarity::Negative));
        assert_eq!(Polarity::from_i8(1), Some(Polarity::Positive));
        assert_eq!(Polarity::from_i8(0), None);
        assert_eq!(Polarity::from_i8(2), None);
    }

    #[test]
    fn zero_area_geometry_is_rejected() {
        assert!(SensorGeometry::new(0, 128).is_err());
        assert!(SensorGeometry::new(128, 0).is_err());
    }

    #[test]
    fn baseline_strategies_force_single_slice() {
        let config = EncodingConfig::new(Strategy::Polarity, 2500, 8).unwrap();
        assert_eq!(config.effective_bits(), 1);
        let config = EncodingConfig::new(Strategy::Tbr, 2500, 8).unwrap();
        assert_eq!(config.effective_bits(), 8);
    }

    #[test]
    fn config_rejects_out_of_range_bits() {
        assert!(EncodingConfig::new(Strategy::Tbr, 2500, 0).is_err());
        assert!(EncodingConfig::new(Strategy::Tbr, 2500, 33).is_err());
        assert!(EncodingConfig::new(Strategy::Tbr, 0, 8).is_err());
        assert!(EncodingConfig::new(Strategy::Tbr, 2500, 32).is_ok());
    }
}
