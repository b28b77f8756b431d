//! Online encoder: accepts events one at a time and emits a frame whenever a
//! window group closes. The emitted sequence is bit-identical to the batch
//! encoder on the same events.

use crate::error::{Error, Result};
use crate::event::{EncodingConfig, Event, SensorGeometry, Strategy, window_index};
use crate::frame::{EncodedFrame, POLARITY_NONE};

use super::baseline::{polarity_code, sae_value};

/// Incremental encoder state for one stream. Single-owner: it may be moved
/// between threads but not shared.
#[derive(Debug)]
pub struct StreamEncoder {
    config: EncodingConfig,
    geometry: SensorGeometry,
    group_len: u64,
    origin: Option<u64>,
    last_t: Option<u64>,
    /// Group currently being accumulated.
    group: u64,
    /// Highest window observed so far.
    last_window: u64,
    values: Vec<u32>,
}

impl StreamEncoder {
    pub fn new(config: EncodingConfig, geometry: SensorGeometry) -> Result<Self> {
        config.validate()?;
        let init = Self::initial_value(config.strategy);
        Ok(StreamEncoder {
            group_len: config.effective_bits() as u64,
            origin: config.t_origin_us,
            last_t: None,
            group: 0,
            last_window: 0,
            values: vec![init; geometry.pixels()],
            config,
            geometry,
        })
    }

    fn initial_value(strategy: Strategy) -> u32 {
        match strategy {
            Strategy::Polarity => POLARITY_NONE,
            _ => 0,
        }
    }

    /// Bytes held by the in-flight window-group accumulator.
    pub fn state_bytes(&self) -> usize {
        self.values.len() * 4
    }

    pub fn config(&self) -> &EncodingConfig {
        &self.config
    }

    /// Feeds the next event. Returns the frames of every window group the
    /// event closed: one frame when it steps into the next group, more when
    /// it jumps across empty groups.
    pub fn push(&mut self, event: Event) -> Result<Vec<EncodedFrame>> {
        if !self.geometry.contains(event.x, event.y) {
            return Err(Error::validation(format!(
                "event ({}, {}) outside sensor {}",
                event.x, event.y, self.geometry
            )));
        }
        if let Some(last) = self.last_t {
            if event.t < last {
                return Err(Error::validation(format!(
                    "out-of-order event: t={} after t={last}",
                    event.t
                )));
            }
        }
        let origin = *self.origin.get_or_insert(event.t);
        let window = window_index(event.t, origin, self.config.delta_t_us)?;
        let group = window / self.group_len;

        let mut emitted = Vec::new();
        while self.group < group {
            emitted.push(self.take_group_frame(self.group_len as u8));
            self.group += 1;
        }

        let idx = self.geometry.index(event.x, event.y);
        match self.config.strategy {
            Strategy::Tbr => {
                // Accumulate assuming a full group; flush() shifts short
                // groups up so the newest slice stays on the high bit.
                self.values[idx] |= 1 << (window - group * self.group_len);
            }
            Strategy::Polarity => {
                self.values[idx] = polarity_code(event.polarity);
            }
            Strategy::Sae => {
                let window_start =
                    origin as u128 + window as u128 * self.config.delta_t_us as u128;
                self.values[idx] = sae_value(event.t as u128 - window_start, self.config.delta_t_us);
            }
        }
        self.last_window = window;
        self.last_t = Some(event.t);
        Ok(emitted)
    }

    /// Emits the pending short group, if any events were pushed since the
    /// last group boundary.
    pub fn flush(mut self) -> Option<EncodedFrame> {
        self.last_t?;
        let observed = (self.last_window - self.group * self.group_len + 1) as u8;
        if self.config.strategy == Strategy::Tbr {
            let shift = self.group_len as u8 - observed;
            if shift > 0 {
                for v in &mut self.values {
                    *v <<= shift;
                }
            }
        }
        Some(self.take_group_frame(observed))
    }

    fn take_group_frame(&mut self, slices_present: u8) -> EncodedFrame {
        let init = Self::initial_value(self.config.strategy);
        let values = std::mem::replace(&mut self.values, vec![init; self.geometry.pixels()]);
        let frame = EncodedFrame {
            geometry: self.geometry,
            values,
            strategy: self.config.strategy,
            t_start_us: self.group * self.group_len * self.config.delta_t_us,
            delta_t_us: self.config.delta_t_us,
            n_bits: self.group_len as u8,
            slices_present,
        };
        frame
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Polarity;

    fn geo(w: u16, h: u16) -> SensorGeometry {
        SensorGeometry::new(w, h).unwrap()
    }

    fn ev(t: u64, x: u16, y: u16, p: i8) -> Event {
        Event::new(t, x, y, Polarity::from_i8(p).unwrap())
    }

    fn tbr_config() -> EncodingConfig {
        EncodingConfig::new(Strategy::Tbr, 2500, 8).unwrap()
    }

    #[test]
    fn frame_is_emitted_on_group_boundary() {
        let mut enc = StreamEncoder::new(tbr_config(), geo(8, 8)).unwrap();
        for w in 0..8u64 {
            assert!(enc.push(ev(w * 2500, 1, 1, 1)).unwrap().is_empty());
        }
        // First event of window 8 closes group 0.
        let frames = enc.push(ev(8 * 2500, 2, 2, 1)).unwrap();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].values[geo(8, 8).index(1, 1)], 255);
        assert_eq!(frames[0].slices_present, 8);
    }

    #[test]
    fn flush_reports_short_group_length() {
        let mut enc = StreamEncoder::new(tbr_config(), geo(8, 8)).unwrap();
        for w in 0..3u64 {
            enc.push(ev(w * 2500, 1, 1, 1)).unwrap();
        }
        let frame = enc.flush().unwrap();
        assert_eq!(frame.slices_present, 3);
        // Newest of the three observed windows sits on bit 7.
        assert_eq!(frame.values[geo(8, 8).index(1, 1)], 0b1110_0000);
    }

    #[test]
    fn flush_without_events_emits_nothing() {
        let enc = StreamEncoder::new(tbr_config(), geo(8, 8)).unwrap();
        assert!(enc.flush().is_none());
    }

    #[test]
    fn out_of_order_push_is_rejected_with_timestamp() {
        let mut enc = StreamEncoder::new(tbr_config(), geo(8, 8)).unwrap();
        enc.push(ev(100, 1, 1, 1)).unwrap();
        let err = enc.push(ev(99, 1, 1, 1)).unwrap_err();
        assert!(err.to_string().contains("t=99"));
    }

    #[test]
    fn group_jumps_emit_empty_frames() {
        let mut enc = StreamEncoder::new(tbr_config(), geo(8, 8)).unwrap();
        enc.push(ev(0, 1, 1, 1)).unwrap();
        // Window 24 lives in group 3: groups 0, 1 and 2 close at once.
        let frames = enc.push(ev(24 * 2500, 2, 2, 1)).unwrap();
        assert_eq!(frames.len(), 3);
        assert!(frames[0].values.iter().any(|&v| v != 0));
        assert!(frames[1].values.iter().all(|&v| v == 0));
        assert!(frames[2].values.iter().all(|&v| v == 0));
        assert_eq!(frames[1].slices_present, 8);
    }

    #[test]
    fn out_of_bounds_event_is_rejected() {
        let mut enc = StreamEncoder::new(tbr_config(), geo(8, 8)).unwrap();
        assert!(enc.push(ev(0, 8, 0, 1)).is_err());
    }
}
