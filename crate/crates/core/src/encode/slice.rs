//! Per-window binarization: an H x W presence bitmap marking pixels that saw
//! at least one event during the accumulation window.

use crate::event::{EncodingConfig, Event, EventStream, SensorGeometry};

/// Packed H x W bitmap, one bit per pixel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitGrid {
    geometry: SensorGeometry,
    words: Vec<u64>,
}

impl BitGrid {
    pub fn new(geometry: SensorGeometry) -> Self {
        let words = (geometry.pixels() + 63) / 64;
        BitGrid {
            geometry,
            words: vec![0; words],
        }
    }

    pub fn geometry(&self) -> SensorGeometry {
        self.geometry
    }

    #[inline]
    pub fn get(&self, x: u16, y: u16) -> bool {
        let idx = self.geometry.index(x, y);
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u16, y: u16) {
        let idx = self.geometry.index(x, y);
        self.words[idx / 64] |= 1 << (idx % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Backing storage size.
    pub fn byte_len(&self) -> usize {
        self.words.len() * 8
    }

    /// Visits the row-major pixel index of every set bit, in increasing order.
    pub fn for_each_set<F: FnMut(usize)>(&self, mut f: F) {
        for (wi, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let tz = bits.trailing_zeros() as usize;
                f(wi * 64 + tz);
                bits &= bits - 1;
            }
        }
    }
}

/// The intermediate binary representation of one accumulation window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySlice {
    pub geometry: SensorGeometry,
    /// Ordinal of the covered window, counted from the stream's origin.
    pub window: u64,
    pub bits: BitGrid,
}

impl BinarySlice {
    pub fn empty(geometry: SensorGeometry, window: u64) -> Self {
        BinarySlice {
            geometry,
            window,
            bits: BitGrid::new(geometry),
        }
    }
}

/// Contiguous range of `events` whose timestamps fall in window `window`.
/// Relies on the stream's non-decreasing timestamp order.
pub(crate) fn window_event_range(
    events: &[Event],
    origin_us: u64,
    delta_t_us: u64,
    window: u64,
) -> std::ops::Range<usize> {
    let start_ts = origin_us as u128 + window as u128 * delta_t_us as u128;
    let end_ts = start_ts + delta_t_us as u128;
    let start = events.partition_point(|e| (e.t as u128) < start_ts);
    let end = events.partition_point(|e| (e.t as u128) < end_ts);
    start..end
}

pub(crate) fn binarize_events(
    geometry: SensorGeometry,
    events: &[Event],
    window: u64,
) -> BinarySlice {
    let mut slice = BinarySlice::empty(geometry, window);
    for ev in events {
        slice.bits.set(ev.x, ev.y);
    }
    slice
}

/// Builds the presence bitmap of one accumulation window: a bit is set iff at
/// least one event of either polarity occurred at that pixel during the
/// window. Multiplicities and polarities are discarded.
pub fn binarize(stream: &EventStream, window: u64, config: &EncodingConfig) -> BinarySlice {
    let origin = config.resolve_origin(stream);
    let range = window_event_range(stream.events(), origin, config.delta_t_us, window);
    binarize_events(stream.geometry(), &stream.events()[range], window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{Polarity, Strategy};

    fn geo(w: u16, h: u16) -> SensorGeometry {
        SensorGeometry::new(w, h).unwrap()
    }

    fn ev(t: u64, x: u16, y: u16, p: i8) -> Event {
        Event::new(t, x, y, Polarity::from_i8(p).unwrap())
    }

    fn config() -> EncodingConfig {
        EncodingConfig::new(Strategy::Tbr, 2500, 8).unwrap()
    }

    #[test]
    fn empty_window_yields_all_zero_slice() {
        let stream = EventStream::new(geo(8, 8), vec![ev(0, 1, 1, 1)]).unwrap();
        let slice = binarize(&stream, 3, &config());
        assert_eq!(slice.bits.count_ones(), 0);
    }

    #[test]
    fn indicator_is_idempotent_across_polarities() {
        let stream = EventStream::new(
            geo(8, 8),
            vec![ev(10, 2, 2, 1), ev(20, 2, 2, -1)],
        )
        .unwrap();
        let slice = binarize(&stream, 0, &config());
        assert_eq!(slice.bits.count_ones(), 1);
        assert!(slice.bits.get(2, 2));
    }

    #[test]
    fn window_membership_matches_brute_force() {
        let stream = EventStream::new(
            geo(8, 8),
            vec![ev(0, 0, 0, 1), ev(2499, 1, 1, -1), ev(2500, 2, 2, 1)],
        )
        .unwrap();
        let slice = binarize(&stream, 0, &config());
        // Brute force: a pixel is set iff some event lands in [0, 2500).
        for y in 0..8u16 {
            for x in 0..8u16 {
                let expected = stream
                    .events()
                    .iter()
                    .any(|e| e.x == x && e.y == y && e.t < 2500);
                assert_eq!(slice.bits.get(x, y), expected, "({x},{y})");
            }
        }
        assert!(slice.bits.get(0, 0) && slice.bits.get(1, 1));
        assert!(!slice.bits.get(2, 2));
    }

    #[test]
    fn bitgrid_set_iteration_visits_every_bit_once() {
        let mut grid = BitGrid::new(geo(13, 5));
        for (x, y) in [(0, 0), (12, 4), (7, 2), (3, 3)] {
            grid.set(x, y);
        }
        let mut seen = Vec::new();
        grid.for_each_set(|idx| seen.push(idx));
        assert_eq!(seen.len(), 4);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }
}
