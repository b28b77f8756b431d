//! Baseline per-window encoders: three-level polarity frames and the surface
//! of active events.

use crate::error::Result;
use crate::event::{EncodingConfig, Event, EventStream, Polarity, Strategy};
use crate::frame::{EncodedFrame, POLARITY_NEGATIVE, POLARITY_NONE, POLARITY_POSITIVE};

use super::slice::window_event_range;

pub(crate) fn polarity_code(polarity: Polarity) -> u32 {
    match polarity {
        Polarity::Negative => POLARITY_NEGATIVE,
        Polarity::Positive => POLARITY_POSITIVE,
    }
}

/// Rounds 255 * elapsed / delta_t half away from zero, in exact integer
/// arithmetic so outputs are bit-reproducible.
pub(crate) fn sae_value(elapsed_us: u128, delta_t_us: u64) -> u32 {
    let num = 255u128 * elapsed_us;
    let den = delta_t_us as u128;
    let q = num / den;
    let r = num % den;
    (q + u128::from(2 * r >= den)) as u32
}

fn window_frame(
    stream: &EventStream,
    window: u64,
    config: &EncodingConfig,
    strategy: Strategy,
) -> Result<(Vec<u32>, u128)> {
    config.validate()?;
    let origin = config.resolve_origin(stream);
    let start_ts = origin as u128 + window as u128 * config.delta_t_us as u128;
    let range = window_event_range(stream.events(), origin, config.delta_t_us, window);
    let init = match strategy {
        Strategy::Polarity => POLARITY_NONE,
        _ => 0,
    };
    let mut values = vec![init; stream.geometry().pixels()];
    apply_window_events(
        &mut values,
        stream.geometry().width(),
        &stream.events()[range],
        start_ts,
        config.delta_t_us,
        strategy,
    );
    Ok((values, start_ts))
}

/// Overwrites per-pixel values in stream order; because events arrive
/// time-ordered, the surviving value belongs to the latest event, with ties
/// at equal timestamps resolved to the later arrival.
pub(crate) fn apply_window_events(
    values: &mut [u32],
    width: u16,
    events: &[Event],
    window_start_ts: u128,
    delta_t_us: u64,
    strategy: Strategy,
) {
    match strategy {
        Strategy::Polarity => {
            for ev in events {
                values[ev.y as usize * width as usize + ev.x as usize] =
                    polarity_code(ev.polarity);
            }
        }
        Strategy::Sae => {
            for ev in events {
                let elapsed = ev.t as u128 - window_start_ts;
                values[ev.y as usize * width as usize + ev.x as usize] =
                    sae_value(elapsed, delta_t_us);
            }
        }
        Strategy::Tbr => unreachable!("tbr frames are packed from slices"),
    }
}

/// Encodes one window as a three-level polarity frame: pixels with no event
/// stay at the mid level; otherwise the most recent event's polarity decides
/// between the low and high level.
pub fn encode_polarity(
    stream: &EventStream,
    window: u64,
    config: &EncodingConfig,
) -> Result<EncodedFrame> {
    let (values, _) = window_frame(stream, window, config, Strategy::Polarity)?;
    Ok(EncodedFrame {
        geometry: stream.geometry(),
        values,
        strategy: Strategy::Polarity,
        t_start_us: window * config.delta_t_us,
        delta_t_us: config.delta_t_us,
        n_bits: 1,
        slices_present: 1,
    })
}

/// Encodes one window as a surface of active events: each pixel holds the
/// elapsed time of its latest event relative to the window start, scaled by
/// 255/delta_t and rounded half away from zero. Pixels with no event are 0;
/// polarity is discarded.
pub fn encode_sae(
    stream: &EventStream,
    window: u64,
    config: &EncodingConfig,
) -> Result<EncodedFrame> {
    let (values, _) = window_frame(stream, window, config, Strategy::Sae)?;
    Ok(EncodedFrame {
        geometry: stream.geometry(),
        values,
        strategy: Strategy::Sae,
        t_start_us: window * config.delta_t_us,
        delta_t_us: config.delta_t_us,
        n_bits: 1,
        slices_present: 1,
    })
}
