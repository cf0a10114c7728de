use serde::Serialize;

use crate::error::InverseError;
use crate::geometry::Axis;
use crate::series::TimeSeries;

/// First sample at which a receiver hears the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrivalTime {
    pub receiver_index: usize,
    pub t_arrival: f64,
    pub detection_index: usize,
}

/// Which part of the trace is tested against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrivalChannel {
    Component(Axis),
    /// `||H x nu||_inf`.
    AnyComponent,
}

/// Smallest sampled time with `|H_component| > threshold`.
///
/// A record that does not start at `t = 0` must open on silence, otherwise
/// the onset is not bracketed and the arrival time is unknown.
pub fn detect_arrival(
    series: &TimeSeries,
    channel: ArrivalChannel,
    threshold: f64,
) -> Result<ArrivalTime, InverseError> {
    let magnitude = |k: usize| match channel {
        ArrivalChannel::Component(axis) => series.samples[k].get(axis).abs(),
        ArrivalChannel::AnyComponent => series.samples[k].norm_inf(),
    };
    let k = (0..series.len())
        .find(|&k| magnitude(k) > threshold)
        .ok_or(InverseError::NoSignal { threshold })?;
    if k == 0 && series.grid.t_start > 0.0 {
        return Err(InverseError::OnsetNotBracketed {
            t_start: series.grid.t_start,
        });
    }
    Ok(ArrivalTime {
        receiver_index: series.receiver_index,
        t_arrival: series.grid.time(k),
        detection_index: k,
    })
}
