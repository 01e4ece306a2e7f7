//! Sampling engines (asynchronous event-driven and synchronous Gibbs),
//! per-neuron hardware parameters, traces, and calibration.

pub mod calibrate;
pub mod engine;
pub mod params;
pub mod sync;
pub mod trace;

pub use calibrate::{corrected_params, fit_sigmoid, sweep_activation, CalibrationError, SigmoidFit};
pub use engine::{
    run_async, run_async_visit, AsyncConfig, EventVisitor, InitPolicy, RunSummary, SamplerError,
    StopRule,
};
pub use params::{ideal_params, make_varied_params, Clamp, NeuronParams, ParamError, VariationSpec};
pub use sync::{run_sync, run_sync_visit, SyncConfig, SyncLength, SyncVisitor};
pub use trace::{Event, EventTrace, SnapshotTrace, TraceError, TraceMeta};

use crate::sampler::trace::pack_values;

/// Emulates the on-chip sampling clock over a finished event trace.
///
/// With `rows = None` the full state is captured at times `k / rate` for
/// `k = 0, 1, ...` up to the trace's final time (an empty trace yields the
/// single time-zero snapshot). With `rows = Some(k)` the spins are split
/// into `k` contiguous groups scanned round-robin, one group per tick;
/// assembled snapshots are emitted every `k` ticks, so each spin is
/// effectively sampled at `rate / k`, and rows within one snapshot come from
/// different ticks exactly as a scanned readout would produce them.
pub fn sample_clock(
    trace: &EventTrace,
    rate: f64,
    rows: Option<usize>,
) -> Result<SnapshotTrace, TraceError> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(TraceError::BadRate(rate));
    }
    let n = trace.n();
    let domain = trace.domain();
    let period = 1.0 / rate;
    let ticks = (trace.final_time() / period + 1e-9).floor() as u64 + 1;

    let mut values = trace.initial().values().to_vec();
    let mut events = trace.events().iter().peekable();
    let mut advance_to = |t: f64, values: &mut Vec<i8>| {
        while let Some(e) = events.peek() {
            if e.time <= t {
                values[e.neuron as usize] = e.value;
                events.next();
            } else {
                break;
            }
        }
    };

    match rows {
        None => {
            let mut snap = SnapshotTrace::new(domain, n, 0.0, period);
            for k in 0..ticks {
                advance_to(k as f64 * period, &mut values);
                snap.push_packed(pack_values(&values, domain));
            }
            Ok(snap)
        }
        Some(k) => {
            if k == 0 || k > n {
                return Err(TraceError::BadRowCount(k));
            }
            let block = n.div_ceil(k);
            let mut snap =
                SnapshotTrace::new(domain, n, (k as f64 - 1.0) * period, k as f64 * period);
            let mut assembly = vec![domain.down(); n];
            for m in 0..ticks {
                advance_to(m as f64 * period, &mut values);
                let g = (m % k as u64) as usize;
                let lo = (g * block).min(n);
                let hi = ((g + 1) * block).min(n);
                assembly[lo..hi].copy_from_slice(&values[lo..hi]);
                if g == k - 1 {
                    snap.push_packed(pack_values(&assembly, domain));
                }
            }
            Ok(snap)
        }
    }
}
