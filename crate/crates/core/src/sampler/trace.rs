//! Event traces, snapshot traces, and their text serializations.

use crate::model::{ModelError, SpinDomain, SpinState};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("sampling rate must be positive and finite, got {0}")]
    BadRate(f64),
    #[error("row-interleave group count must satisfy 1 <= k <= n, got {0}")]
    BadRowCount(usize),
    #[error("trace line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing or wrong trace format line")]
    BadMagic,
    #[error("missing header field `{0}`")]
    MissingField(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One state change: spin `neuron` took `value` at `time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub neuron: u32,
    pub value: i8,
}

/// Run settings recorded alongside a trace so files are self-describing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceMeta {
    pub lambda0: f64,
    pub seed: u64,
    pub tau_circ: f64,
}

/// Full record of an asynchronous run: initial state plus every flip.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTrace {
    meta: TraceMeta,
    initial: SpinState,
    events: Vec<Event>,
    final_time: f64,
}

impl EventTrace {
    pub fn new(meta: TraceMeta, initial: SpinState, events: Vec<Event>, final_time: f64) -> Self {
        debug_assert!(events.windows(2).all(|w| w[0].time <= w[1].time));
        EventTrace {
            meta,
            initial,
            events,
            final_time,
        }
    }

    pub fn meta(&self) -> &TraceMeta {
        &self.meta
    }

    pub fn n(&self) -> usize {
        self.initial.len()
    }

    pub fn domain(&self) -> SpinDomain {
        self.initial.domain()
    }

    pub fn initial(&self) -> &SpinState {
        &self.initial
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// State after applying all events with `event.time <= t`.
    pub fn state_at(&self, t: f64) -> SpinState {
        let mut s = self.initial.clone();
        for e in &self.events {
            if e.time > t {
                break;
            }
            s.set(e.neuron as usize, e.value).expect("trace events are valid");
        }
        s
    }

    pub fn final_state(&self) -> SpinState {
        self.state_at(f64::INFINITY)
    }

    /// Completed holding times of one neuron: intervals between its
    /// consecutive flips. The first interval starts at time zero; the
    /// censored interval after the last flip is excluded.
    pub fn holding_times(&self, neuron: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let mut last = 0.0f64;
        for e in &self.events {
            if e.neuron as usize == neuron {
                out.push(e.time - last);
                last = e.time;
            }
        }
        out
    }

    /// Serializes to the columnar text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# pbit-trace v1\n");
        out.push_str(&format!("# n {}\n", self.n()));
        out.push_str(match self.domain() {
            SpinDomain::PlusMinus => "# domain plusminus\n",
            SpinDomain::ZeroOne => "# domain zeroone\n",
        });
        out.push_str(&format!("# lambda0 {}\n", self.meta.lambda0));
        out.push_str(&format!("# seed {}\n", self.meta.seed));
        out.push_str(&format!("# tau_circ {}\n", self.meta.tau_circ));
        out.push_str(&format!("# final_time {}\n", self.final_time));
        out.push_str("# initial ");
        for i in 0..self.n() {
            out.push(if self.initial.is_up(i) { '1' } else { '0' });
        }
        out.push('\n');
        out.push_str("time neuron value\n");
        for e in &self.events {
            out.push_str(&format!("{} {} {}\n", e.time, e.neuron, e.value));
        }
        out
    }

    /// Parses the format written by [`EventTrace::to_text`].
    pub fn parse(text: &str) -> Result<EventTrace, TraceError> {
        let mut n: Option<usize> = None;
        let mut domain: Option<SpinDomain> = None;
        let mut lambda0: Option<f64> = None;
        let mut seed: Option<u64> = None;
        let mut tau_circ: Option<f64> = None;
        let mut final_time: Option<f64> = None;
        let mut initial_bits: Option<Vec<bool>> = None;
        let mut events = Vec::new();
        let mut saw_magic = false;
        let mut saw_columns = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            if let Some(rest) = t.strip_prefix('#') {
                let rest = rest.trim();
                if rest == "pbit-trace v1" {
                    saw_magic = true;
                } else if let Some(v) = rest.strip_prefix("n ") {
                    n = Some(parse_tok(v, line, "spin count")?);
                } else if let Some(v) = rest.strip_prefix("domain ") {
                    domain = Some(match v.trim() {
                        "plusminus" => SpinDomain::PlusMinus,
                        "zeroone" => SpinDomain::ZeroOne,
                        other => {
                            return Err(TraceError::Malformed {
                                line,
                                msg: format!("unknown domain {other:?}"),
                            })
                        }
                    });
                } else if let Some(v) = rest.strip_prefix("lambda0 ") {
                    lambda0 = Some(parse_tok(v, line, "lambda0")?);
                } else if let Some(v) = rest.strip_prefix("seed ") {
                    seed = Some(parse_tok(v, line, "seed")?);
                } else if let Some(v) = rest.strip_prefix("tau_circ ") {
                    tau_circ = Some(parse_tok(v, line, "tau_circ")?);
                } else if let Some(v) = rest.strip_prefix("final_time ") {
                    final_time = Some(parse_tok(v, line, "final_time")?);
                } else if let Some(v) = rest.strip_prefix("initial ") {
                    let mut bits = Vec::with_capacity(v.len());
                    for ch in v.trim().chars() {
                        match ch {
                            '0' => bits.push(false),
                            '1' => bits.push(true),
                            other => {
                                return Err(TraceError::Malformed {
                                    line,
                                    msg: format!("bad initial-state bit {other:?}"),
                                })
                            }
                        }
                    }
                    initial_bits = Some(bits);
                }
                continue;
            }
            if t == "time neuron value" {
                saw_columns = true;
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(TraceError::Malformed {
                    line,
                    msg: format!("expected `time neuron value`, got {t:?}"),
                });
            }
            events.push(Event {
                time: parse_tok(toks[0], line, "time")?,
                neuron: parse_tok(toks[1], line, "neuron index")?,
                value: parse_tok(toks[2], line, "spin value")?,
            });
        }

        if !saw_magic || !saw_columns {
            return Err(TraceError::BadMagic);
        }
        let n = n.ok_or(TraceError::MissingField("n"))?;
        let domain = domain.ok_or(TraceError::MissingField("domain"))?;
        let bits = initial_bits.ok_or(TraceError::MissingField("initial"))?;
        if bits.len() != n {
            return Err(TraceError::Malformed {
                line: 0,
                msg: format!("initial state has {} bits, expected {n}", bits.len()),
            });
        }
        let initial = SpinState::new(
            domain,
            bits.iter()
                .map(|&b| if b { domain.up() } else { domain.down() })
                .collect(),
        )?;
        let meta = TraceMeta {
            lambda0: lambda0.ok_or(TraceError::MissingField("lambda0"))?,
            seed: seed.ok_or(TraceError::MissingField("seed"))?,
            tau_circ: tau_circ.ok_or(TraceError::MissingField("tau_circ"))?,
        };
        let final_time = final_time.ok_or(TraceError::MissingField("final_time"))?;
        Ok(EventTrace::new(meta, initial, events, final_time))
    }
}

fn parse_tok<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, TraceError> {
    tok.trim().parse().map_err(|_| TraceError::Malformed {
        line,
        msg: format!("cannot parse {what} from {tok:?}"),
    })
}

pub(crate) fn pack_values(values: &[i8], domain: SpinDomain) -> Vec<u64> {
    let mut words = vec![0u64; values.len().div_ceil(64)];
    for (i, &v) in values.iter().enumerate() {
        if v == domain.up() {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// Evenly spaced snapshots of a state vector, packed one bit per spin.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTrace {
    domain: SpinDomain,
    n: usize,
    /// Time of the first snapshot.
    first_time: f64,
    /// Spacing between snapshots.
    period: f64,
    states: Vec<Vec<u64>>,
}

impl SnapshotTrace {
    pub fn new(domain: SpinDomain, n: usize, first_time: f64, period: f64) -> Self {
        SnapshotTrace {
            domain,
            n,
            first_time,
            period,
            states: Vec::new(),
        }
    }

    pub fn push(&mut self, state: &SpinState) {
        debug_assert_eq!(state.len(), self.n);
        self.states.push(state.packed());
    }

    pub(crate) fn push_packed(&mut self, words: Vec<u64>) {
        self.states.push(words);
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> SpinDomain {
        self.domain
    }

    pub fn first_time(&self) -> f64 {
        self.first_time
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn time_of(&self, k: usize) -> f64 {
        self.first_time + self.period * k as f64
    }

    pub fn state(&self, k: usize) -> SpinState {
        let words = &self.states[k];
        let values = (0..self.n)
            .map(|i| {
                if words[i / 64] >> (i % 64) & 1 == 1 {
                    self.domain.up()
                } else {
                    self.domain.down()
                }
            })
            .collect();
        SpinState::new(self.domain, values).expect("packed state is valid")
    }

    /// Snapshot `k` as raw packed bits (bit `i` set = spin `i` up), the
    /// cheap form for hashing states into occupancy tables.
    pub fn packed(&self, k: usize) -> &[u64] {
        &self.states[k]
    }

    /// Fraction of snapshots in which each spin is up.
    pub fn marginals(&self) -> Vec<f64> {
        let mut counts = vec![0u64; self.n];
        for words in &self.states {
            for (i, c) in counts.iter_mut().enumerate() {
                *c += words[i / 64] >> (i % 64) & 1;
            }
        }
        let total = self.states.len().max(1) as f64;
        counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Serializes to the snapshot text format: one row per sample holding the
    /// sample index and the packed bit string (spin 0 first).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# pbit-snapshots v1\n");
        out.push_str(&format!("# n {}\n", self.n));
        out.push_str(match self.domain {
            SpinDomain::PlusMinus => "# domain plusminus\n",
            SpinDomain::ZeroOne => "# domain zeroone\n",
        });
        out.push_str(&format!("# first_time {}\n", self.first_time));
        out.push_str(&format!("# period {}\n", self.period));
        out.push_str("sample_index state\n");
        for (k, words) in self.states.iter().enumerate() {
            out.push_str(&format!("{k} "));
            for i in 0..self.n {
                out.push(if words[i / 64] >> (i % 64) & 1 == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> TraceMeta {
        TraceMeta {
            lambda0: 1.5e8,
            seed: 42,
            tau_circ: 0.0,
        }
    }

    fn toy_trace() -> EventTrace {
        let initial = SpinState::new(SpinDomain::ZeroOne, vec![0, 1]).unwrap();
        let events = vec![
            Event { time: 0.5, neuron: 0, value: 1 },
            Event { time: 1.25, neuron: 1, value: 0 },
            Event { time: 1.5, neuron: 0, value: 0 },
        ];
        EventTrace::new(meta(), initial, events, 2.0)
    }

    #[test]
    fn state_at_applies_events_in_order() {
        let t = toy_trace();
        assert_eq!(t.state_at(0.0).values(), &[0, 1]);
        assert_eq!(t.state_at(0.5).values(), &[1, 1]);
        assert_eq!(t.state_at(1.3).values(), &[1, 0]);
        assert_eq!(t.final_state().values(), &[0, 0]);
    }

    #[test]
    fn holding_times_are_gaps_between_own_flips() {
        let t = toy_trace();
        assert_eq!(t.holding_times(0), vec![0.5, 1.0]);
        assert_eq!(t.holding_times(1), vec![1.25]);
    }

    #[test]
    fn trace_text_roundtrip() {
        let t = toy_trace();
        let text = t.to_text();
        let back = EventTrace::parse(&text).unwrap();
        assert_eq!(t, back);
        assert_eq!(text, back.to_text());
    }

    #[test]
    fn snapshot_marginals_count_up_fraction() {
        let mut snap = SnapshotTrace::new(SpinDomain::ZeroOne, 2, 0.0, 1.0);
        snap.push(&SpinState::new(SpinDomain::ZeroOne, vec![1, 0]).unwrap());
        snap.push(&SpinState::new(SpinDomain::ZeroOne, vec![1, 1]).unwrap());
        assert_eq!(snap.marginals(), vec![1.0, 0.5]);
        assert_eq!(snap.state(1).values(), &[1, 1]);
        assert!(snap.to_text().contains("1 11"));
    }

    #[test]
    fn parse_rejects_malformed_traces() {
        assert!(matches!(
            EventTrace::parse("garbage"),
            Err(TraceError::Malformed { line: 1, .. })
        ));
        assert_eq!(
            EventTrace::parse("time neuron value\n1 0 1\n"),
            Err(TraceError::BadMagic)
        );
        let missing = "# pbit-trace v1\n# n 2\ntime neuron value\n";
        assert!(matches!(
            EventTrace::parse(missing),
            Err(TraceError::MissingField(_))
        ));
    }
}
