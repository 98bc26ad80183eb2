//! Outcome measures derived from a run's log.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::supervisor::Mode;

use super::log::LogRecord;

/// Position error below which the vehicle counts as settled (m).
pub const SETTLE_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub perch_achieved: bool,
    /// Time of the first attachment (s).
    pub perch_time: Option<f64>,
    pub unperch_achieved: bool,
    /// Time of the first release after attaching (s).
    pub release_time: Option<f64>,
    /// Largest altitude loss below the release height, from release until settled (m).
    pub z_drop: Option<f64>,
    /// Smallest magnet-face clearance once the vehicle has first backed away
    /// after release (m); negative means it pressed back into the wall.
    pub min_clearance: Option<f64>,
    /// Time from release until the position error stays below tolerance (s).
    pub settling_time: Option<f64>,
    /// Fraction of ticks with any rotor command clamped, per mode.
    pub saturation_fraction: BTreeMap<Mode, f64>,
    /// Largest attitude error norm seen in each mode (rad).
    pub max_attitude_error: BTreeMap<Mode, f64>,
    pub completed: bool,
    pub failure: Option<String>,
}

impl Metrics {
    pub fn saturation_in(&self, mode: Mode) -> f64 {
        self.saturation_fraction.get(&mode).copied().unwrap_or(0.0)
    }

    /// Flat list of numeric metrics, for tabular comparison.
    pub fn scalars(&self) -> Vec<(String, Option<f64>)> {
        let flag = |b: bool| Some(if b { 1.0 } else { 0.0 });
        let mut out = vec![
            ("perch_achieved".to_string(), flag(self.perch_achieved)),
            ("perch_time".to_string(), self.perch_time),
            ("unperch_achieved".to_string(), flag(self.unperch_achieved)),
            ("release_time".to_string(), self.release_time),
            ("z_drop".to_string(), self.z_drop),
            ("min_clearance".to_string(), self.min_clearance),
            ("settling_time".to_string(), self.settling_time),
        ];
        for mode in Mode::ALL {
            out.push((
                format!("saturation_fraction.{mode}"),
                self.saturation_fraction.get(&mode).copied(),
            ));
        }
        for mode in Mode::ALL {
            out.push((
                format!("max_attitude_error.{mode}"),
                self.max_attitude_error.get(&mode).copied(),
            ));
        }
        out
    }
}

pub fn compute_metrics(logs: &[LogRecord]) -> Result<Metrics, MetricsError> {
    if logs.is_empty() {
        return Err(MetricsError::EmptyLog);
    }
    let mut m = Metrics {
        completed: true,
        ..Metrics::default()
    };

    let attach = logs
        .iter()
        .enumerate()
        .position(|(i, r)| r.attached && (i == 0 || !logs[i - 1].attached));
    m.perch_achieved = attach.is_some();
    m.perch_time = attach.map(|i| logs[i].t);

    let release = attach
        .and_then(|a| (a + 1..logs.len()).find(|&i| !logs[i].attached && logs[i - 1].attached));
    m.unperch_achieved = release.is_some();
    if let Some(i) = release {
        let after = &logs[i..];
        m.release_time = Some(logs[i].t);

        let unsettled = after
            .iter()
            .rposition(|r| r.position_error >= SETTLE_TOLERANCE);
        let settle = match unsettled {
            None => Some(0),
            Some(j) if j + 1 < after.len() => Some(j + 1),
            Some(_) => None,
        };
        m.settling_time = settle.map(|k| after[k].t - after[0].t);

        let window = &after[..=settle.unwrap_or(after.len() - 1)];
        let z_release = after[0].position.z;
        let drop = window
            .iter()
            .map(|r| z_release - r.position.z)
            .fold(0.0, f64::max);
        m.z_drop = Some(drop);

        // departure ends at the first decrease of the gap
        let peak = (1..after.len())
            .find(|&k| after[k].gap < after[k - 1].gap)
            .map_or(after.len() - 1, |k| k - 1);
        m.min_clearance = after[peak..].iter().map(|r| r.gap).reduce(f64::min);
    }

    for mode in Mode::ALL {
        let in_mode: Vec<&LogRecord> = logs.iter().filter(|r| r.mode == mode).collect();
        let saturated = in_mode.iter().filter(|r| r.any_saturated()).count();
        let fraction = if in_mode.is_empty() {
            0.0
        } else {
            saturated as f64 / in_mode.len() as f64
        };
        m.saturation_fraction.insert(mode, fraction);
        let max_err = in_mode.iter().map(|r| r.attitude_error).fold(0.0, f64::max);
        m.max_attitude_error.insert(mode, max_err);
    }
    Ok(m)
}
