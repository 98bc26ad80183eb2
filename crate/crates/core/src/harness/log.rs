//! Telemetry records and their CSV/JSON encodings.

use std::io::{self, Write};

use sha2::{Digest, Sha256};

use crate::geometry::Vec3;
use crate::supervisor::Mode;

use super::metrics::Metrics;
use super::sim::SimEvent;

/// One row per control tick: the state at `t` plus the commands computed on that tick.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub pitch: f64,
    /// `[w, x, y, z]`.
    pub quaternion: [f64; 4],
    pub angular_velocity: Vec3,
    pub mode: Mode,
    pub attached: bool,
    pub eta_d: f64,
    pub eta: f64,
    pub thrust: [f64; 4],
    pub thrust_command: [f64; 4],
    pub tilt: [f64; 4],
    pub disturbance_estimate: Vec3,
    pub lambda_hat: f64,
    pub lambda_true: f64,
    pub attitude_error: f64,
    pub position_error: f64,
    pub saturated: [bool; 4],
    /// Magnet-face distance from the wall (not written to CSV).
    pub gap: f64,
    pub max_thrust: f64,
}

impl LogRecord {
    pub fn any_saturated(&self) -> bool {
        self.saturated.iter().any(|&s| s)
    }

    /// Thrust as a fraction of the rotor limit, the analog of a PWM duty cycle.
    pub fn normalized_thrust(&self) -> [f64; 4] {
        self.thrust.map(|t| t / self.max_thrust)
    }
}

pub const CSV_COLUMNS: [&str; 39] = [
    "t",
    "px",
    "py",
    "pz",
    "vx",
    "vy",
    "vz",
    "pitch",
    "qw",
    "qx",
    "qy",
    "qz",
    "wx",
    "wy",
    "wz",
    "mode",
    "attached",
    "eta_d",
    "eta",
    "T1",
    "T2",
    "T3",
    "T4",
    "Tcmd1",
    "Tcmd2",
    "Tcmd3",
    "Tcmd4",
    "nu1",
    "nu2",
    "nu3",
    "nu4",
    "dhatx",
    "dhaty",
    "dhatz",
    "lambda_hat",
    "lambda_true",
    "eR_norm",
    "ep_norm",
    "sat_any",
];

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

fn push_row(out: &mut String, r: &LogRecord) {
    use std::fmt::Write as _;
    let mut fields: Vec<String> = Vec::with_capacity(CSV_COLUMNS.len());
    fields.push(r.t.to_string());
    fields.extend(r.position.iter().map(f64::to_string));
    fields.extend(r.velocity.iter().map(f64::to_string));
    fields.push(r.pitch.to_string());
    fields.extend(r.quaternion.iter().map(f64::to_string));
    fields.extend(r.angular_velocity.iter().map(f64::to_string));
    fields.push(r.mode.label().to_string());
    fields.push(u8::from(r.attached).to_string());
    fields.push(r.eta_d.to_string());
    fields.push(r.eta.to_string());
    fields.extend(r.thrust.iter().map(f64::to_string));
    fields.extend(r.thrust_command.iter().map(f64::to_string));
    fields.extend(r.tilt.iter().map(f64::to_string));
    fields.extend(r.disturbance_estimate.iter().map(f64::to_string));
    fields.push(r.lambda_hat.to_string());
    fields.push(r.lambda_true.to_string());
    fields.push(r.attitude_error.to_string());
    fields.push(r.position_error.to_string());
    fields.push(u8::from(r.any_saturated()).to_string());
    debug_assert_eq!(fields.len(), CSV_COLUMNS.len());
    let _ = writeln!(out, "{}", fields.join(","));
}

pub fn to_csv(records: &[LogRecord]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for r in records {
        push_row(&mut out, r);
    }
    out
}

pub fn write_csv<W: Write>(records: &[LogRecord], mut w: W) -> io::Result<()> {
    w.write_all(to_csv(records).as_bytes())
}

pub fn events_csv(events: &[SimEvent]) -> String {
    let mut out = String::from("t,event,detail\n");
    for e in events {
        out.push_str(&format!(
            "{},{},{}\n",
            e.t,
            e.kind.name(),
            csv_field(&e.kind.detail())
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn metrics_json(metrics: &Metrics) -> String {
    serde_json::to_string_pretty(metrics).expect("metrics serialize")
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
