//! Side-by-side comparison of two runs.

use serde::Serialize;

use crate::supervisor::Mode;

use super::metrics::Metrics;
use super::scenario::Variant;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricDelta {
    pub name: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// `b − a` when both are present.
    pub delta: Option<f64>,
}

/// Inequality between a baseline run `a` and a comparison run `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Expectation {
    /// `z_drop(b) ≥ factor · z_drop(a)`.
    ZDropRatioAtLeast { factor: f64 },
    /// `min_clearance(b) ≤ bound`.
    ClearanceAtMost { bound: f64 },
    /// `min_clearance(a) > bound`.
    BaselineClearanceAbove { bound: f64 },
    /// `saturation_fraction(b, mode) > fraction`.
    SaturationAbove { mode: Mode, fraction: f64 },
    /// `saturation_fraction(a, mode) ≤ fraction`.
    BaselineSaturationAtMost { mode: Mode, fraction: f64 },
}

impl Expectation {
    /// Expected outcome of running `variant` against the proposed law.
    pub fn for_variant(variant: Variant) -> Vec<Expectation> {
        match variant {
            Variant::Proposed => Vec::new(),
            Variant::NoTransitionsRho0 => vec![Expectation::ZDropRatioAtLeast { factor: 2.0 }],
            Variant::NoTransitionsRhoHalf => vec![
                Expectation::ClearanceAtMost { bound: 0.0 },
                Expectation::BaselineClearanceAbove { bound: 0.05 },
            ],
            Variant::NoFreeze => vec![
                Expectation::SaturationAbove {
                    mode: Mode::P,
                    fraction: 0.2,
                },
                Expectation::BaselineSaturationAtMost {
                    mode: Mode::P,
                    fraction: 0.0,
                },
            ],
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Expectation::ZDropRatioAtLeast { factor } => {
                format!("z_drop(b) >= {factor} * z_drop(a)")
            }
            Expectation::ClearanceAtMost { bound } => format!("min_clearance(b) <= {bound}"),
            Expectation::BaselineClearanceAbove { bound } => format!("min_clearance(a) > {bound}"),
            Expectation::SaturationAbove { mode, fraction } => {
                format!("saturation_fraction(b, {mode}) > {fraction}")
            }
            Expectation::BaselineSaturationAtMost { mode, fraction } => {
                format!("saturation_fraction(a, {mode}) <= {fraction}")
            }
        }
    }

    pub fn holds(&self, a: &Metrics, b: &Metrics) -> bool {
        match *self {
            Expectation::ZDropRatioAtLeast { factor } => match (a.z_drop, b.z_drop) {
                (Some(za), Some(zb)) => zb >= factor * za,
                _ => false,
            },
            Expectation::ClearanceAtMost { bound } => b.min_clearance.is_some_and(|c| c <= bound),
            Expectation::BaselineClearanceAbove { bound } => {
                a.min_clearance.is_some_and(|c| c > bound)
            }
            Expectation::SaturationAbove { mode, fraction } => b.saturation_in(mode) > fraction,
            Expectation::BaselineSaturationAtMost { mode, fraction } => {
                a.saturation_in(mode) <= fraction
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: Expectation,
    pub description: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub a: String,
    pub b: String,
    pub deltas: Vec<MetricDelta>,
    pub checks: Vec<CheckResult>,
}

impl ComparisonReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn delta(&self, name: &str) -> Option<&MetricDelta> {
        self.deltas.iter().find(|d| d.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text table.
    pub fn render(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
        let mut out = format!(
            "{:<28} {:>12} {:>12} {:>12}\n",
            "metric", self.a, self.b, "delta"
        );
        for d in &self.deltas {
            out.push_str(&format!(
                "{:<28} {:>12} {:>12} {:>12}\n",
                d.name,
                fmt(d.a),
                fmt(d.b),
                fmt(d.delta)
            ));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.description
            ));
        }
        out
    }
}

/// Metric deltas between two runs, with no checks.
pub fn compare(label_a: &str, a: &Metrics, label_b: &str, b: &Metrics) -> ComparisonReport {
    compare_with(label_a, a, label_b, b, &[])
}

pub fn compare_with(
    label_a: &str,
    a: &Metrics,
    label_b: &str,
    b: &Metrics,
    checks: &[Expectation],
) -> ComparisonReport {
    let deltas = a
        .scalars()
        .into_iter()
        .zip(b.scalars())
        .map(|((name, va), (_, vb))| MetricDelta {
            name,
            a: va,
            b: vb,
            delta: va.zip(vb).map(|(x, y)| y - x),
        })
        .collect();
    let checks = checks
        .iter()
        .map(|c| CheckResult {
            check: *c,
            description: c.describe(),
            passed: c.holds(a, b),
        })
        .collect();
    ComparisonReport {
        a: label_a.to_string(),
        b: label_b.to_string(),
        deltas,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metrics(z_drop: f64, clearance: f64, sat_p: f64) -> Metrics {
        let mut m = Metrics {
            perch_achieved: true,
            unperch_achieved: true,
            z_drop: Some(z_drop),
            min_clearance: Some(clearance),
            completed: true,
            ..Metrics::default()
        };
        for mode in Mode::ALL {
            m.saturation_fraction
                .insert(mode, if mode == Mode::P { sat_p } else { 0.0 });
        }
        m
    }

    #[test]
    fn identical_runs_have_zero_deltas() {
        let m = metrics(0.01, 0.4, 0.0);
        let r = compare("a", &m, "b", &m);
        assert!(r.deltas.iter().all(|d| d.delta.is_none_or(|x| x == 0.0)));
        assert_eq!(r.delta("z_drop").unwrap().delta, Some(0.0));
    }

    #[test]
    fn ordering_checks() {
        let proposed = metrics(0.01, 0.4, 0.0);
        let drop = metrics(0.05, 0.3, 0.0);
        let r = compare_with(
            "proposed",
            &proposed,
            "b",
            &drop,
            &Expectation::for_variant(Variant::NoTransitionsRho0),
        );
        assert!(r.all_passed());
        assert!((r.delta("z_drop").unwrap().delta.unwrap() - 0.04).abs() < 1e-15);

        let collide = metrics(0.01, -0.002, 0.0);
        let r = compare_with(
            "proposed",
            &proposed,
            "c",
            &collide,
            &Expectation::for_variant(Variant::NoTransitionsRhoHalf),
        );
        assert!(r.all_passed());
        let r = compare_with(
            "proposed",
            &proposed,
            "c",
            &proposed,
            &Expectation::for_variant(Variant::NoTransitionsRhoHalf),
        );
        assert!(!r.all_passed());

        let saturated = metrics(0.01, 0.4, 0.6);
        let r = compare_with(
            "proposed",
            &proposed,
            "nf",
            &saturated,
            &Expectation::for_variant(Variant::NoFreeze),
        );
        assert!(r.all_passed());
        assert!(r.render().contains("[PASS]"));
    }
}
