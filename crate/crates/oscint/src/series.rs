//! Per-run energy records and their CSV/JSON serialization.
//!
//! A series holds rows recorded at a stride plus a summary of quantities
//! tracked at *every* step (conservation defects, exchange-identity defects,
//! norm extrema), so sparse recording never weakens the audits.

use std::io::Write;

use crate::{OscintError, Result};

/// One recorded step.
#[derive(Clone, Copy, Debug)]
pub struct SeriesRow {
    pub n: u64,
    pub t: f64,
    /// Total energy `H`; NaN when the force has no known potential.
    pub energy: f64,
    /// Modified energy `𝓗`.
    pub modified_energy: f64,
    pub drift_energy: f64,
    pub drift_modified: f64,
    pub q_norm: f64,
    pub omega_q_norm: f64,
    pub qdot_norm: f64,
}

/// Whole-run quantities tracked at every step.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunSummary {
    pub steps: u64,
    pub initial_energy: f64,
    pub initial_modified: f64,
    pub final_energy: f64,
    pub final_modified: f64,
    /// `max_n |𝓗_n - 𝓗_0|`.
    pub max_abs_drift_modified: f64,
    /// `max_n |𝓗_{n+1} - 𝓗_n|`.
    pub max_step_defect_modified: f64,
    /// Magnitude of the modified-energy terms before cancellation; the scale
    /// against which defects are relative.
    pub modified_scale: f64,
    /// Worst per-step defect of the exchange identity.
    pub max_exchange_defect: f64,
    pub exchange_scale: f64,
    pub max_q_norm: f64,
    /// `max_n (‖Ωq_n‖² + ‖q̇_n‖²)`.
    pub max_oscillatory_sq: f64,
    /// `max_n ½(‖q_n‖² + ‖q̇_n‖²)`.
    pub max_half_state_sq: f64,
}

/// Energy series of one run.
#[derive(Clone, Debug)]
pub struct EnergySeries {
    pub h: f64,
    pub rows: Vec<SeriesRow>,
    pub summary: RunSummary,
}

/// Version tag written as the first CSV line.
pub const CSV_VERSION_LINE: &str = "# oscint-series v1";
const CSV_COLUMNS: &str = "n,t,H,H_mod,drift_H,drift_mod,q_norm,omega_q_norm,qdot_norm";

/// Round-trip-safe float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl EnergySeries {
    /// Check the series invariants: strictly increasing step indices and
    /// `t = n·h` up to relative roundoff.
    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<u64> = None;
        for row in &self.rows {
            if let Some(p) = prev {
                if row.n <= p {
                    return Err(OscintError::SeriesInvariant(format!(
                        "step indices not strictly increasing at n = {}",
                        row.n
                    )));
                }
            }
            let expect = row.n as f64 * self.h;
            let tol = 1e-12 * expect.abs().max(row.t.abs()).max(1e-300);
            if (row.t - expect).abs() > tol {
                return Err(OscintError::SeriesInvariant(format!(
                    "t = {} differs from n·h = {} at n = {}",
                    row.t, expect, row.n
                )));
            }
            prev = Some(row.n);
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        self.validate()?;
        writeln!(w, "{CSV_VERSION_LINE}")?;
        writeln!(w, "{CSV_COLUMNS}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                fmt_f64(r.t),
                fmt_f64(r.energy),
                fmt_f64(r.modified_energy),
                fmt_f64(r.drift_energy),
                fmt_f64(r.drift_modified),
                fmt_f64(r.q_norm),
                fmt_f64(r.omega_q_norm),
                fmt_f64(r.qdot_norm)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// JSON mirror of the CSV: columns as named arrays plus the summary.
    pub fn to_json_value(&self) -> Result<serde_json::Value> {
        self.validate()?;
        let col = |f: &dyn Fn(&SeriesRow) -> f64| -> Vec<f64> { self.rows.iter().map(f).collect() };
        let s = &self.summary;
        Ok(serde_json::json!({
            "format": "oscint-series",
            "version": 1,
            "h": self.h,
            "columns": {
                "n": self.rows.iter().map(|r| r.n).collect::<Vec<u64>>(),
                "t": col(&|r| r.t),
                "H": col(&|r| r.energy),
                "H_mod": col(&|r| r.modified_energy),
                "drift_H": col(&|r| r.drift_energy),
                "drift_mod": col(&|r| r.drift_modified),
                "q_norm": col(&|r| r.q_norm),
                "omega_q_norm": col(&|r| r.omega_q_norm),
                "qdot_norm": col(&|r| r.qdot_norm),
            },
            "summary": {
                "steps": s.steps,
                "initial_H": s.initial_energy,
                "initial_H_mod": s.initial_modified,
                "final_H": s.final_energy,
                "final_H_mod": s.final_modified,
                "max_abs_drift_mod": s.max_abs_drift_modified,
                "max_step_defect_mod": s.max_step_defect_modified,
                "modified_scale": s.modified_scale,
                "max_exchange_defect": s.max_exchange_defect,
                "exchange_scale": s.exchange_scale,
                "max_q_norm": s.max_q_norm,
                "max_oscillatory_sq": s.max_oscillatory_sq,
                "max_half_state_sq": s.max_half_state_sq,
            }
        }))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_json_value()?)?)
    }

    /// Largest `|drift_H|` over the recorded rows.
    pub fn max_abs_drift_energy(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.drift_energy.abs())
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: u64, h: f64) -> SeriesRow {
        SeriesRow {
            n,
            t: n as f64 * h,
            energy: 1.0,
            modified_energy: 1.0,
            drift_energy: 0.0,
            drift_modified: 0.0,
            q_norm: 1.0,
            omega_q_norm: 1.0,
            qdot_norm: 1.0,
        }
    }

    #[test]
    fn validate_accepts_well_formed_series() {
        let series = EnergySeries {
            h: 0.25,
            rows: (0..5).map(|n| row(n, 0.25)).collect(),
            summary: RunSummary::default(),
        };
        series.validate().unwrap();
    }

    #[test]
    fn validate_rejects_non_monotone_steps() {
        let series = EnergySeries {
            h: 0.25,
            rows: vec![row(0, 0.25), row(2, 0.25), row(1, 0.25)],
            summary: RunSummary::default(),
        };
        assert!(series.validate().is_err());
    }

    #[test]
    fn validate_rejects_inconsistent_time() {
        let mut bad = row(3, 0.25);
        bad.t = 0.5;
        let series = EnergySeries {
            h: 0.25,
            rows: vec![row(0, 0.25), bad],
            summary: RunSummary::default(),
        };
        assert!(series.validate().is_err());
    }

    #[test]
    fn csv_layout() {
        let series = EnergySeries {
            h: 0.5,
            rows: vec![row(0, 0.5), row(1, 0.5)],
            summary: RunSummary::default(),
        };
        let text = series.to_csv_string().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_VERSION_LINE);
        assert_eq!(lines[1], CSV_COLUMNS);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2].split(',').count(), 9);
    }

    #[test]
    fn csv_floats_round_trip() {
        let x = 0.1 + 0.2 + std::f64::consts::PI * 1e-7;
        let s = fmt_f64(x);
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn json_mirrors_columns() {
        let series = EnergySeries {
            h: 0.5,
            rows: vec![row(0, 0.5), row(1, 0.5), row(2, 0.5)],
            summary: RunSummary::default(),
        };
        let v = series.to_json_value().unwrap();
        assert_eq!(v["columns"]["n"].as_array().unwrap().len(), 3);
        assert_eq!(v["columns"]["H"].as_array().unwrap().len(), 3);
        assert_eq!(v["version"], 1);
    }
}
