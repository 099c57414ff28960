use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    /// Region of the commanded velocity, −1 when stationary.
    pub region_id: i32,
    /// Space-separated event names, empty when nothing happened.
    pub event: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub run: usize,
    pub discontinuity_count: u32,
    /// Simulated seconds until the last goal was reached or abandoned.
    pub travel_time: f64,
    pub completed: bool,
    pub goals_reached: usize,
    pub collided: bool,
    pub trajectory: Vec<TrajectoryRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n − 1); zero for a single value.
    pub std: f64,
}

pub fn aggregate(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::InvalidConfig("cannot aggregate an empty list".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    let std = if m > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(Summary { mean, median, std })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub scenario: String,
    pub config_id: String,
    pub runs: usize,
    pub completed_runs: usize,
    pub discontinuity_count: Summary,
    pub travel_time: Summary,
}

impl ExperimentSummary {
    pub fn new(scenario: &str, config_id: &str, runs: &[RunMetrics]) -> Result<Self> {
        let counts: Vec<f64> = runs.iter().map(|r| f64::from(r.discontinuity_count)).collect();
        let times: Vec<f64> = runs.iter().map(|r| r.travel_time).collect();
        Ok(Self {
            scenario: scenario.to_string(),
            config_id: config_id.to_string(),
            runs: runs.len(),
            completed_runs: runs.iter().filter(|r| r.completed).count(),
            discontinuity_count: aggregate(&counts)?,
            travel_time: aggregate(&times)?,
        })
    }
}

pub const METRICS_HEADER: &str = "scenario,config_id,run,discontinuity_count,travel_time,completed";

pub fn write_metrics_rows<W: Write>(
    mut w: W,
    scenario: &str,
    config_id: &str,
    runs: &[RunMetrics],
) -> std::io::Result<()> {
    for r in runs {
        writeln!(
            w,
            "{scenario},{config_id},{},{},{:.2},{}",
            r.run, r.discontinuity_count, r.travel_time, r.completed
        )?;
    }
    Ok(())
}

pub fn write_metrics_csv<W: Write>(
    mut w: W,
    scenario: &str,
    config_id: &str,
    runs: &[RunMetrics],
) -> std::io::Result<()> {
    writeln!(w, "{METRICS_HEADER}")?;
    write_metrics_rows(w, scenario, config_id, runs)
}

pub fn write_trajectory_csv<W: Write>(mut w: W, rows: &[TrajectoryRow]) -> std::io::Result<()> {
    writeln!(w, "t,x,y,heading,region_id,event")?;
    for r in rows {
        writeln!(
            w,
            "{:.2},{:.4},{:.4},{:.4},{},{}",
            r.t, r.x, r.y, r.heading, r.region_id, r.event
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_examples() {
        assert_eq!(
            aggregate(&[1.0, 1.0, 1.0]).unwrap(),
            Summary {
                mean: 1.0,
                median: 1.0,
                std: 0.0
            }
        );
        let s = aggregate(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.median, s.std), (2.0, 2.0, 1.0));
        assert_eq!(aggregate(&[3.0, 1.0]).unwrap().median, 2.0);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn std_matches_two_pass_reference() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        // Population std of this set is 2; the sample std is 2·sqrt(8/7).
        let s = aggregate(&xs).unwrap();
        assert!((s.std - 2.0 * (8.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(s.median, 4.5);
    }

    #[test]
    fn metrics_csv_layout() {
        let runs = vec![RunMetrics {
            run: 0,
            discontinuity_count: 3,
            travel_time: 41.234,
            completed: true,
            goals_reached: 4,
            collided: false,
            trajectory: Vec::new(),
        }];
        let mut buf = Vec::new();
        write_metrics_csv(&mut buf, "figurex", "aug-DWA-2", &runs).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "scenario,config_id,run,discontinuity_count,travel_time,completed\nfigurex,aug-DWA-2,0,3,41.23,true\n"
        );
    }
}
