//! CSV / JSON result files and per-trial convergence traces.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, StaError};
use crate::harness::experiment::{ExperimentReport, TrialRecord, TspReport};

pub const CSV_HEADER: &str = "function,dim,trial,seed,best_value,evaluations,ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// Picks the format from the file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        ext.parse()
    }
}

impl FromStr for OutputFormat {
    type Err = StaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(StaError::UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    function: &'a str,
    dim: usize,
    trial: usize,
    seed: u64,
    best_value: f64,
    evaluations: usize,
    ms: u64,
}

/// Anything that can be written as a results file.
pub trait Report: Serialize {
    /// Function label and dimension for the CSV columns.
    fn label(&self) -> (String, usize);
    fn records(&self) -> Vec<&TrialRecord>;
}

impl Report for ExperimentReport {
    fn label(&self) -> (String, usize) {
        (self.spec.function.to_string(), self.spec.dimension)
    }

    fn records(&self) -> Vec<&TrialRecord> {
        self.trials.iter().collect()
    }
}

impl Report for TspReport {
    fn label(&self) -> (String, usize) {
        ("tsp".to_string(), self.spec.cities)
    }

    fn records(&self) -> Vec<&TrialRecord> {
        self.trials.iter().map(|t| &t.record).collect()
    }
}

pub fn to_csv<R: Report + ?Sized>(report: &R) -> Result<String> {
    let (function, dim) = report.label();
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in report.records() {
        w.serialize(CsvRow {
            function: &function,
            dim,
            trial: r.trial,
            seed: r.seed,
            best_value: r.best_value,
            evaluations: r.evaluations,
            ms: r.ms,
        })?;
    }
    if report.records().is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    let bytes = w.into_inner().map_err(|e| StaError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json<R: Report + ?Sized>(report: &R) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn emit_results<R: Report + ?Sized>(
    report: &R,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => to_csv(report)?,
        OutputFormat::Json => to_json(report)? + "\n",
    };
    fs::write(path, body)?;
    Ok(())
}

/// Writes one headerless `iteration,best_value` file per trial into `dir`,
/// named `<prefix>_trial<NNN>.csv`. Returns the written paths in trial order.
pub fn write_traces<'a, I>(dir: &Path, prefix: &str, records: I) -> Result<Vec<PathBuf>>
where
    I: IntoIterator<Item = &'a TrialRecord>,
{
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for r in records {
        let path = dir.join(format!("{prefix}_trial{:03}.csv", r.trial));
        let mut out = std::io::BufWriter::new(fs::File::create(&path)?);
        for (k, v) in &r.history {
            writeln!(out, "{k},{v}")?;
        }
        out.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Benchmark;
    use crate::harness::experiment::{run_experiment, ExperimentSpec};
    use crate::harness::stats::compute_stats;

    fn small(trials: usize) -> ExperimentReport {
        let spec = ExperimentSpec {
            max_iterations: 15,
            trials,
            base_seed: 42,
            ..ExperimentSpec::standard(Benchmark::Sphere, 4)
        };
        run_experiment(&spec, 1).unwrap()
    }

    #[test]
    fn formats() {
        assert_eq!(
            OutputFormat::from_path(Path::new("a/b.CSV")).unwrap(),
            OutputFormat::Csv
        );
        assert_eq!(
            OutputFormat::from_path(Path::new("r.json")).unwrap(),
            OutputFormat::Json
        );
        assert!(OutputFormat::from_path(Path::new("r.txt")).is_err());
    }

    #[test]
    fn single_trial_csv_has_two_lines() {
        let csv = to_csv(&small(1)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("sphere,4,0,42,"));
    }

    #[test]
    fn json_stats_match_trials() {
        let report = small(4);
        let v: serde_json::Value = serde_json::from_str(&to_json(&report).unwrap()).unwrap();
        let finals: Vec<f64> = v["trials"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["best_value"].as_f64().unwrap())
            .collect();
        let s = compute_stats(&finals).unwrap();
        assert_eq!(v["stats"]["best"].as_f64().unwrap(), s.best);
        assert_eq!(v["stats"]["mean"].as_f64().unwrap(), s.mean);
        assert_eq!(v["stats"]["std"].as_f64().unwrap(), s.std);
        assert_eq!(v["spec"]["function"], "sphere");
        assert!(v["trials"][0].get("history").is_none());
    }

    #[test]
    fn trace_has_one_line_per_history_entry() {
        let report = small(2);
        let dir = tempfile::tempdir().unwrap();
        let paths = write_traces(dir.path(), "sphere_d4", &report.trials).unwrap();
        assert_eq!(paths.len(), 2);
        let text = fs::read_to_string(&paths[1]).unwrap();
        assert_eq!(text.lines().count(), report.spec.max_iterations + 1);
        assert!(text.starts_with("0,"));
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("out.csv");
        assert!(matches!(
            emit_results(&small(1), OutputFormat::Csv, &path),
            Err(StaError::Io(_))
        ));
    }
}
