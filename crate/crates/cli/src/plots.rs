//! Plot-ready CSVs: per-group rbf bars, rbf next to time-averaged rbs, and
//! an rbs time series window.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use bottleneck_lab::export::{self, AggregateRow};

use crate::error::{io_err, CliError, Context};
use crate::PlotArgs;

#[derive(Debug, Clone, PartialEq)]
pub enum StationFilter {
    All,
    Only(Vec<usize>),
}

impl StationFilter {
    fn keeps(&self, station: usize) -> bool {
        match self {
            StationFilter::All => true,
            StationFilter::Only(list) => list.contains(&station),
        }
    }
}

pub fn parse_stations(s: &str) -> Result<StationFilter, String> {
    if s == "all" {
        return Ok(StationFilter::All);
    }
    s.split(',')
        .map(|p| p.trim().trim_start_matches('S').parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(StationFilter::Only)
}

pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected `start:end`")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("start: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("end: {e}"))?;
    if a >= b {
        return Err("window start must be before its end".into());
    }
    Ok((a, b))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    if !path.exists() {
        return Err(CliError::Input(format!("missing results file {}", path.display())));
    }
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

fn create(path: PathBuf) -> Result<BufWriter<File>, CliError> {
    File::create(&path).map(BufWriter::new).map_err(io_err(path))
}

/// Aggregate rows of every scenario directory, in scenario name order.
fn read_aggregates(results: &Path) -> Result<Vec<AggregateRow>, CliError> {
    if !results.is_dir() {
        return Err(CliError::Input(format!("no results directory at {}", results.display())));
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(results)
        .map_err(io_err(results))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("aggregate.csv").is_file())
        .collect();
    dirs.sort();
    let mut rows = Vec::new();
    for dir in dirs {
        let path = dir.join("aggregate.csv");
        rows.extend(export::read_aggregate(open(&path)?).context(path.display().to_string())?);
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!("no aggregate.csv under {}", results.display())));
    }
    Ok(rows)
}

pub fn cmd_export_plots(args: &PlotArgs) -> Result<(), CliError> {
    let out = args.out.clone().unwrap_or_else(|| args.results.clone());
    fs::create_dir_all(&out).map_err(io_err(&out))?;
    let rows = read_aggregates(&args.results)?;

    let mut groups: BTreeMap<String, Vec<AggregateRow>> = BTreeMap::new();
    for r in &rows {
        let group = r.scenario.split('-').next().unwrap_or(&r.scenario).to_string();
        groups.entry(group).or_default().push(r.clone());
    }
    for (group, rows) in &groups {
        export::write_fig_rbf(create(out.join(format!("fig_rbf_{group}.csv")))?, rows)
            .context(format!("fig_rbf_{group}.csv"))?;
    }
    export::write_fig_rbf_vs_rbs(create(out.join("fig_rbf_vs_rbs.csv"))?, &rows)
        .context("fig_rbf_vs_rbs.csv")?;

    let series_path = args
        .results
        .join(&args.window_scenario)
        .join(args.window_run.to_string())
        .join("rbs_series.csv");
    let series = export::read_rbs_series(open(&series_path)?)
        .context(series_path.display().to_string())?;
    let origin = series.first().map_or(0.0, |r| r.t);
    let (lo, hi) = (origin + args.window.0, origin + args.window.1);
    let window: Vec<_> = series
        .into_iter()
        .filter(|r| lo <= r.t && r.t <= hi && args.stations.keeps(r.station_id))
        .collect();
    export::write_fig_rbs_window(create(out.join("fig_rbs_window.csv"))?, &window)
        .context("fig_rbs_window.csv")?;

    eprintln!(
        "wrote {} group charts, rbf/rbs comparison and {} window rows",
        groups.len(),
        window.len()
    );
    Ok(())
}
