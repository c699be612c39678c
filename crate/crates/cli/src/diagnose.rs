use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use bottleneck_lab::export::{self, LoggedRun};
use bottleneck_lab::{aggregate_runs, diagnose, Diagnosis};

use crate::error::{io_err, CliError, Context};
use crate::DiagnoseArgs;

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn instants(args: &DiagnoseArgs, run: &LoggedRun) -> Result<Vec<f64>, CliError> {
    if !(args.interval > 0.0) || !(args.settling >= 0.0) {
        return Err(CliError::Input("interval must be positive and settling non-negative".into()));
    }
    let end = run.end();
    let fit = ((end - args.settling) / args.interval).ceil();
    let available = if fit > 0.0 { fit as usize } else { 0 };
    let n = args.samples.unwrap_or(available);
    if n == 0 || n > available {
        return Err(CliError::Input(format!(
            "run {}: log ends at {end}, cannot take {n} samples after {} at spacing {}",
            run.run_id, args.settling, args.interval
        )));
    }
    Ok((0..n).map(|i| args.settling + i as f64 * args.interval).collect())
}

fn write_run(dir: &Path, label: &str, run_id: usize, d: &Diagnosis) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let open = |name: &str| {
        let path = dir.join(name);
        File::create(&path).map(BufWriter::new).map_err(io_err(path))
    };
    export::write_active_periods(open("active_periods.csv")?, run_id, &d.periods)
        .context("active_periods.csv")?;
    export::write_bottleneck_series(open("bottlenecks.csv")?, run_id, &d.series)
        .context("bottlenecks.csv")?;
    export::write_rbs_series(open("rbs_series.csv")?, label, run_id, &d.severity)
        .context("rbs_series.csv")?;
    Ok(())
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<(), CliError> {
    let file = File::open(&args.eventlog).map_err(io_err(&args.eventlog))?;
    let runs = export::read_event_log(BufReader::new(file))
        .context(args.eventlog.display().to_string())?;
    if runs.is_empty() {
        return Err(CliError::Input(format!("{}: no events", args.eventlog.display())));
    }

    let mut results = Vec::with_capacity(runs.len());
    for run in &runs {
        let ts = instants(args, run)?;
        let d = diagnose(&run.timelines, &ts, args.mode.into())
            .context(format!("run {}", run.run_id))?;
        write_run(&args.out.join(run.run_id.to_string()), &args.label, run.run_id, &d)?;
        results.push((run.run_id, d));
    }

    let rbf_path = args.out.join("rbf.csv");
    let w = File::create(&rbf_path).map(BufWriter::new).map_err(io_err(&rbf_path))?;
    export::write_rbf(w, &args.label, results.iter().map(|(id, d)| (*id, &d.frequency)))
        .context("rbf.csv")?;

    let frequencies: Vec<_> = results.iter().map(|(_, d)| d.frequency.clone()).collect();
    let severities: Vec<_> = results.iter().map(|(_, d)| d.severity.clone()).collect();
    let aggregate = aggregate_runs(&frequencies, &severities).context("aggregate")?;
    let agg_path = args.out.join("aggregate.csv");
    let w = File::create(&agg_path).map(BufWriter::new).map_err(io_err(&agg_path))?;
    export::write_aggregate(w, &args.label, &aggregate).context("aggregate.csv")?;

    for (id, d) in &results {
        let rbf: Vec<String> = d.frequency.rbf.iter().map(|r| format!("{r:.3}")).collect();
        eprintln!("run {id}: rbf [{}]", rbf.join(", "));
    }
    Ok(())
}
