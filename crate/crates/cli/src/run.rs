use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use bottleneck_lab::export;
use bottleneck_lab::scenarios::{self, ScenarioFile, ScenarioResult, ScenarioSpec};
use rayon::prelude::*;

use crate::error::{io_err, CliError, Context};
use crate::manifest::RunManifest;
use crate::RunArgs;

pub const CONFIG_FILE: &str = "scenarios.toml";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn load_scenarios(config: Option<&Path>) -> Result<Vec<ScenarioSpec>, CliError> {
    match config {
        None => Ok(scenarios::catalog()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            ScenarioFile::from_toml(&text)
                .map(|f| f.scenario)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
    }
}

fn select(args: &RunArgs, available: Vec<ScenarioSpec>) -> Result<Vec<ScenarioSpec>, CliError> {
    let mut chosen = if args.all {
        available
    } else {
        args.scenario
            .iter()
            .map(|name| {
                scenarios::find(&available, name)
                    .cloned()
                    .map_err(|e| CliError::Input(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    for spec in &mut chosen {
        if let Some(runs) = args.runs {
            spec.replication_count = runs;
        }
        if let Some(mode) = args.mode {
            spec.apm_mode = mode.into();
        }
        spec.validate().map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(chosen)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// Writes one scenario's files and returns their paths relative to `root`.
fn write_scenario(root: &Path, result: &ScenarioResult) -> Result<Vec<String>, CliError> {
    let name = result.name();
    let dir = root.join(name);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;

    let rbf_path = dir.join("rbf.csv");
    export::write_rbf(
        create(&rbf_path)?,
        name,
        result.runs.iter().map(|r| (r.run_id, &r.diagnosis.frequency)),
    )
    .context(rbf_path.display().to_string())?;
    let agg_path = dir.join("aggregate.csv");
    export::write_aggregate(create(&agg_path)?, name, &result.aggregate)
        .context(agg_path.display().to_string())?;

    let per_run = result
        .runs
        .par_iter()
        .map(|run| {
            let run_dir = dir.join(run.run_id.to_string());
            fs::create_dir_all(&run_dir).map_err(io_err(&run_dir))?;
            let d = &run.diagnosis;
            let files = [
                "events.csv",
                "active_periods.csv",
                "bottlenecks.csv",
                "rbs_series.csv",
            ];
            for file in files {
                let path = run_dir.join(file);
                let w = create(&path)?;
                match file {
                    "events.csv" => export::write_event_log(w, run.run_id, &run.simulation.timelines),
                    "active_periods.csv" => export::write_active_periods(w, run.run_id, &d.periods),
                    "bottlenecks.csv" => export::write_bottleneck_series(w, run.run_id, &d.series),
                    _ => export::write_rbs_series(w, name, run.run_id, &d.severity),
                }
                .context(path.display().to_string())?;
            }
            Ok(files
                .iter()
                .map(|f| format!("{name}/{}/{f}", run.run_id))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut written = vec![format!("{name}/rbf.csv"), format!("{name}/aggregate.csv")];
    written.extend(per_run.into_iter().flatten());
    Ok(written)
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let selected = select(args, load_scenarios(args.config.as_deref())?)?;
    let resolved = ScenarioFile {
        scenario: selected.clone(),
    };
    let config_text = resolved
        .to_toml()
        .map_err(|e| CliError::Input(e.to_string()))?;

    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    let config_path = args.out.join(CONFIG_FILE);
    fs::write(&config_path, &config_text).map_err(io_err(&config_path))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Input(format!("cannot start {} workers: {e}", args.jobs)))?;

    let mut outputs = vec![CONFIG_FILE.to_string()];
    for spec in &selected {
        let result = pool
            .install(|| scenarios::run_scenario(spec, args.seed))
            .context(format!("scenario {}", spec.name))?;
        outputs.extend(pool.install(|| write_scenario(&args.out, &result))?);
        let means: Vec<String> = result
            .aggregate
            .rbf_means()
            .iter()
            .map(|m| format!("{m:.3}"))
            .collect();
        eprintln!("{}: {} runs, mean rbf [{}]", spec.name, result.runs.len(), means.join(", "));
    }

    RunManifest::new(&config_text, args.seed, outputs).write(&args.out.join(MANIFEST_FILE))
}

pub fn cmd_catalog() -> Result<(), CliError> {
    let text = ScenarioFile {
        scenario: scenarios::catalog(),
    }
    .to_toml()
    .map_err(|e| CliError::Input(e.to_string()))?;
    print!("{text}");
    Ok(())
}
