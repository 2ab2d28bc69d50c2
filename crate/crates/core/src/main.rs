use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bec_steering::harness::{
    css_calibration, load_dataset, persist_dataset, read_jsonl, run_acquisition, write_table,
    Analysis, CriteriaReport, HarnessError, ReportFormat, ReportRow, RunConfig,
};
use bec_steering::imaging::{BlurBudget, PIXEL_SIZE};

#[derive(Parser)]
#[command(version, about = "Entanglement and EPR steering between imaged regions of a squeezed cloud")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML); defaults apply when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Dataset directory to write (simulate) or read.
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = SweepName::All)]
    sweep: SweepName,
    #[arg(long, global = true, default_value = "csv")]
    format: ReportFormat,
    /// Coherent-state shots for the projection-noise calibration.
    #[arg(long, global = true, default_value_t = 20_000)]
    shots: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a shot dataset.
    Simulate,
    /// Gap-position sweep of a dataset.
    Analyze,
    /// Sweeps selected by `--sweep`.
    Sweep,
    /// Dataset-free checks: projection-noise calibration, crosstalk, blur.
    Oracle,
    /// Convert report records in `--out` into tables and a summary.
    Report,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepName {
    GapPosition,
    GapWidth,
    Patterns,
    All,
}

const REPORTS_SUFFIX: &str = ".reports.jsonl";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.category(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, HarnessError> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    Ok(c)
}

fn out_dir(cli: &Cli, config: &RunConfig) -> PathBuf {
    cli.out.clone().or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("out"))
}

fn write_config(config: &RunConfig, dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io { path: dir.into(), source })?;
    let path = dir.join("config.toml");
    std::fs::write(&path, config.to_toml()?).map_err(|source| HarnessError::Io { path, source })
}

fn dataset_arg(cli: &Cli) -> Result<&Path, HarnessError> {
    cli.dataset
        .as_deref()
        .ok_or_else(|| HarnessError::Config("--dataset is required for this command".into()))
}

fn emit(name: &str, reports: &[CriteriaReport], dir: &Path, format: ReportFormat) -> Result<(), HarnessError> {
    write_table(reports, ReportFormat::Jsonl, &dir.join(format!("{name}{REPORTS_SUFFIX}")))?;
    let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();
    write_table(&rows, format, &dir.join(format!("{name}.{}", format.extension())))?;
    for r in &rows {
        println!(
            "{name} {:<24} ratio {:.3}  E_ent {:.3}±{:.3}  E_epr A→B {:.3}±{:.3}  B→A {:.3}±{:.3}  floor {:.3}",
            r.label, r.splitting_ratio, r.e_ent, r.e_ent_sem, r.e_epr_ab, r.e_epr_ab_sem, r.e_epr_ba, r.e_epr_ba_sem, r.floor_epr_ab
        );
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Simulate => {
            let config = resolve_config(cli)?;
            let out = out_dir(cli, &config);
            let dataset = run_acquisition(&config)?;
            let dir = cli.dataset.clone().unwrap_or_else(|| out.join("dataset"));
            persist_dataset(&dataset, &dir)?;
            write_config(&config, &out)?;
            println!(
                "wrote {} shots to {} (seed {}, prepared {:.2} dB)",
                dataset.shots.len(),
                dir.display(),
                config.seed,
                dataset.manifest.wineland_db
            );
        }
        Command::Analyze | Command::Sweep => {
            let mut dataset = load_dataset(dataset_arg(cli)?)?;
            if let Some(p) = &cli.config {
                dataset.manifest.config.sweep = RunConfig::load(p)?.sweep;
            }
            let config = dataset.config().clone();
            let out = out_dir(cli, &config);
            write_config(&config, &out)?;
            let analysis = Analysis::new(&dataset)?;
            let orientation = config.sweep.orientation;
            let which = if matches!(cli.command, Command::Analyze) { SweepName::GapPosition } else { cli.sweep };
            if matches!(which, SweepName::GapPosition | SweepName::All) {
                emit("gap_position", &analysis.sweep_gap_position(orientation, 1)?, &out, cli.format)?;
            }
            if matches!(which, SweepName::GapWidth | SweepName::All) {
                let (offset, reports) = analysis.sweep_gap_width(orientation)?;
                println!("gap_width centred at offset {offset}");
                emit("gap_width", &reports, &out, cli.format)?;
            }
            if matches!(which, SweepName::Patterns | SweepName::All) {
                let (reports, diagnostics) = analysis.sweep_patterns(&config.sweep.patterns);
                for d in &diagnostics {
                    eprintln!("{}", serde_json::json!({ "skipped_pattern": d.pattern, "reason": d.message }));
                }
                emit("patterns", &reports, &out, cli.format)?;
            }
        }
        Command::Oracle => {
            let config = resolve_config(cli)?;
            let out = out_dir(cli, &config);
            write_config(&config, &out)?;
            let points = css_calibration(&config, cli.shots, &config.sweep.gap_offsets, 2000)?;
            for p in &points {
                println!(
                    "css_calibration offset {:>3} ratio {:.3}  4Var/N_eff {:.4}±{:.4}  raw {:.4}±{:.4} (predicted {:.4})",
                    p.gap_offset, p.splitting_ratio, p.normalized_variance, p.normalized_sem, p.raw_ratio, p.raw_ratio_sem, p.predicted_ratio
                );
            }
            write_table(&points, cli.format, &out.join(format!("css_calibration.{}", cli.format.extension())))?;
            let b = BlurBudget::for_total(1.1, 1.4, PIXEL_SIZE, 50e-6)?;
            println!(
                "blur: saturation {:.4} gives {:.3} px blur, {:.3} px total",
                b.saturation, b.blur_px, b.total_px
            );
            write_table(&[b], cli.format, &out.join(format!("blur.{}", cli.format.extension())))?;
        }
        Command::Report => {
            let out = cli
                .out
                .clone()
                .ok_or_else(|| HarnessError::Config("--out is required for report".into()))?;
            let entries = std::fs::read_dir(&out).map_err(|source| HarnessError::Io { path: out.clone(), source })?;
            let mut names: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.to_string_lossy().ends_with(REPORTS_SUFFIX))
                .collect();
            names.sort();
            if names.is_empty() {
                return Err(HarnessError::EmptyReport);
            }
            let mut summary = String::new();
            for path in names {
                let reports: Vec<CriteriaReport> = read_jsonl(&path)?;
                let file = path.file_name().unwrap_or_default().to_string_lossy();
                let table = file.trim_end_matches(REPORTS_SUFFIX);
                let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from).collect();
                write_table(&rows, cli.format, &out.join(format!("{table}.{}", cli.format.extension())))?;
                if let Some(best) = reports
                    .iter()
                    .min_by(|a, b| a.e_epr_ab.mean.total_cmp(&b.e_epr_ab.mean))
                {
                    summary.push_str(&format!(
                        "{table}: {} rows; strongest A→B steering {:.3} ± {:.3} at ratio {:.3} ({})\n",
                        reports.len(),
                        best.e_epr_ab.mean,
                        best.e_epr_ab.sem,
                        best.splitting_ratio,
                        best.label
                    ));
                }
            }
            print!("{summary}");
            let path = out.join("summary.txt");
            std::fs::write(&path, summary).map_err(|source| HarnessError::Io { path, source })?;
        }
    }
    Ok(())
}
