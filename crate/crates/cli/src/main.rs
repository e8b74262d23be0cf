//! `ralt` - radar altimeter coexistence simulator.
//!
//! Exit codes: 0 pass or valid output, 1 usage or configuration error, 2 no computed data,
//! 3 compliance failure.

mod config;
mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ralt_core::cert::{self, build_cia_with, build_moc_matrix, classify_change, classify_with, DocFormat, MocMatrix};
use ralt_core::compliance::{
    check_compliance, classify_output, dual_comparison, run_sweep, trials_csv, AccuracyTable, TOOL_VERSION,
};
use ralt_core::{json, seed, AltimeterOutput};
use serde::Serialize;

use config::{load_scenario, Overrides};
use output::{resolve_dir, write_atomic, Format};

const EXIT_CONFIG: u8 = 1;
const EXIT_NCD: u8 = 2;
const EXIT_FAIL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "ralt", version, about = "Radar altimeter coexistence simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single trial at one altitude and print the altimeter output.
    Simulate(SimulateArgs),
    /// Monte Carlo sweep over the altitude grid, checked against the accuracy table.
    Sweep(SweepArgs),
    /// Fly two units down a descent profile and compare their outputs step by step.
    Compare(CompareArgs),
    /// Classify a change descriptor as major or minor.
    Classify(ClassifyArgs),
    /// Assemble and validate a change impact analysis document.
    Cia(CiaArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file (TOML); built-in defaults when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: scenario `output.dir`, then $RALT_OUT_DIR, then ./ralt-out].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    /// True altitude, ft.
    #[arg(long)]
    altitude_ft: f64,
    /// Trial index; selects the noise realisation.
    #[arg(long, default_value_t = 0)]
    trial: usize,
    /// Simulate the legacy unit: no filter, no gain compensation.
    #[arg(long)]
    no_filter: bool,
    /// Also write the dechirped samples to `samples.csv`.
    #[arg(long)]
    raw_csv: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    /// Override trials per altitude.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    no_filter: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Scenario file with a `[compare]` section.
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Change descriptor (TOML); the receiver filter retrofit when omitted.
    #[arg(long)]
    change: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CiaFormat {
    Json,
    Text,
    Both,
}

#[derive(Debug, Args)]
struct CiaArgs {
    /// CIA inputs (TOML): `[change]`, optional `[rules]`, `[notes]`, `[[moc]]`, `[[evidence]]`.
    #[arg(long)]
    inputs: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    format: CiaFormat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Compare(a) => compare(a),
        Command::Classify(a) => classify(a),
        Command::Cia(a) => cia(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    tool_version: &'a str,
    scenario_fingerprint: String,
    altitude_ft: f64,
    trial: usize,
    trial_seed: u64,
    output: &'a AltimeterOutput,
    estimate_ft: Option<f64>,
    error_ft: Option<f64>,
    classification: &'a str,
}

fn simulate(a: SimulateArgs) -> Result<u8> {
    let loaded = load_scenario(
        a.common.scenario.as_deref(),
        Overrides {
            seed: a.common.seed,
            trials: None,
            no_filter: a.no_filter,
        },
    )?;
    let s = &loaded.scenario;
    let trial_seed = seed::trial_seed(s.seed, 0, a.trial);
    let samples = s.trial_samples(a.altitude_ft, trial_seed)?;
    let out = ralt_core::fmcw::estimate_altitude(&samples, &s.chirp, &s.receiver)?;
    let (error_ft, class) = classify_output(&out, a.altitude_ft, &AccuracyTable::default())?;
    let report = SimulateReport {
        tool_version: TOOL_VERSION,
        scenario_fingerprint: s.fingerprint(),
        altitude_ft: a.altitude_ft,
        trial: a.trial,
        trial_seed,
        output: &out,
        estimate_ft: out.altitude_estimate_m.map(ralt_core::units::m_to_ft),
        error_ft,
        classification: class.as_str(),
    };
    print!("{}", String::from_utf8(json::canonical_bytes(&report)?)?);
    if a.raw_csv {
        let dir = resolve_dir(a.common.out.as_deref(), loaded.output.dir.as_deref());
        let mut csv = String::from("index,i,q\n");
        for (k, z) in samples.iter().take(s.chirp.sweep_samples()).enumerate() {
            writeln!(csv, "{k},{},{}", z.re, z.im)?;
        }
        let path = write_atomic(&dir, "samples.csv", csv.as_bytes())?;
        eprintln!("wrote {}", path.display());
    }
    Ok(if out.is_valid() { 0 } else { EXIT_NCD })
}

fn sweep(a: SweepArgs) -> Result<u8> {
    let loaded = load_scenario(
        a.common.scenario.as_deref(),
        Overrides {
            seed: a.common.seed,
            trials: a.trials,
            no_filter: a.no_filter,
        },
    )?;
    let s = &loaded.scenario;
    let table = AccuracyTable::default();
    let results = run_sweep(s, &table)?;
    let report = check_compliance(&results, &table, loaded.pass_rate, &s.fingerprint())?;
    let dir = resolve_dir(a.common.out.as_deref(), loaded.output.dir.as_deref());
    let format = a.format.or(loaded.output.format).unwrap_or(Format::Both);
    if format.json() {
        write_atomic(&dir, "report.json", &report.to_json()?)?;
    }
    if format.csv() {
        write_atomic(&dir, "trials.csv", &trials_csv(&results)?)?;
    }
    println!(
        "{}: {} points, {} trials, {} erroneous, {} ncd -> {}",
        if report.passed() { "PASS" } else { "FAIL" },
        report.points.len(),
        results.len(),
        report.total_erroneous(),
        report.total_ncd(),
        dir.display()
    );
    for alt in &report.failing_altitudes_ft {
        println!("  failing altitude {alt} ft");
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn compare(a: CompareArgs) -> Result<u8> {
    let loaded = load_scenario(
        Some(&a.scenario),
        Overrides {
            seed: a.seed,
            ..Overrides::default()
        },
    )?;
    let Some(c) = &loaded.compare else {
        bail!("{}: missing [compare] section", a.scenario.display());
    };
    let report = dual_comparison(
        &loaded.scenario,
        &c.profile_ft()?,
        &c.a,
        &c.b,
        c.limit,
        &AccuracyTable::default(),
    )
    .map_err(|e| loaded.source.attribute(e))?;
    let dir = resolve_dir(a.out.as_deref(), loaded.output.dir.as_deref());
    let format = a.format.or(loaded.output.format).unwrap_or(Format::Both);
    if format.json() {
        write_atomic(&dir, "comparison.json", &report.to_json()?)?;
    }
    if format.csv() {
        write_atomic(&dir, "comparison.csv", &report.to_csv()?)?;
    }
    println!(
        "{}: {} vs {}, {} steps, max divergence {:.3} ft, {} exceedances, {} ncd disagreements -> {}",
        if report.passed() { "PASS" } else { "FAIL" },
        report.unit_a,
        report.unit_b,
        report.steps.len(),
        report.max_observed_divergence_ft,
        report.exceedances,
        report.ncd_disagreements,
        dir.display()
    );
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn classify(a: ClassifyArgs) -> Result<u8> {
    let change = match &a.change {
        Some(p) => config::load_change(p)?,
        None => cert::ChangeDescriptor::filter_installation(),
    };
    let c = classify_change(&change);
    let bytes = json::canonical_bytes(&c)?;
    let dir = resolve_dir(a.out.as_deref(), None);
    write_atomic(&dir, "classification.json", &bytes)?;
    print!("{}", String::from_utf8(bytes)?);
    Ok(0)
}

fn cia(a: CiaArgs) -> Result<u8> {
    let (inputs, source) = config::load_cia_inputs(&a.inputs)?;
    inputs.change.validate().map_err(|e| source.attribute(e))?;
    let matrix = match inputs.moc {
        Some(rows) => build_moc_matrix(rows).map_err(|e| source.attribute(e))?,
        None => MocMatrix::default(),
    };
    let classification = classify_with(&inputs.rules, &inputs.change);
    let doc = build_cia_with(
        inputs.rules,
        inputs.change,
        classification,
        matrix,
        inputs.evidence,
        inputs.notes,
    )
    .with_context(|| format!("{}: CIA rejected", a.inputs.display()))?;
    let dir = resolve_dir(a.out.as_deref(), None);
    let mut written = Vec::new();
    if matches!(a.format, CiaFormat::Json | CiaFormat::Both) {
        written.push(write_atomic(&dir, "cia.json", &cert::emit_document(&doc, DocFormat::Json)?)?);
    }
    if matches!(a.format, CiaFormat::Text | CiaFormat::Both) {
        written.push(write_atomic(&dir, "cia.txt", &cert::emit_document(&doc, DocFormat::Text)?)?);
    }
    let level = match doc.declaration.level {
        cert::ChangeLevel::Major => "major",
        cert::ChangeLevel::Minor => "minor",
    };
    println!("{level} change, {} evidence links", doc.verification_evidence.len());
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::OUT_DIR_ENV;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn env_var_name_is_documented() {
        let help = Cli::command()
            .find_subcommand_mut("sweep")
            .unwrap()
            .render_long_help()
            .to_string();
        assert!(help.contains(OUT_DIR_ENV), "{help}");
    }
}
