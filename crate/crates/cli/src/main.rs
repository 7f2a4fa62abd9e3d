//! `frevival` — decide fractional revival on quasi-abelian Cayley graphs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use frevival_core::catalog::{catalog_for_families, scan_catalog, Family};
use frevival_core::cayley::spectrum_by_character;
use frevival_core::group::{build_group_with_cap, conjugacy_classes, DEFAULT_SIZE_CAP};
use frevival_core::report::{
    analyze, character_table_for_spec, character_table_json, resolve_connection, scan_document,
    spectrum_document, AnalysisInput, AnalyzeOptions,
};
use frevival_core::GroupSpec;

const EXIT_NO_WITNESS: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "frevival",
    version,
    about = "Exact fractional-revival decisions on quasi-abelian Cayley graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the JSON document to this path instead of stdout.
    #[arg(long, value_name = "PATH")]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on one graph: validate, spectrum, decide, verify.
    Analyze {
        /// Input JSON with "group" and "connection" fields.
        input: PathBuf,
        /// Oracle acceptance tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Extra times t (radians) to probe for a revival shape.
        #[arg(long, value_name = "T", num_args = 1.., value_delimiter = ',')]
        times: Vec<f64>,
        /// Include wall-clock timings (breaks byte-for-byte reproducibility).
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Scan a catalog of groups and connection sets, verifying everything.
    Scan {
        /// Largest group order to include.
        #[arg(long, default_value_t = 16)]
        max_order: usize,
        /// Group families: abelian, dihedral, symmetric, quaternion.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "abelian,dihedral,symmetric,quaternion"
        )]
        families: Vec<Family>,
        /// Seed for randomized connection-set sampling.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Oracle acceptance tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Additional group-spec JSON files to include in the catalog.
        #[arg(long, value_name = "PATH")]
        group_file: Vec<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit the exact character table of a group as JSON.
    Chartable {
        /// Input JSON holding a group spec (bare, or under a "group" key).
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Emit the exact per-character spectrum of a graph as JSON.
    Spectrum {
        /// Input JSON with "group" and "connection" fields.
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Re-verify the witnesses stored in an analysis report.
    Verify {
        /// A report produced by `analyze --json-out`.
        report: PathBuf,
        /// Oracle acceptance tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn size_cap() -> usize {
    std::env::var("FREVIVAL_SIZE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

fn emit(doc: &str, out: &OutputArgs) -> anyhow::Result<()> {
    match &out.json_out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            f.write_all(doc.as_bytes())?;
            f.write_all(b"\n")?;
        }
        None => println!("{doc}"),
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn read_group_spec(path: &Path) -> anyhow::Result<GroupSpec> {
    let value: serde_json::Value = read_json(path)?;
    let spec_value = value.get("group").cloned().unwrap_or(value);
    Ok(serde_json::from_value(spec_value)?)
}

fn run() -> anyhow::Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            input,
            tolerance,
            times,
            timings,
            out,
        } => {
            let doc: AnalysisInput = read_json(&input)?;
            let opts = AnalyzeOptions {
                size_cap: size_cap(),
                tolerance,
                extra_times: times,
                include_timings: timings,
            };
            let report = analyze(&doc, &opts)?;
            let found = report.has_witnesses();
            emit(&report.to_json_string(), &out)?;
            if !found {
                eprintln!(
                    "no fractional revival: {}",
                    report.no_witness_reason.as_deref().unwrap_or("unknown")
                );
                return Ok(EXIT_NO_WITNESS);
            }
            Ok(0)
        }
        Command::Scan {
            max_order,
            families,
            seed,
            tolerance,
            group_file,
            out,
        } => {
            if max_order > 512 {
                bail!("scan max order is capped at 512");
            }
            let mut entries = catalog_for_families(&families, max_order);
            for path in &group_file {
                let spec = read_group_spec(path)?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                entries.push(frevival_core::catalog::CatalogEntry { name, spec });
            }
            let report = scan_catalog(&entries, seed, tolerance)?;
            let doc = scan_document(&report, &families, max_order);
            emit(&serde_json::to_string_pretty(&doc)?, &out)?;
            let (fr, pst) = report.witness_counts();
            eprintln!(
                "scanned {} graphs ({} connected): {} with witnesses ({} fr-proper, {} pst), {} violations",
                report.records.len(),
                report.connected_count(),
                doc.total_with_witnesses,
                fr,
                pst,
                doc.violations.len()
            );
            if !doc.violations.is_empty() {
                return Ok(EXIT_NO_WITNESS);
            }
            Ok(0)
        }
        Command::Chartable { input, out } => {
            let spec = read_group_spec(&input)?;
            let g = build_group_with_cap(&spec, size_cap())?;
            let table = character_table_for_spec(&spec, &g)?;
            let doc = character_table_json(&g, &table);
            emit(&serde_json::to_string_pretty(&doc)?, &out)?;
            Ok(0)
        }
        Command::Spectrum { input, out } => {
            let doc: AnalysisInput = read_json(&input)?;
            let g = build_group_with_cap(&doc.group, size_cap())?;
            let classes = conjugacy_classes(&g);
            let s = resolve_connection(&g, &classes, &doc.connection)?;
            let table = character_table_for_spec(&doc.group, &g)?;
            let spectrum = spectrum_by_character(&s, &table);
            let out_doc = spectrum_document(&g, &s, &spectrum);
            emit(&serde_json::to_string_pretty(&out_doc)?, &out)?;
            Ok(0)
        }
        Command::Verify {
            report,
            tolerance,
            out,
        } => {
            let stored: serde_json::Value = read_json(&report)?;
            let input_echo = stored
                .get("input")
                .context("report has no 'input' echo to re-run")?;
            let group: GroupSpec = serde_json::from_value(
                input_echo
                    .get("group")
                    .context("input echo has no group")?
                    .clone(),
            )?;
            let class_ids: Vec<usize> = serde_json::from_value(
                input_echo
                    .get("connection_classes")
                    .context("input echo has no connection classes")?
                    .clone(),
            )?;
            let g = build_group_with_cap(&group, size_cap())?;
            let classes = conjugacy_classes(&g);
            let reps: Vec<serde_json::Value> = class_ids
                .iter()
                .map(|&c| serde_json::Value::from(classes.representatives[c]))
                .collect();
            let doc = AnalysisInput {
                schema: None,
                group,
                connection: serde_json::from_value(serde_json::json!({ "classes": reps }))?,
            };
            let opts = AnalyzeOptions {
                size_cap: size_cap(),
                tolerance,
                extra_times: Vec::new(),
                include_timings: false,
            };
            let fresh = analyze(&doc, &opts)?;
            let stored_witnesses = stored
                .get("witnesses")
                .and_then(|w| w.as_array())
                .cloned()
                .unwrap_or_default();
            let fresh_keys: Vec<(u64, u64, u64)> = fresh
                .witnesses
                .iter()
                .map(|w| (w.involution as u64, w.modulus, w.k))
                .collect();
            let mut all_pass = true;
            let mut results = Vec::new();
            for w in &stored_witnesses {
                let key = (
                    w["involution"].as_u64().unwrap_or(u64::MAX),
                    w["M"].as_u64().unwrap_or(0),
                    w["k"].as_u64().unwrap_or(0),
                );
                let idx = fresh_keys.iter().position(|&k| k == key);
                let pass = idx.is_some_and(|i| {
                    fresh.witnesses[i]
                        .certificates
                        .oracle
                        .as_ref()
                        .map(|o| o.pass)
                        .unwrap_or(false)
                });
                all_pass &= pass;
                results.push(serde_json::json!({
                    "involution": key.0,
                    "M": key.1,
                    "k": key.2,
                    "pass": pass,
                }));
            }
            let missing = fresh_keys.len() != stored_witnesses.len();
            all_pass &= !missing;
            let doc = serde_json::json!({
                "schema": "frevival/1",
                "witnesses": results,
                "witness_count_matches": !missing,
                "pass": all_pass,
            });
            emit(&serde_json::to_string_pretty(&doc)?, &out)?;
            Ok(if all_pass { 0 } else { EXIT_NO_WITNESS })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
