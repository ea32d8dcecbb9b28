//! Command-line front end: argument parsing, command dispatch and report
//! rendering. `main.rs` only wires these to the process.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use nkoszul::hochschild::{OracleComparison, TorConcentration};
use nkoszul::koszul::{KoszulEngine, SequenceExactness};
use nkoszul::linalg::{Field, PrimeField, Rational, Rationals};
use nkoszul::verify::IdentityCheck;
use nkoszul::{HomologyTable, Presentation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "nkoszul", version, about = "Bimodule Koszul complexes and Hochschild homology of s-homogeneous algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Parse a presentation and print its canonical form
    Validate(RunArgs),
    /// Dimensions of the graded components A_n
    Dims(RunArgs),
    /// Dimensions of the spaces J_n
    Jdims(RunArgs),
    /// Check the structural identities of the complexes
    Verify(RunArgs),
    /// Homology of the augmented bimodule Koszul complex
    Koszul(RunArgs),
    /// Hochschild homology from the contracted complex
    Hochschild(RunArgs),
    /// Contracted complex against the bar complex, with Tor concentration
    OracleCompare(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Presentation file
    pub input: PathBuf,
    /// Truncation degree D
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
    /// Largest homological index; defaults to the largest the window allows
    #[arg(long)]
    pub max_index: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// `q` for the rationals or `fp:P` for the prime field with P elements
    #[arg(long, default_value = "q", value_parser = parse_field)]
    pub field: FieldChoice,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Report elapsed wall time
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime(u64),
}

impl FieldChoice {
    fn label(&self) -> String {
        match self {
            FieldChoice::Rational => "Q".to_string(),
            FieldChoice::Prime(p) => format!("F_{p}"),
        }
    }
}

pub fn parse_field(s: &str) -> Result<FieldChoice, String> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldChoice::Rational);
    }
    let p = s
        .strip_prefix("fp:")
        .ok_or_else(|| format!("expected `q` or `fp:P`, got {s:?}"))?
        .parse::<u64>()
        .map_err(|e| format!("bad prime in {s:?}: {e}"))?;
    PrimeField::new(p).map_err(|e| e.to_string())?;
    Ok(FieldChoice::Prime(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Validate,
    Dims,
    Jdims,
    Verify,
    Koszul,
    Hochschild,
    OracleCompare,
}

/// Everything a run needs, independent of how it was requested.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: PathBuf,
    pub max_degree: usize,
    pub max_index: Option<usize>,
    pub format: OutputFormat,
    pub field: FieldChoice,
    pub threads: Option<usize>,
    pub timing: bool,
}

impl From<CliCommand> for RunConfig {
    fn from(cmd: CliCommand) -> Self {
        let (command, args) = match cmd {
            CliCommand::Validate(a) => (CommandKind::Validate, a),
            CliCommand::Dims(a) => (CommandKind::Dims, a),
            CliCommand::Jdims(a) => (CommandKind::Jdims, a),
            CliCommand::Verify(a) => (CommandKind::Verify, a),
            CliCommand::Koszul(a) => (CommandKind::Koszul, a),
            CliCommand::Hochschild(a) => (CommandKind::Hochschild, a),
            CliCommand::OracleCompare(a) => (CommandKind::OracleCompare, a),
        };
        RunConfig {
            command,
            input: args.input,
            max_degree: args.max_degree,
            max_index: args.max_index,
            format: args.format,
            field: args.field,
            threads: args.threads,
            timing: args.timing,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] nkoszul::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// 1 for internal invariant failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                nkoszul::Error::Invariant(_) | nkoszul::Error::AmbientMismatch(..) | nkoszul::Error::DimensionMismatch(_),
            ) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationSummary {
    pub generators: Vec<String>,
    pub degree: usize,
    pub relation_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationTerm {
    pub word: String,
    pub coefficient: Rational,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Validate {
        relations: Vec<Vec<RelationTerm>>,
        canonical: String,
    },
    Dims {
        algebra_dims: Vec<usize>,
    },
    Jdims {
        j_dims: Vec<usize>,
    },
    Verify {
        checks: Vec<IdentityCheck>,
        passed: bool,
    },
    Koszul {
        homology: HomologyTable,
        exact: bool,
        verdict: String,
        presentation_sequence: Option<Vec<SequenceExactness>>,
    },
    Hochschild {
        homology: HomologyTable,
        totals: Vec<usize>,
        koszul_exact: bool,
    },
    OracleCompare {
        comparison: OracleComparison,
        agree: bool,
        koszul_exact: bool,
        tor: TorConcentration,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: CommandKind,
    pub field: String,
    pub max_degree: usize,
    pub max_index: Option<usize>,
    pub presentation: PresentationSummary,
    pub result: Payload,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_seconds: Option<f64>,
}

impl Report {
    /// 0 when every check and verdict holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        let ok = match &self.result {
            Payload::Verify { passed, .. } => *passed,
            Payload::Koszul { exact, presentation_sequence, .. } => {
                *exact && presentation_sequence.iter().flatten().all(SequenceExactness::is_exact)
            }
            Payload::OracleCompare { agree, .. } => *agree,
            _ => true,
        };
        if ok {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            OutputFormat::Table => render_table(self),
            OutputFormat::Tsv => render_tsv(self),
        }
    }
}

/// Loads the presentation and runs the command on a pool of the requested size.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let text = std::fs::read_to_string(&config.input).map_err(|source| CliError::Io {
        path: config.input.clone(),
        source,
    })?;
    let presentation = Presentation::parse(&text)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let mut report = pool.install(|| match config.field {
        FieldChoice::Rational => run_over(config, &presentation, Rationals),
        FieldChoice::Prime(p) => run_over(config, &presentation, PrimeField::new(p)?),
    })?;
    if config.timing {
        report.timing_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn default_index<F: Field>(engine: &KoszulEngine<F>, requested: Option<usize>) -> Result<usize, CliError> {
    match requested {
        Some(i) => Ok(i),
        None if engine.top_index() == 0 => Err(nkoszul::Error::WindowTooSmall {
            what: "homology at index 0".into(),
            required: engine.jump(1),
            got: engine.max_degree(),
        }
        .into()),
        None => Ok(engine.top_index() - 1),
    }
}

const NOT_KOSZUL_WARNING: &str =
    "the bimodule Koszul complex is not exact on this window; the contracted complex need not compute Hochschild homology";

fn run_over<F: Field>(config: &RunConfig, presentation: &Presentation, field: F) -> Result<Report, CliError> {
    let summary = PresentationSummary {
        generators: presentation.generators().to_vec(),
        degree: presentation.degree(),
        relation_dim: presentation.relations().dim(),
    };
    let mut max_index = None;
    let mut warnings = Vec::new();
    let result = if config.command == CommandKind::Validate {
        // coefficients must exist in the chosen field
        presentation.relations_over(&field)?;
        Payload::Validate {
            relations: presentation
                .relations()
                .basis()
                .row_vecs()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(w, c)| RelationTerm {
                            word: presentation.render_word(*w, presentation.degree()),
                            coefficient: c.clone(),
                        })
                        .collect()
                })
                .collect(),
            canonical: presentation.to_string(),
        }
    } else {
        let engine = KoszulEngine::new(presentation, field, config.max_degree)?;
        match config.command {
            CommandKind::Validate => unreachable!(),
            CommandKind::Dims => Payload::Dims {
                algebra_dims: engine.algebra().dims(),
            },
            CommandKind::Jdims => Payload::Jdims {
                j_dims: engine.tower().dims(),
            },
            CommandKind::Verify => {
                let checks = engine.verify_identities()?;
                let passed = checks.iter().all(|c| c.passed);
                Payload::Verify { checks, passed }
            }
            CommandKind::Koszul => {
                let i = default_index(&engine, config.max_index)?;
                max_index = Some(i);
                let report = engine.koszulity_report(i)?;
                let sequence = if engine.s() <= engine.max_degree() {
                    Some(engine.check_presentation_sequence()?)
                } else {
                    None
                };
                Payload::Koszul {
                    verdict: report.verdict(),
                    exact: report.exact,
                    homology: report.homology,
                    presentation_sequence: sequence,
                }
            }
            CommandKind::Hochschild => {
                let i = default_index(&engine, config.max_index)?;
                max_index = Some(i);
                let homology = engine.hochschild_dims(i)?;
                let koszul_exact = engine.koszulity_report(i)?.exact;
                if !koszul_exact {
                    warnings.push(NOT_KOSZUL_WARNING.to_string());
                }
                Payload::Hochschild {
                    totals: homology.totals(),
                    homology,
                    koszul_exact,
                }
            }
            CommandKind::OracleCompare => {
                let i = default_index(&engine, config.max_index)?;
                max_index = Some(i);
                let comparison = engine.compare_with_oracle(i)?;
                let koszul_exact = engine.koszulity_report(i)?.exact;
                if !koszul_exact {
                    warnings.push(NOT_KOSZUL_WARNING.to_string());
                }
                let tor = engine.tor_concentration(i)?;
                if tor.concentrated != koszul_exact {
                    warnings.push("Tor concentration disagrees with the Koszul verdict".to_string());
                }
                Payload::OracleCompare {
                    agree: comparison.diff.is_empty(),
                    comparison,
                    koszul_exact,
                    tor,
                }
            }
        }
    };
    Ok(Report {
        schema: SCHEMA_VERSION,
        command: config.command,
        field: config.field.label(),
        max_degree: config.max_degree,
        max_index,
        presentation: summary,
        result,
        warnings,
        timing_seconds: None,
    })
}

fn homology_grid(out: &mut String, title: &str, table: &HomologyTable) {
    let _ = writeln!(out, "{title}");
    let _ = write!(out, "{:>6}", "i\\m");
    for m in 0..=table.max_degree {
        let _ = write!(out, "{m:>6}");
    }
    let _ = writeln!(out, "{:>8}", "total");
    for (i, row) in table.entries.iter().enumerate() {
        let _ = write!(out, "{i:>6}");
        for d in row {
            let _ = write!(out, "{d:>6}");
        }
        let _ = writeln!(out, "{:>8}", row.iter().sum::<usize>());
    }
}

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

fn render_table(report: &Report) -> String {
    let mut out = String::new();
    let p = &report.presentation;
    let _ = writeln!(
        out,
        "{} generators ({}), degree {}, dim R = {}, field {}",
        p.generators.len(),
        p.generators.join(", "),
        p.degree,
        p.relation_dim,
        report.field
    );
    match &report.result {
        Payload::Validate { canonical, .. } => {
            let _ = writeln!(out, "valid presentation");
            out.push_str(canonical);
        }
        Payload::Dims { algebra_dims } => {
            let _ = writeln!(out, "dim A_n, n = 0..{}: {}", report.max_degree, join(algebra_dims));
        }
        Payload::Jdims { j_dims } => {
            let _ = writeln!(out, "dim J_n, n = 0..{}: {}", report.max_degree, join(j_dims));
        }
        Payload::Verify { checks, .. } => {
            for c in checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(out, "{status}  {}", c.name);
                for f in &c.failures {
                    let _ = writeln!(out, "      at {f}");
                }
            }
        }
        Payload::Koszul { homology, verdict, presentation_sequence, .. } => {
            homology_grid(&mut out, "dim H_i(K)_m", homology);
            if let Some(seq) = presentation_sequence {
                let bad: Vec<String> = seq.iter().filter(|s| !s.is_exact()).map(|s| s.degree.to_string()).collect();
                if bad.is_empty() {
                    let _ = writeln!(out, "K_2 -> K_1 -> K_0 -> A -> 0 exact at every degree");
                } else {
                    let _ = writeln!(out, "K_2 -> K_1 -> K_0 -> A -> 0 NOT exact at degrees {}", bad.join(", "));
                }
            }
            let _ = writeln!(out, "verdict: {verdict}");
        }
        Payload::Hochschild { homology, totals, .. } => {
            homology_grid(&mut out, "dim HH_i(A)_m", homology);
            let _ = writeln!(out, "totals: {}", join(totals));
        }
        Payload::OracleCompare { comparison, agree, tor, .. } => {
            homology_grid(&mut out, "contracted complex", &comparison.contracted);
            homology_grid(&mut out, "bar complex", &comparison.bar);
            if *agree {
                let _ = writeln!(out, "tables agree");
            } else {
                for (i, m, a, b) in &comparison.diff {
                    let _ = writeln!(out, "differ at i = {i}, m = {m}: {a} vs {b}");
                }
            }
            let conc = if tor.concentrated { "concentrated" } else { "not concentrated" };
            let _ = writeln!(out, "Tor_i(k, k) {conc} in degree nu(i)");
        }
    }
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if let Some(t) = report.timing_seconds {
        let _ = writeln!(out, "elapsed: {t:.3}s");
    }
    out
}

fn tsv_table(out: &mut String, name: &str, table: &HomologyTable) {
    for (i, row) in table.entries.iter().enumerate() {
        for (m, d) in row.iter().enumerate() {
            let _ = writeln!(out, "{name}\t{i}\t{m}\t{d}");
        }
    }
}

fn render_tsv(report: &Report) -> String {
    let mut out = String::new();
    match &report.result {
        Payload::Validate { relations, .. } => {
            out.push_str("relation\tword\tcoefficient\n");
            for (k, rel) in relations.iter().enumerate() {
                for t in rel {
                    let _ = writeln!(out, "{k}\t{}\t{}", t.word, t.coefficient);
                }
            }
        }
        Payload::Dims { algebra_dims } => {
            out.push_str("n\tdim\n");
            for (n, d) in algebra_dims.iter().enumerate() {
                let _ = writeln!(out, "{n}\t{d}");
            }
        }
        Payload::Jdims { j_dims } => {
            out.push_str("n\tdim\n");
            for (n, d) in j_dims.iter().enumerate() {
                let _ = writeln!(out, "{n}\t{d}");
            }
        }
        Payload::Verify { checks, .. } => {
            out.push_str("check\tpassed\n");
            for c in checks {
                let _ = writeln!(out, "{}\t{}", c.name, c.passed);
            }
        }
        Payload::Koszul { homology, .. } => {
            out.push_str("table\ti\tm\tdim\n");
            tsv_table(&mut out, "koszul", homology);
        }
        Payload::Hochschild { homology, .. } => {
            out.push_str("table\ti\tm\tdim\n");
            tsv_table(&mut out, "hochschild", homology);
        }
        Payload::OracleCompare { comparison, tor, .. } => {
            out.push_str("table\ti\tm\tdim\n");
            tsv_table(&mut out, "contracted", &comparison.contracted);
            tsv_table(&mut out, "bar", &comparison.bar);
            tsv_table(&mut out, "tor", &tor.tor);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_flag() {
        assert_eq!(parse_field("q"), Ok(FieldChoice::Rational));
        assert_eq!(parse_field("fp:7"), Ok(FieldChoice::Prime(7)));
        assert!(parse_field("fp:8").is_err());
        assert!(parse_field("fp:1").is_err());
        assert!(parse_field("r").is_err());
    }

    #[test]
    fn error_codes() {
        let input = CliError::Core(nkoszul::Error::WindowTooSmall {
            what: "x".into(),
            required: 3,
            got: 2,
        });
        assert_eq!(input.exit_code(), 2);
        assert_eq!(CliError::Core(nkoszul::Error::Invariant("x".into())).exit_code(), 1);
    }

    #[test]
    fn clap_parses_every_command() {
        for cmd in ["validate", "dims", "jdims", "verify", "koszul", "hochschild", "oracle-compare"] {
            let cli = Cli::try_parse_from(["nkoszul", cmd, "p.txt", "--max-degree", "4", "--format", "json"]).unwrap();
            let config = RunConfig::from(cli.command);
            assert_eq!(config.max_degree, 4);
            assert_eq!(config.format, OutputFormat::Json);
        }
    }
}
