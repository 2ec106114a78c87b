//! The `evident` command line: loads a knowledge base and answers belief and
//! extension queries about it, as text or JSON.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use evident_core::{
    b_extensions_defaults, b_extensions_sources, bel_exact, bel_mc, combined_belief, m_extensions, parse_formula,
    parse_kb, reiter_extensions, satisfiable, Error, Extension, Formula, KnowledgeBase, McConfig, ModelKind,
    ParseError,
};
use serde::Serialize;

/// Reasoning with uncertain rules and defaults.
#[derive(Debug, Parser)]
#[command(name = "evident", version)]
struct Cli {
    /// Knowledge base file.
    #[arg(long, global = true, value_name = "PATH")]
    kb: Option<PathBuf>,

    /// Print every report as a single JSON object.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate the knowledge base.
    Check,
    /// Exact belief in a formula.
    Bel {
        formula: String,
        #[arg(long, value_enum, default_value_t = Model::Ds)]
        model: Model,
    },
    /// Monte-Carlo estimate of belief in a formula (DS model).
    McBel {
        formula: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Give up after this many consecutive inconsistent draws.
        #[arg(long, default_value_t = 1_000_000)]
        max_rejections: u64,
    },
    /// Reiter extensions of the defaults.
    Extensions,
    /// Maximal extensions of the defaults.
    MExtensions,
    /// Extensions obtained as reliabilities tend to 1; uses the defaults when
    /// the knowledge base has any, the numeric rules otherwise.
    BExtensions {
        #[arg(long, value_enum, default_value_t = Model::Ds)]
        model: Model,
    },
    /// Lower, upper and average belief across the default extensions.
    Belstar { formula: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Ds,
    Priority,
}

impl Model {
    fn kind(self) -> ModelKind {
        match self {
            Model::Ds => ModelKind::Ds,
            Model::Priority => ModelKind::Priority,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Model::Ds => "ds",
            Model::Priority => "priority",
        }
    }
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn parse(origin: &str, e: &ParseError) -> Self {
        Failure::usage(format!("{origin}:{e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ContradictorySources | Error::SizeLimit { .. } | Error::RejectionLimit { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli, stderr) {
        Ok(report) => match stdout.write_all(report.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            f.code
        }
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<String, Failure> {
    let path = cli.kb.as_deref().ok_or_else(|| Failure::usage("no knowledge base given (use --kb <PATH>)"))?;
    let kb = load(path)?;
    let json = cli.json;
    match &cli.command {
        Command::Check => check(&kb, json),
        Command::Bel { formula, model } => {
            let d = query(formula)?;
            let value = bel_exact(&kb.evidence_model(model.kind())?, &d)?;
            Ok(if json {
                to_json(&BelReport { query: d.to_string(), model: model.name(), value })
            } else {
                format!("{value:.9}\n")
            })
        }
        Command::McBel { formula, trials, seed, max_rejections } => {
            let d = query(formula)?;
            let cfg = McConfig { trials: *trials, seed: *seed, max_rejections_per_trial: *max_rejections };
            let est = bel_mc(&kb.evidence_model(ModelKind::Ds)?, &d, &cfg)?;
            Ok(if json {
                to_json(&McReport {
                    query: d.to_string(),
                    model: "ds",
                    estimate: est.estimate,
                    ci_low: est.ci_low,
                    ci_high: est.ci_high,
                    trials: est.trials,
                    seed: *seed,
                    successes: est.successes,
                    rejected_samples: est.rejected_samples,
                })
            } else {
                format!(
                    "{:.6} (95% CI {:.6}..{:.6}, {} trials, seed {})\n",
                    est.estimate, est.ci_low, est.ci_high, est.trials, seed
                )
            })
        }
        Command::Extensions => {
            let ext = reiter_extensions(&kb.default_theory()?)?;
            Ok(extensions_report("reiter", &ext, None, json))
        }
        Command::MExtensions => {
            let ext = m_extensions(&kb.default_theory()?)?;
            Ok(extensions_report("m", &ext, None, json))
        }
        Command::BExtensions { model } => {
            let (source, b) = if kb.defaults.is_empty() {
                ("rules", b_extensions_sources(&kb.evidence_model(model.kind())?)?)
            } else {
                ("defaults", b_extensions_defaults(&kb.default_theory()?)?)
            };
            let agree = b.agree();
            if !agree {
                let _ = writeln!(
                    stderr,
                    "warning: maximal index sets give {} theories, theory-maximal selection gives {}",
                    b.sigma_maximal.len(),
                    b.extensions.len()
                );
            }
            Ok(extensions_report("b", &b.extensions, Some((source, agree)), json))
        }
        Command::Belstar { formula } => {
            let d = query(formula)?;
            let c = combined_belief(&kb.combined_model(), &d)?;
            Ok(if json {
                to_json(&BelstarReport {
                    query: d.to_string(),
                    lower: c.lower,
                    upper: c.upper,
                    average: c.average,
                    per_extension: c.per_extension,
                })
            } else {
                format!("BEL_*   {:.9}\nBEL^*   {:.9}\nBEL-avg {:.9}\n", c.lower, c.upper, c.average)
            })
        }
    }
}

fn load(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_kb(&text).map_err(|e| Failure::parse(&path.display().to_string(), &e))
}

fn query(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| Failure::parse("query", &e))
}

fn check(kb: &KnowledgeBase, json: bool) -> Result<String, Failure> {
    kb.evidence_model(ModelKind::Priority)?;
    kb.default_theory()?;
    let report = CheckReport {
        atoms: kb.atoms().len(),
        rules: kb.rules.len(),
        defaults: kb.defaults.len(),
        facts: kb.facts.len(),
        consistent: satisfiable(&kb.facts),
    };
    Ok(if json {
        to_json(&report)
    } else {
        format!(
            "atoms: {}\nrules: {}\ndefaults: {}\nfacts: {} ({})\n",
            report.atoms,
            report.rules,
            report.defaults,
            report.facts,
            if report.consistent { "consistent" } else { "inconsistent" }
        )
    })
}

fn extensions_report(kind: &'static str, ext: &[Extension], b: Option<(&'static str, bool)>, json: bool) -> String {
    if json {
        return to_json(&ExtensionsReport {
            kind,
            source: b.map(|(s, _)| s),
            sigma_maximal_agrees: b.map(|(_, a)| a),
            extensions: ext,
        });
    }
    if ext.is_empty() {
        return "no extensions\n".to_owned();
    }
    ext.iter()
        .map(|e| {
            let base: Vec<String> = e.base.formulas().iter().map(Formula::to_string).collect();
            let base = if base.is_empty() { "true".to_owned() } else { base.join(", ") };
            format!("{} {base}\n", e.fired)
        })
        .collect()
}

fn to_json<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string(report).expect("reports serialise");
    out.push('\n');
    out
}

#[derive(Serialize)]
struct CheckReport {
    atoms: usize,
    rules: usize,
    defaults: usize,
    facts: usize,
    consistent: bool,
}

#[derive(Serialize)]
struct BelReport {
    query: String,
    model: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct McReport {
    query: String,
    model: &'static str,
    estimate: f64,
    ci_low: f64,
    ci_high: f64,
    trials: u64,
    seed: u64,
    successes: u64,
    rejected_samples: u64,
}

#[derive(Serialize)]
struct ExtensionsReport<'a> {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_maximal_agrees: Option<bool>,
    extensions: &'a [Extension],
}

#[derive(Serialize)]
struct BelstarReport {
    query: String,
    lower: f64,
    upper: f64,
    average: f64,
    per_extension: Vec<f64>,
}
