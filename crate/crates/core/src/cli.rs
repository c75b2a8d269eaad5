//! Command-line front end: `label`, `sweep` and `metrics` subcommands.
//!
//! Exit codes: 0 on success, 1 on runtime or data errors, 2 on usage
//! errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::embedding::{normalize_with, parse_embeddings, EmbeddingFormat, NormalizationScope};
use crate::error::Error;
use crate::labeler::{label_dimensions, LabelFilter, Theta};
use crate::lexicon::{self, Lexicon, LexiconFormat};
use crate::metrics::{sweep_with, AvgMode, LabelCounting, SweepOptions};
use crate::report;

/// Grid used by `sweep` when `--thetas` is not given.
pub const DEFAULT_THETA_GRID: [f64; 4] = [0.81, 0.79, 0.77, 0.75];

pub const DEFAULT_THETA: f64 = 0.75;

#[derive(Debug, Parser)]
#[command(
    name = "lex2vec",
    version,
    about = "Name word-embedding dimensions with lexicon labels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label every embedding dimension and print one record per dimension.
    Label(LabelArgs),
    /// Measure coverage over a grid of thetas.
    Sweep(SweepArgs),
    /// Measure coverage at a single theta.
    Metrics(MetricsArgs),
}

/// A `--lexicon PATH:FORMAT` argument.
#[derive(Clone, Debug, PartialEq)]
pub struct LexiconSpec {
    pub path: PathBuf,
    pub format: LexiconFormat,
}

impl FromStr for LexiconSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (path, format) = s
            .rsplit_once(':')
            .ok_or_else(|| format!("expected PATH:FORMAT, got `{s}`"))?;
        if path.is_empty() {
            return Err(format!("empty lexicon path in `{s}`"));
        }
        Ok(LexiconSpec {
            path: PathBuf::from(path),
            format: format.parse()?,
        })
    }
}

fn parse_theta(s: &str) -> Result<Theta, String> {
    let value: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    Theta::new(value).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Embedding file, or `-` for standard input.
    #[arg(long)]
    pub embeddings: String,

    /// auto, word2vec or glove.
    #[arg(long, default_value = "auto")]
    pub embedding_format: EmbeddingFormat,

    /// Lexicon as PATH:FORMAT with FORMAT one of nrc, liwc, plain. Repeatable.
    #[arg(long = "lexicon", value_name = "PATH:FORMAT", required = true)]
    pub lexicons: Vec<LexiconSpec>,

    /// per-dimension, per-vector or global min-max scaling.
    #[arg(long, default_value = "per-dimension")]
    pub normalization: NormalizationScope,

    /// none, cap:N or topk:N.
    #[arg(long, default_value = "none")]
    pub filter: LabelFilter,

    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Emit JSON instead of TSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = Theta::new(DEFAULT_THETA).unwrap(), value_parser = parse_theta)]
    pub theta: Theta,

    /// Keep the words behind each label (JSON output only).
    #[arg(long)]
    pub contributors: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Comma-separated thetas.
    #[arg(long, value_delimiter = ',', value_parser = parse_theta)]
    pub thetas: Option<Vec<Theta>>,

    /// all or named: denominator for the average column.
    #[arg(long, default_value = "all")]
    pub avg_mode: AvgMode,

    /// Count distinct labels instead of label mass.
    #[arg(long)]
    pub distinct: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = Theta::new(DEFAULT_THETA).unwrap(), value_parser = parse_theta)]
    pub theta: Theta,

    #[arg(long, default_value = "all")]
    pub avg_mode: AvgMode,

    #[arg(long)]
    pub distinct: bool,
}

/// A failure tagged with the pipeline stage it happened in.
#[derive(Debug)]
struct StageError {
    stage: &'static str,
    context: String,
    source: Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} stage: {}: {}", self.stage, self.context, self.source)
    }
}

fn stage(stage: &'static str, context: impl Into<String>) -> impl FnOnce(Error) -> StageError {
    let context = context.into();
    move |source| StageError {
        stage,
        context,
        source,
    }
}

enum Failure {
    Usage(String),
    Runtime(StageError),
}

impl From<StageError> for Failure {
    fn from(err: StageError) -> Self {
        Failure::Runtime(err)
    }
}

struct Loaded {
    table: crate::embedding::NormalizedEmbeddingTable,
    lexicons: Vec<Lexicon>,
}

fn load_inputs(
    input: &InputArgs,
    stdin: &mut dyn BufRead,
    stderr: &mut dyn Write,
) -> Result<Loaded, StageError> {
    let table = if input.embeddings == "-" {
        parse_embeddings(stdin, input.embedding_format)
            .map_err(stage("parse", "embeddings <stdin>"))?
    } else {
        let context = format!("embeddings `{}`", input.embeddings);
        let file = File::open(&input.embeddings).map_err(|e| stage("parse", &context)(e.into()))?;
        parse_embeddings(BufReader::new(file), input.embedding_format)
            .map_err(stage("parse", context))?
    };
    if table.duplicates_skipped() > 0 {
        let _ = writeln!(
            stderr,
            "warning: skipped {} duplicate word(s) in embeddings",
            table.duplicates_skipped()
        );
    }
    let table = normalize_with(&table, input.normalization).map_err(stage(
        "normalize",
        format!("embeddings `{}`", input.embeddings),
    ))?;

    let mut lexicons = Vec::with_capacity(input.lexicons.len());
    for spec in &input.lexicons {
        let context = format!("{} lexicon `{}`", spec.format, spec.path.display());
        let file = File::open(&spec.path).map_err(|e| stage("lexicon", &context)(e.into()))?;
        let lex =
            lexicon::load(BufReader::new(file), spec.format).map_err(stage("lexicon", context))?;
        lexicons.push(lex);
    }
    Ok(Loaded { table, lexicons })
}

fn run_label(
    args: &LabelArgs,
    stdin: &mut dyn BufRead,
    stderr: &mut dyn Write,
) -> Result<String, Failure> {
    let loaded = load_inputs(&args.input, stdin, stderr)?;
    let lexicon = match loaded.lexicons.as_slice() {
        [single] => single.clone(),
        many => Lexicon::merged(many),
    };
    let labeling = label_dimensions(&loaded.table, &lexicon, args.theta, args.contributors)
        .map_err(stage("label", format!("resource `{}`", lexicon.name())))?;
    let labeling = args.input.filter.apply(labeling);
    Ok(if args.input.json {
        report::labeling_to_json(&labeling)
    } else {
        report::render_labeling_tsv(&labeling)
    })
}

fn run_report(
    input: &InputArgs,
    thetas: &[Theta],
    avg_mode: AvgMode,
    distinct: bool,
    stdin: &mut dyn BufRead,
    stderr: &mut dyn Write,
) -> Result<String, Failure> {
    if thetas.is_empty() {
        return Err(Failure::Usage("theta grid is empty".into()));
    }
    let loaded = load_inputs(input, stdin, stderr)?;
    let options = SweepOptions {
        counting: if distinct {
            LabelCounting::Distinct
        } else {
            LabelCounting::Mass
        },
        filter: input.filter,
    };
    let report = sweep_with(&loaded.table, &loaded.lexicons, thetas, options)
        .map_err(stage("label", "sweep"))?;
    Ok(if input.json {
        report::report_to_json(&report)
    } else {
        report::render_sweep_tsv(&report, avg_mode)
    })
}

fn execute(
    cli: &Cli,
    stdin: &mut dyn BufRead,
    stderr: &mut dyn Write,
) -> Result<(String, Option<PathBuf>), Failure> {
    let (text, output) = match &cli.command {
        Command::Label(args) => (run_label(args, stdin, stderr)?, &args.input.output),
        Command::Sweep(args) => {
            let default_grid: Vec<Theta> = DEFAULT_THETA_GRID
                .iter()
                .map(|&t| Theta::new(t).expect("default grid is valid"))
                .collect();
            let thetas = args.thetas.as_deref().unwrap_or(&default_grid);
            let text = run_report(
                &args.input,
                thetas,
                args.avg_mode,
                args.distinct,
                stdin,
                stderr,
            )?;
            (text, &args.input.output)
        }
        Command::Metrics(args) => {
            let text = run_report(
                &args.input,
                &[args.theta],
                args.avg_mode,
                args.distinct,
                stdin,
                stderr,
            )?;
            (text, &args.input.output)
        }
    };
    Ok((text, output.clone()))
}

/// Parse `args` and run the selected subcommand, returning the exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            if err.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return err.exit_code();
        }
    };

    match execute(&cli, stdin, stderr) {
        Ok((text, None)) => match stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
        {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: output stage: <stdout>: {e}");
                1
            }
        },
        Ok((text, Some(path))) => match write_file(&path, &text) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: output stage: `{}`: {e}", path.display());
                1
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Runtime(err)) => {
            let _ = writeln!(stderr, "error: {err}");
            1
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> io::Result<()> {
    let mut file = File::create(path)?;
    file.write_all(text.as_bytes())?;
    file.flush()
}
