//! `qmdt`: command-line frontend for the quadric-mdt engine.
//!
//! Every subcommand reads JSON (inline, `@path` or `-` for stdin), validates
//! it through the library constructors and writes JSON or text to stdout or
//! to `--output`. Failures print a JSON object `{"error": code, "message": ..}`
//! on stderr. The exit code is 2 for invalid input and 3 when the enumeration
//! bound is exceeded.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadric_mdt::chow::{self, ChowError, Cycle};
use quadric_mdt::corr::{self, CorrError, Correspondence};
use quadric_mdt::mdt::{
    self, check_partition, enumerate_mdt, render_ascii, render_svg, MdtError, MdtPartition, RuleSet, ShellDiagram,
    DEFAULT_MAX_R,
};
use quadric_mdt::profile::{self, I1Rules, ProfileError, QuadricProfile};
use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

const DEFAULT_I1_RULES: &str = "base,singular";
const DEFAULT_MDT_RULES: &str = "proven";

#[derive(Debug, Parser)]
#[command(
    name = "qmdt",
    version,
    about = "Cycle calculus and MDT constraint engine for quadrics in characteristic 2"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Comma-separated rule list. First-index rules (`base`, `singular`,
    /// `conjectural`) for pattern-enum and i1-bounds; MDT rules (`proven`,
    /// `conjectural`, `all`, `R-DUAL`, ...) for mdt-solve and check.
    #[arg(long, global = true)]
    rules: Option<String>,
    /// Output format. The default depends on the subcommand.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Largest `r` the partition enumerator accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_R)]
    max_r: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Ascii,
    Svg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the splitting patterns of type (r, s) allowed by the first-index rules.
    PatternEnum {
        #[arg(short)]
        r: usize,
        #[arg(short)]
        s: usize,
    },
    /// Enumerate the partitions of Lambda(X) that no selected rule excludes.
    MdtSolve {
        /// Profile JSON `{"dim":..,"r":..,"s":..,"pattern":[..]}`.
        profile: String,
        /// Print every partition (the default).
        #[arg(long, conflicts_with = "count")]
        all: bool,
        /// Print only the number of partitions.
        #[arg(long)]
        count: bool,
    },
    /// Draw the shell pyramid diagram of a profile or of a bare `{"pattern": [..]}`.
    Diagram { profile: String },
    /// Apply the Steenrod operation S^j to a cycle given in text notation.
    Steenrod {
        #[arg(short)]
        j: usize,
        /// Cycle such as `h0*l2 + h1*l1`.
        cycle: String,
        /// Profile of each factor. Give it once to use it for every factor.
        #[arg(long = "profile", required = true)]
        profiles: Vec<String>,
    },
    /// Compose correspondences: the result is `g o f`.
    Compose { f: String, g: String },
    /// First higher index values of type (r, s) allowed by the rules.
    I1Bounds {
        #[arg(short)]
        r: usize,
        #[arg(short)]
        s: usize,
    },
    /// Excellent index pairs of a profile.
    ExcellentPairs { profile: String },
    /// Check a partition against the selected MDT rules and list violations.
    Check { profile: String, partition: String },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error(transparent)]
    Mdt(#[from] MdtError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Input(_) => "InvalidInput",
            CliError::Profile(e) => e.code(),
            CliError::Chow(e) => e.code(),
            CliError::Corr(e) => e.code(),
            CliError::Mdt(e) => e.code(),
            CliError::Io(_) => "Io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mdt(MdtError::BoundExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

/// Profile fields as they appear in JSON, validated by [`QuadricProfile::new`]
/// so errors keep their variant name.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileInput {
    dim: Option<usize>,
    r: Option<usize>,
    s: Option<usize>,
    pattern: Vec<usize>,
}

impl ProfileInput {
    fn into_profile(self) -> Result<QuadricProfile, CliError> {
        match (self.dim, self.r, self.s) {
            (Some(dim), Some(r), Some(s)) => Ok(QuadricProfile::new(dim, r, s, self.pattern)?),
            _ => Err(CliError::Input(
                "a profile needs the fields dim, r, s and pattern".into(),
            )),
        }
    }
}

fn read_source(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T, CliError> {
    let text = read_source(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid {what} JSON: {e}")))
}

fn read_profile(arg: &str) -> Result<QuadricProfile, CliError> {
    parse_json::<ProfileInput>(arg, "profile")?.into_profile()
}

fn i1_rules(global: &Global) -> Result<I1Rules, CliError> {
    Ok(I1Rules::parse(global.rules.as_deref().unwrap_or(DEFAULT_I1_RULES))?)
}

fn mdt_rules(global: &Global) -> Result<RuleSet, CliError> {
    Ok(RuleSet::parse(global.rules.as_deref().unwrap_or(DEFAULT_MDT_RULES))?)
}

fn format_or(global: &Global, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = global.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let name = f
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        Err(CliError::Usage(format!(
            "format `{name}` is not available for this subcommand"
        )))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("engine values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::PatternEnum { r, s } => {
            format_or(g, Format::Json, &[Format::Json])?;
            require_r(*r)?;
            Ok(to_json(&profile::pattern_enumerate(*r, *s, &i1_rules(g)?)))
        }
        Command::I1Bounds { r, s } => {
            format_or(g, Format::Json, &[Format::Json])?;
            require_r(*r)?;
            Ok(to_json(&profile::i1_admissible_set(*r, *s, &i1_rules(g)?)))
        }
        Command::ExcellentPairs { profile } => {
            format_or(g, Format::Json, &[Format::Json])?;
            let p = read_profile(profile)?;
            let pairs: Vec<[usize; 2]> = profile::excellent_pairs(&p).iter().map(|e| [e.a, e.b]).collect();
            Ok(to_json(&pairs))
        }
        Command::MdtSolve { profile, count, .. } => {
            let f = format_or(g, Format::Json, &[Format::Json, Format::Text])?;
            let p = read_profile(profile)?;
            let found = enumerate_mdt(&p, &mdt_rules(g)?, g.max_r)?;
            Ok(match (count, f) {
                (true, _) => format!("{}\n", found.len()),
                (false, Format::Text) => found.iter().map(|part| format!("{part}\n")).collect(),
                (false, _) => to_json(&found),
            })
        }
        Command::Check { profile, partition } => {
            format_or(g, Format::Json, &[Format::Json])?;
            let p = read_profile(profile)?;
            let part: MdtPartition = parse_json(partition, "partition")?;
            Ok(to_json(&check_partition(&p, &part, &mdt_rules(g)?)?))
        }
        Command::Diagram { profile } => {
            let f = format_or(g, Format::Ascii, &[Format::Ascii, Format::Svg, Format::Json])?;
            let d = read_diagram(profile)?;
            Ok(match f {
                Format::Svg => render_svg(&d),
                Format::Json => to_json(&d),
                _ => render_ascii(&d),
            })
        }
        Command::Steenrod { j, cycle, profiles } => {
            let f = format_or(g, Format::Text, &[Format::Text, Format::Json])?;
            let ps = profiles
                .iter()
                .map(|p| read_profile(p))
                .collect::<Result<Vec<_>, _>>()?;
            let text = read_source(cycle)?;
            let context = if ps.len() == 1 {
                vec![ps[0].clone(); text_arity(&text)]
            } else {
                ps
            };
            let c = Cycle::parse(&text, context)?;
            let out = chow::steenrod(*j, &c);
            Ok(match f {
                Format::Json => to_json(&out),
                _ => format!("{}\n", out.to_text()),
            })
        }
        Command::Compose { f, g: second } => {
            let fmt = format_or(g, Format::Json, &[Format::Json, Format::Text])?;
            let f: Correspondence = parse_json(f, "correspondence")?;
            let h: Correspondence = parse_json(second, "correspondence")?;
            let out = corr::compose(&f, &h)?;
            Ok(match fmt {
                Format::Text => format!("{}\n", out.to_text()),
                _ => to_json(&out),
            })
        }
    }
}

fn require_r(r: usize) -> Result<(), CliError> {
    if r == 0 {
        return Err(CliError::Input("r must be at least 1".into()));
    }
    Ok(())
}

/// Accepts a full profile or a bare splitting pattern.
fn read_diagram(arg: &str) -> Result<ShellDiagram, CliError> {
    let input: ProfileInput = parse_json(arg, "profile")?;
    if input.dim.is_none() && input.r.is_none() && input.s.is_none() {
        let pattern = input.pattern;
        return mdt::shell_diagram_for_pattern(&pattern).ok_or_else(|| {
            ProfileError::PatternInvalid(format!("{pattern:?} must start at 0 and strictly increase")).into()
        });
    }
    Ok(mdt::shell_diagram(&input.into_profile()?))
}

/// Number of factors in the first term of a cycle written in text notation.
fn text_arity(text: &str) -> usize {
    text.split('+')
        .map(str::trim)
        .find(|t| !t.is_empty() && *t != "0")
        .map_or(1, |t| t.split('*').count())
}

fn emit_error(e: &CliError) -> ExitCode {
    let obj = json!({ "error": e.code(), "message": e.to_string() });
    eprintln!("{obj}");
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return emit_error(&CliError::Usage(e.to_string().trim_end().to_string())),
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => return emit_error(&e),
    };
    let written = match &cli.global.output {
        Some(path) => fs::write(path, &out).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(out.as_bytes())
            .map_err(|e| CliError::Io(format!("writing stdout: {e}"))),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => emit_error(&e),
    }
}
