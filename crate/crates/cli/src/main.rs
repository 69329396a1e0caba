mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use virasoro_core::arith::{parse_rational, Rational};
use virasoro_core::singular::SizeCap;

/// Singular vectors of Virasoro Verma modules and L1 cohomology, in exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "virasoro", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest composition total to enumerate.
    #[arg(long, global = true, env = "VIRASORO_CAP", default_value_t = SizeCap::DEFAULT.0)]
    cap: u32,

    /// Accepted for interface compatibility; nothing here is random.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Print elapsed wall time to stderr.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// S_{n,1}
    P1,
    /// S_{1,n}
    Oneq,
    /// S_{2,n}
    Twop,
    /// S_{n,2}
    Ptwo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleKind {
    /// Zero action on components f_j for every integer j.
    Trivial,
    /// The one-dimensional trivial module, concentrated in degree 0.
    Point,
    /// F_{lambda,mu}: e_i f_j = (j + mu - lambda (i + 1)) f_{i+j}.
    TensorDensity,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,

    /// Family index.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

#[derive(Args, Debug, Clone)]
pub struct ModuleArgs {
    #[arg(long, value_enum, default_value_t = ModuleKind::Trivial)]
    module: ModuleKind,

    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg, default_value = "0")]
    lambda: Rational,

    #[arg(long, allow_hyphen_values = true, value_parser = rational_arg, default_value = "0")]
    mu: Rational,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the word expansion of a singular vector.
    Singular {
        #[command(flatten)]
        family: FamilyArgs,

        /// Specialize t to this rational value.
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        t: Option<Rational>,

        /// Print the PBW normal form of S v instead of the words.
        #[arg(long)]
        normal_order: bool,
    },
    /// Check that S v is annihilated by e_{-1}, ..., e_{-depth}.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,

        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,

        /// Override the highest weight.
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        h: Option<Rational>,

        /// Override the central charge.
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        c: Option<Rational>,
    },
    /// Compare the recursive construction of S_{2,p} v with the closed form.
    RecursionCheck {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        p: u32,
    },
    /// sigma_{p,q}(j): the scalar by which S_{p,q}(t) maps f_j to f_{j+pq}.
    Sigma {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        p: u32,

        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,

        #[arg(long, allow_hyphen_values = true)]
        j: i64,

        #[command(flatten)]
        module: ModuleArgs,

        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg, default_value = "-3/2")]
        t: Rational,
    },
    /// Cohomology dimensions of a graded module with one-dimensional components.
    Cohomology {
        #[command(flatten)]
        module: ModuleArgs,

        /// Internal grading: a single integer or an inclusive range `lo..hi`.
        #[arg(long, allow_hyphen_values = true, value_parser = range_arg, default_value = "0")]
        s: (i64, i64),

        /// Report H^k for 0 <= k < kmax.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        kmax: u32,
    },
    /// Check the singular-vector coincidences behind the resolution.
    ResolutionCheck {
        /// Comma-separated subset of w5, w7, w12, w15.
        #[arg(long, value_delimiter = ',', value_parser = ["w5", "w7", "w12", "w15"])]
        identities: Vec<String>,

        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
    },
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn range_arg(text: &str) -> Result<(i64, i64), String> {
    let parse = |s: &str| s.parse::<i64>().map_err(|_| format!("invalid integer {s:?}"));
    match text.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi)?)),
        None => parse(text).map(|s| (s, s)),
    }
}

/// What a command produced, before rendering.
pub struct Report {
    pub parameters: Value,
    pub result: Value,
    pub text: String,
    /// `Some` for verification commands.
    pub pass: Option<bool>,
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Singular { .. } => "singular",
        Command::Verify { .. } => "verify",
        Command::RecursionCheck { .. } => "recursion-check",
        Command::Sigma { .. } => "sigma",
        Command::Cohomology { .. } => "cohomology",
        Command::ResolutionCheck { .. } => "resolution-check",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = SizeCap(cli.cap);
    let start = Instant::now();
    let mut format = cli.format;
    let outcome = match &cli.command {
        Command::Singular {
            family,
            t,
            normal_order,
        } => commands::singular(family, t.as_ref(), *normal_order, cap),
        Command::Verify { family, depth, h, c } => commands::verify(family, *depth, h.as_ref(), c.as_ref(), cap),
        Command::RecursionCheck { p } => commands::recursion_check(*p, cap),
        Command::Sigma { p, q, j, module, t } => commands::sigma(*p, *q, *j, module, t, cap),
        Command::Cohomology { module, s, kmax } => commands::cohomology(module, *s, *kmax, cap),
        Command::ResolutionCheck { identities, json } => {
            if *json {
                format = Format::Json;
            }
            Ok(commands::resolution_check(identities, cap))
        }
    };
    if cli.timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    let report = match outcome {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let rendered = match format {
        Format::Text => report.text,
        Format::Json => {
            let mut envelope = json!({
                "command": command_name(&cli.command),
                "parameters": report.parameters,
                "result": report.result,
            });
            if let Some(pass) = report.pass {
                envelope["pass"] = json!(pass);
            }
            serde_json::to_string_pretty(&envelope).expect("serializable") + "\n"
        }
    };
    // a closed pipe downstream is not an error of ours
    let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
    match report.pass {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
