//! The `robust-crt` command line.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | other failure |
//! | 2 | usage, parse or configuration error |
//! | 3 | coprime, degenerate or zero moduli |
//! | 4 | polynomial outside the dynamic range |
//! | 5 | inexact division while decoding |
//! | 6 | inconsistent residues |
//! | 7 | fewer than two moduli |
//! | 8 | guarantee-mode simulation recorded failures |
//!
//! When `--m1` has larger degree than `--m2` the pair is swapped (and so are
//! `--r1`/`--r2`); every output then refers to the swapped order and a notice
//! is printed on stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::crt::{crt_pair, encode, ResiduePair};
use crate::decoder::{reconstruct, ErroneousResiduePair, ReconstructionResult};
use crate::error::Error;
use crate::field::Field;
use crate::levels::{proposition1_bound, ModuliPairAnalysis};
use crate::poly::Polynomial;
use crate::simulation::{run_campaign_with_threads, sample_error, trial_rng, ModuliSource, TrialConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_MODULI: i32 = 3;
pub const EXIT_DEGREE_OUT_OF_RANGE: i32 = 4;
pub const EXIT_INEXACT_DIVISION: i32 = 5;
pub const EXIT_INCONSISTENT: i32 = 6;
pub const EXIT_TOO_FEW_MODULI: i32 = 7;
pub const EXIT_SIMULATION_FAILURES: i32 = 8;

#[derive(Debug, Parser)]
#[command(
    name = "robust-crt",
    version,
    about = "Multi-level robust CRT for polynomials over prime fields"
)]
pub struct Cli {
    /// Field characteristic (a prime)
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// First modulus
    #[arg(long)]
    pub m1: String,
    /// Second modulus
    #[arg(long)]
    pub m2: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a moduli pair and print its level table
    Analyze(PairArgs),
    /// Compute residues and folding polynomials of a polynomial
    Encode {
        #[command(flatten)]
        pair: PairArgs,
        /// Polynomial to encode
        #[arg(long)]
        poly: String,
    },
    /// Add random (or given) errors of degree <= tau to a residue pair
    Corrupt {
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
        /// Inclusive error degree bound; -1 leaves the residues unchanged
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use this error for r1 instead of sampling one
        #[arg(long)]
        e1: Option<String>,
        /// Use this error for r2 instead of sampling one
        #[arg(long)]
        e2: Option<String>,
    },
    /// Robustly reconstruct from erroneous residues at a level
    Reconstruct {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
        /// Level in 1..=K+1
        #[arg(long)]
        level: usize,
    },
    /// Exact reconstruction from consistent residues
    Crt {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
    },
    /// Residue error bound for a set of moduli (comma separated or repeated)
    Bound {
        #[arg(long, required = true, num_args = 1)]
        moduli: Vec<String>,
    },
    /// Run a randomized robustness campaign
    Simulate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        level: usize,
        /// Inclusive error degree bound
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow tau beyond the guaranteed bound; never fails the run
        #[arg(long)]
        boundary: bool,
        /// Worker threads (0 = all cores); does not affect the report
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidConfig(_)
            | Error::LevelOutOfRange { .. }
            | Error::NotPrime(_)
            | Error::PrimeTooLarge(_)
            | Error::ResidueNotReduced { .. }
            | Error::MixedFields { .. } => EXIT_USAGE,
            Error::CoprimeModuli | Error::DegenerateModuli | Error::ZeroModulus => EXIT_BAD_MODULI,
            Error::DegreeOutOfRange { .. } => EXIT_DEGREE_OUT_OF_RANGE,
            Error::InexactDivision(_) => EXIT_INEXACT_DIVISION,
            Error::InconsistentResidues => EXIT_INCONSISTENT,
            Error::TooFewModuli(_) => EXIT_TOO_FEW_MODULI,
            _ => EXIT_OTHER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Ctx<'a> {
    field: Field,
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn parse(&self, what: &str, text: &str) -> std::result::Result<Polynomial, Failure> {
        Polynomial::parse(text, self.field).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("--{what} {text:?}: {e}"),
        })
    }

    fn pair(&mut self, args: &PairArgs) -> std::result::Result<ModuliPairAnalysis, Failure> {
        let m1 = self.parse("m1", &args.m1)?;
        let m2 = self.parse("m2", &args.m2)?;
        let analysis = ModuliPairAnalysis::new(&m1, &m2)?;
        if analysis.swapped() {
            let _ = writeln!(
                self.err,
                "note: inputs swapped so that deg(m1) <= deg(m2); m1 and m2 (and r1, r2) below refer to the swapped order"
            );
        }
        Ok(analysis)
    }

    /// Residue arguments in the analysis' order.
    fn residues(
        &self,
        analysis: &ModuliPairAnalysis,
        r1: &str,
        r2: &str,
    ) -> std::result::Result<(Polynomial, Polynomial), Failure> {
        let r1 = self.parse("r1", r1)?;
        let r2 = self.parse("r2", r2)?;
        Ok(if analysis.swapped() { (r2, r1) } else { (r1, r2) })
    }

    fn emit_json<S: Serialize>(&mut self, value: &S) -> std::result::Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("serializable output");
        self.line(&text)
    }

    fn line(&mut self, text: &str) -> std::result::Result<(), Failure> {
        writeln!(self.out, "{text}").map_err(|e| Failure {
            code: EXIT_OTHER,
            message: format!("writing output: {e}"),
        })
    }

    fn text(&mut self, text: &str) -> std::result::Result<(), Failure> {
        write!(self.out, "{text}").map_err(|e| Failure {
            code: EXIT_OTHER,
            message: format!("writing output: {e}"),
        })
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let field = Field::new(cli.p)?;
    let mut ctx = Ctx {
        field,
        format: cli.format,
        out,
        err,
    };
    match &cli.command {
        Command::Analyze(pair) => analyze(&mut ctx, pair),
        Command::Encode { pair, poly } => cmd_encode(&mut ctx, pair, poly),
        Command::Corrupt {
            r1,
            r2,
            tau,
            seed,
            e1,
            e2,
        } => corrupt(&mut ctx, r1, r2, *tau, *seed, e1.as_deref(), e2.as_deref()),
        Command::Reconstruct {
            pair,
            r1,
            r2,
            level,
        } => cmd_reconstruct(&mut ctx, pair, r1, r2, *level),
        Command::Crt { pair, r1, r2 } => crt(&mut ctx, pair, r1, r2),
        Command::Bound { moduli } => bound(&mut ctx, moduli),
        Command::Simulate {
            pair,
            level,
            tau,
            trials,
            seed,
            boundary,
            threads,
        } => {
            let analysis = ctx.pair(pair)?;
            let cfg = TrialConfig {
                field,
                moduli: ModuliSource::Explicit {
                    m1: analysis.m1().clone(),
                    m2: analysis.m2().clone(),
                },
                level: *level,
                tau: *tau,
                trials: *trials,
                seed: *seed,
                boundary: *boundary,
            };
            simulate(&mut ctx, &cfg, *threads)
        }
    }
}

fn analyze(ctx: &mut Ctx<'_>, pair: &PairArgs) -> CliResult {
    let analysis = ctx.pair(pair)?;
    match ctx.format {
        Format::Json => ctx.emit_json(&analysis.summary())?,
        Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("field: {}\n", ctx.field));
            s.push_str(&format!("m1 = {}\n", analysis.m1()));
            s.push_str(&format!("m2 = {}\n", analysis.m2()));
            s.push_str(&format!("m = gcd(m1, m2) = {}\n", analysis.gcd()));
            s.push_str(&format!("gamma1 = {}\n", analysis.gamma1()));
            s.push_str(&format!("gamma2 = {}\n", analysis.gamma2()));
            s.push_str(&format!("gamma2^-1 mod gamma1 = {}\n", analysis.gamma2_inv()));
            s.push_str(&format!("deg(M) = {}\n", analysis.lcm_degree()));
            s.push_str(&format!("K = {}\n", analysis.k()));
            for i in 1..=analysis.max_level() {
                let sigma = analysis.sigma(i as isize).expect("level in range");
                s.push_str(&format!("sigma_{i} = {sigma}\n"));
            }
            s.push('\n');
            s.push_str(&analysis.render_table());
            ctx.text(&s)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_encode(ctx: &mut Ctx<'_>, pair: &PairArgs, poly: &str) -> CliResult {
    let analysis = ctx.pair(pair)?;
    let a = ctx.parse("poly", poly)?;
    let (residues, witness) = encode(&a, &analysis)?;
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({
            "a1": residues.a1(),
            "a2": residues.a2(),
            "k1": witness.k1,
            "k2": witness.k2,
        }))?,
        Format::Text => ctx.text(&format!(
            "a1 = {}\na2 = {}\nk1 = {}\nk2 = {}\n",
            residues.a1(),
            residues.a2(),
            witness.k1,
            witness.k2
        ))?,
    }
    Ok(EXIT_OK)
}

/// Errors for `corrupt`: explicit overrides win, otherwise e1 then e2 are
/// drawn from stream 0 of `seed`.
pub fn corruption_errors(
    field: Field,
    tau: i64,
    seed: u64,
    e1: Option<Polynomial>,
    e2: Option<Polynomial>,
) -> (Polynomial, Polynomial) {
    let mut rng = trial_rng(seed, 0);
    let s1 = sample_error(field, tau, &mut rng);
    let s2 = sample_error(field, tau, &mut rng);
    (e1.unwrap_or(s1), e2.unwrap_or(s2))
}

fn corrupt(
    ctx: &mut Ctx<'_>,
    r1: &str,
    r2: &str,
    tau: i64,
    seed: u64,
    e1: Option<&str>,
    e2: Option<&str>,
) -> CliResult {
    if tau < -1 {
        return Err(Error::InvalidConfig(format!("tau must be >= -1, got {tau}")).into());
    }
    let r1 = ctx.parse("r1", r1)?;
    let r2 = ctx.parse("r2", r2)?;
    let e1 = e1.map(|t| ctx.parse("e1", t)).transpose()?;
    let e2 = e2.map(|t| ctx.parse("e2", t)).transpose()?;
    for (name, e) in [("e1", &e1), ("e2", &e2)] {
        if let Some(e) = e {
            if e.degree().as_i64() > tau {
                return Err(Error::InvalidConfig(format!(
                    "--{name} has degree {} > tau = {tau}",
                    e.degree()
                ))
                .into());
            }
        }
    }
    let (e1, e2) = corruption_errors(ctx.field, tau, seed, e1, e2);
    let c1 = &r1 + &e1;
    let c2 = &r2 + &e2;
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({
            "r1": c1,
            "r2": c2,
            "e1": e1,
            "e2": e2,
        }))?,
        Format::Text => ctx.text(&format!("r1 = {c1}\nr2 = {c2}\ne1 = {e1}\ne2 = {e2}\n"))?,
    }
    Ok(EXIT_OK)
}

fn print_reconstruction(ctx: &mut Ctx<'_>, out: &ReconstructionResult) -> std::result::Result<(), Failure> {
    match ctx.format {
        Format::Json => ctx.emit_json(out),
        Format::Text => ctx.text(&format!(
            "aHat = {}\nk2Hat = {}\nbranch = {}\nq21 = {}\ncascadeTail = {}\n",
            out.a_hat, out.k2_hat, out.branch, out.q21, out.cascade_tail
        )),
    }
}

fn cmd_reconstruct(ctx: &mut Ctx<'_>, pair: &PairArgs, r1: &str, r2: &str, level: usize) -> CliResult {
    let analysis = ctx.pair(pair)?;
    let (r1, r2) = ctx.residues(&analysis, r1, r2)?;
    let received = ErroneousResiduePair::new(&analysis, r1, r2)?;
    let result = reconstruct(&received, level)?;
    print_reconstruction(ctx, &result)?;
    Ok(EXIT_OK)
}

fn crt(ctx: &mut Ctx<'_>, pair: &PairArgs, r1: &str, r2: &str) -> CliResult {
    let analysis = ctx.pair(pair)?;
    let (r1, r2) = ctx.residues(&analysis, r1, r2)?;
    let residues = ResiduePair::new(&analysis, r1, r2)?;
    let a = crt_pair(&residues)?;
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({ "a": a }))?,
        Format::Text => ctx.line(&format!("a = {a}"))?,
    }
    Ok(EXIT_OK)
}

/// Splits on commas outside `[...]`, so list-form polynomials survive.
pub fn split_moduli(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => parts.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}

fn bound(ctx: &mut Ctx<'_>, moduli: &[String]) -> CliResult {
    let polys = moduli
        .iter()
        .flat_map(|m| split_moduli(m))
        .map(|t| ctx.parse("moduli", &t))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let b = proposition1_bound(&polys)?;
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({ "bound": b }))?,
        Format::Text => ctx.line(&b.to_string())?,
    }
    Ok(EXIT_OK)
}

fn simulate(ctx: &mut Ctx<'_>, cfg: &TrialConfig, threads: usize) -> CliResult {
    let report = run_campaign_with_threads(cfg, threads)?;
    match ctx.format {
        Format::Json => ctx.line(&report.to_json())?,
        Format::Text => ctx.text(&report.to_text())?,
    }
    if !cfg.boundary && report.failures > 0 {
        let _ = writeln!(
            ctx.err,
            "error: {} of {} trials failed inside the guaranteed bound",
            report.failures, report.config.trials
        );
        return Ok(EXIT_SIMULATION_FAILURES);
    }
    Ok(EXIT_OK)
}
