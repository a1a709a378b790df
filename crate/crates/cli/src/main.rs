//! `charpow`: enumerate tori subgroups and tuple classes, apply power
//! operations to class functions, and run the verification suites.
//!
//! Exit codes: 0 success, 1 failed verification or internal error, 2 bad
//! input, 3 size cap exceeded, 4 level mismatch, 5 section out of range.

mod listing;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charpow_core::class_function::{C0Element, ClassFunction};
use charpow_core::group::{FiniteGroup, GroupHom};
use charpow_core::isogeny::SectionKind;
use charpow_core::power::{section_bound, PowerOperation, TotalPowerOperation};
use charpow_core::rng::SeededRng;
use charpow_core::session::{OutputFormat, Session, SessionConfig};
use charpow_core::verify::{parse_suites, run, VerifyOptions};
use charpow_core::{serialize, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "charpow", version, about = "Exact class-function power operations at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List subgroups, sums of subgroups, or tuple classes.
    Enumerate(EnumerateArgs),
    /// Apply P_m (or the total power operation) to a class function.
    Powerop(PoweropArgs),
    /// Run property suites: all, bijections, transfers, powerops,
    /// invariance, stabilizer or fgl.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Subgroups,
    Sums,
    HomClasses,
    WreathClasses,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    kind: Kind,
    #[command(flatten)]
    common: Common,
    /// log_p of the subgroup order (subgroups).
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Total order (sums) or wreath degree (wreath-classes).
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Group spec: S<m>, C<k>, AxB, wr(G,m).
    #[arg(long, default_value = "C1")]
    group: String,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct PoweropArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    m: usize,
    /// Group spec; taken from the input file when omitted.
    #[arg(long)]
    group: Option<String>,
    /// Working level N; defaults to the input's level or the least
    /// admissible one.
    #[arg(long)]
    level: Option<u32>,
    /// canonical or seeded:<u64>
    #[arg(long, default_value = "canonical")]
    section: String,
    /// Largest log_p order the section is defined on; defaults to
    /// floor(log_p m).
    #[arg(long)]
    section_bound: Option<u32>,
    /// Seed for the random generators when none is given inline.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Apply the total power operation into G wr S_m.
    #[arg(long)]
    total: bool,
    /// Class function in canonical JSON.
    #[arg(long, conflicts_with = "generator")]
    input: Option<PathBuf>,
    /// one, coord, random[:seed] or random-invariant[:seed]
    #[arg(long)]
    generator: Option<String>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(default_value = "all")]
    suite: String,
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 2)]
    level: u32,
    /// Largest m for the power-operation suites.
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random class functions per group in the invariance suite.
    #[arg(long, default_value_t = 3)]
    samples: usize,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidGroupSpec { .. } | Error::GroupMismatch(_) => 2,
            Error::TooLarge { .. } => 3,
            Error::LevelMismatch(_) => 4,
            Error::SectionOutOfRange { .. } => 5,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| io_failure(path, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let format: OutputFormat = args.format.parse()?;
    let Common { p, n, out } = args.common;
    let config = SessionConfig {
        p,
        n,
        ..SessionConfig::default()
    };
    config.validate()?;
    let listing = match args.kind {
        Kind::Subgroups => listing::subgroups(p, n, args.k),
        Kind::Sums => {
            if args.m == 0 {
                return Err(usage("m must be positive"));
            }
            listing::sums(p, n, args.m as u64)
        }
        Kind::HomClasses => listing::hom_classes(&FiniteGroup::parse(&args.group)?, n, p)?,
        Kind::WreathClasses => {
            let base = FiniteGroup::parse(&args.group)?;
            listing::wreath_classes(&base, args.m, n, p)?
        }
    };
    let bytes = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&listing.to_json()).expect("JSON values always serialise");
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            listing.write_csv(&mut buf).map_err(|e| usage(e.to_string()))?;
            buf
        }
    };
    emit(&out, &bytes)
}

/// `name[:seed]`
fn split_generator(spec: &str, default_seed: u64) -> Result<(&str, u64), Failure> {
    match spec.split_once(':') {
        Some((name, seed)) => Ok((name, seed.parse().map_err(|_| usage(format!("bad seed in {spec:?}")))?)),
        None => Ok((spec, default_seed)),
    }
}

fn powerop(args: PoweropArgs) -> Result<(), Failure> {
    if args.format.parse::<OutputFormat>()? != OutputFormat::Json {
        return Err(usage("power operations are written as JSON only"));
    }
    let section: SectionKind = args.section.parse()?;
    let Common { p, n, out } = args.common;
    let input = match &args.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Some(value)
        }
        None => None,
    };
    let field = |key: &str| input.as_ref().and_then(|v| v.get(key).cloned());
    let group = match (&args.group, field("group").and_then(|g| g.as_str().map(String::from))) {
        (Some(g), Some(h)) if *g != h => return Err(usage(format!("--group {g} but the input lives on {h}"))),
        (Some(g), _) => g.clone(),
        (None, Some(h)) => h,
        (None, None) => "C1".into(),
    };
    for (key, want) in [("p", p), ("n", n as u64)] {
        if let Some(v) = field(key) {
            if v.as_u64() != Some(want) {
                return Err(usage(format!("input has {key} = {v}, session has {want}")));
            }
        }
    }
    let input_level = field("level").and_then(|v| v.as_u64()).map(|v| v as u32);
    let mut config = SessionConfig {
        p,
        n,
        section,
        group,
        seed: args.seed,
        out: out.clone(),
        ..SessionConfig::default()
    };
    config.validate()?;
    config.level = match (args.level, input_level) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::from(Error::LevelMismatch(format!("input is at level {b}, --level is {a}"))))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => {
            let g = config.build_group()?;
            charpow_core::session::required_level(&g, p, args.m, args.total)?
        }
    };
    let session = Session::new(config, args.m, args.total)?;
    let f = match (&input, &args.generator) {
        (Some(v), _) => serialize::from_json_on(v, session.classes.clone(), session.level)?,
        (None, spec) => generate(spec.as_deref().unwrap_or("one"), &session)?,
    };
    let bound = args.section_bound.unwrap_or_else(|| section_bound(p, args.m));
    let section = session.config.section(bound);
    let base = session.classes.clone();
    // for m = 1 the result is transported back to G along G ≅ G×Σ_1 (G≀Σ_1)
    let result = if args.total {
        let op = TotalPowerOperation::new(base.clone(), args.m)?;
        let out = op.apply(&f, &section)?;
        if args.m == 1 {
            let w = op.wreath().group().clone();
            let hom = GroupHom::from_fn(base.group().clone(), w.clone(), |g| w.wreath_encode(&[g], 0))?;
            out.restrict(&hom, base)?
        } else {
            out
        }
    } else {
        let op = PowerOperation::new(base.clone(), args.m)?;
        let out = op.apply(&f, &section)?;
        if args.m == 1 {
            out.restrict(&op.base_inclusion()?, base)?
        } else {
            out
        }
    };
    emit(&out, serialize::to_string(&result).as_bytes())
}

fn generate(spec: &str, session: &Session) -> Result<ClassFunction, Failure> {
    let (name, seed) = split_generator(spec, session.config.seed)?;
    let (classes, level) = (session.classes.clone(), session.level);
    Ok(match name {
        "one" => ClassFunction::one(classes, level)?,
        "coord" => ClassFunction::constant(classes, C0Element::coordinate(level))?,
        "random" => ClassFunction::random(classes, level, &mut SeededRng::new(seed))?,
        "random-invariant" => ClassFunction::random(classes, level, &mut SeededRng::new(seed))?.average()?,
        _ => return Err(usage(format!("unknown generator {spec:?}"))),
    })
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let suites = parse_suites(&args.suite)?;
    let Common { p, n, out } = args.common;
    SessionConfig {
        p,
        n,
        ..SessionConfig::default()
    }
    .validate()?;
    let options = VerifyOptions {
        p,
        n,
        level: args.level,
        max_m: args.m,
        seed: args.seed,
        samples: args.samples,
        ..VerifyOptions::default()
    };
    let report = run(&suites, &options);
    emit(&out, report.to_string().as_bytes())?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("{} checks failed", report.failures().count()),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Powerop(a) => powerop(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("charpow: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
