use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dwork_hg::finite_field::{render_complex, FiniteHg, FqChar, FqField};
use dwork_hg::hypergeom::{dwork_eval_f, HGParameter};
use dwork_hg::padic::{teichmuller_lift, FqSpec, PRational, WittRing};
use dwork_hg::report::{self, Format, ReportDocument, SweepConfig, BUNDLED_CONFIG, OUTPUT_DIR_ENV};
use dwork_hg::transform::render_witt;
use dwork_hg::Error;

#[derive(Parser)]
#[command(
    name = "dwork-hg",
    version,
    about = "Dwork's p-adic hypergeometric function and its t <-> 1/t formula"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single value.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Run a verification sweep and write a report.
    Verify(VerifyArgs),
    /// Re-emit a JSON report, e.g. as CSV.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Dwork's function at a Teichmuller point, mod p^n.
    Dwork(DworkArgs),
    /// The finite-field hypergeometric function.
    Ffhg(FfhgArgs),
}

#[derive(Args)]
struct DworkArgs {
    #[arg(long)]
    p: u64,
    /// Parameter as `r/N`.
    #[arg(long)]
    a: PRational,
    #[arg(long)]
    d: u32,
    /// Precision n: the value is computed mod p^n.
    #[arg(long, default_value_t = report::DEFAULT_PRECISION)]
    prec: u32,
    /// `teich:x`, with x an integer or a comma-separated coefficient vector.
    #[arg(long)]
    point: String,
    /// Number of Frobenius steps.
    #[arg(long, default_value_t = 1)]
    f: u32,
    /// Degree of the residue field the point lives in (defaults to f).
    #[arg(long)]
    ext: Option<u32>,
}

#[derive(Args)]
struct FfhgArgs {
    #[arg(long)]
    q: u64,
    /// Exponents of the upper characters (d + 1 of them).
    #[arg(long = "alpha", required = true, num_args = 1.., allow_negative_numbers = true)]
    alphas: Vec<i64>,
    /// Exponents of the lower characters (d of them).
    #[arg(long = "beta", num_args = 1.., allow_negative_numbers = true)]
    betas: Vec<i64>,
    /// Element code, or a comma-separated coefficient vector.
    #[arg(long)]
    t: String,
    /// Monic modulus, constant term first, comma separated.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Sweep configuration (TOML).
    #[arg(long, conflicts_with = "bundled", required_unless_present = "bundled")]
    config: Option<PathBuf>,
    /// Use the built-in acceptance grid.
    #[arg(long)]
    bundled: bool,
    /// Report path; `-` or absent writes to stdout unless the config names one.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ReportArgs {
    /// JSON report written by `verify`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(EvalCommand::Dwork(args)) => eval_dwork(args),
        Command::Eval(EvalCommand::Ffhg(args)) => eval_ffhg(args),
        Command::Verify(args) => verify(args),
        Command::Report(args) => reemit(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_coeffs(text: &str) -> Result<Vec<i128>, Failure> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<i128>()
                .map_err(|_| Failure::Usage(format!("bad coefficient `{c}`")))
        })
        .collect()
}

fn eval_dwork(args: DworkArgs) -> Result<bool, Failure> {
    let coeffs = args
        .point
        .strip_prefix("teich:")
        .ok_or_else(|| Failure::Usage(format!("point `{}` is not of the form teich:x", args.point)))
        .and_then(parse_coeffs)?;
    if args.prec == 0 || args.f == 0 {
        return Err(Failure::Usage("precision and f must be positive".into()));
    }
    let ext = args.ext.unwrap_or(args.f);
    if coeffs.len() > ext as usize {
        return Err(Failure::Usage(format!(
            "point has {} coefficients for degree {ext}",
            coeffs.len()
        )));
    }
    let params = if args.a.in_unit_interval() {
        HGParameter::theorem(args.a, args.d, args.p)?
    } else {
        HGParameter::library(args.a, args.d, args.p)?
    };
    let spec = FqSpec::default_for(args.p, ext)?;
    let x = WittRing::new(spec.clone(), 1)?.from_coeffs(&coeffs)?;
    if x.is_zero() {
        return Err(Error::NotInDomain("0 has no Teichmuller lift".into()).into());
    }
    let t = teichmuller_lift(&x, &WittRing::new(spec, args.prec)?)?;
    let value = dwork_eval_f(&params, args.f, &t, args.prec)?;
    println!("{}", render_witt(&value));
    Ok(true)
}

fn eval_ffhg(args: FfhgArgs) -> Result<bool, Failure> {
    if args.alphas.len() != args.betas.len() + 1 {
        return Err(Failure::Usage(
            "give d + 1 --alpha and d --beta exponents".into(),
        ));
    }
    let spec = match args.modulus {
        None => FqSpec::for_order(args.q)?,
        Some(m) => {
            let (p, _) = dwork_hg::padic::prime_power(args.q)
                .ok_or_else(|| Failure::Usage(format!("{} is not a prime power", args.q)))?;
            let spec = FqSpec::new(p, m)?;
            if spec.order() != args.q {
                return Err(Failure::Usage("modulus degree does not match q".into()));
            }
            spec
        }
    };
    let field = FqField::new(spec)?;
    let t = if args.t.contains(',') {
        let c: Vec<u64> = parse_coeffs(&args.t)?
            .into_iter()
            .map(|v| v.rem_euclid(field.p() as i128) as u64)
            .collect();
        field.element(&c)?
    } else {
        let code: u64 = args
            .t
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("bad element `{}`", args.t)))?;
        if code >= field.q() {
            return Err(Failure::Usage(format!(
                "{code} is not an element code of F_{}",
                field.q()
            )));
        }
        code
    };
    let hg = FiniteHg::new(Arc::new(field));
    let chars = |v: &[i64]| -> Vec<FqChar> { v.iter().map(|&k| hg.character(k)).collect() };
    let value = hg.finite_hg(&chars(&args.alphas), &chars(&args.betas), t)?;
    println!("{}", render_complex(value));
    Ok(true)
}

fn resolve_output(path: PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

fn write_out(path: Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let p = resolve_output(p);
            fs::write(&p, bytes)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))
        }
        _ => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))
        }
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let text = match &args.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        None => BUNDLED_CONFIG.to_string(),
    };
    let mut config = SweepConfig::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let format = args.format.map(Format::from).unwrap_or(config.format);
    let output = args
        .output
        .or_else(|| config.output.clone().map(PathBuf::from));

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    let doc = pool.install(|| report::run(&config))?;
    write_out(output, &report::emit(&doc, format)?)?;

    let failed = doc.cases.iter().filter(|c| !c.pass).count();
    let points: usize = doc.cases.iter().map(|c| c.points.len()).sum();
    let skipped: usize = doc.cases.iter().map(|c| c.skipped.len()).sum();
    eprintln!(
        "{} cases, {points} points checked, {skipped} skipped, {failed} failing: {}",
        doc.cases.len(),
        if doc.summary.pass { "PASS" } else { "FAIL" }
    );
    Ok(doc.summary.pass)
}

fn reemit(args: ReportArgs) -> Result<bool, Failure> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let doc = ReportDocument::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    write_out(args.output, &report::emit(&doc, args.format.into())?)?;
    Ok(true)
}
