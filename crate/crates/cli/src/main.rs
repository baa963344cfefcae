mod analyze;
mod family;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use sectorcert::certify::{Attempt, MOutcome, SearchReport};
use sectorcert::parse::parse_polynomial;
use sectorcert::{certificate_verify, search_m, Certificate, Certifier, Family, Polynomial, Precision, SearchOptions};

#[derive(Parser)]
#[command(name = "sectorcert", version, about = "Zero-free regions and irreducibility certificates for integer polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show every zero-free sector, the lens and the admissible intervals.
    Analyze {
        #[command(flatten)]
        poly: PolySource,
        #[command(flatten)]
        out: Output,
    },
    /// Certify irreducibility at one argument or the first one in a range.
    Certify {
        #[command(flatten)]
        poly: PolySource,
        /// Argument at which to evaluate.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "search")]
        m: Option<BigInt>,
        /// Inclusive range LO..HI to scan.
        #[arg(long, value_name = "LO..HI", allow_hyphen_values = true)]
        search: Option<String>,
        /// Largest cofactor q allowed in f(m) = p^k q.
        #[arg(long, default_value_t = 1)]
        q_max: u64,
        /// Only use the prime-power criterion.
        #[arg(long, conflicts_with = "modes")]
        prime_power: bool,
        /// Criteria to try, in order.
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<Mode>>,
        /// Keep scanning after the first certificate.
        #[arg(long)]
        exhaustive: bool,
        /// Allow negative arguments (certified through f(-X)).
        #[arg(long)]
        negative_m: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Certify every instance of a polynomial family.
    Scan {
        /// Family descriptor: a JSON file path or inline JSON.
        #[arg(long)]
        family: String,
        #[arg(long, env = "SECTORCERT_DIGITS", default_value_t = 12)]
        digits: u32,
        #[arg(long)]
        json: bool,
    },
    /// Replay a certificate file.
    Verify {
        file: PathBuf,
        /// Also run the brute-force factor search on the polynomial.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PolySource {
    /// Polynomial expression in X, e.g. "X^4-10*X^3+2162".
    #[arg(allow_hyphen_values = true)]
    expr: Option<String>,
    /// Coefficients a0,a1,...,an.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// File holding an expression or coefficient list.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl PolySource {
    fn load(&self) -> anyhow::Result<Polynomial> {
        let text = match (&self.expr, &self.coeffs, &self.file) {
            (Some(e), _, _) => e.clone(),
            (_, Some(c), _) => c.clone(),
            (_, _, Some(p)) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            _ => bail!("no polynomial given"),
        };
        let f = parse_polynomial(text.trim()).map_err(|e| anyhow!("{e}"))?;
        if f.degree() < 1 {
            bail!("polynomial must have degree at least 1");
        }
        Ok(f)
    }
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write an SVG picture of the regions and roots.
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
    /// Decimal digits of working precision.
    #[arg(long, env = "SECTORCERT_DIGITS", default_value_t = 12)]
    digits: u32,
}

impl Output {
    fn precision(&self) -> anyhow::Result<Precision> {
        precision(self.digits)
    }
}

fn precision(digits: u32) -> anyhow::Result<Precision> {
    if !(1..=200).contains(&digits) {
        bail!("--digits must be between 1 and 200");
    }
    Ok(Precision::new(digits))
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lens,
    Sector,
    PrimePower,
    Combined,
}

impl From<Mode> for Family {
    fn from(m: Mode) -> Family {
        match m {
            Mode::Lens => Family::Lens,
            Mode::Sector => Family::SectorPq,
            Mode::PrimePower => Family::PrimePower,
            Mode::Combined => Family::Combined,
        }
    }
}

fn parse_range(s: &str) -> anyhow::Result<(BigInt, BigInt)> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| anyhow!("range must look like LO..HI"))?;
    let lo: BigInt = lo.trim().parse().map_err(|_| anyhow!("bad range start {lo:?}"))?;
    let hi: BigInt = hi.trim().parse().map_err(|_| anyhow!("bad range end {hi:?}"))?;
    if lo > hi {
        bail!("empty range {s}");
    }
    Ok((lo, hi))
}

pub fn print_certificate(c: &Certificate) {
    println!("certified: {}", c.criterion.as_str());
    println!("m = {}{}", c.m, if c.argument_negated { " (via f(-X))" } else { "" });
    println!("f(m) = {}", c.value);
    let w = &c.witness;
    print!("witness: p = {}, k = {}, q = {}", w.p, w.k, w.q);
    if let (Some(ell), Some(r), Some(s)) = (w.ell, &w.r, &w.s) {
        print!(", l = {ell}, r = {r}, s = {s}");
    }
    println!();
    println!("primality: {} ({})", c.primality.status.as_str(), c.primality.method);
    if c.conditional {
        println!("CONDITIONAL: f(m) is only a probable prime");
    }
    for check in &c.checks {
        println!("check {}: {} > {} (margin {})", check.description, check.left, check.right, check.margin);
    }
}

fn print_search(report: &SearchReport, json: bool) {
    if json {
        let outcomes: Vec<_> = report
            .outcomes
            .iter()
            .map(|(m, o)| serde_json::json!({"m": m.to_string(), "outcome": o.label()}))
            .collect();
        let body = serde_json::json!({
            "lo": report.lo.to_string(),
            "scanned_hi": report.scanned_hi.to_string(),
            "outcomes": outcomes,
            "certificates": report.certificates,
        });
        println!("{}", serde_json::to_string_pretty(&body).expect("serializes"));
        return;
    }
    let count = |pred: fn(&MOutcome) -> bool| report.outcomes.iter().filter(|(_, o)| pred(o)).count();
    println!(
        "scanned {}..{}: {} certified, {} composite values, {} outside region, {} without witness, {} not applicable",
        report.lo,
        report.scanned_hi,
        count(|o| matches!(o, MOutcome::Certified(_))),
        count(|o| matches!(o, MOutcome::ValueComposite)),
        count(|o| matches!(o, MOutcome::OutsideRegion)),
        count(|o| matches!(o, MOutcome::WitnessAbsent)),
        count(|o| matches!(o, MOutcome::NotApplicable)),
    );
    for (i, c) in report.certificates.iter().enumerate() {
        if i > 0 {
            println!();
        }
        print_certificate(c);
    }
}

#[allow(clippy::too_many_arguments)]
fn certify(
    f: &Polynomial,
    m: Option<BigInt>,
    search: Option<String>,
    q_max: u64,
    families: Vec<Family>,
    exhaustive: bool,
    negative_m: bool,
    out: &Output,
) -> anyhow::Result<ExitCode> {
    let prec = out.precision()?;
    if q_max == 0 {
        bail!("--q-max must be at least 1");
    }
    let (certified, first_m) = match (m, search) {
        (Some(m), _) => {
            if m.sign() == num_bigint::Sign::Minus && !negative_m {
                bail!("negative m needs --negative-m");
            }
            let certifier = if m.sign() == num_bigint::Sign::Minus {
                Certifier::negated(f, prec)
            } else {
                Certifier::new(f, prec)
            };
            let attempt: Attempt = certifier.certify_first(&m, &families, q_max);
            match attempt {
                Ok(c) => {
                    if out.json {
                        println!("{}", c.to_json());
                    } else {
                        print_certificate(&c);
                    }
                    (true, Some(m))
                }
                Err(r) => {
                    if out.json {
                        let body = serde_json::json!({"m": m.to_string(), "certified": false, "reason": r.kind, "detail": r.detail});
                        println!("{}", serde_json::to_string_pretty(&body).expect("serializes"));
                    } else {
                        println!("not certified at m = {m}: {r}");
                    }
                    (false, Some(m))
                }
            }
        }
        (None, Some(range)) => {
            let (lo, hi) = parse_range(&range)?;
            if lo.sign() == num_bigint::Sign::Minus && !negative_m {
                bail!("negative range start needs --negative-m");
            }
            let opts = SearchOptions { q_max, families, exhaustive, allow_negative: negative_m, prec };
            let report = search_m(f, &lo, &hi, &opts)?;
            print_search(&report, out.json);
            let first = report.first().and_then(|c| c.m.parse().ok());
            (!report.certificates.is_empty(), first)
        }
        (None, None) => bail!("give --m or --search"),
    };
    if let Some(path) = &out.plot {
        let svg = plot::render(f, prec, first_m.as_ref());
        std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if certified { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(file: &PathBuf, oracle: bool, json: bool) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let cert = Certificate::from_json(&text)?;
    let ok = certificate_verify(&cert)?;
    let verdict = if oracle {
        let f = cert.polynomial()?;
        let f = Polynomial::new(f.coeffs().iter().map(|c| c / f.content()).collect());
        Some(match sectorcert::oracle::irreducible_bruteforce(&f)? {
            sectorcert::oracle::Irreducibility::Irreducible => "irreducible".to_string(),
            sectorcert::oracle::Irreducibility::Reducible(g) => format!("reducible, factor {g}"),
            sectorcert::oracle::Irreducibility::OutOfReach => "out of reach".to_string(),
        })
    } else {
        None
    };
    if json {
        let body = serde_json::json!({"valid": ok, "criterion": cert.criterion.as_str(), "m": cert.m, "oracle": verdict});
        println!("{}", serde_json::to_string_pretty(&body).expect("serializes"));
    } else {
        println!("{}: {} at m = {}", if ok { "valid" } else { "INVALID" }, cert.criterion.as_str(), cert.m);
        if let Some(v) = verdict {
            println!("oracle: {v}");
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze { poly, out } => {
            let f = poly.load()?;
            let prec = out.precision()?;
            analyze::run(&f, prec, out.json)?;
            if let Some(path) = &out.plot {
                std::fs::write(path, plot::render(&f, prec, None))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { poly, m, search, q_max, prime_power, modes, exhaustive, negative_m, out } => {
            let f = poly.load()?;
            let families = if prime_power {
                vec![Family::PrimePower]
            } else {
                modes.map(|ms| ms.into_iter().map(Family::from).collect()).unwrap_or_else(|| Family::DEFAULT_ORDER.to_vec())
            };
            certify(&f, m, search, q_max, families, exhaustive, negative_m, &out)
        }
        Command::Scan { family, digits, json } => {
            family::run(&family, precision(digits)?, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, oracle, json } => verify(&file, oracle, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
