use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mseuler::export::{self, FamilyKind, Format, RowKind, REPORT_CSV_HEADER};
use mseuler::lattice::{classify, LatticePoint};
use mseuler::verify::{run_suite_streaming, Budget, IdentityId, Status, SuiteConfig};
use mseuler::{Error, MultisetShape};

const EXIT_OK: u8 = 0;
const EXIT_UNEXPECTED_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mseuler",
    version,
    about = "Multiset Eulerian and ordered Stirling numbers, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integer row: eulerian (indexed by descents), stirling2 or lah (indexed by blocks).
    Table {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value = "eulerian")]
        kind: RowKind,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// q-polynomial family A, B or C with its value at q = 1.
    Qtable {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        kind: FamilyKind,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check identities over all compositions up to a size, one report per line.
    Verify(VerifyArgs),
    /// Locate a lattice point of n times the product of simplices in both decompositions.
    Classify {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        n: u32,
        /// Coordinates grouped by factor, e.g. "2,1;0".
        #[arg(long)]
        point: String,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    dmax: usize,
    #[arg(long, default_value_t = 4)]
    lmax: usize,
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    /// Restrict to these identities (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    identity: Vec<IdentityId>,
    /// Check only this shape instead of all compositions.
    #[arg(long)]
    shape: Option<String>,
    /// Include the q-analog identities.
    #[arg(long)]
    q: bool,
    #[arg(long, env = "MSEULER_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Work units allowed per report before it is marked truncated; 0 disables the limit.
    #[arg(long, default_value_t = Budget::DEFAULT.0.unwrap_or(0))]
    max_work: u64,
    #[command(flatten)]
    out: OutputArgs,
}

enum Failure {
    Usage(String),
    Io(io::Error),
    Resource(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(msg) => Failure::Resource(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn parse_shape(s: &str) -> Result<MultisetShape, Failure> {
    let (shape, dropped) = export::parse_counting_shape(s)?;
    if dropped {
        eprintln!("warning: zero parts dropped from shape {s:?}; using {shape}");
    }
    Ok(shape)
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(out: &OutputArgs, text: &str) -> Result<u8, Failure> {
    let mut w = open_output(out.output.as_ref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    if args.dmax == 0 && args.shape.is_none() {
        return Err(Failure::Usage("--dmax must be at least 1".into()));
    }
    if args.workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    let config = SuiteConfig {
        d_max: args.dmax,
        l_max: args.lmax,
        n_max: args.nmax,
        include_q: args.q,
        identities: (!args.identity.is_empty()).then(|| args.identity.clone()),
        shapes: args.shape.as_deref().map(parse_shape).transpose()?.map(|s| vec![s]),
        workers: args.workers,
        budget: Budget((args.max_work > 0).then_some(args.max_work)),
    };
    let mut w = open_output(args.out.output.as_ref())?;
    if args.out.format == Format::Csv {
        writeln!(w, "{REPORT_CSV_HEADER}")?;
    }
    let mut unexpected = false;
    let mut truncated = false;
    let mut write_err = None;
    run_suite_streaming(&config, |report| {
        unexpected |= report.expected && report.status == Status::Fail;
        truncated |= report.status == Status::Truncated;
        if write_err.is_some() {
            return;
        }
        let text = match args.out.format {
            Format::Json => report.to_json_line() + "\n",
            Format::Csv => export::report_csv_rows(report),
        };
        if let Err(e) = w.write_all(text.as_bytes()).and_then(|_| w.flush()) {
            write_err = Some(e);
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    Ok(if unexpected {
        EXIT_UNEXPECTED_FAILURE
    } else if truncated {
        EXIT_TRUNCATED
    } else {
        EXIT_OK
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Table { shape, kind, out } => {
            let table = export::integer_table(&parse_shape(&shape)?, kind)?;
            write_all(&out, &table.render(out.format))
        }
        Command::Qtable { shape, kind, out } => {
            let table = export::poly_table(&parse_shape(&shape)?, kind)?;
            write_all(&out, &table.render(out.format))
        }
        Command::Verify(args) => verify(&args),
        Command::Classify { shape, n, point } => {
            let shape = parse_shape(&shape)?;
            let x = LatticePoint::parse(&shape, n, &point)?;
            let json = serde_json::to_string(&classify(&shape, &x)).expect("classification serializes");
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{json}")?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_TRUNCATED)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::from(EXIT_OK),
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_UNEXPECTED_FAILURE)
        }
    }
}
