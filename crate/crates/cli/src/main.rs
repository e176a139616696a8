//! Batch command-line front end: construct generator matrices, analyze
//! codes, emit classification tables, compare codes, and run the invariant
//! suites.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hadz::classify::{
    classification_table, compare_codes, profile, ComparisonOutcome, ProfileConfig,
    DEFAULT_SEARCH_BUDGET,
};
use hadz::codeset::enumerate;
use hadz::constructions::{GeneratorMatrix, TypeSignature};
use hadz::error::Error;

mod verify;

/// Exit codes: 0 success, 1 usage error, 2 integrity or invariant failure.
const EXIT_USAGE: u8 = 1;
const EXIT_INTEGRITY: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hadz",
    about = "Hadamard codes over Z2/Z4/Z8 and Z_{2^s}: construction, invariants, classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a generator matrix and write/print its descriptor and dump.
    Construct(ConstructArgs),
    /// Enumerate a code and report distance, Hadamard verdict, rank, kernel.
    Analyze(AnalyzeArgs),
    /// Classify every admissible type of length 2^t across all families.
    Table(TableArgs),
    /// Decide or refute equivalence of two codes given by descriptors.
    Compare(CompareArgs),
    /// Run the invariant suites; nonzero exit on any failure.
    Verify(verify::VerifyArgs),
}

#[derive(Args, Clone)]
struct SignatureArgs {
    /// Code family: z2z4z8, z2z4, or z2s.
    #[arg(long)]
    family: Option<String>,
    /// Exponent tuple, comma separated (e.g. 1,1,2).
    #[arg(long, value_name = "LIST")]
    t: Option<String>,
    /// Ring exponent for the z2s family.
    #[arg(long)]
    s: Option<u32>,
    /// Descriptor file produced by `construct`.
    #[arg(long, value_name = "PATH")]
    descriptor: Option<PathBuf>,
}

impl SignatureArgs {
    fn resolve(&self) -> Result<TypeSignature, Error> {
        if let Some(path) = &self.descriptor {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
            return TypeSignature::parse_descriptor(&text);
        }
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("need --family or --descriptor".into()))?;
        let ts: Vec<u32> = self
            .t
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("need --t".into()))?
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {:?}", p)))
            })
            .collect::<Result<_, _>>()?;
        let sig = match family {
            "z2z4z8" => {
                if ts.len() != 3 {
                    return Err(Error::InvalidParameter("z2z4z8 needs --t t1,t2,t3".into()));
                }
                TypeSignature::Z2Z4Z8 {
                    t1: ts[0],
                    t2: ts[1],
                    t3: ts[2],
                }
            }
            "z2z4" => {
                if ts.len() != 2 {
                    return Err(Error::InvalidParameter("z2z4 needs --t t1,t2".into()));
                }
                TypeSignature::Z2Z4 { t1: ts[0], t2: ts[1] }
            }
            "z2s" => {
                let s = self
                    .s
                    .ok_or_else(|| Error::InvalidParameter("z2s needs --s".into()))?;
                TypeSignature::Z2s { s, exponents: ts }
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family {:?} (expected z2z4z8, z2z4, z2s)",
                    other
                )))
            }
        };
        sig.validate()?;
        Ok(sig)
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    signature: SignatureArgs,
    /// Output prefix; writes <PREFIX>.desc and <PREFIX>.matrix.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    signature: SignatureArgs,
    /// Matrix dump to analyze instead of rebuilding from the exponents.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
    /// Rank bound for the refined span invariant.
    #[arg(long, default_value_t = 24)]
    rank_bound: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
}

#[derive(Args)]
struct TableArgs {
    /// Binary length exponent t (3..=11).
    #[arg(long)]
    t: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Output path; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for profiling the rows (0 = automatic).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Rank bound for the refined span invariant.
    #[arg(long, default_value_t = 24)]
    rank_bound: usize,
}

#[derive(Args)]
struct CompareArgs {
    /// Descriptor of the first code.
    first: PathBuf,
    /// Descriptor of the second code.
    second: PathBuf,
    /// Node budget for the backtracking search.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Integrity(_) | Error::MissingZeroWord | Error::SizeNotPowerOfTwo(_) => {
            EXIT_INTEGRITY
        }
        _ => EXIT_USAGE,
    }
}

fn run_construct(args: &ConstructArgs) -> Result<(), Error> {
    let sig = args.signature.resolve()?;
    let matrix = GeneratorMatrix::build(&sig)?;
    let mut summary = String::new();
    writeln!(summary, "signature: {}", sig).unwrap();
    match &sig {
        TypeSignature::Z2s { .. } => {
            writeln!(summary, "columns: {}", sig.ring_columns()?).unwrap();
        }
        _ => {
            let (a1, a2, a3) = sig.alphas()?;
            writeln!(summary, "alpha: ({},{},{})", a1, a2, a3).unwrap();
        }
    }
    writeln!(summary, "n: {}", sig.gray_length()).unwrap();
    writeln!(summary, "size: {}", sig.code_size()).unwrap();
    print!("{}", summary);
    match &args.out {
        Some(prefix) => {
            let mut desc_path = prefix.as_os_str().to_owned();
            desc_path.push(".desc");
            let desc_path = PathBuf::from(desc_path);
            let mut matrix_path = prefix.as_os_str().to_owned();
            matrix_path.push(".matrix");
            let matrix_path = PathBuf::from(matrix_path);
            std::fs::write(&desc_path, sig.descriptor())
                .map_err(|e| Error::Parse(format!("cannot write {}: {}", desc_path.display(), e)))?;
            std::fs::write(&matrix_path, matrix.dump())
                .map_err(|e| Error::Parse(format!("cannot write {}: {}", matrix_path.display(), e)))?;
            println!("wrote: {}", desc_path.display());
            println!("wrote: {}", matrix_path.display());
        }
        None => print!("{}", matrix.dump()),
    }
    Ok(())
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), Error> {
    let sig = args.signature.resolve()?;
    let matrix = match &args.matrix {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
            GeneratorMatrix::parse_dump(sig.clone(), &text)?
        }
        None => GeneratorMatrix::build(&sig)?,
    };
    let image = enumerate(&matrix)?.gray_image()?;
    let check = image.is_hadamard();
    let config = ProfileConfig {
        span_rank_bound: args.rank_bound,
    };
    let prof = profile(&image, &config)?;
    println!("signature: {}", sig);
    println!("n: {}", prof.length);
    println!("size: {}", prof.size);
    println!("d: {}", prof.min_distance);
    println!("hadamard: {}", check.ok);
    if !check.ok {
        println!("hadamard_detail: {}", check);
    }
    println!("rank: {}", prof.rank);
    println!("kernel: {}", prof.kernel_dim);
    println!("linear: {}", prof.is_linear());
    Ok(())
}

fn run_table(args: &TableArgs) -> Result<(), Error> {
    if args.jobs > 0 {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build_global();
    }
    let config = ProfileConfig {
        span_rank_bound: args.rank_bound,
    };
    let table = classification_table(args.t, &config)?;
    let rendered = match args.format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Text => table.to_text(),
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, rendered)
                .map_err(|e| Error::Parse(format!("cannot write {}: {}", path.display(), e)))?;
            println!("wrote: {}", path.display());
        }
        None => print!("{}", rendered),
    }
    Ok(())
}

fn run_compare(args: &CompareArgs) -> Result<(), Error> {
    let load = |path: &PathBuf| -> Result<_, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
        let sig = TypeSignature::parse_descriptor(&text)?;
        let image = enumerate(&GeneratorMatrix::build(&sig)?)?.gray_image()?;
        Ok((sig, image))
    };
    let (sig_a, a) = load(&args.first)?;
    let (sig_b, b) = load(&args.second)?;
    println!("comparing {} and {}", sig_a, sig_b);
    match compare_codes(&a, &b, args.budget)? {
        ComparisonOutcome::Distinct(field) => println!("verdict: distinct ({})", field),
        ComparisonOutcome::Equivalent(witness) => {
            println!("verdict: equivalent (witness verified)");
            let rendered: Vec<String> = witness.iter().map(|j| j.to_string()).collect();
            println!("witness: {}", rendered.join(" "));
        }
        ComparisonOutcome::Inconclusive(reason) => {
            println!("verdict: inconclusive ({})", reason)
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Construct(args) => run_construct(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Table(args) => run_table(args),
        Command::Compare(args) => run_compare(args),
        Command::Verify(args) => return verify::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

