use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use skos::berezinian::{random_invertible, GrassmannElement, SuperMatrix, SuperMatrixRecord, TermRecord};
use skos::bott::{bott_table, cohomology_line_bundle, CohomologyTable, Method, CSV_HEADER};
use skos::complexes::{
    build_berezinian, build_derham, build_koszul, specialize_koszul, ComplexKind, ComplexRecord, GradedComplex,
};
use skos::exact_linalg::homology;
use skos::{Base, HomologySummary, SuperDim};

#[derive(Parser)]
#[command(name = "skos", version, about = "Super Koszul complexes, exact homology, Berezinians and super Bott tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format; csv is only available for cohomology tables.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Weight component of the Koszul complex of A^{a|b}.
    Koszul(FormArgs),
    /// Weight component of the De Rham complex of A^{a|b}.
    Derham(FormArgs),
    /// Weight component of the Berezinian complex of A^{a|b}.
    BerezinianComplex(BerezinianArgs),
    /// Koszul complex of A^{a|b} specialized along a linear form.
    Specialize(SpecializeArgs),
    /// Homology of a complex, built from flags or read from a JSON record.
    Homology(HomologyArgs),
    /// Berezin determinant of a supermatrix.
    Ber(BerArgs),
    /// Cohomology of twisted differential forms on P^{m|n}.
    Bott(BottArgs),
    /// Cohomology of O(r) on P^{m|n}.
    LineBundle(LineBundleArgs),
}

#[derive(Args)]
struct FormArgs {
    /// Rank as "a,b": a even and b odd generators.
    #[arg(long, value_parser = parse_rank)]
    rank: (usize, usize),
    #[arg(long, allow_negative_numbers = true)]
    weight: i64,
    /// Lowest exterior degree kept is -cap; defaults to the weight.
    #[arg(long)]
    cap: Option<u32>,
}

#[derive(Args)]
struct BerezinianArgs {
    #[arg(long, value_parser = parse_rank)]
    rank: (usize, usize),
    #[arg(long, allow_negative_numbers = true)]
    weight: i64,
    #[arg(long, default_value_t = 6)]
    cap: u32,
}

#[derive(Args)]
struct SpecializeArgs {
    #[arg(long, value_parser = parse_rank)]
    rank: (usize, usize),
    /// Comma-separated integer coefficients, one per generator (odd slots must be 0).
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    omega: Vec<BigInt>,
    #[arg(long, default_value_t = 6)]
    cap: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Koszul,
    Derham,
    #[value(alias = "berezinian-complex")]
    Berezinian,
    Specialize,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long, value_enum, required_unless_present = "input", conflicts_with = "input")]
    kind: Option<KindArg>,
    /// A complex record as emitted by `--output json`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_rank)]
    rank: Option<(usize, usize)>,
    #[arg(long, allow_negative_numbers = true)]
    weight: Option<i64>,
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    omega: Option<Vec<BigInt>>,
    /// Z, Q or Fp:<prime>.
    #[arg(long, default_value = "Z")]
    base: Base,
    /// A single position; by default every position the window determines.
    #[arg(long, allow_negative_numbers = true)]
    position: Option<i64>,
}

#[derive(Args)]
struct BerArgs {
    /// Supermatrix JSON file.
    #[arg(long, required_unless_present = "random", conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Draw a random invertible supermatrix instead.
    #[arg(long)]
    random: bool,
    /// Block sizes "p,q" for --random.
    #[arg(long, value_parser = parse_rank, default_value = "1,1")]
    rank: (usize, usize),
    /// Number of Grassmann generators for --random.
    #[arg(long, default_value_t = 2)]
    gens: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BottArgs {
    #[arg(long = "m")]
    m: usize,
    #[arg(long = "n")]
    n: usize,
    #[arg(long = "p", conflicts_with_all = ["p_min", "p_max"])]
    p: Option<usize>,
    #[arg(long, requires = "p_max")]
    p_min: Option<usize>,
    #[arg(long, requires = "p_min")]
    p_max: Option<usize>,
    #[arg(long = "r", allow_negative_numbers = true, conflicts_with_all = ["r_min", "r_max"])]
    r: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "r_max")]
    r_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "r_min")]
    r_max: Option<i64>,
    #[arg(long, default_value = "formula")]
    method: Method,
    #[arg(long, default_value = "Q")]
    base: Base,
}

#[derive(Args)]
struct LineBundleArgs {
    #[arg(long = "m")]
    m: usize,
    #[arg(long = "n")]
    n: usize,
    #[arg(long = "r", allow_negative_numbers = true, conflicts_with_all = ["r_min", "r_max"])]
    r: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "r_max")]
    r_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "r_min")]
    r_max: Option<i64>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct HomologyReport {
    kind: ComplexKind,
    rank: [usize; 2],
    weight: Option<i64>,
    base: String,
    window: [i64; 2],
    homology: Vec<HomologySummary>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct BerReport {
    ber: String,
    terms: Vec<TermRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    matrix: Option<SuperMatrixRecord>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<skos::Error> for Failure {
    fn from(e: skos::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn parse_rank(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"a,b\", got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn range<T: Copy>(one: Option<T>, lo: Option<T>, hi: Option<T>, name: &str) -> Result<(T, T), Failure> {
    match (one, lo, hi) {
        (Some(v), _, _) => Ok((v, v)),
        (None, Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Failure::Usage(format!("give --{name} or both --{name}-min and --{name}-max"))),
    }
}

fn form_weight(weight: i64) -> Result<u32, Failure> {
    u32::try_from(weight).map_err(|_| Failure::Usage(format!("weight must be a non-negative integer, got {weight}")))
}

fn build(kind: KindArg, rank: (usize, usize), weight: Option<i64>, cap: Option<u32>, omega: Option<&[BigInt]>) -> Result<GradedComplex, Failure> {
    let (a, b) = rank;
    let weight = || weight.ok_or_else(|| Failure::Usage("--weight is required for this kind".into()));
    Ok(match kind {
        KindArg::Koszul | KindArg::Derham => {
            let n = form_weight(weight()?)?;
            let cap = cap.unwrap_or(n);
            if kind == KindArg::Koszul {
                build_koszul(a, b, n, cap)
            } else {
                build_derham(a, b, n, cap)
            }
        }
        KindArg::Berezinian => build_berezinian(a, b, weight()?, cap.unwrap_or(6)),
        KindArg::Specialize => {
            let omega = omega.ok_or_else(|| Failure::Usage("--omega is required for specialize".into()))?;
            specialize_koszul(a, b, omega, cap.unwrap_or(6))?
        }
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn no_csv(output: Output) -> Result<(), Failure> {
    if output == Output::Csv {
        return Err(Failure::Usage("csv output is only available for cohomology tables".into()));
    }
    Ok(())
}

fn describe_complex(c: &GradedComplex) -> String {
    let (lo, hi) = c.window();
    let mut out = format!(
        "{:?} complex of rank {} weight {} window [{lo}, {hi}]\n",
        c.kind,
        SuperDim::new(c.rank.0 as u64, c.rank.1 as u64),
        c.weight.map_or_else(|| "-".to_string(), |w| w.to_string())
    );
    for p in c.positions() {
        let labels = c.labels(p).unwrap_or(&[]);
        let _ = writeln!(out, "  {p:>3}: {} {}", c.dim(p), labels.join(" "));
        if let Some(d) = c.differential_from(p) {
            let _ = writeln!(out, "       d: {p} -> {} ({}x{}, {} nonzero)", p + 1, d.rows(), d.cols(), d.nnz());
        }
    }
    out.pop();
    out
}

fn emit_complex(c: &GradedComplex, output: Output) -> Result<String, Failure> {
    no_csv(output)?;
    Ok(match output {
        Output::Json => to_json(&c.to_record()),
        _ => describe_complex(c),
    })
}

fn emit_tables(tables: &[CohomologyTable], output: Output) -> String {
    match output {
        Output::Json => to_json(&tables),
        Output::Csv => std::iter::once(CSV_HEADER.to_string())
            .chain(tables.iter().flat_map(CohomologyTable::csv_rows))
            .collect::<Vec<_>>()
            .join("\n"),
        Output::Text => tables.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
    }
}

fn terms_record(e: &GrassmannElement<BigRational>) -> Vec<TermRecord> {
    let mut terms: Vec<(u32, &BigRational)> = e.terms().collect();
    terms.sort_by_key(|(mask, _)| (mask.count_ones(), std::cmp::Reverse(mask.reverse_bits())));
    terms
        .into_iter()
        .map(|(mask, c)| TermRecord {
            coeff: c.to_string(),
            thetas: (0..32).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect(),
        })
        .collect()
}

fn homology_report(args: &HomologyArgs) -> Result<HomologyReport, Failure> {
    let complex = match (&args.input, args.kind) {
        (Some(path), _) => GradedComplex::from_record(&read_json::<ComplexRecord>(path)?)?,
        (None, Some(kind)) => {
            let rank = args.rank.ok_or_else(|| Failure::Usage("--rank is required with --kind".into()))?;
            build(kind, rank, args.weight, args.cap, args.omega.as_deref())?
        }
        (None, None) => unreachable!("clap requires --kind or --input"),
    };
    let positions = match args.position {
        Some(p) => vec![p],
        None => complex.positions().filter(|&p| complex.check_window(p).is_ok()).collect(),
    };
    let homology = positions
        .into_iter()
        .map(|p| homology(&complex, args.base, p))
        .collect::<skos::Result<Vec<_>>>()?;
    let (lo, hi) = complex.window();
    Ok(HomologyReport {
        kind: complex.kind,
        rank: [complex.rank.0, complex.rank.1],
        weight: complex.weight,
        base: args.base.to_string(),
        window: [lo, hi],
        homology,
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    let output = cli.output;
    match cli.command {
        Command::Koszul(args) => emit_complex(&build(KindArg::Koszul, args.rank, Some(args.weight), args.cap, None)?, output),
        Command::Derham(args) => emit_complex(&build(KindArg::Derham, args.rank, Some(args.weight), args.cap, None)?, output),
        Command::BerezinianComplex(args) => {
            emit_complex(&build(KindArg::Berezinian, args.rank, Some(args.weight), Some(args.cap), None)?, output)
        }
        Command::Specialize(args) => {
            emit_complex(&build(KindArg::Specialize, args.rank, None, Some(args.cap), Some(&args.omega))?, output)
        }
        Command::Homology(args) => {
            no_csv(output)?;
            let report = homology_report(&args)?;
            Ok(match output {
                Output::Json => to_json(&report),
                _ => {
                    let mut out = format!(
                        "{:?} complex of rank {} weight {} over {}",
                        report.kind,
                        SuperDim::new(report.rank[0] as u64, report.rank[1] as u64),
                        report.weight.map_or_else(|| "-".to_string(), |w| w.to_string()),
                        report.base
                    );
                    for h in &report.homology {
                        let _ = write!(out, "\n{h}");
                    }
                    out
                }
            })
        }
        Command::Ber(args) => {
            no_csv(output)?;
            let (matrix, record): (SuperMatrix<BigRational>, _) = match &args.input {
                Some(path) => (read_json::<SuperMatrixRecord>(path)?.to_matrix()?, None),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
                    let m = random_invertible(&mut rng, args.rank.0, args.rank.1, args.gens);
                    let rec = SuperMatrixRecord::from_matrix(&m);
                    (m, Some(rec))
                }
            };
            let ber = matrix.ber()?;
            Ok(match output {
                Output::Json => to_json(&BerReport {
                    ber: ber.to_string(),
                    terms: terms_record(&ber),
                    matrix: record,
                }),
                _ => ber.to_string(),
            })
        }
        Command::Bott(args) => {
            let (p_lo, p_hi) = range(args.p, args.p_min, args.p_max, "p")?;
            let (r_lo, r_hi) = range(args.r, args.r_min, args.r_max, "r")?;
            let tables = bott_table(args.m, args.n, p_lo..=p_hi, r_lo..=r_hi, args.method, args.base)?;
            Ok(emit_tables(&tables, output))
        }
        Command::LineBundle(args) => {
            let (r_lo, r_hi) = range(args.r, args.r_min, args.r_max, "r")?;
            let tables: Vec<CohomologyTable> = (r_lo..=r_hi).map(|r| cohomology_line_bundle(args.m, args.n, r)).collect();
            Ok(emit_tables(&tables, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
