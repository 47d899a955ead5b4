//! Command-line front end. [`run`] returns the process exit status so the
//! commands can be driven from tests without spawning a process.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::cohomology::{
    basis, build_lambda_matrix, compute, is_trivial, realize, CocycleSymbolic, CohomologyReport, Triviality,
};
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, Rational};
use crate::oracle::{stabilized_h1, Stabilization, TruncationBox};
use crate::params::{parse_list, ParamSpace};
use crate::symcalc::differential1;

pub const SCHEMA: &str = "densicohom/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_ORACLE_MISMATCH: i32 = 4;
pub const EXIT_NOT_STABILIZED: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "densicohom", version, about = "First cohomology of sl(2) with coefficients in n-ary differential operators on weighted densities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of H¹ and of the aff(1)-relative H¹ at one point
    Dim(PointArgs),
    /// Explicit normal-form cocycle basis
    Basis(PointArgs),
    /// Check every basis element is closed and nontrivial
    Verify {
        #[command(flatten)]
        point: PointArgs,
        /// Add 1 to one B coefficient of the first element before checking
        #[arg(long)]
        perturb: bool,
    },
    /// Compare the engine against the truncated brute-force computation
    Oracle {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Sweep a grid of weights at fixed shift k
    Scan(ScanArgs),
    /// Print the Λ matrix with labelled rows and columns
    Matrix(MatrixArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated weights, e.g. 1/2,-1
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "delta", required_unless_present = "delta")]
    mu: Option<String>,
    /// Shift μ − Σλᵢ; sets μ accordingly
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ScheduleArgs {
    #[arg(long)]
    max_order: Option<u32>,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    margin: Option<u32>,
    #[arg(long, default_value_t = 5)]
    max_steps: u32,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    /// Per-slot weight lists separated by ';', e.g. "0,-1/2;0,-1/2"
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    output: OutputArgs,
}

/// A validated scan request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpec {
    pub n: usize,
    pub k: u32,
    pub lambda_grid: Vec<Vec<Rational>>,
}

impl ScanSpec {
    pub fn new(n: usize, k: u32, lambda_grid: Vec<Vec<Rational>>) -> Result<Self> {
        if lambda_grid.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lambda_grid.len(),
            });
        }
        if lambda_grid.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter("every slot needs at least one weight".into()));
        }
        Ok(ScanSpec { n, k, lambda_grid })
    }

    pub fn parse(n: usize, k: u32, grid: &str) -> Result<Self> {
        Self::new(n, k, grid.split(';').map(parse_list).collect::<Result<_>>()?)
    }

    /// Grid points with slot 1 outermost.
    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.lambda_grid.iter().fold(vec![Vec::new()], |acc, slot| {
            acc.iter()
                .flat_map(|prefix| {
                    slot.iter().map(move |l| {
                        let mut p = prefix.clone();
                        p.push(l.clone());
                        p
                    })
                })
                .collect()
        })
    }
}

/// `{"schema": ..., <body fields>}`.
#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct Envelope<T> {
    pub schema: String,
    #[serde(flatten)]
    pub body: T,
}

fn envelope<T>(body: T) -> Envelope<T> {
    Envelope {
        schema: SCHEMA.to_string(),
        body,
    }
}

#[derive(Serialize)]
struct BasisElement<'a> {
    kind: &'static str,
    terms: String,
    #[serde(flatten)]
    cocycle: &'a CocycleSymbolic,
}

#[derive(Serialize)]
struct BasisOutput<'a> {
    params: &'a ParamSpace,
    dim_h1: usize,
    cocycles: Vec<BasisElement<'a>>,
}

#[derive(Serialize)]
struct VerifyElement {
    index: usize,
    terms: String,
    closed: bool,
    nontrivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Triviality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    params: &'a ParamSpace,
    perturbed: bool,
    elements: Vec<VerifyElement>,
    all_pass: bool,
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    params: &'a ParamSpace,
    engine_dim: u64,
    initial_box: TruncationBox,
    oracle: Stabilization,
    #[serde(rename = "match")]
    matches: bool,
}

/// One `scan` row.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub lambda: String,
    pub delta: String,
    pub case: String,
    pub rank_lambda: u64,
    pub dim_h1: u64,
    pub dim_h1_relative: u64,
    pub paper_lower: u64,
    pub paper_upper: u64,
    pub bounds_satisfied: bool,
}

impl ScanRow {
    fn from_report(r: &CohomologyReport) -> Self {
        let case = match &r.case {
            crate::cohomology::CaseTag::NonIntegerShift => "NonIntegerShift".to_string(),
            crate::cohomology::CaseTag::Integer { k, resonant: false, .. } => format!("Integer({k})"),
            crate::cohomology::CaseTag::Integer { k, r: rr, .. } => {
                format!("Integer({k},resonant,r={})", rr.unwrap_or_default())
            }
        };
        ScanRow {
            lambda: r.params.lambda().iter().map(format_rational).collect::<Vec<_>>().join(" "),
            delta: format_rational(&r.params.delta()),
            case,
            rank_lambda: r.rank_lambda,
            dim_h1: r.dim_h1,
            dim_h1_relative: r.dim_h1_relative,
            paper_lower: r.paper_lower,
            paper_upper: r.paper_upper,
            bounds_satisfied: r.bounds_satisfied,
        }
    }
}

/// Computes all scan rows in grid order. Points are evaluated on worker threads;
/// rows are collected back by index.
pub fn scan(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    let points = spec.points();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len().max(1));
    let chunk = points.len().div_ceil(workers).max(1);
    let k = Rational::from_integer(spec.k.into());
    let results: Vec<Result<Vec<ScanRow>>> = std::thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                let k = k.clone();
                s.spawn(move || {
                    part.iter()
                        .map(|lambda| {
                            let params = ParamSpace::with_delta(lambda.clone(), k.clone())?;
                            Ok(ScanRow::from_report(&compute(&params)?))
                        })
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(points.len());
    for part in results {
        rows.extend(part?);
    }
    Ok(rows)
}

fn point(args: &PointArgs) -> Result<ParamSpace> {
    let lambda = parse_list(&args.lambda)?;
    if lambda.len() != args.n {
        return Err(Error::DimensionMismatch {
            expected: args.n,
            found: lambda.len(),
        });
    }
    match (&args.mu, &args.delta) {
        (Some(mu), None) => ParamSpace::new(lambda, parse_rational(mu)?),
        (None, Some(delta)) => ParamSpace::with_delta(lambda, parse_rational(delta)?),
        _ => Err(Error::InvalidParameter("give exactly one of --mu and --delta".into())),
    }
}

/// Annotation such as `h' f''⊗g − 4 h' f'⊗g' + h' f⊗g''`; the δ = 0 class reads `h' f₁⋯fₙ`.
pub fn annotate(c: &CocycleSymbolic, n: usize) -> String {
    let zero_level = c.c.is_empty() && c.b.len() == 1 && c.b.keys().all(|a| a.degree() == 0);
    if zero_level && c.b.values().all(num_traits::One::is_one) {
        return if n == 1 { "h' f".into() } else { "h' f₁⋯fₙ".into() };
    }
    c.describe(n).replace(" - ", " − ")
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let output = match &cli.command {
        Command::Dim(p) | Command::Basis(p) => &p.output,
        Command::Verify { point, .. } | Command::Oracle { point, .. } => &point.output,
        Command::Scan(s) => &s.output,
        Command::Matrix(m) => &m.output,
    };
    let mut buffer = Vec::new();
    let code = match execute(&cli.command, output.format, &mut buffer) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &output.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(&buffer)),
        None => stdout.write_all(&buffer),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    code
}

fn json_line<T: Serialize>(out: &mut Vec<u8>, value: &T) -> Result<()> {
    let s = serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))?;
    out.extend_from_slice(s.as_bytes());
    out.push(b'\n');
    Ok(())
}

fn csv_rows<T: Serialize>(out: &mut Vec<u8>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

fn execute(command: &Command, format: Format, out: &mut Vec<u8>) -> Result<i32> {
    match command {
        Command::Dim(args) => {
            let report = compute(&point(args)?)?;
            match format {
                Format::Json => json_line(out, &envelope(&report))?,
                Format::Csv => csv_rows(out, &[ScanRow::from_report(&report)])?,
            }
            Ok(EXIT_OK)
        }
        Command::Basis(args) => {
            let params = point(args)?;
            let cocycles = basis(&params)?;
            let elements: Vec<BasisElement> = cocycles
                .iter()
                .map(|c| BasisElement {
                    kind: if c.b.is_empty() { "second-order" } else { "first-order" },
                    terms: annotate(c, params.n()),
                    cocycle: c,
                })
                .collect();
            match format {
                Format::Json => json_line(
                    out,
                    &envelope(BasisOutput {
                        params: &params,
                        dim_h1: elements.len(),
                        cocycles: elements,
                    }),
                )?,
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        index: usize,
                        kind: &'static str,
                        terms: String,
                    }
                    let rows: Vec<Row> = elements
                        .into_iter()
                        .enumerate()
                        .map(|(index, e)| Row { index, kind: e.kind, terms: e.terms })
                        .collect();
                    csv_rows(out, &rows)?
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { point: args, perturb } => {
            let params = point(args)?;
            let mut cocycles = basis(&params)?;
            if *perturb {
                if let Some(first) = cocycles.first_mut() {
                    let k = crate::cohomology::classify(&params).k().expect("nonempty basis has δ ∈ ℕ");
                    let target = match first.b.keys().next_back() {
                        Some(alpha) => alpha.clone(),
                        None => build_lambda_matrix(&params, k)?.cols[0].clone(),
                    };
                    let slot = first.b.entry(target).or_insert_with(|| Rational::from_integer(0.into()));
                    *slot += Rational::from_integer(1.into());
                    *first = CocycleSymbolic::new(first.b.clone(), first.c.clone());
                }
            }
            let elements: Vec<VerifyElement> = cocycles
                .iter()
                .enumerate()
                .map(|(index, c)| verify_element(index, c, &params))
                .collect::<Result<_>>()?;
            let all_pass = elements.iter().all(|e| e.pass);
            match format {
                Format::Json => json_line(
                    out,
                    &envelope(VerifyOutput {
                        params: &params,
                        perturbed: *perturb,
                        elements,
                        all_pass,
                    }),
                )?,
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        index: usize,
                        terms: String,
                        closed: bool,
                        nontrivial: bool,
                        pass: bool,
                    }
                    let rows: Vec<Row> = elements
                        .into_iter()
                        .map(|e| Row {
                            index: e.index,
                            terms: e.terms,
                            closed: e.closed,
                            nontrivial: e.nontrivial,
                            pass: e.pass,
                        })
                        .collect();
                    csv_rows(out, &rows)?
                }
            }
            Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Oracle { point: args, schedule } => {
            let params = point(args)?;
            let report = compute(&params)?;
            let default = TruncationBox::default_for(&params);
            let initial = TruncationBox::new(
                schedule.max_order.unwrap_or(default.max_order),
                schedule.max_degree.unwrap_or(default.max_degree),
                schedule.margin.unwrap_or(default.source_degree_margin),
            );
            let oracle = stabilized_h1(&params, &initial, schedule.max_steps)?;
            let matches = oracle.dim == Some(report.dim_h1);
            let code = if !oracle.stabilized {
                EXIT_NOT_STABILIZED
            } else if !matches {
                EXIT_ORACLE_MISMATCH
            } else {
                EXIT_OK
            };
            let body = OracleOutput {
                params: &params,
                engine_dim: report.dim_h1,
                initial_box: initial,
                oracle,
                matches,
            };
            match format {
                Format::Json => json_line(out, &envelope(body))?,
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row {
                        engine_dim: u64,
                        oracle_dim: Option<u64>,
                        stabilized: bool,
                        steps: u32,
                        matches: bool,
                    }
                    csv_rows(
                        out,
                        &[Row {
                            engine_dim: body.engine_dim,
                            oracle_dim: body.oracle.dim,
                            stabilized: body.oracle.stabilized,
                            steps: body.oracle.steps,
                            matches: body.matches,
                        }],
                    )?
                }
            }
            Ok(code)
        }
        Command::Scan(args) => {
            let spec = ScanSpec::parse(args.n, args.k, &args.grid)?;
            let rows = scan(&spec)?;
            match format {
                Format::Json => {
                    for row in &rows {
                        json_line(out, &envelope(row))?;
                    }
                }
                Format::Csv => csv_rows(out, &rows)?,
            }
            Ok(EXIT_OK)
        }
        Command::Matrix(args) => {
            let lambda = parse_list(&args.lambda)?;
            if lambda.len() != args.n {
                return Err(Error::DimensionMismatch {
                    expected: args.n,
                    found: lambda.len(),
                });
            }
            let params = ParamSpace::with_delta(lambda, Rational::from_integer(args.k.into()))?;
            let m = build_lambda_matrix(&params, args.k)?;
            let note = (args.k == 0).then_some("k = 0: Λ is the empty 0×1 matrix");
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct MatrixOutput<'a> {
                        #[serde(flatten)]
                        matrix: &'a crate::cohomology::LambdaMatrix,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        note: Option<&'static str>,
                    }
                    json_line(out, &envelope(MatrixOutput { matrix: &m, note }))?
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    let mut header = vec!["row\\col".to_string()];
                    header.extend(m.cols.iter().map(|c| c.to_string()));
                    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
                    w.write_record(&header).map_err(csv_err)?;
                    for (r, beta) in m.rows.iter().enumerate() {
                        let mut record = vec![beta.to_string()];
                        record.extend(m.matrix.row(r).iter().map(format_rational));
                        w.write_record(&record).map_err(csv_err)?;
                    }
                    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn verify_element(index: usize, c: &CocycleSymbolic, params: &ParamSpace) -> Result<VerifyElement> {
    let closed = differential1(&realize(c, params)?).is_zero();
    let (nontrivial, certificate, error) = match is_trivial(c, params) {
        Ok(t) => (!t.is_trivial(), Some(t), None),
        Err(e @ Error::NotACocycle(_)) => (false, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(VerifyElement {
        index,
        terms: annotate(c, params.n()),
        closed,
        nontrivial,
        certificate,
        error,
        pass: closed && nontrivial,
    })
}

/// Re-exported for integration tests that re-parse `dim` output.
pub type DimOutput = Envelope<CohomologyReport>;
