//! The `jaccard-submod` command line.
//!
//! [`run`] parses arguments and returns the exit code together with whatever
//! was written to standard output and standard error, so tests can drive the
//! tool in-process; [`run_with`] streams to caller-supplied writers instead.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_USAGE`], [`EXIT_MISMATCH`], [`EXIT_INFEASIBLE`].

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::certify::{self, Counterexample, Method, Property, Verdict};
use crate::error::{Error, Result};
use crate::jaccard::{EmptyConvention, JaccardFamily};
use crate::lovasz::{self, ConvexityReport, RelaxedPoint, SubgradientReport};
use crate::mask::{GroundSet, SubsetMask};
use crate::setfn::SetFunction;
use crate::value::{Value, DEFAULT_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "jaccard-submod",
    version,
    about = "Certify submodularity of Jaccard-index set functions"
)]
struct Cli {
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exhaustively certify (sub/super)modularity
    Certify(CertifyArgs),
    /// Produce a verified violating (A, B, x)
    Counterexample(CounterexampleArgs),
    /// Print the full value table in mask order
    Tabulate(TabulateArgs),
    /// Evaluate the Lovász extension and run probes
    Lovasz(LovaszArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    JaccardDirect,
    JaccardMisprediction,
    JaccardLoss,
    Modular,
    Coverage,
    Table,
}

impl Family {
    fn is_jaccard(self) -> bool {
        matches!(
            self,
            Family::JaccardDirect | Family::JaccardMisprediction | Family::JaccardLoss
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Args, Debug)]
struct FunctionArgs {
    #[arg(long)]
    family: Family,

    /// Ground set size
    #[arg(long)]
    n: usize,

    /// Ground truth G as a hex mask, e.g. 0x05
    #[arg(long, conflicts_with = "ground_truth_elems")]
    ground_truth: Option<SubsetMask>,

    /// Ground truth G as element indices, e.g. 0,2,5
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    ground_truth_elems: Option<Vec<usize>>,

    /// Modular weights, comma-separated decimals or fractions
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<Value>>,

    /// CSV file with header `mask,value` covering every subset
    #[arg(long)]
    table: Option<PathBuf>,

    /// Coverage sets, one hex mask per element
    #[arg(long, value_delimiter = ',')]
    covers: Option<Vec<SubsetMask>>,

    /// Negate the function
    #[arg(long)]
    negate: bool,

    /// Evaluate at `S △ T` for this hex mask T
    #[arg(long)]
    transform_by: Option<SubsetMask>,

    /// Value of the Jaccard index when G ∪ A is empty
    #[arg(long, value_parser = ["0", "1"])]
    empty_value: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Definitional,
    Local,
    Both,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    function: FunctionArgs,

    #[arg(long, value_enum, default_value = "local")]
    method: MethodArg,

    /// Exit with code 2 unless every verdict equals this
    #[arg(long, value_enum)]
    expect: Option<VerdictArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerdictArg {
    Submodular,
    Supermodular,
    Modular,
    Neither,
}

impl From<VerdictArg> for Verdict {
    fn from(v: VerdictArg) -> Self {
        match v {
            VerdictArg::Submodular => Verdict::Submodular,
            VerdictArg::Supermodular => Verdict::Supermodular,
            VerdictArg::Modular => Verdict::Modular,
            VerdictArg::Neither => Verdict::Neither,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyArg {
    Submodularity,
    Supermodularity,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Self {
        match p {
            PropertyArg::Submodularity => Property::Submodularity,
            PropertyArg::Supermodularity => Property::Supermodularity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Constructor {
    Search,
    PaperCaseI,
    PaperCaseIi,
}

#[derive(Args, Debug)]
struct CounterexampleArgs {
    #[command(flatten)]
    function: FunctionArgs,

    /// Inequality to violate; required for `search`
    #[arg(long, value_enum)]
    property: Option<PropertyArg>,

    #[arg(long, value_enum, default_value = "search")]
    constructor: Constructor,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct TabulateArgs {
    #[command(flatten)]
    function: FunctionArgs,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct LovaszArgs {
    #[command(flatten)]
    function: FunctionArgs,

    /// Point in [0,1]^n, comma-separated
    #[arg(long, value_delimiter = ',')]
    point: Option<Vec<f64>>,

    /// Compare the extension with f at every vertex
    #[arg(long)]
    check_vertex: bool,

    /// Probe midpoint convexity on random pairs
    #[arg(long)]
    check_convexity: bool,

    /// Probe the subgradient at --point against random points
    #[arg(long)]
    check_subgradient: bool,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Convexity trials
    #[arg(long, default_value_t = 10_000)]
    trials: u64,

    /// Subgradient probes
    #[arg(long, default_value_t = 1_000)]
    probes: u64,
}

/// A validated description of the set function a command operates on.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    pub family: Family,
    pub n: usize,
    pub ground_truth: Option<SubsetMask>,
    pub empty: Option<EmptyConvention>,
    pub weights: Option<Vec<Value>>,
    pub table_path: Option<PathBuf>,
    pub covers: Option<Vec<u64>>,
    pub negate: bool,
    pub transform_by: Option<SubsetMask>,
}

impl FunctionSpec {
    /// A spec with only the family and size set.
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            ground_truth: None,
            empty: None,
            weights: None,
            table_path: None,
            covers: None,
            negate: false,
            transform_by: None,
        }
    }

    /// Rejects missing and extraneous fields for the chosen family.
    pub fn validate(&self) -> Result<()> {
        let family = self.family;
        let invalid = |msg: String| Err(Error::Invalid(msg));
        let fields = [
            (
                "--ground-truth",
                self.ground_truth.is_some(),
                family.is_jaccard(),
            ),
            ("--empty-value", self.empty.is_some(), family.is_jaccard()),
            (
                "--weights",
                self.weights.is_some(),
                family == Family::Modular,
            ),
            (
                "--table",
                self.table_path.is_some(),
                family == Family::Table,
            ),
            (
                "--covers",
                self.covers.is_some(),
                family == Family::Coverage,
            ),
        ];
        for (flag, present, allowed) in fields {
            if present && !allowed {
                return invalid(format!("family {family} does not take {flag}"));
            }
        }
        let required = match family {
            Family::JaccardDirect | Family::JaccardMisprediction | Family::JaccardLoss => {
                Some(("--ground-truth", self.ground_truth.is_some()))
            }
            Family::Modular => Some(("--weights", self.weights.is_some())),
            Family::Coverage => Some(("--covers", self.covers.is_some())),
            Family::Table => Some(("--table", self.table_path.is_some())),
        };
        if let Some((flag, false)) = required {
            return invalid(format!("family {family} requires {flag}"));
        }
        let ground = GroundSet::new(self.n)?;
        if let Some(g) = self.ground_truth {
            ground.check(g)?;
        }
        if let Some(t) = self.transform_by {
            ground.check(t)?;
        }
        if let Some(w) = &self.weights {
            if w.len() != self.n {
                return invalid(format!(
                    "--weights has {} entries, expected n = {}",
                    w.len(),
                    self.n
                ));
            }
        }
        if let Some(c) = &self.covers {
            if c.len() != self.n {
                return invalid(format!(
                    "--covers has {} entries, expected n = {}",
                    c.len(),
                    self.n
                ));
            }
        }
        Ok(())
    }

    /// The Jaccard family behind a jaccard-* spec.
    pub fn jaccard_family(&self) -> Result<Option<JaccardFamily>> {
        if !self.family.is_jaccard() {
            return Ok(None);
        }
        let ground = GroundSet::new(self.n)?;
        let truth = self.ground_truth.unwrap_or(SubsetMask::EMPTY);
        let fam = JaccardFamily::new(ground, truth)?
            .with_empty_convention(self.empty.unwrap_or_default());
        Ok(Some(fam))
    }

    /// Validates the spec and builds the function it describes.
    pub fn build(&self) -> Result<SetFunction> {
        self.validate()?;
        let ground = GroundSet::new(self.n)?;
        let base = match self.family {
            Family::JaccardDirect | Family::JaccardMisprediction | Family::JaccardLoss => {
                let fam = self.jaccard_family()?.expect("jaccard family");
                match self.family {
                    Family::JaccardDirect => fam.direct(),
                    Family::JaccardMisprediction => fam.misprediction(),
                    _ => fam.loss(),
                }
            }
            Family::Modular => SetFunction::modular(self.weights.clone().expect("validated"))?,
            Family::Coverage => SetFunction::coverage(self.covers.clone().expect("validated"))?,
            Family::Table => {
                let path = self.table_path.as_deref().expect("validated");
                SetFunction::tabulated(ground, read_table(path, ground)?)?
            }
        };
        let transformed = match self.transform_by {
            Some(t) => base.symdiff_transform(t)?,
            None => base,
        };
        Ok(if self.negate {
            transformed.negate()
        } else {
            transformed
        })
    }
}

impl TryFrom<&FunctionArgs> for FunctionSpec {
    type Error = Error;

    fn try_from(a: &FunctionArgs) -> Result<Self> {
        let ground_truth = match &a.ground_truth_elems {
            Some(elems) => {
                let ground = GroundSet::new(a.n)?;
                for &e in elems {
                    ground.check_element(e)?;
                }
                Some(SubsetMask::from_elements(elems.iter().copied()))
            }
            None => a.ground_truth,
        };
        let empty = a.empty_value.as_deref().map(|v| match v {
            "0" => EmptyConvention::Zero,
            _ => EmptyConvention::One,
        });
        Ok(Self {
            family: a.family,
            n: a.n,
            ground_truth,
            empty,
            weights: a.weights.clone(),
            table_path: a.table.clone(),
            covers: a
                .covers
                .as_ref()
                .map(|c| c.iter().map(|m| m.bits()).collect()),
            negate: a.negate,
            transform_by: a.transform_by,
        })
    }
}

/// Reads a `mask,value` CSV and checks that it covers every subset exactly once.
pub fn read_table(path: &Path, ground: GroundSet) -> Result<Vec<Value>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    if headers != vec!["mask", "value"] {
        return Err(Error::Invalid(format!(
            "{}: header must be `mask,value`",
            path.display()
        )));
    }
    let mut values: Vec<Option<Value>> = vec![None; ground.subset_count() as usize];
    for (line, record) in reader.deserialize::<(String, String)>().enumerate() {
        let (mask, value) =
            record.map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        let row = line + 2;
        let mask = ground
            .check(mask.parse()?)
            .map_err(|e| Error::Invalid(format!("{} row {row}: {e}", path.display())))?;
        let slot = &mut values[mask.bits() as usize];
        if slot.is_some() {
            return Err(Error::Invalid(format!(
                "{} row {row}: duplicate mask {mask}",
                path.display()
            )));
        }
        *slot = Some(value.parse()?);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(m, v)| {
            v.ok_or_else(|| {
                Error::Invalid(format!(
                    "{}: no value for mask {}",
                    path.display(),
                    SubsetMask::from_bits(m as u64)
                ))
            })
        })
        .collect()
}

/// One row of `tabulate` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub mask: SubsetMask,
    pub cardinality: usize,
    pub value: Value,
}

/// A counterexample that has been re-evaluated against the function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifiedCounterexample {
    #[serde(flatten)]
    pub witness: Counterexample,
    pub verified: bool,
}

/// `lovasz` output; fields appear only when requested.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LovaszOutput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgradient: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_agreement: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convexity: Option<ConvexityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgradient_check: Option<SubgradientReport>,
}

/// Captured result of an in-process invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool with `args` (including the program name) and captures output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(args, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).expect("utf-8 output"),
        stderr: String::from_utf8(err).expect("utf-8 output"),
    }
}

/// Runs the tool with `args`, writing to `out` and `err`; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        let _ = writeln!(err, "error: --threads must be at least 1");
        return EXIT_USAGE;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let result = dispatch(&cli.command, &pool, out, err);
    match result {
        Ok(code) => code,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            match failure {
                Failure::Lib(Error::Infeasible(_)) => EXIT_INFEASIBLE,
                _ => EXIT_USAGE,
            }
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => e.fmt(f),
            Failure::Io(e) => write!(f, "write failed: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn dispatch(
    command: &Command,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    match command {
        Command::Certify(a) => certify_cmd(a, pool, out, err),
        Command::Counterexample(a) => counterexample_cmd(a, pool, out),
        Command::Tabulate(a) => tabulate_cmd(a, pool, out),
        Command::Lovasz(a) => lovasz_cmd(a, pool, out),
    }
}

fn certify_cmd(
    a: &CertifyArgs,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let f = pool.install(|| FunctionSpec::try_from(&a.function)?.build())?;
    let methods: &[Method] = match a.method {
        MethodArg::Definitional => &[Method::Definitional],
        MethodArg::Local => &[Method::Local],
        MethodArg::Both => &[Method::Definitional, Method::Local],
    };
    let reports = pool.install(|| {
        methods
            .iter()
            .map(|m| match m {
                Method::Definitional => certify::certify_definitional(&f),
                Method::Local => certify::certify_local(&f),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    for r in &reports {
        writeln!(out, "{}", r.to_json())?;
    }
    if let Some(expect) = a.expect.map(Verdict::from) {
        if let Some(r) = reports.iter().find(|r| r.verdict != expect) {
            writeln!(err, "expected {expect}, got {}", r.verdict)?;
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(EXIT_OK)
}

fn counterexample_cmd(
    a: &CounterexampleArgs,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let spec = FunctionSpec::try_from(&a.function)?;
    let f = pool.install(|| spec.build())?;
    let found = match a.constructor {
        Constructor::Search => {
            let Some(property) = a.property else {
                return Err(
                    Error::Invalid("--constructor search requires --property".into()).into(),
                );
            };
            pool.install(|| certify::find_counterexample(&f, property.into()))?
        }
        named => {
            let fam = match spec.jaccard_family()? {
                Some(fam) if spec.family == Family::JaccardDirect => fam,
                _ => {
                    return Err(Error::Invalid(format!(
                        "constructors paper-case-i and paper-case-ii apply to family jaccard-direct, not {}",
                        spec.family
                    ))
                    .into())
                }
            };
            if spec.negate || spec.transform_by.is_some() {
                return Err(Error::Invalid(
                    "constructors paper-case-i and paper-case-ii do not take --negate or --transform-by".into(),
                )
                .into());
            }
            let (w, implied) = if named == Constructor::PaperCaseI {
                (
                    certify::paper_counterexample_case_i(&fam)?,
                    Property::Supermodularity,
                )
            } else {
                (
                    certify::paper_counterexample_case_ii(&fam)?,
                    Property::Submodularity,
                )
            };
            if let Some(p) = a.property.map(Property::from) {
                if p != implied {
                    return Err(Error::Invalid(format!(
                        "this constructor violates {implied}, not {p}"
                    ))
                    .into());
                }
            }
            Some(w)
        }
    };
    match found {
        Some(witness) => {
            if !witness.verify(&f, DEFAULT_TOLERANCE) {
                return Err(Error::Precondition("witness failed re-evaluation".into()).into());
            }
            let v = VerifiedCounterexample {
                witness,
                verified: true,
            };
            writeln!(out, "{}", serde_json::to_string(&v).expect("serializable"))?;
        }
        None => writeln!(out, "\"none\"")?,
    }
    Ok(EXIT_OK)
}

fn tabulate_cmd(
    a: &TabulateArgs,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let f = pool.install(|| FunctionSpec::try_from(&a.function)?.build())?;
    let values = pool.install(|| f.tabulate())?;
    let rows = values.into_iter().enumerate().map(|(m, value)| {
        let mask = SubsetMask::from_bits(m as u64);
        TableRow {
            mask,
            cardinality: mask.len(),
            value,
        }
    });
    let mut out = io::BufWriter::new(out);
    match a.format {
        Format::Json => {
            out.write_all(b"[")?;
            for (i, row) in rows.enumerate() {
                if i > 0 {
                    out.write_all(b",")?;
                }
                serde_json::to_writer(&mut out, &row).map_err(io::Error::from)?;
            }
            out.write_all(b"]\n")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(&row)
                    .map_err(|e| Error::Invalid(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn lovasz_cmd(
    a: &LovaszArgs,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let f = pool.install(|| FunctionSpec::try_from(&a.function)?.build())?;
    let n = f.ground().len();
    let point = match &a.point {
        Some(coords) => {
            if coords.len() != n {
                return Err(Error::Invalid(format!(
                    "--point has {} coordinates, expected n = {n}",
                    coords.len()
                ))
                .into());
            }
            Some(RelaxedPoint::new(coords.clone())?)
        }
        None => None,
    };
    if point.is_none() && !(a.check_vertex || a.check_convexity || a.check_subgradient) {
        return Err(
            Error::Invalid("nothing to do: pass --point or a --check-* flag".into()).into(),
        );
    }
    let mut report = LovaszOutput {
        value: None,
        permutation: None,
        subgradient: None,
        vertex_agreement: None,
        convexity: None,
        subgradient_check: None,
    };
    if let Some(p) = &point {
        let r = lovasz::lovasz_extension(&f, p)?;
        report.value = Some(r.value);
        report.permutation = Some(r.permutation);
        report.subgradient = Some(r.subgradient);
    }
    if a.check_vertex {
        report.vertex_agreement = Some(pool.install(|| lovasz::vertex_agreement_check(&f))?);
    }
    if a.check_convexity {
        report.convexity = Some(pool.install(|| lovasz::convexity_probe(&f, a.trials, a.seed))?);
    }
    if a.check_subgradient {
        let Some(p) = &point else {
            return Err(Error::Invalid("--check-subgradient requires --point".into()).into());
        };
        report.subgradient_check =
            Some(pool.install(|| lovasz::subgradient_probe(&f, p, a.probes, a.seed))?);
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string(&report).expect("finite floats")
    )?;
    Ok(EXIT_OK)
}
