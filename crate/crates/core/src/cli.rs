//! Command-line surface: construct, weights, weil, verify, sweep, export.
//!
//! Exit status: 0 on success (including match-only verification), 1 when any
//! table mismatches, 2 on usage or parameter errors, 3 on internal failures.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::code::{Variant, DEFAULT_BUDGET};
use crate::error::Error;
use crate::gf2m::FieldCtx;
use crate::predict::{
    secret_sharing_ratio, summary, sweep, verify_case, ComputedCase, Status, SweepOptions,
    TableSet, VerificationReport,
};
use crate::weil::{weil_sum_closed, weil_sum_direct, WeilSumQuery, WeilSumValue};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tracecodes",
    version,
    about = "Trace-defined binary linear codes over GF(2^m)"
)]
pub struct Cli {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code and print its parameters.
    Construct(CodeArgs),
    /// Enumerate the weight distribution of a code.
    Weights(CodeArgs),
    /// Evaluate the Weil sum S_h(a, b) directly and in closed form.
    Weil(WeilArgs),
    /// Check a code against the applicable weight tables.
    Verify(VerifyArgs),
    /// Verify every code for a range of m.
    Sweep(SweepArgs),
    /// Write the generator matrix.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    D0,
    D1,
    Full,
    Punctured,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::D0 => Variant::D0,
            VariantArg::D1 => Variant::D1,
            VariantArg::Full => Variant::Full,
            VariantArg::Punctured => Variant::Punctured,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
enum TablesArg {
    Printed,
    Corrected,
    #[default]
    All,
}

impl From<TablesArg> for TableSet {
    fn from(t: TablesArg) -> Self {
        match t {
            TablesArg::Printed => TableSet::Printed,
            TablesArg::Corrected => TableSet::Corrected,
            TablesArg::All => TableSet::All,
        }
    }
}

fn parse_int(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = if let Some(b) = s.strip_prefix("0b") {
        u64::from_str_radix(b, 2)
    } else if let Some(x) = s.strip_prefix("0x") {
        u64::from_str_radix(x, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|e| format!("invalid integer {s:?}: {e}"))
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Extension degree m (2..=20).
    #[arg(long)]
    m: u32,
    /// Modulus polynomial, bit i = coefficient of x^i (decimal, 0b.. or 0x..).
    #[arg(long, value_parser = parse_int)]
    modulus: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Debug, Args)]
struct CodeArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Exponent parameter h, a proper divisor of m.
    #[arg(long)]
    h: u32,
    #[arg(long, value_enum, default_value = "d0")]
    variant: VariantArg,
    /// Enumeration budget in coordinate evaluations (2^m * n).
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Debug, Args)]
struct WeilArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    h: u32,
    /// Nonzero coefficient a (coordinates as an integer).
    #[arg(long, value_parser = parse_int)]
    a: u64,
    #[arg(long, value_parser = parse_int, default_value = "0")]
    b: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value_t)]
    tables: TablesArg,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    m_min: u32,
    #[arg(long, default_value_t = 12)]
    m_max: u32,
    #[arg(long, value_enum, default_value_t)]
    tables: TablesArg,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Output file (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Exit status plus captured output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            status: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: Error) -> Self {
        let status = match err {
            Error::Inconsistent(_) | Error::Io(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Outcome {
            status,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    status,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Outcome {
                status: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot start {n} worker threads: {e}\n"),
            },
        },
        None => execute(cli.command),
    }
}

fn execute(command: Command) -> Outcome {
    let result = match command {
        Command::Construct(args) => construct(&args),
        Command::Weights(args) => weights(&args),
        Command::Weil(args) => weil(&args),
        Command::Verify(args) => return verify_cmd(&args),
        Command::Sweep(args) => return sweep_cmd(&args),
        Command::Export(args) => export(&args),
    };
    match result {
        Ok(out) => Outcome::ok(out),
        Err(e) => Outcome::error(e),
    }
}

fn field(args: &FieldArgs) -> Result<Arc<FieldCtx>, Error> {
    FieldCtx::new(args.m, args.modulus).map(Arc::new)
}

fn construct(args: &CodeArgs) -> Result<String, Error> {
    let ctx = field(&args.field)?;
    let variant = Variant::from(args.variant);
    let code = variant.build(&ctx, args.h)?;
    let mut out = String::new();
    match args.field.format {
        Format::Text => {
            writeln!(
                out,
                "{variant} code over GF(2^{}) with h={}: [{}, {}]",
                ctx.degree(),
                args.h,
                code.len(),
                code.dimension()
            )
            .unwrap();
            writeln!(
                out,
                "modulus={} generator={}",
                ctx.modulus(),
                ctx.generator()
            )
            .unwrap();
        }
        Format::Machine => {
            for (k, v) in [
                ("m", ctx.degree().to_string()),
                ("h", args.h.to_string()),
                ("variant", variant.to_string()),
                ("modulus", ctx.modulus().to_string()),
                ("generator", ctx.generator().to_string()),
                ("n", code.len().to_string()),
                ("k", code.dimension().to_string()),
            ] {
                writeln!(out, "{k}={v}").unwrap();
            }
        }
    }
    Ok(out)
}

fn weights(args: &CodeArgs) -> Result<String, Error> {
    let ctx = field(&args.field)?;
    let variant = Variant::from(args.variant);
    let code = variant.build(&ctx, args.h)?;
    let dist = code.weight_distribution_with_budget(args.budget)?;
    let d = dist
        .min_distance()
        .map_or_else(|| "-".to_string(), |d| d.to_string());
    let mut out = String::new();
    match args.field.format {
        Format::Text => {
            writeln!(out, "n={} k={} d={}", dist.length(), dist.dimension(), d).unwrap();
            let pairs: Vec<String> = dist
                .nonzero_weights()
                .map(|(w, c)| format!("{w}:{c}"))
                .collect();
            writeln!(out, "weights: {}", pairs.join(" ")).unwrap();
            writeln!(out, "enumerator: {dist}").unwrap();
            if let Some((ratio, ok)) = secret_sharing_ratio(&dist) {
                writeln!(
                    out,
                    "w_min/w_max={ratio} suitable={}",
                    if ok { "yes" } else { "no" }
                )
                .unwrap();
            }
        }
        Format::Machine => {
            for (k, v) in [
                ("m", ctx.degree().to_string()),
                ("h", args.h.to_string()),
                ("variant", variant.to_string()),
                ("modulus", ctx.modulus().to_string()),
                ("n", dist.length().to_string()),
                ("k", dist.dimension().to_string()),
                ("d", d),
            ] {
                writeln!(out, "{k}={v}").unwrap();
            }
            if let Some((ratio, ok)) = secret_sharing_ratio(&dist) {
                writeln!(out, "ratio={ratio}").unwrap();
                writeln!(out, "suitable={ok}").unwrap();
            }
            for (w, c) in dist.counts() {
                writeln!(out, "{w} {c}").unwrap();
            }
        }
    }
    Ok(out)
}

fn weil(args: &WeilArgs) -> Result<String, Error> {
    let ctx = field(&args.field)?;
    let a = ctx.element(args.a)?;
    let b = ctx.element(args.b)?;
    let query = WeilSumQuery::new(&ctx, args.h, a, b)?;
    let direct = weil_sum_direct(&query);
    let closed = weil_sum_closed(&query)?;
    let (kind, value) = match closed {
        WeilSumValue::Exact(v) => ("exact", v.to_string()),
        WeilSumValue::MagnitudeOnly(v) => ("magnitude", format!("±{v}")),
    };
    let agree = closed.agrees_with(direct);
    let mut out = String::new();
    match args.field.format {
        Format::Text => writeln!(
            out,
            "S_{}({}, {}) over GF(2^{}): direct={direct} closed={value} ({kind}) agree={}",
            args.h,
            a,
            b,
            ctx.degree(),
            if agree { "yes" } else { "no" }
        )
        .unwrap(),
        Format::Machine => {
            for (k, v) in [
                ("m", ctx.degree().to_string()),
                ("h", args.h.to_string()),
                ("a", a.to_string()),
                ("b", b.to_string()),
                ("direct", direct.to_string()),
                ("closed_kind", kind.to_string()),
                ("closed", value.trim_start_matches('±').to_string()),
                ("agree", agree.to_string()),
            ] {
                writeln!(out, "{k}={v}").unwrap();
            }
        }
    }
    if !agree {
        return Err(Error::Inconsistent(format!(
            "closed form {closed:?} disagrees with direct sum {direct}"
        )));
    }
    Ok(out)
}

fn render_reports(reports: &[VerificationReport], out: &mut String) {
    for r in reports {
        writeln!(out, "{}", r.line()).unwrap();
        for detail in r.mismatch_lines() {
            writeln!(out, "#   {detail}").unwrap();
        }
    }
    writeln!(out, "{}", summary(reports)).unwrap();
}

fn status_of(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Mismatch) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

fn verify_cmd(args: &VerifyArgs) -> Outcome {
    let run = || -> Result<Vec<VerificationReport>, Error> {
        let ctx = field(&args.code.field)?;
        let variant = Variant::from(args.code.variant);
        let code = variant.build(&ctx, args.code.h)?;
        let dist = code.weight_distribution_with_budget(args.code.budget)?;
        verify_case(
            &ComputedCase::new(ctx.degree(), args.code.h, variant, dist),
            args.tables.into(),
        )
    };
    match run() {
        Ok(reports) => {
            let mut out = String::new();
            render_reports(&reports, &mut out);
            Outcome {
                status: status_of(&reports),
                stdout: out,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::error(e),
    }
}

fn sweep_cmd(args: &SweepArgs) -> Outcome {
    if args.m_min > args.m_max {
        return Outcome::error(Error::ParameterMismatch(format!(
            "empty range {}..={}",
            args.m_min, args.m_max
        )));
    }
    let results = sweep(
        args.m_min..=args.m_max,
        SweepOptions {
            tables: args.tables.into(),
            budget: args.budget,
        },
    );
    let mut reports = Vec::new();
    let mut stderr = String::new();
    let mut errors = 0;
    for r in results {
        match r {
            Ok(report) => reports.push(report),
            Err(e) => {
                errors += 1;
                writeln!(stderr, "error: {e}").unwrap();
            }
        }
    }
    let mut out = String::new();
    render_reports(&reports, &mut out);
    if errors > 0 {
        writeln!(out, "# errors={errors}").unwrap();
    }
    let status = match status_of(&reports) {
        EXIT_OK if errors > 0 => EXIT_USAGE,
        s => s,
    };
    Outcome {
        status,
        stdout: out,
        stderr,
    }
}

fn export(args: &ExportArgs) -> Result<String, Error> {
    let ctx = field(&args.code.field)?;
    let code = Variant::from(args.code.variant).build(&ctx, args.code.h)?;
    match &args.output {
        Some(path) => {
            code.export_generator_matrix(BufWriter::new(File::create(path)?))?;
            Ok(String::new())
        }
        None => {
            let mut buf = Vec::new();
            code.export_generator_matrix(&mut buf)?;
            Ok(String::from_utf8(buf).expect("matrix text is ASCII"))
        }
    }
}
