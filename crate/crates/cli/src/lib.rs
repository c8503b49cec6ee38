//! Command-line front end: certification runs, identity checks, composite
//! convergence tables, means and proposition checks, and proposition sweeps.
//!
//! Exit codes: `0` when every requested check holds, `1` when a check finds a
//! violation (details are still printed), `2` on input or domain errors.
//!
//! Every JSON document carries a `command` field and the inputs needed to
//! rerun it; [`replay_args`] turns one back into an argument list.

use std::ffi::OsString;
use std::io::Write;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use quadcert_core::{
    bound_cerone_dragomir, bound_cerone_dragomir_estimated, bound_convex, bound_holder, bound_ostrowski,
    bound_ostrowski_estimated, bound_power_mean, check_proposition, convergence_table, estimate_order,
    identity_residual, integrate, mean_value, means_chain, CdCase, CompositeRule, ConvergenceRow, FunctionTriple,
    HolderPair, HypothesisFlag, Interval, KernelSpec, MeanKind, NormEstimate, PropositionParams, PropositionReport,
    XiPolicy,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Pass threshold for `identity-check`.
pub const DEFAULT_IDENTITY_THRESHOLD: f64 = 1e-9;

pub const COMPOSITE_CSV_HEADER: &str = "n,h,approx,actual_error,remainder_bound,ratio";
pub const PROPS_CSV_HEADER: &str = "prop_id,a,b,p,q,lhs,rhs,holds,slack";

#[derive(Debug, Parser)]
#[command(name = "quadcert", version, about = "Certified two-point quadrature bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format. Defaults to json for certify and identity-check, table otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Tolerance of the reference integrator.
    #[arg(long, global = true, default_value = "1e-12")]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify one rule value with an error bound and check it.
    Certify(CertifyArgs),
    /// Check the kernel error representation at one point.
    IdentityCheck(IdentityArgs),
    /// Convergence table of a composite rule on uniform meshes.
    Composite(CompositeArgs),
    /// Special means of a pair and the chain H <= G <= L <= I <= A.
    Means(MeansArgs),
    /// Check one proposition on special means.
    Props(PropsArgs),
    /// Check propositions over a grid of parameters.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Convex,
    Holder,
    #[value(alias = "power_mean")]
    PowerMean,
    Ostrowski,
    #[value(alias = "cerone_dragomir_inf", alias = "cd-inf")]
    CeroneDragomirInf,
    #[value(alias = "cerone_dragomir_lp", alias = "cd-lp")]
    CeroneDragomirLp,
    #[value(alias = "cerone_dragomir_l1", alias = "cd-l1")]
    CeroneDragomirL1,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Function spec, e.g. `exp`, `power:2.5`, `poly:1,0,-3`.
    #[arg(long)]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    /// Rule parameter in [(a+b)/2, b]; defaults to b.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Upper bound on |f'| for the Ostrowski family; estimated when omitted.
    #[arg(long)]
    pub f1_sup: Option<f64>,
    /// Norm of f'' for the Cerone–Dragomir families; estimated when omitted.
    #[arg(long)]
    pub norm: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct IdentityArgs {
    #[arg(long)]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    /// Largest residual accepted as a pass.
    #[arg(long, default_value_t = DEFAULT_IDENTITY_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Generalized,
    Midpoint,
    #[value(alias = "perturbed_trapezoid")]
    PerturbedTrapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum XiArg {
    Midpoint,
    Right,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct CompositeArgs {
    #[arg(long)]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, value_enum, default_value = "generalized")]
    pub rule: RuleArg,
    /// Comma-separated subinterval counts.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64,128,256")]
    pub n: Vec<usize>,
    /// How intermediate points are chosen for the generalized rule.
    #[arg(long, value_enum, default_value = "midpoint")]
    pub xi_policy: XiArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct MeansArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Also report the p-logarithmic mean.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PropsArgs {
    #[arg(long)]
    pub prop: u8,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Hölder exponent for proposition 4 when it differs from p.
    #[arg(long)]
    pub p_holder: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    pub prop: Vec<u8>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<f64>,
    /// Right endpoints; mutually exclusive with --delta.
    #[arg(long, value_delimiter = ',', conflicts_with = "delta")]
    pub b: Vec<f64>,
    /// Interval lengths, b = a + delta.
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Certify(args) => certify(args, cli, out),
        Command::IdentityCheck(args) => identity_check(args, cli, out),
        Command::Composite(args) => composite(args, cli, out),
        Command::Means(args) => means(args, cli, out),
        Command::Props(args) => props(args, cli, out),
        Command::Sweep(args) => sweep(args, cli, out, err),
    };
    match result {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Violation) => EXIT_VIOLATION,
        Ok(Status::Errors) => EXIT_INPUT,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}

enum Status {
    Ok,
    Violation,
    /// Some sweep points had invalid inputs; the rest still ran.
    Errors,
}

impl Status {
    fn from_holds(holds: bool) -> Self {
        if holds {
            Status::Ok
        } else {
            Status::Violation
        }
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

/// 17 significant digits, `.` as decimal point.
fn csv_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_opt(v: Option<f64>) -> String {
    v.map(csv_num).unwrap_or_default()
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_function(spec: &str) -> Result<FunctionTriple> {
    spec.parse::<FunctionTriple>()
        .with_context(|| format!("invalid function `{spec}`"))
}

fn holder_pair(p: Option<f64>, q: Option<f64>) -> Result<HolderPair> {
    Ok(match (p, q) {
        (Some(p), Some(q)) => HolderPair::new(p, q)?,
        (Some(p), None) => HolderPair::from_p(p)?,
        (None, Some(q)) => HolderPair::from_q(q)?,
        (None, None) => bail!("this family needs --p or --q"),
    })
}

// ---------------------------------------------------------------- certify

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FamilyParams {
    pub p: Option<f64>,
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1_sup: Option<f64>,
    /// Norm of f'' supplied on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub command: String,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub family: String,
    pub params: FamilyParams,
    pub rule_value_total: f64,
    pub bound_total: f64,
    pub actual_error_total: f64,
    pub holds: bool,
    pub hypothesis_flags: Vec<HypothesisFlag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormEstimate>,
    pub tol: f64,
}

fn certify(args: &CertifyArgs, cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let ft = parse_function(&args.function)?;
    let iv = Interval::new(args.a, args.b)?;
    let x = args.x.unwrap_or(iv.b());
    let mut params = FamilyParams::default();

    let cd_case = |args: &CertifyArgs, params: &mut FamilyParams| -> Result<CdCase> {
        if x != iv.b() {
            bail!("Cerone–Dragomir bounds apply to the perturbed trapezoid rule only (x = b)");
        }
        Ok(match args.family {
            FamilyArg::CeroneDragomirInf => CdCase::Inf,
            FamilyArg::CeroneDragomirL1 => CdCase::L1,
            _ => {
                let pair = holder_pair(args.p, args.q)?;
                params.p = Some(pair.p());
                params.q = Some(pair.q());
                CdCase::lp(pair)
            }
        })
    };

    let cert = match args.family {
        FamilyArg::Convex => bound_convex(&ft, &iv, x)?,
        FamilyArg::Holder => {
            let pair = holder_pair(args.p, args.q)?;
            params.p = Some(pair.p());
            params.q = Some(pair.q());
            bound_holder(&ft, &iv, x, pair)?
        }
        FamilyArg::PowerMean => {
            let q = args.q.ok_or_else(|| anyhow!("power-mean family needs --q"))?;
            params.q = Some(q);
            bound_power_mean(&ft, &iv, x, q)?
        }
        FamilyArg::Ostrowski => match args.f1_sup {
            Some(s) => {
                params.f1_sup = Some(s);
                bound_ostrowski(&ft, &iv, x, s)?
            }
            None => bound_ostrowski_estimated(&ft, &iv, x)?,
        },
        FamilyArg::CeroneDragomirInf | FamilyArg::CeroneDragomirLp | FamilyArg::CeroneDragomirL1 => {
            let case = cd_case(args, &mut params)?;
            match args.norm {
                Some(n) => {
                    params.norm = Some(n);
                    bound_cerone_dragomir(&ft, &iv, case, n)?
                }
                None => bound_cerone_dragomir_estimated(&ft, &iv, case)?,
            }
        }
    };
    let check = cert.verify_with_tol(&ft, cli.tol)?;

    let report = CertificateReport {
        command: "certify".into(),
        function: ft.to_string(),
        a: iv.a(),
        b: iv.b(),
        x,
        family: cert.family.name().into(),
        params,
        rule_value_total: cert.rule.value_total,
        bound_total: cert.bound_total,
        actual_error_total: check.actual_error_total,
        holds: check.holds,
        hypothesis_flags: cert.hypothesis_flags.clone(),
        norm: cert.norm,
        tol: cli.tol,
    };
    match format_or(cli, Format::Json) {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            writeln!(out, "function,a,b,x,family,p,q,rule_value_total,bound_total,actual_error_total,holds")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.function,
                csv_num(report.a),
                csv_num(report.b),
                csv_num(report.x),
                report.family,
                csv_opt(params.p),
                csv_opt(params.q),
                csv_num(report.rule_value_total),
                csv_num(report.bound_total),
                csv_num(report.actual_error_total),
                report.holds
            )?;
        }
        Format::Table => {
            writeln!(out, "function            {}", report.function)?;
            writeln!(out, "interval            [{}, {}]", report.a, report.b)?;
            writeln!(out, "x                   {}", report.x)?;
            writeln!(out, "family              {}", report.family)?;
            if let Some(p) = params.p {
                writeln!(out, "p                   {p}")?;
            }
            if let Some(q) = params.q {
                writeln!(out, "q                   {q}")?;
            }
            writeln!(out, "rule value (total)  {:.12e}", report.rule_value_total)?;
            writeln!(out, "bound (total)       {:.12e}", report.bound_total)?;
            writeln!(out, "actual error        {:.12e}", report.actual_error_total)?;
            writeln!(out, "holds               {}", report.holds)?;
            for h in &report.hypothesis_flags {
                writeln!(out, "hypothesis {:<24} {}", h.name, h.satisfied)?;
            }
        }
    }
    Ok(Status::from_holds(report.holds))
}

// ---------------------------------------------------------------- identity-check

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub command: String,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub breakpoints: [f64; 2],
    pub residual: f64,
    pub threshold: f64,
    pub holds: bool,
    pub tol: f64,
}

fn identity_check(args: &IdentityArgs, cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let ft = parse_function(&args.function)?;
    let iv = Interval::new(args.a, args.b)?;
    let ks = KernelSpec::new(iv, args.x)?;
    let residual = identity_residual(&ft, &ks, cli.tol)?;
    let (t1, t2) = ks.breakpoints();
    let report = IdentityReport {
        command: "identity-check".into(),
        function: ft.to_string(),
        a: iv.a(),
        b: iv.b(),
        x: args.x,
        breakpoints: [t1, t2],
        residual,
        threshold: args.threshold,
        holds: residual.abs() <= args.threshold,
        tol: cli.tol,
    };
    match format_or(cli, Format::Json) {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            writeln!(out, "function,a,b,x,residual,holds")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                report.function,
                csv_num(report.a),
                csv_num(report.b),
                csv_num(report.x),
                csv_num(report.residual),
                report.holds
            )?;
        }
        Format::Table => {
            writeln!(out, "function     {}", report.function)?;
            writeln!(out, "interval     [{}, {}]", report.a, report.b)?;
            writeln!(out, "x            {}", report.x)?;
            writeln!(out, "breakpoints  {} {}", t1, t2)?;
            writeln!(out, "residual     {:.6e}", report.residual)?;
            writeln!(out, "holds        {}", report.holds)?;
        }
    }
    Ok(Status::from_holds(report.holds))
}

// ---------------------------------------------------------------- composite

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeReport {
    pub command: String,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub rule: String,
    pub xi_policy: String,
    pub seed: u64,
    pub exact: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted order of the actual errors, when at least two are nonzero.
    pub order_error: Option<f64>,
    pub order_bound: Option<f64>,
    pub holds: bool,
    pub tol: f64,
}

fn rule_name(rule: RuleArg) -> &'static str {
    match rule {
        RuleArg::Generalized => "generalized",
        RuleArg::Midpoint => "midpoint",
        RuleArg::PerturbedTrapezoid => "perturbed_trapezoid",
    }
}

fn xi_name(xi: XiArg) -> &'static str {
    match xi {
        XiArg::Midpoint => "midpoint",
        XiArg::Right => "right",
        XiArg::Random => "random",
    }
}

fn fitted_order(rows: &[ConvergenceRow], pick: impl Fn(&ConvergenceRow) -> f64) -> Option<f64> {
    let (hs, es): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| pick(r) > 0.0)
        .map(|r| (r.h, pick(r)))
        .unzip();
    estimate_order(&hs, &es).ok()
}

fn composite(args: &CompositeArgs, cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let ft = parse_function(&args.function)?;
    let iv = Interval::new(args.a, args.b)?;
    ft.check_interval(&iv)?;
    if args.n.is_empty() {
        bail!("--n needs at least one subinterval count");
    }
    let rule = match args.rule {
        RuleArg::Generalized => CompositeRule::Generalized(match args.xi_policy {
            XiArg::Midpoint => XiPolicy::Midpoint,
            XiArg::Right => XiPolicy::Right,
            XiArg::Random => XiPolicy::Random { seed: args.seed },
        }),
        RuleArg::Midpoint => CompositeRule::Midpoint,
        RuleArg::PerturbedTrapezoid => CompositeRule::PerturbedTrapezoid,
    };
    let exact = integrate(|u| ft.f(u).unwrap_or(f64::NAN), iv.a(), iv.b(), cli.tol)?.value;
    let rows = convergence_table(&ft, &iv, rule, &args.n, exact)?;
    let holds = rows.iter().all(ConvergenceRow::bound_holds);
    let report = CompositeReport {
        command: "composite".into(),
        function: ft.to_string(),
        a: iv.a(),
        b: iv.b(),
        rule: rule_name(args.rule).into(),
        xi_policy: xi_name(args.xi_policy).into(),
        seed: args.seed,
        exact,
        order_error: fitted_order(&rows, |r| r.actual_error),
        order_bound: fitted_order(&rows, |r| r.remainder_bound),
        rows,
        holds,
        tol: cli.tol,
    };
    match format_or(cli, Format::Table) {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            writeln!(out, "{COMPOSITE_CSV_HEADER}")?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.n,
                    csv_num(r.h),
                    csv_num(r.approx),
                    csv_num(r.actual_error),
                    csv_num(r.remainder_bound),
                    csv_num(r.ratio)
                )?;
            }
        }
        Format::Table => {
            writeln!(out, "{} rule for {} on [{}, {}]", report.rule, report.function, report.a, report.b)?;
            writeln!(
                out,
                "{:>6}  {:>12}  {:>20}  {:>12}  {:>12}  {:>8}",
                "n", "h", "approx", "error", "bound", "ratio"
            )?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{:>6}  {:>12.4e}  {:>20.14}  {:>12.4e}  {:>12.4e}  {:>8.4}",
                    r.n, r.h, r.approx, r.actual_error, r.remainder_bound, r.ratio
                )?;
            }
            if let Some(o) = report.order_error {
                writeln!(out, "order (error)  {o:.4}")?;
            }
            if let Some(o) = report.order_bound {
                writeln!(out, "order (bound)  {o:.4}")?;
            }
            writeln!(out, "holds          {}", report.holds)?;
        }
    }
    Ok(Status::from_holds(holds))
}

// ---------------------------------------------------------------- means

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeansReport {
    pub command: String,
    pub a: f64,
    pub b: f64,
    pub p: Option<f64>,
    pub harmonic: f64,
    pub geometric: f64,
    pub logarithmic: f64,
    pub identric: f64,
    pub arithmetic: f64,
    pub p_logarithmic: Option<f64>,
    pub chain_ordered: bool,
}

fn means(args: &MeansArgs, cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let chain = means_chain(args.a, args.b)?;
    let p_logarithmic = match args.p {
        Some(p) => Some(mean_value(MeanKind::PLogarithmic { p }, args.a, args.b)?),
        None => None,
    };
    let report = MeansReport {
        command: "means".into(),
        a: args.a,
        b: args.b,
        p: args.p,
        harmonic: chain.harmonic,
        geometric: chain.geometric,
        logarithmic: chain.logarithmic,
        identric: chain.identric,
        arithmetic: chain.arithmetic,
        p_logarithmic,
        chain_ordered: chain.is_ordered(),
    };
    match format_or(cli, Format::Table) {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            writeln!(out, "a,b,harmonic,geometric,logarithmic,identric,arithmetic,p,p_logarithmic,chain_ordered")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                csv_num(report.a),
                csv_num(report.b),
                csv_num(report.harmonic),
                csv_num(report.geometric),
                csv_num(report.logarithmic),
                csv_num(report.identric),
                csv_num(report.arithmetic),
                csv_opt(report.p),
                csv_opt(report.p_logarithmic),
                report.chain_ordered
            )?;
        }
        Format::Table => {
            writeln!(out, "H  {:.15}", report.harmonic)?;
            writeln!(out, "G  {:.15}", report.geometric)?;
            writeln!(out, "L  {:.15}", report.logarithmic)?;
            writeln!(out, "I  {:.15}", report.identric)?;
            writeln!(out, "A  {:.15}", report.arithmetic)?;
            if let (Some(p), Some(v)) = (report.p, report.p_logarithmic) {
                writeln!(out, "L_{p}  {v:.15}")?;
            }
            writeln!(out, "H <= G <= L <= I <= A  {}", report.chain_ordered)?;
        }
    }
    Ok(Status::from_holds(report.chain_ordered))
}

// ---------------------------------------------------------------- props

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropsReport {
    pub command: String,
    pub inputs: PropositionParams,
    pub prop_id: u8,
    pub report: PropositionReport,
}

fn props_csv_row(r: &PropositionReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.prop_id,
        csv_num(r.params.a),
        csv_num(r.params.b),
        csv_opt(r.params.p),
        csv_opt(r.params.q),
        csv_num(r.lhs),
        csv_num(r.rhs),
        r.holds,
        csv_num(r.slack)
    )
}

fn props_table_row(r: &PropositionReport) -> String {
    let opt = |v: Option<f64>| v.map(|v| format!("{v}")).unwrap_or_else(|| "-".into());
    format!(
        "{:>4}  {:>8}  {:>8}  {:>8}  {:>8}  {:>12.6e}  {:>12.6e}  {:>5}  {:>13.6e}",
        r.prop_id,
        r.params.a,
        r.params.b,
        opt(r.params.p),
        opt(r.params.q),
        r.lhs,
        r.rhs,
        r.holds,
        r.slack
    )
}

fn props_table_header() -> String {
    format!(
        "{:>4}  {:>8}  {:>8}  {:>8}  {:>8}  {:>12}  {:>12}  {:>5}  {:>13}",
        "prop", "a", "b", "p", "q", "lhs", "rhs", "holds", "slack"
    )
}

fn props(args: &PropsArgs, cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let inputs = PropositionParams {
        a: args.a,
        b: args.b,
        p: args.p,
        q: args.q,
        p_holder: args.p_holder,
    };
    let report = check_proposition(args.prop, inputs)?;
    match format_or(cli, Format::Table) {
        Format::Json => write_json(
            out,
            &PropsReport {
                command: "props".into(),
                inputs,
                prop_id: args.prop,
                report: report.clone(),
            },
        )?,
        Format::Csv => {
            writeln!(out, "{PROPS_CSV_HEADER}")?;
            writeln!(out, "{}", props_csv_row(&report))?;
        }
        Format::Table => {
            writeln!(out, "proposition  {}", report.prop_id)?;
            writeln!(out, "lhs          {:.6}", report.lhs)?;
            writeln!(out, "rhs          {:.6}", report.rhs)?;
            writeln!(out, "holds        {}", report.holds)?;
            writeln!(out, "slack        {:.6e}", report.slack)?;
            if !report.hypothesis_note.is_empty() {
                writeln!(out, "note         {}", report.hypothesis_note)?;
            }
            if let Some(c) = &report.corrected {
                writeln!(
                    out,
                    "perturbed    lhs {:.6}  rhs {:.6}  holds {}",
                    c.lhs, c.rhs, c.holds
                )?;
            }
        }
    }
    Ok(Status::from_holds(report.holds))
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub inputs: PropositionParams,
    pub prop_id: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PropositionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepSummary {
    pub points: usize,
    pub holds: usize,
    pub violations: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub prop: Vec<u8>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub delta: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub points: Vec<SweepPoint>,
    pub summary: SweepSummary,
    /// Violations per proposition id.
    pub violations_by_prop: Vec<(u8, usize)>,
}

fn axis(values: &[f64], used: bool) -> Vec<Option<f64>> {
    if used && !values.is_empty() {
        values.iter().copied().map(Some).collect()
    } else {
        vec![None]
    }
}

/// Grid points in config order: prop, a, b, p, q. Axes a proposition does
/// not use collapse to a single unset value.
fn sweep_grid(args: &SweepArgs) -> Vec<(u8, PropositionParams)> {
    let mut grid = Vec::new();
    for &prop in &args.prop {
        // Prop 3 takes its Hölder pair from q when q values are given.
        let (uses_p, uses_q) = match prop {
            1 => (true, false),
            3 => (args.q.is_empty(), true),
            4 => (true, true),
            5 | 6 => (false, true),
            _ => (false, false),
        };
        for &a in &args.a {
            let bs: Vec<f64> = if args.delta.is_empty() {
                args.b.clone()
            } else {
                args.delta.iter().map(|d| a + d).collect()
            };
            for &b in &bs {
                for p in axis(&args.p, uses_p) {
                    for q in axis(&args.q, uses_q) {
                        grid.push((prop, PropositionParams { a, b, p, q, p_holder: None }));
                    }
                }
            }
        }
    }
    grid
}

fn sweep(args: &SweepArgs, cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    if args.b.is_empty() && args.delta.is_empty() {
        bail!("sweep needs --b or --delta");
    }
    let points: Vec<SweepPoint> = sweep_grid(args)
        .into_par_iter()
        .map(|(prop_id, inputs)| match check_proposition(prop_id, inputs) {
            Ok(r) => SweepPoint {
                inputs,
                prop_id,
                report: Some(r),
                error: None,
            },
            Err(e) => SweepPoint {
                inputs,
                prop_id,
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let mut summary = SweepSummary {
        points: points.len(),
        ..SweepSummary::default()
    };
    let mut by_prop: Vec<(u8, usize)> = Vec::new();
    for pt in &points {
        match &pt.report {
            Some(r) if r.holds => summary.holds += 1,
            Some(_) => {
                summary.violations += 1;
                match by_prop.iter_mut().find(|(id, _)| *id == pt.prop_id) {
                    Some(entry) => entry.1 += 1,
                    None => by_prop.push((pt.prop_id, 1)),
                }
            }
            None => summary.errors += 1,
        }
    }
    by_prop.sort_unstable();

    let summary_line = format!(
        "points {}  holds {}  violations {}  errors {}",
        summary.points, summary.holds, summary.violations, summary.errors
    );
    match format_or(cli, Format::Table) {
        Format::Json => write_json(
            out,
            &SweepReport {
                command: "sweep".into(),
                prop: args.prop.clone(),
                a: args.a.clone(),
                b: args.b.clone(),
                delta: args.delta.clone(),
                p: args.p.clone(),
                q: args.q.clone(),
                points,
                summary,
                violations_by_prop: by_prop,
            },
        )?,
        Format::Csv => {
            writeln!(out, "{PROPS_CSV_HEADER}")?;
            for pt in &points {
                match (&pt.report, &pt.error) {
                    (Some(r), _) => writeln!(out, "{}", props_csv_row(r))?,
                    (None, Some(e)) => writeln!(err, "prop {} at a = {}, b = {}: {e}", pt.prop_id, pt.inputs.a, pt.inputs.b)?,
                    (None, None) => {}
                }
            }
            writeln!(err, "{summary_line}")?;
        }
        Format::Table => {
            writeln!(out, "{}", props_table_header())?;
            for pt in &points {
                match (&pt.report, &pt.error) {
                    (Some(r), _) => writeln!(out, "{}", props_table_row(r))?,
                    (None, Some(e)) => writeln!(out, "{:>4}  {:>8}  {:>8}  error: {e}", pt.prop_id, pt.inputs.a, pt.inputs.b)?,
                    (None, None) => {}
                }
            }
            writeln!(out, "{summary_line}")?;
            for (id, n) in &by_prop {
                writeln!(out, "prop {id}: {n} violations")?;
            }
        }
    }
    Ok(if summary.errors > 0 {
        Status::Errors
    } else if summary.violations > 0 {
        Status::Violation
    } else {
        Status::Ok
    })
}

// ---------------------------------------------------------------- replay

fn list<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn push_opt(argv: &mut Vec<String>, flag: &str, v: Option<f64>) {
    if let Some(v) = v {
        argv.push(flag.into());
        argv.push(v.to_string());
    }
}

fn push(argv: &mut Vec<String>, flag: &str, v: impl ToString) {
    argv.push(flag.into());
    argv.push(v.to_string());
}

/// Rebuilds the argument list (program name included) that produced a JSON
/// document. Floats print in shortest round-trip form, so the rerun sees the
/// same bits.
pub fn replay_args(json: &str) -> Result<Vec<String>> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    let command = value
        .get("command")
        .and_then(|c| c.as_str())
        .ok_or_else(|| anyhow!("document has no `command` field"))?
        .to_string();
    let mut argv: Vec<String> = vec!["quadcert".into(), command.clone()];
    match command.as_str() {
        "certify" => {
            let r: CertificateReport = serde_json::from_value(value)?;
            push(&mut argv, "--function", &r.function);
            push(&mut argv, "--a", r.a);
            push(&mut argv, "--b", r.b);
            push(&mut argv, "--x", r.x);
            push(&mut argv, "--family", &r.family);
            push_opt(&mut argv, "--p", r.params.p);
            push_opt(&mut argv, "--q", r.params.q);
            push_opt(&mut argv, "--f1-sup", r.params.f1_sup);
            push_opt(&mut argv, "--norm", r.params.norm);
            push(&mut argv, "--tol", r.tol);
        }
        "identity-check" => {
            let r: IdentityReport = serde_json::from_value(value)?;
            push(&mut argv, "--function", &r.function);
            push(&mut argv, "--a", r.a);
            push(&mut argv, "--b", r.b);
            push(&mut argv, "--x", r.x);
            push(&mut argv, "--threshold", r.threshold);
            push(&mut argv, "--tol", r.tol);
        }
        "composite" => {
            let r: CompositeReport = serde_json::from_value(value)?;
            push(&mut argv, "--function", &r.function);
            push(&mut argv, "--a", r.a);
            push(&mut argv, "--b", r.b);
            push(&mut argv, "--rule", &r.rule);
            let ns: Vec<usize> = r.rows.iter().map(|row| row.n).collect();
            push(&mut argv, "--n", list(&ns));
            push(&mut argv, "--xi-policy", &r.xi_policy);
            push(&mut argv, "--seed", r.seed);
            push(&mut argv, "--tol", r.tol);
        }
        "means" => {
            let r: MeansReport = serde_json::from_value(value)?;
            push(&mut argv, "--a", r.a);
            push(&mut argv, "--b", r.b);
            push_opt(&mut argv, "--p", r.p);
        }
        "props" => {
            let r: PropsReport = serde_json::from_value(value)?;
            push(&mut argv, "--prop", r.prop_id);
            push(&mut argv, "--a", r.inputs.a);
            push(&mut argv, "--b", r.inputs.b);
            push_opt(&mut argv, "--p", r.inputs.p);
            push_opt(&mut argv, "--q", r.inputs.q);
            push_opt(&mut argv, "--p-holder", r.inputs.p_holder);
        }
        "sweep" => {
            let r: SweepReport = serde_json::from_value(value)?;
            push(&mut argv, "--prop", list(&r.prop));
            push(&mut argv, "--a", list(&r.a));
            for (flag, vals) in [("--b", &r.b), ("--delta", &r.delta), ("--p", &r.p), ("--q", &r.q)] {
                if !vals.is_empty() {
                    push(&mut argv, flag, list(vals));
                }
            }
        }
        other => bail!("unknown command `{other}`"),
    }
    argv.push("--format".into());
    argv.push("json".into());
    Ok(argv)
}
