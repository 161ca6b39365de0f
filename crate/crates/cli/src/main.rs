use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use walshlog::acceptance;
use walshlog::fmt::format_rational;
use walshlog::grid::{GridFunction, Scalar};
use walshlog::kernels::{self, decompose, default_resolution, h1_closed_form_check, paley_shift_mismatch, KernelKind, KernelSpec};
use walshlog::means::{error_curve, lebesgue_constant_curve, Norm, TestFunction};
use walshlog::sweep::{theorem1_sweep, SweepConfig};
use walshlog::variation::{mem_sum_in, vl_in, vs, Classification, IndexSequence};
use walshlog::{par, DyadicIndex, Parallelism, Rational};

mod output;

use output::{emit, float, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "walshlog", version, about = "Walsh-Fourier logarithmic means: identity checks, sweeps and convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// smallest index of a range
    #[arg(long, global = true)]
    nmin: Option<u64>,
    /// largest index of a range (inclusive)
    #[arg(long, global = true)]
    nmax: Option<u64>,
    /// index sequence: pow2, pow2minus1, konyagin, alternating
    #[arg(long, global = true)]
    seq: Option<String>,
    #[arg(long, global = true)]
    amin: Option<u32>,
    #[arg(long, global = true)]
    amax: Option<u32>,
    /// test function: constant, identity, walsh_poly, indicator, spike[:m], log_modulus
    #[arg(long = "fn", global = true)]
    function: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = NormArg::Sup)]
    norm: NormArg,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Double)]
    mode: Mode,
    /// grid resolution override
    #[arg(long, global = true)]
    res: Option<u32>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// worker threads (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// add a wall_time column where supported (makes output run-dependent)
    #[arg(long, global = true)]
    timing: bool,
    /// corrupt the total kernel of this index before checking
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Sup,
    L1,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Sup => Norm::Sup,
            NormArg::L1 => Norm::L1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Dirichlet,
    Fejer,
    NorlundLog,
    RieszLog,
}

impl From<KernelArg> for KernelKind {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Dirichlet => KernelKind::Dirichlet,
            KernelArg::Fejer => KernelKind::Fejer,
            KernelArg::NorlundLog => KernelKind::NorlundLog,
            KernelArg::RieszLog => KernelKind::RieszLog,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact checks of the kernel decomposition, the H1 rewritings and the Paley shift identity
    VerifyIdentities,
    /// ||F_n||_1 against 1 + V_L(n) with the norms of the decomposition parts
    Theorem1Sweep {
        /// skip the sampled index families
        #[arg(long)]
        no_families: bool,
        /// largest family member
        #[arg(long, default_value_t = 4096)]
        family_max: u64,
    },
    /// V_S, V_L and the (mem) sum along an index sequence
    Variation,
    /// ||L_{m_A} f - f|| along an index sequence
    Converge,
    /// Lebesgue constants ||F_{m_A}||_1 along an index sequence
    Lebesgue,
    /// Values of one kernel on its grid
    KernelDump {
        #[arg(long, value_enum, default_value_t = KernelArg::NorlundLog)]
        kernel: KernelArg,
        #[arg(long)]
        n: u64,
    },
    /// Run the acceptance criteria
    Acceptance,
}

/// A finished command: its table, extra manifest fields, and whether every
/// verification it performed passed.
struct Report {
    table: Table,
    summary: Value,
    passed: bool,
}

impl Report {
    fn ok(table: Table, summary: Value) -> Self {
        Self {
            table,
            summary,
            passed: true,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::VerifyIdentities => "verify-identities",
        Command::Theorem1Sweep { .. } => "theorem1-sweep",
        Command::Variation => "variation",
        Command::Converge => "converge",
        Command::Lebesgue => "lebesgue",
        Command::KernelDump { .. } => "kernel-dump",
        Command::Acceptance => "acceptance",
    }
}

fn config_echo(cli: &Cli) -> Value {
    let c = &cli.common;
    let mut cfg = json!({
        "command": command_name(&cli.command),
        "nmin": c.nmin,
        "nmax": c.nmax,
        "seq": c.seq,
        "amin": c.amin,
        "amax": c.amax,
        "fn": c.function,
        "norm": format!("{:?}", c.norm).to_lowercase(),
        "mode": format!("{:?}", c.mode).to_lowercase(),
        "res": c.res,
        "format": format!("{:?}", c.format).to_lowercase(),
        "jobs": c.jobs,
        "timing": c.timing,
    });
    match &cli.command {
        Command::Theorem1Sweep { no_families, family_max } => {
            cfg["families"] = json!(!no_families);
            cfg["family_max"] = json!(family_max);
        }
        Command::KernelDump { kernel, n } => {
            cfg["kernel"] = json!(format!("{kernel:?}").to_lowercase());
            cfg["n"] = json!(n);
        }
        _ => {}
    }
    cfg
}

fn sequence(c: &Common, default: &str) -> Result<IndexSequence> {
    Ok(IndexSequence::named(c.seq.as_deref().unwrap_or(default))?)
}

fn exact_value(r: &Rational) -> String {
    format_rational(r)
}

fn verify_identities(c: &Common, par: Parallelism) -> Result<Report> {
    let nmin = c.nmin.unwrap_or(4);
    let nmax = c.nmax.unwrap_or(256);
    if nmin < 4 {
        bail!(walshlog::Error::IndexTooSmall {
            what: "kernel decomposition",
            n: nmin as u128,
            min: 4,
        });
    }
    if nmax < nmin {
        bail!(walshlog::Error::Range(format!("empty range {nmin}..{nmax}")));
    }
    let exact = c.mode == Mode::Exact;
    let fault = c.inject_fault;
    let mut table = Table::new(&["check", "n", "j", "k", "status", "cell"]);

    // decomposition and H1 rewritings, stopping at the first failing index
    let indices: Vec<u64> = (nmin..=nmax).collect();
    let first_bad = par::find_first(par, indices, |n| match check_index(n, exact, fault == Some(n)) {
        Ok(None) => None,
        Ok(Some(failure)) => Some((n, failure)),
        Err(e) => Some((n, Failure::Error(e.to_string()))),
    });
    let last_good = first_bad.as_ref().map_or(nmax, |(n, _)| n - 1);
    for n in nmin..=last_good {
        table.push(vec!["decomposition".into(), n.to_string(), String::new(), String::new(), "pass".into(), String::new()]);
    }
    let mut failures = Vec::new();
    if let Some((n, failure)) = &first_bad {
        let (check, cell) = match failure {
            Failure::Decomposition(cell) => ("decomposition", cell.to_string()),
            Failure::H1 => ("h1_closed_form", String::new()),
            Failure::Error(e) => ("error", e.clone()),
        };
        table.push(vec![check.into(), n.to_string(), String::new(), String::new(), "FAIL".into(), cell.clone()]);
        failures.push(json!({"check": check, "n": n, "cell": cell}));
        eprintln!("verify-identities: {check} fails at n = {n}{}", if cell.is_empty() { String::new() } else { format!(", cell {cell}") });
    }

    // Paley shift identity for every level the range reaches
    if first_bad.is_none() {
        let top = 63 - nmax.leading_zeros();
        for j in 1..=top.min(10) {
            for k in 1..1u64 << j {
                match paley_shift_mismatch(j, k, j + 1)? {
                    None => table.push(vec!["paley".into(), String::new(), j.to_string(), k.to_string(), "pass".into(), String::new()]),
                    Some(cell) => {
                        table.push(vec!["paley".into(), String::new(), j.to_string(), k.to_string(), "FAIL".into(), cell.to_string()]);
                        failures.push(json!({"check": "paley", "j": j, "k": k, "cell": cell}));
                        eprintln!("verify-identities: Paley identity fails at j = {j}, k = {k}, cell {cell}");
                    }
                }
            }
        }
    }
    let passed = failures.is_empty();
    if passed {
        eprintln!("verify-identities: all checks pass for {nmin}..={nmax}");
    }
    Ok(Report {
        table,
        summary: json!({"passed": passed, "failures": failures}),
        passed,
    })
}

enum Failure {
    Decomposition(usize),
    H1,
    Error(String),
}

fn check_index(n: u64, exact: bool, corrupt: bool) -> walshlog::Result<Option<Failure>> {
    fn run<S: Scalar>(n: u64, corrupt: bool, tol: Option<f64>) -> walshlog::Result<Option<usize>> {
        let mut d = decompose::<S>(n)?;
        if corrupt {
            let last = d.total.len() - 1;
            let bump = GridFunction::from_fn(d.resolution(), |c| if c == last { S::one() } else { S::zero() })?;
            d.total = d.total.add(&bump)?;
        }
        Ok(d.identity_mismatch(tol))
    }
    let mismatch = if exact {
        run::<Rational>(n, corrupt, None)?
    } else {
        run::<f64>(n, corrupt, Some(1e-9))?
    };
    if let Some(cell) = mismatch {
        return Ok(Some(Failure::Decomposition(cell)));
    }
    if exact && !h1_closed_form_check(n)? {
        return Ok(Some(Failure::H1));
    }
    Ok(None)
}

fn theorem1(c: &Common, par: Parallelism, families: bool, family_max: u64) -> Result<Report> {
    if c.mode == Mode::Exact {
        bail!(walshlog::Error::ExactUnsupported("theorem1-sweep"));
    }
    let cfg = SweepConfig {
        nmin: c.nmin.unwrap_or(4),
        nmax: c.nmax.unwrap_or(512),
        families,
        family_max,
        parts: true,
        parallelism: par,
    };
    let out = theorem1_sweep(&cfg)?;
    let mut headers = vec!["n", "order", "VS", "VL", "F_l1", "ratio", "H1_l1", "H21_l1", "H22_l1", "H23_l1", "H3_l1", "family"];
    if c.timing {
        headers.push("wall_time");
    }
    let mut table = Table::new(&headers);
    for r in &out.records {
        let part = |f: fn(&walshlog::sweep::PartNorms) -> f64| r.parts.as_ref().map(|p| float(f(p))).unwrap_or_default();
        let mut row = vec![
            r.n.to_string(),
            r.order.to_string(),
            r.vs.to_string(),
            float(r.vl),
            float(r.f_l1),
            float(r.ratio),
            part(|p| p.h1),
            part(|p| p.h21),
            part(|p| p.h22),
            part(|p| p.h23),
            part(|p| p.h3),
            r.family.name().to_string(),
        ];
        if c.timing {
            row.push(float(r.wall_seconds));
        }
        table.push(row);
    }
    let b = out.band;
    eprintln!(
        "theorem1-sweep: {} indices, band [{}, {}] (at n = {}, {}), C/c = {}",
        out.records.len(),
        float(b.lower),
        float(b.upper),
        b.lower_at,
        b.upper_at,
        float(b.width())
    );
    Ok(Report::ok(
        table,
        json!({"band": b, "band_width": b.width(), "part_constants": out.part_constants}),
    ))
}

fn variation(c: &Common) -> Result<Report> {
    let seq = sequence(c, "pow2minus1")?;
    let amax = c.amax.unwrap_or(10);
    if amax == 0 {
        bail!(walshlog::Error::Range("--amax must be at least 1".into()));
    }
    let mut table = Table::new(&["A", "n", "bits", "VS", "VL", "mem_sum", "runmax_VL", "runmax_mem"]);
    let terms: Vec<(u32, DyadicIndex)> = seq.terms(c.amin.unwrap_or(1), amax)?.into_iter().filter(|(_, n)| n.value() >= 2).collect();
    let mut vls = Vec::new();
    let mut mems = Vec::new();
    match c.mode {
        Mode::Double => {
            let (mut rv, mut rm) = (0.0f64, 0.0f64);
            for (a, n) in terms {
                let v = vl_in::<f64>(n)?;
                let m = mem_sum_in::<f64>(n)?;
                rv = rv.max(v);
                rm = rm.max(m);
                vls.push(v);
                mems.push(m);
                table.push(vec![a.to_string(), n.to_string(), n.to_binary_string(), vs(n).to_string(), float(v), float(m), float(rv), float(rm)]);
            }
        }
        Mode::Exact => {
            let (mut rv, mut rm) = (Rational::from_i64(0), Rational::from_i64(0));
            for (a, n) in terms {
                let v = vl_in::<Rational>(n)?;
                let m = mem_sum_in::<Rational>(n)?;
                if v > rv {
                    rv = v.clone();
                }
                if m > rm {
                    rm = m.clone();
                }
                vls.push(v.to_f64());
                mems.push(m.to_f64());
                table.push(vec![
                    a.to_string(),
                    n.to_string(),
                    n.to_binary_string(),
                    vs(n).to_string(),
                    exact_value(&v),
                    exact_value(&m),
                    exact_value(&rv),
                    exact_value(&rm),
                ]);
            }
        }
    }
    let (vl_class, mem_class) = (Classification::of(&vls), Classification::of(&mems));
    eprintln!("variation: {} rows; V_L {}, mem_sum {}", table.len(), vl_class.name(), mem_class.name());
    Ok(Report::ok(table, json!({"vl_class": vl_class.name(), "mem_class": mem_class.name()})))
}

fn converge(c: &Common, par: Parallelism) -> Result<Report> {
    if c.mode == Mode::Exact {
        bail!(walshlog::Error::ExactUnsupported("converge"));
    }
    let seq = sequence(c, "pow2")?;
    let f: TestFunction = c.function.as_deref().unwrap_or("identity").parse()?;
    let rows = error_curve(seq, f, c.amin.unwrap_or(1), c.amax.unwrap_or(12), par)?;
    let mut table = Table::new(&["A", "n", "error_sup", "error_L1"]);
    for r in &rows {
        table.push(vec![r.a.to_string(), r.n.to_string(), float(r.error_sup), float(r.error_l1)]);
    }
    let norm = Norm::from(c.norm);
    let decreasing = rows.windows(2).all(|w| w[1].error(norm) < w[0].error(norm));
    eprintln!("converge: {} rows; {norm:?} error strictly decreasing: {decreasing}", rows.len());
    Ok(Report::ok(table, json!({"function": f.name(), "decreasing": decreasing})))
}

fn lebesgue(c: &Common, par: Parallelism) -> Result<Report> {
    if c.mode == Mode::Exact {
        bail!(walshlog::Error::ExactUnsupported("lebesgue"));
    }
    let seq = sequence(c, "pow2minus1")?;
    let rows = lebesgue_constant_curve(seq, c.amin.unwrap_or(1), c.amax.unwrap_or(12), par)?;
    let mut table = Table::new(&["A", "n", "F_l1", "VL", "ratio"]);
    for r in &rows {
        table.push(vec![r.a.to_string(), r.n.to_string(), float(r.f_l1), float(r.vl), float(r.ratio)]);
    }
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(r.f_l1), h.max(r.f_l1)));
    eprintln!("lebesgue: {} rows; ||F||_1 in [{}, {}]", rows.len(), float(lo), float(hi));
    Ok(Report::ok(table, json!({"f_l1_min": lo, "f_l1_max": hi})))
}

fn kernel_dump(c: &Common, kind: KernelArg, n: u64) -> Result<Report> {
    let res = c.res.unwrap_or_else(|| default_resolution(n));
    fn build<S: Scalar>(kind: KernelKind, n: u64, res: u32) -> walshlog::Result<GridFunction<S>> {
        KernelSpec::<S>::new(kind, n).with_resolution(res).build()
    }
    let kind = KernelKind::from(kind);
    let table = match c.mode {
        Mode::Exact => {
            let g = build::<Rational>(kind, n, res)?;
            let mut t = Table::new(&["cell", "value_num", "value_den"]);
            for (cell, v) in g.values().iter().enumerate() {
                t.push(vec![cell.to_string(), v.numer().to_string(), v.denom().to_string()]);
            }
            t
        }
        Mode::Double => {
            let g = build::<f64>(kind, n, res)?;
            let mut t = Table::new(&["cell", "value"]);
            for (cell, v) in g.values().iter().enumerate() {
                t.push(vec![cell.to_string(), float(*v)]);
            }
            t
        }
    };
    let l1 = kernels::KernelSpec::<f64>::new(kind, n).with_resolution(res).build()?.l1_norm();
    eprintln!("kernel-dump: {kind:?} n = {n} at resolution {res}, L1 norm {}", float(l1));
    Ok(Report::ok(table, json!({"resolution": res, "l1_norm": l1})))
}

fn run_acceptance(par: Parallelism) -> Result<Report> {
    let mut table = Table::new(&["criterion", "status", "check", "check_status", "detail"]);
    let mut failed = Vec::new();
    for id in 1..=10 {
        let outcome = acceptance::run(id, par)?;
        println!("{outcome}");
        let status = if outcome.passed() { "PASS" } else { "FAIL" };
        if !outcome.passed() {
            failed.push(id);
        }
        for ch in &outcome.checks {
            let cs = if ch.passed { "pass" } else { "FAIL" };
            table.push(vec![id.to_string(), status.into(), ch.name.clone(), cs.into(), ch.detail.clone()]);
        }
    }
    let passed = failed.is_empty();
    Ok(Report {
        table,
        summary: json!({"failed_criteria": failed}),
        passed,
    })
}

fn dispatch(cli: &Cli, par: Parallelism) -> Result<Report> {
    let c = &cli.common;
    match &cli.command {
        Command::VerifyIdentities => verify_identities(c, par),
        Command::Theorem1Sweep { no_families, family_max } => theorem1(c, par, !no_families, *family_max),
        Command::Variation => variation(c),
        Command::Converge => converge(c, par),
        Command::Lebesgue => lebesgue(c, par),
        Command::KernelDump { kernel, n } => kernel_dump(c, *kernel, *n),
        Command::Acceptance => run_acceptance(par),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let jobs = cli.common.jobs;
    if jobs == Some(0) {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let result = match jobs {
        Some(k) => par::with_jobs(k, || dispatch(&cli, Parallelism::Parallel)),
        None => dispatch(&cli, Parallelism::Parallel),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let manifest = json!({
        "tool": "walshlog",
        "version": env!("CARGO_PKG_VERSION"),
        "library_version": walshlog::VERSION,
        "config": config_echo(&cli),
        "rows": report.table.len(),
        "passed": report.passed,
        "summary": report.summary,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    let to_stdout = !matches!(cli.command, Command::Acceptance) || cli.common.out.is_some();
    if to_stdout {
        if let Err(e) = emit(&report.table, cli.common.format, cli.common.out.as_deref(), &manifest) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
