//! The `vee` command-line tool.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on usage or input errors.

pub mod vfile;

use std::collections::BTreeMap;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use vee_core::catalog::{catalog_get, catalog_list, format_params, symbolic_system, ExpectedLambda};
use vee_core::cms::{check_series_with_metric, cms_identity_residual, cms_to_vee, Metric};
use vee_core::config::{positive_system, VConfiguration};
use vee_core::exactnum::{fmt_rational, parse_rational, RatMatrix};
use vee_core::numwdvv::wdvv_residual;
use vee_core::polycon::{find_multiplicities, series_constraints, verify_family, Parametrization, SearchOptions};
use vee_core::veecheck::{check_series_condition, full_check, solve_lambda_squared, LambdaSquared, TensorWitness};
use vee_core::{Error, Rational};

pub use vfile::{parse_config_file, render, ConfigFile, FileEntry, ParseError, ParseErrorKind};

#[derive(Parser, Debug)]
#[command(name = "vee", version, about = "Checks trigonometric vee-systems and the WDVV solutions they define")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of sample points for numeric checks.
    #[arg(long, global = true, default_value_t = 10)]
    points: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Pass threshold for numeric residuals.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Minimum distance of sample points from the singular hyperplanes.
    #[arg(long, global = true, default_value_t = 0.1)]
    margin: f64,
    /// Metric on V* for `cms`: a file of matrix rows, or `vee`.
    #[arg(long, global = true, default_value = "vee")]
    metric: String,
    /// Also print `key = value` lines.
    #[arg(long = "report-kv", global = true)]
    report_kv: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// A `.vee` file, `-` for standard input, or `catalog:NAME`.
    source: String,
    /// Catalog parameter `NAME=VALUE` (only with `catalog:NAME`).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Series condition, irreducibility and lambda^2.
    Check(Input),
    /// Every series residual.
    Series(Input),
    /// Solve for lambda^2.
    Lambda(Input),
    /// Numeric WDVV commutator residuals.
    Wdvv(Input),
    /// Calogero-Moser-Sutherland identity, eigenvalue and metric series check.
    Cms(Input),
    /// Polynomial series constraints in the symbolic multiplicities.
    Constraints {
        source: String,
    },
    /// Verify a parametrized family of multiplicities.
    Family {
        source: String,
        /// Parameter name, in order.
        #[arg(long = "param", value_name = "NAME")]
        params: Vec<String>,
        /// `SYMBOL=EXPRESSION` in the parameters.
        #[arg(long = "set", value_name = "SYMBOL=EXPR")]
        set: Vec<String>,
    },
    /// Search for rational multiplicities.
    Search {
        source: String,
        /// Symbol fixed to 1 (default: the first symbol).
        #[arg(long)]
        normalize: Option<String>,
        #[arg(long, default_value_t = 48)]
        starts: usize,
    },
    /// Built-in configurations.
    Catalog {
        #[command(subcommand)]
        action: CatalogCommand,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
    Show {
        name: String,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    Export {
        name: String,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
}

/// Human-readable lines plus the key-value block.
#[derive(Default)]
struct Report {
    lines: Vec<String>,
    kv: Vec<(String, String)>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn kv(&mut self, k: &str, v: impl ToString) {
        self.kv.push((k.to_string(), v.to_string()));
    }
}

/// Error that ends a command.
enum Fail {
    /// Exit 2.
    Input(String),
    /// Exit 1, with the report so far.
    Check(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateForm => Fail::Check(e.to_string()),
            other => Fail::Input(other.to_string()),
        }
    }
}

type CmdResult = std::result::Result<i32, Fail>;

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn parse_assignments(set: &[String]) -> std::result::Result<BTreeMap<String, Rational>, Fail> {
    let mut out = BTreeMap::new();
    for s in set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Fail::Input(format!("expected NAME=VALUE, got {s:?}")))?;
        let q = parse_rational(v.trim()).ok_or_else(|| Fail::Input(format!("invalid rational {v:?}")))?;
        out.insert(k.trim().to_string(), q);
    }
    Ok(out)
}

struct Loaded {
    file: ConfigFile,
}

fn load(source: &str, set: &[String], stdin: &mut dyn Read, symbolic: bool) -> std::result::Result<Loaded, Fail> {
    if let Some(name) = source.strip_prefix("catalog:") {
        if symbolic {
            if !set.is_empty() {
                return Err(Fail::Input("--set does not apply here".into()));
            }
            let sys = symbolic_system(name)?;
            let file = ConfigFile {
                dim: sys.dim(),
                entries: sys
                    .entries()
                    .iter()
                    .map(|e| FileEntry {
                        coords: e.covector.0.clone(),
                        mult: e.mult.clone(),
                    })
                    .collect(),
                lambda2: None,
            };
            return Ok(Loaded { file });
        }
        let params = parse_assignments(set)?;
        let entry = catalog_get(name, Some(&params))?;
        let lambda2 = match entry.expected.map(|e| e.lambda_squared) {
            Some(ExpectedLambda::Value(v)) => Some(v),
            _ => None,
        };
        return Ok(Loaded {
            file: ConfigFile::from_configuration(&entry.cfg, lambda2),
        });
    }
    if !set.is_empty() {
        return Err(Fail::Input("--set only applies to catalog:NAME sources".into()));
    }
    let text = if source == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Fail::Input(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(source).map_err(|e| Fail::Input(format!("{source}: {e}")))?
    };
    let file = parse_config_file(&text).map_err(|e| Fail::Input(format!("{source}: {e}")))?;
    Ok(Loaded { file })
}

fn concrete(file: &ConfigFile) -> std::result::Result<VConfiguration, Fail> {
    match file.to_configuration() {
        Some(r) => Ok(r?),
        None => Err(Fail::Input(
            "symbolic multiplicities are only accepted by constraints, family and search".into(),
        )),
    }
}

fn witness_line(w: &TensorWitness) -> String {
    format!(
        "witness: P[{}][{}] = {}, Q[{}][{}] = {}",
        w.row,
        w.col,
        fmt_rational(&w.p),
        w.row,
        w.col,
        fmt_rational(&w.q)
    )
}

fn lambda_text(l: &LambdaSquared) -> String {
    match l {
        LambdaSquared::Value(v) => fmt_rational(v),
        LambdaSquared::AnyLambda => "any".into(),
        LambdaSquared::NoSolution(_) => "none".into(),
    }
}

fn members_text(cfg: &VConfiguration, members: &[usize]) -> String {
    members
        .iter()
        .map(|&i| cfg.covector(i).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_check(cfg: &VConfiguration, declared: Option<&Rational>, r: &mut Report) -> CmdResult {
    r.kv("command", "check");
    let full = full_check(cfg);
    if !full.nondegenerate {
        r.line(format!("trig-vee: FAIL ({})", Error::DegenerateForm));
        r.kv("trig_vee", "fail");
        r.kv("failure", "degenerate");
        return Ok(1);
    }
    let (Some(series), Some(irreducible), Some(lambda)) = (&full.series, full.is_irreducible, &full.lambda) else {
        return Err(Fail::Input(full.failure.unwrap_or_default()));
    };
    let irr = if irreducible { "yes" } else { "no" };
    let l = &lambda.lambda_squared;
    r.kv("trig_vee", pass_fail(series.pass).to_lowercase());
    r.kv("irreducible", irr);
    r.kv("lambda2", lambda_text(l));
    r.kv("series_failures", series.failures().count());
    let head = format!("trig-vee: {}, irreducible: {irr}", pass_fail(series.pass));
    match l {
        LambdaSquared::NoSolution(w) => {
            r.line(head);
            if irreducible {
                r.line("lambda2: NO SOLUTION");
            } else {
                r.line("lambda2: NO SOLUTION (reducible configuration)");
            }
            r.line(witness_line(w));
        }
        _ => r.line(format!("{head}, lambda2 = {}", lambda_text(l))),
    }
    for f in series.failures() {
        r.line(format!(
            "series failure: base {}, members {}, residual = {}",
            cfg.covector(f.base),
            members_text(cfg, &f.members),
            fmt_rational(&f.residual)
        ));
    }
    let mut ok = full.defines_solution;
    if let Some(d) = declared {
        let matches = l.value() == Some(d);
        r.kv("lambda2_declared", fmt_rational(d));
        r.kv("lambda2_declared_match", if matches { "yes" } else { "no" });
        if !matches {
            r.line(format!("declared lambda2 = {} does not match", fmt_rational(d)));
            ok = false;
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_series(cfg: &VConfiguration, r: &mut Report) -> CmdResult {
    r.kv("command", "series");
    let rep = check_series_condition(cfg)?;
    for s in &rep.residuals {
        r.line(format!(
            "base {}: series {}: residual = {} {}",
            cfg.covector(s.base),
            members_text(cfg, &s.members),
            fmt_rational(&s.residual),
            pass_fail(s.pass)
        ));
    }
    r.line(format!("trig-vee: {}", pass_fail(rep.pass)));
    r.kv("series_checked", rep.residuals.len());
    r.kv("series_failures", rep.failures().count());
    r.kv("trig_vee", pass_fail(rep.pass).to_lowercase());
    Ok(if rep.pass { 0 } else { 1 })
}

fn cmd_lambda(cfg: &VConfiguration, r: &mut Report) -> CmdResult {
    r.kv("command", "lambda");
    let psys = positive_system(cfg, None)?;
    let sol = solve_lambda_squared(cfg, &psys)?;
    let positive: Vec<String> = (0..cfg.len()).map(|i| psys.signed(cfg, i).to_string()).collect();
    let functional: Vec<String> = psys.functional.iter().map(fmt_rational).collect();
    r.line(format!("positive system: {}", positive.join(" ")));
    r.line(format!("functional: ({})", functional.join(", ")));
    r.kv("lambda2", lambda_text(&sol.lambda_squared));
    match &sol.lambda_squared {
        LambdaSquared::Value(v) => {
            r.line(format!("lambda2 = {}", fmt_rational(v)));
            Ok(0)
        }
        LambdaSquared::AnyLambda => {
            r.line("lambda2 = any (both coupling tensors vanish)");
            Ok(0)
        }
        LambdaSquared::NoSolution(w) => {
            r.line("lambda2: NO SOLUTION");
            r.line(witness_line(w));
            Ok(1)
        }
    }
}

fn cmd_wdvv(cli: &Cli, cfg: &VConfiguration, declared: Option<&Rational>, r: &mut Report) -> CmdResult {
    r.kv("command", "wdvv");
    let lambda2 = match declared {
        Some(d) => d.clone(),
        None => {
            let psys = positive_system(cfg, None)?;
            match solve_lambda_squared(cfg, &psys)?.lambda_squared {
                LambdaSquared::Value(v) => v,
                LambdaSquared::AnyLambda => {
                    r.line("lambda2 = any; using 1");
                    Rational::from_integer(1.into())
                }
                LambdaSquared::NoSolution(w) => {
                    r.line("lambda2: NO SOLUTION");
                    r.line(witness_line(&w));
                    r.kv("lambda2", "none");
                    return Ok(1);
                }
            }
        }
    };
    let rep = wdvv_residual(cfg, &lambda2, cli.points, cli.seed, cli.margin)?;
    let pass = rep.aggregate < cli.tol;
    r.line(format!("lambda2 = {}", fmt_rational(&lambda2)));
    r.line(format!(
        "aggregate residual = {:.3e} over {} points (seed {})",
        rep.aggregate,
        rep.per_point.len(),
        cli.seed
    ));
    for ((i, j), v) in &rep.per_pair {
        r.line(format!("pair ({i}, {j}): {v:.3e}"));
    }
    r.line(format!("wdvv: {} (tol {:e})", pass_fail(pass), cli.tol));
    r.kv("lambda2", fmt_rational(&lambda2));
    r.kv("points", rep.per_point.len());
    r.kv("seed", cli.seed);
    r.kv("aggregate_residual", format!("{:.3e}", rep.aggregate));
    r.kv("wdvv", pass_fail(pass).to_lowercase());
    Ok(if pass { 0 } else { 1 })
}

fn load_metric(spec: &str, cfg: &VConfiguration) -> std::result::Result<Metric, Fail> {
    if spec == "vee" {
        return Ok(Metric::vee(cfg)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Fail::Input(format!("{spec}: {e}")))?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let row = content
            .split_whitespace()
            .map(|t| parse_rational(t).ok_or_else(|| Fail::Input(format!("{spec}: line {}: invalid rational {t:?}", k + 1))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let n = cfg.dim();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Fail::Input(format!("{spec}: metric must be {n} rows of {n} rationals")));
    }
    Ok(Metric::new(RatMatrix::from_rows(rows)?)?)
}

fn cmd_cms(cli: &Cli, cfg: &VConfiguration, r: &mut Report) -> CmdResult {
    r.kv("command", "cms");
    let metric = load_metric(&cli.metric, cfg)?;
    let rep = cms_identity_residual(cfg, &metric, cli.points, cli.seed)?;
    let constant = rep.max_deviation < cli.tol;
    r.line(format!(
        "identity constant = {:.12} (max deviation {:.3e}) {}",
        rep.mean.re,
        rep.max_deviation,
        pass_fail(constant)
    ));
    r.line(format!(
        "eigenvalue = {:.12} (max deviation {:.3e})",
        rep.eigenvalue_estimate.re, rep.eigenvalue_deviation
    ));
    let series = check_series_with_metric(cfg, &metric)?;
    r.line(format!("series with metric: {}", pass_fail(series.pass)));
    for f in series.failures() {
        r.line(format!(
            "series failure: base {}, members {}, residual = {}",
            cfg.covector(f.base),
            members_text(cfg, &f.members),
            fmt_rational(&f.residual)
        ));
    }
    r.kv("identity_constant", format!("{:.12}", rep.mean.re));
    r.kv("identity_deviation", format!("{:.3e}", rep.max_deviation));
    r.kv("eigenvalue", format!("{:.12}", rep.eigenvalue_estimate.re));
    r.kv("eigenvalue_deviation", format!("{:.3e}", rep.eigenvalue_deviation));
    r.kv("series_with_metric", pass_fail(series.pass).to_lowercase());
    if series.pass {
        match cms_to_vee(cfg, &metric) {
            Ok(split) => {
                for c in &split.components {
                    r.line(format!("component: scalar {}, dimension {}", fmt_rational(&c.scalar), c.basis.len()));
                }
                r.line(format!("trig-vee: {}", pass_fail(split.is_trig_vee)));
                r.kv("components", split.components.len());
                r.kv("trig_vee", pass_fail(split.is_trig_vee).to_lowercase());
            }
            Err(Error::NonScalarAction) => r.line("components: metric does not act by rational scalars"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(if constant && series.pass { 0 } else { 1 })
}

fn cmd_constraints(file: &ConfigFile, r: &mut Report) -> CmdResult {
    r.kv("command", "constraints");
    let sys = file.to_symbolic()?;
    let cs = series_constraints(&sys)?;
    let cfg_labels: Vec<String> = sys.entries().iter().map(|e| e.covector.to_string()).collect();
    r.line(format!("variables: {}", cs.vars.join(" ")));
    r.line(format!("nondegeneracy: {}", cs.nondegeneracy));
    r.line(format!(
        "constraints: {} (distinct up to scale: {})",
        cs.constraints.len(),
        cs.distinct_polynomials().len()
    ));
    for c in &cs.constraints {
        let members: Vec<&str> = c.members.iter().map(|&i| cfg_labels[i].as_str()).collect();
        r.line(format!("base {}, series {}: {}", cfg_labels[c.base], members.join(" "), c.poly));
    }
    r.kv("variables", cs.vars.join(","));
    r.kv("constraints", cs.constraints.len());
    r.kv("distinct_constraints", cs.distinct_polynomials().len());
    r.kv("nondegeneracy", &cs.nondegeneracy);
    Ok(0)
}

fn cmd_family(file: &ConfigFile, params: &[String], set: &[String], r: &mut Report) -> CmdResult {
    r.kv("command", "family");
    let sys = file.to_symbolic()?;
    let cs = series_constraints(&sys)?;
    let mut assignments = Vec::new();
    for s in set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Fail::Input(format!("expected SYMBOL=EXPR, got {s:?}")))?;
        assignments.push((k.trim(), v.trim()));
    }
    let names: Vec<&str> = params.iter().map(String::as_str).collect();
    let param = Parametrization::parse(&names, &assignments).map_err(|e| Fail::Input(format!("expression {e}")))?;
    match verify_family(&cs, &param) {
        Ok(rep) => {
            r.line(format!("family: {}", pass_fail(rep.pass)));
            r.line(format!("nondegeneracy: {}", rep.nondegeneracy));
            for (sym, d) in &rep.denominators {
                r.line(format!("denominator of {sym}: {d}"));
            }
            for (k, res) in &rep.failures {
                let c = &cs.constraints[*k];
                r.line(format!(
                    "failure: base {}, residual {}",
                    sys.entries()[c.base].covector,
                    res
                ));
            }
            r.kv("family", pass_fail(rep.pass).to_lowercase());
            r.kv("failures", rep.failures.len());
            Ok(if rep.pass { 0 } else { 1 })
        }
        Err(Error::DegenerateParametrization) => {
            r.line(format!("family: FAIL ({})", Error::DegenerateParametrization));
            r.kv("family", "degenerate");
            Ok(1)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_search(cli: &Cli, file: &ConfigFile, normalize: Option<&str>, starts: usize, r: &mut Report) -> CmdResult {
    r.kv("command", "search");
    let sys = file.to_symbolic()?;
    let norm = match normalize {
        Some(n) => n.to_string(),
        None => sys
            .vars()
            .first()
            .cloned()
            .ok_or_else(|| Fail::Input("no symbolic multiplicities to search".into()))?,
    };
    let opts = SearchOptions {
        starts,
        ..SearchOptions::default()
    };
    let found = find_multiplicities(&sys, &norm, cli.seed, &opts)?;
    r.line(format!("normalization: {norm} = 1"));
    r.line(format!("solutions: {}", found.len()));
    for q in &found {
        let parts: Vec<String> = sys
            .vars()
            .iter()
            .zip(q)
            .map(|(v, x)| format!("{v}={}", fmt_rational(x)))
            .collect();
        r.line(parts.join(" "));
    }
    if found.is_empty() {
        r.line("no exactly verified solution found");
    }
    r.kv("solutions", found.len());
    Ok(if found.is_empty() { 1 } else { 0 })
}

fn export_text(name: &str, set: &[String]) -> std::result::Result<(String, String), Fail> {
    let params = parse_assignments(set)?;
    let entry = catalog_get(name, Some(&params))?;
    let lambda2 = match entry.expected.as_ref().map(|e| &e.lambda_squared) {
        Some(ExpectedLambda::Value(v)) => Some(v.clone()),
        _ => None,
    };
    let header = if entry.params.is_empty() {
        format!("# {name}")
    } else {
        format!("# {name} {}", format_params(&entry.params))
    };
    Ok((header, render(&ConfigFile::from_configuration(&entry.cfg, lambda2))))
}

fn cmd_catalog(action: &CatalogCommand, r: &mut Report) -> CmdResult {
    match action {
        CatalogCommand::List => {
            let list = catalog_list();
            let width = list.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            for (n, d) in &list {
                r.line(format!("{n:<width$}  {d}"));
            }
            r.kv("command", "catalog list");
            r.kv("entries", list.len());
        }
        CatalogCommand::Show { name, set } => {
            let params = parse_assignments(set)?;
            let entry = catalog_get(name, Some(&params))?;
            r.line(format!("name: {}", entry.name));
            if !entry.params.is_empty() {
                r.line(format!("params: {}", format_params(&entry.params)));
            }
            if let Some(e) = &entry.expected {
                let l = match &e.lambda_squared {
                    ExpectedLambda::Value(v) => format!("lambda2 = {}", fmt_rational(v)),
                    ExpectedLambda::NoSolution => "lambda2: NO SOLUTION".into(),
                    ExpectedLambda::NotRecorded => "lambda2 not recorded".into(),
                };
                r.line(format!(
                    "expected: trig-vee {}, {l} [{}]",
                    pass_fail(e.is_trig_vee),
                    e.provenance.tag()
                ));
            }
            for (i, en) in entry.cfg.entries().iter().enumerate() {
                r.line(format!("{:>3}  {}  mult {}", i + 1, en.covector, fmt_rational(&en.mult)));
            }
            r.kv("command", "catalog show");
            r.kv("name", &entry.name);
            r.kv("vectors", entry.cfg.len());
        }
        CatalogCommand::Export { name, set } => {
            let (header, body) = export_text(name, set)?;
            r.line(header);
            r.line(body.trim_end());
        }
    }
    Ok(0)
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, r: &mut Report) -> CmdResult {
    match &cli.command {
        Command::Check(i) => {
            let l = load(&i.source, &i.set, stdin, false)?;
            cmd_check(&concrete(&l.file)?, l.file.lambda2.as_ref(), r)
        }
        Command::Series(i) => cmd_series(&concrete(&load(&i.source, &i.set, stdin, false)?.file)?, r),
        Command::Lambda(i) => cmd_lambda(&concrete(&load(&i.source, &i.set, stdin, false)?.file)?, r),
        Command::Wdvv(i) => {
            let l = load(&i.source, &i.set, stdin, false)?;
            cmd_wdvv(cli, &concrete(&l.file)?, l.file.lambda2.as_ref(), r)
        }
        Command::Cms(i) => cmd_cms(cli, &concrete(&load(&i.source, &i.set, stdin, false)?.file)?, r),
        Command::Constraints { source } => cmd_constraints(&load(source, &[], stdin, true)?.file, r),
        Command::Family { source, params, set } => cmd_family(&load(source, &[], stdin, true)?.file, params, set, r),
        Command::Search {
            source,
            normalize,
            starts,
        } => cmd_search(cli, &load(source, &[], stdin, true)?.file, normalize.as_deref(), *starts, r),
        Command::Catalog { action } => cmd_catalog(action, r),
    }
}

/// Runs one command; returns the exit code.
pub fn run(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut report = Report::default();
    let code = match dispatch(&cli, stdin, &mut report) {
        Ok(c) => c,
        Err(Fail::Check(m)) => {
            report.line(format!("FAIL: {m}"));
            1
        }
        Err(Fail::Input(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return 2;
        }
    };
    let mut out = String::new();
    for l in &report.lines {
        out.push_str(l);
        out.push('\n');
    }
    if cli.report_kv {
        for (k, v) in &report.kv {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str(&format!("exit = {code}\n"));
    }
    if stdout.write_all(out.as_bytes()).is_err() {
        return 2;
    }
    code
}
