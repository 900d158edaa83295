use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use acceptcert_core::certsuite::{self, ParamValue, Params, RunConfig};
use acceptcert_core::fingrp::DEFAULT_CLOSURE_CAP;
use acceptcert_core::homcheck::{decide_global_with_cap, is_element_conjugate};
use acceptcert_core::scfcheck::{scan_angles, Angle, FamilyKind, ScanTable, SymPairFamily};
use acceptcert_core::so3crit::{self, CriterionOutcome, CriterionReport};
use acceptcert_core::{AmbientElement, Quat, Report};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

const PASS: u8 = 0;
const MISMATCH: u8 = 1;
const USAGE: u8 = 2;
const NOT_APPLICABLE: u8 = 3;

/// Certificates for element-conjugate versus globally conjugate homomorphisms.
#[derive(Parser, Debug)]
#[command(name = "acceptcert", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON output to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Element cap for every group closure (default: $ACCEPTCERT_MAX_CLOSURE or 100000).
    #[arg(long, global = true, value_name = "N")]
    max_closure: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List certificates with their parameter grids and anchors.
    List,
    /// Run one certificate.
    Verify {
        id: String,
        /// Parameter overrides as key=value.
        overrides: Vec<String>,
        /// JSON object of parameter overrides.
        #[arg(long, value_name = "FILE")]
        params: Option<PathBuf>,
    },
    /// Scan the symmetric-pair condition over angles 2πk/m.
    ScanScf {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, short)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
        denominators: Vec<u32>,
    },
    /// Decide the X/Y criterion for generators read from FILE.
    Crit3a1 { file: PathBuf },
    /// Run every certificate (or those matching --filter) at its grid.
    RunAll {
        #[arg(long, value_name = "GLOB")]
        filter: Option<String>,
        /// JSON object mapping certificate ids to lists of parameter sets.
        #[arg(long, value_name = "FILE")]
        params: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    OOdd,
    SoOdd,
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: USAGE, msg: msg.into() }
}

type CmdResult = Result<u8, Failure>;

fn max_closure(cli: &Cli) -> Result<usize, Failure> {
    if let Some(n) = cli.max_closure {
        return Ok(n);
    }
    match std::env::var("ACCEPTCERT_MAX_CLOSURE") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("ACCEPTCERT_MAX_CLOSURE={v} is not a count"))),
        Err(_) => Ok(DEFAULT_CLOSURE_CAP),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{json}\n")).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let body = if cli.json { format!("{json}\n") } else { text() };
    let mut out = std::io::stdout().lock();
    match out.write_all(body.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_override(s: &str) -> Result<(String, ParamValue), Failure> {
    let (k, v) = s.split_once('=').ok_or_else(|| usage(format!("expected key=value, got '{s}'")))?;
    let v = match v.parse::<i64>() {
        Ok(n) => ParamValue::Int(n),
        Err(_) => ParamValue::Text(v.to_string()),
    };
    Ok((k.to_string(), v))
}

fn invocation() -> Vec<String> {
    std::env::args().skip(1).collect()
}

#[derive(Serialize)]
struct ListEntry {
    id: &'static str,
    anchor: &'static str,
    summary: &'static str,
    defaults: Params,
    grid: Vec<Params>,
}

fn fmt_params(p: &Params) -> String {
    let v: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    v.join(" ")
}

fn cmd_list(cli: &Cli) -> CmdResult {
    let entries: Vec<ListEntry> = certsuite::registry()
        .into_iter()
        .map(|c| ListEntry { id: c.id, anchor: c.anchor, summary: c.summary, defaults: c.defaults, grid: c.grid })
        .collect();
    emit(cli, &entries, || {
        let mut s = String::new();
        for e in &entries {
            s.push_str(&format!("{:<18} {}\n", e.id, e.anchor));
            s.push_str(&format!("{:<18} {}\n", "", e.summary));
            let grid: Vec<String> = e.grid.iter().map(|p| format!("[{}]", fmt_params(p))).collect();
            s.push_str(&format!("{:<18} grid: {}\n", "", grid.join(" ")));
        }
        s
    })?;
    Ok(PASS)
}

fn finish(cli: &Cli, report: &Report) -> CmdResult {
    emit(cli, report, || report.to_text())?;
    Ok(if report.passed() { PASS } else { MISMATCH })
}

fn cmd_verify(cli: &Cli, id: &str, overrides: &[String], params: Option<&Path>) -> CmdResult {
    let cert = certsuite::find(id).ok_or_else(|| usage(format!("unknown certificate '{id}'")))?;
    let mut p: Params = match params {
        Some(path) => read_json(path)?,
        None => Params::new(),
    };
    for o in overrides {
        let (k, v) = parse_override(o)?;
        p.insert(k, v);
    }
    let cfg = RunConfig { max_closure: max_closure(cli)? };
    let start = Instant::now();
    let run = certsuite::run(&cert, &p, &cfg).map_err(|e| usage(e.to_string()))?;
    finish(cli, &Report::new(invocation(), vec![run], start.elapsed()))
}

fn cmd_run_all(cli: &Cli, filter: Option<&str>, params: Option<&Path>) -> CmdResult {
    let grids: BTreeMap<String, Vec<Params>> = match params {
        Some(path) => read_json(path)?,
        None => BTreeMap::new(),
    };
    let cfg = RunConfig { max_closure: max_closure(cli)? };
    let start = Instant::now();
    let runs = certsuite::run_all(filter, &grids, &cfg).map_err(|e| usage(e.to_string()))?;
    if runs.is_empty() {
        return Err(usage("filter matches no certificate"));
    }
    finish(cli, &Report::new(invocation(), runs, start.elapsed()))
}

#[derive(Serialize)]
struct ScanOutput {
    table: ScanTable,
    failing_angles: Vec<(i64, u32)>,
    expected_failing_angles: Vec<(i64, u32)>,
    undecided: usize,
    matches_classification: bool,
}

fn cmd_scan_scf(cli: &Cli, family: Family, n: usize, denominators: &[u32]) -> CmdResult {
    if denominators.is_empty() || denominators.iter().any(|&m| m == 0 || m > 48) {
        return Err(usage("denominators must lie in 1..=48"));
    }
    let kind = match family {
        Family::OOdd => FamilyKind::OOddInSoEven,
        Family::SoOdd => FamilyKind::SoOddInSoEven,
    };
    let fam = SymPairFamily::new(kind, n).map_err(|e| usage(e.to_string()))?;
    let table = scan_angles(&fam, denominators).map_err(|e| usage(e.to_string()))?;
    let failing = table.failing_angles();
    let mut expected: Vec<(i64, u32)> = match kind {
        FamilyKind::OOddInSoEven => table
            .rows
            .iter()
            .filter_map(|r| Angle::new(r.k, r.m).ok().map(|a| a.reduced()))
            .filter(|a| *a == (1, 4) || *a == (3, 4))
            .collect(),
        FamilyKind::SoOddInSoEven => Vec::new(),
    };
    expected.sort();
    expected.dedup();
    let out = ScanOutput {
        failing_angles: failing.clone(),
        expected_failing_angles: expected.clone(),
        undecided: table.undecided(),
        matches_classification: failing == expected && table.undecided() == 0,
        table,
    };
    emit(cli, &out, || {
        let mut s = format!("{} (n = {}): {}\n", fam_name(family), n, out.table.condition);
        for r in &out.table.rows {
            let v = if r.verdict.holds() {
                "holds".to_string()
            } else if r.verdict.fails() {
                "FAILS".to_string()
            } else {
                "undecided".to_string()
            };
            s.push_str(&format!("  theta = 2pi*{}/{}: {v}\n", r.k, r.m));
        }
        let angles: Vec<String> = out.failing_angles.iter().map(|(k, m)| format!("2pi*{k}/{m}")).collect();
        s.push_str(&format!("failing: {{{}}}\n", angles.join(", ")));
        s
    })?;
    Ok(if out.matches_classification { PASS } else { MISMATCH })
}

fn fam_name(f: Family) -> &'static str {
    match f {
        Family::OOdd => "O(2n+1) in SO(2n+2)",
        Family::SoOdd => "SO(2n+1) in SO(2n+2)",
    }
}

/// Generators of `Γ̄`, each a triple of unit quaternions.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CritInput {
    generators: Vec<[Quat; 3]>,
}

#[derive(Serialize)]
struct Witness {
    /// Generators of `Γ` (canonical representatives).
    generators: Vec<AmbientElement>,
    phi: Vec<AmbientElement>,
    phi_twisted: Vec<AmbientElement>,
    element_conjugate: bool,
    globally_conjugate: bool,
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum CritOutput {
    Decided { report: CriterionReport, witness: Option<Witness> },
    NotApplicable { factor: usize },
}

fn cmd_crit3a1(cli: &Cli, file: &Path) -> CmdResult {
    let input: CritInput = read_json(file)?;
    let gens: Vec<AmbientElement> = input
        .generators
        .iter()
        .map(|t| {
            let qs: Vec<Quat> = t
                .iter()
                .map(|q| Quat::new(q.a.clone(), q.b.clone(), q.c.clone(), q.d.clone()))
                .collect::<Result<_, _>>()?;
            AmbientElement::sp1s(&qs)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| usage(e.to_string()))?;
    if gens.is_empty() {
        return Err(usage("no generators"));
    }
    let cap = max_closure(cli)?;
    let g = so3crit::target_group();
    let outcome = so3crit::decide_criterion_with_cap(&g, &gens, cap).map_err(|e| usage(e.to_string()))?;
    let (out, code) = match outcome {
        CriterionOutcome::NotApplicable { factor } => (CritOutput::NotApplicable { factor }, NOT_APPLICABLE),
        CriterionOutcome::Decided(crit) => {
            let report = crit.report().clone();
            if report.phi_surjective {
                (CritOutput::Decided { report, witness: None }, PASS)
            } else {
                let pair = crit.build_witness_pair(None).map_err(|e| usage(e.to_string()))?;
                let ec = is_element_conjugate(&pair).holds;
                let gc = decide_global_with_cap(&pair, cap).map_err(|e| usage(e.to_string()))?.is_conjugate();
                let src = pair.source();
                let pick = |h: &acceptcert_core::Hom<acceptcert_core::QuotElement>| {
                    src.generators().iter().map(|&x| h.images()[x].rep().clone()).collect::<Vec<_>>()
                };
                let witness = Witness {
                    generators: src.generators().iter().map(|&x| src.element(x).rep().clone()).collect(),
                    phi: pick(pair.phi()),
                    phi_twisted: pick(pair.phi2()),
                    element_conjugate: ec,
                    globally_conjugate: gc,
                };
                let code = if ec && !gc { PASS } else { MISMATCH };
                (CritOutput::Decided { report, witness: Some(witness) }, code)
            }
        }
    };
    emit(cli, &out, || match &out {
        CritOutput::NotApplicable { factor } => {
            format!("criterion not applicable: factor {factor} of the image has an infinite centralizer\n")
        }
        CritOutput::Decided { report: r, witness } => {
            let mut s = format!(
                "|Gamma| = {}, |Gamma_bar| = {}\n|Z(Gamma_bar)| = {}, |pi(Z(pi^-1 Gamma_bar))| = {}, |X| = {}\n\
                 |Gamma_bar/Gamma_bar'| = {}, |Y| = {}\nphi injective: {}, surjective: {}\n",
                r.gamma_order,
                r.gamma_bar_order,
                r.zbar_centralizer_order,
                r.pi_centralizer_order,
                r.x_order,
                r.gamma_bar_quotient_order,
                r.y_order,
                r.phi_injective,
                r.phi_surjective
            );
            if let Some(w) = witness {
                s.push_str(&format!(
                    "witness pair: element-conjugate {}, globally conjugate {}\n",
                    w.element_conjugate, w.globally_conjugate
                ));
            }
            s
        }
    })?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::List => cmd_list(&cli),
        Cmd::Verify { id, overrides, params } => cmd_verify(&cli, id, overrides, params.as_deref()),
        Cmd::ScanScf { family, n, denominators } => cmd_scan_scf(&cli, *family, *n, denominators),
        Cmd::Crit3a1 { file } => cmd_crit3a1(&cli, file),
        Cmd::RunAll { filter, params } => cmd_run_all(&cli, filter.as_deref(), params.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("acceptcert: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
