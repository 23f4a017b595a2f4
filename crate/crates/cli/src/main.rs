//! `gqpa`: classification, reduction, level quivers and pre-simple-minded
//! collection checks for graded quivers.
//!
//! Exit codes: 0 success, 1 well-formed negative verdict, 2 input error,
//! 3 budget exceeded or unsupported parameters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gqpa_core::qtilde::{brute_force_indec, level_name, level_report, positive_roots, LevelQuiver, OracleBudget};
use gqpa_core::reduce::{match_core_shape, reduce_to_core_with, ReduceOptions};
use gqpa_core::repcat::builders::{build_l_case_a_n, Family};
use gqpa_core::repcat::hom::{hom_dims, hom_window};
use gqpa_core::repcat::json::rep_from_json;
use gqpa_core::repcat::resolution::ext1_graded;
use gqpa_core::{
    build_qtilde, check_condition_two, check_pre_smc, classify, dynkin_decompose, CoreTag, Error, ExactField,
    GradedQuiver, GradedRep, Scalar,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gqpa", version, about = "Silting-discreteness tools for graded quivers")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for reproducible pipelines; no command uses randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide silting-discreteness.
    Classify {
        file: PathBuf,
        /// Also compare against the level quivers up to this depth.
        #[arg(long)]
        check_depth: Option<i64>,
    },
    /// Reduce a non-discrete quiver to a core shape.
    Reduce {
        file: PathBuf,
        /// Print every intermediate quiver.
        #[arg(long)]
        trace: bool,
        /// Depth of the fallback search.
        #[arg(long, default_value_t = 32)]
        search_depth: usize,
    },
    /// Build the level quiver and count indecomposables.
    Qtilde {
        file: PathBuf,
        #[arg(short = 'n', default_value_t = 0)]
        n: i64,
        /// Print only the component summary and total.
        #[arg(long)]
        count: bool,
        /// Cross-check with brute-force enumeration over a prime field, e.g. `fp:2`.
        #[arg(long)]
        oracle: Option<String>,
        /// Dimension caps: a single number for every vertex, or `v@l=c,…`.
        #[arg(long, default_value = "1")]
        caps: String,
    },
    /// Build a family of bricks and check the pre-simple-minded conditions.
    VerifyPsmc {
        /// Core-shape quiver; required for `--case auto`.
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CaseArg::Auto)]
        case: CaseArg,
        /// Comma-separated parameters: `n` (a), `m,n` (b, c), `a1,a2,…` (special), `k` (deg0).
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value = "1,2,3,4,5")]
        lambdas: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Graded Hom (and Ext¹) dimensions between two representations.
    Hom {
        quiver: PathBuf,
        rep_m: PathBuf,
        rep_n: PathBuf,
        #[arg(long)]
        ext: bool,
    },
    /// Shift degrees by a vertex potential so that all are nonpositive.
    Normalize { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Auto,
    A,
    B,
    C,
    Special,
    Deg0,
}

struct Outcome {
    code: u8,
    text: String,
    json: Value,
}

impl Outcome {
    fn new(code: u8, text: String, json: Value) -> Self {
        Outcome { code, text, json }
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported(_) | Error::Budget(_) => 3,
            Error::DiscreteInput => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CmdResult = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { file, check_depth } => cmd_classify(&file, check_depth),
        Command::Reduce {
            file,
            trace,
            search_depth,
        } => cmd_reduce(&file, trace, search_depth),
        Command::Qtilde {
            file,
            n,
            count,
            oracle,
            caps,
        } => cmd_qtilde(&file, n, count, oracle.as_deref(), &caps),
        Command::VerifyPsmc {
            file,
            case,
            params,
            lambdas,
            field,
        } => cmd_verify_psmc(file.as_deref(), case, params.as_deref(), &lambdas, &field),
        Command::Hom {
            quiver,
            rep_m,
            rep_n,
            ext,
        } => cmd_hom(&quiver, &rep_m, &rep_n, ext),
        Command::Normalize { file } => cmd_normalize(&file),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if cli.json {
                println!("{}", json!({ "error": f.message, "exit_code": f.code }));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_quiver(path: &Path) -> Result<GradedQuiver, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<GradedQuiver>()
        .map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_rep(path: &Path) -> Result<GradedRep, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    rep_from_json(&text, path.parent()).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn cmd_classify(path: &Path, check_depth: Option<i64>) -> CmdResult {
    let q = read_quiver(path)?;
    let verdict = classify(&q)?;
    let mut text = String::new();
    writeln!(text, "discrete: {}", verdict.discrete).unwrap();
    writeln!(text, "reason: {} ({})", verdict.reason.tag(), verdict.reason).unwrap();
    if let Some((a, b)) = verdict.reason.totals() {
        writeln!(text, "totals: {a} {b}").unwrap();
    }
    writeln!(text, "normalized quiver:").unwrap();
    for line in verdict.normalized_quiver.to_text().lines() {
        writeln!(text, "  {line}").unwrap();
    }
    if let Some(hint) = &verdict.witness_hint {
        writeln!(text, "witness: run `gqpa {hint}`").unwrap();
    }
    let mut payload = json!({
        "discrete": verdict.discrete,
        "reason": verdict.reason,
        "normalized_quiver": verdict.normalized_quiver.to_text(),
    });
    if let Some(t) = verdict.reason.totals() {
        payload["totals"] = json!([t.0, t.1]);
    }
    if let Some(depth) = check_depth {
        if depth < 0 {
            return Err(input_error("--check-depth must be nonnegative"));
        }
        let report = check_condition_two(&q, depth)?;
        for level in &report.levels {
            writeln!(text, "level {}: {}", level.n, level_summary(level)).unwrap();
        }
        writeln!(text, "levels consistent with verdict: {:?}", report.consistency).unwrap();
        payload["levels"] = report
            .levels
            .iter()
            .map(|l| json!({ "n": l.n, "dynkin_union": l.dynkin_union(), "components": l.components }))
            .collect();
        payload["consistency"] = json!(report.consistency);
    }
    Ok(Outcome::new(if verdict.discrete { 0 } else { 1 }, text, payload))
}

fn level_summary(level: &gqpa_core::qtilde::LevelReport) -> String {
    let types: Vec<String> = level.components.iter().map(|c| c.type_label.clone()).collect();
    format!("{} — total {}", types.join(" + "), level.total)
}

fn cmd_reduce(path: &Path, show_trace: bool, search_depth: usize) -> CmdResult {
    let q = read_quiver(path)?;
    let options = ReduceOptions {
        max_depth: search_depth,
        ..ReduceOptions::default()
    };
    let trace = reduce_to_core_with(&q, options)?;
    let mut text = String::new();
    if let Some(sel) = &trace.selection {
        writeln!(
            text,
            "selected arrow: {} (n = {}, N = {})",
            sel.arrow, sel.n, sel.parallel
        )
        .unwrap();
    }
    for (i, step) in trace.steps.iter().enumerate() {
        writeln!(text, "{:>2}. {}", i + 1, step.op).unwrap();
        if show_trace {
            for line in step.after.to_text().lines() {
                writeln!(text, "      {line}").unwrap();
            }
        }
    }
    let t = &trace.terminal;
    writeln!(
        text,
        "terminal: {}{}",
        t.tag,
        if t.opposite { " (opposite)" } else { "" }
    )
    .unwrap();
    if t.is_match() {
        writeln!(text, "witness available: {}", t.tag.witness_available()).unwrap();
    }
    for note in &trace.notes {
        writeln!(text, "note: {note}").unwrap();
    }
    let code = if t.tag == CoreTag::None { 3 } else { 0 };
    if code == 3 {
        writeln!(text, "search exhausted without reaching a core shape").unwrap();
    }
    Ok(Outcome::new(code, text, trace.to_json()))
}

fn parse_caps(spec: &str, level: &LevelQuiver) -> Result<BTreeMap<String, usize>, Failure> {
    let names: Vec<String> = level.vertices.iter().map(level_name).collect();
    if let Ok(c) = spec.trim().parse::<usize>() {
        return Ok(names.into_iter().map(|v| (v, c)).collect());
    }
    let mut caps = BTreeMap::new();
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (v, c) = item
            .split_once('=')
            .ok_or_else(|| input_error(format!("cap {item:?} is not of the form v@l=c")))?;
        let v = v.trim().to_string();
        if !names.contains(&v) {
            return Err(input_error(format!("cap for unknown level vertex {v:?}")));
        }
        let c = c
            .trim()
            .parse()
            .map_err(|_| input_error(format!("cap {item:?} is not a nonnegative integer")))?;
        caps.insert(v, c);
    }
    Ok(caps)
}

/// Positive roots of the Dynkin components that fit under the caps; these
/// are the dimension vectors the brute-force oracle can see.
fn roots_within_caps(level: &LevelQuiver, caps: &BTreeMap<String, usize>) -> Option<usize> {
    let q = level.to_quiver();
    let mut total = 0;
    for comp in dynkin_decompose(level) {
        if !comp.is_dynkin() {
            return None;
        }
        let index: BTreeMap<&str, usize> = comp.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let edges: Vec<(usize, usize)> = q
            .arrows()
            .iter()
            .filter_map(|a| Some((*index.get(a.source.as_str())?, *index.get(a.target.as_str())?)))
            .collect();
        total += positive_roots(comp.vertices.len(), &edges)
            .iter()
            .filter(|r| {
                r.iter()
                    .zip(&comp.vertices)
                    .all(|(&x, v)| x as usize <= caps.get(v).copied().unwrap_or(0))
            })
            .count();
    }
    Some(total)
}

fn cmd_qtilde(path: &Path, n: i64, count_only: bool, oracle: Option<&str>, caps: &str) -> CmdResult {
    if n < 0 {
        return Err(input_error("-n must be nonnegative"));
    }
    let q = read_quiver(path)?;
    let (normal, _, _) = q.normalize()?;
    let level = build_qtilde(&normal, n)?;
    let report = level_report(&q, n)?;
    let mut text = String::new();
    if !count_only {
        let names: Vec<String> = level.vertices.iter().map(level_name).collect();
        writeln!(text, "vertices ({}): {}", names.len(), names.join(" ")).unwrap();
        writeln!(text, "arrows ({}):", level.arrows.len()).unwrap();
        for a in &level.arrows {
            writeln!(
                text,
                "  {}@{}: {} -> {}",
                a.arrow,
                a.level,
                level_name(&a.source),
                level_name(&a.target)
            )
            .unwrap();
        }
    }
    for c in &report.components {
        let roots = c.roots.map_or("non-Dynkin".to_string(), |r| format!("{r} roots"));
        writeln!(text, "component {} [{}]: {roots}", c.type_label, c.vertices.join(" ")).unwrap();
    }
    writeln!(text, "total: {}", report.total).unwrap();
    let mut payload = json!({ "n": report.n, "components": report.components, "total": match report.total {
        gqpa_core::IndecCount::Finite(t) => json!(t),
        gqpa_core::IndecCount::Infinite { .. } => json!("infinite"),
    }});
    let mut code = 0;
    if let Some(spec) = oracle {
        let field: ExactField = spec.parse().map_err(|e: Error| input_error(e.to_string()))?;
        if field.order().is_none() {
            return Err(input_error("--oracle needs a prime field, e.g. fp:2"));
        }
        let caps = parse_caps(caps, &level)?;
        let budget = OracleBudget::from_env()?;
        let brute = brute_force_indec(&level, field, &caps, budget)?;
        let predicted = roots_within_caps(&level, &caps);
        match predicted {
            Some(p) if p == brute => writeln!(text, "oracle over {field}: {brute} (matches)").unwrap(),
            Some(p) => {
                code = 1;
                writeln!(
                    text,
                    "oracle over {field}: {brute}, root count within caps: {p} (MISMATCH)"
                )
                .unwrap();
            }
            None => writeln!(text, "oracle over {field}: {brute} (non-Dynkin level, not compared)").unwrap(),
        }
        payload["oracle"] = json!({ "field": field.to_string(), "count": brute, "predicted": predicted });
    }
    Ok(Outcome::new(code, text, payload))
}

fn parse_list<T: std::str::FromStr>(spec: &str, what: &str) -> Result<Vec<T>, Failure> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| input_error(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

fn family_from_tag(tag: &CoreTag) -> Result<Family, Failure> {
    Ok(match tag {
        CoreTag::CaseA { n } => {
            if *n != 1 {
                return Err(unsupported_case_a(*n));
            }
            Family::CaseA
        }
        CoreTag::CaseB { m, n } => Family::CaseB { m: *m, n: *n },
        CoreTag::CaseC { arrows, degrees } => {
            let a: Vec<i64> = degrees[1..].iter().map(|d| -d).collect();
            if *arrows == 3 {
                Family::CaseC { m: a[0], n: a[1] }
            } else {
                Family::Special { degrees: a }
            }
        }
        CoreTag::KroneckerDegZero { arrows } => Family::KroneckerDegZero { arrows: *arrows },
        CoreTag::None => return Err(input_error("quiver does not match any core shape")),
    })
}

fn unsupported_case_a(n: i64) -> Failure {
    Failure {
        code: 3,
        message: format!(
            "construction not provided at these parameters: case (a) is built only for n = 1, got n = {n}"
        ),
    }
}

fn family_from_args(case: CaseArg, params: &[i64]) -> Result<Family, Failure> {
    let need = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(input_error(format!("expected {k} parameter(s), got {}", params.len())))
        }
    };
    Ok(match case {
        CaseArg::A => {
            if let Some(&n) = params.first() {
                need(1)?;
                if n != 1 {
                    // surfaces the same refusal the builder gives
                    build_l_case_a_n(ExactField::Rationals, &Scalar::from_integer(1.into()), n)?;
                }
            }
            Family::CaseA
        }
        CaseArg::B => {
            need(2)?;
            Family::CaseB {
                m: params[0],
                n: params[1],
            }
        }
        CaseArg::C => {
            need(2)?;
            Family::CaseC {
                m: params[0],
                n: params[1],
            }
        }
        CaseArg::Special => {
            if params.len() < 2 {
                return Err(input_error("special case needs at least two degrees"));
            }
            Family::Special {
                degrees: params.to_vec(),
            }
        }
        CaseArg::Deg0 => {
            need(1)?;
            if params[0] < 2 {
                return Err(input_error("need at least two arrows"));
            }
            Family::KroneckerDegZero {
                arrows: params[0] as usize,
            }
        }
        CaseArg::Auto => unreachable!("handled by the caller"),
    })
}

fn refuse_unsupported(e: Error) -> Failure {
    match e {
        Error::Unsupported(m) => Failure {
            code: 3,
            message: format!("construction not provided at these parameters: {m}"),
        },
        other => other.into(),
    }
}

fn cmd_verify_psmc(path: Option<&Path>, case: CaseArg, params: Option<&str>, lambdas: &str, field: &str) -> CmdResult {
    let field: ExactField = field.parse().map_err(|e: Error| input_error(e.to_string()))?;
    let params: Vec<i64> = match params {
        Some(p) => parse_list(p, "parameter")?,
        None => Vec::new(),
    };
    let family = match case {
        CaseArg::Auto => {
            let path = path.ok_or_else(|| input_error("--case auto needs a quiver file"))?;
            let q = read_quiver(path)?;
            family_from_tag(&match_core_shape(&q).tag)?
        }
        _ if params.is_empty() && path.is_some() => {
            let q = read_quiver(path.unwrap())?;
            family_from_tag(&match_core_shape(&q).tag)?
        }
        explicit => family_from_args(explicit, &params)?,
    };
    let lambdas: Vec<Scalar> = lambdas
        .split(',')
        .map(|s| {
            ExactField::Rationals
                .parse_scalar(s)
                .map_err(|e| input_error(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let members = family.build_all(field, &lambdas).map_err(refuse_unsupported)?;
    let report = check_pre_smc(&members)?;
    let mut text = String::new();
    writeln!(text, "family: {family:?} over {field}, {} members", members.len()).unwrap();
    writeln!(text, "{report}").unwrap();
    let code = if report.passed() { 0 } else { 1 };
    let payload = json!({
        "family": format!("{family:?}"),
        "field": field.to_string(),
        "lambdas": lambdas.iter().map(|l| ExactField::Rationals.format_scalar(l)).collect::<Vec<_>>(),
        "report": report,
        "passed": report.passed(),
    });
    Ok(Outcome::new(code, text, payload))
}

fn cmd_hom(quiver: &Path, rep_m: &Path, rep_n: &Path, ext: bool) -> CmdResult {
    let q = read_quiver(quiver)?;
    let m = read_rep(rep_m)?;
    let n = read_rep(rep_n)?;
    for (name, r) in [("first", &m), ("second", &n)] {
        if r.quiver().shape_key() != q.shape_key() {
            return Err(input_error(format!("{name} representation is over a different quiver")));
        }
    }
    if m.field() != n.field() {
        return Err(input_error(format!("fields differ: {} vs {}", m.field(), n.field())));
    }
    let hom = hom_dims(&m, &n)?;
    let ext1 = if ext { Some(ext1_graded(&m, &n)?) } else { None };
    let mut degrees: Vec<i64> = match hom_window(&m, &n) {
        Some((lo, hi)) => (lo..=hi).collect(),
        None => Vec::new(),
    };
    if let Some(e) = &ext1 {
        degrees.extend(e.keys());
        degrees.sort();
        degrees.dedup();
    }
    let get = |map: &BTreeMap<i64, usize>, h: i64| map.get(&h).copied().unwrap_or(0);
    let mut text = String::new();
    writeln!(text, "{:>6} {:>5}{}", "degree", "Hom", if ext { "  Ext1" } else { "" }).unwrap();
    let mut rows = Vec::new();
    for &h in &degrees {
        let mut row = json!({ "degree": h, "hom": get(&hom, h) });
        write!(text, "{h:>6} {:>5}", get(&hom, h)).unwrap();
        if let Some(e) = &ext1 {
            write!(text, "  {:>4}", get(e, h)).unwrap();
            row["ext1"] = json!(get(e, h));
        }
        text.push('\n');
        rows.push(row);
    }
    Ok(Outcome::new(
        0,
        text,
        json!({ "field": m.field().to_string(), "degrees": rows }),
    ))
}

fn cmd_normalize(path: &Path) -> CmdResult {
    let q = read_quiver(path)?;
    let (normal, potential, connected) = q.normalize()?;
    let mut text = normal.to_text();
    let pot: BTreeMap<&String, &i64> = potential.entries().collect();
    let pot_text: Vec<String> = pot.iter().map(|(v, g)| format!("{v}={g}")).collect();
    writeln!(text, "# potential: {}", pot_text.join(" ")).unwrap();
    writeln!(text, "# degree-zero part connected: {connected}").unwrap();
    Ok(Outcome::new(
        0,
        text,
        json!({ "quiver": normal.to_text(), "potential": pot, "zero_part_connected": connected }),
    ))
}
