//! The `pervchow` command line.
//!
//! Every command prints one report. The machine format is a JSON object
//! `{"schema": 1, "command", "verdicts", "values"}`; `--pretty` prints the
//! same content for reading. Exit codes: `0` when every verdict holds, `1`
//! when a check fails, `2` on malformed input or a rejected request, in
//! which case the JSON carries an `"error"` object instead.

mod catalog;
pub mod input;
mod schema;

use std::collections::BTreeMap;
use std::fmt::Display;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::abgroup::{is_exact_at_middle, smith_normal_form, GroupMap, IntMatrix};
use crate::cocycles::{morphism_fiber_pattern, rank_to_incidence, CocycleDoc, CocyclePattern, RankProfile};
use crate::cone::{ConeClass, ConeVariety, Mode};
use crate::cycles::{from_index_map, CyclePattern, FamilyCertificate, FamilyDoc, Incidence, JointDoc, JointPattern, PatternDoc};
use crate::perversity::GeneralizedBound;
use crate::strata::Stratification;
use crate::verdict::Verdict;

pub use catalog::catalog_report;
pub use schema::emit_schema;

/// Version tag carried by every document the CLI emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("missing required argument {0}")]
    Missing(&'static str),
    #[error("malformed {what}: {message}")]
    Input { what: &'static str, message: String },
    #[error("{0}")]
    Io(String),
    #[error("{what}: {message}")]
    Domain { what: &'static str, message: String },
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
}

impl CliError {
    pub(crate) fn domain(what: &'static str, e: impl Display) -> Self {
        CliError::Domain { what, message: e.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Missing(_) => "missing",
            CliError::Input { .. } => "input",
            CliError::Io(_) => "io",
            CliError::Domain { .. } => "domain",
            CliError::UnknownCommand(_) => "unknown-command",
        }
    }
}

/// The result of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub verdicts: Vec<Verdict>,
    pub values: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { schema: SCHEMA_VERSION, command: command.to_string(), verdicts: Vec::new(), values: Map::new() }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.values.insert(key.to_string(), serde_json::to_value(v).expect("report values serialize"));
        self
    }

    pub fn verdict(&mut self, v: Verdict) -> &mut Self {
        self.verdicts.push(v);
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().all(|v| v.ok) {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for v in &self.verdicts {
            let tag = if v.ok { "pass" } else { "FAIL" };
            out.push_str(&format!("  [{tag}] {}: {}\n", v.check, v.explanation));
        }
        for (k, v) in &self.values {
            out.push_str(&format!("  {k}: {}\n", serde_json::to_string(v).expect("values serialize")));
        }
        out
    }
}

/// What the binary prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Parser, Debug)]
#[command(name = "pervchow", version, about = "Perversity intersection calculus on stratified varieties")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate input documents, echoing their normal form.
    Validate(ValidateArgs),
    /// Check a cycle pattern against a perversity, incidence datum, rank data or family certificate.
    CheckCycle(CheckCycleArgs),
    /// Check a cocycle pattern against a perversity.
    CheckCocycle(CheckCocycleArgs),
    /// Check condition (*, c) for a joint pattern or a pair of cone classes.
    CheckStar(CheckStarArgs),
    /// Proper pushforward of a cycle pattern, or closed-immersion pushforward of a cocycle.
    Push(PushArgs),
    /// Flat pullback of a cycle pattern.
    Pull(PullArgs),
    /// Suspend a stratification and optionally a pattern.
    Suspend(SuspendArgs),
    /// Join two cocycles valued in projective spaces.
    Join(JoinArgs),
    /// Slice a cocycle valued in P^t with t generic hyperplanes.
    Slice(SliceArgs),
    /// Cap a cocycle with a cycle.
    Cap(CapArgs),
    /// Perversity Chow groups of a cone.
    Groups(GroupsArgs),
    /// Intersection product of two cone classes.
    Intersect(PairArgs),
    /// Degree of the product of two cone classes.
    Pairing(PairArgs),
    /// Comparison map between two vertex bounds.
    Compare(CompareArgs),
    /// Smith normal form of an integer matrix.
    Snf(SnfArgs),
    /// Exactness of A -f-> B -g-> C at B.
    Exact(ExactArgs),
    /// Full group, comparison and pairing table of a cone.
    Catalog(CatalogArgs),
    /// Print the input schema of a command.
    Schema(SchemaArgs),
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    perversity: Option<String>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    joint: Option<String>,
    #[arg(long)]
    cocycle: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    ranks: Option<String>,
    #[arg(long)]
    presentation: Option<String>,
    #[arg(long)]
    cone: Option<String>,
    #[arg(long)]
    class: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    map: Option<String>,
}

#[derive(Args, Debug)]
struct CheckCycleArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    pattern: Option<String>,
    /// Perversity or generalized bound.
    #[arg(long)]
    perversity: Option<String>,
    /// Incidence datum: `{"label": bound, ...}`.
    #[arg(long)]
    datum: Option<String>,
    /// Rank profile of a sheaf determining the bound.
    #[arg(long)]
    ranks: Option<String>,
    /// Family certificate, checked against --perversity.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args, Debug)]
struct CheckCocycleArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    cocycle: Option<String>,
    /// Fiber dimensions of a morphism over each stratum, instead of --cocycle.
    #[arg(long)]
    fibers: Option<String>,
    /// Dimension of the source of the morphism given by --fibers.
    #[arg(long)]
    source_dim: Option<u32>,
    #[arg(long)]
    perversity: Option<String>,
    #[arg(long)]
    ranks: Option<String>,
}

#[derive(Args, Debug)]
struct CheckStarArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    joint: Option<String>,
    /// Bound c; defaults to zero, or to the lifted sum of vertex bounds for cone classes.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    cone: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
}

#[derive(Args, Debug)]
struct PushArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    pattern: Option<String>,
    /// Perversity c with W^{i-c_i} = f^{-1}(X^i).
    #[arg(long)]
    c: Option<String>,
    /// Target stratification, when it differs from the source.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    cocycle: Option<String>,
    /// Codimension of the closed immersion for --cocycle.
    #[arg(long)]
    codim: Option<u32>,
    /// Checks the input against p and the output against p*c.
    #[arg(long)]
    perversity: Option<String>,
}

#[derive(Args, Debug)]
struct PullArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    pattern: String,
    /// Relative dimension.
    #[arg(long)]
    e: u32,
    #[arg(long)]
    perversity: Option<String>,
}

#[derive(Args, Debug)]
struct SuspendArgs {
    #[arg(long)]
    strata: String,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value_t = 1)]
    times: u32,
    #[arg(long)]
    perversity: Option<String>,
}

#[derive(Args, Debug)]
struct JoinArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
}

#[derive(Args, Debug)]
struct SliceArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    cocycle: String,
    /// Number of hyperplanes; defaults to the codimension t.
    #[arg(long)]
    count: Option<u32>,
    /// Dimensions of closed sets C_i to meet: `{"1": int|"empty", ...}`.
    #[arg(long)]
    sets: Option<String>,
    #[arg(long)]
    perversity: Option<String>,
}

#[derive(Args, Debug)]
struct CapArgs {
    #[arg(long)]
    strata: Option<String>,
    #[arg(long)]
    cocycle: String,
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
}

#[derive(Args, Debug)]
struct GroupsArgs {
    #[arg(long)]
    cone: String,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    p: Option<u32>,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    cone: Option<String>,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    cone: String,
    #[arg(long)]
    r: i64,
    #[arg(long)]
    from: u32,
    #[arg(long)]
    to: u32,
    #[arg(long)]
    class: Option<String>,
}

#[derive(Args, Debug)]
struct SnfArgs {
    #[arg(long)]
    matrix: String,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// `zobel`, or any cone base such as `P2`.
    name: String,
    /// Compare the table with the known values.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct SchemaArgs {
    command: String,
}

/// Parses `args` (without the program name) and runs the command.
///
/// ```
/// let out = pervchow::cli::run(["snf", "--matrix", "[[2,4],[6,8]]"]);
/// assert_eq!(out.code, 0);
/// assert!(out.stdout.contains("\"diagonal\""));
/// ```
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("pervchow".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return Outcome { code: 0, stdout: e.to_string() };
            }
            return error_outcome("", &CliError::Usage(e.to_string().trim_end().to_string()), false);
        }
    };
    let name = command_name(&cli.command);
    if let Command::Schema(args) = &cli.command {
        return match emit_schema(&args.command) {
            Ok(text) => Outcome { code: 0, stdout: text },
            Err(e) => error_outcome(name, &e, cli.pretty),
        };
    }
    match dispatch(&cli.command) {
        Ok(report) => {
            let stdout = if cli.pretty { report.to_human() } else { report.to_json() };
            Outcome { code: report.exit_code(), stdout }
        }
        Err(e) => error_outcome(name, &e, cli.pretty),
    }
}

fn error_outcome(command: &str, e: &CliError, pretty: bool) -> Outcome {
    let stdout = if pretty {
        format!("error ({}): {e}\n", e.kind())
    } else {
        let doc = json!({
            "schema": SCHEMA_VERSION,
            "command": command,
            "error": {"kind": e.kind(), "message": e.to_string()},
        });
        serde_json::to_string_pretty(&doc).expect("error serializes")
    };
    Outcome { code: 2, stdout }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::CheckCycle(_) => "check-cycle",
        Command::CheckCocycle(_) => "check-cocycle",
        Command::CheckStar(_) => "check-star",
        Command::Push(_) => "push",
        Command::Pull(_) => "pull",
        Command::Suspend(_) => "suspend",
        Command::Join(_) => "join",
        Command::Slice(_) => "slice",
        Command::Cap(_) => "cap",
        Command::Groups(_) => "groups",
        Command::Intersect(_) => "intersect",
        Command::Pairing(_) => "pairing",
        Command::Compare(_) => "compare",
        Command::Snf(_) => "snf",
        Command::Exact(_) => "exact",
        Command::Catalog(_) => "catalog",
        Command::Schema(_) => "schema",
    }
}

/// All command names accepted by `schema`.
pub const COMMANDS: [&str; 17] = [
    "validate",
    "check-cycle",
    "check-cocycle",
    "check-star",
    "push",
    "pull",
    "suspend",
    "join",
    "slice",
    "cap",
    "groups",
    "intersect",
    "pairing",
    "compare",
    "snf",
    "exact",
    "catalog",
];

fn dispatch(command: &Command) -> Result<Report, CliError> {
    let mut report = Report::new(command_name(command));
    match command {
        Command::Validate(a) => validate(a, &mut report)?,
        Command::CheckCycle(a) => check_cycle(a, &mut report)?,
        Command::CheckCocycle(a) => check_cocycle(a, &mut report)?,
        Command::CheckStar(a) => check_star(a, &mut report)?,
        Command::Push(a) => push(a, &mut report)?,
        Command::Pull(a) => pull(a, &mut report)?,
        Command::Suspend(a) => suspend(a, &mut report)?,
        Command::Join(a) => join(a, &mut report)?,
        Command::Slice(a) => slice(a, &mut report)?,
        Command::Cap(a) => cap(a, &mut report)?,
        Command::Groups(a) => groups(a, &mut report)?,
        Command::Intersect(a) => intersect(a, &mut report)?,
        Command::Pairing(a) => pairing(a, &mut report)?,
        Command::Compare(a) => compare(a, &mut report)?,
        Command::Snf(a) => snf(a, &mut report)?,
        Command::Exact(a) => exact(a, &mut report)?,
        Command::Catalog(a) => return catalog_report(&a.name, a.verify),
        Command::Schema(_) => unreachable!("handled before dispatch"),
    }
    Ok(report)
}

fn opt_strata(arg: &Option<String>) -> Result<Option<Stratification>, CliError> {
    arg.as_deref().map(input::strata).transpose()
}

fn need<'a, T>(v: &'a Option<T>, flag: &'static str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or(CliError::Missing(flag))
}

fn pattern(arg: &str, strata: Option<&Stratification>) -> Result<CyclePattern, CliError> {
    let doc: PatternDoc = input::json("pattern", arg)?;
    let s = match (&doc.strata, strata) {
        (Some(own), _) => own.clone(),
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(CliError::Missing("--strata")),
    };
    CyclePattern::from_doc(doc, &s).map_err(|e| CliError::domain("pattern", e))
}

fn cocycle(arg: &str, strata: Option<&Stratification>) -> Result<CocyclePattern, CliError> {
    let doc: CocycleDoc = input::json("cocycle", arg)?;
    let s = match (&doc.strata, strata) {
        (Some(own), _) => own.clone(),
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(CliError::Missing("--strata")),
    };
    CocyclePattern::from_doc(doc, &s).map_err(|e| CliError::domain("cocycle", e))
}

fn ranks_bound(arg: &str) -> Result<GeneralizedBound, CliError> {
    let profile: RankProfile = input::json("ranks", arg)?;
    rank_to_incidence(&profile).map(|(_, b)| b).map_err(|e| CliError::domain("ranks", e))
}

fn strata_doc(s: &Stratification) -> Value {
    serde_json::to_value(s).expect("strata serialize")
}

fn validate(a: &ValidateArgs, report: &mut Report) -> Result<(), CliError> {
    let strata = opt_strata(&a.strata)?;
    let mut seen = false;
    let mut ok = |report: &mut Report, what: &str| {
        seen = true;
        report.verdict(Verdict::single(&format!("valid-{what}"), true, format!("{what} is well formed")));
    };
    if let Some(s) = &strata {
        report.value("strata", strata_doc(s));
        ok(report, "strata");
    }
    if let Some(p) = &a.perversity {
        let depth = match &strata {
            Some(s) => s.depth(),
            None => input::json::<Vec<i64>>("perversity", p)?.len(),
        };
        let b = input::bound(p, depth)?;
        report.value("bound", &b).value("isPerversity", b.to_perversity().is_some());
        ok(report, "perversity");
    }
    if let Some(p) = &a.pattern {
        report.value("pattern", pattern(p, strata.as_ref())?.to_doc());
        ok(report, "pattern");
    }
    if let Some(j) = &a.joint {
        let doc: JointDoc = input::json("joint", j)?;
        let s = strata.as_ref().ok_or(CliError::Missing("--strata"))?;
        let jp = JointPattern::from_doc(doc, s).map_err(|e| CliError::domain("joint", e))?;
        report.value("joint", jp.to_doc());
        ok(report, "joint");
    }
    if let Some(c) = &a.cocycle {
        report.value("cocycle", cocycle(c, strata.as_ref())?.to_doc());
        ok(report, "cocycle");
    }
    if let Some(f) = &a.family {
        let doc: FamilyDoc = input::json("family", f)?;
        let s = strata.as_ref().ok_or(CliError::Missing("--strata"))?;
        FamilyCertificate::from_doc(doc.clone(), s).map_err(|e| CliError::domain("family", e))?;
        report.value("family", doc);
        ok(report, "family");
    }
    if let Some(r) = &a.ranks {
        report.value("bound", ranks_bound(r)?);
        ok(report, "ranks");
    }
    if let Some(p) = &a.presentation {
        let doc: crate::chow::PresentationDoc = input::json("presentation", p)?;
        let ring = crate::chow::ChowRingPresentation::from_doc(doc).map_err(|e| CliError::domain("presentation", e))?;
        report.value("presentation", ring.to_doc());
        ok(report, "presentation");
    }
    let cone = a.cone.as_deref().map(input::cone).transpose()?;
    if let Some(c) = &cone {
        report.value("cone", json!({"base": c.base().name(), "dim": c.dim()}));
        ok(report, "cone");
    }
    if let Some(k) = &a.class {
        let (_, class) = input::class(k, cone.as_ref())?;
        report.value("class", class_value(&class));
        ok(report, "class");
    }
    if let Some(g) = &a.group {
        let group: crate::abgroup::FpAbelianGroup = input::json("group", g)?;
        let factors = group.invariant_factors().map_err(|e| CliError::domain("group", e))?;
        report.value("group", &group).value("factors", factors.to_string());
        ok(report, "group");
    }
    if let Some(m) = &a.map {
        let map: GroupMap = input::json("map", m)?;
        report.value("map", &map);
        ok(report, "map");
    }
    if !seen {
        return Err(CliError::Missing("a document to validate"));
    }
    Ok(())
}

fn check_cycle(a: &CheckCycleArgs, report: &mut Report) -> Result<(), CliError> {
    let strata = opt_strata(&a.strata)?;
    if let Some(f) = &a.family {
        let s = strata.as_ref().ok_or(CliError::Missing("--strata"))?;
        let doc: FamilyDoc = input::json("family", f)?;
        let cert = FamilyCertificate::from_doc(doc, s).map_err(|e| CliError::domain("family", e))?;
        let p = input::perversity(need(&a.perversity, "--perversity")?, s.depth())?;
        report.value("perversity", &p);
        report.verdict(cert.explain(&p).map_err(|e| CliError::domain("family", e))?);
        if a.pattern.is_none() {
            return Ok(());
        }
    }
    let pat = pattern(need(&a.pattern, "--pattern")?, strata.as_ref())?;
    let depth = pat.strata().depth();
    let mut any = false;
    if let (Some(p), None) = (&a.perversity, &a.family) {
        let b = input::bound(p, depth)?;
        report.value("bound", &b);
        report.verdict(pat.explain_perversity(&b).map_err(|e| CliError::domain("pattern", e))?);
        any = true;
    }
    if let Some(r) = &a.ranks {
        let b = ranks_bound(r)?;
        report.value("rankBound", &b);
        report.verdict(pat.explain_perversity(&b).map_err(|e| CliError::domain("pattern", e))?);
        any = true;
    }
    if let Some(d) = &a.datum {
        let datum: BTreeMap<String, u32> = input::json("datum", d)?;
        report.verdict(pat.explain_incidence_datum(&datum).map_err(|e| CliError::domain("datum", e))?);
        any = true;
    }
    if !any && a.family.is_none() {
        return Err(CliError::Missing("--perversity, --ranks or --datum"));
    }
    report.value("pattern", pat.to_doc());
    Ok(())
}

fn check_cocycle(a: &CheckCocycleArgs, report: &mut Report) -> Result<(), CliError> {
    let strata = opt_strata(&a.strata)?;
    let c = match (&a.cocycle, &a.fibers) {
        (Some(c), _) => cocycle(c, strata.as_ref())?,
        (None, Some(f)) => {
            let s = strata.as_ref().ok_or(CliError::Missing("--strata"))?;
            let fibers: Vec<u32> = input::json("fibers", f)?;
            let n = *need(&a.source_dim, "--source-dim")?;
            morphism_fiber_pattern(s, &fibers, n).map_err(|e| CliError::domain("fibers", e))?
        }
        (None, None) => return Err(CliError::Missing("--cocycle or --fibers")),
    };
    let depth = c.strata().depth();
    let bound = match (&a.perversity, &a.ranks) {
        (Some(p), _) => input::bound(p, depth)?,
        (None, Some(r)) => ranks_bound(r)?,
        (None, None) => return Err(CliError::Missing("--perversity or --ranks")),
    };
    report.verdict(c.explain_cocycle(&bound).map_err(|e| CliError::domain("cocycle", e))?);
    report.value("bound", &bound).value("cocycle", c.to_doc());
    Ok(())
}

fn class_value(k: &ConeClass) -> Value {
    json!({
        "r": k.r(),
        "p": k.p(),
        "mode": k.mode(),
        "payload": k.payload().coeffs(),
    })
}

fn check_star(a: &CheckStarArgs, report: &mut Report) -> Result<(), CliError> {
    let (joint, default_c) = match (&a.joint, &a.a, &a.b) {
        (Some(j), _, _) => {
            let s = opt_strata(&a.strata)?.ok_or(CliError::Missing("--strata"))?;
            let doc: JointDoc = input::json("joint", j)?;
            let jp = JointPattern::from_doc(doc, &s).map_err(|e| CliError::domain("joint", e))?;
            let zero = GeneralizedBound::zero(s.depth()).map_err(|e| CliError::domain("bound", e))?;
            (jp, zero)
        }
        (None, Some(x), Some(y)) => {
            let cone = a.cone.as_deref().map(input::cone).transpose()?;
            let (cone, ka) = input::class(x, cone.as_ref())?;
            let (_, kb) = input::class(y, Some(&cone))?;
            let jp = ka.joint_pattern(&kb).map_err(|e| CliError::domain("class", e))?;
            let c = cone.lift(ka.p()).add(&cone.lift(kb.p())).map_err(|e| CliError::domain("bound", e))?;
            (jp, c)
        }
        _ => return Err(CliError::Missing("--joint, or --a and --b")),
    };
    let c = match &a.c {
        Some(c) => input::bound(c, joint.a().strata().depth())?,
        None => default_c,
    };
    report.verdict(joint.explain_star(&c).map_err(|e| CliError::domain("joint", e))?);
    report.value("c", &c).value("joint", joint.to_doc());
    Ok(())
}

fn push(a: &PushArgs, report: &mut Report) -> Result<(), CliError> {
    let strata = opt_strata(&a.strata)?;
    if let Some(c) = &a.cocycle {
        let co = cocycle(c, strata.as_ref())?;
        let pushed = co.push_closed_immersion(*need(&a.codim, "--codim")?);
        if let Some(p) = &a.perversity {
            let b = input::bound(p, co.strata().depth())?;
            report.verdict(named(co.explain_cocycle(&b), "input")?);
            report.verdict(named(pushed.explain_cocycle(&b), "output")?);
        }
        report.value("cocycle", pushed.to_doc());
        return Ok(());
    }
    let pat = pattern(need(&a.pattern, "--pattern or --cocycle")?, strata.as_ref())?;
    let depth = pat.strata().depth();
    let c = input::perversity(need(&a.c, "--c")?, depth)?;
    let pushed = match &a.target {
        Some(t) => pat.proper_pushforward_to(&c, &input::strata(t)?),
        None => pat.proper_pushforward(&c),
    }
    .map_err(|e| CliError::domain("pattern", e))?;
    if let Some(p) = &a.perversity {
        let p = input::perversity(p, depth)?;
        let composed = p.star_compose(&c).map_err(|e| CliError::domain("bound", e))?;
        report.verdict(named(pat.explain_perversity(&p.as_bound()), "input")?);
        report.verdict(named(pushed.explain_perversity(&composed), "output")?);
        report.value("outputBound", &composed);
    }
    report.value("pattern", pushed.to_doc());
    if a.target.is_some() {
        report.value("strata", strata_doc(pushed.strata()));
    }
    Ok(())
}

fn named<E: Display>(v: Result<Verdict, E>, name: &str) -> Result<Verdict, CliError> {
    let mut v = v.map_err(|e| CliError::domain("check", e))?;
    v.check = format!("{}-{name}", v.check);
    Ok(v)
}

fn pull(a: &PullArgs, report: &mut Report) -> Result<(), CliError> {
    let pat = pattern(&a.pattern, opt_strata(&a.strata)?.as_ref())?;
    let pulled = pat.flat_pullback(a.e);
    if let Some(p) = &a.perversity {
        let b = input::bound(p, pat.strata().depth())?;
        report.verdict(named(pat.explain_perversity(&b), "input")?);
        report.verdict(named(pulled.explain_perversity(&b), "output")?);
    }
    report.value("pattern", pulled.to_doc()).value("strata", strata_doc(pulled.strata()));
    Ok(())
}

fn suspend(a: &SuspendArgs, report: &mut Report) -> Result<(), CliError> {
    let mut strata = input::strata(&a.strata)?;
    let mut pat = a.pattern.as_deref().map(|p| pattern(p, Some(&strata))).transpose()?;
    let original = pat.clone();
    for _ in 0..a.times {
        strata = strata.suspend();
        pat = pat.map(|p| p.suspend());
    }
    if let (Some(p), Some(before), Some(after)) = (&a.perversity, &original, &pat) {
        let b = input::bound(p, strata.depth())?;
        report.verdict(named(before.explain_perversity(&b), "input")?);
        report.verdict(named(after.explain_perversity(&b), "output")?);
    }
    report.value("strata", strata_doc(&strata));
    if let Some(p) = pat {
        report.value("pattern", p.to_doc());
    }
    Ok(())
}

fn join(a: &JoinArgs, report: &mut Report) -> Result<(), CliError> {
    let strata = opt_strata(&a.strata)?;
    let x = cocycle(&a.a, strata.as_ref())?;
    let y = cocycle(&a.b, strata.as_ref())?;
    let j = x.join(&y).map_err(|e| CliError::domain("join", e))?;
    let depth = x.strata().depth();
    if let (Some(p), Some(q)) = (&a.p, &a.q) {
        let (p, q) = (input::bound(p, depth)?, input::bound(q, depth)?);
        let sum = p.add(&q).map_err(|e| CliError::domain("bound", e))?;
        report.verdict(named(x.explain_cocycle(&p), "a")?);
        report.verdict(named(y.explain_cocycle(&q), "b")?);
        report.verdict(named(j.explain_cocycle(&sum), "join")?);
        report.value("bound", &sum);
    }
    report.value("cocycle", j.to_doc());
    Ok(())
}

fn slice(a: &SliceArgs, report: &mut Report) -> Result<(), CliError> {
    let co = cocycle(&a.cocycle, opt_strata(&a.strata)?.as_ref())?;
    let count = a.count.unwrap_or(co.t());
    let cut = co.slice_with_hyperplanes(count).map_err(|e| CliError::domain("slice", e))?;
    if let Some(sets) = &a.sets {
        let map: BTreeMap<String, Incidence> = input::json("sets", sets)?;
        let sets = from_index_map(&map, co.strata().depth()).map_err(|e| CliError::domain("sets", e))?;
        let meet = co.slice_meeting(count, &sets).map_err(|e| CliError::domain("slice", e))?;
        report.value("meeting", crate::cycles::to_index_map(&meet));
    }
    if let Some(p) = &a.perversity {
        let b = input::bound(p, co.strata().depth())?;
        report.verdict(named(co.explain_cocycle(&b), "input")?);
        report.verdict(named(cut.explain_perversity(&b), "output")?);
    }
    report.value("pattern", cut.to_doc());
    Ok(())
}

fn cap(a: &CapArgs, report: &mut Report) -> Result<(), CliError> {
    let strata = opt_strata(&a.strata)?;
    let co = cocycle(&a.cocycle, strata.as_ref())?;
    let pat = pattern(&a.pattern, strata.as_ref().or(Some(co.strata())))?;
    let capped = co.cap(&pat).map_err(|e| CliError::domain("cap", e))?;
    let depth = co.strata().depth();
    if let (Some(p), Some(q)) = (&a.p, &a.q) {
        let (p, q) = (input::bound(p, depth)?, input::bound(q, depth)?);
        let sum = p.add(&q).map_err(|e| CliError::domain("bound", e))?;
        report.verdict(named(co.explain_cocycle(&p), "cocycle")?);
        report.verdict(named(pat.explain_perversity(&q), "cycle")?);
        report.verdict(named(capped.explain_perversity(&sum), "cap")?);
        report.value("bound", &sum);
    }
    report.value("pattern", capped.to_doc());
    Ok(())
}

fn group_value(cone: &ConeVariety, r: u32, p: u32) -> Result<Value, CliError> {
    let g = cone.chow_group(r.into(), p).map_err(|e| CliError::domain("groups", e))?;
    let factors = g.invariant_factors().map_err(|e| CliError::domain("groups", e))?;
    Ok(json!({
        "r": r,
        "p": p,
        "mode": cone.mode(r, p),
        "group": g,
        "factors": factors.to_string(),
    }))
}

fn groups(a: &GroupsArgs, report: &mut Report) -> Result<(), CliError> {
    let cone = input::cone(&a.cone)?;
    report.value("cone", json!({"base": cone.base().name(), "dim": cone.dim()}));
    match (a.r, a.p) {
        (Some(r), Some(p)) => {
            cone.chow_group(r, p).map_err(|e| CliError::domain("groups", e))?;
            report.value("group", group_value(&cone, r as u32, p)?);
        }
        (None, None) => {
            let d = cone.dim() as u32;
            let table = (0..=d)
                .flat_map(|r| (0..d).map(move |p| (r, p)))
                .map(|(r, p)| group_value(&cone, r, p))
                .collect::<Result<Vec<_>, _>>()?;
            report.value("groups", table);
        }
        _ => return Err(CliError::Missing("both --r and --p, or neither")),
    }
    Ok(())
}

fn case_of(a: &ConeClass, b: &ConeClass) -> u32 {
    match (a.mode(), b.mode()) {
        (Mode::Allowed, Mode::Allowed) => 1,
        (Mode::Disallowed, Mode::Disallowed) => 3,
        _ => 2,
    }
}

fn intersect(a: &PairArgs, report: &mut Report) -> Result<(), CliError> {
    let cone = a.cone.as_deref().map(input::cone).transpose()?;
    let (cone, x) = input::class(&a.a, cone.as_ref())?;
    let (_, y) = input::class(&a.b, Some(&cone))?;
    let product = x.intersect(&y).map_err(|e| CliError::domain("intersect", e))?;
    let joint = x.joint_pattern(&y).map_err(|e| CliError::domain("intersect", e))?;
    let c = cone.lift(x.p()).add(&cone.lift(y.p())).map_err(|e| CliError::domain("bound", e))?;
    report.verdict(joint.explain_star(&c).map_err(|e| CliError::domain("intersect", e))?);
    report.verdict(named(product.to_pattern().explain_perversity(&c), "result")?);
    report.value("case", case_of(&x, &y)).value("class", class_value(&product));
    Ok(())
}

fn pairing(a: &PairArgs, report: &mut Report) -> Result<(), CliError> {
    let cone = a.cone.as_deref().map(input::cone).transpose()?;
    let (cone, x) = input::class(&a.a, cone.as_ref())?;
    let (_, y) = input::class(&a.b, Some(&cone))?;
    let degree = x.degree_pairing(&y).map_err(|e| CliError::domain("pairing", e))?;
    report.value("case", case_of(&x, &y)).value("degree", degree);
    Ok(())
}

fn compare(a: &CompareArgs, report: &mut Report) -> Result<(), CliError> {
    let cone = input::cone(&a.cone)?;
    let map = cone.comparison_map(a.r, a.from, a.to).map_err(|e| CliError::domain("compare", e))?;
    if let Some(k) = &a.class {
        let (_, class) = input::class(k, Some(&cone))?;
        if i64::from(class.r()) != a.r || class.p() != a.from {
            return Err(CliError::Input { what: "class", message: format!("class is not in A_{{{},{}}}", a.r, a.from) });
        }
        let image = class.compare_to(a.to).map_err(|e| CliError::domain("compare", e))?;
        report.value("class", class_value(&image));
    }
    report.value("map", &map);
    Ok(())
}

fn snf(a: &SnfArgs, report: &mut Report) -> Result<(), CliError> {
    let rows: Vec<Vec<i64>> = input::json("matrix", &a.matrix)?;
    let m = IntMatrix::from_nested(rows).map_err(|e| CliError::domain("matrix", e))?;
    let form = smith_normal_form(&m).map_err(|e| CliError::domain("snf", e))?;
    let check = form
        .u
        .mul(&m)
        .and_then(|um| um.mul(&form.v))
        .map_err(|e| CliError::domain("snf", e))?;
    report.verdict(Verdict::single("snf", check == form.s, "U·M·V = S"));
    report
        .value("diagonal", form.diagonal())
        .value("rank", form.rank())
        .value("u", &form.u)
        .value("s", &form.s)
        .value("v", &form.v);
    Ok(())
}

fn exact(a: &ExactArgs, report: &mut Report) -> Result<(), CliError> {
    let f: GroupMap = input::json("map f", &a.f)?;
    let g: GroupMap = input::json("map g", &a.g)?;
    let ok = is_exact_at_middle(&f, &g).map_err(|e| CliError::domain("exact", e))?;
    let composite_zero = g.compose(&f).and_then(|gf| gf.is_zero()).map_err(|e| CliError::domain("exact", e))?;
    let explanation = match (ok, composite_zero) {
        (true, _) => "image of f equals kernel of g".to_string(),
        (false, false) => "g∘f is not zero".to_string(),
        (false, true) => "g∘f = 0 but ker g is larger than im f".to_string(),
    };
    report.verdict(Verdict::single("exact", ok, explanation));
    report.value("compositeZero", composite_zero);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_json(args: &[&str]) -> (i32, Value) {
        let out = run(args.iter().copied());
        let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
        (out.code, v)
    }

    #[test]
    fn check_cycle_zobel_line() {
        let l = r#"{"dim":1,"incidence":{"1":"empty","2":"empty","3":"empty"}}"#;
        let (code, v) = run_json(&["check-cycle", "--pattern", l, "--perversity", "[0,0,0]", "--strata", "vertex3"]);
        assert_eq!(code, 0);
        assert_eq!(v["verdicts"][0]["ok"], true);
        let n = r#"{"dim":1,"incidence":{"1":0,"2":0,"3":0}}"#;
        let (code, v) = run_json(&["check-cycle", "--pattern", n, "--perversity", "zero", "--strata", "vertex3"]);
        assert_eq!(code, 1);
        assert!(v["verdicts"][0]["explanation"].as_str().unwrap().contains("1-3+0 = -2 fails"));
    }

    #[test]
    fn pairing_example() {
        let (code, v) = run_json(&["pairing", "--cone", "zobel", "--a", "allowed:2:(1,0)", "--b", "allowed:2:(0,1)"]);
        assert_eq!(code, 0);
        assert_eq!(v["values"]["degree"], 1);
        let (code, v) = run_json(&["pairing", "--cone", "zobel", "--a", "allowed:2:2:(1,0)", "--b", "N"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "domain");
    }

    #[test]
    fn snf_example() {
        let (code, v) = run_json(&["snf", "--matrix", "[[2,4],[6,8]]"]);
        assert_eq!(code, 0);
        assert_eq!(v["values"]["diagonal"], json!([2, 4]));
    }

    #[test]
    fn malformed_input() {
        let (code, v) = run_json(&["snf", "--matrix", "[[1,2],[3]]"]);
        assert_eq!(code, 2);
        assert_eq!(v["schema"], 1);
        let (code, v) = run_json(&["check-cycle", "--pattern", "{", "--strata", "vertex3", "--perversity", "zero"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "input");
        let (code, v) = run_json(&["frobnicate"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "usage");
    }

    #[test]
    fn pretty_output() {
        let out = run(["--pretty", "pairing", "--cone", "zobel", "--a", "D", "--b", "M"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("degree: 1"), "{}", out.stdout);
    }
}
