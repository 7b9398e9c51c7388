//! Command-line front end: argument parsing, report assembly and rendering.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use ascurves::asgenus::abelian_invariants;
use ascurves::families::{expected_invariants, verify_family_identities, Family, FamilySpec};
use ascurves::nfalg::{check_relations_and_structure, family_closure, NfCtx};
use ascurves::zeta::{place_count, zeta_model, zeta_report};
use ascurves::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Ok,
    CheckFailed,
    UsageError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::UsageError => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }
}

/// One report per invocation. Keys are always present; `null` where a
/// command does not produce the value.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub family: Option<String>,
    pub q: Option<u64>,
    pub p: Option<u32>,
    pub n: Option<u32>,
    pub genus: Option<u64>,
    pub p_rank: Option<u64>,
    pub ordinary: Option<bool>,
    pub irreducible: Option<bool>,
    pub order: Option<u64>,
    pub relations: Vec<Check>,
    pub counts: Option<Vec<(u32, u64)>>,
    pub l_poly: Option<Vec<i64>>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl Report {
    fn for_family(command: &str, family: Family, q: u64) -> Self {
        let (p, n) = family.check_q(q).map_or((None, None), |(p, n)| (Some(p), Some(n)));
        Report {
            command: command.into(),
            family: Some(family.name().into()),
            q: Some(q),
            p,
            n,
            ..Default::default()
        }
    }

    /// `ok` iff every check passed; never downgrades a usage error.
    fn settle(mut self) -> Self {
        if self.status == Status::Ok && self.relations.iter().any(|c| !c.passed) {
            self.status = Status::CheckFailed;
        }
        self
    }

    fn failed(mut self, e: &Error) -> Self {
        self.status = match e {
            Error::Usage(_) | Error::InsufficientField { .. } | Error::Unsupported(_) => {
                Status::UsageError
            }
            _ => Status::CheckFailed,
        };
        self.message = Some(e.to_string());
        self
    }
}

#[derive(Parser, Debug)]
#[command(name = "ascurves", version, about = "Invariants, identities, automorphisms and zeta data of Artin-Schreier curve families")]
pub struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Target {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub q: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the catalogued families.
    List,
    /// Genus, p-rank and irreducibility from the character decomposition.
    Invariants(Target),
    /// Check the explicit identities attached to a family.
    Identities(Target),
    /// Verify automorphism generators and close the group they generate.
    Aut {
        #[command(flatten)]
        target: Target,
        /// Abort the closure beyond this many elements.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Rational-place counts and the L-polynomial.
    Zeta {
        #[command(flatten)]
        target: Target,
        /// Count over extensions of degree 1..=M (default: the genus).
        #[arg(long)]
        max_m: Option<u32>,
    },
    /// Run the whole verification suite.
    Check {
        #[arg(long, value_enum, default_value_t = Profile::Quick)]
        profile: Profile,
        /// Mark checks whose name contains this text as failed (for testing
        /// the failure path).
        #[arg(long, hide = true)]
        inject_failure: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Quick,
    Full,
}

fn resolve(t: &Target) -> Result<(Family, u64), Error> {
    let family: Family = t.family.parse()?;
    family.check_q(t.q)?;
    Ok((family, t.q))
}

macro_rules! try_report {
    ($report:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return $report.failed(&err),
        }
    };
}

pub fn list() -> Report {
    let families: Vec<serde_json::Value> = Family::ALL
        .iter()
        .map(|f| {
            serde_json::json!({
                "family": f.name(),
                "parity": format!("{:?}", f.parity()).to_lowercase(),
                "layers": f.layers(),
                "generators": f.has_generators(),
            })
        })
        .collect();
    Report {
        command: "list".into(),
        details: Some(serde_json::Value::Array(families)),
        ..Default::default()
    }
}

pub fn invariants(family: Family, q: u64) -> Report {
    let mut rep = Report::for_family("invariants", family, q);
    let ctx = try_report!(rep, family.field(q));
    let fs = try_report!(rep, FamilySpec::build(&ctx, family, q));
    let inv = try_report!(rep, abelian_invariants(&fs.spec));
    let (g, gamma) = expected_invariants(family, q);
    rep.genus = Some(inv.genus);
    rep.p_rank = Some(inv.p_rank);
    rep.ordinary = Some(inv.ordinary);
    rep.irreducible = Some(inv.irreducible);
    rep.relations = vec![
        Check::new(format!("genus = {g}"), inv.genus == g),
        Check::new(format!("p-rank = {gamma}"), inv.p_rank == gamma),
        Check::new("irreducible", inv.irreducible),
    ];
    rep.details = serde_json::to_value(&inv.characters).ok();
    rep.settle()
}

pub fn identities(family: Family, q: u64) -> Report {
    let mut rep = Report::for_family("identities", family, q);
    let ctx = try_report!(rep, family.field(q));
    let fs = try_report!(rep, FamilySpec::build(&ctx, family, q));
    let ids = try_report!(rep, verify_family_identities(&fs));
    rep.relations = ids
        .checks
        .iter()
        .map(|c| match &c.detail {
            Some(d) => Check::new(format!("{} [{d}]", c.name), c.passed),
            None => Check::new(c.name.clone(), c.passed),
        })
        .collect();
    rep.settle()
}

pub fn aut(family: Family, q: u64, bound: Option<u64>) -> Report {
    let mut rep = Report::for_family("aut", family, q);
    if bound == Some(0) {
        return rep.failed(&Error::Usage("--bound must be positive".into()));
    }
    let ctx = try_report!(rep, family.field(q));
    let fs = try_report!(rep, FamilySpec::build(&ctx, family, q));
    let nf = try_report!(rep, NfCtx::new(&fs.spec));
    let closure = try_report!(rep, family_closure(&fs, &nf, bound));
    let st = try_report!(rep, check_relations_and_structure(&fs, &nf));
    let g = &closure.report;
    rep.order = Some(g.order);
    let mut checks = vec![
        Check::new("generators verify", st.generators_verified),
        Check::new("closure complete", g.closure_complete),
        Check::new("E normal", g.e_normal && st.e_normal),
        Check::new("E meets H trivially", g.e_h_trivial_intersection),
        Check::new("order = |E| * |base action|", g.order_consistent),
    ];
    if let Some(ok) = st.base_action_over_fq {
        checks.push(Check::new("base action has F_q coefficients", ok));
    }
    checks.extend(st.relations.iter().map(|r| Check::new(r.name.clone(), r.passed)));
    rep.relations = checks;
    rep.details = serde_json::to_value(g).ok();
    rep.settle()
}

pub fn zeta(family: Family, q: u64, max_m: Option<u32>) -> Report {
    let mut rep = Report::for_family("zeta", family, q);
    if max_m == Some(0) {
        return rep.failed(&Error::Usage("--max-m must be positive".into()));
    }
    let ctx = try_report!(rep, family.field(q));
    let fs = try_report!(rep, FamilySpec::build(&ctx, family, q));
    let z = try_report!(rep, zeta_report(&fs, max_m));
    rep.genus = Some(z.genus);
    rep.p_rank = Some(z.p_rank);
    rep.ordinary = Some(z.genus == z.p_rank);
    rep.counts = Some(z.counts.counts.clone());
    rep.l_poly = z.l_poly.as_ref().map(|l| l.coeffs.clone());
    rep.relations = vec![
        Check::new("Weil bound", z.weil_ok),
        Check::new("places of each degree nonnegative", z.places_nonnegative),
    ];
    if z.counts.counts.len() as u64 >= z.genus {
        rep.relations.push(Check::new("L-polynomial reconstructed", z.l_poly.is_some()));
        rep.relations.push(Check::new(
            "L-polynomial invariants match",
            z.oracle == Some((z.genus, z.p_rank)),
        ));
    }
    rep.message = z.error.clone();
    rep.details = Some(serde_json::json!({ "base": z.counts.base, "oracle": z.oracle }));
    rep.settle()
}

/// One unit of `check`.
#[derive(Clone, Debug)]
enum Job {
    Invariants(Family, u64),
    Identities(Family, u64),
    Aut(Family, u64),
    Zeta(Family, u64),
    ExampleCount,
}

impl Job {
    fn key(&self) -> String {
        match self {
            Job::Invariants(f, q) => format!("invariants {f} q={q:02}"),
            Job::Identities(f, q) => format!("identities {f} q={q:02}"),
            Job::Aut(f, q) => format!("aut {f} q={q:02}"),
            Job::Zeta(f, q) => format!("zeta {f} q={q:02}"),
            Job::ExampleCount => "zeta conic_one_nonrational q=03 count over F_3^6".into(),
        }
    }

    fn run(&self) -> Vec<Check> {
        let sub = |r: Report| -> Vec<Check> {
            let mut out: Vec<Check> = r.relations;
            if let Some(msg) = r.message.filter(|_| r.status != Status::Ok) {
                out.push(Check::new(msg, false));
            }
            if out.is_empty() && r.status != Status::Ok {
                out.push(Check::new("command failed", false));
            }
            out
        };
        match *self {
            Job::Invariants(f, q) => sub(invariants(f, q)),
            Job::Identities(f, q) => sub(identities(f, q)),
            Job::Aut(f, q) => sub(aut(f, q, None)),
            Job::Zeta(f, q) => sub(zeta(f, q, None)),
            Job::ExampleCount => {
                let n = Family::ConicOneNonrational.field(3).and_then(|ctx| {
                    let fs = FamilySpec::build(&ctx, Family::ConicOneNonrational, 3)?;
                    place_count(&zeta_model(&fs)?, 3)
                });
                vec![Check::new(
                    format!("N = 3^6 + 1 = 730 (got {})", n.as_ref().map_or("error".into(), |v| v.to_string())),
                    n.ok() == Some(730),
                )]
            }
        }
    }
}

fn jobs(profile: Profile) -> Vec<Job> {
    let mut out = Vec::new();
    for f in Family::ALL {
        for q in [2u64, 3, 4, 5] {
            if f.check_q(q).is_err() {
                continue;
            }
            out.push(Job::Invariants(f, q));
            out.push(Job::Identities(f, q));
            if f.has_generators() {
                out.push(Job::Aut(f, q));
            }
        }
        if profile == Profile::Full {
            for q in [7u64, 8, 9] {
                if f.check_q(q).is_ok() {
                    out.push(Job::Invariants(f, q));
                }
            }
        }
    }
    if profile == Profile::Full {
        for (f, q) in [
            (Family::Zieve, 2),
            (Family::SingerEven, 2),
            (Family::Singer, 3),
            (Family::ArtinMumford, 2),
            (Family::ConicParabola, 3),
        ] {
            out.push(Job::Zeta(f, q));
        }
        out.push(Job::ExampleCount);
    }
    out
}

/// Runs every job of the profile in parallel and merges by job key.
pub fn run_all(profile: Profile, inject_failure: Option<&str>) -> Report {
    let mut results: Vec<(String, Vec<Check>)> =
        jobs(profile).par_iter().map(|j| (j.key(), j.run())).collect();
    results.sort_by(|a, b| a.0.cmp(&b.0));
    let mut relations = Vec::new();
    for (key, checks) in results {
        for c in checks {
            let name = format!("{key}: {}", c.name);
            let forced = inject_failure.is_some_and(|s| name.contains(s));
            relations.push(Check::new(name, c.passed && !forced));
        }
    }
    Report {
        command: format!(
            "check --profile {}",
            if profile == Profile::Full { "full" } else { "quick" }
        ),
        relations,
        ..Default::default()
    }
    .settle()
}

pub fn dispatch(cli: &Cli) -> Report {
    let with = |t: &Target, cmd: &str, f: &dyn Fn(Family, u64) -> Report| match resolve(t) {
        Ok((fam, q)) => f(fam, q),
        Err(e) => Report {
            command: cmd.into(),
            family: Some(t.family.clone()),
            q: Some(t.q),
            ..Default::default()
        }
        .failed(&e),
    };
    match &cli.command {
        Command::List => list(),
        Command::Invariants(t) => with(t, "invariants", &invariants),
        Command::Identities(t) => with(t, "identities", &identities),
        Command::Aut { target, bound } => with(target, "aut", &|f, q| aut(f, q, *bound)),
        Command::Zeta { target, max_m } => with(target, "zeta", &|f, q| zeta(f, q, *max_m)),
        Command::Check {
            profile,
            inject_failure,
        } => run_all(*profile, inject_failure.as_deref()),
    }
}

/// Parses `argv` (program name first) and runs the command. Help and
/// version requests come back as `Ok` with the text in `message`.
pub fn run<I, T>(argv: I) -> (i32, Report, bool)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    match Cli::try_parse_from(&args) {
        Ok(cli) => {
            let rep = dispatch(&cli);
            (rep.status.exit_code(), rep, cli.json)
        }
        Err(e) => {
            use clap::error::ErrorKind;
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Status::Ok,
                _ => Status::UsageError,
            };
            let rep = Report {
                command: "parse".into(),
                status,
                message: Some(e.render().to_string()),
                ..Default::default()
            };
            (status.exit_code(), rep, json)
        }
    }
}

fn opt<T: ToString>(v: &Option<T>) -> Option<String> {
    v.as_ref().map(ToString::to_string)
}

/// Plain-text rendering.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    if r.command == "parse" {
        return r.message.clone().unwrap_or_default();
    }
    if r.command == "list" {
        for f in Family::ALL {
            let _ = writeln!(
                s,
                "{:<24} parity={:<5} layers={} generators={}",
                f.name(),
                format!("{:?}", f.parity()).to_lowercase(),
                f.layers(),
                if f.has_generators() { "yes" } else { "no" }
            );
        }
        return s;
    }
    let _ = writeln!(s, "command: {}", r.command);
    if let (Some(f), Some(q)) = (&r.family, r.q) {
        match (r.p, r.n) {
            (Some(p), Some(n)) => {
                let _ = writeln!(s, "family: {f}, q = {q} (p = {p}, n = {n})");
            }
            _ => {
                let _ = writeln!(s, "family: {f}, q = {q}");
            }
        }
    }
    for (k, v) in [
        ("genus", opt(&r.genus)),
        ("p-rank", opt(&r.p_rank)),
        ("ordinary", opt(&r.ordinary)),
        ("irreducible", opt(&r.irreducible)),
        ("order", opt(&r.order)),
    ] {
        if let Some(v) = v {
            let _ = writeln!(s, "{k}: {v}");
        }
    }
    if let Some(c) = &r.counts {
        let list: Vec<String> = c.iter().map(|(m, n)| format!("N_{m} = {n}")).collect();
        let _ = writeln!(s, "counts: {}", list.join(", "));
    }
    if let Some(l) = &r.l_poly {
        let _ = writeln!(s, "L(T) coefficients: {l:?}");
    }
    for c in &r.relations {
        let _ = writeln!(s, "  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
    }
    if let Some(m) = &r.message {
        let _ = writeln!(s, "note: {m}");
    }
    let _ = writeln!(
        s,
        "status: {}",
        serde_json::to_value(r.status)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    );
    s
}

pub fn render(r: &Report, json: bool) -> String {
    if json {
        serde_json::to_string(r).expect("report serializes")
    } else {
        render_text(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settle_downgrades_on_failed_check() {
        let rep = Report {
            relations: vec![Check::new("a", true), Check::new("b", false)],
            ..Default::default()
        };
        assert_eq!(rep.settle().status, Status::CheckFailed);
        let usage = Report::default().failed(&Error::Usage("x".into()));
        assert_eq!(usage.settle().status, Status::UsageError);
    }

    #[test]
    fn full_profile_extends_quick() {
        let quick: Vec<String> = jobs(Profile::Quick).iter().map(Job::key).collect();
        let full: Vec<String> = jobs(Profile::Full).iter().map(Job::key).collect();
        assert!(quick.iter().all(|k| full.contains(k)));
        assert!(full.len() > quick.len());
    }

    #[test]
    fn text_render_names_failures() {
        let rep = Report {
            command: "identities".into(),
            relations: vec![Check::new("plane model", false)],
            status: Status::CheckFailed,
            ..Default::default()
        };
        let s = render_text(&rep);
        assert!(s.contains("[FAIL] plane model"));
        assert!(s.ends_with("status: check_failed\n"));
    }
}
