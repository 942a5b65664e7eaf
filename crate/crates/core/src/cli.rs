//! The `clone-forge` command line: loads inputs, runs checkers and
//! translators, and prints a deterministic report.
//!
//! Exit codes: 0 when every check passes, 1 on a law failure, 2 on an input
//! or validation error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bridge::{
    c_functor, roundtrip_alg, roundtrip_clone, s_functor, s_on_hom, variable_family,
};
use crate::clone::{
    builtin_clone, clone_laws_check, enumerate_theory_homs, finite_clone_of_algebra,
    theory_laws_check, AbstractClone, Budget, BuiltinClone, FiniteAlgebra, FiniteClone, FreeClone,
    Signature,
};
use crate::corpus;
use crate::error::Error;
use crate::fin_cat::{check_symmetric_monoid, generators, FinMap};
use crate::presheaf::{check_delta_laws, check_functoriality, representable_v, Presheaf};
use crate::report::{CheckResult, Report, Sampling, Status};
use crate::subst::{
    check_diagrams, check_presentation, hom_check, presentation_agreement, SubstAlgebra,
    TruncatedAlgebra,
};

pub const FORMAT_ENV: &str = "CLONE_FORGE_FORMAT";

#[derive(Debug, Parser)]
#[command(name = "clone-forge", version, about = "Clones, substitution algebras and their law checkers")]
pub struct Cli {
    /// Output format; the CLONE_FORGE_FORMAT variable takes precedence.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Instance count per family above which a check is sampled.
    #[arg(long, default_value_t = Sampling::DEFAULT_THRESHOLD, global = true)]
    pub threshold: u64,

    /// Never sample, however large the instance space.
    #[arg(long, global = true)]
    pub exhaustive: bool,

    /// Add the elapsed time to the report.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Check the symmetric-monoid diagrams for (1, c, w, s).
    CheckF {
        /// Table of c : 2 -> 1.
        #[arg(long, default_value = "0,0")]
        c: Table,
        /// Table of w : 0 -> 1.
        #[arg(long, default_value = "")]
        w: Table,
        /// Table of s : 2 -> 2.
        #[arg(long, default_value = "1,0")]
        s: Table,
    },
    /// Build the free clone on a signature and check the clone laws.
    FreeClone {
        #[arg(long)]
        signature: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
    },
    /// Build the clone of a finite algebra and check the clone laws.
    FiniteClone {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Check the clone laws of any clone source.
    CheckClone {
        #[command(flatten)]
        #[serde(flatten)]
        source: CloneSource,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
    },
    /// Turn a clone into a substitution algebra, check it, optionally save it.
    ToSubst {
        #[command(flatten)]
        #[serde(flatten)]
        source: CloneSource,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
        /// Write the tabulated algebra here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Turn a substitution algebra into a clone and check the clone laws.
    ToClone {
        #[command(flatten)]
        #[serde(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
    },
    /// Check a substitution algebra in both presentations and compare them.
    CheckSubst {
        #[command(flatten)]
        #[serde(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
    },
    /// Check that C(S(K)) = K and S(C(S(K))) = S(K).
    Roundtrip {
        #[command(flatten)]
        #[serde(flatten)]
        source: CloneSource,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
    },
    /// Count the hom-sets of the theory of a clone and check its category laws.
    EnumHom {
        #[command(flatten)]
        #[serde(flatten)]
        source: CloneSource,
        #[command(flatten)]
        #[serde(flatten)]
        sizes: Sizes,
        /// List the homs themselves when there are at most this many.
        #[arg(long, default_value_t = 16)]
        list: usize,
    },
    /// Run the built-in acceptance suite.
    Demo,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Sizes {
    /// Largest stage checked.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub bound: u64,
    /// Deepest term enumerated for free clones.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Largest arity enumerated.
    #[arg(long, default_value_t = 3)]
    pub max_arity: usize,
}

impl Sizes {
    fn bound(&self) -> usize {
        self.bound as usize
    }
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct CloneSource {
    /// initial, terminal or arrow.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// Signature file; the free clone on it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<PathBuf>,
    /// Finite algebra file; the clone of its term operations.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct AlgebraSource {
    /// Substitution algebra file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// S of a built-in clone.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// S of the free clone on a signature.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<PathBuf>,
    /// S of the clone of a finite algebra.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<PathBuf>,
}

/// A map table written as comma-separated images, e.g. `1,0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Table(pub Vec<usize>);

impl std::str::FromStr for Table {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()
            .map(Table)
    }
}

/// Everything a command prints. The JSON form is the serialization of this
/// struct with sorted keys.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Value,
    pub overall: Status,
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl RunReport {
    fn new(command: Value) -> Self {
        RunReport {
            command,
            overall: Status::Pass,
            reports: Vec::new(),
            facts: BTreeMap::new(),
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    fn push(&mut self, report: Report) {
        if !report.passed() {
            self.overall = Status::Fail;
        }
        self.reports.push(report);
    }

    fn fact(&mut self, key: &str, value: Value) {
        self.facts.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.overall.is_pass()
    }

    pub fn to_json(&self) -> String {
        // through Value, whose maps are sorted
        let v = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.render_text());
        }
        for (k, v) in &self.facts {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        out.push_str(&format!("overall: {}\n", crate::report::status_word(self.overall)));
        out
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.render_text(),
        }
    }
}

/// An input or validation failure, reported on stderr with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, InputError>;

/// What a finished invocation prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (program name first) and run. `env_format` stands in for
/// the CLONE_FORGE_FORMAT variable.
pub fn run_args<I, T>(args: I, env_format: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let format = match env_format.filter(|s| !s.is_empty()) {
        None => cli.format,
        Some(s) => match Format::from_str(s, true) {
            Ok(f) => f,
            Err(_) => {
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: {FORMAT_ENV}=`{s}` is not text or json\n"),
                }
            }
        },
    };
    match run(&cli) {
        Ok(report) => Outcome {
            code: if report.passed() { 0 } else { 1 },
            stdout: report.emit(format),
            stderr: String::new(),
        },
        Err(InputError(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let env = std::env::var(FORMAT_ENV).ok();
    let out = run_args(std::env::args_os(), env.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

pub fn run(cli: &Cli) -> CliResult<RunReport> {
    let started = Instant::now();
    let sampling = if cli.exhaustive {
        Sampling::exhaustive()
    } else {
        Sampling::threshold(cli.threshold, cli.seed)
    };
    let echo = json!({
        "command": cli.command,
        "sampling": sampling,
    });
    let mut out = RunReport::new(echo);
    match &cli.command {
        Command::CheckF { c, w, s } => {
            let map = |label: &str, dom: usize, cod: usize, t: &[usize]| -> CliResult<FinMap> {
                if t.len() != dom {
                    return Err(InputError(format!("{label} needs {dom} entries, got {}", t.len())));
                }
                Ok(FinMap::new(cod, t.to_vec())?)
            };
            out.push(check_symmetric_monoid(&map("c", 2, 1, &c.0)?, &map("w", 0, 1, &w.0)?, &map("s", 2, 2, &s.0)?)?);
        }
        Command::FreeClone { signature, sizes } => {
            let k = FreeClone::new(load_json::<Signature>(signature)?);
            clone_checks(&mut out, &k, &budget(sizes, &sampling))?;
        }
        Command::FiniteClone { input, max_arity } => {
            let k = finite_clone_of_algebra(load_json::<FiniteAlgebra>(input)?, *max_arity);
            clone_checks(&mut out, &k, &Budget::new(0, *max_arity).with_sampling(sampling))?;
        }
        Command::CheckClone { source, sizes } => {
            let b = budget(sizes, &sampling);
            with_clone!(load_clone(source, sizes)?, k => clone_checks(&mut out, &k, &b)?);
        }
        Command::ToSubst { source, sizes, output } => {
            let b = budget(sizes, &sampling);
            with_clone!(load_clone(source, sizes)?, k => {
                let a = s_functor(k, b);
                subst_checks(&mut out, &a, sizes.bound(), &sampling)?;
                if let Some(path) = output {
                    let (tab, _) = TruncatedAlgebra::tabulate(&a, sizes.bound()).map_err(|e| {
                        InputError(format!("cannot tabulate {} up to stage {}: {e}", a.describe(), sizes.bound()))
                    })?;
                    write_json(path, &tab)?;
                    out.notes.push(format!("wrote {}", path.display()));
                }
            });
        }
        Command::ToClone { source, sizes } => {
            with_algebra!(load_algebra(source, sizes, &sampling)?, a => {
                let mut b = budget(sizes, &sampling);
                if let Some(top) = a.max_stage() {
                    // mu_{m,n} lives at stage m + n
                    b.max_arity = b.max_arity.min(top / 2);
                    out.notes.push(format!("arities limited to {} by the stored stages", b.max_arity));
                }
                clone_checks(&mut out, &c_functor(&a), &b)?;
            });
        }
        Command::CheckSubst { source, sizes } => {
            with_algebra!(load_algebra(source, sizes, &sampling)?, a => {
                subst_checks(&mut out, &a, sizes.bound(), &sampling)?;
            });
        }
        Command::Roundtrip { source, sizes } => {
            let b = budget(sizes, &sampling);
            with_clone!(load_clone(source, sizes)?, k => {
                out.push(roundtrip_clone(&k, &b)?);
                out.push(roundtrip_alg(&s_functor(k, b), sizes.bound(), &sampling)?);
            });
        }
        Command::EnumHom { source, sizes, list } => {
            let b = budget(sizes, &sampling);
            with_clone!(load_clone(source, sizes)?, k => {
                hom_counts(&mut out, &k, sizes.bound(), &b, *list)?;
                out.push(theory_laws_check(&k, sizes.bound(), &b)?);
            });
        }
        Command::Demo => demo(&mut out, &sampling)?,
    }
    if cli.timing {
        out.elapsed_ms = Some(started.elapsed().as_millis());
    }
    Ok(out)
}

fn budget(sizes: &Sizes, sampling: &Sampling) -> Budget {
    Budget::new(sizes.depth, sizes.max_arity).with_sampling(*sampling)
}

enum LoadedClone {
    Builtin(BuiltinClone),
    Free(FreeClone),
    Finite(FiniteClone),
}

macro_rules! with_clone {
    ($src:expr, $k:ident => $body:expr) => {
        match $src {
            LoadedClone::Builtin($k) => $body,
            LoadedClone::Free($k) => $body,
            LoadedClone::Finite($k) => $body,
        }
    };
}
use with_clone;

fn load_clone(source: &CloneSource, sizes: &Sizes) -> CliResult<LoadedClone> {
    if let Some(name) = &source.builtin {
        Ok(LoadedClone::Builtin(builtin_clone(name)?))
    } else if let Some(path) = &source.signature {
        Ok(LoadedClone::Free(FreeClone::new(load_json(path)?)))
    } else if let Some(path) = &source.algebra {
        let arity = sizes.max_arity.max(sizes.bound());
        Ok(LoadedClone::Finite(finite_clone_of_algebra(load_json(path)?, arity)))
    } else {
        Err(InputError("no clone source given".into()))
    }
}

enum LoadedAlgebra {
    Table(TruncatedAlgebra),
    Builtin(crate::bridge::CloneAlgebra<BuiltinClone>),
    Free(crate::bridge::CloneAlgebra<FreeClone>),
    Finite(crate::bridge::CloneAlgebra<FiniteClone>),
}

macro_rules! with_algebra {
    ($src:expr, $a:ident => $body:expr) => {
        match $src {
            LoadedAlgebra::Table($a) => $body,
            LoadedAlgebra::Builtin($a) => $body,
            LoadedAlgebra::Free($a) => $body,
            LoadedAlgebra::Finite($a) => $body,
        }
    };
}
use with_algebra;

fn load_algebra(source: &AlgebraSource, sizes: &Sizes, sampling: &Sampling) -> CliResult<LoadedAlgebra> {
    if let Some(path) = &source.input {
        return Ok(LoadedAlgebra::Table(load_subst_file(path, sampling)?));
    }
    let clones = CloneSource {
        builtin: source.builtin.clone(),
        signature: source.signature.clone(),
        algebra: source.algebra.clone(),
    };
    let b = budget(sizes, sampling);
    Ok(match load_clone(&clones, sizes)? {
        LoadedClone::Builtin(k) => LoadedAlgebra::Builtin(s_functor(k, b)),
        LoadedClone::Free(k) => LoadedAlgebra::Free(s_functor(k, b)),
        LoadedClone::Finite(k) => LoadedAlgebra::Finite(s_functor(k, b)),
    })
}

/// Read and parse a JSON file; parse errors carry the file, line and column.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let v = serde_json::to_value(value).map_err(|e| InputError(e.to_string()))?;
    let text = serde_json::to_string_pretty(&v).map_err(|e| InputError(e.to_string()))? + "\n";
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// Load a substitution algebra file and verify that its action tables are
/// functorial.
pub fn load_subst_file(path: &Path, sampling: &Sampling) -> CliResult<TruncatedAlgebra> {
    let alg: TruncatedAlgebra = load_json(path)?;
    let r = check_functoriality(alg.presheaf(), alg.bound(), sampling)?;
    if let Some(c) = r.checks.iter().find(|c| !c.passed()) {
        let w = c.witness.clone().unwrap_or(Value::Null);
        return Err(InputError(format!(
            "{}: action tables are not functorial ({}): {w}",
            path.display(),
            c.name
        )));
    }
    Ok(alg)
}

fn carrier_sizes<K: AbstractClone>(k: &K, budget: &Budget) -> CliResult<Value> {
    let mut sizes = Vec::new();
    for n in 0..=budget.max_arity {
        let c = k.elems(n, budget)?;
        sizes.push(if c.complete { json!(c.len()) } else { json!(format!(">={}", c.len())) });
    }
    Ok(Value::Array(sizes))
}

fn clone_checks<K: AbstractClone>(out: &mut RunReport, k: &K, budget: &Budget) -> CliResult<()> {
    out.fact("carrier_sizes", carrier_sizes(k, budget)?);
    out.push(clone_laws_check(k, budget)?);
    Ok(())
}

fn subst_checks<A: SubstAlgebra>(out: &mut RunReport, a: &A, bound: usize, sampling: &Sampling) -> CliResult<()> {
    let eq = check_presentation(a, bound, sampling)?;
    let dg = check_diagrams(a, bound, sampling)?;
    let agree = presentation_agreement(&eq, &dg);
    out.push(eq);
    out.push(dg);
    out.push(agree);
    Ok(())
}

fn hom_counts<K: AbstractClone>(out: &mut RunReport, k: &K, bound: usize, budget: &Budget, list: usize) -> CliResult<()> {
    let mut counts = BTreeMap::new();
    let mut listed = BTreeMap::new();
    for m in 0..=bound {
        let c = k.elems(m, budget)?;
        for n in 0..=bound {
            let key = format!("{m}->{n}");
            let count = (c.len() as u128).checked_pow(n as u32);
            counts.insert(
                key.clone(),
                match (count, c.complete) {
                    (Some(x), true) => json!(x),
                    (Some(x), false) => json!(format!(">={x}")),
                    (None, _) => json!("overflow"),
                },
            );
            if count.is_some_and(|x| x <= list as u128) {
                listed.insert(key, serde_json::to_value(enumerate_theory_homs(k, m, n, budget)?).unwrap_or(Value::Null));
            }
        }
    }
    out.fact("hom_counts", serde_json::to_value(counts).unwrap_or(Value::Null));
    out.fact("homs", serde_json::to_value(listed).unwrap_or(Value::Null));
    Ok(())
}

fn demo(out: &mut RunReport, sampling: &Sampling) -> CliResult<()> {
    let g = generators();
    out.push(check_symmetric_monoid(&g.c, &g.w, &g.s)?);
    let mut identity_s = check_symmetric_monoid(&g.c, &g.w, &FinMap::identity(2))?;
    identity_s.subject = format!("{} with s = id (expected to fail)", identity_s.subject);
    out.push(expect_failure("symmetric monoid detects s = id", &identity_s));

    let b = Budget::new(2, 3).with_sampling(*sampling);
    let meet = corpus::finite_clone("meet", 4)?;
    let sizes: Vec<usize> = (1..=4).map(|n| meet.elems(n, &b).map(|c| c.len())).collect::<crate::Result<_>>()?;
    let mut r = Report::new("clone of ({0,1}, meet)");
    r.push(CheckResult::single(
        "carrier sizes 2^n - 1",
        sizes.iter().enumerate().all(|(i, &s)| s + 1 == 1 << (i + 1)),
        Some(json!(sizes)),
    ));
    out.push(r);
    out.fact("meet_carrier_sizes", json!(sizes));

    for name in ["initial", "terminal", "arrow"] {
        let k = builtin_clone(name)?;
        out.push(clone_laws_check(&k, &b)?);
        out.push(roundtrip_clone(&k, &b)?);
        subst_checks(out, &s_functor(k, b), 3, sampling)?;
    }
    out.push(clone_laws_check(&meet, &b)?);
    subst_checks(out, &s_functor(meet.clone(), b), 3, sampling)?;

    let initial = s_functor(builtin_clone("initial")?, b);
    out.push(roundtrip_alg(&initial, 3, sampling)?);
    out.push(check_delta_laws(&representable_v(), 3, sampling)?);
    out.push(check_delta_laws(&initial, 3, sampling)?);
    let meet_alg = s_functor(meet.clone(), b);
    out.push(hom_check(variable_family(&meet_alg), &initial, &meet_alg, 3, sampling)?);
    let certified = s_on_hom(
        &builtin_clone("initial")?,
        &meet,
        |m: usize, i: &usize| meet.iota(m, *i),
        &b,
        3,
    )?;
    out.push(certified.report);

    for m in corpus::isolating_mutants()? {
        let r = check_presentation(&m.algebra, m.algebra.bound(), sampling)?;
        let target = m.target.unwrap_or_default();
        let mut check = Report::new(format!("mutant: {}", m.name));
        check.push(CheckResult::single(
            format!("fails exactly {target}"),
            r.failures() == [target],
            Some(json!(r.failures())),
        ));
        out.push(check);
    }
    Ok(())
}

fn expect_failure(name: &str, r: &Report) -> Report {
    let mut out = Report::new(r.subject.clone());
    out.push(CheckResult::single(name, !r.passed(), Some(json!(r.failures()))));
    out
}
