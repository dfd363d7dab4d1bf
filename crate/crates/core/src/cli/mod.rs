//! Command-line front end. Every command validates its configuration, computes a
//! report and writes it once, to stdout or atomically to `--out`.

mod oracles;
mod output;
pub mod selftest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::finstruct::ClassId;
use crate::kazhdan::{
    cayley_extension_check, default_word_length, kazhdan_report, order_axioms_check, DEFAULT_TREE_DEPTH,
};
use crate::oligo::{
    commensurator, decompose_power, double_coset_profile, enumerate_open_subgroups, irrep_catalog,
    tensor_recursion_check,
};
use crate::Rational;

pub use output::{write_atomic, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "oligorep", version, about = "Representation catalogs and Kazhdan witnesses for oligomorphic groups")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the seed from OLIGOREP_LIMITS.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// pure_set, linear_order, graph, vector_space_q2, vector_space_q3 or boolean_algebra
    #[arg(long)]
    class: ClassId,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Irreducible labels (B, σ) with |B| ≤ max-base.
    Catalog {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 3)]
        max_base: usize,
    },
    /// Decomposition of ℓ²(Xⁿ) or ℓ²(X₀ⁿ), with the tensor recursion residuals.
    Decompose {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x0: bool,
    },
    /// Double coset counts for every pair of open subgroups.
    Cosets {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 2)]
        max_base: usize,
    },
    /// Open subgroups up to conjugacy with their commensurators.
    Subgroups {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 3)]
        max_base: usize,
    },
    /// Kazhdan set certificates for the two-element set from F₂.
    Kazhdan {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = DEFAULT_TREE_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Word length for the freeness check and the order axioms.
        #[arg(long)]
        words: Option<usize>,
        /// Magnus truncation degree for the order axioms.
        #[arg(long, default_value_t = 10)]
        degree: usize,
    },
    /// Runs the acceptance suite.
    Selftest,
}

/// Validated configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub class: Option<ClassId>,
    pub max_base: Option<usize>,
    pub limits: Limits,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if let Some(out) = &self.out {
            let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
            if out.is_dir() || parent.is_some_and(|p| !p.is_dir()) {
                return Err(Error::Config(format!("cannot write a report to {}", out.display())));
            }
        }
        Ok(())
    }
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 ok, 1 usage, 2 resource limit, 3 invariant violation.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let mut limits = Limits::from_env()?;
    if let Some(seed) = cli.seed {
        limits.seed = seed;
    }
    let (class, max_base) = match &cli.command {
        Command::Catalog { class, max_base }
        | Command::Cosets { class, max_base }
        | Command::Subgroups { class, max_base } => (Some(class.class), Some(*max_base)),
        Command::Decompose { class, .. } | Command::Kazhdan { class, .. } => (Some(class.class), None),
        Command::Selftest => (None, None),
    };
    let config = RunConfig { class, max_base, limits, format: cli.format, out: cli.out };
    config.validate()?;
    let limits = &config.limits;
    let (report, code) = match cli.command {
        Command::Catalog { class, max_base } => (catalog(class.class, max_base, limits)?, 0),
        Command::Decompose { class, n, x0 } => (decompose(class.class, n, x0, limits)?, 0),
        Command::Cosets { class, max_base } => (cosets(class.class, max_base, limits)?, 0),
        Command::Subgroups { class, max_base } => (subgroups(class.class, max_base, limits)?, 0),
        Command::Kazhdan { class, depth, trials, words, degree } => {
            kazhdan(class.class, depth, trials, words, degree, limits)?
        }
        Command::Selftest => selftest(limits),
    };
    let text = report.render(config.format)?;
    match &config.out {
        Some(path) => write_atomic(path, &text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Config(e.to_string()))
}

fn catalog(class: ClassId, max_base: usize, limits: &Limits) -> Result<Report> {
    let labels = irrep_catalog(class, max_base, limits)?;
    let json = json!({ "class": class, "max_base": max_base, "count": labels.len(), "labels": to_json(&labels)? });
    let mut r = Report::new(
        format!("{class}: {} irreducible labels with |B| ≤ {max_base}", labels.len()),
        json,
        &["base_size", "base_code", "sigma_index", "sigma_degree", "trivial"],
    );
    for l in &labels {
        r.row(vec![
            l.base.len().to_string(),
            l.base_code.clone(),
            l.sigma_index.to_string(),
            l.sigma_degree.to_string(),
            l.is_trivial().to_string(),
        ]);
    }
    Ok(r)
}

fn decompose(class: ClassId, n: usize, x0: bool, limits: &Limits) -> Result<Report> {
    let d = decompose_power(class, n, x0, limits)?;
    let recursion = if n >= 1 { Some(tensor_recursion_check(class, n - 1, limits)?) } else { None };
    let json = json!({
        "decomposition": to_json(&d)?,
        "recursion": to_json(&recursion)?,
        "recursion_passed": recursion.as_ref().map(|r| r.passed()),
    });
    let space = if x0 { "X₀" } else { "X" };
    let mut r = Report::new(
        format!("{class}: ℓ²({space}^{n}), {} orbit types", d.orbit_count),
        json,
        &["kind", "base_size", "base_code", "detail", "multiplicity"],
    );
    for (key, m) in &d.summands {
        let stab: Vec<String> = key.stabilizer.iter().map(|g| format!("{g:?}")).collect();
        r.row(vec![
            "summand".into(),
            key.base_points.to_string(),
            key.base_code.clone(),
            format!("K = <{}>", stab.join(" ")),
            m.to_string(),
        ]);
    }
    for (l, m) in d.irreps.iter().flat_map(|d| d.iter()) {
        r.row(vec![
            "irrep".into(),
            l.base.len().to_string(),
            l.base_code.clone(),
            format!("σ{} of degree {}", l.sigma_index, l.sigma_degree),
            m.to_string(),
        ]);
    }
    Ok(r)
}

fn cosets(class: ClassId, max_base: usize, limits: &Limits) -> Result<Report> {
    let subs = enumerate_open_subgroups(class, max_base, limits)?;
    let mut profiles = Vec::new();
    let mut r = Report::new(
        format!("{class}: double cosets V\\G/W for {} open subgroups", subs.len()),
        Value::Null,
        &["v", "w", "double_cosets"],
    );
    for (i, v) in subs.iter().enumerate() {
        for (j, w) in subs.iter().enumerate() {
            let count = double_coset_profile(v, w)?.count;
            profiles.push(json!({ "v": i, "w": j, "count": count }));
            r.row(vec![i.to_string(), j.to_string(), count.to_string()]);
        }
    }
    let exports: Vec<_> = subs.iter().map(|v| v.export()).collect();
    r.json = json!({ "class": class, "max_base": max_base, "subgroups": to_json(&exports)?, "profiles": profiles });
    Ok(r)
}

fn subgroups(class: ClassId, max_base: usize, limits: &Limits) -> Result<Report> {
    let subs = enumerate_open_subgroups(class, max_base, limits)?;
    let mut entries = Vec::new();
    let mut r = Report::new(
        format!("{class}: {} open subgroups with |B| ≤ {max_base}", subs.len()),
        Value::Null,
        &["index", "base_size", "base_code", "k_order", "aut_order", "commensurator_index"],
    );
    for (i, v) in subs.iter().enumerate() {
        let c = commensurator(v);
        let index = c.k().order() / v.k().order();
        let e = v.export();
        r.row(vec![
            i.to_string(),
            e.base_size.to_string(),
            e.base_code.clone(),
            e.k_order.to_string(),
            e.aut_order.to_string(),
            index.to_string(),
        ]);
        entries.push(json!({ "subgroup": to_json(&e)?, "commensurator": to_json(&c.export())?, "commensurator_index": index.to_string() }));
    }
    r.json = json!({ "class": class, "max_base": max_base, "subgroups": entries });
    Ok(r)
}

fn kazhdan(
    class: ClassId,
    depth: usize,
    trials: usize,
    words: Option<usize>,
    degree: usize,
    limits: &Limits,
) -> Result<(Report, i32)> {
    let report = kazhdan_report(class, depth, trials, words.unwrap_or(default_word_length(class)), limits)?;
    let mut failed = false;
    let mut json = to_json(&report)?;
    let mut rows: Vec<(String, String)> = vec![
        ("Q".into(), format!("{}, {}", report.q[0], report.q[1])),
        ("freeness_L".into(), report.freeness.word_length.to_string()),
        ("freeness_points".into(), report.freeness.points_tested.to_string()),
        ("freeness_pass".into(), report.freeness.pass.to_string()),
        ("trials".into(), report.displacement_trials.count.to_string()),
        ("min_displacement".into(), report.displacement_trials.min_value.to_string()),
    ];
    if let Some(t) = &report.tree {
        rows.push(("tree_depth".into(), t.depth.to_string()));
        rows.push(("tree_conditions_ok".into(), t.conditions_ok.to_string()));
        failed |= !t.conditions_ok || (trials > 0 && report.displacement_trials.min_value < Rational::new(1, 2));
    }
    if class == ClassId::LinearOrder {
        let axioms = order_axioms_check(10_000, words.unwrap_or(6), degree, limits.seed)?;
        rows.push(("order_axiom_failures".into(), axioms.failures().to_string()));
        failed |= axioms.failures() > 0;
        json["order_axioms"] = to_json(&axioms)?;
    }
    if class == ClassId::Graph {
        let ext = cayley_extension_check(limits.seed, 6, 2)?;
        rows.push(("cayley_extension_rate".into(), format!("{:.6}", ext.rate)));
        json["cayley_extension"] = to_json(&ext)?;
    }
    let mut r = Report::new(format!("{class}: Kazhdan set certificates"), json, &["key", "value"]);
    for (k, v) in rows {
        r.row(vec![k, v]);
    }
    Ok((r, if failed { 3 } else { 0 }))
}

fn selftest(limits: &Limits) -> (Report, i32) {
    let outcomes = selftest::run_all(limits);
    let passed = outcomes.iter().filter(|o| o.pass).count();
    // timings stay out of the report so reruns are byte-identical
    let json = json!({
        "passed": passed,
        "total": outcomes.len(),
        "criteria": outcomes.iter().map(|o| json!({ "id": o.id, "name": o.name, "pass": o.pass, "detail": o.detail })).collect::<Vec<_>>(),
    });
    let mut r = Report::new(format!("acceptance: {passed}/{} criteria pass", outcomes.len()), json, &["id", "name", "result", "detail"]);
    for o in &outcomes {
        let verdict = if o.pass { "pass" } else { "FAIL" };
        r.row(vec![o.id.to_string(), o.name.into(), verdict.into(), o.detail.clone()]);
    }
    (r, if passed == outcomes.len() { 0 } else { 3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_file(args: &[&str]) -> (i32, String) {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.txt");
        let mut full = vec!["oligorep"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--out", out.to_str().unwrap()]);
        let code = run(full);
        (code, std::fs::read_to_string(&out).unwrap_or_default())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["oligorep", "catalog", "--class", "bogus"]), 1);
        assert_eq!(run(["oligorep", "frobnicate"]), 1);
        assert_eq!(run(["oligorep", "--help"]), 0);
        let (code, text) = run_to_file(&["catalog", "--class", "graph", "--max-base", "40"]);
        assert_eq!(code, 2);
        assert!(text.is_empty());
    }

    #[test]
    fn catalog_examples() {
        let count = |class: &str, max: &str| {
            let (code, text) = run_to_file(&["catalog", "--class", class, "--max-base", max]);
            assert_eq!(code, 0);
            serde_json::from_str::<Value>(&text).unwrap()["count"].as_u64().unwrap()
        };
        assert_eq!(count("linear_order", "4"), 5);
        assert_eq!(count("pure_set", "2"), 4);
        assert_eq!(count("graph", "0"), 1);
    }

    #[test]
    fn reports_are_reproducible() {
        let args = ["kazhdan", "--class", "pure_set", "--depth", "4", "--trials", "20", "--seed", "3", "--format", "csv"];
        let (code, first) = run_to_file(&args);
        assert_eq!(code, 0);
        assert_eq!(run_to_file(&args).1, first);
        assert!(first.contains("tree_conditions_ok,true"));
    }
}
