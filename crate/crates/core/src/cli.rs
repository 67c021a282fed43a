//! Command-line front end. Exit status: 0 success, 1 verification failure,
//! 2 usage, parse or resource error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bracket::{bracket_unchecked, check_input};
use crate::cochain::{codim_support, cohomology_basis, cohomology_dim_direct, project, reynolds};
use crate::coeffs::appendix_suite;
use crate::error::{Error, Result};
use crate::files::{load_class, load_group, ClassFile};
use crate::group::Group;
use crate::suites::{examples_suite, homotopy_sweep, schouten_sweep};

pub const THREADS_ENV: &str = "SKEWHH_THREADS";

#[derive(Debug, Parser)]
#[command(name = "skewhh", version, about = "Hochschild cohomology and Gerstenhaber brackets of S(V)#G")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate a group and print per-element geometry.
    Group { file: PathBuf },
    /// Basis of invariant reduced classes in bidegree (p, m).
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: u32,
    },
    /// Gerstenhaber bracket of two class files.
    Bracket {
        file: PathBuf,
        x: PathBuf,
        y: PathBuf,
        /// Apply the projections p_g to both inputs first.
        #[arg(long)]
        project: bool,
        /// Average both inputs over the group first.
        #[arg(long)]
        reynolds: bool,
    },
    /// Run a verification sweep.
    Verify {
        suite: Suite,
        /// Upper bound for s, t and z in the appendix suite.
        #[arg(long, default_value_t = 6)]
        max: u64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        s: usize,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[arg(long, default_value_t = 2)]
        z: usize,
        /// Bound on |S| + |Z| for the homotopy suite.
        #[arg(long, default_value_t = 2)]
        total: usize,
        /// Number of random vector-field pairs for the schouten suite.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Appendix,
    Homotopy,
    Schouten,
    Examples,
}

pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { code: 0, text, json }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| Error::usage(format!("{THREADS_ENV} must be a positive integer")))?;
        if n == 0 {
            return Err(Error::usage(format!("{THREADS_ENV} must be a positive integer")));
        }
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Group { file } => cmd_group(&load_group(&read(file)?)?),
        Command::Cohomology { file, p, m } => cmd_cohomology(&load_group(&read(file)?)?, *p, *m),
        Command::Bracket { file, x, y, project, reynolds } => {
            let g = load_group(&read(file)?)?;
            let x = load_class(&read(x)?, &g)?;
            let y = load_class(&read(y)?, &g)?;
            cmd_bracket(&g, x, y, *project, *reynolds)
        }
        Command::Verify { suite, max, dim, s, t, z, total, pairs, seed } => match suite {
            Suite::Appendix => Ok(verify_appendix(*max)),
            Suite::Homotopy => Ok(verify_homotopy(*dim, *s, *t, *z, *total)),
            Suite::Schouten => Ok(verify_schouten(*dim, *pairs, *seed)),
            Suite::Examples => verify_examples(),
        },
    }
}

pub fn cmd_group(g: &Group) -> Result<Outcome> {
    let mut text = format!("order {}\nfield Q(z_{})\n", g.order(), g.field_order);
    let mut elems = Vec::new();
    for e in &g.elements {
        let geo = g.geometry(e.index);
        text.push_str(&format!(
            "[{}] {}  matrix {}  codim {}  omega {}\n",
            e.index,
            g.word_string(e.index),
            e.matrix,
            geo.codim,
            geo.omega
        ));
        elems.push(json!({
            "index": e.index,
            "word": g.word_string(e.index),
            "matrix": (0..g.dim).map(|i| (0..g.dim).map(|j| e.matrix.get(i, j).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "codim": geo.codim,
            "omega": geo.omega.to_string(),
        }));
    }
    let classes: Vec<Vec<String>> = g.classes.iter().map(|c| c.iter().map(|&i| g.word_string(i)).collect()).collect();
    let kernel: Vec<String> = g.kernel.iter().map(|&i| g.word_string(i)).collect();
    text.push_str(&format!("conjugacy classes {:?}\nkernel {:?}\n", classes, kernel));
    Ok(Outcome::ok(
        text,
        json!({ "order": g.order(), "elements": elems, "classes": classes, "kernel": kernel }),
    ))
}

pub fn cmd_cohomology(g: &Group, p: usize, m: u32) -> Result<Outcome> {
    if p > g.dim {
        return Err(Error::usage(format!("p = {p} exceeds dim V = {}", g.dim)));
    }
    let basis = cohomology_basis(g, p, m);
    let direct = cohomology_dim_direct(g, p, m);
    let files: Vec<ClassFile> = basis.iter().map(|c| ClassFile::from_cochain(c, g)).collect();
    let mut text = format!("(p, m) = ({p}, {m}): {} classes, direct count {direct}\n", basis.len());
    for (i, c) in basis.iter().enumerate() {
        text.push_str(&format!("  [{i}] D{:?}  {}\n", codim_support(g, c), c.display(g)));
    }
    let mismatch = direct != basis.len();
    if mismatch {
        text.push_str("internal error: reduced basis and direct computation disagree\n");
    }
    Ok(Outcome {
        code: if mismatch { 1 } else { 0 },
        text,
        json: json!({ "p": p, "m": m, "classes": files, "directCount": direct, "consistent": !mismatch }),
    })
}

pub fn cmd_bracket(
    g: &Group,
    mut x: crate::cochain::Cochain,
    mut y: crate::cochain::Cochain,
    do_project: bool,
    do_reynolds: bool,
) -> Result<Outcome> {
    if do_project {
        x = project(g, &x);
        y = project(g, &y);
    }
    if do_reynolds {
        x = reynolds(g, &x);
        y = reynolds(g, &y);
    }
    check_input(g, &x, "X")?;
    check_input(g, &y, "Y")?;
    let rep = bracket_unchecked(g, &x, &y);
    let (dx, dy, dr) = (codim_support(g, &x), codim_support(g, &y), codim_support(g, &rep.result));
    let mut text = format!("[X, Y] = {}\n", rep.result.display(g));
    text.push_str(&format!("degree {} + {} - 1 = {}\n", x.degree, y.degree, rep.result.degree));
    text.push_str(&format!("codimension support: D{dx:?} x D{dy:?} -> D{dr:?}\n"));
    let mut terms = Vec::new();
    for ((a, b), t) in &rep.terms {
        text.push_str(&format!("  term ({}, {}): {t}\n", g.word_string(*a), g.word_string(*b)));
        terms.push(json!({ "g": g.word_string(*a), "h": g.word_string(*b), "term": t.to_string() }));
    }
    let mut vanish = Vec::new();
    for (a, b, r) in &rep.vanishing {
        text.push_str(&format!("  vanished ({}, {}): {r}\n", g.word_string(*a), g.word_string(*b)));
        vanish.push(json!({ "g": g.word_string(*a), "h": g.word_string(*b), "reason": r.to_string() }));
    }
    Ok(Outcome::ok(
        text,
        json!({
            "result": ClassFile::from_cochain(&rep.result, g),
            "codimX": dx, "codimY": dy, "codimResult": dr,
            "terms": terms, "vanishing": vanish,
        }),
    ))
}

fn verdict(pass: bool) -> i32 {
    if pass { 0 } else { 1 }
}

pub fn verify_appendix(max: u64) -> Outcome {
    let rep = appendix_suite(max, max, max);
    let summary = rep.summary();
    let ok_ids = summary.iter().filter(|&&(_, run, ok)| run > 0 && run == ok).count();
    let mut text = String::new();
    for (name, run, ok) in &summary {
        text.push_str(&format!("{name:6} {ok}/{run}\n"));
    }
    text.push_str(&format!("{ok_ids}/{} identities pass\n", summary.len()));
    let failures: Vec<_> = rep.failures().into_iter().cloned().collect();
    Outcome {
        code: verdict(ok_ids == summary.len()),
        text,
        json: json!({ "identitiesPassing": ok_ids, "identities": summary.len(), "failures": failures }),
    }
}

pub fn verify_homotopy(dim: usize, s: usize, t: u32, z: usize, total: usize) -> Outcome {
    let rep = homotopy_sweep(dim, s, t, z, total);
    let text = format!(
        "homotopy residual: {} inputs, {} nonzero\n{}",
        rep.checked,
        rep.failures.len(),
        rep.failures.iter().map(|f| format!("  {f}\n")).collect::<String>()
    );
    Outcome { code: verdict(rep.passed()), text, json: json!({ "checked": rep.checked, "failures": rep.failures }) }
}

pub fn verify_schouten(dim: usize, pairs: usize, seed: u64) -> Outcome {
    let rep = schouten_sweep(dim, pairs, seed);
    let text = format!("schouten checks: {} run, {} failed\n", rep.checked, rep.failures.len());
    Outcome { code: verdict(rep.passed()), text, json: json!({ "checked": rep.checked, "failures": rep.failures }) }
}

pub fn verify_examples() -> Result<Outcome> {
    let checks = examples_suite()?;
    let mut text = String::new();
    for (name, ok) in &checks {
        text.push_str(&format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }));
    }
    let pass = checks.iter().all(|(_, ok)| *ok);
    let js: Vec<Value> = checks.iter().map(|(n, ok)| json!({ "check": n, "pass": ok })).collect();
    Ok(Outcome { code: verdict(pass), text, json: json!({ "checks": js }) })
}
