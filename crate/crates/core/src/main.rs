use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use bs_shift::cayley::{boundary_edge_count, gamma_closed_form, Limits, Window};
use bs_shift::coloring_engine::{
    count_colorings, entropy_csv, entropy_table, extend_rectangle, glue, ln_biguint,
    random_admissible, witness_family_even, witness_family_odd, EvenConvention, Method,
    MethodChoice,
};
use bs_shift::frozen::{frozen_config, frozen_test_windows, verify_frozen_window, verify_proper};
use bs_shift::group::{eval_str, neighbors, GroupParams};
use bs_shift::periodicity::find_periodic_monochromatic;
use bs_shift::subshift::{
    first_violation, gcs, restrict, ConfigOracle, FormulaVariant, Nnsft, Pattern,
};
use bs_shift::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Exact computations on BS(1,N) and its coloring shifts.
#[derive(Parser)]
#[command(name = "bs-shift", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Output format; each command supports a subset.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for counting (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value_t = Limits::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, global = true, default_value_t = Limits::default().max_nodes)]
    max_nodes: u64,
    #[arg(long, global = true, default_value_t = Limits::default().max_states)]
    max_states: usize,
    /// Memory budget in MiB for DP tables; tightens --max-states.
    #[arg(long, global = true)]
    max_memory: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Backtracking,
    Frontier,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Consistent,
    PrintedLongBase,
    PrintedShortBase,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    FrozenMod1,
    FrozenMod2,
    FrozenMod0,
    Parity2,
}

impl From<VariantArg> for FormulaVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::FrozenMod1 => FormulaVariant::FrozenMod1,
            VariantArg::FrozenMod2 => FormulaVariant::FrozenMod2,
            VariantArg::FrozenMod0 => FormulaVariant::FrozenMod0,
            VariantArg::Parity2 => FormulaVariant::Parity2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FrozenWindow {
    R2,
    Cells,
    Edges,
    All,
}

/// Rectangle `R_m`, ball `B(r)` or a window JSON file.
#[derive(Args)]
struct WindowArg {
    #[arg(long, group = "shape")]
    rect: Option<u32>,
    #[arg(long, group = "shape")]
    ball: Option<u32>,
    #[arg(long, group = "shape")]
    window_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form of a word in a, b, A = a^-1, B = b^-1 (exponents as a^3).
    Eval {
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        word: String,
    },
    /// Size, edges and boundary of a window.
    Window {
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        shape: WindowArg,
    },
    /// Number of proper n-colorings of R_m.
    Count {
        #[arg(short = 'N', default_value_t = 2)]
        big_n: u32,
        #[arg(short = 'n')]
        colors: u32,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Counts for m = 1..m_max with the entropy bound checks (CSV).
    Entropy {
        #[arg(short = 'N', default_value_t = 2)]
        big_n: u32,
        #[arg(short = 'n')]
        colors: u32,
        #[arg(short = 'm', long = "m-max")]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Boundary sizes of R_1..R_m: brute force against the closed form.
    Gamma {
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[arg(short = 'm')]
        m: u32,
    },
    /// Properness on a ball and uniqueness of refillings for the frozen 3-coloring.
    Frozen {
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[arg(long, value_enum, ignore_case = true, default_value_t = FrozenWindow::All)]
        window: FrozenWindow,
        /// Radius of the properness check.
        #[arg(long, default_value_t = 8)]
        radius: u32,
        /// Use this closed form instead of the one chosen by N mod 3.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Search for a configuration with monochromatic levels.
    Periodic {
        /// NNSFT JSON: {"n": .., "allowed_a": [[s,t],..], "allowed_b": [..]}.
        #[arg(long)]
        sft: PathBuf,
    },
    /// Glue two separated patterns and complete them.
    Glue {
        /// Pattern JSON files; both must live on the same window.
        #[arg(long, requires = "second")]
        first: Option<PathBuf>,
        #[arg(long)]
        second: Option<PathBuf>,
        /// Random separated pairs on B(radius) when no files are given.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(short = 'N', default_value_t = 2)]
        big_n: u32,
        #[arg(short = 'n', default_value_t = 5)]
        colors: u32,
        #[arg(long, default_value_t = 4)]
        radius: u32,
    },
    /// Extend admissible colorings of R_m to R_{m+1}.
    Extend {
        /// Pattern JSON file on a rectangle.
        #[arg(long)]
        pattern: Option<PathBuf>,
        /// Random R_m colorings when no file is given.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(short = 'N', default_value_t = 2)]
        big_n: u32,
        #[arg(short = 'n', default_value_t = 3)]
        colors: u32,
        #[arg(short = 'm', default_value_t = 2)]
        m: u32,
    },
    /// Build and verify an exponential family of 3-colorings.
    Witness {
        #[arg(short = 'N')]
        n: u32,
        #[arg(short = 'm')]
        m: u32,
        /// Layout used for even N.
        #[arg(long, value_enum, default_value_t = ConventionArg::Consistent)]
        convention: ConventionArg,
        /// Members to verify individually (all when the family is smaller).
        #[arg(long, default_value_t = 4096)]
        verify: u64,
    },
    /// Write a window, or a formula coloring restricted to it, as DOT or JSON.
    Export {
        #[arg(short = 'N', default_value_t = 2)]
        n: u32,
        #[command(flatten)]
        shape: WindowArg,
        #[arg(long, value_enum)]
        config: Option<VariantArg>,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
struct Report {
    text: String,
    ok: bool,
    /// Some requested value could not be computed within budget.
    short: bool,
}

impl Report {
    fn pass(text: String) -> Self {
        Report {
            text,
            ok: true,
            short: false,
        }
    }

    fn checked(text: String, ok: bool) -> Self {
        Report {
            text,
            ok,
            short: false,
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<bs_shift::GroupError> for Failure {
    fn from(e: bs_shift::GroupError) -> Self {
        Failure::Lib(e.into())
    }
}

type Run = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.common.threads > 0 {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(r) => {
            print!("{}", r.text);
            match (r.ok, r.short) {
                (false, _) => ExitCode::from(1),
                (true, true) => ExitCode::from(3),
                (true, false) => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 3,
        Error::Group(
            bs_shift::GroupError::Overflow { .. } | bs_shift::GroupError::LevelOverflow,
        ) => 3,
        Error::Group(_) | Error::Parameter(_) | Error::Format(_) => 2,
        Error::Precondition(_) | Error::Construction(_) => 1,
    }
}

fn limits(c: &Common) -> Limits {
    let mut max_states = c.max_states;
    if let Some(mib) = c.max_memory {
        // a table entry costs roughly a key, a big count and map overhead
        let by_memory = (mib.saturating_mul(1 << 20) / 64) as usize;
        max_states = max_states.min(by_memory.max(1));
    }
    Limits {
        max_vertices: c.max_vertices,
        max_nodes: c.max_nodes,
        max_states,
    }
}

fn params(n: u32) -> Result<GroupParams, Failure> {
    Ok(GroupParams::new(n)?)
}

fn method(m: MethodArg) -> MethodChoice {
    match m {
        MethodArg::Auto => MethodChoice::Auto,
        MethodArg::Backtracking => MethodChoice::Only(Method::Backtracking),
        MethodArg::Frontier => MethodChoice::Only(Method::FrontierDp),
        MethodArg::Tree => MethodChoice::Only(Method::SheetTreeDp),
    }
}

fn check_format(f: Format, allowed: &[Format], cmd: &str) -> Result<(), Failure> {
    if allowed.contains(&f) {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "{cmd} does not support --format {}",
            f.to_possible_value().unwrap().get_name()
        )))
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Lib(Error::Format(format!("{}: {e}", path.display()))))
}

fn pretty(v: &Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("JSON values always serialize")
    )
}

fn build_window(n: u32, shape: &WindowArg, l: &Limits) -> Result<Window, Failure> {
    let p = params(n)?;
    match (shape.rect, shape.ball, &shape.window_file) {
        (Some(m), _, _) => Ok(Window::rectangle(p, m, l)?),
        (_, Some(r), _) => Ok(Window::ball(p, r, l)?),
        (_, _, Some(path)) => Ok(Window::from_json(&read_json(path)?)?),
        _ => Err(Failure::Usage(
            "give one of --rect, --ball, --window-file".into(),
        )),
    }
}

fn run(cli: &Cli) -> Run {
    let c = &cli.common;
    let l = limits(c);
    match &cli.cmd {
        Cmd::Eval { n, word } => cmd_eval(c, *n, word),
        Cmd::Window { n, shape } => cmd_window(c, *n, shape, &l),
        Cmd::Count {
            big_n,
            colors,
            m,
            method: meth,
        } => cmd_count(c, *big_n, *colors, *m, *meth, &l),
        Cmd::Entropy {
            big_n,
            colors,
            m_max,
            method: meth,
        } => cmd_entropy(c, *big_n, *colors, *m_max, *meth, &l),
        Cmd::Gamma { n, m } => cmd_gamma(c, *n, *m, &l),
        Cmd::Frozen {
            n,
            window,
            radius,
            variant,
        } => cmd_frozen(c, *n, *window, *radius, *variant, &l),
        Cmd::Periodic { sft } => cmd_periodic(c, sft),
        Cmd::Glue {
            first,
            second,
            trials,
            big_n,
            colors,
            radius,
        } => cmd_glue(
            c,
            first.as_ref().zip(second.as_ref()),
            *trials,
            *big_n,
            *colors,
            *radius,
            &l,
        ),
        Cmd::Extend {
            pattern,
            trials,
            big_n,
            colors,
            m,
        } => cmd_extend(c, pattern.as_ref(), *trials, *big_n, *colors, *m, &l),
        Cmd::Witness {
            n,
            m,
            convention,
            verify,
        } => cmd_witness(c, *n, *m, *convention, *verify, &l),
        Cmd::Export {
            n,
            shape,
            config,
            out,
        } => cmd_export(c, *n, shape, *config, out.as_ref(), &l),
    }
}

fn cmd_eval(c: &Common, n: u32, word: &str) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "eval")?;
    let g = eval_str(word, &params(n)?)?;
    let shown = if g.is_identity() {
        "identity".to_string()
    } else {
        g.to_string()
    };
    Ok(Report::pass(match c.format {
        Format::Json => {
            pretty(&json!({"word": shown, "j": g.j(), "k": g.k().to_string(), "i": g.i()}))
        }
        _ => format!("{shown} ({},{},{})\n", g.j(), g.k(), g.i()),
    }))
}

fn cmd_window(c: &Common, n: u32, shape: &WindowArg, l: &Limits) -> Run {
    check_format(
        c.format,
        &[Format::Text, Format::Json, Format::Dot],
        "window",
    )?;
    let w = build_window(n, shape, l)?;
    let edges = w.edges()?;
    let boundary = boundary_edge_count(&w)?;
    Ok(Report::pass(match c.format {
        Format::Json => {
            pretty(&json!({"vertices": w.len(), "edges": edges.len(), "boundary": boundary}))
        }
        Format::Dot => w.to_dot(edges),
        _ => format!(
            "vertices: {}\nedges: {}\nboundary: {boundary}\n",
            w.len(),
            edges.len()
        ),
    }))
}

fn cmd_count(c: &Common, big_n: u32, colors: u32, m: u32, meth: MethodArg, l: &Limits) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "count")?;
    let w = Window::rectangle(params(big_n)?, m, l)?;
    let r = count_colorings(&w, &gcs(colors)?, method(meth), l)?;
    let estimate = (r.count.bits() > 0).then(|| ln_biguint(&r.count) / w.len() as f64);
    let est_text = estimate
        .map(|e| format!("{e:.16e}"))
        .unwrap_or_else(|| "-inf".into());
    Ok(Report::pass(match c.format {
        Format::Json => pretty(&json!({
            "N": big_n, "n": colors, "m": m, "cells": w.len(),
            "count": r.count.to_string(), "estimate": estimate,
            "method": r.method.to_string(), "nodes": r.stats.nodes, "peak_states": r.stats.peak_states,
        })),
        _ => format!(
            "{}\nmethod: {}\nln(count)/cells: {est_text}\n",
            r.count, r.method
        ),
    }))
}

fn cmd_entropy(
    c: &Common,
    big_n: u32,
    colors: u32,
    m_max: u32,
    meth: MethodArg,
    l: &Limits,
) -> Run {
    check_format(
        c.format,
        &[Format::Text, Format::Csv, Format::Json],
        "entropy",
    )?;
    let rows = entropy_table(params(big_n)?, colors, m_max, method(meth), l)?;
    let short = rows.iter().any(|r| r.is_resource_failure());
    let ok = rows.iter().all(|r| r.passes() || r.is_resource_failure());
    let text = match c.format {
        Format::Json => pretty(
            &serde_json::to_value(&rows).map_err(|e| Failure::Lib(Error::Format(e.to_string())))?,
        ),
        _ => entropy_csv(&rows),
    };
    Ok(Report { text, ok, short })
}

fn cmd_gamma(c: &Common, n: u32, m_max: u32, l: &Limits) -> Run {
    check_format(
        c.format,
        &[Format::Text, Format::Csv, Format::Json],
        "gamma",
    )?;
    let p = params(n)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let w = Window::rectangle(p, m, l)?;
        let brute = BigUint::from(boundary_edge_count(&w)?);
        let closed = gamma_closed_form(p, m);
        ok &= brute == closed;
        let ratio = BigRational::new(brute.clone().into(), BigUint::from(w.len()).into());
        rows.push((m, brute, closed, ratio));
    }
    let text = match c.format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(m, b, cl, r)| {
                    json!({"m": m, "brute": b.to_string(), "closed": cl.to_string(), "ratio": r.to_string(),
                           "ratio_f64": r.to_f64()})
                })
                .collect(),
        )),
        Format::Csv => {
            let mut s = String::from("m,brute,closed,ratio\n");
            for (m, b, cl, r) in &rows {
                let _ = writeln!(s, "{m},{b},{cl},{r}");
            }
            s
        }
        _ => {
            let mut s = format!("{:>3} {:>12} {:>12}  ratio\n", "m", "brute", "closed");
            for (m, b, cl, r) in &rows {
                let _ = writeln!(s, "{m:>3} {b:>12} {cl:>12}  {r}");
            }
            s
        }
    };
    Ok(Report::checked(text, ok))
}

fn cmd_frozen(
    c: &Common,
    n: u32,
    which: FrozenWindow,
    radius: u32,
    variant: Option<VariantArg>,
    l: &Limits,
) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "frozen")?;
    let p = params(n)?;
    let x = match variant {
        Some(v) => ConfigOracle::formula(v.into(), p)?,
        None => frozen_config(p),
    };
    let x3 = gcs(3)?;
    let ball = Arc::new(Window::ball(p, radius, l)?);
    let violation = verify_proper(&x, &ball, &x3)?;
    let mut ok = violation.is_none();
    let mut text = format!("proper on ball({radius}): {}\n", violation.is_none());
    if let Some(v) = &violation {
        let _ = writeln!(text, "  {v}");
    }
    let mut verdicts = Vec::new();
    for (name, f) in frozen_test_windows(p, l)? {
        let keep = match which {
            FrozenWindow::All => true,
            FrozenWindow::R2 => name == "R2",
            FrozenWindow::Cells => name.starts_with("cell"),
            FrozenWindow::Edges => name.starts_with("edge"),
        };
        if !keep {
            continue;
        }
        let v = verify_frozen_window(&x, &f, &x3, l)?;
        ok &= v.unique;
        if which == FrozenWindow::R2 || !v.unique {
            let _ = writeln!(
                text,
                "window {name}: unique: {} (fillings {})",
                v.unique, v.fillings
            );
        }
        verdicts.push((name, v));
    }
    let unique = verdicts.iter().filter(|(_, v)| v.unique).count();
    let _ = writeln!(text, "windows unique: {unique}/{}", verdicts.len());
    if which != FrozenWindow::R2 {
        let _ = writeln!(text, "unique: {}", unique == verdicts.len());
    }
    if c.format == Format::Json {
        text = pretty(&json!({
            "variant": x_name(&x),
            "proper": violation.is_none(),
            "violation": violation.map(|v| v.to_string()),
            "windows": verdicts.iter().map(|(name, v)| json!({
                "name": name, "unique": v.unique, "fillings": v.fillings.to_string(),
            })).collect::<Vec<_>>(),
        }));
    }
    Ok(Report::checked(text, ok))
}

fn x_name(x: &ConfigOracle) -> &'static str {
    match x {
        ConfigOracle::Formula { variant, .. } => variant.name(),
        _ => "custom",
    }
}

fn cmd_periodic(c: &Common, path: &PathBuf) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "periodic")?;
    let x = Nnsft::from_json(&read_json(path)?)?;
    let found = find_periodic_monochromatic(&x);
    Ok(Report::pass(match (found, c.format) {
        (None, Format::Json) => pretty(&Value::Null),
        (None, _) => "none\n".into(),
        (Some(w), _) => pretty(&w.to_json(&x)),
    }))
}

fn check_glued(out: &Pattern, inputs: [&Pattern; 2], x: &Nnsft) -> Result<(), String> {
    if let Some(v) = first_violation(out, x).map_err(|e| e.to_string())? {
        return Err(v.to_string());
    }
    if !out.is_total() {
        return Err("output is not total".into());
    }
    for q in inputs {
        if q.support().iter().any(|&o| out.get(o) != q.get(o)) {
            return Err("output changes an input cell".into());
        }
    }
    Ok(())
}

fn cmd_glue(
    c: &Common,
    files: Option<(&PathBuf, &PathBuf)>,
    trials: u32,
    big_n: u32,
    colors: u32,
    radius: u32,
    l: &Limits,
) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "glue")?;
    let x = gcs(colors)?;
    if let Some((f1, f2)) = files {
        let a = Pattern::from_json(&read_json(f1)?)?;
        let b = Pattern::from_json(&read_json(f2)?)?;
        let w = Arc::clone(a.window());
        let g = glue(&a, &b, &x, &w)?;
        check_glued(&g, [&a, &b], &x).map_err(|e| Failure::Lib(Error::Construction(e)))?;
        return Ok(Report::pass(match c.format {
            Format::Json => pretty(&g.to_json()),
            _ => format!(
                "glued {} cells on {} vertices: admissible\n",
                a.support().len() + b.support().len(),
                w.len()
            ),
        }));
    }
    let p = params(big_n)?;
    let ball = Arc::new(Window::ball(p, radius, l)?);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut ok = 0;
    let mut failures = Vec::new();
    for t in 0..trials {
        let (a, b) = random_separated_pair(&ball, &x, &mut rng, l)?;
        let res = glue(&a, &b, &x, &ball)
            .map_err(|e| e.to_string())
            .and_then(|g| check_glued(&g, [&a, &b], &x));
        match res {
            Ok(()) => ok += 1,
            Err(e) => failures.push(format!("trial {t}: {e}")),
        }
    }
    let text = match c.format {
        Format::Json => {
            pretty(&json!({"seed": c.seed, "trials": trials, "glued": ok, "failures": failures}))
        }
        _ => {
            let mut s = format!("seed: {}\nglued: {ok}/{trials}\n", c.seed);
            failures
                .iter()
                .for_each(|f| s.push_str(&format!("  {f}\n")));
            s
        }
    };
    Ok(Report::checked(text, failures.is_empty()))
}

fn random_separated_pair(
    w: &Arc<Window>,
    x: &Nnsft,
    rng: &mut ChaCha8Rng,
    l: &Limits,
) -> Result<(Pattern, Pattern), Failure> {
    let p = w.params();
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.shuffle(rng);
    let cap = (w.len() / 4).max(2);
    let first: Vec<usize> = order[..rng.gen_range(1..cap)].to_vec();
    let mut blocked = std::collections::HashSet::new();
    for &o in &first {
        blocked.insert(w.vertex(o).clone());
        blocked.extend(neighbors(w.vertex(o), &p)?);
    }
    let take = rng.gen_range(1..cap);
    let second: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&o| !blocked.contains(w.vertex(o)))
        .take(take)
        .collect();
    let mut part = |cells: &[usize]| -> Result<Pattern, Failure> {
        let full = random_admissible(w, x, None, rng, l)?.ok_or_else(|| {
            Failure::Lib(Error::Construction(
                "window has no admissible coloring".into(),
            ))
        })?;
        let mut q = Pattern::empty(Arc::clone(w), x.alphabet());
        cells.iter().for_each(|&o| q.set(o, full.get(o)));
        Ok(q)
    };
    Ok((part(&first)?, part(&second)?))
}

fn cmd_extend(
    c: &Common,
    file: Option<&PathBuf>,
    trials: u32,
    big_n: u32,
    colors: u32,
    m: u32,
    l: &Limits,
) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "extend")?;
    let x = gcs(colors)?;
    if let Some(path) = file {
        let q = Pattern::from_json(&read_json(path)?)?;
        let e = extend_rectangle(&q, &x, l)?;
        if let Some(v) = first_violation(&e, &x)? {
            return Err(Failure::Lib(Error::Construction(v.to_string())));
        }
        return Ok(Report::pass(match c.format {
            Format::Json => pretty(&e.to_json()),
            _ => format!("extended to {} cells: admissible\n", e.window().len()),
        }));
    }
    let w = Arc::new(Window::rectangle(params(big_n)?, m, l)?);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut failures = Vec::new();
    let mut done = 0;
    for t in 0..trials {
        let Some(q) = random_admissible(&w, &x, None, &mut rng, l)? else {
            return Err(Failure::Lib(Error::Construction(format!(
                "R_{m} has no admissible {colors}-coloring"
            ))));
        };
        let res = extend_rectangle(&q, &x, l)
            .map_err(|e| e.to_string())
            .and_then(
                |e| match first_violation(&e, &x).map_err(|e| e.to_string())? {
                    Some(v) => Err(v.to_string()),
                    None if w
                        .vertices()
                        .iter()
                        .enumerate()
                        .any(|(o, g)| e.at(g) != q.get(o)) =>
                    {
                        Err("extension changes the input".into())
                    }
                    None => Ok(()),
                },
            );
        match res {
            Ok(()) => done += 1,
            Err(e) => failures.push(format!("trial {t}: {e}")),
        }
    }
    let text = match c.format {
        Format::Json => pretty(
            &json!({"seed": c.seed, "trials": trials, "extended": done, "failures": failures}),
        ),
        _ => {
            let mut s = format!(
                "seed: {}\nextended R_{m} -> R_{}: {done}/{trials}\n",
                c.seed,
                m + 1
            );
            failures
                .iter()
                .for_each(|f| s.push_str(&format!("  {f}\n")));
            s
        }
    };
    Ok(Report::checked(text, failures.is_empty()))
}

fn cmd_witness(c: &Common, n: u32, m: u32, conv: ConventionArg, verify: u64, l: &Limits) -> Run {
    check_format(c.format, &[Format::Text, Format::Json], "witness")?;
    let p = params(n)?;
    let fam = if n % 2 == 1 {
        witness_family_odd(p, m, l)?
    } else {
        let conv = match conv {
            ConventionArg::Consistent => EvenConvention::Consistent,
            ConventionArg::PrintedLongBase => EvenConvention::PrintedLongBase,
            ConventionArg::PrintedShortBase => EvenConvention::PrintedShortBase,
        };
        witness_family_even(p, m, conv, l)?
    };
    let x3 = gcs(3)?;
    let size = fam.size();
    let cells = fam.window().len();
    // verify every member when the family is small, else an evenly spread sample
    let total = size.to_u64().filter(|&s| s <= verify);
    let mut checked = 0u64;
    let mut bad = Vec::new();
    let indices: Vec<BigUint> = match total {
        Some(s) => (0..s).map(BigUint::from).collect(),
        None => {
            let step = &size / BigUint::from(verify.max(1));
            (0..verify).map(|t| &step * BigUint::from(t)).collect()
        }
    };
    for idx in &indices {
        let q = fam.member(idx)?;
        if let Some(v) = first_violation(&q, &x3)? {
            bad.push(format!("member {idx}: {v}"));
        }
        checked += 1;
    }
    let count = count_colorings(fam.window(), &x3, MethodChoice::Auto, l);
    let (count_text, dominated) = match &count {
        Ok(r) => (r.count.to_string(), Some(r.count >= size)),
        Err(e) if e.is_resource() => (format!("unavailable ({e})"), None),
        Err(e) => return Err(Failure::Lib(e.clone())),
    };
    let ok = bad.is_empty() && dominated != Some(false);
    let text = match c.format {
        Format::Json => pretty(&json!({
            "N": n, "window_cells": cells, "free_cells": fam.free_cells().len(), "size": size.to_string(),
            "verified": checked, "failures": bad, "count": count.as_ref().ok().map(|r| r.count.to_string()),
        })),
        _ => {
            let mut s = format!(
                "window cells: {cells}\nfree cells: {}\nfamily size: {size}\nverified members: {checked}\ncount: {count_text}\n",
                fam.free_cells().len()
            );
            bad.iter().for_each(|b| s.push_str(&format!("  {b}\n")));
            if let Some(d) = dominated {
                let _ = writeln!(s, "count >= family size: {d}");
            }
            s
        }
    };
    Ok(Report::checked(text, ok))
}

fn cmd_export(
    c: &Common,
    n: u32,
    shape: &WindowArg,
    config: Option<VariantArg>,
    out: Option<&PathBuf>,
    l: &Limits,
) -> Run {
    check_format(
        c.format,
        &[Format::Json, Format::Dot, Format::Text],
        "export",
    )?;
    let w = Arc::new(build_window(n, shape, l)?);
    let pattern = match config {
        Some(v) => Some(restrict(&ConfigOracle::formula(v.into(), w.params())?, &w)?),
        None => None,
    };
    let body = match c.format {
        Format::Dot => {
            let mut dot = w.to_dot(w.edges()?);
            if let Some(q) = &pattern {
                // relabel vertices with their symbols
                for (o, g) in w.vertices().iter().enumerate() {
                    let sym = q.get(o).map(|s| s.to_string()).unwrap_or_default();
                    dot = dot.replacen(
                        &format!("  {o} [label=\"{g}\"];"),
                        &format!("  {o} [label=\"{g} : {sym}\"];"),
                        1,
                    );
                }
            }
            dot
        }
        _ => pretty(&match &pattern {
            Some(q) => q.to_json(),
            None => w.to_json(),
        }),
    };
    match out {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(Report::pass(format!(
                "wrote {} ({} vertices)\n",
                path.display(),
                w.len()
            )))
        }
        None => Ok(Report::pass(body)),
    }
}
