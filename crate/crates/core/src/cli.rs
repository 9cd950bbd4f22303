//! Command-line front end. `run` parses arguments and writes reports to the given sinks;
//! the binary is a thin wrapper around it.

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{classify_book, verify_stable_equivalence, StableTrace};
use crate::front::{compile_to_page, parse_obk, render_svg, write_obk, ObkFile};
use crate::moves::{check_contract, parse_script, run_script};
use crate::page::PageDiagram;
use crate::twist::{book_connected_sum, double_branched_cover, open_book_homology, OpenBook};
use crate::words::{ac_search, verify_trace, MoveTrace, Presentation, SearchLimits, SearchOutcome};
use crate::{exit, Error};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "openbook", version, about = "Diagrams, homology and classification of contact open books")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads for commands that take several input files.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate diagram files (.obk, or .json pages and books).
    Check { files: Vec<PathBuf> },
    /// tb, rot, writhe, handle words and linking numbers of a front.
    Invariants { file: PathBuf },
    /// Homology H0..H5 and spin state of the open book.
    Homology { files: Vec<PathBuf> },
    /// Diffeomorphism and contact type where the diagram determines them.
    Classify { files: Vec<PathBuf> },
    /// Apply a move script (text or JSON) and report each step.
    Move {
        file: PathBuf,
        script: PathBuf,
        /// Write the resulting book as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a presentation move trace (JSON).
    TietzeVerify { trace: PathBuf },
    /// Check a stable-equivalence certificate between two diagrams.
    StableVerify {
        left: PathBuf,
        right: PathBuf,
        /// JSON object {"left": [moves], "right": [moves]}.
        trace: PathBuf,
    },
    /// Breadth-first Andrews–Curtis search for a trivialization.
    AcSearch {
        presentation: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 2_000_000)]
        max_states: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Render a front as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Double cover branched along the binding.
    Cover { file: PathBuf },
    /// Connected sum of two books.
    Sum { left: PathBuf, right: PathBuf },
    /// Write the example corpus.
    Examples { dir: PathBuf },
    /// Random legal move scripts on random diagrams; checks contracts and invariance.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
}

/// An input diagram: either a parsed `.obk` file or a JSON page/book.
pub struct Input {
    pub book: OpenBook,
    pub obk: Option<ObkFile>,
}

pub fn load(path: &Path) -> Result<Input, Error> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Syntax(format!("{}: {e}", path.display())))?;
        let book = if v.get("page").is_some() {
            serde_json::from_value::<OpenBook>(v).map_err(|e| Error::Invalid(e.to_string()))?
        } else {
            OpenBook::trivial(serde_json::from_value::<PageDiagram>(v).map_err(|e| Error::Invalid(e.to_string()))?)
        };
        return Ok(Input { book, obk: None });
    }
    let obk = parse_obk(&text)?;
    Ok(Input {
        book: obk.to_open_book()?,
        obk: Some(obk),
    })
}

fn color_enabled() -> bool {
    match std::env::var("OPENBOOK_COLOR") {
        Ok(v) => !matches!(v.as_str(), "0" | "never" | "off" | "false" | "no"),
        Err(_) => std::io::stdout().is_terminal(),
    }
}

fn paint(s: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn matrix_json(p: &PageDiagram) -> Value {
    match p.framing_matrix() {
        Ok(q) => serde_json::to_value(&q).unwrap_or(Value::Null),
        Err(_) => Value::Null,
    }
}

fn monodromy_json(b: &OpenBook) -> Value {
    let names: Vec<Value> = b
        .monodromy()
        .iter()
        .map(|t| json!({"circle": b.page().circles()[t.circle].name, "exp": t.exp}))
        .collect();
    Value::Array(names)
}

fn homology_report(b: &OpenBook) -> Result<Value, Error> {
    let h = open_book_homology(b)?;
    let mut v = serde_json::to_value(&h).map_err(|e| Error::Invalid(e.to_string()))?;
    v["page"] = json!({"m": b.page().circle_count(), "Q": matrix_json(b.page())});
    v["monodromy"] = monodromy_json(b);
    Ok(v)
}

fn classify_report(b: &OpenBook) -> Result<Value, Error> {
    let c = classify_book(b)?;
    let (m, d) = match c.kind {
        crate::classify::ClassKind::SBundleSum { m, d } => (json!(m), json!(d)),
        crate::classify::ClassKind::Sphere => (json!(0), json!(0)),
        crate::classify::ClassKind::Unknown => (json!(b.page().circle_count()), Value::Null),
    };
    let kind = match c.kind {
        crate::classify::ClassKind::Sphere => "Sphere",
        crate::classify::ClassKind::SBundleSum { .. } => "SBundleSum",
        crate::classify::ClassKind::Unknown => "Unknown",
    };
    Ok(json!({
        "kind": kind,
        "m": m,
        "d": d,
        "diffeo_name": c.diffeo_name,
        "contact_name": c.contact_name,
        "chern": b.page().first_chern().0,
    }))
}

fn text_homology(v: &Value) -> String {
    let mut s = String::new();
    for k in ["H0", "H1", "H2", "H3", "H4", "H5"] {
        s.push_str(&format!("{k:<6}{}\n", v[k].as_str().unwrap_or("?")));
    }
    s.push_str(&format!("{:<6}{}\n", "spin", v["spin"].as_str().unwrap_or("?")));
    s.push_str(&format!("{:<6}{}\n", "c1", v["chern_class_note"].as_str().unwrap_or("")));
    s
}

fn text_classify(v: &Value) -> String {
    let mut s = format!("{}, {}\n", v["diffeo_name"].as_str().unwrap_or("?"), v["contact_name"].as_str().unwrap_or("?"));
    s.push_str(&format!("{:<8}{}\n", "kind", v["kind"].as_str().unwrap_or("?")));
    s.push_str(&format!("{:<8}{}\n", "m", v["m"]));
    s.push_str(&format!("{:<8}{}\n", "d", v["d"]));
    s.push_str(&format!("{:<8}{}\n", "chern", v["chern"]));
    s
}

struct Ctx<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, v: &Value, text: impl FnOnce(&Value) -> String) -> std::io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", serde_json::to_string_pretty(v).unwrap_or_default()),
            Format::Text => write!(self.out, "{}", text(v)),
        }
    }
}

/// Runs `f` over the files (in parallel with `jobs`), preserving input order.
fn batch<F>(files: &[PathBuf], jobs: Option<usize>, f: F) -> Vec<Result<Value, Error>>
where
    F: Fn(&Path) -> Result<Value, Error> + Sync + Send,
{
    match jobs {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build();
            match pool {
                Ok(pool) => pool.install(|| files.par_iter().map(|p| f(p)).collect()),
                Err(_) => files.iter().map(|p| f(p)).collect(),
            }
        }
        _ => files.iter().map(|p| f(p)).collect(),
    }
}

fn report_batch(
    ctx: &mut Ctx<'_>,
    files: &[PathBuf],
    results: Vec<Result<Value, Error>>,
    text: fn(&Value) -> String,
) -> std::io::Result<i32> {
    let mut code = exit::OK;
    let many = files.len() > 1;
    let mut json_out = Vec::new();
    for (p, r) in files.iter().zip(results) {
        match r {
            Ok(v) => {
                if ctx.format == Format::Json {
                    if many {
                        json_out.push(json!({"file": p.display().to_string(), "report": v}));
                    } else {
                        json_out.push(v);
                    }
                } else {
                    if many {
                        writeln!(ctx.out, "== {}", p.display())?;
                    }
                    write!(ctx.out, "{}", text(&v))?;
                }
            }
            Err(e) => {
                writeln!(ctx.err, "{}: {e}", p.display())?;
                if code == exit::OK {
                    code = e.exit_code();
                }
            }
        }
    }
    if ctx.format == Format::Json && !json_out.is_empty() {
        let v = if many { Value::Array(json_out) } else { json_out.remove(0) };
        writeln!(ctx.out, "{}", serde_json::to_string_pretty(&v).unwrap_or_default())?;
    }
    Ok(code)
}

fn invariants_report(path: &Path) -> Result<Value, Error> {
    let input = load(path)?;
    let Some(obk) = input.obk else {
        let circles: Vec<Value> = input
            .book
            .page()
            .circles()
            .iter()
            .map(|c| json!({"name": c.name, "word": c.word.to_string(), "tb": c.tb, "rot": c.rot}))
            .collect();
        return Ok(json!({"components": circles, "Q": matrix_json(input.book.page())}));
    };
    let f = &obk.front;
    let mut comps = Vec::new();
    for c in 0..f.component_count() {
        let inv = f.classical_invariants(c)?;
        comps.push(json!({
            "name": f.knots()[c].name,
            "word": f.handle_word(c)?.to_string(),
            "tb": inv.tb,
            "rot": inv.rot,
            "writhe": inv.writhe,
            "cusps_up": inv.cusps_up,
            "cusps_down": inv.cusps_down,
        }));
    }
    let page = compile_to_page(f)?;
    let linking: serde_json::Map<String, Value> = page
        .linking_entries()
        .iter()
        .map(|(&(i, j), &v)| (format!("{i},{j}"), json!(v)))
        .collect();
    Ok(json!({"components": comps, "linking": linking, "Q": matrix_json(&page)}))
}

fn text_invariants(v: &Value) -> String {
    let mut s = format!("{:<10}{:>6}{:>6}{:>8}  word\n", "component", "tb", "rot", "writhe");
    for c in v["components"].as_array().into_iter().flatten() {
        s.push_str(&format!(
            "{:<10}{:>6}{:>6}{:>8}  {}\n",
            c["name"].as_str().unwrap_or("?"),
            c["tb"].to_string(),
            c["rot"].to_string(),
            if c["writhe"].is_null() { "-".to_string() } else { c["writhe"].to_string() },
            c["word"].as_str().unwrap_or("")
        ));
    }
    if let Some(l) = v["linking"].as_object() {
        for (k, x) in l {
            s.push_str(&format!("lk({k}) = {x}\n"));
        }
    }
    s.push_str(&format!("Q = {}\n", v["Q"]));
    s
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::SYNTAX } else { exit::OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        out,
        err,
    };
    match execute(&cli, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, ctx: &mut Ctx<'_>) -> Result<i32, Error> {
    let color = color_enabled();
    match &cli.command {
        Command::Check { files } => {
            let results = batch(files, cli.jobs, |p| {
                let input = load(p)?;
                Ok(json!({
                    "circles": input.book.page().circle_count(),
                    "handles": input.book.page().handles().len(),
                    "monodromy": input.book.monodromy().len(),
                }))
            });
            let mut code = exit::OK;
            let mut reports = Vec::new();
            for (p, r) in files.iter().zip(results) {
                match r {
                    Ok(v) => {
                        if ctx.format == Format::Text {
                            writeln!(ctx.out, "{} {}", paint("ok", "32", color), p.display())?;
                        }
                        reports.push(json!({"file": p.display().to_string(), "ok": true, "summary": v}));
                    }
                    Err(e) => {
                        writeln!(ctx.err, "{} {}: {e}", paint("error", "31", color), p.display())?;
                        reports.push(json!({"file": p.display().to_string(), "ok": false, "error": e.to_string()}));
                        if code == exit::OK {
                            code = e.exit_code();
                        }
                    }
                }
            }
            if ctx.format == Format::Json {
                writeln!(ctx.out, "{}", serde_json::to_string_pretty(&reports).unwrap_or_default())?;
            }
            Ok(code)
        }
        Command::Invariants { file } => {
            let v = invariants_report(file)?;
            ctx.emit(&v, text_invariants)?;
            Ok(exit::OK)
        }
        Command::Homology { files } => {
            let results = batch(files, cli.jobs, |p| homology_report(&load(p)?.book));
            Ok(report_batch(ctx, files, results, text_homology)?)
        }
        Command::Classify { files } => {
            let results = batch(files, cli.jobs, |p| classify_report(&load(p)?.book));
            Ok(report_batch(ctx, files, results, text_classify)?)
        }
        Command::Move { file, script, out } => {
            let input = load(file)?;
            let moves = parse_script(&std::fs::read_to_string(script)?)?;
            match run_script(&input.book, &moves) {
                Ok((end, log)) => {
                    let mut contracts = Vec::new();
                    let mut cur = log.initial.clone();
                    for s in &log.steps {
                        let next = crate::moves::apply_move(&cur, &s.mv)?;
                        contracts.push(check_contract(&cur, &next, &s.mv).passed);
                        cur = next;
                    }
                    if let Some(p) = out {
                        std::fs::write(p, serde_json::to_string_pretty(&end).unwrap_or_default())?;
                    }
                    let v = json!({"log": log, "contracts": contracts, "final": end});
                    ctx.emit(&v, |v| {
                        let mut s = String::new();
                        for (i, st) in v["log"]["steps"].as_array().into_iter().flatten().enumerate() {
                            let changes: Vec<&str> =
                                st["changes"].as_array().into_iter().flatten().filter_map(|c| c.as_str()).collect();
                            s.push_str(&format!("{:>3}  {}\n", i + 1, changes.join("; ")));
                        }
                        s
                    })?;
                    Ok(exit::OK)
                }
                Err(e) => {
                    if ctx.format == Format::Json {
                        writeln!(
                            ctx.out,
                            "{}",
                            serde_json::to_string_pretty(&json!({"log": e.log, "failed_step": e.step + 1, "error": e.error.to_string()}))
                                .unwrap_or_default()
                        )?;
                    }
                    writeln!(ctx.err, "error: {e}")?;
                    Ok(e.error.exit_code())
                }
            }
        }
        Command::TietzeVerify { trace } => {
            let text = std::fs::read_to_string(trace)?;
            let t: MoveTrace = serde_json::from_str(&text).map_err(|e| Error::Syntax(e.to_string()))?;
            let r = verify_trace(&t);
            let v = serde_json::to_value(&r).map_err(|e| Error::Invalid(e.to_string()))?;
            ctx.emit(&v, |v| {
                if v["accepted"].as_bool() == Some(true) {
                    format!("{} ({} steps)\n", paint("accepted", "32", color), v["steps_applied"])
                } else {
                    format!("{}: {}\n", paint("rejected", "31", color), v["failure"])
                }
            })?;
            Ok(if r.accepted { exit::OK } else { exit::ILLEGAL_MOVE })
        }
        Command::StableVerify { left, right, trace } => {
            let b1 = load(left)?.book;
            let b2 = load(right)?.book;
            let t: StableTrace = serde_json::from_str(&std::fs::read_to_string(trace)?)
                .map_err(|e| Error::Syntax(e.to_string()))?;
            let r = verify_stable_equivalence(&b1, &b2, &t);
            let v = serde_json::to_value(&r).map_err(|e| Error::Invalid(e.to_string()))?;
            ctx.emit(&v, |v| format!("{}\n", serde_json::to_string_pretty(v).unwrap_or_default()))?;
            Ok(if r.accepted { exit::OK } else { exit::ILLEGAL_MOVE })
        }
        Command::AcSearch {
            presentation,
            depth,
            max_states,
            max_len,
        } => {
            let p: Presentation = presentation.parse()?;
            let limits = SearchLimits {
                max_depth: *depth,
                max_relation_length: *max_len,
                max_states: *max_states,
            };
            let r = ac_search(&p, limits)?;
            let v = serde_json::to_value(&r).map_err(|e| Error::Invalid(e.to_string()))?;
            ctx.emit(&v, |_| match &r {
                SearchOutcome::Found { trace, states } => {
                    let mut s = format!("found trivialization in {} steps ({states} states)\n", trace.steps.len());
                    for st in &trace.steps {
                        s.push_str(&format!("  {}\n", serde_json::to_string(st).unwrap_or_default()));
                    }
                    s
                }
                SearchOutcome::Exhausted { depth, states } => {
                    format!("no trivialization up to depth {depth} ({states} states)\n")
                }
            })?;
            Ok(exit::OK)
        }
        Command::Render { file, out } => {
            let input = load(file)?;
            let Some(obk) = input.obk else {
                return Err(Error::Invalid("render needs an .obk front".into()));
            };
            let svg = render_svg(&obk.front);
            match out {
                Some(p) => std::fs::write(p, svg)?,
                None => write!(ctx.out, "{svg}")?,
            }
            Ok(exit::OK)
        }
        Command::Cover { file } => {
            let input = load(file)?;
            match (input.obk, ctx.format) {
                (Some(mut obk), Format::Text) => {
                    let again = obk.twists.clone();
                    obk.twists.extend(again);
                    write!(ctx.out, "{}", write_obk(&obk))?;
                }
                _ => {
                    let b = double_branched_cover(&input.book);
                    writeln!(ctx.out, "{}", serde_json::to_string_pretty(&b).unwrap_or_default())?;
                }
            }
            Ok(exit::OK)
        }
        Command::Sum { left, right } => {
            let b = book_connected_sum(&load(left)?.book, &load(right)?.book);
            writeln!(ctx.out, "{}", serde_json::to_string_pretty(&b).unwrap_or_default())?;
            Ok(exit::OK)
        }
        Command::Examples { dir } => {
            let paths = crate::corpus::emit_examples(dir)?;
            for p in paths {
                writeln!(ctx.out, "{}", p.display())?;
            }
            Ok(exit::OK)
        }
        Command::Fuzz { seed, count, steps } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut failures = Vec::new();
            for case in 0..*count {
                let b = crate::gen::random_trivial_book(&mut rng, 4);
                let script = crate::gen::random_legal_script(&mut rng, &b, *steps);
                let (class0, hom0) = (classify_book(&b)?, open_book_homology(&b)?);
                let mut cur = b.clone();
                for m in &script {
                    let next = crate::moves::apply_move(&cur, m)?;
                    let r = check_contract(&cur, &next, m);
                    if !r.passed {
                        failures.push(format!("case {case}: {m}: {:?}", r.violations));
                    }
                    cur = next;
                }
                let (class1, hom1) = (classify_book(&cur)?, open_book_homology(&cur)?);
                if class0 != class1 || !hom0.same_invariants(&hom1) {
                    failures.push(format!("case {case}: invariants changed"));
                }
            }
            let v = json!({"seed": seed, "cases": count, "failures": failures});
            ctx.emit(&v, |v| {
                let f = v["failures"].as_array().map_or(0, Vec::len);
                let mut s = format!("seed {} cases {} failures {}\n", v["seed"], v["cases"], f);
                for x in v["failures"].as_array().into_iter().flatten() {
                    s.push_str(&format!("  {}\n", x.as_str().unwrap_or("")));
                }
                s
            })?;
            Ok(if failures.is_empty() { exit::OK } else { exit::FAILURE })
        }
    }
}
