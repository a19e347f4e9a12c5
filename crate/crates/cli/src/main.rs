//! `flatlewis`: command-line front end for the workbench.
//!
//! Exit codes: 0 success, 1 a negative answer (refuted, failed check,
//! mismatch), 2 an inconclusive `decide`, 64 usage errors, 65 malformed
//! input, 66 unreadable files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flatlewis::algebra::complex_algebra;
use flatlewis::canonical::{build_full_canonical, build_pointed_canonical, verify_truth_lemma, CanonicalConfig, Sigma};
use flatlewis::correspondence::{condition_for, correspondence_harness, Sweep};
use flatlewis::decide::{decide, Budget, Decider, Verdict};
use flatlewis::kripke::{
    parse_model, read_flat_model, validates_consecution, write_model, FlatFrame, FlatModel, FrameClass,
};
use flatlewis::proof::{check, elaborate, read_file, write_derivation, AxiomBase, NamedAxiom};
use flatlewis::reproduce::reproduce;
use flatlewis::syntax::{
    close_under_single_boxes, close_under_single_negations, parse, parse_consecution, parse_list,
    stability_translation, subformula_closure, Atom, Pretty,
};
use flatlewis::{Consecution, Exec, Formula, FormulaSet};

#[derive(Parser)]
#[command(name = "flatlewis", version, about = "Workbench for flat Heyting-Lewis logic")]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula (or a consecution) and print it back.
    Parse {
        text: String,
        /// Read `Γ => φ` instead of a single formula.
        #[arg(long)]
        consecution: bool,
    },
    /// Evaluate formulas in a model file.
    Eval {
        model: PathBuf,
        #[arg(required = true)]
        formulas: Vec<String>,
        /// Report forcing at this world only.
        #[arg(long)]
        world: Option<String>,
        /// Replace each valuation by its up-closure instead of rejecting it.
        #[arg(long)]
        upclose: bool,
    },
    /// Check whether a frame validates formulas or consecutions.
    Validate {
        frame: PathBuf,
        #[arg(required = true)]
        queries: Vec<String>,
    },
    /// Compare an axiom with its frame condition on enumerated frames.
    Correspond {
        #[arg(long)]
        axiom: String,
        #[arg(long, default_value = "upward-flat")]
        mode: FrameClass,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Four-world frames sampled when `--max-worlds` is 4.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Build a finite canonical model.
    Canonical {
        /// Comma-separated formulas; closed according to `--closure`.
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "")]
        axioms: String,
        /// Keep only pointed segments.
        #[arg(long)]
        pointed: bool,
        #[arg(long, value_enum, default_value_t = Closure::Subformulas)]
        closure: Closure,
        /// Print a Graphviz description of the frame.
        #[arg(long)]
        dot: bool,
    },
    /// Bounded derivability check: `Γ => φ` over an axiom base.
    Decide {
        query: String,
        #[arg(long, default_value = "")]
        axioms: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
        /// Write a refuting model to this file.
        #[arg(long)]
        emit_model: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Complex algebra of a frame and its law report.
    Algebra {
        frame: PathBuf,
        /// Also print the operation tables.
        #[arg(long)]
        tables: bool,
    },
    /// Syntactic and semantic translations.
    #[command(subcommand)]
    Translate(Translate),
    /// Rebuild a worked example and check its stated facts.
    Reproduce {
        /// A target name, or `all`.
        name: String,
    },
    /// Check a derivation file.
    Check {
        file: PathBuf,
        /// Axiom base overriding the one declared in the file.
        #[arg(long)]
        axioms: Option<String>,
        /// Expand macro nodes and check the primitive derivation.
        #[arg(long)]
        elaborate: bool,
    },
}

#[derive(Subcommand)]
enum Translate {
    /// Flat image of a sharp model file.
    Sharp2flat {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Relativise a formula to a fresh atom.
    Stability {
        formula: String,
        #[arg(long, default_value = "s")]
        atom: String,
        /// Print `atom → st(φ)`.
        #[arg(long)]
        guarded: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Closure {
    Subformulas,
    Negations,
    Boxes,
}

enum Failure {
    Usage(String),
    Input(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Input(_) => 65,
            Failure::Io(_) => 66,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<u8, Failure>;

fn input<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{what}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(input(text))
}

fn base(text: &str) -> Result<AxiomBase, Failure> {
    AxiomBase::parse_list(text).map_err(|e| Failure::Usage(e.to_string()))
}

fn frame_file(path: &Path) -> Result<FlatFrame, Failure> {
    let text = read(path)?;
    let spec = parse_model(&text).map_err(input(&path.display().to_string()))?;
    spec.frame().map_err(input(&path.display().to_string()))
}

fn model_file(path: &Path, upclose: bool) -> Result<FlatModel, Failure> {
    read_flat_model(&read(path)?, upclose).map_err(input(&path.display().to_string()))
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn emit(json: bool, value: Value, text: impl FnOnce() -> String) {
    if json {
        println!("{value}");
    } else {
        print!("{}", text());
    }
}

fn names(frame: &FlatFrame, set: &flatlewis::kripke::WorldSet) -> Vec<String> {
    set.iter().map(|w| frame.name(w).to_string()).collect()
}

fn cmd_parse(json: bool, text: &str, consecution: bool) -> Outcome {
    if consecution {
        let c = parse_consecution(text).map_err(input(text))?;
        let premises: Vec<String> = c.premises.iter().map(|f| f.to_string()).collect();
        emit(
            json,
            json!({ "premises": premises, "conclusion": c.conclusion.to_string() }),
            || format!("{c}\n"),
        );
        return Ok(0);
    }
    let f = formula(text)?;
    let atoms: Vec<String> = f.atoms().iter().map(|a| a.to_string()).collect();
    let subformulas = subformula_closure(&[f.clone()].into_iter().collect()).len();
    emit(
        json,
        json!({ "formula": f.to_string(), "unicode": Pretty(&f).to_string(), "atoms": atoms, "subformulas": subformulas }),
        || format!("{f}\n{}\n", Pretty(&f)),
    );
    Ok(0)
}

fn cmd_eval(json: bool, path: &Path, formulas: &[String], world: Option<&str>, upclose: bool) -> Outcome {
    let model = model_file(path, upclose)?;
    let frame = model.frame();
    let w = match world {
        Some(name) => Some(
            frame
                .index_of(name)
                .ok_or_else(|| Failure::Usage(format!("no world named `{name}`")))?,
        ),
        None => None,
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    for src in formulas {
        let f = formula(src)?;
        let truth = model.truth_set(&f);
        let mut row = json!({ "formula": f.to_string(), "truth_set": names(frame, &truth) });
        match w {
            Some(w) => {
                let forced = truth.contains(w);
                row["world"] = json!(frame.name(w));
                row["forced"] = json!(forced);
                let sign = if forced { "⊩" } else { "⊮" };
                text.push_str(&format!("{} {sign} {f}\n", frame.name(w)));
            }
            None => text.push_str(&format!("{f}: {{{}}}\n", names(frame, &truth).join(", "))),
        }
        rows.push(row);
    }
    emit(json, json!({ "results": rows }), || text);
    Ok(0)
}

fn cmd_validate(json: bool, path: &Path, queries: &[String]) -> Outcome {
    let frame = frame_file(path)?;
    let algebra = complex_algebra(&frame);
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for src in queries {
        let c = parse_consecution(src).map_err(input(src))?;
        let valid = validates_consecution(&frame, &c);
        debug_assert_eq!(valid, algebra.validates_consecution(&c));
        all &= valid;
        text.push_str(&format!("{}: {c}\n", if valid { "valid" } else { "refuted" }));
        rows.push(json!({ "query": c.to_string(), "valid": valid }));
    }
    emit(json, json!({ "worlds": frame.len(), "results": rows }), || text);
    Ok(if all { 0 } else { 1 })
}

fn cmd_correspond(json: bool, axiom: &str, mode: FrameClass, max_worlds: usize, samples: usize, seq: bool) -> Outcome {
    let a = NamedAxiom::from_name(axiom).ok_or_else(|| Failure::Usage(format!("unknown axiom `{axiom}`")))?;
    if !(1..=4).contains(&max_worlds) {
        return Err(Failure::Usage("--max-worlds must be between 1 and 4".into()));
    }
    let cond =
        condition_for(a, mode).ok_or_else(|| Failure::Usage(format!("no frame condition for {a} on {mode} frames")))?;
    let report = correspondence_harness(
        cond,
        &Sweep::new(mode, max_worlds).with_samples(samples).with_exec(exec(seq)),
    );
    let passed = report.passed();
    emit(json, serde_json::to_value(&report).expect("report serialises"), || {
        let mut out = format!(
            "{}: {a} ⟺ {} on {mode} frames ({} exhaustive, {} sampled, condition holds on {}, {} discrepancies)\n",
            if passed { "pass" } else { "fail" },
            cond.name,
            report.exhaustive_frames,
            report.sampled_frames,
            report.condition_holds,
            report.discrepancies.len()
        );
        for d in &report.discrepancies {
            out.push_str(&format!(
                "# witness: validates={} condition={}\n{}",
                d.validates, d.condition, d.frame
            ));
        }
        out
    });
    Ok(if passed { 0 } else { 1 })
}

fn cmd_canonical(json: bool, sigma: &str, axioms: &str, pointed: bool, closure: Closure, dot: bool) -> Outcome {
    let seed: FormulaSet = parse_list(sigma).map_err(input(sigma))?.into_iter().collect();
    let closed = match closure {
        Closure::Subformulas => subformula_closure(&seed),
        Closure::Negations => close_under_single_negations(&seed),
        Closure::Boxes => close_under_single_boxes(&seed),
    };
    let sigma = Sigma::new(&closed).map_err(|e| Failure::Usage(e.to_string()))?;
    let base = base(axioms)?;
    let oracle = Decider::default();
    let cfg = CanonicalConfig::default();
    let built = if pointed {
        build_pointed_canonical(&sigma, &base, &oracle, &cfg)
    } else {
        build_full_canonical(&sigma, &base, &oracle, &cfg)
    };
    let frame = built.map_err(|e| Failure::Input(e.to_string()))?;
    if dot && !json {
        print!("{}", frame.to_dot());
        return Ok(0);
    }
    let truth = verify_truth_lemma(&frame);
    let n = frame.len();
    let pairs = |rel: &dyn Fn(usize, usize) -> bool| -> Vec<[usize; 2]> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| rel(i, j))
            .map(|(i, j)| [i, j])
            .collect()
    };
    let leq = pairs(&|i, j| i != j && frame.leq(i, j));
    let r = pairs(&|i, j| frame.r(i, j));
    let witness = frame.transitivity_witness();
    let theories: Vec<String> = frame.theories.iter().map(|t| t.to_string()).collect();
    let segments: Vec<String> = (0..n).map(|i| frame.describe(i)).collect();
    let value = json!({
        "sigma": sigma.members().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "base": base.to_string(),
        "construction": if pointed { "pointed" } else { "full" },
        "theories": theories,
        "segments": segments,
        "leq": leq,
        "r": r,
        "r_transitive": witness.is_none(),
        "transitivity_witness": witness.map(|(a, b, c)| [a, b, c]),
        "truth_lemma": truth,
        "dot": if dot { Some(frame.to_dot()) } else { None },
    });
    emit(json, value, || {
        let mut out = format!("sigma: {} ({} formulas)\nbase: {base}\n", sigma.as_set(), sigma.len());
        out.push_str(&format!(
            "{} construction\ntheories ({}):\n",
            if pointed { "pointed" } else { "full" },
            theories.len()
        ));
        for (i, t) in theories.iter().enumerate() {
            out.push_str(&format!("  T{i} {t}\n"));
        }
        out.push_str(&format!("segments ({n}):\n"));
        for (i, s) in segments.iter().enumerate() {
            out.push_str(&format!("  s{i} {s}\n"));
        }
        let show = |ps: &[[usize; 2]], sep: &str| {
            ps.iter()
                .map(|[a, b]| format!("s{a}{sep}s{b}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        out.push_str(&format!("leq: {}\nR: {}\n", show(&leq, "<="), show(&r, "->")));
        match witness {
            None => out.push_str("R transitive: yes\n"),
            Some((a, b, c)) => out.push_str(&format!("R transitive: no (s{a} R s{b} R s{c}, not s{a} R s{c})\n")),
        }
        out.push_str(&format!(
            "truth lemma: {} ({} segments x {} formulas, {} violations)\n",
            if truth.holds() { "holds" } else { "FAILS" },
            truth.segments,
            truth.formulas,
            truth.violations.len()
        ));
        for v in &truth.violations {
            out.push_str(&format!(
                "  {} {}: forced={} member={}\n",
                v.segment, v.formula, v.forced, v.member
            ));
        }
        out
    });
    Ok(if truth.holds() { 0 } else { 1 })
}

struct DecideArgs<'a> {
    query: &'a str,
    axioms: &'a str,
    max_worlds: usize,
    timeout_ms: u64,
    emit_model: Option<&'a Path>,
    sequential: bool,
}

fn cmd_decide(json: bool, a: DecideArgs<'_>) -> Outcome {
    let c: Consecution = parse_consecution(a.query).map_err(input(a.query))?;
    let base = base(a.axioms)?;
    if !(1..=4).contains(&a.max_worlds) {
        return Err(Failure::Usage("--max-worlds must be between 1 and 4".into()));
    }
    let budget = Budget {
        max_worlds: a.max_worlds,
        wall_clock_ms: a.timeout_ms,
        exec: exec(a.sequential),
        ..Budget::default()
    };
    let verdict = decide(&c, &base, &budget);
    let mut value = json!({ "query": c.to_string(), "base": base.to_string(), "verdict": verdict.label() });
    let text = match &verdict {
        Verdict::Valid(d) => {
            value["derivation_size"] = json!(d.size());
            value["derivation"] = json!(write_derivation(d));
            format!("valid: {c}\n{}\n", write_derivation(d))
        }
        Verdict::Invalid { model, world } => {
            let file = write_model(model);
            if let Some(path) = a.emit_model {
                write(path, &file)?;
            }
            value["world"] = json!(model.frame().name(*world));
            value["worlds"] = json!(model.frame().len());
            value["model"] = json!(file);
            format!("invalid: {c}\n# refuted at {}\n{file}", model.frame().name(*world))
        }
        Verdict::Exhausted(e) => {
            value["exhaustion"] = serde_json::to_value(e).expect("report serialises");
            format!(
                "exhausted: {c}\n# searched {} frames up to {} worlds, {} proof steps, {} ms{}\n",
                e.frames_searched,
                e.worlds_searched,
                e.proof_steps,
                e.elapsed_ms,
                if e.timed_out { ", timed out" } else { "" }
            )
        }
    };
    emit(json, value, || text);
    Ok(match verdict {
        Verdict::Valid(_) => 0,
        Verdict::Invalid { .. } => 1,
        Verdict::Exhausted(_) => 2,
    })
}

fn cmd_algebra(json: bool, path: &Path, tables: bool) -> Outcome {
    let frame = frame_file(path)?;
    let algebra = complex_algebra(&frame);
    let report = algebra.check_laws();
    let mut value = serde_json::to_value(&report).expect("report serialises");
    let t = algebra.tables();
    let carrier: Vec<Vec<String>> = t.carrier.iter().map(|s| names(&frame, s)).collect();
    if tables {
        value["carrier"] = json!(carrier);
        value["tables"] = json!({ "meet": t.meet, "join": t.join, "imp": t.imp, "sto": t.sto });
    }
    emit(json, value, || {
        let mut out = format!("carrier: {} upsets\n", report.carrier_size);
        for law in &report.laws {
            out.push_str(&format!(
                "law {}: {}",
                law.name,
                if law.holds { "pass" } else { "fail" }
            ));
            if let Some(w) = &law.witness {
                out.push_str(&format!(" (witness {})", w.join(" ")));
            }
            out.push('\n');
        }
        if tables {
            let k = carrier.len();
            for (i, c) in carrier.iter().enumerate() {
                out.push_str(&format!("a{i} = {{{}}}\n", c.join(",")));
            }
            for (name, table) in [("meet", &t.meet), ("join", &t.join), ("imp", &t.imp), ("sto", &t.sto)] {
                out.push_str(&format!("{name}:\n"));
                for row in table.chunks(k) {
                    let cells: Vec<String> = row.iter().map(|x| format!("a{x}")).collect();
                    out.push_str(&format!("  {}\n", cells.join(" ")));
                }
            }
        }
        out
    });
    Ok(if report.flat_laws_hold() { 0 } else { 1 })
}

fn cmd_translate(json: bool, t: &Translate) -> Outcome {
    match t {
        Translate::Sharp2flat { input: path, output } => {
            let text = read(path)?;
            let spec = parse_model(&text).map_err(input(&path.display().to_string()))?;
            let sharp = spec.sharp_model(false).map_err(input(&path.display().to_string()))?;
            let (flat, _) = sharp.to_flat();
            let file = write_model(&flat);
            if let Some(out) = output {
                write(out, &file)?;
            }
            emit(json, json!({ "worlds": flat.frame().len(), "model": file }), || {
                if output.is_some() {
                    String::new()
                } else {
                    file.clone()
                }
            });
        }
        Translate::Stability {
            formula: src,
            atom,
            guarded,
        } => {
            let f = formula(src)?;
            let a = Atom::new(atom);
            let st = stability_translation(&f, &a).map_err(|e| Failure::Input(e.to_string()))?;
            let out = if *guarded {
                Formula::imp(Formula::Atom(a), st)
            } else {
                st
            };
            emit(
                json,
                json!({ "formula": out.to_string(), "unicode": Pretty(&out).to_string() }),
                || format!("{out}\n"),
            );
        }
    }
    Ok(0)
}

fn cmd_reproduce(json: bool, name: &str) -> Outcome {
    let reports = reproduce(name).map_err(|e| Failure::Usage(e.to_string()))?;
    let passed = reports.iter().all(|r| r.passed());
    emit(json, json!({ "passed": passed, "reports": reports }), || {
        let mut out = String::new();
        for r in &reports {
            out.push_str(&format!(
                "{} {} ({} ms): {}\n",
                if r.passed() { "PASS" } else { "FAIL" },
                r.target,
                r.elapsed_ms,
                r.summary
            ));
            for c in &r.checks {
                out.push_str(&format!("  [{}] {}", if c.passed { "ok" } else { "!!" }, c.claim));
                if let Some(d) = &c.detail {
                    out.push_str(&format!(" ({d})"));
                }
                out.push('\n');
            }
        }
        out
    });
    Ok(if passed { 0 } else { 1 })
}

fn cmd_check(json: bool, path: &Path, axioms: Option<&str>, expand: bool) -> Outcome {
    let file = read_file(&read(path)?).map_err(input(&path.display().to_string()))?;
    let base = match axioms {
        Some(text) => base(text)?,
        None => file.base.clone().unwrap_or_default(),
    };
    let (d, result) = if expand {
        match elaborate(&file.root) {
            Ok(d) => {
                let r = flatlewis::proof::check_primitive(&d, &base);
                (d, r)
            }
            Err(e) => (file.root.clone(), Err(e)),
        }
    } else {
        let r = check(&file.root, &base);
        (file.root.clone(), r)
    };
    let value = json!({
        "name": file.name,
        "base": base.to_string(),
        "conclusion": d.conclusion.to_string(),
        "size": d.size(),
        "height": d.height(),
        "valid": result.is_ok(),
        "error": result.as_ref().err().map(|e| e.to_string()),
    });
    emit(json, value, || match &result {
        Ok(()) => format!("ok: {} ({} nodes, base {base})\n", d.conclusion, d.size()),
        Err(e) => format!("error: {e}\n"),
    });
    Ok(if result.is_ok() { 0 } else { 1 })
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Parse { text, consecution } => cmd_parse(json, text, *consecution),
        Command::Eval {
            model,
            formulas,
            world,
            upclose,
        } => cmd_eval(json, model, formulas, world.as_deref(), *upclose),
        Command::Validate { frame, queries } => cmd_validate(json, frame, queries),
        Command::Correspond {
            axiom,
            mode,
            max_worlds,
            samples,
            sequential,
        } => cmd_correspond(json, axiom, *mode, *max_worlds, *samples, *sequential),
        Command::Canonical {
            sigma,
            axioms,
            pointed,
            closure,
            dot,
        } => cmd_canonical(json, sigma, axioms, *pointed, *closure, *dot),
        Command::Decide {
            query,
            axioms,
            max_worlds,
            timeout_ms,
            emit_model,
            sequential,
        } => cmd_decide(
            json,
            DecideArgs {
                query,
                axioms,
                max_worlds: *max_worlds,
                timeout_ms: *timeout_ms,
                emit_model: emit_model.as_deref(),
                sequential: *sequential,
            },
        ),
        Command::Algebra { frame, tables } => cmd_algebra(json, frame, *tables),
        Command::Translate(t) => cmd_translate(json, t),
        Command::Reproduce { name } => cmd_reproduce(json, name),
        Command::Check {
            file,
            axioms,
            elaborate,
        } => cmd_check(json, file, axioms.as_deref(), *elaborate),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("flatlewis: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
