//! The `glproof` command line. Exit codes: 0 for proved, accepted or valid;
//! 1 for not proved, rejected or countermodel; 2 for usage and parse errors.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::check::check_proof;
use crate::format::{parse_proof_file, print_proof};
use crate::formula::{parse_formula, Formula};
use crate::oracle::{oracle_validity, ModelBound, OracleVerdict};
use crate::pipeline::{run_pipeline, PipelineError};
use crate::proof::AnyProof;
use crate::render::{render, RenderFormat};
use crate::search::{
    decide_csgl_with, decide_glseq, CsglStrategy, SearchConfig, SearchError, SearchResult,
};
use crate::semantics::{eval, parse_model};
use crate::sequent::{GentzenSequent, Label, LabeledSequent};
use crate::transform::{run_pass, Pass};

#[derive(Debug, Parser)]
#[command(name = "glproof", version, about = "Proof search, checking and transformation for the provability logic GL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SearchCalculus {
    Glseq,
    Csgl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Leaf,
    Deferred,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a proof of a formula.
    Decide {
        /// A formula, a .glf file, or - for stdin.
        formula: String,
        #[arg(long, value_enum, default_value = "glseq")]
        calculus: SearchCalculus,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        /// Rule order for CSGL search.
        #[arg(long, value_enum, default_value = "leaf")]
        strategy: Strategy,
        /// Treat sequents as multisets in the failure cache.
        #[arg(long)]
        multiset: bool,
        #[arg(long)]
        no_loop_check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Check a proof file.
    Check {
        file: String,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Apply one transformation pass to a proof file.
    Transform {
        #[arg(long, value_parser = parse_pass)]
        pass: Pass,
        file: String,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Decide validity by countermodel search, or evaluate in a given model.
    Oracle {
        formula: String,
        /// Largest branch length of the trees searched.
        #[arg(long)]
        bound: Option<usize>,
        /// Evaluate at every world of a .glm model instead of searching.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Render a proof file as text, DOT or LaTeX.
    Render {
        file: String,
        #[arg(long, value_parser = parse_render_format, default_value = "text")]
        format: RenderFormat,
    },
    /// Prove a formula in CSGL and carry the proof through every pass to G3GLext.
    Pipeline {
        formula: String,
        /// Directory receiving one proof file per stage.
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
}

fn parse_pass(s: &str) -> Result<Pass, String> {
    s.parse()
}

fn parse_render_format(s: &str) -> Result<RenderFormat, String> {
    s.parse()
}

/// A failure that ends the command.
struct Exit {
    code: i32,
    line: String,
}

impl Exit {
    fn usage(kind: &str, at: &str, message: impl std::fmt::Display) -> Exit {
        Exit {
            code: 2,
            line: format!("{kind}\t{at}\t{message}"),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn print(&mut self, text: &str) {
        let _ = self.stdout.write_all(text.as_bytes());
        if !text.is_empty() && !text.ends_with('\n') {
            let _ = self.stdout.write_all(b"\n");
        }
    }

    fn print_json(&mut self, value: serde_json::Value) {
        let text = serde_json::to_string_pretty(&value).expect("json values serialize");
        self.print(&text);
    }

    fn read_source(&mut self, arg: &str) -> Result<String, Exit> {
        if arg == "-" {
            let mut text = String::new();
            self.stdin
                .read_to_string(&mut text)
                .map_err(|e| Exit::usage("IoError", "-", e))?;
            return Ok(text);
        }
        fs::read_to_string(arg).map_err(|e| Exit::usage("IoError", arg, e))
    }

    fn formula(&mut self, arg: &str) -> Result<Formula, Exit> {
        let text = if arg == "-" || (arg.ends_with(".glf") && Path::new(arg).is_file()) {
            let raw = self.read_source(arg)?;
            raw.lines()
                .map(|l| l.split('#').next().unwrap_or(""))
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            arg.to_string()
        };
        parse_formula(&text).map_err(|e| Exit::usage("SyntaxError", &e.position.to_string(), e))
    }

    fn proof(&mut self, arg: &str) -> Result<AnyProof, Exit> {
        let text = self.read_source(arg)?;
        parse_proof_file(&text)
            .map_err(|e| Exit::usage("SyntaxError", &format!("{}:{}", e.line, e.column), e.message))
    }
}

fn search_error(e: SearchError) -> Exit {
    match e {
        SearchError::FuelExhausted(n) => Exit {
            code: 1,
            line: format!("FuelExhausted\t.\tsearch stopped after {n} steps"),
        },
    }
}

fn verdict_json(v: &OracleVerdict) -> serde_json::Value {
    match v {
        OracleVerdict::Valid { bound_too_small } => {
            json!({ "result": "valid", "bound_too_small": bound_too_small })
        }
        OracleVerdict::Countermodel { model, world } => {
            json!({ "result": "countermodel", "world": world, "model": model.to_string() })
        }
    }
}

fn decide(
    io: &mut Io,
    formula: &str,
    calculus: SearchCalculus,
    cfg: SearchConfig,
    strategy: Strategy,
    format: OutputFormat,
) -> Result<i32, Exit> {
    let f = io.formula(formula)?;
    let outcome: Result<(Option<AnyProof>, String, Option<OracleVerdict>), SearchError> = match calculus {
        SearchCalculus::Glseq => decide_glseq(&GentzenSequent::of_formula(f), cfg).map(|r| match r {
            SearchResult::Proved(p) => (Some(p.into()), String::new(), None),
            SearchResult::NotProved { saturated, hint } => (None, saturated.to_string(), hint),
        }),
        SearchCalculus::Csgl => {
            let strategy = match strategy {
                Strategy::Leaf => CsglStrategy::Leaf,
                Strategy::Deferred => CsglStrategy::Deferred,
            };
            let t = LabeledSequent::of_formula(&Label::new("x"), f);
            decide_csgl_with(&t, cfg, strategy).map(|r| match r {
                SearchResult::Proved(p) => (Some(p.into()), String::new(), None),
                SearchResult::NotProved { saturated, hint } => (None, saturated.to_string(), hint),
            })
        }
    };
    let (proof, saturated, hint) = outcome.map_err(search_error)?;
    match (proof, format) {
        (Some(p), OutputFormat::Text) => {
            io.print(&print_proof(&p));
            Ok(0)
        }
        (Some(p), OutputFormat::Json) => {
            io.print_json(json!({
                "result": "proved",
                "calculus": p.calculus().name(),
                "proof": print_proof(&p),
            }));
            Ok(0)
        }
        (None, OutputFormat::Text) => {
            let mut out = format!("NotProved\t.\tsaturated sequent {saturated}\n");
            if let Some(v) = &hint {
                out.push_str(&v.to_string());
            }
            io.print(&out);
            Ok(1)
        }
        (None, OutputFormat::Json) => {
            io.print_json(json!({
                "result": "not-proved",
                "saturated": saturated,
                "oracle": hint.as_ref().map(verdict_json),
            }));
            Ok(1)
        }
    }
}

fn check(io: &mut Io, file: &str, format: OutputFormat) -> Result<i32, Exit> {
    let p = io.proof(file)?;
    let report = check_proof(&p);
    match format {
        OutputFormat::Text if report.accepted => io.print(&format!("accepted\t{}", p.calculus())),
        OutputFormat::Text => io.print(&report.to_string()),
        OutputFormat::Json => io.print_json(json!({
            "calculus": p.calculus().name(),
            "accepted": report.accepted,
            "failures": report.failures,
        })),
    }
    Ok(if report.accepted { 0 } else { 1 })
}

fn transform(io: &mut Io, pass: Pass, file: &str, format: OutputFormat) -> Result<i32, Exit> {
    let p = io.proof(file)?;
    let input_check = check_proof(&p);
    if !input_check.accepted {
        match format {
            OutputFormat::Text => io.print(&input_check.to_string()),
            OutputFormat::Json => io.print_json(json!({
                "result": "rejected",
                "failures": input_check.failures,
            })),
        }
        return Ok(1);
    }
    match run_pass(pass, &p) {
        Ok((out, report)) => {
            match format {
                OutputFormat::Text => io.print(&print_proof(&out)),
                OutputFormat::Json => io.print_json(json!({
                    "result": "ok",
                    "report": report,
                    "proof": print_proof(&out),
                })),
            }
            Ok(0)
        }
        Err(e) => {
            match format {
                OutputFormat::Text => io.print(&format!("{}\t.\t{e}", e.code())),
                OutputFormat::Json => io.print_json(json!({
                    "result": "error",
                    "code": e.code(),
                    "message": e.to_string(),
                })),
            }
            Ok(1)
        }
    }
}

fn oracle(
    io: &mut Io,
    formula: &str,
    bound: Option<usize>,
    model: Option<&Path>,
    format: OutputFormat,
) -> Result<i32, Exit> {
    let f = io.formula(formula)?;
    if let Some(path) = model {
        let text = fs::read_to_string(path).map_err(|e| Exit::usage("IoError", &path.display().to_string(), e))?;
        let m = parse_model(&text).map_err(|e| Exit::usage("ModelError", &path.display().to_string(), e))?;
        let mut falsified = Vec::new();
        for w in m.worlds() {
            if !eval(&m, w, &f).expect("worlds of the model are known") {
                falsified.push(w.clone());
            }
        }
        match format {
            OutputFormat::Text if falsified.is_empty() => io.print("true at every world"),
            OutputFormat::Text => io.print(&format!("false at {}", falsified.join(" "))),
            OutputFormat::Json => io.print_json(json!({ "falsified": falsified })),
        }
        return Ok(if falsified.is_empty() { 0 } else { 1 });
    }
    let bound = bound.map(|depth| ModelBound { depth }).unwrap_or_else(|| ModelBound::default_for(&f));
    let verdict = oracle_validity(&f, bound).map_err(|e| Exit::usage("OracleTooLarge", ".", e))?;
    match format {
        OutputFormat::Text => io.print(&verdict.to_string()),
        OutputFormat::Json => io.print_json(verdict_json(&verdict)),
    }
    Ok(if verdict.is_valid() { 0 } else { 1 })
}

fn pipeline(
    io: &mut Io,
    formula: &str,
    trace: Option<&Path>,
    fuel: usize,
    format: OutputFormat,
) -> Result<i32, Exit> {
    let f = io.formula(formula)?;
    let cfg = SearchConfig {
        fuel,
        ..SearchConfig::default()
    };
    let stages = match run_pipeline(&f, cfg) {
        Ok(stages) => stages,
        Err(PipelineError::Search(e)) => return Err(search_error(e)),
        Err(e) => {
            let lines = match &e {
                PipelineError::NotProved { saturated, hint } => {
                    let mut out = format!("NotProved\t.\tsaturated sequent {saturated}\n");
                    if let Some(v) = hint {
                        out.push_str(&v.to_string());
                    }
                    out
                }
                PipelineError::Transform { stage, error } => format!("{}\t.\t{stage}: {error}", error.code()),
                PipelineError::Rejected { stage, check } => check
                    .failures
                    .iter()
                    .map(|x| format!("{}\t{}\t{stage}: {}\n", x.code, x.address, x.message))
                    .collect(),
                PipelineError::Search(_) => unreachable!("handled above"),
            };
            match format {
                OutputFormat::Text => io.print(&lines),
                OutputFormat::Json => io.print_json(json!({ "result": "failed", "error": lines.trim_end() })),
            }
            return Ok(1);
        }
    };
    if let Some(dir) = trace {
        let at = dir.display().to_string();
        fs::create_dir_all(dir).map_err(|e| Exit::usage("IoError", &at, e))?;
        for (i, s) in stages.iter().enumerate() {
            let path = dir.join(s.file_name(i));
            fs::write(&path, print_proof(&s.proof)).map_err(|e| Exit::usage("IoError", &path.display().to_string(), e))?;
        }
    }
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            for s in &stages {
                match &s.report {
                    Some(r) => out.push_str(&format!("{r}\n")),
                    None => out.push_str(&format!(
                        "search\tnodes {}\theight {}\t{}\n",
                        s.proof.size(),
                        s.proof.height(),
                        s.proof.calculus()
                    )),
                }
            }
            io.print(&out);
        }
        OutputFormat::Json => {
            let list: Vec<serde_json::Value> = stages
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    json!({
                        "stage": s.name,
                        "file": s.file_name(i),
                        "calculus": s.proof.calculus().name(),
                        "conclusion": s.proof.conclusion_text(),
                        "nodes": s.proof.size(),
                        "height": s.proof.height(),
                        "report": s.report,
                    })
                })
                .collect();
            io.print_json(json!({ "result": "ok", "stages": list }));
        }
    }
    Ok(0)
}

fn render_file(io: &mut Io, file: &str, format: RenderFormat) -> Result<i32, Exit> {
    let p = io.proof(file)?;
    io.print(&render(&p, format));
    Ok(0)
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let mut io = Io { stdin, stdout };
    let result = match cli.command {
        Command::Decide {
            formula,
            calculus,
            fuel,
            strategy,
            multiset,
            no_loop_check,
            format,
        } => {
            let cfg = SearchConfig {
                fuel,
                set_mode: !multiset,
                loop_check: !no_loop_check,
            };
            decide(&mut io, &formula, calculus, cfg, strategy, format)
        }
        Command::Check { file, format } => check(&mut io, &file, format),
        Command::Transform { pass, file, format } => transform(&mut io, pass, &file, format),
        Command::Oracle {
            formula,
            bound,
            model,
            format,
        } => oracle(&mut io, &formula, bound, model.as_deref(), format),
        Command::Render { file, format } => render_file(&mut io, &file, format),
        Command::Pipeline {
            formula,
            emit_trace,
            fuel,
            format,
        } => pipeline(&mut io, &formula, emit_trace.as_deref(), fuel, format),
    };
    match result {
        Ok(code) => code,
        Err(exit) => {
            let _ = writeln!(stderr, "{}", exit.line);
            exit.code
        }
    }
}

