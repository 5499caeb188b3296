//! `listlogic` command-line driver.
//!
//! Exit status: 0 on success, 1 when the answer is negative (a false
//! formula, UNSAT, no tiling), 2 when the command could not be carried out.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value as Json};

use listlogic::benchlab::{
    domino_theory, explist_term, expn, oracle_lang_with, oracle_tiling_with, regex_ineq_formula, word_to_string,
    DominoSystem, Flavor, LangGuard, RegExpr, TilingGuard,
};
use listlogic::eval::DEFAULT_STEP_BUDGET;
use listlogic::language::{classify, classify_formula, formula_rank, formula_size, parse_expr, rank, size, Expr};
use listlogic::sat::{sat_check_with, GroundConfig, DEFAULT_EXPANSION_BUDGET};
use listlogic::unfold::{Unfolder, DEFAULT_MAX_SIZE};
use listlogic::{
    parse_formula, parse_term, Counters, Env, Error, EvalConfig, Evaluator, SatVerdict, Structure, Term, Value,
};

#[derive(Parser)]
#[command(
    name = "listlogic",
    version,
    about = "Bounded list logic: model checking, unfolding, SAT and instance generators"
)]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Ceiling on evaluation steps.
    #[arg(long, global = true, env = "LISTLOGIC_STEP_BUDGET", default_value_t = DEFAULT_STEP_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    step_budget: u64,

    /// Ceiling on quantifier bindings made while grounding.
    #[arg(long, global = true, env = "LISTLOGIC_EXPANSION_BUDGET", default_value_t = DEFAULT_EXPANSION_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    expansion_budget: u64,

    /// Ceiling on the size of unfolded terms.
    #[arg(long, global = true, env = "LISTLOGIC_MAX_SIZE", default_value_t = DEFAULT_MAX_SIZE as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_size: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a term or formula with its metrics.
    Parse {
        /// Source file, or `-` for standard input.
        file: PathBuf,
    },
    /// Evaluate a term.
    Eval {
        #[arg(long)]
        term: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Bind a free variable, as `NAME=VALUE` with a value literal.
        #[arg(long = "env", value_name = "NAME=VALUE")]
        bindings: Vec<String>,
    },
    /// Decide whether a closed formula holds in a structure.
    Check {
        #[arg(long)]
        formula: PathBuf,
        /// Defaults to the empty structure.
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        short_circuit: bool,
    },
    /// Replace iterative and recursive terms by standard ones.
    Unfold {
        /// A term or a formula.
        #[arg(long)]
        term: PathBuf,
    },
    /// Decide satisfiability by grounding and DPLL.
    Sat {
        #[arg(long)]
        formula: PathBuf,
        /// Write the witness structure here instead of standard output.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    #[command(subcommand)]
    Gen(Gen),
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand)]
enum Gen {
    /// A short ground term denoting a list of expn(k, n) nils.
    Explist {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "rec")]
        flavor: Flavor,
    },
    /// A closed formula that holds iff two expressions denote different languages.
    RegexIneq {
        #[arg(long)]
        e1: RegExpr,
        #[arg(long)]
        e2: RegExpr,
    },
    /// The theory of a domino system on an M x M grid.
    Domino {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_name = "M")]
        side: usize,
    },
}

#[derive(Subcommand)]
enum Oracle {
    /// Enumerate the language of an expression.
    RegexLang {
        expr: RegExpr,
        #[command(flatten)]
        guard: LangArgs,
    },
    /// Search for an M x M tiling.
    Tiling {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_name = "M")]
        side: usize,
        #[command(flatten)]
        guard: TilingArgs,
    },
}

#[derive(Args)]
struct LangArgs {
    #[arg(long, env = "LISTLOGIC_MAX_WORDS", default_value_t = LangGuard::default().max_words)]
    max_words: usize,
    #[arg(long, env = "LISTLOGIC_MAX_WORD_LEN", default_value_t = LangGuard::default().max_word_len)]
    max_word_len: usize,
}

#[derive(Args)]
struct TilingArgs {
    #[arg(long, env = "LISTLOGIC_MAX_SIDE", default_value_t = TilingGuard::default().max_side)]
    max_side: usize,
    #[arg(long, env = "LISTLOGIC_MAX_TILES", default_value_t = TilingGuard::default().max_tiles)]
    max_tiles: usize,
}

/// Why a command stopped without an answer.
enum Failure {
    Io(String),
    Input(String),
    Lib(Error),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Io(_) => "io",
            Failure::Input(_) => "input",
            Failure::Lib(e) => match e {
                Error::Sort { .. } => "sort",
                Error::Syntax { .. } => "syntax",
                Error::UnboundVariable(_) => "unbound_variable",
                Error::UnknownPredicate(_) => "unknown_predicate",
                Error::Arity { .. } => "arity",
                Error::Budget { .. } => "budget",
                Error::Precondition(_) => "precondition",
                Error::Structure(_) => "structure",
                Error::Guard(_) => "guard",
            },
        }
    }

    fn budget_exceeded(&self) -> bool {
        matches!(self, Failure::Lib(Error::Budget { .. } | Error::Guard(_)))
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(m) | Failure::Input(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// What a successful command prints, and whether its answer was positive.
struct Outcome {
    text: String,
    record: Map<String, Json>,
    positive: bool,
}

impl Outcome {
    fn new(text: String, record: Json, positive: bool) -> Outcome {
        let Json::Object(record) = record else {
            unreachable!("records are objects")
        };
        Outcome { text, record, positive }
    }
}

fn read_source(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_structure(path: Option<&Path>) -> Result<Structure, Failure> {
    match path {
        Some(p) => Ok(Structure::from_json(&read_source(p)?)?),
        None => Ok(Structure::empty()),
    }
}

fn load_system(path: &Path) -> Result<DominoSystem, Failure> {
    Ok(DominoSystem::from_json(&read_source(path)?)?)
}

fn counters_text(c: &Counters) -> String {
    let Ok(Json::Object(m)) = serde_json::to_value(c) else {
        unreachable!("counters serialize to an object")
    };
    m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn parse_env(bindings: &[String]) -> Result<Env, Failure> {
    let mut env = Env::new();
    for b in bindings {
        let (name, lit) = b
            .split_once('=')
            .ok_or_else(|| Failure::Input(format!("binding {b:?} is not NAME=VALUE")))?;
        let name = name.trim().trim_start_matches('$');
        env.insert(name.to_string(), lit.trim().parse::<Value>()?);
    }
    Ok(env)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let eval_config = EvalConfig {
        step_budget: cli.step_budget,
        ..EvalConfig::default()
    };
    match &cli.command {
        Command::Parse { file } => {
            let src = read_source(file)?;
            let (kind, canonical, size, rank, c) = match parse_expr(&src)? {
                Expr::Term(t) => ("term", t.to_string(), size(&t), rank(&t), classify(&t)),
                Expr::Formula(f) => (
                    "formula",
                    f.to_string(),
                    formula_size(&f),
                    formula_rank(&f),
                    classify_formula(&f),
                ),
            };
            let text = format!(
                "{canonical}\nkind={kind} rank={rank} size={size} flat={} explicit={}",
                c.is_flat, c.is_explicit
            );
            let record = json!({
                "kind": kind, "canonical": canonical, "rank": rank, "size": size,
                "flat": c.is_flat, "explicit": c.is_explicit,
            });
            Ok(Outcome::new(text, record, true))
        }
        Command::Eval {
            term,
            structure,
            bindings,
        } => {
            let t = parse_term(&read_source(term)?)?;
            let s = load_structure(structure.as_deref())?;
            let env = parse_env(bindings)?;
            let rep = Evaluator::new(&s).with_config(eval_config).eval(&t, &env)?;
            let text = format!("{}\n{}", rep.value, counters_text(&rep.counters));
            let record = json!({"value": rep.value.to_string(), "counters": rep.counters});
            Ok(Outcome::new(text, record, true))
        }
        Command::Check {
            formula,
            structure,
            sequential,
            short_circuit,
        } => {
            let f = parse_formula(&read_source(formula)?)?;
            let s = load_structure(structure.as_deref())?;
            let cfg = EvalConfig {
                parallel: !sequential,
                short_circuit: *short_circuit,
                ..eval_config
            };
            let rep = Evaluator::new(&s).with_config(cfg).check(&f)?;
            let text = format!("{}\n{}", rep.verdict, counters_text(&rep.counters));
            let record = json!({"verdict": rep.verdict, "counters": rep.counters});
            Ok(Outcome::new(text, record, rep.verdict))
        }
        Command::Unfold { term } => {
            let u = Unfolder {
                max_size: usize::try_from(cli.max_size).unwrap_or(usize::MAX),
            };
            let (out, input_size, output_size, input_rank) = match parse_expr(&read_source(term)?)? {
                Expr::Term(t) => {
                    let rep = u.unfold_term(&t)?;
                    (rep.output.to_string(), rep.input_size, rep.output_size, rep.input_rank)
                }
                Expr::Formula(f) => {
                    let g = u.unfold_formula(&f)?;
                    (g.to_string(), formula_size(&f), formula_size(&g), formula_rank(&f))
                }
            };
            let text = format!("{out}\ninput_size={input_size} output_size={output_size} input_rank={input_rank}");
            let record = json!({
                "output": out, "input_size": input_size, "output_size": output_size, "input_rank": input_rank,
            });
            Ok(Outcome::new(text, record, true))
        }
        Command::Sat { formula, witness } => {
            let f = parse_formula(&read_source(formula)?)?;
            let cfg = GroundConfig {
                expansion_budget: cli.expansion_budget,
                step_budget: cli.step_budget,
            };
            let rep = sat_check_with(&f, cfg)?;
            let st = rep.stats;
            let stats = json!({
                "atoms": st.atoms, "instances": st.instances, "clauses": st.clauses,
                "variables": st.variables, "decisions": st.decisions,
            });
            let stats_text = format!(
                "atoms={} instances={} clauses={} variables={} decisions={}",
                st.atoms, st.instances, st.clauses, st.variables, st.decisions
            );
            match &rep.verdict {
                SatVerdict::Unsat => Ok(Outcome::new(
                    format!("UNSAT\n{stats_text}"),
                    json!({"verdict": "UNSAT", "stats": stats}),
                    false,
                )),
                SatVerdict::Sat(s) => {
                    let structure = s.to_json();
                    let mut text = format!("SAT\n{stats_text}");
                    match witness {
                        Some(path) => {
                            fs::write(path, &structure).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                            text.push_str(&format!("\nwitness written to {}", path.display()));
                        }
                        None if cli.format == Format::Text => text.push_str(&format!("\n{structure}")),
                        None => {}
                    }
                    let parsed: Json = serde_json::from_str(&structure).expect("structure JSON is valid");
                    Ok(Outcome::new(
                        text,
                        json!({"verdict": "SAT", "stats": stats, "witness": parsed}),
                        true,
                    ))
                }
            }
        }
        Command::Gen(Gen::Explist { k, n, flavor }) => {
            let t = explist_term(*k, *n, *flavor)?;
            let length = expn(*k, *n).ok();
            let text = t.to_string();
            let record = json!({
                "term": text, "k": k, "n": n, "flavor": flavor, "calibration": flavor.calibration(),
                "size": size(&t), "length": length,
            });
            Ok(Outcome::new(text, record, true))
        }
        Command::Gen(Gen::RegexIneq { e1, e2 }) => {
            let f = regex_ineq_formula(e1, e2)?;
            let text = f.to_string();
            Ok(Outcome::new(
                text.clone(),
                json!({"formula": text, "size": formula_size(&f)}),
                true,
            ))
        }
        Command::Gen(Gen::Domino { system, side }) => {
            let d = load_system(system)?;
            let side_term = Term::from_value(&Value::nils(*side));
            let axioms: Vec<String> = domino_theory(&d, &side_term)?.iter().map(ToString::to_string).collect();
            let record = json!({"side": side_term.to_string(), "axioms": axioms});
            Ok(Outcome::new(axioms.join("\n"), record, true))
        }
        Command::Oracle(Oracle::RegexLang { expr, guard }) => {
            let g = LangGuard {
                max_words: guard.max_words,
                max_word_len: guard.max_word_len,
            };
            let words: Vec<String> = oracle_lang_with(expr, g)?.iter().map(word_to_string).collect();
            let record = json!({"expr": expr.to_string(), "count": words.len(), "words": words});
            Ok(Outcome::new(words.join("\n"), record, true))
        }
        Command::Oracle(Oracle::Tiling { system, side, guard }) => {
            let d = load_system(system)?;
            let g = TilingGuard {
                max_side: guard.max_side,
                max_tiles: guard.max_tiles,
            };
            match oracle_tiling_with(&d, *side, g)? {
                Some(t) => {
                    let text = t
                        .iter()
                        .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Outcome::new(text, json!({"tiling": t}), true))
                }
                None => Ok(Outcome::new("none".into(), json!({"tiling": null}), false)),
            }
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Eval { .. } => "eval",
        Command::Check { .. } => "check",
        Command::Unfold { .. } => "unfold",
        Command::Sat { .. } => "sat",
        Command::Gen(Gen::Explist { .. }) => "gen explist",
        Command::Gen(Gen::RegexIneq { .. }) => "gen regex-ineq",
        Command::Gen(Gen::Domino { .. }) => "gen domino",
        Command::Oracle(Oracle::RegexLang { .. }) => "oracle regex-lang",
        Command::Oracle(Oracle::Tiling { .. }) => "oracle tiling",
    }
}

/// Writes a line to standard output, ignoring a closed pipe.
fn emit(line: &str) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budgets = json!({
        "step_budget": cli.step_budget,
        "expansion_budget": cli.expansion_budget,
        "max_size": cli.max_size,
    });
    let mut record = Map::new();
    record.insert("command".into(), command_name(&cli.command).into());
    let code = match run(&cli) {
        Ok(out) => {
            record.insert("status".into(), "ok".into());
            record.insert("positive".into(), out.positive.into());
            record.extend(out.record);
            if cli.format == Format::Text {
                emit(&out.text);
            }
            if out.positive {
                0
            } else {
                1
            }
        }
        Err(fail) => {
            eprintln!("listlogic: {}", fail.message());
            record.insert("status".into(), "error".into());
            record.insert(
                "error".into(),
                json!({"kind": fail.kind(), "message": fail.message(), "budget_exceeded": fail.budget_exceeded()}),
            );
            2
        }
    };
    if cli.format == Format::Json {
        record.insert("budgets".into(), budgets);
        emit(&Json::Object(record).to_string());
    }
    ExitCode::from(code)
}
