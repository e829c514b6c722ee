//! Command-line front end: loads structures and formulas, dispatches to the
//! checkers and the oracle, and emits JSON reports (exit code 0 for a
//! computed value or a true verdict, 2 for a false verdict, 1 for errors).

mod dot;
mod json;
mod pgsolver;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use slf_core::bqctl;
use slf_core::concepts::{self, Concept, ConceptParams};
use slf_core::formula::{Path as FPath, SlState};
use slf_core::func::Registry;
use slf_core::game::{ActId, AssignKey, Assignment, FiniteStrategy, Wcgs};
use slf_core::kripke::game_to_kripke;
use slf_core::limits::Limits;
use slf_core::oracle::{self, SlMode};
use slf_core::parity;
use slf_core::parse::{self, Dialect, ParsedFormula};
use slf_core::predicate::Predicate;
use slf_core::safra;
use slf_core::sl1g;
use slf_core::translate;
use slf_core::values::{self, ValueSet};
use slf_core::word;

use report::Report;

#[derive(Parser)]
#[command(name = "slf", about = "Quantitative strategy-logic model checker over weighted concurrent game structures", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Emit compact single-line JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Cap automaton and game sizes (also via SLF_MC_CAP).
    #[arg(long, global = true)]
    cap_states: Option<usize>,
    /// Write DOT artifacts into this directory.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    Sl,
    Qctl,
    Ltl,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Dialect {
        match d {
            DialectArg::Sl => Dialect::Sl,
            DialectArg::Qctl => Dialect::Qctl,
            DialectArg::Ltl => Dialect::Ltl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Xbounded,
    Memoryless,
    Horizon,
}

#[derive(Clone, Copy, ValueEnum)]
enum AutomatonKind {
    Ngbw,
    Nbw,
    Dpw,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula, print its canonical form and measures.
    Parse {
        formula: String,
        #[arg(long, value_enum, default_value = "sl")]
        dialect: DialectArg,
    },
    /// Possible-value set of a formula over a base set.
    Values {
        formula: String,
        #[arg(long, value_enum, default_value = "sl")]
        dialect: DialectArg,
        /// Comma-separated rationals; 0 and 1 are always added.
        #[arg(long, default_value = "0,1")]
        base: String,
    },
    /// Translate a strategy-logic formula over a game into the quantified
    /// branching-time logic over the game's Kripke structure.
    Translate { game: String, formula: String },
    /// Brute-force reference semantics.
    Oracle {
        game: String,
        formula: String,
        #[arg(long, value_enum, default_value = "xbounded")]
        mode: ModeArg,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Exact value of a closed one-goal formula via parity games.
    McSl1g {
        game: String,
        formula: String,
        #[arg(long)]
        pred: Option<String>,
    },
    /// Tree-automata model checking of the quantified branching-time logic.
    McBqctl {
        kripke: String,
        formula: String,
        #[arg(long)]
        pred: Option<String>,
    },
    /// Full strategy-logic checking: translation plus tree automata.
    McSl {
        game: String,
        formula: String,
        #[arg(long)]
        pred: Option<String>,
    },
    /// Build word automata for an LTL value predicate.
    Automaton {
        formula: String,
        #[arg(long, default_value = "0,1")]
        base: String,
        #[arg(long, default_value = ">=1")]
        pred: String,
        #[arg(long, value_enum, default_value = "ngbw")]
        kind: AutomatonKind,
    },
    /// Solve a parity game in PGSolver format.
    SolvePg { file: String },
    /// Run the bundled example corpus and print a value table.
    Examples {
        #[arg(long, default_value = "all")]
        concept: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var("SLF_MC_CAP") {
        if let Ok(n) = v.trim().parse::<usize>() {
            limits.max_automaton_states = n;
            limits.max_game_vertices = n;
        }
    }
    if let Some(n) = cli.cap_states {
        limits.max_automaton_states = n;
        limits.max_game_vertices = n;
    }
    match run(&cli, &limits) {
        Ok(code) => code,
        Err(e) => {
            let mut r = Report::new("error");
            r.set("error", json!(e));
            r.emit(cli.json);
            ExitCode::from(1)
        }
    }
}

/// Reads a file if the argument names one, otherwise treats it as literal
/// text.
fn text_of(arg: &str) -> Result<String, String> {
    if Path::new(arg).exists() {
        std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

fn load_game(arg: &str) -> Result<(Wcgs, String), String> {
    let text = text_of(arg)?;
    let g = json::wcgs_from_json(&text).map_err(|e| format!("{arg}: {e}"))?;
    Ok((g, text))
}

fn load_wks(arg: &str) -> Result<(slf_core::kripke::Wks, String), String> {
    let text = text_of(arg)?;
    let k = json::wks_from_json(&text).map_err(|e| format!("{arg}: {e}"))?;
    Ok((k, text))
}

fn parse_base(text: &str) -> Result<ValueSet, String> {
    let mut vals = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        vals.push(json::rat_from_str(part).map_err(|e| e.to_string())?);
    }
    Ok(ValueSet::base_from(vals))
}

fn parse_pred(text: &str) -> Result<Predicate, String> {
    Predicate::parse(text).map_err(|e| e.to_string())
}

fn write_dot(dir: &Option<PathBuf>, name: &str, content: &str) -> Result<(), String> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
        std::fs::write(dir.join(name), content).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: &Cli, limits: &Limits) -> Result<ExitCode, String> {
    let reg = Registry::builtin();
    match &cli.cmd {
        Cmd::Parse { formula, dialect } => {
            let text = text_of(formula)?;
            let parsed = parse::parse_formula(&text, (*dialect).into(), &reg)
                .map_err(|e| e.to_string())?;
            let mut r = Report::new("parse");
            r.input("formula", &text);
            match &parsed {
                ParsedFormula::Sl(f) => {
                    r.set("canonical", json!(f.to_string()));
                    r.set("nesting_depth", json!(f.nesting_depth()));
                    r.set("closed", json!(f.is_closed()));
                    r.set("x_depth", json!(f.x_depth()));
                    r.set("size", json!(f.size()));
                }
                ParsedFormula::Qctl(f) => {
                    r.set("canonical", json!(f.to_string()));
                    r.set("nesting_depth", json!(f.nesting_depth()));
                    r.set("closed", json!(f.is_closed()));
                    r.set("x_depth", json!(f.x_depth()));
                    r.set("size", json!(f.size()));
                }
                ParsedFormula::Ltl(f) => {
                    r.set("canonical", json!(f.to_string()));
                    r.set("x_depth", json!(f.x_depth()));
                    r.set("size", json!(f.size()));
                }
            }
            r.emit(cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Values { formula, dialect, base } => {
            let text = text_of(formula)?;
            let base = parse_base(base)?;
            let parsed = parse::parse_formula(&text, (*dialect).into(), &reg)
                .map_err(|e| e.to_string())?;
            let (set, size) = match &parsed {
                ParsedFormula::Sl(f) => (
                    values::sl_value_set(f, &base).map_err(|e| e.to_string())?,
                    f.size(),
                ),
                ParsedFormula::Qctl(f) => (
                    values::qctl_value_set(f, &base).map_err(|e| e.to_string())?,
                    f.size(),
                ),
                ParsedFormula::Ltl(f) => (
                    values::ltl_value_set(f, &base).map_err(|e| e.to_string())?,
                    f.size(),
                ),
            };
            let check = values::size_bound_check(set.len(), base.len(), size);
            let mut r = Report::new("values");
            r.input("formula", &text);
            r.set(
                "set",
                json!(set.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
            );
            r.set("bound", json!(check.bound.to_string()));
            r.set("ok", json!(check.ok));
            r.emit(cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Translate { game, formula } => {
            let (g, gtext) = load_game(game)?;
            let ftext = text_of(formula)?;
            let f = parse::parse_sl(&ftext, &reg).map_err(|e| e.to_string())?;
            let gk = game_to_kripke(&g);
            let tr = translate::translate(&g, &gk, &f).map_err(|e| e.to_string())?;
            write_dot(&cli.dot, "kripke.dot", &dot::wks_dot(&gk.kripke))?;
            let mut r = Report::new("translate");
            r.input("game", &gtext);
            r.input("formula", &ftext);
            r.set("formula", json!(tr.formula.to_string()));
            r.set("kripke", json::wks_to_json(&gk.kripke));
            r.set(
                "state_atoms",
                json!(gk
                    .state_atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| json!({ "state": g.state_names[i], "atom": a }))
                    .collect::<Vec<_>>()),
            );
            r.set(
                "strategy_atoms",
                json!(tr
                    .strat_atoms
                    .iter()
                    .map(|fam| json!({ "variable": fam.var, "atoms": fam.atoms }))
                    .collect::<Vec<_>>()),
            );
            r.set(
                "batched_nesting_depth",
                json!(translate::qctl_depth_batched(&tr.formula)),
            );
            r.emit(cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { game, formula, mode, horizon } => {
            let (g, gtext) = load_game(game)?;
            let ftext = text_of(formula)?;
            let f = parse::parse_sl(&ftext, &reg).map_err(|e| e.to_string())?;
            let mode = match mode {
                ModeArg::Xbounded => SlMode::XBoundedExact,
                ModeArg::Memoryless => SlMode::MemorylessApprox,
                ModeArg::Horizon => SlMode::HorizonTree(horizon.unwrap_or(1)),
            };
            let v = oracle::eval_sl_initial(&g, &f, mode, limits).map_err(|e| e.to_string())?;
            let mut r = Report::new("oracle");
            r.input("game", &gtext);
            r.input("formula", &ftext);
            r.set("value", json!(v.value.to_string()));
            r.set("exact", json!(v.exact));
            r.emit(cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::McSl1g { game, formula, pred } => {
            let (g, gtext) = load_game(game)?;
            let ftext = text_of(formula)?;
            let f = parse::parse_sl(&ftext, &reg).map_err(|e| e.to_string())?;
            let sentence = sl1g::sentence_from_sl(&f, &g).map_err(|e| e.to_string())?;
            let res = sl1g::check_sl1g(&g, &sentence, limits).map_err(|e| e.to_string())?;
            write_dot(&cli.dot, "game.dot", &dot::wcgs_dot(&g))?;
            let mut r = Report::new("mc-sl1g");
            r.input("game", &gtext);
            r.input("formula", &ftext);
            r.set("value", json!(res.value.to_string()));
            r.set("sentence_depth", json!(sentence.sentence_depth()));
            r.set(
                "telemetry",
                json!(res
                    .telemetry
                    .iter()
                    .map(|(gs, qs)| json!({ "game_states": gs, "automaton_states": qs }))
                    .collect::<Vec<_>>()),
            );
            if let Some(w) = &res.witness {
                r.set(
                    "witness",
                    json!({
                        "variable": w.variable,
                        "initial_memory": w.initial_memory,
                        "memory_update": w.memory_update,
                        "output": w
                            .output
                            .iter()
                            .map(|row| row
                                .iter()
                                .map(|a| a.map(|ActId(i)| g.actions[i as usize].clone()))
                                .collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    }),
                );
            }
            let mut code = ExitCode::SUCCESS;
            if let Some(ptext) = pred {
                let p = parse_pred(ptext)?;
                let verdict = p.contains(&res.value);
                r.set("verdict", json!(verdict));
                if !verdict {
                    code = ExitCode::from(2);
                }
            }
            r.emit(cli.json);
            Ok(code)
        }
        Cmd::McBqctl { kripke, formula, pred } => {
            let (k, ktext) = load_wks(kripke)?;
            let ftext = text_of(formula)?;
            let f = parse::parse_qctl(&ftext, &reg).map_err(|e| e.to_string())?;
            write_dot(&cli.dot, "kripke.dot", &dot::wks_dot(&k))?;
            let mut r = Report::new("mc-bqctl");
            r.input("kripke", &ktext);
            r.input("formula", &ftext);
            let mut code = ExitCode::SUCCESS;
            match pred {
                Some(ptext) => {
                    let p = parse_pred(ptext)?;
                    let out = bqctl::check_wks(&f, &k, &p, limits).map_err(|e| e.to_string())?;
                    r.set("verdict", json!(out.holds));
                    r.set(
                        "telemetry",
                        json!(out
                            .telemetry
                            .iter()
                            .map(|t| json!({
                                "formula": t.formula,
                                "predicate": t.predicate,
                                "states": t.states,
                                "nesting_level": t.nesting_level,
                            }))
                            .collect::<Vec<_>>()),
                    );
                    if !out.holds {
                        code = ExitCode::from(2);
                    }
                }
                None => {
                    let v = bqctl::compute_value(&f, &k, limits).map_err(|e| e.to_string())?;
                    r.set("value", json!(v.to_string()));
                }
            }
            r.emit(cli.json);
            Ok(code)
        }
        Cmd::McSl { game, formula, pred } => {
            let (g, gtext) = load_game(game)?;
            let ftext = text_of(formula)?;
            let f = parse::parse_sl(&ftext, &reg).map_err(|e| e.to_string())?;
            if !f.is_closed() {
                return Err("mc-sl needs a closed formula".into());
            }
            let gk = game_to_kripke(&g);
            let tr = translate::translate(&g, &gk, &f).map_err(|e| e.to_string())?;
            let value =
                bqctl::compute_value(&tr.formula, &gk.kripke, limits).map_err(|e| e.to_string())?;
            write_dot(&cli.dot, "kripke.dot", &dot::wks_dot(&gk.kripke))?;
            let mut r = Report::new("mc-sl");
            r.input("game", &gtext);
            r.input("formula", &ftext);
            r.set("value", json!(value.to_string()));
            r.set("translated", json!(tr.formula.to_string()));
            let mut code = ExitCode::SUCCESS;
            if let Some(ptext) = pred {
                let p = parse_pred(ptext)?;
                let verdict = p.contains(&value);
                r.set("verdict", json!(verdict));
                if !verdict {
                    code = ExitCode::from(2);
                }
            }
            r.emit(cli.json);
            Ok(code)
        }
        Cmd::Automaton { formula, base, pred, kind } => {
            let ftext = text_of(formula)?;
            let f = parse::parse_ltl(&ftext, &reg).map_err(|e| e.to_string())?;
            let base = parse_base(base)?;
            let p = parse_pred(pred)?;
            let atoms: Vec<String> = f.atoms().into_iter().collect();
            let alphabet = word::WordAlphabet::new(
                atoms.clone(),
                atoms.iter().map(|_| base.clone()).collect(),
                limits,
            )
            .map_err(|e| e.to_string())?;
            let ngbw = word::ltl_to_ngbw(&f, &alphabet, &p, limits).map_err(|e| e.to_string())?;
            let mut r = Report::new("automaton");
            r.input("formula", &ftext);
            r.set("predicate", json!(p.to_string()));
            match kind {
                AutomatonKind::Ngbw => {
                    write_dot(&cli.dot, "ngbw.dot", &dot::ngbw_dot(&ngbw))?;
                    r.set("kind", json!("ngbw"));
                    r.set("states", json!(ngbw.n_states));
                    r.set("initial", json!(ngbw.initial));
                    r.set(
                        "acceptance_sets",
                        json!(ngbw.accept.iter().map(|s| s.iter().collect::<Vec<_>>()).collect::<Vec<_>>()),
                    );
                    r.set("transitions", json!(automaton_edges(&ngbw.alphabet, &ngbw.trans)));
                }
                AutomatonKind::Nbw => {
                    let nbw = word::degeneralize(&ngbw);
                    r.set("kind", json!("nbw"));
                    r.set("states", json!(nbw.n_states));
                    r.set("initial", json!(nbw.initial));
                    r.set(
                        "accepting",
                        json!((0..nbw.n_states).filter(|&q| nbw.accepting[q]).collect::<Vec<_>>()),
                    );
                    r.set("transitions", json!(automaton_edges(&nbw.alphabet, &nbw.trans)));
                }
                AutomatonKind::Dpw => {
                    let nbw = word::degeneralize(&ngbw);
                    let dpw = safra::determinize(&nbw, limits).map_err(|e| e.to_string())?;
                    write_dot(&cli.dot, "dpw.dot", &dot::dpw_dot(&dpw))?;
                    r.set("kind", json!("dpw"));
                    r.set("states", json!(dpw.n_states));
                    r.set("initial", json!(dpw.initial));
                    r.set("priorities", json!(dpw.priority));
                    let edges: Vec<_> = (0..dpw.n_states)
                        .flat_map(|q| {
                            let alphabet = &dpw.alphabet;
                            let trans = &dpw.trans;
                            (0..alphabet.n_letters()).map(move |li| {
                                json!({
                                    "from": q,
                                    "letter": letter_json(alphabet, li),
                                    "to": trans[q][li],
                                })
                            })
                        })
                        .collect();
                    r.set("transitions", json!(edges));
                }
            }
            r.emit(cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::SolvePg { file } => {
            let text = text_of(file)?;
            let g = pgsolver::parse_pgsolver(&text).map_err(|e| e.to_string())?;
            let sol = parity::solve(&g);
            let certified = parity::check_solution(&g, &sol).map_err(|e| e.to_string())?;
            write_dot(&cli.dot, "pg.dot", &dot::parity_game_dot(&g, Some(&sol.winner)))?;
            write_dot(&cli.dot, "pg.txt", &pgsolver::to_pgsolver(&g))?;
            let mut r = Report::new("solve-pg");
            r.input("game", &text);
            r.set(
                "winners",
                json!(sol
                    .winner
                    .iter()
                    .map(|w| match w {
                        parity::Owner::Even => 0,
                        parity::Owner::Odd => 1,
                    })
                    .collect::<Vec<_>>()),
            );
            r.set("strategy", json!(sol.strategy));
            r.set("certified", json!(certified));
            r.emit(cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Examples { concept } => run_examples(cli, limits, concept),
    }
}

fn letter_json(alphabet: &word::WordAlphabet, li: usize) -> serde_json::Value {
    let m: BTreeMap<String, String> = alphabet
        .atoms
        .iter()
        .zip(&alphabet.letters[li])
        .map(|(a, v)| (a.clone(), v.to_string()))
        .collect();
    json!(m)
}

fn automaton_edges(
    alphabet: &word::WordAlphabet,
    trans: &[Vec<Vec<usize>>],
) -> Vec<serde_json::Value> {
    let mut out = Vec::new();
    for (q, row) in trans.iter().enumerate() {
        for (li, succs) in row.iter().enumerate() {
            for &t in succs {
                out.push(json!({ "from": q, "letter": letter_json(alphabet, li), "to": t }));
            }
        }
    }
    out
}

const PENNIES: &str = include_str!("../fixtures/pennies.json");
const COORD: &str = include_str!("../fixtures/coord.json");
const DRONES: &str = include_str!("../fixtures/drones.json");

fn run_examples(cli: &Cli, limits: &Limits, concept: &str) -> Result<ExitCode, String> {
    let reg = Registry::builtin();
    let all = concept == "all";
    let mut rows: Vec<serde_json::Value> = Vec::new();

    if all || concept == "drones" || concept == "synt" {
        let g = json::wcgs_from_json(DRONES).map_err(|e| e.to_string())?;
        // both drones quantified before the villain, which stays adversarial
        let rescue = parse::parse_sl(
            "<<x>> <<y>> [[z]] (c, x) (g, y) (v, z) A (dist U safe)",
            &reg,
        )
        .map_err(|e| e.to_string())?;
        let spy = parse::parse_sl(
            "<<x>> [[z]] <<y>> (c, x) (g, y) (v, z) A (dist U safe)",
            &reg,
        )
        .map_err(|e| e.to_string())?;
        for (name, f) in [("rescue", rescue), ("spy", spy)] {
            let sentence = sl1g::sentence_from_sl(&f, &g).map_err(|e| e.to_string())?;
            let res = sl1g::check_sl1g(&g, &sentence, limits).map_err(|e| e.to_string())?;
            rows.push(json!({
                "fixture": "drones",
                "concept": name,
                "formula": f.to_string(),
                "value": res.value.to_string(),
                "exact": true,
            }));
        }
    }

    if all || concept == "synt" {
        let g = json::wcgs_from_json(PENNIES).map_err(|e| e.to_string())?;
        let params = ConceptParams {
            agents: vec!["c".into(), "e".into()],
            goals: vec![FPath::Next(Box::new(FPath::State(Box::new(SlState::atom("win")))))],
            profile_vars: vec!["x".into(), "y".into()],
        };
        let f = concepts::build_solution_concept(Concept::Synt, &params)
            .map_err(|e| e.to_string())?;
        let sentence = sl1g::sentence_from_sl(&f, &g).map_err(|e| e.to_string())?;
        let res = sl1g::check_sl1g(&g, &sentence, limits).map_err(|e| e.to_string())?;
        rows.push(json!({
            "fixture": "pennies",
            "concept": "synt",
            "formula": f.to_string(),
            "value": res.value.to_string(),
            "exact": true,
        }));
    }

    if all || concept == "ne" || concept == "nebar" {
        let g = json::wcgs_from_json(COORD).map_err(|e| e.to_string())?;
        let goals = [
            parse::parse_ltl("F w1", &reg).map_err(|e| e.to_string())?,
            parse::parse_ltl("F w2", &reg).map_err(|e| e.to_string())?,
        ];
        // memoryless profiles, distinguished by the initial-state choice
        for (c1, c2) in [(0u32, 0u32), (0, 1), (1, 0), (1, 1)] {
            let profile = vec![
                vec![ActId(c1); g.n_states()],
                vec![ActId(c2); g.n_states()],
            ];
            let report = sl1g::check_ne_profile(&g, &profile, &goals, limits)
                .map_err(|e| e.to_string())?;
            rows.push(json!({
                "fixture": "coord",
                "concept": "ne",
                "profile": [g.actions[c1 as usize], g.actions[c2 as usize]],
                "ne": report.is_equilibrium,
                "max_deviation_gain": report.max_gain.to_string(),
                "values": report.current_values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "best_responses": report.best_responses.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "exact": true,
            }));
        }
    }

    if all || concept == "se" || concept == "core" || concept == "wrs" || concept == "srs" {
        let g = json::wcgs_from_json(COORD).map_err(|e| e.to_string())?;
        let goal1 = FPath::Until(
            Box::new(FPath::State(Box::new(SlState::Func(slf_core::func::const_one(), vec![])))),
            Box::new(FPath::State(Box::new(SlState::atom("w1")))),
        );
        let goal2 = FPath::Until(
            Box::new(FPath::State(Box::new(SlState::Func(slf_core::func::const_one(), vec![])))),
            Box::new(FPath::State(Box::new(SlState::atom("w2")))),
        );
        let concepts_to_run: Vec<(&str, Concept, Vec<FPath<SlState>>)> = vec![
            ("se", Concept::Se, vec![goal1.clone(), goal2.clone()]),
            ("core", Concept::Core, vec![goal1.clone(), goal2.clone()]),
            ("wrs", Concept::WRs, vec![goal1.clone(), goal2.clone()]),
            ("srs", Concept::SRs, vec![goal1.clone(), goal2.clone()]),
        ];
        for (name, c, goals) in concepts_to_run {
            if !(all || concept == name) {
                continue;
            }
            let params = ConceptParams {
                agents: g.agents.clone(),
                goals,
                profile_vars: vec!["x1".into(), "x2".into()],
            };
            let f = concepts::build_solution_concept(c, &params).map_err(|e| e.to_string())?;
            // evaluate per memoryless profile, restricted semantics
            for (c1, c2) in [(0u32, 0u32), (0, 1), (1, 1)] {
                let profile = [vec![ActId(c1); g.n_states()], vec![ActId(c2); g.n_states()]];
                let mut chi = Assignment::empty();
                for (var, strat) in ["x1", "x2"].iter().zip(profile.iter()) {
                    chi = chi.with(
                        AssignKey::Var((*var).to_string()),
                        std::sync::Arc::new(FiniteStrategy::Memoryless(strat.clone())),
                    );
                }
                // sRS quantifies the component variables itself
                let value = oracle::eval_sl(
                    &g,
                    &f,
                    &chi,
                    &[g.initial],
                    SlMode::MemorylessApprox,
                    limits,
                )
                .map_err(|e| e.to_string())?;
                rows.push(json!({
                    "fixture": "coord",
                    "concept": name,
                    "profile": [g.actions[c1 as usize], g.actions[c2 as usize]],
                    "value": value.value.to_string(),
                    "exact": value.exact,
                    "restricted": "memoryless",
                }));
            }
        }
    }

    if rows.is_empty() {
        return Err(format!(
            "unknown concept `{concept}` (use all, drones, synt, ne, nebar, se, core, wrs, srs)"
        ));
    }

    // human-readable table on stderr, JSON report on stdout
    eprintln!("{:<10} {:<8} {:<14} {:<8} value", "fixture", "concept", "profile", "exact");
    for row in &rows {
        let profile = row
            .get("profile")
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".into());
        let value = row
            .get("value")
            .or_else(|| row.get("ne"))
            .map(|v| v.to_string())
            .unwrap_or_default();
        eprintln!(
            "{:<10} {:<8} {:<14} {:<8} {}",
            row["fixture"].as_str().unwrap_or("?"),
            row["concept"].as_str().unwrap_or("?"),
            profile,
            row.get("exact").map(|e| e.to_string()).unwrap_or_default(),
            value
        );
    }
    let mut r = Report::new("examples");
    r.set("rows", json!(rows));
    r.emit(cli.json);
    Ok(ExitCode::SUCCESS)
}
