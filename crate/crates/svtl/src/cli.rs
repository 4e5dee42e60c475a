//! Command-line entry points for the `svtl` binary.
//!
//! Four subcommands: `run` replays a trace and prints each state, `check`
//! evaluates properties over the reachable state space, `explore` prints
//! the state space itself, and `bound` reports a variable's supremum.
//!
//! Every command builds its whole report as one string and returns it with
//! an exit code, so identical inputs give byte-identical output. Exit codes:
//! 0 success, 1 load or usage error, 2 trace rejected at some event, 3 some
//! property fails, 4 some property is unknown (3 wins over 4).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::explorer::{dump_text, explore, export_dot, ExploreLimits, TransitionGraph};
use crate::kernel::{fmt_rat, parse_trace, Model};
use crate::speclang::load_file;
use crate::temporal::{check_on_graph, sup_value, Outcome, Property, SupOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LOAD: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_FAILS: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

/// Environment variable overriding the default state budget; the
/// `--max-states` flag wins over both.
pub const MAX_STATES_ENV: &str = "SVTL_MAX_STATES";

#[derive(Debug, Parser)]
#[command(
    name = "svtl",
    version,
    about = "State-variable models over finite event traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a trace file against a model, printing each state.
    Run {
        /// Model file (.svl).
        model: PathBuf,
        /// Trace file: one event per line, `;` comments.
        trace: PathBuf,
        /// Comma-separated variables to print (default: all).
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Explore the reachable states and check properties.
    Check {
        /// Model file (.svl).
        model: PathBuf,
        /// Property to check; repeatable (default: all, in order).
        #[arg(long = "prop")]
        props: Vec<String>,
        /// Explore only to this depth; deeper truth values become unknown.
        #[arg(long)]
        bounded: Option<usize>,
        /// State budget (default 100000, or SVTL_MAX_STATES).
        #[arg(long)]
        max_states: Option<usize>,
        /// Directory for counterexample traces of failing properties.
        #[arg(long, default_value = ".")]
        witness_dir: PathBuf,
    },
    /// Enumerate the reachable state space.
    Explore {
        /// Model file (.svl).
        model: PathBuf,
        /// Write the graph in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print every node instead of the summary.
        #[arg(long)]
        dump: bool,
        /// State budget (default 100000, or SVTL_MAX_STATES).
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Report the supremum of a rational variable over reachable states.
    Bound {
        /// Model file (.svl).
        model: PathBuf,
        /// Variable name.
        var: String,
        /// State budget (default 100000, or SVTL_MAX_STATES).
        #[arg(long)]
        max_states: Option<usize>,
    },
}

/// Run one command; returns the full report and the process exit code.
pub fn execute(cli: &Cli) -> (String, i32) {
    match &cli.command {
        Command::Run { model, trace, vars } => cmd_run(model, trace, vars),
        Command::Check {
            model,
            props,
            bounded,
            max_states,
            witness_dir,
        } => cmd_check(model, props, *bounded, *max_states, witness_dir),
        Command::Explore {
            model,
            dot,
            dump,
            max_states,
        } => cmd_explore(model, dot.as_deref(), *dump, *max_states),
        Command::Bound {
            model,
            var,
            max_states,
        } => cmd_bound(model, var, *max_states),
    }
}

fn fail(msg: impl Into<String>) -> (String, i32) {
    (format!("error: {}\n", msg.into()), EXIT_LOAD)
}

fn load(path: &Path) -> Result<Model, (String, i32)> {
    match load_file(path) {
        Ok(m) => Ok(m),
        Err(crate::speclang::LoadError::Diagnostics(ds)) => {
            let mut out = String::new();
            for d in &ds {
                let _ = writeln!(out, "error: {}:{d}", path.display());
            }
            Err((out, EXIT_LOAD))
        }
        Err(e) => Err(fail(e.to_string())),
    }
}

fn limits(max_states: Option<usize>, bounded: Option<usize>) -> Result<ExploreLimits, (String, i32)> {
    let mut limits = ExploreLimits::default();
    if let Some(d) = bounded {
        limits = limits.with_max_depth(d);
    }
    let states = match max_states {
        Some(n) => Some(n),
        None => match std::env::var(MAX_STATES_ENV) {
            Ok(text) => Some(text.parse().map_err(|_| {
                fail(format!("{MAX_STATES_ENV}: invalid number `{text}`"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = states {
        limits = limits.with_max_states(n);
    }
    Ok(limits)
}

fn cmd_run(model_path: &Path, trace_path: &Path, vars: &[String]) -> (String, i32) {
    let model = match load(model_path) {
        Ok(m) => m,
        Err(out) => return out,
    };
    let text = match std::fs::read_to_string(trace_path) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", trace_path.display())),
    };
    let trace = match parse_trace(&text) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", trace_path.display())),
    };
    let selected: Option<Vec<usize>> = if vars.is_empty() {
        None
    } else {
        let mut slots = Vec::new();
        for name in vars {
            match model.slot_index(name) {
                Some(i) => slots.push(i),
                None => return fail(format!("unknown variable `{name}`")),
            }
        }
        Some(slots)
    };

    let run = model.run_trace(&trace);
    let mut out = String::new();
    for (i, s) in run.states.iter().enumerate() {
        let state = model.format_state(s, selected.as_deref());
        if i == 0 {
            let _ = writeln!(out, "step 0: {state}");
        } else {
            let _ = writeln!(out, "step {i} ({}): {state}", trace.0[i - 1]);
        }
    }
    match run.error {
        None => (out, EXIT_OK),
        Some(e) => {
            let _ = writeln!(out, "error: {e}");
            (out, EXIT_REJECTED)
        }
    }
}

fn cmd_check(
    model_path: &Path,
    props: &[String],
    bounded: Option<usize>,
    max_states: Option<usize>,
    witness_dir: &Path,
) -> (String, i32) {
    let model = match load(model_path) {
        Ok(m) => m,
        Err(out) => return out,
    };
    let limits = match limits(max_states, bounded) {
        Ok(l) => l,
        Err(out) => return out,
    };

    let selected: Vec<(String, Property)> = if props.is_empty() {
        model
            .properties()
            .map(|(n, p)| (n.to_string(), p.clone()))
            .collect()
    } else {
        let mut out = Vec::new();
        for name in props {
            match model.property(name) {
                Some(p) => out.push((name.clone(), p.clone())),
                None => return fail(format!("unknown property `{name}`")),
            }
        }
        out
    };
    if selected.is_empty() {
        return fail("model declares no properties");
    }

    let graph = match explore(&model, limits) {
        Ok(g) => g,
        Err(e) => return (format!("error: exploration: {e}\n"), EXIT_REJECTED),
    };

    let mut out = String::new();
    let mut any_fails = false;
    let mut any_unknown = false;
    for (name, prop) in &selected {
        let verdict = match check_on_graph(&model, &graph, prop) {
            Ok(v) => v,
            Err(e) => return (format!("error: checking {name}: {e}\n"), EXIT_REJECTED),
        };
        let line = match verdict.outcome {
            Outcome::Holds => {
                let mut line = format!("{name}: HOLDS");
                if let Some(b) = verdict.bound {
                    let _ = write!(line, " bound={b}");
                }
                if let Some(q) = sup_annotation(&model, &graph, prop) {
                    let _ = write!(line, " sup={q}");
                }
                line
            }
            Outcome::Fails => {
                any_fails = true;
                let mut line = format!("{name}: FAILS");
                if let Some(w) = &verdict.witness {
                    let file = witness_dir.join(format!("{name}.cex.trace"));
                    match write_witness(&file, name, w) {
                        Ok(()) => {
                            let _ = write!(line, " witness={}", file.display());
                        }
                        Err(e) => {
                            return fail(format!("cannot write {}: {e}", file.display()))
                        }
                    }
                }
                line
            }
            Outcome::Unknown => {
                any_unknown = true;
                let mut line = format!("{name}: UNKNOWN");
                if let Some(d) = verdict.frontier_depth {
                    let _ = write!(line, " depth={d}");
                }
                line
            }
        };
        let _ = writeln!(out, "{line}");
    }

    let code = if any_fails {
        EXIT_FAILS
    } else if any_unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    };
    (out, code)
}

/// For a bound property that holds on a complete graph, the attained sup.
fn sup_annotation(model: &Model, graph: &TransitionGraph, prop: &Property) -> Option<String> {
    let slot = match prop {
        Property::Bounded(slot) | Property::BoundCompare(slot, _) => *slot,
        _ => return None,
    };
    match sup_value(model, graph, slot) {
        Ok(SupOutcome::Finite { value, .. }) => Some(fmt_rat(&value)),
        _ => None,
    }
}

fn write_witness(path: &Path, name: &str, w: &crate::explorer::Witness) -> std::io::Result<()> {
    let mut text = format!("; counterexample for property {name}\n");
    match w.lasso {
        Some(l) => {
            let _ = writeln!(
                text,
                "; lasso: {} stem event(s), then a cycle of {} event(s) repeats",
                l.stem_len, l.cycle_len
            );
        }
        None => {
            let _ = writeln!(text, "; {} event(s)", w.trace.len());
        }
    }
    text.push_str(&w.trace.to_file_string());
    std::fs::write(path, text)
}

fn cmd_explore(
    model_path: &Path,
    dot: Option<&Path>,
    dump: bool,
    max_states: Option<usize>,
) -> (String, i32) {
    let model = match load(model_path) {
        Ok(m) => m,
        Err(out) => return out,
    };
    let limits = match limits(max_states, None) {
        Ok(l) => l,
        Err(out) => return out,
    };
    let graph = match explore(&model, limits) {
        Ok(g) => g,
        Err(e) => return (format!("error: exploration: {e}\n"), EXIT_REJECTED),
    };

    let mut out = String::new();
    if dump {
        out.push_str(&dump_text(&model, &graph, None));
    } else {
        let dead_ends = (0..graph.len()).filter(|&i| graph.is_dead_end(i)).count();
        let _ = writeln!(out, "nodes: {}", graph.len());
        let _ = writeln!(out, "edges: {}", graph.num_edges());
        let _ = writeln!(out, "complete: {}", graph.complete());
        let _ = writeln!(out, "dead ends: {dead_ends}");
        if let Some(d) = graph.frontier_depth() {
            let _ = writeln!(out, "frontier depth: {d}");
        }
    }
    if let Some(dot_path) = dot {
        let text = export_dot(&model, &graph, None);
        if let Err(e) = std::fs::write(dot_path, text) {
            return fail(format!("cannot write {}: {e}", dot_path.display()));
        }
        let _ = writeln!(out, "dot: {}", dot_path.display());
    }
    (out, EXIT_OK)
}

fn cmd_bound(model_path: &Path, var: &str, max_states: Option<usize>) -> (String, i32) {
    let model = match load(model_path) {
        Ok(m) => m,
        Err(out) => return out,
    };
    let slot = match model.slot_index(var) {
        Some(i) => i,
        None => return fail(format!("unknown variable `{var}`")),
    };
    let limits = match limits(max_states, None) {
        Ok(l) => l,
        Err(out) => return out,
    };
    let graph = match explore(&model, limits) {
        Ok(g) => g,
        Err(e) => return (format!("error: exploration: {e}\n"), EXIT_REJECTED),
    };

    let mut out = String::new();
    let mut code = EXIT_OK;
    match sup_value(&model, &graph, slot) {
        Ok(SupOutcome::Finite { value, node }) => {
            let _ = writeln!(out, "{var}: sup={} at node {node}", fmt_rat(&value));
        }
        Ok(SupOutcome::Unknown {
            explored_max,
            frontier_depth,
        }) => {
            code = EXIT_UNKNOWN;
            let mut line = format!("{var}: UNKNOWN");
            if let Some(d) = frontier_depth {
                let _ = write!(line, " depth={d}");
            }
            if let Some((q, node)) = explored_max {
                let _ = write!(line, " explored sup={} at node {node}", fmt_rat(&q));
            }
            let _ = writeln!(out, "{line}");
        }
        Err(e) => return fail(format!("{var}: {e}")),
    }

    // Also settle any declared bound properties about this variable.
    for (name, prop) in model.properties() {
        let relevant = matches!(
            prop,
            Property::Bounded(s) | Property::BoundCompare(s, _) if *s == slot
        );
        if !relevant {
            continue;
        }
        let verdict = match check_on_graph(&model, &graph, prop) {
            Ok(v) => v,
            Err(e) => return (format!("error: checking {name}: {e}\n"), EXIT_REJECTED),
        };
        let word = match verdict.outcome {
            Outcome::Holds => "HOLDS",
            Outcome::Fails => {
                code = EXIT_FAILS;
                "FAILS"
            }
            Outcome::Unknown => {
                if code == EXIT_OK {
                    code = EXIT_UNKNOWN;
                }
                "UNKNOWN"
            }
        };
        let _ = writeln!(out, "{name}: {word}");
    }
    (out, code)
}
