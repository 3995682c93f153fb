//! `gzasp`: stable models, rewritings, queries and statistics for ground
//! programs with aggregates.
//!
//! Exit status: 0 on success (coherent / true), 1 for an incoherent program
//! or a false query, 2 on any error.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gzasp_core::parser::render_aggregate;
use gzasp_core::semantics::program_class;
use gzasp_core::{
    check_size_bounds, classify_aggregate, emit_core2, parse_bytes, render, rewrite,
    AggregateClass, Atom, Method, NameMode, Program, Reasoner, RewriteOptions, Semantics,
    DEFAULT_MAX_ATOMS,
};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(
    name = "gzasp",
    version,
    about = "Ground ASP with aggregates under F- and G-stable semantics"
)]
struct Cli {
    /// Accept generated names (`p__t`, `p__g`, `p__f`, `__bot`) in the input,
    /// e.g. to read back the output of `rewrite`.
    #[arg(long, global = true)]
    allow_generated: bool,

    /// Wrap the output in a JSON run report (command, input digest, payload).
    #[arg(long, global = true)]
    report: bool,

    /// Include wall time in the run report.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the stable models, one per line.
    Models {
        /// Program file, or `-` for stdin.
        file: String,
        #[arg(long, value_enum, default_value_t = Sem::G)]
        semantics: Sem,
        /// Compute G-stable models directly or via a rewriting into F-semantics.
        #[arg(long, value_enum, default_value_t = Via::Direct)]
        via: Via,
        #[command(flatten)]
        guard: Guard,
        #[arg(long)]
        json: bool,
    },
    /// Print a rewritten program.
    Rewrite {
        file: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Copy only atoms that occur in aggregate domains (rew/str).
        #[arg(long)]
        minimal_copies: bool,
        #[arg(long, value_enum, default_value_t = Dialect::Canonical)]
        dialect: Dialect,
    },
    /// Decide coherence, or cautious/brave consequence of an atom.
    Query {
        file: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, required_if_eq_any = [("mode", "cautious"), ("mode", "brave")])]
        atom: Option<String>,
        #[arg(long, value_enum, default_value_t = Sem::G)]
        semantics: Sem,
        #[command(flatten)]
        guard: Guard,
    },
    /// Atom count, size, aggregate classes, fragment and rewriting sizes.
    Stats { file: String },
    /// Parse and print in canonical form.
    Parse { file: String },
}

#[derive(clap::Args, Debug)]
struct Guard {
    /// Largest number of atoms to enumerate over.
    #[arg(long, env = "GZASP_MAX_ATOMS", default_value_t = DEFAULT_MAX_ATOMS)]
    max_atoms: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Sem {
    G,
    F,
}

impl From<Sem> for Semantics {
    fn from(s: Sem) -> Self {
        match s {
            Sem::G => Semantics::G,
            Sem::F => Semantics::F,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Via {
    Direct,
    Rew,
    Str,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    C,
    N,
    M,
    Rew,
    Str,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::C => Method::C,
            MethodArg::N => Method::N,
            MethodArg::M => Method::M,
            MethodArg::Rew => Method::Rew,
            MethodArg::Str => Method::Str,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Dialect {
    Canonical,
    Core2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Coherent,
    Cautious,
    Brave,
}

/// What a command produced: text for humans, a JSON payload for reports, and
/// the exit status.
struct Outcome {
    text: String,
    payload: Value,
    status: u8,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a [String],
    input_sha256: String,
    payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

fn read_input(file: &str) -> Result<Vec<u8>, String> {
    if file == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read(file).map_err(|e| format!("reading {file}: {e}"))
    }
}

fn load(bytes: &[u8], mode: NameMode) -> Result<Program, String> {
    parse_bytes(bytes, mode).map_err(|e| e.to_string())
}

fn models(
    program: &Program,
    sem: Sem,
    via: Via,
    max_atoms: usize,
    as_json: bool,
) -> Result<Outcome, String> {
    let reasoner = Reasoner::new(max_atoms);
    let found = match (via, sem) {
        (Via::Direct, _) => reasoner.stable_models(program, sem.into()),
        (Via::Rew, Sem::G) => {
            reasoner.solve_via_rewriting(program, Method::Rew, RewriteOptions::default())
        }
        (Via::Str, Sem::G) => {
            reasoner.solve_via_rewriting(program, Method::Str, RewriteOptions::default())
        }
        (_, Sem::F) => {
            return Err("--via rew|str compiles G-semantics and requires --semantics g".into())
        }
    }
    .map_err(|e| e.to_string())?;
    let lists: Vec<Vec<&str>> = found
        .iter()
        .map(|m| m.iter().map(Atom::name).collect())
        .collect();
    let payload = json!({
        "models": lists,
        "semantics": Semantics::from(sem).to_string(),
        "count": found.len(),
    });
    let text = if as_json {
        format!("{payload}\n")
    } else {
        found.iter().map(|m| format!("{m}\n")).collect()
    };
    Ok(Outcome {
        text,
        payload,
        status: if found.is_empty() { 1 } else { 0 },
    })
}

fn rewritten(
    program: &Program,
    method: MethodArg,
    minimal_copies: bool,
    dialect: Dialect,
) -> Result<Outcome, String> {
    let out = rewrite(program, method.into(), RewriteOptions { minimal_copies })
        .map_err(|e| e.to_string())?;
    let text = match dialect {
        Dialect::Canonical => render(&out),
        Dialect::Core2 => emit_core2(&out).map_err(|e| e.to_string())?,
    };
    Ok(Outcome {
        payload: json!({ "text": text }),
        text,
        status: 0,
    })
}

fn query(
    program: &Program,
    mode: Mode,
    atom: Option<&str>,
    sem: Sem,
    max_atoms: usize,
) -> Result<Outcome, String> {
    let reasoner = Reasoner::new(max_atoms);
    let sem = Semantics::from(sem);
    let target = |name: Option<&str>| -> Result<Atom, String> {
        let name = name.ok_or("--atom is required for this mode")?;
        let atom = Atom::new(name)
            .or_else(|_| Atom::generated(name))
            .map_err(|e| e.to_string())?;
        if program.atoms().contains(&atom) {
            Ok(atom)
        } else {
            Err(format!("atom `{name}` does not occur in the program"))
        }
    };
    let answer = match mode {
        Mode::Coherent => reasoner.check_coherence(program, sem),
        Mode::Cautious => reasoner.cautious(program, &target(atom)?, sem),
        Mode::Brave => reasoner.brave(program, &target(atom)?, sem),
    }
    .map_err(|e| e.to_string())?;
    Ok(Outcome {
        text: format!("{answer}\n"),
        payload: json!({ "answer": answer }),
        status: if answer { 0 } else { 1 },
    })
}

fn class_letter(class: Option<AggregateClass>) -> &'static str {
    match class {
        None => "-",
        Some(AggregateClass::Monotone) => "M",
        Some(AggregateClass::Convex) => "C",
        Some(AggregateClass::NonConvex) => "N",
    }
}

fn stats(program: &Program) -> Result<Outcome, String> {
    let mut aggregates = Vec::new();
    for spec in program.aggregates() {
        let class = classify_aggregate(spec).map_err(|e| e.to_string())?;
        aggregates.push((render_aggregate(spec), class.to_string()));
    }
    let features: Vec<&str> = [
        (program.has_negation(), "~"),
        (program.has_disjunction(), "∨"),
    ]
    .into_iter()
    .filter_map(|(on, sym)| on.then_some(sym))
    .collect();
    let class = program_class(program).map_err(|e| e.to_string())?;
    let fragment = format!("{{{}}} × {}", features.join(","), class_letter(class));
    let sizes = check_size_bounds(program).map_err(|e| e.to_string())?;
    let verdict = |ok: bool| if ok { "holds" } else { "violated" };

    let mut text = format!("atoms: {}\nsize: {}\n", sizes.atoms, sizes.size_in);
    for (k, (agg, class)) in aggregates.iter().enumerate() {
        text.push_str(&format!("aggregate {}: {agg} {class}\n", k + 1));
    }
    text.push_str(&format!("fragment: {fragment}\n"));
    text.push_str(&format!(
        "size rew: {} (bound {}, {})\n",
        sizes.size_rew,
        sizes.rew_bound(),
        verdict(sizes.rew_ok)
    ));
    text.push_str(&format!(
        "size str: {} (bound {}, {})\n",
        sizes.size_str,
        sizes.str_bound(),
        verdict(sizes.str_ok)
    ));
    let payload = json!({
        "atoms": sizes.atoms,
        "size": sizes.size_in,
        "aggregates": aggregates
            .iter()
            .map(|(agg, class)| json!({ "aggregate": agg, "class": class }))
            .collect::<Vec<_>>(),
        "fragment": fragment,
        "size_rew": sizes.size_rew,
        "rew_bound": sizes.rew_bound(),
        "rew_ok": sizes.rew_ok,
        "size_str": sizes.size_str,
        "str_bound": sizes.str_bound(),
        "str_ok": sizes.str_ok,
    });
    Ok(Outcome {
        text,
        payload,
        status: 0,
    })
}

fn run(cli: &Cli, bytes: &[u8]) -> Result<Outcome, String> {
    let mode = if cli.allow_generated {
        NameMode::Generated
    } else {
        NameMode::User
    };
    let program = load(bytes, mode)?;
    match &cli.command {
        Command::Models {
            semantics,
            via,
            guard,
            json,
            ..
        } => models(&program, *semantics, *via, guard.max_atoms, *json),
        Command::Rewrite {
            method,
            minimal_copies,
            dialect,
            ..
        } => rewritten(&program, *method, *minimal_copies, *dialect),
        Command::Query {
            mode,
            atom,
            semantics,
            guard,
            ..
        } => query(
            &program,
            *mode,
            atom.as_deref(),
            *semantics,
            guard.max_atoms,
        ),
        Command::Stats { .. } => stats(&program),
        Command::Parse { .. } => {
            let text = render(&program);
            Ok(Outcome {
                payload: json!({ "text": text }),
                text,
                status: 0,
            })
        }
    }
}

fn input_file(command: &Command) -> &str {
    match command {
        Command::Models { file, .. }
        | Command::Rewrite { file, .. }
        | Command::Query { file, .. }
        | Command::Stats { file }
        | Command::Parse { file } => file,
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let bytes = match read_input(input_file(&cli.command)) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match run(&cli, &bytes) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.report {
        let report = RunReport {
            command: &args[1..],
            input_sha256: hex::encode(Sha256::digest(&bytes)),
            payload: outcome.payload,
            wall_ms: cli.timing.then(|| start.elapsed().as_millis()),
        };
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        print!("{}", outcome.text);
        if cli.timing {
            eprintln!("time: {} ms", start.elapsed().as_millis());
        }
    }
    ExitCode::from(outcome.status)
}
