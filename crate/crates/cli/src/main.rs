use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use secretpi::congruence::normal_process;
use secretpi::encodings::{credit_card, dbus, dbus_equation, example1, example2};
use secretpi::suite::{check_ids, run_suite};
use secretpi::{
    barbs, bisim_report, build_graph, encode_match, normalize, parse, pretty, reach, readable,
    weak_barbs, Barb, BisimVerdict, Bounds, Mode, NameBudget, Process,
};

#[derive(Parser)]
#[command(
    name = "secretpi",
    version,
    about = "Workbench for the secret pi-calculus"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RunConfig {
    /// Plain LTS, or the spied LTS with spy signals.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    #[arg(long, global = true, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: u64,
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    /// Copies of each replication unfolded per reduction step.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    repl_unfold: u64,
    /// Fresh names offered to inputs besides the free names.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    fresh: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl RunConfig {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_steps: self.max_steps as usize,
            max_states: self.max_states as usize,
            repl_unfold: self.repl_unfold as usize,
        }
    }

    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Spied => Mode::Spied,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Spied,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and print it back.
    Parse { file: PathBuf },
    /// Print the standard form of a term.
    Normalize { file: PathBuf },
    /// List the states reachable by reduction.
    Reduce {
        file: PathBuf,
        /// Mark states exhibiting an output barb on this name.
        #[arg(long)]
        leak: Option<String>,
    },
    /// Build the labelled transition graph.
    Lts { file: PathBuf },
    /// Print the strong barbs, or the weak ones with --weak.
    Barbs {
        file: PathBuf,
        #[arg(long)]
        weak: bool,
    },
    /// Decide weak bisimilarity. Exit 0 bisimilar, 1 not, 3 inconclusive.
    Bisim { left: PathBuf, right: PathBuf },
    /// Run the acceptance checks. Exit 0 iff all pass.
    CheckSuite {
        /// Run only the named checks.
        #[arg(long)]
        only: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print one of the built-in example terms.
    Build {
        #[command(subcommand)]
        what: Build,
    },
}

#[derive(Subcommand)]
enum Build {
    /// `(hide z) x!<v> | x(y).leak!<y>`
    Example1 {
        #[arg(long, default_value = "v")]
        v: String,
        #[arg(long, default_value = "z")]
        z: String,
    },
    /// Hidden names z1..zn, trusted input over the accepted ones, in context.
    Example2 {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Indices of the accepted names, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        accepted: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        i: usize,
    },
    /// The bus name leak, or its patch.
    Dbus {
        #[arg(long)]
        patched: bool,
        /// Print the two sides of the patch equation instead.
        #[arg(long, conflicts_with = "patched")]
        equation: bool,
    },
    /// Encoding of `if x = y then P else Q`.
    Match {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long = "then")]
        then_p: String,
        #[arg(long = "else")]
        else_q: String,
    },
    CreditCard,
}

/// Input errors exit with 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_term(path: &Path) -> Result<Process, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?
    };
    parse(&text).map_err(|e| Failure(format!("{}:{e}", path.display())))
}

fn parse_arg(src: &str) -> Result<Process, Failure> {
    parse(src).map_err(|e| Failure(format!("{src:?}: {e}")))
}

/// Printed form with parseable binder names.
fn show(p: &Process) -> String {
    pretty(&readable(p))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = &cli.run;
    match &cli.cmd {
        Cmd::Parse { file } => {
            println!("{}", pretty(&read_term(file)?));
            Ok(0)
        }
        Cmd::Normalize { file } => {
            let p = read_term(file)?;
            let key = normalize(&p).0;
            let form = readable(&normal_process(&p));
            if cfg.format == Format::Json {
                let mut binders = Vec::new();
                let mut body = &form;
                while let Process::New(x, b) | Process::Hide(x, b) = body {
                    let kind = if matches!(body, Process::New(..)) {
                        "new"
                    } else {
                        "hide"
                    };
                    binders.push(json!({ "kind": kind, "name": x.as_str() }));
                    body = b;
                }
                let mut threads = Vec::new();
                let mut rest = body;
                while let Process::Par(l, r) = rest {
                    threads.push(pretty(r));
                    rest = l;
                }
                if !rest.is_nil() {
                    threads.push(pretty(rest));
                }
                threads.reverse();
                print_json(&json!({
                    "term": pretty(&form),
                    "key": key,
                    "binders": binders,
                    "threads": threads,
                }));
            } else {
                println!("{}", pretty(&form));
            }
            Ok(0)
        }
        Cmd::Reduce { file, leak } => reduce(cfg, &read_term(file)?, leak.as_deref()),
        Cmd::Lts { file } => {
            let p = read_term(file)?;
            let budget = NameBudget::new(p.free_names(), cfg.fresh as usize);
            let g = build_graph(&p, cfg.mode(), &budget, cfg.max_states as usize)?;
            match cfg.format {
                Format::Text => print!("{}", g.to_machine()),
                Format::Dot => print!("{}", g.to_dot()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&g.view())?),
            }
            Ok(0)
        }
        Cmd::Barbs { file, weak } => {
            let p = read_term(file)?;
            let (set, bound_hit) = if *weak {
                weak_barbs(&p, &cfg.bounds())
            } else {
                (barbs(&p), false)
            };
            if cfg.format == Format::Json {
                let names: Vec<String> = set.iter().map(Barb::to_string).collect();
                print_json(&json!({ "barbs": names, "bound_hit": bound_hit }));
            } else {
                for b in &set {
                    println!("{b}");
                }
                if bound_hit {
                    println!("boundhit 1");
                }
            }
            Ok(0)
        }
        Cmd::Bisim { left, right } => {
            let (p, q) = (read_term(left)?, read_term(right)?);
            let r = bisim_report(&p, &q, cfg.mode(), &cfg.bounds(), cfg.fresh as usize)?;
            if cfg.format == Format::Json {
                print_json(&json!({
                    "verdict": r.verdict.name(),
                    "detail": r.verdict,
                    "trace": match &r.verdict {
                        BisimVerdict::NotBisimilar(t) =>
                            t.iter().map(|s| json!([s.action.to_string(), s.side.to_string()])).collect(),
                        _ => Vec::new(),
                    },
                    "left_states": r.left.states.iter().map(show).collect::<Vec<_>>(),
                    "right_states": r.right.states.iter().map(show).collect::<Vec<_>>(),
                }));
            } else {
                print!("{}", r.verdict.to_lines());
            }
            Ok(match r.verdict {
                BisimVerdict::Bisimilar(_) => 0,
                BisimVerdict::NotBisimilar(_) => 1,
                BisimVerdict::Inconclusive(_) => 3,
            })
        }
        Cmd::CheckSuite { only, json } => {
            if let Some(bad) = only
                .iter()
                .find(|o| !check_ids().any(|id| id == o.as_str()))
            {
                let known: Vec<_> = check_ids().collect();
                return Err(Failure(format!(
                    "unknown check {bad}; known: {}",
                    known.join(", ")
                )));
            }
            let results = run_suite((!only.is_empty()).then_some(only.as_slice()));
            if *json || cfg.format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&results)?);
            } else {
                for r in &results {
                    let tag = if r.passed { "PASS" } else { "FAIL" };
                    println!("{tag} {}: {}", r.id, r.detail);
                }
            }
            Ok(if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            })
        }
        Cmd::Build { what } => {
            for p in build(what)? {
                println!("{}", pretty(&p));
            }
            Ok(0)
        }
    }
}

fn reduce(cfg: &RunConfig, p: &Process, leak: Option<&str>) -> Result<u8, Failure> {
    let r = reach(p, &cfg.bounds());
    let leaking: Vec<bool> = r
        .states
        .iter()
        .map(|s| leak.is_some_and(|n| barbs(s).contains(&Barb::output(n))))
        .collect();
    if cfg.format == Format::Json {
        print_json(&json!({
            "states": r.states.iter().zip(&leaking).map(|(s, l)| json!({
                "term": show(s),
                "leak": l,
            })).collect::<Vec<_>>(),
            "edges": r.edges,
            "bound_hit": r.bound_hit,
        }));
        return Ok(0);
    }
    for (i, s) in r.states.iter().enumerate() {
        let mark = if leaking[i] { " LEAK" } else { "" };
        println!("state {i} {}{mark}", show(s));
    }
    for (a, b) in &r.edges {
        println!("edge {a} {b}");
    }
    println!("boundhit {}", u8::from(r.bound_hit));
    if let Some(first) = leaking.iter().position(|&l| l) {
        let path: Vec<String> = r.path_to(first).iter().map(usize::to_string).collect();
        println!("leakpath {}", path.join(" "));
    }
    Ok(0)
}

fn build(what: &Build) -> Result<Vec<Process>, Failure> {
    Ok(match what {
        Build::Example1 { v, z } => vec![example1(v.as_str(), z.as_str())?.1],
        Build::Example2 { n, accepted, i } => vec![example2(*n, accepted, *i)?.filled],
        Build::Dbus { patched, equation } => {
            if *equation {
                let (l, r) = dbus_equation();
                vec![l, r]
            } else {
                vec![dbus(*patched)]
            }
        }
        Build::Match {
            x,
            y,
            then_p,
            else_q,
        } => {
            let m = secretpi::MatchSpec::new(
                x.as_str(),
                y.as_str(),
                parse_arg(then_p)?,
                parse_arg(else_q)?,
            );
            vec![encode_match(&m)]
        }
        Build::CreditCard => vec![credit_card()],
    })
}
