//! `jagg`: batch front end for the aggregation engine.
//!
//! JSON goes to stdout and a short summary to stderr. Exit codes: 0 success,
//! 1 a separability check or suite failed, 2 bad input, 3 a resource limit.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use jagg_core::decomposition::{
    aggregate_via_fresh_blocks, find_finest_independent_partition, find_iod, syntactic_partition,
    Decomposition,
};
use jagg_core::document::Problem;
use jagg_core::rules::{Outcome, RuleId, TieBreaker};
use jagg_core::separability::{
    check_as_instance, check_oas_instance, random_decomposable_agenda, random_profile,
    run_property_suite, SuiteConfig, Verdict,
};
use jagg_core::{Agenda, Error, JudgmentSet, Profile};

#[derive(Parser)]
#[command(name = "jagg", version, about = "Exact judgment aggregation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a rule to the profile in a problem file.
    Aggregate {
        #[arg(long)]
        rule: String,
        /// Also report the winner under the default lexicographic priority.
        #[arg(long)]
        tiebreak: bool,
        file: PathBuf,
    },
    /// Look for a decomposition of the agenda.
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        file: PathBuf,
    },
    /// Check agenda separability on the file's profile and named blocks.
    Check {
        #[arg(long, value_enum)]
        property: CheckProperty,
        #[arg(long)]
        rule: String,
        /// Comma-separated block names from the file.
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<String>,
        file: PathBuf,
    },
    /// Time direct against blockwise aggregation on a random decomposable agenda.
    Bench {
        #[arg(long)]
        blocks: usize,
        #[arg(long)]
        atoms: usize,
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        reps: usize,
    },
    /// Run the randomized separability suite and the fixed replays.
    Suite {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Syntactic,
    Partition,
    Iod,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckProperty {
    As,
    Oas,
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Aggregate { rule, tiebreak, file } => aggregate(&rule, tiebreak, &file),
        Command::Decompose { mode, file } => decompose(mode, &file),
        Command::Check { property, rule, blocks, file } => check(property, &rule, &blocks, &file),
        Command::Bench { blocks, atoms, agents, rule, seed, reps } => {
            bench(blocks, atoms, agents, &rule, seed, reps)
        }
        Command::Suite { trials, seed } => suite(trials, seed),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
    }
}

fn load(file: &PathBuf) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", file.display())))?;
    Ok(Problem::from_json(&text)?)
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn set_json(agenda: &Agenda, j: &JudgmentSet) -> serde_json::Value {
    let formulas: Vec<String> = agenda.formulas_of(j).iter().map(|f| f.to_string()).collect();
    let signs: String = j.signs().iter().map(|s| s.symbol()).collect();
    json!({ "signs": signs, "formulas": formulas })
}

fn aggregate(rule: &str, tiebreak: bool, file: &PathBuf) -> Run {
    let rule: RuleId = rule.parse()?;
    let problem = load(file)?;
    let p = problem.profile()?;
    let outcome = rule.apply(p)?;
    let agenda = p.agenda();
    let mut out = json!({
        "rule": rule.name(),
        "outcome": outcome.iter().map(|j| set_json(agenda, j)).collect::<Vec<_>>(),
    });
    eprintln!("{}: {} judgment set(s)", rule, outcome.len());
    if tiebreak {
        let winner = TieBreaker::default().select(&outcome)?;
        eprintln!("winner: {winner}");
        out["winner"] = set_json(agenda, &winner);
    }
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn decompose(mode: Mode, file: &PathBuf) -> Run {
    let problem = load(file)?;
    let agenda = &problem.agenda;
    let found: Option<Decomposition> = match mode {
        Mode::Syntactic => Some(syntactic_partition(agenda)?),
        Mode::Partition => Some(find_finest_independent_partition(agenda)?),
        Mode::Iod => find_iod(agenda)?,
    }
    .filter(|d| !d.is_trivial());
    let out = match &found {
        None => {
            eprintln!("trivial");
            json!({ "mode": mode, "result": "trivial" })
        }
        Some(d) => {
            eprintln!("{} blocks: {:?}", d.blocks().len(), d.blocks());
            json!({ "mode": mode, "result": "decomposed", "kind": d.kind(), "blocks": d.blocks() })
        }
    };
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn check(property: CheckProperty, rule: &str, names: &[String], file: &PathBuf) -> Run {
    let rule: RuleId = rule.parse()?;
    let problem = load(file)?;
    let p = problem.profile()?;
    let blocks = names.iter().map(|n| problem.block(n).map(<[usize]>::to_vec)).collect::<Result<Vec<_>, _>>()?;
    let report = match property {
        CheckProperty::As => {
            let d = Decomposition::certify_partition(&problem.agenda, blocks)?;
            check_as_instance(&rule, p, &d)?
        }
        CheckProperty::Oas => {
            let [b1, b2] = blocks.as_slice() else {
                return Err(Failure::Input("oas needs exactly two blocks".into()));
            };
            let d = Decomposition::certify_iod(&problem.agenda, b1, b2)?;
            check_oas_instance(&rule, p, &d)?
        }
    };
    eprintln!("{}: {:?}", rule, report.verdict);
    print_json(&report);
    Ok(if report.verdict == Verdict::Violated { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn median(mut times: Vec<Duration>) -> Duration {
    times.sort();
    times[times.len() / 2]
}

fn bench(blocks: usize, atoms: usize, agents: usize, rule: &str, seed: u64, reps: usize) -> Run {
    let rule: RuleId = rule.parse()?;
    let reps = reps.max(1);
    let (agenda, d) = random_decomposable_agenda(blocks, atoms, seed)?;
    let p = random_profile(Arc::new(agenda), agents, seed)?;
    let issues = p.agenda().issues().to_vec();

    // the direct path rebuilds J_A on each repetition, just as the blockwise
    // path rebuilds each block's agenda
    let mut direct = None;
    let mut direct_times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let fresh = Arc::new(Agenda::with_limits(issues.clone(), p.agenda().constraint().clone(), *p.agenda().limits())?);
        let out = rule.apply(&Profile::new(fresh, p.members().to_vec())?)?;
        direct_times.push(start.elapsed());
        direct = Some(out);
    }
    let mut blockwise: Option<Outcome> = None;
    let mut block_times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let out = aggregate_via_fresh_blocks(&rule, &p, &d)?;
        block_times.push(start.elapsed());
        blockwise = Some(out);
    }
    let (direct, blockwise) = (direct.expect("reps >= 1"), blockwise.expect("reps >= 1"));
    let (dt, bt) = (median(direct_times), median(block_times));
    let checked = rule.is_agenda_separable();
    let equal = direct == blockwise;
    let speedup = dt.as_secs_f64() / bt.as_secs_f64().max(1e-12);
    print_json(&json!({
        "rule": rule.name(),
        "blocks": d.blocks().len(),
        "atoms_per_block": atoms,
        "agents": agents,
        "seed": seed,
        "issues": issues.len(),
        "complete_sets": p.agenda().complete_sets().len(),
        "reps": reps,
        "direct_us": dt.as_secs_f64() * 1e6,
        "decomposed_us": bt.as_secs_f64() * 1e6,
        "speedup": speedup,
        "equality_checked": checked,
        "outputs_equal": equal,
    }));
    eprintln!(
        "direct {:.1} us, decomposed {:.1} us, speedup {speedup:.2}x{}",
        dt.as_secs_f64() * 1e6,
        bt.as_secs_f64() * 1e6,
        if checked { if equal { ", outputs equal" } else { ", OUTPUTS DIFFER" } } else { ", equality not checked" }
    );
    Ok(if checked && !equal { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn suite(trials: usize, seed: u64) -> Run {
    let config = SuiteConfig { trials, seed, ..SuiteConfig::default() };
    let report = run_property_suite(&config)?;
    for o in &report.properties {
        eprintln!(
            "{:<40} {} checked={} holds={} premise_not_satisfied={} failures={}",
            o.name,
            if o.passed() { "ok  " } else { "FAIL" },
            o.checked,
            o.holds,
            o.premise_not_satisfied,
            o.failures
        );
    }
    match &report.rev_oas_hunt.found {
        Some(_) => eprintln!("rev OAS counterexample found after {} trials", report.rev_oas_hunt.trials),
        None => eprintln!("rev OAS counterexample not found within {} trials", report.rev_oas_hunt.trials),
    }
    print_json(&report);
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
