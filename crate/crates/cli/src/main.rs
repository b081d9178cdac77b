//! `unambig`: classify automata, decide unary twins, generate reduction instances,
//! solve disjoint progressions, run the differential suites and the benchmarks.
//!
//! Exit codes: 0 when a verdict was printed, 1 on I/O errors or failing suites, 2 on
//! malformed input, 3 when an input exceeds `--cap`.

mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use unambig::baseline::classify;
use unambig::bench::{doubling_sizes, run_family, scaling_report, to_csv, Family};
use unambig::format::{
    parse_automata, parse_automaton, parse_layers, parse_ov, parse_progressions, write_nfa, write_weighted, Automaton,
};
use unambig::generate::DEFAULT_SEED;
use unambig::graph::to_weighted_st_graph;
use unambig::oracles::naive_twins;
use unambig::progressions::disjoint_progressions;
use unambig::reductions::{
    binary_encode, expand_wildcards, ie2_to_unambiguity, ie3_to_ida, kcycle_to_2ie, kov_to_kie, unambiguity_to_eda,
    unambiguity_to_twins, GadgetDfa, Label,
};
use unambig::twins::unary_twins;
use unambig::unary::unary_classify;
use unambig::{Error, Nfa};

#[derive(Parser)]
#[command(name = "unambig", version, about = "Ambiguity and twins deciders for finite automata")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Reject inputs whose size (states plus transitions, total step, or vector
    /// entries) exceeds this bound.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ambiguity class of an automaton, with a witness.
    Classify {
        file: PathBuf,
        /// Use the near-linear unary pipeline; the alphabet must have one letter.
        #[arg(long)]
        unary_fast: bool,
    },
    /// Twins property of a weighted automaton.
    Twins { file: PathBuf },
    /// Generate the output instance of a reduction.
    Reduce {
        kind: ReductionKind,
        /// Input files; automata may also be given together in one file.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Write here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// For ov2ie and kcycle2ie: expand range labels into a binary alphabet.
        #[arg(long)]
        binary: bool,
    },
    /// Decide whether a set of arithmetic progressions is pairwise disjoint.
    SolveDp { file: PathBuf },
    /// Run randomized differential suites against the brute-force oracles.
    Verify {
        /// One of general, unary, unary-graph, progressions, twins, reductions, all.
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Time the near-linear deciders on doubling instance sizes and write CSV.
    Bench {
        /// A family name or `all`.
        #[arg(default_value = "all")]
        family: String,
        /// Comma-separated sizes; overrides the exponent range.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        min_exp: u32,
        #[arg(long, default_value_t = 20)]
        max_exp: u32,
        #[arg(long, default_value_t = 3)]
        runs: usize,
        /// Number of largest doublings summarized in the report.
        #[arg(long, default_value_t = 5)]
        top: usize,
        /// CSV destination; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionKind {
    /// Orthogonal vectors to intersection emptiness of k DFAs.
    Ov2ie,
    /// Layered k-cycle to intersection emptiness of two DFAs.
    Kcycle2ie,
    /// Two DFAs to the unambiguity of their union.
    Ie2unamb,
    /// Unambiguity to the existence of an EDA.
    Unamb2eda,
    /// Three DFAs to the existence of an IDA.
    #[value(name = "3ie2ida")]
    Ie3ida,
    /// Unambiguity to the twins property.
    Unamb2twins,
    /// Binary encoding of a DFA.
    Binencode,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(match e.downcast_ref::<Error>() {
                Some(Error::Parse { .. } | Error::Invalid(_)) => 2,
                Some(Error::CapExceeded(_)) => 3,
                None => 1,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Classify { file, unary_fast } => cmd_classify(cli, file, *unary_fast),
        Command::Twins { file } => cmd_twins(cli, file),
        Command::Reduce { kind, inputs, output, binary } => cmd_reduce(cli, *kind, inputs, output.as_deref(), *binary),
        Command::SolveDp { file } => cmd_solve_dp(cli, file),
        Command::Verify { suite, cases } => cmd_verify(cli, suite, *cases),
        Command::Bench { family, sizes, min_exp, max_exp, runs, top, output } => {
            let sizes = if sizes.is_empty() { doubling_sizes(*min_exp, *max_exp) } else { sizes.clone() };
            cmd_bench(cli, family, &sizes, *runs, *top, output.as_deref())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Parse errors keep their line number and gain the file name.
fn parse<T>(path: &Path, f: impl FnOnce(&str) -> unambig::Result<T>) -> Result<T> {
    let text = read(path)?;
    f(&text).with_context(|| path.display().to_string())
}

fn check_cap(cli: &Cli, size: usize, what: &str) -> Result<()> {
    match cli.cap {
        Some(cap) if size > cap => Err(Error::CapExceeded(format!("{what} has size {size}, cap is {cap}")).into()),
        _ => Ok(()),
    }
}

fn nfa_size(a: &Nfa) -> usize {
    a.num_states() + a.transitions().len()
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn cmd_classify(cli: &Cli, file: &Path, unary_fast: bool) -> Result<ExitCode> {
    let automaton = parse(file, parse_automaton)?;
    let a = automaton.nfa();
    check_cap(cli, nfa_size(a), "automaton")?;
    let verdict = if unary_fast { unary_classify(a)? } else { classify(a) };
    if cli.json {
        #[derive(Serialize)]
        struct Report<'a> {
            method: &'a str,
            #[serde(flatten)]
            verdict: &'a unambig::AmbiguityVerdict,
        }
        let method = if unary_fast { "unary" } else { "general" };
        print_json(&Report { method, verdict: &verdict })?;
    } else {
        println!("{}", verdict.class);
        if let Some(w) = &verdict.witness {
            println!("witness {}", serde_json::to_string(w)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_twins(cli: &Cli, file: &Path) -> Result<ExitCode> {
    let w = match parse(file, parse_automaton)? {
        Automaton::Weighted(w) => w,
        Automaton::Plain(_) => bail!(Error::Invalid("expected a weighted automaton".into())),
    };
    check_cap(cli, nfa_size(w.nfa()), "automaton")?;
    // Unary automata in normal form take the linear-time path; anything else goes
    // through the square-graph check.
    let (method, twins, witness) = match to_weighted_st_graph(&w) {
        Ok(g) => {
            let (ok, witness) = unary_twins(&g);
            ("unary", ok, witness)
        }
        Err(_) => ("square-graph", naive_twins(&w)?, None),
    };
    if cli.json {
        print_json(&serde_json::json!({ "method": method, "twins": twins, "witness": witness }))?;
    } else {
        println!("{}", if twins { "twins" } else { "not-twins" });
        if let Some(w) = witness {
            println!("witness {}", serde_json::to_string(&w)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// All automata of all input files, in order.
fn read_automata(inputs: &[PathBuf]) -> Result<Vec<Nfa>> {
    let mut out = Vec::new();
    for path in inputs {
        out.extend(parse(path, parse_automata)?.iter().map(|a| a.nfa().clone()));
    }
    Ok(out)
}

fn exactly<const N: usize>(automata: Vec<Nfa>, kind: &str) -> Result<[Nfa; N]> {
    let found = automata.len();
    automata.try_into().map_err(|_| Error::Invalid(format!("{kind} takes {N} automata, found {found}")).into())
}

fn dfa_to_gadget(a: &Nfa) -> Result<GadgetDfa> {
    if a.initial().len() != 1 || !a.is_deterministic() {
        bail!(Error::Invalid("expected a DFA with one initial state".into()));
    }
    let transitions = a.transitions().iter().map(|&(p, x, q)| (p, Label::Symbol(x), q)).collect();
    Ok(GadgetDfa::new(a.num_states(), a.alphabet_size(), transitions, a.initial()[0], a.finals().to_vec())?)
}

fn cmd_reduce(
    cli: &Cli,
    kind: ReductionKind,
    inputs: &[PathBuf],
    output: Option<&Path>,
    binary: bool,
) -> Result<ExitCode> {
    let gadgets = |ds: &[GadgetDfa]| -> Vec<String> {
        ds.iter().map(|d| write_nfa(&if binary { expand_wildcards(d) } else { d.to_nfa() })).collect()
    };
    let parts: Vec<String> = match kind {
        ReductionKind::Ov2ie => {
            let ov = parse(single(inputs)?, parse_ov)?;
            check_cap(cli, ov.k() * ov.n() * ov.d(), "OV instance")?;
            gadgets(&kov_to_kie(&ov))
        }
        ReductionKind::Kcycle2ie => {
            let g = parse(single(inputs)?, parse_layers)?;
            check_cap(cli, g.k() * g.n() + g.edges().len(), "layered graph")?;
            let (d1, d2) = kcycle_to_2ie(&g);
            gadgets(&[d1, d2])
        }
        _ => {
            let automata = read_automata(inputs)?;
            check_cap(cli, automata.iter().map(nfa_size).sum(), "input automata")?;
            match kind {
                ReductionKind::Ie2unamb => {
                    let [d1, d2] = exactly(automata, "ie2unamb")?;
                    vec![write_nfa(&ie2_to_unambiguity(&d1, &d2)?)]
                }
                ReductionKind::Unamb2eda => {
                    let [a] = exactly(automata, "unamb2eda")?;
                    vec![write_nfa(&unambiguity_to_eda(&a))]
                }
                ReductionKind::Ie3ida => {
                    let [d1, d2, d3] = exactly(automata, "3ie2ida")?;
                    vec![write_nfa(&ie3_to_ida(&d1, &d2, &d3)?)]
                }
                ReductionKind::Unamb2twins => {
                    let [a] = exactly(automata, "unamb2twins")?;
                    vec![write_weighted(&unambiguity_to_twins(&a))]
                }
                ReductionKind::Binencode => {
                    let [a] = exactly(automata, "binencode")?;
                    vec![write_nfa(&binary_encode(&dfa_to_gadget(&a)?)?)]
                }
                ReductionKind::Ov2ie | ReductionKind::Kcycle2ie => unreachable!(),
            }
        }
    };
    let text = parts.join("\n");
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn single(inputs: &[PathBuf]) -> Result<&Path> {
    match inputs {
        [one] => Ok(one),
        _ => bail!(Error::Invalid(format!("expected one input file, found {}", inputs.len()))),
    }
}

fn cmd_solve_dp(cli: &Cli, file: &Path) -> Result<ExitCode> {
    let inst = parse(file, parse_progressions)?;
    check_cap(cli, inst.total_step() as usize, "progressions instance")?;
    let (disjoint, collision) = disjoint_progressions(&inst);
    if cli.json {
        print_json(&serde_json::json!({ "disjoint": disjoint, "collision": collision }))?;
    } else {
        println!("{}", if disjoint { "disjoint" } else { "not-disjoint" });
        if let Some(c) = collision {
            println!(
                "collision value {} in step {} base {} and step {} base {}",
                c.value,
                inst.entries()[c.first.0].0,
                c.first.1,
                inst.entries()[c.second.0].0,
                c.second.1
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, suite: &str, cases: usize) -> Result<ExitCode> {
    let suites: Vec<&str> = if suite == "all" { verify::SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for s in suites {
        let report = verify::run_suite(s, cli.seed, cases)?;
        if !cli.json {
            let status = if report.pass() { "PASS" } else { "FAIL" };
            print!("{status} {} ({} cases, {} mismatches)", report.suite, report.cases, report.mismatches);
            match report.first_failure {
                Some(seed) => println!(", first failing seed {seed}"),
                None => println!(),
            }
        }
        reports.push(report);
    }
    if cli.json {
        print_json(&reports)?;
    }
    Ok(if reports.iter().all(verify::SuiteReport::pass) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_bench(
    cli: &Cli,
    family: &str,
    sizes: &[usize],
    runs: usize,
    top: usize,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let families: Vec<Family> = if family == "all" { Family::ALL.to_vec() } else { vec![family.parse()?] };
    if let Some(&largest) = sizes.iter().max() {
        check_cap(cli, largest, "bench size")?;
    }
    let mut records = Vec::new();
    let mut reports = Vec::new();
    for f in families {
        let recs = run_family(f, sizes, runs.max(1), cli.seed);
        let report = scaling_report(f, &recs, top);
        eprintln!(
            "{} median doubling ratio {:.2} (limit {:.1}): {}",
            report.family,
            report.median_ratio,
            report.limit,
            if report.pass { "ok" } else { "exceeded" }
        );
        records.extend(recs);
        reports.push(report);
    }
    let csv = to_csv(&records);
    match output {
        Some(path) => {
            std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            if cli.json {
                print_json(&reports)?;
            }
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
