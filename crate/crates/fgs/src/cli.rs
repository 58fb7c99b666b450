//! Command-line front end.
//!
//! Every command takes `--gens` and (except `cuts`) `--words`; words come as
//! a comma-separated list or `@file` with one word per line and `#` comments.
//! Output is JSON by default, with `text` and (where it makes sense) `dot`
//! variants. Exit codes: 0 success, 1 negative verdict, 2 input error,
//! 3 resource budget exceeded.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::boundary::boundary_step;
use crate::core_graph::core_of;
use crate::error::{Error, Result};
use crate::explorer::{
    best_node, enumerate_cuts, explore, sandwich, ExploreLimits, DEFAULT_NODE_BUDGET,
};
use crate::oracles::primitivity_oracle;
use crate::whitehead::{closure_basis, cut_vertex_algorithm, is_subbasis, whitehead_graph};
use crate::words::{Alphabet, GeneratorMap, Letter, Word, WordSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputMode {
    Json,
    Dot,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "fgs",
    about = "Free-group sandwich toolkit: Whitehead reductions, Stallings cores, free-factor layers",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, clap::Args)]
pub struct CommonArgs {
    /// Generator symbols, e.g. `xy` for the free group on x and y.
    #[arg(long)]
    pub gens: String,

    /// Comma-separated words, or `@path` to read one word per line.
    #[arg(long, default_value = "")]
    pub words: String,

    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputMode,
}

#[derive(Clone, Debug, clap::Args)]
pub struct ExploreArgs {
    /// Abort exploration after this many distinct subgroups.
    #[arg(long)]
    pub node_budget: Option<usize>,

    /// Allow ranks above the safety guard.
    #[arg(long)]
    pub force: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Whitehead graph of the word set.
    Graph {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the cut-vertex reduction loop and print the trace.
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print a basis of the smallest free factor containing the span.
    Closure {
        #[command(flatten)]
        common: CommonArgs,
        /// Cross-check rank minimality against the bounded search oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle search depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Decide whether the words extend to a basis of the whole group.
    Subbasis {
        #[command(flatten)]
        common: CommonArgs,
        /// Cross-check single-word verdicts against the primitivity oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle search depth.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Print the Stallings core graph of the span.
    Core {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Apply one boundary operation to the core graph.
    Boundary {
        #[command(flatten)]
        common: CommonArgs,
        /// Index into the cut enumeration (see `cuts`).
        #[arg(long)]
        cut: usize,
        /// Also dump the intermediate phase graphs as DOT.
        #[arg(long)]
        explain: bool,
    },
    /// Explore the boundary state space and dump it (JSON lines or DOT).
    Explore {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        limits: ExploreArgs,
    },
    /// Sandwich the span between free-factor layers.
    Sandwich {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        limits: ExploreArgs,
        /// Verify maximality against the bounded basis search.
        #[arg(long)]
        oracle: bool,
        /// Oracle search depth.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// List every cut over the alphabet in enumeration order.
    Cuts {
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// What a command run produced: the text for stdout and the verdict that
/// drives the exit code.
pub struct RunOutput {
    pub stdout: String,
    pub verdict: Option<bool>,
}

impl RunOutput {
    fn plain(stdout: String) -> RunOutput {
        RunOutput {
            stdout,
            verdict: None,
        }
    }
}

pub fn exit_code(outcome: &std::result::Result<RunOutput, Error>) -> i32 {
    match outcome {
        Ok(out) => {
            if out.verdict == Some(false) {
                1
            } else {
                0
            }
        }
        Err(Error::NodeBudgetExceeded(_)) => 3,
        Err(_) => 2,
    }
}

fn parse_words_arg(raw: &str, alphabet: &Alphabet) -> Result<WordSet> {
    let mut entries: Vec<String> = Vec::new();
    if let Some(path) = raw.strip_prefix('@') {
        let content = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
        for line in content.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                entries.push(line.to_string());
            }
        }
    } else if !raw.is_empty() {
        entries.extend(raw.split(',').map(|s| s.trim().to_string()));
    }
    let mut words = Vec::new();
    for e in &entries {
        words.push(Word::parse(e, alphabet)?);
    }
    let set = WordSet::new(words);
    if set.dropped_identities() > 0 {
        eprintln!(
            "warning: dropped {} identity word(s) from the input",
            set.dropped_identities()
        );
    }
    Ok(set)
}

fn alphabet_arg(gens: &str) -> Result<Alphabet> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("--gens must not be empty".into()));
    }
    Alphabet::new(gens)
}

fn node_budget(limits: &ExploreArgs) -> usize {
    limits
        .node_budget
        .or_else(|| {
            std::env::var("FGS_NODE_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

fn explore_limits(limits: &ExploreArgs) -> Result<ExploreLimits> {
    let budget = node_budget(limits);
    if budget == 0 {
        return Err(Error::InvalidInput("node budget must be at least 1".into()));
    }
    Ok(ExploreLimits {
        node_budget: budget,
        force_rank: limits.force,
    })
}

fn words_text(words: &[Word], alphabet: &Alphabet) -> String {
    words
        .iter()
        .map(|w| w.display(alphabet))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(cli: Cli) -> Result<RunOutput> {
    match cli.command {
        Command::Graph { common } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let g = whitehead_graph(&z, &alphabet);
            let out = match common.output {
                OutputMode::Json => g.to_json().to_string() + "\n",
                OutputMode::Dot => g.to_dot(),
                OutputMode::Text => {
                    let mut s = String::new();
                    for (u, v) in g.edges() {
                        let show = |x: &crate::whitehead::WhVertex| match x {
                            crate::whitehead::WhVertex::Base => "1".to_string(),
                            crate::whitehead::WhVertex::L(l) => l.display(&alphabet).to_string(),
                        };
                        writeln!(s, "{} -- {}", show(u), show(v)).unwrap();
                    }
                    s
                }
            };
            Ok(RunOutput::plain(out))
        }
        Command::Reduce { common } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let trace = cut_vertex_algorithm(&z, &alphabet);
            let out = match common.output {
                OutputMode::Text => {
                    let mut s = String::new();
                    writeln!(s, "initial length {}", trace.initial_length).unwrap();
                    for (i, step) in trace.steps.iter().enumerate() {
                        writeln!(
                            s,
                            "step {}: e*={} d*={} -> length {}",
                            i + 1,
                            step.cut.e_star().display(&alphabet),
                            step.cut.d_star().display(&alphabet),
                            step.length_after
                        )
                        .unwrap();
                    }
                    writeln!(
                        s,
                        "final: {}",
                        words_text(trace.final_set.words(), &alphabet)
                    )
                    .unwrap();
                    s
                }
                _ => trace.to_json(&alphabet).to_string() + "\n",
            };
            Ok(RunOutput::plain(out))
        }
        Command::Closure {
            common,
            oracle,
            depth,
        } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let basis = closure_basis(&z, &alphabet);
            let mut value = json!({
                "rank": basis.len(),
                "basis": basis.iter().map(|w| w.display(&alphabet)).collect::<Vec<_>>(),
            });
            if oracle {
                let min = oracle_min_support(&z, &alphabet, depth)?;
                value["oracleMinSupport"] = json!(min);
                value["oracleConsistent"] = json!(basis.len() <= min);
            }
            let out = match common.output {
                OutputMode::Text => {
                    format!("rank {}: {}\n", basis.len(), words_text(&basis, &alphabet))
                }
                _ => value.to_string() + "\n",
            };
            Ok(RunOutput::plain(out))
        }
        Command::Subbasis {
            common,
            oracle,
            depth,
        } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let outcome = is_subbasis(&z, &alphabet);
            let mut value = json!({
                "verdict": outcome.verdict,
                "extendedBasis": outcome.extended_basis.as_ref().map(|b| {
                    b.iter().map(|w| w.display(&alphabet)).collect::<Vec<_>>()
                }),
            });
            if oracle {
                if z.len() == 1 {
                    let by_oracle = primitivity_oracle(&z.words()[0], &alphabet, depth)?;
                    value["oracleVerdict"] = json!(by_oracle);
                    value["oracleConsistent"] = json!(by_oracle == outcome.verdict);
                } else {
                    return Err(Error::OracleGuard(
                        "primitivity oracle applies to a single word".into(),
                    ));
                }
            }
            let out = match common.output {
                OutputMode::Text => match &outcome.extended_basis {
                    Some(b) => format!("true: {}\n", words_text(b, &alphabet)),
                    None => "false\n".to_string(),
                },
                _ => value.to_string() + "\n",
            };
            Ok(RunOutput {
                stdout: out,
                verdict: Some(outcome.verdict),
            })
        }
        Command::Core { common } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let core = core_of(&z, &alphabet);
            let out = match common.output {
                OutputMode::Json => core.to_json().to_string() + "\n",
                OutputMode::Dot => core.to_dot(),
                OutputMode::Text => format!(
                    "vertices {} edges {} loops {} key {}\n",
                    core.vertex_count(),
                    core.edge_count(),
                    core.basepoint_loop_letters().len(),
                    core.canonical_key().hex()
                ),
            };
            Ok(RunOutput::plain(out))
        }
        Command::Boundary {
            common,
            cut,
            explain,
        } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let cuts = enumerate_cuts(&alphabet);
            let chosen = cuts
                .get(cut)
                .ok_or_else(|| {
                    Error::InvalidInput(format!("cut index {cut} out of range (0..{})", cuts.len()))
                })?
                .clone();
            let step = boundary_step(&core_of(&z, &alphabet), &chosen)?;
            let out = match common.output {
                OutputMode::Dot => {
                    if explain {
                        format!(
                            "// input\n{}// augmented\n{}// relabeled\n{}// output\n{}",
                            step.input.to_dot(),
                            step.augmented.to_dot(),
                            step.relabeled.to_dot(),
                            step.output.to_dot()
                        )
                    } else {
                        step.output.to_dot()
                    }
                }
                OutputMode::Text => format!(
                    "edges {} -> {} loops {}\n",
                    step.input.edge_count(),
                    step.output.edge_count(),
                    step.output.basepoint_loop_letters().len()
                ),
                OutputMode::Json => {
                    let mut value = json!({
                        "cut": chosen.to_json(),
                        "output": step.output.to_json(),
                    });
                    if explain {
                        value["augmented"] = step.augmented.to_json();
                        value["relabeled"] = step.relabeled.to_json();
                    }
                    value.to_string() + "\n"
                }
            };
            Ok(RunOutput::plain(out))
        }
        Command::Explore { common, limits } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let graph = explore(&z, &alphabet, &explore_limits(&limits)?)?;
            let out = match common.output {
                OutputMode::Dot => graph.to_dot(Some(best_node(&graph))),
                OutputMode::Text => format!(
                    "nodes {} best {} loops {}\n",
                    graph.nodes.len(),
                    best_node(&graph),
                    graph.nodes[best_node(&graph)].loop_count
                ),
                OutputMode::Json => graph.to_json_lines(),
            };
            Ok(RunOutput::plain(out))
        }
        Command::Sandwich {
            common,
            limits,
            oracle,
            depth,
        } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let z = parse_words_arg(&common.words, &alphabet)?;
            let result = sandwich(&z, &alphabet, &explore_limits(&limits)?)?;
            let mut value = result.to_json(&alphabet);
            if oracle {
                let max = oracle_max_basis_overlap(&z, &alphabet, depth)?;
                value["oracleMaxOverlap"] = json!(max);
                value["oracleConsistent"] = json!(max <= result.best_count);
            }
            let out = match common.output {
                OutputMode::Text => format!(
                    "lower {} of rank-{} basis; upper rank {}\n",
                    result.best_count,
                    alphabet.rank(),
                    result.upper_basis.len()
                ),
                _ => value.to_string() + "\n",
            };
            Ok(RunOutput::plain(out))
        }
        Command::Cuts { common } => {
            let alphabet = alphabet_arg(&common.gens)?;
            let cuts = enumerate_cuts(&alphabet);
            let out = match common.output {
                OutputMode::Text => {
                    let mut s = String::new();
                    for (i, c) in cuts.iter().enumerate() {
                        writeln!(s, "{i}: {}", c.to_json()).unwrap();
                    }
                    s
                }
                _ => {
                    json!({
                        "count": cuts.len(),
                        "cuts": cuts.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                    })
                    .to_string()
                        + "\n"
                }
            };
            Ok(RunOutput::plain(out))
        }
    }
}

/// Minimum |supp(Z rel E^Ψ)| over products Ψ of at most `depth` cut
/// automorphisms; used by `closure --oracle`.
fn oracle_min_support(z: &WordSet, alphabet: &Alphabet, depth: usize) -> Result<usize> {
    if alphabet.rank() > crate::oracles::ORACLE_MAX_RANK || depth > 3 {
        return Err(Error::OracleGuard(
            "support oracle limited to rank ≤ 3, depth ≤ 3".into(),
        ));
    }
    let maps: Vec<GeneratorMap> = enumerate_cuts(alphabet)
        .iter()
        .flat_map(|c| [c.phi(), c.phi_inverse()])
        .collect();
    let mut best = z.support(alphabet).len();
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![z.clone()];
    seen.insert(z.words().to_vec());
    for _ in 0..depth {
        let mut next = Vec::new();
        for state in &frontier {
            for m in &maps {
                let image = state.map(m);
                best = best.min(image.support(alphabet).len());
                if seen.insert(image.words().to_vec()) {
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    Ok(best)
}

/// Maximum |E^Ψ ∩ ⟨Z⟩| over products Ψ of at most `depth` cut
/// automorphisms; used by `sandwich --oracle`.
fn oracle_max_basis_overlap(z: &WordSet, alphabet: &Alphabet, depth: usize) -> Result<usize> {
    if alphabet.rank() > crate::oracles::ORACLE_MAX_RANK || depth > 3 {
        return Err(Error::OracleGuard(
            "basis oracle limited to rank ≤ 3, depth ≤ 3".into(),
        ));
    }
    let membership = core_of(z, alphabet);
    let maps: Vec<GeneratorMap> = enumerate_cuts(alphabet)
        .iter()
        .flat_map(|c| [c.phi(), c.phi_inverse()])
        .collect();
    let count_overlap = |basis: &[Word]| basis.iter().filter(|w| membership.contains(w)).count();
    let identity: Vec<Word> = (0..alphabet.rank())
        .map(|g| Word::single(Letter::positive(g)))
        .collect();
    let mut best = count_overlap(&identity);
    let mut seen = std::collections::HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    for _ in 0..depth {
        let mut next = Vec::new();
        for state in &frontier {
            for m in &maps {
                let image: Vec<Word> = state.iter().map(|w| m.apply(w)).collect();
                best = best.max(count_overlap(&image));
                if seen.insert(image.clone()) {
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    Ok(best)
}
