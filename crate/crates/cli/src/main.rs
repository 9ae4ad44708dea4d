use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;

use pathfactor::conditions::{check_condition, ConditionSpec, Mode, Verdict};
use pathfactor::factor::{build, Outcome};
use pathfactor::generators::{generate, FamilySpec};
use pathfactor::hypomatchable::{classify_no_factor, crush_set};
use pathfactor::io::{read_graph, write_graph_with_roles};
use pathfactor::matching::select_barrier;
use pathfactor::{Graph, VertexSet};

/// Exit status when the builder or the condition check ends on a certificate.
const EXIT_CERTIFICATE: u8 = 10;

#[derive(Parser)]
#[command(name = "pathfactor", version, about = "Path-factor builders and condition checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family member in the text graph format.
    Generate {
        /// Family tag, e.g. kn, cn, k1_sk2, a1, a2_prime, hn_sharp, join.
        #[arg(long)]
        family: String,
        /// Parameters, e.g. `3` or `2,1,1`; composite families take their
        /// arguments here, e.g. `--family join --params kn:1,cn:5`.
        #[arg(long)]
        params: String,
        /// Seed for the ranged families (picks a member between the ends).
        #[arg(long)]
        seed: Option<u64>,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print a maximum-deficiency barrier and the components it leaves.
    Barrier { graph: PathBuf },
    /// Classify a factor-critical graph against the excluded families.
    Classify {
        graph: PathBuf,
        #[arg(long, value_parser = parse_k)]
        k: usize,
    },
    /// Build a {P2, P(2k+1)}-factor or a certificate that none is promised.
    BuildFactor {
        graph: PathBuf,
        #[arg(long, value_parser = parse_k)]
        k: usize,
        /// Write the construction trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a component-counting condition over vertex subsets.
    CheckCondition(CheckArgs),
}

#[derive(Args)]
struct CheckArgs {
    graph: PathBuf,
    /// path-factor, p2p5, p2p7, p2p9, sharpness, conjecture:K or necessary:K
    /// (also thmA, thmB, thm13, thm14, lemma61).
    #[arg(long, conflicts_with_all = ["weights", "slope", "offset"])]
    preset: Option<String>,
    /// Comma-separated `order:weight` pairs, e.g. `1:1,3:1,5:2/3`.
    #[arg(long, requires_all = ["slope", "offset"])]
    weights: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<Rational64>,
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<Rational64>,
    /// `exhaustive`, `exhaustive:N` or `sampled:TRIALS:SEED`.
    #[arg(long, default_value = "exhaustive")]
    mode: Mode,
}

fn parse_k(s: &str) -> std::result::Result<usize, String> {
    match s {
        "3" => Ok(3),
        "4" => Ok(4),
        _ => Err("k must be 3 or 4".into()),
    }
}

fn fraction(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ids(set: &VertexSet) -> String {
    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn load(path: &Path) -> Result<Graph> {
    read_graph(path).with_context(|| format!("reading {}", path.display()))
}

fn family_spec(family: &str, params: &str, seed: Option<u64>) -> Result<FamilySpec> {
    let family = family.to_ascii_lowercase();
    let mut text = match family.as_str() {
        "join" | "union" | "kn_plus_copies" => format!("{family}({params})"),
        _ => format!("{family}:{params}"),
    };
    if let Some(seed) = seed {
        if !matches!(family.as_str(), "a2_prime" | "a3_prime" | "a4_prime") {
            bail!("family {family} takes no seed");
        }
        text = format!("{text}@{seed}");
    }
    Ok(text.parse()?)
}

fn parse_weights(text: &str) -> Result<BTreeMap<usize, Rational64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (order, weight) = item
            .split_once(':')
            .with_context(|| format!("weight {item:?} is not order:weight"))?;
        let order: usize = order.trim().parse().with_context(|| format!("bad order in {item:?}"))?;
        let weight: Rational64 = weight.trim().parse().map_err(|_| anyhow::anyhow!("bad weight in {item:?}"))?;
        out.insert(order, weight);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            family,
            params,
            seed,
            out,
        } => {
            let spec = family_spec(&family, &params, seed)?;
            let generated = generate(&spec)?;
            let text = format!("# {spec}\n{}", write_graph_with_roles(&generated.graph, &generated.roles));
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Barrier { graph } => {
            let g = load(&graph)?;
            let b = select_barrier(&g);
            println!("S: {}", ids(&b.s));
            let orders: Vec<String> = b.components.iter().map(|c| c.len().to_string()).collect();
            println!("components: {}", orders.join(" "));
            println!("deficiency: {}", b.deficiency);
        }
        Command::Classify { graph, k } => {
            let g = load(&graph)?;
            let cls = classify_no_factor(&g, k)?;
            println!("tag: {}", cls.tag);
            let params: Vec<String> = cls.params.iter().map(usize::to_string).collect();
            println!("params: {}", params.join(" "));
            if let Some(roles) = &cls.roles {
                for (name, v) in roles.named() {
                    println!("role {name} {v}");
                }
                let x = crush_set(&g, &cls)?;
                println!("crush: {}", ids(&x));
            }
        }
        Command::BuildFactor { graph, k, trace } => {
            let g = load(&graph)?;
            let built = build(&g, k)?;
            if let Some(path) = trace {
                let json = serde_json::to_string_pretty(&built.trace)?;
                std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
            }
            match &built.outcome {
                Outcome::Factor(f) => {
                    println!("FACTOR");
                    for p in &f.paths {
                        let line: Vec<String> = p.iter().map(usize::to_string).collect();
                        println!("{}", line.join(" "));
                    }
                }
                Outcome::Certificate(c) => {
                    println!("CERTIFICATE");
                    println!("X: {}", ids(&c.x));
                    println!("lhs: {}", fraction(c.lhs));
                    println!("rhs: {}", fraction(c.rhs));
                    return Ok(ExitCode::from(EXIT_CERTIFICATE));
                }
            }
        }
        Command::CheckCondition(args) => {
            let g = load(&args.graph)?;
            let spec = match (&args.preset, &args.weights) {
                (Some(name), None) => ConditionSpec::preset(name)?,
                (None, Some(w)) => ConditionSpec::new(
                    parse_weights(w)?,
                    args.slope.context("--slope is required with --weights")?,
                    args.offset.context("--offset is required with --weights")?,
                )?,
                _ => bail!("give exactly one of --preset or --weights"),
            };
            let report = check_condition(&g, &spec, args.mode)?;
            println!("condition: {spec}");
            println!("verdict: {}", report.verdict);
            println!("subsets: {}", report.subsets_checked);
            if let Some(t) = &report.tightest {
                println!("tightest: X = {{{}}} lhs {} rhs {}", ids(&t.x), fraction(t.lhs), fraction(t.rhs));
            }
            if let Some(c) = &report.witness {
                println!("X: {}", ids(&c.x));
                println!("lhs: {}", fraction(c.lhs));
                println!("rhs: {}", fraction(c.rhs));
            }
            if report.verdict == Verdict::Violated {
                return Ok(ExitCode::from(EXIT_CERTIFICATE));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
