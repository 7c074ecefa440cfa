//! `eppa`: build and check EPPA witnesses for n-partite tournaments.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use eppa_core::format::{parse_graph, witness_to_dot, GraphDocument, Metadata, DEFAULT_DOT_BUDGET};
use eppa_core::verify::{
    run_campaign, verify_automorphism, verify_extends, CampaignConfig, InstanceSource, PhiSelection,
    VerificationReport, DEFAULT_ORACLE_BUDGET,
};
use eppa_core::{
    build_witness_with, extend_automorphism, is_partial_automorphism, normalize, semigeneric_violation,
    witness_size, PartialMap, PartiteDigraph, Permutation, Tournament, Vertex, Witness, WitnessOptions,
};
use eppa_core::witness::DEFAULT_VERTEX_BUDGET;

#[derive(Parser)]
#[command(name = "eppa", version, about = "EPPA witnesses for n-partite tournaments")]
struct Cli {
    /// Largest witness (in vertices) that may be built.
    #[arg(long, global = true, env = "EPPA_VERTEX_BUDGET", default_value_t = DEFAULT_VERTEX_BUDGET)]
    vertex_budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a tournament, build its witness and report the sizes.
    Build {
        /// Graph document, or `-` for stdin.
        graph: PathBuf,
        /// Write the witness here (graph document, or DOT with --dot).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the witness as DOT; to stdout unless --out is given.
        #[arg(long)]
        dot: bool,
    },
    /// Extend a partial automorphism of the tournament to the witness.
    Extend {
        graph: PathBuf,
        /// Pairs of tournament vertices, e.g. `1:2,2:1`.
        partial_map: String,
    },
    /// Check every (or a sample of) partial automorphism of one tournament.
    Verify {
        graph: PathBuf,
        #[command(flatten)]
        check: CheckArgs,
        /// Check this many random partial automorphisms instead of all.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check many tournaments.
    Campaign {
        /// Number of parts.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Largest normalized order.
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        /// Every tournament with k a multiple of n up to --max-k, every map.
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Random tournaments on --max-k vertices, this many maps each.
        #[arg(long)]
        sample: Option<usize>,
        /// Tournaments drawn in sample mode.
        #[arg(long, default_value_t = 10)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Report whether the tournament is semi-generic.
    Semigeneric { graph: PathBuf },
    /// Number of witness vertices for k source vertices in n parts.
    Size { k: usize, n: usize },
}

#[derive(Args)]
struct CheckArgs {
    /// Largest domain of the checked maps.
    #[arg(long)]
    max_dom: Option<usize>,
    /// Cross-check each extension with the search oracle.
    #[arg(long)]
    oracle: bool,
    /// Extra extensions per map with shuffled completions.
    #[arg(long, default_value_t = 0)]
    shuffled: usize,
    #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
    oracle_budget: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn read_graph(path: &Path) -> Result<Tournament> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Parses `1:2,3:3` (or `1->2 3->3`) into pairs.
fn parse_partial_map(text: &str) -> Result<PartialMap> {
    let mut pairs = Vec::new();
    for item in text.split([',', ' ']).map(str::trim).filter(|s| !s.is_empty()) {
        let Some((a, b)) = item.split_once("->").or_else(|| item.split_once(':')) else {
            bail!("expected `x:y`, found `{item}`");
        };
        let a: Vertex = a.trim().parse().with_context(|| format!("bad vertex in `{item}`"))?;
        let b: Vertex = b.trim().parse().with_context(|| format!("bad vertex in `{item}`"))?;
        pairs.push((a, b));
    }
    Ok(PartialMap::from_pairs(pairs)?)
}

fn witness_options(budget: u64) -> WitnessOptions {
    WitnessOptions {
        vertex_budget: budget,
        ..WitnessOptions::default()
    }
}

fn permutation_table(p: &Permutation) -> String {
    images_table(p.images())
}

fn images_table(images: &[usize]) -> String {
    images
        .iter()
        .enumerate()
        .map(|(i, y)| format!("{}->{y}", i + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn witness_document(w: &Witness) -> Result<String> {
    let part_of: Vec<usize> = w.vertices().map(|v| w.part_of(v)).collect();
    let t = Tournament::from_orientation(w.n(), part_of, |x, y| w.has_arc(x, y))?;
    let meta = Metadata {
        name: Some(format!("witness k={} n={}", w.k(), w.n())),
        ..Metadata::default()
    };
    Ok(GraphDocument::from_tournament(&t, meta).to_json())
}

fn build(graph: &Path, out: Option<&Path>, dot: bool, budget: u64) -> Result<bool> {
    let t = read_graph(graph)?;
    let norm = normalize(&t);
    let w = build_witness_with(&norm, &witness_options(budget))?;
    let sizes = format!(
        "k={} n={} m={} |V'|={}",
        norm.k(),
        norm.n(),
        norm.part_size(),
        w.order()
    );
    if !dot && out.is_none() {
        println!("{sizes}");
        return Ok(true);
    }
    let body = if dot {
        witness_to_dot(&w, DEFAULT_DOT_BUDGET)?
    } else {
        witness_document(&w)?
    };
    match out {
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            println!("{sizes}");
        }
        None => {
            eprintln!("{sizes}");
            io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(true)
}

fn extend(graph: &Path, map: &str, budget: u64) -> Result<bool> {
    let t = read_graph(graph)?;
    let phi = parse_partial_map(map)?;
    if let Some(v) = phi.iter().flat_map(|(x, y)| [x, y]).find(|&v| v == 0 || v > t.order()) {
        bail!("vertex {v} is not in the tournament (order {})", t.order());
    }
    if !is_partial_automorphism(&t, &phi) {
        bail!("{phi} is not a partial automorphism of the tournament");
    }
    let norm = normalize(&t);
    let w = build_witness_with(&norm, &witness_options(budget))?;
    let moved = phi.transport(|v| w.psi(norm.relabel(v)));
    let cert = extend_automorphism(&w, &moved)?;

    println!("phi (input labels): {phi}");
    if !norm.is_identity() {
        println!("relabeling: {}", images_table(norm.relabeling()));
    }
    println!("phi on psi(G): {{{}}}", moved
        .iter()
        .map(|(x, y)| format!("{}->{}", w.vertex_name(x), w.vertex_name(y)))
        .collect::<Vec<_>>()
        .join(", "));
    println!("iota: {}", cert.induced.parts);
    println!("iota_hat: {}", permutation_table(&cert.iota_hat));
    println!("phi_hat: {}", permutation_table(&cert.phi_hat));
    let flipped: Vec<String> = cert
        .flips
        .flipped_pairs()
        .map(|((x, y), (fx, fy))| format!("{{{x},{y}}}:{}{}", u8::from(fx), u8::from(fy)))
        .collect();
    println!("flips ({} pairs with a set bit): {}", flipped.len(), flipped.join(" "));
    println!("theta:");
    for id in w.vertices() {
        println!("  {} -> {}", w.vertex_name(id), w.vertex_name(cert.theta(id)));
    }
    let auto = verify_automorphism(&w, &cert.theta);
    let extends = verify_extends(&cert.theta, &moved);
    let verdict = |r: &std::result::Result<(), String>| match r {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("FAILED ({e})"),
    };
    let auto = auto.map_err(|e| e.to_string());
    let extends = extends.map_err(|e| e.to_string());
    println!("automorphism: {}", verdict(&auto));
    println!("extends phi: {}", verdict(&extends));
    Ok(auto.is_ok() && extends.is_ok())
}

fn campaign_config(check: &CheckArgs, budget: u64) -> CampaignConfig {
    CampaignConfig {
        oracle: check.oracle,
        shuffled_completions: check.shuffled,
        oracle_budget: check.oracle_budget,
        witness: witness_options(budget),
        ..CampaignConfig::default()
    }
}

fn report(r: &VerificationReport, json: bool) -> bool {
    if json {
        println!("{}", r.to_json());
        return r.is_success();
    }
    for d in &r.details {
        let order = d.witness_order.map_or("-".to_string(), |o| o.to_string());
        println!(
            "instance {} (k={} n={} normalized k={}): |V'|={order} tested={} passed={} failed={} oracle={}",
            d.descriptor.index, d.descriptor.k, d.descriptor.n, d.descriptor.normalized_k, d.tested, d.passed,
            d.failed, d.oracle_checked
        );
        if let Some(e) = &d.error {
            println!("  error: {e}");
        }
        if !d.embedding_verified && d.error.is_none() {
            println!("  embedding not verified");
        }
        for f in &d.failures {
            println!("  failure {:?} on {}: {}", f.check, f.phi, f.detail);
        }
    }
    println!(
        "instances={} tested={} passed={} failed={} oracle_checked={} embedding_failures={} errors={}",
        r.instances, r.tested, r.passed, r.failed, r.oracle_checked, r.embedding_failures, r.errors
    );
    r.is_success()
}

fn run(cli: Cli) -> Result<bool> {
    let budget = cli.vertex_budget;
    match cli.command {
        Command::Build { graph, out, dot } => build(&graph, out.as_deref(), dot, budget),
        Command::Extend { graph, partial_map } => extend(&graph, &partial_map, budget),
        Command::Verify {
            graph,
            check,
            sample,
            seed,
        } => {
            let t = read_graph(&graph)?;
            let max_dom = check.max_dom.unwrap_or(t.order());
            let config = CampaignConfig {
                instances: InstanceSource::Given(vec![t]),
                phis: match sample {
                    Some(count) => PhiSelection::Sampled { count, max_dom },
                    None => PhiSelection::All { max_dom },
                },
                seed,
                ..campaign_config(&check, budget)
            };
            Ok(report(&run_campaign(&config), check.json))
        }
        Command::Campaign {
            n,
            max_k,
            exhaustive: _,
            sample,
            instances,
            seed,
            jobs,
            check,
        } => {
            if n < 2 {
                bail!("need at least 2 parts, got {n}");
            }
            if max_k < n {
                bail!("--max-k {max_k} is smaller than --n {n}");
            }
            let max_dom = check.max_dom.unwrap_or(usize::MAX);
            let (source, phis) = match sample {
                Some(count) => (
                    InstanceSource::Sampled {
                        n,
                        k: max_k,
                        count: instances,
                    },
                    PhiSelection::Sampled { count, max_dom },
                ),
                None => (
                    InstanceSource::Exhaustive { n, min_k: n, max_k },
                    PhiSelection::All { max_dom },
                ),
            };
            if jobs == Some(0) {
                bail!("--jobs must be positive");
            }
            let config = CampaignConfig {
                instances: source,
                phis,
                seed,
                jobs,
                ..campaign_config(&check, budget)
            };
            Ok(report(&run_campaign(&config), check.json))
        }
        Command::Semigeneric { graph } => {
            let t = read_graph(&graph)?;
            match semigeneric_violation(&t) {
                None => println!("semi-generic: yes"),
                Some(v) => println!(
                    "semi-generic: no ({} arcs from {{{},{}}} in V{} to {{{},{}}} in V{})",
                    v.forward_arcs, v.left.0, v.left.1, v.parts.0, v.right.0, v.right.1, v.parts.1
                ),
            }
            Ok(true)
        }
        Command::Size { k, n } => {
            println!("{}", witness_size(k, n)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_map_syntax() {
        let p = parse_partial_map("1:2, 2:1").unwrap();
        assert_eq!(p, PartialMap::from_pairs([(1, 2), (2, 1)]).unwrap());
        assert_eq!(parse_partial_map("1->2 2->1").unwrap(), p);
        assert!(parse_partial_map("").unwrap().is_empty());
        assert!(parse_partial_map("1:2,1:3").is_err());
        assert!(parse_partial_map("1-2").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
