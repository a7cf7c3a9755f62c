//! Batch entry points binding the library into reproducible pipelines:
//! `generate` (joint sampling to files), `verify` (oracle report),
//! `analyze` (clique-degree expectation tables and mixing bounds) and
//! `infer` (posterior summaries).
//!
//! Exit codes: 0 ok, 1 property violation, 2 usage or parse failure.

mod manifest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use chordal_forge::analytics;
use chordal_forge::inference;
use chordal_forge::io;
use chordal_forge::model::{BipartiteState, LatentTree, NodeId, TruncationWindow};
use chordal_forge::oracle;
use chordal_forge::projection;
use chordal_forge::sampler::{
    self, joint_sample, RepairMode, RootMode, SamplerConfig, TreeSpec, TreeUpdate,
};
use chordal_forge::stats;
use chordal_forge::treeops::{verify_junction_property, Strictness};
use chordal_forge::Kernel64;

use manifest::RunManifest;

#[derive(Parser)]
#[command(
    name = "chordal-forge",
    version,
    about = "decomposable random graph toolkit"
)]
struct Cli {
    /// Cap on worker threads (env: CHORDAL_FORGE_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a decomposable graph and write points/tree/bipartite/graph files
    Generate(GenerateArgs),
    /// Check chordality, junction property and A0 emptiness of saved files
    Verify(VerifyArgs),
    /// Closed-form / series / Monte-Carlo clique-degree table and mixing bounds
    Analyze(AnalyzeArgs),
    /// Posterior summaries for the Beta single-marginal or Cox models
    Infer(InferArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreeUpdateArg {
    Uniform,
    Weighted,
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepairArg {
    EdgeGreedy,
    Identity,
    None,
}

#[derive(Args)]
struct GenerateArgs {
    /// Kernel spec: const:p=<f> | exp:lambda=<f> | beta:a1=<f>,a2=<f> | cox
    #[arg(long)]
    kernel: String,
    /// Tree spec: dregular:d=<n>,L=<n> | path:L=<n> | recursive:n=<n> | explicit:<file>
    #[arg(long)]
    tree: String,
    /// Clique-node location bound r'
    #[arg(long, default_value_t = 10.0)]
    rprime: f64,
    /// Clique-node weight bound c'
    #[arg(long, default_value_t = 1.0)]
    cprime: f64,
    /// Node location bound r
    #[arg(long, default_value_t = 10.0)]
    r: f64,
    /// Node weight bound c
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Markov chain length
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    /// Use the strict (maximality-preserving) move sets
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = TreeUpdateArg::Uniform)]
    tree_update: TreeUpdateArg,
    #[arg(long, default_value_t = 100)]
    tree_update_period: u64,
    #[arg(long, value_enum, default_value_t = RepairArg::EdgeGreedy)]
    repair: RepairArg,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file (`G <i> <j>` / `I <i>` lines)
    #[arg(long)]
    graph: PathBuf,
    /// Optional bipartite file to audit the junction property and A0 set
    #[arg(long, requires = "tree")]
    bipartite: Option<PathBuf>,
    /// Latent tree file for the bipartite audit
    #[arg(long, requires = "bipartite")]
    tree: Option<PathBuf>,
    /// Optional output directory for report.txt + manifest.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Tree spec: dregular:d=<n>,L=<n> | path:L=<n>
    #[arg(long)]
    tree: String,
    /// Comma-separated zeta values (default 0.1..0.9)
    #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    zeta: String,
    /// Monte-Carlo replicates per row (0 skips the MC columns)
    #[arg(long, default_value_t = 10_000)]
    mc_reps: u64,
    /// Kernel used for the mixing-time bound
    #[arg(long, default_value = "exp:lambda=1")]
    kernel: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional output directory for analyze.tsv + manifest.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Beta,
    Cox,
}

#[derive(Args)]
struct InferArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Bipartite file; requires --tree with the observed junction tree
    /// over its clique-nodes
    #[arg(long, requires = "tree", conflicts_with = "graph")]
    bipartite: Option<PathBuf>,
    /// Observed junction tree over the bipartite clique-nodes
    #[arg(long, requires = "bipartite")]
    tree: Option<PathBuf>,
    /// Observed decomposable graph; its biadjacency and junction tree are
    /// derived from the maximal cliques
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Beta prior shape alpha (beta model)
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Gamma prior shape (cox model)
    #[arg(long, default_value_t = 1.0)]
    prior_shape: f64,
    /// Gamma prior rate (cox model)
    #[arg(long, default_value_t = 1.0)]
    prior_rate: f64,
    /// Gibbs iterations (cox model)
    #[arg(long, default_value_t = 2000)]
    iters: u64,
    /// Burn-in sweeps discarded from the draws (cox model)
    #[arg(long, default_value_t = 500)]
    burnin: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    strict: bool,
    /// Repair-node list (`<nodeId> <cliqueId>` lines, as written by
    /// generate); those columns carry no observation weight and are
    /// dropped before inference
    #[arg(long)]
    exclude_nodes: Option<PathBuf>,
    /// Optional output directory for posterior.tsv + manifest.json
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("CHORDAL_FORGE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Infer(args) => cmd_infer(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_tree_spec(spec: &str) -> Result<TreeSpec> {
    if let Some(path) = spec.strip_prefix("explicit:") {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return Ok(TreeSpec::Explicit(io::read_tree(&text)?));
    }
    Ok(TreeSpec::parse(spec)?)
}

fn strictness(strict: bool) -> Strictness {
    if strict {
        Strictness::Strict
    } else {
        Strictness::Relaxed
    }
}

fn write_output(dir: &Path, name: &str, text: &str, m: &mut RunManifest) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    m.record_output(name, &path)
}

/// Dense 0/1 adjacency dump over the active nodes, plot-ready.
fn adjacency_tsv(g: &chordal_forge::DecomposableGraph) -> String {
    let vertices: Vec<NodeId> = g.vertices().collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# node\t{}",
        vertices
            .iter()
            .map(|v| v.0.to_string())
            .collect::<Vec<_>>()
            .join("\t")
    );
    for &a in &vertices {
        let row: Vec<String> = vertices
            .iter()
            .map(|&b| {
                if g.has_edge(a, b) {
                    "1".to_string()
                } else {
                    "0".to_string()
                }
            })
            .collect();
        let _ = writeln!(out, "{}\t{}", a.0, row.join("\t"));
    }
    out
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let kernel = Kernel64::parse(&args.kernel)?;
    let tree_spec = parse_tree_spec(&args.tree)?;
    let window = TruncationWindow::new(args.rprime, args.cprime, args.r, args.c)?;
    let config = SamplerConfig {
        window,
        kernel,
        tree: tree_spec,
        strictness: strictness(args.strict),
        seed: args.seed,
        steps: args.steps,
        tree_update: match args.tree_update {
            TreeUpdateArg::Uniform => TreeUpdate::Uniform,
            TreeUpdateArg::Weighted => TreeUpdate::DegreeWeighted,
            TreeUpdateArg::None => TreeUpdate::None,
        },
        tree_update_period: args.tree_update_period,
        repair: match args.repair {
            RepairArg::EdgeGreedy => RepairMode::EdgeGreedy,
            RepairArg::Identity => RepairMode::Identity,
            RepairArg::None => RepairMode::None,
        },
    };
    let out = joint_sample(&config)?;

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let mut m = RunManifest::new("generate", args.seed);
    m.set("kernel", &args.kernel);
    m.set("tree", &args.tree);
    m.set("rprime", args.rprime);
    m.set("cprime", args.cprime);
    m.set("r", args.r);
    m.set("c", args.c);
    m.set("steps", args.steps);
    m.set("strict", args.strict);
    m.set("tree_update", format!("{:?}", config.tree_update));
    m.set("tree_update_period", args.tree_update_period);
    m.set("repair", format!("{:?}", config.repair));

    write_output(
        &args.out,
        "points.txt",
        &io::write_points(&out.points),
        &mut m,
    )?;
    write_output(
        &args.out,
        "tree.txt",
        &io::write_tree(&out.chain.tree),
        &mut m,
    )?;
    write_output(
        &args.out,
        "bipartite.txt",
        &io::write_bipartite(&out.repaired),
        &mut m,
    )?;
    write_output(
        &args.out,
        "graph.txt",
        &io::write_graph(&out.report.graph),
        &mut m,
    )?;
    write_output(
        &args.out,
        "adjacency.tsv",
        &adjacency_tsv(&out.report.graph),
        &mut m,
    )?;
    let mut repair = String::new();
    for &(node, clique) in &out.report.added_nodes {
        let _ = writeln!(repair, "{} {}", node.0, clique.0);
    }
    write_output(&args.out, "repair_nodes.txt", &repair, &mut m)?;
    m.write(&args.out)?;

    println!(
        "generated: {} nodes, {} edges, {} active cliques, {} repair nodes (a0 pre-repair: {})",
        out.report.graph.n_vertices(),
        out.report.graph.n_edges(),
        out.repaired.vertex_partition().1.len(),
        out.report.added_nodes.len(),
        out.report.a0_set.len(),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.graph)
        .with_context(|| format!("reading {}", args.graph.display()))?;
    let graph = io::read_graph(&text)?;

    let mut report = String::new();
    let mut violation = false;

    let (chordal, peo) = oracle::is_chordal_mcs(&graph);
    let _ = writeln!(report, "chordal: {}", if chordal { "yes" } else { "no" });
    if !chordal {
        violation = true;
    }
    let cliques = oracle::maximal_cliques(&graph);
    let _ = writeln!(report, "maximal cliques: {}", cliques.len());
    for cl in &cliques {
        let ids: Vec<String> = cl.iter().map(|v| v.0.to_string()).collect();
        let _ = writeln!(report, "  clique {{{}}}", ids.join(" "));
    }
    if chordal {
        let jt = oracle::build_junction_tree(&graph)?;
        let _ = writeln!(report, "separators: {}", jt.separators.len());
        for sep in &jt.separators {
            let ids: Vec<String> = sep.iter().map(|v| v.0.to_string()).collect();
            let _ = writeln!(report, "  separator {{{}}}", ids.join(" "));
        }
        if let Some(root) = jt.tree.vertices().next() {
            let seq = oracle::dfs_preorder_sequence(&jt, root)?;
            debug_assert!(oracle::verify_rip(&seq));
            let pos: Vec<String> = seq
                .iter()
                .map(|cl| {
                    let ids: Vec<String> = cl.iter().map(|v| v.0.to_string()).collect();
                    format!("{{{}}}", ids.join(" "))
                })
                .collect();
            let _ = writeln!(report, "pos: {}", pos.join(" "));
        }
        if let Some(o) = &peo {
            let ids: Vec<String> = o.ordering.iter().map(|v| v.0.to_string()).collect();
            let _ = writeln!(report, "peo: {}", ids.join(" "));
        }
    }

    let mut m = RunManifest::new("verify", 0);
    m.record_input(&args.graph)?;
    if let (Some(bip_path), Some(tree_path)) = (&args.bipartite, &args.tree) {
        let z = io::read_bipartite(
            &std::fs::read_to_string(bip_path)
                .with_context(|| format!("reading {}", bip_path.display()))?,
        )?;
        let tree = io::read_tree(
            &std::fs::read_to_string(tree_path)
                .with_context(|| format!("reading {}", tree_path.display()))?,
        )?;
        m.record_input(bip_path)?;
        m.record_input(tree_path)?;
        match verify_junction_property(&z, &tree)? {
            None => {
                let _ = writeln!(report, "junction property: holds");
            }
            Some(w) => {
                let _ = writeln!(report, "junction property: violated at node {}", w.node.0);
                violation = true;
            }
        }
        let a0 = projection::a0_violations(&z);
        if a0.is_empty() {
            let _ = writeln!(report, "a0: empty (all active cliques maximal)");
        } else {
            let ids: Vec<String> = a0.iter().map(|k| k.0.to_string()).collect();
            let _ = writeln!(
                report,
                "a0: non-maximal active cliques {{{}}}",
                ids.join(" ")
            );
            violation = true;
        }
        // cross-check: projection of the bipartite state matches the graph
        let projected = projection::project(&z);
        if projected != graph {
            let _ = writeln!(report, "projection: does NOT match graph file");
            violation = true;
        } else {
            let _ = writeln!(report, "projection: matches graph file");
        }
    }

    print!("{report}");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        write_output(dir, "report.txt", &report, &mut m)?;
        m.write(dir)?;
    }
    Ok(if violation {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn parse_zetas(spec: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let v: f64 = part
            .trim()
            .parse()
            .with_context(|| format!("bad zeta {part:?}"))?;
        if v < 0.0 {
            bail!("zeta must be nonnegative, got {v}");
        }
        out.push(v);
    }
    if out.is_empty() {
        bail!("empty zeta list");
    }
    Ok(out)
}

enum AnalyzedTree {
    DRegular { d: u32, levels: u32 },
    Path { levels: u32 },
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let spec = TreeSpec::parse(&args.tree)?;
    let analyzed = match spec {
        TreeSpec::DRegular { d, levels } => AnalyzedTree::DRegular { d, levels },
        TreeSpec::Path { levels } => AnalyzedTree::Path { levels },
        other => bail!("analyze needs a dregular or path tree, got {other}"),
    };
    let zetas = parse_zetas(&args.zeta)?;
    let kernel = Kernel64::parse(&args.kernel)?;

    let (tree, level_of, levels) = match analyzed {
        AnalyzedTree::DRegular { d, levels } => {
            let (t, l) = analytics::dregular_tree(d, levels)?;
            (t, l, levels)
        }
        AnalyzedTree::Path { levels } => {
            let (t, l) = analytics::path_tree(levels);
            (t, l, levels)
        }
    };

    let mut tsv = String::new();
    let _ = writeln!(tsv, "# tree {}", args.tree);
    match sampler::mixing_lower_bound(&tree, &kernel, RootMode::Worst) {
        Ok(v) => {
            let _ = writeln!(tsv, "# mixing_lower_bound_worst\t{v:.6}");
            let c = sampler::mixing_lower_bound(&tree, &kernel, RootMode::Center)?;
            let _ = writeln!(tsv, "# mixing_lower_bound_center\t{c:.6}");
        }
        Err(e) => {
            let _ = writeln!(tsv, "# mixing_lower_bound: unavailable ({e})");
        }
    }
    if let Some(center) = tree.center() {
        let lazy = analytics::lazy_commute_time(&tree, center, 0.5)?;
        let _ = writeln!(tsv, "# lazy_commute_time_center\t{lazy:.6}");
    }
    let _ = writeln!(tsv, "zeta\tlevel\tclosed_form\tseries\tmc_mean\tmc_stderr");

    for &zeta in &zetas {
        for level in 0..=levels {
            let closed = match analyzed {
                AnalyzedTree::DRegular { d, levels } => {
                    analytics::expected_cd_dregular_level(d, levels, level, zeta)?
                }
                AnalyzedTree::Path { levels } => {
                    analytics::expected_cd_path(levels, Some(level), zeta)?
                }
            };
            let series = match analyzed {
                AnalyzedTree::DRegular { d, levels } => analytics::expected_cliquedegree_series(
                    &analytics::level_gamma_profile(d, levels, level)?,
                    zeta,
                ),
                AnalyzedTree::Path { levels: _ } => {
                    // the path closed form follows the worked examples, not
                    // the BFS profile; report the profile series alongside
                    let v = *level_of.iter().find(|(_, &l)| l == level).unwrap().0;
                    analytics::expected_cliquedegree_series(
                        &analytics::gamma_profile(&tree, v)?,
                        zeta,
                    )
                }
            };
            let (mc_mean, mc_stderr) = if args.mc_reps > 0 && zeta <= 1.0 {
                let start = *level_of.iter().find(|(_, &l)| l == level).unwrap().0;
                let (mean, se) =
                    analytics::mc_cliquedegree(&tree, zeta, start, args.mc_reps, args.seed)?;
                (format!("{mean:.6}"), format!("{se:.6}"))
            } else {
                ("na".into(), "na".into())
            };
            let _ = writeln!(
                tsv,
                "{zeta}\t{level}\t{closed:.12}\t{series:.12}\t{mc_mean}\t{mc_stderr}"
            );
        }
        let any = match analyzed {
            AnalyzedTree::DRegular { d, levels } => {
                analytics::expected_cd_dregular_any(d, levels, zeta)?
            }
            AnalyzedTree::Path { levels } => analytics::expected_cd_path(levels, None, zeta)?,
        };
        let _ = writeln!(tsv, "{zeta}\tany\t{any:.12}\t{any:.12}\tna\tna");
        if zeta > 1.0 {
            eprintln!("note: zeta {zeta} > 1 is algebraic only, not a probability");
        }
    }

    print!("{tsv}");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        let mut m = RunManifest::new("analyze", args.seed);
        m.set("tree", &args.tree);
        m.set("zeta", &args.zeta);
        m.set("mc_reps", args.mc_reps);
        m.set("kernel", &args.kernel);
        write_output(dir, "analyze.tsv", &tsv, &mut m)?;
        m.write(dir)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn read_excluded_nodes(path: &Path) -> Result<Vec<NodeId>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let id = line
            .split_whitespace()
            .next()
            .and_then(|f| f.parse::<u32>().ok())
            .with_context(|| format!("bad repair-node line {line:?}"))?;
        out.push(NodeId(id));
    }
    Ok(out)
}

/// Biadjacency of an observed graph: one row per maximal clique, plus the
/// junction tree built by the oracle.
fn observed_state(graph: &chordal_forge::DecomposableGraph) -> Result<(BipartiteState, LatentTree)> {
    let jt = oracle::build_junction_tree(graph)?;
    let mut z = BipartiteState::empty(jt.tree.vertices(), graph.vertices());
    for (ix, clique) in jt.cliques.iter().enumerate() {
        for &i in clique {
            z.connect(chordal_forge::CliqueId(ix as u32), i)?;
        }
    }
    Ok((z, jt.tree))
}

fn cmd_infer(args: InferArgs) -> Result<ExitCode> {
    let (mut z, tree): (BipartiteState, LatentTree) = match (&args.bipartite, &args.tree, &args.graph) {
        (Some(bip), Some(tree), None) => {
            let z = io::read_bipartite(
                &std::fs::read_to_string(bip)
                    .with_context(|| format!("reading {}", bip.display()))?,
            )?;
            let t = io::read_tree(
                &std::fs::read_to_string(tree)
                    .with_context(|| format!("reading {}", tree.display()))?,
            )?;
            (z, t)
        }
        (None, None, Some(graph)) => {
            let g = io::read_graph(
                &std::fs::read_to_string(graph)
                    .with_context(|| format!("reading {}", graph.display()))?,
            )?;
            observed_state(&g)?
        }
        _ => bail!("infer needs either --bipartite with --tree, or --graph"),
    };
    let mut excluded: std::collections::BTreeSet<NodeId> = Default::default();
    if let Some(path) = &args.exclude_nodes {
        for i in read_excluded_nodes(path)? {
            for k in z.memberships(i).clone() {
                z.disconnect(k, i)?;
            }
            excluded.insert(i);
        }
    }
    if let Some(w) = verify_junction_property(&z, &tree)? {
        eprintln!("junction property violated at node {}", w.node.0);
        return Ok(ExitCode::from(1));
    }
    let strict = strictness(args.strict);

    let mut tsv = String::from("id\tkind\tmean\tsd\tq05\tq95\n");
    match args.model {
        ModelArg::Beta => {
            let posteriors = inference::beta_posterior(&z, &tree, args.alpha, strict)?;
            for p in posteriors
                .into_iter()
                .filter(|p| !excluded.contains(&p.node))
            {
                let dist = statrs::distribution::Beta::new(p.shape1, p.shape2)
                    .map_err(|e| anyhow::anyhow!("beta posterior: {e}"))?;
                use statrs::distribution::ContinuousCDF;
                let _ = writeln!(
                    tsv,
                    "{}\tnode\t{:.9}\t{:.9}\t{:.9}\t{:.9}",
                    p.node.0,
                    p.mean(),
                    p.variance().sqrt(),
                    dist.inverse_cdf(0.05),
                    dist.inverse_cdf(0.95),
                );
            }
        }
        ModelArg::Cox => {
            let prior = inference::GammaPrior::new(args.prior_shape, args.prior_rate)?;
            let mut rng = sampler::rng_for(args.seed, 0);
            let posterior = inference::cox_gibbs(
                &z,
                &tree,
                prior,
                prior,
                args.iters,
                args.burnin,
                strict,
                &mut rng,
            )?;
            let mut emit = |id: u32, kind: &str, draws: &[f64]| {
                let (mean, sd) = stats::mean_sd(draws);
                let _ = writeln!(
                    tsv,
                    "{id}\t{kind}\t{mean:.9}\t{sd:.9}\t{:.9}\t{:.9}",
                    stats::quantile(draws, 0.05),
                    stats::quantile(draws, 0.95),
                );
            };
            for (k, draws) in &posterior.clique_draws {
                emit(k.0, "clique", draws);
            }
            for (i, draws) in posterior
                .node_draws
                .iter()
                .filter(|(i, _)| !excluded.contains(i))
            {
                emit(i.0, "node", draws);
            }
        }
    }

    print!("{tsv}");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        let mut m = RunManifest::new("infer", args.seed);
        m.set(
            "model",
            match args.model {
                ModelArg::Beta => "beta",
                ModelArg::Cox => "cox",
            },
        );
        m.set("alpha", args.alpha);
        m.set("prior_shape", args.prior_shape);
        m.set("prior_rate", args.prior_rate);
        m.set("iters", args.iters);
        m.set("burnin", args.burnin);
        m.set("strict", args.strict);
        for path in [&args.bipartite, &args.tree, &args.graph, &args.exclude_nodes]
            .into_iter()
            .flatten()
        {
            m.record_input(path)?;
        }
        write_output(dir, "posterior.tsv", &tsv, &mut m)?;
        m.write(dir)?;
    }
    Ok(ExitCode::SUCCESS)
}
