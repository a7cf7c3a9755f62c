//! Generative procedures: point sampling, tree construction and clique
//! assignment, the sequential finite-step sampler, the Markov stopped
//! process, tree-edge updates, the joint iterative scheme and the
//! mixing-time lower bound.
//!
//! Everything is deterministic given the seed. The joint scheme derives one
//! ChaCha stream per phase (points, tree, chain, repair), so the phases
//! cannot perturb each other's draws.
//!
//! Under relaxed strictness the per-node chains are independent given the
//! tree: the tree stays immutable during a Z-phase, each worker may own a
//! disjoint set of node columns, and merges are conflict-free. Strict
//! strictness couples columns through the containment tests and runs
//! single-threaded.

use rand::distributions::Uniform;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::Distribution;

use crate::analytics::gamma_profile;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, Upper};
use crate::model::{
    BipartiteState, CliqueId, LatentTree, NodeId, NodePoint, PointSet, TruncationWindow,
};
use crate::projection::{self, IdSource, ProjectionReport};
use crate::real::Real;
use crate::treeops::{self, Strictness};

/// Structural tree family. Generated families size themselves; an explicit
/// tree is used as given.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeSpec {
    DRegular { d: u32, levels: u32 },
    Path { levels: u32 },
    RandomRecursive { n: u32 },
    Explicit(LatentTree),
}

impl TreeSpec {
    pub fn dregular(d: u32, levels: u32) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParameter(format!(
                "d-regular tree needs d >= 3, got {d}"
            )));
        }
        Ok(TreeSpec::DRegular { d, levels })
    }

    /// Parses `dregular:d=<n>,L=<n>`, `path:L=<n>`, `recursive:n=<n>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("tree spec {spec:?}")))?;
        let mut kv = std::collections::BTreeMap::new();
        for pair in args.split(',') {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("tree arg {pair:?}")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("tree arg value {v:?}")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let get = |key: &str| {
            kv.get(key)
                .copied()
                .ok_or_else(|| Error::Parse(format!("tree spec {spec:?} missing {key}")))
        };
        match head {
            "dregular" => TreeSpec::dregular(get("d")?, get("L")?),
            "path" => Ok(TreeSpec::Path { levels: get("L")? }),
            "recursive" => Ok(TreeSpec::RandomRecursive { n: get("n")? }),
            other => Err(Error::Parse(format!("unknown tree family {other:?}"))),
        }
    }

    /// Vertex count of the structural tree, if fixed by the family.
    pub fn structural_size(&self) -> Option<usize> {
        match self {
            TreeSpec::DRegular { d, levels } => {
                Some(crate::analytics::dregular_node_count(*d, *levels).unwrap_or(1) as usize)
            }
            TreeSpec::Path { levels } => Some((2 * levels + 1) as usize),
            TreeSpec::RandomRecursive { n } => Some(*n as usize),
            TreeSpec::Explicit(t) => Some(t.len()),
        }
    }
}

impl std::fmt::Display for TreeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TreeSpec::DRegular { d, levels } => write!(f, "dregular:d={d},L={levels}"),
            TreeSpec::Path { levels } => write!(f, "path:L={levels}"),
            TreeSpec::RandomRecursive { n } => write!(f, "recursive:n={n}"),
            TreeSpec::Explicit(t) => write!(f, "explicit({} vertices)", t.len()),
        }
    }
}

/// Interleaved latent-tree update mode for the joint scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeUpdate {
    None,
    Uniform,
    DegreeWeighted,
}

/// Post-sampling maximality repair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairMode {
    EdgeGreedy,
    Identity,
    None,
}

#[derive(Debug, Clone)]
pub struct SamplerConfig<F: Real> {
    pub window: TruncationWindow<F>,
    pub kernel: Kernel<F>,
    pub tree: TreeSpec,
    pub strictness: Strictness,
    pub seed: u64,
    pub steps: u64,
    pub tree_update: TreeUpdate,
    pub tree_update_period: u64,
    pub repair: RepairMode,
}

/// State of the Markov stopped process; the junction property holds at
/// every step by construction of the permissible moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainState {
    pub z: BipartiteState,
    pub tree: LatentTree,
    pub step_count: u64,
}

/// Per-phase deterministic RNG stream.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn poisson_count<R: Rng>(rate: f64, rng: &mut R) -> u64 {
    if rate <= 0.0 {
        return 0;
    }
    let dist = rand_distr::Poisson::new(rate).expect("positive finite rate");
    dist.sample(rng) as u64
}

/// Samples the two truncated unit-rate Poisson processes:
/// `N_v ~ Poisson(c r)`, `N_c ~ Poisson(c' r')`, locations uniform on the
/// location range, weights uniform on `[0, c]` / `[0, c']`. Ids are
/// assigned in ascending location order.
pub fn sample_points<F: Real, R: Rng>(window: &TruncationWindow<F>, rng: &mut R) -> PointSet<F> {
    let n_c = poisson_count(window.c_prime.f64() * window.r_prime.f64(), rng);
    let n_v = poisson_count(window.c.f64() * window.r.f64(), rng);

    let clique_loc = Uniform::new_inclusive(F::zero(), window.r_prime);
    let clique_wt = Uniform::new_inclusive(F::zero(), window.c_prime);
    let mut cliques: Vec<(F, F)> = (0..n_c)
        .map(|_| (clique_loc.sample(rng), clique_wt.sample(rng)))
        .collect();
    cliques.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let node_loc = Uniform::new_inclusive(F::zero(), window.r);
    let node_wt = Uniform::new_inclusive(F::zero(), window.c);
    let mut nodes: Vec<(F, F)> = (0..n_v)
        .map(|_| (node_loc.sample(rng), node_wt.sample(rng)))
        .collect();
    nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    PointSet::new(
        cliques
            .into_iter()
            .enumerate()
            .map(|(ix, (location, weight))| crate::model::CliquePoint {
                id: CliqueId(ix as u32),
                location,
                weight,
            })
            .collect(),
        nodes
            .into_iter()
            .enumerate()
            .map(|(ix, (location, weight))| NodePoint {
                id: NodeId(ix as u32),
                location,
                weight,
            })
            .collect(),
    )
    .expect("sampled points are valid")
}

fn structural_adjacency(spec: &TreeSpec, rng: &mut impl Rng) -> Result<Vec<Vec<usize>>> {
    match spec {
        TreeSpec::DRegular { d, levels } => {
            if *d < 3 {
                return Err(Error::InvalidParameter(format!(
                    "d-regular tree needs d >= 3, got {d}"
                )));
            }
            let mut adj: Vec<Vec<usize>> = vec![vec![]];
            let mut frontier = vec![(0usize, 0u32)];
            while let Some((v, level)) = frontier.pop() {
                if level == *levels {
                    continue;
                }
                let kids = if level == 0 { *d } else { *d - 1 };
                for _ in 0..kids {
                    let w = adj.len();
                    adj.push(vec![v]);
                    adj[v].push(w);
                    frontier.push((w, level + 1));
                }
            }
            Ok(adj)
        }
        TreeSpec::Path { levels } => {
            let n = (2 * levels + 1) as usize;
            let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
            for v in 1..n {
                adj[v].push(v - 1);
                adj[v - 1].push(v);
            }
            Ok(adj)
        }
        TreeSpec::RandomRecursive { n } => {
            let n = *n as usize;
            let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
            for v in 1..n {
                let target = rng.gen_range(0..v);
                adj[v].push(target);
                adj[target].push(v);
            }
            Ok(adj)
        }
        TreeSpec::Explicit(_) => unreachable!("explicit trees skip structural construction"),
    }
}

/// Builds the latent tree for `n_cliques` clique points (`None` keeps the
/// full structural size). When fewer clique points than structural
/// vertices exist, a connected subtree is selected by random-walk
/// assignment: start from a random root and repeatedly absorb a uniform
/// neighbour of the assigned set, mapping clique ids in discovery order.
pub fn build_tree<R: Rng>(
    spec: &TreeSpec,
    n_cliques: Option<usize>,
    rng: &mut R,
) -> Result<LatentTree> {
    if let TreeSpec::Explicit(t) = spec {
        if let Some(n) = n_cliques {
            if n < t.len() {
                return Err(Error::InvalidParameter(format!(
                    "explicit tree has {} vertices but only {n} clique points exist",
                    t.len()
                )));
            }
        }
        return Ok(t.clone());
    }
    let adj = structural_adjacency(spec, rng)?;
    let size = adj.len();
    let target = n_cliques.unwrap_or(size).min(size);
    if target == 0 {
        return Ok(LatentTree::empty());
    }

    // Random-walk assignment of clique identities onto the structure.
    let root = rng.gen_range(0..size);
    let mut assigned: Vec<Option<CliqueId>> = vec![None; size];
    assigned[root] = Some(CliqueId(0));
    let mut members = vec![root];
    let mut edges: Vec<(CliqueId, CliqueId)> = Vec::with_capacity(target - 1);
    while members.len() < target {
        let mut frontier: Vec<(usize, usize)> = Vec::new(); // (candidate, attach point)
        for &v in &members {
            for &w in &adj[v] {
                if assigned[w].is_none() {
                    frontier.push((w, v));
                }
            }
        }
        frontier.sort_unstable();
        frontier.dedup_by_key(|e| e.0);
        let (next, attach) = frontier[rng.gen_range(0..frontier.len())];
        let id = CliqueId(members.len() as u32);
        assigned[next] = Some(id);
        edges.push((assigned[attach].unwrap(), id));
        members.push(next);
    }
    LatentTree::new((0..target as u32).map(CliqueId), edges)
}

/// Probability that a node with weight `vartheta` is active inside the
/// `c'`-truncation: `W1(c', v) / W1(v)`. A kernel whose full marginal
/// diverges has no finite normalization and is a domain error here.
pub fn node_activity_probability<F: Real>(
    kernel: &Kernel<F>,
    c_prime: F,
    vartheta: F,
) -> Result<F> {
    let truncated = kernel.marginal(vartheta, Upper::Finite(c_prime))?;
    let full = kernel.marginal(vartheta, Upper::Infinite)?;
    if full <= F::zero() {
        return Ok(F::zero());
    }
    Ok((truncated / full).max(F::zero()).min(F::one()))
}

/// Bookkeeping for the sequential sampler.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SequentialStats {
    /// Number of Bernoulli ratios `W / W1(c', v)` that exceeded 1 and were
    /// clamped.
    pub clamp_events: u64,
}

/// Sequential finite-step sampler: per active node, a first clique drawn
/// proportionally to `W`, then uniform attempts over the unattempted
/// neighbour set with success probability `min(1, W / W1(c', v))`. Each
/// candidate is attempted at most once per node, so the loop is finite and
/// the junction property holds by construction.
pub fn sequential_sample<F: Real, R: Rng>(
    points: &PointSet<F>,
    tree: &LatentTree,
    kernel: &Kernel<F>,
    window: &TruncationWindow<F>,
    strictness: Strictness,
    rng: &mut R,
) -> Result<(BipartiteState, SequentialStats)> {
    let cliques: Vec<CliqueId> = tree.vertices().collect();
    let mut z = BipartiteState::empty(
        cliques.iter().copied(),
        points.node_points().iter().map(|p| p.id),
    );
    let mut stats = SequentialStats::default();
    if cliques.is_empty() {
        return Ok((z, stats));
    }
    for point in points.node_points() {
        let i = point.id;
        let vartheta = point.weight;
        let truncated = kernel.marginal(vartheta, Upper::Finite(window.c_prime))?;
        let activity = match kernel.marginal(vartheta, Upper::Infinite) {
            Ok(full) if full > F::zero() => (truncated / full).max(F::zero()).min(F::one()),
            Ok(_) => F::zero(),
            // Divergent normalization: the node connects somewhere almost
            // surely, so it is active whenever the window carries mass.
            Err(Error::Divergent(_)) => {
                if truncated > F::zero() {
                    F::one()
                } else {
                    F::zero()
                }
            }
            Err(e) => return Err(e),
        };
        if !rng.gen_bool(activity.f64().clamp(0.0, 1.0)) {
            continue;
        }

        // First edge: proportional to W over the clique-nodes.
        let weights: Vec<F> = cliques
            .iter()
            .map(|&k| kernel.evaluate(points.clique_weight(k)?, vartheta))
            .collect::<Result<_>>()?;
        let total: F = weights.iter().copied().sum();
        if !(total > F::zero()) {
            continue; // degenerate normalization: empty column
        }
        let mut u = rng.gen_range(F::zero()..total);
        let mut first = *cliques.last().unwrap();
        for (&k, &w) in cliques.iter().zip(&weights) {
            if u < w {
                first = k;
                break;
            }
            u = u - w;
        }
        z.connect(first, i)?;

        // Sequential expansion over unattempted neighbours.
        let mut attempted: std::collections::BTreeSet<CliqueId> = [first].into_iter().collect();
        loop {
            let sets = treeops::move_sets(&z, tree, i, strictness)?;
            let candidates: Vec<CliqueId> = sets
                .neighbour
                .iter()
                .copied()
                .filter(|k| !attempted.contains(k))
                .collect();
            if candidates.is_empty() {
                break;
            }
            let pick = candidates[rng.gen_range(0..candidates.len())];
            attempted.insert(pick);
            let w = kernel.evaluate(points.clique_weight(pick)?, vartheta)?;
            let mut ratio = if truncated > F::zero() {
                w / truncated
            } else {
                F::zero()
            };
            if ratio > F::one() {
                stats.clamp_events += 1;
                ratio = F::one();
            }
            if rng.gen_bool(ratio.f64().clamp(0.0, 1.0)) {
                z.connect(pick, i)?;
            }
        }
    }
    Ok((z, stats))
}

/// Whether clique `k` is a permitted move target for node `i`: in the
/// boundary or neighbour set of the chosen strictness, or any clique at
/// all when the node's induced subtree is empty.
fn is_permitted(
    z: &BipartiteState,
    tree: &LatentTree,
    k: CliqueId,
    i: NodeId,
    strictness: Strictness,
) -> Result<bool> {
    if z.memberships(i).is_empty() {
        return Ok(true);
    }
    let sets = treeops::move_sets(z, tree, i, strictness)?;
    Ok(sets.boundary.contains(&k) || sets.neighbour.contains(&k))
}

/// Transition probability `P(z_ki = 1 | state)` in the two-case form:
/// `W` on permitted pairs, the current entry otherwise.
pub fn update_probability_two_case<F: Real>(
    z: &BipartiteState,
    tree: &LatentTree,
    points: &PointSet<F>,
    kernel: &Kernel<F>,
    k: CliqueId,
    i: NodeId,
    strictness: Strictness,
) -> Result<F> {
    let sets = treeops::move_sets(z, tree, i, strictness)?;
    if sets.boundary.contains(&k) || sets.neighbour.contains(&k) {
        kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?)
    } else if z.has_edge(k, i) {
        Ok(F::one())
    } else {
        Ok(F::zero())
    }
}

/// The same transition probability spelled as the four-case table over
/// (current entry, membership of the boundary / neighbour sets).
pub fn update_probability_four_case<F: Real>(
    z: &BipartiteState,
    tree: &LatentTree,
    points: &PointSet<F>,
    kernel: &Kernel<F>,
    k: CliqueId,
    i: NodeId,
    strictness: Strictness,
) -> Result<F> {
    let sets = treeops::move_sets(z, tree, i, strictness)?;
    let w = || kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?);
    match (
        z.has_edge(k, i),
        sets.boundary.contains(&k),
        sets.neighbour.contains(&k),
    ) {
        (false, _, false) => Ok(F::zero()),
        (true, false, _) => Ok(F::one()),
        (true, true, _) => w(),
        (false, _, true) => w(),
    }
}

fn markov_step<F: Real, R: Rng>(
    state: &mut ChainState,
    points: &PointSet<F>,
    kernel: &Kernel<F>,
    strictness: Strictness,
    cliques: &[CliqueId],
    nodes: &[NodeId],
    rng: &mut R,
) -> Result<()> {
    let k = cliques[rng.gen_range(0..cliques.len())];
    let i = nodes[rng.gen_range(0..nodes.len())];
    if is_permitted(&state.z, &state.tree, k, i, strictness)? {
        let w = kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?)?;
        let bit = rng.gen_bool(w.f64().clamp(0.0, 1.0));
        state.z.set_edge(k, i, bit);
    }
    Ok(())
}

/// One latent-tree edge update: a uniform edge is severed at a uniformly
/// chosen side and reconnected among the rewire candidates, uniformly or
/// weighted by bipartite degree. The identity rewire keeps the move total.
pub fn tree_edge_update<R: Rng>(
    z: &BipartiteState,
    tree: &LatentTree,
    mode: TreeUpdate,
    rng: &mut R,
) -> Result<LatentTree> {
    if mode == TreeUpdate::None {
        return Ok(tree.clone());
    }
    let edges = tree.edges();
    if edges.is_empty() {
        return Ok(tree.clone());
    }
    let (a, b) = edges[rng.gen_range(0..edges.len())];
    let (k, s) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
    let candidates: Vec<CliqueId> = treeops::rewire_candidates(z, tree, (k, s))?
        .into_iter()
        .collect();
    let m = match mode {
        TreeUpdate::Uniform => candidates[rng.gen_range(0..candidates.len())],
        TreeUpdate::DegreeWeighted => {
            let weights: Vec<u64> = candidates
                .iter()
                .map(|&c| z.members(c).len() as u64)
                .collect();
            let total: u64 = weights.iter().sum();
            if total == 0 {
                return Ok(tree.clone());
            }
            let mut u = rng.gen_range(0..total);
            let mut choice = *candidates.last().unwrap();
            for (&c, &w) in candidates.iter().zip(&weights) {
                if u < w {
                    choice = c;
                    break;
                }
                u -= w;
            }
            choice
        }
        TreeUpdate::None => unreachable!(),
    };
    tree.rewired(k, s, m)
}

/// Runs the Markov stopped process for `config.steps` steps, interleaving
/// a tree-edge update every `config.tree_update_period` steps when
/// configured. Non-permitted pairs are no-ops, so the junction property is
/// maintained at every step.
pub fn markov_run<F: Real, R: Rng>(
    mut state: ChainState,
    points: &PointSet<F>,
    config: &SamplerConfig<F>,
    rng: &mut R,
) -> Result<ChainState> {
    let cliques: Vec<CliqueId> = state.tree.vertices().collect();
    let nodes: Vec<NodeId> = state.z.nodes().collect();
    if cliques.is_empty() || nodes.is_empty() {
        return Ok(state);
    }
    for step in 1..=config.steps {
        markov_step(
            &mut state,
            points,
            &config.kernel,
            config.strictness,
            &cliques,
            &nodes,
            rng,
        )?;
        state.step_count += 1;
        if config.tree_update != TreeUpdate::None
            && config.tree_update_period > 0
            && step % config.tree_update_period == 0
        {
            state.tree = tree_edge_update(&state.z, &state.tree, config.tree_update, rng)?;
        }
    }
    Ok(state)
}

/// A fully realized joint sample.
#[derive(Debug, Clone)]
pub struct JointOutput<F> {
    /// All points, including repair nodes placed just past `r`.
    pub points: PointSet<F>,
    /// Final chain state before repair.
    pub chain: ChainState,
    /// Bipartite state after the configured repair.
    pub repaired: BipartiteState,
    pub report: ProjectionReport,
}

/// The iterative joint scheme: sample points, build and assign the tree,
/// run the Markov process with interleaved tree updates, then repair and
/// project. Deterministic given `config.seed`.
pub fn joint_sample<F: Real>(config: &SamplerConfig<F>) -> Result<JointOutput<F>> {
    let mut points = sample_points(&config.window, &mut rng_for(config.seed, 0));
    let tree = build_tree(
        &config.tree,
        Some(points.clique_points().len()),
        &mut rng_for(config.seed, 1),
    )?;
    let z = BipartiteState::empty(tree.vertices(), points.node_points().iter().map(|p| p.id));
    let state = ChainState {
        z,
        tree,
        step_count: 0,
    };
    let state = markov_run(state, &points, config, &mut rng_for(config.seed, 2))?;

    let mut repair_rng = rng_for(config.seed, 3);
    let mut ids = IdSource::after(&state.z);
    let (repaired, report) = match config.repair {
        RepairMode::EdgeGreedy => {
            projection::edge_greedy_complete(&state.z, &state.tree, &mut ids)?
        }
        RepairMode::Identity => {
            let a0 = projection::a0_violations(&state.z);
            let augmented = projection::augment_identity(&state.z, &mut ids)?;
            let added: Vec<(NodeId, CliqueId)> = augmented
                .nodes()
                .filter(|i| !state.z.contains_node(*i))
                .map(|i| (i, *augmented.memberships(i).iter().next().unwrap()))
                .collect();
            let report = ProjectionReport {
                graph: projection::project(&augmented),
                a0_set: a0,
                added_nodes: added,
            };
            (augmented, report)
        }
        RepairMode::None => {
            let report = ProjectionReport {
                graph: projection::project(&state.z),
                a0_set: projection::a0_violations(&state.z),
                added_nodes: vec![],
            };
            (state.z.clone(), report)
        }
    };

    // Repair nodes live in the edge-greedy partition just past r, with
    // weights from the node-weight law.
    let spacing = config.window.r * F::of(1e-9) + F::of(f64::EPSILON);
    for (ix, &(fresh, _)) in report.added_nodes.iter().enumerate() {
        let location = config.window.r + spacing * F::of((ix + 1) as f64);
        let weight = repair_rng.gen_range(F::zero()..=config.window.c);
        points.push_node(NodePoint {
            id: fresh,
            location,
            weight,
        })?;
    }

    Ok(JointOutput {
        points,
        chain: state,
        repaired,
        report,
    })
}

/// Root choice for the mixing-time bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMode {
    /// Tree centre: `sum_k 1 / Gamma_k` is smallest there.
    Center,
    /// Worst placement: half the leaf-to-leaf diameter.
    Worst,
}

/// Lower bound on the expected mixing time of the stopped process:
/// `(8 N_c / total mass) * L_max / 2` in worst mode and
/// `(8 N_c / total mass) * sum_k 1 / Gamma_k` from the centre.
pub fn mixing_lower_bound<F: Real>(
    tree: &LatentTree,
    kernel: &Kernel<F>,
    root_mode: RootMode,
) -> Result<F> {
    let mass = kernel.total_mass()?;
    if !(mass > F::zero()) {
        return Err(Error::Divergent(
            "mixing bound needs positive kernel mass".into(),
        ));
    }
    if tree.is_empty() {
        return Ok(F::zero());
    }
    let n_c = F::of(tree.len() as f64);
    let factor = F::of(8.0) * n_c / mass;
    let walk_term = match root_mode {
        RootMode::Worst => F::of(tree.leaf_diameter() as f64) / F::of(2.0),
        RootMode::Center => {
            let root = tree.center().expect("nonempty tree has a centre");
            let profile = gamma_profile(tree, root)?;
            let mut acc = F::zero();
            for &g in profile.counts.iter().skip(1) {
                acc += F::one() / F::of(g as f64);
            }
            acc
        }
    };
    Ok(factor * walk_term)
}
