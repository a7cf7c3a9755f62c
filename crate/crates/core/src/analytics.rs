//! Clique-degree expectations: Gamma-profiles, the d-regular and path-tree
//! closed forms, the generic profile series, Monte-Carlo cross-checks, the
//! bipartite degree law and commute-time arithmetic.
//!
//! Closed forms are evaluated through explicit finite geometric sums, so
//! the removable singularities (`d:z = 1`, `z = 1`, `d:z^2 = 1`) are exact
//! limit branches rather than epsilon-nudged divisions.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{Kernel, Upper};
use crate::model::{Adjacency, CliqueId, LatentTree};

use crate::real::Real;

/// Where a Gamma-profile is rooted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaRoot {
    Clique(CliqueId),
    Level(u32),
}

/// Counts of tree vertices at each BFS distance from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaProfile {
    pub root: GammaRoot,
    pub counts: Vec<u64>,
}

impl GammaProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// BFS layer sizes from a root clique-node.
pub fn gamma_profile(t: &LatentTree, root: CliqueId) -> Result<GammaProfile> {
    let dist = t.distances_from(root)?;
    let max = dist.values().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; max + 1];
    for d in dist.values() {
        counts[*d] += 1;
    }
    Ok(GammaProfile {
        root: GammaRoot::Clique(root),
        counts,
    })
}

/// Vertex count of a d-regular tree with `levels` levels:
/// `(d (d-1)^L - 2) / (d - 2)`.
pub fn dregular_node_count(d: u32, levels: u32) -> Result<u64> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "d-regular tree needs d >= 3, got {d}"
        )));
    }
    let dd = (d - 1) as u64;
    Ok((d as u64 * dd.pow(levels) - 2) / (d as u64 - 2))
}

/// `sum_{j=0}^{m-1} q^j`, evaluated by direct summation so `q = 1` is exact.
fn gsum<F: Real>(q: F, m: u32) -> F {
    let mut acc = F::zero();
    let mut pow = F::one();
    for _ in 0..m {
        acc += pow;
        pow = pow * q;
    }
    acc
}

/// Generic expectation over a profile: `sum_k Gamma_k zeta^{k+1}`.
pub fn expected_cliquedegree_series<F: Real>(profile: &GammaProfile, zeta: F) -> F {
    let mut acc = F::zero();
    let mut pow = zeta;
    for &count in &profile.counts {
        acc += F::of(count as f64) * pow;
        pow = pow * zeta;
    }
    acc
}

/// Gamma-profile of a level-`level` vertex in a d-regular tree with
/// `levels` levels, by the combinatorial table: `d (d-1)^{k-1}` up to the
/// ladder at `levels - level`, then `(d-1)^{levels - ceil((levels + level - k) / 2)}`.
pub fn level_gamma_profile(d: u32, levels: u32, level: u32) -> Result<GammaProfile> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "d-regular tree needs d >= 3, got {d}"
        )));
    }
    if level > levels {
        return Err(Error::InvalidParameter(format!(
            "level {level} exceeds {levels}"
        )));
    }
    let dd = (d - 1) as u64;
    let mut counts = vec![1u64];
    for k in 1..=(levels + level) {
        if k <= levels - level {
            counts.push(d as u64 * dd.pow(k - 1));
        } else {
            let exponent = levels - (levels + level - k).div_ceil(2);
            counts.push(dd.pow(exponent));
        }
    }
    Ok(GammaProfile {
        root: GammaRoot::Level(level),
        counts,
    })
}

/// Expected clique-degree for a node whose first connection lands on a
/// level-`level` clique-node of a d-regular tree:
/// `z + z^2 d S(dz, L-l) + z^2 (dz)^{L-l} (dz + 1) S(dz^2, l)` with
/// `S(q, m)` the m-term geometric sum and `d" = d - 1`.
pub fn expected_cd_dregular_level<F: Real>(d: u32, levels: u32, level: u32, zeta: F) -> Result<F> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "d-regular tree needs d >= 3, got {d}"
        )));
    }
    if level > levels {
        return Err(Error::InvalidParameter(format!(
            "level {level} exceeds {levels}"
        )));
    }
    let dd = F::of((d - 1) as f64);
    let df = F::of(d as f64);
    let z = zeta;
    let z2 = z * z;
    let first = z + z2 * df * gsum(dd * z, levels - level);
    let second =
        z2 * (dd * z).powi((levels - level) as i32) * (dd * z + F::one()) * gsum(dd * z * z, level);
    Ok(first + second)
}

/// Level-size profile from the root: `(1, d, d d", ..., d d"^{L-1})`.
fn dregular_level_sizes(d: u32, levels: u32) -> Vec<u64> {
    let dd = (d - 1) as u64;
    let mut sizes = vec![1u64];
    for l in 1..=levels {
        sizes.push(d as u64 * dd.pow(l - 1));
    }
    sizes
}

/// Expected clique-degree for an arbitrary initial clique-node of a
/// d-regular tree: the five-term bracket weighted by `(d-2)/(d d"^L - 2)`.
/// Near the removable singularities the bracket is evaluated as the exact
/// level average of [`expected_cd_dregular_level`].
pub fn expected_cd_dregular_any<F: Real>(d: u32, levels: u32, zeta: F) -> Result<F> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "d-regular tree needs d >= 3, got {d}"
        )));
    }
    let dd = F::of((d - 1) as f64);
    let z = zeta;
    let guard = F::of(1e-4);
    if (dd * z - F::one()).abs() < guard || (dd * z * z - F::one()).abs() < guard {
        return dregular_level_average(d, levels, zeta);
    }
    let df = F::of(d as f64);
    let one = F::one();
    let n = F::of(dregular_node_count(d, levels)? as f64);
    let prefactor = (df - F::of(2.0)) / (df * dd.powi(levels as i32) - F::of(2.0));
    debug_assert!((prefactor - one / n).abs() <= F::of(1e-12) * prefactor.abs());
    let dz = dd * z;
    let dz2 = dd * z * z;
    let t1 = z;
    let t2 = df * z * z * (dz.powi(levels as i32) - one) / (dz - one);
    let t3 = -(z * df * (z + one) / (dz - one)) * ((dd.powi(levels as i32) - one) / (dd - one));
    let t4 = z
        * z
        * df
        * dd.powi(levels as i32)
        * ((z.powi(levels as i32) - one) / (dz2 - one))
        * ((z + one) / (dz - one));
    let t5 = z
        * z
        * z
        * df
        * dz.powi(levels as i32)
        * ((dz + one) / (dz2 - one))
        * ((dz.powi(levels as i32) - one) / (dz - one));
    Ok(prefactor * (t1 + t2 + t3 + t4 + t5))
}

fn dregular_level_average<F: Real>(d: u32, levels: u32, zeta: F) -> Result<F> {
    let n = F::of(dregular_node_count(d, levels)? as f64);
    let sizes = dregular_level_sizes(d, levels);
    let mut acc = F::zero();
    for (level, &size) in sizes.iter().enumerate() {
        acc += F::of(size as f64) * expected_cd_dregular_level(d, levels, level as u32, zeta)?;
    }
    Ok(acc / n)
}

/// Expected clique-degree on a path tree (`2L + 1` vertices).
/// `level: Some(l)` gives the per-level form
/// `z + 2 z^2 S(z, L-l) + z^{L-l+1} S(z, 2l)`, `None` the arbitrary-start
/// average; both match the worked polynomial anchors and degenerate to the
/// vertex count at `z = 1`.
pub fn expected_cd_path<F: Real>(levels: u32, level: Option<u32>, zeta: F) -> Result<F> {
    match level {
        Some(l) => {
            if l > levels {
                return Err(Error::InvalidParameter(format!(
                    "level {l} exceeds {levels}"
                )));
            }
            let z = zeta;
            Ok(z + F::of(2.0) * z * z * gsum(z, levels - l)
                + z.powi((levels - l + 1) as i32) * gsum(z, 2 * l))
        }
        None => {
            let z = zeta;
            let one = F::one();
            if (z - one).abs() < F::of(1e-4) {
                return path_level_average(levels, zeta);
            }
            let lf = F::of(levels as f64);
            let n = F::of((2 * levels + 1) as f64);
            let bracket = one - F::of(2.0) * lf * (z + one) / (z - one)
                + F::of(2.0)
                    * (z.powi((levels + 1) as i32) + z * z + z - one)
                    * (z.powi(levels as i32) - one)
                    / ((z - one) * (z - one));
            Ok(z / n * bracket)
        }
    }
}

fn path_level_average<F: Real>(levels: u32, zeta: F) -> Result<F> {
    let n = F::of((2 * levels + 1) as f64);
    let mut acc = expected_cd_path(levels, Some(0), zeta)?;
    for l in 1..=levels {
        acc += F::of(2.0) * expected_cd_path(levels, Some(l), zeta)?;
    }
    Ok(acc / n)
}

/// `zeta = r' W1(vartheta)`: the per-hop connection weight. Values above 1
/// are legal algebraically but are no longer probabilities.
pub fn zeta_from_kernel<F: Real>(kernel: &Kernel<F>, r_prime: F, vartheta: F) -> Result<F> {
    Ok(r_prime * kernel.marginal(vartheta, Upper::Infinite)?)
}

/// Monte-Carlo estimate of the expected clique-degree: independent
/// Bernoulli(zeta) marks per clique-node, counting vertices whose whole
/// root path is marked. Returns (mean, standard error).
pub fn mc_cliquedegree(
    t: &LatentTree,
    zeta: f64,
    start: CliqueId,
    reps: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&zeta) {
        return Err(Error::InvalidParameter(format!(
            "Monte-Carlo needs zeta in [0,1], got {zeta}"
        )));
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be >= 1".into()));
    }
    if !t.contains(start) {
        return Err(Error::UnknownClique(start));
    }
    let vertices: Vec<CliqueId> = t.vertices().collect();
    let index: BTreeMap<CliqueId, usize> = vertices
        .iter()
        .enumerate()
        .map(|(ix, &v)| (v, ix))
        .collect();
    let adjacency: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| {
            t.neighbors_of(v)
                .unwrap()
                .iter()
                .map(|w| index[w])
                .collect()
        })
        .collect();
    let start_ix = index[&start];

    const CHUNK: u64 = 4096;
    let n_chunks = reps.div_ceil(CHUNK);
    let (sum, sum_sq) = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(reps);
            let mut marked = vec![false; vertices.len()];
            let mut stack = Vec::with_capacity(vertices.len());
            let (mut s, mut s2) = (0.0f64, 0.0f64);
            for _ in lo..hi {
                for m in marked.iter_mut() {
                    *m = rng.gen_bool(zeta);
                }
                // size of the marked component containing the start
                let mut count = 0u64;
                if marked[start_ix] {
                    stack.clear();
                    stack.push(start_ix);
                    let mut seen = vec![false; vertices.len()];
                    seen[start_ix] = true;
                    while let Some(v) = stack.pop() {
                        count += 1;
                        for &w in &adjacency[v] {
                            if marked[w] && !seen[w] {
                                seen[w] = true;
                                stack.push(w);
                            }
                        }
                    }
                }
                let x = count as f64;
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));

    let mean = sum / reps as f64;
    let var = (sum_sq / reps as f64 - mean * mean).max(0.0);
    let stderr = (var / reps as f64).sqrt();
    Ok((mean, stderr))
}

/// Poisson rate of a fresh node's degree in the unconditioned bipartite
/// process: `r' W1(vartheta)`.
pub fn bipartite_degree_rate<F: Real>(kernel: &Kernel<F>, r_prime: F, vartheta: F) -> Result<F> {
    if r_prime < F::zero() {
        return Err(Error::InvalidParameter(format!(
            "r' must be nonnegative, got {r_prime}"
        )));
    }
    Ok(r_prime * kernel.marginal(vartheta, Upper::Infinite)?)
}

/// Deterministic d-regular tree with the root as clique 0 and ids in BFS
/// order, plus each vertex's level. Companion to the closed forms, which
/// need a start vertex of known level.
pub fn dregular_tree(d: u32, levels: u32) -> Result<(LatentTree, BTreeMap<CliqueId, u32>)> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!(
            "d-regular tree needs d >= 3, got {d}"
        )));
    }
    let mut level_of = BTreeMap::new();
    level_of.insert(CliqueId(0), 0);
    let mut edges = Vec::new();
    let mut frontier = vec![CliqueId(0)];
    let mut next = 1u32;
    for level in 1..=levels {
        let mut newf = Vec::new();
        for &v in &frontier {
            let kids = if level == 1 { d } else { d - 1 };
            for _ in 0..kids {
                let w = CliqueId(next);
                next += 1;
                edges.push((v, w));
                level_of.insert(w, level);
                newf.push(w);
            }
        }
        frontier = newf;
    }
    Ok((LatentTree::new(level_of.keys().copied(), edges)?, level_of))
}

/// Path tree with `2 levels + 1` vertices; levels measured from the centre.
pub fn path_tree(levels: u32) -> (LatentTree, BTreeMap<CliqueId, u32>) {
    let n = 2 * levels + 1;
    let tree = LatentTree::new(
        (0..n).map(CliqueId),
        (1..n).map(|k| (CliqueId(k - 1), CliqueId(k))),
    )
    .unwrap();
    let level_of = (0..n).map(|k| (CliqueId(k), k.abs_diff(levels))).collect();
    (tree, level_of)
}

/// Commute-time identity for a walk on a tree: `2 (n - 1) sum_k 1 / Gamma_k`.
pub fn commute_time(t: &LatentTree, root: CliqueId) -> Result<f64> {
    let profile = gamma_profile(t, root)?;
    let n = t.len() as f64;
    let inv: f64 = profile.counts.iter().skip(1).map(|&g| 1.0 / g as f64).sum();
    Ok(2.0 * (n - 1.0) * inv)
}

/// Commute time of a lazy walk that stays put with probability `1 - p`.
pub fn lazy_commute_time(t: &LatentTree, root: CliqueId, p_move: f64) -> Result<f64> {
    if !(0.0 < p_move && p_move <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be in (0,1], got {p_move}"
        )));
    }
    Ok(commute_time(t, root)? / p_move)
}
