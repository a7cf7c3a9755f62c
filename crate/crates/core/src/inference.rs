//! Likelihood machinery over bipartite states: the symbolic factorization,
//! neighbourhood indicators, joint log-densities, junction-tree posterior
//! ratios, the single-marginal Beta conjugacy and the latent-S Gibbs
//! sampler for the log-multiplicative (Cox) link.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::model::{BipartiteState, CliqueId, LatentTree, NodeId, PointSet};
use crate::real::Real;
use crate::treeops::{self, Strictness};

/// Symbolic likelihood factorization: multisets of node-id sets. After
/// reduction the numerator is the maximal cliques and the denominator the
/// minimal separators with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub numerator: Vec<BTreeSet<NodeId>>,
    pub denominator: Vec<BTreeSet<NodeId>>,
}

/// Reduces `{rows of z} / {edge intersections of t}` by cancelling empty
/// factors and contracting every non-maximal row into a containing
/// neighbour (the path and boundary-branch cases of the reduction; the
/// junction property guarantees the rewired edge factors are unchanged).
pub fn factorize(z: &BipartiteState, t: &LatentTree) -> Result<Factorization> {
    let (observed, separators) = treeops::contract_to_maximal(z, t)?;
    let mut numerator: Vec<BTreeSet<NodeId>> =
        observed.vertices().map(|k| z.members(k).clone()).collect();
    numerator.sort();
    Ok(Factorization {
        numerator,
        denominator: separators,
    })
}

/// The neighbourhood indicator `delta_ki`: 1 iff clique `k` is in node
/// `i`'s neighbour set. Ones imply `z_ki = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NeiIndicator {
    ones: BTreeSet<(CliqueId, NodeId)>,
}

impl NeiIndicator {
    pub fn get(&self, k: CliqueId, i: NodeId) -> bool {
        self.ones.contains(&(k, i))
    }

    pub fn ones(&self) -> impl Iterator<Item = (CliqueId, NodeId)> + '_ {
        self.ones.iter().copied()
    }

    /// `m_i^delta`: number of neighbour cliques of node `i`.
    pub fn column_count(&self, i: NodeId) -> usize {
        self.ones.iter().filter(|&&(_, j)| j == i).count()
    }
}

pub fn delta_nei(
    z: &BipartiteState,
    t: &LatentTree,
    strictness: Strictness,
) -> Result<NeiIndicator> {
    if let Some(w) = treeops::verify_junction_property(z, t)? {
        return Err(Error::JunctionViolated(w.node));
    }
    let mut ones = BTreeSet::new();
    for i in z.nodes() {
        let sets = treeops::move_sets(z, t, i, strictness)?;
        for k in sets.neighbour {
            debug_assert!(!z.has_edge(k, i));
            ones.insert((k, i));
        }
    }
    Ok(NeiIndicator { ones })
}

/// `sum_ki [ z log W + (1 - z) delta log(1 - W) ]`; minus infinity is a
/// value (a forbidden configuration), not an error.
pub fn log_joint<F: Real>(
    z: &BipartiteState,
    t: &LatentTree,
    kernel: &Kernel<F>,
    points: &PointSet<F>,
    strictness: Strictness,
) -> Result<F> {
    let delta = delta_nei(z, t, strictness)?;
    let mut acc = F::zero();
    for (k, i) in z.edges() {
        let w = kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?)?;
        acc += w.ln();
    }
    for (k, i) in delta.ones() {
        let w = kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?)?;
        acc += (-w).ln_1p();
    }
    Ok(acc)
}

/// Log posterior ratio of `t1` over `t2` for the same state:
/// `sum_ki (1 - z)(delta - delta') log(1 - W)`.
pub fn jtree_logratio<F: Real>(
    z: &BipartiteState,
    t1: &LatentTree,
    t2: &LatentTree,
    kernel: &Kernel<F>,
    points: &PointSet<F>,
    strictness: Strictness,
) -> Result<F> {
    let d1 = delta_nei(z, t1, strictness)?;
    let d2 = delta_nei(z, t2, strictness)?;
    let mut acc = F::zero();
    for (k, i) in d1.ones() {
        if !d2.get(k, i) {
            let w = kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?)?;
            acc += (-w).ln_1p();
        }
    }
    for (k, i) in d2.ones() {
        if !d1.get(k, i) {
            let w = kernel.evaluate(points.clique_weight(k)?, points.node_weight(i)?)?;
            acc = acc - (-w).ln_1p();
        }
    }
    Ok(acc)
}

/// Per-node Beta posterior under the single-marginal model
/// `W(x, y) = f(y)` with `f ~ Beta(alpha, 1)` priors:
/// `Beta(alpha + m_i, 1 + m_i^delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPosterior<F> {
    pub node: NodeId,
    pub shape1: F,
    pub shape2: F,
}

impl<F: Real> BetaPosterior<F> {
    pub fn mean(&self) -> F {
        self.shape1 / (self.shape1 + self.shape2)
    }

    pub fn variance(&self) -> F {
        let s = self.shape1 + self.shape2;
        self.shape1 * self.shape2 / (s * s * (s + F::one()))
    }
}

pub fn beta_posterior<F: Real>(
    z: &BipartiteState,
    t_obs: &LatentTree,
    alpha: F,
    strictness: Strictness,
) -> Result<Vec<BetaPosterior<F>>> {
    if !(alpha > F::zero()) {
        return Err(Error::InvalidParameter(format!(
            "beta prior needs alpha > 0, got {alpha}"
        )));
    }
    let delta = delta_nei(z, t_obs, strictness)?;
    Ok(z.nodes()
        .map(|i| {
            let m = z.memberships(i).len();
            let m_delta = delta.column_count(i);
            BetaPosterior {
                node: i,
                shape1: alpha + F::of(m as f64),
                shape2: F::one() + F::of(m_delta as f64),
            }
        })
        .collect())
}

/// Log marginal joint of the single-marginal Beta model:
/// `N_v log alpha + sum_i log B(alpha + m_i, m_i^delta + 1)`.
pub fn beta_marginal_log_joint<F: Real>(
    z: &BipartiteState,
    t_obs: &LatentTree,
    alpha: F,
    strictness: Strictness,
) -> Result<F> {
    let posteriors = beta_posterior(z, t_obs, alpha, strictness)?;
    let ln_gamma = |v: F| F::of(statrs::function::gamma::ln_gamma(v.f64()));
    let mut acc = F::of(z.n_nodes() as f64) * alpha.ln();
    for p in posteriors {
        acc += ln_gamma(p.shape1) + ln_gamma(p.shape2) - ln_gamma(p.shape1 + p.shape2);
    }
    Ok(acc)
}

/// Gamma prior in shape / rate parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaPrior<F> {
    pub shape: F,
    pub rate: F,
}

impl<F: Real> GammaPrior<F> {
    pub fn new(shape: F, rate: F) -> Result<Self> {
        if !(shape > F::zero()) || !(rate > F::zero()) {
            return Err(Error::InvalidParameter(format!(
                "gamma prior needs shape, rate > 0, got ({shape}, {rate})"
            )));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> F {
        self.shape / self.rate
    }
}

/// Latent state of the Cox Gibbs sampler. Tracked pairs are those with
/// `z = 1` (latent `s` in (0, 1)) or `delta = 1` (`s` pinned at 1).
#[derive(Debug, Clone)]
pub struct GibbsState<F> {
    pub clique_weights: BTreeMap<CliqueId, F>,
    pub node_weights: BTreeMap<NodeId, F>,
    pub latent_s: BTreeMap<(CliqueId, NodeId), F>,
}

/// Post-burnin posterior draw streams.
#[derive(Debug, Clone)]
pub struct CoxPosterior<F> {
    pub clique_draws: BTreeMap<CliqueId, Vec<F>>,
    pub node_draws: BTreeMap<NodeId, Vec<F>>,
}

/// Inverse-CDF draw from Exponential(rate) truncated to (0, 1); the
/// uniform limit is used for vanishing rates.
pub fn sample_truncated_exp<F: Real, R: Rng>(rate: F, rng: &mut R) -> F {
    let u: F = rng.gen_range(F::zero()..F::one());
    if rate.abs() < F::of(1e-12) {
        return u;
    }
    let mass = -(-rate).exp_m1(); // 1 - e^{-rate}
    -(-(u * mass)).ln_1p() / rate
}

fn sample_gamma<F: Real, R: Rng>(shape: F, rate: F, rng: &mut R) -> F {
    let dist =
        rand_distr::Gamma::new(shape.f64(), 1.0 / rate.f64()).expect("positive shape and scale");
    F::of(dist.sample(rng))
}

/// Gibbs sampler for the Cox link `W(x, y) = 1 - exp(-x y)` with Gamma
/// priors on both weight families and the 1-inflated exponential
/// augmentation turning the likelihood product into exponent sums.
pub struct CoxGibbs<'a, F> {
    z: &'a BipartiteState,
    delta: NeiIndicator,
    clique_prior: GammaPrior<F>,
    node_prior: GammaPrior<F>,
    pub state: GibbsState<F>,
}

impl<'a, F: Real> CoxGibbs<'a, F> {
    pub fn new(
        z: &'a BipartiteState,
        t_obs: &LatentTree,
        clique_prior: GammaPrior<F>,
        node_prior: GammaPrior<F>,
        strictness: Strictness,
    ) -> Result<Self> {
        let delta = delta_nei(z, t_obs, strictness)?;
        let mut latent_s = BTreeMap::new();
        for (k, i) in z.edges() {
            latent_s.insert((k, i), F::of(0.5));
        }
        for (k, i) in delta.ones() {
            latent_s.insert((k, i), F::one());
        }
        let state = GibbsState {
            clique_weights: z.cliques().map(|k| (k, clique_prior.mean())).collect(),
            node_weights: z.nodes().map(|i| (i, node_prior.mean())).collect(),
            latent_s,
        };
        Ok(Self {
            z,
            delta,
            clique_prior,
            node_prior,
            state,
        })
    }

    /// Conditional Gamma for a clique weight: shape `prior + m_k`, rate
    /// `prior + sum_i vartheta_i s_ki (z_ki + delta_ki)` (s is 1 on the
    /// delta pairs).
    pub fn clique_conditional(&self, k: CliqueId) -> (F, F) {
        let m_k = self.z.members(k).len();
        let mut rate = self.clique_prior.rate;
        for (&(kk, i), &s) in &self.state.latent_s {
            if kk == k {
                rate += self.state.node_weights[&i] * s;
            }
        }
        (self.clique_prior.shape + F::of(m_k as f64), rate)
    }

    pub fn node_conditional(&self, i: NodeId) -> (F, F) {
        let n_i = self.z.memberships(i).len();
        let mut rate = self.node_prior.rate;
        for (&(k, ii), &s) in &self.state.latent_s {
            if ii == i {
                rate += self.state.clique_weights[&k] * s;
            }
        }
        (self.node_prior.shape + F::of(n_i as f64), rate)
    }

    /// `s_ki`: atom at 1 when `z_ki = 0`, truncated exponential with rate
    /// `vartheta'_k vartheta_i` on (0, 1) when `z_ki = 1`.
    pub fn update_s<R: Rng>(&mut self, rng: &mut R) {
        let pairs: Vec<(CliqueId, NodeId)> = self.state.latent_s.keys().copied().collect();
        for (k, i) in pairs {
            if self.z.has_edge(k, i) {
                let rate = self.state.clique_weights[&k] * self.state.node_weights[&i];
                let s = sample_truncated_exp(rate, rng);
                self.state.latent_s.insert((k, i), s);
            } else {
                debug_assert!(self.delta.get(k, i));
                self.state.latent_s.insert((k, i), F::one());
            }
        }
    }

    pub fn update_clique_weights<R: Rng>(&mut self, rng: &mut R) {
        let ks: Vec<CliqueId> = self.state.clique_weights.keys().copied().collect();
        for k in ks {
            let (shape, rate) = self.clique_conditional(k);
            let draw = sample_gamma(shape, rate, rng);
            self.state.clique_weights.insert(k, draw);
        }
    }

    pub fn update_node_weights<R: Rng>(&mut self, rng: &mut R) {
        let is: Vec<NodeId> = self.state.node_weights.keys().copied().collect();
        for i in is {
            let (shape, rate) = self.node_conditional(i);
            let draw = sample_gamma(shape, rate, rng);
            self.state.node_weights.insert(i, draw);
        }
    }

    pub fn sweep<R: Rng>(&mut self, rng: &mut R) {
        self.update_s(rng);
        self.update_clique_weights(rng);
        self.update_node_weights(rng);
    }

    pub fn run<R: Rng>(&mut self, iters: u64, burnin: u64, rng: &mut R) -> Result<CoxPosterior<F>> {
        if iters == 0 || burnin >= iters {
            return Err(Error::InvalidParameter(format!(
                "need iters > burnin >= 0, got iters {iters} burnin {burnin}"
            )));
        }
        let mut posterior = CoxPosterior {
            clique_draws: self.z.cliques().map(|k| (k, Vec::new())).collect(),
            node_draws: self.z.nodes().map(|i| (i, Vec::new())).collect(),
        };
        for it in 0..iters {
            self.sweep(rng);
            if it >= burnin {
                for (&k, &v) in &self.state.clique_weights {
                    posterior.clique_draws.get_mut(&k).unwrap().push(v);
                }
                for (&i, &v) in &self.state.node_weights {
                    posterior.node_draws.get_mut(&i).unwrap().push(v);
                }
            }
        }
        Ok(posterior)
    }
}

/// One-call wrapper: cyclic s / clique / node updates, returning the
/// post-burnin draws.
#[allow(clippy::too_many_arguments)]
pub fn cox_gibbs<F: Real, R: Rng>(
    z: &BipartiteState,
    t_obs: &LatentTree,
    clique_prior: GammaPrior<F>,
    node_prior: GammaPrior<F>,
    iters: u64,
    burnin: u64,
    strictness: Strictness,
    rng: &mut R,
) -> Result<CoxPosterior<F>> {
    if z.n_edges() == 0 {
        return Err(Error::InvalidParameter(
            "cox gibbs needs a nonempty state".into(),
        ));
    }
    CoxGibbs::new(z, t_obs, clique_prior, node_prior, strictness)?.run(iters, burnin, rng)
}
