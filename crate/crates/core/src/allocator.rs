//! Channel assignment and symbols-per-word selection.
//!
//! The joint problem over (assignment, k) decouples: for each (user,
//! channel) pair the best k is found by scanning `1..=K`, the resulting
//! per-pair optimum becomes the edge weight, and a maximum-weight matching
//! picks the channels. [`brute_force_joint`] searches the joint space
//! directly and serves as the reference for tests.

use crate::channel::NetworkDrop;
use crate::error::{Error, Result};
use crate::hungarian::{canonical_total, hungarian_max, WeightMatrix};
use crate::link_adaptation::{CqiTables, SystemKind};
use crate::metrics::{equivalent_semantic_se, SourceStats, TransformFactor};
use crate::similarity::SimilaritySurface;

/// Limits of the brute-force oracle.
pub const BRUTE_FORCE_MAX_NODES: usize = 6;
pub const BRUTE_FORCE_MAX_K: u32 = 20;

/// Per-link requirements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints {
    /// Largest admissible symbols-per-word count, K.
    pub k_max: u32,
    /// Minimum semantic similarity.
    pub xi_threshold: f64,
    /// Minimum per-link S-SE, in units of I/L.
    pub sse_threshold: f64,
}

impl Default for Constraints {
    fn default() -> Self {
        Self {
            k_max: 20,
            xi_threshold: 0.9,
            sse_threshold: 0.025,
        }
    }
}

impl Constraints {
    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::validation("k_max must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.xi_threshold) {
            return Err(Error::validation("xi_threshold must lie in [0, 1]"));
        }
        if !(self.sse_threshold >= 0.0) || !self.sse_threshold.is_finite() {
            return Err(Error::validation("sse_threshold must be >= 0"));
        }
        Ok(())
    }

    /// Whether a semantic link with similarity `xi` at `k` symbols/word
    /// meets both the similarity and the S-SE requirement.
    fn admits(&self, xi: f64, k: u32) -> bool {
        xi >= self.xi_threshold && xi / f64::from(k) >= self.sse_threshold
    }
}

/// Outcome of the per-pair k search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPlan {
    pub user: usize,
    pub channel: usize,
    /// Best k, `None` when no k meets the constraints.
    pub k_opt: Option<u32>,
    /// Similarity at `k_opt`; for infeasible pairs the best similarity seen.
    pub xi: f64,
    /// ξ/k at `k_opt`, zero when infeasible.
    pub weight: f64,
    pub feasible: bool,
}

impl PairPlan {
    fn at(self, user: usize, channel: usize) -> Self {
        Self {
            user,
            channel,
            ..self
        }
    }
}

/// A matching of users to channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `(user, channel)` pairs, sorted by user.
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: f64,
    /// Plans of the matched pairs, in the order of `pairs`.
    pub per_user: Vec<PairPlan>,
}

impl Assignment {
    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            total_weight: 0.0,
            per_user: Vec::new(),
        }
    }

    /// Channel assigned to `user`, if any.
    pub fn channel_of(&self, user: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == user).map(|p| p.1)
    }

    /// No user and no channel appears twice.
    pub fn is_valid_matching(&self, n_users: usize, n_channels: usize) -> bool {
        let mut users = vec![false; n_users];
        let mut chans = vec![false; n_channels];
        for &(u, c) in &self.pairs {
            if u >= n_users || c >= n_channels || users[u] || chans[c] {
                return false;
            }
            users[u] = true;
            chans[c] = true;
        }
        true
    }
}

/// Best k for one link at `snr_db`. Ties go to the smaller k.
pub fn solve_p2(surface: &SimilaritySurface, snr_db: f64, cons: &Constraints) -> Result<PairPlan> {
    if !surface.covers(cons.k_max) {
        return Err(Error::domain(format!(
            "similarity surface does not tabulate every k in 1..={}",
            cons.k_max
        )));
    }
    let mut best: Option<(u32, f64, f64)> = None;
    let mut best_xi = 0.0f64;
    for k in 1..=cons.k_max {
        let xi = surface.query(k, snr_db)?;
        best_xi = best_xi.max(xi);
        if !cons.admits(xi, k) {
            continue;
        }
        let w = xi / f64::from(k);
        if best.is_none_or(|(_, _, bw)| w > bw) {
            best = Some((k, xi, w));
        }
    }
    Ok(match best {
        Some((k, xi, w)) => PairPlan {
            user: 0,
            channel: 0,
            k_opt: Some(k),
            xi,
            weight: w,
            feasible: true,
        },
        None => PairPlan {
            user: 0,
            channel: 0,
            k_opt: None,
            xi: best_xi,
            weight: 0.0,
            feasible: false,
        },
    })
}

/// Per-pair plans for every (user, channel) of a drop, row-major.
pub fn build_weights(
    drop: &NetworkDrop,
    surface: &SimilaritySurface,
    cons: &Constraints,
) -> Result<Vec<Vec<PairPlan>>> {
    (0..drop.n_users())
        .map(|u| {
            drop.row(u)
                .iter()
                .enumerate()
                .map(|(c, link)| Ok(solve_p2(surface, link.snr_db, cons)?.at(u, c)))
                .collect()
        })
        .collect()
}

fn plans_to_matrix(plans: &[Vec<PairPlan>]) -> WeightMatrix {
    let cols = plans.first().map_or(0, Vec::len);
    WeightMatrix::from_fn(plans.len(), cols, |r, c| plans[r][c].weight)
}

fn assignment_from(plans: &[Vec<PairPlan>]) -> Result<Assignment> {
    let matching = hungarian_max(&plans_to_matrix(plans))?;
    let per_user = matching.pairs.iter().map(|&(u, c)| plans[u][c]).collect();
    Ok(Assignment {
        pairs: matching.pairs,
        total_weight: matching.total,
        per_user,
    })
}

/// Semantic system: optimal k per pair, then maximum-weight matching.
/// The total is Σ ξ/k over matched pairs, in units of I/L.
pub fn solve_semantic(
    drop: &NetworkDrop,
    surface: &SimilaritySurface,
    cons: &Constraints,
) -> Result<Assignment> {
    let plans = build_weights(drop, surface, cons)?;
    assignment_from(&plans)
}

/// Per-pair plans of a conventional system: weight is the equivalent S-SE,
/// zeroed when below the S-SE threshold.
pub fn benchmark_weights(
    drop: &NetworkDrop,
    system: SystemKind,
    tables: &CqiTables,
    tf: TransformFactor,
    src: SourceStats,
    cons: &Constraints,
) -> Result<Vec<Vec<PairPlan>>> {
    if !system.is_conventional() {
        return Err(Error::domain("benchmark solver needs a conventional system"));
    }
    let threshold = cons.sse_threshold * src.i_over_l;
    (0..drop.n_users())
        .map(|u| {
            drop.row(u)
                .iter()
                .enumerate()
                .map(|(c, link)| {
                    let bits = tables.bit_se(system, link.snr_linear, link.snr_db)?;
                    let phi = equivalent_semantic_se(bits, tf, src)?;
                    let feasible = phi > 0.0 && phi >= threshold;
                    Ok(PairPlan {
                        user: u,
                        channel: c,
                        k_opt: None,
                        xi: 1.0,
                        weight: if feasible { phi } else { 0.0 },
                        feasible,
                    })
                })
                .collect()
        })
        .collect()
}

/// Conventional benchmark (Ideal, 4G or 5G): equivalent S-SE weights,
/// S-SE threshold, maximum-weight matching.
pub fn solve_benchmark(
    drop: &NetworkDrop,
    system: SystemKind,
    tables: &CqiTables,
    tf: TransformFactor,
    src: SourceStats,
    cons: &Constraints,
) -> Result<Assignment> {
    let plans = benchmark_weights(drop, system, tables, tf, src, cons)?;
    assignment_from(&plans)
}

/// Semantic objective of an explicit plan `(user, channel, k)`. Pairs that
/// violate the similarity or S-SE requirement contribute zero.
pub fn semantic_objective(
    drop: &NetworkDrop,
    surface: &SimilaritySurface,
    cons: &Constraints,
    plan: &[(usize, usize, u32)],
) -> Result<f64> {
    let mut parts = Vec::with_capacity(plan.len());
    for &(u, c, k) in plan {
        if k == 0 || k > cons.k_max {
            return Err(Error::domain(format!("k = {k} outside 1..={}", cons.k_max)));
        }
        let xi = surface.query(k, drop.link(u, c).snr_db)?;
        if cons.admits(xi, k) {
            parts.push(xi / f64::from(k));
        }
    }
    Ok(canonical_total(parts))
}

/// Semantic objective of a fixed assignment where every user sends `k`
/// symbols per word.
pub fn fixed_k_objective(
    drop: &NetworkDrop,
    surface: &SimilaritySurface,
    cons: &Constraints,
    pairs: &[(usize, usize)],
    k: u32,
) -> Result<f64> {
    let plan: Vec<_> = pairs.iter().map(|&(u, c)| (u, c, k)).collect();
    semantic_objective(drop, surface, cons, &plan)
}

/// Exhaustive search over every partial injective user→channel map and
/// every k per matched user.
pub fn brute_force_joint(
    drop: &NetworkDrop,
    surface: &SimilaritySurface,
    cons: &Constraints,
) -> Result<Assignment> {
    let (n, m) = (drop.n_users(), drop.n_channels());
    if n > BRUTE_FORCE_MAX_NODES || m > BRUTE_FORCE_MAX_NODES || cons.k_max > BRUTE_FORCE_MAX_K {
        return Err(Error::domain(format!(
            "brute force limited to {BRUTE_FORCE_MAX_NODES} users/channels and K <= {BRUTE_FORCE_MAX_K}"
        )));
    }
    // options[u][c] = every (k, xi, contribution) with non-zero contribution
    type Options = Vec<Vec<Vec<(u32, f64, f64)>>>;
    let mut options: Options = vec![vec![Vec::new(); m]; n];
    for (u, row) in options.iter_mut().enumerate() {
        for (c, opts) in row.iter_mut().enumerate() {
            let snr = drop.link(u, c).snr_db;
            for k in 1..=cons.k_max {
                let xi = surface.query(k, snr)?;
                if cons.admits(xi, k) {
                    opts.push((k, xi, xi / f64::from(k)));
                }
            }
        }
    }

    struct Search<'a> {
        options: &'a Options,
        used: Vec<bool>,
        current: Vec<(usize, usize, u32, f64, f64)>,
        best_total: f64,
        best: Vec<(usize, usize, u32, f64, f64)>,
    }

    impl Search<'_> {
        fn visit(&mut self, user: usize) {
            if user == self.options.len() {
                let total = canonical_total(self.current.iter().map(|p| p.4).collect());
                if total > self.best_total {
                    self.best_total = total;
                    self.best = self.current.clone();
                }
                return;
            }
            // leave the user unmatched (or matched with zero contribution)
            self.visit(user + 1);
            for c in 0..self.used.len() {
                if self.used[c] {
                    continue;
                }
                self.used[c] = true;
                for i in 0..self.options[user][c].len() {
                    let (k, xi, w) = self.options[user][c][i];
                    self.current.push((user, c, k, xi, w));
                    self.visit(user + 1);
                    self.current.pop();
                }
                self.used[c] = false;
            }
        }
    }

    let mut search = Search {
        options: &options,
        used: vec![false; m],
        current: Vec::with_capacity(n),
        best_total: 0.0,
        best: Vec::new(),
    };
    search.visit(0);

    Ok(Assignment {
        pairs: search.best.iter().map(|p| (p.0, p.1)).collect(),
        total_weight: search.best_total,
        per_user: search
            .best
            .iter()
            .map(|&(user, channel, k, xi, weight)| PairPlan {
                user,
                channel,
                k_opt: Some(k),
                xi,
                weight,
                feasible: true,
            })
            .collect(),
    })
}
