//! The search loop: selection, expansion, rollout, backpropagation.
//!
//! Each iteration clones its way down the forward model along tree-policy
//! choices, expands one node, rolls out uniformly at random to a terminal
//! state or the depth cap, and writes the observed value (terminal offsets
//! plus one optional noise draw) into every action's statistics along the
//! path. Trees are throwaway: one `choose_move` call builds one tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::env::{observe_score, ForwardModel, Outcome};
use crate::ord;
use crate::pmf::Pmf;
use crate::Ordinal;

use super::{prob_beats, ActionStats, SearchConfig, SearchError, Variant};

/// RNG stream ids: one base seed fans out into independent streams so the
/// environment, the search rollouts and the observation noise can be
/// toggled without disturbing each other.
pub const ENV_STREAM: u64 = 0;
pub const SEARCH_STREAM: u64 = 1;
pub const NOISE_STREAM: u64 = 2;

/// Dominance values for every action at once. Pairwise probabilities are
/// computed once per unordered pair and complemented, so for two actions
/// `B(a) + B(b)` is exactly 1.
pub(super) fn dominance_all<T: Ord>(pmfs: &[Pmf<T>]) -> Result<Vec<f64>, SearchError> {
    let k = pmfs.len();
    if k < 2 {
        return Err(SearchError::NeedTwoActions);
    }
    let mut pair = vec![0.0; k * k];
    for a in 0..k {
        for b in (a + 1)..k {
            let p = prob_beats(&pmfs[a], &pmfs[b])?;
            pair[a * k + b] = p;
            pair[b * k + a] = 1.0 - p;
        }
    }
    Ok((0..k)
        .map(|a| {
            let sum: f64 = (0..k).filter(|b| *b != a).map(|b| pair[a * k + b]).sum();
            sum / (k - 1) as f64
        })
        .collect())
}

struct Edge {
    stats: ActionStats,
    child: Option<Box<Node>>,
}

struct Node {
    /// Visit count `n`; equals the sum of edge visits after every iteration.
    visits: u64,
    edges: Vec<Edge>,
    /// Incremental pairwise win mass `u[a][b]` (wins of `a` over `b` plus
    /// half-ties), row-major; maintained for the exact-tally variant so
    /// dominance never rescans the full sample lists.
    pairwise: Vec<f64>,
    /// Running bounds over every value observed at this node; the numeric
    /// baseline normalizes its means against them.
    value_lo: f64,
    value_hi: f64,
}

impl Node {
    fn empty() -> Self {
        Node {
            visits: 0,
            edges: Vec::new(),
            pairwise: Vec::new(),
            value_lo: f64::INFINITY,
            value_hi: f64::NEG_INFINITY,
        }
    }

    fn init(&mut self, actions: usize, variant: Variant) {
        if !self.edges.is_empty() {
            return;
        }
        self.edges = (0..actions)
            .map(|_| Edge {
                stats: ActionStats::for_variant(variant),
                child: None,
            })
            .collect();
        if variant == Variant::OmctsExact {
            self.pairwise = vec![0.0; actions * actions];
        }
    }

    /// Tree policy: any unvisited action first (lowest index), then the
    /// UCT argmax; ties resolve to the lowest index.
    fn select(&self, cfg: &SearchConfig) -> Result<usize, SearchError> {
        let k = self.edges.len();
        if k == 0 {
            return Err(SearchError::NoActions);
        }
        if let Some(i) = self.edges.iter().position(|e| e.stats.visits() == 0) {
            return Ok(i);
        }
        if k == 1 {
            return Ok(0);
        }
        let exploit = self.exploitation(cfg)?;
        let n = self.visits as f64;
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, e) in self.edges.iter().enumerate() {
            let n_a = e.stats.visits() as f64;
            let score = exploit[i] + 2.0 * cfg.exploration * (2.0 * n.ln() / n_a).sqrt();
            if score > best_score {
                best = i;
                best_score = score;
            }
        }
        Ok(best)
    }

    /// Exploitation term per action, on a [0, 1] scale. All edges must be
    /// visited.
    fn exploitation(&self, cfg: &SearchConfig) -> Result<Vec<f64>, SearchError> {
        let k = self.edges.len();
        match cfg.variant {
            Variant::Mcts => {
                // Means normalized by the node's running value bounds, the
                // way general game-playing UCT implementations scale their
                // unknown-range heuristic onto [0, 1]. Each mean averages
                // values inside the bounds, so no clamping is needed.
                let (lo, hi) = (self.value_lo, self.value_hi);
                Ok(self
                    .edges
                    .iter()
                    .map(|e| {
                        let m = e.stats.mean().expect("numeric backend, visited");
                        if hi > lo {
                            (m - lo) / (hi - lo)
                        } else {
                            0.5
                        }
                    })
                    .collect())
            }
            Variant::OmctsExact => Ok(self.dominance_from_pairwise()),
            _ => {
                let pmfs: Vec<Pmf<Ordinal>> = self
                    .edges
                    .iter()
                    .map(|e| e.stats.pmf())
                    .collect::<Result<_, _>>()?;
                dominance_all(&pmfs)
            }
        }
    }

    /// Dominance from the incrementally maintained pairwise mass:
    /// `B(a) = mean_b u[a][b] / (n_a * n_b)`.
    fn dominance_from_pairwise(&self) -> Vec<f64> {
        let k = self.edges.len();
        (0..k)
            .map(|a| {
                let n_a = self.edges[a].stats.visits() as f64;
                let sum: f64 = (0..k)
                    .filter(|b| *b != a)
                    .map(|b| {
                        let n_b = self.edges[b].stats.visits() as f64;
                        self.pairwise[a * k + b] / (n_a * n_b)
                    })
                    .sum();
                sum / (k - 1) as f64
            })
            .collect()
    }

    /// Stores an observed value into edge `a`, updating the pairwise mass
    /// against every sibling tally first.
    fn record(&mut self, a: usize, value: Ordinal) {
        self.value_lo = self.value_lo.min(value.into_inner());
        self.value_hi = self.value_hi.max(value.into_inner());
        let k = self.edges.len();
        if !self.pairwise.is_empty() {
            for b in 0..k {
                if b == a {
                    continue;
                }
                if let Some((below, equal)) = self.edges[b].stats.tally_partition(value) {
                    let n_b = self.edges[b].stats.visits() as usize;
                    let above = n_b - below - equal;
                    self.pairwise[a * k + b] += below as f64 + 0.5 * equal as f64;
                    self.pairwise[b * k + a] += above as f64 + 0.5 * equal as f64;
                }
            }
        }
        self.edges[a].stats.record(value);
    }

    /// Most-visited edge, ties to the lowest index.
    fn recommend(&self) -> Result<usize, SearchError> {
        let mut best: Option<(usize, u64)> = None;
        for (i, e) in self.edges.iter().enumerate() {
            let n_a = e.stats.visits();
            if n_a > 0 && best.map_or(true, |(_, b)| n_a > b) {
                best = Some((i, n_a));
            }
        }
        best.map(|(i, _)| i).ok_or(SearchError::NoVisitedAction)
    }

    /// Diagnostic per-action values: dominance for ordinal variants, raw
    /// means for the baseline; NaN where undefined.
    fn report_values(&self, cfg: &SearchConfig) -> Vec<f64> {
        let k = self.edges.len();
        if cfg.variant == Variant::Mcts {
            return self
                .edges
                .iter()
                .map(|e| e.stats.mean().unwrap_or(f64::NAN))
                .collect();
        }
        let all_visited = self.edges.iter().all(|e| e.stats.visits() > 0);
        if k < 2 || !all_visited {
            return vec![f64::NAN; k];
        }
        match cfg.variant {
            Variant::OmctsExact => self.dominance_from_pairwise(),
            _ => {
                let pmfs: Vec<Pmf<Ordinal>> = match self
                    .edges
                    .iter()
                    .map(|e| e.stats.pmf())
                    .collect::<Result<_, _>>()
                {
                    Ok(p) => p,
                    Err(_) => return vec![f64::NAN; k],
                };
                dominance_all(&pmfs).unwrap_or_else(|_| vec![f64::NAN; k])
            }
        }
    }
}

/// Outcome of one move computation.
#[derive(Debug, Clone)]
pub struct MoveReport {
    /// Index into the root state's legal action list.
    pub action: usize,
    /// Iterations completed (the full budget).
    pub iterations: u32,
    pub root_visits: Vec<u64>,
    /// Root dominance values (ordinal variants) or raw means (baseline).
    pub root_values: Vec<f64>,
    /// Every tree-policy choice of the search, in order; used by the
    /// invariance tests and cheap enough to always collect.
    pub selections: Vec<u16>,
}

/// One agent: owns its search and observation-noise RNG streams so that
/// independent games can run from independent seeds.
pub struct Searcher {
    cfg: SearchConfig,
    rng: ChaCha8Rng,
    noise_rng: ChaCha8Rng,
}

impl Searcher {
    pub fn new(cfg: SearchConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(SEARCH_STREAM);
        let mut noise_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        noise_rng.set_stream(NOISE_STREAM);
        Searcher {
            cfg,
            rng,
            noise_rng,
        }
    }

    pub fn config(&self) -> &SearchConfig {
        &self.cfg
    }

    /// Builds a fresh tree under the iteration budget and returns the
    /// most-visited root action.
    pub fn choose_move<M: ForwardModel>(&mut self, root: &M) -> Result<MoveReport, SearchError> {
        root.legal_actions()?;
        let mut tree = Node::empty();
        let mut selections = Vec::new();
        for _ in 0..self.cfg.budget {
            self.iterate(&mut tree, root, &mut selections)?;
        }
        Ok(MoveReport {
            action: tree.recommend()?,
            iterations: self.cfg.budget,
            root_visits: tree.edges.iter().map(|e| e.stats.visits()).collect(),
            root_values: tree.report_values(&self.cfg),
            selections,
        })
    }

    fn iterate<M: ForwardModel>(
        &mut self,
        node: &mut Node,
        state: &M,
        trace: &mut Vec<u16>,
    ) -> Result<Ordinal, SearchError> {
        let actions = state.legal_actions()?;
        node.init(actions.len(), self.cfg.variant);
        let a = node.select(&self.cfg)?;
        trace.push(a as u16);
        node.visits += 1;

        let (next, _delta) = state.advance(actions[a], &mut self.rng)?;
        let value = if next.outcome() != Outcome::Running {
            ord(self.observe(&next))
        } else if node.edges[a].child.is_some() {
            let child = node.edges[a].child.as_mut().expect("checked above");
            self.iterate(child, &next, trace)?
        } else {
            node.edges[a].child = Some(Box::new(Node::empty()));
            let end = self.rollout(next)?;
            ord(self.observe(&end))
        };
        node.record(a, value);
        Ok(value)
    }

    /// Uniform random playout to a terminal state or the depth cap.
    fn rollout<M: ForwardModel>(&mut self, mut state: M) -> Result<M, SearchError> {
        for _ in 0..self.cfg.rollout_depth {
            if state.outcome() != Outcome::Running {
                break;
            }
            let actions = state.legal_actions()?;
            let a = actions[self.rng.gen_range(0..actions.len())];
            state = state.advance(a, &mut self.rng)?.0;
        }
        Ok(state)
    }

    /// The observed value of a final state: terminal offsets for wins and
    /// losses, the raw score at a rollout cutoff, plus one noise draw.
    fn observe<M: ForwardModel>(&mut self, state: &M) -> f64 {
        observe_score(
            state,
            self.cfg.noise_sigma,
            self.cfg.win_bonus,
            self.cfg.loss_penalty,
            &mut self.noise_rng,
        )
    }
}
