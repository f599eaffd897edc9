//! Exact minimum span of L(d,1)-labelings by backtracking.
//!
//! `lambda_exact` solves the decision problem "is there a labeling with labels
//! in `[0, lam]`?" for increasing `lam`, starting from the degree lower bound.
//! Each decision is a DSATUR-style search: the next vertex is the unlabeled one
//! with the most distinct forbidden labels (ties broken by degree, then by
//! lowest index), and labels are tried in ascending order. Forbidden labels are
//! kept as per-vertex bitmasks backed by counters so that assignments can be
//! undone on backtrack.

use std::cmp::Reverse;

use log::info;
use thiserror::Error;

use crate::graph::Graph;
use crate::labeling::{lemma1_lower_bound, span_of, verify_labeling, Labeling};

/// Largest label the bitmask representation supports.
pub const MAX_LABEL: u32 = 127;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("separation d must be at least 1")]
    ZeroSeparation,
    #[error("label bound {0} exceeds the supported maximum {MAX_LABEL}")]
    AlphabetTooLarge(u32),
    #[error("solver produced an invalid witness")]
    InvalidWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum number of label assignments tried, summed over all decisions.
    pub budget: u64,
    /// Restrict the first branching vertex to labels `<= ceil(lam / 2)`.
    /// Sound because `x -> lam - x` maps valid labelings to valid labelings.
    pub reflection_symmetry: bool,
    /// Log progress every this many nodes; 0 disables.
    pub progress_interval: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            budget: DEFAULT_BUDGET,
            reflection_symmetry: false,
            progress_interval: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Labelable(Labeling),
    Infeasible,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOutcome {
    pub decision: Decision,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// The exact minimum span, or the best proven lower bound when `timed_out`.
    pub lambda: u32,
    /// A valid labeling. Its span equals `lambda` unless `timed_out`, in which
    /// case it equals `upper_bound`.
    pub witness: Labeling,
    pub nodes_explored: u64,
    pub timed_out: bool,
    pub lower_bound: u32,
    pub upper_bound: u32,
}

struct BudgetExhausted;

struct Search<'a> {
    graph: &'a Graph,
    second: Vec<Vec<usize>>,
    d: u32,
    lam: u32,
    full: u128,
    labels: Vec<Option<u32>>,
    counts: Vec<Vec<u16>>,
    forbidden: Vec<u128>,
    unlabeled: usize,
    nodes: u64,
    node_limit: u64,
    options: &'a SolverOptions,
}

impl<'a> Search<'a> {
    fn new(graph: &'a Graph, second: Vec<Vec<usize>>, d: u32, lam: u32, nodes: u64, options: &'a SolverOptions) -> Self {
        let n = graph.vertex_count();
        Search {
            graph,
            second,
            d,
            lam,
            full: if lam == 127 { u128::MAX } else { (1u128 << (lam + 1)) - 1 },
            labels: vec![None; n],
            counts: vec![vec![0; lam as usize + 1]; n],
            forbidden: vec![0; n],
            unlabeled: n,
            nodes,
            node_limit: options.budget,
            options,
        }
    }

    fn forbid(&mut self, w: usize, x: u32, delta: i16) -> bool {
        let c = &mut self.counts[w][x as usize];
        *c = c.wrapping_add_signed(delta);
        if *c == 0 {
            self.forbidden[w] &= !(1u128 << x);
        } else {
            self.forbidden[w] |= 1u128 << x;
        }
        self.labels[w].is_none() && self.forbidden[w] & self.full == self.full
    }

    /// Applies (`delta = 1`) or retracts (`delta = -1`) the constraints
    /// induced by labeling `v` with `x`. Returns true if some unlabeled vertex
    /// is left with no allowed label.
    fn propagate(&mut self, v: usize, x: u32, delta: i16) -> bool {
        let mut wiped = false;
        let lo = x.saturating_sub(self.d - 1);
        let hi = (x + self.d - 1).min(self.lam);
        for k in 0..self.graph.degree(v) {
            let w = self.graph.neighbors(v)[k];
            for y in lo..=hi {
                wiped |= self.forbid(w, y, delta);
            }
        }
        for k in 0..self.second[v].len() {
            let w = self.second[v][k];
            wiped |= self.forbid(w, x, delta);
        }
        wiped
    }

    fn select(&self) -> Option<usize> {
        (0..self.labels.len())
            .filter(|&v| self.labels[v].is_none())
            .max_by_key(|&v| {
                (
                    (self.forbidden[v] & self.full).count_ones(),
                    self.graph.degree(v),
                    Reverse(v),
                )
            })
    }

    fn run(&mut self, depth: usize) -> Result<bool, BudgetExhausted> {
        let Some(v) = self.select() else {
            return Ok(true);
        };
        let mut allowed = self.full & !self.forbidden[v];
        if depth == 0 && self.options.reflection_symmetry {
            let half = self.lam.div_ceil(2);
            allowed &= (1u128 << (half + 1)) - 1;
        }
        while allowed != 0 {
            let x = allowed.trailing_zeros();
            allowed &= allowed - 1;
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return Err(BudgetExhausted);
            }
            if self.options.progress_interval > 0 && self.nodes.is_multiple_of(self.options.progress_interval) {
                info!(
                    "lam {}: {} nodes, {} vertices unlabeled",
                    self.lam, self.nodes, self.unlabeled
                );
            }
            self.labels[v] = Some(x);
            self.unlabeled -= 1;
            let wiped = self.propagate(v, x, 1);
            if !wiped && self.run(depth + 1)? {
                return Ok(true);
            }
            self.propagate(v, x, -1);
            self.labels[v] = None;
            self.unlabeled += 1;
        }
        Ok(false)
    }
}

fn second_neighborhoods(graph: &Graph) -> Vec<Vec<usize>> {
    let mut second = vec![Vec::new(); graph.vertex_count()];
    for (u, v) in graph.distance_two_pairs() {
        second[u].push(v);
        second[v].push(u);
    }
    second
}

fn decide(
    graph: &Graph,
    second: Vec<Vec<usize>>,
    d: u32,
    lam: u32,
    nodes_before: u64,
    options: &SolverOptions,
) -> DecisionOutcome {
    let mut search = Search::new(graph, second, d, lam, nodes_before, options);
    let decision = match search.run(0) {
        Ok(true) => Decision::Labelable(Labeling {
            d,
            labels: search.labels.iter().map(|x| x.unwrap_or(0)).collect(),
        }),
        Ok(false) => Decision::Infeasible,
        Err(BudgetExhausted) => Decision::BudgetExceeded,
    };
    DecisionOutcome {
        decision,
        nodes: search.nodes.min(options.budget) - nodes_before,
    }
}

fn check_args(d: u32, lam: u32) -> Result<(), SolverError> {
    if d == 0 {
        return Err(SolverError::ZeroSeparation);
    }
    if lam > MAX_LABEL {
        return Err(SolverError::AlphabetTooLarge(lam));
    }
    Ok(())
}

/// Decides whether `graph` has an L(d,1)-labeling with labels in `[0, lam]`.
pub fn is_labelable(graph: &Graph, d: u32, lam: u32, options: &SolverOptions) -> Result<DecisionOutcome, SolverError> {
    check_args(d, lam)?;
    Ok(decide(graph, second_neighborhoods(graph), d, lam, 0, options))
}

/// First-fit labeling in vertex order; always valid, rarely optimal.
pub fn greedy_labeling(graph: &Graph, d: u32) -> Labeling {
    let second = second_neighborhoods(graph);
    let mut labels: Vec<Option<u32>> = vec![None; graph.vertex_count()];
    for v in 0..graph.vertex_count() {
        let fits = |x: u32| {
            graph
                .neighbors(v)
                .iter()
                .filter_map(|&w| labels[w])
                .all(|y| x.abs_diff(y) >= d)
                && second[v].iter().filter_map(|&w| labels[w]).all(|y| x != y)
        };
        labels[v] = (0..).find(|&x| fits(x));
    }
    Labeling {
        d,
        labels: labels.into_iter().map(|x| x.unwrap_or(0)).collect(),
    }
}

/// Computes the minimum span of an L(d,1)-labeling of `graph`.
pub fn lambda_exact(graph: &Graph, d: u32, options: &SolverOptions) -> Result<SolveResult, SolverError> {
    check_args(d, 0)?;
    let greedy = greedy_labeling(graph, d);
    let upper = span_of(&greedy.labels);
    let mut lower = lemma1_lower_bound(graph, d).unwrap_or(0);
    if graph.edge_count() > 0 {
        lower = lower.max(d);
    }
    let lower_bound = lower;
    let second = second_neighborhoods(graph);
    let mut nodes = 0u64;
    let mut lam = lower;
    while lam < upper {
        check_args(d, lam)?;
        let outcome = decide(graph, second.clone(), d, lam, nodes, options);
        nodes += outcome.nodes;
        match outcome.decision {
            Decision::Labelable(witness) => return finish(graph, lam, witness, nodes, lower_bound),
            Decision::Infeasible => lam += 1,
            Decision::BudgetExceeded => {
                return Ok(SolveResult {
                    lambda: lam,
                    witness: greedy,
                    nodes_explored: nodes,
                    timed_out: true,
                    lower_bound: lam,
                    upper_bound: upper,
                })
            }
        }
    }
    finish(graph, upper, greedy, nodes, lower_bound)
}

fn finish(graph: &Graph, lambda: u32, witness: Labeling, nodes: u64, lower: u32) -> Result<SolveResult, SolverError> {
    let report = verify_labeling(graph, &witness).map_err(|_| SolverError::InvalidWitness)?;
    if !report.valid || report.span != lambda {
        return Err(SolverError::InvalidWitness);
    }
    Ok(SolveResult {
        lambda,
        witness,
        nodes_explored: nodes,
        timed_out: false,
        lower_bound: lower,
        upper_bound: lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path};

    /// Exhaustive search over all (lam+1)^n assignments.
    fn brute_force_exists(graph: &Graph, d: u32, lam: u32) -> bool {
        let n = graph.vertex_count();
        let base = lam as usize + 1;
        (0..base.pow(n as u32)).any(|mut code| {
            let labels: Vec<u32> = (0..n)
                .map(|_| {
                    let x = (code % base) as u32;
                    code /= base;
                    x
                })
                .collect();
            verify_labeling(graph, &Labeling { d, labels }).unwrap().valid
        })
    }

    fn decision(graph: &Graph, d: u32, lam: u32) -> Decision {
        is_labelable(graph, d, lam, &SolverOptions::default())
            .unwrap()
            .decision
    }

    #[test]
    fn pentagon_decisions_match_brute_force() {
        let c5 = cycle(5).unwrap();
        assert!(brute_force_exists(&c5, 2, 4));
        assert!(!brute_force_exists(&c5, 2, 3));
        match decision(&c5, 2, 4) {
            Decision::Labelable(lab) => assert!(verify_labeling(&c5, &lab).unwrap().valid),
            other => panic!("expected a labeling, got {other:?}"),
        }
        assert_eq!(decision(&c5, 2, 3), Decision::Infeasible);
    }

    #[test]
    fn single_edge() {
        let k2 = path(2).unwrap();
        assert_eq!(decision(&k2, 3, 2), Decision::Infeasible);
        assert!(matches!(decision(&k2, 3, 3), Decision::Labelable(_)));
    }

    #[test]
    fn small_cycles_and_paths() {
        let opts = SolverOptions::default();
        assert!(brute_force_exists(&cycle(7).unwrap(), 2, 4));
        assert!(!brute_force_exists(&cycle(7).unwrap(), 2, 3));
        let r = lambda_exact(&cycle(7).unwrap(), 2, &opts).unwrap();
        assert_eq!(r.lambda, 4);
        assert!(!r.timed_out);
        assert_eq!(r.witness.span(), 4);

        let r = lambda_exact(&path(1).unwrap(), 2, &opts).unwrap();
        assert_eq!(r.lambda, 0);
        assert_eq!(r.witness.labels, vec![0]);
    }

    #[test]
    fn lambda_matches_brute_force_on_tiny_graphs() {
        let opts = SolverOptions::default();
        let graphs = [
            cycle(3).unwrap(),
            cycle(4).unwrap(),
            cycle(6).unwrap(),
            path(5).unwrap(),
            Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap(),
            Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap(),
        ];
        for g in &graphs {
            for d in 1..=3 {
                let r = lambda_exact(g, d, &opts).unwrap();
                let brute = (0..).find(|&lam| brute_force_exists(g, d, lam)).unwrap();
                assert_eq!(r.lambda, brute, "{g:?} d={d}");
            }
        }
    }

    #[test]
    fn reflection_flag_preserves_answers() {
        let with = SolverOptions {
            reflection_symmetry: true,
            ..SolverOptions::default()
        };
        for n in 3..9 {
            let g = cycle(n).unwrap();
            for d in 1..=3 {
                let plain = lambda_exact(&g, d, &SolverOptions::default()).unwrap();
                let halved = lambda_exact(&g, d, &with).unwrap();
                assert_eq!(plain.lambda, halved.lambda);
            }
        }
    }

    #[test]
    fn budget_exhaustion_reports_bracket() {
        let g = cycle(11).unwrap();
        let opts = SolverOptions {
            budget: 1,
            ..SolverOptions::default()
        };
        let r = lambda_exact(&g, 3, &opts).unwrap();
        if r.timed_out {
            assert!(r.lower_bound <= r.upper_bound);
            assert_eq!(r.witness.span(), r.upper_bound);
            assert!(r.nodes_explored <= 1);
        }
        assert_eq!(
            is_labelable(&g, 3, 7, &opts).unwrap().decision,
            Decision::BudgetExceeded
        );
    }

    #[test]
    fn argument_errors() {
        let g = cycle(4).unwrap();
        let opts = SolverOptions::default();
        assert_eq!(is_labelable(&g, 0, 3, &opts).unwrap_err(), SolverError::ZeroSeparation);
        assert_eq!(
            is_labelable(&g, 1, 200, &opts).unwrap_err(),
            SolverError::AlphabetTooLarge(200)
        );
    }

    #[test]
    fn greedy_is_valid() {
        for n in 3..12 {
            let g = cycle(n).unwrap();
            for d in 1..4 {
                let lab = greedy_labeling(&g, d);
                assert!(verify_labeling(&g, &lab).unwrap().valid);
            }
        }
    }
}
