//! The sparse random subgraph Γ₀ ⊆ G* and the M-expander test.
//!
//! A graph Γ ⊇ M on V(G*) is an M-expander when every U with |U| ≤ |V(G*)|/4
//! has |N_Γ(U) ∖ V(M)| ≥ 2|U|.

use std::collections::{HashSet, VecDeque};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matching::Matching;
use crate::rng::{stream_rng, Stream};

/// Largest graph accepted by the exhaustive expansion check.
pub const EXACT_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma {
    pub graph: Graph,
    pub out_degree_cap: usize,
    pub seed: u64,
    /// Vertices with fewer than two edges into V(G*) ∖ V(M) available.
    pub floor_violations: Vec<usize>,
}

/// Default per-vertex edge budget: `max(3, ⌊c/1000⌋)`.
pub fn default_cap(c: f64) -> usize {
    ((c / 1000.0).floor() as usize).max(3)
}

/// Every vertex v contributes a set E_v of edges into V(G*) ∖ V(M): all of
/// them when v is SMALL, otherwise `cap` of them chosen uniformly without
/// replacement. Γ₀ is M together with the union of the E_v.
pub fn build_gamma0(
    gstar: &Graph,
    m: &Matching,
    small: &VertexSet,
    cap: usize,
    seed: u64,
) -> Result<Gamma> {
    if cap < 2 {
        return Err(Error::Parameter("gamma cap must be at least 2".into()));
    }
    let mut rng = stream_rng(seed, Stream::GammaSelection);
    let mut edges: Vec<(usize, usize)> = m.edges().to_vec();
    let mut floor_violations = Vec::new();
    for v in 0..gstar.n() {
        let available: Vec<usize> = gstar
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !m.is_matched(u))
            .collect();
        if available.len() < 2 {
            floor_violations.push(v);
        }
        if small.contains(v) || available.len() <= cap {
            edges.extend(available.iter().map(|&u| (v, u)));
        } else {
            edges.extend(
                sample(&mut rng, available.len(), cap)
                    .into_iter()
                    .map(|i| (v, available[i])),
            );
        }
    }
    Ok(Gamma {
        graph: Graph::from_edges(gstar.n(), &edges)?,
        out_degree_cap: cap,
        seed,
        floor_violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionMode {
    Exact,
    Sampled { samples_per_size: usize, seed: u64 },
}

impl ExpansionMode {
    pub fn sampled(seed: u64) -> Self {
        Self::Sampled {
            samples_per_size: 200,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionVerdict {
    /// No violating set found. `exhaustive` is false for sampled checks,
    /// where the property was only not falsified.
    Expander { exhaustive: bool },
    Violation {
        set: Vec<usize>,
        outside_neighbours: usize,
    },
    /// Γ does not contain M.
    MissingMatching,
}

impl ExpansionVerdict {
    pub fn is_expander(&self) -> bool {
        matches!(self, Self::Expander { .. })
    }
}

/// |N_Γ(U) ∖ V(M)| for an explicit vertex list.
pub fn outside_neighbourhood(gamma: &Graph, m: &Matching, set: &[usize]) -> usize {
    let members: HashSet<usize> = set.iter().copied().collect();
    let mut seen = HashSet::new();
    for &v in set {
        for &u in gamma.neighbors(v) {
            if !members.contains(&u) && !m.is_matched(u) {
                seen.insert(u);
            }
        }
    }
    seen.len()
}

fn violation(gamma: &Graph, m: &Matching, set: &[usize]) -> Option<ExpansionVerdict> {
    let outside = outside_neighbourhood(gamma, m, set);
    (outside < 2 * set.len()).then(|| ExpansionVerdict::Violation {
        set: set.to_vec(),
        outside_neighbours: outside,
    })
}

pub fn is_m_expander(gamma: &Graph, m: &Matching, mode: ExpansionMode) -> Result<ExpansionVerdict> {
    let n = gamma.n();
    if m.edges().iter().any(|&(u, v)| !gamma.has_edge(u, v)) {
        return Ok(ExpansionVerdict::MissingMatching);
    }
    let max_size = n / 4;
    if max_size == 0 {
        return Ok(ExpansionVerdict::Expander { exhaustive: true });
    }
    // Singletons first; they are the cheapest and most common failures.
    for v in 0..n {
        if let Some(found) = violation(gamma, m, &[v]) {
            return Ok(found);
        }
    }
    match mode {
        ExpansionMode::Exact => exact(gamma, m, max_size),
        ExpansionMode::Sampled {
            samples_per_size,
            seed,
        } => Ok(sampled(gamma, m, max_size, samples_per_size, seed)),
    }
}

fn exact(gamma: &Graph, m: &Matching, max_size: usize) -> Result<ExpansionVerdict> {
    let n = gamma.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXACT_LIMIT,
        });
    }
    let neighbourhood: Vec<u32> = (0..n)
        .map(|v| gamma.neighbors(v).iter().fold(0u32, |acc, &u| acc | 1 << u))
        .collect();
    let matched: u32 = (0..n)
        .filter(|&v| m.is_matched(v))
        .fold(0, |acc, v| acc | 1 << v);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for size in 1..=max_size {
        // Gosper's hack enumerates all n-bit masks with `size` bits set.
        let mut set: u32 = (1u32 << size) - 1;
        while set <= full {
            let mut reach = 0u32;
            let mut bits = set;
            while bits != 0 {
                reach |= neighbourhood[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            let outside = (reach & !set & !matched).count_ones() as usize;
            if outside < 2 * size {
                let members: Vec<usize> = (0..n).filter(|&v| set >> v & 1 == 1).collect();
                return Ok(ExpansionVerdict::Violation {
                    set: members,
                    outside_neighbours: outside,
                });
            }
            let low = set & set.wrapping_neg();
            let ripple = set + low;
            if ripple == 0 {
                break;
            }
            set = (((ripple ^ set) >> 2) / low) | ripple;
        }
    }
    Ok(ExpansionVerdict::Expander { exhaustive: true })
}

/// Grows a BFS ball from `root` until it holds `size` vertices.
fn ball(gamma: &Graph, root: usize, size: usize) -> Vec<usize> {
    let mut members = vec![root];
    let mut seen = HashSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in gamma.neighbors(x) {
            if members.len() == size {
                return members;
            }
            if seen.insert(y) {
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    members
}

fn sampled(
    gamma: &Graph,
    m: &Matching,
    max_size: usize,
    samples: usize,
    seed: u64,
) -> ExpansionVerdict {
    let n = gamma.n();
    let mut rng = stream_rng(seed, Stream::ExpansionCheck);
    let mut sizes = Vec::new();
    let mut s = 1;
    while s <= max_size {
        sizes.push(s);
        s *= 2;
    }
    if sizes.last() != Some(&max_size) {
        sizes.push(max_size);
    }
    // Adversarial roots: the lowest-degree vertices.
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (gamma.deg(v), v));
    let roots = &by_degree[..by_degree.len().min(16)];

    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for &size in &sizes {
        for &root in roots {
            candidates.push(ball(gamma, root, size));
        }
        for _ in 0..samples {
            candidates.push(sample(&mut rng, n, size).into_vec());
        }
        // Random connected clusters.
        for _ in 0..samples.min(32) {
            candidates.push(ball(gamma, rng.random_range(0..n), size));
        }
    }
    candidates
        .par_iter()
        .find_map_first(|set| violation(gamma, m, set))
        .unwrap_or(ExpansionVerdict::Expander { exhaustive: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_with_uncapped_degrees_is_everything() {
        let g = Graph::complete(6);
        let m = Matching::new(6, &[(0, 1)]).unwrap();
        let gamma = build_gamma0(&g, &m, &VertexSet::empty(6), 10, 1).unwrap();
        // Every edge touching V(G*) ∖ V(M) plus M; only {0,1} was never eligible besides M itself.
        assert_eq!(gamma.graph, g);
    }

    #[test]
    fn gamma_on_cycle() {
        let c8 = Graph::cycle(8);
        let gamma = build_gamma0(&c8, &Matching::empty(8), &VertexSet::empty(8), 2, 9).unwrap();
        assert_eq!(gamma.graph, c8);
        assert!(gamma.floor_violations.is_empty());
        assert!(build_gamma0(&c8, &Matching::empty(8), &VertexSet::empty(8), 1, 9).is_err());
    }

    #[test]
    fn gamma_budget_and_determinism() {
        let g = crate::graph::sample_gnp(&crate::graph::SampleParams::new(2000, 10.0, 3)).unwrap();
        let m = Matching::new(2000, &[(0, 1), (2, 3)]).unwrap();
        let a = build_gamma0(&g, &m, &VertexSet::empty(2000), 3, 5).unwrap();
        let b = build_gamma0(&g, &m, &VertexSet::empty(2000), 3, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.graph.m() <= 3 * 2000 + 1000);
        assert!(m.edges().iter().all(|&(u, v)| a.graph.has_edge(u, v)));
    }

    #[test]
    fn exact_examples() {
        let k6 = Graph::complete(6);
        assert_eq!(
            is_m_expander(&k6, &Matching::empty(6), ExpansionMode::Exact).unwrap(),
            ExpansionVerdict::Expander { exhaustive: true }
        );
        let c8 = Graph::cycle(8);
        match is_m_expander(&c8, &Matching::empty(8), ExpansionMode::Exact).unwrap() {
            ExpansionVerdict::Violation {
                set,
                outside_neighbours,
            } => {
                assert_eq!(set.len(), 2);
                assert_eq!(outside_neighbours, 2);
                assert!(c8.has_edge(set[0], set[1]));
            }
            other => panic!("unexpected {other:?}"),
        }
        let mut edges: Vec<_> = Graph::complete(5).edges().collect();
        edges.push((0, 1));
        let isolated = Graph::from_edges(6, &edges).unwrap();
        assert!(matches!(
            is_m_expander(&isolated, &Matching::empty(6), ExpansionMode::Exact).unwrap(),
            ExpansionVerdict::Violation { ref set, .. } if set == &vec![5]
        ));
    }

    #[test]
    fn exact_rejects_large_inputs() {
        let g = Graph::complete(30);
        assert!(matches!(
            is_m_expander(&g, &Matching::empty(30), ExpansionMode::Exact),
            Err(Error::TooLarge { .. })
        ));
        assert!(
            is_m_expander(&g, &Matching::empty(30), ExpansionMode::sampled(1))
                .unwrap()
                .is_expander()
        );
    }

    #[test]
    fn missing_matching_edge() {
        let g = Graph::cycle(6);
        let m = Matching::new(6, &[(0, 3)]).unwrap();
        assert_eq!(
            is_m_expander(&g, &m, ExpansionMode::Exact).unwrap(),
            ExpansionVerdict::MissingMatching
        );
    }

    #[test]
    fn sampled_never_contradicts_exact() {
        for seed in 0..60 {
            let n = 12 + (seed as usize % 9);
            let g =
                crate::graph::sample_gnp(&crate::graph::SampleParams::new(n, 5.0, seed)).unwrap();
            let exact = is_m_expander(&g, &Matching::empty(n), ExpansionMode::Exact).unwrap();
            let sampled =
                is_m_expander(&g, &Matching::empty(n), ExpansionMode::sampled(seed)).unwrap();
            match sampled {
                ExpansionVerdict::Violation {
                    set,
                    outside_neighbours,
                } => {
                    assert!(!exact.is_expander());
                    assert_eq!(
                        outside_neighbourhood(&g, &Matching::empty(n), &set),
                        outside_neighbours
                    );
                    assert!(outside_neighbours < 2 * set.len() && set.len() <= n / 4);
                }
                ExpansionVerdict::Expander { exhaustive } => assert!(!exhaustive),
                ExpansionVerdict::MissingMatching => unreachable!(),
            }
        }
    }
}
