//! The connected 2-core and the auxiliary graph G* with its matching M.
//!
//! G* lives on C₂(G) ∖ (CLOSE ∪ BAD), relabelled `0..k` in ascending order of
//! the original labels. Its edges are the induced edges of G plus a matching
//! M that pairs, in label order, the vertices of G* adjacent to a degree-1
//! vertex outside CLOSE. Each M-edge {u, v} stands for the 3-path
//! (u, u′, v′, v) through the two pendant vertices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analytics::solve_two_core_x;
use crate::classifier::Classification;
use crate::graph::{Graph, VertexSet};
use crate::matching::Matching;

/// 2-core of the unique largest component; empty if the largest component
/// is not unique.
pub fn connected_two_core(g: &Graph) -> VertexSet {
    let components = g.components();
    match components.as_slice() {
        [] => VertexSet::empty(g.n()),
        [first, second, ..] if first.len() == second.len() => VertexSet::empty(g.n()),
        [first, ..] => g.k_core_within(2, &VertexSet::from_vertices(g.n(), first.iter().copied())),
    }
}

/// Structural facts that hold in the asymptotic regime but may fail at small
/// c. They are recorded, never assumed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionViolations {
    /// Eligible vertices (G labels) with more than one pendant neighbour
    /// outside CLOSE; dropped from M.
    pub ambiguous_partner: Vec<usize>,
    /// The largest eligible vertex when the eligible set has odd size.
    pub unpaired: Option<usize>,
    /// Non-M edges of G* joining two vertices of V(M).
    pub matched_adjacent: usize,
    /// G* vertices (G* labels) with fewer than two neighbours in V(G*) ∖ V(M).
    pub degree_floor: Vec<usize>,
    /// Lifted pairs that are not vertex-disjoint from V(M) or from each other.
    pub lift_conflicts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub c2_vertices: VertexSet,
    pub gstar: Graph,
    /// G* label → G label, strictly increasing.
    pub to_g: Vec<usize>,
    /// M over G* labels.
    pub m: Matching,
    /// M′ over G labels, in the order of `m.edges()`.
    pub m_prime: Vec<(usize, usize)>,
    pub v1_star: VertexSet,
    /// For every v ∈ V(M) (G label), its pendant neighbour v′ ∈ V₁.
    pub partner: BTreeMap<usize, usize>,
    /// SMALL ∩ V(G*), in G* labels.
    pub small_gstar: VertexSet,
    pub violations: ReductionViolations,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionSummary {
    pub c2: usize,
    pub gstar_vertices: usize,
    pub gstar_edges: usize,
    pub m_edges: usize,
    pub ambiguous_partner: usize,
    pub unpaired: usize,
    pub matched_adjacent: usize,
    pub degree_floor: usize,
    pub lift_conflicts: usize,
}

impl Reduction {
    /// G* label of a G vertex, if it survived the reduction.
    pub fn gstar_label(&self, v: usize) -> Option<usize> {
        self.to_g.binary_search(&v).ok()
    }

    pub fn summary(&self) -> ReductionSummary {
        ReductionSummary {
            c2: self.c2_vertices.len(),
            gstar_vertices: self.gstar.n(),
            gstar_edges: self.gstar.m(),
            m_edges: self.m.len(),
            ambiguous_partner: self.violations.ambiguous_partner.len(),
            unpaired: usize::from(self.violations.unpaired.is_some()),
            matched_adjacent: self.violations.matched_adjacent,
            degree_floor: self.violations.degree_floor.len(),
            lift_conflicts: self.violations.lift_conflicts,
        }
    }

    /// Sidecar for the G* edge list: one `gstar_label g_label` line per vertex.
    pub fn label_map(&self) -> String {
        let mut out = String::new();
        for (i, &v) in self.to_g.iter().enumerate() {
            writeln!(out, "{i} {v}").unwrap();
        }
        out
    }
}

pub fn build_gstar(g: &Graph, cls: &Classification, c2: &VertexSet) -> Reduction {
    let n = g.n();
    let vstar = c2.difference(&cls.close).difference(&cls.bad);
    let (induced, to_g) = g.induced(&vstar);
    let to_gstar = |v: usize| to_g.binary_search(&v).ok();
    let pendants = cls.v1.difference(&cls.close);

    let mut violations = ReductionViolations::default();
    // N_G(V₁ ∖ CLOSE) ∩ V(G*), ascending by G label.
    let candidates = VertexSet::from_vertices(
        n,
        pendants
            .iter()
            .map(|v| g.neighbors(v)[0])
            .filter(|&u| vstar.contains(u) && !pendants.contains(u)),
    );
    let mut eligible = Vec::new();
    let mut pendant_of = BTreeMap::new();
    for s in candidates.iter() {
        let mut own = g
            .neighbors(s)
            .iter()
            .copied()
            .filter(|&u| pendants.contains(u));
        match (own.next(), own.next()) {
            (Some(leaf), None) => {
                eligible.push(s);
                pendant_of.insert(s, leaf);
            }
            _ => violations.ambiguous_partner.push(s),
        }
    }
    if eligible.len() % 2 == 1 {
        violations.unpaired = eligible.pop();
    }

    let mut m_edges = Vec::with_capacity(eligible.len() / 2);
    let mut partner = BTreeMap::new();
    for pair in eligible.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        m_edges.push((to_gstar(a).unwrap(), to_gstar(b).unwrap()));
        partner.insert(a, pendant_of[&a]);
        partner.insert(b, pendant_of[&b]);
    }
    let k = to_g.len();
    let m =
        Matching::new(k, &m_edges).expect("consecutive pairs of distinct vertices form a matching");

    violations.matched_adjacent = induced
        .edges()
        .filter(|&(u, v)| m.is_matched(u) && m.is_matched(v) && !m.contains_edge(u, v))
        .count();

    let mut all_edges: Vec<(usize, usize)> = induced.edges().collect();
    all_edges.extend(m.edges().iter().copied());
    let gstar = Graph::from_edges(k, &all_edges).expect("G* edges are in range");

    violations.degree_floor = (0..k)
        .filter(|&v| {
            gstar
                .neighbors(v)
                .iter()
                .filter(|&&u| !m.is_matched(u))
                .count()
                < 2
        })
        .collect();

    let small_gstar = VertexSet::from_vertices(k, (0..k).filter(|&i| cls.small.contains(to_g[i])));

    let mut reduction = Reduction {
        c2_vertices: c2.clone(),
        gstar,
        to_g,
        m,
        m_prime: Vec::new(),
        v1_star: VertexSet::empty(n),
        partner,
        small_gstar,
        violations,
    };
    let (m_prime, conflicts) = lift_matching_checked(&reduction);
    reduction.v1_star = VertexSet::from_vertices(n, reduction.partner.values().copied());
    reduction.m_prime = m_prime;
    reduction.violations.lift_conflicts = conflicts;
    reduction
}

fn lift_matching_checked(r: &Reduction) -> (Vec<(usize, usize)>, usize) {
    let n = r.c2_vertices.universe();
    let mut used = VertexSet::empty(n);
    let mut conflicts = 0;
    let lifted: Vec<_> =
        r.m.edges()
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (r.to_g[a], r.to_g[b]);
                let (pa, pb) = (r.partner[&a], r.partner[&b]);
                for p in [pa, pb] {
                    if !used.insert(p) || r.gstar_label(p).is_some_and(|i| r.m.is_matched(i)) {
                        conflicts += 1;
                    }
                }
                (pa, pb)
            })
            .collect();
    (lifted, conflicts)
}

/// M′ = { {u′, v′} : {u, v} ∈ M }, in G labels.
pub fn lift_matching(r: &Reduction) -> Vec<(usize, usize)> {
    lift_matching_checked(r).0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeBound {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    /// `None` when the bound does not apply (for example an empty 2-core).
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionSizeReport {
    pub bounds: Vec<SizeBound>,
}

impl ReductionSizeReport {
    pub fn get(&self, name: &str) -> Option<&SizeBound> {
        self.bounds.iter().find(|b| b.name == name)
    }
}

/// Compares |V(G*)|, |V(M)| and |C₂| with their predicted sizes.
///
/// `two_core_tolerance` is the allowed relative deviation of |C₂| from
/// (1 − x)(1 − x/c)·n.
pub fn check_reduction_sizes(
    r: &Reduction,
    c: f64,
    n: usize,
    epsilon: f64,
    two_core_tolerance: f64,
) -> ReductionSizeReport {
    let nf = n as f64;
    let q = c * (-c).exp();
    let gstar_bound = (1.0 - (1.0 + epsilon / 4.0) * q) * nf;
    let m_bound = (1.0 - epsilon / 4.0) * q * nf;
    let gstar_size = r.gstar.n() as f64;
    let m_size = 2.0 * r.m.len() as f64;
    let c2_size = r.c2_vertices.len() as f64;
    let two_core = match solve_two_core_x(c) {
        Ok(x) if !r.c2_vertices.is_empty() => {
            let predicted = (1.0 - x) * (1.0 - x / c) * nf;
            SizeBound {
                name: "two_core".into(),
                measured: c2_size,
                bound: predicted,
                passed: Some((c2_size - predicted).abs() <= two_core_tolerance * predicted),
            }
        }
        _ => SizeBound {
            name: "two_core".into(),
            measured: c2_size,
            bound: f64::NAN,
            passed: None,
        },
    };
    ReductionSizeReport {
        bounds: vec![
            SizeBound {
                name: "gstar_vertices".into(),
                measured: gstar_size,
                bound: gstar_bound,
                passed: Some(gstar_size >= gstar_bound),
            },
            SizeBound {
                name: "matching_vertices".into(),
                measured: m_size,
                bound: m_bound,
                passed: Some(m_size >= m_bound),
            },
            two_core,
        ],
    }
}
