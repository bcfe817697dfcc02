//! Vertex classes used to build the auxiliary graph: V₀, V₁, SMALL, LARGE,
//! CLOSE and the fixed-point sets X, Y, BAD.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng::{stream_rng, Stream};

/// Degree and distance thresholds. The asymptotic values (c/1000, 20c, 4)
/// only make sense for huge c, so `for_c` scales them to desk-scale c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A vertex is SMALL if it has fewer than this many neighbours outside N(V₁).
    pub small_deg: usize,
    /// A vertex is LARGE if its degree exceeds this.
    pub large_deg: usize,
    pub close_radius: usize,
}

impl Thresholds {
    /// `small_deg = max(2, ⌊c/1000⌋)`, `large_deg = ⌈20c⌉`, `close_radius = 4`.
    pub fn for_c(c: f64) -> Self {
        Self {
            small_deg: ((c / 1000.0).floor() as usize).max(2),
            large_deg: (20.0 * c).ceil() as usize,
            close_radius: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.small_deg < 2 {
            return Err(Error::Parameter("small_deg must be at least 2".into()));
        }
        if self.close_radius < 1 {
            return Err(Error::Parameter("close_radius must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicClasses {
    pub v0: VertexSet,
    pub v1: VertexSet,
    pub large: VertexSet,
    /// N_G(V₁): vertices outside V₁ adjacent to a degree-1 vertex.
    pub v1_neighbours: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub v0: VertexSet,
    pub v1: VertexSet,
    pub small: VertexSet,
    pub large: VertexSet,
    pub close: VertexSet,
    pub x: VertexSet,
    pub y: VertexSet,
    pub bad: VertexSet,
    pub v1_neighbours: VertexSet,
}

/// Per-class vertex counts, with optional membership lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub n: usize,
    pub v0: usize,
    pub v1: usize,
    pub small: usize,
    pub large: usize,
    pub close: usize,
    pub x: usize,
    pub y: usize,
    pub bad: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub members: Option<ClassMembers>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMembers {
    pub v0: Vec<usize>,
    pub v1: Vec<usize>,
    pub small: Vec<usize>,
    pub large: Vec<usize>,
    pub close: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub bad: Vec<usize>,
}

impl Classification {
    pub fn summary(&self, with_members: bool) -> ClassificationSummary {
        ClassificationSummary {
            n: self.v0.universe(),
            v0: self.v0.len(),
            v1: self.v1.len(),
            small: self.small.len(),
            large: self.large.len(),
            close: self.close.len(),
            x: self.x.len(),
            y: self.y.len(),
            bad: self.bad.len(),
            members: with_members.then(|| ClassMembers {
                v0: self.v0.to_vec(),
                v1: self.v1.to_vec(),
                small: self.small.to_vec(),
                large: self.large.to_vec(),
                close: self.close.to_vec(),
                x: self.x.to_vec(),
                y: self.y.to_vec(),
                bad: self.bad.to_vec(),
            }),
        }
    }
}

pub fn classify_basic(g: &Graph, t: &Thresholds) -> BasicClasses {
    let n = g.n();
    let v0 = VertexSet::from_vertices(n, (0..n).filter(|&v| g.deg(v) == 0));
    let v1 = VertexSet::from_vertices(n, (0..n).filter(|&v| g.deg(v) == 1));
    let large = VertexSet::from_vertices(n, (0..n).filter(|&v| g.deg(v) > t.large_deg));
    let v1_neighbours = VertexSet::from_vertices(
        n,
        v1.iter()
            .map(|v| g.neighbors(v)[0])
            .filter(|&u| !v1.contains(u)),
    );
    BasicClasses {
        v0,
        v1,
        large,
        v1_neighbours,
    }
}

/// SMALL = { v : v has fewer than `small_deg` neighbours outside N(V₁) }.
pub fn compute_small(g: &Graph, t: &Thresholds, v1_neighbours: &VertexSet) -> VertexSet {
    let n = g.n();
    VertexSet::from_vertices(
        n,
        (0..n).filter(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| !v1_neighbours.contains(u))
                .count()
                < t.small_deg
        }),
    )
}

/// Searches the ball of radius `radius` around `v` for another member of
/// `small` or for a cycle through `v` of length at most `radius`.
fn is_close(g: &Graph, v: usize, radius: usize, small: &VertexSet) -> bool {
    // (vertex, distance, first hop from v)
    let mut seen: std::collections::HashMap<usize, (usize, usize)> =
        std::collections::HashMap::new();
    seen.insert(v, (0, v));
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let (dx, bx) = seen[&x];
        if dx == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            match seen.get(&y) {
                None => {
                    if small.contains(y) {
                        return true;
                    }
                    let branch = if x == v { y } else { bx };
                    seen.insert(y, (dx + 1, branch));
                    queue.push_back(y);
                }
                Some(&(dy, by)) => {
                    // A non-tree edge between different branches closes a
                    // cycle through v of length dx + dy + 1.
                    if x != v && y != v && by != bx && dx + dy < radius {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// CLOSE = SMALL vertices within `close_radius` of another SMALL vertex or on
/// a cycle of length at most `close_radius`.
pub fn compute_close(g: &Graph, t: &Thresholds, small: &VertexSet) -> VertexSet {
    VertexSet::from_vertices(
        g.n(),
        small
            .iter()
            .filter(|&v| is_close(g, v, t.close_radius, small)),
    )
}

/// The unique minimal X with `d(v, SMALL ∪ X) ≤ 1` for every `v ∉ X`.
///
/// Runs the greedy closure: while some vertex outside X has at least two
/// neighbours in SMALL ∪ X, add the smallest such vertex.
pub fn compute_x(g: &Graph, small: &VertexSet) -> VertexSet {
    compute_x_with_order(g, small, &(0..g.n()).collect::<Vec<_>>())
}

/// `compute_x` with an arbitrary scan priority: `rank[v]` decides which
/// eligible vertex enters X first. The result does not depend on `rank`.
pub fn compute_x_with_order(g: &Graph, small: &VertexSet, rank: &[usize]) -> VertexSet {
    let n = g.n();
    let mut count: Vec<usize> = (0..n).map(|v| g.deg_into(v, small)).collect();
    let mut x = VertexSet::empty(n);
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n)
        .filter(|&v| count[v] >= 2)
        .map(|v| Reverse((rank[v], v)))
        .collect();
    while let Some(Reverse((_, v))) = heap.pop() {
        if !x.insert(v) {
            continue;
        }
        if small.contains(v) {
            continue;
        }
        for &u in g.neighbors(v) {
            count[u] += 1;
            if count[u] == 2 && !x.contains(u) {
                heap.push(Reverse((rank[u], u)));
            }
        }
    }
    x
}

/// Returns (X, Y, BAD) with Y = { v : d(v) = 2, d(v, X) = 1 } and BAD = X ∪ Y.
pub fn compute_bad(g: &Graph, small: &VertexSet) -> (VertexSet, VertexSet, VertexSet) {
    let x = compute_x(g, small);
    let y = VertexSet::from_vertices(
        g.n(),
        (0..g.n()).filter(|&v| g.deg(v) == 2 && g.deg_into(v, &x) == 1),
    );
    let bad = x.union(&y);
    (x, y, bad)
}

pub fn classify(g: &Graph, t: &Thresholds) -> Classification {
    let basic = classify_basic(g, t);
    let small = compute_small(g, t, &basic.v1_neighbours);
    let close = compute_close(g, t, &small);
    let (x, y, bad) = compute_bad(g, &small);
    Classification {
        v0: basic.v0,
        v1: basic.v1,
        small,
        large: basic.large,
        close,
        x,
        y,
        bad,
        v1_neighbours: basic.v1_neighbours,
    }
}

/// Outcome of one structural property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
    /// False when the check only sampled candidate sets; a pass then means
    /// "not falsified".
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTolerances {
    /// Multiplier applied to the upper bounds of P2–P4 and the BAD bound.
    pub slack: f64,
    /// Relative tolerance on |V₁| in P1, replacing n^-0.4 when larger.
    pub v1_relative: f64,
    /// Random subsets drawn per sampled property.
    pub samples: usize,
    pub seed: u64,
}

impl Default for PropertyTolerances {
    fn default() -> Self {
        Self {
            slack: 1.0,
            v1_relative: 0.0,
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn edges_within(g: &Graph, set: &VertexSet) -> usize {
    set.iter().map(|v| g.deg_into(v, set)).sum::<usize>() / 2
}

fn edges_between(g: &Graph, a: &VertexSet, b: &VertexSet) -> usize {
    a.iter().map(|v| g.deg_into(v, b)).sum()
}

/// Evaluates the typical-structure properties on one graph.
///
/// Set-size properties (P1–P4, BAD) are exact. The edge-density properties
/// P5 and P6 quantify over exponentially many sets; they are evaluated on
/// random sets plus a few natural candidates and can only be falsified.
pub fn check_properties(
    g: &Graph,
    cls: &Classification,
    c: f64,
    tol: &PropertyTolerances,
) -> PropertyReport {
    let n = g.n();
    let nf = n as f64;
    let mut checks = Vec::new();
    let v1_pred = c * (-c).exp() * nf;
    let delta = nf.powf(-0.4).max(tol.v1_relative);
    let v1 = cls.v1.len() as f64;
    checks.push(PropertyCheck {
        name: "P1_v1_lower".into(),
        measured: v1,
        bound: (1.0 - delta) * v1_pred,
        passed: v1 >= (1.0 - delta) * v1_pred,
        exhaustive: true,
    });
    checks.push(PropertyCheck {
        name: "P1_v1_upper".into(),
        measured: v1,
        bound: (1.0 + delta) * v1_pred,
        passed: v1 <= (1.0 + delta) * v1_pred,
        exhaustive: true,
    });
    let mut upper = |name: &str, measured: usize, bound: f64| {
        let bound = bound * tol.slack;
        checks.push(PropertyCheck {
            name: name.into(),
            measured: measured as f64,
            bound,
            passed: measured as f64 <= bound,
            exhaustive: true,
        });
    };
    upper("P2_small", cls.small.len(), (-0.9 * c).exp() * nf);
    upper("P3_large", cls.large.len(), 1e-6 * nf);
    upper("P4_close", cls.close.len(), (-1.8 * c).exp() * nf);
    upper("BAD", cls.bad.len(), 3.0 * c.sqrt() * (-c).exp() * nf);

    let mut rng = stream_rng(tol.seed, Stream::Auxiliary);

    // P5: every U with |U| ≤ 1e-5 n spans fewer than 1e-4 c |U| edges.
    let p5_max = ((1e-5 * nf).floor() as usize).max(1).min(n);
    let p5_bound = 1e-4 * c;
    let mut worst_p5 = 0.0f64;
    let mut p5_candidates: Vec<VertexSet> = Vec::new();
    for natural in [&cls.small, &cls.bad, &cls.close] {
        if !natural.is_empty() && natural.len() <= p5_max {
            p5_candidates.push(natural.clone());
        }
    }
    for v in cls.small.iter().take(tol.samples) {
        let mut ball = VertexSet::from_vertices(n, g.neighbors(v).iter().copied());
        ball.insert(v);
        if ball.len() <= p5_max {
            p5_candidates.push(ball);
        }
    }
    for _ in 0..tol.samples {
        if n == 0 {
            break;
        }
        let size = rng.random_range(1..=p5_max);
        p5_candidates.push(VertexSet::from_vertices(n, sample(&mut rng, n, size)));
    }
    for u in &p5_candidates {
        worst_p5 = worst_p5.max(edges_within(g, u) as f64 / u.len() as f64);
    }
    checks.push(PropertyCheck {
        name: "P5_sparse_sets".into(),
        measured: worst_p5,
        bound: p5_bound,
        passed: worst_p5 < p5_bound,
        exhaustive: false,
    });

    // P6: disjoint U, W with |U| = 1e-6 n and |W| = n/5 have e(U, W) ≥ 1e-7 c n.
    let u_size = ((1e-6 * nf).round() as usize).max(1);
    let w_size = (nf / 5.0).round() as usize;
    let mut worst_p6 = f64::INFINITY;
    if u_size + w_size <= n && w_size > 0 {
        for _ in 0..tol.samples {
            let picked = sample(&mut rng, n, u_size + w_size).into_vec();
            let u = VertexSet::from_vertices(n, picked[..u_size].iter().copied());
            let w = VertexSet::from_vertices(n, picked[u_size..].iter().copied());
            worst_p6 = worst_p6.min(edges_between(g, &u, &w) as f64);
        }
    }
    let p6_bound = 1e-7 * c * nf;
    checks.push(PropertyCheck {
        name: "P6_dense_pairs".into(),
        measured: worst_p6,
        bound: p6_bound,
        passed: worst_p6 >= p6_bound,
        exhaustive: false,
    });
    PropertyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_gnp, SampleParams};
    use rand::seq::SliceRandom;

    fn t(small_deg: usize, large_deg: usize) -> Thresholds {
        Thresholds {
            small_deg,
            large_deg,
            close_radius: 4,
        }
    }

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    #[test]
    fn default_thresholds() {
        assert_eq!(
            Thresholds::for_c(6.0),
            Thresholds {
                small_deg: 2,
                large_deg: 120,
                close_radius: 4
            }
        );
        assert_eq!(Thresholds::for_c(2500.0).small_deg, 2);
        assert_eq!(Thresholds::for_c(3500.0).small_deg, 3);
        assert!(t(1, 5).validate().is_err());
    }

    #[test]
    fn basic_classes() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let b = classify_basic(&star, &t(2, 2));
        assert_eq!(b.v1.to_vec(), vec![1, 2, 3]);
        assert_eq!(b.large.to_vec(), vec![0]);
        assert_eq!(b.v1_neighbours.to_vec(), vec![0]);

        let b = classify_basic(&Graph::cycle(5), &t(2, 10));
        assert!(b.v0.is_empty() && b.v1.is_empty());

        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let b = classify_basic(&g, &t(2, 10));
        assert_eq!(b.v1.to_vec(), vec![0, 1]);
        assert_eq!(b.v0.to_vec(), vec![2]);
        assert!(b.v0.is_disjoint(&b.v1));
        // K₂ endpoints are each other's only neighbour, both in V₁.
        assert!(b.v1_neighbours.is_empty());
    }

    #[test]
    fn small_examples() {
        let tt = t(2, 100);
        let c6 = Graph::cycle(6);
        assert!(compute_small(&c6, &tt, &classify_basic(&c6, &tt).v1_neighbours).is_empty());
        let p3 = Graph::path(3);
        let b = classify_basic(&p3, &tt);
        assert_eq!(b.v1_neighbours.to_vec(), vec![1]);
        // The centre has both neighbours outside N(V₁) = {1}.
        assert_eq!(
            compute_small(&p3, &tt, &b.v1_neighbours).to_vec(),
            vec![0, 2]
        );
        let e3 = Graph::empty(3);
        assert_eq!(compute_small(&e3, &tt, &VertexSet::empty(3)).len(), 3);
    }

    #[test]
    fn close_examples() {
        // Path 1..=7 of length 6, pendants 0 (on 1) and 8 (on 7): pendants at distance 8.
        let mut edges: Vec<_> = (0..8).map(|v| (v, v + 1)).collect();
        // Thicken the interior so only the two pendant ends are SMALL.
        edges.extend([
            (2, 9),
            (3, 9),
            (4, 10),
            (5, 10),
            (6, 11),
            (2, 11),
            (9, 12),
            (10, 12),
            (11, 12),
        ]);
        let g = Graph::from_edges(13, &edges).unwrap();
        let tt = t(2, 100);
        let small = set(13, &[0, 8]);
        assert!(compute_close(&g, &tt, &small).is_empty());

        let k3 = Graph::complete(3);
        let small = set(3, &[0, 1, 2]);
        assert_eq!(
            compute_close(&k3, &t(3, 100), &small).to_vec(),
            vec![0, 1, 2]
        );

        let p3 = Graph::path(3);
        assert_eq!(
            compute_close(&p3, &tt, &set(3, &[0, 2])).to_vec(),
            vec![0, 2]
        );
    }

    #[test]
    fn close_detects_short_cycles_only() {
        // A single SMALL vertex on a 4-cycle is CLOSE; on a 5-cycle it is not.
        let c4 = Graph::cycle(4);
        assert_eq!(
            compute_close(&c4, &t(2, 100), &set(4, &[0])).to_vec(),
            vec![0]
        );
        let c5 = Graph::cycle(5);
        assert!(compute_close(&c5, &t(2, 100), &set(5, &[0])).is_empty());
        // Odd short cycle closed by an edge between two depth-1 vertices.
        let k3 = Graph::complete(3);
        assert_eq!(
            compute_close(&k3, &t(2, 100), &set(3, &[0])).to_vec(),
            vec![0]
        );
    }

    #[test]
    fn x_examples() {
        let c6 = Graph::cycle(6);
        assert!(compute_x(&c6, &VertexSet::empty(6)).is_empty());
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(compute_x(&star, &set(5, &[1, 2, 3, 4])).to_vec(), vec![0]);
        // Perfect matching: every vertex has exactly one SMALL neighbour.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(compute_x(&g, &set(4, &[0, 1, 2, 3])).is_empty());
    }

    #[test]
    fn bad_examples() {
        let (x, y, bad) = compute_bad(&Graph::cycle(5), &VertexSet::empty(5));
        assert!(x.is_empty() && y.is_empty() && bad.is_empty());
        // a=0, b=1, c=2 with extra leaves on a so that a ∈ X.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (0, 4)]).unwrap();
        let (x, y, bad) = compute_bad(&g, &set(5, &[3, 4]));
        assert_eq!(x.to_vec(), vec![0]);
        assert_eq!(y.to_vec(), vec![1]);
        assert_eq!(bad.to_vec(), vec![0, 1]);
    }

    /// Minimum X by exhaustive search over all subsets.
    fn brute_force_x(g: &Graph, small: &VertexSet) -> VertexSet {
        let n = g.n();
        let mut best: Option<u32> = None;
        for mask in 0u32..(1 << n) {
            if best.is_some_and(|b| b.count_ones() <= mask.count_ones()) {
                continue;
            }
            let ok = (0..n).all(|v| {
                mask >> v & 1 == 1
                    || g.neighbors(v)
                        .iter()
                        .filter(|&&u| small.contains(u) || mask >> u & 1 == 1)
                        .count()
                        <= 1
            });
            if ok {
                best = Some(mask);
            }
        }
        let mask = best.unwrap();
        VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1))
    }

    #[test]
    fn x_matches_exhaustive_minimum() {
        for seed in 0..40 {
            let g = sample_gnp(&SampleParams::new(12, 3.6, seed)).unwrap();
            let cls = classify(&g, &t(2, 100));
            let oracle = brute_force_x(&g, &cls.small);
            assert_eq!(cls.x, oracle, "seed {seed}");
            let y = VertexSet::from_vertices(
                12,
                (0..12).filter(|&v| g.deg(v) == 2 && g.deg_into(v, &oracle) == 1),
            );
            assert_eq!(cls.bad, oracle.union(&y));
        }
    }

    #[test]
    fn x_is_minimal_fixed_point() {
        for seed in 0..30 {
            let g = sample_gnp(&SampleParams::new(11, 3.0, 100 + seed)).unwrap();
            let small = compute_small(
                &g,
                &t(2, 100),
                &classify_basic(&g, &t(2, 100)).v1_neighbours,
            );
            let x = compute_x(&g, &small);
            let sx = small.union(&x);
            assert!((0..11)
                .filter(|&v| !x.contains(v))
                .all(|v| g.deg_into(v, &sx) <= 1));
            // No proper subset is a fixed point.
            let members = x.to_vec();
            for sub in 0u32..(1 << members.len()) - 1 {
                let xs = VertexSet::from_vertices(
                    11,
                    members
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| sub >> i & 1 == 1)
                        .map(|(_, &v)| v),
                );
                let sxs = small.union(&xs);
                assert!((0..11).any(|v| !xs.contains(v) && g.deg_into(v, &sxs) > 1));
            }
        }
    }

    #[test]
    fn x_is_scan_order_independent() {
        let mut rng = stream_rng(5, Stream::Auxiliary);
        for seed in 0..20 {
            let g = sample_gnp(&SampleParams::new(50, 2.5, seed)).unwrap();
            let small = compute_small(
                &g,
                &t(2, 100),
                &classify_basic(&g, &t(2, 100)).v1_neighbours,
            );
            let reference = compute_x(&g, &small);
            for _ in 0..5 {
                let mut rank: Vec<usize> = (0..50).collect();
                rank.shuffle(&mut rng);
                assert_eq!(compute_x_with_order(&g, &small, &rank), reference);
            }
        }
    }

    #[test]
    fn classification_invariants_on_random_graphs() {
        for seed in 0..20 {
            let g = sample_gnp(&SampleParams::new(400, 3.0, seed)).unwrap();
            let tt = Thresholds::for_c(3.0);
            let cls = classify(&g, &tt);
            assert!(cls.v1.is_subset(&cls.small));
            assert!(cls.close.is_subset(&cls.small));
            assert!(cls.v0.is_disjoint(&cls.v1));
            assert_eq!(cls.bad, cls.x.union(&cls.y));
            assert!(cls.y.iter().all(|v| g.deg(v) == 2));
            // CLOSE symmetry.
            for u in cls.small.iter() {
                for (w, d) in g.bounded_bfs(u, tt.close_radius).unwrap() {
                    if w != u && d <= tt.close_radius && cls.small.contains(w) {
                        assert!(cls.close.contains(u) && cls.close.contains(w));
                    }
                }
            }
        }
    }

    #[test]
    fn properties_on_empty_graph() {
        let g = Graph::empty(100);
        let cls = classify(&g, &Thresholds::for_c(5.0));
        let report = check_properties(&g, &cls, 5.0, &PropertyTolerances::default());
        assert!(!report.get("P1_v1_lower").unwrap().passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn summary_serializes() {
        let g = Graph::path(4);
        let cls = classify(&g, &Thresholds::for_c(5.0));
        let json = serde_json::to_string(&cls.summary(false)).unwrap();
        assert!(json.contains("\"v1\":2"));
        assert!(!json.contains("members"));
        let json = serde_json::to_string(&cls.summary(true)).unwrap();
        assert!(json.contains("\"members\""));
    }
}
