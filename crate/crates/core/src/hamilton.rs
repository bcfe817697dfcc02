//! M-respecting Pósa rotation-extension.
//!
//! An M-path is a path that, for every edge of the matching M, either uses it
//! or avoids both of its endpoints. A rotation of a path (v₀, …, v_ℓ) with
//! fixed end v₀ and pivot v_i uses a chord {v_i, v_ℓ} to produce
//! (v₀, …, v_i, v_ℓ, v_{ℓ-1}, …, v_{i+1}). It is M-respecting when the pivot
//! is not covered by M, which guarantees that the dropped edge
//! {v_i, v_{i+1}} is not an M-edge.
//!
//! Endpoint sets are explored breadth-first without materialising the
//! intermediate paths: every rotation reverses a suffix of the previous
//! path, so a path reached after k rotations is described by its k pivot
//! positions and positions can be mapped through the chain in O(k).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matching::Matching;
use crate::rng::splitmix64;

const OFF_PATH: usize = usize::MAX;

/// Restarts from a cut path allowed per search once no booster is found.
const MAX_KICKS: usize = 8;

/// Read access to neighbour lists; implemented by the immutable [`Graph`]
/// and by the growable adjacency the engine uses while absorbing boosters.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn neighbours(&self, v: usize) -> &[usize];
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbours(u).contains(&v)
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn neighbours(&self, v: usize) -> &[usize] {
        self.neighbors(v)
    }
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
}

impl Adjacency for Vec<Vec<usize>> {
    fn vertex_count(&self) -> usize {
        self.len()
    }
    fn neighbours(&self, v: usize) -> &[usize] {
        &self[v]
    }
}

/// How an M-edge relates to a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MEdgeStatus {
    Contained,
    Disjoint,
    /// Exactly one endpoint on the path, or both on it but not consecutive.
    Broken,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MPath {
    vertices: Vec<usize>,
}

impl MPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The status of every M-edge, in the order of `m.edges()`.
    pub fn m_edge_status(&self, m: &Matching) -> Vec<MEdgeStatus> {
        let mut position = HashMap::with_capacity(self.vertices.len());
        for (i, &v) in self.vertices.iter().enumerate() {
            position.insert(v, i);
        }
        m.edges()
            .iter()
            .map(|(u, v)| match (position.get(u), position.get(v)) {
                (None, None) => MEdgeStatus::Disjoint,
                (Some(&a), Some(&b)) if a.abs_diff(b) == 1 => MEdgeStatus::Contained,
                _ => MEdgeStatus::Broken,
            })
            .collect()
    }

    /// Distinct vertices, consecutive pairs adjacent in `gamma`, and every
    /// M-edge contained or disjoint.
    pub fn is_m_path<A: Adjacency + ?Sized>(&self, gamma: &A, m: &Matching) -> bool {
        let n = gamma.vertex_count();
        let mut seen = vec![false; n];
        for &v in &self.vertices {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        self.vertices.windows(2).all(|w| gamma.adjacent(w[0], w[1]))
            && self
                .m_edge_status(m)
                .iter()
                .all(|&s| s != MEdgeStatus::Broken)
    }
}

/// Rotates `p` with its first vertex fixed, using the chord from the last
/// vertex to the pivot at `pivot_index`. The pivot may be v₀ itself; v_{ℓ-1}
/// would give back the same path and is rejected.
pub fn rotate(p: &MPath, pivot_index: usize, gamma: &Graph, m: &Matching) -> Result<MPath> {
    let path = p.vertices();
    let last = path.len().saturating_sub(1);
    if pivot_index + 1 >= last {
        return Err(Error::Rotation(format!(
            "pivot index {pivot_index} must be below {}",
            last.saturating_sub(1)
        )));
    }
    let pivot = path[pivot_index];
    if m.is_matched(pivot) {
        return Err(Error::PivotInMatching(pivot));
    }
    if !gamma.has_edge(pivot, path[last]) {
        return Err(Error::MissingEdge(pivot, path[last]));
    }
    let mut rotated = path.to_vec();
    rotated[pivot_index + 1..].reverse();
    Ok(MPath::new(rotated))
}

#[derive(Debug, Clone, Copy)]
struct Record {
    endpoint: usize,
    parent: usize,
    pivot: usize,
}

/// Breadth-first search over M-respecting rotations with a fixed first
/// vertex. Each endpoint is recorded once, together with the rotation that
/// first reached it.
struct RotationSearch<'a, A: ?Sized> {
    adjacency: &'a A,
    m: &'a Matching,
    pivots: PivotRule,
    base: &'a [usize],
    position: &'a [usize],
    records: Vec<Record>,
    index: HashMap<usize, usize>,
    yielded: usize,
    expanded: usize,
}

impl<'a, A: Adjacency + ?Sized> RotationSearch<'a, A> {
    fn new(
        adjacency: &'a A,
        m: &'a Matching,
        pivots: PivotRule,
        base: &'a [usize],
        position: &'a [usize],
    ) -> Self {
        let mut search = Self {
            adjacency,
            m,
            pivots,
            base,
            position,
            records: Vec::new(),
            index: HashMap::new(),
            yielded: 0,
            expanded: 0,
        };
        if base.len() >= 2 {
            let endpoint = base[base.len() - 1];
            search.records.push(Record {
                endpoint,
                parent: usize::MAX,
                pivot: 0,
            });
            search.index.insert(endpoint, 0);
        }
        search
    }

    fn last(&self) -> usize {
        self.base.len() - 1
    }

    /// Pivot positions from the original path to record `r`.
    fn chain(&self, mut r: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        while self.records[r].parent != usize::MAX {
            pivots.push(self.records[r].pivot);
            r = self.records[r].parent;
        }
        pivots.reverse();
        pivots
    }

    fn position_in(&self, chain: &[usize], mut q: usize) -> usize {
        let last = self.last();
        for &i in chain {
            if q > i {
                q = last + i + 1 - q;
            }
        }
        q
    }

    fn vertex_at(&self, chain: &[usize], mut q: usize) -> usize {
        let last = self.last();
        for &i in chain.iter().rev() {
            if q > i {
                q = last + i + 1 - q;
            }
        }
        self.base[q]
    }

    fn expand(&mut self, r: usize) {
        let chain = self.chain(r);
        let last = self.last();
        let endpoint = self.records[r].endpoint;
        for &w in self.adjacency.neighbours(endpoint) {
            let original = self.position[w];
            if original == OFF_PATH || (self.pivots == PivotRule::Unmatched && self.m.is_matched(w))
            {
                continue;
            }
            let q = self.position_in(&chain, original);
            if q + 1 >= last {
                continue;
            }
            let new_end = self.vertex_at(&chain, q + 1);
            if self.m.contains_edge(w, new_end) {
                continue;
            }
            if !self.index.contains_key(&new_end) {
                self.index.insert(new_end, self.records.len());
                self.records.push(Record {
                    endpoint: new_end,
                    parent: r,
                    pivot: q,
                });
            }
        }
    }

    /// Next record in breadth-first order.
    fn next_record(&mut self) -> Option<usize> {
        loop {
            if self.yielded < self.records.len() {
                self.yielded += 1;
                return Some(self.yielded - 1);
            }
            if self.expanded < self.records.len() {
                self.expand(self.expanded);
                self.expanded += 1;
                continue;
            }
            return None;
        }
    }

    fn run_to_completion(&mut self) {
        while self.next_record().is_some() {}
    }

    fn materialize(&self, r: usize) -> Vec<usize> {
        let mut path = self.base.to_vec();
        for i in self.chain(r) {
            path[i + 1..].reverse();
        }
        path
    }
}

/// Endpoints reachable from a path by M-respecting rotations that keep its
/// first vertex fixed.
#[derive(Debug, Clone)]
pub struct RotationState {
    pub fixed_end: usize,
    base: Vec<usize>,
    records: Vec<Record>,
    index: HashMap<usize, usize>,
}

impl RotationState {
    /// END_M(P, v₀), ascending.
    pub fn end_set(&self) -> Vec<usize> {
        let mut ends: Vec<usize> = self.records.iter().map(|r| r.endpoint).collect();
        ends.sort_unstable();
        ends
    }

    /// Endpoints in the breadth-first order they were reached.
    pub fn discovery_order(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.endpoint).collect()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.index.contains_key(&v)
    }

    /// Rebuilds the rotated path P_u from v₀ to `u`.
    pub fn path_to(&self, u: usize) -> Option<MPath> {
        let mut r = *self.index.get(&u)?;
        let mut pivots = Vec::new();
        while self.records[r].parent != usize::MAX {
            pivots.push(self.records[r].pivot);
            r = self.records[r].parent;
        }
        let mut path = self.base.clone();
        for &i in pivots.iter().rev() {
            path[i + 1..].reverse();
        }
        Some(MPath::new(path))
    }
}

fn positions(n: usize, path: &[usize]) -> Vec<usize> {
    let mut position = vec![OFF_PATH; n];
    for (i, &v) in path.iter().enumerate() {
        position[v] = i;
    }
    position
}

pub fn compute_end_set<A: Adjacency + ?Sized>(p: &MPath, gamma: &A, m: &Matching) -> RotationState {
    let position = positions(gamma.vertex_count(), p.vertices());
    let mut search = RotationSearch::new(gamma, m, PivotRule::Unmatched, p.vertices(), &position);
    search.run_to_completion();
    RotationState {
        fixed_end: p.vertices().first().copied().unwrap_or(0),
        base: p.vertices().to_vec(),
        records: search.records,
        index: search.index,
    }
}

/// Extends `p` until no path reachable by M-respecting rotations (from
/// either end) has an endpoint with a neighbour off the path.
pub fn extend_maximal(p: &MPath, gamma: &Graph, m: &Matching) -> MPath {
    let adjacency: Vec<Vec<usize>> = (0..gamma.n())
        .map(|v| gamma.neighbors(v).to_vec())
        .collect();
    let mut engine = Engine::new(adjacency, m, p.vertices().to_vec());
    engine.extend_maximal();
    MPath::new(engine.path)
}

/// Searches for an edge of G* outside Γ joining some u ∈ END_M(P, v₀) to a
/// vertex w of END_M(P_u, u) such that the cycle it closes either spans Γ
/// or can be left along a Γ-edge. Candidates u are tried in ascending order
/// and the smallest such w is returned.
///
/// When P is a longest M-path of Γ the result is an M-booster: the cycle is
/// Hamiltonian, or opening it next to the exit gives a longer M-path.
pub fn find_booster(
    p: &MPath,
    gamma: &Graph,
    gstar: &Graph,
    m: &Matching,
) -> Option<(usize, usize)> {
    let outer = compute_end_set(p, gamma, m);
    let mut on_path = vec![false; gamma.n()];
    for &v in p.vertices() {
        on_path[v] = true;
    }
    // Paths in the END sets share V(P), so an exit does not depend on u or w.
    let exit = p.len() == gamma.n()
        || p.vertices().iter().any(|&x| {
            gamma.neighbors(x).iter().any(|&y| {
                !on_path[y]
                    && m.partner(y)
                        .is_none_or(|z| !on_path[z] && gamma.has_edge(y, z))
            })
        });
    if !exit {
        return None;
    }
    for u in outer.end_set() {
        let mut pu = outer.path_to(u)?.into_vertices();
        pu.reverse();
        let inner = compute_end_set(&MPath::new(pu), gamma, m);
        let partner = inner
            .end_set()
            .into_iter()
            .find(|&w| gstar.has_edge(u, w) && !gamma.has_edge(u, w));
        if let Some(w) = partner {
            return Some((u.min(w), u.max(w)));
        }
    }
    None
}

/// Why the engine stopped without a Hamilton M-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    /// Fewer than three vertices; no cycle exists.
    TooSmall,
    BudgetExhausted,
    /// No booster was found among the candidates examined.
    NoBooster,
}

/// A local certificate that G* has no Hamilton M-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// Vertex of degree below two.
    LowDegree { vertex: usize },
    /// Vertex incident to more than two forced edges (M-edges and edges at
    /// degree-2 vertices).
    OverForced { vertex: usize, forced: usize },
    /// Forced edges close a cycle through `vertex` that misses some vertices.
    ShortForcedCycle { vertex: usize, length: usize },
    /// More than one component; `vertex` is the smallest vertex outside the
    /// largest one.
    Disconnected { components: usize, vertex: usize },
    /// Connected with a cut vertex; `vertex` is the smallest vertex outside
    /// the largest block.
    Separable { blocks: usize, vertex: usize },
}

impl Obstruction {
    fn vertex(&self) -> usize {
        match *self {
            Self::LowDegree { vertex }
            | Self::OverForced { vertex, .. }
            | Self::ShortForcedCycle { vertex, .. }
            | Self::Disconnected { vertex, .. }
            | Self::Separable { vertex, .. } => vertex,
        }
    }
}

/// Vertices in no largest block, ascending.
fn outside_largest(blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut outside: Vec<usize> = blocks[1..]
        .iter()
        .flatten()
        .copied()
        .filter(|v| blocks[0].binary_search(v).is_err())
        .collect();
    outside.sort_unstable();
    outside.dedup();
    outside
}

/// Checks 2-connectivity and the forced-edge structure of G*: every
/// Hamilton M-cycle uses all M-edges and both edges at each degree-2 vertex.
pub fn forced_edge_obstruction(gstar: &Graph, m: &Matching) -> Option<Obstruction> {
    let n = gstar.n();
    if n < 3 {
        return None;
    }
    let components = gstar.components();
    if components.len() > 1 {
        let vertex = components[1..].iter().flatten().copied().min().unwrap();
        return Some(Obstruction::Disconnected {
            components: components.len(),
            vertex,
        });
    }
    let mut forced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let add = |u: usize, v: usize, forced: &mut Vec<Vec<usize>>| {
        if !forced[u].contains(&v) {
            forced[u].push(v);
            forced[v].push(u);
        }
    };
    for &(u, v) in m.edges() {
        add(u, v, &mut forced);
    }
    for v in 0..n {
        match gstar.deg(v) {
            0 | 1 => return Some(Obstruction::LowDegree { vertex: v }),
            2 => {
                for &u in gstar.neighbors(v) {
                    add(u, v, &mut forced);
                }
            }
            _ => {}
        }
    }
    if let Some(v) = (0..n).find(|&v| forced[v].len() > 2) {
        return Some(Obstruction::OverForced {
            vertex: v,
            forced: forced[v].len(),
        });
    }
    // Forced edges now form vertex-disjoint paths and cycles.
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || forced[start].len() != 2 {
            continue;
        }
        let (mut prev, mut cur, mut length) = (start, forced[start][0], 1);
        seen[start] = true;
        while cur != start && forced[cur].len() == 2 && !seen[cur] {
            seen[cur] = true;
            let next = if forced[cur][0] == prev {
                forced[cur][1]
            } else {
                forced[cur][0]
            };
            prev = cur;
            cur = next;
            length += 1;
        }
        if cur == start && length < n {
            return Some(Obstruction::ShortForcedCycle {
                vertex: start,
                length,
            });
        }
    }
    let blocks = gstar.blocks();
    if blocks.len() > 1 {
        let vertex = outside_largest(&blocks)[0];
        return Some(Obstruction::Separable {
            blocks: blocks.len(),
            vertex,
        });
    }
    None
}

/// Vertices (G* labels) whose deletion clears every obstruction found by
/// [`forced_edge_obstruction`] or [`contract_forced_chains`], chosen greedily
/// one at a time.
///
/// For an over-forced vertex one of its degree-2 neighbours is deleted,
/// preferring one outside V(M); otherwise the reported vertex itself goes.
/// M-edges losing an endpoint are dropped from the remaining matching.
pub fn repair_obstructions(gstar: &Graph, m: &Matching) -> Vec<usize> {
    let n = gstar.n();
    let mut alive = VertexSet::full(n);
    let mut removed = Vec::new();
    loop {
        let (sub, to_old) = gstar.induced(&alive);
        if sub.n() < 3 {
            break;
        }
        let sub_m = restrict_matching(m, &to_old);
        let found = forced_edge_obstruction(&sub, &sub_m)
            .or_else(|| contract_forced_chains(&sub, &sub_m).err());
        let Some(obstruction) = found else { break };
        let victims: Vec<usize> = match obstruction {
            Obstruction::OverForced { vertex, .. } => {
                let mut twos: Vec<usize> = sub
                    .neighbors(vertex)
                    .iter()
                    .copied()
                    .filter(|&u| sub.deg(u) == 2)
                    .collect();
                twos.sort_by_key(|&u| (sub_m.is_matched(u), u));
                vec![twos.first().copied().unwrap_or(vertex)]
            }
            Obstruction::Disconnected { .. } => {
                sub.components()[1..].iter().flatten().copied().collect()
            }
            Obstruction::Separable { .. } => outside_largest(&sub.blocks()),
            other => vec![other.vertex()],
        };
        for v in victims {
            alive.remove(to_old[v]);
            removed.push(to_old[v]);
        }
    }
    removed.sort_unstable();
    removed
}

/// G* after forced-chain contraction. Edges that no Hamilton M-cycle can use
/// are deleted until every vertex with two forced edges has degree two; each
/// maximal chain of forced edges is then replaced by one M-edge between its
/// ends. Hamilton M-cycles of the result expand to Hamilton M-cycles of G*.
#[derive(Debug, Clone)]
pub struct ForcedContraction {
    pub graph: Graph,
    pub m: Matching,
    /// New label → old label.
    pub to_old: Vec<usize>,
    /// Old end → (other end, chain interior listed from this end).
    chains: HashMap<usize, (usize, Vec<usize>)>,
}

impl ForcedContraction {
    /// Maps a path (or, with `closed`, a cycle) of the contracted graph back
    /// to G* (old labels).
    pub fn expand(&self, seq: &[usize], closed: bool) -> Vec<usize> {
        let mut out = Vec::with_capacity(seq.len());
        for (i, &a) in seq.iter().enumerate() {
            if i + 1 == seq.len() && !closed {
                out.push(self.to_old[a]);
                break;
            }
            let (a, b) = (self.to_old[a], self.to_old[seq[(i + 1) % seq.len()]]);
            out.push(a);
            if let Some((end, interior)) = self.chains.get(&a) {
                if *end == b {
                    out.extend_from_slice(interior);
                }
            }
        }
        out
    }
}

/// Contracts the forced chains of G*. Fails with the obstruction met while
/// deleting unusable edges.
pub fn contract_forced_chains(
    gstar: &Graph,
    m: &Matching,
) -> std::result::Result<ForcedContraction, Obstruction> {
    let n = gstar.n();
    let mut adjacency: Vec<Vec<usize>> = (0..n).map(|v| gstar.neighbors(v).to_vec()).collect();
    let forced_at = |v: usize, adjacency: &Vec<Vec<usize>>| -> Vec<usize> {
        adjacency[v]
            .iter()
            .copied()
            .filter(|&u| {
                m.contains_edge(u, v) || adjacency[u].len() == 2 || adjacency[v].len() == 2
            })
            .collect()
    };
    let mut queue: Vec<usize> = (0..n).rev().collect();
    let mut queued = vec![true; n];
    while let Some(v) = queue.pop() {
        queued[v] = false;
        if adjacency[v].len() < 2 {
            return Err(Obstruction::LowDegree { vertex: v });
        }
        let forced = forced_at(v, &adjacency);
        if forced.len() > 2 {
            return Err(Obstruction::OverForced {
                vertex: v,
                forced: forced.len(),
            });
        }
        if forced.len() < 2 || adjacency[v].len() == 2 {
            continue;
        }
        let dropped: Vec<usize> = adjacency[v]
            .iter()
            .copied()
            .filter(|u| !forced.contains(u))
            .collect();
        adjacency[v] = forced;
        for u in dropped {
            adjacency[u].retain(|&w| w != v);
            for w in std::iter::once(u).chain(adjacency[u].iter().copied()) {
                if !queued[w] {
                    queued[w] = true;
                    queue.push(w);
                }
            }
        }
    }

    let forced: Vec<Vec<usize>> = (0..n).map(|v| forced_at(v, &adjacency)).collect();
    let mut chains = HashMap::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || forced[start].len() != 1 {
            continue;
        }
        let (mut prev, mut cur) = (start, forced[start][0]);
        let mut interior = Vec::new();
        seen[start] = true;
        while forced[cur].len() == 2 {
            seen[cur] = true;
            interior.push(cur);
            let next = if forced[cur][0] == prev {
                forced[cur][1]
            } else {
                forced[cur][0]
            };
            prev = cur;
            cur = next;
        }
        seen[cur] = true;
        let reversed = interior.iter().rev().copied().collect();
        chains.insert(start, (cur, interior));
        chains.insert(cur, (start, reversed));
    }
    // Whatever is left lies on cycles of forced edges.
    if let Some(start) = (0..n).find(|&v| !seen[v] && forced[v].len() == 2) {
        let (mut prev, mut cur, mut length) = (start, forced[start][0], 1);
        while cur != start {
            let next = if forced[cur][0] == prev {
                forced[cur][1]
            } else {
                forced[cur][0]
            };
            prev = cur;
            cur = next;
            length += 1;
        }
        if length < n {
            return Err(Obstruction::ShortForcedCycle {
                vertex: start,
                length,
            });
        }
    }

    let to_old: Vec<usize> = (0..n).filter(|&v| forced[v].len() < 2).collect();
    let mut new_label = vec![OFF_PATH; n];
    for (i, &v) in to_old.iter().enumerate() {
        new_label[v] = i;
    }
    let mut edges = Vec::new();
    for &v in &to_old {
        for &u in &adjacency[v] {
            if v < u && new_label[u] != OFF_PATH {
                edges.push((new_label[v], new_label[u]));
            }
        }
    }
    let mut m_edges = Vec::new();
    for (&a, &(b, _)) in &chains {
        if a < b {
            edges.push((new_label[a], new_label[b]));
            m_edges.push((new_label[a], new_label[b]));
        }
    }
    m_edges.sort_unstable();
    let graph = Graph::from_edges(to_old.len(), &edges).expect("contracted edges are in range");
    let m = Matching::new(to_old.len(), &m_edges).expect("chain ends are distinct");
    Ok(ForcedContraction {
        graph,
        m,
        to_old,
        chains,
    })
}

/// M restricted to the vertices `to_old` (new label → old label), relabelled.
pub fn restrict_matching(m: &Matching, to_old: &[usize]) -> Matching {
    let new_label = |v: usize| to_old.binary_search(&v).ok();
    let edges: Vec<(usize, usize)> = m
        .edges()
        .iter()
        .filter_map(|&(u, v)| Some((new_label(u)?, new_label(v)?)))
        .collect();
    Matching::new(to_old.len(), &edges).expect("a restricted matching is a matching")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonSuccess {
    /// The cycle as a vertex sequence; the closing edge joins the last
    /// vertex to the first.
    pub cycle: Vec<usize>,
    pub boosters: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonFailure {
    pub reason: FailureReason,
    /// Longest M-path found.
    pub longest_path: Vec<usize>,
    pub boosters: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HamiltonOutcome {
    Success(HamiltonSuccess),
    Failure(HamiltonFailure),
}

impl HamiltonOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Self::Success(_))
    }

    pub fn boosters(&self) -> &[(usize, usize)] {
        match self {
            Self::Success(s) => &s.boosters,
            Self::Failure(f) => &f.boosters,
        }
    }
}

/// Which pivots a rotation may use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotRule {
    /// Pivots outside V(M).
    #[default]
    Unmatched,
    /// Any pivot whose dropped path edge is not an M-edge.
    KeepsMEdges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonParams {
    /// Maximum number of boosters absorbed.
    pub budget: usize,
    /// Maximum number of END-set vertices examined per booster search.
    pub candidate_limit: usize,
    pub pivots: PivotRule,
}

impl HamiltonParams {
    pub fn for_size(n: usize) -> Self {
        Self {
            budget: n.max(1),
            candidate_limit: 256,
            pivots: PivotRule::Unmatched,
        }
    }
}

/// A cycle on the current path's vertex set, together with every edge it
/// relies on beyond the path itself.
struct Closure {
    cycle: Vec<usize>,
    closing_edge: (usize, usize),
    chords: Vec<(usize, usize)>,
}

struct Extension {
    chain: Vec<usize>,
    chords: Vec<(usize, usize)>,
    endpoint: usize,
    target: usize,
}

/// Which graph supplies rotation chords during a booster search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChordSource {
    Gamma,
    GStar,
}

/// Chords {endpoint, pivot} used by the rotations of `chain` applied to `base`.
fn chain_chords(base: &[usize], chain: &[usize]) -> Vec<(usize, usize)> {
    let mut path = base.to_vec();
    let last = path.len() - 1;
    let mut chords = Vec::with_capacity(chain.len());
    for &i in chain {
        chords.push((path[last], path[i]));
        path[i + 1..].reverse();
    }
    chords
}

struct Engine<'a> {
    adjacency: Vec<Vec<usize>>,
    m: &'a Matching,
    pivots: PivotRule,
    path: Vec<usize>,
    position: Vec<usize>,
    scratch: Vec<usize>,
}

impl<'a> Engine<'a> {
    fn new(adjacency: Vec<Vec<usize>>, m: &'a Matching, path: Vec<usize>) -> Self {
        let n = adjacency.len();
        let position = positions(n, &path);
        Self {
            adjacency,
            m,
            pivots: PivotRule::Unmatched,
            path,
            position,
            scratch: vec![OFF_PATH; n],
        }
    }

    fn n(&self) -> usize {
        self.adjacency.len()
    }

    fn set_path(&mut self, path: Vec<usize>) {
        for &v in &self.path {
            self.position[v] = OFF_PATH;
        }
        for (i, &v) in path.iter().enumerate() {
            self.position[v] = i;
        }
        self.path = path;
    }

    fn push(&mut self, v: usize) {
        self.position[v] = self.path.len();
        self.path.push(v);
    }

    fn reverse_path(&mut self) {
        self.path.reverse();
        for (i, &v) in self.path.iter().enumerate() {
            self.position[v] = i;
        }
    }

    /// Applies the rotations leading to a search record to the live path.
    fn apply_chain(&mut self, chain: &[usize]) {
        let Some(&lowest) = chain.iter().min() else {
            return;
        };
        for &i in chain {
            self.path[i + 1..].reverse();
        }
        for q in lowest + 1..self.path.len() {
            self.position[self.path[q]] = q;
        }
    }

    fn is_free(&self, y: usize) -> bool {
        self.position[y] == OFF_PATH
            && self
                .m
                .partner(y)
                .is_none_or(|p| self.position[p] == OFF_PATH)
    }

    fn off_path_degree(&self, v: usize) -> usize {
        self.adjacency[v]
            .iter()
            .filter(|&&u| self.position[u] == OFF_PATH)
            .count()
    }

    /// Off-path neighbour of `u` with the fewest off-path neighbours of its
    /// own (counted at its M-partner when it is matched); ties by label.
    fn best_extension(&self, u: usize) -> Option<usize> {
        self.adjacency[u]
            .iter()
            .copied()
            .filter(|&w| self.is_free(w))
            .min_by_key(|&w| (self.off_path_degree(self.m.partner(w).unwrap_or(w)), w))
    }

    fn append(&mut self, w: usize) {
        self.push(w);
        if let Some(p) = self.m.partner(w) {
            self.push(p);
        }
    }

    fn extend_back(&mut self) {
        while let Some(&u) = self.path.last() {
            match self.best_extension(u) {
                Some(w) => self.append(w),
                None => break,
            }
        }
    }

    fn extend_both_ends(&mut self) {
        self.extend_back();
        if self.path.len() > 1 && self.best_extension(self.path[0]).is_some() {
            self.reverse_path();
            self.extend_back();
        }
    }

    /// Looks for a rotation, keeping the first vertex fixed, that exposes an
    /// endpoint with an off-path neighbour; applies it if found.
    fn rotate_to_extendable(&mut self) -> bool {
        if self.path.len() < 3 {
            return false;
        }
        let found = {
            let mut search = RotationSearch::new(
                &self.adjacency,
                self.m,
                self.pivots,
                &self.path,
                &self.position,
            );
            let mut found = None;
            while let Some(r) = search.next_record() {
                let u = search.records[r].endpoint;
                if self.best_extension(u).is_some() {
                    found = Some(search.chain(r));
                    break;
                }
            }
            found
        };
        match found {
            Some(chain) => {
                self.apply_chain(&chain);
                true
            }
            None => false,
        }
    }

    fn extend_maximal(&mut self) {
        if self.path.is_empty() {
            return;
        }
        loop {
            self.extend_both_ends();
            if self.rotate_to_extendable() {
                continue;
            }
            self.reverse_path();
            if self.rotate_to_extendable() {
                continue;
            }
            break;
        }
    }

    /// For u ∈ END(P, v₀) in ascending order, searches END(P_u, u) for a
    /// vertex w adjacent to u in `gstar`. With Γ as the chord source a
    /// closing edge already in Γ is preferred over the smallest w.
    fn find_closure(
        &mut self,
        source: ChordSource,
        gstar: &Graph,
        limit: usize,
    ) -> Option<Closure> {
        if self.path.len() < 3 {
            return None;
        }
        let rotations: &dyn Adjacency = match source {
            ChordSource::Gamma => &self.adjacency,
            ChordSource::GStar => gstar,
        };
        let outer = {
            let mut search =
                RotationSearch::new(rotations, self.m, self.pivots, &self.path, &self.position);
            search.run_to_completion();
            let mut ends: Vec<(usize, usize)> = search
                .records
                .iter()
                .enumerate()
                .map(|(r, rec)| (rec.endpoint, r))
                .collect();
            ends.sort_unstable();
            ends.truncate(limit);
            ends.into_iter()
                .map(|(u, r)| (u, search.chain(r)))
                .collect::<Vec<_>>()
        };
        for (u, chain) in outer {
            let mut pu = self.path.clone();
            for &i in &chain {
                pu[i + 1..].reverse();
            }
            pu.reverse();
            for (i, &v) in pu.iter().enumerate() {
                self.scratch[v] = i;
            }
            let wanted: Vec<usize> = gstar
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&w| w != pu[1])
                .collect();
            let mut best: Option<(bool, usize, usize)> = None;
            let mut search =
                RotationSearch::new(rotations, self.m, self.pivots, &pu, &self.scratch);
            let mut hits = 0;
            while let Some(r) = search.next_record() {
                let w = search.records[r].endpoint;
                if wanted.binary_search(&w).is_err() {
                    continue;
                }
                hits += 1;
                let in_gamma = self.adjacency[u].contains(&w);
                let key = (!in_gamma, w, r);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
                if hits == wanted.len() || source == ChordSource::GStar {
                    break;
                }
            }
            let found = best.map(|(_, w, r)| {
                let inner = search.chain(r);
                let mut chords = Vec::new();
                if source == ChordSource::GStar {
                    chords = chain_chords(&self.path, &chain);
                    chords.extend(chain_chords(&pu, &inner));
                }
                Closure {
                    cycle: search.materialize(r),
                    closing_edge: (u.min(w), u.max(w)),
                    chords,
                }
            });
            for &v in &pu {
                self.scratch[v] = OFF_PATH;
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// An endpoint u ∈ END(P, v₀) with a `gstar`-neighbour off the path.
    fn find_extension(&self, source: ChordSource, gstar: &Graph) -> Option<Extension> {
        if self.path.len() < 2 {
            let u = *self.path.first()?;
            let target = gstar
                .neighbors(u)
                .iter()
                .copied()
                .find(|&y| self.is_free(y))?;
            return Some(Extension {
                chain: Vec::new(),
                chords: Vec::new(),
                endpoint: u,
                target,
            });
        }
        let rotations: &dyn Adjacency = match source {
            ChordSource::Gamma => &self.adjacency,
            ChordSource::GStar => gstar,
        };
        let mut search =
            RotationSearch::new(rotations, self.m, self.pivots, &self.path, &self.position);
        while let Some(r) = search.next_record() {
            let u = search.records[r].endpoint;
            if let Some(target) = gstar
                .neighbors(u)
                .iter()
                .copied()
                .find(|&y| self.is_free(y))
            {
                let chain = search.chain(r);
                let chords = match source {
                    ChordSource::Gamma => Vec::new(),
                    ChordSource::GStar => chain_chords(&self.path, &chain),
                };
                return Some(Extension {
                    chain,
                    chords,
                    endpoint: u,
                    target,
                });
            }
        }
        None
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        if !self.adjacency[u].contains(&v) {
            self.adjacency[u].push(v);
            self.adjacency[v].push(u);
        }
    }

    /// Adds the edges missing from Γ, recording each as a booster. Refuses
    /// (adding nothing) if that would exceed the budget.
    fn absorb(
        &mut self,
        edges: &[(usize, usize)],
        boosters: &mut Vec<(usize, usize)>,
        budget: usize,
    ) -> bool {
        let mut fresh: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .filter(|&(u, v)| !self.adjacency[u].contains(&v))
            .collect();
        fresh.sort_unstable();
        fresh.dedup();
        if boosters.len() + fresh.len() > budget {
            return false;
        }
        for &(u, v) in &fresh {
            self.add_edge(u, v);
        }
        boosters.extend(fresh);
        true
    }

    /// Cuts the path at a non-M edge in its middle half, chosen from `salt`,
    /// and keeps the longer side.
    fn kick(&mut self, salt: usize) {
        let len = self.path.len();
        let start = len / 4 + splitmix64(salt as u64) as usize % (len / 2).max(1);
        let Some(j) = (start..len - 1)
            .chain(0..start)
            .find(|&j| !self.m.contains_edge(self.path[j], self.path[j + 1]))
        else {
            return;
        };
        let mut kept = self.path.clone();
        if j + 1 >= len - j - 1 {
            kept.truncate(j + 1);
        } else {
            kept.drain(..=j);
        }
        self.set_path(kept);
    }

    /// Lowest (x, y) with x on the current vertex set and y off it.
    fn outgoing_edge<A: Adjacency + ?Sized>(&self, graph: &A) -> Option<(usize, usize)> {
        (0..self.n())
            .filter(|&x| self.position[x] != OFF_PATH)
            .find_map(|x| {
                graph
                    .neighbours(x)
                    .iter()
                    .copied()
                    .filter(|&y| self.is_free(y))
                    .min()
                    .map(|y| (x, y))
            })
    }
}

/// Opens the cycle at `x`, dropping a non-M cycle edge at x, and continues
/// the resulting path along {x, y}.
fn reopen(cycle: &[usize], x: usize, y: usize, m: &Matching) -> Vec<usize> {
    let len = cycle.len();
    let j = cycle
        .iter()
        .position(|&v| v == x)
        .expect("x lies on the cycle");
    let next = cycle[(j + 1) % len];
    let mut path = Vec::with_capacity(len + 2);
    if !m.contains_edge(x, next) {
        // Drop {x, next}: walk from next forwards around to x.
        path.extend((1..=len).map(|k| cycle[(j + k) % len]));
    } else {
        // Drop {prev, x}: walk from prev backwards around to x.
        path.extend((1..=len).map(|k| cycle[(j + len - k) % len]));
    }
    path.push(y);
    if let Some(p) = m.partner(y) {
        path.push(p);
    }
    path
}

enum Step {
    Continue,
    Done(HamiltonOutcome),
}

/// Finds a Hamilton M-cycle of G* starting from the sparse subgraph Γ₀,
/// absorbing boosters from E(G*) whenever the rotation-extension search
/// gets stuck.
///
/// When the path is maximal in Γ, boosters are sought first with rotations
/// inside Γ, from either end, as a closing edge and then as an extension
/// edge. Only if that fails are rotation chords taken from G* as well; every
/// chord outside Γ used this way is absorbed and counted as a booster.
pub fn hamilton_m_cycle(
    gstar: &Graph,
    m: &Matching,
    gamma0: &Graph,
    params: HamiltonParams,
) -> HamiltonOutcome {
    let n = gstar.n();
    if n < 3 {
        return HamiltonOutcome::Failure(HamiltonFailure {
            reason: FailureReason::TooSmall,
            longest_path: (0..n.min(1)).collect(),
            boosters: Vec::new(),
        });
    }
    let adjacency: Vec<Vec<usize>> = (0..n).map(|v| gamma0.neighbors(v).to_vec()).collect();
    let seed = match m.edges().first() {
        Some(&(u, v)) => vec![u, v],
        None => match gamma0.edges().next().or_else(|| gstar.edges().next()) {
            Some((u, v)) => vec![u, v],
            None => vec![0],
        },
    };
    let mut engine = Engine::new(adjacency, m, seed);
    engine.pivots = params.pivots;
    let mut boosters: Vec<(usize, usize)> = Vec::new();
    let mut longest: Vec<usize> = engine.path.clone();
    let mut kicks = 0;

    loop {
        engine.extend_maximal();
        if engine.path.len() > longest.len() {
            longest = engine.path.clone();
        }
        debug_assert!(MPath::new(engine.path.clone()).is_m_path(&engine.adjacency, m));

        let mut step = None;
        'search: for source in [ChordSource::Gamma, ChordSource::GStar] {
            for _ in 0..2 {
                if let Some(closure) = engine.find_closure(source, gstar, params.candidate_limit) {
                    step = Some(close_and_reopen(
                        &mut engine,
                        closure,
                        gstar,
                        &mut boosters,
                        params.budget,
                    ));
                    break 'search;
                }
                if let Some(extension) = engine.find_extension(source, gstar) {
                    let mut edges = extension.chords.clone();
                    edges.push((extension.endpoint, extension.target));
                    step = Some(if engine.absorb(&edges, &mut boosters, params.budget) {
                        engine.apply_chain(&extension.chain);
                        debug_assert_eq!(engine.path.last(), Some(&extension.endpoint));
                        engine.append(extension.target);
                        Step::Continue
                    } else {
                        Step::Done(failure(FailureReason::BudgetExhausted, &longest, &boosters))
                    });
                    break 'search;
                }
                engine.reverse_path();
            }
        }
        match step {
            Some(Step::Continue) => {}
            Some(Step::Done(outcome)) => {
                return match outcome {
                    HamiltonOutcome::Failure(mut f) => {
                        f.longest_path = longest;
                        HamiltonOutcome::Failure(f)
                    }
                    success => success,
                }
            }
            None if kicks < MAX_KICKS && engine.path.len() >= 4 => {
                kicks += 1;
                engine.kick(kicks);
            }
            None => return failure(FailureReason::NoBooster, &longest, &boosters),
        }
    }
}

fn failure(
    reason: FailureReason,
    longest: &[usize],
    boosters: &[(usize, usize)],
) -> HamiltonOutcome {
    HamiltonOutcome::Failure(HamiltonFailure {
        reason,
        longest_path: longest.to_vec(),
        boosters: boosters.to_vec(),
    })
}

fn close_and_reopen(
    engine: &mut Engine<'_>,
    closure: Closure,
    gstar: &Graph,
    boosters: &mut Vec<(usize, usize)>,
    budget: usize,
) -> Step {
    let mut edges = closure.chords;
    edges.push(closure.closing_edge);
    if !engine.absorb(&edges, boosters, budget) {
        return Step::Done(failure(FailureReason::BudgetExhausted, &[], boosters));
    }
    let n = gstar.n();
    if closure.cycle.len() == n {
        return Step::Done(HamiltonOutcome::Success(HamiltonSuccess {
            cycle: closure.cycle,
            boosters: boosters.clone(),
        }));
    }
    engine.set_path(closure.cycle.clone());
    let (x, y) = match engine.outgoing_edge(&engine.adjacency) {
        Some(edge) => edge,
        None => match engine.outgoing_edge(gstar) {
            Some((x, y)) => {
                if !engine.absorb(&[(x, y)], boosters, budget) {
                    return Step::Done(failure(FailureReason::BudgetExhausted, &[], boosters));
                }
                (x, y)
            }
            None => return Step::Done(failure(FailureReason::NoBooster, &[], boosters)),
        },
    };
    engine.set_path(reopen(&closure.cycle, x, y, engine.m));
    Step::Continue
}

/// Splits V(G*) into vertex-disjoint M-paths: `first`, then greedily grown
/// maximal M-paths of what remains, each started at the smallest uncovered
/// vertex (together with its M-partner).
pub fn m_path_partition(gstar: &Graph, m: &Matching, first: &[usize]) -> Vec<Vec<usize>> {
    let n = gstar.n();
    let mut covered = vec![false; n];
    let mut adjacency: Vec<Vec<usize>> = (0..n).map(|v| gstar.neighbors(v).to_vec()).collect();
    let mut paths = Vec::new();
    let mut take = |path: Vec<usize>, covered: &mut Vec<bool>, adjacency: &mut Vec<Vec<usize>>| {
        for &v in &path {
            covered[v] = true;
        }
        for &v in &path {
            for u in std::mem::take(&mut adjacency[v]) {
                adjacency[u].retain(|&w| !covered[w]);
            }
        }
        paths.push(path);
    };
    if !first.is_empty() {
        take(first.to_vec(), &mut covered, &mut adjacency);
    }
    // M-edges cut by `first` no longer constrain the rest.
    let kept: Vec<(usize, usize)> = m
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| !covered[u] && !covered[v])
        .collect();
    let m = &Matching::new(n, &kept).expect("a sub-matching is a matching");
    let mut next = 0;
    while next < n {
        if covered[next] {
            next += 1;
            continue;
        }
        let mut seed = vec![next];
        seed.extend(m.partner(next));
        let mut engine = Engine::new(std::mem::take(&mut adjacency), m, seed);
        engine.extend_maximal();
        let path = std::mem::take(&mut engine.path);
        adjacency = engine.adjacency;
        take(path, &mut covered, &mut adjacency);
    }
    paths
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleViolation {
    NotSpanning { visited: usize, expected: usize },
    RepeatedVertex(usize),
    VertexOutOfRange(usize),
    MissingEdge(usize, usize),
    MissingMEdge(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleVerdict {
    pub violations: Vec<CycleViolation>,
}

impl CycleVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `cycle` visits every vertex of G* once, uses only G*-edges
/// (including the closing edge) and contains every M-edge.
pub fn verify_m_cycle(cycle: &[usize], gstar: &Graph, m: &Matching) -> CycleVerdict {
    let n = gstar.n();
    let mut violations = Vec::new();
    let mut seen = vec![false; n];
    let mut distinct = 0;
    for &v in cycle {
        if v >= n {
            violations.push(CycleViolation::VertexOutOfRange(v));
        } else if seen[v] {
            violations.push(CycleViolation::RepeatedVertex(v));
        } else {
            seen[v] = true;
            distinct += 1;
        }
    }
    if distinct != n || cycle.len() != n {
        violations.push(CycleViolation::NotSpanning {
            visited: distinct,
            expected: n,
        });
    }
    let len = cycle.len();
    let mut successor = HashMap::new();
    if len >= 2 {
        for k in 0..len {
            let (u, v) = (cycle[k], cycle[(k + 1) % len]);
            if !gstar.has_edge(u, v) {
                violations.push(CycleViolation::MissingEdge(u, v));
            }
            successor.insert((u.min(v), u.max(v)), ());
        }
    }
    for &(u, v) in m.edges() {
        if !successor.contains_key(&(u, v)) {
            violations.push(CycleViolation::MissingMEdge(u, v));
        }
    }
    CycleVerdict { violations }
}
