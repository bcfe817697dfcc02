//! Path covers of G: extraction from a Hamilton M-cycle of G*, verification,
//! the degree lower bound and an exact oracle for small graphs.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classifier::{classify_basic, Thresholds};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamilton::verify_m_cycle;
use crate::reducer::Reduction;

/// Largest graph accepted by [`exact_mu`].
pub const EXACT_MU_LIMIT: usize = 16;

/// Vertex-disjoint paths covering V(G); single vertices are paths of
/// length 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCover {
    pub paths: Vec<Vec<usize>>,
}

impl PathCover {
    pub fn size(&self) -> usize {
        self.paths.len()
    }

    /// One path per line, labels separated by spaces.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for path in &self.paths {
            let line: Vec<String> = path.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn from_lines(text: &str) -> Result<Self> {
        let mut paths = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let path = line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("bad label {t:?}"),
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            paths.push(path);
        }
        Ok(Self { paths })
    }
}

/// Expands M-edges of a G* vertex sequence into their pendant 3-paths, in G
/// labels. With `closed`, the pair (last, first) is treated as an edge too.
fn lift_sequence(r: &Reduction, seq: &[usize], closed: bool) -> Vec<usize> {
    let len = seq.len();
    let mut lifted = Vec::with_capacity(len + 2 * r.m.len());
    for k in 0..len {
        let u = seq[k];
        lifted.push(r.to_g[u]);
        if k + 1 == len && !closed {
            break;
        }
        let v = seq[(k + 1) % len];
        if r.m.contains_edge(u, v) {
            lifted.push(r.partner[&r.to_g[u]]);
            lifted.push(r.partner[&r.to_g[v]]);
        }
    }
    lifted
}

fn normalised(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Adds every vertex missing from `paths` as a singleton, ascending.
fn complete_with_singletons(n: usize, mut paths: Vec<Vec<usize>>) -> PathCover {
    let mut covered = vec![false; n];
    for &v in paths.iter().flatten() {
        covered[v] = true;
    }
    paths.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v]));
    PathCover { paths }
}

/// Translates a Hamilton M-cycle of G* into a path cover of G.
///
/// Every M-edge {u, v} of the cycle is replaced by (u, u′, v′, v), giving a
/// cycle C′ of G ∪ M′. Deleting the edges of M′ splits C′ into |M′| paths of
/// G; with M′ empty the lowest edge of C′ is deleted instead. Vertices off
/// C′ become single-vertex paths.
pub fn extract_cover(g: &Graph, r: &Reduction, cycle: &[usize]) -> Result<PathCover> {
    let verdict = verify_m_cycle(cycle, &r.gstar, &r.m);
    if !verdict.is_valid() {
        return Err(Error::Contract(format!(
            "cycle is not a Hamilton M-cycle: {:?}",
            verdict.violations
        )));
    }
    Ok(lift_closed(g, r, cycle))
}

/// Like [`extract_cover`] for a cycle of G* that need not be spanning, as
/// produced after deleting obstructing vertices. The cycle must use G*-edges
/// only and repeat no vertex. `others` are further disjoint paths of G*,
/// lifted as in [`cover_from_paths`]; remaining vertices become
/// single-vertex paths.
pub fn cover_from_cycle(
    g: &Graph,
    r: &Reduction,
    cycle: &[usize],
    others: &[Vec<usize>],
) -> Result<PathCover> {
    let k = r.gstar.n();
    let mut seen = vec![false; k];
    for &v in cycle {
        if v >= k || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Contract(format!(
                "cycle repeats or leaves G* at {v}"
            )));
        }
    }
    let len = cycle.len();
    if len < 3 || (0..len).any(|i| !r.gstar.has_edge(cycle[i], cycle[(i + 1) % len])) {
        return Err(Error::Contract("sequence is not a cycle of G*".into()));
    }
    let mut pieces = closed_pieces(r, cycle);
    pieces.extend(path_pieces(r, others, &mut seen)?);
    Ok(complete_with_singletons(g.n(), pieces))
}

fn lift_closed(g: &Graph, r: &Reduction, cycle: &[usize]) -> PathCover {
    complete_with_singletons(g.n(), closed_pieces(r, cycle))
}

/// The lifted cycle cut at its M′ edges, or at its lowest edge without any.
fn closed_pieces(r: &Reduction, cycle: &[usize]) -> Vec<Vec<usize>> {
    let lifted = lift_sequence(r, cycle, true);
    let len = lifted.len();
    let m_prime: HashSet<(usize, usize)> =
        r.m_prime.iter().map(|&(a, b)| normalised(a, b)).collect();
    let mut cuts: Vec<usize> = (0..len)
        .filter(|&k| m_prime.contains(&normalised(lifted[k], lifted[(k + 1) % len])))
        .collect();
    if cuts.is_empty() {
        let lowest = (0..len)
            .min_by_key(|&k| normalised(lifted[k], lifted[(k + 1) % len]))
            .unwrap();
        cuts.push(lowest);
    }
    // Cut k removes the edge (lifted[k], lifted[k + 1]).
    (0..cuts.len())
        .map(|i| {
            let start = cuts[i] + 1;
            let end = if i + 1 < cuts.len() {
                cuts[i + 1] + 1
            } else {
                cuts[0] + 1 + len
            };
            (start..end).map(|k| lifted[k % len]).collect()
        })
        .collect()
}

/// Cover built from vertex-disjoint paths of G* when no Hamilton M-cycle
/// was found: each path is lifted and split at its M′ edges, and the rest of
/// G is covered by single vertices. An M-edge with one endpoint on a path, or
/// with endpoints apart, leaves its pendant vertices as singletons.
pub fn cover_from_paths(g: &Graph, r: &Reduction, paths: &[Vec<usize>]) -> Result<PathCover> {
    let mut seen = vec![false; r.gstar.n()];
    Ok(complete_with_singletons(
        g.n(),
        path_pieces(r, paths, &mut seen)?,
    ))
}

/// Lifted paths split at their M′ edges. `seen` marks G* vertices already
/// used and is updated.
fn path_pieces(r: &Reduction, paths: &[Vec<usize>], seen: &mut [bool]) -> Result<Vec<Vec<usize>>> {
    let m_prime: HashSet<(usize, usize)> =
        r.m_prime.iter().map(|&(a, b)| normalised(a, b)).collect();
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for path in paths {
        if let Some(w) = path.windows(2).find(|w| !r.gstar.has_edge(w[0], w[1])) {
            return Err(Error::Contract(format!(
                "fallback path leaves G* at {{{}, {}}}",
                w[0], w[1]
            )));
        }
        for &v in path {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Contract(format!("fallback paths share vertex {v}")));
            }
        }
        let lifted = lift_sequence(r, path, false);
        let mut current = Vec::new();
        for (k, &v) in lifted.iter().enumerate() {
            if k > 0 && m_prime.contains(&normalised(lifted[k - 1], v)) {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(v);
        }
        if !current.is_empty() {
            pieces.push(current);
        }
    }
    Ok(pieces)
}

pub fn cover_from_path(g: &Graph, r: &Reduction, path: &[usize]) -> Result<PathCover> {
    cover_from_paths(g, r, &[path.to_vec()])
}

/// The cover of G by single vertices.
pub fn trivial_cover(g: &Graph) -> PathCover {
    complete_with_singletons(g.n(), Vec::new())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverViolation {
    EmptyPath(usize),
    VertexOutOfRange(usize),
    Overlap(usize),
    Uncovered(usize),
    NonEdge(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverVerdict {
    pub violations: Vec<CoverViolation>,
}

impl CoverVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_cover(g: &Graph, cover: &PathCover) -> CoverVerdict {
    let n = g.n();
    let mut violations = Vec::new();
    let mut seen = vec![false; n];
    for (i, path) in cover.paths.iter().enumerate() {
        if path.is_empty() {
            violations.push(CoverViolation::EmptyPath(i));
        }
        for &v in path {
            if v >= n {
                violations.push(CoverViolation::VertexOutOfRange(v));
            } else if std::mem::replace(&mut seen[v], true) {
                violations.push(CoverViolation::Overlap(v));
            }
        }
        for w in path.windows(2) {
            if w[0] >= n || w[1] >= n || !g.has_edge(w[0], w[1]) {
                violations.push(CoverViolation::NonEdge(w[0], w[1]));
            }
        }
    }
    violations.extend((0..n).filter(|&v| !seen[v]).map(CoverViolation::Uncovered));
    CoverVerdict { violations }
}

/// |V₀| + ⌈|V₁|/2⌉: a path holds at most two degree-1 vertices or a single
/// isolated one.
pub fn lower_bound_mu(g: &Graph) -> usize {
    let basic = classify_basic(
        g,
        &Thresholds {
            small_deg: 2,
            large_deg: usize::MAX,
            close_radius: 0,
        },
    );
    basic.v0.len() + basic.v1.len().div_ceil(2)
}

/// The lower bound for a graph known not to be Hamiltonian: at least one
/// path is always needed.
pub fn certified_lower_bound(g: &Graph) -> usize {
    lower_bound_mu(g).max(1)
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | 1 << u))
        .collect()
}

/// Exhaustive Hamiltonicity check over (subset, endpoint) states anchored at
/// vertex 0. Graphs with fewer than three vertices have no cycle.
pub fn is_hamiltonian(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > EXACT_MU_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXACT_MU_LIMIT,
        });
    }
    if n < 3 {
        return Ok(false);
    }
    let adj = adjacency_masks(g);
    let full = (1u32 << n) - 1;
    // reach[mask] = endpoints v such that a path from 0 through exactly mask ends at v.
    let mut reach = vec![0u32; 1 << n];
    reach[1] = 1;
    for mask in 1..=full {
        if mask & 1 == 0 || reach[mask as usize] == 0 {
            continue;
        }
        let mut ends = reach[mask as usize];
        while ends != 0 {
            let v = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = adj[v] & !mask;
            while next != 0 {
                let w = next.trailing_zeros();
                next &= next - 1;
                reach[(mask | 1 << w) as usize] |= 1 << w;
            }
        }
    }
    Ok(reach[full as usize] & adj[0] != 0)
}

/// Path cover number μ(G): 0 if G is Hamiltonian, otherwise the fewest
/// vertex-disjoint paths covering V(G).
pub fn exact_mu(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > EXACT_MU_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXACT_MU_LIMIT,
        });
    }
    if n == 0 || is_hamiltonian(g)? {
        return Ok(0);
    }
    let adj = adjacency_masks(g);
    let states = 1usize << n;
    const UNSET: u8 = u8::MAX;
    // best[mask * n + v]: fewest paths covering mask with the last one ending at v.
    let mut best = vec![UNSET; states * n];
    for v in 0..n {
        best[(1 << v) * n + v] = 1;
    }
    for mask in 1..states {
        for v in 0..n {
            let here = best[mask * n + v];
            if here == UNSET {
                continue;
            }
            let free = !(mask as u32) & ((1u32 << n) - 1);
            let mut rest = free;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cost = if adj[v] >> w & 1 == 1 { here } else { here + 1 };
                let slot = &mut best[(mask | 1 << w) * n + w];
                if cost < *slot {
                    *slot = cost;
                }
            }
        }
    }
    Ok((0..n).map(|v| best[(states - 1) * n + v]).min().unwrap() as usize)
}

/// Cover size against the degree bound and the target ½ce⁻ᶜn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuGap {
    pub cover_size: usize,
    pub lower_bound: usize,
    pub target: f64,
    pub ratio_to_lower_bound: f64,
    pub ratio_to_target: f64,
}

pub fn mu_target(c: f64, n: usize) -> f64 {
    0.5 * c * (-c).exp() * n as f64
}

pub fn mu_gap(g: &Graph, cover: &PathCover, c: f64) -> MuGap {
    let lower_bound = lower_bound_mu(g);
    let target = mu_target(c, g.n());
    let size = cover.size();
    MuGap {
        cover_size: size,
        lower_bound,
        target,
        ratio_to_lower_bound: size as f64 / lower_bound.max(1) as f64,
        ratio_to_target: size as f64 / target,
    }
}
