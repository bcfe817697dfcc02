//! Brute-force oracles for small graphs, written from the definitions alone.
//! Nothing here calls into the algorithms under test; the core crate only
//! supplies the graph and matching containers.

use pathcover_core::{Graph, Matching};

/// Largest vertex count accepted by the exponential oracles.
pub const LIMIT: usize = 22;

fn check_size(g: &Graph) {
    assert!(
        g.n() <= LIMIT,
        "oracle limited to {LIMIT} vertices, got {}",
        g.n()
    );
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | 1 << u))
        .collect()
}

fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            v
        })
    })
}

/// Distinct vertices, consecutive ones adjacent in `g`, and every M-edge
/// touching the path joins two consecutive vertices of it.
pub fn is_m_path(g: &Graph, m: &Matching, path: &[usize]) -> bool {
    let mut seen = vec![false; g.n()];
    for &v in path {
        if v >= g.n() || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    if path.windows(2).any(|w| !g.neighbors(w[0]).contains(&w[1])) {
        return false;
    }
    path.iter().enumerate().all(|(i, &v)| match m.partner(v) {
        None => true,
        Some(p) => (i > 0 && path[i - 1] == p) || path.get(i + 1) == Some(&p),
    })
}

/// Like [`is_m_path`] with the closing edge, requiring every vertex.
pub fn is_hamilton_m_cycle(g: &Graph, m: &Matching, cycle: &[usize]) -> bool {
    let n = cycle.len();
    if n < 3 || n != g.n() {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..n).all(|i| {
        let (v, next, prev) = (cycle[i], cycle[(i + 1) % n], cycle[(i + n - 1) % n]);
        g.neighbors(v).contains(&next) && m.partner(v).is_none_or(|p| p == next || p == prev)
    })
}

/// M-path prefixes as a reachability table: bit `v` of `table[mask]` is set
/// when some sequence on exactly `mask` ending at `v` can still be completed
/// to an M-path. A matched vertex whose partner is not yet placed must be
/// followed by it; a matched vertex whose partner is placed must have come
/// right after it.
struct PrefixTable {
    table: Vec<u32>,
    adjacency: Vec<u32>,
    partner: Vec<Option<usize>>,
}

impl PrefixTable {
    fn build(g: &Graph, m: &Matching, starts: u32) -> Self {
        check_size(g);
        let n = g.n();
        let adjacency = adjacency_masks(g);
        let partner: Vec<Option<usize>> = (0..n).map(|v| m.partner(v)).collect();
        let mut table = vec![0u32; 1 << n];
        for s in bits(starts) {
            table[1 << s] |= 1 << s;
        }
        let this = Self {
            table: Vec::new(),
            adjacency,
            partner,
        };
        for mask in 1..table.len() as u32 {
            for last in bits(table[mask as usize]) {
                for w in bits(this.adjacency[last] & !mask) {
                    if this.step_allowed(mask, last, w) {
                        table[(mask | 1 << w) as usize] |= 1 << w;
                    }
                }
            }
        }
        Self { table, ..this }
    }

    fn pending(&self, mask: u32, last: usize) -> bool {
        self.partner[last].is_some_and(|p| mask & 1 << p == 0)
    }

    fn step_allowed(&self, mask: u32, last: usize, w: usize) -> bool {
        if self.pending(mask, last) && self.partner[last] != Some(w) {
            return false;
        }
        match self.partner[w] {
            Some(p) if mask & 1 << p != 0 => p == last,
            _ => true,
        }
    }

    /// Completed M-paths on `mask`: endpoints with nothing pending.
    fn complete_ends(&self, mask: u32) -> u32 {
        bits(self.table[mask as usize])
            .filter(|&v| !self.pending(mask, v))
            .fold(0, |acc, v| acc | 1 << v)
    }

    fn reconstruct(&self, mut mask: u32, mut last: usize) -> Vec<usize> {
        let mut path = vec![last];
        while mask.count_ones() > 1 {
            let rest = mask & !(1 << last);
            let prev = bits(self.table[rest as usize] & self.adjacency[last])
                .find(|&p| self.step_allowed(rest, p, last))
                .expect("every table entry has a predecessor");
            path.push(prev);
            mask = rest;
            last = prev;
        }
        path.reverse();
        path
    }
}

/// Number of vertices on a longest M-path of `g` (0 if every vertex is
/// matched through a non-edge).
pub fn longest_m_path_len(g: &Graph, m: &Matching) -> usize {
    longest_m_path(g, m).len()
}

/// One longest M-path of `g`.
pub fn longest_m_path(g: &Graph, m: &Matching) -> Vec<usize> {
    longest_m_paths(g, m).into_iter().next().unwrap_or_default()
}

/// For every vertex that ends some longest M-path, one such path ending
/// there. Paths are listed by end vertex.
pub fn longest_m_paths(g: &Graph, m: &Matching) -> Vec<Vec<usize>> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let prefixes = PrefixTable::build(g, m, (1u32 << n) - 1);
    let mut best = 0;
    let mut found: Vec<Option<(u32, usize)>> = vec![None; n];
    for mask in 1..(1u32 << n) {
        let size = mask.count_ones();
        if size < best {
            continue;
        }
        let ends = prefixes.complete_ends(mask);
        if ends == 0 {
            continue;
        }
        if size > best {
            best = size;
            found.iter_mut().for_each(|f| *f = None);
        }
        for v in bits(ends) {
            found[v].get_or_insert((mask, v));
        }
    }
    found
        .into_iter()
        .flatten()
        .map(|(mask, v)| prefixes.reconstruct(mask, v))
        .collect()
}

/// Whether `g` has a Hamilton M-cycle. The cycle is read from vertex 0 in
/// the direction that puts its partner, if any, second.
pub fn has_hamilton_m_cycle(g: &Graph, m: &Matching) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    let prefixes = PrefixTable::build(g, m, 1);
    let full = (1u32 << n) - 1;
    bits(prefixes.complete_ends(full)).any(|v| prefixes.adjacency[v] & 1 != 0)
}

pub fn is_hamiltonian(g: &Graph) -> bool {
    has_hamilton_m_cycle(g, &Matching::empty(g.n()))
}

/// Every U with 1 ≤ |U| ≤ n/4 has at least 2|U| neighbours outside
/// U ∪ V(M), and every M-edge is an edge of `g`.
pub fn is_m_expander(g: &Graph, m: &Matching) -> bool {
    check_size(g);
    let n = g.n();
    if m.edges().iter().any(|&(u, v)| !g.neighbors(u).contains(&v)) {
        return false;
    }
    let adjacency = adjacency_masks(g);
    let matched = (0..n)
        .filter(|&v| m.is_matched(v))
        .fold(0u32, |acc, v| acc | 1 << v);
    let limit = n / 4;
    (1..(1u32 << n))
        .filter(|u| u.count_ones() as usize <= limit)
        .all(|u| {
            let around = bits(u).fold(0u32, |acc, v| acc | adjacency[v]) & !u & !matched;
            around.count_ones() >= 2 * u.count_ones()
        })
}

/// μ(g): 0 for a Hamiltonian graph, otherwise the fewest vertex-disjoint
/// paths covering every vertex.
pub fn path_cover_number(g: &Graph) -> usize {
    check_size(g);
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if is_hamiltonian(g) {
        return 0;
    }
    let prefixes = PrefixTable::build(g, &Matching::empty(n), (1u32 << n) - 1);
    let full = (1usize << n) - 1;
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // Submasks of `mask` containing its lowest vertex.
        let mut sub = rest;
        loop {
            let piece = sub | low;
            if prefixes.table[piece] != 0 && best[mask & !piece] != usize::MAX {
                best[mask] = best[mask].min(best[mask & !piece] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

/// Size of the 2-core of the unique largest component; 0 on ties.
pub fn connected_two_core_size(g: &Graph) -> usize {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for root in 0..n {
        if label[root] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[root] = id;
        let mut stack = vec![root];
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &u in g.neighbors(v) {
                if label[u] == usize::MAX {
                    label[u] = id;
                    stack.push(u);
                }
            }
        }
        sizes.push(size);
    }
    let Some(&largest) = sizes.iter().max() else {
        return 0;
    };
    if sizes.iter().filter(|&&s| s == largest).count() > 1 {
        return 0;
    }
    let id = sizes.iter().position(|&s| s == largest).unwrap();
    let mut alive: Vec<bool> = (0..n).map(|v| label[v] == id).collect();
    let mut degree: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| alive[v] && degree[v] < 2).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    queue.push(u);
                }
            }
        }
    }
    alive.iter().filter(|&&a| a).count()
}

/// Principal branch of the Lambert W function on [−1/e, 0], by Halley's
/// iteration.
pub fn lambert_w0(z: f64) -> f64 {
    assert!(
        (-(-1.0f64).exp()..=0.0).contains(&z),
        "argument {z} outside [-1/e, 0]"
    );
    let mut w = if z < -0.3 {
        -1.0 + (2.0 * (1.0 + std::f64::consts::E * z)).sqrt()
    } else {
        z
    };
    for _ in 0..100 {
        let e = w.exp();
        let f = w * e - z;
        let next = w - f / (e * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        if !next.is_finite() || (next - w).abs() <= 1e-17 {
            break;
        }
        w = next;
    }
    w
}

/// e^{-c} c^d / d! evaluated through logarithms.
pub fn poisson_pmf(d: usize, c: f64) -> f64 {
    let log_factorial: f64 = (1..=d).map(|k| (k as f64).ln()).sum();
    (d as f64 * c.ln() - c - log_factorial).exp()
}
