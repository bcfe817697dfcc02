use crate::error::{Error, Result};

/// A matching on vertices `0..n`: a set of pairwise vertex-disjoint pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Option<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Self {
            partner: vec![None; n],
            edges: Vec::new(),
        }
    }

    /// Edges are normalised to `(min, max)` and kept in the given order.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut matching = Self::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::NotAMatching(u));
            }
            for x in [u, v] {
                if matching.partner[x].is_some() {
                    return Err(Error::NotAMatching(x));
                }
            }
            matching.partner[u] = Some(v);
            matching.partner[v] = Some(u);
            matching.edges.push((u.min(v), u.max(v)));
        }
        Ok(matching)
    }

    #[inline]
    pub fn partner(&self, v: usize) -> Option<usize> {
        self.partner.get(v).copied().flatten()
    }

    #[inline]
    pub fn is_matched(&self, v: usize) -> bool {
        self.partner(v).is_some()
    }

    #[inline]
    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.partner(u) == Some(v)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Number of vertices the matching is defined over.
    pub fn universe(&self) -> usize {
        self.partner.len()
    }

    /// Covered vertices, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.partner.len())
            .filter(|&v| self.partner[v].is_some())
            .collect()
    }
}
