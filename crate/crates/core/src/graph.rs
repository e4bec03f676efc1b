//! Weighted plumbing forests.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque vertex label. Labels are totally ordered; that order fixes the
/// row order of linking matrices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

/// A plumbing diagram: integer-framed vertices joined by unsigned edges.
///
/// The graph is always a simple forest; every mutator that would break that
/// is rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlumbingGraph {
    weights: BTreeMap<VertexId, i64>,
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl PlumbingGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex and edge lists, checking every invariant.
    pub fn from_parts<I, E>(vertices: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, i64)>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Self::new();
        for (id, w) in vertices {
            g.add_vertex(id, w)?;
        }
        for (u, v) in edges {
            g.add_edge(&u, &v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: VertexId, weight: i64) -> Result<()> {
        if self.weights.contains_key(&id) {
            return Err(Error::Domain(format!("duplicate vertex id `{id}`")));
        }
        self.adjacency.insert(id.clone(), BTreeSet::new());
        self.weights.insert(id, weight);
        Ok(())
    }

    /// Joins `u` and `v`. Rejects loops, parallel edges, unknown ids and
    /// edges that would close a cycle.
    pub fn add_edge(&mut self, u: &VertexId, v: &VertexId) -> Result<()> {
        if u == v {
            return Err(Error::Domain(format!("loop at `{u}`")));
        }
        for id in [u, v] {
            if !self.weights.contains_key(id) {
                return Err(Error::Domain(format!(
                    "edge references unknown vertex `{id}`"
                )));
            }
        }
        if self.adjacent(u, v) {
            return Err(Error::Domain(format!("parallel edge `{u}`-`{v}`")));
        }
        if self.connected(u, v) {
            return Err(Error::Domain(format!(
                "edge `{u}`-`{v}` would close a cycle"
            )));
        }
        self.adjacency
            .get_mut(u)
            .expect("checked")
            .insert(v.clone());
        self.adjacency
            .get_mut(v)
            .expect("checked")
            .insert(u.clone());
        Ok(())
    }

    /// Removes `id` and its incident edges, returning its weight.
    pub fn remove_vertex(&mut self, id: &VertexId) -> Option<i64> {
        let w = self.weights.remove(id)?;
        for n in self.adjacency.remove(id).unwrap_or_default() {
            if let Some(set) = self.adjacency.get_mut(&n) {
                set.remove(id);
            }
        }
        Some(w)
    }

    pub fn remove_edge(&mut self, u: &VertexId, v: &VertexId) -> bool {
        let a = self.adjacency.get_mut(u).is_some_and(|s| s.remove(v));
        let b = self.adjacency.get_mut(v).is_some_and(|s| s.remove(u));
        a && b
    }

    pub fn set_weight(&mut self, id: &VertexId, weight: i64) -> Result<()> {
        match self.weights.get_mut(id) {
            Some(w) => {
                *w = weight;
                Ok(())
            }
            None => Err(Error::Domain(format!("unknown vertex `{id}`"))),
        }
    }

    pub fn weight(&self, id: &VertexId) -> Option<i64> {
        self.weights.get(id).copied()
    }

    pub fn contains(&self, id: &VertexId) -> bool {
        self.weights.contains_key(id)
    }

    pub fn neighbors(&self, id: &VertexId) -> impl Iterator<Item = &VertexId> + '_ {
        self.adjacency.get(id).into_iter().flatten()
    }

    pub fn valence(&self, id: &VertexId) -> usize {
        self.adjacency.get(id).map_or(0, BTreeSet::len)
    }

    pub fn adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        self.adjacency.get(u).is_some_and(|s| s.contains(v))
    }

    /// Vertices in id order with their weights.
    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, i64)> + '_ {
        self.weights.iter().map(|(k, &w)| (k, w))
    }

    pub fn ids(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.weights.keys()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(u, ns)| ns.iter().filter(move |v| u < *v).map(move |v| (u, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// True if a path joins `u` and `v`.
    pub fn connected(&self, u: &VertexId, v: &VertexId) -> bool {
        if u == v {
            return self.contains(u);
        }
        let mut seen = BTreeSet::from([u]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for n in self.neighbors(x) {
                if n == v {
                    return true;
                }
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        false
    }

    /// Connected components as sorted id lists, ordered by their smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.weights.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = vec![start.clone()];
            seen.insert(start);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for n in self.neighbors(x) {
                    if seen.insert(n) {
                        comp.push(n.clone());
                        queue.push_back(n);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// The subgraph spanned by `ids`.
    pub fn induced(&self, ids: &[VertexId]) -> PlumbingGraph {
        let keep: BTreeSet<&VertexId> = ids.iter().collect();
        let mut g = PlumbingGraph::new();
        for id in &keep {
            if let Some(w) = self.weight(id) {
                g.weights.insert((*id).clone(), w);
                g.adjacency.insert((*id).clone(), BTreeSet::new());
            }
        }
        for (u, v) in self.edges() {
            if keep.contains(u) && keep.contains(v) {
                g.adjacency.get_mut(u).expect("kept").insert(v.clone());
                g.adjacency.get_mut(v).expect("kept").insert(u.clone());
            }
        }
        g
    }

    /// Re-checks the forest invariants from scratch.
    pub fn validate(&self) -> Result<()> {
        for (u, ns) in &self.adjacency {
            if !self.weights.contains_key(u) {
                return Err(Error::Domain(format!("dangling adjacency for `{u}`")));
            }
            for v in ns {
                if v == u {
                    return Err(Error::Domain(format!("loop at `{u}`")));
                }
                if !self.adjacency.get(v).is_some_and(|s| s.contains(u)) {
                    return Err(Error::Domain(format!("asymmetric edge `{u}`-`{v}`")));
                }
            }
        }
        if self.weights.len() != self.adjacency.len() {
            return Err(Error::Domain("vertex and adjacency tables disagree".into()));
        }
        // A simple graph is a forest iff |E| = |V| - #components.
        if self.edge_count() + self.components().len() != self.vertex_count() {
            return Err(Error::Domain("graph contains a cycle".into()));
        }
        Ok(())
    }
}
