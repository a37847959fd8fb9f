//! Stable graphs, their automorphisms and enumeration.
//!
//! Half-edges are numbered globally: the leg of marking `i` (1-based) is
//! half-edge `i - 1`, and edge `e` owns half-edges `n + 2e` and `n + 2e + 1`
//! where `n` is the number of legs.

pub mod canon;
mod enumerate;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
pub use canon::{canonicalize, Canonical, ColoredGraph};
pub use enumerate::{
    enumerate_circular, enumerate_feynman, enumerate_feynman_with_legs, enumerate_stable,
    enumerate_with,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl StableGraph {
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nv = genera.len();
        if nv == 0 {
            return Err(Error::InvalidArgument("graph without vertices".into()));
        }
        if legs.iter().any(|&v| v >= nv) || edges.iter().any(|&(a, b)| a >= nv || b >= nv) {
            return Err(Error::InvalidArgument("vertex index out of range".into()));
        }
        let g = StableGraph {
            genera,
            legs,
            edges,
        };
        if !g.is_connected() {
            return Err(Error::InvalidArgument("graph is not connected".into()));
        }
        Ok(g)
    }

    pub(crate) fn from_parts(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Self {
        StableGraph {
            genera,
            legs,
            edges,
        }
    }

    /// The graph of the open stratum of M_{g,n}.
    pub fn trivial(g: u32, n: usize) -> Self {
        StableGraph {
            genera: vec![g],
            legs: vec![0; n],
            edges: Vec::new(),
        }
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.legs.len() + 2 * self.edges.len()
    }

    pub fn h1(&self) -> u32 {
        (self.edges.len() + 1 - self.genera.len()) as u32
    }

    pub fn genus(&self) -> u32 {
        self.h1() + self.genera.iter().sum::<u32>()
    }

    pub fn edge_half_edges(&self, e: usize) -> (usize, usize) {
        let n = self.legs.len();
        (n + 2 * e, n + 2 * e + 1)
    }

    pub fn half_edge_vertex(&self, h: usize) -> usize {
        let n = self.legs.len();
        if h < n {
            self.legs[h]
        } else {
            let e = (h - n) / 2;
            if (h - n) % 2 == 0 {
                self.edges[e].0
            } else {
                self.edges[e].1
            }
        }
    }

    /// Half-edge paired with `h` by an edge, or None for a leg.
    pub fn partner(&self, h: usize) -> Option<usize> {
        let n = self.legs.len();
        if h < n {
            None
        } else if (h - n) % 2 == 0 {
            Some(h + 1)
        } else {
            Some(h - 1)
        }
    }

    /// Half-edges at `v` in increasing order.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges())
            .filter(|&h| self.half_edge_vertex(h) == v)
            .collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&w| w == v).count()
            + self
                .edges
                .iter()
                .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
                .sum::<usize>()
    }

    pub fn is_vertex_stable(&self, v: usize) -> bool {
        2 * self.genera[v] as usize + self.valence(v) > 2
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.is_vertex_stable(v))
    }

    pub fn is_connected(&self) -> bool {
        self.component_without(None, 0).len() == self.num_vertices()
    }

    /// Vertices reachable from `start` without using edge `skip`.
    pub fn component_without(&self, skip: Option<usize>, start: usize) -> Vec<usize> {
        let nv = self.num_vertices();
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if Some(e) == skip {
                    continue;
                }
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    queue.push_back(other);
                }
            }
        }
        (0..nv).filter(|&v| seen[v]).collect()
    }

    /// Circular graphs: a single cycle with no legs, every vertex of valence two.
    pub fn is_circular(&self) -> bool {
        self.legs.is_empty()
            && self.h1() == 1
            && (0..self.num_vertices()).all(|v| self.valence(v) == 2)
    }

    pub fn colored(&self) -> ColoredGraph {
        ColoredGraph {
            labels: self.genera.iter().map(|&g| vec![g]).collect(),
            legs: self.legs.iter().map(|&v| (v, 0)).collect(),
            edges: self.edges.iter().map(|&(a, b)| (a, 0, b, 0)).collect(),
        }
    }

    pub fn canonical(&self) -> Canonical {
        canonicalize(&self.colored())
    }

    /// Canonical encoding; equal exactly for isomorphic graphs (legs fixed).
    pub fn canonical_form(&self) -> Vec<u32> {
        self.canonical().encoding
    }

    pub fn automorphism_order(&self) -> u64 {
        self.canonical().automorphisms()
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.num_legs() == other.num_legs() && self.canonical_form() == other.canonical_form()
    }

    /// Relabels vertices by `order` (position to old vertex) and sorts edges
    /// by the given keys, returning the new graph and the half-edge map.
    pub(crate) fn relabel(&self, order: &[usize], edge_keys: &[(u32, u32, u32, u32)]) -> (StableGraph, Vec<usize>) {
        let nv = self.num_vertices();
        let n = self.num_legs();
        let mut pos = vec![0usize; nv];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        // edge_keys[e] = (pa, ca, pb, cb) as seen from original orientation
        let mut idx: Vec<(usize, bool, (u32, u32, u32, u32))> = edge_keys
            .iter()
            .enumerate()
            .map(|(e, &(a, ca, b, cb))| {
                if (a, ca) <= (b, cb) {
                    (e, false, (a, ca, b, cb))
                } else {
                    (e, true, (b, cb, a, ca))
                }
            })
            .collect();
        idx.sort_by(|x, y| x.2.cmp(&y.2));
        let mut hmap = vec![0usize; self.num_half_edges()];
        for (i, h) in hmap.iter_mut().enumerate().take(n) {
            *h = i;
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (new_e, &(old_e, flip, key)) in idx.iter().enumerate() {
            edges.push((key.0 as usize, key.2 as usize));
            let (h0, h1) = (n + 2 * old_e, n + 2 * old_e + 1);
            let (n0, n1) = (n + 2 * new_e, n + 2 * new_e + 1);
            if flip {
                hmap[h0] = n1;
                hmap[h1] = n0;
            } else {
                hmap[h0] = n0;
                hmap[h1] = n1;
            }
        }
        let genera = order.iter().map(|&v| self.genera[v]).collect();
        let legs = self.legs.iter().map(|&v| pos[v]).collect();
        (StableGraph { genera, legs, edges }, hmap)
    }

    /// Canonically relabeled copy of the undecorated graph.
    pub fn canonical_graph(&self) -> StableGraph {
        let c = self.canonical();
        let mut pos = vec![0usize; self.num_vertices()];
        for (p, &v) in c.order.iter().enumerate() {
            pos[v] = p;
        }
        let keys: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (pos[a] as u32, 0, pos[b] as u32, 0))
            .collect();
        self.relabel(&c.order, &keys).0
    }

    /// Adds a loop at `v`, lowering its genus by one. The new edge is the last.
    pub fn degenerate_loop(&self, v: usize) -> Option<StableGraph> {
        if self.genera[v] == 0 {
            return None;
        }
        let mut g = self.clone();
        g.genera[v] -= 1;
        g.edges.push((v, v));
        Some(g)
    }

    /// Splits `v` into itself (genus `h`, keeping half-edges `keep`) and a new
    /// last vertex carrying the rest, joined by a new last edge whose first
    /// half-edge sits at `v`.
    pub fn degenerate_split(&self, v: usize, h: u32, keep: &[usize]) -> Option<StableGraph> {
        if h > self.genera[v] {
            return None;
        }
        let n = self.num_legs();
        let new_v = self.num_vertices();
        let mut g = self.clone();
        g.genera[v] = h;
        g.genera.push(self.genera[v] - h);
        for hh in self.half_edges_at(v) {
            if keep.contains(&hh) {
                continue;
            }
            if hh < n {
                g.legs[hh] = new_v;
            } else {
                let e = (hh - n) / 2;
                if (hh - n) % 2 == 0 {
                    g.edges[e].0 = new_v;
                } else {
                    g.edges[e].1 = new_v;
                }
            }
        }
        g.edges.push((v, new_v));
        Some(g)
    }

    /// Replaces vertex `v` by the graph `inner`, whose legs correspond to the
    /// half-edges at `v` in increasing order. Returns the new graph, the map
    /// from inner vertices and the map from inner half-edges.
    pub fn substitute(&self, v: usize, inner: &StableGraph) -> Result<(StableGraph, Vec<usize>, Vec<usize>)> {
        let hs = self.half_edges_at(v);
        if inner.num_legs() != hs.len() || inner.genus() != self.genera[v] {
            return Err(Error::InvalidArgument(format!(
                "cannot substitute a graph of type ({},{}) at a vertex of type ({},{})",
                inner.genus(),
                inner.num_legs(),
                self.genera[v],
                hs.len()
            )));
        }
        let n = self.num_legs();
        let nv = self.num_vertices();
        let ne = self.num_edges();
        let vmap: Vec<usize> = (0..inner.num_vertices())
            .map(|w| if w == 0 { v } else { nv + w - 1 })
            .collect();
        let mut g = self.clone();
        g.genera[v] = inner.genera[0];
        g.genera.extend_from_slice(&inner.genera[1..]);
        for (j, &hh) in hs.iter().enumerate() {
            let target = vmap[inner.legs[j]];
            if hh < n {
                g.legs[hh] = target;
            } else {
                let e = (hh - n) / 2;
                if (hh - n) % 2 == 0 {
                    g.edges[e].0 = target;
                } else {
                    g.edges[e].1 = target;
                }
            }
        }
        for &(a, b) in &inner.edges {
            g.edges.push((vmap[a], vmap[b]));
        }
        let m = inner.num_legs();
        let mut hmap = vec![0usize; inner.num_half_edges()];
        for (j, slot) in hmap.iter_mut().enumerate().take(m) {
            *slot = hs[j];
        }
        for e in 0..inner.num_edges() {
            hmap[m + 2 * e] = n + 2 * (ne + e);
            hmap[m + 2 * e + 1] = n + 2 * (ne + e) + 1;
        }
        Ok((g, vmap, hmap))
    }
}

impl fmt::Display for StableGraph {
    /// Graph record: vertices, legs as (marking, vertex), edges as pairs of
    /// (vertex, half-edge) with 1-based half-edge labels.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self.genera.iter().map(|g| g.to_string()).collect();
        let legs: Vec<String> = self
            .legs
            .iter()
            .enumerate()
            .map(|(i, v)| format!("({},{})", i + 1, v))
            .collect();
        let edges: Vec<String> = (0..self.num_edges())
            .map(|e| {
                let (h0, h1) = self.edge_half_edges(e);
                let (a, b) = self.edges[e];
                format!("(({},{}),({},{}))", a, h0 + 1, b, h1 + 1)
            })
            .collect();
        write!(
            f,
            "Graph[vertices:[{}], legs:[{}], edges:[{}]]",
            verts.join(","),
            legs.join(","),
            edges.join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_and_split() {
        let t = StableGraph::trivial(2, 1);
        let l = t.degenerate_loop(0).unwrap();
        assert_eq!(l.genus(), 2);
        assert_eq!(l.h1(), 1);
        let s = t.degenerate_split(0, 1, &[]).unwrap();
        assert_eq!(s.legs(), &[1]);
        assert!(s.is_stable());
        assert_eq!(s.half_edge_vertex(1), 0);
        assert_eq!(s.half_edge_vertex(2), 1);
        assert_eq!(s.partner(1), Some(2));
        assert_eq!(s.partner(2), Some(1));
        assert_eq!(s.partner(0), None);
    }

    #[test]
    fn substitution_preserves_genus() {
        let outer = StableGraph::trivial(3, 0).degenerate_loop(0).unwrap();
        let inner = StableGraph::trivial(2, 2).degenerate_split(0, 1, &[0]).unwrap();
        let (g, _, hmap) = outer.substitute(0, &inner).unwrap();
        assert_eq!(g.genus(), 3);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(hmap, vec![0, 1, 2, 3]);
        assert!(g.is_stable());
    }

    #[test]
    fn record_format() {
        let l = StableGraph::trivial(1, 1).degenerate_loop(0).unwrap();
        assert_eq!(l.to_string(), "Graph[vertices:[0], legs:[(1,0)], edges:[((0,2),(0,3))]]");
    }
}
