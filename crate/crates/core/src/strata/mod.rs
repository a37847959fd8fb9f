//! Decorated strata and tautological classes as finite sums of them.

mod ops;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact::Rational;
use crate::graphs::{canonicalize, ColoredGraph, StableGraph};

pub use ops::{
    boundary_divisors, edge_type, expand_markers, integrate, integrate_decorated, multiply_divisor,
    multiply_divisor_terms, push_forward, substitute_decorated, BoundaryType, Divisor, ExpandOptions,
};
pub use text::{parse_class, parse_term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HodgeFactor {
    Lambda(u32),
    Ch(u32),
}

impl HodgeFactor {
    pub fn degree(&self) -> u32 {
        match *self {
            HodgeFactor::Lambda(i) | HodgeFactor::Ch(i) => i,
        }
    }
}

impl fmt::Display for HodgeFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HodgeFactor::Lambda(i) => write!(f, "lambda{i}"),
            HodgeFactor::Ch(i) => write!(f, "ch{i}"),
        }
    }
}

/// Decorations living on one vertex: kappa monomial, Hodge monomial and an
/// optional marker P^{g(v)}_{g(v)}(0,...,0) awaiting substitution.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexData {
    pub kappa: Vec<u32>,
    pub hodge: Vec<HodgeFactor>,
    pub pixton: bool,
}

impl VertexData {
    pub fn is_plain(&self) -> bool {
        self.kappa.is_empty() && self.hodge.is_empty() && !self.pixton
    }

    pub fn degree(&self, genus: u32) -> u32 {
        self.kappa.iter().sum::<u32>()
            + self.hodge.iter().map(|h| h.degree()).sum::<u32>()
            + if self.pixton { genus } else { 0 }
    }

    /// False when the Hodge part vanishes for the given vertex genus.
    pub fn hodge_survives(&self, genus: u32) -> bool {
        self.hodge.iter().all(|h| match *h {
            HodgeFactor::Lambda(i) => i <= genus,
            HodgeFactor::Ch(k) => genus > 0 && k % 2 == 1,
        })
    }

    pub(crate) fn normalize(&mut self) {
        self.kappa.sort_unstable();
        self.hodge.retain(|h| *h != HodgeFactor::Lambda(0));
        self.hodge.sort_unstable();
    }

    fn label(&self, genus: u32) -> Vec<u32> {
        let mut l = vec![genus, self.pixton as u32, self.hodge.len() as u32];
        for h in &self.hodge {
            match *h {
                HodgeFactor::Lambda(i) => l.extend_from_slice(&[0, i]),
                HodgeFactor::Ch(i) => l.extend_from_slice(&[1, i]),
            }
        }
        l.extend_from_slice(&self.kappa);
        l
    }
}

/// A stable graph with a psi exponent on every half-edge and data on every
/// vertex; stands for the pushforward of the decoration along the gluing map
/// with no automorphism factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decorated {
    pub graph: StableGraph,
    pub psi: Vec<u32>,
    pub vertex: Vec<VertexData>,
}

impl Decorated {
    pub fn new(graph: StableGraph) -> Self {
        let psi = vec![0; graph.num_half_edges()];
        let vertex = vec![VertexData::default(); graph.num_vertices()];
        Decorated { graph, psi, vertex }
    }

    pub fn trivial(g: u32, n: usize) -> Self {
        Self::new(StableGraph::trivial(g, n))
    }

    pub fn genus(&self) -> u32 {
        self.graph.genus()
    }

    pub fn num_markings(&self) -> usize {
        self.graph.num_legs()
    }

    pub fn codim(&self) -> u32 {
        self.graph.num_edges() as u32
            + self.psi.iter().sum::<u32>()
            + self
                .vertex
                .iter()
                .enumerate()
                .map(|(v, d)| d.degree(self.graph.vertex_genus(v)))
                .sum::<u32>()
    }

    pub fn has_markers(&self) -> bool {
        self.vertex.iter().any(|d| d.pixton)
    }

    /// Vertex dimension minus decoration degree at `v`; negative means zero.
    pub fn vertex_excess(&self, v: usize) -> i64 {
        let gv = self.graph.vertex_genus(v);
        let hs = self.graph.half_edges_at(v);
        let dim = 3 * gv as i64 - 3 + hs.len() as i64;
        let deg: u32 = hs.iter().map(|&h| self.psi[h]).sum::<u32>() + self.vertex[v].degree(gv);
        dim - deg as i64
    }

    /// True when some vertex factor is already forced to vanish.
    pub fn is_obviously_zero(&self) -> bool {
        (0..self.graph.num_vertices()).any(|v| {
            !self.vertex[v].hodge_survives(self.graph.vertex_genus(v)) || self.vertex_excess(v) < 0
        })
    }

    fn colored(&self) -> ColoredGraph {
        let g = &self.graph;
        let n = g.num_legs();
        ColoredGraph {
            labels: (0..g.num_vertices())
                .map(|v| self.vertex[v].label(g.vertex_genus(v)))
                .collect(),
            legs: (0..n).map(|i| (g.legs()[i], self.psi[i])).collect(),
            edges: (0..g.num_edges())
                .map(|e| {
                    let (a, b) = g.edges()[e];
                    let (h0, h1) = g.edge_half_edges(e);
                    (a, self.psi[h0], b, self.psi[h1])
                })
                .collect(),
        }
    }

    /// Canonical representative together with its automorphism count.
    pub fn canonical(&self) -> (Decorated, u64) {
        let c = canonicalize(&self.colored());
        let g = &self.graph;
        let mut pos = vec![0usize; g.num_vertices()];
        for (p, &v) in c.order.iter().enumerate() {
            pos[v] = p;
        }
        let keys: Vec<(u32, u32, u32, u32)> = (0..g.num_edges())
            .map(|e| {
                let (a, b) = g.edges()[e];
                let (h0, h1) = g.edge_half_edges(e);
                (pos[a] as u32, self.psi[h0], pos[b] as u32, self.psi[h1])
            })
            .collect();
        let (graph, hmap) = g.relabel(&c.order, &keys);
        let mut psi = vec![0u32; self.psi.len()];
        for (h, &e) in self.psi.iter().enumerate() {
            psi[hmap[h]] = e;
        }
        let vertex = c.order.iter().map(|&v| self.vertex[v].clone()).collect();
        (Decorated { graph, psi, vertex }, c.automorphisms())
    }

    pub fn automorphism_order(&self) -> u64 {
        canonicalize(&self.colored()).automorphisms()
    }
}

impl fmt::Display for Decorated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.graph)?;
        let psi: Vec<String> = self
            .psi
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(h, e)| format!("{}:{}", h + 1, e))
            .collect();
        if !psi.is_empty() {
            write!(f, " * psi{{{}}}", psi.join(","))?;
        }
        let kappa: Vec<String> = self
            .vertex
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.kappa.is_empty())
            .map(|(v, d)| {
                let ks: Vec<String> = d.kappa.iter().map(|k| k.to_string()).collect();
                format!("{}:[{}]", v, ks.join(","))
            })
            .collect();
        if !kappa.is_empty() {
            write!(f, " * kappa{{{}}}", kappa.join(","))?;
        }
        let markers: Vec<String> = self
            .vertex
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.hodge.is_empty() || d.pixton)
            .map(|(v, d)| {
                let mut ms: Vec<String> = d.hodge.iter().map(|h| h.to_string()).collect();
                if d.pixton {
                    ms.push("P".into());
                }
                format!("{}:[{}]", v, ms.join(","))
            })
            .collect();
        if !markers.is_empty() {
            write!(f, " * marker{{{}}}", markers.join(","))?;
        }
        Ok(())
    }
}

/// A tautological class on M_{g,n}: rational combination of canonical
/// decorated strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautClass {
    g: u32,
    n: usize,
    terms: BTreeMap<Decorated, Rational>,
}

impl TautClass {
    pub fn zero(g: u32, n: usize) -> Self {
        TautClass {
            g,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn fundamental(g: u32, n: usize) -> Self {
        let mut c = Self::zero(g, n);
        c.add_term(Decorated::trivial(g, n), Rational::one());
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Decorated, Rational)>>(g: u32, n: usize, terms: I) -> Self {
        let mut c = Self::zero(g, n);
        for (d, q) in terms {
            c.add_term(d, q);
        }
        c
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn num_markings(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n as i64
    }

    pub fn add_term(&mut self, d: Decorated, q: Rational) {
        if q.is_zero() {
            return;
        }
        debug_assert_eq!(d.genus(), self.g);
        debug_assert_eq!(d.num_markings(), self.n);
        let (canon, _) = d.canonical();
        self.add_canonical(canon, q);
    }

    /// Adds a term already in canonical form.
    pub(crate) fn add_canonical(&mut self, canon: Decorated, q: Rational) {
        let entry = self.terms.entry(canon.clone()).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&canon);
        }
    }

    pub fn add_class(&mut self, other: &TautClass) {
        for (d, q) in &other.terms {
            self.add_canonical(d.clone(), q.clone());
        }
    }

    pub fn scaled(&self, k: &Rational) -> TautClass {
        let mut out = Self::zero(self.g, self.n);
        if k.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(d, q)| (d.clone(), q * k)).collect();
        out
    }

    pub fn sub(&self, other: &TautClass) -> TautClass {
        let mut out = self.clone();
        out.add_class(&other.scaled(&-Rational::one()));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Decorated, &Rational)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> Vec<(Decorated, Rational)> {
        self.terms.iter().map(|(d, q)| (d.clone(), q.clone())).collect()
    }

    pub fn coefficient(&self, d: &Decorated) -> Rational {
        let (c, _) = d.canonical();
        self.terms.get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sorted distinct codimensions of the terms.
    pub fn codims(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|d| d.codim()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn has_markers(&self) -> bool {
        self.terms.keys().any(|d| d.has_markers())
    }
}

impl fmt::Display for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} * {}", q, d)?;
        }
        Ok(())
    }
}
