use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Decorated, HodgeFactor, TautClass, VertexData};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::graphs::StableGraph;
use crate::par;

/// Type of a boundary divisor, normalized so that equal divisors compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryType {
    Irr,
    /// One side has genus `genus` and carries the (1-based) `markings`.
    Sep { genus: u32, markings: Vec<usize> },
}

impl BoundaryType {
    pub fn separating(g: u32, n: usize, h: u32, markings: &[usize]) -> Self {
        let mut s: Vec<usize> = markings.to_vec();
        s.sort_unstable();
        let comp: Vec<usize> = (1..=n).filter(|i| !s.contains(i)).collect();
        let a = (h, s);
        let b = (g - h, comp);
        let (genus, markings) = if a <= b { a } else { b };
        BoundaryType::Sep { genus, markings }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Divisor {
    Kappa1,
    /// psi class at a 1-based marking
    Psi(usize),
    Boundary(BoundaryType),
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Divisor::Kappa1 => write!(f, "kappa1"),
            Divisor::Psi(i) => write!(f, "psi{i}"),
            Divisor::Boundary(BoundaryType::Irr) => write!(f, "delta_irr"),
            Divisor::Boundary(BoundaryType::Sep { genus, markings }) => {
                let ms: Vec<String> = markings.iter().map(|m| m.to_string()).collect();
                write!(f, "delta_{}{{{}}}", genus, ms.join(","))
            }
        }
    }
}

/// Boundary divisors of M_{g,n} up to equality.
pub fn boundary_divisors(g: u32, n: usize) -> Vec<BoundaryType> {
    let mut out = Vec::new();
    if g >= 1 {
        out.push(BoundaryType::Irr);
    }
    let mut seps = std::collections::BTreeSet::new();
    for h in 0..=g {
        for mask in 0u64..(1u64 << n) {
            let s: Vec<usize> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            let left = 2 * h as i64 - 2 + s.len() as i64 + 1;
            let right = 2 * (g - h) as i64 - 2 + (n - s.len()) as i64 + 1;
            if left > 0 && right > 0 {
                seps.insert(BoundaryType::separating(g, n, h, &s));
            }
        }
    }
    out.extend(seps);
    out
}

/// Type of the boundary divisor whose generic point is obtained by smoothing
/// every edge of `graph` except `e`.
pub fn edge_type(graph: &StableGraph, e: usize) -> BoundaryType {
    let (a, b) = graph.edges()[e];
    let comp = graph.component_without(Some(e), a);
    let mut inside = vec![false; graph.num_vertices()];
    for &v in &comp {
        inside[v] = true;
    }
    if inside[b] {
        return BoundaryType::Irr;
    }
    let internal = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|&(f, &(x, y))| f != e && inside[x] && inside[y])
        .count();
    let genus = comp.iter().map(|&v| graph.vertex_genus(v)).sum::<u32>() + internal as u32 + 1
        - comp.len() as u32;
    let markings: Vec<usize> = graph
        .legs()
        .iter()
        .enumerate()
        .filter(|(_, &v)| inside[v])
        .map(|(i, _)| i + 1)
        .collect();
    BoundaryType::separating(graph.genus(), graph.num_legs(), genus, &markings)
}

fn bounded_compositions(total: u32, bounds: &[u32]) -> Vec<Vec<u32>> {
    fn rec(total: u32, bounds: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if bounds.is_empty() {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest: u32 = bounds[1..].iter().sum();
        let lo = total.saturating_sub(rest);
        let hi = total.min(bounds[0]);
        for x in lo..=hi {
            prefix.push(x);
            rec(total - x, &bounds[1..], prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total <= bounds.iter().sum() {
        rec(total, bounds, &mut Vec::new(), &mut out);
    }
    out
}

/// Pullback of kappa and Hodge decorations of one vertex to the vertices of
/// a graph of the given genera replacing it.
pub(crate) fn pullback_data(data: &VertexData, genera: &[u32]) -> Vec<(Vec<VertexData>, Rational)> {
    let k = genera.len();
    let mut cur: BTreeMap<Vec<VertexData>, Rational> = BTreeMap::new();
    cur.insert(vec![VertexData::default(); k], Rational::one());
    for &a in &data.kappa {
        let mut next = BTreeMap::new();
        for (ds, c) in cur {
            for w in 0..k {
                let mut d2 = ds.clone();
                d2[w].kappa.push(a);
                d2[w].kappa.sort_unstable();
                *next.entry(d2).or_insert_with(Rational::zero) += &c;
            }
        }
        cur = next;
    }
    for h in &data.hodge {
        let mut next = BTreeMap::new();
        for (ds, c) in cur {
            match *h {
                HodgeFactor::Lambda(i) => {
                    for comp in bounded_compositions(i, genera) {
                        let mut d2 = ds.clone();
                        for (w, &iw) in comp.iter().enumerate() {
                            if iw > 0 {
                                d2[w].hodge.push(HodgeFactor::Lambda(iw));
                                d2[w].hodge.sort_unstable();
                            }
                        }
                        *next.entry(d2).or_insert_with(Rational::zero) += &c;
                    }
                }
                HodgeFactor::Ch(j) => {
                    for (w, &gw) in genera.iter().enumerate() {
                        if gw == 0 {
                            continue;
                        }
                        let mut d2 = ds.clone();
                        d2[w].hodge.push(HodgeFactor::Ch(j));
                        d2[w].hodge.sort_unstable();
                        *next.entry(d2).or_insert_with(Rational::zero) += &c;
                    }
                }
            }
        }
        cur = next;
    }
    cur.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Products of one decorated stratum with a divisor class, unmerged.
pub fn multiply_divisor_terms(
    dec: &Decorated,
    coeff: &Rational,
    div: &Divisor,
    out: &mut Vec<(Decorated, Rational)>,
) -> Result<()> {
    if dec.has_markers() {
        return Err(Error::UnexpandedMarker(
            "expand P markers before multiplying by divisors".into(),
        ));
    }
    let graph = &dec.graph;
    match div {
        Divisor::Kappa1 => {
            for v in 0..graph.num_vertices() {
                let mut d2 = dec.clone();
                d2.vertex[v].kappa.push(1);
                d2.vertex[v].kappa.sort_unstable();
                out.push((d2, coeff.clone()));
            }
        }
        Divisor::Psi(i) => {
            if *i == 0 || *i > graph.num_legs() {
                return Err(Error::InvalidArgument(format!("no marking {i}")));
            }
            let mut d2 = dec.clone();
            d2.psi[i - 1] += 1;
            out.push((d2, coeff.clone()));
        }
        Divisor::Boundary(t) => {
            let neg = -coeff.clone();
            for e in 0..graph.num_edges() {
                if edge_type(graph, e) != *t {
                    continue;
                }
                let (h0, h1) = graph.edge_half_edges(e);
                for h in [h0, h1] {
                    let mut d2 = dec.clone();
                    d2.psi[h] += 1;
                    out.push((d2, neg.clone()));
                }
            }
            let half = coeff * rat(1, 2);
            for v in 0..graph.num_vertices() {
                let gv = graph.vertex_genus(v);
                let data = &dec.vertex[v];
                if gv >= 1 && *t == BoundaryType::Irr {
                    if let Some(ng) = graph.degenerate_loop(v) {
                        let mut psi = dec.psi.clone();
                        psi.extend_from_slice(&[0, 0]);
                        let d2 = Decorated {
                            graph: ng,
                            psi,
                            vertex: dec.vertex.clone(),
                        };
                        if d2.vertex[v].hodge_survives(gv - 1) {
                            out.push((d2, half.clone()));
                        }
                    }
                }
                let hs = graph.half_edges_at(v);
                for h in 0..=gv {
                    for mask in 0u64..(1u64 << hs.len()) {
                        let keep: Vec<usize> = hs
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, &x)| x)
                            .collect();
                        let stable_left = 2 * h as i64 - 2 + keep.len() as i64 + 1 > 0;
                        let stable_right =
                            2 * (gv - h) as i64 - 2 + (hs.len() - keep.len()) as i64 + 1 > 0;
                        if !stable_left || !stable_right {
                            continue;
                        }
                        let ng = match graph.degenerate_split(v, h, &keep) {
                            Some(x) => x,
                            None => continue,
                        };
                        if edge_type(&ng, ng.num_edges() - 1) != *t {
                            continue;
                        }
                        let mut psi = dec.psi.clone();
                        psi.extend_from_slice(&[0, 0]);
                        for (ds, c) in pullback_data(data, &[h, gv - h]) {
                            let mut vertex = dec.vertex.clone();
                            let mut it = ds.into_iter();
                            vertex[v] = it.next().expect("two parts");
                            vertex.push(it.next().expect("two parts"));
                            let d2 = Decorated {
                                graph: ng.clone(),
                                psi: psi.clone(),
                                vertex,
                            };
                            out.push((d2, &half * c));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Product of a class with a divisor; boundary divisors are the reduced
/// boundary components.
pub fn multiply_divisor(engine: &Engine, class: &TautClass, div: &Divisor) -> Result<TautClass> {
    let terms = class.terms();
    let parts = par::map(engine.mode(), &terms, |(d, q)| {
        let mut out = Vec::new();
        multiply_divisor_terms(d, q, div, &mut out).map(|_| out)
    });
    let mut res = TautClass::zero(class.genus(), class.num_markings());
    for p in parts {
        for (d, q) in p? {
            res.add_term(d, q);
        }
    }
    Ok(res)
}

/// Integral of a decorated stratum without markers.
pub fn integrate_decorated(engine: &Engine, dec: &Decorated) -> Result<Rational> {
    if dec.has_markers() {
        return Err(Error::UnexpandedMarker("integrand still has P markers".into()));
    }
    let g = &dec.graph;
    let mut psis: Vec<Vec<u32>> = vec![Vec::new(); g.num_vertices()];
    for (h, &e) in dec.psi.iter().enumerate() {
        psis[g.half_edge_vertex(h)].push(e);
    }
    let mut acc = Rational::one();
    for (v, ps) in psis.iter().enumerate() {
        let data = &dec.vertex[v];
        let val = engine.vertex_integral(g.vertex_genus(v), ps, &data.kappa, &data.hodge);
        if val.is_zero() {
            return Ok(val);
        }
        acc *= val;
    }
    Ok(acc)
}

/// Degree of a class integrated over M_{g,n}. Markers are expanded first.
pub fn integrate(engine: &Engine, class: &TautClass) -> Result<Rational> {
    let codims = class.codims();
    if codims.len() > 1 {
        return Err(Error::Dimension(format!(
            "class mixes codimensions {codims:?}"
        )));
    }
    match codims.first() {
        None => return Ok(Rational::zero()),
        Some(&c) if c as i64 != class.dim() => {
            log::warn!(
                "integrating a class of codimension {c} over a space of dimension {}",
                class.dim()
            );
            return Ok(Rational::zero());
        }
        _ => {}
    }
    let expanded;
    let class = if class.has_markers() {
        expanded = expand_markers(engine, class, ExpandOptions::default())?;
        &expanded
    } else {
        class
    };
    let terms = class.terms();
    let vals = par::map(engine.mode(), &terms, |(d, q)| integrate_decorated(engine, d).map(|x| x * q));
    let mut acc = Rational::zero();
    for v in vals {
        acc += v?;
    }
    Ok(acc)
}

/// Substitutes a decorated stratum of M_{g(v),n(v)} at vertex `v`. The legs
/// of `inner` match the half-edges at `v` in increasing order.
pub fn substitute_decorated(outer: &Decorated, v: usize, inner: &Decorated) -> Result<Vec<(Decorated, Rational)>> {
    if outer.vertex[v].pixton {
        return Err(Error::UnexpandedMarker(
            "cannot substitute at a vertex carrying a P marker".into(),
        ));
    }
    let (graph, vmap, hmap) = outer.graph.substitute(v, &inner.graph)?;
    let mut psi = outer.psi.clone();
    psi.resize(graph.num_half_edges(), 0);
    for (j, &e) in inner.psi.iter().enumerate() {
        psi[hmap[j]] += e;
    }
    let mut base = outer.vertex.clone();
    base.resize(graph.num_vertices(), VertexData::default());
    let mut out = Vec::new();
    for (ds, c) in pullback_data(&outer.vertex[v], inner.graph.genera()) {
        let mut vertex = base.clone();
        for (w, d) in ds.into_iter().enumerate() {
            let iv = &inner.vertex[w];
            let mut merged = d;
            merged.kappa.extend_from_slice(&iv.kappa);
            merged.hodge.extend_from_slice(&iv.hodge);
            merged.pixton |= iv.pixton;
            merged.normalize();
            vertex[vmap[w]] = merged;
        }
        out.push((
            Decorated {
                graph: graph.clone(),
                psi: psi.clone(),
                vertex,
            },
            c,
        ));
    }
    Ok(out)
}

/// Pushforward along the gluing map of `graph` of the product of the given
/// classes on its vertex moduli spaces.
pub fn push_forward(graph: &StableGraph, per_vertex: &[TautClass]) -> Result<TautClass> {
    if per_vertex.len() != graph.num_vertices() {
        return Err(Error::InvalidArgument("one class per vertex required".into()));
    }
    for (v, c) in per_vertex.iter().enumerate() {
        if c.genus() != graph.vertex_genus(v) || c.num_markings() != graph.valence(v) {
            return Err(Error::InvalidArgument(format!(
                "class at vertex {v} lives on the wrong moduli space"
            )));
        }
    }
    let mut current = vec![(Decorated::new(graph.clone()), Rational::one())];
    for (v, c) in per_vertex.iter().enumerate() {
        let mut next = Vec::new();
        for (d, q) in &current {
            for (inner, iq) in c.iter() {
                for (nd, pq) in substitute_decorated(d, v, inner)? {
                    next.push((nd, q * iq * pq));
                }
            }
        }
        current = next;
    }
    Ok(TautClass::from_terms(graph.genus(), graph.num_legs(), current))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExpandOptions {
    /// Also replace a top Hodge class lambda_{g(v)} at a vertex by its
    /// expression through the double ramification formula.
    pub top_lambda_via_pixton: bool,
}

fn expand_term(engine: &Engine, dec: &Decorated, opts: ExpandOptions) -> Result<Vec<(Decorated, Rational)>> {
    let mut current = vec![(dec.clone(), Rational::one())];
    for v in 0..dec.graph.num_vertices() {
        let gv = dec.graph.vertex_genus(v);
        let data = &dec.vertex[v];
        let top = opts.top_lambda_via_pixton && gv >= 1 && data.hodge.contains(&HodgeFactor::Lambda(gv));
        if !data.pixton && !top {
            continue;
        }
        let nv = dec.graph.valence(v);
        let mut next = Vec::new();
        for (d, c) in &current {
            let mut outer = d.clone();
            let inner = if outer.vertex[v].pixton {
                outer.vertex[v].pixton = false;
                engine.pixton_zero(gv, nv)?
            } else {
                let pos = outer.vertex[v]
                    .hodge
                    .iter()
                    .position(|h| *h == HodgeFactor::Lambda(gv))
                    .expect("top lambda present");
                outer.vertex[v].hodge.remove(pos);
                engine.lambda_class(gv, nv)?
            };
            for (idec, iq) in inner.iter() {
                for (nd, pq) in substitute_decorated(&outer, v, idec)? {
                    if !nd.is_obviously_zero() {
                        next.push((nd, c * iq * pq));
                    }
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Replaces every P marker by the corresponding class, pulling back the
/// remaining decorations of that vertex.
pub fn expand_markers(engine: &Engine, class: &TautClass, opts: ExpandOptions) -> Result<TautClass> {
    let terms = class.terms();
    let parts = par::map(engine.mode(), &terms, |(d, q)| {
        expand_term(engine, d, opts).map(|v| {
            v.into_iter().map(|(nd, c)| (nd, c * q)).collect::<Vec<_>>()
        })
    });
    let mut out = TautClass::zero(class.genus(), class.num_markings());
    for p in parts {
        for (d, q) in p? {
            out.add_term(d, q);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_divisor_lists() {
        assert_eq!(boundary_divisors(2, 0).len(), 2);
        assert_eq!(boundary_divisors(3, 0).len(), 2);
        assert_eq!(boundary_divisors(4, 0).len(), 3);
        // delta_irr, delta_{0,{1,2}}, delta_{1,{}} style splittings of M_{1,2}
        assert_eq!(boundary_divisors(1, 2).len(), 2);
        assert_eq!(boundary_divisors(0, 4).len(), 3);
    }

    #[test]
    fn lambda_pullback_to_split() {
        let data = VertexData {
            hodge: vec![HodgeFactor::Lambda(2)],
            ..Default::default()
        };
        let pb = pullback_data(&data, &[1, 1]);
        assert_eq!(pb.len(), 1);
        let pb = pullback_data(&data, &[2, 1]);
        assert_eq!(pb.len(), 2);
    }

    #[test]
    fn separating_normalization() {
        let a = BoundaryType::separating(2, 2, 1, &[1]);
        let b = BoundaryType::separating(2, 2, 1, &[2]);
        assert_eq!(a, b);
        let c = BoundaryType::separating(2, 2, 0, &[1, 2]);
        let d = BoundaryType::separating(2, 2, 2, &[]);
        assert_eq!(c, d);
    }
}
