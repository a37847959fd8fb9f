//! Pixton's formula for the double ramification cycle, its degree-d parts,
//! and the Hodge classes lambda_g obtained from it.
//!
//! For a graph the weighting sum over admissible mod-r weightings is a
//! polynomial in r for large r; its constant term is extracted by
//! interpolation on one window of r values and certified on a second,
//! disjoint window.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{
    bern, binomial, compositions, factorial_q, int, interpolate_window, rat, sign, weak_compositions,
    Rational, UniPoly,
};
use crate::graphs::StableGraph;
use crate::par;
use crate::strata::{Decorated, TautClass};

struct Gauge {
    n: usize,
    legs: Vec<i64>,
    /// (vertex, half-edge at vertex, half-edge at parent) in reverse BFS order
    tree: Vec<(usize, usize, usize)>,
    free_edges: Vec<usize>,
    half_edges_at: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Gauge {
    fn new(graph: &StableGraph, a: &[i64]) -> Self {
        let nv = graph.num_vertices();
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; graph.num_edges()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in 0..graph.num_edges() {
                let (x, y) = graph.edges()[e];
                let (hx, hy) = graph.edge_half_edges(e);
                let (other, h_other, h_here) = if x == v && !seen[y] {
                    (y, hy, hx)
                } else if y == v && !seen[x] {
                    (x, hx, hy)
                } else {
                    continue;
                };
                seen[other] = true;
                in_tree[e] = true;
                order.push((other, h_other, h_here));
                queue.push_back(other);
            }
        }
        order.reverse();
        Gauge {
            n: graph.num_legs(),
            legs: a.to_vec(),
            tree: order,
            free_edges: (0..graph.num_edges()).filter(|&e| !in_tree[e]).collect(),
            half_edges_at: (0..nv).map(|v| graph.half_edges_at(v)).collect(),
            edges: (0..graph.num_edges()).map(|e| graph.edge_half_edges(e)).collect(),
        }
    }

    /// Calls `f` with every admissible weighting mod r (values per half-edge).
    fn for_each<F: FnMut(&[u64])>(&self, r: u64, mut f: F) {
        let nh = self.n + 2 * self.edges.len();
        let mut w = vec![0u64; nh];
        for (i, &a) in self.legs.iter().enumerate() {
            w[i] = a.rem_euclid(r as i64) as u64;
        }
        let nf = self.free_edges.len();
        let mut free = vec![0u64; nf];
        loop {
            for (j, &e) in self.free_edges.iter().enumerate() {
                let (h0, h1) = self.edges[e];
                w[h0] = free[j];
                w[h1] = (r - free[j]) % r;
            }
            for &(v, hv, hp) in &self.tree {
                let s: u64 = self.half_edges_at[v]
                    .iter()
                    .filter(|&&h| h != hv)
                    .map(|&h| w[h])
                    .sum::<u64>()
                    % r;
                w[hv] = (r - s) % r;
                w[hp] = (r - w[hv]) % r;
            }
            f(&w);
            let mut j = 0;
            loop {
                if j == nf {
                    return;
                }
                free[j] += 1;
                if free[j] < r {
                    break;
                }
                free[j] = 0;
                j += 1;
            }
        }
    }
}

/// All admissible weightings mod r of the graph with leg weights `a`.
pub fn weightings(graph: &StableGraph, a: &[i64], r: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    Gauge::new(graph, a).for_each(r, |w| out.push(w.to_vec()));
    out
}

/// Sums over weightings of prod_e (w(h) w(h'))^{k_e}, one per k-vector.
fn weight_sums(graph: &StableGraph, a: &[i64], ks: &[Vec<u32>], r: u64) -> Vec<BigInt> {
    let gauge = Gauge::new(graph, a);
    let mut acc = vec![0i128; ks.len()];
    let ne = graph.num_edges();
    let mut prods = vec![0i128; ne];
    gauge.for_each(r, |w| {
        for (e, p) in prods.iter_mut().enumerate() {
            let (h0, h1) = gauge.edges[e];
            *p = (w[h0] * w[h1]) as i128;
        }
        for (slot, k) in acc.iter_mut().zip(ks) {
            let mut t: i128 = 1;
            for (e, &ke) in k.iter().enumerate() {
                t = t
                    .checked_mul(prods[e].checked_pow(ke).expect("weight power overflow"))
                    .expect("weight product overflow");
                if t == 0 {
                    break;
                }
            }
            *slot = slot.checked_add(t).expect("weight sum overflow");
        }
    });
    acc.into_iter().map(BigInt::from).collect()
}

fn normalized_sums(graph: &StableGraph, a: &[i64], ks: &[Vec<u32>], r: u64) -> Vec<Rational> {
    let scale = Rational::from_integer(BigInt::from(r).pow(graph.h1())).recip();
    weight_sums(graph, a, ks, r)
        .into_iter()
        .map(|s| Rational::from_integer(s) * &scale)
        .collect()
}

/// The normalized weighting sums as polynomials in r, interpolated on one
/// window and certified on a second disjoint window.
pub fn weight_polynomials(graph: &StableGraph, a: &[i64], ks: &[Vec<u32>], d: u32) -> Result<Vec<UniPoly>> {
    let h1 = graph.h1() as usize;
    let bound = 2 * d as usize + h1;
    let len = bound + 2;
    let base = (bound + 2) as i64 + a.iter().map(|x| x.abs()).sum::<i64>();
    let mut windows = Vec::new();
    for start in [base, base + len as i64] {
        let values: Vec<Vec<Rational>> = (start..start + len as i64)
            .map(|r| normalized_sums(graph, a, ks, r as u64))
            .collect();
        let mut polys = Vec::with_capacity(ks.len());
        for j in 0..ks.len() {
            polys.push(interpolate_window(start, len, |r| values[(r - start) as usize][j].clone())?);
        }
        windows.push(polys);
    }
    if windows[0] != windows[1] {
        return Err(Error::Polynomiality(format!(
            "weighting sums of {graph} disagree between r-windows starting at {base} and {}",
            base + len as i64
        )));
    }
    Ok(windows.swap_remove(0))
}

fn k_vectors(ne: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if ne == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in ne as u32..=d {
        out.extend(compositions(total, ne));
    }
    out
}

/// Decorated terms of one graph given a scalar per k-vector.
fn assemble(graph: &StableGraph, a: &[i64], d: u32, ks: &[Vec<u32>], scalars: &[Rational]) -> Vec<(Decorated, Rational)> {
    let aut = Rational::from_integer(BigInt::from(graph.automorphism_order()));
    let n = graph.num_legs();
    let mut out = Vec::new();
    for (k, s) in ks.iter().zip(scalars) {
        if s.is_zero() {
            continue;
        }
        let ksum: u32 = k.iter().sum();
        let mut edge_factor = s / &aut;
        for &ke in k {
            edge_factor *= -sign(ke as i64) / factorial_q(ke);
        }
        for ms in weak_compositions(d - ksum, n) {
            let mut leg_factor = Rational::one();
            for (i, &m) in ms.iter().enumerate() {
                leg_factor *= Rational::from_integer(BigInt::from(a[i] * a[i]).pow(m)) / factorial_q(m);
            }
            if leg_factor.is_zero() {
                continue;
            }
            // distribute (psi_h + psi_h')^{k_e - 1}
            let mut partial: Vec<(Vec<u32>, Rational)> = vec![(vec![0; graph.num_half_edges()], Rational::one())];
            for (i, &m) in ms.iter().enumerate() {
                partial[0].0[i] = m;
            }
            for (e, &ke) in k.iter().enumerate() {
                let (h0, h1) = graph.edge_half_edges(e);
                let mut next = Vec::new();
                for (psi, c) in &partial {
                    for j in 0..ke {
                        let mut p = psi.clone();
                        p[h0] = j;
                        p[h1] = ke - 1 - j;
                        next.push((p, c * Rational::from_integer(binomial(ke - 1, j))));
                    }
                }
                partial = next;
            }
            for (psi, c) in partial {
                let mut dec = Decorated::new(graph.clone());
                dec.psi = psi;
                out.push((dec, c * &edge_factor * &leg_factor));
            }
        }
    }
    out
}

fn check_profile(g: u32, a: &[i64]) -> Result<()> {
    if a.iter().sum::<i64>() != 0 {
        return Err(Error::InvalidArgument(format!(
            "double ramification profile {a:?} does not sum to zero"
        )));
    }
    if 2 * g as i64 - 2 + a.len() as i64 <= 0 {
        return Err(Error::Unstable { g, n: a.len() as u32 });
    }
    Ok(())
}

/// Contribution of one graph to the degree-d part, as a class on M_{g,n}.
pub fn graph_constant_term(graph: &StableGraph, a: &[i64], d: u32) -> Result<TautClass> {
    check_profile(graph.genus(), a)?;
    let ks = k_vectors(graph.num_edges(), d);
    let polys = weight_polynomials(graph, a, &ks, d)?;
    let consts: Vec<Rational> = polys.iter().map(|p| p.constant_term()).collect();
    Ok(TautClass::from_terms(
        graph.genus(),
        graph.num_legs(),
        assemble(graph, a, d, &ks, &consts),
    ))
}

/// Contribution of one graph at a fixed r, before taking the constant term.
pub fn graph_contribution(graph: &StableGraph, a: &[i64], d: u32, r: u64) -> Result<TautClass> {
    check_profile(graph.genus(), a)?;
    let ks = k_vectors(graph.num_edges(), d);
    let sums = normalized_sums(graph, a, &ks, r);
    Ok(TautClass::from_terms(
        graph.genus(),
        graph.num_legs(),
        assemble(graph, a, d, &ks, &sums),
    ))
}

/// Closed form of the degree-g contribution of a circular graph with zero
/// profile.
pub fn circular_contribution(graph: &StableGraph) -> Result<TautClass> {
    if !graph.is_circular() {
        return Err(Error::InvalidArgument(format!("{graph} is not circular")));
    }
    let g = graph.genus();
    let ne = graph.num_edges();
    let ks = compositions(g, ne);
    let scalars = vec![bern(2 * g); ks.len()];
    // assemble applies -(-1)^k/k!; the closed form has -1/k!, and the
    // product of (-1)^k over a composition of g is (-1)^g
    let fix = sign(g as i64);
    let terms = assemble(graph, &[], g, &ks, &scalars)
        .into_iter()
        .map(|(d, q)| (d, q * &fix));
    Ok(TautClass::from_terms(g, 0, terms))
}

impl Engine {
    /// Degree-d part of Pixton's formula on M_{g,n} for profile `a`.
    pub fn p_class(&self, g: u32, a: &[i64], d: u32) -> Result<Arc<TautClass>> {
        check_profile(g, a)?;
        let key = (g, a.len(), a.to_vec(), d);
        if let Some(c) = self.pixton_memo.get(&key) {
            return Ok(c.clone());
        }
        let graphs = self.stable_graphs(g, a.len())?;
        let chosen: Vec<&StableGraph> = graphs.iter().filter(|x| x.num_edges() as u32 <= d).collect();
        let parts = par::map(self.mode(), &chosen, |gr| {
            let ks = k_vectors(gr.num_edges(), d);
            weight_polynomials(gr, a, &ks, d).map(|polys| {
                let consts: Vec<Rational> = polys.iter().map(|p| p.constant_term()).collect();
                assemble(gr, a, d, &ks, &consts)
            })
        });
        let mut class = TautClass::zero(g, a.len());
        for p in parts {
            for (dec, q) in p? {
                class.add_term(dec, q);
            }
        }
        let class = Arc::new(class);
        self.pixton_memo.insert(key, class.clone());
        Ok(class)
    }

    /// P^g_g(0,...,0) on M_{g,n}; the fundamental class when g = 0.
    pub fn pixton_zero(&self, g: u32, n: usize) -> Result<Arc<TautClass>> {
        self.p_class(g, &vec![0; n], g)
    }

    /// lambda_g on M_{g,n} as (-1)^g 2^{-g} P^g_g(0,...,0).
    pub fn lambda_class(&self, g: u32, n: usize) -> Result<Arc<TautClass>> {
        let p = self.pixton_zero(g, n)?;
        let c = sign(g as i64) * rat(1, 2).pow(g as i32);
        Ok(Arc::new(p.scaled(&c)))
    }

    /// Double ramification cycle DR_g(a) = 2^{-g} P^g_g(a).
    pub fn dr_cycle(&self, g: u32, a: &[i64]) -> Result<TautClass> {
        let p = self.p_class(g, a, g)?;
        Ok(p.scaled(&rat(1, 2).pow(g as i32)))
    }
}

/// The integer factor 2^g used to pass between P^g_g and DR_g.
pub fn two_pow(g: u32) -> Rational {
    int(2).pow(g as i32)
}
