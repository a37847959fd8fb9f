//! Quantization side for the point target: the Hodge R-matrix, the edge
//! kernel of its quantization, the Feynman graph expansion of the Hodge
//! potential, and the D-operator description of ch insertions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{bern, factorial_q, int, Rational};
use crate::graphs::{enumerate_feynman_with_legs, StableGraph};
use crate::par;
use crate::series::BiSeries;
use crate::strata::{integrate, HodgeFactor, TautClass};

/// Truncated u-series, index = power of u.
pub type USeries = Vec<Rational>;

fn useries_zero(u_max: usize) -> USeries {
    vec![Rational::zero(); u_max + 1]
}

fn useries_mul(a: &[Rational], b: &[Rational]) -> USeries {
    let u_max = a.len().min(b.len()) - 1;
    let mut out = useries_zero(u_max);
    for (i, x) in a.iter().enumerate().take(u_max + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(u_max + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn useries_add_assign(a: &mut USeries, b: &[Rational]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn lowest_degree(a: &[Rational]) -> Option<usize> {
    a.iter().position(|x| !x.is_zero())
}

/// Perturbations used as negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Perturb {
    /// Adds one to the u z coefficient of log R, keeping R(z) R(-z) = 1.
    pub r_coefficient: bool,
    /// Adds u to V_00.
    pub v00: bool,
}

/// R(z) = exp(sum_i B_2i / (2i (2i-1)) u^{2i-1} z^{2i-1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    pub series: BiSeries,
}

impl RMatrix {
    /// [z^j] R as a u-series.
    pub fn z_coeff(&self, j: usize) -> USeries {
        self.series.z_coeff(j)
    }

    pub fn inverse(&self) -> Result<RMatrix> {
        Ok(RMatrix {
            series: self.series.inverse()?,
        })
    }
}

pub fn r_matrix(u_max: usize, z_max: usize) -> Result<RMatrix> {
    r_matrix_perturbed(u_max, z_max, Perturb::default())
}

fn r_matrix_perturbed(u_max: usize, z_max: usize, p: Perturb) -> Result<RMatrix> {
    if u_max == 0 || z_max == 0 {
        return Err(Error::InvalidArgument("truncation orders must be at least one".into()));
    }
    let mut exponent = BiSeries::zero(u_max, z_max);
    let mut i = 1;
    while 2 * i - 1 <= u_max.min(z_max) {
        let k = 2 * i as i64;
        exponent.set(2 * i - 1, 2 * i - 1, bern(k as u32) / int(k * (k - 1)));
        i += 1;
    }
    if p.r_coefficient {
        let c = exponent.coeff(1, 1) + int(1);
        exponent.set(1, 1, c);
    }
    Ok(RMatrix {
        series: exponent.exp()?,
    })
}

/// V(w, z) = sum V_kl w^k z^l = (1 - R(-w) R(-z)) / (w + z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeKernel {
    u_max: usize,
    z_max: usize,
    table: BTreeMap<(usize, usize), USeries>,
}

impl EdgeKernel {
    pub fn get(&self, k: usize, l: usize) -> USeries {
        self.table.get(&(k, l)).cloned().unwrap_or_else(|| useries_zero(self.u_max))
    }

    /// Largest k + l stored.
    pub fn z_max(&self) -> usize {
        self.z_max
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &USeries)> {
        self.table.iter()
    }
}

pub fn edge_kernel(u_max: usize, z_max: usize) -> Result<EdgeKernel> {
    edge_kernel_from(&r_matrix(u_max, z_max + 1)?, u_max, z_max, false)
}

fn edge_kernel_from(r: &RMatrix, u_max: usize, z_max: usize, bump_v00: bool) -> Result<EdgeKernel> {
    // coefficients of R(-w) in w
    let rm: Vec<USeries> = (0..=z_max + 1)
        .map(|a| {
            let c = r.z_coeff(a);
            if a % 2 == 1 {
                c.into_iter().map(|x| -x).collect()
            } else {
                c
            }
        })
        .map(|mut c: USeries| {
            c.resize(u_max + 1, Rational::zero());
            c
        })
        .collect();
    let numerator = |a: usize, b: usize| -> USeries {
        let mut out: USeries = useries_mul(&rm[a], &rm[b]).into_iter().map(|x| -x).collect();
        if a == 0 && b == 0 {
            out[0] += Rational::one();
        }
        out
    };
    if numerator(0, 0).iter().any(|x| !x.is_zero()) {
        return Err(Error::InvalidArgument("edge kernel numerator has a constant term".into()));
    }
    let mut table = BTreeMap::new();
    for s in 0..=z_max {
        // N_{a, s+1-a} = V_{a-1, s+1-a} + V_{a, s-a}
        let mut prev = useries_zero(u_max);
        for a in 0..=s {
            let mut v = numerator(a, s + 1 - a);
            for (x, y) in v.iter_mut().zip(&prev) {
                *x -= y;
            }
            table.insert((a, s - a), v.clone());
            prev = v;
        }
        if numerator(s + 1, 0) != prev {
            return Err(Error::InvalidArgument(format!(
                "edge kernel numerator is not divisible by w + z in total degree {}",
                s + 1
            )));
        }
    }
    if bump_v00 && u_max >= 1 {
        table.get_mut(&(0, 0)).expect("V_00 present")[1] += Rational::one();
    }
    Ok(EdgeKernel { u_max, z_max, table })
}

/// Partitions of n into positive parts, as multiplicity maps part -> count.
fn partitions(n: usize, max_part: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in (1..=max_part.min(n)).rev() {
        for mult in 1..=n / p {
            for mut rest in partitions(n - p * mult, p - 1) {
                rest.insert(0, (p, mult));
                out.push(rest);
            }
        }
    }
    out
}

struct Context<'a> {
    engine: &'a Engine,
    u_max: usize,
    /// t_c as a u-series: the time variables at which vertices are evaluated.
    times: Vec<USeries>,
    r_inv: RMatrix,
    kernel: EdgeKernel,
}

impl Context<'_> {
    /// Jet of F_h in the directions `ks` at the shifted time point.
    fn vertex(&self, h: u32, ks: &[u32]) -> USeries {
        let n = ks.len() as i64;
        let d = 3 * h as i64 - 3 + n - ks.iter().map(|&k| k as i64).sum::<i64>();
        let mut out = useries_zero(self.u_max);
        if d < 0 || d as usize > self.u_max {
            return out;
        }
        // insertions tau_c with c >= 2 spend c - 1 on dimension; t_0 = t_1 = 0
        for part in partitions(d as usize, d as usize) {
            let mut exps = ks.to_vec();
            let mut weight = vec![Rational::zero(); self.u_max + 1];
            weight[0] = Rational::one();
            let mut denom = Rational::one();
            for &(p, mult) in &part {
                let c = p + 1;
                let tc = self.times.get(c).cloned().unwrap_or_else(|| useries_zero(self.u_max));
                for _ in 0..mult {
                    exps.push(c as u32);
                    weight = useries_mul(&weight, &tc);
                }
                denom *= factorial_q(mult as u32);
            }
            if weight.iter().all(|x| x.is_zero()) {
                continue;
            }
            let val = self.engine.psi_value(h, &exps) / denom;
            if val.is_zero() {
                continue;
            }
            for (o, w) in out.iter_mut().zip(&weight) {
                *o += w * &val;
            }
        }
        out
    }

    fn contribution(&self, graph: &StableGraph, extras: &[u32]) -> USeries {
        let nl = graph.num_legs();
        let ne = graph.num_edges();
        // choices per leg: (index m, factor); per edge: ((k, l), factor)
        let leg_choices: Vec<Vec<(u32, USeries, usize)>> = extras
            .iter()
            .map(|&j| {
                (0..=self.u_max)
                    .filter_map(|s| {
                        let f = self.r_inv.z_coeff(s);
                        lowest_degree(&f).map(|low| (j + s as u32, f, low))
                    })
                    .collect()
            })
            .collect();
        let mut edge_choices: Vec<(u32, u32, USeries, usize)> = Vec::new();
        for (&(k, l), v) in self.kernel.entries() {
            if let Some(low) = lowest_degree(v) {
                edge_choices.push((k as u32, l as u32, v.clone(), low));
            }
        }
        let mut total = useries_zero(self.u_max);
        let mut psi = vec![0u32; graph.num_half_edges()];
        let mut weight = useries_zero(self.u_max);
        weight[0] = Rational::one();
        self.assign(graph, 0, nl + ne, &leg_choices, &edge_choices, 0, &mut psi, weight, &mut total);
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        graph: &StableGraph,
        slot: usize,
        slots: usize,
        legs: &[Vec<(u32, USeries, usize)>],
        edges: &[(u32, u32, USeries, usize)],
        spent: usize,
        psi: &mut Vec<u32>,
        weight: USeries,
        total: &mut USeries,
    ) {
        if slot == slots {
            let mut acc = weight;
            for v in 0..graph.num_vertices() {
                let ks: Vec<u32> = graph.half_edges_at(v).iter().map(|&h| psi[h]).collect();
                let val = self.vertex(graph.vertex_genus(v), &ks);
                acc = useries_mul(&acc, &val);
                if acc.iter().all(|x| x.is_zero()) {
                    return;
                }
            }
            useries_add_assign(total, &acc);
            return;
        }
        let nl = legs.len();
        if slot < nl {
            for (m, f, low) in &legs[slot] {
                if spent + low > self.u_max {
                    continue;
                }
                psi[slot] = *m;
                self.assign(graph, slot + 1, slots, legs, edges, spent + low, psi, useries_mul(&weight, f), total);
            }
        } else {
            let (h1, h2) = graph.edge_half_edges(slot - nl);
            for (k, l, f, low) in edges {
                if spent + low > self.u_max {
                    continue;
                }
                psi[h1] = *k;
                psi[h2] = *l;
                self.assign(graph, slot + 1, slots, legs, edges, spent + low, psi, useries_mul(&weight, f), total);
            }
        }
    }
}

/// Feynman expansion of the genus-g Hodge potential at t = 0, differentiated
/// along `extras`: the sum over connected graphs with at most `max_edges`
/// edges of Cont / |Aut|, truncated at u^u_max.
pub fn feynman_sum(
    engine: &Engine,
    g: u32,
    u_max: usize,
    extras: &[u32],
    max_edges: usize,
    perturb: Perturb,
) -> Result<USeries> {
    if u_max == 0 {
        return Err(Error::InvalidArgument("u truncation must be at least one".into()));
    }
    let z_max = u_max + extras.iter().copied().max().unwrap_or(0) as usize + 2;
    let r = r_matrix_perturbed(u_max, z_max + 1, perturb)?;
    let r_inv = r.inverse()?;
    let kernel = edge_kernel_from(&r, u_max, u_max, perturb.v00)?;
    // t(z) = R^{-1}(z) q(z) + z with q(z) = -z
    let mut times = vec![useries_zero(u_max)];
    for c in 1..=z_max {
        let mut tc: USeries = r_inv.z_coeff(c - 1).into_iter().map(|x| -x).collect();
        if c == 1 {
            tc[0] += Rational::one();
        }
        times.push(tc);
    }
    if times.iter().take(2).any(|t| t.iter().any(|x| !x.is_zero())) {
        return Err(Error::InvalidArgument("shifted times t_0, t_1 must vanish".into()));
    }
    let ctx = Context {
        engine,
        u_max,
        times,
        r_inv,
        kernel,
    };
    let graphs = enumerate_feynman_with_legs(g, extras.len(), max_edges);
    let parts = par::map(engine.mode(), &graphs, |gr| {
        let c = ctx.contribution(gr, extras);
        let aut = Rational::from_integer(gr.automorphism_order().into());
        c.into_iter().map(|x| x / &aut).collect::<USeries>()
    });
    let mut out = useries_zero(u_max);
    for p in &parts {
        useries_add_assign(&mut out, p);
    }
    Ok(out)
}

/// u-degree carried by the extras at genus g; all other coefficients vanish.
pub fn homogeneous_degree(g: u32, extras: &[u32]) -> i64 {
    3 * g as i64 - 3 + extras.len() as i64 - extras.iter().map(|&j| j as i64).sum::<i64>()
}

/// Integral of lambda_i against psi^extras on M_{g,n}.
pub fn lambda_side(engine: &Engine, g: u32, extras: &[u32], i: u32) -> Rational {
    if i == 0 {
        engine.psi_value(g, extras)
    } else {
        engine.hodge_integral(g, extras, &[HodgeFactor::Lambda(i)])
    }
}

/// (-1)^g 2^{-g} times the integral of P^g_g(0,...,0) against psi^extras,
/// computed from the strata expansion of Pixton's class.
pub fn pixton_side(engine: &Engine, g: u32, extras: &[u32]) -> Result<Rational> {
    let p = engine.pixton_zero(g, extras.len())?;
    let mut class = TautClass::zero(g, extras.len());
    for (dec, q) in p.iter() {
        let mut d = dec.clone();
        for (h, &j) in extras.iter().enumerate() {
            d.psi[h] += j;
        }
        class.add_term(d, q.clone());
    }
    let v = integrate(engine, &class)?;
    let c = crate::exact::sign(g as i64) * crate::exact::rat(1, 2).pow(g as i32);
    Ok(v * c)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub genus: u32,
    pub extras: Vec<u32>,
    pub i: usize,
    #[serde(serialize_with = "crate::exact::ser_rational")]
    pub computed: Rational,
    #[serde(serialize_with = "crate::exact::ser_rational")]
    pub expected: Rational,
    /// Which oracle produced `expected`.
    pub route: &'static str,
    pub pass: bool,
}

/// Compares every coefficient of the Feynman sum with the lambda side, and
/// the u^g coefficient additionally with the Pixton side.
pub fn check_feynman(
    engine: &Engine,
    g: u32,
    u_max: usize,
    extras: &[u32],
    max_edges: usize,
    perturb: Perturb,
) -> Result<Vec<CoefficientCheck>> {
    let series = feynman_sum(engine, g, u_max, extras, max_edges, perturb)?;
    let mut out = Vec::new();
    for (i, c) in series.iter().enumerate() {
        let expected = lambda_side(engine, g, extras, i as u32);
        out.push(CoefficientCheck {
            genus: g,
            extras: extras.to_vec(),
            i,
            pass: *c == expected,
            computed: c.clone(),
            expected,
            route: if i as u32 > g { "vanishing" } else { "hodge" },
        });
        if i as u32 == g && homogeneous_degree(g, extras) == g as i64 {
            let expected = pixton_side(engine, g, extras)?;
            out.push(CoefficientCheck {
                genus: g,
                extras: extras.to_vec(),
                i,
                pass: *c == expected,
                computed: c.clone(),
                expected,
                route: "pixton",
            });
        }
    }
    Ok(out)
}

/// Polynomial in t_0..t_{vars-1} with Laurent coefficients in hbar,
/// truncated to total degree <= `deg` and degree <= `high` in the variables
/// of index > `low`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct HPoly {
    vars: usize,
    deg: u32,
    low: usize,
    high: u32,
    terms: BTreeMap<(i32, Vec<u8>), Rational>,
}

impl HPoly {
    fn empty(&self) -> HPoly {
        HPoly {
            terms: BTreeMap::new(),
            ..self.clone()
        }
    }

    fn keeps(&self, m: &[u8]) -> bool {
        let total: u32 = m.iter().map(|&x| x as u32).sum();
        let hi: u32 = m.iter().skip(self.low + 1).map(|&x| x as u32).sum();
        total <= self.deg && hi <= self.high
    }

    fn add_term(&mut self, h: i32, m: Vec<u8>, q: Rational) {
        if q.is_zero() || !self.keeps(&m) {
            return;
        }
        let e = self.terms.entry((h, m)).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    fn add(&self, o: &HPoly) -> HPoly {
        let mut out = self.clone();
        for ((h, m), q) in &o.terms {
            out.add_term(*h, m.clone(), q.clone());
        }
        out
    }

    fn scale(&self, k: &Rational) -> HPoly {
        let mut out = self.empty();
        for ((h, m), q) in &self.terms {
            out.add_term(*h, m.clone(), q * k);
        }
        out
    }

    fn mul(&self, o: &HPoly) -> HPoly {
        let mut out = self.empty();
        for ((h1, m1), q1) in &self.terms {
            for ((h2, m2), q2) in &o.terms {
                let m: Vec<u8> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(h1 + h2, m, q1 * q2);
            }
        }
        out
    }

    fn one(&self) -> HPoly {
        let mut out = self.empty();
        out.add_term(0, vec![0; self.vars], Rational::one());
        out
    }

    /// exp of a polynomial without constant t-term.
    fn exp(&self) -> HPoly {
        let mut out = self.one();
        let mut power = self.one();
        for k in 1..=self.deg {
            power = power.mul(self).scale(&int(k as i64).recip());
            if power.terms.is_empty() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    fn diff(&self, i: usize) -> HPoly {
        let mut out = self.empty();
        for ((h, m), q) in &self.terms {
            if m[i] > 0 {
                let mut mm = m.clone();
                mm[i] -= 1;
                out.add_term(*h, mm, q * int(m[i] as i64));
            }
        }
        out
    }

    fn times_var(&self, i: usize) -> HPoly {
        let mut out = self.empty();
        for ((h, m), q) in &self.terms {
            let mut mm = m.clone();
            mm[i] += 1;
            out.add_term(*h, mm, q.clone());
        }
        out
    }

    fn times_hbar(&self, k: i32) -> HPoly {
        let mut out = self.empty();
        for ((h, m), q) in &self.terms {
            out.add_term(h + k, m.clone(), q.clone());
        }
        out
    }
}

/// Exponent vectors with total degree <= deg in `vars` variables.
fn monomials(vars: usize, deg: u32) -> Vec<Vec<u8>> {
    if vars == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in 0..=deg {
        for mut rest in monomials(vars - 1, deg - e) {
            rest.insert(0, e as u8);
            out.push(rest);
        }
    }
    out
}

/// log Z = sum_g hbar^{g-1} F_g, truncated.
fn potential(engine: &Engine, shape: &HPoly, max_genus: u32) -> HPoly {
    let mut f = shape.empty();
    for m in monomials(shape.vars, shape.deg) {
        if !shape.keeps(&m) {
            continue;
        }
        let mut exps = Vec::new();
        let mut denom = Rational::one();
        for (i, &e) in m.iter().enumerate() {
            exps.extend(std::iter::repeat(i as u32).take(e as usize));
            denom *= factorial_q(e as u32);
        }
        for g in 0..=max_genus {
            let v = engine.psi_value(g, &exps);
            if !v.is_zero() {
                f.add_term(g as i32 - 1, m.clone(), v / &denom);
            }
        }
    }
    f
}

/// D_{2l-1} = -sum_n t~_n d/dt_{n+2l-1} + hbar/2 sum_{n=0}^{2l-2} (-1)^n d_n d_{2l-2-n},
/// with t~_n = t_n - delta_{n,1}.
fn d_operator(l: u32, z: &HPoly) -> HPoly {
    let shift = 2 * l as usize - 1;
    let mut out = z.empty();
    for n in 0..z.vars {
        let k = n + shift;
        if k >= z.vars {
            break;
        }
        let d = z.diff(k);
        out = out.add(&d.times_var(n).scale(&int(-1)));
        if n == 1 {
            out = out.add(&d);
        }
    }
    for n in 0..=(2 * l as usize - 2) {
        let m = 2 * l as usize - 2 - n;
        if n >= z.vars || m >= z.vars {
            continue;
        }
        let sgn = if n % 2 == 0 { int(1) } else { int(-1) };
        out = out.add(&z.diff(n).diff(m).times_hbar(1).scale(&(sgn / int(2))));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct JetCheck {
    pub genus: u32,
    pub insertions: Vec<u32>,
    #[serde(serialize_with = "crate::exact::ser_rational")]
    pub operator_route: Rational,
    #[serde(serialize_with = "crate::exact::ser_rational")]
    pub integral_route: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DOperatorReport {
    pub l: u32,
    pub depth: u32,
    pub max_index: u32,
    pub max_genus: u32,
    pub jets: Vec<JetCheck>,
    pub nonzero: usize,
    pub pass: bool,
}

fn jet_shape(max_index: u32, depth: u32, extra_vars: usize, extra_deg: u32) -> HPoly {
    HPoly {
        vars: max_index as usize + 1 + extra_vars,
        deg: depth + extra_deg,
        low: max_index as usize,
        high: extra_deg,
        terms: BTreeMap::new(),
    }
}

/// Compares, on jets at t = 0 in directions t_0..t_{max_index} of order at
/// most `depth`, the ch_{2l-1} correlators with B_2l/(2l)! (D_{2l-1} Z)/Z.
pub fn d_operator_check(engine: &Engine, l: u32, depth: u32, max_index: u32, max_genus: u32) -> Result<DOperatorReport> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least one".into()));
    }
    let shape = jet_shape(max_index, depth, 2 * l as usize, 2);
    let f = potential(engine, &shape, max_genus);
    let z = f.exp();
    let z_inv = f.scale(&int(-1)).exp();
    let dz = d_operator(l, &z);
    let ratio = dz.mul(&z_inv);
    let factor = bern(2 * l) / factorial_q(2 * l);
    let mut jets = Vec::new();
    for m in monomials(max_index as usize + 1, depth) {
        let mut exps = Vec::new();
        let mut denom = Rational::one();
        for (i, &e) in m.iter().enumerate() {
            exps.extend(std::iter::repeat(i as u32).take(e as usize));
            denom *= factorial_q(e as u32);
        }
        let mut key = m.clone();
        key.resize(shape.vars, 0);
        for g in 0..=max_genus {
            let op = ratio
                .terms
                .get(&(g as i32 - 1, key.clone()))
                .cloned()
                .unwrap_or_else(Rational::zero)
                * &factor
                * &denom;
            let integral = engine.ch_correlator(g, &exps, &[2 * l - 1]);
            jets.push(JetCheck {
                genus: g,
                insertions: exps.clone(),
                pass: op == integral,
                operator_route: op,
                integral_route: integral,
            });
        }
    }
    let pass = jets.iter().all(|j| j.pass);
    let nonzero = jets.iter().filter(|j| !j.integral_route.is_zero()).count();
    Ok(DOperatorReport {
        l,
        depth,
        max_index,
        max_genus,
        jets,
        nonzero,
        pass,
    })
}

/// Checks D_{2a-1} D_{2b-1} Z = D_{2b-1} D_{2a-1} Z on the reachable jets.
/// Returns the number of compared nonzero coefficients.
pub fn d_commutation_check(engine: &Engine, a: u32, b: u32, depth: u32, max_index: u32, max_genus: u32) -> Result<(usize, bool)> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("operator indices must be at least one".into()));
    }
    let shape = jet_shape(max_index, depth, 2 * (a + b) as usize, 4);
    let z = potential(engine, &shape, max_genus).exp();
    let ab = d_operator(a, &d_operator(b, &z));
    let ba = d_operator(b, &d_operator(a, &z));
    let low = |p: &HPoly| -> BTreeMap<(i32, Vec<u8>), Rational> {
        p.terms
            .iter()
            .filter(|((h, m), _)| {
                *h <= max_genus as i32 - 1
                    && m.iter().skip(max_index as usize + 1).all(|&x| x == 0)
                    && m.iter().map(|&x| x as u32).sum::<u32>() <= depth
            })
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    };
    let (x, y) = (low(&ab), low(&ba));
    Ok((x.len(), x == y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn r_matrix_low_coefficients() {
        let r = r_matrix(4, 4).unwrap();
        assert_eq!(r.series.coeff(0, 0), int(1));
        assert_eq!(r.series.coeff(1, 1), rat(1, 12));
        assert_eq!(r.series.coeff(2, 2), rat(1, 288));
        assert_eq!(r.series.coeff(1, 0), int(0));
        assert_eq!(r.series.coeff(2, 1), int(0));
    }

    #[test]
    fn kernel_shape() {
        let v = edge_kernel(4, 3).unwrap();
        assert_eq!(v.get(0, 0), vec![int(0), rat(1, 12), int(0), int(0), int(0)]);
        for k in 0..=3 {
            for l in 0..=3 - k {
                assert_eq!(v.get(k, l), v.get(l, k));
                assert!(v.get(k, l)[0].is_zero());
            }
        }
    }

    #[test]
    fn genus_one_hand_value() {
        let e = Engine::new();
        // only the u^1 coefficient survives: the loop on a genus-0 vertex
        let s = feynman_sum(&e, 1, 2, &[0], 2, Perturb::default()).unwrap();
        assert_eq!(s, vec![int(0), rat(1, 24), int(0)]);
    }

    #[test]
    fn partitions_count() {
        assert_eq!(partitions(5, 5).len(), 7);
        assert_eq!(partitions(0, 0).len(), 1);
    }

    #[test]
    fn d_operator_on_m11() {
        let e = Engine::new();
        let r = d_operator_check(&e, 1, 1, 1, 1).unwrap();
        assert!(r.pass);
        let j = r.jets.iter().find(|j| j.genus == 1 && j.insertions == vec![0]).unwrap();
        assert_eq!(j.integral_route, rat(1, 24));
    }
}
