//! Jets at t = 0 of correlation functions of the point on the big phase
//! space. The state space is one-dimensional with unit pairing, so the
//! index alpha is trivial and phi_alpha = phi^alpha = tau_0.
//!
//! A function of t is represented by its jet: the values at t = 0 of all
//! mixed derivatives along a fixed list of extra insertions, indexed by
//! subsets of that list. Products of functions obey the Leibniz rule on
//! subsets.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{bern, binomial, compositions, factorial_q, int, Rational};
use crate::strata::HodgeFactor;

/// Formal vector field expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TExpr {
    Tau(u32),
    /// tau_+ applied to the inner expression
    Shift(Box<TExpr>),
    /// <<W phi^alpha>>_0 phi_alpha
    Correction(Box<TExpr>),
    Diff(Box<TExpr>, Box<TExpr>),
}

impl TExpr {
    /// T(W) = tau_+(W) - <<W phi^alpha>>_0 phi_alpha.
    pub fn t(self) -> TExpr {
        TExpr::Diff(Box::new(TExpr::Shift(Box::new(self.clone()))), Box::new(TExpr::Correction(Box::new(self))))
    }

    /// T^j(tau_k).
    pub fn t_power(j: u32, k: u32) -> TExpr {
        (0..j).fold(TExpr::Tau(k), |e, _| e.t())
    }

    pub fn depth(&self) -> u32 {
        match self {
            TExpr::Tau(_) => 0,
            TExpr::Shift(e) | TExpr::Correction(e) => e.depth(),
            TExpr::Diff(a, b) => a.depth().max(b.depth()) + 1,
        }
    }
}

/// One term of an expanded expression: sign * prod_j <<tau_j tau_0>>_0 * tau_index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TTerm {
    pub sign: i8,
    pub corrections: Vec<u32>,
    pub index: u32,
}

pub fn expand(e: &TExpr) -> Vec<TTerm> {
    match e {
        TExpr::Tau(k) => vec![TTerm {
            sign: 1,
            corrections: Vec::new(),
            index: *k,
        }],
        TExpr::Shift(w) => expand(w)
            .into_iter()
            .map(|mut t| {
                t.index += 1;
                t
            })
            .collect(),
        TExpr::Correction(w) => expand(w)
            .into_iter()
            .map(|mut t| {
                t.corrections.push(t.index);
                t.index = 0;
                t
            })
            .collect(),
        TExpr::Diff(a, b) => {
            let mut out = expand(a);
            out.extend(expand(b).into_iter().map(|mut t| {
                t.sign = -t.sign;
                t
            }));
            out
        }
    }
}

/// Values at t = 0 of the derivatives along every subset of the extras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet(Vec<Rational>);

impl Jet {
    /// Value with all extras applied.
    pub fn top(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

/// Bound on the extra insertions accepted by the identity checks.
#[derive(Clone, Copy, Debug)]
pub struct ExtrasCap {
    pub max_count: usize,
    pub max_index: u32,
}

impl Default for ExtrasCap {
    fn default() -> Self {
        ExtrasCap {
            max_count: 2,
            max_index: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    None,
    /// lambda_g inserted in the correlator
    Lambda,
    /// P^g_g(0,...,0) via the stable-graph contraction
    Pixton,
}

#[derive(Clone, Debug)]
pub struct BracketQuery {
    pub genus: u32,
    pub slots: Vec<TExpr>,
    pub extras: Vec<u32>,
    pub twist: Twist,
}

/// Evaluation context for a fixed list of extra insertions.
pub struct Phase<'a> {
    engine: &'a Engine,
    extras: Vec<u32>,
}

impl<'a> Phase<'a> {
    pub fn new(engine: &'a Engine, extras: &[u32]) -> Self {
        Phase {
            engine,
            extras: extras.to_vec(),
        }
    }

    fn size(&self) -> usize {
        1 << self.extras.len()
    }

    pub fn constant(&self, c: Rational) -> Jet {
        let mut v = vec![Rational::zero(); self.size()];
        v[0] = c;
        Jet(v)
    }

    pub fn zero(&self) -> Jet {
        self.constant(Rational::zero())
    }

    pub fn add(&self, a: &Jet, b: &Jet) -> Jet {
        Jet(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, a: &Jet, c: &Rational) -> Jet {
        Jet(a.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, a: &Jet, b: &Jet) -> Jet {
        let n = self.size();
        let mut out = vec![Rational::zero(); n];
        for (s, slot) in out.iter_mut().enumerate() {
            // subsets of s
            let mut sub = s;
            loop {
                let x = &a.0[sub];
                let y = &b.0[s ^ sub];
                if !x.is_zero() && !y.is_zero() {
                    *slot += x * y;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & s;
            }
        }
        Jet(out)
    }

    fn with_extras(&self, ks: &[u32], s: usize) -> Vec<u32> {
        let mut all = ks.to_vec();
        all.extend(
            self.extras
                .iter()
                .enumerate()
                .filter(|(p, _)| s >> p & 1 == 1)
                .map(|(_, &e)| e),
        );
        all
    }

    /// Jet of <<tau_{k_1} ... tau_{k_n}>>_g, optionally with lambda_g.
    pub fn corr(&self, g: u32, ks: &[u32], lambda: bool) -> Jet {
        Jet((0..self.size())
            .map(|s| {
                let all = self.with_extras(ks, s);
                if lambda && g > 0 {
                    self.engine.hodge_integral(g, &all, &[HodgeFactor::Lambda(g)])
                } else {
                    self.engine.psi_value(g, &all)
                }
            })
            .collect())
    }

    /// Jet of the function t~_n = t_n - delta_{n,1}.
    pub fn tilde(&self, n: u32) -> Jet {
        let mut v = vec![Rational::zero(); self.size()];
        if n == 1 {
            v[0] = -Rational::one();
        }
        for (p, &e) in self.extras.iter().enumerate() {
            if e == n {
                v[1 << p] = Rational::one();
            }
        }
        Jet(v)
    }

    /// Components (index, coefficient jet) of a vector field expression.
    pub fn vector_field(&self, e: &TExpr) -> Vec<(u32, Jet)> {
        let mut out: Vec<(u32, Jet)> = Vec::new();
        for t in expand(e) {
            let mut c = self.constant(int(t.sign as i64));
            for &j in &t.corrections {
                c = self.mul(&c, &self.corr(0, &[j, 0], false));
            }
            match out.iter_mut().find(|(k, _)| *k == t.index) {
                Some((_, acc)) => *acc = self.add(acc, &c),
                None => out.push((t.index, c)),
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// Contracts vector fields into one correlator of genus g.
    fn contract(&self, g: u32, slots: &[Vec<(u32, Jet)>], lambda: bool) -> Jet {
        let mut acc = self.zero();
        let mut idx = vec![0usize; slots.len()];
        if slots.iter().any(|s| s.is_empty()) {
            return acc;
        }
        loop {
            let ks: Vec<u32> = idx.iter().zip(slots).map(|(&i, s)| s[i].0).collect();
            let mut term = self.corr(g, &ks, lambda);
            for (&i, s) in idx.iter().zip(slots) {
                term = self.mul(&term, &s[i].1);
            }
            acc = self.add(&acc, &term);
            let mut p = 0;
            loop {
                if p == slots.len() {
                    return acc;
                }
                idx[p] += 1;
                if idx[p] < slots[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    /// <<W_1 ... W_n>>_g without twist, or with lambda_g.
    pub fn bracket(&self, g: u32, slots: &[TExpr], lambda: bool) -> Jet {
        let vfs: Vec<_> = slots.iter().map(|e| self.vector_field(e)).collect();
        self.contract(g, &vfs, lambda)
    }

    /// <<W_1 ... W_n; P^g_g(0,...,0)>>_g as a sum over stable graphs with
    /// n legs: half-edge psi powers become T-powers, edges carry the pair
    /// (T^a(phi_alpha), T^b(phi^alpha)).
    pub fn pixton(&self, g: u32, slots: &[TExpr]) -> Result<Jet> {
        if g == 0 {
            return Ok(self.bracket(0, slots, false));
        }
        let p = self.engine.pixton_zero(g, slots.len())?;
        let mut acc = self.zero();
        for (dec, c) in p.iter() {
            if dec.vertex.iter().any(|v| !v.is_plain()) {
                return Err(Error::InvalidArgument("vertex decorations in a bracket contraction".into()));
            }
            let gr = &dec.graph;
            let mut per_vertex: Vec<Vec<Vec<(u32, Jet)>>> = vec![Vec::new(); gr.num_vertices()];
            for h in 0..gr.num_half_edges() {
                let base = if h < gr.num_legs() {
                    slots[h].clone()
                } else {
                    TExpr::Tau(0)
                };
                let e = (0..dec.psi[h]).fold(base, |e, _| e.t());
                per_vertex[gr.half_edge_vertex(h)].push(self.vector_field(&e));
            }
            let mut term = self.constant(c.clone());
            for (v, slots_v) in per_vertex.iter().enumerate() {
                term = self.mul(&term, &self.contract(gr.vertex_genus(v), slots_v, false));
            }
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    pub fn query(&self, q: &BracketQuery) -> Result<Jet> {
        match q.twist {
            Twist::None => Ok(self.bracket(q.genus, &q.slots, false)),
            Twist::Lambda => Ok(self.bracket(q.genus, &q.slots, true)),
            Twist::Pixton => self.pixton(q.genus, &q.slots),
        }
    }

    /// <<T^a(phi) T^b(phi); P^g_g(0,0)>>_g.
    pub fn pixton_pair(&self, g: u32, a: u32, b: u32) -> Result<Jet> {
        self.pixton(g, &[TExpr::t_power(a, 0), TExpr::t_power(b, 0)])
    }

    /// -sum_n t~_n <<tau_{n+shift}>>_g.
    fn dilaton_term(&self, g: u32, shift: u32) -> Jet {
        let mut ns: Vec<u32> = self.extras.clone();
        ns.push(1);
        ns.sort_unstable();
        ns.dedup();
        let mut acc = self.zero();
        for n in ns {
            let t = self.mul(&self.tilde(n), &self.corr(g, &[n + shift], false));
            acc = self.add(&acc, &t);
        }
        self.scale(&acc, &int(-1))
    }

    /// sum_{i=0}^{2l-2} (-1)^i sum_{h=0}^{g} <<tau_i>>_h <<tau_{2l-2-i}>>_{g-h}.
    fn split_sum(&self, g: u32, l: u32) -> Jet {
        let mut acc = self.zero();
        for i in 0..=(2 * l - 2) {
            for h in 0..=g {
                let t = self.mul(&self.corr(h, &[i], false), &self.corr(g - h, &[2 * l - 2 - i], false));
                acc = self.add(&acc, &self.scale(&t, &crate::exact::sign(i as i64)));
            }
        }
        acc
    }

    /// sum_{i=0}^{2l-2} (-1)^i <<A_i B_{2l-2-i}>>_{g-1} where A, B are tau or T-powers.
    fn loop_sum(&self, g: u32, l: u32, with_t: bool) -> Jet {
        let mut acc = self.zero();
        if g == 0 {
            return acc;
        }
        for i in 0..=(2 * l - 2) {
            let j = 2 * l - 2 - i;
            let slots = if with_t {
                vec![TExpr::t_power(i, 0), TExpr::t_power(j, 0)]
            } else {
                vec![TExpr::Tau(i), TExpr::Tau(j)]
            };
            let t = self.bracket(g - 1, &slots, false);
            acc = self.add(&acc, &self.scale(&t, &crate::exact::sign(i as i64)));
        }
        acc
    }

    /// The grand sum over circular data
    /// sum_m 1/m sum_k sum_{g_i} prod_i (-1/k_i!) sum_l C(k_i-1, l) <<T^l T^{k_i-1-l}; P>>_{g_i}.
    fn circular_jet(&self, g: u32) -> Result<Jet> {
        let mut acc = self.zero();
        for m in 1..g {
            let mut inner = self.zero();
            for ks in compositions(g, m as usize) {
                for gs in compositions(g - 1, m as usize) {
                    let mut prod = self.constant(Rational::one());
                    for (&k, &gi) in ks.iter().zip(&gs) {
                        let mut f = self.zero();
                        for l in 0..k {
                            let c = Rational::from_integer(binomial(k - 1, l));
                            f = self.add(&f, &self.scale(&self.pixton_pair(gi, l, k - 1 - l)?, &c));
                        }
                        let f = self.scale(&f, &(-factorial_q(k).recip()));
                        prod = self.mul(&prod, &f);
                    }
                    inner = self.add(&inner, &prod);
                }
            }
            acc = self.add(&acc, &self.scale(&inner, &int(m as i64).recip()));
        }
        Ok(acc)
    }

    /// (2g)!/B_{2g} <<ch_{2g-1}>>_g.
    fn ch_route(&self, g: u32) -> Jet {
        let c = factorial_q(2 * g) / bern(2 * g);
        Jet((0..self.size())
            .map(|s| self.engine.ch_correlator(g, &self.with_extras(&[], s), &[2 * g - 1]) * &c)
            .collect())
    }
}

/// Catalog of universal equations checked at t = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identity {
    /// Vanishing of the GRR expression at index l > g.
    Fp { g: u32, l: u32 },
    /// The degree-g equation with the circular-graph right side.
    Thm1 { g: u32 },
    /// Vanishing of the split-only expression at l = g.
    LiuXu { g: u32 },
    /// Loop term in descendants against the circular sum.
    Eq218 { g: u32 },
    /// Loop term in T-powers against the circular sum.
    Cor { g: u32 },
    /// <<T(tau_k)>>_1 = 1/24 <<tau_k phi phi>>_0.
    Trr1 { k: u32 },
    /// The chain of equalities in genus 2.
    G2Example,
}

impl Identity {
    pub fn parse(name: &str, g: u32, l: Option<u32>) -> Result<Identity> {
        Ok(match name.to_ascii_lowercase().as_str() {
            "fp" => Identity::Fp { g, l: l.unwrap_or(g + 1) },
            "thm1" => Identity::Thm1 { g },
            "liuxu" => Identity::LiuXu { g },
            "eq218" => Identity::Eq218 { g },
            "cor" => Identity::Cor { g },
            "trr1" => Identity::Trr1 { k: l.unwrap_or(0) },
            "g2example" => Identity::G2Example,
            _ => return Err(Error::InvalidArgument(format!("unknown identity {name}"))),
        })
    }

    pub fn name(&self) -> String {
        match self {
            Identity::Fp { g, l } => format!("FP g={g} l={l}"),
            Identity::Thm1 { g } => format!("Thm1 g={g}"),
            Identity::LiuXu { g } => format!("LiuXu g={g}"),
            Identity::Eq218 { g } => format!("Eq218 g={g}"),
            Identity::Cor { g } => format!("Cor g={g}"),
            Identity::Trr1 { k } => format!("TRR1 k={k}"),
            Identity::G2Example => "G2Example".into(),
        }
    }

    /// Coefficient sites that enter this identity; see
    /// [`identity_values_perturbed`].
    pub fn perturbation_sites(&self) -> Vec<usize> {
        match self {
            Identity::Fp { .. } | Identity::LiuXu { .. } => vec![1, 2],
            Identity::Thm1 { .. } => vec![0, 1, 2],
            _ => vec![0, 1],
        }
    }

    /// Extra insertions at which every perturbed term is nonzero. At t = 0
    /// with no extras the left side of the vanishing equations is a sum of
    /// zeros, so a perturbation there is invisible.
    pub fn control_extras(&self) -> Vec<u32> {
        match *self {
            Identity::Fp { g: 1, .. } => vec![0, 0, 0],
            Identity::Fp { .. } => vec![0, 0],
            Identity::LiuXu { g } if g >= 2 => vec![1],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub id: String,
    pub extras: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
    /// Every value that must agree, in order; at least lhs and rhs.
    pub chain: Vec<String>,
    pub pass: bool,
}

fn result(id: &Identity, extras: &[u32], chain: Vec<Rational>) -> IdentityResult {
    let pass = chain.windows(2).all(|w| w[0] == w[1]);
    IdentityResult {
        id: id.name(),
        extras: extras.to_vec(),
        lhs: chain[0].to_string(),
        rhs: chain[chain.len() - 1].to_string(),
        chain: chain.iter().map(|q| q.to_string()).collect(),
        pass,
    }
}

fn check_extras(extras: &[u32], cap: ExtrasCap) -> Result<()> {
    if extras.len() > cap.max_count || extras.iter().any(|&e| e > cap.max_index) {
        return Err(Error::InvalidArgument(format!(
            "extra insertions {extras:?} exceed the cap of {} insertions of index <= {}",
            cap.max_count, cap.max_index
        )));
    }
    Ok(())
}

/// Values of every side of an identity with all extras applied.
pub fn identity_values(engine: &Engine, id: &Identity, extras: &[u32]) -> Result<Vec<Rational>> {
    identity_values_perturbed(engine, id, extras, None)
}

/// As [`identity_values`], with one coefficient of the identity increased by
/// one. Site 0 is a coefficient on the right; sites 1 and 2 are on the left.
pub fn identity_values_perturbed(
    engine: &Engine,
    id: &Identity,
    extras: &[u32],
    site: Option<usize>,
) -> Result<Vec<Rational>> {
    let ph = Phase::new(engine, extras);
    let bump = |s: usize| if site == Some(s) { Rational::one() } else { Rational::zero() };
    let half = Rational::new(1.into(), 2.into());
    let circ_coeff = |g: u32, power: u32| -> Rational {
        crate::exact::sign(g as i64) * int(g as i64) / int(2).pow(power as i32) + bump(0)
    };
    let fp = |g: u32, l: u32, with_loop: bool| -> Rational {
        let mut inner = ph.split_sum(g, l);
        if with_loop {
            inner = ph.add(&inner, &ph.loop_sum(g, l, false));
        }
        let d = ph.dilaton_term(g, 2 * l - 1);
        (d.top() * (Rational::one() + bump(1))) + inner.top() * (&half + bump(2))
    };
    Ok(match *id {
        Identity::Fp { g, l } => {
            if l <= g || g == 0 {
                return Err(Error::InvalidArgument("the vanishing equation needs l > g >= 1".into()));
            }
            vec![fp(g, l, true), Rational::zero()]
        }
        Identity::Thm1 { g } => {
            if g < 2 {
                return Err(Error::InvalidArgument("needs g >= 2".into()));
            }
            let lhs = fp(g, g, true);
            let rhs = ph.circular_jet(g)?.top() * circ_coeff(g, 2 * g - 1);
            vec![lhs, ph.ch_route(g).top(), rhs]
        }
        Identity::LiuXu { g } => {
            if g < 1 {
                return Err(Error::InvalidArgument("needs g >= 1".into()));
            }
            vec![fp(g, g, false), Rational::zero()]
        }
        Identity::Eq218 { g } | Identity::Cor { g } => {
            if g < 2 {
                return Err(Error::InvalidArgument("needs g >= 2".into()));
            }
            let with_t = matches!(id, Identity::Cor { .. });
            let lhs = ph.loop_sum(g, g, with_t).top() * (Rational::one() + bump(1));
            let rhs = ph.circular_jet(g)?.top() * circ_coeff(g, 2 * g - 2);
            vec![lhs, rhs]
        }
        Identity::Trr1 { k } => {
            let lhs = ph.bracket(1, &[TExpr::Tau(k).t()], false).top() * (Rational::one() + bump(1));
            let rhs = ph.bracket(0, &[TExpr::Tau(k), TExpr::Tau(0), TExpr::Tau(0)], false).top()
                * (int(24).recip() + bump(0));
            vec![lhs, rhs]
        }
        Identity::G2Example => {
            let t = TExpr::t_power;
            let a = ph.loop_sum(2, 2, true).top();
            let b = ph.bracket(1, &[t(0, 0), t(2, 0)], false).top() * (int(2) + bump(1))
                - ph.bracket(1, &[t(1, 0), t(1, 0)], false).top();
            let c = ph.bracket(0, &[t(0, 0), t(1, 0), t(0, 0), t(0, 0)], false).top() / int(24);
            let d = (ph.pixton_pair(1, 1, 0)?.top() + ph.pixton_pair(1, 0, 1)?.top()) * (int(-1) / int(4) + bump(0));
            let e = ph.pixton_pair(1, 0, 1)?.top() * (-half);
            vec![a, b, c, d, e]
        }
    })
}

pub fn check_identity(engine: &Engine, id: &Identity, extras: &[u32]) -> Result<IdentityResult> {
    check_identity_capped(engine, id, extras, ExtrasCap::default())
}

pub fn check_identity_capped(engine: &Engine, id: &Identity, extras: &[u32], cap: ExtrasCap) -> Result<IdentityResult> {
    check_extras(extras, cap)?;
    let chain = identity_values(engine, id, extras)?;
    Ok(result(id, extras, chain))
}

/// Runs an identity with one coefficient perturbed; see
/// [`identity_values_perturbed`] for the sites.
pub fn check_identity_perturbed(engine: &Engine, id: &Identity, extras: &[u32], site: usize) -> Result<IdentityResult> {
    let chain = identity_values_perturbed(engine, id, extras, Some(site))?;
    let mut r = result(id, extras, chain);
    r.id = format!("{}+perturbed@{site}", r.id);
    Ok(r)
}

/// A bracket of genus g with fixed slots and one open slot.
#[derive(Clone, Debug)]
pub struct OpenBracket {
    pub genus: u32,
    pub fixed: Vec<u32>,
}

impl OpenBracket {
    fn eval(&self, ph: &Phase, w: TExpr) -> Jet {
        let mut slots = vec![w];
        slots.extend(self.fixed.iter().map(|&k| TExpr::Tau(k)));
        ph.bracket(self.genus, &slots, false)
    }
}

/// Compares sum (-1)^i P(tau_i) Q(tau_{m-i}) with sum (-1)^i P(T^i) Q(T^{m-i}).
pub fn tensor_swap_check(
    engine: &Engine,
    m: u32,
    p: &OpenBracket,
    q: &OpenBracket,
    extras: &[u32],
) -> (Rational, Rational, bool) {
    let ph = Phase::new(engine, extras);
    let mut lhs = ph.zero();
    let mut rhs = ph.zero();
    for i in 0..=m {
        let s = crate::exact::sign(i as i64);
        let a = ph.mul(&p.eval(&ph, TExpr::Tau(i)), &q.eval(&ph, TExpr::Tau(m - i)));
        let b = ph.mul(
            &p.eval(&ph, TExpr::t_power(i, 0)),
            &q.eval(&ph, TExpr::t_power(m - i, 0)),
        );
        lhs = ph.add(&lhs, &ph.scale(&a, &s));
        rhs = ph.add(&rhs, &ph.scale(&b, &s));
    }
    let (l, r) = (lhs.top(), rhs.top());
    let ok = l == r;
    (l, r, ok)
}

/// <<T^a(phi) T^b(phi); P^g_g(0,0)>>_g with all extras applied.
pub fn pixton_bracket(engine: &Engine, a: u32, b: u32, g: u32, extras: &[u32]) -> Result<Rational> {
    Ok(Phase::new(engine, extras).pixton_pair(g, a, b)?.top())
}

/// The same bracket through lambda_g: (-2)^g <<T^a(phi) T^b(phi); lambda_g>>_g.
pub fn lambda_bracket(engine: &Engine, a: u32, b: u32, g: u32, extras: &[u32]) -> Rational {
    let ph = Phase::new(engine, extras);
    let v = ph.bracket(g, &[TExpr::t_power(a, 0), TExpr::t_power(b, 0)], true).top();
    v * int(-2).pow(g as i32)
}

pub fn eval_bracket(engine: &Engine, q: &BracketQuery) -> Result<Rational> {
    Ok(Phase::new(engine, &q.extras).query(q)?.top())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn expansion_sizes() {
        assert_eq!(expand(&TExpr::t_power(0, 3)).len(), 1);
        assert_eq!(expand(&TExpr::t_power(3, 0)).len(), 8);
        assert_eq!(TExpr::t_power(3, 0).depth(), 3);
    }

    #[test]
    fn basic_brackets() {
        let e = Engine::new();
        let q = BracketQuery {
            genus: 1,
            slots: vec![TExpr::t_power(1, 0)],
            extras: vec![],
            twist: Twist::None,
        };
        assert_eq!(eval_bracket(&e, &q).unwrap(), rat(1, 24));
        let q = BracketQuery {
            genus: 0,
            slots: vec![TExpr::Tau(0), TExpr::Tau(0)],
            extras: vec![],
            twist: Twist::None,
        };
        assert!(eval_bracket(&e, &q).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_subsets() {
        let e = Engine::new();
        let ph = Phase::new(&e, &[0, 1]);
        let a = Jet(vec![int(1), int(2), int(3), int(4)]);
        let b = Jet(vec![int(5), int(6), int(7), int(8)]);
        // (ab)_{12} = a_12 b + a_1 b_2 + a_2 b_1 + a b_12
        assert_eq!(ph.mul(&a, &b).top(), int(4 * 5 + 2 * 7 + 3 * 6 + 8));
    }
}
