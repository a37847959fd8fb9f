//! Intersection numbers of psi, kappa and Hodge classes on M_{g,n}.
//!
//! Pure psi integrals come from the DVV recursion together with the string
//! and dilaton equations. Kappa classes are removed by pushing forward along
//! forgetful maps. Chern characters of the Hodge bundle are removed one at a
//! time by the Grothendieck-Riemann-Roch formula for the point target, so
//! every Hodge integral reduces to psi integrals.

mod cache;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::{bern, double_factorial_odd, factorial, factorial_q, multiset_splits, rat, Rational};
use crate::strata::HodgeFactor;

pub use cache::{CacheStats, CACHE_VERSION};

fn dfo(k: i64) -> Rational {
    Rational::from_integer(double_factorial_odd(k))
}

fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

fn remove_at(v: &[u32], i: usize) -> Vec<u32> {
    let mut w = v.to_vec();
    w.remove(i);
    w
}

fn with(v: &[u32], extra: &[u32]) -> Vec<u32> {
    let mut w = v.to_vec();
    w.extend_from_slice(extra);
    w.sort_unstable();
    w
}

/// Odd-part partitions of `i` with the coefficient of the corresponding
/// Chern character monomial in lambda_i.
fn lambda_in_ch(i: u32) -> Vec<(Vec<u32>, Rational)> {
    fn rec(rem: u32, max_part: u32, parts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(parts.clone());
            return;
        }
        let mut p = max_part.min(rem);
        if p % 2 == 0 {
            p -= 1;
        }
        while p >= 1 {
            parts.push(p);
            rec(rem - p, p, parts, out);
            parts.pop();
            if p < 2 {
                break;
            }
            p -= 2;
        }
    }
    let mut parts = Vec::new();
    rec(i, i, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|mut ps| {
            ps.sort_unstable();
            let mut coeff = Rational::one();
            let mut j = 0;
            while j < ps.len() {
                let mut k = j;
                while k < ps.len() && ps[k] == ps[j] {
                    k += 1;
                }
                let m = (k - j) as u32;
                let c = Rational::from_integer(factorial(ps[j] - 1));
                coeff = coeff * num_traits::pow(c, m as usize) / factorial_q(m);
                j = k;
            }
            (ps, coeff)
        })
        .collect()
}

/// Expresses a Hodge monomial as a polynomial in odd Chern characters.
pub fn hodge_to_ch(hodge: &[HodgeFactor]) -> Vec<(Vec<u32>, Rational)> {
    let mut cur: Vec<(Vec<u32>, Rational)> = vec![(Vec::new(), Rational::one())];
    for h in hodge {
        let options = match *h {
            HodgeFactor::Lambda(0) => vec![(Vec::new(), Rational::one())],
            HodgeFactor::Lambda(i) => lambda_in_ch(i),
            HodgeFactor::Ch(k) => vec![(vec![k], Rational::one())],
        };
        let mut next = std::collections::BTreeMap::new();
        for (m, c) in &cur {
            for (m2, c2) in &options {
                let key = with(m, m2);
                *next.entry(key).or_insert_with(Rational::zero) += c * c2;
            }
        }
        cur = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    cur
}

impl Engine {
    /// Witten-Kontsevich intersection number of psi classes on M_{g,n}.
    pub fn psi_integral(&self, g: u32, exps: &[u32]) -> Result<Rational> {
        if !is_stable(g, exps.len()) {
            return Err(Error::Unstable {
                g,
                n: exps.len() as u32,
            });
        }
        let mut k = exps.to_vec();
        k.sort_unstable();
        Ok(self.psi_sorted(g, k))
    }

    /// As [`Engine::psi_integral`] but zero on unstable input.
    pub fn psi_value(&self, g: u32, exps: &[u32]) -> Rational {
        let mut k = exps.to_vec();
        k.sort_unstable();
        self.psi_sorted(g, k)
    }

    fn psi_sorted(&self, g: u32, k: Vec<u32>) -> Rational {
        let n = k.len();
        if !is_stable(g, n) {
            return Rational::zero();
        }
        let total: u32 = k.iter().sum();
        if total as i64 != 3 * g as i64 - 3 + n as i64 {
            return Rational::zero();
        }
        if g == 0 && n == 3 {
            return Rational::one();
        }
        if g == 1 && n == 1 {
            return rat(1, 24);
        }
        let key = (g, k);
        if let Some(v) = self.psi_memo.get(&key) {
            return v.clone();
        }
        let k = &key.1;
        let val = if k[0] == 0 {
            // string equation
            let rest = remove_at(k, 0);
            let mut acc = Rational::zero();
            for j in 0..rest.len() {
                if rest[j] >= 1 {
                    let mut r = rest.clone();
                    r[j] -= 1;
                    r.sort_unstable();
                    acc += self.psi_sorted(g, r);
                }
            }
            acc
        } else if k[0] == 1 {
            // dilaton equation
            let rest = remove_at(k, 0);
            Rational::from_integer(BigInt::from(2 * g as i64 - 2 + rest.len() as i64))
                * self.psi_sorted(g, rest)
        } else {
            self.dvv(g, k)
        };
        self.psi_memo.insert(key, val.clone());
        val
    }

    fn dvv(&self, g: u32, k: &[u32]) -> Rational {
        let last = k.len() - 1;
        let top = k[last] as i64 - 1;
        let rest = &k[..last];
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            let kj = rest[j] as i64;
            let mut r = remove_at(rest, j);
            r.push((top + kj) as u32);
            r.sort_unstable();
            acc += dfo(top + kj + 1) / dfo(kj) * self.psi_sorted(g, r);
        }
        let half = rat(1, 2);
        for r in 0..top {
            let s = top - 1 - r;
            let w = dfo(r + 1) * dfo(s + 1) * &half;
            let mut inner = Rational::zero();
            if g >= 1 {
                inner += self.psi_sorted(g - 1, with(rest, &[r as u32, s as u32]));
            }
            for (left, right, mult) in multiset_splits(rest) {
                for g1 in 0..=g {
                    let a = self.psi_sorted(g1, with(&left, &[r as u32]));
                    if a.is_zero() {
                        continue;
                    }
                    let b = self.psi_sorted(g - g1, with(&right, &[s as u32]));
                    inner += a * b * Rational::from_integer(mult.clone());
                }
            }
            acc += w * inner;
        }
        acc / dfo(top + 2)
    }

    /// Integral over M_{g,n} of psi classes, kappa classes and a Hodge
    /// monomial. Zero when the degree differs from the dimension.
    pub fn vertex_integral(&self, g: u32, psi: &[u32], kappa: &[u32], hodge: &[HodgeFactor]) -> Rational {
        let n = psi.len();
        if !is_stable(g, n) {
            return Rational::zero();
        }
        let deg = psi.iter().sum::<u32>()
            + kappa.iter().sum::<u32>()
            + hodge.iter().map(|h| h.degree()).sum::<u32>();
        if deg as i64 != 3 * g as i64 - 3 + n as i64 {
            return Rational::zero();
        }
        let mut k = psi.to_vec();
        k.sort_unstable();
        let mut kap = kappa.to_vec();
        kap.sort_unstable();
        if hodge.is_empty() {
            return self.kappa_ch(g, &k, &kap, &[]);
        }
        if hodge.iter().any(|h| matches!(*h, HodgeFactor::Lambda(i) if i > g)) {
            return Rational::zero();
        }
        let mut acc = Rational::zero();
        for (chs, c) in hodge_to_ch(hodge) {
            let v = self.kappa_ch(g, &k, &kap, &chs);
            if !v.is_zero() {
                acc += c * v;
            }
        }
        acc
    }

    /// Integral of psi classes and a Hodge monomial.
    pub fn hodge_integral(&self, g: u32, psi: &[u32], hodge: &[HodgeFactor]) -> Rational {
        self.vertex_integral(g, psi, &[], hodge)
    }

    /// Integral of psi and kappa classes.
    pub fn kappa_integral(&self, g: u32, psi: &[u32], kappa: &[u32]) -> Rational {
        self.vertex_integral(g, psi, kappa, &[])
    }

    /// Correlator of psi classes with a product of odd Chern characters of
    /// the Hodge bundle, all multisets sorted.
    pub fn ch_correlator(&self, g: u32, psi: &[u32], chs: &[u32]) -> Rational {
        let mut k = psi.to_vec();
        k.sort_unstable();
        let mut c = chs.to_vec();
        c.sort_unstable();
        self.ch_value(g, k, c)
    }

    fn kappa_ch(&self, g: u32, k: &[u32], kappa: &[u32], chs: &[u32]) -> Rational {
        if kappa.is_empty() {
            return self.ch_value(g, k.to_vec(), chs.to_vec());
        }
        let key = (g, k.to_vec(), kappa.to_vec(), chs.to_vec());
        if let Some(v) = self.kappa_memo.get(&key) {
            return v.clone();
        }
        let b1 = kappa[0];
        let rest = &kappa[1..];
        let mut acc = Rational::zero();
        for mask in 0u64..(1u64 << rest.len()) {
            let mut extra = b1 + 1;
            let mut remaining = Vec::new();
            let mut size = 0;
            for (i, &b) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    extra += b;
                    size += 1;
                } else {
                    remaining.push(b);
                }
            }
            let v = self.kappa_ch(g, &with(k, &[extra]), &remaining, chs);
            if size % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        self.kappa_memo.insert(key, acc.clone());
        acc
    }

    fn ch_value(&self, g: u32, k: Vec<u32>, chs: Vec<u32>) -> Rational {
        if chs.is_empty() {
            return self.psi_sorted(g, k);
        }
        let n = k.len();
        if g == 0 || !is_stable(g, n) || chs.iter().any(|&c| c % 2 == 0) {
            return Rational::zero();
        }
        let total = k.iter().sum::<u32>() + chs.iter().sum::<u32>();
        if total as i64 != 3 * g as i64 - 3 + n as i64 {
            return Rational::zero();
        }
        let key = (g, k, chs);
        if let Some(v) = self.ch_memo.get(&key) {
            return v.clone();
        }
        let (k, chs) = (&key.1, &key.2);
        let c = *chs.last().expect("nonempty");
        let rest_c = &chs[..chs.len() - 1];
        let two_l = c + 1;
        let mut acc = self.ch_value(g, with(k, &[two_l]), rest_c.to_vec());
        for j in 0..k.len() {
            let mut r = remove_at(k, j);
            r.push(k[j] + c);
            r.sort_unstable();
            acc -= self.ch_value(g, r, rest_c.to_vec());
        }
        let half = rat(1, 2);
        let splits_k = multiset_splits(k);
        let splits_c = multiset_splits(rest_c);
        for i in 0..=(two_l - 2) {
            let j = two_l - 2 - i;
            let sgn = if i % 2 == 0 { half.clone() } else { -half.clone() };
            let mut inner = Rational::zero();
            inner += self.ch_value(g - 1, with(k, &[i, j]), rest_c.to_vec());
            for (kl, kr, mk) in &splits_k {
                for (cl, cr, mc) in &splits_c {
                    for h in 0..=g {
                        let a = self.ch_value(h, with(kl, &[i]), cl.clone());
                        if a.is_zero() {
                            continue;
                        }
                        let b = self.ch_value(g - h, with(kr, &[j]), cr.clone());
                        if b.is_zero() {
                            continue;
                        }
                        inner += a * b * Rational::from_integer(mk * mc);
                    }
                }
            }
            acc += sgn * inner;
        }
        let val = acc * bern(two_l) / factorial_q(two_l);
        self.ch_memo.insert(key, val.clone());
        val
    }
}
