//! Textual form of classes:
//! `coeff * Graph[vertices:[..], legs:[(m,v),..], edges:[((v,h),(v,h)),..]] * psi{h:e,..} * kappa{v:[a,..]} * marker{v:[lambda1,ch3,P]}`
//! with `M(g,n)` accepted for the single-vertex graph. Terms are separated by
//! newlines or by `+` outside brackets.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{Decorated, HodgeFactor, TautClass, VertexData};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::graphs::StableGraph;

fn perr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    out.push(cur);
    out
}

fn strip<'a>(s: &'a str, open: &str, close: char) -> Option<&'a str> {
    let s = s.trim();
    s.strip_prefix(open)?.strip_suffix(close)
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("expected a number, found '{}'", s.trim())))
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient '{s}'")))?;
    let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient '{s}'")))?;
    if d == BigInt::from(0) {
        return perr("zero denominator");
    }
    Ok(Rational::new(n, d))
}

fn parse_list(s: &str) -> Result<Vec<String>> {
    let inner = strip(s, "[", ']').ok_or_else(|| Error::Parse(format!("expected a list, found '{s}'")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(split_top(inner, ',').into_iter().map(|x| x.trim().to_string()).collect())
}

fn parse_pair(s: &str) -> Result<(String, String)> {
    let inner = strip(s, "(", ')').ok_or_else(|| Error::Parse(format!("expected a pair, found '{s}'")))?;
    let parts = split_top(inner, ',');
    if parts.len() != 2 {
        return perr(format!("expected a pair, found '{s}'"));
    }
    Ok((parts[0].trim().to_string(), parts[1].trim().to_string()))
}

/// Parsed graph with a map from textual half-edge labels to internal indices.
fn parse_graph(s: &str) -> Result<(StableGraph, HashMap<usize, usize>)> {
    let body = strip(s, "Graph[", ']').ok_or_else(|| Error::Parse("expected Graph[...]".into()))?;
    let mut genera = None;
    let mut legs_raw: Vec<(usize, usize)> = Vec::new();
    let mut edges_raw: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for field in split_top(body, ',') {
        let (key, val) = field
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad graph field '{field}'")))?;
        match key.trim() {
            "vertices" => {
                genera = Some(parse_list(val)?.iter().map(|x| num::<u32>(x)).collect::<Result<Vec<_>>>()?);
            }
            "legs" => {
                for p in parse_list(val)? {
                    let (m, v) = parse_pair(&p)?;
                    legs_raw.push((num(&m)?, num(&v)?));
                }
            }
            "edges" => {
                for p in parse_list(val)? {
                    let (a, b) = parse_pair(&p)?;
                    let (va, ha) = parse_pair(&a)?;
                    let (vb, hb) = parse_pair(&b)?;
                    edges_raw.push(((num(&va)?, num(&ha)?), (num(&vb)?, num(&hb)?)));
                }
            }
            other => return perr(format!("unknown graph field '{other}'")),
        }
    }
    let genera = genera.ok_or_else(|| Error::Parse("graph without vertices".into()))?;
    let n = legs_raw.len();
    let mut legs = vec![usize::MAX; n];
    let mut hmap = HashMap::new();
    for &(m, v) in &legs_raw {
        if m == 0 || m > n || legs[m - 1] != usize::MAX {
            return perr(format!("markings must be 1..{n} without repetition"));
        }
        legs[m - 1] = v;
        hmap.insert(m, m - 1);
    }
    let mut edges = Vec::new();
    for (e, &((va, ha), (vb, hb))) in edges_raw.iter().enumerate() {
        for (h, idx) in [(ha, n + 2 * e), (hb, n + 2 * e + 1)] {
            if hmap.insert(h, idx).is_some() {
                return perr(format!("half-edge label {h} used twice"));
            }
        }
        edges.push((va, vb));
    }
    Ok((StableGraph::new(genera, legs, edges)?, hmap))
}

fn parse_marker(name: &str) -> Result<(Option<HodgeFactor>, bool)> {
    let name = name.trim();
    if name == "P" {
        return Ok((None, true));
    }
    if let Some(i) = name.strip_prefix("lambda") {
        return Ok((Some(HodgeFactor::Lambda(num(i)?)), false));
    }
    if let Some(i) = name.strip_prefix("ch") {
        return Ok((Some(HodgeFactor::Ch(num(i)?)), false));
    }
    perr(format!("unknown marker '{name}'"))
}

fn parse_map(s: &str, open: &str) -> Result<Vec<(String, String)>> {
    let inner = strip(s, open, '}').ok_or_else(|| Error::Parse(format!("expected {open}...}}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(inner, ',')
        .into_iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad entry '{kv}'")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn one_or_list(s: &str) -> Result<Vec<String>> {
    if s.trim_start().starts_with('[') {
        parse_list(s)
    } else {
        Ok(vec![s.trim().to_string()])
    }
}

/// Parses a single term into a decorated stratum and its coefficient.
pub fn parse_term(s: &str) -> Result<(Decorated, Rational)> {
    let mut coeff = Rational::one();
    let mut dec: Option<(Decorated, HashMap<usize, usize>)> = None;
    let mut rest = Vec::new();
    // top-level whitespace separates factors like '*', as in "M(1,1) psi{1:1}"
    let mut depth = 0i32;
    let normalized: String = s
        .chars()
        .map(|ch| {
            match ch {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                _ => {}
            }
            if depth == 0 && ch.is_whitespace() {
                '*'
            } else {
                ch
            }
        })
        .collect();
    for factor in split_top(&normalized, '*') {
        let f = factor.trim();
        if f.is_empty() {
            continue;
        }
        if f.starts_with("Graph[") {
            let (g, hm) = parse_graph(f)?;
            dec = Some((Decorated::new(g), hm));
        } else if let Some(inner) = strip(f, "M(", ')') {
            let parts = split_top(inner, ',');
            if parts.len() != 2 {
                return perr("expected M(g,n)");
            }
            let (g, n): (u32, usize) = (num(&parts[0])?, num(&parts[1])?);
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                return Err(Error::Unstable { g, n: n as u32 });
            }
            let hm = (1..=n).map(|i| (i, i - 1)).collect();
            dec = Some((Decorated::trivial(g, n), hm));
        } else if f.starts_with("psi{") || f.starts_with("kappa{") || f.starts_with("marker{") {
            rest.push(f.to_string());
        } else {
            coeff *= parse_rational(f)?;
        }
    }
    let (mut dec, hmap) = dec.ok_or_else(|| Error::Parse(format!("term without a graph: '{s}'")))?;
    for f in rest {
        if f.starts_with("psi{") {
            for (h, e) in parse_map(&f, "psi{")? {
                let h: usize = num(&h)?;
                let idx = *hmap
                    .get(&h)
                    .ok_or_else(|| Error::Parse(format!("unknown half-edge {h}")))?;
                dec.psi[idx] += num::<u32>(&e)?;
            }
        } else if f.starts_with("kappa{") {
            for (v, list) in parse_map(&f, "kappa{")? {
                let v: usize = num(&v)?;
                let data = dec
                    .vertex
                    .get_mut(v)
                    .ok_or_else(|| Error::Parse(format!("unknown vertex {v}")))?;
                for a in one_or_list(&list)? {
                    data.kappa.push(num(&a)?);
                }
            }
        } else {
            for (v, list) in parse_map(&f, "marker{")? {
                let v: usize = num(&v)?;
                let data = dec
                    .vertex
                    .get_mut(v)
                    .ok_or_else(|| Error::Parse(format!("unknown vertex {v}")))?;
                for m in one_or_list(&list)? {
                    match parse_marker(&m)? {
                        (Some(h), _) => data.hodge.push(h),
                        (None, _) => data.pixton = true,
                    }
                }
            }
        }
    }
    for d in dec.vertex.iter_mut() {
        normalize(d);
    }
    Ok((dec, coeff))
}

fn normalize(d: &mut VertexData) {
    d.normalize();
}

/// Parses a sum of terms; all terms must live on the same M_{g,n}.
pub fn parse_class(s: &str) -> Result<TautClass> {
    let mut terms = Vec::new();
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for t in split_top(line, '+') {
            if !t.trim().is_empty() {
                terms.push(parse_term(&t)?);
            }
        }
    }
    let (g, n) = match terms.first() {
        Some((d, _)) => (d.genus(), d.num_markings()),
        None => return perr("empty class"),
    };
    if terms.iter().any(|(d, _)| d.genus() != g || d.num_markings() != n) {
        return perr("terms live on different moduli spaces");
    }
    Ok(TautClass::from_terms(g, n, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn roundtrip_display() {
        let c = parse_class(
            "-1/480 * Graph[vertices:[1], legs:[], edges:[((0,1),(0,2))]] * psi{1:1} * marker{0:[P]}",
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        let again = parse_class(&c.to_string()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.iter().next().unwrap().1, &rat(-1, 480));
    }

    #[test]
    fn shorthand_space() {
        let (d, q) = parse_term("M(1,1) psi{1:1}").unwrap();
        assert_eq!(d.psi, vec![1]);
        assert!(q.is_one());
        assert!(parse_term("M(0,2)").is_err());
    }
}
