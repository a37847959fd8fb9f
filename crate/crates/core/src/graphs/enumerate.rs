use std::collections::BTreeMap;

use super::StableGraph;
use crate::error::{Error, Result};
use crate::exact::compositions;
use crate::par::{self, Mode};

fn one_step_degenerations(graph: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    for v in 0..graph.num_vertices() {
        if let Some(l) = graph.degenerate_loop(v) {
            out.push(l);
        }
        let hs = graph.half_edges_at(v);
        let gv = graph.vertex_genus(v);
        for h in 0..=gv {
            for mask in 0u64..(1u64 << hs.len()) {
                let keep: Vec<usize> = hs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                // each unordered split is reached twice; keep the half where
                // (h, mask) is not larger than its complement
                let comp = ((1u64 << hs.len()) - 1) ^ mask;
                if (h, mask) > (gv - h, comp) {
                    continue;
                }
                if let Some(s) = graph.degenerate_split(v, h, &keep) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// All connected genus-labeled graphs of genus `g` with `n` legs and at most
/// `max_edges` edges that satisfy `admissible`, obtained by iterated one-edge
/// degeneration from the single vertex. Admissibility must be preserved by
/// edge contraction. Output is canonically relabeled and sorted.
pub fn enumerate_with<P>(g: u32, n: usize, max_edges: usize, admissible: P) -> Vec<StableGraph>
where
    P: Fn(&StableGraph) -> bool + Sync + Send,
{
    let start = StableGraph::trivial(g, n);
    if !admissible(&start) {
        return Vec::new();
    }
    let mut all: BTreeMap<Vec<u32>, StableGraph> = BTreeMap::new();
    all.insert(start.canonical_form(), start.canonical_graph());
    let mut level: Vec<StableGraph> = vec![start];
    for _ in 0..max_edges {
        let found = par::map(Mode::default(), &level, |gr| {
            one_step_degenerations(gr)
                .into_iter()
                .filter(|x| admissible(x))
                .map(|x| {
                    let c = x.canonical();
                    (c.encoding, x)
                })
                .collect::<Vec<_>>()
        });
        let mut next: BTreeMap<Vec<u32>, StableGraph> = BTreeMap::new();
        for (enc, gr) in found.into_iter().flatten() {
            next.entry(enc).or_insert(gr);
        }
        if next.is_empty() {
            break;
        }
        level = Vec::with_capacity(next.len());
        for (enc, gr) in next {
            let canon = gr.canonical_graph();
            level.push(canon.clone());
            all.insert(enc, canon);
        }
    }
    all.into_values().collect()
}

/// All stable graphs of type (g, n) up to isomorphism fixing the legs.
pub fn enumerate_stable(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n: n as u32 });
    }
    let max_edges = (3 * g as usize + n).saturating_sub(3);
    Ok(enumerate_with(g, n, max_edges, |x| x.is_stable()))
}

/// Circular stable graphs of genus g without legs: cycles of positive-genus
/// vertices with genera summing to g - 1.
pub fn enumerate_circular(g: u32) -> Vec<StableGraph> {
    let mut found: BTreeMap<Vec<u32>, StableGraph> = BTreeMap::new();
    if g < 2 {
        return Vec::new();
    }
    for m in 1..g as usize {
        for comp in compositions(g - 1, m) {
            let edges: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
            let gr = StableGraph::from_parts(comp, Vec::new(), edges);
            found.entry(gr.canonical_form()).or_insert_with(|| gr.canonical_graph());
        }
    }
    found.into_values().collect()
}

/// Connected genus-labeled graphs of total genus g with at most `max_edges`
/// edges. Genus-zero vertices of valence one or two are allowed.
pub fn enumerate_feynman(g: u32, max_edges: usize) -> Vec<StableGraph> {
    enumerate_with(g, 0, max_edges, |_| true)
}

/// As [`enumerate_feynman`] with `legs` labeled legs.
pub fn enumerate_feynman_with_legs(g: u32, legs: usize, max_edges: usize) -> Vec<StableGraph> {
    enumerate_with(g, legs, max_edges, |_| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_stable(0, 3).unwrap().len(), 1);
        assert_eq!(enumerate_stable(0, 4).unwrap().len(), 4);
        assert_eq!(enumerate_stable(0, 5).unwrap().len(), 26);
        assert_eq!(enumerate_stable(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stable(1, 2).unwrap().len(), 5);
        assert_eq!(enumerate_stable(2, 0).unwrap().len(), 7);
        assert!(enumerate_stable(0, 2).is_err());
    }

    #[test]
    fn circular_counts() {
        assert_eq!(enumerate_circular(1).len(), 0);
        assert_eq!(enumerate_circular(2).len(), 1);
        assert_eq!(enumerate_circular(3).len(), 2);
        assert_eq!(enumerate_circular(4).len(), 3);
        assert!(enumerate_circular(4).iter().all(|g| g.is_circular() && g.genus() == 4));
    }

    #[test]
    fn feynman_genus_two_one_edge() {
        assert_eq!(enumerate_feynman(2, 1).len(), 4);
    }
}
