//! Canonical vertex orderings of colored multigraphs with legs, by
//! individualization and refinement. Automorphisms are counted exactly from
//! the search tree.

use std::cmp::Ordering;

/// A multigraph with colored vertices, colored legs (fixed, labeled) and
/// edges whose two half-edges carry colors.
#[derive(Clone, Debug, Default)]
pub struct ColoredGraph {
    pub labels: Vec<Vec<u32>>,
    pub legs: Vec<(usize, u32)>,
    pub edges: Vec<(usize, u32, usize, u32)>,
}

#[derive(Clone, Debug)]
pub struct Canonical {
    /// `order[pos]` is the original vertex placed at position `pos`.
    pub order: Vec<usize>,
    pub encoding: Vec<u32>,
    /// Number of vertex permutations preserving the colored structure.
    pub vertex_automorphisms: u64,
    /// Automorphisms acting trivially on vertices (parallel edges, loop flips).
    pub kernel: u64,
}

impl Canonical {
    pub fn automorphisms(&self) -> u64 {
        self.vertex_automorphisms * self.kernel
    }
}

type Adj = Vec<Vec<(u32, usize, u32)>>;

fn adjacency(g: &ColoredGraph) -> Adj {
    let mut adj: Adj = vec![Vec::new(); g.labels.len()];
    for &(a, ca, b, cb) in &g.edges {
        adj[a].push((ca, b, cb));
        adj[b].push((cb, a, ca));
    }
    adj
}

fn refine(cells: &mut Vec<Vec<usize>>, adj: &Adj, nv: usize) {
    loop {
        let mut cell_of = vec![0usize; nv];
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let mut changed = false;
        let mut next = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, u32, u32)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, u32, u32)> =
                        adj[v].iter().map(|&(c, w, cw)| (cell_of[w], c, cw)).collect();
                    s.sort_unstable();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            let mut groups = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|x| x.1).collect());
                    groups += 1;
                    start = i;
                }
            }
            if groups > 1 {
                changed = true;
            }
        }
        *cells = next;
        if !changed {
            return;
        }
    }
}

fn normalized_edges(g: &ColoredGraph, pos: &[usize]) -> Vec<(u32, u32, u32, u32)> {
    let mut es: Vec<(u32, u32, u32, u32)> = g
        .edges
        .iter()
        .map(|&(a, ca, b, cb)| {
            let x = (pos[a] as u32, ca);
            let y = (pos[b] as u32, cb);
            if x <= y {
                (x.0, x.1, y.0, y.1)
            } else {
                (y.0, y.1, x.0, x.1)
            }
        })
        .collect();
    es.sort_unstable();
    es
}

fn encode(g: &ColoredGraph, order: &[usize]) -> Vec<u32> {
    let nv = order.len();
    let mut pos = vec![0usize; nv];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut enc = Vec::with_capacity(4 + nv * 4 + g.legs.len() * 2 + g.edges.len() * 4);
    enc.push(nv as u32);
    for &v in order {
        enc.push(g.labels[v].len() as u32);
        enc.extend_from_slice(&g.labels[v]);
    }
    for &(v, c) in &g.legs {
        enc.push(pos[v] as u32);
        enc.push(c);
    }
    for (a, b, c, d) in normalized_edges(g, &pos) {
        enc.extend_from_slice(&[a, b, c, d]);
    }
    enc
}

struct Search<'a> {
    g: &'a ColoredGraph,
    adj: Adj,
    best: Option<(Vec<u32>, Vec<usize>)>,
    count: u64,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Vec<Vec<usize>>) {
        let nv = self.g.labels.len();
        refine(&mut cells, &self.adj, nv);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let enc = encode(self.g, &order);
                match &self.best {
                    None => {
                        self.best = Some((enc, order));
                        self.count = 1;
                    }
                    Some((b, _)) => match enc.cmp(b) {
                        Ordering::Less => {
                            self.best = Some((enc, order));
                            self.count = 1;
                        }
                        Ordering::Equal => self.count += 1,
                        Ordering::Greater => {}
                    },
                }
            }
            Some(idx) => {
                let target = cells[idx].clone();
                for &v in &target {
                    let mut next = Vec::with_capacity(cells.len() + 1);
                    next.extend_from_slice(&cells[..idx]);
                    next.push(vec![v]);
                    next.push(target.iter().copied().filter(|&w| w != v).collect());
                    next.extend_from_slice(&cells[idx + 1..]);
                    self.run(next);
                }
            }
        }
    }
}

fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn canonicalize(g: &ColoredGraph) -> Canonical {
    let nv = g.labels.len();
    let adj = adjacency(g);
    // initial coloring: label, attached legs, sorted incident half-edge colors
    let mut sigs: Vec<(Vec<u32>, Vec<(usize, u32)>, Vec<(u32, u32, bool)>, usize)> = (0..nv)
        .map(|v| {
            let legs: Vec<(usize, u32)> = g
                .legs
                .iter()
                .enumerate()
                .filter(|(_, l)| l.0 == v)
                .map(|(i, l)| (i, l.1))
                .collect();
            let mut hs: Vec<(u32, u32, bool)> =
                adj[v].iter().map(|&(c, w, cw)| (c, cw, w == v)).collect();
            hs.sort_unstable();
            (g.labels[v].clone(), legs, hs, v)
        })
        .collect();
    sigs.sort();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..sigs.len() {
        if i > 0 && sigs[i].0 == sigs[i - 1].0 && sigs[i].1 == sigs[i - 1].1 && sigs[i].2 == sigs[i - 1].2 {
            cells.last_mut().expect("nonempty").push(sigs[i].3);
        } else {
            cells.push(vec![sigs[i].3]);
        }
    }
    let mut search = Search {
        g,
        adj,
        best: None,
        count: 0,
    };
    search.run(cells);
    let (encoding, order) = search.best.unwrap_or_default();
    let mut pos = vec![0usize; nv];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let es = normalized_edges(g, &pos);
    let mut kernel = 1u64;
    let mut i = 0;
    while i < es.len() {
        let mut j = i;
        while j < es.len() && es[j] == es[i] {
            j += 1;
        }
        let m = j - i;
        kernel *= factorial_u64(m);
        let (a, ca, b, cb) = es[i];
        if a == b && ca == cb {
            kernel *= 1u64 << m;
        }
        i = j;
    }
    Canonical {
        order,
        encoding,
        vertex_automorphisms: search.count,
        kernel,
    }
}
