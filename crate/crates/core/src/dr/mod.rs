//! Directed graphs and k-graphs given by finite edge data and square tables.
//!
//! Paths compose like morphisms: `λ = e₁e₂⋯e_n` with `s(e_i) = r(e_{i+1})`,
//! so `r(λ) = r(e₁)`. An edge stored as `src → dst` has `s = src`, `r = dst`.
//! A path of a k-graph is stored in its normal form, the unique
//! factorization whose colors are non-decreasing.

mod cylinder;
mod groupoid;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gpd::GroupoidError;

pub use cylinder::{cylinder_diff, cylinder_meet, cylinder_set, verify_diff, DiffCheck};
pub use groupoid::{
    build_dr_truncation, flam_cocycle, flam_degree, local_properness_certificate,
    purity_check_graph, purity_check_kgraph, same_degree_delta_bar_h, DrTruncation, KPurity,
    LocalProperness, PurityCertificate, SameDegreeAudit,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DrError {
    #[error("malformed graph: {0}")]
    Shape(String),
    #[error("edge {0} out of range")]
    UnknownEdge(usize),
    #[error("square missing for the composable pair ({0}, {1})")]
    MissingSquare(usize, usize),
    #[error("square table assigns two factorizations to ({0}, {1})")]
    DuplicateSquare(usize, usize),
    #[error("square {0} has mismatched colors or endpoints")]
    SquareEndpoints(usize),
    #[error("factorization is not associative on the triple ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("vertex {vertex} receives no edge of color {color}")]
    NotSourceFree { vertex: usize, color: usize },
    #[error("paths are not composable")]
    NotComposable,
    #[error("operation needs a 1-graph, got rank {0}")]
    NotOneGraph(usize),
    #[error("cocycle homomorphism check failed: {0}")]
    Cocycle(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Pact(#[from] crate::pact::PactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    #[serde(default)]
    pub color: usize,
}

/// Unvalidated graph data; `squares` lists `[e, f, f', e']` for `ef = f'e'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawKGraph {
    pub vertices: usize,
    #[serde(default = "one")]
    pub rank: usize,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub squares: Vec<[usize; 4]>,
    #[serde(default)]
    pub edge_labels: Option<Vec<String>>,
}

fn one() -> usize {
    1
}

/// A validated, row-finite, source-free k-graph (a directed graph when `k = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGraph {
    vertices: usize,
    rank: usize,
    edges: Vec<Edge>,
    squares: HashMap<(usize, usize), (usize, usize)>,
    edge_labels: Vec<String>,
}

/// A finite path in normal form; a vertex when `edges` is empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub range: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path {
            range: v,
            edges: Vec::new(),
        }
    }
}

impl KGraph {
    pub fn validate(raw: RawKGraph) -> Result<Self, DrError> {
        if raw.rank == 0 {
            return Err(DrError::Shape("rank must be positive".into()));
        }
        for e in &raw.edges {
            if e.src >= raw.vertices || e.dst >= raw.vertices {
                return Err(DrError::Shape(
                    "edge endpoint outside the vertex set".into(),
                ));
            }
            if e.color >= raw.rank {
                return Err(DrError::Shape(format!(
                    "color {} for rank {}",
                    e.color, raw.rank
                )));
            }
        }
        let edge_labels = match raw.edge_labels {
            Some(l) if l.len() == raw.edges.len() => l,
            Some(_) => return Err(DrError::Shape("edge label count".into())),
            None => (0..raw.edges.len()).map(|i| format!("e{i}")).collect(),
        };
        let edges = raw.edges;
        let mut squares = HashMap::new();
        for (i, sq) in raw.squares.iter().enumerate() {
            let [e, f, f2, e2] = *sq;
            for &x in sq {
                if x >= edges.len() {
                    return Err(DrError::UnknownEdge(x));
                }
            }
            let (ee, ff, ff2, ee2) = (edges[e], edges[f], edges[f2], edges[e2]);
            let colors_ok = ee.color == ee2.color && ff.color == ff2.color && ee.color != ff.color;
            let ends_ok =
                ee.src == ff.dst && ff2.src == ee2.dst && ee.dst == ff2.dst && ff.src == ee2.src;
            if !colors_ok || !ends_ok {
                return Err(DrError::SquareEndpoints(i));
            }
            for (from, to) in [((e, f), (f2, e2)), ((f2, e2), (e, f))] {
                match squares.insert(from, to) {
                    Some(prev) if prev != to => {
                        return Err(DrError::DuplicateSquare(from.0, from.1))
                    }
                    _ => {}
                }
            }
        }
        for (e, ee) in edges.iter().enumerate() {
            for (f, ff) in edges.iter().enumerate() {
                if ee.color != ff.color && ee.src == ff.dst && !squares.contains_key(&(e, f)) {
                    return Err(DrError::MissingSquare(e, f));
                }
            }
        }
        for v in 0..raw.vertices {
            for color in 0..raw.rank {
                if !edges.iter().any(|e| e.dst == v && e.color == color) {
                    return Err(DrError::NotSourceFree { vertex: v, color });
                }
            }
        }
        let g = KGraph {
            vertices: raw.vertices,
            rank: raw.rank,
            edges,
            squares,
            edge_labels,
        };
        if g.rank >= 3 {
            g.check_associativity()?;
        }
        Ok(g)
    }

    /// Every composable triple of three distinct colors sorts to the same
    /// normal form whichever adjacent swap is applied first.
    fn check_associativity(&self) -> Result<(), DrError> {
        let n = self.edges.len();
        for e in 0..n {
            for f in 0..n {
                if self.edges[e].src != self.edges[f].dst {
                    continue;
                }
                for g in 0..n {
                    if self.edges[f].src != self.edges[g].dst {
                        continue;
                    }
                    let cs = [
                        self.edges[e].color,
                        self.edges[f].color,
                        self.edges[g].color,
                    ];
                    if cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2] {
                        continue;
                    }
                    let left = self.sort_by(vec![e, f, g], true);
                    let right = self.sort_by(vec![e, f, g], false);
                    if left != right {
                        return Err(DrError::NonAssociative(e, f, g));
                    }
                }
            }
        }
        Ok(())
    }

    fn swap(&self, a: usize, b: usize) -> (usize, usize) {
        *self.squares.get(&(a, b)).expect("validated squares")
    }

    /// Bubble sort by color, resolving the leftmost or rightmost inversion first.
    fn sort_by(&self, mut w: Vec<usize>, leftmost: bool) -> Vec<usize> {
        loop {
            let inversions = (0..w.len().saturating_sub(1))
                .filter(|&i| self.edges[w[i]].color > self.edges[w[i + 1]].color);
            let next = if leftmost {
                inversions.min()
            } else {
                inversions.max()
            };
            let Some(i) = next else { return w };
            let (x, y) = self.swap(w[i], w[i + 1]);
            w[i] = x;
            w[i + 1] = y;
        }
    }

    /// Normal form of a composable edge sequence.
    pub fn normalize(&self, w: Vec<usize>) -> Vec<usize> {
        self.sort_by(w, true)
    }

    /// Rewrites a composable edge sequence into the representative whose
    /// colors read `target` (same multiset of colors).
    pub fn reorder(&self, mut w: Vec<usize>, target: &[usize]) -> Vec<usize> {
        debug_assert_eq!(w.len(), target.len());
        for p in 0..w.len() {
            let q = (p..w.len())
                .find(|&q| self.edges[w[q]].color == target[p])
                .expect("same color multiset");
            for i in (p..q).rev() {
                let (x, y) = self.swap(w[i], w[i + 1]);
                w[i] = x;
                w[i + 1] = y;
            }
        }
        w
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn squares(&self) -> &HashMap<(usize, usize), (usize, usize)> {
        &self.squares
    }

    pub fn to_raw(&self) -> RawKGraph {
        let mut squares: Vec<[usize; 4]> = self
            .squares
            .iter()
            .filter(|(&(e, f), _)| self.edges[e].color > self.edges[f].color)
            .map(|(&(e, f), &(f2, e2))| [e, f, f2, e2])
            .collect();
        squares.sort_unstable();
        RawKGraph {
            vertices: self.vertices,
            rank: self.rank,
            edges: self.edges.clone(),
            squares,
            edge_labels: Some(self.edge_labels.clone()),
        }
    }

    /// `A(v, w)` = number of color-`c` edges `w → v`.
    pub fn adjacency(&self, color: usize) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0; self.vertices]; self.vertices];
        for e in self.edges.iter().filter(|e| e.color == color) {
            a[e.dst][e.src] += 1;
        }
        a
    }

    pub fn source(&self, p: &Path) -> usize {
        p.edges.last().map_or(p.range, |&e| self.edges[e].src)
    }

    pub fn degree(&self, p: &Path) -> Vec<usize> {
        let mut d = vec![0; self.rank];
        for &e in &p.edges {
            d[self.edges[e].color] += 1;
        }
        d
    }

    /// Checks composability and normal form.
    pub fn is_path(&self, p: &Path) -> bool {
        if p.range >= self.vertices || p.edges.iter().any(|&e| e >= self.edges.len()) {
            return false;
        }
        let mut v = p.range;
        for &e in &p.edges {
            if self.edges[e].dst != v {
                return false;
            }
            v = self.edges[e].src;
        }
        p.edges
            .windows(2)
            .all(|w| self.edges[w[0]].color <= self.edges[w[1]].color)
    }

    /// `λμ` when `s(λ) = r(μ)`.
    pub fn concat(&self, a: &Path, b: &Path) -> Option<Path> {
        if self.source(a) != b.range {
            return None;
        }
        let mut w = a.edges.clone();
        w.extend_from_slice(&b.edges);
        Some(Path {
            range: a.range,
            edges: self.normalize(w),
        })
    }

    /// The unique `(λ₁, λ₂)` with `λ = λ₁λ₂` and `d(λ₁) = n`.
    pub fn factor(&self, p: &Path, n: &[usize]) -> Option<(Path, Path)> {
        let d = self.degree(p);
        if n.iter().zip(&d).any(|(a, b)| a > b) {
            return None;
        }
        let mut target = Vec::with_capacity(p.edges.len());
        for (c, &k) in n.iter().enumerate() {
            target.extend(std::iter::repeat(c).take(k));
        }
        for (c, (&k, &m)) in n.iter().zip(&d).enumerate() {
            target.extend(std::iter::repeat(c).take(m - k));
        }
        let w = self.reorder(p.edges.clone(), &target);
        let cut = n.iter().sum::<usize>();
        let first = Path {
            range: p.range,
            edges: self.normalize(w[..cut].to_vec()),
        };
        let second = Path {
            range: self.source(&first),
            edges: self.normalize(w[cut..].to_vec()),
        };
        Some((first, second))
    }

    /// `λ(0, n)`.
    pub fn prefix(&self, p: &Path, n: &[usize]) -> Option<Path> {
        self.factor(p, n).map(|x| x.0)
    }

    /// Paths of degree `n` with range `v`, in lexicographic edge order.
    pub fn paths_from(&self, v: usize, n: &[usize]) -> Vec<Path> {
        let mut colors = Vec::new();
        for (c, &k) in n.iter().enumerate() {
            colors.extend(std::iter::repeat(c).take(k));
        }
        let mut out = Vec::new();
        let mut stack = vec![(v, Vec::new())];
        while let Some((at, w)) = stack.pop() {
            if w.len() == colors.len() {
                out.push(Path { range: v, edges: w });
                continue;
            }
            let c = colors[w.len()];
            for (e, edge) in self.edges.iter().enumerate().rev() {
                if edge.dst == at && edge.color == c {
                    let mut w2 = w.clone();
                    w2.push(e);
                    stack.push((edge.src, w2));
                }
            }
        }
        out
    }

    pub fn paths_of_degree(&self, n: &[usize]) -> Vec<Path> {
        (0..self.vertices)
            .flat_map(|v| self.paths_from(v, n))
            .collect()
    }

    /// All paths with `d(λ) ≤ (L, …, L)`, ordered by total length, degree, range, edges.
    pub fn paths_up_to(&self, l: usize) -> Vec<Path> {
        let mut degrees = vec![vec![]];
        for _ in 0..self.rank {
            degrees = degrees
                .into_iter()
                .flat_map(|d: Vec<usize>| {
                    (0..=l).map(move |i| {
                        let mut d = d.clone();
                        d.push(i);
                        d
                    })
                })
                .collect();
        }
        degrees.sort_by_key(|d| (d.iter().sum::<usize>(), d.clone()));
        degrees
            .iter()
            .flat_map(|d| self.paths_of_degree(d))
            .collect()
    }

    /// `{λα : d(α) = n}`.
    pub fn extensions(&self, p: &Path, n: &[usize]) -> Vec<Path> {
        self.paths_from(self.source(p), n)
            .iter()
            .map(|a| self.concat(p, a).expect("composable"))
            .collect()
    }

    pub fn format_path(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            format!("v{}", p.range)
        } else {
            p.edges
                .iter()
                .map(|&e| self.edge_labels[e].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Parses space-separated edge labels, or `v<i>` for a vertex.
    pub fn parse_path(&self, s: &str) -> Result<Path, DrError> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix('v').and_then(|x| x.parse::<usize>().ok()) {
            if v < self.vertices && !self.edge_labels.iter().any(|l| l == s) {
                return Ok(Path::vertex(v));
            }
        }
        let edges: Vec<usize> = s
            .split_whitespace()
            .map(|t| {
                self.edge_labels
                    .iter()
                    .position(|l| l == t)
                    .ok_or_else(|| DrError::Shape(format!("unknown edge label {t}")))
            })
            .collect::<Result<_, _>>()?;
        let Some(&first) = edges.first() else {
            return Err(DrError::Shape("empty path".into()));
        };
        let range = self.edges[first].dst;
        let mut v = range;
        for &e in &edges {
            if self.edges[e].dst != v {
                return Err(DrError::NotComposable);
            }
            v = self.edges[e].src;
        }
        Ok(Path {
            range,
            edges: self.normalize(edges),
        })
    }

    /// One vertex with `n` loops `e1, …, en`.
    pub fn cuntz(n: usize) -> Self {
        Self::validate(RawKGraph {
            vertices: 1,
            rank: 1,
            edges: vec![
                Edge {
                    src: 0,
                    dst: 0,
                    color: 0
                };
                n
            ],
            squares: vec![],
            edge_labels: Some((1..=n).map(|i| format!("e{i}")).collect()),
        })
        .expect("valid")
    }

    /// One vertex with loops `0` and `1`.
    pub fn binary() -> Self {
        Self::validate(RawKGraph {
            vertices: 1,
            rank: 1,
            edges: vec![
                Edge {
                    src: 0,
                    dst: 0,
                    color: 0
                };
                2
            ],
            squares: vec![],
            edge_labels: Some(vec!["0".into(), "1".into()]),
        })
        .expect("valid")
    }

    /// One vertex with a single loop `e`.
    pub fn single_loop() -> Self {
        Self::validate(RawKGraph {
            vertices: 1,
            rank: 1,
            edges: vec![Edge {
                src: 0,
                dst: 0,
                color: 0,
            }],
            squares: vec![],
            edge_labels: Some(vec!["e".into()]),
        })
        .expect("valid")
    }

    /// The 2-graph with one vertex, a blue loop `f`, a red loop `g` and `fg = gf`.
    pub fn fix6() -> Self {
        Self::validate(RawKGraph {
            vertices: 1,
            rank: 2,
            edges: vec![
                Edge {
                    src: 0,
                    dst: 0,
                    color: 0,
                },
                Edge {
                    src: 0,
                    dst: 0,
                    color: 1,
                },
            ],
            squares: vec![[1, 0, 0, 1]],
            edge_labels: Some(vec!["f".into(), "g".into()]),
        })
        .expect("valid")
    }
}
