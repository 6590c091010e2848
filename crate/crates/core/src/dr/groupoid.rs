//! Truncated Deaconu–Renault groupoids and the cocycle into `F(Λ)`.
//!
//! The truncation at depth `L` has one unit per path `λ` with
//! `d(λ) ≤ (L, …, L)` (standing for `Z(λ)`) and one arrow per pair `(λ, μ)`
//! with `s(λ) = s(μ)` (standing for the bisection `Z(λ, μ)`), composed by
//! `(λ, μ)(μ, ρ) = (λ, ρ)`. Products of bisections whose middle paths are
//! merely comparable are available through [`DrTruncation::bisection_product`].

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{cylinder_meet, DrError, KGraph, Path};
use crate::gpd::{check_subgroupoid, contains_diagonal, FiniteGroupoid, Groupoid, ProductView};
use crate::grp::{Letter, Word};
use crate::pact::delta_audit;

#[derive(Clone, Debug)]
pub struct DrTruncation {
    pub graph: KGraph,
    pub depth: usize,
    /// Units: paths of degree at most `(L, …, L)`.
    pub paths: Vec<Path>,
    pub index: HashMap<Path, usize>,
    pub groupoid: FiniteGroupoid,
    /// Arrow → `(λ, μ)` as unit indices.
    pub arrows: Vec<(usize, usize)>,
    pub arrow_index: HashMap<(usize, usize), usize>,
}

pub fn build_dr_truncation(graph: &KGraph, depth: usize) -> Result<DrTruncation, DrError> {
    let paths = graph.paths_up_to(depth);
    let index: HashMap<Path, usize> = paths
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let sources: Vec<usize> = paths.iter().map(|p| graph.source(p)).collect();
    let mut arrows = Vec::new();
    for i in 0..paths.len() {
        for j in 0..paths.len() {
            if sources[i] == sources[j] {
                arrows.push((i, j));
            }
        }
    }
    let arrow_index: HashMap<(usize, usize), usize> = arrows
        .iter()
        .copied()
        .enumerate()
        .map(|(a, p)| (p, a))
        .collect();
    let units = (0..paths.len()).map(|i| arrow_index[&(i, i)]).collect();
    let s = arrows.iter().map(|a| a.1).collect();
    let r = arrows.iter().map(|a| a.0).collect();
    let inv = arrows.iter().map(|&(i, j)| arrow_index[&(j, i)]).collect();
    let comp = |a: usize, b: usize| arrow_index[&(arrows[a].0, arrows[b].1)];
    let groupoid = FiniteGroupoid::build(units, s, r, inv, comp)?;
    let labels = arrows
        .iter()
        .map(|&(i, j)| {
            format!(
                "Z({}, {})",
                graph.format_path(&paths[i]),
                graph.format_path(&paths[j])
            )
        })
        .collect();
    Ok(DrTruncation {
        graph: graph.clone(),
        depth,
        groupoid: groupoid.with_labels(labels)?,
        paths,
        index,
        arrows,
        arrow_index,
    })
}

impl DrTruncation {
    /// `d(λ) − d(μ)`.
    pub fn degree(&self, arrow: usize) -> Vec<i64> {
        let (i, j) = self.arrows[arrow];
        let (a, b) = (
            self.graph.degree(&self.paths[i]),
            self.graph.degree(&self.paths[j]),
        );
        a.iter()
            .zip(&b)
            .map(|(x, y)| *x as i64 - *y as i64)
            .collect()
    }

    pub fn pair(&self, arrow: usize) -> (&Path, &Path) {
        let (i, j) = self.arrows[arrow];
        (&self.paths[i], &self.paths[j])
    }

    /// `Z(λ, μ)·Z(ν, ρ) = ⨆ Z(λα, ρβ)` over minimal common extensions
    /// `μα = νβ`; `None` when a factor leaves the depth cap.
    pub fn bisection_product(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (lambda, mu) = self.pair(a);
        let (nu, rho) = self.pair(b);
        let g = &self.graph;
        let mut out = Vec::new();
        for m in cylinder_meet(g, mu, nu) {
            let dm = g.degree(mu);
            let dn = g.degree(nu);
            let (_, alpha) = g.factor(&m, &dm)?;
            let (_, beta) = g.factor(&m, &dn)?;
            let l = g.concat(lambda, &alpha)?;
            let r = g.concat(rho, &beta)?;
            out.push(
                self.arrow_index
                    .get(&(*self.index.get(&l)?, *self.index.get(&r)?))
                    .copied()?,
            );
        }
        out.sort_unstable();
        Some(out)
    }
}

/// `[λ][μ]⁻¹` as a freely reduced word in the free group on the edges.
pub fn flam_cocycle(t: &DrTruncation, arrow: usize) -> Word {
    let (l, m) = t.pair(arrow);
    let mut letters: Vec<Letter> = l.edges.iter().map(|&e| Letter::new(e, false)).collect();
    letters.extend(m.edges.iter().rev().map(|&e| Letter::new(e, true)));
    Word::from_letters(letters).free_reduce()
}

/// `d̃`: signed count of edge letters per color.
pub fn flam_degree(graph: &KGraph, w: &Word) -> Vec<i64> {
    let mut d = vec![0; graph.rank()];
    for l in w.letters() {
        d[graph.edges()[l.gen].color] += l.sign();
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityCertificate {
    pub depth: usize,
    pub arrows: usize,
    pub composable_pairs: usize,
    pub facts: Vec<String>,
}

/// Homomorphism and degree checks of the cocycle over the whole table.
fn cocycle_table_check(t: &DrTruncation) -> Result<(Vec<Word>, usize), DrError> {
    let g = &t.groupoid;
    let values: Vec<Word> = (0..g.arrow_count()).map(|a| flam_cocycle(t, a)).collect();
    for (a, w) in values.iter().enumerate() {
        if flam_degree(&t.graph, w) != t.degree(a) {
            return Err(DrError::Cocycle(format!(
                "d̃∘c differs from the degree at {}",
                g.label(a)
            )));
        }
    }
    let mut pairs = 0;
    for a in 0..g.arrow_count() {
        for b in g.range_fiber(g.source(a)) {
            let ab = g.compose(a, b).expect("composable");
            if values[a].concat(&values[b]).free_reduce() != values[ab] {
                return Err(DrError::Cocycle(format!(
                    "c({}·{}) ≠ c({})c({})",
                    g.label(a),
                    g.label(b),
                    g.label(a),
                    g.label(b)
                )));
            }
            pairs += 1;
        }
    }
    Ok((values, pairs))
}

/// Exact purity of the cocycle on a 1-graph truncation: `c(λ, μ) = 1` iff `λ = μ`.
pub fn purity_check_graph(t: &DrTruncation) -> Result<PurityCertificate, DrError> {
    if t.graph.rank() != 1 {
        return Err(DrError::NotOneGraph(t.graph.rank()));
    }
    let (values, pairs) = cocycle_table_check(t)?;
    for (a, w) in values.iter().enumerate() {
        let (i, j) = t.arrows[a];
        if w.is_empty() != (i == j) {
            return Err(DrError::Cocycle(format!(
                "reduction disagrees with path equality at {}",
                t.groupoid.label(a)
            )));
        }
    }
    Ok(PurityCertificate {
        depth: t.depth,
        arrows: values.len(),
        composable_pairs: pairs,
        facts: vec![
            "arrows of different degree have values of different signed length".into(),
            "positive edge words are equal in a free group only when identical".into(),
        ],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum KPurity {
    PureUpTo {
        depth: usize,
        arrows: usize,
        by_degree: usize,
        by_abelianization: usize,
    },
    /// A non-unit arrow whose value is shown trivial by square rewriting.
    Witness {
        arrow: String,
        rewrites: usize,
    },
    Inconclusive {
        arrow: String,
        reason: String,
    },
}

/// Rank over `Q` by fraction-free elimination.
fn rational_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let (a, b) = (rows[rank][c], rows[i][c]);
                for k in 0..cols {
                    rows[i][k] = rows[i][k] * a - rows[rank][k] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Decider<'a> {
    graph: &'a KGraph,
    relations: Vec<Vec<i128>>,
    relation_rank: usize,
}

impl<'a> Decider<'a> {
    fn new(graph: &'a KGraph) -> Self {
        let n = graph.edges().len();
        let relations: Vec<Vec<i128>> = graph
            .squares()
            .iter()
            .map(|(&(e, f), &(f2, e2))| {
                let mut v = vec![0i128; n];
                v[e] += 1;
                v[f] += 1;
                v[f2] -= 1;
                v[e2] -= 1;
                v
            })
            .collect();
        let relation_rank = rational_rank(relations.clone());
        Decider {
            graph,
            relations,
            relation_rank,
        }
    }

    /// The image of `w` in the abelianization of `F(Λ)` is nonzero.
    fn abelian_nonzero(&self, w: &Word) -> bool {
        let mut v = vec![0i128; self.graph.edges().len()];
        for l in w.letters() {
            v[l.gen] += l.sign() as i128;
        }
        if v.iter().all(|&x| x == 0) {
            return false;
        }
        let mut rows = self.relations.clone();
        rows.push(v);
        rational_rank(rows) > self.relation_rank
    }

    /// Breadth-first square rewriting and free reduction looking for the
    /// empty word; `Some(nodes)` when found within `budget` nodes.
    fn rewrite_to_identity(&self, w: &Word, budget: usize) -> Option<usize> {
        let sq = self.graph.squares();
        let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
        let mut queue = VecDeque::from([w.letters().to_vec()]);
        let mut nodes = 0;
        while let Some(cur) = queue.pop_front() {
            if cur.is_empty() {
                return Some(nodes);
            }
            if !seen.insert(cur.clone()) {
                continue;
            }
            nodes += 1;
            if nodes > budget {
                return None;
            }
            for i in 0..cur.len().saturating_sub(1) {
                let (a, b) = (cur[i], cur[i + 1]);
                let next = match (a.inverse, b.inverse) {
                    (false, false) => sq
                        .get(&(a.gen, b.gen))
                        .map(|&(x, y)| (Letter::new(x, false), Letter::new(y, false))),
                    // a⁻¹b⁻¹ = (ba)⁻¹
                    (true, true) => sq
                        .get(&(b.gen, a.gen))
                        .map(|&(x, y)| (Letter::new(y, true), Letter::new(x, true))),
                    _ => None,
                };
                if let Some((x, y)) = next {
                    let mut v = cur.clone();
                    v[i] = x;
                    v[i + 1] = y;
                    let v = Word::from_letters(v).free_reduce().letters().to_vec();
                    if !seen.contains(&v) {
                        queue.push_back(v);
                    }
                }
            }
        }
        None
    }

    /// Sound comparison of `[α][β]⁻¹` and `[λ][μ]⁻¹` in `F(Λ)`.
    fn same_class(&self, a: (&Path, &Path), b: (&Path, &Path)) -> Option<bool> {
        let g = self.graph;
        let deg = |p: &Path| g.degree(p);
        let da: Vec<i64> = deg(a.0)
            .iter()
            .zip(deg(a.1))
            .map(|(x, y)| *x as i64 - y as i64)
            .collect();
        let db: Vec<i64> = deg(b.0)
            .iter()
            .zip(deg(b.1))
            .map(|(x, y)| *x as i64 - y as i64)
            .collect();
        if da != db {
            return Some(false);
        }
        // αp = λq and βp = μq give [α][β]⁻¹ = [αp][βp]⁻¹ = [λq][μq]⁻¹ = [λ][μ]⁻¹
        if g.source(a.0) == g.source(a.1) && g.source(b.0) == g.source(b.1) {
            for m in cylinder_meet(g, a.0, b.0) {
                let (_, p) = g.factor(&m, &deg(a.0))?;
                let (_, q) = g.factor(&m, &deg(b.0))?;
                if g.concat(a.1, &p).is_some() && g.concat(a.1, &p) == g.concat(b.1, &q) {
                    return Some(true);
                }
            }
        }
        let word = |x: (&Path, &Path)| {
            let mut l: Vec<Letter> = x.0.edges.iter().map(|&e| Letter::new(e, false)).collect();
            l.extend(x.1.edges.iter().rev().map(|&e| Letter::new(e, true)));
            Word::from_letters(l)
        };
        let diff = word(a).concat(&word(b).inverse()).free_reduce();
        if diff.is_empty() {
            return Some(true);
        }
        if self.abelian_nonzero(&diff) {
            return Some(false);
        }
        None
    }
}

/// Three-valued purity for k-graphs: degree, abelianization of `F(Λ)` and
/// bounded square rewriting. 1-graphs go through the exact check.
pub fn purity_check_kgraph(t: &DrTruncation, budget: usize) -> Result<KPurity, DrError> {
    if t.graph.rank() == 1 {
        let cert = purity_check_graph(t)?;
        return Ok(KPurity::PureUpTo {
            depth: t.depth,
            arrows: cert.arrows,
            by_degree: 0,
            by_abelianization: 0,
        });
    }
    let (values, _) = cocycle_table_check(t)?;
    let decider = Decider::new(&t.graph);
    let (mut by_degree, mut by_abelianization) = (0, 0);
    for (a, w) in values.iter().enumerate() {
        let (i, j) = t.arrows[a];
        if i == j {
            continue;
        }
        if t.degree(a).iter().any(|&d| d != 0) {
            by_degree += 1;
            continue;
        }
        if decider.abelian_nonzero(w) {
            by_abelianization += 1;
            continue;
        }
        let label = t.groupoid.label(a);
        if let Some(rewrites) = decider.rewrite_to_identity(w, budget) {
            return Ok(KPurity::Witness {
                arrow: label,
                rewrites,
            });
        }
        return Ok(KPurity::Inconclusive {
            arrow: label,
            reason: format!(
                "value undecided by degree, abelianization or {budget} rewriting nodes"
            ),
        });
    }
    Ok(KPurity::PureUpTo {
        depth: t.depth,
        arrows: values.len(),
        by_degree,
        by_abelianization,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalProperness {
    pub depth: usize,
    pub bisections: usize,
    /// Sample arrows `(αt, d(α)−d(β), βt)` with `d(t) = (L, …, L)`.
    pub sample_arrows: usize,
    /// Total size of the preimages compared.
    pub compared: usize,
    pub undecided: usize,
    pub verified: bool,
}

/// Checks `f⁻¹(Z(λ) × {[λ][μ]⁻¹} × Z(μ)) = Z(λ, μ)` for every bisection of
/// the truncation, over sample arrows `(αt, d(α)−d(β), βt)` with
/// `d(α), d(β) ≤ (L, …, L)` and `d(t) = (L, …, L)`, where
/// `f(x, n, y) = (x, c(x, n, y), y)`.
pub fn local_properness_certificate(t: &DrTruncation) -> Result<LocalProperness, DrError> {
    let g = &t.graph;
    let full = vec![t.depth; g.rank()];
    let tails: Vec<Vec<Path>> = (0..g.vertex_count())
        .map(|v| g.paths_from(v, &full))
        .collect();
    // sample arrow: (truncation arrow (α, β), x, y)
    let mut samples: Vec<(usize, Path, Path)> = Vec::new();
    for (a, &(i, j)) in t.arrows.iter().enumerate() {
        for tail in &tails[g.source(&t.paths[i])] {
            let x = g.concat(&t.paths[i], tail).ok_or(DrError::NotComposable)?;
            let y = g.concat(&t.paths[j], tail).ok_or(DrError::NotComposable)?;
            samples.push((a, x, y));
        }
    }
    // by_x[λ] = samples with x ∈ Z(λ), ascending
    let mut by_x = vec![Vec::new(); t.paths.len()];
    let mut by_y = vec![Vec::new(); t.paths.len()];
    let degrees: Vec<Vec<usize>> = t.paths.iter().map(|p| g.degree(p)).collect();
    let distinct: BTreeSet<Vec<usize>> = degrees.iter().cloned().collect();
    for (s, (_, x, y)) in samples.iter().enumerate() {
        for d in &distinct {
            if let Some(p) = g.prefix(x, d).and_then(|p| t.index.get(&p)) {
                by_x[*p].push(s);
            }
            if let Some(p) = g.prefix(y, d).and_then(|p| t.index.get(&p)) {
                by_y[*p].push(s);
            }
        }
    }
    let exact = g.rank() == 1;
    let values: Vec<Word> = if exact {
        (0..t.arrows.len()).map(|a| flam_cocycle(t, a)).collect()
    } else {
        Vec::new()
    };
    let decider = Decider::new(g);
    let mut cache: HashMap<(usize, usize), Option<bool>> = HashMap::new();
    let (mut compared, mut undecided) = (0, 0);
    for (b, &(li, mi)) in t.arrows.iter().enumerate() {
        let n: Vec<i64> = t.degree(b);
        let (xs, ys) = (&by_x[li], &by_y[mi]);
        let (mut p, mut q) = (0, 0);
        while p < xs.len() && q < ys.len() {
            if xs[p] < ys[q] {
                p += 1;
                continue;
            }
            if xs[p] > ys[q] {
                q += 1;
                continue;
            }
            let s = xs[p];
            p += 1;
            q += 1;
            let (a, x, y) = &samples[s];
            let in_z = t.degree(*a) == n && {
                let (_, zx) = g.factor(x, &degrees[li]).expect("prefix");
                let (_, zy) = g.factor(y, &degrees[mi]).expect("prefix");
                zx == zy
            };
            let in_pre = if exact {
                Some(values[*a] == values[b])
            } else {
                *cache
                    .entry((*a, b))
                    .or_insert_with(|| decider.same_class(t.pair(*a), t.pair(b)))
            };
            compared += 1;
            match in_pre {
                None => undecided += 1,
                Some(v) if v != in_z => {
                    return Err(DrError::Cocycle(format!(
                        "preimage and {} differ at sample ({}, {})",
                        t.groupoid.label(b),
                        g.format_path(x),
                        g.format_path(y)
                    )))
                }
                Some(_) => {}
            }
        }
    }
    Ok(LocalProperness {
        depth: t.depth,
        bisections: t.arrows.len(),
        sample_arrows: samples.len(),
        compared,
        undecided,
        verified: undecided == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SameDegreeAudit {
    pub depth: usize,
    /// Product-view ids of `H`, ascending.
    pub h: Vec<usize>,
    pub subgroupoid: bool,
    pub contains_diagonal: bool,
    /// Degrees occurring in `C`.
    pub degree_window: Vec<Vec<i64>>,
    pub left_size: usize,
    pub right_size: usize,
    pub left_fib: usize,
    pub right_fib: usize,
    /// `Σ_{n ∈ window} |G(K)_n|·|C_n|`.
    pub window_bound: usize,
}

/// `H = {(a, b) : d(a) = d(b)}` with the finiteness audit over `K` and `C`.
pub fn same_degree_delta_bar_h(
    t: &DrTruncation,
    k: &[usize],
    c: &[usize],
) -> Result<SameDegreeAudit, DrError> {
    let g = &t.groupoid;
    let view = ProductView::new(g, g);
    let degrees: Vec<Vec<i64>> = (0..g.arrow_count()).map(|a| t.degree(a)).collect();
    let mut h = Vec::new();
    for a in 0..g.arrow_count() {
        for b in 0..g.arrow_count() {
            if degrees[a] == degrees[b] {
                h.push(view.pair(a, b));
            }
        }
    }
    let subgroupoid = check_subgroupoid(&view, &h).is_ok();
    let diagonal = contains_diagonal(g, &h).is_ok();
    let audit = delta_audit(g, &h, k, c, None)?;
    let window: BTreeSet<Vec<i64>> = c.iter().map(|&a| degrees[a].clone()).collect();
    let mut in_k = vec![false; g.unit_count()];
    for &u in k {
        in_k[u] = true;
    }
    let window_bound = window
        .iter()
        .map(|n| {
            let gk = (0..g.arrow_count())
                .filter(|&a| in_k[g.source(a)] && in_k[g.range(a)] && &degrees[a] == n)
                .count();
            gk * c.iter().filter(|&&a| &degrees[a] == n).count()
        })
        .sum();
    Ok(SameDegreeAudit {
        depth: t.depth,
        h,
        subgroupoid,
        contains_diagonal: diagonal,
        degree_window: window.into_iter().collect(),
        left_size: audit.left_size,
        right_size: audit.right_size,
        left_fib: audit.left_fib,
        right_fib: audit.right_fib,
        window_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{Edge, RawKGraph};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn truncation_sizes() {
        assert_eq!(
            build_dr_truncation(&KGraph::single_loop(), 2)
                .unwrap()
                .arrows
                .len(),
            9
        );
        assert_eq!(
            build_dr_truncation(&KGraph::cuntz(2), 1)
                .unwrap()
                .arrows
                .len(),
            9
        );
        let zero = build_dr_truncation(&KGraph::cuntz(2), 0).unwrap();
        assert_eq!(zero.arrows.len(), 1);
        assert!(zero.groupoid.is_unit(0));
    }

    #[test]
    fn cocycle_values() {
        let o3 = KGraph::cuntz(3);
        let t = build_dr_truncation(&o3, 2).unwrap();
        let l = t.index[&o3.parse_path("e1 e2").unwrap()];
        let m = t.index[&o3.parse_path("e3").unwrap()];
        let w = flam_cocycle(&t, t.arrow_index[&(l, m)]);
        assert_eq!(w, Word::from_powers(&[(0, 1), (1, 1), (2, -1)]));
        assert!(flam_cocycle(&t, t.arrow_index[&(l, l)]).is_empty());
        let f6 = KGraph::fix6();
        let t6 = build_dr_truncation(&f6, 1).unwrap();
        let f = t6.index[&f6.parse_path("f").unwrap()];
        let g = t6.index[&f6.parse_path("g").unwrap()];
        let a = t6.arrow_index[&(f, g)];
        assert_eq!(flam_cocycle(&t6, a), Word::from_powers(&[(0, 1), (1, -1)]));
        assert_eq!(flam_degree(&f6, &flam_cocycle(&t6, a)), vec![1, -1]);
    }

    #[test]
    fn bisection_products() {
        let b = KGraph::binary();
        let t = build_dr_truncation(&b, 2).unwrap();
        let id = |s: &str| t.index[&b.parse_path(s).unwrap()];
        // Z(1, 0)·Z(0 1, v) = Z(1 1, v)
        let x = t.arrow_index[&(id("1"), id("0"))];
        let y = t.arrow_index[&(id("0 1"), id("v0"))];
        assert_eq!(
            t.bisection_product(x, y),
            Some(vec![t.arrow_index[&(id("1 1"), id("v0"))]])
        );
        // Z(v, 1)·Z(0, v) = ∅
        let z = t.arrow_index[&(id("v0"), id("1"))];
        let w = t.arrow_index[&(id("0"), id("v0"))];
        assert_eq!(t.bisection_product(z, w), Some(vec![]));
        // Z(1 1, v)·Z(v, 0 0) = Z(1 1, 0 0)
        let u = t.arrow_index[&(id("1 1"), id("v0"))];
        let v = t.arrow_index[&(id("v0"), id("0 0"))];
        assert_eq!(
            t.bisection_product(u, v),
            Some(vec![t.arrow_index[&(id("1 1"), id("0 0"))]])
        );
        let p = t.arrow_index[&(id("v0"), id("v0"))];
        let q = t.arrow_index[&(id("0 0"), id("0"))];
        let r = t.arrow_index[&(id("1 1"), id("1 1"))];
        assert_eq!(t.bisection_product(q, r), Some(vec![]));
        assert!(t.bisection_product(p, q).is_some());
    }

    #[test]
    fn one_graph_purity_and_properness() {
        for (g, l) in [
            (KGraph::cuntz(3), 3),
            (KGraph::single_loop(), 3),
            (KGraph::binary(), 4),
            (KGraph::cuntz(2), 2),
        ] {
            let t = build_dr_truncation(&g, l).unwrap();
            assert!(purity_check_graph(&t).is_ok());
            if l <= 3 {
                let lp = local_properness_certificate(&t).unwrap();
                assert!(lp.verified && lp.undecided == 0);
            }
        }
    }

    #[test]
    fn fix6_purity_and_properness() {
        let t = build_dr_truncation(&KGraph::fix6(), 3).unwrap();
        match purity_check_kgraph(&t, 100).unwrap() {
            KPurity::PureUpTo {
                by_abelianization, ..
            } => assert_eq!(by_abelianization, 0),
            other => panic!("{other:?}"),
        }
        assert!(local_properness_certificate(&t).unwrap().verified);
        assert!(matches!(
            purity_check_graph(&t),
            Err(DrError::NotOneGraph(2))
        ));
    }

    #[test]
    fn undecidable_squares_are_inconclusive() {
        // f1 g1 = g1 f2, f2 g1 = g1 f1, f_i g2 = g2 f_i: [f1][f2]⁻¹ dies in
        // the abelianization but is nontrivial in F(Λ)
        let raw = RawKGraph {
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
                    color: 0,
                },
                Edge {
                    src: 0,
                    dst: 0,
                    color: 1,
                },
                Edge {
                    src: 0,
                    dst: 0,
                    color: 1,
                },
            ],
            squares: vec![[0, 2, 2, 1], [1, 2, 2, 0], [0, 3, 3, 0], [1, 3, 3, 1]],
            edge_labels: None,
        };
        let g = KGraph::validate(raw).unwrap();
        let t = build_dr_truncation(&g, 1).unwrap();
        assert!(matches!(
            purity_check_kgraph(&t, 0).unwrap(),
            KPurity::Inconclusive { .. }
        ));
    }

    #[test]
    fn same_degree_h() {
        let t = build_dr_truncation(&KGraph::single_loop(), 2).unwrap();
        let all_units: Vec<usize> = (0..3).collect();
        let a = same_degree_delta_bar_h(&t, &all_units, &[]).unwrap();
        // degrees of the 9 bisections: 0 three times, ±1 twice, ±2 once
        assert_eq!(a.h.len(), 9 + 4 + 4 + 1 + 1);
        assert!(a.subgroupoid && a.contains_diagonal);
        assert_eq!((a.left_size, a.right_size), (0, 0));
        let o2 = build_dr_truncation(&KGraph::cuntz(2), 1).unwrap();
        let all: Vec<usize> = (0..9).collect();
        let b = same_degree_delta_bar_h(&o2, &[0, 1, 2], &all).unwrap();
        assert!(b.subgroupoid && b.contains_diagonal);
        assert!(b.left_size <= b.window_bound);
    }

    proptest! {
        #[test]
        fn cocycle_is_multiplicative_on_products(i in 0usize..961, j in 0usize..961) {
            let b = KGraph::binary();
            let t = build_dr_truncation(&b, 2).unwrap();
            let n = t.arrows.len();
            let (x, y) = (i % n, j % n);
            if let Some(prods) = t.bisection_product(x, y) {
                let v = flam_cocycle(&t, x).concat(&flam_cocycle(&t, y)).free_reduce();
                for p in prods {
                    prop_assert_eq!(&flam_cocycle(&t, p), &v);
                }
            }
        }

        #[test]
        fn unit_value_only_on_units(n in 1usize..4, l in 0usize..3) {
            let t = build_dr_truncation(&KGraph::cuntz(n), l).unwrap();
            for a in 0..t.arrows.len() {
                prop_assert_eq!(flam_cocycle(&t, a).is_empty(), t.groupoid.is_unit(a));
            }
        }
    }
}
