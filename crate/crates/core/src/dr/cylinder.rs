//! Cylinder sets `Z(μ)` and their Boolean calculus.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{KGraph, Path};

/// `Z(μ)` cut at degree `depth ≥ d(μ)`: the paths of degree `depth` with prefix `μ`.
pub fn cylinder_set(g: &KGraph, mu: &Path, depth: &[usize]) -> BTreeSet<Path> {
    let d = g.degree(mu);
    let rest: Vec<usize> = depth.iter().zip(&d).map(|(a, b)| a - b).collect();
    g.extensions(mu, &rest).into_iter().collect()
}

fn join(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `Z(μ) ∩ Z(ν)` as the disjoint union of `Z(λ)` over minimal common
/// extensions `λ`; for 1-graphs at most one cylinder.
pub fn cylinder_meet(g: &KGraph, mu: &Path, nu: &Path) -> Vec<Path> {
    if mu.range != nu.range {
        return Vec::new();
    }
    let (dm, dn) = (g.degree(mu), g.degree(nu));
    let j = join(&dm, &dn);
    let rest: Vec<usize> = j.iter().zip(&dm).map(|(a, b)| a - b).collect();
    g.extensions(mu, &rest)
        .into_iter()
        .filter(|l| g.prefix(l, &dn).as_ref() == Some(nu))
        .collect()
}

/// `Z(μ) \ Z(ν)` as a list of pairwise disjoint cylinders.
///
/// For 1-graphs with `ν = μf₁⋯f_m` this is `⨆_j ⨆_{e ≠ f_j} Z(μf₁⋯f_{j-1}e)`;
/// for k-graphs the extensions of `μ` to `d(μ) ∨ d(ν)` outside the meet.
pub fn cylinder_diff(g: &KGraph, mu: &Path, nu: &Path) -> Vec<Path> {
    let meet = cylinder_meet(g, mu, nu);
    if meet.is_empty() {
        return vec![mu.clone()];
    }
    if g.rank() == 1 {
        if nu.edges.len() <= mu.edges.len() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut stem = mu.clone();
        for &f in &nu.edges[mu.edges.len()..] {
            let v = g.source(&stem);
            for (e, edge) in g.edges().iter().enumerate() {
                if edge.dst == v && e != f {
                    let mut p = stem.clone();
                    p.edges.push(e);
                    out.push(p);
                }
            }
            stem.edges.push(f);
        }
        return out;
    }
    let (dm, dn) = (g.degree(mu), g.degree(nu));
    let rest: Vec<usize> = join(&dm, &dn).iter().zip(&dm).map(|(a, b)| a - b).collect();
    g.extensions(mu, &rest)
        .into_iter()
        .filter(|l| !meet.contains(l))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffCheck {
    /// Degree at which the sets were compared, `d(μ) + d(ν)`.
    pub depth: Vec<usize>,
    pub pieces: usize,
    pub disjoint: bool,
    pub union_exact: bool,
}

/// Compares a claimed decomposition of `Z(μ) \ Z(ν)` against enumerated paths.
pub fn verify_diff(g: &KGraph, mu: &Path, nu: &Path, pieces: &[Path]) -> DiffCheck {
    let depth: Vec<usize> = g
        .degree(mu)
        .iter()
        .zip(g.degree(nu))
        .map(|(a, b)| a + b)
        .collect();
    let sets: Vec<BTreeSet<Path>> = pieces.iter().map(|p| cylinder_set(g, p, &depth)).collect();
    let total: usize = sets.iter().map(|s| s.len()).sum();
    let union: BTreeSet<Path> = sets.into_iter().flatten().collect();
    let zm = cylinder_set(g, mu, &depth);
    let zn = cylinder_set(g, nu, &depth);
    let expected: BTreeSet<Path> = zm.difference(&zn).cloned().collect();
    DiffCheck {
        depth,
        pieces: pieces.len(),
        disjoint: total == union.len(),
        union_exact: union == expected,
    }
}
