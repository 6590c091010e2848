//! Property Δ audits on `G × G`.

use std::collections::BTreeSet;

use crate::gpd::{check_subgroupoid, contains_diagonal, fib_count, Groupoid, ProductView};

use super::{Cocycle, PactError, TransformationGroupoid};

/// `H = {((γ,x),(γ,y)) : x, y ∈ D_{γ⁻¹}}` in product-view arrow ids, ascending.
pub fn canonical_delta_h(tg: &TransformationGroupoid) -> Vec<usize> {
    let g = &tg.groupoid;
    let view = ProductView::new(g, g);
    let mut out = Vec::new();
    for (a, &(ea, _)) in tg.arrows.iter().enumerate() {
        for (b, &(eb, _)) in tg.arrows.iter().enumerate() {
            if ea == eb {
                out.push(view.pair(a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaAudit {
    /// `|H ∩ (G(K) × C)|`.
    pub left_size: usize,
    /// `|H ∩ (C × G(K))|`.
    pub right_size: usize,
    pub left_fib: usize,
    pub right_fib: usize,
    /// `2·|pr_Γ(C)|` when a cocycle is supplied.
    pub bound: Option<usize>,
    /// `|pr_Γ(C)|` when a cocycle is supplied.
    pub projection_size: Option<usize>,
}

impl DeltaAudit {
    pub fn within_bound(&self) -> Option<bool> {
        self.bound
            .map(|b| self.left_fib <= b && self.right_fib <= b)
    }
}

/// Fiber counts of `H ∩ (G(K) × C)` and `H ∩ (C × G(K))` inside `G × G`.
///
/// `H` must be a subgroupoid of `G × G` containing the diagonal. With a
/// cocycle, the bound `2·|pr_Γ(C)|` is computed from its values.
pub fn delta_audit<G: Groupoid>(
    g: &G,
    h: &[usize],
    k: &[usize],
    c: &[usize],
    cocycle: Option<&Cocycle>,
) -> Result<DeltaAudit, PactError> {
    let view = ProductView::new(g, g);
    contains_diagonal(g, h).map_err(PactError::DiagonalMissing)?;
    check_subgroupoid(&view, h).map_err(PactError::Subgroupoid)?;
    let mut in_k = vec![false; g.unit_count()];
    for &u in k {
        *in_k
            .get_mut(u)
            .ok_or(PactError::Groupoid(crate::gpd::GroupoidError::InvalidUnit(
                u,
            )))? = true;
    }
    let in_gk = |a: usize| in_k[g.source(a)] && in_k[g.range(a)];
    let mut in_c = vec![false; g.arrow_count()];
    for &a in c {
        if a >= g.arrow_count() {
            return Err(crate::gpd::GroupoidError::InvalidArrow(a).into());
        }
        if !in_gk(a) {
            return Err(PactError::NotInReduction(a));
        }
        in_c[a] = true;
    }
    let h: BTreeSet<usize> = h.iter().copied().collect();
    let left: Vec<usize> = h
        .iter()
        .copied()
        .filter(|&p| {
            let (x, y) = view.split(p);
            in_gk(x) && in_c[y]
        })
        .collect();
    let right: Vec<usize> = h
        .iter()
        .copied()
        .filter(|&p| {
            let (x, y) = view.split(p);
            in_c[x] && in_gk(y)
        })
        .collect();
    let projection_size = cocycle.map(|cc| {
        c.iter()
            .map(|&a| cc.values[a].clone())
            .collect::<BTreeSet<_>>()
            .len()
    });
    Ok(DeltaAudit {
        left_size: left.len(),
        right_size: right.len(),
        left_fib: fib_count(&view, &left)?,
        right_fib: fib_count(&view, &right)?,
        bound: projection_size.map(|p| 2 * p),
        projection_size,
    })
}
