//! The subgroupoid `H` witnessing Δ̄ for locally finite groups.
//!
//! Given increasing finite subgroups `F_n` with `π_n(F_n) = Γ_n`, `H` is the
//! set of pairs of arrows `(a, b)` of the truncation that lie together in
//! some `N(n, ξ) × N(n, ξ)` with `ξ ∈ F_n`.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::{check_depth, HlsError, Levelled};
use crate::gpd::{check_subgroupoid, contains_diagonal, fib_count, Groupoid, ProductView};
use crate::grp::{Element, QuotientChain, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelBookkeeping {
    pub level: usize,
    pub subgroup_order: usize,
    /// Smallest `m ≥ level` within the truncation at which `π_m` is injective
    /// on `F_level`; from there on `N(level, ξ)` splits into disjoint pieces.
    pub injective_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaBarAudit {
    /// Product-view ids of `H`, ascending.
    pub h: Vec<usize>,
    pub size: usize,
    pub subgroupoid: bool,
    pub contains_diagonal: bool,
    /// Largest fiber of `H` over a unit of `G × G`.
    pub max_fiber: usize,
    pub levels: Vec<LevelBookkeeping>,
}

/// `F_m = ⟨g_0, …, g_{m-1}⟩` as explicit word lists, `m = 0..=n`, for a base
/// of exponent 2 such as `⊕Z/2`.
pub fn span_f_chain(n: usize) -> Vec<Vec<Word>> {
    (0..=n)
        .map(|m| {
            (0..1usize << m)
                .map(|mask| {
                    Word::from_powers(
                        &(0..m)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| (i, 1))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect()
        })
        .collect()
}

pub fn locally_finite_delta_bar_h(
    chain: &QuotientChain,
    truncation: &impl Levelled,
    f_chain: &[Vec<Word>],
    n: usize,
) -> Result<DeltaBarAudit, HlsError> {
    check_depth(chain, n)?;
    if f_chain.len() < n + 1 {
        return Err(HlsError::FChain(format!(
            "{} subgroups given for levels 0..={n}",
            f_chain.len()
        )));
    }
    let base = chain.base();
    let mut subgroups: Vec<BTreeSet<Element>> = Vec::new();
    for (m, words) in f_chain[..=n].iter().enumerate() {
        let set: BTreeSet<Element> = words
            .iter()
            .map(|w| base.canonical(w))
            .collect::<Result<_, _>>()?;
        if !set.contains(&base.identity()) {
            return Err(HlsError::FChain(format!("F_{m} lacks the identity")));
        }
        for x in &set {
            if !set.contains(&base.inv(x)?) {
                return Err(HlsError::FChain(format!(
                    "F_{m} lacks the inverse of {}",
                    base.format_element(x)
                )));
            }
            for y in &set {
                if !set.contains(&base.mul(x, y)?) {
                    return Err(HlsError::FChain(format!(
                        "F_{m} lacks the product {}·{}",
                        base.format_element(x),
                        base.format_element(y)
                    )));
                }
            }
        }
        if let Some(prev) = subgroups.last() {
            if !prev.is_subset(&set) {
                return Err(HlsError::FChain(format!("F_{} ⊄ F_{m}", m - 1)));
            }
        }
        let images: BTreeSet<usize> = set
            .iter()
            .map(|x| chain.quotient_image_of(m, x))
            .collect::<Result<_, _>>()?;
        if let Some(element) = (0..chain.level(m)?.order()).find(|g| !images.contains(g)) {
            return Err(HlsError::DiagonalMissing { level: m, element });
        }
        subgroups.push(set);
    }

    // (k_a, g_a, k_b, g_b) realized by some ξ ∈ F_m with m ≤ min(k_a, k_b)
    let mut allowed: HashSet<(usize, usize, usize, usize)> = HashSet::new();
    let mut levels = Vec::new();
    for (m, set) in subgroups.iter().enumerate() {
        let mut images = Vec::with_capacity(set.len());
        for x in set {
            let img: Vec<usize> = (0..=n)
                .map(|k| chain.quotient_image_of(k, x))
                .collect::<Result<_, _>>()?;
            for ka in m..=n {
                for kb in m..=n {
                    allowed.insert((ka, img[ka], kb, img[kb]));
                }
            }
            images.push(img);
        }
        let injective_from = (m..=n).find(|&k| {
            images
                .iter()
                .map(|img| img[k])
                .collect::<BTreeSet<_>>()
                .len()
                == images.len()
        });
        levels.push(LevelBookkeeping {
            level: m,
            subgroup_order: set.len(),
            injective_from,
        });
    }

    let g = truncation.groupoid();
    let view = ProductView::new(g, g);
    let count = g.arrow_count();
    let mut h = Vec::new();
    for a in 0..count {
        let (ka, ga) = truncation.level_element(a);
        for b in 0..count {
            let (kb, gb) = truncation.level_element(b);
            if allowed.contains(&(ka, ga, kb, gb)) {
                h.push(view.pair(a, b));
            }
        }
    }
    h.sort_unstable();
    let subgroupoid = check_subgroupoid(&view, &h).is_ok();
    let diag = contains_diagonal(g, &h);
    if let Err(a) = diag {
        let (level, element) = truncation.level_element(a);
        return Err(HlsError::DiagonalMissing { level, element });
    }
    Ok(DeltaBarAudit {
        size: h.len(),
        max_fiber: fib_count(&view, &h)?,
        h,
        subgroupoid,
        contains_diagonal: true,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_afs, build_hls};
    use super::*;
    use crate::grp::{FiniteGroup, GroupHandle};

    #[test]
    fn oplus_span_chain_passes() {
        let o = QuotientChain::oplus_z2_chain(3, 2).unwrap();
        let f = span_f_chain(2);
        let hls = build_hls(&o, 2).unwrap();
        let a = locally_finite_delta_bar_h(&o, &hls, &f, 2).unwrap();
        assert!(a.subgroupoid && a.contains_diagonal);
        // levels k, k' meet through ξ ∈ F_min(k,k'): Σ |Γ_min|·… counted directly
        let brute: usize = (0..3usize)
            .flat_map(|k| (0..3usize).map(move |kb| 1usize << k.min(kb)))
            .sum();
        assert_eq!(a.size, brute);
        assert_eq!(a.levels[2].injective_from, Some(2));
        let afs = build_afs(&o, 2).unwrap();
        let b = locally_finite_delta_bar_h(&o, &afs, &f, 2).unwrap();
        assert!(b.subgroupoid);
    }

    #[test]
    fn trivial_chain_gives_everything() {
        let base = GroupHandle::finite(FiniteGroup::abelian(&[2, 2]));
        let t = QuotientChain::trivial_chain(base, 2).unwrap();
        let hls = build_hls(&t, 2).unwrap();
        let ones = vec![vec![Word::identity()]; 3];
        let a = locally_finite_delta_bar_h(&t, &hls, &ones, 2).unwrap();
        assert_eq!(a.size, 9);
        assert!(a.subgroupoid);
    }

    #[test]
    fn trivial_subgroups_fail_at_level_one() {
        let o = QuotientChain::oplus_z2_chain(3, 2).unwrap();
        let hls = build_hls(&o, 2).unwrap();
        let ones = vec![vec![Word::identity()]; 3];
        assert_eq!(
            locally_finite_delta_bar_h(&o, &hls, &ones, 2).unwrap_err(),
            HlsError::DiagonalMissing {
                level: 1,
                element: 1
            }
        );
    }

    #[test]
    fn non_subgroup_rejected() {
        let o = QuotientChain::oplus_z2_chain(3, 2).unwrap();
        let hls = build_hls(&o, 2).unwrap();
        let mut f = span_f_chain(2);
        f[2].pop();
        assert!(matches!(
            locally_finite_delta_bar_h(&o, &hls, &f, 2),
            Err(HlsError::FChain(_))
        ));
    }
}
