//! Arrow subsets: bisections, fiber counts, subgroupoids.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{Groupoid, GroupoidError, ProductView};

/// Why an arrow set fails to be a subgroupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupoidFailure {
    InvalidArrow(usize),
    MissingInverse(usize),
    MissingComposite(usize, usize),
    MissingUnit(usize),
}

fn checked_set(g: &impl Groupoid, a: &[usize]) -> Result<HashSet<usize>, GroupoidError> {
    let mut set = HashSet::with_capacity(a.len());
    for &x in a {
        if x >= g.arrow_count() {
            return Err(GroupoidError::InvalidArrow(x));
        }
        set.insert(x);
    }
    Ok(set)
}

/// True iff `s` and `r` are injective on `a`.
pub fn is_bisection(g: &impl Groupoid, a: &[usize]) -> Result<bool, GroupoidError> {
    let set = checked_set(g, a)?;
    let mut sources = HashSet::new();
    let mut ranges = HashSet::new();
    for &x in &set {
        if !sources.insert(g.source(x)) || !ranges.insert(g.range(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `sup_x |A ∩ G_x| + |A ∩ G^x|`; zero for the empty set.
pub fn fib_count(g: &impl Groupoid, a: &[usize]) -> Result<usize, GroupoidError> {
    let set = checked_set(g, a)?;
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &x in &set {
        *counts.entry(g.source(x)).or_default() += 1;
        *counts.entry(g.range(x)).or_default() += 1;
    }
    Ok(counts.values().copied().max().unwrap_or(0))
}

/// Closure under inverses and composition, containing the identities at the
/// endpoints of its arrows. Returns the first failure in ascending arrow order.
pub fn check_subgroupoid(g: &impl Groupoid, a: &[usize]) -> Result<(), SubgroupoidFailure> {
    let mut sorted = BTreeSet::new();
    for &x in a {
        if x >= g.arrow_count() {
            return Err(SubgroupoidFailure::InvalidArrow(x));
        }
        sorted.insert(x);
    }
    let mut by_range: HashMap<usize, Vec<usize>> = HashMap::new();
    for &x in &sorted {
        by_range.entry(g.range(x)).or_default().push(x);
    }
    for &x in &sorted {
        for u in [g.source(x), g.range(x)] {
            if !sorted.contains(&g.unit_arrow(u)) {
                return Err(SubgroupoidFailure::MissingUnit(x));
            }
        }
        if !sorted.contains(&g.inverse(x)) {
            return Err(SubgroupoidFailure::MissingInverse(x));
        }
        if let Some(next) = by_range.get(&g.source(x)) {
            for &y in next {
                let xy = g.compose(x, y).expect("composable by construction");
                if !sorted.contains(&xy) {
                    return Err(SubgroupoidFailure::MissingComposite(x, y));
                }
            }
        }
    }
    Ok(())
}

pub fn is_subgroupoid(g: &impl Groupoid, a: &[usize]) -> bool {
    check_subgroupoid(g, a).is_ok()
}

/// `Δ_G = {(g, g)}` as arrow ids of the product view `G × G`.
pub fn diagonal<G: Groupoid>(g: &G) -> Vec<usize> {
    let view = ProductView::new(g, g);
    (0..g.arrow_count()).map(|x| view.pair(x, x)).collect()
}

/// Returns the first `g` with `(g, g) ∉ H`, if any.
pub fn contains_diagonal<G: Groupoid>(g: &G, h: &[usize]) -> Result<(), usize> {
    let set: HashSet<usize> = h.iter().copied().collect();
    let view = ProductView::new(g, g);
    match (0..g.arrow_count()).find(|&x| !set.contains(&view.pair(x, x))) {
        Some(x) => Err(x),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::super::FiniteGroupoid;
    use super::*;
    use crate::grp::FiniteGroup;
    use proptest::prelude::*;

    #[test]
    fn bisections() {
        let g = FiniteGroupoid::pair(3);
        assert!(is_bisection(&g, &[4]).unwrap());
        assert!(is_bisection(&g, g.unit_arrows()).unwrap());
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        assert!(!is_bisection(&z2, &[0, 1]).unwrap());
    }

    #[test]
    fn fiber_counts() {
        let g = FiniteGroupoid::pair(3);
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(fib_count(&g, &all).unwrap(), 6);
        assert_eq!(fib_count(&g, g.unit_arrows()).unwrap(), 2);
        assert_eq!(fib_count(&g, &[]).unwrap(), 0);
    }

    #[test]
    fn subgroupoids() {
        let g = FiniteGroupoid::pair(3);
        assert!(is_subgroupoid(&g, g.unit_arrows()));
        assert_eq!(
            check_subgroupoid(&g, &[1]),
            Err(SubgroupoidFailure::MissingUnit(1))
        );
        let d = diagonal(&g);
        assert!(is_subgroupoid(&ProductView::new(&g, &g), &d));
        assert!(contains_diagonal(&g, &d).is_ok());
        assert_eq!(contains_diagonal(&g, &d[1..]), Err(0));
    }

    fn random_groupoid() -> impl Strategy<Value = FiniteGroupoid> {
        prop_oneof![
            (1..4usize).prop_map(FiniteGroupoid::pair),
            (1..5usize).prop_map(|n| FiniteGroupoid::from_group(&FiniteGroup::cyclic(n))),
            Just(FiniteGroupoid::from_group(&FiniteGroup::symmetric(3))),
        ]
    }

    proptest! {
        #[test]
        fn product_fib_bound(
            g in random_groupoid(),
            h in random_groupoid(),
            ma in proptest::collection::vec(any::<bool>(), 9),
            mb in proptest::collection::vec(any::<bool>(), 9),
        ) {
            let a: Vec<usize> = (0..g.arrow_count()).filter(|&x| ma[x % 9]).collect();
            let b: Vec<usize> = (0..h.arrow_count()).filter(|&x| mb[x % 9]).collect();
            let view = ProductView::new(&g, &h);
            let ab: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y)))
                .map(|(x, y)| view.pair(x, y)).collect();
            let lhs = fib_count(&view, &ab).unwrap();
            let rhs = fib_count(&g, &a).unwrap() * b.len() + a.len() * fib_count(&h, &b).unwrap();
            prop_assert!(lhs <= rhs);
        }

        #[test]
        fn bisections_have_small_fibers(
            g in random_groupoid(),
            mask in proptest::collection::vec(any::<bool>(), 9),
        ) {
            let a: Vec<usize> = (0..g.arrow_count()).filter(|&x| mask[x % 9]).collect();
            if is_bisection(&g, &a).unwrap() {
                prop_assert!(fib_count(&g, &a).unwrap() <= 2);
            }
        }

        #[test]
        fn reduction_matches_brute_force(n in 1..5usize, mask in proptest::collection::vec(any::<bool>(), 5)) {
            let g = FiniteGroupoid::pair(n);
            let k: Vec<usize> = (0..n).filter(|&u| mask[u]).collect();
            let (sub, emb) = g.reduction(&k).unwrap();
            let brute: Vec<usize> = (0..g.arrow_count())
                .filter(|&x| k.contains(&g.source(x)) && k.contains(&g.range(x)))
                .collect();
            prop_assert_eq!(emb, brute);
            prop_assert!(sub.validate().is_ok());
        }
    }
}
