//! Greedy matching that witnesses an injection into a group failing to be
//! coarse for the maximal uniformly locally finite structure.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{collision, CoarseError};
use crate::grp::{Element, GroupHandle};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    /// `(k, n_k)` with `n_0 = 0` and `n_k` increasing.
    pub pairs: Vec<(usize, usize)>,
    /// `f(x_k)f(x_{n_k})⁻¹`, pairwise distinct.
    pub labels: Vec<String>,
    #[serde(skip)]
    pub elements: Vec<Element>,
    /// First `k` for which no admissible `n_k` was left in the window.
    pub exhausted_at: Option<usize>,
    /// Fewer than `⌊|X|/2⌋` pairs were found.
    pub stalled: bool,
    /// `sup_x |{y : (x, y) ∈ E or (y, x) ∈ E}|`.
    pub ulf_bound: usize,
}

fn label(group: &GroupHandle, f: &[Element], x: usize, y: usize) -> Result<Element, CoarseError> {
    Ok(group.mul(&f[x], &group.inv(&f[y])?)?)
}

/// Points are taken in index order; each `n_k` is the smallest index after
/// `n_{k-1}` giving a new label.
pub fn maximal_refuter(group: &GroupHandle, f: &[Element]) -> Result<Refutation, CoarseError> {
    let points = f.len();
    if points < 2 {
        return Err(CoarseError::WindowTooSmall);
    }
    if let Some(order) = group.order().filter(|&o| o < points) {
        return Err(CoarseError::TargetTooSmall { order, points });
    }
    if let Some((x, y)) = collision(f) {
        return Err(CoarseError::NotInjective { x, y });
    }
    let mut pairs = vec![(0, 0)];
    let mut elements = vec![group.identity()];
    let mut seen: BTreeSet<Element> = elements.iter().cloned().collect();
    let mut exhausted_at = None;
    for k in 1..points {
        let prev = pairs[k - 1].1;
        let mut found = None;
        for n in prev + 1..points {
            let l = label(group, f, k, n)?;
            if !seen.contains(&l) {
                found = Some((n, l));
                break;
            }
        }
        let Some((n, l)) = found else {
            exhausted_at = Some(k);
            break;
        };
        seen.insert(l.clone());
        pairs.push((k, n));
        elements.push(l);
    }
    let mut degree = vec![BTreeSet::new(); points];
    for &(x, y) in &pairs {
        degree[x].insert(y);
        degree[y].insert(x);
    }
    Ok(Refutation {
        labels: elements.iter().map(|l| group.format_element(l)).collect(),
        stalled: pairs.len() < points / 2,
        ulf_bound: degree.iter().map(BTreeSet::len).max().unwrap_or(0),
        pairs,
        elements,
        exhausted_at,
    })
}

/// Recomputes every label from `f` and checks the shape of the matching and
/// that the labels are pairwise distinct.
pub fn replay_refutation(group: &GroupHandle, f: &[Element], r: &Refutation) -> Result<(), String> {
    let mut seen = BTreeSet::new();
    let mut prev = None;
    for (i, &(k, n)) in r.pairs.iter().enumerate() {
        if k != i || n >= f.len() {
            return Err(format!("pair {i} is ({k}, {n})"));
        }
        if prev.is_some_and(|p| n <= p) || (i == 0 && n != 0) {
            return Err(format!("n_{i} = {n} does not increase"));
        }
        prev = Some(n);
        let l = label(group, f, k, n).map_err(|e| e.to_string())?;
        if r.elements.get(i) != Some(&l) || r.labels.get(i) != Some(&group.format_element(&l)) {
            return Err(format!("label {i} does not match f"));
        }
        if !seen.insert(l) {
            return Err(format!("label {i} repeats"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::FiniteGroup;
    use proptest::prelude::*;

    fn ints(v: impl IntoIterator<Item = i64>) -> Vec<Element> {
        v.into_iter().map(|i| Element::Abelian(vec![i])).collect()
    }

    #[test]
    fn identity_window_gives_half_matching() {
        let z = GroupHandle::free_abelian(1);
        for m in 1..8 {
            let f = ints(1..=2 * m as i64);
            let r = maximal_refuter(&z, &f).unwrap();
            assert_eq!(r.pairs.len(), m);
            assert!(!r.stalled);
            // n_k = 2k - 1 in 1-based indexing, so the labels are 0, -1, -2, ...
            let expect: Vec<(usize, usize)> = (0..m).map(|k| (k, 2 * k)).collect();
            assert_eq!(r.pairs, expect);
            assert_eq!(r.elements, ints((0..m as i64).map(|k| -k)));
            replay_refutation(&z, &f, &r).unwrap();
        }
    }

    #[test]
    fn single_pair() {
        let z = GroupHandle::free_abelian(1);
        let r = maximal_refuter(&z, &ints([1, 2])).unwrap();
        assert_eq!(r.pairs, vec![(0, 0)]);
        assert_eq!(r.exhausted_at, Some(1));
    }

    #[test]
    fn small_targets_and_collisions() {
        let z2 = GroupHandle::finite(FiniteGroup::cyclic(2));
        let f = vec![Element::Finite(0), Element::Finite(1), Element::Finite(0)];
        assert_eq!(
            maximal_refuter(&z2, &f).unwrap_err(),
            CoarseError::TargetTooSmall {
                order: 2,
                points: 3
            }
        );
        let z = GroupHandle::free_abelian(1);
        assert!(matches!(
            maximal_refuter(&z, &ints([3, 4, 3])),
            Err(CoarseError::NotInjective { x: 0, y: 2 })
        ));
        assert_eq!(
            maximal_refuter(&z, &ints([3])).unwrap_err(),
            CoarseError::WindowTooSmall
        );
    }

    #[test]
    fn tampered_refutation_fails_replay() {
        let z = GroupHandle::free_abelian(1);
        let f = ints(1..=6);
        let mut r = maximal_refuter(&z, &f).unwrap();
        r.elements[1] = r.elements[0].clone();
        assert!(replay_refutation(&z, &f, &r).is_err());
    }

    proptest! {
        #[test]
        fn labels_distinct_on_random_injections(
            v in proptest::collection::btree_set(-50i64..50, 2..16).prop_map(|s| s.into_iter().collect::<Vec<_>>()).prop_shuffle()
        ) {
            let z = GroupHandle::free_abelian(1);
            let f = ints(v);
            let r = maximal_refuter(&z, &f).unwrap();
            prop_assert!(replay_refutation(&z, &f, &r).is_ok());
            prop_assert!(r.ulf_bound <= 2);
        }
    }
}
