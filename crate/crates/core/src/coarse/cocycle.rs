//! Coarse maps and pure cocycles on the window groupoid, both directions,
//! and fiber-size profiles of pair labellings.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_map, collision, CoarseError, Evidence, FiniteCoarseSpace};
use crate::gpd::FiniteGroupoid;
use crate::grp::{Element, GroupHandle, Word};
use crate::pact::{check_pure_cocycle, Cocycle, Purity};

/// A cocycle on the groupoid whose arrows are the pairs of the maximal
/// entourage; arrow `(x, y)` has range `x` and source `y`.
#[derive(Clone, Debug)]
pub struct WindowCocycle {
    pub points: usize,
    pub pairs: Vec<(usize, usize)>,
    pub index: BTreeMap<(usize, usize), usize>,
    pub groupoid: FiniteGroupoid,
    pub cocycle: Cocycle,
}

impl WindowCocycle {
    /// Tabulates `value(x, y)` on the window groupoid of `space` and checks
    /// the cocycle identity.
    pub fn from_values(
        space: &FiniteCoarseSpace,
        group: &GroupHandle,
        mut value: impl FnMut(usize, usize) -> Result<Element, CoarseError>,
    ) -> Result<Self, CoarseError> {
        let pairs: Vec<(usize, usize)> = space.maximal_entourage().into_iter().collect();
        let index: BTreeMap<_, _> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let units = (0..space.points()).map(|x| index[&(x, x)]).collect();
        let s = pairs.iter().map(|p| p.1).collect();
        let r = pairs.iter().map(|p| p.0).collect();
        let inv = pairs.iter().map(|&(x, y)| index[&(y, x)]).collect();
        let groupoid =
            FiniteGroupoid::build(units, s, r, inv, |g, h| index[&(pairs[g].0, pairs[h].1)])?;
        let values = pairs
            .iter()
            .map(|&(x, y)| value(x, y))
            .collect::<Result<_, _>>()?;
        let cocycle = Cocycle {
            target: group.clone(),
            values,
        };
        cocycle.validate(&groupoid)?;
        Ok(WindowCocycle {
            points: space.points(),
            pairs,
            index,
            groupoid,
            cocycle,
        })
    }

    pub fn value(&self, x: usize, y: usize) -> Option<&Element> {
        self.index.get(&(x, y)).map(|&a| &self.cocycle.values[a])
    }

    pub fn purity(&self) -> Result<Purity, CoarseError> {
        Ok(check_pure_cocycle(&self.groupoid, &self.cocycle)?)
    }
}

/// `c(x, y) = f(x)f(y)⁻¹`, pure because `f` is injective.
pub fn map_to_cocycle(
    space: &FiniteCoarseSpace,
    group: &GroupHandle,
    f: &[Element],
) -> Result<WindowCocycle, CoarseError> {
    check_map(space, f)?;
    if let Some((x, y)) = collision(f) {
        return Err(CoarseError::NotInjective { x, y });
    }
    let inverses = f
        .iter()
        .map(|v| group.inv(v))
        .collect::<Result<Vec<_>, _>>()?;
    let wc = WindowCocycle::from_values(space, group, |x, y| Ok(group.mul(&f[x], &inverses[y])?))?;
    match wc.purity()? {
        Purity::Pure => Ok(wc),
        Purity::Impure { arrow } => {
            let (x, y) = wc.pairs[arrow];
            Err(CoarseError::NotInjective { x, y })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleMap {
    pub basepoint: usize,
    /// `f(x) = c(x, x₀)`, defined on the class of `x₀`.
    pub values: Vec<Option<Element>>,
    pub component: Vec<usize>,
    pub connected: bool,
}

pub fn cocycle_to_map(wc: &WindowCocycle, x0: usize) -> Result<CocycleMap, CoarseError> {
    if x0 >= wc.points {
        return Err(CoarseError::ForeignPoint {
            point: x0,
            points: wc.points,
        });
    }
    if let Purity::Impure { arrow } = wc.purity()? {
        let (x, y) = wc.pairs[arrow];
        return Err(CoarseError::NotPure { x, y });
    }
    let values: Vec<Option<Element>> = (0..wc.points).map(|x| wc.value(x, x0).cloned()).collect();
    let component: Vec<usize> = (0..wc.points).filter(|&x| values[x].is_some()).collect();
    Ok(CocycleMap {
        basepoint: x0,
        connected: component.len() == wc.points,
        component,
        values,
    })
}

/// Group-valued labels on the pairs of `{0, …, points-1}`, not necessarily
/// multiplicative.
#[derive(Clone, Debug)]
pub struct PairLabelling {
    pub group: GroupHandle,
    pub points: usize,
    pub values: BTreeMap<(usize, usize), Element>,
}

impl PairLabelling {
    pub fn from_cocycle(wc: &WindowCocycle) -> Self {
        PairLabelling {
            group: wc.cocycle.target.clone(),
            points: wc.points,
            values: wc
                .pairs
                .iter()
                .copied()
                .zip(wc.cocycle.values.iter().cloned())
                .collect(),
        }
    }

    fn tabulate(group: GroupHandle, n: usize, value: impl Fn(i64, i64) -> Element) -> Self {
        let values = (0..=n)
            .flat_map(|a| (0..=n).map(move |b| (a, b)))
            .map(|(a, b)| ((a, b), value(a as i64, b as i64)))
            .collect();
        PairLabelling {
            group,
            points: n + 1,
            values,
        }
    }

    /// `c(n, m) = n − m` on `[0, N]`.
    pub fn z_window(n: usize) -> Self {
        Self::tabulate(GroupHandle::free_abelian(1), n, |a, b| {
            Element::Abelian(vec![a - b])
        })
    }

    /// `c(n, m) = b^{−m} a^{n−m} b^{n}` in `F₂ = ⟨a, b⟩` on `[0, N]`.
    pub fn f2_window(n: usize) -> Self {
        Self::tabulate(GroupHandle::free(2), n, |a, b| {
            Element::Free(Word::from_powers(&[(1, -b), (0, a - b), (1, a)]).free_reduce())
        })
    }

    pub fn fiber(&self, gamma: &Element) -> Vec<(usize, usize)> {
        self.values
            .iter()
            .filter(|(_, v)| *v == gamma)
            .map(|(p, _)| *p)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub gamma: String,
    pub sizes: Vec<usize>,
    /// `Growing` is non-properness evidence, `Bounded` is properness evidence.
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileTable {
    pub window_sizes: Vec<usize>,
    pub rows: Vec<ProfileRow>,
}

/// `|c⁻¹(γ)|` on each window, for each `γ`.
pub fn properness_profile(windows: &[PairLabelling], gammas: &[Element]) -> ProfileTable {
    let rows = gammas
        .iter()
        .map(|g| {
            let sizes: Vec<usize> = windows.iter().map(|w| w.fiber(g).len()).collect();
            ProfileRow {
                gamma: windows
                    .first()
                    .map(|w| w.group.format_element(g))
                    .unwrap_or_else(|| format!("{g:?}")),
                evidence: Evidence::classify(&sizes),
                sizes,
            }
        })
        .collect();
    ProfileTable {
        window_sizes: windows.iter().map(|w| w.points).collect(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(i: i64) -> Element {
        Element::Abelian(vec![i])
    }

    #[test]
    fn inclusion_gives_differences() {
        let g = GroupHandle::free_abelian(1);
        let space = FiniteCoarseSpace::chain(5);
        let f: Vec<Element> = (0..5).map(z).collect();
        let wc = map_to_cocycle(&space, &g, &f).unwrap();
        assert_eq!(wc.pairs.len(), 25);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(wc.value(i, j), Some(&z(i as i64 - j as i64)));
            }
        }
        let back = cocycle_to_map(&wc, 0).unwrap();
        assert!(back.connected);
        assert_eq!(back.values, f.into_iter().map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn non_injective_maps_are_rejected() {
        let g = GroupHandle::free_abelian(1);
        let space = FiniteCoarseSpace::chain(3);
        let f = vec![z(0), z(1), z(0)];
        assert_eq!(
            map_to_cocycle(&space, &g, &f).unwrap_err(),
            CoarseError::NotInjective { x: 0, y: 2 }
        );
    }

    #[test]
    fn single_point_and_disconnected_windows() {
        let g = GroupHandle::free_abelian(1);
        let one = FiniteCoarseSpace::discrete(1);
        let wc = WindowCocycle::from_values(&one, &g, |_, _| Ok(z(0))).unwrap();
        assert_eq!(cocycle_to_map(&wc, 0).unwrap().values, vec![Some(z(0))]);

        let split = FiniteCoarseSpace::new(4, vec![[(0, 1), (2, 3)].into()]).unwrap();
        let f = vec![z(0), z(1), z(5), z(9)];
        let wc = map_to_cocycle(&split, &g, &f).unwrap();
        let m = cocycle_to_map(&wc, 2).unwrap();
        assert!(!m.connected);
        assert_eq!(m.component, vec![2, 3]);
        assert_eq!(m.values[3], Some(z(4)));
    }

    #[test]
    fn impure_cocycle_is_rejected() {
        let g = GroupHandle::free_abelian(1);
        let space = FiniteCoarseSpace::full(2);
        let wc = WindowCocycle::from_values(&space, &g, |_, _| Ok(z(0))).unwrap();
        assert_eq!(
            cocycle_to_map(&wc, 0).unwrap_err(),
            CoarseError::NotPure { x: 0, y: 1 }
        );
    }

    #[test]
    fn profiles() {
        let zs: Vec<_> = (1..=6).map(PairLabelling::z_window).collect();
        let t = properness_profile(&zs, &[z(1), z(0)]);
        assert_eq!(t.rows[0].sizes, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(t.rows[0].evidence, Evidence::Growing);
        assert_eq!(t.rows[1].sizes, vec![2, 3, 4, 5, 6, 7]);

        let fs: Vec<_> = (1..=6).map(PairLabelling::f2_window).collect();
        let f2 = GroupHandle::free(2);
        let gammas: Vec<Element> = ["b^-1 a b^2", "a", "b a^-1", "a^3"]
            .iter()
            .map(|s| f2.canonical(&f2.parse_word(s).unwrap()).unwrap())
            .collect();
        let t = properness_profile(&fs, &gammas);
        for row in &t.rows {
            assert!(row.sizes.iter().all(|&s| s <= 1), "{row:?}");
        }
        // b^{-1} a b^2 = c(2, 1) shows up from N = 2 on
        assert_eq!(t.rows[0].sizes, vec![0, 1, 1, 1, 1, 1]);
        assert_eq!(t.rows[0].evidence, Evidence::Bounded);
        let id = properness_profile(&fs, &[f2.identity()]);
        assert_eq!(id.rows[0].sizes, vec![2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn f2_labels_are_not_multiplicative() {
        let l = PairLabelling::f2_window(2);
        let f2 = &l.group;
        let lhs = f2.mul(&l.values[&(2, 1)], &l.values[&(1, 0)]).unwrap();
        assert_ne!(lhs, l.values[&(2, 0)]);
    }

    fn injection() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::btree_set(-20i64..20, 1..7)
            .prop_map(|s| s.into_iter().collect::<Vec<_>>())
            .prop_shuffle()
    }

    proptest! {
        #[test]
        fn roundtrip_translates_by_basepoint(v in injection(), pick in 0usize..7) {
            let g = GroupHandle::free_abelian(1);
            let space = FiniteCoarseSpace::full(v.len());
            let f: Vec<Element> = v.iter().map(|&i| z(i)).collect();
            let wc = map_to_cocycle(&space, &g, &f).unwrap();
            for (&(x, y), &a) in &wc.index {
                prop_assert_eq!(&wc.cocycle.values[a], &z(v[x] - v[y]));
            }
            let x0 = pick % v.len();
            let m = cocycle_to_map(&wc, x0).unwrap();
            for x in 0..v.len() {
                prop_assert_eq!(m.values[x].clone(), Some(z(v[x] - v[x0])));
            }
        }

        #[test]
        fn purity_iff_injective(v in proptest::collection::vec(-3i64..3, 1..6)) {
            let g = GroupHandle::free_abelian(1);
            let space = FiniteCoarseSpace::full(v.len());
            let f: Vec<Element> = v.iter().map(|&i| z(i)).collect();
            let injective = collision(&f).is_none();
            let wc = WindowCocycle::from_values(&space, &g, |x, y| Ok(z(v[x] - v[y]))).unwrap();
            prop_assert_eq!(wc.purity().unwrap() == Purity::Pure, injective);
            prop_assert_eq!(map_to_cocycle(&space, &g, &f).is_ok(), injective);
            prop_assert_eq!(cocycle_to_map(&wc, 0).is_ok(), injective);
        }
    }
}
