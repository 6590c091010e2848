//! Finitely supported partial actions on finite sets, their transformation
//! groupoids, pure cocycles and the canonical diagonal subgroupoid.

mod audit;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::gpd::{is_bisection, FiniteGroupoid, Groupoid, GroupoidError, SubgroupoidFailure};
use crate::grp::{Element, GroupError, GroupHandle, Word};

pub use audit::{canonical_delta_h, delta_audit, DeltaAudit};

/// Largest support the forced-entry completion will grow to.
const COMPLETION_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PactError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("point {0} out of range")]
    PointOutOfRange(usize),
    #[error("map of {gamma} is not a bijection onto its image: {detail}")]
    NotBijective { gamma: String, detail: String },
    #[error("support lists {0} twice")]
    DuplicateEntry(String),
    #[error("the identity must act as the identity of X")]
    IdentityNotTrivial,
    #[error("map of {gamma} is not the inverse of the map of its inverse")]
    InverseMismatch {
        gamma: String,
        suggestion: Option<Box<PartialActionSpec>>,
    },
    #[error("axiom (2) fails for gamma={gamma}, eta={eta} at x={x}")]
    Axiom2 {
        gamma: String,
        eta: String,
        x: usize,
        suggestion: Option<Box<PartialActionSpec>>,
    },
    #[error("axiom (3) fails for gamma={gamma}, eta={eta} at x={x}")]
    Axiom3 {
        gamma: String,
        eta: String,
        x: usize,
    },
    #[error("cocycle values do not match the groupoid")]
    CocycleShape,
    #[error("cocycle is not a homomorphism at ({0}, {1})")]
    MalformedCocycle(usize, usize),
    #[error("cocycle is not trivial on unit arrow {0}")]
    UnitValue(usize),
    #[error("cocycle is not pure: arrow {0} is a non-unit in the kernel")]
    NotPure(usize),
    #[error("preimage of {0} is not a bisection")]
    NotBisection(String),
    #[error("H is not a subgroupoid: {0:?}")]
    Subgroupoid(SubgroupoidFailure),
    #[error("H misses the diagonal arrow ({0}, {0})")]
    DiagonalMissing(usize),
    #[error("arrow {0} of C is not in G(K)")]
    NotInReduction(usize),
}

/// One support entry: `θ_γ : D_{γ⁻¹} → D_γ` as a sorted map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportEntry {
    pub element: Element,
    /// Canonical word of `γ`.
    pub word: Word,
    pub map: BTreeMap<usize, usize>,
}

impl SupportEntry {
    /// `D_{γ⁻¹}`.
    pub fn domain(&self) -> Vec<usize> {
        self.map.keys().copied().collect()
    }

    /// `D_γ`.
    pub fn image(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.map.values().copied().collect();
        v.sort_unstable();
        v
    }
}

/// A partial action of a group on `{0, …, points-1}` with finite support.
///
/// Entries are sorted by canonical word, so the identity comes first;
/// elements with empty domain are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialActionSpec {
    group: GroupHandle,
    points: usize,
    entries: Vec<SupportEntry>,
    index: BTreeMap<Element, usize>,
}

/// A partial bijection as `(x, θ(x))` pairs.
pub type RawMap = Vec<(usize, usize)>;

/// First failure of the axioms in support order.
enum Violation {
    Axiom2 { gamma: usize, eta: usize, x: usize },
    Axiom3 { gamma: usize, eta: usize, x: usize },
    Inverse { gamma: usize },
}

impl PartialActionSpec {
    /// Validates all axioms. Missing forced entries are reported with a
    /// completed specification attached when one exists.
    pub fn new(
        group: GroupHandle,
        points: usize,
        raw: Vec<(Word, RawMap)>,
    ) -> Result<Self, PactError> {
        let spec = Self::assemble(group, points, raw)?;
        spec.check_identity()?;
        match spec.first_violation()? {
            None => Ok(spec),
            Some(v) => Err(spec.violation_error(v)),
        }
    }

    /// Adds every forced entry until the axioms hold, if that terminates
    /// without conflicts and within the support limit.
    pub fn complete(
        group: GroupHandle,
        points: usize,
        raw: Vec<(Word, RawMap)>,
    ) -> Result<Self, PactError> {
        let spec = Self::assemble(group, points, raw)?;
        spec.check_identity()?;
        match spec.completion() {
            Some(done) => Ok(done),
            None => match spec.first_violation()? {
                Some(v) => Err(spec.violation_error(v)),
                None => Ok(spec),
            },
        }
    }

    fn assemble(
        group: GroupHandle,
        points: usize,
        raw: Vec<(Word, RawMap)>,
    ) -> Result<Self, PactError> {
        let mut by_element: BTreeMap<Element, (Word, BTreeMap<usize, usize>)> = BTreeMap::new();
        for (w, pairs) in raw {
            let element = group.canonical(&w)?;
            let word = group.word_of(&element)?;
            let name = group.format_word(&word);
            let mut map = BTreeMap::new();
            let mut seen_images = std::collections::BTreeSet::new();
            for (x, y) in pairs {
                for p in [x, y] {
                    if p >= points {
                        return Err(PactError::PointOutOfRange(p));
                    }
                }
                if map.insert(x, y).is_some() {
                    return Err(PactError::NotBijective {
                        gamma: name,
                        detail: format!("point {x} has two images"),
                    });
                }
                if !seen_images.insert(y) {
                    return Err(PactError::NotBijective {
                        gamma: name,
                        detail: format!("point {y} has two preimages"),
                    });
                }
            }
            if by_element.insert(element, (word, map)).is_some() {
                return Err(PactError::DuplicateEntry(name));
            }
        }
        Ok(Self::from_map(group, points, by_element))
    }

    fn from_map(
        group: GroupHandle,
        points: usize,
        by_element: BTreeMap<Element, (Word, BTreeMap<usize, usize>)>,
    ) -> Self {
        let mut entries: Vec<SupportEntry> = by_element
            .into_iter()
            .filter(|(_, (_, map))| !map.is_empty())
            .map(|(element, (word, map))| SupportEntry { element, word, map })
            .collect();
        entries.sort_by(|a, b| a.word.cmp(&b.word));
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.element.clone(), i))
            .collect();
        PartialActionSpec {
            group,
            points,
            entries,
            index,
        }
    }

    fn check_identity(&self) -> Result<(), PactError> {
        if self.points == 0 {
            return Ok(());
        }
        let id = self.group.identity();
        match self.entry(&id) {
            Some(e) if e.map.len() == self.points && e.map.iter().all(|(x, y)| x == y) => Ok(()),
            _ => Err(PactError::IdentityNotTrivial),
        }
    }

    fn first_violation(&self) -> Result<Option<Violation>, PactError> {
        for (gi, g) in self.entries.iter().enumerate() {
            let inverse = self.group.inv(&g.element)?;
            let ok = match self.entry(&inverse) {
                Some(e) => {
                    e.map.len() == g.map.len() && g.map.iter().all(|(x, y)| e.map.get(y) == Some(x))
                }
                None => false,
            };
            if !ok {
                return Ok(Some(Violation::Inverse { gamma: gi }));
            }
        }
        for (gi, g) in self.entries.iter().enumerate() {
            for (ei, e) in self.entries.iter().enumerate() {
                let product = self.group.mul(&e.element, &g.element)?;
                let target = self.entry(&product);
                for (&x, &gx) in &g.map {
                    let Some(&y) = e.map.get(&gx) else { continue };
                    match target.and_then(|t| t.map.get(&x)) {
                        None => {
                            return Ok(Some(Violation::Axiom2 {
                                gamma: gi,
                                eta: ei,
                                x,
                            }))
                        }
                        Some(&z) if z != y => {
                            return Ok(Some(Violation::Axiom3 {
                                gamma: gi,
                                eta: ei,
                                x,
                            }))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(None)
    }

    fn violation_error(&self, v: Violation) -> PactError {
        let name = |i: usize| self.group.format_word(&self.entries[i].word);
        match v {
            Violation::Axiom2 { gamma, eta, x, .. } => PactError::Axiom2 {
                gamma: name(gamma),
                eta: name(eta),
                x,
                suggestion: self.completion().map(Box::new),
            },
            Violation::Axiom3 { gamma, eta, x } => PactError::Axiom3 {
                gamma: name(gamma),
                eta: name(eta),
                x,
            },
            Violation::Inverse { gamma } => PactError::InverseMismatch {
                gamma: name(gamma),
                suggestion: self.completion().map(Box::new),
            },
        }
    }

    /// Fixed-point completion under forced products and inverses.
    fn completion(&self) -> Option<PartialActionSpec> {
        let mut current = self.clone();
        loop {
            let mut maps: BTreeMap<Element, (Word, BTreeMap<usize, usize>)> = current
                .entries
                .iter()
                .map(|e| (e.element.clone(), (e.word.clone(), e.map.clone())))
                .collect();
            let mut changed = false;
            let mut add = |maps: &mut BTreeMap<Element, (Word, BTreeMap<usize, usize>)>,
                           el: &Element,
                           x: usize,
                           y: usize|
             -> Option<()> {
                let word = current.group.word_of(el).ok()?;
                let entry = maps
                    .entry(el.clone())
                    .or_insert_with(|| (word, BTreeMap::new()));
                match entry.1.get(&x) {
                    Some(&z) if z != y => return None,
                    Some(_) => {}
                    None => {
                        if entry.1.values().any(|&z| z == y) {
                            return None;
                        }
                        entry.1.insert(x, y);
                        changed = true;
                    }
                }
                Some(())
            };
            for e in &current.entries {
                let inv = current.group.inv(&e.element).ok()?;
                for (&x, &y) in &e.map {
                    add(&mut maps, &inv, y, x)?;
                }
            }
            for g in &current.entries {
                for e in &current.entries {
                    let product = current.group.mul(&e.element, &g.element).ok()?;
                    for (&x, &gx) in &g.map {
                        if let Some(&y) = e.map.get(&gx) {
                            add(&mut maps, &product, x, y)?;
                        }
                    }
                }
            }
            if maps.len() > COMPLETION_LIMIT {
                return None;
            }
            current = Self::from_map(current.group.clone(), current.points, maps);
            if !changed {
                return match current.first_violation() {
                    Ok(None) => Some(current),
                    _ => None,
                };
            }
        }
    }

    /// Restriction of a global action to the subset `0..points` of the acted-on
    /// set. `act(γ, x)` returns `γx` when it lies in the subset. Only the given
    /// candidate elements are considered; the result is validated.
    pub fn restriction(
        group: GroupHandle,
        points: usize,
        candidates: &[Element],
        act: impl Fn(&Element, usize) -> Option<usize>,
    ) -> Result<Self, PactError> {
        let mut raw = Vec::new();
        for c in candidates {
            let map: RawMap = (0..points)
                .filter_map(|x| act(c, x).map(|y| (x, y)))
                .collect();
            raw.push((group.word_of(c)?, map));
        }
        Self::new(group, points, raw)
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn entries(&self) -> &[SupportEntry] {
        &self.entries
    }

    pub fn entry(&self, g: &Element) -> Option<&SupportEntry> {
        self.index.get(g).map(|&i| &self.entries[i])
    }

    /// The entries as `(word, pairs)` in storage order.
    pub fn to_raw(&self) -> Vec<(Word, RawMap)> {
        self.entries
            .iter()
            .map(|e| {
                (
                    e.word.clone(),
                    e.map.iter().map(|(&x, &y)| (x, y)).collect(),
                )
            })
            .collect()
    }
}

/// A groupoid homomorphism into a group, given on arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub target: GroupHandle,
    pub values: Vec<Element>,
}

impl Cocycle {
    /// Checks `c(unit) = 1` and `c(gh) = c(g)c(h)` on all composable pairs.
    pub fn validate(&self, g: &impl Groupoid) -> Result<(), PactError> {
        if self.values.len() != g.arrow_count() {
            return Err(PactError::CocycleShape);
        }
        for u in 0..g.unit_count() {
            let a = g.unit_arrow(u);
            if !self.target.is_identity(&self.values[a]) {
                return Err(PactError::UnitValue(a));
            }
        }
        for a in 0..g.arrow_count() {
            for b in g.range_fiber(g.source(a)) {
                let ab = g.compose(a, b).expect("composable");
                if self.target.mul(&self.values[a], &self.values[b])? != self.values[ab] {
                    return Err(PactError::MalformedCocycle(a, b));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Purity {
    Pure,
    /// A non-unit arrow with trivial value.
    Impure {
        arrow: usize,
    },
}

/// Purity after validating the homomorphism property.
pub fn check_pure_cocycle(g: &impl Groupoid, c: &Cocycle) -> Result<Purity, PactError> {
    c.validate(g)?;
    Ok(
        match (0..g.arrow_count()).find(|&a| !g.is_unit(a) && c.target.is_identity(&c.values[a])) {
            Some(arrow) => Purity::Impure { arrow },
            None => Purity::Pure,
        },
    )
}

/// `Γ ⋉ X` with its projection cocycle.
#[derive(Clone, Debug)]
pub struct TransformationGroupoid {
    pub groupoid: FiniteGroupoid,
    pub cocycle: Cocycle,
    /// Arrow id to `(support entry index, source point)`.
    pub arrows: Vec<(usize, usize)>,
}

impl TransformationGroupoid {
    pub fn arrow_id(&self, entry: usize, x: usize) -> Option<usize> {
        self.arrows.binary_search(&(entry, x)).ok()
    }
}

/// Arrows `(γ, x)` for `x ∈ D_{γ⁻¹}`, ordered by support entry and then by `x`;
/// the identity entry comes first, so arrow `x < |X|` is the unit at `x`.
pub fn build_transformation_groupoid(
    pa: &PartialActionSpec,
) -> Result<TransformationGroupoid, PactError> {
    let arrows: Vec<(usize, usize)> = pa
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, e)| e.map.keys().map(move |&x| (i, x)))
        .collect();
    let id_of: HashMap<(usize, usize), usize> =
        arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let n = pa.points;
    let theta = |(i, x): (usize, usize)| pa.entries[i].map[&x];
    let mut inv = Vec::with_capacity(arrows.len());
    for &(i, x) in &arrows {
        let gi = pa.group.inv(&pa.entries[i].element)?;
        let j = pa.index[&gi];
        inv.push(id_of[&(j, theta((i, x)))]);
    }
    let mut products: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, ea) in pa.entries.iter().enumerate() {
        for (b, eb) in pa.entries.iter().enumerate() {
            let p = pa.group.mul(&ea.element, &eb.element)?;
            if let Some(&k) = pa.index.get(&p) {
                products.insert((a, b), k);
            }
        }
    }
    let groupoid = FiniteGroupoid::build(
        (0..n).collect(),
        arrows.iter().map(|&(_, x)| x).collect(),
        arrows.iter().map(|&a| theta(a)).collect(),
        inv,
        |g, h| {
            // (η, γx)(γ, x) = (ηγ, x)
            let (eta, _) = arrows[g];
            let (gamma, x) = arrows[h];
            id_of[&(products[&(eta, gamma)], x)]
        },
    )?;
    let labels = arrows
        .iter()
        .map(|&(i, x)| format!("({}, {x})", pa.group.format_word(&pa.entries[i].word)))
        .collect();
    let groupoid = groupoid.with_labels(labels)?;
    let cocycle = Cocycle {
        target: pa.group.clone(),
        values: arrows
            .iter()
            .map(|&(i, _)| pa.entries[i].element.clone())
            .collect(),
    };
    if check_pure_cocycle(&groupoid, &cocycle)? != Purity::Pure {
        unreachable!("projection cocycle of a transformation groupoid is pure");
    }
    Ok(TransformationGroupoid {
        groupoid,
        cocycle,
        arrows,
    })
}

/// Result of reading a partial action off a pure cocycle.
#[derive(Clone, Debug)]
pub struct CocycleRealization {
    pub spec: PartialActionSpec,
    pub transformation: TransformationGroupoid,
    /// `iso[g]` is the arrow of `Γ ⋉ X` corresponding to `g`.
    pub iso: Vec<usize>,
}

/// `D_γ = r(c⁻¹(γ))`, `θ_γ(s(g)) = r(g)`, with the isomorphism `G ≅ Γ ⋉ G⁽⁰⁾`
/// verified arrow by arrow.
pub fn cocycle_to_partial_action(
    g: &FiniteGroupoid,
    c: &Cocycle,
) -> Result<CocycleRealization, PactError> {
    if let Purity::Impure { arrow } = check_pure_cocycle(g, c)? {
        return Err(PactError::NotPure(arrow));
    }
    let mut fibers: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
    for a in 0..g.arrow_count() {
        fibers.entry(c.values[a].clone()).or_default().push(a);
    }
    let mut raw = Vec::new();
    for (gamma, arrows) in &fibers {
        if !is_bisection(g, arrows)? {
            return Err(PactError::NotBisection(c.target.format_element(gamma)));
        }
        let map: RawMap = arrows.iter().map(|&a| (g.source(a), g.range(a))).collect();
        raw.push((c.target.word_of(gamma)?, map));
    }
    let spec = PartialActionSpec::new(c.target.clone(), g.unit_count(), raw)?;
    let tg = build_transformation_groupoid(&spec)?;
    let iso: Vec<usize> = (0..g.arrow_count())
        .map(|a| {
            let entry = spec.index[&c.values[a]];
            tg.arrow_id(entry, g.source(a)).expect("arrow present")
        })
        .collect();
    let mut hit = vec![false; tg.groupoid.arrow_count()];
    for &b in &iso {
        hit[b] = true;
    }
    if iso.len() != tg.groupoid.arrow_count() || hit.iter().any(|&h| !h) {
        return Err(GroupoidError::NotHomomorphism("arrow map is not bijective".into()).into());
    }
    crate::gpd::check_homomorphism(g, &tg.groupoid, &iso)?;
    Ok(CocycleRealization {
        spec,
        transformation: tg,
        iso,
    })
}

/// The fixture `Z ↷ {0,1,2}` generated by `θ₁(x) = x + 1` on `{0, 1}`.
pub fn fix7() -> PartialActionSpec {
    let z = GroupHandle::free(1);
    PartialActionSpec::new(
        z,
        3,
        vec![
            (Word::identity(), vec![(0, 0), (1, 1), (2, 2)]),
            (Word::from_powers(&[(0, 1)]), vec![(0, 1), (1, 2)]),
            (Word::from_powers(&[(0, -1)]), vec![(1, 0), (2, 1)]),
            (Word::from_powers(&[(0, 2)]), vec![(0, 2)]),
            (Word::from_powers(&[(0, -2)]), vec![(2, 0)]),
        ],
    )
    .expect("fixture is a partial action")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::fib_count;
    use crate::grp::FiniteGroup;
    use proptest::prelude::*;

    fn z() -> GroupHandle {
        GroupHandle::free(1)
    }

    fn pw(n: i64) -> Word {
        Word::from_powers(&[(0, n)])
    }

    #[test]
    fn fix7_is_valid_with_five_entries() {
        let pa = fix7();
        assert_eq!(pa.entries().len(), 5);
        assert_eq!(pa.entries()[0].word, Word::identity());
    }

    #[test]
    fn fix7_missing_forced_entry() {
        let raw = vec![
            (Word::identity(), vec![(0, 0), (1, 1), (2, 2)]),
            (pw(1), vec![(0, 1), (1, 2)]),
            (pw(-1), vec![(1, 0), (2, 1)]),
        ];
        let err = PartialActionSpec::new(z(), 3, raw.clone()).unwrap_err();
        match err {
            PactError::Axiom2 {
                gamma,
                eta,
                x,
                suggestion,
            } => {
                assert_eq!((gamma.as_str(), eta.as_str(), x), ("a", "a", 0));
                assert_eq!(*suggestion.unwrap(), fix7());
            }
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(PartialActionSpec::complete(z(), 3, raw).unwrap(), fix7());
    }

    #[test]
    fn trivial_partial_action() {
        let g = GroupHandle::finite(FiniteGroup::symmetric(3));
        let pa =
            PartialActionSpec::new(g, 2, vec![(Word::identity(), vec![(0, 0), (1, 1)])]).unwrap();
        let tg = build_transformation_groupoid(&pa).unwrap();
        assert_eq!(tg.groupoid.arrow_count(), 2);
    }

    #[test]
    fn axiom_three_conflict() {
        // θ_a swaps 0,1 but θ_{a^2} moves 0 to 1
        let c4 = GroupHandle::finite(FiniteGroup::cyclic(4));
        let raw = vec![
            (Word::identity(), vec![(0, 0), (1, 1)]),
            (pw(1), vec![(0, 1), (1, 0)]),
            (pw(-1), vec![(0, 1), (1, 0)]),
            (pw(2), vec![(0, 1), (1, 0)]),
        ];
        let err = PartialActionSpec::new(c4, 2, raw).unwrap_err();
        assert!(matches!(err, PactError::Axiom3 { .. }), "{err:?}");
    }

    #[test]
    fn not_bijective() {
        let raw = vec![
            (Word::identity(), vec![(0, 0), (1, 1)]),
            (pw(1), vec![(0, 1), (1, 1)]),
        ];
        assert!(matches!(
            PartialActionSpec::new(z(), 2, raw),
            Err(PactError::NotBijective { .. })
        ));
    }

    #[test]
    fn fix7_transformation_groupoid() {
        let tg = build_transformation_groupoid(&fix7()).unwrap();
        assert_eq!(tg.groupoid.arrow_count(), 9);
        assert_eq!(tg.groupoid.unit_count(), 3);
        // c⁻¹(1) = {(a,0), (a,1)}
        let a = fix7().group().canonical(&pw(1)).unwrap();
        let pre: Vec<usize> = (0..9).filter(|&i| tg.cocycle.values[i] == a).collect();
        assert_eq!(pre.len(), 2);
        assert_eq!(fib_count(&tg.groupoid, &pre).unwrap(), 2);
        assert_eq!(
            check_pure_cocycle(&tg.groupoid, &tg.cocycle).unwrap(),
            Purity::Pure
        );
    }

    #[test]
    fn fix7_roundtrip() {
        let pa = fix7();
        let tg = build_transformation_groupoid(&pa).unwrap();
        let back = cocycle_to_partial_action(&tg.groupoid, &tg.cocycle).unwrap();
        assert_eq!(back.spec, pa);
        assert_eq!(back.iso, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn pair_groupoid_cocycle_reads_off_action() {
        let g = FiniteGroupoid::pair(2);
        let zz = z();
        // arrow x·2+y goes from y to x and carries x − y
        let values = (0..4)
            .map(|a: usize| zz.canonical(&pw((a / 2) as i64 - (a % 2) as i64)).unwrap())
            .collect();
        let c = Cocycle {
            target: zz.clone(),
            values,
        };
        let r = cocycle_to_partial_action(&g, &c).unwrap();
        let one = r.spec.entry(&zz.canonical(&pw(1)).unwrap()).unwrap();
        assert_eq!(one.domain(), vec![0]);
        assert_eq!(one.image(), vec![1]);
        assert_eq!(one.map[&0], 1);
    }

    #[test]
    fn identity_cocycle_on_group_is_pure() {
        let fg = FiniteGroup::symmetric(3);
        let g = FiniteGroupoid::from_group(&fg);
        let target = GroupHandle::finite(fg);
        let c = Cocycle {
            target,
            values: (0..6).map(Element::Finite).collect(),
        };
        assert_eq!(check_pure_cocycle(&g, &c).unwrap(), Purity::Pure);
    }

    #[test]
    fn constant_cocycle_is_impure() {
        let g = FiniteGroupoid::pair(2);
        let zz = z();
        let c = Cocycle {
            target: zz.clone(),
            values: vec![zz.identity(); 4],
        };
        assert_eq!(
            check_pure_cocycle(&g, &c).unwrap(),
            Purity::Impure { arrow: 1 }
        );
        assert_eq!(
            cocycle_to_partial_action(&g, &c).unwrap_err(),
            PactError::NotPure(1)
        );
    }

    #[test]
    fn malformed_cocycle_is_distinct_from_impure() {
        let g = FiniteGroupoid::pair(2);
        let zz = z();
        let mut values = vec![zz.identity(); 4];
        values[1] = zz.canonical(&pw(1)).unwrap();
        let c = Cocycle { target: zz, values };
        assert!(matches!(
            check_pure_cocycle(&g, &c),
            Err(PactError::MalformedCocycle(..))
        ));
    }

    fn z_restriction(points: Vec<i64>) -> PartialActionSpec {
        let zz = z();
        let mut cands = Vec::new();
        for &a in &points {
            for &b in &points {
                let e = zz.canonical(&pw(b - a)).unwrap();
                if !cands.contains(&e) {
                    cands.push(e);
                }
            }
        }
        PartialActionSpec::restriction(zz, points.len(), &cands, |g, x| {
            let Element::Free(w) = g else { unreachable!() };
            let t = w.exponent_sums(1)[0];
            points.iter().position(|&p| p == points[x] + t)
        })
        .unwrap()
    }

    proptest! {
        #[test]
        fn roundtrip_on_translation_restrictions(set in proptest::collection::btree_set(-6i64..6, 0..6)) {
            let pa = z_restriction(set.into_iter().collect());
            let tg = build_transformation_groupoid(&pa).unwrap();
            let back = cocycle_to_partial_action(&tg.groupoid, &tg.cocycle).unwrap();
            prop_assert_eq!(back.spec, pa);
            let mut fibers: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
            for (a, v) in tg.cocycle.values.iter().enumerate() {
                fibers.entry(v.clone()).or_default().push(a);
            }
            for arrows in fibers.values() {
                prop_assert!(is_bisection(&tg.groupoid, arrows).unwrap());
            }
        }
    }
}
