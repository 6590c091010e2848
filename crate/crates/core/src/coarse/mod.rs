//! Finite coarse spaces, coarse maps into groups and the coarse-groupoid
//! correspondence on finite windows.
//!
//! The diagonal is part of every structure, so every generator is read as
//! `Δ ∪ E`. On a finite set the generated structure is the power set of the
//! equivalence relation spanned by `Δ ∪ E ∪ E⁻¹`; that relation is the
//! maximal element.

mod cocycle;
mod refute;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gpd::GroupoidError;
use crate::grp::{Element, GroupError, GroupHandle};
use crate::pact::PactError;

pub use cocycle::{
    cocycle_to_map, map_to_cocycle, properness_profile, CocycleMap, PairLabelling, ProfileRow,
    ProfileTable, WindowCocycle,
};
pub use refute::{maximal_refuter, replay_refutation, Refutation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoarseError {
    #[error("point {point} is not in X = {{0, …, {}}}", points.saturating_sub(1))]
    ForeignPoint { point: usize, points: usize },
    #[error("map has {got} values for {expected} points")]
    MapShape { expected: usize, got: usize },
    #[error("map is not injective: f({x}) = f({y})")]
    NotInjective { x: usize, y: usize },
    #[error("a group of order {order} cannot receive {points} points injectively")]
    TargetTooSmall { order: usize, points: usize },
    #[error("window needs at least two points")]
    WindowTooSmall,
    #[error("cocycle is not pure: c({x}, {y}) = 1")]
    NotPure { x: usize, y: usize },
    #[error("pair ({0}, {1}) is not an arrow of the window groupoid")]
    MissingPair(usize, usize),
    #[error("inclusion {index}: {detail}")]
    Inclusion { index: usize, detail: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Pact(#[from] PactError),
}

pub type Relation = BTreeSet<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCoarseSpace {
    pub points: usize,
    #[serde(default)]
    pub generators: Vec<Vec<[usize; 2]>>,
}

/// A coarse structure on `{0, …, n-1}` given by generating entourages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCoarseSpace {
    points: usize,
    generators: Vec<Relation>,
    /// Class id of each point under the maximal entourage.
    classes: Vec<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl FiniteCoarseSpace {
    pub fn new(points: usize, generators: Vec<Relation>) -> Result<Self, CoarseError> {
        for e in &generators {
            check_pairs(points, e)?;
        }
        let mut parent: Vec<usize> = (0..points).collect();
        for &(x, y) in generators.iter().flatten() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = BTreeMap::new();
        let classes = (0..points)
            .map(|x| {
                let root = find(&mut parent, x);
                let next = ids.len();
                *ids.entry(root).or_insert(next)
            })
            .collect();
        Ok(FiniteCoarseSpace {
            points,
            generators,
            classes,
        })
    }

    pub fn from_raw(raw: &RawCoarseSpace) -> Result<Self, CoarseError> {
        let gens = raw
            .generators
            .iter()
            .map(|e| e.iter().map(|&[x, y]| (x, y)).collect())
            .collect();
        Self::new(raw.points, gens)
    }

    pub fn to_raw(&self) -> RawCoarseSpace {
        RawCoarseSpace {
            points: self.points,
            generators: self
                .generators
                .iter()
                .map(|e| e.iter().map(|&(x, y)| [x, y]).collect())
                .collect(),
        }
    }

    /// Only the diagonal.
    pub fn discrete(points: usize) -> Self {
        Self::new(points, Vec::new()).expect("no generators")
    }

    /// Generated by `X × X`.
    pub fn full(points: usize) -> Self {
        let all = (0..points)
            .flat_map(|x| (0..points).map(move |y| (x, y)))
            .collect();
        Self::new(points, vec![all]).expect("pairs in range")
    }

    /// `[0, points)` with the symmetric chain entourage `{(i, i±1)}`.
    pub fn chain(points: usize) -> Self {
        let e = (1..points).flat_map(|i| [(i - 1, i), (i, i - 1)]).collect();
        Self::new(points, vec![e]).expect("pairs in range")
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn generators(&self) -> &[Relation] {
        &self.generators
    }

    /// The maximal element of the generated structure.
    pub fn maximal_entourage(&self) -> Relation {
        let mut out = Relation::new();
        for x in 0..self.points {
            for y in 0..self.points {
                if self.classes[x] == self.classes[y] {
                    out.insert((x, y));
                }
            }
        }
        out
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.classes[x] == self.classes[y]
    }

    /// Points in the class of `x`, ascending.
    pub fn class_of(&self, x: usize) -> Vec<usize> {
        (0..self.points)
            .filter(|&y| self.classes[y] == self.classes[x])
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.classes.iter().all(|&c| c == 0)
    }
}

fn check_pairs(points: usize, e: &Relation) -> Result<(), CoarseError> {
    match e.iter().flat_map(|&(x, y)| [x, y]).find(|&p| p >= points) {
        Some(point) => Err(CoarseError::ForeignPoint { point, points }),
        None => Ok(()),
    }
}

pub fn entourage_member(space: &FiniteCoarseSpace, e: &Relation) -> Result<bool, CoarseError> {
    check_pairs(space.points, e)?;
    Ok(e.iter().all(|&(x, y)| space.same_class(x, y)))
}

/// `sup_x |E[x]|` with `E[x] = {y : (y, x) ∈ E}`.
pub fn ulf_bound(points: usize, e: &Relation) -> usize {
    let mut counts = vec![0usize; points];
    for &(_, x) in e {
        counts[x] += 1;
    }
    counts.into_iter().max().unwrap_or(0)
}

fn with_diagonal(points: usize, e: &Relation) -> Relation {
    let mut out = e.clone();
    out.extend((0..points).map(|x| (x, x)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UlfProfile {
    /// Bound of `Δ ∪ E` for each generator.
    pub generators: Vec<usize>,
    pub maximal: usize,
}

pub fn ulf_profile(space: &FiniteCoarseSpace) -> UlfProfile {
    let n = space.points;
    UlfProfile {
        generators: space
            .generators
            .iter()
            .map(|e| ulf_bound(n, &with_diagonal(n, e)))
            .collect(),
        maximal: ulf_bound(n, &space.maximal_entourage()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelSet {
    /// Sorted by canonical element.
    pub labels: Vec<String>,
    pub size: usize,
    /// The label budget was reached before all pairs were read.
    pub truncated: bool,
}

fn label_set(
    group: &GroupHandle,
    values: &[Element],
    e: &Relation,
    budget: usize,
) -> Result<LabelSet, CoarseError> {
    let mut set = BTreeSet::new();
    let mut truncated = false;
    for &(x, y) in e {
        let l = group.mul(&values[x], &group.inv(&values[y])?)?;
        if !set.contains(&l) && set.len() == budget {
            truncated = true;
            break;
        }
        set.insert(l);
    }
    Ok(LabelSet {
        labels: set.iter().map(|l| group.format_element(l)).collect(),
        size: set.len(),
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseMapReport {
    pub injective: bool,
    pub collision: Option<(usize, usize)>,
    /// `S(Δ ∪ E)` for each generator.
    pub generators: Vec<LabelSet>,
    pub maximal: LabelSet,
}

fn check_map(space: &FiniteCoarseSpace, f: &[Element]) -> Result<(), CoarseError> {
    if f.len() != space.points {
        return Err(CoarseError::MapShape {
            expected: space.points,
            got: f.len(),
        });
    }
    Ok(())
}

/// First pair `x < y` with `f(x) = f(y)`.
pub(crate) fn collision(f: &[Element]) -> Option<(usize, usize)> {
    let mut seen: BTreeMap<&Element, usize> = BTreeMap::new();
    for (y, v) in f.iter().enumerate() {
        if let Some(&x) = seen.get(v) {
            return Some((x, y));
        }
        seen.insert(v, y);
    }
    None
}

/// Label sets `S(E) = {f(x)f(y)⁻¹ : (x, y) ∈ Δ ∪ E}`.
pub fn coarse_map_check(
    space: &FiniteCoarseSpace,
    group: &GroupHandle,
    f: &[Element],
    label_budget: usize,
) -> Result<CoarseMapReport, CoarseError> {
    check_map(space, f)?;
    let n = space.points;
    let collision = collision(f);
    Ok(CoarseMapReport {
        injective: collision.is_none(),
        collision,
        generators: space
            .generators
            .iter()
            .map(|e| label_set(group, f, &with_diagonal(n, e), label_budget))
            .collect::<Result<_, _>>()?,
        maximal: label_set(group, f, &space.maximal_entourage(), label_budget)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Evidence {
    /// Strictly increasing over the second half of the windows.
    Growing,
    /// Constant over the second half of the windows.
    Bounded,
    Inconclusive,
}

impl Evidence {
    pub fn classify(sizes: &[usize]) -> Evidence {
        if sizes.len() < 2 {
            return Evidence::Inconclusive;
        }
        let tail = &sizes[(sizes.len() - 1) / 2..];
        if tail.windows(2).all(|w| w[0] < w[1]) {
            Evidence::Growing
        } else if tail.windows(2).all(|w| w[0] == w[1]) {
            Evidence::Bounded
        } else {
            Evidence::Inconclusive
        }
    }
}

/// Nested finite windows; `inclusions[i]` maps window `i` into window `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseWindowFamily {
    windows: Vec<FiniteCoarseSpace>,
    inclusions: Vec<Vec<usize>>,
}

impl CoarseWindowFamily {
    pub fn new(
        windows: Vec<FiniteCoarseSpace>,
        inclusions: Vec<Vec<usize>>,
    ) -> Result<Self, CoarseError> {
        if inclusions.len() + 1 != windows.len().max(1) {
            return Err(CoarseError::Inclusion {
                index: inclusions.len(),
                detail: "one inclusion per consecutive pair".into(),
            });
        }
        for (i, inc) in inclusions.iter().enumerate() {
            let (a, b) = (&windows[i], &windows[i + 1]);
            let bad = |detail: String| CoarseError::Inclusion { index: i, detail };
            if inc.len() != a.points || inc.iter().any(|&y| y >= b.points) {
                return Err(bad("not a map between the windows".into()));
            }
            if collision(&inc.iter().map(|&y| Element::Finite(y)).collect::<Vec<_>>()).is_some() {
                return Err(bad("not injective".into()));
            }
            if a.generators.len() != b.generators.len() {
                return Err(bad("generator counts differ".into()));
            }
            for (k, (ea, eb)) in a.generators.iter().zip(&b.generators).enumerate() {
                if let Some(&(x, y)) = ea.iter().find(|&&(x, y)| !eb.contains(&(inc[x], inc[y]))) {
                    return Err(bad(format!("generator {k} loses ({x}, {y})")));
                }
            }
        }
        Ok(CoarseWindowFamily {
            windows,
            inclusions,
        })
    }

    /// Chain windows `[0, n)` for each size, included as initial segments.
    pub fn chain_windows(sizes: &[usize]) -> Result<Self, CoarseError> {
        let windows: Vec<_> = sizes.iter().map(|&n| FiniteCoarseSpace::chain(n)).collect();
        let inclusions = sizes.windows(2).map(|w| (0..w[0]).collect()).collect();
        Self::new(windows, inclusions)
    }

    pub fn windows(&self) -> &[FiniteCoarseSpace] {
        &self.windows
    }

    pub fn inclusions(&self) -> &[Vec<usize>] {
        &self.inclusions
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelGrowth {
    pub generator: usize,
    pub sizes: Vec<usize>,
    /// `Growing` is refutation evidence, `Bounded` is coarse-injection evidence.
    pub evidence: Evidence,
}

/// `|S(Δ ∪ E)|` of one generator across a window family, `maps[i]` being the
/// map on window `i`.
pub fn label_growth(
    family: &CoarseWindowFamily,
    group: &GroupHandle,
    maps: &[Vec<Element>],
    generator: usize,
) -> Result<LabelGrowth, CoarseError> {
    if maps.len() != family.windows.len() {
        return Err(CoarseError::MapShape {
            expected: family.windows.len(),
            got: maps.len(),
        });
    }
    let mut sizes = Vec::new();
    for (w, f) in family.windows.iter().zip(maps) {
        check_map(w, f)?;
        let e = w.generators.get(generator).cloned().unwrap_or_default();
        sizes.push(label_set(group, f, &with_diagonal(w.points, &e), usize::MAX)?.size);
    }
    Ok(LabelGrowth {
        generator,
        evidence: Evidence::classify(&sizes),
        sizes,
    })
}
