//! Finite discrete groupoids stored as explicit tables.
//!
//! Units are numbered `0..unit_count` and each unit is also an identity
//! arrow (`unit_arrow(u)`). Composition `g·h` is defined when `s(g) = r(h)`.

mod iso;
mod positive;
mod subset;

use std::collections::BTreeSet;

use thiserror::Error;

pub use iso::{find_isomorphism, IsoSearch};
pub use positive::{
    positive_type_check, proper_support_profile, pullback_positive_type, PositiveTypeFn,
    PositivityVerdict, SupportProfile,
};
pub use subset::{
    check_subgroupoid, contains_diagonal, diagonal, fib_count, is_bisection, is_subgroupoid,
    SubgroupoidFailure,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupoidError {
    #[error("malformed tables: {0}")]
    Shape(String),
    #[error("arrow {0} is listed as a unit but is not an identity")]
    BadUnit(usize),
    #[error("composition given for non-composable pair ({0}, {1})")]
    CompositionDomain(usize, usize),
    #[error("composition missing for composable pair ({0}, {1})")]
    MissingComposition(usize, usize),
    #[error("composition of ({0}, {1}) has wrong source or range")]
    CompositionEndpoints(usize, usize),
    #[error("unit is not neutral for arrow {0}")]
    UnitNotNeutral(usize),
    #[error("inverse axiom fails for arrow {0}")]
    Inverse(usize),
    #[error("not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("unit {0} out of range")]
    InvalidUnit(usize),
    #[error("arrow {0} out of range")]
    InvalidArrow(usize),
    #[error("non-finite value at arrow {0}")]
    NonFinite(usize),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
}

/// Read access shared by stored groupoids and product views.
pub trait Groupoid {
    fn arrow_count(&self) -> usize;
    fn unit_count(&self) -> usize;
    /// Source unit index.
    fn source(&self, g: usize) -> usize;
    /// Range unit index.
    fn range(&self, g: usize) -> usize;
    fn inverse(&self, g: usize) -> usize;
    /// `g·h`, defined when `source(g) == range(h)`.
    fn compose(&self, g: usize, h: usize) -> Option<usize>;
    /// Identity arrow of unit `u`.
    fn unit_arrow(&self, u: usize) -> usize;
    /// Unit index of `g` if it is an identity arrow.
    fn unit_of(&self, g: usize) -> Option<usize>;
    /// `G_u`: arrows with source `u`, ascending.
    fn source_fiber(&self, u: usize) -> Vec<usize>;
    /// `G^u`: arrows with range `u`, ascending.
    fn range_fiber(&self, u: usize) -> Vec<usize>;

    fn is_unit(&self, g: usize) -> bool {
        self.unit_of(g).is_some()
    }
}

/// A groupoid with all structure maps tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    unit_arrows: Vec<usize>,
    unit_index: Vec<Option<usize>>,
    s: Vec<usize>,
    r: Vec<usize>,
    inv: Vec<usize>,
    range_fibers: Vec<Vec<usize>>,
    source_fibers: Vec<Vec<usize>>,
    pos_in_range: Vec<usize>,
    /// `comp[g][pos_in_range[h]] = g·h` for `h` with range `s(g)`.
    comp: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid from structure maps given over unit indices.
    pub fn build(
        unit_arrows: Vec<usize>,
        s: Vec<usize>,
        r: Vec<usize>,
        inv: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let g = Self::assemble(unit_arrows, s, r, inv, |g, h| Ok(compose(g, h)))?;
        g.validate()?;
        Ok(g)
    }

    fn assemble(
        unit_arrows: Vec<usize>,
        s: Vec<usize>,
        r: Vec<usize>,
        inv: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> Result<usize, GroupoidError>,
    ) -> Result<Self, GroupoidError> {
        let n = s.len();
        if r.len() != n || inv.len() != n {
            return Err(GroupoidError::Shape("s, r and inv differ in length".into()));
        }
        let units = unit_arrows.len();
        let mut unit_index = vec![None; n];
        for (u, &a) in unit_arrows.iter().enumerate() {
            if a >= n {
                return Err(GroupoidError::InvalidArrow(a));
            }
            if unit_index[a].replace(u).is_some() {
                return Err(GroupoidError::Shape(format!(
                    "arrow {a} listed twice as a unit"
                )));
            }
        }
        for g in 0..n {
            if s[g] >= units || r[g] >= units {
                return Err(GroupoidError::Shape(format!(
                    "arrow {g} has source or range outside the unit set"
                )));
            }
            if inv[g] >= n {
                return Err(GroupoidError::InvalidArrow(inv[g]));
            }
        }
        for (u, &a) in unit_arrows.iter().enumerate() {
            if s[a] != u || r[a] != u {
                return Err(GroupoidError::BadUnit(a));
            }
        }
        let mut range_fibers = vec![Vec::new(); units];
        let mut source_fibers = vec![Vec::new(); units];
        let mut pos_in_range = vec![0; n];
        for g in 0..n {
            pos_in_range[g] = range_fibers[r[g]].len();
            range_fibers[r[g]].push(g);
            source_fibers[s[g]].push(g);
        }
        let mut comp = Vec::with_capacity(n);
        for g in 0..n {
            let row = range_fibers[s[g]]
                .iter()
                .map(|&h| {
                    let gh = compose(g, h)?;
                    if gh >= n {
                        return Err(GroupoidError::InvalidArrow(gh));
                    }
                    Ok(gh)
                })
                .collect::<Result<Vec<_>, _>>()?;
            comp.push(row);
        }
        Ok(FiniteGroupoid {
            unit_arrows,
            unit_index,
            s,
            r,
            inv,
            range_fibers,
            source_fibers,
            pos_in_range,
            comp,
            labels: None,
        })
    }

    /// Validates raw tables where units, sources and ranges are arrow ids and
    /// the composition is a list of `(g, h, g·h)` triples.
    pub fn from_tables(
        arrow_count: usize,
        units: Vec<usize>,
        s: Vec<usize>,
        r: Vec<usize>,
        inv: Vec<usize>,
        comp: &[(usize, usize, usize)],
    ) -> Result<Self, GroupoidError> {
        if s.len() != arrow_count || r.len() != arrow_count || inv.len() != arrow_count {
            return Err(GroupoidError::Shape(format!(
                "s, r and inv must have {arrow_count} entries"
            )));
        }
        let mut unit_index = vec![None; arrow_count];
        for (u, &a) in units.iter().enumerate() {
            if a >= arrow_count {
                return Err(GroupoidError::InvalidArrow(a));
            }
            unit_index[a] = Some(u);
        }
        let to_unit = |a: usize| -> Result<usize, GroupoidError> {
            if a >= arrow_count {
                return Err(GroupoidError::InvalidArrow(a));
            }
            unit_index[a].ok_or(GroupoidError::BadUnit(a))
        };
        let su = s
            .iter()
            .map(|&a| to_unit(a))
            .collect::<Result<Vec<_>, _>>()?;
        let ru = r
            .iter()
            .map(|&a| to_unit(a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut table = std::collections::HashMap::new();
        for &(g, h, gh) in comp {
            for a in [g, h, gh] {
                if a >= arrow_count {
                    return Err(GroupoidError::InvalidArrow(a));
                }
            }
            if su[g] != ru[h] {
                return Err(GroupoidError::CompositionDomain(g, h));
            }
            if table.insert((g, h), gh).is_some() {
                return Err(GroupoidError::Shape(format!(
                    "composition of ({g}, {h}) given twice"
                )));
            }
        }
        let mut g = Self::assemble(units, su, ru, inv, |g, h| {
            table
                .get(&(g, h))
                .copied()
                .ok_or(GroupoidError::MissingComposition(g, h))
        })?;
        g.validate()?;
        g.labels = None;
        Ok(g)
    }

    /// Checks the category axioms and the inverse axioms.
    pub fn validate(&self) -> Result<(), GroupoidError> {
        let n = self.arrow_count();
        for g in 0..n {
            for (i, &h) in self.range_fibers[self.s[g]].iter().enumerate() {
                let gh = self.comp[g][i];
                if self.s[gh] != self.s[h] || self.r[gh] != self.r[g] {
                    return Err(GroupoidError::CompositionEndpoints(g, h));
                }
            }
        }
        for g in 0..n {
            let left = self.unit_arrows[self.r[g]];
            let right = self.unit_arrows[self.s[g]];
            if self.comp_unchecked(left, g) != g || self.comp_unchecked(g, right) != g {
                return Err(GroupoidError::UnitNotNeutral(g));
            }
        }
        for g in 0..n {
            let gi = self.inv[g];
            if self.inv[gi] != g
                || self.s[gi] != self.r[g]
                || self.r[gi] != self.s[g]
                || self.comp_unchecked(g, gi) != self.unit_arrows[self.r[g]]
                || self.comp_unchecked(gi, g) != self.unit_arrows[self.s[g]]
            {
                return Err(GroupoidError::Inverse(g));
            }
        }
        for g in 0..n {
            for (i, &h) in self.range_fibers[self.s[g]].iter().enumerate() {
                let gh = self.comp[g][i];
                for &k in &self.range_fibers[self.s[h]] {
                    let left = self.comp_unchecked(gh, k);
                    let hk = self.comp_unchecked(h, k);
                    if left != self.comp_unchecked(g, hk) {
                        return Err(GroupoidError::NonAssociative(g, h, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn comp_unchecked(&self, g: usize, h: usize) -> usize {
        self.comp[g][self.pos_in_range[h]]
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupoidError> {
        if labels.len() != self.arrow_count() {
            return Err(GroupoidError::Shape("one label per arrow required".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => format!("#{g}"),
        }
    }

    pub fn unit_arrows(&self) -> &[usize] {
        &self.unit_arrows
    }

    /// The empty groupoid.
    pub fn empty() -> Self {
        Self::assemble(vec![], vec![], vec![], vec![], |_, _| unreachable!()).expect("empty")
    }

    /// A finite group as a one-unit groupoid; arrow ids are element ids.
    pub fn from_group(g: &crate::grp::FiniteGroup) -> Self {
        let n = g.order();
        let mut s = vec![0; n];
        s.fill(0);
        Self::build(
            vec![g.identity()],
            s.clone(),
            s,
            (0..n).map(|x| g.inv(x)).collect(),
            |x, y| g.mul(x, y),
        )
        .expect("group tables give a groupoid")
    }

    /// The pair groupoid `X × X`; arrow `(x, y)` has id `x·n + y`, range `x`, source `y`.
    pub fn pair(n: usize) -> Self {
        let units = (0..n).map(|x| x * n + x).collect();
        let s = (0..n * n).map(|a| a % n).collect();
        let r = (0..n * n).map(|a| a / n).collect();
        let inv = (0..n * n).map(|a| (a % n) * n + a / n).collect();
        Self::build(units, s, r, inv, |g, h| (g / n) * n + h % n).expect("pair groupoid")
    }

    /// The full subgroupoid `G(K)` on units `K`, with the embedding of its arrows.
    pub fn reduction(&self, k: &[usize]) -> Result<(FiniteGroupoid, Vec<usize>), GroupoidError> {
        let mut new_unit = vec![None; self.unit_count()];
        let mut kept_units: BTreeSet<usize> = BTreeSet::new();
        for &u in k {
            if u >= self.unit_count() {
                return Err(GroupoidError::InvalidUnit(u));
            }
            kept_units.insert(u);
        }
        for (i, &u) in kept_units.iter().enumerate() {
            new_unit[u] = Some(i);
        }
        let arrows: Vec<usize> = (0..self.arrow_count())
            .filter(|&g| new_unit[self.s[g]].is_some() && new_unit[self.r[g]].is_some())
            .collect();
        let mut new_id = vec![usize::MAX; self.arrow_count()];
        for (i, &g) in arrows.iter().enumerate() {
            new_id[g] = i;
        }
        let sub = Self::build(
            kept_units
                .iter()
                .map(|&u| new_id[self.unit_arrows[u]])
                .collect(),
            arrows
                .iter()
                .map(|&g| new_unit[self.s[g]].unwrap())
                .collect(),
            arrows
                .iter()
                .map(|&g| new_unit[self.r[g]].unwrap())
                .collect(),
            arrows.iter().map(|&g| new_id[self.inv[g]]).collect(),
            |a, b| new_id[self.comp_unchecked(arrows[a], arrows[b])],
        )?;
        let sub = match &self.labels {
            Some(l) => sub.with_labels(arrows.iter().map(|&g| l[g].clone()).collect())?,
            None => sub,
        };
        Ok((sub, arrows))
    }

    /// Materialized product groupoid; arrow `(g, h)` has id `g·|H| + h`.
    pub fn product(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let view = ProductView::new(self, other);
        let n = view.arrow_count();
        let units = (0..view.unit_count()).map(|u| view.unit_arrow(u)).collect();
        Self::build(
            units,
            (0..n).map(|a| view.source(a)).collect(),
            (0..n).map(|a| view.range(a)).collect(),
            (0..n).map(|a| view.inverse(a)).collect(),
            |a, b| view.compose(a, b).expect("composable"),
        )
        .expect("product of groupoids is a groupoid")
    }
}

impl Groupoid for FiniteGroupoid {
    fn arrow_count(&self) -> usize {
        self.s.len()
    }

    fn unit_count(&self) -> usize {
        self.unit_arrows.len()
    }

    fn source(&self, g: usize) -> usize {
        self.s[g]
    }

    fn range(&self, g: usize) -> usize {
        self.r[g]
    }

    fn inverse(&self, g: usize) -> usize {
        self.inv[g]
    }

    fn compose(&self, g: usize, h: usize) -> Option<usize> {
        (self.s[g] == self.r[h]).then(|| self.comp_unchecked(g, h))
    }

    fn unit_arrow(&self, u: usize) -> usize {
        self.unit_arrows[u]
    }

    fn unit_of(&self, g: usize) -> Option<usize> {
        self.unit_index[g]
    }

    fn source_fiber(&self, u: usize) -> Vec<usize> {
        self.source_fibers[u].clone()
    }

    fn range_fiber(&self, u: usize) -> Vec<usize> {
        self.range_fibers[u].clone()
    }
}

/// `G × H` without materializing its tables; arrow `(g, h)` has id
/// `g·|H| + h` and unit `(u, v)` has index `u·|H⁽⁰⁾| + v`.
#[derive(Clone, Copy, Debug)]
pub struct ProductView<'a, A: Groupoid, B: Groupoid> {
    pub left: &'a A,
    pub right: &'a B,
}

impl<'a, A: Groupoid, B: Groupoid> ProductView<'a, A, B> {
    pub fn new(left: &'a A, right: &'a B) -> Self {
        ProductView { left, right }
    }

    pub fn pair(&self, g: usize, h: usize) -> usize {
        g * self.right.arrow_count() + h
    }

    pub fn split(&self, a: usize) -> (usize, usize) {
        let m = self.right.arrow_count();
        (a / m, a % m)
    }

    pub fn unit_pair(&self, u: usize, v: usize) -> usize {
        u * self.right.unit_count() + v
    }

    pub fn split_unit(&self, u: usize) -> (usize, usize) {
        let m = self.right.unit_count();
        (u / m, u % m)
    }
}

impl<A: Groupoid, B: Groupoid> Groupoid for ProductView<'_, A, B> {
    fn arrow_count(&self) -> usize {
        self.left.arrow_count() * self.right.arrow_count()
    }

    fn unit_count(&self) -> usize {
        self.left.unit_count() * self.right.unit_count()
    }

    fn source(&self, a: usize) -> usize {
        let (g, h) = self.split(a);
        self.unit_pair(self.left.source(g), self.right.source(h))
    }

    fn range(&self, a: usize) -> usize {
        let (g, h) = self.split(a);
        self.unit_pair(self.left.range(g), self.right.range(h))
    }

    fn inverse(&self, a: usize) -> usize {
        let (g, h) = self.split(a);
        self.pair(self.left.inverse(g), self.right.inverse(h))
    }

    fn compose(&self, a: usize, b: usize) -> Option<usize> {
        let (g1, h1) = self.split(a);
        let (g2, h2) = self.split(b);
        Some(self.pair(self.left.compose(g1, g2)?, self.right.compose(h1, h2)?))
    }

    fn unit_arrow(&self, u: usize) -> usize {
        let (x, y) = self.split_unit(u);
        self.pair(self.left.unit_arrow(x), self.right.unit_arrow(y))
    }

    fn unit_of(&self, a: usize) -> Option<usize> {
        let (g, h) = self.split(a);
        Some(self.unit_pair(self.left.unit_of(g)?, self.right.unit_of(h)?))
    }

    fn source_fiber(&self, u: usize) -> Vec<usize> {
        let (x, y) = self.split_unit(u);
        let right = self.right.source_fiber(y);
        let mut out = Vec::new();
        for g in self.left.source_fiber(x) {
            for &h in &right {
                out.push(self.pair(g, h));
            }
        }
        out
    }

    fn range_fiber(&self, u: usize) -> Vec<usize> {
        let (x, y) = self.split_unit(u);
        let right = self.right.range_fiber(y);
        let mut out = Vec::new();
        for g in self.left.range_fiber(x) {
            for &h in &right {
                out.push(self.pair(g, h));
            }
        }
        out
    }
}

/// Checks that `map` (arrows of `G` to arrows of `H`) is a groupoid homomorphism.
pub fn check_homomorphism(
    g: &impl Groupoid,
    h: &impl Groupoid,
    map: &[usize],
) -> Result<(), GroupoidError> {
    if map.len() != g.arrow_count() {
        return Err(GroupoidError::NotHomomorphism(format!(
            "map has {} entries for {} arrows",
            map.len(),
            g.arrow_count()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&x| x >= h.arrow_count()) {
        return Err(GroupoidError::InvalidArrow(bad));
    }
    for u in 0..g.unit_count() {
        if !h.is_unit(map[g.unit_arrow(u)]) {
            return Err(GroupoidError::NotHomomorphism(format!(
                "unit {u} is not sent to a unit"
            )));
        }
    }
    for a in 0..g.arrow_count() {
        let su = h.unit_of(map[g.unit_arrow(g.source(a))]).expect("checked");
        let ru = h.unit_of(map[g.unit_arrow(g.range(a))]).expect("checked");
        if h.source(map[a]) != su || h.range(map[a]) != ru {
            return Err(GroupoidError::NotHomomorphism(format!(
                "arrow {a} is not sent over its endpoints"
            )));
        }
    }
    for a in 0..g.arrow_count() {
        for b in g.range_fiber(g.source(a)) {
            let ab = g.compose(a, b).expect("composable");
            if h.compose(map[a], map[b]) != Some(map[ab]) {
                return Err(GroupoidError::NotHomomorphism(format!(
                    "composition of ({a}, {b}) is not preserved"
                )));
            }
        }
    }
    Ok(())
}
