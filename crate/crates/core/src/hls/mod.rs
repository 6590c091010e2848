//! Finite truncations of HLS and AFS groupoids of a quotient chain.
//!
//! The HLS truncation at depth `N` is the group bundle `⨿_{k≤N} {k}×Γ_k`.
//! The AFS truncation replaces each fiber by `Γ_k ⋉ Γ_k` (left
//! multiplication), i.e. the transformation groupoid on the level-`k` points
//! of `X̂`. The level at infinity is never materialized: certificates refer
//! to it through canonical words of the base group.

mod equicont;
mod example;
mod local;
mod witness;

use serde::Serialize;
use thiserror::Error;

use crate::gpd::{FiniteGroupoid, GroupoidError};
use crate::grp::{GroupError, QuotientChain};

pub use equicont::{equicontinuity_certificate, EquicontinuityCertificate, GammaTrace};
pub use example::{
    build_hls_with_top, fix1_pullback, hls_vs_partial_action_iso, top_partial_action, Fix1Pullback,
    IsoCertificate,
};
pub use local::{locally_finite_delta_bar_h, span_f_chain, DeltaBarAudit, LevelBookkeeping};
pub use witness::{
    delta_violation_witness, DeltaViolationCertificate, ForcedPair, GeneratorStep, WITNESS_SCOPE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HlsError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("depth {requested} exceeds chain depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
    #[error("chain coherence: {0}")]
    Coherence(String),
    #[error("level {level} is above the truncation depth {depth}")]
    InvalidLevel { level: usize, depth: usize },
    #[error("cover: {0}")]
    Cover(String),
    #[error("basepoint: {0}")]
    Basepoint(String),
    #[error("F-chain: {0}")]
    FChain(String),
    #[error("π_{level}(F_{level}) misses element {element} of Γ_{level}; the diagonal arrow ({level}, {element}) is not covered")]
    DiagonalMissing { level: usize, element: usize },
    #[error(transparent)]
    Pact(#[from] crate::pact::PactError),
    #[error("witness replay: {0}")]
    Replay(String),
}

fn check_depth(chain: &QuotientChain, n: usize) -> Result<(), HlsError> {
    if n > chain.depth() {
        return Err(HlsError::DepthExceeded {
            requested: n,
            depth: chain.depth(),
        });
    }
    Ok(())
}

/// An arrow of a truncation tagged by its level and an element of `Γ_level`.
pub trait Levelled {
    fn groupoid(&self) -> &FiniteGroupoid;
    /// `(k, g)` with `g ∈ Γ_k` the group component of the arrow.
    fn level_element(&self, arrow: usize) -> (usize, usize);
}

/// `⨿_{k≤N} {k}×Γ_k`; arrow `(k, g)` has id `offsets[k] + g`.
#[derive(Clone, Debug)]
pub struct HlsTruncation {
    pub chain: QuotientChain,
    pub depth: usize,
    pub groupoid: FiniteGroupoid,
    pub offsets: Vec<usize>,
    /// Arrow → `(k, g)`.
    pub arrows: Vec<(usize, usize)>,
}

impl HlsTruncation {
    pub fn arrow_id(&self, k: usize, g: usize) -> usize {
        self.offsets[k] + g
    }

    pub fn level_of(&self, arrow: usize) -> usize {
        self.arrows[arrow].0
    }
}

impl Levelled for HlsTruncation {
    fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    fn level_element(&self, arrow: usize) -> (usize, usize) {
        self.arrows[arrow]
    }
}

/// Group bundle over `levels` (one unit each); arrow `(i, g)` has id `offsets[i] + g`.
fn bundle(
    groups: &[&crate::grp::FiniteGroup],
) -> Result<(FiniteGroupoid, Vec<usize>, Vec<(usize, usize)>), HlsError> {
    let mut offsets = Vec::with_capacity(groups.len());
    let mut arrows = Vec::new();
    for (k, g) in groups.iter().enumerate() {
        offsets.push(arrows.len());
        arrows.extend((0..g.order()).map(|x| (k, x)));
    }
    let units = groups
        .iter()
        .zip(&offsets)
        .map(|(g, o)| o + g.identity())
        .collect();
    let s: Vec<usize> = arrows.iter().map(|a| a.0).collect();
    let inv = arrows
        .iter()
        .map(|&(k, x)| offsets[k] + groups[k].inv(x))
        .collect();
    let comp = |a: usize, b: usize| {
        let (k, x) = arrows[a];
        offsets[k] + groups[k].mul(x, arrows[b].1)
    };
    let g = FiniteGroupoid::build(units, s.clone(), s, inv, comp)?;
    let labels = arrows.iter().map(|&(k, x)| format!("({k}, {x})")).collect();
    Ok((g.with_labels(labels)?, offsets, arrows))
}

pub fn build_hls(chain: &QuotientChain, n: usize) -> Result<HlsTruncation, HlsError> {
    check_depth(chain, n)?;
    let groups: Vec<_> = (0..=n).map(|k| chain.level(k)).collect::<Result<_, _>>()?;
    let (groupoid, offsets, arrows) = bundle(&groups)?;
    Ok(HlsTruncation {
        chain: chain.truncate(n)?,
        depth: n,
        groupoid,
        offsets,
        arrows,
    })
}

/// Level-`k` fiber `Γ_k ⋉ Γ_k`: arrow `(k, g, x)` goes from `(k, x)` to `(k, gx)`
/// and has id `offsets[k] + g·|Γ_k| + x`; unit `(k, x)` has index
/// `unit_offsets[k] + x`.
#[derive(Clone, Debug)]
pub struct AfsTruncation {
    pub chain: QuotientChain,
    pub depth: usize,
    pub groupoid: FiniteGroupoid,
    pub offsets: Vec<usize>,
    pub unit_offsets: Vec<usize>,
    /// Arrow → `(k, g, x)`.
    pub arrows: Vec<(usize, usize, usize)>,
    /// Unit → point `(k, x)` of the truncated `X̂`.
    pub points: Vec<(usize, usize)>,
}

impl AfsTruncation {
    pub fn arrow_id(&self, k: usize, g: usize, x: usize) -> usize {
        let m = self.chain.levels()[k].group.order();
        self.offsets[k] + g * m + x
    }

    pub fn unit_id(&self, k: usize, x: usize) -> usize {
        self.unit_offsets[k] + x
    }

    /// Units of level `k`.
    pub fn level_units(&self, k: usize) -> Vec<usize> {
        let m = self.chain.levels()[k].group.order();
        (self.unit_offsets[k]..self.unit_offsets[k] + m).collect()
    }
}

impl Levelled for AfsTruncation {
    fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    fn level_element(&self, arrow: usize) -> (usize, usize) {
        let (k, g, _) = self.arrows[arrow];
        (k, g)
    }
}

pub fn build_afs(chain: &QuotientChain, n: usize) -> Result<AfsTruncation, HlsError> {
    check_depth(chain, n)?;
    let mut offsets = Vec::new();
    let mut unit_offsets = Vec::new();
    let mut arrows = Vec::new();
    let mut points = Vec::new();
    for k in 0..=n {
        let g = chain.level(k)?;
        offsets.push(arrows.len());
        unit_offsets.push(points.len());
        for a in 0..g.order() {
            for x in 0..g.order() {
                arrows.push((k, a, x));
            }
        }
        points.extend((0..g.order()).map(|x| (k, x)));
    }
    let group = |k: usize| &chain.levels()[k].group;
    let id = |k: usize, a: usize, x: usize| offsets[k] + a * group(k).order() + x;
    let units = points
        .iter()
        .map(|&(k, x)| id(k, group(k).identity(), x))
        .collect();
    let s = arrows
        .iter()
        .map(|&(k, _, x)| unit_offsets[k] + x)
        .collect();
    let r = arrows
        .iter()
        .map(|&(k, a, x)| unit_offsets[k] + group(k).mul(a, x))
        .collect();
    let inv = arrows
        .iter()
        .map(|&(k, a, x)| id(k, group(k).inv(a), group(k).mul(a, x)))
        .collect();
    let comp = |p: usize, q: usize| {
        let (k, a, _) = arrows[p];
        let (_, b, x) = arrows[q];
        id(k, group(k).mul(a, b), x)
    };
    let groupoid = FiniteGroupoid::build(units, s, r, inv, comp)?;
    let labels = arrows
        .iter()
        .map(|&(k, a, x)| format!("({k}, {a}, {x})"))
        .collect();
    Ok(AfsTruncation {
        chain: chain.truncate(n)?,
        depth: n,
        groupoid: groupoid.with_labels(labels)?,
        offsets,
        unit_offsets,
        arrows,
        points,
    })
}

/// A point `(n, h)` of the truncated `X̂`, `h ∈ Γ_n`.
pub type Point = (usize, usize);

/// `Sh(g) = {(n, h) : k ≤ n ≤ N, π̂_{k,n}(h) = g}`, ordered by level then element.
pub fn shadow(chain: &QuotientChain, k: usize, g: usize, n: usize) -> Result<Vec<Point>, HlsError> {
    check_depth(chain, n)?;
    if k > n {
        return Err(HlsError::InvalidLevel { level: k, depth: n });
    }
    if g >= chain.level(k)?.order() {
        return Err(GroupError::ElementOutOfRange(g).into());
    }
    let mut out = Vec::new();
    for m in k..=n {
        for h in 0..chain.level(m)?.order() {
            if chain.factor_image(k, m, h)? == g {
                out.push((m, h));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub level: usize,
    pub arrows: usize,
    /// Every isotropy arrow is a unit.
    pub principal: bool,
    /// Every arrow is isotropy (a group fiber).
    pub group: bool,
}

/// Per-level structure of a truncation, checked exhaustively.
pub fn fiber_reports(t: &impl Levelled, depth: usize) -> Vec<FiberReport> {
    use crate::gpd::Groupoid;
    let g = t.groupoid();
    (0..=depth)
        .map(|k| {
            let arrows: Vec<usize> = (0..g.arrow_count())
                .filter(|&a| t.level_element(a).0 == k)
                .collect();
            FiberReport {
                level: k,
                arrows: arrows.len(),
                principal: arrows
                    .iter()
                    .all(|&a| g.source(a) != g.range(a) || g.is_unit(a)),
                group: arrows.iter().all(|&a| g.source(a) == g.range(a)),
            }
        })
        .collect()
}
