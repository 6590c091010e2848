//! The `⊕Z/2` example and the projection used for positive-type pullbacks.

use serde::Serialize;

use super::{build_afs, bundle, check_depth, AfsTruncation, HlsError};
use crate::gpd::{
    check_homomorphism, find_isomorphism, FiniteGroupoid, Groupoid, IsoSearch, ProductView,
};
use crate::grp::{Element, GroupHandle, QuotientChain};
use crate::pact::{build_transformation_groupoid, PartialActionSpec};

/// HLS truncation at depth `N` with an extra unit `⊤ = N+1` whose fiber is a
/// second copy of `Γ_N`, standing in for the level at infinity.
pub fn build_hls_with_top(chain: &QuotientChain, n: usize) -> Result<FiniteGroupoid, HlsError> {
    check_depth(chain, n)?;
    let mut groups: Vec<_> = (0..=n).map(|k| chain.level(k)).collect::<Result<_, _>>()?;
    groups.push(chain.level(n)?);
    let (g, _, arrows) = bundle(&groups)?;
    let labels = arrows
        .iter()
        .map(|&(k, x)| {
            if k == n + 1 {
                format!("(⊤, {x})")
            } else {
                format!("({k}, {x})")
            }
        })
        .collect();
    Ok(g.with_labels(labels)?)
}

/// The trivial partial action of `Γ_N` on `{0, …, N, ⊤}`: `γ` fixes `⊤` and
/// every `m` with `γ ∈ ⟨q_N(g_0), …, q_N(g_{m-1})⟩`, and is undefined elsewhere.
///
/// For `⊕Z/2` this is the domain `{m : m > max supp γ} ∪ {⊤}`.
pub fn top_partial_action(chain: &QuotientChain, n: usize) -> Result<PartialActionSpec, HlsError> {
    check_depth(chain, n)?;
    let level = &chain.levels()[n];
    let spans: Vec<Vec<bool>> = (0..=n)
        .map(|m| {
            let gens: Vec<usize> = level.gen_images.iter().take(m).copied().collect();
            let sub = level.group.generated_subgroup(&gens);
            let mut mask = vec![false; level.group.order()];
            for x in sub {
                mask[x] = true;
            }
            mask
        })
        .collect();
    let group = GroupHandle::finite(level.group.clone());
    let candidates: Vec<Element> = (0..level.group.order()).map(Element::Finite).collect();
    let act = |g: &Element, x: usize| {
        let Element::Finite(g) = *g else { return None };
        (x == n + 1 || spans[x][g]).then_some(x)
    };
    PartialActionSpec::restriction(group, n + 2, &candidates, act).map_err(HlsError::Pact)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoCertificate {
    pub depth: usize,
    pub hls_arrows: usize,
    pub action_arrows: usize,
    /// `Found`, `NotIsomorphic` or `Exhausted`.
    pub outcome: String,
    pub reason: Option<String>,
    /// HLS arrow label → transformation-groupoid arrow label.
    pub arrow_map: Vec<(String, String)>,
    pub nodes: usize,
    /// Every layer is a finite abelian group of exponent dividing 2.
    pub example_shape: bool,
}

pub fn hls_vs_partial_action_iso(
    chain: &QuotientChain,
    n: usize,
    budget: usize,
) -> Result<IsoCertificate, HlsError> {
    let hls = build_hls_with_top(chain, n)?;
    let pa = top_partial_action(chain, n)?;
    let tg = build_transformation_groupoid(&pa).map_err(HlsError::Pact)?;
    let example_shape = chain.levels()[..=n].iter().all(|l| {
        l.group.is_abelian()
            && (0..l.group.order()).all(|x| l.group.mul(x, x) == l.group.identity())
    });
    let mut cert = IsoCertificate {
        depth: n,
        hls_arrows: hls.arrow_count(),
        action_arrows: tg.groupoid.arrow_count(),
        outcome: String::new(),
        reason: None,
        arrow_map: Vec::new(),
        nodes: 0,
        example_shape,
    };
    match find_isomorphism(&hls, &tg.groupoid, budget) {
        IsoSearch::Found {
            arrow_map, nodes, ..
        } => {
            check_homomorphism(&hls, &tg.groupoid, &arrow_map)?;
            cert.outcome = "Found".into();
            cert.nodes = nodes;
            cert.arrow_map = arrow_map
                .iter()
                .enumerate()
                .map(|(a, &b)| (hls.label(a), tg.groupoid.label(b)))
                .collect();
        }
        IsoSearch::NotIsomorphic { reason, nodes } => {
            cert.outcome = "NotIsomorphic".into();
            cert.reason = Some(reason);
            cert.nodes = nodes;
        }
        IsoSearch::Exhausted { budget } => {
            cert.outcome = "Exhausted".into();
            cert.reason = Some(format!("budget of {budget} nodes spent"));
            cert.nodes = budget;
        }
    }
    Ok(cert)
}

/// The level-`M` fiber `Γ_M ⋉ Γ_M` of an AFS truncation mapped into
/// `G × G` by `(γ, x) ↦ (π̂_{n,M}(γ, x), (γ, x))`.
///
/// Level `M` plays the role of the level at infinity.
#[derive(Clone, Debug)]
pub struct Fix1Pullback {
    pub afs: AfsTruncation,
    pub domain: FiniteGroupoid,
    /// Domain arrow → AFS arrow.
    pub embedding: Vec<usize>,
    /// Domain arrow → product-view id in `G × G`.
    pub map: Vec<usize>,
    pub level: usize,
}

pub fn fix1_pullback(chain: &QuotientChain, m: usize, n: usize) -> Result<Fix1Pullback, HlsError> {
    check_depth(chain, m)?;
    if n > m {
        return Err(HlsError::InvalidLevel { level: n, depth: m });
    }
    let afs = build_afs(chain, m)?;
    let (domain, embedding) = afs.groupoid.reduction(&afs.level_units(m))?;
    let view = ProductView::new(&afs.groupoid, &afs.groupoid);
    let map = embedding
        .iter()
        .map(|&a| {
            let (_, g, x) = afs.arrows[a];
            let proj = afs.arrow_id(
                n,
                chain.factor_image(n, m, g)?,
                chain.factor_image(n, m, x)?,
            );
            Ok(view.pair(proj, a))
        })
        .collect::<Result<Vec<_>, HlsError>>()?;
    check_homomorphism(&domain, &view, &map)?;
    Ok(Fix1Pullback {
        level: n,
        afs,
        domain,
        embedding,
        map,
    })
}
