//! Forcing data showing that HLS/AFS groupoids of infinite residually finite
//! groups fail property Δ.
//!
//! Any open subgroupoid `H ⊆ G × G` containing the diagonal contains, for
//! each generator `s`, all pairs `((n, π_n(s), x), (∞, s, x'))` near the
//! diagonal once `n` is large. Composing along a factorization
//! `γ = γ₁⋯γ_l` puts `((n, π_n(γ), y_n), (∞, γ, y₀))` into `H` for every
//! `γ` in the ball, all with the same source pair.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{build_afs, check_depth, HlsError};
use crate::gpd::Groupoid;
use crate::grp::{Element, QuotientChain, Word};

pub const WITNESS_SCOPE: &str = "lower bound only: every open subgroupoid of G×G containing the \
diagonal must contain the listed pairs once n is past the cover levels; no claim is made about \
any particular H";

/// `(n, g, x)`: the AFS arrow from `(n, x)` to `(n, g·x)`.
pub type FiniteArrow = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorStep {
    /// Index into `S`.
    pub generator: usize,
    pub inverse: bool,
    pub finite: FiniteArrow,
    /// `γ_j` as a canonical word.
    pub infinity_gamma: Word,
    /// `γ_{j+1}⋯γ_l · y₀` as a canonical word.
    pub infinity_point: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedPair {
    pub gamma: String,
    /// `(n, π_n(γ), y_n)`.
    pub finite: FiniteArrow,
    /// `(∞, γ, y₀)` with `γ` canonical and `y₀` the identity sequence.
    pub infinity_gamma: Word,
    pub steps: Vec<GeneratorStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaViolationCertificate {
    pub generators: Vec<Word>,
    pub radius: i64,
    pub level: usize,
    /// `y_n`, the identity of `Γ_n`.
    pub basepoint: usize,
    pub pairs: Vec<ForcedPair>,
    pub fiber_lower_bound: usize,
    pub scope: String,
}

fn element_word(chain: &QuotientChain, x: &Element) -> Result<Word, HlsError> {
    Ok(chain.base().word_of(x)?)
}

pub fn delta_violation_witness(
    chain: &QuotientChain,
    s: &[Word],
    radius: i64,
    n: usize,
) -> Result<DeltaViolationCertificate, HlsError> {
    check_depth(chain, n)?;
    let base = chain.base();
    let gens: Vec<Element> = s
        .iter()
        .map(|w| base.canonical(w))
        .collect::<Result<_, _>>()?;
    let level = &chain.levels()[n].group;
    let y_n = level.identity();
    let mut pairs = Vec::new();
    for entry in base.ball(s, radius)? {
        let letters = entry.path.letters();
        let mut steps = Vec::with_capacity(letters.len());
        // suffix products γ_{j+1}⋯γ_l, built right to left
        let mut suffix = base.identity();
        for l in letters.iter().rev() {
            let gj = if l.inverse {
                base.inv(&gens[l.gen])?
            } else {
                gens[l.gen].clone()
            };
            let gj_word = element_word(chain, &gj)?;
            let point = element_word(chain, &suffix)?;
            steps.push(GeneratorStep {
                generator: l.gen,
                inverse: l.inverse,
                finite: (
                    n,
                    chain.quotient_image(n, &gj_word)?,
                    level.mul(chain.quotient_image(n, &point)?, y_n),
                ),
                infinity_gamma: gj_word,
                infinity_point: point,
            });
            suffix = base.mul(&gj, &suffix)?;
        }
        steps.reverse();
        pairs.push(ForcedPair {
            gamma: base.format_word(&entry.word),
            finite: (n, chain.quotient_image(n, &entry.word)?, y_n),
            infinity_gamma: entry.word,
            steps,
        });
    }
    let cert = DeltaViolationCertificate {
        generators: s.to_vec(),
        radius,
        level: n,
        basepoint: y_n,
        fiber_lower_bound: pairs.len(),
        pairs,
        scope: WITNESS_SCOPE.into(),
    };
    cert.verify(chain)?;
    Ok(cert)
}

impl DeltaViolationCertificate {
    /// Replays every pair: finite components through the AFS composition at
    /// level `n`, infinite components by multiplication in the base group.
    pub fn verify(&self, chain: &QuotientChain) -> Result<(), HlsError> {
        let fail = |m: String| Err(HlsError::Replay(m));
        check_depth(chain, self.level)?;
        let base = chain.base();
        let afs = build_afs(chain, self.level)?;
        let g = &afs.groupoid;
        let n = self.level;
        let id = |a: &FiniteArrow| -> Result<usize, HlsError> {
            let order = chain.levels()[n].group.order();
            if a.0 != n || a.1 >= order || a.2 >= order {
                return Err(HlsError::Replay(format!("arrow {a:?} is not at level {n}")));
            }
            Ok(afs.arrow_id(a.0, a.1, a.2))
        };
        let source_unit = afs.unit_id(n, self.basepoint);
        let mut seen = BTreeSet::new();
        for p in &self.pairs {
            let target = id(&p.finite)?;
            if g.source(target) != source_unit {
                return fail(format!("{}: finite source is not y_n", p.gamma));
            }
            if !seen.insert(base.canonical(&p.infinity_gamma)?) {
                return fail(format!("{}: repeated group element", p.gamma));
            }
            let mut acc = g.unit_arrow(source_unit);
            let mut gamma = base.identity();
            let mut point = base.identity();
            for st in p.steps.iter().rev() {
                let step = id(&st.finite)?;
                acc = g.compose(step, acc).ok_or_else(|| {
                    HlsError::Replay(format!("{}: steps are not composable", p.gamma))
                })?;
                if base.canonical(&st.infinity_point)? != point {
                    return fail(format!("{}: ∞ step source mismatch", p.gamma));
                }
                let gj = base.canonical(&st.infinity_gamma)?;
                let s = base.canonical(&self.generators[st.generator])?;
                let expected = if st.inverse { base.inv(&s)? } else { s };
                if gj != expected {
                    return fail(format!("{}: step is not a generator", p.gamma));
                }
                gamma = base.mul(&gj, &gamma)?;
                point = gamma.clone();
            }
            if acc != target {
                return fail(format!(
                    "{}: finite steps do not compose to the pair",
                    p.gamma
                ));
            }
            if gamma != base.canonical(&p.infinity_gamma)? {
                return fail(format!("{}: ∞ steps do not multiply to γ", p.gamma));
            }
        }
        if self.fiber_lower_bound != self.pairs.len() {
            return fail("bound differs from the number of pairs".into());
        }
        Ok(())
    }
}
