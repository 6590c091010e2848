//! Equicontinuity of `Γ ↷ X̂` at a point, checked on a truncation.

use serde::Serialize;

use super::{check_depth, shadow, HlsError, Point};
use crate::grp::{QuotientChain, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaTrace {
    pub gamma: String,
    /// Index into the cover of the shadow containing `γ·x₀`.
    pub cover_index: usize,
    /// Number of points `γ·η`, `η ∈ V`, found inside that shadow.
    pub checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquicontinuityCertificate {
    pub depth: usize,
    pub radius: i64,
    /// Maximal level of the cover.
    pub level: usize,
    pub cover: Vec<Point>,
    pub basepoint: Vec<usize>,
    /// The single neighbourhood `V = Sh(π̂_k(x₀))`, used for every `γ`.
    pub v: Vec<Point>,
    pub trace: Vec<GammaTrace>,
    pub ok: bool,
    /// First failing `γ` and the offending point, if any.
    pub failure: Option<(String, Point)>,
}

/// Verifies `γ·({x₀}×V) ⊆ U` for all `γ` in the ball `B_S(l)`, where
/// `U = Δ ∪ ⋃ Sh(γ_i)²` and `V` is the shadow of `x₀` at the top cover level.
///
/// `x0[n] ∈ Γ_n` for `n ≤ N` must be a compatible sequence, and the cover
/// `(k_i, γ_i)` must contain every level-`N` point in one of its shadows.
pub fn equicontinuity_certificate(
    chain: &QuotientChain,
    n: usize,
    s: &[Word],
    radius: i64,
    x0: &[usize],
    cover: &[Point],
) -> Result<EquicontinuityCertificate, HlsError> {
    chain
        .check_coherence()
        .map_err(|e| HlsError::Coherence(e.to_string()))?;
    check_depth(chain, n)?;
    if x0.len() != n + 1 {
        return Err(HlsError::Basepoint(format!(
            "{} entries for levels 0..={n}",
            x0.len()
        )));
    }
    for (m, &x) in x0.iter().enumerate() {
        if x >= chain.level(m)?.order() {
            return Err(HlsError::Basepoint(format!("entry {x} outside Γ_{m}")));
        }
        if m > 0 && chain.factor_image(m - 1, m, x)? != x0[m - 1] {
            return Err(HlsError::Basepoint(format!(
                "levels {} and {m} disagree",
                m - 1
            )));
        }
    }
    if cover.is_empty() {
        return Err(HlsError::Cover("empty cover".into()));
    }
    for &(k, g) in cover {
        if k > n {
            return Err(HlsError::InvalidLevel { level: k, depth: n });
        }
        if g >= chain.level(k)?.order() {
            return Err(HlsError::Cover(format!("element {g} outside Γ_{k}")));
        }
    }
    for h in 0..chain.level(n)?.order() {
        let covered = cover
            .iter()
            .any(|&(k, g)| chain.factor_image(k, n, h).map(|x| x == g).unwrap_or(false));
        if !covered {
            return Err(HlsError::Cover(format!(
                "point ({n}, {h}) lies in no shadow"
            )));
        }
    }
    let level = cover.iter().map(|c| c.0).max().expect("non-empty");
    let v = shadow(chain, level, x0[level], n)?;
    let ball = chain.base().ball(s, radius)?;
    let mut trace = Vec::with_capacity(ball.len());
    let mut failure = None;
    for entry in &ball {
        let label = chain.base().format_word(&entry.word);
        let img: Vec<usize> = (0..=n)
            .map(|m| chain.quotient_image(m, &entry.word))
            .collect::<Result<_, _>>()?;
        let act = |(m, h): Point| (m, chain.levels()[m].group.mul(img[m], h));
        // γ·x₀ seen through its level-k_i image
        let idx = cover
            .iter()
            .position(|&(k, g)| chain.levels()[k].group.mul(img[k], x0[k]) == g);
        let Some(i) = idx else {
            failure = Some((label, (n, chain.levels()[n].group.mul(img[n], x0[n]))));
            break;
        };
        let (ki, gi) = cover[i];
        let mut checked = 0;
        for &p in &v {
            let (m, h) = act(p);
            if m < ki || chain.factor_image(ki, m, h)? != gi {
                failure = Some((label.clone(), (m, h)));
                break;
            }
            checked += 1;
        }
        trace.push(GammaTrace {
            gamma: label,
            cover_index: i,
            checked,
        });
        if failure.is_some() {
            break;
        }
    }
    Ok(EquicontinuityCertificate {
        depth: n,
        radius,
        level,
        cover: cover.to_vec(),
        basepoint: x0.to_vec(),
        v,
        ok: failure.is_none(),
        trace,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::GroupHandle;

    fn level_cover(chain: &QuotientChain, k: usize) -> Vec<Point> {
        (0..chain.level(k).unwrap().order())
            .map(|g| (k, g))
            .collect()
    }

    #[test]
    fn z_chain_level_one_cover() {
        let z = QuotientChain::z_chain(6);
        let s = z.base().standard_generators();
        let cert = equicontinuity_certificate(&z, 6, &s, 3, &[0; 7], &level_cover(&z, 1)).unwrap();
        assert!(cert.ok, "{:?}", cert.failure);
        assert_eq!(cert.trace.len(), 7);
        assert_eq!(cert.v, shadow(&z, 1, 0, 6).unwrap());
    }

    #[test]
    fn trivial_chain_is_vacuous() {
        let t = QuotientChain::trivial_chain(GroupHandle::free(2), 3).unwrap();
        let s = t.base().standard_generators();
        let cert = equicontinuity_certificate(&t, 3, &s, 2, &[0; 4], &[(0, 0)]).unwrap();
        assert!(cert.ok);
    }

    #[test]
    fn corrupted_factor_map_reported_first() {
        let z = QuotientChain::z_chain(2);
        let mut levels = z.levels().to_vec();
        levels[2].factor_map = Some(vec![0, 0, 0, 0]);
        let bad = QuotientChain::from_parts_unchecked(z.base().clone(), levels, true).unwrap();
        // even a malformed basepoint is not looked at before coherence
        let err = equicontinuity_certificate(&bad, 2, &[], 1, &[], &[]).unwrap_err();
        assert!(matches!(err, HlsError::Coherence(_)));
    }

    #[test]
    fn uncovered_level_and_bad_basepoint() {
        let z = QuotientChain::z_chain(2);
        let s = z.base().standard_generators();
        assert!(matches!(
            equicontinuity_certificate(&z, 2, &s, 1, &[0; 3], &[(1, 0)]),
            Err(HlsError::Cover(_))
        ));
        assert!(matches!(
            equicontinuity_certificate(&z, 2, &s, 1, &[0, 1, 2], &level_cover(&z, 1)),
            Err(HlsError::Basepoint(_))
        ));
    }
}
