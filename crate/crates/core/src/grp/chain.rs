//! Chains of finite quotients `Γ → Γ_k` with explicit factor maps.

use super::{Element, FiniteGroup, GroupError, GroupHandle, GroupKind, Word};

/// One level `Γ_k` of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLevel {
    pub group: FiniteGroup,
    /// `q_k` on the generators of the base group.
    pub gen_images: Vec<usize>,
    /// `φ: Γ_k → Γ_{k-1}` element-wise; `None` on level 0.
    pub factor_map: Option<Vec<usize>>,
}

/// A residual chain of finite quotients of a base group.
///
/// Faithfulness (trivial intersection of the kernels) cannot be verified
/// at finite depth; it is carried as a user assertion in `assumed_faithful`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientChain {
    base: GroupHandle,
    levels: Vec<ChainLevel>,
    pub assumed_faithful: bool,
}

impl QuotientChain {
    /// Validates images, homomorphism conditions and coherence of factor maps.
    pub fn new(
        base: GroupHandle,
        levels: Vec<ChainLevel>,
        assumed_faithful: bool,
    ) -> Result<Self, GroupError> {
        let chain = Self::from_parts_unchecked(base, levels, assumed_faithful)?;
        chain.validate_levels()?;
        chain.check_coherence()?;
        Ok(chain)
    }

    /// Builds a chain checking only shapes; use [`QuotientChain::check_coherence`]
    /// before trusting it.
    pub fn from_parts_unchecked(
        base: GroupHandle,
        levels: Vec<ChainLevel>,
        assumed_faithful: bool,
    ) -> Result<Self, GroupError> {
        if matches!(base.kind(), GroupKind::Chain(_)) {
            return Err(GroupError::Chain(
                "base of a chain cannot be a chain".into(),
            ));
        }
        if levels.is_empty() {
            return Err(GroupError::Chain("chain has no levels".into()));
        }
        for (k, lvl) in levels.iter().enumerate() {
            if lvl.gen_images.len() != base.rank() {
                return Err(GroupError::Chain(format!(
                    "level {k}: {} generator images for rank {}",
                    lvl.gen_images.len(),
                    base.rank()
                )));
            }
            if let Some(&bad) = lvl.gen_images.iter().find(|&&x| x >= lvl.group.order()) {
                return Err(GroupError::Chain(format!(
                    "level {k}: generator image {bad} out of range"
                )));
            }
            match (&lvl.factor_map, k) {
                (None, 0) => {}
                (Some(_), 0) => {
                    return Err(GroupError::Chain("level 0 has a factor map".into()));
                }
                (None, _) => {
                    return Err(GroupError::Chain(format!("level {k} has no factor map")));
                }
                (Some(phi), _) => {
                    let below = levels[k - 1].group.order();
                    if phi.len() != lvl.group.order() || phi.iter().any(|&x| x >= below) {
                        return Err(GroupError::Chain(format!(
                            "level {k}: factor map has wrong shape"
                        )));
                    }
                }
            }
        }
        Ok(QuotientChain {
            base,
            levels,
            assumed_faithful,
        })
    }

    fn validate_levels(&self) -> Result<(), GroupError> {
        for (k, lvl) in self.levels.iter().enumerate() {
            let g = &lvl.group;
            if g.generated_subgroup(&lvl.gen_images).len() != g.order() {
                return Err(GroupError::Chain(format!(
                    "level {k}: generator images do not generate"
                )));
            }
            self.check_quotient_hom(k)?;
            if let Some(phi) = &lvl.factor_map {
                let h = &self.levels[k - 1].group;
                for x in 0..g.order() {
                    for y in 0..g.order() {
                        if phi[g.mul(x, y)] != h.mul(phi[x], phi[y]) {
                            return Err(GroupError::Chain(format!(
                                "level {k}: factor map is not a homomorphism at ({x}, {y})"
                            )));
                        }
                    }
                }
                let mut hit = vec![false; h.order()];
                for &y in phi {
                    hit[y] = true;
                }
                if hit.iter().any(|&b| !b) {
                    return Err(GroupError::Chain(format!(
                        "level {k}: factor map is not surjective"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that the generator assignment of level `k` extends to a homomorphism.
    fn check_quotient_hom(&self, k: usize) -> Result<(), GroupError> {
        let lvl = &self.levels[k];
        let g = &lvl.group;
        match self.base.kind() {
            GroupKind::Free { .. } => Ok(()),
            GroupKind::FreeAbelian { .. } => {
                for &x in &lvl.gen_images {
                    for &y in &lvl.gen_images {
                        if g.mul(x, y) != g.mul(y, x) {
                            return Err(GroupError::Chain(format!(
                                "level {k}: images of an abelian base do not commute"
                            )));
                        }
                    }
                }
                Ok(())
            }
            GroupKind::Finite(base) => {
                let images: Vec<usize> = (0..base.order())
                    .map(|x| self.quotient_image(k, base.canonical_word(x)))
                    .collect::<Result<_, _>>()?;
                for x in 0..base.order() {
                    for y in 0..base.order() {
                        if images[base.mul(x, y)] != g.mul(images[x], images[y]) {
                            return Err(GroupError::Chain(format!(
                                "level {k}: generator images do not define a homomorphism"
                            )));
                        }
                    }
                }
                Ok(())
            }
            GroupKind::Chain(_) => unreachable!(),
        }
    }

    /// Verifies `q_{k-1} = φ_k ∘ q_k` on generators for every level.
    pub fn check_coherence(&self) -> Result<(), GroupError> {
        for k in 1..self.levels.len() {
            let phi = self.levels[k].factor_map.as_ref().expect("shape checked");
            for (i, (&up, &down)) in self.levels[k]
                .gen_images
                .iter()
                .zip(&self.levels[k - 1].gen_images)
                .enumerate()
            {
                if phi[up] != down {
                    return Err(GroupError::Chain(format!(
                        "level {k}: factor map disagrees with generator images at generator {i}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &GroupHandle {
        &self.base
    }

    pub fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    /// Largest level index.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> Result<&FiniteGroup, GroupError> {
        self.levels
            .get(k)
            .map(|l| &l.group)
            .ok_or(GroupError::LevelOutOfRange {
                level: k,
                depth: self.depth(),
            })
    }

    /// `π_k(w)` computed letter by letter through `q_k`.
    pub fn quotient_image(&self, k: usize, w: &Word) -> Result<usize, GroupError> {
        let g = self.level(k)?;
        let imgs = &self.levels[k].gen_images;
        let mut x = g.identity();
        for l in w.letters() {
            let y = *imgs.get(l.gen).ok_or(GroupError::GeneratorOutOfRange {
                index: l.gen,
                rank: imgs.len(),
            })?;
            x = g.mul(x, if l.inverse { g.inv(y) } else { y });
        }
        Ok(x)
    }

    pub fn quotient_image_of(&self, k: usize, x: &Element) -> Result<usize, GroupError> {
        let w = self.base.word_of(x)?;
        self.quotient_image(k, &w)
    }

    /// `π̂_{k,n}` applied to `g ∈ Γ_n`.
    pub fn factor_image(&self, k: usize, n: usize, g: usize) -> Result<usize, GroupError> {
        self.level(n)?;
        if k > n {
            return Err(GroupError::LevelOutOfRange { level: k, depth: n });
        }
        if g >= self.levels[n].group.order() {
            return Err(GroupError::ElementOutOfRange(g));
        }
        let mut x = g;
        for m in (k + 1..=n).rev() {
            x = self.levels[m].factor_map.as_ref().expect("shape checked")[x];
        }
        Ok(x)
    }

    /// Returns two distinct ball elements with equal image at level `n`, if any.
    pub fn injectivity_failure_on_ball(
        &self,
        n: usize,
        s: &[Word],
        radius: i64,
    ) -> Result<Option<(Word, Word)>, GroupError> {
        let ball = self.base.ball(s, radius)?;
        let mut seen: std::collections::BTreeMap<usize, Word> = Default::default();
        for e in ball {
            let img = self.quotient_image(n, &e.word)?;
            if let Some(prev) = seen.get(&img) {
                return Ok(Some((prev.clone(), e.word)));
            }
            seen.insert(img, e.word);
        }
        Ok(None)
    }

    /// `Z` with levels `Z/2^k`, `k = 0..=depth`.
    pub fn z_chain(depth: usize) -> Self {
        let levels = (0..=depth)
            .map(|k| {
                let m = 1usize << k;
                ChainLevel {
                    group: FiniteGroup::cyclic(m),
                    gen_images: vec![1 % m],
                    factor_map: (k > 0).then(|| (0..m).map(|x| x % (m / 2)).collect()),
                }
            })
            .collect();
        Self::new(GroupHandle::free(1), levels, true).expect("standard chain is valid")
    }

    /// `F₂` with levels `(Z/2^k)²` through the abelianization.
    pub fn f2_chain(depth: usize) -> Self {
        let levels = (0..=depth)
            .map(|k| {
                let m = 1usize << k;
                let orders = [m, m];
                let gen_images = vec![
                    FiniteGroup::abelian_encode(&orders, &[1, 0]),
                    FiniteGroup::abelian_encode(&orders, &[0, 1]),
                ];
                let factor_map = (k > 0).then(|| {
                    let lower = [m / 2, m / 2];
                    (0..m * m)
                        .map(|x| {
                            let d = FiniteGroup::abelian_coordinates(&orders, x);
                            FiniteGroup::abelian_encode(&lower, &d)
                        })
                        .collect()
                });
                ChainLevel {
                    group: FiniteGroup::abelian(&orders),
                    gen_images,
                    factor_map,
                }
            })
            .collect();
        // (Z/2^k)² quotients of F₂ only separate the abelianization.
        Self::new(GroupHandle::free(2), levels, false).expect("standard chain is valid")
    }

    /// The direct sum of copies of `Z/2`, truncated to `rank` summands, with
    /// `Γ_k = (Z/2)^k` keeping the first `k` coordinates.
    pub fn oplus_z2_chain(rank: usize, depth: usize) -> Result<Self, GroupError> {
        if depth > rank {
            return Err(GroupError::Chain(format!(
                "depth {depth} exceeds the number of summands {rank}"
            )));
        }
        let base = GroupHandle::finite(FiniteGroup::abelian(&vec![2; rank]));
        let levels = (0..=depth)
            .map(|k| {
                let orders = vec![2; k];
                let gen_images = (0..rank)
                    .map(|i| {
                        let mut d = vec![0; k];
                        if i < k {
                            d[i] = 1;
                        }
                        FiniteGroup::abelian_encode(&orders, &d)
                    })
                    .collect();
                let factor_map = (k > 0).then(|| {
                    let lower = vec![2; k - 1];
                    (0..1usize << k)
                        .map(|x| {
                            let d = FiniteGroup::abelian_coordinates(&orders, x);
                            FiniteGroup::abelian_encode(&lower, &d[..k - 1])
                        })
                        .collect()
                });
                ChainLevel {
                    group: FiniteGroup::abelian(&orders),
                    gen_images,
                    factor_map,
                }
            })
            .collect();
        Self::new(base, levels, depth == rank)
    }

    /// Every level trivial.
    pub fn trivial_chain(base: GroupHandle, depth: usize) -> Result<Self, GroupError> {
        let rank = base.rank();
        let levels = (0..=depth)
            .map(|k| ChainLevel {
                group: FiniteGroup::cyclic(1),
                gen_images: vec![0; rank],
                factor_map: (k > 0).then(|| vec![0]),
            })
            .collect();
        Self::new(base, levels, false)
    }

    /// The chain truncated to levels `0..=depth`.
    pub fn truncate(&self, depth: usize) -> Result<Self, GroupError> {
        self.level(depth)?;
        Ok(QuotientChain {
            base: self.base.clone(),
            levels: self.levels[..=depth].to_vec(),
            assumed_faithful: self.assumed_faithful,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn z_chain_images() {
        let c = QuotientChain::z_chain(3);
        let w = c.base().parse_word("5").unwrap();
        assert_eq!(c.quotient_image(2, &w).unwrap(), 1);
        assert_eq!(c.quotient_image(2, &Word::identity()).unwrap(), 0);
        assert_eq!(c.factor_image(1, 3, 5).unwrap(), 1);
        assert_eq!(c.factor_image(3, 3, 5).unwrap(), 5);
        assert_eq!(c.factor_image(1, 3, 0).unwrap(), 0);
    }

    #[test]
    fn f2_chain_abelianizes() {
        let c = QuotientChain::f2_chain(2);
        let w = c.base().parse_word("a b a").unwrap();
        let x = c.quotient_image(1, &w).unwrap();
        assert_eq!(FiniteGroup::abelian_coordinates(&[2, 2], x), vec![0, 1]);
    }

    #[test]
    fn oplus_chain_levels() {
        let c = QuotientChain::oplus_z2_chain(3, 2).unwrap();
        let orders: Vec<usize> = c.levels().iter().map(|l| l.group.order()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn tampered_factor_map_is_incoherent() {
        let c = QuotientChain::z_chain(2);
        let mut levels = c.levels().to_vec();
        levels[2].factor_map = Some(vec![0, 0, 0, 0]);
        let bad =
            QuotientChain::from_parts_unchecked(c.base().clone(), levels.clone(), true).unwrap();
        assert!(bad.check_coherence().is_err());
        assert!(QuotientChain::new(c.base().clone(), levels, true).is_err());
    }

    #[test]
    fn missing_factor_map_rejected() {
        let c = QuotientChain::z_chain(2);
        let mut levels = c.levels().to_vec();
        levels[2].factor_map = None;
        assert!(QuotientChain::new(c.base().clone(), levels, true).is_err());
    }

    #[test]
    fn injectivity_on_balls() {
        let c = QuotientChain::z_chain(3);
        let s = c.base().standard_generators();
        // {−3..3} injects into Z/8 but not into Z/4
        assert!(c.injectivity_failure_on_ball(3, &s, 3).unwrap().is_none());
        assert!(c.injectivity_failure_on_ball(2, &s, 3).unwrap().is_some());
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0..2usize, any::<bool>()), 0..16).prop_map(|v| {
            Word::from_letters(
                v.into_iter()
                    .map(|(g, i)| super::super::Letter::new(g, i))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn quotient_image_is_hom(u in word_strategy(), v in word_strategy(), k in 0..=3usize) {
            let c = QuotientChain::f2_chain(3);
            let g = c.level(k).unwrap();
            let uv = c.quotient_image(k, &u.concat(&v)).unwrap();
            let pu = c.quotient_image(k, &u).unwrap();
            let pv = c.quotient_image(k, &v).unwrap();
            prop_assert_eq!(uv, g.mul(pu, pv));
        }

        #[test]
        fn chain_coherence(w in word_strategy(), n in 0..=3usize, k in 0..=3usize) {
            prop_assume!(k <= n);
            let c = QuotientChain::f2_chain(3);
            let up = c.quotient_image(n, &w).unwrap();
            prop_assert_eq!(c.factor_image(k, n, up).unwrap(), c.quotient_image(k, &w).unwrap());
        }
    }
}
