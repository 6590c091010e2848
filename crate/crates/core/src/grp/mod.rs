//! Groups with decidable word problems: free, free abelian, finite (Cayley
//! table) and quotient chains over one of those bases.
//!
//! Every group element has a canonical form ([`Element`]) and a canonical
//! word. Equality of words is decided by comparing canonical forms.

mod chain;
mod finite;
mod word;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub use chain::{ChainLevel, QuotientChain};
pub use finite::FiniteGroup;
pub use word::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("elements belong to different kinds of group")]
    KindMismatch,
    #[error("element id {0} out of range")]
    ElementOutOfRange(usize),
    #[error("labels must be pairwise distinct, {0:?} repeats")]
    DuplicateLabel(String),
    #[error("expected {expected} generator labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(i64),
    #[error("invalid quotient chain: {0}")]
    Chain(String),
    #[error("level {level} out of range (chain depth {depth})")]
    LevelOutOfRange { level: usize, depth: usize },
}

/// Canonical form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Freely reduced word.
    Free(Word),
    /// Exponent vector.
    Abelian(Vec<i64>),
    /// Element id of a finite group.
    Finite(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    Finite(FiniteGroup),
    /// Elements are those of the chain's base group.
    Chain(Box<QuotientChain>),
}

/// A group together with display labels for its generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHandle {
    kind: GroupKind,
    labels: Vec<String>,
}

/// One element of an enumerated ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallEntry {
    pub element: Element,
    /// Canonical word of the element over the group's generators.
    pub word: Word,
    /// Shortest path from the identity as a word over the generating set:
    /// letter `i` stands for the `i`-th element of `S`, inverted when marked.
    pub path: Word,
}

fn default_labels(rank: usize) -> Vec<String> {
    if rank <= 26 {
        (0..rank)
            .map(|i| char::from(b'a' + i as u8).to_string())
            .collect()
    } else {
        (0..rank).map(|i| format!("g{i}")).collect()
    }
}

impl GroupHandle {
    pub fn new(kind: GroupKind, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let rank = match &kind {
            GroupKind::Free { rank } | GroupKind::FreeAbelian { rank } => *rank,
            GroupKind::Finite(g) => g.generators().len(),
            GroupKind::Chain(c) => c.base().rank(),
        };
        let labels = match labels {
            Some(l) => {
                if l.len() != rank {
                    return Err(GroupError::LabelCount {
                        expected: rank,
                        got: l.len(),
                    });
                }
                let mut seen = std::collections::BTreeSet::new();
                for s in &l {
                    if !seen.insert(s) {
                        return Err(GroupError::DuplicateLabel(s.clone()));
                    }
                    if s.is_empty()
                        || s == "1"
                        || s.contains(char::is_whitespace)
                        || s.contains('^')
                    {
                        return Err(GroupError::Parse(format!("unusable label {s:?}")));
                    }
                }
                l
            }
            None => match &kind {
                GroupKind::Chain(c) => c.base().labels().to_vec(),
                _ => default_labels(rank),
            },
        };
        Ok(GroupHandle { kind, labels })
    }

    pub fn free(rank: usize) -> Self {
        Self::new(GroupKind::Free { rank }, None).expect("default labels are valid")
    }

    pub fn free_abelian(rank: usize) -> Self {
        Self::new(GroupKind::FreeAbelian { rank }, None).expect("default labels are valid")
    }

    pub fn finite(group: FiniteGroup) -> Self {
        Self::new(GroupKind::Finite(group), None).expect("default labels are valid")
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// The group whose elements this handle manipulates (the base for chains).
    fn elementary(&self) -> &GroupHandle {
        match &self.kind {
            GroupKind::Chain(c) => c.base().elementary(),
            _ => self,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.elementary().kind, GroupKind::Finite(_))
    }

    pub fn order(&self) -> Option<usize> {
        match &self.elementary().kind {
            GroupKind::Finite(g) => Some(g.order()),
            GroupKind::Free { rank: 0 } | GroupKind::FreeAbelian { rank: 0 } => Some(1),
            _ => None,
        }
    }

    fn check_word(&self, w: &Word) -> Result<(), GroupError> {
        match w.max_gen() {
            Some(g) if g >= self.rank() => Err(GroupError::GeneratorOutOfRange {
                index: g,
                rank: self.rank(),
            }),
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.elementary().kind {
            GroupKind::Free { .. } => Element::Free(Word::identity()),
            GroupKind::FreeAbelian { rank } => Element::Abelian(vec![0; *rank]),
            GroupKind::Finite(g) => Element::Finite(g.identity()),
            GroupKind::Chain(_) => unreachable!("elementary group is never a chain"),
        }
    }

    /// Canonical form of a word.
    pub fn canonical(&self, w: &Word) -> Result<Element, GroupError> {
        self.check_word(w)?;
        Ok(match &self.elementary().kind {
            GroupKind::Free { .. } => Element::Free(w.free_reduce()),
            GroupKind::FreeAbelian { rank } => Element::Abelian(w.exponent_sums(*rank)),
            GroupKind::Finite(g) => Element::Finite(g.evaluate(w)?),
            GroupKind::Chain(_) => unreachable!(),
        })
    }

    fn check_element(&self, x: &Element) -> Result<(), GroupError> {
        match (&self.elementary().kind, x) {
            (GroupKind::Free { .. }, Element::Free(w)) => self.check_word(w),
            (GroupKind::FreeAbelian { rank }, Element::Abelian(v)) if v.len() == *rank => Ok(()),
            (GroupKind::Finite(g), Element::Finite(i)) => {
                if *i < g.order() {
                    Ok(())
                } else {
                    Err(GroupError::ElementOutOfRange(*i))
                }
            }
            _ => Err(GroupError::KindMismatch),
        }
    }

    /// Canonical word of an element.
    pub fn word_of(&self, x: &Element) -> Result<Word, GroupError> {
        self.check_element(x)?;
        Ok(match (&self.elementary().kind, x) {
            (GroupKind::Free { .. }, Element::Free(w)) => w.clone(),
            (GroupKind::FreeAbelian { .. }, Element::Abelian(v)) => {
                let powers: Vec<(usize, i64)> = v.iter().copied().enumerate().collect();
                Word::from_powers(&powers)
            }
            (GroupKind::Finite(g), Element::Finite(i)) => g.canonical_word(*i).clone(),
            _ => unreachable!(),
        })
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(match (&self.elementary().kind, x, y) {
            (GroupKind::Free { .. }, Element::Free(u), Element::Free(v)) => {
                Element::Free(u.concat(v).free_reduce())
            }
            (GroupKind::FreeAbelian { .. }, Element::Abelian(u), Element::Abelian(v)) => {
                Element::Abelian(u.iter().zip(v).map(|(a, b)| a + b).collect())
            }
            (GroupKind::Finite(g), Element::Finite(a), Element::Finite(b)) => {
                Element::Finite(g.mul(*a, *b))
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self, x: &Element) -> Result<Element, GroupError> {
        self.check_element(x)?;
        Ok(match (&self.elementary().kind, x) {
            (GroupKind::Free { .. }, Element::Free(u)) => Element::Free(u.inverse()),
            (GroupKind::FreeAbelian { .. }, Element::Abelian(u)) => {
                Element::Abelian(u.iter().map(|a| -a).collect())
            }
            (GroupKind::Finite(g), Element::Finite(a)) => Element::Finite(g.inv(*a)),
            _ => unreachable!(),
        })
    }

    /// Canonical word of `w`; equal elements give identical results.
    pub fn reduce(&self, w: &Word) -> Result<Word, GroupError> {
        let x = self.canonical(w)?;
        self.word_of(&x)
    }

    pub fn equal_words(&self, u: &Word, v: &Word) -> Result<bool, GroupError> {
        Ok(self.canonical(u)? == self.canonical(v)?)
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    /// Parses `"a b^-1 a^2"`; `"1"` or the empty string is the identity.
    /// For rank-one groups a bare integer `n` means the `n`-th power of the generator.
    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        let mut powers = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            if self.rank() == 1 {
                if let Ok(n) = tok.parse::<i64>() {
                    powers.push((0, n));
                    continue;
                }
            }
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| GroupError::Parse(format!("bad exponent in {tok:?}")))?;
                    (b, e)
                }
                None => (tok, 1),
            };
            let gen = self
                .labels
                .iter()
                .position(|l| l == base)
                .ok_or_else(|| GroupError::Parse(format!("unknown generator {base:?}")))?;
            powers.push((gen, exp));
        }
        Ok(Word::from_powers(&powers))
    }

    /// Renders a word with labels, collapsing runs into powers.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let n = (j - i) as i64 * l.sign();
            let label = self
                .labels
                .get(l.gen)
                .cloned()
                .unwrap_or_else(|| format!("g{}", l.gen));
            parts.push(if n == 1 {
                label
            } else {
                format!("{label}^{n}")
            });
            i = j;
        }
        parts.join(" ")
    }

    pub fn format_element(&self, x: &Element) -> String {
        match self.word_of(x) {
            Ok(w) => self.format_word(&w),
            Err(_) => format!("{x:?}"),
        }
    }

    /// All elements that are products of at most `radius` letters of `S ∪ S⁻¹`,
    /// sorted by canonical word (length-lexicographic).
    pub fn ball(&self, s: &[Word], radius: i64) -> Result<Vec<BallEntry>, GroupError> {
        if radius < 0 {
            return Err(GroupError::NegativeRadius(radius));
        }
        let gens: Vec<Element> = s
            .iter()
            .map(|w| self.canonical(w))
            .collect::<Result<_, _>>()?;
        let steps: Vec<(Letter, Element)> = gens
            .iter()
            .enumerate()
            .flat_map(|(i, g)| {
                [
                    (Letter::new(i, false), g.clone()),
                    (Letter::new(i, true), self.inv(g).expect("valid element")),
                ]
            })
            .collect();
        let mut seen: BTreeMap<Element, Word> = BTreeMap::new();
        let id = self.identity();
        seen.insert(id.clone(), Word::identity());
        let mut frontier = VecDeque::from([(id, 0i64)]);
        while let Some((x, d)) = frontier.pop_front() {
            if d == radius {
                continue;
            }
            let path = seen[&x].clone();
            for (l, g) in &steps {
                let y = self.mul(&x, g)?;
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), path.concat(&Word::from_letters(vec![*l])));
                    frontier.push_back((y, d + 1));
                }
            }
        }
        let mut out: Vec<BallEntry> = seen
            .into_iter()
            .map(|(element, path)| {
                let word = self.word_of(&element).expect("valid element");
                BallEntry {
                    element,
                    word,
                    path,
                }
            })
            .collect();
        out.sort_by(|a, b| a.word.cmp(&b.word));
        Ok(out)
    }

    /// The standard generating set: one single-letter word per generator.
    pub fn standard_generators(&self) -> Vec<Word> {
        (0..self.rank()).map(Word::gen).collect()
    }
}

impl fmt::Display for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Free { rank } => write!(f, "free group of rank {rank}"),
            GroupKind::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupKind::Finite(g) => write!(f, "finite group of order {}", g.order()),
            GroupKind::Chain(c) => {
                write!(f, "quotient chain of depth {} over {}", c.depth(), c.base())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> GroupHandle {
        GroupHandle::free(2)
    }

    #[test]
    fn free_cancellation() {
        let g = f2();
        let w = g.parse_word("a b b^-1").unwrap();
        assert_eq!(g.reduce(&w).unwrap(), Word::gen(0));
    }

    #[test]
    fn reduced_word_is_fixed() {
        let g = f2();
        let w = g.parse_word("b^-1 a b^2").unwrap();
        assert_eq!(g.reduce(&w).unwrap(), w);
        assert_eq!(g.format_word(&w), "b^-1 a b^2");
    }

    #[test]
    fn z4_table_walk() {
        let g = GroupHandle::finite(FiniteGroup::cyclic(4));
        let w = g.parse_word("a a a a").unwrap();
        assert_eq!(g.canonical(&w).unwrap(), Element::Finite(0));
    }

    #[test]
    fn out_of_range_generator() {
        let g = f2();
        let w = Word::gen(2);
        assert_eq!(
            g.reduce(&w),
            Err(GroupError::GeneratorOutOfRange { index: 2, rank: 2 })
        );
    }

    #[test]
    fn abelian_words_commute() {
        let g = GroupHandle::free_abelian(2);
        let fg = g.parse_word("a b").unwrap();
        let gf = g.parse_word("b a").unwrap();
        assert!(g.equal_words(&fg, &gf).unwrap());
        assert_eq!(g.canonical(&fg).unwrap(), Element::Abelian(vec![1, 1]));
        assert!(!f2().equal_words(&fg, &gf).unwrap());
        assert!(!f2().equal_words(&Word::gen(0), &Word::gen(1)).unwrap());
    }

    #[test]
    fn mixed_kinds_rejected() {
        let g = f2();
        assert_eq!(
            g.mul(&Element::Finite(0), &g.identity()),
            Err(GroupError::KindMismatch)
        );
    }

    #[test]
    fn ball_sizes() {
        let g = f2();
        let s = g.standard_generators();
        assert_eq!(g.ball(&s, 2).unwrap().len(), 17);
        assert_eq!(g.ball(&s, 0).unwrap().len(), 1);
        let z = GroupHandle::free(1);
        let b = z.ball(&z.standard_generators(), 3).unwrap();
        let exps: Vec<i64> = b.iter().map(|e| e.word.exponent_sums(1)[0]).collect();
        assert_eq!(exps, vec![0, 1, -1, 2, -2, 3, -3]);
        assert!(matches!(
            g.ball(&s, -1),
            Err(GroupError::NegativeRadius(-1))
        ));
    }

    #[test]
    fn ball_paths_evaluate_to_elements() {
        let g = f2();
        let s = vec![g.parse_word("a b").unwrap(), g.parse_word("b").unwrap()];
        for e in g.ball(&s, 3).unwrap() {
            let mut x = g.identity();
            for l in e.path.letters() {
                let step = g.canonical(&s[l.gen]).unwrap();
                let step = if l.inverse {
                    g.inv(&step).unwrap()
                } else {
                    step
                };
                x = g.mul(&x, &step).unwrap();
            }
            assert_eq!(x, e.element);
        }
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = GroupHandle::new(
            GroupKind::Free { rank: 2 },
            Some(vec!["x".into(), "x".into()]),
        );
        assert!(matches!(r, Err(GroupError::DuplicateLabel(_))));
    }

    // brute force: all words of length ≤ l, freely reduced, deduplicated
    fn brute_ball_f2(l: usize) -> usize {
        let mut words = std::collections::BTreeSet::new();
        let letters: Vec<Letter> = (0..2)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect();
        let mut layer = vec![Word::identity()];
        words.insert(Word::identity());
        for _ in 0..l {
            let mut next = Vec::new();
            for w in &layer {
                for &x in &letters {
                    let v = w.concat(&Word::from_letters(vec![x]));
                    next.push(v.clone());
                    words.insert(v.free_reduce());
                }
            }
            layer = next;
        }
        words.len()
    }

    #[test]
    fn f2_ball_matches_brute_force() {
        let g = f2();
        let s = g.standard_generators();
        for l in 0..=6usize {
            let n = g.ball(&s, l as i64).unwrap().len();
            assert_eq!(n, 2 * 3usize.pow(l as u32) - 1);
            if l <= 5 {
                assert_eq!(n, brute_ball_f2(l));
            }
        }
    }

    fn word_strategy(rank: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0..rank, any::<bool>()), 0..12).prop_map(|v| {
            Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
        })
    }

    fn handles() -> Vec<GroupHandle> {
        vec![
            GroupHandle::free(2),
            GroupHandle::free_abelian(2),
            GroupHandle::finite(FiniteGroup::symmetric(3)),
        ]
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_congruence(u in word_strategy(2), v in word_strategy(2)) {
            for g in handles() {
                let ru = g.reduce(&u).unwrap();
                let rv = g.reduce(&v).unwrap();
                prop_assert_eq!(g.reduce(&ru).unwrap(), ru.clone());
                prop_assert_eq!(
                    g.reduce(&u.concat(&v)).unwrap(),
                    g.reduce(&ru.concat(&rv)).unwrap()
                );
            }
        }

        #[test]
        fn word_inverse_cancels(u in word_strategy(2)) {
            for g in handles() {
                let x = g.canonical(&u.concat(&u.inverse())).unwrap();
                prop_assert!(g.is_identity(&x));
            }
        }
    }
}
