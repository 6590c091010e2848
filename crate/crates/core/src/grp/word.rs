use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse.
///
/// Letters order as `a < a⁻¹ < b < b⁻¹ < …`, which is the order used by every
/// length-lexicographic enumeration in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A finite sequence of letters. Not necessarily reduced.
///
/// Words compare length-first, then lexicographically by letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from `(generator, exponent)` pairs, e.g. `[(1,-1),(0,2)]` is `b⁻¹a²`.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        let mut letters = Vec::new();
        for &(gen, exp) in powers {
            let letter = Letter::new(gen, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Word(letters)
    }

    pub fn gen(gen: usize) -> Self {
        Word(vec![Letter::new(gen, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Free cancellation of adjacent inverse pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Signed letter count per generator (the image in the abelianization).
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = vec![0; rank];
        for l in &self.0 {
            if l.gen < rank {
                sums[l.gen] += l.sign();
            }
        }
        sums
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.gen)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_lex_order() {
        let a = Word::gen(0);
        let ainv = a.inverse();
        let b = Word::gen(1);
        let ab = a.concat(&b);
        let mut v = vec![
            ab.clone(),
            b.clone(),
            Word::identity(),
            ainv.clone(),
            a.clone(),
        ];
        v.sort();
        assert_eq!(v, vec![Word::identity(), a, ainv, b, ab]);
    }

    #[test]
    fn free_reduction_cancels_nested_pairs() {
        let w = Word::from_powers(&[(0, 1), (1, 1), (1, -1), (0, -1), (1, 2)]);
        assert_eq!(w.free_reduce(), Word::from_powers(&[(1, 2)]));
    }
}
