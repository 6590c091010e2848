//! Finite groups given by multiplication tables over dense element ids.

use std::collections::VecDeque;

use super::{GroupError, Letter, Word};

/// A finite group stored as a Cayley table.
///
/// Generators are element ids; a letter `g_i^{±1}` evaluates to
/// `generators[i]` or its inverse. Every element carries a canonical word,
/// the length-lexicographically least word over the generators that
/// evaluates to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    canonical: Vec<Word>,
}

impl FiniteGroup {
    /// Validates a table: closure, identity, inverses and associativity.
    ///
    /// When `generators` is `None` every non-identity element is a generator.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!(
                    "row {i} has length {} instead of {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::InvalidTable(format!(
                    "row {i} contains out-of-range element {bad}"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {x} has no inverse")))?;
            inverses[x] = inv;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let generators = match generators {
            Some(g) => {
                if let Some(&bad) = g.iter().find(|&&x| x >= n) {
                    return Err(GroupError::InvalidTable(format!(
                        "generator {bad} out of range"
                    )));
                }
                g
            }
            None => (0..n).filter(|&x| x != identity).collect(),
        };
        let mut group = FiniteGroup {
            table,
            identity,
            inverses,
            generators,
            canonical: Vec::new(),
        };
        group.canonical = group.canonical_words()?;
        Ok(group)
    }

    fn canonical_words(&self) -> Result<Vec<Word>, GroupError> {
        let n = self.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[self.identity] = Some(Word::identity());
        let mut queue = VecDeque::from([self.identity]);
        let letters: Vec<Letter> = (0..self.generators.len())
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect();
        // BFS in letter order on the right yields length-lex minimal words:
        // parents are dequeued in length-lex order of their own words.
        while let Some(x) = queue.pop_front() {
            for &l in &letters {
                let y = self.mul(x, self.letter_value(l));
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap_or_default();
                    w = w.concat(&Word::from_letters(vec![l]));
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    GroupError::InvalidTable(format!("generators do not reach element {i}"))
                })
            })
            .collect()
    }

    /// Cyclic group `Z/n` with generator `1`.
    pub fn cyclic(n: usize) -> Self {
        Self::abelian(&[n])
    }

    /// `Z/n_1 × … × Z/n_r` with mixed-radix element ids (first factor fastest)
    /// and the standard basis as generators. The empty product is trivial.
    pub fn abelian(orders: &[usize]) -> Self {
        let size: usize = orders.iter().product();
        let decode = |mut x: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&m| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect()
        };
        let encode = |digits: &[usize]| -> usize {
            digits
                .iter()
                .zip(orders)
                .rev()
                .fold(0, |acc, (&d, &m)| acc * m + d)
        };
        let table = (0..size)
            .map(|x| {
                let dx = decode(x);
                (0..size)
                    .map(|y| {
                        let dy = decode(y);
                        let sum: Vec<usize> = dx
                            .iter()
                            .zip(&dy)
                            .zip(orders)
                            .map(|((a, b), m)| (a + b) % m)
                            .collect();
                        encode(&sum)
                    })
                    .collect()
            })
            .collect();
        let generators = (0..orders.len())
            .map(|i| {
                let mut d = vec![0; orders.len()];
                if orders[i] > 1 {
                    d[i] = 1;
                }
                encode(&d)
            })
            .collect();
        Self::from_table(table, Some(generators)).expect("abelian table is a group")
    }

    /// Mixed-radix coordinates of an element of a group built by [`FiniteGroup::abelian`].
    pub fn abelian_coordinates(orders: &[usize], mut x: usize) -> Vec<usize> {
        orders
            .iter()
            .map(|&m| {
                let d = x % m;
                x /= m;
                d
            })
            .collect()
    }

    pub fn abelian_encode(orders: &[usize], digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(orders)
            .rev()
            .fold(0, |acc, (&d, &m)| acc * m + d % m)
    }

    /// The symmetric group on `k` letters; permutations ordered lexicographically,
    /// generated by the transposition `(0 1)` and the cycle `(0 1 … k-1)`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p·q)(i) = p(q(i))
                        let pq: Vec<usize> = (0..k).map(|i| p[q[i]]).collect();
                        index(&pq)
                    })
                    .collect()
            })
            .collect();
        let generators = if k < 2 {
            vec![]
        } else {
            let mut t: Vec<usize> = (0..k).collect();
            t.swap(0, 1);
            let c: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
            vec![index(&t), index(&c)]
        };
        Self::from_table(table, Some(generators)).expect("symmetric table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn canonical_word(&self, x: usize) -> &Word {
        &self.canonical[x]
    }

    pub fn letter_value(&self, l: Letter) -> usize {
        let g = self.generators[l.gen];
        if l.inverse {
            self.inverses[g]
        } else {
            g
        }
    }

    pub fn evaluate(&self, w: &Word) -> Result<usize, GroupError> {
        let mut x = self.identity;
        for &l in w.letters() {
            if l.gen >= self.generators.len() {
                return Err(GroupError::GeneratorOutOfRange {
                    index: l.gen,
                    rank: self.generators.len(),
                });
            }
            x = self.mul(x, self.letter_value(l));
        }
        Ok(x)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.table[x][y] == self.table[y][x]))
    }

    /// Order of an element.
    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`, as a sorted id list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                for h in [g, self.inverses[g]] {
                    let y = self.mul(x, h);
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_walk() {
        let z4 = FiniteGroup::cyclic(4);
        let w = Word::from_powers(&[(0, 4)]);
        assert_eq!(z4.evaluate(&w).unwrap(), 0);
        assert_eq!(z4.evaluate(&Word::from_powers(&[(0, 5)])).unwrap(), 1);
    }

    #[test]
    fn canonical_words_are_length_lex_least() {
        let z4 = FiniteGroup::cyclic(4);
        // 3 = g^-1 is shorter than g g g
        assert_eq!(z4.canonical_word(3), &Word::from_powers(&[(0, -1)]));
        assert_eq!(z4.canonical_word(2), &Word::from_powers(&[(0, 2)]));
    }

    #[test]
    fn symmetric_three_is_nonabelian_of_order_six() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn rejects_non_associative_table() {
        // a loop (quasigroup with identity) that is not a group
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(table, None).unwrap_err();
        assert!(matches!(err, GroupError::InvalidTable(m) if m.contains("associative")));
    }

    #[test]
    fn abelian_product_encoding() {
        let orders = [2, 2];
        let g = FiniteGroup::abelian(&orders);
        assert_eq!(g.order(), 4);
        let x = FiniteGroup::abelian_encode(&orders, &[1, 1]);
        assert_eq!(FiniteGroup::abelian_coordinates(&orders, x), vec![1, 1]);
        assert_eq!(g.mul(x, x), g.identity());
    }
}
