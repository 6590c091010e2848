//! Backtracking search for groupoid isomorphisms.

use super::{check_homomorphism, FiniteGroupoid, Groupoid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoSearch {
    /// `arrow_map[g]` is the image of arrow `g`; verified to be a bijective homomorphism.
    Found {
        unit_map: Vec<usize>,
        arrow_map: Vec<usize>,
        nodes: usize,
    },
    /// The search space was exhausted without success.
    NotIsomorphic { reason: String, nodes: usize },
    /// The node budget ran out first.
    Exhausted { budget: usize },
}

/// Per-unit invariant used for pruning: fiber sizes and the sorted element
/// orders of the isotropy group.
fn unit_invariant(g: &FiniteGroupoid, u: usize) -> (usize, usize, Vec<usize>) {
    let iso: Vec<usize> = g
        .source_fiber(u)
        .into_iter()
        .filter(|&a| g.range(a) == u)
        .collect();
    let mut orders: Vec<usize> = iso.iter().map(|&a| arrow_order(g, a)).collect();
    orders.sort_unstable();
    (g.source_fiber(u).len(), g.range_fiber(u).len(), orders)
}

/// Order of an isotropy arrow; 0 for arrows between distinct units.
fn arrow_order(g: &FiniteGroupoid, a: usize) -> usize {
    if g.source(a) != g.range(a) {
        return 0;
    }
    let unit = g.unit_arrow(g.source(a));
    let mut x = a;
    let mut k = 1;
    while x != unit {
        x = g.compose(x, a).expect("isotropy");
        k += 1;
    }
    k
}

struct Search<'a> {
    g: &'a FiniteGroupoid,
    h: &'a FiniteGroupoid,
    g_inv: Vec<(usize, usize, Vec<usize>)>,
    h_inv: Vec<(usize, usize, Vec<usize>)>,
    g_order: Vec<usize>,
    h_order: Vec<usize>,
    /// Non-unit arrows of `g` in assignment order.
    todo: Vec<usize>,
    unit_map: Vec<usize>,
    unit_used: Vec<bool>,
    arrow_map: Vec<Option<usize>>,
    arrow_used: Vec<bool>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn units(&mut self, u: usize) -> Option<bool> {
        if u == self.g.unit_count() {
            for v in 0..self.g.unit_count() {
                let (a, b) = (self.g.unit_arrow(v), self.h.unit_arrow(self.unit_map[v]));
                self.arrow_map[a] = Some(b);
                self.arrow_used[b] = true;
            }
            let done = self.arrows(0)?;
            if !done {
                for v in 0..self.g.unit_count() {
                    let (a, b) = (self.g.unit_arrow(v), self.h.unit_arrow(self.unit_map[v]));
                    self.arrow_map[a] = None;
                    self.arrow_used[b] = false;
                }
            }
            return Some(done);
        }
        for v in 0..self.h.unit_count() {
            if self.unit_used[v] || self.g_inv[u] != self.h_inv[v] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.unit_map[u] = v;
            self.unit_used[v] = true;
            if self.units(u + 1)? {
                return Some(true);
            }
            self.unit_used[v] = false;
        }
        Some(false)
    }

    fn consistent(&self, a: usize) -> bool {
        let b = self.arrow_map[a].expect("assigned");
        let (g, h) = (self.g, self.h);
        // products with every assigned arrow on either side must agree
        for x in g.range_fiber(g.source(a)) {
            if let Some(bx) = self.arrow_map[x] {
                let ax = g.compose(a, x).expect("composable");
                if let Some(bax) = self.arrow_map[ax] {
                    if h.compose(b, bx) != Some(bax) {
                        return false;
                    }
                }
            }
        }
        for x in g.source_fiber(g.range(a)) {
            if let Some(bx) = self.arrow_map[x] {
                let xa = g.compose(x, a).expect("composable");
                if let Some(bxa) = self.arrow_map[xa] {
                    if h.compose(bx, b) != Some(bxa) {
                        return false;
                    }
                }
            }
        }
        let ai = g.inverse(a);
        if let Some(bi) = self.arrow_map[ai] {
            if h.inverse(b) != bi {
                return false;
            }
        }
        true
    }

    fn arrows(&mut self, i: usize) -> Option<bool> {
        if i == self.todo.len() {
            let map: Vec<usize> = self.arrow_map.iter().map(|x| x.expect("total")).collect();
            return Some(check_homomorphism(self.g, self.h, &map).is_ok());
        }
        let a = self.todo[i];
        let s = self.unit_map[self.g.source(a)];
        let r = self.unit_map[self.g.range(a)];
        for b in self.h.source_fiber(s) {
            if self.arrow_used[b] || self.h.range(b) != r || self.h_order[b] != self.g_order[a] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.arrow_map[a] = Some(b);
            self.arrow_used[b] = true;
            if self.consistent(a) && self.arrows(i + 1)? {
                return Some(true);
            }
            self.arrow_map[a] = None;
            self.arrow_used[b] = false;
        }
        Some(false)
    }
}

/// Searches for an isomorphism `g → h`: units first, then non-unit arrows in
/// ascending order, pruning by fiber sizes, isotropy element orders and
/// consistency of all products among assigned arrows.
pub fn find_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid, budget: usize) -> IsoSearch {
    if g.arrow_count() != h.arrow_count() || g.unit_count() != h.unit_count() {
        return IsoSearch::NotIsomorphic {
            reason: format!(
                "sizes differ: {} arrows / {} units against {} / {}",
                g.arrow_count(),
                g.unit_count(),
                h.arrow_count(),
                h.unit_count()
            ),
            nodes: 0,
        };
    }
    let g_inv: Vec<_> = (0..g.unit_count()).map(|u| unit_invariant(g, u)).collect();
    let h_inv: Vec<_> = (0..h.unit_count()).map(|u| unit_invariant(h, u)).collect();
    let mut gs = g_inv.clone();
    let mut hs = h_inv.clone();
    gs.sort();
    hs.sort();
    if gs != hs {
        return IsoSearch::NotIsomorphic {
            reason: "unit invariants (fiber sizes, isotropy element orders) differ".into(),
            nodes: 0,
        };
    }
    let mut search = Search {
        g,
        h,
        g_order: (0..g.arrow_count()).map(|a| arrow_order(g, a)).collect(),
        h_order: (0..h.arrow_count()).map(|a| arrow_order(h, a)).collect(),
        g_inv,
        h_inv,
        todo: (0..g.arrow_count()).filter(|&a| !g.is_unit(a)).collect(),
        unit_map: vec![0; g.unit_count()],
        unit_used: vec![false; h.unit_count()],
        arrow_map: vec![None; g.arrow_count()],
        arrow_used: vec![false; h.arrow_count()],
        nodes: 0,
        budget,
    };
    match search.units(0) {
        None => IsoSearch::Exhausted { budget },
        Some(false) => IsoSearch::NotIsomorphic {
            reason: "no consistent assignment".into(),
            nodes: search.nodes,
        },
        Some(true) => IsoSearch::Found {
            unit_map: search.unit_map,
            arrow_map: search
                .arrow_map
                .into_iter()
                .map(|x| x.expect("total"))
                .collect(),
            nodes: search.nodes,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::FiniteGroup;

    #[test]
    fn z4_is_not_klein_four() {
        let z4 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(4));
        let v4 = FiniteGroupoid::from_group(&FiniteGroup::abelian(&[2, 2]));
        assert!(matches!(
            find_isomorphism(&z4, &v4, 1000),
            IsoSearch::NotIsomorphic { .. }
        ));
        assert!(matches!(
            find_isomorphism(&v4, &v4, 1000),
            IsoSearch::Found { .. }
        ));
    }

    #[test]
    fn relabelled_pair_groupoid() {
        let p = FiniteGroupoid::pair(3);
        match find_isomorphism(&p, &p, 10_000) {
            IsoSearch::Found { arrow_map, .. } => {
                assert!(check_homomorphism(&p, &p, &arrow_map).is_ok())
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s3 = FiniteGroupoid::from_group(&FiniteGroup::symmetric(3));
        assert_eq!(
            find_isomorphism(&s3, &s3, 1),
            IsoSearch::Exhausted { budget: 1 }
        );
    }
}
