//! Realizing a K₀ class by a compact open set, folding vertex cylinders with
//! the addition and negation witnesses.

use std::cmp::Reverse;
use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{
    add_witness, class_vector, independent_loops_check, neg_witness, AddProof, CompactOpen,
    K0Group, KzeroError, NegProof,
};
use crate::dr::{KGraph, Path};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RealizeStep {
    Vertex { vertex: usize },
    Neg(NegProof),
    Add(AddProof),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub target: Vec<i64>,
    /// Coefficients of the vertex classes summing to the target.
    pub expression: Vec<i64>,
    pub steps: Vec<RealizeStep>,
    pub result: CompactOpen,
    pub budget: usize,
}

/// Integer vectors of L1 norm `s`, nonnegative ones first.
fn vectors_of_norm(n: usize, s: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, s: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            if s == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for a in -s..=s {
            prefix.push(a);
            rec(n, s - a.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, s, &mut Vec::new(), &mut out);
    out.sort_by_key(|v| (v.iter().filter(|&&x| x < 0).count(), Reverse(v.clone())));
    out
}

fn fold(g: &KGraph, expr: &[i64]) -> Result<(Vec<RealizeStep>, CompactOpen), KzeroError> {
    let mut terms: Vec<(usize, bool)> = Vec::new();
    for (v, &c) in expr.iter().enumerate() {
        terms.extend(std::iter::repeat_n((v, false), c.max(0) as usize));
    }
    for (v, &c) in expr.iter().enumerate() {
        terms.extend(std::iter::repeat_n((v, true), (-c).max(0) as usize));
    }
    let mut steps = Vec::new();
    let mut acc: Option<CompactOpen> = None;
    for (v, negative) in terms {
        steps.push(RealizeStep::Vertex { vertex: v });
        let mut piece = CompactOpen::cylinder(Path::vertex(v));
        if negative {
            let n = neg_witness(g, &piece)?;
            piece = n.result.clone();
            steps.push(RealizeStep::Neg(n));
        }
        acc = Some(match acc {
            None => piece,
            Some(a) => {
                let p = add_witness(g, &a, &piece)?;
                let r = p.result.clone();
                steps.push(RealizeStep::Add(p));
                r
            }
        });
    }
    Ok((steps, acc.unwrap_or_default()))
}

/// A nonempty compact open set of class `target`, from the shortest signed
/// combination of vertex classes; `budget` caps its L1 norm and defaults to
/// `3·(|V| + |target|₁)`.
pub fn realize_class(
    g: &KGraph,
    k0: &K0Group,
    target: &[i64],
    budget: Option<usize>,
) -> Result<Realization, KzeroError> {
    let check = independent_loops_check(g)?;
    if let Some(vertex) = check.failing_vertex {
        return Err(KzeroError::NoIndependentLoops { vertex });
    }
    if target.len() != k0.factors.len() {
        return Err(KzeroError::TargetShape {
            expected: k0.factors.len(),
            got: target.len(),
        });
    }
    let target = k0.reduce(target.to_vec());
    let n = g.vertex_count();
    let norm: i64 = target.iter().map(|x| x.abs()).sum();
    let budget = budget.unwrap_or(3 * (n + norm as usize));
    let basis: Vec<Vec<i64>> = (0..n)
        .map(|v| k0.class_of(&(0..n).map(|w| i64::from(v == w)).collect::<Vec<_>>()))
        .collect();
    for s in 1..=budget as i64 {
        for expr in vectors_of_norm(n, s) {
            let class = expr.iter().zip(&basis).fold(k0.zero(), |acc, (&c, b)| {
                k0.add(&acc, &b.iter().map(|x| x * c).collect::<Vec<_>>())
            });
            if class != target {
                continue;
            }
            let (steps, result) = fold(g, &expr)?;
            if result.is_empty() {
                continue;
            }
            if k0.class_of(&class_vector(g, &result)) != target {
                return Err(KzeroError::Witness("folded set has the wrong class".into()));
            }
            return Ok(Realization {
                target,
                expression: expr,
                steps,
                result,
                budget,
            });
        }
    }
    Err(KzeroError::Budget { budget })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub group_order: Option<u64>,
    /// One representative set per realized class.
    pub classes: BTreeMap<Vec<i64>, CompactOpen>,
    pub complete: bool,
}

/// Classes reached from the vertex cylinders under `add_witness` and
/// `neg_witness`, stopping once every class of a finite group is found or
/// `max_classes` classes are known.
pub fn realized_closure(
    g: &KGraph,
    k0: &K0Group,
    max_classes: usize,
) -> Result<ClosureReport, KzeroError> {
    let cls = |o: &CompactOpen| k0.class_of(&class_vector(g, o));
    let all = k0.elements();
    let mut classes: BTreeMap<Vec<i64>, CompactOpen> = BTreeMap::new();
    let mut order: Vec<Vec<i64>> = Vec::new();
    let mut queue = VecDeque::new();
    let insert = |o: CompactOpen,
                  classes: &mut BTreeMap<Vec<i64>, CompactOpen>,
                  order: &mut Vec<Vec<i64>>,
                  queue: &mut VecDeque<Vec<i64>>| {
        let c = cls(&o);
        if !classes.contains_key(&c) {
            classes.insert(c.clone(), o);
            order.push(c.clone());
            queue.push_back(c);
        }
    };
    for v in 0..g.vertex_count() {
        insert(
            CompactOpen::cylinder(Path::vertex(v)),
            &mut classes,
            &mut order,
            &mut queue,
        );
    }
    let full = |classes: &BTreeMap<Vec<i64>, CompactOpen>| {
        all.as_ref().is_some_and(|a| a.len() == classes.len())
    };
    while let Some(c) = queue.pop_front() {
        if full(&classes) || classes.len() >= max_classes {
            break;
        }
        let o = classes[&c].clone();
        let neg = neg_witness(g, &o)?.result;
        insert(neg, &mut classes, &mut order, &mut queue);
        for d in order.clone() {
            let other = classes[&d].clone();
            let sum = add_witness(g, &o, &other)?.result;
            insert(sum, &mut classes, &mut order, &mut queue);
        }
    }
    Ok(ClosureReport {
        group_order: k0.order(),
        complete: full(&classes),
        classes,
    })
}
