//! Positive-type functions and properly supported functions on `G × G`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{check_homomorphism, Groupoid, GroupoidError};

/// A complex-valued function on the arrows of a groupoid.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveTypeFn {
    pub values: Vec<Complex64>,
}

impl PositiveTypeFn {
    pub fn new(values: Vec<Complex64>) -> Self {
        PositiveTypeFn { values }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        PositiveTypeFn {
            values: vec![Complex64::new(c, 0.0); n],
        }
    }

    /// `φ(g) = ⟨v_{r(g)}, v_{s(g)}⟩`, positive type for any choice of vectors.
    pub fn gram(g: &impl Groupoid, vectors: &[Vec<Complex64>]) -> Self {
        let values = (0..g.arrow_count())
            .map(|a| {
                let vr = &vectors[g.range(a)];
                let vs = &vectors[g.source(a)];
                vr.iter().zip(vs).map(|(x, y)| x.conj() * y).sum()
            })
            .collect();
        PositiveTypeFn { values }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PositivityVerdict {
    Positive,
    /// The Gram matrix over `G_u` (rows indexed by `arrows`) is not positive.
    Witness {
        unit: usize,
        arrows: Vec<usize>,
        min_eigenvalue: f64,
        hermitian: bool,
        gram: Vec<Vec<Complex64>>,
    },
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, PositivityVerdict::Positive)
    }
}

/// Checks that `(φ(g_i g_j⁻¹))` is positive semidefinite over every source fiber.
///
/// An eigenvalue passes when it is at least `-tol · max(1, ‖M‖_∞)`.
pub fn positive_type_check(
    g: &impl Groupoid,
    phi: &PositiveTypeFn,
    tol: f64,
) -> Result<PositivityVerdict, GroupoidError> {
    if phi.values.len() != g.arrow_count() {
        return Err(GroupoidError::Shape(format!(
            "{} values for {} arrows",
            phi.values.len(),
            g.arrow_count()
        )));
    }
    if let Some(a) = phi
        .values
        .iter()
        .position(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(GroupoidError::NonFinite(a));
    }
    for u in 0..g.unit_count() {
        let fiber = g.source_fiber(u);
        let m = fiber.len();
        let inverses: Vec<usize> = fiber.iter().map(|&x| g.inverse(x)).collect();
        let mat = DMatrix::from_fn(m, m, |i, j| {
            let a = g.compose(fiber[i], inverses[j]).expect("same source");
            phi.values[a]
        });
        let norm = (0..m)
            .map(|i| (0..m).map(|j| mat[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let slack = tol * norm.max(1.0);
        let hermitian =
            (0..m).all(|i| (0..m).all(|j| (mat[(i, j)] - mat[(j, i)].conj()).norm() <= slack));
        let min_eigenvalue = if hermitian {
            let eig = SymmetricEigen::new(mat.clone());
            eig.eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min)
        } else {
            f64::NAN
        };
        if !hermitian || min_eigenvalue < -slack {
            return Ok(PositivityVerdict::Witness {
                unit: u,
                arrows: fiber,
                min_eigenvalue,
                hermitian,
                gram: (0..m)
                    .map(|i| (0..m).map(|j| mat[(i, j)]).collect())
                    .collect(),
            });
        }
    }
    Ok(PositivityVerdict::Positive)
}

/// `φ ∘ h` for a validated homomorphism `h: G → H` given on arrows.
pub fn pullback_positive_type(
    g: &impl Groupoid,
    h: &impl Groupoid,
    map: &[usize],
    phi: &PositiveTypeFn,
) -> Result<PositiveTypeFn, GroupoidError> {
    if phi.values.len() != h.arrow_count() {
        return Err(GroupoidError::Shape(
            "function does not match the target groupoid".into(),
        ));
    }
    check_homomorphism(g, h, map)?;
    Ok(PositiveTypeFn {
        values: map.iter().map(|&a| phi.values[a]).collect(),
    })
}

/// Cardinalities of `supp(φ) ∩ (G(K) × C)` and `supp(φ) ∩ (C × G(K))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportProfile {
    pub left: usize,
    pub right: usize,
}

/// `phi` is indexed by arrows of `G × G` in the product-view numbering.
pub fn proper_support_profile(
    g: &impl Groupoid,
    phi: &PositiveTypeFn,
    k: &[usize],
    c: &[usize],
) -> Result<SupportProfile, GroupoidError> {
    let n = g.arrow_count();
    if phi.values.len() != n * n {
        return Err(GroupoidError::Shape("function must live on G × G".into()));
    }
    let mut in_k = vec![false; g.unit_count()];
    for &u in k {
        *in_k.get_mut(u).ok_or(GroupoidError::InvalidUnit(u))? = true;
    }
    let gk: Vec<usize> = (0..n)
        .filter(|&a| in_k[g.source(a)] && in_k[g.range(a)])
        .collect();
    let mut in_gk = vec![false; n];
    for &a in &gk {
        in_gk[a] = true;
    }
    let mut cs: Vec<usize> = c.to_vec();
    cs.sort_unstable();
    cs.dedup();
    for &a in &cs {
        if a >= n {
            return Err(GroupoidError::InvalidArrow(a));
        }
        if !in_gk[a] {
            return Err(GroupoidError::Shape(format!(
                "arrow {a} of C is outside G(K)"
            )));
        }
    }
    let nonzero = |x: usize, y: usize| phi.values[x * n + y] != Complex64::new(0.0, 0.0);
    let mut left = 0;
    let mut right = 0;
    for &x in &gk {
        for &y in &cs {
            left += usize::from(nonzero(x, y));
            right += usize::from(nonzero(y, x));
        }
    }
    Ok(SupportProfile { left, right })
}
