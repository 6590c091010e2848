//! Smith normal form over the integers and the cokernel it presents.

use serde::Serialize;

pub type Matrix = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// nonzero entries positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: Matrix,
    pub v: Matrix,
    pub d: Matrix,
    /// The diagonal of `D`.
    pub diagonal: Vec<i128>,
}

impl Snf {
    pub fn verify(&self, m: &Matrix) -> bool {
        let diag_ok = self
            .d
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| i == j || x == 0));
        let divides = self
            .diagonal
            .windows(2)
            .all(|w| (w[0] == 0 && w[1] == 0) || (w[0] != 0 && w[1] % w[0] == 0));
        diag_ok
            && divides
            && self.diagonal.iter().all(|&x| x >= 0)
            && mat_mul(&mat_mul(&self.u, m), &self.v) == self.d
    }
}

pub fn smith_normal_form(m: &Matrix) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let swap_rows = |x: &mut Matrix, i: usize, j: usize| x.swap(i, j);
    let swap_cols = |x: &mut Matrix, i: usize, j: usize| {
        for row in x.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_i -= q·row_j
    let row_op = |x: &mut Matrix, i: usize, j: usize, q: i128| {
        for c in 0..x[i].len() {
            let t = x[j][c];
            x[i][c] -= q * t;
        }
    };
    let col_op = |x: &mut Matrix, i: usize, j: usize, q: i128| {
        for row in x.iter_mut() {
            row[i] -= q * row[j];
        }
    };
    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                if q != 0 {
                    row_op(&mut d, i, t, q);
                    row_op(&mut u, i, t, q);
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                if q != 0 {
                    col_op(&mut d, j, t, q);
                    col_op(&mut v, j, t, q);
                }
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| d[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    // row_t += row_i brings the offending entry into the pivot row
                    row_op(&mut d, t, i, -1);
                    row_op(&mut u, t, i, -1);
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for row in d.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|i| d[i][i]).collect();
    Snf { u, v, d, diagonal }
}

/// `Z^n / im M`, written as `⊕ Z/d_i ⊕ Z^r` with the trivial factors dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Group {
    /// Invariant factors `> 1` followed by `0` for each free summand.
    pub factors: Vec<u64>,
    pub free_rank: usize,
    #[serde(skip)]
    pub snf: Snf,
    #[serde(skip)]
    pub matrix: Matrix,
    /// Rows of `U` kept in the coordinates.
    #[serde(skip)]
    kept: Vec<usize>,
}

impl K0Group {
    pub fn from_relations(m: Matrix) -> K0Group {
        let snf = smith_normal_form(&m);
        let n = m.len();
        let mut kept = Vec::new();
        let mut factors = Vec::new();
        for i in 0..n {
            let d = snf.diagonal.get(i).copied().unwrap_or(0);
            if d != 1 {
                kept.push(i);
                factors.push(d as u64);
            }
        }
        let free_rank = factors.iter().filter(|&&f| f == 0).count();
        K0Group {
            factors,
            free_rank,
            snf,
            matrix: m,
            kept,
        }
    }

    pub fn verified(&self) -> bool {
        self.snf.verify(&self.matrix)
    }

    /// Normal form of the class of `x ∈ Zⁿ`.
    pub fn class_of(&self, x: &[i64]) -> Vec<i64> {
        let coords: Vec<i64> = self
            .kept
            .iter()
            .map(|&i| {
                let y: i128 = self.snf.u[i]
                    .iter()
                    .zip(x)
                    .map(|(a, &b)| a * b as i128)
                    .sum();
                y as i64
            })
            .collect();
        self.reduce(coords)
    }

    pub fn reduce(&self, mut x: Vec<i64>) -> Vec<i64> {
        for (c, &f) in x.iter_mut().zip(&self.factors) {
            if f > 0 {
                *c = c.rem_euclid(f as i64);
            }
        }
        x
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.factors.iter().product())
    }

    /// All elements of a finite group in lexicographic order.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        self.order()?;
        let mut out = vec![Vec::new()];
        for &f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..f as i64).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// `Z/3 ⊕ Z`-style description.
    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return "0".into();
        }
        self.factors
            .iter()
            .map(|&f| {
                if f == 0 {
                    "Z".to_string()
                } else {
                    format!("Z/{f}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }
}
