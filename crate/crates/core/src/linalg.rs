//! Exact Gaussian elimination with row-combination tracking.
//!
//! The game module needs two things from a rational matrix: a primitive
//! integer basis of the right-nullspace (the zero-marginal certificates)
//! and, when solving `A x = b`, the row combination proving an
//! inconsistency (which is itself a nullspace vector of the transpose).
//! Both come out of one reduced row echelon form with multipliers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

pub struct Reduction {
    /// Reduced row echelon form of the input.
    pub rref: Vec<Vec<Rat>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivot_cols: Vec<usize>,
    /// `multipliers[r] · input = rref[r]` (rows of the inverse row-op map).
    pub multipliers: Vec<Vec<Rat>>,
    pub rank: usize,
    pub cols: usize,
}

/// Full RREF with multiplier tracking. Deterministic: pivots are chosen as
/// the first row with a nonzero entry in the leftmost unresolved column.
pub fn reduce(rows: &[Vec<Rat>], cols: usize) -> Reduction {
    let m = rows.len();
    let mut rref: Vec<Vec<Rat>> = rows.to_vec();
    let mut mult: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut e = vec![Rat::zero(); m];
            e[i] = Rat::one();
            e
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m).find(|&r| !rref[r][col].is_zero()) else {
            continue;
        };
        rref.swap(rank, pivot);
        mult.swap(rank, pivot);
        let inv = rref[rank][col].recip();
        scale(&mut rref[rank], &inv);
        scale(&mut mult[rank], &inv);
        for r in 0..m {
            if r != rank && !rref[r][col].is_zero() {
                let f = rref[r][col].clone();
                axpy(&mut rref, r, rank, &f);
                axpy(&mut mult, r, rank, &f);
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    Reduction { rref, pivot_cols, multipliers: mult, rank, cols }
}

fn scale(row: &mut [Rat], f: &Rat) {
    for v in row.iter_mut() {
        if !v.is_zero() {
            *v *= f;
        }
    }
}

/// `rows[dst] -= f * rows[src]`
fn axpy(rows: &mut [Vec<Rat>], dst: usize, src: usize, f: &Rat) {
    let src_row = rows[src].clone();
    for (d, s) in rows[dst].iter_mut().zip(&src_row) {
        if !s.is_zero() {
            *d -= f * s;
        }
    }
}

impl Reduction {
    /// Solves `A x = b` given this reduction of `A`. Returns the solution
    /// with free variables at zero, or the index of an inconsistent
    /// (zero) row whose multiplier row certifies the inconsistency.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>, usize> {
        let reduced_b: Vec<Rat> = self
            .multipliers
            .iter()
            .map(|m| dot(m, b))
            .collect();
        for r in self.rank..self.rref.len() {
            if !reduced_b[r].is_zero() {
                return Err(r);
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &pc) in self.pivot_cols.iter().enumerate() {
            x[pc] = reduced_b[r].clone();
        }
        Ok(x)
    }

    /// A basis of the right-nullspace: one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &pc) in self.pivot_cols.iter().enumerate() {
                v[pc] = -self.rref[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .fold(Rat::zero(), |acc, v| acc + v)
}

/// Scales a rational vector to a primitive integer vector (content 1) with
/// its first nonzero entry positive.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for r in v {
        lcm = lcm.lcm(r.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
    let mut content = BigInt::zero();
    for i in &ints {
        content = content.gcd(i);
    }
    if !content.is_zero() && !content.is_one() {
        for i in &mut ints {
            *i /= &content;
        }
    }
    if let Some(first) = ints.iter().find(|i| !i.is_zero()) {
        if first.is_negative() {
            for i in &mut ints {
                *i = -i.clone();
            }
        }
    }
    ints
}
