//! A dense simplex solver over exact rationals.
//!
//! Two-phase tableau method with Bland's anti-cycling rule throughout:
//! the entering column is the lowest-index column with positive reduced
//! cost, the leaving row breaks ratio ties by the lowest basic variable
//! index. Every pivot is exact, so the reported optimum is the true
//! rational optimum. Instance sizes in this crate are desk scale (a few
//! hundred variables), which a dense tableau handles comfortably.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

/// Minimize `minimize · x` subject to the constraints; `nonneg[j]` marks
/// `x_j ≥ 0`, other variables are free.
#[derive(Clone, Debug)]
pub struct Program {
    pub minimize: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    BadArity { index: usize, got: usize, expected: usize },
    #[error("nonneg marks {got} variables, expected {expected}")]
    BadNonneg { got: usize, expected: usize },
}

struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side.
    rows: Vec<Vec<Rat>>,
    cost: Vec<Rat>,
    cost_rhs: Rat,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = {
            let p = &self.rows[row][col];
            debug_assert!(!p.is_zero());
            p.recip()
        };
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    r[j] -= &f * pv;
                }
            }
            debug_assert!(r[col].is_zero());
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (j, pv) in pivot_row.iter().enumerate().take(self.cols) {
                if !pv.is_zero() {
                    self.cost[j] -= &f * pv;
                }
            }
            self.cost_rhs -= &f * &pivot_row[self.cols];
            debug_assert!(self.cost[col].is_zero());
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule to optimality over the allowed columns. Returns
    /// false on an unbounded direction.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols)
                .find(|&j| allowed[j] && self.cost[j].is_positive());
            let Some(col) = entering else { return true };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = self.rhs(i) / &self.rows[i][col];
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            ratio < *b
                                || (ratio == *b
                                    && self.basis[i] < self.basis[leave.unwrap()])
                        }
                    };
                    if better {
                        best = Some(ratio);
                        leave = Some(i);
                    }
                }
            }
            match leave {
                Some(row) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Solves the program exactly.
pub fn solve(program: &Program) -> Result<Solution, ProgramError> {
    let n = program.minimize.len();
    if program.nonneg.len() != n {
        return Err(ProgramError::BadNonneg { got: program.nonneg.len(), expected: n });
    }
    for (index, c) in program.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(ProgramError::BadArity { index, got: c.coeffs.len(), expected: n });
        }
    }

    // Column layout: positive part of every variable, negative parts of the
    // free variables, slack/surplus columns, artificial columns.
    let m = program.constraints.len();
    let neg_col: Vec<Option<usize>> = {
        let mut next = n;
        program
            .nonneg
            .iter()
            .map(|&nn| {
                if nn {
                    None
                } else {
                    let c = next;
                    next += 1;
                    Some(c)
                }
            })
            .collect()
    };
    let split = n + neg_col.iter().flatten().count();
    let n_slack = program
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let n_artificial = program
        .constraints
        .iter()
        .filter(|c| {
            let flipped = c.rhs.is_negative();
            let rel = effective_relation(c.relation, flipped);
            rel != Relation::Le
        })
        .count();
    let cols = split + n_slack + n_artificial;

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    let mut slack_at = split;
    let mut art_at = split + n_slack;
    let mut artificial_cols = Vec::new();
    for c in &program.constraints {
        let flipped = c.rhs.is_negative();
        let sign = if flipped { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); cols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = a * &sign;
            row[j] = v.clone();
            if let Some(nc) = neg_col[j] {
                row[nc] = -v;
            }
        }
        row[cols] = if flipped { -c.rhs.clone() } else { c.rhs.clone() };
        let rel = effective_relation(c.relation, flipped);
        let i = rows.len();
        match rel {
            Relation::Le => {
                row[slack_at] = Rat::one();
                basis[i] = slack_at;
                slack_at += 1;
            }
            Relation::Ge => {
                row[slack_at] = -Rat::one();
                slack_at += 1;
                row[art_at] = Rat::one();
                basis[i] = art_at;
                artificial_cols.push(art_at);
                art_at += 1;
            }
            Relation::Eq => {
                row[art_at] = Rat::one();
                basis[i] = art_at;
                artificial_cols.push(art_at);
                art_at += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau { rows, cost: vec![Rat::zero(); cols], cost_rhs: Rat::zero(), basis, cols };

    // Phase 1: minimize the sum of artificials. Reduced costs are stored as
    // z_j − c_j, so the initial row is the sum of the artificial-basic rows
    // with the artificial columns themselves at zero.
    if !artificial_cols.is_empty() {
        for i in 0..t.rows.len() {
            if artificial_cols.contains(&t.basis[i]) {
                for j in 0..cols {
                    let v = t.rows[i][j].clone();
                    t.cost[j] += v;
                }
                t.cost_rhs += t.rows[i][cols].clone();
            }
        }
        for &a in &artificial_cols {
            t.cost[a] = Rat::zero();
        }
        let allowed = vec![true; cols];
        let bounded = t.optimize(&allowed);
        debug_assert!(bounded, "phase 1 is bounded below by zero");
        if !t.cost_rhs.is_zero() {
            return Ok(Solution::Infeasible);
        }
        // Drive remaining artificials out of the basis; rows that cannot
        // pivot are redundant and dropped.
        let mut i = 0;
        while i < t.rows.len() {
            if artificial_cols.contains(&t.basis[i]) {
                let col = (0..split).find(|&j| !t.rows[i][j].is_zero());
                match col {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2: the real objective over the split columns.
    let mut cost2 = vec![Rat::zero(); cols];
    for (j, c) in program.minimize.iter().enumerate() {
        cost2[j] = -c.clone();
        if let Some(nc) = neg_col[j] {
            cost2[nc] = c.clone();
        }
    }
    t.cost = cost2;
    t.cost_rhs = Rat::zero();
    for i in 0..t.rows.len() {
        let b = t.basis[i];
        if !t.cost[b].is_zero() {
            let f = t.cost[b].clone();
            for j in 0..cols {
                let v = &t.rows[i][j] * &f;
                t.cost[j] -= v;
            }
            t.cost_rhs -= &f * t.rhs(i);
        }
    }
    let mut allowed = vec![true; cols];
    for &a in &artificial_cols {
        allowed[a] = false;
    }
    if !t.optimize(&allowed) {
        return Ok(Solution::Unbounded);
    }

    let mut expanded = vec![Rat::zero(); cols];
    for i in 0..t.rows.len() {
        expanded[t.basis[i]] = t.rhs(i).clone();
    }
    let mut point = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = expanded[j].clone();
        if let Some(nc) = neg_col[j] {
            v -= &expanded[nc];
        }
        point.push(v);
    }
    let value = program
        .minimize
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .fold(Rat::zero(), |acc, v| acc + v);
    Ok(Solution::Optimal { value, point })
}

fn effective_relation(rel: Relation, flipped: bool) -> Relation {
    if !flipped {
        return rel;
    }
    match rel {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}
