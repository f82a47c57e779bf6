//! Exact two-phase simplex over the rationals with Bland's anti-cycling rule.

use num_traits::{Signed, Zero};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub cmp: Cmp,
    pub rhs: Rat,
}

/// Maximize `objective · x` subject to the constraints; variables flagged `free`
/// are unrestricted in sign, all others are nonnegative.
#[derive(Debug, Clone)]
pub struct Lp {
    pub objective: Vec<Rat>,
    pub free: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl Lp {
    pub fn new(n_vars: usize) -> Self {
        Lp { objective: vec![Rat::zero(); n_vars], free: vec![false; n_vars], constraints: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, cmp: Cmp, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.n_vars());
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over the columns accepted by `allowed`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.cols).filter(|&j| allowed(j) && !self.basis.contains(&j)).find(|&j| {
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[b] * &self.rows[i][j];
                    }
                }
                d.is_positive()
            });
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bv)) => {
                        if ratio < bv || (ratio == bv && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bv))
                        }
                    }
                };
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }

    fn value(&self, cost: &[Rat]) -> Rat {
        self.basis.iter().enumerate().fold(Rat::zero(), |acc, (i, &b)| acc + &cost[b] * self.rhs(i))
    }
}

pub fn solve(lp: &Lp) -> LpOutcome {
    let n = lp.n_vars();
    // column layout: for each variable a positive part, for free ones also a negative part
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut cols = 0;
    for j in 0..n {
        let pos = cols;
        cols += 1;
        let neg = if lp.free[j] {
            cols += 1;
            Some(cols - 1)
        } else {
            None
        };
        col_of.push((pos, neg));
    }
    let structural = cols;
    let m = lp.constraints.len();
    let slack_count = lp.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
    let total = structural + slack_count + m;
    let art_start = structural + slack_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = structural;
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut row = vec![Rat::zero(); total + 1];
        for (j, a) in con.coeffs.iter().enumerate() {
            let (p, q) = col_of[j];
            row[p] = a.clone();
            if let Some(q) = q {
                row[q] = -a.clone();
            }
        }
        match con.cmp {
            Cmp::Le => {
                row[slack] = Rat::from_integer(1.into());
                slack += 1;
            }
            Cmp::Ge => {
                row[slack] = Rat::from_integer((-1).into());
                slack += 1;
            }
            Cmp::Eq => {}
        }
        row[total] = con.rhs.clone();
        if row[total].is_negative() {
            row.iter_mut().for_each(|x| *x = -x.clone());
        }
        row[art_start + i] = Rat::from_integer(1.into());
        rows.push(row);
        basis.push(art_start + i);
    }
    let mut t = Tableau { rows, basis, cols: total };

    let mut phase1 = vec![Rat::zero(); total];
    for c in phase1.iter_mut().skip(art_start) {
        *c = Rat::from_integer((-1).into());
    }
    t.optimize(&phase1, &|_| true);
    if !t.value(&phase1).is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= art_start {
            match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut cost = vec![Rat::zero(); total];
    for (j, c) in lp.objective.iter().enumerate() {
        let (p, q) = col_of[j];
        cost[p] = c.clone();
        if let Some(q) = q {
            cost[q] = -c.clone();
        }
    }
    if !t.optimize(&cost, &|j| j < art_start) {
        return LpOutcome::Unbounded;
    }
    let mut colval = vec![Rat::zero(); total];
    for (i, &b) in t.basis.iter().enumerate() {
        colval[b] = t.rhs(i).clone();
    }
    let x: Vec<Rat> = col_of
        .iter()
        .map(|&(p, q)| match q {
            Some(q) => &colval[p] - &colval[q],
            None => colval[p].clone(),
        })
        .collect();
    let value = crate::linalg::dot(&lp.objective, &x);
    LpOutcome::Optimal { x, value }
}

/// Whether `m x = b` has a solution with `x ≥ 0`.
pub fn feasible_nonneg(m: &[Vec<Rat>], b: &[Rat]) -> bool {
    let n = m.first().map_or(0, |r| r.len());
    let mut lp = Lp::new(n);
    for (row, bi) in m.iter().zip(b) {
        lp.add(row.clone(), Cmp::Eq, bi.clone());
    }
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}
