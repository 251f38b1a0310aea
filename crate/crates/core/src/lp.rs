//! Exact linear programming over ℚ.
//!
//! A dense two-phase simplex with Bland's rule. Problems in this crate are
//! tiny (a handful of variables and constraints), so clarity wins over speed.

use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

/// maximize `objective · x` subject to the rows; variables are free unless
/// marked nonnegative.
#[derive(Clone, Debug)]
pub(crate) struct LinearProgram {
    nvars: usize,
    nonneg: Vec<bool>,
    rows: Vec<(Vec<Rat>, Relation, Rat)>,
    objective: Vec<Rat>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            nonneg: vec![false; nvars],
            rows: Vec::new(),
            objective: vec![Rat::zero(); nvars],
        }
    }

    pub fn all_nonneg(mut self) -> Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    pub fn constraint(&mut self, coef: Vec<Rat>, rel: Relation, rhs: Rat) {
        debug_assert_eq!(coef.len(), self.nvars);
        self.rows.push((coef, rel, rhs));
    }

    pub fn maximize(mut self, objective: Vec<Rat>) -> LpOutcome {
        debug_assert_eq!(objective.len(), self.nvars);
        self.objective = objective;
        self.solve()
    }

    pub fn feasible_point(self) -> Option<Vec<Rat>> {
        let n = self.nvars;
        match self.maximize(vec![Rat::zero(); n]) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    fn solve(&self) -> LpOutcome {
        // Column layout: structural (split for free vars), slacks, artificials.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for j in 0..self.nvars {
            if self.nonneg[j] {
                col_of.push((ncols, None));
                ncols += 1;
            } else {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let n_struct = ncols;
        let m = self.rows.len();
        let n_slack = self
            .rows
            .iter()
            .filter(|(_, r, _)| *r != Relation::Eq)
            .count();
        let n_art = m;
        let total = n_struct + n_slack + n_art;
        let rhs_col = total;

        let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut slack = n_struct;
        for (i, (coef, rel, rhs)) in self.rows.iter().enumerate() {
            let mut row = vec![Rat::zero(); total + 1];
            for (j, a) in coef.iter().enumerate() {
                let (p, q) = col_of[j];
                row[p] = a.clone();
                if let Some(q) = q {
                    row[q] = -a;
                }
            }
            match rel {
                Relation::Le => {
                    row[slack] = Rat::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rat::from_int(-1);
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[rhs_col] = rhs.clone();
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
            row[n_struct + n_slack + i] = Rat::one();
            tab.push(row);
        }
        let mut basis: Vec<usize> = (0..m).map(|i| n_struct + n_slack + i).collect();

        // Phase 1: maximize -(sum of artificials).
        let mut cost1 = vec![Rat::zero(); total];
        for c in cost1.iter_mut().skip(n_struct + n_slack) {
            *c = Rat::from_int(-1);
        }
        let allowed_all = vec![true; total];
        if !run_simplex(&mut tab, &mut basis, &cost1, &allowed_all) {
            unreachable!("phase one is bounded");
        }
        let infeas: Rat = basis
            .iter()
            .zip(&tab)
            .filter(|(&b, _)| b >= n_struct + n_slack)
            .map(|(_, row)| row[rhs_col].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }

        // Drive artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < tab.len() {
            if basis[i] >= n_struct + n_slack {
                if let Some(j) = (0..n_struct + n_slack).find(|&j| !tab[i][j].is_zero()) {
                    pivot(&mut tab, &mut basis, i, j);
                    i += 1;
                } else {
                    tab.remove(i);
                    basis.remove(i);
                }
            } else {
                i += 1;
            }
        }

        let mut cost2 = vec![Rat::zero(); total];
        for (j, c) in self.objective.iter().enumerate() {
            let (p, q) = col_of[j];
            cost2[p] = c.clone();
            if let Some(q) = q {
                cost2[q] = -c;
            }
        }
        let mut allowed = vec![true; total];
        for a in allowed.iter_mut().skip(n_struct + n_slack) {
            *a = false;
        }
        if !run_simplex(&mut tab, &mut basis, &cost2, &allowed) {
            return LpOutcome::Unbounded;
        }

        let mut values = vec![Rat::zero(); total];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = tab[i][rhs_col].clone();
        }
        let point: Vec<Rat> = col_of
            .iter()
            .map(|&(p, q)| match q {
                Some(q) => &values[p] - &values[q],
                None => values[p].clone(),
            })
            .collect();
        let value = point.iter().zip(&self.objective).map(|(x, c)| x * c).sum();
        LpOutcome::Optimal { value, point }
    }
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for v in tab[r].iter_mut() {
        *v = &*v * &inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &(&f * pv);
            }
        }
    }
    basis[r] = c;
}

/// Maximizes `cost · x` from a feasible basis. Returns `false` if unbounded.
fn run_simplex(tab: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], allowed: &[bool]) -> bool {
    let total = cost.len();
    loop {
        let mut entering = None;
        for j in 0..total {
            if !allowed[j] || basis.contains(&j) {
                continue;
            }
            let mut reduced = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() && !tab[i][j].is_zero() {
                    reduced -= &(&cost[b] * &tab[i][j]);
                }
            }
            if reduced.is_positive() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return true;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][total] / &tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        pivot(tab, basis, r, j);
    }
}
