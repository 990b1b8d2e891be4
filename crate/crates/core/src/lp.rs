//! Dense two-phase simplex over exact rationals.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving basic variable among ratio ties), so the solver always terminates
//! and returns the same vertex for the same input.

use num::{Signed, Zero};

use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `minimize objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_orig: usize,
    /// Columns at or after this index are artificial.
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        let m = lp.constraints.len();
        let slack_count = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();

        // Normalise to non-negative right-hand sides.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let artificial_count = normalized.iter().filter(|(_, rel, _)| *rel != Relation::Le).count();

        let first_artificial = n + slack_count;
        let width = first_artificial + artificial_count;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut artificial = first_artificial;
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![Rational::zero(); width + 1];
            row[..n].clone_from_slice(&coeffs);
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[slack] = int(1);
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = int(-1);
                    slack += 1;
                    row[artificial] = int(1);
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = int(1);
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            num_orig: n,
            first_artificial,
            width,
        }
    }

    fn run(mut self, objective: &[Rational]) -> LpOutcome {
        // Phase 1: minimise the sum of artificials.
        if self.first_artificial < self.width {
            let phase1: Vec<Rational> = (0..self.width)
                .map(|c| {
                    if c >= self.first_artificial {
                        int(1)
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            if !self.optimize(&phase1, self.width) {
                unreachable!("phase one is bounded below by zero");
            }
            if !self.current_value(&phase1).is_zero() {
                return LpOutcome::Infeasible;
            }
            self.evict_artificials();
        }

        let mut costs = vec![Rational::zero(); self.width];
        costs[..self.num_orig].clone_from_slice(objective);
        if !self.optimize(&costs, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.num_orig];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_orig {
                x[b] = self.rows[r][self.width].clone();
            }
        }
        let value = objective
            .iter()
            .zip(&x)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v);
        LpOutcome::Optimal { x, value }
    }

    fn current_value(&self, costs: &[Rational]) -> Rational {
        self.basis.iter().enumerate().fold(Rational::zero(), |acc, (r, &b)| {
            acc + &costs[b] * &self.rows[r][self.width]
        })
    }

    fn reduced_cost(&self, costs: &[Rational], col: usize) -> Rational {
        self.basis.iter().enumerate().fold(costs[col].clone(), |acc, (r, &b)| {
            if self.rows[r][col].is_zero() {
                acc
            } else {
                acc - &costs[b] * &self.rows[r][col]
            }
        })
    }

    /// Runs Bland-rule pivots over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, costs: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|c| !self.basis.contains(c))
                .find(|&c| self.reduced_cost(costs, c).is_negative());
            let Some(col) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][self.width] / a;
                let better = match &leaving {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((row, _)) = leaving else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// After a feasible phase one, pivots zero-level artificials out of the
    /// basis and drops rows that are linearly redundant.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                match (0..self.first_artificial).find(|&c| !self.rows[r][c].is_zero()) {
                    Some(c) => {
                        self.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn r(v: i64) -> Rational {
        int(v)
    }

    #[test]
    fn simple_minimum() {
        // min x + y  s.t. x + 2y >= 2, 3x + y >= 3
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![r(1), r(1)];
        lp.add(vec![r(1), r(2)], Relation::Ge, r(2));
        lp.add(vec![r(3), r(1)], Relation::Ge, r(3));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(7, 5));
                assert_eq!(x, vec![rat(4, 5), rat(3, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![r(1)];
        lp.add(vec![r(1)], Relation::Le, r(1));
        lp.add(vec![r(1)], Relation::Ge, r(2));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.objective = vec![r(-1), r(0)];
        lp.add(vec![r(1), r(-1)], Relation::Le, r(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![r(2), r(1)];
        lp.add(vec![r(1), r(1)], Relation::Eq, r(1));
        lp.add(vec![r(2), r(2)], Relation::Eq, r(2));
        lp.add(vec![r(1), r(0)], Relation::Ge, rat(1, 3));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(4, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x <= -2  <=>  x >= 2
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![r(1)];
        lp.add(vec![r(-1)], Relation::Le, r(-2));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(2)),
            other => panic!("{other:?}"),
        }
    }

    /// Brute-force oracle: enumerates every basis of the equality form
    /// `[A | I] (x, s) = b` and keeps the best feasible basic solution.
    fn vertex_enumeration(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Option<Rational> {
        let m = a.len();
        let n = c.len();
        let total = n + m;
        let column = |j: usize| -> Vec<Rational> {
            (0..m)
                .map(|i| {
                    if j < n {
                        r(a[i][j])
                    } else if j - n == i {
                        r(1)
                    } else {
                        r(0)
                    }
                })
                .collect()
        };
        let mut best: Option<Rational> = None;
        for basis in (0..total).combinations(m) {
            // Solve the m x m system by rational Gauss-Jordan.
            let mut aug: Vec<Vec<Rational>> = (0..m)
                .map(|i| {
                    let mut row: Vec<Rational> = basis.iter().map(|&j| column(j)[i].clone()).collect();
                    row.push(r(b[i]));
                    row
                })
                .collect();
            let mut singular = false;
            for col in 0..m {
                let Some(p) = (col..m).find(|&i| !aug[i][col].is_zero()) else {
                    singular = true;
                    break;
                };
                aug.swap(col, p);
                let pv = aug[col][col].clone();
                for v in aug[col].iter_mut() {
                    *v = &*v / &pv;
                }
                let prow = aug[col].clone();
                for (i, row) in aug.iter_mut().enumerate() {
                    if i != col && !row[col].is_zero() {
                        let f = row[col].clone();
                        for (v, pvv) in row.iter_mut().zip(&prow) {
                            *v = &*v - &f * pvv;
                        }
                    }
                }
            }
            if singular {
                continue;
            }
            let vals: Vec<Rational> = aug.iter().map(|row| row[m].clone()).collect();
            if vals.iter().any(|v| v.is_negative()) {
                continue;
            }
            let obj = basis
                .iter()
                .zip(&vals)
                .filter(|(&j, _)| j < n)
                .fold(r(0), |acc, (&j, v)| acc + r(c[j]) * v);
            if best.as_ref().is_none_or(|b| obj < *b) {
                best = Some(obj);
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            a in prop::collection::vec(prop::collection::vec(0i64..4, 3), 2..=3),
            b in prop::collection::vec(1i64..6, 3),
            c in prop::collection::vec(-3i64..3, 3),
        ) {
            // Bounded region: A x <= b with A >= 0 plus x_j <= 5 rows.
            let m = a.len();
            let mut rows = a.clone();
            let mut rhs = b[..m].to_vec();
            for j in 0..3 {
                let mut row = vec![0; 3];
                row[j] = 1;
                rows.push(row);
                rhs.push(5);
            }
            let mut lp = LinearProgram::new(3);
            lp.objective = c.iter().map(|&v| r(v)).collect();
            for (row, &bv) in rows.iter().zip(&rhs) {
                lp.add(row.iter().map(|&v| r(v)).collect(), Relation::Le, r(bv));
            }
            let expected = vertex_enumeration(&rows, &rhs, &c);
            match lp.solve() {
                LpOutcome::Optimal { value, x } => {
                    prop_assert_eq!(Some(value), expected);
                    prop_assert!(x.iter().all(|v| !v.is_negative()));
                }
                other => prop_assert!(false, "unexpected {:?}", other),
            }
        }
    }
}
