//! Exact feasibility testing for systems of linear constraints over Q.
//!
//! Phase-1 simplex on arbitrary-precision rationals with Bland's rule, so
//! termination is guaranteed and answers are exact. A feasible system yields
//! a witness point (a basic solution); variables are identified by name and
//! ordered lexicographically, making the witness deterministic.

use crate::arith::Rat;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LinConstraint {
    pub coeffs: BTreeMap<String, Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl LinConstraint {
    pub fn new(coeffs: Vec<(String, Rat)>, rel: Rel, rhs: Rat) -> Self {
        let mut map: BTreeMap<String, Rat> = BTreeMap::new();
        for (name, c) in coeffs {
            *map.entry(name).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        LinConstraint { coeffs: map, rel, rhs }
    }

    pub fn satisfied_by(&self, point: &BTreeMap<String, Rat>) -> bool {
        let lhs: Rat = self
            .coeffs
            .iter()
            .map(|(name, c)| c * point.get(name).cloned().unwrap_or_else(Rat::zero))
            .sum();
        match self.rel {
            Rel::Ge => lhs >= self.rhs,
            Rel::Le => lhs <= self.rhs,
            Rel::Eq => lhs == self.rhs,
        }
    }
}

/// Feasibility over unrestricted rational variables. Returns a satisfying
/// assignment (zero for variables not mentioned in any constraint), or `None`
/// when the system has no solution.
pub fn lp_feasible(constraints: &[LinConstraint]) -> Option<BTreeMap<String, Rat>> {
    let mut names: Vec<String> = Vec::new();
    for c in constraints {
        for name in c.coeffs.keys() {
            if !names.contains(name) {
                names.push(name.clone());
            }
        }
    }
    names.sort();
    let index: BTreeMap<&str, usize> = names.iter().map(|n| n.as_str()).zip(0..).collect();
    let n = names.len();

    // Free variable x_i becomes plus_i - minus_i with both parts nonnegative;
    // each Ge/Le row gets a surplus variable. Artificials complete the basis.
    let n_slack = constraints.iter().filter(|c| c.rel != Rel::Eq).count();
    let width = 2 * n + n_slack;
    let m = constraints.len();
    let mut a = vec![vec![Rat::zero(); width]; m];
    let mut b = vec![Rat::zero(); m];
    let mut slack_at = 0;
    for (i, c) in constraints.iter().enumerate() {
        let flip = c.rel == Rel::Le;
        for (name, coeff) in &c.coeffs {
            let j = index[name.as_str()];
            let v = if flip { -coeff } else { coeff.clone() };
            a[i][2 * j] = v.clone();
            a[i][2 * j + 1] = -v;
        }
        b[i] = if flip { -c.rhs.clone() } else { c.rhs.clone() };
        if c.rel != Rel::Eq {
            a[i][2 * n + slack_at] = -Rat::one();
            slack_at += 1;
        }
    }

    let x = solve_standard_form(a, b)?;
    let mut out = BTreeMap::new();
    for (j, name) in names.iter().enumerate() {
        out.insert(name.clone(), x[2 * j].clone() - x[2 * j + 1].clone());
    }
    Some(out)
}

/// Finds x >= 0 with a x = b, or `None`. Phase-1 simplex with Bland's rule.
fn solve_standard_form(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let m = a.len();
    let width = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![]);
    }
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    // Tableau columns: structural then artificial; artificials start basic.
    let total = width + m;
    let mut t: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (width..total).collect();
    // Reduced costs for minimizing the artificial sum, priced out over the
    // initial basis: d_j = sum of column j, value = sum of b.
    let mut d: Vec<Rat> = (0..total)
        .map(|j| {
            if j >= width {
                Rat::zero()
            } else {
                (0..m).map(|i| t[i][j].clone()).sum()
            }
        })
        .collect();
    let mut val: Rat = b.iter().cloned().sum();

    loop {
        // Bland entering rule: lowest-index structural column with d > 0.
        let enter = match (0..width).find(|&j| d[j].is_positive()) {
            None => break,
            Some(j) => j,
        };
        // Ratio test; ties leave the row whose basic variable has lowest index.
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][total] / &t[i][enter];
            let better = match leave {
                None => true,
                Some(l) => {
                    let cur = &t[l][total] / &t[l][enter];
                    ratio < cur || (ratio == cur && basis[i] < basis[l])
                }
            };
            if better {
                leave = Some(i);
            }
        }
        let leave = leave.expect("bounded objective cannot have an unbounded column");
        // Pivot at (leave, enter).
        let pivot = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v = &*v / &pivot;
        }
        for i in 0..m {
            if i == leave || t[i][enter].is_zero() {
                continue;
            }
            let factor = t[i][enter].clone();
            for j in 0..=total {
                let sub = &factor * &t[leave][j];
                t[i][j] = &t[i][j] - sub;
            }
        }
        let factor = d[enter].clone();
        for j in 0..total {
            let sub = &factor * &t[leave][j];
            d[j] = &d[j] - sub;
        }
        val = &val - &factor * &t[leave][total];
        basis[leave] = enter;
    }

    if !val.is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); width];
    for i in 0..m {
        if basis[i] < width {
            x[basis[i]] = t[i][total].clone();
        }
    }
    Some(x)
}
