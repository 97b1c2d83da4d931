//! Dense exact-rational simplex for the small certificate systems produced
//! by the distortion decision. Standard form max c.x subject to A x = b,
//! x >= 0, solved in two phases with Bland's rule, which guarantees
//! termination without any numeric tolerance.

use crate::rat::{rat_i, Rat};
use num::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct StandardLp {
    /// Row-major constraint matrix.
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    /// Objective to maximize.
    pub c: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// m x (ncols + 1) rows; the last column is the right-hand side.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Rat::one() / self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..=self.ncols {
                let delta = &factor * &self.rows[row][j];
                self.rows[i][j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Maximize obj over allowed columns with Bland's rule. Returns false on
    /// unboundedness. `allowed` masks columns that may enter the basis.
    fn optimize(&mut self, obj: &[Rat], allowed: &[bool]) -> bool {
        loop {
            // Reduced costs from the current basis.
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = obj[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !obj[bi].is_zero() {
                        rc -= &obj[bi] * &self.rows[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };
            // Minimum ratio, ties to the smallest basis index (Bland).
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.rows[i][col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn solution(&self, nvars: usize) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); nvars];
        for (i, &bi) in self.basis.iter().enumerate() {
            if bi < nvars {
                x[bi] = self.rhs(i).clone();
            }
        }
        x
    }
}

pub fn solve(lp: &StandardLp) -> LpOutcome {
    let m = lp.a.len();
    let nvars = lp.c.len();
    for row in &lp.a {
        assert_eq!(row.len(), nvars, "ragged constraint matrix");
    }
    let ncols = nvars + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rat> = Vec::with_capacity(ncols + 1);
        let flip = lp.b[i].is_negative();
        for j in 0..nvars {
            row.push(if flip {
                -lp.a[i][j].clone()
            } else {
                lp.a[i][j].clone()
            });
        }
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -lp.b[i].clone() } else { lp.b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (nvars..ncols).collect(),
        ncols,
    };
    // Phase 1: drive the artificial variables to zero.
    let mut phase1 = vec![Rat::zero(); ncols];
    for j in nvars..ncols {
        phase1[j] = rat_i(-1);
    }
    let allowed = vec![true; ncols];
    let ok = t.optimize(&phase1, &allowed);
    assert!(ok, "phase 1 is bounded by construction");
    let infeasibility: Rat = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= nvars)
        .map(|(i, _)| t.rhs(i).clone())
        .sum();
    if !infeasibility.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Remove leftover artificial basics (degenerate rows): pivot to any real
    // column, or drop the row as redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= nvars {
            if let Some(col) = (0..nvars).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, col);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    // Phase 2 over the real columns only.
    let mut obj = vec![Rat::zero(); ncols];
    obj[..nvars].clone_from_slice(&lp.c);
    let mut allowed = vec![false; ncols];
    allowed[..nvars].fill(true);
    if !t.optimize(&obj, &allowed) {
        return LpOutcome::Unbounded;
    }
    let x = t.solution(nvars);
    let value = lp
        .c
        .iter()
        .zip(&x)
        .map(|(ci, xi)| ci * xi)
        .sum();
    LpOutcome::Optimal { x, value }
}
