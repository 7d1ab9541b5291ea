use super::{Bounds, LpError, LpProblem, LpSolution, Optimum, Relation, Sense};
use crate::rational::Rational;

// How an original variable is expressed in nonnegative tableau columns.
enum Mapping {
    // x = offset + y
    Shift { col: usize, offset: Rational },
    // x = offset - y
    Reflect { col: usize, offset: Rational },
    // x = y+ - y-
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    // rows of A (structural + slack columns), b >= 0
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    // minimization costs over structural + slack columns
    costs: Vec<Rational>,
    names: Vec<String>,
    mapping: Vec<Mapping>,
    // a column usable as the initial basic variable of each row, if any
    initial_basic: Vec<Option<usize>>,
}

fn standard_form(problem: &LpProblem) -> StandardForm {
    let mut names = Vec::new();
    let mut mapping = Vec::with_capacity(problem.variables.len());
    // pending upper-bound rows: (column, bound)
    let mut upper_rows: Vec<(usize, Rational, String)> = Vec::new();

    for (name, Bounds { lower, upper }) in problem.variables.iter().zip(&problem.bounds) {
        let col = names.len();
        match (lower, upper) {
            (Some(l), u) => {
                names.push(name.clone());
                if let Some(u) = u {
                    upper_rows.push((col, u - l, format!("upper#{name}")));
                }
                mapping.push(Mapping::Shift {
                    col,
                    offset: l.clone(),
                });
            }
            (None, Some(u)) => {
                names.push(name.clone());
                mapping.push(Mapping::Reflect {
                    col,
                    offset: u.clone(),
                });
            }
            (None, None) => {
                names.push(format!("{name}+"));
                names.push(format!("{name}-"));
                mapping.push(Mapping::Split {
                    pos: col,
                    neg: col + 1,
                });
            }
        }
    }
    let structural = names.len();
    let slack_count = problem
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count()
        + upper_rows.len();
    let width = structural + slack_count;

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut initial_basic = Vec::new();
    let mut slack = structural;

    for (i, c) in problem.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        let mut b = c.rhs.clone();
        for (a, m) in c.coefficients.iter().zip(&mapping) {
            if a.is_zero() {
                continue;
            }
            match m {
                Mapping::Shift { col, offset } => {
                    row[*col] += a;
                    b -= a * offset;
                }
                Mapping::Reflect { col, offset } => {
                    row[*col] -= a;
                    b -= a * offset;
                }
                Mapping::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
            }
        }
        let mut slack_col = None;
        match c.relation {
            Relation::Le => {
                row[slack] = Rational::one();
                slack_col = Some(slack);
                names.push(format!("slack#{i}"));
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack_col = Some(slack);
                names.push(format!("slack#{i}"));
                slack += 1;
            }
            Relation::Eq => {}
        }
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        let basic = slack_col.filter(|&s| row[s] == 1);
        rows.push(row);
        rhs.push(b);
        initial_basic.push(basic);
    }
    for (col, bound, name) in upper_rows {
        let mut row = vec![Rational::zero(); width];
        row[col] = Rational::one();
        row[slack] = Rational::one();
        names.push(name);
        let mut b = bound;
        let mut basic = Some(slack);
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
            basic = None;
        }
        slack += 1;
        rows.push(row);
        rhs.push(b);
        initial_basic.push(basic);
    }

    let mut costs = vec![Rational::zero(); width];
    let sign = match problem.sense {
        Sense::Minimize => Rational::one(),
        Sense::Maximize => -Rational::one(),
    };
    for (c, m) in problem.objective.iter().zip(&mapping) {
        let c = &sign * c;
        match m {
            Mapping::Shift { col, .. } => costs[*col] += &c,
            Mapping::Reflect { col, .. } => costs[*col] -= &c,
            Mapping::Split { pos, neg } => {
                costs[*pos] += &c;
                costs[*neg] -= &c;
            }
        }
    }

    StandardForm {
        rows,
        rhs,
        costs,
        names,
        mapping,
        initial_basic,
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    // reduced costs of the current phase
    reduced: Vec<Rational>,
    // columns that may not enter the basis
    blocked: Vec<bool>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.rows[r][e].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                self.rows[i][j] -= d;
            }
            let d = &f * &pivot_rhs;
            self.rhs[i] -= d;
        }
        if !self.reduced[e].is_zero() {
            let f = self.reduced[e].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                self.reduced[j] -= d;
            }
        }
        self.basis[r] = e;
    }

    fn price(&mut self, costs: &[Rational]) {
        let mut reduced = costs.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    reduced[j] -= cb * v;
                }
            }
        }
        self.reduced = reduced;
    }

    // Bland's rule: lowest-index improving column, then lowest basic index
    // among minimum-ratio rows.
    fn run(&mut self) -> Outcome {
        loop {
            let entering = (0..self.reduced.len())
                .find(|&j| !self.blocked[j] && self.reduced[j].is_negative());
            let Some(e) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Outcome::Unbounded,
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }
}

/// Solves an LP exactly with the two-phase simplex method and Bland's rule.
pub fn solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let sf = standard_form(problem);
    let m = sf.rows.len();
    let width = sf.costs.len();

    // artificial columns for rows without a ready basic slack
    let needs_art: Vec<usize> = (0..m).filter(|&i| sf.initial_basic[i].is_none()).collect();
    let total = width + needs_art.len();
    let mut rows = sf.rows;
    for row in rows.iter_mut() {
        row.resize(total, Rational::zero());
    }
    let mut basis: Vec<usize> = sf.initial_basic.iter().map(|b| b.unwrap_or(0)).collect();
    for (k, &i) in needs_art.iter().enumerate() {
        rows[i][width + k] = Rational::one();
        basis[i] = width + k;
    }

    let mut t = Tableau {
        rows,
        rhs: sf.rhs,
        basis,
        reduced: Vec::new(),
        blocked: vec![false; total],
    };

    if !needs_art.is_empty() {
        let mut phase1 = vec![Rational::zero(); total];
        for c in phase1.iter_mut().skip(width) {
            *c = Rational::one();
        }
        t.price(&phase1);
        t.run();
        let infeasibility: Rational = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(b, _)| **b >= width)
            .map(|(_, v)| v)
            .sum();
        if !infeasibility.is_zero() {
            return Ok(LpSolution::Infeasible);
        }
        // drive remaining (zero-level) artificials out, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] < width {
                i += 1;
                continue;
            }
            match (0..width).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                }
            }
        }
        for b in t.blocked.iter_mut().skip(width) {
            *b = true;
        }
    }

    let mut costs = sf.costs;
    costs.resize(total, Rational::zero());
    t.price(&costs);
    if let Outcome::Unbounded = t.run() {
        return Ok(LpSolution::Unbounded);
    }

    let mut y = vec![Rational::zero(); width];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < width {
            y[b] = t.rhs[i].clone();
        }
    }
    let point: Vec<Rational> = sf
        .mapping
        .iter()
        .map(|m| match m {
            Mapping::Shift { col, offset } => offset + &y[*col],
            Mapping::Reflect { col, offset } => offset - &y[*col],
            Mapping::Split { pos, neg } => &y[*pos] - &y[*neg],
        })
        .collect();
    debug_assert!(problem.is_feasible(&point), "simplex returned an infeasible point");
    let value = problem.objective_value(&point);
    let mut basic: Vec<usize> = t.basis.iter().copied().filter(|&b| b < width).collect();
    basic.sort_unstable();
    let basis = basic.into_iter().map(|b| sf.names[b].clone()).collect();
    Ok(LpSolution::Optimal(Optimum {
        value,
        point,
        basis,
    }))
}
