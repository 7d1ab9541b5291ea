use std::collections::BTreeSet;

use super::linalg::{binomial, dot, for_each_combination, rref, solve_square};
use super::{LpError, Polytope, Relation};
use crate::rational::Rational;

pub const MAX_VERTEX_DIMENSION: usize = 12;
const MAX_BASES: u128 = 20_000_000;

// Inequalities g·z <= h in the reduced coordinates of the equality hull.
struct Reduced {
    g: Vec<Vec<Rational>>,
    h: Vec<Rational>,
    k: usize,
}

fn reduced_vertices(r: &Reduced) -> Result<Vec<Vec<Rational>>, LpError> {
    let m = r.g.len();
    let count = binomial(m, r.k);
    if count > MAX_BASES {
        return Err(LpError::TooManyBases(count));
    }
    let mut found = BTreeSet::new();
    if r.k == 0 {
        if r.h.iter().all(|h| !h.is_negative()) {
            found.insert(Vec::new());
        }
        return Ok(found.into_iter().collect());
    }
    for_each_combination(m, r.k, |rows| {
        let a: Vec<Vec<Rational>> = rows.iter().map(|&i| r.g[i].clone()).collect();
        let b: Vec<Rational> = rows.iter().map(|&i| r.h[i].clone()).collect();
        let Some(z) = solve_square(&a, &b) else {
            return;
        };
        if r.g.iter().zip(&r.h).all(|(g, h)| dot(g, &z) <= *h) {
            found.insert(z);
        }
    });
    Ok(found.into_iter().collect())
}

/// All vertices of a bounded polytope, exactly and without duplicates.
///
/// Equalities are eliminated first; vertices are then the feasible unique
/// solutions of every choice of `dimension - rank` active inequalities. An
/// empty region yields an empty list. A region whose recession cone is not
/// `{0}` is reported as [`LpError::UnboundedRegion`].
pub fn enumerate_vertices(polytope: &Polytope) -> Result<Vec<Vec<Rational>>, LpError> {
    let d = polytope.dimension;
    if d == 0 {
        return Err(LpError::NoVariables);
    }
    if d > MAX_VERTEX_DIMENSION {
        return Err(LpError::DimensionTooLarge {
            got: d,
            max: MAX_VERTEX_DIMENSION,
        });
    }
    if polytope.bounds.len() != d {
        return Err(LpError::DimensionMismatch {
            what: "bounds".into(),
            expected: d,
            got: polytope.bounds.len(),
        });
    }

    let mut eq_rows = Vec::new();
    let mut eq_rhs = Vec::new();
    let mut le_rows: Vec<Vec<Rational>> = Vec::new();
    let mut le_rhs = Vec::new();
    for (i, c) in polytope.constraints.iter().enumerate() {
        if c.coefficients.len() != d {
            return Err(LpError::DimensionMismatch {
                what: format!("constraint {i}"),
                expected: d,
                got: c.coefficients.len(),
            });
        }
        match c.relation {
            Relation::Eq => {
                eq_rows.push(c.coefficients.clone());
                eq_rhs.push(c.rhs.clone());
            }
            Relation::Le => {
                le_rows.push(c.coefficients.clone());
                le_rhs.push(c.rhs.clone());
            }
            Relation::Ge => {
                le_rows.push(c.coefficients.iter().map(|v| -v).collect());
                le_rhs.push(-&c.rhs);
            }
        }
    }
    for (j, b) in polytope.bounds.iter().enumerate() {
        let unit = |s: i64| {
            let mut row = vec![Rational::zero(); d];
            row[j] = Rational::from_integer(s);
            row
        };
        if let Some(l) = &b.lower {
            le_rows.push(unit(-1));
            le_rhs.push(-l);
        }
        if let Some(u) = &b.upper {
            le_rows.push(unit(1));
            le_rhs.push(u.clone());
        }
    }

    let ech = rref(&eq_rows, &eq_rhs, d);
    if ech.inconsistent {
        return Ok(Vec::new());
    }
    // x = x0 + N z over the free columns
    let free: Vec<usize> = (0..d).filter(|c| !ech.pivots.contains(c)).collect();
    let k = free.len();
    let mut x0 = vec![Rational::zero(); d];
    for (i, &p) in ech.pivots.iter().enumerate() {
        x0[p] = ech.rhs[i].clone();
    }
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); d];
            v[f] = Rational::one();
            for (i, &p) in ech.pivots.iter().enumerate() {
                v[p] = -&ech.rows[i][f];
            }
            v
        })
        .collect();
    let g: Vec<Vec<Rational>> = le_rows
        .iter()
        .map(|a| basis.iter().map(|n| dot(a, n)).collect())
        .collect();
    let h: Vec<Rational> = le_rows
        .iter()
        .zip(&le_rhs)
        .map(|(a, b)| b - dot(a, &x0))
        .collect();

    if k > 0 {
        // recession cone {g z <= 0} intersected with the unit box
        let mut cone_g = g.clone();
        let mut cone_h = vec![Rational::zero(); g.len()];
        for i in 0..k {
            for s in [1, -1] {
                let mut row = vec![Rational::zero(); k];
                row[i] = Rational::from_integer(s);
                cone_g.push(row);
                cone_h.push(Rational::one());
            }
        }
        let cone = reduced_vertices(&Reduced {
            g: cone_g,
            h: cone_h,
            k,
        })?;
        if cone.iter().any(|z| z.iter().any(|v| !v.is_zero())) {
            return Err(LpError::UnboundedRegion);
        }
    }

    let zs = reduced_vertices(&Reduced { g, h, k })?;
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for z in zs {
        let mut x = x0.clone();
        for (zi, n) in z.iter().zip(&basis) {
            for (xj, nj) in x.iter_mut().zip(n) {
                if !nj.is_zero() {
                    *xj += zi * nj;
                }
            }
        }
        out.insert(x);
    }
    Ok(out.into_iter().collect())
}

/// Vertices of the split polyhedron `{(p⁺, p⁻) ≥ 0 : A(p⁺ − p⁻) = b}`,
/// reported as `w = p⁺ − p⁻`.
///
/// These are exactly the basic solutions of `A w = b`: pick `rank(A)`
/// linearly independent columns, solve, zero the rest. Any L1-minimal
/// solution of `A w = b` is attained at one of them.
pub fn split_vertices(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Vec<Rational>>, LpError> {
    let cols = a.first().map_or(0, Vec::len);
    if cols == 0 {
        return Err(LpError::NoVariables);
    }
    if b.len() != a.len() {
        return Err(LpError::DimensionMismatch {
            what: "right-hand side".into(),
            expected: a.len(),
            got: b.len(),
        });
    }
    if let Some((i, row)) = a.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(LpError::DimensionMismatch {
            what: format!("row {i}"),
            expected: cols,
            got: row.len(),
        });
    }
    let ech = rref(a, b, cols);
    if ech.inconsistent {
        return Ok(Vec::new());
    }
    let r = ech.pivots.len();
    let count = binomial(cols, r);
    if count > MAX_BASES {
        return Err(LpError::TooManyBases(count));
    }
    let mut found = BTreeSet::new();
    for_each_combination(cols, r, |chosen| {
        let sub: Vec<Vec<Rational>> = ech
            .rows
            .iter()
            .map(|row| chosen.iter().map(|&c| row[c].clone()).collect())
            .collect();
        if let Some(sol) = solve_square(&sub, &ech.rhs) {
            let mut w = vec![Rational::zero(); cols];
            for (&c, v) in chosen.iter().zip(sol) {
                w[c] = v;
            }
            found.insert(w);
        }
    });
    Ok(found.into_iter().collect())
}
