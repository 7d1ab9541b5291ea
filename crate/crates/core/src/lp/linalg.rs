//! Dense exact linear algebra helpers shared by the vertex enumerators.

use crate::rational::Rational;

/// Reduced row echelon form of `[a | b]`.
pub(crate) struct Echelon {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    /// Pivot column of each row of `rows`.
    pub pivots: Vec<usize>,
    /// True when some zero row has a nonzero right-hand side.
    pub inconsistent: bool,
}

pub(crate) fn rref(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Echelon {
    let mut rows: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<Rational> = b.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        rhs[r] *= &inv;
        let pivot_row = rows[r].clone();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for (x, p) in rows[i].iter_mut().zip(&pivot_row).take(cols) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            let d = &f * &rhs[r];
            rhs[i] -= d;
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let inconsistent = (r..rows.len()).any(|i| !rhs[i].is_zero());
    rows.truncate(r);
    rhs.truncate(r);
    Echelon {
        rows,
        rhs,
        pivots,
        inconsistent,
    }
}

/// Solves a square system; `None` when singular.
pub(crate) fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let e = rref(a, b, n);
    if e.pivots.len() < n {
        return None;
    }
    Some(e.rhs)
}

pub(crate) fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| c * v)
        .sum()
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
