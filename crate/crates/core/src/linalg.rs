//! Small dense kernels generic over [`Scalar`]: elimination, rank, determinant.
//!
//! Matrices are row-major `Vec<Vec<S>>`. Sizes here never exceed a handful of
//! rows, so clarity wins over blocking.

use crate::scalar::Scalar;

fn max_abs<S: Scalar>(m: &[Vec<S>]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x.to_f64().abs())
        .fold(0.0, f64::max)
}

fn pivot_row<S: Scalar>(m: &[Vec<S>], col: usize, from: usize) -> Option<usize> {
    let mut best: Option<(usize, S)> = None;
    for (r, row) in m.iter().enumerate().skip(from) {
        let a = row[col].abs();
        if a.is_zero() {
            continue;
        }
        if S::EXACT {
            return Some(r);
        }
        match &best {
            Some((_, b)) if *b >= a => {}
            _ => best = Some((r, a)),
        }
    }
    best.map(|(r, _)| r)
}

/// Reduces `m` in place to row echelon form and returns the pivot columns.
fn echelon<S: Scalar>(m: &mut [Vec<S>], eps: f64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pivot_row(m, c, r) else { continue };
        if m[p][c].is_negligible(eps, scale) {
            continue;
        }
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..cols {
                let v = m[r][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], eps: f64) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m, eps).len()
}

/// Solves the square system `a x = b`; `None` when numerically singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], eps: f64) -> Option<Vec<S>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    for c in 0..n {
        let p = pivot_row(&m, c, c)?;
        if m[p][c].is_negligible(eps, scale) {
            return None;
        }
        m.swap(c, p);
        let piv = m[c][c].clone();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..=n {
                let v = m[c][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in (i + 1)..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Some(x)
}

/// Determinant by elimination (exact for rationals).
pub fn determinant<S: Scalar>(a: &[Vec<S>]) -> S {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = S::one();
    for c in 0..n {
        let Some(p) = pivot_row(&m, c, c) else {
            return S::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        let piv = m[c][c].clone();
        det = det * piv.clone();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / piv.clone();
            for j in c..n {
                let v = m[c][j].clone() * f.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
    }
    det
}

/// A nonzero vector orthogonal to every row of an `(n-1) x n` matrix of full
/// rank, via signed cofactors. `None` when the rows are rank deficient.
pub fn normal_vector<S: Scalar>(rows: &[Vec<S>], eps: f64) -> Option<Vec<S>> {
    let n = rows.first().map_or(0, Vec::len);
    if rows.len() + 1 != n {
        return None;
    }
    if rank(rows, eps) < n - 1 {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for skip in 0..n {
        let minor: Vec<Vec<S>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let d = determinant(&minor);
        out.push(if skip % 2 == 0 { d } else { -d });
    }
    Some(out)
}
