//! Exact dense linear algebra over a [`Field`]. Vectors are rows unless stated otherwise.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;
pub type Matrix = Vec<Vec<Scalar>>;

pub fn zero_vector(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn identity(field: Field, n: usize) -> Matrix {
    (0..n).map(|i| unit_vector(field, n, i)).collect()
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// Adds `c * v` into `acc`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn transpose(field: Field, m: &Matrix, cols: usize) -> Matrix {
    let mut t = vec![zero_vector(field, m.len()); cols];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

pub fn mat_mul(field: Field, a: &Matrix, b: &Matrix, cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            let mut out = zero_vector(field, cols);
            for (k, x) in row.iter().enumerate() {
                axpy(&mut out, x, &b[k]);
            }
            out
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(field: Field, v: &[Scalar], m: &Matrix, cols: usize) -> Vector {
    let mut out = zero_vector(field, cols);
    for (k, x) in v.iter().enumerate() {
        axpy(&mut out, x, &m[k]);
    }
    out
}

/// Brings `m` into reduced row echelon form in place, dropping zero rows. Returns pivot columns.
pub fn rref(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = -&m[i][c];
                axpy(&mut m[i], &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    let mut w = m.clone();
    rref(&mut w, cols).len()
}

/// Canonical basis (reduced echelon rows) of the span of `vectors`.
pub fn span_basis(vectors: &[Vector], cols: usize) -> Matrix {
    let mut w: Matrix = vectors.to_vec();
    rref(&mut w, cols);
    w
}

/// Basis of `{x : m x = 0}` for column vectors `x` of length `cols`.
pub fn nullspace(field: Field, m: &Matrix, cols: usize) -> Matrix {
    let mut w = m.clone();
    let pivots = rref(&mut w, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zero_vector(field, cols);
            x[f] = field.one();
            for (row, &pc) in w.iter().zip(&pivots) {
                x[pc] = -&row[f];
            }
            x
        })
        .collect()
}

/// Basis of `{y : y m = 0}` for row vectors `y` of length `m.len()`.
pub fn left_nullspace(field: Field, m: &Matrix, cols: usize) -> Matrix {
    let t = transpose(field, m, cols);
    nullspace(field, &t, m.len())
}

/// Coordinates `c` with `c * basis = v`, if `v` lies in the row span of `basis`.
pub fn coordinates(field: Field, basis: &Matrix, v: &[Scalar]) -> Option<Vector> {
    let r = basis.len();
    let n = v.len();
    // Solve basis^T c = v by eliminating on the augmented system.
    let mut aug: Matrix = (0..n)
        .map(|j| {
            let mut row: Vector = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, r + 1);
    if pivots.contains(&r) {
        return None;
    }
    let mut c = zero_vector(field, r);
    for (row, &pc) in aug.iter().zip(&pivots) {
        c[pc] = row[r].clone();
    }
    Some(c)
}

pub fn in_span(field: Field, basis: &Matrix, v: &[Scalar]) -> bool {
    is_zero_vector(v) || coordinates(field, basis, v).is_some()
}

/// A matrix `Q` (n x k) whose left kernel is exactly the span of `sub`: `x Q = 0` iff `x` in `sub`.
pub fn quotient_map(field: Field, sub: &Matrix, n: usize) -> Matrix {
    let ann = nullspace(field, sub, n); // column vectors q with sub q = 0
    transpose(field, &ann, n)
}

/// Intersection of two subspaces of `k^n` given by spanning rows.
pub fn intersect(field: Field, a: &Matrix, b: &Matrix, n: usize) -> Matrix {
    let qa = quotient_map(field, a, n);
    let qb = quotient_map(field, b, n);
    let k = qa.first().map_or(0, Vec::len) + qb.first().map_or(0, Vec::len);
    let joint: Matrix = (0..n)
        .map(|i| {
            let mut row = qa.get(i).cloned().unwrap_or_default();
            row.extend(qb.get(i).cloned().unwrap_or_default());
            row
        })
        .collect();
    if k == 0 {
        return identity(field, n);
    }
    span_basis(&left_nullspace(field, &joint, k), n)
}

/// Standard basis vectors that extend the span of `sub` to all of `k^n`.
pub fn complement_basis(field: Field, sub: &Matrix, n: usize) -> Matrix {
    let mut current = span_basis(sub, n);
    let mut out = Vec::new();
    for i in 0..n {
        let e = unit_vector(field, n, i);
        if !in_span(field, &current, &e) {
            current.push(e.clone());
            current = span_basis(&current, n);
            out.push(e);
        }
    }
    out
}

pub fn determinant(field: Field, m: &Matrix) -> Scalar {
    let n = m.len();
    let mut w = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return field.zero();
        };
        if p != c {
            w.swap(p, c);
            det = -det;
        }
        det = &det * &w[c][c];
        let inv = w[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if !w[i][c].is_zero() {
                let f = -(&w[i][c] * &inv);
                let pivot_row = w[c].clone();
                axpy(&mut w[i], &f, &pivot_row);
            }
        }
    }
    det
}

pub fn inverse(field: Field, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(field, n, i));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::NotInvertible("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Field::Rationals.from_i64(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = Field::Rationals;
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(f, &m, 3);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for row in &m {
                let dot = row.iter().zip(x).fold(f.zero(), |a, (r, y)| a + r * y);
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let f = Field::Rationals;
        let m = q(&[&[2, 1], &[7, 4]]);
        assert_eq!(determinant(f, &m), f.one());
        let inv = inverse(f, &m).unwrap();
        assert_eq!(mat_mul(f, &m, &inv, 2), identity(f, 2));
        assert!(inverse(f, &q(&[&[1, 2], &[2, 4]])).is_err());
    }

    #[test]
    fn intersection_and_quotient() {
        let f = Field::Rationals;
        let a = q(&[&[1, 0, 0], &[0, 1, 0]]);
        let b = q(&[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect(f, &a, &b, 3), q(&[&[0, 1, 0]]));
        let qm = quotient_map(f, &a, 3);
        assert!(is_zero_vector(&vec_mat(f, &a[0], &qm, 1)));
        assert!(!is_zero_vector(&vec_mat(f, &b[1], &qm, 1)));
        assert_eq!(complement_basis(f, &a, 3), q(&[&[0, 0, 1]]));
    }

    #[test]
    fn coordinates_in_basis() {
        let f = Field::Rationals;
        let basis = q(&[&[1, 1, 0], &[0, 1, 1]]);
        let v = q(&[&[2, 5, 3]])[0].clone();
        assert_eq!(coordinates(f, &basis, &v), Some(q(&[&[2, 3]])[0].clone()));
        assert_eq!(coordinates(f, &basis, &q(&[&[1, 0, 0]])[0]), None);
    }
}
