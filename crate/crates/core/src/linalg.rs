//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! All downstream modules route their matrix work through here: fraction-free
//! determinants, rational inverses and kernels, Smith normal form with
//! unimodular transforms, integral linear solves, and Sylvester-style
//! definiteness checks. No floating point is used.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty matrix")]
    Empty,
    #[error("invalid matrix data: {0}")]
    BadData(String),
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadData(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::BadData("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix::new(r, c, data)
    }

    /// Parses the on-disk format: a JSON 2-D array of integers, row-major.
    pub fn from_json(text: &str) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<i64>> = serde_json::from_str(text)
            .map_err(|e| LinalgError::BadData(format!("matrix JSON: {e}")))?;
        if rows.is_empty() {
            return Err(LinalgError::Empty);
        }
        IntMatrix::from_rows_i64(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * vec[{}]",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect())
    }

    /// Leading principal `k x k` submatrix.
    fn leading(&self, k: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                *m.at_mut(i, j) = self.at(i, j).clone();
            }
        }
        m
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| Rational::from(x.clone())).collect())
            .collect()
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
///
/// Intermediate values stay integral (each division below is exact), which
/// keeps entry growth polynomial instead of exponential.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one()); // empty product convention
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            match (k + 1..n).find(|&r| !a.at(r, k).is_zero()) {
                Some(r) => {
                    for j in 0..n {
                        a.data.swap(k * n + j, r * n + j);
                    }
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                let q = &num / &prev;
                debug_assert_eq!(&q * &prev, num, "Bareiss division must be exact");
                *a.at_mut(i, j) = q;
            }
            *a.at_mut(i, k) = BigInt::zero();
        }
        prev = a.at(k, k).clone();
    }
    let mut det = a.at(n - 1, n - 1).clone();
    if sign < 0 {
        det = -det;
    }
    Ok(det)
}

/// Exact inverse over the rationals. Errors on non-square or singular input.
pub fn inverse_rational(m: &IntMatrix) -> Result<Vec<Vec<Rational>>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.to_rational();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(LinalgError::Singular)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Ok(inv)
}

/// Rational kernel basis of `m` (viewed as a map from `cols`-space).
///
/// Each basis vector is scaled so its last nonzero coordinate is 1, which
/// makes kernel output canonical and directly comparable across runs.
pub fn kernel_rational(m: &IntMatrix) -> Vec<Vec<Rational>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.to_rational();
    // reduced row echelon form
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for j in 0..cols {
            a[r][j] /= &pv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            if !a[row][free].is_zero() {
                v[pc] = -a[row][free].clone();
            }
        }
        scale_last_nonzero_to_one(&mut v);
        basis.push(v);
    }
    basis
}

fn scale_last_nonzero_to_one(v: &mut [Rational]) {
    if let Some(last) = v.iter().rposition(|x| !x.is_zero()) {
        let s = v[last].clone();
        for x in v.iter_mut() {
            *x /= &s;
        }
    }
}

/// Smith normal form: returns `(u, d, v)` with `u * m * v = d`, `u` and `v`
/// unimodular, and `d` diagonal with each entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let rank_bound = rows.min(cols);
    let mut pos = 0;
    while pos < rank_bound {
        // smallest-magnitude nonzero entry of the remaining block as pivot
        let Some((pi, pj)) = pivot_position(&d, pos) else { break };
        swap_rows(&mut d, &mut u, pos, pi);
        swap_cols(&mut d, &mut v, pos, pj);

        // clear row and column `pos`; whenever a reduction leaves a remainder,
        // promote it to the pivot slot and go again (remainders shrink strictly)
        loop {
            let mut dirty = false;
            for i in pos + 1..rows {
                if d.at(i, pos).is_zero() {
                    continue;
                }
                let q = div_round(d.at(i, pos), d.at(pos, pos));
                row_sub(&mut d, &mut u, i, pos, &q);
                if !d.at(i, pos).is_zero() {
                    swap_rows(&mut d, &mut u, pos, i);
                    dirty = true;
                }
            }
            for j in pos + 1..cols {
                if d.at(pos, j).is_zero() {
                    continue;
                }
                let q = div_round(d.at(pos, j), d.at(pos, pos));
                col_sub(&mut d, &mut v, j, pos, &q);
                if !d.at(pos, j).is_zero() {
                    swap_cols(&mut d, &mut v, pos, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // divisibility: the pivot must divide the whole remaining block; if it
        // doesn't, fold the offending row in and redo this position
        let mut offender = None;
        'scan: for i in pos + 1..rows {
            for j in pos + 1..cols {
                if !(d.at(i, j) % d.at(pos, pos)).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_add(&mut d, &mut u, pos, i);
            continue;
        }
        if d.at(pos, pos).is_negative() {
            negate_row(&mut d, &mut u, pos);
        }
        pos += 1;
    }
    (u, d, v)
}

fn pivot_position(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            if d.at(i, j).is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if d.at(i, j).abs() < d.at(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Rounded division used in SNF reduction steps (minimizes the remainder).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let (ca, cb) = (a * d.cols + j, b * d.cols + j);
        d.data.swap(ca, cb);
    }
    for j in 0..u.cols {
        let (ca, cb) = (a * u.cols + j, b * u.cols + j);
        u.data.swap(ca, cb);
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let (ca, cb) = (i * d.cols + a, i * d.cols + b);
        d.data.swap(ca, cb);
    }
    for i in 0..v.rows {
        let (ca, cb) = (i * v.cols + a, i * v.cols + b);
        v.data.swap(ca, cb);
    }
}

/// row[i] -= q * row[t], mirrored into `u`.
fn row_sub(d: &mut IntMatrix, u: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..d.cols {
        let delta = q * d.at(t, j);
        *d.at_mut(i, j) -= delta;
    }
    for j in 0..u.cols {
        let delta = q * u.at(t, j);
        *u.at_mut(i, j) -= delta;
    }
}

/// col[j] -= q * col[t], mirrored into `v`.
fn col_sub(d: &mut IntMatrix, v: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..d.rows {
        let delta = q * d.at(i, t);
        *d.at_mut(i, j) -= delta;
    }
    for i in 0..v.rows {
        let delta = q * v.at(i, t);
        *v.at_mut(i, j) -= delta;
    }
}

/// row[t] += row[i], mirrored into `u`.
fn row_add(d: &mut IntMatrix, u: &mut IntMatrix, t: usize, i: usize) {
    for j in 0..d.cols {
        let x = d.at(i, j).clone();
        *d.at_mut(t, j) += x;
    }
    for j in 0..u.cols {
        let x = u.at(i, j).clone();
        *u.at_mut(t, j) += x;
    }
}

fn negate_row(d: &mut IntMatrix, u: &mut IntMatrix, t: usize) {
    for j in 0..d.cols {
        let x = -d.at(t, j).clone();
        *d.at_mut(t, j) = x;
    }
    for j in 0..u.cols {
        let x = -u.at(t, j).clone();
        *u.at_mut(t, j) = x;
    }
}

/// Solves `m x = b` over the integers, if an integral solution exists.
///
/// Uses the Smith decomposition `u m v = d`: with `y = v^{-1} x` the system
/// becomes `d y = u b`, which is solvable integrally iff each diagonal divides
/// the transformed right-hand side (and zero rows match zero entries).
pub fn solve_integral(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs length {} for {}x{} matrix",
            b.len(),
            m.rows,
            m.cols
        )));
    }
    let (u, d, v) = smith_normal_form(m);
    let ub = u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); m.cols];
    for i in 0..m.rows {
        let di = if i < m.cols { d.at(i, i).clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = num_integer::Integer::div_rem(&ub[i], &di);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    let x = v.mul_vec(&y)?;
    debug_assert_eq!(m.mul_vec(&x).unwrap(), b.to_vec());
    Ok(Some(x))
}

/// Solves the square rational system `m x = b` by Gaussian elimination.
/// Returns `None` when the coefficient matrix is singular.
pub fn solve_rational_system(m: &[Vec<Rational>], b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "{n} equations, rows {:?}, rhs {}",
            m.iter().map(|r| r.len()).collect::<Vec<_>>(),
            b.len()
        )));
    }
    let mut a = m.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(None);
        };
        a.swap(col, p);
        rhs.swap(col, p);
        let pv = a[col][col].clone();
        for j in col..n {
            a[col][j] /= &pv;
        }
        rhs[col] /= &pv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
            }
            let t = &f * &rhs[col];
            rhs[r] -= t;
        }
    }
    Ok(Some(rhs))
}

/// Sylvester criterion: symmetric `m` is negative definite iff its leading
/// principal minors alternate in sign starting negative.
pub fn is_negative_definite(m: &IntMatrix) -> Result<bool, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    for k in 1..=m.rows {
        let minor = det_exact(&m.leading(k))?;
        let want_negative = k % 2 == 1;
        if minor.is_zero() || minor.is_negative() != want_negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact signature `(positives, negatives, zeros)` of a symmetric matrix, by
/// congruence diagonalization over the rationals.
pub fn signature_symmetric(m: &IntMatrix) -> Result<(usize, usize, usize), LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
    }
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = m.rows;
    let mut a = m.to_rational();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(l) = (k + 1..n).find(|&l| !a[l][l].is_zero()) {
                // congruence swap of indices k and l
                a.swap(k, l);
                for row in a.iter_mut() {
                    row.swap(k, l);
                }
            } else if let Some(l) = (k + 1..n).find(|&l| !a[k][l].is_zero()) {
                // zero diagonal block with off-diagonal coupling: add index l
                // into k (congruence), making a[k][k] = 2 a[k][l] != 0
                for j in 0..n {
                    let x = a[l][j].clone();
                    a[k][j] += x;
                }
                for row in a.iter_mut() {
                    let x = row[l].clone();
                    row[k] += x;
                }
            } else {
                zero += 1;
                k += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            for row in a.iter_mut().skip(k) {
                let t = &f * &row[k];
                row[i] -= t;
            }
        }
        k += 1;
    }
    Ok((pos, neg, zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows).unwrap()
    }

    /// Independent oracle: plain rational Gaussian elimination, no Bareiss.
    fn det_oracle(mat: &IntMatrix) -> Rational {
        let n = mat.rows();
        let mut a = mat.to_rational();
        let mut det = Rational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                a.swap(k, p);
                det = -det;
            }
            det *= &a[k][k];
            let pv = a[k][k].clone();
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let f = &a[r][k] / &pv;
                for c in k..n {
                    let t = &f * &a[k][c];
                    a[r][c] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det_exact(&m(&[vec![-2]])).unwrap(), BigInt::from(-2));
        assert_eq!(
            det_exact(&m(&[vec![1, 2], vec![3, 4]])).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(
            det_exact(&m(&[vec![2, 0], vec![0, 3]])).unwrap(),
            BigInt::from(6)
        );
        // singular
        assert_eq!(
            det_exact(&m(&[vec![1, 2], vec![2, 4]])).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn det_matches_rational_elimination_oracle() {
        let cases = [
            m(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]),
            m(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]),
            m(&[
                vec![-2, 1, 0, 0, 0],
                vec![1, -2, 1, 0, 1],
                vec![0, 1, -2, 1, 0],
                vec![0, 0, 1, -2, 0],
                vec![0, 1, 0, 0, -3],
            ]),
        ];
        for c in &cases {
            let bareiss = Rational::from(det_exact(c).unwrap());
            assert_eq!(bareiss, det_oracle(c));
        }
    }

    #[test]
    fn inverse_multiplies_back_to_identity() {
        let a = m(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
        let inv = inverse_rational(&a).unwrap();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += Rational::from(a.at(i, k).clone()) * &inv[k][j];
                }
                let expect = if i == j { Rational::one() } else { Rational::zero() };
                assert_eq!(acc, expect);
            }
        }
    }

    #[test]
    fn inverse_rejects_singular() {
        let a = m(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(inverse_rational(&a).unwrap_err(), LinalgError::Singular);
    }

    #[test]
    fn kernel_of_invertible_matrix_is_empty() {
        let a = m(&[vec![-2, 1], vec![1, -2]]);
        assert!(kernel_rational(&a).is_empty());
    }

    #[test]
    fn kernel_basis_is_canonically_scaled() {
        // rank-1 kernel spanned by (1, 1, 1); canonical scaling puts 1 last
        let a = m(&[vec![1, -1, 0], vec![0, 1, -1]]);
        let k = kernel_rational(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![Rational::one(), Rational::one(), Rational::one()]);
        for v in &k {
            let last = v.iter().rposition(|x| !x.is_zero()).unwrap();
            assert!(v[last].is_one());
        }
        // kernel vectors actually annihilate
        for v in &k {
            for i in 0..a.rows() {
                let s: Rational = (0..a.cols())
                    .map(|j| Rational::from(a.at(i, j).clone()) * &v[j])
                    .sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn snf_diag_2_3_is_1_6() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let (u, d, v) = smith_normal_form(&a);
        assert_eq!(d, m(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), d);
        assert_eq!(det_exact(&u).unwrap().abs(), BigInt::one());
        assert_eq!(det_exact(&v).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn snf_properties_on_assorted_matrices() {
        let cases = [
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![4, 6], vec![6, 9]]),
            m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]),
            m(&[vec![1, 2, 3], vec![4, 5, 6]]),
            m(&[vec![-2, 1], vec![1, -2], vec![0, 1]]),
        ];
        for a in &cases {
            let (u, d, v) = smith_normal_form(a);
            assert_eq!(u.mul(a).unwrap().mul(&v).unwrap(), d, "u*a*v == d");
            assert_eq!(det_exact(&u).unwrap().abs(), BigInt::one(), "u unimodular");
            assert_eq!(det_exact(&v).unwrap().abs(), BigInt::one(), "v unimodular");
            // diagonal, nonnegative, divisibility chain
            let r = d.rows().min(d.cols());
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if i != j {
                        assert!(d.at(i, j).is_zero(), "off-diagonal zero");
                    }
                }
            }
            for i in 0..r {
                assert!(!d.at(i, i).is_negative());
                if i + 1 < r && !d.at(i, i).is_zero() {
                    let next = d.at(i + 1, i + 1);
                    if !next.is_zero() {
                        assert!((next % d.at(i, i)).is_zero(), "divisibility chain");
                    }
                }
                if d.at(i, i).is_zero() && i + 1 < r {
                    assert!(d.at(i + 1, i + 1).is_zero(), "zeros trail");
                }
            }
        }
    }

    #[test]
    fn solve_integral_finds_solutions_and_rejects_non_integral() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve_integral(&a, &b).unwrap().unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);

        let b = vec![BigInt::from(1), BigInt::from(3)];
        assert_eq!(solve_integral(&a, &b).unwrap(), None);

        // singular but consistent
        let a = m(&[vec![1, 1], vec![2, 2]]);
        let b = vec![BigInt::from(3), BigInt::from(6)];
        let x = solve_integral(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);

        // singular and inconsistent
        let b = vec![BigInt::from(3), BigInt::from(7)];
        assert_eq!(solve_integral(&a, &b).unwrap(), None);
    }

    #[test]
    fn rational_system_solutions_are_exact() {
        let r = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
        let sys = vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]];
        let b = vec![r(5, 1), r(10, 1)];
        let x = solve_rational_system(&sys, &b).unwrap().unwrap();
        assert_eq!(x, vec![r(1, 1), r(3, 1)]);

        let singular = vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]];
        assert_eq!(solve_rational_system(&singular, &b).unwrap(), None);

        let ragged = vec![vec![r(1, 1)], vec![r(2, 1), r(4, 1)]];
        assert!(solve_rational_system(&ragged, &b).is_err());
    }

    #[test]
    fn negative_definite_checks() {
        assert!(is_negative_definite(&m(&[vec![-2]])).unwrap());
        assert!(is_negative_definite(&m(&[vec![-2, 1], vec![1, -2]])).unwrap());
        assert!(!is_negative_definite(&m(&[vec![2]])).unwrap());
        assert!(!is_negative_definite(&m(&[vec![-1, 2], vec![2, -1]])).unwrap());
        assert!(!is_negative_definite(&m(&[vec![0, 0], vec![0, -1]])).unwrap());
        assert_eq!(
            is_negative_definite(&m(&[vec![-1, 1], vec![0, -1]])).unwrap_err(),
            LinalgError::NotSymmetric
        );
    }

    #[test]
    fn signature_counts_eigenvalue_signs_exactly() {
        assert_eq!(
            signature_symmetric(&m(&[vec![-2, 1], vec![1, -2]])).unwrap(),
            (0, 2, 0)
        );
        assert_eq!(
            signature_symmetric(&m(&[vec![1, 0], vec![0, -1]])).unwrap(),
            (1, 1, 0)
        );
        // hyperbolic block with zero diagonal
        assert_eq!(
            signature_symmetric(&m(&[vec![0, 1], vec![1, 0]])).unwrap(),
            (1, 1, 0)
        );
        assert_eq!(
            signature_symmetric(&m(&[vec![0, 0], vec![0, 0]])).unwrap(),
            (0, 0, 2)
        );
        assert_eq!(signature_symmetric(&m(&[vec![3]])).unwrap(), (1, 0, 0));
    }
}
