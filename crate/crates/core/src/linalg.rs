//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Smith normal form with transformation matrices, and the linear
//! solvers every kernel/image/quotient computation reduces to.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| BigInt::from(x))).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[i] += a * &v[j];
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Result<IntMatrix> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length mismatch".into()));
        }
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// row[i] += q * row[k]
    fn add_row(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(i, j) + q * self.get(k, j);
            self.set(i, j, v);
        }
    }

    /// col[j] += q * col[k]
    fn add_col(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, j) + q * self.get(i, k);
            self.set(i, j, v);
        }
    }
}

/// Result of a Smith normal form computation: `s = u * m * v` with `u`, `v`
/// unimodular (their integer inverses are carried along) and `s` diagonal
/// with s1 | s2 | ... >= 0.
#[derive(Debug, Clone)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub uinv: IntMatrix,
    pub v: IntMatrix,
    pub vinv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).take_while(|&i| !self.s.get(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct SnfCalc {
    s: IntMatrix,
    u: IntMatrix,
    uinv: IntMatrix,
    v: IntMatrix,
    vinv: IntMatrix,
}

impl SnfCalc {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.uinv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.vinv.swap_rows(a, b);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.uinv.negate_col(i);
    }

    fn add_row(&mut self, i: usize, k: usize, q: &BigInt) {
        self.s.add_row(i, k, q);
        self.u.add_row(i, k, q);
        let negq = -q.clone();
        self.uinv.add_col(k, i, &negq);
    }

    fn add_col(&mut self, j: usize, k: usize, q: &BigInt) {
        self.s.add_col(j, k, q);
        self.v.add_col(j, k, q);
        let negq = -q.clone();
        self.vinv.add_row(k, j, &negq);
    }

    /// Smallest nonzero entry (by absolute value) of the submatrix at (t, t).
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.s.rows() {
            for j in t..self.s.cols() {
                let e = self.s.get(i, j);
                if e.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if e.abs() < self.s.get(bi, bj).abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn process(&mut self) {
        let steps = self.s.rows().min(self.s.cols());
        for t in 0..steps {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            'pivot: loop {
                // Clear column t; a nonzero remainder becomes the new, smaller pivot.
                let mut i = t + 1;
                while i < self.s.rows() {
                    if !self.s.get(i, t).is_zero() {
                        let q = self.s.get(i, t) / self.s.get(t, t);
                        self.add_row(i, t, &(-q));
                        if !self.s.get(i, t).is_zero() {
                            self.swap_rows(t, i);
                            continue 'pivot;
                        }
                    }
                    i += 1;
                }
                // Clear row t.
                let mut j = t + 1;
                while j < self.s.cols() {
                    if !self.s.get(t, j).is_zero() {
                        let q = self.s.get(t, j) / self.s.get(t, t);
                        self.add_col(j, t, &(-q));
                        if !self.s.get(t, j).is_zero() {
                            self.swap_cols(t, j);
                            continue 'pivot;
                        }
                    }
                    j += 1;
                }
                // Divisibility: the pivot must divide the rest of the submatrix.
                for i in t + 1..self.s.rows() {
                    for j in t + 1..self.s.cols() {
                        if !(self.s.get(i, j) % self.s.get(t, t)).is_zero() {
                            let one = BigInt::one();
                            self.add_row(t, i, &one);
                            continue 'pivot;
                        }
                    }
                }
                break;
            }
        }
        for t in 0..steps {
            if self.s.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form: returns `(s, u, v)` with `s = u * m * v`, `u` and `v`
/// unimodular, `s` diagonal with nonnegative entries forming a divisibility
/// chain. Inverse transforms ride along in the result.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let mut calc = SnfCalc {
        s: m.clone(),
        u: IntMatrix::identity(m.rows()),
        uinv: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
        vinv: IntMatrix::identity(m.cols()),
    };
    calc.process();
    Smith { s: calc.s, u: calc.u, uinv: calc.uinv, v: calc.v, vinv: calc.vinv }
}

/// One integer solution of `m * x = b`, if any.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch("solve: rhs length".into()));
    }
    let snf = smith_normal_form(m);
    let c = snf.u.apply(b)?;
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < diag.len() && !diag[i].is_zero() {
            let (q, r) = num_integer::div_rem(c[i].clone(), diag[i].clone());
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.apply(&y)?))
}

/// Basis (as columns) of the lattice `{x : m * x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// One solution of `m * x = b (mod moduli)` where `moduli` gives the order of
/// each target coordinate (all >= 1). Returns the plain-integer part `x`.
pub fn solve_mod(m: &IntMatrix, moduli: &[BigInt], b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if moduli.len() != m.rows() {
        return Err(Error::DimensionMismatch("solve_mod: moduli length".into()));
    }
    let ext = m.hstack(&IntMatrix::diagonal(moduli))?;
    Ok(solve(&ext, b)?.map(|mut x| {
        x.truncate(m.cols());
        x
    }))
}

/// Generators (as columns of the returned matrix, possibly redundant) of the
/// lattice `{x : m * x = 0 (mod moduli)}`.
pub fn kernel_mod(m: &IntMatrix, moduli: &[BigInt]) -> Result<IntMatrix> {
    if moduli.len() != m.rows() {
        return Err(Error::DimensionMismatch("kernel_mod: moduli length".into()));
    }
    let ext = m.hstack(&IntMatrix::diagonal(moduli))?;
    let basis = kernel_basis(&ext);
    let cols: Vec<Vec<BigInt>> =
        basis.into_iter().map(|mut v| {
            v.truncate(m.cols());
            v
        }).collect();
    IntMatrix::from_columns(&cols, m.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn snf_contract(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        // s = u * m * v, exactly
        let umv = snf.u.mul(m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(umv, snf.s);
        // u, v unimodular: integer inverses check out
        assert_eq!(snf.u.mul(&snf.uinv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.vinv).unwrap(), IntMatrix::identity(m.cols()));
        // diagonal, nonnegative, divisibility chain
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn identity_is_its_own_snf() {
        let m = IntMatrix::identity(2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.s, IntMatrix::identity(2));
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_of_2468() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m);
        snf_contract(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_of_zero_matrix() {
        let m = IntMatrix::zeros(3, 2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.s, IntMatrix::zeros(3, 2));
        snf_contract(&m);
    }

    #[test]
    fn snf_of_empty_matrices() {
        snf_contract(&IntMatrix::zeros(0, 3));
        snf_contract(&IntMatrix::zeros(3, 0));
        snf_contract(&IntMatrix::zeros(0, 0));
    }

    #[test]
    fn solve_finds_particular_solution() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(m.apply(&x).unwrap(), b);
        let b_bad = vec![BigInt::from(1), BigInt::from(0)];
        assert!(solve(&m, &b_bad).unwrap().is_none());
    }

    #[test]
    fn kernel_of_projection() {
        let m = IntMatrix::from_i64_rows(&[&[1, 0, 0]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.apply(v).unwrap()[0].is_zero());
        }
    }

    #[test]
    fn solve_mod_wraps_moduli() {
        // 2x = 1 mod 3 has solution x = 2
        let m = IntMatrix::from_i64_rows(&[&[2]]);
        let x = solve_mod(&m, &[BigInt::from(3)], &[BigInt::from(1)]).unwrap().unwrap();
        let r = (BigInt::from(2) * &x[0] - BigInt::from(1)) % BigInt::from(3);
        assert!(r.is_zero());
    }

    proptest! {
        #[test]
        fn snf_contract_random(entries in proptest::collection::vec(-30i64..30, 12)) {
            let rows: Vec<Vec<BigInt>> = entries
                .chunks(4)
                .map(|ch| ch.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let m = IntMatrix::from_rows(rows).unwrap();
            snf_contract(&m);
        }

        #[test]
        fn solve_agrees_with_apply(entries in proptest::collection::vec(-9i64..9, 9),
                                   xs in proptest::collection::vec(-9i64..9, 3)) {
            let rows: Vec<Vec<BigInt>> = entries
                .chunks(3)
                .map(|ch| ch.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let m = IntMatrix::from_rows(rows).unwrap();
            let x: Vec<BigInt> = xs.into_iter().map(BigInt::from).collect();
            let b = m.apply(&x).unwrap();
            let sol = solve(&m, &b).unwrap().expect("constructed system must be solvable");
            prop_assert_eq!(m.apply(&sol).unwrap(), b);
        }
    }
}
