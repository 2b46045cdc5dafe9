//! Exact integer matrix arithmetic.
//!
//! Everything here is overflow-checked `i64`: an overflow is reported as an
//! error, never wrapped. Matrices are immutable values; mutation and inversion
//! return new matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix with checked arithmetic.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// `[b]_+ = max(b, 0)`.
pub fn plus_part(b: i64) -> i64 {
    b.max(0)
}

/// `[-b]_+` without risking negation overflow.
fn minus_part(b: i64) -> Result<i64> {
    if b >= 0 {
        Ok(0)
    } else {
        b.checked_neg().ok_or(Error::Overflow)
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: expected {ncols} columns, found {}",
                    r.len()
                )));
            }
        }
        Ok(IntMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn negate(&self) -> Result<IntMatrix> {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = add(acc, mul(self.get(i, k), other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Vertical stack: `self` on top of `other`.
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Rows `[r0, r1)` as a new matrix.
    pub fn row_slice(&self, r0: usize, r1: usize) -> IntMatrix {
        assert!(r0 <= r1 && r1 <= self.rows);
        IntMatrix {
            rows: r1 - r0,
            cols: self.cols,
            entries: self.entries[r0 * self.cols..r1 * self.cols].to_vec(),
        }
    }

    /// Submatrix picking `rows` then `cols`, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Intermediate values are minors of the input, so overflow checking
    /// bounds the growth honestly.
    pub fn det(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m = self.entries.clone();
        let mut sign = 1i64;
        let mut prev = 1i64;
        let at = |m: &Vec<i64>, i: usize, j: usize| m[i * n + j];
        for k in 0..n - 1 {
            if at(&m, k, k) == 0 {
                // pivot search
                let swap = (k + 1..n).find(|&r| at(&m, r, k) != 0);
                match swap {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let prod = mul(at(&m, i, k), at(&m, k, j))?;
                    let num = add(
                        mul(at(&m, i, j), at(&m, k, k))?,
                        prod.checked_neg().ok_or(Error::Overflow)?,
                    )?;
                    // Bareiss: division by the previous pivot is exact
                    debug_assert_eq!(num % prev, 0);
                    m[i * n + j] = num / prev;
                }
                m[i * n + k] = 0;
            }
            prev = at(&m, k, k);
        }
        mul(sign, at(&m, n - 1, n - 1))
    }

    /// Exact inverse of a unimodular integer matrix via the adjugate.
    ///
    /// Errors with the computed determinant when `det != ±1`.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let det = self.det()?;
        if det != 1 && det != -1 {
            return Err(Error::NonUnimodular { det });
        }
        let mut inv = IntMatrix::zero(n, n);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let minor_rows: Vec<usize> = all.iter().copied().filter(|&r| r != i).collect();
                let minor_cols: Vec<usize> = all.iter().copied().filter(|&c| c != j).collect();
                let minor = self.submatrix(&minor_rows, &minor_cols).det()?;
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                // adj(A)_{ji} = (-1)^{i+j} * minor_{ij}; inverse = adj / det
                inv.set(j, i, mul(mul(sign, minor)?, det)?);
            }
        }
        Ok(inv)
    }
}

/// Mutation of an `m x n` integer matrix (`m >= n`) in direction `k`
/// (0-based, `k < n`): row and column `k` are negated, every other entry
/// becomes `a_ij + [a_ik]_+ a_kj + a_ik [-a_kj]_+`.
pub fn mutate_matrix(a: &IntMatrix, k: usize) -> Result<IntMatrix> {
    let n = a.cols();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, rank: n });
    }
    if a.rows() < n {
        return Err(Error::ShapeMismatch(format!(
            "matrix has {} rows but needs at least {} for mutation",
            a.rows(),
            n
        )));
    }
    let mut out = IntMatrix::zero(a.rows(), n);
    for i in 0..a.rows() {
        for j in 0..n {
            let v = if i == k || j == k {
                a.get(i, j).checked_neg().ok_or(Error::Overflow)?
            } else {
                let aik = a.get(i, k);
                let akj = a.get(k, j);
                add(
                    a.get(i, j),
                    add(mul(plus_part(aik), akj)?, mul(aik, minus_part(akj)?)?)?,
                )?
            };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

// Exact rational with i64 parts, only what symmetrizer propagation needs.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Frac {
    num: i64,
    den: i64, // > 0
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i64, b: i64) -> Result<i64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    mul(a / gcd(a, b), b)
}

impl Frac {
    fn new(num: i64, den: i64) -> Result<Frac> {
        debug_assert!(den != 0);
        let g = gcd(num, den);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Frac {
            num: mul(s, num)? / g,
            den: mul(s, den)? / g,
        })
    }

    fn mul_ratio(self, num: i64, den: i64) -> Result<Frac> {
        Frac::new(mul(self.num, num)?, mul(self.den, den)?)
    }
}

/// Componentwise-minimal positive integer diagonal `S` with `S B`
/// skew-symmetric, normalized to gcd 1 per connected component of the
/// nonzero pattern. `None` when no skew-symmetrizer exists.
pub fn find_skew_symmetrizer(b: &IntMatrix) -> Option<Vec<i64>> {
    if !b.is_square() {
        return None;
    }
    let n = b.rows();
    // structural requirements
    for i in 0..n {
        if b.get(i, i) != 0 {
            return None;
        }
        for j in 0..n {
            let (bij, bji) = (b.get(i, j), b.get(j, i));
            if (bij == 0) != (bji == 0) {
                return None;
            }
            if bij != 0 && bij.signum() == bji.signum() {
                return None;
            }
        }
    }
    let mut s = vec![0i64; n];
    let mut frac: Vec<Option<Frac>> = vec![None; n];
    for root in 0..n {
        if frac[root].is_some() {
            continue;
        }
        // BFS over the nonzero pattern from `root`
        frac[root] = Some(Frac { num: 1, den: 1 });
        let mut component = vec![root];
        let mut queue = vec![root];
        while let Some(i) = queue.pop() {
            let fi = frac[i].unwrap();
            for j in 0..n {
                if b.get(i, j) == 0 {
                    continue;
                }
                // s_i b_ij = -s_j b_ji  =>  s_j = s_i * b_ij / (-b_ji)
                let fj = fi.mul_ratio(b.get(i, j), -b.get(j, i)).ok()?;
                match frac[j] {
                    None => {
                        frac[j] = Some(fj);
                        component.push(j);
                        queue.push(j);
                    }
                    Some(existing) => {
                        if existing != fj {
                            return None;
                        }
                    }
                }
            }
        }
        // scale the component to integers with gcd 1
        let mut l = 1i64;
        for &i in &component {
            l = lcm(l, frac[i].unwrap().den).ok()?;
        }
        let mut g = 0i64;
        let mut vals = Vec::with_capacity(component.len());
        for &i in &component {
            let f = frac[i].unwrap();
            let v = f.num.checked_mul(l / f.den)?;
            g = gcd(g, v);
            vals.push(v);
        }
        for (&i, v) in component.iter().zip(vals) {
            s[i] = v / g;
        }
    }
    Some(s)
}

/// Skew-symmetrizable exchange matrix together with its minimal positive
/// skew-symmetrizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    b: IntMatrix,
    s: Vec<i64>,
}

impl ExchangeMatrix {
    /// Validates skew-symmetrizability and stores the minimal symmetrizer.
    pub fn new(b: IntMatrix) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::ShapeMismatch("exchange matrix must be square".into()));
        }
        let s = find_skew_symmetrizer(&b).ok_or(Error::NotSkewSymmetrizable)?;
        Ok(ExchangeMatrix { b, s })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        ExchangeMatrix::new(IntMatrix::from_rows(rows)?)
    }

    pub fn rank(&self) -> usize {
        self.b.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.s
    }

    /// `-B` shares the symmetrizer of `B`.
    pub fn opposite(&self) -> Result<ExchangeMatrix> {
        Ok(ExchangeMatrix {
            b: self.b.negate()?,
            s: self.s.clone(),
        })
    }

    pub fn transposed(&self) -> Result<ExchangeMatrix> {
        ExchangeMatrix::new(self.b.transpose())
    }

    /// Mutation keeps the symmetrizer: `S` skew-symmetrizes `mu_k(B)`
    /// whenever it skew-symmetrizes `B`.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix> {
        Ok(ExchangeMatrix {
            b: mutate_matrix(&self.b, k)?,
            s: self.s.clone(),
        })
    }

    pub fn is_symmetrized_by(&self, s: &[i64]) -> bool {
        let n = self.rank();
        if s.len() != n || s.iter().any(|&v| v <= 0) {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = s[i].checked_mul(self.b.get(i, j));
                let rhs = s[j].checked_mul(self.b.get(j, i)).map(|v| -v);
                if lhs.is_none() || lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn mutation_of_stacked_a2_matrix_in_direction_2() {
        // [B; I] with B = [[0,1],[-1,0]]
        let a = m(&[vec![0, 1], vec![-1, 0], vec![1, 0], vec![0, 1]]);
        let out = mutate_matrix(&a, 1).unwrap();
        assert_eq!(
            out.to_rows(),
            vec![vec![0, -1], vec![1, 0], vec![1, 0], vec![0, -1]]
        );
    }

    #[test]
    fn mutation_is_an_involution() {
        let a = m(&[vec![0, 1], vec![-1, 0], vec![1, 0], vec![0, 1]]);
        for k in 0..2 {
            let back = mutate_matrix(&mutate_matrix(&a, k).unwrap(), k).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn mutation_of_markov_matrix_negates_it() {
        let markov = m(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]);
        let out = mutate_matrix(&markov, 0).unwrap();
        assert_eq!(out, markov.negate().unwrap());
    }

    #[test]
    fn mutation_rejects_out_of_range_direction() {
        let a = m(&[vec![0, 1], vec![-1, 0]]);
        assert!(matches!(
            mutate_matrix(&a, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn skew_symmetrizer_of_skew_symmetric_matrix_is_ones() {
        let b = m(&[vec![0, 1], vec![-1, 0]]);
        assert_eq!(find_skew_symmetrizer(&b), Some(vec![1, 1]));
    }

    #[test]
    fn skew_symmetrizer_of_b2_matrix() {
        let b = m(&[vec![0, 1], vec![-2, 0]]);
        assert_eq!(find_skew_symmetrizer(&b), Some(vec![2, 1]));
    }

    #[test]
    fn no_skew_symmetrizer_when_signs_agree() {
        let b = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(find_skew_symmetrizer(&b), None);
    }

    #[test]
    fn no_skew_symmetrizer_when_zero_pattern_asymmetric() {
        let b = m(&[vec![0, 1], vec![0, 0]]);
        assert_eq!(find_skew_symmetrizer(&b), None);
    }

    #[test]
    fn symmetrizer_survives_mutation() {
        let b = ExchangeMatrix::from_rows(&[vec![0, 1], vec![-2, 0]]).unwrap();
        let mut cur = b.clone();
        for k in [0, 1, 0, 0, 1, 0, 1, 1] {
            cur = cur.mutate(k).unwrap();
            assert!(cur.is_symmetrized_by(b.symmetrizer()));
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(IntMatrix::identity(3).det().unwrap(), 1);
        assert_eq!(m(&[vec![1, 2], vec![3, 4]]).det().unwrap(), -2);
        assert_eq!(
            m(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]).det().unwrap(),
            5
        );
        assert_eq!(IntMatrix::zero(0, 0).det().unwrap(), 1);
        assert_eq!(m(&[vec![1, 1], vec![1, 1]]).det().unwrap(), 0);
    }

    #[test]
    fn unimodular_inverse_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(id.unimodular_inverse().unwrap(), id);

        let d = m(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(d.unimodular_inverse().unwrap(), d);

        let u = m(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(
            u.unimodular_inverse().unwrap(),
            m(&[vec![1, -1], vec![0, 1]])
        );
    }

    #[test]
    fn unimodular_inverse_reports_determinant() {
        let a = m(&[vec![2, 0], vec![0, 1]]);
        match a.unimodular_inverse() {
            Err(Error::NonUnimodular { det }) => assert_eq!(det, 2),
            other => panic!("expected NonUnimodular, got {other:?}"),
        }
    }

    #[test]
    fn overflow_is_detected() {
        let a = m(&[vec![0, i64::MAX], vec![-1, 0], vec![i64::MAX, 2], vec![0, 1]]);
        assert!(matches!(mutate_matrix(&a, 0), Err(Error::Overflow)));
    }
}
