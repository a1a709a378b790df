//! Integer matrices, Hermite and Smith normal forms, and p-local lattice
//! bookkeeping.
//!
//! Lattices are always full-rank sublattices of `Z^n` given by a basis in
//! column Hermite normal form: upper triangular, positive pivots, and every
//! entry to the right of a pivot reduced into `[0, pivot)`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Builds a matrix from row slices.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix::new(r, c, data)
    }

    /// Builds an `n x k` matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, columns: &[Vec<BigInt>]) -> Self {
        let k = columns.len();
        let mut m = IntMatrix::zeros(n, k);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (i, x) in col.iter().enumerate() {
                m.data[i * k + j] = x.clone();
            }
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(c);
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(d);
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scaled(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.data.iter().map(|x| x * c).collect())
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.data.iter().map(|x| x.to_i64()).collect()
    }

    /// Entries reduced into `[0, modulus)`.
    pub fn reduced_mod(&self, modulus: u64) -> Vec<u64> {
        let m = BigInt::from(modulus);
        self.data
            .iter()
            .map(|x| x.mod_floor(&m).to_u64().expect("reduced entry fits in u64"))
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    /// Classical adjugate, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j).det();
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                // adj[j][i] = cofactor(i, j)
                adj.data[j * n + i] = cof;
            }
        }
        adj
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.rows;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != row) {
            for j in (0..n).filter(|&j| j != col) {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix::new(n - 1, n - 1, data)
    }

    /// Whether the matrix is in the column Hermite normal form used
    /// throughout the crate.
    pub fn is_hnf(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            let pivot = self.get(i, i);
            if !pivot.is_positive() {
                return false;
            }
            for j in 0..i {
                if !self.get(i, j).is_zero() {
                    return false;
                }
            }
            for j in i + 1..n {
                let x = self.get(i, j);
                if x.is_negative() || x >= pivot {
                    return false;
                }
            }
        }
        true
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

/// An integer matrix regarded as an element of `M_n(Z_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicMatrix {
    p: u64,
    matrix: IntMatrix,
}

impl PAdicMatrix {
    pub fn new(p: u64, matrix: IntMatrix) -> Self {
        assert!(matrix.is_square(), "p-adic matrices are square");
        PAdicMatrix { p, matrix }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        Self::new(p, IntMatrix::identity(n))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn det_valuation(&self) -> Result<u32> {
        det_valuation(&self.matrix, self.p)
    }

    /// Invertible over `Z_p`: the determinant is a p-adic unit.
    pub fn is_unimodular(&self) -> bool {
        matches!(self.det_valuation(), Ok(0))
    }

    pub fn compose(&self, other: &PAdicMatrix) -> PAdicMatrix {
        assert_eq!(self.p, other.p);
        PAdicMatrix::new(self.p, &self.matrix * &other.matrix)
    }

    pub fn transpose(&self) -> PAdicMatrix {
        PAdicMatrix::new(self.p, self.matrix.transpose())
    }
}

/// `v_p(det M)`; fails on singular input.
pub fn det_valuation(m: &IntMatrix, p: u64) -> Result<u32> {
    let d = m.det();
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(valuation(&d, p))
}

/// A full-rank sublattice of `Z^n` in canonical Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeBasis {
    p: u64,
    basis: IntMatrix,
}

impl LatticeBasis {
    /// Canonical basis of the lattice spanned by the columns of `generators`.
    pub fn from_generators(p: u64, generators: &IntMatrix) -> Result<Self> {
        Ok(LatticeBasis {
            p,
            basis: hnf_of_generators(generators)?,
        })
    }

    /// Wraps a matrix already known to be in Hermite form.
    pub fn from_hnf(p: u64, basis: IntMatrix) -> Self {
        debug_assert!(basis.is_hnf());
        LatticeBasis { p, basis }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `[Z^n : L]`, the product of the pivots.
    pub fn index(&self) -> BigInt {
        (0..self.dim()).map(|i| self.basis.get(i, i).clone()).product()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let t = IntMatrix::from_columns(self.dim(), &[v.to_vec()]);
        solve_integer(self, &t).is_ok()
    }

    /// Reduces `v` to the canonical coset representative of `Z^n / L`:
    /// the unique vector with `0 <= v_i < pivot_i`.
    pub fn reduce(&self, v: &mut [i64]) {
        let n = self.dim();
        let b = self.basis.to_i64().expect("lattice basis fits in i64");
        for i in (0..n).rev() {
            let pivot = b[i * n + i];
            let q = v[i].div_euclid(pivot);
            if q != 0 {
                for r in 0..=i {
                    v[r] -= q * b[r * n + i];
                }
            }
        }
    }

    /// Canonical coset representatives of `Z^n / L`, ordered
    /// lexicographically (so the zero coset comes first).
    pub fn coset_representatives(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let pivots: Vec<i64> = (0..n)
            .map(|i| self.basis.get(i, i).to_i64().expect("pivot fits in i64"))
            .collect();
        let mut reps = vec![vec![]];
        for &d in &pivots {
            let mut next = Vec::with_capacity(reps.len() * d as usize);
            for r in &reps {
                for x in 0..d {
                    let mut v = r.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            reps = next;
        }
        reps
    }
}

/// Result of [`hnf`]: `input * transform = basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub basis: IntMatrix,
    pub transform: IntMatrix,
}

/// Column Hermite normal form of a nonsingular square matrix, with the
/// unimodular transform.
pub fn hnf(m: &IntMatrix) -> Result<HermiteForm> {
    if !m.is_square() {
        return Err(Error::SingularMatrix);
    }
    let (basis, transform) = column_hnf(m)?;
    Ok(HermiteForm { basis, transform })
}

/// Hermite basis of the lattice spanned by the columns of an `n x k`
/// matrix of rank `n`.
pub fn hnf_of_generators(m: &IntMatrix) -> Result<IntMatrix> {
    Ok(column_hnf(m)?.0)
}

fn column_hnf(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = m.rows();
    let k = m.cols();
    let mut cols = m.columns();
    let mut trans: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut e = vec![BigInt::zero(); k];
            e[j] = BigInt::one();
            e
        })
        .collect();
    let mut free: Vec<usize> = (0..k).collect();
    let mut pivot_of_row = vec![0usize; n];

    for row in (0..n).rev() {
        loop {
            let nonzero: Vec<usize> = free
                .iter()
                .copied()
                .filter(|&c| !cols[c][row].is_zero())
                .collect();
            if nonzero.is_empty() {
                return Err(Error::SingularMatrix);
            }
            let best = *nonzero
                .iter()
                .min_by(|&&a, &&b| cols[a][row].abs().cmp(&cols[b][row].abs()).then(a.cmp(&b)))
                .unwrap();
            if nonzero.len() == 1 {
                if cols[best][row].is_negative() {
                    negate(&mut cols[best]);
                    negate(&mut trans[best]);
                }
                pivot_of_row[row] = best;
                free.retain(|&c| c != best);
                break;
            }
            for &c in nonzero.iter().filter(|&&c| c != best) {
                let q = cols[c][row].div_floor(&cols[best][row]);
                axpy(&mut cols, c, best, &q);
                axpy(&mut trans, c, best, &q);
            }
        }
    }

    // Reduce the entries to the right of each pivot.
    for j in 0..n {
        let cj = pivot_of_row[j];
        for i in (0..j).rev() {
            let ci = pivot_of_row[i];
            let q = cols[cj][i].div_floor(&cols[ci][i]);
            if !q.is_zero() {
                axpy(&mut cols, cj, ci, &q);
                axpy(&mut trans, cj, ci, &q);
            }
        }
    }

    let basis: Vec<Vec<BigInt>> = pivot_of_row.iter().map(|&c| cols[c].clone()).collect();
    let transform: Vec<Vec<BigInt>> = pivot_of_row.iter().map(|&c| trans[c].clone()).collect();
    Ok((IntMatrix::from_columns(n, &basis), IntMatrix::from_columns(k, &transform)))
}

fn negate(v: &mut [BigInt]) {
    for x in v.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// `cols[target] -= q * cols[source]`
fn axpy(cols: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = cols[source].clone();
    for (x, s) in cols[target].iter_mut().zip(src.iter()) {
        *x -= q * s;
    }
}

/// Elementary divisors `d_1 | d_2 | ... | d_n` of a nonsingular matrix,
/// all positive.
pub fn elementary_divisors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() || m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    for t in 0..n {
        loop {
            // Move the smallest nonzero entry of the trailing block to (t, t).
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.ok_or(Error::SingularMatrix)?;
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..n {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for i in t..n {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    Ok((0..n).map(|i| a[i][i].abs()).collect())
}

/// p-parts of the elementary divisors: `Z^n / M Z^n ⊗ Z_p ≅ ⊕ Z/d_i`.
pub fn snf(m: &IntMatrix, p: u64) -> Result<Vec<BigInt>> {
    let pb = BigInt::from(p);
    Ok(elementary_divisors(m)?
        .iter()
        .map(|d| num_traits::pow(pb.clone(), valuation(d, p) as usize))
        .collect())
}

/// Exact integer solution of `B X = T` for a lattice basis `B`.
pub fn solve_integer(b: &LatticeBasis, t: &IntMatrix) -> Result<IntMatrix> {
    let n = b.dim();
    assert_eq!(t.rows(), n, "dimension mismatch in solve_integer");
    let basis = b.basis();
    let mut x = IntMatrix::zeros(n, t.cols());
    for col in 0..t.cols() {
        for i in (0..n).rev() {
            let mut r = t.get(i, col).clone();
            for j in i + 1..n {
                r -= basis.get(i, j) * x.get(j, col);
            }
            let (q, rem) = r.div_rem(basis.get(i, i));
            if !rem.is_zero() {
                return Err(Error::NotInLattice(col));
            }
            x.set(i, col, q);
        }
    }
    Ok(x)
}

/// Canonical basis of the Z-lattice `{λ ∈ Z^n : G λ ∈ L}`.
///
/// Uses `(L1 ∩ L2)^∨ = L1^∨ + L2^∨` with `L1 = Z^n` and
/// `L2 = (B^{-1} G)^{-1} Z^n`, all scaled by `d = det B` to stay integral.
pub fn preimage(g: &IntMatrix, lattice: &LatticeBasis) -> Result<LatticeBasis> {
    let n = lattice.dim();
    let b = lattice.basis();
    let d = b.det();
    let adj = b.adjugate();
    // d * (B^{-1} G)^T = (adj(B) G)^T
    let scaled_dual = (&adj * g).transpose();
    let mut generators: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = d.clone();
            e
        })
        .collect();
    generators.extend(scaled_dual.columns());
    let s = hnf_of_generators(&IntMatrix::from_columns(n, &generators))?;
    // The sum lattice is S/d; its dual is d (S^T)^{-1} = d adj(S^T) / det S.
    let st = s.transpose();
    let det_s = st.det();
    let adj_st = st.adjugate();
    let mut dual = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let num = adj_st.get(i, j) * &d;
            let (q, r) = num.div_rem(&det_s);
            debug_assert!(r.is_zero(), "dual of a superlattice of Z^n is integral");
            dual.set(i, j, q);
        }
    }
    LatticeBasis::from_generators(lattice.p(), &dual)
}

/// Solves `X * right = left` over the rationals and insists the answer is
/// integral.
pub fn right_divide(left: &IntMatrix, right: &IntMatrix) -> Result<IntMatrix> {
    let det = right.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let numer = left * &right.adjugate();
    let mut out = IntMatrix::zeros(numer.rows(), numer.cols());
    for i in 0..numer.rows() {
        for j in 0..numer.cols() {
            let (q, r) = numer.get(i, j).div_rem(&det);
            if !r.is_zero() {
                return Err(Error::NoIntegralSolution);
            }
            out.set(i, j, q);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Span membership by brute force over a box of small coefficients.
    fn in_span_bruteforce(m: &IntMatrix, v: &[i64], bound: i64) -> bool {
        let n = m.rows();
        let k = m.cols();
        let entries = m.to_i64().unwrap();
        let mut coeffs = vec![-bound; k];
        loop {
            let ok = (0..n).all(|i| (0..k).map(|j| entries[i * k + j] * coeffs[j]).sum::<i64>() == v[i]);
            if ok {
                return true;
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    return false;
                }
                coeffs[pos] += 1;
                if coeffs[pos] > bound {
                    coeffs[pos] = -bound;
                    pos += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn hnf_of_identity() {
        let h = hnf(&IntMatrix::identity(3)).unwrap();
        assert_eq!(h.basis, IntMatrix::identity(3));
        assert_eq!(h.transform, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_of_diagonal_is_already_reduced() {
        let h = hnf(&IntMatrix::diagonal(&[2, 1])).unwrap();
        assert_eq!(h.basis, IntMatrix::diagonal(&[2, 1]));
        assert_eq!(h.transform, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_of_antidiagonal() {
        let m = IntMatrix::from_rows(&[&[0, 1], &[2, 0]]);
        let h = hnf(&m).unwrap();
        assert!(h.basis.is_hnf());
        assert_eq!(h.basis.det(), BigInt::from(2));
        assert_eq!(&m * &h.transform, h.basis);
        // Column spans agree: every vector in a small box has the same
        // membership status for both.
        let lat = LatticeBasis::from_hnf(2, h.basis.clone());
        for x in -3..=3 {
            for y in -3..=3 {
                assert_eq!(lat.contains(&big(&[x, y])), in_span_bruteforce(&m, &[x, y], 4));
            }
        }
    }

    #[test]
    fn hnf_rejects_singular() {
        let m = IntMatrix::from_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(hnf(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&IntMatrix::identity(3), 2).unwrap(), big(&[1, 1, 1]));
        assert_eq!(snf(&IntMatrix::scalar(2, 2), 2).unwrap(), big(&[2, 2]));
        let m = IntMatrix::from_rows(&[&[2, 2], &[0, 2]]);
        assert_eq!(snf(&m, 2).unwrap(), big(&[2, 2]));
        assert_eq!(snf(&IntMatrix::diagonal(&[3, 2]), 2).unwrap(), big(&[1, 2]));
    }

    /// Z^2 / M Z^2 enumerated on representatives mod 4: the quotient of
    /// [[2,2],[0,2]] has four elements, all killed by 2, hence (Z/2)^2.
    #[test]
    fn snf_matches_bruteforce_quotient() {
        let m = IntMatrix::from_rows(&[&[2, 2], &[0, 2]]);
        let lat = LatticeBasis::from_generators(2, &m).unwrap();
        let mut classes = std::collections::BTreeSet::new();
        let mut exponent_two = true;
        for x in 0..4 {
            for y in 0..4 {
                let mut v = [x, y];
                lat.reduce(&mut v);
                classes.insert(v);
                exponent_two &= lat.contains(&big(&[2 * x, 2 * y]));
            }
        }
        assert_eq!(classes.len(), 4);
        assert!(exponent_two);
        assert_eq!(snf(&m, 2).unwrap(), big(&[2, 2]));
    }

    #[test]
    fn det_valuation_examples() {
        assert_eq!(det_valuation(&IntMatrix::identity(2), 2), Ok(0));
        assert_eq!(det_valuation(&IntMatrix::diagonal(&[1, 2]), 2), Ok(1));
        let m = IntMatrix::from_rows(&[&[2, 2], &[0, 2]]);
        assert_eq!(det_valuation(&m, 2), Ok(2));
        assert_eq!(det_valuation(&IntMatrix::zeros(2, 2), 2), Err(Error::SingularMatrix));
    }

    #[test]
    fn solve_integer_examples() {
        let t = IntMatrix::from_rows(&[&[3, -1], &[4, 7]]);
        let id = LatticeBasis::from_hnf(2, IntMatrix::identity(2));
        assert_eq!(solve_integer(&id, &t).unwrap(), t);
        let two = LatticeBasis::from_hnf(2, IntMatrix::scalar(2, 2));
        assert_eq!(solve_integer(&two, &IntMatrix::scalar(2, 2)).unwrap(), IntMatrix::identity(2));
        assert_eq!(
            solve_integer(&two, &IntMatrix::from_rows(&[&[1], &[0]])),
            Err(Error::NotInLattice(0))
        );
    }

    #[test]
    fn determinants() {
        let m = IntMatrix::from_rows(&[&[0, 2, 1], &[3, 1, 4], &[1, 5, 9]]);
        // expansion along the first row: 0 - 2*(27-4) + 1*(15-1) = -32
        assert_eq!(m.det(), BigInt::from(-32));
        let adj = m.adjugate();
        assert_eq!(&m * &adj, IntMatrix::scalar(3, -32));
    }

    #[test]
    fn preimage_under_scalar_and_identity() {
        let lat = LatticeBasis::from_generators(2, &IntMatrix::from_rows(&[&[2, 1], &[0, 2]])).unwrap();
        let same = preimage(&IntMatrix::identity(2), &lat).unwrap();
        assert_eq!(same, lat);
        // 2(x, y) = a(2, 0) + b(1, 2) forces b = y and y even.
        let doubled = preimage(&IntMatrix::scalar(2, 2), &lat).unwrap();
        assert_eq!(doubled.basis(), &IntMatrix::diagonal(&[1, 2]));
        let odd = preimage(&IntMatrix::scalar(2, 3), &lat).unwrap();
        assert_eq!(odd, lat);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonsingular(n: usize) -> impl Strategy<Value = IntMatrix> {
            proptest::collection::vec(-6i64..=6, n * n)
                .prop_map(move |v| IntMatrix::from_i64(n, n, &v))
                .prop_filter("nonsingular", |m| !m.det().is_zero())
        }

        proptest! {
            #[test]
            fn hnf_is_canonical_and_idempotent(m in nonsingular(3)) {
                let h = hnf(&m).unwrap();
                prop_assert!(h.basis.is_hnf());
                prop_assert_eq!(&m * &h.transform, h.basis.clone());
                prop_assert_eq!(h.transform.det().abs(), BigInt::one());
                let again = hnf(&h.basis).unwrap();
                prop_assert_eq!(again.basis, h.basis);
            }

            #[test]
            fn hnf_preserves_span(m in nonsingular(2), v in proptest::collection::vec(-8i64..=8, 2)) {
                let lat = LatticeBasis::from_generators(2, &m).unwrap();
                // v ∈ span(M) iff M^{-1} v is integral, decided via the adjugate.
                let adj = m.adjugate();
                let det = m.det();
                let w = &adj * &IntMatrix::from_i64(2, 1, &v);
                let in_span = w.entries().iter().all(|x| x.is_multiple_of(&det));
                prop_assert_eq!(lat.contains(&big(&v)), in_span);
            }

            #[test]
            fn snf_divisibility_chain(m in nonsingular(3)) {
                let d = elementary_divisors(&m).unwrap();
                for w in d.windows(2) {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
                let prod: BigInt = d.iter().product();
                prop_assert_eq!(prod, m.det().abs());
                let pd = snf(&m, 2).unwrap();
                for w in pd.windows(2) {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }

            #[test]
            fn det_valuation_is_additive(a in nonsingular(2), b in nonsingular(2)) {
                let va = det_valuation(&a, 2).unwrap();
                let vb = det_valuation(&b, 2).unwrap();
                prop_assert_eq!(det_valuation(&(&a * &b), 2).unwrap(), va + vb);
            }

            #[test]
            fn solve_round_trip(m in nonsingular(2), x in proptest::collection::vec(-5i64..=5, 4)) {
                let lat = LatticeBasis::from_generators(3, &m).unwrap();
                let x0 = IntMatrix::from_i64(2, 2, &x);
                let t = lat.basis() * &x0;
                prop_assert_eq!(solve_integer(&lat, &t).unwrap(), x0);
            }
        }
    }
}
