//! Exact integer linear algebra: determinants, Smith normal form with
//! transforms, minor gcds, and cokernels of integer matrices.
//!
//! Everything here runs over arbitrary-precision integers; intermediate
//! entries of a Smith reduction can exceed machine words even for small
//! inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::Error;

/// Arbitrary-precision integer used throughout the lattice layer.
pub type Int = BigInt;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| Int::from(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    /// Matrix whose columns are the given vectors, inside Z^ambient.
    /// An empty list yields an `ambient x 0` matrix.
    pub fn from_columns(ambient: usize, columns: &[Vec<Int>]) -> Self {
        let mut m = Self::zero(ambient, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), ambient, "column length must match ambient rank");
            for i in 0..ambient {
                m[(i, j)] = col[i].clone();
            }
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

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> IntMatrix {
        let mut m = Self::zero(row_idx.len(), col_idx.len());
        for (a, &i) in row_idx.iter().enumerate() {
            for (b, &j) in col_idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = k * &self[(src, j)];
            self[(dst, j)] += add;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = k * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Exact determinant of a square matrix (cofactor expansion for small sizes,
/// fraction-free Bareiss elimination beyond).
pub fn det(m: &IntMatrix) -> Result<Int, Error> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    Ok(det_unchecked(m))
}

fn det_unchecked(m: &IntMatrix) -> Int {
    let n = m.rows();
    match n {
        0 => Int::one(),
        1 => m[(0, 0)].clone(),
        2 => &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)],
        3 => {
            let a = &m[(0, 0)] * (&m[(1, 1)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 1)]);
            let b = &m[(0, 1)] * (&m[(1, 0)] * &m[(2, 2)] - &m[(1, 2)] * &m[(2, 0)]);
            let c = &m[(0, 2)] * (&m[(1, 0)] * &m[(2, 1)] - &m[(1, 1)] * &m[(2, 0)]);
            a - b + c
        }
        _ => det_bareiss(m),
    }
}

fn det_bareiss(m: &IntMatrix) -> Int {
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[(i, k)].is_zero());
            match swap {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = &num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinants of the three 2x2 submatrices obtained by deleting row i and
/// column i of a 3x3 matrix, i = 0, 1, 2.
pub fn diagonal_cofactors(m: &IntMatrix) -> Result<[Int; 3], Error> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::ShapeMismatch { expected: "3x3".into(), got: format!("{}x{}", m.rows(), m.cols()) });
    }
    let cof = |i: usize| {
        let idx: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        det_unchecked(&m.submatrix(&idx, &idx))
    };
    Ok([cof(0), cof(1), cof(2)])
}

/// Result of a Smith reduction `p * m * q = d` with `d` diagonal,
/// nonnegative, and d1 | d2 | ... All four transforms are unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub factors: Vec<Int>,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

/// Smith normal form with transform witnesses.
///
/// Pivot ties break by smallest absolute value, then lowest (row, col)
/// index, so the reduction is deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut p = IntMatrix::identity(rows);
    let mut p_inv = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    let mut q_inv = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest |value| in the remaining block, lowest index first
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => d[(i, j)].abs() < d[(pi, pj)].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        // move pivot to (t, t); mirror ops on transforms
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        p_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);
        q_inv.swap_rows(t, pj);

        // clear column and row t
        let mut dirty = false;
        for i in t + 1..rows {
            if d[(i, t)].is_zero() {
                continue;
            }
            let k = -(&d[(i, t)] / &d[(t, t)]);
            d.add_row(i, t, &k);
            p.add_row(i, t, &k);
            p_inv.add_col(t, i, &(-&k));
            if !d[(i, t)].is_zero() {
                dirty = true; // remainder left; pivot will shrink next pass
            }
        }
        for j in t + 1..cols {
            if d[(t, j)].is_zero() {
                continue;
            }
            let k = -(&d[(t, j)] / &d[(t, t)]);
            d.add_col(j, t, &k);
            q.add_col(j, t, &k);
            q_inv.add_row(t, j, &(-&k));
            if !d[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // enforce divisibility of the remaining block by the pivot
        let mut fixed = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    let one = Int::one();
                    d.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                    p_inv.add_col(i, t, &(-&one));
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
            p_inv.negate_col(t);
        }
        t += 1;
    }

    let factors = (0..t).map(|i| d[(i, i)].clone()).collect();
    SmithForm { factors, p, p_inv, q, q_inv }
}

/// gcd of all k x k minors (0 if all vanish; 1 for k = 0 by convention).
pub fn minors_gcd(m: &IntMatrix, k: usize) -> Result<Int, Error> {
    if k > m.rows().min(m.cols()) {
        return Err(Error::MinorOrderOutOfRange { k, rows: m.rows(), cols: m.cols() });
    }
    if k == 0 {
        return Ok(Int::one());
    }
    let mut g = Int::zero();
    let row_sets = combinations(m.rows(), k);
    let col_sets = combinations(m.cols(), k);
    'all: for rs in &row_sets {
        for cs in &col_sets {
            let minor = det_unchecked(&m.submatrix(rs, cs));
            g = g.gcd(&minor);
            if g.is_one() {
                break 'all; // gcd can only shrink toward 1
            }
        }
    }
    Ok(g)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Finitely generated abelian group in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// d1 | d2 | ..., each >= 2
    pub torsion: Vec<Int>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<Int> {
        if self.free_rank > 0 {
            return None;
        }
        let mut o = Int::one();
        for d in &self.torsion {
            o *= d;
        }
        Some(o)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariant-factor description of Z^rows / column-span(m).
///
/// The empty relation set (zero columns) returns the free ambient group.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    let torsion: Vec<Int> = snf.factors.iter().filter(|d| **d > Int::one()).cloned().collect();
    AbelianGroup { free_rank: m.rows() - snf.rank(), torsion }
}

/// Does `v` lie in the Z-span of the columns of `m`?
///
/// Solvability of `m x = v` over Z, decided through the Smith transforms:
/// with p m q = d, the system is solvable iff (p v)_i is divisible by d_i
/// for i < rank and vanishes beyond.
pub fn column_span_contains(m: &IntMatrix, v: &[Int]) -> bool {
    assert_eq!(v.len(), m.rows(), "vector length must match ambient rank");
    let snf = smith_normal_form(m);
    membership_via_transform(&snf, v)
}

/// Membership test against a fixed lattice, caching its Smith data.
pub struct LatticeMembership {
    snf: SmithForm,
    ambient: usize,
}

impl LatticeMembership {
    /// Lattice spanned by the given vectors inside Z^ambient.
    pub fn new(ambient: usize, generators: &[Vec<Int>]) -> Self {
        let m = IntMatrix::from_columns(ambient, generators);
        LatticeMembership { snf: smith_normal_form(&m), ambient }
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        assert_eq!(v.len(), self.ambient);
        membership_via_transform(&self.snf, v)
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.snf.factors
    }
}

fn membership_via_transform(snf: &SmithForm, v: &[Int]) -> bool {
    let rows = snf.p.rows();
    let rank = snf.rank();
    for i in 0..rows {
        let mut s = Int::zero();
        for j in 0..rows {
            if !snf.p[(i, j)].is_zero() {
                s += &snf.p[(i, j)] * &v[j];
            }
        }
        if i < rank {
            if !(&s % &snf.factors[i]).is_zero() {
                return false;
            }
        } else if !s.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows)
    }

    #[test]
    fn det_identity_and_small_cases() {
        assert_eq!(det(&IntMatrix::identity(3)).unwrap(), Int::from(1));
        assert_eq!(det(&m(&[vec![1, 2], vec![1, 1]])).unwrap(), Int::from(-1));
        assert_eq!(det(&m(&[vec![1, 2, 2], vec![1, 1, 2], vec![1, 1, 1]])).unwrap(), Int::from(1));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(det(&IntMatrix::zero(2, 3)), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn det_bareiss_matches_cofactor() {
        // 4x4 with known determinant: block diag of [[1,2],[1,1]] twice -> (-1)^2 = 1
        let a = m(&[
            vec![1, 2, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 2],
            vec![0, 0, 1, 1],
        ]);
        assert_eq!(det(&a).unwrap(), Int::from(1));
    }

    #[test]
    fn cofactors_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(diagonal_cofactors(&id).unwrap(), [Int::from(1), Int::from(1), Int::from(1)]);
        let a = m(&[vec![1, 2, 2], vec![1, 1, 2], vec![1, 1, 1]]);
        assert_eq!(diagonal_cofactors(&a).unwrap(), [Int::from(-1), Int::from(-1), Int::from(-1)]);
        let b = m(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(diagonal_cofactors(&b).unwrap(), [Int::from(1), Int::from(1), Int::from(0)]);
        assert!(diagonal_cofactors(&IntMatrix::identity(2)).is_err());
    }

    #[test]
    fn snf_examples() {
        let d = m(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&d);
        assert_eq!(s.factors, vec![Int::from(1), Int::from(6)]);

        let z = IntMatrix::zero(2, 3);
        assert!(smith_normal_form(&z).factors.is_empty());

        let u = m(&[vec![2, 4], vec![0, 8]]);
        assert_eq!(smith_normal_form(&u).factors, vec![Int::from(2), Int::from(8)]);
    }

    #[test]
    fn snf_transforms_are_witnesses() {
        let cases = [
            m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]),
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![3, 1, -4], vec![2, -3, 1]]),
            m(&[vec![2, 0], vec![0, 3], vec![5, 7]]),
        ];
        for a in &cases {
            let s = smith_normal_form(a);
            // p * a * q is the diagonal of factors
            let d = s.p.mul(a).mul(&s.q);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    let expect = if i == j && i < s.factors.len() { s.factors[i].clone() } else { Int::zero() };
                    assert_eq!(d[(i, j)], expect, "diagonal mismatch at ({i},{j}) for\n{a}");
                }
            }
            // transforms unimodular and mutually inverse
            assert_eq!(det(&s.p).unwrap().abs(), Int::one());
            assert_eq!(det(&s.q).unwrap().abs(), Int::one());
            assert_eq!(s.p.mul(&s.p_inv), IntMatrix::identity(a.rows()));
            assert_eq!(s.q.mul(&s.q_inv), IntMatrix::identity(a.cols()));
            // divisibility chain
            for w in s.factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "chain broken: {:?}", s.factors);
            }
        }
    }

    #[test]
    fn minors_gcd_examples() {
        assert_eq!(minors_gcd(&IntMatrix::identity(3), 3).unwrap(), Int::from(1));
        assert_eq!(minors_gcd(&m(&[vec![2, 0], vec![0, 2]]), 2).unwrap(), Int::from(4));
        assert_eq!(minors_gcd(&m(&[vec![1, 0], vec![0, 1], vec![1, 1]]), 2).unwrap(), Int::from(1));
        assert!(minors_gcd(&IntMatrix::identity(2), 3).is_err());
        assert_eq!(minors_gcd(&IntMatrix::zero(2, 2), 1).unwrap(), Int::from(0));
    }

    #[test]
    fn minors_gcd_is_product_of_factors_exhaustive_small() {
        // exhaustive over all 2x2 and 2x3 matrices with entries in [-3,3]
        for shape in [(2usize, 2usize), (2, 3)] {
            let n = shape.0 * shape.1;
            let mut idx = vec![0i64; n];
            loop {
                let rows: Vec<Vec<i64>> = idx.chunks(shape.1).map(|c| c.to_vec()).collect();
                let a = m(&rows);
                let s = smith_normal_form(&a);
                for k in 1..=shape.0.min(shape.1) {
                    let g = minors_gcd(&a, k).unwrap();
                    let expect = if k <= s.factors.len() {
                        s.factors[..k].iter().product::<Int>()
                    } else {
                        Int::zero()
                    };
                    assert_eq!(g, expect, "minors gcd mismatch for {a} k={k}");
                }
                // odometer
                let mut t = 0;
                loop {
                    if t == n {
                        return;
                    }
                    idx[t] += 1;
                    if idx[t] <= 3 {
                        break;
                    }
                    idx[t] = -3;
                    t += 1;
                }
            }
        }
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&IntMatrix::identity(3)).is_trivial());
        let single = IntMatrix::from_columns(2, &[vec![Int::from(2), Int::from(0)]]);
        let g = cokernel(&single);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![Int::from(2)]);
        let empty = IntMatrix::zero(3, 0);
        assert_eq!(cokernel(&empty), AbelianGroup::free(3));
    }

    #[test]
    fn cokernel_invariant_under_unimodular_ops() {
        let a = m(&[vec![2, 4], vec![0, 8], vec![2, 2]]);
        let base = cokernel(&a);
        // row op: r0 += 3*r2; col op: c1 += -2*c0; swaps
        let mut b = a.clone();
        b.add_row(0, 2, &Int::from(3));
        b.add_col(1, 0, &Int::from(-2));
        b.swap_rows(1, 2);
        b.swap_cols(0, 1);
        assert_eq!(cokernel(&b), base);
    }

    #[test]
    fn column_span_membership() {
        let a = IntMatrix::from_columns(3, &[
            vec![Int::from(2), Int::from(0), Int::from(0)],
            vec![Int::from(0), Int::from(3), Int::from(0)],
        ]);
        assert!(column_span_contains(&a, &[Int::from(4), Int::from(-3), Int::from(0)]));
        assert!(!column_span_contains(&a, &[Int::from(1), Int::from(0), Int::from(0)]));
        assert!(!column_span_contains(&a, &[Int::from(0), Int::from(0), Int::from(1)]));
        // zero vector is always a member, even of the empty lattice
        assert!(column_span_contains(&IntMatrix::zero(2, 0), &[Int::zero(), Int::zero()]));
    }
}
