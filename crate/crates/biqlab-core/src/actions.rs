//! Linear torus actions on products of odd-dimensional spheres: conversion
//! from biquotient exponent data, ineffective kernels, and freeness checks.
//!
//! A point of S^{2n-1} x ... supported on one coordinate per factor has
//! stabilizer equal to the joint kernel of the selected characters, so the
//! action is free iff every such selection gives an injective homomorphism
//! T^r -> T^(#factors). Injectivity is decided exactly: the gcd of the r x r
//! minors of the selected weight matrix must be 1.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{cokernel, minors_gcd, smith_normal_form, AbelianGroup, Int, IntMatrix};
use crate::Error;

/// Product of odd spheres; entry n means the factor S^(2n-1) in C^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereProduct {
    factors: Vec<usize>,
}

impl SphereProduct {
    pub fn new(factors: Vec<usize>) -> Self {
        assert!(factors.iter().all(|&n| n >= 1), "each factor needs at least one complex coordinate");
        SphereProduct { factors }
    }

    /// (S^3)^k
    pub fn s3_power(k: usize) -> Self {
        Self::new(vec![2; k])
    }

    /// S^5 x S^3
    pub fn s5_s3() -> Self {
        Self::new(vec![3, 2])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn coordinate_count(&self) -> usize {
        self.factors.iter().sum()
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|n| 2 * n - 1).sum()
    }
}

/// Weighted linear action of T^rank: coordinate j transforms by the
/// character z^weights[j].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTorusAction {
    rank: usize,
    space: SphereProduct,
    /// one length-`rank` vector per complex coordinate, factor by factor
    weights: Vec<Vec<i64>>,
}

impl LinearTorusAction {
    pub fn new(rank: usize, space: SphereProduct, weights: Vec<Vec<i64>>) -> Self {
        assert_eq!(weights.len(), space.coordinate_count(), "one weight vector per complex coordinate");
        assert!(weights.iter().all(|w| w.len() == rank), "weight vectors must have length rank");
        LinearTorusAction { rank, space, weights }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn space(&self) -> &SphereProduct {
        &self.space
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// Weight rows of one sphere factor.
    pub fn factor_weights(&self, factor: usize) -> &[Vec<i64>] {
        let start: usize = self.space.factors[..factor].iter().sum();
        &self.weights[start..start + self.space.factors[factor]]
    }

    /// T^3 on (S^3)^3 in the unit-diagonal normal form: p_i gets the i-th
    /// standard character, q_i gets row i of the matrix.
    pub fn t3_normal_form(rows: &[[i64; 3]; 3]) -> Self {
        let mut weights = Vec::with_capacity(6);
        for (i, row) in rows.iter().enumerate() {
            let mut e = vec![0i64; 3];
            e[i] = 1;
            weights.push(e);
            weights.push(row.to_vec());
        }
        Self::new(3, SphereProduct::s3_power(3), weights)
    }

    /// Rank-1 action on S^5 x S^3 with weights (a, b, c | d, e).
    pub fn s5s3_rank1(a: i64, b: i64, c: i64, d: i64, e: i64) -> Self {
        Self::new(
            1,
            SphereProduct::s5_s3(),
            vec![vec![a], vec![b], vec![c], vec![d], vec![e]],
        )
    }

    /// The free T^2 normal form on S^5 x S^3 parametrized by (a, b, c):
    /// (z,w) * (p1, p2, p3, q1, q2) = (z p1, z w^a p2, z w^b p3, w q1, z^c w q2).
    pub fn s5s3_rank2(a: i64, b: i64, c: i64) -> Self {
        Self::new(
            2,
            SphereProduct::s5_s3(),
            vec![vec![1, 0], vec![1, a], vec![1, b], vec![0, 1], vec![c, 1]],
        )
    }

    /// T^2 on (S^3)^3 in the ten-parameter normal form.
    pub fn s22s3(w: &S22s3Weights) -> Self {
        Self::new(
            2,
            SphereProduct::s3_power(3),
            vec![
                vec![w.a, 0],
                vec![w.b, w.c],
                vec![0, w.d],
                vec![w.e, w.f],
                vec![w.g, w.h],
                vec![w.i, w.j],
            ],
        )
    }

    fn full_weight_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows_i64(&self.weights)
    }

    /// Subgroup of T^rank acting trivially on every point: the kernel of the
    /// full weight map, described as the cokernel of its transpose.
    pub fn global_kernel(&self) -> AbelianGroup {
        cokernel(&self.full_weight_matrix().transpose())
    }

    /// Free iff every choice of one coordinate per sphere factor selects a
    /// weight matrix defining an injective homomorphism T^rank -> T^(#factors).
    pub fn is_free(&self) -> bool {
        if self.rank > self.space.factors.len() {
            return false;
        }
        self.for_each_selection(|rows| selection_injective(rows, self.rank))
    }

    /// Effectively free iff the induced action of T^rank / global_kernel is
    /// free. The quotient torus is reparametrized through the Smith form of
    /// the full weight matrix: with p W q = D of rank s, the quotient action
    /// on the same space has weight matrix the first s columns of p^-1.
    pub fn is_effectively_free(&self) -> bool {
        let w = self.full_weight_matrix();
        let snf = smith_normal_form(&w);
        let s = snf.rank();
        if s > self.space.factors.len() {
            return false;
        }
        let quotient: Vec<Vec<Int>> = (0..w.rows())
            .map(|i| (0..s).map(|j| snf.p_inv[(i, j)].clone()).collect())
            .collect();
        let quotient_rows: Vec<&[Int]> = quotient.iter().map(|r| r.as_slice()).collect();
        for_each_selection_over(&self.space, &quotient_rows, |rows| selection_injective_big(rows, s))
    }

    /// Same predicate by a different route, for cross-validation: every
    /// coordinate character must lie in the integer row span of every
    /// selection (characters vanishing on a selection's stabilizer are
    /// exactly the row span, so stabilizers then fix everything).
    pub fn is_effectively_free_by_span(&self) -> bool {
        let all: Vec<Vec<Int>> = self.weights.iter().map(|w| w.iter().map(|&x| Int::from(x)).collect()).collect();
        self.for_each_selection(|rows| {
            let cols: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
            let span = IntMatrix::from_columns(self.rank, &cols);
            all.iter().all(|wv| crate::lattice::column_span_contains(&span, wv))
        })
    }

    fn for_each_selection(&self, mut check: impl FnMut(&[&[i64]]) -> bool) -> bool {
        let rows: Vec<&[i64]> = self.weights.iter().map(|w| w.as_slice()).collect();
        for_each_selection_over(&self.space, &rows, move |sel| check(sel))
    }
}

/// Run `check` on every one-coordinate-per-factor selection of `rows`;
/// true iff all pass.
fn for_each_selection_over<T: Copy>(
    space: &SphereProduct,
    rows: &[T],
    mut check: impl FnMut(&[T]) -> bool,
) -> bool {
    let factors = space.factors();
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let mut choice = vec![0usize; factors.len()];
    let mut selected: Vec<T> = Vec::with_capacity(factors.len());
    loop {
        selected.clear();
        for (f, &c) in choice.iter().enumerate() {
            selected.push(rows[offsets[f] + c]);
        }
        if !check(&selected) {
            return false;
        }
        // odometer over coordinate choices
        let mut t = 0;
        loop {
            if t == factors.len() {
                return true;
            }
            choice[t] += 1;
            if choice[t] < factors[t] {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

/// Injectivity of the torus homomorphism given by integer rows (one per
/// factor, `r` columns): rank r with unit gcd of r x r minors.
fn selection_injective(rows: &[&[i64]], r: usize) -> bool {
    if r == 0 {
        return true;
    }
    if rows.len() < r {
        return false;
    }
    // fast path: entries small enough that an r x r determinant fits i128
    let small = r <= 3 && rows.iter().all(|row| row.iter().all(|&x| x.abs() <= (1 << 20)));
    if small {
        let mut g: i128 = 0;
        let idx: Vec<usize> = (0..rows.len()).collect();
        for combo in combinations_iter(&idx, r) {
            let d = det_small(rows, &combo, r);
            g = gcd_i128(g, d.abs());
            if g == 1 {
                return true;
            }
        }
        return false;
    }
    let big: Vec<Vec<Int>> = rows.iter().map(|row| row.iter().map(|&x| Int::from(x)).collect()).collect();
    let refs: Vec<&[Int]> = big.iter().map(|r| r.as_slice()).collect();
    selection_injective_big(&refs, r)
}

fn selection_injective_big(rows: &[&[Int]], r: usize) -> bool {
    if r == 0 {
        return true;
    }
    if rows.len() < r {
        return false;
    }
    let mut mat = IntMatrix::zero(rows.len(), r);
    for (i, row) in rows.iter().enumerate() {
        for j in 0..r {
            mat[(i, j)] = row[j].clone();
        }
    }
    minors_gcd(&mat, r).map(|g| g.is_one()).unwrap_or(false)
}

fn det_small(rows: &[&[i64]], pick: &[usize], r: usize) -> i128 {
    match r {
        1 => rows[pick[0]][0] as i128,
        2 => {
            let (a, b) = (rows[pick[0]], rows[pick[1]]);
            a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
        }
        3 => {
            let (a, b, c) = (rows[pick[0]], rows[pick[1]], rows[pick[2]]);
            let m = |x: &[i64], i: usize| x[i] as i128;
            m(a, 0) * (m(b, 1) * m(c, 2) - m(b, 2) * m(c, 1))
                - m(a, 1) * (m(b, 0) * m(c, 2) - m(b, 2) * m(c, 0))
                + m(a, 2) * (m(b, 0) * m(c, 1) - m(b, 1) * m(c, 0))
        }
        _ => unreachable!("fast path is limited to r <= 3"),
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn combinations_iter(idx: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = idx.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.iter().map(|&i| idx[i]).collect());
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

/// Exponent data of a two-sided SU(2)-block action: per factor, the left
/// exponent vector m and right exponent vector n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiquotientExponents {
    pub rank: usize,
    /// (m_i, n_i) per SU(2) factor
    pub factors: Vec<(Vec<i64>, Vec<i64>)>,
}

impl BiquotientExponents {
    pub fn new(rank: usize, factors: Vec<(Vec<i64>, Vec<i64>)>) -> Self {
        assert!(factors.iter().all(|(m, n)| m.len() == rank && n.len() == rank));
        BiquotientExponents { rank, factors }
    }
}

/// Per SU(2) factor the p coordinate picks up m - n and the q coordinate
/// m + n.
pub fn biquotient_to_linear(b: &BiquotientExponents) -> LinearTorusAction {
    let mut weights = Vec::with_capacity(2 * b.factors.len());
    for (m, n) in &b.factors {
        weights.push(m.iter().zip(n).map(|(x, y)| x - y).collect());
        weights.push(m.iter().zip(n).map(|(x, y)| x + y).collect());
    }
    LinearTorusAction::new(b.rank, SphereProduct::s3_power(b.factors.len()), weights)
}

/// Inverse of [`biquotient_to_linear`] on all-even weights: with p = 2a and
/// q = 2b, the exponents are m = a + b and n = b - a.
pub fn linear_to_biquotient(a: &LinearTorusAction) -> Result<BiquotientExponents, Error> {
    if a.space.factors().iter().any(|&n| n != 2) {
        return Err(Error::ShapeMismatch {
            expected: "product of S^3 factors".into(),
            got: format!("{:?}", a.space.factors()),
        });
    }
    if let Some(&bad) = a.weights.iter().flatten().find(|x| **x % 2 != 0) {
        return Err(Error::OddWeight { value: bad });
    }
    let mut factors = Vec::new();
    for f in 0..a.space.factors().len() {
        let w = a.factor_weights(f);
        let alpha: Vec<i64> = w[0].iter().map(|x| x / 2).collect();
        let beta: Vec<i64> = w[1].iter().map(|x| x / 2).collect();
        let m = alpha.iter().zip(&beta).map(|(x, y)| x + y).collect();
        let n = beta.iter().zip(&alpha).map(|(x, y)| x - y).collect();
        factors.push((m, n));
    }
    Ok(BiquotientExponents::new(a.rank, factors))
}

/// Weight parameters of the T^2 normal form on (S^3)^3:
/// (z,w) * (p,q,r) = ((z^a p1, z^b w^c p2), (w^d q1, z^e w^f q2),
/// (z^g w^h r1, z^i w^j r2)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S22s3Weights {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
    pub g: i64,
    pub h: i64,
    pub i: i64,
    pub j: i64,
}

impl S22s3Weights {
    pub fn from_array(t: [i64; 10]) -> Self {
        S22s3Weights { a: t[0], b: t[1], c: t[2], d: t[3], e: t[4], f: t[5], g: t[6], h: t[7], i: t[8], j: t[9] }
    }

    /// gcd(a,b,e,g,i) = gcd(c,d,f,h,j) = 1, the stated normalization.
    pub fn is_normalized(&self) -> bool {
        let g1 = [self.a, self.b, self.e, self.g, self.i]
            .iter()
            .fold(0i64, |acc, &x| acc.gcd(&x));
        let g2 = [self.c, self.d, self.f, self.h, self.j]
            .iter()
            .fold(0i64, |acc, &x| acc.gcd(&x));
        g1 == 1 && g2 == 1
    }
}

/// Brute-force freeness oracle: for each prime p <= bound, every nontrivial
/// element of (Z/p)^rank is tested for a fixed point, selection-wise. The
/// bound must cover the largest prime dividing any nonzero r x r minor of
/// any coordinate selection; the oracle refuses smaller bounds.
pub fn freeness_oracle(a: &LinearTorusAction, bound: u64) -> Result<bool, Error> {
    let required = required_oracle_bound(a);
    if bound < required {
        return Err(Error::OracleBoundTooSmall { given: bound, required });
    }
    if a.rank == 0 {
        return Ok(true);
    }
    let factors = a.space.factors();
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0usize, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    for p in primes_up_to(bound) {
        // weights reduced mod p
        let wmod: Vec<Vec<u64>> = a
            .weights
            .iter()
            .map(|w| w.iter().map(|&x| (x.rem_euclid(p as i64)) as u64).collect())
            .collect();
        let mut k = vec![0u64; a.rank];
        'elements: loop {
            // next element (odometer); the all-zero element is skipped below
            let mut t = 0;
            loop {
                if t == a.rank {
                    break 'elements;
                }
                k[t] += 1;
                if k[t] < p {
                    break;
                }
                k[t] = 0;
                t += 1;
            }
            // k is nontrivial; does it fix a point? need one vanishing
            // character per factor
            let mut fixes = true;
            for (f, &n) in factors.iter().enumerate() {
                let mut vanishes = false;
                for c in 0..n {
                    let w = &wmod[offsets[f] + c];
                    let mut dot = 0u64;
                    for (wi, ki) in w.iter().zip(&k) {
                        dot = (dot + wi * ki) % p;
                    }
                    if dot == 0 {
                        vanishes = true;
                        break;
                    }
                }
                if !vanishes {
                    fixes = false;
                    break;
                }
            }
            if fixes {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest admissible oracle bound: the largest prime dividing any nonzero
/// r x r minor of any coordinate selection (at least 2).
pub fn required_oracle_bound(a: &LinearTorusAction) -> u64 {
    let r = a.rank;
    let mut worst: u64 = 2;
    if r == 0 || r > 3 {
        // r = 0 has nothing to test; r > 3 falls back to exact minors below
        if r > 3 {
            worst = required_bound_big(a);
        }
        return worst;
    }
    let rows: Vec<&[i64]> = a.weights.iter().map(|w| w.as_slice()).collect();
    let small = rows.iter().all(|row| row.iter().all(|&x| x.abs() <= (1 << 20)));
    if !small {
        return required_bound_big(a);
    }
    for_each_selection_over(&a.space, &rows, |sel| {
        if sel.len() >= r {
            let idx: Vec<usize> = (0..sel.len()).collect();
            for combo in combinations_iter(&idx, r) {
                let d = det_small(sel, &combo, r).abs();
                if d > 1 {
                    worst = worst.max(largest_prime_factor(d as u128));
                }
            }
        }
        true
    });
    worst
}

fn required_bound_big(a: &LinearTorusAction) -> u64 {
    let r = a.rank;
    let rows: Vec<Vec<Int>> = a.weights.iter().map(|w| w.iter().map(|&x| Int::from(x)).collect()).collect();
    let refs: Vec<&[Int]> = rows.iter().map(|r| r.as_slice()).collect();
    let mut worst = 2u64;
    for_each_selection_over(&a.space, &refs, |sel| {
        if sel.len() >= r {
            let mut mat = IntMatrix::zero(sel.len(), r);
            for (i, row) in sel.iter().enumerate() {
                for j in 0..r {
                    mat[(i, j)] = row[j].clone();
                }
            }
            let idx: Vec<usize> = (0..sel.len()).collect();
            for combo in combinations_iter(&idx, r) {
                let sub = mat.submatrix(&combo, &(0..r).collect::<Vec<_>>());
                let d = crate::lattice::det(&sub).expect("square").abs();
                if d > Int::one() {
                    // factor exactly: minors here stay small in practice
                    let mut v = d.clone();
                    let mut p = Int::from(2);
                    let mut biggest = 2u64;
                    while &p * &p <= v {
                        if (&v % &p).is_zero() {
                            biggest = biggest.max(int_to_u64(&p));
                            while (&v % &p).is_zero() {
                                v = &v / &p;
                            }
                        }
                        p += 1;
                    }
                    if v > Int::one() {
                        biggest = biggest.max(int_to_u64(&v));
                    }
                    worst = worst.max(biggest);
                }
            }
        }
        true
    });
    worst
}

fn int_to_u64(v: &Int) -> u64 {
    use num_traits::ToPrimitive;
    v.to_u64().expect("prime factor exceeds u64; oracle bound not representable")
}

fn largest_prime_factor(mut n: u128) -> u64 {
    let mut best = 1u128;
    let mut p = 2u128;
    while p * p <= n {
        if n % p == 0 {
            best = best.max(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        best = best.max(n);
    }
    best as u64
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; (n + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n as usize {
        if sieve[p] {
            let mut q = p * p;
            while q <= n as usize {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}
