//! Independent oracles for the integration tests. They deliberately avoid the
//! library's distance, rank and Gram routines and only borrow field
//! arithmetic, which has its own digit-level oracle in `properties.rs`.

#![allow(dead_code)]

use std::sync::Arc;

use grl_core::field::{Elem, Field, QuadraticExtension};
use grl_core::grl::GrlSpec;
use grl_core::linalg::Matrix;
use rand::seq::SliceRandom;
use rand::Rng;

/// Rank by plain row reduction on a copy.
pub fn rank(f: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).unwrap();
        let pivot: Vec<Elem> = m[r].iter().map(|&x| f.mul(x, inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        m[r] = pivot;
        r += 1;
    }
    r
}

fn columns(g: &Matrix, idx: &[usize]) -> Vec<Vec<Elem>> {
    (0..g.rows())
        .map(|i| idx.iter().map(|&j| g.get(i, j)).collect())
        .collect()
}

/// Minimum weight over all `q^k - 1` nonzero messages, no projective shortcut.
pub fn brute_distance(g: &Matrix) -> usize {
    let f = g.field();
    let (k, n, q) = (g.rows(), g.cols(), f.order() as u64);
    let total = q.pow(k as u32);
    let mut best = n + 1;
    let mut msg = vec![0 as Elem; k];
    for idx in 1..total {
        let mut x = idx;
        for m in msg.iter_mut() {
            *m = (x % q) as Elem;
            x /= q;
        }
        let wt = (0..n)
            .filter(|&j| f.sum((0..k).map(|i| f.mul(msg[i], g.get(i, j)))) != 0)
            .count();
        best = best.min(wt);
    }
    best
}

/// Dual distance as the size of the smallest linearly dependent column set.
pub fn brute_dual_distance(g: &Matrix) -> usize {
    let f = g.field();
    let n = g.cols();
    for t in 1..=n {
        let mut idx: Vec<usize> = (0..t).collect();
        loop {
            if rank(f, &columns(g, &idx)) < t {
                return t;
            }
            let Some(i) = (0..t).rev().find(|&i| idx[i] < n - t + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..t {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    n + 1
}

/// `[n, k, d]` with `d = n - k` on both sides.
pub fn brute_is_nmds(g: &Matrix) -> bool {
    let (n, k) = (g.cols(), g.rows());
    brute_distance(g) + k == n && brute_dual_distance(g) == k
}

/// `sum_l a_l conj(b_l)` for every pair of rows.
pub fn hermitian_gram(ext: &QuadraticExtension, g: &Matrix) -> Vec<Vec<Elem>> {
    let f = ext.ext();
    (0..g.rows())
        .map(|i| {
            (0..g.rows())
                .map(|j| f.sum((0..g.cols()).map(|l| f.mul(g.get(i, l), ext.conj(g.get(j, l))))))
                .collect()
        })
        .collect()
}

pub fn gram_is_zero(ext: &QuadraticExtension, g: &Matrix) -> bool {
    hermitian_gram(ext, g).iter().flatten().all(|&x| x == 0)
}

pub fn random_unit(rng: &mut impl Rng, f: &Field) -> Elem {
    rng.gen_range(1..f.order())
}

pub fn random_distinct(rng: &mut impl Rng, f: &Field, n: usize) -> Vec<Elem> {
    let mut all: Vec<Elem> = (0..f.order()).collect();
    all.shuffle(rng);
    all.truncate(n);
    all
}

pub fn random_nonsingular(rng: &mut impl Rng, f: &Arc<Field>, s: usize) -> Matrix {
    loop {
        let data: Vec<Elem> = (0..s * s).map(|_| rng.gen_range(0..f.order())).collect();
        let rows: Vec<Vec<Elem>> = data.chunks(s).map(|r| r.to_vec()).collect();
        if rank(f, &rows) == s {
            return Matrix::from_rows(f.clone(), &rows).unwrap();
        }
    }
}

/// A random spec with `n` points, dimension `k` and an `s x s` block. Some
/// blocks are drawn sparse so that degenerate extra columns show up.
pub fn random_spec(rng: &mut impl Rng, f: &Arc<Field>, n: usize, k: usize, s: usize) -> GrlSpec {
    let alpha = random_distinct(rng, f, n);
    let v: Vec<Elem> = (0..n).map(|_| random_unit(rng, f)).collect();
    let a = if rng.gen_bool(0.3) {
        let mut perm: Vec<usize> = (0..s).collect();
        perm.shuffle(rng);
        let mut rows = vec![vec![0; s]; s];
        for (i, &p) in perm.iter().enumerate() {
            rows[i][p] = random_unit(rng, f);
        }
        if s > 1 && rng.gen_bool(0.5) {
            rows[0][perm[1]] = rng.gen_range(0..f.order());
        }
        Matrix::from_rows(f.clone(), &rows).unwrap()
    } else {
        random_nonsingular(rng, f, s)
    };
    GrlSpec::new(f.clone(), alpha, v, a, k).unwrap()
}

/// Some `A` with `A conj(A)^T = h` for a nonsingular Hermitian `h`, found by
/// Hermitian congruence diagonalisation.
pub fn hermitian_factor(ext: &QuadraticExtension, h: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let f = ext.ext();
    let s = h.len();
    let mut h: Vec<Vec<Elem>> = h.to_vec();
    // Row operations P with P h conj(P)^T diagonal.
    let mut p: Vec<Vec<Elem>> = (0..s)
        .map(|i| (0..s).map(|j| (i == j) as Elem).collect())
        .collect();
    let add_row =
        |h: &mut Vec<Vec<Elem>>, p: &mut Vec<Vec<Elem>>, dst: usize, src: usize, lam: Elem| {
            for c in 0..s {
                p[dst][c] = f.add(p[dst][c], f.mul(lam, p[src][c]));
                h[dst][c] = f.add(h[dst][c], f.mul(lam, h[src][c]));
            }
            let cl = ext.conj(lam);
            for r in 0..s {
                h[r][dst] = f.add(h[r][dst], f.mul(cl, h[r][src]));
            }
        };
    for i in 0..s {
        if h[i][i] == 0 {
            if let Some(j) = (i + 1..s).find(|&j| h[j][j] != 0) {
                add_row(&mut h, &mut p, i, j, 1);
            } else {
                let j = (i + 1..s).find(|&j| h[j][i] != 0)?;
                let lam = (1..f.order()).find(|&l| {
                    let t = f.mul(l, h[j][i]);
                    f.add(t, ext.conj(t)) != 0
                })?;
                add_row(&mut h, &mut p, i, j, lam);
            }
        }
        let d = f.inv(h[i][i]).ok()?;
        for j in i + 1..s {
            if h[j][i] != 0 {
                let lam = f.neg(f.mul(h[j][i], d));
                add_row(&mut h, &mut p, j, i, lam);
            }
        }
    }
    let pm = Matrix::from_rows(ext.ext().clone(), &p).ok()?;
    let pinv = pm.inverse().ok()?;
    let mut a = pinv.to_rows();
    for c in 0..s {
        let e = ext.solve_norm(h[c][c]).ok()?;
        for row in a.iter_mut() {
            row[c] = f.mul(row[c], e);
        }
    }
    Some(a)
}

/// Weighted sums `sum N(v_i) alpha_i^t` straight from the definition.
pub fn hermitian_sum(ext: &QuadraticExtension, alpha: &[Elem], v: &[Elem], t: u64) -> Elem {
    let f = ext.ext();
    f.sum(
        alpha
            .iter()
            .zip(v)
            .map(|(&a, &x)| f.mul(ext.norm(x), f.pow(a, t))),
    )
}

/// A Hermitian self-orthogonal spec with `k = s`, where only the block
/// condition applies: `A conj(A)^T = -[S]`. `None` when `[S]` is singular.
pub fn random_so_spec_k_eq_s(
    rng: &mut impl Rng,
    ext: &QuadraticExtension,
    n: usize,
    s: usize,
) -> Option<GrlSpec> {
    let f = ext.ext();
    let q = ext.q() as u64;
    let alpha = random_distinct(rng, f, n);
    let v: Vec<Elem> = (0..n).map(|_| random_unit(rng, f)).collect();
    // Row r of the GRS part is v alpha^r; the Gram of rows r, c is S_{r + q c}.
    let target: Vec<Vec<Elem>> = (0..s)
        .map(|r| {
            (0..s)
                .map(|c| f.neg(hermitian_sum(ext, &alpha, &v, r as u64 + q * c as u64)))
                .collect()
        })
        .collect();
    let a = hermitian_factor(ext, &target)?;
    let a = Matrix::from_rows(f.clone(), &a).ok()?;
    GrlSpec::new(f.clone(), alpha, v, a, s).ok()
}
