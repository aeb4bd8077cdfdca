//! Generalized Roth-Lempel codes: a GRS generator extended by `s` columns
//! that carry a nonsingular `s x s` block in the bottom `s` rows.
//!
//! Besides construction this module holds the combinatorial machinery the
//! NMDS criteria run on (subset sums, the Omega/Gamma vectors) and the
//! weighted power sums `S_t = sum N(v_i) alpha_i^t` that decide Hermitian
//! self-orthogonality.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::combin::{binomial, for_each_in_range};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec, QuadraticExtension};
use crate::linalg::Matrix;
use crate::par::{self, Exec};

/// Cap on the number of subsets visited by Omega/Gamma scans and by exact
/// subset-sum counting.
pub const SUBSET_BUDGET: u128 = 10_000_000;

const SUBSET_CHUNK: u64 = 1 << 12;

#[derive(Clone, PartialEq, Eq)]
pub struct GrlSpec {
    field: Arc<Field>,
    alpha: Vec<Elem>,
    v: Vec<Elem>,
    a: Matrix,
    k: usize,
}

impl std::fmt::Debug for GrlSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrlSpec")
            .field("q", &self.field.order())
            .field("alpha", &self.alpha)
            .field("v", &self.v)
            .field("A", &self.a.to_rows())
            .field("k", &self.k)
            .finish()
    }
}

impl GrlSpec {
    pub fn new(
        field: Arc<Field>,
        alpha: Vec<Elem>,
        v: Vec<Elem>,
        a: Matrix,
        k: usize,
    ) -> Result<Self> {
        check_evaluation_data(&field, &alpha, &v)?;
        if *a.field() != field {
            return Err(Error::FieldMismatch);
        }
        let s = a.rows();
        if !a.is_square() || s == 0 {
            return Err(Error::InvalidSpec(format!(
                "A must be square and nonempty, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if a.det()? == 0 {
            return Err(Error::InvalidSpec("A is singular".into()));
        }
        if k < s || k > alpha.len() {
            return Err(Error::InvalidSpec(format!(
                "need s <= k <= n, got s = {s}, k = {k}, n = {}",
                alpha.len()
            )));
        }
        Ok(Self {
            field,
            alpha,
            v,
            a,
            k,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn alpha(&self) -> &[Elem] {
        &self.alpha
    }

    pub fn v(&self) -> &[Elem] {
        &self.v
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of evaluation points.
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn s(&self) -> usize {
        self.a.rows()
    }

    /// Code length `n + s`.
    pub fn length(&self) -> usize {
        self.n() + self.s()
    }

    pub fn generator(&self) -> Matrix {
        build_grl_generator(self)
    }

    pub fn code(&self) -> LinearCode {
        LinearCode::new(self.generator()).expect("GRL generators have full row rank")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GrlSpecJson::from(self)).expect("spec serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: GrlSpecJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

/// Wire form of a spec: `{"field":{..},"alpha":[..],"v":[..],"A":[[..]],"k":..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrlSpecJson {
    pub field: FieldSpec,
    pub alpha: Vec<Elem>,
    pub v: Vec<Elem>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Elem>>,
    pub k: usize,
}

impl From<&GrlSpec> for GrlSpecJson {
    fn from(s: &GrlSpec) -> Self {
        Self {
            field: s.field.spec().clone(),
            alpha: s.alpha.clone(),
            v: s.v.clone(),
            a: s.a.to_rows(),
            k: s.k,
        }
    }
}

impl TryFrom<GrlSpecJson> for GrlSpec {
    type Error = Error;

    fn try_from(raw: GrlSpecJson) -> Result<Self> {
        let field = Field::from_spec(&raw.field)?;
        let a = Matrix::from_rows(field.clone(), &raw.a)?;
        GrlSpec::new(field, raw.alpha, raw.v, a, raw.k)
    }
}

fn check_evaluation_data(field: &Field, alpha: &[Elem], v: &[Elem]) -> Result<()> {
    if alpha.len() != v.len() {
        return Err(Error::InvalidSpec(format!(
            "{} evaluation points but {} multipliers",
            alpha.len(),
            v.len()
        )));
    }
    let mut seen = vec![false; field.order() as usize];
    for &x in alpha {
        field.check(x)?;
        if std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::InvalidSpec(format!("evaluation point {x} repeats")));
        }
    }
    for (i, &x) in v.iter().enumerate() {
        field.check(x)?;
        if x == 0 {
            return Err(Error::InvalidSpec(format!(
                "column multiplier v[{i}] is zero"
            )));
        }
    }
    Ok(())
}

/// `k x n` matrix with row `r` equal to `(v_i alpha_i^r)`.
pub fn build_grs_generator(
    field: &Arc<Field>,
    alpha: &[Elem],
    v: &[Elem],
    k: usize,
) -> Result<Matrix> {
    check_evaluation_data(field, alpha, v)?;
    let n = alpha.len();
    let mut g = Matrix::zeros(field.clone(), k, n);
    for (i, (&a, &vi)) in alpha.iter().zip(v).enumerate() {
        let mut x = vi;
        for r in 0..k {
            g.set(r, i, x);
            x = field.mul(x, a);
        }
    }
    Ok(g)
}

/// `[G_k | (O over A)]`, of size `k x (n + s)`.
pub fn build_grl_generator(spec: &GrlSpec) -> Matrix {
    let (k, n, s) = (spec.k, spec.n(), spec.s());
    let grs =
        build_grs_generator(&spec.field, &spec.alpha, &spec.v, k).expect("spec was validated");
    let mut tail = Matrix::zeros(spec.field.clone(), k, s);
    for i in 0..s {
        for j in 0..s {
            tail.set(k - s + i, j, spec.a.get(i, j));
        }
    }
    debug_assert_eq!(grs.cols(), n);
    grs.hstack(&tail).expect("same field and row count")
}

/// `w_i = prod_{j != i} 1/(alpha_i - alpha_j)`.
pub fn lagrange_weights(field: &Field, alpha: &[Elem]) -> Result<Vec<Elem>> {
    alpha
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let prod = field.product(
                alpha
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &aj)| field.sub(ai, aj)),
            );
            field
                .inv(prod)
                .map_err(|_| Error::InvalidSpec("evaluation points must be distinct".into()))
        })
        .collect()
}

/// `sum_i w_i alpha_i^(n-1+t)`.
pub fn power_sum(field: &Field, alpha: &[Elem], weights: &[Elem], t: i64) -> Result<Elem> {
    let e = alpha.len() as i64 - 1 + t;
    let mut acc = 0;
    for (&a, &w) in alpha.iter().zip(weights) {
        acc = field.add(acc, field.mul(w, field.pow_signed(a, e)?));
    }
    Ok(acc)
}

/// Closed forms of the power sum at `t = 1` and `t = 2`:
/// `sum alpha_i` and `sum alpha_i^2 + sum_{i<j} alpha_i alpha_j`.
pub fn power_sum_closed_forms(field: &Field, alpha: &[Elem]) -> (Elem, Elem) {
    let e1 = field.sum(alpha.iter().copied());
    let sq = field.sum(alpha.iter().map(|&a| field.mul(a, a)));
    let pair = SymmetricPair::of(field, alpha.iter().copied()).sigma2;
    (e1, field.add(sq, pair))
}

/// `sigma1 = -sum alpha_i` and `sigma2 = sum_{i<l} alpha_i alpha_l` over a subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricPair {
    pub sigma1: Elem,
    pub sigma2: Elem,
}

impl SymmetricPair {
    pub fn of(field: &Field, items: impl IntoIterator<Item = Elem>) -> Self {
        let (mut e1, mut e2) = (0, 0);
        for x in items {
            e2 = field.add(e2, field.mul(e1, x));
            e1 = field.add(e1, x);
        }
        Self {
            sigma1: field.neg(e1),
            sigma2: e2,
        }
    }

    /// `(1, -sigma1, sigma1^2 - sigma2)`.
    pub fn omega_vector(&self, field: &Field) -> [Elem; 3] {
        let s1 = self.sigma1;
        [1, field.neg(s1), field.sub(field.mul(s1, s1), self.sigma2)]
    }

    /// `(sigma2, sigma1, 1)`.
    pub fn gamma_vector(&self) -> [Elem; 3] {
        [self.sigma2, self.sigma1, 1]
    }
}

/// A `t`-subset of `set` (as positions) summing to `delta`, found by a
/// reachability table over (prefix, count, partial sum); `None` when no such
/// subset exists.
pub fn subset_sum_witness(
    field: &Field,
    set: &[Elem],
    t: usize,
    delta: Elem,
) -> Result<Option<Vec<usize>>> {
    let n = set.len();
    let q = field.order() as usize;
    if t > n {
        return Ok(None);
    }
    let cells = (n as u128 + 1) * (t as u128 + 1) * q as u128;
    if cells > 1 << 32 {
        return Err(Error::Infeasible {
            what: "subset-sum table".into(),
            needed: cells,
            budget: 1 << 32,
        });
    }
    let layer = (t + 1) * q;
    let idx = |i: usize, c: usize, s: Elem| i * layer + c * q + s as usize;
    let mut reach = vec![false; (n + 1) * layer];
    reach[idx(0, 0, 0)] = true;
    for (i, &x) in set.iter().enumerate() {
        for c in 0..=t.min(i) {
            for s in 0..q as Elem {
                if !reach[idx(i, c, s)] {
                    continue;
                }
                reach[idx(i + 1, c, s)] = true;
                if c < t {
                    reach[idx(i + 1, c + 1, field.add(s, x))] = true;
                }
            }
        }
    }
    if !reach[idx(n, t, delta)] {
        return Ok(None);
    }
    let mut picked = Vec::with_capacity(t);
    let (mut c, mut s) = (t, delta);
    for i in (0..n).rev() {
        if reach[idx(i, c, s)] {
            continue;
        }
        picked.push(i);
        s = field.sub(s, set[i]);
        c -= 1;
    }
    debug_assert_eq!((c, s), (0, 0));
    picked.reverse();
    Ok(Some(picked))
}

pub fn subset_sum_reachable(field: &Field, set: &[Elem], t: usize, delta: Elem) -> Result<bool> {
    Ok(subset_sum_witness(field, set, t, delta)?.is_some())
}

/// Number of `t`-subsets of `set` summing to `delta`, by enumeration.
pub fn subset_sum_count(field: &Field, set: &[Elem], t: usize, delta: Elem) -> Result<u128> {
    let total = binomial(set.len(), t);
    if total > SUBSET_BUDGET {
        return Err(Error::Infeasible {
            what: format!("counting {t}-subsets of {} elements", set.len()),
            needed: total,
            budget: SUBSET_BUDGET,
        });
    }
    let mut count = 0;
    for_each_in_range(set.len(), t, 0, total, |s| {
        if field.sum(s.iter().map(|&i| set[i])) == delta {
            count += 1;
        }
        true
    });
    Ok(count)
}

/// Whether `target` is the sum of some `k-1` evaluation points; returns the
/// positions of one such subset.
pub fn delta_membership(
    field: &Field,
    alpha: &[Elem],
    k: usize,
    target: Elem,
) -> Result<Option<Vec<usize>>> {
    if k == 0 || k - 1 > alpha.len() {
        return Err(Error::OutOfRange(format!(
            "need 1 <= k-1 <= n, got k = {k}, n = {}",
            alpha.len()
        )));
    }
    subset_sum_witness(field, alpha, k - 1, target)
}

/// `t`-subsets of the full field (or its units) that the published case
/// lists declare to have no member summing to any target. The lists ignore
/// the target entirely; compare against `subset_sum_reachable`.
pub fn case_list_full_field_unreachable(q: u32, t: u32) -> bool {
    let Some((p, _)) = crate::field::prime_power(q) else {
        return false;
    };
    t.is_multiple_of(p)
        && ((p % 2 == 1 && t == p && p == q)
            || (p % 2 == 1 && p < t && t == q)
            || (p == 2 && p < t && t == q))
}

pub fn case_list_units_unreachable(q: u32, t: u32) -> bool {
    let Some((p, _)) = crate::field::prime_power(q) else {
        return false;
    };
    (p == 2 && t == q - 1 && q > p) || (p % 2 == 1 && t == q - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetVector {
    /// Positions into the evaluation set.
    pub subset: Vec<usize>,
    pub vector: [Elem; 3],
}

fn subset_vectors(
    field: &Field,
    alpha: &[Elem],
    t: usize,
    make: impl Fn(SymmetricPair) -> [Elem; 3],
) -> Result<Vec<SubsetVector>> {
    let total = binomial(alpha.len(), t);
    if t > alpha.len() {
        return Ok(Vec::new());
    }
    if total > SUBSET_BUDGET {
        return Err(Error::Infeasible {
            what: format!("listing {t}-subsets of {} points", alpha.len()),
            needed: total,
            budget: SUBSET_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    for_each_in_range(alpha.len(), t, 0, total, |s| {
        let pair = SymmetricPair::of(field, s.iter().map(|&i| alpha[i]));
        out.push(SubsetVector {
            subset: s.to_vec(),
            vector: make(pair),
        });
        true
    });
    Ok(out)
}

/// `(1, -sigma1(I), sigma1(I)^2 - sigma2(I))` for every `t`-subset, in
/// lexicographic subset order.
pub fn omega_set(field: &Field, alpha: &[Elem], t: usize) -> Result<Vec<SubsetVector>> {
    subset_vectors(field, alpha, t, |p| p.omega_vector(field))
}

/// `(sigma2(I), sigma1(I), 1)` for every `t`-subset.
pub fn gamma_set(field: &Field, alpha: &[Elem], t: usize) -> Result<Vec<SubsetVector>> {
    subset_vectors(field, alpha, t, |p| p.gamma_vector())
}

pub fn distinct_vectors(items: &[SubsetVector]) -> Vec<[Elem; 3]> {
    let mut v: Vec<[Elem; 3]> = items.iter().map(|s| s.vector).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn dot3(f: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
    f.add(
        f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])),
        f.mul(a[2], b[2]),
    )
}

fn cross3(f: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
    let m = |x, y| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

fn parallel3(f: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> bool {
    cross3(f, a, b) == [0, 0, 0]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjunct {
    /// `c = a * sigma` with `A = [[a, b], [c, d]]`.
    FirstColumn,
    /// `d = b * sigma`.
    SecondColumn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S2Witness {
    pub disjunct: Disjunct,
    /// The subset sum `sigma`.
    pub sigma: Elem,
    /// Positions of the `k-1` evaluation points summing to `sigma`.
    pub subset: Vec<usize>,
    /// `k` generator columns that are linearly dependent because of it.
    pub dependent_columns: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S2Verdict {
    pub nmds: bool,
    pub witness: Option<S2Witness>,
}

/// NMDS test for `s = 2`: the code is NMDS exactly when `c/a` (for `a != 0`)
/// or `d/b` (for `b != 0`) is a sum of `k-1` evaluation points.
pub fn nmds_criterion_s2(spec: &GrlSpec) -> Result<S2Verdict> {
    if spec.s() != 2 {
        return Err(Error::InvalidSpec(format!(
            "two extra columns expected, got {}",
            spec.s()
        )));
    }
    if spec.k < 2 {
        return Err(Error::OutOfRange("the criterion needs k >= 2".into()));
    }
    let f = &spec.field;
    let a = &spec.a;
    let n = spec.n();
    for (disjunct, top, bottom, col) in [
        (Disjunct::FirstColumn, a.get(0, 0), a.get(1, 0), n),
        (Disjunct::SecondColumn, a.get(0, 1), a.get(1, 1), n + 1),
    ] {
        if top == 0 {
            continue;
        }
        let sigma = f.div(bottom, top)?;
        if let Some(subset) = delta_membership(f, &spec.alpha, spec.k, sigma)? {
            let mut dependent_columns = subset.clone();
            dependent_columns.push(col);
            return Ok(S2Verdict {
                nmds: true,
                witness: Some(S2Witness {
                    disjunct,
                    sigma,
                    subset,
                    dependent_columns,
                }),
            });
        }
    }
    Ok(S2Verdict {
        nmds: false,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum S3Dependency {
    /// The Omega vector of `subset` lies in the span of two columns of A.
    PairSpan {
        columns: [usize; 2],
        subset: Vec<usize>,
        dependent_columns: Vec<usize>,
    },
    /// A column of A is orthogonal to the Gamma vector of `subset`.
    Orthogonal {
        column: usize,
        subset: Vec<usize>,
        dependent_columns: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum S3Failure {
    /// No `k` columns are dependent: the code is MDS.
    NoDependentK,
    /// A Gamma vector is orthogonal to two columns of A, so some `k+1`
    /// generator columns have rank below `k`.
    DoublyOrthogonal {
        columns: [usize; 2],
        subset: Vec<usize>,
        deficient_columns: Vec<usize>,
    },
    /// A column of A is parallel to an Omega vector, so some `k-1` generator
    /// columns are dependent.
    Parallel {
        column: usize,
        subset: Vec<usize>,
        dependent_columns: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct S3Verdict {
    pub nmds: bool,
    pub dependency: Option<S3Dependency>,
    pub failure: Option<S3Failure>,
}

fn first_subset<T: Send>(
    n: usize,
    t: usize,
    exec: Exec,
    f: impl Fn(&[usize]) -> Option<T> + Sync + Send,
) -> Option<T> {
    if t > n {
        return None;
    }
    let total = binomial(n, t) as u64;
    par::find_first(exec, total, SUBSET_CHUNK, |range| {
        let mut hit = None;
        for_each_in_range(n, t, range.start as u128, range.end as u128, |s| {
            hit = f(s);
            hit.is_none()
        });
        hit
    })
}

/// NMDS test for `s = 3` over the Omega vectors of `(k-2)`-subsets and the
/// Gamma vectors of `(k-1)`-subsets. Conditions are checked in the order
/// parallel columns, doubly orthogonal vectors, then existence of a
/// dependency; the first violation is reported.
pub fn nmds_criterion_s3(spec: &GrlSpec, exec: Exec) -> Result<S3Verdict> {
    if spec.s() != 3 {
        return Err(Error::InvalidSpec(format!(
            "three extra columns expected, got {}",
            spec.s()
        )));
    }
    let (n, k) = (spec.n(), spec.k);
    let needed = binomial(n, k - 2) + binomial(n, k - 1);
    if needed > SUBSET_BUDGET {
        return Err(Error::Infeasible {
            what: "scanning Omega and Gamma subsets".into(),
            needed,
            budget: SUBSET_BUDGET,
        });
    }
    let f = spec.field.as_ref();
    let alpha = &spec.alpha;
    let cols: [[Elem; 3]; 3] = std::array::from_fn(|j| std::array::from_fn(|i| spec.a.get(i, j)));
    let omega = |s: &[usize]| SymmetricPair::of(f, s.iter().map(|&i| alpha[i])).omega_vector(f);
    let gamma = |s: &[usize]| SymmetricPair::of(f, s.iter().map(|&i| alpha[i])).gamma_vector();
    let with = |s: &[usize], extra: &[usize]| {
        let mut v = s.to_vec();
        v.extend(extra.iter().map(|&j| n + j));
        v
    };

    let parallel = first_subset(n, k - 2, exec, |s| {
        let b = omega(s);
        (0..3)
            .find(|&j| parallel3(f, &cols[j], &b))
            .map(|j| S3Failure::Parallel {
                column: j,
                subset: s.to_vec(),
                dependent_columns: with(s, &[j]),
            })
    });
    if let Some(fail) = parallel {
        return Ok(S3Verdict {
            nmds: false,
            dependency: None,
            failure: Some(fail),
        });
    }

    let doubly = first_subset(n, k - 1, exec, |s| {
        let b = gamma(s);
        let zero: Vec<usize> = (0..3).filter(|&j| dot3(f, &cols[j], &b) == 0).collect();
        (zero.len() >= 2).then(|| S3Failure::DoublyOrthogonal {
            columns: [zero[0], zero[1]],
            subset: s.to_vec(),
            deficient_columns: with(s, &zero[..2]),
        })
    });
    if let Some(fail) = doubly {
        return Ok(S3Verdict {
            nmds: false,
            dependency: None,
            failure: Some(fail),
        });
    }

    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let normals: Vec<[Elem; 3]> = pairs
        .iter()
        .map(|&(i, j)| cross3(f, &cols[i], &cols[j]))
        .collect();
    let span = first_subset(n, k - 2, exec, |s| {
        let b = omega(s);
        (0..3).find(|&p| dot3(f, &normals[p], &b) == 0).map(|p| {
            let (i, j) = pairs[p];
            S3Dependency::PairSpan {
                columns: [i, j],
                subset: s.to_vec(),
                dependent_columns: with(s, &[i, j]),
            }
        })
    });
    let dependency = span.or_else(|| {
        first_subset(n, k - 1, exec, |s| {
            let b = gamma(s);
            (0..3)
                .find(|&j| dot3(f, &cols[j], &b) == 0)
                .map(|j| S3Dependency::Orthogonal {
                    column: j,
                    subset: s.to_vec(),
                    dependent_columns: with(s, &[j]),
                })
        })
    });
    match dependency {
        Some(d) => Ok(S3Verdict {
            nmds: true,
            dependency: Some(d),
            failure: None,
        }),
        None => Ok(S3Verdict {
            nmds: false,
            dependency: None,
            failure: Some(S3Failure::NoDependentK),
        }),
    }
}

/// `S_t = sum N(v_i) alpha_i^t` for a set of exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianSums {
    values: BTreeMap<u64, Elem>,
}

impl HermitianSums {
    pub fn get(&self, t: u64) -> Option<Elem> {
        self.values.get(&t).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Elem)> + '_ {
        self.values.iter().map(|(&t, &v)| (t, v))
    }
}

pub fn hermitian_sums(
    ext: &QuadraticExtension,
    alpha: &[Elem],
    v: &[Elem],
    exponents: &[u64],
) -> HermitianSums {
    let f = ext.ext();
    let norms: Vec<Elem> = v.iter().map(|&x| ext.norm(x)).collect();
    let values = exponents
        .iter()
        .map(|&t| {
            (
                t,
                f.sum(
                    alpha
                        .iter()
                        .zip(&norms)
                        .map(|(&a, &nv)| f.mul(nv, f.pow(a, t))),
                ),
            )
        })
        .collect();
    HermitianSums { values }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SoFailure {
    /// `S_{r + q s} != 0` for a row `r` that does not meet A.
    NonzeroSum {
        r: usize,
        s: usize,
        exponent: u64,
        value: Elem,
    },
    /// `(A conj(A)^T)[i][j] != -S_{(k-s+i) + q(k-s+j)}`.
    MatrixEntry {
        i: usize,
        j: usize,
        expected: Elem,
        actual: Elem,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoVerdict {
    pub self_orthogonal: bool,
    pub failure: Option<SoFailure>,
}

/// Hermitian self-orthogonality through the power sums, for any `s`:
/// rows `0..k-s` must be orthogonal to everything (`S_{r+qs} = 0`) and the
/// rows meeting A must satisfy `A conj(A)^T = -[S_{(k-s+i)+q(k-s+j)}]`.
pub fn so_criterion(spec: &GrlSpec, ext: &QuadraticExtension) -> Result<SoVerdict> {
    if **ext.ext() != *spec.field {
        return Err(Error::NotExtension(spec.field.order()));
    }
    let f = ext.ext();
    let q = ext.q() as u64;
    let (k, s) = (spec.k, spec.s());
    let exponent = |r: usize, c: usize| r as u64 + q * c as u64;
    let mut wanted: Vec<u64> = (0..k)
        .flat_map(|r| (0..k).map(move |c| exponent(r, c)))
        .collect();
    wanted.sort_unstable();
    wanted.dedup();
    let sums = hermitian_sums(ext, &spec.alpha, &spec.v, &wanted);
    for r in 0..k - s {
        for c in 0..k {
            let e = exponent(r, c);
            let value = sums.get(e).expect("requested");
            if value != 0 {
                return Ok(SoVerdict {
                    self_orthogonal: false,
                    failure: Some(SoFailure::NonzeroSum {
                        r,
                        s: c,
                        exponent: e,
                        value,
                    }),
                });
            }
        }
    }
    let gram = spec.a.mul(&spec.a.conj_transpose(ext)?)?;
    for i in 0..s {
        for j in 0..s {
            let expected = f.neg(sums.get(exponent(k - s + i, k - s + j)).expect("requested"));
            let actual = gram.get(i, j);
            if expected != actual {
                return Ok(SoVerdict {
                    self_orthogonal: false,
                    failure: Some(SoFailure::MatrixEntry {
                        i,
                        j,
                        expected,
                        actual,
                    }),
                });
            }
        }
    }
    Ok(SoVerdict {
        self_orthogonal: true,
        failure: None,
    })
}

pub fn so_criterion_s2(spec: &GrlSpec, ext: &QuadraticExtension) -> Result<SoVerdict> {
    if spec.s() != 2 {
        return Err(Error::InvalidSpec(format!(
            "two extra columns expected, got {}",
            spec.s()
        )));
    }
    so_criterion(spec, ext)
}

pub fn so_criterion_s3(spec: &GrlSpec, ext: &QuadraticExtension) -> Result<SoVerdict> {
    if spec.s() != 3 {
        return Err(Error::InvalidSpec(format!(
            "three extra columns expected, got {}",
            spec.s()
        )));
    }
    so_criterion(spec, ext)
}

/// `sum_i w_i alpha_i^(r + q c)` over the Lagrange weights.
fn weighted_sum(
    ext: &QuadraticExtension,
    alpha: &[Elem],
    w: &[Elem],
    r: i64,
    c: i64,
) -> Result<Elem> {
    if r < 0 || c < 0 {
        return Err(Error::OutOfRange("exponent below zero".into()));
    }
    let f = ext.ext();
    let e = r as u64 + ext.q() as u64 * c as u64;
    Ok(f.sum(alpha.iter().zip(w).map(|(&a, &wi)| f.mul(wi, f.pow(a, e)))))
}

/// `(mu1, mu2, mu3)`: Lagrange-weighted sums at exponents `(k-2)(1+q)`,
/// `k-2+q(k-1)` and `(k-1)(1+q)`. If `N(v_i) = lambda w_i`, then
/// `-lambda [[mu1, mu2], [conj mu2, mu3]]` is the target for `A conj(A)^T`
/// when `s = 2`.
pub fn corollary_mu_values(
    ext: &QuadraticExtension,
    alpha: &[Elem],
    k: usize,
) -> Result<[Elem; 3]> {
    let w = lagrange_weights(ext.ext(), alpha)?;
    let k = k as i64;
    Ok([
        weighted_sum(ext, alpha, &w, k - 2, k - 2)?,
        weighted_sum(ext, alpha, &w, k - 2, k - 1)?,
        weighted_sum(ext, alpha, &w, k - 1, k - 1)?,
    ])
}

/// `mu[j][l] = sum w_i alpha_i^((k-3+j) + q(k-3+l))`, the `s = 3` analogue.
pub fn corollary_mu_matrix(
    ext: &QuadraticExtension,
    alpha: &[Elem],
    k: usize,
) -> Result<[[Elem; 3]; 3]> {
    let w = lagrange_weights(ext.ext(), alpha)?;
    let k = k as i64;
    let mut out = [[0; 3]; 3];
    for (j, row) in out.iter_mut().enumerate() {
        for (l, x) in row.iter_mut().enumerate() {
            *x = weighted_sum(ext, alpha, &w, k - 3 + j as i64, k - 3 + l as i64)?;
        }
    }
    Ok(out)
}

/// Parity-check matrix of an `s = 3` code: `(N-k) x N` with `N = n+3`. The
/// left block has rows `u_i alpha_i^r` with `u_i = w_i / v_i`; the bottom
/// right `3 x 3` block is `-T (A^{-1})^T` where
/// `T = [[0,0,1],[0,1,g1],[1,g1,g2]]`, `g1 = sum alpha`, `g2 = sigma1^2 - sigma2`.
pub fn grl_parity_check_s3(spec: &GrlSpec) -> Result<Matrix> {
    if spec.s() != 3 {
        return Err(Error::InvalidSpec(format!(
            "three extra columns expected, got {}",
            spec.s()
        )));
    }
    let f = &spec.field;
    let (n, k) = (spec.n(), spec.k);
    let rows = n + 3 - k;
    let w = lagrange_weights(f, &spec.alpha)?;
    let u: Vec<Elem> = w
        .iter()
        .zip(&spec.v)
        .map(|(&wi, &vi)| f.div(wi, vi))
        .collect::<Result<_>>()?;
    let mut h = build_grs_generator(f, &spec.alpha, &u, rows)?.hstack(&Matrix::zeros(
        f.clone(),
        rows,
        3,
    ))?;
    let pair = SymmetricPair::of(f, spec.alpha.iter().copied());
    let g1 = f.neg(pair.sigma1);
    let g2 = f.sub(f.mul(pair.sigma1, pair.sigma1), pair.sigma2);
    let t = Matrix::from_rows(f.clone(), &[vec![0, 0, 1], vec![0, 1, g1], vec![1, g1, g2]])?;
    let block = t.mul(&spec.a.inverse()?.transpose())?.neg();
    for i in 0..3 {
        for j in 0..3 {
            h.set(rows - 3 + i, n + j, block.get(i, j));
        }
    }
    Ok(h)
}
