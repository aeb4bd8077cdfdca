//! Linear codes: duals, exact minimum distance, Singleton defects and the
//! MDS / AMDS / NMDS classification.
//!
//! Distances come from one of two exact routes. Message enumeration walks
//! one representative per projective point of the message space (weights
//! are scale invariant), so it touches `(q^k - 1)/(q - 1)` codewords. Column
//! dependency finds the smallest set of linearly dependent columns of a
//! parity-check matrix, which equals the distance of the code it checks.
//! `classify` picks whichever route is cheaper for each side.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, for_each_in_range};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, QuadraticExtension};
use crate::linalg::Matrix;
use crate::par::{self, Exec};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

const WORD_CHUNK: u64 = 1 << 13;
const SUBSET_CHUNK: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Upper bound on codewords (or column subsets) a single search may visit.
    pub budget: u128,
    pub exec: Exec,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }
}

impl SearchOptions {
    pub fn with_exec(self, exec: Exec) -> Self {
        Self { exec, ..self }
    }

    pub fn with_budget(self, budget: u128) -> Self {
        Self { budget, ..self }
    }
}

/// How a distance value is known, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Computed by exhaustive search.
    Exact,
    /// Implied by a criterion that was checked (e.g. NMDS forces `d_dual = k`).
    Certified,
    /// Only a lower bound is known.
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    pub value: usize,
    pub evidence: Evidence,
}

impl Distance {
    pub fn exact(value: usize) -> Self {
        Self {
            value,
            evidence: Evidence::Exact,
        }
    }

    pub fn certified(value: usize) -> Self {
        Self {
            value,
            evidence: Evidence::Certified,
        }
    }

    pub fn at_least(value: usize) -> Self {
        Self {
            value,
            evidence: Evidence::LowerBound,
        }
    }

    pub fn is_known(&self) -> bool {
        self.evidence != Evidence::LowerBound
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.evidence {
            Evidence::LowerBound => write!(f, ">={}", self.value),
            _ => write!(f, "{}", self.value),
        }
    }
}

/// A linear code given by a full-row-rank generator matrix. The zero code
/// (no rows) is allowed; its distance is taken to be `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    gen: Matrix,
}

impl LinearCode {
    pub fn new(gen: Matrix) -> Result<Self> {
        let r = gen.rank();
        if r != gen.rows() {
            return Err(Error::Shape(format!(
                "generator has {} rows but rank {r}",
                gen.rows()
            )));
        }
        if gen.cols() == 0 {
            return Err(Error::Shape("code of length zero".into()));
        }
        Ok(Self { gen })
    }

    /// The code spanned by the rows of `m`, which need not be independent.
    pub fn spanned_by(m: &Matrix) -> Self {
        let e = m.rref();
        let rows: Vec<usize> = (0..e.pivots.len()).collect();
        Self {
            gen: e.matrix.select_rows(&rows),
        }
    }

    pub fn gen(&self) -> &Matrix {
        &self.gen
    }

    pub fn field(&self) -> &Arc<Field> {
        self.gen.field()
    }

    pub fn n(&self) -> usize {
        self.gen.cols()
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    /// Euclidean dual, generated by a kernel basis of the generator.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            gen: self.gen.right_kernel(),
        }
    }

    /// Hermitian dual: the entrywise conjugate of the Euclidean dual.
    pub fn hermitian_dual(&self, ext: &QuadraticExtension) -> Result<LinearCode> {
        Ok(LinearCode {
            gen: self.dual().gen.conj(ext)?,
        })
    }

    pub fn contains(&self, word: &[Elem]) -> Result<bool> {
        if word.len() != self.n() {
            return Err(Error::Shape(format!(
                "word of length {} for a code of length {}",
                word.len(),
                self.n()
            )));
        }
        let w = Matrix::new(self.field().clone(), 1, word.len(), word.to_vec())?;
        Ok(self.gen.vstack(&w)?.rank() == self.k())
    }

    /// Whether every row of `self` lies in `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> Result<bool> {
        if self.n() != other.n() {
            return Ok(false);
        }
        Ok(other.gen.vstack(&self.gen)?.rank() == other.k())
    }

    /// `G * conj(G)^T`.
    pub fn hermitian_gram(&self, ext: &QuadraticExtension) -> Result<Matrix> {
        self.gen.mul(&self.gen.conj_transpose(ext)?)
    }

    pub fn is_hermitian_self_orthogonal(&self, ext: &QuadraticExtension) -> Result<bool> {
        Ok(self.hermitian_gram(ext)?.is_zero())
    }
}

/// `q^k - 1`, or `None` on overflow.
pub fn enumeration_cost(q: u32, k: usize) -> Option<u128> {
    (q as u128).checked_pow(k as u32).map(|x| x - 1)
}

/// Worst-case number of column subsets visited when looking for `t <= max_t`
/// dependent columns among `n`.
pub fn column_cost(n: usize, max_t: usize) -> u128 {
    (1..=max_t.min(n)).map(|t| binomial(n, t)).sum()
}

/// Whether [`min_distance`] is guaranteed to finish within the budget, by
/// enumeration or by a full column scan of the parity-check matrix.
pub fn exact_distance_affordable(code: &LinearCode, opts: SearchOptions) -> bool {
    let (n, k) = (code.n(), code.k());
    k == 0
        || enumeration_cost(code.field().order(), k).is_some_and(|w| w <= opts.budget)
        || column_cost(n, n - k + 1) <= opts.budget
}

/// Exact minimum distance by enumerating messages. Fails with
/// `Error::Infeasible` when `q^k - 1` exceeds the budget.
pub fn min_distance_exact(code: &LinearCode, opts: SearchOptions) -> Result<usize> {
    Ok(min_weight_where(code, opts, |_| true)?.unwrap_or(code.n() + 1))
}

/// Minimum weight over nonzero codewords accepted by `keep`, or `None` when
/// no codeword is accepted. `keep` must be invariant under nonzero scaling,
/// since only one word per projective point is visited.
pub fn min_weight_where<F>(code: &LinearCode, opts: SearchOptions, keep: F) -> Result<Option<usize>>
where
    F: Fn(&[Elem]) -> bool + Sync + Send,
{
    let q = code.field().order();
    let k = code.k();
    let needed = enumeration_cost(q, k).unwrap_or(u128::MAX);
    if needed > opts.budget {
        return Err(Error::Infeasible {
            what: format!("enumerating a {k}-dimensional code over GF({q})"),
            needed,
            budget: opts.budget,
        });
    }
    if k == 0 {
        return Ok(None);
    }
    let walker = Walker::new(code);
    let total = walker.total();
    Ok(par::min_over(opts.exec, total, WORD_CHUNK, |range| {
        let mut best: Option<usize> = None;
        walker.walk(range, |w| {
            if keep(w) {
                let wt = w.iter().filter(|&&x| x != 0).count();
                if best.is_none_or(|b| wt < b) {
                    best = Some(wt);
                }
            }
        });
        best
    }))
}

/// Walks one message per projective point: the first nonzero coordinate is
/// 1 and the remaining ones run through the field in index order.
struct Walker<'a> {
    field: &'a Field,
    gen: &'a Matrix,
    q: u64,
    k: usize,
    n: usize,
    /// `mult[(i * q + a) * n ..][..n]` is `a * row_i`, when small enough to cache.
    mult: Option<Vec<Elem>>,
}

impl<'a> Walker<'a> {
    fn new(code: &'a LinearCode) -> Self {
        let field = code.field().as_ref();
        let (q, k, n) = (field.order() as u64, code.k(), code.n());
        let mult = ((q as usize) * k * n <= 1 << 24).then(|| {
            let mut t = Vec::with_capacity(q as usize * k * n);
            for i in 0..k {
                for a in 0..q as Elem {
                    t.extend(code.gen.row(i).iter().map(|&x| field.mul(a, x)));
                }
            }
            t
        });
        Self {
            field,
            gen: &code.gen,
            q,
            k,
            n,
            mult,
        }
    }

    fn block(&self, lead: usize) -> u64 {
        self.q.pow((self.k - 1 - lead) as u32)
    }

    fn total(&self) -> u64 {
        (0..self.k).map(|l| self.block(l)).sum()
    }

    fn add_multiple(&self, dst: &mut [Elem], src: &[Elem], i: usize, a: Elem) {
        match &self.mult {
            Some(t) => {
                let off = (i * self.q as usize + a as usize) * self.n;
                for ((d, &s), &m) in dst.iter_mut().zip(src).zip(&t[off..off + self.n]) {
                    *d = self.field.add(s, m);
                }
            }
            None => {
                for ((d, &s), &g) in dst.iter_mut().zip(src).zip(self.gen.row(i)) {
                    *d = self.field.add(s, self.field.mul(a, g));
                }
            }
        }
    }

    fn walk(&self, range: Range<u64>, mut visit: impl FnMut(&[Elem])) {
        let (k, n, q) = (self.k, self.n, self.q);
        if range.is_empty() {
            return;
        }
        // Locate the starting point: leading position and the digits after it.
        let mut lead = 0;
        let mut rest = range.start;
        while rest >= self.block(lead) {
            rest -= self.block(lead);
            lead += 1;
        }
        let mut digits = vec![0 as Elem; k];
        let mut r = rest;
        for j in (lead + 1..k).rev() {
            digits[j] = (r % q) as Elem;
            r /= q;
        }
        digits[lead] = 1;
        // sums[j] holds the combination of rows 0..j.
        let mut sums = vec![0 as Elem; (k + 1) * n];
        let mut from = 0;
        for _ in range {
            for j in from..k {
                let (head, tail) = sums.split_at_mut((j + 1) * n);
                self.add_multiple(&mut tail[..n], &head[j * n..], j, digits[j]);
            }
            visit(&sums[k * n..]);
            // Advance the odometer; positions after `lead` are free.
            let mut j = k;
            loop {
                if j == lead + 1 {
                    // Free digits exhausted: move the leading 1 right.
                    digits[lead] = 0;
                    lead += 1;
                    if lead == k {
                        return;
                    }
                    digits[lead] = 1;
                    for d in &mut digits[lead + 1..] {
                        *d = 0;
                    }
                    from = 0;
                    break;
                }
                j -= 1;
                digits[j] += 1;
                if (digits[j] as u64) < q {
                    from = j;
                    break;
                }
                digits[j] = 0;
            }
        }
    }
}

/// Size of the smallest linearly dependent set of columns of `m`, looking at
/// sets of size at most `max_t`. `Ok(None)` means none was found in range.
pub fn min_dependent_columns(
    m: &Matrix,
    max_t: usize,
    opts: SearchOptions,
) -> Result<Option<usize>> {
    let n = m.cols();
    let max_t = max_t.min(n);
    let mut spent = 0u128;
    for t in 1..=max_t {
        let count = binomial(n, t);
        spent += count;
        if spent > opts.budget {
            return Err(Error::Infeasible {
                what: format!("scanning {t}-column subsets of a {}x{n} matrix", m.rows()),
                needed: spent,
                budget: opts.budget,
            });
        }
        if t > m.rows() {
            // More columns than rows are always dependent.
            return Ok(Some(t));
        }
        let found = par::find_first(opts.exec, count as u64, SUBSET_CHUNK, |range| {
            let mut buf = Vec::new();
            let mut hit = None;
            for_each_in_range(n, t, range.start as u128, range.end as u128, |s| {
                if m.column_rank(s, &mut buf) < t {
                    hit = Some(s.to_vec());
                }
                hit.is_none()
            });
            hit
        });
        if found.is_some() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// The first column subset of size `t` (in lexicographic order) whose rank
/// differs from `expected`, if any.
pub fn find_column_subset_with_rank_not(
    m: &Matrix,
    t: usize,
    expected: usize,
    opts: SearchOptions,
) -> Result<Option<Vec<usize>>> {
    let count = binomial(m.cols(), t);
    if count > opts.budget {
        return Err(Error::Infeasible {
            what: format!("scanning {t}-column subsets"),
            needed: count,
            budget: opts.budget,
        });
    }
    Ok(par::find_first(
        opts.exec,
        count as u64,
        SUBSET_CHUNK,
        |range| {
            let mut buf = Vec::new();
            let mut hit = None;
            for_each_in_range(m.cols(), t, range.start as u128, range.end as u128, |s| {
                if m.column_rank(s, &mut buf) != expected {
                    hit = Some(s.to_vec());
                }
                hit.is_none()
            });
            hit
        },
    ))
}

/// Exact minimum distance by the cheaper of enumeration and a column
/// dependency scan of the parity-check matrix.
pub fn min_distance(code: &LinearCode, opts: SearchOptions) -> Result<usize> {
    let (n, k) = (code.n(), code.k());
    if k == 0 {
        return Ok(n + 1);
    }
    let words = enumeration_cost(code.field().order(), k).unwrap_or(u128::MAX);
    let subsets = column_cost(n, n - k + 1);
    if words <= opts.budget && words <= subsets.saturating_mul(k as u128) {
        return min_distance_exact(code, opts);
    }
    let h = code.gen.right_kernel();
    if h.rows() == 0 {
        return Ok(1);
    }
    match min_dependent_columns(&h, n - k + 1, opts) {
        Ok(Some(d)) => Ok(d),
        Ok(None) => unreachable!("any n-k+1 columns of an (n-k)-row matrix are dependent"),
        Err(e) if words <= opts.budget => {
            log::debug!("column scan infeasible ({e}); enumerating instead");
            min_distance_exact(code, opts)
        }
        Err(e) => Err(e),
    }
}

/// Exact dual distance by the cheaper of a column scan of the generator and
/// enumeration of the dual.
pub fn dual_distance(code: &LinearCode, opts: SearchOptions) -> Result<usize> {
    min_distance(&code.dual(), opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Mds,
    Amds,
    Nmds,
    Other,
    /// Some distance is only bounded, so the label cannot be decided.
    Unknown,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Mds => "MDS",
            Label::Amds => "AMDS",
            Label::Nmds => "NMDS",
            Label::Other => "OTHER",
            Label::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub d_dual: usize,
    /// `n - k + 1 - d`; with a lower-bound distance this is an upper bound.
    pub s: usize,
    pub s_dual: usize,
    pub label: Label,
    pub d_evidence: Evidence,
    pub d_dual_evidence: Evidence,
}

impl Classification {
    pub fn from_distances(n: usize, k: usize, d: Distance, d_dual: Distance) -> Result<Self> {
        let s = (n + 1 - k).checked_sub(d.value).ok_or_else(|| {
            Error::InvalidSpec(format!(
                "d = {} breaks the Singleton bound for [{n},{k}]",
                d.value
            ))
        })?;
        let s_dual = (k + 1).checked_sub(d_dual.value).ok_or_else(|| {
            Error::InvalidSpec(format!(
                "d_dual = {} breaks the Singleton bound",
                d_dual.value
            ))
        })?;
        let label = if !d.is_known() {
            Label::Unknown
        } else if s == 0 {
            Label::Mds
        } else if s == 1 && !d_dual.is_known() {
            Label::Unknown
        } else if s == 1 && s_dual == 1 {
            Label::Nmds
        } else if s == 1 {
            Label::Amds
        } else {
            Label::Other
        };
        Ok(Self {
            n,
            k,
            d: d.value,
            d_dual: d_dual.value,
            s,
            s_dual,
            label,
            d_evidence: d.evidence,
            d_dual_evidence: d_dual.evidence,
        })
    }
}

/// Exact distances of the code and its dual, and the resulting label.
pub fn classify(code: &LinearCode, opts: SearchOptions) -> Result<Classification> {
    let d = min_distance(code, opts)?;
    let d_dual = dual_distance(code, opts)?;
    Classification::from_distances(
        code.n(),
        code.k(),
        Distance::exact(d),
        Distance::exact(d_dual),
    )
}

/// The JSON code report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    #[serde(flatten)]
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hermitian_self_orthogonal: Option<bool>,
}

/// Column conditions characterizing NMDS codes by their generator: any
/// `k-1` columns independent, some `k` columns dependent, and any `k+1`
/// columns of full rank `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnConditions {
    pub independent_k_minus_1: bool,
    pub dependent_k: Option<Vec<usize>>,
    pub full_rank_k_plus_1: bool,
}

impl ColumnConditions {
    pub fn holds(&self) -> bool {
        self.independent_k_minus_1 && self.dependent_k.is_some() && self.full_rank_k_plus_1
    }
}

pub fn nmds_column_conditions(gen: &Matrix, opts: SearchOptions) -> Result<ColumnConditions> {
    let k = gen.rows();
    let n = gen.cols();
    if k == 0 || n < k + 1 {
        return Err(Error::OutOfRange(format!(
            "column conditions need 1 <= k < n, got [{n},{k}]"
        )));
    }
    let independent =
        k == 1 || find_column_subset_with_rank_not(gen, k - 1, k - 1, opts)?.is_none();
    let dependent = find_column_subset_with_rank_not(gen, k, k, opts)?;
    let full = find_column_subset_with_rank_not(gen, k + 1, k, opts)?.is_none();
    Ok(ColumnConditions {
        independent_k_minus_1: independent,
        dependent_k: dependent,
        full_rank_k_plus_1: full,
    })
}
