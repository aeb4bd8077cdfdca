//! Four deterministic constructions of Hermitian self-orthogonal GRL codes
//! over GF(q^2). Families 1 and 2 (`s = 2`) are NMDS; families 3 and 4
//! (`s = 3`) come with the distance bound `d >= n - k + 2`.
//!
//! Evaluation sets are unions of cosets: of the norm-one subgroup (families
//! 1 and 3) or of GF(q)* (families 2 and 4). Column multipliers are chosen
//! through their norms so that the weighted power sums vanish where the
//! self-orthogonality criterion needs them to, and the extra block is then
//! solved to match the remaining sums. Every free choice resolves to the
//! smallest field index.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, QuadraticExtension};
use crate::grl::{subset_sum_witness, GrlSpec, SymmetricPair};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: u8,
    pub q: u32,
    pub m: u32,
    pub k: u32,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family {} (q={}, m={}, k={})",
            self.family, self.q, self.m, self.k
        )
    }
}

impl FamilyParams {
    pub fn new(family: u8, q: u32, m: u32, k: u32) -> Self {
        Self { family, q, m, k }
    }

    /// Number of extra columns.
    pub fn s(&self) -> u32 {
        if self.family <= 2 {
            2
        } else {
            3
        }
    }

    /// Number of evaluation points.
    pub fn n(&self) -> u32 {
        match self.family {
            1 | 3 => self.m * (self.q + 1),
            _ => self.m * (self.q - 1),
        }
    }

    pub fn length(&self) -> u32 {
        self.n() + self.s()
    }

    pub fn validate(&self) -> Result<()> {
        let Self { family, q, m, k } = *self;
        if crate::field::prime_power(q).is_none() {
            return Err(Error::OutOfRange(format!("q = {q} is not a prime power")));
        }
        let half = q.div_ceil(2);
        let ok = match family {
            1 => q >= 4 && (2..=q.saturating_sub(2)).contains(&m) && (3..=m + 1).contains(&k),
            2 => q >= 5 && (2..=q + 1).contains(&m) && (3..=half).contains(&k),
            3 => q >= 5 && (2..=q.saturating_sub(3)).contains(&m) && (4..=m + 2).contains(&k),
            4 => q >= 5 && (2..=q + 1).contains(&m) && (4..=half).contains(&k),
            _ => return Err(Error::OutOfRange(format!("unknown family {family}"))),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "{self} is outside the construction's range"
            )))
        }
    }

    /// Every valid parameter triple for `family` over GF(q^2).
    pub fn all(family: u8, q: u32) -> Vec<FamilyParams> {
        let mut out = Vec::new();
        for m in 2..=q + 1 {
            for k in 3..=q + 3 {
                let p = FamilyParams::new(family, q, m, k);
                if p.validate().is_ok() {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Every intermediate scalar of a construction, as indices into GF(q^2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ConstructionTrace {
    NormCosetsS2(NormCosetsS2Trace),
    UnitCosetsS2(UnitCosetsS2Trace),
    NormCosetsS3(NormCosetsS3Trace),
    UnitCosetsS3(UnitCosetsS3Trace),
}

/// Family 1: cosets `beta_j U` with `N(beta_j) = c_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormCosetsS2Trace {
    pub coset_norms: Vec<Elem>,
    /// `D_j = prod_{l != j} (c_j - c_l)`.
    pub norm_differences: Vec<Elem>,
    pub norm_sum: Elem,
    pub coset_leaders: Vec<Elem>,
    /// Generator of the norm-one subgroup.
    pub unity_root: Elem,
    /// `beta_j (1 + xi + ... + xi^(k-2))` for each coset.
    pub partial_orbit_sums: Vec<Elem>,
    /// 0-based coset whose partial orbit sum is used.
    pub chosen_coset: usize,
    pub theta: Elem,
    pub rho: Elem,
    pub norm_of_corner: Elem,
    pub a: Elem,
    pub d: Elem,
    pub block: Vec<Vec<Elem>>,
    pub block_gram: Vec<Vec<Elem>>,
}

/// Family 2: cosets `omega_j GF(q)*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitCosetsS2Trace {
    pub representatives: Vec<Elem>,
    pub coset_weights: Vec<Elem>,
    pub mu: Elem,
    pub norm_exponent: u32,
    /// 0-based coset with nonzero trace form.
    pub chosen_coset: usize,
    pub theta: Elem,
    pub tau: Elem,
    pub rho: Elem,
    pub a: Elem,
    pub d: Elem,
    pub block: Vec<Vec<Elem>>,
    pub block_gram: Vec<Vec<Elem>>,
}

/// Family 3: full norm fibres over `C_m`, diagonal block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormCosetsS3Trace {
    /// The complement `GF(q)* \ C_m` found by the symmetric-function search.
    pub complement: Vec<Elem>,
    pub coset_norms: Vec<Elem>,
    pub norm_differences: Vec<Elem>,
    pub norm_sum: Elem,
    /// `sum c_j^(m+1) / D_j`.
    pub lambda: Elem,
    /// `sigma1(C)^2 - sigma2(C)`, which must equal `lambda`.
    pub lambda_from_symmetric: Elem,
    pub coset_leaders: Vec<Elem>,
    pub unity_root: Elem,
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub block: Vec<Vec<Elem>>,
    pub block_gram: Vec<Vec<Elem>>,
}

/// Family 4: cosets `omega_j GF(q)*`, block pairing rows one and three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitCosetsS3Trace {
    pub representatives: Vec<Elem>,
    pub coset_weights: Vec<Elem>,
    pub mu: Elem,
    pub varpi: Elem,
    pub norm_exponent: u32,
    /// The two smallest elements of norm -1.
    pub eta: [Elem; 2],
    pub zeta: Elem,
    pub b: Elem,
    pub block: Vec<Vec<Elem>>,
    pub block_gram: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub params: FamilyParams,
    pub ext: Arc<QuadraticExtension>,
    pub spec: GrlSpec,
    pub trace: ConstructionTrace,
    /// For `s = 2`: positions of `k-1` evaluation points whose sum is the
    /// ratio the NMDS test needs.
    pub designated_subset: Option<Vec<usize>>,
}

impl Construction {
    /// `n - k + 2` over `n` evaluation points: the exact distance for the
    /// NMDS families and a lower bound otherwise.
    pub fn designed_distance(&self) -> usize {
        self.spec.n() + 2 - self.spec.k()
    }

    pub fn is_exact_distance(&self) -> bool {
        self.params.family <= 2
    }
}

/// `m` distinct units of GF(q) with nonzero sum: the first `m` units, with
/// the last swapped for the next unit if their sum vanishes.
pub fn find_nonzero_sum_subset(base: &Field, m: usize) -> Result<Vec<Elem>> {
    let q = base.order() as usize;
    if m < 2 || m + 2 > q {
        return Err(Error::OutOfRange(format!(
            "need 2 <= m <= q-2, got m = {m}, q = {q}"
        )));
    }
    let mut c: Vec<Elem> = (1..=m as Elem).collect();
    if base.sum(c.iter().copied()) == 0 {
        c[m - 1] = m as Elem + 1;
    }
    debug_assert_ne!(base.sum(c.iter().copied()), 0);
    Ok(c)
}

/// `m` distinct units with `sigma1 = -sum c != 0` and
/// `sigma2 = sum_{i<j} c_i c_j != 0`. Starts from `{g, g^2}` for the
/// smallest primitive `g` and adds the smallest unit keeping both nonzero;
/// adding `x` changes them to `sigma1 - x` and `sigma2 - x sigma1`.
pub fn find_sigma12_subset(base: &Field, m: usize) -> Result<Vec<Elem>> {
    let q = base.order() as usize;
    if q < 5 || m < 2 || m + 3 > q {
        return Err(Error::OutOfRange(format!(
            "need q >= 5 and 2 <= m <= q-3, got m = {m}, q = {q}"
        )));
    }
    let g = base.generator();
    let mut set = vec![g, base.mul(g, g)];
    let mut pair = SymmetricPair::of(base, set.iter().copied());
    while set.len() < m {
        let x = (1..q as Elem)
            .filter(|x| !set.contains(x))
            .find(|&x| {
                base.sub(pair.sigma1, x) != 0
                    && base.sub(pair.sigma2, base.mul(x, pair.sigma1)) != 0
            })
            .ok_or_else(|| {
                Error::SearchFailed(format!("no extension of a {}-subset in GF({q})", set.len()))
            })?;
        pair = SymmetricPair {
            sigma1: base.sub(pair.sigma1, x),
            sigma2: base.sub(pair.sigma2, base.mul(x, pair.sigma1)),
        };
        set.push(x);
    }
    let check = SymmetricPair::of(base, set.iter().copied());
    if check != pair || check.sigma1 == 0 || check.sigma2 == 0 {
        return Err(Error::SearchFailed(format!(
            "symmetric functions vanish on {set:?}"
        )));
    }
    Ok(set)
}

pub fn construct(params: FamilyParams) -> Result<Construction> {
    params.validate()?;
    let ext = QuadraticExtension::for_q(params.q)?;
    construct_in(ext, params.family, params.m as usize, params.k as usize)
}

/// Build a family member inside a given quadratic extension, e.g. one whose
/// modulus was fixed to reproduce a published example.
pub fn construct_in(
    ext: Arc<QuadraticExtension>,
    family: u8,
    m: usize,
    k: usize,
) -> Result<Construction> {
    let params = FamilyParams::new(family, ext.q(), m as u32, k as u32);
    params.validate()?;
    match family {
        1 => family1(ext, params),
        2 => family2(ext, params),
        3 => family3(ext, params),
        _ => family4(ext, params),
    }
}

pub fn construct_family1(q: u32, m: u32, k: u32) -> Result<Construction> {
    construct(FamilyParams::new(1, q, m, k))
}

pub fn construct_family2(q: u32, m: u32, k: u32) -> Result<Construction> {
    construct(FamilyParams::new(2, q, m, k))
}

pub fn construct_family3(q: u32, m: u32, k: u32) -> Result<Construction> {
    construct(FamilyParams::new(3, q, m, k))
}

pub fn construct_family4(q: u32, m: u32, k: u32) -> Result<Construction> {
    construct(FamilyParams::new(4, q, m, k))
}

/// Norm preimage of a base-field value given as an extension index.
fn root(ext: &QuadraticExtension, c: Elem) -> Result<Elem> {
    ext.solve_norm(c)
}

fn embed_all(ext: &QuadraticExtension, xs: &[Elem]) -> Vec<Elem> {
    xs.iter().map(|&x| ext.embed(x)).collect()
}

/// `D_j = prod_{l != j} (c_j - c_l)`.
fn differences(f: &Field, c: &[Elem]) -> Vec<Elem> {
    c.iter()
        .enumerate()
        .map(|(j, &cj)| {
            f.product(
                c.iter()
                    .enumerate()
                    .filter(|&(l, _)| l != j)
                    .map(|(_, &cl)| f.sub(cj, cl)),
            )
        })
        .collect()
}

fn block_and_gram(
    ext: &QuadraticExtension,
    rows: &[Vec<Elem>],
) -> Result<(Matrix, Vec<Vec<Elem>>)> {
    let a = Matrix::from_rows(ext.ext().clone(), rows)?;
    let gram = a.mul(&a.conj_transpose(ext)?)?;
    Ok((a, gram.to_rows()))
}

/// Norm-one cosets `beta_j U` in generator-power order, with `N(v)` fixed per coset.
fn norm_coset_points(
    ext: &QuadraticExtension,
    leaders: &[Elem],
    unity: &[Elem],
    v_norms: &[Elem],
) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let f = ext.ext();
    let mut alpha = Vec::with_capacity(leaders.len() * unity.len());
    let mut v = Vec::with_capacity(alpha.capacity());
    for (&beta, &nv) in leaders.iter().zip(v_norms) {
        let vj = root(ext, nv)?;
        for &u in unity {
            alpha.push(f.mul(beta, u));
            v.push(vj);
        }
    }
    Ok((alpha, v))
}

fn family1(ext: Arc<QuadraticExtension>, params: FamilyParams) -> Result<Construction> {
    let (m, k) = (params.m as usize, params.k as usize);
    let f = ext.ext().clone();
    let q = ext.q() as usize;
    let c = embed_all(&ext, &find_nonzero_sum_subset(ext.base(), m)?);
    let dj = differences(&f, &c);
    let sigma = f.sum(c.iter().copied());
    let leaders: Vec<Elem> = c.iter().map(|&cj| root(&ext, cj)).collect::<Result<_>>()?;
    let unity = ext.unity_subgroup();
    let xi = unity.generator;
    let v_norms: Vec<Elem> = c
        .iter()
        .zip(&dj)
        .map(|(&cj, &d)| f.div(f.pow(cj, (m + 1 - k) as u64), d))
        .collect::<Result<_>>()?;
    let (alpha, v) = norm_coset_points(&ext, &leaders, &unity.elements, &v_norms)?;

    // beta_j (1 + xi + ... + xi^(k-2)) is the sum of the first k-1 points of coset j.
    let geometric = f.sum((0..k - 1).map(|i| f.pow(xi, i as u64)));
    let thetas: Vec<Elem> = leaders.iter().map(|&b| f.mul(b, geometric)).collect();
    let j0 = thetas
        .iter()
        .position(|&t| f.add(sigma, ext.norm(t)) != 0)
        .ok_or_else(|| {
            Error::SearchFailed(format!(
                "{params}: sigma + N(theta_j) vanishes for every coset"
            ))
        })?;
    let theta = thetas[j0];
    let denom = f.add(sigma, ext.norm(theta));
    let rho = f.neg(f.div(sigma, denom)?);
    let corner = f.neg(f.div(f.mul(sigma, sigma), denom)?);
    let a = root(&ext, rho)?;
    let d = root(&ext, corner)?;
    let top_right = f.neg(f.mul(rho, ext.conj(f.div(theta, d)?)));
    let rows = vec![vec![a, top_right], vec![f.mul(theta, a), d]];
    let (block, block_gram) = block_and_gram(&ext, &rows)?;
    let spec = GrlSpec::new(f.clone(), alpha, v, block, k)?;
    let designated = (0..k - 1).map(|i| j0 * (q + 1) + i).collect();
    let trace = ConstructionTrace::NormCosetsS2(NormCosetsS2Trace {
        coset_norms: c,
        norm_differences: dj,
        norm_sum: sigma,
        coset_leaders: leaders,
        unity_root: xi,
        partial_orbit_sums: thetas,
        chosen_coset: j0,
        theta,
        rho,
        norm_of_corner: corner,
        a,
        d,
        block: rows,
        block_gram,
    });
    Ok(Construction {
        params,
        ext,
        spec,
        trace,
        designated_subset: Some(designated),
    })
}

/// Cosets `omega_j GF(q)*`, ordered by coset then by unit index, with
/// `N(v_{j,x}) = u_j x^e`.
fn unit_coset_points(
    ext: &QuadraticExtension,
    reps: &[Elem],
    weights: &[Elem],
    e: u64,
) -> Result<(Vec<Elem>, Vec<Elem>)> {
    let f = ext.ext();
    let units = ext.subfield_units();
    let mut alpha = Vec::with_capacity(reps.len() * units.len());
    let mut v = Vec::with_capacity(alpha.capacity());
    for (&w, &u) in reps.iter().zip(weights) {
        for &x in units {
            alpha.push(f.mul(w, x));
            v.push(root(ext, f.mul(u, f.pow(x, e)))?);
        }
    }
    Ok((alpha, v))
}

fn weighted_power(f: &Field, reps: &[Elem], weights: &[Elem], e: u64) -> Elem {
    f.sum(
        reps.iter()
            .zip(weights)
            .map(|(&w, &u)| f.mul(u, f.pow(w, e))),
    )
}

fn family2(ext: Arc<QuadraticExtension>, params: FamilyParams) -> Result<Construction> {
    let (m, k) = (params.m as usize, params.k as usize);
    let f = ext.ext().clone();
    let q = ext.q() as u64;
    let e = q + 2 - 2 * k as u64;
    // Every exponent r + s + e met by the vanishing condition lies in [1, q-2].
    assert!(
        e >= 1 && (k as u64 - 3) + (k as u64 - 1) + e <= q - 2,
        "{params}: exponent range"
    );
    let reps: Vec<Elem> = ext.coset_representatives()[..m].to_vec();
    let mu_exp = (k as u64 - 2) + q * (k as u64 - 1);
    let units = ext.subfield_units().to_vec();
    let mut weights = vec![1 as Elem; m];
    let mut mu = weighted_power(&f, &reps, &weights, mu_exp);
    for &u1 in &units {
        weights[0] = u1;
        mu = weighted_power(&f, &reps, &weights, mu_exp);
        if mu != 0 {
            break;
        }
    }
    if mu == 0 {
        return Err(Error::SearchFailed(format!(
            "{params}: no coset weights with mu != 0"
        )));
    }
    let (alpha, v) = unit_coset_points(&ext, &reps, &weights, e)?;

    let trace_form = |y: Elem| {
        let t = f.mul(mu, y);
        f.add(t, ext.conj(t))
    };
    let j0 = reps
        .iter()
        .position(|&w| trace_form(w) != 0)
        .ok_or_else(|| {
            Error::SearchFailed(format!(
                "{params}: trace form vanishes on every representative"
            ))
        })?;
    let theta = reps[j0];
    let tau = trace_form(theta);
    let rho = f.div(ext.norm(mu), tau)?;
    let a = root(&ext, rho)?;
    let d = root(&ext, f.neg(f.mul(rho, ext.norm(theta))))?;
    let top_right = f.div(f.sub(mu, f.mul(rho, ext.conj(theta))), ext.conj(d))?;
    let rows = vec![vec![a, top_right], vec![f.mul(theta, a), d]];
    let (block, block_gram) = block_and_gram(&ext, &rows)?;
    let spec = GrlSpec::new(f.clone(), alpha, v, block, k)?;

    // theta * (x_1 + ... + x_{k-1}) with units summing to 1.
    let one_subset =
        subset_sum_witness(ext.base(), &(1..ext.q()).collect::<Vec<_>>(), k - 1, 1)?
            .ok_or_else(|| Error::SearchFailed(format!("{params}: no {} units sum to 1", k - 1)))?;
    let base_units = ext.q() as usize - 1;
    let designated = one_subset.iter().map(|&i| j0 * base_units + i).collect();
    let trace = ConstructionTrace::UnitCosetsS2(UnitCosetsS2Trace {
        representatives: reps,
        coset_weights: weights,
        mu,
        norm_exponent: e as u32,
        chosen_coset: j0,
        theta,
        tau,
        rho,
        a,
        d,
        block: rows,
        block_gram,
    });
    Ok(Construction {
        params,
        ext,
        spec,
        trace,
        designated_subset: Some(designated),
    })
}

fn family3(ext: Arc<QuadraticExtension>, params: FamilyParams) -> Result<Construction> {
    let (m, k) = (params.m as usize, params.k as usize);
    let f = ext.ext().clone();
    let base = ext.base();
    let q = ext.q() as usize;
    let complement = find_sigma12_subset(base, q - 1 - m)?;
    let c_base: Vec<Elem> = (1..q as Elem).filter(|x| !complement.contains(x)).collect();
    let c = embed_all(&ext, &c_base);
    let dj = differences(&f, &c);
    let sigma = f.sum(c.iter().copied());
    let lambda = f.sum(
        c.iter()
            .zip(&dj)
            .map(|(&cj, &d)| f.mul(f.pow(cj, m as u64 + 1), f.inv(d).expect("distinct"))),
    );
    let pair = SymmetricPair::of(&f, c.iter().copied());
    let lambda_sym = f.sub(f.mul(pair.sigma1, pair.sigma1), pair.sigma2);
    if sigma == 0 || lambda == 0 || lambda != lambda_sym {
        return Err(Error::SearchFailed(format!(
            "{params}: sum {sigma}, lambda {lambda} / {lambda_sym}"
        )));
    }
    let leaders: Vec<Elem> = c.iter().map(|&cj| root(&ext, cj)).collect::<Result<_>>()?;
    let unity = ext.unity_subgroup();
    let v_norms: Vec<Elem> = c
        .iter()
        .zip(&dj)
        .map(|(&cj, &d)| f.div(f.pow(cj, (m + 2 - k) as u64), d))
        .collect::<Result<_>>()?;
    let (alpha, v) = norm_coset_points(&ext, &leaders, &unity.elements, &v_norms)?;
    let a = root(&ext, f.neg(1))?;
    let b = root(&ext, f.neg(sigma))?;
    let cc = root(&ext, f.neg(lambda))?;
    let rows = vec![vec![a, 0, 0], vec![0, b, 0], vec![0, 0, cc]];
    let (block, block_gram) = block_and_gram(&ext, &rows)?;
    let spec = GrlSpec::new(f.clone(), alpha, v, block, k)?;
    let trace = ConstructionTrace::NormCosetsS3(NormCosetsS3Trace {
        complement: embed_all(&ext, &complement),
        coset_norms: c,
        norm_differences: dj,
        norm_sum: sigma,
        lambda,
        lambda_from_symmetric: lambda_sym,
        coset_leaders: leaders,
        unity_root: unity.generator,
        a,
        b,
        c: cc,
        block: rows,
        block_gram,
    });
    Ok(Construction {
        params,
        ext,
        spec,
        trace,
        designated_subset: None,
    })
}

fn family4(ext: Arc<QuadraticExtension>, params: FamilyParams) -> Result<Construction> {
    let (m, k) = (params.m as usize, params.k as usize);
    let f = ext.ext().clone();
    let q = ext.q() as u64;
    let e = q + 3 - 2 * k as u64;
    assert!(
        e >= 1 && (k as u64 - 4) + (k as u64 - 1) + e <= q - 2,
        "{params}: exponent range"
    );
    let reps: Vec<Elem> = ext.coset_representatives()[..m].to_vec();
    let mu_exp = (k as u64 - 3) + q * (k as u64 - 1);
    let varpi_exp = (k as u64 - 2) * (q + 1);
    let units = ext.subfield_units().to_vec();
    let mut found = None;
    'search: for &u1 in &units {
        for &u2 in &units {
            let mut w = vec![1 as Elem; m];
            w[0] = u1;
            w[1] = u2;
            let mu = weighted_power(&f, &reps, &w, mu_exp);
            let varpi = weighted_power(&f, &reps, &w, varpi_exp);
            if mu != 0 && varpi != 0 {
                found = Some((w, mu, varpi));
                break 'search;
            }
        }
    }
    let (weights, mu, varpi) = found.ok_or_else(|| {
        Error::SearchFailed(format!("{params}: no coset weights with mu, varpi != 0"))
    })?;
    let (alpha, v) = unit_coset_points(&ext, &reps, &weights, e)?;

    // Rows one and three span a hyperbolic pair: (1, eta) and zeta (1, eta')
    // are isotropic because N(eta) = N(eta') = -1, and their product is mu.
    let minus_one = f.neg(1);
    let mut isotropic = (1..f.order()).filter(|&x| ext.norm(x) == minus_one);
    let (eta, eta2) = (
        isotropic.next().expect("norm is onto"),
        isotropic.next().expect("q+1 >= 2 preimages"),
    );
    let cross = f.add(1, f.mul(eta, ext.conj(eta2)));
    let zeta = ext.conj(f.div(mu, cross)?);
    let b = root(&ext, varpi)?;
    let rows = vec![
        vec![1, 0, eta],
        vec![0, b, 0],
        vec![zeta, 0, f.mul(zeta, eta2)],
    ];
    let (block, block_gram) = block_and_gram(&ext, &rows)?;
    let spec = GrlSpec::new(f.clone(), alpha, v, block, k)?;
    let trace = ConstructionTrace::UnitCosetsS3(UnitCosetsS3Trace {
        representatives: reps,
        coset_weights: weights,
        mu,
        varpi,
        norm_exponent: e as u32,
        eta: [eta, eta2],
        zeta,
        b,
        block: rows,
        block_gram,
    });
    Ok(Construction {
        params,
        ext,
        spec,
        trace,
        designated_subset: None,
    })
}
