//! Published worked examples as fixtures, with the parameters each one is
//! claimed to have. Elements are field indices in the default fields except
//! for the length-62 example, whose GF(81) is generated by a root of
//! `x^4 + x + 2`; that is the minimal polynomial of `alpha + omega` when
//! `alpha^2 = -1` and `omega^2 = alpha + 1`.

use std::sync::Arc;

use serde::Serialize;

use crate::code::{
    classify, exact_distance_affordable, Classification, Distance, Label, SearchOptions,
};
use crate::error::Result;
use crate::field::{Elem, Field, QuadraticExtension};
use crate::grl::{nmds_criterion_s2, nmds_criterion_s3, GrlSpec};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub q: u32,
    /// `None` when the example makes no claim.
    pub hermitian_so: Option<bool>,
    pub nmds: bool,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub id: u8,
    pub spec: GrlSpec,
    /// Present when the example lives in GF(q^2).
    pub ext: Option<Arc<QuadraticExtension>>,
    pub expected: Expected,
}

pub const EXAMPLE_IDS: [u8; 6] = [1, 2, 3, 4, 5, 6];

/// GF(81) with modulus `x^4 + x + 2`, over the default GF(9).
pub fn tower_gf81() -> Result<Arc<QuadraticExtension>> {
    let ext = Field::with_modulus(3, &[2, 1, 0, 0, 1])?;
    QuadraticExtension::new(Field::new(3, 2)?, ext)
}

/// The primitive element `g` of [`tower_gf81`]; it is the class of `x`.
pub const TOWER_GENERATOR: Elem = 3;

fn mat(f: &Arc<Field>, rows: &[&[Elem]]) -> Result<Matrix> {
    Matrix::from_rows(
        f.clone(),
        &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    )
}

pub fn example(id: u8) -> Result<Example> {
    let gf9 = || QuadraticExtension::for_q(3);
    let gf25 = || QuadraticExtension::for_q(5);
    let alpha5 = vec![3, 6, 1, 5, 8];
    let (spec, ext, expected) = match id {
        1 => {
            let f = Field::new(3, 2)?;
            let spec = GrlSpec::new(
                f.clone(),
                alpha5,
                vec![1; 5],
                mat(&f, &[&[1, 1], &[3, 2]])?,
                2,
            )?;
            (
                spec,
                None,
                Expected {
                    n: 7,
                    k: 2,
                    d: 5,
                    q: 9,
                    hermitian_so: None,
                    nmds: true,
                },
            )
        }
        2 => {
            let ext = gf9()?;
            let f = ext.ext().clone();
            let spec = GrlSpec::new(
                f.clone(),
                alpha5,
                vec![1, 1, 4, 1, 1],
                mat(&f, &[&[0, 3], &[4, 6]])?,
                3,
            )?;
            (
                spec,
                Some(ext),
                Expected {
                    n: 7,
                    k: 3,
                    d: 4,
                    q: 9,
                    hermitian_so: Some(true),
                    nmds: true,
                },
            )
        }
        3 => {
            let ext = gf9()?;
            let f = ext.ext().clone();
            let a = mat(&f, &[&[5, 4, 1], &[8, 7, 5], &[6, 0, 1]])?;
            let spec = GrlSpec::new(f.clone(), vec![3, 7, 2], vec![1, 4, 3], a, 3)?;
            (
                spec,
                Some(ext),
                Expected {
                    n: 6,
                    k: 3,
                    d: 3,
                    q: 9,
                    hermitian_so: Some(true),
                    nmds: true,
                },
            )
        }
        4 => {
            let ext = gf25()?;
            let f = ext.ext().clone();
            let alpha = vec![
                1, 7, 22, 8, 23, 4, 5, 13, 12, 18, 17, 20, 10, 21, 24, 6, 9, 15,
            ];
            let v = [vec![10; 6], vec![11; 6], vec![10; 6]].concat();
            let spec = GrlSpec::new(f.clone(), alpha, v, mat(&f, &[&[1, 9], &[6, 1]])?, 4)?;
            (
                spec,
                Some(ext),
                Expected {
                    n: 20,
                    k: 4,
                    d: 16,
                    q: 25,
                    hermitian_so: Some(true),
                    nmds: true,
                },
            )
        }
        5 => {
            let ext = gf25()?;
            let f = ext.ext().clone();
            let alpha = vec![1, 2, 3, 4, 5, 10, 15, 20];
            let v = vec![1, 5, 6, 2, 1, 5, 6, 2];
            let spec = GrlSpec::new(f.clone(), alpha, v, mat(&f, &[&[5, 21], &[5, 6]])?, 3)?;
            (
                spec,
                Some(ext),
                Expected {
                    n: 10,
                    k: 3,
                    d: 7,
                    q: 25,
                    hermitian_so: Some(true),
                    nmds: true,
                },
            )
        }
        6 => {
            let ext = tower_gf81()?;
            let f = ext.ext().clone();
            let g = |e: u64| f.pow(TOWER_GENERATOR, e);
            let xi = g(8);
            let weights = [g(4), g(2), g(7), g(2), g(3), g(3)];
            let mut alpha = Vec::with_capacity(60);
            let mut v = Vec::with_capacity(60);
            for (j, &u) in weights.iter().enumerate() {
                for i in 0..10 {
                    alpha.push(f.mul(g(j as u64), f.pow(xi, i)));
                    v.push(u);
                }
            }
            let a = mat(&f, &[&[g(5), g(30)], &[g(31), g(6)]])?;
            let spec = GrlSpec::new(f.clone(), alpha, v, a, 6)?;
            (
                spec,
                Some(ext),
                Expected {
                    n: 62,
                    k: 6,
                    d: 56,
                    q: 81,
                    hermitian_so: Some(true),
                    nmds: true,
                },
            )
        }
        _ => return Err(crate::Error::OutOfRange(format!("no example {id}"))),
    };
    Ok(Example {
        id,
        spec,
        ext,
        expected,
    })
}

pub fn examples() -> Result<Vec<Example>> {
    EXAMPLE_IDS.iter().map(|&id| example(id)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleReport {
    pub id: u8,
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub d: Distance,
    pub d_dual: Distance,
    pub label: Label,
    pub hermitian_so: Option<bool>,
    /// Verdict of the `s = 2` or `s = 3` criterion.
    pub criterion_nmds: bool,
    pub expected: Expected,
    pub pass: bool,
}

impl ExampleReport {
    pub fn summary(&self) -> String {
        let mut s = format!("[{},{},{}]_{}", self.n, self.k, self.d, self.q);
        if let Some(h) = self.hermitian_so {
            s.push_str(&format!(" hermitian_so={h}"));
        }
        s.push_str(&format!(" nmds={}", self.label == Label::Nmds));
        s
    }
}

/// Check an example against its claims. Each distance is computed exactly
/// when a search is sure to fit the budget; otherwise a positive criterion
/// verdict certifies `d = n - k` and `d_dual = k`.
pub fn verify_example(ex: &Example, opts: SearchOptions) -> Result<ExampleReport> {
    let spec = &ex.spec;
    let code = spec.code();
    let (n, k) = (spec.length(), spec.k());
    let criterion_nmds = match spec.s() {
        2 => nmds_criterion_s2(spec)?.nmds,
        _ => nmds_criterion_s3(spec, opts.exec)?.nmds,
    };
    let dual = code.dual();
    let (d, d_dual) = if criterion_nmds
        && !(exact_distance_affordable(&code, opts) && exact_distance_affordable(&dual, opts))
    {
        (Distance::certified(n - k), Distance::certified(k))
    } else {
        let c = classify(&code, opts)?;
        (Distance::exact(c.d), Distance::exact(c.d_dual))
    };
    let label = Classification::from_distances(n, k, d, d_dual)?.label;
    let hermitian_so = match &ex.ext {
        Some(ext) if ex.expected.hermitian_so.is_some() => {
            Some(code.is_hermitian_self_orthogonal(ext)?)
        }
        _ => None,
    };
    let e = ex.expected;
    let pass = n == e.n
        && k == e.k
        && d.value == e.d
        && hermitian_so == e.hermitian_so
        && (label == Label::Nmds) == e.nmds
        && criterion_nmds == e.nmds;
    Ok(ExampleReport {
        id: ex.id,
        n,
        k,
        q: spec.field().order(),
        d,
        d_dual,
        label,
        hermitian_so,
        criterion_nmds,
        expected: e,
        pass,
    })
}
