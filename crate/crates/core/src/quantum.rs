//! Quantum codes from Hermitian self-orthogonal codes: parameters, quantum
//! Singleton defects and the comparison against tabulated known codes.
//!
//! A Hermitian self-orthogonal `[n, k]` code over GF(q^2) gives an
//! `[[n, n - 2k, d]]_q` code whose distance is the minimum weight of
//! `C^{perp h} \ C`.

use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::code::{min_weight_where, Distance, Evidence, LinearCode, SearchOptions};
use crate::error::{Error, Result};
use crate::families::FamilyParams;
use crate::field::QuadraticExtension;

/// Known-code table shipped with the crate.
pub const KNOWN_CODES_CSV: &str = include_str!("../data/known_codes.csv");
/// Published rows of the family comparison table, for regression.
pub const REFERENCE_CODES_CSV: &str = include_str!("../data/reference_codes.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub n: usize,
    /// The code has dimension `q^kq`.
    pub kq: usize,
    pub d: Distance,
    pub q: u32,
}

impl QuantumParams {
    pub fn new(n: usize, kq: usize, d: Distance, q: u32) -> Result<Self> {
        if kq > n {
            return Err(Error::OutOfRange(format!("kq = {kq} exceeds n = {n}")));
        }
        let p = Self { n, kq, d, q };
        if d.is_known() && n - kq + 2 < 2 * d.value {
            return Err(Error::InvalidSpec(format!(
                "{p} violates the quantum Singleton bound"
            )));
        }
        Ok(p)
    }

    pub fn defect(&self) -> DefectReport {
        singleton_defect_q(self)
    }
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]_{}", self.n, self.kq, self.d, self.q)
    }
}

/// `S = (n - kq)/2 + 1 - d`, stored doubled so that halves stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Defect {
    pub twice: i64,
}

impl Defect {
    pub fn of(n: usize, kq: usize, d: usize) -> Self {
        Self {
            twice: n as i64 - kq as i64 + 2 - 2 * d as i64,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad defect {s:?}"));
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        let neg = whole.starts_with('-');
        let w: i64 = whole.parse().map_err(|_| bad())?;
        let half = match frac.trim_end_matches('0') {
            "" => 0,
            "5" => 1,
            _ => return Err(bad()),
        };
        Ok(Self {
            twice: 2 * w + if neg { -half } else { half },
        })
    }
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.twice < 0 { "-" } else { "" };
        let a = self.twice.unsigned_abs();
        if a.is_multiple_of(2) {
            write!(f, "{sign}{}", a / 2)
        } else {
            write!(f, "{sign}{}.5", a / 2)
        }
    }
}

impl Serialize for Defect {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub defect: Defect,
    /// `2d >= n - kq`.
    pub qnmds: bool,
    pub mds: bool,
    /// When `d` is a lower bound the defect is an upper bound.
    pub evidence: Evidence,
}

pub fn singleton_defect_q(p: &QuantumParams) -> DefectReport {
    let defect = Defect::of(p.n, p.kq, p.d.value);
    DefectReport {
        defect,
        qnmds: 2 * p.d.value >= p.n - p.kq,
        mds: defect.twice == 0,
        evidence: p.d.evidence,
    }
}

/// Parameters of the quantum code built from a Hermitian self-orthogonal
/// `code`. `dual` is the distance of its Hermitian dual and `primal`, when
/// known, the distance of the code itself. If `dual < primal` the lightest
/// dual word lies outside the code and is the quantum distance; otherwise
/// the words of the dual outside the code are enumerated, falling back to
/// the bound `d >= dual` when that is over budget.
pub fn css_from_hermitian_so(
    code: &LinearCode,
    ext: &QuadraticExtension,
    dual: Distance,
    primal: Option<Distance>,
    opts: SearchOptions,
) -> Result<QuantumParams> {
    if !code.is_hermitian_self_orthogonal(ext)? {
        return Err(Error::InvalidSpec(
            "code is not Hermitian self-orthogonal".into(),
        ));
    }
    let (n, k, q) = (code.n(), code.k(), ext.q());
    let kq = n - 2 * k;
    if !dual.is_known() {
        return QuantumParams::new(n, kq, Distance::at_least(dual.value), q);
    }
    if primal.is_some_and(|p| p.is_known() && p.value > dual.value) {
        return QuantumParams::new(n, kq, dual, q);
    }
    if kq == 0 {
        // C equals its Hermitian dual; the usual convention takes its distance.
        return QuantumParams::new(n, kq, dual, q);
    }
    match dual_words_outside(code, ext, opts) {
        Ok(Some(d)) => QuantumParams::new(n, kq, Distance::exact(d), q),
        Ok(None) => Err(Error::InvalidSpec(
            "Hermitian dual adds no words to the code".into(),
        )),
        Err(Error::Infeasible { .. }) => {
            QuantumParams::new(n, kq, Distance::at_least(dual.value), q)
        }
        Err(e) => Err(e),
    }
}

/// Minimum weight of `C^{perp h} \ C` by enumerating the Hermitian dual and
/// discarding words with zero syndrome against `C`.
pub fn dual_words_outside(
    code: &LinearCode,
    ext: &QuadraticExtension,
    opts: SearchOptions,
) -> Result<Option<usize>> {
    let f = code.field().clone();
    let checks = code.dual().gen().to_rows();
    let hdual = code.hermitian_dual(ext)?;
    min_weight_where(&hdual, opts, |w| {
        checks
            .iter()
            .any(|h| f.sum(h.iter().zip(w).map(|(&a, &b)| f.mul(a, b))) != 0)
    })
}

/// Closed-form quantum parameters of the family member `params`: exact
/// distance `k` for the NMDS families, the bound `d >= k - 1` otherwise.
pub fn qgrl_parameters(params: FamilyParams) -> Result<QuantumParams> {
    params.validate()?;
    let n = params.length() as usize;
    let k = params.k as usize;
    let d = if params.family <= 2 {
        Distance::certified(k)
    } else {
        Distance::at_least(k - 1)
    };
    QuantumParams::new(n, n - 2 * k, d, params.q)
}

/// The family member with the given quantum length and dimension, if any.
pub fn family_params_for(family: u8, q: u32, n: usize, kq: usize) -> Result<FamilyParams> {
    let bad = || {
        Error::OutOfRange(format!(
            "no family {family} member over q = {q} gives [[{n},{kq}]]"
        ))
    };
    if kq > n || !(n - kq).is_multiple_of(2) {
        return Err(bad());
    }
    let k = (n - kq) / 2;
    let (s, per) = match family {
        1 | 3 => (if family == 1 { 2 } else { 3 }, q as usize + 1),
        2 | 4 => (if family == 2 { 2 } else { 3 }, q as usize - 1),
        _ => return Err(bad()),
    };
    if n < s || !(n - s).is_multiple_of(per) {
        return Err(bad());
    }
    let p = FamilyParams::new(family, q, ((n - s) / per) as u32, k as u32);
    p.validate().map_err(|_| bad())?;
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownCode {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub d_is_bound: bool,
    pub q: u32,
    pub source: String,
}

impl KnownCode {
    pub fn params(&self) -> QuantumParams {
        let d = if self.d_is_bound {
            Distance::at_least(self.d)
        } else {
            Distance::exact(self.d)
        };
        QuantumParams {
            n: self.n,
            kq: self.k,
            d,
            q: self.q,
        }
    }
}

fn csv_reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(r)
}

/// Parse a known-codes table (`n,k,d,d_is_bound,q,source`). Malformed rows
/// are skipped and reported in the second return value.
pub fn read_known_codes<R: Read>(r: R) -> Result<(Vec<KnownCode>, Vec<String>)> {
    let mut rdr = csv_reader(r);
    let mut codes = Vec::new();
    let mut warnings = Vec::new();
    for (i, rec) in rdr.deserialize::<KnownCode>().enumerate() {
        match rec {
            Ok(c) if c.k <= c.n => codes.push(c),
            Ok(c) => warnings.push(format!("row {}: k = {} exceeds n = {}", i + 1, c.k, c.n)),
            Err(e) => warnings.push(format!("row {}: {e}", i + 1)),
        }
    }
    for w in &warnings {
        log::warn!("known codes: {w}");
    }
    Ok((codes, warnings))
}

/// The tabulated code a new code is measured against. Only codes it
/// dominates (`n' >= n`, `k' <= k`, `d' <= d`, same `q`) qualify, and they
/// must share two of the three parameters: the same length and dimension
/// first (largest `d'`), then the same length and distance (largest `k'`),
/// then the same dimension and distance (smallest `n'`).
pub fn select_competitor<'a>(
    ours: &QuantumParams,
    known: &'a [KnownCode],
) -> Option<&'a KnownCode> {
    let d = ours.d.value;
    let dominated = || {
        known
            .iter()
            .filter(|c| c.q == ours.q && c.n >= ours.n && c.k <= ours.kq && c.d <= d)
    };
    dominated()
        .filter(|c| c.n == ours.n && c.k == ours.kq && c.d < d)
        .max_by_key(|c| c.d)
        .or_else(|| {
            dominated()
                .filter(|c| c.n == ours.n && c.d == d && c.k < ours.kq)
                .max_by_key(|c| c.k)
        })
        .or_else(|| {
            dominated()
                .filter(|c| c.k == ours.kq && c.d == d && c.n > ours.n)
                .min_by_key(|c| c.n)
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub family: u8,
    pub q: u32,
    pub m: u32,
    pub k: u32,
    pub code: String,
    pub params: QuantumParams,
    pub defect: DefectReport,
    pub competitor: Option<String>,
    pub competitor_source: Option<String>,
    pub competitor_defect: Option<Defect>,
    /// Competitor defect minus ours.
    pub improvement: Option<Defect>,
}

pub fn table2_row(params: FamilyParams, known: &[KnownCode]) -> Result<Table2Row> {
    let ours = qgrl_parameters(params)?;
    let defect = ours.defect();
    let comp = select_competitor(&ours, known);
    let comp_defect = comp.map(|c| c.params().defect().defect);
    Ok(Table2Row {
        family: params.family,
        q: params.q,
        m: params.m,
        k: params.k,
        code: ours.to_string(),
        params: ours,
        defect,
        competitor: comp.map(|c| c.params().to_string()),
        competitor_source: comp.map(|c| c.source.clone()),
        competitor_defect: comp_defect,
        improvement: comp_defect.map(|c| Defect {
            twice: c.twice - defect.defect.twice,
        }),
    })
}

/// One row per in-range `(family, q, m, k)` with `q` in `qs`, ordered by
/// `q`, family, length and dimension.
pub fn table2_report(qs: &[u32], families: &[u8], known: &[KnownCode]) -> Result<Vec<Table2Row>> {
    let mut cells = Vec::new();
    for &q in qs {
        for &fam in families {
            cells.extend(FamilyParams::all(fam, q));
        }
    }
    let mut rows: Vec<Table2Row> = cells
        .into_iter()
        .map(|p| table2_row(p, known))
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| (r.q, r.family, r.params.n, std::cmp::Reverse(r.params.kq)));
    Ok(rows)
}

/// A published comparison row, as transcribed.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct ReferenceRow {
    pub q: u32,
    pub n: usize,
    pub kq: usize,
    pub d: usize,
    pub d_is_bound: bool,
    pub family: u8,
    pub defect: String,
    pub competitor_n: Option<usize>,
    pub competitor_k: Option<usize>,
    pub competitor_d: Option<usize>,
    pub competitor_d_is_bound: Option<bool>,
    pub competitor_source: Option<String>,
    pub competitor_defect: Option<String>,
}

impl ReferenceRow {
    pub fn params(&self) -> QuantumParams {
        let d = if self.d_is_bound {
            Distance::at_least(self.d)
        } else {
            Distance::certified(self.d)
        };
        QuantumParams {
            n: self.n,
            kq: self.kq,
            d,
            q: self.q,
        }
    }

    pub fn competitor(&self) -> Option<String> {
        let (n, k, d, b) = (
            self.competitor_n?,
            self.competitor_k?,
            self.competitor_d?,
            self.competitor_d_is_bound?,
        );
        let d = if b {
            Distance::at_least(d)
        } else {
            Distance::exact(d)
        };
        Some(
            QuantumParams {
                n,
                kq: k,
                d,
                q: self.q,
            }
            .to_string(),
        )
    }
}

pub fn read_reference_rows<R: Read>(r: R) -> Result<Vec<ReferenceRow>> {
    csv_reader(r)
        .deserialize()
        .map(|rec| rec.map_err(|e| Error::Parse(format!("reference rows: {e}"))))
        .collect()
}

/// Mismatches between a regenerated row and its published counterpart.
pub fn compare_reference_row(
    reference: &ReferenceRow,
    known: &[KnownCode],
) -> Result<(Table2Row, Vec<String>)> {
    let params = family_params_for(reference.family, reference.q, reference.n, reference.kq)?;
    let row = table2_row(params, known)?;
    let mut diffs = Vec::new();
    let ours = row.params;
    if ours.d.value != reference.d
        || (ours.d.evidence == Evidence::LowerBound) != reference.d_is_bound
    {
        diffs.push(format!(
            "distance {} vs published {}",
            ours.d,
            reference.params().d
        ));
    }
    if row.defect.defect != Defect::parse(&reference.defect)? {
        diffs.push(format!(
            "defect {} vs published {}",
            row.defect.defect, reference.defect
        ));
    }
    if row.competitor != reference.competitor() {
        diffs.push(format!(
            "competitor {:?} vs published {:?}",
            row.competitor,
            reference.competitor()
        ));
    }
    let published = reference
        .competitor_defect
        .as_deref()
        .map(Defect::parse)
        .transpose()?;
    if row.competitor_defect != published {
        diffs.push(format!(
            "competitor defect {:?} vs published {:?}",
            row.competitor_defect, published
        ));
    }
    if row.competitor_source != reference.competitor_source {
        diffs.push(format!(
            "competitor source {:?} vs {:?}",
            row.competitor_source, reference.competitor_source
        ));
    }
    Ok((row, diffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defect_arithmetic() {
        let p = QuantumParams::new(62, 50, Distance::certified(6), 9).unwrap();
        assert_eq!(p.defect().defect.to_string(), "1");
        assert!(p.defect().qnmds);
        assert_eq!(Defect::of(26, 17, 4).to_string(), "1.5");
        assert_eq!(Defect::parse("2.5").unwrap(), Defect::of(65, 56, 3));
        assert_eq!(Defect::parse("29").unwrap(), Defect::of(72, 0, 8));
        assert!(QuantumParams::new(10, 4, Distance::exact(5), 5).is_err());
        assert_eq!(Defect::of(10, 6, 3).twice, 0);
    }

    #[test]
    fn closed_forms() {
        let p = qgrl_parameters(FamilyParams::new(1, 9, 6, 6)).unwrap();
        assert_eq!(p.to_string(), "[[62,50,6]]_9");
        assert_eq!(
            qgrl_parameters(FamilyParams::new(2, 5, 2, 3))
                .unwrap()
                .to_string(),
            "[[10,4,3]]_5"
        );
        assert_eq!(
            qgrl_parameters(FamilyParams::new(3, 11, 4, 6))
                .unwrap()
                .to_string(),
            "[[51,39,>=5]]_11"
        );
        assert_eq!(
            family_params_for(4, 9, 19, 11).unwrap(),
            FamilyParams::new(4, 9, 2, 4)
        );
        assert!(family_params_for(1, 9, 23, 15).is_err());
    }

    #[test]
    fn known_codes_parse() {
        let (codes, warnings) = read_known_codes(KNOWN_CODES_CSV.as_bytes()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(codes.len(), 31);
        let (codes, warnings) = read_known_codes(
            "n,k,d,d_is_bound,q,source\n5,x,3,false,9,a\n5,7,1,false,9,b\n4,2,2,false,9,c\n"
                .as_bytes(),
        )
        .unwrap();
        assert_eq!((codes.len(), warnings.len()), (1, 2));
    }

    #[test]
    fn empty_known_table_leaves_competitors_blank() {
        let rows = table2_report(&[9], &[1, 2], &[]).unwrap();
        assert!(!rows.is_empty());
        assert!(rows
            .iter()
            .all(|r| r.competitor.is_none() && r.improvement.is_none()));
    }

    #[test]
    fn reference_rows_regenerate() {
        let (known, _) = read_known_codes(KNOWN_CODES_CSV.as_bytes()).unwrap();
        let rows = read_reference_rows(REFERENCE_CODES_CSV.as_bytes()).unwrap();
        assert_eq!(rows.len(), 72);
        for r in &rows {
            let (_, diffs) = compare_reference_row(r, &known).unwrap();
            assert!(diffs.is_empty(), "{:?}: {diffs:?}", r.params());
        }
    }
}
