use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use grl_core::code::{
    classify as classify_code, enumeration_cost, min_distance_exact, nmds_column_conditions,
    Classification, CodeReport, Distance, Evidence, Label, LinearCode, SearchOptions,
};
use grl_core::families::{construct as build, Construction, FamilyParams};
use grl_core::field::{prime_power, Field, QuadraticExtension};
use grl_core::grl::{nmds_criterion_s2, nmds_criterion_s3, so_criterion, GrlSpec, GrlSpecJson};
use grl_core::linalg::Matrix;
use grl_core::quantum::{
    compare_reference_row, css_from_hermitian_so, read_known_codes, read_reference_rows,
    table2_report, DefectReport, KnownCode, QuantumParams, Table2Row, KNOWN_CODES_CSV,
    REFERENCE_CODES_CSV,
};
use grl_core::reference::{examples as example_fixtures, verify_example};
use grl_core::{par, Error};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Ok = 0,
    Mismatch = 1,
}

/// Bad input that is not a library error: exit status 2.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Infeasible { .. }) => 3,
        _ => 2,
    }
}

/// A closed stdout (e.g. piping into `head`) is not an error worth reporting.
pub fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .map(|io| io.kind())
            .or_else(|| {
                c.downcast_ref::<serde_json::Error>()
                    .and_then(|j| j.io_error_kind())
            })
            == Some(std::io::ErrorKind::BrokenPipe)
    })
}

fn emit_json(out: &mut impl Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn field_info(out: &mut impl Write, q: u32) -> Result<Status> {
    if prime_power(q).is_none() {
        return Err(usage(format!("q = {q} is not a prime power")));
    }
    let ext = QuadraticExtension::for_q(q)?;
    let (base, big) = (ext.base(), ext.ext());
    let unity = ext.unity_subgroup();
    emit_json(
        out,
        &json!({
            "q": q,
            "field": base.spec(),
            "generator": base.generator(),
            "extension": {
                "order": big.order(),
                "field": big.spec(),
                "generator": big.generator(),
                "subfield": ext.subfield(),
                "norm_one_generator": unity.generator,
                "unit_coset_representatives": ext.coset_representatives(),
            },
        }),
    )?;
    Ok(Status::Ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructFormat {
    Json,
    Gfmat,
}

fn known(value: usize, evidence: Evidence) -> Distance {
    Distance { value, evidence }
}

/// Distances of a family member: enumerated on request, otherwise certified
/// by the `s = 2` criterion or bounded by the `s = 3` distance lemma.
fn construction_classification(
    c: &Construction,
    exact: bool,
    opts: SearchOptions,
) -> Result<Classification> {
    let code = c.spec.code();
    let (n, k) = (code.n(), code.k());
    if exact {
        return Ok(classify_code(&code, opts)?);
    }
    let cls = if c.params.family <= 2 {
        if !nmds_criterion_s2(&c.spec)?.nmds {
            log::warn!("{}: criterion did not certify NMDS, enumerating", c.params);
            return Ok(classify_code(&code, opts)?);
        }
        Classification::from_distances(n, k, Distance::certified(n - k), Distance::certified(k))?
    } else {
        Classification::from_distances(
            n,
            k,
            Distance::at_least(c.designed_distance()),
            Distance::at_least(k - 1),
        )?
    };
    Ok(cls)
}

#[derive(Serialize)]
struct QuantumReport {
    #[serde(flatten)]
    params: QuantumParams,
    label: String,
    singleton: DefectReport,
}

impl From<QuantumParams> for QuantumReport {
    fn from(params: QuantumParams) -> Self {
        Self {
            params,
            label: params.to_string(),
            singleton: params.defect(),
        }
    }
}

pub fn construct(
    out: &mut impl Write,
    family: u8,
    q: u32,
    m: u32,
    k: u32,
    format: ConstructFormat,
    exact: bool,
    opts: SearchOptions,
) -> Result<Status> {
    let params = FamilyParams::new(family, q, m, k);
    params.validate()?;
    let c = build(params)?;
    if format == ConstructFormat::Gfmat {
        out.write_all(c.spec.generator().to_gfmat().as_bytes())?;
        return Ok(Status::Ok);
    }
    let code = c.spec.code();
    let cls = construction_classification(&c, exact, opts)?;
    let hso = code.is_hermitian_self_orthogonal(&c.ext)?;
    let quantum = css_from_hermitian_so(
        &code,
        &c.ext,
        known(cls.d_dual, cls.d_dual_evidence),
        Some(known(cls.d, cls.d_evidence)),
        opts,
    )?;
    let report = json!({
        "family": family,
        "q": q,
        "m": m,
        "k": k,
        "field": c.ext.ext().spec(),
        "spec": GrlSpecJson::from(&c.spec),
        "code": CodeReport { classification: cls, hermitian_self_orthogonal: Some(hso) },
        "quantum": QuantumReport::from(quantum),
        "designated_subset": c.designated_subset,
        "trace": c.trace,
    });
    emit_json(out, &report)?;
    Ok(Status::Ok)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Checks {
    pub nmds: bool,
    pub hso: bool,
    pub distance: bool,
}

fn extension_for(field: &Field) -> Option<std::sync::Arc<QuadraticExtension>> {
    if !field.degree().is_multiple_of(2) {
        return None;
    }
    let ext = Field::from_spec(field.spec()).ok()?;
    QuadraticExtension::over_default_base(ext).ok()
}

pub fn verify(
    out: &mut impl Write,
    path: &Path,
    checks: Checks,
    opts: SearchOptions,
) -> Result<Status> {
    let text = read_file(path)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (spec_value, claims) = match value.get("spec") {
        Some(spec) => {
            let claims = value
                .get("code")
                .map(|c| serde_json::from_value::<CodeReport>(c.clone()))
                .transpose()
                .map_err(|e| usage(format!("claimed code report: {e}")))?;
            (spec.clone(), claims)
        }
        None => (value, None),
    };
    let spec =
        GrlSpec::from_json(&spec_value).with_context(|| format!("spec in {}", path.display()))?;
    let code = spec.code();
    let ext = extension_for(spec.field());
    let any = checks.nmds || checks.hso || checks.distance;
    let checks = if any {
        checks
    } else {
        Checks {
            nmds: true,
            hso: ext.is_some(),
            distance: false,
        }
    };

    let mut report = serde_json::Map::new();
    report.insert("n".into(), json!(code.n()));
    report.insert("k".into(), json!(code.k()));
    report.insert("s".into(), json!(spec.s()));
    let mut mismatches = Vec::new();

    let mut nmds_verdict = None;
    if checks.nmds {
        let (verdict, detail) = match spec.s() {
            2 if spec.k() >= 2 => {
                let v = nmds_criterion_s2(&spec)?;
                (
                    v.nmds,
                    json!({"criterion": "s2", "nmds": v.nmds, "witness": v.witness}),
                )
            }
            3 if spec.k() >= 3 => {
                let v = nmds_criterion_s3(&spec, opts.exec)?;
                (
                    v.nmds,
                    json!({"criterion": "s3", "nmds": v.nmds, "witness": v.dependency, "failure": v.failure}),
                )
            }
            _ => {
                let c = nmds_column_conditions(&spec.generator(), opts)?;
                (
                    c.holds(),
                    json!({"criterion": "columns", "nmds": c.holds(), "conditions": c}),
                )
            }
        };
        nmds_verdict = Some(verdict);
        report.insert("nmds".into(), detail);
    }

    let mut gram_zero = None;
    if checks.hso {
        let ext = ext.as_ref().ok_or_else(|| {
            usage(format!(
                "GF({}) is not a quadratic extension",
                spec.field().order()
            ))
        })?;
        let so = so_criterion(&spec, ext)?;
        let gram = code.is_hermitian_self_orthogonal(ext)?;
        if so.self_orthogonal != gram {
            mismatches.push(format!(
                "power-sum criterion says {} but the Gram matrix says {gram}",
                so.self_orthogonal
            ));
        }
        gram_zero = Some(gram);
        report.insert("hso".into(), json!({"criterion": so, "gram_zero": gram}));
    }

    let mut cls = None;
    if checks.distance {
        let c = classify_code(&code, opts)?;
        if let Some(v) = nmds_verdict {
            if v != (c.label == Label::Nmds) {
                mismatches.push(format!(
                    "NMDS criterion says {v} but the distances give {}",
                    c.label
                ));
            }
        }
        report.insert("distance".into(), serde_json::to_value(c)?);
        cls = Some(c);
    }

    if let Some(claim) = &claims {
        check_claims(
            claim,
            nmds_verdict,
            gram_zero,
            cls.as_ref(),
            &mut mismatches,
        );
    }
    for m in &mismatches {
        log::error!("mismatch: {m}");
    }
    report.insert("mismatches".into(), json!(mismatches));
    report.insert("pass".into(), json!(mismatches.is_empty()));
    emit_json(out, &Value::Object(report))?;
    Ok(if mismatches.is_empty() {
        Status::Ok
    } else {
        Status::Mismatch
    })
}

fn check_claims(
    claim: &CodeReport,
    nmds: Option<bool>,
    gram_zero: Option<bool>,
    computed: Option<&Classification>,
    mismatches: &mut Vec<String>,
) {
    let claimed = &claim.classification;
    if let (Some(c), Some(g)) = (claim.hermitian_self_orthogonal, gram_zero) {
        if c != g {
            mismatches.push(format!(
                "claimed hermitian_self_orthogonal={c}, computed {g}"
            ));
        }
    }
    if let Some(v) = nmds {
        if claimed.label == Label::Nmds && !v {
            mismatches.push("claimed NMDS but the criterion fails".into());
        }
    }
    let Some(c) = computed else { return };
    let mut distance = |name: &str, claimed: usize, evidence: Evidence, actual: usize| {
        let ok = match evidence {
            Evidence::LowerBound => actual >= claimed,
            _ => actual == claimed,
        };
        if !ok {
            let rel = if evidence == Evidence::LowerBound {
                ">="
            } else {
                "="
            };
            mismatches.push(format!("claimed {name} {rel} {claimed}, computed {actual}"));
        }
    };
    distance("d", claimed.d, claimed.d_evidence, c.d);
    distance("d_dual", claimed.d_dual, claimed.d_dual_evidence, c.d_dual);
    if claimed.label != Label::Unknown && claimed.label != c.label {
        mismatches.push(format!(
            "claimed label {}, computed {}",
            claimed.label, c.label
        ));
    }
}

pub fn classify(
    out: &mut impl Write,
    path: &Path,
    hso: bool,
    opts: SearchOptions,
) -> Result<Status> {
    let g = Matrix::from_gfmat(&read_file(path)?)
        .with_context(|| format!("matrix in {}", path.display()))?;
    let code = LinearCode::spanned_by(&g);
    if code.k() < g.rows() {
        log::warn!(
            "generator has rank {} < {} rows; classifying the span",
            code.k(),
            g.rows()
        );
    }
    let hermitian_self_orthogonal = if hso {
        let ext = extension_for(g.field()).ok_or_else(|| {
            usage(format!(
                "GF({}) is not a quadratic extension",
                g.field().order()
            ))
        })?;
        Some(code.is_hermitian_self_orthogonal(&ext)?)
    } else {
        None
    };
    let classification = classify_code(&code, opts)?;
    emit_json(
        out,
        &CodeReport {
            classification,
            hermitian_self_orthogonal,
        },
    )?;
    Ok(Status::Ok)
}

pub fn examples(out: &mut impl Write, as_json: bool, opts: SearchOptions) -> Result<Status> {
    let mut reports = Vec::new();
    for ex in example_fixtures()? {
        let r = verify_example(&ex, opts)?;
        if !as_json {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} example {}: {}", r.id, r.summary())?;
        }
        reports.push(r);
    }
    if as_json {
        emit_json(out, &reports)?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        log::error!("{failed} example(s) differ from their stored parameters");
        return Ok(Status::Mismatch);
    }
    Ok(Status::Ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
    Json,
}

fn load_known(path: Option<&Path>) -> Result<Vec<KnownCode>> {
    let (codes, warnings) = match path {
        Some(p) => read_known_codes(read_file(p)?.as_bytes())?,
        None => read_known_codes(KNOWN_CODES_CSV.as_bytes())?,
    };
    for w in warnings {
        log::warn!("known codes: {w}");
    }
    Ok(codes)
}

#[derive(Serialize)]
struct FlatRow<'a> {
    family: u8,
    q: u32,
    m: u32,
    k: u32,
    code: &'a str,
    defect: String,
    qnmds: bool,
    competitor: &'a str,
    competitor_defect: String,
    improvement: String,
    competitor_source: &'a str,
}

impl<'a> From<&'a Table2Row> for FlatRow<'a> {
    fn from(r: &'a Table2Row) -> Self {
        let opt =
            |d: Option<grl_core::quantum::Defect>| d.map(|d| d.to_string()).unwrap_or_default();
        Self {
            family: r.family,
            q: r.q,
            m: r.m,
            k: r.k,
            code: &r.code,
            defect: r.defect.defect.to_string(),
            qnmds: r.defect.qnmds,
            competitor: r.competitor.as_deref().unwrap_or(""),
            competitor_defect: opt(r.competitor_defect),
            improvement: opt(r.improvement),
            competitor_source: r.competitor_source.as_deref().unwrap_or(""),
        }
    }
}

fn write_table(out: &mut impl Write, rows: &[Table2Row]) -> Result<()> {
    let header = [
        "q",
        "family",
        "m",
        "k",
        "ours",
        "S(Q)",
        "competitor",
        "S(Q)",
        "gain",
        "source",
    ];
    let cells: Vec<[String; 10]> = rows
        .iter()
        .map(FlatRow::from)
        .map(|r| {
            [
                r.q.to_string(),
                r.family.to_string(),
                r.m.to_string(),
                r.k.to_string(),
                r.code.to_string(),
                r.defect,
                r.competitor.to_string(),
                r.competitor_defect,
                r.improvement,
                r.competitor_source.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cols: Vec<&str>| {
        let padded: Vec<String> = cols
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in &cells {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

pub fn table2(
    out: &mut impl Write,
    qs: &[u32],
    families: &[u8],
    known_path: Option<&Path>,
    format: TableFormat,
    reference: bool,
) -> Result<Status> {
    let known = load_known(known_path)?;
    let published = read_reference_rows(REFERENCE_CODES_CSV.as_bytes())?;
    if reference {
        let mut diffs = 0;
        for r in published
            .iter()
            .filter(|r| qs.is_empty() || qs.contains(&r.q))
        {
            let (row, d) = compare_reference_row(r, &known)?;
            if d.is_empty() {
                writeln!(
                    out,
                    "OK   {} {} S(Q)={}",
                    row.code,
                    FamilyParams::new(row.family, row.q, row.m, row.k),
                    row.defect.defect
                )?;
            } else {
                diffs += 1;
                writeln!(out, "DIFF {}: {}", row.code, d.join("; "))?;
            }
        }
        return Ok(if diffs == 0 {
            Status::Ok
        } else {
            Status::Mismatch
        });
    }
    let qs: Vec<u32> = if qs.is_empty() {
        published
            .iter()
            .map(|r| r.q)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    } else {
        qs.to_vec()
    };
    for &q in &qs {
        if prime_power(q).is_none() {
            return Err(usage(format!("q = {q} is not a prime power")));
        }
    }
    let rows = table2_report(&qs, families, &known)?;
    match format {
        TableFormat::Table => write_table(out, &rows)?,
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &rows {
                w.serialize(FlatRow::from(r))?;
            }
            w.flush()?;
        }
        TableFormat::Json => emit_json(out, &rows)?,
    }
    Ok(Status::Ok)
}

struct SweepLine {
    ok: bool,
    text: String,
}

fn sweep_one(params: FamilyParams, distance: bool, opts: SearchOptions) -> SweepLine {
    let fail = |why: String| SweepLine {
        ok: false,
        text: format!("FAIL {params}: {why}"),
    };
    let c = match build(params) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let code = c.spec.code();
    let (n, k) = (code.n(), code.k());
    let q2 = c.ext.ext().order();
    let mut notes = vec![format!("[{n},{k}]_{q2}")];
    match code.is_hermitian_self_orthogonal(&c.ext) {
        Ok(true) => notes.push("gram=0".into()),
        Ok(false) => return fail("Gram matrix is not zero".into()),
        Err(e) => return fail(e.to_string()),
    }
    if c.spec.generator().rank() != k {
        return fail("generator rank below k".into());
    }
    if params.family <= 2 {
        match nmds_criterion_s2(&c.spec) {
            Ok(v) if v.nmds => notes.push(format!("nmds d={}", c.designed_distance())),
            Ok(_) => return fail("NMDS criterion fails".into()),
            Err(e) => return fail(e.to_string()),
        }
    } else if distance && enumeration_cost(q2, k).is_some_and(|w| w <= opts.budget) {
        match min_distance_exact(&code, opts) {
            Ok(d) if d >= c.designed_distance() => {
                notes.push(format!("d={d}>={}", c.designed_distance()))
            }
            Ok(d) => return fail(format!("d={d} below {}", c.designed_distance())),
            Err(e) => return fail(e.to_string()),
        }
    } else {
        notes.push(format!("d>={}", c.designed_distance()));
    }
    SweepLine {
        ok: true,
        text: format!("PASS {params}: {}", notes.join(" ")),
    }
}

pub fn sweep(
    out: &mut impl Write,
    qs: &[u32],
    families: &[u8],
    distance: bool,
    opts: SearchOptions,
) -> Result<Status> {
    let mut cells = Vec::new();
    for &q in qs {
        if prime_power(q).is_none() {
            return Err(usage(format!("q = {q} is not a prime power")));
        }
        for &f in families {
            if !(1..=4).contains(&f) {
                return Err(usage(format!("unknown family {f}")));
            }
            cells.extend(FamilyParams::all(f, q));
        }
    }
    let lines = par::map_vec(opts.exec, &cells, |&p| sweep_one(p, distance, opts));
    for l in &lines {
        writeln!(out, "{}", l.text)?;
    }
    let failed = lines.iter().filter(|l| !l.ok).count();
    writeln!(out, "{} instances, {} failed", lines.len(), failed)?;
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::Mismatch
    })
}
