use std::error::Error;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use symfq_core::census::{count_infinity, count_points, verify_estimate, CountReport, Ineq};
use symfq_core::factpat::{family_census, verify_pattern_bounds, Census, LinearFamily};
use symfq_core::symsys::{hypothesis_check, HypothesisReport};
use symfq_core::valueset::{
    average_value_set_direct, average_value_set_via_chi, verify_value_set_bounds,
};
use symfq_core::work::DEFAULT_WORK_CEILING;
use symfq_core::{BoundCheck, ChiMethod, CoeffWindow, Field, Limits, SymSystem};

use crate::output::{emit, json};
use crate::{
    CensusArgs, ChiMethodArg, Cli, Command, CountArgs, FieldArgs, Format, HypothesisArgs, Method,
    SystemArgs, ValueSetArgs, VerifyArgs,
};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

const SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct FieldInfo {
    p: u64,
    k: u32,
    q: u64,
    /// Coefficients of the defining polynomial, constant term first.
    modulus: Option<Vec<u32>>,
}

impl FieldInfo {
    fn of(f: &Field) -> FieldInfo {
        FieldInfo {
            p: f.characteristic() as u64,
            k: f.degree(),
            q: f.order() as u64,
            modulus: f.modulus().map(|m| m.to_vec()),
        }
    }
}

/// Runs the selected pipeline; `Ok(false)` when some check fails.
pub fn run(cli: &Cli) -> Result<bool> {
    let limits = Limits {
        work_ceiling: cli.work_ceiling.unwrap_or(DEFAULT_WORK_CEILING),
        workers: cli.workers.max(1),
    };
    let out = cli.output.as_deref();
    match &cli.command {
        Command::CountPoints(a) => count_cmd(a, &limits, out),
        Command::PatternCensus(a) => census_cmd(a, &limits, out),
        Command::ValueSet(a) => value_set_cmd(a, &limits, out),
        Command::HypothesisCheck(a) => hypothesis_cmd(a, &limits, out),
        Command::VerifyBounds(a) => verify_cmd(a, out),
    }
}

fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(format!("q = {q} is not a prime power").into());
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let (mut rest, mut k) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(format!("q = {q} is not a prime power").into());
    }
    Ok((p, k))
}

fn build_field(a: &FieldArgs) -> Result<Field> {
    let (p, k) = match (a.q, a.p, a.k) {
        (None, None, _) => return Err("missing --q (or --p with --k)".into()),
        (None, Some(p), k) => (p, k.unwrap_or(1)),
        (Some(q), None, None) => prime_power(q)?,
        (Some(q), p, k) => {
            let (pp, kk) = prime_power(q)?;
            if p.is_some_and(|p| p != pp) || k.is_some_and(|k| k != kk) {
                return Err(format!("--q {q} disagrees with --p/--k").into());
            }
            (pp, kk)
        }
    };
    Ok(Field::new(p, k)?)
}

fn build_system(f: &Field, a: &SystemArgs) -> Result<SymSystem> {
    let text = match &a.system {
        Some(path) => read(path)?,
        None if a.poly.is_empty() => {
            return Err("give the system with --system FILE or --poly".into())
        }
        None => a.poly.join("\n"),
    };
    Ok(SymSystem::parse(f, a.s, a.r, &text)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn report_checks(checks: &[BoundCheck]) -> bool {
    for c in checks {
        eprintln!("{}", c.summary());
    }
    checks.iter().all(|c| c.pass)
}

#[derive(Serialize)]
struct CountOutput {
    schema: u32,
    command: String,
    field: FieldInfo,
    standing_assumption: bool,
    report: CountReport,
    checks: Vec<BoundCheck>,
    pass: bool,
}

fn count_cmd(a: &CountArgs, limits: &Limits, out: Option<&Path>) -> Result<bool> {
    let f = build_field(&a.field)?;
    let sys = build_system(&f, &a.system)?;
    let ineq: Ineq = a.ineq.parse()?;
    let mut report = count_points(&f, &sys, &ineq, limits)?;
    if a.infinity {
        report.infinity_count = Some(count_infinity(&f, &sys, limits)?);
    }
    let checks = if a.verify_bounds {
        verify_estimate(&report, &sys)?
    } else {
        Vec::new()
    };
    let pass = report_checks(&checks);
    eprintln!(
        "count-points {}: affine {}, distinct {}{}",
        report.system,
        report.affine_count,
        report.distinct_count,
        report
            .infinity_count
            .map(|c| format!(", at infinity {c}"))
            .unwrap_or_default()
    );
    let doc = CountOutput {
        schema: SCHEMA,
        command: "count-points".into(),
        field: FieldInfo::of(&f),
        standing_assumption: sys.satisfies_standing_assumption(),
        report,
        checks,
        pass,
    };
    emit(out, &json(&doc))?;
    Ok(pass)
}

#[derive(Serialize)]
struct CensusOutput {
    schema: u32,
    command: String,
    field: FieldInfo,
    census: Census,
    checks: Vec<BoundCheck>,
    pass: bool,
}

fn census_csv(census: &Census) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["pattern", "total", "squarefree"])?;
    for e in &census.entries {
        w.serialize((&e.pattern, e.total, e.squarefree))?;
    }
    Ok(w.into_inner().map_err(|e| e.to_string())?)
}

fn census_cmd(a: &CensusArgs, limits: &Limits, out: Option<&Path>) -> Result<bool> {
    let f = build_field(&a.field)?;
    let fam = LinearFamily::parse(&f, a.n, &read(&a.family)?)?;
    let census = family_census(&fam, limits)?;
    let checks = if a.verify_bounds {
        verify_pattern_bounds(&census)?
    } else {
        Vec::new()
    };
    let pass = report_checks(&checks);
    eprintln!(
        "pattern-census {}: {} members",
        census.family,
        census.members()
    );
    let bytes = match a.out {
        Format::Csv => census_csv(&census)?,
        Format::Json => json(&CensusOutput {
            schema: SCHEMA,
            command: "pattern-census".into(),
            field: FieldInfo::of(&f),
            census,
            checks,
            pass,
        }),
    };
    emit(out, &bytes)?;
    Ok(pass)
}

#[derive(Serialize)]
struct Window {
    n: usize,
    s: usize,
    a: Vec<u32>,
}

#[derive(Serialize)]
struct ChiValue {
    r: usize,
    chi: u128,
}

#[derive(Serialize)]
struct ViaChi {
    method: ChiMethod,
    value: String,
    chis: Vec<ChiValue>,
}

#[derive(Serialize)]
struct ValueSetOutput {
    schema: u32,
    command: String,
    field: FieldInfo,
    window: Window,
    in_estimate_range: bool,
    direct: Option<String>,
    via_chi: Option<ViaChi>,
    agree: Option<bool>,
    checks: Vec<BoundCheck>,
    pass: bool,
}

fn value_set_cmd(a: &ValueSetArgs, limits: &Limits, out: Option<&Path>) -> Result<bool> {
    let f = build_field(&a.field)?;
    let win = CoeffWindow::parse(&f, a.n, &a.a)?;
    if let Some(s) = a.s {
        if s != win.s() {
            return Err(format!("--s {s} but --a lists {} coefficients", win.s()).into());
        }
    }
    let direct = match a.method {
        Method::Direct | Method::Both => Some(average_value_set_direct(&f, &win, limits)?),
        Method::Chi => None,
    };
    let method = match a.chi_method {
        ChiMethodArg::Subsets => ChiMethod::Subsets,
        ChiMethodArg::Pointcount => ChiMethod::Pointcount,
    };
    let via = match a.method {
        Method::Chi | Method::Both => Some(average_value_set_via_chi(&f, &win, method, limits)?),
        Method::Direct => None,
    };
    let agree = match (&direct, &via) {
        (Some(d), Some(v)) => Some(*d == v.value),
        _ => None,
    };
    let checks = if a.verify_bounds {
        verify_value_set_bounds(&f, &win, limits)?
    } else {
        Vec::new()
    };
    let mut pass = report_checks(&checks);
    if agree == Some(false) {
        eprintln!(
            "FAIL value_set_methods [{}]: direct and chi formula disagree",
            win.describe()
        );
        pass = false;
    }
    let shown = direct.as_ref().or(via.as_ref().map(|v| &v.value)).unwrap();
    eprintln!("value-set {}: average {shown}", win.describe());
    let doc = ValueSetOutput {
        schema: SCHEMA,
        command: "value-set".into(),
        field: FieldInfo::of(&f),
        window: Window {
            n: win.n(),
            s: win.s(),
            a: win.a().iter().map(|e| e.index()).collect(),
        },
        in_estimate_range: win.in_estimate_range(),
        direct: direct.map(|d| d.to_string()),
        via_chi: via.map(|v| ViaChi {
            method,
            value: v.value.to_string(),
            chis: v
                .chis
                .into_iter()
                .map(|(r, chi)| ChiValue { r, chi })
                .collect(),
        }),
        agree,
        checks,
        pass,
    };
    emit(out, &json(&doc))?;
    Ok(pass)
}

#[derive(Serialize)]
struct HypothesisOutput {
    schema: u32,
    command: String,
    field: FieldInfo,
    system: String,
    report: HypothesisReport,
    pass: bool,
}

fn hypothesis_cmd(a: &HypothesisArgs, limits: &Limits, out: Option<&Path>) -> Result<bool> {
    let f = build_field(&a.field)?;
    let sys = build_system(&f, &a.system)?;
    let report = hypothesis_check(&f, &sys, a.max_ext, limits)?;
    let pass = report.pass;
    eprintln!(
        "{} hypothesis [{}]: {}",
        if pass { "PASS" } else { "FAIL" },
        sys.describe(),
        report.scope
    );
    let doc = HypothesisOutput {
        schema: SCHEMA,
        command: "hypothesis-check".into(),
        field: FieldInfo::of(&f),
        system: sys.describe(),
        report,
        pass,
    };
    emit(out, &json(&doc))?;
    Ok(pass)
}

#[derive(Deserialize)]
struct Tagged {
    schema: u32,
    command: String,
}

#[derive(Deserialize)]
struct CountInput {
    field: FieldInfo,
    report: CountReport,
}

#[derive(Deserialize)]
struct CensusInput {
    census: Census,
}

#[derive(Serialize)]
struct VerifyOutput {
    schema: u32,
    command: String,
    source: String,
    checks: Vec<BoundCheck>,
    pass: bool,
}

fn verify_cmd(a: &VerifyArgs, out: Option<&Path>) -> Result<bool> {
    let text = read(&a.report)?;
    let tag: Tagged = serde_json::from_str(&text)?;
    if tag.schema != SCHEMA {
        return Err(format!("unsupported report schema {}", tag.schema).into());
    }
    let checks = match tag.command.as_str() {
        "count-points" => {
            let doc: CountInput = serde_json::from_str(&text)?;
            let path = a
                .system
                .as_deref()
                .ok_or("count-points reports need --system")?;
            let f = Field::new(doc.field.p, doc.field.k)?;
            let sys = SymSystem::parse(&f, doc.report.s, doc.report.r, &read(path)?)?;
            verify_estimate(&doc.report, &sys)?
        }
        "pattern-census" => {
            let doc: CensusInput = serde_json::from_str(&text)?;
            verify_pattern_bounds(&doc.census)?
        }
        other => return Err(format!("cannot verify a {other} report").into()),
    };
    let pass = report_checks(&checks);
    let doc = VerifyOutput {
        schema: SCHEMA,
        command: "verify-bounds".into(),
        source: tag.command,
        checks,
        pass,
    };
    emit(out, &json(&doc))?;
    Ok(pass)
}
