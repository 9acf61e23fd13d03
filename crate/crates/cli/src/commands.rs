use std::collections::BTreeMap;

use agcalc::corpus::{gen_corpus, CorpusMap, CorpusSpec, Family};
use agcalc::inversion::{
    ag_proof_identity, chain_rule_check, invert_fixed_point, invert_with, methods_agree,
    q_compose_g, round_trip, verify_phi_identity, xi_moment_oracle, xi_moment_series,
    InversionOptions, Method,
};
use agcalc::lab::{
    check_equivalences, is_nilpotent, vanishing_scan, KnownInverse, ScanAborted, VanishingReport,
};
use agcalc::matrix::jacobian_det_of_z_minus;
use agcalc::report::Check;
use agcalc::series::compose;
use agcalc::weyl::verify_phi_is_rl_inv;
use agcalc::{parse_poly, Error, MapTuple, Rational, SeriesTrunc, SparsePoly};
use serde_json::{json, Value};

use crate::mapfile::{terms_of, LoadedMap};
use crate::report::{Instance, Report};

/// A run that could not produce a verdict.
#[derive(Debug)]
pub struct Abort {
    pub code: u8,
    pub message: String,
    pub partial: Option<Box<Report>>,
}

impl Abort {
    pub fn input(message: impl Into<String>) -> Abort {
        Abort {
            code: 2,
            message: message.into(),
            partial: None,
        }
    }
}

impl From<Error> for Abort {
    fn from(e: Error) -> Abort {
        let code = match e {
            Error::TermCeiling { .. } => 3,
            Error::WindowMismatch { .. } => 1,
            _ => 2,
        };
        Abort {
            code,
            message: e.to_string(),
            partial: None,
        }
    }
}

pub type Outcome = Result<Report, Abort>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    One(Method),
    All,
}

fn strings(map: &MapTuple) -> Value {
    map.components()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .into()
}

fn audit_check(checked: usize, violations: &[String]) -> Check {
    if violations.is_empty() {
        Check::pass("cutoff audit").with_detail(format!("{checked} discarded shells checked"))
    } else {
        Check::fail("cutoff audit", violations.join("; "))
    }
}

/// Inversion by the chosen methods, with agreement and round-trip checks.
fn invert_checks(
    h: &MapTuple,
    known: &KnownInverse,
    d: u32,
    choice: MethodChoice,
    audit: bool,
) -> Result<(Vec<Check>, MapTuple), Error> {
    let methods: Vec<Method> = match choice {
        MethodChoice::One(m) => vec![m],
        MethodChoice::All => Method::ALL.to_vec(),
    };
    let opts = InversionOptions { audit };
    let results = methods
        .iter()
        .map(|&m| invert_with(h, d, m, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut checks = Vec::new();
    if results.len() > 1 {
        checks.push(methods_agree(&results));
    }
    let g = results[0].g.clone();
    checks.extend(round_trip(h, &g, d)?);
    if let Some(kg) = &known.g {
        let kg = kg.truncate(d);
        let mut c = Check::pass(format!("matches known inverse mod deg > {d}"));
        for (i, (a, b)) in g.components().iter().zip(kg.components()).enumerate() {
            let ci = Check::equal(format!("known inverse, component {}", i + 1), a, b);
            if !ci.pass {
                c = ci;
                break;
            }
        }
        checks.push(c);
    }
    if audit {
        let checked = results.iter().map(|r| r.audit.checked).sum();
        let violations: Vec<String> = results
            .iter()
            .flat_map(|r| r.audit.violations.iter().cloned())
            .collect();
        checks.push(audit_check(checked, &violations));
    }
    Ok((checks, g))
}

pub fn invert(
    map: &LoadedMap,
    mut report: Report,
    d: u32,
    choice: MethodChoice,
    audit: bool,
) -> Outcome {
    if d == 0 {
        return Err(Abort::input("--degree must be at least 1"));
    }
    let (checks, g) = invert_checks(&map.h, &map.known, d, choice, audit)?;
    report.output("g", strings(&g));
    report.output("g_terms", serde_json::to_value(terms_of(&g)).unwrap());
    for c in checks {
        report.check(c);
    }
    Ok(report)
}

/// The identity suite for one map and one multiplier `q`.
fn verify_checks(
    h: &MapTuple,
    q: &SparsePoly,
    k: u32,
    d: u32,
) -> Result<(Vec<Check>, BTreeMap<String, Value>), Error> {
    let mut checks = Vec::new();
    let mut outputs = BTreeMap::new();
    let qs = SeriesTrunc::exact(q.clone());
    let vars = h.vars();

    let hd = h.representative(d + 1)?;
    let jf = jacobian_det_of_z_minus(&hd, Some(d));
    outputs.insert("jf".into(), Value::String(jf.to_string()));

    // Phi = R o L^-1 on the truncated exponential q e^{<xi, H>}
    let p = hd.representative(d)?.pairing();
    let base = q.embed(p.vars())?;
    let mut f = base.clone();
    let mut pj = SparsePoly::one(p.vars());
    for j in 1..=k {
        pj = &pj * &p;
        let w = Rational::new(1.into(), agcalc::rational::factorial(j));
        f = &f + &(&pj * &base).scale(&w);
    }
    let mut c = verify_phi_is_rl_inv(&f)?;
    c.name = format!("Phi = R o L^-1 on q e^<xi,H> to xi-degree {k}");
    checks.push(c);

    let mut c = ag_proof_identity(&qs, h, d)?;
    c.name = format!("sum (1/a!) d^a (H^a q) = JG q(G) mod deg > {d}");
    checks.push(c);
    for i in 0..vars.n {
        let zi = SeriesTrunc::exact(SparsePoly::z(vars, i));
        let mut c = ag_proof_identity(&zi, h, d)?;
        c.name = format!(
            "sum (1/a!) d^a (H^a z{}) = JG G{} mod deg > {d}",
            i + 1,
            i + 1
        );
        checks.push(c);
    }

    let g = invert_fixed_point(h, d)?.g;
    let oracle = compose(&SeriesTrunc::exact(q.truncate(d)), &g, d)?;
    let qg = q_compose_g(&qs, h, d)?;
    outputs.insert("q_of_g".into(), Value::String(qg.poly().to_string()));
    checks.push(Check::equal(
        format!("q(G) by Lambda series = q(G) by substitution mod deg > {d}"),
        qg.poly(),
        oracle.poly(),
    ));

    for m in 1..=k {
        checks.push(Check::equal(
            format!("q(G) <xi,N>^{m} by Lambda series mod deg > {d}"),
            &xi_moment_series(h, &qs, m, d)?,
            &xi_moment_oracle(h, &qs, m, d)?,
        ));
    }
    checks.push(verify_phi_identity(h, &qs, k, d)?);
    checks.push(chain_rule_check(h, d)?);
    Ok((checks, outputs))
}

pub fn verify(map: &LoadedMap, mut report: Report, d: u32, k: u32, q: &str) -> Outcome {
    if d == 0 {
        return Err(Abort::input("--degree must be at least 1"));
    }
    let q = parse_poly(q, map.h.vars()).map_err(|e| Abort::input(format!("--q: {e}")))?;
    let k = if k > d {
        report.warnings.push(format!(
            "--xi-degree {k} exceeds --degree {d}; the window rule caps it at {d}"
        ));
        d
    } else {
        k
    };
    let (checks, outputs) = verify_checks(&map.h, &q, k, d)?;
    report.outputs.extend(outputs);
    for c in checks {
        report.check(c);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabChecks {
    Nilpotent,
    Scan0,
    Scan1,
    Equiv,
    All,
}

fn scan_json(r: &VanishingReport) -> Value {
    let values: Vec<Value> = r
        .values
        .iter()
        .map(|(m, v)| json!({ "m": m, "value": v.to_string() }))
        .collect();
    json!({
        "offset": r.offset,
        "m_max": r.m_max,
        "first_nonzero": r.first_nonzero,
        "last_nonzero": r.last_nonzero,
        "values": values,
    })
}

fn guarded(
    report: &mut Report,
    key: &str,
    r: Result<VanishingReport, Box<ScanAborted>>,
) -> Result<VanishingReport, Abort> {
    match r {
        Ok(v) => {
            report.output(key, scan_json(&v));
            Ok(v)
        }
        Err(a) => {
            report.output(key, scan_json(&a.partial));
            report.aborted = true;
            report.pass = false;
            let code = if matches!(a.error, Error::TermCeiling { .. }) {
                3
            } else {
                2
            };
            Err(Abort {
                code,
                message: a.to_string(),
                partial: Some(Box::new(report.clone())),
            })
        }
    }
}

pub fn lab(
    map: &LoadedMap,
    mut report: Report,
    m_max: u32,
    which: LabChecks,
    ceiling: usize,
) -> Outcome {
    let h = &map.h;
    let all = which == LabChecks::All;
    if all || which == LabChecks::Nilpotent {
        let nil = is_nilpotent(h)?;
        report.output("nilpotent", nil.nilpotent);
        report.output("det_i_minus_t_jh", nil.certificate.to_string());
        if let Some((k, c)) = nil.first_coefficient() {
            report.output(
                "first_t_coefficient",
                json!({ "k": k, "value": c.to_string() }),
            );
        }
    }
    if all || which == LabChecks::Scan0 {
        guarded(&mut report, "scan0", vanishing_scan(h, 0, m_max, ceiling))?;
    }
    if all || which == LabChecks::Scan1 {
        let s1 = guarded(&mut report, "scan1", vanishing_scan(h, 1, m_max, ceiling))?;
        if let Some(d) = map.known.t_degree {
            let mut s1 = s1;
            let ok = s1.assert_threshold(d);
            report.check(if ok {
                Check::pass(format!("Lambda^m(P^(m+1)) = 0 for {d} < m <= {m_max}"))
            } else {
                Check::fail("stabilization threshold", format!("nonzero past m = {d}"))
            });
        }
    }
    if all || which == LabChecks::Equiv {
        let r = check_equivalences(h, m_max, &map.known, ceiling).map_err(|e| {
            let mut a = Abort::from(e);
            report.aborted = a.code == 3;
            report.pass = false;
            a.partial = Some(Box::new(report.clone()));
            a
        })?;
        report.output("nilpotent", r.nilpotency.nilpotent);
        if let Some(s) = r.stabilization_index {
            report.output("stabilization_index", s);
        }
        if let Some(d) = r.nt_t_degree.and_then(|d| d.finite()) {
            report.output("nt_t_degree", d);
        }
        for c in r.checks {
            report.check(c);
        }
        report.skipped.extend(r.skipped);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    InvertAll,
    Verify,
    Lab,
}

pub struct CorpusRun {
    pub suite: Suite,
    pub degree: u32,
    pub xi_degree: u32,
    pub m_max: u32,
    pub ceiling: usize,
    pub audit: bool,
}

fn run_instance(m: &CorpusMap, run: &CorpusRun) -> Result<Instance, Abort> {
    let mut inst = Instance {
        id: m.id.clone(),
        family: m.family.to_string(),
        n: m.n(),
        pass: true,
        checks: Vec::new(),
        outputs: BTreeMap::new(),
        skipped: Vec::new(),
    };
    let known = KnownInverse {
        g: m.known_inverse.clone(),
        t_degree: m.inverse_t_degree,
    };
    match run.suite {
        Suite::InvertAll => {
            let (checks, g) =
                invert_checks(&m.h, &known, run.degree, MethodChoice::All, run.audit)?;
            inst.outputs.insert("g".into(), strings(&g));
            inst.checks = checks;
        }
        Suite::Verify => {
            let q = SparsePoly::one(m.h.vars());
            let k = run.xi_degree.min(run.degree);
            let (checks, outputs) = verify_checks(&m.h, &q, k, run.degree)?;
            inst.checks = checks;
            inst.outputs = outputs;
        }
        Suite::Lab => {
            if !m.h.is_exact() {
                inst.skipped
                    .push("truncated series: the lab suite needs a polynomial map".into());
            } else {
                let r = check_equivalences(&m.h, run.m_max, &known, run.ceiling)?;
                if let Some(expected) = m.nilpotent {
                    let c = if expected == r.nilpotency.nilpotent {
                        Check::pass(format!("nilpotent = {expected} as generated"))
                    } else {
                        Check::fail(
                            "nilpotency matches generator",
                            format!("expected {expected}"),
                        )
                    };
                    inst.checks.push(c);
                }
                inst.outputs
                    .insert("nilpotent".into(), r.nilpotency.nilpotent.into());
                if let Some(w) = r.scan0.first_nonzero {
                    inst.outputs.insert("witness_m".into(), w.into());
                }
                if let Some(s) = r.stabilization_index.filter(|_| r.nilpotency.nilpotent) {
                    inst.outputs.insert("stabilization_index".into(), s.into());
                }
                inst.checks.extend(r.checks);
                inst.skipped.extend(r.skipped);
            }
        }
    }
    inst.pass = inst.checks.iter().all(|c| c.pass);
    Ok(inst)
}

pub fn corpus(
    spec: &CorpusSpec,
    mut report: Report,
    run: &CorpusRun,
) -> Result<(Report, Vec<CorpusMap>), Abort> {
    let maps = gen_corpus(spec)?;
    for m in &maps {
        let inst = run_instance(m, run).map_err(|mut a| {
            a.message = format!("{}: {}", m.id, a.message);
            report.aborted = a.code == 3;
            report.pass = false;
            a.partial = Some(Box::new(report.clone()));
            a
        })?;
        report.pass &= inst.pass;
        report.instances.push(inst);
    }
    let passed = report.instances.iter().filter(|i| i.pass).count();
    report.output("instances", report.instances.len());
    report.output("passed", passed);
    let mut by_family = BTreeMap::new();
    for f in Family::ALL {
        let c = maps.iter().filter(|m| m.family == f).count();
        if c > 0 {
            by_family.insert(f.to_string(), Value::from(c));
        }
    }
    report.output("families", Value::Object(by_family.into_iter().collect()));
    Ok((report, maps))
}
