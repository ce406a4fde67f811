use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::functors::Regrading;
use crate::graded::{GradedAlgebra, GradedModule};
use crate::groups::GroupMorphism;
use crate::homalg::{graded_ext, graded_injective_dimension, minimal_resolution, projective_dimension, CheckOutcome};
use crate::pid::{verify_sharpness, PidGradedModule};

use super::document::{pid_atoms, CampaignTarget, Expected, Document, Job, JobSpec, DEFAULT_CAP};
use super::random::{derive_seed, random_module};

/// Version tag of the JSON report layout.
pub const REPORT_SCHEMA: &str = "regrade-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
}

impl Check {
    fn new(name: impl Into<String>, outcome: CheckOutcome) -> Self {
        Check { name: name.into(), outcome }
    }

    fn flag(name: impl Into<String>, ok: bool, reason: impl FnOnce() -> String) -> Self {
        let outcome = if ok { CheckOutcome::Pass } else { CheckOutcome::Fail(reason()) };
        Check::new(name, outcome)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JobReport {
    pub id: String,
    pub kind: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl JobReport {
    /// A job fails when a check fails or the job itself errored.
    pub fn failed(&self) -> bool {
        self.error.is_some() || self.checks.iter().any(|c| c.outcome.is_fail())
    }

    fn count(&self, pred: fn(&CheckOutcome) -> bool) -> usize {
        self.checks.iter().filter(|c| pred(&c.outcome)).count()
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub jobs: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

/// The outcome of a campaign. Serializes identically for identical
/// (document, seed, cap); timings only appear in the table.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub cap: usize,
    pub digest: String,
    pub jobs: Vec<JobReport>,
    pub summary: Summary,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.summary.failed > 0 || self.summary.errors > 0
    }

    /// Names of failing checks as `job/check`, plus errored jobs.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in &self.jobs {
            if let Some(e) = &j.error {
                out.push(format!("{}: error: {e}", j.id));
            }
            for c in j.checks.iter().filter(|c| c.outcome.is_fail()) {
                out.push(format!("{}/{}: {}", j.id, c.name, c.outcome));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let width = self.jobs.iter().map(|j| j.id.len()).max().unwrap_or(2).max(2);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:<20}  {:>5}  {:>5}  {:>5}  {:>9}  status", "id", "kind", "pass", "fail", "inc", "ms");
        for j in &self.jobs {
            let status = if j.error.is_some() {
                "ERROR"
            } else if j.failed() {
                "FAIL"
            } else {
                "ok"
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:<20}  {:>5}  {:>5}  {:>5}  {:>9.1}  {status}",
                j.id,
                j.kind,
                j.count(CheckOutcome::is_pass),
                j.count(CheckOutcome::is_fail),
                j.count(|o| matches!(o, CheckOutcome::Inconclusive(_))),
                j.elapsed.as_secs_f64() * 1e3,
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} jobs, {} checks: {} passed, {} failed, {} inconclusive, {} errors (seed {}, cap {})",
            s.jobs, s.checks, s.passed, s.failed, s.inconclusive, s.errors, self.seed, self.cap
        );
        for f in self.failures() {
            let _ = writeln!(out, "  FAILED {f}");
        }
        out
    }
}

/// Digest over everything a report depends on.
pub fn digest(source: &str, seed: u64, cap: usize) -> String {
    let mut h = Sha256::new();
    h.update(REPORT_SCHEMA.as_bytes());
    h.update([0]);
    h.update(source.as_bytes());
    h.update([0]);
    h.update(seed.to_le_bytes());
    h.update((cap as u64).to_le_bytes());
    hex::encode(h.finalize())
}

/// Runs every job of `document` with the document's cap (or the default).
pub fn run_campaign(document: &Document, seed: u64) -> Report {
    run_campaign_with_cap(document, seed, document.cap.unwrap_or(DEFAULT_CAP))
}

/// Runs every job in parallel; results are merged in declaration order.
pub fn run_campaign_with_cap(document: &Document, seed: u64, cap: usize) -> Report {
    let jobs: Vec<JobReport> = document.jobs.par_iter().map(|j| run_job(document, j, seed, cap)).collect();
    assemble(&document.source, seed, cap, jobs)
}

pub(crate) fn assemble(source: &str, seed: u64, cap: usize, jobs: Vec<JobReport>) -> Report {
    let mut summary = Summary { jobs: jobs.len(), ..Summary::default() };
    for j in &jobs {
        summary.checks += j.checks.len();
        summary.passed += j.count(CheckOutcome::is_pass);
        summary.failed += j.count(CheckOutcome::is_fail);
        summary.inconclusive += j.count(|o| matches!(o, CheckOutcome::Inconclusive(_)));
        summary.errors += usize::from(j.error.is_some());
    }
    Report { schema: REPORT_SCHEMA, seed, cap, digest: digest(source, seed, cap), jobs, summary }
}

/// Runs one job; errors are captured in the report.
pub fn run_job(doc: &Document, job: &Job, seed: u64, cap: usize) -> JobReport {
    let start = Instant::now();
    let cap = job.spec.cap.unwrap_or(cap);
    let mut parameters = serde_json::to_value(&job.spec).expect("job specs serialize");
    if let Value::Object(map) = &mut parameters {
        map.remove("id");
        map.remove("kind");
        map.insert("cap".into(), json!(cap));
    }
    let (checks, data, error) = match execute(doc, job, seed, cap) {
        Ok((checks, data)) => (checks, data, None),
        Err(e) => (Vec::new(), Value::Null, Some(e.to_string())),
    };
    JobReport {
        id: job.id.clone(),
        kind: job.spec.kind.clone(),
        parameters,
        checks,
        data,
        error,
        elapsed: start.elapsed(),
    }
}

type Outcome = Result<(Vec<Check>, Value)>;

fn name<'a>(field: &'a Option<String>, what: &str) -> Result<&'a str> {
    field.as_deref().ok_or_else(|| Error::Document(format!("missing '{what}'")))
}

fn regrading(doc: &Document, spec: &JobSpec) -> Result<(Arc<GradedModule>, Regrading)> {
    let m = doc.module(name(&spec.module, "module")?)?.clone();
    let phi = doc.morphism(name(&spec.morphism, "morphism")?)?.clone();
    let r = Regrading::new(m.algebra().clone(), phi)?;
    Ok((m, r))
}

fn dims_json(m: &GradedModule) -> Value {
    Value::Object(m.dims().into_iter().map(|(g, d)| (g.to_string(), json!(d))).collect())
}

fn execute(doc: &Document, job: &Job, seed: u64, cap: usize) -> Outcome {
    let spec = &job.spec;
    match spec.kind.as_str() {
        "resolve" => resolve(doc, spec, cap),
        "ext" => {
            let m = doc.module(name(&spec.module, "module")?)?;
            let n = doc.module(name(&spec.target, "target")?)?;
            let i = spec.degree.unwrap_or(0);
            let e = graded_ext(m, n, i, cap)?;
            let mut checks = Vec::new();
            if let Some(x) = &spec.expect {
                checks.push(Check::flag("expected", matches!(x, Expected::Int(d) if *d == e.dim), || {
                    format!("dim Ext^{i} = {}, expected {x}", e.dim)
                }));
            }
            Ok((checks, json!({ "degree": i, "dim": e.dim, "truncated": e.truncated })))
        }
        "injdim" => {
            let m = doc.module(name(&spec.module, "module")?)?;
            let v = graded_injective_dimension(m, cap)?;
            let mut checks = Vec::new();
            if let Some(x) = &spec.expect {
                checks.push(Check::flag("expected", x.matches(v), || format!("injective dimension {v}, expected {x}")));
            }
            Ok((checks, json!({ "injective_dimension": v })))
        }
        "regrade" => {
            let (m, r) = regrading(doc, spec)?;
            let pushed = r.pushforward(&m)?;
            let report = pushed.validate();
            let checks = vec![
                Check::flag("valid", report.is_ok(), || report.to_string()),
                Check::flag("total_dim", pushed.total_dim() == m.total_dim(), || {
                    format!("{} != {}", pushed.total_dim(), m.total_dim())
                }),
            ];
            Ok((checks, json!({ "kernel": r.kernel().group.to_string(), "dims": dims_json(&pushed) })))
        }
        "inequality" => {
            let (m, r) = regrading(doc, spec)?;
            let rep = r.verify_inequality(&m, cap)?;
            let mut checks: Vec<Check> = rep.outcomes().iter().map(|(n, o)| Check::new(*n, (*o).clone())).collect();
            if let Some(e) = &spec.expect_pair {
                checks.push(Check::flag("expected d_g", e.d_g.matches(rep.d_g), || {
                    format!("d_g = {}, expected {}", rep.d_g, e.d_g)
                }));
                checks.push(Check::flag("expected d_g'", e.d_g_prime.matches(rep.d_g_prime), || {
                    format!("d_g' = {}, expected {}", rep.d_g_prime, e.d_g_prime)
                }));
            }
            Ok((checks, serde_json::to_value(&rep).expect("serializable")))
        }
        "inequality-campaign" => sample_campaign(doc, job, seed, cap, false),
        "adjunction-campaign" => sample_campaign(doc, job, seed, cap, true),
        "adjunction" => {
            let (m, r) = regrading(doc, spec)?;
            let n = doc.module(name(&spec.target, "target")?)?;
            let w = r.adjunction_witness(&m, n)?;
            Ok((adjunction_checks(&w), json!({ "hom_dims": w.hom_dims })))
        }
        "lemma" | "product" => {
            let (m, r) = regrading(doc, spec)?;
            let c = if spec.kind == "lemma" {
                r.decomposition_iso(&m, spec.window)?
            } else {
                r.product_decomposition_check(&m)?
            };
            let checks = vec![
                Check::flag("degree_preserving", c.degree_preserving, || "a component changes degree".into()),
                Check::flag("linear", c.linear, || "the map does not commute with the action".into()),
                Check::flag("bijective", c.bijective, || "some degree is not bijective".into()),
            ];
            Ok((checks, json!({ "window": c.window, "degrees_checked": c.degrees_checked.len() })))
        }
        "resolution" => {
            let a = doc.algebra(name(&spec.algebra, "algebra")?)?;
            let phi = doc.morphism(name(&spec.morphism, "morphism")?)?;
            let n = doc.module(name(&spec.module, "module")?)?;
            let r = Regrading::new(a.clone(), phi.clone())?;
            let w = spec.window.unwrap_or(4);
            let res = r.rank1_regrade_resolution(n, w)?;
            let all = |f: fn(&crate::functors::SlotReport) -> bool, what: &str| {
                let bad: Vec<&str> = res.degrees.iter().filter(|d| !f(d)).map(|d| d.degree.as_str()).collect();
                Check::flag(what.to_string(), bad.is_empty(), || format!("fails in degrees {}", bad.join(", ")))
            };
            let checks = vec![
                all(|d| d.augmentation_surjective, "exact_at_target"),
                all(|d| d.composite_zero, "complex"),
                all(|d| d.middle_exact, "exact_in_middle"),
                all(|d| d.differential_injective, "differential_injective"),
                Check::flag("linear", res.linear, || "a differential is not A-linear".into()),
            ];
            Ok((
                checks,
                json!({
                    "window": res.window,
                    "kernel_generator": res.kernel_generator,
                    "interior": [res.interior.0, res.interior.1],
                    "degrees": res.degrees.len(),
                }),
            ))
        }
        "acyclicity" => {
            let (m, r) = regrading(doc, spec)?;
            let v = name(&spec.vertex, "vertex")?;
            let v = m
                .algebra()
                .vertex_by_label(v)
                .ok_or_else(|| Error::Document(format!("unknown vertex '{v}'")))?;
            let shift = match &spec.shift {
                Some(d) => d.element(m.group())?,
                None => m.group().zero(),
            };
            let rep = r.verify_acyclicity(&m, v, &shift, cap.max(1))?;
            let checks = vec![Check::flag("acyclic", rep.acyclic(), || {
                format!("Ext^{} is nonzero", rep.first_nonzero.unwrap_or(0))
            })];
            Ok((checks, serde_json::to_value(&rep).expect("serializable")))
        }
        "pid" => pid(spec),
        other => Err(Error::Document(format!("unknown job kind '{other}'"))),
    }
}

fn resolve(doc: &Document, spec: &JobSpec, cap: usize) -> Outcome {
    let m = doc.module(name(&spec.module, "module")?)?;
    let res = minimal_resolution(m, cap)?;
    let algebra = m.algebra();
    let mut terms = Vec::new();
    for i in 0..res.terms().len() {
        let summands: Vec<Value> = res
            .summands(i)
            .iter()
            .map(|(v, s)| json!({ "vertex": algebra.vertex_label(*v).unwrap_or("?"), "shift": s.to_string() }))
            .collect();
        terms.push(Value::Array(summands));
    }
    let d = res.differentials();
    let mut complex = true;
    for i in 1..d.len() {
        complex &= d[i].then(&d[i - 1])?.is_zero();
    }
    let checks = vec![
        Check::flag("cover_surjective", d.first().is_none_or(|d0| d0.is_surjective()), || {
            "P_0 does not cover the module".into()
        }),
        Check::flag("complex", complex, || "consecutive differentials do not compose to zero".into()),
    ];
    Ok((
        checks,
        json!({
            "length": res.length(),
            "projective_dimension": projective_dimension(m, cap)?,
            "terms": terms,
        }),
    ))
}

fn adjunction_checks(w: &crate::functors::AdjunctionWitness) -> Vec<Check> {
    vec![
        Check::flag("left_triangle", w.left_triangle, || "ε φ_!(ι) differs from the identity".into()),
        Check::flag("right_triangle", w.right_triangle, || "φ^*(ε) ι differs from the identity".into()),
        Check::flag("left_bijection", w.left_invertible(), || format!("Hom dimensions {:?}", w.hom_dims)),
        Check::flag("right_bijection", w.right_invertible(), || format!("Hom dimensions {:?}", w.hom_dims)),
    ]
}

struct Sample {
    algebra: String,
    morphism: String,
    seed: u64,
    checks: Vec<Check>,
    data: Value,
}

fn pairs(targets: &[CampaignTarget]) -> Vec<(&str, &str)> {
    targets
        .iter()
        .flat_map(|t| t.morphisms.iter().map(move |p| (t.algebra.as_str(), p.as_str())))
        .collect()
}

fn sample_campaign(doc: &Document, job: &Job, seed: u64, cap: usize, adjunction: bool) -> Outcome {
    let spec = &job.spec;
    let targets = spec.targets.as_deref().unwrap_or_default();
    let pairs = pairs(targets);
    if pairs.is_empty() {
        return Err(Error::Document("no targets".into()));
    }
    let count = spec.count.unwrap_or(pairs.len());
    let max_dim = spec.max_dim.unwrap_or(4);
    let radius = spec.radius.unwrap_or(1);
    let samples: Vec<Sample> = (0..count)
        .into_par_iter()
        .map(|k| {
            let (a, p) = pairs[k % pairs.len()];
            let algebra: &Arc<GradedAlgebra> = doc.algebra(a)?;
            let phi: &GroupMorphism = doc.morphism(p)?;
            let s = derive_seed(seed, &format!("{}/{k}", job.id));
            let r = Regrading::new(algebra.clone(), phi.clone())?;
            let m = Arc::new(random_module(algebra, s, max_dim, radius)?);
            let (checks, data) = if adjunction {
                let n = Arc::new(random_module(r.target_algebra(), derive_seed(s, "target"), max_dim, radius)?);
                let w = r.adjunction_witness(&m, &n)?;
                (adjunction_checks(&w), json!({ "dim": [m.total_dim(), n.total_dim()], "hom_dims": w.hom_dims }))
            } else {
                let rep = r.verify_inequality(&m, cap)?;
                let checks = rep.outcomes().iter().map(|(n, o)| Check::new(*n, (*o).clone())).collect();
                (checks, json!({ "dim": m.total_dim(), "d_g": rep.d_g, "d_g_prime": rep.d_g_prime, "n": rep.n }))
            };
            Ok(Sample { algebra: a.to_string(), morphism: p.to_string(), seed: s, checks, data })
        })
        .collect::<Result<_>>()?;
    let checks = samples
        .iter()
        .enumerate()
        .flat_map(|(k, s)| s.checks.iter().map(move |c| Check::new(format!("{k}:{}", c.name), c.outcome.clone())))
        .collect();
    let rows: Vec<Value> = samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut row = json!({ "sample": k, "algebra": s.algebra, "morphism": s.morphism, "seed": s.seed });
            if let (Value::Object(r), Value::Object(d)) = (&mut row, &s.data) {
                r.extend(d.clone());
            }
            row
        })
        .collect();
    Ok((checks, json!({ "samples": rows.len(), "max_dim": max_dim, "radius": radius, "rows": rows })))
}

fn pid(spec: &JobSpec) -> Outcome {
    let Some(atoms) = &spec.atoms else {
        let report = verify_sharpness();
        let mut checks = vec![Check::flag("n = cd(Z)", report.n == "1", || format!("n = {}", report.n))];
        for c in &report.cases {
            checks.push(Check::new(format!("{} inequalities", c.module), c.inequalities.clone()));
            checks.push(Check::new(format!("{} sharpness", c.module), c.expected.clone()));
        }
        return Ok((checks, serde_json::to_value(&report).expect("serializable")));
    };
    let m = PidGradedModule::new(pid_atoms(atoms)?)?;
    let (g, u) = m.injective_dimensions();
    let bounds = match (g.exact(), u.exact()) {
        (Some(g), Some(u)) => g <= u && u <= g + 1,
        _ => true,
    };
    let mut checks = vec![Check::flag("inequalities", bounds, || format!("{g} <= {u} <= {g} + 1 fails"))];
    if let Some(e) = &spec.expect_pair {
        checks.push(Check::flag("expected graded", e.d_g.matches(g), || format!("graded {g}, expected {}", e.d_g)));
        checks.push(Check::flag("expected ungraded", e.d_g_prime.matches(u), || {
            format!("ungraded {u}, expected {}", e.d_g_prime)
        }));
    }
    Ok((checks, json!({ "module": m.to_string(), "graded": g, "ungraded": u })))
}
