use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functors::Regrading;
use crate::graded::{GradedAlgebra, GradedModule, GradedVectorSpace, QuiverPresentation, Representation};
use crate::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
use crate::homalg::{graded_injectives, DimensionVerdict};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::pid::Atom;

use super::random::{derive_seed, random_module};

/// Default cap on resolution lengths when neither the document nor the caller sets one.
pub const DEFAULT_CAP: usize = 8;

const QUIVER_CAP: usize = 16;

/// A group element: a bare integer for rank-one groups, otherwise a coordinate list.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Degree {
    One(i64),
    Many(Vec<i64>),
}

impl Degree {
    pub fn element(&self, group: &FgAbelianGroup) -> Result<GroupElement> {
        match self {
            Degree::One(x) => group.element(vec![*x]),
            Degree::Many(v) => group.element(v.clone()),
        }
    }
}

impl Default for Degree {
    fn default() -> Self {
        Degree::Many(Vec::new())
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn scalar(&self, field: FieldSpec) -> Result<Scalar> {
        match self {
            Entry::Int(x) => Ok(field.from_i64(*x)),
            Entry::Text(s) => field.parse(s),
        }
    }
}

/// An expected dimension: an integer, `"infinite"` or `"zero"`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Expected {
    Int(usize),
    Text(String),
}

impl Expected {
    pub fn matches(&self, v: DimensionVerdict) -> bool {
        match (self, v) {
            (Expected::Int(x), DimensionVerdict::Exact(y)) => *x == y,
            (Expected::Text(t), DimensionVerdict::Infinite) => t == "infinite",
            (Expected::Text(t), DimensionVerdict::Zero) => t == "zero",
            _ => false,
        }
    }
}

impl std::fmt::Display for Expected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expected::Int(x) => write!(f, "{x}"),
            Expected::Text(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    field: Option<String>,
    seed: Option<u64>,
    cap: Option<usize>,
    #[serde(default)]
    groups: BTreeMap<String, RawGroup>,
    #[serde(default)]
    morphisms: BTreeMap<String, RawMorphism>,
    #[serde(default)]
    quivers: BTreeMap<String, RawQuiver>,
    #[serde(default)]
    algebras: BTreeMap<String, RawAlgebra>,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
    #[serde(default)]
    jobs: Vec<JobSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    from: String,
    to: String,
    matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    name: String,
    from: String,
    to: String,
    degree: Degree,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuiver {
    group: String,
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<String>,
    cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    quiver: Option<String>,
    from: Option<String>,
    morphism: Option<String>,
    group: Option<String>,
    basis: Option<Vec<String>>,
    degrees: Option<Vec<Degree>>,
    #[serde(default)]
    products: Vec<(String, String, String)>,
    unit: Option<String>,
    radical: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    vertex: Option<String>,
    degree: Degree,
    dim: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    #[serde(alias = "arrow")]
    generator: String,
    degree: Degree,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    kind: String,
    algebra: Option<String>,
    vertex: Option<String>,
    shift: Option<Degree>,
    #[serde(default)]
    spaces: Vec<RawSpace>,
    #[serde(default)]
    actions: Vec<RawAction>,
    module: Option<String>,
    morphism: Option<String>,
    seed: Option<u64>,
    max_dim: Option<usize>,
    radius: Option<u32>,
}

/// One algebra of a campaign and the morphisms to regrade it along.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignTarget {
    pub algebra: String,
    pub morphisms: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PidAtomSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default)]
    pub shift: i64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedPair {
    #[serde(alias = "graded")]
    pub d_g: Expected,
    #[serde(alias = "ungraded")]
    pub d_g_prime: Expected,
}

/// A verification job as written in the document.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<Degree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expected>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_pair: Option<ExpectedPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<PidAtomSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<CampaignTarget>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
}

/// The job kinds understood by the runner.
pub const JOB_KINDS: &[&str] = &[
    "resolve",
    "ext",
    "injdim",
    "regrade",
    "inequality",
    "inequality-campaign",
    "adjunction",
    "adjunction-campaign",
    "lemma",
    "product",
    "resolution",
    "acyclicity",
    "pid",
];

/// A validated job: its fields with every reference checked, plus a stable id.
#[derive(Clone, Debug)]
pub struct Job {
    pub id: String,
    pub spec: JobSpec,
}

/// A parsed and fully validated document.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub source: String,
    pub field: Option<FieldSpec>,
    pub seed: Option<u64>,
    pub cap: Option<usize>,
    pub groups: BTreeMap<String, FgAbelianGroup>,
    pub morphisms: BTreeMap<String, GroupMorphism>,
    pub quivers: BTreeMap<String, QuiverPresentation>,
    pub algebras: BTreeMap<String, Arc<GradedAlgebra>>,
    pub modules: BTreeMap<String, Arc<GradedModule>>,
    pub jobs: Vec<Job>,
    algebra_quiver: BTreeMap<String, String>,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
            && self.morphisms.is_empty()
            && self.quivers.is_empty()
            && self.algebras.is_empty()
            && self.modules.is_empty()
            && self.jobs.is_empty()
    }

    pub fn field(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::Rationals)
    }

    pub fn module(&self, name: &str) -> Result<&Arc<GradedModule>> {
        self.modules.get(name).ok_or_else(|| Error::Document(format!("unknown module '{name}'")))
    }

    pub fn algebra(&self, name: &str) -> Result<&Arc<GradedAlgebra>> {
        self.algebras.get(name).ok_or_else(|| Error::Document(format!("unknown algebra '{name}'")))
    }

    pub fn morphism(&self, name: &str) -> Result<&GroupMorphism> {
        self.morphisms.get(name).ok_or_else(|| Error::Document(format!("unknown morphism '{name}'")))
    }

    /// The name of the algebra a module was declared over.
    pub fn algebra_name_of(&self, module: &str) -> Option<&str> {
        self.algebras
            .iter()
            .find(|(_, a)| self.modules.get(module).is_some_and(|m| Arc::ptr_eq(m.algebra(), a)))
            .map(|(n, _)| n.as_str())
    }
}

/// Parses `"Q"`, `"F5"` or `"GF(5)"`.
pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let t = s.trim();
    if matches!(t, "Q" | "QQ" | "rationals") {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix('F'))
        .ok_or_else(|| Error::InvalidField(format!("unknown field '{s}'")))?;
    let p: u64 = digits.parse().map_err(|_| Error::InvalidField(format!("unknown field '{s}'")))?;
    FieldSpec::prime(p)
}

/// Line (1-based) of the first line starting with `header`, skipping `skip` earlier matches.
fn header_line(text: &str, header: &str, skip: usize) -> Option<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with(header))
        .nth(skip)
        .map(|(i, _)| i + 1)
}

struct Resolver<'a> {
    text: &'a str,
    raw: &'a RawDocument,
    doc: Document,
    visiting: BTreeSet<String>,
}

impl Resolver<'_> {
    fn fail(&self, section: &str, name: &str, err: impl std::fmt::Display) -> Error {
        let path = format!("{section}.{name}");
        match header_line(self.text, &format!("[{path}]"), 0) {
            Some(line) => Error::Document(format!("[{path}] (line {line}): {err}")),
            None => Error::Document(format!("[{path}]: {err}")),
        }
    }

    fn group(&self, section: &str, name: &str, group: &str) -> Result<FgAbelianGroup> {
        self.doc
            .groups
            .get(group)
            .cloned()
            .ok_or_else(|| self.fail(section, name, format!("unknown group '{group}'")))
    }

    fn groups(&mut self) -> Result<()> {
        for (name, g) in &self.raw.groups {
            let group = FgAbelianGroup::new(g.rank, g.torsion.clone()).map_err(|e| self.fail("groups", name, e))?;
            self.doc.groups.insert(name.clone(), group);
        }
        Ok(())
    }

    fn morphisms(&mut self) -> Result<()> {
        for (name, m) in &self.raw.morphisms {
            let from = self.group("morphisms", name, &m.from)?;
            let to = self.group("morphisms", name, &m.to)?;
            let phi = GroupMorphism::new(from, to, m.matrix.clone()).map_err(|e| self.fail("morphisms", name, e))?;
            self.doc.morphisms.insert(name.clone(), phi);
        }
        Ok(())
    }

    fn quivers(&mut self) -> Result<()> {
        let field = self.doc.field();
        for (name, q) in &self.raw.quivers {
            let fail = |e: &dyn std::fmt::Display| self.fail("quivers", name, e);
            let group = self.group("quivers", name, &q.group)?;
            let mut quiver = QuiverPresentation::new(field, group.clone(), q.vertices.clone());
            for a in &q.arrows {
                let vertex = |v: &str| {
                    quiver.vertex_index(v).ok_or_else(|| fail(&format!("arrow '{}': unknown vertex '{v}'", a.name)))
                };
                let (s, t) = (vertex(&a.from)?, vertex(&a.to)?);
                let degree = a.degree.element(&group).map_err(|e| fail(&e))?;
                quiver.add_arrow(&a.name, s, t, degree).map_err(|e| fail(&e))?;
            }
            for r in &q.relations {
                let terms = parse_combination(r, field).map_err(|e| fail(&e))?;
                let terms: Vec<(Scalar, Vec<&str>)> =
                    terms.iter().map(|(c, w)| (c.clone(), w.split('.').collect())).collect();
                quiver.add_relation(&terms).map_err(|e| fail(&e))?;
            }
            self.doc.quivers.insert(name.clone(), quiver);
        }
        Ok(())
    }

    fn algebra(&mut self, name: &str) -> Result<Arc<GradedAlgebra>> {
        if let Some(a) = self.doc.algebras.get(name) {
            return Ok(a.clone());
        }
        let raw = self.raw;
        let a = raw
            .algebras
            .get(name)
            .ok_or_else(|| Error::Document(format!("unknown algebra '{name}'")))?;
        if !self.visiting.insert(format!("algebras.{name}")) {
            return Err(self.fail("algebras", name, "cyclic definition"));
        }
        let field = self.doc.field();
        let algebra = if let Some(q) = &a.quiver {
            let quiver = self
                .doc
                .quivers
                .get(q)
                .ok_or_else(|| self.fail("algebras", name, format!("unknown quiver '{q}'")))?;
            let cap = raw.quivers[q].cap.unwrap_or(QUIVER_CAP);
            self.doc.algebra_quiver.insert(name.to_string(), q.clone());
            quiver.compile(cap).map_err(|e| self.fail("algebras", name, e))?
        } else if let Some(from) = &a.from {
            let base = self.algebra(from).map_err(|e| self.fail("algebras", name, e))?;
            let phi = a
                .morphism
                .as_ref()
                .ok_or_else(|| self.fail("algebras", name, "a regraded algebra needs 'morphism'"))?;
            let phi = self
                .doc
                .morphisms
                .get(phi)
                .ok_or_else(|| self.fail("algebras", name, format!("unknown morphism '{phi}'")))?;
            base.regraded(phi).map_err(|e| self.fail("algebras", name, e))?
        } else {
            self.raw_algebra(name, a, field)?
        };
        let report = algebra.validate();
        if !report.is_ok() {
            return Err(self.fail("algebras", name, format!("validation failed: {report}")));
        }
        let algebra = Arc::new(algebra);
        self.doc.algebras.insert(name.to_string(), algebra.clone());
        Ok(algebra)
    }

    fn raw_algebra(&self, name: &str, a: &RawAlgebra, field: FieldSpec) -> Result<GradedAlgebra> {
        let fail = |e: &dyn std::fmt::Display| self.fail("algebras", name, e);
        let group = a.group.as_ref().ok_or_else(|| fail(&"needs 'quiver', 'from' or 'group'"))?;
        let group = self.group("algebras", name, group)?;
        let basis = a.basis.clone().ok_or_else(|| fail(&"needs 'basis'"))?;
        let degrees = a.degrees.as_ref().ok_or_else(|| fail(&"needs 'degrees'"))?;
        if degrees.len() != basis.len() {
            return Err(fail(&"'degrees' and 'basis' differ in length"));
        }
        let degrees = degrees.iter().map(|d| d.element(&group)).collect::<Result<Vec<_>>>().map_err(|e| fail(&e))?;
        let index = |l: &str| basis.iter().position(|b| b == l).ok_or_else(|| fail(&format!("unknown basis element '{l}'")));
        let vector = |s: &str| -> Result<Vec<Scalar>> {
            let mut v = vec![field.zero(); basis.len()];
            for (c, w) in parse_combination(s, field).map_err(|e| fail(&e))? {
                let i = index(&w)?;
                v[i] = &v[i] + &c;
            }
            Ok(v)
        };
        let n = basis.len();
        let mut products = vec![vec![vec![field.zero(); n]; n]; n];
        for (l, r, value) in &a.products {
            products[index(l)?][index(r)?] = vector(value)?;
        }
        let unit = vector(a.unit.as_deref().ok_or_else(|| fail(&"needs 'unit'"))?)?;
        let radical = match &a.radical {
            Some(r) => Some(r.iter().map(|l| index(l)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        GradedAlgebra::from_structure_constants(field, group, basis, degrees, products, unit, radical).map_err(|e| fail(&e))
    }

    fn vertex(&self, section: &str, name: &str, algebra: &GradedAlgebra, v: Option<&String>) -> Result<usize> {
        let v = v.ok_or_else(|| self.fail(section, name, "needs 'vertex'"))?;
        algebra
            .vertex_by_label(v)
            .ok_or_else(|| self.fail(section, name, format!("unknown vertex '{v}'")))
    }

    fn module(&mut self, name: &str) -> Result<Arc<GradedModule>> {
        if let Some(m) = self.doc.modules.get(name) {
            return Ok(m.clone());
        }
        let raw = self.raw;
        let m = raw
            .modules
            .get(name)
            .ok_or_else(|| Error::Document(format!("unknown module '{name}'")))?;
        if !self.visiting.insert(format!("modules.{name}")) {
            return Err(self.fail("modules", name, "cyclic definition"));
        }
        let module = if m.kind == "pushforward" {
            let base = m.module.as_ref().ok_or_else(|| self.fail("modules", name, "needs 'module'"))?;
            let base = self.module(base).map_err(|e| self.fail("modules", name, e))?;
            let phi = m.morphism.as_ref().ok_or_else(|| self.fail("modules", name, "needs 'morphism'"))?;
            let phi = self
                .doc
                .morphisms
                .get(phi)
                .cloned()
                .ok_or_else(|| self.fail("modules", name, format!("unknown morphism '{phi}'")))?;
            let regrading = Regrading::new(base.algebra().clone(), phi).map_err(|e| self.fail("modules", name, e))?;
            // reuse a declared algebra when one matches, so jobs can pair modules
            let pushed = regrading.pushforward(&base).map_err(|e| self.fail("modules", name, e))?;
            match self.doc.algebras.values().find(|a| ***a == **pushed.algebra()) {
                Some(a) => rebase(&pushed, a.clone())?,
                None => pushed,
            }
        } else {
            let algebra_name = m.algebra.as_ref().ok_or_else(|| self.fail("modules", name, "needs 'algebra'"))?;
            let algebra = self
                .algebra(algebra_name)
                .map_err(|_| self.fail("modules", name, format!("unknown algebra '{algebra_name}'")))?;
            self.build_module(name, m, algebra_name, algebra)?
        };
        let report = module.validate();
        if !report.is_ok() {
            return Err(self.fail("modules", name, format!("validation failed: {report}")));
        }
        let module = Arc::new(module);
        self.doc.modules.insert(name.to_string(), module.clone());
        Ok(module)
    }

    fn build_module(
        &self,
        name: &str,
        m: &RawModule,
        algebra_name: &str,
        algebra: Arc<GradedAlgebra>,
    ) -> Result<GradedModule> {
        let fail = |e: &dyn std::fmt::Display| self.fail("modules", name, e);
        let group = algebra.group().clone();
        let shift = m.shift.as_ref().map_or(Ok(group.zero()), |s| s.element(&group)).map_err(|e| fail(&e))?;
        let built = match m.kind.as_str() {
            "regular" => GradedModule::regular(algebra).map(|r| r.shift(&shift)),
            "projective" => {
                let v = self.vertex("modules", name, &algebra, m.vertex.as_ref())?;
                GradedModule::projective(algebra, v, &shift)
            }
            "simple" => {
                let v = self.vertex("modules", name, &algebra, m.vertex.as_ref())?;
                GradedModule::simple(algebra, v, &shift)
            }
            "injective" => {
                let v = self.vertex("modules", name, &algebra, m.vertex.as_ref())?;
                graded_injectives(&algebra).map(|all| all[v].shift(&shift))
            }
            "random" => {
                let seed = m.seed.unwrap_or_else(|| derive_seed(0, name));
                random_module(&algebra, seed, m.max_dim.unwrap_or(6), m.radius.unwrap_or(1))
            }
            "representation" => {
                let q = self
                    .doc
                    .algebra_quiver
                    .get(algebra_name)
                    .ok_or_else(|| fail(&format!("algebra '{algebra_name}' has no quiver")))?;
                let quiver = &self.doc.quivers[q];
                let mut rep = Representation::default();
                for s in &m.spaces {
                    let v = s.vertex.as_ref().ok_or_else(|| fail(&"every space needs 'vertex'"))?;
                    let v = quiver.vertex_index(v).ok_or_else(|| fail(&format!("unknown vertex '{v}'")))?;
                    let g = s.degree.element(&group).map_err(|e| fail(&e))?;
                    *rep.spaces.entry((v, g)).or_default() += s.dim;
                }
                for a in &m.actions {
                    let i = quiver
                        .arrow_index(&a.generator)
                        .ok_or_else(|| fail(&format!("unknown arrow '{}'", a.generator)))?;
                    let g = a.degree.element(&group).map_err(|e| fail(&e))?;
                    rep.maps.insert((i, g), matrix(&a.matrix, algebra.field()).map_err(|e| fail(&e))?);
                }
                rep.to_module(quiver, algebra)
            }
            "explicit" => {
                let mut dims = BTreeMap::new();
                for s in &m.spaces {
                    let g = s.degree.element(&group).map_err(|e| fail(&e))?;
                    *dims.entry(g).or_insert(0) += s.dim;
                }
                let space = GradedVectorSpace::from_dims(group.clone(), &dims, "m").map_err(|e| fail(&e))?;
                let mut actions: BTreeMap<usize, BTreeMap<GroupElement, Matrix>> = BTreeMap::new();
                for a in &m.actions {
                    let i = algebra
                        .index_of(&a.generator)
                        .filter(|i| algebra.generators().contains(i))
                        .ok_or_else(|| fail(&format!("'{}' is not a generator of the algebra", a.generator)))?;
                    let g = a.degree.element(&group).map_err(|e| fail(&e))?;
                    actions.entry(i).or_default().insert(g, matrix(&a.matrix, algebra.field()).map_err(|e| fail(&e))?);
                }
                GradedModule::from_generator_actions(algebra, space, &actions)
            }
            other => return Err(fail(&format!("unknown module kind '{other}'"))),
        };
        built.map_err(|e| fail(&e))
    }

    fn jobs(&mut self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (k, spec) in self.raw.jobs.iter().enumerate() {
            let id = spec.id.clone().unwrap_or_else(|| format!("job{}", k + 1));
            let fail = |e: String| match header_line(self.text, "[[jobs]]", k) {
                Some(line) => Error::Document(format!("[[jobs]] #{} '{id}' (line {line}): {e}", k + 1)),
                None => Error::Document(format!("[[jobs]] #{} '{id}': {e}", k + 1)),
            };
            if !seen.insert(id.clone()) {
                return Err(fail("duplicate job id".into()));
            }
            self.check_job(spec).map_err(fail)?;
            self.doc.jobs.push(Job { id, spec: spec.clone() });
        }
        Ok(())
    }

    fn check_job(&self, spec: &JobSpec) -> std::result::Result<(), String> {
        let kind = spec.kind.as_str();
        if !JOB_KINDS.contains(&kind) {
            return Err(format!("unknown job kind '{kind}'"));
        }
        let need = |field: &str, value: &Option<String>| -> std::result::Result<String, String> {
            value.clone().ok_or_else(|| format!("'{kind}' needs '{field}'"))
        };
        let module = |n: &str| self.doc.modules.get(n).cloned().ok_or_else(|| format!("unknown module '{n}'"));
        let morphism = |n: &str| self.doc.morphisms.get(n).cloned().ok_or_else(|| format!("unknown morphism '{n}'"));
        let algebra = |n: &str| self.doc.algebras.get(n).cloned().ok_or_else(|| format!("unknown algebra '{n}'"));
        let on_domain = |m: &GradedModule, phi: &GroupMorphism| {
            if m.group() == phi.domain() {
                Ok(())
            } else {
                Err(format!("module is graded by {} but the morphism starts at {}", m.group(), phi.domain()))
            }
        };
        match kind {
            "resolve" | "injdim" => {
                module(&need("module", &spec.module)?)?;
            }
            "ext" => {
                module(&need("module", &spec.module)?)?;
                module(&need("target", &spec.target)?)?;
                spec.degree.ok_or("'ext' needs 'degree'")?;
            }
            "regrade" | "inequality" | "lemma" | "product" | "acyclicity" | "adjunction" => {
                let m = module(&need("module", &spec.module)?)?;
                let phi = morphism(&need("morphism", &spec.morphism)?)?;
                on_domain(&m, &phi)?;
                if kind == "adjunction" {
                    let n = module(&need("target", &spec.target)?)?;
                    if n.group() != phi.codomain() {
                        return Err(format!("target module must be graded by {}", phi.codomain()));
                    }
                }
                if kind == "acyclicity" {
                    let v = need("vertex", &spec.vertex)?;
                    m.algebra().vertex_by_label(&v).ok_or_else(|| format!("unknown vertex '{v}'"))?;
                    if let Some(s) = &spec.shift {
                        s.element(m.group()).map_err(|e| e.to_string())?;
                    }
                }
            }
            "resolution" => {
                let a = algebra(&need("algebra", &spec.algebra)?)?;
                let phi = morphism(&need("morphism", &spec.morphism)?)?;
                let n = module(&need("module", &spec.module)?)?;
                if a.group() != phi.domain() {
                    return Err(format!("algebra is graded by {} but the morphism starts at {}", a.group(), phi.domain()));
                }
                if n.group() != phi.codomain() {
                    return Err(format!("module must be graded by {}", phi.codomain()));
                }
                spec.window.ok_or("'resolution' needs 'window'")?;
            }
            "inequality-campaign" | "adjunction-campaign" => {
                let targets = spec.targets.as_ref().ok_or_else(|| format!("'{kind}' needs 'targets'"))?;
                if targets.is_empty() || targets.iter().any(|t| t.morphisms.is_empty()) {
                    return Err("every target needs at least one morphism".into());
                }
                for t in targets {
                    let a = algebra(&t.algebra)?;
                    for p in &t.morphisms {
                        let phi = morphism(p)?;
                        if a.group() != phi.domain() {
                            return Err(format!("morphism '{p}' does not start at the grading group of '{}'", t.algebra));
                        }
                    }
                }
            }
            "pid" => {
                if let Some(atoms) = &spec.atoms {
                    pid_atoms(atoms).map_err(|e| e.to_string())?;
                }
            }
            _ => unreachable!("kinds are checked above"),
        }
        Ok(())
    }
}

/// Moves a module onto an equal algebra allocated elsewhere.
fn rebase(m: &GradedModule, algebra: Arc<GradedAlgebra>) -> Result<GradedModule> {
    GradedModule::new(algebra, m.space().clone(), (0..m.algebra().dim()).map(|i| m.action(i).clone()).collect())
}

fn matrix(rows: &[Vec<Entry>], field: FieldSpec) -> Result<Matrix> {
    let rows: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| r.iter().map(|e| e.scalar(field)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Matrix::from_rows(field, rows)
}

/// Parses `"a.b - 2*c.d + 1/2*e"` into (coefficient, word) terms.
pub fn parse_combination(s: &str, field: FieldSpec) -> Result<Vec<(Scalar, String)>> {
    let mut terms = Vec::new();
    let mut rest = s.trim();
    let mut sign = 1;
    if rest.is_empty() {
        return Ok(terms);
    }
    loop {
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
            continue;
        }
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
            continue;
        }
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = rest[..end].trim();
        let (coefficient, word) = match term.split_once('*') {
            Some((c, w)) => (field.parse(c)?, w.trim()),
            None => (field.one(), term),
        };
        if word.is_empty() {
            return Err(Error::Document(format!("empty term in '{s}'")));
        }
        let coefficient = if sign < 0 { -&coefficient } else { coefficient };
        terms.push((coefficient, word.to_string()));
        rest = rest[end..].trim_start();
        sign = 1;
        if rest.is_empty() {
            return Ok(terms);
        }
    }
}

pub(crate) fn pid_atoms(atoms: &[PidAtomSpec]) -> Result<Vec<(Atom, i64)>> {
    atoms
        .iter()
        .map(|a| {
            let atom = match (a.kind.as_str(), a.m) {
                ("F", None) => Atom::F,
                ("L", None) => Atom::L,
                ("T", Some(m)) if m >= 1 => Atom::T(m),
                ("T", _) => return Err(Error::Document("a T atom needs m >= 1".into())),
                (k, _) => return Err(Error::Document(format!("unknown atom '{k}'"))),
            };
            Ok((atom, a.shift))
        })
        .collect()
}

/// Parses a document and constructs and validates every object in it.
pub fn parse_and_validate(text: &str) -> Result<Document> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].lines().count().max(1));
        match line {
            Some(l) => Error::Document(format!("line {l}: {}", e.message())),
            None => Error::Document(e.message().to_string()),
        }
    })?;
    let field = raw.field.as_deref().map(parse_field).transpose()?;
    let mut r = Resolver {
        text,
        raw: &raw,
        doc: Document { source: text.to_string(), field, seed: raw.seed, cap: raw.cap, ..Document::default() },
        visiting: BTreeSet::new(),
    };
    r.groups()?;
    r.morphisms()?;
    r.quivers()?;
    for name in raw.algebras.keys() {
        r.algebra(name)?;
    }
    for name in raw.modules.keys() {
        r.module(name)?;
    }
    r.jobs()?;
    Ok(r.doc)
}
