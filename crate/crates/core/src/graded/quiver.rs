use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{FgAbelianGroup, GroupElement};
use crate::linalg::{FieldSpec, Matrix, Scalar};

use super::algebra::GradedAlgebra;
use super::module::{ActionBlocks, GradedModule};
use super::space::GradedVectorSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: GroupElement,
}

/// A linear combination of paths; each path lists arrow indices in the
/// order they are traversed.
pub type PathCombination = Vec<(Scalar, Vec<usize>)>;

/// A quiver with homogeneous relations. Vertices sit in the trivial degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    field: FieldSpec,
    group: FgAbelianGroup,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<PathCombination>,
}

// Paths ordered by length, then lexicographically on arrow indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Word(Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly = BTreeMap<Word, Scalar>;

#[derive(Clone, Debug)]
struct Rule {
    tip: Vec<usize>,
    // tip = tail, tail made of smaller words
    tail: Poly,
}

fn add_term(p: &mut Poly, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&w) {
        Some(x) => {
            let s = &*x + &c;
            if s.is_zero() {
                p.remove(&w);
            } else {
                *x = s;
            }
        }
        None => {
            p.insert(w, c);
        }
    }
}

fn find_subword(word: &[usize], pattern: &[usize]) -> Option<usize> {
    if pattern.len() > word.len() {
        return None;
    }
    (0..=word.len() - pattern.len()).find(|&p| word[p..p + pattern.len()] == *pattern)
}

struct Rewriter {
    rules: Vec<Rule>,
}

impl Rewriter {
    fn reduce(&self, mut p: Poly) -> Poly {
        loop {
            let mut hit = None;
            'outer: for w in p.keys().rev() {
                for (r, rule) in self.rules.iter().enumerate() {
                    if let Some(pos) = find_subword(&w.0, &rule.tip) {
                        hit = Some((w.clone(), r, pos));
                        break 'outer;
                    }
                }
            }
            let Some((w, r, pos)) = hit else {
                return p;
            };
            let c = p.remove(&w).expect("word present");
            let rule = &self.rules[r];
            let (prefix, suffix) = (&w.0[..pos], &w.0[pos + rule.tip.len()..]);
            for (t, tc) in &rule.tail {
                let mut nw = prefix.to_vec();
                nw.extend_from_slice(&t.0);
                nw.extend_from_slice(suffix);
                add_term(&mut p, Word(nw), &c * tc);
            }
        }
    }

    fn is_normal(&self, w: &[usize]) -> bool {
        self.rules.iter().all(|r| find_subword(w, &r.tip).is_none())
    }

    // Adds `p = 0` as a rule if it does not already reduce to zero; returns
    // whether the rule set changed.
    fn insert(&mut self, p: Poly) -> bool {
        let mut pending = vec![p];
        let mut changed = false;
        while let Some(p) = pending.pop() {
            let p = self.reduce(p);
            let Some((lead, lc)) = p.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
                continue;
            };
            let inv = lc.inv();
            let mut tail = Poly::new();
            for (w, c) in &p {
                if *w != lead {
                    add_term(&mut tail, w.clone(), -&(c * &inv));
                }
            }
            // Rules whose tip contains the new tip are superseded.
            let (keep, drop): (Vec<Rule>, Vec<Rule>) =
                std::mem::take(&mut self.rules).into_iter().partition(|r| find_subword(&r.tip, &lead.0).is_none());
            self.rules = keep;
            for r in drop {
                let mut poly = r.tail.clone();
                for c in poly.values_mut() {
                    *c = -&*c;
                }
                add_term(&mut poly, Word(r.tip.clone()), lc.field().one());
                pending.push(poly);
            }
            self.rules.push(Rule { tip: lead.0, tail });
            changed = true;
        }
        if changed {
            for k in 0..self.rules.len() {
                let tail = std::mem::take(&mut self.rules[k].tail);
                self.rules[k].tail = self.reduce(tail);
            }
        }
        changed
    }
}

impl QuiverPresentation {
    pub fn new(field: FieldSpec, group: FgAbelianGroup, vertices: Vec<String>) -> Self {
        QuiverPresentation { field, group, vertices, arrows: Vec::new(), relations: Vec::new() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &[PathCombination] {
        &self.relations
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn add_arrow(&mut self, name: &str, source: usize, target: usize, degree: GroupElement) -> Result<usize> {
        if source >= self.vertices.len() || target >= self.vertices.len() {
            return Err(Error::InvalidAlgebra(format!("arrow {name} has an unknown endpoint")));
        }
        if !self.group.contains(&degree) {
            return Err(Error::InvalidAlgebra(format!("arrow {name} has degree {degree} outside {}", self.group)));
        }
        if self.arrow_index(name).is_some() || self.vertex_index(name).is_some() {
            return Err(Error::InvalidAlgebra(format!("name {name} is used twice")));
        }
        self.arrows.push(Arrow { name: name.to_string(), source, target, degree });
        Ok(self.arrows.len() - 1)
    }

    /// Adds a relation given by arrow names in traversal order.
    pub fn add_relation(&mut self, terms: &[(Scalar, Vec<&str>)]) -> Result<()> {
        let mut combination = Vec::with_capacity(terms.len());
        for (c, path) in terms {
            let arrows = path
                .iter()
                .map(|a| self.arrow_index(a).ok_or_else(|| Error::InvalidAlgebra(format!("unknown arrow {a}"))))
                .collect::<Result<Vec<_>>>()?;
            combination.push((c.clone(), arrows));
        }
        self.relations.push(combination);
        Ok(())
    }

    fn path_ends(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = self.arrows.get(*path.first()?)?;
        let last = self.arrows.get(*path.last()?)?;
        for w in path.windows(2) {
            if self.arrows[w[0]].target != self.arrows[w[1]].source {
                return None;
            }
        }
        Some((last.target, first.source))
    }

    pub fn path_degree(&self, path: &[usize]) -> GroupElement {
        path.iter().fold(self.group.zero(), |acc, &a| self.group.add(&acc, &self.arrows[a].degree))
    }

    fn check_relation(&self, index: usize, relation: &PathCombination) -> Result<Poly> {
        let mut poly = Poly::new();
        let mut shape: Option<((usize, usize), GroupElement)> = None;
        for (c, path) in relation {
            if !self.field.contains(c) {
                return Err(Error::InvalidField(format!("relation {index} has a coefficient outside {}", self.field)));
            }
            if c.is_zero() {
                continue;
            }
            if path.len() < 2 {
                return Err(Error::InadmissibleRelation(format!(
                    "relation {index} has a term of length {}; relations must lie in the square of the arrow ideal",
                    path.len()
                )));
            }
            let ends = self
                .path_ends(path)
                .ok_or_else(|| Error::InvalidAlgebra(format!("relation {index} contains a non-composable path")))?;
            let key = (ends, self.path_degree(path));
            match &shape {
                None => shape = Some(key),
                Some(s) if s.0 != key.0 => {
                    return Err(Error::NonHomogeneousRelation(format!("relation {index} mixes non-parallel paths")));
                }
                Some(s) if s.1 != key.1 => {
                    return Err(Error::NonHomogeneousRelation(format!(
                        "relation {index} mixes degrees {} and {}",
                        s.1, key.1
                    )));
                }
                Some(_) => {}
            }
            add_term(&mut poly, Word(path.clone()), c.clone());
        }
        Ok(poly)
    }

    /// Completes the relations to a confluent length-lexicographic rewriting
    /// system and returns the algebra spanned by the irreducible paths. Fails
    /// if a rule or an irreducible path longer than `cap` appears.
    pub fn compile(&self, cap: usize) -> Result<GradedAlgebra> {
        let mut rw = Rewriter { rules: Vec::new() };
        for (i, rel) in self.relations.iter().enumerate() {
            let poly = self.check_relation(i, rel)?;
            rw.insert(poly);
        }
        let too_long = |rw: &Rewriter| rw.rules.iter().any(|r| r.tip.len() > cap + 1);
        if too_long(&rw) {
            return Err(Error::PossiblyInfinite { cap });
        }
        // Resolve overlaps until no new rules appear.
        loop {
            let mut added = false;
            let snapshot = rw.rules.clone();
            'pairs: for r1 in &snapshot {
                for r2 in &snapshot {
                    for k in 1..r1.tip.len().min(r2.tip.len()) {
                        if r1.tip[r1.tip.len() - k..] != r2.tip[..k] {
                            continue;
                        }
                        let head = &r1.tip[..r1.tip.len() - k];
                        let rest = &r2.tip[k..];
                        let mut s = Poly::new();
                        for (w, c) in &r1.tail {
                            let mut nw = w.0.clone();
                            nw.extend_from_slice(rest);
                            add_term(&mut s, Word(nw), c.clone());
                        }
                        for (w, c) in &r2.tail {
                            let mut nw = head.to_vec();
                            nw.extend_from_slice(&w.0);
                            add_term(&mut s, Word(nw), -c);
                        }
                        if rw.insert(s) {
                            added = true;
                            if too_long(&rw) {
                                return Err(Error::PossiblyInfinite { cap });
                            }
                            break 'pairs;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        // Enumerate irreducible paths by length.
        let mut normal: Vec<Vec<usize>> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = (0..self.arrows.len()).map(|a| vec![a]).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                if w.len() > cap {
                    return Err(Error::PossiblyInfinite { cap });
                }
                let end = self.arrows[*w.last().expect("nonempty")].target;
                for (a, arrow) in self.arrows.iter().enumerate() {
                    if arrow.source != end {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(a);
                    if rw.is_normal(&nw) {
                        next.push(nw);
                    }
                }
            }
            normal.append(&mut frontier);
            frontier = next;
        }
        normal.sort_by_key(|a| Word(a.clone()));
        self.assemble(&rw, normal)
    }

    fn assemble(&self, rw: &Rewriter, paths: Vec<Vec<usize>>) -> Result<GradedAlgebra> {
        let nv = self.vertices.len();
        let n = nv + paths.len();
        let field = self.field;
        let index: BTreeMap<Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p.clone(), nv + i)).collect();
        let mut labels = self.vertices.clone();
        labels.extend(paths.iter().map(|p| {
            p.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        }));
        let mut degrees = vec![self.group.zero(); nv];
        degrees.extend(paths.iter().map(|p| self.path_degree(p)));
        // (target, source) of each basis element
        let mut ends: Vec<(usize, usize)> = (0..nv).map(|v| (v, v)).collect();
        ends.extend(paths.iter().map(|p| self.path_ends(p).expect("paths are composable")));
        let zero_vec = vec![field.zero(); n];
        let mut products = vec![vec![zero_vec.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                // a_i * a_j: traverse a_j, then a_i
                if ends[j].0 != ends[i].1 {
                    continue;
                }
                let v = &mut products[i][j];
                if i < nv {
                    v[j] = field.one();
                } else if j < nv {
                    v[i] = field.one();
                } else {
                    let mut w = paths[j - nv].clone();
                    w.extend_from_slice(&paths[i - nv]);
                    let reduced = rw.reduce(Poly::from([(Word(w), field.one())]));
                    for (word, c) in reduced {
                        let k = index
                            .get(&word.0)
                            .ok_or_else(|| Error::InvalidAlgebra("reduction left a reducible path".into()))?;
                        v[*k] = c;
                    }
                }
            }
        }
        let mut unit = zero_vec;
        for u in unit.iter_mut().take(nv) {
            *u = field.one();
        }
        let radical = (nv..n).collect();
        let generators: Vec<usize> = (0..nv + self.arrows.len()).collect();
        let mut factorization: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
        factorization.extend(paths.iter().map(|p| p.iter().map(|&a| nv + a).collect()));
        GradedAlgebra::assemble(field, self.group.clone(), labels, degrees, products, unit, Some(radical), generators, factorization)
    }
}

/// A graded representation of a quiver: a space for each (vertex, degree)
/// and a matrix for each (arrow, source degree).
#[derive(Clone, Debug, Default)]
pub struct Representation {
    pub spaces: BTreeMap<(usize, GroupElement), usize>,
    pub maps: BTreeMap<(usize, GroupElement), Matrix>,
}

impl Representation {
    /// The module over `algebra` (compiled from `quiver`) with this
    /// representation. Relations are not checked here; `validate` reports them.
    pub fn to_module(&self, quiver: &QuiverPresentation, algebra: Arc<GradedAlgebra>) -> Result<GradedModule> {
        let nv = quiver.vertices().len();
        let group = algebra.group().clone();
        let field = algebra.field();
        if algebra.basic()?.vertex_count() != nv {
            return Err(Error::Incompatible("representation quiver differs from the algebra".into()));
        }
        let mut dims: BTreeMap<GroupElement, Vec<(usize, usize)>> = BTreeMap::new();
        for ((v, g), &d) in &self.spaces {
            if *v >= nv {
                return Err(Error::InvalidModule(format!("no vertex {v}")));
            }
            if d > 0 {
                dims.entry(group.reduce(g.coords().to_vec())).or_default().push((*v, d));
            }
        }
        let offset = |g: &GroupElement, v: usize| -> Option<(usize, usize)> {
            let parts = dims.get(g)?;
            let mut off = 0;
            for &(w, d) in parts {
                if w == v {
                    return Some((off, d));
                }
                off += d;
            }
            None
        };
        let total = |g: &GroupElement| dims.get(g).map_or(0, |p| p.iter().map(|x| x.1).sum());
        let mut actions: BTreeMap<usize, ActionBlocks> = BTreeMap::new();
        for v in 0..nv {
            let mut blocks = BTreeMap::new();
            for g in dims.keys() {
                let mut m = Matrix::zero(field, total(g), total(g));
                if let Some((off, d)) = offset(g, v) {
                    m.set_block(off, off, &Matrix::identity(field, d));
                }
                blocks.insert(g.clone(), m);
            }
            actions.insert(v, blocks);
        }
        for ((a, g), m) in &self.maps {
            let arrow = quiver
                .arrows()
                .get(*a)
                .ok_or_else(|| Error::InvalidModule(format!("no arrow {a}")))?;
            let h = group.add(g, &arrow.degree);
            let src = offset(g, arrow.source);
            let tgt = offset(&h, arrow.target);
            let expected = (tgt.map_or(0, |x| x.1), src.map_or(0, |x| x.1));
            if m.shape() != expected {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} at degree {g} has shape {:?}, expected {:?}",
                    arrow.name,
                    m.shape(),
                    expected
                )));
            }
            let (Some((so, _)), Some((to, _))) = (src, tgt) else {
                continue;
            };
            let mut block = Matrix::zero(field, total(&h), total(g));
            block.set_block(to, so, m);
            actions.entry(nv + a).or_default().insert(g.clone(), block);
        }
        let components = dims
            .iter()
            .map(|(g, parts)| {
                let labels = parts
                    .iter()
                    .flat_map(|&(v, d)| (0..d).map(move |i| format!("{}[{i}]", quiver.vertices()[v])))
                    .collect();
                (g.clone(), labels)
            })
            .collect();
        let space = GradedVectorSpace::new(group, components)?;
        GradedModule::from_generator_actions(algebra, space, &actions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn one_vertex_no_arrows_is_the_field() {
        let a = QuiverPresentation::new(Q, FgAbelianGroup::free(1), vec!["e".into()]).compile(4).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.degree(0), &GroupElement::new(vec![0]));
        assert!(a.validate().is_ok());
    }

    #[test]
    fn dual_numbers_table() {
        let a = fixtures::dual_numbers(Q).unwrap().algebra;
        assert_eq!(a.labels(), ["e", "x"]);
        let x = a.index_of("x").unwrap();
        assert!(a.product(x, x).iter().all(Scalar::is_zero));
        assert!(a.product(0, x)[x].is_one());
        assert!(a.validate().is_ok());
    }

    #[test]
    fn kronecker_has_four_paths() {
        let a = fixtures::kronecker(Q).unwrap().algebra;
        assert_eq!(a.labels(), ["1", "2", "a", "b"]);
        assert_eq!(a.degree(2), &GroupElement::new(vec![1, 0]));
        assert!(a.validate().is_ok());
    }

    #[test]
    fn square_and_exterior_dimensions() {
        let sq = fixtures::commutative_square(Q).unwrap().algebra;
        // 4 vertices, 4 arrows, one surviving length-2 path
        assert_eq!(sq.dim(), 9);
        assert!(sq.validate().is_ok());
        let ext = fixtures::exterior_pair(FieldSpec::prime(3).unwrap()).unwrap().algebra;
        assert_eq!(ext.dim(), 4);
        assert!(ext.validate().is_ok());
    }

    #[test]
    fn free_loop_is_possibly_infinite() {
        let mut q = QuiverPresentation::new(Q, FgAbelianGroup::free(1), vec!["e".into()]);
        q.add_arrow("x", 0, 0, GroupElement::new(vec![1])).unwrap();
        assert_eq!(q.compile(5), Err(Error::PossiblyInfinite { cap: 5 }));
    }

    #[test]
    fn rejects_bad_relations() {
        let mut q = QuiverPresentation::new(Q, FgAbelianGroup::free(1), vec!["e".into()]);
        q.add_arrow("x", 0, 0, GroupElement::new(vec![1])).unwrap();
        q.add_arrow("y", 0, 0, GroupElement::new(vec![2])).unwrap();
        let mut bad = q.clone();
        bad.add_relation(&[(Q.one(), vec!["x", "x"]), (Q.one(), vec!["x", "y"])]).unwrap();
        assert!(matches!(bad.compile(5), Err(Error::NonHomogeneousRelation(_))));
        let mut short = q.clone();
        short.add_relation(&[(Q.one(), vec!["x"])]).unwrap();
        assert!(matches!(short.compile(5), Err(Error::InadmissibleRelation(_))));
    }

    #[test]
    fn completion_adds_overlap_rules() {
        // x^2 = y x and x y = 0 force more relations; the result must stay associative.
        let mut q = QuiverPresentation::new(Q, FgAbelianGroup::free(1), vec!["e".into()]);
        q.add_arrow("x", 0, 0, GroupElement::new(vec![1])).unwrap();
        q.add_arrow("y", 0, 0, GroupElement::new(vec![1])).unwrap();
        q.add_relation(&[(Q.one(), vec!["x", "x"]), (Q.from_i64(-1), vec!["y", "x"])]).unwrap();
        q.add_relation(&[(Q.one(), vec!["y", "y"])]).unwrap();
        q.add_relation(&[(Q.one(), vec!["x", "y"])]).unwrap();
        let a = q.compile(8).unwrap();
        assert!(a.validate().is_ok());
    }

    #[test]
    fn representation_of_kronecker() {
        let fx = fixtures::kronecker(Q).unwrap();
        let mut rep = Representation::default();
        let g0 = GroupElement::new(vec![0, 0]);
        rep.spaces.insert((0, g0.clone()), 1);
        rep.spaces.insert((1, GroupElement::new(vec![1, 0])), 1);
        rep.maps.insert((0, g0), Matrix::from_i64(Q, &[vec![1]]));
        let m = rep.to_module(&fx.quiver, fx.algebra.clone()).unwrap();
        assert_eq!(m.total_dim(), 2);
        assert!(m.validate().is_ok());
    }
}
