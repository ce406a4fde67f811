use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{quotient, submodule, GradedMap, GradedModule};
use crate::groups::GroupElement;
use crate::linalg::{Matrix, Scalar};

use super::free::FreeModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "cap", rename_all = "snake_case")]
pub enum ResolutionStatus {
    /// The last syzygy is zero.
    Terminated,
    /// Stopped after computing `P_cap`; the next syzygy is nonzero.
    Truncated(usize),
}

/// `J M`, `M / J M` and the projection onto the top.
#[derive(Clone, Debug)]
pub struct TopAndRadical {
    pub top: Arc<GradedModule>,
    pub radical: Arc<GradedModule>,
    pub projection: GradedMap,
}

// Basis (columns) of (J M)_g for every degree g of the support.
fn radical_spans(m: &GradedModule) -> Result<BTreeMap<GroupElement, Matrix>> {
    let algebra = m.algebra();
    let radical = algebra
        .radical()
        .ok_or_else(|| Error::NoRadical("a designated radical is needed for tops and covers".into()))?;
    let group = m.group();
    let mut spans = BTreeMap::new();
    for g in m.support() {
        let mut span = Matrix::zero(m.field(), m.dim(&g), 0);
        for &r in radical {
            let src = group.sub(&g, algebra.degree(r));
            if m.dim(&src) > 0 {
                span = span.hstack(&m.act(r, &src))?;
            }
        }
        spans.insert(g, span.column_space());
    }
    Ok(spans)
}

pub fn top_and_radical(m: &Arc<GradedModule>) -> Result<TopAndRadical> {
    let spans = radical_spans(m)?;
    let radical = submodule(m, &spans)?;
    let (top, projection) = quotient(m, &spans)?;
    Ok(TopAndRadical { top, radical, projection })
}

/// Generators of a projective cover: for each vertex and degree, vectors of
/// `e_v M_g` complementing `e_v (J M)_g`.
fn cover_generators(m: &GradedModule) -> Result<Vec<(usize, GroupElement, Vec<Scalar>)>> {
    let algebra = m.algebra();
    let basic = algebra.basic()?;
    let spans = radical_spans(m)?;
    let mut generators = Vec::new();
    for g in m.support() {
        let rad = &spans[&g];
        for (v, &e) in basic.idempotents.iter().enumerate() {
            let ev = m.act(e, &g);
            let part = ev.column_space();
            if part.cols() == 0 {
                continue;
            }
            let rad_part = ev.mul(rad)?.column_space();
            let extended = rad_part.hstack(&part)?;
            for p in extended.independent_columns() {
                if p >= rad_part.cols() {
                    generators.push((v, g.clone(), part.column(p - rad_part.cols())));
                }
            }
        }
    }
    Ok(generators)
}

/// A minimal graded projective resolution `... -> P_1 -> P_0 -> M`.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    target: Arc<GradedModule>,
    terms: Vec<FreeModule>,
    /// `differentials[0]: P_0 -> M`, `differentials[i]: P_i -> P_{i-1}`.
    differentials: Vec<GradedMap>,
    /// `Ω^{i+1} = ker(P_i -> ...)` with its inclusion into `P_i`.
    syzygies: Vec<(Arc<GradedModule>, GradedMap)>,
    status: ResolutionStatus,
}

impl MinimalResolution {
    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn terms(&self) -> &[FreeModule] {
        &self.terms
    }

    pub fn differentials(&self) -> &[GradedMap] {
        &self.differentials
    }

    pub fn syzygies(&self) -> &[(Arc<GradedModule>, GradedMap)] {
        &self.syzygies
    }

    pub fn status(&self) -> ResolutionStatus {
        self.status
    }

    /// Length when terminated.
    pub fn length(&self) -> Option<usize> {
        match self.status {
            ResolutionStatus::Terminated => Some(self.terms.len().saturating_sub(1)),
            ResolutionStatus::Truncated(_) => None,
        }
    }

    /// `(vertex, shift)` of each summand of `P_i`.
    pub fn summands(&self, i: usize) -> &[(usize, GroupElement)] {
        self.terms[i].summands()
    }
}

/// Iterated projective covers, computing `P_0, ..., P_cap` at most. The
/// resolution is terminated when a syzygy vanishes; with `cap = 0` only the
/// cover `P_0` is computed.
pub fn minimal_resolution(m: &Arc<GradedModule>, cap: usize) -> Result<MinimalResolution> {
    let algebra = m.algebra().clone();
    algebra.basic()?;
    let mut terms = Vec::new();
    let mut differentials = Vec::new();
    let mut syzygies = Vec::new();
    if m.is_zero() {
        return Ok(MinimalResolution {
            target: m.clone(),
            terms,
            differentials,
            syzygies,
            status: ResolutionStatus::Terminated,
        });
    }
    // current syzygy and the map that embeds it into the previous term (or M)
    let mut current = m.clone();
    let mut embedding = GradedMap::identity(m.clone());
    let mut status = ResolutionStatus::Truncated(cap);
    for i in 0..=cap {
        let gens = cover_generators(&current)?;
        let summands = gens.iter().map(|(v, g, _)| (*v, current.group().neg(g))).collect();
        let free = FreeModule::new(algebra.clone(), summands)?;
        let images: Vec<Vec<Scalar>> = gens.into_iter().map(|(_, _, x)| x).collect();
        let cover = free.map_to(&current, &images)?;
        let differential = cover.then(&embedding)?;
        let (kernel, inclusion) = cover.kernel()?;
        terms.push(free);
        differentials.push(differential);
        syzygies.push((kernel.clone(), inclusion.clone()));
        if kernel.is_zero() {
            status = ResolutionStatus::Terminated;
            break;
        }
        if i == cap {
            break;
        }
        current = kernel;
        embedding = inclusion;
    }
    Ok(MinimalResolution { target: m.clone(), terms, differentials, syzygies, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::FieldSpec;

    fn z(x: i64) -> GroupElement {
        GroupElement::new(vec![x])
    }

    #[test]
    fn top_of_dual_numbers() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = Arc::new(GradedModule::regular(a.clone()).unwrap());
        let t = top_and_radical(&m).unwrap();
        assert_eq!(t.top.dims(), BTreeMap::from([(z(0), 1)]));
        assert_eq!(t.radical.dims(), BTreeMap::from([(z(1), 1)]));
        let s = Arc::new(GradedModule::simple(a.clone(), 0, &z(0)).unwrap());
        assert_eq!(top_and_radical(&s).unwrap().top.dims(), s.dims());
        let zero = Arc::new(GradedModule::zero(a));
        assert!(top_and_radical(&zero).unwrap().top.is_zero());
    }

    #[test]
    fn simple_over_dual_numbers_never_terminates() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let s = Arc::new(GradedModule::simple(a, 0, &z(0)).unwrap());
        let r = minimal_resolution(&s, 5).unwrap();
        assert_eq!(r.status(), ResolutionStatus::Truncated(5));
        assert_eq!(r.terms().len(), 6);
        for i in 0..=5 {
            assert_eq!(r.summands(i), &[(0, z(-(i as i64)))]);
        }
        for w in r.differentials().windows(2) {
            assert!(w[1].then(&w[0]).unwrap().is_zero());
        }
    }

    #[test]
    fn kronecker_simple_has_length_one() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let s1 = Arc::new(GradedModule::simple(a.clone(), 0, &a.group().zero()).unwrap());
        let r = minimal_resolution(&s1, 4).unwrap();
        assert_eq!(r.length(), Some(1));
        let mut p1 = r.summands(1).to_vec();
        p1.sort();
        assert_eq!(p1, vec![(1, GroupElement::new(vec![-1, 0])), (1, GroupElement::new(vec![0, -1]))]);
    }

    #[test]
    fn projective_resolves_in_length_zero() {
        let a = fixtures::commutative_square(FieldSpec::Rationals).unwrap().algebra;
        let p = Arc::new(GradedModule::projective(a.clone(), 0, &GroupElement::new(vec![2, -1])).unwrap());
        let r = minimal_resolution(&p, 3).unwrap();
        assert_eq!(r.length(), Some(0));
        assert!(r.differentials()[0].is_isomorphism());
    }

    #[test]
    fn cap_zero_computes_the_cover_only() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let s = Arc::new(GradedModule::simple(a, 0, &z(0)).unwrap());
        let r = minimal_resolution(&s, 0).unwrap();
        assert_eq!(r.status(), ResolutionStatus::Truncated(0));
        assert_eq!(r.terms().len(), 1);
    }
}
