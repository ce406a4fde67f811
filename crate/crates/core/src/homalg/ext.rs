use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{hom_space, GradedMap, GradedModule};
use crate::linalg::Matrix;

use super::free::FreeModule;
use super::resolution::{minimal_resolution, MinimalResolution, ResolutionStatus};

/// `dim Ext^i(M, N)` in the graded category (degree-zero maps).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtResult {
    pub degree: usize,
    pub dim: usize,
    /// The resolution used stopped at its cap. The value is still exact: it
    /// only needs the syzygy `Ω^{i+1}`, which is always computed.
    pub truncated: bool,
    #[serde(skip)]
    pub basis: Option<Vec<GradedMap>>,
}

/// Coordinates for `Hom(P, N) = ⊕_j e_{v_j} N_{g_j}`: one basis matrix per generator.
fn hom_from_free(free: &FreeModule, n: &GradedModule) -> Vec<Matrix> {
    let algebra = n.algebra();
    let basic = algebra.basic().expect("free modules need vertex data");
    free.summands()
        .iter()
        .enumerate()
        .map(|(j, (v, _))| {
            let g = free.generator_degree(j);
            n.act(basic.idempotents[*v], &g).column_space()
        })
        .collect()
}

/// `dim {f : P_i -> N | f vanishes on Ω^{i+1}}` given the hom coordinates.
fn cocycle_dim(free: &FreeModule, syzygy: &GradedMap, n: &GradedModule, hom: &[Matrix]) -> Result<usize> {
    let unknowns: usize = hom.iter().map(Matrix::cols).sum();
    if unknowns == 0 {
        return Ok(0);
    }
    let offsets: Vec<usize> = hom
        .iter()
        .scan(0, |acc, m| {
            let o = *acc;
            *acc += m.cols();
            Some(o)
        })
        .collect();
    let field = n.field();
    let mut system = Matrix::zero(field, 0, unknowns);
    for (g, inc) in syzygy.blocks() {
        // f(ω) for every basis vector ω of Ω^{i+1}_g
        let mut block = Matrix::zero(field, n.dim(g) * inc.cols(), unknowns);
        for (c, &(j, b)) in free.columns(g).iter().enumerate() {
            if hom[j].cols() == 0 {
                continue;
            }
            let acted = n.act(b, &free.generator_degree(j)).mul(&hom[j])?;
            for w in 0..inc.cols() {
                let coeff = &inc[(c, w)];
                if coeff.is_zero() {
                    continue;
                }
                for r in 0..acted.rows() {
                    for u in 0..acted.cols() {
                        let row = w * n.dim(g) + r;
                        let col = offsets[j] + u;
                        let x = &block[(row, col)] + &(coeff * &acted[(r, u)]);
                        block.set(row, col, x);
                    }
                }
            }
        }
        system = system.vstack(&block)?;
    }
    Ok(unknowns - system.rank())
}

/// `Ext^i(M, N)` from the minimal resolution of `M` computed up to `cap`.
pub fn graded_ext(m: &Arc<GradedModule>, n: &Arc<GradedModule>, i: usize, cap: usize) -> Result<ExtResult> {
    if i > cap {
        return Err(Error::Unsupported(format!("Ext^{i} needs cap at least {i}, got {cap}")));
    }
    let res = minimal_resolution(m, cap)?;
    ext_from_resolution(&res, n, i)
}

/// `Ext^i(M, N)` for every `i` up to the resolution's cap.
pub fn ext_dims(res: &MinimalResolution, n: &Arc<GradedModule>) -> Result<Vec<usize>> {
    (0..res.terms().len()).map(|i| Ok(ext_from_resolution(res, n, i)?.dim)).collect()
}

/// `dim Ext^i = dim Z^i - (dim Hom(P_{i-1}, N) - dim Z^{i-1})` where `Z^i`
/// are the maps `P_i -> N` killing `Ω^{i+1}`.
pub fn ext_from_resolution(res: &MinimalResolution, n: &Arc<GradedModule>, i: usize) -> Result<ExtResult> {
    let m = res.target();
    if m.algebra().as_ref() != n.algebra().as_ref() {
        return Err(Error::Incompatible("Ext between modules over different algebras".into()));
    }
    let truncated = matches!(res.status(), ResolutionStatus::Truncated(_));
    let basis = if i == 0 { Some(hom_space(m, n)?.basis().to_vec()) } else { None };
    let terms = res.terms();
    if i >= terms.len() {
        if let ResolutionStatus::Truncated(cap) = res.status() {
            return Err(Error::Unsupported(format!("Ext^{i} needs cap at least {i}, got {cap}")));
        }
        return Ok(ExtResult { degree: i, dim: 0, truncated, basis });
    }
    let z = |k: usize| -> Result<(usize, usize)> {
        let hom = hom_from_free(&terms[k], n);
        let total = hom.iter().map(Matrix::cols).sum();
        Ok((cocycle_dim(&terms[k], &res.syzygies()[k].1, n, &hom)?, total))
    };
    let (zi, _) = z(i)?;
    let dim = if i == 0 {
        zi
    } else {
        let (zp, hp) = z(i - 1)?;
        zi - (hp - zp)
    };
    Ok(ExtResult { degree: i, dim, truncated, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::groups::GroupElement;
    use crate::linalg::FieldSpec;

    fn z(x: i64) -> GroupElement {
        GroupElement::new(vec![x])
    }

    #[test]
    fn ext_zero_is_hom() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = Arc::new(GradedModule::regular(a.clone()).unwrap());
        let s = Arc::new(GradedModule::simple(a, 0, &z(0)).unwrap());
        for (x, y) in [(&m, &m), (&m, &s), (&s, &m), (&s, &s)] {
            let e = graded_ext(x, y, 0, 2).unwrap();
            assert_eq!(e.dim, hom_space(x, y).unwrap().dim());
        }
    }

    #[test]
    fn ext_one_between_shifted_simples() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let s = Arc::new(GradedModule::simple(a.clone(), 0, &z(0)).unwrap());
        let s1 = Arc::new(GradedModule::simple(a.clone(), 0, &z(-1)).unwrap());
        // S(-1) sits in degree 1, where the first syzygy is generated.
        assert_eq!(graded_ext(&s, &s1, 1, 3).unwrap().dim, 1);
        assert_eq!(graded_ext(&s, &s, 1, 3).unwrap().dim, 0);
        let s2 = Arc::new(GradedModule::simple(a, 0, &z(-2)).unwrap());
        assert_eq!(graded_ext(&s, &s2, 2, 3).unwrap().dim, 1);
    }

    #[test]
    fn projective_source_has_no_higher_ext() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let p = Arc::new(GradedModule::projective(a.clone(), 0, &a.group().zero()).unwrap());
        let s = Arc::new(GradedModule::simple(a.clone(), 1, &GroupElement::new(vec![-1, 0])).unwrap());
        for i in 1..=3 {
            assert_eq!(graded_ext(&p, &s, i, 3).unwrap().dim, 0);
        }
    }

    #[test]
    fn kronecker_ext_one() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let s1 = Arc::new(GradedModule::simple(a.clone(), 0, &a.group().zero()).unwrap());
        let s2 = Arc::new(GradedModule::simple(a, 1, &GroupElement::new(vec![-1, 0])).unwrap());
        assert_eq!(graded_ext(&s1, &s2, 1, 3).unwrap().dim, 1);
    }
}
