use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::linalg::{Matrix, Scalar, SubspaceBasis};

use super::map::GradedMap;
use super::module::{same_algebra, GradedModule};

/// A basis of the degree-zero maps `M -> N`, with coordinates.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    // (degree, offset of the block in the flattened vector)
    layout: Vec<(GroupElement, usize)>,
    unknowns: usize,
    basis: Vec<GradedMap>,
    coordinates: Option<SubspaceBasis>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GradedMap] {
        &self.basis
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    fn flatten(&self, f: &GradedMap) -> Vec<Scalar> {
        let field = self.source.field();
        let mut v = vec![field.zero(); self.unknowns];
        for (g, offset) in &self.layout {
            let block = f.block(g);
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    v[offset + r * block.cols() + c] = block[(r, c)].clone();
                }
            }
        }
        v
    }

    /// Coordinates of `f` in the basis, or `None` if `f` is not a graded
    /// module map `M -> N` of trivial degree.
    pub fn coordinates(&self, f: &GradedMap) -> Result<Option<Vec<Scalar>>> {
        if !f.source().same_structure(&self.source) || !f.target().same_structure(&self.target) {
            return Err(Error::Incompatible("map does not belong to this Hom space".into()));
        }
        if f.degree() != &self.source.group().zero() {
            return Ok(None);
        }
        let Some(coords) = &self.coordinates else {
            return Ok(f.is_zero().then(Vec::new));
        };
        let v = Matrix::from_columns(self.source.field(), self.unknowns, &[self.flatten(f)]);
        Ok(coords.coordinates_checked(&v)?.map(|c| c.column(0)))
    }
}

/// Degree-zero module maps `M -> N`, found by solving the commutation
/// equations with the algebra generators.
pub fn hom_space(m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> Result<HomSpace> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::Incompatible("Hom between modules over different algebras".into()));
    }
    let algebra = m.algebra();
    let group = m.group();
    let field = m.field();
    let mut layout = Vec::new();
    let mut offsets = BTreeMap::new();
    let mut unknowns = 0;
    for g in m.support() {
        let size = m.dim(&g) * n.dim(&g);
        if size > 0 {
            offsets.insert(g.clone(), unknowns);
            layout.push((g, unknowns));
            unknowns += size;
        }
    }
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for &i in algebra.generators() {
        let d = algebra.degree(i);
        for g in m.support() {
            let h = group.add(&g, d);
            let (nm_g, nn_h) = (m.dim(&g), n.dim(&h));
            if nn_h == 0 {
                continue;
            }
            let am = m.action(i).get(&g);
            let an = n.action(i).get(&g);
            let f_h = offsets.get(&h);
            let f_g = offsets.get(&g);
            // (F_h A^M - A^N F_g)[r][c] = 0
            for r in 0..nn_h {
                for c in 0..nm_g {
                    let mut row = Vec::new();
                    if let (Some(&off), Some(a)) = (f_h, am) {
                        let cols = m.dim(&h);
                        for s in 0..cols {
                            let x = &a[(s, c)];
                            if !x.is_zero() {
                                row.push((off + r * cols + s, x.clone()));
                            }
                        }
                    }
                    if let (Some(&off), Some(a)) = (f_g, an) {
                        let inner = n.dim(&g);
                        for s in 0..inner {
                            let x = &a[(r, s)];
                            if !x.is_zero() {
                                row.push((off + s * nm_g + c, -x));
                            }
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let mut system = Matrix::zero(field, rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row {
            let acc = &system[(r, *c)] + x;
            system.set(r, *c, acc);
        }
    }
    let kernel = system.kernel_basis();
    let mut basis = Vec::with_capacity(kernel.cols());
    for k in 0..kernel.cols() {
        let v = kernel.column(k);
        let mut blocks = BTreeMap::new();
        for (g, off) in &layout {
            let (rows, cols) = (n.dim(g), m.dim(g));
            let mut b = Matrix::zero(field, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    b.set(r, c, v[off + r * cols + c].clone());
                }
            }
            blocks.insert(g.clone(), b);
        }
        basis.push(GradedMap::new(m.clone(), n.clone(), group.zero(), blocks)?);
    }
    let coordinates = if kernel.cols() > 0 { Some(SubspaceBasis::new(kernel)?) } else { None };
    Ok(HomSpace { source: m.clone(), target: n.clone(), layout, unknowns, basis, coordinates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::FieldSpec;

    fn g(x: i64) -> GroupElement {
        GroupElement::new(vec![x])
    }

    #[test]
    fn endomorphisms_of_dual_numbers() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = Arc::new(GradedModule::regular(a).unwrap());
        let h = hom_space(&m, &m).unwrap();
        assert_eq!(h.dim(), 1);
        let id = GradedMap::identity(m.clone());
        assert!(h.coordinates(&id).unwrap().is_some());
        assert!(h.basis().iter().all(|f| f.validate().is_ok()));
    }

    #[test]
    fn disjoint_supports_give_zero() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let s0 = Arc::new(GradedModule::simple(a.clone(), 0, &g(0)).unwrap());
        let s1 = Arc::new(GradedModule::simple(a, 0, &g(1)).unwrap());
        assert_eq!(hom_space(&s0, &s1).unwrap().dim(), 0);
        assert_eq!(hom_space(&s0, &s0).unwrap().dim(), 1);
    }

    #[test]
    fn hom_from_projective_counts_vertex_component() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let zero = a.group().zero();
        let p1 = Arc::new(GradedModule::projective(a.clone(), 0, &zero).unwrap());
        let reg = Arc::new(GradedModule::regular(a).unwrap());
        // Hom(A e_1, A) = e_1 A in degree zero: only e_1.
        assert_eq!(hom_space(&p1, &reg).unwrap().dim(), 1);
    }
}
