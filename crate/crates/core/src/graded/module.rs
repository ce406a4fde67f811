use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{FgAbelianGroup, GroupElement};
use crate::linalg::{FieldSpec, Matrix, Scalar};

use super::algebra::GradedAlgebra;
use super::space::GradedVectorSpace;

/// Action blocks of one algebra basis element, keyed by source degree.
pub type ActionBlocks = BTreeMap<GroupElement, Matrix>;

/// A finite-dimensional graded left module. Basis element `a_i` of degree `d`
/// acts by a matrix `M_g -> M_{g+d}` for each `g` in the support; absent blocks
/// are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    algebra: Arc<GradedAlgebra>,
    space: GradedVectorSpace,
    action: Vec<ActionBlocks>,
}

pub(crate) fn same_algebra(a: &Arc<GradedAlgebra>, b: &Arc<GradedAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GradedModule {
    /// Checks shapes and degree bookkeeping; the module axioms are checked by
    /// `validate`.
    pub fn new(algebra: Arc<GradedAlgebra>, space: GradedVectorSpace, action: Vec<ActionBlocks>) -> Result<Self> {
        if space.group() != algebra.group() {
            return Err(Error::Incompatible(format!(
                "module graded by {}, algebra by {}",
                space.group(),
                algebra.group()
            )));
        }
        if action.len() != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "action given for {} basis elements, algebra has {}",
                action.len(),
                algebra.dim()
            )));
        }
        let group = algebra.group().clone();
        let mut cleaned = Vec::with_capacity(action.len());
        for (i, blocks) in action.into_iter().enumerate() {
            let d = algebra.degree(i);
            let mut kept = BTreeMap::new();
            for (g, m) in blocks {
                let h = group.add(&g, d);
                let expected = (space.dim(&h), space.dim(&g));
                if m.shape() != expected {
                    return Err(Error::DimensionMismatch(format!(
                        "action of {} at degree {g} has shape {:?}, expected {:?}",
                        algebra.label(i),
                        m.shape(),
                        expected
                    )));
                }
                if m.field() != algebra.field() {
                    return Err(Error::InvalidModule(format!("action matrix outside {}", algebra.field())));
                }
                if !m.is_zero() {
                    kept.insert(g, m);
                }
            }
            cleaned.push(kept);
        }
        Ok(GradedModule { algebra, space, action: cleaned })
    }

    /// Builds the full action from the action of the algebra's generators,
    /// composing along each basis element's factorization.
    pub fn from_generator_actions(
        algebra: Arc<GradedAlgebra>,
        space: GradedVectorSpace,
        generator_actions: &BTreeMap<usize, ActionBlocks>,
    ) -> Result<Self> {
        let group = algebra.group().clone();
        let field = algebra.field();
        let empty = BTreeMap::new();
        let mut action = Vec::with_capacity(algebra.dim());
        for b in 0..algebra.dim() {
            let mut blocks = BTreeMap::new();
            for g in space.support() {
                let mut current = Matrix::identity(field, space.dim(g));
                let mut degree = g.clone();
                for &f in algebra.factorization(b) {
                    let next = group.add(&degree, algebra.degree(f));
                    let step = match generator_actions.get(&f).unwrap_or(&empty).get(&degree) {
                        Some(m) => m.clone(),
                        None => Matrix::zero(field, space.dim(&next), space.dim(&degree)),
                    };
                    current = step.mul(&current)?;
                    degree = next;
                }
                blocks.insert(g.clone(), current);
            }
            action.push(blocks);
        }
        Self::new(algebra, space, action)
    }

    pub fn zero(algebra: Arc<GradedAlgebra>) -> Self {
        let n = algebra.dim();
        let space = GradedVectorSpace::zero(algebra.group().clone());
        GradedModule { algebra, space, action: vec![BTreeMap::new(); n] }
    }

    /// `A e_v` shifted by `shift`: the generator `e_v` sits in degree `-shift`.
    pub fn projective(algebra: Arc<GradedAlgebra>, vertex: usize, shift: &GroupElement) -> Result<Self> {
        let basic = algebra.basic()?.clone();
        if vertex >= basic.vertex_count() {
            return Err(Error::InvalidModule(format!("no vertex {vertex}")));
        }
        let indices: Vec<usize> = (0..algebra.dim()).filter(|&b| basic.source(b) == vertex).collect();
        Self::from_left_ideal(algebra, &indices, shift)
    }

    /// The algebra as a left module over itself.
    pub fn regular(algebra: Arc<GradedAlgebra>) -> Result<Self> {
        let indices: Vec<usize> = (0..algebra.dim()).collect();
        let zero = algebra.group().zero();
        Self::from_left_ideal(algebra, &indices, &zero)
    }

    // `indices` must span a left ideal.
    fn from_left_ideal(algebra: Arc<GradedAlgebra>, indices: &[usize], shift: &GroupElement) -> Result<Self> {
        let group = algebra.group().clone();
        let field = algebra.field();
        let mut components: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
        for &b in indices {
            components.entry(group.sub(algebra.degree(b), shift)).or_default().push(b);
        }
        let position = |g: &GroupElement, b: usize| components.get(g).and_then(|v| v.iter().position(|&x| x == b));
        let mut action = Vec::with_capacity(algebra.dim());
        for i in 0..algebra.dim() {
            let mut blocks = BTreeMap::new();
            for (g, basis) in &components {
                let h = group.add(g, algebra.degree(i));
                let rows = components.get(&h).map_or(0, Vec::len);
                let mut m = Matrix::zero(field, rows, basis.len());
                for (c, &b) in basis.iter().enumerate() {
                    for (k, coeff) in algebra.product(i, b).iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let r = position(&h, k).ok_or_else(|| {
                            Error::InvalidModule("basis subset is not a left ideal".into())
                        })?;
                        m.set(r, c, coeff.clone());
                    }
                }
                blocks.insert(g.clone(), m);
            }
            action.push(blocks);
        }
        let labels = components
            .iter()
            .map(|(g, v)| (g.clone(), v.iter().map(|&b| algebra.label(b).to_string()).collect()))
            .collect();
        let space = GradedVectorSpace::new(group, labels)?;
        Self::new(algebra, space, action)
    }

    /// The simple module at `vertex`, concentrated in degree `-shift`.
    pub fn simple(algebra: Arc<GradedAlgebra>, vertex: usize, shift: &GroupElement) -> Result<Self> {
        let basic = algebra.basic()?;
        let Some(&e) = basic.idempotents.get(vertex) else {
            return Err(Error::InvalidModule(format!("no vertex {vertex}")));
        };
        let group = algebra.group().clone();
        let g = group.neg(shift);
        let label = format!("S{}", algebra.label(e));
        let space = GradedVectorSpace::new(group, BTreeMap::from([(g.clone(), vec![label])]))?;
        let mut action = vec![BTreeMap::new(); algebra.dim()];
        action[e].insert(g, Matrix::identity(algebra.field(), 1));
        Self::new(algebra, space, action)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn group(&self) -> &FgAbelianGroup {
        self.algebra.group()
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn dim(&self, g: &GroupElement) -> usize {
        self.space.dim(g)
    }

    pub fn dims(&self) -> BTreeMap<GroupElement, usize> {
        self.space.dims()
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.space.support().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn action(&self, i: usize) -> &ActionBlocks {
        &self.action[i]
    }

    /// Matrix of `a_i : M_g -> M_{g + deg a_i}`, zero when not stored.
    pub fn act(&self, i: usize, g: &GroupElement) -> Matrix {
        match self.action[i].get(g) {
            Some(m) => m.clone(),
            None => {
                let h = self.group().add(g, self.algebra.degree(i));
                Matrix::zero(self.field(), self.dim(&h), self.dim(g))
            }
        }
    }

    /// Action of an arbitrary algebra element on `M_g`; the element must be
    /// homogeneous of degree `d`.
    pub fn act_element(&self, x: &[Scalar], d: &GroupElement, g: &GroupElement) -> Matrix {
        let h = self.group().add(g, d);
        let mut m = Matrix::zero(self.field(), self.dim(&h), self.dim(g));
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                if let Some(block) = self.action[i].get(g) {
                    m = m.add(&block.scale(c)).expect("shapes agree for homogeneous elements");
                }
            }
        }
        m
    }

    /// Same data, same algebra, ignoring basis labels.
    pub fn same_structure(&self, other: &GradedModule) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.dims() == other.dims() && self.action == other.action
    }

    /// `M(s)` with `M(s)_g = M_{g+s}`; the action matrices are unchanged.
    pub fn shift(&self, s: &GroupElement) -> GradedModule {
        let group = self.group();
        let action = self
            .action
            .iter()
            .map(|blocks| blocks.iter().map(|(g, m)| (group.sub(g, s), m.clone())).collect())
            .collect();
        GradedModule { algebra: self.algebra.clone(), space: self.space.shift(s), action }
    }

    /// `D(M)` over the opposite algebra, with `D(M)_g = (M_{-g})^*` and the
    /// transposed action.
    pub fn dual(&self) -> GradedModule {
        self.dual_over(Arc::new(self.algebra.opposite()))
    }

    /// `D(M)` over a caller-supplied copy of the opposite algebra, so that
    /// duals of several modules share one algebra.
    pub fn dual_over(&self, opposite: Arc<GradedAlgebra>) -> GradedModule {
        let group = self.group().clone();
        let components = self
            .space
            .components()
            .iter()
            .map(|(g, labels)| (group.neg(g), labels.iter().map(|l| format!("{l}*")).collect()))
            .collect();
        let space = GradedVectorSpace::new(group.clone(), components).expect("negated degrees stay in the group");
        let action = self
            .action
            .iter()
            .enumerate()
            .map(|(i, blocks)| {
                // a_i maps M_{-g-d} -> M_{-g}; its transpose maps D(M)_g -> D(M)_{g+d}.
                let d = self.algebra.degree(i);
                blocks
                    .iter()
                    .map(|(src, m)| (group.neg(&group.add(src, d)), m.transpose()))
                    .collect()
            })
            .collect();
        GradedModule { algebra: opposite, space, action }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn g(x: i64) -> GroupElement {
        GroupElement::new(vec![x])
    }

    #[test]
    fn shift_moves_support() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = GradedModule::regular(a).unwrap();
        assert_eq!(m.support(), vec![g(0), g(1)]);
        assert_eq!(m.shift(&g(1)).support(), vec![g(-1), g(0)]);
        assert_eq!(m.shift(&g(0)), m);
        assert_eq!(m.shift(&g(3)).shift(&g(-3)), m);
        assert!(m.shift(&g(2)).validate().is_ok());
    }

    #[test]
    fn dual_of_dual_numbers() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = GradedModule::regular(a.clone()).unwrap();
        let d = m.dual();
        assert_eq!(d.support(), vec![g(-1), g(0)]);
        assert!(d.validate().is_ok());
        let dd = d.dual();
        assert_eq!(dd.dims(), m.dims());
        assert!(dd.same_structure(&m));
        assert!(GradedModule::zero(a).dual().is_zero());
    }

    #[test]
    fn projective_and_simple_over_kronecker() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let zero = a.group().zero();
        let p1 = GradedModule::projective(a.clone(), 0, &zero).unwrap();
        let p2 = GradedModule::projective(a.clone(), 1, &zero).unwrap();
        assert_eq!((p1.total_dim(), p2.total_dim()), (3, 1));
        assert!(p1.validate().is_ok());
        let s = GradedModule::simple(a, 0, &GroupElement::new(vec![-1, 0])).unwrap();
        assert_eq!(s.support(), vec![GroupElement::new(vec![1, 0])]);
        assert!(s.validate().is_ok());
    }
}
