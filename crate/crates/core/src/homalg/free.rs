use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{ActionBlocks, GradedAlgebra, GradedMap, GradedModule, GradedVectorSpace};
use crate::groups::GroupElement;
use crate::linalg::{Matrix, Scalar};

/// `⊕_j P_{v_j}(s_j)`, a direct sum of shifted indecomposable projectives
/// `P_v = A e_v`, with its basis `(summand, algebra basis element)`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    summands: Vec<(usize, GroupElement)>,
    module: Arc<GradedModule>,
    columns: BTreeMap<GroupElement, Vec<(usize, usize)>>,
    position: HashMap<(usize, usize), usize>,
}

impl FreeModule {
    pub fn new(algebra: Arc<GradedAlgebra>, summands: Vec<(usize, GroupElement)>) -> Result<Self> {
        let basic = algebra.basic()?.clone();
        let group = algebra.group().clone();
        let field = algebra.field();
        let mut columns: BTreeMap<GroupElement, Vec<(usize, usize)>> = BTreeMap::new();
        for (j, (v, s)) in summands.iter().enumerate() {
            if *v >= basic.vertex_count() {
                return Err(Error::InvalidModule(format!("no vertex {v}")));
            }
            for b in (0..algebra.dim()).filter(|&b| basic.source(b) == *v) {
                columns.entry(group.sub(algebra.degree(b), s)).or_default().push((j, b));
            }
        }
        let mut position = HashMap::new();
        for cols in columns.values() {
            for (p, &jb) in cols.iter().enumerate() {
                position.insert(jb, p);
            }
        }
        let mut action: Vec<ActionBlocks> = Vec::with_capacity(algebra.dim());
        for i in 0..algebra.dim() {
            let mut blocks = BTreeMap::new();
            for (g, cols) in &columns {
                let h = group.add(g, algebra.degree(i));
                let rows = columns.get(&h).map_or(0, Vec::len);
                let mut m = Matrix::zero(field, rows, cols.len());
                for (c, &(j, b)) in cols.iter().enumerate() {
                    for (k, coeff) in algebra.product(i, b).iter().enumerate() {
                        if !coeff.is_zero() {
                            m.set(position[&(j, k)], c, coeff.clone());
                        }
                    }
                }
                blocks.insert(g.clone(), m);
            }
            action.push(blocks);
        }
        let labels = columns
            .iter()
            .map(|(g, cols)| (g.clone(), cols.iter().map(|&(j, b)| format!("{}#{j}", algebra.label(b))).collect()))
            .collect();
        let space = GradedVectorSpace::new(group, labels)?;
        let module = Arc::new(GradedModule::new(algebra, space, action)?);
        Ok(FreeModule { summands, module, columns, position })
    }

    pub fn summands(&self) -> &[(usize, GroupElement)] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    /// Degree of the generator `e_v` of summand `j`.
    pub fn generator_degree(&self, j: usize) -> GroupElement {
        self.module.group().neg(&self.summands[j].1)
    }

    /// `(summand, basis element)` of each coordinate of the component at `g`.
    pub fn columns(&self, g: &GroupElement) -> &[(usize, usize)] {
        self.columns.get(g).map_or(&[], Vec::as_slice)
    }

    /// Coordinate of `b · e_{v_j}` within its component.
    pub fn position(&self, j: usize, b: usize) -> Option<usize> {
        self.position.get(&(j, b)).copied()
    }

    /// The map sending the generator of summand `j` to `images[j]`, which must
    /// lie in `e_{v_j} N` in the generator's degree.
    pub fn map_to(&self, target: &Arc<GradedModule>, images: &[Vec<Scalar>]) -> Result<GradedMap> {
        if images.len() != self.rank() {
            return Err(Error::DimensionMismatch("one image per generator is required".into()));
        }
        let algebra = self.module.algebra();
        let field = algebra.field();
        let mut blocks = BTreeMap::new();
        for (g, cols) in &self.columns {
            let mut m = Matrix::zero(field, target.dim(g), cols.len());
            for (c, &(j, b)) in cols.iter().enumerate() {
                let image = target.act(b, &self.generator_degree(j)).apply(&images[j])?;
                for (r, x) in image.into_iter().enumerate() {
                    m.set(r, c, x);
                }
            }
            blocks.insert(g.clone(), m);
        }
        GradedMap::new(self.module.clone(), target.clone(), algebra.group().zero(), blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::FieldSpec;

    #[test]
    fn free_module_matches_projectives() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let s = GroupElement::new(vec![1, 0]);
        let f = FreeModule::new(a.clone(), vec![(0, a.group().zero()), (1, s.clone())]).unwrap();
        assert_eq!(f.module().total_dim(), 4);
        assert!(f.module().validate().is_ok());
        let p = GradedModule::projective(a, 1, &s).unwrap();
        assert_eq!(f.generator_degree(1), GroupElement::new(vec![-1, 0]));
        assert_eq!(p.support(), vec![GroupElement::new(vec![-1, 0])]);
    }
}
