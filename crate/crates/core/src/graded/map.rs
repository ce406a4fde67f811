use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::GroupElement;
use crate::linalg::{Matrix, Scalar, SubspaceBasis};

use super::module::{same_algebra, GradedModule};
use super::space::GradedVectorSpace;

/// A homogeneous map of graded modules: block `g` maps `source_g` to
/// `target_{g+degree}`. Absent blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    degree: GroupElement,
    blocks: BTreeMap<GroupElement, Matrix>,
}

/// A direct sum with its injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Arc<GradedModule>,
    pub injections: Vec<GradedMap>,
    pub projections: Vec<GradedMap>,
}

fn check_compatible(a: &GradedModule, b: &GradedModule) -> Result<()> {
    if same_algebra(a.algebra(), b.algebra()) {
        Ok(())
    } else {
        Err(Error::Incompatible("modules over different algebras or groups".into()))
    }
}

impl GradedMap {
    pub fn new(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        degree: GroupElement,
        blocks: BTreeMap<GroupElement, Matrix>,
    ) -> Result<Self> {
        check_compatible(&source, &target)?;
        let group = source.group();
        if !group.contains(&degree) {
            return Err(Error::Incompatible(format!("map degree {degree} not in {group}")));
        }
        let mut kept = BTreeMap::new();
        for (g, m) in blocks {
            let expected = (target.dim(&group.add(&g, &degree)), source.dim(&g));
            if m.shape() != expected {
                return Err(Error::DimensionMismatch(format!(
                    "block at degree {g} has shape {:?}, expected {:?}",
                    m.shape(),
                    expected
                )));
            }
            if !m.is_zero() {
                kept.insert(g, m);
            }
        }
        Ok(GradedMap { source, target, degree, blocks: kept })
    }

    pub fn zero(source: Arc<GradedModule>, target: Arc<GradedModule>) -> Result<Self> {
        let degree = source.group().zero();
        Self::new(source, target, degree, BTreeMap::new())
    }

    pub fn identity(m: Arc<GradedModule>) -> Self {
        let field = m.field();
        let blocks = m.support().into_iter().map(|g| {
            let d = m.dim(&g);
            (g, Matrix::identity(field, d))
        });
        let blocks = blocks.collect();
        GradedMap { source: m.clone(), target: m.clone(), degree: m.group().zero(), blocks }
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn degree(&self) -> &GroupElement {
        &self.degree
    }

    pub fn blocks(&self) -> &BTreeMap<GroupElement, Matrix> {
        &self.blocks
    }

    /// Block at source degree `g`, zero when not stored.
    pub fn block(&self, g: &GroupElement) -> Matrix {
        match self.blocks.get(g) {
            Some(m) => m.clone(),
            None => {
                let h = self.source.group().add(g, &self.degree);
                Matrix::zero(self.source.field(), self.target.dim(&h), self.source.dim(g))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &GradedMap) -> Result<GradedMap> {
        if !self.target.same_structure(&after.source) {
            return Err(Error::Incompatible("composition of maps with mismatched modules".into()));
        }
        let group = self.source.group();
        let degree = group.add(&self.degree, &after.degree);
        let mut blocks = BTreeMap::new();
        for (g, m) in &self.blocks {
            let h = group.add(g, &self.degree);
            if let Some(n) = after.blocks.get(&h) {
                blocks.insert(g.clone(), n.mul(m)?);
            }
        }
        GradedMap::new(self.source.clone(), after.target.clone(), degree, blocks)
    }

    fn check_parallel(&self, other: &GradedMap) -> Result<()> {
        if self.degree != other.degree
            || !self.source.same_structure(&other.source)
            || !self.target.same_structure(&other.target)
        {
            return Err(Error::Incompatible("maps are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_parallel(other)?;
        let mut blocks = self.blocks.clone();
        for (g, m) in &other.blocks {
            let sum = match blocks.get(g) {
                Some(x) => x.add(m)?,
                None => m.clone(),
            };
            blocks.insert(g.clone(), sum);
        }
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree.clone(), blocks)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        let blocks = self.blocks.iter().map(|(g, m)| (g.clone(), m.scale(c))).collect();
        GradedMap::new(self.source.clone(), self.target.clone(), self.degree.clone(), blocks)
            .expect("scaling preserves shapes")
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(&-&self.source.field().one()))
    }

    /// `Σ c_k f_k` over a nonempty family of parallel maps.
    pub fn linear_combination(coefficients: &[Scalar], maps: &[GradedMap]) -> Result<GradedMap> {
        let Some(first) = maps.first() else {
            return Err(Error::Incompatible("empty linear combination".into()));
        };
        if coefficients.len() != maps.len() {
            return Err(Error::DimensionMismatch("coefficient count differs from map count".into()));
        }
        let mut acc = GradedMap::new(first.source.clone(), first.target.clone(), first.degree.clone(), BTreeMap::new())?;
        for (c, f) in coefficients.iter().zip(maps) {
            if !c.is_zero() {
                acc = acc.add(&f.scale(c))?;
            }
        }
        Ok(acc)
    }

    /// Rank of every block, keyed by source degree (zero ranks omitted).
    pub fn ranks(&self) -> BTreeMap<GroupElement, usize> {
        self.blocks.iter().map(|(g, m)| (g.clone(), m.rank())).filter(|(_, r)| *r > 0).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.source.support().iter().all(|g| self.block(g).rank() == self.source.dim(g))
    }

    pub fn is_surjective(&self) -> bool {
        let group = self.source.group();
        self.target.support().iter().all(|h| {
            let g = group.sub(h, &self.degree);
            self.block(&g).rank() == self.target.dim(h)
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// The same blocks between shifted modules.
    pub fn shift(&self, s: &GroupElement) -> GradedMap {
        let group = self.source.group();
        let blocks = self.blocks.iter().map(|(g, m)| (group.sub(g, s), m.clone())).collect();
        GradedMap {
            source: Arc::new(self.source.shift(s)),
            target: Arc::new(self.target.shift(s)),
            degree: self.degree.clone(),
            blocks,
        }
    }

    fn require_degree_zero(&self) -> Result<()> {
        if self.degree != self.source.group().zero() {
            return Err(Error::Unsupported("kernels and cokernels need maps of trivial degree".into()));
        }
        Ok(())
    }

    /// Degreewise kernel with the induced action, and its inclusion.
    pub fn kernel(&self) -> Result<(Arc<GradedModule>, GradedMap)> {
        self.require_degree_zero()?;
        let m = &self.source;
        let mut bases = BTreeMap::new();
        for g in m.support() {
            let k = self.block(&g).kernel_basis();
            if k.cols() > 0 {
                bases.insert(g, k);
            }
        }
        let sub = submodule(m, &bases)?;
        let inclusion = GradedMap::new(sub.clone(), m.clone(), m.group().zero(), bases)?;
        Ok((sub, inclusion))
    }

    /// Degreewise cokernel with the induced action, and the projection.
    pub fn cokernel(&self) -> Result<(Arc<GradedModule>, GradedMap)> {
        self.require_degree_zero()?;
        let images = self
            .target
            .support()
            .into_iter()
            .map(|h| {
                let img = self.block(&h).column_space();
                (h, img)
            })
            .collect();
        quotient(&self.target, &images)
    }
}

/// The submodule spanned degreewise by the columns of `bases`, which must be
/// independent and closed under the action.
pub fn submodule(m: &Arc<GradedModule>, bases: &BTreeMap<GroupElement, Matrix>) -> Result<Arc<GradedModule>> {
    let algebra = m.algebra().clone();
    let group = m.group().clone();
    let field = m.field();
    let coords: BTreeMap<GroupElement, SubspaceBasis> = bases
        .iter()
        .filter(|(_, b)| b.cols() > 0)
        .map(|(g, b)| Ok((g.clone(), SubspaceBasis::new(b.clone())?)))
        .collect::<Result<_>>()?;
    let mut action = Vec::with_capacity(algebra.dim());
    for i in 0..algebra.dim() {
        let mut blocks = BTreeMap::new();
        for (g, basis) in &coords {
            let h = group.add(g, algebra.degree(i));
            let image = m.act(i, g).mul(basis.basis())?;
            let block = match coords.get(&h) {
                Some(target) => target
                    .coordinates_checked(&image)?
                    .ok_or_else(|| Error::InvalidModule("subspace is not closed under the action".into()))?,
                None => {
                    if !image.is_zero() {
                        return Err(Error::InvalidModule("subspace is not closed under the action".into()));
                    }
                    Matrix::zero(field, 0, basis.dim())
                }
            };
            blocks.insert(g.clone(), block);
        }
        action.push(blocks);
    }
    let dims = coords.iter().map(|(g, b)| (g.clone(), b.dim())).collect();
    let space = GradedVectorSpace::from_dims(group, &dims, "k")?;
    Ok(Arc::new(GradedModule::new(algebra, space, action)?))
}

/// `M / U` where `U_g` is spanned by the columns of `spans[g]` (any spanning
/// set) and is a submodule. Returns the quotient and the projection.
pub fn quotient(
    m: &Arc<GradedModule>,
    spans: &BTreeMap<GroupElement, Matrix>,
) -> Result<(Arc<GradedModule>, GradedMap)> {
    let algebra = m.algebra().clone();
    let group = m.group().clone();
    let field = m.field();
    // For each degree: projection onto the complement coordinates and a section.
    let mut projections = BTreeMap::new();
    let mut sections = BTreeMap::new();
    for g in m.support() {
        let n = m.dim(&g);
        let sub = match spans.get(&g) {
            Some(s) => s.column_space(),
            None => Matrix::zero(field, n, 0),
        };
        let extended = sub.hstack(&Matrix::identity(field, n))?;
        let pivots = extended.independent_columns();
        let complement: Vec<usize> = pivots.iter().filter(|&&p| p >= sub.cols()).map(|&p| p - sub.cols()).collect();
        if complement.is_empty() {
            continue;
        }
        let section = Matrix::identity(field, n).select_columns(&complement);
        let full = sub.hstack(&section)?;
        let inverse = full.inverse().ok_or_else(|| Error::InvalidModule("quotient basis is singular".into()))?;
        let projection = inverse.submatrix(sub.cols(), 0, complement.len(), n);
        projections.insert(g.clone(), projection);
        sections.insert(g, section);
    }
    let mut action = Vec::with_capacity(algebra.dim());
    for i in 0..algebra.dim() {
        let mut blocks = BTreeMap::new();
        for (g, section) in &sections {
            let h = group.add(g, algebra.degree(i));
            if let Some(p) = projections.get(&h) {
                blocks.insert(g.clone(), p.mul(&m.act(i, g))?.mul(section)?);
            }
        }
        action.push(blocks);
    }
    let dims = sections.iter().map(|(g, s)| (g.clone(), s.cols())).collect();
    let space = GradedVectorSpace::from_dims(group.clone(), &dims, "q")?;
    let module = Arc::new(GradedModule::new(algebra, space, action)?);
    let projection = GradedMap::new(m.clone(), module.clone(), group.zero(), projections)?;
    Ok((module, projection))
}

/// `⊕ modules` with structural maps; components are stacked in order.
pub fn direct_sum(modules: &[Arc<GradedModule>]) -> Result<DirectSum> {
    let Some(first) = modules.first() else {
        return Err(Error::Incompatible("direct sum of an empty family needs an algebra".into()));
    };
    for m in modules {
        check_compatible(first, m)?;
    }
    let algebra = first.algebra().clone();
    let group = algebra.group().clone();
    let field = algebra.field();
    let mut components: BTreeMap<GroupElement, Vec<String>> = BTreeMap::new();
    for (idx, m) in modules.iter().enumerate() {
        for (g, labels) in m.space().components() {
            components.entry(g.clone()).or_default().extend(labels.iter().map(|l| format!("{l}#{idx}")));
        }
    }
    // offset of summand idx within component g
    let offset = |idx: usize, g: &GroupElement| -> usize { modules[..idx].iter().map(|m| m.dim(g)).sum() };
    let total = |g: &GroupElement| components.get(g).map_or(0, Vec::len);
    let mut action = Vec::with_capacity(algebra.dim());
    for i in 0..algebra.dim() {
        let mut blocks = BTreeMap::new();
        for g in components.keys() {
            let h = group.add(g, algebra.degree(i));
            let mut block = Matrix::zero(field, total(&h), total(g));
            for (idx, m) in modules.iter().enumerate() {
                if let Some(b) = m.action(i).get(g) {
                    block.set_block(offset(idx, &h), offset(idx, g), b);
                }
            }
            blocks.insert(g.clone(), block);
        }
        action.push(blocks);
    }
    let space = GradedVectorSpace::new(group.clone(), components.clone())?;
    let sum = Arc::new(GradedModule::new(algebra, space, action)?);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for (idx, m) in modules.iter().enumerate() {
        let mut inj = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for g in m.support() {
            let d = m.dim(&g);
            let mut i_block = Matrix::zero(field, total(&g), d);
            i_block.set_block(offset(idx, &g), 0, &Matrix::identity(field, d));
            proj.insert(g.clone(), i_block.transpose());
            inj.insert(g, i_block);
        }
        injections.push(GradedMap::new(m.clone(), sum.clone(), group.zero(), inj)?);
        projections.push(GradedMap::new(sum.clone(), m.clone(), group.zero(), proj)?);
    }
    Ok(DirectSum { module: sum, injections, projections })
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
    fn kernel_of_identity_and_zero() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = Arc::new(GradedModule::regular(a).unwrap());
        let (k, _) = GradedMap::identity(m.clone()).kernel().unwrap();
        assert!(k.is_zero());
        let (k, inc) = GradedMap::zero(m.clone(), m.clone()).unwrap().kernel().unwrap();
        assert_eq!(k.dims(), m.dims());
        assert!(inc.is_isomorphism());
        assert!(k.validate().is_ok());
    }

    #[test]
    fn cokernel_of_multiplication_by_x() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let q = FieldSpec::Rationals;
        let m = Arc::new(GradedModule::regular(a).unwrap());
        let shifted = Arc::new(m.shift(&g(-1)));
        // e in degree 1 of A(-1) goes to x, x goes to 0
        let blocks = BTreeMap::from([(g(1), Matrix::from_i64(q, &[vec![1]]))]);
        let f = GradedMap::new(shifted, m.clone(), g(0), blocks).unwrap();
        assert!(f.validate().is_ok());
        let (c, p) = f.cokernel().unwrap();
        assert_eq!(c.dims(), BTreeMap::from([(g(0), 1)]));
        assert!(c.validate().is_ok());
        assert!(p.validate().is_ok());
        assert!(p.is_surjective());
        assert!(f.then(&p).unwrap().is_zero());
        let (k, inc) = f.kernel().unwrap();
        assert_eq!(k.dims(), BTreeMap::from([(g(2), 1)]));
        assert!(inc.then(&f).unwrap().is_zero());
    }

    #[test]
    fn direct_sum_maps() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let zero = a.group().zero();
        let p1 = Arc::new(GradedModule::projective(a.clone(), 0, &zero).unwrap());
        let s2 = Arc::new(GradedModule::simple(a, 1, &zero).unwrap());
        let sum = direct_sum(&[p1.clone(), s2]).unwrap();
        assert_eq!(sum.module.total_dim(), 4);
        assert!(sum.module.validate().is_ok());
        let round = sum.injections[0].then(&sum.projections[0]).unwrap();
        assert_eq!(round, GradedMap::identity(p1));
        assert!(sum.injections[0].then(&sum.projections[1]).unwrap().is_zero());
    }
}
