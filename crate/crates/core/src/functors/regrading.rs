use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{ActionBlocks, GradedAlgebra, GradedMap, GradedModule, GradedVectorSpace};
use crate::groups::{FgAbelianGroup, GroupElement, GroupMorphism, Kernel};
use crate::linalg::Matrix;

/// Change of grading along `phi: G -> G'` for a `G`-graded algebra `A`.
///
/// Holds `A`, the regraded algebra `φ_!(A)` (same structure constants, degrees
/// pushed along `phi`) and `ker(phi)`.
#[derive(Clone, Debug)]
pub struct Regrading {
    phi: GroupMorphism,
    source: Arc<GradedAlgebra>,
    target: Arc<GradedAlgebra>,
    kernel: Kernel,
}

/// Where each `G`-component of a module lands in `φ_!(M)`.
#[derive(Clone, Debug)]
pub(crate) struct FiberLayout {
    pub place: BTreeMap<GroupElement, (GroupElement, usize)>,
    pub dims: BTreeMap<GroupElement, usize>,
}

impl FiberLayout {
    pub fn new(phi: &GroupMorphism, m: &GradedModule) -> Self {
        let mut place = BTreeMap::new();
        let mut dims: BTreeMap<GroupElement, usize> = BTreeMap::new();
        for g in m.support() {
            let h = phi.apply(&g);
            let offset = dims.entry(h.clone()).or_default();
            place.insert(g.clone(), (h, *offset));
            *offset += m.dim(&g);
        }
        FiberLayout { place, dims }
    }

    pub fn total(&self, h: &GroupElement) -> usize {
        self.dims.get(h).copied().unwrap_or(0)
    }
}

/// `φ^*(N)`: materialized when the kernel is finite, otherwise a lazy model.
#[derive(Clone, Debug)]
pub enum Pullback {
    Materialized(GradedModule),
    Lazy(LazyGradedModule),
}

/// `φ^*(N)` for an infinite kernel: the component in degree `g` is a copy of
/// `N_{φ(g)}` and `a_i` acts from slot `g` to slot `g + deg a_i` as it acts on `N`.
#[derive(Clone, Debug)]
pub struct LazyGradedModule {
    base: Arc<GradedModule>,
    phi: GroupMorphism,
    algebra: Arc<GradedAlgebra>,
}

impl LazyGradedModule {
    pub fn base(&self) -> &Arc<GradedModule> {
        &self.base
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn group(&self) -> &FgAbelianGroup {
        self.phi.domain()
    }

    pub fn component_dim(&self, g: &GroupElement) -> usize {
        self.base.dim(&self.phi.apply(g))
    }

    pub fn component_labels(&self, g: &GroupElement) -> Vec<String> {
        self.base.space().labels(&self.phi.apply(g)).iter().map(|l| format!("{l}@{g}")).collect()
    }

    /// Action of basis element `i` from slot `g` to slot `g + deg a_i`.
    pub fn act(&self, i: usize, g: &GroupElement) -> Matrix {
        self.base.act(i, &self.phi.apply(g))
    }
}

impl Regrading {
    pub fn new(source: Arc<GradedAlgebra>, phi: GroupMorphism) -> Result<Self> {
        let target = Arc::new(source.regraded(&phi)?);
        let kernel = phi.kernel();
        Ok(Regrading { phi, source, target, kernel })
    }

    pub fn phi(&self) -> &GroupMorphism {
        &self.phi
    }

    pub fn source_algebra(&self) -> &Arc<GradedAlgebra> {
        &self.source
    }

    /// `φ_!(A)`, graded by the codomain.
    pub fn target_algebra(&self) -> &Arc<GradedAlgebra> {
        &self.target
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn kernel_is_finite(&self) -> bool {
        self.kernel.group.is_finite()
    }

    /// Elements of `ker(phi)` as elements of the domain, when finite.
    pub fn kernel_elements(&self) -> Result<Vec<GroupElement>> {
        let elements = self.kernel.group.elements().ok_or(Error::InfiniteFiber)?;
        Ok(elements.iter().map(|k| self.kernel.inclusion.apply(k)).collect())
    }

    pub(crate) fn check_source(&self, m: &GradedModule) -> Result<()> {
        if m.algebra().as_ref() != self.source.as_ref() {
            return Err(Error::Incompatible("module is not over the source algebra".into()));
        }
        Ok(())
    }

    pub(crate) fn check_target(&self, n: &GradedModule) -> Result<()> {
        if n.algebra().as_ref() != self.target.as_ref() {
            return Err(Error::Incompatible("module is not over the regraded algebra".into()));
        }
        Ok(())
    }

    /// `φ_!(M)`: the component in degree `h` is the sum of `M_g` over the
    /// fiber of `h`, with the fiber's components in increasing order of `g`.
    pub fn pushforward(&self, m: &GradedModule) -> Result<GradedModule> {
        self.check_source(m)?;
        let layout = FiberLayout::new(&self.phi, m);
        let field = m.field();
        let mut components: BTreeMap<GroupElement, Vec<String>> = BTreeMap::new();
        for (g, labels) in m.space().components() {
            let h = &layout.place[g].0;
            components.entry(h.clone()).or_default().extend(labels.iter().cloned());
        }
        let group = self.phi.codomain();
        let mut action: Vec<ActionBlocks> = Vec::with_capacity(self.source.dim());
        for i in 0..self.source.dim() {
            let d = self.source.degree(i);
            let dh = self.phi.apply(d);
            let mut blocks = BTreeMap::new();
            for (g, block) in m.action(i) {
                let (h, col) = &layout.place[g];
                let target_degree = m.group().add(g, d);
                let Some((_, row)) = layout.place.get(&target_degree) else {
                    continue;
                };
                let h2 = group.add(h, &dh);
                let entry = blocks
                    .entry(h.clone())
                    .or_insert_with(|| Matrix::zero(field, layout.total(&h2), layout.total(h)));
                entry.set_block(*row, *col, block);
            }
            action.push(blocks);
        }
        let space = GradedVectorSpace::new(group.clone(), components)?;
        GradedModule::new(self.target.clone(), space, action)
    }

    /// `φ_*(M)`: the product over each fiber. For finite-dimensional `M` only
    /// finitely many factors are nonzero, so this agrees with `φ_!(M)`.
    pub fn coinduction(&self, m: &GradedModule) -> Result<GradedModule> {
        self.pushforward(m)
    }

    /// `φ_!(f)` (equally `φ_*(f)`): the same blocks, merged along fibers.
    pub fn pushforward_map(&self, f: &GradedMap) -> Result<GradedMap> {
        let source = Arc::new(self.pushforward(f.source())?);
        let target = Arc::new(self.pushforward(f.target())?);
        self.pushforward_map_between(f, source, target)
    }

    pub(crate) fn pushforward_map_between(
        &self,
        f: &GradedMap,
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
    ) -> Result<GradedMap> {
        let ls = FiberLayout::new(&self.phi, f.source());
        let lt = FiberLayout::new(&self.phi, f.target());
        let group = f.source().group();
        let field = f.source().field();
        let degree = self.phi.apply(f.degree());
        let mut blocks = BTreeMap::new();
        for (g, block) in f.blocks() {
            let (h, col) = &ls.place[g];
            let Some((h2, row)) = lt.place.get(&group.add(g, f.degree())) else {
                continue;
            };
            let entry = blocks
                .entry(h.clone())
                .or_insert_with(|| Matrix::zero(field, lt.total(h2), ls.total(h)));
            entry.set_block(*row, *col, block);
        }
        GradedMap::new(source, target, degree, blocks)
    }

    /// `φ^*(N)`, lazy when the kernel is infinite.
    pub fn pullback(&self, n: &Arc<GradedModule>) -> Result<Pullback> {
        self.check_target(n)?;
        if self.kernel_is_finite() {
            Ok(Pullback::Materialized(self.pullback_module(n)?))
        } else {
            Ok(Pullback::Lazy(LazyGradedModule {
                base: n.clone(),
                phi: self.phi.clone(),
                algebra: self.source.clone(),
            }))
        }
    }

    /// `φ^*(N)` as a finite-dimensional module; needs a finite kernel.
    pub fn pullback_module(&self, n: &GradedModule) -> Result<GradedModule> {
        self.check_target(n)?;
        if !self.kernel_is_finite() {
            return Err(Error::InfiniteFiber);
        }
        let mut components = BTreeMap::new();
        let mut preimages: Vec<GroupElement> = Vec::new();
        for (h, labels) in n.space().components() {
            for g in self.phi.fiber_elements(h, None)? {
                components.insert(g.clone(), labels.iter().map(|l| format!("{l}@{g}")).collect());
                preimages.push(g);
            }
        }
        let group = self.phi.domain();
        let mut action = Vec::with_capacity(self.source.dim());
        for i in 0..self.source.dim() {
            let blocks = preimages.iter().map(|g| (g.clone(), n.act(i, &self.phi.apply(g)))).collect();
            action.push(blocks);
        }
        let space = GradedVectorSpace::new(group.clone(), components)?;
        GradedModule::new(self.source.clone(), space, action)
    }

    /// `φ^*(f)` for a map of trivial degree: block `g` is block `φ(g)` of `f`.
    pub fn pullback_map(&self, f: &GradedMap) -> Result<GradedMap> {
        let source = Arc::new(self.pullback_module(f.source())?);
        let target = Arc::new(self.pullback_module(f.target())?);
        self.pullback_map_between(f, source, target)
    }

    pub(crate) fn pullback_map_between(
        &self,
        f: &GradedMap,
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
    ) -> Result<GradedMap> {
        if f.degree() != &self.phi.codomain().zero() {
            return Err(Error::Unsupported("pullback of maps of nontrivial degree".into()));
        }
        let blocks = source.support().into_iter().map(|g| {
            let b = f.block(&self.phi.apply(&g));
            (g, b)
        });
        GradedMap::new(source.clone(), target, self.phi.domain().zero(), blocks.collect())
    }
}

/// `φ_!(M)` for a one-off morphism.
pub fn pushforward(m: &GradedModule, phi: &GroupMorphism) -> Result<GradedModule> {
    Regrading::new(m.algebra().clone(), phi.clone())?.pushforward(m)
}

/// `φ_*(M)` for a one-off morphism.
pub fn coinduction(m: &GradedModule, phi: &GroupMorphism) -> Result<GradedModule> {
    Regrading::new(m.algebra().clone(), phi.clone())?.coinduction(m)
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
    fn identity_changes_nothing() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = GradedModule::regular(a.clone()).unwrap();
        let r = Regrading::new(a.clone(), GroupMorphism::identity(a.group())).unwrap();
        let p = r.pushforward(&m).unwrap();
        assert!(p.same_structure(&m));
        assert_eq!(p.dims(), m.dims());
    }

    #[test]
    fn collapse_to_trivial_group() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let m = GradedModule::regular(a.clone()).unwrap();
        let phi = GroupMorphism::zero(a.group(), &FgAbelianGroup::trivial());
        let r = Regrading::new(a, phi).unwrap();
        let p = r.pushforward(&m).unwrap();
        assert_eq!(p.dims(), BTreeMap::from([(GroupElement::new(vec![]), 2)]));
        assert!(p.validate().is_ok());
        assert!(!r.kernel_is_finite());
        let n = Arc::new(p);
        match r.pullback(&n).unwrap() {
            Pullback::Lazy(l) => {
                for k in -3..=3 {
                    assert_eq!(l.component_dim(&z(k)), 2);
                }
            }
            Pullback::Materialized(_) => panic!("kernel is infinite"),
        }
    }

    #[test]
    fn pullback_along_z4_to_z2() {
        let z4 = FgAbelianGroup::cyclic(4).unwrap();
        let z2 = FgAbelianGroup::cyclic(2).unwrap();
        let a = fixtures::dual_numbers_in(FieldSpec::Rationals, z4.clone(), z(1)).unwrap().algebra;
        let phi = GroupMorphism::new(z4, z2, vec![vec![1]]).unwrap();
        let r = Regrading::new(a, phi).unwrap();
        let s = GradedModule::simple(r.target_algebra().clone(), 0, &z(1)).unwrap();
        assert_eq!(s.support(), vec![z(1)]);
        let pb = r.pullback_module(&s).unwrap();
        assert_eq!(pb.support(), vec![z(1), z(3)]);
        assert!(pb.validate().is_ok());
    }

    #[test]
    fn kronecker_sum_map_merges_antidiagonals() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let zero = a.group().zero();
        let p1 = GradedModule::projective(a.clone(), 0, &zero).unwrap();
        let phi = GroupMorphism::new(FgAbelianGroup::free(2), FgAbelianGroup::free(1), vec![vec![1, 1]]).unwrap();
        let p = pushforward(&p1, &phi).unwrap();
        assert_eq!(p.dims(), BTreeMap::from([(z(0), 1), (z(1), 2)]));
        assert!(p.validate().is_ok());
        assert_eq!(coinduction(&p1, &phi).unwrap(), p);
    }

    #[test]
    fn shift_by_kernel_element_is_invisible() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        let p1 = GradedModule::projective(a.clone(), 0, &a.group().zero()).unwrap();
        let phi = GroupMorphism::new(FgAbelianGroup::free(2), FgAbelianGroup::free(1), vec![vec![1, 1]]).unwrap();
        let l = GroupElement::new(vec![2, -2]);
        assert_eq!(pushforward(&p1.shift(&l), &phi).unwrap().dims(), pushforward(&p1, &phi).unwrap().dims());
    }
}
