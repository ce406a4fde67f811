use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{hom_space, GradedMap, GradedModule, HomSpace};
use crate::linalg::Matrix;

use super::regrading::{FiberLayout, Regrading};

/// Unit and counit of `φ_! ⊣ φ^*`, the triangle identities, and the Hom
/// bijections of both adjunctions `φ_! ⊣ φ^*` and `φ^* ⊣ φ_*` as matrices
/// between Hom-space bases.
#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    /// `ι_M : M -> φ^*(φ_!(M))`.
    pub unit: GradedMap,
    /// `ε_N : φ_!(φ^*(N)) -> N`.
    pub counit: GradedMap,
    pub left_triangle: bool,
    pub right_triangle: bool,
    /// `Hom(φ_! M, N) -> Hom(M, φ^* N)`, `f ↦ φ^*(f) ∘ ι_M`.
    pub left_bijection: Matrix,
    /// `Hom(φ^* N, M) -> Hom(N, φ_* M)`, `f ↦ φ_*(f) ∘ η_N`.
    pub right_bijection: Matrix,
    pub hom_dims: [usize; 4],
}

impl AdjunctionWitness {
    pub fn left_invertible(&self) -> bool {
        is_invertible(&self.left_bijection)
    }

    pub fn right_invertible(&self) -> bool {
        is_invertible(&self.right_bijection)
    }

    pub fn holds(&self) -> bool {
        self.left_triangle && self.right_triangle && self.left_invertible() && self.right_invertible()
    }
}

fn is_invertible(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

fn transfer(from: &HomSpace, to: &HomSpace, image: impl Fn(&GradedMap) -> Result<GradedMap>) -> Result<Matrix> {
    let field = from.source().field();
    let mut columns = Vec::with_capacity(from.dim());
    for f in from.basis() {
        let g = image(f)?;
        let c = to
            .coordinates(&g)?
            .ok_or_else(|| Error::InvalidModule("adjunct is not a module map".into()))?;
        columns.push(c);
    }
    Ok(Matrix::from_columns(field, to.dim(), &columns))
}

impl Regrading {
    /// `ι_M`: `m ∈ M_g` goes to slot `g`, in the `g`-summand of `φ_!(M)_{φ(g)}`.
    pub fn unit(&self, m: &Arc<GradedModule>) -> Result<GradedMap> {
        let pushed = self.pushforward(m)?;
        let target = Arc::new(self.pullback_module(&pushed)?);
        let layout = FiberLayout::new(self.phi(), m);
        let field = m.field();
        let blocks = m
            .support()
            .into_iter()
            .map(|g| {
                let (h, offset) = &layout.place[&g];
                let mut b = Matrix::zero(field, layout.total(h), m.dim(&g));
                b.set_block(*offset, 0, &Matrix::identity(field, m.dim(&g)));
                (g, b)
            })
            .collect();
        GradedMap::new(m.clone(), target, m.group().zero(), blocks)
    }

    /// `ε_N`: sums the copies of `N_h` over the fiber of `h`.
    pub fn counit(&self, n: &Arc<GradedModule>) -> Result<GradedMap> {
        let pulled = self.pullback_module(n)?;
        let source = Arc::new(self.pushforward(&pulled)?);
        let layout = FiberLayout::new(self.phi(), &pulled);
        let field = n.field();
        let mut blocks: BTreeMap<_, Matrix> = BTreeMap::new();
        for (g, (h, offset)) in &layout.place {
            let d = pulled.dim(g);
            let b = blocks.entry(h.clone()).or_insert_with(|| Matrix::zero(field, d, layout.total(h)));
            b.set_block(0, *offset, &Matrix::identity(field, d));
        }
        GradedMap::new(source, n.clone(), n.group().zero(), blocks)
    }

    /// Unit of `φ^* ⊣ φ_*`: `N -> φ_*(φ^*(N))`, the diagonal into the fiber product.
    pub fn coinduction_unit(&self, n: &Arc<GradedModule>) -> Result<GradedMap> {
        let pulled = self.pullback_module(n)?;
        let target = Arc::new(self.coinduction(&pulled)?);
        Ok(self.counit(n)?.transpose_into(n.clone(), target))
    }

    pub fn adjunction_witness(&self, m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> Result<AdjunctionWitness> {
        self.check_source(m)?;
        self.check_target(n)?;
        if !self.kernel_is_finite() {
            return Err(Error::Unsupported(
                "infinite kernel: the adjunction is only checked degreewise through windowed verifiers".into(),
            ));
        }
        let unit = self.unit(m)?;
        let counit = self.counit(n)?;

        // ε_{φ_! M} ∘ φ_!(ι_M) = id
        let pushed = Arc::new(self.pushforward(m)?);
        let push_unit = self.pushforward_map_between(&unit, pushed.clone(), Arc::new(self.pushforward(unit.target())?))?;
        let eps_pushed = self.counit(&pushed)?;
        let left_triangle = push_unit.then(&eps_pushed)?.blocks() == GradedMap::identity(pushed.clone()).blocks();

        // φ^*(ε_N) ∘ ι_{φ^* N} = id
        let pulled = Arc::new(self.pullback_module(n)?);
        let iota_pulled = self.unit(&pulled)?;
        let pull_counit = self.pullback_map_between(&counit, iota_pulled.target().clone(), pulled.clone())?;
        let right_triangle = iota_pulled.then(&pull_counit)?.blocks() == GradedMap::identity(pulled.clone()).blocks();

        let h1 = hom_space(&pushed, n)?;
        let h2 = hom_space(m, &pulled)?;
        let left_bijection = transfer(&h1, &h2, |f| {
            let pf = self.pullback_map_between(f, unit.target().clone(), pulled.clone())?;
            unit.then(&pf)
        })?;

        let coinduced = Arc::new(self.coinduction(m)?);
        let h3 = hom_space(&pulled, m)?;
        let h4 = hom_space(n, &coinduced)?;
        let eta = self.coinduction_unit(n)?;
        let right_bijection = transfer(&h3, &h4, |f| {
            let cf = self.pushforward_map_between(f, eta.target().clone(), coinduced.clone())?;
            eta.then(&cf)
        })?;

        Ok(AdjunctionWitness {
            unit,
            counit,
            left_triangle,
            right_triangle,
            left_bijection,
            right_bijection,
            hom_dims: [h1.dim(), h2.dim(), h3.dim(), h4.dim()],
        })
    }
}

impl GradedMap {
    // Transposed blocks as a map `target -> source` between the given modules.
    fn transpose_into(&self, source: Arc<GradedModule>, target: Arc<GradedModule>) -> GradedMap {
        let group = source.group().clone();
        let blocks = self.blocks().iter().map(|(g, b)| (group.add(g, self.degree()), b.transpose())).collect();
        GradedMap::new(source, target, group.neg(self.degree()), blocks).expect("transposed shapes agree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
    use crate::linalg::FieldSpec;

    fn z(x: i64) -> GroupElement {
        GroupElement::new(vec![x])
    }

    fn z4_setup() -> Regrading {
        let z4 = FgAbelianGroup::cyclic(4).unwrap();
        let a = fixtures::dual_numbers_in(FieldSpec::Rationals, z4.clone(), z(1)).unwrap().algebra;
        let phi = GroupMorphism::new(z4, FgAbelianGroup::cyclic(2).unwrap(), vec![vec![1]]).unwrap();
        Regrading::new(a, phi).unwrap()
    }

    #[test]
    fn identity_unit_and_counit_are_identities() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        let r = Regrading::new(a.clone(), GroupMorphism::identity(a.group())).unwrap();
        let m = Arc::new(GradedModule::regular(a.clone()).unwrap());
        let n = Arc::new(r.pushforward(&m).unwrap());
        let w = r.adjunction_witness(&m, &n).unwrap();
        assert!(w.holds());
        assert!(w.unit.is_isomorphism());
        assert!(w.counit.is_isomorphism());
    }

    #[test]
    fn z4_to_z2_witness() {
        let r = z4_setup();
        let a = r.source_algebra().clone();
        let m = Arc::new(GradedModule::regular(a.clone()).unwrap());
        let n = Arc::new(GradedModule::simple(r.target_algebra().clone(), 0, &z(1)).unwrap());
        let w = r.adjunction_witness(&m, &n).unwrap();
        assert!(w.holds(), "{w:?}");
        assert_eq!(w.hom_dims[0], w.hom_dims[1]);
        assert_eq!(w.hom_dims[2], w.hom_dims[3]);
        assert!(w.unit.validate().is_ok());
        assert!(w.counit.validate().is_ok());
    }

    #[test]
    fn zero_modules_give_zero_hom() {
        let r = z4_setup();
        let m = Arc::new(GradedModule::zero(r.source_algebra().clone()));
        let n = Arc::new(GradedModule::simple(r.target_algebra().clone(), 0, &z(0)).unwrap());
        let w = r.adjunction_witness(&m, &n).unwrap();
        assert_eq!(w.hom_dims, [0, 0, 0, 0]);
        assert!(w.holds());
    }
}
