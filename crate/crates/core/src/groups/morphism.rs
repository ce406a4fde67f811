use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::group::{ExtendedNat, FgAbelianGroup, GroupElement};
use super::smith::{smith_normal_form, IntMatrix};

/// A homomorphism of finitely generated abelian groups, given by the images of
/// the domain's canonical generators. `matrix[i][j]` is coordinate `i` of the
/// image of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupMorphism {
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    matrix: Vec<Vec<i64>>,
}

/// `ker(phi)` in canonical form together with its inclusion into the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub group: FgAbelianGroup,
    pub inclusion: GroupMorphism,
}

impl GroupMorphism {
    pub fn new(domain: FgAbelianGroup, codomain: FgAbelianGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != codomain.ngens() || matrix.iter().any(|row| row.len() != domain.ngens()) {
            return Err(Error::InvalidMorphism(format!(
                "matrix must be {}x{} for {} -> {}",
                codomain.ngens(),
                domain.ngens(),
                domain,
                codomain
            )));
        }
        let mut phi = GroupMorphism { domain, codomain, matrix };
        // reduce each column into canonical coordinates
        for j in 0..phi.domain.ngens() {
            let col = phi.codomain.reduce(phi.column(j));
            for (i, &x) in col.coords().iter().enumerate() {
                phi.matrix[i][j] = x;
            }
        }
        for j in phi.domain.rank()..phi.domain.ngens() {
            let m = phi.domain.generator_order(j).expect("torsion generator");
            let image = phi.codomain.scale(m, &GroupElement::new(phi.column(j)));
            if image != phi.codomain.zero() {
                return Err(Error::InvalidMorphism(format!(
                    "generator {j} has order {m} but {m} times its image is {image}, not zero"
                )));
            }
        }
        Ok(phi)
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        let n = g.ngens();
        let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        GroupMorphism { domain: g.clone(), codomain: g.clone(), matrix }
    }

    pub fn zero(domain: &FgAbelianGroup, codomain: &FgAbelianGroup) -> Self {
        GroupMorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: vec![vec![0; domain.ngens()]; codomain.ngens()],
        }
    }

    pub fn domain(&self) -> &FgAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[j]).collect()
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let coords = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(g.coords()).map(|(a, b)| a * b).sum())
            .collect();
        self.codomain.reduce(coords)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &GroupMorphism) -> Result<GroupMorphism> {
        if self.codomain != after.domain {
            return Err(Error::InvalidMorphism("composition of non-matching morphisms".into()));
        }
        let matrix: Vec<Vec<i64>> = (0..after.codomain.ngens())
            .map(|i| {
                (0..self.domain.ngens())
                    .map(|j| (0..self.codomain.ngens()).map(|k| after.matrix[i][k] * self.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        GroupMorphism::new(self.domain.clone(), after.codomain.clone(), matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && *self == GroupMorphism::identity(&self.domain)
    }

    /// `[Phi | -R']`: an element `x` of the domain maps to `h` iff some integer
    /// vector `y` satisfies `Phi x - R' y = h`.
    fn lifted_system(&self) -> IntMatrix {
        let n = self.domain.ngens();
        let rel = self.codomain.relation_matrix();
        let mut a = IntMatrix::zero(self.codomain.ngens(), n + rel.cols());
        for i in 0..self.codomain.ngens() {
            for j in 0..n {
                a[(i, j)] = BigInt::from(self.matrix[i][j]);
            }
            for j in 0..rel.cols() {
                a[(i, n + j)] = -&rel[(i, j)];
            }
        }
        a
    }

    /// Kernel in canonical form with an injective inclusion whose image is
    /// exactly `ker(phi)`.
    pub fn kernel(&self) -> Kernel {
        let n = self.domain.ngens();
        let snf = smith_normal_form(&self.lifted_system());
        let rho = snf.rank();
        // projections of the integer kernel of [Phi | -R'] generate the
        // lattice X of domain coordinates landing in ker(phi)
        let kcols: Vec<usize> = (rho..snf.right.cols()).collect();
        let mut gens = IntMatrix::zero(n, kcols.len());
        for (c, &k) in kcols.iter().enumerate() {
            for i in 0..n {
                gens[(i, c)] = snf.right[(i, k)].clone();
            }
        }
        let lattice = smith_normal_form(&gens);
        let t = lattice.rank();
        // lattice basis: d_i times column i of U^{-1}
        let mut basis = IntMatrix::zero(n, t);
        for i in 0..t {
            for r in 0..n {
                basis[(r, i)] = &lattice.left_inverse[(r, i)] * &lattice.invariants[i];
            }
        }
        // the domain's own relations, expressed in the lattice basis
        let rel = self.domain.relation_matrix();
        let mut coords = IntMatrix::zero(t, rel.cols());
        for j in 0..rel.cols() {
            let ux = lattice.left.apply(&rel.column(j));
            for i in 0..t {
                debug_assert!(ux[i].is_multiple_of(&lattice.invariants[i]));
                coords[(i, j)] = &ux[i] / &lattice.invariants[i];
            }
        }
        let quotient = smith_normal_form(&coords);
        let mut free_gens = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..t {
            let order = quotient.invariants.get(i).cloned().unwrap_or_else(BigInt::zero);
            if order == BigInt::from(1) {
                continue;
            }
            // generator i of the quotient is U_c^{-1} e_i in lattice coordinates
            let lattice_coords = quotient.left_inverse.column(i);
            let image = basis.apply(&lattice_coords);
            let image: Vec<i64> = image
                .iter()
                .map(|x| x.to_i64().expect("kernel generator coordinates fit in i64"))
                .collect();
            if order.is_zero() {
                free_gens.push(image);
            } else {
                torsion.push((order.to_i64().expect("torsion order fits in i64"), image));
            }
        }
        for g in &mut free_gens {
            if g.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                g.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let group = FgAbelianGroup::new(free_gens.len(), torsion.iter().map(|(m, _)| *m).collect())
            .expect("smith invariants form a divisibility chain");
        let columns: Vec<GroupElement> = free_gens
            .into_iter()
            .chain(torsion.into_iter().map(|(_, g)| g))
            .map(|g| self.domain.reduce(g))
            .collect();
        let matrix = (0..n).map(|i| columns.iter().map(|c| c.coords()[i]).collect()).collect();
        let inclusion = GroupMorphism::new(group.clone(), self.domain.clone(), matrix)
            .expect("kernel inclusion is well defined");
        Kernel { group, inclusion }
    }

    /// Some `g` with `phi(g) = h`, or `None` when `h` is not in the image.
    pub fn preimage(&self, h: &GroupElement) -> Result<Option<GroupElement>> {
        if !self.codomain.contains(h) {
            return Err(Error::InvalidGroup(format!("{h} is not an element of {}", self.codomain)));
        }
        let n = self.domain.ngens();
        let snf = smith_normal_form(&self.lifted_system());
        let rhs: Vec<BigInt> = h.coords().iter().map(|&x| BigInt::from(x)).collect();
        let uh = snf.left.apply(&rhs);
        let mut z = vec![BigInt::zero(); snf.right.cols()];
        for (i, x) in uh.iter().enumerate() {
            match snf.invariants.get(i) {
                Some(d) if x.is_multiple_of(d) => z[i] = x / d,
                Some(_) => return Ok(None),
                None if !x.is_zero() => return Ok(None),
                None => {}
            }
        }
        let sol = snf.right.apply(&z);
        let coords = sol[..n]
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::InvalidGroup("preimage overflows i64".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(self.domain.reduce(coords)))
    }

    /// Elements of `support` mapping to `h`. Without a support set the whole fiber
    /// is returned, which requires a finite kernel.
    pub fn fiber_elements(&self, h: &GroupElement, support: Option<&[GroupElement]>) -> Result<Vec<GroupElement>> {
        if let Some(support) = support {
            return Ok(support.iter().filter(|g| self.apply(g) == *h).cloned().collect());
        }
        let kernel = self.kernel();
        let Some(elements) = kernel.group.elements() else {
            return Err(Error::InfiniteFiber);
        };
        let Some(base) = self.preimage(h)? else {
            return Ok(Vec::new());
        };
        let mut fiber: Vec<GroupElement> = elements
            .iter()
            .map(|l| self.domain.add(&base, &kernel.inclusion.apply(l)))
            .collect();
        fiber.sort();
        Ok(fiber)
    }
}

/// Cohomological dimension of `l` over a field of characteristic `characteristic`:
/// the free rank when no torsion order is divisible by the characteristic, and
/// infinity otherwise.
pub fn cohomological_dimension(l: &FgAbelianGroup, characteristic: u64) -> ExtendedNat {
    let p = characteristic as i64;
    if p != 0 && l.torsion().iter().any(|&m| m % p == 0) {
        ExtendedNat::Infinite
    } else {
        ExtendedNat::Finite(l.rank() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbelianGroup {
        FgAbelianGroup::free(1)
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        let k = GroupMorphism::identity(&z()).kernel();
        assert!(k.group.is_trivial());
    }

    #[test]
    fn kernel_of_collapse_is_z() {
        let phi = GroupMorphism::zero(&z(), &FgAbelianGroup::trivial());
        let k = phi.kernel();
        assert_eq!(k.group, z());
        assert_eq!(k.inclusion.matrix(), &[vec![1]]);
    }

    #[test]
    fn kernel_of_sum_map() {
        let phi = GroupMorphism::new(FgAbelianGroup::free(2), z(), vec![vec![1, 1]]).unwrap();
        let k = phi.kernel();
        assert_eq!(k.group, z());
        assert_eq!(k.inclusion.apply(&GroupElement::new(vec![1])).coords(), &[1, -1]);
    }

    #[test]
    fn kernel_with_torsion() {
        // Z/4 -> Z/2 reduction has kernel Z/2 generated by 2
        let z4 = FgAbelianGroup::cyclic(4).unwrap();
        let z2 = FgAbelianGroup::cyclic(2).unwrap();
        let phi = GroupMorphism::new(z4.clone(), z2, vec![vec![1]]).unwrap();
        let k = phi.kernel();
        assert_eq!(k.group, FgAbelianGroup::cyclic(2).unwrap());
        assert_eq!(k.inclusion.apply(&GroupElement::new(vec![1])).coords(), &[2]);
    }

    #[test]
    fn rejects_ill_defined_morphism() {
        let z2 = FgAbelianGroup::cyclic(2).unwrap();
        assert!(GroupMorphism::new(z2, z(), vec![vec![1]]).is_err());
    }

    #[test]
    fn fibers() {
        let id = GroupMorphism::identity(&z());
        let g = GroupElement::new(vec![5]);
        assert_eq!(id.fiber_elements(&g, Some(std::slice::from_ref(&g))).unwrap(), vec![g.clone()]);

        let collapse = GroupMorphism::zero(&z(), &FgAbelianGroup::trivial());
        let support: Vec<GroupElement> = (-1..=1).map(|x| GroupElement::new(vec![x])).collect();
        let zero = FgAbelianGroup::trivial().zero();
        assert_eq!(collapse.fiber_elements(&zero, Some(&support)).unwrap(), support);
        assert_eq!(collapse.fiber_elements(&zero, None), Err(Error::InfiniteFiber));

        let sum = GroupMorphism::new(FgAbelianGroup::free(2), z(), vec![vec![1, 1]]).unwrap();
        let support: Vec<GroupElement> =
            [vec![1, 0], vec![0, 1], vec![1, 1]].into_iter().map(GroupElement::new).collect();
        assert_eq!(
            sum.fiber_elements(&GroupElement::new(vec![1]), Some(&support)).unwrap(),
            support[..2].to_vec()
        );
    }

    #[test]
    fn full_fiber_of_finite_kernel() {
        let z4 = FgAbelianGroup::cyclic(4).unwrap();
        let z2 = FgAbelianGroup::cyclic(2).unwrap();
        let phi = GroupMorphism::new(z4, z2, vec![vec![1]]).unwrap();
        let fiber = phi.fiber_elements(&GroupElement::new(vec![1]), None).unwrap();
        assert_eq!(fiber, vec![GroupElement::new(vec![1]), GroupElement::new(vec![3])]);
    }

    #[test]
    fn cohomological_dimensions() {
        assert_eq!(cohomological_dimension(&FgAbelianGroup::trivial(), 0), ExtendedNat::Finite(0));
        assert_eq!(cohomological_dimension(&z(), 5), ExtendedNat::Finite(1));
        assert_eq!(cohomological_dimension(&FgAbelianGroup::free(2), 0), ExtendedNat::Finite(2));
        let z2 = FgAbelianGroup::cyclic(2).unwrap();
        assert_eq!(cohomological_dimension(&z2, 2), ExtendedNat::Infinite);
        assert_eq!(cohomological_dimension(&z2, 3), ExtendedNat::Finite(0));
    }
}
