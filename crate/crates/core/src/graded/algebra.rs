use crate::error::{Error, Result};
use crate::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
use crate::linalg::{FieldSpec, Matrix, Scalar};

/// A finite-dimensional algebra graded by a finitely generated abelian group,
/// given by a homogeneous basis and structure constants.
///
/// `product(i, j)` is the coefficient vector of `a_i * a_j`. Construction only
/// checks shapes; the algebra axioms are checked by [`GradedAlgebra::validate`](crate::graded::validate)
/// so that defective inputs can be reported rather than rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: FieldSpec,
    group: FgAbelianGroup,
    labels: Vec<String>,
    degrees: Vec<GroupElement>,
    products: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    radical: Option<Vec<usize>>,
    generators: Vec<usize>,
    // factorization[b] lists generator indices, first applied first:
    // a_b = a_{f_k} * ... * a_{f_1}
    factorization: Vec<Vec<usize>>,
    basic: Option<BasicStructure>,
}

/// Vertex data of a basic algebra whose basis is adapted to a complete set of
/// primitive orthogonal idempotents: every basis element `b` satisfies
/// `e_t b e_s = b` for exactly one pair of vertices `(t, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicStructure {
    /// Basis index of the idempotent of each vertex.
    pub idempotents: Vec<usize>,
    /// `(target, source)` vertex of every basis element.
    pub ends: Vec<(usize, usize)>,
}

impl BasicStructure {
    pub fn vertex_count(&self) -> usize {
        self.idempotents.len()
    }

    pub fn source(&self, b: usize) -> usize {
        self.ends[b].1
    }

    pub fn target(&self, b: usize) -> usize {
        self.ends[b].0
    }
}

impl GradedAlgebra {
    /// Raw structure constants. `radical`, when given, designates the basis
    /// elements spanning the graded Jacobson radical.
    pub fn from_structure_constants(
        field: FieldSpec,
        group: FgAbelianGroup,
        labels: Vec<String>,
        degrees: Vec<GroupElement>,
        products: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        radical: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        let dim = (0..n).collect::<Vec<_>>();
        Self::assemble(field, group, labels, degrees, products, unit, radical, dim.clone(), dim.into_iter().map(|i| vec![i]).collect())
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        field: FieldSpec,
        group: FgAbelianGroup,
        labels: Vec<String>,
        degrees: Vec<GroupElement>,
        products: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
        radical: Option<Vec<usize>>,
        generators: Vec<usize>,
        factorization: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        if degrees.len() != n || unit.len() != n || products.len() != n || factorization.len() != n {
            return Err(Error::InvalidAlgebra("basis, degrees, unit and products disagree in length".into()));
        }
        if let Some(d) = degrees.iter().find(|d| !group.contains(d)) {
            return Err(Error::InvalidAlgebra(format!("degree {d} is not an element of {group}")));
        }
        for row in &products {
            if row.len() != n || row.iter().any(|v| v.len() != n) {
                return Err(Error::InvalidAlgebra("structure constants must be n x n x n".into()));
            }
        }
        if products.iter().flatten().flatten().chain(&unit).any(|x| !field.contains(x)) {
            return Err(Error::InvalidAlgebra(format!("coefficients outside {field}")));
        }
        if let Some(r) = &radical {
            if r.iter().any(|&i| i >= n) {
                return Err(Error::InvalidAlgebra("radical index out of range".into()));
            }
        }
        let mut labels_sorted = labels.clone();
        labels_sorted.sort();
        labels_sorted.dedup();
        if labels_sorted.len() != n {
            return Err(Error::InvalidAlgebra("basis labels must be distinct".into()));
        }
        let mut a = GradedAlgebra {
            field,
            group,
            labels,
            degrees,
            products,
            unit,
            radical,
            generators,
            factorization,
            basic: None,
        };
        a.basic = a.detect_basic();
        Ok(a)
    }

    fn detect_basic(&self) -> Option<BasicStructure> {
        let radical = self.radical.as_ref()?;
        let idempotents: Vec<usize> = (0..self.dim()).filter(|i| !radical.contains(i)).collect();
        let zero = self.field.zero();
        let one = self.field.one();
        let basis_vector = |k: usize| -> Vec<Scalar> {
            (0..self.dim()).map(|i| if i == k { one.clone() } else { zero.clone() }).collect()
        };
        for &e in &idempotents {
            for &f in &idempotents {
                let expected = if e == f { basis_vector(e) } else { vec![zero.clone(); self.dim()] };
                if self.products[e][f] != expected {
                    return None;
                }
            }
        }
        let mut sum = vec![zero.clone(); self.dim()];
        for &e in &idempotents {
            sum[e] = one.clone();
        }
        if sum != self.unit {
            return None;
        }
        let mut ends = Vec::with_capacity(self.dim());
        for b in 0..self.dim() {
            let bv = basis_vector(b);
            let t: Vec<usize> = (0..idempotents.len()).filter(|&v| self.products[idempotents[v]][b] == bv).collect();
            let s: Vec<usize> = (0..idempotents.len()).filter(|&v| self.products[b][idempotents[v]] == bv).collect();
            if t.len() != 1 || s.len() != 1 {
                return None;
            }
            ends.push((t[0], s[0]));
        }
        Some(BasicStructure { idempotents, ends })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, i: usize) -> &GroupElement {
        &self.degrees[i]
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        &self.products[i][j]
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn radical(&self) -> Option<&[usize]> {
        self.radical.as_deref()
    }

    /// Basis indices generating the algebra; module axioms and Hom equations
    /// only need the action of these.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn factorization(&self, b: usize) -> &[usize] {
        &self.factorization[b]
    }

    /// Vertex data, required for projective covers.
    pub fn basic(&self) -> Result<&BasicStructure> {
        self.basic.as_ref().ok_or_else(|| {
            Error::NoRadical(
                "need a designated radical whose complement is a complete set of orthogonal idempotents".into(),
            )
        })
    }

    pub fn vertex_label(&self, v: usize) -> Result<&str> {
        Ok(self.label(self.basic()?.idempotents[v]))
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        let basic = self.basic.as_ref()?;
        let idx = self.index_of(label)?;
        basic.idempotents.iter().position(|&e| e == idx)
    }

    /// Left multiplication by `a_i` as a matrix on the whole algebra.
    pub fn left_multiplication(&self, i: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for j in 0..n {
            for k in 0..n {
                m.set(k, j, self.products[i][j][k].clone());
            }
        }
        m
    }

    /// Multiplies two coefficient vectors.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, p) in self.products[i][j].iter().enumerate() {
                    out[k].add_product(&c, p);
                }
            }
        }
        out
    }

    /// Same basis with `a ·_op b = b · a`. Applying this twice gives back an
    /// equal algebra.
    pub fn opposite(&self) -> GradedAlgebra {
        let n = self.dim();
        let products = (0..n).map(|i| (0..n).map(|j| self.products[j][i].clone()).collect()).collect();
        let factorization = self.factorization.iter().map(|f| f.iter().rev().copied().collect()).collect();
        let basic = self.basic.as_ref().map(|b| BasicStructure {
            idempotents: b.idempotents.clone(),
            ends: b.ends.iter().map(|&(t, s)| (s, t)).collect(),
        });
        GradedAlgebra {
            products,
            factorization,
            basic,
            ..self.clone()
        }
    }

    /// The same algebra graded by `phi.codomain()` through `phi`.
    pub fn regraded(&self, phi: &GroupMorphism) -> Result<GradedAlgebra> {
        if phi.domain() != &self.group {
            return Err(Error::Incompatible(format!(
                "morphism domain {} differs from grading group {}",
                phi.domain(),
                self.group
            )));
        }
        Ok(GradedAlgebra {
            group: phi.codomain().clone(),
            degrees: self.degrees.iter().map(|d| phi.apply(d)).collect(),
            ..self.clone()
        })
    }
}
