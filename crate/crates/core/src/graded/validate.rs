use std::fmt;

use serde::Serialize;

use crate::linalg::{Matrix, Scalar};

use super::algebra::GradedAlgebra;
use super::map::GradedMap;
use super::module::GradedModule;

/// One violated invariant, naming the offending basis indices (and degree,
/// for modules and maps).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationFailure {
    DegreeCompatibility { i: usize, j: usize, k: usize },
    Associativity { i: usize, j: usize, k: usize },
    Unit { detail: String },
    Radical { detail: String },
    ModuleAxiom { i: usize, j: usize, degree: String },
    ModuleUnit { degree: String },
    Linearity { i: usize, degree: String },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::DegreeCompatibility { i, j, k } => {
                write!(f, "degree compatibility: a_{i} a_{j} has a component on a_{k} of the wrong degree")
            }
            ValidationFailure::Associativity { i, j, k } => write!(f, "associativity fails on ({i}, {j}, {k})"),
            ValidationFailure::Unit { detail } => write!(f, "unit: {detail}"),
            ValidationFailure::Radical { detail } => write!(f, "radical: {detail}"),
            ValidationFailure::ModuleAxiom { i, j, degree } => {
                write!(f, "module axiom fails for pair ({i}, {j}) at degree {degree}")
            }
            ValidationFailure::ModuleUnit { degree } => write!(f, "unit does not act as identity at degree {degree}"),
            ValidationFailure::Linearity { i, degree } => {
                write!(f, "map does not commute with a_{i} at degree {degree}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "all checks pass");
        }
        for (n, failure) in self.failures.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{failure}")?;
        }
        Ok(())
    }
}

impl GradedAlgebra {
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let n = self.dim();
        let group = self.group();
        for i in 0..n {
            for j in 0..n {
                let expected = group.add(self.degree(i), self.degree(j));
                for (k, c) in self.product(i, j).iter().enumerate() {
                    if !c.is_zero() && self.degree(k) != &expected {
                        failures.push(ValidationFailure::DegreeCompatibility { i, j, k });
                    }
                }
            }
        }
        let basis = |k: usize| -> Vec<Scalar> {
            (0..n).map(|i| if i == k { self.field().one() } else { self.field().zero() }).collect()
        };
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j).to_vec();
                for k in 0..n {
                    let left = self.multiply(&ij, &basis(k));
                    let right = self.multiply(&basis(i), self.product(j, k));
                    if left != right {
                        failures.push(ValidationFailure::Associativity { i, j, k });
                    }
                }
            }
        }
        let zero = group.zero();
        if self.unit().iter().enumerate().any(|(k, c)| !c.is_zero() && self.degree(k) != &zero) {
            failures.push(ValidationFailure::Unit { detail: "unit is not homogeneous of trivial degree".into() });
        }
        for i in 0..n {
            let b = basis(i);
            if self.multiply(self.unit(), &b) != b || self.multiply(&b, self.unit()) != b {
                failures.push(ValidationFailure::Unit { detail: format!("unit does not fix a_{i}") });
            }
        }
        if let Some(radical) = self.radical() {
            failures.extend(self.radical_failures(radical));
        }
        ValidationReport { failures }
    }

    fn radical_failures(&self, radical: &[usize]) -> Vec<ValidationFailure> {
        let n = self.dim();
        let mut failures = Vec::new();
        let outside = |v: &[Scalar]| v.iter().enumerate().any(|(k, c)| !c.is_zero() && !radical.contains(&k));
        for i in 0..n {
            for &r in radical {
                if outside(self.product(i, r)) || outside(self.product(r, i)) {
                    failures.push(ValidationFailure::Radical {
                        detail: format!("not a two-sided ideal: product of a_{i} and a_{r} leaves it"),
                    });
                }
            }
        }
        if !failures.is_empty() {
            return failures;
        }
        // Nilpotency: J^{k+1} = J^k J must reach zero.
        let field = self.field();
        let unit_vec = |k: usize| -> Vec<Scalar> {
            (0..n).map(|i| if i == k { field.one() } else { field.zero() }).collect()
        };
        let mut power: Vec<Vec<Scalar>> = radical.iter().map(|&r| unit_vec(r)).collect();
        let mut dim = power.len();
        let mut nilpotent = dim == 0;
        for _ in 0..=n {
            if dim == 0 {
                nilpotent = true;
                break;
            }
            let mut products = Vec::new();
            for x in &power {
                for &r in radical {
                    products.push(self.multiply(x, &unit_vec(r)));
                }
            }
            let m = Matrix::from_columns(field, n, &products).column_space();
            let next = m.cols();
            power = (0..next).map(|c| m.column(c)).collect();
            if next == dim {
                break;
            }
            dim = next;
        }
        if !nilpotent {
            failures.push(ValidationFailure::Radical { detail: "designated radical is not nilpotent".into() });
            return failures;
        }
        if !self.quotient_is_semisimple(radical) {
            failures.push(ValidationFailure::Radical {
                detail: "quotient by the designated radical is not certified semisimple".into(),
            });
        }
        failures
    }

    // A/J is semisimple if its trace form is nondegenerate, or if it is spanned
    // by orthogonal idempotents (covers characteristics where the trace form
    // degenerates).
    fn quotient_is_semisimple(&self, radical: &[usize]) -> bool {
        let field = self.field();
        let complement: Vec<usize> = (0..self.dim()).filter(|i| !radical.contains(i)).collect();
        let q = complement.len();
        let left = |c: usize| -> Matrix {
            let mut m = Matrix::zero(field, q, q);
            for (col, &y) in complement.iter().enumerate() {
                let p = self.product(complement[c], y);
                for (row, &k) in complement.iter().enumerate() {
                    m.set(row, col, p[k].clone());
                }
            }
            m
        };
        let lefts: Vec<Matrix> = (0..q).map(left).collect();
        let mut form = Matrix::zero(field, q, q);
        for a in 0..q {
            for b in 0..q {
                let prod = lefts[a].mul(&lefts[b]).expect("square matrices");
                let mut trace = field.zero();
                for d in 0..q {
                    trace = &trace + &prod[(d, d)];
                }
                form.set(a, b, trace);
            }
        }
        if form.rank() == q {
            return true;
        }
        complement.iter().all(|&e| {
            complement.iter().all(|&f| {
                let p = self.product(e, f);
                p.iter().enumerate().all(|(k, c)| {
                    if radical.contains(&k) {
                        true
                    } else if e == f && k == e {
                        c.is_one()
                    } else {
                        c.is_zero()
                    }
                })
            })
        })
    }
}

impl GradedModule {
    /// Module axioms on every basis pair and every degree, and the unit.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let algebra = self.algebra();
        let group = self.group();
        let n = algebra.dim();
        for g in self.support() {
            for j in 0..n {
                let aj = self.act(j, &g);
                let mid = group.add(&g, algebra.degree(j));
                for i in 0..n {
                    let lhs = self.act(i, &mid).mul(&aj).expect("composable blocks");
                    let d = group.add(algebra.degree(i), algebra.degree(j));
                    let rhs = self.act_element(algebra.product(i, j), &d, &g);
                    if lhs != rhs {
                        failures.push(ValidationFailure::ModuleAxiom { i, j, degree: g.to_string() });
                    }
                }
            }
            let unit = self.act_element(algebra.unit(), &group.zero(), &g);
            if unit != Matrix::identity(self.field(), self.dim(&g)) {
                failures.push(ValidationFailure::ModuleUnit { degree: g.to_string() });
            }
        }
        ValidationReport { failures }
    }
}

impl GradedMap {
    /// Commutation with the action of every algebra basis element.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let (m, n) = (self.source(), self.target());
        let algebra = m.algebra();
        let group = m.group();
        for g in m.support() {
            for i in 0..algebra.dim() {
                let d = algebra.degree(i);
                let lhs = self.block(&group.add(&g, d)).mul(&m.act(i, &g)).expect("composable blocks");
                let rhs = n.act(i, &group.add(&g, self.degree())).mul(&self.block(&g)).expect("composable blocks");
                if lhs != rhs {
                    failures.push(ValidationFailure::Linearity { i, degree: g.to_string() });
                }
            }
        }
        ValidationReport { failures }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::fixtures;
    use crate::graded::GradedVectorSpace;
    use crate::groups::{FgAbelianGroup, GroupElement};
    use crate::linalg::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn raw_dual_numbers(x_degree: i64, xx: i64) -> crate::Result<GradedAlgebra> {
        let s = |v: &[i64]| v.iter().map(|&x| Q.from_i64(x)).collect::<Vec<_>>();
        let products = vec![vec![s(&[1, 0]), s(&[0, 1])], vec![s(&[0, 1]), s(&[xx, 0])]];
        GradedAlgebra::from_structure_constants(
            Q,
            FgAbelianGroup::free(1),
            vec!["e".into(), "x".into()],
            vec![GroupElement::new(vec![0]), GroupElement::new(vec![x_degree])],
            products,
            s(&[1, 0]),
            Some(vec![1]),
        )
    }

    #[test]
    fn raw_algebra_passes() {
        assert!(raw_dual_numbers(1, 0).unwrap().validate().is_ok());
    }

    #[test]
    fn planted_degree_defect() {
        // x * x = e has degree 0, but x has degree 1.
        let r = raw_dual_numbers(1, 1).unwrap().validate();
        assert!(r.failures.contains(&ValidationFailure::DegreeCompatibility { i: 1, j: 1, k: 0 }));
    }

    #[test]
    fn radical_must_be_nilpotent() {
        // k[x]/(x^2 - 1) with x in degree 0: {x} is not an ideal.
        let r = raw_dual_numbers(0, 1).unwrap().validate();
        assert!(r.failures.iter().any(|f| matches!(f, ValidationFailure::Radical { .. })));
    }

    #[test]
    fn planted_module_defect() {
        let a = fixtures::dual_numbers(Q).unwrap().algebra;
        // x acts nonzero on a module concentrated in degrees 0, 1, 2: x^2 != 0
        let g = |x: i64| GroupElement::new(vec![x]);
        let dims = BTreeMap::from([(g(0), 1), (g(1), 1), (g(2), 1)]);
        let space = GradedVectorSpace::from_dims(a.group().clone(), &dims, "m").unwrap();
        let one = Matrix::from_i64(Q, &[vec![1]]);
        let actions = BTreeMap::from([
            (0, dims.keys().map(|k| (k.clone(), one.clone())).collect()),
            (1, BTreeMap::from([(g(0), one.clone()), (g(1), one.clone())])),
        ]);
        let m = GradedModule::from_generator_actions(a, space, &actions).unwrap();
        let r = m.validate();
        assert!(r.failures.contains(&ValidationFailure::ModuleAxiom { i: 1, j: 1, degree: "0".into() }));
    }
}
