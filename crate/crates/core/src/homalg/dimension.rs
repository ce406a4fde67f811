use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functors::Regrading;
use crate::graded::{GradedAlgebra, GradedModule};
use crate::groups::{cohomological_dimension, ExtendedNat, GroupElement};

use super::ext::ext_dims;
use super::resolution::{minimal_resolution, ResolutionStatus};

/// A projective or injective dimension as far as it can be certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DimensionVerdict {
    /// A resolution terminated at this length.
    Exact(usize),
    /// No termination up to the cap: the dimension is at least the cap (in
    /// fact it exceeds it).
    AtLeast(usize),
    Infinite,
    /// The zero module.
    Zero,
}

impl DimensionVerdict {
    pub fn exact(self) -> Option<usize> {
        match self {
            DimensionVerdict::Exact(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for DimensionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionVerdict::Exact(d) => write!(f, "{d}"),
            DimensionVerdict::AtLeast(c) => write!(f, ">= {c} (truncated)"),
            DimensionVerdict::Infinite => write!(f, "infinite"),
            DimensionVerdict::Zero => write!(f, "zero module"),
        }
    }
}

pub fn projective_dimension(m: &Arc<GradedModule>, cap: usize) -> Result<DimensionVerdict> {
    if m.is_zero() {
        return Ok(DimensionVerdict::Zero);
    }
    let res = minimal_resolution(m, cap)?;
    Ok(match res.status() {
        ResolutionStatus::Terminated => DimensionVerdict::Exact(res.length().expect("terminated")),
        ResolutionStatus::Truncated(c) => DimensionVerdict::AtLeast(c),
    })
}

/// Injective dimension of `M` as the projective dimension of `D(M)` over the
/// opposite algebra.
pub fn graded_injective_dimension(m: &Arc<GradedModule>, cap: usize) -> Result<DimensionVerdict> {
    projective_dimension(&Arc::new(m.dual()), cap)
}

/// `D(e_v A)` for every vertex `v`: the indecomposable graded injectives up to shift.
pub fn graded_injectives(a: &Arc<GradedAlgebra>) -> Result<Vec<GradedModule>> {
    let opposite = Arc::new(a.opposite());
    let vertices = a.basic()?.vertex_count();
    (0..vertices)
        .map(|v| {
            let p = GradedModule::projective(opposite.clone(), v, &a.group().zero())?;
            Ok(p.dual_over(a.clone()))
        })
        .collect()
}

/// Whether `Ext^1(S_w(g), I) = 0` for every simple and every shift that can
/// give a nonzero Hom complex.
pub fn is_graded_injective(i: &Arc<GradedModule>) -> Result<bool> {
    let algebra = i.algebra();
    let group = algebra.group();
    let vertices = algebra.basic()?.vertex_count();
    let mut degrees = std::collections::BTreeSet::new();
    for s in i.support() {
        for d in algebra.degrees() {
            degrees.insert(group.sub(&s, d));
        }
    }
    for w in 0..vertices {
        for t in &degrees {
            let s = Arc::new(GradedModule::simple(algebra.clone(), w, &group.neg(t))?);
            if super::ext::graded_ext(&s, i, 1, 1)?.dim != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of one decidable claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Pass => write!(f, "pass"),
            CheckOutcome::Fail(r) => write!(f, "fail: {r}"),
            CheckOutcome::Inconclusive(r) => write!(f, "inconclusive: {r}"),
        }
    }
}

/// `d_G ≤ d_G' ≤ d_G + n` for `d_G = id^G M`, `d_G' = id^{G'} φ_!(M)` and
/// `n = cd(ker φ)`, plus the finite-dimensional fact `d_G = d_G'`.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub cap: usize,
    pub d_g: DimensionVerdict,
    pub d_g_prime: DimensionVerdict,
    pub n: String,
    pub lower: CheckOutcome,
    pub upper: CheckOutcome,
    pub equality: CheckOutcome,
}

impl InequalityReport {
    pub fn outcomes(&self) -> [(&'static str, &CheckOutcome); 3] {
        [("lower", &self.lower), ("upper", &self.upper), ("equality", &self.equality)]
    }
}

fn lower_bound(a: DimensionVerdict, b: DimensionVerdict) -> CheckOutcome {
    use DimensionVerdict::*;
    match (a, b) {
        (Zero, Zero) => CheckOutcome::Pass,
        (Exact(x), Exact(y)) if x <= y => CheckOutcome::Pass,
        (Exact(x), Exact(y)) => CheckOutcome::Fail(format!("{x} > {y}")),
        (Exact(x), AtLeast(c)) if x <= c => CheckOutcome::Pass,
        (AtLeast(c), Exact(y)) if y <= c => CheckOutcome::Fail(format!("d_G exceeds {c} but d_G' = {y}")),
        (_, Infinite) => CheckOutcome::Pass,
        _ => CheckOutcome::Inconclusive("resolution truncated at the cap".into()),
    }
}

fn upper_bound(a: DimensionVerdict, b: DimensionVerdict, n: ExtendedNat) -> CheckOutcome {
    use DimensionVerdict::*;
    let ExtendedNat::Finite(n) = n else {
        return CheckOutcome::Pass;
    };
    let n = n as usize;
    match (a, b) {
        (Zero, Zero) => CheckOutcome::Pass,
        (Exact(x), Exact(y)) if y <= x + n => CheckOutcome::Pass,
        (Exact(x), Exact(y)) => CheckOutcome::Fail(format!("{y} > {x} + {n}")),
        (AtLeast(c), Exact(y)) if y <= c => CheckOutcome::Pass,
        (Exact(x), AtLeast(c)) if x + n <= c => CheckOutcome::Fail(format!("d_G' exceeds {c} >= {x} + {n}")),
        (Infinite, _) => CheckOutcome::Pass,
        _ => CheckOutcome::Inconclusive("resolution truncated at the cap".into()),
    }
}

fn equality(a: DimensionVerdict, b: DimensionVerdict) -> CheckOutcome {
    use DimensionVerdict::*;
    match (a, b) {
        (Exact(x), Exact(y)) if x == y => CheckOutcome::Pass,
        (Zero, Zero) => CheckOutcome::Pass,
        (Exact(_), AtLeast(_)) | (AtLeast(_), Exact(_)) | (Exact(_), Exact(_)) => {
            CheckOutcome::Fail(format!("{a} differs from {b}"))
        }
        _ => CheckOutcome::Inconclusive("resolution truncated at the cap".into()),
    }
}

impl Regrading {
    /// Compares injective dimensions before and after regrading.
    pub fn verify_inequality(&self, m: &Arc<GradedModule>, cap: usize) -> Result<InequalityReport> {
        let d_g = graded_injective_dimension(m, cap)?;
        let pushed = Arc::new(self.pushforward(m)?);
        let d_g_prime = graded_injective_dimension(&pushed, cap)?;
        let n = cohomological_dimension(&self.kernel().group, self.source_algebra().field().characteristic());
        Ok(InequalityReport {
            cap,
            d_g,
            d_g_prime,
            n: n.to_string(),
            lower: lower_bound(d_g, d_g_prime),
            upper: upper_bound(d_g, d_g_prime, n),
            equality: equality(d_g, d_g_prime),
        })
    }

    /// `Ext^i(φ_! M, φ_! I)` for `1 ≤ i ≤ cap`, where `I` is the injective
    /// `D(e_v A)` shifted by `shift`.
    pub fn verify_acyclicity(
        &self,
        m: &Arc<GradedModule>,
        vertex: usize,
        shift: &GroupElement,
        cap: usize,
    ) -> Result<AcyclicityReport> {
        if cap == 0 {
            return Err(Error::Unsupported("acyclicity needs cap at least 1".into()));
        }
        let injectives = graded_injectives(self.source_algebra())?;
        let injective = injectives
            .get(vertex)
            .ok_or_else(|| Error::InvalidModule(format!("no vertex {vertex}")))?
            .shift(shift);
        let pm = Arc::new(self.pushforward(m)?);
        let pi = Arc::new(self.pushforward(&injective)?);
        let res = minimal_resolution(&pm, cap)?;
        let dims = ext_dims(&res, &pi)?;
        let ext: Vec<usize> = dims.into_iter().skip(1).collect();
        let ext = if ext.len() < cap {
            // terminated early: the remaining groups vanish
            let mut e = ext;
            e.resize(cap, 0);
            e
        } else {
            ext
        };
        let first_nonzero = ext.iter().position(|&d| d != 0).map(|p| p + 1);
        Ok(AcyclicityReport {
            cap,
            ext,
            first_nonzero,
            resolution_truncated: matches!(res.status(), ResolutionStatus::Truncated(_)),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AcyclicityReport {
    pub cap: usize,
    /// `dim Ext^i` for `i = 1..=cap`.
    pub ext: Vec<usize>,
    pub first_nonzero: Option<usize>,
    pub resolution_truncated: bool,
}

impl AcyclicityReport {
    pub fn acyclic(&self) -> bool {
        self.first_nonzero.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::groups::{FgAbelianGroup, GroupMorphism};
    use crate::linalg::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn projective_dimension_examples() {
        let a = fixtures::kronecker(Q).unwrap().algebra;
        let zero = a.group().zero();
        let p = Arc::new(GradedModule::projective(a.clone(), 0, &zero).unwrap());
        assert_eq!(projective_dimension(&p, 4).unwrap(), DimensionVerdict::Exact(0));
        let s = Arc::new(GradedModule::simple(a, 0, &zero).unwrap());
        assert_eq!(projective_dimension(&s, 4).unwrap(), DimensionVerdict::Exact(1));
        let d = fixtures::dual_numbers(Q).unwrap().algebra;
        let s = Arc::new(GradedModule::simple(d.clone(), 0, &d.group().zero()).unwrap());
        assert_eq!(projective_dimension(&s, 5).unwrap(), DimensionVerdict::AtLeast(5));
    }

    #[test]
    fn injective_dimension_examples() {
        let d = fixtures::dual_numbers(Q).unwrap().algebra;
        let reg = Arc::new(GradedModule::regular(d.clone()).unwrap());
        assert_eq!(graded_injective_dimension(&reg, 4).unwrap(), DimensionVerdict::Exact(0));
        let k = fixtures::kronecker(Q).unwrap().algebra;
        let s2 = Arc::new(GradedModule::simple(k.clone(), 1, &k.group().zero()).unwrap());
        assert_eq!(graded_injective_dimension(&s2, 4).unwrap(), DimensionVerdict::Exact(1));
        let s1 = Arc::new(GradedModule::simple(k.clone(), 0, &k.group().zero()).unwrap());
        assert_eq!(graded_injective_dimension(&s1, 4).unwrap(), DimensionVerdict::Exact(0));
    }

    #[test]
    fn injectives_of_fixtures() {
        let k = fixtures::ground_field(Q, FgAbelianGroup::free(1)).unwrap().algebra;
        let inj = graded_injectives(&k).unwrap();
        assert_eq!(inj.len(), 1);
        assert_eq!(inj[0].total_dim(), 1);
        let kr = fixtures::kronecker(Q).unwrap().algebra;
        let inj = graded_injectives(&kr).unwrap();
        assert_eq!(inj.iter().map(GradedModule::total_dim).collect::<Vec<_>>(), vec![1, 3]);
        for i in inj {
            let i = Arc::new(i);
            assert!(i.validate().is_ok());
            assert!(is_graded_injective(&i).unwrap());
            assert_eq!(graded_injective_dimension(&i, 3).unwrap(), DimensionVerdict::Exact(0));
        }
        let d = fixtures::dual_numbers(Q).unwrap().algebra;
        let inj = graded_injectives(&d).unwrap();
        let shifted = GradedModule::regular(d.clone()).unwrap().shift(&GroupElement::new(vec![1]));
        assert_eq!(inj[0].dims(), shifted.dims());
        let s = Arc::new(GradedModule::simple(d, 0, &GroupElement::new(vec![0])).unwrap());
        assert!(!is_graded_injective(&s).unwrap());
    }

    #[test]
    fn inequality_for_collapse() {
        let d = fixtures::dual_numbers(Q).unwrap().algebra;
        let r = Regrading::new(d.clone(), GroupMorphism::zero(d.group(), &FgAbelianGroup::trivial())).unwrap();
        let reg = Arc::new(GradedModule::regular(d.clone()).unwrap());
        let rep = r.verify_inequality(&reg, 4).unwrap();
        assert_eq!((rep.d_g, rep.d_g_prime), (DimensionVerdict::Exact(0), DimensionVerdict::Exact(0)));
        assert_eq!(rep.n, "1");
        assert!(rep.lower.is_pass() && rep.upper.is_pass() && rep.equality.is_pass());
        let s = Arc::new(GradedModule::simple(d, 0, &GroupElement::new(vec![0])).unwrap());
        let rep = r.verify_inequality(&s, 3).unwrap();
        assert!(matches!(rep.lower, CheckOutcome::Inconclusive(_)));
    }

    #[test]
    fn acyclicity_for_collapse() {
        let d = fixtures::dual_numbers(Q).unwrap().algebra;
        let r = Regrading::new(d.clone(), GroupMorphism::zero(d.group(), &FgAbelianGroup::trivial())).unwrap();
        let s = Arc::new(GradedModule::simple(d.clone(), 0, &GroupElement::new(vec![0])).unwrap());
        let rep = r.verify_acyclicity(&s, 0, &GroupElement::new(vec![0]), 4).unwrap();
        assert!(rep.acyclic(), "{rep:?}");
        assert_eq!(rep.ext.len(), 4);
    }
}
