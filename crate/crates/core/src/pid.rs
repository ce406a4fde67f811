//! Injective dimensions of finitely built `Z`-graded modules over `k[t]`
//! (`deg t = 1`), where the resolution engine does not apply.
//!
//! A module is a finite sum of shifted atoms: `F = k[t]`, `L = k[t, t^-1]` and
//! `T(m) = k[t]/(t^m)`. The graded and ungraded injective dimensions of each
//! atom are known in closed form, and a sum takes the maximum.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{cohomological_dimension, ExtendedNat, FgAbelianGroup};
use crate::homalg::{CheckOutcome, DimensionVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "m")]
pub enum Atom {
    F,
    L,
    T(u32),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::F => write!(f, "k[t]"),
            Atom::L => write!(f, "k[t,t^-1]"),
            Atom::T(m) => write!(f, "k[t]/(t^{m})"),
        }
    }
}

impl Atom {
    /// `(graded, ungraded)` injective dimension.
    pub fn injective_dimensions(self) -> (usize, usize) {
        match self {
            Atom::F => (1, 1),
            // graded-injective (every homogeneous element is invertible) but not divisible-injective over k[t]
            Atom::L => (0, 1),
            // 0 -> T(m) -> k[t^-1] -> k[t^-1](-m) -> 0 by graded injectives; not injective itself
            Atom::T(_) => (1, 1),
        }
    }
}

/// A finite multiset of shifted atoms `atom(shift)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PidGradedModule {
    atoms: Vec<(Atom, i64)>,
}

impl PidGradedModule {
    pub fn new(atoms: Vec<(Atom, i64)>) -> Result<Self> {
        if atoms.iter().any(|(a, _)| matches!(a, Atom::T(0))) {
            return Err(Error::InvalidModule("T(m) needs m >= 1".into()));
        }
        Ok(PidGradedModule { atoms })
    }

    pub fn atoms(&self) -> &[(Atom, i64)] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn shift(&self, s: i64) -> Self {
        PidGradedModule { atoms: self.atoms.iter().map(|&(a, k)| (a, k + s)).collect() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        PidGradedModule { atoms }
    }

    /// `(graded, ungraded)` injective dimensions; both are `Zero` for the zero module.
    pub fn injective_dimensions(&self) -> (DimensionVerdict, DimensionVerdict) {
        if self.is_zero() {
            return (DimensionVerdict::Zero, DimensionVerdict::Zero);
        }
        let (g, u) = self
            .atoms
            .iter()
            .map(|(a, _)| a.injective_dimensions())
            .fold((0, 0), |(g, u), (x, y)| (g.max(x), u.max(y)));
        (DimensionVerdict::Exact(g), DimensionVerdict::Exact(u))
    }
}

impl fmt::Display for PidGradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.atoms.iter().map(|(a, s)| format!("{a}({s})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One row of the sharpness report for `φ: Z -> 0`.
#[derive(Clone, Debug, Serialize)]
pub struct SharpnessCase {
    pub module: String,
    pub graded: DimensionVerdict,
    pub ungraded: DimensionVerdict,
    pub n: usize,
    pub inequalities: CheckOutcome,
    pub left_equality: bool,
    pub right_equality: bool,
    pub expected: CheckOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport {
    pub n: String,
    pub cases: Vec<SharpnessCase>,
}

impl SharpnessReport {
    pub fn passed(&self) -> bool {
        self.n == "1" && self.cases.iter().all(|c| c.inequalities.is_pass() && c.expected.is_pass())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sharp {
    Left,
    Right,
    Both,
    Neither,
}

fn case(module: PidGradedModule, n: usize, expect: Option<Sharp>) -> SharpnessCase {
    let (graded, ungraded) = module.injective_dimensions();
    let (g, u) = (graded.exact().unwrap_or(0), ungraded.exact().unwrap_or(0));
    let inequalities = if g <= u && u <= g + n {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!("{g} <= {u} <= {g} + {n} fails"))
    };
    let left_equality = g == u;
    let right_equality = u == g + n;
    let got = match (left_equality, right_equality) {
        (true, false) => Sharp::Left,
        (false, true) => Sharp::Right,
        (true, true) => Sharp::Both,
        (false, false) => Sharp::Neither,
    };
    let expected = match expect {
        Some(side) if side != got => CheckOutcome::Fail("sharpness differs from the expected side".into()),
        _ => CheckOutcome::Pass,
    };
    SharpnessCase { module: module.to_string(), graded, ungraded, n, inequalities, left_equality, right_equality, expected }
}

/// `k[t]` attains the lower bound, `k[t, t^-1]` the upper bound, for
/// `φ: Z -> 0` with `n = cd(Z) = 1`. For `F + L` only the bounds are checked;
/// no sharpness is claimed.
pub fn verify_sharpness() -> SharpnessReport {
    let cd = cohomological_dimension(&FgAbelianGroup::free(1), 0);
    let n = match cd {
        ExtendedNat::Finite(n) => n as usize,
        ExtendedNat::Infinite => usize::MAX,
    };
    let f = PidGradedModule::new(vec![(Atom::F, 0)]).expect("valid atoms");
    let l = PidGradedModule::new(vec![(Atom::L, 0)]).expect("valid atoms");
    let cases = vec![
        case(f.clone(), n, Some(Sharp::Left)),
        case(l.clone(), n, Some(Sharp::Right)),
        case(f.direct_sum(&l), n, None),
    ];
    SharpnessReport { n: cd.to_string(), cases }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_table() {
        let one = |a| PidGradedModule::new(vec![(a, 0)]).unwrap().injective_dimensions();
        assert_eq!(one(Atom::F), (DimensionVerdict::Exact(1), DimensionVerdict::Exact(1)));
        assert_eq!(one(Atom::L), (DimensionVerdict::Exact(0), DimensionVerdict::Exact(1)));
        assert_eq!(one(Atom::T(3)), (DimensionVerdict::Exact(1), DimensionVerdict::Exact(1)));
        assert_eq!(
            PidGradedModule::default().injective_dimensions(),
            (DimensionVerdict::Zero, DimensionVerdict::Zero)
        );
        assert!(PidGradedModule::new(vec![(Atom::T(0), 0)]).is_err());
    }

    #[test]
    fn shifts_and_sums() {
        let m = PidGradedModule::new(vec![(Atom::L, 2), (Atom::T(2), -1)]).unwrap();
        assert_eq!(m.injective_dimensions(), m.shift(7).injective_dimensions());
        assert_eq!(m.injective_dimensions().0, DimensionVerdict::Exact(1));
    }

    #[test]
    fn sharpness() {
        let r = verify_sharpness();
        assert!(r.passed());
        assert!(r.cases[0].left_equality && !r.cases[0].right_equality);
        assert!(r.cases[1].right_equality && !r.cases[1].left_equality);
        assert_eq!(r.cases[2].graded, DimensionVerdict::Exact(1));
    }
}
