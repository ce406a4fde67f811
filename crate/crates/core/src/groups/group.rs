use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::smith::{smith_normal_form, IntMatrix};

/// `Z^rank x Z/m_1 x ... x Z/m_s` with `m_1 | m_2 | ... | m_s` and every `m_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<i64>,
}

/// Coordinates with respect to the canonical generators of a group: the free
/// part first, then one residue per torsion factor. Arithmetic goes through
/// the owning [`FgAbelianGroup`], which keeps residues reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn new(coords: Vec<i64>) -> Self {
        GroupElement(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for GroupElement {
    fn from(v: Vec<i64>) -> Self {
        GroupElement(v)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FgAbelianGroup {
    /// Builds a group already in canonical form; rejects a torsion list that is
    /// not a divisibility chain of integers `>= 2`.
    pub fn new(rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("torsion order {m} < 2")));
        }
        if torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!("torsion {torsion:?} is not a divisibility chain")));
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    /// Canonical form of `Z^rank x Z/n_1 x ... x Z/n_k` for arbitrary positive moduli,
    /// computed by Smith normal form of the diagonal relation matrix.
    pub fn canonical(rank: usize, moduli: &[i64]) -> Result<Self> {
        if let Some(m) = moduli.iter().find(|&&m| m < 1) {
            return Err(Error::InvalidGroup(format!("modulus {m} must be positive")));
        }
        let k = moduli.len();
        let mut rel = IntMatrix::zero(k, k);
        for (i, &m) in moduli.iter().enumerate() {
            rel[(i, i)] = BigInt::from(m);
        }
        let torsion = smith_normal_form(&rel)
            .invariants
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_i64().expect("invariant factor fits in i64"))
            .collect();
        Self::new(rank, torsion)
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(m: i64) -> Result<Self> {
        Self::new(0, vec![m])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// Number of canonical generators (length of coordinate vectors).
    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().map(|&m| m as u64).product())
    }

    /// Order of the `i`-th canonical generator; `None` for free generators.
    pub fn generator_order(&self, i: usize) -> Option<i64> {
        (i >= self.rank).then(|| self.torsion[i - self.rank])
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.ngens()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![0; self.ngens()];
        c[i] = 1;
        self.reduce(c)
    }

    /// Reduces torsion coordinates into `[0, m_i)`.
    pub fn reduce(&self, mut coords: Vec<i64>) -> GroupElement {
        debug_assert_eq!(coords.len(), self.ngens());
        for (i, &m) in self.torsion.iter().enumerate() {
            coords[self.rank + i] = coords[self.rank + i].rem_euclid(m);
        }
        GroupElement(coords)
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement> {
        if coords.len() != self.ngens() {
            return Err(Error::InvalidGroup(format!(
                "element {coords:?} has {} coordinates, group needs {}",
                coords.len(),
                self.ngens()
            )));
        }
        Ok(self.reduce(coords))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.ngens()
            && self.torsion.iter().enumerate().all(|(i, &m)| (0..m).contains(&g.0[self.rank + i]))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.reduce(a.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.reduce(a.0.iter().map(|x| k * x).collect())
    }

    pub fn free_part<'a>(&self, g: &'a GroupElement) -> &'a [i64] {
        &g.0[..self.rank]
    }

    pub fn torsion_part<'a>(&self, g: &'a GroupElement) -> &'a [i64] {
        &g.0[self.rank..]
    }

    /// All elements of a finite group, in lexicographic order of residues.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &m in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..m).map(move |r| {
                        let mut p = prefix.clone();
                        p.push(r);
                        p
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(GroupElement).collect())
    }

    /// Elements whose free coordinates lie in `[-radius, radius]`; torsion
    /// coordinates range over all residues.
    pub fn box_elements(&self, radius: i64) -> Vec<GroupElement> {
        let mut out = vec![Vec::new()];
        let ranges: Vec<(i64, i64)> = (0..self.rank)
            .map(|_| (-radius, radius))
            .chain(self.torsion.iter().map(|&m| (0, m - 1)))
            .collect();
        for (lo, hi) in ranges {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (lo..=hi).map(move |r| {
                        let mut p = prefix.clone();
                        p.push(r);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(GroupElement).collect()
    }

    /// Relation matrix of the canonical presentation: one column per torsion factor.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut r = IntMatrix::zero(self.ngens(), self.torsion.len());
        for (i, &m) in self.torsion.iter().enumerate() {
            r[(self.rank + i, i)] = BigInt::from(m);
        }
        r
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z/{m}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A natural number or infinity; infinity is the top element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtendedNat {
    Finite(u64),
    Infinite,
}

impl ExtendedNat {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Finite(n) => Some(n),
            ExtendedNat::Infinite => None,
        }
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(n) => write!(f, "{n}"),
            ExtendedNat::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merges_coprime_factors() {
        let g = FgAbelianGroup::canonical(1, &[2, 3, 4]).unwrap();
        assert_eq!(g.torsion(), &[2, 12]);
        assert_eq!(g.rank(), 1);
        assert_eq!(FgAbelianGroup::canonical(0, &[1, 1]).unwrap(), FgAbelianGroup::trivial());
    }

    #[test]
    fn rejects_non_chain() {
        assert!(FgAbelianGroup::new(0, vec![2, 3]).is_err());
        assert!(FgAbelianGroup::new(0, vec![1]).is_err());
    }

    #[test]
    fn torsion_reduced() {
        let g = FgAbelianGroup::new(1, vec![4]).unwrap();
        let a = g.element(vec![3, 7]).unwrap();
        assert_eq!(a.coords(), &[3, 3]);
        assert_eq!(g.add(&a, &a).coords(), &[6, 2]);
        assert_eq!(g.neg(&a).coords(), &[-3, 1]);
    }

    #[test]
    fn enumerates_finite_group() {
        let g = FgAbelianGroup::new(0, vec![2, 4]).unwrap();
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 8);
        assert_eq!(g.order(), Some(8));
        assert!(FgAbelianGroup::free(1).elements().is_none());
    }

    #[test]
    fn extended_nat_order() {
        assert!(ExtendedNat::Finite(100) < ExtendedNat::Infinite);
        assert!(ExtendedNat::Finite(1) < ExtendedNat::Finite(2));
    }
}
