use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groups::{FgAbelianGroup, GroupElement};

/// A finite-dimensional graded vector space: for each degree in the support,
/// the labels of a basis of that component. Zero components are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVectorSpace {
    group: FgAbelianGroup,
    components: BTreeMap<GroupElement, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn zero(group: FgAbelianGroup) -> Self {
        GradedVectorSpace { group, components: BTreeMap::new() }
    }

    pub fn new(group: FgAbelianGroup, components: BTreeMap<GroupElement, Vec<String>>) -> Result<Self> {
        if let Some(g) = components.keys().find(|g| !group.contains(g)) {
            return Err(Error::InvalidModule(format!("degree {g} is not an element of {group}")));
        }
        let components = components.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(GradedVectorSpace { group, components })
    }

    /// Components with generated labels `prefix[g]i`.
    pub fn from_dims(group: FgAbelianGroup, dims: &BTreeMap<GroupElement, usize>, prefix: &str) -> Result<Self> {
        let components = dims
            .iter()
            .map(|(g, &d)| (g.clone(), (0..d).map(|i| format!("{prefix}{g}{i}")).collect()))
            .collect();
        Self::new(group, components)
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn dim(&self, g: &GroupElement) -> usize {
        self.components.get(g).map_or(0, Vec::len)
    }

    pub fn labels(&self, g: &GroupElement) -> &[String] {
        self.components.get(g).map_or(&[], Vec::as_slice)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.components.keys()
    }

    pub fn components(&self) -> &BTreeMap<GroupElement, Vec<String>> {
        &self.components
    }

    pub fn dims(&self) -> BTreeMap<GroupElement, usize> {
        self.components.iter().map(|(g, v)| (g.clone(), v.len())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Component at `g` of the shift is the component at `g + s`.
    pub fn shift(&self, s: &GroupElement) -> Self {
        let components = self.components.iter().map(|(g, v)| (self.group.sub(g, s), v.clone())).collect();
        GradedVectorSpace { group: self.group.clone(), components }
    }
}
