use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{direct_sum, GradedMap, GradedModule};
use crate::groups::GroupElement;
use crate::linalg::Matrix;

use super::regrading::{FiberLayout, Regrading};

/// Outcome of comparing `⊕_{l ∈ ker φ} M[l]` with `φ^*(φ_!(M))` (or the
/// product form with `φ_*`).
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCheck {
    /// `None` for the exhaustive check over a finite kernel.
    pub window: Option<u32>,
    pub degrees_checked: Vec<String>,
    pub degree_preserving: bool,
    pub linear: bool,
    pub bijective: bool,
    #[serde(skip)]
    pub map: Option<GradedMap>,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        self.degree_preserving && self.linear && self.bijective
    }
}

impl Regrading {
    /// The explicit map `⊕_{l ∈ ker φ} M[l] -> φ^*(φ_!(M))` sending
    /// `m ∈ M[l]_g = M_{g+l}` to the copy of `m` in slot `g`. With a finite
    /// kernel the map is built and checked in full; otherwise `window` bounds
    /// the kernel elements used and only degrees whose whole fiber lies in the
    /// window are compared.
    pub fn decomposition_iso(&self, m: &GradedModule, window: Option<u32>) -> Result<DecompositionCheck> {
        self.check_source(m)?;
        if self.kernel_is_finite() {
            let pushed = self.pushforward(m)?;
            self.finite_decomposition(m, &pushed)
        } else {
            let w = window.ok_or_else(|| {
                Error::Unsupported("infinite kernel: supply a window radius for the decomposition check".into())
            })?;
            self.windowed_decomposition(m, w)
        }
    }

    /// `φ^*(φ_*(M)) ≅ ∏_{l ∈ ker φ} M[l]`; the product is a finite sum here.
    pub fn product_decomposition_check(&self, m: &GradedModule) -> Result<DecompositionCheck> {
        self.check_source(m)?;
        if !self.kernel_is_finite() {
            return Err(Error::Unsupported("product decomposition needs a finite kernel".into()));
        }
        let coinduced = self.coinduction(m)?;
        self.finite_decomposition(m, &coinduced)
    }

    fn finite_decomposition(&self, m: &GradedModule, pushed: &GradedModule) -> Result<DecompositionCheck> {
        let kernel = self.kernel_elements()?;
        let group = m.group();
        let target = Arc::new(self.pullback_module(pushed)?);
        let layout = FiberLayout::new(self.phi(), m);
        let shifts: Vec<Arc<GradedModule>> = kernel.iter().map(|l| Arc::new(m.shift(l))).collect();
        let source = if shifts.is_empty() {
            Arc::new(GradedModule::zero(m.algebra().clone()))
        } else {
            direct_sum(&shifts)?.module
        };
        let field = m.field();
        let mut blocks = BTreeMap::new();
        for g in source.support() {
            let mut block = Matrix::zero(field, target.dim(&g), source.dim(&g));
            let mut col = 0;
            for l in &kernel {
                let gl = group.add(&g, l);
                let d = m.dim(&gl);
                if d > 0 {
                    let (_, row) = layout.place[&gl];
                    block.set_block(row, col, &Matrix::identity(field, d));
                    col += d;
                }
            }
            blocks.insert(g, block);
        }
        let map = GradedMap::new(source.clone(), target.clone(), group.zero(), blocks)?;
        let mut degrees: BTreeSet<GroupElement> = source.support().into_iter().collect();
        degrees.extend(target.support());
        Ok(DecompositionCheck {
            window: None,
            degrees_checked: degrees.iter().map(ToString::to_string).collect(),
            degree_preserving: map.degree() == &group.zero(),
            linear: map.validate().is_ok(),
            bijective: map.is_isomorphism(),
            map: Some(map),
        })
    }

    fn windowed_decomposition(&self, m: &GradedModule, w: u32) -> Result<DecompositionCheck> {
        let phi = self.phi();
        let group = m.group();
        let kernel = self.kernel();
        let support = m.support();
        // Largest spread, in kernel coordinates, of the support within one fiber.
        let mut diameter = 0i64;
        for s in &support {
            for t in &support {
                if phi.apply(s) == phi.apply(t) {
                    let k = kernel.inclusion.preimage(&group.sub(t, s))?.expect("same fiber");
                    let spread = kernel.group.free_part(&k).iter().map(|x| x.abs()).max().unwrap_or(0);
                    diameter = diameter.max(spread);
                }
            }
        }
        let required = ((diameter + 1) / 2) as u32;
        if w < required {
            return Err(Error::WindowTooSmall { given: w, required });
        }
        let window: Vec<GroupElement> =
            kernel.group.box_elements(i64::from(w)).iter().map(|k| kernel.inclusion.apply(k)).collect();
        let window_set: BTreeSet<&GroupElement> = window.iter().collect();
        let pushed = self.pushforward(m)?;
        let layout = FiberLayout::new(phi, m);
        // Degrees whose fiber support lies entirely inside the window.
        let mut degrees = BTreeSet::new();
        for s in &support {
            for l in &window {
                let g = group.sub(s, l);
                let h = phi.apply(&g);
                let covered = support
                    .iter()
                    .filter(|t| phi.apply(t) == h)
                    .all(|t| window_set.contains(&group.sub(t, &g)));
                if covered {
                    degrees.insert(g);
                }
            }
        }
        let field = m.field();
        // The map at degree g, from the window-truncated sum to φ_!(M)_{φ(g)}.
        let component = |g: &GroupElement| -> (Matrix, Vec<(GroupElement, usize)>) {
            let h = phi.apply(g);
            let mut parts = Vec::new();
            let mut col = 0;
            for l in &window {
                let gl = group.add(g, l);
                let d = m.dim(&gl);
                if d > 0 {
                    parts.push((l.clone(), col));
                    col += d;
                }
            }
            let mut block = Matrix::zero(field, layout.total(&h), col);
            for (l, c) in &parts {
                let gl = group.add(g, l);
                block.set_block(layout.place[&gl].1, *c, &Matrix::identity(field, m.dim(&gl)));
            }
            (block, parts)
        };
        let algebra = m.algebra();
        let mut bijective = true;
        let mut linear = true;
        for g in &degrees {
            let (block, parts) = component(g);
            if block.rows() != block.cols() || block.rank() != block.rows() {
                bijective = false;
            }
            for &i in algebra.generators() {
                let d = algebra.degree(i);
                let g2 = group.add(g, d);
                let (block2, parts2) = component(&g2);
                // Action on the truncated sum preserves the summand index l.
                let mut lhs_action = Matrix::zero(field, block2.cols(), block.cols());
                for (l, c) in &parts {
                    if let Some((_, r)) = parts2.iter().find(|(l2, _)| l2 == l) {
                        lhs_action.set_block(*r, *c, &m.act(i, &group.add(g, l)));
                    }
                }
                let left = block2.mul(&lhs_action)?;
                let right = pushed.act(i, &phi.apply(g)).mul(&block)?;
                if left != right {
                    linear = false;
                }
            }
        }
        Ok(DecompositionCheck {
            window: Some(w),
            degrees_checked: degrees.iter().map(ToString::to_string).collect(),
            degree_preserving: true,
            linear,
            bijective,
            map: None,
        })
    }
}
