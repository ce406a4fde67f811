use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graded::{quotient, submodule, GradedAlgebra, GradedModule};
use crate::groups::GroupElement;
use crate::homalg::FreeModule;
use crate::linalg::{Matrix, Scalar};

const RETRY_BUDGET: usize = 64;

/// A seed for the object named `label` under the campaign seed `base`.
pub fn derive_seed(base: u64, label: &str) -> u64 {
    let digest = Sha256::new().chain_update(base.to_le_bytes()).chain_update(label.as_bytes()).finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// A random valid graded module of total dimension at most `max_dim`,
/// deterministic in `seed`.
///
/// A free module `⊕ P_v(s)` with shifts in the box of radius `support_radius`
/// is cut down by the submodule generated by a few random homogeneous elements
/// of its radical; the result is either the quotient or that submodule.
/// Candidates that are too large or zero are rejected.
pub fn random_module(
    algebra: &Arc<GradedAlgebra>,
    seed: u64,
    max_dim: usize,
    support_radius: u32,
) -> Result<GradedModule> {
    if max_dim == 0 {
        return Ok(GradedModule::zero(algebra.clone()));
    }
    let basic = algebra.basic()?.clone();
    let radical = algebra.radical().map(<[usize]>::to_vec).unwrap_or_default();
    let group = algebra.group().clone();
    let shifts = group.box_elements(i64::from(support_radius));
    let field = algebra.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let projective_dim = |v: usize| (0..algebra.dim()).filter(|&b| basic.source(b) == v).count();
    for _ in 0..RETRY_BUDGET {
        let summand_count = rng.random_range(1..=3usize);
        let mut summands = Vec::new();
        let mut size = 0;
        for _ in 0..summand_count {
            let v = rng.random_range(0..basic.vertex_count());
            if size + projective_dim(v) > max_dim + 4 {
                continue;
            }
            size += projective_dim(v);
            let s = shifts[rng.random_range(0..shifts.len())].clone();
            summands.push((v, s));
        }
        if summands.is_empty() {
            continue;
        }
        let free = FreeModule::new(algebra.clone(), summands.clone())?;
        let p = free.module().clone();
        // random homogeneous elements of J P: combinations of b·e_{v_j} with b in the radical
        let mut seeds: BTreeMap<GroupElement, Vec<Vec<Scalar>>> = BTreeMap::new();
        let relation_count = rng.random_range(0..=3usize);
        for _ in 0..relation_count {
            let candidates: Vec<GroupElement> = p
                .support()
                .into_iter()
                .filter(|g| free.columns(g).iter().any(|(_, b)| radical.contains(b)))
                .collect();
            if candidates.is_empty() {
                break;
            }
            let g = candidates[rng.random_range(0..candidates.len())].clone();
            let mut v = vec![field.zero(); p.dim(&g)];
            for (c, (_, b)) in free.columns(&g).iter().enumerate() {
                if radical.contains(b) {
                    v[c] = field.from_i64(rng.random_range(-2..=2));
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                seeds.entry(g).or_default().push(v);
            }
        }
        let spans = generated_submodule(&p, &seeds)?;
        let candidate = if rng.random_bool(0.3) && spans.values().any(|m| m.cols() > 0) {
            submodule(&p, &spans)?.as_ref().clone()
        } else {
            quotient(&p, &spans)?.0.as_ref().clone()
        };
        if candidate.is_zero() || candidate.total_dim() > max_dim {
            continue;
        }
        if candidate.validate().is_ok() {
            return Ok(candidate);
        }
    }
    Err(Error::RetryBudget(RETRY_BUDGET))
}

/// Bases of the submodule generated by the given homogeneous vectors.
fn generated_submodule(
    m: &Arc<GradedModule>,
    seeds: &BTreeMap<GroupElement, Vec<Vec<Scalar>>>,
) -> Result<BTreeMap<GroupElement, Matrix>> {
    let algebra = m.algebra();
    let group = m.group();
    let field = m.field();
    let mut spans: BTreeMap<GroupElement, Matrix> = BTreeMap::new();
    for (g, vs) in seeds {
        for v in vs {
            let col = Matrix::from_columns(field, m.dim(g), std::slice::from_ref(v));
            for i in 0..algebra.dim() {
                let h = group.add(g, algebra.degree(i));
                let image = m.act(i, g).mul(&col)?;
                if image.is_zero() {
                    continue;
                }
                let entry = spans.entry(h.clone()).or_insert_with(|| Matrix::zero(field, m.dim(&h), 0));
                *entry = entry.hstack(&image)?.column_space();
            }
        }
    }
    Ok(spans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::FieldSpec;

    #[test]
    fn zero_when_max_dim_is_zero() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        assert!(random_module(&a, 1, 0, 2).unwrap().is_zero());
    }

    #[test]
    fn deterministic_per_seed() {
        let a = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
        assert_eq!(random_module(&a, 9, 4, 2).unwrap(), random_module(&a, 9, 4, 2).unwrap());
    }

    #[test]
    fn kronecker_samples_validate() {
        let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
        for seed in 0..50 {
            let m = random_module(&a, seed, 5, 1).unwrap();
            assert!(m.total_dim() <= 5 && !m.is_zero());
            assert!(m.validate().is_ok());
        }
    }
}
