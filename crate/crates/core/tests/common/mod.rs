//! Oracles computed along routes independent of the engine's resolution code.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use regrade::graded::{GradedAlgebra, GradedModule};
use regrade::groups::GroupElement;
use regrade::linalg::{FieldSpec, Matrix, Scalar};

/// A module given concretely by its components and the action of every basis
/// element of the algebra.
struct Concrete {
    dims: BTreeMap<GroupElement, usize>,
    act: Vec<BTreeMap<GroupElement, Matrix>>,
}

impl Concrete {
    fn of(m: &GradedModule) -> Self {
        let dims = m.dims();
        let act = (0..m.algebra().dim())
            .map(|i| dims.keys().map(|g| (g.clone(), m.act(i, g))).collect())
            .collect();
        Concrete { dims, act }
    }

    fn dim(&self, g: &GroupElement) -> usize {
        self.dims.get(g).copied().unwrap_or(0)
    }

    fn act(&self, field: FieldSpec, a: &GradedAlgebra, i: usize, g: &GroupElement) -> Matrix {
        let h = a.group().add(g, a.degree(i));
        match self.act[i].get(g) {
            Some(m) if m.rows() == self.dim(&h) => m.clone(),
            _ => Matrix::zero(field, self.dim(&h), self.dim(g)),
        }
    }
}

/// A free module `⊕_j A e_{w_j}` with generator `j` in degree `g_j`, with its
/// boundary: `image[j]` is the image of generator `j` in the previous term,
/// in that term's coordinates at degree `g_j`.
struct Term {
    generators: Vec<(usize, GroupElement)>,
    basis: BTreeMap<GroupElement, Vec<(usize, usize)>>,
    image: Vec<Vec<Scalar>>,
}

fn free_term(a: &GradedAlgebra, generators: &[(usize, GroupElement)]) -> BTreeMap<GroupElement, Vec<(usize, usize)>> {
    let basic = a.basic().expect("basic algebra");
    let mut basis: BTreeMap<GroupElement, Vec<(usize, usize)>> = BTreeMap::new();
    for (j, (w, g)) in generators.iter().enumerate() {
        for b in (0..a.dim()).filter(|&b| basic.source(b) == *w) {
            basis.entry(a.group().add(a.degree(b), g)).or_default().push((j, b));
        }
    }
    basis
}

fn free_module(a: &GradedAlgebra, basis: &BTreeMap<GroupElement, Vec<(usize, usize)>>) -> Concrete {
    let field = a.field();
    let dims = basis.iter().map(|(g, v)| (g.clone(), v.len())).collect();
    let mut act = Vec::new();
    for i in 0..a.dim() {
        let mut blocks = BTreeMap::new();
        for (g, cols) in basis {
            let h = a.group().add(g, a.degree(i));
            let rows = basis.get(&h).cloned().unwrap_or_default();
            let mut m = Matrix::zero(field, rows.len(), cols.len());
            for (c, &(j, b)) in cols.iter().enumerate() {
                for (k, x) in a.product(i, b).iter().enumerate() {
                    if !x.is_zero() {
                        let r = rows.iter().position(|&p| p == (j, k)).expect("left ideal");
                        m.set(r, c, x.clone());
                    }
                }
            }
            blocks.insert(g.clone(), m);
        }
        act.push(blocks);
    }
    Concrete { dims, act }
}

/// Homogeneous generators `(vertex, degree, vector)` of `x`: lifts of a basis
/// of `x / J x`, split along the vertex idempotents. Not minimal in general.
fn generators(a: &GradedAlgebra, x: &Concrete) -> Vec<(usize, GroupElement, Vec<Scalar>)> {
    let field = a.field();
    let basic = a.basic().expect("basic algebra");
    let radical = a.radical().expect("radical").to_vec();
    let mut out = Vec::new();
    for (g, &d) in &x.dims {
        let mut span = Matrix::zero(field, d, 0);
        for &i in &radical {
            let src = a.group().sub(g, a.degree(i));
            if x.dim(&src) > 0 {
                span = span.hstack(&x.act(field, a, i, &src)).unwrap();
            }
        }
        let mut current = span.column_space();
        for e in 0..d {
            let mut unit = vec![field.zero(); d];
            unit[e] = field.one();
            let extended = current.hstack(&Matrix::from_columns(field, d, &[unit.clone()])).unwrap();
            if extended.rank() > current.rank() {
                current = extended;
                for (w, &idem) in basic.idempotents.iter().enumerate() {
                    let v = x.act(field, a, idem, g).apply(&unit).unwrap();
                    if v.iter().any(|s| !s.is_zero()) {
                        out.push((w, g.clone(), v));
                    }
                }
            }
        }
    }
    out
}

/// Generators, their images in X, the free cover, its degreewise kernel basis, and its degreewise basis.
type Cover = (
    Vec<(usize, GroupElement)>,
    Vec<Vec<Scalar>>,
    Concrete,
    BTreeMap<GroupElement, Matrix>,
    BTreeMap<GroupElement, Vec<(usize, usize)>>,
);

fn cover(a: &GradedAlgebra, x: &Concrete, duplicate: bool) -> Cover {
    let field = a.field();
    let mut gens = generators(a, x);
    if duplicate && !gens.is_empty() {
        gens.push(gens[0].clone());
    }
    let generators: Vec<(usize, GroupElement)> = gens.iter().map(|(w, g, _)| (*w, g.clone())).collect();
    let basis = free_term(a, &generators);
    let p = free_module(a, &basis);
    // kernel of P -> X, degreewise
    let mut kernel = BTreeMap::new();
    for (h, cols) in &basis {
        let mut pi = Matrix::zero(field, x.dim(h), cols.len());
        for (c, &(j, b)) in cols.iter().enumerate() {
            let (_, g, z) = &gens[j];
            let image = x.act(field, a, b, g).apply(z).unwrap();
            for (r, s) in image.into_iter().enumerate() {
                pi.set(r, c, s);
            }
        }
        let k = pi.kernel_basis();
        if k.cols() > 0 {
            kernel.insert(h.clone(), k);
        }
    }
    let images = gens.into_iter().map(|(_, _, z)| z).collect();
    (generators, images, p, kernel, basis)
}

fn submodule(a: &GradedAlgebra, p: &Concrete, kernel: &BTreeMap<GroupElement, Matrix>) -> Concrete {
    let field = a.field();
    let dims = kernel.iter().map(|(g, k)| (g.clone(), k.cols())).collect();
    let mut act = Vec::new();
    for i in 0..a.dim() {
        let mut blocks = BTreeMap::new();
        for (g, k) in kernel {
            let h = a.group().add(g, a.degree(i));
            let moved = p.act(field, a, i, g).mul(k).unwrap();
            let block = match kernel.get(&h) {
                Some(kh) => kh.solve_matrix(&moved).unwrap().expect("kernel is a submodule"),
                None => {
                    assert!(moved.is_zero(), "kernel is a submodule");
                    Matrix::zero(field, 0, k.cols())
                }
            };
            blocks.insert(g.clone(), block);
        }
        act.push(blocks);
    }
    Concrete { dims, act }
}

/// A free resolution `P_0, ..., P_len` of `m` that carries a redundant
/// generator in `P_0`, so it is not minimal.
fn nonminimal_resolution(m: &GradedModule, len: usize) -> Vec<Term> {
    let a = m.algebra();
    let mut x = Concrete::of(m);
    let mut terms = Vec::new();
    let mut previous_kernel: Option<BTreeMap<GroupElement, Matrix>> = None;
    for level in 0..=len {
        let (generators, images, p, kernel, basis) = cover(a, &x, level == 0);
        let image = match &previous_kernel {
            None => images,
            Some(k) => generators
                .iter()
                .zip(images)
                .map(|((_, g), z)| k[g].apply(&z).unwrap())
                .collect(),
        };
        terms.push(Term { generators, basis, image });
        x = submodule(a, &p, &kernel);
        previous_kernel = Some(kernel);
    }
    terms
}

/// `dim Ext^i(M, N)` for `i = 0..=max` from a non-minimal free resolution and
/// the full Hom complex.
pub fn ext_nonminimal(m: &GradedModule, n: &GradedModule, max: usize) -> Vec<usize> {
    let a = m.algebra();
    let field = a.field();
    let basic = a.basic().expect("basic algebra");
    let nc = Concrete::of(n);
    let terms = nonminimal_resolution(m, max + 1);
    // Hom(P_i, N) = ⊕_j e_{w_j} N_{g_j}, with a basis per generator
    let hom: Vec<Vec<Matrix>> = terms
        .iter()
        .map(|t| {
            t.generators
                .iter()
                .map(|(w, g)| nc.act(field, a, basic.idempotents[*w], g).column_space())
                .collect()
        })
        .collect();
    let offsets = |blocks: &[Matrix]| -> Vec<usize> {
        blocks.iter().scan(0, |acc, b| {
            let o = *acc;
            *acc += b.cols();
            Some(o)
        }).collect()
    };
    let total = |blocks: &[Matrix]| blocks.iter().map(Matrix::cols).sum::<usize>();
    // delta[i]: Hom(P_{i-1}, N) -> Hom(P_i, N) for i >= 1
    let mut ranks = vec![0; terms.len() + 1];
    for i in 1..terms.len() {
        let (src, dst) = (&hom[i - 1], &hom[i]);
        let (so, dso) = (offsets(src), offsets(dst));
        let mut delta = Matrix::zero(field, total(dst), total(src));
        for (j, (_, g)) in terms[i].generators.iter().enumerate() {
            let cols = &terms[i - 1].basis[g];
            let mut blocks: BTreeMap<usize, Matrix> = BTreeMap::new();
            for (c, &(k, b)) in cols.iter().enumerate() {
                let coeff = &terms[i].image[j][c];
                if coeff.is_zero() {
                    continue;
                }
                let gk = &terms[i - 1].generators[k].1;
                let piece = nc.act(field, a, b, gk).mul(&src[k]).unwrap().scale(coeff);
                let entry = blocks.entry(k).or_insert_with(|| Matrix::zero(field, piece.rows(), piece.cols()));
                *entry = entry.add(&piece).unwrap();
            }
            for (k, block) in blocks {
                let coords = dst[j].solve_matrix(&block).unwrap().expect("image lies in e_w N");
                delta.set_block(dso[j], so[k], &coords);
            }
        }
        ranks[i] = delta.rank();
    }
    (0..=max).map(|i| total(&hom[i]) - ranks[i] - ranks[i + 1]).collect()
}

/// Exactness data for the Koszul complex of `t_1 - 1, ..., t_r - 1` over the
/// Laurent ring `k[Z^r]`, truncated to monomials in a box.
#[derive(Debug)]
pub struct KoszulCheck {
    /// Cycles in `K_p` (box `radius`) that are boundaries from the box `radius + 1`.
    pub exact_in_positive_degrees: bool,
    /// Degree-zero cycles with coefficient sum zero are boundaries.
    pub augmentation_kernel_is_image: bool,
    /// `dim Hom(K_r, k)` after the differentials vanish on the trivial module.
    pub top_ext: usize,
}

fn monomials(r: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| (-radius..=radius).map(move |x| {
                let mut q = p.clone();
                q.push(x);
                q
            }))
            .collect();
    }
    out
}

fn subsets(r: usize, p: usize) -> Vec<Vec<usize>> {
    (0u32..1 << r)
        .filter(|m| m.count_ones() as usize == p)
        .map(|m| (0..r).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Matrix of `d: K_p -> K_{p-1}` from monomials of `from` radius into `to` radius.
fn koszul_differential(field: FieldSpec, r: usize, p: usize, from: i64, to: i64) -> Matrix {
    let (src_m, dst_m) = (monomials(r, from), monomials(r, to));
    let (src_s, dst_s) = (subsets(r, p), subsets(r, p - 1));
    let index = |s: &Vec<usize>, mono: &Vec<i64>| -> Option<usize> {
        let si = dst_s.iter().position(|x| x == s)?;
        let mi = dst_m.iter().position(|x| x == mono)?;
        Some(si * dst_m.len() + mi)
    };
    let mut d = Matrix::zero(field, dst_s.len() * dst_m.len(), src_s.len() * src_m.len());
    for (si, s) in src_s.iter().enumerate() {
        for (mi, mono) in src_m.iter().enumerate() {
            let col = si * src_m.len() + mi;
            for (pos, &i) in s.iter().enumerate() {
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != i).collect();
                let mut shifted = mono.clone();
                shifted[i] += 1;
                for (target, c) in [(shifted, sign), (mono.clone(), -sign)] {
                    let row = index(&rest, &target).expect("box large enough");
                    let old = d[(row, col)].clone();
                    d.set(row, col, &old + &field.from_i64(c));
                }
            }
        }
    }
    d
}

/// Re-indexes columns of `K_p` coordinates from the box `from` to the larger box `to`.
fn embed(field: FieldSpec, r: usize, p: usize, v: &Matrix, from: i64, to: i64) -> Matrix {
    let (small, large) = (monomials(r, from), monomials(r, to));
    let sets = subsets(r, p).len();
    let mut out = Matrix::zero(field, sets * large.len(), v.cols());
    for c in 0..v.cols() {
        for si in 0..sets {
            for (mi, mono) in small.iter().enumerate() {
                let li = large.iter().position(|x| x == mono).unwrap();
                out.set(si * large.len() + li, c, v[(si * small.len() + mi, c)].clone());
            }
        }
    }
    out
}

pub fn koszul(field: FieldSpec, r: usize, radius: i64) -> KoszulCheck {
    let mut exact = true;
    for p in 1..=r {
        let cycles = koszul_differential(field, r, p, radius, radius + 1).kernel_basis();
        if cycles.cols() == 0 {
            continue;
        }
        if p == r {
            exact = false;
            continue;
        }
        let boundaries = koszul_differential(field, r, p + 1, radius + 1, radius + 2);
        let lifted = embed(field, r, p, &cycles, radius, radius + 2);
        exact &= boundaries.solve_matrix(&lifted).unwrap().is_some();
    }
    // augmentation: coefficient-sum-zero elements of the inner box are boundaries
    let inner = monomials(r, radius);
    let columns: Vec<Vec<Scalar>> = (1..inner.len())
        .map(|mi| {
            let mut v = vec![field.zero(); inner.len()];
            v[mi] = field.one();
            v[0] = field.from_i64(-1);
            v
        })
        .collect();
    let kernel = Matrix::from_columns(field, inner.len(), &columns);
    let d1 = koszul_differential(field, r, 1, radius + 1, radius + 2);
    let augmentation_kernel_is_image = d1.solve_matrix(&embed(field, r, 0, &kernel, radius, radius + 2)).unwrap().is_some();
    // Hom(K_p, k) = k^{C(r,p)}; each t_i - 1 acts by zero on k, so all
    // coboundaries vanish and Ext^r = Hom(K_r, k)
    let top_ext = subsets(r, r).len();
    KoszulCheck { exact_in_positive_degrees: exact, augmentation_kernel_is_image, top_ext }
}

/// Projective dimension of the trivial module over `k[Z/2] = k[g]/(g^2 - 1)`
/// from its explicit resolutions: in odd characteristic `k` splits off via
/// `(1 + g)/2`; in characteristic 2 the periodic resolution
/// `... -> kG --(1+g)--> kG --(1+g)--> kG -> k` never stops, since a
/// projective module over the local ring `kG` is free of even dimension.
pub fn cd_cyclic_two(p: u64) -> Option<usize> {
    let field = FieldSpec::prime(p).unwrap();
    // multiplication by 1 + g on the basis {1, g}
    let one_plus_g = Matrix::from_i64(field, &[vec![1, 1], vec![1, 1]]);
    let two = field.from_i64(2);
    if !two.is_zero() {
        // e = (1 + g)/2 is an idempotent, so k = kG e is projective
        let e = one_plus_g.scale(&two.inv());
        assert_eq!(e.mul(&e).unwrap(), e);
        return Some(0);
    }
    // kernel and image of (1 + g) coincide: the complex is exact at every stage
    let kernel = one_plus_g.kernel_basis();
    let image = one_plus_g.column_space();
    assert_eq!(kernel.cols(), image.cols());
    assert!(image.hstack(&kernel).unwrap().rank() == image.cols());
    // each syzygy is 1-dimensional, never free over the 2-dimensional local ring
    assert_eq!(kernel.cols() % 2, 1);
    None
}

/// A seeded generator for test inputs.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub fn arc(m: GradedModule) -> Arc<GradedModule> {
    Arc::new(m)
}
