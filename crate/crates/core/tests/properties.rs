use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use regrade::fixtures;
use regrade::functors::Regrading;
use regrade::groups::{smith_normal_form, FgAbelianGroup, GroupElement, GroupMorphism, IntMatrix};
use regrade::harness::random_module;
use regrade::homalg::{graded_ext, minimal_resolution, ext_dims};
use regrade::linalg::FieldSpec;
use regrade::pid::{Atom, PidGradedModule};

const Q: FieldSpec = FieldSpec::Rationals;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

fn atom() -> impl Strategy<Value = (Atom, i64)> {
    (prop_oneof![Just(Atom::F), Just(Atom::L), (1u32..6).prop_map(Atom::T)], -5i64..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_form_reassembles(rows in matrix()) {
        let m = IntMatrix::from_i64(rows.len(), rows[0].len(), &rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal.clone());
        prop_assert_eq!(s.left.mul(&s.left_inverse), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.right.mul(&s.right_inverse), IntMatrix::identity(m.cols()));
        prop_assert!(s.diagonal.is_diagonal());
        for w in s.invariants.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
        }
    }

    #[test]
    fn pid_dimensions_are_shift_invariant_maxima(atoms in prop::collection::vec(atom(), 1..5), s in -7i64..7) {
        let m = PidGradedModule::new(atoms.clone()).unwrap();
        let (g, u) = m.injective_dimensions();
        prop_assert_eq!((g, u), m.shift(s).injective_dimensions());
        let singles: Vec<_> = atoms.iter().map(|a| PidGradedModule::new(vec![*a]).unwrap().injective_dimensions()).collect();
        prop_assert_eq!(g.exact(), singles.iter().filter_map(|d| d.0.exact()).max());
        prop_assert_eq!(u.exact(), singles.iter().filter_map(|d| d.1.exact()).max());
        let (g, u) = (g.exact().unwrap(), u.exact().unwrap());
        prop_assert!(g <= u && u <= g + 1);
    }

    #[test]
    fn pushforward_keeps_dimension_and_validity(seed in any::<u64>(), which in 0usize..3) {
        let a = fixtures::commutative_square(Q).unwrap().algebra;
        let z2 = FgAbelianGroup::free(2);
        let phi = match which {
            0 => GroupMorphism::identity(&z2),
            1 => GroupMorphism::new(z2, FgAbelianGroup::free(1), vec![vec![1, 1]]).unwrap(),
            _ => GroupMorphism::new(z2, FgAbelianGroup::trivial(), vec![]).unwrap(),
        };
        let m = random_module(&a, seed, 6, 1).unwrap();
        let r = Regrading::new(a, phi).unwrap();
        let pushed = r.pushforward(&m).unwrap();
        prop_assert_eq!(pushed.total_dim(), m.total_dim());
        prop_assert!(pushed.validate().is_ok());
    }

    #[test]
    fn shifting_round_trips_and_preserves_ext(seed in any::<u64>(), x in -2i64..=2, y in -2i64..=2) {
        let a = fixtures::kronecker(Q).unwrap().algebra;
        let s = GroupElement::new(vec![x, y]);
        let back = GroupElement::new(vec![-x, -y]);
        let m = Arc::new(random_module(&a, seed, 4, 1).unwrap());
        let n = Arc::new(random_module(&a, seed ^ 0x5eed, 4, 1).unwrap());
        prop_assert_eq!(m.shift(&s).shift(&back), (*m).clone());
        let (ms, ns) = (Arc::new(m.shift(&s)), Arc::new(n.shift(&s)));
        for i in 0..=1 {
            prop_assert_eq!(graded_ext(&m, &n, i, 4).unwrap().dim, graded_ext(&ms, &ns, i, 4).unwrap().dim);
        }
    }

    #[test]
    fn double_dual_has_original_dimensions(seed in any::<u64>()) {
        let a = fixtures::commutative_square(Q).unwrap().algebra;
        let m = random_module(&a, seed, 6, 1).unwrap();
        let dd = m.dual().dual();
        prop_assert_eq!(dd.dims(), m.dims());
        prop_assert!(dd.validate().is_ok());
    }

    #[test]
    fn resolution_terms_are_radical_covers(seed in any::<u64>()) {
        let a = fixtures::commutative_square(Q).unwrap().algebra;
        let m = Arc::new(random_module(&a, seed, 6, 1).unwrap());
        let res = minimal_resolution(&m, 4).unwrap();
        // minimality: Hom(P_i, S) has the dimension of Ext^i(M, S) for every simple S
        for v in 0..4 {
            for g in m.support() {
                let s = Arc::new(regrade::graded::GradedModule::simple(a.clone(), v, &a.group().neg(&g)).unwrap());
                let dims = ext_dims(&res, &s).unwrap();
                for (i, d) in dims.iter().enumerate() {
                    let tops = res.summands(i).iter().filter(|(w, sh)| *w == v && a.group().neg(sh) == g).count();
                    prop_assert_eq!(*d, tops);
                }
            }
        }
    }
}
