//! Property tests for the structural invariants: randomized inputs, exact
//! assertions.

use proptest::prelude::*;

use xsq_core::commutator::z_tensor_abelian;
use xsq_core::fp::{todd_coxeter, Presentation};
use xsq_core::group::{
    abelian_product, find_isomorphism, normal_closure, quotient_group, standard_group,
    subgroup_closure, Group, StandardGroup,
};
use xsq_core::lie::{parse_rat, rat_to_string, Rat, RowSpace};

fn catalog() -> Vec<Group> {
    let mut out = vec![
        standard_group(&StandardGroup::Trivial).unwrap(),
        standard_group(&StandardGroup::Klein).unwrap(),
        standard_group(&StandardGroup::Quaternion8).unwrap(),
        standard_group(&StandardGroup::Symmetric(4)).unwrap(),
    ];
    for n in [2u32, 3, 6, 8, 12] {
        out.push(standard_group(&StandardGroup::Cyclic(n)).unwrap());
    }
    for n in [3u32, 4, 6, 8, 12, 24] {
        let d = standard_group(&StandardGroup::Dihedral(n)).unwrap();
        if d.order() <= 48 {
            out.push(d);
        }
    }
    out
}

#[test]
fn catalog_groups_satisfy_the_axiom_suite() {
    for g in catalog() {
        g.check_axioms().unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The projection of the quotient by a normal closure has that closure
    /// as its kernel, for randomized generators in groups of order ≤ 48.
    #[test]
    fn quotient_kernel_is_the_closure(
        which in 0usize..15,
        raw_gens in proptest::collection::vec(0u32..48, 0..4),
    ) {
        let groups = catalog();
        let g = &groups[which % groups.len()];
        let gens: Vec<u32> = raw_gens.into_iter().map(|x| x % g.order()).collect();
        let n = normal_closure(g, &gens).unwrap();
        let (_, proj) = quotient_group(g, &n).unwrap();
        prop_assert_eq!(proj.kernel(), n);
    }

    /// Subgroup closures are genuine subgroups: closed, with identity and
    /// inverses, and idempotent under closure.
    #[test]
    fn closures_are_subgroups(
        which in 0usize..15,
        raw_gens in proptest::collection::vec(0u32..48, 0..4),
    ) {
        let groups = catalog();
        let g = &groups[which % groups.len()];
        let gens: Vec<u32> = raw_gens.into_iter().map(|x| x % g.order()).collect();
        let s = subgroup_closure(g, &gens).unwrap();
        prop_assert!(s.contains(g.identity()));
        for &a in s.elements() {
            prop_assert!(s.contains(g.inv(a)));
            for &b in s.elements() {
                prop_assert!(s.contains(g.mul(a, b)));
            }
        }
        let again = subgroup_closure(g, s.elements()).unwrap();
        prop_assert_eq!(s, again);
    }

    /// The integral tensor of abelian groups is symmetric up to isomorphism.
    #[test]
    fn z_tensor_symmetry(
        fa in proptest::collection::vec(2u64..6, 0..3),
        fb in proptest::collection::vec(2u64..6, 0..3),
    ) {
        let a = abelian_product(&fa, 20160).unwrap();
        let b = abelian_product(&fb, 20160).unwrap();
        let ab = z_tensor_abelian(&a, &b, 20160).unwrap();
        let ba = z_tensor_abelian(&b, &a, 20160).unwrap();
        prop_assert!(find_isomorphism(&ab, &ba).unwrap().is_some());
    }

    /// In an enumerated group, a word followed by its formal inverse
    /// evaluates to the identity.
    #[test]
    fn word_inverse_cancels(word in proptest::collection::vec(
        prop_oneof![Just(1i32), Just(-1i32), Just(2), Just(-2)], 0..12)
    ) {
        // the symmetric group on 3 letters, presented
        let p = Presentation::new(2, vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]]).unwrap();
        let e = todd_coxeter(&p, 100).unwrap();
        let mut inverse: Vec<i32> = word.iter().rev().map(|&l| -l).collect();
        let mut full = word.clone();
        full.append(&mut inverse);
        prop_assert_eq!(e.word_eval(&full).unwrap(), e.group.identity());
    }

    /// Rational parsing round-trips through printing.
    #[test]
    fn rational_roundtrip(n in -1000i64..1000, d in 1i64..1000) {
        let r = Rat::new(n.into(), d.into());
        let printed = rat_to_string(&r);
        prop_assert_eq!(parse_rat(&printed).unwrap(), r);
    }

    /// Row spaces reduce consistently: the residual of any vector is in the
    /// same class, and residuals of inserted rows vanish.
    #[test]
    fn row_space_reduction(rows in proptest::collection::vec(
        proptest::collection::vec(-5i64..6, 4), 0..5)
    ) {
        let mut space = RowSpace::new(4);
        let as_rats = |row: &Vec<i64>| -> Vec<Rat> {
            row.iter().map(|&x| Rat::from_integer(x.into())).collect()
        };
        for row in &rows {
            space.insert(&as_rats(row));
        }
        for row in &rows {
            prop_assert!(space.contains(&as_rats(row)));
        }
        prop_assert_eq!(space.rank() + space.free_columns().len(), 4);
    }
}
