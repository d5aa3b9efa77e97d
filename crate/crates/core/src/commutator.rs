//! Higgins and Huq commutators of subgroups, the ternary commutator of
//! normal subgroups, nil₂ quotients, and the tensor product of finite
//! abelian groups over the integers.

use std::sync::Arc;

use num_integer::Integer;

use crate::group::{
    abelian_invariants, abelian_product, normal_closure, quotient_group, subgroup_closure, Group,
    GroupError, GroupHom, Subgroup,
};

fn same_parent(a: &Subgroup, b: &Subgroup) -> Result<(), GroupError> {
    if Arc::ptr_eq(a.parent(), b.parent()) || a.parent() == b.parent() {
        Ok(())
    } else {
        Err(GroupError::ParentMismatch)
    }
}

/// Subgroup generated by all commutators `[m, n] = m n m⁻¹ n⁻¹`.
pub fn higgins_commutator(m: &Subgroup, n: &Subgroup) -> Result<Subgroup, GroupError> {
    same_parent(m, n)?;
    let x = m.parent();
    let mut gens = Vec::with_capacity(m.elements().len() * n.elements().len());
    for &a in m.elements() {
        for &b in n.elements() {
            gens.push(x.commutator(a, b));
        }
    }
    subgroup_closure(x, &gens)
}

/// Normal closure in the parent of the Higgins commutator.
pub fn huq_commutator(m: &Subgroup, n: &Subgroup) -> Result<Subgroup, GroupError> {
    same_parent(m, n)?;
    let x = m.parent();
    let h = higgins_commutator(m, n)?;
    normal_closure(x, h.elements())
}

fn require_normal(s: &Subgroup) -> Result<(), GroupError> {
    s.normality_witness()
        .map_err(|(conjugator, element)| GroupError::NotNormal {
            conjugator,
            element,
        })
}

/// Ternary commutator of normal subgroups via the three-subobjects join
/// `[K,[M,N]] ∨ [M,[N,K]] ∨ [N,[K,M]]`.
pub fn ternary_commutator_normal(
    k: &Subgroup,
    m: &Subgroup,
    n: &Subgroup,
) -> Result<Subgroup, GroupError> {
    same_parent(k, m)?;
    same_parent(m, n)?;
    require_normal(k)?;
    require_normal(m)?;
    require_normal(n)?;
    let a = higgins_commutator(k, &higgins_commutator(m, n)?)?;
    let b = higgins_commutator(m, &higgins_commutator(n, k)?)?;
    let c = higgins_commutator(n, &higgins_commutator(k, m)?)?;
    a.join(&b)?.join(&c)
}

/// Quotient by the normal closure of `[[G,G],G]`; the result has trivial
/// ternary self-commutator.
pub fn nil2_quotient(g: &Group) -> Result<(Group, GroupHom), GroupError> {
    let full = Subgroup::full(g);
    let derived = higgins_commutator(&full, &full)?;
    let gamma3 = higgins_commutator(&derived, &full)?;
    let ncl = normal_closure(g, gamma3.elements())?;
    quotient_group(g, &ncl)
}

/// Tensor product over the integers of two finite abelian groups: the product
/// over invariant-factor pairs of cyclic groups of order `gcd(dᵢ, eⱼ)`.
pub fn z_tensor_abelian(m: &Group, n: &Group, order_bound: u64) -> Result<Group, GroupError> {
    let dm = abelian_invariants(m)?;
    let dn = abelian_invariants(n)?;
    let mut factors = Vec::new();
    for &d in &dm {
        for &e in &dn {
            let g = d.gcd(&e);
            if g > 1 {
                factors.push(g);
            }
        }
    }
    abelian_product(&factors, order_bound)
}

/// Expected order of the integral tensor product without building the group.
pub fn z_tensor_order(m: &Group, n: &Group) -> Result<u64, GroupError> {
    let dm = abelian_invariants(m)?;
    let dn = abelian_invariants(n)?;
    let mut order = 1u64;
    for &d in &dm {
        for &e in &dn {
            order = order.saturating_mul(d.gcd(&e));
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, find_isomorphism, standard_group, StandardGroup};
    use crate::limits::DEFAULT_ORDER_BOUND;

    fn s3() -> Group {
        standard_group(&StandardGroup::Symmetric(3)).unwrap()
    }

    fn d4() -> Group {
        standard_group(&StandardGroup::Dihedral(4)).unwrap()
    }

    #[test]
    fn higgins_with_trivial_side_vanishes() {
        let g = s3();
        let full = Subgroup::full(&g);
        let t = Subgroup::trivial(&g);
        assert!(higgins_commutator(&full, &t).unwrap().is_trivial());
    }

    #[test]
    fn derived_subgroup_of_s3() {
        let g = s3();
        let full = Subgroup::full(&g);
        let c = higgins_commutator(&full, &full).unwrap();
        assert_eq!(c.order(), 3);
        assert!(c.is_normal());
    }

    #[test]
    fn higgins_is_symmetric_on_d4_subgroups() {
        let g = d4();
        for a in g.elements() {
            for b in g.elements() {
                let m = subgroup_closure(&g, &[a]).unwrap();
                let n = subgroup_closure(&g, &[b]).unwrap();
                assert_eq!(
                    higgins_commutator(&m, &n).unwrap(),
                    higgins_commutator(&n, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn huq_on_transposition_pair() {
        let g = s3();
        let mut transpositions = g.elements().filter(|&x| g.element_order(x) == 2);
        let t1 = transpositions.next().unwrap();
        let t2 = transpositions.next().unwrap();
        let m = subgroup_closure(&g, &[t1]).unwrap();
        let n = subgroup_closure(&g, &[t2]).unwrap();
        let higgins = higgins_commutator(&m, &n).unwrap();
        let huq = huq_commutator(&m, &n).unwrap();
        assert_eq!(higgins.order(), 3);
        assert_eq!(huq, higgins);
    }

    #[test]
    fn huq_trivial_iff_higgins_trivial() {
        let g = d4();
        for a in g.elements() {
            for b in g.elements() {
                let m = subgroup_closure(&g, &[a]).unwrap();
                let n = subgroup_closure(&g, &[b]).unwrap();
                let h = higgins_commutator(&m, &n).unwrap();
                let q = huq_commutator(&m, &n).unwrap();
                assert_eq!(h.is_trivial(), q.is_trivial());
            }
        }
    }

    #[test]
    fn abelian_commutators_vanish() {
        let k = standard_group(&StandardGroup::Klein).unwrap();
        let full = Subgroup::full(&k);
        assert!(huq_commutator(&full, &full).unwrap().is_trivial());
    }

    #[test]
    fn ternary_of_s3_is_a3() {
        let g = s3();
        let full = Subgroup::full(&g);
        let t = ternary_commutator_normal(&full, &full, &full).unwrap();
        assert_eq!(t.order(), 3);
    }

    #[test]
    fn ternary_trivial_argument() {
        let g = s3();
        let full = Subgroup::full(&g);
        let t = Subgroup::trivial(&g);
        assert!(ternary_commutator_normal(&t, &full, &full)
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn ternary_requires_normality() {
        let g = s3();
        let refl = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let m = subgroup_closure(&g, &[refl]).unwrap();
        let full = Subgroup::full(&g);
        assert!(matches!(
            ternary_commutator_normal(&m, &full, &full),
            Err(GroupError::NotNormal { .. })
        ));
    }

    #[test]
    fn nil2_quotients() {
        let k = standard_group(&StandardGroup::Klein).unwrap();
        let (q, _) = nil2_quotient(&k).unwrap();
        assert_eq!(q.order(), 4);

        let g = s3();
        let (q, _) = nil2_quotient(&g).unwrap();
        assert_eq!(q.order(), 2);

        // r² is central in the dihedral group of order 8, so nothing collapses
        let g = d4();
        let (q, proj) = nil2_quotient(&g).unwrap();
        assert_eq!(q.order(), 8);
        assert!(proj.is_bijective());

        let full = Subgroup::full(&q);
        assert!(ternary_commutator_normal(&full, &full, &full)
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn z_tensor_small_cases() {
        let t = standard_group(&StandardGroup::Trivial).unwrap();
        let c2 = standard_group(&StandardGroup::Cyclic(2)).unwrap();
        let k = standard_group(&StandardGroup::Klein).unwrap();
        assert_eq!(
            z_tensor_abelian(&t, &c2, DEFAULT_ORDER_BOUND).unwrap().order(),
            1
        );
        assert_eq!(
            z_tensor_abelian(&c2, &c2, DEFAULT_ORDER_BOUND).unwrap().order(),
            2
        );
        let kk = z_tensor_abelian(&k, &c2, DEFAULT_ORDER_BOUND).unwrap();
        assert!(find_isomorphism(&kk, &k).unwrap().is_some());
        assert!(matches!(
            z_tensor_abelian(&s3(), &c2, DEFAULT_ORDER_BOUND),
            Err(GroupError::NotAbelian(_, _))
        ));
    }

    #[test]
    fn z_tensor_symmetric_and_distributes() {
        let bound = DEFAULT_ORDER_BOUND;
        let cases = [vec![2u64, 4], vec![3], vec![6], vec![2, 2]];
        for a in &cases {
            for b in &cases {
                let ga = abelian_product(a, bound).unwrap();
                let gb = abelian_product(b, bound).unwrap();
                let ab = z_tensor_abelian(&ga, &gb, bound).unwrap();
                let ba = z_tensor_abelian(&gb, &ga, bound).unwrap();
                assert!(find_isomorphism(&ab, &ba).unwrap().is_some());
            }
        }
        // (A × B) ⊗ C ≅ (A ⊗ C) × (B ⊗ C)
        let a = abelian_product(&[4], bound).unwrap();
        let b = abelian_product(&[6], bound).unwrap();
        let c = abelian_product(&[2, 2], bound).unwrap();
        let ab = direct_product(&a, &b).unwrap().group;
        let lhs = z_tensor_abelian(&ab, &c, bound).unwrap();
        let ac = z_tensor_abelian(&a, &c, bound).unwrap();
        let bc = z_tensor_abelian(&b, &c, bound).unwrap();
        let rhs = direct_product(&ac, &bc).unwrap().group;
        assert!(find_isomorphism(&lhs, &rhs).unwrap().is_some());
    }
}
