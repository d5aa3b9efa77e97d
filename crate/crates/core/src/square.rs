//! Crossed squares of groups: the data structure, the exhaustive X.0–X.4
//! verifier, and the canonical square on the intersection of two normal
//! subgroups.

use crate::action::{verify_crossed_module, ActionError, GroupAction};
use crate::group::{El, Group, GroupError, GroupHom, Subgroup};

/// A commutative square of groups
///
/// ```text
///   P --p_m--> M
///   |          |
///  p_n         mu
///   v          v
///   N --nu---> L
/// ```
///
/// with actions of `L` on `P`, `M`, `N` and a pairing `h: M × N → P` stored
/// as a full table. The crossed-square axioms are checked by
/// [`verify_crossed_square`], not by the constructor, so that faulty squares
/// can be built and diagnosed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedSquare {
    pub p: Group,
    pub m: Group,
    pub n: Group,
    pub l: Group,
    pub p_m: GroupHom,
    pub p_n: GroupHom,
    pub mu: GroupHom,
    pub nu: GroupHom,
    pub l_on_p: GroupAction,
    pub l_on_m: GroupAction,
    pub l_on_n: GroupAction,
    /// `h[m][n]` is an element of `P`.
    pub h: Vec<Vec<El>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SquareError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("square does not commute at element {0}")]
    NotCommuting(El),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl CrossedSquare {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_m: GroupHom,
        p_n: GroupHom,
        mu: GroupHom,
        nu: GroupHom,
        l_on_p: GroupAction,
        l_on_m: GroupAction,
        l_on_n: GroupAction,
        h: Vec<Vec<El>>,
    ) -> Result<CrossedSquare, SquareError> {
        let p = p_m.domain().clone();
        let m = p_m.codomain().clone();
        let n = p_n.codomain().clone();
        let l = mu.codomain().clone();
        if p_n.domain() != &p || mu.domain() != &m || nu.domain() != &n || nu.codomain() != &l {
            return Err(SquareError::ShapeMismatch("square corners disagree".into()));
        }
        for (action, acted, name) in [
            (&l_on_p, &p, "P"),
            (&l_on_m, &m, "M"),
            (&l_on_n, &n, "N"),
        ] {
            if action.acting() != &l || action.acted() != acted {
                return Err(SquareError::ShapeMismatch(format!(
                    "action of L on {name} has the wrong shape"
                )));
            }
        }
        if h.len() != m.order() as usize
            || h.iter().any(|row| row.len() != n.order() as usize)
            || h.iter().flatten().any(|&v| v >= p.order())
        {
            return Err(SquareError::ShapeMismatch("pairing table shape".into()));
        }
        for x in p.elements() {
            if mu.apply(p_m.apply(x)) != nu.apply(p_n.apply(x)) {
                return Err(SquareError::NotCommuting(x));
            }
        }
        Ok(CrossedSquare {
            p,
            m,
            n,
            l,
            p_m,
            p_n,
            mu,
            nu,
            l_on_p,
            l_on_m,
            l_on_n,
            h,
        })
    }

    #[inline]
    pub fn pairing(&self, m: El, n: El) -> El {
        self.h[m as usize][n as usize]
    }

    /// Diagonal `λ = μ∘p_M = ν∘p_N`.
    pub fn lambda(&self) -> GroupHom {
        self.p_m.then(&self.mu).expect("validated square")
    }

    #[inline]
    pub fn act_m_on_p(&self, m: El, p: El) -> El {
        self.l_on_p.act(self.mu.apply(m), p)
    }
    #[inline]
    pub fn act_n_on_p(&self, n: El, p: El) -> El {
        self.l_on_p.act(self.nu.apply(n), p)
    }
    #[inline]
    pub fn act_m_on_n(&self, m: El, n: El) -> El {
        self.l_on_n.act(self.mu.apply(m), n)
    }
    #[inline]
    pub fn act_n_on_m(&self, n: El, m: El) -> El {
        self.l_on_m.act(self.nu.apply(n), m)
    }
}

/// Per-axiom verdicts with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XsqReport {
    pub x0: Result<(), String>,
    pub x1: Result<(), String>,
    pub x2: Result<(), String>,
    pub x3: Result<(), String>,
    pub x4: Result<(), String>,
}

impl XsqReport {
    pub fn all_pass(&self) -> bool {
        self.failing().is_empty()
    }

    pub fn failing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.x0.is_err() {
            out.push("X.0");
        }
        if self.x1.is_err() {
            out.push("X.1");
        }
        if self.x2.is_err() {
            out.push("X.2");
        }
        if self.x3.is_err() {
            out.push("X.3");
        }
        if self.x4.is_err() {
            out.push("X.4");
        }
        out
    }
}

/// Exhaustive element-wise check of the crossed-square axioms:
///
/// - X.0 `h(mm',n) = ᵐh(m',n)·h(m,n)` and `h(m,nn') = h(m,n)·ⁿh(m,n')`
/// - X.1 `p_M`, `p_N` preserve the `L`-actions, and `μ`, `ν`, `λ` are
///   crossed modules
/// - X.2 `p_M(h(m,n)) = m·ⁿm⁻¹` and `p_N(h(m,n)) = ᵐn·n⁻¹`
/// - X.3 `h(p_M(p),n) = p·ⁿp⁻¹` and `h(m,p_N(p)) = ᵐp·p⁻¹`
/// - X.4 `ˡh(m,n) = h(ˡm,ˡn)`
pub fn verify_crossed_square(cs: &CrossedSquare) -> XsqReport {
    let (p, m, n, l) = (&cs.p, &cs.m, &cs.n, &cs.l);

    let mut x0 = Ok(());
    'x0: for a in m.elements() {
        for a2 in m.elements() {
            for b in n.elements() {
                let lhs = cs.pairing(m.mul(a, a2), b);
                let rhs = p.mul(cs.act_m_on_p(a, cs.pairing(a2, b)), cs.pairing(a, b));
                if lhs != rhs {
                    x0 = Err(format!("first identity fails at (m={a}, m'={a2}, n={b})"));
                    break 'x0;
                }
            }
        }
    }
    if x0.is_ok() {
        'x0b: for a in m.elements() {
            for b in n.elements() {
                for b2 in n.elements() {
                    let lhs = cs.pairing(a, n.mul(b, b2));
                    let rhs = p.mul(cs.pairing(a, b), cs.act_n_on_p(b, cs.pairing(a, b2)));
                    if lhs != rhs {
                        x0 = Err(format!("second identity fails at (m={a}, n={b}, n'={b2})"));
                        break 'x0b;
                    }
                }
            }
        }
    }

    let mut x1 = Ok(());
    'x1: for la in l.elements() {
        for x in p.elements() {
            if cs.p_m.apply(cs.l_on_p.act(la, x)) != cs.l_on_m.act(la, cs.p_m.apply(x)) {
                x1 = Err(format!("p_M not equivariant at (l={la}, p={x})"));
                break 'x1;
            }
            if cs.p_n.apply(cs.l_on_p.act(la, x)) != cs.l_on_n.act(la, cs.p_n.apply(x)) {
                x1 = Err(format!("p_N not equivariant at (l={la}, p={x})"));
                break 'x1;
            }
        }
    }
    if x1.is_ok() {
        for (boundary, action, name) in [
            (cs.mu.clone(), &cs.l_on_m, "mu"),
            (cs.nu.clone(), &cs.l_on_n, "nu"),
            (cs.lambda(), &cs.l_on_p, "lambda"),
        ] {
            let rep = verify_crossed_module(&boundary, action);
            if let Err((a, b)) = rep.precrossed {
                x1 = Err(format!("{name} equivariance fails at (l={a}, x={b})"));
                break;
            }
            if let Err((a, b)) = rep.peiffer {
                x1 = Err(format!("{name} Peiffer fails at (x={a}, x'={b})"));
                break;
            }
        }
    }

    let mut x2 = Ok(());
    'x2: for a in m.elements() {
        for b in n.elements() {
            let hp = cs.pairing(a, b);
            if cs.p_m.apply(hp) != m.mul(a, m.inv(cs.act_n_on_m(b, a))) {
                x2 = Err(format!("p_M∘h fails at (m={a}, n={b})"));
                break 'x2;
            }
            if cs.p_n.apply(hp) != n.mul(cs.act_m_on_n(a, b), n.inv(b)) {
                x2 = Err(format!("p_N∘h fails at (m={a}, n={b})"));
                break 'x2;
            }
        }
    }

    let mut x3 = Ok(());
    'x3: for x in p.elements() {
        for b in n.elements() {
            if cs.pairing(cs.p_m.apply(x), b) != p.mul(x, p.inv(cs.act_n_on_p(b, x))) {
                x3 = Err(format!("h(p_M(p),n) fails at (p={x}, n={b})"));
                break 'x3;
            }
        }
        for a in m.elements() {
            if cs.pairing(a, cs.p_n.apply(x)) != p.mul(cs.act_m_on_p(a, x), p.inv(x)) {
                x3 = Err(format!("h(m,p_N(p)) fails at (m={a}, p={x})"));
                break 'x3;
            }
        }
    }

    let mut x4 = Ok(());
    'x4: for la in l.elements() {
        for a in m.elements() {
            for b in n.elements() {
                let lhs = cs.l_on_p.act(la, cs.pairing(a, b));
                let rhs = cs.pairing(cs.l_on_m.act(la, a), cs.l_on_n.act(la, b));
                if lhs != rhs {
                    x4 = Err(format!("fails at (l={la}, m={a}, n={b})"));
                    break 'x4;
                }
            }
        }
    }

    XsqReport { x0, x1, x2, x3, x4 }
}

/// The canonical crossed square on the intersection of two normal subgroups:
/// all maps are inclusions, all actions conjugation, and `h(m,n) = [m,n]`.
pub fn intersection_square(
    l: &Group,
    m: &Subgroup,
    n: &Subgroup,
) -> Result<CrossedSquare, SquareError> {
    for s in [m, n] {
        if let Err((conjugator, element)) = s.normality_witness() {
            return Err(GroupError::NotNormal {
                conjugator,
                element,
            }
            .into());
        }
    }
    let p_sub = m.intersection(n)?;
    let (p_grp, p_embed) = p_sub.to_group()?;
    let (m_grp, m_embed) = m.to_group()?;
    let (n_grp, n_embed) = n.to_group()?;

    let p_m_map: Vec<El> = (0..p_grp.order())
        .map(|x| m.index_of(p_embed.apply(x)).expect("P sits inside M"))
        .collect();
    let p_n_map: Vec<El> = (0..p_grp.order())
        .map(|x| n.index_of(p_embed.apply(x)).expect("P sits inside N"))
        .collect();
    let p_m = GroupHom::new(&p_grp, &m_grp, p_m_map)?;
    let p_n = GroupHom::new(&p_grp, &n_grp, p_n_map)?;

    let conj_action = |sub: &Subgroup, carrier: &Group, embed: &GroupHom| {
        let perms: Vec<Vec<El>> = l
            .elements()
            .map(|g| {
                (0..carrier.order())
                    .map(|x| {
                        sub.index_of(l.conj(g, embed.apply(x)))
                            .expect("normal subgroup closed under conjugation")
                    })
                    .collect()
            })
            .collect();
        crate::action::make_action(l, carrier, perms)
    };
    let l_on_p = conj_action(&p_sub, &p_grp, &p_embed)?;
    let l_on_m = conj_action(m, &m_grp, &m_embed)?;
    let l_on_n = conj_action(n, &n_grp, &n_embed)?;

    let h: Vec<Vec<El>> = (0..m_grp.order())
        .map(|a| {
            (0..n_grp.order())
                .map(|b| {
                    let c = l.commutator(m_embed.apply(a), n_embed.apply(b));
                    p_sub
                        .index_of(c)
                        .expect("commutator of normal subgroups lies in both")
                })
                .collect()
        })
        .collect();

    CrossedSquare::new(p_m, p_n, m_embed, n_embed, l_on_p, l_on_m, l_on_n, h)
}

/// Check a quadruple of bijections as an isomorphism of crossed squares:
/// bijective homs commuting with the four structure maps, the actions and
/// the pairings.
pub fn crossed_square_isomorphism(
    from: &CrossedSquare,
    to: &CrossedSquare,
    on_p: &GroupHom,
    on_m: &GroupHom,
    on_n: &GroupHom,
    on_l: &GroupHom,
) -> Result<(), SquareError> {
    let shape_err = |msg: &str| Err(SquareError::ShapeMismatch(msg.into()));
    if on_p.domain() != &from.p || on_p.codomain() != &to.p {
        return shape_err("P map");
    }
    if on_m.domain() != &from.m || on_m.codomain() != &to.m {
        return shape_err("M map");
    }
    if on_n.domain() != &from.n || on_n.codomain() != &to.n {
        return shape_err("N map");
    }
    if on_l.domain() != &from.l || on_l.codomain() != &to.l {
        return shape_err("L map");
    }
    for f in [on_p, on_m, on_n, on_l] {
        if !f.is_bijective() {
            return shape_err("comparison map is not bijective");
        }
    }
    for x in from.p.elements() {
        if on_m.apply(from.p_m.apply(x)) != to.p_m.apply(on_p.apply(x)) {
            return shape_err("p_M square");
        }
        if on_n.apply(from.p_n.apply(x)) != to.p_n.apply(on_p.apply(x)) {
            return shape_err("p_N square");
        }
    }
    for x in from.m.elements() {
        if on_l.apply(from.mu.apply(x)) != to.mu.apply(on_m.apply(x)) {
            return shape_err("mu square");
        }
    }
    for x in from.n.elements() {
        if on_l.apply(from.nu.apply(x)) != to.nu.apply(on_n.apply(x)) {
            return shape_err("nu square");
        }
    }
    for la in from.l.elements() {
        let lb = on_l.apply(la);
        for x in from.p.elements() {
            if on_p.apply(from.l_on_p.act(la, x)) != to.l_on_p.act(lb, on_p.apply(x)) {
                return shape_err("action on P");
            }
        }
        for x in from.m.elements() {
            if on_m.apply(from.l_on_m.act(la, x)) != to.l_on_m.act(lb, on_m.apply(x)) {
                return shape_err("action on M");
            }
        }
        for x in from.n.elements() {
            if on_n.apply(from.l_on_n.act(la, x)) != to.l_on_n.act(lb, on_n.apply(x)) {
                return shape_err("action on N");
            }
        }
    }
    for a in from.m.elements() {
        for b in from.n.elements() {
            if on_p.apply(from.pairing(a, b)) != to.pairing(on_m.apply(a), on_n.apply(b)) {
                return shape_err("pairing");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{standard_group, subgroup_closure, StandardGroup};

    fn s3() -> Group {
        standard_group(&StandardGroup::Symmetric(3)).unwrap()
    }

    #[test]
    fn full_intersection_square() {
        let g = s3();
        let full = Subgroup::full(&g);
        let cs = intersection_square(&g, &full, &full).unwrap();
        assert_eq!(cs.p.order(), 6);
        let rep = verify_crossed_square(&cs);
        assert!(rep.all_pass(), "{rep:?}");
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(cs.pairing(a, b), g.commutator(a, b));
            }
        }
    }

    #[test]
    fn dihedral_intersection() {
        let d4 = standard_group(&StandardGroup::Dihedral(4)).unwrap();
        let m = subgroup_closure(&d4, &[1]).unwrap(); // ⟨r⟩
        let n = subgroup_closure(&d4, &[2, 4]).unwrap(); // ⟨r², s⟩
        let cs = intersection_square(&d4, &m, &n).unwrap();
        assert_eq!(cs.p.order(), 2); // ⟨r²⟩
        assert!(verify_crossed_square(&cs).all_pass());
    }

    #[test]
    fn disjoint_intersection() {
        let c6 = standard_group(&StandardGroup::Cyclic(6)).unwrap();
        let m = subgroup_closure(&c6, &[2]).unwrap();
        let n = subgroup_closure(&c6, &[3]).unwrap();
        let cs = intersection_square(&c6, &m, &n).unwrap();
        assert_eq!(cs.p.order(), 1);
        assert!(cs.h.iter().flatten().all(|&v| v == cs.p.identity()));
        assert!(verify_crossed_square(&cs).all_pass());
    }

    #[test]
    fn normality_is_required() {
        let g = s3();
        let refl = g.elements().find(|&x| g.element_order(x) == 2).unwrap();
        let m = subgroup_closure(&g, &[refl]).unwrap();
        let full = Subgroup::full(&g);
        assert!(matches!(
            intersection_square(&g, &m, &full),
            Err(SquareError::Group(GroupError::NotNormal { .. }))
        ));
    }

    #[test]
    fn corrupted_pairing_is_detected() {
        let g = s3();
        let full = Subgroup::full(&g);
        let mut cs = intersection_square(&g, &full, &full).unwrap();
        let old = cs.h[1][2];
        cs.h[1][2] = cs.p.mul(old, 1);
        let rep = verify_crossed_square(&cs);
        assert!(!rep.all_pass());
        assert!(rep.x0.is_err() || rep.x2.is_err());
    }
}
