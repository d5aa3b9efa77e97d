//! Double reflexive graphs and double groupoids in groups: the parallelistic
//! double relation on two normal subgroups, the reflector that quotients the
//! corner group, normalisation to a crossed square, and the reconstruction
//! of the corner group of a tensor product from its normal form.

use crate::action::{
    groupoid_witness, make_action, reflect_to_groupoid, semidirect_product_bounded,
    ReflexiveGraph, SplitExtension,
};
use crate::commutator::huq_commutator;
use crate::group::{quotient_group, El, FiniteGroup, Group, GroupError, GroupHom, Subgroup};
use crate::square::{crossed_square_isomorphism, verify_crossed_square, CrossedSquare};
use crate::tensor::{TensorError, TensorGroup};

/// The three structure maps of one reflexive graph.
#[derive(Debug, Clone)]
pub struct RgLegs {
    pub d: GroupHom,
    pub c: GroupHom,
    pub e: GroupHom,
}

impl RgLegs {
    fn graph(&self) -> Result<ReflexiveGraph, TensorError> {
        ReflexiveGraph::new(self.d.clone(), self.c.clone(), self.e.clone())
            .map_err(|e| TensorError::MalformedDoubleGraph(e.to_string()))
    }
}

/// Four groups on the corners of a square, with reflexive-graph structures
/// on every edge and all nine compatibility squares commuting:
///
/// ```text
///   A ⇉ B     up
///   ⇅   ⇅     left, right
///   C ⇉ D     bottom
/// ```
#[derive(Debug, Clone)]
pub struct DoubleReflexiveGraph {
    pub a: Group,
    pub b: Group,
    pub c: Group,
    pub d: Group,
    pub up: RgLegs,
    pub left: RgLegs,
    pub right: RgLegs,
    pub bottom: RgLegs,
}

impl DoubleReflexiveGraph {
    pub fn new(
        up: RgLegs,
        left: RgLegs,
        right: RgLegs,
        bottom: RgLegs,
    ) -> Result<DoubleReflexiveGraph, TensorError> {
        let a = up.d.domain().clone();
        let b = up.d.codomain().clone();
        let c = left.d.codomain().clone();
        let d = right.d.codomain().clone();
        let drg = DoubleReflexiveGraph {
            a,
            b,
            c,
            d,
            up,
            left,
            right,
            bottom,
        };
        drg.validate()?;
        Ok(drg)
    }

    fn validate(&self) -> Result<(), TensorError> {
        let bad = |msg: &str| Err(TensorError::MalformedDoubleGraph(msg.into()));
        if self.left.d.domain() != &self.a
            || self.right.d.domain() != &self.b
            || self.bottom.d.domain() != &self.c
            || self.bottom.d.codomain() != &self.d
            || self.right.d.codomain() != &self.d
        {
            return bad("corner groups disagree");
        }
        self.up.graph()?;
        self.left.graph()?;
        self.right.graph()?;
        self.bottom.graph()?;
        // nine compatibility squares: (d_U, d_D), (c_U, c_D) are morphisms
        // from the left to the right graph, (e_U, e_D) one the other way
        let eq = |f: &GroupHom, g: &GroupHom, name: &str| {
            if f.image_map() == g.image_map() {
                Ok(())
            } else {
                Err(TensorError::MalformedDoubleGraph(format!(
                    "compatibility square {name} does not commute"
                )))
            }
        };
        eq(
            &self.up.d.then(&self.right.d)?,
            &self.left.d.then(&self.bottom.d)?,
            "d_R∘d_U = d_D∘d_L",
        )?;
        eq(
            &self.up.d.then(&self.right.c)?,
            &self.left.c.then(&self.bottom.d)?,
            "c_R∘d_U = d_D∘c_L",
        )?;
        eq(
            &self.left.e.then(&self.up.d)?,
            &self.bottom.d.then(&self.right.e)?,
            "d_U∘e_L = e_R∘d_D",
        )?;
        eq(
            &self.up.c.then(&self.right.d)?,
            &self.left.d.then(&self.bottom.c)?,
            "d_R∘c_U = c_D∘d_L",
        )?;
        eq(
            &self.up.c.then(&self.right.c)?,
            &self.left.c.then(&self.bottom.c)?,
            "c_R∘c_U = c_D∘c_L",
        )?;
        eq(
            &self.left.e.then(&self.up.c)?,
            &self.bottom.c.then(&self.right.e)?,
            "c_U∘e_L = e_R∘c_D",
        )?;
        eq(
            &self.up.e.then(&self.left.d)?,
            &self.right.d.then(&self.bottom.e)?,
            "d_L∘e_U = e_D∘d_R",
        )?;
        eq(
            &self.up.e.then(&self.left.c)?,
            &self.right.c.then(&self.bottom.e)?,
            "c_L∘e_U = e_D∘c_R",
        )?;
        eq(
            &self.right.e.then(&self.up.e)?,
            &self.bottom.e.then(&self.left.e)?,
            "e_U∘e_R = e_L∘e_D",
        )?;
        Ok(())
    }

    pub fn upper_graph(&self) -> ReflexiveGraph {
        self.up.graph().expect("validated")
    }
    pub fn left_graph(&self) -> ReflexiveGraph {
        self.left.graph().expect("validated")
    }
    pub fn right_graph(&self) -> ReflexiveGraph {
        self.right.graph().expect("validated")
    }
    pub fn bottom_graph(&self) -> ReflexiveGraph {
        self.bottom.graph().expect("validated")
    }
}

/// A double reflexive graph all four of whose graphs are groupoids.
#[derive(Debug, Clone)]
pub struct DoubleGroupoid(DoubleReflexiveGraph);

impl DoubleGroupoid {
    pub fn new(drg: DoubleReflexiveGraph) -> Result<DoubleGroupoid, TensorError> {
        for (graph, name) in [
            (drg.upper_graph(), "upper"),
            (drg.left_graph(), "left"),
            (drg.right_graph(), "right"),
            (drg.bottom_graph(), "bottom"),
        ] {
            if let Err((x, y)) = groupoid_witness(&graph) {
                return Err(TensorError::NotDoubleGroupoid(format!(
                    "{name} graph kernels do not commute at ({x}, {y})"
                )));
            }
        }
        Ok(DoubleGroupoid(drg))
    }

    pub fn graph(&self) -> &DoubleReflexiveGraph {
        &self.0
    }
}

/// Normalisation output: the crossed square together with the embeddings of
/// its corners into the double groupoid's corners.
#[derive(Debug, Clone)]
pub struct NormalizedSquare {
    pub square: CrossedSquare,
    pub p_in_a: GroupHom,
    pub m_in_b: GroupHom,
    pub n_in_c: GroupHom,
}

/// Normalise a double groupoid: `P = K_{d_U} ∧ K_{d_L}`, `M = K_{d_R}`,
/// `N = K_{d_D}`, structure maps restricted from the `c` legs, actions by
/// conjugation with section images, pairing `h(m,n) = [e_U(m), e_L(n)]`.
pub fn normalize_double_groupoid(dg: &DoubleGroupoid) -> Result<NormalizedSquare, TensorError> {
    let g = dg.graph();
    let p_sub = g.up.d.kernel().intersection(&g.left.d.kernel())?;
    let m_sub = g.right.d.kernel();
    let n_sub = g.bottom.d.kernel();
    let (p_grp, p_in_a) = p_sub.to_group()?;
    let (m_grp, m_in_b) = m_sub.to_group()?;
    let (n_grp, n_in_c) = n_sub.to_group()?;

    let miss = |what: &str| TensorError::NotDoubleGroupoid(format!("{what} leaves its kernel"));
    let p_m_map: Vec<El> = (0..p_grp.order())
        .map(|x| m_sub.index_of(g.up.c.apply(p_in_a.apply(x))))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| miss("c_U on P"))?;
    let p_n_map: Vec<El> = (0..p_grp.order())
        .map(|x| n_sub.index_of(g.left.c.apply(p_in_a.apply(x))))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| miss("c_L on P"))?;
    let p_m = GroupHom::new(&p_grp, &m_grp, p_m_map)?;
    let p_n = GroupHom::new(&p_grp, &n_grp, p_n_map)?;
    let mu = m_in_b.then(&g.right.c)?;
    let nu = n_in_c.then(&g.bottom.c)?;

    let conj_action =
        |carrier: &Group, sub: &Subgroup, embed: &GroupHom, section: &dyn Fn(El) -> El| {
            let amb = sub.parent().clone();
            let perms: Vec<Vec<El>> = g
                .d
                .elements()
                .map(|delta| {
                    let s = section(delta);
                    (0..carrier.order())
                        .map(|x| {
                            sub.index_of(amb.conj(s, embed.apply(x)))
                                .expect("kernels are normal, conjugation stays inside")
                        })
                        .collect()
                })
                .collect();
            make_action(&g.d, carrier, perms)
        };
    let l_on_m = conj_action(&m_grp, &m_sub, &m_in_b, &|delta| g.right.e.apply(delta))?;
    let l_on_n = conj_action(&n_grp, &n_sub, &n_in_c, &|delta| g.bottom.e.apply(delta))?;
    let l_on_p = conj_action(&p_grp, &p_sub, &p_in_a, &|delta| {
        g.left.e.apply(g.bottom.e.apply(delta))
    })?;

    let h: Vec<Vec<El>> = (0..m_grp.order())
        .map(|mi| {
            (0..n_grp.order())
                .map(|nj| {
                    let cm = g.a.commutator(
                        g.up.e.apply(m_in_b.apply(mi)),
                        g.left.e.apply(n_in_c.apply(nj)),
                    );
                    p_sub.index_of(cm)
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| miss("pairing"))?;

    let square = CrossedSquare::new(p_m, p_n, mu, nu, l_on_p, l_on_m, l_on_n, h)
        .map_err(|e| TensorError::NotDoubleGroupoid(e.to_string()))?;
    let report = verify_crossed_square(&square);
    if !report.all_pass() {
        return Err(TensorError::NotDoubleGroupoid(format!(
            "normalisation violates {:?}",
            report.failing()
        )));
    }
    Ok(NormalizedSquare {
        square,
        p_in_a,
        m_in_b,
        n_in_c,
    })
}

/// The parallelistic double relation on two normal subgroups `M, N ⊴ L`:
/// quadruples `(x, y, z, w)` with rows congruent mod `M` and columns
/// congruent mod `N`, under componentwise multiplication.
#[derive(Debug, Clone)]
pub struct BoxDoubleGroupoid {
    pub dg: DoubleGroupoid,
    /// corner elements as quadruples
    pub quads: Vec<[El; 4]>,
    /// edge elements: rows (congruent mod M) and columns (congruent mod N)
    pub row_pairs: Vec<[El; 2]>,
    pub col_pairs: Vec<[El; 2]>,
}

pub fn box_double_groupoid(
    l: &Group,
    m: &Subgroup,
    n: &Subgroup,
    order_bound: u64,
) -> Result<BoxDoubleGroupoid, TensorError> {
    for s in [m, n] {
        if let Err((conjugator, element)) = s.normality_witness() {
            return Err(GroupError::NotNormal {
                conjugator,
                element,
            }
            .into());
        }
    }
    let meet = m.intersection(n)?;
    let expected =
        l.order() as u64 * m.order() as u64 * n.order() as u64 * meet.order() as u64;
    if expected > order_bound {
        return Err(GroupError::TooLarge {
            order: expected,
            bound: order_bound,
        }
        .into());
    }
    let mut row_pairs = Vec::new();
    let mut col_pairs = Vec::new();
    for x in l.elements() {
        for y in l.elements() {
            if m.contains(l.mul(x, l.inv(y))) {
                row_pairs.push([x, y]);
            }
            if n.contains(l.mul(x, l.inv(y))) {
                col_pairs.push([x, y]);
            }
        }
    }
    let mut quads = Vec::new();
    for &[x, y] in &row_pairs {
        for &[z, w] in &row_pairs {
            if n.contains(l.mul(x, l.inv(z))) && n.contains(l.mul(y, l.inv(w))) {
                quads.push([x, y, z, w]);
            }
        }
    }
    quads.sort_unstable();
    debug_assert_eq!(quads.len() as u64, expected);

    let pair_group = |pairs: &[[El; 2]]| -> Result<Group, GroupError> {
        let pairs = pairs.to_vec();
        let lc = l.clone();
        let find =
            move |p: [El; 2], pairs: &[[El; 2]]| pairs.binary_search(&p).expect("closed") as El;
        let ps = pairs.clone();
        FiniteGroup::from_op(pairs.len() as u32, None, move |a, b| {
            let (pa, pb) = (ps[a as usize], ps[b as usize]);
            find([lc.mul(pa[0], pb[0]), lc.mul(pa[1], pb[1])], &ps)
        })
    };
    let mut sorted_rows = row_pairs.clone();
    sorted_rows.sort_unstable();
    let mut sorted_cols = col_pairs.clone();
    sorted_cols.sort_unstable();
    let b_grp = pair_group(&sorted_rows)?;
    let c_grp = pair_group(&sorted_cols)?;
    let qs = quads.clone();
    let lc = l.clone();
    let a_grp = FiniteGroup::from_op(quads.len() as u32, None, move |a, b| {
        let (qa, qb) = (qs[a as usize], qs[b as usize]);
        let prod = [
            lc.mul(qa[0], qb[0]),
            lc.mul(qa[1], qb[1]),
            lc.mul(qa[2], qb[2]),
            lc.mul(qa[3], qb[3]),
        ];
        qs.binary_search(&prod).expect("componentwise product stays inside") as El
    })?;

    let row_index = |p: [El; 2]| sorted_rows.binary_search(&p).expect("row pair") as El;
    let col_index = |p: [El; 2]| sorted_cols.binary_search(&p).expect("col pair") as El;
    let up = RgLegs {
        d: GroupHom::new(
            &a_grp,
            &b_grp,
            quads.iter().map(|q| row_index([q[2], q[3]])).collect(),
        )?,
        c: GroupHom::new(
            &a_grp,
            &b_grp,
            quads.iter().map(|q| row_index([q[0], q[1]])).collect(),
        )?,
        e: GroupHom::new(
            &b_grp,
            &a_grp,
            sorted_rows
                .iter()
                .map(|&[x, y]| quads.binary_search(&[x, y, x, y]).expect("reflexive") as El)
                .collect(),
        )?,
    };
    let left = RgLegs {
        d: GroupHom::new(
            &a_grp,
            &c_grp,
            quads.iter().map(|q| col_index([q[1], q[3]])).collect(),
        )?,
        c: GroupHom::new(
            &a_grp,
            &c_grp,
            quads.iter().map(|q| col_index([q[0], q[2]])).collect(),
        )?,
        e: GroupHom::new(
            &c_grp,
            &a_grp,
            sorted_cols
                .iter()
                .map(|&[x, z]| quads.binary_search(&[x, x, z, z]).expect("reflexive") as El)
                .collect(),
        )?,
    };
    let right = RgLegs {
        d: GroupHom::new(&b_grp, l, sorted_rows.iter().map(|&[_, y]| y).collect())?,
        c: GroupHom::new(&b_grp, l, sorted_rows.iter().map(|&[x, _]| x).collect())?,
        e: GroupHom::new(l, &b_grp, l.elements().map(|x| row_index([x, x])).collect())?,
    };
    let bottom = RgLegs {
        d: GroupHom::new(&c_grp, l, sorted_cols.iter().map(|&[_, w]| w).collect())?,
        c: GroupHom::new(&c_grp, l, sorted_cols.iter().map(|&[x, _]| x).collect())?,
        e: GroupHom::new(l, &c_grp, l.elements().map(|x| col_index([x, x])).collect())?,
    };
    let drg = DoubleReflexiveGraph::new(up, left, right, bottom)?;
    let dg = DoubleGroupoid::new(drg)?;
    Ok(BoxDoubleGroupoid {
        dg,
        quads,
        row_pairs: sorted_rows,
        col_pairs: sorted_cols,
    })
}

/// Reflect a double reflexive graph onto a double groupoid. The bottom and
/// right graphs are reflected first when needed; the corner group is then
/// divided by the join of the Huq closures of the two kernel commutators.
/// Returns the composite quotient on the corner group.
pub fn reflect_double_rg(
    drg: &DoubleReflexiveGraph,
) -> Result<(DoubleGroupoid, GroupHom), TensorError> {
    // step 1: make the bottom and right graphs groupoids
    let n_c = huq_commutator(
        &drg.bottom.d.kernel(),
        &drg.bottom.c.kernel(),
    )?;
    let n_b = huq_commutator(&drg.right.d.kernel(), &drg.right.c.kernel())?;
    let (drg1, pre_quotient) = if n_c.is_trivial() && n_b.is_trivial() {
        (drg.clone(), GroupHom::identity(&drg.a))
    } else {
        let (bottom1, qc) = reflect_to_groupoid(&drg.bottom_graph())
            .map_err(|e| TensorError::MalformedDoubleGraph(e.to_string()))?;
        let (right1, qb) = reflect_to_groupoid(&drg.right_graph())
            .map_err(|e| TensorError::MalformedDoubleGraph(e.to_string()))?;
        // the corner group must absorb both section images of the killed parts
        let mut gens: Vec<El> = n_c.elements().iter().map(|&x| drg.left.e.apply(x)).collect();
        gens.extend(n_b.elements().iter().map(|&x| drg.up.e.apply(x)));
        let n_a = crate::group::normal_closure(&drg.a, &gens)?;
        let (_, qa) = quotient_group(&drg.a, &n_a)?;
        let up = RgLegs {
            d: factor_through(&qa, &drg.up.d.then(&qb)?)?,
            c: factor_through(&qa, &drg.up.c.then(&qb)?)?,
            e: factor_through(&qb, &drg.up.e.then(&qa)?)?,
        };
        let left = RgLegs {
            d: factor_through(&qa, &drg.left.d.then(&qc)?)?,
            c: factor_through(&qa, &drg.left.c.then(&qc)?)?,
            e: factor_through(&qc, &drg.left.e.then(&qa)?)?,
        };
        let right = RgLegs {
            d: right1.d,
            c: right1.c,
            e: right1.e,
        };
        let bottom = RgLegs {
            d: bottom1.d,
            c: bottom1.c,
            e: bottom1.e,
        };
        let drg1 = DoubleReflexiveGraph::new(up, left, right, bottom)?;
        (drg1, qa)
    };
    // step 2: divide the join of the two Huq closures out of the corner
    let s = huq_commutator(&drg1.left.d.kernel(), &drg1.left.c.kernel())?;
    let t = huq_commutator(&drg1.up.d.kernel(), &drg1.up.c.kernel())?;
    let join = s.join(&t)?;
    let (_, q) = quotient_group(&drg1.a, &join)?;
    // the kernel of the diagonal quotient is the join of the partial kernels
    let (_, qs) = quotient_group(&drg1.a, &s)?;
    let (_, qt) = quotient_group(&drg1.a, &t)?;
    if qs.kernel().join(&qt.kernel())? != q.kernel() {
        return Err(TensorError::MalformedDoubleGraph(
            "join of partial quotient kernels differs from the diagonal kernel".into(),
        ));
    }
    let up = RgLegs {
        d: factor_through(&q, &drg1.up.d)?,
        c: factor_through(&q, &drg1.up.c)?,
        e: drg1.up.e.then(&q)?,
    };
    let left = RgLegs {
        d: factor_through(&q, &drg1.left.d)?,
        c: factor_through(&q, &drg1.left.c)?,
        e: drg1.left.e.then(&q)?,
    };
    let out = DoubleReflexiveGraph::new(up, left, drg1.right.clone(), drg1.bottom.clone())?;
    let dg = DoubleGroupoid::new(out)?;
    let total = pre_quotient.then(&q)?;
    Ok((dg, total))
}

/// Given a surjection `proj: A → Q` and a map `f: A → X` constant on the
/// fibres of `proj`, produce the induced map `Q → X`.
pub(crate) fn factor_through(proj: &GroupHom, f: &GroupHom) -> Result<GroupHom, TensorError> {
    let q = proj.codomain();
    let mut image = vec![u32::MAX; q.order() as usize];
    for x in proj.domain().elements() {
        let slot = &mut image[proj.apply(x) as usize];
        let v = f.apply(x);
        if *slot == u32::MAX {
            *slot = v;
        } else if *slot != v {
            return Err(TensorError::MalformedDoubleGraph(
                "map does not factor through the quotient".into(),
            ));
        }
    }
    if image.contains(&u32::MAX) {
        return Err(TensorError::MalformedDoubleGraph(
            "projection is not surjective".into(),
        ));
    }
    Ok(GroupHom::new(q, f.codomain(), image)?)
}


/// The corner group of the tensor's double groupoid, realised on normal
/// forms `(t, m, n, l)` with the multiplication induced by the swap rules
/// (base elements act on all three other coordinates; moving `n` past `m'`
/// produces the pure tensor `(m' ⊗ n)⁻¹`; `m` and `n` act on `t` through
/// the base).
#[derive(Debug, Clone)]
pub struct Cat2Group {
    pub dg: DoubleGroupoid,
    pub tensor: TensorGroup,
    t_order: u32,
    m_order: u32,
    n_order: u32,
    l_order: u32,
}

impl Cat2Group {
    /// Orders of the tensor, kernel, kernel and base parts of the corner.
    pub fn corner_orders(&self) -> (u32, u32, u32, u32) {
        (self.t_order, self.m_order, self.n_order, self.l_order)
    }

    #[inline]
    pub fn encode(&self, t: El, m: El, n: El, l: El) -> El {
        ((t * self.m_order + m) * self.n_order + n) * self.l_order + l
    }

    #[inline]
    pub fn decode(&self, a: El) -> (El, El, El, El) {
        let l = a % self.l_order;
        let a = a / self.l_order;
        let n = a % self.n_order;
        let a = a / self.n_order;
        (a / self.m_order, a % self.m_order, n, l)
    }
}

pub fn build_cat2_group(t: &TensorGroup, order_bound: u64) -> Result<Cat2Group, TensorError> {
    let pair = &t.pair;
    let (m_grp, n_grp, l_grp) = (pair.m().clone(), pair.n().clone(), pair.l().clone());
    let (to, mo, no, lo) = (
        t.group.order(),
        m_grp.order(),
        n_grp.order(),
        l_grp.order(),
    );
    let order = to as u64 * mo as u64 * no as u64 * lo as u64;
    if order > order_bound {
        return Err(GroupError::TooLarge {
            order,
            bound: order_bound,
        }
        .into());
    }
    let order = order as u32;
    let encode = |tt: El, m: El, n: El, l: El| ((tt * mo + m) * no + n) * lo + l;
    let decode = |a: El| {
        let l = a % lo;
        let a = a / lo;
        let n = a % no;
        let a = a / no;
        (a / mo, a % mo, n, l)
    };
    let tg = t.group.clone();
    let mu = pair.mu.clone();
    let nu = pair.nu.clone();
    let (mu_c, nu_c) = (mu.clone(), nu.clone());
    let la = t.l_action.clone();
    let tc = t.clone();
    let (m_prod, n_prod, l_prod) = (m_grp.clone(), n_grp.clone(), l_grp.clone());
    let product = move |a: El, b: El| {
        let (t1, m1, n1, l1) = decode(a);
        let (t2, m2, n2, l2) = decode(b);
        // push l1 through (t2, m2, n2): everything gets acted on
        let t2 = la.act(l1, t2);
        let m2 = mu_c.action().act(l1, m2);
        let n2 = nu_c.action().act(l1, n2);
        // move n1 past t2, then past m2, collecting (m2 ⊗ n1)⁻¹
        let t2 = la.act(nu_c.boundary().apply(n1), t2);
        let swap = tg.inv(tc.pure(m2, n1));
        // move m1 past the collected T part
        let tpart = tg.mul(t2, swap);
        let tpart = la.act(mu_c.boundary().apply(m1), tpart);
        encode(
            tg.mul(t1, tpart),
            m_prod.mul(m1, m2),
            n_prod.mul(n1, n2),
            l_prod.mul(l1, l2),
        )
    };
    // group axioms are verified, not assumed: associativity exhaustively for
    // small orders, and through middle-generator translation otherwise
    let table: Vec<El> = (0..order)
        .flat_map(|a| (0..order).map(move |b| (a, b)))
        .map(|(a, b)| product(a, b))
        .collect();
    let n_us = order as usize;
    let at = |a: El, b: El| table[a as usize * n_us + b as usize];
    if order <= 256 {
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(TensorError::AssociativityFailure(a, b, c));
                    }
                }
            }
        }
    } else {
        // middle-generator associativity suffices: every element is a
        // parenthesised product of axis elements
        let mut gens: Vec<El> = Vec::new();
        let id_t = t.group.identity();
        let id_m = m_grp.identity();
        let id_n = n_grp.identity();
        let id_l = l_grp.identity();
        gens.extend((0..to).map(|x| encode(x, id_m, id_n, id_l)));
        gens.extend((0..mo).map(|x| encode(id_t, x, id_n, id_l)));
        gens.extend((0..no).map(|x| encode(id_t, id_m, x, id_l)));
        gens.extend((0..lo).map(|x| encode(id_t, id_m, id_n, x)));
        for &g in &gens {
            for a in 0..order {
                let ag = at(a, g);
                for b in 0..order {
                    if at(ag, b) != at(a, at(g, b)) {
                        return Err(TensorError::AssociativityFailure(a, g, b));
                    }
                }
            }
        }
    }
    let a_grp = FiniteGroup::from_op(order, None, |a, b| at(a, b))?;

    let b_ext: SplitExtension = semidirect_product_bounded(pair.mu.action(), order_bound)?;
    let c_ext: SplitExtension = semidirect_product_bounded(pair.nu.action(), order_bound)?;
    let b_grp = b_ext.total.clone();
    let c_grp = c_ext.total.clone();
    // pairs in the semidirect products are (x, l) = x·|L| + l, matching the
    // (m, l) and (n, l) coordinates here
    let up = RgLegs {
        d: GroupHom::new(
            &a_grp,
            &b_grp,
            (0..order)
                .map(|a| {
                    let (_, m, _, l) = decode(a);
                    m * lo + l
                })
                .collect(),
        )?,
        c: GroupHom::new(
            &a_grp,
            &b_grp,
            (0..order)
                .map(|a| {
                    let (tt, m, n, l) = decode(a);
                    m_grp.mul(t.pi_m.apply(tt), m) * lo
                        + l_grp.mul(nu.boundary().apply(n), l)
                })
                .collect(),
        )?,
        e: GroupHom::new(
            &b_grp,
            &a_grp,
            (0..b_grp.order())
                .map(|p| encode(t.group.identity(), p / lo, n_grp.identity(), p % lo))
                .collect(),
        )?,
    };
    let left = RgLegs {
        d: GroupHom::new(
            &a_grp,
            &c_grp,
            (0..order)
                .map(|a| {
                    let (_, _, n, l) = decode(a);
                    n * lo + l
                })
                .collect(),
        )?,
        c: GroupHom::new(
            &a_grp,
            &c_grp,
            (0..order)
                .map(|a| {
                    let (tt, m, n, l) = decode(a);
                    n_grp.mul(t.pi_n.apply(tt), pair.m_on_n.act(m, n)) * lo
                        + l_grp.mul(mu.boundary().apply(m), l)
                })
                .collect(),
        )?,
        e: GroupHom::new(
            &c_grp,
            &a_grp,
            (0..c_grp.order())
                .map(|p| encode(t.group.identity(), m_grp.identity(), p / lo, p % lo))
                .collect(),
        )?,
    };
    let right = RgLegs {
        d: b_ext.projection.clone(),
        c: GroupHom::new(
            &b_grp,
            &l_grp,
            (0..b_grp.order())
                .map(|p| l_grp.mul(mu.boundary().apply(p / lo), p % lo))
                .collect(),
        )?,
        e: b_ext.section.clone(),
    };
    let bottom = RgLegs {
        d: c_ext.projection.clone(),
        c: GroupHom::new(
            &c_grp,
            &l_grp,
            (0..c_grp.order())
                .map(|p| l_grp.mul(nu.boundary().apply(p / lo), p % lo))
                .collect(),
        )?,
        e: c_ext.section.clone(),
    };
    let drg = DoubleReflexiveGraph::new(up, left, right, bottom)?;
    let dg = DoubleGroupoid::new(drg)?;
    Ok(Cat2Group {
        dg,
        tensor: t.clone(),
        t_order: to,
        m_order: mo,
        n_order: no,
        l_order: lo,
    })
}

/// Compare the normalisation of the reconstructed double groupoid with the
/// tensor's own crossed square, through the canonical corner bijections.
pub fn cat2_normalization_matches_tensor(cat2: &Cat2Group) -> Result<(), TensorError> {
    let t = &cat2.tensor;
    let normalized = normalize_double_groupoid(&cat2.dg)?;
    let own = t.own_square();
    let lo = cat2.l_order;
    let on_p_map: Vec<El> = (0..normalized.square.p.order())
        .map(|x| cat2.decode(normalized.p_in_a.apply(x)).0)
        .collect();
    let on_m_map: Vec<El> = (0..normalized.square.m.order())
        .map(|x| normalized.m_in_b.apply(x) / lo)
        .collect();
    let on_n_map: Vec<El> = (0..normalized.square.n.order())
        .map(|x| normalized.n_in_c.apply(x) / lo)
        .collect();
    let on_p = GroupHom::new(&normalized.square.p, &own.p, on_p_map)?;
    let on_m = GroupHom::new(&normalized.square.m, &own.m, on_m_map)?;
    let on_n = GroupHom::new(&normalized.square.n, &own.n, on_n_map)?;
    let on_l = GroupHom::identity(&normalized.square.l);
    crossed_square_isomorphism(&normalized.square, &own, &on_p, &on_m, &on_n, &on_l)?;
    Ok(())
}

/// Compare the normalisation of the box double groupoid with the
/// intersection square, through the canonical corner bijections.
pub fn box_normalization_matches_intersection(
    l: &Group,
    m: &Subgroup,
    n: &Subgroup,
    order_bound: u64,
) -> Result<(), TensorError> {
    let boxed = box_double_groupoid(l, m, n, order_bound)?;
    let normalized = normalize_double_groupoid(&boxed.dg)?;
    let inter = crate::square::intersection_square(l, m, n)?;
    let meet = m.intersection(n)?;
    let on_p_map: Vec<El> = (0..normalized.square.p.order())
        .map(|x| {
            let quad = boxed.quads[normalized.p_in_a.apply(x) as usize];
            meet.index_of(quad[0]).expect("first coordinate in the meet")
        })
        .collect();
    let on_m_map: Vec<El> = (0..normalized.square.m.order())
        .map(|x| {
            let pair = boxed.row_pairs[normalized.m_in_b.apply(x) as usize];
            m.index_of(pair[0]).expect("first coordinate in M")
        })
        .collect();
    let on_n_map: Vec<El> = (0..normalized.square.n.order())
        .map(|x| {
            let pair = boxed.col_pairs[normalized.n_in_c.apply(x) as usize];
            n.index_of(pair[0]).expect("first coordinate in N")
        })
        .collect();
    let on_p = GroupHom::new(&normalized.square.p, &inter.p, on_p_map)?;
    let on_m = GroupHom::new(&normalized.square.m, &inter.m, on_m_map)?;
    let on_n = GroupHom::new(&normalized.square.n, &inter.n, on_n_map)?;
    let on_l = GroupHom::identity(l);
    crossed_square_isomorphism(&normalized.square, &inter, &on_p, &on_m, &on_n, &on_l)?;
    Ok(())
}

/// Trivial double reflexive graph on a single group: all corners equal, all
/// legs identities.
pub fn identity_double_graph(g: &Group) -> DoubleReflexiveGraph {
    let id = || RgLegs {
        d: GroupHom::identity(g),
        c: GroupHom::identity(g),
        e: GroupHom::identity(g),
    };
    DoubleReflexiveGraph::new(id(), id(), id(), id()).expect("identities always commute")
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{standard_group, subgroup_closure, StandardGroup};
    use crate::limits::DEFAULT_ORDER_BOUND;

    fn s3() -> Group {
        standard_group(&StandardGroup::Symmetric(3)).unwrap()
    }

    fn a3(g: &Group) -> Subgroup {
        let t = g.elements().find(|&x| g.element_order(x) == 3).unwrap();
        subgroup_closure(g, &[t]).unwrap()
    }

    #[test]
    fn box_orders() {
        let g = s3();
        // M = N = trivial: diagonal copy of L
        let t = Subgroup::trivial(&g);
        let b = box_double_groupoid(&g, &t, &t, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(b.dg.graph().a.order(), 6);
        // M = N = L: all quadruples
        let full = Subgroup::full(&g);
        let b = box_double_groupoid(&g, &full, &full, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(b.dg.graph().a.order(), 6u32.pow(4));
        // M = N = A3: |L|·|M|·|N|·|M∧N| = 6·3·3·3
        let a = a3(&g);
        let b = box_double_groupoid(&g, &a, &a, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(b.dg.graph().a.order(), 162);
    }

    #[test]
    fn box_normalizes_to_intersection() {
        let g = s3();
        let a = a3(&g);
        box_normalization_matches_intersection(&g, &a, &a, DEFAULT_ORDER_BOUND).unwrap();
        let d4 = standard_group(&StandardGroup::Dihedral(4)).unwrap();
        let m = subgroup_closure(&d4, &[1]).unwrap();
        let n = subgroup_closure(&d4, &[2, 4]).unwrap();
        box_normalization_matches_intersection(&d4, &m, &n, DEFAULT_ORDER_BOUND).unwrap();
    }

    #[test]
    fn reflect_idempotent_on_double_groupoids() {
        let g = s3();
        let a = a3(&g);
        let b = box_double_groupoid(&g, &a, &a, DEFAULT_ORDER_BOUND).unwrap();
        let (out, q) = reflect_double_rg(b.dg.graph()).unwrap();
        assert!(q.is_bijective());
        assert_eq!(out.graph().a.order(), b.dg.graph().a.order());
    }

    #[test]
    fn reflect_kills_commutators() {
        // corner S3 over trivial edges: reflection abelianises
        let g = s3();
        let triv = standard_group(&StandardGroup::Trivial).unwrap();
        let zero = GroupHom::trivial(&g, &triv);
        let into = GroupHom::trivial(&triv, &g);
        let up = RgLegs {
            d: zero.clone(),
            c: zero.clone(),
            e: into.clone(),
        };
        let left = RgLegs {
            d: zero.clone(),
            c: zero,
            e: into,
        };
        let idt = || RgLegs {
            d: GroupHom::identity(&triv),
            c: GroupHom::identity(&triv),
            e: GroupHom::identity(&triv),
        };
        let drg = DoubleReflexiveGraph::new(up, left, idt(), idt()).unwrap();
        let (dg, q) = reflect_double_rg(&drg).unwrap();
        assert_eq!(dg.graph().a.order(), 2);
        assert_eq!(q.kernel().order(), 3);
    }

    #[test]
    fn reflect_product_case() {
        // A = S3×S3 with both horizontal and vertical legs the first
        // projection; the quotient kills the second factor's commutators
        let g = s3();
        let prod = crate::group::direct_product(&g, &g).unwrap();
        let a = prod.group.clone();
        let proj = prod.proj_left.clone();
        let sect = prod.inj_left.clone();
        let legs = || RgLegs {
            d: proj.clone(),
            c: proj.clone(),
            e: sect.clone(),
        };
        let idg = || RgLegs {
            d: GroupHom::identity(&g),
            c: GroupHom::identity(&g),
            e: GroupHom::identity(&g),
        };
        let drg = DoubleReflexiveGraph::new(legs(), legs(), idg(), idg()).unwrap();
        assert!(groupoid_witness(&drg.upper_graph()).is_err());
        let (dg, q) = reflect_double_rg(&drg).unwrap();
        assert_eq!(dg.graph().a.order(), 12); // S3 × C2
        assert_eq!(q.kernel().order(), 3);
        let _ = a;
    }

    #[test]
    fn reflect_with_pre_reflection() {
        // bottom and right graphs are S3 over the trivial group, so they are
        // reflected first; the corner follows and the whole square collapses
        // to the Klein four-group
        let g = s3();
        let triv = standard_group(&StandardGroup::Trivial).unwrap();
        let prod = crate::group::direct_product(&g, &g).unwrap();
        let up = RgLegs {
            d: prod.proj_left.clone(),
            c: prod.proj_left.clone(),
            e: prod.inj_left.clone(),
        };
        let left = RgLegs {
            d: prod.proj_right.clone(),
            c: prod.proj_right.clone(),
            e: prod.inj_right.clone(),
        };
        let edge = || RgLegs {
            d: GroupHom::trivial(&g, &triv),
            c: GroupHom::trivial(&g, &triv),
            e: GroupHom::trivial(&triv, &g),
        };
        let drg = DoubleReflexiveGraph::new(up, left, edge(), edge()).unwrap();
        assert!(groupoid_witness(&drg.bottom_graph()).is_err());
        assert!(groupoid_witness(&drg.right_graph()).is_err());
        let (dg, q) = reflect_double_rg(&drg).unwrap();
        assert_eq!(dg.graph().a.order(), 4);
        assert_eq!(dg.graph().b.order(), 2);
        assert_eq!(dg.graph().c.order(), 2);
        assert_eq!(q.kernel().order(), 9);
        // idempotence on the result
        let (again, q2) = reflect_double_rg(dg.graph()).unwrap();
        assert!(q2.is_bijective());
        assert_eq!(again.graph().a.order(), 4);
    }

    #[test]
    fn identity_double_graph_is_groupoid() {
        let g = s3();
        let drg = identity_double_graph(&g);
        let dg = DoubleGroupoid::new(drg).unwrap();
        let ns = normalize_double_groupoid(&dg).unwrap();
        assert_eq!(ns.square.p.order(), 1);
        assert_eq!(ns.square.m.order(), 1);
        assert_eq!(ns.square.n.order(), 1);
        assert_eq!(ns.square.l.order(), 6);
    }

    #[test]
    fn cat2_a3_battery() {
        let (_, pair) = crate::tensor::tests::a3_pair();
        let t = crate::tensor::tensor_group(&pair, 10_000).unwrap();
        let cat2 = build_cat2_group(&t, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(cat2.dg.graph().a.order(), 162);
        cat2_normalization_matches_tensor(&cat2).unwrap();
    }

    #[test]
    fn cat2_c2_battery() {
        let c2 = standard_group(&StandardGroup::Cyclic(2)).unwrap();
        let pair = crate::tensor::tests::abelian_pair(&c2, &c2);
        let t = crate::tensor::tensor_group(&pair, 10_000).unwrap();
        let cat2 = build_cat2_group(&t, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(cat2.dg.graph().a.order(), 8);
        cat2_normalization_matches_tensor(&cat2).unwrap();
    }

    #[test]
    fn cat2_degenerate_m_trivial() {
        // M trivial: corner is N ⋊ L
        let triv = standard_group(&StandardGroup::Trivial).unwrap();
        let g = s3();
        let a = a3(&g);
        let mu = crate::action::CrossedModule::zero(&triv, &g).unwrap();
        let nu = crate::action::CrossedModule::inclusion(&g, &a).unwrap();
        let pair = crate::tensor::CompatiblePair::new(mu, nu).unwrap();
        let t = crate::tensor::tensor_group(&pair, 10_000).unwrap();
        assert_eq!(t.group.order(), 1);
        let cat2 = build_cat2_group(&t, DEFAULT_ORDER_BOUND).unwrap();
        assert_eq!(cat2.dg.graph().a.order(), 18); // 1·1·3·6
        cat2_normalization_matches_tensor(&cat2).unwrap();
    }
}
