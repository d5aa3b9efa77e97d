//! Internal actions, semidirect products, (pre)crossed modules, and the
//! crossed-module ⇄ internal-groupoid equivalence, instantiated for groups.
//!
//! Left-action convention throughout: `ˡ(ˡ'm) = ^(l·l')m`. Semidirect pairs
//! are stored kernel-first, `(x, l)`, multiplying as
//! `(x, l)·(x', l') = (x·ˡx', l·l')`.

use std::sync::Arc;

use crate::commutator::{higgins_commutator, huq_commutator};
use crate::group::{
    quotient_group, El, FiniteGroup, Group, GroupError, GroupHom, Subgroup,
};
use crate::limits::DEFAULT_ORDER_BOUND;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("the map of acting element {0} is not an automorphism")]
    NotAutomorphism(El),
    #[error("action is not functorial on the pair ({0}, {1})")]
    NotFunctorial(El, El),
    #[error("the identity does not act as the identity map")]
    IdentityNotFixed,
    #[error("action shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("equivariance fails on (l={0}, m={1})")]
    NotEquivariant(El, El),
    #[error("Peiffer identity fails on (m={0}, m'={1})")]
    PeifferFailure(El, El),
    #[error("reflexive graph does not carry a groupoid structure")]
    NotGroupoid,
    #[error("graph sections are not common to both legs: {0}")]
    MalformedGraph(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An action of `acting` on `acted` by automorphisms, one element map per
/// acting element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    acting: Group,
    acted: Group,
    perms: Vec<Vec<El>>,
}

impl GroupAction {
    pub fn acting(&self) -> &Group {
        &self.acting
    }

    pub fn acted(&self) -> &Group {
        &self.acted
    }

    #[inline]
    pub fn act(&self, l: El, m: El) -> El {
        self.perms[l as usize][m as usize]
    }

    pub fn perms(&self) -> &[Vec<El>] {
        &self.perms
    }

    pub fn trivial(acting: &Group, acted: &Group) -> GroupAction {
        GroupAction {
            acting: acting.clone(),
            acted: acted.clone(),
            perms: vec![acted.elements().collect(); acting.order() as usize],
        }
    }

    /// Conjugation of a group on itself.
    pub fn conjugation(g: &Group) -> GroupAction {
        let perms = g
            .elements()
            .map(|l| g.elements().map(|m| g.conj(l, m)).collect())
            .collect();
        GroupAction {
            acting: g.clone(),
            acted: g.clone(),
            perms,
        }
    }
}

/// Validate an action given as raw permutation tables.
pub fn make_action(
    acting: &Group,
    acted: &Group,
    perms: Vec<Vec<El>>,
) -> Result<GroupAction, ActionError> {
    if perms.len() != acting.order() as usize {
        return Err(ActionError::ShapeMismatch(format!(
            "{} maps for acting order {}",
            perms.len(),
            acting.order()
        )));
    }
    for (l, p) in perms.iter().enumerate() {
        if p.len() != acted.order() as usize {
            return Err(ActionError::ShapeMismatch(format!(
                "map of element {l} has length {}",
                p.len()
            )));
        }
        // bijective homomorphism of the acted group
        let mut seen = vec![false; p.len()];
        for &v in p {
            if v >= acted.order() || seen[v as usize] {
                return Err(ActionError::NotAutomorphism(l as El));
            }
            seen[v as usize] = true;
        }
        for x in acted.elements() {
            for y in acted.elements() {
                if p[acted.mul(x, y) as usize] != acted.mul(p[x as usize], p[y as usize]) {
                    return Err(ActionError::NotAutomorphism(l as El));
                }
            }
        }
    }
    let e = acting.identity() as usize;
    if perms[e].iter().enumerate().any(|(i, &v)| v != i as El) {
        return Err(ActionError::IdentityNotFixed);
    }
    for l1 in acting.elements() {
        for l2 in acting.elements() {
            let composite = &perms[acting.mul(l1, l2) as usize];
            for m in acted.elements() {
                if composite[m as usize] != perms[l1 as usize][perms[l2 as usize][m as usize] as usize]
                {
                    return Err(ActionError::NotFunctorial(l1, l2));
                }
            }
        }
    }
    Ok(GroupAction {
        acting: acting.clone(),
        acted: acted.clone(),
        perms,
    })
}

/// A split short exact sequence `kernel ↣ total ⇄ base`.
#[derive(Debug, Clone)]
pub struct SplitExtension {
    pub total: Group,
    pub base: Group,
    pub kernel_group: Group,
    pub projection: GroupHom,
    pub section: GroupHom,
    pub kernel_inclusion: GroupHom,
}

/// Semidirect product of an action, with pairs stored kernel-first:
/// the element `x·|L| + l` is the pair `(x, l)`.
pub fn semidirect_product(action: &GroupAction) -> Result<SplitExtension, ActionError> {
    semidirect_product_bounded(action, DEFAULT_ORDER_BOUND)
}

pub fn semidirect_product_bounded(
    action: &GroupAction,
    bound: u64,
) -> Result<SplitExtension, ActionError> {
    let m = action.acted().clone();
    let l = action.acting().clone();
    let order = m.order() as u64 * l.order() as u64;
    if order > bound {
        return Err(GroupError::TooLarge { order, bound }.into());
    }
    let lo = l.order();
    let a = action.clone();
    let (mc, lc) = (m.clone(), l.clone());
    let total = FiniteGroup::from_op(order as u32, None, move |p, q| {
        let (x, la) = (p / lo, p % lo);
        let (y, lb) = (q / lo, q % lo);
        mc.mul(x, a.act(la, y)) * lo + lc.mul(la, lb)
    })?;
    let projection = GroupHom::new(&total, &l, (0..total.order()).map(|p| p % lo).collect())?;
    let section = GroupHom::new(&l, &total, (0..lo).map(|la| m.identity() * lo + la).collect())?;
    let kernel_inclusion =
        GroupHom::new(&m, &total, (0..m.order()).map(|x| x * lo + l.identity()).collect())?;
    // conjugating the kernel by a section image computes the action
    for la in l.elements() {
        for x in m.elements() {
            let conj = total.conj(section.apply(la), kernel_inclusion.apply(x));
            if conj != kernel_inclusion.apply(action.act(la, x)) {
                return Err(ActionError::NotEquivariant(la, x));
            }
        }
    }
    debug_assert_eq!(kernel_inclusion.image_subgroup(), projection.kernel());
    Ok(SplitExtension {
        total,
        base: l,
        kernel_group: m,
        projection,
        section,
        kernel_inclusion,
    })
}

/// Boundary `∂: M → L` with an action of `L` on `M` satisfying equivariance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecrossedModule {
    boundary: GroupHom,
    action: GroupAction,
}

/// Report of the two crossed-module identities, with witnesses on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XModReport {
    /// equivariance `∂(ˡm) = l·∂(m)·l⁻¹`; witness `(l, m)`
    pub precrossed: Result<(), (El, El)>,
    /// Peiffer identity `^(∂m)m' = m·m'·m⁻¹`; witness `(m, m')`
    pub peiffer: Result<(), (El, El)>,
}

impl XModReport {
    pub fn all_pass(&self) -> bool {
        self.precrossed.is_ok() && self.peiffer.is_ok()
    }
}

/// Exhaustive element-wise check of equivariance and the Peiffer identity.
pub fn verify_crossed_module(boundary: &GroupHom, action: &GroupAction) -> XModReport {
    let m = boundary.domain();
    let l = boundary.codomain();
    let mut precrossed = Ok(());
    'eq: for la in l.elements() {
        for x in m.elements() {
            if boundary.apply(action.act(la, x)) != l.conj(la, boundary.apply(x)) {
                precrossed = Err((la, x));
                break 'eq;
            }
        }
    }
    let mut peiffer = Ok(());
    'pf: for x in m.elements() {
        for y in m.elements() {
            if action.act(boundary.apply(x), y) != m.conj(x, y) {
                peiffer = Err((x, y));
                break 'pf;
            }
        }
    }
    XModReport { precrossed, peiffer }
}

impl PrecrossedModule {
    pub fn new(boundary: GroupHom, action: GroupAction) -> Result<PrecrossedModule, ActionError> {
        if action.acting() != boundary.codomain() || action.acted() != boundary.domain() {
            return Err(ActionError::ShapeMismatch(
                "action must be of the codomain on the domain of the boundary".into(),
            ));
        }
        let report = verify_crossed_module(&boundary, &action);
        if let Err((l, m)) = report.precrossed {
            return Err(ActionError::NotEquivariant(l, m));
        }
        Ok(PrecrossedModule { boundary, action })
    }

    pub fn boundary(&self) -> &GroupHom {
        &self.boundary
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn kernel(&self) -> &Group {
        self.boundary.domain()
    }

    pub fn base(&self) -> &Group {
        self.boundary.codomain()
    }
}

/// A precrossed module that also satisfies the Peiffer identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule(PrecrossedModule);

impl CrossedModule {
    pub fn new(boundary: GroupHom, action: GroupAction) -> Result<CrossedModule, ActionError> {
        let pcm = PrecrossedModule::new(boundary, action)?;
        let report = verify_crossed_module(pcm.boundary(), pcm.action());
        if let Err((x, y)) = report.peiffer {
            return Err(ActionError::PeifferFailure(x, y));
        }
        Ok(CrossedModule(pcm))
    }

    pub fn boundary(&self) -> &GroupHom {
        self.0.boundary()
    }

    pub fn action(&self) -> &GroupAction {
        self.0.action()
    }

    pub fn kernel(&self) -> &Group {
        self.0.kernel()
    }

    pub fn base(&self) -> &Group {
        self.0.base()
    }

    pub fn as_precrossed(&self) -> &PrecrossedModule {
        &self.0
    }

    /// `id: G → G` with conjugation.
    pub fn identity(g: &Group) -> CrossedModule {
        CrossedModule(PrecrossedModule {
            boundary: GroupHom::identity(g),
            action: GroupAction::conjugation(g),
        })
    }

    /// Zero boundary with the trivial action; a crossed module iff the
    /// kernel is abelian.
    pub fn zero(x: &Group, l: &Group) -> Result<CrossedModule, ActionError> {
        CrossedModule::new(GroupHom::trivial(x, l), GroupAction::trivial(l, x))
    }

    /// Inclusion of a normal subgroup with the conjugation action. Returns
    /// the crossed module on the subgroup carrier.
    pub fn inclusion(l: &Group, m: &Subgroup) -> Result<CrossedModule, ActionError> {
        if let Err((conjugator, element)) = m.normality_witness() {
            return Err(GroupError::NotNormal {
                conjugator,
                element,
            }
            .into());
        }
        let (carrier, embed) = m.to_group()?;
        let perms: Vec<Vec<El>> = l
            .elements()
            .map(|g| {
                m.elements()
                    .iter()
                    .map(|&x| m.index_of(l.conj(g, x)).expect("normal subgroup"))
                    .collect()
            })
            .collect();
        let action = make_action(l, &carrier, perms)?;
        CrossedModule::new(embed, action)
    }
}

/// `C1 ⇉ C0` with a common section: `d∘e = 1 = c∘e`.
#[derive(Debug, Clone)]
pub struct ReflexiveGraph {
    pub c1: Group,
    pub c0: Group,
    pub d: GroupHom,
    pub c: GroupHom,
    pub e: GroupHom,
}

impl ReflexiveGraph {
    pub fn new(d: GroupHom, c: GroupHom, e: GroupHom) -> Result<ReflexiveGraph, ActionError> {
        let c1 = d.domain().clone();
        let c0 = d.codomain().clone();
        if c.domain() != &c1 || c.codomain() != &c0 || e.domain() != &c0 || e.codomain() != &c1 {
            return Err(ActionError::MalformedGraph(
                "legs and section do not share the same two groups".into(),
            ));
        }
        for l in c0.elements() {
            if d.apply(e.apply(l)) != l || c.apply(e.apply(l)) != l {
                return Err(ActionError::MalformedGraph(format!(
                    "section fails at element {l}"
                )));
            }
        }
        Ok(ReflexiveGraph { c1, c0, d, c, e })
    }

    pub fn kernel_d(&self) -> Subgroup {
        self.d.kernel()
    }

    pub fn kernel_c(&self) -> Subgroup {
        self.c.kernel()
    }
}

/// The reflexive graph `M ⋊ L ⇉ L` of a precrossed module:
/// `d(x,l) = l`, `c(x,l) = ∂(x)·l`, `e(l) = (1,l)`.
pub fn precrossed_to_reflexive_graph(
    pcm: &PrecrossedModule,
) -> Result<(ReflexiveGraph, SplitExtension), ActionError> {
    let ext = semidirect_product(pcm.action())?;
    let l = pcm.base().clone();
    let lo = l.order();
    let boundary = pcm.boundary();
    let c_map: Vec<El> = ext
        .total
        .elements()
        .map(|p| l.mul(boundary.apply(p / lo), p % lo))
        .collect();
    let c = GroupHom::new(&ext.total, &l, c_map)?;
    let graph = ReflexiveGraph::new(ext.projection.clone(), c, ext.section.clone())?;
    Ok((graph, ext))
}

pub fn xmod_to_reflexive_graph(
    cm: &CrossedModule,
) -> Result<(ReflexiveGraph, SplitExtension), ActionError> {
    precrossed_to_reflexive_graph(cm.as_precrossed())
}

/// A reflexive graph carries a (unique) groupoid structure iff the Higgins
/// commutator of the two kernels vanishes. Returns a witness pair otherwise.
pub fn groupoid_witness(rg: &ReflexiveGraph) -> Result<(), (El, El)> {
    let kd = rg.kernel_d();
    let kc = rg.kernel_c();
    for &a in kd.elements() {
        for &b in kc.elements() {
            if rg.c1.commutator(a, b) != rg.c1.identity() {
                return Err((a, b));
            }
        }
    }
    debug_assert!(higgins_commutator(&kd, &kc).unwrap().is_trivial());
    Ok(())
}

pub fn is_groupoid(rg: &ReflexiveGraph) -> bool {
    groupoid_witness(rg).is_ok()
}

/// Reflect a reflexive graph onto a groupoid by dividing the Huq closure of
/// `[K_d, K_c]` out of `C1`. Idempotent on groupoids.
pub fn reflect_to_groupoid(rg: &ReflexiveGraph) -> Result<(ReflexiveGraph, GroupHom), ActionError> {
    let huq = huq_commutator(&rg.kernel_d(), &rg.kernel_c())?;
    let (c1q, proj) = quotient_group(&rg.c1, &huq)?;
    // the closure lies inside both kernels, so d and c factor through it
    let mut rep = vec![u32::MAX; c1q.order() as usize];
    for x in rg.c1.elements() {
        let q = proj.apply(x);
        if rep[q as usize] == u32::MAX {
            rep[q as usize] = x;
        }
    }
    let d_map: Vec<El> = rep.iter().map(|&x| rg.d.apply(x)).collect();
    let c_map: Vec<El> = rep.iter().map(|&x| rg.c.apply(x)).collect();
    let d = GroupHom::new(&c1q, &rg.c0, d_map)?;
    let c = GroupHom::new(&c1q, &rg.c0, c_map)?;
    let e = rg.e.then(&proj)?;
    let out = ReflexiveGraph::new(d, c, e)?;
    if groupoid_witness(&out).is_err() {
        return Err(ActionError::NotGroupoid);
    }
    Ok((out, proj))
}

/// Normalisation of a groupoid: the crossed module `c|K_d : K_d → C0` with
/// the action `l·x = e(l)·x·e(l)⁻¹` computed inside `C1`. Also returns the
/// embedding of the kernel carrier into `C1`.
pub fn normalize_groupoid(
    rg: &ReflexiveGraph,
) -> Result<(CrossedModule, GroupHom), ActionError> {
    if groupoid_witness(rg).is_err() {
        return Err(ActionError::NotGroupoid);
    }
    let kd = rg.kernel_d();
    let (carrier, embed) = kd.to_group()?;
    let boundary = embed.then(&rg.c)?;
    let perms: Vec<Vec<El>> = rg
        .c0
        .elements()
        .map(|l| {
            let s = rg.e.apply(l);
            kd.elements()
                .iter()
                .map(|&x| {
                    kd.index_of(rg.c1.conj(s, x))
                        .expect("conjugate of K_d by a section image stays in K_d")
                })
                .collect()
        })
        .collect();
    let action = make_action(&rg.c0, &carrier, perms)?;
    let cm = CrossedModule::new(boundary, action)?;
    Ok((cm, embed))
}

/// Mutual actions induced by two coterminal crossed modules:
/// `ᵐn = ^(μm)n` and `ⁿm = ^(νn)m`.
pub fn induced_mutual_actions(
    mu: &CrossedModule,
    nu: &CrossedModule,
) -> Result<(GroupAction, GroupAction), ActionError> {
    if mu.base() != nu.base() {
        return Err(ActionError::ShapeMismatch(
            "crossed modules are not over the same base".into(),
        ));
    }
    let m_on_n = GroupAction {
        acting: mu.kernel().clone(),
        acted: nu.kernel().clone(),
        perms: mu
            .kernel()
            .elements()
            .map(|x| nu.action().perms()[mu.boundary().apply(x) as usize].clone())
            .collect(),
    };
    let n_on_m = GroupAction {
        acting: nu.kernel().clone(),
        acted: mu.kernel().clone(),
        perms: nu
            .kernel()
            .elements()
            .map(|x| mu.action().perms()[nu.boundary().apply(x) as usize].clone())
            .collect(),
    };
    let m_on_n = make_action(&m_on_n.acting.clone(), &m_on_n.acted.clone(), m_on_n.perms)?;
    let n_on_m = make_action(&n_on_m.acting.clone(), &n_on_m.acted.clone(), n_on_m.perms)?;
    Ok((m_on_n, n_on_m))
}

/// Check that `theta` is an isomorphism of crossed modules over the identity
/// on the base: bijective, boundary-compatible, action-compatible.
pub fn crossed_module_isomorphism_over_base(
    from: &CrossedModule,
    to: &CrossedModule,
    theta: &GroupHom,
) -> Result<(), ActionError> {
    if from.base() != to.base() {
        return Err(ActionError::ShapeMismatch("different bases".into()));
    }
    if theta.domain() != from.kernel() || theta.codomain() != to.kernel() {
        return Err(ActionError::ShapeMismatch("map does not join the kernels".into()));
    }
    if !theta.is_bijective() {
        return Err(ActionError::ShapeMismatch("comparison map is not bijective".into()));
    }
    for x in from.kernel().elements() {
        if to.boundary().apply(theta.apply(x)) != from.boundary().apply(x) {
            return Err(ActionError::ShapeMismatch(format!(
                "boundary mismatch at element {x}"
            )));
        }
    }
    for l in from.base().elements() {
        for x in from.kernel().elements() {
            if theta.apply(from.action().act(l, x)) != to.action().act(l, theta.apply(x)) {
                return Err(ActionError::NotEquivariant(l, x));
            }
        }
    }
    Ok(())
}

/// Roundtrip comparison map for `normalize(graph(cm)) ≅ cm`: sends `m` to the
/// pair `(m, 1)` inside the kernel carrier of the graph.
pub fn roundtrip_comparison(
    cm: &CrossedModule,
    ext: &SplitExtension,
    normalized: &CrossedModule,
    embed: &GroupHom,
) -> Result<GroupHom, ActionError> {
    let mut inverse_embed = vec![u32::MAX; ext.total.order() as usize];
    for x in normalized.kernel().elements() {
        inverse_embed[embed.apply(x) as usize] = x;
    }
    let map: Vec<El> = cm
        .kernel()
        .elements()
        .map(|m| {
            let pair = ext.kernel_inclusion.apply(m);
            inverse_embed[pair as usize]
        })
        .collect();
    if map.iter().any(|&v| v == u32::MAX) {
        return Err(ActionError::ShapeMismatch(
            "kernel inclusion does not land in the normalized kernel".into(),
        ));
    }
    let theta = GroupHom::new(cm.kernel(), normalized.kernel(), map)?;
    crossed_module_isomorphism_over_base(cm, normalized, &theta)?;
    Ok(theta)
}

/// Every normal subgroup, as joins of normal closures of single elements.
pub fn normal_subgroups(g: &Group) -> Result<Vec<Subgroup>, GroupError> {
    let mut atoms: Vec<Subgroup> = Vec::new();
    for x in g.elements() {
        let n = crate::group::normal_closure(g, &[x])?;
        if !atoms.contains(&n) {
            atoms.push(n);
        }
    }
    let mut all: Vec<Subgroup> = vec![Subgroup::trivial(g)];
    let mut frontier = all.clone();
    while let Some(s) = frontier.pop() {
        for a in &atoms {
            let j = s.join(a)?;
            if !all.contains(&j) {
                all.push(j.clone());
                frontier.push(j);
            }
        }
    }
    all.sort_by_key(|s| (s.order(), s.elements().to_vec()));
    Ok(all)
}

fn _group_eq(a: &Group, b: &Group) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
