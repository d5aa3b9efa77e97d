//! The non-abelian tensor product of two coterminal crossed modules of
//! groups, computed from its presentation by coset enumeration, together
//! with its structure maps, functoriality, universal property, and the
//! image-of-the-pairing law for normal subgroups.

use crate::action::{
    induced_mutual_actions, make_action, ActionError, CrossedModule, GroupAction,
};
use crate::commutator::higgins_commutator;
use crate::fp::{todd_coxeter_capped, EnumeratedGroup, FpError, Presentation};
use crate::group::{El, Group, GroupError, GroupHom, Subgroup};
use crate::square::{intersection_square, CrossedSquare, SquareError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("coset enumeration overflowed at {0} live cosets")]
    Overflow(usize),
    #[error("structure map does not respect relator {relator} ({context})")]
    StructureMapIllDefined { relator: usize, context: String },
    #[error("generator images do not respect relator {relator}")]
    NotWellDefined { relator: usize },
    #[error("crossed square is not over the tensor's crossed modules: {0}")]
    SquareMismatch(String),
    #[error("pairing homomorphism is not surjective")]
    NotSurjective,
    #[error("kernel of the pairing is not normal in the reconstructed corner group")]
    KernelNotNormalInQ,
    #[error("not a double groupoid: {0}")]
    NotDoubleGroupoid(String),
    #[error("malformed double reflexive graph: {0}")]
    MalformedDoubleGraph(String),
    #[error("associativity of the reconstructed corner group fails on ({0}, {1}, {2})")]
    AssociativityFailure(El, El, El),
    #[error("presentation has {generators} generators, above the bound {bound}")]
    PresentationTooLarge { generators: usize, bound: usize },
    #[error(transparent)]
    Square(#[from] SquareError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<FpError> for TensorError {
    fn from(e: FpError) -> TensorError {
        match e {
            FpError::Overflow(n) => TensorError::Overflow(n),
            FpError::Group(g) => TensorError::Group(g),
            other => TensorError::Group(GroupError::MalformedTable(other.to_string())),
        }
    }
}

/// Two crossed modules over a common base, with the mutual actions they
/// induce: `ᵐn = ^(μm)n` and `ⁿm = ^(νn)m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatiblePair {
    pub mu: CrossedModule,
    pub nu: CrossedModule,
    pub m_on_n: GroupAction,
    pub n_on_m: GroupAction,
}

impl CompatiblePair {
    pub fn new(mu: CrossedModule, nu: CrossedModule) -> Result<CompatiblePair, TensorError> {
        let (m_on_n, n_on_m) = induced_mutual_actions(&mu, &nu)?;
        Ok(CompatiblePair {
            mu,
            nu,
            m_on_n,
            n_on_m,
        })
    }

    pub fn m(&self) -> &Group {
        self.mu.kernel()
    }

    pub fn n(&self) -> &Group {
        self.nu.kernel()
    }

    pub fn l(&self) -> &Group {
        self.mu.base()
    }

    pub fn swapped(&self) -> CompatiblePair {
        CompatiblePair {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
            m_on_n: self.n_on_m.clone(),
            n_on_m: self.m_on_n.clone(),
        }
    }
}

/// Generator index of the symbol `m ⊗ n`.
fn gen_index(pair: &CompatiblePair, m: El, n: El) -> usize {
    m as usize * pair.n().order() as usize + n as usize
}

/// The defining presentation of the tensor product: one generator per pair
/// `(m, n)`, with relators
/// `(mm')⊗n = (ᵐm' ⊗ ᵐn)(m ⊗ n)` and `m⊗(nn') = (m ⊗ n)(ⁿm ⊗ ⁿn')`.
/// Relators are freely reduced; empty and duplicate relators are dropped,
/// deterministically keeping first occurrences.
pub fn tensor_presentation(pair: &CompatiblePair) -> Presentation {
    let (m_grp, n_grp) = (pair.m().clone(), pair.n().clone());
    let ngens = m_grp.order() as usize * n_grp.order() as usize;
    let gen = |m: El, n: El| (gen_index(pair, m, n) + 1) as i32;
    let mut relators: Vec<Vec<i32>> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<i32>> = std::collections::HashSet::new();
    let mut push = |w: Vec<i32>| {
        let w = Presentation::reduce(&w);
        if !w.is_empty() && seen.insert(w.clone()) {
            relators.push(w);
        }
    };
    for m in m_grp.elements() {
        for m2 in m_grp.elements() {
            for n in n_grp.elements() {
                // (m·m')⊗n · (m⊗n)⁻¹ · (ᵐm' ⊗ ᵐn)⁻¹
                push(vec![
                    gen(m_grp.mul(m, m2), n),
                    -gen(m, n),
                    -gen(pair.mu.action().act(pair.mu.boundary().apply(m), m2), pair.m_on_n.act(m, n)),
                ]);
            }
        }
    }
    for m in m_grp.elements() {
        for n in n_grp.elements() {
            for n2 in n_grp.elements() {
                // m⊗(n·n') · (ⁿm ⊗ ⁿn')⁻¹ · (m⊗n)⁻¹
                push(vec![
                    gen(m, n_grp.mul(n, n2)),
                    -gen(pair.n_on_m.act(n, m), pair.nu.action().act(pair.nu.boundary().apply(n), n2)),
                    -gen(m, n),
                ]);
            }
        }
    }
    Presentation {
        ngens,
        relators,
        generator_names: None,
    }
}

/// The computed tensor product: its group, the pure-tensor map, the
/// projections to `M` and `N`, the diagonal to `L`, and the `L`-action.
#[derive(Debug, Clone)]
pub struct TensorGroup {
    pub pair: CompatiblePair,
    pub group: Group,
    pure: Vec<El>,
    pub pi_m: GroupHom,
    pub pi_n: GroupHom,
    pub lambda: GroupHom,
    pub l_action: GroupAction,
    enumerated: EnumeratedGroup,
}

impl TensorGroup {
    #[inline]
    pub fn pure(&self, m: El, n: El) -> El {
        self.pure[gen_index(&self.pair, m, n)]
    }

    pub fn pure_map(&self) -> &[El] {
        &self.pure
    }

    /// Homomorphism out of the tensor determined by images of the pure
    /// tensors; fails with the first violated relator.
    pub fn hom_from_pure_images(
        &self,
        codomain: &Group,
        images: &[El],
    ) -> Result<GroupHom, TensorError> {
        if let Err(relator) = self.enumerated.relators_hold_under(codomain, images) {
            return Err(TensorError::NotWellDefined { relator });
        }
        let map = self.enumerated.extend_generator_map(codomain, images);
        Ok(GroupHom::new(&self.group, codomain, map)?)
    }

    /// The tensor's own crossed square: `P = M⊗N` with `h` the pure-tensor map.
    pub fn own_square(&self) -> CrossedSquare {
        let m_ord = self.pair.m().order();
        let n_ord = self.pair.n().order();
        let h: Vec<Vec<El>> = (0..m_ord)
            .map(|m| (0..n_ord).map(|n| self.pure(m, n)).collect())
            .collect();
        CrossedSquare::new(
            self.pi_m.clone(),
            self.pi_n.clone(),
            self.pair.mu.boundary().clone(),
            self.pair.nu.boundary().clone(),
            self.l_action.clone(),
            self.pair.mu.action().clone(),
            self.pair.nu.action().clone(),
            h,
        )
        .expect("tensor structure maps always form a commutative square")
    }

    /// `(M⊗N → L, ξ)` as a crossed module.
    pub fn as_crossed_module(&self) -> Result<CrossedModule, TensorError> {
        Ok(CrossedModule::new(self.lambda.clone(), self.l_action.clone())?)
    }
}

pub fn tensor_group(pair: &CompatiblePair, max_cosets: usize) -> Result<TensorGroup, TensorError> {
    tensor_group_bounded(pair, max_cosets, crate::limits::DEFAULT_ORDER_BOUND)
}

/// Enumerate the tensor presentation and equip the result with its verified
/// structure maps.
pub fn tensor_group_bounded(
    pair: &CompatiblePair,
    max_cosets: usize,
    order_bound: u64,
) -> Result<TensorGroup, TensorError> {
    let presentation = tensor_presentation(pair);
    let enumerated = todd_coxeter_capped(&presentation, max_cosets, order_bound)?;
    let group = enumerated.group.clone();
    let (m_grp, n_grp, l_grp) = (pair.m().clone(), pair.n().clone(), pair.l().clone());
    let pure = enumerated.generator_images.clone();

    // π_M(m⊗n) = m·ⁿm⁻¹ and π_N(m⊗n) = ᵐn·n⁻¹ on generators
    let mut pi_m_gen = vec![0u32; pure.len()];
    let mut pi_n_gen = vec![0u32; pure.len()];
    for m in m_grp.elements() {
        for n in n_grp.elements() {
            let i = gen_index(pair, m, n);
            pi_m_gen[i] = m_grp.mul(m, m_grp.inv(pair.n_on_m.act(n, m)));
            pi_n_gen[i] = n_grp.mul(pair.m_on_n.act(m, n), n_grp.inv(n));
        }
    }
    let structure_hom = |codomain: &Group, gens: &[El], context: &str| {
        if let Err(relator) = enumerated.relators_hold_under(codomain, gens) {
            return Err(TensorError::StructureMapIllDefined {
                relator,
                context: context.to_string(),
            });
        }
        let map = enumerated.extend_generator_map(codomain, gens);
        GroupHom::new(&group, codomain, map).map_err(TensorError::from)
    };
    let pi_m = structure_hom(&m_grp, &pi_m_gen, "projection to M")?;
    let pi_n = structure_hom(&n_grp, &pi_n_gen, "projection to N")?;
    let lambda = pi_m.then(pair.mu.boundary())?;
    let lambda_check = pi_n.then(pair.nu.boundary())?;
    if lambda != lambda_check {
        return Err(TensorError::StructureMapIllDefined {
            relator: 0,
            context: "diagonal factorisations disagree".into(),
        });
    }

    // ˡ(m⊗n) = (ˡm)⊗(ˡn)
    let mut perms: Vec<Vec<El>> = Vec::with_capacity(l_grp.order() as usize);
    for l in l_grp.elements() {
        let gens: Vec<El> = (0..m_grp.order())
            .flat_map(|m| {
                (0..n_grp.order()).map(move |n| (m, n))
            })
            .map(|(m, n)| {
                pure[gen_index(
                    pair,
                    pair.mu.action().act(l, m),
                    pair.nu.action().act(l, n),
                )]
            })
            .collect();
        if let Err(relator) = enumerated.relators_hold_under(&group, &gens) {
            return Err(TensorError::StructureMapIllDefined {
                relator,
                context: format!("action of base element {l}"),
            });
        }
        perms.push(enumerated.extend_generator_map(&group, &gens));
    }
    let l_action = make_action(&l_grp, &group, perms)?;

    Ok(TensorGroup {
        pair: pair.clone(),
        group,
        pure,
        pi_m,
        pi_n,
        lambda,
        l_action,
        enumerated,
    })
}

/// A morphism of crossed modules `(M → L) → (M' → L')`: a square that
/// commutes with the boundaries and intertwines the actions.
#[derive(Debug, Clone)]
pub struct CrossedModuleMorphism {
    pub from: CrossedModule,
    pub to: CrossedModule,
    pub on_kernel: GroupHom,
    pub on_base: GroupHom,
}

impl CrossedModuleMorphism {
    pub fn new(
        from: CrossedModule,
        to: CrossedModule,
        on_kernel: GroupHom,
        on_base: GroupHom,
    ) -> Result<CrossedModuleMorphism, TensorError> {
        if on_kernel.domain() != from.kernel()
            || on_kernel.codomain() != to.kernel()
            || on_base.domain() != from.base()
            || on_base.codomain() != to.base()
        {
            return Err(TensorError::SquareMismatch(
                "morphism legs do not join the crossed modules".into(),
            ));
        }
        for x in from.kernel().elements() {
            if to.boundary().apply(on_kernel.apply(x)) != on_base.apply(from.boundary().apply(x)) {
                return Err(TensorError::SquareMismatch(format!(
                    "boundary square fails at kernel element {x}"
                )));
            }
        }
        for l in from.base().elements() {
            for x in from.kernel().elements() {
                if on_kernel.apply(from.action().act(l, x))
                    != to.action().act(on_base.apply(l), on_kernel.apply(x))
                {
                    return Err(TensorError::SquareMismatch(format!(
                        "equivariance fails at (l={l}, x={x})"
                    )));
                }
            }
        }
        Ok(CrossedModuleMorphism {
            from,
            to,
            on_kernel,
            on_base,
        })
    }
}

/// `f ⊗ g`: the unique homomorphism sending `pure(m,n)` to
/// `pure'(f(m), g(n))`; requires `f` and `g` to share the base map.
pub fn tensor_of_morphisms(
    f: &CrossedModuleMorphism,
    g: &CrossedModuleMorphism,
    from: &TensorGroup,
    to: &TensorGroup,
) -> Result<GroupHom, TensorError> {
    if f.on_base != g.on_base {
        return Err(TensorError::SquareMismatch(
            "the two morphisms have different base maps".into(),
        ));
    }
    if f.from != from.pair.mu || g.from != from.pair.nu || f.to != to.pair.mu || g.to != to.pair.nu
    {
        return Err(TensorError::SquareMismatch(
            "morphisms do not join the two tensor pairs".into(),
        ));
    }
    let images: Vec<El> = (0..from.pair.m().order())
        .flat_map(|m| (0..from.pair.n().order()).map(move |n| (m, n)))
        .map(|(m, n)| to.pure(f.on_kernel.apply(m), g.on_kernel.apply(n)))
        .collect();
    from.hom_from_pure_images(&to.group, &images)
}

/// The canonical comparison `M⊗N → N⊗M`, `pure(m,n) ↦ pure(n,m)⁻¹`.
pub fn symmetry_isomorphism(
    t_mn: &TensorGroup,
    t_nm: &TensorGroup,
) -> Result<GroupHom, TensorError> {
    if t_nm.pair != t_mn.pair.swapped() {
        return Err(TensorError::SquareMismatch(
            "second tensor is not over the swapped pair".into(),
        ));
    }
    let images: Vec<El> = (0..t_mn.pair.m().order())
        .flat_map(|m| (0..t_mn.pair.n().order()).map(move |n| (m, n)))
        .map(|(m, n)| t_nm.group.inv(t_nm.pure(n, m)))
        .collect();
    let hom = t_mn.hom_from_pure_images(&t_nm.group, &images)?;
    if !hom.is_bijective() {
        return Err(TensorError::SquareMismatch(
            "symmetry comparison is not bijective".into(),
        ));
    }
    Ok(hom)
}

/// The unique morphism `φ: M⊗N → P` into a crossed square over the same
/// crossed modules, determined by `φ(pure(m,n)) = h(m,n)`.
pub fn universal_morphism(
    t: &TensorGroup,
    cs: &CrossedSquare,
) -> Result<GroupHom, TensorError> {
    if &cs.m != t.pair.m() || &cs.n != t.pair.n() || &cs.l != t.pair.l() {
        return Err(TensorError::SquareMismatch("corner groups differ".into()));
    }
    if &cs.mu != t.pair.mu.boundary() || &cs.nu != t.pair.nu.boundary() {
        return Err(TensorError::SquareMismatch("boundary maps differ".into()));
    }
    if &cs.l_on_m != t.pair.mu.action() || &cs.l_on_n != t.pair.nu.action() {
        return Err(TensorError::SquareMismatch("base actions differ".into()));
    }
    let images: Vec<El> = (0..cs.m.order())
        .flat_map(|m| (0..cs.n.order()).map(move |n| (m, n)))
        .map(|(m, n)| cs.pairing(m, n))
        .collect();
    let phi = t.hom_from_pure_images(&cs.p, &images)?;
    for x in t.group.elements() {
        if cs.p_m.apply(phi.apply(x)) != t.pi_m.apply(x)
            || cs.p_n.apply(phi.apply(x)) != t.pi_n.apply(x)
        {
            return Err(TensorError::SquareMismatch(format!(
                "projections do not factor through φ at element {x}"
            )));
        }
    }
    Ok(phi)
}

/// Report for the image law: the image of `h: M⊗N → M∧N` against the
/// Higgins commutator `[M, N]`, both as subgroups of `L`.
#[derive(Debug, Clone)]
pub struct HImageReport {
    pub tensor_order: u32,
    pub image_in_l: Subgroup,
    pub commutator: Subgroup,
    pub equal: bool,
}

/// For normal subgroups `M, N ⊴ L`: compute the tensor of the inclusion
/// crossed modules, map it into the intersection square, and compare the
/// image of the pairing with `[M, N]`.
pub fn h_image_equals_commutator(
    l: &Group,
    m: &Subgroup,
    n: &Subgroup,
    max_cosets: usize,
) -> Result<HImageReport, TensorError> {
    let mu = CrossedModule::inclusion(l, m)?;
    let nu = CrossedModule::inclusion(l, n)?;
    let pair = CompatiblePair::new(mu, nu)?;
    let t = tensor_group(&pair, max_cosets)?;
    let cs = intersection_square(l, m, n)?;
    let phi = universal_morphism(&t, &cs)?;
    let p_in_l = cs.p_m.then(&cs.mu)?;
    let image_elements: Vec<El> = phi
        .image_subgroup()
        .elements()
        .iter()
        .map(|&x| p_in_l.apply(x))
        .collect();
    let image_in_l = crate::group::subgroup_closure(l, &image_elements)?;
    let commutator = higgins_commutator(m, n)?;
    let equal = image_in_l == commutator;
    Ok(HImageReport {
        tensor_order: t.group.order(),
        image_in_l,
        commutator,
        equal,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::action::GroupAction;
    use crate::commutator::z_tensor_abelian;
    use crate::group::{
        find_isomorphism, standard_group, subgroup_closure, StandardGroup,
    };
    use crate::square::verify_crossed_square;

    fn trivial() -> Group {
        standard_group(&StandardGroup::Trivial).unwrap()
    }

    fn c2() -> Group {
        standard_group(&StandardGroup::Cyclic(2)).unwrap()
    }

    pub(crate) fn abelian_pair(m: &Group, n: &Group) -> CompatiblePair {
        let l = trivial();
        let mu = CrossedModule::zero(m, &l).unwrap();
        let nu = CrossedModule::zero(n, &l).unwrap();
        CompatiblePair::new(mu, nu).unwrap()
    }

    pub(crate) fn a3_pair() -> (Group, CompatiblePair) {
        let s3 = standard_group(&StandardGroup::Symmetric(3)).unwrap();
        let t = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = subgroup_closure(&s3, &[t]).unwrap();
        let mu = CrossedModule::inclusion(&s3, &a3).unwrap();
        let pair = CompatiblePair::new(mu.clone(), mu).unwrap();
        (s3, pair)
    }

    #[test]
    fn presentation_shape() {
        // both kernels trivial
        let p = tensor_presentation(&abelian_pair(&trivial(), &c2()));
        assert_eq!(p.ngens, 2);
        // generator count 3·3 for the A3 pair
        let (_, pair) = a3_pair();
        let p = tensor_presentation(&pair);
        assert_eq!(p.ngens, 9);
        // c2 ⊗ c2 над trivial base: 4 generators
        let p = tensor_presentation(&abelian_pair(&c2(), &c2()));
        assert_eq!(p.ngens, 4);
        p.validate().unwrap();
    }

    #[test]
    fn trivial_tensor_vanishes() {
        for n in [c2(), standard_group(&StandardGroup::Klein).unwrap()] {
            let pair = abelian_pair(&trivial(), &n);
            let t = tensor_group(&pair, 10_000).unwrap();
            assert_eq!(t.group.order(), 1);
        }
    }

    #[test]
    fn c2_tensor_c2() {
        let pair = abelian_pair(&c2(), &c2());
        let t = tensor_group(&pair, 10_000).unwrap();
        assert_eq!(t.group.order(), 2);
        let oracle = z_tensor_abelian(&c2(), &c2(), 20160).unwrap();
        assert!(find_isomorphism(&t.group, &oracle).unwrap().is_some());
        // the lone non-pure relation: pure(1,1) is the generator
        assert_ne!(t.pure(1, 1), t.group.identity());
        assert_eq!(t.pure(0, 1), t.group.identity());
        assert_eq!(t.pure(1, 0), t.group.identity());
    }

    #[test]
    fn a3_tensor_is_cyclic3() {
        let (_, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        assert_eq!(t.group.order(), 3);
        let c3 = standard_group(&StandardGroup::Cyclic(3)).unwrap();
        assert!(find_isomorphism(&t.group, &c3).unwrap().is_some());
        // mutual actions trivial: π_M is the zero map
        assert!(t.pi_m.image_subgroup().is_trivial());
    }

    #[test]
    fn projections_satisfy_the_defining_identities() {
        let (_, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let (m, n) = (pair.m().clone(), pair.n().clone());
        for a in m.elements() {
            for b in n.elements() {
                let e = t.pure(a, b);
                assert_eq!(
                    t.pi_m.apply(e),
                    m.mul(a, m.inv(pair.n_on_m.act(b, a)))
                );
                assert_eq!(
                    t.pi_n.apply(e),
                    n.mul(pair.m_on_n.act(a, b), n.inv(b))
                );
            }
        }
    }

    #[test]
    fn own_square_passes_verification() {
        let (_, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let cs = t.own_square();
        assert!(verify_crossed_square(&cs).all_pass());
        t.as_crossed_module().unwrap();
    }

    #[test]
    fn tensor_of_identity_morphisms() {
        let (_, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let id_m = CrossedModuleMorphism::new(
            pair.mu.clone(),
            pair.mu.clone(),
            GroupHom::identity(pair.m()),
            GroupHom::identity(pair.l()),
        )
        .unwrap();
        let id_n = CrossedModuleMorphism::new(
            pair.nu.clone(),
            pair.nu.clone(),
            GroupHom::identity(pair.n()),
            GroupHom::identity(pair.l()),
        )
        .unwrap();
        let h = tensor_of_morphisms(&id_m, &id_n, &t, &t).unwrap();
        assert_eq!(h, GroupHom::identity(&t.group));
    }

    #[test]
    fn tensor_of_morphisms_functorial() {
        // f = inversion of A3 over conjugation by a transposition on S3
        let (s3, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let a3_grp = pair.m().clone();
        let transposition = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        // conjugation by the transposition is an automorphism of S3 fixing A3
        let m_map: Vec<El> = a3_grp
            .elements()
            .map(|x| {
                let in_s3 = pair.mu.boundary().apply(x);
                let conj = s3.conj(transposition, in_s3);
                pair.mu
                    .boundary()
                    .image_map()
                    .iter()
                    .position(|&v| v == conj)
                    .unwrap() as El
            })
            .collect();
        let l_map: Vec<El> = s3.elements().map(|x| s3.conj(transposition, x)).collect();
        let f_kernel = GroupHom::new(&a3_grp, &a3_grp, m_map).unwrap();
        let f_base = GroupHom::new(&s3, &s3, l_map).unwrap();
        let f = CrossedModuleMorphism::new(
            pair.mu.clone(),
            pair.mu.clone(),
            f_kernel.clone(),
            f_base.clone(),
        )
        .unwrap();
        let fg = tensor_of_morphisms(&f, &f, &t, &t).unwrap();
        assert!(fg.is_bijective());
        // functoriality: (f∘f) ⊗ (f∘f) = (f⊗f)∘(f⊗f); conjugating twice is the identity
        let f2_kernel = f_kernel.then(&f_kernel).unwrap();
        let f2_base = f_base.then(&f_base).unwrap();
        let f2 = CrossedModuleMorphism::new(pair.mu.clone(), pair.mu.clone(), f2_kernel, f2_base)
            .unwrap();
        let fg2 = tensor_of_morphisms(&f2, &f2, &t, &t).unwrap();
        assert_eq!(fg.then(&fg).unwrap(), fg2);
        assert_eq!(fg2, GroupHom::identity(&t.group));
    }

    #[test]
    fn symmetry() {
        let (_, pair) = a3_pair();
        let t_mn = tensor_group(&pair, 10_000).unwrap();
        let t_nm = tensor_group(&pair.swapped(), 10_000).unwrap();
        symmetry_isomorphism(&t_mn, &t_nm).unwrap();
        // abelian example with distinct factors
        let c4 = standard_group(&StandardGroup::Cyclic(4)).unwrap();
        let c6 = standard_group(&StandardGroup::Cyclic(6)).unwrap();
        let pair = abelian_pair(&c4, &c6);
        let t_mn = tensor_group(&pair, 10_000).unwrap();
        let t_nm = tensor_group(&pair.swapped(), 10_000).unwrap();
        assert_eq!(t_mn.group.order(), 2);
        symmetry_isomorphism(&t_mn, &t_nm).unwrap();
    }

    #[test]
    fn universal_morphism_into_own_square_is_identity() {
        let (_, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let phi = universal_morphism(&t, &t.own_square()).unwrap();
        assert_eq!(phi, GroupHom::identity(&t.group));
    }

    #[test]
    fn universal_morphism_into_intersection() {
        // A3 case: φ is the zero map
        let (s3, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let three_cycle = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = subgroup_closure(&s3, &[three_cycle]).unwrap();
        let cs = intersection_square(&s3, &a3, &a3).unwrap();
        let phi = universal_morphism(&t, &cs).unwrap();
        assert!(phi.image_subgroup().is_trivial());
    }

    #[test]
    fn h_image_reports() {
        // [A3, A3] is trivial
        let (s3, _) = a3_pair();
        let three_cycle = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = subgroup_closure(&s3, &[three_cycle]).unwrap();
        let rep = h_image_equals_commutator(&s3, &a3, &a3, 10_000).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.image_in_l.order(), 1);

        // dihedral case: image has order 2
        let d4 = standard_group(&StandardGroup::Dihedral(4)).unwrap();
        let m = subgroup_closure(&d4, &[1]).unwrap();
        let n = subgroup_closure(&d4, &[2, 4]).unwrap();
        let rep = h_image_equals_commutator(&d4, &m, &n, 10_000).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.image_in_l.order(), 2);

        // quaternion case: [Q8, Q8] = center of order 2
        let q8 = standard_group(&StandardGroup::Quaternion8).unwrap();
        let full = crate::group::Subgroup::full(&q8);
        let rep = h_image_equals_commutator(&q8, &full, &full, 100_000).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.image_in_l.order(), 2);
    }

    #[test]
    fn full_tensor_square_of_s3() {
        // M = N = L = S3 with the identity crossed module: the image of the
        // pairing in the intersection square is the derived subgroup
        let s3 = standard_group(&StandardGroup::Symmetric(3)).unwrap();
        let full = crate::group::Subgroup::full(&s3);
        let rep = h_image_equals_commutator(&s3, &full, &full, 100_000).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.image_in_l.order(), 3);
        let mu = CrossedModule::identity(&s3);
        let pair = CompatiblePair::new(mu.clone(), mu).unwrap();
        let t = tensor_group(&pair, 100_000).unwrap();
        assert_eq!(t.group.order(), rep.tensor_order);
        assert!(crate::square::verify_crossed_square(&t.own_square()).all_pass());
        // the diagonal lands on the derived subgroup
        assert_eq!(t.lambda.image_subgroup().order(), 3);
    }

    #[test]
    fn ill_defined_pure_images_are_rejected() {
        let pair = abelian_pair(&c2(), &c2());
        let t = tensor_group(&pair, 10_000).unwrap();
        // send the only nontrivial generator somewhere inconsistent
        let c4 = standard_group(&StandardGroup::Cyclic(4)).unwrap();
        let bad = vec![0, 0, 0, 1]; // pure(1,1) ↦ element of order 4
        assert!(matches!(
            t.hom_from_pure_images(&c4, &bad),
            Err(TensorError::NotWellDefined { .. })
        ));
    }

    #[test]
    fn l_action_is_validated_and_diagonal() {
        let (_, pair) = a3_pair();
        let t = tensor_group(&pair, 10_000).unwrap();
        let l = pair.l().clone();
        for la in l.elements() {
            for m in pair.m().elements() {
                for n in pair.n().elements() {
                    assert_eq!(
                        t.l_action.act(la, t.pure(m, n)),
                        t.pure(pair.mu.action().act(la, m), pair.nu.action().act(la, n))
                    );
                }
            }
        }
        let _ = GroupAction::trivial(&l, &t.group);
    }
}
