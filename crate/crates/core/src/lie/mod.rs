//! Finite-dimensional Lie algebras over the rationals, given by structure
//! constants and handled with exact arithmetic throughout: actions by
//! derivations, crossed modules, and the tensor product by linear algebra.

mod la;
mod tensor;

pub use la::{mat_is_zero, parse_rat, rat_to_string, Mat, Rat, RowSpace};
pub use tensor::{
    lie_tensor, lie_symmetry_check, universal_lie_morphism, verify_lie_crossed_square,
    verify_lie_pairing, LieCrossedSquare, LiePairing, LieTensor, LieXsqReport,
};

use std::sync::Arc;

use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("structure constants not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("map of basis element {l} is not a derivation; witness pair ({i}, {j})")]
    NotDerivation { l: usize, i: usize, j: usize },
    #[error("action is not a homomorphism into derivations at ({0}, {1})")]
    NotLieHom(usize, usize),
    #[error("equivariance fails at basis pair ({0}, {1})")]
    EquivarianceFailure(usize, usize),
    #[error("Peiffer identity fails at basis pair ({0}, {1})")]
    PeifferFailure(usize, usize),
    #[error("bracket does not descend: relation row {row} against pure tensor {pure}")]
    BracketNotDescending { row: usize, pure: usize },
    #[error("{map} does not descend to the quotient: relation row {row}")]
    StructureMapNotDescending { map: &'static str, row: usize },
    #[error("pairing does not kill relation row {row}")]
    NotWellDefined { row: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cannot parse rational: {0}")]
    Parse(String),
}

/// A Lie algebra on basis `b_0 … b_{dim-1}`, with `bracket[i][j]` the
/// coefficient vector of `[b_i, b_j]`. Antisymmetry and the Jacobi identity
/// are validated on construction, exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    bracket: Vec<Vec<Vec<Rat>>>,
}

pub type Lie = Arc<LieAlgebra>;

impl LieAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &Vec<Vec<Vec<Rat>>> {
        &self.bracket
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let coeff = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.bracket[i][j][k].is_zero() {
                        out[k] += &coeff * &self.bracket[i][j][k];
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        la::unit(self.dim, i)
    }

    pub fn abelian(dim: usize) -> Lie {
        let z = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        Arc::new(LieAlgebra { dim, bracket: z })
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket
            .iter()
            .flatten()
            .flatten()
            .all(|c| c.is_zero())
    }
}

/// Validate structure constants into a Lie algebra.
pub fn build_lie_algebra(constants: Vec<Vec<Vec<Rat>>>) -> Result<Lie, LieError> {
    let dim = constants.len();
    for (i, row) in constants.iter().enumerate() {
        if row.len() != dim {
            return Err(LieError::ShapeMismatch(format!(
                "row {i} has length {}",
                row.len()
            )));
        }
        for (j, v) in row.iter().enumerate() {
            if v.len() != dim {
                return Err(LieError::ShapeMismatch(format!(
                    "entry ({i}, {j}) has length {}",
                    v.len()
                )));
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                if constants[i][j][k] != -constants[j][i][k].clone() {
                    return Err(LieError::NotAntisymmetric(i, j));
                }
            }
        }
    }
    let alg = LieAlgebra {
        dim,
        bracket: constants,
    };
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                // [[bi,bj],bk] + [[bj,bk],bi] + [[bk,bi],bj] = 0
                let a = alg.bracket_vec(&alg.bracket[i][j], &alg.basis_vector(k));
                let b = alg.bracket_vec(&alg.bracket[j][k], &alg.basis_vector(i));
                let c = alg.bracket_vec(&alg.bracket[k][i], &alg.basis_vector(j));
                let sum = la::vec_add(&la::vec_add(&a, &b), &c);
                if !la::vec_is_zero(&sum) {
                    return Err(LieError::JacobiFailure(i, j, k));
                }
            }
        }
    }
    Ok(Arc::new(alg))
}

/// `sl₂` on the basis `(e, f, h)`: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
pub fn sl2() -> Lie {
    let r = |n: i64| Rat::from_integer(n.into());
    let z = || vec![r(0), r(0), r(0)];
    let mut c = vec![vec![z(); 3]; 3];
    c[0][1] = vec![r(0), r(0), r(1)]; // [e,f] = h
    c[1][0] = vec![r(0), r(0), r(-1)];
    c[2][0] = vec![r(2), r(0), r(0)]; // [h,e] = 2e
    c[0][2] = vec![r(-2), r(0), r(0)];
    c[2][1] = vec![r(0), r(-2), r(0)]; // [h,f] = -2f
    c[1][2] = vec![r(0), r(2), r(0)];
    build_lie_algebra(c).expect("textbook structure constants")
}

/// An action of `acting` on `acted` by derivations: one matrix per basis
/// element of the acting algebra, linear in the acting argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAction {
    acting: Lie,
    acted: Lie,
    rho: Vec<Mat>,
}

/// Report of the two action laws, with basis witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieActionReport {
    /// each `rho[l]` is a derivation; witness `(l, i, j)`
    pub derivation: Result<(), (usize, usize, usize)>,
    /// `rho([l,l']) = rho(l)rho(l') − rho(l')rho(l)`; witness `(l, l')`
    pub homomorphism: Result<(), (usize, usize)>,
}

impl LieActionReport {
    pub fn all_pass(&self) -> bool {
        self.derivation.is_ok() && self.homomorphism.is_ok()
    }
}

pub fn verify_lie_action(acting: &Lie, acted: &Lie, rho: &[Mat]) -> LieActionReport {
    let dl = acting.dim();
    let dm = acted.dim();
    let mut derivation = Ok(());
    'outer: for l in 0..dl {
        for i in 0..dm {
            for j in 0..dm {
                let lhs = la::mat_vec(&rho[l], &acted.structure_constants()[i][j]);
                let a = acted.bracket_vec(&la::mat_col(&rho[l], i), &acted.basis_vector(j));
                let b = acted.bracket_vec(&acted.basis_vector(i), &la::mat_col(&rho[l], j));
                if lhs != la::vec_add(&a, &b) {
                    derivation = Err((l, i, j));
                    break 'outer;
                }
            }
        }
    }
    let mut homomorphism = Ok(());
    'hom: for l1 in 0..dl {
        for l2 in 0..dl {
            let lhs = rho_of_vector(rho, &acting.structure_constants()[l1][l2], dm);
            let rhs = la::mat_sub(
                &la::mat_mul(&rho[l1], &rho[l2]),
                &la::mat_mul(&rho[l2], &rho[l1]),
            );
            if lhs != rhs {
                homomorphism = Err((l1, l2));
                break 'hom;
            }
        }
    }
    LieActionReport {
        derivation,
        homomorphism,
    }
}

/// `rho` of a general acting vector: the linear combination of the matrices.
pub(crate) fn rho_of_vector(rho: &[Mat], x: &[Rat], dim_acted: usize) -> Mat {
    let mut out = la::mat_zero(dim_acted, dim_acted);
    for (l, coeff) in x.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for r in 0..dim_acted {
            for c in 0..dim_acted {
                if !rho[l][r][c].is_zero() {
                    out[r][c] += coeff * &rho[l][r][c];
                }
            }
        }
    }
    out
}

impl LieAction {
    pub fn new(acting: &Lie, acted: &Lie, rho: Vec<Mat>) -> Result<LieAction, LieError> {
        if rho.len() != acting.dim() {
            return Err(LieError::ShapeMismatch(format!(
                "{} matrices for acting dimension {}",
                rho.len(),
                acting.dim()
            )));
        }
        for (l, m) in rho.iter().enumerate() {
            if m.len() != acted.dim() || m.iter().any(|row| row.len() != acted.dim()) {
                return Err(LieError::ShapeMismatch(format!(
                    "matrix of basis element {l} has the wrong shape"
                )));
            }
        }
        let report = verify_lie_action(acting, acted, &rho);
        if let Err((l, i, j)) = report.derivation {
            return Err(LieError::NotDerivation { l, i, j });
        }
        if let Err((l1, l2)) = report.homomorphism {
            return Err(LieError::NotLieHom(l1, l2));
        }
        Ok(LieAction {
            acting: acting.clone(),
            acted: acted.clone(),
            rho,
        })
    }

    pub fn trivial(acting: &Lie, acted: &Lie) -> LieAction {
        LieAction {
            acting: acting.clone(),
            acted: acted.clone(),
            rho: vec![la::mat_zero(acted.dim(), acted.dim()); acting.dim()],
        }
    }

    /// Adjoint action of an algebra on itself.
    pub fn adjoint(g: &Lie) -> LieAction {
        let d = g.dim();
        let rho = (0..d)
            .map(|l| {
                let mut m = la::mat_zero(d, d);
                for (j, col) in g.structure_constants()[l].iter().enumerate() {
                    for (k, val) in col.iter().enumerate() {
                        m[k][j] = val.clone();
                    }
                }
                m
            })
            .collect();
        LieAction {
            acting: g.clone(),
            acted: g.clone(),
            rho,
        }
    }

    pub fn acting(&self) -> &Lie {
        &self.acting
    }

    pub fn acted(&self) -> &Lie {
        &self.acted
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.rho
    }

    /// Action of the acting vector `x` on the acted vector `v`.
    pub fn act(&self, x: &[Rat], v: &[Rat]) -> Vec<Rat> {
        la::mat_vec(&rho_of_vector(&self.rho, x, self.acted.dim()), v)
    }

    /// Action of the `l`-th basis element.
    pub fn act_basis(&self, l: usize, v: &[Rat]) -> Vec<Rat> {
        la::mat_vec(&self.rho[l], v)
    }
}

/// Boundary `∂: M → L` (a `dim L × dim M` matrix) with an action of `L` on
/// `M` satisfying equivariance `∂(l·m) = [l, ∂m]` and the Peiffer identity
/// `(∂m)·m' = [m, m']`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieCrossedModule {
    boundary: Mat,
    action: LieAction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieXModReport {
    pub equivariance: Result<(), (usize, usize)>,
    pub peiffer: Result<(), (usize, usize)>,
}

impl LieXModReport {
    pub fn all_pass(&self) -> bool {
        self.equivariance.is_ok() && self.peiffer.is_ok()
    }
}

pub fn verify_lie_xmod(boundary: &Mat, action: &LieAction) -> LieXModReport {
    let l_alg = action.acting();
    let m_alg = action.acted();
    let (dl, dm) = (l_alg.dim(), m_alg.dim());
    let mut equivariance = Ok(());
    'eq: for l in 0..dl {
        for i in 0..dm {
            let lhs = la::mat_vec(boundary, &action.act_basis(l, &m_alg.basis_vector(i)));
            let rhs = l_alg.bracket_vec(&l_alg.basis_vector(l), &la::mat_col(boundary, i));
            if lhs != rhs {
                equivariance = Err((l, i));
                break 'eq;
            }
        }
    }
    let mut peiffer = Ok(());
    'pf: for i in 0..dm {
        for j in 0..dm {
            let lhs = action.act(&la::mat_col(boundary, i), &m_alg.basis_vector(j));
            let rhs = &m_alg.structure_constants()[i][j];
            if &lhs != rhs {
                peiffer = Err((i, j));
                break 'pf;
            }
        }
    }
    LieXModReport {
        equivariance,
        peiffer,
    }
}

impl LieCrossedModule {
    pub fn new(boundary: Mat, action: LieAction) -> Result<LieCrossedModule, LieError> {
        let (dl, dm) = (action.acting().dim(), action.acted().dim());
        if boundary.len() != dl || boundary.iter().any(|r| r.len() != dm) {
            return Err(LieError::ShapeMismatch(format!(
                "boundary must be {dl}×{dm}"
            )));
        }
        let report = verify_lie_xmod(&boundary, &action);
        if let Err((l, i)) = report.equivariance {
            return Err(LieError::EquivarianceFailure(l, i));
        }
        if let Err((i, j)) = report.peiffer {
            return Err(LieError::PeifferFailure(i, j));
        }
        Ok(LieCrossedModule { boundary, action })
    }

    /// Identity boundary with the adjoint action.
    pub fn identity(g: &Lie) -> LieCrossedModule {
        LieCrossedModule {
            boundary: la::mat_identity(g.dim()),
            action: LieAction::adjoint(g),
        }
    }

    /// Zero boundary with the trivial action; requires the kernel abelian.
    pub fn zero(m: &Lie, l: &Lie) -> Result<LieCrossedModule, LieError> {
        LieCrossedModule::new(
            la::mat_zero(l.dim(), m.dim()),
            LieAction::trivial(l, m),
        )
    }

    pub fn boundary(&self) -> &Mat {
        &self.boundary
    }

    pub fn action(&self) -> &LieAction {
        &self.action
    }

    pub fn kernel_algebra(&self) -> &Lie {
        self.action.acted()
    }

    pub fn base_algebra(&self) -> &Lie {
        self.action.acting()
    }
}

/// Two Lie crossed modules over a common base, with the induced mutual
/// action matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePair {
    pub mu: LieCrossedModule,
    pub nu: LieCrossedModule,
}

impl LiePair {
    pub fn new(mu: LieCrossedModule, nu: LieCrossedModule) -> Result<LiePair, LieError> {
        if mu.base_algebra() != nu.base_algebra() {
            return Err(LieError::ShapeMismatch(
                "crossed modules are not over the same base".into(),
            ));
        }
        Ok(LiePair { mu, nu })
    }

    pub fn m(&self) -> &Lie {
        self.mu.kernel_algebra()
    }

    pub fn n(&self) -> &Lie {
        self.nu.kernel_algebra()
    }

    pub fn l(&self) -> &Lie {
        self.mu.base_algebra()
    }

    pub fn swapped(&self) -> LiePair {
        LiePair {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
        }
    }

    /// Matrix of the action of the `i`-th basis element of `M` on `N`.
    pub fn m_on_n(&self, i: usize) -> Mat {
        rho_of_vector(
            self.nu.action().matrices(),
            &la::mat_col(self.mu.boundary(), i),
            self.n().dim(),
        )
    }

    /// Matrix of the action of the `j`-th basis element of `N` on `M`.
    pub fn n_on_m(&self, j: usize) -> Mat {
        rho_of_vector(
            self.mu.action().matrices(),
            &la::mat_col(self.nu.boundary(), j),
            self.m().dim(),
        )
    }
}
