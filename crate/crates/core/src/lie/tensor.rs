//! The tensor product of two Lie crossed modules over a common base,
//! computed as a quotient of the ordinary tensor space by the span of the
//! defining relations, with the induced bracket and structure maps verified
//! exactly. Lie pairings classify the homomorphisms out of the tensor.

use num_traits::Zero;

use super::la::{self, Mat, Rat, RowSpace};
#[cfg(test)]
use super::LieCrossedModule;
use super::{
    build_lie_algebra, rho_of_vector, verify_lie_xmod, Lie, LieAction, LieError, LiePair,
};

/// The computed Lie tensor `M ⊗ N`.
#[derive(Debug, Clone)]
pub struct LieTensor {
    pub pair: LiePair,
    /// dimension of the quotient
    pub dim: usize,
    /// the quotient as a Lie algebra on the surviving pure-tensor basis
    pub algebra: Lie,
    /// row `idx(i,j)`: coordinates of the class of `e_i ⊗ f_j`
    pub basis_map: Vec<Vec<Rat>>,
    /// `ρ_M: T → M`, `ρ_M(m⊗n) = −ⁿm`
    pub rho_m: Mat,
    /// `ρ_N: T → N`, `ρ_N(m⊗n) = ᵐn`
    pub rho_n: Mat,
    /// `ˡ(m⊗n) = (ˡm)⊗n + m⊗(ˡn)`
    pub l_action: LieAction,
    /// span of the relation rows inside the full tensor space
    pub relations: RowSpace,
    /// the generating relation rows, for well-definedness checks
    pub relation_rows: Vec<Vec<Rat>>,
}

impl LieTensor {
    #[inline]
    pub fn pure_index(&self, i: usize, j: usize) -> usize {
        i * self.pair.n().dim() + j
    }

    /// Class of the pure tensor `e_i ⊗ f_j`.
    pub fn pure(&self, i: usize, j: usize) -> Vec<Rat> {
        self.basis_map[self.pure_index(i, j)].clone()
    }

    /// The tensor's own crossed square, with `h` the pure-tensor map.
    pub fn own_square(&self) -> LieCrossedSquare {
        let (dm, dn) = (self.pair.m().dim(), self.pair.n().dim());
        let h = (0..dm)
            .map(|i| (0..dn).map(|j| self.pure(i, j)).collect())
            .collect();
        LieCrossedSquare {
            p: self.algebra.clone(),
            m: self.pair.m().clone(),
            n: self.pair.n().clone(),
            l: self.pair.l().clone(),
            p_m: self.rho_m.clone(),
            p_n: self.rho_n.clone(),
            mu: self.pair.mu.boundary().clone(),
            nu: self.pair.nu.boundary().clone(),
            l_on_p: self.l_action.clone(),
            l_on_m: self.pair.mu.action().clone(),
            l_on_n: self.pair.nu.action().clone(),
            h,
        }
    }
}

/// Bracket of two pure tensors in the free tensor space:
/// `[E(i,j), E(k,l)] = −(^{f_j}e_i) ⊗ (^{e_k}f_l)`.
struct FreeSpace {
    dm: usize,
    dn: usize,
    /// action matrix of each basis element of M on N
    m_on_n: Vec<Mat>,
    /// action matrix of each basis element of N on M
    n_on_m: Vec<Mat>,
}

impl FreeSpace {
    fn new(pair: &LiePair) -> FreeSpace {
        let (dm, dn) = (pair.m().dim(), pair.n().dim());
        FreeSpace {
            dm,
            dn,
            m_on_n: (0..dm).map(|i| pair.m_on_n(i)).collect(),
            n_on_m: (0..dn).map(|j| pair.n_on_m(j)).collect(),
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.dn + j
    }

    fn dim(&self) -> usize {
        self.dm * self.dn
    }

    fn bracket_pure(&self, i: usize, j: usize, k: usize, l: usize) -> Vec<Rat> {
        let u = la::mat_col(&self.n_on_m[j], i); // ^{f_j} e_i
        let v = la::mat_col(&self.m_on_n[k], l); // ^{e_k} f_l
        let mut out = vec![Rat::zero(); self.dim()];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if !vb.is_zero() {
                    out[self.idx(a, b)] = -(ua * vb);
                }
            }
        }
        out
    }

    /// Bilinear extension of the pure bracket.
    fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim()];
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            for (q, yq) in y.iter().enumerate() {
                if yq.is_zero() {
                    continue;
                }
                let b = self.bracket_pure(p / self.dn, p % self.dn, q / self.dn, q % self.dn);
                let c = xp * yq;
                for (o, v) in out.iter_mut().zip(&b) {
                    if !v.is_zero() {
                        *o += &c * v;
                    }
                }
            }
        }
        out
    }
}

/// Compute the Lie tensor of a pair: quotient the tensor space by the span
/// of the defining relations, then induce and verify the bracket and the
/// structure maps.
pub fn lie_tensor(pair: &LiePair) -> Result<LieTensor, LieError> {
    let (m, n, l) = (pair.m().clone(), pair.n().clone(), pair.l().clone());
    let (dm, dn) = (m.dim(), n.dim());
    let free = FreeSpace::new(pair);
    let d = free.dim();

    // relation rows: [m,m']⊗n = m⊗(ᵐ'n) − m'⊗(ᵐn)
    //                m⊗[n,n'] = (ⁿ'm)⊗n − (ⁿm)⊗n'
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..dm {
        for i2 in 0..dm {
            for k in 0..dn {
                let mut row = vec![Rat::zero(); d];
                for (a, c) in m.structure_constants()[i][i2].iter().enumerate() {
                    if !c.is_zero() {
                        row[free.idx(a, k)] += c;
                    }
                }
                for (b, c) in la::mat_col(&free.m_on_n[i2], k).iter().enumerate() {
                    if !c.is_zero() {
                        row[free.idx(i, b)] -= c;
                    }
                }
                for (b, c) in la::mat_col(&free.m_on_n[i], k).iter().enumerate() {
                    if !c.is_zero() {
                        row[free.idx(i2, b)] += c;
                    }
                }
                if !la::vec_is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    for i in 0..dm {
        for k in 0..dn {
            for k2 in 0..dn {
                let mut row = vec![Rat::zero(); d];
                for (b, c) in n.structure_constants()[k][k2].iter().enumerate() {
                    if !c.is_zero() {
                        row[free.idx(i, b)] += c;
                    }
                }
                for (a, c) in la::mat_col(&free.n_on_m[k2], i).iter().enumerate() {
                    if !c.is_zero() {
                        row[free.idx(a, k)] -= c;
                    }
                }
                for (a, c) in la::mat_col(&free.n_on_m[k], i).iter().enumerate() {
                    if !c.is_zero() {
                        row[free.idx(a, k2)] += c;
                    }
                }
                if !la::vec_is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let mut relations = RowSpace::new(d);
    for row in &rows {
        relations.insert(row);
    }
    let quotient_basis = relations.free_columns();
    let dim = quotient_basis.len();

    // the bracket must descend: relation rows bracket into the relation span
    for (ri, row) in rows.iter().enumerate() {
        for p in 0..d {
            let pure = la::unit(d, p);
            if !relations.contains(&free.bracket(row, &pure)) {
                return Err(LieError::BracketNotDescending { row: ri, pure: p });
            }
            if !relations.contains(&free.bracket(&pure, row)) {
                return Err(LieError::BracketNotDescending { row: ri, pure: p });
            }
        }
    }

    // structure constants on the quotient basis (each basis class is a pure
    // tensor, namely a free column)
    let reps: Vec<Vec<Rat>> = quotient_basis.iter().map(|&c| la::unit(d, c)).collect();
    let mut constants = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for (u, ru) in reps.iter().enumerate() {
        for (v, rv) in reps.iter().enumerate() {
            constants[u][v] = relations.quotient_coordinates(&free.bracket(ru, rv));
        }
    }
    let algebra = build_lie_algebra(constants)?;

    let basis_map: Vec<Vec<Rat>> = (0..d)
        .map(|p| relations.quotient_coordinates(&la::unit(d, p)))
        .collect();

    // consistency of the induced bracket with the free one on pure tensors
    for p in 0..d {
        for q in 0..d {
            let through_quotient = algebra.bracket_vec(&basis_map[p], &basis_map[q]);
            let reduced = relations.quotient_coordinates(&free.bracket(
                &la::unit(d, p),
                &la::unit(d, q),
            ));
            if through_quotient != reduced {
                return Err(LieError::BracketNotDescending { row: p, pure: q });
            }
        }
    }

    // ρ_M(E(i,j)) = −(^{f_j}e_i), ρ_N(E(i,j)) = ^{e_i}f_j on the free space
    let rho_m_free: Vec<Vec<Rat>> = (0..d)
        .map(|p| la::vec_neg(&la::mat_col(&free.n_on_m[p % dn], p / dn)))
        .collect();
    let rho_n_free: Vec<Vec<Rat>> = (0..d)
        .map(|p| la::mat_col(&free.m_on_n[p / dn], p % dn))
        .collect();
    let descend = |cols: &[Vec<Rat>], out_dim: usize, name: &'static str| {
        for (ri, row) in rows.iter().enumerate() {
            let mut image = vec![Rat::zero(); out_dim];
            for (p, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, v) in image.iter_mut().zip(&cols[p]) {
                    *o += c * v;
                }
            }
            if !la::vec_is_zero(&image) {
                return Err(LieError::StructureMapNotDescending { map: name, row: ri });
            }
        }
        Ok(())
    };
    descend(&rho_m_free, dm, "projection to M")?;
    descend(&rho_n_free, dn, "projection to N")?;
    let to_matrix = |cols_free: &[Vec<Rat>], out_dim: usize| -> Mat {
        let mut mat = la::mat_zero(out_dim, dim);
        for (u, &col) in quotient_basis.iter().enumerate() {
            for r in 0..out_dim {
                mat[r][u] = cols_free[col][r].clone();
            }
        }
        mat
    };
    let rho_m = to_matrix(&rho_m_free, dm);
    let rho_n = to_matrix(&rho_n_free, dn);

    // λ = μ∘ρ_M = ν∘ρ_N
    let lambda_m = la::mat_mul(pair.mu.boundary(), &rho_m);
    let lambda_n = la::mat_mul(pair.nu.boundary(), &rho_n);
    if lambda_m != lambda_n {
        return Err(LieError::StructureMapNotDescending {
            map: "diagonal to L",
            row: 0,
        });
    }

    // ˡ(m⊗n) = (ˡm)⊗n + m⊗(ˡn)
    let mut rho_t: Vec<Mat> = Vec::with_capacity(l.dim());
    for li in 0..l.dim() {
        let act_m = &pair.mu.action().matrices()[li];
        let act_n = &pair.nu.action().matrices()[li];
        let act_free: Vec<Vec<Rat>> = (0..d)
            .map(|p| {
                let (i, j) = (p / dn, p % dn);
                let mut out = vec![Rat::zero(); d];
                for (a, c) in la::mat_col(act_m, i).iter().enumerate() {
                    if !c.is_zero() {
                        out[free.idx(a, j)] += c;
                    }
                }
                for (b, c) in la::mat_col(act_n, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[free.idx(i, b)] += c;
                    }
                }
                out
            })
            .collect();
        for (ri, row) in rows.iter().enumerate() {
            let mut image = vec![Rat::zero(); d];
            for (p, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (o, v) in image.iter_mut().zip(&act_free[p]) {
                    *o += c * v;
                }
            }
            if !relations.contains(&image) {
                return Err(LieError::StructureMapNotDescending {
                    map: "base action",
                    row: ri,
                });
            }
        }
        let mut mat = la::mat_zero(dim, dim);
        for (u, &col) in quotient_basis.iter().enumerate() {
            let coords = relations.quotient_coordinates(&act_free[col]);
            for r in 0..dim {
                mat[r][u] = coords[r].clone();
            }
        }
        rho_t.push(mat);
    }
    let l_action = LieAction::new(&l, &algebra, rho_t)?;

    Ok(LieTensor {
        pair: pair.clone(),
        dim,
        algebra,
        basis_map,
        rho_m,
        rho_n,
        l_action,
        relations,
        relation_rows: rows,
    })
}

/// A bilinear map `M × N → P` given by its values on basis pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePairing {
    pub p: Lie,
    /// `values[i][j]` is the vector `h(e_i, f_j)` in `P`
    pub values: Vec<Vec<Vec<Rat>>>,
}

impl LiePairing {
    /// Bilinear extension.
    pub fn apply(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.p.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, v) in out.iter_mut().zip(&self.values[i][j]) {
                    if !v.is_zero() {
                        *o += &c * v;
                    }
                }
            }
        }
        out
    }

    /// Value on the full tensor space: a vector of `V`-coordinates.
    fn apply_free(&self, pair: &LiePair, v: &[Rat]) -> Vec<Rat> {
        let dn = pair.n().dim();
        let mut out = vec![Rat::zero(); self.p.dim()];
        for (p, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, w) in out.iter_mut().zip(&self.values[p / dn][p % dn]) {
                if !w.is_zero() {
                    *o += c * w;
                }
            }
        }
        out
    }
}

/// Report for the three Lie-pairing axioms, with basis witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePairingReport {
    /// `h([m,m'],n) = h(m, ᵐ'n) − h(m', ᵐn)`; witness `(i, i', k)`
    pub axiom1: Result<(), (usize, usize, usize)>,
    /// `h(m,[n,n']) = h(ⁿ'm, n) − h(ⁿm, n')`; witness `(i, k, k')`
    pub axiom2: Result<(), (usize, usize, usize)>,
    /// `h(ⁿm, ᵐ'n') = −[h(m,n), h(m',n')]`; witness `(i, k, i', k')`
    pub axiom3: Result<(), (usize, usize, usize, usize)>,
}

impl LiePairingReport {
    pub fn all_pass(&self) -> bool {
        self.axiom1.is_ok() && self.axiom2.is_ok() && self.axiom3.is_ok()
    }
}

/// Check the Lie-pairing axioms on basis elements; each side is multilinear
/// in its free arguments, so basis instances suffice.
pub fn verify_lie_pairing(pair: &LiePair, h: &LiePairing) -> LiePairingReport {
    let (m, n) = (pair.m().clone(), pair.n().clone());
    let (dm, dn) = (m.dim(), n.dim());
    let free = FreeSpace::new(pair);
    let mut axiom1 = Ok(());
    'a1: for i in 0..dm {
        for i2 in 0..dm {
            for k in 0..dn {
                let lhs = h.apply(&m.structure_constants()[i][i2], &n.basis_vector(k));
                let a = h.apply(&m.basis_vector(i), &la::mat_col(&free.m_on_n[i2], k));
                let b = h.apply(&m.basis_vector(i2), &la::mat_col(&free.m_on_n[i], k));
                if lhs != la::vec_sub(&a, &b) {
                    axiom1 = Err((i, i2, k));
                    break 'a1;
                }
            }
        }
    }
    let mut axiom2 = Ok(());
    'a2: for i in 0..dm {
        for k in 0..dn {
            for k2 in 0..dn {
                let lhs = h.apply(&m.basis_vector(i), &n.structure_constants()[k][k2]);
                let a = h.apply(&la::mat_col(&free.n_on_m[k2], i), &n.basis_vector(k));
                let b = h.apply(&la::mat_col(&free.n_on_m[k], i), &n.basis_vector(k2));
                if lhs != la::vec_sub(&a, &b) {
                    axiom2 = Err((i, k, k2));
                    break 'a2;
                }
            }
        }
    }
    let mut axiom3 = Ok(());
    'a3: for i in 0..dm {
        for k in 0..dn {
            for i2 in 0..dm {
                for k2 in 0..dn {
                    let lhs = h.apply(
                        &la::mat_col(&free.n_on_m[k], i),
                        &la::mat_col(&free.m_on_n[i2], k2),
                    );
                    let rhs = la::vec_neg(&h.p.bracket_vec(
                        &h.values[i][k],
                        &h.values[i2][k2],
                    ));
                    if lhs != rhs {
                        axiom3 = Err((i, k, i2, k2));
                        break 'a3;
                    }
                }
            }
        }
    }
    LiePairingReport {
        axiom1,
        axiom2,
        axiom3,
    }
}

/// The unique Lie homomorphism `φ: T → P` with `φ(class of e_i⊗f_j) =
/// h(e_i, f_j)`; well-defined exactly when `h` kills the relation span.
pub fn universal_lie_morphism(t: &LieTensor, h: &LiePairing) -> Result<Mat, LieError> {
    for (ri, row) in t.relation_rows.iter().enumerate() {
        if !la::vec_is_zero(&h.apply_free(&t.pair, row)) {
            return Err(LieError::NotWellDefined { row: ri });
        }
    }
    let dp = h.p.dim();
    let mut phi = la::mat_zero(dp, t.dim);
    for (u, &col) in t.relations.free_columns().iter().enumerate() {
        let dn = t.pair.n().dim();
        let value = &h.values[col / dn][col % dn];
        for r in 0..dp {
            phi[r][u] = value[r].clone();
        }
    }
    // φ is a Lie homomorphism
    for u in 0..t.dim {
        for v in 0..t.dim {
            let lhs = la::mat_vec(&phi, &t.algebra.structure_constants()[u][v]);
            let rhs = h
                .p
                .bracket_vec(&la::mat_col(&phi, u), &la::mat_col(&phi, v));
            if lhs != rhs {
                return Err(LieError::NotWellDefined { row: u });
            }
        }
    }
    // φ composed with the pure map is h
    let dn = t.pair.n().dim();
    for i in 0..t.pair.m().dim() {
        for j in 0..dn {
            if la::mat_vec(&phi, &t.basis_map[t.pure_index(i, j)]) != h.values[i][j] {
                return Err(LieError::NotWellDefined {
                    row: t.pure_index(i, j),
                });
            }
        }
    }
    Ok(phi)
}

/// A crossed square of Lie algebras, with a bilinear pairing table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieCrossedSquare {
    pub p: Lie,
    pub m: Lie,
    pub n: Lie,
    pub l: Lie,
    /// `dim P → dim M` etc., all matrices
    pub p_m: Mat,
    pub p_n: Mat,
    pub mu: Mat,
    pub nu: Mat,
    pub l_on_p: LieAction,
    pub l_on_m: LieAction,
    pub l_on_n: LieAction,
    /// `h[i][j]` is the vector `h(e_i, f_j)` in `P`
    pub h: Vec<Vec<Vec<Rat>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieXsqReport {
    pub x0: Result<(), String>,
    pub x1: Result<(), String>,
    pub x2: Result<(), String>,
    pub x3: Result<(), String>,
    pub x4: Result<(), String>,
}

impl LieXsqReport {
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

/// Exhaustive basis-level check of the Lie crossed-square axioms:
///
/// - X.0 `h([m,m'],n) = ᵐh(m',n) − ᵐ'h(m,n)` and
///   `h(m,[n,n']) = ⁿh(m,n') − ⁿ'h(m,n)` (bilinearity is structural)
/// - X.1 `p_M`, `p_N` equivariant; `μ`, `ν`, `λ` crossed modules
/// - X.2 `p_M(h(m,n)) = −ⁿm` and `p_N(h(m,n)) = ᵐn`
/// - X.3 `h(p_M(p),n) = −ⁿp` and `h(m,p_N(p)) = ᵐp`
/// - X.4 `ˡh(m,n) = h(ˡm,n) + h(m,ˡn)`
pub fn verify_lie_crossed_square(cs: &LieCrossedSquare) -> LieXsqReport {
    let (dp, dm, dn, dl) = (cs.p.dim(), cs.m.dim(), cs.n.dim(), cs.l.dim());
    let h = LiePairing {
        p: cs.p.clone(),
        values: cs.h.clone(),
    };
    // actions of M and N on P, N, M through the boundaries
    let m_on_p = |i: usize| {
        rho_of_vector(cs.l_on_p.matrices(), &la::mat_col(&cs.mu, i), dp)
    };
    let n_on_p = |j: usize| {
        rho_of_vector(cs.l_on_p.matrices(), &la::mat_col(&cs.nu, j), dp)
    };
    let m_on_n = |i: usize| {
        rho_of_vector(cs.l_on_n.matrices(), &la::mat_col(&cs.mu, i), dn)
    };
    let n_on_m = |j: usize| {
        rho_of_vector(cs.l_on_m.matrices(), &la::mat_col(&cs.nu, j), dm)
    };

    let mut x0 = Ok(());
    'x0: for i in 0..dm {
        for i2 in 0..dm {
            for k in 0..dn {
                let lhs = h.apply(&cs.m.structure_constants()[i][i2], &cs.n.basis_vector(k));
                let a = la::mat_vec(&m_on_p(i), &cs.h[i2][k]);
                let b = la::mat_vec(&m_on_p(i2), &cs.h[i][k]);
                if lhs != la::vec_sub(&a, &b) {
                    x0 = Err(format!("first identity fails at ({i}, {i2}, {k})"));
                    break 'x0;
                }
            }
        }
    }
    if x0.is_ok() {
        'x0b: for i in 0..dm {
            for k in 0..dn {
                for k2 in 0..dn {
                    let lhs =
                        h.apply(&cs.m.basis_vector(i), &cs.n.structure_constants()[k][k2]);
                    let a = la::mat_vec(&n_on_p(k), &cs.h[i][k2]);
                    let b = la::mat_vec(&n_on_p(k2), &cs.h[i][k]);
                    if lhs != la::vec_sub(&a, &b) {
                        x0 = Err(format!("second identity fails at ({i}, {k}, {k2})"));
                        break 'x0b;
                    }
                }
            }
        }
    }

    let mut x1 = Ok(());
    'x1: for li in 0..dl {
        for pi in 0..dp {
            let moved = cs.l_on_p.act_basis(li, &cs.p.basis_vector(pi));
            if la::mat_vec(&cs.p_m, &moved)
                != cs.l_on_m.act_basis(li, &la::mat_col(&cs.p_m, pi))
            {
                x1 = Err(format!("p_M not equivariant at ({li}, {pi})"));
                break 'x1;
            }
            if la::mat_vec(&cs.p_n, &moved)
                != cs.l_on_n.act_basis(li, &la::mat_col(&cs.p_n, pi))
            {
                x1 = Err(format!("p_N not equivariant at ({li}, {pi})"));
                break 'x1;
            }
        }
    }
    if x1.is_ok() {
        let lambda = la::mat_mul(&cs.mu, &cs.p_m);
        if lambda != la::mat_mul(&cs.nu, &cs.p_n) {
            x1 = Err("square does not commute".to_string());
        } else {
            for (boundary, action, name) in [
                (&cs.mu, &cs.l_on_m, "mu"),
                (&cs.nu, &cs.l_on_n, "nu"),
                (&lambda, &cs.l_on_p, "lambda"),
            ] {
                let rep = verify_lie_xmod(boundary, action);
                if let Err((a, b)) = rep.equivariance {
                    x1 = Err(format!("{name} equivariance fails at ({a}, {b})"));
                    break;
                }
                if let Err((a, b)) = rep.peiffer {
                    x1 = Err(format!("{name} Peiffer fails at ({a}, {b})"));
                    break;
                }
            }
        }
    }

    let mut x2 = Ok(());
    'x2: for i in 0..dm {
        for k in 0..dn {
            if la::mat_vec(&cs.p_m, &cs.h[i][k])
                != la::vec_neg(&la::mat_col(&n_on_m(k), i))
            {
                x2 = Err(format!("p_M∘h fails at ({i}, {k})"));
                break 'x2;
            }
            if la::mat_vec(&cs.p_n, &cs.h[i][k]) != la::mat_col(&m_on_n(i), k) {
                x2 = Err(format!("p_N∘h fails at ({i}, {k})"));
                break 'x2;
            }
        }
    }

    let mut x3 = Ok(());
    'x3: for pi in 0..dp {
        for k in 0..dn {
            let lhs = h.apply(&la::mat_col(&cs.p_m, pi), &cs.n.basis_vector(k));
            let rhs = la::vec_neg(&la::mat_vec(&n_on_p(k), &cs.p.basis_vector(pi)));
            if lhs != rhs {
                x3 = Err(format!("h(p_M(p),n) fails at ({pi}, {k})"));
                break 'x3;
            }
        }
        for i in 0..dm {
            let lhs = h.apply(&cs.m.basis_vector(i), &la::mat_col(&cs.p_n, pi));
            let rhs = la::mat_vec(&m_on_p(i), &cs.p.basis_vector(pi));
            if lhs != rhs {
                x3 = Err(format!("h(m,p_N(p)) fails at ({i}, {pi})"));
                break 'x3;
            }
        }
    }

    let mut x4 = Ok(());
    'x4: for li in 0..dl {
        for i in 0..dm {
            for k in 0..dn {
                let lhs = cs.l_on_p.act_basis(li, &cs.h[i][k]);
                let a = h.apply(
                    &cs.l_on_m.act_basis(li, &cs.m.basis_vector(i)),
                    &cs.n.basis_vector(k),
                );
                let b = h.apply(
                    &cs.m.basis_vector(i),
                    &cs.l_on_n.act_basis(li, &cs.n.basis_vector(k)),
                );
                if lhs != la::vec_add(&a, &b) {
                    x4 = Err(format!("fails at ({li}, {i}, {k})"));
                    break 'x4;
                }
            }
        }
    }

    LieXsqReport { x0, x1, x2, x3, x4 }
}

/// Compare `M⊗N` with `N⊗M` through `e_i⊗f_j ↦ −(f_j⊗e_i)`: the map must
/// kill the relations, be bijective, and preserve brackets.
pub fn lie_symmetry_check(t_mn: &LieTensor, t_nm: &LieTensor) -> Result<(), LieError> {
    let dn = t_mn.pair.n().dim();
    let d = t_mn.pair.m().dim() * dn;
    // image of each pure tensor of M⊗N inside the quotient N⊗M
    let image: Vec<Vec<Rat>> = (0..d)
        .map(|p| la::vec_neg(&t_nm.basis_map[t_nm.pure_index(p % dn, p / dn)]))
        .collect();
    let apply = |v: &[Rat]| {
        let mut out = vec![Rat::zero(); t_nm.dim];
        for (p, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, w) in out.iter_mut().zip(&image[p]) {
                *o += c * w;
            }
        }
        out
    };
    for (ri, row) in t_mn.relation_rows.iter().enumerate() {
        if !la::vec_is_zero(&apply(row)) {
            return Err(LieError::NotWellDefined { row: ri });
        }
    }
    if t_mn.dim != t_nm.dim {
        return Err(LieError::ShapeMismatch(format!(
            "dimensions differ: {} vs {}",
            t_mn.dim, t_nm.dim
        )));
    }
    // matrix of the induced map on the quotient bases
    let cols: Vec<Vec<Rat>> = t_mn
        .relations
        .free_columns()
        .iter()
        .map(|&c| apply(&la::unit(d, c)))
        .collect();
    let mut rank = RowSpace::new(t_nm.dim);
    for c in &cols {
        rank.insert(c);
    }
    if rank.rank() != t_nm.dim {
        return Err(LieError::ShapeMismatch(
            "symmetry comparison is not bijective".into(),
        ));
    }
    for u in 0..t_mn.dim {
        for v in 0..t_mn.dim {
            let lhs = {
                let mut out = vec![Rat::zero(); t_nm.dim];
                for (w, c) in t_mn.algebra.structure_constants()[u][v].iter().enumerate() {
                    if !c.is_zero() {
                        for (o, x) in out.iter_mut().zip(&cols[w]) {
                            *o += c * x;
                        }
                    }
                }
                out
            };
            let rhs = t_nm.algebra.bracket_vec(&cols[u], &cols[v]);
            if lhs != rhs {
                return Err(LieError::ShapeMismatch(format!(
                    "symmetry does not preserve the bracket at ({u}, {v})"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{sl2, LieAlgebra};

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn sl2_pair() -> LiePair {
        let g = sl2();
        let cm = LieCrossedModule::identity(&g);
        LiePair::new(cm.clone(), cm).unwrap()
    }

    fn abelian_pair(dm: usize, dn: usize) -> LiePair {
        let m = LieAlgebra::abelian(dm);
        let n = LieAlgebra::abelian(dn);
        let l = LieAlgebra::abelian(0);
        LiePair::new(
            LieCrossedModule::zero(&m, &l).unwrap(),
            LieCrossedModule::zero(&n, &l).unwrap(),
        )
        .unwrap()
    }

    /// Fraction-free Bareiss rank over integers; the independent oracle for
    /// quotient dimensions.
    fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<i128>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        if a.is_empty() {
            return 0;
        }
        let (nr, nc) = (a.len(), a[0].len());
        let mut rank = 0;
        let mut prev: i128 = 1;
        let mut row = 0;
        for col in 0..nc {
            if row == nr {
                break;
            }
            let Some(p) = (row..nr).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(row, p);
            for i in 0..nr {
                if i == row {
                    continue;
                }
                for j in 0..nc {
                    if j == col {
                        continue;
                    }
                    a[i][j] = (a[row][col] * a[i][j] - a[i][col] * a[row][j]) / prev;
                }
                a[i][col] = 0;
            }
            prev = a[row][col];
            rank += 1;
            row += 1;
        }
        rank
    }

    /// Independent reconstruction of the sl₂ relation rows from the raw
    /// structure constants, as integers.
    fn sl2_relation_rows() -> Vec<Vec<i64>> {
        // basis e=0, f=1, h=2; brackets and adjoint action written out
        let bra = |i: usize, j: usize| -> [i64; 3] {
            match (i, j) {
                (0, 1) => [0, 0, 1],
                (1, 0) => [0, 0, -1],
                (2, 0) => [2, 0, 0],
                (0, 2) => [-2, 0, 0],
                (2, 1) => [0, -2, 0],
                (1, 2) => [0, 2, 0],
                _ => [0, 0, 0],
            }
        };
        let idx = |i: usize, j: usize| 3 * i + j;
        let mut rows = Vec::new();
        for i in 0..3 {
            for i2 in 0..3 {
                for k in 0..3 {
                    let mut row = vec![0i64; 9];
                    for (a, c) in bra(i, i2).iter().enumerate() {
                        row[idx(a, k)] += c;
                    }
                    for (b, c) in bra(i2, k).iter().enumerate() {
                        row[idx(i, b)] -= c;
                    }
                    for (b, c) in bra(i, k).iter().enumerate() {
                        row[idx(i2, b)] += c;
                    }
                    rows.push(row);
                }
            }
        }
        for i in 0..3 {
            for k in 0..3 {
                for k2 in 0..3 {
                    let mut row = vec![0i64; 9];
                    for (b, c) in bra(k, k2).iter().enumerate() {
                        row[idx(i, b)] += c;
                    }
                    for (a, c) in bra(k2, i).iter().enumerate() {
                        row[idx(a, k)] -= c;
                    }
                    for (a, c) in bra(k, i).iter().enumerate() {
                        row[idx(a, k2)] += c;
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    #[test]
    fn sl2_tensor_dimension_matches_independent_rank() {
        // oracle first: the relation span has rank 6, so the quotient is 3
        let rank = bareiss_rank(&sl2_relation_rows());
        assert_eq!(rank, 6);
        let t = lie_tensor(&sl2_pair()).unwrap();
        assert_eq!(t.dim, 9 - rank);
        assert_eq!(t.dim, 3);
        // ρ_M is bijective
        let mut rs = RowSpace::new(3);
        for u in 0..t.dim {
            rs.insert(&la::mat_col(&t.rho_m, u));
        }
        assert_eq!(rs.rank(), 3);
    }

    #[test]
    fn abelian_trivial_tensor_is_full_rank_with_zero_bracket() {
        let pair = abelian_pair(2, 3);
        let t = lie_tensor(&pair).unwrap();
        assert_eq!(t.dim, 6);
        assert!(t.algebra.is_abelian());
        assert!(la::mat_is_zero(&t.rho_m));
        assert!(la::mat_is_zero(&t.rho_n));
    }

    #[test]
    fn zero_side_gives_zero_tensor() {
        let pair = abelian_pair(0, 3);
        let t = lie_tensor(&pair).unwrap();
        assert_eq!(t.dim, 0);
    }

    #[test]
    fn tensor_square_passes_crossed_square_axioms() {
        for pair in [sl2_pair(), abelian_pair(2, 2)] {
            let t = lie_tensor(&pair).unwrap();
            let cs = t.own_square();
            let rep = verify_lie_crossed_square(&cs);
            assert!(rep.all_pass(), "{rep:?}");
        }
    }

    #[test]
    fn pure_map_is_a_lie_pairing_and_universal() {
        let t = lie_tensor(&sl2_pair()).unwrap();
        let h = LiePairing {
            p: t.algebra.clone(),
            values: (0..3).map(|i| (0..3).map(|j| t.pure(i, j)).collect()).collect(),
        };
        let rep = verify_lie_pairing(&t.pair, &h);
        assert!(rep.all_pass(), "{rep:?}");
        let phi = universal_lie_morphism(&t, &h).unwrap();
        assert_eq!(phi, la::mat_identity(3));
    }

    #[test]
    fn rho_m_is_induced_by_a_pairing() {
        // h(m, n) = −ⁿm into M matches the projection structure map
        let pair = sl2_pair();
        let t = lie_tensor(&pair).unwrap();
        let values = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| la::vec_neg(&la::mat_col(&pair.n_on_m(j), i)))
                    .collect()
            })
            .collect();
        let h = LiePairing {
            p: pair.m().clone(),
            values,
        };
        assert!(verify_lie_pairing(&pair, &h).all_pass());
        let phi = universal_lie_morphism(&t, &h).unwrap();
        assert_eq!(phi, t.rho_m);
    }

    #[test]
    fn non_pairing_is_rejected() {
        // the plain tensor map into the abelianised square is not a pairing
        // for sl2: axiom 1 fails on a basis instance
        let pair = sl2_pair();
        let p = LieAlgebra::abelian(9);
        let values = (0..3)
            .map(|i| (0..3).map(|j| la::unit(9, 3 * i + j)).collect())
            .collect();
        let h = LiePairing { p, values };
        let rep = verify_lie_pairing(&pair, &h);
        assert!(rep.axiom1.is_err());
    }

    #[test]
    fn zero_pairing_on_abelian_data_passes() {
        let pair = abelian_pair(2, 2);
        let p = LieAlgebra::abelian(1);
        let h = LiePairing {
            p: p.clone(),
            values: vec![vec![vec![r(0)]; 2]; 2],
        };
        assert!(verify_lie_pairing(&pair, &h).all_pass());
        let t = lie_tensor(&pair).unwrap();
        let phi = universal_lie_morphism(&t, &h).unwrap();
        assert!(la::mat_is_zero(&phi));
    }

    #[test]
    fn symmetry_of_tensors() {
        for pair in [sl2_pair(), abelian_pair(2, 3)] {
            let t_mn = lie_tensor(&pair).unwrap();
            let t_nm = lie_tensor(&pair.swapped()).unwrap();
            lie_symmetry_check(&t_mn, &t_nm).unwrap();
        }
    }

    #[test]
    fn intersection_of_ideals_square() {
        // the 2-dimensional nonabelian algebra [a, b] = b; ideals M = ⟨b⟩
        // and N = L itself; P = M ∧ N = M with h(m, n) = [m, n]
        let l = build_lie_algebra(vec![
            vec![vec![r(0), r(0)], vec![r(0), r(1)]],
            vec![vec![r(0), r(-1)], vec![r(0), r(0)]],
        ])
        .unwrap();
        let m = LieAlgebra::abelian(1); // ⟨b⟩
        // inclusion of M: b ↦ b
        let incl_m = vec![vec![r(0)], vec![r(1)]];
        // action of L on M: a·b = [a, b] = b, b·b = 0
        let act_m = LieAction::new(&l, &m, vec![vec![vec![r(1)]], vec![vec![r(0)]]]).unwrap();
        let mu = LieCrossedModule::new(incl_m.clone(), act_m.clone()).unwrap();
        let nu = LieCrossedModule::identity(&l);
        // P = M, p_m = identity, p_n = inclusion into N = L
        let cs = LieCrossedSquare {
            p: m.clone(),
            m: m.clone(),
            n: l.clone(),
            l: l.clone(),
            p_m: la::mat_identity(1),
            p_n: incl_m.clone(),
            mu: incl_m,
            nu: la::mat_identity(2),
            l_on_p: act_m.clone(),
            l_on_m: act_m,
            l_on_n: LieAction::adjoint(&l),
            // h(b, a) = [b, a] = -b; h(b, b) = 0
            h: vec![vec![vec![r(-1)], vec![r(0)]]],
        };
        let rep = verify_lie_crossed_square(&cs);
        assert!(rep.all_pass(), "{rep:?}");
        let _ = (mu, nu);
    }

    #[test]
    fn fault_injected_lie_square_fails_x2() {
        let pair = sl2_pair();
        let t = lie_tensor(&pair).unwrap();
        let mut cs = t.own_square();
        cs.h[0][0][0] += r(1);
        let rep = verify_lie_crossed_square(&cs);
        assert!(rep.x2.is_err());
    }
}
