//! Session files: a single JSON document declaring groups, subgroups, homs,
//! actions, crossed modules and Lie data by name, followed by an ordered
//! list of tasks. Running a session produces a deterministic report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Map, Value as Json};

use crate::action::{
    self, make_action, precrossed_to_reflexive_graph, reflect_to_groupoid, semidirect_product,
    verify_crossed_module, ActionError, CrossedModule, GroupAction, PrecrossedModule,
    ReflexiveGraph,
};
use crate::commutator;
use crate::double::{
    box_double_groupoid, box_normalization_matches_intersection, build_cat2_group,
    cat2_normalization_matches_tensor, normalize_double_groupoid, reflect_double_rg,
    DoubleGroupoid,
};
use crate::fp::{todd_coxeter, FpError, Presentation};
use crate::group::{
    self, abelian_invariants, build_group, find_isomorphism_bounded, standard_group_bounded,
    Group, GroupError, GroupHom, StandardGroup, Subgroup,
};
use crate::lie::{
    self, build_lie_algebra, lie_tensor, parse_rat, rat_to_string, universal_lie_morphism,
    verify_lie_crossed_square, verify_lie_pairing, Lie, LieAction, LieCrossedModule, LieError,
    LiePair, LiePairing, LieTensor, Mat, Rat,
};
use crate::limits;
use crate::square::{intersection_square, verify_crossed_square, CrossedSquare, SquareError};
use crate::tensor::{
    h_image_equals_commutator, symmetry_isomorphism, tensor_group_bounded, universal_morphism,
    CompatiblePair, TensorError, TensorGroup,
};
use crate::weak::{promote_weak, verify_weak_crossed_square, WeakCrossedSquare};

pub const TOOL_NAME: &str = "xsq";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unknown reference at {path}: no declaration named {name}")]
    UnknownReference { path: String, name: String },
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
}

/// Execution limits and output options; echoed in every report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub max_cosets: usize,
    pub order_bound: u64,
    pub iso_order_bound: u64,
    pub no_timings: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            max_cosets: limits::DEFAULT_MAX_COSETS,
            order_bound: limits::DEFAULT_ORDER_BOUND,
            iso_order_bound: limits::DEFAULT_ISO_ORDER_BOUND,
            no_timings: false,
        }
    }
}

/// Any value a declaration or task can produce.
#[derive(Debug, Clone)]
pub enum Object {
    Group(Group),
    Sub(Subgroup),
    Hom(GroupHom),
    Act(GroupAction),
    Xmod(CrossedModule),
    Pair(CompatiblePair),
    Tensor(Box<TensorGroup>),
    Square(Box<CrossedSquare>),
    Graph(Box<ReflexiveGraph>),
    Double(Box<DoubleGroupoid>),
    Weak(Box<WeakCrossedSquare>),
    LieAlg(Lie),
    LieAct(LieAction),
    LieXmod(LieCrossedModule),
    LiePair(LiePair),
    LieTensor(Box<LieTensor>),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Group(_) => "group",
            Object::Sub(_) => "subgroup",
            Object::Hom(_) => "hom",
            Object::Act(_) => "action",
            Object::Xmod(_) => "xmod",
            Object::Pair(_) => "pair",
            Object::Tensor(_) => "tensor",
            Object::Square(_) => "square",
            Object::Graph(_) => "graph",
            Object::Double(_) => "double",
            Object::Weak(_) => "weak",
            Object::LieAlg(_) => "lie",
            Object::LieAct(_) => "lie-action",
            Object::LieXmod(_) => "lie-xmod",
            Object::LiePair(_) => "lie-pair",
            Object::LieTensor(_) => "lie-tensor",
        }
    }
}

/// A parsed and fully validated session.
#[derive(Debug, Clone)]
pub struct Session {
    pub declarations: BTreeMap<String, Object>,
    /// names in document order, dependencies first
    pub declaration_order: Vec<String>,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone)]
pub struct Task {
    pub id: String,
    pub op: String,
    pub args: Map<String, Json>,
}

/// One stable machine-readable code per error family.
fn error_code(e: &CoreError) -> &'static str {
    match e {
        CoreError::Group(g) => match g {
            GroupError::MalformedTable(_) => "MalformedTable",
            GroupError::NoIdentity => "NoIdentity",
            GroupError::NoInverse(_) => "NoInverse",
            GroupError::NotAssociative(_, _, _) => "NotAssociative",
            GroupError::TooLarge { .. } => "TooLarge",
            GroupError::NotNormal { .. } => "NotNormal",
            GroupError::NotHomomorphism(_, _) => "NotHomomorphism",
            GroupError::NotAbelian(_, _) => "NotAbelian",
            GroupError::SearchBudgetExceeded => "SearchBudgetExceeded",
            GroupError::IndexOutOfRange(_) => "IndexOutOfRange",
            GroupError::ParentMismatch => "ParentMismatch",
        },
        CoreError::Fp(f) => match f {
            FpError::Overflow(_) => "Overflow",
            FpError::BadGenerator(_, _) => "BadGenerator",
            FpError::ZeroLetter => "ZeroLetter",
            FpError::NoGenerators => "NoGenerators",
            FpError::Group(g) => error_code(&CoreError::Group(g.clone())),
        },
        CoreError::Action(a) => match a {
            ActionError::NotAutomorphism(_) => "NotAutomorphism",
            ActionError::NotFunctorial(_, _) => "NotFunctorial",
            ActionError::IdentityNotFixed => "IdentityNotFixed",
            ActionError::ShapeMismatch(_) => "ShapeMismatch",
            ActionError::NotEquivariant(_, _) => "NotEquivariant",
            ActionError::PeifferFailure(_, _) => "PeifferFailure",
            ActionError::NotGroupoid => "NotGroupoid",
            ActionError::MalformedGraph(_) => "MalformedGraph",
            ActionError::Group(g) => error_code(&CoreError::Group(g.clone())),
        },
        CoreError::Square(s) => match s {
            SquareError::ShapeMismatch(_) => "ShapeMismatch",
            SquareError::NotCommuting(_) => "NotCommuting",
            SquareError::Action(a) => error_code(&CoreError::Action(a.clone())),
            SquareError::Group(g) => error_code(&CoreError::Group(g.clone())),
        },
        CoreError::Tensor(t) => match t {
            TensorError::Overflow(_) => "Overflow",
            TensorError::StructureMapIllDefined { .. } => "StructureMapIllDefined",
            TensorError::NotWellDefined { .. } => "NotWellDefined",
            TensorError::SquareMismatch(_) => "SquareMismatch",
            TensorError::NotSurjective => "NotSurjective",
            TensorError::KernelNotNormalInQ => "KernelNotNormalInQ",
            TensorError::NotDoubleGroupoid(_) => "NotDoubleGroupoid",
            TensorError::MalformedDoubleGraph(_) => "MalformedDoubleGraph",
            TensorError::AssociativityFailure(_, _, _) => "AssociativityFailure",
            TensorError::PresentationTooLarge { .. } => "PresentationTooLarge",
            TensorError::Square(s) => error_code(&CoreError::Square(s.clone())),
            TensorError::Action(a) => error_code(&CoreError::Action(a.clone())),
            TensorError::Group(g) => error_code(&CoreError::Group(g.clone())),
        },
        CoreError::Lie(l) => match l {
            LieError::NotAntisymmetric(_, _) => "NotAntisymmetric",
            LieError::JacobiFailure(_, _, _) => "JacobiFailure",
            LieError::NotDerivation { .. } => "NotDerivation",
            LieError::NotLieHom(_, _) => "NotLieHom",
            LieError::EquivarianceFailure(_, _) => "EquivarianceFailure",
            LieError::PeifferFailure(_, _) => "LiePeifferFailure",
            LieError::BracketNotDescending { .. } => "BracketNotDescending",
            LieError::StructureMapNotDescending { .. } => "StructureMapNotDescending",
            LieError::NotWellDefined { .. } => "LieNotWellDefined",
            LieError::ShapeMismatch(_) => "ShapeMismatch",
            LieError::Parse(_) => "ParseError",
        },
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CoreError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Square(#[from] SquareError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Per-task outcome inside a report.
#[derive(Debug, Clone)]
pub struct TaskReport {
    pub id: String,
    pub op: String,
    /// "ok", "fail" (a verifier reported failing axioms) or "error"
    pub status: String,
    pub code: Option<String>,
    pub message: Option<String>,
    pub data: BTreeMap<String, Json>,
    pub time_ms: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: Config,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.tasks.iter().all(|t| t.status == "ok")
    }
}

// ---------------------------------------------------------------- parsing

struct Parser<'a> {
    config: &'a Config,
    names: BTreeMap<String, Object>,
    order: Vec<String>,
}

fn perr(path: &str, message: impl Into<String>) -> SessionError {
    SessionError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn verr(path: &str, message: impl std::fmt::Display) -> SessionError {
    SessionError::Validation {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn as_obj<'j>(v: &'j Json, path: &str) -> Result<&'j Map<String, Json>, SessionError> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn as_str<'j>(v: &'j Json, path: &str) -> Result<&'j str, SessionError> {
    v.as_str().ok_or_else(|| perr(path, "expected a string"))
}

fn get<'j>(m: &'j Map<String, Json>, key: &str, path: &str) -> Result<&'j Json, SessionError> {
    m.get(key)
        .ok_or_else(|| perr(path, format!("missing field `{key}`")))
}

fn as_u32_vec(v: &Json, path: &str) -> Result<Vec<u32>, SessionError> {
    v.as_array()
        .ok_or_else(|| perr(path, "expected an array"))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|n| n as u32)
                .ok_or_else(|| perr(path, "expected nonnegative integers"))
        })
        .collect()
}

fn as_i32_vec(v: &Json, path: &str) -> Result<Vec<i32>, SessionError> {
    v.as_array()
        .ok_or_else(|| perr(path, "expected an array"))?
        .iter()
        .map(|x| {
            x.as_i64()
                .map(|n| n as i32)
                .ok_or_else(|| perr(path, "expected integers"))
        })
        .collect()
}

fn as_rat(v: &Json, path: &str) -> Result<Rat, SessionError> {
    match v {
        Json::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().unwrap().into())),
        Json::String(s) => parse_rat(s).map_err(|e| verr(path, e)),
        _ => Err(perr(path, "expected an integer or a \"p/q\" string")),
    }
}

fn as_rat_vec(v: &Json, path: &str) -> Result<Vec<Rat>, SessionError> {
    v.as_array()
        .ok_or_else(|| perr(path, "expected an array"))?
        .iter()
        .map(|x| as_rat(x, path))
        .collect()
}

fn as_mat(v: &Json, path: &str) -> Result<Mat, SessionError> {
    v.as_array()
        .ok_or_else(|| perr(path, "expected a matrix"))?
        .iter()
        .map(|row| as_rat_vec(row, path))
        .collect()
}

impl Parser<'_> {
    fn lookup(&self, name: &Json, path: &str) -> Result<&Object, SessionError> {
        let name = as_str(name, path)?;
        self.names
            .get(name)
            .ok_or_else(|| SessionError::UnknownReference {
                path: path.to_string(),
                name: name.to_string(),
            })
    }

    fn group(&self, m: &Map<String, Json>, key: &str, path: &str) -> Result<Group, SessionError> {
        let p = format!("{path}.{key}");
        match self.lookup(get(m, key, path)?, &p)? {
            Object::Group(g) => Ok(g.clone()),
            other => Err(perr(&p, format!("expected a group, found {}", other.kind()))),
        }
    }

    fn subgroup(
        &self,
        m: &Map<String, Json>,
        key: &str,
        path: &str,
    ) -> Result<Subgroup, SessionError> {
        let p = format!("{path}.{key}");
        match self.lookup(get(m, key, path)?, &p)? {
            Object::Sub(s) => Ok(s.clone()),
            other => Err(perr(&p, format!("expected a subgroup, found {}", other.kind()))),
        }
    }

    fn xmod(
        &self,
        m: &Map<String, Json>,
        key: &str,
        path: &str,
    ) -> Result<CrossedModule, SessionError> {
        let p = format!("{path}.{key}");
        match self.lookup(get(m, key, path)?, &p)? {
            Object::Xmod(x) => Ok(x.clone()),
            other => Err(perr(
                &p,
                format!("expected a crossed module, found {}", other.kind()),
            )),
        }
    }

    fn parse_declaration(&mut self, name: &str, v: &Json) -> Result<Object, SessionError> {
        let path = format!("declare.{name}");
        let m = as_obj(v, &path)?;
        let kind = as_str(get(m, "kind", &path)?, &path)?;
        let obj = match kind {
            "standard" => {
                let spec = as_str(get(m, "spec", &path)?, &path)?;
                let spec = StandardGroup::parse(spec)
                    .ok_or_else(|| perr(&path, format!("unknown standard group `{spec}`")))?;
                Object::Group(
                    standard_group_bounded(&spec, self.config.order_bound)
                        .map_err(|e| verr(&path, e))?,
                )
            }
            "table" => {
                let rows = get(m, "table", &path)?
                    .as_array()
                    .ok_or_else(|| perr(&path, "expected an array of rows"))?
                    .iter()
                    .map(|r| as_u32_vec(r, &path))
                    .collect::<Result<Vec<_>, _>>()?;
                let hint = m.get("identity").and_then(|x| x.as_u64()).map(|x| x as u32);
                Object::Group(build_group(&rows, hint).map_err(|e| verr(&path, e))?)
            }
            "presentation" => {
                let ngens = get(m, "ngens", &path)?
                    .as_u64()
                    .ok_or_else(|| perr(&path, "ngens must be a positive integer"))?
                    as usize;
                let relators = get(m, "relators", &path)?
                    .as_array()
                    .ok_or_else(|| perr(&path, "relators must be an array of words"))?
                    .iter()
                    .map(|w| as_i32_vec(w, &path))
                    .collect::<Result<Vec<_>, _>>()?;
                let p = Presentation::new(ngens, relators).map_err(|e| verr(&path, e))?;
                let e = todd_coxeter(&p, self.config.max_cosets).map_err(|e| verr(&path, e))?;
                Object::Group(e.group)
            }
            "subgroup" => {
                let parent = self.group(m, "parent", &path)?;
                let gens = as_u32_vec(get(m, "gens", &path)?, &path)?;
                let closure = m
                    .get("closure")
                    .map(|c| as_str(c, &path))
                    .transpose()?
                    .unwrap_or("subgroup");
                let sub = match closure {
                    "subgroup" => group::subgroup_closure(&parent, &gens),
                    "normal" => group::normal_closure(&parent, &gens),
                    other => {
                        return Err(perr(&path, format!("unknown closure kind `{other}`")))
                    }
                }
                .map_err(|e| verr(&path, e))?;
                Object::Sub(sub)
            }
            "hom" => {
                let domain = self.group(m, "domain", &path)?;
                let codomain = self.group(m, "codomain", &path)?;
                let map = as_u32_vec(get(m, "map", &path)?, &path)?;
                Object::Hom(GroupHom::new(&domain, &codomain, map).map_err(|e| verr(&path, e))?)
            }
            "action" => {
                let acting = self.group(m, "acting", &path)?;
                let acted = self.group(m, "acted", &path)?;
                let perms = get(m, "perms", &path)?;
                let act = match perms {
                    Json::String(s) if s == "trivial" => GroupAction::trivial(&acting, &acted),
                    Json::String(s) if s == "conjugation" => {
                        if acting != acted {
                            return Err(perr(
                                &path,
                                "conjugation needs acting = acted",
                            ));
                        }
                        GroupAction::conjugation(&acting)
                    }
                    Json::Array(rows) => {
                        let perms = rows
                            .iter()
                            .map(|r| as_u32_vec(r, &path))
                            .collect::<Result<Vec<_>, _>>()?;
                        make_action(&acting, &acted, perms).map_err(|e| verr(&path, e))?
                    }
                    _ => return Err(perr(&path, "perms must be arrays or a named action")),
                };
                Object::Act(act)
            }
            "xmod" => {
                if let Some(variant) = m.get("variant") {
                    match as_str(variant, &path)? {
                        "identity" => {
                            let g = self.group(m, "group", &path)?;
                            Object::Xmod(CrossedModule::identity(&g))
                        }
                        "inclusion" => {
                            let parent = self.group(m, "parent", &path)?;
                            let sub = self.subgroup(m, "subgroup", &path)?;
                            Object::Xmod(
                                CrossedModule::inclusion(&parent, &sub)
                                    .map_err(|e| verr(&path, e))?,
                            )
                        }
                        "zero" => {
                            let kernel = self.group(m, "kernel", &path)?;
                            let base = self.group(m, "base", &path)?;
                            Object::Xmod(
                                CrossedModule::zero(&kernel, &base).map_err(|e| verr(&path, e))?,
                            )
                        }
                        other => return Err(perr(&path, format!("unknown variant `{other}`"))),
                    }
                } else {
                    let p = format!("{path}.boundary");
                    let boundary = match self.lookup(get(m, "boundary", &path)?, &p)? {
                        Object::Hom(h) => h.clone(),
                        other => {
                            return Err(perr(&p, format!("expected a hom, found {}", other.kind())))
                        }
                    };
                    let p = format!("{path}.action");
                    let act = match self.lookup(get(m, "action", &path)?, &p)? {
                        Object::Act(a) => a.clone(),
                        other => {
                            return Err(perr(
                                &p,
                                format!("expected an action, found {}", other.kind()),
                            ))
                        }
                    };
                    Object::Xmod(CrossedModule::new(boundary, act).map_err(|e| verr(&path, e))?)
                }
            }
            "pair" => {
                let mu = self.xmod(m, "mu", &path)?;
                let nu = self.xmod(m, "nu", &path)?;
                Object::Pair(CompatiblePair::new(mu, nu).map_err(|e| verr(&path, e))?)
            }
            "lie" => {
                let constants = get(m, "constants", &path)?
                    .as_array()
                    .ok_or_else(|| perr(&path, "expected structure constants"))?
                    .iter()
                    .map(|row| as_mat(row, &path))
                    .collect::<Result<Vec<_>, _>>()?;
                Object::LieAlg(build_lie_algebra(constants).map_err(|e| verr(&path, e))?)
            }
            "lie-action" => {
                let acting = self.lie_alg(m, "acting", &path)?;
                let acted = self.lie_alg(m, "acted", &path)?;
                let rho = get(m, "rho", &path)?;
                let act = match rho {
                    Json::String(s) if s == "trivial" => LieAction::trivial(&acting, &acted),
                    Json::String(s) if s == "adjoint" => {
                        if acting != acted {
                            return Err(perr(&path, "adjoint needs acting = acted"));
                        }
                        LieAction::adjoint(&acting)
                    }
                    Json::Array(mats) => {
                        let rho = mats
                            .iter()
                            .map(|mat| as_mat(mat, &path))
                            .collect::<Result<Vec<_>, _>>()?;
                        LieAction::new(&acting, &acted, rho).map_err(|e| verr(&path, e))?
                    }
                    _ => return Err(perr(&path, "rho must be matrices or a named action")),
                };
                Object::LieAct(act)
            }
            "lie-xmod" => {
                if let Some(variant) = m.get("variant") {
                    match as_str(variant, &path)? {
                        "identity" => {
                            let g = self.lie_alg(m, "algebra", &path)?;
                            Object::LieXmod(LieCrossedModule::identity(&g))
                        }
                        "zero" => {
                            let kernel = self.lie_alg(m, "kernel", &path)?;
                            let base = self.lie_alg(m, "base", &path)?;
                            Object::LieXmod(
                                LieCrossedModule::zero(&kernel, &base)
                                    .map_err(|e| verr(&path, e))?,
                            )
                        }
                        other => return Err(perr(&path, format!("unknown variant `{other}`"))),
                    }
                } else {
                    let boundary = as_mat(get(m, "boundary", &path)?, &path)?;
                    let p = format!("{path}.action");
                    let act = match self.lookup(get(m, "action", &path)?, &p)? {
                        Object::LieAct(a) => a.clone(),
                        other => {
                            return Err(perr(
                                &p,
                                format!("expected a Lie action, found {}", other.kind()),
                            ))
                        }
                    };
                    Object::LieXmod(
                        LieCrossedModule::new(boundary, act).map_err(|e| verr(&path, e))?,
                    )
                }
            }
            "lie-pair" => {
                let mu = self.lie_xmod(m, "mu", &path)?;
                let nu = self.lie_xmod(m, "nu", &path)?;
                Object::LiePair(LiePair::new(mu, nu).map_err(|e| verr(&path, e))?)
            }
            other => return Err(perr(&path, format!("unknown declaration kind `{other}`"))),
        };
        Ok(obj)
    }

    fn lie_alg(&self, m: &Map<String, Json>, key: &str, path: &str) -> Result<Lie, SessionError> {
        let p = format!("{path}.{key}");
        match self.lookup(get(m, key, path)?, &p)? {
            Object::LieAlg(a) => Ok(a.clone()),
            other => Err(perr(&p, format!("expected a Lie algebra, found {}", other.kind()))),
        }
    }

    fn lie_xmod(
        &self,
        m: &Map<String, Json>,
        key: &str,
        path: &str,
    ) -> Result<LieCrossedModule, SessionError> {
        let p = format!("{path}.{key}");
        match self.lookup(get(m, key, path)?, &p)? {
            Object::LieXmod(a) => Ok(a.clone()),
            other => Err(perr(
                &p,
                format!("expected a Lie crossed module, found {}", other.kind()),
            )),
        }
    }
}

/// Parse and validate a session document. Declarations are processed in
/// document order and may reference earlier names only.
pub fn parse_session(text: &str, config: &Config) -> Result<Session, SessionError> {
    let root: Json =
        serde_json::from_str(text).map_err(|e| perr("$", format!("invalid JSON: {e}")))?;
    let root = as_obj(&root, "$")?;
    let declare = match root.get("declare") {
        Some(d) => as_obj(d, "declare")?.clone(),
        None => Map::new(),
    };
    let mut parser = Parser {
        config,
        names: BTreeMap::new(),
        order: Vec::new(),
    };
    for (name, v) in &declare {
        let obj = parser.parse_declaration(name, v)?;
        parser.names.insert(name.clone(), obj);
        parser.order.push(name.clone());
    }
    let mut tasks = Vec::new();
    if let Some(ts) = root.get("tasks") {
        let ts = ts
            .as_array()
            .ok_or_else(|| perr("tasks", "expected an array"))?;
        for (i, t) in ts.iter().enumerate() {
            let path = format!("tasks[{i}]");
            let m = as_obj(t, &path)?;
            let op = as_str(get(m, "op", &path)?, &path)?.to_string();
            let id = m
                .get("id")
                .map(|v| as_str(v, &path).map(str::to_string))
                .transpose()?
                .unwrap_or_else(|| format!("task{i}"));
            let args = match m.get("args") {
                Some(a) => as_obj(a, &path)?.clone(),
                None => Map::new(),
            };
            tasks.push(Task { id, op, args });
        }
    }
    Ok(Session {
        declarations: parser.names,
        declaration_order: parser.order,
        tasks,
    })
}

// ---------------------------------------------------------------- running

struct Runner<'a> {
    config: &'a Config,
    names: BTreeMap<String, Object>,
}

impl Runner<'_> {
    fn fetch(&self, args: &Map<String, Json>, key: &str, path: &str) -> Result<&Object, SessionError> {
        let v = get(args, key, path)?;
        let name = as_str(v, path)?;
        self.names
            .get(name)
            .ok_or_else(|| SessionError::UnknownReference {
                path: format!("{path}.{key}"),
                name: name.to_string(),
            })
    }

    fn group(&self, args: &Map<String, Json>, key: &str, path: &str) -> Result<Group, SessionError> {
        match self.fetch(args, key, path)? {
            Object::Group(g) => Ok(g.clone()),
            other => Err(perr(path, format!("`{key}` must be a group, found {}", other.kind()))),
        }
    }

    fn sub(&self, args: &Map<String, Json>, key: &str, path: &str) -> Result<Subgroup, SessionError> {
        match self.fetch(args, key, path)? {
            Object::Sub(s) => Ok(s.clone()),
            other => Err(perr(path, format!("`{key}` must be a subgroup, found {}", other.kind()))),
        }
    }

    fn pair(
        &self,
        args: &Map<String, Json>,
        key: &str,
        path: &str,
    ) -> Result<CompatiblePair, SessionError> {
        match self.fetch(args, key, path)? {
            Object::Pair(p) => Ok(p.clone()),
            other => Err(perr(path, format!("`{key}` must be a pair, found {}", other.kind()))),
        }
    }

    fn tensor(
        &self,
        args: &Map<String, Json>,
        key: &str,
        path: &str,
    ) -> Result<TensorGroup, SessionError> {
        match self.fetch(args, key, path)? {
            Object::Tensor(t) => Ok((**t).clone()),
            other => Err(perr(path, format!("`{key}` must be a tensor, found {}", other.kind()))),
        }
    }
}

fn subgroup_json(s: &Subgroup) -> Json {
    json!({ "order": s.order(), "elements": s.elements() })
}

fn report_entry(result: Result<(), String>) -> Json {
    match result {
        Ok(()) => json!({ "pass": true }),
        Err(w) => json!({ "pass": false, "witness": w }),
    }
}

/// Execute every task in order; failures are recorded per task, never fatal.
pub fn run(session: &Session, config: &Config) -> Report {
    let mut runner = Runner {
        config,
        names: session.declarations.clone(),
    };
    let mut reports = Vec::new();
    for task in &session.tasks {
        let start = Instant::now();
        let path = format!("task {}", task.id);
        let outcome = run_task(&mut runner, task, &path);
        let elapsed = start.elapsed().as_millis() as u64;
        let mut tr = match outcome {
            Ok(TaskOutcome { verdict, data, bind }) => {
                if let Some((name, obj)) = bind {
                    runner.names.insert(name, obj);
                }
                match verdict {
                    Ok(()) => TaskReport {
                        id: task.id.clone(),
                        op: task.op.clone(),
                        status: "ok".into(),
                        code: None,
                        message: None,
                        data,
                        time_ms: None,
                    },
                    Err(msg) => TaskReport {
                        id: task.id.clone(),
                        op: task.op.clone(),
                        status: "fail".into(),
                        code: Some("VerifierFailed".into()),
                        message: Some(msg),
                        data,
                        time_ms: None,
                    },
                }
            }
            Err(err) => TaskReport {
                id: task.id.clone(),
                op: task.op.clone(),
                status: "error".into(),
                code: Some(session_error_code(&err).into()),
                message: Some(err.to_string()),
                data: BTreeMap::new(),
                time_ms: None,
            },
        };
        if !config.no_timings {
            tr.time_ms = Some(elapsed);
        }
        reports.push(tr);
    }
    Report {
        config: config.clone(),
        tasks: reports,
    }
}

fn session_error_code(e: &SessionError) -> &'static str {
    match e {
        SessionError::Parse { .. } => "ParseError",
        SessionError::UnknownReference { .. } => "UnknownReference",
        SessionError::Validation { .. } => "ValidationError",
    }
}

struct TaskOutcome {
    /// Ok unless a verifier reported failures
    verdict: Result<(), String>,
    data: BTreeMap<String, Json>,
    bind: Option<(String, Object)>,
}

fn core<T>(path: &str, r: Result<T, impl Into<CoreError>>) -> Result<T, SessionError> {
    r.map_err(|e| {
        let e = e.into();
        SessionError::Validation {
            path: format!("{path} [{}]", error_code(&e)),
            message: e.to_string(),
        }
    })
}

fn run_task(runner: &mut Runner, task: &Task, path: &str) -> Result<TaskOutcome, SessionError> {
    let args = &task.args;
    let mut data = BTreeMap::new();
    let bind_name = args
        .get("as")
        .map(|v| as_str(v, path).map(str::to_string))
        .transpose()?;
    let mut bind: Option<(String, Object)> = None;
    let mut verdict: Result<(), String> = Ok(());

    macro_rules! bind_obj {
        ($obj:expr) => {
            if let Some(name) = bind_name.clone() {
                bind = Some((name, $obj));
            }
        };
    }

    match task.op.as_str() {
        "order" => {
            let g = runner.group(args, "group", path)?;
            data.insert("order".into(), json!(g.order()));
            data.insert("abelian".into(), json!(g.is_abelian()));
        }
        "direct-product" => {
            let g = runner.group(args, "left", path)?;
            let h = runner.group(args, "right", path)?;
            let p = core(path, group::direct_product_bounded(&g, &h, runner.config.order_bound))?;
            data.insert("order".into(), json!(p.group.order()));
            bind_obj!(Object::Group(p.group));
        }
        "subgroup-closure" | "normal-closure" => {
            let g = runner.group(args, "group", path)?;
            let gens = as_u32_vec(get(args, "gens", path)?, path)?;
            let s = if task.op == "subgroup-closure" {
                core(path, group::subgroup_closure(&g, &gens))?
            } else {
                core(path, group::normal_closure(&g, &gens))?
            };
            data.insert("subgroup".into(), subgroup_json(&s));
            bind_obj!(Object::Sub(s));
        }
        "quotient" => {
            let g = runner.group(args, "group", path)?;
            let n = runner.sub(args, "by", path)?;
            let (q, _) = core(path, group::quotient_group(&g, &n))?;
            data.insert("order".into(), json!(q.order()));
            bind_obj!(Object::Group(q));
        }
        "find-isomorphism" => {
            let g = runner.group(args, "left", path)?;
            let h = runner.group(args, "right", path)?;
            let iso = core(
                path,
                find_isomorphism_bounded(
                    &g,
                    &h,
                    runner.config.iso_order_bound,
                    limits::DEFAULT_ISO_NODE_BUDGET,
                ),
            )?;
            data.insert("isomorphic".into(), json!(iso.is_some()));
            if let Some(iso) = iso {
                data.insert("map".into(), json!(iso.forward.image_map()));
            }
        }
        "abelian-invariants" => {
            let g = runner.group(args, "group", path)?;
            let inv = core(path, abelian_invariants(&g))?;
            data.insert("invariants".into(), json!(inv));
        }
        "todd-coxeter" => {
            let ngens = get(args, "ngens", path)?
                .as_u64()
                .ok_or_else(|| perr(path, "ngens must be a positive integer"))?
                as usize;
            let relators = get(args, "relators", path)?
                .as_array()
                .ok_or_else(|| perr(path, "relators must be an array"))?
                .iter()
                .map(|w| as_i32_vec(w, path))
                .collect::<Result<Vec<_>, _>>()?;
            let p = core(path, Presentation::new(ngens, relators))?;
            let e = core(path, todd_coxeter(&p, runner.config.max_cosets))?;
            data.insert("order".into(), json!(e.group.order()));
            if let Some(word) = args.get("word") {
                let w = as_i32_vec(word, path)?;
                data.insert("word_element".into(), json!(core(path, e.word_eval(&w))?));
            }
            bind_obj!(Object::Group(e.group));
        }
        "semidirect" => {
            let act = match runner.fetch(args, "action", path)? {
                Object::Act(a) => a.clone(),
                other => return Err(perr(path, format!("expected an action, found {}", other.kind()))),
            };
            let ext = core(path, semidirect_product(&act))?;
            data.insert("order".into(), json!(ext.total.order()));
            bind_obj!(Object::Group(ext.total));
        }
        "verify-xmod" => {
            let (boundary, action) = match runner.fetch(args, "xmod", path)? {
                Object::Xmod(x) => (x.boundary().clone(), x.action().clone()),
                Object::Hom(_) => return Err(perr(path, "pass a declared crossed module")),
                other => {
                    return Err(perr(path, format!("expected a crossed module, found {}", other.kind())))
                }
            };
            let rep = verify_crossed_module(&boundary, &action);
            data.insert(
                "precrossed".into(),
                report_entry(rep.precrossed.map_err(|(l, m)| format!("(l={l}, m={m})"))),
            );
            data.insert(
                "peiffer".into(),
                report_entry(rep.peiffer.map_err(|(m, m2)| format!("(m={m}, m'={m2})"))),
            );
            if !rep.all_pass() {
                verdict = Err("crossed-module axioms fail".into());
            }
        }
        "xmod-to-graph" => {
            let x = match runner.fetch(args, "xmod", path)? {
                Object::Xmod(x) => x.clone(),
                other => {
                    return Err(perr(path, format!("expected a crossed module, found {}", other.kind())))
                }
            };
            let (rg, _) = core(path, action::xmod_to_reflexive_graph(&x))?;
            data.insert("c1_order".into(), json!(rg.c1.order()));
            data.insert("groupoid".into(), json!(action::is_groupoid(&rg)));
            bind_obj!(Object::Graph(Box::new(rg)));
        }
        "precrossed-to-graph" => {
            let boundary = match runner.fetch(args, "boundary", path)? {
                Object::Hom(h) => h.clone(),
                other => return Err(perr(path, format!("expected a hom, found {}", other.kind()))),
            };
            let act = match runner.fetch(args, "action", path)? {
                Object::Act(a) => a.clone(),
                other => return Err(perr(path, format!("expected an action, found {}", other.kind()))),
            };
            let pcm = core(path, PrecrossedModule::new(boundary, act))?;
            let (rg, _) = core(path, precrossed_to_reflexive_graph(&pcm))?;
            data.insert("c1_order".into(), json!(rg.c1.order()));
            data.insert("groupoid".into(), json!(action::is_groupoid(&rg)));
            bind_obj!(Object::Graph(Box::new(rg)));
        }
        "is-groupoid" => {
            let rg = match runner.fetch(args, "graph", path)? {
                Object::Graph(g) => (**g).clone(),
                other => return Err(perr(path, format!("expected a graph, found {}", other.kind()))),
            };
            match action::groupoid_witness(&rg) {
                Ok(()) => {
                    data.insert("groupoid".into(), json!(true));
                }
                Err((a, b)) => {
                    data.insert("groupoid".into(), json!(false));
                    data.insert("witness".into(), json!([a, b]));
                }
            }
        }
        "reflect-graph" => {
            let rg = match runner.fetch(args, "graph", path)? {
                Object::Graph(g) => (**g).clone(),
                other => return Err(perr(path, format!("expected a graph, found {}", other.kind()))),
            };
            let (out, q) = core(path, reflect_to_groupoid(&rg))?;
            data.insert("c1_order".into(), json!(out.c1.order()));
            data.insert("kernel_order".into(), json!(q.kernel().order()));
            bind_obj!(Object::Graph(Box::new(out)));
        }
        "normalize-graph" => {
            let rg = match runner.fetch(args, "graph", path)? {
                Object::Graph(g) => (**g).clone(),
                other => return Err(perr(path, format!("expected a graph, found {}", other.kind()))),
            };
            let (cm, _) = core(path, action::normalize_groupoid(&rg))?;
            data.insert("kernel_order".into(), json!(cm.kernel().order()));
            bind_obj!(Object::Xmod(cm));
        }
        "higgins" | "huq" => {
            let m = runner.sub(args, "m", path)?;
            let n = runner.sub(args, "n", path)?;
            let s = if task.op == "higgins" {
                core(path, commutator::higgins_commutator(&m, &n))?
            } else {
                core(path, commutator::huq_commutator(&m, &n))?
            };
            data.insert("subgroup".into(), subgroup_json(&s));
            bind_obj!(Object::Sub(s));
        }
        "ternary" => {
            let k = runner.sub(args, "k", path)?;
            let m = runner.sub(args, "m", path)?;
            let n = runner.sub(args, "n", path)?;
            let s = core(path, commutator::ternary_commutator_normal(&k, &m, &n))?;
            data.insert("subgroup".into(), subgroup_json(&s));
            bind_obj!(Object::Sub(s));
        }
        "nil2" => {
            let g = runner.group(args, "group", path)?;
            let (q, _) = core(path, commutator::nil2_quotient(&g))?;
            data.insert("order".into(), json!(q.order()));
            bind_obj!(Object::Group(q));
        }
        "z-tensor" => {
            let m = runner.group(args, "left", path)?;
            let n = runner.group(args, "right", path)?;
            let t = core(
                path,
                commutator::z_tensor_abelian(&m, &n, runner.config.order_bound),
            )?;
            data.insert("order".into(), json!(t.order()));
            data.insert("invariants".into(), json!(core(path, abelian_invariants(&t))?));
            bind_obj!(Object::Group(t));
        }
        "tensor" => {
            let pair = runner.pair(args, "pair", path)?;
            let t = core(
                path,
                tensor_group_bounded(&pair, runner.config.max_cosets, runner.config.order_bound),
            )?;
            data.insert("order".into(), json!(t.group.order()));
            if t.group.is_abelian() {
                data.insert(
                    "invariants".into(),
                    json!(core(path, abelian_invariants(&t.group))?),
                );
            }
            bind_obj!(Object::Tensor(Box::new(t)));
        }
        "tensor-symmetry" => {
            let pair = runner.pair(args, "pair", path)?;
            let t_mn = core(
                path,
                tensor_group_bounded(&pair, runner.config.max_cosets, runner.config.order_bound),
            )?;
            let t_nm = core(
                path,
                tensor_group_bounded(
                    &pair.swapped(),
                    runner.config.max_cosets,
                    runner.config.order_bound,
                ),
            )?;
            core(path, symmetry_isomorphism(&t_mn, &t_nm))?;
            data.insert("order".into(), json!(t_mn.group.order()));
            data.insert("symmetric".into(), json!(true));
        }
        "own-square" => {
            let t = runner.tensor(args, "tensor", path)?;
            let cs = t.own_square();
            data.insert("p_order".into(), json!(cs.p.order()));
            bind_obj!(Object::Square(Box::new(cs)));
        }
        "intersection-square" => {
            let l = runner.group(args, "parent", path)?;
            let m = runner.sub(args, "m", path)?;
            let n = runner.sub(args, "n", path)?;
            let cs = core(path, intersection_square(&l, &m, &n))?;
            data.insert("p_order".into(), json!(cs.p.order()));
            bind_obj!(Object::Square(Box::new(cs)));
        }
        "verify-xsq" => {
            let mut cs = match runner.fetch(args, "square", path)? {
                Object::Square(s) => (**s).clone(),
                Object::Tensor(t) => t.own_square(),
                other => {
                    return Err(perr(path, format!("expected a square, found {}", other.kind())))
                }
            };
            if let Some(t) = args.get("tamper") {
                let tm = as_obj(t, path)?;
                let i = get(tm, "m", path)?.as_u64().unwrap_or(0) as usize;
                let j = get(tm, "n", path)?.as_u64().unwrap_or(0) as usize;
                let v = get(tm, "value", path)?.as_u64().unwrap_or(0) as u32;
                if i >= cs.h.len() || j >= cs.h[i].len() || v >= cs.p.order() {
                    return Err(perr(path, "tamper indices out of range"));
                }
                cs.h[i][j] = v;
            }
            let rep = verify_crossed_square(&cs);
            for (name, entry) in [
                ("X.0", &rep.x0),
                ("X.1", &rep.x1),
                ("X.2", &rep.x2),
                ("X.3", &rep.x3),
                ("X.4", &rep.x4),
            ] {
                data.insert(name.into(), report_entry(entry.clone()));
            }
            if !rep.all_pass() {
                verdict = Err(format!("failing axioms: {:?}", rep.failing()));
            }
        }
        "universal-morphism" => {
            let t = runner.tensor(args, "tensor", path)?;
            let cs = match runner.fetch(args, "square", path)? {
                Object::Square(s) => (**s).clone(),
                other => {
                    return Err(perr(path, format!("expected a square, found {}", other.kind())))
                }
            };
            let phi = core(path, universal_morphism(&t, &cs))?;
            data.insert("image_order".into(), json!(phi.image_subgroup().order()));
            data.insert("map".into(), json!(phi.image_map()));
        }
        "h-image" => {
            let l = runner.group(args, "parent", path)?;
            let m = runner.sub(args, "m", path)?;
            let n = runner.sub(args, "n", path)?;
            let rep = core(
                path,
                h_image_equals_commutator(&l, &m, &n, runner.config.max_cosets),
            )?;
            data.insert("tensor_order".into(), json!(rep.tensor_order));
            data.insert("image".into(), subgroup_json(&rep.image_in_l));
            data.insert("commutator".into(), subgroup_json(&rep.commutator));
            data.insert("equal".into(), json!(rep.equal));
            if !rep.equal {
                verdict = Err("image of the pairing differs from the commutator".into());
            }
        }
        "box-double" => {
            let l = runner.group(args, "parent", path)?;
            let m = runner.sub(args, "m", path)?;
            let n = runner.sub(args, "n", path)?;
            let b = core(path, box_double_groupoid(&l, &m, &n, runner.config.order_bound))?;
            data.insert("corner_order".into(), json!(b.dg.graph().a.order()));
            bind_obj!(Object::Double(Box::new(b.dg)));
        }
        "box-roundtrip" => {
            let l = runner.group(args, "parent", path)?;
            let m = runner.sub(args, "m", path)?;
            let n = runner.sub(args, "n", path)?;
            core(
                path,
                box_normalization_matches_intersection(&l, &m, &n, runner.config.order_bound),
            )?;
            data.insert("isomorphic".into(), json!(true));
        }
        "normalize-double" => {
            let dg = match runner.fetch(args, "double", path)? {
                Object::Double(d) => (**d).clone(),
                other => {
                    return Err(perr(path, format!("expected a double groupoid, found {}", other.kind())))
                }
            };
            let ns = core(path, normalize_double_groupoid(&dg))?;
            data.insert("p_order".into(), json!(ns.square.p.order()));
            data.insert("m_order".into(), json!(ns.square.m.order()));
            data.insert("n_order".into(), json!(ns.square.n.order()));
            bind_obj!(Object::Square(Box::new(ns.square)));
        }
        "reflect-double" => {
            let dg = match runner.fetch(args, "double", path)? {
                Object::Double(d) => (**d).clone(),
                other => {
                    return Err(perr(path, format!("expected a double groupoid, found {}", other.kind())))
                }
            };
            let (out, q) = core(path, reflect_double_rg(out_graph(&dg)))?;
            data.insert("corner_order".into(), json!(out.graph().a.order()));
            data.insert("kernel_order".into(), json!(q.kernel().order()));
            bind_obj!(Object::Double(Box::new(out)));
        }
        "build-cat2" => {
            let t = runner.tensor(args, "tensor", path)?;
            let cat2 = core(path, build_cat2_group(&t, runner.config.order_bound))?;
            let (to, mo, no, lo) = cat2.corner_orders();
            data.insert("corner_order".into(), json!(cat2.dg.graph().a.order()));
            data.insert(
                "order_product".into(),
                json!(to as u64 * mo as u64 * no as u64 * lo as u64),
            );
            core(path, cat2_normalization_matches_tensor(&cat2))?;
            data.insert("normalization_matches".into(), json!(true));
            bind_obj!(Object::Double(Box::new(cat2.dg)));
        }
        "weak-square" => {
            let t = runner.tensor(args, "tensor", path)?;
            let w = if let Some(sq) = args.get("square") {
                let p = format!("{path}.square");
                let name = as_str(sq, &p)?;
                match runner.names.get(name) {
                    Some(Object::Square(s)) => {
                        core(path, WeakCrossedSquare::from_crossed_square(&t, s))?
                    }
                    Some(other) => {
                        return Err(perr(&p, format!("expected a square, found {}", other.kind())))
                    }
                    None => {
                        return Err(SessionError::UnknownReference {
                            path: p,
                            name: name.to_string(),
                        })
                    }
                }
            } else {
                WeakCrossedSquare::identity(&t)
            };
            data.insert("p_order".into(), json!(w.p.order()));
            bind_obj!(Object::Weak(Box::new(w)));
        }
        "verify-weak" => {
            let w = match runner.fetch(args, "weak", path)? {
                Object::Weak(w) => (**w).clone(),
                other => {
                    return Err(perr(path, format!("expected a weak square, found {}", other.kind())))
                }
            };
            let rep = core(
                path,
                verify_weak_crossed_square(
                    &w,
                    runner.config.max_cosets,
                    limits::DEFAULT_TENSOR_GENERATOR_BOUND,
                ),
            )?;
            for (name, entry) in [
                ("W.1", &rep.w1),
                ("W.2", &rep.w2),
                ("W.3", &rep.w3),
                ("W.4", &rep.w4),
            ] {
                data.insert(name.into(), report_entry(entry.clone()));
            }
            if !rep.all_pass() {
                verdict = Err(format!("failing axioms: {:?}", rep.failing()));
            }
        }
        "promote-weak" => {
            let w = match runner.fetch(args, "weak", path)? {
                Object::Weak(w) => (**w).clone(),
                other => {
                    return Err(perr(path, format!("expected a weak square, found {}", other.kind())))
                }
            };
            let promoted = core(path, promote_weak(&w, runner.config.order_bound))?;
            data.insert("corner_order".into(), json!(promoted.dg.graph().a.order()));
            data.insert(
                "quotient_kernel_order".into(),
                json!(promoted.quotient.kernel().order()),
            );
            bind_obj!(Object::Double(Box::new(promoted.dg)));
        }
        "lie-tensor" => {
            let pair = match runner.fetch(args, "pair", path)? {
                Object::LiePair(p) => p.clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie pair, found {}", other.kind())))
                }
            };
            let t = core(path, lie_tensor(&pair))?;
            data.insert("dim".into(), json!(t.dim));
            bind_obj!(Object::LieTensor(Box::new(t)));
        }
        "verify-lie-action" => {
            let a = match runner.fetch(args, "action", path)? {
                Object::LieAct(a) => a.clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie action, found {}", other.kind())))
                }
            };
            let rep = lie::verify_lie_action(a.acting(), a.acted(), a.matrices());
            data.insert(
                "derivation".into(),
                report_entry(rep.derivation.map_err(|w| format!("{w:?}"))),
            );
            data.insert(
                "homomorphism".into(),
                report_entry(rep.homomorphism.map_err(|w| format!("{w:?}"))),
            );
            if !rep.all_pass() {
                verdict = Err("action laws fail".into());
            }
        }
        "verify-lie-xmod" => {
            let x = match runner.fetch(args, "xmod", path)? {
                Object::LieXmod(x) => x.clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie crossed module, found {}", other.kind())))
                }
            };
            let rep = lie::verify_lie_xmod(x.boundary(), x.action());
            data.insert(
                "equivariance".into(),
                report_entry(rep.equivariance.map_err(|w| format!("{w:?}"))),
            );
            data.insert(
                "peiffer".into(),
                report_entry(rep.peiffer.map_err(|w| format!("{w:?}"))),
            );
            if !rep.all_pass() {
                verdict = Err("crossed-module laws fail".into());
            }
        }
        "verify-lie-pairing" => {
            let pair = match runner.fetch(args, "pair", path)? {
                Object::LiePair(p) => p.clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie pair, found {}", other.kind())))
                }
            };
            let p_alg = match runner.fetch(args, "into", path)? {
                Object::LieAlg(a) => a.clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie algebra, found {}", other.kind())))
                }
            };
            let values = get(args, "values", path)?
                .as_array()
                .ok_or_else(|| perr(path, "values must be an array"))?
                .iter()
                .map(|row| as_mat(row, path))
                .collect::<Result<Vec<_>, _>>()?;
            let h = LiePairing { p: p_alg, values };
            let rep = verify_lie_pairing(&pair, &h);
            data.insert(
                "axiom1".into(),
                report_entry(rep.axiom1.map_err(|w| format!("{w:?}"))),
            );
            data.insert(
                "axiom2".into(),
                report_entry(rep.axiom2.map_err(|w| format!("{w:?}"))),
            );
            data.insert(
                "axiom3".into(),
                report_entry(rep.axiom3.map_err(|w| format!("{w:?}"))),
            );
            if !rep.all_pass() {
                verdict = Err("pairing axioms fail".into());
            }
        }
        "universal-lie-morphism" => {
            let t = match runner.fetch(args, "tensor", path)? {
                Object::LieTensor(t) => (**t).clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie tensor, found {}", other.kind())))
                }
            };
            let p_alg = match runner.fetch(args, "into", path)? {
                Object::LieAlg(a) => a.clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie algebra, found {}", other.kind())))
                }
            };
            let values = get(args, "values", path)?
                .as_array()
                .ok_or_else(|| perr(path, "values must be an array"))?
                .iter()
                .map(|row| as_mat(row, path))
                .collect::<Result<Vec<_>, _>>()?;
            let h = LiePairing { p: p_alg, values };
            let phi = core(path, universal_lie_morphism(&t, &h))?;
            data.insert("zero".into(), json!(lie::mat_is_zero(&phi)));
            data.insert(
                "matrix".into(),
                json!(phi
                    .iter()
                    .map(|row| row.iter().map(rat_to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()),
            );
        }
        "verify-lie-xsq" => {
            let t = match runner.fetch(args, "tensor", path)? {
                Object::LieTensor(t) => (**t).clone(),
                other => {
                    return Err(perr(path, format!("expected a Lie tensor, found {}", other.kind())))
                }
            };
            let mut cs = t.own_square();
            if let Some(tm) = args.get("tamper") {
                let tm = as_obj(tm, path)?;
                let i = get(tm, "m", path)?.as_u64().unwrap_or(0) as usize;
                let j = get(tm, "n", path)?.as_u64().unwrap_or(0) as usize;
                let value = as_rat_vec(get(tm, "value", path)?, path)?;
                if i >= cs.h.len() || j >= cs.h[i].len() || value.len() != cs.p.dim() {
                    return Err(perr(path, "tamper indices out of range"));
                }
                cs.h[i][j] = value;
            }
            let rep = verify_lie_crossed_square(&cs);
            for (name, entry) in [
                ("X.0", &rep.x0),
                ("X.1", &rep.x1),
                ("X.2", &rep.x2),
                ("X.3", &rep.x3),
                ("X.4", &rep.x4),
            ] {
                data.insert(name.into(), report_entry(entry.clone()));
            }
            if !rep.all_pass() {
                verdict = Err(format!("failing axioms: {:?}", rep.failing()));
            }
        }
        other => return Err(perr(path, format!("unknown op `{other}`"))),
    }
    Ok(TaskOutcome {
        verdict,
        data,
        bind,
    })
}

fn out_graph(dg: &DoubleGroupoid) -> &crate::double::DoubleReflexiveGraph {
    dg.graph()
}

// ---------------------------------------------------------------- emitting

pub fn report_to_json(report: &Report) -> Json {
    let tasks: Vec<Json> = report
        .tasks
        .iter()
        .map(|t| {
            let mut m = Map::new();
            m.insert("id".into(), json!(t.id));
            m.insert("op".into(), json!(t.op));
            m.insert("status".into(), json!(t.status));
            if let Some(c) = &t.code {
                m.insert("code".into(), json!(c));
            }
            if let Some(msg) = &t.message {
                m.insert("message".into(), json!(msg));
            }
            m.insert("data".into(), json!(t.data));
            if let Some(ms) = t.time_ms {
                m.insert("time_ms".into(), json!(ms));
            }
            Json::Object(m)
        })
        .collect();
    json!({
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "config": {
            "max_cosets": report.config.max_cosets,
            "order_bound": report.config.order_bound,
            "iso_order_bound": report.config.iso_order_bound,
            "no_timings": report.config.no_timings,
        },
        "tasks": tasks,
        "all_passed": report.all_passed(),
    })
}

/// Render a report as bytes; stable field ordering in both formats.
pub fn emit_report(report: &Report, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report_to_json(report))
                .expect("report serialises");
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("{TOOL_NAME} {TOOL_VERSION}\n"));
            out.push_str(&format!(
                "config: max_cosets={} order_bound={} iso_order_bound={}\n",
                report.config.max_cosets, report.config.order_bound, report.config.iso_order_bound
            ));
            for t in &report.tasks {
                out.push_str(&format!("[{}] {} {}", t.status, t.id, t.op));
                if let Some(ms) = t.time_ms {
                    out.push_str(&format!(" ({ms} ms)"));
                }
                out.push('\n');
                if let Some(msg) = &t.message {
                    out.push_str(&format!("    {}\n", msg));
                }
                for (k, v) in &t.data {
                    out.push_str(&format!("    {k} = {v}\n"));
                }
            }
            out.push_str(&format!(
                "result: {}\n",
                if report.all_passed() { "all tasks passed" } else { "FAILURES" }
            ));
            out.into_bytes()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// The axiom list each verifier enforces, for `explain`.
pub fn explain(op: &str) -> Option<&'static str> {
    match op {
        "verify-xmod" => Some(
            "verify-xmod checks, exhaustively over all elements:\n\
             - equivariance: d(l.m) = l d(m) l^-1\n\
             - Peiffer: (d m).m' = m m' m^-1",
        ),
        "verify-xsq" => Some(
            "verify-xsq checks, exhaustively over all elements:\n\
             - X.0 h(mm',n) = (m.h(m',n)) h(m,n) and h(m,nn') = h(m,n) (n.h(m,n'))\n\
             - X.1 p_M, p_N preserve the L-actions; mu, nu and the diagonal are crossed modules\n\
             - X.2 p_M(h(m,n)) = m (n.m)^-1 and p_N(h(m,n)) = (m.n) n^-1\n\
             - X.3 h(p_M(p),n) = p (n.p)^-1 and h(m,p_N(p)) = (m.p) p^-1\n\
             - X.4 l.h(m,n) = h(l.m, l.n)",
        ),
        "verify-weak" => Some(
            "verify-weak checks:\n\
             - W.1 p_M, p_N equivariant; mu, nu and the diagonal are crossed modules\n\
             - W.2 p_M h = pi_M and p_N h = pi_N on pure tensors\n\
             - W.3 h (p_M ⊗ 1) = pi_P on P⊗N and h (1 ⊗ p_N) = pi_P on M⊗P\n\
             - W.4 h(l.t) = l.h(t) for every base element and tensor element",
        ),
        "verify-lie-action" => Some(
            "verify-lie-action checks on basis elements:\n\
             - each map is a derivation: l.[m,m'] = [l.m, m'] + [m, l.m']\n\
             - the assignment is a homomorphism: [l,l']. = l.(l'.) - l'.(l.)",
        ),
        "verify-lie-xmod" => Some(
            "verify-lie-xmod checks on basis elements:\n\
             - equivariance: d(l.m) = [l, d m]\n\
             - Peiffer: (d m).m' = [m, m']",
        ),
        "verify-lie-pairing" => Some(
            "verify-lie-pairing checks on basis elements:\n\
             - h([m,m'],n) = h(m, m'.n) - h(m', m.n)\n\
             - h(m,[n,n']) = h(n'.m, n) - h(n.m, n')\n\
             - h(n.m, m'.n') = -[h(m,n), h(m',n')]",
        ),
        "verify-lie-xsq" => Some(
            "verify-lie-xsq checks on basis elements:\n\
             - X.0 h bilinear; h([m,m'],n) = m.h(m',n) - m'.h(m,n), dually in n\n\
             - X.1 p_M, p_N equivariant; mu, nu and the diagonal are crossed modules\n\
             - X.2 p_M(h(m,n)) = -(n.m) and p_N(h(m,n)) = m.n\n\
             - X.3 h(p_M(p),n) = -(n.p) and h(m,p_N(p)) = m.p\n\
             - X.4 l.h(m,n) = h(l.m, n) + h(m, l.n)",
        ),
        "is-groupoid" => Some(
            "is-groupoid checks that the two kernels commute elementwise: [K_d, K_c] = 1",
        ),
        "h-image" => Some(
            "h-image computes the tensor of two normal inclusions, maps it to the\n\
             intersection square, and compares the image with the commutator [M, N]",
        ),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_json(text: &str) -> (Report, Json) {
        let config = Config {
            no_timings: true,
            ..Config::default()
        };
        let session = parse_session(text, &config).unwrap();
        let report = run(&session, &config);
        let j = report_to_json(&report);
        (report, j)
    }

    #[test]
    fn empty_session() {
        let (report, _) = run_json(r#"{"declare": {}, "tasks": []}"#);
        assert!(report.all_passed());
        assert!(report.tasks.is_empty());
    }

    #[test]
    fn dangling_reference_is_reported() {
        let config = Config::default();
        let err = parse_session(
            r#"{"declare": {"h": {"kind": "hom", "domain": "nope", "codomain": "nope", "map": []}}}"#,
            &config,
        )
        .unwrap_err();
        assert!(matches!(err, SessionError::UnknownReference { .. }));
    }

    #[test]
    fn zero_tensor_session() {
        let text = r#"{
            "declare": {
                "one": {"kind": "standard", "spec": "trivial"},
                "c2": {"kind": "standard", "spec": "cyclic 2"},
                "mu": {"kind": "xmod", "variant": "zero", "kernel": "one", "base": "one"},
                "nu": {"kind": "xmod", "variant": "zero", "kernel": "c2", "base": "one"},
                "p": {"kind": "pair", "mu": "mu", "nu": "nu"}
            },
            "tasks": [
                {"op": "tensor", "id": "t", "args": {"pair": "p"}}
            ]
        }"#;
        let (report, j) = run_json(text);
        assert!(report.all_passed());
        assert_eq!(j["tasks"][0]["data"]["order"], json!(1));
    }

    #[test]
    fn corrupted_square_session() {
        let text = r#"{
            "declare": {
                "s3": {"kind": "standard", "spec": "symmetric 3"},
                "a3": {"kind": "subgroup", "parent": "s3", "gens": [4]},
                "m": {"kind": "xmod", "variant": "inclusion", "parent": "s3", "subgroup": "a3"},
                "p": {"kind": "pair", "mu": "m", "nu": "m"}
            },
            "tasks": [
                {"op": "intersection-square", "id": "sq", "args": {"parent": "s3", "m": "a3", "n": "a3", "as": "thesquare"}},
                {"op": "verify-xsq", "id": "good", "args": {"square": "thesquare"}},
                {"op": "verify-xsq", "id": "bad", "args": {"square": "thesquare", "tamper": {"m": 1, "n": 2, "value": 1}}}
            ]
        }"#;
        let (report, j) = run_json(text);
        assert_eq!(report.tasks[1].status, "ok");
        assert_eq!(report.tasks[2].status, "fail");
        assert_eq!(j["tasks"][2]["code"], json!("VerifierFailed"));
        // some axiom carries a witness
        let data = j["tasks"][2]["data"].as_object().unwrap();
        assert!(data.values().any(|v| v["pass"] == json!(false)));
    }

    #[test]
    fn lie_tensor_session() {
        let text = r#"{
            "declare": {
                "sl2": {"kind": "lie", "constants": [
                    [["0","0","0"], ["0","0","1"], ["-2","0","0"]],
                    [["0","0","-1"], ["0","0","0"], ["0","2","0"]],
                    [["2","0","0"], ["0","-2","0"], ["0","0","0"]]
                ]},
                "adj": {"kind": "lie-xmod", "variant": "identity", "algebra": "sl2"},
                "p": {"kind": "lie-pair", "mu": "adj", "nu": "adj"}
            },
            "tasks": [
                {"op": "lie-tensor", "id": "t", "args": {"pair": "p", "as": "T"}},
                {"op": "verify-lie-xsq", "id": "sq", "args": {"tensor": "T"}}
            ]
        }"#;
        let (report, j) = run_json(text);
        assert!(report.all_passed(), "{j}");
        assert_eq!(j["tasks"][0]["data"]["dim"], json!(3));
    }

    #[test]
    fn determinism_of_report_bytes() {
        let text = r#"{
            "declare": {
                "d4": {"kind": "standard", "spec": "dihedral 4"},
                "r": {"kind": "subgroup", "parent": "d4", "gens": [1]},
                "rs": {"kind": "subgroup", "parent": "d4", "gens": [2, 4]}
            },
            "tasks": [
                {"op": "h-image", "id": "h", "args": {"parent": "d4", "m": "r", "n": "rs"}},
                {"op": "higgins", "id": "c", "args": {"m": "r", "n": "rs"}}
            ]
        }"#;
        let config = Config {
            no_timings: true,
            ..Config::default()
        };
        let s1 = parse_session(text, &config).unwrap();
        let b1 = emit_report(&run(&s1, &config), ReportFormat::Json);
        let s2 = parse_session(text, &config).unwrap();
        let b2 = emit_report(&run(&s2, &config), ReportFormat::Json);
        assert_eq!(b1, b2);
        let (report, _) = run_json(text);
        assert!(report.all_passed());
    }

    #[test]
    fn text_report_contains_verdicts() {
        let text = r#"{
            "declare": {"c2": {"kind": "standard", "spec": "cyclic 2"}},
            "tasks": [{"op": "order", "id": "o", "args": {"group": "c2"}}]
        }"#;
        let config = Config {
            no_timings: true,
            ..Config::default()
        };
        let session = parse_session(text, &config).unwrap();
        let report = run(&session, &config);
        let text_bytes = emit_report(&report, ReportFormat::Text);
        let rendered = String::from_utf8(text_bytes).unwrap();
        assert!(rendered.contains("[ok] o order"));
        assert!(rendered.contains("all tasks passed"));
        // json roundtrips through parse
        let json_bytes = emit_report(&report, ReportFormat::Json);
        let parsed: Json = serde_json::from_slice(&json_bytes).unwrap();
        assert_eq!(parsed["all_passed"], json!(true));
    }

    #[test]
    fn task_errors_are_captured_not_fatal() {
        let text = r#"{
            "declare": {
                "s3": {"kind": "standard", "spec": "symmetric 3"},
                "t": {"kind": "subgroup", "parent": "s3", "gens": [1]}
            },
            "tasks": [
                {"op": "quotient", "id": "bad", "args": {"group": "s3", "by": "t"}},
                {"op": "order", "id": "still-runs", "args": {"group": "s3"}}
            ]
        }"#;
        let (report, j) = run_json(text);
        assert!(!report.all_passed());
        assert_eq!(report.tasks[0].status, "error");
        assert!(j["tasks"][0]["path"].is_null());
        assert_eq!(j["tasks"][0]["code"].as_str().unwrap(), "ValidationError");
        assert_eq!(report.tasks[1].status, "ok");
    }

    #[test]
    fn every_op_runs_through_a_session() {
        // one session touching every task op at least once
        let text = r#"{
            "declare": {
                "one": {"kind": "standard", "spec": "trivial"},
                "c2": {"kind": "standard", "spec": "cyclic 2"},
                "c3": {"kind": "standard", "spec": "cyclic 3"},
                "c6": {"kind": "standard", "spec": "cyclic 6"},
                "s3": {"kind": "standard", "spec": "symmetric 3"},
                "d4": {"kind": "standard", "spec": "dihedral 4"},
                "a3": {"kind": "subgroup", "parent": "s3", "gens": [4]},
                "r": {"kind": "subgroup", "parent": "d4", "gens": [1]},
                "rs": {"kind": "subgroup", "parent": "d4", "gens": [2, 4]},
                "inv": {"kind": "action", "acting": "c2", "acted": "c3", "perms": [[0, 1, 2], [0, 2, 1]]},
                "zero_s3": {"kind": "hom", "domain": "s3", "codomain": "one", "map": [0, 0, 0, 0, 0, 0]},
                "triv_on_s3": {"kind": "action", "acting": "one", "acted": "s3", "perms": "trivial"},
                "incl": {"kind": "xmod", "variant": "inclusion", "parent": "s3", "subgroup": "a3"},
                "idm": {"kind": "xmod", "variant": "identity", "group": "s3"},
                "pair": {"kind": "pair", "mu": "incl", "nu": "incl"},
                "ab2": {"kind": "lie", "constants": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]},
                "l0": {"kind": "lie", "constants": []},
                "zm": {"kind": "lie-xmod", "variant": "zero", "kernel": "ab2", "base": "l0"},
                "lpair": {"kind": "lie-pair", "mu": "zm", "nu": "zm"},
                "triv_lie_act": {"kind": "lie-action", "acting": "l0", "acted": "ab2", "rho": "trivial"}
            },
            "tasks": [
                {"op": "direct-product", "id": "dp", "args": {"left": "c2", "right": "c3", "as": "c6x"}},
                {"op": "find-isomorphism", "id": "crt", "args": {"left": "c6", "right": "c6x"}},
                {"op": "abelian-invariants", "id": "inv6", "args": {"group": "c6x"}},
                {"op": "subgroup-closure", "id": "sc", "args": {"group": "s3", "gens": [4], "as": "a3b"}},
                {"op": "normal-closure", "id": "nc", "args": {"group": "s3", "gens": [1]}},
                {"op": "semidirect", "id": "sd", "args": {"action": "inv"}},
                {"op": "precrossed-to-graph", "id": "pg", "args": {"boundary": "zero_s3", "action": "triv_on_s3", "as": "G"}},
                {"op": "is-groupoid", "id": "ig", "args": {"graph": "G"}},
                {"op": "reflect-graph", "id": "rg", "args": {"graph": "G", "as": "G2"}},
                {"op": "is-groupoid", "id": "ig2", "args": {"graph": "G2"}},
                {"op": "huq", "id": "hq", "args": {"m": "r", "n": "rs"}},
                {"op": "ternary", "id": "tern", "args": {"k": "a3", "m": "a3", "n": "a3"}},
                {"op": "tensor", "id": "t", "args": {"pair": "pair", "as": "T"}},
                {"op": "own-square", "id": "os", "args": {"tensor": "T", "as": "S"}},
                {"op": "universal-morphism", "id": "um", "args": {"tensor": "T", "square": "S"}},
                {"op": "box-double", "id": "bd", "args": {"parent": "s3", "m": "a3", "n": "a3", "as": "B"}},
                {"op": "normalize-double", "id": "nd", "args": {"double": "B"}},
                {"op": "verify-lie-action", "id": "vla", "args": {"action": "triv_lie_act"}},
                {"op": "lie-tensor", "id": "lt", "args": {"pair": "lpair", "as": "LT"}},
                {"op": "verify-lie-pairing", "id": "vlp", "args": {"pair": "lpair", "into": "ab2",
                    "values": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]}},
                {"op": "universal-lie-morphism", "id": "ulm", "args": {"tensor": "LT", "into": "ab2",
                    "values": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]}}
            ]
        }"#;
        let (report, j) = run_json(text);
        for task in &report.tasks {
            assert_eq!(task.status, "ok", "{}: {:?}", task.id, task.message);
        }
        assert_eq!(j["tasks"][1]["data"]["isomorphic"], json!(true));
        assert_eq!(j["tasks"][2]["data"]["invariants"], json!([6]));
        assert_eq!(j["tasks"][4]["data"]["subgroup"]["order"], json!(6));
        assert_eq!(j["tasks"][5]["data"]["order"], json!(6));
        assert_eq!(j["tasks"][7]["data"]["groupoid"], json!(false));
        assert_eq!(j["tasks"][9]["data"]["groupoid"], json!(true));
        assert_eq!(j["tasks"][10]["data"]["subgroup"]["order"], json!(2));
        assert_eq!(j["tasks"][11]["data"]["subgroup"]["order"], json!(1));
        assert_eq!(j["tasks"][14]["data"]["image_order"], json!(3));
        assert_eq!(j["tasks"][15]["data"]["corner_order"], json!(162));
        assert_eq!(j["tasks"][16]["data"]["p_order"], json!(3));
        assert_eq!(j["tasks"][18]["data"]["dim"], json!(4));
        assert_eq!(j["tasks"][20]["data"]["zero"], json!(true));
    }

    #[test]
    fn explain_covers_verifiers() {
        for op in [
            "verify-xmod",
            "verify-xsq",
            "verify-weak",
            "verify-lie-action",
            "verify-lie-xmod",
            "verify-lie-pairing",
            "verify-lie-xsq",
            "is-groupoid",
            "h-image",
        ] {
            assert!(explain(op).is_some(), "{op}");
        }
        assert!(explain("order").is_none());
    }
}
