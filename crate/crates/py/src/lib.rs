//! Python bindings: the main carriers (groups, subgroups, crossed modules,
//! tensors, Lie algebras) and the operations and verifiers over them.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use xsq_core::action::{self, CrossedModule};
use xsq_core::commutator;
use xsq_core::double::{build_cat2_group, cat2_normalization_matches_tensor};
use xsq_core::fp;
use xsq_core::group::{self, StandardGroup};
use xsq_core::lie;
use xsq_core::limits;
use xsq_core::session;
use xsq_core::square;
use xsq_core::tensor;
use xsq_core::weak;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite group held as a validated multiplication table.
#[pyclass(frozen, skip_from_py_object, name = "Group")]
#[derive(Clone)]
struct PyGroup(group::Group);

#[pymethods]
impl PyGroup {
    fn order(&self) -> u32 {
        self.0.order()
    }

    fn identity(&self) -> u32 {
        self.0.identity()
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        if a >= self.0.order() || b >= self.0.order() {
            return Err(err("element index out of range"));
        }
        Ok(self.0.mul(a, b))
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        if a >= self.0.order() {
            return Err(err("element index out of range"));
        }
        Ok(self.0.inv(a))
    }

    fn element_order(&self, a: u32) -> PyResult<u32> {
        if a >= self.0.order() {
            return Err(err("element index out of range"));
        }
        Ok(self.0.element_order(a))
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn abelian_invariants(&self) -> PyResult<Vec<u64>> {
        group::abelian_invariants(&self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        match self.0.name() {
            Some(n) => format!("Group(order={}, name={n})", self.0.order()),
            None => format!("Group(order={})", self.0.order()),
        }
    }
}

#[pyclass(frozen, skip_from_py_object, name = "Subgroup")]
#[derive(Clone)]
struct PySubgroup(group::Subgroup);

#[pymethods]
impl PySubgroup {
    fn order(&self) -> u32 {
        self.0.order()
    }

    fn elements(&self) -> Vec<u32> {
        self.0.elements().to_vec()
    }

    fn is_normal(&self) -> bool {
        self.0.is_normal()
    }

    fn __repr__(&self) -> String {
        format!("Subgroup(order={})", self.0.order())
    }
}

#[pyclass(frozen, skip_from_py_object, name = "CrossedModule")]
#[derive(Clone)]
struct PyCrossedModule(CrossedModule);

#[pymethods]
impl PyCrossedModule {
    fn kernel_order(&self) -> u32 {
        self.0.kernel().order()
    }

    fn base_order(&self) -> u32 {
        self.0.base().order()
    }

    fn __repr__(&self) -> String {
        format!(
            "CrossedModule(kernel={}, base={})",
            self.0.kernel().order(),
            self.0.base().order()
        )
    }
}

#[pyclass(frozen, skip_from_py_object, name = "Tensor")]
#[derive(Clone)]
struct PyTensor(tensor::TensorGroup);

#[pymethods]
impl PyTensor {
    fn order(&self) -> u32 {
        self.0.group.order()
    }

    fn group(&self) -> PyGroup {
        PyGroup(self.0.group.clone())
    }

    /// Element index of the pure tensor m ⊗ n.
    fn pure(&self, m: u32, n: u32) -> PyResult<u32> {
        if m >= self.0.pair.m().order() || n >= self.0.pair.n().order() {
            return Err(err("element index out of range"));
        }
        Ok(self.0.pure(m, n))
    }

    fn pi_m(&self, t: u32) -> PyResult<u32> {
        if t >= self.0.group.order() {
            return Err(err("element index out of range"));
        }
        Ok(self.0.pi_m.apply(t))
    }

    fn pi_n(&self, t: u32) -> PyResult<u32> {
        if t >= self.0.group.order() {
            return Err(err("element index out of range"));
        }
        Ok(self.0.pi_n.apply(t))
    }

    /// Per-axiom verdicts of the crossed-square verifier on the own square.
    fn verify_square<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = square::verify_crossed_square(&self.0.own_square());
        let d = PyDict::new(py);
        for (k, v) in [
            ("X.0", report.x0),
            ("X.1", report.x1),
            ("X.2", report.x2),
            ("X.3", report.x3),
            ("X.4", report.x4),
        ] {
            d.set_item(k, v.is_ok())?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Tensor(order={})", self.0.group.order())
    }
}

#[pyclass(frozen, skip_from_py_object, name = "LieAlgebra")]
#[derive(Clone)]
struct PyLieAlgebra(lie::Lie);

#[pymethods]
impl PyLieAlgebra {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra(dim={})", self.0.dim())
    }
}

#[pyclass(frozen, skip_from_py_object, name = "LieTensor")]
#[derive(Clone)]
struct PyLieTensor(lie::LieTensor);

#[pymethods]
impl PyLieTensor {
    fn dim(&self) -> usize {
        self.0.dim
    }

    /// Coordinates of the class of e_i ⊗ f_j, as "p/q" strings.
    fn pure(&self, i: usize, j: usize) -> PyResult<Vec<String>> {
        if i >= self.0.pair.m().dim() || j >= self.0.pair.n().dim() {
            return Err(err("basis index out of range"));
        }
        Ok(self.0.pure(i, j).iter().map(lie::rat_to_string).collect())
    }

    fn verify_square<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = lie::verify_lie_crossed_square(&self.0.own_square());
        let d = PyDict::new(py);
        for (k, v) in [
            ("X.0", report.x0),
            ("X.1", report.x1),
            ("X.2", report.x2),
            ("X.3", report.x3),
            ("X.4", report.x4),
        ] {
            d.set_item(k, v.is_ok())?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("LieTensor(dim={})", self.0.dim)
    }
}

/// One of: "trivial", "klein", "quaternion8", "cyclic n", "dihedral n",
/// "symmetric n".
#[pyfunction]
fn standard_group(spec: &str) -> PyResult<PyGroup> {
    let parsed = StandardGroup::parse(spec)
        .ok_or_else(|| err(format!("unknown standard group `{spec}`")))?;
    Ok(PyGroup(group::standard_group(&parsed).map_err(err)?))
}

/// Validate a raw multiplication table into a group.
#[pyfunction]
fn build_group(table: Vec<Vec<u32>>) -> PyResult<PyGroup> {
    Ok(PyGroup(group::build_group(&table, None).map_err(err)?))
}

#[pyfunction]
fn direct_product(a: &PyGroup, b: &PyGroup) -> PyResult<PyGroup> {
    Ok(PyGroup(group::direct_product(&a.0, &b.0).map_err(err)?.group))
}

/// Enumerate a presentation; relators are words of signed 1-based indices.
#[pyfunction]
#[pyo3(signature = (ngens, relators, max_cosets = limits::DEFAULT_MAX_COSETS))]
fn todd_coxeter(ngens: usize, relators: Vec<Vec<i32>>, max_cosets: usize) -> PyResult<PyGroup> {
    let p = fp::Presentation::new(ngens, relators).map_err(err)?;
    Ok(PyGroup(fp::todd_coxeter(&p, max_cosets).map_err(err)?.group))
}

#[pyfunction]
fn subgroup_closure(g: &PyGroup, gens: Vec<u32>) -> PyResult<PySubgroup> {
    Ok(PySubgroup(group::subgroup_closure(&g.0, &gens).map_err(err)?))
}

#[pyfunction]
fn normal_closure(g: &PyGroup, gens: Vec<u32>) -> PyResult<PySubgroup> {
    Ok(PySubgroup(group::normal_closure(&g.0, &gens).map_err(err)?))
}

#[pyfunction]
fn higgins_commutator(m: &PySubgroup, n: &PySubgroup) -> PyResult<PySubgroup> {
    Ok(PySubgroup(commutator::higgins_commutator(&m.0, &n.0).map_err(err)?))
}

#[pyfunction]
fn are_isomorphic(a: &PyGroup, b: &PyGroup) -> PyResult<bool> {
    Ok(group::find_isomorphism(&a.0, &b.0).map_err(err)?.is_some())
}

#[pyfunction]
fn identity_xmod(g: &PyGroup) -> PyCrossedModule {
    PyCrossedModule(CrossedModule::identity(&g.0))
}

#[pyfunction]
fn inclusion_xmod(parent: &PyGroup, sub: &PySubgroup) -> PyResult<PyCrossedModule> {
    Ok(PyCrossedModule(
        CrossedModule::inclusion(&parent.0, &sub.0).map_err(err)?,
    ))
}

#[pyfunction]
fn zero_xmod(kernel: &PyGroup, base: &PyGroup) -> PyResult<PyCrossedModule> {
    Ok(PyCrossedModule(
        CrossedModule::zero(&kernel.0, &base.0).map_err(err)?,
    ))
}

/// The non-abelian tensor product of two coterminal crossed modules.
#[pyfunction]
#[pyo3(signature = (mu, nu, max_cosets = limits::DEFAULT_MAX_COSETS))]
fn tensor_group(mu: &PyCrossedModule, nu: &PyCrossedModule, max_cosets: usize) -> PyResult<PyTensor> {
    let pair = tensor::CompatiblePair::new(mu.0.clone(), nu.0.clone()).map_err(err)?;
    Ok(PyTensor(
        tensor::tensor_group(&pair, max_cosets).map_err(err)?,
    ))
}

/// Compare the image of the pairing into the intersection square with the
/// commutator `[M, N]`.
#[pyfunction]
#[pyo3(signature = (l, m, n, max_cosets = limits::DEFAULT_MAX_COSETS))]
fn h_image<'py>(
    py: Python<'py>,
    l: &PyGroup,
    m: &PySubgroup,
    n: &PySubgroup,
    max_cosets: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let report = tensor::h_image_equals_commutator(&l.0, &m.0, &n.0, max_cosets).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("tensor_order", report.tensor_order)?;
    d.set_item("image_order", report.image_in_l.order())?;
    d.set_item("commutator_order", report.commutator.order())?;
    d.set_item("equal", report.equal)?;
    Ok(d)
}

/// Rebuild the corner group of the tensor's double groupoid and check that
/// its normalisation matches the tensor's own crossed square.
#[pyfunction]
fn build_cat2<'py>(py: Python<'py>, t: &PyTensor) -> PyResult<Bound<'py, PyDict>> {
    let cat2 = build_cat2_group(&t.0, limits::DEFAULT_ORDER_BOUND).map_err(err)?;
    cat2_normalization_matches_tensor(&cat2).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("corner_order", cat2.dg.graph().a.order())?;
    d.set_item("normalization_matches", true)?;
    Ok(d)
}

/// Verify the weak crossed-square axioms for the tensor's own square.
#[pyfunction]
fn verify_weak_identity<'py>(py: Python<'py>, t: &PyTensor) -> PyResult<Bound<'py, PyDict>> {
    let w = weak::WeakCrossedSquare::identity(&t.0);
    let report = weak::verify_weak_crossed_square(
        &w,
        limits::DEFAULT_MAX_COSETS,
        limits::DEFAULT_TENSOR_GENERATOR_BOUND,
    )
    .map_err(err)?;
    let d = PyDict::new(py);
    for (k, v) in [
        ("W.1", report.w1),
        ("W.2", report.w2),
        ("W.3", report.w3),
        ("W.4", report.w4),
    ] {
        d.set_item(k, v.is_ok())?;
    }
    Ok(d)
}

/// Build a Lie algebra from structure constants; entries are integers or
/// "p/q" strings.
#[pyfunction]
fn lie_algebra(constants: Vec<Vec<Vec<String>>>) -> PyResult<PyLieAlgebra> {
    let parsed = constants
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|s| lie::parse_rat(s)).collect())
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<_>>>, _>>()
        .map_err(err)?;
    Ok(PyLieAlgebra(lie::build_lie_algebra(parsed).map_err(err)?))
}

#[pyfunction]
fn sl2() -> PyLieAlgebra {
    PyLieAlgebra(lie::sl2())
}

/// The Lie tensor of the identity (adjoint) crossed module on an algebra.
#[pyfunction]
fn lie_tensor_adjoint(g: &PyLieAlgebra) -> PyResult<PyLieTensor> {
    let cm = lie::LieCrossedModule::identity(&g.0);
    let pair = lie::LiePair::new(cm.clone(), cm).map_err(err)?;
    Ok(PyLieTensor(lie::lie_tensor(&pair).map_err(err)?))
}

/// The Lie tensor of two abelian algebras with trivial actions.
#[pyfunction]
fn lie_tensor_abelian(dim_m: usize, dim_n: usize) -> PyResult<PyLieTensor> {
    let m = lie::LieAlgebra::abelian(dim_m);
    let n = lie::LieAlgebra::abelian(dim_n);
    let l = lie::LieAlgebra::abelian(0);
    let pair = lie::LiePair::new(
        lie::LieCrossedModule::zero(&m, &l).map_err(err)?,
        lie::LieCrossedModule::zero(&n, &l).map_err(err)?,
    )
    .map_err(err)?;
    Ok(PyLieTensor(lie::lie_tensor(&pair).map_err(err)?))
}

/// Parse and run a session document; returns the JSON report as a string.
#[pyfunction]
#[pyo3(signature = (text, max_cosets = limits::DEFAULT_MAX_COSETS, order_bound = limits::DEFAULT_ORDER_BOUND, no_timings = true))]
fn run_session(
    text: &str,
    max_cosets: usize,
    order_bound: u64,
    no_timings: bool,
) -> PyResult<String> {
    let config = session::Config {
        max_cosets,
        order_bound,
        no_timings,
        ..session::Config::default()
    };
    let parsed = session::parse_session(text, &config).map_err(err)?;
    let report = session::run(&parsed, &config);
    let bytes = session::emit_report(&report, session::ReportFormat::Json);
    String::from_utf8(bytes).map_err(err)
}

#[pyfunction]
fn verify_xmod<'py>(py: Python<'py>, xm: &PyCrossedModule) -> PyResult<Bound<'py, PyDict>> {
    let report = action::verify_crossed_module(xm.0.boundary(), xm.0.action());
    let d = PyDict::new(py);
    d.set_item("precrossed", report.precrossed.is_ok())?;
    d.set_item("peiffer", report.peiffer.is_ok())?;
    Ok(d)
}

#[pymodule]
fn xsq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PySubgroup>()?;
    m.add_class::<PyCrossedModule>()?;
    m.add_class::<PyTensor>()?;
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyLieTensor>()?;
    m.add_function(wrap_pyfunction!(standard_group, m)?)?;
    m.add_function(wrap_pyfunction!(build_group, m)?)?;
    m.add_function(wrap_pyfunction!(direct_product, m)?)?;
    m.add_function(wrap_pyfunction!(todd_coxeter, m)?)?;
    m.add_function(wrap_pyfunction!(subgroup_closure, m)?)?;
    m.add_function(wrap_pyfunction!(normal_closure, m)?)?;
    m.add_function(wrap_pyfunction!(higgins_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(are_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(identity_xmod, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion_xmod, m)?)?;
    m.add_function(wrap_pyfunction!(zero_xmod, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_group, m)?)?;
    m.add_function(wrap_pyfunction!(h_image, m)?)?;
    m.add_function(wrap_pyfunction!(build_cat2, m)?)?;
    m.add_function(wrap_pyfunction!(verify_weak_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_xmod, m)?)?;
    m.add_function(wrap_pyfunction!(lie_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(sl2, m)?)?;
    m.add_function(wrap_pyfunction!(lie_tensor_adjoint, m)?)?;
    m.add_function(wrap_pyfunction!(lie_tensor_abelian, m)?)?;
    m.add_function(wrap_pyfunction!(run_session, m)?)?;
    Ok(())
}
