use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::coefficient::{builtin_model, CoefficientModel};
use crate::error::{Error, Result};
use crate::fem::AssemblyOptions;
use crate::geometry::{
    uniform_interval, unit_square_acute, BoundaryLabel, Mesh, MeshTopology, Point,
};

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type GradFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;
pub type LabelFn = Arc<dyn Fn(Point, Point) -> BoundaryLabel + Send + Sync>;

pub fn constant(c: f64) -> ScalarFn {
    Arc::new(move |_| c)
}

#[derive(Clone)]
pub struct ExactSolution {
    pub u: ScalarFn,
    /// Gradient; 1D solutions use the first component only.
    pub grad: GradFn,
}

/// How to rebuild the mesh of a problem at a different resolution.
#[derive(Clone)]
pub enum MeshGenerator {
    /// Uniform partition of `(a, b)` into the given number of elements.
    Interval {
        a: f64,
        b: f64,
        left: BoundaryLabel,
        right: BoundaryLabel,
    },
    /// The acute unit-square triangulation, red-refined the given number of times.
    UnitSquare { labeler: LabelFn },
}

impl MeshGenerator {
    pub fn generate(&self, size: usize) -> Result<Mesh> {
        match self {
            MeshGenerator::Interval { a, b, left, right } => {
                if size == 0 {
                    return Err(Error::InvalidOptions("need at least one element".into()));
                }
                Ok(uniform_interval(*a, *b, size, *left, *right)?.into())
            }
            MeshGenerator::UnitSquare { labeler } => {
                let l = labeler.clone();
                Ok(unit_square_acute(size, move |p, q| l(p, q))?.into())
            }
        }
    }
}

/// Everything needed to set up one discrete problem.
///
/// `neumann` is the outward conormal flux `kappa grad u . n` on Neumann
/// boundary pieces; it enters the right-hand side as `+ int psi v`.
/// `dirichlet` gives the boundary values imposed at Dirichlet vertices.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub mesh: Arc<Mesh>,
    pub model: CoefficientModel,
    pub source: ScalarFn,
    pub neumann: ScalarFn,
    pub dirichlet: ScalarFn,
    pub exact: Option<ExactSolution>,
    pub generator: Option<MeshGenerator>,
    pub assembly: AssemblyOptions,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dim", &self.mesh.dim())
            .field("n_elements", &self.mesh.n_elements())
            .field("model", &self.model)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn new(name: impl Into<String>, mesh: impl Into<Mesh>, model: CoefficientModel) -> Self {
        Self {
            name: name.into(),
            mesh: Arc::new(mesh.into()),
            model,
            source: constant(0.0),
            neumann: constant(0.0),
            dirichlet: constant(0.0),
            exact: None,
            generator: None,
            assembly: AssemblyOptions::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn with_mesh(&self, mesh: impl Into<Arc<Mesh>>) -> Self {
        Self {
            mesh: mesh.into(),
            ..self.clone()
        }
    }

    pub fn with_model(&self, model: CoefficientModel) -> Self {
        Self {
            model,
            ..self.clone()
        }
    }

    pub fn with_source(mut self, f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Arc::new(f);
        self
    }

    pub fn with_neumann(mut self, psi: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.neumann = Arc::new(psi);
        self
    }

    pub fn with_dirichlet(mut self, g: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.dirichlet = Arc::new(g);
        self
    }

    /// Same problem on the generator's mesh of the given size (elements in
    /// 1D, refinement levels in 2D).
    pub fn remesh(&self, size: usize) -> Result<Self> {
        let gen = self.generator.as_ref().ok_or_else(|| {
            Error::InvalidOptions(format!("problem `{}` has no mesh generator", self.name))
        })?;
        Ok(self.with_mesh(gen.generate(size)?))
    }
}

/// Ids accepted by [`builtin_problem`].
pub const PROBLEM_IDS: &[&str] = &["sin", "bubble", "steep", "affine1d", "affine2d", "mixed1d"];

pub fn builtin_problem(id: &str) -> Result<ProblemSpec> {
    match id.trim() {
        "sin" => sin_problem(4),
        "bubble" => bubble_problem(1),
        "steep" => steep_problem(SteepParams::default()),
        "affine1d" => affine_1d(4),
        "affine2d" => affine_2d(0),
        "mixed1d" => mixed_1d(8, 0.5),
        other => Err(Error::UnknownProblem(other.to_owned())),
    }
}

/// Alias of [`builtin_problem`] for the problems that carry an exact solution.
pub fn manufactured_problem(id: &str) -> Result<ProblemSpec> {
    let p = builtin_problem(id)?;
    if p.exact.is_none() {
        return Err(Error::UnknownProblem(format!("{id} (no exact solution)")));
    }
    Ok(p)
}

fn interval_generator(left: BoundaryLabel, right: BoundaryLabel) -> MeshGenerator {
    MeshGenerator::Interval {
        a: 0.0,
        b: 1.0,
        left,
        right,
    }
}

fn all_dirichlet() -> LabelFn {
    Arc::new(|_, _| BoundaryLabel::Dirichlet)
}

/// Build the source `-(kappa(u) u')' = -kappa_s(u) u'^2 - kappa(u) u''` of a
/// 1D manufactured solution.
fn source_1d(
    model: &CoefficientModel,
    u: impl Fn(f64) -> f64 + Send + Sync + 'static,
    du: impl Fn(f64) -> f64 + Send + Sync + 'static,
    d2u: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> ScalarFn {
    let m = model.clone();
    Arc::new(move |p: Point| {
        let s = u(p[0]);
        let g = du(p[0]);
        let ks = m.ds(p, s).expect("manufactured models provide d kappa / ds");
        -ks * g * g - m.eval(p, s) * d2u(p[0])
    })
}

/// `u = sin(pi x)` on `(0, 1)` with the `rational` coefficient.
pub fn sin_problem(n: usize) -> Result<ProblemSpec> {
    let model = builtin_model("rational")?;
    let gen = interval_generator(BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet);
    let source = source_1d(
        &model,
        |x| (PI * x).sin(),
        |x| PI * (PI * x).cos(),
        |x| -PI * PI * (PI * x).sin(),
    );
    let mut p = ProblemSpec::new("sin", gen.generate(n)?, model);
    p.source = source;
    p.exact = Some(ExactSolution {
        u: Arc::new(|p| (PI * p[0]).sin()),
        grad: Arc::new(|p| [PI * (PI * p[0]).cos(), 0.0]),
    });
    p.generator = Some(gen);
    Ok(p)
}

/// `u = sin(pi x) sin(pi y)` on the acute unit-square mesh with the
/// `rational` coefficient and `u = 0` on the whole boundary.
pub fn bubble_problem(levels: usize) -> Result<ProblemSpec> {
    let model = builtin_model("rational")?;
    let gen = MeshGenerator::UnitSquare {
        labeler: all_dirichlet(),
    };
    let u = |p: Point| (PI * p[0]).sin() * (PI * p[1]).sin();
    let grad = |p: Point| {
        [
            PI * (PI * p[0]).cos() * (PI * p[1]).sin(),
            PI * (PI * p[0]).sin() * (PI * p[1]).cos(),
        ]
    };
    let m = model.clone();
    let mut p = ProblemSpec::new("bubble", gen.generate(levels)?, model);
    // -div(kappa grad u) = -kappa_s |grad u|^2 - kappa lap u, lap u = -2 pi^2 u
    p.source = Arc::new(move |x| {
        let s = u(x);
        let g = grad(x);
        let ks = m.ds(x, s).unwrap();
        -ks * (g[0] * g[0] + g[1] * g[1]) + 2.0 * PI * PI * m.eval(x, s) * s
    });
    p.exact = Some(ExactSolution {
        u: Arc::new(u),
        grad: Arc::new(grad),
    });
    p.generator = Some(gen);
    Ok(p)
}

/// Parameters of the 1D plateau benchmark: `u` rises by `amplitude` over a
/// front of width `width` at `left`, and falls back at `right`.
#[derive(Debug, Clone)]
pub struct SteepParams {
    pub elements: usize,
    pub amplitude: f64,
    pub width: f64,
    pub left: f64,
    pub right: f64,
    pub model: String,
    pub load_order: usize,
}

impl Default for SteepParams {
    fn default() -> Self {
        Self {
            elements: 16,
            amplitude: 1.0,
            width: 0.01,
            left: 0.3,
            right: 0.7,
            model: "steep(4)".into(),
            load_order: 20,
        }
    }
}

/// `u(x) = (A/2)(tanh((x - c1)/eps) - tanh((x - c2)/eps))` minus its linear
/// interpolant between the end points, so that `u(0) = u(1) = 0`.
pub fn steep_problem(params: SteepParams) -> Result<ProblemSpec> {
    let SteepParams {
        elements,
        amplitude: a,
        width: eps,
        left: c1,
        right: c2,
        ref model,
        load_order,
    } = params;
    if !(eps > 0.0 && a.is_finite() && c1 < c2) {
        return Err(Error::InvalidOptions(format!(
            "steep problem needs width > 0 and left < right (width {eps}, left {c1}, right {c2})"
        )));
    }
    let model = builtin_model(model)?;
    let g = move |x: f64| 0.5 * a * (((x - c1) / eps).tanh() - ((x - c2) / eps).tanh());
    let (g0, g1) = (g(0.0), g(1.0));
    let u = move |x: f64| g(x) - (g0 + (g1 - g0) * x);
    let du = move |x: f64| {
        let s1 = 1.0 / ((x - c1) / eps).cosh().powi(2);
        let s2 = 1.0 / ((x - c2) / eps).cosh().powi(2);
        0.5 * a / eps * (s1 - s2) - (g1 - g0)
    };
    let d2u = move |x: f64| {
        let (z1, z2) = ((x - c1) / eps, (x - c2) / eps);
        let s1 = 1.0 / z1.cosh().powi(2);
        let s2 = 1.0 / z2.cosh().powi(2);
        a / (eps * eps) * (-s1 * z1.tanh() + s2 * z2.tanh())
    };
    let gen = interval_generator(BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet);
    let source = source_1d(&model, u, du, d2u);
    let mut p = ProblemSpec::new("steep", gen.generate(elements)?, model);
    p.source = source;
    p.exact = Some(ExactSolution {
        u: Arc::new(move |p| u(p[0])),
        grad: Arc::new(move |p| [du(p[0]), 0.0]),
    });
    p.generator = Some(gen);
    p.assembly.load_order = load_order;
    Ok(p)
}

/// `u = 1 + 2x` with unit coefficient and nonhomogeneous Dirichlet data.
pub fn affine_1d(n: usize) -> Result<ProblemSpec> {
    let gen = interval_generator(BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet);
    let u = |p: Point| 1.0 + 2.0 * p[0];
    let mut p = ProblemSpec::new("affine1d", gen.generate(n)?, builtin_model("unit")?)
        .with_dirichlet(u);
    p.exact = Some(ExactSolution {
        u: Arc::new(u),
        grad: Arc::new(|_| [2.0, 0.0]),
    });
    p.generator = Some(gen);
    Ok(p)
}

/// `u = 1 + 2x - y` on the unit square with unit coefficient.
pub fn affine_2d(levels: usize) -> Result<ProblemSpec> {
    let gen = MeshGenerator::UnitSquare {
        labeler: all_dirichlet(),
    };
    let u = |p: Point| 1.0 + 2.0 * p[0] - p[1];
    let mut p = ProblemSpec::new("affine2d", gen.generate(levels)?, builtin_model("unit")?)
        .with_dirichlet(u);
    p.exact = Some(ExactSolution {
        u: Arc::new(u),
        grad: Arc::new(|_| [2.0, -1.0]),
    });
    p.generator = Some(gen);
    Ok(p)
}

/// `f = 1` on `(0, 1)`, Neumann flux `psi_a` at `x = 0`, `u(1) = 0`, `atan`
/// coefficient.
pub fn mixed_1d(n: usize, psi_a: f64) -> Result<ProblemSpec> {
    let gen = interval_generator(BoundaryLabel::Neumann, BoundaryLabel::Dirichlet);
    let mut p = ProblemSpec::new("mixed1d", gen.generate(n)?, builtin_model("atan")?)
        .with_source(|_| 1.0)
        .with_neumann(move |_| psi_a);
    p.generator = Some(gen);
    Ok(p)
}
