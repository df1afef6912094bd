//! Random inputs and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use uniqfem::geometry::{
    perturb_interior_vertices, triangle_quality, unit_square_acute, BoundaryLabel, IntervalMesh,
    Mesh, Point, TriMesh,
};
use uniqfem::models::{scaled_atan, CoefficientModel, ProblemSpec};
use uniqfem::solver::SolverOptions;

/// Random acute triangle with every angle in `(min_angle, pi/2 - 1e-3)`,
/// random size, orientation and position.
pub fn random_acute_triangle(rng: &mut ChaCha8Rng, min_angle: f64) -> [Point; 3] {
    loop {
        let hi = FRAC_PI_2 - 1e-3;
        let a = rng.gen_range(min_angle..hi);
        let b = rng.gen_range(min_angle..hi);
        let c = PI - a - b;
        if !(c > min_angle && c < hi) {
            continue;
        }
        // Unit base from p0 to p1; |p0 p2| = sin(b) / sin(c) by the law of sines.
        let r = b.sin() / c.sin();
        let local = [[0.0, 0.0], [1.0, 0.0], [r * a.cos(), r * a.sin()]];
        let scale = rng.gen_range(0.5..2.0);
        let (s, co) = rng.gen_range(0.0..2.0 * PI).sin_cos();
        let shift = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let t = local.map(|p| {
            [
                shift[0] + scale * (co * p[0] - s * p[1]),
                shift[1] + scale * (s * p[0] + co * p[1]),
            ]
        });
        if triangle_quality(&t).map(|q| q.acute).unwrap_or(false) {
            return t;
        }
    }
}

/// Basis gradients by the textbook route: `grad phi_i = J^{-T} grad phi_hat_i`
/// with `J = [p1 - p0, p2 - p0]`.
pub fn jacobian_gradients(t: &[Point; 3]) -> ([[f64; 2]; 3], f64) {
    let j = [
        [t[1][0] - t[0][0], t[2][0] - t[0][0]],
        [t[1][1] - t[0][1], t[2][1] - t[0][1]],
    ];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    // inverse transpose of J
    let jit = [
        [j[1][1] / det, -j[1][0] / det],
        [-j[0][1] / det, j[0][0] / det],
    ];
    let hat = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
    let g = hat.map(|r| {
        [
            jit[0][0] * r[0] + jit[0][1] * r[1],
            jit[1][0] * r[0] + jit[1][1] * r[1],
        ]
    });
    (g, 0.5 * det.abs())
}

/// Random bounded, Lipschitz coefficient `base + amp (2/pi) atan(rate (s - shift))`
/// with exactly known constants.
pub fn random_model(rng: &mut ChaCha8Rng) -> CoefficientModel {
    let base = rng.gen_range(1.0..3.0);
    let amp = base * rng.gen_range(0.2..0.8);
    let rate = rng.gen_range(0.5..4.0);
    let shift = rng.gen_range(-1.0..1.0);
    scaled_atan(base, amp, rate, shift).unwrap()
}

/// Smooth random source `a0 + a1 sin(2 pi (b . x) + phase)`.
pub fn random_source(rng: &mut ChaCha8Rng, scale: f64) -> impl Fn(Point) -> f64 + Send + Sync + Clone {
    let a0 = scale * rng.gen_range(-1.0..1.0);
    let a1 = scale * rng.gen_range(0.0..1.0);
    let b = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    let phase = rng.gen_range(0.0..2.0 * PI);
    move |p: Point| a0 + a1 * (2.0 * PI * (b[0] * p[0] + b[1] * p[1]) + phase).sin()
}

/// Nonnegative compactly supported bump of random height, centre and radius.
pub fn random_bump(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> impl Fn(Point) -> f64 + Send + Sync + Clone {
    let height = scale * rng.gen_range(0.0..1.0);
    let c = [rng.gen_range(0.0..1.0), if dim == 2 { rng.gen_range(0.0..1.0) } else { 0.0 }];
    let r2 = rng.gen_range(0.15f64..0.5).powi(2);
    move |p: Point| {
        let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
        height * (1.0 - d2 / r2).max(0.0)
    }
}

/// Random partition of `(0, 1)` into `n` elements, no element shorter than
/// a quarter of the mean.
pub fn random_interval(rng: &mut ChaCha8Rng, n: usize, left: BoundaryLabel, right: BoundaryLabel) -> IntervalMesh {
    let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.25..1.75)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let mut pts = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    pts.push(0.0);
    for x in &w[..n - 1] {
        acc += x;
        pts.push(acc);
    }
    pts.push(1.0);
    IntervalMesh::new(pts, left, right).unwrap()
}

/// Acute unit-square mesh (one red level), interior vertices jittered when
/// the result stays acute.
pub fn random_square_mesh(rng: &mut ChaCha8Rng) -> TriMesh {
    let base = unit_square_acute(1, |_, _| BoundaryLabel::Dirichlet).unwrap();
    for _ in 0..10 {
        let seed = rng.gen();
        if let Ok(m) = perturb_interior_vertices(&base, 0.1, seed) {
            if m.is_acute() {
                return m;
            }
        }
    }
    base
}

/// A random problem of the given dimension: random model, source and
/// constant Dirichlet data.
pub fn random_problem(rng: &mut ChaCha8Rng, dim: usize, source_scale: f64) -> ProblemSpec {
    let model = random_model(rng);
    let mesh: Mesh = if dim == 1 {
        let n = rng.gen_range(8..33);
        random_interval(rng, n, BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet).into()
    } else {
        random_square_mesh(rng).into()
    };
    let g = rng.gen_range(-1.0..1.0);
    let f = random_source(rng, source_scale);
    ProblemSpec::new("random", mesh, model).with_source(f).with_dirichlet(move |_| g)
}

pub fn tight_solver() -> SolverOptions {
    SolverOptions {
        nonlinear_tol: 1e-11,
        max_iterations: 500,
        ..Default::default()
    }
}
