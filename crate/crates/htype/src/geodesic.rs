//! Closed-form geodesics through the identity.
//!
//! With nonzero initial center velocity the horizontal equation reduces to
//! a constant-coefficient linear system driven by A = eta j(u0dot); the
//! spectral block form turns its solution into per-block hyperbolic,
//! trigonometric, and spiral formulas. The center component follows from
//! the conserved momentum by quadrature.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::{CausalType, GroupElement, HTypeAlgebra, Velocity};
use crate::error::{Error, Result};
use crate::spectral::{classify, BlockKind, BlockSpec, SpectralData};

/// A sampled path of group elements with analytic velocities.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<GroupElement>,
    velocities: Vec<Velocity>,
    causal: CausalType,
}

impl Trajectory {
    /// Validating constructor: columns must have equal lengths and times
    /// must be strictly increasing.
    pub fn new(
        times: Vec<f64>,
        states: Vec<GroupElement>,
        velocities: Vec<Velocity>,
        causal: CausalType,
    ) -> Result<Self> {
        if states.len() != times.len() {
            return Err(Error::DimensionMismatch {
                what: "trajectory states",
                expected: times.len(),
                actual: states.len(),
            });
        }
        if velocities.len() != times.len() {
            return Err(Error::DimensionMismatch {
                what: "trajectory velocities",
                expected: times.len(),
                actual: velocities.len(),
            });
        }
        for i in 1..times.len() {
            if times[i].partial_cmp(&times[i - 1]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::InvalidRange {
                    t0: times[i - 1],
                    t1: times[i],
                    steps: i,
                });
            }
        }
        Ok(Trajectory {
            times,
            states,
            velocities,
            causal,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[GroupElement] {
        &self.states
    }

    pub fn velocities(&self) -> &[Velocity] {
        &self.velocities
    }

    /// Causal class of the initial horizontal velocity; constant along a
    /// geodesic because the speed is conserved.
    pub fn causal(&self) -> CausalType {
        self.causal
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Shape of a 2D projection of the geodesic in the rearranged basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionKind {
    Hyperbola,
    Circle,
    SpiralExpanding,
    SpiralContracting,
}

impl std::fmt::Display for ProjectionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ProjectionKind::Hyperbola => "hyperbola",
            ProjectionKind::Circle => "circle",
            ProjectionKind::SpiralExpanding => "spiral_expanding",
            ProjectionKind::SpiralContracting => "spiral_contracting",
        };
        f.write_str(name)
    }
}

/// Defect of one block's conic identity at a sample time.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlockResidual {
    pub kind: ProjectionKind,
    /// Block position in the rearranged layout, zero-based.
    pub index: usize,
    pub residual: f64,
}

/// Adaptive quadrature policy for the center component.
#[derive(Clone, Copy, Debug)]
pub struct QuadraturePolicy {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadraturePolicy {
    fn default() -> Self {
        QuadraturePolicy {
            abs_tol: 1e-10,
            max_depth: 40,
        }
    }
}

/// Solved geodesic through the identity, evaluable at any time.
#[derive(Clone, Debug)]
pub struct GeodesicSolution {
    alg: HTypeAlgebra,
    v0dot: DVector<f64>,
    u0dot: DVector<f64>,
    spectral: Option<SpectralParts>,
    quadrature: QuadraturePolicy,
}

/// Cached products of the classification of eta j(u0dot).
#[derive(Clone, Debug)]
struct SpectralParts {
    data: SpectralData,
    transform: DMatrix<f64>,
    transformed_v0dot: DVector<f64>,
    blocks: Vec<BlockSpec>,
}

/// Solves the geodesic equations for the given initial velocity at the
/// identity. A zero center velocity degenerates to the straight line, the
/// limit of every block formula.
pub fn solve_geodesic(
    alg: &HTypeAlgebra,
    v0dot: &DVector<f64>,
    u0dot: &DVector<f64>,
) -> Result<GeodesicSolution> {
    if v0dot.len() != alg.n() {
        return Err(Error::DimensionMismatch {
            what: "initial horizontal velocity",
            expected: alg.n(),
            actual: v0dot.len(),
        });
    }
    if u0dot.len() != alg.m() {
        return Err(Error::DimensionMismatch {
            what: "initial center velocity",
            expected: alg.m(),
            actual: u0dot.len(),
        });
    }
    let spectral = if u0dot.norm() == 0.0 {
        None
    } else {
        let data = classify(alg, u0dot)?;
        let transform = data.transform();
        let transformed_v0dot = &transform * v0dot;
        let blocks = data.blocks();
        Some(SpectralParts {
            data,
            transform,
            transformed_v0dot,
            blocks,
        })
    };
    Ok(GeodesicSolution {
        alg: alg.clone(),
        v0dot: v0dot.clone(),
        u0dot: u0dot.clone(),
        spectral,
        quadrature: QuadraturePolicy::default(),
    })
}

/// Position part of one block's solution: Phi(t) applied to the in-block
/// initial velocity (x, y), where Phi(t) integrates the block exponential
/// from 0 to t.
fn block_position(block: &BlockSpec, t: f64, x: f64, y: f64) -> (f64, f64) {
    match block.kind {
        BlockKind::Hyperbolic => {
            let a = block.alpha;
            let (sh, ch) = ((a * t).sinh(), (a * t).cosh());
            ((sh * x + (ch - 1.0) * y) / a, ((ch - 1.0) * x + sh * y) / a)
        }
        BlockKind::Rotation => {
            let b = block.beta;
            let (s, c) = ((b * t).sin(), (b * t).cos());
            ((s * x + (1.0 - c) * y) / b, (-(1.0 - c) * x + s * y) / b)
        }
        BlockKind::PositiveSpiral => {
            let (alpha, beta) = (block.alpha, block.beta);
            let w2 = alpha * alpha + beta * beta;
            let (z1, z2) = (alpha * x - beta * y, beta * x + alpha * y);
            let e = (alpha * t).exp();
            let (s, c) = ((beta * t).sin(), (beta * t).cos());
            (
                (e * (c * z1 + s * z2) - z1) / w2,
                (e * (-s * z1 + c * z2) - z2) / w2,
            )
        }
        BlockKind::NegativeSpiral => {
            let (alpha, beta) = (block.alpha, block.beta);
            let w2 = alpha * alpha + beta * beta;
            let (z1, z2) = (alpha * x - beta * y, beta * x + alpha * y);
            let e = (-alpha * t).exp();
            let (s, c) = ((beta * t).sin(), (beta * t).cos());
            (
                (z1 - e * (c * z1 - s * z2)) / w2,
                (z2 - e * (s * z1 + c * z2)) / w2,
            )
        }
    }
}

/// Velocity part of one block's solution: the block exponential applied to
/// the in-block initial velocity.
fn block_velocity(block: &BlockSpec, t: f64, x: f64, y: f64) -> (f64, f64) {
    match block.kind {
        BlockKind::Hyperbolic => {
            let a = block.alpha;
            let (sh, ch) = ((a * t).sinh(), (a * t).cosh());
            (ch * x + sh * y, sh * x + ch * y)
        }
        BlockKind::Rotation => {
            let b = block.beta;
            let (s, c) = ((b * t).sin(), (b * t).cos());
            (c * x + s * y, -s * x + c * y)
        }
        BlockKind::PositiveSpiral => {
            let e = (block.alpha * t).exp();
            let (s, c) = ((block.beta * t).sin(), (block.beta * t).cos());
            (e * (c * x + s * y), e * (-s * x + c * y))
        }
        BlockKind::NegativeSpiral => {
            let e = (-block.alpha * t).exp();
            let (s, c) = ((block.beta * t).sin(), (block.beta * t).cos());
            (e * (c * x - s * y), e * (s * x + c * y))
        }
    }
}

const GAUSS_NODES: [f64; 5] = [
    0.1488743389816312,
    0.4333953941292472,
    0.6794095682990244,
    0.8650633666889845,
    0.9739065285171717,
];
const GAUSS_WEIGHTS: [f64; 5] = [
    0.2955242247147529,
    0.2692667193099963,
    0.219086362515982,
    0.1494513491505806,
    0.0666713443086881,
];

fn gauss10<F: Fn(f64) -> DVector<f64>>(f: &F, a: f64, b: f64) -> DVector<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = f(mid + half * GAUSS_NODES[0]) + f(mid - half * GAUSS_NODES[0]);
    acc *= GAUSS_WEIGHTS[0];
    for i in 1..5 {
        acc += (f(mid + half * GAUSS_NODES[i]) + f(mid - half * GAUSS_NODES[i]))
            * GAUSS_WEIGHTS[i];
    }
    acc * half
}

fn adaptive_quadrature<F: Fn(f64) -> DVector<f64>>(
    f: &F,
    a: f64,
    b: f64,
    whole: DVector<f64>,
    tol: f64,
    depth: u32,
) -> DVector<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss10(f, a, mid);
    let right = gauss10(f, mid, b);
    let refined = &left + &right;
    if depth == 0 || (&refined - &whole).norm() <= tol {
        refined
    } else {
        adaptive_quadrature(f, a, mid, left, tol * 0.5, depth - 1)
            + adaptive_quadrature(f, mid, b, right, tol * 0.5, depth - 1)
    }
}

impl GeodesicSolution {
    pub fn algebra(&self) -> &HTypeAlgebra {
        &self.alg
    }

    pub fn v0dot(&self) -> &DVector<f64> {
        &self.v0dot
    }

    pub fn u0dot(&self) -> &DVector<f64> {
        &self.u0dot
    }

    /// Classification of eta j(u0dot); absent for the straight-line case.
    pub fn spectral_data(&self) -> Option<&SpectralData> {
        self.spectral.as_ref().map(|parts| &parts.data)
    }

    pub fn causal_type(&self) -> CausalType {
        self.alg
            .signature()
            .causal_type(&self.v0dot)
            .expect("dimensions checked at construction")
    }

    /// Horizontal position and velocity at time t.
    fn horizontal(&self, t: f64) -> (DVector<f64>, DVector<f64>) {
        match &self.spectral {
            None => (&self.v0dot * t, self.v0dot.clone()),
            Some(parts) => {
                let n = self.alg.n();
                let mut pos = DVector::<f64>::zeros(n);
                let mut vel = DVector::<f64>::zeros(n);
                for block in &parts.blocks {
                    let x = parts.transformed_v0dot[block.offset];
                    let y = parts.transformed_v0dot[block.offset + 1];
                    let (p1, p2) = block_position(block, t, x, y);
                    let (w1, w2) = block_velocity(block, t, x, y);
                    pos[block.offset] = p1;
                    pos[block.offset + 1] = p2;
                    vel[block.offset] = w1;
                    vel[block.offset + 1] = w2;
                }
                (parts.transform.tr_mul(&pos), parts.transform.tr_mul(&vel))
            }
        }
    }

    /// State and velocity at time t. The horizontal part is closed-form;
    /// the center position integrates the momentum relation by adaptive
    /// quadrature, and the center velocity is analytic.
    pub fn evaluate(&self, t: f64) -> (GroupElement, Velocity) {
        let (v, dv) = self.horizontal(t);
        if self.spectral.is_none() {
            // Straight line: the bracket of parallel vectors vanishes, so
            // the center components stay exactly zero.
            let u = &self.u0dot * t;
            return (GroupElement::new(v, u), Velocity::new(dv, self.u0dot.clone()));
        }
        let m = self.alg.m();
        let integral = if t == 0.0 {
            DVector::zeros(m)
        } else {
            let integrand = |tau: f64| {
                let (pos, vel) = self.horizontal(tau);
                self.alg
                    .bracket(&vel, &pos)
                    .expect("dimensions fixed by construction")
            };
            let whole = gauss10(&integrand, 0.0, t);
            adaptive_quadrature(
                &integrand,
                0.0,
                t,
                whole,
                self.quadrature.abs_tol,
                self.quadrature.max_depth,
            )
        };
        let u = &self.u0dot * t - integral * 0.5;
        let du = &self.u0dot
            - self
                .alg
                .bracket(&dv, &v)
                .expect("dimensions fixed by construction")
                * 0.5;
        (GroupElement::new(v, u), Velocity::new(dv, du))
    }

    /// Uniformly sampled trajectory with the stated number of rows.
    pub fn sample(&self, t0: f64, t1: f64, steps: usize) -> Result<Trajectory> {
        if t0.partial_cmp(&t1) != Some(std::cmp::Ordering::Less)
            || steps < 2
            || !t0.is_finite()
            || !t1.is_finite()
        {
            return Err(Error::InvalidRange { t0, t1, steps });
        }
        let dt = (t1 - t0) / (steps - 1) as f64;
        let mut times = Vec::with_capacity(steps);
        let mut states = Vec::with_capacity(steps);
        let mut velocities = Vec::with_capacity(steps);
        for i in 0..steps {
            let t = t0 + i as f64 * dt;
            let (state, velocity) = self.evaluate(t);
            times.push(t);
            states.push(state);
            velocities.push(velocity);
        }
        Trajectory::new(times, states, velocities, self.causal_type())
    }

    /// Residuals of the per-block conic identities at time t: the
    /// hyperbolic cell projects onto a hyperbola branch, rotation cells
    /// onto circles, and spiral cells onto logarithmic spirals whose
    /// squared radius scales as exp(+-2 alpha t).
    pub fn projection_residuals(&self, t: f64) -> Result<Vec<BlockResidual>> {
        let parts = self.spectral.as_ref().ok_or(Error::ZeroCenterVelocity)?;
        let mut out = Vec::with_capacity(parts.blocks.len());
        for (index, block) in parts.blocks.iter().enumerate() {
            let x = parts.transformed_v0dot[block.offset];
            let y = parts.transformed_v0dot[block.offset + 1];
            let (p1, p2) = block_position(block, t, x, y);
            let (kind, lhs, rhs) = match block.kind {
                BlockKind::Hyperbolic => {
                    let w = block.alpha;
                    let lhs = (p1 + y / w).powi(2) - (p2 + x / w).powi(2);
                    let rhs = (y * y - x * x) / (w * w);
                    (ProjectionKind::Hyperbola, lhs, rhs)
                }
                BlockKind::Rotation => {
                    let w = block.beta;
                    let lhs = (p1 - y / w).powi(2) + (p2 + x / w).powi(2);
                    let rhs = (x * x + y * y) / (w * w);
                    (ProjectionKind::Circle, lhs, rhs)
                }
                BlockKind::PositiveSpiral => {
                    let (alpha, beta) = (block.alpha, block.beta);
                    let w2 = alpha * alpha + beta * beta;
                    let center1 = (alpha * x - beta * y) / w2;
                    let center2 = (beta * x + alpha * y) / w2;
                    let lhs = (p1 + center1).powi(2) + (p2 + center2).powi(2);
                    let rhs = (x * x + y * y) / w2 * (2.0 * alpha * t).exp();
                    (ProjectionKind::SpiralExpanding, lhs, rhs)
                }
                BlockKind::NegativeSpiral => {
                    let (alpha, beta) = (block.alpha, block.beta);
                    let w2 = alpha * alpha + beta * beta;
                    let center1 = (beta * y - alpha * x) / w2;
                    let center2 = -(beta * x + alpha * y) / w2;
                    let lhs = (p1 + center1).powi(2) + (p2 + center2).powi(2);
                    let rhs = (x * x + y * y) / w2 * (-2.0 * alpha * t).exp();
                    (ProjectionKind::SpiralContracting, lhs, rhs)
                }
            };
            let scale = ((x * x + y * y) / (block.alpha * block.alpha + block.beta * block.beta))
                .max(rhs.abs())
                .max(1e-300);
            out.push(BlockResidual {
                kind,
                index,
                residual: (lhs - rhs).abs() / scale,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_unit, Signature};
    use crate::clifford::{build_generators, octonion_generators};
    use crate::oracle::{integrate_geodesic, IntegratorConfig};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn heisenberg(p: usize) -> HTypeAlgebra {
        HTypeAlgebra::new(
            build_generators(2, 1).unwrap(),
            Signature::new(p, 2 - p).unwrap(),
        )
        .unwrap()
    }

    fn octonion(p: usize) -> HTypeAlgebra {
        HTypeAlgebra::new(octonion_generators(), Signature::new(p, 8 - p).unwrap()).unwrap()
    }

    #[test]
    fn straight_line_for_zero_center_velocity() {
        let alg = octonion(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v0 = random_unit(&mut rng, 8) * 1.3;
        let sol = solve_geodesic(&alg, &v0, &DVector::zeros(7)).unwrap();
        assert!(sol.spectral_data().is_none());
        let (state, velocity) = sol.evaluate(2.5);
        assert!((&state.v - &v0 * 2.5).norm() <= 1e-12);
        assert_eq!(state.u.norm(), 0.0);
        assert_eq!(velocity.dv, v0);
        assert_eq!(velocity.du.norm(), 0.0);
    }

    #[test]
    fn heisenberg_indefinite_fixture() {
        // Index 1, initial velocity ((1, 0), 1): v(t) = (sinh t, 1 - cosh t),
        // u(t) = (t + sinh t) / 2, with coordinate center velocity
        // (1 + cosh t) / 2.
        let alg = heisenberg(1);
        let sol = solve_geodesic(
            &alg,
            &DVector::from_vec(vec![1.0, 0.0]),
            &DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        for &t in &[-1.2, -0.3, 0.0, 0.4, 1.0, 1.7] {
            let (state, velocity) = sol.evaluate(t);
            let t: f64 = t;
            assert_relative_eq!(state.v[0], t.sinh(), epsilon = 1e-10);
            assert_relative_eq!(state.v[1], 1.0 - t.cosh(), epsilon = 1e-10);
            assert_relative_eq!(state.u[0], (t + t.sinh()) / 2.0, epsilon = 1e-9);
            assert_relative_eq!(velocity.dv[0], t.cosh(), epsilon = 1e-10);
            assert_relative_eq!(velocity.dv[1], -t.sinh(), epsilon = 1e-10);
            assert_relative_eq!(velocity.du[0], (1.0 + t.cosh()) / 2.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn heisenberg_riemannian_fixture() {
        // Index 0 traces the circle (sin t, cos t - 1): center (0, -1).
        let alg = heisenberg(0);
        let sol = solve_geodesic(
            &alg,
            &DVector::from_vec(vec![1.0, 0.0]),
            &DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        for &t in &[0.3, 1.1, 2.9] {
            let (state, _) = sol.evaluate(t);
            let t: f64 = t;
            assert_relative_eq!(state.v[0], t.sin(), epsilon = 1e-10);
            assert_relative_eq!(state.v[1], t.cos() - 1.0, epsilon = 1e-10);
            assert_relative_eq!(state.u[0], (3.0 * t - t.sin()) / 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn initial_conditions_are_exact() {
        let alg = octonion(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v0 = random_unit(&mut rng, 8) * 1.4;
        let u0 = random_unit(&mut rng, 7) * 0.9;
        let sol = solve_geodesic(&alg, &v0, &u0).unwrap();
        let (state, velocity) = sol.evaluate(0.0);
        assert_eq!(state.v.norm(), 0.0);
        assert_eq!(state.u.norm(), 0.0);
        assert!((&velocity.dv - &v0).norm() <= 1e-12);
        assert!((&velocity.du - &u0).norm() <= 1e-12);
    }

    #[test]
    fn momentum_and_speed_constant_along_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for p in [1usize, 2, 4] {
            let alg = octonion(p);
            let v0 = random_unit(&mut rng, 8) * rng.random_range(0.5..1.5);
            let u0 = random_unit(&mut rng, 7) * rng.random_range(0.5..1.5);
            let sol = solve_geodesic(&alg, &v0, &u0).unwrap();
            let speed0 = alg
                .speed_squared(&Velocity::new(v0.clone(), u0.clone()))
                .unwrap();
            for i in 0..20 {
                let t = -0.5 + i as f64 * 0.1;
                let (state, velocity) = sol.evaluate(t);
                let mu = alg.momentum(&state, &velocity).unwrap();
                assert!((&mu - &u0).norm() <= 1e-8, "momentum drift at t = {t}");
                let frame_velocity = Velocity::new(velocity.dv.clone(), mu);
                let speed = alg.speed_squared(&frame_velocity).unwrap();
                assert!(
                    (speed - speed0).abs() <= 1e-9,
                    "speed drift {:e} at t = {t}",
                    (speed - speed0).abs()
                );
            }
        }
    }

    #[test]
    fn matches_oracle_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for alg in [heisenberg(1), octonion(2)] {
            let n = alg.n();
            let m = alg.m();
            let v0 = random_unit(&mut rng, n) * rng.random_range(0.5..1.2);
            let u0 = random_unit(&mut rng, m) * rng.random_range(0.5..1.2);
            let sol = solve_geodesic(&alg, &v0, &u0).unwrap();
            let config = IntegratorConfig {
                t_end: 1.0,
                steps: 10_000,
                record_every: 1000,
            };
            let reference = integrate_geodesic(&alg, &v0, &u0, &config).unwrap();
            for (i, &t) in reference.times().iter().enumerate() {
                let (state, _) = sol.evaluate(t);
                let ref_state = &reference.states()[i];
                assert!(
                    (&state.v - &ref_state.v).norm() <= 1e-5,
                    "v deviation at t = {t}"
                );
                assert!(
                    (&state.u - &ref_state.u).norm() <= 1e-5,
                    "u deviation at t = {t}"
                );
            }
        }
    }

    #[test]
    fn projection_identities_per_block() {
        let hyper = solve_geodesic(
            &heisenberg(1),
            &DVector::from_vec(vec![0.0, 1.0]),
            &DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        for i in 1..=10 {
            let t = i as f64 * 0.1;
            let residuals = hyper.projection_residuals(t).unwrap();
            assert_eq!(residuals.len(), 1);
            assert_eq!(residuals[0].kind, ProjectionKind::Hyperbola);
            assert!(residuals[0].residual <= 1e-10, "t = {t}");
        }

        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let v0 = random_unit(&mut rng, 8);
        let u0 = random_unit(&mut rng, 7) * 1.1;

        let circles = solve_geodesic(&octonion(1), &v0, &u0).unwrap();
        let kinds: Vec<ProjectionKind> = circles
            .projection_residuals(0.8)
            .unwrap()
            .iter()
            .map(|r| r.kind)
            .collect();
        assert_eq!(
            kinds,
            vec![
                ProjectionKind::Hyperbola,
                ProjectionKind::Circle,
                ProjectionKind::Circle,
                ProjectionKind::Circle
            ]
        );
        for r in circles.projection_residuals(0.8).unwrap() {
            assert!(r.residual <= 1e-10, "{:?}", r);
        }

        let spirals = solve_geodesic(&octonion(4), &v0, &u0).unwrap();
        let residuals = spirals.projection_residuals(0.6).unwrap();
        assert_eq!(residuals.len(), 4);
        assert_eq!(residuals[0].kind, ProjectionKind::SpiralExpanding);
        assert_eq!(residuals[2].kind, ProjectionKind::SpiralContracting);
        for r in &residuals {
            assert!(r.residual <= 1e-9, "{:?}", r);
        }

        let line = solve_geodesic(&octonion(1), &v0, &DVector::zeros(7)).unwrap();
        assert!(matches!(
            line.projection_residuals(0.5),
            Err(Error::ZeroCenterVelocity)
        ));
    }

    #[test]
    fn block_exponentials_match_generic_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let alg = octonion(3);
        let u = random_unit(&mut rng, 7) * 1.3;
        let data = classify(&alg, &u).unwrap();
        for block in data.blocks() {
            let b2 = match block.kind {
                BlockKind::Hyperbolic => {
                    DMatrix::from_row_slice(2, 2, &[0.0, block.alpha, block.alpha, 0.0])
                }
                BlockKind::Rotation => {
                    DMatrix::from_row_slice(2, 2, &[0.0, block.beta, -block.beta, 0.0])
                }
                BlockKind::PositiveSpiral => DMatrix::from_row_slice(
                    2,
                    2,
                    &[block.alpha, block.beta, -block.beta, block.alpha],
                ),
                BlockKind::NegativeSpiral => DMatrix::from_row_slice(
                    2,
                    2,
                    &[-block.alpha, -block.beta, block.beta, -block.alpha],
                ),
            };
            for &t in &[0.0, 0.37, 1.0] {
                let reference = (&b2 * t).exp();
                let e1 = block_velocity(&block, t, 1.0, 0.0);
                let e2 = block_velocity(&block, t, 0.0, 1.0);
                let analytic = DMatrix::from_row_slice(2, 2, &[e1.0, e2.0, e1.1, e2.1]);
                assert!(
                    (&analytic - &reference).abs().max() <= 1e-10,
                    "{:?} at t = {t}",
                    block.kind
                );
            }
        }
    }

    #[test]
    fn sampling_grid_and_validation() {
        let alg = heisenberg(1);
        let sol = solve_geodesic(
            &alg,
            &DVector::from_vec(vec![1.0, 0.0]),
            &DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        let traj = sol.sample(0.0, 1.0, 101).unwrap();
        assert_eq!(traj.len(), 101);
        assert_eq!(traj.times()[0], 0.0);
        assert_relative_eq!(traj.times()[50], 0.5, epsilon = 1e-12);
        assert_eq!(*traj.times().last().unwrap(), 1.0);
        assert_eq!(traj.causal(), CausalType::Timelike);
        assert_eq!(traj.states()[0].v.norm(), 0.0);

        for (state, velocity) in traj.states().iter().zip(traj.velocities()) {
            let mu = alg.momentum(state, velocity).unwrap();
            assert!((mu[0] - 1.0).abs() <= 1e-8);
        }

        let two = sol.sample(0.0, 1.0, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(matches!(
            sol.sample(1.0, 0.0, 10),
            Err(Error::InvalidRange { .. })
        ));
        assert!(matches!(
            sol.sample(0.0, 1.0, 1),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn trajectory_constructor_validation() {
        let state = GroupElement::new(DVector::zeros(2), DVector::zeros(1));
        let velocity = Velocity::new(DVector::zeros(2), DVector::zeros(1));
        let bad_len = Trajectory::new(
            vec![0.0, 1.0],
            vec![state.clone()],
            vec![velocity.clone(), velocity.clone()],
            CausalType::Spacelike,
        );
        assert!(matches!(bad_len, Err(Error::DimensionMismatch { .. })));

        let bad_times = Trajectory::new(
            vec![0.0, 0.0],
            vec![state.clone(), state.clone()],
            vec![velocity.clone(), velocity.clone()],
            CausalType::Spacelike,
        );
        assert!(matches!(bad_times, Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn riemannian_limit_matches_oracle() {
        // Index 0 on the quaternion-type fixture: all rotation blocks.
        let alg = HTypeAlgebra::new(
            build_generators(4, 3).unwrap(),
            Signature::new(0, 4).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        let v0 = random_unit(&mut rng, 4);
        let u0 = random_unit(&mut rng, 3) * 0.8;
        let sol = solve_geodesic(&alg, &v0, &u0).unwrap();
        let data = sol.spectral_data().unwrap();
        assert_eq!(data.s(), 0);
        assert_eq!(data.quartets().len(), 0);
        let config = IntegratorConfig {
            t_end: 1.0,
            steps: 20_000,
            record_every: 2000,
        };
        let reference = integrate_geodesic(&alg, &v0, &u0, &config).unwrap();
        for (i, &t) in reference.times().iter().enumerate() {
            let (state, _) = sol.evaluate(t);
            assert!((&state.v - &reference.states()[i].v).norm() <= 1e-6);
            assert!((&state.u - &reference.states()[i].u).norm() <= 1e-6);
        }
    }
}
