//! Independent numerical cross-checks for the closed-form machinery: a
//! fixed-step integrator for the geodesic equations in exponential
//! coordinates, a finite-difference residual that judges a candidate
//! trajectory from its positions alone, and a characteristic polynomial
//! assembled from principal minors.
//!
//! Nothing here shares code with the closed-form solver or the trace-based
//! polynomial; agreement between the two sides is evidence, not tautology.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{GroupElement, HTypeAlgebra, Velocity};
use crate::error::{Error, Result};
use crate::geodesic::Trajectory;

/// Fixed-step integration plan for the oracle.
#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig {
    /// Final time; the run always starts at t = 0 and t_end must be positive.
    pub t_end: f64,
    /// Number of equal steps, at least 10.
    pub steps: usize,
    /// Keep every k-th state (the initial and final states are always kept).
    pub record_every: usize,
}

/// A generator acts as a signed permutation; storing the single nonzero
/// entry per row makes its application O(n) inside the step loop.
struct SignedPerm {
    col: Vec<usize>,
    sign: Vec<f64>,
}

impl SignedPerm {
    fn from_matrix(mat: &DMatrix<f64>) -> Self {
        let n = mat.nrows();
        let mut col = vec![0usize; n];
        let mut sign = vec![0.0f64; n];
        for i in 0..n {
            for j in 0..n {
                if mat[(i, j)].abs() > sign[i].abs() {
                    col[i] = j;
                    sign[i] = mat[(i, j)];
                }
            }
        }
        SignedPerm { col, sign }
    }
}

/// The right-hand side of the geodesic system on the flat state
/// [v, dv, u, du]. Scratch lives in the struct so that evaluation does not
/// allocate.
struct GeodesicField<'a> {
    alg: &'a HTypeAlgebra,
    perms: Vec<SignedPerm>,
    mu: Vec<f64>,
}

impl<'a> GeodesicField<'a> {
    fn new(alg: &'a HTypeAlgebra) -> Self {
        let perms = alg
            .generators()
            .matrices()
            .iter()
            .map(SignedPerm::from_matrix)
            .collect();
        GeodesicField {
            alg,
            perms,
            mu: vec![0.0; alg.m()],
        }
    }

    fn eval(&mut self, state: &[f64], out: &mut [f64]) {
        let n = self.alg.n();
        let m = self.alg.m();
        let p_index = self.alg.signature().p();
        let (v, dv) = (&state[..n], &state[n..2 * n]);
        let du = &state[2 * n + m..];

        out[..n].copy_from_slice(dv);
        // Frame center velocity mu = du + [dv, v] / 2.
        for (a, sp) in self.perms.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..n {
                acc += v[i] * sp.sign[i] * dv[sp.col[i]];
            }
            self.mu[a] = du[a] + 0.5 * acc;
        }
        // Horizontal acceleration eta j(mu) dv.
        for i in 0..n {
            let mut acc = 0.0;
            for (a, sp) in self.perms.iter().enumerate() {
                acc += self.mu[a] * sp.sign[i] * dv[sp.col[i]];
            }
            out[n + i] = if i < p_index { -acc } else { acc };
        }
        out[2 * n..2 * n + m].copy_from_slice(du);
        // Center acceleration -[accel, v] / 2, with accel just written above.
        for (a, sp) in self.perms.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..n {
                acc += v[i] * sp.sign[i] * out[n + sp.col[i]];
            }
            out[2 * n + m + a] = -0.5 * acc;
        }
    }
}

/// Integrates the geodesic starting at the identity with the given initial
/// velocity, using the classical fourth-order Runge-Kutta scheme over
/// [0, t_end].
pub fn integrate_geodesic(
    alg: &HTypeAlgebra,
    v0dot: &DVector<f64>,
    u0dot: &DVector<f64>,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let (n, m) = (alg.n(), alg.m());
    if v0dot.len() != n {
        return Err(Error::DimensionMismatch {
            what: "initial horizontal velocity",
            expected: n,
            actual: v0dot.len(),
        });
    }
    if u0dot.len() != m {
        return Err(Error::DimensionMismatch {
            what: "initial center velocity",
            expected: m,
            actual: u0dot.len(),
        });
    }
    if config.steps < 10
        || config.record_every == 0
        || !config.t_end.is_finite()
        || config.t_end <= 0.0
    {
        return Err(Error::InvalidRange {
            t0: 0.0,
            t1: config.t_end,
            steps: config.steps,
        });
    }

    let dim = 2 * (n + m);
    let mut state = vec![0.0f64; dim];
    state[n..2 * n].copy_from_slice(v0dot.as_slice());
    state[2 * n + m..].copy_from_slice(u0dot.as_slice());

    let h = config.t_end / config.steps as f64;
    let mut field = GeodesicField::new(alg);
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut probe = vec![0.0; dim];

    let capacity = config.steps / config.record_every + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut velocities = Vec::with_capacity(capacity);
    let mut record = |t: f64, s: &[f64]| {
        times.push(t);
        states.push(GroupElement::new(
            DVector::from_column_slice(&s[..n]),
            DVector::from_column_slice(&s[2 * n..2 * n + m]),
        ));
        velocities.push(Velocity::new(
            DVector::from_column_slice(&s[n..2 * n]),
            DVector::from_column_slice(&s[2 * n + m..]),
        ));
    };

    record(0.0, &state);
    for step in 1..=config.steps {
        field.eval(&state, &mut k1);
        for i in 0..dim {
            probe[i] = state[i] + 0.5 * h * k1[i];
        }
        field.eval(&probe, &mut k2);
        for i in 0..dim {
            probe[i] = state[i] + 0.5 * h * k2[i];
        }
        field.eval(&probe, &mut k3);
        for i in 0..dim {
            probe[i] = state[i] + h * k3[i];
        }
        field.eval(&probe, &mut k4);
        for i in 0..dim {
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if step % config.record_every == 0 || step == config.steps {
            record(h * step as f64, &state);
        }
    }
    Trajectory::new(times, states, velocities, alg.signature().causal_type(v0dot)?)
}

/// Largest pointwise defect of the geodesic equations over a uniformly
/// sampled trajectory, judged purely from the positions: velocities and
/// accelerations are reconstructed by central and second differences, so
/// any curve of group elements can be tested, not only ones produced with
/// their velocities attached.
pub fn geodesic_residual(alg: &HTypeAlgebra, traj: &Trajectory) -> Result<f64> {
    let times = traj.times();
    let positions = traj.states();
    if times.len() < 3 {
        return Err(Error::InvalidRange {
            t0: times.first().copied().unwrap_or(0.0),
            t1: times.last().copied().unwrap_or(0.0),
            steps: times.len(),
        });
    }
    let h = times[1] - times[0];
    if h == 0.0 || !h.is_finite() {
        return Err(Error::InvalidRange {
            t0: times[0],
            t1: *times.last().unwrap(),
            steps: times.len(),
        });
    }
    for i in 1..times.len() {
        let spacing = times[i] - times[i - 1];
        let deviation = (spacing - h).abs();
        if deviation > 1e-9 * h.abs().max(1.0) {
            return Err(Error::NonUniformGrid {
                index: i,
                spacing,
                deviation,
            });
        }
    }

    let mut worst: f64 = 0.0;
    for i in 1..times.len() - 1 {
        let (prev, here, next) = (&positions[i - 1], &positions[i], &positions[i + 1]);
        let vd = (&next.v - &prev.v) / (2.0 * h);
        let vdd = (&next.v - &here.v * 2.0 + &prev.v) / (h * h);
        let ud = (&next.u - &prev.u) / (2.0 * h);
        let udd = (&next.u - &here.u * 2.0 + &prev.u) / (h * h);

        let mu = &ud + alg.bracket(&vd, &here.v)? * 0.5;
        let rv = &vdd - alg.a_of_u(&mu)? * &vd;
        let ru = &udd + alg.bracket(&vdd, &here.v)? * 0.5;
        worst = worst.max((rv.norm_squared() + ru.norm_squared()).sqrt());
    }
    Ok(worst)
}

/// Characteristic polynomial coefficients (descending powers, leading 1)
/// computed the slow combinatorial way: the coefficient of the k-th power
/// down is the alternating sum of all k-by-k principal minors. Exponential
/// in the matrix size, hence the hard cap.
pub fn char_poly_oracle(mat: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = mat.nrows();
    if mat.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "square matrix",
            expected: n,
            actual: mat.ncols(),
        });
    }
    const LIMIT: usize = 12;
    if n > LIMIT {
        return Err(Error::SizeLimitExceeded { n, limit: LIMIT });
    }
    let mut elementary = vec![0.0f64; n + 1];
    elementary[0] = 1.0;
    let mut indices = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        indices.clear();
        for bit in 0..n {
            if mask & (1 << bit) != 0 {
                indices.push(bit);
            }
        }
        let k = indices.len();
        let sub = DMatrix::from_fn(k, k, |r, c| mat[(indices[r], indices[c])]);
        elementary[k] += sub.determinant();
    }
    Ok((0..=n)
        .map(|k| if k % 2 == 0 { elementary[k] } else { -elementary[k] })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_unit, Signature};
    use crate::clifford::{build_generators, octonion_generators};
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
    fn straight_line_without_center_velocity() {
        let alg = octonion(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v0 = random_unit(&mut rng, 8) * 1.4;
        let u0 = DVector::zeros(7);
        let config = IntegratorConfig {
            t_end: 2.0,
            steps: 400,
            record_every: 100,
        };
        let traj = integrate_geodesic(&alg, &v0, &u0, &config).unwrap();
        let last = traj.len() - 1;
        assert!((&traj.states()[last].v - &v0 * 2.0).norm() <= 1e-10);
        assert!(traj.states()[last].u.norm() <= 1e-12);
        assert!(traj.velocities()[last].du.norm() <= 1e-12);
    }

    #[test]
    fn heisenberg_riemannian_closed_form() {
        // For p = 0 with initial velocity ((1, 0), 1) the horizontal part
        // traces the circle (sin t, cos t - 1) and u(t) = (3t - sin t) / 2.
        let alg = heisenberg(0);
        let config = IntegratorConfig {
            t_end: 1.3,
            steps: 2000,
            record_every: 2000,
        };
        let traj = integrate_geodesic(
            &alg,
            &DVector::from_vec(vec![1.0, 0.0]),
            &DVector::from_vec(vec![1.0]),
            &config,
        )
        .unwrap();
        let state = traj.states().last().unwrap();
        let velocity = traj.velocities().last().unwrap();
        let t: f64 = 1.3;
        assert_relative_eq!(state.v[0], t.sin(), epsilon = 1e-9);
        assert_relative_eq!(state.v[1], t.cos() - 1.0, epsilon = 1e-9);
        assert_relative_eq!(state.u[0], (3.0 * t - t.sin()) / 2.0, epsilon = 1e-9);
        assert_relative_eq!(velocity.dv[0], t.cos(), epsilon = 1e-9);
        assert_relative_eq!(velocity.dv[1], -t.sin(), epsilon = 1e-9);
    }

    #[test]
    fn heisenberg_indefinite_closed_form() {
        // For p = 1 the same initial velocity follows the hyperbola
        // (sinh t, 1 - cosh t) with u(t) = (t + sinh t) / 2.
        let alg = heisenberg(1);
        let config = IntegratorConfig {
            t_end: 1.1,
            steps: 2000,
            record_every: 2000,
        };
        let traj = integrate_geodesic(
            &alg,
            &DVector::from_vec(vec![1.0, 0.0]),
            &DVector::from_vec(vec![1.0]),
            &config,
        )
        .unwrap();
        let state = traj.states().last().unwrap();
        let velocity = traj.velocities().last().unwrap();
        let t: f64 = 1.1;
        assert_relative_eq!(state.v[0], t.sinh(), epsilon = 1e-9);
        assert_relative_eq!(state.v[1], 1.0 - t.cosh(), epsilon = 1e-9);
        assert_relative_eq!(state.u[0], (t + t.sinh()) / 2.0, epsilon = 1e-9);
        assert_relative_eq!(velocity.du[0], (1.0 + t.cosh()) / 2.0, epsilon = 1e-9);
    }

    #[test]
    fn momentum_and_speed_are_conserved() {
        let alg = octonion(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v0 = random_unit(&mut rng, 8) * rng.random_range(0.5..1.5);
        let u0 = random_unit(&mut rng, 7) * rng.random_range(0.5..1.5);
        let config = IntegratorConfig {
            t_end: 1.0,
            steps: 5000,
            record_every: 500,
        };
        let traj = integrate_geodesic(&alg, &v0, &u0, &config).unwrap();
        let speed0 = alg
            .speed_squared(&Velocity::new(v0.clone(), u0.clone()))
            .unwrap();
        for ((t, state), velocity) in traj
            .times()
            .iter()
            .zip(traj.states())
            .zip(traj.velocities())
        {
            let mu = alg.momentum(state, velocity).unwrap();
            assert!((&mu - &u0).norm() <= 1e-8, "momentum drift at t = {t}");
            let frame_vel = Velocity::new(velocity.dv.clone(), mu);
            let speed = alg.speed_squared(&frame_vel).unwrap();
            assert!((speed - speed0).abs() <= 1e-8, "speed drift at t = {t}");
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let alg = octonion(1);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let v0 = random_unit(&mut rng, 8);
        let u0 = random_unit(&mut rng, 7) * 0.8;
        let final_state = |steps: usize| {
            let config = IntegratorConfig {
                t_end: 1.0,
                steps,
                record_every: steps,
            };
            let traj = integrate_geodesic(&alg, &v0, &u0, &config).unwrap();
            let state = traj.states().last().unwrap();
            let velocity = traj.velocities().last().unwrap();
            let mut flat = state.v.as_slice().to_vec();
            flat.extend_from_slice(state.u.as_slice());
            flat.extend_from_slice(velocity.dv.as_slice());
            flat.extend_from_slice(velocity.du.as_slice());
            flat
        };
        let coarse = final_state(50);
        let medium = final_state(100);
        let fine = final_state(200);
        let sup = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max)
        };
        let ratio = sup(&coarse, &medium) / sup(&medium, &fine);
        assert!(
            (12.0..=20.0).contains(&ratio),
            "halving the step divides the error by {ratio}, expected about 16"
        );
    }

    #[test]
    fn characteristic_polynomial_small_cases() {
        let identity = DMatrix::<f64>::identity(2, 2);
        assert_eq!(char_poly_oracle(&identity).unwrap(), vec![1.0, -2.0, 1.0]);

        let rotation = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(char_poly_oracle(&rotation).unwrap(), vec![1.0, 0.0, 1.0]);

        let reflection = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert_eq!(char_poly_oracle(&reflection).unwrap(), vec![1.0, 0.0, -1.0]);

        // Companion matrix of x^3 - 2x^2 + 3x - 4.
        let companion =
            DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 4.0, 1.0, 0.0, -3.0, 0.0, 1.0, 2.0]);
        let coeffs = char_poly_oracle(&companion).unwrap();
        for (got, expected) in coeffs.iter().zip([1.0, -2.0, 3.0, -4.0]) {
            assert_relative_eq!(*got, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn characteristic_polynomial_size_limit() {
        let big = DMatrix::<f64>::identity(13, 13);
        assert!(matches!(
            char_poly_oracle(&big),
            Err(Error::SizeLimitExceeded { n: 13, limit: 12 })
        ));
    }

    #[test]
    fn residual_accepts_integrated_and_rejects_perturbed() {
        let alg = heisenberg(1);
        let config = IntegratorConfig {
            t_end: 1.0,
            steps: 1000,
            record_every: 1,
        };
        let traj = integrate_geodesic(
            &alg,
            &DVector::from_vec(vec![0.7, 0.3]),
            &DVector::from_vec(vec![0.9]),
            &config,
        )
        .unwrap();
        let clean = geodesic_residual(&alg, &traj).unwrap();
        assert!(clean <= 1e-5, "clean residual {clean:e}");

        let mut positions = traj.states().to_vec();
        positions[500].v[0] += 1e-3;
        let perturbed = Trajectory::new(
            traj.times().to_vec(),
            positions,
            traj.velocities().to_vec(),
            traj.causal(),
        )
        .unwrap();
        let dirty = geodesic_residual(&alg, &perturbed).unwrap();
        assert!(dirty >= 1e-1, "perturbation went unnoticed: {dirty:e}");
    }

    #[test]
    fn residual_input_validation() {
        let alg = heisenberg(1);
        let point = GroupElement::new(DVector::zeros(2), DVector::zeros(1));
        let velocity = Velocity::new(DVector::zeros(2), DVector::zeros(1));
        let causal = crate::algebra::CausalType::Spacelike;

        let few = Trajectory::new(
            vec![0.0, 0.1],
            vec![point.clone(), point.clone()],
            vec![velocity.clone(), velocity.clone()],
            causal,
        )
        .unwrap();
        assert!(matches!(
            geodesic_residual(&alg, &few),
            Err(Error::InvalidRange { .. })
        ));

        let crooked = Trajectory::new(
            vec![0.0, 0.1, 0.3],
            vec![point.clone(), point.clone(), point],
            vec![velocity.clone(), velocity.clone(), velocity],
            causal,
        )
        .unwrap();
        assert!(matches!(
            geodesic_residual(&alg, &crooked),
            Err(Error::NonUniformGrid { index: 2, .. })
        ));
    }
}
