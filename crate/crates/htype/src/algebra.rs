//! H-type algebras over an indefinite horizontal metric.
//!
//! The algebra is V + U with V = R^n carrying the diagonal metric of index p,
//! U = R^m the center, and the bracket of horizontal vectors defined through
//! the generator family. Group elements live in exponential coordinates.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::{validate_generators, GeneratorSet};
use crate::error::{Error, Result};

/// Counts of timelike (p) and spacelike (q) directions of the metric on V.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    /// A valid horizontal signature: n = p + q even, n >= 2, and p <= n/2.
    /// Larger index is handled by negating the metric, so it is rejected
    /// rather than silently renormalized.
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidSignature {
                p,
                q,
                reason: "horizontal dimension p + q must be even and at least 2",
            });
        }
        if p > n / 2 {
            return Err(Error::InvalidSignature {
                p,
                q,
                reason: "index p may be at most (p + q)/2",
            });
        }
        Ok(Signature { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Metric sign of the i-th coordinate direction: -1 for i < p, +1 after.
    pub fn epsilon(&self, i: usize) -> f64 {
        if i < self.p {
            -1.0
        } else {
            1.0
        }
    }

    /// The diagonal metric tensor on V.
    pub fn eta(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| {
            if i == j {
                self.epsilon(i)
            } else {
                0.0
            }
        })
    }

    /// Indefinite inner product of two horizontal vectors.
    pub fn inner(&self, v: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        let n = self.n();
        for x in [v, w] {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "horizontal vector",
                    expected: n,
                    actual: x.len(),
                });
            }
        }
        Ok((0..n).map(|i| self.epsilon(i) * v[i] * w[i]).sum())
    }

    /// Causal class of a horizontal vector; the zero vector is spacelike.
    pub fn causal_type(&self, v: &DVector<f64>) -> Result<CausalType> {
        let norm2 = self.inner(v, v)?;
        Ok(if norm2 < 0.0 {
            CausalType::Timelike
        } else if norm2 > 0.0 || v.iter().all(|x| *x == 0.0) {
            CausalType::Spacelike
        } else {
            CausalType::Lightlike
        })
    }
}

/// Causal class of a horizontal vector under the indefinite metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalType {
    Timelike,
    Spacelike,
    Lightlike,
}

impl std::fmt::Display for CausalType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CausalType::Timelike => "timelike",
            CausalType::Spacelike => "spacelike",
            CausalType::Lightlike => "lightlike",
        };
        f.write_str(name)
    }
}

/// A group element in exponential coordinates (v, u).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub v: DVector<f64>,
    pub u: DVector<f64>,
}

impl GroupElement {
    pub fn new(v: DVector<f64>, u: DVector<f64>) -> Self {
        GroupElement { v, u }
    }
}

/// A tangent vector (dv, du) in exponential coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Velocity {
    pub dv: DVector<f64>,
    pub du: DVector<f64>,
}

impl Velocity {
    pub fn new(dv: DVector<f64>, du: DVector<f64>) -> Self {
        Velocity { dv, du }
    }
}

/// One leg of the left-invariant frame {V_1..V_n, U_1..U_m}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameVector {
    /// V_i, horizontal; zero-based index below n.
    Horizontal(usize),
    /// U_a, vertical; zero-based index below m.
    Vertical(usize),
}

/// Immutable model of an H-type algebra: signature, generators, and the
/// cached structure constants of the bracket.
#[derive(Clone, Debug)]
pub struct HTypeAlgebra {
    sig: Signature,
    gens: GeneratorSet,
    b: Vec<DMatrix<f64>>,
}

impl HTypeAlgebra {
    /// Builds the algebra, validating the generators and the dimension match.
    pub fn new(gens: GeneratorSet, sig: Signature) -> Result<Self> {
        if gens.n() != sig.n() {
            return Err(Error::DimensionMismatch {
                what: "generator dimension vs signature",
                expected: sig.n(),
                actual: gens.n(),
            });
        }
        let report = validate_generators(&gens);
        if !report.pass() {
            return Err(Error::InvalidGenerators(report));
        }
        // The bracket form [e_i, e_j]_a = e_j^T J_a e_i is the source of
        // truth; the cached constants are its values on the basis.
        let b: Vec<DMatrix<f64>> = gens.matrices().iter().map(|j| j.transpose()).collect();
        let alg = HTypeAlgebra { sig, gens, b };
        for alpha in 0..alg.m() {
            for i in 0..alg.n() {
                for j in 0..alg.n() {
                    let direct = alg.gens.matrices()[alpha][(j, i)];
                    assert_eq!(alg.b[alpha][(i, j)], direct, "structure constant cache");
                }
            }
        }
        Ok(alg)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    pub fn m(&self) -> usize {
        self.gens.m()
    }

    /// Structure constants as matrices: b[a][(i, j)] is the a-component of
    /// the bracket of the i-th and j-th horizontal basis vectors.
    pub fn structure_constants(&self) -> &[DMatrix<f64>] {
        &self.b
    }

    fn expect_center(&self, u: &DVector<f64>, what: &'static str) -> Result<()> {
        if u.len() != self.m() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.m(),
                actual: u.len(),
            });
        }
        Ok(())
    }

    fn expect_horizontal(&self, v: &DVector<f64>, what: &'static str) -> Result<()> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what,
                expected: self.n(),
                actual: v.len(),
            });
        }
        Ok(())
    }

    /// The linear combination j(u) = u_1 J_1 + ... + u_m J_m.
    pub fn j_of_u(&self, u: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.expect_center(u, "center vector")?;
        let n = self.n();
        let mut j = DMatrix::<f64>::zeros(n, n);
        for (alpha, mat) in self.gens.matrices().iter().enumerate() {
            if u[alpha] != 0.0 {
                j += mat * u[alpha];
            }
        }
        Ok(j)
    }

    /// The geodesic operator eta * j(u).
    pub fn a_of_u(&self, u: &DVector<f64>) -> Result<DMatrix<f64>> {
        let mut a = self.j_of_u(u)?;
        for i in 0..self.sig.p {
            for j in 0..self.n() {
                a[(i, j)] = -a[(i, j)];
            }
        }
        Ok(a)
    }

    /// Bracket of two horizontal vectors, an m-vector with components
    /// [v, w]_a = w^T J_a v.
    pub fn bracket(&self, v: &DVector<f64>, w: &DVector<f64>) -> Result<DVector<f64>> {
        self.expect_horizontal(v, "bracket argument")?;
        self.expect_horizontal(w, "bracket argument")?;
        let mut out = DVector::<f64>::zeros(self.m());
        for (alpha, mat) in self.gens.matrices().iter().enumerate() {
            out[alpha] = w.dot(&(mat * v));
        }
        Ok(out)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(DVector::zeros(self.n()), DVector::zeros(self.m()))
    }

    /// Group product in exponential coordinates. The center picks up half the
    /// bracket of the horizontal parts; everything else is additive.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.expect_horizontal(&a.v, "group element v")?;
        self.expect_horizontal(&b.v, "group element v")?;
        self.expect_center(&a.u, "group element u")?;
        self.expect_center(&b.u, "group element u")?;
        let v = &a.v + &b.v;
        let u = &a.u + &b.u + self.bracket(&a.v, &b.v)? * 0.5;
        Ok(GroupElement::new(v, u))
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement::new(-&a.v, -&a.u)
    }

    /// Coordinate matrix of the left-invariant frame at a point, columns
    /// V_1..V_n, U_1..U_m over rows dv_1..dv_n, du_1..du_m. The frame is
    /// declared orthonormal by the left-invariant metric; at the identity it
    /// is the coordinate basis, and its determinant is 1 everywhere.
    pub fn frame_at(&self, at: &GroupElement) -> Result<DMatrix<f64>> {
        self.expect_horizontal(&at.v, "group element v")?;
        self.expect_center(&at.u, "group element u")?;
        let (n, m) = (self.n(), self.m());
        let mut frame = DMatrix::<f64>::identity(n + m, n + m);
        for (alpha, mat) in self.gens.matrices().iter().enumerate() {
            let jv = mat * &at.v;
            for i in 0..n {
                frame[(n + alpha, i)] = 0.5 * jv[i];
            }
        }
        Ok(frame)
    }

    /// Covariant derivative of one frame leg along another, expanded in the
    /// frame. Horizontal pairs produce half their bracket in the center;
    /// mixed pairs rotate back into the horizontal layer; vertical pairs
    /// vanish.
    pub fn connection(&self, x: FrameVector, y: FrameVector) -> Result<DVector<f64>> {
        let (n, m) = (self.n(), self.m());
        let check = |fv: FrameVector| -> Result<()> {
            match fv {
                FrameVector::Horizontal(i) if i >= n => Err(Error::IndexOutOfRange {
                    what: "horizontal frame leg",
                    index: i,
                    len: n,
                }),
                FrameVector::Vertical(a) if a >= m => Err(Error::IndexOutOfRange {
                    what: "vertical frame leg",
                    index: a,
                    len: m,
                }),
                _ => Ok(()),
            }
        };
        check(x)?;
        check(y)?;
        let mut out = DVector::<f64>::zeros(n + m);
        match (x, y) {
            (FrameVector::Horizontal(i), FrameVector::Horizontal(j)) => {
                for alpha in 0..m {
                    out[n + alpha] = 0.5 * self.b[alpha][(i, j)];
                }
            }
            (FrameVector::Horizontal(i), FrameVector::Vertical(alpha))
            | (FrameVector::Vertical(alpha), FrameVector::Horizontal(i)) => {
                let col = self.gens.matrices()[alpha].column(i);
                for j in 0..n {
                    out[j] = -0.5 * self.sig.epsilon(j) * col[j];
                }
            }
            (FrameVector::Vertical(_), FrameVector::Vertical(_)) => {}
        }
        Ok(out)
    }

    /// First integral of the geodesic flow: the center component of velocity
    /// measured in the frame, du + [dv, v] / 2. Constant along geodesics.
    pub fn momentum(&self, at: &GroupElement, vel: &Velocity) -> Result<DVector<f64>> {
        self.expect_center(&vel.du, "velocity du")?;
        Ok(&vel.du + self.bracket(&vel.dv, &at.v)? * 0.5)
    }

    /// Squared length of a tangent vector whose components are given in the
    /// frame: the indefinite square of the horizontal part plus the Euclidean
    /// square of the vertical part. Along a geodesic this is constant when
    /// the vertical part is the frame component, i.e. the momentum.
    pub fn speed_squared(&self, vel: &Velocity) -> Result<f64> {
        self.expect_center(&vel.du, "velocity du")?;
        Ok(self.sig.inner(&vel.dv, &vel.dv)? + vel.du.norm_squared())
    }

    /// Samples random orthogonal center directions and tests whether the
    /// composition j(u1) j(u2) acts on each vector like some j(u3). The
    /// least-squares system is solved in closed form because the columns
    /// J_b v are mutually orthogonal with norm |v|.
    pub fn check_j2(&self, trials: usize, seed: u64) -> J2Report {
        let m = self.m();
        let tolerance = 1e-8;
        if m < 2 {
            return J2Report {
                requested: trials,
                performed: 0,
                max_residual: 0.0,
                tolerance,
                satisfied: true,
                seed,
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_residual: f64 = 0.0;
        let mut performed = 0;
        while performed < trials {
            let u1 = random_unit(&mut rng, m);
            let mut u2 = random_unit(&mut rng, m);
            u2 -= &u1 * u1.dot(&u2);
            if u2.norm() < 0.1 {
                continue;
            }
            u2 /= u2.norm();
            let v = random_unit(&mut rng, self.n());
            let target = self.j_of_u(&u1).unwrap() * (self.j_of_u(&u2).unwrap() * &v);
            let mut u3 = DVector::<f64>::zeros(m);
            for (beta, mat) in self.gens.matrices().iter().enumerate() {
                u3[beta] = (mat * &v).dot(&target);
            }
            let mut image = DVector::<f64>::zeros(self.n());
            for (beta, mat) in self.gens.matrices().iter().enumerate() {
                image += mat * &v * u3[beta];
            }
            max_residual = max_residual.max((image - target).norm());
            performed += 1;
        }
        J2Report {
            requested: trials,
            performed,
            max_residual,
            tolerance,
            satisfied: max_residual <= tolerance,
            seed,
        }
    }
}

/// Result of the composition test on random center directions.
#[derive(Clone, Debug, Serialize)]
pub struct J2Report {
    pub requested: usize,
    pub performed: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub satisfied: bool,
    pub seed: u64,
}

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(len, |_, _| rng.random_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 0.1 {
            return v / norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_generators, octonion_generators};
    use approx::assert_relative_eq;

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
    fn signature_bounds() {
        assert!(Signature::new(1, 1).is_ok());
        assert!(Signature::new(0, 8).is_ok());
        assert!(Signature::new(4, 4).is_ok());
        assert!(matches!(
            Signature::new(5, 3),
            Err(Error::InvalidSignature { .. })
        ));
        assert!(matches!(
            Signature::new(1, 2),
            Err(Error::InvalidSignature { .. })
        ));
        assert!(matches!(
            Signature::new(0, 0),
            Err(Error::InvalidSignature { .. })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let sig = Signature::new(1, 1).unwrap();
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        let diag = DVector::from_vec(vec![1.0, 1.0]);
        assert_eq!(sig.inner(&e1, &e1).unwrap(), -1.0);
        assert_eq!(sig.inner(&diag, &diag).unwrap(), 0.0);

        let sig26 = Signature::new(2, 6).unwrap();
        let e5 = DVector::from_fn(8, |i, _| if i == 4 { 1.0 } else { 0.0 });
        assert_eq!(sig26.inner(&e5, &e5).unwrap(), 1.0);
    }

    #[test]
    fn causal_classification() {
        let sig = Signature::new(1, 1).unwrap();
        let classify = |x: Vec<f64>| sig.causal_type(&DVector::from_vec(x)).unwrap();
        assert_eq!(classify(vec![1.0, 0.0]), CausalType::Timelike);
        assert_eq!(classify(vec![1.0, 1.0]), CausalType::Lightlike);
        assert_eq!(classify(vec![0.0, 1.0]), CausalType::Spacelike);
        assert_eq!(classify(vec![0.0, 0.0]), CausalType::Spacelike);
    }

    #[test]
    fn construction_rejects_mismatched_dimensions() {
        let result = HTypeAlgebra::new(octonion_generators(), Signature::new(1, 1).unwrap());
        assert!(matches!(result, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn heisenberg_structure_constants() {
        let alg = heisenberg(1);
        let b = &alg.structure_constants()[0];
        assert_eq!(b[(0, 1)], -1.0);
        assert_eq!(b[(1, 0)], 1.0);
        assert_eq!(b[(0, 0)], 0.0);
        assert_eq!(b[(1, 1)], 0.0);
    }

    #[test]
    fn j_of_u_basis_vectors() {
        let alg = octonion(1);
        let e1 = DVector::from_fn(7, |i, _| if i == 0 { 1.0 } else { 0.0 });
        assert_eq!(alg.j_of_u(&e1).unwrap(), alg.generators().matrices()[0]);
        let zero = DVector::zeros(7);
        assert_eq!(alg.j_of_u(&zero).unwrap(), DMatrix::zeros(8, 8));
    }

    #[test]
    fn j_of_u_squares_to_minus_norm() {
        let alg = octonion(2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unit(&mut rng, 7) * 2.0;
        let j = alg.j_of_u(&u).unwrap();
        let residual = (&j * &j + DMatrix::identity(8, 8) * 4.0).abs().max();
        assert!(residual <= 1e-12, "residual {residual:e}");
    }

    #[test]
    fn a_of_u_heisenberg() {
        let alg = heisenberg(1);
        let a = alg.a_of_u(&DVector::from_vec(vec![1.0])).unwrap();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]));
    }

    #[test]
    fn a_of_u_is_eta_orthogonal() {
        for p in 0..=4 {
            let alg = octonion(p);
            let mut rng = ChaCha8Rng::seed_from_u64(11 + p as u64);
            let u = random_unit(&mut rng, 7) * 1.7;
            let a = alg.a_of_u(&u).unwrap();
            let norm2 = u.norm_squared();
            let gram = (&a * a.transpose() - DMatrix::identity(8, 8) * norm2)
                .abs()
                .max();
            assert!(gram <= 1e-10, "p = {p}: AA^T residual {gram:e}");
            let eta = alg.signature().eta();
            let skew_adj = (&eta * &a + a.transpose() * &eta).abs().max();
            assert!(skew_adj <= 1e-12, "p = {p}: eta-skew residual {skew_adj:e}");
        }
    }

    #[test]
    fn bracket_examples() {
        let alg = octonion(1);
        let e = |i: usize| DVector::from_fn(8, |k, _| if k == i { 1.0 } else { 0.0 });
        let lie = alg.bracket(&e(0), &e(1)).unwrap();
        assert_eq!(lie[0], -1.0);
        for alpha in 1..7 {
            assert_eq!(lie[alpha], 0.0, "component {alpha}");
        }
        let h = heisenberg(1);
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        assert_eq!(h.bracket(&e1, &e2).unwrap()[0], -1.0);
    }

    #[test]
    fn bracket_is_bilinear_and_skew() {
        let alg = octonion(3);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let v = random_unit(&mut rng, 8) * rng.random_range(0.5..2.0);
            let w = random_unit(&mut rng, 8) * rng.random_range(0.5..2.0);
            let z = random_unit(&mut rng, 8);
            let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let lhs = alg.bracket(&(&v * a + &w * b), &z).unwrap();
            let rhs = alg.bracket(&v, &z).unwrap() * a + alg.bracket(&w, &z).unwrap() * b;
            assert!((lhs - rhs).norm() <= 1e-12);
            let skew =
                (alg.bracket(&v, &w).unwrap() + alg.bracket(&w, &v).unwrap()).norm();
            assert!(skew <= 1e-12);
            assert!(alg.bracket(&v, &v).unwrap().norm() <= 1e-15);
        }
    }

    #[test]
    fn bracket_duality_with_metric() {
        let alg = octonion(2);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..100 {
            let u = random_unit(&mut rng, 7) * rng.random_range(0.5..2.0);
            let v = random_unit(&mut rng, 8) * rng.random_range(0.5..2.0);
            let w = random_unit(&mut rng, 8) * rng.random_range(0.5..2.0);
            let lhs = u.dot(&alg.bracket(&v, &w).unwrap());
            let av = alg.a_of_u(&u).unwrap() * &v;
            let rhs = alg.signature().inner(&av, &w).unwrap();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn group_axioms() {
        let alg = octonion(1);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let random_element = |rng: &mut ChaCha8Rng| {
            GroupElement::new(
                DVector::from_fn(8, |_, _| rng.random_range(-1.0..1.0)),
                DVector::from_fn(7, |_, _| rng.random_range(-1.0..1.0)),
            )
        };
        for _ in 0..20 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let c = random_element(&mut rng);
            let ab_c = alg
                .multiply(&alg.multiply(&a, &b).unwrap(), &c)
                .unwrap();
            let a_bc = alg
                .multiply(&a, &alg.multiply(&b, &c).unwrap())
                .unwrap();
            assert!((&ab_c.v - &a_bc.v).norm() <= 1e-12);
            assert!((&ab_c.u - &a_bc.u).norm() <= 1e-12);

            let e = alg.identity();
            let ae = alg.multiply(&a, &e).unwrap();
            assert_eq!(ae, a);
            let inv = alg.inverse(&a);
            let prod = alg.multiply(&a, &inv).unwrap();
            assert!(prod.v.norm() <= 1e-12 && prod.u.norm() <= 1e-12);
        }
    }

    #[test]
    fn frame_at_identity_and_determinant() {
        let alg = octonion(1);
        let id_frame = alg.frame_at(&alg.identity()).unwrap();
        assert_eq!(id_frame, DMatrix::identity(15, 15));

        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let at = GroupElement::new(
            DVector::from_fn(8, |_, _| rng.random_range(-2.0..2.0)),
            DVector::from_fn(7, |_, _| rng.random_range(-2.0..2.0)),
        );
        let frame = alg.frame_at(&at).unwrap();
        assert_relative_eq!(frame.determinant(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn heisenberg_frame_center_coefficient() {
        let alg = heisenberg(1);
        let at = GroupElement::new(
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0]),
        );
        let frame = alg.frame_at(&at).unwrap();
        // Second frame leg picks up half the structure constant of [e_1, e_2].
        assert_eq!(frame[(2, 1)], 0.5 * alg.structure_constants()[0][(0, 1)]);
    }

    #[test]
    fn connection_table() {
        let alg = heisenberg(1);
        let zero = alg
            .connection(FrameVector::Vertical(0), FrameVector::Vertical(0))
            .unwrap();
        assert_eq!(zero.norm(), 0.0);
        let diag = alg
            .connection(FrameVector::Horizontal(0), FrameVector::Horizontal(0))
            .unwrap();
        assert_eq!(diag.norm(), 0.0);

        let mixed = alg
            .connection(FrameVector::Vertical(0), FrameVector::Horizontal(0))
            .unwrap();
        assert_eq!(mixed, DVector::from_vec(vec![0.0, 0.5, 0.0]));
        let sym = alg
            .connection(FrameVector::Horizontal(0), FrameVector::Vertical(0))
            .unwrap();
        assert_eq!(mixed, sym);

        let horizontal = alg
            .connection(FrameVector::Horizontal(0), FrameVector::Horizontal(1))
            .unwrap();
        assert_eq!(horizontal, DVector::from_vec(vec![0.0, 0.0, -0.5]));

        assert!(matches!(
            alg.connection(FrameVector::Horizontal(2), FrameVector::Vertical(0)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn j2_condition_on_builtin_families() {
        let oct = octonion(1);
        let report = oct.check_j2(50, 99);
        assert!(report.satisfied, "max residual {:e}", report.max_residual);
        assert_eq!(report.performed, 50);

        let quat = HTypeAlgebra::new(
            build_generators(4, 3).unwrap(),
            Signature::new(1, 3).unwrap(),
        )
        .unwrap();
        assert!(quat.check_j2(50, 99).satisfied);

        let h = heisenberg(1);
        let vacuous = h.check_j2(50, 99);
        assert!(vacuous.satisfied);
        assert_eq!(vacuous.performed, 0);
    }
}
