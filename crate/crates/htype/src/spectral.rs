//! Spectral classification of the geodesic operator A = eta j(u).
//!
//! A is |u| times an orthogonal matrix, hence normal, and splits into its
//! commuting symmetric part S and skew part N. Eigenvalues of S locate the
//! real parts; N supplies the imaginary parts and the rotation planes. The
//! result is an orthogonal change of basis taking A to 2x2 blocks: one
//! hyperbolic cell when the index is odd, rotation cells, and spiral
//! quartets, rearranged so equal kinds sit together.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::HTypeAlgebra;
use crate::error::{Error, Result};

/// Characteristic polynomial coefficients in descending degree with leading
/// coefficient 1, by the Faddeev-LeVerrier trace recursion.
pub fn char_poly(mat: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = mat.nrows();
    if mat.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "square matrix",
            expected: n,
            actual: mat.ncols(),
        });
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    let mut work = DMatrix::<f64>::zeros(n, n);
    let mut c = 1.0;
    for k in 1..=n {
        for i in 0..n {
            work[(i, i)] += c;
        }
        work = mat * work;
        c = -work.trace() / k as f64;
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// One complex eigenvalue quartet +-(alpha +- i beta).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quartet {
    pub alpha: f64,
    pub beta: f64,
}

/// Position and parameters of one 2x2 block of the rearranged form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockSpec {
    pub kind: BlockKind,
    /// Column offset of the block in the rearranged basis.
    pub offset: usize,
    pub alpha: f64,
    pub beta: f64,
}

/// The four 2x2 block shapes of the rearranged operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// [[0, a], [a, 0]] with a = |u|; real eigenvalue pair.
    Hyperbolic,
    /// [[0, b], [-b, 0]] with b = |u|; imaginary eigenvalue pair.
    Rotation,
    /// [[alpha, beta], [-beta, alpha]]; eigenvalues alpha +- i beta.
    PositiveSpiral,
    /// [[-alpha, -beta], [beta, -alpha]]; eigenvalues -alpha -+ i beta.
    NegativeSpiral,
}

/// Consistency measures of the decomposition, all near machine precision
/// for valid inputs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectralResiduals {
    /// |A - T^t Dtilde T|_F / |u| for T = Ptilde P.
    pub reconstruction: f64,
    /// |P^t P - I|_F.
    pub orthogonality: f64,
    /// |Dtilde Dtilde^t - |u|^2 I|_F / |u|^2.
    pub block_identity: f64,
}

/// Full classification of A = eta j(u): counts, quartet parameters,
/// eigenvalues, and the orthogonal block decomposition A = T^t Dtilde T.
#[derive(Clone, Debug)]
pub struct SpectralData {
    u_norm: f64,
    s: usize,
    r: usize,
    quartets: Vec<Quartet>,
    p: DMatrix<f64>,
    p_tilde: DMatrix<f64>,
    d_tilde: DMatrix<f64>,
    eigenvalues: Vec<Complex64>,
    residuals: SpectralResiduals,
}

impl SpectralData {
    pub fn u_norm(&self) -> f64 {
        self.u_norm
    }

    /// Number of real eigenvalue pairs after rearrangement: 0 or 1.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Real pairs plus imaginary pairs; 2r + 4 * quartets = n.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn quartets(&self) -> &[Quartet] {
        &self.quartets
    }

    /// All n eigenvalues, sorted by descending real then imaginary part.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Orthogonal matrix of the first change of basis, rows are the block
    /// basis vectors in interleaved order.
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Permutation regrouping interleaved blocks by kind.
    pub fn p_tilde(&self) -> &DMatrix<f64> {
        &self.p_tilde
    }

    /// Rearranged block-diagonal operator; A = T^t Dtilde T.
    pub fn d_tilde(&self) -> &DMatrix<f64> {
        &self.d_tilde
    }

    /// The combined transform T = Ptilde P from original coordinates to the
    /// rearranged basis.
    pub fn transform(&self) -> DMatrix<f64> {
        &self.p_tilde * &self.p
    }

    pub fn residuals(&self) -> SpectralResiduals {
        self.residuals
    }

    /// Blocks of Dtilde in layout order: the hyperbolic cell, rotation
    /// cells, positive spirals, then negative spirals.
    pub fn blocks(&self) -> Vec<BlockSpec> {
        let mut out = Vec::new();
        if self.s == 1 {
            out.push(BlockSpec {
                kind: BlockKind::Hyperbolic,
                offset: 0,
                alpha: self.u_norm,
                beta: 0.0,
            });
        }
        for i in 0..self.r - self.s {
            out.push(BlockSpec {
                kind: BlockKind::Rotation,
                offset: 2 * self.s + 2 * i,
                alpha: 0.0,
                beta: self.u_norm,
            });
        }
        let k = self.quartets.len();
        for (idx, q) in self.quartets.iter().enumerate() {
            out.push(BlockSpec {
                kind: BlockKind::PositiveSpiral,
                offset: 2 * self.r + 2 * idx,
                alpha: q.alpha,
                beta: q.beta,
            });
        }
        for (idx, q) in self.quartets.iter().enumerate() {
            out.push(BlockSpec {
                kind: BlockKind::NegativeSpiral,
                offset: 2 * self.r + 2 * k + 2 * idx,
                alpha: q.alpha,
                beta: q.beta,
            });
        }
        out
    }
}

/// An eigenvalue cluster of the symmetric part, with the skew part
/// restricted to it.
struct Cluster {
    a: f64,
    basis: DMatrix<f64>,
    restricted_skew: DMatrix<f64>,
    b: f64,
}

/// A quartet candidate before sorting: parameters plus the four global
/// basis columns (positive plane then negative plane).
struct QuartetBasis {
    alpha: f64,
    beta: f64,
    plus: [DVector<f64>; 2],
    minus: [DVector<f64>; 2],
}

/// Classifies the spectrum of A = eta j(u) and builds its block form.
pub fn classify(alg: &HTypeAlgebra, u: &DVector<f64>) -> Result<SpectralData> {
    if u.len() != alg.m() {
        return Err(Error::DimensionMismatch {
            what: "center vector",
            expected: alg.m(),
            actual: u.len(),
        });
    }
    let u_norm = u.norm();
    if u_norm == 0.0 {
        return Err(Error::ZeroCenterVelocity);
    }
    let n = alg.n();
    let a_mat = alg.a_of_u(u)?;
    let sym = (&a_mat + a_mat.transpose()) * 0.5;
    let skew = (&a_mat - a_mat.transpose()) * 0.5;

    let eigen = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eigen.eigenvalues[i]
            .partial_cmp(&eigen.eigenvalues[j])
            .unwrap()
    });

    // Group eigenvalues of the symmetric part into clusters; the imaginary
    // part of each cluster comes from the skew part restricted to it, which
    // avoids the catastrophic cancellation of sqrt(|u|^2 - a^2) near a real
    // eigenvalue.
    let gap = 1e-7 * u_norm;
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eigen.eigenvalues[order[end]] - eigen.eigenvalues[order[end - 1]] <= gap
        {
            end += 1;
        }
        let members = &order[start..end];
        let dim = members.len();
        let basis = DMatrix::from_fn(n, dim, |row, col| eigen.eigenvectors[(row, members[col])]);
        let a = members.iter().map(|&i| eigen.eigenvalues[i]).sum::<f64>() / dim as f64;
        let restricted_skew = basis.transpose() * &skew * &basis;
        let b = restricted_skew.norm() / (dim as f64).sqrt();
        clusters.push(Cluster {
            a,
            basis,
            restricted_skew,
            b,
        });
        start = end;
    }

    let bucket_tol = 1e-8 * u_norm;
    let mut plus_real: Vec<DVector<f64>> = Vec::new();
    let mut minus_real: Vec<DVector<f64>> = Vec::new();
    let mut rotation_planes: Vec<[DVector<f64>; 2]> = Vec::new();
    let mut spiral_indices: Vec<usize> = Vec::new();
    for (idx, cluster) in clusters.iter().enumerate() {
        if cluster.a.abs() <= bucket_tol {
            // Imaginary pairs; processed first so boundary cases where a
            // quartet collapses land here deterministically.
            assert!(cluster.basis.ncols() % 2 == 0, "odd rotation cluster");
            for (x, y) in extract_planes(&cluster.restricted_skew) {
                rotation_planes.push([&cluster.basis * &y, &cluster.basis * &x]);
            }
        } else if cluster.b <= bucket_tol {
            let sink = if cluster.a > 0.0 {
                &mut plus_real
            } else {
                &mut minus_real
            };
            for col in 0..cluster.basis.ncols() {
                sink.push(cluster.basis.column(col).into_owned());
            }
        } else {
            spiral_indices.push(idx);
        }
    }

    assert_eq!(
        plus_real.len(),
        minus_real.len(),
        "real eigenvalues come in +-|u| pairs"
    );
    let s = plus_real.len() % 2;
    let mut quartet_bases: Vec<QuartetBasis> = Vec::new();
    // Leftover real pairs beyond the single hyperbolic cell pack two at a
    // time into quartets with beta = 0, the limit the spiral formulas
    // degenerate to; any orthonormal basis of each eigenspace block works.
    for pair in plus_real[s..].chunks_exact(2).zip(minus_real[s..].chunks_exact(2)) {
        quartet_bases.push(QuartetBasis {
            alpha: u_norm,
            beta: 0.0,
            plus: [pair.0[0].clone(), pair.0[1].clone()],
            minus: [pair.1[0].clone(), pair.1[1].clone()],
        });
    }

    // Genuine quartets: pair each positive cluster with its mirror.
    let pair_tol = 1e-7 * u_norm;
    for &pi in spiral_indices.iter().filter(|&&i| clusters[i].a > 0.0) {
        let positive = &clusters[pi];
        let negative = spiral_indices
            .iter()
            .filter(|&&i| clusters[i].a < 0.0)
            .min_by(|&&i, &&j| {
                let di = (clusters[i].a + positive.a).abs();
                let dj = (clusters[j].a + positive.a).abs();
                di.partial_cmp(&dj).unwrap()
            })
            .map(|&i| &clusters[i])
            .expect("positive spiral cluster without a mirror");
        assert!(
            (negative.a + positive.a).abs() <= pair_tol,
            "spiral clusters are not symmetric"
        );
        assert_eq!(positive.basis.ncols(), negative.basis.ncols());
        let alpha = (positive.a - negative.a) / 2.0;
        let beta = (positive.b + negative.b) / 2.0;
        let plus_planes = extract_planes(&positive.restricted_skew);
        let minus_planes = extract_planes(&negative.restricted_skew);
        for ((px, py), (mx, my)) in plus_planes.into_iter().zip(minus_planes) {
            quartet_bases.push(QuartetBasis {
                alpha,
                beta,
                plus: [&positive.basis * &py, &positive.basis * &px],
                minus: [&negative.basis * &mx, &negative.basis * &my],
            });
        }
    }
    quartet_bases.sort_by(|x, y| y.alpha.partial_cmp(&x.alpha).unwrap());

    let r = s + rotation_planes.len();
    let k = quartet_bases.len();
    assert_eq!(2 * r + 4 * k, n, "block dimensions must add up to n");

    // Interleaved basis: hyperbolic cell, rotation planes, then each
    // quartet's positive and negative planes adjacent to each other.
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    if s == 1 {
        let sqrt_half = 0.5f64.sqrt();
        columns.push((&plus_real[0] + &minus_real[0]) * sqrt_half);
        columns.push((&plus_real[0] - &minus_real[0]) * sqrt_half);
    }
    for plane in &rotation_planes {
        columns.push(plane[0].clone());
        columns.push(plane[1].clone());
    }
    for q in &quartet_bases {
        columns.extend(q.plus.iter().cloned());
        columns.extend(q.minus.iter().cloned());
    }
    let q_mat = DMatrix::from_columns(&columns);
    let p = q_mat.transpose();

    // Regrouping permutation: identity on pairs, quartet planes pulled
    // apart so all positive spirals precede all negative ones.
    let mut p_tilde = DMatrix::<f64>::zeros(n, n);
    for i in 0..2 * r {
        p_tilde[(i, i)] = 1.0;
    }
    for j in 0..k {
        for offset in 0..2 {
            p_tilde[(2 * r + 2 * j + offset, 2 * r + 4 * j + offset)] = 1.0;
            p_tilde[(2 * r + 2 * k + 2 * j + offset, 2 * r + 4 * j + 2 + offset)] = 1.0;
        }
    }

    let mut d_tilde = DMatrix::<f64>::zeros(n, n);
    if s == 1 {
        d_tilde[(0, 1)] = u_norm;
        d_tilde[(1, 0)] = u_norm;
    }
    for i in 0..r - s {
        let off = 2 * s + 2 * i;
        d_tilde[(off, off + 1)] = u_norm;
        d_tilde[(off + 1, off)] = -u_norm;
    }
    for (j, q) in quartet_bases.iter().enumerate() {
        let off = 2 * r + 2 * j;
        d_tilde[(off, off)] = q.alpha;
        d_tilde[(off, off + 1)] = q.beta;
        d_tilde[(off + 1, off)] = -q.beta;
        d_tilde[(off + 1, off + 1)] = q.alpha;
        let off = 2 * r + 2 * k + 2 * j;
        d_tilde[(off, off)] = -q.alpha;
        d_tilde[(off, off + 1)] = -q.beta;
        d_tilde[(off + 1, off)] = q.beta;
        d_tilde[(off + 1, off + 1)] = -q.alpha;
    }

    let mut eigenvalues = Vec::with_capacity(n);
    if s == 1 {
        eigenvalues.push(Complex64::new(u_norm, 0.0));
        eigenvalues.push(Complex64::new(-u_norm, 0.0));
    }
    for _ in 0..r - s {
        eigenvalues.push(Complex64::new(0.0, u_norm));
        eigenvalues.push(Complex64::new(0.0, -u_norm));
    }
    for q in &quartet_bases {
        eigenvalues.push(Complex64::new(q.alpha, q.beta));
        eigenvalues.push(Complex64::new(q.alpha, -q.beta));
        eigenvalues.push(Complex64::new(-q.alpha, q.beta));
        eigenvalues.push(Complex64::new(-q.alpha, -q.beta));
    }
    eigenvalues.sort_by(|x, y| {
        (y.re, y.im)
            .partial_cmp(&(x.re, x.im))
            .unwrap()
    });

    let t = &p_tilde * &p;
    let reconstruction = (&a_mat - t.transpose() * &d_tilde * &t).norm() / u_norm;
    let orthogonality = (p.transpose() * &p - DMatrix::identity(n, n)).norm();
    let block_identity =
        (&d_tilde * d_tilde.transpose() - DMatrix::identity(n, n) * u_norm * u_norm).norm()
            / (u_norm * u_norm);

    Ok(SpectralData {
        u_norm,
        s,
        r,
        quartets: quartet_bases
            .iter()
            .map(|q| Quartet {
                alpha: q.alpha,
                beta: q.beta,
            })
            .collect(),
        p,
        p_tilde,
        d_tilde,
        eigenvalues,
        residuals: SpectralResiduals {
            reconstruction,
            orthogonality,
            block_identity,
        },
    })
}

/// Splits the span of a skew operator with w^2 = -c I into orthonormal
/// planes (x, w x / |w x|). Returned vectors are in the operator's own
/// coordinates. Each new seed is the coordinate direction with the largest
/// component outside the planes found so far.
fn extract_planes(skew: &DMatrix<f64>) -> Vec<(DVector<f64>, DVector<f64>)> {
    let dim = skew.nrows();
    let mut used: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut planes = Vec::with_capacity(dim / 2);
    while used.len() < dim {
        let residual_of = |seed: usize| {
            let mut res = DVector::<f64>::zeros(dim);
            res[seed] = 1.0;
            for w in &used {
                let overlap = w.dot(&res);
                res -= w * overlap;
            }
            res
        };
        let best = (0..dim)
            .map(residual_of)
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
            .expect("nonempty search space");
        let x = &best / best.norm();
        let mut y = skew * &x;
        for w in used.iter().chain(std::iter::once(&x)) {
            let overlap = w.dot(&y);
            y -= w * overlap;
        }
        y /= y.norm();
        planes.push((x.clone(), y.clone()));
        used.push(x);
        used.push(y);
    }
    planes
}

/// Orthogonal reduction of a skew-symmetric matrix to 2x2 rotation blocks:
/// J = Q Jtilde Q^t with Jtilde block diagonal, blocks [[0, mu], [-mu, 0]],
/// mu descending and padded with zeros on the kernel.
pub fn canonical_skew_form(j: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let n = j.nrows();
    if j.ncols() != n {
        return Err(Error::DimensionMismatch {
            what: "square matrix",
            expected: n,
            actual: j.ncols(),
        });
    }
    let max_violation = (j + j.transpose()).abs().max();
    if max_violation > 1e-10 {
        return Err(Error::NotSkewSymmetric { max_violation });
    }

    // -J^2 is symmetric positive semidefinite with eigenvalues mu^2; its
    // eigenspaces carry the rotation planes.
    let gram = -(j * j);
    let eigen = SymmetricEigen::new(gram);
    let scale = j.norm();
    let gap = 1e-7 * scale.max(1.0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .unwrap()
    });

    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n / 2);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eigen.eigenvalues[order[end - 1]] - eigen.eigenvalues[order[end]] <= gap * scale
        {
            end += 1;
        }
        let members = &order[start..end];
        let dim = members.len();
        let basis = DMatrix::from_fn(n, dim, |row, col| eigen.eigenvectors[(row, members[col])]);
        let sigma = members.iter().map(|&i| eigen.eigenvalues[i]).sum::<f64>() / dim as f64;
        let cell = sigma.max(0.0).sqrt();
        if cell <= 1e-10 * scale.max(1.0) {
            // Kernel: take the eigenvectors as-is, in zero blocks.
            for col in 0..dim {
                columns.push(basis.column(col).into_owned());
            }
            mu.extend(std::iter::repeat_n(0.0, dim / 2));
        } else {
            assert!(dim % 2 == 0, "nonzero skew eigenvalues pair up");
            let restricted = basis.transpose() * j * &basis;
            for (x, y) in extract_planes(&restricted) {
                columns.push(&basis * &y);
                columns.push(&basis * &x);
                mu.push(cell);
            }
        }
        start = end;
    }
    Ok((DMatrix::from_columns(&columns), mu))
}

/// Eigenvalues of eta j_alpha for one generator (zero-based index), via the
/// classification of the corresponding axis direction.
pub fn eta_j_alpha_spectrum(alg: &HTypeAlgebra, alpha: usize) -> Result<Vec<Complex64>> {
    if alpha >= alg.m() {
        return Err(Error::IndexOutOfRange {
            what: "generator index",
            index: alpha,
            len: alg.m(),
        });
    }
    let axis = DVector::from_fn(alg.m(), |i, _| if i == alpha { 1.0 } else { 0.0 });
    Ok(classify(alg, &axis)?.eigenvalues().to_vec())
}
