//! Construction and validation of anti-commuting complex structures on R^n.
//!
//! A generator set is an ordered family of skew-symmetric signed-permutation
//! matrices J_1, ..., J_m with J_a^2 = -I and J_a J_b = -J_b J_a. Such a
//! family exists iff m < rho(n), where rho is the Hurwitz-Radon function.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entry tolerance for user-supplied generator sets. Constructed sets are
/// exact and validate with violation 0.
pub const LOAD_TOLERANCE: f64 = 1e-12;

/// Hurwitz-Radon function: rho(n) = 8a + 2^b where n = k * 2^(4a+b),
/// k odd, 0 <= b <= 3.
///
/// The maximal number of anti-commuting complex structures on R^n is
/// rho(n) - 1.
pub fn hurwitz_radon(n: usize) -> usize {
    assert!(n >= 1, "hurwitz_radon requires n >= 1");
    let t = n.trailing_zeros() as usize;
    8 * (t / 4) + (1usize << (t % 4))
}

/// 2x2 rotation generator, the unique skew signed-permutation square root of
/// -I in two dimensions up to sign; the sign convention is +1 at entry (1,2).
const ROT2: [[i8; 2]; 2] = [[0, 1], [-1, 0]];

/// 2x2 reflection block used by the doubling construction.
const REFL2: [[i8; 2]; 2] = [[1, 0], [0, -1]];

/// Left multiplication by i, j, k on the quaternions in the basis (1, i, j, k).
const QUATERNION: [[[i8; 4]; 4]; 3] = [
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
];

/// The seven octonion generators on R^8.
const OCTONION: [[[i8; 8]; 8]; 7] = [
    [
        [0, 1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, 0, 0, 1, 0],
    ],
    [
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, 0, -1, 0, 0],
    ],
    [
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, -1, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, 0, 0, -1],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, -1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, -1, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
    ],
];

fn int_matrix<const N: usize>(rows: &[[i8; N]; N]) -> DMatrix<f64> {
    DMatrix::from_fn(N, N, |i, j| f64::from(rows[i][j]))
}

/// An ordered family of m generators on R^n.
///
/// All entries are in {-1, 0, +1} with exactly one nonzero per row and per
/// column, so every product used by the construction is exact in f64.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    n: usize,
    mats: Vec<DMatrix<f64>>,
}

impl GeneratorSet {
    /// Wraps user-supplied matrices, rejecting any set that fails validation.
    pub fn new(n: usize, mats: Vec<DMatrix<f64>>) -> Result<Self> {
        for mat in &mats {
            if mat.nrows() != n || mat.ncols() != n {
                return Err(Error::DimensionMismatch {
                    what: "generator matrix",
                    expected: n,
                    actual: mat.nrows().max(mat.ncols()),
                });
            }
        }
        let candidate = Self { n, mats };
        let report = validate_generators(&candidate);
        if report.pass() {
            Ok(candidate)
        } else {
            Err(Error::InvalidGenerators(report))
        }
    }

    /// Horizontal dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators m.
    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    pub fn matrix(&self, alpha: usize) -> Result<&DMatrix<f64>> {
        self.mats.get(alpha).ok_or(Error::IndexOutOfRange {
            what: "generator",
            index: alpha,
            len: self.mats.len(),
        })
    }
}

/// JSON interchange form of a generator set, with integer entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSetJson {
    pub n: usize,
    pub m: usize,
    pub matrices: Vec<Vec<Vec<i64>>>,
}

impl From<&GeneratorSet> for GeneratorSetJson {
    fn from(set: &GeneratorSet) -> Self {
        let matrices = set
            .mats
            .iter()
            .map(|mat| {
                (0..set.n)
                    .map(|i| (0..set.n).map(|j| mat[(i, j)].round() as i64).collect())
                    .collect()
            })
            .collect();
        GeneratorSetJson {
            n: set.n,
            m: set.mats.len(),
            matrices,
        }
    }
}

impl TryFrom<GeneratorSetJson> for GeneratorSet {
    type Error = Error;

    fn try_from(doc: GeneratorSetJson) -> Result<Self> {
        if doc.matrices.len() != doc.m {
            return Err(Error::DimensionMismatch {
                what: "generator count",
                expected: doc.m,
                actual: doc.matrices.len(),
            });
        }
        let mut mats = Vec::with_capacity(doc.m);
        for rows in &doc.matrices {
            if rows.len() != doc.n || rows.iter().any(|r| r.len() != doc.n) {
                return Err(Error::DimensionMismatch {
                    what: "generator matrix",
                    expected: doc.n,
                    actual: rows.len(),
                });
            }
            mats.push(DMatrix::from_fn(doc.n, doc.n, |i, j| rows[i][j] as f64));
        }
        GeneratorSet::new(doc.n, mats)
    }
}

/// The seven 8x8 octonion generators, entry for entry.
pub fn octonion_generators() -> GeneratorSet {
    GeneratorSet {
        n: 8,
        mats: OCTONION.iter().map(int_matrix).collect(),
    }
}

/// Deterministic generator family for any admissible pair (n, m).
///
/// The construction doubles the three base families on R^2, R^4, R^8 through
/// the sixteen-fold periodicity of the Hurwitz-Radon function, then pads an
/// odd factor k of n = k * 2^t block-diagonally. For fixed n, the family for
/// a smaller m is a prefix of the family for a larger one.
pub fn build_generators(n: usize, m: usize) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(Error::Admissibility { n, m, rho: 0 });
    }
    let rho = hurwitz_radon(n);
    if m >= rho {
        return Err(Error::Admissibility { n, m, rho });
    }
    let t = n.trailing_zeros();
    let odd = n >> t;
    let mats = maximal_power_family(t)
        .into_iter()
        .take(m)
        .map(|w| {
            if odd == 1 {
                w
            } else {
                DMatrix::identity(odd, odd).kronecker(&w)
            }
        })
        .collect();
    Ok(GeneratorSet { n, mats })
}

/// Maximal family of rho(2^t) - 1 generators on R^(2^t).
fn maximal_power_family(t: u32) -> Vec<DMatrix<f64>> {
    match t {
        0 => Vec::new(),
        1 => vec![int_matrix(&ROT2)],
        2 => QUATERNION.iter().map(int_matrix).collect(),
        3 => OCTONION.iter().map(int_matrix).collect(),
        _ => {
            let sixteen = family_16();
            let gamma = gamma_16(&sixteen);
            let d = 1usize << (t - 4);
            let block = DMatrix::identity(d, d);
            let mut out: Vec<DMatrix<f64>> =
                sixteen.iter().map(|f| block.kronecker(f)).collect();
            for e in maximal_power_family(t - 4) {
                out.push(e.kronecker(&gamma));
            }
            out
        }
    }
}

/// The eight-element family on R^16 seeding the recursion.
fn family_16() -> Vec<DMatrix<f64>> {
    let rot = int_matrix(&ROT2);
    let refl = int_matrix(&REFL2);
    let id8 = DMatrix::<f64>::identity(8, 8);
    let mut family = vec![rot.kronecker(&id8)];
    family.extend(OCTONION.iter().map(|o| refl.kronecker(&int_matrix(o))));
    family
}

/// Product of the full 16-dimensional family: a symmetric involution that
/// anti-commutes with each of its factors, which is what lets the recursion
/// extend a smaller family without breaking anti-commutativity.
fn gamma_16(family: &[DMatrix<f64>]) -> DMatrix<f64> {
    family
        .iter()
        .fold(DMatrix::identity(16, 16), |acc, f| acc * f)
}

/// Outcome of a single validation check.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub pass: bool,
    pub max_violation: f64,
}

/// Per-invariant validation results for a generator set.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub m: usize,
    pub checks: Vec<InvariantCheck>,
}

impl ValidationReport {
    /// True iff every check passed.
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "generator set n = {}, m = {}", self.n, self.m)?;
        for check in &self.checks {
            writeln!(
                f,
                "  {}: {} (max violation {:e})",
                check.name,
                if check.pass { "pass" } else { "FAIL" },
                check.max_violation
            )?;
        }
        Ok(())
    }
}

/// Checks every generator-set invariant and reports the worst violation per
/// invariant. Failures are data, not errors.
pub fn validate_generators(set: &GeneratorSet) -> ValidationReport {
    let n = set.n;
    let m = set.mats.len();
    let mut checks = Vec::new();

    let even = n >= 2 && n % 2 == 0;
    checks.push(InvariantCheck {
        name: "even_dimension",
        pass: even,
        max_violation: if even { 0.0 } else { 1.0 },
    });

    let rho = if n >= 1 { hurwitz_radon(n) } else { 0 };
    let admissible = m < rho;
    checks.push(InvariantCheck {
        name: "admissibility",
        pass: admissible,
        max_violation: if admissible {
            0.0
        } else {
            (m + 1 - rho) as f64
        },
    });

    let mut entry_violation: f64 = 0.0;
    let mut structure_ok = true;
    for mat in &set.mats {
        for i in 0..n {
            let mut row_nonzero = 0;
            let mut col_nonzero = 0;
            for j in 0..n {
                for value in [mat[(i, j)], mat[(j, i)]] {
                    let nearest = if value.abs() < 0.5 {
                        0.0
                    } else {
                        value.signum()
                    };
                    entry_violation = entry_violation.max((value - nearest).abs());
                }
                if mat[(i, j)].abs() >= 0.5 {
                    row_nonzero += 1;
                }
                if mat[(j, i)].abs() >= 0.5 {
                    col_nonzero += 1;
                }
            }
            if row_nonzero != 1 || col_nonzero != 1 {
                structure_ok = false;
            }
        }
    }
    checks.push(InvariantCheck {
        name: "signed_permutation_entries",
        pass: structure_ok && entry_violation <= LOAD_TOLERANCE,
        max_violation: if structure_ok { entry_violation } else { 1.0 },
    });

    let mut skew: f64 = 0.0;
    for mat in &set.mats {
        skew = skew.max((mat + mat.transpose()).abs().max());
    }
    checks.push(InvariantCheck {
        name: "skew_symmetry",
        pass: skew <= LOAD_TOLERANCE,
        max_violation: skew,
    });

    let identity = DMatrix::<f64>::identity(n, n);
    let mut square: f64 = 0.0;
    for mat in &set.mats {
        square = square.max((mat * mat + &identity).abs().max());
    }
    checks.push(InvariantCheck {
        name: "square_is_minus_identity",
        pass: square <= LOAD_TOLERANCE,
        max_violation: square,
    });

    let mut anti: f64 = 0.0;
    for a in 0..m {
        for b in (a + 1)..m {
            let ab = &set.mats[a] * &set.mats[b];
            let ba = &set.mats[b] * &set.mats[a];
            anti = anti.max((ab + ba).abs().max());
        }
    }
    checks.push(InvariantCheck {
        name: "pairwise_anti_commutation",
        pass: anti <= LOAD_TOLERANCE,
        max_violation: anti,
    });

    ValidationReport { n, m, checks }
}
