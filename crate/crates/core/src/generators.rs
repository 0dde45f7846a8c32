//! Seeded constructors for reference frame systems.
//!
//! Random families are fully determined by their seed (ChaCha stream), so
//! every generated system is reproducible byte for byte. Random
//! reconstructing systems are normalized to |det| = 1: any two such systems
//! then have transition matrices whose largest entry is at least 1/n in both
//! directions, which keeps the one-sided and mixed-norm bounds honest on
//! full-support vectors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::frames::{diagonal_weight, FrameSystem, Repr};
use crate::linalg;
use crate::spaces::{Exponent, Field, IndexSet, MeasureSpace, Scalar, Vector};

/// Condition numbers above this are rejected and the matrix resampled.
pub const CONDITION_CAP: f64 = 1e6;

const SAMPLE_ATTEMPTS: usize = 64;

/// Which reference family to build.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Coordinate functionals with standard basis vectors.
    Identity,
    /// The unitary DFT system (pairs naturally with the identity).
    DftPair,
    /// Random invertible synthesis matrix with analysis = its inverse rows.
    RandomReconstructing { seed: u64 },
    /// `vectors` frame vectors whose outer products sum to the identity.
    RandomParseval { seed: u64, vectors: usize },
    /// Diagonal system with weights `n^rate` on a truncated sequence space.
    UnboundedDiagonal { rate: f64 },
    /// A base family with its measure replaced by explicit weights.
    Reweighted {
        base: Box<GeneratorSpec>,
        weights: Vec<f64>,
    },
}

/// Family plus the shared shape parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Ambient dimension (dense families) or truncation bound (diagonal).
    pub dim: usize,
    pub field: Field,
    pub p: Exponent,
}

/// Outcome of the Parseval check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParsevalReport {
    pub holds: bool,
    /// Largest entrywise deviation of the outer-product sum from identity.
    pub deviation: f64,
}

/// Builds the system described by `spec`. For [`Family::DftPair`] this is
/// the DFT member; its identity partner comes from [`dft_pair`].
pub fn make(spec: &GeneratorSpec) -> Result<FrameSystem> {
    match &spec.family {
        Family::Identity => identity(spec.dim, spec.field, spec.p),
        Family::DftPair => Ok(dft_pair(spec.dim, spec.p)?.1),
        Family::RandomReconstructing { seed } => {
            random_reconstructing(spec.dim, spec.field, spec.p, *seed)
        }
        Family::RandomParseval { seed, vectors } => {
            random_parseval(spec.dim, *vectors, spec.field, *seed)
        }
        Family::UnboundedDiagonal { rate } => {
            unbounded_diagonal(spec.dim, *rate, spec.field, spec.p)
        }
        Family::Reweighted { base, weights } => {
            let base_sys = make(base)?;
            FrameSystem::reweighted(&base_sys, weights.clone())
        }
    }
}

/// Identity system: `f_j = zeta_j`, `tau_j = e_j`.
pub fn identity(n: usize, field: Field, p: Exponent) -> Result<FrameSystem> {
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| if j == k { Scalar::ONE } else { Scalar::ZERO })
                .collect()
        })
        .collect();
    FrameSystem::dense(
        MeasureSpace::counting(IndexSet::finite(n)),
        n,
        field,
        p,
        rows.clone(),
        rows,
    )
}

/// The identity system paired with the unitary DFT system (complex field).
pub fn dft_pair(n: usize, p: Exponent) -> Result<(FrameSystem, FrameSystem)> {
    if n == 0 {
        return Err(Error::Construction("DFT needs dimension >= 1".into()));
    }
    let root = 1.0 / (n as f64).sqrt();
    let entry = |j: usize, k: usize, sign: f64| {
        let angle = sign * std::f64::consts::TAU * ((j * k) % n) as f64 / n as f64;
        Scalar::new(root * angle.cos(), root * angle.sin())
    };
    let analysis: Vec<Vec<Scalar>> = (0..n)
        .map(|k| (0..n).map(|j| entry(j, k, -1.0)).collect())
        .collect();
    let synthesis: Vec<Vec<Scalar>> = (0..n)
        .map(|k| (0..n).map(|j| entry(j, k, 1.0)).collect())
        .collect();
    let dft = FrameSystem::dense(
        MeasureSpace::counting(IndexSet::finite(n)),
        n,
        Field::Complex,
        p,
        analysis,
        synthesis,
    )?;
    Ok((identity(n, Field::Complex, p)?, dft))
}

fn sample_matrix(n: usize, field: Field, rng: &mut ChaCha8Rng) -> DMatrix<Scalar> {
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if field == Field::Complex {
            rng.sample(StandardNormal)
        } else {
            0.0
        };
        Scalar::new(re, im)
    })
}

fn well_conditioned_matrix(n: usize, field: Field, rng: &mut ChaCha8Rng) -> Result<DMatrix<Scalar>> {
    for _ in 0..SAMPLE_ATTEMPTS {
        let t = sample_matrix(n, field, rng);
        if linalg::condition_number(&t) <= CONDITION_CAP {
            return Ok(t);
        }
    }
    Err(Error::Construction(format!(
        "no matrix with condition number below {CONDITION_CAP} in {SAMPLE_ATTEMPTS} attempts"
    )))
}

fn reconstructing_from_stream(
    n: usize,
    field: Field,
    p: Exponent,
    rng: &mut ChaCha8Rng,
) -> Result<FrameSystem> {
    if n == 0 {
        return Err(Error::Construction("dimension must be >= 1".into()));
    }
    let mut t = well_conditioned_matrix(n, field, rng)?;
    let scale = linalg::abs_determinant(&t).powf(1.0 / n as f64);
    t /= Scalar::new(scale, 0.0);
    let inv = linalg::inverse(&t).ok_or_else(|| {
        Error::Construction("sampled matrix was numerically singular".into())
    })?;
    let analysis: Vec<Vec<Scalar>> = (0..n)
        .map(|j| (0..n).map(|k| inv[(j, k)]).collect())
        .collect();
    let synthesis: Vec<Vec<Scalar>> = (0..n)
        .map(|j| (0..n).map(|i| t[(i, j)]).collect())
        .collect();
    FrameSystem::dense(
        MeasureSpace::counting(IndexSet::finite(n)),
        n,
        field,
        p,
        analysis,
        synthesis,
    )
}

/// Random reconstructing system: synthesis is a |det| = 1 normalized random
/// invertible matrix, analysis its inverse.
pub fn random_reconstructing(n: usize, field: Field, p: Exponent, seed: u64) -> Result<FrameSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    reconstructing_from_stream(n, field, p, &mut rng)
}

/// Two independent random reconstructing systems from one seeded stream.
pub fn random_reconstructing_pair(
    n: usize,
    field: Field,
    p: Exponent,
    seed: u64,
) -> Result<(FrameSystem, FrameSystem)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = reconstructing_from_stream(n, field, p, &mut rng)?;
    let g = reconstructing_from_stream(n, field, p, &mut rng)?;
    Ok((f, g))
}

/// `m >= n` frame vectors in dimension `n` whose rank-one outer products sum
/// to the identity, built by orthonormalizing a random matrix.
pub fn random_parseval(n: usize, m: usize, field: Field, seed: u64) -> Result<FrameSystem> {
    if n == 0 || m < n {
        return Err(Error::Construction(format!(
            "Parseval family needs 1 <= dim <= vectors, got dim={n}, vectors={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(m, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if field == Field::Complex {
            rng.sample(StandardNormal)
        } else {
            0.0
        };
        Scalar::new(re, im)
    });
    // q has orthonormal columns; its rows are the frame vectors, so the sum
    // of their outer products is q^T conj(q) = transpose(q^H q) = identity.
    let q = linalg::orthonormal_columns(&g);
    let synthesis: Vec<Vec<Scalar>> = (0..m)
        .map(|j| (0..n).map(|i| q[(j, i)]).collect())
        .collect();
    let analysis: Vec<Vec<Scalar>> = (0..m)
        .map(|j| (0..n).map(|i| q[(j, i)].conj()).collect())
        .collect();
    FrameSystem::dense(
        MeasureSpace::counting(IndexSet::finite(m)),
        n,
        field,
        Exponent::Finite(2.0),
        analysis,
        synthesis,
    )
}

/// Diagonal system with `w_n = n^rate` on `{1, ..., bound}`.
pub fn unbounded_diagonal(bound: usize, rate: f64, field: Field, p: Exponent) -> Result<FrameSystem> {
    FrameSystem::diagonal(bound, rate, field, p)
}

/// Checks that the weighted rank-one outer products of the synthesis vectors
/// sum to the identity within `tol`.
pub fn validate_parseval(sys: &FrameSystem, tol: f64) -> Result<ParsevalReport> {
    let deviation = match sys.repr() {
        Repr::Dense { synthesis, .. } => {
            let dim = sys.ambient().size();
            let mut sum = DMatrix::<Scalar>::zeros(dim, dim);
            let first = sys.space().indices().first();
            for (pos, tau) in synthesis.iter().enumerate() {
                let w = sys.space().weight(first + pos);
                for r in 0..dim {
                    for c in 0..dim {
                        sum[(r, c)] += Scalar::new(w, 0.0) * tau[r] * tau[c].conj();
                    }
                }
            }
            let mut dev = 0.0_f64;
            for r in 0..dim {
                for c in 0..dim {
                    let target = if r == c { Scalar::ONE } else { Scalar::ZERO };
                    dev = dev.max((sum[(r, c)] - target).norm());
                }
            }
            dev
        }
        Repr::Diagonal { rate } => {
            // outer products are mu(n)/w_n^2 on the diagonal
            let mut dev = 0.0_f64;
            for n in sys.space().indices().iter() {
                let w = diagonal_weight(*rate, n);
                dev = dev.max((sys.space().weight(n) / (w * w) - 1.0).abs());
            }
            dev
        }
    };
    Ok(ParsevalReport {
        holds: deviation <= tol,
        deviation,
    })
}

/// `count` dense random vectors over `indices` (complex entries when `field`
/// is complex), seeded; entries are standard normal.
pub fn random_vectors(indices: IndexSet, field: Field, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let entries: Vec<(usize, Scalar)> = indices
                .iter()
                .map(|i| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = if field == Field::Complex {
                        rng.sample(StandardNormal)
                    } else {
                        0.0
                    };
                    (i, Scalar::new(re, im))
                })
                .collect();
            Vector::new(indices, entries).expect("generated indices are in range")
        })
        .collect()
}
