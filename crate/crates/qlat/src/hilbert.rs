//! Dense complex linear algebra, subspaces, projectors, and the lattice
//! operations (join, meet, orthocomplement) on which everything else is built.
//!
//! Subspaces are stored as orthonormal bases; projectors are derived on
//! demand. Two subspaces are considered equal when the Frobenius distance of
//! their projectors is below the equality tolerance, since basis matrices are
//! gauge dependent.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Numerical cutoffs used throughout the library.
///
/// The rank cutoff is relative: a singular value counts towards the rank when
/// it exceeds `rank * sigma_max`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub rank: f64,
    /// Frobenius-distance cutoff for matrix equality.
    pub eq: f64,
    /// Norm deviation allowed for state vectors.
    pub norm: f64,
    /// Probabilities at or below this are treated as zero.
    pub prob: f64,
    /// Slack allowed when checking inequalities.
    pub ineq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-10,
            eq: 1e-9,
            norm: 1e-12,
            prob: 1e-12,
            ineq: 1e-9,
        }
    }
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).norm()
}

/// Frobenius norm of the commutator [a, b].
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// A unit vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: ComplexVector,
}

impl StateVector {
    pub fn new(amplitudes: ComplexVector, tol: &Tolerances) -> Result<Self> {
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        let n = amplitudes.norm();
        if (n - 1.0).abs() > tol.norm {
            return Err(Error::UnnormalizedState(n));
        }
        Ok(StateVector { amplitudes })
    }

    /// Normalize an arbitrary nonzero vector into a state.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cannot normalize zero vector".into()));
        }
        Ok(StateVector {
            amplitudes: v / Complex64::new(n, 0.0),
        })
    }

    /// Computational basis state |i>.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = ComplexVector::zeros(dim);
        v[i] = Complex64::new(1.0, 0.0);
        StateVector { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }
}

/// A subspace of C^d, held as an `ambient_dim x k` matrix with orthonormal
/// columns. `k = 0` is the zero subspace, `k = ambient_dim` the full space.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// One-dimensional span of a nonzero vector.
    pub fn line(v: &ComplexVector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cannot span a zero vector".into()));
        }
        let col = v / Complex64::new(n, 0.0);
        Ok(Subspace {
            ambient_dim: v.len(),
            basis: ComplexMatrix::from_columns(&[col.column(0)]),
        })
    }

    /// Wrap a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        if frobenius_distance(&gram, &ComplexMatrix::identity(k, k)) > tol.eq {
            return Err(Error::InvalidInput("basis columns not orthonormal".into()));
        }
        Ok(Subspace {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    /// Column space of an arbitrary matrix, with numerical rank decided by
    /// `sigma_i > tol.rank * sigma_max`.
    pub fn orthonormalize(m: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !all_finite(m) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        let d = m.nrows();
        if m.ncols() == 0 {
            return Ok(Subspace::zero(d));
        }
        let (u, sigma, _) = stable_svd(m);
        let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
        // A matrix whose largest singular value is already below the rank
        // tolerance is numerical noise (e.g. `I - P` for the full space).
        if sigma_max <= tol.rank {
            return Ok(Subspace::zero(d));
        }
        let r = sigma.iter().filter(|&&s| s > tol.rank * sigma_max).count();
        Ok(Subspace {
            ambient_dim: d,
            basis: u.columns(0, r).into_owned(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projector(&self) -> Projector {
        Projector {
            matrix: &self.basis * self.basis.adjoint(),
        }
    }

    /// Orthocomplement, computed as the column space of `I - P(h)`.
    pub fn complement(&self, tol: &Tolerances) -> Subspace {
        let d = self.ambient_dim;
        let residual = ComplexMatrix::identity(d, d) - self.projector().matrix;
        Subspace::orthonormalize(&residual, tol).expect("projector residual is finite")
    }

    /// Join (disjunction): span of the union.
    pub fn join(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut stacked = ComplexMatrix::zeros(self.ambient_dim, self.dim() + other.dim());
        stacked.columns_mut(0, self.dim()).copy_from(&self.basis);
        stacked
            .columns_mut(self.dim(), other.dim())
            .copy_from(&other.basis);
        Subspace::orthonormalize(&stacked, tol)
    }

    /// Meet (conjunction): computed via De Morgan as the complement of the
    /// join of the complements.
    pub fn meet(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let joined = self.complement(tol).join(&other.complement(tol), tol)?;
        Ok(joined.complement(tol))
    }

    /// True when `self` is contained in `other`.
    pub fn is_subspace_of(&self, other: &Subspace, tol: &Tolerances) -> Result<bool> {
        self.check_same_ambient(other)?;
        let p1 = self.projector().matrix;
        let p2 = other.projector().matrix;
        Ok(frobenius_distance(&(&p2 * &p1), &p1) <= tol.eq)
    }

    /// Subspace equality via projector Frobenius distance.
    pub fn approx_eq(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.ambient_dim == other.ambient_dim
            && frobenius_distance(&self.projector().matrix, &other.projector().matrix) <= tol.eq
    }

    /// True when the (unit) vector lies in the subspace.
    pub fn contains_vector(&self, v: &ComplexVector, tol: &Tolerances) -> bool {
        (self.projector().matrix * v - v).norm() <= tol.eq
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient dims {} vs {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }
}

/// Hermitian idempotent matrix projecting onto a subspace.
#[derive(Debug, Clone)]
pub struct Projector {
    pub matrix: ComplexMatrix,
}

impl Projector {
    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Verify the Hermitian/idempotent/trace invariants.
    pub fn validate(&self, tol: &Tolerances) -> bool {
        let m = &self.matrix;
        frobenius_distance(m, &m.adjoint()) <= tol.eq
            && frobenius_distance(&(m * m), m) <= tol.eq
            && self.trace().round() >= -tol.eq
    }
}

/// Raw Born probability `<s| P |s>` before clamping.
pub fn prob_raw(s: &StateVector, p: &Projector) -> Result<f64> {
    if s.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs projector dim {}",
            s.dim(),
            p.dim()
        )));
    }
    let v = s.amplitudes();
    Ok((v.adjoint() * &p.matrix * v)[(0, 0)].re)
}

/// Born probability, clamped to [0, 1] for reporting.
pub fn prob(s: &StateVector, p: &Projector) -> Result<f64> {
    Ok(prob_raw(s, p)?.clamp(0.0, 1.0))
}

/// Full real spectrum of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    if !all_finite(m) {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    if frobenius_distance(m, &m.adjoint()) > tol.eq {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    let eig = m.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Eigen-decomposition of a Hermitian matrix: (eigenvalues ascending, matching
/// unit eigenvectors as columns).
pub fn hermitian_eigen(m: &ComplexMatrix, tol: &Tolerances) -> Result<(Vec<f64>, ComplexMatrix)> {
    if frobenius_distance(m, &m.adjoint()) > tol.eq {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<_> = order.iter().map(|&i| eig.eigenvectors.column(i)).collect();
    Ok((vals, ComplexMatrix::from_columns(&cols)))
}

/// Singular value decomposition `m = u diag(sigma) v^dagger` computed through
/// the Hermitian dilation `[[0, m], [m^dagger, 0]]`, whose eigenvalues are
/// `+-sigma_i`. The bidiagonal complex SVD in the linear-algebra backend
/// returns inconsistent factors on some inputs, while its Hermitian
/// eigensolver is dependable; the dilation route also avoids squaring the
/// condition number the way a Gram-matrix route would.
///
/// Returns `(u, sigma, v)` with `sigma` descending of length `min(d, n)`,
/// `u` of shape `d x min(d, n)` and `v` of shape `n x min(d, n)`. Columns
/// belonging to singular values at roundoff scale are not meaningful and
/// must be guarded by a rank cutoff before use.
pub fn stable_svd(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let (d, n) = m.shape();
    let k = d.min(n);
    let mut h = ComplexMatrix::zeros(d + n, d + n);
    h.view_mut((0, d), (d, n)).copy_from(m);
    h.view_mut((d, 0), (n, d)).copy_from(&m.adjoint());
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..d + n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let scale = Complex64::new(std::f64::consts::SQRT_2, 0.0);
    let mut u = ComplexMatrix::zeros(d, k);
    let mut v = ComplexMatrix::zeros(n, k);
    let mut sigma = Vec::with_capacity(k);
    for (col, &idx) in order.iter().take(k).enumerate() {
        sigma.push(eig.eigenvalues[idx].max(0.0));
        let w = eig.eigenvectors.column(idx);
        for r in 0..d {
            u[(r, col)] = w[r] * scale;
        }
        for r in 0..n {
            v[(r, col)] = w[d + r] * scale;
        }
    }
    (u, sigma, v)
}

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-style random unit vector: normalized standard complex Gaussian draw.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> StateVector {
    let v = ComplexVector::from_fn(dim, |_, _| gaussian_complex(rng));
    StateVector::normalized(v).expect("gaussian vector is nonzero a.s.")
}

/// Haar-style random k-dimensional subspace of C^dim.
pub fn random_subspace<R: Rng>(
    dim: usize,
    k: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<Subspace> {
    if k > dim {
        return Err(Error::InvalidInput(format!(
            "requested dim {k} exceeds ambient dim {dim}"
        )));
    }
    if k == 0 {
        return Ok(Subspace::zero(dim));
    }
    let m = ComplexMatrix::from_fn(dim, k, |_, _| gaussian_complex(rng));
    let h = Subspace::orthonormalize(&m, tol)?;
    debug_assert_eq!(h.dim(), k);
    Ok(h)
}

/// Random d x d unitary: Q factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R, tol: &Tolerances) -> ComplexMatrix {
    random_subspace(dim, dim, rng, tol)
        .expect("full-dimension draw")
        .basis()
        .clone()
}
