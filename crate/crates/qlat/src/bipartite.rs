//! Tensor-product structure: coefficient matrices, Schmidt rank of states,
//! minimum rank of subspaces, and the product-subspace lattice identities.
//!
//! A state of the bipartite space is carried together with its `d_A x d_B`
//! coefficient matrix; the product index convention is `(i, j) -> i * d_B + j`
//! (row-major over the A index), matching the Kronecker product order used
//! everywhere in this crate.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::indexed_map;
use crate::hilbert::{
    random_state, stable_svd, ComplexMatrix, ComplexVector, StateVector, Subspace, Tolerances,
};
use crate::rng::child_rng;

/// Dimensions of the two factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BipartiteSpace {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteSpace {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::InvalidInput(format!(
                "both factors need dimension >= 2, got ({d_a}, {d_b})"
            )));
        }
        Ok(BipartiteSpace { d_a, d_b })
    }

    pub fn total_dim(&self) -> usize {
        self.d_a * self.d_b
    }
}

/// Unit vector in a product space, with its coefficient-matrix view.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    pub space: BipartiteSpace,
    pub amplitudes: StateVector,
}

impl BipartiteState {
    pub fn new(space: BipartiteSpace, amplitudes: StateVector) -> Result<Self> {
        if amplitudes.dim() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "state dim {} vs product dim {}",
                amplitudes.dim(),
                space.total_dim()
            )));
        }
        Ok(BipartiteState { space, amplitudes })
    }

    /// Build from a nonzero coefficient matrix, normalizing to unit norm.
    pub fn from_coeff(space: BipartiteSpace, coeff: &ComplexMatrix) -> Result<Self> {
        if coeff.nrows() != space.d_a || coeff.ncols() != space.d_b {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix {}x{} vs space {}x{}",
                coeff.nrows(),
                coeff.ncols(),
                space.d_a,
                space.d_b
            )));
        }
        let v = flatten(coeff);
        Ok(BipartiteState {
            space,
            amplitudes: StateVector::normalized(v)?,
        })
    }

    /// The `d_A x d_B` coefficient matrix with entry `(i,j)` equal to the
    /// amplitude at product index `i * d_B + j`.
    pub fn coeff(&self) -> ComplexMatrix {
        let v = self.amplitudes.amplitudes();
        ComplexMatrix::from_fn(self.space.d_a, self.space.d_b, |i, j| v[i * self.space.d_b + j])
    }
}

/// Flatten a coefficient matrix into the product-index vector.
pub fn flatten(m: &ComplexMatrix) -> ComplexVector {
    let (d_a, d_b) = (m.nrows(), m.ncols());
    ComplexVector::from_fn(d_a * d_b, |idx, _| m[(idx / d_b, idx % d_b)])
}

/// Reshape a product-index vector into its coefficient matrix.
pub fn unflatten(v: &ComplexVector, space: BipartiteSpace) -> ComplexMatrix {
    ComplexMatrix::from_fn(space.d_a, space.d_b, |i, j| v[i * space.d_b + j])
}

/// Singular values (descending) and rank of a coefficient matrix.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SchmidtData {
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

pub fn schmidt_rank(s: &BipartiteState, tol: &Tolerances) -> SchmidtData {
    schmidt_of_matrix(&s.coeff(), tol)
}

pub fn schmidt_of_matrix(coeff: &ComplexMatrix, tol: &Tolerances) -> SchmidtData {
    let (_, singular_values, _) = stable_svd(coeff);
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = if smax == 0.0 {
        0
    } else {
        singular_values.iter().filter(|&&x| x > tol.rank * smax).count()
    };
    SchmidtData {
        singular_values,
        rank,
    }
}

/// Product subspace `h_A (x) h_B`, with basis `{a_i (x) b_j}`.
pub fn tensor_subspace(h_a: &Subspace, h_b: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    let d = h_a.ambient_dim() * h_b.ambient_dim();
    if h_a.dim() == 0 || h_b.dim() == 0 {
        return Ok(Subspace::zero(d));
    }
    let basis = h_a.basis().kronecker(h_b.basis());
    Subspace::from_orthonormal(basis, tol)
}

/// Outcome of the minimum-rank search over a subspace of the product space.
#[derive(Debug, Clone)]
pub struct MinRankResult {
    /// Certified upper bound: Schmidt rank of the witness.
    pub upper_bound: usize,
    /// Member of the subspace attaining the upper bound (absent for the zero
    /// subspace).
    pub witness: Option<BipartiteState>,
    /// Schmidt rank of one random unit element.
    pub generic_rank: usize,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Tail energy past rank `r` and the best rank-`r` truncation of `m`.
fn rank_r_truncation(m: &ComplexMatrix, r: usize) -> (f64, ComplexMatrix) {
    let (u, sigma, v) = stable_svd(m);
    let tail: f64 = sigma.iter().skip(r).map(|x| x * x).sum();
    let mut trunc = ComplexMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..r.min(sigma.len()) {
        let col = u.column(i);
        let row = v.column(i).adjoint();
        trunc += col * row * Complex64::new(sigma[i], 0.0);
    }
    (tail, trunc)
}

/// One local search for a rank-`r` element: alternating projection between
/// the subspace (in coefficient-matrix form) and the rank-`r` variety.
/// Returns the final tail energy and coefficient vector.
fn local_search(
    basis: &ComplexMatrix,
    space: BipartiteSpace,
    r: usize,
    start: ComplexVector,
    accept: f64,
    max_iter: usize,
) -> (f64, ComplexVector) {
    let mut c = start;
    let mut last_tail = f64::INFINITY;
    for _ in 0..max_iter {
        let m = unflatten(&(basis * &c), space);
        let (tail, trunc) = rank_r_truncation(&m, r);
        if tail <= accept {
            return (tail, c);
        }
        // basis columns are orthonormal, so the Frobenius projection of the
        // truncation back onto the subspace is basis^dagger vec(T)
        let mut next = basis.adjoint() * flatten(&trunc);
        let n = next.norm();
        if n == 0.0 {
            return (tail, c);
        }
        next /= Complex64::new(n, 0.0);
        if (tail - last_tail).abs() <= 1e-3 * accept.max(1e-300) && tail > accept {
            // stagnated above the acceptance level
            return (tail, next);
        }
        last_tail = tail;
        c = next;
    }
    let m = unflatten(&(basis * &c), space);
    let (tail, _) = rank_r_truncation(&m, r);
    (tail, c)
}

/// Minimum Schmidt rank over the nonzero elements of `h`, as a certified
/// upper bound from multi-start search. Candidate ranks are tried in
/// increasing order and the search stops at the first feasible one, so the
/// result is exact whenever the search at every lower rank is exhaustive
/// enough; `dim(h) = 1` reduces to a single SVD and is always exact.
pub fn min_rank<R: Rng>(
    h: &Subspace,
    space: BipartiteSpace,
    restarts: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<MinRankResult> {
    if h.ambient_dim() != space.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace ambient dim {} vs product dim {}",
            h.ambient_dim(),
            space.total_dim()
        )));
    }
    let k = h.dim();
    if k == 0 {
        return Ok(MinRankResult {
            upper_bound: 0,
            witness: None,
            generic_rank: 0,
            restarts_used: 0,
            converged: true,
        });
    }

    let basis = h.basis().clone();
    let generic_state = {
        let c = random_state(k, rng);
        BipartiteState::new(space, StateVector::normalized(&basis * c.amplitudes())?)?
    };
    let generic_rank = schmidt_rank(&generic_state, tol).rank;

    let accept = tol.rank * tol.rank;
    let search_seed: u64 = rng.random();
    let mut restarts_used = 0;
    for r in 1..=generic_rank {
        let n_starts = if r == generic_rank { 1 } else { restarts.max(1) };
        let results = indexed_map(n_starts, |i| {
            let mut child = child_rng(search_seed, (r * restarts.max(1) + i) as u64);
            let start = random_state(k, &mut child).amplitudes().clone();
            local_search(&basis, space, r, start, accept, 2000)
        });
        restarts_used += n_starts;
        // deterministic best-result selection: lowest tail, then lowest index
        let best = results
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.0.partial_cmp(&b.0).unwrap().then(i.cmp(j)))
            .map(|(_, r)| r)
            .unwrap();
        if best.0 <= accept {
            let witness =
                BipartiteState::new(space, StateVector::normalized(&basis * &best.1)?)?;
            let witness_rank = schmidt_rank(&witness, tol).rank;
            return Ok(MinRankResult {
                upper_bound: witness_rank.min(r),
                witness: Some(witness),
                generic_rank,
                restarts_used,
                converged: true,
            });
        }
    }
    // generic element is always a feasible witness at its own rank
    Ok(MinRankResult {
        upper_bound: generic_rank,
        witness: Some(generic_state),
        generic_rank,
        restarts_used,
        converged: true,
    })
}

/// Residuals of the six product-lattice identities (projector Frobenius
/// distances between independently computed sides).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProductLatticeResiduals {
    pub meet_in_b: f64,
    pub meet_in_a: f64,
    pub meet_in_both: f64,
    pub join_in_b: f64,
    pub join_in_a: f64,
    pub join_in_both: f64,
}

impl ProductLatticeResiduals {
    pub fn max(&self) -> f64 {
        [
            self.meet_in_b,
            self.meet_in_a,
            self.meet_in_both,
            self.join_in_b,
            self.join_in_a,
            self.join_in_both,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn proj_dist(a: &Subspace, b: &Subspace) -> f64 {
    crate::hilbert::frobenius_distance(&a.projector().matrix, &b.projector().matrix)
}

/// Numerically verify the conjunction/disjunction identities for product
/// subspaces, both sides computed independently through the lattice ops.
pub fn verify_product_lattice(
    h1a: &Subspace,
    h2a: &Subspace,
    h1b: &Subspace,
    h2b: &Subspace,
    tol: &Tolerances,
) -> Result<ProductLatticeResiduals> {
    let h1 = tensor_subspace(h1a, h1b, tol)?;
    let g12 = tensor_subspace(h1a, h2b, tol)?;
    let g21 = tensor_subspace(h2a, h1b, tol)?;
    let h2 = tensor_subspace(h2a, h2b, tol)?;

    let meet_a = h1a.meet(h2a, tol)?;
    let meet_b = h1b.meet(h2b, tol)?;
    let join_a = h1a.join(h2a, tol)?;
    let join_b = h1b.join(h2b, tol)?;

    let meet_in_b = proj_dist(&tensor_subspace(h1a, &meet_b, tol)?, &h1.meet(&g12, tol)?);
    let meet_in_a = proj_dist(&tensor_subspace(&meet_a, h1b, tol)?, &h1.meet(&g21, tol)?);
    let meet_in_both = proj_dist(
        &tensor_subspace(&meet_a, &meet_b, tol)?,
        &h1.meet(&g12, tol)?.meet(&g21.meet(&h2, tol)?, tol)?,
    );
    let join_in_b = proj_dist(&tensor_subspace(h1a, &join_b, tol)?, &h1.join(&g12, tol)?);
    let join_in_a = proj_dist(&tensor_subspace(&join_a, h1b, tol)?, &h1.join(&g21, tol)?);
    let join_in_both = proj_dist(
        &tensor_subspace(&join_a, &join_b, tol)?,
        &h1.join(&g12, tol)?.join(&g21.join(&h2, tol)?, tol)?,
    );

    Ok(ProductLatticeResiduals {
        meet_in_b,
        meet_in_a,
        meet_in_both,
        join_in_b,
        join_in_a,
        join_in_both,
    })
}

/// Check the two product-lattice inclusions
/// `(h1A ^ h2A) (x) (h1B ^ h2B) < h1 ^ h2` and
/// `(h1A v h2A) (x) (h1B v h2B) > h1 v h2`.
pub fn verify_inclusions(
    h1a: &Subspace,
    h2a: &Subspace,
    h1b: &Subspace,
    h2b: &Subspace,
    tol: &Tolerances,
) -> Result<(bool, bool)> {
    let h1 = tensor_subspace(h1a, h1b, tol)?;
    let h2 = tensor_subspace(h2a, h2b, tol)?;
    let meet_prod = tensor_subspace(&h1a.meet(h2a, tol)?, &h1b.meet(h2b, tol)?, tol)?;
    let join_prod = tensor_subspace(&h1a.join(h2a, tol)?, &h1b.join(h2b, tol)?, tol)?;
    let meet_ok = meet_prod.is_subspace_of(&h1.meet(&h2, tol)?, tol)?;
    let join_ok = h1.join(&h2, tol)?.is_subspace_of(&join_prod, tol)?;
    Ok((meet_ok, join_ok))
}

/// Heuristic check of rank monotonicity under inclusion: reported, not
/// asserted as theorem-grade, because `min_rank` is an upper-bound estimator.
pub fn rank_monotonicity_check<R: Rng>(
    h1: &Subspace,
    h2: &Subspace,
    space: BipartiteSpace,
    restarts: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<bool> {
    if !h1.is_subspace_of(h2, tol)? {
        return Err(Error::Precondition("h1 must be a subspace of h2".into()));
    }
    let r1 = min_rank(h1, space, restarts, rng, tol)?;
    let r2 = min_rank(h2, space, restarts, rng, tol)?;
    Ok(r1.upper_bound >= r2.upper_bound)
}

/// The worked 2-dimensional subspace of H(3) (x) H(3) spanned by
/// `|0,0> + |1,1>` and `|0,1> + |1,2>`; its minimum rank is 2.
pub fn example_rank_two_subspace(tol: &Tolerances) -> Subspace {
    let space = BipartiteSpace { d_a: 3, d_b: 3 };
    let mut m = ComplexMatrix::zeros(9, 2);
    let one = Complex64::new(1.0, 0.0);
    // |0,0> + |1,1>
    m[(0 * space.d_b + 0, 0)] = one;
    m[(1 * space.d_b + 1, 0)] = one;
    // |0,1> + |1,2>
    m[(0 * space.d_b + 1, 1)] = one;
    m[(1 * space.d_b + 2, 1)] = one;
    Subspace::orthonormalize(&m, tol).expect("finite entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{random_subspace, random_unitary};
    use crate::rng::master_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn space(d_a: usize, d_b: usize) -> BipartiteSpace {
        BipartiteSpace::new(d_a, d_b).unwrap()
    }

    fn bell_state() -> BipartiteState {
        let coeff = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        BipartiteState::from_coeff(space(2, 2), &coeff).unwrap()
    }

    #[test]
    fn coeff_round_trip_matches_index_convention() {
        let s = space(2, 3);
        let coeff = ComplexMatrix::from_fn(2, 3, |i, j| c((i * 3 + j) as f64 + 1.0, 0.0));
        let st = BipartiteState::from_coeff(s, &coeff).unwrap();
        // amplitude (i,j) sits at product index i*d_B + j
        let amp = st.amplitudes.amplitudes();
        let norm = flatten(&coeff).norm();
        for i in 0..2 {
            for j in 0..3 {
                let expected = coeff[(i, j)] / Complex64::new(norm, 0.0);
                assert!((amp[i * 3 + j] - expected).norm() < 1e-14);
            }
        }
        assert!((st.coeff().norm() - 1.0).abs() <= tol().norm);
    }

    #[test]
    fn schmidt_rank_of_product_state_is_one() {
        let t = tol();
        let mut rng = master_rng(1);
        let a = random_state(3, &mut rng);
        let b = random_state(4, &mut rng);
        let coeff = ComplexMatrix::from_fn(3, 4, |i, j| a.amplitudes()[i] * b.amplitudes()[j]);
        let s = BipartiteState::from_coeff(space(3, 4), &coeff).unwrap();
        assert_eq!(schmidt_rank(&s, &t).rank, 1);
    }

    #[test]
    fn schmidt_rank_of_bell_state() {
        let t = tol();
        let data = schmidt_rank(&bell_state(), &t);
        assert_eq!(data.rank, 2);
        for sv in &data.singular_values {
            assert!((sv - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
        }
        let sq_sum: f64 = data.singular_values.iter().map(|x| x * x).sum();
        assert!((sq_sum - 1.0).abs() <= t.norm);
    }

    #[test]
    fn schmidt_rank_of_worked_rank_three_state() {
        // (1/sqrt 15)(|0,0> + 2|0,1> + |1,1> + 3|2,2>)
        let t = tol();
        let mut coeff = ComplexMatrix::zeros(3, 3);
        coeff[(0, 0)] = c(1.0, 0.0);
        coeff[(0, 1)] = c(2.0, 0.0);
        coeff[(1, 1)] = c(1.0, 0.0);
        coeff[(2, 2)] = c(3.0, 0.0);
        let s = BipartiteState::from_coeff(space(3, 3), &coeff).unwrap();
        assert_eq!(schmidt_rank(&s, &t).rank, 3);
    }

    #[test]
    fn schmidt_rank_invariant_under_local_unitaries() {
        let t = tol();
        let mut rng = master_rng(2);
        let s = BipartiteState::new(space(3, 3), random_state(9, &mut rng)).unwrap();
        let before = schmidt_rank(&s, &t);
        let u_a = random_unitary(3, &mut rng, &t);
        let u_b = random_unitary(3, &mut rng, &t);
        let rotated = &u_a * s.coeff() * u_b.transpose();
        let after = schmidt_of_matrix(&rotated, &t);
        assert_eq!(before.rank, after.rank);
        for (x, y) in before.singular_values.iter().zip(&after.singular_values) {
            assert!((x - y).abs() <= t.eq);
        }
    }

    #[test]
    fn tensor_subspace_cases() {
        let t = tol();
        let full = tensor_subspace(&Subspace::full(2), &Subspace::full(2), &t).unwrap();
        assert!(full.approx_eq(&Subspace::full(4), &t));

        let e1a = Subspace::line(&ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let e1b = e1a.clone();
        let prod = tensor_subspace(&e1a, &e1b, &t).unwrap();
        assert_eq!(prod.dim(), 1);

        // Kronecker consistency of the projectors
        let mut rng = master_rng(3);
        let ha = random_subspace(3, 2, &mut rng, &t).unwrap();
        let hb = random_subspace(2, 1, &mut rng, &t).unwrap();
        let sub = tensor_subspace(&ha, &hb, &t).unwrap();
        let kron = ha.projector().matrix.kronecker(&hb.projector().matrix);
        assert!(crate::hilbert::frobenius_distance(&sub.projector().matrix, &kron) <= t.eq);
    }

    #[test]
    fn min_rank_zero_subspace() {
        let t = tol();
        let mut rng = master_rng(4);
        let r = min_rank(&Subspace::zero(4), space(2, 2), 8, &mut rng, &t).unwrap();
        assert_eq!(r.upper_bound, 0);
        assert!(r.witness.is_none());
        assert!(r.converged);
    }

    #[test]
    fn min_rank_of_bell_line_is_two() {
        let t = tol();
        let mut rng = master_rng(5);
        let line = Subspace::line(bell_state().amplitudes.amplitudes()).unwrap();
        let r = min_rank(&line, space(2, 2), 8, &mut rng, &t).unwrap();
        assert_eq!(r.upper_bound, 2);
        assert!(r.converged);
    }

    #[test]
    fn min_rank_of_worked_subspace_is_two() {
        let t = tol();
        let mut rng = master_rng(6);
        let h = example_rank_two_subspace(&t);
        let r = min_rank(&h, space(3, 3), 64, &mut rng, &t).unwrap();
        assert_eq!(r.upper_bound, 2);
        assert!(r.converged);
        assert_eq!(r.generic_rank, 2);
        let w = r.witness.unwrap();
        assert_eq!(schmidt_rank(&w, &t).rank, 2);
        // witness is a member of h
        assert!(h.contains_vector(w.amplitudes.amplitudes(), &t));
    }

    #[test]
    fn min_rank_of_product_subspace_is_one() {
        let t = tol();
        let mut rng = master_rng(7);
        let ha = random_subspace(2, 1, &mut rng, &t).unwrap();
        let hb = random_subspace(2, 2, &mut rng, &t).unwrap();
        let h = tensor_subspace(&ha, &hb, &t).unwrap();
        let r = min_rank(&h, space(2, 2), 16, &mut rng, &t).unwrap();
        assert_eq!(r.upper_bound, 1);
    }

    #[test]
    fn product_lattice_identities_coordinate_case() {
        let t = tol();
        let e1 = Subspace::line(&ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap();
        let e2 = Subspace::line(&ComplexVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        let res = verify_product_lattice(&e1, &e2, &e1, &e2, &t).unwrap();
        assert!(res.max() <= t.eq);
    }

    #[test]
    fn product_lattice_identities_random() {
        let t = tol();
        for trial in 0..10 {
            let mut rng = master_rng(50 + trial);
            let h1a = random_subspace(3, 1 + (trial as usize % 2), &mut rng, &t).unwrap();
            let h2a = random_subspace(3, 2, &mut rng, &t).unwrap();
            let h1b = random_subspace(3, 1, &mut rng, &t).unwrap();
            let h2b = random_subspace(3, 2, &mut rng, &t).unwrap();
            let res = verify_product_lattice(&h1a, &h2a, &h1b, &h2b, &t).unwrap();
            assert!(res.max() <= 1e-9, "residuals {res:?}");
            let (meet_ok, join_ok) = verify_inclusions(&h1a, &h2a, &h1b, &h2b, &t).unwrap();
            assert!(meet_ok && join_ok);
        }
    }

    #[test]
    fn complement_pair_join_is_strictly_smaller_than_full() {
        // (h1A (x) h1B) v (h1A-perp (x) h1B-perp) != H_A (x) H_B: the product
        // lattice embeds non-surjectively, so the join misses the entangled
        // directions mixing the two blocks. Dually, the meet of the two
        // orthocomplements is strictly larger than O.
        let t = tol();
        let mut rng = master_rng(8);
        let h1a = random_subspace(3, 2, &mut rng, &t).unwrap();
        let h1b = random_subspace(3, 2, &mut rng, &t).unwrap();
        let h2a = h1a.complement(&t);
        let h2b = h1b.complement(&t);
        let h1 = tensor_subspace(&h1a, &h1b, &t).unwrap();
        let h2 = tensor_subspace(&h2a, &h2b, &t).unwrap();
        let join = h1.join(&h2, &t).unwrap();
        assert_eq!(join.dim(), 5);
        let dual_meet = h1.complement(&t).meet(&h2.complement(&t), &t).unwrap();
        assert_eq!(dual_meet.dim(), 4);
        // the meet of the products themselves is exactly the product of the
        // meets, here O
        assert_eq!(h1.meet(&h2, &t).unwrap().dim(), 0);
        let (meet_ok, join_ok) = verify_inclusions(&h1a, &h2a, &h1b, &h2b, &t).unwrap();
        assert!(meet_ok && join_ok);
    }

    #[test]
    fn rank_monotonicity_examples() {
        let t = tol();
        let mut rng = master_rng(9);
        let full = Subspace::full(4);
        let line = Subspace::line(bell_state().amplitudes.amplitudes()).unwrap();
        assert!(rank_monotonicity_check(&line, &full, space(2, 2), 8, &mut rng, &t).unwrap());
        let h = example_rank_two_subspace(&t);
        assert!(rank_monotonicity_check(&h, &Subspace::full(9), space(3, 3), 16, &mut rng, &t)
            .unwrap());
        assert!(rank_monotonicity_check(&h, &h, space(3, 3), 16, &mut rng, &t).unwrap());
    }

    #[test]
    fn rank_monotonicity_rejects_non_inclusion() {
        let t = tol();
        let mut rng = master_rng(10);
        let h1 = random_subspace(4, 2, &mut rng, &t).unwrap();
        let h2 = random_subspace(4, 2, &mut rng, &t).unwrap();
        if !h1.is_subspace_of(&h2, &t).unwrap() {
            assert!(rank_monotonicity_check(&h1, &h2, space(2, 2), 4, &mut rng, &t).is_err());
        }
    }
}
