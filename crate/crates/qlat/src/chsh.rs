//! CHSH subspace families on a 2x2 bipartite system, the Boole matrix, and
//! violation search.
//!
//! Basis orientation follows the construction being reproduced: `|0> = (0,1)^T`
//! and `|1> = (1,0)^T` (the reverse of the common convention), so the golden
//! projector matrices match entrywise.

use num_complex::Complex64;

use crate::bipartite::{schmidt_rank, BipartiteSpace, BipartiteState};
use crate::error::{Error, Result};
use crate::hilbert::{
    hermitian_eigen, prob, ComplexMatrix, ComplexVector, StateVector, Subspace, Tolerances,
};

/// The four measurement sets of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingSet {
    W,
    X,
    Y,
    Z,
}

pub const SETS: [SettingSet; 4] = [SettingSet::W, SettingSet::X, SettingSet::Y, SettingSet::Z];

/// 2x2 unitary `[[a, b], [-b*, a*]]` with both entries nonzero.
#[derive(Debug, Clone, Copy)]
pub struct LocalUnitary {
    pub a: Complex64,
    pub b: Complex64,
}

impl LocalUnitary {
    pub fn new(a: Complex64, b: Complex64, tol: &Tolerances) -> Result<Self> {
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return Err(Error::InvalidInput("a and b must both be nonzero".into()));
        }
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > tol.norm {
            return Err(Error::InvalidInput(format!(
                "|a|^2 + |b|^2 = {n}, expected 1"
            )));
        }
        Ok(LocalUnitary { a, b })
    }

    /// The symmetric a = b = 1/sqrt(2) point.
    pub fn hadamard_point(tol: &Tolerances) -> Self {
        let x = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        LocalUnitary::new(x, x, tol).expect("valid by construction")
    }

    /// `|0> = (0,1)^T`.
    pub fn ket0() -> ComplexVector {
        ComplexVector::from_vec(vec![Complex64::ZERO, Complex64::ONE])
    }

    /// `|1> = (1,0)^T`.
    pub fn ket1() -> ComplexVector {
        ComplexVector::from_vec(vec![Complex64::ONE, Complex64::ZERO])
    }

    /// `U|0> = (b, a*)^T`.
    pub fn u_ket0(&self) -> ComplexVector {
        ComplexVector::from_vec(vec![self.b, self.a.conj()])
    }

    /// `U|1> = (a, -b*)^T`.
    pub fn u_ket1(&self) -> ComplexVector {
        ComplexVector::from_vec(vec![self.a, -self.b.conj()])
    }
}

/// The sixteen one-dimensional atoms and eight two-dimensional planes built
/// from a local unitary.
#[derive(Debug, Clone)]
pub struct ChshFamily {
    pub unitary: LocalUnitary,
    /// `atoms[set][i - 1]` is the atom `i` of the set, i in 1..=4.
    pub atoms: [[Subspace; 4]; 4],
    /// `planes[set]` is the pair `(h_14, h_23)`.
    pub planes: [(Subspace, Subspace); 4],
}

fn set_index(s: SettingSet) -> usize {
    match s {
        SettingSet::W => 0,
        SettingSet::X => 1,
        SettingSet::Y => 2,
        SettingSet::Z => 3,
    }
}

impl ChshFamily {
    pub fn atom(&self, i: usize, s: SettingSet) -> &Subspace {
        &self.atoms[set_index(s)][i - 1]
    }

    pub fn plane_14(&self, s: SettingSet) -> &Subspace {
        &self.planes[set_index(s)].0
    }

    pub fn plane_23(&self, s: SettingSet) -> &Subspace {
        &self.planes[set_index(s)].1
    }
}

fn kron_line(a: &ComplexVector, b: &ComplexVector) -> Result<Subspace> {
    let v = ComplexVector::from_fn(a.len() * b.len(), |idx, _| {
        a[idx / b.len()] * b[idx % b.len()]
    });
    Subspace::line(&v)
}

/// Build the full family of atoms and planes and verify its invariants.
pub fn build_family(u: &LocalUnitary, tol: &Tolerances) -> Result<ChshFamily> {
    let k0 = LocalUnitary::ket0();
    let k1 = LocalUnitary::ket1();
    let u0 = u.u_ket0();
    let u1 = u.u_ket1();

    // per set: the (A-side, B-side) one-qubit vectors for atoms 1..4,
    // ordered (1: hi-hi, 2: hi-lo, 3: lo-hi, 4: lo-lo)
    let side = |rotated: bool| -> (ComplexVector, ComplexVector) {
        if rotated {
            (u1.clone(), u0.clone())
        } else {
            (k1.clone(), k0.clone())
        }
    };

    let mut atoms: Vec<[Subspace; 4]> = Vec::with_capacity(4);
    let mut planes: Vec<(Subspace, Subspace)> = Vec::with_capacity(4);
    for s in SETS {
        let (rot_a, rot_b) = match s {
            SettingSet::W => (false, false),
            SettingSet::X => (false, true),
            SettingSet::Y => (true, false),
            SettingSet::Z => (true, true),
        };
        let (a_hi, a_lo) = side(rot_a);
        let (b_hi, b_lo) = side(rot_b);
        let set_atoms = [
            kron_line(&a_hi, &b_hi)?,
            kron_line(&a_hi, &b_lo)?,
            kron_line(&a_lo, &b_hi)?,
            kron_line(&a_lo, &b_lo)?,
        ];
        let h14 = set_atoms[0].join(&set_atoms[3], tol)?;
        let h23 = set_atoms[1].join(&set_atoms[2], tol)?;
        atoms.push(set_atoms);
        planes.push((h14, h23));
    }

    let family = ChshFamily {
        unitary: *u,
        atoms: atoms.try_into().expect("four sets"),
        planes: planes.try_into().expect("four sets"),
    };
    validate_family(&family, tol)?;
    Ok(family)
}

fn validate_family(f: &ChshFamily, tol: &Tolerances) -> Result<()> {
    let full = Subspace::full(4);
    for s in SETS {
        let h14 = f.plane_14(s);
        let h23 = f.plane_23(s);
        if h14.dim() != 2 || h23.dim() != 2 {
            return Err(Error::InvalidInput("plane is not two-dimensional".into()));
        }
        if !h14.complement(tol).approx_eq(h23, tol) {
            return Err(Error::InvalidInput("planes are not orthocomplements".into()));
        }
        if !h14.join(h23, tol)?.approx_eq(&full, tol) {
            return Err(Error::InvalidInput("planes do not span the space".into()));
        }
        // atoms within one set are mutually orthogonal
        for i in 1..=4 {
            for j in (i + 1)..=4 {
                let overlap = (f.atom(i, s).basis().adjoint() * f.atom(j, s).basis())[(0, 0)];
                if overlap.norm() > tol.eq {
                    return Err(Error::InvalidInput(format!(
                        "atoms {i},{j} of a set are not orthogonal"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Probabilities of the `|1>` outcomes on each side, in the plain and rotated
/// bases.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LocalProbabilities {
    pub p_a: f64,
    pub p_b: f64,
    pub p_a_prime: f64,
    pub p_b_prime: f64,
}

fn overlap_prob(s: &StateVector, v: &ComplexVector) -> f64 {
    let ip = (v.adjoint() * s.amplitudes())[(0, 0)];
    ip.norm_sqr().clamp(0.0, 1.0)
}

pub fn local_probabilities(
    s_a: &StateVector,
    s_b: &StateVector,
    u: &LocalUnitary,
) -> Result<LocalProbabilities> {
    if s_a.dim() != 2 || s_b.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected qubit states, got dims {} and {}",
            s_a.dim(),
            s_b.dim()
        )));
    }
    Ok(LocalProbabilities {
        p_a: overlap_prob(s_a, &LocalUnitary::ket1()),
        p_b: overlap_prob(s_b, &LocalUnitary::ket1()),
        p_a_prime: overlap_prob(s_a, &u.u_ket1()),
        p_b_prime: overlap_prob(s_b, &u.u_ket1()),
    })
}

/// The product-state Boole functional
/// `Omega = pA + pB + pA' pB' - pA pB - pA' pB - pA pB'`; nonnegative for
/// every product state.
pub fn omega(
    s_a: &StateVector,
    s_b: &StateVector,
    u: &LocalUnitary,
) -> Result<(LocalProbabilities, f64)> {
    let p = local_probabilities(s_a, s_b, u)?;
    let omega = p.p_a + p.p_b + p.p_a_prime * p.p_b_prime
        - p.p_a * p.p_b
        - p.p_a_prime * p.p_b
        - p.p_a * p.p_b_prime;
    Ok((p, omega))
}

/// `Omega' = p[P(h_23W)] + p[P(h_23X)] - 1` on a product state, evaluated
/// through the plane projectors. Takes both signs; the closed form is
/// `(2 pA - 1)(1 - pB - pB')`.
pub fn omega_prime(s_a: &StateVector, s_b: &StateVector, u: &LocalUnitary, tol: &Tolerances) -> Result<f64> {
    let f = build_family(u, tol)?;
    let s = product_state(s_a, s_b)?;
    let p23w = prob(&s.amplitudes, &f.plane_23(SettingSet::W).projector())?;
    let p23x = prob(&s.amplitudes, &f.plane_23(SettingSet::X).projector())?;
    Ok(p23w + p23x - 1.0)
}

/// Closed form of `Omega'` from the local probabilities.
pub fn omega_prime_closed_form(p: &LocalProbabilities) -> f64 {
    (2.0 * p.p_a - 1.0) * (1.0 - p.p_b - p.p_b_prime)
}

/// Kronecker product of two qubit states.
pub fn product_state(s_a: &StateVector, s_b: &StateVector) -> Result<BipartiteState> {
    let space = BipartiteSpace::new(s_a.dim(), s_b.dim())?;
    let v = ComplexVector::from_fn(space.total_dim(), |idx, _| {
        s_a.amplitudes()[idx / s_b.dim()] * s_b.amplitudes()[idx % s_b.dim()]
    });
    BipartiteState::new(space, StateVector::normalized(v)?)
}

/// Dimensions of the iterated meet and join of the planes entering the
/// zero-common-vector statement.
pub fn lemma1_check(f: &ChshFamily, tol: &Tolerances) -> Result<(usize, usize)> {
    let meet = f
        .plane_14(SettingSet::W)
        .meet(f.plane_14(SettingSet::X), tol)?
        .meet(f.plane_14(SettingSet::Y), tol)?
        .meet(f.plane_23(SettingSet::Z), tol)?;
    let join = f
        .plane_23(SettingSet::W)
        .join(f.plane_23(SettingSet::X), tol)?
        .join(f.plane_23(SettingSet::Y), tol)?
        .join(f.plane_14(SettingSet::Z), tol)?;
    Ok((meet.dim(), join.dim()))
}

/// The Boole matrix
/// `M = P(h_23W) + P(h_23X) + P(h_23Y) + P(h_14Z) - 1`.
pub fn boole_matrix(u: &LocalUnitary, tol: &Tolerances) -> Result<ComplexMatrix> {
    let f = build_family(u, tol)?;
    Ok(boole_matrix_of(&f))
}

pub fn boole_matrix_of(f: &ChshFamily) -> ComplexMatrix {
    f.plane_23(SettingSet::W).projector().matrix
        + f.plane_23(SettingSet::X).projector().matrix
        + f.plane_23(SettingSet::Y).projector().matrix
        + f.plane_14(SettingSet::Z).projector().matrix
        - ComplexMatrix::identity(4, 4)
}

/// Scalars of the CHSH evaluation for one state.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChshReport {
    /// Half the excess of the four-plane sum over one; on product states
    /// this equals the local functional `Omega`.
    pub omega: f64,
    /// `p[P(h_23W)] + p[P(h_23X)] - 1`.
    pub omega_prime: f64,
    /// Sum of the eight atom probabilities.
    pub chsh_sum: f64,
    /// Sum of the four plane probabilities entering the Boole hypothesis.
    pub boole_sum: f64,
    pub violated: bool,
}

/// Sum of the eight atom probabilities
/// `p[P(h_1W)] + p[P(h_4W)] + ... + p[P(h_3Z)]`; at most 3 for product
/// states, and equal to `3 - <s|M|s>` for every state.
pub fn chsh_sum(s: &BipartiteState, f: &ChshFamily, tol: &Tolerances) -> Result<ChshReport> {
    if s.space.total_dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected the 2x2 product space, got total dim {}",
            s.space.total_dim()
        )));
    }
    let sv = &s.amplitudes;
    let atom_prob = |i: usize, set: SettingSet| prob(sv, &f.atom(i, set).projector());
    let chsh_sum = atom_prob(1, SettingSet::W)?
        + atom_prob(4, SettingSet::W)?
        + atom_prob(1, SettingSet::X)?
        + atom_prob(4, SettingSet::X)?
        + atom_prob(1, SettingSet::Y)?
        + atom_prob(4, SettingSet::Y)?
        + atom_prob(2, SettingSet::Z)?
        + atom_prob(3, SettingSet::Z)?;

    let boole_sum = prob(sv, &f.plane_23(SettingSet::W).projector())?
        + prob(sv, &f.plane_23(SettingSet::X).projector())?
        + prob(sv, &f.plane_23(SettingSet::Y).projector())?
        + prob(sv, &f.plane_14(SettingSet::Z).projector())?;

    let omega_prime = prob(sv, &f.plane_23(SettingSet::W).projector())?
        + prob(sv, &f.plane_23(SettingSet::X).projector())?
        - 1.0;

    Ok(ChshReport {
        omega: (boole_sum - 1.0) / 2.0,
        omega_prime,
        chsh_sum,
        boole_sum,
        violated: chsh_sum > 3.0 + tol.ineq,
    })
}

/// A violating state found by the eigenvector search.
#[derive(Debug, Clone)]
pub struct Violation {
    pub state: BipartiteState,
    pub chsh_sum: f64,
    pub schmidt_rank: usize,
    pub lambda_min: f64,
}

/// Deterministic violation search: the eigenvector of the Boole matrix for
/// its most-negative eigenvalue maximizes the CHSH sum `3 - <s|M|s>`.
/// Returns `None` when no eigenvalue is below `-tol.ineq`.
pub fn find_violation(u: &LocalUnitary, tol: &Tolerances) -> Result<Option<Violation>> {
    let f = build_family(u, tol)?;
    let m = boole_matrix_of(&f);
    let (vals, vecs) = hermitian_eigen(&m, tol)?;
    let lambda_min = vals[0];
    if lambda_min >= -tol.ineq {
        return Ok(None);
    }
    let space = BipartiteSpace::new(2, 2)?;
    let state = BipartiteState::new(
        space,
        StateVector::normalized(vecs.column(0).into_owned())?,
    )?;
    let report = chsh_sum(&state, &f, tol)?;
    let rank = schmidt_rank(&state, tol).rank;
    Ok(Some(Violation {
        state,
        chsh_sum: report.chsh_sum,
        schmidt_rank: rank,
        lambda_min,
    }))
}

/// The four plane projectors of the reference tabulation at
/// a = b = 1/sqrt(2), entrywise.
///
/// The tabulation's third matrix is `1_A (x) |0><0|_B`, the span of atoms
/// 2Y and 4Y (not 2Y and 3Y): `{U|1>, U|0>}` spans the A factor, so
/// `h_2Y v h_4Y = H_A (x) |0>_B`. The reference eigenvalues below belong to
/// the sum of these four tabulated matrices minus the identity; the
/// definitional Boole matrix from [`boole_matrix`] instead has the exact
/// spectrum `{1 - sqrt 2, 1, 1, 1 + sqrt 2}` at this point.
pub fn golden_projectors_hadamard_point() -> [ComplexMatrix; 4] {
    let r = |x: f64| Complex64::new(x, 0.0);
    let p23w = ComplexMatrix::from_row_slice(
        4,
        4,
        &[
            r(0.0), r(0.0), r(0.0), r(0.0),
            r(0.0), r(1.0), r(0.0), r(0.0),
            r(0.0), r(0.0), r(1.0), r(0.0),
            r(0.0), r(0.0), r(0.0), r(0.0),
        ],
    );
    let p23x = ComplexMatrix::from_row_slice(
        4,
        4,
        &[
            r(0.5), r(0.5), r(0.0), r(0.0),
            r(0.5), r(0.5), r(0.0), r(0.0),
            r(0.0), r(0.0), r(0.5), r(-0.5),
            r(0.0), r(0.0), r(-0.5), r(0.5),
        ],
    );
    let p23y = ComplexMatrix::from_row_slice(
        4,
        4,
        &[
            r(0.0), r(0.0), r(0.0), r(0.0),
            r(0.0), r(1.0), r(0.0), r(0.0),
            r(0.0), r(0.0), r(0.0), r(0.0),
            r(0.0), r(0.0), r(0.0), r(1.0),
        ],
    );
    let p14z = ComplexMatrix::from_row_slice(
        4,
        4,
        &[
            r(0.5), r(0.0), r(0.0), r(0.5),
            r(0.0), r(0.5), r(0.5), r(0.0),
            r(0.0), r(0.5), r(0.5), r(0.0),
            r(0.5), r(0.0), r(0.0), r(0.5),
        ],
    );
    [p23w, p23x, p23y, p14z]
}

/// The planes of the reference tabulation, computed from a family's atoms:
/// `[P(h_23W), P(h_23X), P(h_2Y v h_4Y), P(h_14Z)]`.
pub fn example_plane_projectors(f: &ChshFamily, tol: &Tolerances) -> Result<[ComplexMatrix; 4]> {
    let y24 = f
        .atom(2, SettingSet::Y)
        .join(f.atom(4, SettingSet::Y), tol)?;
    Ok([
        f.plane_23(SettingSet::W).projector().matrix.clone(),
        f.plane_23(SettingSet::X).projector().matrix.clone(),
        y24.projector().matrix,
        f.plane_14(SettingSet::Z).projector().matrix.clone(),
    ])
}

/// Sum of the reference-tabulation planes minus the identity; the matrix
/// whose spectrum is [`REFERENCE_EIGENVALUES`] at a = b = 1/sqrt(2).
pub fn example_boole_matrix(f: &ChshFamily, tol: &Tolerances) -> Result<ComplexMatrix> {
    let [w, x, y, z] = example_plane_projectors(f, tol)?;
    Ok(w + x + y + z - ComplexMatrix::identity(4, 4))
}

/// The two-decimal reference eigenvalues of the example Boole matrix at the
/// a = b = 1/sqrt(2) point.
pub const REFERENCE_EIGENVALUES: [f64; 4] = [-0.30, 0.45, 1.55, 2.30];

/// Tolerance for the two-decimal reference values. The exact spectrum of the
/// reference matrix is {-0.3066, 0.4588, 1.5412, 2.3066}, so the tabulated
/// two-decimal figures are off by up to 0.0088 rather than a half-ulp.
pub const REFERENCE_EIGENVALUE_TOL: f64 = 0.01;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{frobenius_distance, hermitian_eigenvalues, random_state};
    use crate::rng::master_rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn had() -> LocalUnitary {
        LocalUnitary::hadamard_point(&tol())
    }

    #[test]
    fn unitary_rejects_zero_entries() {
        let t = tol();
        assert!(LocalUnitary::new(Complex64::ONE, Complex64::ZERO, &t).is_err());
        assert!(LocalUnitary::new(Complex64::new(0.9, 0.0), Complex64::new(0.1, 0.0), &t).is_err());
    }

    #[test]
    fn golden_projectors_match_entrywise() {
        let t = tol();
        let f = build_family(&had(), &t).unwrap();
        let golden = golden_projectors_hadamard_point();
        let computed = example_plane_projectors(&f, &t).unwrap();
        for (c, g) in computed.iter().zip(&golden) {
            for (x, y) in c.iter().zip(g.iter()) {
                assert!((x - y).norm() <= 1e-12, "entry {x} vs {y}");
            }
        }
    }

    #[test]
    fn planes_resolve_identity() {
        let t = tol();
        let mut rng = master_rng(1);
        let u = random_local_unitary(&mut rng, &t);
        let f = build_family(&u, &t).unwrap();
        for s in SETS {
            let sum = f.plane_14(s).projector().matrix + f.plane_23(s).projector().matrix;
            assert!(frobenius_distance(&sum, &ComplexMatrix::identity(4, 4)) <= t.eq);
        }
    }

    fn random_local_unitary<R: rand::Rng>(rng: &mut R, tol: &Tolerances) -> LocalUnitary {
        loop {
            let s = random_state(2, rng);
            let a = s.amplitudes()[0];
            let b = s.amplitudes()[1];
            if a.norm() > 0.05 && b.norm() > 0.05 {
                return LocalUnitary::new(a, b, tol).unwrap();
            }
        }
    }

    #[test]
    fn lemma1_dims_hadamard_and_random() {
        let t = tol();
        let f = build_family(&had(), &t).unwrap();
        assert_eq!(lemma1_check(&f, &t).unwrap(), (0, 4));
        let mut rng = master_rng(2);
        for _ in 0..5 {
            let u = random_local_unitary(&mut rng, &t);
            let f = build_family(&u, &t).unwrap();
            assert_eq!(lemma1_check(&f, &t).unwrap(), (0, 4));
        }
    }

    #[test]
    fn omega_closed_cases() {
        let t = tol();
        let u = had();
        // sA = sB = |1>: Omega = (1 - pA')(1 - pB') >= 0
        let one = StateVector::normalized(LocalUnitary::ket1()).unwrap();
        let (p, om) = omega(&one, &one, &u).unwrap();
        let expected = (1.0 - p.p_a_prime) * (1.0 - p.p_b_prime);
        assert!((om - expected).abs() <= t.ineq);
        assert!(om >= -t.ineq);
    }

    #[test]
    fn omega_nonnegative_on_random_product_states() {
        let u = had();
        let mut rng = master_rng(3);
        for _ in 0..1000 {
            let s_a = random_state(2, &mut rng);
            let s_b = random_state(2, &mut rng);
            let (_, om) = omega(&s_a, &s_b, &u).unwrap();
            assert!(om >= -1e-9);
        }
    }

    #[test]
    fn omega_equals_boole_sum_minus_one() {
        let t = tol();
        let u = had();
        let f = build_family(&u, &t).unwrap();
        let mut rng = master_rng(4);
        for _ in 0..50 {
            let s_a = random_state(2, &mut rng);
            let s_b = random_state(2, &mut rng);
            let (_, om) = omega(&s_a, &s_b, &u).unwrap();
            let s = product_state(&s_a, &s_b).unwrap();
            let r = chsh_sum(&s, &f, &t).unwrap();
            assert!((om - (r.boole_sum - 1.0) / 2.0).abs() <= 1e-9);
            assert!((om - r.omega).abs() <= 1e-9);
        }
    }

    #[test]
    fn omega_prime_signs_and_closed_form() {
        let t = tol();
        let u = had();
        let zero = StateVector::normalized(LocalUnitary::ket0()).unwrap();
        let one = StateVector::normalized(LocalUnitary::ket1()).unwrap();
        // sA=|1>, sB=|0>: (2*1-1)(1-0-1/2) = 1/2
        let op = omega_prime(&one, &zero, &u, &t).unwrap();
        assert!((op - 0.5).abs() <= 1e-9);
        // sA=|1>, sB=|1>: (1)(1-1-1/2) = -1/2
        let op = omega_prime(&one, &one, &u, &t).unwrap();
        assert!((op + 0.5).abs() <= 1e-9);
        // pA = 1/2 kills the first factor
        let plus = StateVector::normalized(ComplexVector::from_vec(vec![
            Complex64::ONE,
            Complex64::ONE,
        ]))
        .unwrap();
        let op = omega_prime(&plus, &one, &u, &t).unwrap();
        assert!(op.abs() <= 1e-9);
        // closed form agrees on random product states
        let mut rng = master_rng(5);
        for _ in 0..50 {
            let s_a = random_state(2, &mut rng);
            let s_b = random_state(2, &mut rng);
            let p = local_probabilities(&s_a, &s_b, &u).unwrap();
            let lhs = omega_prime(&s_a, &s_b, &u, &t).unwrap();
            assert!((lhs - omega_prime_closed_form(&p)).abs() <= 1e-9);
        }
    }

    #[test]
    fn example_matrix_reference_spectrum() {
        let t = tol();
        let f = build_family(&had(), &t).unwrap();
        let m = example_boole_matrix(&f, &t).unwrap();
        assert!((m.trace().re - 4.0).abs() <= t.eq);
        let eig = hermitian_eigenvalues(&m, &t).unwrap();
        for (got, want) in eig.iter().zip(REFERENCE_EIGENVALUES.iter()) {
            assert!(
                (got - want).abs() <= REFERENCE_EIGENVALUE_TOL,
                "eigenvalue {got} vs reference {want}"
            );
        }
    }

    #[test]
    fn boole_matrix_exact_spectrum() {
        // closed form at a = b = 1/sqrt(2): {1 - sqrt 2, 1, 1, 1 + sqrt 2}
        let t = tol();
        let m = boole_matrix(&had(), &t).unwrap();
        assert!((m.trace().re - 4.0).abs() <= t.eq);
        assert!(frobenius_distance(&m, &m.adjoint()) <= t.eq);
        let eig = hermitian_eigenvalues(&m, &t).unwrap();
        let want = [
            1.0 - std::f64::consts::SQRT_2,
            1.0,
            1.0,
            1.0 + std::f64::consts::SQRT_2,
        ];
        for (got, want) in eig.iter().zip(want.iter()) {
            assert!((got - want).abs() <= 1e-9, "eigenvalue {got} vs {want}");
        }
    }

    #[test]
    fn chsh_sum_two_path_identity() {
        let t = tol();
        let f = build_family(&had(), &t).unwrap();
        let m = boole_matrix_of(&f);
        let mut rng = master_rng(6);
        for _ in 0..50 {
            let s = BipartiteState::new(BipartiteSpace::new(2, 2).unwrap(), random_state(4, &mut rng))
                .unwrap();
            let r = chsh_sum(&s, &f, &t).unwrap();
            let v = s.amplitudes.amplitudes();
            let m_exp = (v.adjoint() * &m * v)[(0, 0)].re;
            assert!((r.chsh_sum - (3.0 - m_exp)).abs() <= 1e-9);
        }
    }

    #[test]
    fn plane_probability_splits_over_atoms() {
        let t = tol();
        let f = build_family(&had(), &t).unwrap();
        let mut rng = master_rng(7);
        let s = random_state(4, &mut rng);
        for set in SETS {
            let p_plane = prob(&s, &f.plane_14(set).projector()).unwrap();
            let p_atoms = prob(&s, &f.atom(1, set).projector()).unwrap()
                + prob(&s, &f.atom(4, set).projector()).unwrap();
            assert!((p_plane - p_atoms).abs() <= 1e-9);
        }
    }

    #[test]
    fn product_states_never_violate() {
        let t = tol();
        let f = build_family(&had(), &t).unwrap();
        let mut rng = master_rng(8);
        for _ in 0..500 {
            let s = product_state(&random_state(2, &mut rng), &random_state(2, &mut rng)).unwrap();
            let r = chsh_sum(&s, &f, &t).unwrap();
            assert!(r.chsh_sum <= 3.0 + 1e-9);
            assert!(!r.violated);
        }
    }

    #[test]
    fn violation_found_at_hadamard_point() {
        let t = tol();
        let v = find_violation(&had(), &t).unwrap().expect("violation exists");
        assert!((v.chsh_sum - (3.0 - v.lambda_min)).abs() <= 1e-9);
        assert!(v.chsh_sum >= 3.25);
        assert_eq!(v.schmidt_rank, 2);
        assert!((v.lambda_min - (1.0 - std::f64::consts::SQRT_2)).abs() <= 1e-9);
    }
}
