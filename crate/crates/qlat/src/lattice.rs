//! The quantum-correction operator and the quantum Boole, Chung-Erdos, and
//! Frechet inequalities.
//!
//! The correction operator of a pair of subspaces is the traceless Hermitian
//! matrix
//!
//! ```text
//! D(h1, h2) = P(h1 v h2) - P(h1) - P(h2) + P(h1 ^ h2)
//! ```
//!
//! Its expectation value in a state is the amount by which the classical
//! inclusion-exclusion identity fails, and it enters the quantum bounds as a
//! signed correction term.

use crate::error::{Error, Result};
use crate::hilbert::{
    commutator_norm, frobenius_distance, prob, prob_raw, ComplexMatrix, StateVector, Subspace,
    Tolerances,
};

/// Traceless Hermitian correction operator for a pair of subspaces.
#[derive(Debug, Clone)]
pub struct CorrectionOperator {
    pub matrix: ComplexMatrix,
}

impl CorrectionOperator {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Expectation value in a state.
    pub fn expectation(&self, s: &StateVector) -> f64 {
        let v = s.amplitudes();
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }
}

/// Sufficient-condition flags under which the correction vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConditionFlags {
    pub projectors_commute: bool,
    pub state_in_meet: bool,
    pub state_in_perp_join: bool,
}

impl ConditionFlags {
    pub fn any(&self) -> bool {
        self.projectors_commute || self.state_in_meet || self.state_in_perp_join
    }
}

/// All scalars of the quantum Boole / Chung-Erdos bounds for one
/// (state, subspace pair) configuration.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundsReport {
    pub p1: f64,
    pub p2: f64,
    pub p_meet: f64,
    pub p_join: f64,
    /// Expectation of the correction operator.
    pub d_value: f64,
    /// Quantum Chung-Erdos lower bound.
    pub b_lower: f64,
    /// Quantum Boole upper bound.
    pub b_upper: f64,
    /// Classical Chung-Erdos lower bound (no correction term).
    pub classical_lower: f64,
    /// Classical Boole upper bound (no correction term).
    pub classical_upper: f64,
    pub conditions: ConditionFlags,
}

pub fn correction_operator(
    h1: &Subspace,
    h2: &Subspace,
    tol: &Tolerances,
) -> Result<CorrectionOperator> {
    if h1.ambient_dim() != h2.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dims {} vs {}",
            h1.ambient_dim(),
            h2.ambient_dim()
        )));
    }
    let join = h1.join(h2, tol)?;
    let meet = h1.meet(h2, tol)?;
    let matrix = join.projector().matrix - h1.projector().matrix - h2.projector().matrix
        + meet.projector().matrix;
    Ok(CorrectionOperator { matrix })
}

/// Residual of the commutator identity
/// `[P(h1), P(h2)] = D(h1,h2) (P(h1) - P(h2))`.
pub fn commutator_residual(h1: &Subspace, h2: &Subspace, tol: &Tolerances) -> Result<f64> {
    let d = correction_operator(h1, h2, tol)?;
    let p1 = h1.projector().matrix;
    let p2 = h2.projector().matrix;
    let lhs = &p1 * &p2 - &p2 * &p1;
    let rhs = &d.matrix * (&p1 - &p2);
    Ok(frobenius_distance(&lhs, &rhs))
}

fn check_dims(s: &StateVector, h1: &Subspace, h2: &Subspace) -> Result<()> {
    if s.dim() != h1.ambient_dim() || s.dim() != h2.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs subspace dims {}, {}",
            s.dim(),
            h1.ambient_dim(),
            h2.ambient_dim()
        )));
    }
    Ok(())
}

pub fn sufficient_conditions(
    s: &StateVector,
    h1: &Subspace,
    h2: &Subspace,
    tol: &Tolerances,
) -> Result<ConditionFlags> {
    check_dims(s, h1, h2)?;
    let p1 = h1.projector().matrix;
    let p2 = h2.projector().matrix;
    let meet = h1.meet(h2, tol)?;
    let join = h1.join(h2, tol)?;
    let v = s.amplitudes();
    Ok(ConditionFlags {
        projectors_commute: commutator_norm(&p1, &p2) <= tol.eq,
        state_in_meet: (meet.projector().matrix * v - v).norm() <= tol.eq,
        state_in_perp_join: (join.projector().matrix * v).norm() <= tol.eq,
    })
}

/// Chung-Erdos-shaped lower bound `num^2 / (num + 2 p_meet)`, with the
/// vacuous zero-denominator case mapped to 0.
fn chung_erdos_lower(num: f64, p_meet: f64, tol: &Tolerances) -> f64 {
    let den = num + 2.0 * p_meet;
    if den.abs() <= tol.prob {
        0.0
    } else {
        num * num / den
    }
}

pub fn quantum_bounds(
    s: &StateVector,
    h1: &Subspace,
    h2: &Subspace,
    tol: &Tolerances,
) -> Result<BoundsReport> {
    check_dims(s, h1, h2)?;
    let join = h1.join(h2, tol)?;
    let meet = h1.meet(h2, tol)?;
    let p1 = prob(s, &h1.projector())?;
    let p2 = prob(s, &h2.projector())?;
    let p_meet = prob(s, &meet.projector())?;
    let p_join = prob(s, &join.projector())?;
    let d_op = correction_operator(h1, h2, tol)?;
    let d_value = d_op.expectation(s);

    let corrected = p1 + p2 + d_value;
    let b_upper = corrected;
    let b_lower = chung_erdos_lower(corrected, p_meet, tol);
    let classical_upper = p1 + p2;
    let classical_lower = chung_erdos_lower(p1 + p2, p_meet, tol);
    let conditions = sufficient_conditions(s, h1, h2, tol)?;

    Ok(BoundsReport {
        p1,
        p2,
        p_meet,
        p_join,
        d_value,
        b_lower,
        b_upper,
        classical_lower,
        classical_upper,
        conditions,
    })
}

/// Signed margins of the classical bounds: `(upper, lower)` where a negative
/// upper margin means classical Boole is violated and a negative lower margin
/// means classical Chung-Erdos is violated.
pub fn classical_bounds_violation(
    s: &StateVector,
    h1: &Subspace,
    h2: &Subspace,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let r = quantum_bounds(s, h1, h2, tol)?;
    let upper = r.p1 + r.p2 - r.p_join;
    let lower = r.p_join - chung_erdos_lower(r.p1 + r.p2, r.p_meet, tol);
    Ok((upper, lower))
}

/// Quantum Frechet margin `1 - <s|D|s> - p1 - p2` for a pair with zero meet.
/// Nonnegative for every state.
pub fn quantum_frechet(
    s: &StateVector,
    h1: &Subspace,
    h2: &Subspace,
    tol: &Tolerances,
) -> Result<f64> {
    check_dims(s, h1, h2)?;
    let meet = h1.meet(h2, tol)?;
    if meet.dim() != 0 {
        return Err(Error::Precondition(format!(
            "meet must be the zero subspace, found dim {}",
            meet.dim()
        )));
    }
    let d_op = correction_operator(h1, h2, tol)?;
    let p1 = prob_raw(s, &h1.projector())?;
    let p2 = prob_raw(s, &h2.projector())?;
    Ok(1.0 - d_op.expectation(s) - p1 - p2)
}

/// Result of the n-subspace Frechet check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FrechetSumCheck {
    /// Sum of the subspace probabilities.
    pub sum: f64,
    /// Whether the Boole hypothesis on the orthocomplements holds.
    pub boole_holds: bool,
    /// Whether the Frechet conclusion `sum <= n - 1` holds.
    pub frechet_holds: bool,
}

/// Frechet sum check for a family with zero common meet. The Boole hypothesis
/// is reported separately rather than assumed, since the Frechet conclusion
/// depends on it.
pub fn frechet_sum_check(
    s: &StateVector,
    hs: &[Subspace],
    tol: &Tolerances,
) -> Result<FrechetSumCheck> {
    if hs.is_empty() {
        return Err(Error::InvalidInput("empty subspace family".into()));
    }
    let mut meet = hs[0].clone();
    for h in &hs[1..] {
        meet = meet.meet(h, tol)?;
    }
    if meet.dim() != 0 {
        return Err(Error::Precondition(format!(
            "common meet must be the zero subspace, found dim {}",
            meet.dim()
        )));
    }

    let sum: f64 = hs
        .iter()
        .map(|h| prob(s, &h.projector()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum();

    let complements: Vec<Subspace> = hs.iter().map(|h| h.complement(tol)).collect();
    let mut join = complements[0].clone();
    for h in &complements[1..] {
        join = join.join(h, tol)?;
    }
    let sum_perp: f64 = complements
        .iter()
        .map(|h| prob(s, &h.projector()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .sum();
    let p_join = prob(s, &join.projector())?;

    let n = hs.len() as f64;
    Ok(FrechetSumCheck {
        sum,
        boole_holds: sum_perp >= p_join - tol.ineq,
        frechet_holds: sum <= n - 1.0 + tol.ineq,
    })
}
