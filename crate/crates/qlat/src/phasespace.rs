//! Discrete Weyl–Heisenberg phase space over Z(d) x Z(d) with odd d: finite
//! Fourier transform, displacement operators, coherent projector families,
//! and the coherent-POVM average rank-reduction bound.
//!
//! Odd dimension is required throughout because the displacement phase uses
//! the modular inverse of 2, which does not exist for even d.

use num_complex::Complex64;
use rand::Rng;

use crate::bipartite::{schmidt_rank, BipartiteSpace, BipartiteState};
use crate::error::{Error, Result};
use crate::exec::indexed_map;
use crate::hilbert::{frobenius_distance, random_subspace, ComplexMatrix, Projector, Tolerances};
use crate::measurement::{OutcomeRecord, RankReductionReport};

/// `omega(alpha) = exp(2 pi i alpha / d)`.
pub fn omega(d: usize, alpha: i64) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (alpha.rem_euclid(d as i64) as f64) / d as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// Fourier, position (Z) and momentum-shift (X) operators on C^d.
#[derive(Debug, Clone)]
pub struct WeylSystem {
    pub d: usize,
    pub fourier: ComplexMatrix,
    pub z_op: ComplexMatrix,
    pub x_op: ComplexMatrix,
}

/// Build the Weyl system for odd d >= 3.
pub fn weyl_system(d: usize) -> Result<WeylSystem> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::UnsupportedDimension(format!(
            "phase space requires odd d >= 3, got {d}"
        )));
    }
    let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let fourier = ComplexMatrix::from_fn(d, d, |n, m| scale * omega(d, (n * m) as i64));
    let z_op = ComplexMatrix::from_fn(d, d, |n, m| {
        if n == m {
            omega(d, m as i64)
        } else {
            Complex64::ZERO
        }
    });
    // |X; m+1><X; m|
    let x_op = ComplexMatrix::from_fn(d, d, |n, m| {
        if n == (m + 1) % d {
            Complex64::ONE
        } else {
            Complex64::ZERO
        }
    });
    Ok(WeylSystem {
        d,
        fourier,
        z_op,
        x_op,
    })
}

/// Modular inverse of 2 in Z(d), d odd: `(d + 1) / 2`.
pub fn half_mod(d: usize) -> i64 {
    ((d + 1) / 2) as i64
}

fn matrix_power(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let d = m.nrows();
    let mut acc = ComplexMatrix::identity(d, d);
    for _ in 0..k {
        acc = &acc * m;
    }
    acc
}

/// `D(alpha, beta) = Z^alpha X^beta omega(-2^{-1} alpha beta)`.
pub fn displacement(sys: &WeylSystem, alpha: i64, beta: i64) -> ComplexMatrix {
    let d = sys.d;
    let a = alpha.rem_euclid(d as i64) as usize;
    let b = beta.rem_euclid(d as i64) as usize;
    let phase = omega(d, -half_mod(d) * (a as i64) * (b as i64));
    matrix_power(&sys.z_op, a) * matrix_power(&sys.x_op, b) * phase
}

/// The d^2 coherent projectors `Pi(alpha, beta) = D Pi(0,0) D^dagger`.
#[derive(Debug, Clone)]
pub struct CoherentFamily {
    pub system: WeylSystem,
    pub seed: Projector,
    /// `members[alpha * d + beta]`.
    pub members: Vec<Projector>,
}

impl CoherentFamily {
    pub fn member(&self, alpha: usize, beta: usize) -> &Projector {
        &self.members[alpha * self.system.d + beta]
    }

    pub fn seed_trace(&self) -> f64 {
        self.seed.trace()
    }
}

/// Conjugate the seed through every displacement and audit the family
/// invariants: equal traces, resolution of identity `(1/d) sum Pi = 1`, and
/// pairwise distinctness (the genericity requirement). A seed whose orbit
/// collides — in particular any `|X;n><X;n|` or `|P;n><P;n|` — is rejected
/// with the first colliding pair named.
pub fn coherent_family(sys: &WeylSystem, seed: Projector, tol: &Tolerances) -> Result<CoherentFamily> {
    let d = sys.d;
    if seed.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "seed dim {} vs system dim {d}",
            seed.dim()
        )));
    }
    if !seed.validate(tol) {
        return Err(Error::InvalidInput("seed is not a projector".into()));
    }
    let t = seed.trace().round();
    if t < 1.0 || t > (d - 1) as f64 {
        return Err(Error::InvalidInput(format!(
            "seed trace {t} outside 1..={}",
            d - 1
        )));
    }

    let members: Vec<Projector> = indexed_map(d * d, |idx| {
        let (alpha, beta) = ((idx / d) as i64, (idx % d) as i64);
        let dop = displacement(sys, alpha, beta);
        Projector {
            matrix: &dop * &seed.matrix * dop.adjoint(),
        }
    });

    let mut sum = ComplexMatrix::zeros(d, d);
    for m in &members {
        if (m.trace() - seed.trace()).abs() > tol.eq {
            return Err(Error::InvalidInput("member trace drifted from the seed".into()));
        }
        sum += &m.matrix;
    }
    sum /= Complex64::new(d as f64 * t, 0.0);
    if frobenius_distance(&sum, &ComplexMatrix::identity(d, d)) > tol.eq {
        return Err(Error::InvalidInput("family does not resolve the identity".into()));
    }

    // genericity audit: all d^2 members pairwise distinct
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if frobenius_distance(&members[i].matrix, &members[j].matrix) <= 10.0 * tol.eq {
                return Err(Error::RejectedSeed(i / d, i % d, j / d, j % d));
            }
        }
    }

    Ok(CoherentFamily {
        system: sys.clone(),
        seed,
        members,
    })
}

/// Default generic seed: projector onto the span of `t` Haar-random vectors.
pub fn random_seed_projector<R: Rng>(
    sys: &WeylSystem,
    t: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<Projector> {
    if t < 1 || t > sys.d - 1 {
        return Err(Error::InvalidInput(format!(
            "seed trace {t} outside 1..={}",
            sys.d - 1
        )));
    }
    Ok(random_subspace(sys.d, t, rng, tol)?.projector())
}

/// Projector onto the position state `|X; n>`.
pub fn position_projector(sys: &WeylSystem, n: usize) -> Projector {
    let d = sys.d;
    let mut m = ComplexMatrix::zeros(d, d);
    m[(n % d, n % d)] = Complex64::ONE;
    Projector { matrix: m }
}

/// Projector onto the momentum state `|P; n> = F |X; n>`.
pub fn momentum_projector(sys: &WeylSystem, n: usize) -> Projector {
    let col = sys.fourier.column(n % sys.d).into_owned();
    Projector {
        matrix: &col * col.adjoint(),
    }
}

/// Full coherent POVM on a bipartite state: all `d_A^2 * d_B^2` outcomes with
/// probabilities `p = (1/(d_A t_A d_B t_B)) <s| Pi_A (x) Pi_B |s>` (the
/// trace factors normalize seeds of trace above one), per-outcome
/// collapse and rank reduction, and the state-independent average bound
/// `(d_A - t_A) + (d_B - t_B)`.
pub fn povm_measure(
    s: &BipartiteState,
    fam_a: &CoherentFamily,
    fam_b: &CoherentFamily,
    tol: &Tolerances,
) -> Result<RankReductionReport> {
    let d_a = fam_a.system.d;
    let d_b = fam_b.system.d;
    if s.space != BipartiteSpace::new(d_a, d_b)? {
        return Err(Error::DimensionMismatch(format!(
            "state space ({}, {}) vs families ({d_a}, {d_b})",
            s.space.d_a, s.space.d_b
        )));
    }
    let na = d_a * d_a;
    let nb = d_b * d_b;
    let weight = 1.0 / ((d_a * d_b) as f64 * fam_a.seed_trace() * fam_b.seed_trace());
    let rank_before = schmidt_rank(s, tol).rank;
    let coeff = s.coeff();

    let branches = indexed_map(na * nb, |idx| {
        let (a, b) = (idx / nb, idx % nb);
        let m = &fam_a.members[a].matrix * &coeff * fam_b.members[b].matrix.transpose();
        let p = weight * m.norm_squared();
        let state = if p > tol.prob {
            BipartiteState::from_coeff(s.space, &m).ok()
        } else {
            None
        };
        (p, state)
    });

    let mut outcomes = Vec::with_capacity(na * nb);
    let mut r_ave = 0.0;
    let mut total_probability = 0.0;
    for (idx, (p, state)) in branches.into_iter().enumerate() {
        let (a, b) = (idx / nb, idx % nb);
        let rank_after = state.as_ref().map(|st| schmidt_rank(st, tol).rank);
        let reduction = rank_after.map(|r| rank_before as i64 - r as i64);
        if let Some(red) = reduction {
            r_ave += p * red as f64;
        }
        total_probability += p;
        outcomes.push(OutcomeRecord {
            a,
            b,
            label: idx as f64,
            p_ab: p,
            rank_before,
            rank_after,
            reduction,
            collapsed: state,
        });
    }

    let marginals_a = (0..na)
        .map(|a| (0..nb).map(|b| outcomes[a * nb + b].p_ab).sum())
        .collect();
    let marginals_b = (0..nb)
        .map(|b| (0..na).map(|a| outcomes[a * nb + b].p_ab).sum())
        .collect();
    let upper_bound =
        (d_a as f64 - fam_a.seed_trace()) + (d_b as f64 - fam_b.seed_trace());

    Ok(RankReductionReport {
        outcomes,
        marginals_a,
        marginals_b,
        r_ave,
        upper_bound,
        total_probability,
    })
}
