//! Projective product measurements: state collapse, Sylvester and Frobenius
//! rank bounds, and per-outcome / average rank reduction.
//!
//! Collapse is computed on the coefficient matrix, `pi_A M (pi_B)^T`, and
//! cross-checked against the Kronecker-product path in tests. Collapsed
//! states are renormalized before any rank computation, and outcomes with
//! probability at or below the probability tolerance carry no collapsed
//! state: their rank reduction is undefined and contributes zero weight to
//! the average.

use num_complex::Complex64;
use serde::Deserialize;

use crate::bipartite::{schmidt_rank, BipartiteSpace, BipartiteState};
use crate::error::{Error, Result};
use crate::exec::indexed_map;
use crate::hilbert::{frobenius_distance, ComplexMatrix, Projector, Tolerances};

/// A resolution of the identity on one subsystem into orthogonal projectors.
#[derive(Debug, Clone)]
pub struct OrthogonalDecomposition {
    projectors: Vec<Projector>,
}

impl OrthogonalDecomposition {
    pub fn new(projectors: Vec<Projector>, tol: &Tolerances) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidInput("empty decomposition".into()));
        }
        let d = projectors[0].dim();
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != d {
                return Err(Error::DimensionMismatch(format!(
                    "projector {i} has dim {} vs {d}",
                    p.dim()
                )));
            }
            if !p.validate(tol) {
                return Err(Error::InvalidInput(format!("projector {i} is not a projector")));
            }
            sum += &p.matrix;
        }
        if frobenius_distance(&sum, &ComplexMatrix::identity(d, d)) > tol.eq {
            return Err(Error::InvalidInput("projectors do not sum to the identity".into()));
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let prod = &projectors[i].matrix * &projectors[j].matrix;
                if prod.norm() > tol.eq {
                    return Err(Error::InvalidInput(format!(
                        "projectors {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        Ok(OrthogonalDecomposition { projectors })
    }

    /// Projector onto the span of the listed computational basis indices.
    pub fn from_supports(dim: usize, supports: &[Vec<usize>], tol: &Tolerances) -> Result<Self> {
        let projectors = supports
            .iter()
            .map(|idx| support_projector(dim, idx))
            .collect::<Result<Vec<_>>>()?;
        OrthogonalDecomposition::new(projectors, tol)
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }
}

/// Diagonal 0/1 projector with ones on the given basis indices.
pub fn support_projector(dim: usize, indices: &[usize]) -> Result<Projector> {
    let mut seen = vec![false; dim];
    let mut m = ComplexMatrix::zeros(dim, dim);
    for &i in indices {
        if i >= dim {
            return Err(Error::InvalidInput(format!("support index {i} out of range (dim {dim})")));
        }
        if seen[i] {
            return Err(Error::InvalidInput(format!("support index {i} repeated")));
        }
        seen[i] = true;
        m[(i, i)] = Complex64::ONE;
    }
    Ok(Projector { matrix: m })
}

/// `M = Σ m_ab Π_Aa ⊗ Π_Bb` with real outcome labels on an a×b grid.
#[derive(Debug, Clone)]
pub struct ProductMeasurement {
    pub decomp_a: OrthogonalDecomposition,
    pub decomp_b: OrthogonalDecomposition,
    /// `labels[a][b]` is the outcome value m_ab; labels never affect ranks.
    pub labels: Vec<Vec<f64>>,
}

impl ProductMeasurement {
    pub fn new(
        decomp_a: OrthogonalDecomposition,
        decomp_b: OrthogonalDecomposition,
        labels: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if labels.len() != decomp_a.len() || labels.iter().any(|row| row.len() != decomp_b.len()) {
            return Err(Error::DimensionMismatch(format!(
                "label grid must be {}x{}",
                decomp_a.len(),
                decomp_b.len()
            )));
        }
        Ok(ProductMeasurement {
            decomp_a,
            decomp_b,
            labels,
        })
    }

    /// Default labels m_ab = a*len_b + b when none are given.
    pub fn with_default_labels(
        decomp_a: OrthogonalDecomposition,
        decomp_b: OrthogonalDecomposition,
    ) -> Result<Self> {
        let nb = decomp_b.len();
        let labels = (0..decomp_a.len())
            .map(|a| (0..nb).map(|b| (a * nb + b) as f64).collect())
            .collect();
        ProductMeasurement::new(decomp_a, decomp_b, labels)
    }

    pub fn space(&self) -> Result<BipartiteSpace> {
        BipartiteSpace::new(self.decomp_a.dim(), self.decomp_b.dim())
    }
}

/// Result of applying one product projector `Π_A ⊗ Π_B` to a state.
#[derive(Debug, Clone)]
pub struct Collapse {
    pub p: f64,
    /// Renormalized post-measurement state; absent when `p <= tol.prob`.
    pub state: Option<BipartiteState>,
}

fn check_dims(s: &BipartiteState, p_a: &Projector, p_b: &Projector) -> Result<()> {
    if p_a.dim() != s.space.d_a || p_b.dim() != s.space.d_b {
        return Err(Error::DimensionMismatch(format!(
            "projector dims ({}, {}) vs space ({}, {})",
            p_a.dim(),
            p_b.dim(),
            s.space.d_a,
            s.space.d_b
        )));
    }
    Ok(())
}

/// Apply `Π_A ⊗ Π_B` through the coefficient matrix: the post-measurement
/// coefficients are `π^A M (π^B)^T` and the probability is their squared
/// Frobenius norm.
pub fn collapse(
    s: &BipartiteState,
    p_a: &Projector,
    p_b: &Projector,
    tol: &Tolerances,
) -> Result<Collapse> {
    check_dims(s, p_a, p_b)?;
    let m = &p_a.matrix * s.coeff() * p_b.matrix.transpose();
    let p = m.norm_squared().clamp(0.0, 1.0);
    if p <= tol.prob {
        return Ok(Collapse { p, state: None });
    }
    let state = BipartiteState::from_coeff(s.space, &m)?;
    Ok(Collapse { p, state: Some(state) })
}

/// Sylvester window for the post-collapse Schmidt rank:
/// `lo = rank(s) - (d_A - Tr Π_A) - (d_B - Tr Π_B)` (possibly non-positive),
/// `hi = min(rank(s), Tr Π_A, Tr Π_B)`. Requires a surviving branch.
pub fn sylvester_bounds(
    s: &BipartiteState,
    p_a: &Projector,
    p_b: &Projector,
    tol: &Tolerances,
) -> Result<(i64, i64)> {
    check_dims(s, p_a, p_b)?;
    let c = collapse(s, p_a, p_b, tol)?;
    if c.state.is_none() {
        return Err(Error::ZeroProbabilityOutcome);
    }
    let rank = schmidt_rank(s, tol).rank as i64;
    let d_a = s.space.d_a as i64;
    let d_b = s.space.d_b as i64;
    let tr_a = p_a.trace().round() as i64;
    let tr_b = p_b.trace().round() as i64;
    let lo = rank - (d_a - tr_a) - (d_b - tr_b);
    let hi = rank.min(tr_a).min(tr_b);
    Ok((lo, hi))
}

/// Rank reductions under the three collapses `Π_A ⊗ 1`, `1 ⊗ Π_B`,
/// `Π_A ⊗ Π_B`; entries are absent on zero-probability branches.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct RankReductions {
    pub r_a: Option<i64>,
    pub r_b: Option<i64>,
    pub r_ab: Option<i64>,
}

pub fn rank_reductions(
    s: &BipartiteState,
    p_a: &Projector,
    p_b: &Projector,
    tol: &Tolerances,
) -> Result<RankReductions> {
    check_dims(s, p_a, p_b)?;
    let rank_before = schmidt_rank(s, tol).rank as i64;
    let reduction = |c: Collapse| -> Option<i64> {
        c.state
            .map(|st| rank_before - schmidt_rank(&st, tol).rank as i64)
    };
    let id_a = Projector::identity(s.space.d_a);
    let id_b = Projector::identity(s.space.d_b);
    Ok(RankReductions {
        r_a: reduction(collapse(s, p_a, &id_b, tol)?),
        r_b: reduction(collapse(s, &id_a, p_b, tol)?),
        r_ab: reduction(collapse(s, p_a, p_b, tol)?),
    })
}

/// One branch of a full product measurement.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OutcomeRecord {
    pub a: usize,
    pub b: usize,
    pub label: f64,
    pub p_ab: f64,
    pub rank_before: usize,
    pub rank_after: Option<usize>,
    pub reduction: Option<i64>,
    #[serde(skip)]
    pub collapsed: Option<BipartiteState>,
}

/// The full measurement: every outcome record, the marginals, the average
/// rank reduction, and its state-dependent upper bound.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RankReductionReport {
    pub outcomes: Vec<OutcomeRecord>,
    pub marginals_a: Vec<f64>,
    pub marginals_b: Vec<f64>,
    pub r_ave: f64,
    pub upper_bound: f64,
    pub total_probability: f64,
}

/// Evaluate every branch of a product measurement. Branch order is
/// lexicographic in (a, b); branches are independent and evaluated through
/// the parallel sweep primitive.
pub fn measure_all(
    s: &BipartiteState,
    m: &ProductMeasurement,
    tol: &Tolerances,
) -> Result<RankReductionReport> {
    let space = m.space()?;
    if space != s.space {
        return Err(Error::DimensionMismatch(format!(
            "measurement space ({}, {}) vs state space ({}, {})",
            space.d_a, space.d_b, s.space.d_a, s.space.d_b
        )));
    }
    let na = m.decomp_a.len();
    let nb = m.decomp_b.len();
    let rank_before = schmidt_rank(s, tol).rank;

    let branches = indexed_map(na * nb, |idx| {
        let (a, b) = (idx / nb, idx % nb);
        collapse(s, &m.decomp_a.projectors[a], &m.decomp_b.projectors[b], tol)
    });

    let mut outcomes = Vec::with_capacity(na * nb);
    let mut r_ave = 0.0;
    let mut total_probability = 0.0;
    let mut bound = (space.d_a + space.d_b) as f64;
    for (idx, branch) in branches.into_iter().enumerate() {
        let c = branch?;
        let (a, b) = (idx / nb, idx % nb);
        let rank_after = c.state.as_ref().map(|st| schmidt_rank(st, tol).rank);
        let reduction = rank_after.map(|r| rank_before as i64 - r as i64);
        if let Some(red) = reduction {
            r_ave += c.p * red as f64;
        }
        total_probability += c.p;
        bound -= c.p
            * (m.decomp_a.projectors[a].trace() + m.decomp_b.projectors[b].trace());
        outcomes.push(OutcomeRecord {
            a,
            b,
            label: m.labels[a][b],
            p_ab: c.p,
            rank_before,
            rank_after,
            reduction,
            collapsed: c.state,
        });
    }

    let marginals_a = (0..na)
        .map(|a| (0..nb).map(|b| outcomes[a * nb + b].p_ab).sum())
        .collect();
    let marginals_b = (0..nb)
        .map(|b| (0..na).map(|a| outcomes[a * nb + b].p_ab).sum())
        .collect();

    Ok(RankReductionReport {
        outcomes,
        marginals_a,
        marginals_b,
        r_ave,
        upper_bound: bound,
        total_probability,
    })
}

/// JSON document describing a product measurement: dimensions, one list of
/// projectors per side (each either a set of basis indices or an explicit
/// matrix of `[re, im]` entries), and optional outcome labels.
#[derive(Debug, Deserialize)]
pub struct MeasurementSpec {
    pub dims: [usize; 2],
    pub projectors_a: Vec<ProjectorSpec>,
    pub projectors_b: Vec<ProjectorSpec>,
    #[serde(default)]
    pub labels: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ProjectorSpec {
    /// Basis indices spanning the projector's range.
    Support(Vec<usize>),
    /// Explicit dense matrix; each entry is a `[re, im]` pair.
    Matrix(Vec<Vec<[f64; 2]>>),
}

impl ProjectorSpec {
    fn build(&self, dim: usize) -> Result<Projector> {
        match self {
            ProjectorSpec::Support(indices) => support_projector(dim, indices),
            ProjectorSpec::Matrix(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "projector matrix must be {dim}x{dim}"
                    )));
                }
                let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
                    Complex64::new(rows[i][j][0], rows[i][j][1])
                });
                Ok(Projector { matrix: m })
            }
        }
    }
}

impl MeasurementSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, tol: &Tolerances) -> Result<ProductMeasurement> {
        let [d_a, d_b] = self.dims;
        let dec = |specs: &[ProjectorSpec], dim: usize| -> Result<OrthogonalDecomposition> {
            let ps = specs.iter().map(|s| s.build(dim)).collect::<Result<Vec<_>>>()?;
            OrthogonalDecomposition::new(ps, tol)
        };
        let decomp_a = dec(&self.projectors_a, d_a)?;
        let decomp_b = dec(&self.projectors_b, d_b)?;
        match &self.labels {
            Some(labels) => ProductMeasurement::new(decomp_a, decomp_b, labels.clone()),
            None => ProductMeasurement::with_default_labels(decomp_a, decomp_b),
        }
    }
}

/// The worked 3x3 example: Π_A1 = |0><0| + |1><1|, Π_A2 = |2><2|,
/// Π_B1 = |0><0|, Π_B2 = |1><1| + |2><2|, state
/// `(1/sqrt 15)(|0,0> + 2|0,1> + |1,1> + 3|2,2>)`.
pub fn worked_example(tol: &Tolerances) -> Result<(BipartiteState, ProductMeasurement)> {
    let space = BipartiteSpace::new(3, 3)?;
    let mut coeff = ComplexMatrix::zeros(3, 3);
    coeff[(0, 0)] = Complex64::ONE;
    coeff[(0, 1)] = Complex64::new(2.0, 0.0);
    coeff[(1, 1)] = Complex64::ONE;
    coeff[(2, 2)] = Complex64::new(3.0, 0.0);
    let s = BipartiteState::from_coeff(space, &coeff)?;
    let decomp_a = OrthogonalDecomposition::from_supports(3, &[vec![0, 1], vec![2]], tol)?;
    let decomp_b = OrthogonalDecomposition::from_supports(3, &[vec![0], vec![1, 2]], tol)?;
    Ok((s, ProductMeasurement::with_default_labels(decomp_a, decomp_b)?))
}
