//! Scalar diagnostics: purity loss and its rate, entanglement entropy,
//! coupling-operator variances and decoherence-free-subspace certificates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::generator::{
    build_generator, validate_damping, AxisSet, Bath, CouplingNormalization, DampingMatrix,
    DecoherenceModel, Ensembles, Generator,
};
use crate::spin_algebra::{Axis, CoupledLevel, HalfInt, SpinOperator, SpinQuantum};
use crate::states::{amplitude_matrix, density_from_pure, DensityMatrix, EntangledStateSpec};
use crate::{CMatrix, Error, Result, StateVector};

const NORM_TOL: f64 = 1e-10;
/// Singular values above this count toward the Schmidt number.
pub const SCHMIDT_TOL: f64 = 1e-10;
/// Residual and purity-rate bound for a DFS verdict.
pub const DFS_TOL: f64 = 1e-12;

/// `1 - tr(rho^2)`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// `dS_lin/dt = -2 tr(rho L rho)` straight from the generator.
pub fn entropy_rate_numeric(g: &Generator, rho: &DensityMatrix) -> Result<f64> {
    let d = g.apply(rho.matrix())?;
    Ok(-2.0 * trace_product(rho.matrix(), &d))
}

/// Purity-loss rate from coupling-operator covariances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticRate {
    pub total: f64,
    /// Keyed by axis pair (`"xz"`), prefixed with the ensemble (`"1.zz"`)
    /// for independent baths. Off-diagonal pairs include both orderings.
    pub contributions: BTreeMap<String, f64>,
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let n2 = psi.norm_squared();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    Ok(())
}

/// `2 sum_ab gamma_ab (<{O_a, O_b}>/2 - <O_a><O_b>)` for a pure state.
///
/// `O_a` are the embedded `J_a` of each ensemble (independent baths) or the
/// common-bath operators `L_a`. Evaluated from the vectors `O_a |psi>`
/// without touching the generator.
pub fn entropy_rate_analytic(
    psi: &StateVector,
    model: &DecoherenceModel,
    ensembles: &Ensembles,
) -> Result<AnalyticRate> {
    check_normalized(psi)?;
    if psi.len() != ensembles.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensembles.dim(),
            found: psi.len(),
        });
    }
    let channels = model.coupling_channels(ensembles)?;
    let tagged = matches!(model.bath, Bath::Independent { .. });
    let mut contributions = BTreeMap::new();
    let mut total = 0.0;
    for (idx, (gamma, ops)) in channels.iter().enumerate() {
        let images: Vec<StateVector> = ops.iter().map(|(_, op)| op.matrix() * psi).collect();
        let means: Vec<f64> = images.iter().map(|v| psi.dotc(v).re).collect();
        for a in Axis::ALL {
            for b in Axis::ALL.into_iter().filter(|b| *b >= a) {
                let g = gamma.get(a, b);
                if g == 0.0 {
                    continue;
                }
                let (ia, ib) = (a.index(), b.index());
                let cov = images[ia].dotc(&images[ib]).re - means[ia] * means[ib];
                let weight = if a == b { 2.0 } else { 4.0 };
                let value = weight * g * cov;
                total += value;
                let key = if tagged {
                    format!("{}.{a}{b}", idx + 1)
                } else {
                    format!("{a}{b}")
                };
                *contributions.entry(key).or_insert(0.0) += value;
            }
        }
    }
    Ok(AnalyticRate { total, contributions })
}

/// Large-Ñ estimates for uniform `|m, -m>` superpositions under `z` dephasing:
/// `2 (gamma_zz + gamma'_zz) Ñ^2 / 3` (independent baths) and
/// `2 gamma_zz (lambda - 1)^2 Ñ^2 / 3` (common bath).
///
/// `None` for a single ensemble. With total-spin normalization the common
/// bath estimate carries the extra factor 4.
pub fn entropy_rate_estimate(ntilde: SpinQuantum, model: &DecoherenceModel) -> Option<f64> {
    let n2 = ntilde.value().powi(2);
    match &model.bath {
        Bath::Single { .. } => None,
        Bath::Independent { gamma1, gamma2 } => {
            Some(2.0 * (gamma1.get(Axis::Z, Axis::Z) + gamma2.get(Axis::Z, Axis::Z)) * n2 / 3.0)
        }
        Bath::Common {
            gamma,
            lambda,
            normalization,
        } => {
            let scale = match normalization {
                CouplingNormalization::Composite => 1.0,
                CouplingNormalization::TotalSpin => 4.0,
            };
            Some(scale * 2.0 * gamma.get(Axis::Z, Axis::Z) * (lambda - 1.0).powi(2) * n2 / 3.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub numeric_rate: f64,
    pub analytic_rate: f64,
    pub estimate_rate: Option<f64>,
    pub per_axis_contributions: BTreeMap<String, f64>,
}

impl RateReport {
    /// `|numeric - analytic|` relative to `max(|analytic|, 1)`.
    pub fn disagreement(&self) -> f64 {
        (self.numeric_rate - self.analytic_rate).abs() / self.analytic_rate.abs().max(1.0)
    }
}

/// Numeric and analytic purity-loss rates of a pure state side by side.
pub fn rate_report(psi: &StateVector, model: &DecoherenceModel, ensembles: &Ensembles) -> Result<RateReport> {
    let analytic = entropy_rate_analytic(psi, model, ensembles)?;
    let g = build_generator(model, ensembles)?;
    let rho = density_from_pure(psi, &ensembles.dims())?;
    let estimate = match *ensembles {
        Ensembles::Pair { j1, j2 } => entropy_rate_estimate(j1.min(j2), model),
        Ensembles::Single { .. } => None,
    };
    Ok(RateReport {
        numeric_rate: entropy_rate_numeric(&g, &rho)?,
        analytic_rate: analytic.total,
        estimate_rate: estimate,
        per_axis_contributions: analytic.contributions,
    })
}

/// `-tr(rho ln rho)`, natural log, `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Von Neumann entropy of the first ensemble's reduced state.
pub fn entanglement_entropy(psi: &StateVector, dims: &[usize]) -> Result<f64> {
    let rho = density_from_pure(psi, dims)?;
    Ok(von_neumann_entropy(&rho.partial_trace(0)?))
}

/// `<A^2> - <A>^2` of a Hermitian operator.
pub fn variance_exact(op: &SpinOperator, psi: &StateVector) -> Result<f64> {
    let herm = op.hermiticity_residual();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    let v = op.apply(psi)?;
    let n2 = psi.norm_squared();
    let mean = psi.dotc(&v).re / n2;
    Ok(v.norm_squared() / n2 - mean * mean)
}

fn require_equal_spins(spec: &EntangledStateSpec) -> Result<SpinQuantum> {
    if spec.j1() != spec.j2() {
        return Err(Error::InvalidArgument(format!(
            "equal spins required, got {} and {}",
            spec.j1(),
            spec.j2()
        )));
    }
    Ok(spec.j1())
}

/// `|c_m|^2 + Re(c*_{m-1} c_m)` for `m = -Ñ+1, ..., Ñ`.
pub fn mincond_terms(spec: &EntangledStateSpec) -> Vec<(HalfInt, f64)> {
    let terms: Vec<(HalfInt, _)> = spec.terms().collect();
    terms
        .windows(2)
        .map(|w| {
            let (prev, (m, c)) = (w[0].1, w[1]);
            (m, c.norm_sqr() + (prev.conj() * c).re)
        })
        .collect()
}

/// Largest `| |c_m|^2 + Re(c*_{m-1} c_m) |` over `m = -Ñ+1, ..., Ñ`.
pub fn mincond_residual(spec: &EntangledStateSpec) -> f64 {
    mincond_terms(spec)
        .into_iter()
        .fold(0.0, |acc, (_, t)| acc.max(t.abs()))
}

/// Paired-term approximation of the total-spin `x` variance of
/// `sum_m c_m |m, -m>` for equal spins:
/// `sum_m [|c_m|^2 + Re(c*_{m-1} c_m)] [j(j+1) - m^2]`, `m = -Ñ+1, ..., Ñ`.
///
/// Compare with [`variance_exact`] of `J_1x + J_2x`; the composite `L_x` at
/// `lambda = 1` is half of that operator, so its variance is a quarter.
pub fn variance_lx_approx(spec: &EntangledStateSpec) -> Result<f64> {
    let j = require_equal_spins(spec)?.value();
    let jj = j * (j + 1.0);
    Ok(mincond_terms(spec)
        .into_iter()
        .map(|(m, t)| t * (jj - m.value().powi(2)))
        .sum())
}

/// Singular values of the bipartite amplitude matrix, descending.
pub fn schmidt_coefficients(psi: &StateVector, dims: &[usize]) -> Result<Vec<f64>> {
    let mut sv: Vec<f64> = amplitude_matrix(psi, dims)?.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

pub fn schmidt_number(psi: &StateVector, dims: &[usize]) -> Result<usize> {
    Ok(schmidt_coefficients(psi, dims)?
        .into_iter()
        .filter(|s| *s > SCHMIDT_TOL)
        .count())
}

/// Purity-loss rate of `|L, M=0>` under a balanced common bath, with the
/// total spin `J_1 + J_2` as coupling operator: `(gamma_xx + gamma_yy) L(L+1)`.
///
/// This reduces to `gamma_xx L(L+1)` for the two-axis model and to zero for
/// `z`-only coupling.
pub fn coupled_state_rate(level: CoupledLevel, axes: AxisSet, gamma: &DampingMatrix) -> Result<f64> {
    if level.m != HalfInt::ZERO {
        return Err(Error::InvalidQuantumNumbers(format!(
            "closed form holds for M = 0 only, got M = {}",
            level.m
        )));
    }
    let gamma = validate_damping(gamma, axes)?;
    let l = level.l.value();
    Ok((gamma.get(Axis::X, Axis::X) + gamma.get(Axis::Y, Axis::Y)) * l * (l + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DfsCertificate {
    pub residual: f64,
    pub purity_rate: f64,
    pub certified: bool,
}

/// Stationarity of `|psi><psi|`: `||L rho|| <= DFS_TOL` and `|dS_lin/dt| <= DFS_TOL`.
pub fn certify_state(g: &Generator, psi: &StateVector) -> Result<DfsCertificate> {
    let rho = density_from_pure(psi, g.dims())?;
    let d = g.apply(rho.matrix())?;
    let residual = d.norm();
    let purity_rate = -2.0 * trace_product(rho.matrix(), &d);
    Ok(DfsCertificate {
        residual,
        purity_rate,
        certified: residual <= DFS_TOL && purity_rate.abs() <= DFS_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubspaceCertificate {
    pub dimension: usize,
    /// Largest `||L(|psi_i><psi_j|)||` over all ordered pairs.
    pub max_residual: f64,
    pub certified: bool,
}

/// Every coherence `|psi_i><psi_j|` of the candidate basis must be annihilated.
pub fn certify_subspace(g: &Generator, basis: &[StateVector]) -> Result<SubspaceCertificate> {
    let mut worst = 0.0f64;
    for a in basis {
        check_normalized(a)?;
        for b in basis {
            let d = g.apply(&(a * b.adjoint()))?;
            worst = worst.max(d.norm());
        }
    }
    Ok(SubspaceCertificate {
        dimension: basis.len(),
        max_residual: worst,
        certified: worst <= DFS_TOL,
    })
}
