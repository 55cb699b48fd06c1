//! Initial states: Fock states, `sum_m c_m |m, -m>` entangled states, the
//! two-ensemble singlet, and density-matrix conversions.

use serde::{Deserialize, Serialize};

use crate::spin_algebra::{basis_index, hermiticity_residual, product_index, HalfInt, SpinQuantum};
use crate::{CMatrix, Error, Result, StateVector, C64};

const NORM_TOL: f64 = 1e-12;

/// Coefficients `c_m` of `sum_m c_m |m>_1 |-m>_2`, indexed by ascending
/// `m = -Ñ, ..., Ñ` with `Ñ = min(j1, j2)`. `m` always labels ensemble 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntangledStateSpec {
    j1: SpinQuantum,
    j2: SpinQuantum,
    coeffs: Vec<C64>,
}

impl EntangledStateSpec {
    pub fn new(j1: SpinQuantum, j2: SpinQuantum, coeffs: Vec<C64>) -> Result<Self> {
        let spec = Self::unchecked(j1, j2, coeffs)?;
        let n2 = spec.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(spec)
    }

    /// Same as [`EntangledStateSpec::new`] but rescales the coefficients.
    pub fn normalized(j1: SpinQuantum, j2: SpinQuantum, coeffs: Vec<C64>) -> Result<Self> {
        let mut spec = Self::unchecked(j1, j2, coeffs)?;
        let n2 = spec.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let scale = n2.sqrt().recip();
        spec.coeffs.iter_mut().for_each(|c| *c *= scale);
        Ok(spec)
    }

    fn unchecked(j1: SpinQuantum, j2: SpinQuantum, coeffs: Vec<C64>) -> Result<Self> {
        if !(j1.twice() + j2.twice()).is_multiple_of(2) {
            return Err(Error::InvalidQuantumNumbers(format!(
                "|m, -m> needs j1 and j2 both integer or both half-odd, got {j1} and {j2}"
            )));
        }
        let expected = j1.min(j2).dim();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { j1, j2, coeffs })
    }

    fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn j1(&self) -> SpinQuantum {
        self.j1
    }

    pub fn j2(&self) -> SpinQuantum {
        self.j2
    }

    pub fn ntilde(&self) -> SpinQuantum {
        self.j1.min(self.j2)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `(m, c_m)` pairs with ascending `m`.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, C64)> + '_ {
        self.ntilde().m_values().rev().zip(self.coeffs.iter().copied())
    }
}

/// Coefficient families for [`EntangledStateSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    /// `c_m = 1/sqrt(2Ñ+1)`.
    Uniform,
    /// `c_m = (-1)^(Ñ-m)/sqrt(2Ñ+1)`; neighbouring products are negative.
    AlternatingUniform,
    /// `c_m = (-1)^(j-m)/sqrt(2j+1)`, the total-spin-zero state of two equal spins.
    Singlet,
    /// Real Gaussian amplitudes with `|c_m|^2 ~ exp(-m^2 / (2 width^2))`.
    Gaussian { width: f64 },
    /// Explicit coefficients, ascending `m`; rescaled to unit norm.
    Custom { coeffs: Vec<C64> },
}

pub fn coefficient_profile(profile: &Profile, j1: SpinQuantum, j2: SpinQuantum) -> Result<Vec<C64>> {
    let ntilde = j1.min(j2);
    let n = ntilde.dim();
    let uniform = (n as f64).sqrt().recip();
    let sign = |m: HalfInt| {
        if ((ntilde.as_half() - m).twice() / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let ascending = || ntilde.m_values().rev();
    let coeffs: Vec<C64> = match profile {
        Profile::Uniform => vec![C64::new(uniform, 0.0); n],
        Profile::AlternatingUniform => {
            if ntilde.twice() == 0 {
                return Err(Error::InvalidArgument(
                    "alternating profile needs Ñ >= 1/2".into(),
                ));
            }
            ascending().map(|m| C64::new(sign(m) * uniform, 0.0)).collect()
        }
        Profile::Singlet => {
            if j1 != j2 {
                return Err(Error::InvalidArgument(format!(
                    "singlet profile needs j1 = j2, got {j1} and {j2}"
                )));
            }
            ascending().map(|m| C64::new(sign(m) * uniform, 0.0)).collect()
        }
        Profile::Gaussian { width } => {
            if !(width.is_finite() && *width > 0.0) {
                return Err(Error::InvalidArgument(format!("gaussian width {width}")));
            }
            let raw: Vec<f64> = ascending()
                .map(|m| (-m.value().powi(2) / (4.0 * width * width)).exp())
                .collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            raw.into_iter().map(|x| C64::new(x / norm, 0.0)).collect()
        }
        Profile::Custom { coeffs } => {
            return EntangledStateSpec::normalized(j1, j2, coeffs.clone()).map(|s| s.coeffs);
        }
    };
    Ok(coeffs)
}

/// Basis vector `|m>` of spin `j`.
pub fn fock_state(j: SpinQuantum, m: HalfInt) -> Result<StateVector> {
    let idx = basis_index(j, m)?;
    let mut psi = StateVector::zeros(j.dim());
    psi[idx] = C64::new(1.0, 0.0);
    Ok(psi)
}

/// `|m1>|m2>` in the product basis.
pub fn fock_product_state(j1: SpinQuantum, m1: HalfInt, j2: SpinQuantum, m2: HalfInt) -> Result<StateVector> {
    let mut psi = StateVector::zeros(j1.dim() * j2.dim());
    psi[product_index(j1, m1, j2, m2)?] = C64::new(1.0, 0.0);
    Ok(psi)
}

pub fn product_state(first: &StateVector, second: &StateVector) -> StateVector {
    first.kronecker(second)
}

/// `sum_m c_m |m>_1 |-m>_2`.
pub fn entangled_state(spec: &EntangledStateSpec) -> Result<StateVector> {
    let (j1, j2) = (spec.j1, spec.j2);
    let mut psi = StateVector::zeros(j1.dim() * j2.dim());
    for (m, c) in spec.terms() {
        psi[product_index(j1, m, j2, -m)?] = c;
    }
    Ok(psi)
}

/// Hermitian, unit-trace, positive semidefinite matrix with a subsystem split.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const EIGEN_TOL: f64 = 1e-9;

    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::from_parts_unchecked(matrix, dims)?;
        let herm = hermiticity_residual(&rho.matrix);
        if herm > Self::HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian ({herm:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let low = rho.min_eigenvalue();
        if low < -Self::EIGEN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("eigenvalue {low:e}")));
        }
        Ok(rho)
    }

    /// Only checks shapes; used for integrator samples that are validated separately.
    pub(crate) fn from_parts_unchecked(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if !matrix.is_square() || dims.is_empty() || side != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: side,
            });
        }
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self {
            matrix: CMatrix::identity(n, n) / C64::new(n as f64, 0.0),
            dims: dims.to_vec(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eig: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        if psi.len() != self.side() {
            return Err(Error::DimensionMismatch {
                expected: self.side(),
                found: psi.len(),
            });
        }
        Ok(psi.dotc(&(&self.matrix * psi)).re)
    }

    /// Reduced state of factor `keep` of a two-factor density matrix.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        let [d1, d2] = match self.dims.as_slice() {
            [a, b] => [*a, *b],
            other => {
                return Err(Error::InvalidArgument(format!(
                    "partial trace needs two factors, got dims {other:?}"
                )))
            }
        };
        let m = &self.matrix;
        let reduced = match keep {
            0 => CMatrix::from_fn(d1, d1, |a, b| (0..d2).map(|k| m[(a * d2 + k, b * d2 + k)]).sum()),
            1 => CMatrix::from_fn(d2, d2, |a, b| (0..d1).map(|k| m[(k * d2 + a, k * d2 + b)]).sum()),
            _ => return Err(Error::InvalidArgument(format!("subsystem {keep} of 2"))),
        };
        let n = reduced.nrows();
        Ok(DensityMatrix {
            matrix: reduced,
            dims: vec![n],
        })
    }
}

/// `rho = |psi><psi|` with the given subsystem split.
pub fn density_from_pure(psi: &StateVector, dims: &[usize]) -> Result<DensityMatrix> {
    let n2 = psi.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    if (n2 - 1.0).abs() > DensityMatrix::TRACE_TOL {
        return Err(Error::NotNormalized(n2));
    }
    DensityMatrix::from_parts_unchecked(psi * psi.adjoint(), dims.to_vec())
}

pub fn partial_trace(rho: &DensityMatrix, keep: usize) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

/// Amplitudes of a bipartite vector arranged as a `d1 x d2` matrix.
pub fn amplitude_matrix(psi: &StateVector, dims: &[usize]) -> Result<CMatrix> {
    let [d1, d2] = match dims {
        [a, b] => [*a, *b],
        other => {
            return Err(Error::InvalidArgument(format!(
                "bipartite state needs two factors, got {other:?}"
            )))
        }
    };
    if d1 * d2 != psi.len() {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: psi.len(),
        });
    }
    Ok(CMatrix::from_fn(d1, d2, |a, b| psi[a * d2 + b]))
}
