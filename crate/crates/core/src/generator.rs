//! Lindblad generators for one ensemble, two ensembles in independent baths,
//! and two ensembles sharing a common bath.
//!
//! Every model is a set of coupling channels `(gamma, {O_x, O_y, O_z})` with
//! dissipator `sum_ab gamma_ab (O_b rho O_a - {O_a O_b, rho}/2)`. The damping
//! matrix is diagonalized once, which turns the double sum into the usual
//! diagonal form `sum_k (A_k rho A_k^H - {A_k^H A_k, rho}/2)`.

use std::fmt;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::sparse::Csr;
use crate::spin_algebra::{
    angular_momentum_ops, check_lambda, composite_coupling_ops, embedded_ops, Axis, AxisOps,
    SpinOperator, SpinQuantum,
};
use crate::states::DensityMatrix;
use crate::{CMatrix, Error, Result, C64};

const PSD_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;

/// Subset of `{x, y, z}` coupled to the bath.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Axis>", into = "Vec<Axis>")]
pub struct AxisSet(u8);

impl AxisSet {
    pub const EMPTY: AxisSet = AxisSet(0);
    pub const X: AxisSet = AxisSet(1);
    pub const Y: AxisSet = AxisSet(2);
    pub const Z: AxisSet = AxisSet(4);
    /// The two-axis model: `z` dominant plus `x`.
    pub const XZ: AxisSet = AxisSet(5);
    pub const XYZ: AxisSet = AxisSet(7);

    pub fn from_axes(axes: &[Axis]) -> Self {
        AxisSet(axes.iter().fold(0, |acc, a| acc | (1 << a.index())))
    }

    pub fn contains(self, axis: Axis) -> bool {
        self.0 & (1 << axis.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Axis> {
        Axis::ALL.into_iter().filter(move |a| self.contains(*a))
    }
}

impl From<Vec<Axis>> for AxisSet {
    fn from(v: Vec<Axis>) -> Self {
        AxisSet::from_axes(&v)
    }
}

impl From<AxisSet> for Vec<Axis> {
    fn from(s: AxisSet) -> Self {
        s.iter().collect()
    }
}

impl fmt::Display for AxisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.iter() {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Real symmetric bath correlation matrix `gamma_ab`, rows and columns
/// ordered `x, y, z`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DampingMatrix([[f64; 3]; 3]);

impl DampingMatrix {
    pub const fn new(entries: [[f64; 3]; 3]) -> Self {
        Self(entries)
    }

    pub const fn zeros() -> Self {
        Self([[0.0; 3]; 3])
    }

    pub const fn diagonal(xx: f64, yy: f64, zz: f64) -> Self {
        Self([[xx, 0.0, 0.0], [0.0, yy, 0.0], [0.0, 0.0, zz]])
    }

    pub fn get(&self, a: Axis, b: Axis) -> f64 {
        self.0[a.index()][b.index()]
    }

    /// Sets `gamma_ab` and `gamma_ba`.
    pub fn with_entry(mut self, a: Axis, b: Axis, value: f64) -> Self {
        self.0[a.index()][b.index()] = value;
        self.0[b.index()][a.index()] = value;
        self
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * factor)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|x| *x == 0.0)
    }

    fn is_diagonal(&self) -> bool {
        (0..3).all(|i| (0..3).all(|k| i == k || self.0[i][k] == 0.0))
    }

    fn as_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| self.0[r][c])
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for k in 0..3 {
                worst = worst.max((self.0[i][k] - self.0[k][i]).abs());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.as_matrix()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks that `gamma` is symmetric, positive semidefinite and vanishes
/// outside `axes`.
pub fn validate_damping(gamma: &DampingMatrix, axes: AxisSet) -> Result<DampingMatrix> {
    if gamma.0.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite damping entry".into()));
    }
    let asym = gamma.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NonSymmetric(asym));
    }
    for a in Axis::ALL {
        for b in Axis::ALL {
            if (!axes.contains(a) || !axes.contains(b)) && gamma.get(a, b) != 0.0 {
                return Err(Error::OffAxisCoupling(format!("{a}{b}")));
            }
        }
    }
    let low = gamma.min_eigenvalue();
    if low < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite(low));
    }
    Ok(*gamma)
}

/// Diagonal Lindblad operators with the rates absorbed.
///
/// With `gamma = O D O^T`, `A_k = sqrt(D_k) sum_a O_ak op_a`. Directions with
/// vanishing rate are dropped.
pub fn canonical_jumps(gamma: &DampingMatrix, ops: &AxisOps) -> Result<Vec<SpinOperator>> {
    validate_damping(gamma, AxisSet::XYZ)?;
    let combine = |weights: [f64; 3]| -> Result<SpinOperator> {
        let mut acc = SpinOperator::zeros(ops.dims());
        for (axis, op) in ops.iter() {
            let w = weights[axis.index()];
            if w != 0.0 {
                acc = acc.lincomb(1.0, op, w)?;
            }
        }
        Ok(acc)
    };

    let mut jumps = Vec::new();
    if gamma.is_diagonal() {
        for (axis, op) in ops.iter() {
            let rate = gamma.get(axis, axis);
            if rate > 0.0 {
                jumps.push(op.scaled(rate.sqrt()));
            }
        }
        return Ok(jumps);
    }

    let eig = gamma.as_matrix().symmetric_eigen();
    let largest = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    for k in 0..3 {
        let rate = eig.eigenvalues[k];
        if rate <= 1e-14 * largest {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let s = rate.sqrt();
        jumps.push(combine([s * v[0], s * v[1], s * v[2]])?);
    }
    Ok(jumps)
}

/// How the common-bath coupling operators are scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingNormalization {
    /// `L_a = [lambda J_1a + (2 - lambda) J_2a] / 2`.
    #[default]
    Composite,
    /// `2 L_a`, i.e. the total spin `J_1 + J_2` at `lambda = 1`.
    TotalSpin,
}

/// Which bath(s) the ensembles see.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bath", rename_all = "snake_case")]
pub enum Bath {
    /// One ensemble coupled through `J_a`.
    Single { gamma: DampingMatrix },
    /// Two ensembles with uncorrelated baths; no cross-ensemble terms.
    Independent {
        gamma1: DampingMatrix,
        gamma2: DampingMatrix,
    },
    /// Two ensembles coupled to one bath through `L_a`.
    Common {
        gamma: DampingMatrix,
        lambda: f64,
        #[serde(default)]
        normalization: CouplingNormalization,
    },
}

/// Number of axes in the system-bath coupling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisModel {
    OneAxis,
    TwoAxis,
    ThreeAxis,
}

/// The ensembles a model acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ensembles {
    Single { j: SpinQuantum },
    Pair { j1: SpinQuantum, j2: SpinQuantum },
}

impl Ensembles {
    pub fn single(j: SpinQuantum) -> Self {
        Ensembles::Single { j }
    }

    pub fn pair(j1: SpinQuantum, j2: SpinQuantum) -> Self {
        Ensembles::Pair { j1, j2 }
    }

    pub fn dims(&self) -> Vec<usize> {
        match *self {
            Ensembles::Single { j } => vec![j.dim()],
            Ensembles::Pair { j1, j2 } => vec![j1.dim(), j2.dim()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoherenceModel {
    pub bath: Bath,
    pub axes: AxisSet,
    /// System Hamiltonian `H_s`; `None` means zero.
    pub hamiltonian: Option<SpinOperator>,
}

impl DecoherenceModel {
    pub fn single(gamma: DampingMatrix, axes: AxisSet) -> Self {
        Self {
            bath: Bath::Single { gamma },
            axes,
            hamiltonian: None,
        }
    }

    pub fn independent(gamma1: DampingMatrix, gamma2: DampingMatrix, axes: AxisSet) -> Self {
        Self {
            bath: Bath::Independent { gamma1, gamma2 },
            axes,
            hamiltonian: None,
        }
    }

    pub fn common(gamma: DampingMatrix, lambda: f64, axes: AxisSet) -> Self {
        Self {
            bath: Bath::Common {
                gamma,
                lambda,
                normalization: CouplingNormalization::Composite,
            },
            axes,
            hamiltonian: None,
        }
    }

    pub fn with_normalization(mut self, norm: CouplingNormalization) -> Self {
        if let Bath::Common { normalization, .. } = &mut self.bath {
            *normalization = norm;
        }
        self
    }

    pub fn with_hamiltonian(mut self, h: SpinOperator) -> Self {
        self.hamiltonian = Some(h);
        self
    }

    pub fn axis_model(&self) -> Option<AxisModel> {
        match self.axes.len() {
            1 => Some(AxisModel::OneAxis),
            2 => Some(AxisModel::TwoAxis),
            3 => Some(AxisModel::ThreeAxis),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidArgument("model couples no axis".into()));
        }
        match &self.bath {
            Bath::Single { gamma } => {
                validate_damping(gamma, self.axes)?;
            }
            Bath::Independent { gamma1, gamma2 } => {
                validate_damping(gamma1, self.axes)?;
                validate_damping(gamma2, self.axes)?;
            }
            Bath::Common { gamma, lambda, .. } => {
                validate_damping(gamma, self.axes)?;
                check_lambda(*lambda)?;
            }
        }
        if let Some(h) = &self.hamiltonian {
            if !h.is_hermitian(1e-12) {
                return Err(Error::NotHermitian(h.hermiticity_residual()));
            }
        }
        Ok(())
    }

    /// `(gamma, {O_a})` for every bath channel of the model.
    pub fn coupling_channels(&self, ensembles: &Ensembles) -> Result<Vec<(DampingMatrix, AxisOps)>> {
        self.validate()?;
        let channels = match (&self.bath, *ensembles) {
            (Bath::Single { gamma }, Ensembles::Single { j }) => {
                vec![(*gamma, angular_momentum_ops(j).axis_ops())]
            }
            (Bath::Independent { gamma1, gamma2 }, Ensembles::Pair { j1, j2 }) => vec![
                (*gamma1, embedded_ops(j1, j2, 0)?),
                (*gamma2, embedded_ops(j1, j2, 1)?),
            ],
            (
                Bath::Common {
                    gamma,
                    lambda,
                    normalization,
                },
                Ensembles::Pair { j1, j2 },
            ) => {
                let ops = composite_coupling_ops(j1, j2, *lambda)?;
                let ops = match normalization {
                    CouplingNormalization::Composite => ops,
                    CouplingNormalization::TotalSpin => ops.lincomb(2.0, &ops, 0.0)?,
                };
                vec![(*gamma, ops)]
            }
            (bath, ens) => {
                return Err(Error::ModelMismatch(format!(
                    "{} bath on {ens:?}",
                    match bath {
                        Bath::Single { .. } => "single-ensemble",
                        Bath::Independent { .. } => "independent",
                        Bath::Common { .. } => "common",
                    }
                )))
            }
        };
        Ok(channels)
    }
}

/// Precomputed Lindblad generator `rho -> -i[H, rho] + sum_k D[A_k] rho`.
#[derive(Clone, Debug)]
pub struct Generator {
    jump_ops: Vec<SpinOperator>,
    hamiltonian: Option<SpinOperator>,
    dims: Vec<usize>,
    sparse_jumps: Vec<Csr>,
    /// `K = -iH - (1/2) sum_k A_k^H A_k`, so that `L rho = K rho + rho K^H + sum_k A_k rho A_k^H`.
    effective: Csr,
    stiffness: f64,
}

impl Generator {
    pub fn new(jump_ops: Vec<SpinOperator>, hamiltonian: Option<SpinOperator>, dims: Vec<usize>) -> Result<Self> {
        let side: usize = dims.iter().product();
        for op in jump_ops.iter().chain(hamiltonian.iter()) {
            if op.side() != side {
                return Err(Error::DimensionMismatch {
                    expected: side,
                    found: op.side(),
                });
            }
        }
        let mut k = CMatrix::zeros(side, side);
        let mut stiffness = 0.0;
        for a in &jump_ops {
            let m = a.matrix();
            k -= m.adjoint() * m * C64::new(0.5, 0.0);
            stiffness += operator_norm(m).powi(2);
        }
        if let Some(h) = &hamiltonian {
            k -= h.matrix() * C64::new(0.0, 1.0);
            stiffness += operator_norm(h.matrix());
        }
        Ok(Self {
            sparse_jumps: jump_ops.iter().map(|a| Csr::from_dense(a.matrix())).collect(),
            effective: Csr::from_dense(&k),
            jump_ops,
            hamiltonian,
            dims,
            stiffness,
        })
    }

    pub fn zero(dims: Vec<usize>) -> Self {
        Self::new(Vec::new(), None, dims).expect("empty generator is consistent")
    }

    pub fn jump_ops(&self) -> &[SpinOperator] {
        &self.jump_ops
    }

    pub fn hamiltonian(&self) -> Option<&SpinOperator> {
        self.hamiltonian.as_ref()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// `sum_k ||A_k||^2 + ||H||` in spectral norm.
    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }

    /// `0.1 / stiffness`, or infinity for the zero generator.
    pub fn default_step(&self) -> f64 {
        if self.stiffness > 0.0 {
            0.1 / self.stiffness
        } else {
            f64::INFINITY
        }
    }

    /// Applies the generator to an arbitrary square matrix.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let n = self.dim();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.nrows(),
            });
        }
        let rho_h = rho.adjoint();
        // K rho + rho K^H, with rho K^H = (K rho^H)^H.
        let mut out = self.effective.mul_dense(rho) + self.effective.mul_dense(&rho_h).adjoint();
        for a in &self.sparse_jumps {
            // A rho A^H = A (A rho^H)^H
            let half = a.mul_dense(&rho_h).adjoint();
            out += a.mul_dense(&half);
        }
        Ok(out)
    }
}

fn operator_norm(m: &CMatrix) -> f64 {
    if crate::spin_algebra::hermiticity_residual(m) <= 1e-12 {
        m.clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(0.0, |acc: f64, x| acc.max(x.abs()))
    } else {
        m.clone().singular_values().iter().copied().fold(0.0, f64::max)
    }
}

pub fn build_generator(model: &DecoherenceModel, ensembles: &Ensembles) -> Result<Generator> {
    let dims = ensembles.dims();
    let mut jumps = Vec::new();
    for (gamma, ops) in model.coupling_channels(ensembles)? {
        jumps.extend(canonical_jumps(&gamma, &ops)?);
    }
    Generator::new(jumps, model.hamiltonian.clone(), dims)
}

/// `d rho / dt`.
pub fn apply_generator(g: &Generator, rho: &DensityMatrix) -> Result<CMatrix> {
    g.apply(rho.matrix())
}

/// Frobenius norm of `L rho`; zero certifies a stationary state.
pub fn stationary_residual(g: &Generator, rho: &DensityMatrix) -> Result<f64> {
    Ok(apply_generator(g, rho)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{density_from_pure, fock_product_state};

    fn spin(t: u32) -> SpinQuantum {
        SpinQuantum::from_twice(t)
    }

    fn plus_x() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = crate::StateVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]);
        density_from_pure(&psi, &[2]).unwrap()
    }

    fn two_axis(gzx: f64) -> DampingMatrix {
        DampingMatrix::diagonal(0.1, 0.0, 1.0).with_entry(Axis::Z, Axis::X, gzx)
    }

    #[test]
    fn damping_validation() {
        assert!(validate_damping(&DampingMatrix::diagonal(0.0, 0.0, 1.0), AxisSet::Z).is_ok());
        assert!(validate_damping(&two_axis(0.2), AxisSet::XZ).is_ok());
        assert!(matches!(
            validate_damping(&two_axis(0.5), AxisSet::XZ),
            Err(Error::NotPositiveSemidefinite(_))
        ));
        let lopsided = DampingMatrix::new([[1.0, 0.3, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(
            validate_damping(&lopsided, AxisSet::XYZ),
            Err(Error::NonSymmetric(_))
        ));
        assert!(matches!(
            validate_damping(&two_axis(0.2), AxisSet::Z),
            Err(Error::OffAxisCoupling(_))
        ));
    }

    #[test]
    fn jumps_for_diagonal_rates() {
        let ops = angular_momentum_ops(spin(2)).axis_ops();
        let jumps = canonical_jumps(&DampingMatrix::diagonal(0.0, 0.0, 4.0), &ops).unwrap();
        assert_eq!(jumps.len(), 1);
        assert_eq!(jumps[0], ops.z().scaled(2.0));
        let jumps = canonical_jumps(&DampingMatrix::diagonal(0.5, 0.5, 0.5), &ops).unwrap();
        assert_eq!(jumps.len(), 3);
        let jumps = canonical_jumps(&two_axis(0.2), &ops).unwrap();
        assert_eq!(jumps.len(), 2);
        // Rank-one correlations collapse to a single jump.
        let rank_one = DampingMatrix::diagonal(1.0, 0.0, 1.0).with_entry(Axis::X, Axis::Z, 1.0);
        assert_eq!(canonical_jumps(&rank_one, &ops).unwrap().len(), 1);
    }

    #[test]
    fn dephasing_qubit_hand_values() {
        let model = DecoherenceModel::single(DampingMatrix::diagonal(0.0, 0.0, 1.0), AxisSet::Z);
        let g = build_generator(&model, &Ensembles::single(spin(1))).unwrap();
        let rho = plus_x();
        let d = apply_generator(&g, &rho).unwrap();
        assert!((d[(0, 1)] - C64::new(-0.25, 0.0)).norm() < 1e-15);
        assert!((d[(1, 0)] - C64::new(-0.25, 0.0)).norm() < 1e-15);
        assert!(d[(0, 0)].norm() < 1e-15 && d[(1, 1)].norm() < 1e-15);
        assert!(d.trace().norm() < 1e-14);
        let r = stationary_residual(&g, &rho).unwrap();
        assert!((r - 2f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn zero_generator_annihilates_everything() {
        let g = Generator::zero(vec![2, 3]);
        let rho = DensityMatrix::maximally_mixed(&[2, 3]);
        assert_eq!(apply_generator(&g, &rho).unwrap(), CMatrix::zeros(6, 6));
        assert!(g.default_step().is_infinite());
    }

    #[test]
    fn common_bath_at_two_equals_one_sided_independent_bath() {
        let gamma = two_axis(0.2);
        let ens = Ensembles::pair(spin(2), spin(3));
        let common = build_generator(&DecoherenceModel::common(gamma, 2.0, AxisSet::XZ), &ens).unwrap();
        let indep = build_generator(
            &DecoherenceModel::independent(gamma, DampingMatrix::zeros(), AxisSet::XZ),
            &ens,
        )
        .unwrap();
        assert_eq!(common.jump_ops(), indep.jump_ops());
        let common0 = build_generator(&DecoherenceModel::common(gamma, 0.0, AxisSet::XZ), &ens).unwrap();
        let indep0 = build_generator(
            &DecoherenceModel::independent(DampingMatrix::zeros(), gamma, AxisSet::XZ),
            &ens,
        )
        .unwrap();
        assert_eq!(common0.jump_ops(), indep0.jump_ops());
    }

    #[test]
    fn fock_products_are_stationary_for_one_axis_coupling() {
        let (j1, j2) = (spin(2), spin(3));
        let zz = DampingMatrix::diagonal(0.0, 0.0, 1.3);
        let g = build_generator(
            &DecoherenceModel::independent(zz, zz.scaled(0.5), AxisSet::Z),
            &Ensembles::pair(j1, j2),
        )
        .unwrap();
        for m1 in j1.m_values() {
            for m2 in j2.m_values() {
                let psi = fock_product_state(j1, m1, j2, m2).unwrap();
                let rho = density_from_pure(&psi, &[3, 4]).unwrap();
                assert!(stationary_residual(&g, &rho).unwrap() <= 1e-13);
            }
        }
    }

    #[test]
    fn model_mismatch_and_range_errors() {
        let zz = DampingMatrix::diagonal(0.0, 0.0, 1.0);
        let single = DecoherenceModel::single(zz, AxisSet::Z);
        assert!(matches!(
            build_generator(&single, &Ensembles::pair(spin(1), spin(1))),
            Err(Error::ModelMismatch(_))
        ));
        let common = DecoherenceModel::common(zz, 2.5, AxisSet::Z);
        assert_eq!(
            build_generator(&common, &Ensembles::pair(spin(1), spin(1))).unwrap_err(),
            Error::LambdaOutOfRange(2.5)
        );
        let empty = DecoherenceModel::single(DampingMatrix::zeros(), AxisSet::EMPTY);
        assert!(empty.validate().is_err());
        let g = Generator::zero(vec![4]);
        assert!(g.apply(&CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn axis_set_serde() {
        let s: AxisSet = serde_json::from_str(r#"["z","x"]"#).unwrap();
        assert_eq!(s, AxisSet::XZ);
        assert_eq!(serde_json::to_string(&AxisSet::XYZ).unwrap(), r#"["x","y","z"]"#);
        assert_eq!(AxisSet::XZ.to_string(), "xz");
    }
}
