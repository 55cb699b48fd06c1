//! Angular-momentum operators for one or two collective spins.
//!
//! Single-ensemble bases are ordered by descending magnetic number
//! (`m = j, j-1, ..., -j`). The two-ensemble product basis is lexicographic
//! in `(m1, m2)`, so the amplitude of `|m1, m2>` sits at
//! `index(j1, m1) * (2 j2 + 1) + index(j2, m2)`.

mod clebsch;
mod half;

pub use clebsch::{clebsch_gordan, coupled_basis_state, CoupledLevel};
pub use half::{HalfInt, SpinQuantum};

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{CMatrix, Error, Result, StateVector, C64};

/// Spatial component of a spin operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Self::ALL.get(i).copied()
    }

    pub fn label(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    pub fn from_label(c: char) -> Option<Axis> {
        match c.to_ascii_lowercase() {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Dense operator on a (possibly composite) Hilbert space.
///
/// `dims` lists the subsystem dimensions; their product is the matrix side.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl SpinOperator {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let side: usize = dims.iter().product();
        if dims.is_empty() || side != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: side,
            });
        }
        Ok(Self { matrix, dims })
    }

    /// Single-factor operator whose dims is just its side.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, vec![n])
    }

    pub fn identity(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            matrix: CMatrix::identity(n, n),
            dims: dims.to_vec(),
        }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let n = dims.iter().product();
        Self {
            matrix: CMatrix::zeros(n, n),
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

    /// Largest entry of `|A - A^H|`.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
            dims: self.dims.clone(),
        }
    }

    /// `a * self + b * other`.
    pub fn lincomb(&self, a: f64, other: &SpinOperator, b: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.side(),
                found: other.side(),
            });
        }
        let matrix = self.matrix.map(|z| z * a) + other.matrix.map(|z| z * b);
        Ok(Self {
            matrix,
            dims: self.dims.clone(),
        })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.len() != self.side() {
            return Err(Error::DimensionMismatch {
                expected: self.side(),
                found: psi.len(),
            });
        }
        Ok(&self.matrix * psi)
    }

    /// `<psi| A |psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        let v = self.apply(psi)?;
        Ok(psi.dotc(&v))
    }
}

pub(crate) fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for k in i..n {
            worst = worst.max((m[(i, k)] - m[(k, i)].conj()).norm());
        }
    }
    worst
}

/// The three Cartesian components of a vector operator.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisOps {
    ops: [SpinOperator; 3],
}

impl AxisOps {
    pub fn new(x: SpinOperator, y: SpinOperator, z: SpinOperator) -> Self {
        Self { ops: [x, y, z] }
    }

    pub fn get(&self, axis: Axis) -> &SpinOperator {
        &self.ops[axis.index()]
    }

    pub fn x(&self) -> &SpinOperator {
        &self.ops[0]
    }

    pub fn y(&self) -> &SpinOperator {
        &self.ops[1]
    }

    pub fn z(&self) -> &SpinOperator {
        &self.ops[2]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Axis, &SpinOperator)> {
        Axis::ALL.into_iter().zip(self.ops.iter())
    }

    pub fn dims(&self) -> &[usize] {
        self.ops[0].dims()
    }

    /// `A_x^2 + A_y^2 + A_z^2`.
    pub fn squared_norm_operator(&self) -> SpinOperator {
        let matrix = self
            .ops
            .iter()
            .map(|op| op.matrix() * op.matrix())
            .fold(CMatrix::zeros(self.ops[0].side(), self.ops[0].side()), |acc, m| acc + m);
        SpinOperator {
            matrix,
            dims: self.dims().to_vec(),
        }
    }

    pub fn lincomb(&self, a: f64, other: &AxisOps, b: f64) -> Result<AxisOps> {
        Ok(AxisOps::new(
            self.ops[0].lincomb(a, &other.ops[0], b)?,
            self.ops[1].lincomb(a, &other.ops[1], b)?,
            self.ops[2].lincomb(a, &other.ops[2], b)?,
        ))
    }
}

/// `J_x, J_y, J_z` and `J^2` for one spin.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularMomentum {
    pub jx: SpinOperator,
    pub jy: SpinOperator,
    pub jz: SpinOperator,
    pub jsq: SpinOperator,
}

impl AngularMomentum {
    pub fn axis_ops(&self) -> AxisOps {
        AxisOps::new(self.jx.clone(), self.jy.clone(), self.jz.clone())
    }
}

/// Spin-`j` operators in the descending `m` basis.
///
/// The ladder elements are `<m+1|J+|m> = sqrt(j(j+1) - m(m+1))`;
/// `J_x = (J+ + J-)/2` and `J_y = (J+ - J-)/(2i)`.
pub fn angular_momentum_ops(j: SpinQuantum) -> AngularMomentum {
    let n = j.dim();
    let jj = j.value() * (j.value() + 1.0);
    let mut jp = DMatrix::<f64>::zeros(n, n);
    let mut jz = CMatrix::zeros(n, n);
    for (row, m) in j.m_values().enumerate() {
        let m = m.value();
        jz[(row, row)] = C64::new(m, 0.0);
        // J+ maps index row+1 (m-1) onto index row (m).
        if row + 1 < n {
            let lower = m - 1.0;
            jp[(row, row + 1)] = (jj - lower * (lower + 1.0)).sqrt();
        }
    }
    let mut jx = CMatrix::zeros(n, n);
    let mut jy = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let plus = jp[(r, c)];
            let minus = jp[(c, r)];
            jx[(r, c)] = C64::new(0.5 * (plus + minus), 0.0);
            // (J+ - J-)/(2i) = -i/2 (J+ - J-)
            jy[(r, c)] = C64::new(0.0, -0.5 * (plus - minus));
        }
    }
    let dims = vec![n];
    AngularMomentum {
        jx: SpinOperator { matrix: jx, dims: dims.clone() },
        jy: SpinOperator { matrix: jy, dims: dims.clone() },
        jz: SpinOperator { matrix: jz, dims: dims.clone() },
        jsq: SpinOperator {
            matrix: CMatrix::identity(n, n) * C64::new(jj, 0.0),
            dims,
        },
    }
}

/// Lifts `op` into a tensor product so that it acts on factor `slot`.
pub fn embed(op: &SpinOperator, slot: usize, dims: &[usize]) -> Result<SpinOperator> {
    let target = *dims.get(slot).ok_or_else(|| {
        Error::InvalidArgument(format!("slot {slot} out of range for {} factors", dims.len()))
    })?;
    if op.side() != target {
        return Err(Error::DimensionMismatch {
            expected: target,
            found: op.side(),
        });
    }
    let left: usize = dims[..slot].iter().product();
    let right: usize = dims[slot + 1..].iter().product();
    let mut matrix = op.matrix().clone();
    if left > 1 {
        matrix = CMatrix::identity(left, left).kronecker(&matrix);
    }
    if right > 1 {
        matrix = matrix.kronecker(&CMatrix::identity(right, right));
    }
    Ok(SpinOperator {
        matrix,
        dims: dims.to_vec(),
    })
}

/// `J_{slot,alpha}` for both factors of the `(j1, j2)` product space.
pub fn embedded_ops(j1: SpinQuantum, j2: SpinQuantum, slot: usize) -> Result<AxisOps> {
    let dims = [j1.dim(), j2.dim()];
    let spin = match slot {
        0 => j1,
        1 => j2,
        _ => return Err(Error::InvalidArgument(format!("slot {slot} for a two-ensemble space"))),
    };
    let am = angular_momentum_ops(spin);
    Ok(AxisOps::new(
        embed(&am.jx, slot, &dims)?,
        embed(&am.jy, slot, &dims)?,
        embed(&am.jz, slot, &dims)?,
    ))
}

pub fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=2.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// Common-bath coupling operators `L_a = [lambda J_{1a} + (2 - lambda) J_{2a}] / 2`.
///
/// At `lambda = 1` these are half the total spin `J_1 + J_2`; see
/// [`total_spin_ops`] for the unscaled operators.
pub fn composite_coupling_ops(j1: SpinQuantum, j2: SpinQuantum, lambda: f64) -> Result<AxisOps> {
    check_lambda(lambda)?;
    let first = embedded_ops(j1, j2, 0)?;
    let second = embedded_ops(j1, j2, 1)?;
    first.lincomb(0.5 * lambda, &second, 0.5 * (2.0 - lambda))
}

/// `J_{1a} + J_{2a}`.
pub fn total_spin_ops(j1: SpinQuantum, j2: SpinQuantum) -> Result<AxisOps> {
    let first = embedded_ops(j1, j2, 0)?;
    let second = embedded_ops(j1, j2, 1)?;
    first.lincomb(1.0, &second, 1.0)
}

/// Position of `m` in the descending basis of spin `j`.
pub fn basis_index(j: SpinQuantum, m: HalfInt) -> Result<usize> {
    j.index_of(m).ok_or_else(|| {
        Error::InvalidQuantumNumbers(format!("m = {m} is not a projection of j = {}", j.as_half()))
    })
}

/// Index of `|m1, m2>` in the lexicographic product basis.
pub fn product_index(j1: SpinQuantum, m1: HalfInt, j2: SpinQuantum, m2: HalfInt) -> Result<usize> {
    Ok(basis_index(j1, m1)? * j2.dim() + basis_index(j2, m2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn spin_half_matrices() {
        let am = angular_momentum_ops(SpinQuantum::from_twice(1));
        assert_eq!(am.jz.matrix()[(0, 0)], c(0.5));
        assert_eq!(am.jz.matrix()[(1, 1)], c(-0.5));
        assert_eq!(am.jx.matrix()[(0, 1)], c(0.5));
        assert_eq!(am.jx.matrix()[(1, 0)], c(0.5));
        assert_eq!(am.jx.matrix()[(0, 0)], c(0.0));
        assert_eq!(am.jy.matrix()[(0, 1)], C64::new(0.0, -0.5));
    }

    #[test]
    fn spin_one_casimir() {
        let am = angular_momentum_ops(SpinQuantum::from_twice(2));
        assert_eq!(am.jsq.matrix(), &(CMatrix::identity(3, 3) * c(2.0)));
        let sum = am.axis_ops().squared_norm_operator();
        assert!(max_abs(&(sum.matrix() - am.jsq.matrix())) < 1e-12);
    }

    #[test]
    fn embed_examples() {
        let am = angular_momentum_ops(SpinQuantum::from_twice(1));
        let lifted = embed(&am.jz, 0, &[2, 2]).unwrap();
        let expect = [0.5, 0.5, -0.5, -0.5];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(lifted.matrix()[(i, i)], c(*e));
        }
        let id = embed(&SpinOperator::identity(&[2]), 1, &[2, 2]).unwrap();
        assert_eq!(id.matrix(), &CMatrix::identity(4, 4));
        let jx = embed(&am.jx, 0, &[2, 2]).unwrap();
        assert_eq!(jx.matrix().trace(), c(0.0));
    }

    #[test]
    fn embed_rejects_mismatch() {
        let am = angular_momentum_ops(SpinQuantum::from_twice(2));
        assert!(matches!(
            embed(&am.jz, 0, &[2, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(embed(&am.jz, 2, &[3, 3]).is_err());
    }

    #[test]
    fn composite_singlet_annihilated_at_balanced_coupling() {
        let h = SpinQuantum::from_twice(1);
        let ops = composite_coupling_ops(h, h, 1.0).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let singlet = StateVector::from_vec(vec![c(0.0), c(s), c(-s), c(0.0)]);
        for (_, op) in ops.iter() {
            assert!(op.apply(&singlet).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn composite_limits_are_single_ensemble_embeddings() {
        let (j1, j2) = (SpinQuantum::from_twice(2), SpinQuantum::from_twice(3));
        let at_two = composite_coupling_ops(j1, j2, 2.0).unwrap();
        let at_zero = composite_coupling_ops(j1, j2, 0.0).unwrap();
        let first = embedded_ops(j1, j2, 0).unwrap();
        let second = embedded_ops(j1, j2, 1).unwrap();
        for axis in Axis::ALL {
            assert_eq!(at_two.get(axis).matrix(), first.get(axis).matrix());
            assert_eq!(at_zero.get(axis).matrix(), second.get(axis).matrix());
        }
    }

    #[test]
    fn composite_expectation_at_lambda_one_and_a_half() {
        let h = SpinQuantum::from_twice(1);
        let ops = composite_coupling_ops(h, h, 1.5).unwrap();
        let idx = product_index(h, HalfInt::from_twice(1), h, HalfInt::from_twice(-1)).unwrap();
        let mut psi = StateVector::zeros(4);
        psi[idx] = c(1.0);
        let lz = ops.z().expectation(&psi).unwrap();
        assert!((lz.re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn composite_rejects_out_of_range_lambda() {
        let h = SpinQuantum::from_twice(1);
        assert_eq!(
            composite_coupling_ops(h, h, 2.5).unwrap_err(),
            Error::LambdaOutOfRange(2.5)
        );
        assert!(composite_coupling_ops(h, h, -0.1).is_err());
    }

    fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
        a * b - b * a
    }

    proptest! {
        #[test]
        fn commutation_relations(twice_j in 0u32..=30) {
            let am = angular_momentum_ops(SpinQuantum::from_twice(twice_j));
            let i = C64::new(0.0, 1.0);
            let (x, y, z) = (am.jx.matrix(), am.jy.matrix(), am.jz.matrix());
            prop_assert!(max_abs(&(commutator(x, y) - z * i)) <= 1e-12);
            prop_assert!(max_abs(&(commutator(y, z) - x * i)) <= 1e-12);
            prop_assert!(max_abs(&(commutator(z, x) - y * i)) <= 1e-12);
            let casimir = am.axis_ops().squared_norm_operator();
            prop_assert!(max_abs(&(casimir.matrix() - am.jsq.matrix())) <= 1e-12);
            prop_assert!(am.jx.is_hermitian(1e-12) && am.jy.is_hermitian(1e-12));
        }

        #[test]
        fn embedding_repeats_spectrum(twice_a in 0u32..=6, twice_b in 0u32..=6, slot in 0usize..2) {
            let (ja, jb) = (SpinQuantum::from_twice(twice_a), SpinQuantum::from_twice(twice_b));
            let ops = embedded_ops(ja, jb, slot).unwrap();
            let (own, other) = if slot == 0 { (ja, jb) } else { (jb, ja) };
            for (_, op) in ops.iter() {
                prop_assert!(op.is_hermitian(1e-12));
                let mut eig: Vec<f64> = op.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
                eig.sort_by(f64::total_cmp);
                let mut expect: Vec<f64> = own
                    .m_values()
                    .flat_map(|m| std::iter::repeat_n(m.value(), other.dim()))
                    .collect();
                expect.sort_by(f64::total_cmp);
                for (a, b) in eig.iter().zip(&expect) {
                    prop_assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }
}
