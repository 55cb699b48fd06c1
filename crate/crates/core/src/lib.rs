//! Open-system dynamics of two collective spin ensembles.
//!
//! Each ensemble of `N` spin-1/2 particles is treated as a single spin
//! `j = N/2` in its fully symmetric sector. The crate builds Lindblad
//! generators for ensembles coupled to independent baths or to one common
//! bath, evolves density matrices with a trace-preserving RK4 integrator and
//! evaluates purity-loss rates, entanglement entropies and
//! decoherence-free-subspace certificates.
//!
//! ```
//! use spinbath::prelude::*;
//!
//! let j = SpinQuantum::from_twice(2);
//! let coeffs = coefficient_profile(&Profile::Uniform, j, j).unwrap();
//! let spec = EntangledStateSpec::new(j, j, coeffs).unwrap();
//! let psi = entangled_state(&spec).unwrap();
//!
//! let model = DecoherenceModel::independent(
//!     DampingMatrix::diagonal(0.0, 0.0, 1.0),
//!     DampingMatrix::diagonal(0.0, 0.0, 1.0),
//!     AxisSet::Z,
//! );
//! let report = rate_report(&psi, &model, &Ensembles::pair(j, j)).unwrap();
//! assert!((report.analytic_rate - 8.0 / 3.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod generator;
pub mod integrator;
pub mod spin_algebra;
pub mod states;

mod sparse;

pub use error::{Error, Result};

/// Complex scalar used for every operator and state.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector (a pure state).
pub type StateVector = nalgebra::DVector<C64>;

pub mod prelude {
    pub use crate::diagnostics::*;
    pub use crate::generator::*;
    pub use crate::integrator::*;
    pub use crate::spin_algebra::*;
    pub use crate::states::*;
    pub use crate::{CMatrix, Error, Result, StateVector, C64};
}
