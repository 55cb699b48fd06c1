use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::generator::{AxisSet, Bath, DampingMatrix, DecoherenceModel, Ensembles};
use crate::integrator::EvolveOptions;
use crate::spin_algebra::{
    angular_momentum_ops, check_lambda, coupled_basis_state, embed, Axis, CoupledLevel, HalfInt,
    SpinOperator, SpinQuantum,
};
use crate::states::{
    coefficient_profile, entangled_state, fock_product_state, fock_state, EntangledStateSpec, Profile,
};
use crate::{Error, Result, StateVector, C64};

/// One scenario, read from a single JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelConfig,
    pub ensembles: Ensembles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolveOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dfs: Option<DfsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    #[serde(flatten)]
    pub bath: Bath,
    pub axes: AxisSet,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hamiltonian: Vec<HamiltonianTerm>,
}

/// `coefficient * J_{ensemble, axis}`; ensembles are numbered from 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianTerm {
    #[serde(default = "first_ensemble")]
    pub ensemble: usize,
    pub axis: Axis,
    pub coefficient: f64,
}

fn first_ensemble() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateConfig {
    /// `|m>` of a single ensemble.
    Fock { m: HalfInt },
    /// `|m1>|m2>`.
    FockProduct { m1: HalfInt, m2: HalfInt },
    /// Eigenstate of `J_axis` with eigenvalue `m` (single ensemble).
    Polarized { axis: Axis, m: HalfInt },
    /// `sum_m c_m |m, -m>` with a coefficient profile.
    Entangled(Profile),
    /// Coupled basis state `|L, M>`.
    Coupled {
        #[serde(rename = "L")]
        l: HalfInt,
        #[serde(rename = "M")]
        m: HalfInt,
    },
    /// Explicit amplitudes in the product basis, rescaled to unit norm.
    Amplitudes { amplitudes: Vec<C64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Which damping matrix a `gamma*.ab` sweep edits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaTarget {
    /// The only matrix, or both matrices of an independent-bath model.
    All,
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SweepParameter {
    Lambda,
    /// Sets `j1 = j2 = Ñ` (or `j` for a single ensemble).
    Ntilde,
    /// Replaces the state with `|L, M=0>`.
    CoupledL,
    Gamma { target: GammaTarget, a: Axis, b: Axis },
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => return Ok(SweepParameter::Lambda),
            "Ntilde" | "ntilde" => return Ok(SweepParameter::Ntilde),
            "L" => return Ok(SweepParameter::CoupledL),
            _ => {}
        }
        let bad = || Error::InvalidArgument(format!("unknown sweep parameter {s:?}"));
        let (head, pair) = s.split_once('.').ok_or_else(bad)?;
        let target = match head {
            "gamma" => GammaTarget::All,
            "gamma1" => GammaTarget::First,
            "gamma2" => GammaTarget::Second,
            _ => return Err(bad()),
        };
        let mut chars = pair.chars();
        match (chars.next().and_then(Axis::from_label), chars.next().and_then(Axis::from_label), chars.next()) {
            (Some(a), Some(b), None) => Ok(SweepParameter::Gamma { target, a, b }),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for SweepParameter {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepParameter::Lambda => write!(f, "lambda"),
            SweepParameter::Ntilde => write!(f, "Ntilde"),
            SweepParameter::CoupledL => write!(f, "L"),
            SweepParameter::Gamma { target, a, b } => {
                let head = match target {
                    GammaTarget::All => "gamma",
                    GammaTarget::First => "gamma1",
                    GammaTarget::Second => "gamma2",
                };
                write!(f, "{head}.{a}{b}")
            }
        }
    }
}

impl From<SweepParameter> for String {
    fn from(p: SweepParameter) -> String {
        p.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfsConfig {
    pub candidates: Vec<DfsCandidate>,
    /// Also certify each candidate family as a subspace (all coherences).
    #[serde(default)]
    pub subspace: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DfsCandidate {
    /// Every product Fock state.
    FockBasis,
    /// `|L=0, M=0>` of two equal spins.
    Singlet,
    /// Every coupled level `|L, M>`.
    CoupledBasis,
    Coupled {
        #[serde(rename = "L")]
        l: HalfInt,
        #[serde(rename = "M")]
        m: HalfInt,
    },
    /// The scenario's `state` block.
    State,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(compact.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.decoherence_model()?.validate()?;
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::InvalidArgument("sweep has no values".into()));
            }
            match sweep.parameter {
                SweepParameter::Lambda => {
                    if !matches!(self.model.bath, Bath::Common { .. }) {
                        return Err(Error::InvalidArgument("lambda sweep needs a common bath".into()));
                    }
                    for v in &sweep.values {
                        check_lambda(*v)?;
                    }
                }
                SweepParameter::Ntilde => {
                    for v in &sweep.values {
                        SpinQuantum::new(*v)?;
                    }
                }
                SweepParameter::CoupledL => {
                    for v in &sweep.values {
                        HalfInt::from_f64(*v)?;
                    }
                }
                SweepParameter::Gamma { .. } => {}
            }
        }
        if let Some(evo) = &self.evolution {
            if evo.t_final.is_nan() || evo.t_final < 0.0 || evo.stride == 0 {
                return Err(Error::InvalidArgument("evolution block".into()));
            }
        }
        Ok(())
    }

    pub fn decoherence_model(&self) -> Result<DecoherenceModel> {
        let mut model = DecoherenceModel {
            bath: self.model.bath.clone(),
            axes: self.model.axes,
            hamiltonian: None,
        };
        if !self.model.hamiltonian.is_empty() {
            model.hamiltonian = Some(self.hamiltonian()?);
        }
        Ok(model)
    }

    fn hamiltonian(&self) -> Result<SpinOperator> {
        let dims = self.ensembles.dims();
        let spins: Vec<SpinQuantum> = match self.ensembles {
            Ensembles::Single { j } => vec![j],
            Ensembles::Pair { j1, j2 } => vec![j1, j2],
        };
        let mut h = SpinOperator::zeros(&dims);
        for term in &self.model.hamiltonian {
            let slot = term
                .ensemble
                .checked_sub(1)
                .filter(|s| *s < spins.len())
                .ok_or_else(|| Error::InvalidArgument(format!("ensemble {}", term.ensemble)))?;
            let am = angular_momentum_ops(spins[slot]).axis_ops();
            let lifted = embed(am.get(term.axis), slot, &dims)?;
            h = h.lincomb(1.0, &lifted, term.coefficient)?;
        }
        Ok(h)
    }

    /// The initial pure state and, when it is of the `|m, -m>` family, its coefficients.
    pub fn initial_state(&self) -> Result<(StateVector, Option<EntangledStateSpec>)> {
        let state = self
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("scenario has no state block".into()))?;
        build_state(state, &self.ensembles)
    }
}

fn need_pair(ens: &Ensembles) -> Result<(SpinQuantum, SpinQuantum)> {
    match *ens {
        Ensembles::Pair { j1, j2 } => Ok((j1, j2)),
        Ensembles::Single { .. } => Err(Error::ModelMismatch("state needs two ensembles".into())),
    }
}

fn need_single(ens: &Ensembles) -> Result<SpinQuantum> {
    match *ens {
        Ensembles::Single { j } => Ok(j),
        Ensembles::Pair { .. } => Err(Error::ModelMismatch("state needs a single ensemble".into())),
    }
}

pub fn build_state(state: &StateConfig, ens: &Ensembles) -> Result<(StateVector, Option<EntangledStateSpec>)> {
    match state {
        StateConfig::Fock { m } => Ok((fock_state(need_single(ens)?, *m)?, None)),
        StateConfig::FockProduct { m1, m2 } => {
            let (j1, j2) = need_pair(ens)?;
            Ok((fock_product_state(j1, *m1, j2, *m2)?, None))
        }
        StateConfig::Polarized { axis, m } => Ok((polarized_state(need_single(ens)?, *axis, *m)?, None)),
        StateConfig::Entangled(profile) => {
            let (j1, j2) = need_pair(ens)?;
            let spec = EntangledStateSpec::new(j1, j2, coefficient_profile(profile, j1, j2)?)?;
            Ok((entangled_state(&spec)?, Some(spec)))
        }
        StateConfig::Coupled { l, m } => {
            let (j1, j2) = need_pair(ens)?;
            Ok((coupled_basis_state(j1, j2, CoupledLevel::new(*l, *m)?)?, None))
        }
        StateConfig::Amplitudes { amplitudes } => {
            if amplitudes.len() != ens.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ens.dim(),
                    found: amplitudes.len(),
                });
            }
            let v = StateVector::from_vec(amplitudes.clone());
            let n = v.norm();
            if n == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok((v / C64::new(n, 0.0), None))
        }
    }
}

/// Eigenvector of `J_axis` with eigenvalue `m`; the first non-negligible
/// amplitude is made real positive.
pub fn polarized_state(j: SpinQuantum, axis: Axis, m: HalfInt) -> Result<StateVector> {
    if !j.contains(m) {
        return Err(Error::InvalidQuantumNumbers(format!("m = {m} for j = {j}")));
    }
    let am = angular_momentum_ops(j).axis_ops();
    let eig = am.get(axis).matrix().clone().symmetric_eigen();
    let k = (0..eig.eigenvalues.len())
        .min_by(|a, b| {
            let da = (eig.eigenvalues[*a] - m.value()).abs();
            let db = (eig.eigenvalues[*b] - m.value()).abs();
            da.total_cmp(&db)
        })
        .expect("spin has at least one state");
    let mut v: StateVector = eig.eigenvectors.column(k).into_owned();
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-8).copied() {
        let phase = first.conj() / first.norm();
        v *= phase;
    }
    let n = v.norm();
    Ok(v / C64::new(n, 0.0))
}

impl GammaTarget {
    fn apply(self, bath: &mut Bath, a: Axis, b: Axis, value: f64) -> Result<()> {
        let set = |g: &mut DampingMatrix| *g = g.with_entry(a, b, value);
        match (bath, self) {
            (Bath::Single { gamma }, GammaTarget::All) | (Bath::Common { gamma, .. }, GammaTarget::All) => set(gamma),
            (Bath::Independent { gamma1, gamma2 }, GammaTarget::All) => {
                set(gamma1);
                set(gamma2);
            }
            (Bath::Independent { gamma1, .. }, GammaTarget::First) => set(gamma1),
            (Bath::Independent { gamma2, .. }, GammaTarget::Second) => set(gamma2),
            _ => {
                return Err(Error::InvalidArgument(
                    "gamma1/gamma2 sweeps need an independent-bath model".into(),
                ))
            }
        }
        Ok(())
    }
}

impl ScenarioConfig {
    /// Copy of the scenario with the sweep parameter set to `value`.
    pub fn at_sweep_point(&self, parameter: SweepParameter, value: f64) -> Result<ScenarioConfig> {
        let mut cfg = self.clone();
        cfg.sweep = None;
        match parameter {
            SweepParameter::Lambda => match &mut cfg.model.bath {
                Bath::Common { lambda, .. } => {
                    check_lambda(value)?;
                    *lambda = value;
                }
                _ => return Err(Error::InvalidArgument("lambda sweep needs a common bath".into())),
            },
            SweepParameter::Ntilde => {
                let j = SpinQuantum::new(value)?;
                cfg.ensembles = match cfg.ensembles {
                    Ensembles::Single { .. } => Ensembles::single(j),
                    Ensembles::Pair { .. } => Ensembles::pair(j, j),
                };
            }
            SweepParameter::CoupledL => {
                cfg.state = Some(StateConfig::Coupled {
                    l: HalfInt::from_f64(value)?,
                    m: HalfInt::ZERO,
                });
            }
            SweepParameter::Gamma { target, a, b } => target.apply(&mut cfg.model.bath, a, b, value)?,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
